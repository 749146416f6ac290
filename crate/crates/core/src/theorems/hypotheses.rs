//! Validated hypothesis bundles.

use thiserror::Error;

use crate::operator::MatrixOperator;
use crate::rational::format_rational;
use crate::report::HypothesisCheck;
use crate::LatticeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("hypotheses fail: {}", describe(.0))]
    Unmet(Vec<HypothesisCheck>),
    #[error("a family needs at least one pair and one base exponent per pair ({pairs} pairs, {exponents} exponents)")]
    Shape { pairs: usize, exponents: usize },
    #[error("base exponents must be at least 1")]
    ZeroExponent,
}

fn describe(checks: &[HypothesisCheck]) -> String {
    checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| match &c.value {
            Some(v) => format!("{} (value {})", c.name, format_rational(v)),
            None => c.name.clone(),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Positivity and `‖A‖ ≤ 1`, labelled with `name`.
pub(crate) fn positive_contraction_checks(name: &str, op: &MatrixOperator) -> [HypothesisCheck; 2] {
    [
        HypothesisCheck::flag(format!("{name} is positive"), op.is_positive()),
        HypothesisCheck::valued(
            format!("‖{name}‖ ≤ 1"),
            op.is_contraction_l1(),
            op.operator_norm_l1(),
        ),
    ]
}

pub(crate) fn dominance_check(
    big: &str,
    small: &str,
    s: &MatrixOperator,
    t: &MatrixOperator,
) -> Result<HypothesisCheck, LatticeError> {
    Ok(HypothesisCheck::flag(format!("{small} ≤ {big}"), s.dominates(t)?))
}

pub(crate) fn commute_check(
    label: &str,
    a: &MatrixOperator,
    b: &MatrixOperator,
) -> Result<HypothesisCheck, LatticeError> {
    Ok(HypothesisCheck::flag(label.to_string(), a.commutes(b)?))
}

/// Two positive contractions with `T ≤ S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatedPair {
    s: MatrixOperator,
    t: MatrixOperator,
}

impl DominatedPair {
    pub fn new(s: MatrixOperator, t: MatrixOperator) -> Result<Self, BundleError> {
        let mut checks = Vec::with_capacity(5);
        checks.extend(positive_contraction_checks("S", &s));
        checks.extend(positive_contraction_checks("T", &t));
        checks.push(dominance_check("S", "T", &s, &t)?);
        if checks.iter().any(|c| !c.holds) {
            return Err(BundleError::Unmet(checks));
        }
        Ok(Self { s, t })
    }

    pub fn s(&self) -> &MatrixOperator {
        &self.s
    }

    pub fn t(&self) -> &MatrixOperator {
        &self.t
    }

    pub fn into_parts(self) -> (MatrixOperator, MatrixOperator) {
        (self.s, self.t)
    }
}

/// Dominated pairs `(S_i, T_i)` whose `S`s commute with each other and whose
/// `T`s commute with each other, plus a base exponent `n_{i,0} ≥ 1` per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingFamily {
    pairs: Vec<DominatedPair>,
    base_exponents: Vec<u64>,
}

impl CommutingFamily {
    pub fn new(pairs: Vec<DominatedPair>, base_exponents: Vec<u64>) -> Result<Self, BundleError> {
        if pairs.is_empty() || pairs.len() != base_exponents.len() {
            return Err(BundleError::Shape {
                pairs: pairs.len(),
                exponents: base_exponents.len(),
            });
        }
        if base_exponents.contains(&0) {
            return Err(BundleError::ZeroExponent);
        }
        let checks = commutation_checks(&pairs)?;
        if checks.iter().any(|c| !c.holds) {
            return Err(BundleError::Unmet(checks));
        }
        Ok(Self {
            pairs,
            base_exponents,
        })
    }

    pub fn pairs(&self) -> &[DominatedPair] {
        &self.pairs
    }

    pub fn base_exponents(&self) -> &[u64] {
        &self.base_exponents
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `S_iS_j = S_jS_i` and `T_iT_j = T_jT_i` for every `i < j`.
pub(crate) fn commutation_checks(pairs: &[DominatedPair]) -> Result<Vec<HypothesisCheck>, LatticeError> {
    let mut checks = Vec::new();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (a, b) = (i + 1, j + 1);
            checks.push(commute_check(
                &format!("S{a}S{b} = S{b}S{a}"),
                pairs[i].s(),
                pairs[j].s(),
            )?);
            checks.push(commute_check(
                &format!("T{a}T{b} = T{b}T{a}"),
                pairs[i].t(),
                pairs[j].t(),
            )?);
        }
    }
    Ok(checks)
}
