//! The zero-two law: norm traces of `Z^d(T^{n+k} − T^n)`, the meet lemma and
//! the search for `(d, n₀)` certificates.
//!
//! Since `Z` and `T` commute, `Z^d(T^{n+1+k} − T^{n+1}) = T·Z^d(T^{n+k} − T^n)`
//! and `‖T‖ ≤ 1`, so every trace is nonincreasing in `n`. A single index
//! below `ε` is therefore a certificate for the whole tail.

use serde::Serialize;

use crate::calculus::{is_lattice_homomorphism, operator_meet};
use crate::operator::MatrixOperator;
use crate::rational::{format_rational, int, Rational};
use crate::report::{ConclusionLedger, Guarantee, HypothesisCheck, NormRecord, Report, Verdict};

use super::hypotheses::{commute_check, positive_contraction_checks};
use super::EngineError;

/// Exact norms `a_n = ‖Z^d(T^{n+k} − T^n)‖` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroTwoTrace {
    pub z: MatrixOperator,
    pub t: MatrixOperator,
    pub k: u64,
    pub d: u64,
    pub records: Vec<(u64, Rational)>,
}

impl ZeroTwoTrace {
    pub fn norms(&self) -> impl Iterator<Item = &Rational> {
        self.records.iter().map(|(_, a)| a)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

/// Hypotheses shared by the trace and the certificate search.
fn commuting_contractions(z: &MatrixOperator, t: &MatrixOperator) -> Result<Vec<HypothesisCheck>, EngineError> {
    let mut checks = Vec::new();
    checks.extend(positive_contraction_checks("Z", z));
    checks.extend(positive_contraction_checks("T", t));
    checks.push(commute_check("ZT = TZ", z, t)?);
    Ok(checks)
}

fn lattice_contraction_checks(z: &MatrixOperator) -> [HypothesisCheck; 2] {
    let cert = is_lattice_homomorphism(z);
    [
        HypothesisCheck::flag("Z is a lattice homomorphism", cert.verdict),
        HypothesisCheck::flag("Z is order continuous", cert.order_continuous)
            .with_note("automatic in finite dimension"),
    ]
}

/// `Z^d(T^k − I)`, the trace operator at `n = 0`.
fn trace_seed(z: &MatrixOperator, t: &MatrixOperator, k: u64, d: u64) -> Result<MatrixOperator, EngineError> {
    let id = MatrixOperator::identity(t.space());
    Ok(z.power(d).compose(&t.power(k).try_sub(&id)?)?)
}

pub fn zero_two_trace(
    z: &MatrixOperator,
    t: &MatrixOperator,
    k: u64,
    d: u64,
    n_max: u64,
) -> Result<ZeroTwoTrace, EngineError> {
    if k == 0 || d == 0 {
        return Err(EngineError::InvalidArgument("k and d must be at least 1".into()));
    }
    let checks = commuting_contractions(z, t)?;
    if checks.iter().any(|c| !c.holds) {
        return Err(EngineError::Precondition(checks));
    }
    let mut current = trace_seed(z, t, k, d)?;
    let mut records = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        if n > 0 {
            current = current.compose(t)?;
        }
        records.push((n, current.operator_norm_l1()));
    }
    Ok(ZeroTwoTrace {
        z: z.clone(),
        t: t.clone(),
        k,
        d,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma32Report {
    pub report: Report,
    /// `‖Z(T^{m+k} − T^m)‖`
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub premise_norm: Rational,
    /// `‖Z(T^{m+k} − T^{m+k} ∧ T^m)‖`
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub conclusion_norm: Rational,
    pub premise_holds: bool,
    pub conclusion_holds: bool,
}

/// For a lattice contraction `Z` commuting with a positive contraction `T`:
/// `‖Z(T^{m+k} − T^m)‖ < 2` implies `‖Z(T^{m+k} − T^{m+k} ∧ T^m)‖ < 1`.
pub fn check_lemma_3_2(
    z: &MatrixOperator,
    t: &MatrixOperator,
    m: u64,
    k: u64,
) -> Result<Lemma32Report, EngineError> {
    if k == 0 {
        return Err(EngineError::InvalidArgument("k must be at least 1".into()));
    }
    let hi = m + k;
    let statement =
        format!("meet lemma: ‖Z(T^{hi} − T^{m})‖ < 2 implies ‖Z(T^{hi} − T^{hi} ∧ T^{m})‖ < 1");

    let mut hypotheses = lattice_contraction_checks(z).to_vec();
    hypotheses.extend(commuting_contractions(z, t)?);

    let high = t.power(m + k);
    let low = t.power(m);
    let premise_norm = z.compose(&high.try_sub(&low)?)?.operator_norm_l1();
    let meet = operator_meet(&high, &low)?;
    let conclusion_norm = z.compose(&high.try_sub(&meet)?)?.operator_norm_l1();
    let premise_holds = premise_norm < int(2);
    let conclusion_holds = conclusion_norm < int(1);

    hypotheses.push(HypothesisCheck::valued(
        format!("‖Z(T^{} − T^{m})‖ < 2", m + k),
        premise_holds,
        premise_norm.clone(),
    ));
    let ledger = ConclusionLedger {
        claim: format!("‖Z(T^{0} − T^{0} ∧ T^{m})‖ < 1", m + k),
        range: format!("m = {m}, k = {k}"),
        guarantee: Guarantee::PrefixOnly,
        points_checked: 1,
        max_norm: conclusion_norm.clone(),
        first_failure: (!conclusion_holds).then(|| NormRecord {
            index: vec![m, k],
            norm: conclusion_norm.clone(),
        }),
        records: Vec::new(),
    };
    let verdict = if hypotheses.iter().any(|h| !h.holds) {
        Verdict::HypothesisUnmet
    } else if conclusion_holds {
        Verdict::Verified
    } else {
        Verdict::Falsified
    };
    Ok(Lemma32Report {
        report: Report {
            statement,
            hypotheses,
            conclusion: Some(ledger),
            verdict,
        },
        premise_norm,
        conclusion_norm,
        premise_holds,
        conclusion_holds,
    })
}

/// Search limits for [`find_epsilon_certificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchCaps {
    pub max_d: u64,
    pub max_n0: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_d: 8,
            max_n0: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `‖Z^d(T^{n₀+k} − T^{n₀})‖ < ε`, hence for every `n ≥ n₀`.
    Found {
        d: u64,
        n0: u64,
        #[serde(serialize_with = "crate::rational::serde_str::serialize")]
        norm: Rational,
    },
    /// Nothing below `ε` within the caps. Not a counterexample.
    Exhausted {
        caps: SearchCaps,
        #[serde(serialize_with = "crate::rational::serde_str::serialize")]
        smallest_norm: Rational,
    },
    HypothesisUnmet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateSearch {
    pub hypotheses: Vec<HypothesisCheck>,
    pub certificate: Certificate,
    pub k: u64,
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub epsilon: Rational,
}

impl CertificateSearch {
    pub fn verdict(&self) -> Verdict {
        match self.certificate {
            Certificate::Found { .. } => Verdict::Verified,
            Certificate::Exhausted { .. } => Verdict::Exhausted,
            Certificate::HypothesisUnmet => Verdict::HypothesisUnmet,
        }
    }

    pub fn to_report(&self) -> Report {
        let eps = format_rational(&self.epsilon);
        let statement = format!(
            "zero-two certificate: find d, n0 with ‖Z^d(T^(n+{}) − T^n)‖ < {eps} for all n ≥ n0",
            self.k
        );
        let conclusion = match &self.certificate {
            Certificate::Found { d, n0, norm } => Some(ConclusionLedger {
                claim: format!("‖Z^{d}(T^(n+{}) − T^n)‖ < {eps} for n ≥ {n0}", self.k),
                range: format!("d = {d}, n0 = {n0}"),
                guarantee: Guarantee::TailByMonotonicity,
                points_checked: 1,
                max_norm: norm.clone(),
                first_failure: None,
                records: vec![NormRecord {
                    index: vec![*d, *n0],
                    norm: norm.clone(),
                }],
            }),
            Certificate::Exhausted { caps, smallest_norm } => Some(ConclusionLedger {
                claim: format!("no (d, n0) with d ≤ {}, n0 ≤ {} reaches < {eps}", caps.max_d, caps.max_n0),
                range: format!("d in [1, {}], n0 in [0, {}]", caps.max_d, caps.max_n0),
                guarantee: Guarantee::PrefixOnly,
                points_checked: 0,
                max_norm: smallest_norm.clone(),
                first_failure: None,
                records: Vec::new(),
            }),
            Certificate::HypothesisUnmet => None,
        };
        Report {
            statement,
            hypotheses: self.hypotheses.clone(),
            conclusion,
            verdict: self.verdict(),
        }
    }
}

/// Searches `(d, n₀)` in lexicographic order for `‖Z^d(T^{n₀+k} − T^{n₀})‖ < ε`
/// under `‖Z(T^{m+k} − T^m)‖ < 2`.
pub fn find_epsilon_certificate(
    z: &MatrixOperator,
    t: &MatrixOperator,
    m: u64,
    k: u64,
    epsilon: &Rational,
    caps: SearchCaps,
) -> Result<CertificateSearch, EngineError> {
    if k == 0 {
        return Err(EngineError::InvalidArgument("k must be at least 1".into()));
    }
    if caps.max_d == 0 {
        return Err(EngineError::InvalidArgument("the d cap must be at least 1".into()));
    }
    let mut hypotheses = lattice_contraction_checks(z).to_vec();
    hypotheses.extend(commuting_contractions(z, t)?);
    let premise = z.compose(&t.power(m + k).try_sub(&t.power(m))?)?.operator_norm_l1();
    hypotheses.push(HypothesisCheck::valued(
        format!("‖Z(T^{} − T^{m})‖ < 2", m + k),
        premise < int(2),
        premise,
    ));
    hypotheses.push(HypothesisCheck::valued("ε > 0", *epsilon > int(0), epsilon.clone()));

    let finish = |hypotheses, certificate| CertificateSearch {
        hypotheses,
        certificate,
        k,
        epsilon: epsilon.clone(),
    };
    if hypotheses.iter().any(|h: &HypothesisCheck| !h.holds) {
        return Ok(finish(hypotheses, Certificate::HypothesisUnmet));
    }

    let mut smallest: Option<Rational> = None;
    for d in 1..=caps.max_d {
        let mut current = trace_seed(z, t, k, d)?;
        for n in 0..=caps.max_n0 {
            if n > 0 {
                let next = current.compose(t)?;
                if next == current {
                    // stationary from here on
                    break;
                }
                current = next;
            }
            let norm = current.operator_norm_l1();
            if norm < *epsilon {
                return Ok(finish(hypotheses, Certificate::Found { d, n0: n, norm }));
            }
            if smallest.as_ref().is_none_or(|s| norm < *s) {
                smallest = Some(norm);
            }
        }
    }
    Ok(finish(
        hypotheses,
        Certificate::Exhausted {
            caps,
            smallest_norm: smallest.expect("at least one index is evaluated"),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::example2;
    use crate::rational::ratio;
    use crate::space::MeasureSpace;

    fn swap() -> MatrixOperator {
        let s = MeasureSpace::uniform(2).unwrap();
        MatrixOperator::from_rows(&s, &[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap()
    }

    #[test]
    fn geometric_trace_for_example2_s() {
        let (s, _) = example2();
        let id = MatrixOperator::identity(s.space());
        let trace = zero_two_trace(&id, &s, 1, 1, 20).unwrap();
        // S^n = (5/6)^{n−1} S, so S^{n+1} − S^n = −(1/6)(5/6)^{n−1} S and ‖S‖ = 1.
        for (n, a) in &trace.records[1..] {
            let expected = ratio(1, 6) * ratio(5, 6).pow(*n as i32 - 1);
            assert_eq!(a, &expected, "n = {n}");
        }
        assert_eq!(trace.records[0].1, int(1));
        assert!(trace.is_nonincreasing());
    }

    #[test]
    fn identity_and_swap_traces() {
        let s = MeasureSpace::uniform(2).unwrap();
        let id = MatrixOperator::identity(&s);
        assert!(zero_two_trace(&id, &id, 1, 1, 5).unwrap().norms().all(|a| *a == int(0)));
        let trace = zero_two_trace(&id, &swap(), 1, 1, 20).unwrap();
        assert!(trace.norms().all(|a| *a == int(2)));
    }

    #[test]
    fn trace_rejects_non_commuting() {
        let (s, t) = example2();
        assert!(matches!(
            zero_two_trace(&t, &s, 1, 1, 3),
            Err(EngineError::Precondition(_))
        ));
    }

    #[test]
    fn meet_lemma_examples() {
        let (s, t) = example2();
        let id = MatrixOperator::identity(s.space());

        let r = check_lemma_3_2(&id, &s, 0, 1).unwrap();
        // S − I has column sums 1 and 1; S ∧ I = diag(1/2, 1/3), so
        // S − S ∧ I = [[0, 1/3], [1/2, 0]] with norm 1/2.
        assert_eq!(r.premise_norm, int(1));
        assert_eq!(r.conclusion_norm, ratio(1, 2));
        assert_eq!(r.report.verdict, Verdict::Verified);

        let r = check_lemma_3_2(&id, &t, 0, 1).unwrap();
        assert_eq!(r.conclusion_norm, ratio(1, 4));
        assert!(r.conclusion_holds);

        let zero = MatrixOperator::zero(s.space());
        let r = check_lemma_3_2(&zero, &s, 2, 3).unwrap();
        assert_eq!((r.premise_norm.clone(), r.conclusion_norm.clone()), (int(0), int(0)));
        assert_eq!(r.report.verdict, Verdict::Verified);
    }

    #[test]
    fn meet_lemma_premise_failure_is_not_falsification() {
        let id = MatrixOperator::identity(swap().space());
        let r = check_lemma_3_2(&id, &swap(), 0, 1).unwrap();
        assert!(!r.premise_holds);
        assert_eq!(r.report.verdict, Verdict::HypothesisUnmet);
    }

    #[test]
    fn certificate_examples() {
        let (s, _) = example2();
        let id = MatrixOperator::identity(s.space());
        let found = find_epsilon_certificate(&id, &s, 0, 1, &ratio(1, 100), SearchCaps::default()).unwrap();
        assert!(matches!(found.certificate, Certificate::Found { d: 1, n0: 17, .. }));

        let loose = find_epsilon_certificate(&id, &s, 0, 1, &int(2), SearchCaps::default()).unwrap();
        assert!(matches!(loose.certificate, Certificate::Found { d: 1, n0: 0, .. }));

        let swap_id = MatrixOperator::identity(swap().space());
        let unmet = find_epsilon_certificate(&swap_id, &swap(), 0, 1, &ratio(1, 10), SearchCaps::default()).unwrap();
        assert_eq!(unmet.certificate, Certificate::HypothesisUnmet);
        assert_eq!(unmet.verdict(), Verdict::HypothesisUnmet);
    }

    #[test]
    fn certificate_exhaustion_is_reported() {
        let (s, _) = example2();
        let id = MatrixOperator::identity(s.space());
        let caps = SearchCaps { max_d: 2, max_n0: 5 };
        let out = find_epsilon_certificate(&id, &s, 0, 1, &ratio(1, 100), caps).unwrap();
        match &out.certificate {
            Certificate::Exhausted { smallest_norm, .. } => {
                assert_eq!(*smallest_norm, ratio(1, 6) * ratio(5, 6).pow(4));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(out.to_report().verdict, Verdict::Exhausted);
    }
}
