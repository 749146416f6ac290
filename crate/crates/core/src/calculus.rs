//! Lattice calculus at the operator level.
//!
//! On a finite coordinate lattice the modulus `|A|x = sup{Ay : |y| ≤ x}` of a
//! matrix operator is its entrywise absolute value, and the operator meet
//! `½(S + T − |S − T|)` is the entrywise minimum. Lattice homomorphisms are
//! exactly the nonnegative matrices with at most one nonzero entry per row.
//! The definitional forms are kept as test oracles.

use serde::Serialize;

use crate::operator::MatrixOperator;
use crate::rational::ratio;
use crate::report::HypothesisCheck;
use crate::space::L1Vector;
use crate::LatticeError;

/// Entrywise absolute value `|A|`.
pub fn operator_modulus(a: &MatrixOperator) -> MatrixOperator {
    a.abs_entries()
}

/// `S ∧ T = ½(S + T − |S − T|)`.
pub fn operator_meet(s: &MatrixOperator, t: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
    let spread = operator_modulus(&s.try_sub(t)?);
    Ok(s.try_add(t)?.try_sub(&spread)?.scale(&ratio(1, 2)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeHomWitness {
    /// Number of nonzero entries in each row; all entries are nonnegative.
    Structural { nonzeros_per_row: Vec<usize> },
    /// A pair with `Z(x ∨ y) ≠ Zx ∨ Zy`.
    Counterexample { x: L1Vector, y: L1Vector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeHomCertificate {
    pub operator: MatrixOperator,
    pub verdict: bool,
    /// Every linear map between finite-dimensional lattices is order
    /// continuous, so this is recorded as true rather than tested.
    pub order_continuous: bool,
    pub witness: LatticeHomWitness,
}

impl LatticeHomCertificate {
    /// Lattice homomorphism with `‖Z‖ ≤ 1`.
    pub fn is_lattice_contraction(&self) -> bool {
        self.verdict && self.operator.is_contraction_l1()
    }
}

pub fn is_lattice_homomorphism(z: &MatrixOperator) -> LatticeHomCertificate {
    let n = z.dim();
    let space = z.space();
    let rows = z.rows();

    let counterexample = |x: L1Vector, y: L1Vector| {
        debug_assert!(preserves_join(z, &x, &y) == Some(false));
        LatticeHomCertificate {
            operator: z.clone(),
            verdict: false,
            order_continuous: true,
            witness: LatticeHomWitness::Counterexample { x, y },
        }
    };

    // a negative entry Z_ij: Z(e_j ∨ 0) = Ze_j has a negative coordinate,
    // while Ze_j ∨ Z0 does not
    for row in &rows {
        if let Some(j) = row.iter().position(|v| *v < ratio(0, 1)) {
            return counterexample(L1Vector::unit(space, j), L1Vector::zero(space));
        }
    }
    // two positive entries in one row: e_j1 ∨ e_j2 sums them, the join of
    // the images takes the larger
    for row in &rows {
        let mut support = row.iter().enumerate().filter(|(_, v)| *v > &ratio(0, 1));
        if let (Some((j1, _)), Some((j2, _))) = (support.next(), support.next()) {
            return counterexample(L1Vector::unit(space, j1), L1Vector::unit(space, j2));
        }
    }

    let nonzeros_per_row = (0..n)
        .map(|i| rows[i].iter().filter(|v| *v > &ratio(0, 1)).count())
        .collect();
    LatticeHomCertificate {
        operator: z.clone(),
        verdict: true,
        order_continuous: true,
        witness: LatticeHomWitness::Structural { nonzeros_per_row },
    }
}

/// `Z(x ∨ y) == Zx ∨ Zy`, or `None` on a space mismatch.
pub fn preserves_join(z: &MatrixOperator, x: &L1Vector, y: &L1Vector) -> Option<bool> {
    let left = z.apply(&x.join(y).ok()?).ok()?;
    let right = z.apply(x).ok()?.join(&z.apply(y).ok()?).ok()?;
    Some(left == right)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Lemma31Outcome {
    HypothesisUnmet(Vec<HypothesisCheck>),
    Checked {
        hypotheses: Vec<HypothesisCheck>,
        /// `Z|S − T| = |Z(S − T)|`
        modulus_identity: bool,
        /// `Z(S ∧ T) = ZS ∧ ZT`
        meet_identity: bool,
    },
}

/// Checks the modulus and meet identities for an order-continuous lattice
/// homomorphism `Z` and positive contractions `S`, `T`.
pub fn check_lemma_3_1(
    z: &MatrixOperator,
    s: &MatrixOperator,
    t: &MatrixOperator,
) -> Result<Lemma31Outcome, LatticeError> {
    z.space().ensure_same(s.space())?;
    s.space().ensure_same(t.space())?;

    let cert = is_lattice_homomorphism(z);
    let hypotheses = vec![
        HypothesisCheck::flag("Z is a lattice homomorphism", cert.verdict),
        HypothesisCheck::flag("Z is order continuous", cert.order_continuous)
            .with_note("automatic in finite dimension"),
        HypothesisCheck::flag("S is positive", s.is_positive()),
        HypothesisCheck::valued(
            "‖S‖ ≤ 1",
            s.is_contraction_l1(),
            s.operator_norm_l1(),
        ),
        HypothesisCheck::flag("T is positive", t.is_positive()),
        HypothesisCheck::valued(
            "‖T‖ ≤ 1",
            t.is_contraction_l1(),
            t.operator_norm_l1(),
        ),
    ];
    if hypotheses.iter().any(|h| !h.holds) {
        return Ok(Lemma31Outcome::HypothesisUnmet(hypotheses));
    }

    let diff = s.try_sub(t)?;
    let modulus_identity =
        z.compose(&operator_modulus(&diff))? == operator_modulus(&z.compose(&diff)?);
    let meet_identity =
        z.compose(&operator_meet(s, t)?)? == operator_meet(&z.compose(s)?, &z.compose(t)?)?;
    Ok(Lemma31Outcome::Checked {
        hypotheses,
        modulus_identity,
        meet_identity,
    })
}
