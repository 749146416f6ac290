//! The averaging decomposition behind the zero-two law.
//!
//! With `A = ((I + T)/2)^ℓ`, `P = T^{ℓ(m+k)}` and `M = T^{m+k} ∧ T^m`:
//!
//! ```text
//! Q = P − A·M^ℓ,   V⁽¹⁾ = M^ℓ,   V⁽ᵈ⁺¹⁾ = P·V⁽ᵈ⁾ + V⁽¹⁾·Q^d,
//! P^d = A·V⁽ᵈ⁾ + Q^d   for every d ≥ 1.
//! ```
//!
//! The identity only uses that `P` and `A` commute, so it is exact for any
//! `T`; it is re-verified for every prefix before a witness is returned.
//!
//! The norm bounds `‖V⁽ᵈ⁾‖ ≤ 2` and `‖Q‖ ≤ 1` are reported, not assumed:
//! neither holds in general, even when `‖T^{m+k} − T^{m+k} ∧ T^m‖ < 1`
//! (see the tests for exact counterexamples).

use crate::calculus::operator_meet;
use crate::operator::MatrixOperator;
use crate::rational::{int, ratio, to_f64, Rational};

use super::hypotheses::positive_contraction_checks;
use super::EngineError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub t: MatrixOperator,
    pub m: u64,
    pub k: u64,
    pub ell: u64,
    pub d: u64,
    pub q: MatrixOperator,
    /// `V⁽¹⁾ … V⁽ᵈ⁾`
    pub v: Vec<MatrixOperator>,
}

impl DecompositionWitness {
    pub fn q_norm(&self) -> Rational {
        self.q.operator_norm_l1()
    }

    pub fn v_norms(&self) -> Vec<Rational> {
        self.v.iter().map(MatrixOperator::operator_norm_l1).collect()
    }

    /// `‖V⁽ᵈ'⁾‖ ≤ 2` for every stored `d'`.
    pub fn v_bound_holds(&self) -> bool {
        self.v_norms().iter().all(|n| *n <= int(2))
    }

    pub fn q_bound_holds(&self) -> bool {
        self.q_norm() <= int(1)
    }
}

/// `((I + T)/2)^ℓ`
fn averaging_power(t: &MatrixOperator, ell: u64) -> Result<MatrixOperator, EngineError> {
    let id = MatrixOperator::identity(t.space());
    Ok(id.try_add(t)?.scale(&ratio(1, 2)).power(ell))
}

pub fn build_decomposition(
    t: &MatrixOperator,
    m: u64,
    k: u64,
    ell: u64,
    d: u64,
) -> Result<DecompositionWitness, EngineError> {
    if k == 0 || ell == 0 || d == 0 {
        return Err(EngineError::InvalidArgument("k, ℓ and d must be at least 1".into()));
    }
    let checks = positive_contraction_checks("T", t);
    if checks.iter().any(|c| !c.holds) {
        return Err(EngineError::Precondition(checks.to_vec()));
    }

    let avg = averaging_power(t, ell)?;
    let p = t.power(ell * (m + k));
    let meet = operator_meet(&t.power(m + k), &t.power(m))?;
    let v1 = meet.power(ell);
    let q = p.try_sub(&avg.compose(&v1)?)?;

    let mut v = Vec::with_capacity(d as usize);
    v.push(v1.clone());
    let mut q_pow = q.clone(); // Q^{d'}
    let mut p_pow = p.clone(); // P^{d'}
    for step in 1..=d {
        let current = &v[step as usize - 1];
        let rhs = avg.compose(current)?.try_add(&q_pow)?;
        if rhs != p_pow {
            return Err(EngineError::InternalInconsistency(format!(
                "decomposition identity fails at d = {step} (m = {m}, k = {k}, ℓ = {ell})"
            )));
        }
        if step == d {
            break;
        }
        let next = p.compose(current)?.try_add(&v1.compose(&q_pow)?)?;
        v.push(next);
        q_pow = q_pow.compose(&q)?;
        p_pow = p_pow.compose(&p)?;
    }

    Ok(DecompositionWitness {
        t: t.clone(),
        m,
        k,
        ell,
        d,
        q,
        v,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectEntry {
    pub ell: u64,
    /// `‖T^k((I+T)/2)^ℓ − ((I+T)/2)^ℓ‖`
    pub norm: Rational,
    /// The same with `k = 1`.
    pub norm_one: Rational,
}

impl DefectEntry {
    /// `√ℓ · norm`, display only.
    pub fn scaled(&self) -> f64 {
        (self.ell as f64).sqrt() * to_f64(&self.norm)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AveragingDefect {
    pub k: u64,
    pub entries: Vec<DefectEntry>,
    /// `max_ℓ √ℓ · norm(1, ℓ)`, an empirical constant for the observed range only.
    pub gamma_hat: f64,
    /// `norm(k, ℓ) ≤ k · norm(1, ℓ)` at every `ℓ`.
    pub k_fold_bound_holds: bool,
}

pub fn averaging_defect(t: &MatrixOperator, k: u64, ell_max: u64) -> Result<AveragingDefect, EngineError> {
    if k == 0 {
        return Err(EngineError::InvalidArgument("k must be at least 1".into()));
    }
    if !t.is_contraction_l1() {
        return Err(EngineError::Precondition(vec![positive_contraction_checks("T", t)[1].clone()]));
    }
    let tk = t.power(k);
    let id = MatrixOperator::identity(t.space());
    let half_step = id.try_add(t)?.scale(&ratio(1, 2));
    let mut avg = id;
    let mut entries = Vec::with_capacity(ell_max as usize);
    for ell in 1..=ell_max {
        avg = avg.compose(&half_step)?;
        let norm = tk.compose(&avg)?.try_sub(&avg)?.operator_norm_l1();
        let norm_one = t.compose(&avg)?.try_sub(&avg)?.operator_norm_l1();
        entries.push(DefectEntry { ell, norm, norm_one });
    }
    let gamma_hat = entries
        .iter()
        .map(|e| (e.ell as f64).sqrt() * to_f64(&e.norm_one))
        .fold(0.0, f64::max);
    let kk = int(k as i64);
    let k_fold_bound_holds = entries.iter().all(|e| e.norm <= &kk * &e.norm_one);
    Ok(AveragingDefect {
        k,
        entries,
        gamma_hat,
        k_fold_bound_holds,
    })
}
