//! Dominated contractions: the two-operator product form, the `Z`-weighted
//! power form and the multi-parameter grid form.

use crate::operator::MatrixOperator;
use crate::rational::{int, Rational};
use crate::report::{ConclusionLedger, Guarantee, HypothesisCheck, NormRecord, Report, Verdict};

use super::hypotheses::{commutation_checks, commute_check, dominance_check, positive_contraction_checks};
use super::{CommutingFamily, EngineError};

/// Largest grid [`check_theorem_2_3`] will walk.
pub const DEFAULT_GRID_CAP: u128 = 1_000_000;

fn ensure_range(n0: u64, n_max: u64) -> Result<(), EngineError> {
    if n0 == 0 {
        return Err(EngineError::InvalidArgument("n0 must be at least 1".into()));
    }
    if n_max < n0 {
        return Err(EngineError::EmptyRange {
            start: n0,
            upper: n_max,
        });
    }
    Ok(())
}

/// Walks `n = n0..=n_max`, calling `step` for the norm at each `n`, and builds
/// the conclusion ledger for a `< 1` claim.
fn strict_unit_ledger(
    claim: String,
    n0: u64,
    norms: impl Iterator<Item = Result<(u64, Rational), EngineError>>,
) -> Result<ConclusionLedger, EngineError> {
    let one = int(1);
    let mut records = Vec::new();
    let mut first_failure = None;
    let mut max_norm = int(0);
    let mut last = n0;
    for item in norms {
        let (n, norm) = item?;
        if first_failure.is_none() && norm >= one {
            first_failure = Some(NormRecord {
                index: vec![n],
                norm: norm.clone(),
            });
        }
        if norm > max_norm {
            max_norm = norm.clone();
        }
        last = n;
        records.push(NormRecord {
            index: vec![n],
            norm,
        });
    }
    Ok(ConclusionLedger {
        claim,
        range: format!("n in [{n0}, {last}]"),
        guarantee: Guarantee::PrefixOnly,
        points_checked: records.len(),
        max_norm,
        first_failure,
        records,
    })
}

fn verdict_for(ledger: &ConclusionLedger) -> Verdict {
    if ledger.first_failure.is_some() {
        Verdict::Falsified
    } else {
        Verdict::Verified
    }
}

/// Positive contractions `T_i ≤ S_i` with `S₁S₂ = S₂S₁` and
/// `‖S₁S₂^{n₀} − T₁T₂^{n₀}‖ < 1`; checks `‖S₁S₂^n − T₁T₂^n‖ < 1` for
/// `n₀ ≤ n ≤ n_max`.
pub fn check_theorem_2_1(
    t1: &MatrixOperator,
    t2: &MatrixOperator,
    s1: &MatrixOperator,
    s2: &MatrixOperator,
    n0: u64,
    n_max: u64,
) -> Result<Report, EngineError> {
    ensure_range(n0, n_max)?;
    let statement = format!(
        "dominated product: ‖S1·S2^n − T1·T2^n‖ < 1 for n ≥ {n0} given the n0 = {n0} instance"
    );

    let mut hypotheses = Vec::new();
    for (name, op) in [("T1", t1), ("T2", t2), ("S1", s1), ("S2", s2)] {
        hypotheses.extend(positive_contraction_checks(name, op));
    }
    hypotheses.push(dominance_check("S1", "T1", s1, t1)?);
    hypotheses.push(dominance_check("S2", "T2", s2, t2)?);
    hypotheses.push(commute_check("S1S2 = S2S1", s1, s2)?);

    let mut s_pow = s2.power(n0);
    let mut t_pow = t2.power(n0);
    let base = s1.compose(&s_pow)?.distance_l1(&t1.compose(&t_pow)?)?;
    hypotheses.push(HypothesisCheck::valued(
        format!("‖S1·S2^{n0} − T1·T2^{n0}‖ < 1"),
        base < int(1),
        base,
    ));
    if hypotheses.iter().any(|h| !h.holds) {
        return Ok(Report::unmet(statement, hypotheses));
    }

    let norms = (n0..=n_max).map(|n| {
        if n > n0 {
            s_pow = s_pow.compose(s2)?;
            t_pow = t_pow.compose(t2)?;
        }
        Ok((n, s1.compose(&s_pow)?.distance_l1(&t1.compose(&t_pow)?)?))
    });
    let ledger = strict_unit_ledger("‖S1·S2^n − T1·T2^n‖ < 1".into(), n0, norms)?;
    Ok(Report {
        statement,
        verdict: verdict_for(&ledger),
        hypotheses,
        conclusion: Some(ledger),
    })
}

/// Positive contractions `Z, S, T` with `T ≤ S`, `ZS = SZ` and
/// `‖Z(S^{n₀} − T^{n₀})‖ < 1`; checks `‖Z(S^n − T^n)‖ < 1` for
/// `n₀ ≤ n ≤ n_max`.
pub fn check_corollary_2_2(
    z: &MatrixOperator,
    s: &MatrixOperator,
    t: &MatrixOperator,
    n0: u64,
    n_max: u64,
) -> Result<Report, EngineError> {
    ensure_range(n0, n_max)?;
    let statement = format!("weighted powers: ‖Z(S^n − T^n)‖ < 1 for n ≥ {n0} given the n0 = {n0} instance");

    let mut hypotheses = Vec::new();
    for (name, op) in [("Z", z), ("S", s), ("T", t)] {
        hypotheses.extend(positive_contraction_checks(name, op));
    }
    hypotheses.push(dominance_check("S", "T", s, t)?);
    hypotheses.push(commute_check("ZS = SZ", z, s)?);

    let mut s_pow = s.power(n0);
    let mut t_pow = t.power(n0);
    let base = z.compose(&s_pow.try_sub(&t_pow)?)?.operator_norm_l1();
    hypotheses.push(HypothesisCheck::valued(
        format!("‖Z(S^{n0} − T^{n0})‖ < 1"),
        base < int(1),
        base,
    ));
    if hypotheses.iter().any(|h| !h.holds) {
        return Ok(Report::unmet(statement, hypotheses));
    }

    let norms = (n0..=n_max).map(|n| {
        if n > n0 {
            s_pow = s_pow.compose(s)?;
            t_pow = t_pow.compose(t)?;
        }
        Ok((n, z.compose(&s_pow.try_sub(&t_pow)?)?.operator_norm_l1()))
    });
    let ledger = strict_unit_ledger("‖Z(S^n − T^n)‖ < 1".into(), n0, norms)?;
    Ok(Report {
        statement,
        verdict: verdict_for(&ledger),
        hypotheses,
        conclusion: Some(ledger),
    })
}

/// Checks `‖S₁^{m₁}⋯S_N^{m_N} − T₁^{m₁}⋯T_N^{m_N}‖ < 1` over the full grid
/// `n_{i,0} ≤ m_i ≤ m_max[i]`, after checking the base-point instance.
pub fn check_theorem_2_3(family: &CommutingFamily, m_max: &[u64]) -> Result<Report, EngineError> {
    check_theorem_2_3_capped(family, m_max, DEFAULT_GRID_CAP)
}

pub fn check_theorem_2_3_capped(
    family: &CommutingFamily,
    m_max: &[u64],
    grid_cap: u128,
) -> Result<Report, EngineError> {
    let base = family.base_exponents();
    if m_max.len() != family.len() {
        return Err(EngineError::InvalidArgument(format!(
            "{} upper bounds for a family of {}",
            m_max.len(),
            family.len()
        )));
    }
    for (&lo, &hi) in base.iter().zip(m_max) {
        if hi < lo {
            return Err(EngineError::EmptyRange { start: lo, upper: hi });
        }
    }
    let points: u128 = base
        .iter()
        .zip(m_max)
        .map(|(&lo, &hi)| u128::from(hi - lo + 1))
        .product();
    if points > grid_cap {
        return Err(EngineError::GridTooLarge {
            points,
            cap: grid_cap,
        });
    }

    let statement = format!(
        "multi-parameter: ‖Π S_i^m_i − Π T_i^m_i‖ < 1 for all m_i ≥ n_i0 = {base:?} given the base instance"
    );
    let pairs = family.pairs();
    let mut hypotheses = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        let idx = i + 1;
        hypotheses.extend(positive_contraction_checks(&format!("S{idx}"), pair.s()));
        hypotheses.extend(positive_contraction_checks(&format!("T{idx}"), pair.t()));
        hypotheses.push(dominance_check(&format!("S{idx}"), &format!("T{idx}"), pair.s(), pair.t())?);
    }
    hypotheses.extend(commutation_checks(pairs)?);

    let space = pairs[0].s().space().clone();
    let mut s_base = MatrixOperator::identity(&space);
    let mut t_base = MatrixOperator::identity(&space);
    for (pair, &e) in pairs.iter().zip(base) {
        s_base = s_base.compose(&pair.s().power(e))?;
        t_base = t_base.compose(&pair.t().power(e))?;
    }
    let base_norm = s_base.distance_l1(&t_base)?;
    hypotheses.push(HypothesisCheck::valued(
        "‖Π S_i^n_i0 − Π T_i^n_i0‖ < 1",
        base_norm < int(1),
        base_norm,
    ));
    if hypotheses.iter().any(|h| !h.holds) {
        return Ok(Report::unmet(statement, hypotheses));
    }

    let mut walk = GridWalk {
        family,
        m_max,
        index: Vec::with_capacity(family.len()),
        checked: 0,
        max_norm: int(0),
        first_failure: None,
    };
    walk.descend(&MatrixOperator::identity(&space), &MatrixOperator::identity(&space))?;

    let range = base
        .iter()
        .zip(m_max)
        .map(|(lo, hi)| format!("[{lo}, {hi}]"))
        .collect::<Vec<_>>()
        .join(" x ");
    let ledger = ConclusionLedger {
        claim: "‖Π S_i^m_i − Π T_i^m_i‖ < 1".into(),
        range: format!("m in {range}"),
        guarantee: Guarantee::PrefixOnly,
        points_checked: walk.checked,
        max_norm: walk.max_norm.reduced(),
        first_failure: walk.first_failure,
        records: Vec::new(),
    };
    Ok(Report {
        statement,
        verdict: verdict_for(&ledger),
        hypotheses,
        conclusion: Some(ledger),
    })
}

/// Depth-first walk of the exponent grid in lexicographic order. Each level
/// extends the prefix products by one factor per step, so every grid point
/// costs one product per side.
struct GridWalk<'a> {
    family: &'a CommutingFamily,
    m_max: &'a [u64],
    index: Vec<u64>,
    checked: usize,
    max_norm: Rational,
    first_failure: Option<NormRecord>,
}

impl GridWalk<'_> {
    fn descend(&mut self, s_prefix: &MatrixOperator, t_prefix: &MatrixOperator) -> Result<(), EngineError> {
        let level = self.index.len();
        let pair = &self.family.pairs()[level];
        let lo = self.family.base_exponents()[level];
        let leaf = level + 1 == self.family.len();
        let mut s_cur = s_prefix.compose(&pair.s().power(lo))?;
        let mut t_cur = t_prefix.compose(&pair.t().power(lo))?;
        for m in lo..=self.m_max[level] {
            if m > lo {
                // Leaves are only measured, so they skip the gcd reduction.
                if leaf {
                    s_cur = s_cur.compose_unreduced(pair.s())?;
                    t_cur = t_cur.compose_unreduced(pair.t())?;
                } else {
                    s_cur = s_cur.compose(pair.s())?;
                    t_cur = t_cur.compose(pair.t())?;
                }
            }
            self.index.push(m);
            if leaf {
                let norm = s_cur.distance_l1_unreduced(&t_cur)?;
                self.checked += 1;
                if self.first_failure.is_none() && norm >= int(1) {
                    self.first_failure = Some(NormRecord {
                        index: self.index.clone(),
                        norm: norm.reduced(),
                    });
                }
                if norm > self.max_norm {
                    self.max_norm = norm;
                }
            } else {
                self.descend(&s_cur, &t_cur)?;
            }
            self.index.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{example1, example2, Example1Params};
    use crate::rational::ratio;
    use crate::theorems::DominatedPair;

    #[test]
    fn two_pair_on_example2() {
        let (s, t) = example2();
        let report = check_theorem_2_1(&t, &t, &s, &s, 1, 10).unwrap();
        assert_eq!(report.verdict, Verdict::Verified);
        let base = report.hypotheses.last().unwrap();
        assert_eq!(base.value, Some(ratio(15, 18)));
        let ledger = report.conclusion.unwrap();
        assert_eq!(ledger.points_checked, 10);
        assert_eq!(ledger.records[0].norm, ratio(15, 18));
        assert!(ledger.records.iter().all(|r| r.norm < int(1)));
    }

    #[test]
    fn two_pair_with_equal_operators_gives_zero() {
        let (s, _) = example2();
        let report = check_theorem_2_1(&s, &s, &s, &s, 1, 6).unwrap();
        assert_eq!(report.verdict, Verdict::Verified);
        assert_eq!(report.conclusion.unwrap().max_norm, int(0));
    }

    #[test]
    fn two_pair_reports_failed_dominance() {
        let e = example1(&Example1Params::new(ratio(1, 2), ratio(1, 2), ratio(3, 4)).unwrap()).unwrap();
        let report = check_theorem_2_1(&e.t, &e.t, &e.s, &e.s, 1, 5).unwrap();
        assert_eq!(report.verdict, Verdict::HypothesisUnmet);
        let failed: Vec<_> = report.failed_hypotheses().map(|h| h.name.clone()).collect();
        assert!(failed.contains(&"T1 ≤ S1".to_string()));
        assert!(report.conclusion.is_none());
    }

    #[test]
    fn range_errors() {
        let (s, t) = example2();
        assert!(matches!(
            check_theorem_2_1(&t, &t, &s, &s, 3, 2),
            Err(EngineError::EmptyRange { .. })
        ));
        assert!(matches!(
            check_corollary_2_2(&s, &s, &t, 0, 2),
            Err(EngineError::InvalidArgument(_))
        ));
    }

    #[test]
    fn corollary_on_example1() {
        let e = example1(&Example1Params::new(ratio(1, 2), ratio(1, 2), ratio(1, 4)).unwrap()).unwrap();
        let report = check_corollary_2_2(&e.z, &e.s, &e.t, 1, 25).unwrap();
        assert_eq!(report.verdict, Verdict::Verified);
        assert_eq!(report.hypotheses.last().unwrap().value, Some(ratio(5, 8)));
    }

    #[test]
    fn corollary_on_example2() {
        let (s, t) = example2();
        let id = MatrixOperator::identity(s.space());
        let unmet = check_corollary_2_2(&id, &s, &t, 1, 20).unwrap();
        assert_eq!(unmet.verdict, Verdict::HypothesisUnmet);
        assert_eq!(unmet.hypotheses.last().unwrap().value, Some(int(1)));

        let ok = check_corollary_2_2(&id, &s, &t, 2, 20).unwrap();
        assert_eq!(ok.verdict, Verdict::Verified);
        assert_eq!(ok.conclusion.unwrap().points_checked, 19);
    }

    #[test]
    fn family_single_pair_matches_corollary() {
        let (s, t) = example2();
        let family = CommutingFamily::new(vec![DominatedPair::new(s.clone(), t.clone()).unwrap()], vec![2]).unwrap();
        let report = check_theorem_2_3(&family, &[8]).unwrap();
        assert_eq!(report.verdict, Verdict::Verified);
        let id = MatrixOperator::identity(s.space());
        let cor = check_corollary_2_2(&id, &s, &t, 2, 8).unwrap();
        assert_eq!(report.conclusion.unwrap().max_norm, cor.conclusion.unwrap().max_norm);
    }

    #[test]
    fn family_two_copies_of_example2() {
        let (s, t) = example2();
        let pair = DominatedPair::new(s, t).unwrap();
        let family = CommutingFamily::new(vec![pair.clone(), pair], vec![1, 1]).unwrap();
        let report = check_theorem_2_3(&family, &[5, 5]).unwrap();
        assert_eq!(report.hypotheses.last().unwrap().value, Some(ratio(15, 18)));
        assert_eq!(report.verdict, Verdict::Verified);
        assert_eq!(report.conclusion.unwrap().points_checked, 25);
    }

    #[test]
    fn family_grid_cap() {
        let (s, t) = example2();
        let pair = DominatedPair::new(s, t).unwrap();
        let family = CommutingFamily::new(vec![pair.clone(), pair], vec![1, 1]).unwrap();
        assert_eq!(
            check_theorem_2_3_capped(&family, &[10, 10], 50),
            Err(EngineError::GridTooLarge { points: 100, cap: 50 })
        );
        assert!(matches!(
            check_theorem_2_3(&family, &[10]),
            Err(EngineError::InvalidArgument(_))
        ));
    }
}
