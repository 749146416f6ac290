//! Property sweeps of the verifiers over seeded random inputs. The theorems
//! are proved, so a FALSIFIED verdict on any input is a bug.

use dominion::gallery::{example1, example2, remark_lp_counterexample, Example1Params};
use dominion::random::{
    random_commuting_lattice_pair, random_commuting_quadruple, random_dominated_pair, random_substochastic, seeded,
    GeneratorConfig,
};
use dominion::rational::{int, ratio};
use dominion::theorems::{
    averaging_defect, build_decomposition, check_corollary_2_2, check_lemma_3_2, check_theorem_2_1,
    find_epsilon_certificate, zero_two_trace, Certificate, SearchCaps,
};
use dominion::{MatrixOperator, MeasureSpace, Verdict};
use rand::Rng;

#[test]
fn single_pair_sweep_on_mixed_dimensions() {
    let mut qualifying = 0;
    for seed in 0..200u64 {
        let n = 1 + (seed % 5) as usize;
        let (s, t) = random_dominated_pair(seed, n, 0.6).into_parts();
        let id = MatrixOperator::identity(s.space());
        let report = check_corollary_2_2(&id, &s, &t, 1, 50).unwrap();
        match report.verdict {
            Verdict::Verified => qualifying += 1,
            Verdict::HypothesisUnmet => {
                // only the n0 = 1 premise may fail for generated pairs
                let failed: Vec<_> = report.failed_hypotheses().map(|h| h.name.clone()).collect();
                assert_eq!(failed.len(), 1, "seed {seed}: {failed:?}");
                assert!(s.distance_l1(&t).unwrap() >= int(1));
            }
            other => panic!("seed {seed}: {other}\n{report}"),
        }
    }
    assert!(qualifying >= 150, "only {qualifying} pairs met the premise");
}

#[test]
fn two_pair_sweep() {
    for seed in 0..40u64 {
        let q = random_commuting_quadruple(seed, 3, 2);
        let report = check_theorem_2_1(&q.t1, &q.t2, &q.s1, &q.s2, 1, 30).unwrap();
        assert_ne!(report.verdict, Verdict::Falsified, "seed {seed}\n{report}");
        assert_ne!(report.verdict, Verdict::Exhausted);
    }
}

#[test]
fn traces_are_nonincreasing() {
    let cfg = GeneratorConfig::default();
    for seed in 0..40u64 {
        let (z, t) = random_commuting_lattice_pair(seed, 4, &cfg);
        let k = 1 + seed % 3;
        let d = 1 + seed % 2;
        let trace = zero_two_trace(&z, &t, k, d, 25).unwrap();
        assert!(trace.is_nonincreasing(), "seed {seed}");
        assert!(trace.norms().all(|a| *a <= int(2)));

        // a non-lattice Z: polynomials in one contraction commute
        let q = random_commuting_quadruple(seed, 3, 2);
        let trace = zero_two_trace(&q.s1, &q.s2, k, d, 25).unwrap();
        assert!(trace.is_nonincreasing(), "seed {seed}");
    }
}

#[test]
fn meet_lemma_sweep() {
    let cfg = GeneratorConfig::default();
    let mut premise_met = 0;
    for seed in 0..100u64 {
        let (z, t) = random_commuting_lattice_pair(seed, 1 + (seed % 5) as usize, &cfg);
        let m = seed % 3;
        let k = 1 + seed % 2;
        let r = check_lemma_3_2(&z, &t, m, k).unwrap();
        assert_ne!(r.report.verdict, Verdict::Falsified, "seed {seed}\n{}", r.report);
        if r.premise_holds {
            premise_met += 1;
            assert!(r.conclusion_holds, "seed {seed}");
            assert_eq!(r.report.verdict, Verdict::Verified);
        }
    }
    assert!(premise_met >= 50, "premise met only {premise_met} times");
}

fn random_contraction(seed: u64) -> MatrixOperator {
    let mut rng = seeded(seed);
    let n = rng.gen_range(1..=4);
    let weights = (0..n).map(|_| ratio(rng.gen_range(1..=5), rng.gen_range(1..=3))).collect();
    let space = MeasureSpace::new(weights).unwrap();
    random_substochastic(&mut rng, &space, 0.7, &GeneratorConfig::default())
}

#[test]
fn decomposition_witness_norms_stay_within_the_trivial_bounds() {
    // Q is a difference of two positive contractions, so ‖Q‖ ≤ 2, and
    // V⁽ᵈ⁾ = Σ_{i<d} P^{d−1−i} V⁽¹⁾ Q^i gives ‖V⁽ᵈ⁾‖ ≤ 2^d − 1. The sharper
    // bounds ‖Q‖ ≤ 1 and ‖V⁽ᵈ⁾‖ ≤ 2 fail in general; see the unit tests.
    for seed in 0..30u64 {
        let t = random_contraction(0x0_3000 + seed);
        let (m, k, ell) = (seed % 2, 1 + seed % 2, 1 + seed % 3);
        let w = build_decomposition(&t, m, k, ell, 3).unwrap();
        assert!(w.q_norm() <= int(2), "seed {seed}");
        for (d, v) in w.v_norms().into_iter().enumerate() {
            assert!(v < int(2).pow(d as i32 + 1), "seed {seed}");
        }
    }
}

#[test]
fn averaging_defect_decays_and_respects_the_k_fold_bound() {
    for seed in 0..50u64 {
        let t = random_contraction(0x0_4000 + seed);
        let defect = averaging_defect(&t, 2, 4).unwrap();
        assert!(defect.k_fold_bound_holds, "seed {seed}");
        let one = averaging_defect(&t, 1, 4).unwrap();
        assert!(one.entries[3].norm <= one.entries[0].norm, "seed {seed}");
        assert!(defect.gamma_hat.is_finite() && defect.gamma_hat >= 0.0);
    }
}

#[test]
fn certificates_exist_for_every_shipped_example_meeting_the_premise() {
    let (s2, t2) = example2();
    let e1 = example1(&Example1Params::new(ratio(1, 2), ratio(1, 2), ratio(1, 4)).unwrap()).unwrap();
    let (rs, rt) = remark_lp_counterexample();
    let id2 = MatrixOperator::identity(s2.space());
    let shipped = [s2, t2, e1.s, e1.t, rs, rt, id2];
    for (idx, t) in shipped.iter().enumerate() {
        let z = MatrixOperator::identity(t.space());
        let search = find_epsilon_certificate(&z, t, 0, 1, &ratio(1, 10), SearchCaps::default()).unwrap();
        assert!(
            matches!(search.certificate, Certificate::Found { .. }),
            "example {idx}: {:?}",
            search.certificate
        );
        assert_eq!(search.to_report().verdict, Verdict::Verified);
    }
}
