//! Seeded generators of hypothesis-satisfying inputs.
//!
//! Every generator is a pure function of its seed and parameters (ChaCha8
//! underneath). Rationals are drawn with denominators at most
//! [`GeneratorConfig::denom_cap`] so that exact powers stay affordable.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::operator::MatrixOperator;
use crate::rational::{int, Rational};
use crate::space::MeasureSpace;
use crate::theorems::{CommutingFamily, DominatedPair};

pub const DEFAULT_DENOM_CAP: u32 = 64;
pub const DENOM_CAP_ENV: &str = "DOMINION_DENOM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub denom_cap: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            denom_cap: DEFAULT_DENOM_CAP,
        }
    }
}

impl GeneratorConfig {
    /// Reads `DOMINION_DENOM_CAP`; unset, unparsable or zero values fall back
    /// to the default.
    pub fn from_env() -> Self {
        std::env::var(DENOM_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&cap| cap > 0)
            .map_or_else(Self::default, |denom_cap| Self { denom_cap })
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[0, 1]` with denominator at most the cap.
pub fn random_unit<R: Rng>(rng: &mut R, cfg: &GeneratorConfig) -> Rational {
    let q = rng.gen_range(1..=cfg.denom_cap as i64);
    let p = rng.gen_range(0..=q);
    Rational::new(p.into(), q.into())
}

/// `units` unit masses dropped uniformly into `slots` bins.
fn scatter<R: Rng>(rng: &mut R, units: u32, slots: &[usize], len: usize) -> Vec<u32> {
    let mut mass = vec![0u32; len];
    for _ in 0..units {
        mass[*slots.choose(rng).expect("nonempty")] += 1;
    }
    mass
}

/// A total of `denom` units half of the time, otherwise a uniform share of it.
fn random_total<R: Rng>(rng: &mut R, denom: u32) -> u32 {
    if rng.gen_bool(0.5) {
        denom
    } else {
        rng.gen_range(0..=denom)
    }
}

/// A random positive operator with `Σ_i μ_i A_ij ≤ μ_j` for every column, so
/// `‖A‖ ≤ 1`. Each entry is present with probability `density`; half the
/// nonzero columns have norm exactly one. On the counting measure all entries
/// share one denominator at most the cap, which keeps powers small.
pub fn random_substochastic<R: Rng>(
    rng: &mut R,
    space: &MeasureSpace,
    density: f64,
    cfg: &GeneratorConfig,
) -> MatrixOperator {
    let n = space.dim();
    let density = density.clamp(0.0, 1.0);
    let denom = rng.gen_range(1..=cfg.denom_cap);
    let mut entries = vec![int(0); n * n];
    for j in 0..n {
        let mut support: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
        if support.is_empty() && density > 0.0 {
            support.push(rng.gen_range(0..n));
        }
        if support.is_empty() {
            continue;
        }
        let units = random_total(rng, denom);
        let mass = scatter(rng, units, &support, n);
        for (i, &a) in mass.iter().enumerate() {
            if a > 0 {
                let share = Rational::new(a.into(), denom.into());
                entries[i * n + j] = share * space.weight(j) / space.weight(i);
            }
        }
    }
    MatrixOperator::from_entries(space, &entries).expect("n×n entries")
}

/// Entrywise damping factors in `[0, 1]` over one random denominator.
pub fn random_damping<R: Rng>(rng: &mut R, space: &MeasureSpace, cfg: &GeneratorConfig) -> MatrixOperator {
    let n = space.dim();
    let q = rng.gen_range(1..=cfg.denom_cap as i64);
    let entries: Vec<Rational> = (0..n * n)
        .map(|_| Rational::new(rng.gen_range(0..=q).into(), q.into()))
        .collect();
    MatrixOperator::from_entries(space, &entries).expect("n×n entries")
}

/// Entries in `[−1, 1]`, about a third of them zero.
pub fn random_signed<R: Rng>(rng: &mut R, space: &MeasureSpace, cfg: &GeneratorConfig) -> MatrixOperator {
    let n = space.dim();
    let entries: Vec<Rational> = (0..n * n)
        .map(|_| match rng.gen_range(0..3) {
            0 => int(0),
            1 => random_unit(rng, cfg),
            _ => -random_unit(rng, cfg),
        })
        .collect();
    MatrixOperator::from_entries(space, &entries).expect("n×n entries")
}

/// `D·P` with `P` a permutation and `D` a diagonal in `[0, 1]`, rescaled by
/// the weights so each column has norm `d_j ≤ 1`. Half the draws keep
/// `P = I`, giving a positive diagonal contraction.
pub fn random_lattice_contraction<R: Rng>(
    rng: &mut R,
    space: &MeasureSpace,
    cfg: &GeneratorConfig,
) -> MatrixOperator {
    let n = space.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    if rng.gen_bool(0.5) {
        perm.shuffle(rng);
    }
    let mut entries = vec![int(0); n * n];
    for (j, &i) in perm.iter().enumerate() {
        entries[i * n + j] = random_unit(rng, cfg) * space.weight(j) / space.weight(i);
    }
    MatrixOperator::from_entries(space, &entries).expect("n×n entries")
}

/// `Σ c_j B^j` for `j ≤ degree` with nonnegative `c_j = a_j/E`, `Σ c_j ≤ 1`.
fn random_polynomial<R: Rng>(
    rng: &mut R,
    powers: &[MatrixOperator],
    cfg: &GeneratorConfig,
) -> (Vec<Rational>, MatrixOperator) {
    let denom = rng.gen_range(1..=cfg.denom_cap);
    let slots: Vec<usize> = (0..powers.len()).collect();
    let units = random_total(rng, denom).max(1);
    let coeffs: Vec<Rational> = scatter(rng, units, &slots, powers.len())
        .into_iter()
        .map(|a| Rational::new(a.into(), denom.into()))
        .collect();
    let space = powers[0].space().clone();
    let mut sum = MatrixOperator::zero(&space);
    for (c, p) in coeffs.iter().zip(powers) {
        sum = sum.try_add(&p.scale(c)).expect("same space");
    }
    (coeffs, sum)
}

fn powers_up_to(b: &MatrixOperator, degree: u32) -> Vec<MatrixOperator> {
    let mut powers = vec![MatrixOperator::identity(b.space())];
    for _ in 0..degree {
        let next = powers.last().expect("nonempty").compose(b).expect("same space");
        powers.push(next);
    }
    powers
}

pub fn random_dominated_pair(seed: u64, n: usize, density: f64) -> DominatedPair {
    random_dominated_pair_with(seed, n, density, &GeneratorConfig::default())
}

/// `S` substochastic and `T = H∘S` with `H` in `[0, 1]` on the counting
/// measure of `n` points.
pub fn random_dominated_pair_with(seed: u64, n: usize, density: f64, cfg: &GeneratorConfig) -> DominatedPair {
    let space = MeasureSpace::uniform(n.max(1)).expect("n ≥ 1");
    let mut rng = seeded(seed);
    let s = random_substochastic(&mut rng, &space, density, cfg);
    let h = random_damping(&mut rng, &space, cfg);
    let t = h.hadamard(&s).expect("same space");
    DominatedPair::new(s, t).expect("dominated by construction")
}

/// Inputs for the two-pair theorem: `S₁, S₂` polynomials in one random
/// contraction `B`, `T_i = H_i∘S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingQuadruple {
    pub s1: MatrixOperator,
    pub s2: MatrixOperator,
    pub t1: MatrixOperator,
    pub t2: MatrixOperator,
}

pub fn random_commuting_quadruple(seed: u64, n: usize, degree: u32) -> CommutingQuadruple {
    random_commuting_quadruple_with(seed, n, degree, &GeneratorConfig::default())
}

pub fn random_commuting_quadruple_with(
    seed: u64,
    n: usize,
    degree: u32,
    cfg: &GeneratorConfig,
) -> CommutingQuadruple {
    let space = MeasureSpace::uniform(n.max(1)).expect("n ≥ 1");
    let mut rng = seeded(seed);
    let b = random_substochastic(&mut rng, &space, 0.7, cfg);
    let powers = powers_up_to(&b, degree);
    let (_, s1) = random_polynomial(&mut rng, &powers, cfg);
    let (_, s2) = random_polynomial(&mut rng, &powers, cfg);
    let t1 = random_damping(&mut rng, &space, cfg).hadamard(&s1).expect("same space");
    let t2 = random_damping(&mut rng, &space, cfg).hadamard(&s2).expect("same space");
    CommutingQuadruple { s1, s2, t1, t2 }
}

pub fn random_commuting_family(seed: u64, count: usize, n: usize, degree: u32) -> CommutingFamily {
    random_commuting_family_with(seed, count, n, degree, &GeneratorConfig::default())
}

/// `S_i = Σ c_{ij} B^j` and `T_i = Σ h_{ij} c_{ij} C^j` with `C = H∘B` and
/// `h_{ij} ∈ [0, 1]`. Since `0 ≤ C ≤ B`, every `C^j ≤ B^j`, so `T_i ≤ S_i`,
/// and both the `S`s and the `T`s commute as polynomials in one operator.
/// Base exponents are all 1.
pub fn random_commuting_family_with(
    seed: u64,
    count: usize,
    n: usize,
    degree: u32,
    cfg: &GeneratorConfig,
) -> CommutingFamily {
    let space = MeasureSpace::uniform(n.max(1)).expect("n ≥ 1");
    let mut rng = seeded(seed);
    let b = random_substochastic(&mut rng, &space, 0.7, cfg);
    let c = random_damping(&mut rng, &space, cfg).hadamard(&b).expect("same space");
    let b_powers = powers_up_to(&b, degree);
    let c_powers = powers_up_to(&c, degree);
    let pairs = (0..count.max(1))
        .map(|_| {
            let (coeffs, s) = random_polynomial(&mut rng, &b_powers, cfg);
            let q = rng.gen_range(1..=cfg.denom_cap as i64);
            let mut t = MatrixOperator::zero(&space);
            for (coeff, p) in coeffs.iter().zip(&c_powers) {
                let damped = coeff * Rational::new(rng.gen_range(0..=q).into(), q.into());
                t = t.try_add(&p.scale(&damped)).expect("same space");
            }
            DominatedPair::new(s, t).expect("dominated by construction")
        })
        .collect::<Vec<_>>();
    let base = vec![1; pairs.len()];
    CommutingFamily::new(pairs, base).expect("commuting by construction")
}

/// A lattice contraction `Z` and a positive contraction `T` with `ZT = TZ`,
/// on the counting measure of `n` points.
///
/// Either `Z = c·P^r` for the cyclic shift `P` with `T` a circulant (a
/// polynomial in `P`), or `Z` constant on the blocks of a random partition
/// with `T` block diagonal.
pub fn random_commuting_lattice_pair(seed: u64, n: usize, cfg: &GeneratorConfig) -> (MatrixOperator, MatrixOperator) {
    let n = n.max(1);
    let space = MeasureSpace::uniform(n).expect("n ≥ 1");
    let mut rng = seeded(seed);
    if rng.gen_bool(0.5) {
        let mut shift = vec![int(0); n * n];
        for j in 0..n {
            shift[((j + 1) % n) * n + j] = int(1);
        }
        let p = MatrixOperator::from_entries(&space, &shift).expect("n×n entries");
        let z = p.power(rng.gen_range(0..n as u64)).scale(&random_unit(&mut rng, cfg));
        let powers = powers_up_to(&p, n as u32 - 1);
        let (_, t) = random_polynomial(&mut rng, &powers, cfg);
        (z, t)
    } else {
        let mut block = Vec::with_capacity(n);
        let mut current = 0usize;
        for i in 0..n {
            if i > 0 && rng.gen_bool(0.5) {
                current += 1;
            }
            block.push(current);
        }
        let scales: Vec<Rational> = (0..=current).map(|_| random_unit(&mut rng, cfg)).collect();
        let z_diag: Vec<Rational> = block.iter().map(|&b| scales[b].clone()).collect();
        let z = MatrixOperator::diagonal(&space, &z_diag).expect("n entries");
        let full = random_substochastic(&mut rng, &space, 0.8, cfg);
        // Dropping cross-block entries keeps column sums at most 1.
        let mask: Vec<Rational> = (0..n * n)
            .map(|idx| if block[idx / n] == block[idx % n] { int(1) } else { int(0) })
            .collect();
        let mask = MatrixOperator::from_entries(&space, &mask).expect("n×n entries");
        (z, full.hadamard(&mask).expect("same space"))
    }
}
