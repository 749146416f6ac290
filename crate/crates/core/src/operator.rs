//! Exact square matrices acting on L¹ vectors.
//!
//! Column-action convention: the image of the `j`-th unit vector is column
//! `j`, so `(Ax)_i = Σ_j A_ij x_j`.
//!
//! Entries are stored as integer numerators over one shared positive
//! denominator, reduced so that the gcd of every numerator and the
//! denominator is 1. Products and sums stay in integer arithmetic, which
//! keeps long power sequences tractable.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, int, Rational};
use crate::space::{L1Vector, MeasureSpace};
use crate::LatticeError;

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixOperator {
    space: MeasureSpace,
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl MatrixOperator {
    fn from_parts(space: MeasureSpace, numer: Vec<BigInt>, denom: BigInt) -> Self {
        debug_assert!(denom.is_positive());
        let mut op = Self {
            space,
            numer,
            denom,
        };
        op.normalize();
        op
    }

    fn normalize(&mut self) {
        if self.numer.iter().all(Zero::is_zero) {
            self.denom = BigInt::one();
            return;
        }
        let mut g = self.denom.clone();
        for n in &self.numer {
            if g.is_one() {
                return;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            for n in &mut self.numer {
                *n /= &g;
            }
            self.denom /= &g;
        }
    }

    /// Row-major entries; `entries[i * n + j]` is `A_ij`.
    pub fn from_entries(space: &MeasureSpace, entries: &[Rational]) -> Result<Self, LatticeError> {
        let n = space.dim();
        if entries.len() != n * n {
            return Err(LatticeError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let denom = entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let numer = entries
            .iter()
            .map(|e| e.numer() * (&denom / e.denom()))
            .collect();
        Ok(Self::from_parts(space.clone(), numer, denom))
    }

    pub fn from_rows(space: &MeasureSpace, rows: &[Vec<Rational>]) -> Result<Self, LatticeError> {
        let n = space.dim();
        if rows.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let flat: Vec<Rational> = rows.iter().flatten().cloned().collect();
        Self::from_entries(space, &flat)
    }

    pub fn zero(space: &MeasureSpace) -> Self {
        let n = space.dim();
        Self {
            space: space.clone(),
            numer: vec![BigInt::zero(); n * n],
            denom: BigInt::one(),
        }
    }

    pub fn identity(space: &MeasureSpace) -> Self {
        Self::scalar(space, &int(1))
    }

    /// `c · I`.
    pub fn scalar(space: &MeasureSpace, c: &Rational) -> Self {
        Self::diagonal(space, &vec![c.clone(); space.dim()]).expect("length matches by construction")
    }

    pub fn diagonal(space: &MeasureSpace, diag: &[Rational]) -> Result<Self, LatticeError> {
        let n = space.dim();
        if diag.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: diag.len(),
            });
        }
        let mut entries = vec![Rational::zero(); n * n];
        for (i, d) in diag.iter().enumerate() {
            entries[i * n + i] = d.clone();
        }
        Self::from_entries(space, &entries)
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.numer[i * self.dim() + j].clone(), self.denom.clone())
    }

    pub fn entries(&self) -> Vec<Rational> {
        self.numer
            .iter()
            .map(|n| Rational::new(n.clone(), self.denom.clone()))
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Image of the `j`-th coordinate unit vector.
    pub fn column(&self, j: usize) -> L1Vector {
        let n = self.dim();
        L1Vector::new(&self.space, (0..n).map(|i| self.entry(i, j)).collect())
            .expect("column length equals dimension")
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.space)
    }

    fn ensure_same(&self, other: &MatrixOperator) -> Result<(), LatticeError> {
        self.space.ensure_same(&other.space)
    }

    fn combine(
        &self,
        other: &MatrixOperator,
        f: impl Fn(BigInt, BigInt) -> BigInt,
    ) -> Result<MatrixOperator, LatticeError> {
        self.ensure_same(other)?;
        let denom = self.denom.lcm(&other.denom);
        let left = &denom / &self.denom;
        let right = &denom / &other.denom;
        let numer = self
            .numer
            .iter()
            .zip(&other.numer)
            .map(|(a, b)| f(a * &left, b * &right))
            .collect();
        Ok(Self::from_parts(self.space.clone(), numer, denom))
    }

    pub fn try_add(&self, other: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
        self.combine(other, |a, b| a - b)
    }

    /// Entrywise minimum.
    #[cfg(test)]
    pub(crate) fn entrywise_min(&self, other: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
        self.combine(other, |a, b| a.min(b))
    }

    pub fn scale(&self, factor: &Rational) -> MatrixOperator {
        let numer = self.numer.iter().map(|n| n * factor.numer()).collect();
        let denom = &self.denom * factor.denom();
        Self::from_parts(self.space.clone(), numer, denom)
    }

    pub fn negate(&self) -> MatrixOperator {
        Self {
            space: self.space.clone(),
            numer: self.numer.iter().map(|n| -n).collect(),
            denom: self.denom.clone(),
        }
    }

    /// Entrywise absolute value.
    pub fn abs_entries(&self) -> MatrixOperator {
        Self {
            space: self.space.clone(),
            numer: self.numer.iter().map(Signed::abs).collect(),
            denom: self.denom.clone(),
        }
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
        self.ensure_same(other)?;
        let numer = self
            .numer
            .iter()
            .zip(&other.numer)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self::from_parts(
            self.space.clone(),
            numer,
            &self.denom * &other.denom,
        ))
    }

    /// The product `self · other` (apply `other` first).
    pub fn compose(&self, other: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
        let mut product = self.compose_unreduced(other)?;
        product.normalize();
        Ok(product)
    }

    /// `self · other` over the product of the denominators, skipping the gcd
    /// reduction. The result is value-correct but not canonical, so it must
    /// not be compared with `==`; long exponent walks use it because the
    /// reduction dominates their cost.
    pub(crate) fn compose_unreduced(&self, other: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
        self.ensure_same(other)?;
        let n = self.dim();
        let mut numer = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.numer[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.numer[k * n + j];
                    if !b.is_zero() {
                        numer[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(Self {
            space: self.space.clone(),
            numer,
            denom: &self.denom * &other.denom,
        })
    }

    fn mul(&self, other: &MatrixOperator) -> MatrixOperator {
        self.compose(other).expect("operands share a space")
    }

    /// `self^exp`, with `self^0 = I`.
    pub fn power(&self, exp: u64) -> MatrixOperator {
        let mut result = Self::identity(&self.space);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn apply(&self, x: &L1Vector) -> Result<L1Vector, LatticeError> {
        self.space.ensure_same(x.space())?;
        let n = self.dim();
        let coords = (0..n)
            .map(|i| {
                (0..n).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(self.numer[i * n + j].clone()) * &x.coords()[j]
                }) / Rational::from_integer(self.denom.clone())
            })
            .collect();
        L1Vector::new(&self.space, coords)
    }

    pub fn is_positive(&self) -> bool {
        self.numer.iter().all(|n| !n.is_negative())
    }

    /// `self ≥ other` in the operator order, i.e. `self − other` is positive.
    pub fn dominates(&self, other: &MatrixOperator) -> Result<bool, LatticeError> {
        Ok(self.try_sub(other)?.is_positive())
    }

    /// Weighted column sums `(Σ_i μ_i |A_ij|) / μ_j`; the L¹ norm of `A` at the
    /// vertex `e_j / μ_j`.
    pub fn column_norms(&self) -> Vec<Rational> {
        let n = self.dim();
        let weights = self.space.weights();
        let denom = Rational::from_integer(self.denom.clone());
        if self.space.is_uniform() {
            return (0..n)
                .map(|j| {
                    let sum: BigInt = (0..n).map(|i| self.numer[i * n + j].abs()).sum();
                    Rational::from_integer(sum) / &denom
                })
                .collect();
        }
        (0..n)
            .map(|j| {
                let sum = (0..n).fold(Rational::zero(), |acc, i| {
                    acc + &weights[i] * Rational::from_integer(self.numer[i * n + j].abs())
                });
                sum / (&weights[j] * &denom)
            })
            .collect()
    }

    /// Exact induced L¹ norm `max_j (Σ_i μ_i |A_ij|) / μ_j`.
    ///
    /// The L¹ unit ball is the convex hull of `±e_j / μ_j`, so the supremum of
    /// the convex map `x ↦ ‖Ax‖` is attained at one of those vertices.
    pub fn operator_norm_l1(&self) -> Rational {
        norm_of_numerators(&self.space, &self.numer, &self.denom).reduced()
    }

    /// `‖self − other‖` without forming the reduced difference.
    pub fn distance_l1(&self, other: &MatrixOperator) -> Result<Rational, LatticeError> {
        Ok(self.distance_l1_unreduced(other)?.reduced())
    }

    /// [`Self::distance_l1`] as a possibly unreduced fraction. Comparisons are
    /// exact; call `reduced()` before printing or testing equality.
    pub(crate) fn distance_l1_unreduced(&self, other: &MatrixOperator) -> Result<Rational, LatticeError> {
        self.ensure_same(other)?;
        let numer: Vec<BigInt> = if self.denom == other.denom {
            self.numer.iter().zip(&other.numer).map(|(a, b)| a - b).collect()
        } else {
            self.numer
                .iter()
                .zip(&other.numer)
                .map(|(a, b)| a * &other.denom - b * &self.denom)
                .collect()
        };
        let denom = if self.denom == other.denom {
            self.denom.clone()
        } else {
            &self.denom * &other.denom
        };
        Ok(norm_of_numerators(&self.space, &numer, &denom))
    }

    pub fn is_contraction_l1(&self) -> bool {
        self.operator_norm_l1() <= int(1)
    }

    /// The adjoint under the pairing `⟨x, y⟩ = Σ μ_i x_i y_i`:
    /// `A*_ji = μ_i A_ij / μ_j`.
    pub fn mu_adjoint(&self) -> MatrixOperator {
        let n = self.dim();
        let w = self.space.weights();
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = &w[i] * self.entry(i, j) / &w[j];
            }
        }
        Self::from_entries(&self.space, &entries).expect("square by construction")
    }

    /// Induced L^∞ norm, the maximum absolute row sum.
    pub fn operator_norm_linf(&self) -> Rational {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let sum: BigInt = (0..n).map(|j| self.numer[i * n + j].abs()).sum();
                Rational::new(sum, self.denom.clone())
            })
            .max()
            .expect("spaces have at least one point")
    }

    pub fn commutes(&self, other: &MatrixOperator) -> Result<bool, LatticeError> {
        Ok(self.compose(other)? == other.compose(self)?)
    }
}

impl fmt::Debug for MatrixOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        write!(f, "MatrixOperator{rows:?}")
    }
}

/// Induced L¹ norm of the matrix `numer / denom`, possibly unreduced. On the
/// counting measure the column sums are compared as integers.
fn norm_of_numerators(space: &MeasureSpace, numer: &[BigInt], denom: &BigInt) -> Rational {
    let n = space.dim();
    if space.is_uniform() {
        let best = (0..n)
            .map(|j| (0..n).map(|i| numer[i * n + j].abs()).sum::<BigInt>())
            .max()
            .expect("spaces have at least one point");
        return Rational::new_raw(best, denom.clone());
    }
    let weights = space.weights();
    (0..n)
        .map(|j| {
            let sum = (0..n).fold(Rational::zero(), |acc, i| {
                acc + &weights[i] * Rational::from_integer(numer[i * n + j].abs())
            });
            sum / (&weights[j] * Rational::from_integer(denom.clone()))
        })
        .max()
        .expect("spaces have at least one point")
}

pub fn apply(t: &MatrixOperator, x: &L1Vector) -> Result<L1Vector, LatticeError> {
    t.apply(x)
}

pub fn compose(a: &MatrixOperator, b: &MatrixOperator) -> Result<MatrixOperator, LatticeError> {
    a.compose(b)
}

pub fn power(t: &MatrixOperator, n: u64) -> MatrixOperator {
    t.power(n)
}

pub fn is_positive(t: &MatrixOperator) -> bool {
    t.is_positive()
}

pub fn dominates(s: &MatrixOperator, t: &MatrixOperator) -> Result<bool, LatticeError> {
    s.dominates(t)
}

pub fn operator_norm_l1(a: &MatrixOperator) -> Rational {
    a.operator_norm_l1()
}

pub fn is_contraction_l1(t: &MatrixOperator) -> bool {
    t.is_contraction_l1()
}

pub fn commutes(a: &MatrixOperator, b: &MatrixOperator) -> Result<bool, LatticeError> {
    a.commutes(b)
}
