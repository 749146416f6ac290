//! Finite measure spaces and the L¹ vectors that live on them.

use std::fmt;
use std::ops::Neg;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::rational::{format_rational, int, Rational};
use crate::LatticeError;

/// A finite point set `{1, …, n}` with strictly positive rational weights.
///
/// Cloning is cheap; the weights are shared.
#[derive(Clone)]
pub struct MeasureSpace {
    weights: Arc<[Rational]>,
}

impl MeasureSpace {
    pub fn new(weights: Vec<Rational>) -> Result<Self, LatticeError> {
        if weights.is_empty() {
            return Err(LatticeError::EmptySpace);
        }
        if let Some(index) = weights.iter().position(|w| !w.is_positive()) {
            return Err(LatticeError::NonPositiveWeight {
                index,
                weight: format_rational(&weights[index]),
            });
        }
        Ok(Self {
            weights: weights.into(),
        })
    }

    /// Counting measure on `n` points.
    pub fn uniform(n: usize) -> Result<Self, LatticeError> {
        Self::new(vec![int(1); n])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> &Rational {
        &self.weights[index]
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| *w == self.weights[0])
    }

    pub(crate) fn ensure_same(&self, other: &MeasureSpace) -> Result<(), LatticeError> {
        if self == other {
            Ok(())
        } else {
            Err(LatticeError::SpaceMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }
}

impl PartialEq for MeasureSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.weights, &other.weights) || self.weights == other.weights
    }
}

impl Eq for MeasureSpace {}

impl fmt::Debug for MeasureSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let weights: Vec<String> = self.weights.iter().map(format_rational).collect();
        f.debug_struct("MeasureSpace").field("weights", &weights).finish()
    }
}

/// A function on a [`MeasureSpace`] with exact rational values.
#[derive(Clone, PartialEq, Eq)]
pub struct L1Vector {
    space: MeasureSpace,
    coords: Vec<Rational>,
}

impl L1Vector {
    pub fn new(space: &MeasureSpace, coords: Vec<Rational>) -> Result<Self, LatticeError> {
        if coords.len() != space.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: space.dim(),
                found: coords.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            coords,
        })
    }

    pub fn zero(space: &MeasureSpace) -> Self {
        Self {
            space: space.clone(),
            coords: vec![Rational::zero(); space.dim()],
        }
    }

    /// The `j`-th coordinate unit vector `e_j`.
    pub fn unit(space: &MeasureSpace, j: usize) -> Self {
        let mut v = Self::zero(space);
        v.coords[j] = int(1);
        v
    }

    /// The unit-norm extreme point `e_j / μ_j` of the L¹ ball.
    pub fn vertex(space: &MeasureSpace, j: usize) -> Self {
        let mut v = Self::zero(space);
        v.coords[j] = space.weight(j).recip();
        v
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// `Σ_i μ_i |x_i|`.
    pub fn l1_norm(&self) -> Rational {
        self.coords
            .iter()
            .zip(self.space.weights())
            .fold(Rational::zero(), |acc, (x, w)| acc + w * x.abs())
    }

    fn zip_with(
        &self,
        other: &L1Vector,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<L1Vector, LatticeError> {
        self.space.ensure_same(&other.space)?;
        Ok(L1Vector {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> L1Vector {
        L1Vector {
            space: self.space.clone(),
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn try_add(&self, other: &L1Vector) -> Result<L1Vector, LatticeError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &L1Vector) -> Result<L1Vector, LatticeError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: &Rational) -> L1Vector {
        self.map(|a| a * factor)
    }

    pub fn abs(&self) -> L1Vector {
        self.map(Signed::abs)
    }

    /// Coordinatewise minimum.
    pub fn meet(&self, other: &L1Vector) -> Result<L1Vector, LatticeError> {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &L1Vector) -> Result<L1Vector, LatticeError> {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    /// `x ∧ y` through the Riesz-space identity `½(x + y − |x − y|)`.
    pub fn meet_by_identity(&self, other: &L1Vector) -> Result<L1Vector, LatticeError> {
        let half = crate::rational::ratio(1, 2);
        let spread = self.try_sub(other)?.abs();
        Ok(self.try_add(other)?.try_sub(&spread)?.scale(&half))
    }
}

impl Neg for &L1Vector {
    type Output = L1Vector;

    fn neg(self) -> L1Vector {
        self.map(|a| -a)
    }
}

impl fmt::Debug for L1Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "L1Vector{coords:?}")
    }
}

pub fn l1_norm(x: &L1Vector) -> Rational {
    x.l1_norm()
}

pub fn vec_meet(x: &L1Vector, y: &L1Vector) -> Result<L1Vector, LatticeError> {
    x.meet(y)
}

pub fn vec_join(x: &L1Vector, y: &L1Vector) -> Result<L1Vector, LatticeError> {
    x.join(y)
}

pub fn vec_abs(x: &L1Vector) -> L1Vector {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn vector(space: &MeasureSpace, coords: &[(i64, i64)]) -> L1Vector {
        L1Vector::new(space, coords.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    #[test]
    fn space_rejects_bad_weights() {
        assert_eq!(MeasureSpace::new(vec![]).unwrap_err(), LatticeError::EmptySpace);
        assert!(matches!(
            MeasureSpace::new(vec![int(1), int(0)]),
            Err(LatticeError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(MeasureSpace::new(vec![ratio(-1, 2)]).is_err());
        assert!(MeasureSpace::new(vec![ratio(1, 7)]).is_ok());
    }

    #[test]
    fn spaces_compare_by_weights() {
        let a = MeasureSpace::new(vec![int(1), ratio(1, 2)]).unwrap();
        let b = MeasureSpace::new(vec![int(1), ratio(2, 4)]).unwrap();
        let c = MeasureSpace::new(vec![ratio(1, 2), int(1)]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn l1_norm_examples() {
        let uniform = MeasureSpace::uniform(2).unwrap();
        assert_eq!(L1Vector::zero(&uniform).l1_norm(), int(0));
        assert_eq!(vector(&uniform, &[(1, 1), (0, 1)]).l1_norm(), int(1));
        let weighted = MeasureSpace::new(vec![int(2), int(3)]).unwrap();
        assert_eq!(vector(&weighted, &[(1, 2), (-1, 3)]).l1_norm(), int(2));
    }

    #[test]
    fn vertices_have_unit_norm() {
        let space = MeasureSpace::new(vec![ratio(1, 3), int(5), ratio(7, 2)]).unwrap();
        for j in 0..3 {
            assert_eq!(L1Vector::vertex(&space, j).l1_norm(), int(1));
        }
    }

    #[test]
    fn lattice_examples() {
        let s = MeasureSpace::uniform(2).unwrap();
        let x = vector(&s, &[(1, 1), (-2, 1)]);
        let y = vector(&s, &[(0, 1), (3, 1)]);
        assert_eq!(vec_meet(&x, &x).unwrap(), x);
        assert_eq!(vec_meet(&x, &y).unwrap(), vector(&s, &[(0, 1), (-2, 1)]));
        assert_eq!(x.meet_by_identity(&y).unwrap(), vec_meet(&x, &y).unwrap());
        assert_eq!(vec_abs(&vector(&s, &[(-1, 2), (3, 1)])), vector(&s, &[(1, 2), (3, 1)]));
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let a = MeasureSpace::uniform(2).unwrap();
        let b = MeasureSpace::uniform(3).unwrap();
        let err = L1Vector::zero(&a).meet(&L1Vector::zero(&b)).unwrap_err();
        assert_eq!(err, LatticeError::SpaceMismatch { left: 2, right: 3 });
        assert!(L1Vector::new(&a, vec![int(1)]).is_err());
    }

    #[test]
    fn single_point_space_is_scalar_arithmetic() {
        let s = MeasureSpace::new(vec![ratio(3, 2)]).unwrap();
        let x = vector(&s, &[(-4, 3)]);
        assert_eq!(x.l1_norm(), int(2));
        assert_eq!(x.abs(), vector(&s, &[(4, 3)]));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=8).prop_map(|(n, d)| ratio(n, d))
    }

    fn triple() -> impl Strategy<Value = (L1Vector, L1Vector, L1Vector)> {
        (1usize..=4).prop_flat_map(|n| {
            let coords = || proptest::collection::vec(small_rational(), n);
            (coords(), coords(), coords()).prop_map(move |(a, b, c)| {
                let s = MeasureSpace::uniform(n).unwrap();
                (
                    L1Vector::new(&s, a).unwrap(),
                    L1Vector::new(&s, b).unwrap(),
                    L1Vector::new(&s, c).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn lattice_laws((x, y, z) in triple()) {
            prop_assert_eq!(x.meet(&y).unwrap(), y.meet(&x).unwrap());
            prop_assert_eq!(x.join(&y).unwrap(), y.join(&x).unwrap());
            prop_assert_eq!(
                x.meet(&y).unwrap().meet(&z).unwrap(),
                x.meet(&y.meet(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.join(&y).unwrap().join(&z).unwrap(),
                x.join(&y.join(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.meet(&x.join(&y).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(x.join(&x.meet(&y).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(x.abs(), x.join(&-&x).unwrap());
            prop_assert_eq!(x.meet_by_identity(&y).unwrap(), x.meet(&y).unwrap());
        }
    }
}
