//! The worked examples and the L^p counterexample, transcribed under the
//! column-action convention on two-point spaces.

use num_traits::Signed;
use thiserror::Error;

use crate::operator::MatrixOperator;
use crate::rational::{format_rational, int, ratio, Rational};
use crate::space::MeasureSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("parameter {name} = {value} must be nonnegative")]
    Negative { name: &'static str, value: String },
    #[error("u + v = {0} exceeds 1, so Z is not a contraction")]
    NotContractive(String),
}

/// Parameters `u, v, λ` of the first example: `Z(x₁, x₂) = (ux₁ + vx₂, ux₂)`,
/// `S(x₁, x₂) = ((x₁ + x₂)/2, x₂/2)`, `T(x₁, x₂) = (λx₂, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example1Params {
    pub u: Rational,
    pub v: Rational,
    pub lambda: Rational,
}

impl Example1Params {
    /// Requires `u, v, λ ≥ 0` and `u + v ≤ 1`. `λ > 1/2` is accepted; the pair
    /// is then simply not dominated.
    pub fn new(u: Rational, v: Rational, lambda: Rational) -> Result<Self, GalleryError> {
        for (name, value) in [("u", &u), ("v", &v), ("lambda", &lambda)] {
            if value.is_negative() {
                return Err(GalleryError::Negative {
                    name,
                    value: format_rational(value),
                });
            }
        }
        let sum = &u + &v;
        if sum > int(1) {
            return Err(GalleryError::NotContractive(format_rational(&sum)));
        }
        Ok(Self { u, v, lambda })
    }

    /// `u + v = 1`, the case the closed form `(1 + u(1 − 2λ))/2` is stated for.
    pub fn on_contractive_boundary(&self) -> bool {
        &self.u + &self.v == int(1)
    }

    /// `T ≤ S` holds iff `2λ ≤ 1`.
    pub fn dominated(&self) -> bool {
        &self.lambda * int(2) <= int(1)
    }
}

/// Closed-form norms of the first example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example1Norms {
    pub z: Rational,
    pub s: Rational,
    pub t: Rational,
    pub z_s_minus_t: Rational,
}

#[derive(Debug, Clone)]
pub struct Example1 {
    pub params: Example1Params,
    pub z: MatrixOperator,
    pub s: MatrixOperator,
    pub t: MatrixOperator,
    pub closed_form: Example1Norms,
}

fn counting_plane() -> MeasureSpace {
    MeasureSpace::uniform(2).expect("two points")
}

fn matrix(space: &MeasureSpace, rows: [[Rational; 2]; 2]) -> MatrixOperator {
    let rows: Vec<Vec<Rational>> = rows.into_iter().map(Vec::from).collect();
    MatrixOperator::from_rows(space, &rows).expect("2x2 on a two-point space")
}

pub fn example1(params: &Example1Params) -> Result<Example1, GalleryError> {
    let params = Example1Params::new(params.u.clone(), params.v.clone(), params.lambda.clone())?;
    let space = counting_plane();
    let Example1Params { u, v, lambda } = &params;
    let z = matrix(&space, [[u.clone(), v.clone()], [int(0), u.clone()]]);
    let s = matrix(&space, [[ratio(1, 2), ratio(1, 2)], [int(0), ratio(1, 2)]]);
    let t = matrix(&space, [[int(0), lambda.clone()], [int(0), int(0)]]);

    // Z(S − T) = [[u/2, u(1/2 − λ) + v/2], [0, u/2]]; its column sums give the
    // norm. With u + v = 1 and 2λ ≤ 1 this is (1 + u(1 − 2λ))/2.
    let half = ratio(1, 2);
    let first = u * &half;
    let second = (u * (&half - lambda) + v * &half).abs() + u * &half;
    let closed_form = Example1Norms {
        z: u + v,
        s: int(1),
        t: lambda.clone(),
        z_s_minus_t: first.max(second),
    };
    Ok(Example1 {
        params,
        z,
        s,
        t,
        closed_form,
    })
}

/// `(1 + u(1 − 2λ))/2`, the stated closed form for `u + v = 1`, `2λ ≤ 1`.
pub fn example1_stated_norm(u: &Rational, lambda: &Rational) -> Rational {
    (int(1) + u * (int(1) - lambda * int(2))) / int(2)
}

/// The second example: `S(x₁, x₂) = (x₁/2 + x₂/3, x₁/2 + x₂/3)` and
/// `T(x₁, x₂) = (x₂/4, 0)` on the counting measure of two points.
///
/// `‖S − T‖ = 1` rules out the one-step hypothesis, but `‖S² − T²‖ = 15/18`,
/// so the `Z`-weighted dominance check with `Z = I` and `n₀ = 2` applies.
pub fn example2() -> (MatrixOperator, MatrixOperator) {
    let space = counting_plane();
    let s = matrix(&space, [[ratio(1, 2), ratio(1, 3)], [ratio(1, 2), ratio(1, 3)]]);
    let t = matrix(&space, [[int(0), ratio(1, 4)], [int(0), int(0)]]);
    (s, t)
}

/// The L^p pair on two points of mass 1/2:
/// `S(x₁, x₂) = ((x₁ + x₂)/2, (x₁ + x₂)/2)`, `T(x₁, x₂) = (0, x₁/2)`.
pub fn remark_lp_counterexample() -> (MatrixOperator, MatrixOperator) {
    let space = MeasureSpace::new(vec![ratio(1, 2), ratio(1, 2)]).expect("positive weights");
    let s = matrix(&space, [[ratio(1, 2), ratio(1, 2)], [ratio(1, 2), ratio(1, 2)]]);
    let t = matrix(&space, [[int(0), int(0)], [ratio(1, 2), int(0)]]);
    (s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(u: (i64, i64), v: (i64, i64), l: (i64, i64)) -> Example1Params {
        Example1Params::new(ratio(u.0, u.1), ratio(v.0, v.1), ratio(l.0, l.1)).unwrap()
    }

    fn engine_norms(e: &Example1) -> Example1Norms {
        Example1Norms {
            z: e.z.operator_norm_l1(),
            s: e.s.operator_norm_l1(),
            t: e.t.operator_norm_l1(),
            z_s_minus_t: e.z.compose(&e.s.try_sub(&e.t).unwrap()).unwrap().operator_norm_l1(),
        }
    }

    #[test]
    fn example1_quarter_lambda() {
        let e = example1(&params((1, 2), (1, 2), (1, 4))).unwrap();
        assert_eq!(e.closed_form.z_s_minus_t, ratio(5, 8));
        assert_eq!(engine_norms(&e), e.closed_form);
        assert!(e.params.on_contractive_boundary() && e.params.dominated());
        assert!(e.z.commutes(&e.s).unwrap());
    }

    #[test]
    fn example1_boundary_lambda() {
        let e = example1(&params((1, 3), (2, 3), (1, 2))).unwrap();
        assert_eq!(e.closed_form.z_s_minus_t, ratio(1, 2));
        assert_eq!(engine_norms(&e), e.closed_form);
        assert!(e.s.dominates(&e.t).unwrap());
    }

    #[test]
    fn example1_u_zero() {
        let e = example1(&params((0, 1), (1, 1), (0, 1))).unwrap();
        assert_eq!(e.closed_form.t, int(0));
        assert_eq!(e.closed_form.z_s_minus_t, ratio(1, 2));
        assert_eq!(engine_norms(&e), e.closed_form);
    }

    #[test]
    fn example1_interior_and_undominated_cases() {
        // u + v < 1 and λ > 1/2 fall outside the stated closed form; the
        // general column-sum form still has to match the engine.
        for (u, v, l) in [((1, 4), (1, 4), (1, 3)), ((1, 2), (1, 2), (3, 4)), ((1, 5), (0, 1), (1, 1))] {
            let e = example1(&params(u, v, l)).unwrap();
            assert_eq!(engine_norms(&e), e.closed_form);
        }
        assert!(!params((1, 2), (1, 2), (3, 4)).dominated());
    }

    #[test]
    fn example1_rejects_bad_parameters() {
        assert!(matches!(
            Example1Params::new(ratio(-1, 2), int(0), int(0)),
            Err(GalleryError::Negative { name: "u", .. })
        ));
        assert!(matches!(
            Example1Params::new(ratio(2, 3), ratio(2, 3), int(0)),
            Err(GalleryError::NotContractive(_))
        ));
    }

    #[test]
    fn example2_regression_values() {
        let (s, t) = example2();
        assert_eq!(s.operator_norm_l1(), int(1));
        assert_eq!(t.operator_norm_l1(), ratio(1, 4));
        assert_eq!(s.try_sub(&t).unwrap().operator_norm_l1(), int(1));
        assert_eq!(s.power(2).try_sub(&t.power(2)).unwrap().operator_norm_l1(), ratio(15, 18));
        assert!(s.dominates(&t).unwrap());
        assert!(s.is_positive() && t.is_positive());
    }

    #[test]
    fn remark_pair_in_l1() {
        let (s, t) = remark_lp_counterexample();
        // column sums of S − T = [[1/2, 1/2], [0, 1/2]] are 1/2 and 1
        assert_eq!(s.try_sub(&t).unwrap().operator_norm_l1(), int(1));
        assert!(s.dominates(&t).unwrap());
        assert_eq!(s.power(2), s);
        assert!(t.power(2).is_zero());
    }
}
