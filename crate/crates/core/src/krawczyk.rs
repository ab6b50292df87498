//! The parametric Krawczyk operator
//! `K = x − Y·□H(x,T) + (1 − Y·□∂ₓH(I,T))·(I − x)` and the existence /
//! uniqueness test built on it.

use crate::error::{check_dim, Error, Result};
use crate::interval::{mul_up, IntervalBox, RealInterval};
use crate::linalg::{imatvec, inorm, mid_inverse, residual_matrix, PointMatrix};
use crate::system::Homotopy;
use num_complex::Complex64;

/// Upper bound on √2.
pub const SQRT2_UP: f64 = 1.4142135623730951_f64.next_up();

#[derive(Clone, Debug, PartialEq)]
pub struct KrawczykVerdict {
    /// `K ⊆ I`.
    pub existence: bool,
    /// `√2 · ‖1 − Y·□∂ₓH(I,T)‖ < 1`.
    pub uniqueness: bool,
    /// Upper bound on `‖1 − Y·□∂ₓH(I,T)‖∞`; `+∞` when the test errored.
    pub residual_norm: f64,
    pub operator_image: Option<IntervalBox>,
    /// Arithmetic failure that made the test fail, if any.
    pub error: Option<Error>,
}

impl KrawczykVerdict {
    pub fn passed(&self) -> bool {
        self.existence && self.uniqueness
    }

    fn failed(e: Error) -> Self {
        Self {
            existence: false,
            uniqueness: false,
            residual_norm: f64::INFINITY,
            operator_image: None,
            error: Some(e),
        }
    }
}

fn operator_parts(
    h: &Homotopy,
    x: &[Complex64],
    y: &PointMatrix,
    i: &IntervalBox,
    t: RealInterval,
) -> Result<(IntervalBox, f64)> {
    let n = h.dim();
    check_dim(n, x.len())?;
    check_dim(n, i.dim())?;
    check_dim(n, y.rows())?;
    check_dim(n, y.cols())?;
    let xb = IntervalBox::point(x);
    let hx = h.eval_interval(&xb, t)?;
    let jac = h.jac_x_interval(i, t)?;
    let r = residual_matrix(y, &jac)?;
    let norm = inorm(&r);
    let shift = imatvec(&r, &i.sub_box(&xb)?)?;
    let k = xb.sub_box(&y.mul_box(&hx)?)?.add_box(&shift)?.check_finite()?;
    Ok((k, norm))
}

/// `K_{x,Y}(I, T)`.
pub fn krawczyk_operator(
    h: &Homotopy,
    x: &[Complex64],
    y: &PointMatrix,
    i: &IntervalBox,
    t: RealInterval,
) -> Result<IntervalBox> {
    operator_parts(h, x, y, i, t).map(|(k, _)| k)
}

/// Existence and uniqueness test over `I × T`. Arithmetic errors produce a
/// failed verdict carrying the error.
pub fn parametric_krawczyk_test(
    h: &Homotopy,
    x: &[Complex64],
    y: &PointMatrix,
    i: &IntervalBox,
    t: RealInterval,
) -> KrawczykVerdict {
    let (k, norm) = match operator_parts(h, x, y, i, t) {
        Ok(v) => v,
        Err(e) => return KrawczykVerdict::failed(e),
    };
    let existence = match i.contains(&k) {
        Ok(b) => b,
        Err(e) => return KrawczykVerdict::failed(e),
    };
    KrawczykVerdict {
        existence,
        uniqueness: mul_up(SQRT2_UP, norm) < 1.0,
        residual_norm: norm,
        operator_image: Some(k),
        error: None,
    }
}

/// Shrink a box known to contain a zero of `H(·, t)` by intersecting it with
/// its own Krawczyk image, re-centering on the midpoint each round. Every zero
/// inside `i` stays inside the result.
pub fn tighten_enclosure(
    h: &Homotopy,
    i: &IntervalBox,
    t: f64,
    fallback_y: &PointMatrix,
    rounds: usize,
) -> IntervalBox {
    let tt = RealInterval::point(t);
    let mut e = i.clone();
    for _ in 0..rounds {
        let x = e.midpoint();
        if !matches!(e.contains_point(&x), Ok(true)) {
            break;
        }
        let y = h
            .jac_x_point(&x, t)
            .and_then(|j| mid_inverse(&j))
            .map(|(y, _)| y)
            .unwrap_or_else(|_| fallback_y.clone());
        let k = match krawczyk_operator(h, &x, &y, &e, tt) {
            Ok(k) => k,
            Err(_) => break,
        };
        match e.intersect(&k) {
            Ok(Some(next)) => {
                if next == e {
                    break;
                }
                e = next;
            }
            _ => break,
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::box_centered;
    use crate::system::{ParametricSystem, Term};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sqrt2_system() -> Homotopy {
        let sys = ParametricSystem::new(
            1,
            0,
            vec![vec![
                Term::new(c(1.0), None, vec![2]),
                Term::new(c(-2.0), None, vec![0]),
            ]],
        )
        .unwrap();
        Homotopy::new(sys, vec![], vec![]).unwrap()
    }

    fn scalar(v: f64) -> PointMatrix {
        PointMatrix::new(1, 1, vec![c(v)]).unwrap()
    }

    #[test]
    fn affine_system_collapses_to_root() {
        let sys = ParametricSystem::new(
            1,
            0,
            vec![vec![
                Term::new(c(1.0), None, vec![1]),
                Term::new(c(-0.3), None, vec![0]),
            ]],
        )
        .unwrap();
        let h = Homotopy::new(sys, vec![], vec![]).unwrap();
        let i = box_centered(&[c(0.5)], 1.0).unwrap();
        let k = krawczyk_operator(&h, &[c(0.5)], &scalar(1.0), &i, RealInterval::point(0.0)).unwrap();
        assert!(k[0].contains_point(c(0.3)));
        assert!(k.radius() < 1e-15);
    }

    #[test]
    fn certifies_sqrt2() {
        let h = sqrt2_system();
        let x = [c(1.414)];
        let y = scalar(1.0 / (2.0 * 1.414));
        let i = box_centered(&x, 0.01).unwrap();
        let v = parametric_krawczyk_test(&h, &x, &y, &i, RealInterval::point(1.0));
        assert!(v.passed(), "{v:?}");
        assert!(v.operator_image.unwrap()[0].contains_point(c(std::f64::consts::SQRT_2)));
    }

    #[test]
    fn tiny_box_fails_existence() {
        let h = sqrt2_system();
        let x = [c(1.414)];
        let y = scalar(1.0 / (2.0 * 1.414));
        let i = box_centered(&x, 1e-8).unwrap();
        let v = parametric_krawczyk_test(&h, &x, &y, &i, RealInterval::point(1.0));
        assert!(!v.existence);
    }

    #[test]
    fn huge_box_fails_uniqueness() {
        let h = sqrt2_system();
        let x = [c(1.414)];
        let y = scalar(1.0 / (2.0 * 1.414));
        let i = box_centered(&x, 1e3).unwrap();
        let v = parametric_krawczyk_test(&h, &x, &y, &i, RealInterval::point(1.0));
        assert!(!v.uniqueness);
        assert!(v.residual_norm >= 1.0);
    }

    #[test]
    fn dimension_mismatch_fails_the_test() {
        let h = sqrt2_system();
        let i = box_centered(&[c(1.0), c(1.0)], 0.1).unwrap();
        let v = parametric_krawczyk_test(&h, &[c(1.0)], &scalar(1.0), &i, RealInterval::point(0.0));
        assert!(!v.passed());
        assert!(matches!(v.error, Some(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tightening_keeps_the_root() {
        let h = sqrt2_system();
        let i = box_centered(&[c(1.414)], 0.01).unwrap();
        let e = tighten_enclosure(&h, &i, 1.0, &scalar(0.35), 8);
        assert!(e[0].contains_point(c(std::f64::consts::SQRT_2)));
        assert!(e.radius() < 1e-12, "{e:?}");
    }
}
