//! The univariate family `x² − 1 − m + m·t`.

use crate::error::{Error, Result};
use crate::system::{Homotopy, ParametricSystem, Term};
use num_complex::Complex64;

/// `x² − 1 − m + p` with `p: 0 → m`, started at `√(1 + m)`.
pub fn gen_newton_homotopy(m: f64) -> Result<(Homotopy, Vec<Complex64>)> {
    if !(m > -1.0) || !m.is_finite() {
        return Err(Error::InvalidM(m));
    }
    let c = |v: f64| Complex64::new(v, 0.0);
    let sys = ParametricSystem::new(
        1,
        1,
        vec![vec![
            Term::new(c(1.0), None, vec![2]),
            Term::new(c(-1.0 - m), None, vec![0]),
            Term::new(c(1.0), Some(0), vec![0]),
        ]],
    )?;
    let h = Homotopy::new(sys, vec![c(0.0)], vec![c(m)])?;
    Ok((h, vec![c((1.0 + m).sqrt())]))
}

/// The exact path `x(t) = √(1 + m − m·t)`.
pub fn newton_path(m: f64, t: f64) -> f64 {
    (1.0 + m - m * t).sqrt()
}
