//! Uncertified total-degree continuation used only to obtain start solutions.
//!
//! The start system is `γ·(x_i^{d_i} − 1)` for a random unit `γ`; it is moved
//! linearly to `F(·; p_start)` with an RK4 predictor and Newton corrector.
//! Nothing produced here ever enters a certificate.

use crate::error::{Error, Result};
use crate::system::{Homotopy, ParametricSystem, Term};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Points closer than this (max-norm) are treated as the same root.
pub const DEDUP_TOL: f64 = 1e-8;

const ATTEMPTS: usize = 4;

fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Linear homotopy from `γ·G` to `F(·; p_start)` expressed as a coefficient
/// segment in a fresh parametric system with one parameter per monomial.
fn total_degree_homotopy(sys: &ParametricSystem, p_start: &[Complex64], gamma: Complex64) -> Result<Homotopy> {
    let n = sys.n();
    let degrees = sys.degrees();
    let mut index: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
    let mut start = Vec::new();
    let mut target = Vec::new();
    let mut slot = |i: usize, e: Vec<u32>, start: &mut Vec<Complex64>, target: &mut Vec<Complex64>| {
        *index.entry((i, e)).or_insert_with(|| {
            start.push(Complex64::new(0.0, 0.0));
            target.push(Complex64::new(0.0, 0.0));
            start.len() - 1
        })
    };
    for (i, eq) in sys.equations().iter().enumerate() {
        for t in eq {
            let v = match t.param {
                Some(k) => t.coeff * p_start[k],
                None => t.coeff,
            };
            let k = slot(i, t.exponents.clone(), &mut start, &mut target);
            target[k] += v;
        }
        let mut lead = vec![0; n];
        lead[i] = degrees[i];
        let k = slot(i, lead, &mut start, &mut target);
        start[k] += gamma;
        let k = slot(i, vec![0; n], &mut start, &mut target);
        start[k] -= gamma;
    }
    let mut equations = vec![Vec::new(); n];
    for ((i, e), k) in index {
        equations[i].push(Term::new(Complex64::new(1.0, 0.0), Some(k), e));
    }
    let m = start.len();
    Homotopy::new(ParametricSystem::new(n, m, equations)?, start, target)
}

fn start_points(degrees: &[u32]) -> Vec<Vec<Complex64>> {
    let mut out = vec![Vec::new()];
    for &d in degrees {
        let roots: Vec<Complex64> = (0..d)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64))
            .collect();
        out = out
            .into_iter()
            .flat_map(|p| {
                roots.iter().map(move |&r| {
                    let mut q = p.clone();
                    q.push(r);
                    q
                })
            })
            .collect();
    }
    out
}

fn velocity(h: &Homotopy, x: &[Complex64], t: f64) -> Option<Vec<Complex64>> {
    let j = h.jac_x_point(x, t).ok()?;
    let d = h.dt_point(x, t).ok()?;
    let v = j.lu().ok()?.solve(&d).ok()?;
    Some(v.into_iter().map(|z| -z).collect())
}

fn axpy(x: &[Complex64], a: f64, v: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(v).map(|(&xi, &vi)| xi + vi * a).collect()
}

fn rk4(h: &Homotopy, x: &[Complex64], t: f64, s: f64) -> Option<Vec<Complex64>> {
    let k1 = velocity(h, x, t)?;
    let k2 = velocity(h, &axpy(x, s / 2.0, &k1), t + s / 2.0)?;
    let k3 = velocity(h, &axpy(x, s / 2.0, &k2), t + s / 2.0)?;
    let k4 = velocity(h, &axpy(x, s, &k3), t + s)?;
    Some(
        (0..x.len())
            .map(|i| x[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (s / 6.0))
            .collect(),
    )
}

fn newton_step(h: &Homotopy, x: &mut [Complex64], t: f64) -> Option<f64> {
    let f = h.eval_point(x, t).ok()?;
    let d = h.jac_x_point(x, t).ok()?.lu().ok()?.solve(&f).ok()?;
    for (xi, di) in x.iter_mut().zip(&d) {
        *xi -= di;
    }
    Some(norm_inf(&d))
}

fn correct(h: &Homotopy, x: &mut [Complex64], t: f64) -> bool {
    let mut prev = f64::INFINITY;
    for _ in 0..4 {
        let Some(d) = newton_step(h, x, t) else {
            return false;
        };
        let scale = 1.0 + norm_inf(x);
        if d > 0.1 * scale || d > 0.5 * prev {
            return false;
        }
        if d <= 1e-9 * scale {
            return true;
        }
        prev = d;
    }
    false
}

fn track_uncertified(h: &Homotopy, start: &[Complex64], max_step: f64) -> Option<Vec<Complex64>> {
    let mut x = start.to_vec();
    let mut t = 0.0;
    let mut step = max_step / 4.0;
    let mut streak = 0;
    while t < 1.0 {
        let s = step.min(1.0 - t);
        let t_next = if s == 1.0 - t { 1.0 } else { t + s };
        let ok = match rk4(h, &x, t, s) {
            Some(mut guess) => {
                let good = correct(h, &mut guess, t_next);
                if good {
                    x = guess;
                }
                good
            }
            None => false,
        };
        if ok {
            t = t_next;
            streak += 1;
            if streak >= 3 {
                step = (step * 2.0).min(max_step);
                streak = 0;
            }
        } else {
            step /= 2.0;
            streak = 0;
            if step < 1e-13 {
                return None;
            }
        }
        if norm_inf(&x) > 1e8 {
            return None;
        }
    }
    for _ in 0..50 {
        match newton_step(h, &mut x, 1.0) {
            Some(d) if d <= 4.0 * f64::EPSILON * (1.0 + norm_inf(&x)) => break,
            Some(_) => {}
            None => return None,
        }
    }
    Some(x)
}

fn dedupe(points: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for p in points {
        let dup = out
            .iter()
            .any(|q| p.iter().zip(q).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) < DEDUP_TOL);
        if !dup {
            out.push(p);
        }
    }
    out
}

/// All isolated solutions of `F(·; p_start)`, assuming the total-degree
/// (Bézout) count is attained. Deterministic in `seed`.
pub fn bootstrap_starts(sys: &ParametricSystem, p_start: &[Complex64], seed: u64) -> Result<Vec<Vec<Complex64>>> {
    let degrees = sys.degrees();
    if degrees.contains(&0) {
        return Err(Error::InvalidSystem("an equation has degree zero".into()));
    }
    let expected: usize = degrees.iter().map(|&d| d as usize).product();
    let starts = start_points(&degrees);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let mut max_step = 0.05;
    for _ in 0..ATTEMPTS {
        let gamma = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let h = total_degree_homotopy(sys, p_start, gamma)?;
        let ends: Vec<Option<Vec<Complex64>>> = starts.par_iter().map(|s| track_uncertified(&h, s, max_step)).collect();
        let target_res = |x: &Vec<Complex64>| sys.residual(x, p_start).map(|r| r <= 1e-8).unwrap_or(false);
        let found = dedupe(ends.into_iter().flatten().filter(target_res).collect());
        if found.len() == expected {
            return Ok(found);
        }
        best = best.max(found.len());
        max_step /= 5.0;
    }
    Err(Error::RootCountMismatch { expected, found: best })
}
