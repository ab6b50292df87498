//! Best rank-one approximation as a real parameter homotopy.
//!
//! Unknowns are `x, y ∈ ℝⁿ` (ordered `x_1..x_n, y_1..y_n`), parameters are
//! the entries of `A` (index `k·n + j`). With
//! `ℓ(x, y; A) = Σ (A_kj − x_k y_j)²`, the equations are `∂ℓ/∂x_k` for
//! `k = 2..n`, `∂ℓ/∂y_j` for all `j`, and the chart `bᵀx − c`.

use super::svd::svd_oracle;
use crate::error::{Error, Result};
use crate::system::{Homotopy, ParametricSystem, Term};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum gap `σ₁ − σ₂` accepted for the start matrix.
pub const MIN_GAP: f64 = 1e-8;

/// Which start matrix `A0` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LowrankStart {
    /// Seeded matrix with entries in `[0.5, 1.5]/n` (simple top singular value).
    Random,
    Identity,
}

#[derive(Clone, Debug)]
pub struct LowrankProblem {
    pub homotopy: Homotopy,
    pub start: Vec<Complex64>,
    pub chart_b: Vec<f64>,
    pub chart_c: f64,
    pub a0: Vec<Vec<f64>>,
    pub a1: Vec<Vec<f64>>,
}

pub fn hilbert(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).collect())
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Seeded positive matrix; its top singular value is simple (Perron).
pub fn random_start_matrix(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(0.5..1.5) / n as f64).collect())
        .collect()
}

pub fn start_matrix(kind: LowrankStart, n: usize, seed: u64) -> Vec<Vec<f64>> {
    match kind {
        LowrankStart::Random => random_start_matrix(n, seed),
        LowrankStart::Identity => identity(n),
    }
}

fn critical_system(n: usize, b: &[f64], c: f64) -> Result<ParametricSystem> {
    let re = |v: f64| Complex64::new(v, 0.0);
    let var = |k: usize, pow: u32| -> Vec<u32> {
        let mut e = vec![0; 2 * n];
        e[k] = pow;
        e
    };
    let mut equations = Vec::with_capacity(2 * n);
    // ∂ℓ/∂x_k = −2 Σ_j A_kj y_j + 2 x_k Σ_j y_j²
    for k in 1..n {
        let mut eq = Vec::new();
        for j in 0..n {
            eq.push(Term::new(re(-2.0), Some(k * n + j), var(n + j, 1)));
            let mut e = var(n + j, 2);
            e[k] = 1;
            eq.push(Term::new(re(2.0), None, e));
        }
        equations.push(eq);
    }
    // ∂ℓ/∂y_j = −2 Σ_k A_kj x_k + 2 y_j Σ_k x_k²
    for j in 0..n {
        let mut eq = Vec::new();
        for k in 0..n {
            eq.push(Term::new(re(-2.0), Some(k * n + j), var(k, 1)));
            let mut e = var(k, 2);
            e[n + j] = 1;
            eq.push(Term::new(re(2.0), None, e));
        }
        equations.push(eq);
    }
    let mut chart: Vec<Term> = (0..n).map(|k| Term::new(re(b[k]), None, var(k, 1))).collect();
    chart.push(Term::new(re(-c), None, vec![0; 2 * n]));
    equations.push(chart);
    ParametricSystem::new(2 * n, n * n, equations)
}

fn flatten(a: &[Vec<f64>]) -> Vec<Complex64> {
    a.iter().flatten().map(|&v| Complex64::new(v, 0.0)).collect()
}

/// Homotopy from `A0` to `A1` following the top singular pair. The chart
/// normal `b` is drawn from `seed` with positive entries; `c` is chosen so
/// the start point is the balanced factor `(√σ₁u₁, √σ₁v₁)` of `A0`.
pub fn gen_lowrank(n: usize, a0: &[Vec<f64>], a1: &[Vec<f64>], seed: u64) -> Result<LowrankProblem> {
    if !(2..=20).contains(&n) {
        return Err(Error::UnsupportedN { n, min: 2, max: 20 });
    }
    for a in [a0, a1] {
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.len(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c4a7);
    let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5) / (n as f64).sqrt()).collect();
    let svd = svd_oracle(a0);
    let gap = svd.sigma[0] - svd.sigma[1];
    if gap < MIN_GAP {
        return Err(Error::DegenerateStart { gap });
    }
    let (u, v, s) = (&svd.u[0], &svd.v[0], svd.sigma[0]);
    let bu: f64 = b.iter().zip(u).map(|(x, y)| x * y).sum();
    if bu.abs() < 1e-12 {
        return Err(Error::DegenerateStart { gap });
    }
    // Put the chart through the balanced factor (√σ₁u₁, √σ₁v₁).
    let alpha = s.sqrt();
    let c = alpha * bu;
    let start = u
        .iter()
        .map(|&ui| Complex64::new(alpha * ui, 0.0))
        .chain(v.iter().map(|&vj| Complex64::new(s / alpha * vj, 0.0)))
        .collect();
    let sys = critical_system(n, &b, c)?;
    let homotopy = Homotopy::new(sys, flatten(a0), flatten(a1))?;
    Ok(LowrankProblem {
        homotopy,
        start,
        chart_b: b,
        chart_c: c,
        a0: a0.to_vec(),
        a1: a1.to_vec(),
    })
}

/// `x·yᵀ` from a point `(x, y)` (real parts).
pub fn rank_one_from_point(point: &[Complex64]) -> Vec<Vec<f64>> {
    let n = point.len() / 2;
    (0..n)
        .map(|k| (0..n).map(|j| point[k].re * point[n + j].re).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_is_a_critical_point() {
        for n in 2..=5 {
            let a0 = random_start_matrix(n, 3);
            let p = gen_lowrank(n, &a0, &hilbert(n), 3).unwrap();
            assert!(p.homotopy.residual(&p.start, 0.0).unwrap() < 1e-13);
            let chart: f64 = (0..n).map(|k| p.chart_b[k] * p.start[k].re).sum::<f64>() - p.chart_c;
            assert!(chart.abs() < 1e-14);
            let r1 = rank_one_from_point(&p.start);
            let expect = svd_oracle(&a0).rank_one();
            for k in 0..n {
                for j in 0..n {
                    assert!((r1[k][j] - expect[k][j]).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn diagonal_start() {
        let a0 = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
        let p = gen_lowrank(2, &a0, &hilbert(2), 1).unwrap();
        let r1 = rank_one_from_point(&p.start);
        assert!((r1[0][0] - 2.0).abs() < 1e-14);
        assert!(r1[0][1].abs() < 1e-14 && r1[1][0].abs() < 1e-14 && r1[1][1].abs() < 1e-14);
    }

    #[test]
    fn identity_start_is_degenerate() {
        assert!(matches!(
            gen_lowrank(3, &identity(3), &hilbert(3), 0),
            Err(Error::DegenerateStart { .. })
        ));
    }

    #[test]
    fn hilbert_entries() {
        let h = hilbert(3);
        assert_eq!(h[0][0], 1.0);
        assert_eq!(h[1][2], 0.25);
        assert_eq!(h[2][2], 0.2);
    }
}
