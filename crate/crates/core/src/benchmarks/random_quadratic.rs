//! Dense random quadratic systems deformed from `x_i² − 1`.

use crate::error::{Error, Result};
use crate::system::{Homotopy, ParametricSystem, Term};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Exponent vectors of all monomials of degree ≤ 2 in `k` variables.
pub fn quadratic_monomials(k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; k]];
    for i in 0..k {
        let mut e = vec![0; k];
        e[i] = 1;
        out.push(e);
    }
    for i in 0..k {
        for j in i..k {
            let mut e = vec![0; k];
            e[i] += 1;
            e[j] += 1;
            out.push(e);
        }
    }
    out
}

/// A standard complex Gaussian draw.
pub(crate) fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `k` quadrics in `k` unknowns, every coefficient a parameter. Start
/// parameters encode `x_i² − 1`; targets are seeded complex Gaussians.
pub fn gen_random_quadratic(k: usize, seed: u64) -> Result<(Homotopy, Vec<Vec<Complex64>>)> {
    if !(1..=8).contains(&k) {
        return Err(Error::UnsupportedN { n: k, min: 1, max: 8 });
    }
    let monos = quadratic_monomials(k);
    let nm = monos.len();
    let one = Complex64::new(1.0, 0.0);
    let equations = (0..k)
        .map(|i| {
            monos
                .iter()
                .enumerate()
                .map(|(j, e)| Term::new(one, Some(i * nm + j), e.clone()))
                .collect()
        })
        .collect();
    let sys = ParametricSystem::new(k, k * nm, equations)?;
    let mut p0 = vec![Complex64::new(0.0, 0.0); k * nm];
    for i in 0..k {
        p0[i * nm] = -one;
        let sq = monos.iter().position(|e| e[i] == 2).expect("square monomial present");
        p0[i * nm + sq] = one;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p1 = (0..k * nm).map(|_| complex_gaussian(&mut rng)).collect();
    let h = Homotopy::new(sys, p0, p1)?;
    let starts = (0..1usize << k)
        .map(|bits| {
            (0..k)
                .map(|i| Complex64::new(if bits >> i & 1 == 1 { -1.0 } else { 1.0 }, 0.0))
                .collect()
        })
        .collect();
    Ok((h, starts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_count() {
        assert_eq!(quadratic_monomials(3).len(), 10);
        assert_eq!(quadratic_monomials(1).len(), 3);
    }

    #[test]
    fn starts_solve_start_system() {
        for k in [1, 3] {
            let (h, starts) = gen_random_quadratic(k, 7).unwrap();
            assert_eq!(starts.len(), 1 << k);
            for s in &starts {
                assert_eq!(h.residual(s, 0.0).unwrap(), 0.0);
            }
            for (i, a) in starts.iter().enumerate() {
                for b in &starts[i + 1..] {
                    assert_ne!(a, b);
                }
            }
        }
        let (a, _) = gen_random_quadratic(3, 7).unwrap();
        let (b, _) = gen_random_quadratic(3, 7).unwrap();
        assert_eq!(a.p1(), b.p1());
        assert!(gen_random_quadratic(9, 0).is_err());
    }
}
