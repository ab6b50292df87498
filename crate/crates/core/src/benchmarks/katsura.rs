//! Katsura-n with `n` unknowns `u_0..u_{n−1}` and `2^(n−1)` solutions:
//!
//! `Σ_{i=−(n−1)}^{n−1} u_|i| u_|m−i| − u_m = 0` for `m = 0..n−2`, and
//! `u_0 + 2·Σ_{i≥1} u_i − 1 = 0`, with `u_j = 0` for `j ≥ n`.

use super::bootstrap::bootstrap_starts;
use super::random_quadratic::complex_gaussian;
use crate::error::{Error, Result};
use crate::system::{Homotopy, ParametricSystem, Term};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Katsura equations as `(exponents, coefficient)` lists.
pub fn katsura_equations(n: usize) -> Vec<Vec<(Vec<u32>, f64)>> {
    let mut eqs = Vec::with_capacity(n);
    for m in 0..n as i64 - 1 {
        let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for i in -(n as i64 - 1)..=(n as i64 - 1) {
            let (a, b) = (i.unsigned_abs() as usize, (m - i).unsigned_abs() as usize);
            if a >= n || b >= n {
                continue;
            }
            let mut e = vec![0u32; n];
            e[a] += 1;
            e[b] += 1;
            *acc.entry(e).or_default() += 1.0;
        }
        let mut e = vec![0u32; n];
        e[m as usize] = 1;
        *acc.entry(e).or_default() -= 1.0;
        eqs.push(acc.into_iter().filter(|(_, c)| *c != 0.0).collect());
    }
    let mut lin = vec![(vec![0u32; n], -1.0)];
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 1;
        lin.push((e, if i == 0 { 1.0 } else { 2.0 }));
    }
    eqs.push(lin);
    eqs
}

/// Katsura-n with every coefficient a parameter, started from seeded random
/// complex coefficients whose solutions come from [`bootstrap_starts`].
pub fn gen_katsura(n: usize, seed: u64) -> Result<(Homotopy, Vec<Vec<Complex64>>)> {
    if !(3..=6).contains(&n) {
        return Err(Error::UnsupportedN { n, min: 3, max: 6 });
    }
    let eqs = katsura_equations(n);
    let one = Complex64::new(1.0, 0.0);
    let mut p1 = Vec::new();
    let equations = eqs
        .iter()
        .map(|eq| {
            eq.iter()
                .map(|(e, c)| {
                    p1.push(Complex64::new(*c, 0.0));
                    Term::new(one, Some(p1.len() - 1), e.clone())
                })
                .collect()
        })
        .collect();
    let sys = ParametricSystem::new(n, p1.len(), equations)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p0: Vec<Complex64> = (0..p1.len()).map(|_| complex_gaussian(&mut rng)).collect();
    let starts = bootstrap_starts(&sys, &p0, seed.wrapping_add(1))?;
    let h = Homotopy::new(sys, p0, p1)?;
    Ok((h, starts))
}
