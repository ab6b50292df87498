//! One-sided Jacobi SVD for small dense real matrices.

#[derive(Clone, Debug)]
pub struct Svd {
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// `u[j]` is the j-th left singular vector.
    pub u: Vec<Vec<f64>>,
    /// `v[j]` is the j-th right singular vector.
    pub v: Vec<Vec<f64>>,
}

impl Svd {
    /// `σ₁ u₁ v₁ᵀ`.
    pub fn rank_one(&self) -> Vec<Vec<f64>> {
        let s = self.sigma[0];
        self.u[0]
            .iter()
            .map(|&ui| self.v[0].iter().map(|&vj| s * ui * vj).collect())
            .collect()
    }
}

/// SVD of a square matrix given as rows.
pub fn svd_oracle(a: &[Vec<f64>]) -> Svd {
    let n = a.len();
    // Work on columns: cols[j][i] = A[i][j].
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut cols, &mut v] {
                    for i in 0..n {
                        let (xp, xq) = (m[p][i], m[q][i]);
                        m[p][i] = c * xp - s * xq;
                        m[q][i] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let mut sigma = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut vv = Vec::with_capacity(n);
    for &j in &order {
        let s = norms[j];
        sigma.push(s);
        u.push(if s > 0.0 {
            cols[j].iter().map(|x| x / s).collect()
        } else {
            vec![0.0; n]
        });
        vv.push(v[j].clone());
    }
    Svd { sigma, u, v: vv }
}
