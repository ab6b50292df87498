//! Interval matrices, the interval operator norm, and the point-matrix
//! machinery (LU, approximate inverse) that supplies the Krawczyk
//! preconditioner.

use crate::error::{check_dim, Error, Result};
use crate::interval::{add_up, ComplexInterval, IntervalBox};
use crate::serial::Lossless;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Row-major matrix of complex intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexInterval>,
}

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexInterval>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ComplexInterval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ComplexInterval::ONE;
        }
        m
    }

    pub fn from_point(p: &PointMatrix) -> Self {
        Self {
            rows: p.rows,
            cols: p.cols,
            data: p.data.iter().map(|&z| ComplexInterval::point(z)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> ComplexInterval {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: ComplexInterval) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[ComplexInterval] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(ComplexInterval::is_finite)
    }

    pub fn midpoint(&self) -> PointMatrix {
        PointMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(ComplexInterval::mid).collect(),
        }
    }

    pub fn contains_point(&self, a: &PointMatrix) -> bool {
        self.rows == a.rows && self.cols == a.cols && self.data.iter().zip(&a.data).all(|(m, &z)| m.contains_point(z))
    }
}

/// Row-major matrix of binary64 complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl PointMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEndpoint);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.len())?;
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, s: Complex64) -> PointMatrix {
        PointMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, other: &PointMatrix) -> Result<PointMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = PointMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    /// Floating-point ∞-norm (max row sum of moduli). Not an enclosure.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Interval product `self · v` with `self` promoted to degenerate intervals.
    pub fn mul_box(&self, v: &IntervalBox) -> Result<IntervalBox> {
        imatvec(&IntervalMatrix::from_point(self), v)
    }

    pub fn lu(&self) -> Result<Lu> {
        Lu::factor(self)
    }
}

impl Serialize for PointMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[Lossless; 2]>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let z = self.get(i, j);
                        [Lossless(z.re), Lossless(z.im)]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[Lossless; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[a, b]| Complex64::new(a.0, b.0)).collect())
            .collect();
        PointMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

const PIVOT_FLOOR: f64 = 1e-300;

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &PointMatrix) -> Result<Self> {
        check_dim(a.rows, a.cols)?;
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmag) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].norm()))
                    .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(pmag >= PIVOT_FLOOR) || !pmag.is_finite() {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in (k + 1)..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= f * u;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        check_dim(n, b.len())?;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[i * n + i];
        }
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::SingularMatrix);
        }
        Ok(x)
    }
}

/// Upper bound on the ∞-operator norm over every matrix in `m`.
pub fn inorm(m: &IntervalMatrix) -> f64 {
    (0..m.rows)
        .map(|i| (0..m.cols).fold(0.0, |acc, j| add_up(acc, m.get(i, j).mag())))
        .fold(0.0, f64::max)
}

/// Approximate inverse by LU with partial pivoting, together with the
/// floating-point residual `‖A·Y − 1‖∞`.
pub fn mid_inverse(a: &PointMatrix) -> Result<(PointMatrix, f64)> {
    let lu = a.lu()?;
    let n = a.rows;
    let mut inv = PointMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        e[j] = Complex64::new(1.0, 0.0);
        let col = lu.solve(&e)?;
        for i in 0..n {
            inv.set(i, j, col[i]);
        }
    }
    let mut prod = a.matmul(&inv)?;
    for i in 0..n {
        let d = prod.get(i, i);
        prod.set(i, i, d - 1.0);
    }
    Ok((inv, prod.norm_inf()))
}

/// `1ₙ − Y·M` in interval arithmetic.
pub fn residual_matrix(y: &PointMatrix, m: &IntervalMatrix) -> Result<IntervalMatrix> {
    check_dim(y.rows, y.cols)?;
    check_dim(m.rows, m.cols)?;
    check_dim(y.cols, m.rows)?;
    let n = y.rows;
    let mut out = IntervalMatrix::zeros(n, m.cols);
    for i in 0..n {
        for j in 0..m.cols {
            let mut acc = if i == j {
                ComplexInterval::ONE
            } else {
                ComplexInterval::ZERO
            };
            for k in 0..y.cols {
                let yik = y.get(i, k);
                if yik.re == 0.0 && yik.im == 0.0 {
                    continue;
                }
                acc = acc - ComplexInterval::point(yik) * m.get(k, j);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Interval matrix-vector product.
pub fn imatvec(m: &IntervalMatrix, v: &IntervalBox) -> Result<IntervalBox> {
    check_dim(m.cols, v.dim())?;
    Ok(IntervalBox::new(
        (0..m.rows)
            .map(|i| (0..m.cols).fold(ComplexInterval::ZERO, |acc, j| acc + m.get(i, j) * v[j]))
            .collect(),
    ))
}
