//! Square parametric polynomial systems `F(x; p)`, affine-linear in `p`, and
//! the segment homotopies `H(x, t) = F(x; (1−t)·p0 + t·p1)` built from them.
//!
//! Every system is split into a parameter-linear part `F1(x; p)` (terms that
//! carry a parameter) and a parameter-free part `F2(x)`. Because `H` is affine
//! in `t`, its interval extension is taken as
//! `□[F2 + F1(·; p0)](I) + T·□F1(I; p1 − p0)`, so `T` occurs once.
//!
//! A homotopy may carry a shear `s(t)` (the line through `(t0, x0)` and
//! `(t1, x1)`), in which case it evaluates `Ĥ(y, t) = H(y + s(t), t)`. Point
//! evaluation substitutes directly. Interval evaluation uses an expansion of
//! `Ĥ` as a polynomial in `y` and `σ = (t − t0)/(t1 − t0) − 1/2` with
//! enclosed coefficients, built once when the shear is applied. Centering the
//! time variable on the step keeps even powers of `σ` sign-definite, which
//! removes most of the dependency blow-up of naive substitution.

use crate::error::{check_dim, Error, Result};
use crate::interval::{ComplexInterval, IntervalBox, RealInterval};
use crate::linalg::{IntervalMatrix, PointMatrix};
use crate::serial::Lossless;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// One monomial `coeff · [p_k] · x^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    /// Index of the parameter multiplying this term, if any (`F1` part).
    pub param: Option<usize>,
    pub exponents: Vec<u32>,
}

impl Term {
    pub fn new(coeff: Complex64, param: Option<usize>, exponents: Vec<u32>) -> Self {
        Self {
            coeff,
            param,
            exponents,
        }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    fn derivative(&self, j: usize) -> Option<Term> {
        let e = self.exponents[j];
        if e == 0 {
            return None;
        }
        let mut exponents = self.exponents.clone();
        exponents[j] -= 1;
        Some(Term {
            coeff: self.coeff * e as f64,
            param: self.param,
            exponents,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    All,
    ParamOnly,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    coeff_re: Lossless,
    coeff_im: Lossless,
    param_index: Option<usize>,
    exponents: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    n: usize,
    m: usize,
    equations: Vec<Vec<RawTerm>>,
}

/// A square polynomial system in `n` unknowns with `m` parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct ParametricSystem {
    n: usize,
    m: usize,
    equations: Vec<Vec<Term>>,
    /// `jacobian[i][j]` holds the terms of `∂ eq_i / ∂ x_j`.
    jacobian: Vec<Vec<Vec<Term>>>,
    max_degree: Vec<u32>,
}

impl ParametricSystem {
    pub fn new(n: usize, m: usize, equations: Vec<Vec<Term>>) -> Result<Self> {
        if equations.len() != n {
            return Err(Error::InvalidSystem(format!(
                "system is not square: {} equations in {n} unknowns",
                equations.len()
            )));
        }
        for (i, eq) in equations.iter().enumerate() {
            for t in eq {
                if t.exponents.len() != n {
                    return Err(Error::InvalidSystem(format!(
                        "equation {i}: exponent vector has length {}, expected {n}",
                        t.exponents.len()
                    )));
                }
                if let Some(k) = t.param {
                    if k >= m {
                        return Err(Error::InvalidSystem(format!(
                            "equation {i}: parameter index {k} out of range (m = {m})"
                        )));
                    }
                }
                if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                    return Err(Error::InvalidSystem(format!("equation {i}: non-finite coefficient")));
                }
            }
        }
        let jacobian = equations
            .iter()
            .map(|eq| {
                (0..n)
                    .map(|j| eq.iter().filter_map(|t| t.derivative(j)).collect())
                    .collect()
            })
            .collect();
        let mut max_degree = vec![0; n];
        for t in equations.iter().flatten() {
            for (d, &e) in max_degree.iter_mut().zip(&t.exponents) {
                *d = (*d).max(e);
            }
        }
        Ok(Self {
            n,
            m,
            equations,
            jacobian,
            max_degree,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn equations(&self) -> &[Vec<Term>] {
        &self.equations
    }

    /// Total degree of each equation.
    pub fn degrees(&self) -> Vec<u32> {
        self.equations
            .iter()
            .map(|eq| eq.iter().map(Term::degree).max().unwrap_or(0))
            .collect()
    }

    /// Terms carrying a parameter (`F1`).
    pub fn f1_terms(&self) -> impl Iterator<Item = (usize, &Term)> {
        self.all_terms().filter(|(_, t)| t.param.is_some())
    }

    /// Parameter-free terms (`F2`).
    pub fn f2_terms(&self) -> impl Iterator<Item = (usize, &Term)> {
        self.all_terms().filter(|(_, t)| t.param.is_none())
    }

    fn all_terms(&self) -> impl Iterator<Item = (usize, &Term)> {
        self.equations
            .iter()
            .enumerate()
            .flat_map(|(i, eq)| eq.iter().map(move |t| (i, t)))
    }

    fn point_powers(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        x.iter()
            .zip(&self.max_degree)
            .map(|(&z, &d)| {
                let mut p = Vec::with_capacity(d as usize + 1);
                p.push(Complex64::new(1.0, 0.0));
                for e in 1..=d as usize {
                    p.push(p[e - 1] * z);
                }
                p
            })
            .collect()
    }

    fn interval_powers(&self, x: &IntervalBox) -> Vec<Vec<ComplexInterval>> {
        x.iter()
            .zip(&self.max_degree)
            .map(|(z, &d)| (0..=d).map(|e| z.powi(e)).collect())
            .collect()
    }

    fn eval_terms_point(terms: &[Term], pows: &[Vec<Complex64>], p: &[Complex64], part: Part) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in terms {
            let mut v = match (t.param, part) {
                (Some(k), _) => t.coeff * p[k],
                (None, Part::All) => t.coeff,
                (None, Part::ParamOnly) => continue,
            };
            for (i, &e) in t.exponents.iter().enumerate() {
                if e > 0 {
                    v *= pows[i][e as usize];
                }
            }
            acc += v;
        }
        acc
    }

    fn eval_terms_interval(
        terms: &[Term],
        pows: &[Vec<ComplexInterval>],
        p: &[ComplexInterval],
        part: Part,
    ) -> ComplexInterval {
        let mut acc = ComplexInterval::ZERO;
        for t in terms {
            let c = ComplexInterval::point(t.coeff);
            let mut v = match (t.param, part) {
                (Some(k), _) => c * p[k],
                (None, Part::All) => c,
                (None, Part::ParamOnly) => continue,
            };
            for (i, &e) in t.exponents.iter().enumerate() {
                if e > 0 {
                    v = v * pows[i][e as usize];
                }
            }
            acc = acc + v;
        }
        acc
    }

    /// `F(x; p)` in floating point.
    pub fn eval(&self, x: &[Complex64], p: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.n, x.len())?;
        check_dim(self.m, p.len())?;
        let pows = self.point_powers(x);
        Ok(self
            .equations
            .iter()
            .map(|eq| Self::eval_terms_point(eq, &pows, p, Part::All))
            .collect())
    }

    /// `∂F/∂x (x; p)` in floating point.
    pub fn jacobian(&self, x: &[Complex64], p: &[Complex64]) -> Result<PointMatrix> {
        check_dim(self.n, x.len())?;
        check_dim(self.m, p.len())?;
        let pows = self.point_powers(x);
        let data = self
            .jacobian
            .iter()
            .flat_map(|row| {
                row.iter()
                    .map(|terms| Self::eval_terms_point(terms, &pows, p, Part::All))
            })
            .collect();
        PointMatrix::new(self.n, self.n, data).map_err(|_| Error::SingularJacobian)
    }

    /// The parameter-linear part `F1(x; dp)`.
    pub fn f1_eval(&self, x: &[Complex64], dp: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.n, x.len())?;
        check_dim(self.m, dp.len())?;
        let pows = self.point_powers(x);
        Ok(self
            .equations
            .iter()
            .map(|eq| Self::eval_terms_point(eq, &pows, dp, Part::ParamOnly))
            .collect())
    }

    /// Residual `‖F(x; p)‖∞` (moduli).
    pub fn residual(&self, x: &[Complex64], p: &[Complex64]) -> Result<f64> {
        Ok(self.eval(x, p)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

impl TryFrom<RawSystem> for ParametricSystem {
    type Error = Error;
    fn try_from(raw: RawSystem) -> Result<Self> {
        let equations = raw
            .equations
            .into_iter()
            .map(|eq| {
                eq.into_iter()
                    .map(|t| Term::new(Complex64::new(t.coeff_re.0, t.coeff_im.0), t.param_index, t.exponents))
                    .collect()
            })
            .collect();
        ParametricSystem::new(raw.n, raw.m, equations)
    }
}

impl From<ParametricSystem> for RawSystem {
    fn from(s: ParametricSystem) -> Self {
        RawSystem {
            n: s.n,
            m: s.m,
            equations: s
                .equations
                .into_iter()
                .map(|eq| {
                    eq.into_iter()
                        .map(|t| RawTerm {
                            coeff_re: Lossless(t.coeff.re),
                            coeff_im: Lossless(t.coeff.im),
                            param_index: t.param,
                            exponents: t.exponents,
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// A polynomial in `y_1..y_n` and `σ = τ − 1/2` with interval coefficients.
/// Exponent vectors have length `n + 1`; the last slot is `σ`.
#[derive(Clone, Debug, Default)]
struct TauPoly {
    monomials: Vec<(Vec<u32>, ComplexInterval)>,
}

impl TauPoly {
    fn derivative(&self, j: usize) -> TauPoly {
        TauPoly {
            monomials: self
                .monomials
                .iter()
                .filter(|(e, _)| e[j] > 0)
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[j] -= 1;
                    (e2, c.scale(RealInterval::point(e[j] as f64)))
                })
                .collect(),
        }
    }

    fn max_degrees(&self, vars: usize) -> Vec<u32> {
        let mut d = vec![0; vars];
        for (e, _) in &self.monomials {
            for (a, &b) in d.iter_mut().zip(e) {
                *a = (*a).max(b);
            }
        }
        d
    }

    fn eval(&self, ypows: &[Vec<ComplexInterval>], tpows: &[RealInterval]) -> ComplexInterval {
        let n = ypows.len();
        let mut acc = ComplexInterval::ZERO;
        for (e, c) in &self.monomials {
            let mut v = *c;
            for i in 0..n {
                if e[i] > 0 {
                    v = v * ypows[i][e[i] as usize];
                }
            }
            if e[n] > 0 {
                v = v.scale(tpows[e[n] as usize]);
            }
            acc = acc + v;
        }
        acc
    }
}

type Factor = Vec<(Vec<u32>, ComplexInterval)>;

fn multiply_into(poly: &[(Vec<u32>, ComplexInterval)], factor: &Factor) -> Vec<(Vec<u32>, ComplexInterval)> {
    let mut out: BTreeMap<Vec<u32>, ComplexInterval> = BTreeMap::new();
    for (e1, c1) in poly {
        for (e2, c2) in factor {
            let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
            let v = *c1 * *c2;
            out.entry(e).and_modify(|acc| *acc = *acc + v).or_insert(v);
        }
    }
    out.into_iter().collect()
}

/// Shear data plus the expanded interval form of the sheared homotopy.
#[derive(Debug)]
pub struct Shear {
    pub x0: Vec<Complex64>,
    pub x1: Vec<Complex64>,
    pub t0: f64,
    pub t1: f64,
    span: RealInterval,
    equations: Vec<TauPoly>,
    jacobian: Vec<Vec<TauPoly>>,
    y_degrees: Vec<u32>,
    sigma_degree: u32,
}

impl Shear {
    fn build(h: &Homotopy, x0: Vec<Complex64>, x1: Vec<Complex64>, t0: f64, t1: f64) -> Result<Shear> {
        let sys = &h.system;
        let n = sys.n;
        let span = RealInterval::point(t1) - RealInterval::point(t0);
        let half = RealInterval::point(0.5);
        let t_mid = RealInterval::point(t0) + span * half;
        let unit = |k: usize| {
            let mut e = vec![0u32; n + 1];
            e[k] += 1;
            e
        };
        let zero_exp = vec![0u32; n + 1];
        // x_i = y_i + (x0_i + d_i/2) + σ·d_i  with d = x1 − x0
        let var_factors: Vec<Factor> = (0..n)
            .map(|i| {
                let mut f = vec![(unit(i), ComplexInterval::ONE)];
                let d = ComplexInterval::point(x1[i]) - ComplexInterval::point(x0[i]);
                let mid = ComplexInterval::point(x0[i]) + d.scale(half);
                if mid != ComplexInterval::ZERO {
                    f.push((zero_exp.clone(), mid));
                }
                if d != ComplexInterval::ZERO {
                    f.push((unit(n), d));
                }
                f
            })
            .collect();
        // p_k(t) = p_k(t_mid) + σ·(t1 − t0)·dp_k
        let param_factors: Vec<Factor> = (0..sys.m)
            .map(|k| {
                let dp = h.dp_iv[k];
                let a = h.p0_iv[k] + dp.scale(t_mid);
                let b = dp.scale(span);
                vec![(zero_exp.clone(), a), (unit(n), b)]
            })
            .collect();

        let mut equations = Vec::with_capacity(n);
        for eq in &sys.equations {
            let mut acc: BTreeMap<Vec<u32>, ComplexInterval> = BTreeMap::new();
            for t in eq {
                let mut poly = vec![(zero_exp.clone(), ComplexInterval::point(t.coeff))];
                if let Some(k) = t.param {
                    poly = multiply_into(&poly, &param_factors[k]);
                }
                for (i, &e) in t.exponents.iter().enumerate() {
                    for _ in 0..e {
                        poly = multiply_into(&poly, &var_factors[i]);
                    }
                }
                for (e, c) in poly {
                    acc.entry(e).and_modify(|a| *a = *a + c).or_insert(c);
                }
            }
            let poly = TauPoly {
                monomials: acc.into_iter().collect(),
            };
            if poly.monomials.iter().any(|(_, c)| !c.is_finite()) {
                return Err(Error::NonFiniteEndpoint);
            }
            equations.push(poly);
        }
        let jacobian: Vec<Vec<TauPoly>> = equations
            .iter()
            .map(|p| (0..n).map(|j| p.derivative(j)).collect())
            .collect();
        let mut all = vec![0u32; n + 1];
        for p in &equations {
            for (a, b) in all.iter_mut().zip(p.max_degrees(n + 1)) {
                *a = (*a).max(b);
            }
        }
        let sigma_degree = all[n];
        all.truncate(n);
        Ok(Shear {
            x0,
            x1,
            t0,
            t1,
            span,
            equations,
            jacobian,
            y_degrees: all,
            sigma_degree,
        })
    }

    /// `s(t)` in floating point.
    pub fn point_at(&self, t: f64) -> Vec<Complex64> {
        let tau = (t - self.t0) / (self.t1 - self.t0);
        self.x0.iter().zip(&self.x1).map(|(&a, &b)| a + (b - a) * tau).collect()
    }

    /// Enclosure of `τ(T) = (T − t0)/(t1 − t0)`.
    pub fn tau_range(&self, t: RealInterval) -> Result<RealInterval> {
        (t - RealInterval::point(self.t0)).checked_div(&self.span)
    }

    /// Enclosure of `{s(t) : t ∈ T}`.
    pub fn enclose(&self, t: RealInterval) -> Result<IntervalBox> {
        let tau = self.tau_range(t)?;
        IntervalBox::new(
            self.x0
                .iter()
                .zip(&self.x1)
                .map(|(&a, &b)| {
                    let a = ComplexInterval::point(a);
                    a + (ComplexInterval::point(b) - a).scale(tau)
                })
                .collect(),
        )
        .check_finite()
    }

    fn powers(&self, y: &IntervalBox, t: RealInterval) -> Result<(Vec<Vec<ComplexInterval>>, Vec<RealInterval>)> {
        let sigma = self.tau_range(t)? - RealInterval::point(0.5);
        let ypows = y
            .iter()
            .zip(&self.y_degrees)
            .map(|(z, &d)| (0..=d).map(|e| z.powi(e)).collect())
            .collect();
        let tpows = (0..=self.sigma_degree).map(|e| sigma.powi(e)).collect();
        Ok((ypows, tpows))
    }
}

/// `H(x, t) = F(x; (1−t)·p0 + t·p1)`, optionally sheared by `s(t)`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    system: Arc<ParametricSystem>,
    p0: Vec<Complex64>,
    p1: Vec<Complex64>,
    dp: Vec<Complex64>,
    p0_iv: Vec<ComplexInterval>,
    dp_iv: Vec<ComplexInterval>,
    shear: Option<Arc<Shear>>,
}

impl Homotopy {
    pub fn new(system: impl Into<Arc<ParametricSystem>>, p0: Vec<Complex64>, p1: Vec<Complex64>) -> Result<Self> {
        let system = system.into();
        check_dim(system.m, p0.len())?;
        check_dim(system.m, p1.len())?;
        if p0.iter().chain(&p1).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEndpoint);
        }
        let dp = p0.iter().zip(&p1).map(|(&a, &b)| b - a).collect();
        let p0_iv: Vec<ComplexInterval> = p0.iter().map(|&z| ComplexInterval::point(z)).collect();
        let dp_iv = p0_iv
            .iter()
            .zip(&p1)
            .map(|(&a, &b)| (ComplexInterval::point(b) - a).check_finite())
            .collect::<Result<_>>()?;
        Ok(Self {
            system,
            p0,
            p1,
            dp,
            p0_iv,
            dp_iv,
            shear: None,
        })
    }

    pub fn system(&self) -> &ParametricSystem {
        &self.system
    }

    pub fn system_arc(&self) -> &Arc<ParametricSystem> {
        &self.system
    }

    pub fn p0(&self) -> &[Complex64] {
        &self.p0
    }

    pub fn p1(&self) -> &[Complex64] {
        &self.p1
    }

    pub fn dim(&self) -> usize {
        self.system.n
    }

    pub fn shear(&self) -> Option<&Shear> {
        self.shear.as_deref()
    }

    /// The same homotopy with any shear removed.
    pub fn unsheared(&self) -> Homotopy {
        Homotopy {
            shear: None,
            ..self.clone()
        }
    }

    /// `p(t) = (1−t)·p0 + t·p1`.
    pub fn params_at(&self, t: f64) -> Vec<Complex64> {
        self.p0
            .iter()
            .zip(&self.p1)
            .map(|(&a, &b)| a * (1.0 - t) + b * t)
            .collect()
    }

    fn absolute_point(&self, x: &[Complex64], t: f64) -> Vec<Complex64> {
        match &self.shear {
            Some(s) => x.iter().zip(s.point_at(t)).map(|(&a, b)| a + b).collect(),
            None => x.to_vec(),
        }
    }

    pub fn eval_point(&self, x: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        check_dim(self.dim(), x.len())?;
        self.system.eval(&self.absolute_point(x, t), &self.params_at(t))
    }

    pub fn residual(&self, x: &[Complex64], t: f64) -> Result<f64> {
        Ok(self.eval_point(x, t)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    pub fn jac_x_point(&self, x: &[Complex64], t: f64) -> Result<PointMatrix> {
        check_dim(self.dim(), x.len())?;
        self.system.jacobian(&self.absolute_point(x, t), &self.params_at(t))
    }

    /// `∂H/∂t` at a point. For the segment path this is `F1(x; p1 − p0)`;
    /// a shear adds `∂ₓH · s'(t)`.
    pub fn dt_point(&self, x: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        check_dim(self.dim(), x.len())?;
        let xa = self.absolute_point(x, t);
        let mut d = self.system.f1_eval(&xa, &self.dp)?;
        if let Some(s) = &self.shear {
            let inv_span = 1.0 / (s.t1 - s.t0);
            let v: Vec<Complex64> = s.x0.iter().zip(&s.x1).map(|(&a, &b)| (b - a) * inv_span).collect();
            let j = self.system.jacobian(&xa, &self.params_at(t))?;
            for (di, jv) in d.iter_mut().zip(j.matvec(&v)?) {
                *di += jv;
            }
        }
        Ok(d)
    }

    /// Interval extension `□H(I, T)` (or `□Ĥ(I, T)` when sheared).
    pub fn eval_interval(&self, i: &IntervalBox, t: RealInterval) -> Result<IntervalBox> {
        check_dim(self.dim(), i.dim())?;
        let out = match &self.shear {
            Some(s) => {
                let (yp, tp) = s.powers(i, t)?;
                IntervalBox::new(s.equations.iter().map(|p| p.eval(&yp, &tp)).collect())
            }
            None => {
                let pows = self.system.interval_powers(i);
                IntervalBox::new(
                    self.system
                        .equations
                        .iter()
                        .map(|eq| {
                            let a = ParametricSystem::eval_terms_interval(eq, &pows, &self.p0_iv, Part::All);
                            let b = ParametricSystem::eval_terms_interval(eq, &pows, &self.dp_iv, Part::ParamOnly);
                            a + b.scale(t)
                        })
                        .collect(),
                )
            }
        };
        out.check_finite()
    }

    /// Interval extension of the x-Jacobian over `I × T`.
    pub fn jac_x_interval(&self, i: &IntervalBox, t: RealInterval) -> Result<IntervalMatrix> {
        check_dim(self.dim(), i.dim())?;
        let n = self.dim();
        let data: Vec<ComplexInterval> = match &self.shear {
            Some(s) => {
                let (yp, tp) = s.powers(i, t)?;
                s.jacobian
                    .iter()
                    .flat_map(|row| row.iter().map(|p| p.eval(&yp, &tp)))
                    .collect()
            }
            None => {
                let pows = self.system.interval_powers(i);
                self.system
                    .jacobian
                    .iter()
                    .flat_map(|row| {
                        row.iter().map(|terms| {
                            let a = ParametricSystem::eval_terms_interval(terms, &pows, &self.p0_iv, Part::All);
                            let b = ParametricSystem::eval_terms_interval(terms, &pows, &self.dp_iv, Part::ParamOnly);
                            a + b.scale(t)
                        })
                    })
                    .collect()
            }
        };
        if data.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteEndpoint);
        }
        IntervalMatrix::new(n, n, data)
    }

    /// Shear the (unsheared) homotopy along the segment through `(t0, x0)` and
    /// `(t1, x1)`. Any existing shear is replaced.
    pub fn apply_shear(&self, x0: &[Complex64], x1: &[Complex64], t0: f64, t1: f64) -> Result<Homotopy> {
        check_dim(self.dim(), x0.len())?;
        check_dim(self.dim(), x1.len())?;
        if !(t0 < t1) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::DegenerateTimeInterval { t0, t1 });
        }
        let base = self.unsheared();
        let shear = Shear::build(&base, x0.to_vec(), x1.to_vec(), t0, t1)?;
        Ok(Homotopy {
            shear: Some(Arc::new(shear)),
            ..base
        })
    }
}

/// `F1(x; dp)` for a system: the parameter-linear part at a parameter displacement.
pub fn f1_eval(sys: &ParametricSystem, x: &[Complex64], dp: &[Complex64]) -> Result<Vec<Complex64>> {
    sys.f1_eval(x, dp)
}
