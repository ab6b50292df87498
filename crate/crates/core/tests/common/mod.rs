//! Exact rational oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use krawczyk_core::linalg::{imatvec, residual_matrix};
use krawczyk_core::{
    ComplexInterval, Homotopy, IntervalBox, IntervalMatrix, ParametricSystem, PointMatrix, RealInterval, Term,
};
use num::bigint::Sign;
use num::{BigInt, BigRational, Zero};
use num_complex::Complex64;
use rand::{Rng, RngCore};

pub type Q = BigRational;

/// Exact scalar used by the oracles.
pub trait Exact: Clone + PartialOrd {
    fn from_f64(x: f64) -> Self;
    fn int(i: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

impl Exact for Q {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite")
    }
    fn int(i: i64) -> Self {
        Q::from_integer(i.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

/// Dyadic rational `m·2^e`. Closed under `+ − ×` without any gcd work, which
/// keeps the composite checks fast.
#[derive(Clone, Debug)]
pub struct D {
    m: BigInt,
    e: i64,
}

impl D {
    fn aligned(&self, o: &D) -> (BigInt, BigInt, i64) {
        let e = self.e.min(o.e);
        (&self.m << (self.e - e) as usize, &o.m << (o.e - e) as usize, e)
    }
}

impl Exact for D {
    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let m = BigInt::from(m);
        D {
            m: if x.is_sign_negative() { -m } else { m },
            e,
        }
    }
    fn int(i: i64) -> Self {
        D { m: i.into(), e: 0 }
    }
    fn add(&self, o: &Self) -> Self {
        let (a, b, e) = self.aligned(o);
        D { m: a + b, e }
    }
    fn sub(&self, o: &Self) -> Self {
        let (a, b, e) = self.aligned(o);
        D { m: a - b, e }
    }
    fn mul(&self, o: &Self) -> Self {
        D {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }
}

impl PartialEq for D {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).m.is_zero()
    }
}

impl PartialOrd for D {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(match self.sub(o).m.sign() {
            Sign::Minus => std::cmp::Ordering::Less,
            Sign::NoSign => std::cmp::Ordering::Equal,
            Sign::Plus => std::cmp::Ordering::Greater,
        })
    }
}

pub fn q(x: f64) -> Q {
    Q::from_f64(x)
}

pub fn contains_q<T: Exact>(i: &RealInterval, v: &T) -> bool {
    T::from_f64(i.lo()) <= *v && *v <= T::from_f64(i.hi())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

pub type Cq = Cx<Q>;
pub type Cd = Cx<D>;

impl<T: Exact> Cx<T> {
    pub fn zero() -> Self {
        Cx {
            re: T::int(0),
            im: T::int(0),
        }
    }
    pub fn one() -> Self {
        Cx {
            re: T::int(1),
            im: T::int(0),
        }
    }
    pub fn from_c(z: Complex64) -> Self {
        Cx {
            re: T::from_f64(z.re),
            im: T::from_f64(z.im),
        }
    }
    pub fn from_real(r: T) -> Self {
        Cx { re: r, im: T::int(0) }
    }
    pub fn add(&self, o: &Self) -> Self {
        Cx {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        Cx {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
    pub fn mul(&self, o: &Self) -> Self {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

impl Cq {
    pub fn div(&self, o: &Cq) -> Cq {
        let d = &o.re * &o.re + &o.im * &o.im;
        Cq {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        }
    }
}

pub fn contains_cq<T: Exact>(i: &ComplexInterval, v: &Cx<T>) -> bool {
    contains_q(&i.re, &v.re) && contains_q(&i.im, &v.im)
}

/// A float with a random full mantissa and exponent in `[-e, e]` decades.
pub fn rand_float(rng: &mut impl Rng, decades: i32) -> f64 {
    let m: f64 = rng.random_range(1.0..10.0);
    let e = rng.random_range(-decades..=decades);
    let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    s * m * 10f64.powi(e)
}

pub fn rand_interval(rng: &mut impl Rng) -> RealInterval {
    let c = rand_float(rng, 3);
    let w = match rng.random_range(0..4) {
        0 => 0.0,
        1 => c.abs() * 1e-14 * rng.random::<f64>(),
        2 => c.abs() * rng.random::<f64>(),
        _ => rand_float(rng, 2).abs(),
    };
    RealInterval::new(c, c + w).unwrap_or(RealInterval::point(c))
}

/// An interval that stays away from zero.
pub fn rand_nonzero_interval(rng: &mut impl Rng) -> RealInterval {
    loop {
        let i = rand_interval(rng);
        if !i.contains_zero() {
            return i;
        }
    }
}

pub fn rand_complex_interval(rng: &mut impl Rng) -> ComplexInterval {
    ComplexInterval::new(rand_interval(rng), rand_interval(rng))
}

/// A float inside `i`, with the endpoints drawn often.
pub fn sample(rng: &mut impl Rng, i: &RealInterval) -> f64 {
    match rng.random_range(0..4) {
        0 => i.lo(),
        1 => i.hi(),
        _ => {
            let v = i.lo() + rng.random::<f64>() * (i.hi() - i.lo());
            v.clamp(i.lo(), i.hi())
        }
    }
}

pub fn sample_c(rng: &mut impl Rng, i: &ComplexInterval) -> Complex64 {
    Complex64::new(sample(rng, &i.re), sample(rng, &i.im))
}

pub fn sample_box(rng: &mut impl Rng, b: &IntervalBox) -> Vec<Complex64> {
    b.iter().map(|c| sample_c(rng, c)).collect()
}

#[derive(Clone, Copy, Debug)]
pub enum RealOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqr,
    Pow3,
}

pub const REAL_OPS: [RealOp; 6] = [
    RealOp::Add,
    RealOp::Sub,
    RealOp::Mul,
    RealOp::Div,
    RealOp::Sqr,
    RealOp::Pow3,
];

/// One randomized containment check of a real operation.
pub fn check_real(rng: &mut impl Rng, op: RealOp) -> bool {
    let a = rand_interval(rng);
    let b = match op {
        RealOp::Div => rand_nonzero_interval(rng),
        _ => rand_interval(rng),
    };
    let (xf, yf) = (sample(rng, &a), sample(rng, &b));
    let (x, y) = (D::from_f64(xf), D::from_f64(yf));
    let (r, v) = match op {
        RealOp::Add => (a + b, x.add(&y)),
        RealOp::Sub => (a - b, x.sub(&y)),
        RealOp::Mul => (a * b, x.mul(&y)),
        RealOp::Div => {
            // x/y ∈ r  ⇔  lo·y ≤ x ≤ hi·y  (y > 0), reversed for y < 0.
            let r = a.checked_div(&b).unwrap();
            let (lo, hi) = (D::from_f64(r.lo()).mul(&y), D::from_f64(r.hi()).mul(&y));
            return if yf > 0.0 {
                lo <= x && x <= hi
            } else {
                hi <= x && x <= lo
            };
        }
        RealOp::Sqr => (a.sqr(), x.mul(&x)),
        RealOp::Pow3 => (a.powi(3), x.mul(&x).mul(&x)),
    };
    contains_q(&r, &v)
}

#[derive(Clone, Copy, Debug)]
pub enum ComplexOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

pub const COMPLEX_OPS: [ComplexOp; 5] = [
    ComplexOp::Add,
    ComplexOp::Sub,
    ComplexOp::Mul,
    ComplexOp::Div,
    ComplexOp::Pow,
];

pub fn check_complex(rng: &mut impl Rng, op: ComplexOp) -> bool {
    let a = rand_complex_interval(rng);
    let b = match op {
        ComplexOp::Div => ComplexInterval::new(rand_nonzero_interval(rng), rand_interval(rng)),
        _ => rand_complex_interval(rng),
    };
    let (x, y) = (Cd::from_c(sample_c(rng, &a)), Cd::from_c(sample_c(rng, &b)));
    let (r, v) = match op {
        ComplexOp::Add => (a + b, x.add(&y)),
        ComplexOp::Sub => (a - b, x.sub(&y)),
        ComplexOp::Mul => (a * b, x.mul(&y)),
        ComplexOp::Div => {
            // x/y = x·ȳ/|y|² with |y|² > 0, so compare against the bounds times |y|².
            let r = a.checked_div(&b).unwrap();
            let d = y.re.mul(&y.re).add(&y.im.mul(&y.im));
            let yc = Cd {
                re: y.re.clone(),
                im: D::int(0).sub(&y.im),
            };
            let num = x.mul(&yc);
            let within =
                |i: &RealInterval, v: &D| D::from_f64(i.lo()).mul(&d) <= *v && *v <= D::from_f64(i.hi()).mul(&d);
            return within(&r.re, &num.re) && within(&r.im, &num.im);
        }
        ComplexOp::Pow => {
            let e = rng.random_range(0..6);
            (a.powi(e), x.pow(e))
        }
    };
    contains_cq(&r, &v)
}

pub fn rand_point_matrix(rng: &mut impl Rng, n: usize) -> PointMatrix {
    let data = (0..n * n)
        .map(|_| Complex64::new(rand_float(rng, 2), rand_float(rng, 2)))
        .collect();
    PointMatrix::new(n, n, data).unwrap()
}

pub fn rand_interval_matrix(rng: &mut impl Rng, n: usize) -> IntervalMatrix {
    let data = (0..n * n).map(|_| rand_complex_interval(rng)).collect();
    IntervalMatrix::new(n, n, data).unwrap()
}

pub fn rand_box(rng: &mut impl Rng, n: usize) -> IntervalBox {
    IntervalBox::new((0..n).map(|_| rand_complex_interval(rng)).collect())
}

/// Point matrix times box and interval matrix times box.
pub fn check_matvec(rng: &mut impl Rng) -> bool {
    let n = rng.random_range(1..=4);
    let v = rand_box(rng, n);
    let m = rand_interval_matrix(rng, n);
    let p = rand_point_matrix(rng, n);
    let im = imatvec(&m, &v).unwrap();
    let pm = p.mul_box(&v).unwrap();
    let vs: Vec<Cd> = sample_box(rng, &v).into_iter().map(Cd::from_c).collect();
    (0..n).all(|i| {
        let mut a = Cd::zero();
        let mut b = Cd::zero();
        for j in 0..n {
            a = a.add(&Cd::from_c(sample_c(rng, &m.get(i, j))).mul(&vs[j]));
            b = b.add(&Cd::from_c(p.get(i, j)).mul(&vs[j]));
        }
        contains_cq(&im[i], &a) && contains_cq(&pm[i], &b)
    })
}

pub fn check_residual_matrix(rng: &mut impl Rng) -> bool {
    let n = rng.random_range(1..=4);
    let y = rand_point_matrix(rng, n);
    let m = rand_interval_matrix(rng, n);
    let r = residual_matrix(&y, &m).unwrap();
    let ms: Vec<Cd> = (0..n * n)
        .map(|k| Cd::from_c(sample_c(rng, &m.get(k / n, k % n))))
        .collect();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let mut v = if i == j { Cd::one() } else { Cd::zero() };
            for k in 0..n {
                v = v.sub(&Cd::from_c(y.get(i, k)).mul(&ms[k * n + j]));
            }
            contains_cq(&r.get(i, j), &v)
        })
    })
}

/// A random dense system with `n` unknowns, `m` parameters and degree ≤ 3.
pub fn rand_system(rng: &mut impl Rng, n: usize, m: usize) -> ParametricSystem {
    let eqs = (0..n)
        .map(|_| {
            (0..rng.random_range(1..=5))
                .map(|_| {
                    let coeff = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                    let param = if m > 0 && rng.random_bool(0.5) {
                        Some(rng.random_range(0..m))
                    } else {
                        None
                    };
                    let mut exps = vec![0u32; n];
                    for _ in 0..rng.random_range(0..=3) {
                        exps[rng.random_range(0..n)] += 1;
                    }
                    Term::new(coeff, param, exps)
                })
                .collect()
        })
        .collect();
    ParametricSystem::new(n, m, eqs).unwrap()
}

pub fn rand_cvec(rng: &mut impl Rng, k: usize, scale: f64) -> Vec<Complex64> {
    (0..k)
        .map(|_| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
        .collect()
}

/// Exact `p(t) = p0 + t·(p1 − p0)`.
pub fn params_q<T: Exact>(h: &Homotopy, t: &T) -> Vec<Cx<T>> {
    h.p0()
        .iter()
        .zip(h.p1())
        .map(|(&a, &b)| {
            let a = Cx::<T>::from_c(a);
            a.add(&Cx::from_c(b).sub(&a).mul(&Cx::from_real(t.clone())))
        })
        .collect()
}

pub fn term_q<T: Exact>(t: &Term, x: &[Cx<T>], p: &[Cx<T>]) -> Cx<T> {
    let mut v = Cx::from_c(t.coeff);
    if let Some(k) = t.param {
        v = v.mul(&p[k]);
    }
    for (xi, &e) in x.iter().zip(&t.exponents) {
        v = v.mul(&xi.pow(e));
    }
    v
}

/// Exact `H(x, t)` for the unsheared homotopy.
pub fn eval_q<T: Exact>(h: &Homotopy, x: &[Cx<T>], t: &T) -> Vec<Cx<T>> {
    let p = params_q(h, t);
    h.system()
        .equations()
        .iter()
        .map(|eq| eq.iter().fold(Cx::zero(), |acc, term| acc.add(&term_q(term, x, &p))))
        .collect()
}

/// Exact `∂H_i/∂x_j` for the unsheared homotopy.
pub fn jac_q<T: Exact>(h: &Homotopy, x: &[Cx<T>], t: &T) -> Vec<Vec<Cx<T>>> {
    let p = params_q(h, t);
    let n = h.dim();
    h.system()
        .equations()
        .iter()
        .map(|eq| {
            (0..n)
                .map(|j| {
                    eq.iter().fold(Cx::zero(), |acc, term| {
                        let e = term.exponents[j];
                        if e == 0 {
                            return acc;
                        }
                        let mut d = term.clone();
                        d.exponents[j] -= 1;
                        acc.add(&term_q(&d, x, &p).mul(&Cx::from_real(T::int(e.into()))))
                    })
                })
                .collect()
        })
        .collect()
}

/// Exact shear offset `x0 + τ·(x1 − x0)`.
pub fn shear_at<T: Exact>(x0: &[Complex64], x1: &[Complex64], tau: &T) -> Vec<Cx<T>> {
    let tau = Cx::from_real(tau.clone());
    x0.iter()
        .zip(x1)
        .map(|(&a, &b)| {
            let a = Cx::<T>::from_c(a);
            a.add(&Cx::from_c(b).sub(&a).mul(&tau))
        })
        .collect()
}

/// Exact shear offset at `t`, with `τ = (t − t0)/(t1 − t0)`.
pub fn shear_q(x0: &[Complex64], x1: &[Complex64], t0: f64, t1: f64, t: &Q) -> Vec<Cq> {
    shear_at(x0, x1, &((t - q(t0)) / (q(t1) - q(t0))))
}

fn rand_time(rng: &mut impl Rng) -> RealInterval {
    let a: f64 = rng.random();
    let b: f64 = rng.random();
    let w = if rng.random_bool(0.3) {
        0.0
    } else {
        (b * 0.2).min(1.0 - a)
    };
    RealInterval::new(a, a + w).unwrap()
}

/// `□H(I, T)` and `□∂ₓH(I, T)` contain `H` and `∂ₓH` at a sampled `(x, t)`,
/// for both an unsheared and a sheared homotopy.
pub fn check_interval_eval(rng: &mut impl Rng) -> bool {
    let n = rng.random_range(1..=3);
    let m = rng.random_range(0..=2);
    let sys = rand_system(rng, n, m);
    let h = Homotopy::new(sys, rand_cvec(rng, m, 2.0), rand_cvec(rng, m, 2.0)).unwrap();
    let i = IntervalBox::new(
        (0..n)
            .map(|_| {
                let c = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                ComplexInterval::centered(c, rng.random_range(0.0..0.5))
            })
            .collect(),
    );
    let t = rand_time(rng);
    // A dyadic fraction of the time interval keeps the shear offset exact.
    let tau = match rng.random_range(0..4) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random_range(0..=1u32 << 20) as f64 / (1u32 << 20) as f64,
    };
    let tau = D::from_f64(tau);
    let ts = D::from_f64(t.lo()).add(&tau.mul(&D::from_f64(t.hi()).sub(&D::from_f64(t.lo()))));
    let xs: Vec<Cd> = sample_box(rng, &i).into_iter().map(Cd::from_c).collect();

    let sheared = rng.random_bool(0.5) && t.width() > 0.0;
    let (hh, xa) = if sheared {
        let x0 = rand_cvec(rng, n, 2.0);
        let x1 = rand_cvec(rng, n, 2.0);
        let hs = h.apply_shear(&x0, &x1, t.lo(), t.hi()).unwrap();
        let s = shear_at(&x0, &x1, &tau);
        let xa = xs.iter().zip(&s).map(|(a, b)| a.add(b)).collect::<Vec<_>>();
        (hs, xa)
    } else {
        (h.clone(), xs.clone())
    };
    let f = hh.eval_interval(&i, t).unwrap();
    let j = hh.jac_x_interval(&i, t).unwrap();
    let fv = eval_q(&h, &xa, &ts);
    let jv = jac_q(&h, &xa, &ts);
    (0..n).all(|r| contains_cq(&f[r], &fv[r]) && (0..n).all(|c| contains_cq(&j.get(r, c), &jv[r][c])))
}

/// Deterministic stream for a named check.
pub fn stream(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn next_seed(rng: &mut impl RngCore) -> u64 {
    rng.next_u64()
}
