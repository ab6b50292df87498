//! Real and complex rectangular interval arithmetic with outward rounding.
//!
//! Rounding is directed without touching the FPU rounding mode: each endpoint
//! is computed in round-to-nearest, the exact rounding error is recovered with
//! an error-free transformation (TwoSum, FMA), and the endpoint is moved one
//! ulp outward only when the error points the wrong way. Results that are
//! exactly representable therefore stay exact.
//!
//! Overflow inside the operator impls produces an infinite endpoint, which is
//! still a valid enclosure. Anything that leaves this module through a
//! fallible API is checked with [`RealInterval::check_finite`].

use crate::error::{check_dim, Error, Result};
use crate::serial::{serialize_fixed, FixedSeq};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Below this magnitude FMA-based error recovery may lose bits to underflow.
const TINY: f64 = 1e-290;

mod round {
    use super::TINY;

    #[inline]
    fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
        let bb = s - a;
        (a - (s - bb)) + (b - bb)
    }

    #[inline]
    pub fn add_down(a: f64, b: f64) -> f64 {
        let s = a + b;
        if !s.is_finite() {
            return if s > 0.0 { f64::MAX } else { s };
        }
        if two_sum_err(a, b, s) < 0.0 {
            s.next_down()
        } else {
            s
        }
    }

    #[inline]
    pub fn add_up(a: f64, b: f64) -> f64 {
        let s = a + b;
        if !s.is_finite() {
            return if s < 0.0 { -f64::MAX } else { s };
        }
        if two_sum_err(a, b, s) > 0.0 {
            s.next_up()
        } else {
            s
        }
    }

    #[inline]
    pub fn mul_down(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !p.is_finite() {
            return if p > 0.0 { f64::MAX } else { p };
        }
        if p.abs() < TINY || a.mul_add(b, -p) < 0.0 {
            p.next_down()
        } else {
            p
        }
    }

    #[inline]
    pub fn mul_up(a: f64, b: f64) -> f64 {
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let p = a * b;
        if !p.is_finite() {
            return if p < 0.0 { -f64::MAX } else { p };
        }
        if p.abs() < TINY || a.mul_add(b, -p) > 0.0 {
            p.next_up()
        } else {
            p
        }
    }

    /// Sign of the exact quotient's excess over the rounded one, or `None` when unknown.
    #[inline]
    fn div_excess(a: f64, b: f64, q: f64) -> Option<f64> {
        if q.abs() < TINY || a.abs() < TINY {
            return None;
        }
        let r = (-q).mul_add(b, a);
        Some(if (r > 0.0) == (b > 0.0) { r.abs() } else { -r.abs() })
    }

    #[inline]
    pub fn div_down(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        let q = a / b;
        if !q.is_finite() {
            return if q > 0.0 { f64::MAX } else { q };
        }
        match div_excess(a, b, q) {
            Some(e) if e >= 0.0 => q,
            _ => q.next_down(),
        }
    }

    #[inline]
    pub fn div_up(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        let q = a / b;
        if !q.is_finite() {
            return if q < 0.0 { -f64::MAX } else { q };
        }
        match div_excess(a, b, q) {
            Some(e) if e <= 0.0 => q,
            _ => q.next_up(),
        }
    }

    /// Upper bound on `sqrt(x)` for `x >= 0`.
    #[inline]
    pub fn sqrt_up(x: f64) -> f64 {
        let s = x.sqrt();
        if !s.is_finite() || s == 0.0 {
            return s;
        }
        if x < TINY || s.mul_add(s, -x) < 0.0 {
            s.next_up()
        } else {
            s
        }
    }
}

pub(crate) use round::{add_up, mul_up, sqrt_up};

/// Closed real interval `[lo, hi]` with binary64 endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

/// The four real arithmetic operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RealInterval {
    pub const ZERO: RealInterval = RealInterval { lo: 0.0, hi: 0.0 };
    pub const ONE: RealInterval = RealInterval { lo: 1.0, hi: 1.0 };
    pub(crate) const ENTIRE: RealInterval = RealInterval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFiniteEndpoint);
        }
        if lo > hi {
            return Err(Error::InvertedInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval `[x, x]`. Panics on non-finite `x`.
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "interval endpoint must be finite");
        Self { lo: x, hi: x }
    }

    #[inline]
    pub(crate) const fn raw(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// `[c - r, c + r]` rounded outward.
    pub fn centered(c: f64, r: f64) -> Self {
        Self {
            lo: round::add_down(c, -r),
            hi: round::add_up(c, r),
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn check_finite(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFiniteEndpoint)
        }
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        round::add_up(self.hi, -self.lo)
    }

    /// Non-certified center point.
    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    /// `max(|lo|, |hi|)`: exact maximum modulus over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self::raw(lo, hi))
    }

    /// Tight enclosure of `{x² : x ∈ self}`.
    pub fn sqr(&self) -> RealInterval {
        if self.lo >= 0.0 {
            Self::raw(round::mul_down(self.lo, self.lo), round::mul_up(self.hi, self.hi))
        } else if self.hi <= 0.0 {
            Self::raw(round::mul_down(self.hi, self.hi), round::mul_up(self.lo, self.lo))
        } else {
            let m = round::mul_up(self.lo, self.lo).max(round::mul_up(self.hi, self.hi));
            Self::raw(0.0, m)
        }
    }

    pub fn checked_div(&self, rhs: &RealInterval) -> Result<RealInterval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        let (a, b) = (self, rhs);
        let lo = round::div_down(a.lo, b.lo)
            .min(round::div_down(a.lo, b.hi))
            .min(round::div_down(a.hi, b.lo))
            .min(round::div_down(a.hi, b.hi));
        let hi = round::div_up(a.lo, b.lo)
            .max(round::div_up(a.lo, b.hi))
            .max(round::div_up(a.hi, b.lo))
            .max(round::div_up(a.hi, b.hi));
        Ok(Self::raw(lo, hi))
    }

    /// Integer power by repeated multiplication (squaring for even steps).
    pub fn powi(&self, e: u32) -> RealInterval {
        match e {
            0 => Self::ONE,
            1 => *self,
            _ if e % 2 == 0 => self.powi(e / 2).sqr(),
            _ => self.powi(e - 1) * *self,
        }
    }
}

/// Checked binary operation on real intervals.
pub fn real_op(a: RealInterval, b: RealInterval, op: ArithOp) -> Result<RealInterval> {
    let r = match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(&b)?,
    };
    r.check_finite()
}

impl Add for RealInterval {
    type Output = RealInterval;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::raw(round::add_down(self.lo, rhs.lo), round::add_up(self.hi, rhs.hi))
    }
}

impl Sub for RealInterval {
    type Output = RealInterval;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::raw(round::add_down(self.lo, -rhs.hi), round::add_up(self.hi, -rhs.lo))
    }
}

impl Neg for RealInterval {
    type Output = RealInterval;
    #[inline]
    fn neg(self) -> Self {
        Self::raw(-self.hi, -self.lo)
    }
}

impl Mul for RealInterval {
    type Output = RealInterval;
    fn mul(self, rhs: Self) -> Self {
        if !self.is_finite() || !rhs.is_finite() {
            return Self::ENTIRE;
        }
        let (a, b) = (self, rhs);
        if a.lo == a.hi && b.lo == b.hi {
            return Self::raw(round::mul_down(a.lo, b.lo), round::mul_up(a.lo, b.lo));
        }
        let lo = round::mul_down(a.lo, b.lo)
            .min(round::mul_down(a.lo, b.hi))
            .min(round::mul_down(a.hi, b.lo))
            .min(round::mul_down(a.hi, b.hi));
        let hi = round::mul_up(a.lo, b.lo)
            .max(round::mul_up(a.lo, b.hi))
            .max(round::mul_up(a.hi, b.lo))
            .max(round::mul_up(a.hi, b.hi));
        Self::raw(lo, hi)
    }
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for RealInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_fixed([self.lo, self.hi], s)
    }
}

impl<'de> Deserialize<'de> for RealInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let FixedSeq([lo, hi]) = FixedSeq::<2>::deserialize(d)?;
        RealInterval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Axis-aligned rectangle `re + i·im` in the complex plane.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval = ComplexInterval {
        re: RealInterval::ZERO,
        im: RealInterval::ZERO,
    };
    pub const ONE: ComplexInterval = ComplexInterval {
        re: RealInterval::ONE,
        im: RealInterval::ZERO,
    };

    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        Self { re, im }
    }

    pub fn point(z: Complex64) -> Self {
        Self {
            re: RealInterval::point(z.re),
            im: RealInterval::point(z.im),
        }
    }

    pub fn from_real(x: RealInterval) -> Self {
        Self {
            re: x,
            im: RealInterval::ZERO,
        }
    }

    /// Square `z + [-r, r] + i[-r, r]`, rounded outward.
    pub fn centered(z: Complex64, r: f64) -> Self {
        Self {
            re: RealInterval::centered(z.re, r),
            im: RealInterval::centered(z.im, r),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn check_finite(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFiniteEndpoint)
        }
    }

    /// Upper bound on `max |z|` over the rectangle.
    pub fn mag(&self) -> f64 {
        let a = self.re.mag();
        let b = self.im.mag();
        if a == 0.0 {
            return b;
        }
        if b == 0.0 {
            return a;
        }
        sqrt_up(add_up(mul_up(a, a), mul_up(b, b)))
    }

    pub fn mid(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    /// Largest half-width of the two components (rounded up).
    pub fn radius(&self) -> f64 {
        0.5 * self.re.width().max(self.im.width())
    }

    pub fn contains(&self, other: &ComplexInterval) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn contains_point(&self, z: Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn hull(&self, other: &ComplexInterval) -> ComplexInterval {
        Self::new(self.re.hull(&other.re), self.im.hull(&other.im))
    }

    pub fn intersect(&self, other: &ComplexInterval) -> Option<ComplexInterval> {
        Some(Self::new(self.re.intersect(&other.re)?, self.im.intersect(&other.im)?))
    }

    pub fn scale(&self, t: RealInterval) -> ComplexInterval {
        Self::new(self.re * t, self.im * t)
    }

    pub fn sqr(&self) -> ComplexInterval {
        let re = self.re.sqr() - self.im.sqr();
        let im = (self.re * self.im) * RealInterval::point(2.0);
        Self::new(re, im)
    }

    pub fn powi(&self, e: u32) -> ComplexInterval {
        match e {
            0 => Self::ONE,
            1 => *self,
            _ if e % 2 == 0 => self.powi(e / 2).sqr(),
            _ => self.powi(e - 1) * *self,
        }
    }

    pub fn checked_div(&self, rhs: &ComplexInterval) -> Result<ComplexInterval> {
        let denom = rhs.re.sqr() + rhs.im.sqr();
        if denom.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        let re = (self.re * rhs.re + self.im * rhs.im).checked_div(&denom)?;
        let im = (self.im * rhs.re - self.re * rhs.im).checked_div(&denom)?;
        Ok(Self::new(re, im))
    }
}

/// Checked binary operation on complex intervals.
pub fn complex_op(a: ComplexInterval, b: ComplexInterval, op: ArithOp) -> Result<ComplexInterval> {
    let r = match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(&b)?,
    };
    r.check_finite()
}

impl Add for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let re = self.re * rhs.re - self.im * rhs.im;
        let im = self.re * rhs.im + self.im * rhs.re;
        Self::new(re, im)
    }
}

impl fmt::Debug for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

impl Serialize for ComplexInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_fixed([self.re.lo, self.re.hi, self.im.lo, self.im.hi], s)
    }
}

impl<'de> Deserialize<'de> for ComplexInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let FixedSeq([a, b, c, e]) = FixedSeq::<4>::deserialize(d)?;
        let re = RealInterval::new(a, b).map_err(serde::de::Error::custom)?;
        let im = RealInterval::new(c, e).map_err(serde::de::Error::custom)?;
        Ok(Self::new(re, im))
    }
}

/// An n-dimensional complex interval box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalBox(pub Vec<ComplexInterval>);

impl IntervalBox {
    pub fn new(entries: Vec<ComplexInterval>) -> Self {
        Self(entries)
    }

    /// Degenerate box at a point.
    pub fn point(x: &[Complex64]) -> Self {
        Self(x.iter().map(|&z| ComplexInterval::point(z)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![ComplexInterval::ZERO; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[ComplexInterval] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexInterval> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(ComplexInterval::is_finite)
    }

    pub fn check_finite(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFiniteEndpoint)
        }
    }

    /// Max norm: the largest entry magnitude.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(ComplexInterval::mag).fold(0.0, f64::max)
    }

    /// Largest half-width over all real and imaginary components.
    pub fn radius(&self) -> f64 {
        self.0.iter().map(ComplexInterval::radius).fold(0.0, f64::max)
    }

    pub fn midpoint(&self) -> Vec<Complex64> {
        self.0.iter().map(ComplexInterval::mid).collect()
    }

    pub fn contains(&self, inner: &IntervalBox) -> Result<bool> {
        check_dim(self.dim(), inner.dim())?;
        Ok(self.0.iter().zip(&inner.0).all(|(o, i)| o.contains(i)))
    }

    pub fn contains_point(&self, x: &[Complex64]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        Ok(self.0.iter().zip(x).all(|(o, &z)| o.contains_point(z)))
    }

    pub fn intersect(&self, other: &IntervalBox) -> Result<Option<IntervalBox>> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(IntervalBox))
    }

    /// Component-wise difference `self - other` (used to move between coordinate frames).
    pub fn sub_box(&self, other: &IntervalBox) -> Result<IntervalBox> {
        check_dim(self.dim(), other.dim())?;
        Ok(IntervalBox(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect()))
    }

    pub fn add_box(&self, other: &IntervalBox) -> Result<IntervalBox> {
        check_dim(self.dim(), other.dim())?;
        Ok(IntervalBox(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect()))
    }
}

impl std::ops::Index<usize> for IntervalBox {
    type Output = ComplexInterval;
    fn index(&self, i: usize) -> &ComplexInterval {
        &self.0[i]
    }
}

pub fn width(a: &RealInterval) -> f64 {
    a.width()
}

pub fn mag(a: &ComplexInterval) -> f64 {
    a.mag()
}

pub fn box_norm(b: &IntervalBox) -> f64 {
    b.norm()
}

/// Square box of radius `r` around `x`.
pub fn box_centered(x: &[Complex64], r: f64) -> Result<IntervalBox> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonPositiveRadius(r));
    }
    IntervalBox(x.iter().map(|&z| ComplexInterval::centered(z, r)).collect()).check_finite()
}

pub fn box_contains(outer: &IntervalBox, inner: &IntervalBox) -> Result<bool> {
    outer.contains(inner)
}

pub fn midpoint(b: &IntervalBox) -> Vec<Complex64> {
    b.midpoint()
}

/// Minkowski sum of a box and a point, rounded outward.
pub fn minkowski_shift(b: &IntervalBox, v: &[Complex64]) -> Result<IntervalBox> {
    check_dim(b.dim(), v.len())?;
    IntervalBox(
        b.0.iter()
            .zip(v)
            .map(|(&i, &z)| i + ComplexInterval::point(z))
            .collect(),
    )
    .check_finite()
}
