//! Forward-mode automatic differentiation with nestable dual numbers.
//!
//! Every geometric field in the crate is evaluated through the [`Scalar`]
//! trait, so the same code runs on `f64`, on `Dual<f64>` (first
//! derivatives) and on `Dual<Dual<f64>>` (second derivatives). Nesting
//! depth is fixed at compile time by the caller.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Real-like number type that the geometry code is generic over.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Embeds a constant.
    fn cst(v: f64) -> Self;
    /// The underlying real value with every infinitesimal part dropped.
    fn re(&self) -> f64;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powi(self, n: i32) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn one() -> Self {
        Self::cst(1.0)
    }

    fn scale(self, k: f64) -> Self {
        self * Self::cst(k)
    }

    /// True when the real value and all derivative parts are finite.
    fn is_finite_all(&self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn is_finite_all(&self) -> bool {
        self.is_finite()
    }
}

/// A dual number `re + eps·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    /// A constant (zero infinitesimal part).
    pub fn constant(re: T) -> Self {
        Self { re, eps: T::zero() }
    }

    /// Seeds `re + dir·ε`.
    pub fn seeded(re: T, dir: T) -> Self {
        Self { re, eps: dir }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = T::one() / rhs.re;
        let q = self.re * inv;
        Self::new(q, (self.eps - q * rhs.eps) * inv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Scalar> MulAssign for Dual<T> {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Scalar> DivAssign for Dual<T> {
    #[inline]
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn cst(v: f64) -> Self {
        Self::constant(T::cst(v))
    }

    fn re(&self) -> f64 {
        self.re.re()
    }

    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Self::new(s, self.eps / (s + s))
    }

    fn sin(self) -> Self {
        Self::new(self.re.sin(), self.eps * self.re.cos())
    }

    fn cos(self) -> Self {
        Self::new(self.re.cos(), -(self.eps * self.re.sin()))
    }

    fn exp(self) -> Self {
        let e = self.re.exp();
        Self::new(e, self.eps * e)
    }

    fn ln(self) -> Self {
        Self::new(self.re.ln(), self.eps / self.re)
    }

    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let lower = self.re.powi(n - 1);
        Self::new(lower * self.re, self.eps * lower.scale(n as f64))
    }

    fn scale(self, k: f64) -> Self {
        Self::new(self.re.scale(k), self.eps.scale(k))
    }

    fn is_finite_all(&self) -> bool {
        self.re.is_finite_all() && self.eps.is_finite_all()
    }
}

/// Lifts a point into dual numbers seeded along `dir`.
pub fn seed<S: Scalar>(x: &[S], dir: &[S]) -> Vec<Dual<S>> {
    debug_assert_eq!(x.len(), dir.len());
    x.iter().zip(dir).map(|(&a, &d)| Dual::seeded(a, d)).collect()
}

/// Lifts a point into dual numbers seeded along coordinate axis `axis`.
pub fn seed_axis<S: Scalar>(x: &[S], axis: usize) -> Vec<Dual<S>> {
    x.iter()
        .enumerate()
        .map(|(i, &a)| Dual::seeded(a, if i == axis { S::one() } else { S::zero() }))
        .collect()
}

/// Real parts of a dual vector.
pub fn values<S: Scalar>(v: &[Dual<S>]) -> Vec<S> {
    v.iter().map(|d| d.re).collect()
}

/// Infinitesimal parts of a dual vector.
pub fn tangents<S: Scalar>(v: &[Dual<S>]) -> Vec<S> {
    v.iter().map(|d| d.eps).collect()
}

/// Lifts a constant vector into the scalar type `S`.
pub fn lift<S: Scalar>(v: &[f64]) -> Vec<S> {
    v.iter().map(|&a| S::cst(a)).collect()
}

/// Lifts an `S` vector into dual numbers with zero infinitesimal part.
pub fn constant_duals<S: Scalar>(v: &[S]) -> Vec<Dual<S>> {
    v.iter().map(|&a| Dual::constant(a)).collect()
}
