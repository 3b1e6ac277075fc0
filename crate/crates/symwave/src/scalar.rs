//! Coefficient arithmetic: the exact quadratic field `Q(sqrt(m))` and a
//! complex floating-point fallback.
//!
//! Exact coefficients are pairs `a + b*sqrt(rad)` of arbitrary-precision
//! rationals. The radicand is carried inside the value; `rad == 0` marks a
//! plain rational, which mixes freely with any radicand. A perfect-square
//! radicand is folded into the rational part on construction.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Default magnitude below which a float coefficient counts as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

fn isqrt_exact(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    for c in r.saturating_sub(1)..=r + 1 {
        if c * c == n {
            return Some(c);
        }
    }
    None
}

/// An element `a + b*sqrt(rad)` of a real quadratic field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quad {
    pub a: BigRational,
    pub b: BigRational,
    pub rad: u64,
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational, rad: u64) -> Self {
        let mut q = Quad { a, b, rad };
        q.normalize();
        q
    }

    pub fn from_rational(a: BigRational) -> Self {
        Quad { a, b: BigRational::zero(), rad: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `sqrt(rad)` itself; exact when the radicand is a nonnegative integer.
    pub fn sqrt_of(rad: u64) -> Self {
        Quad::new(BigRational::zero(), BigRational::one(), rad)
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.rad = 0;
            return;
        }
        if let Some(r) = isqrt_exact(self.rad) {
            self.a += &self.b * BigRational::from_integer(BigInt::from(r));
            self.b = BigRational::zero();
            self.rad = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the irrational part vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn unify_rad(&self, other: &Quad) -> Option<u64> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => Some(0),
            (true, false) => Some(other.rad),
            (false, true) => Some(self.rad),
            (false, false) => (self.rad == other.rad).then_some(self.rad),
        }
    }

    pub fn add(&self, other: &Quad) -> Quad {
        let rad = self
            .unify_rad(other)
            .unwrap_or_else(|| panic!("radicand mismatch: {} vs {}", self.rad, other.rad));
        Quad::new(&self.a + &other.a, &self.b + &other.b, rad)
    }

    pub fn sub(&self, other: &Quad) -> Quad {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Quad {
        Quad { a: -self.a.clone(), b: -self.b.clone(), rad: self.rad }
    }

    pub fn mul(&self, other: &Quad) -> Quad {
        let rad = self
            .unify_rad(other)
            .unwrap_or_else(|| panic!("radicand mismatch: {} vs {}", self.rad, other.rad));
        let m = BigRational::from_integer(BigInt::from(rad));
        let a = &self.a * &other.a + &self.b * &other.b * &m;
        let b = &self.a * &other.b + &self.b * &other.a;
        Quad::new(a, b, rad)
    }

    pub fn inv(&self) -> Quad {
        assert!(!self.is_zero(), "division by zero");
        // (a + b sqrt(r))^-1 = (a - b sqrt(r)) / (a^2 - b^2 r)
        let m = BigRational::from_integer(BigInt::from(self.rad));
        let norm = &self.a * &self.a - &self.b * &self.b * &m;
        assert!(!norm.is_zero(), "non-invertible quadratic element");
        Quad::new(&self.a / &norm, -&self.b / &norm, self.rad)
    }

    pub fn div(&self, other: &Quad) -> Quad {
        self.mul(&other.inv())
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.rad as f64).sqrt()
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.rad)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.rad)
        }
    }
}

/// A trigonometric-polynomial coefficient: exact or floating.
#[derive(Clone, PartialEq, Debug)]
pub enum Coeff {
    Exact(Quad),
    Float(Complex64),
}

/// Backend tag for a polynomial's coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
pub enum Backend {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "float")]
    Float,
}

impl Coeff {
    pub fn backend(&self) -> Backend {
        match self {
            Coeff::Exact(_) => Backend::Exact,
            Coeff::Float(_) => Backend::Float,
        }
    }

    pub fn zero(backend: Backend) -> Coeff {
        match backend {
            Backend::Exact => Coeff::Exact(Quad::from_int(0)),
            Backend::Float => Coeff::Float(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(backend: Backend) -> Coeff {
        match backend {
            Backend::Exact => Coeff::Exact(Quad::from_int(1)),
            Backend::Float => Coeff::Float(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn rational(num: i64, den: i64) -> Coeff {
        Coeff::Exact(Quad::ratio(num, den))
    }

    pub fn is_zero_with(&self, float_tol: f64) -> bool {
        match self {
            Coeff::Exact(q) => q.is_zero(),
            Coeff::Float(z) => z.norm() < float_tol,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_with(FLOAT_ZERO_TOL)
    }

    fn binop(&self, other: &Coeff, f: impl Fn(&Quad, &Quad) -> Quad, g: impl Fn(Complex64, Complex64) -> Complex64) -> Coeff {
        match (self, other) {
            (Coeff::Exact(x), Coeff::Exact(y)) => Coeff::Exact(f(x, y)),
            (Coeff::Float(x), Coeff::Float(y)) => Coeff::Float(g(*x, *y)),
            _ => panic!("coefficient backend mismatch"),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        self.binop(other, Quad::add, |x, y| x + y)
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.binop(other, Quad::sub, |x, y| x - y)
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        self.binop(other, Quad::mul, |x, y| x * y)
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        self.binop(other, Quad::div, |x, y| x / y)
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Exact(q) => Coeff::Exact(q.neg()),
            Coeff::Float(z) => Coeff::Float(-z),
        }
    }

    /// Complex conjugate. Exact coefficients are real and unchanged.
    pub fn conj(&self) -> Coeff {
        match self {
            Coeff::Exact(q) => Coeff::Exact(q.clone()),
            Coeff::Float(z) => Coeff::Float(z.conj()),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coeff::Exact(q) => Complex64::new(q.to_f64(), 0.0),
            Coeff::Float(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&Quad> {
        match self {
            Coeff::Exact(q) => Some(q),
            Coeff::Float(_) => None,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(q) => write!(f, "{}", q),
            Coeff::Float(z) => write!(f, "{}", z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_field_ops() {
        // (1 + sqrt(3)) * (2 - sqrt(3)) = 2 - sqrt3 + 2 sqrt3 - 3 = -1 + sqrt3
        let x = Quad::new(BigRational::one(), BigRational::one(), 3);
        let y = Quad::new(
            BigRational::from_integer(BigInt::from(2)),
            -BigRational::one(),
            3,
        );
        let p = x.mul(&y);
        assert_eq!(p, Quad::new(-BigRational::one(), BigRational::one(), 3));
        let q = p.div(&x);
        assert_eq!(q, y);
    }

    #[test]
    fn perfect_square_folds() {
        let s = Quad::sqrt_of(4);
        assert!(s.is_rational());
        assert_eq!(s, Quad::from_int(2));
        let s9 = Quad::sqrt_of(9).mul(&Quad::ratio(1, 3));
        assert!(s9.is_one());
    }

    #[test]
    fn rational_mixes_with_any_radicand() {
        let half = Quad::ratio(1, 2);
        let s3 = Quad::sqrt_of(3);
        let v = half.mul(&s3);
        assert_eq!(v.rad, 3);
        let back = v.mul(&s3); // (1/2) sqrt3 * sqrt3 = 3/2
        assert_eq!(back, Quad::ratio(3, 2));
    }
}
