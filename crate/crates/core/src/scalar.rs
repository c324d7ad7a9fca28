//! The two arithmetic modes: exact cyclotomic and complex floating point.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cyclotomic::{Cyclotomic, RootSum};

/// Default tolerance for equality assertions in float mode.
pub const FLOAT_EQ_TOL: f64 = 1e-10;

/// Arithmetic mode selector used by the CLI and the JSON readers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Field operations needed for Fourier analysis on finite abelian groups.
///
/// Methods that take a tolerance ignore it in exact mode.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn from_exact(c: &Cyclotomic) -> Self;
    /// `exp(2πi k / n)`.
    fn root_of_unity(k: u64, n: u32) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn to_complex(&self) -> Complex64;

    /// `re + i im` taken verbatim, in float mode only.
    fn from_float_pair(_re: f64, _im: f64) -> Option<Self> {
        None
    }

    /// The value as a rational, when it is one and the mode is exact.
    fn to_rational(&self) -> Option<BigRational> {
        None
    }

    /// Sign of the value as a real number, or `None` if it is not real.
    fn real_sign(&self, tol: f64) -> Option<Ordering>;

    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// `Σ value_k · ζ_n^{k}` over the given terms.
    fn root_sum<'a, I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, &'a Self)>,
    {
        let mut acc = Self::zero();
        for (k, v) in terms {
            acc = acc.add(&Self::root_of_unity(k as u64, n).mul(v));
        }
        acc
    }

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|o| self.mul(&o))
    }

    fn is_real(&self, tol: f64) -> bool {
        self.real_sign(tol).is_some()
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.real_sign(tol) == Some(Ordering::Equal)
    }

    /// Human-readable exact rendering (float mode prints the complex value).
    fn to_exact_string(&self) -> String;
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;

    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn from_i64(v: i64) -> Self {
        Cyclotomic::from_int(v)
    }
    fn from_rational(r: &BigRational) -> Self {
        Cyclotomic::from_rational(r.clone())
    }
    fn from_exact(c: &Cyclotomic) -> Self {
        c.clone()
    }
    fn root_of_unity(k: u64, n: u32) -> Self {
        Cyclotomic::root_of_unity((k % n as u64) as i64, n)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclotomic::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Cyclotomic::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclotomic::mul(self, other)
    }
    fn neg(&self) -> Self {
        Cyclotomic::neg(self)
    }
    fn conj(&self) -> Self {
        Cyclotomic::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        Cyclotomic::inv(self)
    }
    fn to_complex(&self) -> Complex64 {
        Cyclotomic::to_complex(self)
    }
    fn to_rational(&self) -> Option<BigRational> {
        Cyclotomic::to_rational(self)
    }
    fn real_sign(&self, _tol: f64) -> Option<Ordering> {
        Cyclotomic::real_sign(self)
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn root_sum<'a, I>(n: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, &'a Self)>,
    {
        let mut acc = RootSum::new(n);
        for (k, v) in terms {
            acc.add_term(k, v);
        }
        acc.finish()
    }
    fn to_exact_string(&self) -> String {
        Cyclotomic::to_exact_string(self)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_exact(c: &Cyclotomic) -> Self {
        c.to_complex()
    }
    fn from_float_pair(re: f64, im: f64) -> Option<Self> {
        Some(Complex64::new(re, im))
    }
    fn root_of_unity(k: u64, n: u32) -> Self {
        let k = k % n as u64;
        // exact values at quarter turns keep real inputs real
        match (4 * k).checked_rem(n as u64) {
            Some(0) => match 4 * k / n as u64 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            },
            _ => Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64),
        }
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| Complex64::new(1.0, 0.0) / self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn real_sign(&self, tol: f64) -> Option<Ordering> {
        if !self.re.is_finite() || !self.im.is_finite() || self.im.abs() > tol {
            return None;
        }
        Some(if self.re.abs() <= tol {
            Ordering::Equal
        } else if self.re > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
    fn to_exact_string(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else {
            format!("{}{:+}i", self.re, self.im)
        }
    }
}

/// Exact rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
