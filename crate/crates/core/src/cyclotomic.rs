//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Every character value of a finite abelian group of exponent `e` is a power
//! of `ζ_e`, so transforms of rational data stay inside `Q(ζ_e)` and can be
//! carried out without rounding. Elements are stored in the power basis
//! `1, ζ, …, ζ^{φ(n)-1}` reduced modulo the `n`-th cyclotomic polynomial;
//! elements of different conductors are compared and combined in the field
//! of the least common multiple.
//!
//! Signs of real elements are decided by evaluating the real part with a
//! rigorous error bound: first in `f64`, then in fixed-point arithmetic of
//! doubling precision until the enclosing interval excludes zero. Exact zero
//! is detected algebraically beforehand, so the refinement always stops.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest conductor accepted. Far above anything a group of order ≤ 2^16
/// with a sensible exponent needs, and keeps the reduction tables bounded.
pub const MAX_CONDUCTOR: u32 = 1 << 12;

struct ReductionTable {
    degree: usize,
    /// `powers[j]` is `ζ^j` expressed in the power basis, for `j < n`.
    powers: Vec<Vec<i64>>,
}

impl ReductionTable {
    fn entries(&self) -> usize {
        self.powers.len() * self.degree
    }
}

/// Cached tables are dropped wholesale once they hold this many coefficients.
const TABLE_BUDGET: usize = 1 << 24;

#[derive(Default)]
struct TableCache {
    tables: HashMap<u32, Arc<ReductionTable>>,
    entries: usize,
}

fn tables() -> &'static RwLock<TableCache> {
    static TABLES: OnceLock<RwLock<TableCache>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(TableCache::default()))
}

fn table(n: u32) -> Arc<ReductionTable> {
    assert!(
        (1..=MAX_CONDUCTOR).contains(&n),
        "cyclotomic conductor {n} out of range"
    );
    if let Some(t) = tables().read().expect("table lock").tables.get(&n) {
        return Arc::clone(t);
    }
    let built = Arc::new(build_table(n));
    let mut cache = tables().write().expect("table lock");
    if let Some(t) = cache.tables.get(&n) {
        return Arc::clone(t);
    }
    if cache.entries + built.entries() > TABLE_BUDGET {
        cache.tables.clear();
        cache.entries = 0;
    }
    cache.entries += built.entries();
    cache.tables.insert(n, Arc::clone(&built));
    built
}

/// Coefficients (low to high) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn build_table(n: u32) -> ReductionTable {
    let phi = cyclotomic_polynomial(n);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; degree];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x, then eliminate x^degree using the monic relation
        let top = cur[degree - 1];
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..degree {
            cur[i] -= top * phi[i];
        }
    }
    ReductionTable { degree, powers }
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// An element of `Q(ζ_n)`, stored as integer power-basis coefficients over
/// a common positive denominator in lowest terms.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

fn reduce_ints(n: u32, red: &[BigInt]) -> Vec<BigInt> {
    let t = table(n);
    let mut out = vec![BigInt::zero(); t.degree];
    for (j, c) in red.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, &p) in t.powers[j].iter().enumerate() {
            match p {
                0 => {}
                1 => out[i] += c,
                -1 => out[i] -= c,
                _ => out[i] += c * BigInt::from(p),
            }
        }
    }
    out
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_rational(r: BigRational) -> Self {
        let (n, d) = r.into_raw();
        Self::normalized(1, vec![n], d)
    }

    pub fn from_int(v: i64) -> Self {
        Cyclotomic {
            order: 1,
            num: vec![BigInt::from(v)],
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `exp(2πi k / n)`.
    pub fn root_of_unity(k: i64, n: u32) -> Self {
        let k = k.rem_euclid(n as i64) as usize;
        let t = table(n);
        let num = t.powers[k].iter().map(|&c| BigInt::from(c)).collect();
        Cyclotomic {
            order: n,
            num,
            den: BigInt::one(),
        }
        .demoted()
    }

    /// The imaginary unit, `ζ_4`.
    pub fn i() -> Self {
        Self::root_of_unity(1, 4)
    }

    /// Conductor of the field the element is currently stored in.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients at the stored conductor.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new_raw(self.num[0].clone(), self.den.clone()))
    }

    fn normalized(order: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        if num.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        if !den.is_one() {
            let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
            if !g.is_one() {
                for c in &mut num {
                    *c /= &g;
                }
                den /= &g;
            }
        }
        Cyclotomic { order, num, den }.demoted()
    }

    fn demoted(mut self) -> Self {
        if self.order != 1 && self.is_rational() {
            self.num.truncate(1);
            self.order = 1;
        }
        self
    }

    /// Numerators of `Σ red[j] ζ_m^j` at conductor `m` (a multiple of `self.order`).
    fn redundant_at(&self, m: u32) -> Vec<BigInt> {
        debug_assert_eq!(m % self.order, 0);
        let step = (m / self.order) as usize;
        let mut red = vec![BigInt::zero(); m as usize];
        for (j, c) in self.num.iter().enumerate() {
            red[j * step] = c.clone();
        }
        red
    }

    /// Numerators in the power basis at conductor `m`, without demotion.
    fn numerators_at(&self, m: u32) -> Vec<BigInt> {
        if m == self.order {
            return self.num.clone();
        }
        if self.order == 1 {
            let mut num = vec![BigInt::zero(); table(m).degree];
            num[0] = self.num[0].clone();
            return num;
        }
        reduce_ints(m, &self.redundant_at(m))
    }

    /// Power-basis coefficients at conductor `m`, a multiple of the order.
    pub fn coeffs_at(&self, m: u32) -> Option<Vec<BigRational>> {
        m.is_multiple_of(self.order).then(|| {
            self.numerators_at(m)
                .into_iter()
                .map(|c| BigRational::new(c, self.den.clone()))
                .collect()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let m = if self.order == other.order {
            self.order
        } else {
            self.order.lcm(&other.order)
        };
        let a = self.numerators_at(m);
        let b = other.numerators_at(m);
        let (num, den) = if self.den == other.den {
            (a.iter().zip(&b).map(|(x, y)| x + y).collect(), self.den.clone())
        } else {
            let den = self.den.lcm(&other.den);
            let fa = &den / &self.den;
            let fb = &den / &other.den;
            (a.iter().zip(&b).map(|(x, y)| x * &fa + y * &fb).collect(), den)
        };
        Self::normalized(m, num, den)
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.order, num, &self.den * r.denom())
    }

    fn scale_int(&self, k: &BigInt, d: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let num = self.num.iter().map(|c| c * k).collect();
        Self::normalized(self.order, num, &self.den * d)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if other.order == 1 {
            return self.scale_int(&other.num[0], &other.den);
        }
        if self.order == 1 {
            return other.scale_int(&self.num[0], &self.den);
        }
        let m = self.order.lcm(&other.order);
        let sa = (m / self.order) as usize;
        let sb = (m / other.order) as usize;
        let mut red = vec![BigInt::zero(); m as usize];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                red[(i * sa + j * sb) % m as usize] += a * b;
            }
        }
        Self::normalized(m, reduce_ints(m, &red), &self.den * &other.den)
    }

    /// Image under the automorphism `ζ ↦ ζ^k` (`k` coprime to the conductor).
    pub fn galois(&self, k: u32) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut red = vec![BigInt::zero(); n];
        for (j, c) in self.num.iter().enumerate() {
            red[(j * k as usize) % n] += c;
        }
        Self::normalized(self.order, reduce_ints(self.order, &red), self.den.clone())
    }

    pub fn conj(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        self.galois(self.order - 1)
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2 || self.is_rational() || self.conj() == *self
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        self.mul(&self.norm_cofactor())
            .to_rational()
            .expect("norm lies in Q")
    }

    fn norm_cofactor(&self) -> Self {
        let n = self.order;
        let mut acc = Self::one();
        for k in 2..n.max(2) {
            if k.gcd(&n) == 1 {
                acc = acc.mul(&self.galois(k));
            }
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.to_rational() {
            return Some(Self::from_rational(r.recip()));
        }
        let cof = self.norm_cofactor();
        let norm = self.mul(&cof).to_rational().expect("norm lies in Q");
        Some(cof.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|o| self.mul(&o))
    }

    fn den_f64(&self) -> f64 {
        self.den.to_f64().unwrap_or(f64::INFINITY)
    }

    fn coeff_f64(&self, c: &BigInt) -> f64 {
        let (x, d) = (c.to_f64().unwrap_or(f64::NAN), self.den_f64());
        if x.is_finite() && d.is_finite() {
            x / d
        } else {
            BigRational::new(c.clone(), self.den.clone())
                .to_f64()
                .unwrap_or(f64::NAN)
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = self.coeff_f64(c);
            let theta = std::f64::consts::TAU * j as f64 / n;
            acc += Complex64::from_polar(cf, theta);
        }
        acc
    }

    /// Sign of a real element, `None` if the element is not real.
    pub fn real_sign(&self) -> Option<Ordering> {
        if self.is_rational() {
            return Some(self.num[0].sign().cmp_zero());
        }
        if !self.is_real() {
            return None;
        }
        Some(self.fast_sign().unwrap_or_else(|| self.precise_sign()))
    }

    /// Compare two real elements exactly.
    pub fn cmp_real(&self, other: &Self) -> Option<Ordering> {
        self.sub(other).real_sign()
    }

    // the denominator is positive, so the sign is that of the numerator sum
    fn fast_sign(&self) -> Option<Ordering> {
        let n = self.order as f64;
        let mut approx = 0.0f64;
        let mut magnitude = 0.0f64;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64()?;
            if !cf.is_finite() || cf.abs() > 1e300 {
                return None;
            }
            approx += cf * (std::f64::consts::TAU * j as f64 / n).cos();
            magnitude += cf.abs();
        }
        // Each term carries at most a few ulps of error relative to |c_j|.
        let bound = magnitude * (self.num.len() as f64 + 8.0) * f64::EPSILON * 4.0;
        if !approx.is_finite() || approx.abs() <= bound {
            return None;
        }
        Some(if approx > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    fn precise_sign(&self) -> Ordering {
        let mut bits = 128u32;
        loop {
            // numerator sum · 2^bits lies in [sum - err, sum + err]
            let mut sum = BigInt::zero();
            let mut err = BigInt::zero();
            for (j, c) in self.num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                sum += c * cos_turn_fixed(j as u64, self.order as u64, bits);
                err += c.abs();
            }
            if sum.abs() > err {
                return if sum.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            bits *= 2;
            assert!(bits <= 1 << 20, "sign refinement did not terminate");
        }
    }

    /// Render in the power basis, e.g. `1/2 + 3*z5^2`.
    pub fn to_exact_string(&self) -> String {
        if let Some(r) = self.to_rational() {
            return r.to_string();
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match j {
                0 => c.to_string(),
                1 => format!("{c}*z{}", self.order),
                _ => format!("{c}*z{}^{j}", self.order),
            });
        }
        parts.join(" + ")
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.num == other.num;
        }
        if self.order == 1 || other.order == 1 {
            // stored elements are demoted whenever they are rational
            return false;
        }
        let m = self.order.lcm(&other.order);
        let a = Self::normalized(m, self.numerators_at(m), self.den.clone());
        let b = Self::normalized(m, other.numerators_at(m), other.den.clone());
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({})", self.to_exact_string())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

/// Accumulates `Σ value · ζ_n^k` in the redundant basis and reduces once.
pub struct RootSum {
    n: u32,
    /// `ζ` of the original conductor is `ζ_n^base`
    base: usize,
    red: Vec<BigInt>,
    den: BigInt,
}

impl RootSum {
    pub fn new(n: u32) -> Self {
        RootSum {
            n,
            base: 1,
            red: vec![BigInt::zero(); n as usize],
            den: BigInt::one(),
        }
    }

    /// Add `value · ζ_n^k`. When the conductor of `value` does not divide
    /// `n`, the sum moves to the least common multiple.
    pub fn add_term(&mut self, k: usize, value: &Cyclotomic) {
        if !self.n.is_multiple_of(value.order) {
            let m = self.n.lcm(&value.order);
            let up = (m / self.n) as usize;
            let mut red = vec![BigInt::zero(); m as usize];
            for (j, c) in std::mem::take(&mut self.red).into_iter().enumerate() {
                red[j * up] = c;
            }
            self.red = red;
            self.base *= up;
            self.n = m;
        }
        let n = self.n as usize;
        if value.is_zero() {
            return;
        }
        let factor = if value.den == self.den {
            None
        } else {
            let den = self.den.lcm(&value.den);
            let up = &den / &self.den;
            if !up.is_one() {
                for c in &mut self.red {
                    *c *= &up;
                }
            }
            self.den = den;
            Some(&self.den / &value.den)
        };
        let step = n / value.order as usize;
        let k = k * self.base;
        for (j, c) in value.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let slot = &mut self.red[(k + j * step) % n];
            match &factor {
                Some(f) if !f.is_one() => *slot += c * f,
                _ => *slot += c,
            }
        }
    }

    pub fn finish(self) -> Cyclotomic {
        Cyclotomic::normalized(self.n, reduce_ints(self.n, &self.red), self.den)
    }
}

/// `π · 2^bits`, truncated, with error below `2^8` ulps.
fn pi_fixed(bits: u32) -> BigInt {
    fn atan_inv(m: u64, bits: u32) -> BigInt {
        let one = BigInt::one() << bits;
        let m = BigInt::from(m);
        let m2 = &m * &m;
        let mut power = one / &m;
        let mut sum = power.clone();
        let mut k = 1u64;
        loop {
            power /= &m2;
            if power.is_zero() {
                break;
            }
            let term = &power / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            k += 1;
        }
        sum
    }
    atan_inv(5, bits) * 16 - atan_inv(239, bits) * 4
}

/// Integer `C` with `|C - 2^bits · cos(2π j / n)| ≤ 1`.
pub(crate) fn cos_turn_fixed(j: u64, n: u64, bits: u32) -> BigInt {
    const GUARD: u32 = 48;
    let wp = bits + GUARD;
    let j = j % n;
    let j = j.min(n - j);
    // angle = 2πj/n ∈ [0, π]; fold into [0, π/2]
    let (num, negate) = if 4 * j <= n {
        (2 * j, false)
    } else {
        (n - 2 * j, true)
    };
    let theta = pi_fixed(wp) * BigInt::from(num) / BigInt::from(n);
    let theta2 = (&theta * &theta) >> wp;
    let mut term = BigInt::one() << wp;
    let mut sum = term.clone();
    let mut k = 0u64;
    loop {
        term = -((&term * &theta2) >> wp) / BigInt::from((2 * k + 1) * (2 * k + 2));
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    if negate {
        sum = -sum;
    }
    // round to the requested precision
    (sum + (BigInt::one() << (GUARD - 1))) >> GUARD
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn roots_multiply_and_sum_to_zero() {
        for n in [3u32, 4, 5, 6, 8, 12] {
            let mut sum = Cyclotomic::zero();
            for k in 0..n as i64 {
                sum = sum.add(&Cyclotomic::root_of_unity(k, n));
                let prod = Cyclotomic::root_of_unity(k, n).mul(&Cyclotomic::root_of_unity(3, n));
                assert_eq!(prod, Cyclotomic::root_of_unity(k + 3, n));
            }
            assert!(sum.is_zero(), "n={n}");
        }
    }

    #[test]
    fn mixed_conductors_compare_in_common_field() {
        // ζ_3 = ζ_6^2, ζ_4 = ζ_12^3
        assert_eq!(Cyclotomic::root_of_unity(1, 3), Cyclotomic::root_of_unity(2, 6));
        assert_eq!(Cyclotomic::root_of_unity(1, 4), Cyclotomic::root_of_unity(3, 12));
        let i = Cyclotomic::i();
        assert_eq!(i.mul(&i), Cyclotomic::from_int(-1));
        assert_eq!(Cyclotomic::root_of_unity(2, 4), Cyclotomic::from_int(-1));
    }

    #[test]
    fn cosines_at_sixth_roots_are_rational() {
        let c = Cyclotomic::root_of_unity(1, 6).add(&Cyclotomic::root_of_unity(5, 6));
        assert_eq!(c, Cyclotomic::from_int(1));
        let c = Cyclotomic::root_of_unity(1, 3).add(&Cyclotomic::root_of_unity(2, 3));
        assert_eq!(c, Cyclotomic::from_int(-1));
    }

    #[test]
    fn inverse_and_norm() {
        let a = Cyclotomic::from_int(2).add(&Cyclotomic::root_of_unity(1, 5));
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), Cyclotomic::one());
        // N(2 + ζ_5) = Φ_5(-2) = 16 - 8 + 4 - 2 + 1
        assert_eq!(a.norm(), BigRational::from_integer(11.into()));
        assert!(Cyclotomic::zero().inv().is_none());
    }

    #[test]
    fn root_sums_grow_the_conductor() {
        // Σ over ζ_3^k · ζ_4 with k = 0, 1, 2 vanishes
        let mut acc = RootSum::new(3);
        for k in 0..3 {
            acc.add_term(k, &Cyclotomic::i());
        }
        assert!(acc.finish().is_zero());
        let mut acc = RootSum::new(3);
        acc.add_term(1, &Cyclotomic::i());
        acc.add_term(0, &Cyclotomic::one());
        let expect = Cyclotomic::root_of_unity(1, 3).mul(&Cyclotomic::i()).add(&Cyclotomic::one());
        assert_eq!(acc.finish(), expect);
    }

    #[test]
    fn real_signs() {
        // 2cos(2π/5) = (√5 - 1)/2 > 0, 2cos(4π/5) < 0
        let t1 = Cyclotomic::root_of_unity(1, 5).add(&Cyclotomic::root_of_unity(4, 5));
        let t2 = Cyclotomic::root_of_unity(2, 5).add(&Cyclotomic::root_of_unity(3, 5));
        assert_eq!(t1.real_sign(), Some(Ordering::Greater));
        assert_eq!(t2.real_sign(), Some(Ordering::Less));
        // golden ratio identity t1^2 + t1 - 1 = 0
        let g = t1.mul(&t1).add(&t1).sub(&Cyclotomic::one());
        assert!(g.is_zero());
        assert_eq!(Cyclotomic::i().real_sign(), None);
    }

    #[test]
    fn tiny_real_values_use_precise_path() {
        // x = t1 - p/q with p/q a close rational approximation of 2cos(2π/5)
        let t1 = Cyclotomic::root_of_unity(1, 5).add(&Cyclotomic::root_of_unity(4, 5));
        let p = BigInt::parse_bytes(b"618033988749894848204586834365638117720", 10).unwrap();
        let q = BigInt::one() * BigInt::from(10).pow(39);
        let approx = Cyclotomic::from_rational(BigRational::new(p, q));
        let d = t1.sub(&approx);
        assert!(d.fast_sign().is_none());
        assert_eq!(d.real_sign(), Some(Ordering::Greater));
        assert_eq!(approx.sub(&t1).real_sign(), Some(Ordering::Less));
    }

    #[test]
    fn fixed_point_cosine() {
        for (j, n) in [(0u64, 1u64), (1, 4), (1, 6), (1, 8), (3, 7), (5, 12)] {
            let c = cos_turn_fixed(j, n, 60);
            let expected = (std::f64::consts::TAU * j as f64 / n as f64).cos();
            let got = c.to_f64().unwrap() / 2f64.powi(60);
            assert!((got - expected).abs() < 1e-15, "{j}/{n}: {got} vs {expected}");
        }
    }
}
