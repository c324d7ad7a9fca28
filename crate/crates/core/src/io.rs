//! JSON interchange and small text formats.
//!
//! Functions are stored as `{"group": "Z4xZ2", "values": [[re, im], …]}` with
//! an optional `"exact"` list of field elements such as `"1/2 + 3*z5^2"`;
//! measures add `"haar_scale"` as a rational string.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fourier::{GroupFunction, HaarScale, ScaledMeasure};
use crate::group::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::scalar::Scalar;

const MAX_DIGITS: usize = 4096;
/// Bound on `bits(p) + bits(q)` for every parsed rational `p/q`.
pub const MAX_RATIONAL_BITS: u64 = 4096;
/// Largest root order accepted in exact strings.
pub const MAX_PARSED_CONDUCTOR: u32 = crate::cyclotomic::MAX_CONDUCTOR;
// room for a full power basis of bounded coefficients
const MAX_EXACT_LEN: usize = 1 << 23;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub group: String,
    pub values: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub group: String,
    pub values: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
    pub haar_scale: String,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn float_pairs<S: Scalar>(f: &GroupFunction<S>) -> Vec<[f64; 2]> {
    f.values()
        .iter()
        .map(|v| {
            let z = v.to_complex();
            [z.re, z.im]
        })
        .collect()
}

fn exact_strings<S: Scalar>(f: &GroupFunction<S>) -> Option<Vec<String>> {
    S::EXACT.then(|| f.values().iter().map(Scalar::to_exact_string).collect())
}

fn decode_values<S: Scalar>(values: &[[f64; 2]], exact: Option<&[String]>) -> Result<Vec<S>> {
    if let Some(exact) = exact {
        if exact.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: values.len(),
                found: exact.len(),
            });
        }
        if S::EXACT {
            return exact
                .iter()
                .map(|s| parse_cyclotomic(s).and_then(|c| finite(S::from_exact(&c))))
                .collect();
        }
    }
    values
        .iter()
        .map(|&[re, im]| {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Parse("non-finite value".into()));
            }
            if S::EXACT {
                let re = S::from_exact(&Cyclotomic::from_rational(float_to_rational(re)?));
                if im == 0.0 {
                    return Ok(re);
                }
                let im = Cyclotomic::from_rational(float_to_rational(im)?).mul(&Cyclotomic::i());
                Ok(re.add(&S::from_exact(&im)))
            } else {
                Ok(complex_as(re, im))
            }
        })
        .map(|v| v.and_then(finite))
        .collect()
}

fn finite<S: Scalar>(v: S) -> Result<S> {
    let z = v.to_complex();
    if z.re.is_finite() && z.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse("value has no finite float approximation".into()))
    }
}

fn small(r: &BigRational) -> bool {
    r.numer().bits() + r.denom().bits() <= MAX_RATIONAL_BITS
}

fn complex_as<S: Scalar>(re: f64, im: f64) -> S {
    if let Some(v) = S::from_float_pair(re, im) {
        return v;
    }
    let z = Complex64::new(re, im);
    let mut out = S::zero();
    if z.re != 0.0 {
        out = out.add(&S::from_rational(&float_to_rational(z.re).expect("finite")));
    }
    if z.im != 0.0 {
        let i = S::root_of_unity(1, 4);
        out = out.add(&i.mul(&S::from_rational(&float_to_rational(z.im).expect("finite"))));
    }
    out
}

/// The decimal a float prints as, read back exactly: `0.1` becomes `1/10`.
pub fn float_to_rational(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::Parse("non-finite value".into()));
    }
    parse_rational(&format!("{x:e}"))
}

impl FunctionFile {
    pub fn from_function<S: Scalar>(f: &GroupFunction<S>) -> Self {
        FunctionFile {
            group: f.group().to_string(),
            values: float_pairs(f),
            exact: exact_strings(f),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_function<S: Scalar>(&self) -> Result<GroupFunction<S>> {
        let group: FiniteAbelianGroup = self.group.parse()?;
        let values = decode_values(&self.values, self.exact.as_deref())?;
        GroupFunction::new(&group, values)
    }
}

impl MeasureFile {
    pub fn from_measure<S: Scalar>(mu: &ScaledMeasure<S>) -> Self {
        MeasureFile {
            group: mu.group().to_string(),
            values: float_pairs(mu.density()),
            exact: exact_strings(mu.density()),
            haar_scale: mu.haar().scale().to_exact_string(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_measure<S: Scalar>(&self) -> Result<ScaledMeasure<S>> {
        let group: FiniteAbelianGroup = self.group.parse()?;
        let values = decode_values(&self.values, self.exact.as_deref())?;
        let scale = S::from_rational(&parse_rational(&self.haar_scale)?);
        ScaledMeasure::new(GroupFunction::new(&group, values)?, HaarScale::new(&group, scale)?)
    }
}

/// Integers, fractions `p/q` and decimals with optional exponent, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() || s.len() > MAX_DIGITS {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_decimal(p.trim()).ok_or_else(err)?;
        let q = parse_decimal(q.trim()).ok_or_else(err)?;
        if q.is_zero() {
            return Err(Error::ZeroDivision(format!("denominator in {s:?}")));
        }
        let r = p / q;
        return if small(&r) { Ok(r) } else { Err(err()) };
    }
    parse_decimal(s).filter(small).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let scale = exp.checked_sub(i32::try_from(frac.len()).ok()?)?;
    if scale.unsigned_abs() as usize > MAX_DIGITS {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let ten = BigInt::from(10u32).pow(scale.unsigned_abs());
    let mut r = if scale >= 0 {
        BigRational::from_integer(n * ten)
    } else {
        BigRational::new(n, ten)
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// Sums of terms `c`, `c*zN^k`, `zN^k` or `zN`, the format written by
/// [`Cyclotomic::to_exact_string`].
pub fn parse_cyclotomic(s: &str) -> Result<Cyclotomic> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() || compact.len() > MAX_EXACT_LEN {
        return Err(Error::Parse(format!("not a field element: {s:?}")));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'*' | b'/' | b'^' | b'+' | b'-') {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut out = Cyclotomic::zero();
    let mut conductor = 1u32;
    for t in terms {
        let term = parse_term(t)?;
        conductor = conductor.lcm(&term.order());
        if conductor > MAX_PARSED_CONDUCTOR {
            return Err(Error::Parse(format!("root orders in {s:?} exceed {MAX_PARSED_CONDUCTOR}")));
        }
        out = out.add(&term);
    }
    if !out.coeffs().iter().all(small) {
        return Err(Error::Parse("coefficient too large".into()));
    }
    Ok(out)
}

fn parse_term(t: &str) -> Result<Cyclotomic> {
    let err = || Error::Parse(format!("bad term {t:?}"));
    let (sign, body) = match t.as_bytes().first() {
        Some(b'+') => (BigRational::one(), &t[1..]),
        Some(b'-') => (-BigRational::one(), &t[1..]),
        _ => (BigRational::one(), t),
    };
    let (coeff, root) = match body.find('z') {
        Some(0) => (BigRational::one(), body),
        Some(i) => {
            let c = body[..i].strip_suffix('*').ok_or_else(err)?;
            (parse_rational(c)?, &body[i..])
        }
        None => return Ok(Cyclotomic::from_rational(sign * parse_rational(body)?)),
    };
    let root = &root[1..];
    let (n, k) = match root.split_once('^') {
        Some((n, k)) => (n, k.parse::<u32>().map_err(|_| err())?),
        None => (root, 1),
    };
    let n: u32 = n.parse().map_err(|_| err())?;
    if n == 0 || n > MAX_PARSED_CONDUCTOR {
        return Err(Error::Parse(format!("root order {n} out of range")));
    }
    let z = Cyclotomic::root_of_unity(i64::from(k % n), n);
    Ok(z.scale(&(sign * coeff)))
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<f64>>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let rows: Vec<Vec<f64>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    let v = v.trim();
                    let x: f64 = v
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad matrix entry {v:?}")))?;
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(Error::Parse(format!("non-finite matrix entry {v:?}")))
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("rows have unequal lengths".into()));
    }
    Ok(rows)
}

/// Generators as a JSON array of residue lists, or `;`-separated
/// comma lists such as `"2,0;0,1"`. An empty list gives the trivial subgroup.
pub fn parse_generators(s: &str, group: &FiniteAbelianGroup) -> Result<Subgroup> {
    let s = s.trim();
    let lists: Vec<Vec<usize>> = if s.starts_with('[') {
        parse_json::<Vec<Vec<usize>>>(s)?
    } else if s.is_empty() {
        Vec::new()
    } else {
        s.split(';')
            .map(|g| {
                g.trim()
                    .trim_start_matches('(')
                    .trim_end_matches(')')
                    .split(',')
                    .map(|r| {
                        r.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad residue {r:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?
    };
    let gens: Vec<GroupElement> = lists.into_iter().map(GroupElement::new).collect();
    for g in &gens {
        group.index_of(g)?;
    }
    Subgroup::from_generators(group, &gens)
}

pub fn format_generators(h: &Subgroup) -> Vec<Vec<usize>> {
    h.generators().iter().map(|g| g.residues().to_vec()).collect()
}

/// Rational approximation used for diagnostics only.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
