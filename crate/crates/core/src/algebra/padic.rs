//! Finite-precision elements of `Q_p(pi)` with `pi^e = p`, `e` in `{1, 2}`,
//! and digit lists of `Z_p`.
//!
//! Elements are stored as base-`pi` digits `d_j` in `{0..p-1}` on the window
//! `[ord, prec)`: the value is known modulo `pi^prec`. Carries move from
//! exponent `j` to `j + e` since `p = pi^e`. Values built from rationals keep
//! the rational alongside the digits, which certifies their valuation even
//! when it lies beyond the digit window.

use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul};
use serde_json::{json, Value};

use super::field::{Field, FieldElement};
use crate::error::{Error, Result};

type Q = Ratio<i128>;

/// Normalizes signed digit values on `[lo, lo + vals.len())` into `{0..p-1}`,
/// dropping carries past the end of the window.
fn normalize(p: u32, e: u8, vals: &mut [i64]) -> Vec<u32> {
    let p = p as i64;
    let e = e as usize;
    let n = vals.len();
    for j in 0..n {
        let v = vals[j];
        if !(0..p).contains(&v) {
            let q = v.div_euclid(p);
            vals[j] = v.rem_euclid(p);
            if j + e < n {
                vals[j + e] += q;
            }
        }
    }
    vals.iter().map(|&v| v as u32).collect()
}

fn vp_i128(mut n: i128, p: i128) -> i64 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[derive(Clone, PartialEq, Eq)]
pub struct PadicScalar {
    p: u32,
    e: u8,
    ord: i64,
    digits: Vec<u32>,
    prec: i64,
    exact: Option<Q>,
}

/// Operation selector for [`padic_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadicOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn padic_arith(x: &PadicScalar, y: &PadicScalar, op: PadicOp) -> Result<PadicScalar> {
    match op {
        PadicOp::Add => x.add(y),
        PadicOp::Sub => x.sub(y),
        PadicOp::Mul => x.mul(y),
        PadicOp::Div => x.div(y),
    }
}

impl PadicScalar {
    fn check_params(p: u32, e: u8) -> Result<()> {
        if !super::field::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e != 1 && e != 2 {
            return Err(Error::UnsupportedRamification(e));
        }
        Ok(())
    }

    fn from_window(p: u32, e: u8, lo: i64, mut vals: Vec<i64>, exact: Option<Q>) -> Self {
        let prec = lo + vals.len() as i64;
        let digits = normalize(p, e, &mut vals);
        let skip = digits.iter().take_while(|&&d| d == 0).count();
        PadicScalar {
            p,
            e,
            ord: lo + skip as i64,
            digits: digits[skip..].to_vec(),
            prec,
            exact,
        }
    }

    /// The value `num/den`, with digits known modulo `pi^prec`.
    pub fn from_rational(num: i128, den: i128, p: u32, e: u8, prec: i64) -> Result<Self> {
        Self::check_params(p, e)?;
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let q = Q::new(num, den);
        Ok(Self::digits_of_rational(q, p, e, prec))
    }

    pub fn from_int(n: i128, p: u32, e: u8, prec: i64) -> Result<Self> {
        Self::from_rational(n, 1, p, e, prec)
    }

    fn digits_of_rational(q: Q, p: u32, e: u8, prec: i64) -> Self {
        let pi = p as i128;
        if *q.numer() == 0 {
            return PadicScalar {
                p,
                e,
                ord: prec,
                digits: vec![],
                prec,
                exact: Some(q),
            };
        }
        let v = vp_i128(*q.numer(), pi) - vp_i128(*q.denom(), pi);
        let mut n = *q.numer() / pi.pow(vp_i128(*q.numer(), pi) as u32);
        let d = *q.denom() / pi.pow(vp_i128(*q.denom(), pi) as u32);
        let lo = e as i64 * v;
        if prec <= lo {
            return PadicScalar {
                p,
                e,
                ord: prec,
                digits: vec![],
                prec,
                exact: Some(q),
            };
        }
        let dinv = inv_mod(d.rem_euclid(pi) as u64, p as u64) as i128;
        let mut vals = vec![0i64; (prec - lo) as usize];
        let mut k = 0usize;
        while k < vals.len() {
            let digit = (n.rem_euclid(pi) * dinv).rem_euclid(pi);
            vals[k] = digit as i64;
            n = (n - digit * d) / pi;
            k += e as usize;
        }
        Self::from_window(p, e, lo, vals, Some(q))
    }

    /// Builds `sum d_j pi^j` from `(exponent, digit)` pairs, known modulo `pi^prec`.
    pub fn from_pi_digits(p: u32, e: u8, pairs: &[(i64, i64)], prec: i64) -> Result<Self> {
        Self::check_params(p, e)?;
        let lo = pairs
            .iter()
            .map(|&(j, _)| j)
            .min()
            .unwrap_or(prec)
            .min(prec);
        let mut vals = vec![0i64; (prec - lo).max(0) as usize];
        for &(j, d) in pairs {
            if j < prec {
                vals[(j - lo) as usize] += d;
            }
        }
        Ok(Self::from_window(p, e, lo, vals, None))
    }

    /// The uniformizer `pi`, known modulo `pi^prec`.
    pub fn uniformizer(p: u32, e: u8, prec: i64) -> Result<Self> {
        if e == 1 {
            return Self::from_int(p as i128, p, 1, prec);
        }
        Self::from_pi_digits(p, e, &[(1, 1)], prec)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u8 {
        self.e
    }

    /// Absolute precision in powers of `pi`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn exact_value(&self) -> Option<(i128, i128)> {
        self.exact.map(|q| (*q.numer(), *q.denom()))
    }

    /// `(exponent, digit)` pairs of the nonzero digits.
    pub fn digit_pairs(&self) -> Vec<(i64, u32)> {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(k, &d)| (self.ord + k as i64, d))
            .collect()
    }

    /// Digit at exponent `j` (zero below the window).
    pub fn digit(&self, j: i64) -> Result<u32> {
        if j >= self.prec {
            return Err(Error::InsufficientPrecision(format!(
                "digit {j} requested, known below {}",
                self.prec
            )));
        }
        if j < self.ord {
            return Ok(0);
        }
        Ok(self.digits[(j - self.ord) as usize])
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.exact, Some(q) if *q.numer() == 0)
    }

    /// True when every known digit vanishes.
    pub fn is_zero_mod_prec(&self) -> bool {
        self.digits.is_empty()
    }

    /// Lower bound for the valuation, in powers of `pi`.
    pub fn val_lower_bound_pi(&self) -> i64 {
        match self.certified_val_pi() {
            Some(v) => v,
            None => self.prec,
        }
    }

    fn certified_val_pi(&self) -> Option<i64> {
        if !self.digits.is_empty() {
            return Some(self.ord);
        }
        match self.exact {
            Some(q) if *q.numer() != 0 => {
                let pi = self.p as i128;
                Some(self.e as i64 * (vp_i128(*q.numer(), pi) - vp_i128(*q.denom(), pi)))
            }
            _ => None,
        }
    }

    /// Certified valuation in powers of `pi`.
    pub fn val_pi(&self) -> Result<i64> {
        self.certified_val_pi().ok_or_else(|| {
            Error::InsufficientPrecision(format!(
                "no nonzero digit below pi^{}; valuation not certified",
                self.prec
            ))
        })
    }

    /// Certified valuation normalized by `val(p) = 1`.
    pub fn valuation(&self) -> Result<Ratio<i64>> {
        Ok(Ratio::new(self.val_pi()?, self.e as i64))
    }

    fn check_same(&self, other: &PadicScalar) -> Result<()> {
        if self.p != other.p || self.e != other.e {
            return Err(Error::MismatchedField(format!(
                "Q_{}(pi^{}) vs Q_{}(pi^{})",
                self.p, self.e, other.p, other.e
            )));
        }
        Ok(())
    }

    /// Re-expands an exact value at a new precision.
    fn with_exact(q: Q, p: u32, e: u8, prec: i64) -> Self {
        Self::digits_of_rational(q, p, e, prec)
    }

    fn combine_exact(&self, other: &PadicScalar, f: impl Fn(Q, Q) -> Option<Q>) -> Option<Q> {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => f(a, b),
            _ => None,
        }
    }

    pub fn add(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check_same(other)?;
        let prec = self.prec.min(other.prec);
        if let Some(q) = self.combine_exact(other, |a, b| a.checked_add(&b)) {
            return Ok(Self::with_exact(q, self.p, self.e, prec));
        }
        let lo = self.ord.min(other.ord).min(prec);
        let mut vals = vec![0i64; (prec - lo) as usize];
        for x in [self, other] {
            for (k, &d) in x.digits.iter().enumerate() {
                let j = x.ord + k as i64;
                if j < prec {
                    vals[(j - lo) as usize] += d as i64;
                }
            }
        }
        Ok(Self::from_window(self.p, self.e, lo, vals, None))
    }

    pub fn neg(&self) -> PadicScalar {
        if let Some(q) = self.exact {
            return Self::with_exact(-q, self.p, self.e, self.prec);
        }
        let vals: Vec<i64> = self.digits.iter().map(|&d| -(d as i64)).collect();
        let lo = self.ord;
        let mut out = Self::from_window(self.p, self.e, lo, vals, None);
        out.prec = self.prec;
        out
    }

    pub fn sub(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check_same(other)?;
        let (v1, v2) = (self.val_lower_bound_pi(), other.val_lower_bound_pi());
        let mut prec = (self.prec + v2).min(other.prec + v1);
        if let Some(q) = self.combine_exact(other, |a, b| a.checked_mul(&b)) {
            prec = prec.max(self.prec.min(other.prec));
            return Ok(Self::with_exact(q, self.p, self.e, prec));
        }
        let lo = (self.ord + other.ord).min(prec);
        let mut vals = vec![0i64; (prec - lo) as usize];
        for (a, &da) in self.digits.iter().enumerate() {
            if da == 0 {
                continue;
            }
            for (b, &db) in other.digits.iter().enumerate() {
                let j = self.ord + other.ord + (a + b) as i64;
                if j >= prec {
                    break;
                }
                vals[(j - lo) as usize] += da as i64 * db as i64;
            }
        }
        Ok(Self::from_window(self.p, self.e, lo, vals, None))
    }

    /// Multiplication by `pi^k`.
    pub fn shift(&self, k: i64) -> PadicScalar {
        let exact = match self.exact {
            Some(q) if k % self.e as i64 == 0 => {
                let pk = (self.p as i128).checked_pow((k.unsigned_abs() / self.e as u64) as u32);
                pk.and_then(|pk| {
                    if k >= 0 {
                        q.checked_mul(&Q::from_integer(pk))
                    } else {
                        q.checked_div(&Q::from_integer(pk))
                    }
                })
            }
            _ => None,
        };
        PadicScalar {
            p: self.p,
            e: self.e,
            ord: self.ord + k,
            digits: self.digits.clone(),
            prec: self.prec + k,
            exact,
        }
    }

    /// Inverse of a unit known modulo `pi^rel`.
    fn unit_inverse(unit: &[u32], p: u32, e: u8) -> Vec<u32> {
        let r = unit.len();
        let inv0 = inv_mod(unit[0] as u64, p as u64) as i64;
        let mut w = vec![0i64; r];
        // residual = 1 - unit * w, kept normalized
        let mut residual = vec![0i64; r];
        if r > 0 {
            residual[0] = 1;
        }
        for k in 0..r {
            let rk = residual[k].rem_euclid(p as i64);
            if rk == 0 {
                continue;
            }
            let wk = rk * inv0 % p as i64;
            w[k] = wk;
            for (b, &u) in unit.iter().enumerate() {
                if k + b >= r {
                    break;
                }
                residual[k + b] -= wk * u as i64;
            }
            let norm = normalize(p, e, &mut residual);
            residual = norm.into_iter().map(|d| d as i64).collect();
        }
        normalize(p, e, &mut w)
    }

    pub fn div(&self, other: &PadicScalar) -> Result<PadicScalar> {
        self.check_same(other)?;
        if other.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        let vy = other.val_pi().map_err(|_| {
            Error::InsufficientPrecision("divisor is zero to its known precision".into())
        })?;
        let vx = self.val_lower_bound_pi();
        let mut prec = (self.prec - vy).min(other.prec - 2 * vy + vx);
        if let Some(q) = self.combine_exact(other, |a, b| a.checked_div(&b)) {
            prec = prec.max(self.prec.min(other.prec) - vy);
            return Ok(Self::with_exact(q, self.p, self.e, prec));
        }
        // An exact divisor with no stored digits gets re-expanded first.
        let y = if other.digits.is_empty() {
            Self::with_exact(other.exact.unwrap(), other.p, other.e, vy + 1 + self.prec)
        } else {
            other.clone()
        };
        let w = Self::unit_inverse(&y.digits, self.p, self.e);
        let winv = PadicScalar {
            p: self.p,
            e: self.e,
            ord: 0,
            prec: w.len() as i64,
            digits: w,
            exact: None,
        };
        let winv = Self::from_window(
            self.p,
            self.e,
            0,
            winv.digits.iter().map(|&d| d as i64).collect(),
            None,
        );
        let mut out = self.mul(&winv)?.shift(-vy);
        out.prec = out.prec.min(prec);
        let keep = (out.prec - out.ord).max(0) as usize;
        out.digits.truncate(keep);
        if out.digits.is_empty() {
            out.ord = out.prec;
        }
        Ok(out)
    }

    pub fn inv(&self) -> Result<PadicScalar> {
        let one = Self::from_int(1, self.p, self.e, self.prec.max(1))?;
        one.div(self)
    }

    /// Image of a unit in the residue field `F_p`.
    pub fn residue_reduce(&self) -> Result<FieldElement> {
        let v = self.val_pi();
        match v {
            Ok(0) => {}
            Ok(v) => {
                return Err(Error::NotAUnit(format!(
                    "valuation {} is not 0",
                    Ratio::new(v, self.e as i64)
                )))
            }
            Err(_) if self.val_lower_bound_pi() > 0 => {
                return Err(Error::NotAUnit("valuation is positive".into()))
            }
            Err(err) => return Err(err),
        }
        let f = Field::new(self.p, 1)?;
        Ok(f.from_int(self.digit(0)? as i64))
    }

    /// Reduction of an integral element: zero when the valuation is positive.
    pub fn reduce_integral(&self) -> Result<FieldElement> {
        let f = Field::new(self.p, 1)?;
        if self.is_exact_zero() || self.val_lower_bound_pi() > 0 {
            if self.prec <= 0 && !self.is_exact_zero() && self.certified_val_pi().is_none() {
                return Err(Error::InsufficientPrecision("residue digit unknown".into()));
            }
            return Ok(f.zero());
        }
        self.residue_reduce()
    }

    /// The unit part `x / p^val` as base-`p` digits (`e = 1` only).
    pub fn unit_digits(&self) -> Result<ZpDigits> {
        assert_eq!(self.e, 1, "unit digits are defined for e = 1");
        let v = self.val_pi()?;
        let len = (self.prec - v).max(0) as usize;
        let digits = (0..len)
            .map(|k| self.digit(v + k as i64))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZpDigits::from_digits(self.p, digits))
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "p": self.p,
            "e": self.e,
            "prec": self.prec,
            "digits": self.digit_pairs().iter().map(|&(j, d)| json!([j, d])).collect::<Vec<_>>(),
        });
        if let Some(q) = self.exact {
            v["exact"] = json!(format!("{}/{}", q.numer(), q.denom()));
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("p-adic scalar: {m}"));
        let p = v["p"].as_u64().ok_or_else(|| bad("missing p"))? as u32;
        let e = v.get("e").and_then(Value::as_u64).unwrap_or(1) as u8;
        let prec = v["prec"].as_i64().ok_or_else(|| bad("missing prec"))?;
        if let Some(s) = v.get("exact").and_then(Value::as_str) {
            let (n, d) = parse_rational(s)?;
            return Self::from_rational(n, d, p, e, prec);
        }
        let pairs = v["digits"]
            .as_array()
            .ok_or_else(|| bad("missing digits"))?
            .iter()
            .map(|pair| {
                let j = pair[0].as_i64().ok_or_else(|| bad("bad exponent"))?;
                let d = pair[1].as_i64().ok_or_else(|| bad("bad digit"))?;
                Ok((j, d))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pi_digits(p, e, &pairs, prec)
    }
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<(i128, i128)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => Ok((
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok((s.parse().map_err(|_| bad())?, 1)),
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.digit_pairs();
        if pairs.is_empty() {
            write!(f, "0")?;
        }
        for (k, (j, d)) in pairs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{d}*pi^{j}")?;
        }
        write!(f, " + O(pi^{})", self.prec)
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// An element of `Z_p` known modulo `p^len`, as base-`p` digits (least
/// significant first).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZpDigits {
    p: u32,
    digits: Vec<u32>,
}

impl fmt::Debug for ZpDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Zp{:?}", self.digits)
    }
}

impl ZpDigits {
    pub fn from_digits(p: u32, digits: Vec<u32>) -> Self {
        assert!(digits.iter().all(|&d| d < p), "digits must lie in 0..p");
        ZpDigits { p, digits }
    }

    /// `n mod p^len` (negative `n` allowed).
    pub fn from_i64(n: i64, p: u32, len: usize) -> Self {
        let pi = p as i128;
        let mut x = n as i128;
        let mut digits = Vec::with_capacity(len);
        for _ in 0..len {
            let d = x.rem_euclid(pi);
            digits.push(d as u32);
            x = (x - d) / pi;
        }
        ZpDigits { p, digits }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_unit(&self) -> bool {
        self.digits.first().is_some_and(|&d| d != 0)
    }

    /// First digit, i.e. the image in `F_p`.
    pub fn residue(&self) -> Result<u32> {
        self.digits
            .first()
            .copied()
            .ok_or_else(|| Error::InsufficientDigits("empty digit list".into()))
    }

    /// The representative in `{0..p^n - 1}` of the value modulo `p^n`.
    pub fn mod_pn(&self, n: usize) -> Result<u64> {
        if n > self.digits.len() {
            return Err(Error::InsufficientDigits(format!(
                "need {n} digits, have {}",
                self.digits.len()
            )));
        }
        let mut acc = 0u64;
        for &d in self.digits[..n].iter().rev() {
            acc = acc * self.p as u64 + d as u64;
        }
        Ok(acc)
    }

    pub fn truncate(&self, len: usize) -> ZpDigits {
        ZpDigits {
            p: self.p,
            digits: self.digits[..len.min(self.digits.len())].to_vec(),
        }
    }

    /// The same element as a scalar known modulo `p^len`.
    pub fn to_scalar(&self) -> PadicScalar {
        PadicScalar::from_window(
            self.p,
            1,
            0,
            self.digits.iter().map(|&d| d as i64).collect(),
            None,
        )
    }

    fn from_padic(x: &PadicScalar, len: usize) -> ZpDigits {
        let digits = (0..len as i64).map(|j| x.digit(j).unwrap_or(0)).collect();
        ZpDigits { p: x.p, digits }
    }

    pub fn mul(&self, other: &ZpDigits) -> ZpDigits {
        let len = self.len().min(other.len());
        let prod = self
            .to_scalar()
            .mul(&other.to_scalar())
            .expect("same prime");
        Self::from_padic(&prod, len)
    }

    pub fn add(&self, other: &ZpDigits) -> ZpDigits {
        let len = self.len().min(other.len());
        let sum = self
            .to_scalar()
            .add(&other.to_scalar())
            .expect("same prime");
        Self::from_padic(&sum, len)
    }

    pub fn neg(&self) -> ZpDigits {
        Self::from_padic(&self.to_scalar().neg(), self.len())
    }

    pub fn inv(&self) -> Result<ZpDigits> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{:?}", self.digits)));
        }
        let w = PadicScalar::unit_inverse(&self.digits, self.p, 1);
        Ok(ZpDigits {
            p: self.p,
            digits: w,
        })
    }

    pub fn to_json(&self) -> Value {
        json!(self.digits)
    }
}

/// `C(a, b) mod p` for `0 <= a, b < p`.
fn small_binomial(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let mut num = 1;
    let mut den = 1;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}

/// `C(a, n) mod p` for `a` in `Z_p` given by base-`p` digits, through the
/// digit-wise product of small binomials.
pub fn lucas_binomial(a: &[u32], n: u64, p: u32) -> Result<FieldElement> {
    let f = Field::new(p, 1)?;
    Ok(f.from_int(lucas_binomial_raw(a, n, p)? as i64))
}

pub(crate) fn lucas_binomial_raw(a: &[u32], mut n: u64, p: u32) -> Result<u64> {
    let p64 = p as u64;
    let mut acc = 1u64;
    let mut i = 0usize;
    while n > 0 {
        let Some(&ai) = a.get(i) else {
            return Err(Error::InsufficientDigits(format!(
                "binomial coefficient needs more than {} digits",
                a.len()
            )));
        };
        acc = acc * small_binomial(ai as u64, n % p64, p64) % p64;
        if acc == 0 {
            return Ok(0);
        }
        n /= p64;
        i += 1;
    }
    Ok(acc)
}
