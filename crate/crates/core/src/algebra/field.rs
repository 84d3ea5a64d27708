//! The coefficient fields `F_p` and `F_{p^2}`.
//!
//! `F_{p^2}` is presented as `F_p[t]/(f(t))` with a fixed defining polynomial:
//! `t^2 - n` for odd `p`, where `n` is the least quadratic non-residue, and
//! `t^2 + t + 1` for `p = 2`. Elements are stored by their coordinates in the
//! basis `{1, t}` and serialize as `"c0+c1*t"` (or `"c0"` over `F_p`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Descriptor of `F_{p^m}` with `m` in `{1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    p: u32,
    m: u8,
    /// `n` with `t^2 = n` for odd `p`; unused for `p = 2`.
    nonres: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Least quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u32) -> u32 {
    let p64 = p as u64;
    (2..p)
        .find(|&n| pow_mod(n as u64, (p64 - 1) / 2, p64) == p64 - 1)
        .expect("odd primes have non-residues")
}

impl Field {
    pub fn new(p: u32, m: u8) -> Result<Self> {
        if !is_prime(p as u64) || p >= 1 << 31 {
            return Err(Error::NotPrime(p as u64));
        }
        if m != 1 && m != 2 {
            return Err(Error::UnsupportedDegree(m));
        }
        let nonres = if p == 2 { 0 } else { least_nonresidue(p) };
        Ok(Field { p, m, nonres })
    }

    /// `F_{p^2}`, the coefficient field used throughout the library.
    pub fn kl(p: u32) -> Result<Self> {
        Field::new(p, 2)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.m
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.m as u32)
    }

    /// The constant `n` in `t^2 = n` (odd `p` only).
    pub fn nonresidue(&self) -> u32 {
        self.nonres
    }

    pub fn elem(&self, c0: i64, c1: i64) -> FieldElement {
        let p = self.p as i64;
        let c1 = if self.m == 1 {
            0
        } else {
            c1.rem_euclid(p) as u32
        };
        FieldElement {
            field: *self,
            c: [c0.rem_euclid(p) as u32, c1],
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.elem(n, 0)
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0, 0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1, 0)
    }

    /// The generator `t` of `F_{p^2}` over `F_p`.
    pub fn gen(&self) -> FieldElement {
        assert_eq!(self.m, 2, "t only exists in F_(p^2)");
        self.elem(0, 1)
    }

    /// All elements, in coordinate order.
    pub fn elements(&self) -> Vec<FieldElement> {
        let p = self.p as i64;
        let mut out = Vec::with_capacity(self.order() as usize);
        let top = if self.m == 2 { p } else { 1 };
        for c1 in 0..top {
            for c0 in 0..p {
                out.push(self.elem(c0, c1));
            }
        }
        out
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let c1 = if self.m == 2 {
            rng.gen_range(0..self.p)
        } else {
            0
        };
        self.elem(rng.gen_range(0..self.p) as i64, c1 as i64)
    }

    pub fn random_unit<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    pub fn units(&self) -> Vec<FieldElement> {
        self.elements()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Parses `"c0+c1*t"`, `"c0"`, `"c1*t"`, `"t"`, `"-2"` and similar forms.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        let (mut c0, mut c1) = (0i64, 0i64);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, is_t) = if body == "t" {
                (1, true)
            } else if let Some(c) = body.strip_suffix("*t") {
                (parse_int(c)?, true)
            } else {
                (parse_int(body)?, false)
            };
            let coef = if neg { -coef } else { coef };
            if is_t {
                if self.m == 1 {
                    return Err(Error::Parse(format!(
                        "'{s}' uses t but the field is F_{}",
                        self.p
                    )));
                }
                c1 += coef;
            } else {
                c0 += coef;
            }
        }
        Ok(self.elem(c0, c1))
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.parse::<i64>()
        .map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

/// An element of `F_{p^m}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    field: Field,
    c: [u32; 2],
}

/// Operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
    Frobenius,
}

/// Checked entry point for field arithmetic. Unary operations ignore `y`.
pub fn field_arith(x: FieldElement, y: FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => x.try_add(y),
        FieldOp::Mul => x.try_mul(y),
        FieldOp::Inv => x.inv(),
        FieldOp::Pow(n) => Ok(x.pow(n)),
        FieldOp::Frobenius => Ok(x.frobenius()),
    }
}

impl FieldElement {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    pub fn coords(&self) -> [u32; 2] {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }

    pub fn is_one(&self) -> bool {
        self.c == [1, 0]
    }

    /// True when the element lies in the prime field.
    pub fn in_prime_field(&self) -> bool {
        self.c[1] == 0
    }

    /// Embeds an element of `F_p` into `F_{p^2}` (identity on `F_{p^2}`).
    pub fn lift(self) -> FieldElement {
        if self.field.m == 2 {
            return self;
        }
        let kl = Field::kl(self.field.p).expect("valid prime");
        kl.elem(self.c[0] as i64, 0)
    }

    /// Projects to `F_p` when the `t`-coordinate vanishes.
    pub fn to_prime_field(self) -> Option<FieldElement> {
        if self.c[1] != 0 {
            return None;
        }
        Field::new(self.field.p, 1)
            .ok()
            .map(|f| f.elem(self.c[0] as i64, 0))
    }

    fn check_same(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MismatchedField(format!(
                "F_{}^{} vs F_{}^{}",
                self.field.p, self.field.m, other.field.p, other.field.m
            )));
        }
        Ok(())
    }

    pub fn try_add(self, other: FieldElement) -> Result<FieldElement> {
        self.check_same(&other)?;
        let p = self.field.p as u64;
        Ok(FieldElement {
            field: self.field,
            c: [
                ((self.c[0] as u64 + other.c[0] as u64) % p) as u32,
                ((self.c[1] as u64 + other.c[1] as u64) % p) as u32,
            ],
        })
    }

    pub fn try_mul(self, other: FieldElement) -> Result<FieldElement> {
        self.check_same(&other)?;
        let p = self.field.p as u64;
        let (a, b) = (self.c[0] as u64, self.c[1] as u64);
        let (c, d) = (other.c[0] as u64, other.c[1] as u64);
        let bd = b * d % p;
        let (r0, r1) = if self.field.p == 2 {
            // t^2 = t + 1
            ((a * c + bd) % p, (a * d + b * c + bd) % p)
        } else {
            (
                (a * c + bd * self.field.nonres as u64) % p,
                (a * d + b * c) % p,
            )
        };
        Ok(FieldElement {
            field: self.field,
            c: [r0 as u32, r1 as u32],
        })
    }

    pub fn pow(self, mut n: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(self, n: i64) -> Result<FieldElement> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs()))
        }
    }

    pub fn inv(self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// `x -> x^p`.
    pub fn frobenius(self) -> FieldElement {
        self.pow(self.field.p as u64)
    }

    /// Multiplicative order of a unit.
    pub fn order(self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q1 = self.field.order() - 1;
        let mut best = q1;
        let mut d = 1;
        while d * d <= q1 {
            if q1.is_multiple_of(d) {
                for cand in [d, q1 / d] {
                    if cand < best && self.pow(cand).is_one() {
                        best = cand;
                    }
                }
            }
            d += 1;
        }
        Ok(best)
    }

    /// Some square root, if one exists in this field.
    pub fn sqrt(self) -> Option<FieldElement> {
        self.field.elements().into_iter().find(|r| *r * *r == self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{}+{}*t", self.c[0], self.c[1])
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p;
        FieldElement {
            field: self.field,
            c: [(p - self.c[0]) % p, (p - self.c[1]) % p],
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        self * rhs.inv().expect("division by zero")
    }
}

/// Roots of `x^2 - c x + 1` in `F_{p^2}`, with multiplicity.
///
/// `c` may live in `F_p` or `F_{p^2}`; roots are returned in `F_{p^2}`, sorted.
pub fn solve_unit_quadratic(c: FieldElement) -> Result<[FieldElement; 2]> {
    let c = c.lift();
    let kl = c.field();
    let p = kl.p();
    let mut roots = if p == 2 {
        let found: Vec<FieldElement> = kl
            .elements()
            .into_iter()
            .filter(|x| *x * *x - c * *x + kl.one() == kl.zero())
            .collect();
        match found.len() {
            1 => [found[0], found[0]],
            2 => [found[0], found[1]],
            _ => {
                return Err(Error::OutOfRange(format!(
                    "x^2 - ({c})x + 1 does not split over F_4"
                )))
            }
        }
    } else {
        let disc = c * c - kl.from_int(4);
        let s = disc.sqrt().ok_or_else(|| {
            Error::OutOfRange(format!("x^2 - ({c})x + 1 does not split over F_{}^2", p))
        })?;
        let half = kl.from_int(2).inv()?;
        [(c + s) * half, (c - s) * half]
    };
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_product() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.from_int(2) * f.from_int(3), f.one());
    }

    #[test]
    fn defining_relation() {
        let f = Field::kl(5).unwrap();
        assert_eq!(f.nonresidue(), 2);
        assert_eq!(f.gen() * f.gen(), f.from_int(2));
        // t^5 = t (t^2)^2 = 4t
        assert_eq!(f.gen().frobenius(), f.elem(0, 4));
        let f2 = Field::kl(2).unwrap();
        let t = f2.gen();
        assert_eq!(t * t + t + f2.one(), f2.zero());
    }

    #[test]
    fn nonresidues() {
        assert_eq!(least_nonresidue(3), 2);
        assert_eq!(least_nonresidue(7), 3);
        assert_eq!(least_nonresidue(17), 3);
    }

    #[test]
    fn errors() {
        let f = Field::kl(5).unwrap();
        let g = Field::kl(7).unwrap();
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        assert!(matches!(
            field_arith(f.one(), g.one(), FieldOp::Add),
            Err(Error::MismatchedField(_))
        ));
        assert!(Field::new(9, 1).is_err());
        assert!(Field::new(5, 3).is_err());
    }

    #[test]
    fn axioms_exhaustive_small_primes() {
        for p in [2, 3, 5, 7] {
            for m in [1u8, 2] {
                let f = Field::new(p, m).unwrap();
                let els = f.elements();
                assert_eq!(els.len() as u64, f.order());
                for &x in &els {
                    assert_eq!(x + f.zero(), x);
                    assert_eq!(x * f.one(), x);
                    assert_eq!(x + (-x), f.zero());
                    if !x.is_zero() {
                        assert_eq!(x * x.inv().unwrap(), f.one());
                    }
                    if m == 2 {
                        assert_eq!(x.frobenius().frobenius(), x);
                    } else {
                        assert_eq!(x.frobenius(), x);
                    }
                    for &y in &els {
                        assert_eq!(x * y, y * x);
                        assert_eq!(x + y, y + x);
                        assert_eq!((x + y).frobenius(), x.frobenius() + y.frobenius());
                    }
                }
                // associativity / distributivity on a slice
                for &x in els.iter().take(7) {
                    for &y in els.iter().rev().take(7) {
                        for &z in &els {
                            assert_eq!((x * y) * z, x * (y * z));
                            assert_eq!(x * (y + z), x * y + x * z);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let f = Field::kl(5).unwrap();
        for x in f.elements() {
            assert_eq!(f.parse(&x.to_string()).unwrap(), x);
        }
        assert_eq!(f.parse("t").unwrap(), f.gen());
        assert_eq!(f.parse("-1").unwrap(), f.from_int(4));
        assert_eq!(f.parse("3 + 2*t").unwrap(), f.elem(3, 2));
        assert_eq!(f.parse("2*t-1").unwrap(), f.elem(4, 2));
        assert!(Field::new(5, 1).unwrap().parse("t").is_err());
        assert!(f.parse("x").is_err());
    }

    fn brute_roots(c: FieldElement) -> Vec<FieldElement> {
        let kl = c.lift().field();
        kl.elements()
            .into_iter()
            .filter(|x| *x * *x - c.lift() * *x + kl.one() == kl.zero())
            .collect()
    }

    #[test]
    fn unit_quadratic_examples() {
        let fp = Field::new(5, 1).unwrap();
        let kl = Field::kl(5).unwrap();
        assert_eq!(
            solve_unit_quadratic(fp.from_int(0)).unwrap(),
            [kl.from_int(2), kl.from_int(3)]
        );
        assert_eq!(
            solve_unit_quadratic(fp.from_int(2)).unwrap(),
            [kl.one(), kl.one()]
        );
        let r = solve_unit_quadratic(fp.from_int(1)).unwrap();
        assert!(!r[0].in_prime_field() && !r[1].in_prime_field());
        let mut brute = brute_roots(fp.from_int(1));
        brute.sort();
        assert_eq!(brute, r.to_vec());
    }

    #[test]
    fn unit_quadratic_vieta() {
        for p in [2, 3, 5, 7, 11] {
            let fp = Field::new(p, 1).unwrap();
            for c in fp.elements() {
                let [a, b] = solve_unit_quadratic(c).unwrap();
                assert_eq!(a * b, a.field().one());
                assert_eq!(a + b, c.lift());
                let brute = brute_roots(c);
                assert!(brute.contains(&a) && brute.contains(&b));
            }
        }
    }
}
