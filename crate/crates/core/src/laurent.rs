//! Truncated Laurent series over `F_{p^m}` and the operators `phi`, `psi`,
//! `gamma_a`, `(1+X)^z` and `res`.
//!
//! A series is known modulo `X^prec`. Coefficients are stored from the first
//! nonzero exponent `ord` up to `prec`; a series with no known nonzero
//! coefficient has `ord == prec`.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::padic::lucas_binomial_raw;
use crate::algebra::{linalg, Field, FieldElement, ZpDigits};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    ord: i64,
    prec: i64,
    coeffs: Vec<FieldElement>,
}

/// Operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

pub fn series_arith(f: &LaurentSeries, g: &LaurentSeries, op: SeriesOp) -> Result<LaurentSeries> {
    f.check_same(g)?;
    Ok(match op {
        SeriesOp::Add => f.add(g),
        SeriesOp::Sub => f.sub(g),
        SeriesOp::Mul => f.mul(g),
    })
}

fn coerce(field: Field, c: FieldElement) -> FieldElement {
    if c.field() == field {
        return c;
    }
    assert_eq!(c.p(), field.p(), "coefficient from another characteristic");
    if field.degree() == 2 {
        c.lift()
    } else {
        c.to_prime_field().expect("coefficient outside F_p")
    }
}

impl LaurentSeries {
    /// Series with `coeffs[k]` at exponent `start + k`, known modulo `X^prec`.
    /// Exponents between the last coefficient and `prec` are zero.
    pub fn from_coeffs(field: Field, start: i64, coeffs: Vec<FieldElement>, prec: i64) -> Self {
        let len = (prec - start).max(0) as usize;
        let mut full = vec![field.zero(); len];
        for (k, c) in coeffs.into_iter().enumerate().take(len) {
            full[k] = coerce(field, c);
        }
        Self::normalized(field, start.min(prec), full, prec)
    }

    fn normalized(field: Field, start: i64, coeffs: Vec<FieldElement>, prec: i64) -> Self {
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        let coeffs = coeffs[skip..].to_vec();
        let ord = if coeffs.is_empty() {
            prec
        } else {
            start + skip as i64
        };
        LaurentSeries {
            field,
            ord,
            prec,
            coeffs,
        }
    }

    pub fn from_terms(field: Field, terms: &[(i64, FieldElement)], prec: i64) -> Self {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(prec).min(prec);
        let mut coeffs = vec![field.zero(); (prec - lo).max(0) as usize];
        for &(j, c) in terms {
            if j < prec {
                coeffs[(j - lo) as usize] = coeffs[(j - lo) as usize] + coerce(field, c);
            }
        }
        Self::normalized(field, lo, coeffs, prec)
    }

    pub fn zero(field: Field, prec: i64) -> Self {
        LaurentSeries {
            field,
            ord: prec,
            prec,
            coeffs: vec![],
        }
    }

    pub fn monomial(c: FieldElement, k: i64, field: Field, prec: i64) -> Self {
        Self::from_terms(field, &[(k, c)], prec)
    }

    pub fn x_pow(field: Field, k: i64, prec: i64) -> Self {
        Self::monomial(field.one(), k, field, prec)
    }

    pub fn one(field: Field, prec: i64) -> Self {
        Self::x_pow(field, 0, prec)
    }

    /// Uniformly random coefficients on `[start, prec)`.
    pub fn random<R: Rng + ?Sized>(field: Field, start: i64, prec: i64, rng: &mut R) -> Self {
        let coeffs = (start..prec).map(|_| field.random(rng)).collect();
        Self::normalized(field, start, coeffs, prec)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// First exponent with a (possibly) nonzero coefficient; `prec` when none is known.
    pub fn ord(&self) -> i64 {
        self.ord
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the leading nonzero coefficient, if one is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.ord)
    }

    /// True when all known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, j: i64) -> Result<FieldElement> {
        if j >= self.prec {
            return Err(Error::WindowMiss {
                exponent: j,
                ord: self.ord,
                prec: self.prec,
            });
        }
        Ok(self.coeff_unchecked(j))
    }

    fn coeff_unchecked(&self, j: i64) -> FieldElement {
        if j < self.ord || j >= self.prec {
            return self.field.zero();
        }
        self.coeffs[(j - self.ord) as usize]
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> Vec<(i64, FieldElement)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, &c)| (self.ord + k as i64, c))
            .collect()
    }

    fn check_same(&self, other: &LaurentSeries) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MismatchedField(format!(
                "{:?} vs {:?}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    /// Reduces the known precision to `min(prec, self.prec)`.
    pub fn truncate(&self, prec: i64) -> LaurentSeries {
        let prec = prec.min(self.prec);
        let lo = self.ord.min(prec);
        let coeffs = (lo..prec).map(|j| self.coeff_unchecked(j)).collect();
        Self::normalized(self.field, lo, coeffs, prec)
    }

    /// Agreement of coefficients below the smaller of the two precisions.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        let top = self.prec.min(other.prec);
        let lo = self.ord.min(other.ord);
        (lo..top).all(|j| self.coeff_unchecked(j) == other.coeff_unchecked(j))
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let prec = self.prec.min(other.prec);
        let lo = self.ord.min(other.ord).min(prec);
        let coeffs = (lo..prec)
            .map(|j| self.coeff_unchecked(j) + other.coeff_unchecked(j))
            .collect();
        Self::normalized(self.field, lo, coeffs, prec)
    }

    pub fn neg(&self) -> LaurentSeries {
        self.scalar_mul(-self.field.one())
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: FieldElement) -> LaurentSeries {
        let c = coerce(self.field, c);
        let coeffs = self.coeffs.iter().map(|&x| x * c).collect();
        Self::normalized(self.field, self.ord, coeffs, self.prec)
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let prec = (self.ord + other.prec).min(other.ord + self.prec);
        let lo = (self.ord + other.ord).min(prec);
        let n = (prec - lo) as usize;
        let zero = self.field.zero();
        let mut coeffs = vec![zero; n];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                let k = a + b;
                if k >= n {
                    break;
                }
                coeffs[k] = coeffs[k] + ca * cb;
            }
        }
        Self::normalized(self.field, lo, coeffs, prec)
    }

    /// Multiplication by `X^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        LaurentSeries {
            field: self.field,
            ord: self.ord + k,
            prec: self.prec + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplicative inverse; the leading coefficient must be known.
    pub fn inverse(&self) -> Result<LaurentSeries> {
        let v = self.valuation().ok_or_else(|| {
            Error::InsufficientPrecision("series vanishes to its known precision".into())
        })?;
        let rel = (self.prec - v) as usize;
        let u = &self.coeffs;
        let inv0 = u[0].inv()?;
        let mut w = vec![self.field.zero(); rel];
        for n in 0..rel {
            let mut acc = if n == 0 {
                self.field.one()
            } else {
                self.field.zero()
            };
            for k in 1..=n.min(u.len() - 1) {
                acc = acc - u[k] * w[n - k];
            }
            w[n] = acc * inv0;
        }
        Ok(Self::normalized(self.field, -v, w, rel as i64 - v))
    }

    pub fn pow(&self, n: u64) -> LaurentSeries {
        if n == 0 {
            return LaurentSeries::one(self.field, self.prec - self.ord);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f(X^p)`: the Frobenius in characteristic `p`.
    pub fn phi(&self) -> LaurentSeries {
        let p = self.p() as i64;
        let prec = if self.prec == self.ord {
            p * self.prec
        } else {
            p * (self.prec - 1) + 1
        };
        let terms: Vec<_> = self.terms().into_iter().map(|(j, c)| (p * j, c)).collect();
        LaurentSeries::from_terms(self.field, &terms, prec)
    }

    /// The components `y_0..y_{p-1}` of `f = sum (1+X)^i phi(y_i)`.
    pub fn psi_decompose(&self) -> Result<Vec<LaurentSeries>> {
        let p = self.p() as i64;
        let s = if self.ord < 0 {
            (-self.ord + p - 1) / p
        } else {
            0
        };
        let g = self.shift(p * s);
        let out_prec = (g.prec - (p - 1)).div_euclid(p);
        if out_prec <= 0 {
            return Err(Error::EmptyWindow {
                ord: -s,
                prec: out_prec - s,
            });
        }
        let pu = p as usize;
        let binom: Vec<Vec<FieldElement>> = (0..pu)
            .map(|i| {
                (0..pu)
                    .map(|r| {
                        self.field.from_int(
                            lucas_binomial_raw(&[i as u32], r as u64, p as u32).unwrap() as i64,
                        )
                    })
                    .collect()
            })
            .collect();
        let zero = self.field.zero();
        let mut ys = vec![vec![zero; out_prec as usize]; pu];
        let mut block = vec![zero; pu];
        for m in 0..out_prec {
            for r in (0..pu).rev() {
                let mut acc = g.coeff_unchecked(p * m + r as i64);
                for i in r + 1..pu {
                    acc = acc - binom[i][r] * block[i];
                }
                block[r] = acc;
                ys[r][m as usize] = acc;
            }
        }
        Ok(ys
            .into_iter()
            .map(|c| Self::normalized(self.field, 0, c, out_prec).shift(-s))
            .collect())
    }

    /// The left inverse of `phi` extracting the `i = 0` component.
    pub fn psi(&self) -> Result<LaurentSeries> {
        Ok(self.psi_decompose()?.swap_remove(0))
    }

    /// Iterated `psi`.
    pub fn psi_n(&self, n: u32) -> Result<LaurentSeries> {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.psi()?;
        }
        Ok(f)
    }

    /// Some `h` with `ord(h) >= min_val` and `psi(h) = self` modulo `X^prec`,
    /// found by solving the linear system of `psi` on monomials.
    pub fn psi_preimage(&self, min_val: i64) -> Result<Option<LaurentSeries>> {
        let p = self.p() as i64;
        let t = self.prec;
        let h_prec = p * t + p;
        let row_lo = min_val.div_euclid(p).min(self.ord).min(t);
        let exps: Vec<i64> = (min_val..h_prec).collect();
        let n_rows = (t - row_lo) as usize;
        let zero = self.field.zero();
        let mut rows = vec![vec![zero; exps.len()]; n_rows];
        for (col, &e) in exps.iter().enumerate() {
            let img = LaurentSeries::x_pow(self.field, e, h_prec).psi()?;
            for (row, j) in (row_lo..t).enumerate() {
                rows[row][col] = img.coeff_unchecked(j);
            }
        }
        let rhs = (row_lo..t).map(|j| self.coeff_unchecked(j)).collect();
        Ok(linalg::solve(rows, rhs).map(|x| Self::normalized(self.field, min_val, x, h_prec)))
    }

    /// Coefficient of `X^-1`.
    pub fn residue(&self) -> Result<FieldElement> {
        self.coeff(-1)
    }

    /// `X -> (1+X)^a - 1`, for `a` a unit of `Z_p`.
    pub fn gamma_act(&self, a: &ZpDigits) -> Result<LaurentSeries> {
        if !a.is_unit() {
            return Err(Error::NotAUnit(format!("{a:?}")));
        }
        if self.ord >= 0 {
            return self.gamma_power_series(a);
        }
        let o = self.ord;
        let g = self.shift(-o);
        let rel = g.prec;
        let u = one_plus_x_pow(self.field, a, 0, rel + 1)?
            .sub(&LaurentSeries::one(self.field, rel + 1))
            .shift(-1);
        let uinv = u.inverse()?;
        let factor = uinv.pow((-o) as u64);
        Ok(factor.mul(&g.gamma_power_series(a)?).shift(o))
    }

    /// Substitution on a power series through the binomial transform of
    /// `Z/p^L`: `gamma_a` permutes the underlying measure by `b -> ab`.
    fn gamma_power_series(&self, a: &ZpDigits) -> Result<LaurentSeries> {
        let n = self.prec.max(0) as usize;
        if n <= 1 {
            return Ok(self.clone());
        }
        let p = self.p() as usize;
        let mut level = 0u32;
        let mut size = 1usize;
        while size < n {
            size *= p;
            level += 1;
        }
        let am = a.mod_pn(level as usize)? as usize;
        let mut vals: Vec<FieldElement> =
            (0..size as i64).map(|j| self.coeff_unchecked(j)).collect();
        binomial_transform(&mut vals, self.p(), level, true);
        let mut moved = vec![self.field.zero(); size];
        for (b, v) in vals.into_iter().enumerate() {
            moved[(am * b) % size] = v;
        }
        binomial_transform(&mut moved, self.p(), level, false);
        moved.truncate(n);
        Ok(Self::normalized(self.field, 0, moved, self.prec))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ord": self.ord,
            "prec": self.prec,
            "terms": self.terms().iter().map(|(j, c)| json!([j, c.to_string()])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(field: Field, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("series: {m}"));
        let prec = v["prec"].as_i64().ok_or_else(|| bad("missing prec"))?;
        let terms = v["terms"]
            .as_array()
            .ok_or_else(|| bad("missing terms"))?
            .iter()
            .map(|t| {
                let j = t[0].as_i64().ok_or_else(|| bad("bad exponent"))?;
                let c = field.parse(t[1].as_str().ok_or_else(|| bad("bad coefficient"))?)?;
                Ok((j, c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(field, &terms, prec))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (j, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*X^{j}")?;
        }
        write!(f, " + O(X^{})", self.prec)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(1+X)^(p^shift * z)` modulo `X^prec`, as the product of the factors
/// `(1+X^(p^k))^(w_k)` over the base-`p` digits `w_k`.
pub fn one_plus_x_pow(field: Field, z: &ZpDigits, shift: u32, prec: i64) -> Result<LaurentSeries> {
    if prec <= 0 {
        return Ok(LaurentSeries::zero(field, prec));
    }
    let p = field.p() as usize;
    let n = prec as usize;
    let mut res = vec![field.zero(); n];
    res[0] = field.one();
    let mut pk = 1usize;
    let mut k = 0usize;
    while pk < n {
        let w = if k < shift as usize {
            0
        } else {
            *z.digits().get(k - shift as usize).ok_or_else(|| {
                Error::InsufficientDigits(format!(
                    "(1+X)^z modulo X^{prec} needs {} digits of z, have {}",
                    k + 1 - shift as usize,
                    z.len()
                ))
            })?
        };
        if w > 0 {
            let c: Vec<FieldElement> = (0..=w)
                .map(|s| {
                    field.from_int(lucas_binomial_raw(&[w], s as u64, p as u32).unwrap() as i64)
                })
                .collect();
            for idx in (0..n).rev() {
                let mut acc = field.zero();
                for (s, &cs) in c.iter().enumerate() {
                    let off = s * pk;
                    if off > idx {
                        break;
                    }
                    acc = acc + cs * res[idx - off];
                }
                res[idx] = acc;
            }
        }
        pk = pk.saturating_mul(p);
        k += 1;
    }
    Ok(LaurentSeries::normalized(field, 0, res, prec))
}

/// In place passage between values on `Z/p^level` and coefficients of
/// `sum_b v(b) (1+X)^b` modulo `X^(p^level)`. The matrix `C(b, n)` factors
/// digit by digit into `p x p` Pascal blocks.
pub fn binomial_transform(vals: &mut [FieldElement], p: u32, level: u32, inverse: bool) {
    let pu = p as usize;
    assert_eq!(vals.len(), pu.pow(level), "length must be p^level");
    if vals.is_empty() {
        return;
    }
    let field = vals[0].field();
    // forward block[n][b] = C(b, n); inverse block[b][n] = (-1)^(n-b) C(n, b)
    let mut block = vec![vec![0u64; pu]; pu];
    for n in 0..pu {
        for b in 0..pu {
            if inverse {
                let c = lucas_binomial_raw(&[n as u32], b as u64, p).unwrap() as u64;
                let c = if (n + b) % 2 == 0 || c == 0 {
                    c
                } else {
                    p as u64 - c
                };
                block[b][n] = c;
            } else {
                block[n][b] = lucas_binomial_raw(&[b as u32], n as u64, p).unwrap() as u64;
            }
        }
    }
    // the entries lie in F_p, so each coordinate transforms separately
    let mut coords: [Vec<u64>; 2] = [
        vals.iter().map(|v| v.coords()[0] as u64).collect(),
        vals.iter().map(|v| v.coords()[1] as u64).collect(),
    ];
    let pm = p as u64;
    let mut tmp = vec![0u64; pu];
    for xs in coords.iter_mut() {
        if xs.iter().all(|&x| x == 0) {
            continue;
        }
        let mut stride = 1usize;
        for _ in 0..level {
            let span = pu * stride;
            for outer in (0..xs.len()).step_by(span) {
                for base in outer..outer + stride {
                    for (row, t) in tmp.iter_mut().enumerate() {
                        let mut acc = 0u64;
                        for (col, &m) in block[row].iter().enumerate() {
                            acc += m * xs[base + col * stride];
                        }
                        *t = acc % pm;
                    }
                    for (row, &t) in tmp.iter().enumerate() {
                        xs[base + row * stride] = t;
                    }
                }
            }
            stride = span;
        }
    }
    for (i, v) in vals.iter_mut().enumerate() {
        *v = field.elem(coords[0][i] as i64, coords[1][i] as i64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kl(p: u32) -> Field {
        Field::kl(p).unwrap()
    }

    fn e(f: Field, n: i64) -> FieldElement {
        f.from_int(n)
    }

    #[test]
    fn arithmetic_windows() {
        let f = kl(5);
        let a = LaurentSeries::from_terms(f, &[(0, e(f, 1)), (1, e(f, 1))], 10);
        let b = LaurentSeries::from_terms(f, &[(0, e(f, 1)), (1, e(f, -1))], 10);
        let prod = a.mul(&b);
        assert_eq!(prod.terms(), vec![(0, e(f, 1)), (2, e(f, -1))]);
        let xm = LaurentSeries::x_pow(f, -1, 10);
        let x = LaurentSeries::x_pow(f, 1, 10);
        assert_eq!(xm.mul(&x).terms(), vec![(0, e(f, 1))]);
        let g = LaurentSeries::from_terms(f, &[(0, e(f, 2))], 4);
        assert_eq!(a.mul(&g).prec(), 4);
    }

    #[test]
    fn phi_examples() {
        let f = kl(3);
        assert_eq!(
            LaurentSeries::x_pow(f, 1, 5).phi().terms(),
            vec![(3, e(f, 1))]
        );
        assert_eq!(
            LaurentSeries::x_pow(f, -1, 5).phi().terms(),
            vec![(-3, e(f, 1))]
        );
        assert_eq!(LaurentSeries::one(f, 5).phi().prec(), 13);
    }

    /// `psi(f)_m = sum_r (-1)^r f_{pm+r}` for power series.
    fn psi_closed_form(f: &LaurentSeries) -> Vec<FieldElement> {
        let p = f.p() as i64;
        let out = (f.prec() - (p - 1)).div_euclid(p);
        (0..out)
            .map(|m| {
                (0..p).fold(f.field().zero(), |acc, r| {
                    let sign = if r % 2 == 0 { 1 } else { -1 };
                    acc + f.coeff(p * m + r).unwrap() * e(f.field(), sign)
                })
            })
            .collect()
    }

    #[test]
    fn psi_examples() {
        for p in [2u32, 3, 5, 7] {
            let f = kl(p);
            let n = 60;
            assert!(LaurentSeries::one(f, n)
                .psi()
                .unwrap()
                .agrees_with(&LaurentSeries::one(f, n)));
            let xp = LaurentSeries::x_pow(f, p as i64 - 1, n).psi().unwrap();
            assert_eq!(xp.terms(), vec![(0, f.one())]);
            let xinv = LaurentSeries::x_pow(f, -1, n).psi().unwrap();
            assert_eq!(xinv.terms(), vec![(-1, f.one())]);
            assert_eq!(xinv.prec(), (n - (p as i64 - 1)).div_euclid(p as i64));
        }
    }

    #[test]
    fn psi_matches_closed_form_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u32, 3, 5, 7] {
            let f = kl(p);
            for _ in 0..10 {
                let s = LaurentSeries::random(f, 0, 60, &mut rng);
                let want = psi_closed_form(&s);
                let got = s.psi().unwrap();
                for (m, w) in want.iter().enumerate() {
                    assert_eq!(got.coeff(m as i64).unwrap(), *w);
                }
                let ys = s.psi_decompose().unwrap();
                let mut sum = LaurentSeries::zero(f, s.prec());
                for (i, y) in ys.iter().enumerate() {
                    let c = one_plus_x_pow(f, &ZpDigits::from_i64(i as i64, p, 8), 0, 80).unwrap();
                    sum = sum.add(&c.mul(&y.phi()));
                }
                assert!(sum.agrees_with(&s));
            }
        }
    }

    #[test]
    fn psi_empty_window() {
        let f = kl(5);
        let s = LaurentSeries::from_terms(f, &[(-1, f.one())], 3);
        assert!(matches!(s.psi(), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn one_plus_x_examples() {
        let f = kl(3);
        let zero = ZpDigits::from_i64(0, 3, 5);
        assert_eq!(
            one_plus_x_pow(f, &zero, 0, 20).unwrap().terms(),
            vec![(0, f.one())]
        );
        let one = ZpDigits::from_i64(1, 3, 5);
        assert_eq!(
            one_plus_x_pow(f, &one, 0, 20).unwrap().terms(),
            vec![(0, f.one()), (1, f.one())]
        );
        let m1 = ZpDigits::from_i64(-1, 3, 5);
        assert_eq!(
            one_plus_x_pow(f, &m1, 0, 20).unwrap().coeff(2).unwrap(),
            f.one()
        );
        assert!(matches!(
            one_plus_x_pow(f, &ZpDigits::from_i64(-1, 3, 2), 0, 20),
            Err(Error::InsufficientDigits(_))
        ));
    }

    #[test]
    fn one_plus_x_matches_naive_product() {
        for p in [2u32, 3, 5] {
            let f = kl(p);
            for z in [0i64, 1, 2, 7, 13, 24, -1, -5] {
                for shift in 0..2u32 {
                    let d = ZpDigits::from_i64(z, p, 8);
                    let got = one_plus_x_pow(f, &d, shift, 30).unwrap();
                    let base = LaurentSeries::from_terms(f, &[(0, f.one()), (1, f.one())], 30);
                    let zz = (z.rem_euclid((p as i64).pow(8))) * (p as i64).pow(shift);
                    // (1+X)^(zz) modulo X^30 through square-and-multiply
                    let mut acc = LaurentSeries::one(f, 30);
                    let mut b = base.clone();
                    let mut n = zz as u64;
                    while n > 0 {
                        if n & 1 == 1 {
                            acc = acc.mul(&b);
                        }
                        b = b.mul(&b);
                        n >>= 1;
                    }
                    assert!(got.agrees_with(&acc), "p={p} z={z} shift={shift}");
                }
            }
        }
    }

    /// Horner substitution `X -> (1+X)^a - 1`.
    fn gamma_oracle(f: &LaurentSeries, a: &ZpDigits) -> LaurentSeries {
        let field = f.field();
        let n = f.prec();
        let u = one_plus_x_pow(field, a, 0, n + 1)
            .unwrap()
            .sub(&LaurentSeries::one(field, n + 1));
        let mut acc = LaurentSeries::zero(field, n);
        for j in (0..n).rev() {
            acc = acc
                .mul(&u)
                .add(&LaurentSeries::monomial(f.coeff(j).unwrap(), 0, field, n));
        }
        acc.truncate(n)
    }

    #[test]
    fn gamma_examples() {
        let f = kl(3);
        let x = LaurentSeries::x_pow(f, 1, 10);
        let two = ZpDigits::from_i64(2, 3, 5);
        assert_eq!(
            x.gamma_act(&two).unwrap().terms(),
            vec![(1, e(f, 2)), (2, e(f, 1))]
        );
        let one = ZpDigits::from_i64(1, 3, 5);
        assert!(x.gamma_act(&one).unwrap().agrees_with(&x));
        let xinv = LaurentSeries::x_pow(f, -1, 10).gamma_act(&two).unwrap();
        assert_eq!(xinv.coeff(-1).unwrap(), e(f, 2).inv().unwrap());
        assert_eq!(xinv.residue().unwrap(), e(f, 2));
    }

    #[test]
    fn gamma_matches_horner() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2u32, 3, 5, 7] {
            let f = kl(p);
            for _ in 0..6 {
                let s = LaurentSeries::random(f, 0, 30, &mut rng);
                let mut a = rng.gen_range(1..1000i64);
                if a % p as i64 == 0 {
                    a += 1;
                }
                let d = ZpDigits::from_i64(a, p, 6);
                assert!(s.gamma_act(&d).unwrap().agrees_with(&gamma_oracle(&s, &d)));
            }
        }
    }

    #[test]
    fn residue_examples() {
        let f = kl(5);
        assert_eq!(LaurentSeries::x_pow(f, -1, 4).residue().unwrap(), f.one());
        let s = LaurentSeries::from_terms(f, &[(0, e(f, 1)), (1, e(f, 3))], 4);
        assert_eq!(s.residue().unwrap(), f.zero());
        assert!(matches!(
            LaurentSeries::zero(f, -2).residue(),
            Err(Error::WindowMiss { .. })
        ));
    }

    #[test]
    fn psi_preimages_exist() {
        let f = kl(3);
        for j in 1..=4 {
            for t in 0..4 {
                let target = LaurentSeries::x_pow(f, j - 1 + t, 12);
                let h = target.psi_preimage(j).unwrap().expect("preimage");
                assert!(h.ord() >= j);
                assert!(h.psi().unwrap().agrees_with(&target));
            }
        }
        let target = LaurentSeries::x_pow(f, -1, 10);
        let h = target.psi_preimage(-1).unwrap().unwrap();
        assert!(h.psi().unwrap().agrees_with(&target));
    }

    #[test]
    fn transform_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = kl(3);
        let orig: Vec<_> = (0..27).map(|_| f.random(&mut rng)).collect();
        let mut v = orig.clone();
        binomial_transform(&mut v, 3, 3, false);
        binomial_transform(&mut v, 3, 3, true);
        assert_eq!(v, orig);
    }
}
