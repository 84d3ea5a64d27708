//! Measures on `Z_p` and on `Q_p` at finite level, the Amice transform
//! `nu -> nu(z -> (1+X)^z)`, and compactly supported step functions on
//! `Q_p` with the action of the Borel subgroup by `(a b; 0 d)`:
//! `f -> chi1(d) chi2(a) f((dx - b)/a)`.
//!
//! In characteristic `p`, `(1+X)^(p^n) = 1 + X^(p^n)`, so a measure of
//! level `n` is the same thing as a polynomial of degree `< p^n`.

use rand::Rng;
use serde_json::{json, Map, Value};

use crate::algebra::{Field, FieldElement, PadicScalar};
use crate::error::{Error, Result};
use crate::laurent::{binomial_transform, LaurentSeries};
use crate::reps::BCharacter;
use crate::tower::{star_action, BorelElement, Flavor, Tower};

fn pow_usize(p: u32, n: u32) -> usize {
    (p as usize).pow(n)
}

/// A measure on `Z_p` through its values on the cosets `a + p^level Z_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureZp {
    p: u32,
    level: u32,
    values: Vec<FieldElement>,
}

impl MeasureZp {
    pub fn new(p: u32, level: u32, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != pow_usize(p, level) {
            return Err(Error::LevelMismatch(format!(
                "{} values for level {level}",
                values.len()
            )));
        }
        Ok(MeasureZp { p, level, values })
    }

    pub fn zero(field: Field, level: u32) -> Self {
        let p = field.p();
        MeasureZp {
            p,
            level,
            values: vec![field.zero(); pow_usize(p, level)],
        }
    }

    pub fn dirac(field: Field, a: usize, level: u32) -> Self {
        let mut m = Self::zero(field, level);
        let n = m.values.len();
        m.values[a % n] = field.one();
        m
    }

    pub fn random<R: Rng + ?Sized>(field: Field, level: u32, rng: &mut R) -> Self {
        let p = field.p();
        MeasureZp {
            p,
            level,
            values: (0..pow_usize(p, level))
                .map(|_| field.random(rng))
                .collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn field(&self) -> Field {
        self.values[0].field()
    }

    /// Values on the cosets of `p^m Z_p` for `m <= level`.
    pub fn coarsen(&self, m: u32) -> Result<MeasureZp> {
        if m > self.level {
            return Err(Error::LevelExhausted);
        }
        let n = pow_usize(self.p, m);
        let mut values = vec![self.field().zero(); n];
        for (b, &v) in self.values.iter().enumerate() {
            values[b % n] = values[b % n] + v;
        }
        Ok(MeasureZp {
            p: self.p,
            level: m,
            values,
        })
    }

    pub fn scale(&self, c: FieldElement) -> MeasureZp {
        MeasureZp {
            values: self.values.iter().map(|&v| v * c).collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"level": self.level, "values": table(&self.values)})
    }
}

fn table(values: &[FieldElement]) -> Value {
    let mut m = Map::new();
    for (k, v) in values.iter().enumerate() {
        m.insert(k.to_string(), json!(v.to_string()));
    }
    Value::Object(m)
}

/// `sum_a nu(a) (1+X)^a` modulo `X^(p^level)`.
pub fn amice_transform(nu: &MeasureZp) -> LaurentSeries {
    let mut v = nu.values.clone();
    binomial_transform(&mut v, nu.p, nu.level, false);
    let prec = v.len() as i64;
    LaurentSeries::from_coeffs(nu.field(), 0, v, prec)
}

/// The measure of level `level` whose transform is `f` modulo `X^(p^level)`.
pub fn inverse_amice(f: &LaurentSeries, level: u32) -> Result<MeasureZp> {
    let n = pow_usize(f.p(), level);
    if f.valuation().is_some_and(|v| v < 0) {
        return Err(Error::PoleBound {
            ord: f.ord(),
            bound: 0,
        });
    }
    if f.prec() < n as i64 {
        return Err(Error::InsufficientPrecision(format!(
            "level {level} needs the series modulo X^{n}, known modulo X^{}",
            f.prec()
        )));
    }
    let mut v: Vec<FieldElement> = (0..n as i64).map(|j| f.coeff(j).unwrap()).collect();
    binomial_transform(&mut v, f.p(), level, true);
    MeasureZp::new(f.p(), level, v)
}

/// `psi(nu)(a + p^(n-1) Z_p) = nu(pa + p^n Z_p)`.
pub fn measure_psi(nu: &MeasureZp) -> Result<MeasureZp> {
    if nu.level == 0 {
        return Err(Error::LevelExhausted);
    }
    let n = pow_usize(nu.p, nu.level - 1);
    let values = (0..n).map(|a| nu.values[nu.p as usize * a]).collect();
    MeasureZp::new(nu.p, nu.level - 1, values)
}

/// A measure on `Q_p` supported in `p^-support Z_p`, given by
/// `int f dnu = int_{Z_p} f(p^-support z) dbase(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureQp {
    pub support: u32,
    pub base: MeasureZp,
}

impl MeasureQp {
    /// Cosets of `p^fine_level Z_p` are the atoms of this measure.
    pub fn fine_level(&self) -> i64 {
        self.base.level as i64 - self.support as i64
    }

    pub fn to_json(&self) -> Value {
        json!({"support": self.support, "base": self.base.to_json()})
    }
}

/// The measure attached to a plus-tower through its entry `i`:
/// `A(nu_i) = y^-i f_i`, at level `level`.
pub fn tower_to_measure(t: &Tower, i: usize, level: u32) -> Result<MeasureQp> {
    if t.model.flavor != Flavor::Plus {
        return Err(Error::PoleBound { ord: -1, bound: 0 });
    }
    let f = t.entry(i)?;
    let scaled = f.scalar_mul(t.model.y.powi(-(i as i64))?);
    Ok(MeasureQp {
        support: i as u32,
        base: inverse_amice(&scaled, level)?,
    })
}

/// A locally constant function on `Q_p` supported in `p^-shift Z_p` and
/// constant on cosets of `p^level Z_p`. `values[c]` is the value at
/// `p^-shift c`, for `c` in `0..p^(shift+level)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    p: u32,
    shift: u32,
    level: u32,
    values: Vec<FieldElement>,
}

impl StepFunction {
    pub fn new(p: u32, shift: u32, level: u32, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != pow_usize(p, shift + level) {
            return Err(Error::LevelMismatch(format!(
                "{} values for shift {shift}, level {level}",
                values.len()
            )));
        }
        Ok(StepFunction {
            p,
            shift,
            level,
            values,
        })
    }

    /// The indicator of `p^-shift Z_p`, or of the single coset `at` when given.
    pub fn indicator(field: Field, shift: u32, level: u32, at: Option<usize>) -> Self {
        let p = field.p();
        let n = pow_usize(p, shift + level);
        let values = (0..n)
            .map(|c| match at {
                Some(a) if a % n != c => field.zero(),
                _ => field.one(),
            })
            .collect();
        StepFunction {
            p,
            shift,
            level,
            values,
        }
    }

    pub fn random<R: Rng + ?Sized>(field: Field, shift: u32, level: u32, rng: &mut R) -> Self {
        let p = field.p();
        StepFunction {
            p,
            shift,
            level,
            values: (0..pow_usize(p, shift + level))
                .map(|_| field.random(rng))
                .collect(),
        }
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    fn field(&self) -> Field {
        self.values[0].field()
    }

    pub fn scale(&self, c: FieldElement) -> StepFunction {
        StepFunction {
            values: self.values.iter().map(|&v| v * c).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        let shift = self.shift.max(other.shift);
        let level = self.level.max(other.level);
        let a = self.refine(shift, level)?;
        let b = other.refine(shift, level)?;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| x + y)
            .collect();
        StepFunction::new(self.p, shift, level, values)
    }

    /// The same function on the larger window `shift' >= shift`, `level' >= level`.
    pub fn refine(&self, shift: u32, level: u32) -> Result<StepFunction> {
        if shift < self.shift || level < self.level {
            return Err(Error::LevelMismatch(format!(
                "cannot coarsen (shift {}, level {}) to (shift {shift}, level {level})",
                self.shift, self.level
            )));
        }
        let n = pow_usize(self.p, shift + level);
        let up = pow_usize(self.p, shift - self.shift);
        let m = self.values.len();
        let zero = self.field().zero();
        let values = (0..n)
            .map(|c| {
                if c % up == 0 {
                    self.values[(c / up) % m]
                } else {
                    zero
                }
            })
            .collect();
        Ok(StepFunction {
            p: self.p,
            shift,
            level,
            values,
        })
    }

    /// Value at `x`, which must be known to absolute precision `level`.
    pub fn eval(&self, x: &PadicScalar) -> Result<FieldElement> {
        let lo = -(self.shift as i64);
        if x.is_exact_zero() {
            return Ok(self.values[0]);
        }
        for e in x.val_lower_bound_pi().min(lo)..lo {
            if x.digit(e).map_err(|_| digits_error(x, self.level))? != 0 {
                return Ok(self.field().zero());
            }
        }
        let mut idx = 0usize;
        let mut pk = 1usize;
        for e in lo..self.level as i64 {
            let d = x.digit(e).map_err(|_| digits_error(x, self.level))?;
            idx += d as usize * pk;
            pk *= self.p as usize;
        }
        Ok(self.values[idx])
    }

    pub fn to_json(&self) -> Value {
        json!({"shift": self.shift, "level": self.level, "values": table(&self.values)})
    }
}

fn digits_error(x: &PadicScalar, level: u32) -> Error {
    Error::InsufficientDigits(format!(
        "point known modulo p^{}, step function needs p^{level}",
        x.prec()
    ))
}

/// `x -> f(m x + t)`, optionally scaled.
pub fn pullback(f: &StepFunction, m: &PadicScalar, t: &PadicScalar) -> Result<StepFunction> {
    let vm = m.val_pi()?;
    let vt = if t.is_exact_zero() {
        i64::MAX / 4
    } else {
        t.val_lower_bound_pi()
    };
    let i = f.shift as i64;
    let shift = 0.max(i + vm).max(vm - vt.min(i64::MAX / 8));
    let level = (f.level as i64 - vm).max(0).max(-shift);
    let p = f.p;
    let n = pow_usize(p, (shift + level) as u32);
    let mut values = Vec::with_capacity(n);
    for c in 0..n {
        let x = PadicScalar::from_int(c as i128, p, 1, shift + level + 1)?.shift(-shift);
        let y = m.mul(&x)?.add(t)?;
        values.push(f.eval(&y)?);
    }
    StepFunction::new(p, shift as u32, level as u32, values)
}

/// `(a b; 0 d) * f = chi1(d) chi2(a) f((dx - b)/a)`.
pub fn step_action(
    a: &PadicScalar,
    b: &PadicScalar,
    d: &PadicScalar,
    f: &StepFunction,
    chars: &BCharacter,
) -> Result<StepFunction> {
    let m = d.div(a)?;
    let t = b.div(a)?.neg();
    let (va, vd) = (a.val_pi()?, d.val_pi()?);
    let c = chars.left.eval(vd, d.digit(vd)?) * chars.right.eval(va, a.digit(va)?);
    Ok(pullback(f, &m, &t)?.scale(c))
}

/// `int f dnu`, after extending `f` to the support and level of `nu`.
pub fn pair(f: &StepFunction, nu: &MeasureQp) -> Result<FieldElement> {
    let fine = nu.fine_level();
    if f.shift > nu.support || (f.level as i64) > fine {
        return Err(Error::LevelMismatch(format!(
            "function on (shift {}, level {}) against measure on (support {}, level {fine})",
            f.shift, f.level, nu.support
        )));
    }
    let g = f.refine(nu.support, fine as u32)?;
    Ok(g.values
        .iter()
        .zip(&nu.base.values)
        .fold(f.field().zero(), |acc, (&x, &y)| acc + x * y))
}

/// `int f dnu_y` through the first entry of `t` with enough precision.
pub fn integrate(f: &StepFunction, t: &Tower) -> Result<FieldElement> {
    let p = t.model.p() as i64;
    for i in f.shift as usize..t.depth() {
        let level = i as u32 + f.level;
        let need = p.checked_pow(level).unwrap_or(i64::MAX);
        if t.entry(i)?.prec() >= need {
            return pair(f, &tower_to_measure(t, i, level)?);
        }
    }
    Err(Error::InsufficientPrecision(format!(
        "no entry of a depth-{} tower resolves level {} on p^-{}Z_p",
        t.depth(),
        f.level,
        f.shift
    )))
}

/// The matrix `(a b; 0 d)` of a Borel element.
pub fn borel_matrix(g: &BorelElement) -> Result<(PadicScalar, PadicScalar, PadicScalar)> {
    let b = match &g.z {
        Some(z) => g.x.mul(z)?,
        None => PadicScalar::from_int(0, g.p(), 1, g.x.prec())?,
    };
    let d = g.x.mul(&g.a.to_scalar())?.shift(g.j);
    Ok((g.x.clone(), b, d))
}

/// `(w^r mu(y), chi w^-r mu(1/y))`, the induction dual to the plus tower.
pub fn induced_characters(t: &Tower) -> Result<BCharacter> {
    let eta = t.model.eta();
    Ok(BCharacter::new(eta, t.central.mul(&eta.inv())))
}

/// Counters for one measure property.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, outcome: Result<Option<String>>) -> Result<()> {
        match outcome {
            Ok(None) => self.checked += 1,
            Ok(Some(msg)) => {
                self.checked += 1;
                self.failures.push(msg);
            }
            Err(Error::InsufficientPrecision(_)) | Err(Error::DepthExhausted { .. }) => {
                self.skipped += 1
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

fn expect_eq(what: &str, lhs: FieldElement, rhs: FieldElement) -> Option<String> {
    (lhs != rhs).then(|| format!("{what}: {lhs} != {rhs}"))
}

/// Largest level with `p^level <= prec`.
fn max_level(p: u32, prec: i64) -> u32 {
    let mut l = 0;
    while (p as i64).pow(l + 1) <= prec {
        l += 1;
    }
    l
}

fn random_plus_tower<R: Rng + ?Sized>(
    p: u32,
    depth: usize,
    prec: i64,
    rng: &mut R,
) -> Result<Tower> {
    let f = Field::kl(p)?;
    let model = crate::tower::CharModel::new(
        rng.gen_range(0..p as i64 - 1),
        f.random_unit(rng),
        Flavor::Plus,
    )?;
    let central =
        crate::reps::MulCharacter::new(rng.gen_range(0..p as i64 - 1), f.random_unit(rng))?;
    Tower::random(model, central, depth, prec, f.zero(), rng)
}

fn scalar(v: i64, unit: &crate::algebra::ZpDigits) -> PadicScalar {
    unit.to_scalar().shift(v)
}

/// The four action formulas on measures, each tested `samples` times on
/// random plus towers of precision `prec`:
/// `nu_{(x,0;0,x) y} = chi^-1(x) nu_y`, `int f dnu_{(1,0;0,p) y} = y^-1 int f(z/p) dnu_y`,
/// `int f dnu_{(1,0;0,d) y} = d^-r int f(z/d) dnu_y`, `int f dnu_{(1,b;0,1) y} = int f(z+b) dnu_y`.
pub fn check_measure_formulas<R: Rng + ?Sized>(
    p: u32,
    depth: usize,
    prec: i64,
    samples: usize,
    rng: &mut R,
) -> Result<[Tally; 4]> {
    let digits = 12;
    let mut out: [Tally; 4] = Default::default();
    let kl = Field::kl(p)?;
    let top = max_level(p, prec);
    for _ in 0..samples {
        let t = random_plus_tower(p, depth, prec, rng)?;
        let sh = rng.gen_range(0..=1u32.min(top));
        let lv = rng.gen_range(0..=(top - sh).min(2));
        let f = StepFunction::random(kl, sh, lv, rng);
        let base = |f: &StepFunction| integrate(f, &t);
        let unit = |rng: &mut R| {
            let mut d: Vec<u32> = (0..digits).map(|_| rng.gen_range(0..p)).collect();
            d[0] = rng.gen_range(1..p);
            crate::algebra::ZpDigits::from_digits(p, d)
        };

        let x = scalar(rng.gen_range(-2..=2), &unit(rng));
        let g = BorelElement::central(x.clone(), digits);
        out[0].record((|| {
            let lhs = integrate(&f, &star_action(&g, &t, depth)?)?;
            let c = t.central.eval(x.val_pi()?, x.digit(x.val_pi()?)?).inv()?;
            Ok(expect_eq("central", lhs, c * base(&f)?))
        })())?;

        let g = BorelElement::p_power(p, 1, digits);
        out[1].record((|| {
            let lhs = integrate(&f, &star_action(&g, &t, depth)?)?;
            let one = PadicScalar::from_int(1, p, 1, digits as i64)?;
            let zero = PadicScalar::from_int(0, p, 1, digits as i64)?;
            let moved = pullback(&f, &one.shift(-1), &zero)?;
            Ok(expect_eq("p-power", lhs, t.model.y.inv()? * base(&moved)?))
        })())?;

        let d = unit(rng);
        let g = BorelElement::diag_unit(d.clone())?;
        out[2].record((|| {
            let lhs = integrate(&f, &star_action(&g, &t, depth)?)?;
            let zero = PadicScalar::from_int(0, p, 1, digits as i64)?;
            let moved = pullback(&f, &d.inv()?.to_scalar(), &zero)?;
            let c = kl.from_int(d.residue()? as i64).powi(-(t.model.r as i64))?;
            Ok(expect_eq("diagonal unit", lhs, c * base(&moved)?))
        })())?;

        let b = scalar(rng.gen_range(-1..=2), &unit(rng));
        let g = BorelElement::unipotent(b.clone(), digits);
        out[3].record((|| {
            let lhs = integrate(&f, &star_action(&g, &t, depth)?)?;
            let one = PadicScalar::from_int(1, p, 1, digits as i64)?;
            let moved = pullback(&f, &one, &b)?;
            Ok(expect_eq("unipotent", lhs, base(&moved)?))
        })())?;
    }
    Ok(out)
}

/// `pair(g f, nu_{g y}) = pair(f, nu_y)` for random `(g, f, y)`, with `f`
/// in the induction of [`induced_characters`]. Triples that exceed the
/// depth or precision of the tower are redrawn, up to `10 * samples` draws.
pub fn check_pair_invariance<R: Rng + ?Sized>(
    p: u32,
    depth: usize,
    prec: i64,
    samples: usize,
    rng: &mut R,
) -> Result<Tally> {
    let digits = 12;
    let kl = Field::kl(p)?;
    let top = max_level(p, prec);
    let mut tally = Tally::default();
    let budget = crate::tower::SampleBudget {
        psi_total: 2,
        max_shift: 1,
        digits,
    };
    let mut draws = 0;
    while tally.checked < samples && draws < 10 * samples {
        draws += 1;
        let t = random_plus_tower(p, depth, prec, rng)?;
        let class = crate::tower::GeneratorClass::ALL[rng.gen_range(0..5)];
        let g = BorelElement::random(p, class, budget, rng);
        let sh = rng.gen_range(0..=1u32.min(top));
        let f = StepFunction::random(kl, sh, rng.gen_range(0..=(top - sh).min(1)), rng);
        let chars = induced_characters(&t)?;
        let attempt = (|| {
            let (a, b, d) = borel_matrix(&g)?;
            let gf = step_action(&a, &b, &d, &f, &chars)?;
            let gy = star_action(&g, &t, depth - (-g.j).max(0) as usize)?;
            let lhs = integrate(&gf, &gy)?;
            Ok(expect_eq(class.name(), lhs, integrate(&f, &t)?))
        })();
        match attempt {
            Ok(None) => tally.checked += 1,
            Ok(Some(m)) => {
                tally.checked += 1;
                tally.failures.push(m);
            }
            Err(Error::InsufficientPrecision(_)) | Err(Error::DepthExhausted { .. }) => {
                tally.skipped += 1
            }
            Err(e) => return Err(e),
        }
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::MulCharacter;
    use crate::tower::CharModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kl(p: u32) -> Field {
        Field::kl(p).unwrap()
    }

    #[test]
    fn transform_examples() {
        let f = kl(3);
        for level in 0..3 {
            assert_eq!(
                amice_transform(&MeasureZp::dirac(f, 0, level)).terms(),
                vec![(0, f.one())]
            );
        }
        assert_eq!(
            amice_transform(&MeasureZp::dirac(f, 1, 2)).terms(),
            vec![(0, f.one()), (1, f.one())]
        );
        let ones = MeasureZp::new(3, 1, vec![f.one(); 3]).unwrap();
        assert_eq!(amice_transform(&ones).terms(), vec![(2, f.one())]);
    }

    #[test]
    fn transform_is_bijective_and_compatible_with_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [2u32, 3, 5] {
            let f = kl(p);
            for level in 0..=3u32 {
                for a in 0..pow_usize(p, level) {
                    let img = amice_transform(&MeasureZp::dirac(f, a, level));
                    assert_eq!(img.valuation(), Some(0));
                    assert_eq!(img.coeff(a as i64).unwrap(), f.one());
                    assert!((a as i64 + 1..img.prec()).all(|j| img.coeff(j).unwrap().is_zero()));
                }
                let nu = MeasureZp::random(f, level, &mut rng);
                let img = amice_transform(&nu);
                assert_eq!(inverse_amice(&img, level).unwrap(), nu);
                for m in 0..=level {
                    let coarse = amice_transform(&nu.coarsen(m).unwrap());
                    assert!(coarse.agrees_with(&img.truncate(pow_usize(p, m) as i64)));
                }
            }
        }
    }

    #[test]
    fn psi_examples() {
        let f = kl(5);
        assert_eq!(
            measure_psi(&MeasureZp::dirac(f, 0, 2)).unwrap(),
            MeasureZp::dirac(f, 0, 1)
        );
        assert_eq!(
            measure_psi(&MeasureZp::dirac(f, 1, 2)).unwrap(),
            MeasureZp::zero(f, 1)
        );
        assert!(matches!(
            measure_psi(&MeasureZp::dirac(f, 0, 0)),
            Err(Error::LevelExhausted)
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2u32, 3, 5] {
            let nu = MeasureZp::random(kl(p), 3, &mut rng);
            let lhs = amice_transform(&measure_psi(&nu).unwrap());
            let rhs = amice_transform(&nu).psi().unwrap();
            assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn pairing_examples() {
        let f = kl(3);
        let ind = StepFunction::indicator(f, 0, 0, None);
        let nu = MeasureQp {
            support: 0,
            base: MeasureZp::dirac(f, 0, 2),
        };
        assert_eq!(pair(&ind, &nu).unwrap(), f.one());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g1 = StepFunction::random(f, 1, 1, &mut rng);
        let g2 = StepFunction::random(f, 0, 2, &mut rng);
        let nu = MeasureQp {
            support: 1,
            base: MeasureZp::random(f, 3, &mut rng),
        };
        let c = f.from_int(2);
        let lhs = pair(&g1.scale(c).add(&g2).unwrap(), &nu).unwrap();
        assert_eq!(lhs, c * pair(&g1, &nu).unwrap() + pair(&g2, &nu).unwrap());
        let coarse = MeasureQp {
            support: 0,
            base: MeasureZp::random(f, 1, &mut rng),
        };
        assert!(matches!(pair(&g1, &coarse), Err(Error::LevelMismatch(_))));
    }

    #[test]
    fn step_action_examples() {
        let p = 5;
        let f = kl(p);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = StepFunction::random(f, 1, 1, &mut rng);
        let one = PadicScalar::from_int(1, p, 1, 12).unwrap();
        let zero = PadicScalar::from_int(0, p, 1, 12).unwrap();
        let chi1 = MulCharacter::new(1, f.from_int(2)).unwrap();
        let chi2 = MulCharacter::new(3, f.from_int(3)).unwrap();
        let chars = BCharacter::new(chi1, chi2);
        let same = step_action(&one, &zero, &one, &s, &chars).unwrap();
        assert_eq!(same, s);
        let d = PadicScalar::from_int(2, p, 1, 12).unwrap();
        let moved = step_action(&one, &zero, &d, &s, &chars).unwrap();
        for c in 0..25 {
            let x = PadicScalar::from_rational(c, 5, p, 1, 12).unwrap();
            let want = chi1.eval_at_unit(2) * s.eval(&d.mul(&x).unwrap()).unwrap();
            assert_eq!(moved.eval(&x).unwrap(), want);
        }
        let b = PadicScalar::from_rational(3, 5, p, 1, 12).unwrap();
        let translated = step_action(&one, &b, &one, &s, &chars).unwrap();
        for c in 0..25 {
            let x = PadicScalar::from_rational(c, 5, p, 1, 12).unwrap();
            let want = s.eval(&x.sub(&b).unwrap()).unwrap();
            assert_eq!(translated.eval(&x).unwrap(), want);
        }
    }

    #[test]
    fn measure_formulas_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p, prec) in [(2u32, 128i64), (3, 243), (5, 625)] {
            for tally in check_measure_formulas(p, 5, prec, 4, &mut rng).unwrap() {
                assert!(tally.failures.is_empty(), "p={p}: {:?}", tally.failures);
                assert!(tally.checked > 0, "p={p}: {tally:?}");
            }
            let inv = check_pair_invariance(p, 5, prec, 10, &mut rng).unwrap();
            assert!(inv.failures.is_empty(), "p={p}: {:?}", inv.failures);
            assert_eq!(inv.checked, 10, "p={p}: {inv:?}");
        }
    }

    #[test]
    fn tower_measures_do_not_depend_on_the_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = 3;
        let f = kl(p);
        let model = CharModel::new(1, f.from_int(2), Flavor::Plus).unwrap();
        let t = Tower::random(model, MulCharacter::trivial(p), 4, 243, f.zero(), &mut rng).unwrap();
        let func = StepFunction::random(f, 1, 2, &mut rng);
        let base = pair(&func, &tower_to_measure(&t, 1, 3).unwrap()).unwrap();
        for i in 2..4 {
            let nu = tower_to_measure(&t, i, i as u32 + 2).unwrap();
            assert_eq!(pair(&func, &nu).unwrap(), base);
        }
        let consts = Tower::new(
            model,
            MulCharacter::trivial(p),
            (0..3)
                .map(|i| LaurentSeries::monomial(model.y.pow(i), 0, f, 27))
                .collect(),
        )
        .unwrap();
        let nu = tower_to_measure(&consts, 2, 3).unwrap();
        assert_eq!(nu.base, MeasureZp::dirac(f, 0, 3));
    }
}
