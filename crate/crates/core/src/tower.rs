//! Finite-depth `psi`-towers in the rank-one modules `D+(W)` and `D#(W)`,
//! and the action of the Borel subgroup of `GL2(Q_p)` on them.
//!
//! For `W = w^r * mu(y)` the module has a basis `e` with `phi(e) = y e` and
//! `gamma(e) = w^r(gamma) e`, so an element `f e` is stored as the series `f`
//! and `psi(f e) = y^-1 psi(f) e`. A tower is a sequence `v_0, v_1, ...` with
//! `psi(v_{i+1}) = v_i`; we keep finitely many entries, each known to its own
//! precision.

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{Field, FieldElement, PadicScalar, ZpDigits};
use crate::error::{Error, Result};
use crate::laurent::{one_plus_x_pow, LaurentSeries};
use crate::reps::{BCharacter, MulCharacter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `D+(W) = k_L[[X]] e`.
    Plus,
    /// `D#(W) = X^-1 k_L[[X]] e`.
    Sharp,
}

impl Flavor {
    pub fn min_ord(self) -> i64 {
        match self {
            Flavor::Plus => 0,
            Flavor::Sharp => -1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Flavor::Plus => "plus",
            Flavor::Sharp => "sharp",
        }
    }
}

/// The rank-one module attached to `W = w^r * mu(y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharModel {
    pub r: u32,
    pub y: FieldElement,
    pub flavor: Flavor,
}

impl CharModel {
    pub fn new(r: i64, y: FieldElement, flavor: Flavor) -> Result<Self> {
        if y.is_zero() {
            return Err(Error::NotAUnit("y must be nonzero".into()));
        }
        let p = y.p() as i64;
        Ok(CharModel {
            r: r.rem_euclid(p - 1) as u32,
            y: y.lift(),
            flavor,
        })
    }

    pub fn p(&self) -> u32 {
        self.y.p()
    }

    pub fn field(&self) -> Field {
        self.y.field()
    }

    /// The character `W` itself.
    pub fn eta(&self) -> MulCharacter {
        MulCharacter::new(self.r as i64, self.y).unwrap()
    }

    pub fn with_flavor(&self, flavor: Flavor) -> CharModel {
        CharModel { flavor, ..*self }
    }
}

/// `psi` on the module: `y^-1 psi(f)`. Sharp entries are windowed against
/// the pole bound `X^-1`, not against their own order.
pub fn module_psi(model: &CharModel, f: &LaurentSeries) -> Result<LaurentSeries> {
    let img = if model.flavor == Flavor::Sharp && f.ord() >= 0 {
        let field = f.field();
        let pole = |prec| LaurentSeries::monomial(field.one(), -1, field, prec);
        let shifted = f.add(&pole(f.prec())).psi()?;
        shifted.sub(&pole(shifted.prec()))
    } else {
        f.psi()?
    };
    Ok(img.scalar_mul(model.y.inv()?))
}

fn module_psi_n(model: &CharModel, f: &LaurentSeries, n: u32) -> Result<LaurentSeries> {
    let mut f = f.clone();
    for _ in 0..n {
        f = module_psi(model, &f)?;
    }
    Ok(f)
}

/// Number of successive `psi` applications a sharp entry of precision `prec`
/// survives with its `X^-1` coefficient still known.
pub fn psi_budget(p: u32, prec: i64) -> u32 {
    let p = p as i64;
    let mut n = prec;
    let mut count = 0;
    loop {
        let out = (n + 1).div_euclid(p);
        if out <= 0 || out - 1 < 0 {
            return count;
        }
        n = out - 1;
        count += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tower {
    pub model: CharModel,
    pub central: MulCharacter,
    entries: Vec<LaurentSeries>,
}

/// Report of [`Tower::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub checked: usize,
    pub vacuous: usize,
    pub failures: Vec<usize>,
}

impl Tower {
    pub fn new(
        model: CharModel,
        central: MulCharacter,
        entries: Vec<LaurentSeries>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DepthExhausted {
                needed: 1,
                available: 0,
            });
        }
        for v in &entries {
            if v.field() != model.field() {
                return Err(Error::MismatchedField(
                    "tower entries must live in k_L".into(),
                ));
            }
            if v.valuation().is_some_and(|o| o < model.flavor.min_ord()) {
                return Err(Error::PoleBound {
                    ord: v.ord(),
                    bound: model.flavor.min_ord(),
                });
            }
        }
        Ok(Tower {
            model,
            central,
            entries,
        })
    }

    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[LaurentSeries] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> Result<&LaurentSeries> {
        self.entries.get(i).ok_or(Error::DepthExhausted {
            needed: i + 1,
            available: self.entries.len(),
        })
    }

    /// The tower `(y^n X^-1)_n`, each entry known modulo `X^prec`.
    pub fn standard(
        model: CharModel,
        central: MulCharacter,
        depth: usize,
        prec: i64,
    ) -> Result<Tower> {
        if model.flavor != Flavor::Sharp {
            return Err(Error::PoleBound { ord: -1, bound: 0 });
        }
        let f = model.field();
        let entries = (0..depth)
            .map(|n| LaurentSeries::monomial(model.y.pow(n as u64), -1, f, prec))
            .collect();
        Tower::new(model, central, entries)
    }

    /// A random tower with `res(v_0) = res0` (ignored for the plus flavor).
    /// Each step lifts `v_i = c X^-1 + h` to `y (c X^-1 + phi(h)) + (g - phi psi g)`
    /// with `g` a random power series.
    pub fn random<R: Rng + ?Sized>(
        model: CharModel,
        central: MulCharacter,
        depth: usize,
        prec: i64,
        res0: FieldElement,
        rng: &mut R,
    ) -> Result<Tower> {
        let f = model.field();
        let p = model.p() as i64;
        let mut v = LaurentSeries::random(f, 0, prec, rng);
        if model.flavor == Flavor::Sharp {
            v = v.add(&LaurentSeries::monomial(res0, -1, f, prec));
        }
        let mut entries = vec![v];
        for _ in 1..depth {
            let last = entries.last().unwrap();
            let c = last.coeff(-1)?;
            let h = last.sub(&LaurentSeries::monomial(c, -1, f, prec));
            let g = LaurentSeries::random(f, 0, p * prec + p, rng);
            let kill = g.sub(&g.psi()?.phi());
            let next = LaurentSeries::monomial(c, -1, f, prec)
                .add(&h.phi())
                .scalar_mul(model.y)
                .add(&kill)
                .truncate(prec);
            entries.push(next);
        }
        Tower::new(model, central, entries)
    }

    /// Checks `psi(v_{i+1}) = v_i` wherever the precision allows.
    pub fn validate(&self) -> ValidityReport {
        let mut rep = ValidityReport::default();
        for i in 0..self.entries.len().saturating_sub(1) {
            match module_psi(&self.model, &self.entries[i + 1]) {
                Ok(img) => {
                    rep.checked += 1;
                    if !img.agrees_with(&self.entries[i]) {
                        rep.failures.push(i);
                    }
                }
                Err(Error::EmptyWindow { .. }) => rep.vacuous += 1,
                Err(_) => rep.failures.push(i),
            }
        }
        rep
    }

    pub fn is_valid(&self) -> bool {
        self.validate().failures.is_empty()
    }

    pub fn scalar_mul(&self, c: FieldElement) -> Tower {
        Tower {
            entries: self.entries.iter().map(|v| v.scalar_mul(c)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Tower) -> Result<Tower> {
        if self.model != other.model {
            return Err(Error::MismatchedField(
                "towers over different models".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Tower::new(self.model, self.central, entries)
    }

    /// Agreement of every common entry within precision.
    pub fn agrees_with(&self, other: &Tower) -> bool {
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.agrees_with(b))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": {
                "r": self.model.r,
                "y": self.model.y.to_string(),
                "flavor": self.model.flavor.name(),
            },
            "central": self.central.to_string(),
            "entries": self.entries.iter().map(LaurentSeries::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `res` of the first entry.
pub fn tower_residue(t: &Tower) -> Result<FieldElement> {
    t.entry(0)?.residue()
}

/// An element `diag(x, x) diag(1, p^j) diag(1, a) (1 z; 0 1)` of the Borel
/// subgroup, i.e. the matrix `(x  xz; 0  x p^j a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BorelElement {
    pub x: PadicScalar,
    pub j: i64,
    pub a: ZpDigits,
    /// `None` for `z = 0`.
    pub z: Option<PadicScalar>,
}

/// Generator classes used by samplers and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorClass {
    Central,
    PPower,
    DiagUnit,
    Unipotent,
    General,
}

impl GeneratorClass {
    pub const ALL: [GeneratorClass; 5] = [
        GeneratorClass::Central,
        GeneratorClass::PPower,
        GeneratorClass::DiagUnit,
        GeneratorClass::Unipotent,
        GeneratorClass::General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorClass::Central => "central",
            GeneratorClass::PPower => "p-power",
            GeneratorClass::DiagUnit => "diagonal unit",
            GeneratorClass::Unipotent => "unipotent",
            GeneratorClass::General => "general",
        }
    }
}

/// Bounds for random Borel elements.
#[derive(Clone, Copy, Debug)]
pub struct SampleBudget {
    /// Largest `|j|` and largest `-val(z)`, jointly limited by `psi_total`.
    pub psi_total: u32,
    /// Largest `|j|` for negative `j`.
    pub max_shift: u32,
    /// Digits carried by random scalars.
    pub digits: usize,
}

impl BorelElement {
    pub fn identity(p: u32, digits: usize) -> Self {
        BorelElement {
            x: PadicScalar::from_int(1, p, 1, digits as i64).unwrap(),
            j: 0,
            a: ZpDigits::from_i64(1, p, digits),
            z: None,
        }
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn central(x: PadicScalar, digits: usize) -> Self {
        let p = x.p();
        BorelElement {
            x,
            ..Self::identity(p, digits)
        }
    }

    pub fn p_power(p: u32, j: i64, digits: usize) -> Self {
        BorelElement {
            j,
            ..Self::identity(p, digits)
        }
    }

    pub fn diag_unit(a: ZpDigits) -> Result<Self> {
        if !a.is_unit() {
            return Err(Error::NotAUnit(format!("{a:?}")));
        }
        let p = a.p();
        let digits = a.len();
        Ok(BorelElement {
            a,
            ..Self::identity(p, digits)
        })
    }

    pub fn unipotent(z: PadicScalar, digits: usize) -> Self {
        BorelElement {
            z: Some(z.clone()),
            ..Self::identity(z.p(), digits)
        }
    }

    /// `self * other` as matrices: `x = x1 x2`, `j = j1 + j2`, `a = a1 a2`,
    /// `z = z2 + p^j2 a2 z1`.
    pub fn compose(&self, other: &BorelElement) -> Result<BorelElement> {
        let x = self.x.mul(&other.x)?;
        let a = self.a.mul(&other.a);
        let moved = match &self.z {
            Some(z1) => Some(z1.mul(&other.a.to_scalar())?.shift(other.j)),
            None => None,
        };
        let z = match (moved, &other.z) {
            (Some(m), Some(z2)) => Some(m.add(z2)?),
            (Some(m), None) => Some(m),
            (None, z2) => z2.clone(),
        };
        Ok(BorelElement {
            x,
            j: self.j + other.j,
            a,
            z,
        })
    }

    /// `-val(z)` clipped at 0 (uses the certified lower bound).
    pub fn pole_depth(&self) -> u32 {
        match &self.z {
            Some(z) if !z.is_exact_zero() => (-z.val_lower_bound_pi()).max(0) as u32,
            _ => 0,
        }
    }

    /// `(val, residue of unit part)` of `x` and of `x p^j a`.
    fn diagonal_data(&self) -> Result<((i64, u32), (i64, u32))> {
        let vx = self.x.val_pi()?;
        let ux = self.x.digit(vx)?;
        let ua = self.a.residue()?;
        let p = self.p() as u64;
        Ok((
            (vx, ux),
            (vx + self.j, ((ux as u64 * ua as u64) % p) as u32),
        ))
    }

    /// Value of a character of the Borel subgroup at this element.
    pub fn eval_character(&self, chi: &BCharacter) -> Result<FieldElement> {
        let ((va, ua), (vd, ud)) = self.diagonal_data()?;
        Ok(chi.eval(va, ua, vd, ud))
    }

    pub fn random<R: Rng + ?Sized>(
        p: u32,
        class: GeneratorClass,
        budget: SampleBudget,
        rng: &mut R,
    ) -> BorelElement {
        let digits = budget.digits;
        let rand_unit = |rng: &mut R| {
            let mut d: Vec<u32> = (0..digits).map(|_| rng.gen_range(0..p)).collect();
            d[0] = rng.gen_range(1..p);
            ZpDigits::from_digits(p, d)
        };
        let rand_scalar = |rng: &mut R, v: i64| {
            let u = rand_unit(rng);
            let pairs: Vec<(i64, i64)> = u
                .digits()
                .iter()
                .enumerate()
                .map(|(k, &d)| (v + k as i64, d as i64))
                .collect();
            PadicScalar::from_pi_digits(p, 1, &pairs, v + digits as i64).unwrap()
        };
        let total = budget.psi_total as i64;
        let rand_j = |rng: &mut R, cap: i64| rng.gen_range(-(budget.max_shift as i64)..=cap);
        match class {
            GeneratorClass::Central => {
                let v = rng.gen_range(-3..=3);
                BorelElement::central(rand_scalar(rng, v), digits)
            }
            GeneratorClass::PPower => BorelElement::p_power(p, rand_j(rng, total), digits),
            GeneratorClass::DiagUnit => BorelElement::diag_unit(rand_unit(rng)).unwrap(),
            GeneratorClass::Unipotent => {
                let v = rng.gen_range(-total..=3);
                BorelElement::unipotent(rand_scalar(rng, v), digits)
            }
            GeneratorClass::General => {
                let k = rng.gen_range(0..=total);
                let j = rand_j(rng, total - k);
                let v = rng.gen_range(-k..=3);
                let vx = rng.gen_range(-3..=3);
                BorelElement {
                    x: rand_scalar(rng, vx),
                    j,
                    a: rand_unit(rng),
                    z: Some(rand_scalar(rng, v)),
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x": self.x.to_json(),
            "j": self.j,
            "a": self.a.to_json(),
            "z": self.z.as_ref().map(PadicScalar::to_json),
        })
    }
}

/// Base-`p` digits of `p^m z` at exponents `0..count`.
fn integral_digits(z: &PadicScalar, m: i64, count: usize) -> Result<ZpDigits> {
    let w = z.shift(m);
    let digits = (0..count as i64)
        .map(|k| w.digit(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZpDigits::from_digits(z.p(), digits))
}

fn digits_for_prec(p: u32, prec: i64) -> usize {
    let mut n = 0usize;
    let mut pk = 1i64;
    while pk < prec {
        pk = pk.saturating_mul(p as i64);
        n += 1;
    }
    n
}

/// Entry `i` of `(1 z; 0 1) * v`, computed as
/// `psi^j((1+X)^(p^(i+j) z) v_{i+j})` with `j = max(0, -val(z) - i) + extra`.
pub fn unipotent_entry(t: &Tower, z: &PadicScalar, i: usize, extra: u32) -> Result<LaurentSeries> {
    let k = (-z.val_lower_bound_pi()).max(0) as usize;
    let j = k.saturating_sub(i) + extra as usize;
    let v = t.entry(i + j)?;
    let n = v.prec() + 1;
    let w = integral_digits(z, (i + j) as i64, digits_for_prec(t.model.p(), n))?;
    let u = one_plus_x_pow(t.model.field(), &w, 0, n)?;
    module_psi_n(&t.model, &u.mul(v), j as u32)
}

fn act_unipotent(t: &Tower, z: &PadicScalar, depth: usize) -> Result<Tower> {
    let k = (-z.val_lower_bound_pi()).max(0) as usize;
    let needed = depth.max(k + 1);
    if t.depth() < needed {
        return Err(Error::DepthExhausted {
            needed,
            available: t.depth(),
        });
    }
    let entries = (0..depth)
        .map(|i| unipotent_entry(t, z, i, 0))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(t.model, t.central, entries)
}

fn act_diag_unit(t: &Tower, a: &ZpDigits) -> Result<Tower> {
    let ainv = a.inv()?;
    let f = t.model.field();
    let twist = f.from_int(ainv.residue()? as i64).pow(t.model.r as u64);
    let entries = t
        .entries
        .iter()
        .map(|v| Ok(v.gamma_act(&ainv)?.scalar_mul(twist)))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(t.model, t.central, entries)
}

fn act_p_power(t: &Tower, j: i64, depth: usize) -> Result<Tower> {
    let needed = depth + (-j).max(0) as usize;
    if t.depth() < needed {
        return Err(Error::DepthExhausted {
            needed,
            available: t.depth(),
        });
    }
    let entries = (0..depth as i64)
        .map(|i| {
            if j < 0 || i >= j {
                Ok(t.entries[(i - j) as usize].clone())
            } else {
                module_psi_n(&t.model, &t.entries[0], (j - i) as u32)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Tower::new(t.model, t.central, entries)
}

fn act_central(t: &Tower, x: &PadicScalar) -> Result<Tower> {
    let v = x.val_pi()?;
    let u = x.digit(v)?;
    let c = t.central.eval(v, u).inv()?;
    Ok(t.scalar_mul(c))
}

/// `g * t`, truncated to `depth` entries. The factors of `g` act right to
/// left: unipotent, then `diag(1, a)`, then `diag(1, p^j)`, then central.
pub fn star_action(g: &BorelElement, t: &Tower, depth: usize) -> Result<Tower> {
    if depth == 0 {
        return Err(Error::DepthExhausted {
            needed: 1,
            available: 0,
        });
    }
    let after_shift = depth + (-g.j).max(0) as usize;
    let mut cur = match &g.z {
        Some(z) if !z.is_exact_zero() => act_unipotent(t, z, after_shift)?,
        _ => {
            if t.depth() < after_shift {
                return Err(Error::DepthExhausted {
                    needed: after_shift,
                    available: t.depth(),
                });
            }
            t.clone()
        }
    };
    if g.a.residue()? != 1 || g.a.digits().iter().skip(1).any(|&d| d != 0) {
        cur = act_diag_unit(&cur, &g.a)?;
    }
    if g.j != 0 || cur.depth() != depth {
        cur = act_p_power(&cur, g.j, depth)?;
    }
    act_central(&cur, &g.x)
}

/// The characters through which `res` transforms: the tower side
/// `chi^-1 w^(r-1) mu(y) (x) w^(1-r) mu(y^-1)` and its inverse, the dual side
/// `chi w W^-1 (x) w^-1 W`.
pub fn residue_character(model: &CharModel, central: &MulCharacter) -> (BCharacter, BCharacter) {
    let eta = model.eta();
    let tower = BCharacter::new(central.inv().mul(&eta).twist_by(-1), eta.inv().twist_by(1));
    let dual = BCharacter::new(central.twist_by(1).mul(&eta.inv()), eta.twist_by(-1));
    (tower, dual)
}

/// Outcome of [`check_exact_sequence`].
#[derive(Clone, Debug, Default)]
pub struct ExactSequenceReport {
    pub surjectivity_checked: usize,
    pub surjectivity_failures: usize,
    pub kernel_checked: usize,
    pub kernel_failures: usize,
    pub equivariance_checked: usize,
    pub equivariance_failures: Vec<String>,
    pub validity_checked: usize,
    pub validity_failures: usize,
}

impl ExactSequenceReport {
    pub fn violations(&self) -> usize {
        self.surjectivity_failures
            + self.kernel_failures
            + self.equivariance_failures.len()
            + self.validity_failures
    }
}

/// Residue exact sequence for `D#(W)`: `res` is onto `k_L`, its kernel is
/// the plus part, and `res(g * y) = residue_character(g) res(y)` for
/// `samples` random `g` per generator class. Every tenth sample also checks
/// that the full-depth image `g * y` is a valid tower.
pub fn check_exact_sequence<R: Rng + ?Sized>(
    model: &CharModel,
    central: &MulCharacter,
    depth: usize,
    prec: i64,
    samples: usize,
    rng: &mut R,
) -> Result<ExactSequenceReport> {
    let model = model.with_flavor(Flavor::Sharp);
    let f = model.field();
    let mut rep = ExactSequenceReport::default();
    let std = Tower::standard(model, *central, depth, prec)?;
    for c in f.elements() {
        rep.surjectivity_checked += 1;
        if tower_residue(&std.scalar_mul(c))? != c {
            rep.surjectivity_failures += 1;
        }
    }
    let mut pool = vec![std];
    for s in 0..samples.clamp(1, 8) {
        let res0 = if s % 2 == 0 { f.zero() } else { f.random(rng) };
        let t = Tower::random(model, *central, depth, prec, res0, rng)?;
        let in_kernel = tower_residue(&t)?.is_zero();
        let plus = t.entries().iter().all(|v| v.ord() >= 0);
        rep.kernel_checked += 1;
        if in_kernel != plus {
            rep.kernel_failures += 1;
        }
        pool.push(t);
    }
    let (chi_res, _) = residue_character(&model, central);
    let budget = SampleBudget {
        psi_total: psi_budget(model.p(), prec).min(depth as u32 - 1),
        max_shift: (depth as u32 / 2).max(1),
        digits: 12,
    };
    for class in GeneratorClass::ALL {
        for s in 0..samples {
            let g = BorelElement::random(model.p(), class, budget, rng);
            let t = &pool[rng.gen_range(0..pool.len())];
            let moved = star_action(&g, t, 1)?;
            let lhs = tower_residue(&moved)?;
            let rhs = g.eval_character(&chi_res)? * tower_residue(t)?;
            rep.equivariance_checked += 1;
            if lhs != rhs {
                rep.equivariance_failures.push(format!(
                    "{}: res(g*t) = {lhs}, expected {rhs}",
                    class.name()
                ));
            }
            if s % 10 == 0 {
                let target = (depth - (-g.j).max(0) as usize).max(1);
                let full = star_action(&g, t, target)?;
                rep.validity_checked += 1;
                if !full.is_valid() || tower_residue(&full)? != lhs {
                    rep.validity_failures += 1;
                }
            }
        }
    }
    Ok(rep)
}
