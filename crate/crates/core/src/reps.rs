//! Labels for mod-p representations: characters `w^r * mu(y)`, Galois
//! representations, irreducible constituents of smooth `GL2(Q_p)`
//! representations and of their restrictions to the Borel subgroup.
//!
//! Every label is stored in a canonical form so that equality of labels is
//! isomorphism of representations. Multisets are sorted vectors.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{Field, FieldElement};
use crate::error::{Error, Result};

/// The character `w^twist * mu(unit)` of `Q_p^x`, with `w` the reduction of
/// the cyclotomic character and `mu(y)` unramified with `mu(y)(p) = y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MulCharacter {
    twist: u32,
    unit: FieldElement,
}

impl MulCharacter {
    pub fn new(twist: i64, unit: FieldElement) -> Result<Self> {
        if unit.is_zero() {
            return Err(Error::NotAUnit(
                "unramified parameter must be nonzero".into(),
            ));
        }
        let p = unit.p() as i64;
        Ok(MulCharacter {
            twist: twist.rem_euclid(p - 1) as u32,
            unit: unit.lift(),
        })
    }

    pub fn trivial(p: u32) -> Self {
        let f = Field::kl(p).expect("prime");
        MulCharacter {
            twist: 0,
            unit: f.one(),
        }
    }

    pub fn omega(p: u32, r: i64) -> Self {
        Self::new(r, Field::kl(p).expect("prime").one()).unwrap()
    }

    pub fn mu(y: FieldElement) -> Result<Self> {
        Self::new(0, y)
    }

    pub fn p(&self) -> u32 {
        self.unit.p()
    }

    pub fn field(&self) -> Field {
        self.unit.field()
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn unit(&self) -> FieldElement {
        self.unit
    }

    pub fn mul(&self, other: &MulCharacter) -> MulCharacter {
        MulCharacter::new(
            self.twist as i64 + other.twist as i64,
            self.unit * other.unit,
        )
        .unwrap()
    }

    pub fn inv(&self) -> MulCharacter {
        MulCharacter::new(-(self.twist as i64), self.unit.inv().unwrap()).unwrap()
    }

    pub fn pow(&self, n: i64) -> MulCharacter {
        MulCharacter::new(self.twist as i64 * n, self.unit.powi(n).unwrap()).unwrap()
    }

    /// `self * w^r`.
    pub fn twist_by(&self, r: i64) -> MulCharacter {
        self.mul(&MulCharacter::omega(self.p(), r))
    }

    /// `self * mu(y)`.
    pub fn times_mu(&self, y: FieldElement) -> Result<MulCharacter> {
        Ok(self.mul(&MulCharacter::mu(y)?))
    }

    pub fn eval_at_p(&self) -> FieldElement {
        self.unit
    }

    /// Value on a unit of `Z_p` given by its residue mod `p`.
    pub fn eval_at_unit(&self, residue: u32) -> FieldElement {
        self.field().from_int(residue as i64).pow(self.twist as u64)
    }

    /// Value at `p^v * u` with `u` a unit of residue `u_res`.
    pub fn eval(&self, v: i64, u_res: u32) -> FieldElement {
        self.unit.powi(v).unwrap() * self.eval_at_unit(u_res)
    }

    fn key(&self) -> (u32, [u32; 2]) {
        (self.twist, self.unit.coords())
    }

    /// Parses `w^r*mu(y)`, `w^r`, `w`, `mu(y)` or `1`.
    pub fn parse(p: u32, s: &str) -> Result<Self> {
        let f = Field::kl(p)?;
        let bad = || Error::Parse(format!("bad character '{s}'"));
        let mut twist = 0i64;
        let mut unit = f.one();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut factors = Vec::new();
        let (mut depth, mut start) = (0i32, 0usize);
        for (i, c) in compact.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '*' if depth == 0 => {
                    factors.push(&compact[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        factors.push(&compact[start..]);
        for factor in factors {
            if factor == "1" {
                continue;
            } else if factor == "w" {
                twist += 1;
            } else if let Some(e) = factor.strip_prefix("w^") {
                let e = e.trim_start_matches('(').trim_end_matches(')');
                twist += e.parse::<i64>().map_err(|_| bad())?;
            } else if let Some(y) = factor.strip_prefix("mu(").and_then(|r| r.strip_suffix(')')) {
                unit = unit * f.parse(y)?;
            } else {
                return Err(bad());
            }
        }
        Self::new(twist, unit)
    }
}

impl PartialOrd for MulCharacter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MulCharacter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for MulCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{}*mu({})", self.twist, self.unit)
    }
}

impl fmt::Debug for MulCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Operation selector for [`char_ops`].
#[derive(Clone, Copy, Debug)]
pub enum CharOp {
    Mul,
    Inv,
    EvalAtP,
    EvalAtUnit(u32),
}

/// Either a character or a value, depending on the operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharOpResult {
    Char(MulCharacter),
    Value(FieldElement),
}

pub fn char_ops(c1: &MulCharacter, c2: Option<&MulCharacter>, op: CharOp) -> Result<CharOpResult> {
    Ok(match op {
        CharOp::Mul => {
            let c2 = c2.ok_or_else(|| Error::OutOfRange("mul needs two characters".into()))?;
            CharOpResult::Char(c1.mul(c2))
        }
        CharOp::Inv => CharOpResult::Char(c1.inv()),
        CharOp::EvalAtP => CharOpResult::Value(c1.eval_at_p()),
        CharOp::EvalAtUnit(u) => {
            if u % c1.p() == 0 {
                return Err(Error::NotAUnit(format!("{u}")));
            }
            CharOpResult::Value(c1.eval_at_unit(u))
        }
    })
}

/// The character `(a b; 0 d) -> left(a) * right(d)` of the Borel subgroup.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BCharacter {
    pub left: MulCharacter,
    pub right: MulCharacter,
}

impl BCharacter {
    pub fn new(left: MulCharacter, right: MulCharacter) -> Self {
        BCharacter { left, right }
    }

    pub fn inv(&self) -> BCharacter {
        BCharacter::new(self.left.inv(), self.right.inv())
    }

    /// Value at `(a b; 0 d)` with `a = p^va * (unit of residue ua)`, same for `d`.
    pub fn eval(&self, va: i64, ua: u32, vd: i64, ud: u32) -> FieldElement {
        self.left.eval(va, ua) * self.right.eval(vd, ud)
    }
}

impl fmt::Display for BCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (x) {}", self.left, self.right)
    }
}

impl fmt::Debug for BCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A semisimple mod-p representation of the absolute Galois group of `Q_p`
/// of dimension 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GaloisRep {
    /// `rho(r, chi) = ind(w_2^(r+1)) (x) chi`, stored canonically.
    Irred { r: u32, chi: MulCharacter },
    /// `c1 (+) c2` with `c1 <= c2`.
    SplitSum(MulCharacter, MulCharacter),
}

impl GaloisRep {
    pub fn split(a: MulCharacter, b: MulCharacter) -> GaloisRep {
        if a <= b {
            GaloisRep::SplitSum(a, b)
        } else {
            GaloisRep::SplitSum(b, a)
        }
    }

    pub fn p(&self) -> u32 {
        match self {
            GaloisRep::Irred { chi, .. } => chi.p(),
            GaloisRep::SplitSum(a, _) => a.p(),
        }
    }

    /// The determinant, read as a character of `Q_p^x`.
    pub fn det(&self) -> MulCharacter {
        match self {
            GaloisRep::Irred { r, chi } => chi.pow(2).twist_by(*r as i64 + 1),
            GaloisRep::SplitSum(a, b) => a.mul(b),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GaloisRep::Irred { r, chi } => json!({"kind": "irred", "r": r, "chi": chi.to_string()}),
            GaloisRep::SplitSum(a, b) => {
                json!({"kind": "split", "chars": [a.to_string(), b.to_string()]})
            }
        }
    }

    pub fn from_json(p: u32, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("galois representation: {m}"));
        match v["kind"].as_str() {
            Some("irred") => {
                let r = v["r"].as_u64().ok_or_else(|| bad("missing r"))?;
                let chi =
                    MulCharacter::parse(p, v["chi"].as_str().ok_or_else(|| bad("missing chi"))?)?;
                canonical_rho(r as u32, chi)
            }
            Some("split") => {
                let c = v["chars"].as_array().ok_or_else(|| bad("missing chars"))?;
                if c.len() != 2 {
                    return Err(bad("need two characters"));
                }
                let parse =
                    |x: &Value| MulCharacter::parse(p, x.as_str().ok_or_else(|| bad("bad char"))?);
                Ok(GaloisRep::split(parse(&c[0])?, parse(&c[1])?))
            }
            _ => Err(bad("kind must be irred or split")),
        }
    }
}

impl fmt::Display for GaloisRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisRep::Irred { r, chi } => write!(f, "rho({r}, {chi})"),
            GaloisRep::SplitSum(a, b) => write!(f, "{a} (+) {b}"),
        }
    }
}

/// The parameter tuples intertwined with `rho(r, chi)`.
pub fn rho_orbit(r: u32, chi: MulCharacter) -> Vec<(u32, MulCharacter)> {
    let p = chi.p();
    let m1 = -chi.field().one();
    let r2 = p - 1 - r;
    let chi2 = chi.twist_by(r as i64);
    let mut orbit = vec![
        (r, chi),
        (r, chi.times_mu(m1).unwrap()),
        (r2, chi2),
        (r2, chi2.times_mu(m1).unwrap()),
    ];
    orbit.sort();
    orbit.dedup();
    orbit
}

pub fn canonical_rho(r: u32, chi: MulCharacter) -> Result<GaloisRep> {
    if r > chi.p() - 1 {
        return Err(Error::OutOfRange(format!("r = {r} outside 0..p-1")));
    }
    let (r, chi) = rho_orbit(r, chi)[0];
    Ok(GaloisRep::Irred { r, chi })
}

/// `ind(w_2^h) (x) twist` in canonical form.
pub fn ind_omega2(h: i64, twist: MulCharacter) -> Result<GaloisRep> {
    let p = twist.p() as i64;
    let h = h.rem_euclid(p * p - 1);
    if h % (p + 1) == 0 {
        return Err(Error::ReducibleInduction(h));
    }
    let r = h % (p + 1) - 1;
    let s = (h - r - 1) / (p + 1);
    canonical_rho(r as u32, twist.twist_by(s))
}

/// An irreducible constituent of a smooth mod-p representation of `GL2(Q_p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GAtom {
    /// `chi o det`.
    OneDim(MulCharacter),
    /// `Sp (x) (chi o det)`.
    SpecialTwist(MulCharacter),
    /// The irreducible principal series induced from `left (x) right`, `left != right`.
    PrincipalSeries(BCharacter),
    /// `pi(r, 0, chi)`, stored canonically.
    Supersingular { r: u32, chi: MulCharacter },
}

impl GAtom {
    pub fn central_character(&self) -> MulCharacter {
        match self {
            GAtom::OneDim(c) | GAtom::SpecialTwist(c) => c.pow(2),
            GAtom::PrincipalSeries(b) => b.left.mul(&b.right),
            GAtom::Supersingular { r, chi } => chi.pow(2).twist_by(*r as i64),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GAtom::OneDim(c) => json!({"kind": "one_dim", "chi": c.to_string()}),
            GAtom::SpecialTwist(c) => json!({"kind": "special", "chi": c.to_string()}),
            GAtom::PrincipalSeries(b) => json!({
                "kind": "principal_series",
                "left": b.left.to_string(),
                "right": b.right.to_string(),
            }),
            GAtom::Supersingular { r, chi } => {
                json!({"kind": "supersingular", "r": r, "chi": chi.to_string()})
            }
        }
    }

    pub fn from_json(p: u32, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("GL2 atom: {m}"));
        let ch = |k: &str| MulCharacter::parse(p, v[k].as_str().ok_or_else(|| bad(k))?);
        match v["kind"].as_str() {
            Some("one_dim") => Ok(GAtom::OneDim(ch("chi")?)),
            Some("special") => Ok(GAtom::SpecialTwist(ch("chi")?)),
            Some("principal_series") => {
                let b = BCharacter::new(ch("left")?, ch("right")?);
                if b.left == b.right {
                    return Err(bad("principal series needs distinct characters"));
                }
                Ok(GAtom::PrincipalSeries(b))
            }
            Some("supersingular") => {
                let r = v["r"].as_u64().ok_or_else(|| bad("missing r"))? as u32;
                let GaloisRep::Irred { r, chi } = canonical_rho(r, ch("chi")?)? else {
                    unreachable!()
                };
                Ok(GAtom::Supersingular { r, chi })
            }
            _ => Err(bad("unknown kind")),
        }
    }
}

impl fmt::Display for GAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GAtom::OneDim(c) => write!(f, "({c}) o det"),
            GAtom::SpecialTwist(c) => write!(f, "Sp (x) ({c}) o det"),
            GAtom::PrincipalSeries(b) => write!(f, "Ind({b})"),
            GAtom::Supersingular { r, chi } => write!(f, "pi({r}, 0, {chi})"),
        }
    }
}

/// A sorted multiset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Multiset<T: Ord>(Vec<T>);

impl<T: Ord + Clone> Multiset<T> {
    pub fn new(mut items: Vec<T>) -> Self {
        items.sort();
        Multiset(items)
    }

    pub fn items(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Multiset<T>) -> Multiset<T> {
        Multiset::new(self.0.iter().chain(other.0.iter()).cloned().collect())
    }
}

pub type Gss = Multiset<GAtom>;
pub type Bss = Multiset<BAtom>;

impl Gss {
    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(GAtom::to_json).collect())
    }

    pub fn from_json(p: u32, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("GL2 semisimplification must be a list".into()))?;
        Ok(Multiset::new(
            arr.iter()
                .map(|a| GAtom::from_json(p, a))
                .collect::<Result<_>>()?,
        ))
    }
}

impl fmt::Display for Gss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The `W` of a label `Omega_chi(W)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum OmegaW {
    Dim1(MulCharacter),
    /// `rho(r, chi)`, stored canonically.
    Dim2 {
        r: u32,
        chi: MulCharacter,
    },
}

/// An irreducible constituent of a smooth representation of the Borel subgroup.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BAtom {
    BChar(BCharacter),
    OmegaLabel { central: MulCharacter, w: OmegaW },
}

impl BAtom {
    pub fn to_json(&self) -> Value {
        match self {
            BAtom::BChar(b) => json!({
                "kind": "character",
                "left": b.left.to_string(),
                "right": b.right.to_string(),
            }),
            BAtom::OmegaLabel {
                central,
                w: OmegaW::Dim1(c),
            } => json!({
                "kind": "omega",
                "central": central.to_string(),
                "w": {"dim": 1, "chi": c.to_string()},
            }),
            BAtom::OmegaLabel {
                central,
                w: OmegaW::Dim2 { r, chi },
            } => json!({
                "kind": "omega",
                "central": central.to_string(),
                "w": {"dim": 2, "r": r, "chi": chi.to_string()},
            }),
        }
    }
}

impl fmt::Display for BAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BAtom::BChar(b) => write!(f, "{b}"),
            BAtom::OmegaLabel {
                central,
                w: OmegaW::Dim1(c),
            } => write!(f, "Omega[{central}]({c})"),
            BAtom::OmegaLabel {
                central,
                w: OmegaW::Dim2 { r, chi },
            } => {
                write!(f, "Omega[{central}](rho({r}, {chi}))")
            }
        }
    }
}

impl Bss {
    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(BAtom::to_json).collect())
    }
}

impl fmt::Display for Bss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn supersingular(r: u32, chi: MulCharacter) -> GAtom {
    match canonical_rho(r, chi).expect("r in range") {
        GaloisRep::Irred { r, chi } => GAtom::Supersingular { r, chi },
        GaloisRep::SplitSum(..) => unreachable!(),
    }
}

/// Semisimplification of `pi(r, lambda, chi)`.
pub fn canonical_pi(r: u32, lambda: FieldElement, chi: MulCharacter) -> Result<Gss> {
    let p = chi.p();
    if r > p - 1 {
        return Err(Error::OutOfRange(format!("r = {r} outside 0..p-1")));
    }
    if lambda.is_zero() {
        return Ok(Multiset::new(vec![supersingular(r, chi)]));
    }
    let lambda = lambda.lift();
    let one = lambda.field().one();
    let boundary = (r == 0 || r == p - 1) && (lambda == one || lambda == -one);
    let cl = chi.times_mu(lambda)?;
    if boundary {
        return Ok(Multiset::new(vec![
            GAtom::OneDim(cl),
            GAtom::SpecialTwist(cl),
        ]));
    }
    let left = chi.times_mu(lambda.inv()?)?;
    let right = cl.twist_by(r as i64);
    Ok(Multiset::new(vec![GAtom::PrincipalSeries(
        BCharacter::new(left, right),
    )]))
}

/// The four (or fewer) parameter triples intertwined with `pi(r, 0, chi)`.
pub fn pi_supersingular_orbit(r: u32, chi: MulCharacter) -> Vec<(u32, MulCharacter)> {
    rho_orbit(r, chi)
}

pub fn restrict_atom(atom: &GAtom) -> Vec<BAtom> {
    match *atom {
        GAtom::OneDim(c) => vec![BAtom::BChar(BCharacter::new(c, c))],
        GAtom::SpecialTwist(c) => vec![BAtom::OmegaLabel {
            central: c.pow(2),
            w: OmegaW::Dim1(c),
        }],
        GAtom::PrincipalSeries(b) => vec![
            BAtom::OmegaLabel {
                central: b.left.mul(&b.right),
                w: OmegaW::Dim1(b.left),
            },
            BAtom::BChar(b),
        ],
        GAtom::Supersingular { r, chi } => vec![BAtom::OmegaLabel {
            central: chi.pow(2).twist_by(r as i64),
            w: OmegaW::Dim2 { r, chi },
        }],
    }
}

pub fn restrict_to_borel(reps: &Gss) -> Bss {
    Multiset::new(reps.items().iter().flat_map(restrict_atom).collect())
}

pub fn reconstruct_from_borel(profile: &Bss) -> Result<Gss> {
    let mut out = Vec::new();
    let mut omegas: Vec<(MulCharacter, MulCharacter)> = Vec::new();
    let mut chars = Vec::new();
    for atom in profile.items() {
        match *atom {
            BAtom::OmegaLabel {
                w: OmegaW::Dim2 { r, chi },
                central,
            } => {
                let atom = supersingular(r, chi);
                if atom.central_character() != central {
                    return Err(Error::InconsistentProfile(format!(
                        "central character {central} does not match rho({r}, {chi})"
                    )));
                }
                out.push(atom);
            }
            BAtom::OmegaLabel {
                central,
                w: OmegaW::Dim1(c),
            } => omegas.push((central, c)),
            BAtom::BChar(b) => chars.push(b),
        }
    }
    for b in chars {
        if b.left == b.right {
            out.push(GAtom::OneDim(b.left));
            continue;
        }
        let want = (b.left.mul(&b.right), b.left);
        let pos = omegas.iter().position(|&o| o == want).ok_or_else(|| {
            Error::InconsistentProfile(format!("character {b} has no matching Omega label"))
        })?;
        omegas.remove(pos);
        out.push(GAtom::PrincipalSeries(b));
    }
    for (central, c) in omegas {
        if central != c.pow(2) {
            return Err(Error::InconsistentProfile(format!(
                "Omega[{central}]({c}) is not the restriction of a special representation"
            )));
        }
        out.push(GAtom::SpecialTwist(c));
    }
    Ok(Multiset::new(out))
}

/// The two Borel semisimplifications sharing `Omega_chi(W)`: the parabolic
/// induction of `W (x) chi W^-1` and the dual of the `psi`-limit of `D#(W)`.
pub fn ghost_identities(w: MulCharacter, chi: MulCharacter) -> (Bss, Bss) {
    let omega = BAtom::OmegaLabel {
        central: chi,
        w: OmegaW::Dim1(w),
    };
    let induced = BCharacter::new(w, chi.mul(&w.inv()));
    let dual = BCharacter::new(chi.twist_by(1).mul(&w.inv()), w.twist_by(-1));
    (
        Multiset::new(vec![omega, BAtom::BChar(induced)]),
        Multiset::new(vec![omega, BAtom::BChar(dual)]),
    )
}

/// Characters `w^r * mu(y)` with `y` ranging over `units`.
pub fn characters_over(p: u32, units: &[FieldElement]) -> Vec<MulCharacter> {
    let mut out = Vec::new();
    for r in 0..(p - 1) as i64 {
        for &u in units {
            out.push(MulCharacter::new(r, u).unwrap());
        }
    }
    out.sort();
    out
}

/// Every canonical atom with characters drawn from `chars`.
pub fn all_atoms(p: u32, chars: &[MulCharacter]) -> Vec<GAtom> {
    let mut atoms = Vec::new();
    for &c in chars {
        atoms.push(GAtom::OneDim(c));
        atoms.push(GAtom::SpecialTwist(c));
        for &d in chars {
            if c != d {
                atoms.push(GAtom::PrincipalSeries(BCharacter::new(c, d)));
            }
        }
        for r in 0..p {
            atoms.push(supersingular(r, c));
        }
    }
    atoms.sort();
    atoms.dedup();
    atoms
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::kl(p).unwrap()
    }

    fn ch(p: u32, r: i64, y: i64) -> MulCharacter {
        MulCharacter::new(r, f(p).from_int(y)).unwrap()
    }

    #[test]
    fn character_examples() {
        let p = 5;
        assert_eq!(ch(p, 1, 2).mul(&ch(p, 3, 3)), ch(p, 0, 6));
        assert_eq!(
            MulCharacter::mu(f(p).from_int(2)).unwrap().eval_at_p(),
            f(p).from_int(2)
        );
        assert_eq!(ch(p, 3, 1).eval_at_unit(2), f(p).from_int(3));
        let c = MulCharacter::parse(5, "w^3*mu(2+1*t)").unwrap();
        assert_eq!(MulCharacter::parse(5, &c.to_string()).unwrap(), c);
        assert_eq!(MulCharacter::parse(5, "w").unwrap(), ch(5, 1, 1));
        assert_eq!(MulCharacter::parse(5, "1").unwrap(), ch(5, 0, 1));
    }

    #[test]
    fn rho_examples() {
        let p = 5;
        assert_eq!(
            canonical_rho(3, ch(p, 1, 1)).unwrap(),
            canonical_rho(1, ch(p, 0, 1)).unwrap()
        );
        let GaloisRep::Irred { r, .. } = canonical_rho(3, ch(p, 1, 1)).unwrap() else {
            panic!()
        };
        assert_eq!(r, 1);
        assert_eq!(rho_orbit(2, ch(p, 0, 2)).len(), 4);
    }

    #[test]
    fn rho_orbits_are_closed_and_canonical_form_is_idempotent() {
        for p in [2u32, 3, 5] {
            let chars = characters_over(p, &f(p).units());
            for &c in &chars {
                for r in 0..p {
                    let orbit = rho_orbit(r, c);
                    assert!(orbit.len() <= 4);
                    let canon = canonical_rho(r, c).unwrap();
                    for &(r2, c2) in &orbit {
                        assert_eq!(canonical_rho(r2, c2).unwrap(), canon);
                    }
                    let GaloisRep::Irred { r: cr, chi } = canon else {
                        panic!()
                    };
                    assert_eq!(canonical_rho(cr, chi).unwrap(), canon);
                }
            }
        }
    }

    #[test]
    fn ind_examples() {
        let p = 5;
        let one = MulCharacter::trivial(p);
        for r in 0..p {
            assert_eq!(
                ind_omega2(r as i64 + 1, one).unwrap(),
                canonical_rho(r, one).unwrap()
            );
        }
        assert_eq!(
            ind_omega2(8, one).unwrap(),
            canonical_rho(1, ch(p, 1, 1)).unwrap()
        );
        assert!(matches!(
            ind_omega2(6, one),
            Err(Error::ReducibleInduction(6))
        ));
    }

    #[test]
    fn ind_twist_shift_and_frobenius_invariance() {
        let p = 5i64;
        let one = MulCharacter::trivial(5);
        for h in 1..(p * p - 1) {
            if h % (p + 1) == 0 {
                continue;
            }
            for s in 0..(p - 1) {
                let lhs = ind_omega2(h, ch(5, s, 1)).unwrap();
                let rhs = ind_omega2(h + s * (p + 1), one).unwrap();
                assert_eq!(lhs, rhs, "h={h} s={s}");
            }
            assert_eq!(ind_omega2(h, one).unwrap(), ind_omega2(p * h, one).unwrap());
        }
    }

    #[test]
    fn pi_examples() {
        let p = 5;
        let one = MulCharacter::trivial(p);
        let fl = f(p);
        assert_eq!(
            canonical_pi(0, fl.one(), one).unwrap(),
            Multiset::new(vec![GAtom::OneDim(one), GAtom::SpecialTwist(one)])
        );
        assert_eq!(
            canonical_pi(1, fl.zero(), ch(p, 1, 1)).unwrap(),
            canonical_pi(3, fl.zero(), ch(p, 2, 1)).unwrap()
        );
        assert_eq!(
            canonical_pi(2, fl.from_int(2), one).unwrap(),
            Multiset::new(vec![GAtom::PrincipalSeries(BCharacter::new(
                ch(p, 0, 3),
                ch(p, 2, 2)
            ))])
        );
    }

    #[test]
    fn restriction_round_trips() {
        let p = 3;
        let chars = characters_over(p, &f(p).units());
        let atoms = all_atoms(p, &chars);
        for a in &atoms {
            for b in &atoms {
                let g = Multiset::new(vec![*a, *b]);
                assert_eq!(reconstruct_from_borel(&restrict_to_borel(&g)).unwrap(), g);
            }
        }
        let c = ch(p, 1, 2);
        let lone = Multiset::new(vec![BAtom::OmegaLabel {
            central: c.pow(2),
            w: OmegaW::Dim1(c),
        }]);
        assert_eq!(
            reconstruct_from_borel(&lone).unwrap(),
            Multiset::new(vec![GAtom::SpecialTwist(c)])
        );
        let orphan = Multiset::new(vec![BAtom::BChar(BCharacter::new(c, ch(p, 0, 1)))]);
        assert!(matches!(
            reconstruct_from_borel(&orphan),
            Err(Error::InconsistentProfile(_))
        ));
    }

    #[test]
    fn ghost_examples() {
        let p = 5;
        let one = MulCharacter::trivial(p);
        let (a, b) = ghost_identities(one, one);
        assert!(b
            .items()
            .contains(&BAtom::BChar(BCharacter::new(ch(p, 1, 1), ch(p, -1, 1)))));
        let omega = |s: &Bss| {
            s.items()
                .iter()
                .copied()
                .find(|x| matches!(x, BAtom::OmegaLabel { .. }))
        };
        assert_eq!(omega(&a), omega(&b));
        let w = ch(p, 2, 3);
        let chi = ch(p, 1, 4);
        let (a, _) = ghost_identities(w, chi);
        assert!(a
            .items()
            .contains(&BAtom::BChar(BCharacter::new(w, chi.mul(&w.inv())))));
    }

    #[test]
    fn central_characters_of_profiles() {
        let p = 5;
        let fl = f(p);
        for chi in characters_over(p, &fl.units()) {
            for r in 0..p {
                for lambda in fl.elements().into_iter().filter(|x| x.in_prime_field()) {
                    for atom in canonical_pi(r, lambda, chi).unwrap().items() {
                        let want = match atom {
                            GAtom::Supersingular { r, chi } => chi.pow(2).twist_by(*r as i64),
                            GAtom::PrincipalSeries(b) => b.left.mul(&b.right),
                            GAtom::OneDim(c) | GAtom::SpecialTwist(c) => c.pow(2),
                        };
                        for b in restrict_atom(atom) {
                            if let BAtom::OmegaLabel { central, .. } = b {
                                assert_eq!(central, want);
                            }
                        }
                    }
                }
            }
        }
    }
}
