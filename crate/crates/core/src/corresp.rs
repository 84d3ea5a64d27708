//! The mod-p correspondence between 2-dimensional semisimple Galois
//! representations and semisimple `GL2(Q_p)` representations, in both
//! directions, and the reduction table for crystalline representations
//! `V_{k,a_p}`.

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::algebra::{solve_unit_quadratic, Field, FieldElement, PadicScalar};
use crate::error::{Error, Result};
use crate::reps::{
    canonical_pi, ind_omega2, restrict_to_borel, BAtom, GAtom, GaloisRep, Gss, MulCharacter,
};

/// The representative of `n mod (p-1)` in `0..=p-2`.
pub fn bracket(n: i64, p: u32) -> u32 {
    n.rem_euclid(p as i64 - 1) as u32
}

/// `c1 = mu(lambda) w^(r+1) chi`, `c2 = mu(1/lambda) chi`.
fn factor(c1: &MulCharacter, c2: &MulCharacter) -> Result<(u32, FieldElement, MulCharacter)> {
    let p = c1.p();
    let r = bracket(c1.twist() as i64 - c2.twist() as i64 - 1, p);
    let lambda = (c1.unit() / c2.unit()).sqrt().ok_or_else(|| {
        Error::OutOfRange(format!(
            "{c1} / {c2} has no square root of its unramified part over F_{p}^2"
        ))
    })?;
    let chi = c2.times_mu(lambda)?;
    Ok((r, lambda, chi))
}

/// `pi(r, lambda, chi) (+) pi([p-3-r], 1/lambda, w^(r+1) chi)` for the
/// factorization read from `(c1, c2)` in that order.
pub fn split_to_gl2(c1: &MulCharacter, c2: &MulCharacter) -> Result<Gss> {
    let p = c1.p();
    let (r, lambda, chi) = factor(c1, c2)?;
    let first = canonical_pi(r, lambda, chi)?;
    let second = canonical_pi(
        bracket(p as i64 - 3 - r as i64, p),
        lambda.inv()?,
        chi.twist_by(r as i64 + 1),
    )?;
    Ok(first.union(&second))
}

pub fn galois_to_gl2(v: &GaloisRep) -> Result<Gss> {
    match v {
        GaloisRep::Irred { r, chi } => canonical_pi(*r, chi.field().zero(), *chi),
        GaloisRep::SplitSum(a, b) => split_to_gl2(a, b),
    }
}

/// Inverse of [`galois_to_gl2`], read off the finite-dimensional part of
/// the Borel restriction: `chi1 (x) chi2` comes from `w chi2 (+) chi1`.
pub fn gl2_to_galois(pi: &Gss) -> Result<GaloisRep> {
    let candidate = match pi.items() {
        [GAtom::Supersingular { r, chi }] => GaloisRep::Irred { r: *r, chi: *chi },
        _ => {
            let profile = restrict_to_borel(pi);
            let b = profile
                .items()
                .iter()
                .find_map(|a| match a {
                    BAtom::BChar(b) => Some(*b),
                    _ => None,
                })
                .ok_or_else(|| {
                    Error::NotInImage(format!("{pi} has no character in its Borel restriction"))
                })?;
            GaloisRep::split(b.right.twist_by(1), b.left)
        }
    };
    match galois_to_gl2(&candidate) {
        Ok(back) if back == *pi => Ok(candidate),
        Ok(back) => Err(Error::NotInImage(format!(
            "{pi} would come from {candidate}, which corresponds to {back}"
        ))),
        Err(e) => Err(Error::NotInImage(format!("{pi}: {e}"))),
    }
}

/// `pi(k-2, 0, 1)` for `2 <= k <= p+1`.
pub fn breuil_modp_datum(k: i64, p: u32) -> Result<Gss> {
    if !(2..=p as i64 + 1).contains(&k) {
        return Err(Error::OutOfRange(format!("k = {k} outside 2..={}", p + 1)));
    }
    let f = Field::kl(p)?;
    canonical_pi(k as u32 - 2, f.zero(), MulCharacter::trivial(p))
}

/// How `a_p` is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Exact(PadicScalar),
    /// Only the valuation; branches that need a residue are undetermined.
    ValuationOnly(Ratio<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystallineParams {
    pub p: u32,
    pub k: i64,
    pub a_p: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub galois: GaloisRep,
    pub gl2: Gss,
    pub case: &'static str,
    pub notes: Vec<String>,
}

impl ReductionResult {
    pub fn to_json(&self) -> Value {
        json!({
            "galois": self.galois.to_json(),
            "gl2": self.gl2.to_json(),
            "case": self.case,
            "notes": self.notes,
        })
    }
}

/// What is known about a valuation: `lo <= v`, and `v = lo` when exact.
#[derive(Clone, Copy, Debug)]
struct ValInfo {
    lo: Ratio<i64>,
    exact: bool,
}

impl ValInfo {
    fn of(x: &PadicScalar) -> Self {
        match x.valuation() {
            Ok(v) => ValInfo { lo: v, exact: true },
            Err(_) => ValInfo {
                lo: Ratio::new(x.prec().max(x.val_lower_bound_pi()), x.e() as i64),
                exact: false,
            },
        }
    }

    fn undetermined(&self, what: &str) -> Error {
        let bound = if self.exact { "=" } else { ">=" };
        Error::UndeterminedValuation(format!("val {bound} {} does not decide {what}", self.lo))
    }

    fn lt(&self, t: Ratio<i64>, what: &str) -> Result<bool> {
        if self.lo >= t {
            Ok(false)
        } else if self.exact {
            Ok(true)
        } else {
            Err(self.undetermined(what))
        }
    }

    fn gt(&self, t: Ratio<i64>, what: &str) -> Result<bool> {
        if self.lo > t {
            Ok(true)
        } else if self.exact {
            Ok(false)
        } else {
            Err(self.undetermined(what))
        }
    }
}

fn int(n: i64) -> Ratio<i64> {
    Ratio::from_integer(n)
}

fn split(c1: (i64, FieldElement), c2: (i64, FieldElement)) -> Result<GaloisRep> {
    Ok(GaloisRep::split(
        MulCharacter::new(c1.0, c1.1)?,
        MulCharacter::new(c2.0, c2.1)?,
    ))
}

fn need_exact<'a>(a: &'a Coefficient, what: &str) -> Result<&'a PadicScalar> {
    match a {
        Coefficient::Exact(x) => Ok(x),
        Coefficient::ValuationOnly(v) => Err(Error::UndeterminedValuation(format!(
            "val = {v} alone does not determine {what}"
        ))),
    }
}

/// `x / p`.
fn over_p(x: &PadicScalar) -> PadicScalar {
    x.shift(-(x.e() as i64))
}

pub fn reduce_crystalline(params: &CrystallineParams) -> Result<ReductionResult> {
    let CrystallineParams { p, k, ref a_p } = *params;
    let kl = Field::kl(p)?;
    let triv = MulCharacter::trivial(p);
    let pk = p as i64;
    if k < 2 {
        return Err(Error::OutOfTableRange(format!("weight k = {k} < 2")));
    }
    let is_zero = matches!(a_p, Coefficient::Exact(x) if x.is_exact_zero());
    let val = match a_p {
        Coefficient::Exact(x) if is_zero => ValInfo {
            lo: int(i64::MAX / 4),
            exact: false,
        },
        Coefficient::Exact(x) => ValInfo::of(x),
        Coefficient::ValuationOnly(v) => ValInfo {
            lo: *v,
            exact: true,
        },
    };
    if val.exact && val.lo <= int(0) {
        return Err(Error::OutOfRange(format!(
            "a_p must have positive valuation, got {}",
            val.lo
        )));
    }
    if is_zero && k > pk + 1 {
        return Err(Error::OutOfTableRange(format!(
            "a_p = 0 is only covered for k <= {}",
            pk + 1
        )));
    }
    let mut notes = Vec::new();
    let (galois, case) = if k <= pk + 1 {
        (ind_omega2(k - 1, triv)?, "1")
    } else if k == pk + 2 {
        if val.lt(int(1), "case 2")? {
            (ind_omega2(2, triv)?, "2a")
        } else {
            let c = if val.lo > int(1) {
                kl.zero()
            } else {
                over_p(need_exact(a_p, "the residue of a_p/p")?).reduce_integral()?
            };
            let [l1, l2] = solve_unit_quadratic(c)?;
            (split((1, l1), (1, l2))?, "2b")
        }
    } else if k <= 2 * pk {
        if val.lt(int(1), "case 3")? {
            (ind_omega2(k - pk, triv)?, "3a")
        } else if val.gt(int(1), "case 3")? {
            (ind_omega2(k - 1, triv)?, "3c")
        } else {
            let c = over_p(need_exact(a_p, "the residue of a_p/p")?).residue_reduce()?;
            let lambda = c.lift() * kl.from_int(k - 1);
            if k == pk + 3 && (lambda == kl.one() || lambda == -kl.one()) {
                notes.push(format!(
                    "a lattice reduces to (w, *; 0, 1) (x) w mu({lambda}) with * non-trivial and peu ramifie"
                ));
            }
            (split((k - 2, lambda), (1, lambda.inv()?))?, "3b")
        }
    } else if k == 2 * pk + 1 {
        if p == 2 {
            return Err(Error::OutOfTableRange(
                "k = 2p+1 is not covered for p = 2".into(),
            ));
        }
        let three_halves = Ratio::new(3, 2);
        let (s, sv) = match a_p {
            Coefficient::Exact(x) => {
                let s = x.mul(x)?.add(&PadicScalar::from_int(
                    pk as i128,
                    p,
                    x.e(),
                    x.prec().max(2 * x.e() as i64),
                )?)?;
                let sv = ValInfo::of(&s);
                (Some(s), sv)
            }
            Coefficient::ValuationOnly(v) if *v != Ratio::new(1, 2) => (
                None,
                ValInfo {
                    lo: (*v * 2).min(int(1)),
                    exact: true,
                },
            ),
            Coefficient::ValuationOnly(_) => (
                None,
                ValInfo {
                    lo: int(1),
                    exact: false,
                },
            ),
        };
        if sv.lt(three_halves, "case 4")? {
            (ind_omega2(2, triv)?, "4a")
        } else {
            let x = need_exact(a_p, "the residue of (a_p^2+p)/(2p a_p)")?;
            let two_p_a = over_p(x)
                .shift(2 * x.e() as i64)
                .mul(&PadicScalar::from_int(2, p, x.e(), x.prec())?)?;
            let c = s.unwrap().div(&two_p_a)?.reduce_integral()?;
            let [l1, l2] = solve_unit_quadratic(c)?;
            (split((1, l1), (1, l2))?, "4b")
        }
    } else {
        let bound = int((k - 2) / (pk - 1));
        if !val.gt(bound, "case 5")? {
            return Err(Error::OutOfTableRange(format!(
                "k = {k} >= 2p+2 needs val(a_p) > {bound}"
            )));
        }
        if (k - 1) % (pk + 1) != 0 {
            (ind_omega2(k - 1, triv)?, "5a")
        } else {
            let i = (-kl.one()).sqrt().expect("-1 is a square in F_p^2");
            let t = (k - 1) / (pk + 1);
            (split((t, i), (t, -i))?, "5b")
        }
    };
    let gl2 = galois_to_gl2(&galois)?;
    Ok(ReductionResult {
        galois,
        gl2,
        case,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::{canonical_rho, characters_over};

    fn ch(p: u32, r: i64, y: i64) -> MulCharacter {
        MulCharacter::new(r, Field::kl(p).unwrap().from_int(y)).unwrap()
    }

    fn exact(p: u32, k: i64, num: i128) -> ReductionResult {
        let a = PadicScalar::from_int(num, p, 1, 40).unwrap();
        reduce_crystalline(&CrystallineParams {
            p,
            k,
            a_p: Coefficient::Exact(a),
        })
        .unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(2, 5), 2);
        assert_eq!(bracket(-1, 5), 3);
        assert_eq!(bracket(5 - 3, 5), 2);
    }

    #[test]
    fn correspondence_examples() {
        let p = 5;
        let f = Field::kl(p).unwrap();
        let triv = MulCharacter::trivial(p);
        let rho = canonical_rho(1, triv).unwrap();
        let GaloisRep::Irred { r, chi } = rho else {
            unreachable!()
        };
        let gss = galois_to_gl2(&rho).unwrap();
        assert_eq!(gss.items(), &[GAtom::Supersingular { r, chi }]);
        assert_eq!(gl2_to_galois(&gss).unwrap(), rho);

        let v = GaloisRep::split(ch(p, 1, 2), ch(p, 0, 3));
        let want = canonical_pi(0, f.from_int(2), triv)
            .unwrap()
            .union(&canonical_pi(2, f.from_int(3), MulCharacter::omega(p, 1)).unwrap());
        assert_eq!(galois_to_gl2(&v).unwrap(), want);
        assert_eq!(split_to_gl2(&ch(p, 0, 3), &ch(p, 1, 2)).unwrap(), want);
        assert_eq!(gl2_to_galois(&want).unwrap(), v);

        let lone = Gss::new(vec![GAtom::OneDim(triv)]);
        assert!(matches!(gl2_to_galois(&lone), Err(Error::NotInImage(_))));
    }

    #[test]
    fn exhaustive_round_trip_p5() {
        let p = 5;
        let units: Vec<_> = Field::new(p, 1)
            .unwrap()
            .units()
            .into_iter()
            .map(|u| u.lift())
            .collect();
        let chars = characters_over(p, &units);
        let mut reps = Vec::new();
        for &c in &chars {
            for r in 0..p {
                reps.push(canonical_rho(r, c).unwrap());
            }
            for &d in &chars {
                reps.push(GaloisRep::split(c, d));
            }
        }
        reps.sort();
        reps.dedup();
        for v in reps {
            let Ok(gss) = galois_to_gl2(&v) else { continue };
            assert_eq!(gl2_to_galois(&gss).unwrap(), v, "{v}");
            let want = v.det().twist_by(-1);
            for atom in gss.items() {
                assert_eq!(atom.central_character(), want, "{v} -> {atom}");
            }
            if let GaloisRep::SplitSum(a, b) = v {
                assert_eq!(split_to_gl2(&b, &a).unwrap(), gss);
            }
        }
    }

    #[test]
    fn table_examples() {
        let p = 5;
        let r = exact(p, 4, 5);
        assert_eq!(r.case, "1");
        assert_eq!(
            r.galois,
            canonical_rho(2, MulCharacter::trivial(p)).unwrap()
        );
        assert_eq!(
            r.gl2.items(),
            &[GAtom::Supersingular {
                r: 2,
                chi: MulCharacter::trivial(p)
            }]
        );

        let r = exact(p, 7, 25);
        assert_eq!(
            (r.case, r.galois),
            ("2b", GaloisRep::split(ch(p, 1, 2), ch(p, 1, 3)))
        );

        let r = exact(p, 9, 5);
        assert_eq!(
            (r.case, r.galois),
            ("3b", GaloisRep::split(ch(p, 3, 3), ch(p, 1, 2)))
        );

        let r = exact(p, 31, 5i128.pow(8));
        assert_eq!(
            (r.case, r.galois),
            ("5b", GaloisRep::split(ch(p, 1, 2), ch(p, 1, 3)))
        );

        let r = exact(p, 11, 5);
        assert_eq!(r.case, "4a");
        assert_eq!(r.galois, ind_omega2(2, MulCharacter::trivial(p)).unwrap());

        let a = PadicScalar::from_int(5, p, 1, 40).unwrap();
        let err = reduce_crystalline(&CrystallineParams {
            p,
            k: 12,
            a_p: Coefficient::Exact(a),
        });
        assert!(matches!(err, Err(Error::OutOfTableRange(_))));
    }

    #[test]
    fn ramified_coefficients_reach_the_half_integer_branches() {
        let p = 5;
        let half = PadicScalar::uniformizer(p, 2, 20).unwrap();
        let params = |k| CrystallineParams {
            p,
            k,
            a_p: Coefficient::Exact(half.clone()),
        };
        assert_eq!(reduce_crystalline(&params(7)).unwrap().case, "2a");
        assert_eq!(reduce_crystalline(&params(9)).unwrap().case, "3a");
        // pi^2 = p, so a_p = 2 pi with a_p^2 + p = 5p has valuation 2
        let a = PadicScalar::from_pi_digits(p, 2, &[(1, 2)], 20).unwrap();
        let r = reduce_crystalline(&CrystallineParams {
            p,
            k: 11,
            a_p: Coefficient::Exact(a),
        })
        .unwrap();
        assert_eq!(r.case, "4b");
        assert_eq!(r.galois, GaloisRep::split(ch(p, 1, 2), ch(p, 1, 3)));
        assert_eq!(reduce_crystalline(&params(11)).unwrap().case, "4a");
        // a_p = (2 + pi) pi: (a_p^2 + p)/(2p a_p) reduces to 1
        let a = PadicScalar::from_pi_digits(p, 2, &[(1, 2), (2, 1)], 20).unwrap();
        let r = reduce_crystalline(&CrystallineParams {
            p,
            k: 11,
            a_p: Coefficient::Exact(a),
        })
        .unwrap();
        let [l1, l2] = solve_unit_quadratic(Field::kl(p).unwrap().one()).unwrap();
        let w = |l| MulCharacter::new(1, l).unwrap();
        assert_eq!((r.case, r.galois), ("4b", GaloisRep::split(w(l1), w(l2))));
    }

    #[test]
    fn valuation_only_mode() {
        let p = 5;
        let q = |k, n, d| {
            reduce_crystalline(&CrystallineParams {
                p,
                k,
                a_p: Coefficient::ValuationOnly(Ratio::new(n, d)),
            })
        };
        assert_eq!(q(7, 3, 2).unwrap().case, "2b");
        assert_eq!(q(9, 2, 1).unwrap().case, "3c");
        assert_eq!(q(11, 1, 1).unwrap().case, "4a");
        assert!(matches!(q(9, 1, 1), Err(Error::UndeterminedValuation(_))));
        assert!(matches!(q(11, 1, 2), Err(Error::UndeterminedValuation(_))));
        assert!(matches!(q(7, 0, 1), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn isolated_extension_note() {
        let p = 5;
        // k = 8: lambda = (a_p/p) * 7 = 2 (a_p/p); a_p/p = 3 gives lambda = 1
        let r = exact(p, 8, 15);
        assert_eq!(r.case, "3b");
        assert_eq!(r.notes.len(), 1);
        assert!(exact(p, 9, 5).notes.is_empty());
    }

    #[test]
    fn breuil_datum_matches_case_one() {
        for p in [3u32, 5, 7] {
            assert!(breuil_modp_datum(1, p).is_err());
            for k in 2..=p as i64 + 1 {
                let zero = PadicScalar::from_int(0, p, 1, 20).unwrap();
                let r = reduce_crystalline(&CrystallineParams {
                    p,
                    k,
                    a_p: Coefficient::Exact(zero),
                })
                .unwrap();
                assert_eq!(r.gl2, breuil_modp_datum(k, p).unwrap());
            }
        }
    }
}
