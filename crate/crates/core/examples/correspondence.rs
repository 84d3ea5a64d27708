//! The mod-p correspondence between 2-dimensional Galois representations and
//! GL2(Qp) semisimplifications, with canonical forms of rho(r, chi).

use modp_langlands::algebra::Field;
use modp_langlands::corresp::{galois_to_gl2, gl2_to_galois};
use modp_langlands::reps::{canonical_rho, ind_omega2, rho_orbit, GaloisRep, MulCharacter};

fn main() -> modp_langlands::Result<()> {
    let p = 5;
    let f = Field::kl(p)?;
    let w = MulCharacter::omega(p, 1);

    println!("orbit of rho(3, w):");
    for (r, chi) in rho_orbit(3, w) {
        println!("  rho({r}, {chi})");
    }
    println!("ind(w_2^7) = {}", ind_omega2(7, MulCharacter::trivial(p))?);

    let reps = [
        canonical_rho(1, MulCharacter::trivial(p))?,
        GaloisRep::split(w.times_mu(f.from_int(2))?, MulCharacter::mu(f.from_int(3))?),
        GaloisRep::split(w, MulCharacter::trivial(p)),
    ];
    for v in reps {
        let pi = galois_to_gl2(&v)?;
        let back = gl2_to_galois(&pi)?;
        println!("{v}  ->  {pi}  ->  {back}");
    }
    Ok(())
}
