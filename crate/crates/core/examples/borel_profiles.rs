//! Restriction of GL2(Qp) semisimplifications to the Borel subgroup and
//! reconstruction from the restriction.

use modp_langlands::algebra::Field;
use modp_langlands::reps::{
    canonical_pi, ghost_identities, reconstruct_from_borel, restrict_to_borel, MulCharacter,
};

fn main() -> modp_langlands::Result<()> {
    let p = 5;
    let f = Field::kl(p)?;
    let chi = MulCharacter::parse(p, "w^2")?;
    for (r, lambda) in [(1, 0), (2, 3), (0, 1), (4, 4)] {
        let pi = canonical_pi(r, f.from_int(lambda), chi)?;
        let profile = restrict_to_borel(&pi);
        let back = reconstruct_from_borel(&profile)?;
        println!("pi({r}, {lambda}, {chi}) ~ {pi}");
        println!("  restricted to B: {profile}");
        println!("  reconstructed:   {back} (matches: {})", back == pi);
    }
    let (ind, dual) = ghost_identities(MulCharacter::parse(p, "w*mu(2)")?, chi);
    println!("induction: {ind}");
    println!("dual:      {dual}");
    Ok(())
}
