//! Reduction mod p of crystalline representations V_{k,a_p}.

use modp_langlands::algebra::PadicScalar;
use modp_langlands::corresp::{
    breuil_modp_datum, reduce_crystalline, Coefficient, CrystallineParams,
};
use num_rational::Ratio;

fn show(p: u32, k: i64, a_p: Coefficient) {
    let label = match &a_p {
        Coefficient::Exact(a) => format!("a_p = {a}"),
        Coefficient::ValuationOnly(v) => format!("val(a_p) = {v}"),
    };
    match reduce_crystalline(&CrystallineParams { p, k, a_p }) {
        Ok(r) => println!(
            "k = {k}, {label}: case {} -> {} / {} {:?}",
            r.case, r.galois, r.gl2, r.notes
        ),
        Err(e) => println!("k = {k}, {label}: {e}"),
    }
}

fn main() -> modp_langlands::Result<()> {
    let p = 5;
    let int = |n| Coefficient::Exact(PadicScalar::from_int(n, p, 1, 40).unwrap());
    show(p, 4, int(5));
    show(p, 7, int(25));
    show(p, 8, int(15));
    show(p, 12, int(5));
    show(p, 7, Coefficient::ValuationOnly(Ratio::from_integer(1)));
    show(p, 7, Coefficient::ValuationOnly(Ratio::from_integer(2)));
    // ramified a_p = 2 pi with pi^2 = 5
    let a = PadicScalar::from_pi_digits(p, 2, &[(1, 2)], 40)?;
    show(p, 11, Coefficient::Exact(a));
    for k in 2..=p as i64 + 1 {
        println!("breuil datum k = {k}: {}", breuil_modp_datum(k, p)?);
    }
    Ok(())
}
