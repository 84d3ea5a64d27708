//! The operators phi, psi and gamma_a on truncated Laurent series over F_{p^2}.

use modp_langlands::algebra::{Field, ZpDigits};
use modp_langlands::laurent::{one_plus_x_pow, LaurentSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> modp_langlands::Result<()> {
    let p = 3;
    let f = Field::kl(p)?;
    let prec = 60;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let x = |k| LaurentSeries::x_pow(f, k, prec);
    println!("phi(X) = {}", x(1).phi());
    println!("psi(X^{}) = {}", p - 1, x(p as i64 - 1).psi()?);
    println!("psi(X^-1) = {}", x(-1).psi()?);

    let g = LaurentSeries::random(f, -1, 12, &mut rng);
    println!("g = {g}");
    println!(
        "psi(phi(g)) agrees with g: {}",
        g.phi().psi()?.agrees_with(&g)
    );

    // f = sum (1+X)^i phi(y_i)
    let h = LaurentSeries::random(f, 0, 30, &mut rng);
    let parts = h.psi_decompose()?;
    let mut back = LaurentSeries::zero(f, h.prec());
    for (i, y) in parts.iter().enumerate() {
        let twist = one_plus_x_pow(f, &ZpDigits::from_i64(i as i64, p, 8), 0, h.prec())?;
        back = back.add(&twist.mul(&y.phi()));
    }
    println!("decomposition reconstructs h: {}", back.agrees_with(&h));

    let a = ZpDigits::from_i64(2, p, 16);
    let ga = x(1).gamma_act(&a)?;
    println!("gamma_2(X) = {}", ga.truncate(6));
    println!(
        "gamma commutes with phi: {}",
        x(1).phi().gamma_act(&a)?.agrees_with(&ga.phi())
    );
    Ok(())
}
