//! Arithmetic in F_p, F_{p^2} and finite-precision Q_p(pi).

use modp_langlands::algebra::{solve_unit_quadratic, Field, PadicScalar};

fn main() -> modp_langlands::Result<()> {
    let f = Field::kl(5)?;
    let t = f.gen();
    println!("F_25 = F_5[t]/(t^2 - {})", f.nonresidue());
    println!("t * t = {}", t * t);
    println!("frobenius(t) = {}", t.frobenius());
    println!("order of 1+t = {}", (f.one() + t).order()?);

    for c in [0, 2, 1] {
        let [a, b] = solve_unit_quadratic(f.from_int(c))?;
        println!("roots of x^2 - {c}x + 1: {a}, {b}");
    }

    // a_p = 25/3 in Q_5, known modulo 5^12
    let a = PadicScalar::from_rational(25, 3, 5, 1, 12)?;
    println!("25/3 = {a}, valuation {}", a.valuation()?);
    let b = PadicScalar::from_int(10, 5, 1, 12)?;
    let q = a.div(&b)?;
    println!("(25/3) / 10 = {q}");

    // pi with pi^2 = 5
    let pi = PadicScalar::uniformizer(5, 2, 20)?;
    println!("pi^2 = {}, valuation {}", pi.mul(&pi)?, pi.valuation()?);
    Ok(())
}
