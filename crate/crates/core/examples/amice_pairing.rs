//! Measures on Z_p, the Amice transform, and the invariant pairing between
//! step functions and the measures attached to plus-towers.

use modp_langlands::algebra::Field;
use modp_langlands::amice::{
    amice_transform, borel_matrix, induced_characters, integrate, inverse_amice, measure_psi,
    step_action, MeasureZp, StepFunction,
};
use modp_langlands::reps::MulCharacter;
use modp_langlands::tower::{
    star_action, BorelElement, CharModel, Flavor, GeneratorClass, SampleBudget, Tower,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> modp_langlands::Result<()> {
    let p = 3;
    let f = Field::kl(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let nu = MeasureZp::random(f, 2, &mut rng);
    let a = amice_transform(&nu);
    println!("A(nu) = {a}");
    println!("inverse recovers nu: {}", inverse_amice(&a, 2)? == nu);
    println!(
        "A(psi nu) = psi A(nu): {}",
        amice_transform(&measure_psi(&nu)?).agrees_with(&a.psi()?)
    );

    let model = CharModel::new(1, f.from_int(2), Flavor::Plus)?;
    let central = MulCharacter::parse(p, "w")?;
    let depth = 6;
    let t = Tower::random(model, central, depth, 60, f.zero(), &mut rng)?;
    let chars = induced_characters(&t)?;
    let budget = SampleBudget {
        psi_total: 1,
        max_shift: 1,
        digits: 12,
    };
    let step = StepFunction::random(f, 1, 1, &mut rng);
    for class in GeneratorClass::ALL {
        let g = BorelElement::random(p, class, budget, &mut rng);
        let (a, b, d) = borel_matrix(&g)?;
        let gf = step_action(&a, &b, &d, &step, &chars)?;
        let gt = star_action(&g, &t, depth - (-g.j).max(0) as usize)?;
        match integrate(&gf, &gt) {
            Ok(lhs) => println!(
                "{:>13}: <g f, g nu> = {lhs}, <f, nu> = {}",
                class.name(),
                integrate(&step, &t)?
            ),
            Err(e) => println!("{:>13}: skipped ({e})", class.name()),
        }
    }
    Ok(())
}
