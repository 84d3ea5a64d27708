//! The Borel star-action on psi-towers of D#(w^r mu_y) and the residue map.

use modp_langlands::algebra::Field;
use modp_langlands::reps::MulCharacter;
use modp_langlands::tower::{
    residue_character, star_action, tower_residue, BorelElement, CharModel, Flavor, GeneratorClass,
    SampleBudget, Tower,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> modp_langlands::Result<()> {
    let p = 5;
    let f = Field::kl(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = CharModel::new(2, f.from_int(3), Flavor::Sharp)?;
    let central = MulCharacter::parse(p, "w*mu(2)")?;
    let depth = 8;
    let t = Tower::random(model, central, depth, 60, f.from_int(4), &mut rng)?;
    println!(
        "tower of depth {depth}, valid: {}, res = {}",
        t.is_valid(),
        tower_residue(&t)?
    );

    let (chars, _) = residue_character(&model, &central);
    println!("res transforms through {chars}");
    let budget = SampleBudget {
        psi_total: 3,
        max_shift: 2,
        digits: 16,
    };
    for class in GeneratorClass::ALL {
        let g = BorelElement::random(p, class, budget, &mut rng);
        let gt = star_action(&g, &t, 1)?;
        let lhs = tower_residue(&gt)?;
        let rhs = g.eval_character(&chars)? * tower_residue(&t)?;
        println!(
            "{:>13}: res(g*y) = {lhs}, chi(g) res(y) = {rhs}",
            class.name()
        );
    }
    Ok(())
}
