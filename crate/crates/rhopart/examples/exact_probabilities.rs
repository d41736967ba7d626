//! Shape probabilities three ways: fixed tail masses, the product
//! formula, and Monte Carlo.
//!
//!     cargo run --example exact_probabilities

use rhopart::laws::{
    shape_law_fixed_h, shape_probability_fixed_h, shape_probability_monte_carlo,
    shape_probability_product, PMethod,
};
use rhopart::{constrained_compositions, ConstraintSeq, FrequencyModel, RandomStream};

fn main() -> rhopart::Result<()> {
    let rho = ConstraintSeq::ones();

    // Fixed tail masses: closed form vs exhaustive path enumeration.
    let h = [0.5, 0.25, 0.125, 0.0625];
    let law = shape_law_fixed_h(&rho, &h, 4)?;
    println!("shape law of [4] under H = {h:?}:");
    for (shape, p_paths) in &law {
        let p_closed = shape_probability_fixed_h(shape, &rho, &h)?;
        println!("  {shape:<8} paths {p_paths:.6}  closed form {p_closed:.6}");
    }
    let total: f64 = law.values().sum();
    println!("  total {total:.12}\n");

    // Uniform residual fractions: p(lambda) = prod over blocks of
    // 1/(tail sum); check the product formula against Monte Carlo.
    let model = FrequencyModel::parse("iid:uniform")?;
    let mut stream = RandomStream::new(11);
    println!("uniform residuals on [4]: product formula vs Monte Carlo");
    for shape in constrained_compositions(4, &rho) {
        let exact = shape_probability_product(&shape, &rho, &model)?;
        let mc = shape_probability_monte_carlo(
            &shape,
            &rho,
            &model,
            200_000,
            &mut stream,
            PMethod::ShapeFrequency,
        )?;
        println!(
            "  {shape:<8} product {exact:.6}  monte carlo {:.6} +- {:.6}  (z = {:.2})",
            mc.value,
            mc.std_error,
            mc.z_against(exact)
        );
    }
    Ok(())
}
