//! Decrement matrices: the per-block transition rows behind the product
//! formula, with their normalization and Pascal-recursion invariants.
//!
//!     cargo run --example decrement_matrices

use rhopart::laws::decrement_matrix;

fn main() -> rhopart::Result<()> {
    // Uniform residuals, establishment count 1: flat rows 1/n.
    let m = decrement_matrix(1, 1.0, 1.0, 8)?;
    println!("rho_k = 1, beta(1,1): rows are flat");
    for n in 1..=5u64 {
        println!("  n={n}: {:?}", m.row(n));
    }

    // A bigger establishment count shifts the support: entries vanish
    // below rho_k, and undersized rows sit at the convention value.
    let m = decrement_matrix(3, 2.0, 3.0, 10)?;
    println!("\nrho_k = 3, beta(2,3):");
    for n in 1..=6u64 {
        let row: Vec<String> = m.row(n).iter().map(|v| format!("{v:.4}")).collect();
        println!("  n={n}: [{}]", row.join(", "));
    }
    println!(
        "\nmax |row sum - 1| = {:.2e},  max Pascal residual = {:.2e}",
        m.max_row_sum_deviation(),
        m.max_pascal_residual()
    );
    Ok(())
}
