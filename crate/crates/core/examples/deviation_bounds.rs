//! Tabulates the deviation bounds and shows how a probability measured on
//! an actual state brackets the one on its reference.

use mdiqkd::prelude::*;

fn main() -> mdiqkd::Result<()> {
    let fidelities = [1.0, 0.999_999_5, 0.9999, 0.99, 0.9];
    print!("{:>6}", "x");
    for y in fidelities {
        print!("  {:>21}", format!("y={y}"));
    }
    println!();
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        print!("{x:>6.2}");
        for y in fidelities {
            print!("  [{:.6}, {:.6}]", g_lower(x, y)?, g_upper(x, y)?);
        }
        println!();
    }

    // A side channel of weight eps costs fidelity sqrt(1 - eps).
    let x = 1.2e-3;
    for eps in [0.0f64, 1e-8, 1e-6, 1e-4] {
        let y = (1.0 - eps).sqrt();
        println!(
            "eps = {eps:<6e}  yield {x:e} on the actual state -> reference in [{:.6e}, {:.6e}]",
            g_lower(x, y)?,
            g_upper(x, y)?
        );
    }
    Ok(())
}
