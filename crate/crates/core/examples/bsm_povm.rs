//! The relay's `|psi->` POVM element, its Pauli transmission rates and the
//! yields of every setting pair.
//!
//! ```text
//! cargo run --example bsm_povm -- 4.0
//! ```

use mdiqkd::prelude::*;

fn main() -> mdiqkd::Result<()> {
    let loss: f64 = std::env::args().nth(1).map_or(Ok(4.0), |s| s.parse()).expect("loss in dB");
    let channel = ChannelParams::reference().with_loss(loss);
    let povm = build_bsm_povm(&channel)?;

    println!("{channel:?}");
    println!("arm transmittance {:.6}", channel.arm_transmittance());
    println!("M (basis 00, 01, 10, 11):{}", povm.matrix());
    let (lo, hi) = povm.eigenvalue_range();
    println!("eigenvalues in [{lo:.3e}, {hi:.6e}]");

    let q = transmission_rates(&povm);
    println!("\nq_(l,l'):");
    for (i, name) in ["II", "IX", "IZ", "XI", "XX", "XZ", "ZI", "ZX", "ZZ"].iter().enumerate() {
        println!("  {name}  {:+.6e}", q.q[i]);
    }

    let analysis = ReferenceAnalysis::new(ReferenceStates::symmetric(&ModulationErrors::uniform(0.126)?))?;
    let (y, clamps) = reference_yields(&analysis.s_matrix, &q);
    println!("\nyields, delta = 0.126 (clamps: {clamps}):");
    for pair in SettingPair::ALL {
        println!("  {pair:>8}  {:.6e}", y.y[pair.index()]);
    }
    Ok(())
}
