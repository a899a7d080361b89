//! Walks through the estimation chain for one operating point, printing
//! every intermediate quantity.
//!
//! ```text
//! cargo run --example phase_error -- <loss_db> <eps> <delta>
//! ```

use mdiqkd::prelude::*;

fn arg(i: usize, default: f64) -> f64 {
    std::env::args().nth(i).map_or(default, |s| s.parse().expect("numeric argument"))
}

fn main() -> mdiqkd::Result<()> {
    let (loss, eps, delta) = (arg(1, 4.0), arg(2, 1e-6), arg(3, 0.0));
    let analysis = ReferenceAnalysis::new(ReferenceStates::symmetric(&ModulationErrors::uniform(delta)?))?;
    let channel = ChannelParams::reference().with_loss(loss);
    let side = SideChannelParams::uniform(eps)?;

    let (yields, _) = simulate_yields(&analysis, &channel)?;
    let povm = build_bsm_povm(&channel)?;

    let omega_ref = omega_ref_matrix(&analysis, &yields);
    let direct = omega_ref_direct(&analysis.virtual_ensemble, &povm);
    let upper_ref = omega_ref_upper(&analysis.f_obj, &yields, &side)?;
    let dvir = delta_vir_lower(&side);
    let omega = omega_upper(upper_ref, dvir)?;
    let zeta = zeta_obs(&yields);
    let e_zz = bit_error_rate(yields.zz())?;
    let e_xx = phase_error_rate(omega, zeta)?;

    println!("loss {loss} dB, eps {eps:e}, delta {delta}");
    println!("  Omega_ref       {omega_ref:.6e}  (direct trace {direct:.6e})");
    println!("  Omega_ref^U     {upper_ref:.6e}");
    println!("  delta_vir^L     {dvir:.12}");
    println!("  Omega^U         {omega:.6e}");
    println!("  zeta_obs        {zeta:.6e}");
    println!("  e_ZZ            {e_zz:.6}");
    println!("  e_XX            {e_xx:.6}");

    let r = estimate(&EstimationInputs { analysis, yields, eps: side }, &KeyRateOptions::default())?;
    println!("  key rate        {:.6e} per pulse", r.key_rate);
    Ok(())
}
