//! Flawed reference states, their Bloch vectors, the `S` matrix and the
//! virtual X-basis ensemble.
//!
//! ```text
//! cargo run --example reference_states -- 0.126
//! ```

use mdiqkd::prelude::*;

fn main() -> mdiqkd::Result<()> {
    let delta: f64 = std::env::args().nth(1).map_or(Ok(0.126), |s| s.parse()).expect("delta in radians");
    let deltas = ModulationErrors::uniform(delta)?;

    println!("delta = {delta}");
    for s in Setting::ALL {
        let st = make_reference_state(s, &deltas);
        let b = bloch_vector(&st);
        println!(
            "  {:>3}: amplitudes ({:+.6}, {:+.6})  bloch (I,X,Z) = ({:.6}, {:+.6}, {:+.6})",
            s.label(),
            st.amp0(),
            st.amp1(),
            b.s_i,
            b.s_x,
            b.s_z
        );
    }

    let analysis = ReferenceAnalysis::new(ReferenceStates::symmetric(&deltas))?;
    println!("\ncond(S) = {:.4}", analysis.cond_s);
    println!("S rows (I,I) (I,X) (I,Z) (X,I) (X,X) (X,Z) (Z,I) (Z,X) (Z,Z):");
    for pair in SettingPair::ALL {
        let row: Vec<String> = (0..9).map(|c| format!("{:+.4}", analysis.s_matrix[(pair.index(), c)])).collect();
        println!("  {pair:>8}  {}", row.join(" "));
    }

    let v = &analysis.virtual_ensemble;
    println!("\nvirtual outcomes (0,0) and (1,1):");
    for k in 0..2 {
        println!("  p = {:.6}  s = {:?}", v.p_vir[k], v.s_vir[k].map(|x| (x * 1e6).round() / 1e6));
    }
    println!("\nf_obj (Omega_ref = f_obj . Y):");
    for (pair, f) in SettingPair::ALL.iter().zip(analysis.f_obj) {
        println!("  {pair:>8}  {f:+.6}");
    }
    Ok(())
}
