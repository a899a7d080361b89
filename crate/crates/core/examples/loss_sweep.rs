//! Key rate against total loss for several side-channel budgets, with the
//! loss at which each curve reaches zero.
//!
//! ```text
//! cargo run --release --example loss_sweep -- configs/loss_scan.toml
//! ```

use mdiqkd::prelude::*;

fn main() -> mdiqkd::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => SweepConfig::from_path(path.as_ref())?,
        None => SweepConfig::default(),
    };
    let sweep = run_loss_sweep(&cfg)?;

    println!("{:>8} {:>6} {:>10}", "eps", "delta", "cutoff/dB");
    for c in &sweep.curves {
        let cut = c.cutoff_loss_db.map_or("-".into(), |l| format!("{l:.1}"));
        println!("{:>8.0e} {:>6} {:>10}{}", c.eps, c.delta, cut, if c.censored { "+" } else { "" });
    }

    // Rate at a few losses for the first delta.
    let per = sweep.points.len() / sweep.curves.len();
    println!("\nkey rate per pulse, delta = {}:", cfg.scan.delta[0]);
    for loss in [0.0, 2.0, 4.0, 6.0, 8.0] {
        print!("{loss:>5} dB");
        for curve in sweep.points.chunks(per).take(cfg.scan.eps.len()) {
            let r = curve.iter().find(|p| (p.loss_db - loss).abs() < 1e-9).map_or(f64::NAN, |p| p.key_rate());
            print!("  {r:.3e}");
        }
        println!();
    }
    Ok(())
}
