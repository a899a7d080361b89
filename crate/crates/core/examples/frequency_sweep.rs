//! Secret bits per second against repetition rate, when faster modulation
//! leaks more side-channel information.
//!
//! ```text
//! cargo run --release --example frequency_sweep -- configs/frequency_scan.toml
//! ```

use mdiqkd::prelude::*;
use mdiqkd::sweep::{EpsFrequencyMap, FrequencyConfig, RangeSpec, ScanParams};

fn main() -> mdiqkd::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => SweepConfig::from_path(path.as_ref())?,
        None => SweepConfig {
            scan: ScanParams { eps: vec![0.0], delta: vec![0.0] },
            frequency: Some(FrequencyConfig {
                range: RangeSpec::new(0.1, 4.0, 0.1)?,
                loss_db: 4.0,
                eps_map: EpsFrequencyMap::default(),
            }),
            ..Default::default()
        },
    };
    let sweep = run_frequency_sweep(&cfg)?;
    let per = sweep.points.len() / sweep.curves.len();

    for (summary, rows) in sweep.curves.iter().zip(sweep.points.chunks(per)) {
        println!("delta = {}, loss = {} dB", summary.delta, sweep.loss_db);
        let peak = summary.best_rate_per_second;
        for p in rows.iter().step_by((rows.len() / 20).max(1)) {
            let rps = p.key_rate_per_second.unwrap_or(0.0);
            let bar = "#".repeat((40.0 * rps / peak).round().max(0.0) as usize);
            println!("  {:>5.2} GHz  eps {:.1e}  {:>10.3e} /s  {bar}", p.frequency_ghz.unwrap(), p.eps, rps);
        }
        println!("  peak at {:.2} GHz: {:.4e} bits/s\n", summary.best_frequency_ghz, peak);
    }
    Ok(())
}
