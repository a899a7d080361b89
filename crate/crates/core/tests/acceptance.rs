//! Acceptance suite. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use mdiqkd::prelude::*;
use mdiqkd::sweep::{EpsFrequencyMap, FrequencyConfig, RangeSpec, ScanParams};
use nalgebra::{Complex, DMatrix, DVector, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

// Tolerances.
const AC1_TARGET_DB: f64 = 8.0;
const AC1_WINDOW_DB: f64 = 1.5;
const AC1_GRID_DB: f64 = 0.1;
const AC1_MAX_RUNTIME: Duration = Duration::from_secs(10);
const AC2_RATE_FACTOR: f64 = 2.0;
const AC2_CUTOFF_DB: f64 = 1.0;
const AC4_LOSS_DB: f64 = 4.0;
const AC5_CONFIGS: usize = 500;
const AC5_TOL: f64 = 1e-10;
const AC6_TRIALS: usize = 10_000;
const AC6_SLACK: f64 = 1e-10;
const AC6_GRID_TOL: f64 = 1e-12;
const AC7_TOL: f64 = 1e-9;
const AC8_TOL: f64 = 1e-12;
const AC9_TOL: f64 = 1e-12;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn reference_config(eps: Vec<f64>, delta: Vec<f64>, start: f64, stop: f64, step: f64) -> SweepConfig {
    SweepConfig {
        channel: ChannelParams::reference(),
        scan: ScanParams { eps, delta },
        loss: RangeSpec::new(start, stop, step).unwrap(),
        ..Default::default()
    }
}

fn ac1_cutoff() -> Outcome {
    let started = Instant::now();
    let sweep = run_loss_sweep(&reference_config(vec![1e-6], vec![0.0], 0.0, 40.0, AC1_GRID_DB)).unwrap();
    let elapsed = started.elapsed();
    let c = &sweep.curves[0];
    let Some(cut) = c.cutoff_loss_db else {
        return outcome(false, "no positive rate at any loss");
    };
    let pass = (cut - AC1_TARGET_DB).abs() <= AC1_WINDOW_DB && !c.revival && !c.censored && elapsed < AC1_MAX_RUNTIME;
    outcome(pass, format!("cutoff {cut:.1} dB (target {AC1_TARGET_DB} ± {AC1_WINDOW_DB}), runtime {elapsed:.2?}"))
}

fn ac2_robustness() -> Outcome {
    let sweep = run_loss_sweep(&reference_config(vec![0.0, 1e-9, 1e-8], vec![0.0, 0.126], 0.0, 70.0, 0.1)).unwrap();
    let n_eps = 3;
    let mut worst_ratio: f64 = 1.0;
    let mut worst_gap: f64 = 0.0;
    let mut pass = true;
    for e in 0..n_eps {
        let ideal = &sweep.curves[e];
        let flawed = &sweep.curves[n_eps + e];
        let per = sweep.points.len() / sweep.curves.len();
        let rows0 = &sweep.points[e * per..(e + 1) * per];
        let rows1 = &sweep.points[(n_eps + e) * per..(n_eps + e + 1) * per];
        for (a, b) in rows0.iter().zip(rows1).filter(|(a, _)| a.loss_db <= 5.0 + 1e-9) {
            let ratio = b.key_rate() / a.key_rate();
            worst_ratio = if (ratio.ln()).abs() > worst_ratio.ln().abs() { ratio } else { worst_ratio };
            if !(1.0 / AC2_RATE_FACTOR..=AC2_RATE_FACTOR).contains(&ratio) {
                pass = false;
            }
        }
        match (ideal.cutoff_loss_db, flawed.cutoff_loss_db) {
            (Some(c0), Some(c1)) if !ideal.censored && !flawed.censored => {
                worst_gap = worst_gap.max((c0 - c1).abs());
                pass &= (c0 - c1).abs() < AC2_CUTOFF_DB;
            }
            _ => pass = false,
        }
    }
    outcome(pass, format!("worst rate ratio {worst_ratio:.3} on [0, 5] dB, worst cutoff gap {worst_gap:.1} dB"))
}

fn ac3_ordering() -> Outcome {
    let eps = vec![0.0, 1e-8, 1e-7, 1e-6];
    let sweep = run_loss_sweep(&reference_config(eps.clone(), vec![0.0, 0.126], 0.0, 60.0, 0.1)).unwrap();
    let per = sweep.points.len() / sweep.curves.len();
    let mut checked = 0;
    let mut violations = 0;
    for curves in sweep.points.chunks(per * eps.len()) {
        let rows: Vec<&[KeyRatePoint]> = curves.chunks(per).collect();
        for pair in rows.windows(2) {
            for (hi, lo) in pair[0].iter().zip(pair[1]) {
                if hi.key_rate() > 0.0 && lo.key_rate() > 0.0 {
                    checked += 1;
                    if !(hi.key_rate() > lo.key_rate()) {
                        violations += 1;
                    }
                }
            }
        }
    }
    outcome(checked > 0 && violations == 0, format!("{checked} comparisons, {violations} violations"))
}

fn ac4_interior_maximum() -> Outcome {
    let cfg = SweepConfig {
        scan: ScanParams { eps: vec![0.0], delta: vec![0.0, 0.126] },
        frequency: Some(FrequencyConfig {
            range: RangeSpec::new(0.1, 4.0, 0.01).unwrap(),
            loss_db: AC4_LOSS_DB,
            eps_map: EpsFrequencyMap::default(),
        }),
        ..Default::default()
    };
    let sweep = run_frequency_sweep(&cfg).unwrap();
    let pass = sweep.curves.iter().all(|c| c.interior);
    let best: Vec<String> = sweep
        .curves
        .iter()
        .map(|c| format!("delta={} peak {:.2} GHz", c.delta, c.best_frequency_ghz))
        .collect();
    outcome(pass, format!("loss {AC4_LOSS_DB} dB: {}", best.join(", ")))
}

fn random_channel(rng: &mut ChaCha8Rng) -> ChannelParams {
    ChannelParams {
        eta_d: rng.random_range(0.01..=1.0),
        p_d: rng.random_range(0.0..1e-3),
        e_d: rng.random_range(0.0..0.1),
        loss_db: rng.random_range(0.0..40.0),
        ..ChannelParams::reference()
    }
}

fn random_deltas(rng: &mut ChaCha8Rng) -> ModulationErrors {
    let mut d = || rng.random_range(-0.3..=0.3);
    ModulationErrors::new(d(), d(), d()).unwrap()
}

fn ac5_route_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..AC5_CONFIGS {
        let refs = ReferenceStates::from_deltas(&random_deltas(&mut rng), &random_deltas(&mut rng));
        let ch = random_channel(&mut rng);
        let analysis = ReferenceAnalysis::new(refs).unwrap();
        let povm = build_bsm_povm(&ch).unwrap();
        let (y, _) = simulate_yields(&analysis, &ch).unwrap();
        let diff = (omega_ref_matrix(&analysis, &y) - omega_ref_direct(&analysis.virtual_ensemble, &povm)).abs();
        worst = worst.max(diff);
    }
    outcome(worst < AC5_TOL, format!("{AC5_CONFIGS} configs, max |matrix - direct| = {worst:.2e}"))
}

type C = Complex<f64>;

fn random_ket(rng: &mut ChaCha8Rng, d: usize) -> DVector<C> {
    let v = DVector::from_fn(d, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v / C::from(n)
}

fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<C> {
    DMatrix::from_fn(d, d, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .qr()
        .q()
}

/// Random `0 ≤ M ≤ 1`. A quarter of the draws are rank-one projectors onto
/// a vector in span{A, R}, where the bounds are tight.
fn random_effect(rng: &mut ChaCha8Rng, a: &DVector<C>, r: &DVector<C>) -> DMatrix<C> {
    let d = a.len();
    let kind = rng.random_range(0..4);
    if kind == 0 {
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let m = a * C::from(phi.cos()) + r * C::from(phi.sin());
        let n = m.norm();
        if n > 1e-6 {
            let m = m / C::from(n);
            return &m * m.adjoint();
        }
    }
    let u = random_unitary(rng, d);
    let eig = DVector::from_fn(d, |_, _| {
        let l: f64 = rng.random_range(0.0..=1.0);
        if kind == 1 { l.round() } else { l }
    });
    let diag = DMatrix::from_diagonal(&eig.map(C::from));
    &u * diag * u.adjoint()
}

fn expect(m: &DMatrix<C>, v: &DVector<C>) -> f64 {
    (v.adjoint() * m * v)[(0, 0)].re
}

fn ac6_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut failures = 0;
    let mut tightest: f64 = f64::INFINITY;
    for _ in 0..AC6_TRIALS {
        let d = rng.random_range(2..=8);
        let a = random_ket(&mut rng, d);
        // Half of the draws are near-copies of A, probing high fidelity.
        let r = if rng.random_bool(0.5) {
            let t = 10f64.powf(rng.random_range(-4.0..0.0));
            let v = &a + random_ket(&mut rng, d) * C::from(t);
            let n = v.norm();
            v / C::from(n)
        } else {
            random_ket(&mut rng, d)
        };
        let m = random_effect(&mut rng, &a, &r);
        let x = expect(&m, &a).clamp(0.0, 1.0);
        let y = (a.adjoint() * &r)[(0, 0)].norm().min(1.0);
        let target = expect(&m, &r);
        let (lo, hi) = (g_lower(x, y).unwrap(), g_upper(x, y).unwrap());
        if !(lo <= target + AC6_SLACK && target <= hi + AC6_SLACK) {
            failures += 1;
        }
        tightest = tightest.min((target - lo).min(hi - target));
    }

    // −g_lower and g_upper concave in x; g_lower nondecreasing, g_upper nonincreasing in y.
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let mut grid_failures = 0;
    for &y in grid.iter().step_by(5) {
        for (i, &x1) in grid.iter().enumerate() {
            for &x2 in &grid[i..] {
                let mid = 0.5 * (x1 + x2);
                let (l1, l2, lm) = (g_lower(x1, y).unwrap(), g_lower(x2, y).unwrap(), g_lower(mid, y).unwrap());
                let (u1, u2, um) = (g_upper(x1, y).unwrap(), g_upper(x2, y).unwrap(), g_upper(mid, y).unwrap());
                if lm > 0.5 * (l1 + l2) + AC6_GRID_TOL || um < 0.5 * (u1 + u2) - AC6_GRID_TOL {
                    grid_failures += 1;
                }
            }
        }
    }
    for &x in &grid {
        for w in grid.windows(2) {
            if g_lower(x, w[1]).unwrap() < g_lower(x, w[0]).unwrap() - AC6_GRID_TOL
                || g_upper(x, w[1]).unwrap() > g_upper(x, w[0]).unwrap() + AC6_GRID_TOL
            {
                grid_failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && grid_failures == 0,
        format!(
            "{AC6_TRIALS} trials, {failures} sandwich violations (closest margin {tightest:.1e}); {grid_failures} grid violations"
        ),
    )
}

fn ac7_ideal_limit() -> Outcome {
    let analysis = ReferenceAnalysis::new(ReferenceStates::ideal()).unwrap();
    let eps = SideChannelParams::uniform(0.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for eta_d in [0.145, 1.0] {
        let ch = ChannelParams { eta_d, p_d: 0.0, e_d: 0.0, ..ChannelParams::reference() };
        for i in 0..=120 {
            let r = simulate_point(&analysis, &ch.with_loss(0.5 * i as f64), &eps, &KeyRateOptions::default()).unwrap();
            worst = worst.max(r.e_zz).max(r.e_xx).max((r.key_rate - r.y_zz).abs());
            points += 1;
        }
    }
    outcome(worst < AC7_TOL, format!("{points} points, max of e_ZZ, e_XX, |R - Y_ZZ| = {worst:.2e}"))
}

fn ac8_eps_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let zero = SideChannelParams::uniform(0.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut configs = Vec::new();
    for delta in [0.0, 0.126] {
        for i in 0..=80 {
            let refs = ReferenceStates::symmetric(&ModulationErrors::uniform(delta).unwrap());
            configs.push((refs, ChannelParams::reference().with_loss(0.5 * i as f64)));
        }
    }
    for _ in 0..200 {
        let refs = ReferenceStates::from_deltas(&random_deltas(&mut rng), &random_deltas(&mut rng));
        configs.push((refs, random_channel(&mut rng)));
    }
    for (refs, ch) in &configs {
        let analysis = ReferenceAnalysis::new(*refs).unwrap();
        let (y, _) = simulate_yields(&analysis, ch).unwrap();
        let upper = omega_ref_upper(&analysis.f_obj, &y, &zero).unwrap();
        worst = worst.max((upper - omega_ref_matrix(&analysis, &y)).abs());
    }
    outcome(worst < AC8_TOL, format!("{} configs, max |upper - matrix| = {worst:.2e}", configs.len()))
}

fn ac9_channel() -> Outcome {
    let mut worst_herm: f64 = 0.0;
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for &eta_d in &[0.01, 0.145, 1.0] {
        for &p_d in &[0.0, 6.02e-6, 1e-3] {
            for &e_d in &[0.0, 0.015, 0.1] {
                for i in 0..=60 {
                    let p = ChannelParams { eta_d, p_d, e_d, loss_db: i as f64, ..ChannelParams::reference() };
                    let povm = build_bsm_povm(&p).unwrap();
                    let m = povm.matrix();
                    worst_herm = worst_herm.max((m - m.transpose()).amax());
                    let (lo, hi) = povm.eigenvalue_range();
                    range = (range.0.min(lo), range.1.max(hi));
                }
            }
        }
    }
    let ideal = ChannelParams::ideal();
    let lib = build_bsm_povm(&ideal).unwrap();
    let oracle = fock_povm(OracleChannel { eta_arm: ideal.arm_transmittance(), p_d: 0.0, e_d: 0.0 });
    let oracle_diff = max_abs_diff(&oracle, lib.matrix());
    let psi = mdiqkd::pauli::psi_minus();
    let analytic: Matrix4<f64> = psi * psi.transpose() * 0.5;
    let analytic_diff = (lib.matrix() - analytic).amax();
    let pass = worst_herm == 0.0
        && range.0 >= -AC9_TOL
        && range.1 <= 1.0 + AC9_TOL
        && oracle_diff < AC9_TOL
        && analytic_diff < AC9_TOL;
    outcome(
        pass,
        format!(
            "asymmetry {worst_herm:.1e}, eigenvalues in [{:.1e}, {:.3}], ideal vs Fock oracle {oracle_diff:.1e}, vs ½|ψ−><ψ−| {analytic_diff:.1e}",
            range.0, range.1
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, &str, fn() -> Outcome); 9] = [
        ("AC1", "cutoff at eps=1e-6", ac1_cutoff),
        ("AC2", "robustness to modulation errors", ac2_robustness),
        ("AC3", "ordering in eps", ac3_ordering),
        ("AC4", "interior maximum of R*f", ac4_interior_maximum),
        ("AC5", "omega_ref route equivalence", ac5_route_equivalence),
        ("AC6", "deviation-bound sandwich", ac6_sandwich),
        ("AC7", "ideal limit", ac7_ideal_limit),
        ("AC8", "eps = 0 collapse", ac8_eps_collapse),
        ("AC9", "relay POVM sanity", ac9_channel),
    ];
    println!();
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let o = check();
        println!("[{}] {id} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
