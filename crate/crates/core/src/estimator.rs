//! Phase-error estimation and the asymptotic key rate.
//!
//! The pipeline for one parameter point is
//!
//! 1. `Ω_ref = f_obj · Y` with `f_obj = P^vir S^vir S⁻¹` (reference states only),
//! 2. `Ω_ref^U` by bounding each term with the deviation bounds, anchored at
//!    `δ^L = √(1-ε)` per setting pair,
//! 3. `Ω^U = g_upper(Ω_ref^U, δ_vir^L)`,
//! 4. `e_XX = Ω^U / ζ_obs`, and the key rate from `e_XX` and `e_ZZ`.
//!
//! Yields `Y_{jα,sβ}` are conditional success probabilities given the setting
//! pair. The virtual quantities (`Ω`, `Ω_ref`) are joint probabilities over
//! the uniformly random Z-basis bit values, so the matching denominator is
//! `ζ_obs = (1/4) Σ_{j,s} Y_{jZ,sZ}`.

use serde::{Deserialize, Serialize};

use crate::channel::{build_bsm_povm, reference_yields, transmission_rates, BsmPovm, ChannelParams, YieldTable};
use crate::error::{check_unit, Error, Result};
use crate::gbound::{g_lower, g_upper};
use crate::pauli::{
    build_s_matrix, virtual_from_references, Matrix9, ReferenceStates, SettingPair, VirtualEnsemble,
};

/// Estimation is refused when `cond(S)` exceeds this.
pub const COND_CEILING: f64 = 1e8;

/// Reconciliation efficiency used throughout the published simulations.
pub const DEFAULT_F_EC: f64 = 1.16;

/// Side-channel weights `ε_{jα,sβ}` in setting-pair row order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideChannelParams {
    eps: [f64; 9],
}

impl SideChannelParams {
    pub fn new(eps: [f64; 9]) -> Result<Self> {
        for (pair, e) in SettingPair::ALL.iter().zip(eps) {
            check_unit(&format!("eps{pair}"), e)?;
        }
        Ok(Self { eps })
    }

    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new([eps; 9])
    }

    pub fn get(&self, pair: SettingPair) -> f64 {
        self.eps[pair.index()]
    }

    pub fn as_array(&self) -> &[f64; 9] {
        &self.eps
    }

    /// Fidelity anchors `δ^L = √(1-ε)`.
    pub fn fidelity_anchors(&self) -> [f64; 9] {
        self.eps.map(|e| (1.0 - e).sqrt())
    }
}

/// Everything that depends only on the reference states: `S`, `S⁻¹`, the
/// virtual ensemble and `f_obj`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceAnalysis {
    pub refs: ReferenceStates,
    pub s_matrix: Matrix9,
    pub s_inverse: Matrix9,
    pub cond_s: f64,
    pub virtual_ensemble: VirtualEnsemble,
    pub f_obj: [f64; 9],
}

impl ReferenceAnalysis {
    pub fn new(refs: ReferenceStates) -> Result<Self> {
        Self::with_ceiling(refs, COND_CEILING)
    }

    pub fn with_ceiling(refs: ReferenceStates, ceiling: f64) -> Result<Self> {
        let s_matrix = build_s_matrix(&refs);
        let cond_s = condition_number(&s_matrix);
        if !(cond_s.is_finite() && cond_s <= ceiling) {
            return Err(Error::IllConditioned { cond: cond_s, ceiling });
        }
        let s_inverse = s_matrix
            .try_inverse()
            .ok_or(Error::IllConditioned { cond: f64::INFINITY, ceiling })?;
        let virtual_ensemble = virtual_from_references(&refs)?;
        let f_obj = f_obj_from_factors(&virtual_ensemble, &s_inverse);
        Ok(Self { refs, s_matrix, s_inverse, cond_s, virtual_ensemble, f_obj })
    }

    /// `P^vir S^vir S⁻¹` recomputed from the stored factors.
    pub fn recompute_f_obj(&self) -> [f64; 9] {
        f_obj_from_factors(&self.virtual_ensemble, &self.s_inverse)
    }
}

fn f_obj_from_factors(v: &VirtualEnsemble, s_inverse: &Matrix9) -> [f64; 9] {
    // Row vector P^vir S^vir (length 9), then times S⁻¹.
    let mut weighted = [0.0; 9];
    for k in 0..2 {
        for (w, s) in weighted.iter_mut().zip(v.s_vir[k]) {
            *w += v.p_vir[k] * s;
        }
    }
    let mut f = [0.0; 9];
    for (col, out) in f.iter_mut().enumerate() {
        *out = (0..9).map(|r| weighted[r] * s_inverse[(r, col)]).sum();
    }
    f
}

/// 2-norm condition number `σ_max/σ_min`.
pub fn condition_number(m: &Matrix9) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationInputs {
    pub analysis: ReferenceAnalysis,
    pub yields: YieldTable,
    pub eps: SideChannelParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyRateOptions {
    pub f_ec: f64,
    /// Multiplies the rate by `p_ZA · p_ZB` when set.
    #[serde(default)]
    pub sifting_prefactor: Option<f64>,
}

impl Default for KeyRateOptions {
    fn default() -> Self {
        Self { f_ec: DEFAULT_F_EC, sifting_prefactor: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub omega_ref: f64,
    pub omega_ref_upper: f64,
    pub delta_vir_lower: f64,
    pub omega_upper: f64,
    pub zeta_obs: f64,
    pub y_zz: f64,
    pub e_zz: f64,
    pub e_xx: f64,
    pub key_rate: f64,
    pub cond_s: f64,
    /// Clamps beyond floating-point dust encountered along the way.
    pub clamp_events: usize,
}

impl EstimationResult {
    /// Re-checks the result invariants; returns a description of the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let fields = [
            ("omega_ref", self.omega_ref),
            ("omega_ref_upper", self.omega_ref_upper),
            ("delta_vir_lower", self.delta_vir_lower),
            ("omega_upper", self.omega_upper),
            ("zeta_obs", self.zeta_obs),
            ("e_zz", self.e_zz),
            ("e_xx", self.e_xx),
            ("key_rate", self.key_rate),
            ("cond_s", self.cond_s),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(format!("{name} is not finite ({v})"));
        }
        if self.key_rate < 0.0 {
            return Err(format!("negative key rate {}", self.key_rate));
        }
        if self.omega_ref > self.omega_ref_upper + 1e-12 {
            return Err(format!(
                "omega_ref {} exceeds its upper bound {}",
                self.omega_ref, self.omega_ref_upper
            ));
        }
        if !(0.0..=1.0).contains(&self.e_zz) || !(0.0..=1.0).contains(&self.e_xx) {
            return Err(format!("error rates out of range (e_zz {}, e_xx {})", self.e_zz, self.e_xx));
        }
        Ok(())
    }
}

/// `Ω_ref` by direct trace of the POVM against the virtual operators.
pub fn omega_ref_direct(v: &VirtualEnsemble, povm: &BsmPovm) -> f64 {
    (0..2).map(|k| povm.expectation(&v.unnormalized_operator(k))).sum()
}

/// `Ω_ref = f_obj · Y`.
pub fn omega_ref_matrix(analysis: &ReferenceAnalysis, yields: &YieldTable) -> f64 {
    analysis.f_obj.iter().zip(yields.y).map(|(f, y)| f * y).sum()
}

/// Upper bound on `Ω_ref` from actual-state yields and side-channel budgets.
///
/// Terms with `f > 0` use `g_upper`, terms with `f < 0` use `g_lower`;
/// `f = 0` terms contribute nothing and are skipped. Floored at 0.
pub fn omega_ref_upper(f_obj: &[f64; 9], yields: &YieldTable, eps: &SideChannelParams) -> Result<f64> {
    let anchors = eps.fidelity_anchors();
    let mut total = 0.0;
    for ((f, y), anchor) in f_obj.iter().zip(yields.y).zip(anchors) {
        if *f > 0.0 {
            total += f * g_upper(y, anchor)?;
        } else if *f < 0.0 {
            total += f * g_lower(y, anchor)?;
        }
    }
    Ok(total.max(0.0))
}

/// `δ_vir^L = (1/4) Σ_{j,s} √(1 - ε_{jZ,sZ})`.
pub fn delta_vir_lower(eps: &SideChannelParams) -> f64 {
    let anchors = eps.fidelity_anchors();
    0.25 * SettingPair::ZZ_ROWS.iter().map(|&r| anchors[r]).sum::<f64>()
}

/// `Ω^U = g_upper(Ω_ref^U, δ_vir^L)`; `Ω_ref^U` above 1 is clamped with a warning.
pub fn omega_upper(omega_ref_upper: f64, delta_vir_lower: f64) -> Result<f64> {
    if omega_ref_upper.is_nan() {
        return Err(Error::InvalidInput("omega_ref_upper is NaN".into()));
    }
    let x = if omega_ref_upper > 1.0 {
        log::warn!("omega_ref_upper = {omega_ref_upper} clamped to 1");
        1.0
    } else {
        omega_ref_upper.max(0.0)
    };
    g_upper(x, delta_vir_lower)
}

/// Z-basis error rate from the yields `(0,0),(0,1),(1,0),(1,1)`.
///
/// `|ψ−>` anti-correlates the raw bits, so equal-bit events are the errors
/// after Bob's flip.
pub fn bit_error_rate(zz: [f64; 4]) -> Result<f64> {
    if zz.iter().any(|y| !(y.is_finite() && *y >= 0.0)) {
        return Err(Error::InvalidInput(format!("Z-basis yields must be non-negative: {zz:?}")));
    }
    let total: f64 = zz.iter().sum();
    if total <= 0.0 {
        return Err(Error::NoSignal("all Z-basis yields are zero".into()));
    }
    Ok((zz[0] + zz[3]) / total)
}

/// `ζ_obs`: total joint probability of a Z-basis success, `(1/4) Σ Y_{jZ,sZ}`.
pub fn zeta_obs(yields: &YieldTable) -> f64 {
    0.25 * yields.zz().iter().sum::<f64>()
}

pub fn phase_error_rate(omega_upper: f64, zeta_obs: f64) -> Result<f64> {
    if !(zeta_obs > 0.0) {
        return Err(Error::NoSignal(format!("zeta_obs = {zeta_obs}")));
    }
    Ok((omega_upper / zeta_obs).clamp(0.0, 1.0))
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    check_unit("p", p)?;
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// `Y_ZZ [1 - h(e_XX) - f_EC h(e_ZZ)]`, floored at 0.
///
/// `e_XX` is an upper bound, so the entropy is taken at `min(e_XX, 1/2)`,
/// the worst case over all phase-error rates the bound allows.
pub fn key_rate(y_zz: f64, e_zz: f64, e_xx: f64, f_ec: f64) -> Result<f64> {
    check_unit("y_zz", y_zz)?;
    if !(f_ec >= 1.0 && f_ec.is_finite()) {
        return Err(Error::InvalidInput(format!("f_ec = {f_ec} must be ≥ 1")));
    }
    check_unit("e_xx", e_xx)?;
    let bracket = 1.0 - binary_entropy(e_xx.min(0.5))? - f_ec * binary_entropy(e_zz)?;
    Ok((y_zz * bracket).max(0.0))
}

/// Runs the estimation chain on given yields.
pub fn estimate(inputs: &EstimationInputs, opts: &KeyRateOptions) -> Result<EstimationResult> {
    let analysis = &inputs.analysis;
    let omega_ref = omega_ref_matrix(analysis, &inputs.yields);
    let omega_ref_upper = omega_ref_upper(&analysis.f_obj, &inputs.yields, &inputs.eps)?;
    let delta_vir_lower = delta_vir_lower(&inputs.eps);
    let clamp_events = usize::from(omega_ref_upper > 1.0);
    let omega_upper = omega_upper(omega_ref_upper, delta_vir_lower)?;

    let zeta_obs = zeta_obs(&inputs.yields);
    let e_zz = bit_error_rate(inputs.yields.zz())?;
    let e_xx = phase_error_rate(omega_upper, zeta_obs)?;
    let y_zz = zeta_obs;
    let mut rate = key_rate(y_zz, e_zz, e_xx, opts.f_ec)?;
    if let Some(p) = opts.sifting_prefactor {
        rate *= p;
    }

    Ok(EstimationResult {
        omega_ref,
        omega_ref_upper,
        delta_vir_lower,
        omega_upper,
        zeta_obs,
        y_zz,
        e_zz,
        e_xx,
        key_rate: rate,
        cond_s: analysis.cond_s,
        clamp_events,
    })
}

/// Simulated yields `Y^ref` for a reference set under a channel, with the
/// number of non-dust clamps.
pub fn simulate_yields(analysis: &ReferenceAnalysis, channel: &ChannelParams) -> Result<(YieldTable, usize)> {
    let povm = build_bsm_povm(channel)?;
    let q = transmission_rates(&povm);
    Ok(reference_yields(&analysis.s_matrix, &q))
}

/// Full simulation of one point: channel → yields → estimation → key rate.
pub fn simulate_point(
    analysis: &ReferenceAnalysis,
    channel: &ChannelParams,
    eps: &SideChannelParams,
    opts: &KeyRateOptions,
) -> Result<EstimationResult> {
    let (yields, clamps) = simulate_yields(analysis, channel)?;
    let inputs = EstimationInputs { analysis: analysis.clone(), yields, eps: *eps };
    let mut result = estimate(&inputs, opts)?;
    result.clamp_events += clamps;
    Ok(result)
}
