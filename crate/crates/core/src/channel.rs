//! Relay model: the effective two-qubit POVM element for a `|ψ−>`
//! announcement, its Pauli transmission rates, and simulated yields.
//!
//! Model (time-bin qubits, `|0>` = early, `|1>` = late):
//!
//! * Each photon survives its arm with probability
//!   `η_arm = η_d · 10^(-loss_db/20)`; the total loss is split evenly and the
//!   detector efficiency is folded into the arm.
//! * Bob's qubit is rotated by `θ`, `sin²θ = e_d`, before interference.
//! * Surviving photons meet at a 50:50 beam splitter with outputs `c`
//!   (detector D1) and `d` (detector D2), `a† → (c† + d†)/√2`,
//!   `b† → (c† − d†)/√2`, applied per time slot.
//! * Each of the four detector/slot channels dark-fires independently with
//!   probability `p_d`. Detectors are threshold detectors.
//! * `|ψ−>` is announced for exactly one click pattern: D1 in the early slot
//!   and D2 in the late slot, with the other two channels silent. Any other
//!   pattern is discarded.
//!
//! In the ideal limit (`p_d = 0`, `e_d = 0`) this gives
//! `M = (η_arm²/2)|ψ−><ψ−|`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::pauli::{pauli_pair_matrix, psi_minus, Matrix9, PAULI_PAIRS};

/// Tolerance for Hermiticity and `0 ≤ M ≤ 1` checks.
pub const POVM_TOL: f64 = 1e-12;

/// Yields may stray outside `[0,1]` by this much before a clamp is reported.
pub const CLAMP_DUST: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Detector efficiency.
    pub eta_d: f64,
    /// Dark-count probability per detector per time slot.
    pub p_d: f64,
    /// Intrinsic misalignment error.
    pub e_d: f64,
    /// Total Alice-to-Bob loss in dB.
    #[serde(default)]
    pub loss_db: f64,
    #[serde(default = "two_thirds")]
    pub p_za: f64,
    #[serde(default = "two_thirds")]
    pub p_zb: f64,
}

fn two_thirds() -> f64 {
    2.0 / 3.0
}

impl ChannelParams {
    /// Detector and alignment figures used for the published curves, at 0 dB.
    pub fn reference() -> Self {
        Self {
            eta_d: 0.145,
            p_d: 6.02e-6,
            e_d: 0.015,
            loss_db: 0.0,
            p_za: two_thirds(),
            p_zb: two_thirds(),
        }
    }

    /// Perfect detectors, no dark counts, no misalignment.
    pub fn ideal() -> Self {
        Self {
            eta_d: 1.0,
            p_d: 0.0,
            e_d: 0.0,
            loss_db: 0.0,
            p_za: 0.5,
            p_zb: 0.5,
        }
    }

    pub fn with_loss(mut self, loss_db: f64) -> Self {
        self.loss_db = loss_db;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("eta_d", self.eta_d)?;
        check_unit("p_d", self.p_d)?;
        check_unit("e_d", self.e_d)?;
        if !(self.loss_db.is_finite() && self.loss_db >= 0.0) {
            return Err(Error::InvalidInput(format!("loss_db = {} must be ≥ 0", self.loss_db)));
        }
        for (name, p) in [("p_za", self.p_za), ("p_zb", self.p_zb)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidInput(format!("{name} = {p} must lie in (0, 1)")));
            }
        }
        Ok(())
    }

    /// Per-arm photon survival probability including detector efficiency.
    pub fn arm_transmittance(&self) -> f64 {
        self.eta_d * 10f64.powf(-self.loss_db / 20.0)
    }

    /// Real rotation applied to Bob's qubit, `sin²θ = e_d`.
    pub fn misalignment(&self) -> Matrix2<f64> {
        let theta = self.e_d.sqrt().asin();
        let (s, c) = theta.sin_cos();
        Matrix2::new(c, -s, s, c)
    }
}

/// POVM element of a successful `|ψ−>` announcement on the two input qubits
/// (basis `|00>,|01>,|10>,|11>`, Alice first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsmPovm {
    m: Matrix4<f64>,
}

impl BsmPovm {
    /// Wraps a matrix after checking Hermiticity and `0 ≤ M ≤ 1`.
    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        let asym = (m - m.transpose()).abs().max();
        if asym > POVM_TOL {
            return Err(Error::InvalidInput(format!("POVM is not Hermitian (max asymmetry {asym:.3e})")));
        }
        let povm = Self { m };
        let (lo, hi) = povm.eigenvalue_range();
        if lo < -POVM_TOL || hi > 1.0 + POVM_TOL {
            return Err(Error::InvalidInput(format!(
                "POVM eigenvalues [{lo:.3e}, {hi:.3e}] leave [0, 1]"
            )));
        }
        Ok(povm)
    }

    pub fn zero() -> Self {
        Self { m: Matrix4::zeros() }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// `Tr[M ρ]`.
    pub fn expectation(&self, rho: &Matrix4<f64>) -> f64 {
        (self.m * rho).trace()
    }

    pub fn eigenvalue_range(&self) -> (f64, f64) {
        let eig = SymmetricEigen::new(self.m);
        let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

fn projector(i: usize) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m[(i, i)] = 1.0;
    m
}

pub fn build_bsm_povm(params: &ChannelParams) -> Result<BsmPovm> {
    params.validate()?;
    let eta = params.arm_transmittance();
    let pd = params.p_d;
    // Both silent channels (D1 late, D2 early) must stay dark.
    let quiet = (1.0 - pd) * (1.0 - pd);

    let id2 = Matrix2::<f64>::identity();
    let early = Matrix2::new(1.0, 0.0, 0.0, 0.0);
    let late = Matrix2::new(0.0, 0.0, 0.0, 1.0);
    let psi = psi_minus();

    // Both photons arrive. Accepted photon patterns: one photon in each of
    // D1-early and D2-late (the |ψ−> component with amplitude 1/√2), or both
    // photons bunched in one of those channels with a dark count in the other.
    let both = psi * psi.transpose() * 0.5 + (projector(0) + projector(3)) * (0.5 * pd);
    // One photon arrives: it lands in D1-early (if early) or D2-late (if late)
    // with probability 1/2; the other accepted channel needs a dark count.
    let alice_only = early.kronecker(&id2) * (0.5 * pd) + late.kronecker(&id2) * (0.5 * pd);
    let bob_only = id2.kronecker(&early) * (0.5 * pd) + id2.kronecker(&late) * (0.5 * pd);
    // No photon: both accepted channels dark-fire.
    let none = Matrix4::<f64>::identity() * (pd * pd);

    let aligned = (both * (eta * eta)
        + (alice_only + bob_only) * (eta * (1.0 - eta))
        + none * ((1.0 - eta) * (1.0 - eta)))
        * quiet;

    let w = id2.kronecker(&params.misalignment());
    let m = w.transpose() * aligned * w;
    // Symmetrize away rounding asymmetry from the conjugation.
    BsmPovm::from_matrix((m + m.transpose()) * 0.5)
}

/// `q_{l,l'} = Tr[M σ_l⊗σ_{l'}]/4`, indexed like the two-qubit Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionRates {
    pub q: [f64; 9],
}

pub fn transmission_rates(povm: &BsmPovm) -> TransmissionRates {
    let mut q = [0.0; 9];
    for (k, (l, lp)) in PAULI_PAIRS.iter().enumerate() {
        q[k] = 0.25 * (povm.matrix() * pauli_pair_matrix(*l, *lp)).trace();
    }
    TransmissionRates { q }
}

/// Success probabilities for the nine setting pairs, in row order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YieldTable {
    pub y: [f64; 9],
}

impl YieldTable {
    pub fn new(y: [f64; 9]) -> Result<Self> {
        for (i, v) in y.iter().enumerate() {
            check_unit(&format!("yield[{i}]"), *v)?;
        }
        Ok(Self { y })
    }

    /// The four Z-basis yields ordered `(0,0),(0,1),(1,0),(1,1)`.
    pub fn zz(&self) -> [f64; 4] {
        crate::pauli::SettingPair::ZZ_ROWS.map(|r| self.y[r])
    }
}

/// Simulated yields `S q`, plus the number of entries that had to be clamped
/// into `[0,1]` by more than [`CLAMP_DUST`].
pub fn reference_yields(s_matrix: &Matrix9, q: &TransmissionRates) -> (YieldTable, usize) {
    let mut y = [0.0; 9];
    let mut clamps = 0;
    for (row, out) in y.iter_mut().enumerate() {
        let raw: f64 = (0..9).map(|c| s_matrix[(row, c)] * q.q[c]).sum();
        let clamped = raw.clamp(0.0, 1.0);
        if (raw - clamped).abs() > CLAMP_DUST {
            log::warn!("yield row {row} clamped from {raw:.3e} to {clamped}");
            clamps += 1;
        }
        *out = clamped;
    }
    (YieldTable { y }, clamps)
}
