//! Qubit reference states, Pauli/Bloch decompositions and the matrices
//! consumed by the loss-tolerant estimation.
//!
//! Conventions fixed for the whole crate:
//!
//! * `|0_X> = (|0_Z> + |1_Z>)/√2`, `|1_X> = (|0_Z> - |1_Z>)/√2`.
//! * Two-qubit Pauli index order: `(I,I),(I,X),(I,Z),(X,I),(X,X),(X,Z),(Z,I),(Z,X),(Z,Z)`.
//! * Setting-pair (row) order: `(0_Z,0_Z),(0_Z,1_Z),(0_Z,0_X),(1_Z,0_Z),…,(0_X,0_X)`,
//!   i.e. Alice's setting is the major index.
//!
//! All states live in the X–Z plane (real amplitudes), so the `{I, X, Z}`
//! restriction of the Pauli basis is lossless for them. The setting-independent
//! factor held by the relay is dropped from every inner product.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector2, Vector4};

use crate::error::{Error, Result};

/// Tolerance on `amp0² + amp1² = 1`.
pub const NORM_TOL: f64 = 1e-12;

pub type Matrix9 = SMatrix<f64, 9, 9>;

/// One of the three preparation settings each user may choose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    ZeroZ,
    OneZ,
    ZeroX,
}

impl Setting {
    pub const ALL: [Setting; 3] = [Setting::ZeroZ, Setting::OneZ, Setting::ZeroX];

    pub fn label(self) -> &'static str {
        match self {
            Setting::ZeroZ => "0_Z",
            Setting::OneZ => "1_Z",
            Setting::ZeroX => "0_X",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0_Z" | "0Z" => Ok(Setting::ZeroZ),
            "1_Z" | "1Z" => Ok(Setting::OneZ),
            "0_X" | "0X" => Ok(Setting::ZeroX),
            other => Err(Error::UnknownSetting(other.to_string())),
        }
    }
}

/// Alice's and Bob's joint setting `(j_α, s_β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SettingPair {
    pub alice: Setting,
    pub bob: Setting,
}

impl SettingPair {
    pub const fn new(alice: Setting, bob: Setting) -> Self {
        Self { alice, bob }
    }

    /// All nine pairs in row order.
    pub const ALL: [SettingPair; 9] = {
        use Setting::*;
        [
            SettingPair::new(ZeroZ, ZeroZ),
            SettingPair::new(ZeroZ, OneZ),
            SettingPair::new(ZeroZ, ZeroX),
            SettingPair::new(OneZ, ZeroZ),
            SettingPair::new(OneZ, OneZ),
            SettingPair::new(OneZ, ZeroX),
            SettingPair::new(ZeroX, ZeroZ),
            SettingPair::new(ZeroX, OneZ),
            SettingPair::new(ZeroX, ZeroX),
        ]
    };

    /// Row indices of the four Z-basis pairs, ordered `(0,0),(0,1),(1,0),(1,1)`.
    pub const ZZ_ROWS: [usize; 4] = [0, 1, 3, 4];

    pub fn index(self) -> usize {
        3 * self.alice.index() + self.bob.index()
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alice, self.bob)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::I, Pauli::X, Pauli::Z];

    pub fn matrix(self) -> Matrix2<f64> {
        match self {
            Pauli::I => Matrix2::identity(),
            Pauli::X => Matrix2::new(0.0, 1.0, 1.0, 0.0),
            Pauli::Z => Matrix2::new(1.0, 0.0, 0.0, -1.0),
        }
    }
}

/// `(l, l')` for each of the nine entries of a [`TwoQubitBloch`], in index order.
pub const PAULI_PAIRS: [(Pauli, Pauli); 9] = [
    (Pauli::I, Pauli::I),
    (Pauli::I, Pauli::X),
    (Pauli::I, Pauli::Z),
    (Pauli::X, Pauli::I),
    (Pauli::X, Pauli::X),
    (Pauli::X, Pauli::Z),
    (Pauli::Z, Pauli::I),
    (Pauli::Z, Pauli::X),
    (Pauli::Z, Pauli::Z),
];

/// `σ_l ⊗ σ_{l'}` in the `|00>,|01>,|10>,|11>` basis.
pub fn pauli_pair_matrix(l: Pauli, lp: Pauli) -> Matrix4<f64> {
    l.matrix().kronecker(&lp.matrix())
}

/// Pure single-qubit state with real amplitudes on `|0_Z>`, `|1_Z>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    amp0: f64,
    amp1: f64,
}

impl QubitState {
    pub const ZERO_Z: QubitState = QubitState { amp0: 1.0, amp1: 0.0 };
    pub const ONE_Z: QubitState = QubitState { amp0: 0.0, amp1: 1.0 };
    pub const PLUS: QubitState = QubitState {
        amp0: std::f64::consts::FRAC_1_SQRT_2,
        amp1: std::f64::consts::FRAC_1_SQRT_2,
    };
    pub const MINUS: QubitState = QubitState {
        amp0: std::f64::consts::FRAC_1_SQRT_2,
        amp1: -std::f64::consts::FRAC_1_SQRT_2,
    };

    /// Rejects amplitude pairs that are not normalized to within [`NORM_TOL`].
    pub fn new(amp0: f64, amp1: f64) -> Result<Self> {
        let norm = amp0 * amp0 + amp1 * amp1;
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "qubit amplitudes ({amp0}, {amp1}) are not normalized (norm² = {norm})"
            )));
        }
        Ok(Self { amp0, amp1 })
    }

    /// `cos(θ/2)|0_Z> + sin(θ/2)|1_Z>`; θ is the Bloch polar angle from +Z towards +X.
    pub fn from_bloch_angle(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self { amp0: c, amp1: s }
    }

    pub fn amp0(&self) -> f64 {
        self.amp0
    }

    pub fn amp1(&self) -> f64 {
        self.amp1
    }

    pub fn ket(&self) -> Vector2<f64> {
        Vector2::new(self.amp0, self.amp1)
    }

    pub fn density(&self) -> Matrix2<f64> {
        let k = self.ket();
        k * k.transpose()
    }

    pub fn overlap(&self, other: &QubitState) -> f64 {
        self.amp0 * other.amp0 + self.amp1 * other.amp1
    }
}

/// Phase-modulation deviations `δ1, δ2, δ3` (radians) of the encoder.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModulationErrors {
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
}

impl ModulationErrors {
    pub fn new(delta1: f64, delta2: f64, delta3: f64) -> Result<Self> {
        for (name, d) in [("delta1", delta1), ("delta2", delta2), ("delta3", delta3)] {
            if !d.is_finite() || d.abs() >= FRAC_PI_2 {
                return Err(Error::InvalidInput(format!("{name} = {d} must satisfy |δ| < π/2")));
            }
        }
        Ok(Self { delta1, delta2, delta3 })
    }

    pub fn uniform(delta: f64) -> Result<Self> {
        Self::new(delta, delta, delta)
    }

    pub fn ideal() -> Self {
        Self::default()
    }
}

/// Reference state for `setting` under the given modulation deviations.
pub fn make_reference_state(setting: Setting, deltas: &ModulationErrors) -> QubitState {
    use std::f64::consts::FRAC_PI_4;
    let (amp0, amp1) = match setting {
        Setting::ZeroZ => {
            let h = deltas.delta1 / 2.0;
            (h.cos(), h.sin())
        }
        Setting::OneZ => {
            let h = deltas.delta2 / 2.0;
            (h.sin(), h.cos())
        }
        Setting::ZeroX => {
            let h = FRAC_PI_4 + deltas.delta3 / 2.0;
            (h.sin(), h.cos())
        }
    };
    QubitState { amp0, amp1 }
}

/// Single-qubit Bloch coefficients over `{I, X, Z}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitBloch {
    pub s_i: f64,
    pub s_x: f64,
    pub s_z: f64,
}

impl SingleQubitBloch {
    pub fn get(&self, p: Pauli) -> f64 {
        match p {
            Pauli::I => self.s_i,
            Pauli::X => self.s_x,
            Pauli::Z => self.s_z,
        }
    }
}

/// `s_I` is exactly 1: every `QubitState` is normalized on construction.
pub fn bloch_vector(state: &QubitState) -> SingleQubitBloch {
    let (a, b) = (state.amp0, state.amp1);
    SingleQubitBloch {
        s_i: 1.0,
        s_x: 2.0 * a * b,
        s_z: a * a - b * b,
    }
}

/// Nine Bloch coefficients of a two-qubit operator, indexed like [`PAULI_PAIRS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitBloch {
    pub s: [f64; 9],
}

impl TwoQubitBloch {
    pub fn get(&self, l: Pauli, lp: Pauli) -> f64 {
        self.s[pauli_pair_index(l, lp)]
    }

    pub fn dot(&self, other: &[f64; 9]) -> f64 {
        self.s.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

pub fn pauli_pair_index(l: Pauli, lp: Pauli) -> usize {
    let idx = |p: Pauli| match p {
        Pauli::I => 0,
        Pauli::X => 1,
        Pauli::Z => 2,
    };
    3 * idx(l) + idx(lp)
}

pub fn two_qubit_bloch(a: &QubitState, b: &QubitState) -> TwoQubitBloch {
    let (ba, bb) = (bloch_vector(a), bloch_vector(b));
    let mut s = [0.0; 9];
    for (k, (l, lp)) in PAULI_PAIRS.iter().enumerate() {
        s[k] = ba.get(*l) * bb.get(*lp);
    }
    TwoQubitBloch { s }
}

/// The three reference states of each user, indexed by [`Setting`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceStates {
    pub alice: [QubitState; 3],
    pub bob: [QubitState; 3],
}

impl ReferenceStates {
    pub fn from_deltas(alice: &ModulationErrors, bob: &ModulationErrors) -> Self {
        Self {
            alice: Setting::ALL.map(|s| make_reference_state(s, alice)),
            bob: Setting::ALL.map(|s| make_reference_state(s, bob)),
        }
    }

    /// Both users share the same deviations.
    pub fn symmetric(deltas: &ModulationErrors) -> Self {
        Self::from_deltas(deltas, deltas)
    }

    pub fn ideal() -> Self {
        Self::symmetric(&ModulationErrors::ideal())
    }

    pub fn pair(&self, pair: SettingPair) -> (QubitState, QubitState) {
        (self.alice[pair.alice.index()], self.bob[pair.bob.index()])
    }

    /// `ρ_A ⊗ ρ_B` for a setting pair.
    pub fn pair_density(&self, pair: SettingPair) -> Matrix4<f64> {
        let (a, b) = self.pair(pair);
        a.density().kronecker(&b.density())
    }
}

/// 9×9 matrix whose rows are the two-qubit Bloch vectors of the reference
/// pairs, in setting-pair row order.
pub fn build_s_matrix(refs: &ReferenceStates) -> Matrix9 {
    let mut s = Matrix9::zeros();
    for (row, pair) in SettingPair::ALL.iter().enumerate() {
        let (a, b) = refs.pair(*pair);
        let bloch = two_qubit_bloch(&a, &b);
        for (col, v) in bloch.s.iter().enumerate() {
            s[(row, col)] = *v;
        }
    }
    s
}

/// Weights and normalized Bloch rows of the two X-basis virtual outcomes
/// `(j,s) = (0,0)` and `(1,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualEnsemble {
    pub p_vir: [f64; 2],
    pub s_vir: [[f64; 9]; 2],
}

impl VirtualEnsemble {
    /// Unnormalized virtual operator for outcome `k` (0 ↔ (0,0), 1 ↔ (1,1)).
    pub fn unnormalized_operator(&self, k: usize) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (c, (l, lp)) in PAULI_PAIRS.iter().enumerate() {
            m += pauli_pair_matrix(*l, *lp) * self.s_vir[k][c];
        }
        m * (self.p_vir[k] / 4.0)
    }
}

/// Conditional state sent to the relay after a virtual X-measurement
/// outcome `k` on one ancilla: `(|φ_0> + (-1)^k |φ_1>)/√2`, unnormalized.
fn x_projected(z_states: &[QubitState; 2], k: usize) -> Vector2<f64> {
    let sign = if k == 0 { 1.0 } else { -1.0 };
    (z_states[0].ket() + z_states[1].ket() * sign) * std::f64::consts::FRAC_1_SQRT_2
}

/// Builds the virtual ensemble from the Z-basis reference states
/// (`[0_Z, 1_Z]` for each user).
///
/// Projecting both ancillas of `(1/2) Σ_{j,s} |j,s>|φ_j>|φ_s>` onto
/// `|k_X, k'_X>` leaves the product `(1/2) u_k ⊗ u_{k'}`, so weights and
/// Bloch rows factorize per side.
pub fn build_virtual(alice_z: &[QubitState; 2], bob_z: &[QubitState; 2]) -> Result<VirtualEnsemble> {
    let ua = [x_projected(alice_z, 0), x_projected(alice_z, 1)];
    let ub = [x_projected(bob_z, 0), x_projected(bob_z, 1)];

    let weight = |k: usize, kp: usize| 0.25 * ua[k].norm_squared() * ub[kp].norm_squared();
    let total: f64 = (0..2).flat_map(|k| (0..2).map(move |kp| (k, kp))).map(|(k, kp)| weight(k, kp)).sum();
    debug_assert!((total - 1.0).abs() < 1e-12, "virtual outcome weights sum to {total}");

    let mut p_vir = [0.0; 2];
    let mut s_vir = [[0.0; 9]; 2];
    for k in 0..2 {
        let p = weight(k, k);
        if !(p > 0.0) {
            return Err(Error::Degenerate(format!(
                "virtual outcome ({k},{k}) has zero weight; the 0_Z and 1_Z reference states coincide up to sign"
            )));
        }
        let na = ua[k].norm();
        let nb = ub[k].norm();
        let a = QubitState { amp0: ua[k][0] / na, amp1: ua[k][1] / na };
        let b = QubitState { amp0: ub[k][0] / nb, amp1: ub[k][1] / nb };
        p_vir[k] = p;
        s_vir[k] = two_qubit_bloch(&a, &b).s;
    }
    Ok(VirtualEnsemble { p_vir, s_vir })
}

/// Convenience: virtual ensemble of a full reference set.
pub fn virtual_from_references(refs: &ReferenceStates) -> Result<VirtualEnsemble> {
    build_virtual(&[refs.alice[0], refs.alice[1]], &[refs.bob[0], refs.bob[1]])
}

/// `|ψ−> = (|01> - |10>)/√2`.
pub fn psi_minus() -> Vector4<f64> {
    Vector4::new(0.0, 1.0, -1.0, 0.0) * std::f64::consts::FRAC_1_SQRT_2
}
