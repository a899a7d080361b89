//! Asymptotic secret-key rate of measurement-device-independent QKD with
//! imperfect single-photon sources.
//!
//! Source flaws are handled in two layers. Modulation errors are absorbed
//! exactly by choosing flawed *reference* qubit states and running the
//! loss-tolerant (Bloch-vector) estimation on them. Everything else the
//! source may leak is bounded by a fidelity budget `ε` per setting pair, and
//! the deviation bounds in [`gbound`] transfer the reference estimate to the
//! actual states.
//!
//! Module map:
//!
//! * [`pauli`]: reference states, Bloch vectors, the `S` matrix and the
//!   virtual X-basis ensemble.
//! * [`gbound`]: the deviation bounds `g_lower` / `g_upper`.
//! * [`channel`]: the relay's `|ψ−>` POVM under loss, dark counts and
//!   misalignment; transmission rates and simulated yields.
//! * [`estimator`]: `Ω_ref`, its upper bounds, error rates and the key rate.
//! * [`sweep`]: loss/frequency scans and table output.
//!
//! ```
//! use mdiqkd::prelude::*;
//!
//! let analysis = ReferenceAnalysis::new(ReferenceStates::ideal()).unwrap();
//! let channel = ChannelParams::reference().with_loss(4.0);
//! let eps = SideChannelParams::uniform(1e-6).unwrap();
//! let r = simulate_point(&analysis, &channel, &eps, &KeyRateOptions::default()).unwrap();
//! assert!(r.key_rate > 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod estimator;
pub mod gbound;
pub mod pauli;
pub mod sweep;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::channel::{
        build_bsm_povm, reference_yields, transmission_rates, BsmPovm, ChannelParams, TransmissionRates, YieldTable,
    };
    pub use crate::error::{Error, Result};
    pub use crate::estimator::{
        binary_entropy, bit_error_rate, delta_vir_lower, estimate, key_rate, omega_ref_direct, omega_ref_matrix,
        omega_ref_upper, omega_upper, phase_error_rate, simulate_point, simulate_yields, zeta_obs,
        EstimationInputs, EstimationResult, KeyRateOptions, ReferenceAnalysis, SideChannelParams,
    };
    pub use crate::gbound::{g_lower, g_upper};
    pub use crate::pauli::{
        bloch_vector, build_s_matrix, build_virtual, make_reference_state, two_qubit_bloch, ModulationErrors, Pauli,
        QubitState, ReferenceStates, Setting, SettingPair, SingleQubitBloch, TwoQubitBloch, VirtualEnsemble,
    };
    pub use crate::sweep::{
        emit_table, run_frequency_sweep, run_loss_sweep, write_table, KeyRatePoint, OutputFormat, SweepConfig,
    };
}
