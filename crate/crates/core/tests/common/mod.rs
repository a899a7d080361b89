//! Independent brute-force oracles. Everything here uses plain arrays and
//! explicit index loops, never the library's Bloch or POVM code paths.

#![allow(dead_code)]

pub type M4 = [[f64; 4]; 4];

pub const PAULI: [[[f64; 2]; 2]; 3] = [
    [[1.0, 0.0], [0.0, 1.0]],
    [[0.0, 1.0], [1.0, 0.0]],
    [[1.0, 0.0], [0.0, -1.0]],
];

pub fn kron2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn outer2(v: [f64; 2]) -> [[f64; 2]; 2] {
    [[v[0] * v[0], v[0] * v[1]], [v[1] * v[0], v[1] * v[1]]]
}

pub fn trace_prod(a: &M4, b: &M4) -> f64 {
    let mut t = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            t += a[i][j] * b[j][i];
        }
    }
    t
}

/// `Tr[ρ_a⊗ρ_b σ_l⊗σ_{l'}]` for all nine `(l, l')` in I,X,Z order.
pub fn bloch_by_trace(a: [f64; 2], b: [f64; 2]) -> [f64; 9] {
    let rho = kron2(&outer2(a), &outer2(b));
    let mut out = [0.0; 9];
    for l in 0..3 {
        for lp in 0..3 {
            out[3 * l + lp] = trace_prod(&rho, &kron2(&PAULI[l], &PAULI[lp]));
        }
    }
    out
}

/// Virtual operators `Θ̂_{k,k}` (k = 0, 1) by building the 16-dimensional
/// state `(1/2) Σ_{j,s} |j,s>_AB |φ_j>|φ_s>` and tracing out the ancillas
/// after projecting them onto `|k_X, k_X>`. Index order: A, B, a, b.
pub fn virtual_operators(alice_z: [[f64; 2]; 2], bob_z: [[f64; 2]; 2]) -> ([M4; 2], [f64; 4]) {
    let mut psi = [0.0f64; 16];
    for j in 0..2 {
        for s in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    psi[8 * j + 4 * s + 2 * a + b] += 0.5 * alice_z[j][a] * bob_z[s][b];
                }
            }
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let x_ket = |k: usize| if k == 0 { [h, h] } else { [h, -h] };

    let theta = |k: usize, kp: usize| -> M4 {
        // Projector on the ancillas.
        let (xa, xb) = (x_ket(k), x_ket(kp));
        let mut proj = [[0.0; 4]; 4];
        for p in 0..4 {
            for q in 0..4 {
                proj[p][q] = xa[p / 2] * xb[p % 2] * xa[q / 2] * xb[q % 2];
            }
        }
        // Tr_AB[(P ⊗ 1) |Ψ><Ψ|]
        let mut out = [[0.0; 4]; 4];
        for t in 0..4 {
            for tp in 0..4 {
                let mut acc = 0.0;
                for p in 0..4 {
                    for q in 0..4 {
                        acc += proj[p][q] * psi[4 * q + t] * psi[4 * p + tp];
                    }
                }
                out[t][tp] = acc;
            }
        }
        out
    };
    let ops = [theta(0, 0), theta(1, 1)];
    let trace = |m: &M4| (0..4).map(|i| m[i][i]).sum::<f64>();
    let all = [trace(&theta(0, 0)), trace(&theta(0, 1)), trace(&theta(1, 0)), trace(&theta(1, 1))];
    (ops, all)
}

/// Channel parameters for the Fock-space oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleChannel {
    pub eta_arm: f64,
    pub p_d: f64,
    pub e_d: f64,
}

// Mode labels: detector/slot channels first, then the loss environment.
const C0: usize = 0;
const C1: usize = 1;
const D0: usize = 2;
const D1: usize = 3;
const N_MODES: usize = 8;

/// `|ψ−>` POVM element by explicit two-photon Fock propagation.
///
/// Loss is a beam splitter into environment modes, Bob's creation operators
/// are rotated by the misalignment, and the 50:50 splitter maps
/// `a† → (c† + d†)/√2`, `b† → (c† − d†)/√2` per time slot. For every
/// output Fock configuration the acceptance probability is summed over all
/// 2⁴ dark-count patterns on the four detector/slot channels.
pub fn fock_povm(ch: OracleChannel) -> M4 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = ch.eta_arm.sqrt();
    let r = (1.0 - ch.eta_arm).sqrt();
    let theta = ch.e_d.sqrt().asin();
    let (sn, cs) = theta.sin_cos();
    let rot = [[cs, -sn], [sn, cs]];

    // Output-mode amplitudes of Alice's/Bob's creation operator for slot t.
    let alice = |slot: usize| {
        let mut v = [0.0; N_MODES];
        let (c, d) = if slot == 0 { (C0, D0) } else { (C1, D1) };
        v[c] += t * h;
        v[d] += t * h;
        v[4 + slot] += r;
        v
    };
    let bob_raw = |slot: usize| {
        let mut v = [0.0; N_MODES];
        let (c, d) = if slot == 0 { (C0, D0) } else { (C1, D1) };
        v[c] += t * h;
        v[d] -= t * h;
        v[6 + slot] += r;
        v
    };
    let bob = |s: usize| {
        let mut v = [0.0; N_MODES];
        for sp in 0..2 {
            let raw = bob_raw(sp);
            for m in 0..N_MODES {
                v[m] += rot[sp][s] * raw[m];
            }
        }
        v
    };

    // Fock configurations: unordered mode pairs (m ≤ n).
    let mut configs = Vec::new();
    for m in 0..N_MODES {
        for n in m..N_MODES {
            configs.push((m, n));
        }
    }
    let amplitude = |j: usize, s: usize, m: usize, n: usize| -> f64 {
        let (a, b) = (alice(j), bob(s));
        if m == n {
            a[m] * b[m] * std::f64::consts::SQRT_2
        } else {
            a[m] * b[n] + a[n] * b[m]
        }
    };

    let accept = |m: usize, n: usize| -> f64 {
        let mut photons = [false; 4];
        for x in [m, n] {
            if x < 4 {
                photons[x] = true;
            }
        }
        let mut total = 0.0;
        for dark in 0..16u32 {
            let mut prob = 1.0;
            let mut clicks = photons;
            for (ch_idx, click) in clicks.iter_mut().enumerate() {
                if dark >> ch_idx & 1 == 1 {
                    prob *= ch.p_d;
                    *click = true;
                } else {
                    prob *= 1.0 - ch.p_d;
                }
            }
            if clicks[C0] && clicks[D1] && !clicks[C1] && !clicks[D0] {
                total += prob;
            }
        }
        total
    };

    let mut out = [[0.0; 4]; 4];
    for &(m, n) in &configs {
        let w = accept(m, n);
        if w == 0.0 {
            continue;
        }
        let amps: Vec<f64> = (0..4).map(|i| amplitude(i / 2, i % 2, m, n)).collect();
        for i in 0..4 {
            for k in 0..4 {
                out[i][k] += w * amps[i] * amps[k];
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &M4, b: &nalgebra::Matrix4<f64>) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[(i, j)]).abs());
        }
    }
    d
}

/// Reference-state amplitudes written out directly from the modulation
/// model, for use by oracles.
pub fn reference_amplitudes(d1: f64, d2: f64, d3: f64) -> [[f64; 2]; 3] {
    use std::f64::consts::FRAC_PI_4;
    [
        [(d1 / 2.0).cos(), (d1 / 2.0).sin()],
        [(d2 / 2.0).sin(), (d2 / 2.0).cos()],
        [(FRAC_PI_4 + d3 / 2.0).sin(), (FRAC_PI_4 + d3 / 2.0).cos()],
    ]
}
