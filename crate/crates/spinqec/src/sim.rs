//! Density-matrix simulation of one storage-and-correction cycle under pure
//! dephasing.
//!
//! The channel is the exact solution of the dephasing Lindblad equation,
//! ρ_mn ↦ ρ_mn·exp(−γ(m−n)²t/2); a fixed-step RK4 integrator of the same
//! master equation is kept alongside purely as a cross-check oracle. A
//! corrected cycle runs encode → dephase → decode → project onto the decode
//! branches → branch-conditional recovery; the uncorrected baseline stores
//! the same coefficients in the d lowest bare levels under the same channel.
//! Time is measured in units of T2 = 1/γ throughout, so sweeps are over the
//! dimensionless ratio t/T2.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::codes::CodeFamily;
use crate::pulse::{default_input_levels, synthesize_decoder, synthesize_encoder, PulseSequence};
use crate::spin::{SpinSpace, C64};
use crate::{Error, Result};

/// Allowed deviation of the total captured branch weight from the trace.
pub const TRACE_TOL: f64 = 1e-9;

/// Noise model for one cycle. `gamma` is the dephasing rate (1/T2),
/// `cycle_time` the storage duration, `gate_time_ratio` the duration of one
/// pulse relative to T2, and `gate_infidelity` the per-pulse state
/// infidelity the over-rotation is calibrated to.
#[derive(Clone, Copy, Debug)]
pub struct NoiseParams {
    pub gamma: f64,
    pub cycle_time: f64,
    pub gate_time_ratio: f64,
    pub gate_infidelity: f64,
}

impl NoiseParams {
    /// Storage-only noise: ideal gates, rate fixed at 1/T2 = 1.
    pub fn storage(cycle_time: f64) -> Self {
        NoiseParams { gamma: 1.0, cycle_time, gate_time_ratio: 0.0, gate_infidelity: 0.0 }
    }

    /// Storage plus imperfect decode pulses.
    pub fn with_gates(cycle_time: f64, gate_infidelity: f64, gate_time_ratio: f64) -> Self {
        NoiseParams { gamma: 1.0, cycle_time, gate_time_ratio, gate_infidelity }
    }

    fn validate(&self) -> Result<()> {
        if self.gamma < 0.0 || self.cycle_time < 0.0 || self.gate_time_ratio < 0.0 {
            return Err(Error::Domain("noise parameters must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.gate_infidelity) {
            return Err(Error::Domain("gate infidelity must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Angle offset added to each pulse's plane angle to model a miscalibrated
/// rotation. The over-rotation is δθ = 2√(gate_infidelity) in the
/// exp(−iδθ·σ_y/2) convention, where the per-gate state fidelity is
/// cos²(δθ/2) ≈ 1 − gate_infidelity; pulse angles here are plane angles
/// (half the σ_y parameter), so the offset applied is δθ/2.
pub fn over_rotation(gate_infidelity: f64) -> f64 {
    gate_infidelity.sqrt()
}

/// A normalized d-level logical state.
#[derive(Clone, Debug)]
pub struct LogicalState {
    coeffs: Vec<C64>,
}

impl LogicalState {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::Domain("logical state must be nonzero".into()));
        }
        let norm = norm_sq.sqrt();
        Ok(LogicalState { coeffs: coeffs.into_iter().map(|c| c / norm).collect() })
    }

    /// The uniform superposition (1, …, 1)/√d.
    pub fn uniform(d: usize) -> Self {
        let c = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        LogicalState { coeffs: vec![c; d] }
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CycleOptions {
    pub corrected: bool,
    pub imperfect_gates: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleResult {
    pub fidelity: f64,
    /// E = 1 − F².
    pub error: f64,
    /// Captured weight per decode branch, last entry the residual (leakage)
    /// branch; a single 1.0 for uncorrected runs.
    pub branch_probabilities: Vec<f64>,
    pub corrected: bool,
    pub imperfect_gates: bool,
}

/// Exact dephasing map: ρ_mn ↦ ρ_mn·exp(−γ(m−n)²t/2).
pub fn dephasing_channel(rho: &Array2<C64>, space: &SpinSpace, gamma: f64, t: f64) -> Array2<C64> {
    let dim = space.dim();
    let mut out = rho.clone();
    for i in 0..dim {
        let mi = space.level(i).value();
        for j in 0..dim {
            let mj = space.level(j).value();
            let decay = (-gamma * (mi - mj) * (mi - mj) * t / 2.0).exp();
            out[[i, j]] *= decay;
        }
    }
    out
}

/// Unitary phase error exp(iε·S_Z) applied to a state vector.
pub fn coherent_z_error(state: &Array1<C64>, space: &SpinSpace, epsilon: f64) -> Array1<C64> {
    let mut out = state.clone();
    for i in 0..space.dim() {
        out[i] *= C64::from_polar(1.0, epsilon * space.level(i).value());
    }
    out
}

fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|c| c.conj())
}

fn trace(rho: &Array2<C64>) -> C64 {
    rho.diag().sum()
}

fn lindblad_deriv(
    rho: &Array2<C64>,
    hamiltonian: Option<&Array2<C64>>,
    collapse: &[Array2<C64>],
) -> Array2<C64> {
    let dim = rho.nrows();
    let mut d: Array2<C64> = Array2::zeros((dim, dim));
    if let Some(h) = hamiltonian {
        let comm = h.dot(rho) - rho.dot(h);
        d = d + comm.mapv(|c| c * C64::new(0.0, -1.0));
    }
    for l in collapse {
        let ldag = adjoint(l);
        let ldl = ldag.dot(l);
        let gain = l.dot(rho).dot(&ldag);
        let loss = (ldl.dot(rho) + rho.dot(&ldl)).mapv(|c| c * 0.5);
        d = d + gain - loss;
    }
    d
}

/// Fixed-step RK4 integration of the Lindblad equation, used only as an
/// oracle against the analytic channel. Rejects the run if the trace drifts
/// by more than 1e−6 at any step.
pub fn lindblad_rk4(
    rho0: &Array2<C64>,
    collapse: &[Array2<C64>],
    hamiltonian: Option<&Array2<C64>>,
    t: f64,
    dt: f64,
) -> Result<Array2<C64>> {
    if t < 0.0 || dt <= 0.0 {
        return Err(Error::Domain("integration needs t ≥ 0 and dt > 0".into()));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let trace0 = trace(rho0).re;
    let mut rho = rho0.clone();
    for _ in 0..steps {
        let k1 = lindblad_deriv(&rho, hamiltonian, collapse);
        let half1 = &rho + &k1.mapv(|c| c * (h / 2.0));
        let k2 = lindblad_deriv(&half1, hamiltonian, collapse);
        let half2 = &rho + &k2.mapv(|c| c * (h / 2.0));
        let k3 = lindblad_deriv(&half2, hamiltonian, collapse);
        let full = &rho + &k3.mapv(|c| c * h);
        let k4 = lindblad_deriv(&full, hamiltonian, collapse);
        let incr = (k1 + k2.mapv(|c| c * 2.0) + k3.mapv(|c| c * 2.0) + k4).mapv(|c| c * (h / 6.0));
        rho = rho + incr;
        let drift = (trace(&rho).re - trace0).abs();
        if drift > 1e-6 {
            return Err(Error::Integration(format!(
                "trace drifted by {drift:.3e}; reduce the step size"
            )));
        }
    }
    Ok(rho)
}

fn outer(v: &Array1<C64>) -> Array2<C64> {
    let dim = v.len();
    let mut rho = Array2::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            rho[[i, j]] = v[i] * v[j].conj();
        }
    }
    rho
}

fn expectation(rho: &Array2<C64>, v: &Array1<C64>) -> f64 {
    let rv = rho.dot(v);
    v.iter().zip(rv.iter()).map(|(a, b)| a.conj() * b).sum::<C64>().re
}

// Bijection on level indices sending each branch target to the matching
// input level; everything else fills the remaining slots in ascending order.
fn completion_permutation(dim: usize, sources: &[usize], dests: &[usize]) -> Vec<usize> {
    let mut perm = vec![usize::MAX; dim];
    let mut dest_taken = vec![false; dim];
    for (s, d) in sources.iter().zip(dests.iter()) {
        perm[*s] = *d;
        dest_taken[*d] = true;
    }
    let mut free = (0..dim).filter(|i| !dest_taken[*i]);
    for slot in perm.iter_mut() {
        if *slot == usize::MAX {
            *slot = free.next().expect("bijection completion");
        }
    }
    perm
}

fn permute_rho(rho: &Array2<C64>, perm: &[usize]) -> Array2<C64> {
    let dim = rho.nrows();
    let mut out = Array2::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            out[[perm[i], perm[j]]] = rho[[i, j]];
        }
    }
    out
}

/// Synthesized sequences, branch projectors, and recovery permutations for
/// one code, reusable across sweep points.
pub struct CyclePipeline {
    space: SpinSpace,
    d: usize,
    input_indices: Vec<usize>,
    encoder: PulseSequence,
    decoder: PulseSequence,
    enc_u: Array2<C64>,
    dec_u: Array2<C64>,
    /// Level-index sets per branch; the last set is the complement of the
    /// decoder's targets and absorbs leakage.
    branch_sets: Vec<Vec<usize>>,
    recoveries: Vec<Vec<usize>>,
}

impl CyclePipeline {
    pub fn new(code: &CodeFamily) -> Result<Self> {
        let input_levels = default_input_levels(code);
        let encoder = synthesize_encoder(code, &input_levels)?;
        let decoder = synthesize_decoder(code)?;
        let enc_u = encoder.unitary()?;
        let dec_u = decoder.unitary()?;
        let space = code.spin;
        let dim = space.dim();
        let input_indices: Vec<usize> = input_levels
            .iter()
            .map(|m| space.index_of(*m).expect("input level in space"))
            .collect();

        let branches = &decoder.ancilla.as_ref().expect("decoder has branches").branches;
        let mut branch_sets: Vec<Vec<usize>> = Vec::new();
        let mut claimed = vec![false; dim];
        for branch in branches {
            let set: Vec<usize> = branch
                .iter()
                .map(|m| space.index_of(*m).expect("branch target in space"))
                .collect();
            for &i in &set {
                claimed[i] = true;
            }
            branch_sets.push(set);
        }
        branch_sets.push((0..dim).filter(|i| !claimed[*i]).collect());

        let recoveries = branch_sets
            .iter()
            .enumerate()
            .map(|(b, set)| {
                if b < branches.len() {
                    completion_permutation(dim, set, &input_indices)
                } else {
                    (0..dim).collect()
                }
            })
            .collect();

        Ok(CyclePipeline {
            space,
            d: code.codewords.len(),
            input_indices,
            encoder,
            decoder,
            enc_u,
            dec_u,
            branch_sets,
            recoveries,
        })
    }

    pub fn encoder(&self) -> &PulseSequence {
        &self.encoder
    }

    pub fn decoder(&self) -> &PulseSequence {
        &self.decoder
    }

    fn bare_state(&self, logical: &LogicalState) -> Result<Array1<C64>> {
        if logical.coeffs.len() != self.d {
            return Err(Error::Dimension(format!(
                "logical state has {} coefficients, code encodes {}",
                logical.coeffs.len(),
                self.d
            )));
        }
        let mut v = Array1::zeros(self.space.dim());
        for (k, c) in logical.coeffs.iter().enumerate() {
            v[self.input_indices[k]] = *c;
        }
        Ok(v)
    }

    /// Decode with per-pulse dephasing (t_gate split around each rotation)
    /// and a deterministic over-rotation on every pulse angle.
    fn decode_imperfect(&self, rho: &Array2<C64>, noise: &NoiseParams) -> Result<Array2<C64>> {
        let delta = over_rotation(noise.gate_infidelity);
        let half_gate = noise.gate_time_ratio / 2.0;
        let mut rho = rho.clone();
        for step in &self.decoder.steps {
            // the angle error has unknown sign, so each pulse applies the
            // balanced mixture of ±δθ; sequencing the mixtures averages over
            // all sign patterns exactly, the incoherent accumulation a
            // stochastic angle model would give in expectation, while the
            // run stays deterministic
            rho = dephasing_channel(&rho, &self.space, noise.gamma, half_gate);
            let plus = step.unitary(&self.space, delta)?;
            let minus = step.unitary(&self.space, -delta)?;
            let rotated = plus.dot(&rho).dot(&adjoint(&plus)) + minus.dot(&rho).dot(&adjoint(&minus));
            rho = rotated.mapv(|c| c * 0.5);
            rho = dephasing_channel(&rho, &self.space, noise.gamma, half_gate);
        }
        Ok(rho)
    }

    pub fn run(
        &self,
        logical: &LogicalState,
        noise: &NoiseParams,
        options: CycleOptions,
    ) -> Result<CycleResult> {
        noise.validate()?;
        let psi_bare = self.bare_state(logical)?;

        let finish = |f_sq: f64, probs: Vec<f64>| {
            let f_sq = f_sq.clamp(0.0, 1.0);
            CycleResult {
                fidelity: f_sq.sqrt(),
                error: 1.0 - f_sq,
                branch_probabilities: probs,
                corrected: options.corrected,
                imperfect_gates: options.imperfect_gates,
            }
        };

        if !options.corrected {
            let rho = dephasing_channel(&outer(&psi_bare), &self.space, noise.gamma, noise.cycle_time);
            return Ok(finish(expectation(&rho, &psi_bare), vec![1.0]));
        }

        let psi_enc = self.enc_u.dot(&psi_bare);
        let stored = dephasing_channel(&outer(&psi_enc), &self.space, noise.gamma, noise.cycle_time);
        let decoded = if options.imperfect_gates {
            self.decode_imperfect(&stored, noise)?
        } else {
            self.dec_u.dot(&stored).dot(&adjoint(&self.dec_u))
        };

        let total = trace(&decoded).re;
        let mut probs = Vec::with_capacity(self.branch_sets.len());
        let dim = self.space.dim();
        let mut rho_out: Array2<C64> = Array2::zeros((dim, dim));
        for (set, perm) in self.branch_sets.iter().zip(self.recoveries.iter()) {
            let mut projected: Array2<C64> = Array2::zeros((dim, dim));
            for &i in set {
                for &j in set {
                    projected[[i, j]] = decoded[[i, j]];
                }
            }
            probs.push(projected.diag().sum().re);
            rho_out = rho_out + permute_rho(&projected, perm);
        }
        let captured: f64 = probs.iter().sum();
        if captured > total + TRACE_TOL || (captured - total).abs() > TRACE_TOL {
            return Err(Error::Integration(format!(
                "branch decomposition captured weight {captured}, trace {total}"
            )));
        }
        Ok(finish(expectation(&rho_out, &psi_bare), probs))
    }
}

/// One cycle for a code built on demand; sweeps should construct a
/// [`CyclePipeline`] once instead.
pub fn run_cycle(
    code: &CodeFamily,
    logical: &LogicalState,
    noise: &NoiseParams,
    options: CycleOptions,
) -> Result<CycleResult> {
    CyclePipeline::new(code)?.run(logical, noise, options)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GainRow {
    pub t_over_t2: f64,
    pub e_uncorrected: f64,
    pub e_corrected: f64,
    pub gain: f64,
}

/// Storage-error sweep with ideal gates: the uniform logical superposition,
/// uncorrected versus corrected, gain = E_unc/E_corr per grid point.
pub fn sweep_gain(code: &CodeFamily, grid: &[f64]) -> Result<Vec<GainRow>> {
    let pipeline = CyclePipeline::new(code)?;
    let state = LogicalState::uniform(pipeline.d);
    grid.iter()
        .map(|&t| {
            let noise = NoiseParams::storage(t);
            let unc = pipeline.run(
                &state,
                &noise,
                CycleOptions { corrected: false, imperfect_gates: false },
            )?;
            let cor = pipeline.run(
                &state,
                &noise,
                CycleOptions { corrected: true, imperfect_gates: false },
            )?;
            Ok(GainRow {
                t_over_t2: t,
                e_uncorrected: unc.error,
                e_corrected: cor.error,
                gain: unc.error / cor.error.max(f64::MIN_POSITIVE),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GateRow {
    pub t_over_t2: f64,
    pub e_uncorrected: f64,
    pub e_corrected_ideal: f64,
    pub e_corrected_imperfect: f64,
}

/// Sweep comparing ideal and imperfect decode pulses against the bare
/// baseline at fixed gate parameters.
pub fn sweep_gates(
    code: &CodeFamily,
    grid: &[f64],
    gate_infidelity: f64,
    gate_time_ratio: f64,
) -> Result<Vec<GateRow>> {
    let pipeline = CyclePipeline::new(code)?;
    let state = LogicalState::uniform(pipeline.d);
    grid.iter()
        .map(|&t| {
            let noise = NoiseParams::with_gates(t, gate_infidelity, gate_time_ratio);
            let unc = pipeline.run(
                &state,
                &noise,
                CycleOptions { corrected: false, imperfect_gates: false },
            )?;
            let ideal = pipeline.run(
                &state,
                &noise,
                CycleOptions { corrected: true, imperfect_gates: false },
            )?;
            let rough = pipeline.run(
                &state,
                &noise,
                CycleOptions { corrected: true, imperfect_gates: true },
            )?;
            Ok(GateRow {
                t_over_t2: t,
                e_uncorrected: unc.error,
                e_corrected_ideal: ideal.error,
                e_corrected_imperfect: rough.error,
            })
        })
        .collect()
}

/// Number of grid points where imperfect-gate correction still beats bare
/// storage, the width measure for the crossover comparison.
pub fn advantage_window(rows: &[GateRow]) -> usize {
    rows.iter().filter(|r| r.e_corrected_imperfect < r.e_uncorrected).count()
}

/// Log-spaced grid, endpoints included.
pub fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(min > 0.0 && max > min && points >= 2);
    let (a, b) = (min.ln(), max.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// The pinned grid the crossover comparison is evaluated on.
pub fn crossover_grid() -> Vec<f64> {
    log_grid(1e-4, 1.0, 25)
}

/// Least-squares slope of ln y against ln x.
pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys.iter())
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pairs.len() as f64;
    let mean_x: f64 = pairs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y: f64 = pairs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let cov: f64 = pairs.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let var: f64 = pairs.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    cov / var
}
