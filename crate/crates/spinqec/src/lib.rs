//! Logical qudits encoded in single large spins.
//!
//! A spin-S system has 2S+1 levels |m⟩, m = −S..S. Picking codewords as sparse,
//! mirror-symmetric superpositions of those levels gives qudit codes whose
//! Knill-Laflamme conditions reduce to exact rational moment identities in
//! ⟨S_Z^n⟩. This crate builds those code families, certifies the KL conditions
//! (exactly where the error model is diagonal, numerically otherwise),
//! synthesizes encoding and decoding pulse sequences out of two-level Givens
//! rotations, simulates a full dephasing error-correction cycle, and compares
//! qudit against qubit resource costs.
//!
//! Modules follow the pipeline order:
//!
//! * [`spin`]: half-integer arithmetic, spin operators, exact √(p/q) amplitudes
//! * [`codes`]: codeword families (distance 3 and 5, Z and XYZ models, multi-qudit)
//! * [`kl`]: Knill-Laflamme certification and moment tables
//! * [`pulse`]: Givens-rotation encoder/decoder synthesis
//! * [`sim`]: dephasing channel, Lindblad oracle, error-correction cycle
//! * [`resources`]: qudit vs. surface-code qubit dimension counting
//! * [`cli`]: command-line front end shared by the `spinqec` binary

pub mod cli;
pub mod codes;
pub mod kl;
pub mod pulse;
pub mod resources;
pub mod sim;
pub mod spin;

pub use codes::{build_multiqudit_code, build_xyz_code, build_z_code, CodeFamily, CodeSpec, ErrorModel};
pub use kl::{verify_full_kl, verify_z_kl, KlReport, Verdict};
pub use pulse::{synthesize_decoder, synthesize_encoder, PulseSequence};
pub use sim::{run_cycle, CycleOptions, CycleResult, NoiseParams};
pub use spin::{Amplitude, HalfInt, SpinOperator, SpinSpace};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Parameters outside the constructible family (d < 2, unsupported t, bad level index).
    #[error("domain error: {0}")]
    Domain(String),
    /// A dense representation would exceed the configured dimension cap.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// Pulse synthesis could not produce a verified sequence.
    #[error("synthesis error: {0}")]
    Synthesis(String),
    /// Numerical integration lost the trace or was asked for nonsense steps.
    #[error("integration error: {0}")]
    Integration(String),
    /// A serialized code file violated the schema.
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
