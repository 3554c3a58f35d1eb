//! Encoding and decoding pulse sequences built from two-level Givens
//! rotations.
//!
//! A step G(p, q, θ) rotates the plane spanned by levels |p⟩ and |q⟩:
//! |p⟩ → cos θ|p⟩ + sin θ|q⟩, |q⟩ → −sin θ|p⟩ + cos θ|q⟩, identity elsewhere.
//! θ is the full rotation angle in that plane, so cos θ is directly the
//! amplitude ratio the step leaves on |p⟩; wherever the synthesis works in
//! exact arithmetic the cosine is stored as an exact √(p/q) alongside the
//! f64 angle.
//!
//! The encoder maps d designated input levels onto the d codewords, one
//! codeword stage at a time: move the input amplitude onto a chain head
//! inside the codeword support (swapping out at most one other input that
//! happens to live there), then run the inverse of a telescoped reduction
//! that drains the codeword onto that head. The decoder inverts the code on
//! the error-extended space: a layer of ±π/4 rotations splits every mirror
//! pair into symmetric and antisymmetric halves, after which per-codeword
//! merges route the codeword component, the S_Z component, and (for t = 2)
//! the S_Z² component onto disjoint single levels, the branch targets a
//! syndrome measurement distinguishes.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use ndarray::{Array1, Array2};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::codes::CodeFamily;
use crate::spin::{rat, Amplitude, HalfInt, SpinSpace, C64};
use crate::{Error, Result};

/// Tolerance for the internal verification every synthesis run must pass
/// before a sequence is returned.
pub const SYNTH_TOL: f64 = 1e-12;

/// One two-level y-axis rotation.
#[derive(Clone, PartialEq, Debug)]
pub struct PulseStep {
    pub levels: (HalfInt, HalfInt),
    pub angle: f64,
    /// cos(angle) as an exact amplitude when the synthesis arithmetic was
    /// exact; None for the numerically derived steps.
    pub cos_exact: Option<Amplitude>,
}

impl PulseStep {
    fn new(p: HalfInt, q: HalfInt, angle: f64, cos_exact: Option<Amplitude>) -> Self {
        PulseStep { levels: (p, q), angle, cos_exact }
    }

    /// Full-space unitary of this step, with an optional over-rotation added
    /// to the angle (used to model imperfect gates).
    pub fn unitary(&self, space: &SpinSpace, angle_offset: f64) -> Result<Array2<C64>> {
        let (p, q) = self.indices(space)?;
        let dim = space.dim();
        let mut u = Array2::eye(dim);
        let theta = self.angle + angle_offset;
        let (c, s) = (theta.cos(), theta.sin());
        u[[p, p]] = C64::new(c, 0.0);
        u[[p, q]] = C64::new(-s, 0.0);
        u[[q, p]] = C64::new(s, 0.0);
        u[[q, q]] = C64::new(c, 0.0);
        Ok(u)
    }

    fn indices(&self, space: &SpinSpace) -> Result<(usize, usize)> {
        let idx = |m: HalfInt| {
            space.index_of(m).ok_or_else(|| {
                Error::Dimension(format!("level {m} outside spin {}/2", space.two_s()))
            })
        };
        let p = idx(self.levels.0)?;
        let q = idx(self.levels.1)?;
        if p == q {
            return Err(Error::Synthesis(format!("degenerate step at level {}", self.levels.0)));
        }
        Ok((p, q))
    }
}

/// Branch targets the decoder leaves behind: `branches[b][i]` is the single
/// level carrying codeword i's amplitude in error branch b (b = 0 the
/// no-error branch, b = 1 the S_Z branch, b = 2 the S_Z² branch for t = 2).
/// An ancilla measurement distinguishing these disjoint supports selects the
/// branch; the structure here is that measurement's bookkeeping.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AncillaSplit {
    pub branches: Vec<Vec<HalfInt>>,
}

/// An ordered pulse program over one spin, applied first step first.
#[derive(Clone, PartialEq, Debug)]
pub struct PulseSequence {
    pub space: SpinSpace,
    pub steps: Vec<PulseStep>,
    pub ancilla: Option<AncillaSplit>,
}

impl PulseSequence {
    /// Apply the steps in order to a state vector.
    pub fn apply(&self, state: &Array1<C64>) -> Result<Array1<C64>> {
        if state.len() != self.space.dim() {
            return Err(Error::Dimension(format!(
                "state has {} entries, space needs {}",
                state.len(),
                self.space.dim()
            )));
        }
        let mut v = state.clone();
        for step in &self.steps {
            let (p, q) = step.indices(&self.space)?;
            let (c, s) = (step.angle.cos(), step.angle.sin());
            let (xp, xq) = (v[p], v[q]);
            v[p] = xp * c - xq * s;
            v[q] = xp * s + xq * c;
        }
        Ok(v)
    }

    /// Product of all step unitaries, first step rightmost.
    pub fn unitary(&self) -> Result<Array2<C64>> {
        let mut u = Array2::eye(self.space.dim());
        for step in &self.steps {
            u = step.unitary(&self.space, 0.0)?.dot(&u);
        }
        Ok(u)
    }
}

/// Apply a sequence to a state (free-function form of [`PulseSequence::apply`]).
pub fn apply_sequence(seq: &PulseSequence, state: &Array1<C64>) -> Result<Array1<C64>> {
    seq.apply(state)
}

/// Compose a sequence into one unitary matrix.
pub fn compose_unitary(seq: &PulseSequence) -> Result<Array2<C64>> {
    seq.unitary()
}

/// The d lowest levels of the code's spin, the default encoder inputs.
pub fn default_input_levels(code: &CodeFamily) -> Vec<HalfInt> {
    code.spin.levels().take(code.spec.d as usize).collect()
}

// Zero `source` into `target`: returns the reduction angle φ (the step
// G(target, source, −φ) performs the zeroing) and cos φ as an exact
// amplitude; `target` is updated to +√(target² + source²).
fn merge_level(target: &mut Amplitude, source: &Amplitude) -> Result<(f64, Amplitude)> {
    let rho_sq = target.square() + source.square();
    if rho_sq == BigRational::from_integer(0.into()) {
        return Err(Error::Synthesis("merging two zero amplitudes".into()));
    }
    let phi = source.to_f64().atan2(target.to_f64());
    let cos = Amplitude::from_sign_radicand(
        if target.is_zero() { 0 } else { target.sign() },
        target.square() / &rho_sq,
    )
    .map_err(|e| Error::Synthesis(e.to_string()))?;
    *target = Amplitude::sqrt(rho_sq).map_err(|e| Error::Synthesis(e.to_string()))?;
    Ok((phi, cos))
}

// Support of a single-qudit codeword ordered by (|2m|, 2m) ascending, the
// deterministic chain order used by both synthesizers.
fn sorted_support(code: &CodeFamily, label: usize) -> Result<Vec<(HalfInt, Amplitude)>> {
    let mut support = code.codewords[label].single_support()?;
    support.sort_by_key(|(m, _)| (m.twice().abs(), m.twice()));
    Ok(support)
}

/// Build the encoder: a sequence whose composed unitary maps
/// |input_levels[k]⟩ → |k_L⟩ for every k, verified to 1e−12 before return.
///
/// Stages run in label order. Each stage first moves the stage's input
/// amplitude onto a chain head inside the codeword support with a ±π/2 swap;
/// if a later stage's input currently occupies a support level, that level
/// becomes the head and the swap relocates the other input to the vacated
/// position (sign tracked). More than one such occupied support level has no
/// single-swap resolution and is reported as a synthesis failure.
pub fn synthesize_encoder(code: &CodeFamily, input_levels: &[HalfInt]) -> Result<PulseSequence> {
    if !code.is_single_qudit() {
        return Err(Error::Domain("encoder synthesis addresses a single spin".into()));
    }
    let d = code.codewords.len();
    if input_levels.len() != d {
        return Err(Error::Domain(format!(
            "need {d} input levels, got {}",
            input_levels.len()
        )));
    }
    for m in input_levels {
        if !code.spin.contains(*m) {
            return Err(Error::Domain(format!("input level {m} outside the spin space")));
        }
    }
    {
        let distinct: BTreeSet<HalfInt> = input_levels.iter().copied().collect();
        if distinct.len() != d {
            return Err(Error::Domain("input levels must be distinct".into()));
        }
    }

    let mut positions: Vec<HalfInt> = input_levels.to_vec();
    let mut signs: Vec<i8> = vec![1; d];
    let mut steps: Vec<PulseStep> = Vec::new();

    for k in 0..d {
        let mut chain = sorted_support(code, k)?;

        // later inputs currently parked inside this support
        let foreign: Vec<usize> = (k + 1..d)
            .filter(|j| chain.iter().any(|(m, _)| *m == positions[*j]))
            .collect();
        if foreign.len() > 1 {
            return Err(Error::Synthesis(format!(
                "codeword {k} support holds {} later input amplitudes; one swap cannot clear them",
                foreign.len()
            )));
        }
        let head = match foreign.first() {
            Some(j) => positions[*j],
            None => chain[0].0,
        };
        if let Some(idx) = chain.iter().position(|(m, _)| *m == head) {
            let entry = chain.remove(idx);
            chain.insert(0, entry);
        }

        let in_cur = positions[k];
        if in_cur != head {
            // +π/2 carries a positive input amplitude onto the head and
            // flips the sign of whatever it displaces; −π/2 does the reverse
            let theta = if signs[k] > 0 { FRAC_PI_2 } else { -FRAC_PI_2 };
            steps.push(PulseStep::new(in_cur, head, theta, Some(Amplitude::zero())));
            if let Some(j) = foreign.first() {
                positions[*j] = in_cur;
                if theta > 0.0 {
                    signs[*j] = -signs[*j];
                }
            }
        } else if signs[k] < 0 {
            return Err(Error::Synthesis(format!(
                "input {k} reached its chain head with a negative sign"
            )));
        }

        // telescoped reduction: drain the chain tail onto the head, then
        // emit the inverse steps in reverse order so the stage rebuilds the
        // codeword from the head
        let mut amps: Vec<Amplitude> = chain.iter().map(|(_, a)| a.clone()).collect();
        let mut reduction: Vec<PulseStep> = Vec::new();
        for j in (1..chain.len()).rev() {
            let source = amps[j].clone();
            let (phi, cos) = merge_level(&mut amps[j - 1], &source)?;
            reduction.push(PulseStep::new(chain[j - 1].0, chain[j].0, -phi, Some(cos)));
        }
        if !amps[0].square().is_one() {
            return Err(Error::Synthesis(format!(
                "codeword {k} has squared norm {}, cannot be built unitarily",
                amps[0].square()
            )));
        }
        for step in reduction.into_iter().rev() {
            steps.push(PulseStep::new(step.levels.0, step.levels.1, -step.angle, step.cos_exact));
        }
    }

    let seq = PulseSequence { space: code.spin, steps, ancilla: None };
    verify_encoder(code, input_levels, &seq)?;
    Ok(seq)
}

fn unitarity_defect(u: &Array2<C64>) -> f64 {
    let gram = u.t().mapv(|c| c.conj()).dot(u);
    let dim = u.nrows();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((gram[[i, j]] - expect).norm());
        }
    }
    worst
}

fn verify_encoder(code: &CodeFamily, input_levels: &[HalfInt], seq: &PulseSequence) -> Result<()> {
    let u = seq.unitary()?;
    let defect = unitarity_defect(&u);
    if defect > SYNTH_TOL {
        return Err(Error::Synthesis(format!("encoder unitarity defect {defect:.3e}")));
    }
    for (k, cw) in code.codewords.iter().enumerate() {
        let idx = code.spin.index_of(input_levels[k]).unwrap();
        let mut basis = Array1::zeros(code.spin.dim());
        basis[idx] = C64::new(1.0, 0.0);
        let image = u.dot(&basis);
        let expected = cw.to_dense(&code.spin)?;
        let dev = image
            .iter()
            .zip(expected.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        if dev > SYNTH_TOL {
            return Err(Error::Synthesis(format!(
                "encoder misses codeword {k} by {dev:.3e}"
            )));
        }
    }
    Ok(())
}

// Real rotation of a step applied to a real-valued work vector, used while
// propagating exact-arithmetic phases into the numeric t = 2 branch.
fn apply_step_real(space: &SpinSpace, w: &mut Array1<f64>, step: &PulseStep) {
    let p = space.index_of(step.levels.0).unwrap();
    let q = space.index_of(step.levels.1).unwrap();
    let (c, s) = (step.angle.cos(), step.angle.sin());
    let (wp, wq) = (w[p], w[q]);
    w[p] = wp * c - wq * s;
    w[q] = wp * s + wq * c;
}

/// Build the decoder for a t = 1 or t = 2 single-qudit code.
///
/// Layer A rotates every occupied mirror pair by −π/4, sending each
/// codeword's symmetric half to the negative levels and its S_Z
/// (antisymmetric) half to the positive levels. Layer B merges each
/// codeword's negative-side amplitudes onto its outermost negative level
/// (branch 0); layer C merges the S_Z weights onto the outermost positive
/// level (branch 1). For t = 2, layer D routes the S_Z² component, which
/// layer B has confined to the remaining negative levels, onto the
/// second-outermost negative level (branch 2); those merges are computed in
/// f64 because layer B's rotations have already mixed the radicands. The
/// result is verified against the explicit error basis to 1e−12.
pub fn synthesize_decoder(code: &CodeFamily) -> Result<PulseSequence> {
    if !code.is_single_qudit() {
        return Err(Error::Domain("decoder synthesis addresses a single spin".into()));
    }
    let t = code.spec.t;
    if t != 1 && t != 2 {
        return Err(Error::Domain(format!("no decoder construction for t={t}")));
    }
    let space = code.spin;
    let d = code.codewords.len();
    let sqrt2 = Amplitude::sqrt_frac(2, 1);
    let mu2 = code.codewords[0].moment(2);
    let mut steps: Vec<PulseStep> = Vec::new();

    // layer A: split every occupied mirror pair
    let occupied_abs: BTreeSet<i32> = code
        .codewords
        .iter()
        .flat_map(|cw| cw.terms.keys().map(|l| l[0].twice().abs()))
        .collect();
    for a in &occupied_abs {
        steps.push(PulseStep::new(
            HalfInt::from_twice(-a),
            HalfInt::from_twice(*a),
            -FRAC_PI_4,
            Some(Amplitude::sqrt_frac(1, 2)),
        ));
    }

    // per-codeword level lists, negative side ascending |m|
    let mut neg_levels: Vec<Vec<(HalfInt, Amplitude)>> = Vec::with_capacity(d);
    for k in 0..d {
        let neg: Vec<(HalfInt, Amplitude)> = sorted_support(code, k)?
            .into_iter()
            .filter(|(m, _)| m.twice() < 0)
            .collect();
        neg_levels.push(neg);
    }

    // layer B: codeword branch onto the outermost negative level
    let mut branch0: Vec<HalfInt> = Vec::with_capacity(d);
    let mut b_steps: Vec<Vec<PulseStep>> = Vec::with_capacity(d);
    for neg in &neg_levels {
        let (target, target_amp) = neg.last().expect("codewords are nonempty").clone();
        branch0.push(target);
        let mut acc = target_amp.mul(&sqrt2);
        let mut cw_steps = Vec::new();
        for (lvl, amp) in &neg[..neg.len() - 1] {
            let (phi, cos) = merge_level(&mut acc, &amp.mul(&sqrt2))?;
            cw_steps.push(PulseStep::new(target, *lvl, -phi, Some(cos)));
        }
        if !acc.square().is_one() {
            return Err(Error::Synthesis(format!(
                "codeword branch norm {} after merging, expected 1",
                acc.square()
            )));
        }
        steps.extend(cw_steps.iter().cloned());
        b_steps.push(cw_steps);
    }

    // layer C: S_Z branch onto the outermost positive level, weights m·a·√2/√μ₂
    let inv_root_mu2 = Amplitude::sqrt(mu2.recip()).map_err(|e| Error::Synthesis(e.to_string()))?;
    let mut branch1: Vec<HalfInt> = Vec::with_capacity(d);
    for k in 0..d {
        let pos: Vec<(HalfInt, Amplitude)> = sorted_support(code, k)?
            .into_iter()
            .filter(|(m, _)| m.twice() > 0)
            .collect();
        let weight = |m: HalfInt, a: &Amplitude| {
            a.mul(&sqrt2).scaled_by(&m.to_rational()).mul(&inv_root_mu2)
        };
        let (target, target_amp) = pos.last().expect("codewords are nonempty").clone();
        branch1.push(target);
        let mut acc = weight(target, &target_amp);
        for (lvl, amp) in &pos[..pos.len() - 1] {
            let (phi, cos) = merge_level(&mut acc, &weight(*lvl, amp))?;
            steps.push(PulseStep::new(target, *lvl, -phi, Some(cos)));
        }
        if !acc.square().is_one() {
            return Err(Error::Synthesis(format!(
                "S_Z branch norm {} after merging, expected 1",
                acc.square()
            )));
        }
    }

    // layer D: S_Z² branch for t = 2
    let mut branches = vec![branch0.clone(), branch1.clone()];
    if t == 2 {
        let mu4 = code.codewords[0].moment(4);
        let var = &mu4 - &mu2 * &mu2;
        let var_f = var.to_f64().ok_or_else(|| Error::Synthesis("moment overflow".into()))?;
        if var_f <= 0.0 {
            return Err(Error::Synthesis("S_Z² component is not independent".into()));
        }
        let mut branch2: Vec<HalfInt> = Vec::with_capacity(d);
        // a junk level for the occasional sign flip: smallest level that is
        // not a branch target (its content is higher-order residue)
        let targets_so_far: BTreeSet<HalfInt> =
            branch0.iter().chain(branch1.iter()).copied().collect();
        let mut d_steps: Vec<PulseStep> = Vec::new();
        let mut flips_needed: Vec<(usize, HalfInt)> = Vec::new();
        for (k, neg) in neg_levels.iter().enumerate() {
            if neg.len() < 2 {
                return Err(Error::Synthesis(format!(
                    "codeword {k} has too few mirror pairs for a t=2 decoder"
                )));
            }
            let target = neg[neg.len() - 2].0;
            branch2.push(target);
            // S_Z² component after layer A: √2·a·(m² − μ₂)/√var on the
            // negative levels, then push it through this codeword's layer B
            let mut w = Array1::zeros(space.dim());
            for (lvl, amp) in neg {
                let m_sq = lvl.to_rational() * lvl.to_rational();
                let coeff = (&m_sq - &mu2).to_f64().unwrap_or(0.0);
                w[space.index_of(*lvl).unwrap()] =
                    2.0f64.sqrt() * amp.to_f64() * coeff / var_f.sqrt();
            }
            for step in &b_steps[k] {
                apply_step_real(&space, &mut w, step);
            }
            let ti = space.index_of(target).unwrap();
            for (lvl, _) in &neg[..neg.len() - 2] {
                let li = space.index_of(*lvl).unwrap();
                let phi = w[li].atan2(w[ti]);
                d_steps.push(PulseStep::new(target, *lvl, -phi, None));
                w[ti] = w[ti].hypot(w[li]);
                w[li] = 0.0;
            }
            if w[ti] < 0.0 {
                flips_needed.push((k, target));
            }
        }
        // a two-pair codeword gets no merge step, so a negative component
        // can survive; flip it against a junk level
        let all_targets: BTreeSet<HalfInt> =
            targets_so_far.iter().copied().chain(branch2.iter().copied()).collect();
        for (_, target) in flips_needed {
            let junk = space
                .levels()
                .filter(|m| !all_targets.contains(m) && *m != target)
                .min_by_key(|m| (m.twice().abs(), m.twice()))
                .ok_or_else(|| Error::Synthesis("no free level for a sign flip".into()))?;
            let minus_one = Amplitude::from_sign_radicand(-1, rat(1, 1))
                .map_err(|e| Error::Synthesis(e.to_string()))?;
            d_steps.push(PulseStep::new(target, junk, PI, Some(minus_one)));
        }
        steps.extend(d_steps);
        branches.push(branch2);
    }

    {
        let flat: Vec<HalfInt> = branches.iter().flatten().copied().collect();
        let distinct: BTreeSet<HalfInt> = flat.iter().copied().collect();
        if distinct.len() != flat.len() {
            return Err(Error::Synthesis("branch targets collide".into()));
        }
    }

    let seq = PulseSequence {
        space,
        steps,
        ancilla: Some(AncillaSplit { branches }),
    };
    verify_decoder(code, &seq)?;
    Ok(seq)
}

fn verify_decoder(code: &CodeFamily, seq: &PulseSequence) -> Result<()> {
    let u = seq.unitary()?;
    let defect = unitarity_defect(&u);
    if defect > SYNTH_TOL {
        return Err(Error::Synthesis(format!("decoder unitarity defect {defect:.3e}")));
    }
    let branches = &seq.ancilla.as_ref().expect("decoder carries branch targets").branches;
    let space = &code.spin;
    let sz = crate::spin::SpinOperator::sz(*space);
    for (k, cw) in code.codewords.iter().enumerate() {
        let psi = cw.to_dense(space)?;
        let z1 = sz.apply(&psi);
        let z2 = sz.apply(&z1);
        let mut basis: Vec<Array1<C64>> = vec![psi.clone()];
        // S_Z|ψ⟩ is orthogonal to |ψ⟩ by mirror symmetry; S_Z²|ψ⟩ needs its
        // codeword component removed
        let n1: f64 = z1.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        basis.push(z1.mapv(|c| c / n1));
        if branches.len() > 2 {
            let overlap: C64 = psi.iter().zip(z2.iter()).map(|(a, b)| a.conj() * b).sum();
            let ortho = &z2 - &psi.mapv(|c| c * overlap);
            let n2: f64 = ortho.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            basis.push(ortho.mapv(|c| c / n2));
        }
        for (b, vec) in basis.iter().enumerate() {
            let image = u.dot(vec);
            let target = space.index_of(branches[b][k]).unwrap();
            let mut dev = (image[target] - C64::new(1.0, 0.0)).norm();
            for (i, c) in image.iter().enumerate() {
                if i != target {
                    dev = dev.max(c.norm());
                }
            }
            if dev > SYNTH_TOL {
                return Err(Error::Synthesis(format!(
                    "decoder branch {b} misses codeword {k} by {dev:.3e}"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Serialized form.

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct PulseFile {
    pub two_s: u32,
    pub steps: Vec<StepFile>,
    pub ancilla: Option<AncillaFile>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct StepFile {
    /// Doubled levels 2m of the rotated pair.
    pub m1: i32,
    pub m2: i32,
    pub angle: f64,
    pub cos: Option<CosFile>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CosFile {
    pub sign: i8,
    pub p: u64,
    pub q: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AncillaFile {
    pub branches: Vec<Vec<i32>>,
}

impl PulseSequence {
    pub fn to_file(&self) -> Result<PulseFile> {
        let steps = self
            .steps
            .iter()
            .map(|step| {
                let cos = step
                    .cos_exact
                    .as_ref()
                    .map(|a| -> Result<CosFile> {
                        let rad = a.radicand();
                        let p = rad.numer().to_u64().ok_or_else(|| {
                            Error::Schema("cosine radicand exceeds u64".into())
                        })?;
                        let q = rad.denom().to_u64().ok_or_else(|| {
                            Error::Schema("cosine radicand exceeds u64".into())
                        })?;
                        Ok(CosFile { sign: a.sign(), p, q })
                    })
                    .transpose()?;
                Ok(StepFile {
                    m1: step.levels.0.twice(),
                    m2: step.levels.1.twice(),
                    angle: step.angle,
                    cos,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ancilla = self.ancilla.as_ref().map(|a| AncillaFile {
            branches: a
                .branches
                .iter()
                .map(|b| b.iter().map(|m| m.twice()).collect())
                .collect(),
        });
        Ok(PulseFile { two_s: self.space.two_s(), steps, ancilla })
    }

    pub fn from_file(file: &PulseFile) -> Result<PulseSequence> {
        let space = SpinSpace::new(file.two_s);
        let steps = file
            .steps
            .iter()
            .map(|sf| {
                let cos = sf
                    .cos_exact_amplitude()
                    .map_err(|e| Error::Schema(e.to_string()))?;
                Ok(PulseStep {
                    levels: (HalfInt::from_twice(sf.m1), HalfInt::from_twice(sf.m2)),
                    angle: sf.angle,
                    cos_exact: cos,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ancilla = file.ancilla.as_ref().map(|a| AncillaSplit {
            branches: a
                .branches
                .iter()
                .map(|b| b.iter().map(|tw| HalfInt::from_twice(*tw)).collect())
                .collect(),
        });
        Ok(PulseSequence { space, steps, ancilla })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_file()?)?;
        s.push('\n');
        Ok(s)
    }
}

impl StepFile {
    fn cos_exact_amplitude(&self) -> Result<Option<Amplitude>> {
        self.cos
            .as_ref()
            .map(|c| {
                if c.q == 0 {
                    return Err(Error::Schema("zero denominator in cosine".into()));
                }
                Amplitude::from_sign_radicand(c.sign, rat(c.p as i64, c.q as i64))
                    .map_err(|e| Error::Schema(e.to_string()))
            })
            .transpose()
    }
}
