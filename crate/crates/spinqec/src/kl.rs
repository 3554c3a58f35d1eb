//! Correctability certification for codeword families.
//!
//! A code corrects an error set {E_a} iff ⟨i_L|E_a†E_b|j_L⟩ = λ_ab δ_ij for
//! all pairs of errors: error images of distinct codewords stay orthogonal,
//! and diagonal expectations do not depend on the codeword. Two tiers:
//!
//! * exact mode ([`verify_z_kl`]): for diagonal error words the conditions
//!   collapse to rational moment equalities ⟨i_L|S_Z^n|i_L⟩, n = 0..2t,
//!   plus disjoint supports; checked in exact arithmetic, zero tolerance
//! * numeric mode ([`verify_full_kl`]): arbitrary operator words over
//!   {S_X, S_Y, S_Z, S_+, S_−} applied as f64 vector maps, residuals
//!   compared against a tolerance after scaling by the largest diagonal
//!   expectation (word pairs like S_−S_−S_+S_+ reach ~1e7 at spin ~100, so
//!   raw f64 differences cannot sit at 1e−12)
//!
//! [`verify_ladder_identity`] checks the operator identity
//! ⟨S_+S_− + S_−S_+⟩ = 2S(S+1) − 2⟨S_Z²⟩, a useful cross-check that the
//! ladder matrix elements are consistent with the Casimir.

use std::collections::BTreeMap;

use ndarray::Array1;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::codes::{CodeFamily, Codeword, LevelTuple};
use crate::spin::{ladder_element, HalfInt, SpinSpace, C64};
use crate::{Error, Result};

/// Largest single-qudit dimension the numeric verifier will hold as dense
/// vectors. Covers every family the builders emit up to xyz d=6, t=2
/// (dimension 220); beyond that the caller gets a dimension error rather
/// than a silent slowdown.
pub const DENSE_DIM_CAP: usize = 256;

/// Single-site operator alphabet for error words.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ErrorOp {
    Sx,
    Sy,
    Sz,
    Splus,
    Sminus,
}

impl std::fmt::Display for ErrorOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ErrorOp::Sx => "S_X",
            ErrorOp::Sy => "S_Y",
            ErrorOp::Sz => "S_Z",
            ErrorOp::Splus => "S_+",
            ErrorOp::Sminus => "S_-",
        };
        write!(f, "{s}")
    }
}

/// Product of site-local factors; factors apply right to left, so the empty
/// word is the identity. Sites index the qudits of a multi-qudit family.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ErrorWord {
    pub factors: Vec<(usize, ErrorOp)>,
}

impl ErrorWord {
    pub fn identity() -> Self {
        ErrorWord { factors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    fn describe(&self, n_sites: usize) -> String {
        if self.factors.is_empty() {
            return "I".to_string();
        }
        self.factors
            .iter()
            .map(|(site, op)| {
                if n_sites > 1 {
                    format!("{op}[{site}]")
                } else {
                    op.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// All error words the verifier should consider; the identity word is always
/// present (it carries the orthogonality part of the conditions).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ErrorSet {
    pub max_len: u32,
    pub n_sites: usize,
    pub words: Vec<ErrorWord>,
}

impl ErrorSet {
    /// Diagonal words S_Z^k, k = 0..t, on one site.
    pub fn z_words(t: u32) -> Self {
        let words = (0..=t)
            .map(|k| ErrorWord { factors: vec![(0, ErrorOp::Sz); k as usize] })
            .collect();
        ErrorSet { max_len: t, n_sites: 1, words }
    }

    /// Every word of length ≤ t over {S_X, S_Y, S_Z} on a single site.
    pub fn xyz_words(t: u32) -> Self {
        Self::xyz_words_multi(t, 1)
    }

    /// Every word of length ≤ t over {S_X, S_Y, S_Z} acting on any of
    /// `n_sites` qudits, cross-site products included.
    pub fn xyz_words_multi(t: u32, n_sites: usize) -> Self {
        let alphabet: Vec<(usize, ErrorOp)> = (0..n_sites)
            .flat_map(|site| {
                [ErrorOp::Sx, ErrorOp::Sy, ErrorOp::Sz]
                    .into_iter()
                    .map(move |op| (site, op))
            })
            .collect();
        let mut words = vec![ErrorWord::identity()];
        let mut layer = vec![ErrorWord::identity()];
        for _ in 0..t {
            let mut next = Vec::with_capacity(layer.len() * alphabet.len());
            for word in &layer {
                for factor in &alphabet {
                    let mut factors = word.factors.clone();
                    factors.push(*factor);
                    next.push(ErrorWord { factors });
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        ErrorSet { max_len: t, n_sites, words }
    }

    /// Arbitrary word list; the identity is prepended when missing.
    pub fn from_words(words: Vec<ErrorWord>, n_sites: usize) -> Self {
        let max_len = words.iter().map(|w| w.len() as u32).max().unwrap_or(0);
        let mut all = Vec::with_capacity(words.len() + 1);
        if !words.iter().any(|w| w.is_empty()) {
            all.push(ErrorWord::identity());
        }
        all.extend(words);
        ErrorSet { max_len, n_sites, words: all }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KlMode {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One moment order across all codewords, exact.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: u32,
    /// ⟨i_L|S_Z^n|i_L⟩ per codeword, rendered as exact fractions.
    pub values: Vec<String>,
    pub equal: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub context: String,
    pub magnitude: f64,
}

/// Outcome of a certification run. In exact mode the residual fields are
/// rational differences converted to f64 (0.0 on pass); in numeric mode they
/// are scaled by `residual_scale`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct KlReport {
    pub code: String,
    pub mode: KlMode,
    pub t: u32,
    pub words: usize,
    pub tolerance: Option<f64>,
    pub moments: Vec<MomentRow>,
    pub max_offdiag: f64,
    pub max_diag_mismatch: f64,
    pub residual_scale: f64,
    pub violations: Vec<Violation>,
    pub verdict: Verdict,
}

impl KlReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Exact ⟨S_Z^n⟩ of one codeword (site 0 for multi-qudit tuples, where every
/// site gives the same value).
pub fn moment_exact(codeword: &Codeword, n: u32) -> BigRational {
    codeword.moment(n)
}

fn moment_table(code: &CodeFamily, t: u32) -> (Vec<MomentRow>, Vec<Violation>, f64) {
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for n in 0..=2 * t {
        let values: Vec<BigRational> =
            code.codewords.iter().map(|cw| cw.moment(n)).collect();
        let equal = values.iter().all(|v| *v == values[0]);
        if !equal {
            for (i, v) in values.iter().enumerate().skip(1) {
                if *v != values[0] {
                    let diff = rational_to_f64(&(v - &values[0])).abs();
                    worst = worst.max(diff);
                    violations.push(Violation {
                        context: format!(
                            "moment n={n}: codeword {i} gives {v}, codeword 0 gives {}",
                            values[0]
                        ),
                        magnitude: diff,
                    });
                }
            }
        }
        rows.push(MomentRow {
            n,
            values: values.iter().map(|v| v.to_string()).collect(),
            equal,
        });
    }
    (rows, violations, worst)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

fn disjointness_violations(code: &CodeFamily) -> Vec<Violation> {
    let mut out = Vec::new();
    for a in 0..code.codewords.len() {
        for b in a + 1..code.codewords.len() {
            for levels in code.codewords[a].terms.keys() {
                if code.codewords[b].terms.contains_key(levels) {
                    out.push(Violation {
                        context: format!("codewords {a} and {b} share support at {levels:?}"),
                        magnitude: f64::INFINITY,
                    });
                }
            }
        }
    }
    out
}

/// Exact certification against diagonal error words up to length t: disjoint
/// supports make every off-diagonal condition vanish structurally, so the
/// whole content is moment equality for n = 0..2t, checked as rationals.
pub fn verify_z_kl(code: &CodeFamily, t: u32) -> KlReport {
    let (moments, mut violations, worst_mismatch) = moment_table(code, t);
    let disjoint = disjointness_violations(code);
    let max_offdiag = if disjoint.is_empty() { 0.0 } else { f64::INFINITY };
    violations.extend(disjoint);
    let verdict = if violations.is_empty() { Verdict::Pass } else { Verdict::Fail };
    KlReport {
        code: code.describe(),
        mode: KlMode::Exact,
        t,
        words: (t + 1) as usize,
        tolerance: None,
        moments,
        max_offdiag,
        max_diag_mismatch: worst_mismatch,
        residual_scale: 1.0,
        violations,
        verdict,
    }
}

// Sparse complex state over level tuples; used for multi-qudit codes where a
// dense tensor space (e.g. 20^5 levels) must never be materialized.
type SparseState = BTreeMap<LevelTuple, C64>;

fn codeword_sparse(cw: &Codeword) -> SparseState {
    cw.terms
        .iter()
        .map(|(levels, amp)| (levels.clone(), C64::new(amp.to_f64(), 0.0)))
        .collect()
}

fn apply_site_op_sparse(
    space: &SpinSpace,
    state: &SparseState,
    site: usize,
    op: ErrorOp,
) -> SparseState {
    let zero = C64::new(0.0, 0.0);
    let mut out = SparseState::new();
    for (levels, value) in state {
        let m = levels[site];
        let c_up = ladder_element(space, m);
        let below = HalfInt::from_twice(m.twice() - 2);
        let c_down = if space.contains(below) { ladder_element(space, below) } else { 0.0 };
        // contributions as (level shift, coefficient);
        // S_Y = (S_+ − S_−)/(2i) = −(i/2)(S_+ − S_−)
        let contribs: [(i32, C64); 2] = match op {
            ErrorOp::Sz => [(0, C64::new(m.value(), 0.0)), (0, zero)],
            ErrorOp::Splus => [(1, C64::new(c_up, 0.0)), (0, zero)],
            ErrorOp::Sminus => [(-1, C64::new(c_down, 0.0)), (0, zero)],
            ErrorOp::Sx => [(1, C64::new(0.5 * c_up, 0.0)), (-1, C64::new(0.5 * c_down, 0.0))],
            ErrorOp::Sy => [(1, C64::new(0.0, -0.5 * c_up)), (-1, C64::new(0.0, 0.5 * c_down))],
        };
        for (delta, coeff) in contribs {
            if coeff == zero {
                continue;
            }
            let target = HalfInt::from_twice(m.twice() + 2 * delta);
            if !space.contains(target) {
                continue;
            }
            let mut next = levels.clone();
            next[site] = target;
            *out.entry(next).or_insert(zero) += coeff * value;
        }
    }
    out
}

fn apply_word_sparse(space: &SpinSpace, state: &SparseState, word: &ErrorWord) -> SparseState {
    let mut current = state.clone();
    for (site, op) in word.factors.iter().rev() {
        current = apply_site_op_sparse(space, &current, *site, *op);
    }
    current
}

fn inner_sparse(a: &SparseState, b: &SparseState) -> C64 {
    let (small, large, conj_small) = if a.len() <= b.len() { (a, b, true) } else { (b, a, false) };
    let mut acc = C64::new(0.0, 0.0);
    for (levels, v) in small {
        if let Some(w) = large.get(levels) {
            // ⟨a|b⟩ conjugates the a side
            acc += if conj_small { v.conj() * w } else { w.conj() * v };
        }
    }
    acc
}

fn apply_site_op_dense(space: &SpinSpace, v: &Array1<C64>, op: ErrorOp) -> Array1<C64> {
    let dim = space.dim();
    let mut out = Array1::zeros(dim);
    match op {
        ErrorOp::Sz => {
            for (i, m) in space.levels().enumerate() {
                out[i] = C64::new(m.value(), 0.0) * v[i];
            }
        }
        ErrorOp::Splus => {
            for (i, m) in space.levels().enumerate().take(dim - 1) {
                out[i + 1] = C64::new(ladder_element(space, m), 0.0) * v[i];
            }
        }
        ErrorOp::Sminus => {
            for (i, m) in space.levels().enumerate().skip(1) {
                let below = HalfInt::from_twice(m.twice() - 2);
                out[i - 1] = C64::new(ladder_element(space, below), 0.0) * v[i];
            }
        }
        ErrorOp::Sx => {
            let up = apply_site_op_dense(space, v, ErrorOp::Splus);
            let down = apply_site_op_dense(space, v, ErrorOp::Sminus);
            out = (up + down).mapv(|c| c * 0.5);
        }
        ErrorOp::Sy => {
            let up = apply_site_op_dense(space, v, ErrorOp::Splus);
            let down = apply_site_op_dense(space, v, ErrorOp::Sminus);
            out = (up - down).mapv(|c| c * C64::new(0.0, -0.5));
        }
    }
    out
}

fn apply_word_dense(space: &SpinSpace, v: &Array1<C64>, word: &ErrorWord) -> Array1<C64> {
    let mut current = v.clone();
    for (_, op) in word.factors.iter().rev() {
        current = apply_site_op_dense(space, &current, *op);
    }
    current
}

/// Numeric certification against an arbitrary error set. Residuals are
/// divided by max(1, largest diagonal expectation) before the tolerance
/// comparison; the report records that scale. Single-qudit codes run on
/// dense vectors (capped at [`DENSE_DIM_CAP`]), multi-qudit codes on sparse
/// tuple-keyed states.
pub fn verify_full_kl(code: &CodeFamily, set: &ErrorSet, tol: f64) -> Result<KlReport> {
    if set.n_sites != code.spec.n_qudits as usize {
        return Err(Error::Domain(format!(
            "error set addresses {} sites, code has {} qudits",
            set.n_sites, code.spec.n_qudits
        )));
    }
    for word in &set.words {
        if let Some((site, _)) = word.factors.iter().find(|(s, _)| *s >= set.n_sites) {
            return Err(Error::Domain(format!("word factor on site {site} out of range")));
        }
    }
    let d = code.codewords.len();

    // image of every codeword under every word, cached up front
    let images: Vec<Vec<SparseState>> = if code.is_single_qudit() {
        if code.spin.dim() > DENSE_DIM_CAP {
            return Err(Error::Dimension(format!(
                "dimension {} exceeds dense cap {DENSE_DIM_CAP}",
                code.spin.dim()
            )));
        }
        let dense: Vec<Array1<C64>> = code
            .codewords
            .iter()
            .map(|cw| cw.to_dense(&code.spin))
            .collect::<Result<_>>()?;
        set.words
            .iter()
            .map(|word| {
                dense
                    .iter()
                    .map(|v| {
                        let image = apply_word_dense(&code.spin, v, word);
                        code.spin
                            .levels()
                            .enumerate()
                            .filter(|(i, _)| image[*i] != C64::new(0.0, 0.0))
                            .map(|(i, m)| (vec![m], image[i]))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    } else {
        let sparse: Vec<SparseState> = code.codewords.iter().map(codeword_sparse).collect();
        set.words
            .iter()
            .map(|word| {
                sparse
                    .iter()
                    .map(|s| apply_word_sparse(&code.spin, s, word))
                    .collect()
            })
            .collect()
    };

    let mut raw_offdiag = 0.0f64;
    let mut raw_mismatch = 0.0f64;
    let mut max_diag_abs = 0.0f64;
    let mut worst_offdiag: Option<(usize, usize, usize, usize, f64)> = None;
    let mut worst_mismatch: Option<(usize, usize, usize, usize, f64)> = None;
    for (a, images_a) in images.iter().enumerate() {
        for (b, images_b) in images.iter().enumerate() {
            let mut diag = Vec::with_capacity(d);
            for (i, image_i) in images_a.iter().enumerate() {
                for (j, image_j) in images_b.iter().enumerate() {
                    let value = inner_sparse(image_i, image_j);
                    if i == j {
                        diag.push(value);
                        max_diag_abs = max_diag_abs.max(value.norm());
                    } else if value.norm() > raw_offdiag {
                        raw_offdiag = value.norm();
                        worst_offdiag = Some((a, b, i, j, value.norm()));
                    }
                }
            }
            for i in 1..d {
                let dev = (diag[i] - diag[0]).norm();
                if dev > raw_mismatch {
                    raw_mismatch = dev;
                    worst_mismatch = Some((a, b, i, 0, dev));
                }
            }
        }
    }

    let scale = max_diag_abs.max(1.0);
    let max_offdiag = raw_offdiag / scale;
    let max_diag_mismatch = raw_mismatch / scale;
    let mut violations = Vec::new();
    let word_name = |idx: usize| set.words[idx].describe(set.n_sites);
    if max_offdiag > tol {
        if let Some((a, b, i, j, dev)) = worst_offdiag {
            violations.push(Violation {
                context: format!(
                    "⟨{i}_L|({})†({})|{j}_L⟩ nonzero",
                    word_name(a),
                    word_name(b)
                ),
                magnitude: dev / scale,
            });
        }
    }
    if max_diag_mismatch > tol {
        if let Some((a, b, i, j, dev)) = worst_mismatch {
            violations.push(Violation {
                context: format!(
                    "⟨i_L|({})†({})|i_L⟩ differs between codewords {i} and {j}",
                    word_name(a),
                    word_name(b)
                ),
                magnitude: dev / scale,
            });
        }
    }

    let (moments, _, _) = moment_table(code, set.max_len);
    let verdict = if violations.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(KlReport {
        code: code.describe(),
        mode: KlMode::Numeric,
        t: set.max_len,
        words: set.words.len(),
        tolerance: Some(tol),
        moments,
        max_offdiag,
        max_diag_mismatch,
        residual_scale: scale,
        violations,
        verdict,
    })
}

/// Residual of ⟨S_+S_− + S_−S_+⟩ = 2S(S+1) − 2⟨S_Z²⟩ on a dense state,
/// relative to max(1, |rhs|). The state need not be normalized; both sides
/// scale with the squared norm.
pub fn ladder_identity_residual(space: &SpinSpace, state: &Array1<C64>) -> f64 {
    let norm_sq: f64 = state.iter().map(|c| c.norm_sqr()).sum();
    if norm_sq == 0.0 {
        return 0.0;
    }
    let up = apply_site_op_dense(space, state, ErrorOp::Splus);
    let down = apply_site_op_dense(space, state, ErrorOp::Sminus);
    let z = apply_site_op_dense(space, state, ErrorOp::Sz);
    let lhs: f64 = up.iter().chain(down.iter()).map(|c| c.norm_sqr()).sum();
    let s = space.s();
    let rhs = 2.0 * s * (s + 1.0) * norm_sq - 2.0 * z.iter().map(|c| c.norm_sqr()).sum::<f64>();
    (lhs - rhs).abs() / rhs.abs().max(1.0)
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct LadderReport {
    pub code: String,
    pub tolerance: f64,
    /// residual per codeword, same order as the family
    pub residuals: Vec<f64>,
    pub verdict: Verdict,
}

impl LadderReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Check the ladder/Casimir identity on every codeword of a single-qudit
/// family at the given tolerance.
pub fn verify_ladder_identity(code: &CodeFamily, tol: f64) -> Result<LadderReport> {
    if !code.is_single_qudit() {
        return Err(Error::Domain(
            "ladder identity check addresses a single spin".into(),
        ));
    }
    let residuals: Vec<f64> = code
        .codewords
        .iter()
        .map(|cw| Ok(ladder_identity_residual(&code.spin, &cw.to_dense(&code.spin)?)))
        .collect::<Result<_>>()?;
    let verdict = if residuals.iter().all(|r| *r <= tol) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(LadderReport { code: code.describe(), tolerance: tol, residuals, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{
        alt_qutrit_distance5, build_multiqudit_code, build_xyz_code, build_z_code,
        perturbed_qutrit_code,
    };
    use crate::spin::rat;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_sweep_passes_for_all_z_codes() {
        for t in 1..=2u32 {
            for d in 2..=8u32 {
                let code = build_z_code(d, t).unwrap();
                let report = verify_z_kl(&code, t);
                assert!(report.passed(), "d={d} t={t}: {:?}", report.violations);
                assert_eq!(report.moments.len(), (2 * t + 1) as usize);
                assert!(report.moments.iter().all(|row| row.equal));
            }
        }
    }

    #[test]
    fn qutrit_moment_row_is_25_over_4() {
        let code = build_z_code(3, 1).unwrap();
        let report = verify_z_kl(&code, 1);
        let row = report.moments.iter().find(|r| r.n == 2).unwrap();
        assert_eq!(row.values, vec!["25/4", "25/4", "25/4"]);
        for cw in &code.codewords {
            assert_eq!(moment_exact(cw, 2), rat(25, 4));
        }
    }

    #[test]
    fn distance5_qutrit_moments_match_through_fourth_order() {
        let code = build_z_code(3, 2).unwrap();
        for cw in &code.codewords {
            assert_eq!(moment_exact(cw, 2), rat(25, 1));
            assert_eq!(moment_exact(cw, 4), rat(19375, 16));
        }
        assert!(verify_z_kl(&code, 2).passed());
    }

    #[test]
    fn alt_qutrit_family_passes_the_same_suite() {
        let code = alt_qutrit_distance5();
        for cw in &code.codewords {
            assert_eq!(moment_exact(cw, 2), rat(105, 4));
            assert_eq!(moment_exact(cw, 4), rat(20625, 16));
        }
        assert!(verify_z_kl(&code, 2).passed());
    }

    #[test]
    fn perturbed_code_fails_with_the_expected_mismatch() {
        let code = perturbed_qutrit_code();
        let report = verify_z_kl(&code, 1);
        assert!(!report.passed());
        let violation = &report.violations[0];
        assert!(violation.context.contains("33/4"), "{}", violation.context);
        assert!(violation.context.contains("25/4"), "{}", violation.context);
        assert!((violation.magnitude - 2.0).abs() < 1e-15);
    }

    #[test]
    fn multiqudit_families_pass_exact_mode() {
        for t in 1..=2u32 {
            let code = build_multiqudit_code(3, t).unwrap();
            assert!(verify_z_kl(&code, t).passed());
        }
    }

    #[test]
    fn xyz_families_pass_numeric_mode() {
        for t in 1..=2u32 {
            for d in 2..=6u32 {
                let code = build_xyz_code(d, t).unwrap();
                let set = ErrorSet::xyz_words(t);
                let report = verify_full_kl(&code, &set, 1e-12).unwrap();
                assert!(report.passed(), "d={d} t={t}: {:?}", report.violations);
                // disjoint supports plus the level gap make off-diagonals
                // structural zeros, not just small numbers
                assert_eq!(report.max_offdiag, 0.0, "d={d} t={t}");
            }
        }
    }

    #[test]
    fn xyz_word_count_matches_the_alphabet() {
        assert_eq!(ErrorSet::xyz_words(1).words.len(), 4);
        assert_eq!(ErrorSet::xyz_words(2).words.len(), 13);
        assert_eq!(ErrorSet::xyz_words_multi(1, 3).words.len(), 10);
        assert_eq!(ErrorSet::xyz_words_multi(2, 5).words.len(), 241);
    }

    #[test]
    fn multiqudit_families_pass_numeric_mode_sparsely() {
        for t in 1..=2u32 {
            let code = build_multiqudit_code(3, t).unwrap();
            let set = ErrorSet::xyz_words_multi(t, code.spec.n_qudits as usize);
            let report = verify_full_kl(&code, &set, 1e-12).unwrap();
            assert!(report.passed(), "t={t}: {:?}", report.violations);
        }
    }

    #[test]
    fn z_code_is_not_certified_against_x_errors() {
        let code = build_z_code(3, 1).unwrap();
        let set = ErrorSet::from_words(
            vec![ErrorWord { factors: vec![(0, ErrorOp::Sx)] }],
            1,
        );
        let report = verify_full_kl(&code, &set, 1e-12).unwrap();
        assert!(!report.passed());
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn exact_and_numeric_modes_agree_on_z_codes() {
        for t in 1..=2u32 {
            let code = build_z_code(3, t).unwrap();
            assert!(verify_z_kl(&code, t).passed());
            let report = verify_full_kl(&code, &ErrorSet::z_words(t), 1e-12).unwrap();
            assert!(report.passed());
            assert!(report.max_offdiag <= 1e-12);
            assert!(report.max_diag_mismatch <= 1e-12);
        }
    }

    #[test]
    fn xyz_support_gap_bounds_every_word_shift() {
        for t in 1..=2u32 {
            for d in 2..=6u32 {
                let code = build_xyz_code(d, t).unwrap();
                let mut occupied: Vec<i32> = code
                    .codewords
                    .iter()
                    .flat_map(|cw| cw.terms.keys().map(|l| l[0].twice()))
                    .collect();
                occupied.sort_unstable();
                occupied.dedup();
                let min_gap = occupied.windows(2).map(|w| w[1] - w[0]).min().unwrap();
                // a word pair of total length ≤ 2t shifts by at most 2t levels
                assert!(min_gap >= 2 * (2 * t as i32) + 2, "d={d} t={t}");
            }
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let code = build_xyz_code(7, 2).unwrap();
        assert!(code.spin.dim() > DENSE_DIM_CAP);
        let err = verify_full_kl(&code, &ErrorSet::xyz_words(2), 1e-12);
        assert!(matches!(err, Err(crate::Error::Dimension(_))));
    }

    #[test]
    fn ladder_identity_holds_on_every_tabulated_codeword() {
        let families = [
            build_z_code(3, 1).unwrap(),
            build_z_code(4, 1).unwrap(),
            build_z_code(3, 2).unwrap(),
            build_xyz_code(3, 1).unwrap(),
            build_xyz_code(3, 2).unwrap(),
            alt_qutrit_distance5(),
        ];
        for code in families {
            let report = verify_ladder_identity(&code, 1e-12).unwrap();
            assert!(report.passed(), "{}: {:?}", report.code, report.residuals);
        }
    }

    #[test]
    fn ladder_identity_on_spin_half_basis_state() {
        let space = SpinSpace::new(1);
        let mut v = Array1::zeros(2);
        v[1] = C64::new(1.0, 0.0);
        // lhs = 1, rhs = 2·(3/4) − 2·(1/4) = 1
        assert!(ladder_identity_residual(&space, &v) < 1e-15);
    }

    #[test]
    fn ladder_identity_holds_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1adde7);
        for two_s in [9u32, 13, 19, 29, 99] {
            let space = SpinSpace::new(two_s);
            for _ in 0..100 {
                let mut v: Array1<C64> = Array1::from_iter(
                    (0..space.dim()).map(|_| {
                        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    }),
                );
                let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                v.mapv_inplace(|c| c / norm);
                assert!(
                    ladder_identity_residual(&space, &v) <= 1e-12,
                    "two_s={two_s}"
                );
            }
        }
    }

    #[test]
    fn multiqudit_ladder_check_is_rejected() {
        let code = build_multiqudit_code(3, 1).unwrap();
        assert!(verify_ladder_identity(&code, 1e-12).is_err());
    }
}
