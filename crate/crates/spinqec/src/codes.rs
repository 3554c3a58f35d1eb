//! Codeword families for logical qudits in a single large spin (or a small
//! tuple of identical spins).
//!
//! Every family here follows the same pattern: codeword |0_L⟩ sits on one or
//! two mirror pairs ±m, and codeword |i_L⟩ (i ≥ 1) distributes weight over
//! mirror pairs whose coefficients are closed-form square roots of rationals.
//! Mirror symmetry kills all odd ⟨S_Z^n⟩ moments, and the coefficients are
//! chosen so the even moments up to order 2t agree across codewords, which is
//! the whole Knill-Laflamme content for diagonal noise (see [`crate::kl`]).
//!
//! Families provided:
//!
//! * distance 3 (t = 1), spin S = 2d − 3/2, for a d-level logical qudit
//! * distance 5 (t = 2), spin S = 4d − 5/2
//! * XYZ variants: the same coefficients with every level stretched by 2t+1
//!   inside a larger spin, so that ladder-type errors cannot connect occupied
//!   levels either
//! * multi-qudit variants: the same coefficients on diagonal tuples
//!   |m⟩^⊗(2t+1) of 2t+1 identical spins
//! * a hard-coded alternative qutrit distance-5 coefficient set, which shows
//!   the moment equations have more than one solution

use std::collections::BTreeMap;

use ndarray::Array1;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::spin::{rat, Amplitude, HalfInt, SpinSpace, C64};
use crate::{Error, Result};

/// Which single-qudit error set the family is built to correct.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorModel {
    /// Diagonal (dephasing) errors only: words in S_Z.
    Z,
    /// Words in S_X, S_Y, S_Z up to length t.
    Xyz,
}

impl std::fmt::Display for ErrorModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErrorModel::Z => write!(f, "z"),
            ErrorModel::Xyz => write!(f, "xyz"),
        }
    }
}

/// Family parameters: logical dimension d, correctable order t, error model,
/// and how many identical spins carry the code.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodeSpec {
    pub d: u32,
    pub t: u32,
    pub error_model: ErrorModel,
    pub n_qudits: u32,
}

/// Occupied levels of one codeword: one level per qudit, so single-qudit codes
/// use length-1 tuples. Multi-qudit families only ever occupy diagonal tuples.
pub type LevelTuple = Vec<HalfInt>;

/// One logical basis state as a sparse real superposition with exact
/// square-root amplitudes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Codeword {
    pub label: u32,
    pub terms: BTreeMap<LevelTuple, Amplitude>,
}

impl Codeword {
    pub fn new(label: u32) -> Self {
        Codeword { label, terms: BTreeMap::new() }
    }

    pub fn insert(&mut self, levels: LevelTuple, amp: Amplitude) -> Result<()> {
        if amp.is_zero() {
            return Err(Error::Domain(format!(
                "codeword {} given a zero amplitude at {levels:?}",
                self.label
            )));
        }
        if self.terms.insert(levels.clone(), amp).is_some() {
            return Err(Error::Domain(format!(
                "codeword {} has duplicate term at {levels:?}",
                self.label
            )));
        }
        Ok(())
    }

    /// Add the mirror pair ±m with the same amplitude (single-qudit).
    fn insert_mirror_pair(&mut self, m: HalfInt, amp: Amplitude) -> Result<()> {
        self.insert(vec![-m], amp.clone())?;
        self.insert(vec![m], amp)
    }

    /// Exact squared norm Σ |c|².
    pub fn norm_sq(&self) -> BigRational {
        self.terms.values().map(Amplitude::square).sum()
    }

    /// Exact ⟨S_Z^n⟩ on one qudit. Multi-qudit families occupy diagonal
    /// tuples, so every qudit index gives the same sum; index 0 is used.
    pub fn moment(&self, n: u32) -> BigRational {
        self.terms
            .iter()
            .map(|(levels, amp)| {
                let m = levels[0].to_rational();
                let mut pow = BigRational::one();
                for _ in 0..n {
                    pow *= &m;
                }
                amp.square() * pow
            })
            .sum()
    }

    pub fn amplitude_at(&self, levels: &LevelTuple) -> Option<&Amplitude> {
        self.terms.get(levels)
    }

    /// Levels with their amplitudes for a single-qudit codeword.
    pub fn single_support(&self) -> Result<Vec<(HalfInt, Amplitude)>> {
        self.terms
            .iter()
            .map(|(levels, amp)| {
                if levels.len() != 1 {
                    return Err(Error::Domain(format!(
                        "codeword {} is not single-qudit",
                        self.label
                    )));
                }
                Ok((levels[0], amp.clone()))
            })
            .collect()
    }

    /// Dense state vector of a single-qudit codeword.
    pub fn to_dense(&self, space: &SpinSpace) -> Result<Array1<C64>> {
        let mut v = Array1::zeros(space.dim());
        for (m, amp) in self.single_support()? {
            let idx = space.index_of(m).ok_or_else(|| {
                Error::Domain(format!("level {m} outside spin {}/2 space", space.two_s()))
            })?;
            v[idx] = C64::new(amp.to_f64(), 0.0);
        }
        Ok(v)
    }

    fn is_mirror_symmetric(&self) -> bool {
        self.terms.iter().all(|(levels, amp)| {
            let mirrored: LevelTuple = levels.iter().map(|m| -*m).collect();
            self.terms.get(&mirrored) == Some(amp)
        })
    }
}

/// A full code: spec, carrier spin space, and d codewords labeled 0..d.
#[derive(Clone, PartialEq, Debug)]
pub struct CodeFamily {
    pub spec: CodeSpec,
    pub spin: SpinSpace,
    pub codewords: Vec<Codeword>,
}

impl CodeFamily {
    pub fn is_single_qudit(&self) -> bool {
        self.spec.n_qudits == 1
    }

    pub fn describe(&self) -> String {
        let base = format!(
            "{} d={} t={} (spin {}/2)",
            self.spec.error_model, self.spec.d, self.spec.t,
            self.spin.two_s()
        );
        if self.spec.n_qudits == 1 {
            base
        } else {
            format!("{base} x{} qudits", self.spec.n_qudits)
        }
    }

    /// Structural invariants checked by every builder and on import:
    /// labels 0..d, tuples of the declared width inside the spin space, exact
    /// unit norm, mirror symmetry, pairwise disjoint supports, and for
    /// single-qudit XYZ families a minimum level spacing of 2t+1 with
    /// max|m| + t ≤ S so length-t ladder words stay inside the space.
    pub fn validate(&self) -> Result<()> {
        let spec = &self.spec;
        if spec.d < 2 {
            return Err(Error::Domain(format!("logical dimension d={} below 2", spec.d)));
        }
        if self.codewords.len() != spec.d as usize {
            return Err(Error::Domain(format!(
                "expected {} codewords, found {}",
                spec.d,
                self.codewords.len()
            )));
        }
        for (k, cw) in self.codewords.iter().enumerate() {
            if cw.label != k as u32 {
                return Err(Error::Domain(format!(
                    "codeword labels out of order: position {k} holds label {}",
                    cw.label
                )));
            }
            if cw.terms.is_empty() {
                return Err(Error::Domain(format!("codeword {k} is empty")));
            }
            for levels in cw.terms.keys() {
                if levels.len() != spec.n_qudits as usize {
                    return Err(Error::Domain(format!(
                        "codeword {k} term width {} != n_qudits {}",
                        levels.len(),
                        spec.n_qudits
                    )));
                }
                for m in levels {
                    if !self.spin.contains(*m) {
                        return Err(Error::Domain(format!(
                            "codeword {k} occupies {m}, outside spin {}/2",
                            self.spin.two_s()
                        )));
                    }
                }
            }
            if !cw.norm_sq().is_one() {
                return Err(Error::Domain(format!(
                    "codeword {k} has squared norm {}, expected 1",
                    cw.norm_sq()
                )));
            }
            if !cw.is_mirror_symmetric() {
                return Err(Error::Domain(format!("codeword {k} is not mirror symmetric")));
            }
        }
        for a in 0..self.codewords.len() {
            for b in a + 1..self.codewords.len() {
                if let Some(levels) = self.codewords[a]
                    .terms
                    .keys()
                    .find(|l| self.codewords[b].terms.contains_key(*l))
                {
                    return Err(Error::Domain(format!(
                        "codewords {a} and {b} share support at {levels:?}"
                    )));
                }
            }
        }
        if spec.error_model == ErrorModel::Xyz && spec.n_qudits == 1 {
            let mut occupied: Vec<i32> = self
                .codewords
                .iter()
                .flat_map(|cw| cw.terms.keys().map(|l| l[0].twice()))
                .collect();
            occupied.sort_unstable();
            occupied.dedup();
            // Δm ≥ 2t+1 between any two occupied levels, in doubled units.
            let min_gap = 2 * (2 * spec.t as i32 + 1);
            for w in occupied.windows(2) {
                if w[1] - w[0] < min_gap {
                    return Err(Error::Domain(format!(
                        "xyz family level gap {}/2 below required {}",
                        w[1] - w[0],
                        2 * spec.t + 1
                    )));
                }
            }
            let max_abs = occupied.iter().map(|m| m.abs()).max().unwrap_or(0);
            if max_abs + 2 * spec.t as i32 > self.spin.two_s() as i32 {
                return Err(Error::Domain(format!(
                    "xyz family max|m| {max_abs}/2 + t exceeds S = {}/2",
                    self.spin.two_s()
                )));
            }
        }
        Ok(())
    }

    /// Human-readable ket rendering, mirror pairs grouped, ascending |m|.
    pub fn pretty(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.describe());
        for cw in &self.codewords {
            let mut done: Vec<LevelTuple> = Vec::new();
            let mut parts: Vec<(i32, String)> = Vec::new();
            for (levels, amp) in &cw.terms {
                if done.contains(levels) {
                    continue;
                }
                let mirrored: LevelTuple = levels.iter().map(|m| -*m).collect();
                let key = levels.iter().map(|m| m.twice().abs()).max().unwrap_or(0);
                let ket = |l: &LevelTuple| {
                    let inner: Vec<String> = l.iter().map(|m| m.to_string()).collect();
                    format!("|{}>", inner.join(","))
                };
                if mirrored != *levels && cw.terms.get(&mirrored) == Some(amp) {
                    let (lo, hi) = if *levels < mirrored {
                        (levels, &mirrored)
                    } else {
                        (&mirrored, levels)
                    };
                    parts.push((key, format!("{}({} + {})", amp, ket(lo), ket(hi))));
                    done.push(mirrored.clone());
                } else {
                    parts.push((key, format!("{}{}", amp, ket(levels))));
                }
                done.push(levels.clone());
            }
            parts.sort();
            let rendered: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
            let _ = writeln!(out, "|{}_L> = {}", cw.label, rendered.join(" + "));
        }
        out
    }
}

/// Distance-3 coefficients (a_i, b_i) for logical level i of a d-level code:
/// a_i = √((2d−1+i)/(8d−4)) on the inner pair, b_i = √((2d−1−i)/(8d−4)) on the
/// outer pair. With |0_L⟩ on ±(d−1/2) at weight 1/2 this makes ⟨S_Z²⟩ equal to
/// (2d−1)²/4 for every codeword.
pub fn coeff_distance3(d: u32, i: u32) -> Result<(Amplitude, Amplitude)> {
    check_family_params(d, i)?;
    let (d, i) = (i64::from(d), i64::from(i));
    let a = Amplitude::sqrt(rat(2 * d - 1 + i, 8 * d - 4))?;
    let b = Amplitude::sqrt(rat(2 * d - 1 - i, 8 * d - 4))?;
    Ok((a, b))
}

// Shared numerator/denominator polynomials of the distance-5 coefficients.
// They satisfy p(d,i) + r(d,i) = q(d,i) identically, which is what makes
// a² + b² + c² + e² = 1/2 per side and hence the codeword norm exactly 1.
fn dist5_p(d: i64, i: i64) -> i64 {
    66 * d * d * d + 2 * d * d * i - 100 * d * d - 14 * d * i * i + 12 * d * i + 47 * d
        + 2 * i * i * i + 4 * i * i - 5 * i - 7
}

fn dist5_r(d: i64, i: i64) -> i64 {
    30 * d * d * d + 30 * d * d * i - 60 * d * d - 2 * d * i * i - 28 * d * i + 37 * d
        - 2 * i * i * i + 4 * i * i + 5 * i - 7
}

fn dist5_q(d: i64, i: i64) -> i64 {
    96 * d * d * d + 32 * d * d * i - 160 * d * d - 16 * d * i * i - 16 * d * i + 84 * d
        + 8 * i * i - 14
}

/// Distance-5 coefficients (a_i, b_i, c_i, d_i) for logical level i, each a
/// product of two square roots with a shared denominator. The four weights
/// sum to 1/2, and the resulting codewords share ⟨S_Z²⟩ and ⟨S_Z⁴⟩.
pub fn coeff_distance5(d: u32, i: u32) -> Result<(Amplitude, Amplitude, Amplitude, Amplitude)> {
    check_family_params(d, i)?;
    let (d, i) = (i64::from(d), i64::from(i));
    let base = 32 * d - 16;
    let p = rat(dist5_p(d, i), dist5_q(d, i));
    let r = rat(dist5_r(d, i), dist5_q(d, i));
    let a = Amplitude::sqrt(rat(8 * d + 2 * i - 5, base) * &p)?;
    let b = Amplitude::sqrt(rat(8 * d - 2 * i - 3, base) * &p)?;
    let c = Amplitude::sqrt(rat(12 * d - 2 * i - 5, base) * &r)?;
    let e = Amplitude::sqrt(rat(4 * d + 2 * i - 3, base) * &r)?;
    Ok((a, b, c, e))
}

fn check_family_params(d: u32, i: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("logical dimension d={d} below 2")));
    }
    if i < 1 || i >= d {
        return Err(Error::Domain(format!("level index i={i} outside 1..{}", d)));
    }
    Ok(())
}

fn check_t(t: u32) -> Result<()> {
    if t == 1 || t == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("no construction for t={t}; only t=1 and t=2")))
    }
}

/// Dephasing-correcting code for a d-level qudit: distance 2t+1 against S_Z
/// words, carried by spin 2d−3/2 (t=1) or 4d−5/2 (t=2).
pub fn build_z_code(d: u32, t: u32) -> Result<CodeFamily> {
    check_t(t)?;
    if d < 2 {
        return Err(Error::Domain(format!("logical dimension d={d} below 2")));
    }
    let di = d as i32;
    let (two_s, family): (u32, Vec<Codeword>) = match t {
        1 => {
            let two_s = (4 * di - 3) as u32;
            let center = 2 * di - 1;
            let mut words = Vec::with_capacity(d as usize);
            let mut cw = Codeword::new(0);
            cw.insert_mirror_pair(HalfInt::from_twice(center), Amplitude::sqrt_frac(1, 2))?;
            words.push(cw);
            for i in 1..d {
                let (a, b) = coeff_distance3(d, i)?;
                let mut cw = Codeword::new(i);
                cw.insert_mirror_pair(HalfInt::from_twice(center - 2 * i as i32), a)?;
                cw.insert_mirror_pair(HalfInt::from_twice(center + 2 * i as i32), b)?;
                words.push(cw);
            }
            (two_s, words)
        }
        _ => {
            let two_s = (8 * di - 5) as u32;
            let mut words = Vec::with_capacity(d as usize);
            let mut cw = Codeword::new(0);
            cw.insert_mirror_pair(HalfInt::from_twice(2 * di - 1), Amplitude::sqrt_frac(5, 16))?;
            cw.insert_mirror_pair(HalfInt::from_twice(6 * di - 3), Amplitude::sqrt_frac(3, 16))?;
            words.push(cw);
            for i in 1..d {
                let (a, b, c, e) = coeff_distance5(d, i)?;
                let ii = i as i32;
                let mut cw = Codeword::new(i);
                cw.insert_mirror_pair(HalfInt::from_twice(4 * di - 1 - 2 * ii), a)?;
                cw.insert_mirror_pair(HalfInt::from_twice(4 * di - 3 + 2 * ii), b)?;
                cw.insert_mirror_pair(HalfInt::from_twice(2 * ii - 1), c)?;
                cw.insert_mirror_pair(HalfInt::from_twice(8 * di - 3 - 2 * ii), e)?;
                words.push(cw);
            }
            (two_s, words)
        }
    };
    let code = CodeFamily {
        spec: CodeSpec { d, t, error_model: ErrorModel::Z, n_qudits: 1 },
        spin: SpinSpace::new(two_s),
        codewords: family,
    };
    code.validate()?;
    Ok(code)
}

/// XYZ-correcting single-spin code: every level of the Z family stretched by
/// 2t+1 inside spin (2t+1)·S_z + t, so ladder words of length ≤ t cannot
/// connect occupied levels and the Z-family coefficients keep working.
pub fn build_xyz_code(d: u32, t: u32) -> Result<CodeFamily> {
    let base = build_z_code(d, t)?;
    let stretch = (2 * t + 1) as i32;
    let two_s = (2 * t + 1) * base.spin.two_s() + 2 * t;
    let codewords = base
        .codewords
        .into_iter()
        .map(|cw| {
            let terms = cw
                .terms
                .into_iter()
                .map(|(levels, amp)| {
                    let scaled: LevelTuple = levels
                        .iter()
                        .map(|m| HalfInt::from_twice(m.twice() * stretch))
                        .collect();
                    (scaled, amp)
                })
                .collect();
            Codeword { label: cw.label, terms }
        })
        .collect();
    let code = CodeFamily {
        spec: CodeSpec { d, t, error_model: ErrorModel::Xyz, n_qudits: 1 },
        spin: SpinSpace::new(two_s),
        codewords,
    };
    code.validate()?;
    Ok(code)
}

/// XYZ-correcting code on 2t+1 identical spins: each basis level |m⟩ of the Z
/// family becomes the diagonal tuple |m⟩^⊗(2t+1) with the same amplitude. Any
/// error word of length ≤ t shifts at least one qudit off the diagonal, so the
/// Z-family coefficients again carry over. Stored sparsely; the dense tensor
/// space is never materialized.
pub fn build_multiqudit_code(d: u32, t: u32) -> Result<CodeFamily> {
    let base = build_z_code(d, t)?;
    let n = 2 * t + 1;
    let codewords = base
        .codewords
        .into_iter()
        .map(|cw| {
            let terms = cw
                .terms
                .into_iter()
                .map(|(levels, amp)| (vec![levels[0]; n as usize], amp))
                .collect();
            Codeword { label: cw.label, terms }
        })
        .collect();
    let code = CodeFamily {
        spec: CodeSpec { d, t, error_model: ErrorModel::Xyz, n_qudits: n },
        spin: base.spin,
        codewords,
    };
    code.validate()?;
    Ok(code)
}

/// An alternative qutrit distance-5 coefficient set on the same spin-19/2
/// carrier: a second exact solution of the same moment equations, kept as a
/// fixed table.
pub fn alt_qutrit_distance5() -> CodeFamily {
    let pair = |cw: &mut Codeword, twice: i32, p: i64, q: i64| {
        cw.insert_mirror_pair(HalfInt::from_twice(twice), Amplitude::sqrt_frac(p, q))
            .expect("fixed table is well formed");
    };
    let mut w0 = Codeword::new(0);
    pair(&mut w0, 5, 3, 10);
    pair(&mut w0, 15, 1, 5);
    let mut w1 = Codeword::new(1);
    pair(&mut w1, 1, 1152, 9225);
    pair(&mut w1, 9, 133, 1025);
    pair(&mut w1, 11, 399, 2050);
    pair(&mut w1, 19, 468, 9225);
    let mut w2 = Codeword::new(2);
    pair(&mut w2, 3, 1081, 7700);
    pair(&mut w2, 7, 252, 1650);
    pair(&mut w2, 13, 441, 3300);
    pair(&mut w2, 17, 282, 3850);
    let code = CodeFamily {
        spec: CodeSpec { d: 3, t: 2, error_model: ErrorModel::Z, n_qudits: 1 },
        spin: SpinSpace::new(19),
        codewords: vec![w0, w1, w2],
    };
    code.validate().expect("fixed table satisfies the family invariants");
    code
}

/// The d=3, t=1 code with a_1 and b_1 swapped on |1_L⟩. Still a valid family
/// structurally, but ⟨S_Z²⟩ on |1_L⟩ becomes 33/4 instead of 25/4, so the
/// moment certification must reject it. Used to exercise failure reporting.
pub fn perturbed_qutrit_code() -> CodeFamily {
    let mut code = build_z_code(3, 1).expect("d=3, t=1 is constructible");
    let cw = &mut code.codewords[1];
    let inner_neg = vec![HalfInt::from_twice(-3)];
    let outer_neg = vec![HalfInt::from_twice(-7)];
    let a = cw.terms[&inner_neg].clone();
    let b = cw.terms[&outer_neg].clone();
    for (levels, amp) in cw.terms.iter_mut() {
        *amp = if levels[0].abs().twice() == 3 { b.clone() } else { a.clone() };
    }
    code.validate().expect("perturbation keeps the structural invariants");
    code
}

// ---------------------------------------------------------------------------
// Serialized form: exact rationals only, levels as doubled integers.

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub spec: CodeSpec,
    pub two_s: u32,
    pub codewords: Vec<CodewordFile>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodewordFile {
    pub label: u32,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermFile {
    /// Doubled levels 2m, one per qudit.
    pub levels: Vec<i32>,
    pub sign: i8,
    /// Amplitude is sign·√(p/q) in lowest terms.
    pub p: u64,
    pub q: u64,
}

impl CodeFamily {
    pub fn to_file(&self) -> Result<CodeFile> {
        let codewords = self
            .codewords
            .iter()
            .map(|cw| {
                let terms = cw
                    .terms
                    .iter()
                    .map(|(levels, amp)| {
                        let rad = amp.radicand();
                        let p = rad.numer().to_u64().ok_or_else(|| {
                            Error::Schema(format!("radicand numerator {} exceeds u64", rad.numer()))
                        })?;
                        let q = rad.denom().to_u64().ok_or_else(|| {
                            Error::Schema(format!("radicand denominator {} exceeds u64", rad.denom()))
                        })?;
                        Ok(TermFile {
                            levels: levels.iter().map(|m| m.twice()).collect(),
                            sign: amp.sign(),
                            p,
                            q,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CodewordFile { label: cw.label, terms })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CodeFile { spec: self.spec, two_s: self.spin.two_s(), codewords })
    }

    pub fn from_file(file: &CodeFile) -> Result<CodeFamily> {
        let codewords = file
            .codewords
            .iter()
            .map(|cwf| {
                let mut cw = Codeword::new(cwf.label);
                for term in &cwf.terms {
                    if term.q == 0 {
                        return Err(Error::Schema("zero denominator in term".into()));
                    }
                    let amp = Amplitude::from_sign_radicand(
                        term.sign,
                        rat(term.p as i64, term.q as i64),
                    )
                    .map_err(|e| Error::Schema(e.to_string()))?;
                    cw.insert(
                        term.levels.iter().map(|tw| HalfInt::from_twice(*tw)).collect(),
                        amp,
                    )
                    .map_err(|e| Error::Schema(e.to_string()))?;
                }
                Ok(cw)
            })
            .collect::<Result<Vec<_>>>()?;
        let code = CodeFamily {
            spec: file.spec,
            spin: SpinSpace::new(file.two_s),
            codewords,
        };
        code.validate()?;
        Ok(code)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_file()?)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(json: &str) -> Result<CodeFamily> {
        let file: CodeFile = serde_json::from_str(json)?;
        CodeFamily::from_file(&file)
    }
}
