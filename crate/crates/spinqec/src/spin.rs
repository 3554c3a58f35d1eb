//! Half-integer spin arithmetic, spin operators, and exact square-root amplitudes.
//!
//! Magnetic quantum numbers are stored as twice their value so that spin 9/2
//! levels like −7/2 stay exact integers. Codeword coefficients are kept as
//! signed square roots of reduced rationals, which is the closed form every
//! code family in [`crate::codes`] uses; floating point enters only when a
//! matrix or pulse angle is actually needed.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use ndarray::{Array1, Array2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Shorthand for an exact rational from machine integers.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A half-integer m stored as 2m.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// Exact m as a rational, for moment sums.
    pub fn to_rational(self) -> BigRational {
        rat(i64::from(self.twice), 2)
    }

    pub const fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// The 2S+1 dimensional state space of a single spin S.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpinSpace {
    two_s: u32,
}

impl SpinSpace {
    pub const fn new(two_s: u32) -> Self {
        SpinSpace { two_s }
    }

    pub const fn two_s(&self) -> u32 {
        self.two_s
    }

    pub fn s(&self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    pub fn s_half(&self) -> HalfInt {
        HalfInt::from_twice(self.two_s as i32)
    }

    pub const fn dim(&self) -> usize {
        self.two_s as usize + 1
    }

    /// S(S+1) as an exact rational.
    pub fn casimir(&self) -> BigRational {
        let ts = i64::from(self.two_s);
        rat(ts * (ts + 2), 4)
    }

    /// Levels in ascending order, −S..+S; basis index i holds m = −S + i.
    pub fn levels(&self) -> impl Iterator<Item = HalfInt> + '_ {
        let ts = self.two_s as i32;
        (0..=ts).map(move |i| HalfInt::from_twice(-ts + 2 * i))
    }

    pub fn level(&self, index: usize) -> HalfInt {
        debug_assert!(index < self.dim());
        HalfInt::from_twice(-(self.two_s as i32) + 2 * index as i32)
    }

    /// Basis index of m, or None if m is outside −S..S or has the wrong parity.
    pub fn index_of(&self, m: HalfInt) -> Option<usize> {
        let ts = self.two_s as i32;
        let shifted = m.twice() + ts;
        if shifted < 0 || shifted > 2 * ts || shifted % 2 != 0 {
            None
        } else {
            Some((shifted / 2) as usize)
        }
    }

    pub fn contains(&self, m: HalfInt) -> bool {
        self.index_of(m).is_some()
    }
}

/// A signed square root of a reduced nonnegative rational: sign · √(p/q).
///
/// The invariant sign = 0 ⟺ p = 0 is enforced on construction. Squaring and
/// multiplication are exact; addition is deliberately absent because sums of
/// distinct square roots leave the representable set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Amplitude {
    sign: i8,
    radicand: BigRational,
}

impl Amplitude {
    pub fn zero() -> Self {
        Amplitude { sign: 0, radicand: BigRational::zero() }
    }

    /// Positive square root of r. Fails on negative r.
    pub fn sqrt(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain(format!("amplitude radicand {r} is negative")));
        }
        let sign = if r.is_zero() { 0 } else { 1 };
        Ok(Amplitude { sign, radicand: r })
    }

    /// √(p/q) from literal nonnegative integers. Panics on p < 0 or q ≤ 0.
    pub fn sqrt_frac(p: i64, q: i64) -> Self {
        assert!(p >= 0 && q > 0, "sqrt_frac needs p >= 0, q > 0");
        Amplitude::sqrt(rat(p, q)).expect("nonnegative by assertion")
    }

    pub fn from_sign_radicand(sign: i8, radicand: BigRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::Domain(format!("amplitude radicand {radicand} is negative")));
        }
        if !matches!(sign, -1..=1) {
            return Err(Error::Domain(format!("amplitude sign {sign} not in {{-1, 0, 1}}")));
        }
        if radicand.is_zero() != (sign == 0) {
            return Err(Error::Domain("amplitude sign/radicand zero mismatch".into()));
        }
        Ok(Amplitude { sign, radicand })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Exact square, sign discarded.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn mul(&self, rhs: &Amplitude) -> Amplitude {
        Amplitude {
            sign: self.sign * rhs.sign,
            radicand: &self.radicand * &rhs.radicand,
        }
    }

    /// Multiply by an exact rational scalar: r·(s·√x) = (s·sgn r)·√(r²x).
    pub fn scaled_by(&self, r: &BigRational) -> Amplitude {
        if r.is_zero() || self.sign == 0 {
            return Amplitude::zero();
        }
        let sign = if r.is_negative() { -self.sign } else { self.sign };
        Amplitude { sign, radicand: r * r * &self.radicand }
    }
}

impl Neg for Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        Amplitude { sign: -self.sign, radicand: self.radicand }
    }
}

impl fmt::Display for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "sqrt({})", self.radicand),
            _ => write!(f, "-sqrt({})", self.radicand),
        }
    }
}

/// ⟨m+1|S_+|m⟩ = √(S(S+1) − m(m+1)), computed from exact integers before the
/// single square root.
pub fn ladder_element(space: &SpinSpace, m: HalfInt) -> f64 {
    let ts = i64::from(space.two_s());
    let tm = i64::from(m.twice());
    let quad = ts * (ts + 2) - tm * (tm + 2);
    debug_assert!(quad >= 0, "ladder element below top of the ladder");
    (quad as f64).sqrt() / 2.0
}

/// A dense operator on a single spin space, tagged with the word it represents.
#[derive(Clone, Debug)]
pub struct SpinOperator {
    label: String,
    space: SpinSpace,
    matrix: Array2<C64>,
}

impl SpinOperator {
    pub fn new(label: impl Into<String>, space: SpinSpace, matrix: Array2<C64>) -> Self {
        let label = label.into();
        debug_assert_eq!(matrix.nrows(), space.dim());
        debug_assert_eq!(matrix.ncols(), space.dim());
        SpinOperator { label, space, matrix }
    }

    pub fn identity(space: SpinSpace) -> Self {
        let mut m = Array2::zeros((space.dim(), space.dim()));
        for i in 0..space.dim() {
            m[[i, i]] = C64::new(1.0, 0.0);
        }
        SpinOperator::new("I", space, m)
    }

    /// S_Z: diagonal with entries m.
    pub fn sz(space: SpinSpace) -> Self {
        let mut m = Array2::zeros((space.dim(), space.dim()));
        for (i, level) in space.levels().enumerate() {
            m[[i, i]] = C64::new(level.value(), 0.0);
        }
        SpinOperator::new("S_Z", space, m)
    }

    /// S_+: raises m by one, ⟨m+1|S_+|m⟩ = √(S(S+1) − m(m+1)).
    pub fn splus(space: SpinSpace) -> Self {
        let mut m = Array2::zeros((space.dim(), space.dim()));
        for i in 0..space.dim().saturating_sub(1) {
            m[[i + 1, i]] = C64::new(ladder_element(&space, space.level(i)), 0.0);
        }
        SpinOperator::new("S_+", space, m)
    }

    /// S_−: adjoint of S_+.
    pub fn sminus(space: SpinSpace) -> Self {
        let mut op = SpinOperator::splus(space).adjoint();
        op.label = "S_-".into();
        op
    }

    /// S_X = (S_+ + S_−)/2.
    pub fn sx(space: SpinSpace) -> Self {
        let plus = SpinOperator::splus(space);
        let minus = SpinOperator::sminus(space);
        let m = (&plus.matrix + &minus.matrix) * C64::new(0.5, 0.0);
        SpinOperator::new("S_X", space, m)
    }

    /// S_Y = (S_+ − S_−)/(2i).
    pub fn sy(space: SpinSpace) -> Self {
        let plus = SpinOperator::splus(space);
        let minus = SpinOperator::sminus(space);
        let m = (&plus.matrix - &minus.matrix) * (C64::new(0.0, 1.0) * -0.5);
        SpinOperator::new("S_Y", space, m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> SpinSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> SpinOperator {
        let mut m = Array2::zeros(self.matrix.raw_dim());
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                m[[j, i]] = self.matrix[[i, j]].conj();
            }
        }
        SpinOperator::new(format!("adj({})", self.label), self.space, m)
    }

    /// Operator product self·rhs (self applied last).
    pub fn compose(&self, rhs: &SpinOperator) -> SpinOperator {
        debug_assert_eq!(self.space, rhs.space);
        SpinOperator::new(
            format!("{}·{}", self.label, rhs.label),
            self.space,
            self.matrix.dot(&rhs.matrix),
        )
    }

    pub fn apply(&self, state: &Array1<C64>) -> Array1<C64> {
        self.matrix.dot(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn half_int_roundtrip_and_order() {
        let m = HalfInt::from_twice(-7);
        assert_eq!(m.twice(), -7);
        assert_eq!(m.value(), -3.5);
        assert_eq!(m.to_string(), "-7/2");
        assert_eq!(HalfInt::from_int(3).to_string(), "3");
        assert!(HalfInt::from_twice(-9) < HalfInt::from_twice(-7));
        assert_eq!(-m, HalfInt::from_twice(7));
        assert_eq!(m + HalfInt::from_int(1), HalfInt::from_twice(-5));
        assert_eq!(m.abs(), HalfInt::from_twice(7));
        assert_eq!(m.to_rational(), rat(-7, 2));
    }

    #[test]
    fn space_indexing_matches_level_order() {
        let space = SpinSpace::new(9);
        assert_eq!(space.dim(), 10);
        assert_eq!(space.s(), 4.5);
        let levels: Vec<HalfInt> = space.levels().collect();
        assert_eq!(levels[0], HalfInt::from_twice(-9));
        assert_eq!(levels[9], HalfInt::from_twice(9));
        for (i, m) in levels.iter().enumerate() {
            assert_eq!(space.index_of(*m), Some(i));
            assert_eq!(space.level(i), *m);
        }
        // wrong parity and out of range
        assert_eq!(space.index_of(HalfInt::from_int(1)), None);
        assert_eq!(space.index_of(HalfInt::from_twice(11)), None);
        assert_eq!(space.casimir(), rat(99, 4));
    }

    #[test]
    fn sz_is_diagonal_in_m() {
        let space = SpinSpace::new(9);
        let sz = SpinOperator::sz(space);
        for (i, m) in space.levels().enumerate() {
            assert_eq!(sz.matrix()[[i, i]], C64::new(m.value(), 0.0));
        }
        let trace: C64 = (0..space.dim()).map(|i| sz.matrix()[[i, i]]).sum();
        assert_abs_diff_eq!(trace.re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ladder_element_is_exact_on_perfect_squares() {
        // S = 9/2, m = −9/2: S(S+1) − m(m+1) = 99/4 − 63/4 = 9, element 3.
        let space = SpinSpace::new(9);
        assert_eq!(ladder_element(&space, HalfInt::from_twice(-9)), 3.0);
        // top of the ladder annihilates
        assert_eq!(ladder_element(&space, HalfInt::from_twice(9)), 0.0);
        let sp = SpinOperator::splus(space);
        assert_eq!(sp.matrix()[[1, 0]], C64::new(3.0, 0.0));
        assert_eq!(sp.matrix()[[0, 9]], C64::new(0.0, 0.0));
    }

    #[test]
    fn spin_half_matrices_are_pauli_over_two() {
        let space = SpinSpace::new(1);
        let sx = SpinOperator::sx(space);
        let sy = SpinOperator::sy(space);
        assert_eq!(sx.matrix()[[0, 1]], C64::new(0.5, 0.0));
        assert_eq!(sx.matrix()[[1, 0]], C64::new(0.5, 0.0));
        assert_eq!(sy.matrix()[[0, 1]], C64::new(0.0, 0.5));
        assert_eq!(sy.matrix()[[1, 0]], C64::new(0.0, -0.5));
    }

    #[test]
    fn su2_algebra_holds_up_to_spin_99_half() {
        for two_s in [1u32, 9, 19, 29, 99] {
            let space = SpinSpace::new(two_s);
            let sx = SpinOperator::sx(space);
            let sy = SpinOperator::sy(space);
            let sz = SpinOperator::sz(space);
            // tolerance relative to the operator scale S(S+1)
            let scale = space.s() * (space.s() + 1.0);
            let tol = 1e-12 * scale.max(1.0);

            let comm = &sx.matrix().dot(sy.matrix()) - &sy.matrix().dot(sx.matrix());
            let i_sz = sz.matrix() * C64::new(0.0, 1.0);
            assert!(max_abs_diff(&comm, &i_sz) < tol, "commutator at 2S={two_s}");

            let casimir = &(&sx.matrix().dot(sx.matrix()) + &sy.matrix().dot(sy.matrix()))
                + &sz.matrix().dot(sz.matrix());
            let expected = SpinOperator::identity(space).matrix() * C64::new(scale, 0.0);
            assert!(max_abs_diff(&casimir, &expected) < tol, "casimir at 2S={two_s}");
        }
    }

    #[test]
    fn sminus_is_adjoint_of_splus() {
        let space = SpinSpace::new(9);
        let sp = SpinOperator::splus(space);
        let sm = SpinOperator::sminus(space);
        assert_eq!(max_abs_diff(sm.matrix(), sp.adjoint().matrix()), 0.0);
        assert_eq!(sm.label(), "S_-");
    }

    #[test]
    fn amplitude_arithmetic_is_exact() {
        let a = Amplitude::sqrt_frac(10, 20);
        assert_eq!(a.square(), rat(1, 2)); // reduced
        assert_eq!(a.to_string(), "sqrt(1/2)");
        let b = Amplitude::sqrt_frac(3, 7);
        assert_eq!(a.mul(&b).square(), rat(3, 14));
        assert_eq!((-a.clone()).sign(), -1);
        assert!(Amplitude::sqrt(rat(-1, 2)).is_err());
        let z = Amplitude::zero();
        assert!(z.is_zero());
        assert_eq!(z.mul(&b).sign(), 0);
        // scaling by −3/2: (−3/2)·√(3/7) = −√(27/28)
        let scaled = b.scaled_by(&rat(-3, 2));
        assert_eq!(scaled.sign(), -1);
        assert_eq!(scaled.square(), rat(27, 28));
        assert_abs_diff_eq!(a.to_f64(), 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn amplitude_sign_invariant_is_checked() {
        assert!(Amplitude::from_sign_radicand(1, rat(0, 1)).is_err());
        assert!(Amplitude::from_sign_radicand(0, rat(1, 2)).is_err());
        assert!(Amplitude::from_sign_radicand(2, rat(1, 2)).is_err());
        assert!(Amplitude::from_sign_radicand(-1, rat(1, 2)).is_ok());
    }

    proptest! {
        #[test]
        fn amplitude_square_roundtrips(p in 0i64..10_000, q in 1i64..10_000) {
            let a = Amplitude::sqrt_frac(p, q);
            prop_assert_eq!(a.square(), rat(p, q));
            prop_assert_eq!(a.is_zero(), p == 0);
        }

        #[test]
        fn amplitude_mul_squares_multiply(
            p1 in 1i64..1000, q1 in 1i64..1000,
            p2 in 1i64..1000, q2 in 1i64..1000,
        ) {
            let a = Amplitude::sqrt_frac(p1, q1);
            let b = Amplitude::sqrt_frac(p2, q2);
            prop_assert_eq!(a.mul(&b).square(), rat(p1, q1) * rat(p2, q2));
        }

        #[test]
        fn ladder_squares_are_exact_integers_over_four(two_s in 1u32..100) {
            let space = SpinSpace::new(two_s);
            for i in 0..space.dim() - 1 {
                let e = ladder_element(&space, space.level(i));
                let ts = i64::from(two_s);
                let tm = i64::from(space.level(i).twice());
                let quad = (ts * (ts + 2) - tm * (tm + 2)) as f64;
                prop_assert!((e * e * 4.0 - quad).abs() <= quad.max(1.0) * 4.0 * f64::EPSILON);
            }
        }
    }
}
