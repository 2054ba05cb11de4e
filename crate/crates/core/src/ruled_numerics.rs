//! Numerical classes on a ruled surface `S = ℙ(ℰ) → C`.
//!
//! `Num(S) = ℤC₀ ⊕ ℤf` with `C₀² = −e`, `C₀·f = 1`, `f² = 0`, where `e` is
//! the invariant of the normalised bundle and `g` the genus of the base.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuledError {
    #[error("invariant e = {e} violates Nagata's bound e >= -g for g = {g}")]
    NagataViolation { g: u32, e: i64 },
    #[error("no class satisfies the second-fibration conditions")]
    NoSolution,
    #[error("second-fibration class is not unique: {0:?}")]
    NonUnique(Vec<NumClass>),
    #[error("section class {0} is not the class of an irreducible curve")]
    NotACurveClass(NumClass),
    #[error("twist d = {0} is not allowed (need d >= 0, d != 1)")]
    InvalidD(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuledSurfaceData {
    g: u32,
    e: i64,
}

impl RuledSurfaceData {
    pub fn new(g: u32, e: i64) -> Result<Self, RuledError> {
        if e < -i64::from(g) {
            return Err(RuledError::NagataViolation { g, e });
        }
        Ok(RuledSurfaceData { g, e })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn e(&self) -> i64 {
        self.e
    }
}

/// `a·C₀ + b·f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NumClass {
    pub a: i64,
    pub b: i64,
}

impl NumClass {
    pub const C0: NumClass = NumClass { a: 1, b: 0 };
    pub const FIBER: NumClass = NumClass { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        NumClass { a, b }
    }
}

impl fmt::Display for NumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

pub fn intersect(d1: NumClass, d2: NumClass, s: &RuledSurfaceData) -> i64 {
    d1.a * d2.b + d2.a * d1.b - s.e * d1.a * d2.a
}

/// `K_S ≡ −2C₀ + (2g − 2 − e)f`.
pub fn canonical_class(s: &RuledSurfaceData) -> NumClass {
    NumClass::new(-2, 2 * i64::from(s.g) - 2 - s.e)
}

pub fn is_ample(d: NumClass, s: &RuledSurfaceData) -> bool {
    if s.e >= 0 {
        d.a > 0 && d.b > d.a * s.e
    } else {
        d.a > 0 && 2 * d.b > d.a * s.e
    }
}

pub fn is_nef(d: NumClass, s: &RuledSurfaceData) -> bool {
    if s.e >= 0 {
        d.a >= 0 && d.b >= d.a * s.e
    } else {
        d.a >= 0 && 2 * d.b >= d.a * s.e
    }
}

/// Whether `d` can be the class of an irreducible curve. Uses the non-strict
/// `2b ≥ ae` form for `e < 0`.
pub fn admissible_curve_class(d: NumClass, s: &RuledSurfaceData) -> bool {
    if d == NumClass::C0 || d == NumClass::FIBER {
        return true;
    }
    if s.e >= 0 {
        d.a > 0 && d.b >= d.a * s.e
    } else {
        (d.a == 1 && d.b > 0) || (d.a >= 2 && 2 * d.b >= d.a * s.e)
    }
}

/// Largest `C₀`-coefficient searched by [`solve_second_fibration_class`].
pub fn second_fibration_search_bound(s: &RuledSurfaceData) -> i64 {
    2 * s.e.abs().max(1) + 2
}

/// Class `f₀` of the fibres of a second fibration whose fibres carry the
/// section `σ` of a semigroup structure.
///
/// For `e < 0` the candidates are admissible non-fibre classes with
/// `f₀² = 0` of smallest degree over the base, which is `2C₀ + ef`. For
/// `e ≥ 0` they are admissible classes meeting `f` once with the smallest
/// self-intersection, which is `C₀`. `section_class` must itself be an
/// admissible curve class.
pub fn solve_second_fibration_class(s: &RuledSurfaceData, section_class: NumClass) -> Result<NumClass, RuledError> {
    if !admissible_curve_class(section_class, s) {
        return Err(RuledError::NotACurveClass(section_class));
    }
    let bound = second_fibration_search_bound(s);
    let b_bound = bound * (s.e.abs() + 1);
    let candidates = (1..=bound)
        .flat_map(|a| (-b_bound..=b_bound).map(move |b| NumClass::new(a, b)))
        .filter(|&d| admissible_curve_class(d, s));

    let best: Vec<NumClass> = if s.e < 0 {
        let isotropic: Vec<NumClass> = candidates.filter(|&d| intersect(d, d, s) == 0).collect();
        let min_degree = isotropic.iter().map(|&d| intersect(d, NumClass::FIBER, s)).min();
        isotropic
            .into_iter()
            .filter(|&d| Some(intersect(d, NumClass::FIBER, s)) == min_degree)
            .collect()
    } else {
        let unisecant: Vec<NumClass> = candidates.filter(|&d| intersect(d, NumClass::FIBER, s) == 1).collect();
        let min_self = unisecant.iter().map(|&d| intersect(d, d, s)).min();
        unisecant.into_iter().filter(|&d| Some(intersect(d, d, s)) == min_self).collect()
    };
    match best.as_slice() {
        [] => Err(RuledError::NoSolution),
        [only] => Ok(*only),
        _ => Err(RuledError::NonUnique(best)),
    }
}

/// Arithmetic genus `1 + (d² + d·K)/2`, flagged when not an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassGenus {
    pub value: Rational64,
    pub integral: bool,
}

pub fn genus_of_class(d: NumClass, s: &RuledSurfaceData) -> ClassGenus {
    let k = canonical_class(s);
    let value = Rational64::from_integer(1) + Rational64::new(intersect(d, d, s) + intersect(d, k, s), 2);
    ClassGenus { value, integral: value.is_integer() }
}

/// `h⁰(ℙ¹, 𝒪(k))`.
pub fn h0_p1(k: i64) -> u64 {
    u64::try_from(k + 1).unwrap_or(0)
}

/// `dim Ext¹(𝒪(−d₂), 𝒪(d₁)) = h⁰(ℙ¹, 𝒪(−2 − d₁ − d₂))`.
pub fn ext1_dim(d1: i64, d2: i64) -> u64 {
    h0_p1(-2 - d1 - d2)
}

/// The two ways a section of `ℙ(𝒪 ⊕ 𝒪(−d))` can split off the bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SectionSplit {
    /// `d₂ > 0`: the quotient line bundle is `𝒪`.
    PositiveD2,
    /// `d₂ = 0`: the quotient line bundle is `𝒪(−d)`.
    ZeroD2,
}

impl SectionSplit {
    pub fn description(&self) -> &'static str {
        match self {
            SectionSplit::PositiveD2 => "d2 > 0 forces L = O",
            SectionSplit::ZeroD2 => "d2 = 0 forces L = O(-d)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionFiniteness {
    pub d: u32,
    pub cases: [SectionSplit; 2],
}

impl SectionFiniteness {
    pub fn verdict(&self) -> &'static str {
        "FINITE_MOD_AUT"
    }
}

/// Semigroup laws on `ℙ(𝒪 ⊕ 𝒪(−d))` over `ℙ¹` are finite modulo `Aut(S)`.
pub fn hirzebruch_section_finiteness(d: i64) -> Result<SectionFiniteness, RuledError> {
    if d < 0 || d == 1 {
        return Err(RuledError::InvalidD(d));
    }
    let d = u32::try_from(d).map_err(|_| RuledError::InvalidD(d))?;
    Ok(SectionFiniteness { d, cases: [SectionSplit::PositiveD2, SectionSplit::ZeroD2] })
}
