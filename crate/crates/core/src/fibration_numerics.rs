//! Numerical invariants of elliptic fibrations `φ: S → B`.
//!
//! Everything is exact. Sums of `1 − 1/m` over many multiplicities overflow
//! 64-bit denominators quickly, so those use [`BigRational`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("multiplicity {0} is below 2")]
    BadMultiplicity(u32),
    #[error("a multiple fibre cannot have a cuspidal reduction")]
    CuspInMultiple,
    #[error("a minimal elliptic surface of Kodaira dimension one has K^2 = 0, got {0}")]
    NonMinimalKSquared(i64),
    #[error("a multiple of a smooth elliptic fibre has Euler number 0, got {0}")]
    BadFiberChi(i64),
}

/// Reduced shape of a fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FiberShape {
    SmoothElliptic,
    RationalNode,
    RationalCusp,
    TreeOfMinus2Rationals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaFiberTag {
    Simple(FiberShape),
    Multiple { m: u32, inner: FiberShape },
}

impl KodairaFiberTag {
    pub fn multiple(m: u32, inner: FiberShape) -> Result<Self, FibrationError> {
        if m < 2 {
            return Err(FibrationError::BadMultiplicity(m));
        }
        if inner == FiberShape::RationalCusp {
            return Err(FibrationError::CuspInMultiple);
        }
        Ok(KodairaFiberTag::Multiple { m, inner })
    }

    pub fn multiplicity(&self) -> Option<u32> {
        match self {
            KodairaFiberTag::Multiple { m, .. } => Some(*m),
            KodairaFiberTag::Simple(_) => None,
        }
    }

    pub fn is_multiple_of_smooth(&self) -> bool {
        matches!(self, KodairaFiberTag::Multiple { inner: FiberShape::SmoothElliptic, .. })
    }
}

impl fmt::Display for KodairaFiberTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaFiberTag::Simple(shape) => write!(f, "{shape:?}"),
            KodairaFiberTag::Multiple { m, inner } => write!(f, "{m}x{inner:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationData {
    g_b: u32,
    chi: i64,
    fibers: Vec<KodairaFiberTag>,
    k_squared: i64,
    minimal: bool,
}

impl FibrationData {
    pub fn new(
        g_b: u32,
        chi: i64,
        fibers: Vec<KodairaFiberTag>,
        k_squared: i64,
        minimal: bool,
    ) -> Result<Self, FibrationError> {
        if minimal && k_squared != 0 {
            return Err(FibrationError::NonMinimalKSquared(k_squared));
        }
        Ok(FibrationData { g_b, chi, fibers, k_squared, minimal })
    }

    /// Minimal fibration whose singular fibres are the multiples of smooth
    /// elliptic curves with the given multiplicities.
    pub fn minimal_with_multiplicities(g_b: u32, chi: i64, multiplicities: &[u32]) -> Result<Self, FibrationError> {
        let fibers = multiplicities
            .iter()
            .map(|&m| KodairaFiberTag::multiple(m, FiberShape::SmoothElliptic))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(g_b, chi, fibers, 0, true)
    }

    pub fn g_b(&self) -> u32 {
        self.g_b
    }

    pub fn chi(&self) -> i64 {
        self.chi
    }

    pub fn fibers(&self) -> &[KodairaFiberTag] {
        &self.fibers
    }

    pub fn k_squared(&self) -> i64 {
        self.k_squared
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.fibers.iter().filter_map(KodairaFiberTag::multiplicity).collect()
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `Σ (1 − 1/mᵢ)`.
pub fn multiplicity_defect(ms: &[u32]) -> BigRational {
    ms.iter()
        .map(|&m| BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m)))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// `δ(φ) = χ(𝒪_S) + 2g(B) − 2 + Σ (1 − 1/mᵢ)`.
pub fn delta_invariant(f: &FibrationData) -> BigRational {
    big(f.chi) + big(2 * i64::from(f.g_b) - 2) + multiplicity_defect(&f.multiplicities())
}

/// For a minimal elliptic surface, `κ(S) = 1` iff `δ(φ) > 0`.
pub fn kodaira_dim_is_one(f: &FibrationData) -> bool {
    delta_invariant(f) > BigRational::zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoetherChi {
    pub value: Rational64,
    pub integral: bool,
}

/// `χ(𝒪_S) = (K² + χ_top)/12`; non-integral values are flagged.
pub fn noether_chi(k_squared: i64, chi_top: i64) -> NoetherChi {
    let value = Rational64::new(k_squared + chi_top, 12);
    NoetherChi { value, integral: value.is_integer() }
}

/// `χ_top(S) = χ_top(B)·χ_top(F) + Σ (χ_top(Fᵢ) − χ_top(F))` with caller
/// supplied fibre Euler numbers.
pub fn chi_top_total(
    g_b: u32,
    chi_top_general_fiber: i64,
    fibers: &[(KodairaFiberTag, i64)],
) -> Result<i64, FibrationError> {
    let chi_b = 2 - 2 * i64::from(g_b);
    let mut total = chi_b * chi_top_general_fiber;
    for (tag, chi_fiber) in fibers {
        if tag.is_multiple_of_smooth() && *chi_fiber != 0 {
            return Err(FibrationError::BadFiberChi(*chi_fiber));
        }
        total += chi_fiber - chi_top_general_fiber;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HurwitzVerdict {
    Consistent,
    Contradiction,
}

/// `Σ (1 − 1/mᵢ) − 2`, which a section through every multiple fibre of a
/// fibration over `ℙ¹` forces to be `≤ 0`.
pub fn hurwitz_multiplicity_bound(ms: &[u32]) -> Result<(BigRational, HurwitzVerdict), FibrationError> {
    hurwitz_bound_over_base(ms, 0)
}

/// Same bound over a base of genus `g_B`: `Σ (1 − 1/mᵢ) − (2 − 2g_B)`.
pub fn hurwitz_bound_over_base(ms: &[u32], g_b: u32) -> Result<(BigRational, HurwitzVerdict), FibrationError> {
    if let Some(&m) = ms.iter().find(|&&m| m < 2) {
        return Err(FibrationError::BadMultiplicity(m));
    }
    let value = multiplicity_defect(ms) - big(2 - 2 * i64::from(g_b));
    let verdict = if value <= BigRational::zero() { HurwitzVerdict::Consistent } else { HurwitzVerdict::Contradiction };
    Ok((value, verdict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SectionCase {
    /// A section of the semigroup fibration on a minimal elliptic surface.
    SectionOfPi,
    /// A smooth rational curve on a surface with trivial canonical bundle.
    K3Section,
}

/// Degree of the normal bundle of the section curve.
pub fn section_normal_degree(f: &FibrationData, case: SectionCase) -> i64 {
    match case {
        SectionCase::SectionOfPi => -f.chi,
        SectionCase::K3Section => -2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EnriquesVerdict {
    NoSection,
    Invalid(String),
}

/// An elliptic fibration of an Enriques surface has exactly two double
/// fibres `2F`, `2F′`. A section would meet the general fibre `F₀ ≡ 2F` in
/// `σ·F₀ = 2(σ·F)`, an even number, but a section meets every fibre once.
/// The verdict does not depend on `section_assumed`.
pub fn enriques_obstruction(multiplicities: &[u32], section_assumed: bool) -> EnriquesVerdict {
    let _ = section_assumed;
    if multiplicities != [2, 2] {
        return EnriquesVerdict::Invalid(format!(
            "an Enriques fibration has exactly two double fibres, got multiplicities {multiplicities:?}"
        ));
    }
    // σ·F₀ = 1 must be divisible by every multiplicity
    if multiplicities.iter().any(|&m| 1 % m != 0) {
        EnriquesVerdict::NoSection
    } else {
        EnriquesVerdict::Invalid("parity argument did not apply".into())
    }
}
