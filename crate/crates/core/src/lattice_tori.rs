//! Exact arithmetic on complex tori `C / (Z + Z·tau)`.
//!
//! Points are stored in lattice coordinates `(p, q)`, meaning `p + q·tau`,
//! always reduced into `[0, 1)²`. Three lattices are supported:
//!
//! * [`FieldTag::Gaussian`]: `tau = i`, `tau² = -1`;
//! * [`FieldTag::Eisenstein`]: `tau = rho`, a primitive cube root of unity,
//!   `tau² = -tau - 1`;
//! * [`FieldTag::Generic`]: `tau` is formal, only rational scalars exist.
//!
//! A CM multiplier `a + b·tau` with integer `a, b` acts on lattice
//! coordinates through an integer 2x2 matrix; fixed points of affine maps
//! are found by solving `(M - I)·x = -shift (mod Z²)` with the Smith normal
//! form.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational};
use crate::snf::{self, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("linear part {0} does not preserve the lattice")]
    NonLatticeLinear(CmScalar),
    #[error("generic lattices only admit rational scalars, got imaginary coefficient {0}")]
    GenericImaginary(String),
    #[error("scalars over different lattices cannot be combined ({0:?} vs {1:?})")]
    FieldMismatch(FieldTag, FieldTag),
    #[error("linear part {0} fixes a positive-dimensional locus")]
    DegenerateLinear(CmScalar),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Gaussian,
    Eisenstein,
    Generic,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FieldTag::Gaussian => "Z[i]",
            FieldTag::Eisenstein => "Z[rho]",
            FieldTag::Generic => "Z",
        };
        f.write_str(s)
    }
}

/// `re + im_coeff·tau` in the CM field selected by `field`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CmScalar {
    re: Rational64,
    im_coeff: Rational64,
    field: FieldTag,
}

impl CmScalar {
    pub fn new(re: Rational64, im_coeff: Rational64, field: FieldTag) -> Result<Self, TorusError> {
        if field == FieldTag::Generic && !im_coeff.is_zero() {
            return Err(TorusError::GenericImaginary(format_rational(&im_coeff)));
        }
        Ok(CmScalar { re, im_coeff, field })
    }

    /// Integer scalar `a + b·tau`.
    pub fn from_ints(a: i64, b: i64, field: FieldTag) -> Result<Self, TorusError> {
        Self::new(Rational64::from_integer(a), Rational64::from_integer(b), field)
    }

    pub fn integer(a: i64, field: FieldTag) -> Self {
        CmScalar { re: Rational64::from_integer(a), im_coeff: Rational64::zero(), field }
    }

    pub fn one(field: FieldTag) -> Self {
        Self::integer(1, field)
    }

    /// `i` (Gaussian) or `rho` (Eisenstein).
    pub fn tau(field: FieldTag) -> Result<Self, TorusError> {
        Self::from_ints(0, 1, field)
    }

    pub fn re(&self) -> Rational64 {
        self.re
    }

    pub fn im_coeff(&self) -> Rational64 {
        self.im_coeff
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im_coeff.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im_coeff.is_zero()
    }

    pub fn mul(&self, other: &CmScalar) -> Result<CmScalar, TorusError> {
        if self.field != other.field {
            return Err(TorusError::FieldMismatch(self.field, other.field));
        }
        let (a, b, c, d) = (self.re, self.im_coeff, other.re, other.im_coeff);
        let (re, im) = match self.field {
            FieldTag::Gaussian => (a * c - b * d, a * d + b * c),
            FieldTag::Eisenstein => (a * c - b * d, a * d + b * c - b * d),
            FieldTag::Generic => (a * c, Rational64::zero()),
        };
        Ok(CmScalar { re, im_coeff: im, field: self.field })
    }

    pub fn neg(&self) -> CmScalar {
        CmScalar { re: -self.re, im_coeff: -self.im_coeff, field: self.field }
    }

    pub fn conj(&self) -> CmScalar {
        let (a, b) = (self.re, self.im_coeff);
        let (re, im) = match self.field {
            FieldTag::Gaussian => (a, -b),
            // conj(rho) = rho² = -1 - rho
            FieldTag::Eisenstein => (a - b, -b),
            FieldTag::Generic => (a, Rational64::zero()),
        };
        CmScalar { re, im_coeff: im, field: self.field }
    }

    /// `s · conj(s)`, a nonnegative rational.
    pub fn norm(&self) -> Rational64 {
        let (a, b) = (self.re, self.im_coeff);
        match self.field {
            FieldTag::Gaussian => a * a + b * b,
            FieldTag::Eisenstein => a * a - a * b + b * b,
            FieldTag::Generic => a * a,
        }
    }

    /// Integer matrix of multiplication by `self` on lattice coordinates
    /// `(p, q)`. Its columns are the coordinates of `self·1` and `self·tau`.
    pub fn lattice_matrix(&self) -> Result<IntMatrix, TorusError> {
        if !self.re.is_integer() || !self.im_coeff.is_integer() {
            return Err(TorusError::NonLatticeLinear(*self));
        }
        let a = self.re.to_integer();
        let b = self.im_coeff.to_integer();
        Ok(match self.field {
            FieldTag::Gaussian => vec![vec![a, -b], vec![b, a]],
            FieldTag::Eisenstein => vec![vec![a, -b], vec![b, a - b]],
            FieldTag::Generic => vec![vec![a, 0], vec![0, a]],
        })
    }

    pub fn preserves_lattice(&self) -> bool {
        self.lattice_matrix().is_ok()
    }
}

impl fmt::Display for CmScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.field {
            FieldTag::Gaussian => "i",
            FieldTag::Eisenstein => "rho",
            FieldTag::Generic => "tau",
        };
        match (self.re.is_zero(), self.im_coeff.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) if self.im_coeff.is_one() => write!(f, "{sym}"),
            (true, false) if (-self.im_coeff).is_one() => write!(f, "-{sym}"),
            (true, false) => write!(f, "{}{sym}", format_rational(&self.im_coeff)),
            (false, false) => {
                let sign = if self.im_coeff.is_negative() { '-' } else { '+' };
                write!(f, "{}{sign}{}{sym}", format_rational(&self.re), format_rational(&self.im_coeff.abs()))
            }
        }
    }
}

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

/// A point `p + q·tau` of the torus, canonical in `[0, 1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    p: Rational64,
    q: Rational64,
}

impl TorusPoint {
    pub fn new(p: Rational64, q: Rational64) -> Self {
        TorusPoint { p: frac(p), q: frac(q) }
    }

    /// `(pn/pd, qn/qd)`. Panics on a zero denominator.
    pub fn from_fracs(pn: i64, pd: i64, qn: i64, qd: i64) -> Self {
        Self::new(Rational64::new(pn, pd), Rational64::new(qn, qd))
    }

    pub fn zero() -> Self {
        TorusPoint { p: Rational64::zero(), q: Rational64::zero() }
    }

    pub fn p(&self) -> Rational64 {
        self.p
    }

    pub fn q(&self) -> Rational64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Order in the group `(Q/Z)²`.
    pub fn order(&self) -> i64 {
        self.p.denom().lcm(self.q.denom())
    }

    pub fn scale(&self, k: i64) -> TorusPoint {
        TorusPoint::new(self.p * k, self.q * k)
    }
}

impl Add for TorusPoint {
    type Output = TorusPoint;
    fn add(self, rhs: TorusPoint) -> TorusPoint {
        TorusPoint::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl Neg for TorusPoint {
    type Output = TorusPoint;
    fn neg(self) -> TorusPoint {
        TorusPoint::new(-self.p, -self.q)
    }
}

impl Sub for TorusPoint {
    type Output = TorusPoint;
    fn sub(self, rhs: TorusPoint) -> TorusPoint {
        self + (-rhs)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.p), format_rational(&self.q))
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.p), format_rational(&self.q)].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [p, q] = <[String; 2]>::deserialize(deserializer)?;
        let parse = |s: &str| {
            parse_rational(s).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}")))
        };
        Ok(TorusPoint::new(parse(&p)?, parse(&q)?))
    }
}

/// Sum in the torus group. The group law is the same for every lattice.
pub fn add_points(a: TorusPoint, b: TorusPoint) -> TorusPoint {
    a + b
}

fn apply_matrix(m: &IntMatrix, x: &TorusPoint) -> TorusPoint {
    TorusPoint::new(
        x.p * m[0][0] + x.q * m[0][1],
        x.p * m[1][0] + x.q * m[1][1],
    )
}

/// Multiply a torus point by a lattice-preserving scalar.
pub fn scale_point(s: &CmScalar, x: &TorusPoint) -> Result<TorusPoint, TorusError> {
    Ok(apply_matrix(&s.lattice_matrix()?, x))
}

/// `x ↦ linear·x + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineTorusMap {
    pub linear: CmScalar,
    pub shift: TorusPoint,
}

impl AffineTorusMap {
    pub fn new(linear: CmScalar, shift: TorusPoint) -> Self {
        AffineTorusMap { linear, shift }
    }

    pub fn identity(field: FieldTag) -> Self {
        Self::new(CmScalar::one(field), TorusPoint::zero())
    }

    pub fn translation(shift: TorusPoint, field: FieldTag) -> Self {
        Self::new(CmScalar::one(field), shift)
    }

    pub fn linear_only(linear: CmScalar) -> Self {
        Self::new(linear, TorusPoint::zero())
    }

    pub fn field(&self) -> FieldTag {
        self.linear.field()
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_one() && self.shift.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_one()
    }

    pub fn validate(&self) -> Result<(), TorusError> {
        self.linear.lattice_matrix().map(|_| ())
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &AffineTorusMap) -> Result<AffineTorusMap, TorusError> {
        let linear = self.linear.mul(&other.linear)?;
        let shift = scale_point(&self.linear, &other.shift)? + self.shift;
        Ok(AffineTorusMap { linear, shift })
    }
}

impl fmt::Display for AffineTorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.linear.is_one(), self.shift.is_zero()) {
            (true, true) => write!(f, "x ↦ x"),
            (true, false) => write!(f, "x ↦ x + {}", self.shift),
            (false, true) => write!(f, "x ↦ {}·x", self.linear),
            (false, false) => write!(f, "x ↦ {}·x + {}", self.linear, self.shift),
        }
    }
}

pub fn apply_map(m: &AffineTorusMap, x: &TorusPoint) -> Result<TorusPoint, TorusError> {
    Ok(scale_point(&m.linear, x)? + m.shift)
}

/// Fixed locus of an affine self-map of a torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPoints {
    /// The identity map fixes every point.
    All,
    Finite(BTreeSet<TorusPoint>),
}

impl FixedPoints {
    pub fn is_empty(&self) -> bool {
        matches!(self, FixedPoints::Finite(s) if s.is_empty())
    }

    /// `None` for [`FixedPoints::All`].
    pub fn len(&self) -> Option<usize> {
        match self {
            FixedPoints::All => None,
            FixedPoints::Finite(s) => Some(s.len()),
        }
    }

    pub fn contains(&self, x: &TorusPoint) -> bool {
        match self {
            FixedPoints::All => true,
            FixedPoints::Finite(s) => s.contains(x),
        }
    }

    /// Intersection, with `All` as the neutral element.
    pub fn intersect(&self, other: &FixedPoints) -> FixedPoints {
        match (self, other) {
            (FixedPoints::All, x) | (x, FixedPoints::All) => x.clone(),
            (FixedPoints::Finite(a), FixedPoints::Finite(b)) => {
                FixedPoints::Finite(a.intersection(b).copied().collect())
            }
        }
    }

    pub fn points(&self) -> Option<&BTreeSet<TorusPoint>> {
        match self {
            FixedPoints::All => None,
            FixedPoints::Finite(s) => Some(s),
        }
    }
}

/// Solve `linear·x + shift = x` on the torus.
///
/// With `M` the lattice matrix of `linear` and `L (M - I) R = D` its Smith
/// form, substituting `x = R y` gives the diagonal system `D y = -L·shift`
/// modulo `Z²`, whose solutions are counted by `|det(M - I)|`.
pub fn fixed_points(m: &AffineTorusMap) -> Result<FixedPoints, TorusError> {
    let matrix = m.linear.lattice_matrix()?;
    if m.linear.is_one() {
        return Ok(if m.shift.is_zero() {
            FixedPoints::All
        } else {
            FixedPoints::Finite(BTreeSet::new())
        });
    }
    let shifted: IntMatrix = vec![
        vec![matrix[0][0] - 1, matrix[0][1]],
        vec![matrix[1][0], matrix[1][1] - 1],
    ];
    let smith = snf::smith_normal_form(&shifted);
    let l = &smith.left;
    let rhs = [
        -(m.shift.p() * l[0][0] + m.shift.q() * l[0][1]),
        -(m.shift.p() * l[1][0] + m.shift.q() * l[1][1]),
    ];
    let invariants = smith.invariants();
    if invariants.contains(&0) {
        return Err(TorusError::DegenerateLinear(m.linear));
    }

    let coordinate_choices: Vec<Vec<Rational64>> = invariants
        .iter()
        .zip(rhs)
        .map(|(&d, c)| (0..d).map(|k| (c + k) / d).collect())
        .collect();
    let r = &smith.right;
    let mut solutions = BTreeSet::new();
    for y0 in &coordinate_choices[0] {
        for y1 in &coordinate_choices[1] {
            solutions.insert(TorusPoint::new(
                *y0 * r[0][0] + *y1 * r[0][1],
                *y0 * r[1][0] + *y1 * r[1][1],
            ));
        }
    }
    Ok(FixedPoints::Finite(solutions))
}

/// `|det(M - I)|` for the lattice matrix `M` of `linear`.
pub fn fixed_point_count(linear: &CmScalar) -> Result<i64, TorusError> {
    let m = linear.lattice_matrix()?;
    Ok(((m[0][0] - 1) * (m[1][1] - 1) - m[0][1] * m[1][0]).abs())
}

/// All `n²` points whose coordinates have denominators dividing `n`.
pub fn torsion_points(n: u32) -> Vec<TorusPoint> {
    assert!(n >= 1, "torsion level must be positive");
    let n = i64::from(n);
    let mut out = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            out.push(TorusPoint::from_fracs(i, n, j, n));
        }
    }
    out
}
