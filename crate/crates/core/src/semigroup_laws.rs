//! Semigroup laws on finite models.
//!
//! Varieties are replaced by finite universes: the label sets `X`, `Y` and a
//! torsion subgroup standing in for the abelian variety `A` of the kernel
//! `X × A × Y`, and finite samples of surfaces for the induced laws
//! `μ(s₁, s₂) = σ(μ̃(π(s₁), π(s₂)))`. Every formula is pointwise, so checking
//! associativity on these universes is exact.

use std::fmt::{self, Debug};
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice_tori::{torsion_points, FieldTag, TorusPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("element {0} does not belong to the kernel")]
    TripleMismatch(String),
    #[error("dimension signature ({0}, {1}, {2}) exceeds the surface dimension")]
    InvalidSignature(u8, u8, u8),
    #[error("kernel label sets must be nonempty")]
    EmptyLabels,
    #[error("σ is not a section: π(σ({0})) = {1}")]
    SectionViolation(String, String),
    #[error("universe is not closed: μ({0}, {1}) = {2} lies outside it")]
    UniverseNotClosed(String, String, String),
    #[error("the base curve carries no group law, so the additive base law is unavailable")]
    BaseNotGroup,
}

/// The abelian-variety component of a kernel, sampled by its `n`-torsion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelTorus {
    Trivial,
    Torsion { field: FieldTag, level: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelTriple {
    x_labels: Vec<String>,
    a: KernelTorus,
    y_labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelElement {
    pub x: usize,
    pub a: TorusPoint,
    pub y: usize,
}

impl fmt::Display for KernelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x{}, {}, y{})", self.x, self.a, self.y)
    }
}

impl KernelTriple {
    pub fn new(x_labels: Vec<String>, a: KernelTorus, y_labels: Vec<String>) -> Result<Self, LawError> {
        if x_labels.is_empty() || y_labels.is_empty() {
            return Err(LawError::EmptyLabels);
        }
        Ok(KernelTriple { x_labels, a, y_labels })
    }

    /// Labels `x0..`, `y0..` of the given sizes.
    pub fn with_sizes(x: usize, a: KernelTorus, y: usize) -> Result<Self, LawError> {
        let labels = |prefix: &str, n: usize| (0..n).map(|i| format!("{prefix}{i}")).collect();
        Self::new(labels("x", x), a, labels("y", y))
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn torus(&self) -> KernelTorus {
        self.a
    }

    fn a_points(&self) -> Vec<TorusPoint> {
        match self.a {
            KernelTorus::Trivial => vec![TorusPoint::zero()],
            KernelTorus::Torsion { level, .. } => torsion_points(level),
        }
    }

    pub fn contains(&self, u: &KernelElement) -> bool {
        let a_ok = match self.a {
            KernelTorus::Trivial => u.a.is_zero(),
            KernelTorus::Torsion { level, .. } => i64::from(level) % u.a.order() == 0,
        };
        u.x < self.x_labels.len() && u.y < self.y_labels.len() && a_ok
    }

    /// Every element, in lexicographic order.
    pub fn elements(&self) -> Vec<KernelElement> {
        let a_points = self.a_points();
        let mut out = Vec::with_capacity(self.x_labels.len() * a_points.len() * self.y_labels.len());
        for x in 0..self.x_labels.len() {
            for a in &a_points {
                for y in 0..self.y_labels.len() {
                    out.push(KernelElement { x, a: *a, y });
                }
            }
        }
        out.sort();
        out
    }
}

/// `(x₁, a₁, y₁)·(x₂, a₂, y₂) = (x₁, a₁ + a₂, y₂)`.
pub fn nu_compose(triple: &KernelTriple, u: &KernelElement, v: &KernelElement) -> Result<KernelElement, LawError> {
    for w in [u, v] {
        if !triple.contains(w) {
            return Err(LawError::TripleMismatch(w.to_string()));
        }
    }
    Ok(KernelElement { x: u.x, a: u.a + v.a, y: v.y })
}

/// `(dim X, dim A, dim Y)` for the kernel of a law on a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DimensionSignature {
    pub dim_x: u8,
    pub dim_a: u8,
    pub dim_y: u8,
}

impl DimensionSignature {
    pub fn new(dim_x: u8, dim_a: u8, dim_y: u8) -> Result<Self, LawError> {
        if u16::from(dim_x) + u16::from(dim_a) + u16::from(dim_y) > 2 {
            return Err(LawError::InvalidSignature(dim_x, dim_a, dim_y));
        }
        Ok(DimensionSignature { dim_x, dim_a, dim_y })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Triviality {
    Trivial,
    Nontrivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseLabel {
    pub case_index: u8,
    pub triviality: Triviality,
}

pub fn classify_signature(d: DimensionSignature) -> Result<CaseLabel, LawError> {
    let case_index = match (d.dim_x, d.dim_a, d.dim_y) {
        (0, 2, 0) => 1,
        (0, 1, 0) => 2,
        (0, 0, 0) => 3,
        (1, 0, 0) => 4,
        (0, 0, 1) => 5,
        (1, 1, 0) => 6,
        (0, 1, 1) => 7,
        (2, 0, 0) => 8,
        (0, 0, 2) => 9,
        (1, 0, 1) => 10,
        (x, a, y) => return Err(LawError::InvalidSignature(x, a, y)),
    };
    let triviality = if matches!(case_index, 2 | 4 | 5) { Triviality::Nontrivial } else { Triviality::Trivial };
    Ok(CaseLabel { case_index, triviality })
}

/// Law `μ̃` on the base curve of a non-trivial structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseLaw {
    /// Group law of an elliptic base.
    Add,
    /// `μ̃(c₁, c₂) = c₁`.
    Left,
    /// `μ̃(c₁, c₂) = c₂`.
    Right,
}

/// A point of a base curve. Only elliptic curves have a group law.
pub trait CurvePoint: Clone + Ord + Hash + Debug + Send + Sync {
    fn group_add(&self, other: &Self) -> Option<Self>;
}

impl CurvePoint for TorusPoint {
    fn group_add(&self, other: &Self) -> Option<Self> {
        Some(*self + *other)
    }
}

/// A sampled point of a rational (or higher-genus, non-elliptic) curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveLabel(pub u32);

impl CurvePoint for CurveLabel {
    fn group_add(&self, _other: &Self) -> Option<Self> {
        None
    }
}

type Retraction<S, C> = Arc<dyn Fn(&S) -> C + Send + Sync>;
type Section<S, C> = Arc<dyn Fn(&C) -> S + Send + Sync>;

/// `μ(s₁, s₂) = σ(μ̃(π(s₁), π(s₂)))`.
#[derive(Clone)]
pub struct InducedLaw<S, C> {
    retraction: Retraction<S, C>,
    section: Section<S, C>,
    base: BaseLaw,
}

impl<S, C> fmt::Debug for InducedLaw<S, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InducedLaw").field("base", &self.base).finish_non_exhaustive()
    }
}

impl<S, C> InducedLaw<S, C>
where
    S: Clone + Ord + Debug + Send + Sync,
    C: CurvePoint,
{
    pub fn new(
        retraction: impl Fn(&S) -> C + Send + Sync + 'static,
        section: impl Fn(&C) -> S + Send + Sync + 'static,
        base: BaseLaw,
    ) -> Self {
        InducedLaw { retraction: Arc::new(retraction), section: Arc::new(section), base }
    }

    pub fn base(&self) -> BaseLaw {
        self.base
    }

    pub fn retract(&self, s: &S) -> C {
        (self.retraction)(s)
    }

    pub fn section(&self, c: &C) -> S {
        (self.section)(c)
    }

    pub fn base_op(&self, c1: &C, c2: &C) -> Result<C, LawError> {
        match self.base {
            BaseLaw::Add => c1.group_add(c2).ok_or(LawError::BaseNotGroup),
            BaseLaw::Left => Ok(c1.clone()),
            BaseLaw::Right => Ok(c2.clone()),
        }
    }

    /// The law applied literally; see [`InducedLaw::validate_section`].
    pub fn induced_mu(&self, s1: &S, s2: &S) -> Result<S, LawError> {
        let c = self.base_op(&self.retract(s1), &self.retract(s2))?;
        Ok(self.section(&c))
    }

    /// Checks `π(σ(c)) = c` on every sampled base point.
    pub fn validate_section<'a>(&self, samples: impl IntoIterator<Item = &'a C>) -> Result<(), LawError>
    where
        C: 'a,
    {
        for c in samples {
            let back = self.retract(&self.section(c));
            if back != *c {
                return Err(LawError::SectionViolation(format!("{c:?}"), format!("{back:?}")));
            }
        }
        Ok(())
    }
}

/// Outcome of an exhaustive associativity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Associativity<T> {
    Holds { triples: u64 },
    /// Lexicographically first `(a, b, c)` with `(ab)c ≠ a(bc)`.
    Fails { a: T, b: T, c: T, left: T, right: T },
}

impl<T> Associativity<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Associativity::Holds { .. })
    }
}

/// Sorted, deduplicated universe with its multiplication table.
fn product_table<T, F>(universe: &[T], op: F) -> Result<(Vec<T>, Vec<Vec<usize>>), LawError>
where
    T: Clone + Ord + Debug + Send + Sync,
    F: Fn(&T, &T) -> Result<T, LawError> + Sync,
{
    let mut points = universe.to_vec();
    points.sort();
    points.dedup();
    let table = points
        .par_iter()
        .map(|a| {
            points
                .iter()
                .map(|b| {
                    let ab = op(a, b)?;
                    points.binary_search(&ab).map_err(|_| {
                        LawError::UniverseNotClosed(format!("{a:?}"), format!("{b:?}"), format!("{ab:?}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((points, table))
}

fn associativity_from_table<T: Clone + Send + Sync>(points: &[T], table: &[Vec<usize>]) -> Associativity<T> {
    let n = points.len();
    // find_map_first keeps the lexicographic minimum regardless of how rayon splits the range
    let violation = (0..n).into_par_iter().find_map_first(|i| {
        (0..n).find_map(|j| {
            (0..n).find_map(|k| {
                let left = table[table[i][j]][k];
                let right = table[i][table[j][k]];
                (left != right).then_some((i, j, k, left, right))
            })
        })
    });
    match violation {
        None => Associativity::Holds { triples: (n as u64).pow(3) },
        Some((i, j, k, l, r)) => Associativity::Fails {
            a: points[i].clone(),
            b: points[j].clone(),
            c: points[k].clone(),
            left: points[l].clone(),
            right: points[r].clone(),
        },
    }
}

/// Exhaustive check of `μ(μ(a,b),c) = μ(a,μ(b,c))` over `universe`, which
/// must be closed under the law.
pub fn check_associative<S, C>(law: &InducedLaw<S, C>, universe: &[S]) -> Result<Associativity<S>, LawError>
where
    S: Clone + Ord + Debug + Send + Sync,
    C: CurvePoint,
{
    let (points, table) = product_table(universe, |a, b| law.induced_mu(a, b))?;
    Ok(associativity_from_table(&points, &table))
}

/// Exhaustive check of the kernel composition over all of `triple`.
pub fn check_kernel_associative(triple: &KernelTriple) -> Result<Associativity<KernelElement>, LawError> {
    let (points, table) = product_table(&triple.elements(), |u, v| nu_compose(triple, u, v))?;
    Ok(associativity_from_table(&points, &table))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Pt = (TorusPoint, TorusPoint);

    fn cyclic(n: i64) -> Vec<TorusPoint> {
        (0..n).map(|k| TorusPoint::from_fracs(k, n, 0, 1)).collect()
    }

    fn product_universe(n: i64) -> Vec<Pt> {
        let c = cyclic(n);
        c.iter().flat_map(|a| c.iter().map(move |b| (*a, *b))).collect()
    }

    fn product_law(base: BaseLaw) -> InducedLaw<Pt, TorusPoint> {
        InducedLaw::new(|s: &Pt| s.0, |c: &TorusPoint| (*c, TorusPoint::zero()), base)
    }

    #[test]
    fn nu_examples() {
        let triple = KernelTriple::with_sizes(2, KernelTorus::Trivial, 2).unwrap();
        let u = KernelElement { x: 0, a: TorusPoint::zero(), y: 0 };
        let v = KernelElement { x: 1, a: TorusPoint::zero(), y: 1 };
        assert_eq!(nu_compose(&triple, &u, &v).unwrap(), KernelElement { x: 0, a: TorusPoint::zero(), y: 1 });

        let torsion = KernelTriple::with_sizes(2, KernelTorus::Torsion { field: FieldTag::Generic, level: 3 }, 2).unwrap();
        let a = TorusPoint::from_fracs(1, 3, 2, 3);
        let w = KernelElement { x: 1, a, y: 0 };
        let id_a = KernelElement { x: 1, a: TorusPoint::zero(), y: 0 };
        assert_eq!(nu_compose(&torsion, &w, &id_a).unwrap(), w);
    }

    #[test]
    fn nu_exhaustive_associativity() {
        let triple = KernelTriple::with_sizes(2, KernelTorus::Torsion { field: FieldTag::Generic, level: 3 }, 2).unwrap();
        // 2 · 9 · 2 points of the 3-torsion kernel
        assert_eq!(triple.elements().len(), 36);
        let elements = triple.elements();
        let mut count = 0u64;
        for u in &elements {
            for v in &elements {
                for w in &elements {
                    let l = nu_compose(&triple, &nu_compose(&triple, u, v).unwrap(), w).unwrap();
                    let r = nu_compose(&triple, u, &nu_compose(&triple, v, w).unwrap()).unwrap();
                    assert_eq!(l, r);
                    count += 1;
                }
            }
        }
        assert_eq!(check_kernel_associative(&triple).unwrap(), Associativity::Holds { triples: count });
    }

    #[test]
    fn nu_rejects_foreign_elements() {
        let triple = KernelTriple::with_sizes(1, KernelTorus::Trivial, 1).unwrap();
        let ok = KernelElement { x: 0, a: TorusPoint::zero(), y: 0 };
        let bad = KernelElement { x: 0, a: TorusPoint::from_fracs(1, 2, 0, 1), y: 0 };
        assert!(matches!(nu_compose(&triple, &ok, &bad), Err(LawError::TripleMismatch(_))));
        let bad_x = KernelElement { x: 3, ..ok };
        assert!(matches!(nu_compose(&triple, &bad_x, &ok), Err(LawError::TripleMismatch(_))));
    }

    #[test]
    fn signatures() {
        let all = [
            ((0, 2, 0), 1),
            ((0, 1, 0), 2),
            ((0, 0, 0), 3),
            ((1, 0, 0), 4),
            ((0, 0, 1), 5),
            ((1, 1, 0), 6),
            ((0, 1, 1), 7),
            ((2, 0, 0), 8),
            ((0, 0, 2), 9),
            ((1, 0, 1), 10),
        ];
        for ((x, a, y), case) in all {
            let label = classify_signature(DimensionSignature::new(x, a, y).unwrap()).unwrap();
            assert_eq!(label.case_index, case);
            let nontrivial = matches!(case, 2 | 4 | 5);
            assert_eq!(label.triviality == Triviality::Nontrivial, nontrivial);
        }
        assert!(DimensionSignature::new(1, 1, 1).is_err());
        assert!(DimensionSignature::new(0, 3, 0).is_err());
        let mut accepted = 0;
        for x in 0..=2 {
            for a in 0..=2 {
                for y in 0..=2 {
                    if let Ok(d) = DimensionSignature::new(x, a, y) {
                        classify_signature(d).unwrap();
                        accepted += 1;
                    }
                }
            }
        }
        assert_eq!(accepted, 10);
    }

    #[test]
    fn induced_examples() {
        let left = product_law(BaseLaw::Left);
        let universe = product_universe(3);
        for s1 in &universe {
            for s2 in &universe {
                assert_eq!(left.induced_mu(s1, s2).unwrap(), left.section(&left.retract(s1)));
            }
        }
        let add = product_law(BaseLaw::Add);
        for s1 in &universe {
            for s2 in &universe {
                assert_eq!(add.induced_mu(s1, s2).unwrap(), (s1.0 + s2.0, TorusPoint::zero()));
            }
        }
        let s0 = add.section(&TorusPoint::zero());
        assert_eq!(add.induced_mu(&s0, &s0).unwrap(), s0);
    }

    #[test]
    fn valid_sections_are_associative() {
        for base in [BaseLaw::Add, BaseLaw::Left, BaseLaw::Right] {
            let law = product_law(base);
            let universe = product_universe(4);
            law.validate_section(&cyclic(4)).unwrap();
            assert_eq!(check_associative(&law, &universe).unwrap(), Associativity::Holds { triples: 16u64.pow(3) });
        }
    }

    #[test]
    fn corrupted_section_yields_counterexample() {
        // π is the sum of coordinates, σ'(c) = (c + 1/3, 0)
        let t = TorusPoint::from_fracs(1, 3, 0, 1);
        let law: InducedLaw<Pt, TorusPoint> =
            InducedLaw::new(|s: &Pt| s.0 + s.1, move |c: &TorusPoint| (*c + t, TorusPoint::zero()), BaseLaw::Left);
        let c = cyclic(3);
        assert!(matches!(law.validate_section(&c), Err(LawError::SectionViolation(..))));
        let universe = product_universe(3);
        match check_associative(&law, &universe).unwrap() {
            Associativity::Fails { a, b, c, left, right } => {
                // brute force: first triple in lexicographic order
                let mut sorted = universe.clone();
                sorted.sort();
                let sorted = &sorted;
                let mu = |x: &Pt, y: &Pt| law.induced_mu(x, y).unwrap();
                let first = sorted
                    .iter()
                    .flat_map(|x| sorted.iter().flat_map(move |y| sorted.iter().map(move |z| (*x, *y, *z))))
                    .find(|(x, y, z)| mu(&mu(x, y), z) != mu(x, &mu(y, z)))
                    .unwrap();
                assert_eq!((a, b, c), first);
                assert_eq!(left, mu(&mu(&a, &b), &c));
                assert_eq!(right, mu(&a, &mu(&b, &c)));
                assert_ne!(left, right);
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn singleton_universe() {
        let law = product_law(BaseLaw::Add);
        let u = vec![(TorusPoint::zero(), TorusPoint::zero())];
        assert_eq!(check_associative(&law, &u).unwrap(), Associativity::Holds { triples: 1 });
    }

    #[test]
    fn not_closed() {
        let law = product_law(BaseLaw::Add);
        let u = vec![(TorusPoint::from_fracs(1, 3, 0, 1), TorusPoint::zero())];
        assert!(matches!(check_associative(&law, &u), Err(LawError::UniverseNotClosed(..))));
    }

    #[test]
    fn rational_base_has_no_addition() {
        let law: InducedLaw<(CurveLabel, u32), CurveLabel> =
            InducedLaw::new(|s: &(CurveLabel, u32)| s.0, |c: &CurveLabel| (*c, 0), BaseLaw::Add);
        let s = (CurveLabel(0), 0);
        assert_eq!(law.induced_mu(&s, &s), Err(LawError::BaseNotGroup));
    }
}
