//! Finite groups acting on a product of tori `E × F`, translating on `E`.
//!
//! This covers the seven bielliptic presentations `(E × F)/G` and the
//! `(D × E)/G` presentations of smooth elliptic fibrations. The decision
//! procedures here reduce existence of a section to a common fixed point of
//! the `F`-action, computed exactly through [`fixed_points`].

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice_tori::{
    fixed_points, AffineTorusMap, CmScalar, FieldTag, FixedPoints, TorusError, TorusPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error("generator {index} does not act on the first factor by a translation")]
    NonTranslation { index: usize },
    #[error("generator {index} is defined over {found:?}, expected {expected:?}")]
    FieldMismatch { index: usize, expected: FieldTag, found: FieldTag },
    #[error("group closes at {actual} elements, declared order is {declared}")]
    OrderMismatch { declared: usize, actual: String },
    #[error("action is not free: {0} translates the first factor trivially")]
    NotFree(String),
    #[error("action is not faithful on the second factor: {0} acts trivially there")]
    NotFaithful(String),
    #[error("translation {point} for generator {index} has order {found}, expected {expected}")]
    BadTranslationOrder { index: usize, point: TorusPoint, expected: i64, found: i64 },
    #[error("expected {expected} translations, got {found}")]
    BadTranslationCount { expected: usize, found: usize },
    #[error("bielliptic type must be in 1..=7, got {0}")]
    BadType(i64),
    #[error("every element acts on the second factor by translations; equivariant maps need not be constant")]
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    E,
    F,
}

/// One group element, as the pair of maps it induces on the two factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub on_e: AffineTorusMap,
    pub on_f: AffineTorusMap,
}

impl GroupElement {
    pub fn new(on_e: AffineTorusMap, on_f: AffineTorusMap) -> Self {
        GroupElement { on_e, on_f }
    }

    pub fn identity(e_field: FieldTag, f_field: FieldTag) -> Self {
        GroupElement::new(AffineTorusMap::identity(e_field), AffineTorusMap::identity(f_field))
    }

    pub fn is_identity(&self) -> bool {
        self.on_e.is_identity() && self.on_f.is_identity()
    }

    pub fn on(&self, factor: Factor) -> &AffineTorusMap {
        match factor {
            Factor::E => &self.on_e,
            Factor::F => &self.on_f,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, TorusError> {
        Ok(GroupElement::new(self.on_e.compose(&other.on_e)?, self.on_f.compose(&other.on_f)?))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[E: {}; F: {}]", self.on_e, self.on_f)
    }
}

/// A finite abelian group of pairs of affine maps, translating on `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    e_field: FieldTag,
    f_field: FieldTag,
    generators: Vec<GroupElement>,
    declared_order: usize,
    elements: Vec<GroupElement>,
}

impl GroupAction {
    /// Validates the generators, closes the group and checks freeness.
    pub fn new(
        e_field: FieldTag,
        f_field: FieldTag,
        generators: Vec<GroupElement>,
        declared_order: usize,
    ) -> Result<Self, ActionError> {
        for (index, g) in generators.iter().enumerate() {
            for (map, expected) in [(&g.on_e, e_field), (&g.on_f, f_field)] {
                if map.field() != expected {
                    return Err(ActionError::FieldMismatch { index, expected, found: map.field() });
                }
                map.validate()?;
            }
            if !g.on_e.is_translation() {
                return Err(ActionError::NonTranslation { index });
            }
        }
        let elements = enumerate_elements(e_field, f_field, &generators, declared_order)?;
        if let Some(bad) = elements.iter().find(|g| !g.is_identity() && g.on_e.is_identity()) {
            return Err(ActionError::NotFree(bad.to_string()));
        }
        Ok(GroupAction { e_field, f_field, generators, declared_order, elements })
    }

    pub fn trivial(e_field: FieldTag, f_field: FieldTag) -> Self {
        GroupAction {
            e_field,
            f_field,
            generators: Vec::new(),
            declared_order: 1,
            elements: vec![GroupElement::identity(e_field, f_field)],
        }
    }

    pub fn e_field(&self) -> FieldTag {
        self.e_field
    }

    pub fn f_field(&self) -> FieldTag {
        self.f_field
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.declared_order
    }

    /// All group elements, identity first.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn non_identity(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter().filter(|g| !g.is_identity())
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn check_faithful_on(&self, factor: Factor) -> Result<(), ActionError> {
        match self.non_identity().find(|g| g.on(factor).is_identity()) {
            Some(g) => Err(ActionError::NotFaithful(g.to_string())),
            None => Ok(()),
        }
    }
}

/// Close `generators` under composition, stopping as soon as the closure
/// exceeds `declared_order`.
pub fn enumerate_elements(
    e_field: FieldTag,
    f_field: FieldTag,
    generators: &[GroupElement],
    declared_order: usize,
) -> Result<Vec<GroupElement>, ActionError> {
    let identity = GroupElement::identity(e_field, f_field);
    let mut seen: HashSet<GroupElement> = HashSet::from([identity]);
    let mut elements = vec![identity];
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x)?;
            if seen.insert(y) {
                elements.push(y);
                if elements.len() > declared_order {
                    return Err(ActionError::OrderMismatch {
                        declared: declared_order,
                        actual: format!("more than {declared_order}"),
                    });
                }
                queue.push_back(y);
            }
        }
    }
    if elements.len() != declared_order {
        return Err(ActionError::OrderMismatch {
            declared: declared_order,
            actual: elements.len().to_string(),
        });
    }
    Ok(elements)
}

/// Points of `F` fixed by the whole group.
pub fn common_fixed_points_on_f(g: &GroupAction) -> FixedPoints {
    g.non_identity().fold(FixedPoints::All, |acc, el| {
        // maps were validated at construction
        let fp = fixed_points(&el.on_f).expect("validated lattice-preserving map");
        acc.intersect(&fp)
    })
}

pub fn acts_by_translations_on_factor(g: &GroupAction, factor: Factor) -> bool {
    g.elements().iter().all(|el| el.on(factor).is_translation())
}

/// Whether a `G`-equivariant morphism `E → F` exists, given that some
/// element acts on `F` with a non-trivial linear part. Such a morphism must
/// then be constant, so this is the same as a common fixed point on `F`.
pub fn admits_equivariant_constant(g: &GroupAction) -> Result<bool, ActionError> {
    if acts_by_translations_on_factor(g, Factor::F) {
        return Err(ActionError::NotApplicable);
    }
    Ok(!common_fixed_points_on_f(g).is_empty())
}

/// Index of a bielliptic type, `1..=7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct BiellipticType(u8);

impl TryFrom<i64> for BiellipticType {
    type Error = ActionError;
    fn try_from(index: i64) -> Result<Self, ActionError> {
        BiellipticType::new(index)
    }
}

impl From<BiellipticType> for i64 {
    fn from(t: BiellipticType) -> i64 {
        i64::from(t.0)
    }
}

impl fmt::Display for BiellipticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {}", self.0)
    }
}

impl BiellipticType {
    pub const ALL: [BiellipticType; 7] = [
        BiellipticType(1),
        BiellipticType(2),
        BiellipticType(3),
        BiellipticType(4),
        BiellipticType(5),
        BiellipticType(6),
        BiellipticType(7),
    ];

    pub fn new(index: i64) -> Result<Self, ActionError> {
        match u8::try_from(index) {
            Ok(i @ 1..=7) => Ok(BiellipticType(i)),
            _ => Err(ActionError::BadType(index)),
        }
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    pub fn f_field(&self) -> FieldTag {
        match self.0 {
            1 | 2 => FieldTag::Generic,
            3 | 4 => FieldTag::Gaussian,
            _ => FieldTag::Eisenstein,
        }
    }

    /// Orders of the cyclic factors of `G`, one per generator.
    pub fn generator_orders(&self) -> &'static [i64] {
        match self.0 {
            1 => &[2],
            2 => &[2, 2],
            3 => &[4],
            4 => &[4, 2],
            5 => &[3],
            6 => &[3, 3],
            _ => &[6],
        }
    }

    pub fn group_order(&self) -> usize {
        self.generator_orders().iter().product::<i64>() as usize
    }

    pub fn group_label(&self) -> String {
        self.generator_orders()
            .iter()
            .map(|n| format!("Z/{n}"))
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }

    /// The generators of the action on `F`.
    pub fn f_generators(&self) -> Vec<AffineTorusMap> {
        let field = self.f_field();
        let unit = |a: i64, b: i64| CmScalar::from_ints(a, b, field).expect("CM unit");
        let one = CmScalar::one(field);
        let linear = AffineTorusMap::linear_only;
        match self.0 {
            1 => vec![linear(unit(-1, 0))],
            // epsilon = 1/2, a half period
            2 => vec![linear(unit(-1, 0)), AffineTorusMap::new(one, TorusPoint::from_fracs(1, 2, 0, 1))],
            3 => vec![linear(unit(0, 1))],
            // (1 + i)/2
            4 => vec![linear(unit(0, 1)), AffineTorusMap::new(one, TorusPoint::from_fracs(1, 2, 1, 2))],
            5 => vec![linear(unit(0, 1))],
            // (1 - rho)/3
            6 => vec![linear(unit(0, 1)), AffineTorusMap::new(one, TorusPoint::from_fracs(1, 3, -1, 3))],
            _ => vec![linear(unit(0, -1))],
        }
    }

    /// Translations of `E` used when the caller supplies none: `1/n` along
    /// the first period for the first cyclic factor and along the second
    /// period for the second, so that the action on `E` stays free.
    pub fn default_e_translations(&self) -> Vec<TorusPoint> {
        self.generator_orders()
            .iter()
            .enumerate()
            .map(|(i, &n)| if i == 0 { TorusPoint::from_fracs(1, n, 0, 1) } else { TorusPoint::from_fracs(0, 1, 1, n) })
            .collect()
    }
}

/// Build the bielliptic group action of type `t` on `E × F`.
pub fn instantiate_bielliptic(
    t: BiellipticType,
    e_translations: Option<&[TorusPoint]>,
) -> Result<GroupAction, ActionError> {
    let defaults = t.default_e_translations();
    let translations = e_translations.unwrap_or(&defaults);
    let orders = t.generator_orders();
    if translations.len() != orders.len() {
        return Err(ActionError::BadTranslationCount { expected: orders.len(), found: translations.len() });
    }
    for (index, (point, &expected)) in translations.iter().zip(orders).enumerate() {
        if point.order() != expected {
            return Err(ActionError::BadTranslationOrder { index, point: *point, expected, found: point.order() });
        }
    }
    let generators = translations
        .iter()
        .zip(t.f_generators())
        .map(|(x, on_f)| GroupElement::new(AffineTorusMap::translation(*x, FieldTag::Generic), on_f))
        .collect();
    GroupAction::new(FieldTag::Generic, t.f_field(), generators, t.group_order())
}

/// One generator of an explicit `(D × E)/G` presentation: a translation of
/// the base factor and an affine map `x ↦ (a + bτ)·x + shift` of the fibre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub base_shift: TorusPoint,
    pub fiber_linear: [i64; 2],
    #[serde(default = "TorusPoint::zero")]
    pub fiber_shift: TorusPoint,
}

/// Serializable description of a group action, built on demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase", deny_unknown_fields)]
pub enum BaseActionSpec {
    Trivial,
    Bielliptic {
        #[serde(rename = "type")]
        bielliptic_type: BiellipticType,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        e_translations: Option<Vec<TorusPoint>>,
    },
    Explicit {
        fiber_field: FieldTag,
        order: usize,
        generators: Vec<GeneratorSpec>,
    },
}

impl BaseActionSpec {
    pub fn build(&self) -> Result<GroupAction, ActionError> {
        match self {
            BaseActionSpec::Trivial => Ok(GroupAction::trivial(FieldTag::Generic, FieldTag::Generic)),
            BaseActionSpec::Bielliptic { bielliptic_type, e_translations } => {
                instantiate_bielliptic(*bielliptic_type, e_translations.as_deref())
            }
            BaseActionSpec::Explicit { fiber_field, order, generators } => {
                let generators = generators
                    .iter()
                    .map(|g| {
                        let linear = CmScalar::from_ints(g.fiber_linear[0], g.fiber_linear[1], *fiber_field)?;
                        Ok(GroupElement::new(
                            AffineTorusMap::translation(g.base_shift, FieldTag::Generic),
                            AffineTorusMap::new(linear, g.fiber_shift),
                        ))
                    })
                    .collect::<Result<Vec<_>, TorusError>>()?;
                GroupAction::new(FieldTag::Generic, *fiber_field, generators, *order)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_tori::{apply_map, torsion_points};
    use std::collections::BTreeSet;

    fn action(t: i64) -> GroupAction {
        instantiate_bielliptic(BiellipticType::new(t).unwrap(), None).unwrap()
    }

    #[test]
    fn type_one_shape() {
        let g = action(1);
        assert_eq!(g.generators().len(), 1);
        assert_eq!(g.generators()[0].on_f.linear, CmScalar::integer(-1, FieldTag::Generic));
        assert_eq!(g.order(), 2);
        assert_eq!(g.elements().len(), 2);
    }

    #[test]
    fn type_four_shape() {
        let g = action(4);
        let gens = g.generators();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].on_f, AffineTorusMap::linear_only(CmScalar::tau(FieldTag::Gaussian).unwrap()));
        assert_eq!(
            gens[1].on_f,
            AffineTorusMap::new(CmScalar::one(FieldTag::Gaussian), TorusPoint::from_fracs(1, 2, 1, 2))
        );
        assert_eq!(g.elements().len(), 8);
    }

    #[test]
    fn type_seven_shape() {
        let g = action(7);
        assert_eq!(g.generators()[0].on_f.linear, CmScalar::from_ints(0, -1, FieldTag::Eisenstein).unwrap());
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn closure_orders() {
        let expected = [2, 4, 4, 8, 3, 9, 6];
        for (t, n) in BiellipticType::ALL.iter().zip(expected) {
            let g = instantiate_bielliptic(*t, None).unwrap();
            assert_eq!(g.elements().len(), n, "{t}");
            assert!(g.elements()[0].is_identity());
        }
    }

    #[test]
    fn fixed_point_verdicts() {
        for t in BiellipticType::ALL {
            let g = instantiate_bielliptic(t, None).unwrap();
            let common = common_fixed_points_on_f(&g);
            let expect_nonempty = matches!(t.index(), 1 | 3 | 5 | 7);
            assert_eq!(!common.is_empty(), expect_nonempty, "{t}");
            assert_eq!(admits_equivariant_constant(&g).unwrap(), expect_nonempty);
            for p in common.points().unwrap() {
                for gen in g.generators() {
                    assert_eq!(apply_map(&gen.on_f, p).unwrap(), *p);
                }
            }
        }
        assert_eq!(common_fixed_points_on_f(&action(1)).len(), Some(4));
        assert_eq!(
            common_fixed_points_on_f(&action(7)),
            FixedPoints::Finite([TorusPoint::zero()].into_iter().collect())
        );
    }

    #[test]
    fn brute_force_common_fixed_points() {
        for t in BiellipticType::ALL {
            let g = instantiate_bielliptic(t, None).unwrap();
            let brute: BTreeSet<_> = torsion_points(12)
                .into_iter()
                .filter(|x| g.elements().iter().all(|el| apply_map(&el.on_f, x).unwrap() == *x))
                .collect();
            assert_eq!(common_fixed_points_on_f(&g).points().unwrap(), &brute, "{t}");
        }
    }

    #[test]
    fn translation_tests() {
        for t in BiellipticType::ALL {
            assert!(acts_by_translations_on_factor(&action(t.index().into()), Factor::E));
        }
        assert!(!acts_by_translations_on_factor(&action(3), Factor::F));
        let trivial = GroupAction::trivial(FieldTag::Generic, FieldTag::Generic);
        assert!(acts_by_translations_on_factor(&trivial, Factor::F));
        assert_eq!(common_fixed_points_on_f(&trivial), FixedPoints::All);
        assert_eq!(admits_equivariant_constant(&trivial), Err(ActionError::NotApplicable));
    }

    #[test]
    fn bad_translation_order() {
        let t = BiellipticType::new(3).unwrap();
        let err = instantiate_bielliptic(t, Some(&[TorusPoint::from_fracs(1, 2, 0, 1)])).unwrap_err();
        assert!(matches!(err, ActionError::BadTranslationOrder { expected: 4, found: 2, .. }));
    }

    #[test]
    fn dependent_translations_are_not_free() {
        let t = BiellipticType::new(2).unwrap();
        let half = TorusPoint::from_fracs(1, 2, 0, 1);
        let err = instantiate_bielliptic(t, Some(&[half, half])).unwrap_err();
        assert!(matches!(err, ActionError::NotFree(_)));
    }

    #[test]
    fn order_mismatch() {
        let gen = GroupElement::new(
            AffineTorusMap::translation(TorusPoint::from_fracs(1, 3, 0, 1), FieldTag::Generic),
            AffineTorusMap::identity(FieldTag::Generic),
        );
        let err = GroupAction::new(FieldTag::Generic, FieldTag::Generic, vec![gen], 2).unwrap_err();
        assert!(matches!(err, ActionError::OrderMismatch { declared: 2, .. }));
        let err = GroupAction::new(FieldTag::Generic, FieldTag::Generic, vec![gen], 4).unwrap_err();
        assert!(matches!(err, ActionError::OrderMismatch { declared: 4, .. }));
    }

    #[test]
    fn type_range() {
        assert!(BiellipticType::new(0).is_err());
        assert!(BiellipticType::new(8).is_err());
    }
}
