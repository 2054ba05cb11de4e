//! Decision procedure for non-trivial semigroup structures on a surface.
//!
//! A non-trivial structure is a fibration `π: S → C` with a section `σ`,
//! the law being `μ(s₁, s₂) = σ(μ̃(π(s₁), π(s₂)))`. The dispatch below goes
//! by the surface class (hence by Kodaira dimension) and records the result
//! it relies on for every step.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fibration_numerics::{
    delta_invariant, enriques_obstruction, kodaira_dim_is_one, section_normal_degree, EnriquesVerdict,
    FibrationData, SectionCase,
};
use crate::group_actions::{
    acts_by_translations_on_factor, admits_equivariant_constant, common_fixed_points_on_f, instantiate_bielliptic,
    ActionError, BaseActionSpec, BiellipticType, Factor, GroupAction,
};
use crate::lattice_tori::fixed_points;
use crate::rational::format_rational;
use crate::ruled_numerics::{ext1_dim, h0_p1, hirzebruch_section_finiteness, RuledSurfaceData};

/// Bielliptic types admitting a section, as listed in the literature. Only
/// used to cross-check the fixed-point computation.
pub const BIELLIPTIC_WITH_SECTION: [u8; 4] = [1, 3, 5, 7];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid group action: {0}")]
    ActionInvalid(#[from] ActionError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceDescriptor {
    Abelian,
    Bielliptic { bielliptic_type: BiellipticType },
    K3 { generic: bool },
    Enriques,
    Ruled { data: RuledSurfaceData, twist_d: Option<u32> },
    Product { g1: u32, g2: u32 },
    EllipticFibration { data: FibrationData, smooth: bool, base_action: Option<BaseActionSpec> },
    GeneralType { is_product: bool },
    Blowup { inner: Box<SurfaceDescriptor>, points: u32 },
}

impl SurfaceDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            SurfaceDescriptor::Abelian => "abelian",
            SurfaceDescriptor::Bielliptic { .. } => "bielliptic",
            SurfaceDescriptor::K3 { .. } => "k3",
            SurfaceDescriptor::Enriques => "enriques",
            SurfaceDescriptor::Ruled { .. } => "ruled",
            SurfaceDescriptor::Product { .. } => "product",
            SurfaceDescriptor::EllipticFibration { .. } => "elliptic_fibration",
            SurfaceDescriptor::GeneralType { .. } => "general_type",
            SurfaceDescriptor::Blowup { .. } => "blowup",
        }
    }

    /// Checks the constraints that the types themselves cannot express.
    pub fn validate(&self) -> Result<(), ClassifyError> {
        let invalid = |msg: String| Err(ClassifyError::InvalidDescriptor(msg));
        match self {
            SurfaceDescriptor::Ruled { data, twist_d } => match (data.g(), twist_d) {
                (0, Some(d)) if i64::from(*d) != data.e() => {
                    invalid(format!("rational ruled surface with e = {} has twist d = e, got d = {d}", data.e()))
                }
                (g, Some(_)) if g > 0 => invalid("twist d only applies over a rational base".into()),
                _ => Ok(()),
            },
            SurfaceDescriptor::EllipticFibration { data, smooth, base_action } => {
                if data.chi() < 0 {
                    return invalid(format!("chi(O_S) = {} is negative for an elliptic surface", data.chi()));
                }
                let ms = data.multiplicities();
                if *smooth && (!ms.is_empty() || data.chi() != 0) {
                    return invalid("a smooth elliptic fibration has chi(O_S) = 0 and no multiple fibres".into());
                }
                if !*smooth && data.chi() == 0 && ms.is_empty() {
                    return invalid("chi(O_S) = 0 with no multiple fibres describes a smooth fibration".into());
                }
                if !kodaira_dim_is_one(data) {
                    return invalid(format!(
                        "delta = {} <= 0, so the surface does not have Kodaira dimension one",
                        delta_invariant(data)
                    ));
                }
                if let Some(spec) = base_action {
                    if !*smooth {
                        return invalid("a (D x E)/G presentation describes a smooth fibration".into());
                    }
                    spec.build()?;
                }
                Ok(())
            }
            SurfaceDescriptor::Blowup { inner, points } => {
                if *points == 0 {
                    return invalid("a blow-up needs at least one point".into());
                }
                inner.validate()
            }
            _ => Ok(()),
        }
    }
}

/// Results a reason can rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremTag {
    M1,
    M2,
    M3,
    M4,
    M5,
    T2_9,
    T3_10,
    T3_11,
    T3_14,
    T4_8,
    T5_2,
    T6_1,
    P1,
    P2,
}

impl TheoremTag {
    pub fn label(&self) -> &'static str {
        match self {
            TheoremTag::M1 => "Theorem M1",
            TheoremTag::M2 => "Theorem 3.3 (M2)",
            TheoremTag::M3 => "Theorem 3.4 (M3)",
            TheoremTag::M4 => "Theorem M4",
            TheoremTag::M5 => "Theorem 4.2 (M5)",
            TheoremTag::T2_9 => "Theorem 2.9",
            TheoremTag::T3_10 => "Theorem 3.10",
            TheoremTag::T3_11 => "Theorem 3.11",
            TheoremTag::T3_14 => "Theorem 3.14",
            TheoremTag::T4_8 => "Theorem 4.8",
            TheoremTag::T5_2 => "Theorem 5.2",
            TheoremTag::T6_1 => "Theorem 6.1",
            TheoremTag::P1 => "Proposition 1.4 (P1)",
            TheoremTag::P2 => "Proposition 1.5 (P2)",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Conditional(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => f.write_str("YES"),
            Verdict::No => f.write_str("NO"),
            Verdict::Conditional(text) => write!(f, "CONDITIONAL: {text}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModuliKind {
    IsolatedReducedPoints,
    EllipticQuotient,
    AbelianFactor,
    FiniteSet,
    Empty,
    Unknown,
}

impl fmt::Display for ModuliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModuliKind::IsolatedReducedPoints => "ISOLATED_REDUCED_POINTS",
            ModuliKind::EllipticQuotient => "ELLIPTIC_QUOTIENT",
            ModuliKind::AbelianFactor => "ABELIAN_FACTOR",
            ModuliKind::FiniteSet => "FINITE_SET",
            ModuliKind::Empty => "EMPTY",
            ModuliKind::Unknown => "UNKNOWN",
        };
        f.write_str(s)
    }
}

/// The scheme of sections `Mor_π(C, S)`; a connected component of the
/// space of laws is `Mor_π(C, S) × A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliDescription {
    pub kind: ModuliKind,
    pub description: String,
    pub sl_component: String,
}

impl ModuliDescription {
    fn new(kind: ModuliKind, description: impl Into<String>, sl_component: impl Into<String>) -> Self {
        ModuliDescription { kind, description: description.into(), sl_component: sl_component.into() }
    }

    fn empty() -> Self {
        Self::new(ModuliKind::Empty, "no retraction with a section exists", "none")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub tag: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub structure: String,
    pub reasons: Vec<(TheoremTag, String)>,
    pub moduli: ModuliDescription,
    /// Genus of the base curve `C` when the structure pins it down.
    pub base_genus: Option<u32>,
}

impl ClassificationReport {
    pub fn reason_records(&self) -> Vec<Reason> {
        self.reasons.iter().map(|(tag, text)| Reason { tag: tag.label().to_string(), text: text.clone() }).collect()
    }

    pub fn cites(&self, tag: TheoremTag) -> bool {
        self.reasons.iter().any(|(t, _)| *t == tag)
    }
}

pub fn classify(s: &SurfaceDescriptor) -> Result<ClassificationReport, ClassifyError> {
    s.validate()?;
    let report = match s {
        SurfaceDescriptor::Abelian => classify_abelian("C × E"),
        SurfaceDescriptor::Bielliptic { bielliptic_type } => classify_bielliptic(*bielliptic_type)?,
        SurfaceDescriptor::K3 { generic } => classify_k3(*generic),
        SurfaceDescriptor::Enriques => classify_enriques()?,
        SurfaceDescriptor::Ruled { data, .. } => classify_ruled(data)?,
        SurfaceDescriptor::Product { g1, g2 } => classify_product(*g1, *g2)?,
        SurfaceDescriptor::EllipticFibration { data, smooth, base_action } => {
            classify_elliptic(data, *smooth, base_action.as_ref())?
        }
        SurfaceDescriptor::GeneralType { is_product } => classify_general_type(*is_product),
        SurfaceDescriptor::Blowup { inner, points } => blowup_transfer(&classify(inner)?, *points),
    };
    check_report(&report)?;
    Ok(report)
}

fn check_report(r: &ClassificationReport) -> Result<(), ClassifyError> {
    if r.reasons.is_empty() {
        return Err(ClassifyError::Internal("empty reason chain".into()));
    }
    if (r.moduli.kind == ModuliKind::Empty) != (r.verdict == Verdict::No) {
        return Err(ClassifyError::Internal(format!("moduli {} inconsistent with verdict {}", r.moduli.kind, r.verdict)));
    }
    Ok(())
}

fn classify_abelian(shape: &str) -> ClassificationReport {
    ClassificationReport {
        verdict: Verdict::Yes,
        structure: format!("S ≅ {shape} with C, E elliptic; π = pr₁, σ(x) = (x, y₀) for y₀ ∈ E"),
        reasons: vec![
            (TheoremTag::M3, "a retraction with a section on an abelian surface splits it as C × E, π = pr₁".into()),
            (TheoremTag::T3_11, "sections of π are the translates of σ(C): Mor_π(E, S) = S/E = ker(π)".into()),
        ],
        moduli: ModuliDescription::new(
            ModuliKind::AbelianFactor,
            "Mor_π(C, S) ≅ ker(π) = E, an elliptic curve",
            "Mor_π(C, S) × A = E × A",
        ),
        base_genus: Some(1),
    }
}

fn classify_bielliptic(t: BiellipticType) -> Result<ClassificationReport, ClassifyError> {
    let action = instantiate_bielliptic(t, None)?;
    let has_section = admits_equivariant_constant(&action)?;
    if has_section != BIELLIPTIC_WITH_SECTION.contains(&t.index()) {
        return Err(ClassifyError::Internal(format!("fixed-point verdict for bielliptic {t} disagrees with the known list")));
    }
    let maps: Vec<String> = t.f_generators().iter().map(ToString::to_string).collect();
    let group = format!("G = {} acting on F by {}", t.group_label(), maps.join(", "));
    let fixed = common_fixed_points_on_f(&action);
    if has_section {
        let points: Vec<String> = fixed.points().map(|p| p.iter().map(ToString::to_string).collect()).unwrap_or_default();
        Ok(ClassificationReport {
            verdict: Verdict::Yes,
            structure: "S ≅ (E × F)/G, π: S → E/G, σ(x) = (x, P) for a G-fixed point P ∈ F".into(),
            reasons: vec![
                (
                    TheoremTag::M2,
                    format!(
                        "bielliptic {t}: {group}; common fixed points on F: {}, so constant equivariant maps E → F give sections",
                        points.join(", ")
                    ),
                ),
                (TheoremTag::T3_10, "sections of a bielliptic retraction are rigid: Mor_π(C, S) is reduced isolated points".into()),
            ],
            moduli: ModuliDescription::new(
                ModuliKind::IsolatedReducedPoints,
                format!("reduced isolated points; {} G-fixed point(s) P ∈ F give sections x ↦ (x, P)", points.len()),
                "Mor_π(E/G, S) × A with A = 0",
            ),
            base_genus: Some(1),
        })
    } else {
        Ok(ClassificationReport {
            verdict: Verdict::No,
            structure: "none".into(),
            reasons: vec![(
                TheoremTag::M2,
                format!(
                    "bielliptic {t}: {group}; the action on F has no fixed point, and an equivariant map E → F must be constant, so π has no section"
                ),
            )],
            moduli: ModuliDescription::empty(),
            base_genus: None,
        })
    }
}

fn classify_k3(generic: bool) -> ClassificationReport {
    if generic {
        return ClassificationReport {
            verdict: Verdict::No,
            structure: "none".into(),
            reasons: vec![(TheoremTag::M4, "a general K3 surface has no fibration with a section".into())],
            moduli: ModuliDescription::empty(),
            base_genus: None,
        };
    }
    let degree = section_normal_degree(
        &FibrationData::new(0, 2, Vec::new(), 0, true).expect("K3 numerical data"),
        SectionCase::K3Section,
    );
    ClassificationReport {
        verdict: Verdict::Conditional("S carries an elliptic fibration π: S → ℙ¹ with a section".into()),
        structure: "π: S → ℙ¹ elliptic, σ(ℙ¹) a smooth rational curve".into(),
        reasons: vec![
            (TheoremTag::M4, "only a general K3 surface is excluded; existence depends on the Picard lattice".into()),
            (
                TheoremTag::T3_14,
                format!(
                    "K_S = 0 gives N(σ(ℙ¹)) = O({degree}), h⁰ = {}, so every section is rigid",
                    h0_p1(degree)
                ),
            ),
        ],
        moduli: ModuliDescription::new(
            ModuliKind::IsolatedReducedPoints,
            "reduced isolated points (normal bundle O(-2))",
            "Mor_π(ℙ¹, S) × A with A = 0",
        ),
        base_genus: Some(0),
    }
}

fn classify_enriques() -> Result<ClassificationReport, ClassifyError> {
    match enriques_obstruction(&[2, 2], true) {
        EnriquesVerdict::NoSection => Ok(ClassificationReport {
            verdict: Verdict::No,
            structure: "none".into(),
            reasons: vec![(
                TheoremTag::M4,
                "π must be an elliptic fibration over ℙ¹ with double fibres 2F, 2F′; a section gives σ·F₀ = σ·2F ≥ 2, contradicting σ·F₀ = 1".into(),
            )],
            moduli: ModuliDescription::empty(),
            base_genus: None,
        }),
        EnriquesVerdict::Invalid(msg) => Err(ClassifyError::Internal(msg)),
    }
}

fn classify_ruled(data: &RuledSurfaceData) -> Result<ClassificationReport, ClassifyError> {
    let (g, e) = (data.g(), data.e());
    if g >= 1 {
        return Ok(ClassificationReport {
            verdict: Verdict::Yes,
            structure: format!("S = ℙ(ℰ) over a genus-{g} curve X, π = ruling S → X, σ a section of the ruling"),
            reasons: vec![(
                TheoremTag::M1,
                format!("g(C) ≥ 1 forces π to be the ruling morphism; the ruling of S (e = {e}) has sections"),
            )],
            moduli: ModuliDescription::new(
                ModuliKind::Unknown,
                "sections of the ruling; not determined by (g, e)",
                "Mor_π(X, S) × A with A = 0",
            ),
            base_genus: Some(g),
        });
    }
    let d = e;
    let structure = format!("S ≅ ℙ(O ⊕ O(-{d})), π = ruling S → ℙ¹");
    if d == 1 {
        return Ok(ClassificationReport {
            verdict: Verdict::Yes,
            structure,
            reasons: vec![(
                TheoremTag::M1,
                "the non-minimal 𝔽₁ has sections of its ruling, e.g. the one from O ⊕ O(-1) → O, and μ(x₁, x₂) = σ(π(x₁))".into(),
            )],
            moduli: ModuliDescription::new(
                ModuliKind::Unknown,
                "finiteness of sections is only established for d ≠ 1",
                "Mor_π(ℙ¹, S) × A with A = 0",
            ),
            base_genus: Some(0),
        });
    }
    let finiteness = hirzebruch_section_finiteness(d).map_err(|err| ClassifyError::Internal(err.to_string()))?;
    let cases: Vec<&str> = finiteness.cases.iter().map(|c| c.description()).collect();
    Ok(ClassificationReport {
        verdict: Verdict::Yes,
        structure,
        reasons: vec![
            (TheoremTag::M1, format!("g(C) = 0 with rational fibres: S ≅ ℙ(O ⊕ O(-d)) with d = {d} ≠ 1, π the ruling")),
            (
                TheoremTag::T2_9,
                format!(
                    "Ext¹(O(-d₂), O(d₁)) = 0 for d₁ ≥ 0, d₂ > 0 (e.g. dim = {}); {}; laws are finite modulo Aut(S)",
                    ext1_dim(0, 1),
                    cases.join(", ")
                ),
            ),
        ],
        moduli: ModuliDescription::new(
            ModuliKind::FiniteSet,
            format!("finitely many sections modulo Aut(S) ({})", finiteness.verdict()),
            "Mor_π(ℙ¹, S) × A with A = 0",
        ),
        base_genus: Some(0),
    })
}

fn classify_product(g1: u32, g2: u32) -> Result<ClassificationReport, ClassifyError> {
    let (lo, hi) = (g1.min(g2), g1.max(g2));
    let product = format!("C₁ × C₂ with g(C₁) = {g1}, g(C₂) = {g2}");
    match (lo, hi) {
        (0, 0) => {
            let data = RuledSurfaceData::new(0, 0).expect("e = 0 satisfies the bound");
            let mut r = classify_ruled(&data)?;
            r.structure = "S ≅ ℙ¹ × ℙ¹ = ℙ(O ⊕ O), π = pr₁".into();
            Ok(r)
        }
        (0, _) => Ok(ClassificationReport {
            verdict: Verdict::Yes,
            structure: format!("S ≅ ℙ¹ × X with g(X) = {hi}, π = pr₁ to ℙ¹, σ(t) = (t, x₀)"),
            reasons: vec![(
                TheoremTag::M1,
                "g(C) = 0 with non-rational fibres forces S ≅ ℙ¹ × X and π = pr₁; the ruling pr₂ also works since g(X) ≥ 1".into(),
            )],
            moduli: ModuliDescription::new(
                ModuliKind::Unknown,
                "sections of pr₁ are t ↦ (t, x₀), parametrised by X",
                "Mor_π(ℙ¹, S) × A with A = 0",
            ),
            base_genus: Some(0),
        }),
        (1, 1) => Ok(classify_abelian(&product)),
        (1, _) => Ok(ClassificationReport {
            verdict: Verdict::Yes,
            structure: format!("S ≅ B × C with g(B) = {hi}, C elliptic; φ = pr₁ elliptic, π = pr₂, σ(c) = (b₀, c)"),
            reasons: vec![(
                TheoremTag::M5,
                "for κ = 1, g(C) ≥ 1 and π ≠ φ force S ≅ B × C with π the second projection".into(),
            )],
            moduli: ModuliDescription::new(
                ModuliKind::Unknown,
                "sections of pr₂ are c ↦ (b₀, c), parametrised by B",
                "Mor_π(C, S) × A",
            ),
            base_genus: Some(1),
        }),
        _ => Ok(ClassificationReport {
            verdict: Verdict::Yes,
            structure: format!("S ≅ {product}, π = pr₁, σ(x) = (x, y₀)"),
            reasons: vec![(
                TheoremTag::T5_2,
                "S is a product, so the finiteness of sections does not apply; constant sections form a copy of C₂".into(),
            )],
            moduli: ModuliDescription::new(
                ModuliKind::Unknown,
                "constant sections parametrised by C₂ together with finitely many non-constant ones",
                "Mor_π(C₁, S) × A with A = 0",
            ),
            base_genus: Some(g1),
        }),
    }
}

fn classify_general_type(is_product: bool) -> ClassificationReport {
    if is_product {
        return ClassificationReport {
            verdict: Verdict::Yes,
            structure: "S ≅ C × C′, π = pr₁, σ(x) = (x, y₀)".into(),
            reasons: vec![(
                TheoremTag::T5_2,
                "S is a product, so projections with constant sections exist and finiteness is not claimed".into(),
            )],
            moduli: ModuliDescription::new(ModuliKind::Unknown, "contains a copy of C′ (constant sections)", "Mor_π(C, S) × A with A = 0"),
            base_genus: None,
        };
    }
    ClassificationReport {
        verdict: Verdict::Conditional("some fibration π: S → C has a section".into()),
        structure: "π: S → C a fibration with fibres of genus ≥ 2, σ one of its sections".into(),
        reasons: vec![(
            TheoremTag::T5_2,
            "S is not a product, so every fibration has only finitely many sections (rational points of the generic fibre)".into(),
        )],
        moduli: ModuliDescription::new(ModuliKind::FiniteSet, "finitely many sections", "Mor_π(C, S) × A with A = 0"),
        base_genus: None,
    }
}

fn classify_elliptic(
    data: &FibrationData,
    smooth: bool,
    base_action: Option<&BaseActionSpec>,
) -> Result<ClassificationReport, ClassifyError> {
    let delta = delta_invariant(data);
    let kappa = format!("δ(φ) = {} > 0, so κ(S) = 1", format_rational(&delta));
    if !smooth {
        let degree = section_normal_degree(data, SectionCase::SectionOfPi);
        let normal = if degree < 0 {
            format!("deg N(σ(C)) = -χ(O_S) = {degree} < 0, so h⁰(N) = 0")
        } else {
            format!("π has multiple fibres {:?}, so it is not smooth and σ(C)² < 0 forces h⁰(N) = 0", data.multiplicities())
        };
        return Ok(ClassificationReport {
            verdict: Verdict::Conditional("the non-smooth fibration π has a section".into()),
            structure: "π: S → C elliptic, not smooth; σ a section".into(),
            reasons: vec![
                (TheoremTag::T4_8, format!("{kappa}; π is not a smooth elliptic fibration: {normal}")),
                (TheoremTag::M5, "if g(C) ≥ 1 and π ≠ φ, S would be a product B × C with π smooth, so here g(C) = 0 or π = φ".into()),
            ],
            moduli: ModuliDescription::new(
                ModuliKind::IsolatedReducedPoints,
                "reduced isolated points",
                "Mor_π(C, S) × A with A = 0",
            ),
            base_genus: None,
        });
    }
    let Some(spec) = base_action else {
        return Ok(ClassificationReport {
            verdict: Verdict::Conditional("π ≠ φ, or a (D × E)/G presentation of π is supplied".into()),
            structure: "S ≅ B × C, φ = pr₁, π = pr₂ when g(C) ≥ 1 and π ≠ φ".into(),
            reasons: vec![
                (TheoremTag::M5, format!("{kappa}; g(C) ≥ 1 and π ≠ φ force S ≅ B × C with π the second projection")),
                (
                    TheoremTag::T6_1,
                    "when π = φ the structure is a cubic over k(B); the sections follow from a (D × E)/G presentation".into(),
                ),
            ],
            moduli: ModuliDescription::new(ModuliKind::Unknown, "depends on the presentation of π", "Mor_π(C, S) × A"),
            base_genus: None,
        });
    };
    let action = spec.build()?;
    let moduli = moduli_of_action(&action)?;
    let fixed = common_fixed_points_on_f(&action);
    let (verdict, structure) = if action.is_trivial() {
        (Verdict::Yes, "S ≅ D × E, π = pr₁, σ(x) = (x, e₀)".to_string())
    } else if !acts_by_translations_on_factor(&action, Factor::F) && !fixed.is_empty() {
        (Verdict::Yes, "S ≅ (D × E)/G, π: S → D/G, σ(x) = (x, P) for a G-fixed point P ∈ E".to_string())
    } else {
        (
            Verdict::Conditional("a non-constant G-equivariant map D → E exists".into()),
            "S ≅ (D × E)/G, π: S → D/G".to_string(),
        )
    };
    Ok(ClassificationReport {
        verdict,
        structure,
        reasons: vec![(TheoremTag::T6_1, format!("{kappa}; π is smooth with {}", moduli.description))],
        moduli,
        base_genus: Some(data.g_b()),
    })
}

fn moduli_of_action(action: &GroupAction) -> Result<ModuliDescription, ClassifyError> {
    if acts_by_translations_on_factor(action, Factor::F) {
        let description = if action.is_trivial() {
            "Mor_π(D, S) ≅ E (trivial G)".to_string()
        } else {
            format!("Mor_π(D/G, S) ≅ E/G, G of order {} translating E", action.order())
        };
        return Ok(ModuliDescription::new(ModuliKind::EllipticQuotient, description, "Mor_π(D/G, S) × A"));
    }
    let witness = action
        .non_identity()
        .find_map(|g| {
            let fp = fixed_points(&g.on_f).ok()?;
            (!fp.is_empty()).then(|| g.on_f.to_string())
        })
        .ok_or_else(|| ClassifyError::Internal("a non-translation on the fibre without fixed points".into()))?;
    Ok(ModuliDescription::new(
        ModuliKind::IsolatedReducedPoints,
        format!("reduced isolated points: {witness} has fixed points on E"),
        "Mor_π(D/G, S) × A with A = 0",
    ))
}

/// Sections of a smooth elliptic fibration `(D × E)/G → D/G`.
pub fn moduli_of_sections(s: &SurfaceDescriptor) -> Result<ModuliDescription, ClassifyError> {
    match s {
        SurfaceDescriptor::EllipticFibration { base_action: Some(spec), smooth: true, .. } => {
            moduli_of_action(&spec.build()?)
        }
        SurfaceDescriptor::Bielliptic { bielliptic_type } => {
            moduli_of_action(&instantiate_bielliptic(*bielliptic_type, None)?)
        }
        SurfaceDescriptor::Abelian => moduli_of_action(&BaseActionSpec::Trivial.build()?),
        other => Err(ClassifyError::InvalidDescriptor(format!(
            "{} surfaces carry no (D x E)/G presentation",
            other.kind()
        ))),
    }
}

/// Moduli for a presentation given directly as a group action.
pub fn moduli_of_group_action(action: &GroupAction) -> Result<ModuliDescription, ClassifyError> {
    moduli_of_action(action)
}

/// Structure on the blow-up of a surface at `points` points.
pub fn blowup_transfer(inner: &ClassificationReport, points: u32) -> ClassificationReport {
    let mut reasons = inner.reasons.clone();
    let structure = match inner.verdict {
        Verdict::No => "none".to_string(),
        _ => format!(
            "{} ; blown up at {points} point(s): π′ = π ∘ φ, σ′ = (φ|C′)⁻¹ ∘ σ with C′ the strict transform of σ(C)",
            inner.structure
        ),
    };
    match inner.verdict {
        Verdict::No => reasons.push((
            TheoremTag::P1,
            "the blow-up is birational to S, and no structure on S exists to lift".into(),
        )),
        _ => reasons.push((
            TheoremTag::P1,
            "every non-trivial structure lifts uniquely to the blow-up so that φ is a homomorphism".into(),
        )),
    }
    match inner.base_genus {
        Some(g) if g >= 1 => reasons.push((
            TheoremTag::P2,
            format!("g(C) = {g} ≥ 1: contracting an exceptional curve inside a fibre of π preserves the structure"),
        )),
        Some(_) => reasons.push((
            TheoremTag::P2,
            "g(C) = 0: transfer along blow-downs is not established, this case needs further study".into(),
        )),
        None => {}
    }
    ClassificationReport {
        verdict: inner.verdict.clone(),
        structure,
        reasons,
        moduli: inner.moduli.clone(),
        base_genus: inner.base_genus,
    }
}

/// One line per reason, each starting with its theorem tag.
pub fn explain(report: &ClassificationReport) -> String {
    let mut out = format!("verdict: {}\nstructure: {}\n", report.verdict, report.structure);
    for (tag, text) in &report.reasons {
        out.push_str(&format!("[{tag}] {text}\n"));
    }
    out.push_str(&format!("moduli: {} ({}); component {}\n", report.moduli.kind, report.moduli.description, report.moduli.sl_component));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bielliptic(t: i64) -> SurfaceDescriptor {
        SurfaceDescriptor::Bielliptic { bielliptic_type: BiellipticType::new(t).unwrap() }
    }

    #[test]
    fn bielliptic_table() {
        for t in 1..=7 {
            let r = classify(&bielliptic(t)).unwrap();
            let expected = [1, 3, 5, 7].contains(&t);
            assert_eq!(r.verdict == Verdict::Yes, expected, "type {t}");
            assert!(r.cites(TheoremTag::M2));
        }
        assert_eq!(classify(&bielliptic(4)).unwrap().verdict, Verdict::No);
        let text = explain(&classify(&bielliptic(2)).unwrap());
        assert!(text.contains("Theorem 3.3"));
        assert!(text.contains("no fixed point"));
    }

    #[test]
    fn abelian_and_obstructions() {
        let r = classify(&SurfaceDescriptor::Abelian).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.moduli.kind, ModuliKind::AbelianFactor);
        assert!(explain(&r).contains("Theorem 3.4"));
        for s in [SurfaceDescriptor::Enriques, SurfaceDescriptor::K3 { generic: true }] {
            let r = classify(&s).unwrap();
            assert_eq!(r.verdict, Verdict::No);
            assert_eq!(r.moduli.kind, ModuliKind::Empty);
            assert!(r.cites(TheoremTag::M4));
        }
        let k3 = classify(&SurfaceDescriptor::K3 { generic: false }).unwrap();
        assert!(matches!(k3.verdict, Verdict::Conditional(_)));
        assert_eq!(k3.moduli.kind, ModuliKind::IsolatedReducedPoints);
    }

    #[test]
    fn general_type() {
        let r = classify(&SurfaceDescriptor::GeneralType { is_product: false }).unwrap();
        assert_eq!(r.moduli.kind, ModuliKind::FiniteSet);
        assert!(explain(&r).contains("Theorem 5.2"));
    }

    #[test]
    fn ruled() {
        let hirz = |d: i64| SurfaceDescriptor::Ruled { data: RuledSurfaceData::new(0, d).unwrap(), twist_d: Some(d as u32) };
        let r = classify(&hirz(2)).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        assert_eq!(r.moduli.kind, ModuliKind::FiniteSet);
        assert!(r.cites(TheoremTag::T2_9));
        let f1 = classify(&hirz(1)).unwrap();
        assert_eq!(f1.verdict, Verdict::Yes);
        assert_eq!(f1.moduli.kind, ModuliKind::Unknown);
        let bad = SurfaceDescriptor::Ruled { data: RuledSurfaceData::new(0, 2).unwrap(), twist_d: Some(3) };
        assert!(matches!(classify(&bad), Err(ClassifyError::InvalidDescriptor(_))));
        let over_elliptic = SurfaceDescriptor::Ruled { data: RuledSurfaceData::new(1, -1).unwrap(), twist_d: None };
        assert!(classify(&over_elliptic).unwrap().cites(TheoremTag::M1));
    }

    #[test]
    fn moduli_dichotomy() {
        let trivial = SurfaceDescriptor::EllipticFibration {
            data: FibrationData::minimal_with_multiplicities(2, 0, &[]).unwrap(),
            smooth: true,
            base_action: Some(BaseActionSpec::Trivial),
        };
        assert_eq!(moduli_of_sections(&trivial).unwrap().kind, ModuliKind::EllipticQuotient);
        assert_eq!(classify(&trivial).unwrap().verdict, Verdict::Yes);
        for t in 1..=7 {
            assert_eq!(moduli_of_sections(&bielliptic(t)).unwrap().kind, ModuliKind::IsolatedReducedPoints);
        }
    }

    #[test]
    fn elliptic_validation() {
        let kappa_zero = SurfaceDescriptor::EllipticFibration {
            data: FibrationData::minimal_with_multiplicities(1, 0, &[]).unwrap(),
            smooth: true,
            base_action: None,
        };
        assert!(matches!(classify(&kappa_zero), Err(ClassifyError::InvalidDescriptor(_))));
        let nonsmooth = SurfaceDescriptor::EllipticFibration {
            data: FibrationData::minimal_with_multiplicities(0, 3, &[]).unwrap(),
            smooth: false,
            base_action: None,
        };
        let r = classify(&nonsmooth).unwrap();
        assert_eq!(r.moduli.kind, ModuliKind::IsolatedReducedPoints);
        assert!(r.cites(TheoremTag::T4_8));
    }

    #[test]
    fn blowups() {
        let abelian = classify(&SurfaceDescriptor::Abelian).unwrap();
        let lifted = classify(&SurfaceDescriptor::Blowup { inner: Box::new(SurfaceDescriptor::Abelian), points: 2 }).unwrap();
        assert_eq!(lifted.verdict, abelian.verdict);
        assert!(lifted.cites(TheoremTag::P1) && lifted.cites(TheoremTag::P2));
        let none = classify(&SurfaceDescriptor::Blowup { inner: Box::new(SurfaceDescriptor::Enriques), points: 1 }).unwrap();
        assert_eq!(none.verdict, Verdict::No);
        let zero = SurfaceDescriptor::Blowup { inner: Box::new(SurfaceDescriptor::Abelian), points: 0 };
        assert!(classify(&zero).is_err());
    }
}
