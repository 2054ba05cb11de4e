//! Finite models of the induced law for a classified surface.
//!
//! Each model samples `S` at torsion level `n`, fixes the retraction `π`
//! and the section `σ` of the structure found by the classifier, and checks
//! every applicable base law exhaustively.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_integer::Integer;
use serde::Serialize;

use crate::classifier::{classify, ClassifyError, SurfaceDescriptor, Verdict};
use crate::group_actions::{
    common_fixed_points_on_f, instantiate_bielliptic, BaseActionSpec, GroupAction,
};
use crate::lattice_tori::{apply_map, torsion_points, TorusPoint};
use crate::semigroup_laws::{check_associative, Associativity, BaseLaw, CurveLabel, CurvePoint, InducedLaw, LawError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub model: String,
    pub base_law: BaseLaw,
    pub universe_size: usize,
    pub triples: u64,
    pub status: CheckStatus,
    /// `[a, b, c, (ab)c, a(bc)]` for the first violating triple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<[String; 5]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub torsion_level: u32,
    pub checks: Vec<LawCheck>,
    /// Set when the classification gives no concrete structure to test.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error("torsion level must be in 1..=12, got {0}")]
    BadTorsion(u32),
}

/// Shapes of finite model.
enum Model {
    /// `C × F` with both factors elliptic, `π = pr₁`, `σ(c) = (c, 0)`.
    TorusProduct { base_elliptic: bool },
    /// `C × F` with `C` not elliptic, as label sets.
    Labels,
    /// `(D × E)/G` on orbit representatives, `σ(c) = [(c, P)]`.
    Orbit { action: GroupAction, point: TorusPoint, base_elliptic: bool },
}

fn cyclic(n: i64) -> Vec<TorusPoint> {
    (0..n).map(|k| TorusPoint::from_fracs(k, n, 0, 1)).collect()
}

fn pick_model(s: &SurfaceDescriptor) -> Result<Option<Model>, VerifyError> {
    let model = match s {
        SurfaceDescriptor::Abelian => Model::TorusProduct { base_elliptic: true },
        SurfaceDescriptor::Product { g1, g2 } if *g1 == 1 && *g2 == 1 => Model::TorusProduct { base_elliptic: true },
        SurfaceDescriptor::Product { .. } | SurfaceDescriptor::GeneralType { is_product: true } => Model::Labels,
        SurfaceDescriptor::Ruled { data, .. } if data.g() == 1 => Model::TorusProduct { base_elliptic: true },
        SurfaceDescriptor::Ruled { .. } => Model::Labels,
        SurfaceDescriptor::Bielliptic { bielliptic_type } => {
            orbit_model(instantiate_bielliptic(*bielliptic_type, None).map_err(ClassifyError::from)?, true)?
        }
        SurfaceDescriptor::EllipticFibration { base_action: Some(spec), .. } => match spec {
            BaseActionSpec::Trivial => Model::Labels,
            _ => orbit_model(spec.build().map_err(ClassifyError::from)?, false)?,
        },
        SurfaceDescriptor::Blowup { inner, .. } => return pick_model(inner),
        _ => return Ok(None),
    };
    Ok(Some(model))
}

fn orbit_model(action: GroupAction, base_elliptic: bool) -> Result<Model, VerifyError> {
    let fixed = common_fixed_points_on_f(&action);
    let point = fixed
        .points()
        .and_then(|p| p.iter().next().copied())
        .ok_or_else(|| ClassifyError::Internal("a YES verdict without a common fixed point".into()))?;
    Ok(Model::Orbit { action, point, base_elliptic })
}

fn base_laws(elliptic: bool) -> Vec<BaseLaw> {
    if elliptic {
        vec![BaseLaw::Add, BaseLaw::Left, BaseLaw::Right]
    } else {
        vec![BaseLaw::Left, BaseLaw::Right]
    }
}

fn run_check<S, C>(
    model: &str,
    law: &InducedLaw<S, C>,
    base_sample: &[C],
    universe: &[S],
) -> Result<LawCheck, VerifyError>
where
    S: Clone + Ord + Debug + Send + Sync,
    C: CurvePoint,
{
    law.validate_section(base_sample)?;
    let size = universe.iter().collect::<BTreeSet<_>>().len();
    let (status, triples, counterexample) = match check_associative(law, universe)? {
        Associativity::Holds { triples } => (CheckStatus::Pass, triples, None),
        Associativity::Fails { a, b, c, left, right } => (
            CheckStatus::Fail,
            0,
            Some([a, b, c, left, right].map(|x| format!("{x:?}"))),
        ),
    };
    Ok(LawCheck { model: model.to_string(), base_law: law.base(), universe_size: size, triples, status, counterexample })
}

/// Smallest subgroup of the torus containing `generators`.
fn generated_subgroup(generators: &[TorusPoint]) -> Vec<TorusPoint> {
    let mut seen: BTreeSet<TorusPoint> = BTreeSet::from([TorusPoint::zero()]);
    let mut frontier = vec![TorusPoint::zero()];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x + *g;
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

fn check_model(model: &Model, n: u32) -> Result<Vec<LawCheck>, VerifyError> {
    let n_i = i64::from(n);
    let mut checks = Vec::new();
    match model {
        Model::TorusProduct { base_elliptic } => {
            let c = cyclic(n_i);
            let universe: Vec<(TorusPoint, TorusPoint)> =
                c.iter().flat_map(|a| c.iter().map(move |b| (*a, *b))).collect();
            for base in base_laws(*base_elliptic) {
                let law = InducedLaw::new(
                    |s: &(TorusPoint, TorusPoint)| s.0,
                    |c: &TorusPoint| (*c, TorusPoint::zero()),
                    base,
                );
                checks.push(run_check("C × F, π = pr₁, σ(c) = (c, 0)", &law, &c, &universe)?);
            }
        }
        Model::Labels => {
            let labels: Vec<CurveLabel> = (0..n).map(CurveLabel).collect();
            let universe: Vec<(CurveLabel, u32)> =
                labels.iter().flat_map(|c| (0..n).map(move |t| (*c, t))).collect();
            for base in base_laws(false) {
                let law = InducedLaw::new(|s: &(CurveLabel, u32)| s.0, |c: &CurveLabel| (*c, 0), base);
                checks.push(run_check("C × F sampled, π = pr₁, σ(c) = (c, 0)", &law, &labels, &universe)?);
            }
        }
        Model::Orbit { action, point, base_elliptic } => {
            let elements = action.elements().to_vec();
            let shifts: Vec<TorusPoint> = elements.iter().map(|g| g.on_e.shift).collect();
            let mut e_gens = shifts.clone();
            e_gens.push(TorusPoint::from_fracs(1, n_i, 0, 1));
            let e_sample = generated_subgroup(&e_gens);
            let level = elements
                .iter()
                .map(|g| g.on_f.shift.order())
                .fold(point.order(), |acc, o| acc.lcm(&o));
            let f_sample = torsion_points(u32::try_from(level).expect("small torsion level"));

            let canon_e = {
                let shifts = shifts.clone();
                move |x: &TorusPoint| shifts.iter().map(|t| *x + *t).min().expect("identity present")
            };
            let canon = {
                let elements = elements.clone();
                move |s: &(TorusPoint, TorusPoint)| {
                    elements
                        .iter()
                        .map(|g| {
                            let e = apply_map(&g.on_e, &s.0).expect("validated map");
                            let f = apply_map(&g.on_f, &s.1).expect("validated map");
                            (e, f)
                        })
                        .min()
                        .expect("identity present")
                }
            };
            let base_sample: Vec<TorusPoint> =
                e_sample.iter().map(&canon_e).collect::<BTreeSet<_>>().into_iter().collect();
            let universe: Vec<(TorusPoint, TorusPoint)> = e_sample
                .iter()
                .flat_map(|e| f_sample.iter().map(move |f| (*e, *f)))
                .map(|s| canon(&s))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let p = *point;
            for base in base_laws(*base_elliptic) {
                let (ce, cn) = (canon_e.clone(), canon.clone());
                // σ canonicalises, so adding representatives is addition in E/G
                let law = InducedLaw::new(move |s: &(TorusPoint, TorusPoint)| ce(&s.0), move |c: &TorusPoint| cn(&(*c, p)), base);
                checks.push(run_check(
                    &format!("(E × F)/G orbits, π: S → E/G, σ(c) = [(c, {p})]"),
                    &law,
                    &base_sample,
                    &universe,
                )?);
            }
        }
    }
    Ok(checks)
}

/// Builds the finite models for the structure found by the classifier and
/// checks associativity at torsion level `n`.
pub fn verify_descriptor(s: &SurfaceDescriptor, n: u32) -> Result<VerifyReport, VerifyError> {
    if !(1..=12).contains(&n) {
        return Err(VerifyError::BadTorsion(n));
    }
    let report = classify(s)?;
    let skip = |why: String| Ok(VerifyReport { torsion_level: n, checks: Vec::new(), skipped: Some(why) });
    if report.verdict != Verdict::Yes {
        return skip(format!("verdict is {}; no concrete law to verify", report.verdict));
    }
    match pick_model(s)? {
        Some(model) => Ok(VerifyReport { torsion_level: n, checks: check_model(&model, n)?, skipped: None }),
        None => skip("no finite model for this surface class".into()),
    }
}
