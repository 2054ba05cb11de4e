//! JSON form of surface descriptors.
//!
//! ```json
//! {"surface": {"kind": "ruled", "g": 0, "e": 2, "d": 2}}
//! ```
//!
//! Syntax errors are reported as [`DescriptorError::Parse`]; anything that
//! parses but does not describe a valid surface is a
//! [`DescriptorError::Schema`] carrying the path of the offending field.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::classifier::{ClassifyError, SurfaceDescriptor};
use crate::fibration_numerics::FibrationData;
use crate::group_actions::{BaseActionSpec, BiellipticType};
use crate::ruled_numerics::{NumClass, RuledSurfaceData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl DescriptorError {
    pub fn code(&self) -> &'static str {
        match self {
            DescriptorError::Parse(_) => "PARSE_ERROR",
            DescriptorError::Schema { .. } => "SCHEMA_ERROR",
        }
    }

    fn schema(path: &str, message: impl Into<String>) -> Self {
        DescriptorError::Schema { path: path.to_string(), message: message.into() }
    }
}

/// Externally tagged on the Rust side; [`tag_to_kind`] and [`kind_to_tag`]
/// convert to and from the `"kind"` field of the file format. Deserializing
/// an internally tagged enum buffers its content and loses field paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawSurface {
    Abelian {},
    Bielliptic {
        #[serde(rename = "type")]
        bielliptic_type: i64,
    },
    K3 {
        generic: bool,
    },
    Enriques {},
    Ruled {
        g: u32,
        e: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<i64>,
    },
    Product {
        g1: u32,
        g2: u32,
    },
    EllipticFibration {
        #[serde(rename = "g_B")]
        g_b: u32,
        chi: i64,
        #[serde(default)]
        multiplicities: Vec<u32>,
        smooth: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base_action: Option<BaseActionSpec>,
    },
    GeneralType {
        is_product: bool,
    },
    Blowup {
        inner: Box<RawSurface>,
        points: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    surface: RawSurface,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<[i64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    section_class: Option<[i64; 2]>,
}

/// A parsed input file: the surface plus the optional class list used by
/// the cone computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub surface: SurfaceDescriptor,
    pub classes: Vec<NumClass>,
    pub section_class: Option<NumClass>,
}

fn to_descriptor(raw: &RawSurface, path: &str) -> Result<SurfaceDescriptor, DescriptorError> {
    let descriptor = match raw {
        RawSurface::Abelian {} => SurfaceDescriptor::Abelian,
        RawSurface::Bielliptic { bielliptic_type } => SurfaceDescriptor::Bielliptic {
            bielliptic_type: BiellipticType::new(*bielliptic_type)
                .map_err(|e| DescriptorError::schema(&format!("{path}.type"), e.to_string()))?,
        },
        RawSurface::K3 { generic } => SurfaceDescriptor::K3 { generic: *generic },
        RawSurface::Enriques {} => SurfaceDescriptor::Enriques,
        RawSurface::Ruled { g, e, d } => {
            let data = RuledSurfaceData::new(*g, *e).map_err(|err| DescriptorError::schema(&format!("{path}.e"), err.to_string()))?;
            let twist_d = match d {
                None => None,
                Some(d) => Some(
                    u32::try_from(*d)
                        .map_err(|_| DescriptorError::schema(&format!("{path}.d"), format!("twist d = {d} must be >= 0")))?,
                ),
            };
            SurfaceDescriptor::Ruled { data, twist_d }
        }
        RawSurface::Product { g1, g2 } => SurfaceDescriptor::Product { g1: *g1, g2: *g2 },
        RawSurface::EllipticFibration { g_b, chi, multiplicities, smooth, base_action } => {
            let data = FibrationData::minimal_with_multiplicities(*g_b, *chi, multiplicities)
                .map_err(|err| DescriptorError::schema(&format!("{path}.multiplicities"), err.to_string()))?;
            SurfaceDescriptor::EllipticFibration { data, smooth: *smooth, base_action: base_action.clone() }
        }
        RawSurface::GeneralType { is_product } => SurfaceDescriptor::GeneralType { is_product: *is_product },
        RawSurface::Blowup { inner, points } => SurfaceDescriptor::Blowup {
            inner: Box::new(to_descriptor(inner, &format!("{path}.inner"))?),
            points: *points,
        },
    };
    descriptor.validate().map_err(|err| match err {
        ClassifyError::InvalidDescriptor(msg) => DescriptorError::schema(path, msg),
        ClassifyError::ActionInvalid(e) => DescriptorError::schema(&format!("{path}.base_action"), e.to_string()),
        ClassifyError::Internal(msg) => DescriptorError::schema(path, msg),
    })?;
    Ok(descriptor)
}

fn to_raw(s: &SurfaceDescriptor) -> RawSurface {
    match s {
        SurfaceDescriptor::Abelian => RawSurface::Abelian {},
        SurfaceDescriptor::Bielliptic { bielliptic_type } => {
            RawSurface::Bielliptic { bielliptic_type: i64::from(*bielliptic_type) }
        }
        SurfaceDescriptor::K3 { generic } => RawSurface::K3 { generic: *generic },
        SurfaceDescriptor::Enriques => RawSurface::Enriques {},
        SurfaceDescriptor::Ruled { data, twist_d } => {
            RawSurface::Ruled { g: data.g(), e: data.e(), d: twist_d.map(i64::from) }
        }
        SurfaceDescriptor::Product { g1, g2 } => RawSurface::Product { g1: *g1, g2: *g2 },
        SurfaceDescriptor::EllipticFibration { data, smooth, base_action } => RawSurface::EllipticFibration {
            g_b: data.g_b(),
            chi: data.chi(),
            multiplicities: data.multiplicities(),
            smooth: *smooth,
            base_action: base_action.clone(),
        },
        SurfaceDescriptor::GeneralType { is_product } => RawSurface::GeneralType { is_product: *is_product },
        SurfaceDescriptor::Blowup { inner, points } => {
            RawSurface::Blowup { inner: Box::new(to_raw(inner)), points: *points }
        }
    }
}

/// `{"kind": k, ...rest}` becomes `{k: {...rest}}`, recursively through
/// `inner`.
fn kind_to_tag(v: Value, path: &str) -> Result<Value, DescriptorError> {
    let Value::Object(mut map) = v else {
        return Err(DescriptorError::schema(path, "expected a surface object"));
    };
    let kind = match map.remove("kind") {
        Some(Value::String(k)) => k,
        Some(_) => return Err(DescriptorError::schema(&format!("{path}.kind"), "kind must be a string")),
        None => return Err(DescriptorError::schema(path, "missing field `kind`")),
    };
    if let Some(inner) = map.remove("inner") {
        map.insert("inner".into(), kind_to_tag(inner, &format!("{path}.inner"))?);
    }
    let mut wrapped = Map::new();
    wrapped.insert(kind, Value::Object(map));
    Ok(Value::Object(wrapped))
}

fn tag_to_kind(v: Value) -> Value {
    let Value::Object(wrapped) = v else { return v };
    let Some((kind, Value::Object(mut map))) = wrapped.into_iter().next() else {
        unreachable!("surfaces serialize as single-key objects")
    };
    if let Some(inner) = map.remove("inner") {
        map.insert("inner".into(), tag_to_kind(inner));
    }
    let mut out = Map::new();
    out.insert("kind".into(), Value::String(kind));
    out.extend(map);
    Value::Object(out)
}

/// Drops the variant-name segment that follows `surface` and `inner`.
fn file_path(tagged: &str) -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for seg in tagged.split('.') {
        if skip {
            skip = false;
            continue;
        }
        skip = seg == "surface" || seg == "inner";
        out.push(seg);
    }
    out.join(".")
}

pub fn parse_document(bytes: &[u8]) -> Result<InputDocument, DescriptorError> {
    let text = std::str::from_utf8(bytes).map_err(|e| DescriptorError::Parse(format!("input is not UTF-8: {e}")))?;
    let mut value: Value = serde_json::from_str(text).map_err(|e| DescriptorError::Parse(e.to_string()))?;
    let Value::Object(top) = &mut value else {
        return Err(DescriptorError::schema("", "expected a JSON object with key \"surface\""));
    };
    if let Some(surface) = top.remove("surface") {
        top.insert("surface".into(), kind_to_tag(surface, "surface")?);
    }
    let raw: RawDocument = serde_path_to_error::deserialize(value)
        .map_err(|err| DescriptorError::schema(&file_path(&err.path().to_string()), err.into_inner().to_string()))?;
    let surface = to_descriptor(&raw.surface, "surface")?;
    let classes = raw.classes.unwrap_or_default().into_iter().map(|[a, b]| NumClass::new(a, b)).collect();
    let section_class = raw.section_class.map(|[a, b]| NumClass::new(a, b));
    Ok(InputDocument { surface, classes, section_class })
}

pub fn parse_descriptor(bytes: &[u8]) -> Result<SurfaceDescriptor, DescriptorError> {
    parse_document(bytes).map(|doc| doc.surface)
}

/// Canonical JSON form, accepted back by [`parse_descriptor`].
pub fn serialize_descriptor(s: &SurfaceDescriptor) -> String {
    let surface = tag_to_kind(serde_json::to_value(to_raw(s)).expect("descriptor serialization cannot fail"));
    let mut doc = Map::new();
    doc.insert("surface".into(), surface);
    Value::Object(doc).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            parse_descriptor(br#"{"surface":{"kind":"bielliptic","type":3}}"#).unwrap(),
            SurfaceDescriptor::Bielliptic { bielliptic_type: BiellipticType::new(3).unwrap() }
        );
        assert!(matches!(
            parse_descriptor(br#"{"surface":{"kind":"ruled","g":0,"e":2,"d":2}}"#).unwrap(),
            SurfaceDescriptor::Ruled { twist_d: Some(2), .. }
        ));
        match parse_descriptor(br#"{"surface":{"kind":"ruled","g":0,"e":-1}}"#) {
            Err(DescriptorError::Schema { path, .. }) => assert_eq!(path, "surface.e"),
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_descriptor(b"{"), Err(DescriptorError::Parse(_))));
        assert!(matches!(parse_descriptor(b"\xff"), Err(DescriptorError::Parse(_))));
        match parse_descriptor(br#"{"surface":{"kind":"bielliptic","type":9}}"#) {
            Err(DescriptorError::Schema { path, .. }) => assert_eq!(path, "surface.type"),
            other => panic!("{other:?}"),
        }
        match parse_descriptor(br#"{"surface":{"kind":"k3","generic":"yes"}}"#) {
            Err(DescriptorError::Schema { path, .. }) => assert_eq!(path, "surface.generic"),
            other => panic!("{other:?}"),
        }
        match parse_descriptor(br#"{"surface":{"kind":"blowup","points":1,"inner":{"kind":"ruled","g":1,"e":-2}}}"#) {
            Err(DescriptorError::Schema { path, .. }) => assert_eq!(path, "surface.inner.e"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_descriptor(br#"{"surface":{"kind":"torus"}}"#), Err(DescriptorError::Schema { .. })));
        assert!(matches!(parse_descriptor(br#"{}"#), Err(DescriptorError::Schema { .. })));
    }

    #[test]
    fn round_trip() {
        for text in [
            r#"{"surface":{"kind":"abelian"}}"#,
            r#"{"surface":{"kind":"ruled","g":0,"e":2,"d":2}}"#,
            r#"{"surface":{"kind":"elliptic_fibration","g_B":0,"chi":0,"multiplicities":[2,3,7],"smooth":false}}"#,
            r#"{"surface":{"kind":"elliptic_fibration","g_B":2,"chi":0,"multiplicities":[],"smooth":true,"base_action":{"preset":"bielliptic","type":2}}}"#,
            r#"{"surface":{"kind":"blowup","inner":{"kind":"enriques"},"points":3}}"#,
        ] {
            let d = parse_descriptor(text.as_bytes()).unwrap();
            let again = serialize_descriptor(&d);
            assert_eq!(parse_descriptor(again.as_bytes()).unwrap(), d);
            assert_eq!(serialize_descriptor(&parse_descriptor(again.as_bytes()).unwrap()), again);
        }
    }

    #[test]
    fn cone_document() {
        let doc = parse_document(br#"{"surface":{"kind":"ruled","g":1,"e":-1},"classes":[[2,-1],[1,0]],"section_class":[0,1]}"#)
            .unwrap();
        assert_eq!(doc.classes, vec![NumClass::new(2, -1), NumClass::new(1, 0)]);
        assert_eq!(doc.section_class, Some(NumClass::FIBER));
    }
}
