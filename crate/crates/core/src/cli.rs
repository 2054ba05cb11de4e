//! Command-line front end, independent of argument parsing so that it can be
//! driven from tests and the C ABI.
//!
//! Exit codes: 0 success, 1 invalid input, 2 internal invariant violation.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use crate::classifier::{classify, moduli_of_sections, ClassificationReport, ClassifyError, ModuliDescription, Reason, SurfaceDescriptor, Verdict};
use crate::rational::format_rational;
use crate::ruled_numerics::{
    admissible_curve_class, canonical_class, genus_of_class, intersect, is_ample, is_nef, solve_second_fibration_class,
    NumClass, RuledError,
};
use crate::schema::{parse_document, DescriptorError, InputDocument};
use crate::verify::{verify_descriptor, CheckStatus, VerifyError, VerifyReport};

pub const DEFAULT_TORSION: u32 = 4;
pub const MAX_TORSION: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Classify,
    VerifyLaw,
    Moduli,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    /// `-` reads standard input.
    pub input_path: PathBuf,
    pub torsion_level: u32,
    pub output_format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorRecord {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl ErrorRecord {
    fn new(code: &str, message: impl Into<String>) -> Self {
        ErrorRecord { code: code.to_string(), message: message.into(), path: None }
    }

    fn exit_code(&self) -> i32 {
        if self.code == "INTERNAL" || self.code == "NON_UNIQUE" || self.code == "NO_SOLUTION" || self.code == "LAW_FAILED" {
            2
        } else {
            1
        }
    }
}

impl From<DescriptorError> for ErrorRecord {
    fn from(e: DescriptorError) -> Self {
        let code = e.code().to_string();
        match e {
            DescriptorError::Parse(message) => ErrorRecord { code, message, path: None },
            DescriptorError::Schema { path, message } => ErrorRecord { code, message, path: Some(path) },
        }
    }
}

impl From<ClassifyError> for ErrorRecord {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::InvalidDescriptor(_) => "INVALID_DESCRIPTOR",
            ClassifyError::ActionInvalid(_) => "ACTION_INVALID",
            ClassifyError::Internal(_) => "INTERNAL",
        };
        ErrorRecord::new(code, e.to_string())
    }
}

impl From<VerifyError> for ErrorRecord {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Classify(c) => c.into(),
            VerifyError::Law(l) => ErrorRecord::new("INTERNAL", l.to_string()),
            VerifyError::BadTorsion(_) => ErrorRecord::new("INVALID_CONFIG", e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCheck {
    pub class: [i64; 2],
    pub self_intersection: i64,
    pub dot_fiber: i64,
    pub dot_k: i64,
    pub nef: bool,
    pub ample: bool,
    pub admissible: bool,
    pub genus: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub g: u32,
    pub e: i64,
    pub canonical_class: [i64; 2],
    pub section_class: [i64; 2],
    pub classes: Vec<ClassCheck>,
    pub f0: Option<[i64; 2]>,
}

/// The machine-readable report. Field order is fixed by declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct MachineOutput {
    pub verdict: Option<String>,
    pub structure: Option<String>,
    pub reasons: Vec<Reason>,
    pub moduli: Option<ModuliDescription>,
    pub errors: Vec<ErrorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeReport>,
}

impl MachineOutput {
    pub fn from_report(report: &ClassificationReport) -> Self {
        MachineOutput {
            verdict: Some(report.verdict.to_string()),
            structure: Some(report.structure.clone()),
            reasons: report.reason_records(),
            moduli: Some(report.moduli.clone()),
            ..Default::default()
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.errors.iter().map(ErrorRecord::exit_code).max().unwrap_or(0)
    }
}

fn to_pair(d: NumClass) -> [i64; 2] {
    [d.a, d.b]
}

fn cone_report(doc: &InputDocument) -> Result<ConeReport, ErrorRecord> {
    let SurfaceDescriptor::Ruled { data, .. } = &doc.surface else {
        return Err(ErrorRecord::new("INVALID_DESCRIPTOR", format!("cone needs a ruled surface, got {}", doc.surface.kind())));
    };
    let k = canonical_class(data);
    let classes = doc
        .classes
        .iter()
        .map(|&d| ClassCheck {
            class: to_pair(d),
            self_intersection: intersect(d, d, data),
            dot_fiber: intersect(d, NumClass::FIBER, data),
            dot_k: intersect(d, k, data),
            nef: is_nef(d, data),
            ample: is_ample(d, data),
            admissible: admissible_curve_class(d, data),
            genus: format_rational(&genus_of_class(d, data).value),
        })
        .collect();
    let section = doc.section_class.unwrap_or(NumClass::FIBER);
    let f0 = solve_second_fibration_class(data, section).map_err(|e| match e {
        RuledError::NoSolution => ErrorRecord::new("NO_SOLUTION", e.to_string()),
        RuledError::NonUnique(_) => ErrorRecord::new("NON_UNIQUE", e.to_string()),
        other => ErrorRecord::new("INVALID_DESCRIPTOR", other.to_string()),
    })?;
    Ok(ConeReport {
        g: data.g(),
        e: data.e(),
        canonical_class: to_pair(k),
        section_class: to_pair(section),
        classes,
        f0: Some(to_pair(f0)),
    })
}

/// Runs a subcommand on an already-read input document.
pub fn run_on_bytes(subcommand: Subcommand, bytes: &[u8], torsion_level: u32) -> MachineOutput {
    let mut out = MachineOutput::default();
    if !(1..=MAX_TORSION).contains(&torsion_level) {
        out.errors.push(ErrorRecord::new("INVALID_CONFIG", format!("torsion level must be in 1..={MAX_TORSION}, got {torsion_level}")));
        return out;
    }
    let doc = match parse_document(bytes) {
        Ok(doc) => doc,
        Err(e) => {
            out.errors.push(e.into());
            return out;
        }
    };
    let report = match classify(&doc.surface) {
        Ok(r) => r,
        Err(e) => {
            out.errors.push(e.into());
            return out;
        }
    };
    out = MachineOutput::from_report(&report);
    match subcommand {
        Subcommand::Classify => {}
        Subcommand::Moduli => {
            // presentations give the finer answer; everything else keeps the report's moduli
            if report.verdict != Verdict::No {
                if let Ok(m) = moduli_of_sections(&doc.surface) {
                    out.moduli = Some(m);
                }
            }
        }
        Subcommand::VerifyLaw => match verify_descriptor(&doc.surface, torsion_level) {
            Ok(v) => {
                if !v.passed() {
                    out.errors.push(ErrorRecord::new("LAW_FAILED", "an induced law failed the associativity check"));
                }
                out.verification = Some(v);
            }
            Err(e) => out.errors.push(e.into()),
        },
        Subcommand::Cone => match cone_report(&doc) {
            Ok(c) => out.cone = Some(c),
            Err(e) => out.errors.push(e),
        },
    }
    out
}

pub fn render_machine(out: &MachineOutput) -> String {
    let mut s = serde_json::to_string_pretty(out).expect("machine output serializes");
    s.push('\n');
    s
}

fn render_text(subcommand: Subcommand, out: &MachineOutput, report_text: Option<String>) -> String {
    let mut s = String::new();
    match subcommand {
        Subcommand::Classify => s.push_str(&report_text.unwrap_or_default()),
        Subcommand::Moduli => {
            if let Some(m) = &out.moduli {
                let _ = writeln!(s, "moduli: {}\ndescription: {}\ncomponent: {}", m.kind, m.description, m.sl_component);
            }
        }
        Subcommand::VerifyLaw => {
            if let Some(v) = &out.verification {
                if let Some(why) = &v.skipped {
                    let _ = writeln!(s, "SKIP: {why}");
                }
                for c in &v.checks {
                    let base = format!("{:?}", c.base_law).to_uppercase();
                    match (&c.status, &c.counterexample) {
                        (CheckStatus::Pass, _) => {
                            let _ = writeln!(s, "{base}: PASS ({} triples, {} points; {})", c.triples, c.universe_size, c.model);
                        }
                        (CheckStatus::Fail, Some([a, b, cc, l, r])) => {
                            let _ = writeln!(s, "{base}: FAIL at a = {a}, b = {b}, c = {cc}: (ab)c = {l}, a(bc) = {r}");
                        }
                        (CheckStatus::Fail, None) => {
                            let _ = writeln!(s, "{base}: FAIL");
                        }
                    }
                }
            }
        }
        Subcommand::Cone => {
            if let Some(c) = &out.cone {
                let _ = writeln!(s, "ruled surface g = {}, e = {}", c.g, c.e);
                let _ = writeln!(s, "K_S = ({}, {})", c.canonical_class[0], c.canonical_class[1]);
                for d in &c.classes {
                    let _ = writeln!(
                        s,
                        "({}, {}): D^2 = {}, D.f = {}, D.K = {}, nef = {}, ample = {}, curve class = {}, genus = {}",
                        d.class[0], d.class[1], d.self_intersection, d.dot_fiber, d.dot_k, d.nef, d.ample, d.admissible, d.genus
                    );
                }
                if let Some([a, b]) = c.f0 {
                    let _ = writeln!(s, "f0 = ({a}, {b})");
                }
            }
        }
    }
    s
}

fn render_errors_text(errors: &[ErrorRecord]) -> String {
    let mut s = String::new();
    for e in errors {
        match &e.path {
            Some(p) => {
                let _ = writeln!(s, "error: {} at {}: {}", e.code, p, e.message);
            }
            None => {
                let _ = writeln!(s, "error: {}: {}", e.code, e.message);
            }
        }
    }
    s
}

pub fn run(config: &RunConfig) -> RunOutcome {
    let bytes = if config.input_path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf).map(|_| buf)
    } else {
        std::fs::read(&config.input_path)
    };
    let out = match bytes {
        Ok(bytes) => run_on_bytes(config.subcommand, &bytes, config.torsion_level),
        Err(e) => MachineOutput {
            errors: vec![ErrorRecord::new("IO_ERROR", format!("{}: {e}", config.input_path.display()))],
            ..Default::default()
        },
    };
    let exit_code = out.exit_code();
    match config.output_format {
        OutputFormat::Machine => RunOutcome { exit_code, stdout: render_machine(&out), stderr: String::new() },
        OutputFormat::Text => {
            let report_text = explain_from_output(&out);
            let stdout = if out.verdict.is_some() { render_text(config.subcommand, &out, report_text) } else { String::new() };
            RunOutcome { exit_code, stdout, stderr: render_errors_text(&out.errors) }
        }
    }
}

/// Text rendering of the classification part of an output; agrees with
/// [`explain`] on the report it came from.
fn explain_from_output(out: &MachineOutput) -> Option<String> {
    let verdict = out.verdict.as_ref()?;
    let mut s = format!("verdict: {verdict}\nstructure: {}\n", out.structure.as_deref().unwrap_or(""));
    for r in &out.reasons {
        let _ = writeln!(s, "[{}] {}", r.tag, r.text);
    }
    if let Some(m) = &out.moduli {
        let _ = writeln!(s, "moduli: {} ({}); component {}", m.kind, m.description, m.sl_component);
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::explain;

    #[test]
    fn text_matches_explain() {
        let bytes = br#"{"surface":{"kind":"bielliptic","type":7}}"#;
        let out = run_on_bytes(Subcommand::Classify, bytes, DEFAULT_TORSION);
        let report = classify(&crate::schema::parse_descriptor(bytes).unwrap()).unwrap();
        assert_eq!(explain_from_output(&out).unwrap(), explain(&report));
        assert!(explain(&report).starts_with("verdict: YES"));
        assert!(explain(&report).contains("Theorem 3.3"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_on_bytes(Subcommand::Classify, b"{", 4).exit_code(), 1);
        assert_eq!(run_on_bytes(Subcommand::Classify, br#"{"surface":{"kind":"abelian"}}"#, 4).exit_code(), 0);
        assert_eq!(run_on_bytes(Subcommand::Classify, br#"{"surface":{"kind":"abelian"}}"#, 13).exit_code(), 1);
        assert_eq!(run_on_bytes(Subcommand::Cone, br#"{"surface":{"kind":"abelian"}}"#, 4).exit_code(), 1);
    }

    #[test]
    fn cone_example() {
        let out = run_on_bytes(Subcommand::Cone, br#"{"surface":{"kind":"ruled","g":1,"e":-1}}"#, 4);
        assert_eq!(out.cone.unwrap().f0, Some([2, -1]));
    }

    #[test]
    fn verify_abelian() {
        let out = run_on_bytes(Subcommand::VerifyLaw, br#"{"surface":{"kind":"abelian"}}"#, 3);
        assert_eq!(out.exit_code(), 0);
        let text = render_text(Subcommand::VerifyLaw, &out, None);
        assert!(text.contains("ADD: PASS (729 triples"));
    }
}
