//! JSON files for instances, colorings and solutions.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{
    check_structure, Coloring, Edge, InstanceError, MetricInstance, Objective, StructureKind, StructurePair,
};
use crate::weight::Weight;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}: line {line}, column {column}, at `{field}`: {msg}")]
    Parse { origin: String, line: usize, column: usize, field: String, msg: String },
    #[error("{origin}: field `{field}`: {msg}")]
    Field { origin: String, field: String, msg: String },
    #[error("{origin}: {source}")]
    Instance { origin: String, source: InstanceError },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n_pairs: usize,
    #[serde(default)]
    pairs: Option<String>,
    weights: Vec<Vec<Weight>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<Weight>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
}

fn parse_json<'de, T: Deserialize<'de>>(text: &'de str, origin: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        IoError::Parse {
            origin: origin.to_string(),
            line: inner.line(),
            column: inner.column(),
            field,
            msg: inner.to_string(),
        }
    })
}

fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

pub fn instance_from_str(text: &str, origin: &str) -> Result<MetricInstance, IoError> {
    let file: InstanceFile = parse_json(text, origin)?;
    if let Some(p) = &file.pairs {
        if p != "canonical" {
            return Err(IoError::Field {
                origin: origin.to_string(),
                field: "pairs".into(),
                msg: format!("unsupported pairing {p:?}, only \"canonical\""),
            });
        }
    }
    let wrap = |source| IoError::Instance { origin: origin.to_string(), source };
    let m = check_structure(file.weights).map_err(wrap)?;
    let mut inst = MetricInstance::new(file.n_pairs, m).map_err(wrap)?;
    if let Some(points) = file.points {
        inst = inst.with_points(points).map_err(wrap)?;
    }
    if let Some(meta) = file.meta {
        inst = inst.with_meta(meta);
    }
    Ok(inst)
}

/// Serializes with one matrix row per line.
pub fn instance_to_string(inst: &MetricInstance) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"n_pairs\": {},", inst.n_pairs());
    out.push_str("  \"pairs\": \"canonical\",\n");
    out.push_str("  \"weights\": [\n");
    let n = inst.n_nodes();
    for (u, row) in inst.weights().rows().enumerate() {
        let _ = write!(out, "    {}", json(row));
        out.push_str(if u + 1 < n { ",\n" } else { "\n" });
    }
    out.push_str("  ]");
    if let Some(points) = inst.points() {
        let _ = write!(out, ",\n  \"points\": {}", json(points));
    }
    if let Some(meta) = inst.meta() {
        let _ = write!(out, ",\n  \"meta\": {}", json(meta));
    }
    out.push_str("\n}\n");
    out
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<MetricInstance, IoError> {
    let path = path.as_ref();
    instance_from_str(&read_text(path)?, &path.display().to_string())
}

pub fn write_instance(inst: &MetricInstance, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &instance_to_string(inst))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringFile {
    bits: String,
}

fn parse_bits(bits: &str, origin: &str, field: &str) -> Result<Coloring, IoError> {
    Coloring::from_bit_string(bits).ok_or_else(|| IoError::Field {
        origin: origin.to_string(),
        field: field.to_string(),
        msg: format!("expected a string of 0/1 characters, got {bits:?}"),
    })
}

pub fn coloring_from_str(text: &str, origin: &str) -> Result<Coloring, IoError> {
    let file: ColoringFile = parse_json(text, origin)?;
    parse_bits(&file.bits, origin, "bits")
}

pub fn coloring_to_string(c: &Coloring) -> String {
    serde_json::to_string(&ColoringFile { bits: c.to_bit_string() }).expect("serializable") + "\n"
}

pub fn read_coloring(path: impl AsRef<Path>) -> Result<Coloring, IoError> {
    let path = path.as_ref();
    coloring_from_str(&read_text(path)?, &path.display().to_string())
}

pub fn write_coloring(c: &Coloring, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &coloring_to_string(c))
}

/// A solution plus the optional objective/value annotation written by the
/// solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionRecord {
    pub pair: StructurePair,
    pub objective: Option<Objective>,
    pub value: Option<Weight>,
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    coloring: String,
    blue: Vec<Edge>,
    red: Vec<Edge>,
    kind: StructureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objective: Option<Objective>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<Weight>,
}

pub fn solution_from_str(text: &str, origin: &str) -> Result<SolutionRecord, IoError> {
    let file: SolutionFile = parse_json(text, origin)?;
    Ok(SolutionRecord {
        pair: StructurePair {
            coloring: parse_bits(&file.coloring, origin, "coloring")?,
            blue_edges: file.blue,
            red_edges: file.red,
            kind: file.kind,
        },
        objective: file.objective,
        value: file.value,
    })
}

pub fn solution_to_string(rec: &SolutionRecord) -> String {
    let file = SolutionFile {
        coloring: rec.pair.coloring.to_bit_string(),
        blue: rec.pair.blue_edges.clone(),
        red: rec.pair.red_edges.clone(),
        kind: rec.pair.kind,
        objective: rec.objective,
        value: rec.value.clone(),
    };
    serde_json::to_string(&file).expect("serializable") + "\n"
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<SolutionRecord, IoError> {
    let path = path.as_ref();
    solution_from_str(&read_text(path)?, &path.display().to_string())
}

pub fn write_solution(rec: &SolutionRecord, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &solution_to_string(rec))
}
