//! JSON input documents: graphs with optional 𝓛/𝓟 vectors, and polar
//! exploration constraint files.
//!
//! Parsing walks a `serde_json::Value` by hand so that every failure carries a
//! stable machine-readable code and the JSON path of the offending value.
//! Unknown fields are rejected everywhere.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    MalformedJson,
    MissingField,
    UnknownField,
    InvalidType,
    InvalidValue,
    DuplicateVertex,
    DanglingVertex,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::MalformedJson => "malformed_json",
            ErrorCode::MissingField => "missing_field",
            ErrorCode::UnknownField => "unknown_field",
            ErrorCode::InvalidType => "invalid_type",
            ErrorCode::InvalidValue => "invalid_value",
            ErrorCode::DuplicateVertex => "duplicate_vertex",
            ErrorCode::DanglingVertex => "dangling_vertex",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{code} at {path}: {message}")]
pub struct DocumentError {
    pub code: ErrorCode,
    /// JSON pointer to the offending value (`""` for the document root).
    pub path: String,
    pub message: String,
}

impl DocumentError {
    fn new(code: ErrorCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { code, path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSpec {
    pub id: String,
    pub genus: i64,
    pub self_intersection: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphDocument {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<(String, String)>,
    pub l_vector: Option<BTreeMap<String, i64>>,
    pub p_vector: Option<BTreeMap<String, i64>>,
}

impl GraphDocument {
    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert(
            "vertices".into(),
            Value::Array(
                self.vertices
                    .iter()
                    .map(|v| {
                        let mut o = Map::new();
                        o.insert("id".into(), v.id.clone().into());
                        o.insert("genus".into(), v.genus.into());
                        o.insert("self_intersection".into(), v.self_intersection.into());
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        root.insert(
            "edges".into(),
            Value::Array(
                self.edges
                    .iter()
                    .map(|(a, b)| Value::Array(vec![a.clone().into(), b.clone().into()]))
                    .collect(),
            ),
        );
        if let Some(l) = &self.l_vector {
            root.insert("l_vector".into(), vector_value(l));
        }
        if let Some(p) = &self.p_vector {
            root.insert("p_vector".into(), vector_value(p));
        }
        Value::Object(root)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("document serializes")
    }
}

fn vector_value(map: &BTreeMap<String, i64>) -> Value {
    Value::Object(map.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect())
}

/// Constraint file for `explore`. Vertex ids are checked against a graph
/// later, via [`crate::polar::ConstraintSet::from_document`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintDocument {
    pub fixed: BTreeMap<String, i64>,
    pub upper: BTreeMap<String, i64>,
    pub lower: BTreeMap<String, i64>,
    pub total_weighted_sum: Option<i64>,
    pub require_a_integral: bool,
    pub require_q_at_least_one: bool,
    pub require_q_one_at_l_nodes: bool,
    pub strict_monotone_paths: Vec<Vec<String>>,
    pub max_prefixes: Option<u64>,
}

impl Default for ConstraintDocument {
    fn default() -> Self {
        Self {
            fixed: BTreeMap::new(),
            upper: BTreeMap::new(),
            lower: BTreeMap::new(),
            total_weighted_sum: None,
            require_a_integral: true,
            require_q_at_least_one: false,
            require_q_one_at_l_nodes: false,
            strict_monotone_paths: Vec::new(),
            max_prefixes: None,
        }
    }
}

pub fn parse_graph_document(bytes: &[u8]) -> Result<GraphDocument, DocumentError> {
    let root = parse_json(bytes)?;
    let obj = expect_object(&root, "")?;
    reject_unknown(obj, "", &["vertices", "edges", "l_vector", "p_vector"])?;

    let vertices_value = require(obj, "", "vertices")?;
    let vertices_array = expect_array(vertices_value, "/vertices")?;
    let mut vertices = Vec::with_capacity(vertices_array.len());
    let mut seen = HashSet::new();
    for (i, v) in vertices_array.iter().enumerate() {
        let path = format!("/vertices/{i}");
        let o = expect_object(v, &path)?;
        reject_unknown(o, &path, &["id", "genus", "self_intersection"])?;
        let id = expect_string(require(o, &path, "id")?, &format!("{path}/id"))?;
        if !seen.insert(id.clone()) {
            return Err(DocumentError::new(
                ErrorCode::DuplicateVertex,
                format!("{path}/id"),
                format!("vertex id `{id}` declared more than once"),
            ));
        }
        let genus = expect_int(require(o, &path, "genus")?, &format!("{path}/genus"))?;
        let self_intersection = expect_int(
            require(o, &path, "self_intersection")?,
            &format!("{path}/self_intersection"),
        )?;
        vertices.push(VertexSpec { id, genus, self_intersection });
    }

    let edges_value = require(obj, "", "edges")?;
    let edges_array = expect_array(edges_value, "/edges")?;
    let mut edges = Vec::with_capacity(edges_array.len());
    for (i, e) in edges_array.iter().enumerate() {
        let path = format!("/edges/{i}");
        let pair = expect_array(e, &path)?;
        if pair.len() != 2 {
            return Err(DocumentError::new(
                ErrorCode::InvalidValue,
                path,
                format!("edge must list exactly two vertex ids, found {}", pair.len()),
            ));
        }
        let mut ends = Vec::with_capacity(2);
        for (k, end) in pair.iter().enumerate() {
            let p = format!("{path}/{k}");
            let id = expect_string(end, &p)?;
            if !seen.contains(&id) {
                return Err(dangling(&p, &id));
            }
            ends.push(id);
        }
        let b = ends.pop().expect("two ends");
        let a = ends.pop().expect("two ends");
        edges.push((a, b));
    }

    let l_vector = optional_vector(obj, "l_vector", &seen)?;
    let p_vector = optional_vector(obj, "p_vector", &seen)?;
    Ok(GraphDocument { vertices, edges, l_vector, p_vector })
}

pub fn parse_constraint_document(bytes: &[u8]) -> Result<ConstraintDocument, DocumentError> {
    let root = parse_json(bytes)?;
    let obj = expect_object(&root, "")?;
    reject_unknown(
        obj,
        "",
        &[
            "fixed",
            "upper",
            "lower",
            "total_weighted_sum",
            "require_A_integral",
            "require_q_at_least_one",
            "require_q_one_at_L_nodes",
            "strict_monotone_paths",
            "max_prefixes",
        ],
    )?;
    let mut doc = ConstraintDocument::default();
    for (key, slot) in [("fixed", &mut doc.fixed), ("upper", &mut doc.upper), ("lower", &mut doc.lower)] {
        if let Some(v) = obj.get(key) {
            *slot = int_map(v, &format!("/{key}"))?;
        }
    }
    match obj.get("total_weighted_sum") {
        None | Some(Value::Null) => {}
        Some(v) => {
            let total = expect_int(v, "/total_weighted_sum")?;
            if total < 0 {
                return Err(DocumentError::new(
                    ErrorCode::InvalidValue,
                    "/total_weighted_sum",
                    "weighted sum must be nonnegative",
                ));
            }
            doc.total_weighted_sum = Some(total);
        }
    }
    for (key, slot) in [
        ("require_A_integral", &mut doc.require_a_integral),
        ("require_q_at_least_one", &mut doc.require_q_at_least_one),
        ("require_q_one_at_L_nodes", &mut doc.require_q_one_at_l_nodes),
    ] {
        if let Some(v) = obj.get(key) {
            *slot = v.as_bool().ok_or_else(|| {
                DocumentError::new(ErrorCode::InvalidType, format!("/{key}"), "expected a boolean")
            })?;
        }
    }
    if let Some(v) = obj.get("strict_monotone_paths") {
        let paths = expect_array(v, "/strict_monotone_paths")?;
        for (i, p) in paths.iter().enumerate() {
            let path = format!("/strict_monotone_paths/{i}");
            let ids = expect_array(p, &path)?
                .iter()
                .enumerate()
                .map(|(k, id)| expect_string(id, &format!("{path}/{k}")))
                .collect::<Result<Vec<_>, _>>()?;
            doc.strict_monotone_paths.push(ids);
        }
    }
    match obj.get("max_prefixes") {
        None | Some(Value::Null) => {}
        Some(v) => {
            let cap = v.as_u64().ok_or_else(|| {
                DocumentError::new(
                    ErrorCode::InvalidType,
                    "/max_prefixes",
                    "expected a nonnegative integer",
                )
            })?;
            doc.max_prefixes = Some(cap);
        }
    }
    Ok(doc)
}

impl ConstraintDocument {
    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("fixed".into(), vector_value(&self.fixed));
        root.insert("upper".into(), vector_value(&self.upper));
        root.insert("lower".into(), vector_value(&self.lower));
        root.insert(
            "total_weighted_sum".into(),
            self.total_weighted_sum.map_or(Value::Null, Value::from),
        );
        root.insert("require_A_integral".into(), self.require_a_integral.into());
        root.insert("require_q_at_least_one".into(), self.require_q_at_least_one.into());
        root.insert("require_q_one_at_L_nodes".into(), self.require_q_one_at_l_nodes.into());
        root.insert(
            "strict_monotone_paths".into(),
            Value::Array(
                self.strict_monotone_paths
                    .iter()
                    .map(|p| Value::Array(p.iter().map(|s| Value::from(s.clone())).collect()))
                    .collect(),
            ),
        );
        if let Some(cap) = self.max_prefixes {
            root.insert("max_prefixes".into(), cap.into());
        }
        Value::Object(root)
    }
}

fn parse_json(bytes: &[u8]) -> Result<Value, DocumentError> {
    serde_json::from_slice(bytes)
        .map_err(|e| DocumentError::new(ErrorCode::MalformedJson, "", e.to_string()))
}

/// Appends an escaped JSON pointer token.
fn child(path: &str, key: &str) -> String {
    format!("{path}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn dangling(path: &str, id: &str) -> DocumentError {
    DocumentError::new(ErrorCode::DanglingVertex, path, format!("vertex `{id}` is not declared"))
}

fn optional_vector(
    obj: &Map<String, Value>,
    key: &str,
    ids: &HashSet<String>,
) -> Result<Option<BTreeMap<String, i64>>, DocumentError> {
    let Some(v) = obj.get(key) else { return Ok(None) };
    let path = format!("/{key}");
    let map = int_map(v, &path)?;
    for (id, value) in &map {
        let p = child(&path, id);
        if !ids.contains(id) {
            return Err(dangling(&p, id));
        }
        if *value < 0 {
            return Err(DocumentError::new(ErrorCode::InvalidValue, p, "entries must be nonnegative"));
        }
    }
    Ok(Some(map))
}

fn int_map(v: &Value, path: &str) -> Result<BTreeMap<String, i64>, DocumentError> {
    let o = expect_object(v, path)?;
    o.iter()
        .map(|(k, val)| Ok((k.clone(), expect_int(val, &child(path, k))?)))
        .collect()
}

fn require<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, DocumentError> {
    obj.get(key).ok_or_else(|| {
        DocumentError::new(ErrorCode::MissingField, format!("{path}/{key}"), format!("missing field `{key}`"))
    })
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), DocumentError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(DocumentError::new(
            ErrorCode::UnknownField,
            child(path, k),
            format!("unknown field `{k}`"),
        )),
        None => Ok(()),
    }
}

fn expect_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, DocumentError> {
    v.as_object()
        .ok_or_else(|| DocumentError::new(ErrorCode::InvalidType, path, "expected an object"))
}

fn expect_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, DocumentError> {
    v.as_array()
        .ok_or_else(|| DocumentError::new(ErrorCode::InvalidType, path, "expected an array"))
}

fn expect_string(v: &Value, path: &str) -> Result<String, DocumentError> {
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| DocumentError::new(ErrorCode::InvalidType, path, "expected a string"))
}

fn expect_int(v: &Value, path: &str) -> Result<i64, DocumentError> {
    v.as_i64()
        .ok_or_else(|| DocumentError::new(ErrorCode::InvalidType, path, "expected an integer"))
}
