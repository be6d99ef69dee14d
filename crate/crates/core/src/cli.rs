//! The `resgraph` command line.
//!
//! Exit codes: 0 success, 1 invalid input, 2 infeasible (L not realizable,
//! no P-vector found), 3 resource cap or internal budget exhausted.

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::blowup::nu_vector;
use crate::document::{parse_constraint_document, parse_graph_document, GraphDocument};
use crate::dot::{export_dot, Decorations};
use crate::graph::{validate_graph, LVector, PVector, WeightedGraph};
use crate::linalg::{format_rational, RationalVector};
use crate::lipman::{self, EnumerationLimits};
use crate::polar::{self, ConstraintSet};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "resgraph", version, about = "Invariants of weighted resolution graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Graph document (JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check connectivity, weights and negative definiteness.
    Validate(Common),
    /// Laufer's fundamental cycle.
    Zmin(Common),
    /// Least Ineq1 divisor and the multiplicity bound -D².
    Multbound(Common),
    /// Divisor pair and ν-vector.
    Nu(Common),
    /// Multiplicities and Milnor fiber Euler characteristic (needs l_vector).
    Chi(Common),
    /// Polar multiplicity m(X,0) − χ(F_t) (needs l_vector).
    Polarmult(Common),
    /// 𝓛-vector candidates between Z_min and the Ineq1 divisor.
    #[command(name = "enum-l")]
    EnumL {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = lipman::DEFAULT_MAX_POINTS)]
        max_points: u64,
    },
    /// Enumerate 𝓟-vectors and inner rates under a constraint file (needs l_vector).
    Explore {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        constraints: PathBuf,
    },
    /// Graphviz rendering decorated with whatever vectors are available.
    Dot {
        #[command(flatten)]
        common: Common,
        /// Also label vertices with ν.
        #[arg(long)]
        nu: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Zmin(_) => "zmin",
            Command::Multbound(_) => "multbound",
            Command::Nu(_) => "nu",
            Command::Chi(_) => "chi",
            Command::Polarmult(_) => "polarmult",
            Command::EnumL { .. } => "enum-l",
            Command::Explore { .. } => "explore",
            Command::Dot { .. } => "dot",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Validate(c)
            | Command::Zmin(c)
            | Command::Multbound(c)
            | Command::Nu(c)
            | Command::Chi(c)
            | Command::Polarmult(c) => c,
            Command::EnumL { common, .. } | Command::Explore { common, .. } | Command::Dot { common, .. } => common,
        }
    }
}

/// Everything a process needs to finish an invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    json: Value,
    text: String,
}

struct Inputs {
    doc: GraphDocument,
    graph: WeightedGraph,
}

pub fn run_command<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandOutcome { exit_code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => CommandOutcome { exit_code: 1, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let name = cli.command.name();
    let common = cli.command.common();
    let mut hasher = Sha256::new();
    let result = execute(&cli.command, &mut hasher);
    let hash = format!("sha256:{}", hex::encode(hasher.finalize()));

    let (exit_code, body, stderr) = match result {
        Ok(report) => {
            let body = match common.format {
                Format::Json => json_envelope(name, &hash, "result", report.json),
                Format::Text => report.text,
            };
            (0, body, String::new())
        }
        Err(e) => {
            let code = e.class().exit_code();
            match common.format {
                Format::Json => {
                    let mut err = Map::new();
                    err.insert("code".into(), e.code().into());
                    if let Error::Document(d) = &e {
                        err.insert("path".into(), d.path.clone().into());
                    }
                    err.insert("message".into(), e.to_string().into());
                    (code, json_envelope(name, &hash, "error", Value::Object(err)), String::new())
                }
                Format::Text => (code, String::new(), format!("error: {e}\n")),
            }
        }
    };

    match (&common.output, body.is_empty()) {
        (Some(path), false) => match std::fs::write(path, &body) {
            Ok(()) => CommandOutcome { exit_code, stdout: String::new(), stderr },
            Err(e) => CommandOutcome {
                exit_code: 1,
                stdout: String::new(),
                stderr: format!("{stderr}error: {}: {e}\n", path.display()),
            },
        },
        _ => CommandOutcome { exit_code, stdout: body, stderr },
    }
}

fn json_envelope(command: &str, hash: &str, key: &str, value: Value) -> String {
    let mut root = Map::new();
    root.insert("command".into(), command.into());
    root.insert("input_hash".into(), hash.into());
    root.insert(key.into(), value);
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes");
    s.push('\n');
    s
}

fn read(path: &Path, hasher: &mut Sha256) -> Result<Vec<u8>, Error> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    hasher.update((bytes.len() as u64).to_le_bytes());
    hasher.update(&bytes);
    Ok(bytes)
}

fn load(common: &Common, hasher: &mut Sha256) -> Result<Inputs, Error> {
    let bytes = read(&common.graph, hasher)?;
    let doc = parse_graph_document(&bytes)?;
    let graph = validate_graph(&doc)?;
    Ok(Inputs { doc, graph })
}

impl Inputs {
    fn l_vector(&self) -> Result<LVector, Error> {
        let map = self
            .doc
            .l_vector
            .as_ref()
            .ok_or_else(|| Error::Usage("graph document has no l_vector".into()))?;
        Ok(LVector::for_graph(&self.graph, self.graph.vector_from_map(map)?)?)
    }

    fn p_vector(&self) -> Result<Option<PVector>, Error> {
        match &self.doc.p_vector {
            Some(map) => Ok(Some(PVector::for_graph(&self.graph, self.graph.vector_from_map(map)?)?)),
            None => Ok(None),
        }
    }
}

fn keyed_ints(g: &WeightedGraph, values: &[i64]) -> Value {
    Value::Object(g.ids().zip(values).map(|(id, &v)| (id.to_string(), Value::from(v))).collect())
}

fn keyed_rationals(g: &WeightedGraph, values: &RationalVector) -> Value {
    Value::Object(g.ids().zip(values.iter()).map(|(id, v)| (id.to_string(), format_rational(v).into())).collect())
}

fn text_keyed<T: Display>(g: &WeightedGraph, values: impl IntoIterator<Item = T>) -> String {
    g.ids().zip(values).map(|(id, v)| format!("{id}={v}")).collect::<Vec<_>>().join(", ")
}

fn execute(command: &Command, hasher: &mut Sha256) -> Result<Report, Error> {
    let inputs = load(command.common(), hasher)?;
    let g = &inputs.graph;
    match command {
        Command::Validate(_) => Ok(Report {
            json: json!({ "valid": true, "vertices": g.len(), "edges": g.edges().len() }),
            text: format!("valid: {} vertices, {} edges\n", g.len(), g.edges().len()),
        }),
        Command::Zmin(_) => {
            let z = lipman::fundamental_cycle(g);
            let square = g.pairing(&z, &z);
            Ok(Report {
                json: json!({ "z_min": keyed_ints(g, &z), "self_intersection": square as i64 }),
                text: format!("Z_min: {}\n", text_keyed(g, z.iter())),
            })
        }
        Command::Multbound(_) => {
            let b = lipman::multiplicity_bound(g)?;
            Ok(Report {
                json: json!({
                    "divisor": keyed_ints(g, &b.divisor),
                    "multiplicity_bound": b.value as i64,
                }),
                text: format!("D: {}\nmultiplicity bound: {}\n", text_keyed(g, b.divisor.iter()), b.value),
            })
        }
        Command::Nu(_) => {
            let pair = lipman::cnp_divisor_pair(g)?;
            let nu = nu_vector(g)?;
            let max = nu.iter().copied().max().expect("nonempty graph");
            Ok(Report {
                json: json!({
                    "d1": keyed_ints(g, &pair.d1),
                    "d2": keyed_ints(g, &pair.d2),
                    "shift": pair.shift,
                    "shift_vertex": g.vertex(pair.vertex).id,
                    "nu": keyed_ints(g, &nu),
                    "max_nu": max,
                }),
                text: format!(
                    "D1: {}\nD2: {} (shift {} at {})\nnu: {}\nmax nu: {max}\n",
                    text_keyed(g, pair.d1.iter()),
                    text_keyed(g, pair.d2.iter()),
                    pair.shift,
                    g.vertex(pair.vertex).id,
                    text_keyed(g, nu.iter()),
                ),
            })
        }
        Command::Chi(_) => {
            let l = inputs.l_vector()?;
            let m = g.multiplicities_from_l(&l)?;
            let chi = polar::chi_milnor_fiber(g, &l)?;
            Ok(Report {
                json: json!({ "multiplicities": keyed_ints(g, &m), "chi": chi }),
                text: format!("M: {}\nchi(F_t): {chi}\n", text_keyed(g, m.iter())),
            })
        }
        Command::Polarmult(_) => {
            let l = inputs.l_vector()?;
            let m = g.multiplicities_from_l(&l)?;
            let mult = polar::surface_multiplicity(g, &l)?;
            let chi = polar::chi_milnor_fiber(g, &l)?;
            let polar = polar::polar_multiplicity(g, &l)?;
            Ok(Report {
                json: json!({
                    "multiplicities": keyed_ints(g, &m),
                    "surface_multiplicity": mult,
                    "chi": chi,
                    "polar_multiplicity": polar,
                }),
                text: format!("m(X,0): {mult}\nchi(F_t): {chi}\npolar multiplicity: {polar}\n"),
            })
        }
        Command::EnumL { max_points, .. } => {
            let limits = EnumerationLimits { max_points: *max_points };
            let bound = lipman::multiplicity_bound(g)?;
            let candidates = lipman::enumerate_l_candidates(g, limits)?;
            let mut text = format!("{} candidates (multiplicity bound {})\n", candidates.len(), bound.value);
            let list: Vec<Value> = candidates
                .iter()
                .map(|c| {
                    let square = -g.pairing(&c.z, &c.z);
                    text.push_str(&format!(
                        "Z: {} | L: {} | -Z^2 = {square}\n",
                        text_keyed(g, c.z.iter()),
                        text_keyed(g, c.l.iter())
                    ));
                    json!({ "z": keyed_ints(g, &c.z), "l": keyed_ints(g, &c.l), "minus_z_squared": square as i64 })
                })
                .collect();
            Ok(Report {
                json: json!({
                    "z_min": keyed_ints(g, &lipman::fundamental_cycle(g)),
                    "upper": keyed_ints(g, &bound.divisor),
                    "multiplicity_bound": bound.value as i64,
                    "candidates": list,
                }),
                text,
            })
        }
        Command::Explore { constraints, .. } => {
            let l = inputs.l_vector()?;
            let bytes = read(constraints, hasher)?;
            let doc = parse_constraint_document(&bytes)?;
            let set = ConstraintSet::from_document(g, &doc)?;
            let solutions = polar::enumerate_p(g, &l, &set)?;
            if solutions.is_empty() {
                return Err(Error::NoSolutions);
            }
            let mut text = format!("{} solution(s)\n", solutions.len());
            let list: Vec<Value> = solutions
                .iter()
                .map(|s| {
                    text.push_str(&format!(
                        "P: {}\nQ: {}\n",
                        text_keyed(g, s.p.iter()),
                        text_keyed(g, s.q.display_entries())
                    ));
                    json!({
                        "p": keyed_ints(g, &s.p),
                        "a": keyed_rationals(g, &s.a),
                        "q": keyed_rationals(g, &s.q),
                        "diagnostics": s.diagnostics.iter()
                            .map(|d| json!({ "name": d.name, "satisfied": d.satisfied }))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Report { json: json!({ "count": solutions.len(), "solutions": list }), text })
        }
        Command::Dot { nu: with_nu, .. } => {
            let l = inputs.doc.l_vector.as_ref().map(|_| inputs.l_vector()).transpose()?;
            let m = l.as_ref().map(|l| g.multiplicities_from_l(l)).transpose()?;
            let p = inputs.p_vector()?;
            let q = match (&l, &p) {
                (Some(l), Some(p)) => Some(polar::laplacian_solve_a(g, l, p)?.1),
                _ => None,
            };
            let nu = if *with_nu { Some(nu_vector(g)?) } else { None };
            let deco = Decorations {
                m: m.as_deref(),
                l: l.as_deref(),
                p: p.as_deref(),
                q: q.as_ref(),
                nu: nu.as_deref(),
            };
            let dot = export_dot(g, &deco)?;
            Ok(Report { json: json!({ "dot": dot }), text: dot })
        }
    }
}
