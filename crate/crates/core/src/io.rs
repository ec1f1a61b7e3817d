//! JSON documents and the workspace loader.
//!
//! A workspace is a directory of `*.json` files; each file holds one object
//! named after its file stem. The kind is read off the keys:
//!
//! | key          | kind          |
//! |--------------|---------------|
//! | `chart`      | cycle table   |
//! | `generators` | group action  |
//! | `coords`     | chart         |
//! | `values`     | function      |
//! | `stars`      | open set      |
//! | `cover`      | two-set cover |
//! | `simplices`  | complex       |
//!
//! Rationals are written as `"p/q"` strings (`"p"` when integral); integers
//! are accepted on input.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer};
use serde_json::{json, Map, Value};

use crate::charts::{cc_inverse, EmbeddedChart, LagrangianCycleTable, SignVector};
use crate::complex::{OpenSet, Simplex, SimplicialComplex};
use crate::constructible::ConstructibleFunction;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::orbifold::{EquivariantChart, GroupAction};
use crate::rational::{self, render, Q};

#[derive(Clone, Debug)]
struct Rational(Q);

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Rational(rational::q(n))),
            Raw::Text(s) => rational::parse(&s).map(Rational).map_err(D::Error::custom),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    #[serde(default)]
    vertices: Option<Vec<i64>>,
    simplices: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueEntry {
    simplex: Vec<i64>,
    value: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionDoc {
    complex: String,
    values: Vec<ValueEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionDoc {
    complex: String,
    generators: Vec<BTreeMap<String, i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartDoc {
    complex: String,
    dim: usize,
    coords: BTreeMap<String, Vec<Rational>>,
    #[serde(default)]
    action: Option<String>,
    #[serde(default)]
    matrices: Option<BTreeMap<String, Vec<Vec<Rational>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntry {
    simplex: Vec<i64>,
    signs: String,
    mult: Rational,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    chart: String,
    entries: Vec<TableEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpenSetDoc {
    complex: String,
    stars: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverDoc {
    complex: String,
    cover: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Complex,
    Action,
    Function,
    OpenSet,
    Cover,
    Chart,
    Table,
}

fn kind_of(name: &str, v: &Value) -> Result<Kind> {
    let obj = v.as_object().ok_or_else(|| Error::Parse {
        context: name.into(),
        message: "expected a JSON object".into(),
    })?;
    let table = [
        ("chart", Kind::Table),
        ("generators", Kind::Action),
        ("coords", Kind::Chart),
        ("values", Kind::Function),
        ("stars", Kind::OpenSet),
        ("cover", Kind::Cover),
        ("simplices", Kind::Complex),
    ];
    table
        .iter()
        .find(|(key, _)| obj.contains_key(*key))
        .map(|(_, k)| *k)
        .ok_or_else(|| Error::Parse {
            context: name.into(),
            message: "cannot tell the object kind from its keys".into(),
        })
}

fn parse_doc<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        context: name.into(),
        message: e.to_string(),
    })
}

fn invalid(name: &str, e: impl ToString) -> Error {
    Error::Invalid {
        object: name.into(),
        reason: e.to_string(),
    }
}

fn vertex_key(name: &str, key: &str) -> Result<i64> {
    key.parse()
        .map_err(|_| invalid(name, format!("{key:?} is not an integer vertex id")))
}

fn simplex(name: &str, v: &[i64]) -> Result<Simplex> {
    Simplex::new(v.iter().copied()).map_err(|e| invalid(name, e))
}

/// A named object together with the name of the object it lives on.
#[derive(Clone, Debug)]
pub struct Entry<T> {
    pub parent: String,
    pub value: T,
}

/// Everything loaded from a workspace directory.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub complexes: BTreeMap<String, Arc<SimplicialComplex>>,
    pub functions: BTreeMap<String, Entry<ConstructibleFunction>>,
    pub actions: BTreeMap<String, Entry<Arc<GroupAction>>>,
    pub charts: BTreeMap<String, Entry<Arc<EmbeddedChart>>>,
    /// Charts that carry matrices for an action, by chart name.
    pub equivariant: BTreeMap<String, Entry<EquivariantChart>>,
    pub open_sets: BTreeMap<String, Entry<OpenSet>>,
    pub covers: BTreeMap<String, Entry<(OpenSet, OpenSet)>>,
    pub tables: BTreeMap<String, Entry<LagrangianCycleTable>>,
}

impl Workspace {
    /// Load every `*.json` file of a directory.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let read = |e: std::io::Error| Error::Parse {
            context: dir.display().to_string(),
            message: e.to_string(),
        };
        let mut sources = Vec::new();
        for entry in fs::read_dir(dir).map_err(read)? {
            let path = entry.map_err(read)?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let text = fs::read_to_string(&path).map_err(read)?;
                sources.push((name, text));
            }
        }
        Self::from_sources(sources)
    }

    /// Load named JSON texts.
    pub fn from_sources(sources: Vec<(String, String)>) -> Result<Self> {
        let mut parsed = Vec::with_capacity(sources.len());
        for (name, text) in sources {
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                context: name.clone(),
                message: e.to_string(),
            })?;
            parsed.push((kind_of(&name, &v)?, name, text));
        }
        parsed.sort();
        let mut ws = Workspace::default();
        for (kind, name, text) in parsed {
            if ws.contains(&name) {
                return Err(invalid(&name, "duplicate object name"));
            }
            match kind {
                Kind::Complex => ws.add_complex(&name, &text)?,
                Kind::Action => ws.add_action(&name, &text)?,
                Kind::Function => ws.add_function(&name, &text)?,
                Kind::OpenSet => ws.add_open_set(&name, &text)?,
                Kind::Cover => ws.add_cover(&name, &text)?,
                Kind::Chart => ws.add_chart(&name, &text)?,
                Kind::Table => ws.add_table(&name, &text)?,
            }
        }
        Ok(ws)
    }

    fn contains(&self, name: &str) -> bool {
        self.complexes.contains_key(name)
            || self.functions.contains_key(name)
            || self.actions.contains_key(name)
            || self.charts.contains_key(name)
            || self.open_sets.contains_key(name)
            || self.covers.contains_key(name)
            || self.tables.contains_key(name)
    }

    pub fn complex(&self, name: &str) -> Result<&Arc<SimplicialComplex>> {
        self.complexes
            .get(name)
            .ok_or_else(|| invalid(name, "no complex with this name"))
    }

    fn parent(&self, name: &str, complex: &str) -> Result<Arc<SimplicialComplex>> {
        self.complexes
            .get(complex)
            .cloned()
            .ok_or_else(|| invalid(name, format!("unknown complex {complex:?}")))
    }

    fn add_complex(&mut self, name: &str, text: &str) -> Result<()> {
        let doc: ComplexDoc = parse_doc(name, text)?;
        let k = match doc.vertices {
            Some(v) => SimplicialComplex::with_vertices(&v, &doc.simplices),
            None => SimplicialComplex::from_maximal(doc.simplices.iter().cloned()),
        }
        .map_err(|e| invalid(name, e))?;
        self.complexes.insert(name.into(), Arc::new(k));
        Ok(())
    }

    fn add_action(&mut self, name: &str, text: &str) -> Result<()> {
        let doc: ActionDoc = parse_doc(name, text)?;
        let k = self.parent(name, &doc.complex)?;
        let mut generators = Vec::with_capacity(doc.generators.len());
        for g in &doc.generators {
            let mut m = BTreeMap::new();
            for (key, w) in g {
                m.insert(vertex_key(name, key)?, *w);
            }
            generators.push(m);
        }
        let action = GroupAction::new(k, &generators).map_err(|e| invalid(name, e))?;
        self.actions.insert(
            name.into(),
            Entry {
                parent: doc.complex,
                value: Arc::new(action),
            },
        );
        Ok(())
    }

    fn add_function(&mut self, name: &str, text: &str) -> Result<()> {
        let doc: FunctionDoc = parse_doc(name, text)?;
        let k = self.parent(name, &doc.complex)?;
        let mut values = Vec::with_capacity(doc.values.len());
        for e in doc.values {
            values.push((simplex(name, &e.simplex)?, e.value.0));
        }
        let f = ConstructibleFunction::new(k, values).map_err(|e| invalid(name, e))?;
        self.functions.insert(
            name.into(),
            Entry {
                parent: doc.complex,
                value: f,
            },
        );
        Ok(())
    }

    fn stars(&self, name: &str, k: &Arc<SimplicialComplex>, stars: &[Vec<i64>]) -> Result<OpenSet> {
        let simplices = stars.iter().map(|s| simplex(name, s)).collect::<Result<Vec<_>>>()?;
        OpenSet::star_of(Arc::clone(k), simplices).map_err(|e| invalid(name, e))
    }

    fn add_open_set(&mut self, name: &str, text: &str) -> Result<()> {
        let doc: OpenSetDoc = parse_doc(name, text)?;
        let k = self.parent(name, &doc.complex)?;
        let u = self.stars(name, &k, &doc.stars)?;
        self.open_sets.insert(
            name.into(),
            Entry {
                parent: doc.complex,
                value: u,
            },
        );
        Ok(())
    }

    fn add_cover(&mut self, name: &str, text: &str) -> Result<()> {
        let doc: CoverDoc = parse_doc(name, text)?;
        let k = self.parent(name, &doc.complex)?;
        let [u, v] = &doc.cover[..] else {
            return Err(invalid(name, "a cover lists exactly two open sets"));
        };
        let (u, v) = (self.stars(name, &k, u)?, self.stars(name, &k, v)?);
        crate::cosheaf::OpenCover::new(k, vec![u.clone(), v.clone()]).map_err(|e| invalid(name, e))?;
        self.covers.insert(
            name.into(),
            Entry {
                parent: doc.complex,
                value: (u, v),
            },
        );
        Ok(())
    }

    fn add_chart(&mut self, name: &str, text: &str) -> Result<()> {
        let doc: ChartDoc = parse_doc(name, text)?;
        let k = self.parent(name, &doc.complex)?;
        let mut coords = BTreeMap::new();
        for (key, x) in doc.coords {
            coords.insert(vertex_key(name, &key)?, x.into_iter().map(|r| r.0).collect());
        }
        let chart = Arc::new(EmbeddedChart::new(k, doc.dim, coords).map_err(|e| invalid(name, e))?);
        match (doc.action, doc.matrices) {
            (Some(a), Some(matrices)) => {
                let action = self
                    .actions
                    .get(&a)
                    .ok_or_else(|| invalid(name, format!("unknown action {a:?}")))?;
                let mut by_index: BTreeMap<usize, Matrix> = BTreeMap::new();
                for (key, m) in matrices {
                    let i: usize = key
                        .parse()
                        .map_err(|_| invalid(name, format!("{key:?} is not a generator index")))?;
                    by_index.insert(i, m.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect());
                }
                let gens = action.value.generators().len();
                if by_index.keys().copied().ne(0..gens) {
                    return Err(invalid(name, format!("expected matrices for generators 0..{gens}")));
                }
                let eq = EquivariantChart::new(
                    Arc::clone(&chart),
                    Arc::clone(&action.value),
                    by_index.into_values().collect(),
                )
                .map_err(|e| invalid(name, e))?;
                self.equivariant.insert(name.into(), Entry { parent: a, value: eq });
            }
            (None, None) => {}
            _ => return Err(invalid(name, "\"matrices\" and \"action\" go together")),
        }
        self.charts.insert(
            name.into(),
            Entry {
                parent: doc.complex,
                value: chart,
            },
        );
        Ok(())
    }

    fn add_table(&mut self, name: &str, text: &str) -> Result<()> {
        let doc: TableDoc = parse_doc(name, text)?;
        let chart = self
            .charts
            .get(&doc.chart)
            .ok_or_else(|| invalid(name, format!("unknown chart {:?}", doc.chart)))?;
        let mut entries = Vec::with_capacity(doc.entries.len());
        for e in doc.entries {
            let signs = SignVector::parse(&e.signs).map_err(|err| invalid(name, err))?;
            entries.push(((simplex(name, &e.simplex)?, signs), e.mult.0));
        }
        let t = LagrangianCycleTable::new(Arc::clone(&chart.value), entries).map_err(|e| invalid(name, e))?;
        cc_inverse(&t).map_err(|e| invalid(name, e))?;
        self.tables.insert(
            name.into(),
            Entry {
                parent: doc.chart,
                value: t,
            },
        );
        Ok(())
    }
}

fn simplices_json<'a>(it: impl IntoIterator<Item = &'a Simplex>) -> Value {
    Value::Array(it.into_iter().map(|s| json!(s.vertices())).collect())
}

pub fn complex_json(k: &SimplicialComplex) -> Value {
    json!({
        "vertices": k.vertices().iter().collect::<Vec<_>>(),
        "simplices": simplices_json(&k.maximal_simplices()),
    })
}

pub fn function_json(f: &ConstructibleFunction, complex: &str) -> Value {
    let values: Vec<Value> = f
        .support()
        .iter()
        .map(|(s, v)| json!({"simplex": s.vertices(), "value": render(v)}))
        .collect();
    json!({"complex": complex, "values": values})
}

pub fn action_json(action: &GroupAction, complex: &str) -> Value {
    let generators: Vec<Value> = action
        .generator_maps()
        .into_iter()
        .map(|m| {
            Value::Object(
                m.into_iter()
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect::<Map<_, _>>(),
            )
        })
        .collect();
    json!({"complex": complex, "generators": generators})
}

fn rationals(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(|x| json!(render(x))).collect())
}

/// Chart document; `equivariant` names the action and supplies its generator matrices.
pub fn chart_json(chart: &EmbeddedChart, complex: &str, equivariant: Option<(&str, &[Matrix])>) -> Value {
    let coords: Map<String, Value> = chart
        .coords()
        .iter()
        .map(|(v, x)| (v.to_string(), rationals(x)))
        .collect();
    let mut doc = json!({"complex": complex, "dim": chart.ambient_dim(), "coords": coords});
    if let Some((action, matrices)) = equivariant {
        let m: Map<String, Value> = matrices
            .iter()
            .enumerate()
            .map(|(i, m)| (i.to_string(), Value::Array(m.iter().map(|r| rationals(r)).collect())))
            .collect();
        doc["action"] = json!(action);
        doc["matrices"] = Value::Object(m);
    }
    doc
}

pub fn table_json(t: &LagrangianCycleTable, chart: &str) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .iter()
        .map(|((s, e), m)| json!({"simplex": s.vertices(), "signs": e.to_string(), "mult": render(m)}))
        .collect();
    json!({"chart": chart, "entries": entries})
}

/// Minimal members of an open set; their open stars recover it.
pub fn star_generators(u: &OpenSet) -> Vec<Simplex> {
    u.members()
        .iter()
        .filter(|s| !s.facets().iter().any(|f| u.contains(f)))
        .cloned()
        .collect()
}

pub fn open_set_json(u: &OpenSet, complex: &str) -> Value {
    json!({"complex": complex, "stars": simplices_json(&star_generators(u))})
}

pub fn cover_json(u: &OpenSet, v: &OpenSet, complex: &str) -> Value {
    json!({
        "complex": complex,
        "cover": [simplices_json(&star_generators(u)), simplices_json(&star_generators(v))],
    })
}

/// Indented JSON with a trailing newline. Arrays that hold no objects stay
/// on one line, so simplices and coordinates read naturally.
pub fn to_text(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.values().all(|x| !x.is_object() && is_flat(x)),
        Value::Array(a) => a.iter().all(is_flat),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let parts: Vec<String> = m
                .iter()
                .map(|(k, x)| format!("{}: {}", Value::String(k.clone()), inline(x)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Object(_) if is_flat(v) && inline(v).len() <= 60 => out.push_str(&inline(v)),
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, depth);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}
