//! Command-line front end.
//!
//! Every command prints human-readable lines on stdout; `--out` also writes
//! a JSON report `{"command", "passed", "result"}`. Exit codes: 0 success,
//! 1 failed verification, 2 usage or load error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::charts::{cc, cc_inverse, in_normal_cone, intersect_zero_section, EmbeddedChart, LagrangianCycleTable};
use crate::complex::{OpenSet, Simplex};
use crate::constructible::ConstructibleFunction;
use crate::cosheaf::{localized_index_verify, mv_split, verify_mv_exactness};
use crate::error::{Error, Result};
use crate::feasibility::{certify, solve_strict};
use crate::io::{self, Workspace};
use crate::morse::{local_index, morse_evaluate, VertexOrder};
use crate::orbifold::{
    check_regularity, class_of, coarse_weighted_integral, iota, orbifold_index_check, orbifold_integral,
    pushforward_fiber_sum, pushforward_p, quotient, regularize, transfer_report, verify_p_iso, EquivariantChart,
    GroupAction, QuotientData, Regularized,
};
use crate::rational::{self, one, render, Q};
use crate::{fixtures, sample};

pub const DEFAULT_SEED: u64 = 7;

/// Links larger than this are not cross-checked exhaustively by `verify chambers`.
const EXHAUSTIVE_LINK_LIMIT: usize = 14;

#[derive(Parser, Debug)]
#[command(
    name = "orbindex",
    version,
    about = "Euler calculus and characteristic cycles on simplicial complexes"
)]
struct Cli {
    /// Directory of `*.json` objects
    #[arg(long, short = 'w', global = true, default_value = ".")]
    workspace: PathBuf,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Trials per verification suite
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write a JSON report here
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize the workspace or one object
    Info { name: Option<String> },
    /// Euler integral of a function
    Integrate { complex: String, function: String },
    /// Sum of local Morse indices for a vertex order
    MorseEval(MorseArgs),
    /// Characteristic cycle of a function on a chart
    Cc {
        function: String,
        #[arg(long)]
        chart: String,
    },
    /// Function with a given characteristic cycle
    CcInverse { table: String },
    /// Intersection of a cycle table with the zero section
    Intersect {
        table: String,
        /// Comma-separated rationals
        #[arg(long)]
        covector: Option<String>,
    },
    /// Split a function across a two-set cover
    MvSplit(SplitArgs),
    /// Coarse complex and stabilizers of an action
    Quotient {
        #[arg(long)]
        action: String,
    },
    /// Pushforward of a function's class to the coarse complex
    Pushforward {
        function: String,
        #[arg(long)]
        action: String,
        /// Use the fiber sum instead of the norm
        #[arg(long)]
        fiber_sum: bool,
    },
    /// Reciprocal stabilizer orders on the coarse complex
    Iota {
        #[arg(long)]
        action: String,
    },
    /// Seeded verification suites
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Write the built-in fixtures as a workspace
    Fixtures { dir: PathBuf },
}

#[derive(Args, Debug)]
struct MorseArgs {
    function: String,
    /// Vertex weights `v:p/q,...`
    #[arg(long, conflicts_with_all = ["chart", "covector"])]
    weights: Option<String>,
    /// Chart whose heights define the order (with --covector)
    #[arg(long, requires = "covector")]
    chart: Option<String>,
    #[arg(long, requires = "chart")]
    covector: Option<String>,
}

#[derive(Args, Debug)]
struct SplitArgs {
    function: String,
    #[arg(long, conflicts_with_all = ["u", "v"])]
    cover: Option<String>,
    #[arg(long, requires = "v")]
    u: Option<String>,
    #[arg(long, requires = "u")]
    v: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Check {
    /// ∫f = ∩ζ(cc f) = morse(f, u) and cc round trips on random functions
    Index {
        #[arg(long)]
        chart: String,
        /// Random vertex orders per function
        #[arg(long, default_value_t = 10)]
        orders: usize,
    },
    /// Orbifold index formula on an equivariant chart
    OrbifoldIndex {
        #[arg(long)]
        action: String,
        #[arg(long)]
        complex: Option<String>,
        #[arg(long)]
        chart: Option<String>,
    },
    /// Mayer–Vietoris exactness on a cover, optionally with localized index checks
    Cosheaf {
        #[arg(long)]
        cover: String,
        #[arg(long)]
        chart: Option<String>,
    },
    /// Invertibility of p_!, the weighted coarse integral and the transfer composite
    Norm {
        #[arg(long)]
        action: String,
    },
    /// Chamber witnesses, exhaustive sign-vector cross-check, and convex normal cycles
    Chambers {
        #[arg(long)]
        chart: String,
        #[arg(long)]
        convex: bool,
    },
    /// Every suite on every applicable workspace object
    All,
}

/// Outcome of one command.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub passed: Option<bool>,
    pub lines: Vec<String>,
    pub result: Value,
}

impl Report {
    fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            passed: None,
            lines: Vec::new(),
            result: Value::Null,
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn json(&self) -> Value {
        json!({"command": self.command, "passed": self.passed, "result": self.result})
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            for l in &report.lines {
                let _ = writeln!(stdout, "{l}");
            }
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, io::to_text(&report.json())) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            match report.passed {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    if let Command::Fixtures { dir } = &cli.command {
        fixtures::write_workspace(dir).map_err(|e| Error::Invalid {
            object: dir.display().to_string(),
            reason: e.to_string(),
        })?;
        let mut r = Report::new("fixtures");
        r.line(format!(
            "wrote {} objects to {}",
            fixtures::documents().len(),
            dir.display()
        ));
        return Ok(r);
    }
    let ws = Workspace::load_dir(&cli.workspace)?;
    let ctx = Ctx {
        ws: &ws,
        seed: cli.seed,
        trials: cli.trials,
    };
    match &cli.command {
        Command::Info { name } => ctx.info(name.as_deref()),
        Command::Integrate { complex, function } => ctx.integrate(complex, function),
        Command::MorseEval(a) => ctx.morse_eval(a),
        Command::Cc { function, chart } => ctx.cc(function, chart),
        Command::CcInverse { table } => ctx.cc_inverse(table),
        Command::Intersect { table, covector } => ctx.intersect(table, covector.as_deref()),
        Command::MvSplit(a) => ctx.mv_split(a),
        Command::Quotient { action } => ctx.quotient(action),
        Command::Pushforward {
            function,
            action,
            fiber_sum,
        } => ctx.pushforward(function, action, *fiber_sum),
        Command::Iota { action } => ctx.iota(action),
        Command::Verify { check } => ctx.verify(check),
        Command::Fixtures { .. } => unreachable!("handled above"),
    }
}

fn unknown(kind: &str, name: &str) -> Error {
    Error::Invalid {
        object: name.into(),
        reason: format!("no {kind} with this name"),
    }
}

fn parse_rationals(text: &str) -> Result<Vec<Q>> {
    text.split(',').map(|t| rational::parse(t.trim())).collect()
}

fn parse_weights(text: &str) -> Result<BTreeMap<i64, Q>> {
    text.split(',')
        .map(|item| {
            let (v, w) = item.split_once(':').ok_or_else(|| Error::Parse {
                context: "weights".into(),
                message: format!("expected v:p/q, got {item:?}"),
            })?;
            let v: i64 = v.trim().parse().map_err(|_| Error::Parse {
                context: "weights".into(),
                message: format!("{v:?} is not a vertex id"),
            })?;
            Ok((v, rational::parse(w.trim())?))
        })
        .collect()
}

fn values_json(f: &ConstructibleFunction) -> Value {
    Value::Array(
        f.support()
            .iter()
            .map(|(s, v)| json!({"simplex": s.vertices(), "value": render(v)}))
            .collect(),
    )
}

fn value_lines(r: &mut Report, f: &ConstructibleFunction) {
    for (s, v) in f.support() {
        r.line(format!("  {s} {}", render(v)));
    }
}

fn verdict(r: &mut Report, ok: bool) {
    r.passed = Some(ok);
    r.line(if ok { "PASS" } else { "FAIL" });
}

struct Ctx<'a> {
    ws: &'a Workspace,
    seed: u64,
    trials: Option<usize>,
}

impl Ctx<'_> {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn function(&self, name: &str) -> Result<&ConstructibleFunction> {
        self.ws
            .functions
            .get(name)
            .map(|e| &e.value)
            .ok_or_else(|| unknown("function", name))
    }

    fn chart(&self, name: &str) -> Result<&Arc<EmbeddedChart>> {
        self.ws
            .charts
            .get(name)
            .map(|e| &e.value)
            .ok_or_else(|| unknown("chart", name))
    }

    fn table(&self, name: &str) -> Result<&LagrangianCycleTable> {
        self.ws
            .tables
            .get(name)
            .map(|e| &e.value)
            .ok_or_else(|| unknown("table", name))
    }

    fn action(&self, name: &str) -> Result<&Arc<GroupAction>> {
        self.ws
            .actions
            .get(name)
            .map(|e| &e.value)
            .ok_or_else(|| unknown("action", name))
    }

    fn open_set(&self, name: &str) -> Result<&OpenSet> {
        self.ws
            .open_sets
            .get(name)
            .map(|e| &e.value)
            .ok_or_else(|| unknown("open set", name))
    }

    fn info(&self, name: Option<&str>) -> Result<Report> {
        let mut r = Report::new("info");
        let ws = self.ws;
        let mut objects = Vec::new();
        for (n, k) in &ws.complexes {
            objects.push((
                n,
                "complex",
                format!("f-vector {:?}, χ = {}", k.f_vector(), render(&k.euler_characteristic())),
                json!({"kind": "complex", "f_vector": k.f_vector(), "simplices": k.len()}),
            ));
        }
        for (n, e) in &ws.functions {
            let f = &e.value;
            objects.push((n, "function", format!("on {}, {} support simplices, ∫ = {}", e.parent, f.support().len(), render(&f.euler_integral())), json!({"kind": "function", "complex": e.parent, "support": f.support().len(), "integral": render(&f.euler_integral())})));
        }
        for (n, e) in &ws.actions {
            let reg = check_regularity(&e.value);
            objects.push((
                n,
                "action",
                format!("on {}, order {}, regular: {}", e.parent, e.value.order(), reg.passed()),
                json!({"kind": "action", "complex": e.parent, "order": e.value.order(), "regular": reg.passed()}),
            ));
        }
        for (n, e) in &ws.charts {
            let eq = ws.equivariant.get(n).map(|a| a.parent.clone());
            objects.push((n, "chart", format!("on {} in dimension {}, {} chambers{}", e.parent, e.value.ambient_dim(), e.value.chamber_count()?, eq.as_ref().map(|a| format!(", equivariant for {a}")).unwrap_or_default()), json!({"kind": "chart", "complex": e.parent, "dim": e.value.ambient_dim(), "chambers": e.value.chamber_count()?, "action": eq})));
        }
        for (n, e) in &ws.open_sets {
            objects.push((
                n,
                "open set",
                format!("on {}, {} simplices", e.parent, e.value.members().len()),
                json!({"kind": "open set", "complex": e.parent, "members": e.value.members().len()}),
            ));
        }
        for (n, e) in &ws.covers {
            objects.push((
                n,
                "cover",
                format!(
                    "on {}, sets of {} and {} simplices",
                    e.parent,
                    e.value.0.members().len(),
                    e.value.1.members().len()
                ),
                json!({"kind": "cover", "complex": e.parent}),
            ));
        }
        for (n, e) in &ws.tables {
            objects.push((
                n,
                "table",
                format!("on {}, {} nonzero entries", e.parent, e.value.entries().len()),
                json!({"kind": "table", "chart": e.parent, "entries": e.value.entries().len()}),
            ));
        }
        objects.sort_by(|a, b| a.0.cmp(b.0));
        if let Some(name) = name {
            objects.retain(|o| o.0 == name);
            if objects.is_empty() {
                return Err(unknown("object", name));
            }
        }
        let mut out = serde_json::Map::new();
        for (n, kind, text, data) in objects {
            r.line(format!("{n} ({kind}): {text}"));
            out.insert(n.clone(), data);
        }
        r.result = Value::Object(out);
        Ok(r)
    }

    fn integrate(&self, complex: &str, function: &str) -> Result<Report> {
        let e = self
            .ws
            .functions
            .get(function)
            .ok_or_else(|| unknown("function", function))?;
        self.ws.complex(complex)?;
        if e.parent != complex {
            return Err(Error::Invalid {
                object: function.into(),
                reason: format!("lives on {:?}, not {complex:?}", e.parent),
            });
        }
        let a = e.value.euler_integral();
        let b = e.value.euler_integral_by_level_sets();
        let mut r = Report::new("integrate");
        r.line(render(&a));
        r.result = json!({"integral": render(&a), "by_level_sets": render(&b)});
        if a != b {
            r.line(format!("level-set integral disagrees: {}", render(&b)));
            r.passed = Some(false);
        }
        Ok(r)
    }

    fn morse_eval(&self, a: &MorseArgs) -> Result<Report> {
        let f = self.function(&a.function)?;
        let order = match (&a.weights, &a.chart, &a.covector) {
            (Some(w), _, _) => VertexOrder::new(parse_weights(w)?)?,
            (None, Some(c), Some(xi)) => {
                let chart = self.chart(c)?;
                if chart.complex() != f.complex() {
                    return Err(Error::ComplexMismatch);
                }
                chart.check_generic(&parse_rationals(xi)?)?
            }
            _ => VertexOrder::random(f.complex(), &mut ChaCha8Rng::seed_from_u64(self.seed)),
        };
        let total = morse_evaluate(f, &order)?;
        let mut indices = serde_json::Map::new();
        for v in f.complex().vertices() {
            indices.insert(v.to_string(), json!(render(&local_index(f, *v, &order)?)));
        }
        let mut r = Report::new("morse-eval");
        r.line(render(&total));
        r.result = json!({
            "value": render(&total),
            "weights": order.weights().iter().map(|(v, w)| (v.to_string(), json!(render(w)))).collect::<serde_json::Map<_, _>>(),
            "local_indices": indices,
        });
        Ok(r)
    }

    fn cc(&self, function: &str, chart: &str) -> Result<Report> {
        let t = cc(self.function(function)?, self.chart(chart)?)?;
        let mut r = Report::new("cc");
        r.line(format!("{} nonzero chamber multiplicities", t.entries().len()));
        for ((s, e), m) in t.entries() {
            let signs = if e.is_empty() { ".".to_string() } else { e.to_string() };
            r.line(format!("  {s} {signs} {}", render(m)));
        }
        r.result = io::table_json(&t, chart);
        Ok(r)
    }

    fn cc_inverse(&self, table: &str) -> Result<Report> {
        let f = cc_inverse(self.table(table)?)?;
        let mut r = Report::new("cc-inverse");
        r.line(format!("{} support simplices", f.support().len()));
        value_lines(&mut r, &f);
        r.result = json!({"values": values_json(&f)});
        Ok(r)
    }

    fn intersect(&self, table: &str, covector: Option<&str>) -> Result<Report> {
        let t = self.table(table)?;
        let xi = covector.map(parse_rationals).transpose()?;
        let v = intersect_zero_section(t, xi.as_deref())?;
        let mut r = Report::new("intersect");
        r.line(render(&v));
        r.result = json!({"value": render(&v)});
        Ok(r)
    }

    fn cover(&self, name: &str) -> Result<&(OpenSet, OpenSet)> {
        self.ws
            .covers
            .get(name)
            .map(|e| &e.value)
            .ok_or_else(|| unknown("cover", name))
    }

    fn mv_split(&self, a: &SplitArgs) -> Result<Report> {
        let f = self.function(&a.function)?;
        let (u, v) = match (&a.cover, &a.u, &a.v) {
            (Some(c), _, _) => self.cover(c)?.clone(),
            (None, Some(u), Some(v)) => (self.open_set(u)?.clone(), self.open_set(v)?.clone()),
            _ => {
                return Err(Error::Invalid {
                    object: "mv-split".into(),
                    reason: "give --cover or both --u and --v".into(),
                })
            }
        };
        let split = mv_split(f, &u, &v)?;
        let (iu, iv) = (split.f_u.euler_integral(), split.f_v.euler_integral());
        let mut r = Report::new("mv-split");
        r.line(format!("subdivisions: {}", split.subdivision.depth()));
        r.line(format!(
            "∫f_U = {}, ∫f_V = {}, ∫f = {}",
            render(&iu),
            render(&iv),
            render(&f.euler_integral())
        ));
        let fu = split.f_u.extend_by_zero()?;
        let fv = split.f_v.extend_by_zero()?;
        r.result = json!({
            "subdivisions": split.subdivision.depth(),
            "f_u": values_json(&fu),
            "f_v": values_json(&fv),
            "integral_u": render(&iu),
            "integral_v": render(&iv),
        });
        let ok = split.reassemble()? == f.pullback_subdivision(&split.subdivision)? && iu + iv == f.euler_integral();
        if !ok {
            r.passed = Some(false);
            r.line("reassembly failed");
        }
        Ok(r)
    }

    fn regular_quotient(&self, action: &str) -> Result<(Regularized, QuotientData)> {
        let reg = regularize(self.action(action)?)?;
        let qd = quotient(&reg.action)?;
        Ok((reg, qd))
    }

    fn quotient(&self, action: &str) -> Result<Report> {
        let (reg, qd) = self.regular_quotient(action)?;
        let mut r = Report::new("quotient");
        r.line(format!("subdivisions: {}", reg.subdivision.depth()));
        r.line(format!("group order: {}", reg.action.order()));
        r.line(format!("coarse f-vector: {:?}", qd.coarse().f_vector()));
        let mut stab = Vec::new();
        for cs in qd.coarse().simplices() {
            let k = qd.coarse_stabilizer_order(cs)?;
            r.line(format!("  {cs} |G| = {k}, fiber {}", qd.fiber(cs)?.len()));
            stab.push(json!({"simplex": cs.vertices(), "stabilizer_order": k, "fiber": qd.fiber(cs)?.len()}));
        }
        r.result = json!({
            "subdivisions": reg.subdivision.depth(),
            "group_order": reg.action.order(),
            "coarse": io::complex_json(qd.coarse()),
            "stabilizers": stab,
        });
        Ok(r)
    }

    fn pushforward(&self, function: &str, action: &str, fiber_sum: bool) -> Result<Report> {
        let f = self.function(function)?;
        let (reg, qd) = self.regular_quotient(action)?;
        let h = f.pullback_subdivision(&reg.subdivision)?;
        let c = class_of(&h, &reg.action)?;
        let p = if fiber_sum {
            pushforward_fiber_sum(&c, &qd)?
        } else {
            pushforward_p(&c, &qd)?
        };
        let mut r = Report::new("pushforward");
        r.line(format!("convention: {}", if fiber_sum { "fiber sum" } else { "norm" }));
        value_lines(&mut r, &p);
        r.result = json!({
            "convention": if fiber_sum { "fiber-sum" } else { "norm" },
            "subdivisions": reg.subdivision.depth(),
            "coarse": io::complex_json(qd.coarse()),
            "values": values_json(&p),
        });
        Ok(r)
    }

    fn iota(&self, action: &str) -> Result<Report> {
        let (_, qd) = self.regular_quotient(action)?;
        let i = iota(&qd);
        let mut r = Report::new("iota");
        value_lines(&mut r, &i);
        r.result = json!({"coarse": io::complex_json(qd.coarse()), "values": values_json(&i)});
        Ok(r)
    }

    fn verify(&self, check: &Check) -> Result<Report> {
        match check {
            Check::Index { chart, orders } => self.verify_index(chart, *orders),
            Check::OrbifoldIndex { action, complex, chart } => {
                self.verify_orbifold_index(action, complex.as_deref(), chart.as_deref())
            }
            Check::Cosheaf { cover, chart } => self.verify_cosheaf(cover, chart.as_deref()),
            Check::Norm { action } => self.verify_norm(action),
            Check::Chambers { chart, convex } => self.verify_chambers(chart, *convex),
            Check::All => self.verify_all(),
        }
    }

    fn verify_index(&self, chart_name: &str, orders: usize) -> Result<Report> {
        let chart = self.chart(chart_name)?;
        let k = chart.complex();
        let trials = self.trials(100);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (mut index_ok, mut round_trip, mut injective, mut vertex_mults) = (0, 0, 0, 0);
        let mut failures = Vec::new();
        let mut samples = Vec::new();
        for t in 0..trials {
            let f = sample::function(k, &mut rng);
            let integral = f.euler_integral();
            let table = cc(&f, chart)?;
            let xi = chart.generic_covector(rng.gen());
            let meet = intersect_zero_section(&table, Some(&xi))?;
            let mut morse_all = true;
            for _ in 0..orders {
                morse_all &= morse_evaluate(&f, &VertexOrder::random(k, &mut rng))? == integral;
            }
            let heights = chart.check_generic(&xi)?;
            morse_all &= morse_evaluate(&f, &heights)? == meet;
            if morse_all && meet == integral && f.euler_integral_by_level_sets() == integral {
                index_ok += 1;
            } else {
                failures.push(format!("trial {t}: ∫ = {}, ∩ζ = {}", render(&integral), render(&meet)));
            }
            if cc_inverse(&table)? == f {
                round_trip += 1;
            } else {
                failures.push(format!("trial {t}: cc_inverse(cc f) ≠ f"));
            }
            if table.is_zero() == f.is_zero() {
                injective += 1;
            }
            let mut mults = true;
            for v in k.vertices() {
                let s = Simplex::vertex(*v);
                let ch = chart.chambers(&s)?;
                let e = ch.signs_of(chart, &xi).expect("generic covector");
                mults &= table.get(&s, &e) == local_index(&f, *v, &heights)?;
            }
            if mults {
                vertex_mults += 1;
            } else {
                failures.push(format!("trial {t}: vertex multiplicities differ from local indices"));
            }
            if samples.len() < 5 {
                samples.push(json!([render(&integral), render(&meet)]));
            }
        }
        let mut r = Report::new("verify index");
        r.line(format!("chart {chart_name}: {trials} trials, {orders} orders each"));
        r.line(format!("index formula: {index_ok}/{trials}"));
        r.line(format!("cc round trip: {round_trip}/{trials}"));
        r.line(format!("cc injective: {injective}/{trials}"));
        r.line(format!(
            "vertex multiplicities = local indices: {vertex_mults}/{trials}"
        ));
        for f in failures.iter().take(5) {
            r.line(format!("  {f}"));
        }
        let ok = failures.is_empty() && index_ok == trials && round_trip == trials && injective == trials;
        r.result = json!({
            "chart": chart_name,
            "trials": trials,
            "orders": orders,
            "index_formula": index_ok,
            "round_trip": round_trip,
            "injective": injective,
            "vertex_multiplicities": vertex_mults,
            "samples": samples,
            "failures": failures,
        });
        verdict(&mut r, ok);
        Ok(r)
    }

    fn equivariant_chart(&self, action: &str, chart: Option<&str>) -> Result<&EquivariantChart> {
        let found = match chart {
            Some(c) => self.ws.equivariant.get(c).filter(|e| e.parent == action),
            None => self.ws.equivariant.values().find(|e| e.parent == action),
        };
        found.map(|e| &e.value).ok_or_else(|| Error::Invalid {
            object: action.into(),
            reason: "no chart with matrices for this action".into(),
        })
    }

    fn verify_orbifold_index(&self, action: &str, complex: Option<&str>, chart: Option<&str>) -> Result<Report> {
        let entry = self.ws.actions.get(action).ok_or_else(|| unknown("action", action))?;
        if let Some(c) = complex {
            if entry.parent != c {
                return Err(Error::Invalid {
                    object: action.into(),
                    reason: format!("acts on {:?}, not {c:?}", entry.parent),
                });
            }
        }
        let (eq, reg) = self.equivariant_chart(action, chart)?.regularize()?;
        let qd = quotient(&reg.action)?;
        let trials = self.trials(50);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut triples = Vec::with_capacity(trials);
        let mut passed = 0;
        let mut failures = Vec::new();
        for t in 0..trials {
            let h = sample::function(reg.action.complex(), &mut rng);
            let rep = orbifold_index_check(&h, &eq, &qd, rng.gen())?;
            if rep.passed() {
                passed += 1;
            } else {
                failures.push(format!("trial {t}: {rep:?}"));
            }
            triples.push(json!([
                rep.orbifold_integral,
                rep.coarse_weighted_integral,
                rep.intersection
            ]));
        }
        let mut r = Report::new("verify orbifold-index");
        r.line(format!(
            "action {action}: order {}, {} subdivisions, {trials} trials",
            reg.action.order(),
            reg.subdivision.depth()
        ));
        r.line(format!(
            "∫_X = ∫ p_!·ι = ∩ζ, with cc and ∩ζ equivariant: {passed}/{trials}"
        ));
        for f in failures.iter().take(5) {
            r.line(format!("  {f}"));
        }
        r.result = json!({
            "action": action,
            "group_order": reg.action.order(),
            "subdivisions": reg.subdivision.depth(),
            "trials": trials,
            "passed": passed,
            "triples": triples,
            "failures": failures,
        });
        verdict(&mut r, passed == trials);
        Ok(r)
    }

    fn verify_cosheaf(&self, cover: &str, chart: Option<&str>) -> Result<Report> {
        let entry = self.ws.covers.get(cover).ok_or_else(|| unknown("cover", cover))?;
        let (u, v) = &entry.value;
        let k = self.ws.complex(&entry.parent)?;
        let trials = self.trials(100);
        let mv = verify_mv_exactness(k, u, v, trials, self.seed)?;
        let mut r = Report::new("verify cosheaf");
        r.line(format!("cover {cover}: {trials} trials"));
        r.line(format!("reassembled: {}/{trials}", mv.reassembled));
        r.line(format!("∫ additive: {}/{trials}", mv.integral_additive));
        r.line(format!(
            "agreeing pairs with a preimage in U∩V: {}/{}",
            mv.preimages_found, mv.agreeing_pairs
        ));
        r.line(format!(
            "frontier supports rejected: {}/{}",
            mv.adversarial_rejected, mv.adversarial_cases
        ));
        let mut ok = mv.passed();
        let mut result = json!({"cover": cover, "exactness": mv});
        if let Some(c) = chart {
            let chart = self.chart(c)?;
            let loc = localized_index_verify(chart, u, Some(v), trials, self.seed)?;
            r.line(format!("localized index on U: {}/{trials}", loc.index_agreements));
            r.line(format!("local cc agrees: {}/{trials}", loc.cc_local_agreements));
            r.line(format!(
                "∫ and ∩ζ additive across splits: {}/{trials}",
                loc.additivity_agreements
            ));
            ok &= loc.passed();
            result["localized"] = json!(loc);
        }
        r.result = result;
        verdict(&mut r, ok);
        Ok(r)
    }

    fn verify_norm(&self, action: &str) -> Result<Report> {
        let (reg, qd) = self.regular_quotient(action)?;
        let iso = verify_p_iso(&reg.action, &qd)?;
        let tr = transfer_report(&qd)?;
        let trials = self.trials(100);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let k = reg.action.complex();
        let unit = class_of(&ConstructibleFunction::constant(Arc::clone(k), one()), &reg.action)?;
        let unit_values = (orbifold_integral(&unit), coarse_weighted_integral(&unit, &qd)?);
        let mut weighted = usize::from(unit_values.0 == unit_values.1);
        for _ in 0..trials {
            let c = class_of(&sample::function(k, &mut rng), &reg.action)?;
            weighted += usize::from(orbifold_integral(&c) == coarse_weighted_integral(&c, &qd)?);
        }
        let mut r = Report::new("verify norm");
        r.line(format!(
            "action {action}: order {}, {} subdivisions",
            reg.action.order(),
            reg.subdivision.depth()
        ));
        r.line(format!(
            "p_! matrix {}x{}, rank {}, det {}, invertible: {}",
            iso.coarse_simplices, iso.classes, iso.rank, iso.determinant, iso.invertible
        ));
        r.line(format!(
            "∫[1] = {}, ∫ p_![1]·ι = {}",
            render(&unit_values.0),
            render(&unit_values.1)
        ));
        r.line(format!("weighted coarse integral: {weighted}/{}", trials + 1));
        r.line(format!(
            "p_!∘transfer diagonal: {}, |G|·id: {}, free: {}",
            tr.diagonal && tr.invertible,
            tr.norm_is_group_order,
            tr.free
        ));
        let ok = iso.invertible && weighted == trials + 1 && tr.passed();
        r.result = json!({
            "action": action,
            "subdivisions": reg.subdivision.depth(),
            "p_iso": iso,
            "unit_class": [render(&unit_values.0), render(&unit_values.1)],
            "weighted_integral": weighted,
            "trials": trials + 1,
            "transfer": tr,
        });
        verdict(&mut r, ok);
        Ok(r)
    }

    fn verify_chambers(&self, chart_name: &str, convex: bool) -> Result<Report> {
        let chart = self.chart(chart_name)?;
        let k = chart.complex();
        let mut witnessed = 0usize;
        let mut total = 0usize;
        let mut exhaustive = 0usize;
        let mut skipped = 0usize;
        let mut failures = Vec::new();
        for s in k.simplices() {
            let ch = chart.chambers(s)?;
            let v0 = &chart.coords()[&s.vertices()[0]];
            for c in &ch.chambers {
                total += 1;
                let conormal = s.vertices()[1..].iter().all(|v| {
                    let d: Vec<Q> = chart.coords()[v].iter().zip(v0).map(|(a, b)| a - b).collect();
                    rational::dot(&d, &c.witness).is_zero()
                });
                if conormal && ch.signs_of(chart, &c.witness).as_ref() == Some(&c.signs) {
                    witnessed += 1;
                } else {
                    failures.push(format!("{s} {}: witness fails", c.signs));
                }
            }
            if ch.link.len() > EXHAUSTIVE_LINK_LIMIT {
                skipped += 1;
                continue;
            }
            let (basis, rows) = chart.conormal_system(s, &ch.link);
            let mut found = 0usize;
            let mut agree = true;
            for mask in 0u64..1 << ch.link.len() {
                let a: Vec<Vec<Q>> = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        if mask >> i & 1 == 1 {
                            row.clone()
                        } else {
                            row.iter().map(|x| -x).collect()
                        }
                    })
                    .collect();
                let ans = solve_strict(&a, basis.len());
                agree &= certify(&a, basis.len(), &ans);
                if ans.is_feasible() {
                    found += 1;
                    agree &= ch.chambers.iter().any(|c| c.signs.mask() == mask);
                }
            }
            if agree && found == ch.chambers.len() {
                exhaustive += 1;
            } else {
                failures.push(format!("{s}: enumeration differs from exhaustive search"));
            }
        }
        let mut r = Report::new("verify chambers");
        r.line(format!(
            "chart {chart_name}: {total} chambers over {} simplices",
            k.len()
        ));
        r.line(format!("witnessed: {witnessed}/{total}"));
        r.line(format!(
            "exhaustive cross-check: {exhaustive}/{} ({skipped} skipped)",
            k.len()
        ));
        let mut result = json!({
            "chart": chart_name,
            "chambers": total,
            "witnessed": witnessed,
            "exhaustive": exhaustive,
            "skipped": skipped,
        });
        if convex {
            let f = ConstructibleFunction::constant(Arc::clone(k), one());
            let t = cc(&f, chart)?;
            let poly: Vec<Vec<Q>> = chart.coords().values().cloned().collect();
            let mut matched = 0usize;
            for s in k.simplices() {
                let b = chart.barycenter(s);
                for c in &chart.chambers(s)?.chambers {
                    let want = if in_normal_cone(&poly, &b, &c.witness) {
                        one()
                    } else {
                        Q::zero()
                    };
                    if t.get(s, &c.signs) == want {
                        matched += 1;
                    } else {
                        failures.push(format!("{s} {}: multiplicity {}", c.signs, render(&t.get(s, &c.signs))));
                    }
                }
            }
            r.line(format!("normal cycle matches the cone oracle: {matched}/{total}"));
            result["normal_cycle"] = json!(matched);
        }
        for f in failures.iter().take(5) {
            r.line(format!("  {f}"));
        }
        result["failures"] = json!(failures);
        r.result = result;
        verdict(&mut r, failures.is_empty());
        Ok(r)
    }

    fn verify_all(&self) -> Result<Report> {
        let mut parts = Vec::new();
        for (name, e) in &self.ws.charts {
            parts.push(self.verify_index(name, 10)?);
            let convex = e.value.fills_convex_hull();
            parts.push(self.verify_chambers(name, convex)?);
        }
        for (name, e) in &self.ws.covers {
            let chart = self
                .ws
                .charts
                .iter()
                .find(|(_, c)| c.parent == e.parent)
                .map(|(n, _)| n.as_str());
            parts.push(self.verify_cosheaf(name, chart)?);
        }
        for name in self.ws.actions.keys() {
            parts.push(self.verify_norm(name)?);
            if self.ws.equivariant.values().any(|e| &e.parent == name) {
                parts.push(self.verify_orbifold_index(name, None, None)?);
            }
        }
        let mut r = Report::new("verify all");
        let mut results = Vec::new();
        let mut ok = true;
        for p in parts {
            let pass = p.passed != Some(false);
            ok &= pass;
            r.line(format!(
                "{}: {}",
                p.command,
                p.lines.last().cloned().unwrap_or_default()
            ));
            for l in p.lines.iter().take(1) {
                r.line(format!("  {l}"));
            }
            results.push(p.json());
        }
        r.result = Value::Array(results);
        verdict(&mut r, ok);
        Ok(r)
    }
}

/// Convenience for callers holding a workspace in memory.
pub fn run_in(ws_dir: &std::path::Path, args: &[&str]) -> (i32, String, String) {
    let mut full: Vec<OsString> = vec!["orbindex".into(), "--workspace".into(), ws_dir.into()];
    full.extend(args.iter().map(OsString::from));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}
