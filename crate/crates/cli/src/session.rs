//! Statement evaluation, session state, reports and session files.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use closure_core::closure::{
    check_colon_capturing, check_faithfulness, check_functoriality, check_generalized_colon_capturing,
    check_semi_residuality, dietz_obstruction, is_trivial_on_sample, phantom_test, CheckOutcome,
    ClosureCertificate, ClosureOp, ColonVariant, PhantomInstance,
};
use closure_core::fpmod::{FPModule, MembershipCertificate, ModuleMap, RegularityFailure, Submodule};
use closure_core::gb::FreeElem;
use closure_core::modify::{find_bad_relation, image_of_one_in_m, ModificationTrace, Policy};
use closure_core::polyarith::{Field, Monomial, MonomialOrder, PolyExpr, PolyRing, Polynomial};
use closure_core::ring::{DomainStatus, ParameterSequence, QuotientRing};
use closure_core::ParseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::ast::{ExportFormat, Expr, FieldSpec, OrderSpec, RingDef, Statement, Stmt};
use crate::parser::parse;

pub const SCHEMA_VERSION: u32 = 1;
const SESSION_HEADER: &str = "# closure-lab session v";

#[derive(Clone, Debug)]
pub struct Options {
    /// Degree bound when searching for bad relations.
    pub deg_bound: i64,
    /// Seed for `sample(...)` ideal families.
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { deg_bound: 12, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Ring(QuotientRing),
    Module(FPModule),
    Submodule(Submodule),
    Map(ModuleMap),
    Closure(ClosureOp),
    Trace(ModificationTrace),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Ring(_) => "ring",
            Value::Module(_) => "module",
            Value::Submodule(_) => "submodule",
            Value::Map(_) => "map",
            Value::Closure(_) => "closure",
            Value::Trace(_) => "trace",
        }
    }

    /// Canonical description, used for display and digests.
    pub fn describe(&self) -> Json {
        match self {
            Value::Ring(r) => r.descriptor(),
            Value::Module(m) => m.descriptor(),
            Value::Submodule(n) => json!({
                "module": n.module().descriptor(),
                "gens": n.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "basis": n.canonical_gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            }),
            Value::Map(f) => json!({
                "source": f.source().descriptor(),
                "target": f.target().descriptor(),
                "matrix": f.matrix().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            }),
            Value::Closure(c) => json!(c.to_string()),
            Value::Trace(t) => t.to_json().unwrap_or(Json::Null),
        }
    }

    fn summary(&self) -> String {
        match self {
            Value::Ring(r) => {
                let domain = match r.domain_status() {
                    DomainStatus::ByConstruction => "",
                    DomainStatus::Assumed => ", assumed to be a domain (unchecked)",
                };
                format!("ring {r}, dim {}{domain}", r.dim())
            }
            Value::Module(m) => m.to_string(),
            Value::Submodule(n) => format!("submodule {n}"),
            Value::Map(f) => {
                let cols: Vec<String> = f.matrix().iter().map(|c| c.to_string()).collect();
                format!("map with images {}", cols.join(", "))
            }
            Value::Closure(c) => format!("closure {c}"),
            Value::Trace(t) => trace_summary(t),
        }
    }
}

fn trace_summary(t: &ModificationTrace) -> String {
    let flags: Vec<String> = t
        .stages()
        .iter()
        .skip(1)
        .map(|s| match s.phantom {
            Some(true) => "phantom".to_string(),
            Some(false) => "not phantom".to_string(),
            None => "unchecked".to_string(),
        })
        .collect();
    format!(
        "trace of {} steps [{}]; image of 1 in mM: {}; current {}",
        t.len(),
        flags.join(", "),
        image_of_one_in_m(t),
        t.current()
    )
}

/// What a statement produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub result: Json,
    pub text: String,
    /// `Some` for checks with a yes/no answer.
    pub verdict: Option<bool>,
    pub witness: Option<String>,
    pub certificate: Option<Json>,
}

impl Outcome {
    fn info(result: Json, text: impl Into<String>) -> Self {
        Outcome {
            result,
            text: text.into(),
            verdict: None,
            witness: None,
            certificate: None,
        }
    }

    fn verdict(holds: bool, text: impl Into<String>) -> Self {
        Outcome {
            result: json!(holds),
            text: text.into(),
            verdict: Some(holds),
            witness: None,
            certificate: None,
        }
    }

    fn from_check(out: CheckOutcome) -> Self {
        let mut o = Outcome::verdict(out.holds, out.to_string());
        o.witness = out.witness.map(|w| w.to_string());
        o
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub stmt: Stmt,
    pub outcome: Outcome,
    pub millis: f64,
}

#[derive(Debug)]
pub enum CliError {
    Parse { err: ParseError, source: String },
    Eval { line: usize, src: String, message: String },
    Io(String),
    Session(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { err, source } => write!(f, "syntax error at {}", err.render(source)),
            CliError::Eval { line, src, message } => write!(f, "line {line}: {src}\n  error: {message}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Session(m) => write!(f, "session error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

type R<T> = std::result::Result<T, String>;

fn core<T>(r: closure_core::Result<T>) -> R<T> {
    r.map_err(|e| e.to_string())
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    env: BTreeMap<String, Value>,
    current_ring: Option<String>,
    log: Vec<Entry>,
    options: Options,
}

impl Session {
    pub fn new(options: Options) -> Session {
        Session {
            options,
            ..Session::default()
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.env.get(name)
    }

    pub fn log(&self) -> &[Entry] {
        &self.log
    }

    /// Parses and evaluates `src`, stopping at the first error.
    pub fn run(&mut self, src: &str) -> Result<(), CliError> {
        let stmts = parse(src).map_err(|err| CliError::Parse {
            err,
            source: src.to_string(),
        })?;
        for s in &stmts {
            self.eval(s)?;
        }
        Ok(())
    }

    pub fn eval(&mut self, st: &Statement) -> Result<&Entry, CliError> {
        let start = Instant::now();
        let outcome = self.eval_stmt(&st.stmt).map_err(|message| CliError::Eval {
            line: st.line,
            src: st.stmt.to_string(),
            message,
        })?;
        self.log.push(Entry {
            stmt: st.stmt.clone(),
            outcome,
            millis: start.elapsed().as_secs_f64() * 1000.0,
        });
        Ok(self.log.last().expect("just pushed"))
    }

    /// `true` when no check answered no.
    pub fn all_passed(&self) -> bool {
        self.log.iter().all(|e| e.outcome.verdict != Some(false))
    }

    /// SHA-256 over the canonical descriptions of every bound name.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (name, v) in &self.env {
            h.update(format!("{name}\t{}\t{}\n", v.kind(), v.describe()));
        }
        h.update(format!("current\t{}\n", self.current_ring.as_deref().unwrap_or("")));
        format!("{:x}", h.finalize())
    }

    /// JSON report; everything except `timings` is deterministic.
    pub fn report(&self) -> Json {
        let statements: Vec<Json> = self
            .log
            .iter()
            .map(|e| {
                let mut o = json!({
                    "src": e.stmt.to_string(),
                    "kind": e.stmt.kind(),
                    "result": e.outcome.result,
                });
                if let Some(w) = &e.outcome.witness {
                    o["witness"] = json!(w);
                }
                if let Some(c) = &e.outcome.certificate {
                    o["certificate"] = c.clone();
                }
                o
            })
            .collect();
        json!({
            "version": SCHEMA_VERSION,
            "digest": self.digest(),
            "statements": statements,
            "timings": self.log.iter().map(|e| (e.millis * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.log {
            out.push_str(&format!("{}\n  => {}\n", e.stmt, e.outcome.text));
        }
        out
    }

    /// Replayable script of every state-changing statement, under a version
    /// and digest header.
    pub fn save_string(&self) -> String {
        let mut out = format!("{SESSION_HEADER}{SCHEMA_VERSION}\n# digest {}\n", self.digest());
        for e in &self.log {
            if !matches!(e.stmt, Stmt::Export { .. }) {
                out.push_str(&format!("{}\n", e.stmt));
            }
        }
        out
    }

    pub fn save(&self, path: &str) -> Result<(), CliError> {
        std::fs::write(path, self.save_string()).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }

    /// Replays a saved session and checks its digest.
    pub fn load_string(text: &str, options: Options) -> Result<Session, CliError> {
        let mut session = Session::new(options);
        if text.trim().is_empty() {
            return Ok(session);
        }
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        let version = header
            .strip_prefix(SESSION_HEADER)
            .ok_or_else(|| CliError::Session("missing session header".into()))?;
        if version.trim() != SCHEMA_VERSION.to_string() {
            return Err(CliError::Session(format!(
                "unsupported session version {} (expected {SCHEMA_VERSION})",
                version.trim()
            )));
        }
        let digest = lines
            .next()
            .and_then(|l| l.strip_prefix("# digest "))
            .ok_or_else(|| CliError::Session("missing digest line".into()))?
            .trim()
            .to_string();
        session.run(text)?;
        if session.digest() != digest {
            return Err(CliError::Session(format!(
                "digest mismatch after replay: file has {digest}, replay gives {}",
                session.digest()
            )));
        }
        Ok(session)
    }

    pub fn load(path: &str, options: Options) -> Result<Session, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        Self::load_string(&text, options)
    }

    fn bind(&mut self, name: &str, v: Value) -> Outcome {
        let out = Outcome::info(json!(v.summary()), format!("{name}: {}", v.summary()));
        self.env.insert(name.to_string(), v);
        out
    }

    fn eval_stmt(&mut self, stmt: &Stmt) -> R<Outcome> {
        match stmt {
            Stmt::Ring { name, def } => {
                let r = build_ring(def)?;
                let out = self.bind(name, Value::Ring(r));
                self.current_ring = Some(name.clone());
                Ok(out)
            }
            Stmt::Use { ring } => match self.env.get(ring) {
                Some(Value::Ring(r)) => {
                    let text = format!("using {r}");
                    self.current_ring = Some(ring.clone());
                    Ok(Outcome::info(json!(text), text))
                }
                _ => Err(format!("`{ring}` is not a ring")),
            },
            Stmt::Ideal { name, gens } => {
                let r = self.ring()?;
                let gens = gens.iter().map(|g| to_poly(&r, g)).collect::<R<Vec<_>>>()?;
                let n = core(Submodule::ideal(&r, &gens))?;
                Ok(self.bind(name, Value::Submodule(n)))
            }
            Stmt::Module { name, expr } => {
                let m = self.module(expr)?;
                Ok(self.bind(name, Value::Module(m)))
            }
            Stmt::Submodule { name, expr } => {
                let n = self.submodule(expr)?;
                Ok(self.bind(name, Value::Submodule(n)))
            }
            Stmt::Map { name, expr } => {
                let f = self.map(expr)?;
                Ok(self.bind(name, Value::Map(f)))
            }
            Stmt::Closure { name, expr } => {
                let c = self.closure(expr)?;
                Ok(self.bind(name, Value::Closure(c)))
            }
            Stmt::Modify { name, expr } => {
                let t = self.trace(expr)?;
                let mut out = self.bind(name, Value::Trace(t.clone()));
                out.result = core(t.to_json())?;
                Ok(out)
            }
            Stmt::Show { expr } => self.show(expr),
            Stmt::Check { func, args } => self.check(func, args),
            Stmt::Export { format, path } => {
                match format {
                    ExportFormat::Json => {
                        let text = serde_json::to_string_pretty(&self.report()).map_err(|e| e.to_string())?;
                        std::fs::write(path, text + "\n").map_err(|e| format!("{path}: {e}"))?;
                    }
                    ExportFormat::Session => {
                        std::fs::write(path, self.save_string()).map_err(|e| format!("{path}: {e}"))?;
                    }
                }
                Ok(Outcome::info(json!(path), format!("wrote {path}")))
            }
        }
    }

    fn ring(&self) -> R<QuotientRing> {
        let name = self.current_ring.as_ref().ok_or("no ring defined yet")?;
        match self.env.get(name) {
            Some(Value::Ring(r)) => Ok(r.clone()),
            _ => Err(format!("`{name}` is no longer a ring")),
        }
    }

    fn value(&self, e: &Expr) -> Option<&Value> {
        e.name().and_then(|n| self.env.get(n))
    }

    fn wrong_kind(&self, e: &Expr, wanted: &str) -> String {
        match self.value(e) {
            Some(v) => format!("`{e}` is a {}, expected a {wanted}", v.kind()),
            None => format!("expected a {wanted}, found `{e}`"),
        }
    }

    fn poly(&self, e: &Expr) -> R<Polynomial> {
        let r = self.ring()?;
        match e {
            Expr::Poly(p) => {
                if let Some(v) = self.value(e) {
                    if r.poly().var_index(e.name().unwrap_or("")).is_none() {
                        return Err(format!("`{e}` is a {}, expected a polynomial", v.kind()));
                    }
                }
                to_poly(&r, p)
            }
            _ => Err(self.wrong_kind(e, "polynomial")),
        }
    }

    fn int(&self, e: &Expr) -> R<i64> {
        match e {
            Expr::Poly(PolyExpr::Int(n)) => n.to_string().parse().map_err(|_| format!("{n} is too large")),
            Expr::Poly(PolyExpr::Neg(inner)) => match &**inner {
                PolyExpr::Int(n) => n.to_string().parse::<i64>().map(|v| -v).map_err(|_| format!("{n} is too large")),
                _ => Err(format!("expected an integer, found `{e}`")),
            },
            _ => Err(format!("expected an integer, found `{e}`")),
        }
    }

    fn ints(&self, e: &Expr) -> R<Vec<i64>> {
        match e {
            Expr::List(items) => items.iter().map(|i| self.int(i)).collect(),
            _ => Err(format!("expected a list of integers, found `{e}`")),
        }
    }

    /// A list of polynomials, or the generators of a named ideal.
    fn polys(&self, e: &Expr) -> R<Vec<Polynomial>> {
        match e {
            Expr::List(items) => items.iter().map(|i| self.poly(i)).collect(),
            _ => {
                let n = self.submodule(e)?;
                if n.module().ngens() != 1 {
                    return Err(format!("`{e}` is not an ideal"));
                }
                Ok(n.ideal_gens())
            }
        }
    }

    fn params(&self, e: &Expr) -> R<ParameterSequence> {
        Ok(ParameterSequence::new(&self.ring()?, self.polys(e)?))
    }

    fn vector(&self, e: &Expr, m: &FPModule) -> R<FreeElem> {
        let v = match e {
            Expr::List(items) => {
                let comps = items.iter().map(|i| self.poly(i)).collect::<R<Vec<_>>>()?;
                core(FreeElem::new(m.ring().poly(), comps))?
            }
            Expr::Call(f, args) if f == "gen" => {
                let [mm, i] = args.as_slice() else {
                    return Err("gen takes a module and an index".into());
                };
                let mm = self.module(mm)?;
                let i = self.int(i)? as usize;
                if i >= mm.ngens() {
                    return Err(format!("generator index {i} out of range"));
                }
                mm.gen(i)
            }
            _ => FreeElem::from_poly(self.poly(e)?),
        };
        core(m.check_elem(&v))?;
        Ok(v)
    }

    fn module(&self, e: &Expr) -> R<FPModule> {
        match (self.value(e), e) {
            (Some(Value::Module(m)), _) => return Ok(m.clone()),
            (Some(Value::Ring(r)), _) => return Ok(FPModule::ring_module(r)),
            (Some(Value::Trace(t)), _) => return Ok(t.current().clone()),
            (Some(Value::Submodule(n)), _) => return core(n.as_module()),
            (Some(_), _) => return Err(self.wrong_kind(e, "module")),
            (None, Expr::Poly(PolyExpr::Var(v))) if v == "residue_field" => {
                return Ok(FPModule::residue_field(&self.ring()?))
            }
            _ => {}
        }
        let Expr::Call(f, args) = e else {
            return Err(self.wrong_kind(e, "module"));
        };
        let r = self.ring()?;
        let arity = |n: usize| -> R<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("{f} takes {n} argument(s), got {}", args.len()))
            }
        };
        match f.as_str() {
            "free" => {
                arity(1)?;
                Ok(FPModule::free(&r, self.ints(&args[0])?))
            }
            "ring_module" => {
                arity(0)?;
                Ok(FPModule::ring_module(&r))
            }
            "residue_field" => {
                arity(0)?;
                Ok(FPModule::residue_field(&r))
            }
            "ideal_module" => {
                arity(1)?;
                core(FPModule::ideal(&r, &self.polys(&args[0])?))
            }
            "cyclic" => {
                arity(1)?;
                core(FPModule::cyclic(&r, &self.polys(&args[0])?))
            }
            "syz" => {
                arity(2)?;
                let d = self.int(&args[1])?;
                if d < 0 {
                    return Err("syzygy index must be non-negative".into());
                }
                core(self.module(&args[0])?.syzygy(d as usize))
            }
            "monomial_module" => {
                arity(1)?;
                let images = r
                    .subring_images()
                    .ok_or("monomial_module needs a ring defined with subring(...)")?;
                let ambient = images[0].ring().clone();
                let Expr::List(items) = &args[0] else {
                    return Err("monomial_module takes a list of monomials".into());
                };
                let gens = items
                    .iter()
                    .map(|i| match i {
                        Expr::Poly(p) => core(p.to_polynomial(&ambient)),
                        other => Err(format!("expected a monomial, found `{other}`")),
                    })
                    .collect::<R<Vec<_>>>()?;
                core(FPModule::monomial_module(&r, &gens))
            }
            "presentation" => {
                arity(2)?;
                let degrees = self.ints(&args[0])?;
                let free = FPModule::free(&r, degrees.clone());
                let Expr::List(cols) = &args[1] else {
                    return Err("presentation takes a list of relation columns".into());
                };
                let cols = cols.iter().map(|c| self.vector(c, &free)).collect::<R<Vec<_>>>()?;
                core(FPModule::new(&r, degrees, cols))
            }
            "direct_sum" => {
                let parts = args.iter().map(|a| self.module(a)).collect::<R<Vec<_>>>()?;
                core(FPModule::direct_sum_all(&r, &parts))
            }
            "tensor" => {
                arity(2)?;
                core(self.module(&args[0])?.tensor(&self.module(&args[1])?))
            }
            "quotient" => {
                arity(1)?;
                core(self.submodule(&args[0])?.quotient_module())
            }
            "minimal" => {
                arity(1)?;
                Ok(self.module(&args[0])?.minimal_presentation())
            }
            _ => Err(format!("unknown module constructor `{f}`")),
        }
    }

    fn submodule(&self, e: &Expr) -> R<Submodule> {
        match self.value(e) {
            Some(Value::Submodule(n)) => return Ok(n.clone()),
            Some(_) => return Err(self.wrong_kind(e, "submodule")),
            None => {}
        }
        let Expr::Call(f, args) = e else {
            return Err(self.wrong_kind(e, "submodule"));
        };
        let arity = |n: usize| -> R<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("{f} takes {n} argument(s), got {}", args.len()))
            }
        };
        match f.as_str() {
            "sub" => {
                arity(2)?;
                let m = self.module(&args[0])?;
                let Expr::List(items) = &args[1] else {
                    return Err("sub takes a module and a list of elements".into());
                };
                let gens = items.iter().map(|i| self.vector(i, &m)).collect::<R<Vec<_>>>()?;
                core(Submodule::new(&m, gens))
            }
            "closure" => {
                arity(2)?;
                core(self.closure(&args[0])?.compute(&self.submodule(&args[1])?))
            }
            "times" => {
                arity(2)?;
                Ok(Submodule::ideal_times(&self.module(&args[1])?, &self.polys(&args[0])?))
            }
            "max_ideal" => {
                arity(1)?;
                Ok(Submodule::max_ideal_times(&self.module(&args[0])?))
            }
            "whole" => {
                arity(1)?;
                Ok(Submodule::whole(&self.module(&args[0])?))
            }
            "zero" => {
                arity(1)?;
                Ok(Submodule::zero(&self.module(&args[0])?))
            }
            "sum" => {
                arity(2)?;
                core(self.submodule(&args[0])?.sum(&self.submodule(&args[1])?))
            }
            "cap" => {
                arity(2)?;
                core(self.submodule(&args[0])?.intersect(&self.submodule(&args[1])?))
            }
            "colon" => {
                arity(2)?;
                core(self.submodule(&args[0])?.colon(&self.poly(&args[1])?))
            }
            "image" => match args.len() {
                1 => Ok(self.map(&args[0])?.image()),
                2 => Ok(self.map(&args[0])?.image_of(&self.submodule(&args[1])?)),
                n => Err(format!("image takes 1 or 2 arguments, got {n}")),
            },
            "kernel" => {
                arity(1)?;
                core(self.map(&args[0])?.kernel())
            }
            _ => Err(format!("unknown submodule constructor `{f}`")),
        }
    }

    fn map(&self, e: &Expr) -> R<ModuleMap> {
        match self.value(e) {
            Some(Value::Map(f)) => return Ok(f.clone()),
            Some(_) => return Err(self.wrong_kind(e, "map")),
            None => {}
        }
        let Expr::Call(f, args) = e else {
            return Err(self.wrong_kind(e, "map"));
        };
        match (f.as_str(), args.as_slice()) {
            ("hom", [s, t, Expr::List(images)]) => {
                let s = self.module(s)?;
                let t = self.module(t)?;
                let images = images.iter().map(|i| self.vector(i, &t)).collect::<R<Vec<_>>>()?;
                core(ModuleMap::new(&s, &t, images))
            }
            ("identity", [m]) => Ok(ModuleMap::identity(&self.module(m)?)),
            ("quotient_map", [n]) => core(ModuleMap::quotient_map(&self.submodule(n)?)),
            ("then", [a, b]) => core(self.map(a)?.then(&self.map(b)?)),
            _ => Err(format!("cannot build a map from `{e}`")),
        }
    }

    fn closure(&self, e: &Expr) -> R<ClosureOp> {
        match (self.value(e), e) {
            (Some(Value::Closure(c)), _) => return Ok(c.clone()),
            (Some(_), _) => return Err(self.wrong_kind(e, "closure")),
            (None, Expr::Poly(PolyExpr::Var(v))) if v == "trivial" => return Ok(ClosureOp::Trivial),
            (None, Expr::Poly(PolyExpr::Var(v))) if v == "integral_closure" => {
                return Ok(ClosureOp::MonomialIntegralClosure)
            }
            _ => {}
        }
        let Expr::Call(f, args) = e else {
            return Err(self.wrong_kind(e, "closure"));
        };
        match (f.as_str(), args.as_slice()) {
            ("module_closure", [s]) => core(ClosureOp::module_closure(&self.module(s)?)),
            ("direct_sum_closure", [s, t]) => {
                core(ClosureOp::direct_sum_closure(&self.module(s)?, &self.module(t)?))
            }
            ("intersect", parts) if !parts.is_empty() => {
                let ops = parts.iter().map(|p| self.closure(p)).collect::<R<Vec<_>>>()?;
                Ok(if ops.len() == 1 {
                    ops[0].clone()
                } else {
                    ClosureOp::Intersection(ops)
                })
            }
            _ => Err(format!("cannot build a closure from `{e}`")),
        }
    }

    fn trace(&self, e: &Expr) -> R<ModificationTrace> {
        match self.value(e) {
            Some(Value::Trace(t)) => return Ok(t.clone()),
            Some(_) => return Err(self.wrong_kind(e, "trace")),
            None => {}
        }
        let Expr::Call(f, args) = e else {
            return Err(self.wrong_kind(e, "trace"));
        };
        match (f.as_str(), args.as_slice()) {
            ("root", [m]) => Ok(ModificationTrace::root(&self.module(m)?)),
            ("parameter", [t, cl, xs]) => {
                let t = self.trace(t)?;
                let cl = self.closure(cl)?;
                let xs = self.params(xs)?;
                let rel = core(find_bad_relation(t.current(), &xs, self.options.deg_bound))?.ok_or_else(|| {
                    format!("no bad relation of degree at most {} on the current stage", self.options.deg_bound)
                })?;
                core(t.apply_parameter(&rel, &cl))
            }
            ("containment", [t, cl, g, v, x]) => {
                let t = self.trace(t)?;
                let cl = self.closure(cl)?;
                let g = self.submodule(g)?;
                let v = self.vector(v, g.module())?;
                let x = self.vector(x, t.current())?;
                core(t.apply_containment(&cl, &g, &v, &x))
            }
            ("grow", [t, cl, xs, steps, rest @ ..]) if rest.len() <= 1 => {
                let policy = match rest.first().and_then(|p| p.name()) {
                    None | Some("by_degree") => Policy::ByDegree,
                    Some("round_robin") => Policy::RoundRobin,
                    Some(other) => return Err(format!("unknown policy `{other}`")),
                };
                let steps = self.int(steps)?.max(0) as usize;
                core(self.trace(t)?.grow(
                    &self.closure(cl)?,
                    &self.params(xs)?,
                    steps,
                    self.options.deg_bound,
                    policy,
                ))
            }
            _ => Err(format!("cannot build a modification trace from `{e}`")),
        }
    }

    fn show(&self, e: &Expr) -> R<Outcome> {
        if let Some(v) = self.value(e) {
            if !matches!(v, Value::Ring(_)) || self.ring()?.poly().var_index(e.name().unwrap_or("")).is_none() {
                return Ok(Outcome::info(v.describe(), v.summary()));
            }
        }
        let v = match e {
            Expr::Call(f, _) => match f.as_str() {
                "sub" | "closure" | "times" | "max_ideal" | "whole" | "zero" | "sum" | "cap" | "colon" | "image"
                | "kernel" => Value::Submodule(self.submodule(e)?),
                "hom" | "identity" | "quotient_map" | "then" => Value::Map(self.map(e)?),
                "module_closure" | "direct_sum_closure" | "intersect" => Value::Closure(self.closure(e)?),
                "root" | "parameter" | "containment" | "grow" => Value::Trace(self.trace(e)?),
                _ => Value::Module(self.module(e)?),
            },
            Expr::Poly(_) => {
                let r = self.ring()?;
                let p = r.reduce(&self.poly(e)?);
                let deg = r.degree(&p).map_or("inhomogeneous".to_string(), |d| format!("degree {d}"));
                return Ok(Outcome::info(json!(p.to_string()), format!("{p} ({deg})")));
            }
            _ => return Err(format!("cannot show `{e}`")),
        };
        Ok(Outcome::info(v.describe(), v.summary()))
    }

    fn check(&self, func: &str, args: &[Expr]) -> R<Outcome> {
        let need = |n: usize| -> R<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("{func} takes {n} argument(s), got {}", args.len()))
            }
        };
        match func {
            "member" => {
                need(2)?;
                if let Expr::Call(f, inner) = &args[1] {
                    if f == "closure" && inner.len() == 2 {
                        let cl = self.closure(&inner[0])?;
                        let n = self.submodule(&inner[1])?;
                        let u = self.vector(&args[0], n.module())?;
                        let m = core(cl.membership(&n, &u))?;
                        let mut out = Outcome::verdict(
                            m.member,
                            match (m.member, m.failing_generator) {
                                (true, _) => format!("{u} is in the {}-closure of {n}", inner[0]),
                                (false, Some(i)) => format!("{u} is not in the closure (generator {i} of S fails)"),
                                (false, None) => format!("{u} is not in the closure"),
                            },
                        );
                        out.certificate = m.certificate.as_ref().map(closure_certificate_json);
                        return Ok(out);
                    }
                }
                let n = self.submodule(&args[1])?;
                let u = self.vector(&args[0], n.module())?;
                let cert = core(n.lift(&u))?;
                let mut out = Outcome::verdict(
                    cert.is_some(),
                    format!("{u} {} {n}", if cert.is_some() { "is in" } else { "is not in" }),
                );
                out.certificate = cert.as_ref().map(membership_json);
                Ok(out)
            }
            "equal" => {
                need(2)?;
                let a = self.submodule(&args[0])?;
                let b = self.submodule(&args[1])?;
                core(a.module().ring().check_same(b.module().ring()))?;
                if !a.module().same(b.module()) {
                    return Err("the submodules live in different modules".into());
                }
                let w = b.missing_from(&a).or_else(|| a.missing_from(&b));
                let mut out = Outcome::verdict(w.is_none(), if w.is_none() { "equal" } else { "different" });
                out.witness = w.map(|w| w.to_string());
                Ok(out)
            }
            "functorial" => {
                need(3)?;
                let out = core(check_functoriality(
                    &self.closure(&args[0])?,
                    &self.map(&args[1])?,
                    &self.submodule(&args[2])?,
                ))?;
                Ok(Outcome::from_check(out))
            }
            "semi_residual" => {
                need(2)?;
                let out = core(check_semi_residuality(&self.closure(&args[0])?, &self.submodule(&args[1])?))?;
                Ok(Outcome::from_check(out))
            }
            "faithful" => {
                let ring = match args.len() {
                    1 => self.ring()?,
                    2 => match self.value(&args[1]) {
                        Some(Value::Ring(r)) => r.clone(),
                        _ => return Err(self.wrong_kind(&args[1], "ring")),
                    },
                    n => return Err(format!("faithful takes 1 or 2 arguments, got {n}")),
                };
                let out = core(check_faithfulness(&self.closure(&args[0])?, &ring))?;
                Ok(Outcome::from_check(out))
            }
            "colon_capturing" => {
                let variant = match args.len() {
                    2 => ColonVariant::Plain,
                    3 => self.colon_variant(&args[2])?,
                    n => return Err(format!("colon_capturing takes 2 or 3 arguments, got {n}")),
                };
                let out = core(check_colon_capturing(&self.closure(&args[0])?, &self.params(&args[1])?, &variant))?;
                Ok(Outcome::from_check(out))
            }
            "gcc" => {
                need(4)?;
                let f = self.map(&args[2])?;
                let v = self.vector(&args[3], f.source())?;
                let out = core(check_generalized_colon_capturing(
                    &self.closure(&args[0])?,
                    &self.params(&args[1])?,
                    &f,
                    &v,
                ))?;
                Ok(Outcome::from_check(out))
            }
            "phantom" => {
                let cl = self.closure(&args.first().ok_or("phantom needs a closure")?.clone())?;
                let inst = match args.len() {
                    2 => core(PhantomInstance::from_module(&self.module(&args[1])?))?,
                    3 => {
                        let m = self.module(&args[1])?;
                        let u = self.vector(&args[2], &m)?;
                        core(PhantomInstance::from_map(&m, &u))?
                    }
                    n => return Err(format!("phantom takes 2 or 3 arguments, got {n}")),
                };
                let holds = core(phantom_test(&cl, &inst))?;
                Ok(Outcome::verdict(
                    holds,
                    format!("{} under {cl}", if holds { "phantom" } else { "not phantom" }),
                ))
            }
            "dietz_obstruction" => {
                need(3)?;
                let t_max = self.int(&args[2])?;
                if t_max < 0 {
                    return Err("t bound must be non-negative".into());
                }
                let t = core(dietz_obstruction(&self.closure(&args[0])?, &self.params(&args[1])?, t_max as u32))?;
                Ok(match t {
                    Some(t) => Outcome::info(json!({ "t": t }), format!("obstruction at t = {t}")),
                    None => Outcome::info(json!({ "t": null }), format!("no obstruction for t <= {t_max}")),
                })
            }
            "regular_sequence" => {
                need(2)?;
                let m = self.module(&args[0])?;
                let report = core(m.regular_sequence(&self.params(&args[1])?))?;
                let mut out = Outcome::verdict(report.regular, if report.regular { "regular" } else { "not regular" });
                match report.failure {
                    Some(RegularityFailure::ZeroDivisor { index, witness }) => {
                        out.text = format!("element {} is a zero divisor", index + 1);
                        out.witness = Some(witness.to_string());
                    }
                    Some(RegularityFailure::QuotientVanishes) => out.text = "M = (xs)M".into(),
                    None => {}
                }
                Ok(out)
            }
            "trivial_on" => {
                need(2)?;
                let sample = match &args[1] {
                    Expr::List(items) => items.iter().map(|i| self.submodule(i)).collect::<R<Vec<_>>>()?,
                    Expr::Call(f, a) if f == "sample" && a.len() == 2 => {
                        let count = self.int(&a[0])?.max(0) as usize;
                        let max_deg = self.int(&a[1])?.max(1);
                        random_ideals(&self.ring()?, count, max_deg, self.options.seed)?
                    }
                    other => return Err(format!("expected a list of submodules or sample(n, d), found `{other}`")),
                };
                let out = core(is_trivial_on_sample(&self.closure(&args[0])?, &sample))?;
                let mut o = Outcome::from_check(out.clone());
                o.text = format!("{} ({})", o.text, out.note);
                Ok(o)
            }
            _ => Err(format!("unknown check `{func}`")),
        }
    }

    fn colon_variant(&self, e: &Expr) -> R<ColonVariant> {
        match e {
            Expr::Poly(PolyExpr::Var(v)) if v == "plain" => Ok(ColonVariant::Plain),
            Expr::Poly(PolyExpr::Var(v)) if v == "strong_b" => Ok(ColonVariant::StrongB),
            Expr::Call(f, a) if f == "strong_a" && a.len() == 2 => {
                let t = self.int(&a[0])?;
                let s = self.int(&a[1])?;
                if t < 0 || s < 0 {
                    return Err("strong_a needs non-negative t and a".into());
                }
                Ok(ColonVariant::StrongA {
                    t: t as u32,
                    a: s as u32,
                })
            }
            _ => Err(format!("unknown colon-capturing variant `{e}` (plain, strong_b, strong_a(t, a))")),
        }
    }
}

fn to_poly(r: &QuotientRing, p: &PolyExpr) -> R<Polynomial> {
    core(p.to_polynomial(r.poly()))
}

fn field_of(spec: &FieldSpec) -> R<Field> {
    match spec {
        FieldSpec::Rationals => Ok(Field::Rationals),
        FieldSpec::Prime(p) => core(Field::prime(*p)),
    }
}

fn build_ring(def: &RingDef) -> R<QuotientRing> {
    match def {
        RingDef::Poly {
            field,
            vars,
            order,
            relations,
        } => {
            let poly = PolyRing::new(vars.clone(), field_of(field)?);
            let (weights, order) = match order {
                OrderSpec::Lex => (vec![1; vars.len()], MonomialOrder::Lex),
                OrderSpec::DegRevLex => (vec![1; vars.len()], MonomialOrder::DegRevLex),
                OrderSpec::WeightedDegRevLex(w) => {
                    if w.len() != vars.len() || w.iter().any(|&x| x <= 0) {
                        return Err(format!("need {} positive weights, got {w:?}", vars.len()));
                    }
                    (w.clone(), MonomialOrder::WeightedDegRevLex(w.clone()))
                }
            };
            let rels = relations
                .iter()
                .map(|p| core(p.to_polynomial(&poly)))
                .collect::<R<Vec<_>>>()?;
            if rels.is_empty() {
                core(QuotientRing::polynomial(&poly, weights, order))
            } else {
                core(QuotientRing::new(&poly, weights, order, rels))
            }
        }
        RingDef::Subring {
            field,
            ambient,
            names,
            images,
        } => {
            let names_ref: Vec<&str> = ambient.iter().map(|s| s.as_str()).collect();
            let amb = QuotientRing::standard(&names_ref, field_of(field)?);
            let images = images.iter().map(|p| to_poly(&amb, p)).collect::<R<Vec<_>>>()?;
            let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            core(QuotientRing::presented_subring(&names, &images))
        }
    }
}

fn monomials_of_degree(weights: &[i64], d: i64) -> Vec<Vec<u32>> {
    if weights.is_empty() {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut e = 0u32;
    while e as i64 * weights[0] <= d {
        for mut rest in monomials_of_degree(&weights[1..], d - e as i64 * weights[0]) {
            rest.insert(0, e);
            out.push(rest);
        }
        e += 1;
    }
    out
}

/// `count` seeded random homogeneous ideals with generators of degree at most
/// `max_deg` (in multiples of the smallest weight).
fn random_ideals(r: &QuotientRing, count: usize, max_deg: i64, seed: u64) -> R<Vec<Submodule>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = *r.weights().iter().min().ok_or("ring has no variables")?;
    let mut out = Vec::new();
    while out.len() < count {
        let ngens = rng.gen_range(1..=3);
        let mut gens = Vec::new();
        for _ in 0..ngens {
            let d = unit * rng.gen_range(1..=max_deg);
            let mons = monomials_of_degree(r.weights(), d);
            if mons.is_empty() {
                continue;
            }
            let terms = (0..rng.gen_range(1..=3)).map(|_| {
                let e = mons[rng.gen_range(0..mons.len())].clone();
                (Monomial::new(e), r.field().from_i64(rng.gen_range(1..=5)))
            });
            let p = r.reduce(&Polynomial::from_terms(r.poly(), terms.collect::<Vec<_>>()));
            if !p.is_zero() {
                gens.push(p);
            }
        }
        if !gens.is_empty() {
            out.push(core(Submodule::ideal(r, &gens))?);
        }
    }
    Ok(out)
}

fn membership_json(c: &MembershipCertificate) -> Json {
    json!({
        "coeffs": c.coeffs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "relation_coeffs": c.relation_coeffs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}

fn closure_certificate_json(c: &ClosureCertificate) -> Json {
    match c {
        ClosureCertificate::Plain(m) => json!({ "plain": membership_json(m) }),
        ClosureCertificate::PerGenerator(ms) => {
            json!({ "per_generator": ms.iter().map(membership_json).collect::<Vec<_>>() })
        }
        ClosureCertificate::Newton(ws) => json!({
            "newton": ws
                .iter()
                .map(|w| w.iter().map(|q| q.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        }),
        ClosureCertificate::All(parts) => json!({ "all": parts.iter().map(closure_certificate_json).collect::<Vec<_>>() }),
    }
}
