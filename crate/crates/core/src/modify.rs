//! Finite-stage module modifications.
//!
//! A parameter modification kills a bad relation `x_(k+1) u = sum x_i u_i` by
//! passing to `(M ⊕ R f_1 ⊕ … ⊕ R f_k) / R(u ⊕ x_1 f_1 ⊕ … ⊕ x_k f_k)`. A
//! containment modification forces `v ⊗ x` into the image of `G ⊗ M'` for a
//! vector `v` in the closure of `G ⊆ R^s` by adding the columns
//! `v_l x ⊕ e_1l f_1 ⊕ … ⊕ e_kl f_k`. Both signs are exactly as written here.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::closure::{phantom_test, Closure, PhantomInstance};
use crate::error::{Error, Result};
use crate::fpmod::{FPModule, ModuleMap, Submodule};
use crate::gb::FreeElem;
use crate::polyarith::Polynomial;
use crate::ring::ParameterSequence;

/// `x_(k+1) u = x_1 u_1 + … + x_k u_k` in `M` with `u ∉ (x_1..x_k) M`.
#[derive(Clone, Debug)]
pub struct BadRelation {
    module: FPModule,
    params: Vec<Polynomial>,
    u: FreeElem,
    coeffs: Vec<FreeElem>,
}

impl BadRelation {
    /// `params = (x_1, …, x_(k+1))`, `coeffs = (u_1, …, u_k)`. Checks that the
    /// relation holds and that `u` is not already in `(x_1..x_k) M`.
    pub fn new(module: &FPModule, params: Vec<Polynomial>, u: FreeElem, coeffs: Vec<FreeElem>) -> Result<BadRelation> {
        let Some((last, prefix)) = params.split_last() else {
            return Err(Error::Precondition("a bad relation needs at least one parameter".into()));
        };
        if coeffs.len() != prefix.len() {
            return Err(Error::Precondition(format!(
                "{} coefficients for {} parameters",
                coeffs.len(),
                prefix.len()
            )));
        }
        module.check_elem(&u)?;
        for c in &coeffs {
            module.check_elem(c)?;
        }
        let mut lhs = u.scale(last);
        for (x, c) in prefix.iter().zip(&coeffs) {
            lhs = lhs.sub(&c.scale(x));
        }
        if !module.is_zero_elem(&lhs) {
            return Err(Error::Precondition("the stated relation does not hold".into()));
        }
        if Submodule::ideal_times(module, prefix).contains(&u) {
            return Err(Error::Precondition(format!(
                "{u} already lies in the submodule generated by the earlier parameters"
            )));
        }
        Ok(BadRelation {
            module: module.clone(),
            params,
            u,
            coeffs,
        })
    }

    pub fn module(&self) -> &FPModule {
        &self.module
    }

    pub fn params(&self) -> &[Polynomial] {
        &self.params
    }

    pub fn u(&self) -> &FreeElem {
        &self.u
    }

    pub fn coeffs(&self) -> &[FreeElem] {
        &self.coeffs
    }
}

impl fmt::Display for BadRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (last, prefix) = self.params.split_last().expect("validated");
        let rhs: Vec<String> = prefix
            .iter()
            .zip(&self.coeffs)
            .map(|(x, c)| format!("({x})*{}", show(&self.module, c)))
            .collect();
        let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
        write!(f, "({last})*{} = {rhs}", show(&self.module, &self.u))
    }
}

fn show(m: &FPModule, v: &FreeElem) -> String {
    if m.ngens() == 1 {
        format!("({})", v.comp(0))
    } else {
        v.to_string()
    }
}

/// A bad relation on the first parameter prefix where `xs` fails to be
/// regular on `m`, of least degree, provided that degree is at most
/// `degree_bound`.
pub fn find_bad_relation(m: &FPModule, xs: &ParameterSequence, degree_bound: i64) -> Result<Option<BadRelation>> {
    xs.require_verified()?;
    for i in 0..xs.len() {
        if let Some(rel) = bad_relation_at(m, xs, i, degree_bound)? {
            return Ok(Some(rel));
        }
    }
    Ok(None)
}

/// A bad relation `x_(i+1) u = x_1 u_1 + … + x_i u_i` (0-based `i`), if one
/// of degree at most `degree_bound` exists.
pub fn bad_relation_at(m: &FPModule, xs: &ParameterSequence, i: usize, degree_bound: i64) -> Result<Option<BadRelation>> {
    m.ring().check_same(xs.ring())?;
    let x = xs.elems();
    if i >= x.len() {
        return Err(Error::Precondition(format!("no parameter at position {i}")));
    }
    let prefix = &x[..i];
    let Some(u) = m.colon_witness(prefix, &x[i])? else {
        return Ok(None);
    };
    if m.degree_of(&u).is_some_and(|d| d > degree_bound) {
        return Ok(None);
    }
    let n = Submodule::ideal_times(m, prefix);
    let cert = n
        .lift(&u.scale(&x[i]))?
        .ok_or_else(|| Error::Domain("colon witness failed to lift".into()))?;
    // ideal_times orders generators parameter-major
    let rank = m.ngens();
    let coeffs = (0..i)
        .map(|j| {
            (0..rank).fold(m.zero_elem(), |acc, k| acc.add(&m.gen(k).scale(&cert.coeffs[j * rank + k])))
        })
        .map(|c| m.ring().reduce_vec(&c))
        .collect();
    BadRelation::new(m, x[..=i].to_vec(), u, coeffs).map(Some)
}

/// `M -> M'` killing the bad relation. The new generators `f_i` sit after
/// those of `M`, with degree `deg u - deg x_i`.
pub fn parameter_modification(rel: &BadRelation) -> Result<(FPModule, ModuleMap)> {
    let m = &rel.module;
    let ring = m.ring();
    let du = m
        .degree_of(&rel.u)
        .ok_or_else(|| Error::Inhomogeneous(format!("{} is not homogeneous", rel.u)))?;
    let prefix = &rel.params[..rel.params.len() - 1];
    let mut degrees = m.degrees().to_vec();
    for x in prefix {
        let dx = ring
            .degree(x)
            .ok_or_else(|| Error::Inhomogeneous(format!("{x} is not homogeneous")))?;
        degrees.push(du - dx);
    }
    let k = prefix.len();
    let mut rels: Vec<FreeElem> = m.relations().iter().map(|r| r.embed(0, k)).collect();
    let tail = FreeElem::new(ring.poly(), prefix.to_vec())?;
    rels.push(rel.u.concat(&tail));
    extend_module(m, degrees, rels)
}

/// `M -> M'` forcing `v ⊗ x` into `im(G ⊗ M')`, where `g` lives in a free
/// module `R^s` and `v ∈ G^cl \ G` under `cl`.
pub fn containment_modification(
    cl: &dyn Closure,
    m: &FPModule,
    g: &Submodule,
    v: &FreeElem,
    x: &FreeElem,
) -> Result<(FPModule, ModuleMap)> {
    let free = g.module();
    if !free.relations().is_empty() {
        return Err(Error::Precondition("G must live in a free module".into()));
    }
    m.ring().check_same(free.ring())?;
    free.check_elem(v)?;
    m.check_elem(x)?;
    if g.contains(v) {
        return Err(Error::Precondition(format!("{v} already lies in G")));
    }
    if !cl.contains(g, v)? {
        return Err(Error::Precondition(format!("{v} is not in the closure of G")));
    }
    let ring = m.ring();
    let weights = ring.weights();
    let dv = v
        .degree(weights, free.degrees())
        .ok_or_else(|| Error::Inhomogeneous(format!("{v} is not homogeneous")))?;
    let dx = m
        .degree_of(x)
        .ok_or_else(|| Error::Inhomogeneous(format!("{x} is not homogeneous")))?;
    let gens = g.gens();
    let mut degrees = m.degrees().to_vec();
    for gj in gens {
        let dg = gj
            .degree(weights, free.degrees())
            .ok_or_else(|| Error::Inhomogeneous(format!("{gj} is not homogeneous")))?;
        degrees.push(dx + dv - dg);
    }
    let k = gens.len();
    let mut rels: Vec<FreeElem> = m.relations().iter().map(|r| r.embed(0, k)).collect();
    for l in 0..free.ngens() {
        let tail = FreeElem::new(ring.poly(), gens.iter().map(|gj| gj.comp(l).clone()).collect())?;
        rels.push(x.scale(v.comp(l)).concat(&tail));
    }
    extend_module(m, degrees, rels)
}

fn extend_module(m: &FPModule, degrees: Vec<i64>, rels: Vec<FreeElem>) -> Result<(FPModule, ModuleMap)> {
    let target = FPModule::new(m.ring(), degrees, rels)?;
    let matrix = (0..m.ngens()).map(|i| target.gen(i)).collect();
    let map = ModuleMap::new(m, &target, matrix)?;
    Ok((target, map))
}

/// `v ⊗ x ∈ im(G ⊗ M')` inside `R^s ⊗ M' = M'^s`.
pub fn containment_holds(m: &FPModule, g: &Submodule, v: &FreeElem, x: &FreeElem) -> Result<bool> {
    let s = g.module().ngens();
    let sum = FPModule::direct_sum_all(m.ring(), &vec![m.clone(); s])?;
    let spread = |w: &FreeElem, y: &FreeElem| {
        (0..s).fold(FreeElem::zero(m.ring().poly(), 0), |acc, l| acc.concat(&y.scale(w.comp(l))))
    };
    let gens: Vec<FreeElem> = g
        .gens()
        .iter()
        .flat_map(|gj| (0..m.ngens()).map(move |k| (gj, k)))
        .map(|(gj, k)| spread(gj, &m.gen(k)))
        .collect();
    Ok(Submodule::new(&sum, gens)?.contains(&spread(v, x)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Root,
    Parameter { relation: String },
    Containment { g: String, v: String, x: String },
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub module: FPModule,
    pub step: StepKind,
    /// Map from the previous stage; `None` at the root.
    pub map: Option<ModuleMap>,
    /// Phantom flag of `R -> module` under the closure supplied for the step.
    pub phantom: Option<bool>,
    pub closure: Option<String>,
}

#[derive(Debug)]
struct Node {
    parent: Option<Arc<Node>>,
    stage: Stage,
}

/// Strategy for choosing which bad relation to kill next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Earliest failing prefix, least degree witness.
    ByDegree,
    /// Rotate the starting prefix with the step count.
    RoundRobin,
}

/// A finite chain `R = M_0 -> M_1 -> …`. Extending returns a new trace that
/// shares its prefix with the old one. The image of `1` is always the first
/// generator, since every step maps generators to generators.
#[derive(Clone, Debug)]
pub struct ModificationTrace {
    head: Arc<Node>,
    len: usize,
}

impl ModificationTrace {
    pub fn root(m: &FPModule) -> ModificationTrace {
        ModificationTrace {
            head: Arc::new(Node {
                parent: None,
                stage: Stage {
                    module: m.clone(),
                    step: StepKind::Root,
                    map: None,
                    phantom: None,
                    closure: None,
                },
            }),
            len: 0,
        }
    }

    /// Number of modification steps.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn current(&self) -> &FPModule {
        &self.head.stage.module
    }

    pub fn stages(&self) -> Vec<&Stage> {
        let mut out = Vec::with_capacity(self.len + 1);
        let mut node = Some(&self.head);
        while let Some(n) = node {
            out.push(&n.stage);
            node = n.parent.as_ref();
        }
        out.reverse();
        out
    }

    pub fn image_of_one(&self) -> FreeElem {
        self.current().gen(0)
    }

    fn push(&self, module: FPModule, step: StepKind, map: ModuleMap, cl: &dyn Closure) -> Result<ModificationTrace> {
        let phantom = phantom_test(cl, &PhantomInstance::from_module(&module)?)?;
        Ok(ModificationTrace {
            head: Arc::new(Node {
                parent: Some(self.head.clone()),
                stage: Stage {
                    module,
                    step,
                    map: Some(map),
                    phantom: Some(phantom),
                    closure: Some(cl.name()),
                },
            }),
            len: self.len + 1,
        })
    }

    pub fn apply_parameter(&self, rel: &BadRelation, cl: &dyn Closure) -> Result<ModificationTrace> {
        if !rel.module().same(self.current()) {
            return Err(Error::Context("bad relation is not on the current stage".into()));
        }
        let (m, map) = parameter_modification(rel)?;
        self.push(m, StepKind::Parameter { relation: rel.to_string() }, map, cl)
    }

    pub fn apply_containment(
        &self,
        cl: &dyn Closure,
        g: &Submodule,
        v: &FreeElem,
        x: &FreeElem,
    ) -> Result<ModificationTrace> {
        let (m, map) = containment_modification(cl, self.current(), g, v, x)?;
        let step = StepKind::Containment {
            g: g.to_string(),
            v: v.to_string(),
            x: x.to_string(),
        };
        self.push(m, step, map, cl)
    }

    /// Applies up to `steps` parameter modifications chosen by `policy`,
    /// stopping early once no bad relation of degree `≤ degree_bound` remains.
    pub fn grow(
        &self,
        cl: &dyn Closure,
        xs: &ParameterSequence,
        steps: usize,
        degree_bound: i64,
        policy: Policy,
    ) -> Result<ModificationTrace> {
        xs.require_verified()?;
        let mut trace = self.clone();
        for step in 0..steps {
            let m = trace.current().clone();
            let start = match policy {
                Policy::ByDegree => 0,
                Policy::RoundRobin => step % xs.len().max(1),
            };
            let mut found = None;
            for off in 0..xs.len() {
                let i = (start + off) % xs.len();
                if let Some(rel) = bad_relation_at(&m, xs, i, degree_bound)? {
                    found = Some(rel);
                    break;
                }
            }
            let Some(rel) = found else { break };
            trace = trace.apply_parameter(&rel, cl)?;
        }
        Ok(trace)
    }

    /// JSON export of every stage.
    pub fn to_json(&self) -> Result<Value> {
        let mut stages = Vec::new();
        for s in self.stages() {
            let step = match &s.step {
                StepKind::Root => json!({"kind": "root"}),
                StepKind::Parameter { relation } => json!({"kind": "parameter", "relation": relation}),
                StepKind::Containment { g, v, x } => json!({"kind": "containment", "G": g, "v": v, "x": x}),
            };
            let image_in_m = Submodule::max_ideal_times(&s.module).contains(&s.module.gen(0));
            stages.push(json!({
                "step": step,
                "module": s.module.descriptor(),
                "map": s.map.as_ref().map(|f| f.matrix().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                "closure": s.closure,
                "phantom": s.phantom,
                "image_of_one_in_mM": image_in_m,
            }));
        }
        Ok(json!({ "stages": stages }))
    }
}

/// Whether the image of `1` in the last stage lies in `m M_t`.
pub fn image_of_one_in_m(trace: &ModificationTrace) -> bool {
    let m = trace.current();
    m.ngens() > 0 && Submodule::max_ideal_times(m).contains(&trace.image_of_one())
}
