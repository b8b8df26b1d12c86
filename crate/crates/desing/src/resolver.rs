//! The resolution driver: assembles the invariant value and center each
//! step, blows up, and records the transcript.  Also hosts principalization,
//! embedded hypersurface resolution, and the order-drop experiment on a line.

use std::collections::BTreeMap;

use num::Zero;

use crate::algebra::{factor_poly, Ctx, Ideal, Poly, Q, VarContext};
use crate::basic_object::{object_from_ideal, BasicObject, ChartState, ClosedSet};
use crate::charts::{Chart, Sign, SubstitutionMap};
use crate::descent::coefficient_descent;
use crate::invariants::{
    apply_partition, g_assemble, word_max, InvariantComponent, InvariantValue, StagePick,
};
use crate::{Error, Result};

/// Hard limits for a run.
#[derive(Clone, Debug)]
pub struct Limits {
    pub max_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_steps: 64 }
    }
}

/// One transcript step: the object before the blow-up, the value and center
/// that drove it, and the substitution into each child chart.
#[derive(Clone, Debug)]
pub struct Node {
    pub id: usize,
    pub parent: Option<usize>,
    pub object: BasicObject,
    pub value: Option<InvariantValue>,
    pub maxw: Option<Q>,
    pub invariant_text: String,
    pub centers: BTreeMap<String, Ideal>,
    pub substs: BTreeMap<String, (String, SubstitutionMap)>,
}

/// A full run: the control, the node chain, and whether the final singular
/// locus is empty.
#[derive(Clone, Debug)]
pub struct ResolutionTree {
    pub control: u64,
    pub nodes: Vec<Node>,
    pub terminal: bool,
}

/// Bookkeeping for one inductive level: the invariant components above it
/// that identify the current stage, and the max w-ord history accumulated by
/// the lower object while that stage lasts.
struct StageTrace {
    prefix: Vec<InvariantComponent>,
    history: Vec<(usize, Q)>,
}

/// Compute the invariant value and center for `object` at ambient dimension
/// `dim`, recursing through coefficient objects.  `level` indexes the trace
/// for the next object down; `pending` collects (level, max w-ord) entries
/// to append to the traces once the step's transform succeeds.
fn assemble(
    object: &BasicObject,
    dim: usize,
    level: usize,
    prefix: &[InvariantComponent],
    traces: &mut Vec<StageTrace>,
    pending: &mut Vec<(usize, Q)>,
) -> Result<(InvariantValue, ClosedSet, StagePick)> {
    let mut hook = |b: &BasicObject,
                    t: &crate::invariants::TMax|
     -> Result<(Vec<InvariantComponent>, ClosedSet)> {
        let frame = coefficient_descent(b, t)?;
        let Some(fresh) = frame.lower.clone() else {
            // bold regular: Max t itself is the center, with a top-value tail
            return Ok((Vec::new(), t.locus.clone()));
        };
        let mut key = prefix.to_vec();
        key.push(InvariantComponent::QZ(t.value.0.clone(), t.value.1));
        if traces.len() <= level {
            traces.push(StageTrace { prefix: key.clone(), history: Vec::new() });
        } else if traces[level].prefix != key {
            // a component above this level moved: new stage, fresh history
            traces.truncate(level);
            traces.push(StageTrace { prefix: key.clone(), history: Vec::new() });
        }
        let mut lower = fresh;
        lower.history = traces[level].history.clone();
        lower.step = b.step;
        let w_low = word_max(&lower)?.0;
        let (tail, lower_center, _) = assemble(&lower, dim - 1, level + 1, &key, traces, pending)?;
        pending.push((level, w_low));
        Ok((tail.components, frame.lift_center(&lower_center)))
    };
    g_assemble(object, dim, &mut hook)
}

/// Blow up maximal centers until the singular locus empties, appending one
/// node per step.  Returns the final object.
fn run_to_empty(
    start: BasicObject,
    dim: usize,
    limits: &Limits,
    nodes: &mut Vec<Node>,
    traces: &mut Vec<StageTrace>,
) -> Result<BasicObject> {
    let mut object = start;
    loop {
        if object.sing().is_empty() {
            return Ok(object);
        }
        if object.step >= limits.max_steps {
            return Err(Error::StepLimitExceeded(limits.max_steps));
        }
        let (w, _) = word_max(&object)?;
        if !w.is_zero() {
            let s_zero = object.s_zero(&w);
            apply_partition(&mut object, s_zero);
        }
        let mut pending = Vec::new();
        let (value, center, _) = assemble(&object, dim, 0, &[], traces, &mut pending)?;
        if center.is_empty() {
            return Err(Error::Internal(
                "assembled an empty center on a singular object".into(),
            ));
        }
        let (next, report) = object.transform(&center, &w)?;
        for (level, w_low) in pending {
            traces[level].history.push((object.step, w_low));
        }
        let id = nodes.len();
        nodes.push(Node {
            id,
            parent: id.checked_sub(1),
            invariant_text: value.text(),
            value: Some(value),
            maxw: Some(w),
            object,
            centers: report.centers,
            substs: report.substs,
        });
        object = next;
    }
}

fn push_terminal(nodes: &mut Vec<Node>, object: BasicObject, text: &str) {
    let id = nodes.len();
    nodes.push(Node {
        id,
        parent: id.checked_sub(1),
        object,
        value: None,
        maxw: None,
        invariant_text: text.to_string(),
        centers: BTreeMap::new(),
        substs: BTreeMap::new(),
    });
}

/// Resolve the pair: blow up maximal centers until Sing(J,b) is empty.
pub fn resolve(start: BasicObject, limits: &Limits) -> Result<ResolutionTree> {
    if start.sing().is_empty() {
        return Err(Error::Precondition(
            "nothing to resolve: Sing(J,b) is already empty".into(),
        ));
    }
    let control = start.b;
    let dim = start.states[0].chart.ctx.len();
    let mut nodes = Vec::new();
    let mut traces = Vec::new();
    let done = run_to_empty(start, dim, limits, &mut nodes, &mut traces)?;
    let terminal = done.sing().is_empty();
    push_terminal(&mut nodes, done, "resolved");
    Ok(ResolutionTree { control, nodes, terminal })
}

/// Principalize: resolve (J,1), after which the total transform of J is an
/// exceptional monomial times a unit on every chart.
pub fn principalize(
    ctx: &Ctx,
    j: Ideal,
    divisors: &[(usize, Sign)],
    limits: &Limits,
) -> Result<ResolutionTree> {
    if j.is_unit() {
        return Err(Error::Precondition("the unit ideal is already principal".into()));
    }
    let object = object_from_ideal(ctx, j, 1, divisors)?;
    resolve(object, limits)
}

/// The image of `f` on the chart with all blow-up exceptional factors
/// divided out.
fn strict_poly(chart: &Chart, f: &Poly) -> Poly {
    let mut g = chart.from_root.apply_poly(f);
    for r in &chart.exceptionals {
        if r.birth == 0 {
            continue;
        }
        let v = Poly::var(&chart.ctx, r.var);
        while let Some(q) = g.divide_exact(&v) {
            g = q;
        }
    }
    for p in &chart.principal {
        while let Some(q) = g.divide_exact(&p.poly) {
            g = q;
        }
    }
    g
}

/// Largest order of `g` at any point of the chart.
fn max_order(chart: &Chart, g: &Poly) -> Result<u64> {
    let mut m = 0u64;
    let mut d = chart.saturate_units(&Ideal::principal(g.clone()));
    while !d.is_unit() {
        m += 1;
        d = chart.saturate_units(&d.delta());
        if m > 4096 {
            return Err(Error::Internal("order iteration diverged".into()));
        }
    }
    Ok(m)
}

/// Chart states carrying the strict transform of `f`, ledgers refreshed.
fn strict_states(charts: &[Chart], f: &Poly) -> Vec<ChartState> {
    charts
        .iter()
        .map(|c| {
            let mut s = ChartState { chart: c.clone(), j: Ideal::principal(strict_poly(c, f)) };
            s.refresh_ledger();
            s
        })
        .collect()
}

/// Embedded resolution of the hypersurface `f`: lower its maximal order to
/// one by resolving (⟨strict f⟩, max order) phases, then principalize the
/// product with the divisors until the whole configuration has normal
/// crossings.  The final strict transform is smooth.
pub fn embedded_resolve(
    ctx: &Ctx,
    f: &Poly,
    divisors: &[(usize, Sign)],
    limits: &Limits,
) -> Result<ResolutionTree> {
    if f.is_constant() {
        return Err(Error::Precondition(
            "embedded resolution needs a nonconstant hypersurface".into(),
        ));
    }
    for (p, m) in factor_poly(f)? {
        if m > 1 {
            return Err(Error::Precondition(format!(
                "hypersurface must be squarefree: {p} has multiplicity {m}"
            )));
        }
    }
    let dim = ctx.len();
    let mut charts = vec![Chart::root("r", ctx, divisors)];
    let mut step = 0usize;
    let mut nodes: Vec<Node> = Vec::new();
    let mut first_control: Option<u64> = None;

    loop {
        let mut order = 0u64;
        for c in &charts {
            order = order.max(max_order(c, &strict_poly(c, f))?);
        }
        if order <= 1 {
            break;
        }
        let object = BasicObject {
            states: strict_states(&charts, f),
            b: order,
            step,
            history: Vec::new(),
            partition_snapshot: None,
        };
        first_control.get_or_insert(order);
        let mut traces = Vec::new();
        let done = run_to_empty(object, dim, limits, &mut nodes, &mut traces)?;
        step = done.step;
        charts = done.states.into_iter().map(|s| s.chart).collect();
    }

    // the strict transform is smooth now; if it already crosses the divisor
    // hyperplanes normally there is nothing left to do
    let mut simple = true;
    for c in &charts {
        let mut hyps: Vec<Poly> = Vec::new();
        let strict = strict_poly(c, f);
        if !strict.is_constant() {
            for (p, _) in factor_poly(&strict)? {
                hyps.push(p);
            }
        }
        for r in &c.exceptionals {
            hyps.push(Poly::var(&c.ctx, r.var));
        }
        for p in &c.principal {
            hyps.push(p.poly.clone());
        }
        if crate::verify::snc_witness(c, &hyps)?.is_some() {
            simple = false;
            break;
        }
    }
    if !simple {
        let states = charts
            .iter()
            .map(|c| {
                let mut g = strict_poly(c, f);
                for r in &c.exceptionals {
                    g = g.mul(&Poly::var(&c.ctx, r.var));
                }
                let mut s = ChartState { chart: c.clone(), j: Ideal::principal(g) };
                s.refresh_ledger();
                s
            })
            .collect();
        let object =
            BasicObject { states, b: 1, step, history: Vec::new(), partition_snapshot: None };
        first_control.get_or_insert(1);
        let mut traces = Vec::new();
        let done = run_to_empty(object, dim, limits, &mut nodes, &mut traces)?;
        step = done.step;
        charts = done.states.into_iter().map(|s| s.chart).collect();
    }

    // terminal snapshot: the strict transform, smooth wherever it survives
    let final_object = BasicObject {
        states: strict_states(&charts, f),
        b: 2,
        step,
        history: Vec::new(),
        partition_snapshot: None,
    };
    let terminal = final_object.sing().is_empty();
    push_terminal(&mut nodes, final_object, "resolved");
    Ok(ResolutionTree { control: first_control.unwrap_or(1), nodes, terminal })
}

/// Report from the order-drop experiment.
#[derive(Clone, Debug)]
pub struct TrickReport {
    pub s_max: u64,
    pub point_exponents: Vec<u64>,
    pub sweep_exponents: Vec<u64>,
    pub tree: ResolutionTree,
}

/// One directed blow-up on the marked chart; returns the new object and the
/// exact exponent of the line coordinate in the marked child's ideal.
fn trick_step(
    nodes: &mut Vec<Node>,
    object: &BasicObject,
    marked: &str,
    center_vars: &[usize],
    limits: &Limits,
) -> Result<(BasicObject, u64)> {
    if object.step >= limits.max_steps {
        return Err(Error::StepLimitExceeded(limits.max_steps));
    }
    let state = object
        .state(marked)
        .ok_or_else(|| Error::Internal(format!("marked chart {marked} is missing")))?;
    let a_pre = ChartState::exact_var_power(&state.j, 1);
    let mut center = ClosedSet::new();
    center.insert(marked, Ideal::of_vars(&state.chart.ctx, center_vars));
    let (w, _) = word_max(object)?;
    let (next, report) = object.transform(&center, &w)?;
    let id = nodes.len();
    nodes.push(Node {
        id,
        parent: id.checked_sub(1),
        object: object.clone(),
        value: None,
        maxw: Some(w),
        invariant_text: format!("a={a_pre}"),
        centers: report.centers,
        substs: report.substs,
    });
    let child = format!("{marked}.t");
    let a = next
        .state(&child)
        .map(|s| ChartState::exact_var_power(&s.j, 1) as u64)
        .ok_or_else(|| Error::Internal(format!("expected child chart {child}")))?;
    Ok((next, a))
}

/// Drive (⟨x^{b'}⟩, b) times a line through N−1 point blow-ups at the moving
/// intersection of the line's strict transform with the last divisor, then
/// sweep the divisor with codimension-1 blow-ups while permissible.  Asserts
/// the exact ledger-exponent law at every step and reports the sweep count.
pub fn hironaka_trick(b_prime: u64, b: u64, n: u64, limits: &Limits) -> Result<TrickReport> {
    if b < 1 || b_prime < b {
        return Err(Error::Precondition(format!(
            "need b' >= b >= 1, got b' = {b_prime}, b = {b}"
        )));
    }
    if n < 2 {
        return Err(Error::Precondition(format!("need N >= 2, got N = {n}")));
    }
    let line = VarContext::new(&["x"]);
    let j = Ideal::principal(Poly::var(&line, 0).pow(b_prime));
    let base = object_from_ideal(&line, j, b, &[])?;
    let mut object = base.pullback_line();
    let mut marked = object.states[0].chart.id.clone();
    let mut nodes = Vec::new();
    let mut point_exponents = Vec::new();
    let mut sweep_exponents = Vec::new();

    for i in 1..n {
        let (next, a) = trick_step(&mut nodes, &object, &marked, &[0, 1], limits)?;
        let law = i * (b_prime - b);
        if a != law {
            return Err(Error::Internal(format!(
                "marked exponent {a} after point blow-up {i} disagrees with the law {law}"
            )));
        }
        point_exponents.push(a);
        marked = format!("{marked}.t");
        object = next;
    }

    let mut s_max = 0u64;
    loop {
        let state = object.state(&marked).expect("marked chart present");
        if u64::from(ChartState::exact_var_power(&state.j, 1)) < b {
            break;
        }
        let (next, a) = trick_step(&mut nodes, &object, &marked, &[1], limits)?;
        s_max += 1;
        let law = (n - 1) * (b_prime - b) - s_max * b;
        if a != law {
            return Err(Error::Internal(format!(
                "exponent {a} after sweep {s_max} disagrees with the law {law}"
            )));
        }
        sweep_exponents.push(a);
        marked = format!("{marked}.t");
        object = next;
    }

    let terminal = object.sing().is_empty();
    push_terminal(&mut nodes, object, "final");
    Ok(TrickReport {
        s_max,
        point_exponents,
        sweep_exponents,
        tree: ResolutionTree { control: b, nodes, terminal },
    })
}
