//! Certificates recomputed from raw ideals after a run: normal crossings of
//! the divisor configuration, final monomiality of the total transform, the
//! scaling replay (J,b) vs (J^k,kb), and the product-with-line replay.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::algebra::{factor_poly, Ctx, Ideal, Poly};
use crate::basic_object::{object_from_ideal, ChartState};
use crate::charts::Chart;
use crate::resolver::{resolve, Limits, ResolutionTree};
use crate::{Error, Result};

/// Outcome of one certificate: which check ran, whether it passed, one line
/// of evidence per failure, and informational lines on success.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
    pub report: Vec<String>,
}

impl Certificate {
    fn new(kind: &str, witnesses: Vec<String>, report: Vec<String>) -> Certificate {
        Certificate { kind: kind.to_string(), pass: witnesses.is_empty(), witnesses, report }
    }
}

fn det(ctx: &Ctx, m: &[Vec<Poly>]) -> Poly {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(ctx);
    for j in 0..m.len() {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect()
            })
            .collect();
        let term = m[0][j].mul(&det(ctx, &minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// All k x k minors of the Jacobian matrix of `polys`.
fn jacobian_minors(ctx: &Ctx, polys: &[&Poly]) -> Ideal {
    let n = ctx.len();
    let k = polys.len();
    let rows: Vec<Vec<Poly>> =
        polys.iter().map(|p| (0..n).map(|v| p.derivative(v)).collect()).collect();
    let mut minors = Vec::new();
    for cols in (0..n).combinations(k) {
        let m: Vec<Vec<Poly>> =
            rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        minors.push(det(ctx, &m));
    }
    Ideal::new(ctx, minors)
}

/// First failure of normal crossings among the hypersurfaces on the chart:
/// some subset meets without full Jacobian rank.  None when all cross
/// normally.  Duplicate entries are collapsed first.
pub(crate) fn snc_witness(chart: &Chart, hypersurfaces: &[Poly]) -> Result<Option<String>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut hyps: Vec<Poly> = Vec::new();
    for h in hypersurfaces {
        let h = h.normalized();
        if seen.insert(h.to_string()) {
            hyps.push(h);
        }
    }
    let n = chart.ctx.len();
    for size in 1..=hyps.len() {
        for subset in (0..hyps.len()).combinations(size) {
            let polys: Vec<&Poly> = subset.iter().map(|&i| &hyps[i]).collect();
            let meet = chart
                .saturate_units(&Ideal::new(&chart.ctx, polys.iter().map(|p| (*p).clone()).collect()));
            if meet.is_unit() {
                continue;
            }
            if size > n {
                return Ok(Some(format!(
                    "chart {}: {size} hypersurfaces share a point in dimension {n}",
                    chart.id
                )));
            }
            let minors = jacobian_minors(&chart.ctx, &polys);
            let fail = chart.saturate_units(&meet.sum(&minors));
            if !fail.is_unit() {
                return Ok(Some(format!(
                    "chart {}: tangency among {{{}}} on {}",
                    chart.id,
                    polys.iter().map(|p| p.to_string()).join(", "),
                    crate::charts::center_text(&fail)
                )));
            }
        }
    }
    Ok(None)
}

/// Normal crossings of the divisor configuration: each chart's exceptional
/// hyperplanes together with the given extra principal divisors (paired with
/// the charts positionally; generators are split into irreducible factors).
pub fn check_snc(charts: &[Chart], extra: &[Vec<Ideal>]) -> Result<Certificate> {
    let mut witnesses = Vec::new();
    for (i, chart) in charts.iter().enumerate() {
        let mut hyps: Vec<Poly> = Vec::new();
        for r in &chart.exceptionals {
            hyps.push(Poly::var(&chart.ctx, r.var));
        }
        for p in &chart.principal {
            hyps.push(p.poly.clone());
        }
        if let Some(list) = extra.get(i) {
            for ideal in list {
                for g in ideal.gens() {
                    if g.is_constant() {
                        continue;
                    }
                    for (p, _) in factor_poly(g)? {
                        hyps.push(p);
                    }
                }
            }
        }
        if let Some(w) = snc_witness(chart, &hyps)? {
            witnesses.push(w);
        }
    }
    Ok(Certificate::new("snc", witnesses, Vec::new()))
}

/// Largest k with `h^k` dividing every generator of `i`.
fn exact_poly_power(i: &Ideal, h: &Poly) -> u32 {
    let mut k = 0u32;
    let mut gens: Vec<Poly> = i.gens().to_vec();
    loop {
        let mut next = Vec::with_capacity(gens.len());
        for g in &gens {
            match g.divide_exact(h) {
                Some(q) => next.push(q),
                None => return k,
            }
        }
        gens = next;
        k += 1;
        if k > 4096 {
            return k;
        }
    }
}

/// The ideal of the single root chart the run started from.
fn root_ideal(tree: &ResolutionTree) -> Result<Ideal> {
    let first = tree
        .nodes
        .first()
        .ok_or_else(|| Error::Precondition("empty transcript".into()))?;
    if first.object.states.len() != 1 {
        return Err(Error::Precondition("run did not start from a single chart".into()));
    }
    Ok(first.object.states[0].j.clone())
}

/// Exponents of the exceptional content of the root ideal's total transform,
/// per final chart; principal divisors are keyed by their defining equation.
pub fn final_exponents(tree: &ResolutionTree) -> Result<BTreeMap<String, Vec<(String, u32)>>> {
    let root = root_ideal(tree)?;
    let last = &tree.nodes.last().expect("nonempty transcript").object;
    let mut out = BTreeMap::new();
    for s in &last.states {
        // saturating at the chart's units drops the factors a fractional
        // pullback clears into the generators
        let total = s.chart.saturate_units(&s.chart.from_root.apply(&root));
        let mut exps: Vec<(String, u32)> = s
            .chart
            .exceptionals
            .iter()
            .map(|r| {
                (s.chart.ctx.name(r.var).to_string(), ChartState::exact_var_power(&total, r.var))
            })
            .collect();
        for p in &s.chart.principal {
            exps.push((p.poly.to_string(), exact_poly_power(&total, &p.poly)));
        }
        out.insert(s.chart.id.clone(), exps);
    }
    Ok(out)
}

/// On a finished run: per chart, the root ideal's total transform equals its
/// exceptional monomial content times the unit ideal.  Exponents reported.
pub fn check_monomial_final(tree: &ResolutionTree) -> Result<Certificate> {
    if !tree.terminal {
        return Err(Error::Precondition("monomial check needs a finished run".into()));
    }
    let root = root_ideal(tree)?;
    let last = &tree.nodes.last().expect("nonempty transcript").object;
    let mut witnesses = Vec::new();
    let mut report = Vec::new();
    for s in &last.states {
        let ctx = &s.chart.ctx;
        let total = s.chart.saturate_units(&s.chart.from_root.apply(&root));
        let mut content: Vec<(Poly, u32, String)> = Vec::new();
        for r in &s.chart.exceptionals {
            let k = ChartState::exact_var_power(&total, r.var);
            if k > 0 {
                content.push((Poly::var(ctx, r.var), k, format!("{}^{k}", ctx.name(r.var))));
            }
        }
        for p in &s.chart.principal {
            let k = exact_poly_power(&total, &p.poly);
            if k > 0 {
                content.push((p.poly.clone(), k, format!("({})^{k}", p.poly)));
            }
        }
        let mut residual_gens = Vec::new();
        for g in total.gens() {
            let mut out = g.clone();
            for (h, k, _) in &content {
                for _ in 0..*k {
                    out = out.divide_exact(h).expect("the content power divides every generator");
                }
            }
            residual_gens.push(out);
        }
        let residual = s.chart.saturate_units(&Ideal::new(ctx, residual_gens));
        let monomial = content.iter().map(|(_, _, text)| text.clone()).join("*");
        let monomial = if monomial.is_empty() { "1".to_string() } else { monomial };
        if residual.is_unit() {
            report.push(format!("chart {}: {monomial}", s.chart.id));
        } else {
            witnesses.push(format!(
                "chart {}: residual {{{}}} beyond {monomial} is not the unit ideal",
                s.chart.id,
                residual.gens_text().join(", ")
            ));
        }
    }
    Ok(Certificate::new("monomial-final", witnesses, report))
}

/// Replay (J,b) against (J^k, kb): node counts, per-node center ideals, and
/// per-node singular loci must agree.
pub fn check_weak_equiv_scaling(ctx: &Ctx, j: &Ideal, b: u64, k: u64) -> Result<Certificate> {
    let kind = "weak-equivalence-scaling";
    if k == 1 {
        return Ok(Certificate::new(kind, Vec::new(), vec!["k=1: identity".into()]));
    }
    let limits = Limits::default();
    let base = resolve(object_from_ideal(ctx, j.clone(), b, &[])?, &limits)?;
    let scaled = resolve(object_from_ideal(ctx, j.power(k), k * b, &[])?, &limits)?;
    let mut witnesses = Vec::new();
    if base.nodes.len() != scaled.nodes.len() {
        witnesses.push(format!(
            "step counts differ: {} vs {}",
            base.nodes.len() - 1,
            scaled.nodes.len() - 1
        ));
    }
    for (nb, ns) in base.nodes.iter().zip(&scaled.nodes) {
        let ids: std::collections::BTreeSet<&String> =
            nb.centers.keys().chain(ns.centers.keys()).collect();
        for id in ids {
            match (nb.centers.get(id), ns.centers.get(id)) {
                (Some(a), Some(c)) if a.equals(c) => {}
                _ => witnesses.push(format!("node {}: centers differ on chart {id}", nb.id)),
            }
        }
        let sb = nb.object.sing();
        let ss = ns.object.sing();
        let ids: std::collections::BTreeSet<&String> =
            sb.per_chart.keys().chain(ss.per_chart.keys()).collect();
        for id in ids {
            match (sb.per_chart.get(id), ss.per_chart.get(id)) {
                (Some(a), Some(c)) if a.same_zero_set(c) => {}
                _ => witnesses.push(format!("node {}: Sing differs on chart {id}", nb.id)),
            }
        }
    }
    let report = vec![format!("{} steps on both runs", base.nodes.len() - 1)];
    Ok(Certificate::new(kind, witnesses, report))
}

/// Replay (J,b) against its product-with-line pull-back: centers must be the
/// cylinders over the base centers and the invariant traces must agree up to
/// trailing padding.
pub fn check_pullback_compat(ctx: &Ctx, j: &Ideal, b: u64) -> Result<Certificate> {
    let kind = "pullback-compat";
    let base_object = object_from_ideal(ctx, j.clone(), b, &[])?;
    if base_object.sing().is_empty() {
        return Ok(Certificate::new(kind, Vec::new(), vec!["already resolved".into()]));
    }
    let limits = Limits::default();
    let pulled_object = base_object.pullback_line();
    let base_root = "r".to_string();
    let pulled_root = pulled_object.states[0].chart.id.clone();
    let base = resolve(base_object, &limits)?;
    let pulled = resolve(pulled_object, &limits)?;
    let mut witnesses = Vec::new();
    if base.nodes.len() != pulled.nodes.len() {
        witnesses.push(format!(
            "step counts differ: {} vs {}",
            base.nodes.len() - 1,
            pulled.nodes.len() - 1
        ));
    }
    // chart lineages correspond by replacing the base root id with the
    // pulled root id
    let lift_id = |id: &str| format!("{pulled_root}{}", &id[base_root.len()..]);
    for (nb, np) in base.nodes.iter().zip(&pulled.nodes) {
        match (&nb.value, &np.value) {
            (Some(vb), Some(vp)) if vb.stripped() == vp.stripped() => {}
            (None, None) => {}
            _ => witnesses.push(format!(
                "node {}: invariant {} vs {}",
                nb.id, nb.invariant_text, np.invariant_text
            )),
        }
        if nb.centers.len() != np.centers.len() {
            witnesses.push(format!("node {}: center chart counts differ", nb.id));
        }
        for (id, cb) in &nb.centers {
            let Some(cp) = np.centers.get(&lift_id(id)) else {
                witnesses.push(format!("node {}: no pulled center over chart {id}", nb.id));
                continue;
            };
            let tb: Vec<String> = cb.gens_text().into_iter().sorted().collect();
            let tp: Vec<String> = cp.gens_text().into_iter().sorted().collect();
            if tb != tp {
                witnesses.push(format!(
                    "node {}: center on chart {id} is not the cylinder: {} vs {}",
                    nb.id,
                    tb.join(", "),
                    tp.join(", ")
                ));
            }
        }
    }
    let report = vec![format!("{} steps on both runs", base.nodes.len() - 1)];
    Ok(Certificate::new(kind, witnesses, report))
}
