//! Basic objects (W,(J,b),E): chart-covered ideals with a control, singular
//! loci, controlled transforms under blow-up, smooth pull-backs, and the
//! exceptional-exponent ledger.
//!
//! A transform blows up each component of the chosen center in sequence.
//! Components are brought to coordinate form per chart; when that is blocked
//! the chart is split into localized pieces and each piece is handled on its
//! own: off an exceptional hyperplane disjoint from the component the blocked
//! move becomes legal, where a stuck generator's linear coefficient is
//! invertible a fractional change of variables makes the generator a fresh
//! coordinate, and pieces off the center pass through untouched.

use std::collections::BTreeMap;



use crate::algebra::{components_of, is_smooth, Ideal, Poly, Q, VarContext};
use crate::charts::{
    blowup, try_normalize, Chart, NormalizeOutcome, PrincipalRecord, Sign, SubstitutionMap,
};
use crate::{Error, Result};

/// One affine piece of a basic object: the chart and the ideal on it.
#[derive(Clone, Debug)]
pub struct ChartState {
    pub chart: Chart,
    pub j: Ideal,
}

impl ChartState {
    /// Largest k with var^k dividing every generator of `i`.
    pub fn exact_var_power(i: &Ideal, var: usize) -> u32 {
        i.gens().iter().map(|g| g.min_exp_in_var(var)).min().unwrap_or(0)
    }

    /// The exceptional-monomial factor ∏ var^{a_num} recorded on the ledger.
    pub fn ledger_monomial(&self) -> Poly {
        let ctx = &self.chart.ctx;
        let mut exps = vec![0u32; ctx.len()];
        for r in &self.chart.exceptionals {
            exps[r.var] += r.a_num as u32;
        }
        Poly::monomial(ctx, exps, Q::from_integer(1.into()))
    }

    /// J with the ledger monomial divided out; maximality re-asserted.
    pub fn bar_ideal(&self) -> Result<Ideal> {
        let ctx = &self.chart.ctx;
        let mut gens = Vec::new();
        for g in self.j.gens() {
            let mut out = g.clone();
            for r in &self.chart.exceptionals {
                if r.a_num == 0 {
                    continue;
                }
                let m = Poly::var(ctx, r.var).pow(r.a_num);
                out = out.divide_exact(&m).ok_or_else(|| {
                    Error::DivisionFailed(format!(
                        "ledger power {}^{} does not divide {} on chart {}",
                        ctx.name(r.var),
                        r.a_num,
                        g,
                        self.chart.id
                    ))
                })?;
            }
            gens.push(out);
        }
        let bar = Ideal::new(ctx, gens);
        for r in &self.chart.exceptionals {
            if r.a_num > 0 && !bar.is_zero() {
                let extra = Self::exact_var_power(&bar, r.var);
                if extra != 0 {
                    return Err(Error::DivisionFailed(format!(
                        "ledger entry for {} on chart {} is not maximal",
                        ctx.name(r.var),
                        self.chart.id
                    )));
                }
            }
        }
        Ok(bar)
    }

    /// Recompute every ledger entry as the exact dividing power.
    pub(crate) fn refresh_ledger(&mut self) {
        for r in &mut self.chart.exceptionals {
            r.a_num = Self::exact_var_power(&self.j, r.var) as u64;
        }
    }

    /// Defining ideal of Sing(J,b) on this chart, saturated by units.
    pub fn sing_ideal(&self, b: u64) -> Ideal {
        self.chart.saturate_units(&self.j.delta_pow(b - 1))
    }
}

/// A closed subset of the cover: one radical ideal per chart id (charts
/// without an entry do not meet the set).
#[derive(Clone, Debug, Default)]
pub struct ClosedSet {
    pub per_chart: BTreeMap<String, Ideal>,
}

impl ClosedSet {
    pub fn new() -> Self {
        ClosedSet { per_chart: BTreeMap::new() }
    }

    /// Record `ideal` on `chart_id` unless it is the unit ideal.
    pub fn insert(&mut self, chart_id: &str, ideal: Ideal) {
        if !ideal.is_unit() {
            self.per_chart.insert(chart_id.to_string(), ideal);
        }
    }

    pub fn ideal_for(&self, chart_id: &str) -> Option<&Ideal> {
        self.per_chart.get(chart_id)
    }

    pub fn is_empty(&self) -> bool {
        self.per_chart.is_empty()
    }
}

/// The basic object: chart states sharing one control, plus the step
/// counter, the max w-ord history, and an optional fixed E⁻ designation.
#[derive(Clone, Debug)]
pub struct BasicObject {
    pub states: Vec<ChartState>,
    pub b: u64,
    pub step: usize,
    /// (step, max w-ord at that step), appended as transforms are applied.
    pub history: Vec<(usize, Q)>,
    /// Birth indices designated E⁻ for the t(em) variant.
    pub partition_snapshot: Option<Vec<usize>>,
}

/// What a transform did: the center per parent chart, the substitution per
/// child chart, and the new ledger exponent per child carrying a new divisor.
#[derive(Clone, Debug, Default)]
pub struct TransformReport {
    pub centers: BTreeMap<String, Ideal>,
    pub substs: BTreeMap<String, (String, SubstitutionMap)>,
    pub a_new: BTreeMap<String, u64>,
}

impl BasicObject {
    /// Fresh object at step 0 with empty history.
    pub fn fresh(states: Vec<ChartState>, b: u64) -> Result<BasicObject> {
        crate::algebra::check_control(b)?;
        for s in &states {
            if s.j.is_zero() {
                return Err(Error::Precondition(format!(
                    "zero ideal on chart {}",
                    s.chart.id
                )));
            }
        }
        Ok(BasicObject { states, b, step: 0, history: Vec::new(), partition_snapshot: None })
    }

    /// Singular locus Sing(J,b) across the cover.
    pub fn sing(&self) -> ClosedSet {
        let mut out = ClosedSet::new();
        for s in &self.states {
            out.insert(&s.chart.id, s.sing_ideal(self.b));
        }
        out
    }

    pub fn state(&self, chart_id: &str) -> Option<&ChartState> {
        self.states.iter().find(|s| s.chart.id == chart_id)
    }

    /// First step index whose recorded max w-ord equals the current one.
    pub fn s_zero(&self, current_maxw: &Q) -> usize {
        for (step, w) in &self.history {
            if w == current_maxw {
                return *step;
            }
        }
        self.step
    }

    /// Blow up the center (all components, in sequence) and apply the
    /// controlled transform J ↦ (total transform)/eᵇ on every chart.
    pub fn transform(&self, center: &ClosedSet, maxw_now: &Q) -> Result<(BasicObject, TransformReport)> {
        let birth = self.step + 1;
        let mut report = TransformReport::default();

        // validate the center per chart and collect its components
        let mut frontier: Vec<(ChartState, Vec<Ideal>)> = Vec::new();
        for s in &self.states {
            let Some(cid) = center.ideal_for(&s.chart.id) else {
                frontier.push((s.clone(), Vec::new()));
                continue;
            };
            let cid = s.chart.saturate_units(cid);
            if cid.is_unit() {
                frontier.push((s.clone(), Vec::new()));
                continue;
            }
            let sing_def = s.sing_ideal(self.b);
            if !cid.vanishes_on(&sing_def) {
                return Err(Error::NotPermissible(format!(
                    "center not inside Sing(J,b) on chart {}",
                    s.chart.id
                )));
            }
            report.centers.insert(s.chart.id.clone(), cid.clone());
            let comps = components_of(&cid)?;
            let mut order = None;
            for c in &comps {
                if !is_smooth(c)? {
                    return Err(Error::NotPermissible(format!(
                        "center component {c:?} is singular on chart {}",
                        s.chart.id
                    )));
                }
                let o = s.j.order_along(c);
                if *order.get_or_insert(o) != o {
                    return Err(Error::NotPermissible(format!(
                        "center components of unequal order on chart {}",
                        s.chart.id
                    )));
                }
            }
            for (i, a) in comps.iter().enumerate() {
                for b2 in comps.iter().skip(i + 1) {
                    if !a.sum(b2).is_unit() {
                        return Err(Error::NotPermissible(format!(
                            "center components intersect on chart {}",
                            s.chart.id
                        )));
                    }
                }
            }
            frontier.push((s.clone(), comps));
        }

        // blow up one pending component at a time, per chart lineage
        let mut done: Vec<ChartState> = Vec::new();
        while let Some((state, mut pending)) = frontier.pop() {
            // drop components that miss this piece
            while let Some(first) = pending.first() {
                if state.chart.saturate_units(first).is_unit() {
                    pending.remove(0);
                } else {
                    break;
                }
            }
            if pending.is_empty() {
                done.push(state);
                continue;
            }
            let y = pending.remove(0);
            let children = blow_one_component(&state, &y, birth, self.b, &mut report)?;
            for (child, map) in children {
                let next_pending: Vec<Ideal> = match &map {
                    Some(m) => pending.iter().map(|p| m.apply(p)).collect(),
                    None => pending.clone(),
                };
                frontier.push((child, next_pending));
            }
        }

        done.sort_by(|a, b| a.chart.id.cmp(&b.chart.id));
        let mut history = self.history.clone();
        history.push((self.step, maxw_now.clone()));
        Ok((
            BasicObject {
                states: done,
                b: self.b,
                step: self.step + 1,
                history,
                partition_snapshot: self.partition_snapshot.clone(),
            },
            report,
        ))
    }

    /// Smooth pull-back: extend every chart by a fresh line coordinate.
    pub fn pullback_line(&self) -> BasicObject {
        let states = self
            .states
            .iter()
            .map(|s| {
                let (chart, _new_var) = crate::charts::product_with_line(&s.chart);
                let j = chart.step_map.apply(&s.j);
                ChartState { chart, j }
            })
            .collect();
        BasicObject {
            states,
            b: self.b,
            step: self.step,
            history: self.history.clone(),
            partition_snapshot: self.partition_snapshot.clone(),
        }
    }

    /// Smooth pull-back: localize every chart at the image of `f`.
    pub fn pullback_localize(&self, f: &Poly) -> Result<BasicObject> {
        if f.is_zero() {
            return Err(Error::Precondition("cannot localize at zero".into()));
        }
        let states = self
            .states
            .iter()
            .map(|s| {
                let fi = s.chart.from_root.apply_poly(f);
                let chart = s.chart.localized_at(fi, "loc");
                ChartState { chart, j: s.j.clone() }
            })
            .collect();
        Ok(BasicObject {
            states,
            b: self.b,
            step: self.step,
            history: self.history.clone(),
            partition_snapshot: self.partition_snapshot.clone(),
        })
    }
}

/// Blow up a single smooth component on a single chart, splitting the chart
/// into localized pieces when coordinatization is blocked by an exceptional
/// hyperplane disjoint from the component.  Returns child states with the
/// map from the parent chart (None for untouched pass-through pieces).
fn blow_one_component(
    state: &ChartState,
    y: &Ideal,
    birth: usize,
    b: u64,
    report: &mut TransformReport,
) -> Result<Vec<(ChartState, Option<SubstitutionMap>)>> {
    let chart = &state.chart;
    match try_normalize(chart, y) {
        NormalizeOutcome::Done { forward, inverse: _, coord_vars } => {
            let nu = forward.apply(&state.j).order_along(&Ideal::of_vars(&chart.ctx, &coord_vars));
            if nu < b {
                return Err(Error::NotPermissible(format!(
                    "order {nu} along the center is below the control {b} on chart {}",
                    chart.id
                )));
            }
            let a_new = nu - b;

            let mut moved = chart.clone();
            moved.units = chart.units.iter().map(|u| forward.apply_poly(u)).collect();
            moved.principal = chart
                .principal
                .iter()
                .map(|p| PrincipalRecord { poly: forward.apply_poly(&p.poly), ..p.clone() })
                .collect();

            let mut out = Vec::new();
            for mut child in blowup(&moved, &coord_vars, birth) {
                let step_map = forward.compose(&child.step_map);
                child.step_map = step_map.clone();
                child.from_root = chart.from_root.compose(&step_map);
                let total = step_map.apply(&state.j);
                let e = child.exceptionals.last().expect("blow-up adds a record").var;
                let e_pow = Poly::var(&child.ctx, e).pow(b);
                let mut gens = Vec::new();
                for g in total.gens() {
                    let q = g.divide_exact(&e_pow).ok_or_else(|| {
                        Error::DivisionFailed(format!(
                            "controlled transform: {}^{} does not divide {} on chart {}",
                            child.ctx.name(e),
                            b,
                            g,
                            child.id
                        ))
                    })?;
                    gens.push(q);
                }
                let j1 = Ideal::new(&child.ctx, gens);
                let mut cs = ChartState { chart: child, j: j1 };
                cs.refresh_ledger();
                for p in &cs.chart.principal {
                    if !cs.j.is_zero() && cs.j.gens().iter().all(|g| g.divide_exact(&p.poly).is_some()) {
                        return Err(Error::Internal(format!(
                            "principal divisor V({}) acquired ledger content on chart {}",
                            p.poly, cs.chart.id
                        )));
                    }
                }
                let rec = cs.chart.exceptionals.iter().find(|r| r.var == e && r.birth == birth);
                let recorded = rec.map(|r| r.a_num).unwrap_or(0);
                if recorded != a_new {
                    return Err(Error::Internal(format!(
                        "ledger exponent {recorded} disagrees with order law {a_new} on chart {}",
                        cs.chart.id
                    )));
                }
                report.substs.insert(cs.chart.id.clone(), (chart.id.clone(), step_map.clone()));
                report.a_new.insert(cs.chart.id.clone(), a_new);
                out.push((cs, Some(step_map)));
            }
            Ok(out)
        }
        NormalizeOutcome::BlockedExceptional { var } => {
            if !y.sum(&Ideal::of_vars(&chart.ctx, &[var])).is_unit() {
                return Err(Error::NotCoordinatizable(format!(
                    "center meets V({}) on chart {} but needs a translation across it",
                    chart.ctx.name(var),
                    chart.id
                )));
            }
            split_across_hyperplane(state, y, var, birth, b, report)
        }
        NormalizeOutcome::Stuck { inverse, remaining, reason, .. } => {
            if let Some(children) =
                split_on_linear_generator(state, y, &inverse, &remaining, birth, b, report)?
            {
                return Ok(children);
            }
            if let Some(children) = retag_hypersurface(state, y, birth, b, report)? {
                return Ok(children);
            }
            Err(Error::NotCoordinatizable(format!("chart {}: {reason}", chart.id)))
        }
    }
}

/// Split a blow-up whose center misses the exceptional hyperplane `V(var)`
/// into a piece off the hyperplane, where the blocked coordinate move is
/// legal and the blow-up proceeds, and pass-through pieces covering the
/// hyperplane, where the center has no points.
fn split_across_hyperplane(
    state: &ChartState,
    y: &Ideal,
    var: usize,
    birth: usize,
    b: u64,
    report: &mut TransformReport,
) -> Result<Vec<(ChartState, Option<SubstitutionMap>)>> {
    let chart = &state.chart;
    let ev = Ideal::of_vars(&chart.ctx, &[var]);
    let vname = chart.ctx.name(var).to_string();
    // off the hyperplane: the divisor has no points here, so its record is
    // dropped and the blocked move becomes legal
    let mut off = chart.localized_at(Poly::var(&chart.ctx, var), &format!("off_{vname}"));
    off.exceptionals.retain(|r| r.var != var);
    let off_state = ChartState { chart: off, j: state.j.clone() };
    let mut out = blow_one_component(&off_state, y, birth, b, report)?;

    // off the component: pass-through pieces covering V(var)
    let single = y
        .gens()
        .iter()
        .find(|g| ev.sum(&Ideal::principal((*g).clone())).is_unit())
        .cloned();
    let units: Vec<Poly> = match single {
        Some(g) => vec![g],
        None => y.gens().to_vec(),
    };
    for (k, u) in units.iter().enumerate() {
        let suffix = if k == 0 {
            format!("on_{vname}")
        } else {
            format!("on_{vname}{}", k + 1)
        };
        let on = chart.localized_at(u.clone(), &suffix);
        out.push((ChartState { chart: on, j: state.j.clone() }, None));
    }
    Ok(out)
}

/// When normalization sticks on a center generator that is linear in some
/// variable with a nonconstant coefficient, cover the chart by pieces where
/// the blow-up is expressible: where the coefficient is invertible the
/// generator becomes a fresh coordinate through a fractional change of
/// variables, and where the generator is invertible the center is empty.
/// The pieces cover the chart exactly when the coefficient and the generator
/// have no common zero; candidates violating that are skipped.  Returns None
/// when no generator of the center has the required shape.
fn split_on_linear_generator(
    state: &ChartState,
    y: &Ideal,
    inverse: &SubstitutionMap,
    remaining: &[Poly],
    birth: usize,
    b: u64,
    report: &mut TransformReport,
) -> Result<Option<Vec<(ChartState, Option<SubstitutionMap>)>>> {
    let chart = &state.chart;
    let ctx = &chart.ctx;
    let mut protected = vec![false; ctx.len()];
    for r in &chart.exceptionals {
        protected[r.var] = true;
    }
    // candidates in original coordinates: the stuck generators mapped back,
    // then the center's own presentation
    let mut candidates: Vec<Poly> = remaining.iter().map(|g| inverse.apply_poly(g)).collect();
    for g in y.gens() {
        if !candidates.contains(g) {
            candidates.push(g.clone());
        }
    }
    for g in &candidates {
        let g = g.normalized();
        if g.as_scaled_var().is_some() {
            continue;
        }
        for v in 0..ctx.len() {
            if g.degree_in_var(v) != 1 {
                continue;
            }
            let q = g.coefficient_of(v, 1);
            if q.is_zero() {
                continue;
            }
            if protected[v] {
                // solving for v would move the divisor V(v); when the center
                // misses the hyperplane, pieces on and off it split the task
                if y.sum(&Ideal::of_vars(ctx, &[v])).is_unit() {
                    return Ok(Some(split_across_hyperplane(state, y, v, birth, b, report)?));
                }
                continue;
            }
            if q.as_constant().is_some() {
                continue; // constant pivots are the normalization's own job
            }
            // the two pieces cover the chart only if q and g never vanish together
            if !Ideal::new(ctx, vec![q.clone(), g.clone()]).is_unit() {
                continue;
            }
            return Ok(Some(solve_piece_blowup(state, y, &g, v, &q, birth, b, report)?));
        }
    }
    Ok(None)
}

/// Blow up a center containing the generator `g = q·var + r` on the cover
/// {q ≠ 0} ∪ {g ≠ 0}.  On the first piece the change of variables that
/// replaces `var` by the value of `g` is invertible, with polynomial inverse
/// `var' ↦ q·var + r` and fractional forward `var ↦ (var' − r)/q`, and the
/// center becomes coordinate; on the second the center has no points.
fn solve_piece_blowup(
    state: &ChartState,
    y: &Ideal,
    g: &Poly,
    var: usize,
    q: &Poly,
    birth: usize,
    b: u64,
    report: &mut TransformReport,
) -> Result<Vec<(ChartState, Option<SubstitutionMap>)>> {
    let chart = &state.chart;
    let ctx = &chart.ctx;
    let vname = ctx.name(var).to_string();

    // the remainder r = g - q·var never involves var
    let r = g.sub(&q.mul(&Poly::var(ctx, var)));
    if r.degree_in_var(var) != 0 {
        return Err(Error::Internal(format!(
            "generator {g} is not linear in {vname} on chart {}",
            chart.id
        )));
    }

    // fresh name for the coordinate carrying the generator's value
    let mut solved = format!("{vname}_s");
    let mut k = 1usize;
    while ctx.names().iter().any(|n| *n == solved) {
        k += 1;
        solved = format!("{vname}_s{k}");
    }
    let mut names: Vec<String> = ctx.names().to_vec();
    names[var] = solved;
    let pctx = VarContext::from_names(names);

    let transplant: Vec<Poly> = (0..ctx.len()).map(|u| Poly::var(&pctx, u)).collect();
    let rq = r.substitute(&pctx, &transplant);
    let qq = q.substitute(&pctx, &transplant);
    let mut nums: Vec<Poly> = (0..ctx.len()).map(|u| Poly::var(&pctx, u)).collect();
    let mut dens: Vec<Poly> = vec![Poly::one(&pctx); ctx.len()];
    nums[var] = Poly::var(&pctx, var).sub(&rq);
    dens[var] = qq.clone();
    let fwd = SubstitutionMap::new_fractional(ctx, &pctx, nums, dens);

    let mut piece = Chart {
        id: format!("{}.slv_{vname}", chart.id),
        ctx: pctx.clone(),
        exceptionals: chart.exceptionals.clone(),
        principal: Vec::new(),
        units: chart.units.iter().map(|u| fwd.apply_poly(u)).collect(),
        parent: Some(chart.id.clone()),
        step_map: fwd.clone(),
        from_root: chart.from_root.compose(&fwd),
    };
    piece.units.push(qq);
    for p in &chart.principal {
        let pp = fwd.apply_poly(&p.poly).normalized();
        if !piece.saturate_units(&Ideal::principal(pp.clone())).is_unit() {
            piece.principal.push(PrincipalRecord { poly: pp, ..p.clone() });
        }
    }
    let j_piece = piece.saturate_units(&fwd.apply(&state.j));
    let y_piece = piece.saturate_units(&fwd.apply(y));
    let mut piece_state = ChartState { chart: piece, j: j_piece };
    piece_state.refresh_ledger();

    let children = blow_one_component(&piece_state, &y_piece, birth, b, report)?;
    let mut out = Vec::new();
    for (cs, m) in children {
        let full = match m {
            Some(mm) => fwd.compose(&mm),
            None => fwd.clone(),
        };
        out.push((cs, Some(full)));
    }

    // piece where the generator is a unit: the center misses it entirely
    let away = chart.localized_at(g.clone(), &format!("away_{vname}"));
    out.push((ChartState { chart: away, j: state.j.clone() }, None));
    Ok(out)
}

/// Blow up a smooth principal hypersurface that resists coordinatization.
/// The blow-up is an isomorphism: the ideal is divided by the defining
/// polynomial to the control and the hypersurface joins the chart's
/// principal divisors.  Only exact multiplicity `b` is supported, which
/// keeps the new ledger entry at zero; residual content is refused rather
/// than tracked.  Returns None when `y` is not principal.
fn retag_hypersurface(
    state: &ChartState,
    y: &Ideal,
    birth: usize,
    b: u64,
    report: &mut TransformReport,
) -> Result<Option<Vec<(ChartState, Option<SubstitutionMap>)>>> {
    let chart = &state.chart;
    if y.gens().len() != 1 {
        return Ok(None);
    }
    let h = y.gens()[0].normalized();
    let mut gens: Vec<Poly> = state.j.gens().to_vec();
    for _ in 0..b {
        let mut next = Vec::with_capacity(gens.len());
        for g in &gens {
            let q = g.divide_exact(&h).ok_or_else(|| {
                Error::NotPermissible(format!(
                    "controlled transform: {h}^{b} does not divide {g} on chart {}",
                    chart.id
                ))
            })?;
            next.push(q);
        }
        gens = next;
    }
    if gens.iter().all(|g| g.divide_exact(&h).is_some()) {
        return Err(Error::NotCoordinatizable(format!(
            "hypersurface V({h}) on chart {} keeps multiplicity above the control; \
             non-coordinate divisors with positive ledger content are unsupported",
            chart.id
        )));
    }
    let mut child = chart.clone();
    child.id = format!("{}.d{birth}", chart.id);
    child.parent = Some(chart.id.clone());
    child.step_map = SubstitutionMap::identity(&chart.ctx);
    child.principal.push(PrincipalRecord { poly: h, birth, sign: Sign::Plus });
    let mut cs = ChartState { chart: child, j: Ideal::new(&chart.ctx, gens) };
    cs.refresh_ledger();
    let idmap = SubstitutionMap::identity(&chart.ctx);
    report.substs.insert(cs.chart.id.clone(), (chart.id.clone(), idmap.clone()));
    report.a_new.insert(cs.chart.id.clone(), 0);
    Ok(Some(vec![(cs, Some(idmap))]))
}

/// Convenience: a one-chart basic object over a fresh root chart.
pub fn object_from_ideal(
    ctx: &crate::algebra::Ctx,
    j: Ideal,
    b: u64,
    divisors: &[(usize, crate::charts::Sign)],
) -> Result<BasicObject> {
    let chart = Chart::root("r", ctx, divisors);
    BasicObject::fresh(vec![ChartState { chart, j }], b)
}
