//! Induction on dimension: the simple pair attached to max t, a maximal
//! contact hypersurface, and the coefficient object one dimension down.
//!
//! Descent is stateless: it is recomputed from the current object at every
//! step, so no identification of charts across blow-ups is needed.

use std::collections::BTreeMap;

use num::ToPrimitive;

use crate::algebra::{codim_of, components_of, Ctx, Ideal, Poly, Q, VarContext};
use crate::basic_object::{BasicObject, ChartState, ClosedSet};
use crate::charts::{try_normalize_protected, Chart, NormalizeOutcome, SubstitutionMap};
use crate::invariants::TMax;
use crate::{Error, Result};

/// The codimension-one part of a closed set, as a union per chart.
pub fn r1_components(b: &BasicObject, locus: &ClosedSet) -> Result<ClosedSet> {
    let mut out = ClosedSet::new();
    for (id, ideal) in &locus.per_chart {
        let Some(state) = b.state(id) else { continue };
        let ideal = state.chart.saturate_units(ideal);
        if ideal.is_unit() {
            continue;
        }
        let mut union = None::<Ideal>;
        for c in components_of(&ideal)? {
            if codim_of(&c) == Some(1) {
                union = Some(match union {
                    None => c,
                    Some(u) => u.product(&c),
                });
            }
        }
        if let Some(u) = union {
            out.insert(id, u);
        }
    }
    Ok(out)
}

/// Intersection of pairs: Sing of the result is Sing(A,ac) ∩ Sing(B,bc).
pub fn pair_intersection(a: &Ideal, ac: u64, b: &Ideal, bc: u64) -> (Ideal, u64) {
    (a.power(bc).sum(&b.power(ac)), ac * bc)
}

/// ∏ over subsets F of `vars` with |F| = q of the ideal Σ_{i∈F} ⟨varᵢ⟩;
/// the unit ideal when there is no such subset.
fn k_product(ctx: &Ctx, vars: &[usize], q: usize) -> Ideal {
    use itertools::Itertools;
    if q == 0 || vars.len() < q {
        return Ideal::unit(ctx);
    }
    let mut out = None::<Ideal>;
    for f in vars.iter().combinations(q) {
        let sum = Ideal::of_vars(ctx, &f.iter().map(|v| **v).collect::<Vec<_>>());
        out = Some(match out {
            None => sum,
            Some(prev) => prev.product(&sum),
        });
    }
    out.unwrap()
}

/// The simple pair (D,e) attached to max t: one ideal per chart, one control.
pub struct SimplePair {
    pub d: BTreeMap<String, Ideal>,
    pub e: u64,
}

/// Build (D,e) with Sing(D,e) = Max t, by intersecting (J̄,a) with the
/// divisor-count pair (K(n),1) when n ≥ 1 and with (J,b) when a < b.
pub fn simple_from_tmax(b: &BasicObject, t: &TMax) -> Result<SimplePair> {
    let a_big = (t.value.0.clone() * Q::from_integer(b.b.into())).to_integer();
    let a = a_big.to_u64().ok_or_else(|| {
        Error::Internal(format!("max w-ord numerator {a_big} is out of range"))
    })?;
    if a == 0 {
        return Err(Error::Precondition("simple pair needs positive max w-ord".into()));
    }
    let q = t.value.1 as usize;
    let mut d = BTreeMap::new();
    let mut e = 0;
    for s in &b.states {
        let mut pair = (s.bar_ideal()?, a);
        if q >= 1 {
            let k = k_product(&s.chart.ctx, &t.e_minus[&s.chart.id], q);
            pair = pair_intersection(&pair.0, pair.1, &k, 1);
        }
        if a < b.b {
            pair = pair_intersection(&pair.0, pair.1, &s.j, b.b);
        }
        e = pair.1;
        let sing_d = s.chart.saturate_units(&pair.0.delta_pow(pair.1 - 1));
        let agrees = match t.locus.ideal_for(&s.chart.id) {
            Some(expected) => sing_d.same_zero_set(expected),
            None => sing_d.is_unit(),
        };
        if !agrees {
            return Err(Error::Internal(format!(
                "simple pair misses Max t on chart {}",
                s.chart.id
            )));
        }
        d.insert(s.chart.id.clone(), pair.0);
    }
    Ok(SimplePair { d, e })
}

/// Per-chart bridge between an object and its coefficient object: the
/// contact variable and the coordinate change that straightened it.
pub struct ChartLink {
    pub z: usize,
    pub forward: SubstitutionMap,
    pub inverse: SubstitutionMap,
}

/// One dimension down: the coefficient object and the chart links, or no
/// object at all when D is a power of the contact coordinate (bold regular,
/// so Max t itself is the center).
pub struct DescentFrame {
    pub lower: Option<BasicObject>,
    pub links: BTreeMap<String, ChartLink>,
    pub e: u64,
}

impl DescentFrame {
    /// Pull a center of the coefficient object back upstairs: adjoin the
    /// contact hyperplane and undo the straightening change of coordinates.
    pub fn lift_center(&self, lower_center: &ClosedSet) -> ClosedSet {
        let mut out = ClosedSet::new();
        for (id, ideal) in &lower_center.per_chart {
            let link = &self.links[id];
            let upper = link.inverse.source();
            let mut gens: Vec<Poly> =
                ideal.gens().iter().map(|g| embed_poly(g, upper, link.z)).collect();
            gens.push(Poly::var(upper, link.z));
            out.insert(id, link.inverse.apply(&Ideal::new(upper, gens)));
        }
        out
    }
}

/// Re-express a polynomial on V(z) in the ambient chart.
fn embed_poly(p: &Poly, upper: &Ctx, z: usize) -> Poly {
    let assigns: Vec<Poly> =
        (0..upper.len() - 1).map(|w| Poly::var(upper, w + usize::from(w >= z))).collect();
    p.substitute(upper, &assigns)
}

/// Restrict a polynomial to V(z), renaming the remaining coordinates down.
fn restrict_poly(p: &Poly, lower: &Ctx, z: usize) -> Poly {
    let assigns: Vec<Poly> = (0..lower.len() + 1)
        .map(|w| {
            if w == z {
                Poly::zero(lower)
            } else {
                Poly::var(lower, w - usize::from(w > z))
            }
        })
        .collect();
    p.substitute(lower, &assigns)
}

/// Choose a maximal-contact element on one chart: an order-one element of
/// Δ^{e−1}(D) that becomes a coordinate without moving any protected
/// hyperplane.  Plain variables beat translated ones, non-exceptional
/// coordinates beat exceptional-but-unprotected ones, earlier context order
/// breaks ties.
fn contact_on_chart(
    chart: &Chart,
    d: &Ideal,
    e: u64,
    sing_d: &Ideal,
    protected: &[bool],
) -> Result<(usize, SubstitutionMap, SubstitutionMap)> {
    let t = d.delta_pow(e - 1);
    let exceptional = chart.exceptional_vars();
    let mut candidates: Vec<(u8, usize, Poly)> = Vec::new();
    for g in t.gens() {
        if let Some(v) = g.as_scaled_var() {
            if !protected[v] {
                let rank = if exceptional.contains(&v) { 2 } else { 0 };
                candidates.push((rank, v, g.clone()));
            }
            continue;
        }
        for v in 0..chart.ctx.len() {
            if protected[v] || g.degree_in_var(v) != 1 {
                continue;
            }
            let c = g.coefficient_of(v, 1);
            if c.is_constant() && !c.is_zero() {
                let rank = if exceptional.contains(&v) { 3 } else { 1 };
                candidates.push((rank, v, g.clone()));
                break;
            }
        }
    }
    candidates.sort_by_key(|(rank, v, _)| (*rank, *v));
    for (_, v, g) in candidates {
        // only v may move: a translated contact must not drag other planes
        let mut mask = vec![true; chart.ctx.len()];
        mask[v] = false;
        let NormalizeOutcome::Done { forward, inverse, coord_vars } =
            try_normalize_protected(chart, &Ideal::principal(g), &mask)
        else {
            continue;
        };
        let z = coord_vars[0];
        if forward.apply(sing_d).vanishes_on(&Ideal::of_vars(&chart.ctx, &[z])) {
            return Ok((z, forward, inverse));
        }
    }
    Err(Error::NoContactElement(format!(
        "no order-one contact element on chart {}",
        chart.id
    )))
}

/// Descend one dimension below Max t: build the coefficient object C on each
/// maximal contact hyperplane, with control e!, inheriting the divisors born
/// after s₀.  Checks that downstairs Sing matches upstairs Sing exactly.
pub fn coefficient_descent(b: &BasicObject, t: &TMax) -> Result<DescentFrame> {
    let pair = simple_from_tmax(b, t)?;
    let e = pair.e;
    let e_fact: u64 = (2..=e).product::<u64>().max(1);

    let mut links = BTreeMap::new();
    let mut lower_states = Vec::new();
    let mut zero_charts = 0usize;
    let mut total_charts = 0usize;

    for (id, sing_upper) in &t.locus.per_chart {
        total_charts += 1;
        let s = b.state(id).expect("locus charts exist");
        let d = &pair.d[id];
        let mut protected = vec![false; s.chart.ctx.len()];
        for r in &s.chart.exceptionals {
            if r.birth > t.s_zero {
                protected[r.var] = true;
            }
        }
        let (z, forward, inverse) = contact_on_chart(&s.chart, d, e, sing_upper, &protected)?;
        let d_n = forward.apply(d);
        let sing_n = forward.apply(sing_upper);
        let units_n: Vec<Poly> = s.chart.units.iter().map(|u| forward.apply_poly(u)).collect();

        let lower_ctx = VarContext::without(&s.chart.ctx, z);
        let mut gens = Vec::new();
        for g in d_n.gens() {
            for i in 0..e {
                let c = g.coefficient_of(z, i as u32);
                if c.is_zero() {
                    continue;
                }
                gens.push(restrict_poly(&c, &lower_ctx, z).pow(e_fact / (e - i)));
            }
        }
        links.insert(id.clone(), ChartLink { z, forward, inverse });
        if gens.is_empty() {
            zero_charts += 1;
            continue;
        }
        let c_ideal = Ideal::new(&lower_ctx, gens);

        let mut exceptionals = Vec::new();
        for r in &s.chart.exceptionals {
            if r.birth <= t.s_zero {
                continue;
            }
            if r.var == z {
                return Err(Error::Internal(format!(
                    "divisor born at step {} is not transversal to the contact coordinate on chart {id}",
                    r.birth
                )));
            }
            let var = r.var - usize::from(r.var > z);
            let mut nr = r.clone();
            nr.var = var;
            nr.a_num = ChartState::exact_var_power(&c_ideal, var) as u64;
            exceptionals.push(nr);
        }
        let mut units = Vec::new();
        for u in &units_n {
            let ru = restrict_poly(u, &lower_ctx, z);
            if ru.is_zero() {
                return Err(Error::Internal(format!(
                    "a unit of chart {id} vanishes on the contact hyperplane"
                )));
            }
            units.push(ru);
        }
        let lower_chart = Chart {
            id: id.clone(),
            ctx: lower_ctx.clone(),
            exceptionals,
            principal: Vec::new(),
            units,
            parent: None,
            step_map: SubstitutionMap::identity(&lower_ctx),
            from_root: SubstitutionMap::identity(&lower_ctx),
        };
        let lower_state = ChartState { chart: lower_chart, j: c_ideal };

        // downstairs Sing must be upstairs Sing, seen inside V(z)
        let sing_c = lower_state.sing_ideal(e_fact);
        let upper_ctx = &s.chart.ctx;
        let mut lifted: Vec<Poly> =
            sing_c.gens().iter().map(|g| embed_poly(g, upper_ctx, z)).collect();
        lifted.push(Poly::var(upper_ctx, z));
        let mut lifted = Ideal::new(upper_ctx, lifted);
        for u in &units_n {
            lifted = lifted.saturate(u);
        }
        if !lifted.same_zero_set(&sing_n) {
            return Err(Error::Internal(format!(
                "coefficient object changes the singular locus on chart {id}"
            )));
        }
        lower_states.push(lower_state);
    }

    if zero_charts == total_charts {
        return Ok(DescentFrame { lower: None, links, e });
    }
    if zero_charts > 0 {
        return Err(Error::Internal(
            "coefficient ideal vanishes on some charts of Max t but not all".into(),
        ));
    }
    Ok(DescentFrame {
        lower: Some(BasicObject {
            states: lower_states,
            b: e_fact,
            step: 0,
            history: Vec::new(),
            partition_snapshot: None,
        }),
        links,
        e,
    })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::basic_object::object_from_ideal;
    use crate::invariants::t_max;

    #[test]
    fn pair_intersection_matches_the_frozen_example() {
        let ctx = VarContext::new(&["x", "y"]);
        let (d, e) = pair_intersection(&Ideal::parse(&ctx, &["x^2"]), 2, &Ideal::parse(&ctx, &["y"]), 1);
        assert_eq!(e, 2);
        assert!(d.equals(&Ideal::parse(&ctx, &["x^2", "y^2"])));
    }

    #[test]
    fn k_product_over_small_sets() {
        let ctx = VarContext::new(&["x", "y"]);
        assert!(k_product(&ctx, &[0, 1], 2).equals(&Ideal::parse(&ctx, &["x", "y"])));
        assert!(k_product(&ctx, &[0, 1], 1).equals(&Ideal::parse(&ctx, &["x*y"])));
        assert!(k_product(&ctx, &[0], 2).is_unit());
    }

    #[test]
    fn r1_keeps_only_hypersurface_components() {
        let ctx = VarContext::new(&["x", "y"]);
        let b = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2"]), 2, &[]).unwrap();
        let mut locus = ClosedSet::new();
        locus.insert("r", Ideal::parse(&ctx, &["x*y"]));
        let r1 = r1_components(&b, &locus).unwrap();
        assert!(r1.ideal_for("r").unwrap().same_zero_set(&Ideal::parse(&ctx, &["x*y"])));

        let mut pt = ClosedSet::new();
        pt.insert("r", Ideal::parse(&ctx, &["x", "y"]));
        assert!(r1_components(&b, &pt).unwrap().is_empty());

        let mut mixed = ClosedSet::new();
        mixed.insert("r", Ideal::parse(&ctx, &["x*y", "x^2 - x"]));
        // V(xy, x^2-x) = V(x) ∪ {(1,0)}: only the line survives
        let r1 = r1_components(&b, &mixed).unwrap();
        assert!(r1.ideal_for("r").unwrap().same_zero_set(&Ideal::parse(&ctx, &["x"])));
    }

    #[test]
    fn cusp_descends_to_its_coefficient_ideal() {
        let ctx = VarContext::new(&["x", "y"]);
        let b = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - y^3"]), 2, &[]).unwrap();
        let t = t_max(&b).unwrap();
        let pair = simple_from_tmax(&b, &t).unwrap();
        assert_eq!(pair.e, 2);
        assert!(pair.d["r"].equals(&Ideal::parse(&ctx, &["x^2 - y^3"])));

        let frame = coefficient_descent(&b, &t).unwrap();
        assert_eq!(frame.e, 2);
        let lower = frame.lower.as_ref().unwrap();
        assert_eq!(lower.b, 2);
        assert_eq!(lower.states.len(), 1);
        let lc = &lower.states[0];
        assert_eq!(lc.chart.ctx.names(), &["y"]);
        assert!(lc.j.equals(&Ideal::parse(&lc.chart.ctx, &["y^3"])));
        assert_eq!(frame.links["r"].z, 0);

        // lifting the origin downstairs gives the origin upstairs
        let mut low_center = ClosedSet::new();
        low_center.insert("r", Ideal::of_vars(&lc.chart.ctx, &[0]));
        let lifted = frame.lift_center(&low_center);
        assert!(lifted.ideal_for("r").unwrap().equals(&Ideal::parse(&ctx, &["y", "x"])));
    }

    #[test]
    fn higher_tangency_keeps_the_full_coefficient_power() {
        let ctx = VarContext::new(&["x", "y"]);
        let b = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - y^5"]), 2, &[]).unwrap();
        let t = t_max(&b).unwrap();
        let frame = coefficient_descent(&b, &t).unwrap();
        let lower = frame.lower.as_ref().unwrap();
        let lc = &lower.states[0];
        assert!(lc.j.equals(&Ideal::parse(&lc.chart.ctx, &["y^5"])));
        assert_eq!(lower.b, 2);
    }

    #[test]
    fn pure_power_is_bold_regular() {
        let ctx = VarContext::new(&["x", "y"]);
        let b = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2"]), 2, &[]).unwrap();
        let t = t_max(&b).unwrap();
        let frame = coefficient_descent(&b, &t).unwrap();
        assert!(frame.lower.is_none());
        assert_eq!(frame.links["r"].z, 0);
    }

    #[test]
    fn umbrella_descends_to_the_plane()  {
        let ctx = VarContext::new(&["x", "y", "z"]);
        let b = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - z*y^2"]), 2, &[]).unwrap();
        let t = t_max(&b).unwrap();
        assert_eq!(t.value.1, 0);
        let frame = coefficient_descent(&b, &t).unwrap();
        let lower = frame.lower.as_ref().unwrap();
        let lc = &lower.states[0];
        assert_eq!(lc.chart.ctx.names(), &["y", "z"]);
        assert!(lc.j.equals(&Ideal::parse(&lc.chart.ctx, &["z*y^2"])));
        // Max t is the pinch line x = y = 0
        assert!(t
            .locus
            .ideal_for("r")
            .unwrap()
            .same_zero_set(&Ideal::parse(&ctx, &["x", "y"])));
    }

    #[test]
    fn old_divisor_coordinates_may_carry_the_contact() {
        use crate::basic_object::{BasicObject, ChartState};
        use crate::charts::{Chart, Sign};
        // a strict hypersurface tangent to an old divisor V(y): the contact
        // may sit on the divisor coordinate because E⁻ is not inherited
        let ctx = VarContext::new(&["x", "y"]);
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(1, Sign::Plus)]);
            c.exceptionals[0].birth = 1;
            c.exceptionals[0].a_num = 1;
            c
        };
        let j = Ideal::parse(&ctx, &["y*(x^2 - y)"]);
        let b = BasicObject {
            states: vec![ChartState { chart, j }],
            b: 1,
            step: 1,
            history: vec![],
            partition_snapshot: None,
        };
        let t = t_max(&b).unwrap();
        assert_eq!(t.value.1, 1);
        assert_eq!(t.s_zero, 1);
        let frame = coefficient_descent(&b, &t).unwrap();
        let lower = frame.lower.as_ref().unwrap();
        let lc = &lower.states[0];
        // contact z = y; coefficient ideal picks up the tangency direction
        assert_eq!(frame.links["r"].z, 1);
        assert!(lc.j.equals(&Ideal::parse(&lc.chart.ctx, &["x^2"])));
        assert!(lc.chart.exceptionals.is_empty());
    }

    #[test]
    fn descent_straightens_a_translated_contact() {
        // D = (x - y^2)^2 - y^7: maximal contact needs x ↦ x + y^2 first
        let ctx = VarContext::new(&["x", "y"]);
        let j = Ideal::parse(&ctx, &["(x - y^2)^2 - y^7"]);
        let b = object_from_ideal(&ctx, j, 2, &[]).unwrap();
        let t = t_max(&b).unwrap();
        let frame = coefficient_descent(&b, &t).unwrap();
        let lower = frame.lower.as_ref().unwrap();
        let lc = &lower.states[0];
        assert!(lc.j.equals(&Ideal::parse(&lc.chart.ctx, &["y^7"])));
        // the lift of the downstairs origin lands on the curve point, in
        // original coordinates
        let mut low_center = ClosedSet::new();
        low_center.insert("r", Ideal::of_vars(&lc.chart.ctx, &[0]));
        let lifted = frame.lift_center(&low_center);
        assert!(lifted
            .ideal_for("r")
            .unwrap()
            .equals(&Ideal::parse(&ctx, &["y", "x"])));
    }
}
