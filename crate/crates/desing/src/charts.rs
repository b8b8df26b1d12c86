//! Affine charts, exceptional-divisor records, blow-up chart construction,
//! coordinate changes, and product-with-a-line maps.
//!
//! A chart is an affine piece of the ambient smooth scheme with a list of
//! exceptional divisors, each kept as a coordinate hyperplane `V(var)`.
//! Blow-ups along coordinate centers produce one chart per center variable
//! with the standard monomial substitution.  Centers that are smooth but not
//! coordinate are brought to coordinate form by `normalize_center`, a
//! translation plus unitriangular-elimination heuristic that refuses (rather
//! than approximates) anything outside its scope.

use num::{One, Zero};

use crate::algebra::{cmp_degrevlex, Ctx, Ideal, Poly, Q, TermOrder, VarContext};
use crate::{Error, Result};

/// Partition tag for an exceptional divisor: `Minus` marks membership in the
/// old-divisor class E⁻, `Plus` the complementary class E⁺.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Keyword used in problem files and JSON output.
    pub fn word(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

/// One exceptional divisor of a chart: the coordinate hyperplane of `var`,
/// its birth step, its partition tag, and the numerator of its ledger
/// exponent (the denominator is the owning object's control).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExceptionalRecord {
    pub var: usize,
    pub birth: usize,
    pub sign: Sign,
    pub a_num: u64,
}

/// An exceptional divisor that is smooth and principal but not a coordinate
/// hyperplane.  Such a divisor appears when a codimension-one center cannot
/// be brought to coordinate form: its blow-up is an isomorphism that divides
/// the ideal and marks the hypersurface.  Its ledger exponent is pinned at
/// zero; configurations that would give it positive content are refused.
#[derive(Clone, PartialEq, Debug)]
pub struct PrincipalRecord {
    pub poly: Poly,
    pub birth: usize,
    pub sign: Sign,
}

/// A total assignment of images to the source context's variables.  Each
/// image is a fraction `assignment / denominator` over the target context;
/// denominators other than one are only legal when the target chart declares
/// them invertible, and polynomial-level application then returns the
/// numerator after clearing, which agrees with the true image up to units.
#[derive(Clone, Debug)]
pub struct SubstitutionMap {
    source: Ctx,
    target: Ctx,
    assignments: Vec<Poly>,
    denominators: Vec<Poly>,
}

impl SubstitutionMap {
    /// Map sending every variable of `source` to the polynomial of `target`
    /// at the same position in `assignments`.
    pub fn new(source: &Ctx, target: &Ctx, assignments: Vec<Poly>) -> Self {
        let denominators = vec![Poly::one(target); assignments.len()];
        SubstitutionMap::new_fractional(source, target, assignments, denominators)
    }

    /// Map whose images are the fractions `assignments[v] / denominators[v]`.
    pub fn new_fractional(
        source: &Ctx,
        target: &Ctx,
        assignments: Vec<Poly>,
        denominators: Vec<Poly>,
    ) -> Self {
        assert_eq!(assignments.len(), source.len(), "substitution must be total");
        assert_eq!(denominators.len(), source.len(), "one denominator per variable");
        let mut assignments = assignments;
        let mut denominators = denominators;
        for v in 0..assignments.len() {
            assert!(assignments[v].ctx() == target, "assignment outside the target context");
            assert!(denominators[v].ctx() == target, "denominator outside the target context");
            assert!(!denominators[v].is_zero(), "zero denominator in a substitution");
            if let Some(c) = denominators[v].as_constant() {
                if !c.is_one() {
                    assignments[v] = assignments[v].scale(&(Q::from_integer(1.into()) / c));
                    denominators[v] = Poly::one(target);
                }
            } else if let Some(q) = assignments[v].divide_exact(&denominators[v]) {
                assignments[v] = q;
                denominators[v] = Poly::one(target);
            }
        }
        SubstitutionMap { source: source.clone(), target: target.clone(), assignments, denominators }
    }

    /// Identity on `ctx`.
    pub fn identity(ctx: &Ctx) -> Self {
        let assignments = (0..ctx.len()).map(|v| Poly::var(ctx, v)).collect();
        SubstitutionMap::new(ctx, ctx, assignments)
    }

    pub fn source(&self) -> &Ctx {
        &self.source
    }

    pub fn target(&self) -> &Ctx {
        &self.target
    }

    /// Numerator of the image of the source variable `v`.
    pub fn image_of(&self, v: usize) -> &Poly {
        &self.assignments[v]
    }

    /// Denominator of the image of the source variable `v`.
    pub fn denominator_of(&self, v: usize) -> &Poly {
        &self.denominators[v]
    }

    /// True when every image is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.denominators.iter().all(|d| d.as_constant().is_some())
    }

    /// The image of `v` as display text, with the denominator when present.
    pub fn image_text(&self, v: usize) -> String {
        if self.denominators[v].as_constant().is_some() {
            self.assignments[v].to_string()
        } else {
            format!("({})/({})", self.assignments[v], self.denominators[v])
        }
    }

    /// Image of `f` as a fraction: the substituted polynomial cleared of
    /// denominators, and the clearing factor ∏ denᵥ^(deg_v f).
    pub fn apply_fraction(&self, f: &Poly) -> (Poly, Poly) {
        assert!(f.ctx() == &self.source, "polynomial outside the source context");
        if self.is_polynomial() {
            return (f.substitute(&self.target, &self.assignments), Poly::one(&self.target));
        }
        let n = self.assignments.len();
        let degs: Vec<u32> = (0..n).map(|i| f.degree_in_var(i)).collect();
        let mut num = Poly::zero(&self.target);
        for (e, c) in f.terms() {
            let mut term = Poly::constant(&self.target, c.clone());
            for i in 0..n {
                if e[i] > 0 {
                    term = term.mul(&self.assignments[i].pow(e[i] as u64));
                }
                let rest = degs[i] - e[i];
                if rest > 0 && self.denominators[i].as_constant().is_none() {
                    term = term.mul(&self.denominators[i].pow(rest as u64));
                }
            }
            num = num.add(&term);
        }
        let mut den = Poly::one(&self.target);
        for i in 0..n {
            if degs[i] > 0 && self.denominators[i].as_constant().is_none() {
                den = den.mul(&self.denominators[i].pow(degs[i] as u64));
            }
        }
        if let Some(q) = num.divide_exact(&den) {
            return (q, Poly::one(&self.target));
        }
        (num, den)
    }

    /// Apply to a polynomial over the source context.  For a map with
    /// denominators this is the cleared numerator; ideal-level consumers on
    /// the target chart recover the exact ideal by saturating at its units.
    pub fn apply_poly(&self, f: &Poly) -> Poly {
        self.apply_fraction(f).0
    }

    /// Apply generator-wise to an ideal, normalizing the result.
    pub fn apply(&self, i: &Ideal) -> Ideal {
        Ideal::new(&self.target, i.gens().iter().map(|g| self.apply_poly(g)).collect())
    }

    /// Composition: first `self` (A to B), then `then` (B to C), giving A to C.
    pub fn compose(&self, then: &SubstitutionMap) -> SubstitutionMap {
        assert!(self.target == then.source, "composition contexts do not match");
        if self.is_polynomial() && then.is_polynomial() {
            let assignments = self.assignments.iter().map(|a| then.apply_poly(a)).collect();
            return SubstitutionMap::new(&self.source, &then.target, assignments);
        }
        let mut assignments = Vec::with_capacity(self.assignments.len());
        let mut denominators = Vec::with_capacity(self.assignments.len());
        for v in 0..self.assignments.len() {
            let (an, ad) = then.apply_fraction(&self.assignments[v]);
            let (dn, dd) = then.apply_fraction(&self.denominators[v]);
            assignments.push(an.mul(&dd));
            denominators.push(ad.mul(&dn));
        }
        SubstitutionMap::new_fractional(&self.source, &then.target, assignments, denominators)
    }
}

/// Generator-wise substitution into an ideal.
pub fn apply_subst(i: &Ideal, m: &SubstitutionMap) -> Ideal {
    m.apply(i)
}

/// An affine chart: a variable context, exceptional records, localization
/// units (polynomials declared invertible on this chart), and provenance.
#[derive(Clone, Debug)]
pub struct Chart {
    pub id: String,
    pub ctx: Ctx,
    pub exceptionals: Vec<ExceptionalRecord>,
    /// Exceptional divisors that are not coordinate hyperplanes.
    pub principal: Vec<PrincipalRecord>,
    /// Polynomials invertible on this chart; ideals of loci are saturated by
    /// these before any geometric question is asked.
    pub units: Vec<Poly>,
    pub parent: Option<String>,
    /// Substitution from the parent chart's context to this one.
    pub step_map: SubstitutionMap,
    /// Composed substitution from the root chart's context to this one.
    pub from_root: SubstitutionMap,
}

impl Chart {
    /// Root chart over `ctx` with initial divisors (birth 0).
    pub fn root(id: &str, ctx: &Ctx, divisors: &[(usize, Sign)]) -> Chart {
        let exceptionals = divisors
            .iter()
            .map(|&(var, sign)| ExceptionalRecord { var, birth: 0, sign, a_num: 0 })
            .collect();
        Chart {
            id: id.to_string(),
            ctx: ctx.clone(),
            exceptionals,
            principal: Vec::new(),
            units: Vec::new(),
            parent: None,
            step_map: SubstitutionMap::identity(ctx),
            from_root: SubstitutionMap::identity(ctx),
        }
    }

    /// The record on `var`, if that hyperplane is exceptional here.
    pub fn record_for(&self, var: usize) -> Option<&ExceptionalRecord> {
        self.exceptionals.iter().find(|r| r.var == var)
    }

    /// Variables carrying exceptional divisors, in context order.
    pub fn exceptional_vars(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.exceptionals.iter().map(|r| r.var).collect();
        vars.sort_unstable();
        vars
    }

    /// Saturate an ideal by this chart's units (no-op without units).
    pub fn saturate_units(&self, i: &Ideal) -> Ideal {
        let mut out = i.clone();
        for u in &self.units {
            out = out.saturate(u);
        }
        out
    }

    /// A chart identical to this one with `u` adjoined as a unit.  Principal
    /// divisors with no points on the localized piece are dropped.
    pub fn localized_at(&self, u: Poly, id_suffix: &str) -> Chart {
        let mut c = self.clone();
        c.id = format!("{}.{}", self.id, id_suffix);
        c.units.push(u);
        let kept: Vec<PrincipalRecord> = c
            .principal
            .iter()
            .filter(|p| !c.saturate_units(&Ideal::principal(p.poly.clone())).is_unit())
            .cloned()
            .collect();
        c.principal = kept;
        c
    }
}

/// Outcome of the coordinate-change heuristic, before it is flattened into
/// an error: callers that can localize inspect the blocked case directly.
pub enum NormalizeOutcome {
    /// Invertible change found: forward map (old coordinates in terms of
    /// new), inverse map, and the variables generating the image of Y.
    Done { forward: SubstitutionMap, inverse: SubstitutionMap, coord_vars: Vec<usize> },
    /// Progress requires translating an exceptional hyperplane's variable,
    /// which would move the divisor; the offending variable is reported.
    BlockedExceptional { var: usize },
    /// The triangular heuristic ran out of moves.  The partial change is
    /// returned: after `forward` the center is ⟨coord_vars⟩ + ⟨remaining⟩
    /// with every remaining generator resisting coordinate form.
    Stuck {
        forward: SubstitutionMap,
        inverse: SubstitutionMap,
        coord_vars: Vec<usize>,
        remaining: Vec<Poly>,
        reason: String,
    },
}

/// Try to bring `y` to coordinate form on `c` by translations and
/// unitriangular eliminations that fix every exceptional hyperplane.
pub fn try_normalize(c: &Chart, y: &Ideal) -> NormalizeOutcome {
    let mut protected = vec![false; c.ctx.len()];
    for r in &c.exceptionals {
        protected[r.var] = true;
    }
    try_normalize_protected(c, y, &protected)
}

/// As [`try_normalize`], but with an explicit set of unmovable coordinates
/// instead of the chart's full exceptional list.
pub fn try_normalize_protected(c: &Chart, y: &Ideal, protected: &[bool]) -> NormalizeOutcome {
    let ctx = &c.ctx;
    let n = ctx.len();
    let exceptional = protected;
    let mut forward = SubstitutionMap::identity(ctx);
    let mut inverse = SubstitutionMap::identity(ctx);
    let mut current = y.groebner_basis(TermOrder::DegRevLex);
    let mut coord_vars: Vec<usize> = Vec::new();

    for _round in 0..=n {
        // coordinate generators are free: in a reduced basis no other
        // generator mentions such a variable at all
        let mut remaining: Vec<Poly> = Vec::new();
        for g in current.gens() {
            match g.as_scaled_var() {
                Some(v) => {
                    if !coord_vars.contains(&v) {
                        coord_vars.push(v);
                    }
                }
                None => remaining.push(g.clone()),
            }
        }
        if remaining.is_empty() {
            coord_vars.sort_unstable();
            let image = Ideal::of_vars(ctx, &coord_vars);
            assert!(
                image.equals(&forward.apply(y)),
                "coordinate change did not bring the center to coordinate form"
            );
            return NormalizeOutcome::Done { forward, inverse, coord_vars };
        }

        // otherwise eliminate one variable that occurs linearly with a
        // constant coefficient, preferring non-exceptional variables
        let mut pick: Option<(usize, Q, Poly)> = None;
        for g in &remaining {
            for v in 0..n {
                if coord_vars.contains(&v) || exceptional[v] {
                    continue;
                }
                if g.degree_in_var(v) != 1 {
                    continue;
                }
                if let Some(cst) = g.coefficient_of(v, 1).as_constant() {
                    if !cst.is_zero() {
                        pick = Some((v, cst, g.coefficient_of(v, 0)));
                        break;
                    }
                }
            }
            if pick.is_some() {
                break;
            }
        }
        let Some((v, cst, h)) = pick else {
            // report an exceptional blocker if one explains the failure
            for g in &remaining {
                for v in 0..n {
                    if !exceptional[v] || g.degree_in_var(v) != 1 {
                        continue;
                    }
                    if let Some(cst) = g.coefficient_of(v, 1).as_constant() {
                        if !cst.is_zero() {
                            return NormalizeOutcome::BlockedExceptional { var: v };
                        }
                    }
                }
            }
            let reason =
                format!("no linear variable with constant coefficient in {current:?}");
            coord_vars.sort_unstable();
            return NormalizeOutcome::Stuck { forward, inverse, coord_vars, remaining, reason };
        };

        // new coordinate v' = v + h/c, so old v = v' - h/c
        let shift = h.scale(&(Q::zero() - Q::from_integer(1.into()) / cst.clone()));
        let mut fwd_assign: Vec<Poly> = (0..n).map(|u| Poly::var(ctx, u)).collect();
        fwd_assign[v] = Poly::var(ctx, v).add(&shift);
        let fwd_step = SubstitutionMap::new(ctx, ctx, fwd_assign);
        let mut inv_assign: Vec<Poly> = (0..n).map(|u| Poly::var(ctx, u)).collect();
        inv_assign[v] = Poly::var(ctx, v).sub(&shift);
        let inv_step = SubstitutionMap::new(ctx, ctx, inv_assign);

        forward = forward.compose(&fwd_step);
        inverse = inv_step.compose(&inverse);
        current = fwd_step.apply(&current).groebner_basis(TermOrder::DegRevLex);
    }
    NormalizeOutcome::Stuck {
        forward,
        inverse,
        coord_vars,
        remaining: Vec::new(),
        reason: "elimination did not terminate".into(),
    }
}

/// Coordinate change bringing smooth `y` to the form ⟨coordinate vars⟩,
/// fixing all exceptional hyperplanes.
pub fn normalize_center(
    c: &Chart,
    y: &Ideal,
) -> Result<(SubstitutionMap, SubstitutionMap, Vec<usize>)> {
    if y.is_unit() {
        return Err(Error::Precondition("cannot coordinatize the unit ideal".into()));
    }
    match try_normalize(c, y) {
        NormalizeOutcome::Done { forward, inverse, coord_vars } => {
            Ok((forward, inverse, coord_vars))
        }
        NormalizeOutcome::BlockedExceptional { var } => Err(Error::NotCoordinatizable(format!(
            "center requires translating the exceptional hyperplane V({}) on chart {}",
            c.ctx.name(var),
            c.id
        ))),
        NormalizeOutcome::Stuck { reason, .. } => Err(Error::NotCoordinatizable(format!(
            "chart {}: {reason}",
            c.id
        ))),
    }
}

/// Blow up a coordinate center: one chart per center variable, each with the
/// standard substitution and updated exceptional records.  The new divisor's
/// record carries `birth` with an empty ledger entry; the owner fills it.
pub fn blowup(c: &Chart, coord_vars: &[usize], birth: usize) -> Vec<Chart> {
    assert!(!coord_vars.is_empty(), "blow-up center must be nonempty");
    let ctx = &c.ctx;
    let mut sorted = coord_vars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), coord_vars.len(), "center variables must be distinct");

    if sorted.len() == 1 {
        // codimension-1: an isomorphism that marks the hyperplane
        let k = sorted[0];
        let mut chart = c.clone();
        chart.id = format!("{}.{}", c.id, ctx.name(k));
        chart.parent = Some(c.id.clone());
        chart.step_map = SubstitutionMap::identity(ctx);
        chart.exceptionals.retain(|r| r.var != k);
        chart.exceptionals.push(ExceptionalRecord { var: k, birth, sign: Sign::Plus, a_num: 0 });
        return vec![chart];
    }

    let mut out = Vec::new();
    for &k in &sorted {
        let assignments: Vec<Poly> = (0..ctx.len())
            .map(|i| {
                if i != k && sorted.contains(&i) {
                    Poly::var(ctx, i).mul(&Poly::var(ctx, k))
                } else {
                    Poly::var(ctx, i)
                }
            })
            .collect();
        let step_map = SubstitutionMap::new(ctx, ctx, assignments);
        let mut exceptionals: Vec<ExceptionalRecord> = c
            .exceptionals
            .iter()
            .filter(|r| r.var != k)
            .cloned()
            .collect();
        exceptionals.push(ExceptionalRecord { var: k, birth, sign: Sign::Plus, a_num: 0 });
        let units = c.units.iter().map(|u| step_map.apply_poly(u)).collect();
        let e = Poly::var(ctx, k);
        let principal = c
            .principal
            .iter()
            .map(|p| {
                let mut g = step_map.apply_poly(&p.poly);
                while let Some(q) = g.divide_exact(&e) {
                    g = q;
                }
                PrincipalRecord { poly: g, ..p.clone() }
            })
            .collect();
        out.push(Chart {
            id: format!("{}.{}", c.id, ctx.name(k)),
            ctx: ctx.clone(),
            exceptionals,
            principal,
            units,
            parent: Some(c.id.clone()),
            step_map: step_map.clone(),
            from_root: c.from_root.compose(&step_map),
        });
    }
    out
}

/// Extend the chart by one fresh line coordinate; records and units carry
/// over verbatim.  Returns the chart and the new variable's index.
pub fn product_with_line(c: &Chart) -> (Chart, usize) {
    let (ext, new_var) = VarContext::extend(&c.ctx, "t");
    let injection = SubstitutionMap::new(
        &c.ctx,
        &ext,
        (0..c.ctx.len()).map(|v| Poly::var(&ext, v)).collect(),
    );
    let chart = Chart {
        id: format!("{}.L", c.id),
        ctx: ext.clone(),
        exceptionals: c.exceptionals.clone(),
        principal: c
            .principal
            .iter()
            .map(|p| PrincipalRecord { poly: injection.apply_poly(&p.poly), ..p.clone() })
            .collect(),
        units: c.units.iter().map(|u| injection.apply_poly(u)).collect(),
        parent: Some(c.id.clone()),
        step_map: injection.clone(),
        from_root: c.from_root.compose(&injection),
    };
    (chart, new_var)
}

/// Deterministic generator text for transcripts.
pub fn center_text(i: &Ideal) -> String {
    let mut gens: Vec<String> = i.gens().iter().map(|g| g.to_string()).collect();
    gens.sort();
    format!("V({})", gens.join(", "))
}

/// Order polynomials for stable transcript output.
pub fn cmp_poly_display(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    let la = a.leading(&cmp_degrevlex).map(|(e, _)| e.clone());
    let lb = b.leading(&cmp_degrevlex).map(|(e, _)| e.clone());
    match (la, lb) {
        (Some(ea), Some(eb)) => cmp_degrevlex(&ea, &eb).then_with(|| a.to_string().cmp(&b.to_string())),
        (a, b) => a.cmp(&b),
    }
}

/// Fresh root context plus chart from variable names.
pub fn root_chart(names: &[&str], divisors: &[(usize, Sign)]) -> (Ctx, Chart) {
    let ctx = VarContext::new(names);
    let chart = Chart::root("r", &ctx, divisors);
    (ctx, chart)
}

#[cfg(test)]
mod test {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn point_blowup_charts_and_records() {
        let (ctx, c) = root_chart(&["x", "y"], &[]);
        let charts = blowup(&c, &[0, 1], 1);
        assert_eq!(charts.len(), 2);
        assert_eq!(charts[0].id, "r.x");
        assert_eq!(charts[1].id, "r.y");
        // y-chart: x -> x*y
        let f = Poly::parse(&ctx, "x^2 - y^3").unwrap();
        assert_eq!(charts[1].step_map.apply_poly(&f), Poly::parse(&ctx, "x^2*y^2 - y^3").unwrap());
        assert_eq!(charts[1].exceptionals.len(), 1);
        assert_eq!(charts[1].exceptionals[0].var, 1);
        assert_eq!(charts[1].exceptionals[0].birth, 1);
        // x-chart: y -> x*y, exceptional var x
        assert_eq!(charts[0].step_map.apply_poly(&f), Poly::parse(&ctx, "x^2 - x^3*y^3").unwrap());
        assert_eq!(charts[0].exceptionals[0].var, 0);
    }

    #[test]
    fn codim_one_blowup_is_identity_with_marking() {
        let (ctx, c) = root_chart(&["x", "y"], &[]);
        let charts = blowup(&c, &[0], 1);
        assert_eq!(charts.len(), 1);
        let f = Poly::parse(&ctx, "x^3 + y").unwrap();
        assert_eq!(charts[0].step_map.apply_poly(&f), f);
        assert_eq!(charts[0].exceptionals[0].var, 0);
    }

    #[test]
    fn record_carriage_under_point_blowup() {
        let (_ctx, mut c) = root_chart(&["x", "y"], &[]);
        c.exceptionals.push(ExceptionalRecord { var: 1, birth: 1, sign: Sign::Plus, a_num: 2 });
        let charts = blowup(&c, &[0, 1], 2);
        // y-chart: old divisor on y coincides with the new one; record replaced
        let yc = &charts[1];
        assert_eq!(yc.exceptionals.len(), 1);
        assert_eq!((yc.exceptionals[0].var, yc.exceptionals[0].birth), (1, 2));
        // x-chart: old record on y kept (strict transform is still V(y))
        let xc = &charts[0];
        assert_eq!(xc.exceptionals.len(), 2);
        assert!(xc.exceptionals.iter().any(|r| r.var == 1 && r.birth == 1 && r.a_num == 2));
        assert!(xc.exceptionals.iter().any(|r| r.var == 0 && r.birth == 2));
    }

    #[test]
    fn three_variable_blowup_total_transform() {
        let (ctx, c) = root_chart(&["x", "y", "z"], &[]);
        let charts = blowup(&c, &[0, 1, 2], 1);
        let zc = charts.iter().find(|ch| ch.id == "r.z").unwrap();
        let f = Ideal::parse(&ctx, &["x^2 + y^2 + z^2"]);
        let total = zc.step_map.apply(&f);
        assert_eq!(total, Ideal::parse(&ctx, &["x^2*z^2 + y^2*z^2 + z^2"]));
        let quotient = total.gens()[0].divide_exact(&Poly::parse(&ctx, "z^2").unwrap());
        assert_eq!(quotient.unwrap().normalized(), Poly::parse(&ctx, "x^2 + y^2 + 1").unwrap());
        // the center's total transform is the new exceptional hyperplane
        let center_total = zc.step_map.apply(&Ideal::parse(&ctx, &["x", "y", "z"]));
        assert!(center_total.equals(&Ideal::parse(&ctx, &["z"])));
    }

    #[test]
    fn normalize_center_identity_translation_and_unitriangular() {
        let (ctx, c) = root_chart(&["x", "y"], &[]);
        // already coordinate
        let (f, _i, vars) = normalize_center(&c, &Ideal::parse(&ctx, &["x", "y"])).unwrap();
        assert_eq!(vars, vec![0, 1]);
        assert_eq!(f.apply_poly(&Poly::var(&ctx, 0)), Poly::var(&ctx, 0));
        // translation
        let (f, inv, vars) = normalize_center(&c, &Ideal::parse(&ctx, &["x - 1"])).unwrap();
        assert_eq!(vars, vec![0]);
        assert!(f.apply(&Ideal::parse(&ctx, &["x - 1"])).equals(&Ideal::parse(&ctx, &["x"])));
        let roundtrip = inv.apply_poly(&f.apply_poly(&Poly::parse(&ctx, "x^2 + y").unwrap()));
        assert_eq!(roundtrip, Poly::parse(&ctx, "x^2 + y").unwrap());
        // unitriangular
        let (f, inv, vars) = normalize_center(&c, &Ideal::parse(&ctx, &["y - x^2"])).unwrap();
        assert_eq!(vars, vec![1]);
        assert!(f.apply(&Ideal::parse(&ctx, &["y - x^2"])).equals(&Ideal::parse(&ctx, &["y"])));
        let g = Poly::parse(&ctx, "x*y - 3").unwrap();
        assert_eq!(inv.apply_poly(&f.apply_poly(&g)), g);
    }

    #[test]
    fn normalize_center_blocked_by_exceptional_translation() {
        let (ctx, c) = root_chart(&["x", "y"], &[(1, Sign::Plus)]);
        match try_normalize(&c, &Ideal::parse(&ctx, &["y - 1"])) {
            NormalizeOutcome::BlockedExceptional { var } => assert_eq!(var, 1),
            _ => panic!("expected the exceptional translation to be blocked"),
        }
        // but the exceptional hyperplane itself is fine
        let (_f, _i, vars) = normalize_center(&c, &Ideal::parse(&ctx, &["y"])).unwrap();
        assert_eq!(vars, vec![1]);
    }

    #[test]
    fn product_with_line_twice_gets_fresh_names() {
        let (_ctx, c) = root_chart(&["x"], &[(0, Sign::Minus)]);
        let (c1, v1) = product_with_line(&c);
        let (c2, v2) = product_with_line(&c1);
        assert_eq!(c1.ctx.name(v1), "t");
        assert_eq!(c2.ctx.name(v2), "t1");
        assert_eq!(c2.exceptionals.len(), 1);
        assert_eq!(c2.exceptionals[0].var, 0);
        assert_eq!(c2.id, "r.L.L");
    }

    #[test]
    fn composition_coherence_at_sample_points() {
        // chart-k substitution then a nonzero exceptional value equals the
        // parent polynomial at the corresponding parent point
        let (ctx, c) = root_chart(&["x", "y"], &[]);
        let charts = blowup(&c, &[0, 1], 1);
        let f = Poly::parse(&ctx, "x^3 - 2*x*y + 5").unwrap();
        // y-chart point (u, t) with t != 0 maps to parent (u*t, t)
        for (u, t) in [(q(1), q(2)), (q(-3), q(1)), (q(2), q(-2))] {
            let child_val = charts[1].step_map.apply_poly(&f).eval(&[u.clone(), t.clone()]);
            let parent_val = f.eval(&[u * t.clone(), t]);
            assert_eq!(child_val, parent_val);
        }
    }

    #[test]
    fn saturate_units_removes_unit_factors() {
        let (ctx, c) = root_chart(&["x", "y"], &[]);
        let localized = c.localized_at(Poly::parse(&ctx, "1 - y").unwrap(), "off_y");
        let i = Ideal::parse(&ctx, &["x*(1 - y)"]);
        assert!(localized.saturate_units(&i).equals(&Ideal::parse(&ctx, &["x"])));
    }
}
