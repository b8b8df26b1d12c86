//! The invariant tower: ord, w-ord, t, t(em), the monomial-case Γ value, and
//! assembly of the resolution function with its lexicographic codomain.
//!
//! Only maximal values and their loci are materialized.  Values are exact
//! rationals over the control; comparisons are lexicographic throughout.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use itertools::Itertools;
use num::{BigInt, One, Zero};

use crate::algebra::{Ideal, Q};
use crate::basic_object::{BasicObject, ClosedSet};
use crate::charts::Sign;
use crate::{Error, Result};

/// Render a rational as `p/q` in lowest terms, or `p` when integral.
pub fn q_text(q: &Q) -> String {
    if q.denom() == &BigInt::one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The monomial-stage value: stored as (-p, w, birth tuple) so that the
/// derived lexicographic order is the intended one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GammaValue {
    pub neg_p: i64,
    pub w: Q,
    pub alpha: Vec<usize>,
}

impl GammaValue {
    pub fn text(&self) -> String {
        let alpha = self.alpha.iter().map(|a| a.to_string()).join(",");
        format!("({},{},[{alpha}])", self.neg_p, q_text(&self.w))
    }
}

/// One level of the resolution function: infinity, a (w-ord, n) pair, or a
/// monomial-stage Γ value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum InvariantComponent {
    Top,
    QZ(Q, i64),
    Gamma(GammaValue),
}

impl InvariantComponent {
    fn rank(&self) -> u8 {
        match self {
            InvariantComponent::Top => 2,
            InvariantComponent::QZ(..) => 1,
            InvariantComponent::Gamma(_) => 0,
        }
    }

    pub fn text(&self) -> String {
        match self {
            InvariantComponent::Top => "inf".to_string(),
            InvariantComponent::QZ(q, n) => format!("{},{n}", q_text(q)),
            InvariantComponent::Gamma(g) => g.text(),
        }
    }
}

impl PartialOrd for InvariantComponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InvariantComponent {
    fn cmp(&self, other: &Self) -> Ordering {
        use InvariantComponent::*;
        match (self, other) {
            (Top, Top) => Ordering::Equal,
            (QZ(q1, n1), QZ(q2, n2)) => q1.cmp(q2).then_with(|| n1.cmp(n2)),
            (Gamma(a), Gamma(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// A full resolution-function value: finitely many components compared
/// lexicographically, padded with `Top` to a fixed length per run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvariantValue {
    pub components: Vec<InvariantComponent>,
}

impl InvariantValue {
    pub fn new(components: Vec<InvariantComponent>) -> Self {
        InvariantValue { components }
    }

    /// Pad with `Top` to the given length.
    pub fn padded(mut self, len: usize) -> Self {
        while self.components.len() < len {
            self.components.push(InvariantComponent::Top);
        }
        self
    }

    pub fn text(&self) -> String {
        self.components.iter().map(|c| c.text()).join(";")
    }

    /// Components with trailing `Top` padding removed.
    pub fn stripped(&self) -> &[InvariantComponent] {
        let mut end = self.components.len();
        while end > 0 && self.components[end - 1] == InvariantComponent::Top {
            end -= 1;
        }
        &self.components[..end]
    }
}

impl PartialOrd for InvariantValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InvariantValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.components.len().max(other.components.len());
        for i in 0..n {
            let a = self.components.get(i).unwrap_or(&InvariantComponent::Top);
            let b = other.components.get(i).unwrap_or(&InvariantComponent::Top);
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// Largest m such that some point of V(`within`) has order ≥ m for `j`,
/// with the locus where the maximum is attained.  `within` the zero ideal
/// means the whole chart.
fn max_order_on(
    j: &Ideal,
    within: &Ideal,
    saturate: &dyn Fn(&Ideal) -> Ideal,
) -> (u64, Ideal) {
    let mut m = 0u64;
    let mut d = j.clone();
    let mut locus = saturate(within);
    loop {
        let candidate = saturate(&d.sum(within));
        if candidate.is_unit() {
            return (m, locus);
        }
        m += 1;
        locus = candidate;
        d = d.delta();
        if m > 4096 {
            unreachable!("order iteration diverged");
        }
    }
}

/// Max of ord = ν(J)/b over Sing(J,b), with its locus.
pub fn ord_max(b: &BasicObject) -> Result<(Q, ClosedSet)> {
    let sing = b.sing();
    if sing.is_empty() {
        return Err(Error::Precondition("ord_max on an empty singular locus".into()));
    }
    let mut per_chart: Vec<(String, u64, Ideal)> = Vec::new();
    for s in &b.states {
        if sing.ideal_for(&s.chart.id).is_none() {
            continue;
        }
        let chart = s.chart.clone();
        let sat = move |i: &Ideal| chart.saturate_units(i);
        let (m, locus) = max_order_on(&s.j, &Ideal::zero(&s.chart.ctx), &sat);
        per_chart.push((s.chart.id.clone(), m, locus));
    }
    let best = per_chart.iter().map(|(_, m, _)| *m).max().unwrap();
    let mut locus = ClosedSet::new();
    for (id, m, l) in per_chart {
        if m == best {
            locus.insert(&id, l);
        }
    }
    Ok((Q::new(BigInt::from(best), BigInt::from(b.b)), locus))
}

/// Max of w-ord = ν(J̄)/b over Sing(J,b), with its locus.  A value of zero
/// reports the whole singular locus.
pub fn word_max(b: &BasicObject) -> Result<(Q, ClosedSet)> {
    let sing = b.sing();
    if sing.is_empty() {
        return Err(Error::Precondition("word_max on an empty singular locus".into()));
    }
    let mut per_chart: Vec<(String, u64, Ideal)> = Vec::new();
    for s in &b.states {
        let Some(sing_ideal) = sing.ideal_for(&s.chart.id) else { continue };
        let bar = s.bar_ideal()?;
        let chart = s.chart.clone();
        let sat = move |i: &Ideal| chart.saturate_units(i);
        let (m, locus) = if bar.is_zero() {
            (0, sat(sing_ideal))
        } else {
            max_order_on(&bar, sing_ideal, &sat)
        };
        per_chart.push((s.chart.id.clone(), m, locus));
    }
    let best = per_chart.iter().map(|(_, m, _)| *m).max().unwrap();
    let mut locus = ClosedSet::new();
    for (id, m, l) in per_chart {
        if m == best {
            locus.insert(&id, l);
        }
    }
    Ok((Q::new(BigInt::from(best), BigInt::from(b.b)), locus))
}

/// The t computation's full result: the value, its locus, the step s₀, and
/// the per-chart variables of the old divisors E⁻.
pub struct TMax {
    pub value: (Q, i64),
    pub locus: ClosedSet,
    pub s_zero: usize,
    pub e_minus: BTreeMap<String, Vec<usize>>,
}

/// t = (max w-ord, n) with n the maximal count of old divisors through a
/// point of Max w-ord; old means birth at or before s₀.
pub fn t_max(b: &BasicObject) -> Result<TMax> {
    let (w, w_locus) = word_max(b)?;
    if w.is_zero() {
        return Err(Error::Precondition("t_max requires positive max w-ord".into()));
    }
    let s_zero = b.s_zero(&w);
    let e_minus: BTreeMap<String, Vec<usize>> = b
        .states
        .iter()
        .map(|s| {
            let vars = s
                .chart
                .exceptionals
                .iter()
                .filter(|r| r.birth <= s_zero)
                .map(|r| r.var)
                .sorted()
                .collect();
            (s.chart.id.clone(), vars)
        })
        .collect();
    let (n, locus) = count_locus(b, &w_locus, &e_minus);
    Ok(TMax { value: (w, n), locus, s_zero, e_minus })
}

/// The t(em) variant: E⁻ is fixed by the partition snapshot instead of the
/// s₀ rule, and the first coordinate may be zero.
pub fn t_em_max(b: &BasicObject) -> Result<TMax> {
    let Some(snapshot) = &b.partition_snapshot else {
        return Err(Error::Precondition("t_em_max requires a partition snapshot".into()));
    };
    let (w, w_locus) = word_max(b)?;
    let e_minus: BTreeMap<String, Vec<usize>> = b
        .states
        .iter()
        .map(|s| {
            let vars = s
                .chart
                .exceptionals
                .iter()
                .filter(|r| snapshot.contains(&r.birth))
                .map(|r| r.var)
                .sorted()
                .collect();
            (s.chart.id.clone(), vars)
        })
        .collect();
    let (n, locus) = count_locus(b, &w_locus, &e_minus);
    let s_zero = b.s_zero(&w);
    Ok(TMax { value: (w, n), locus, s_zero, e_minus })
}

/// Largest q with Max w-ord meeting q of the designated divisors, and the
/// locus where it does: Max w-ord ∩ V(K(q)), K(q) = ∏_{|F|=q} Σ_{i∈F} ⟨varᵢ⟩.
fn count_locus(
    b: &BasicObject,
    w_locus: &ClosedSet,
    e_minus: &BTreeMap<String, Vec<usize>>,
) -> (i64, ClosedSet) {
    let mut per_chart: Vec<(String, i64, Ideal)> = Vec::new();
    for s in &b.states {
        let Some(base) = w_locus.ideal_for(&s.chart.id) else { continue };
        let vars = &e_minus[&s.chart.id];
        let mut q_best = 0i64;
        let mut locus_best = base.clone();
        for q in 1..=vars.len() {
            let mut k = None::<Ideal>;
            for f in vars.iter().combinations(q) {
                let sum = Ideal::of_vars(&s.chart.ctx, &f.iter().map(|v| **v).collect::<Vec<_>>());
                k = Some(match k {
                    None => sum,
                    Some(prev) => prev.product(&sum),
                });
            }
            let candidate = s.chart.saturate_units(&base.sum(&k.unwrap()));
            if candidate.is_unit() {
                break;
            }
            q_best = q as i64;
            locus_best = candidate;
        }
        per_chart.push((s.chart.id.clone(), q_best, locus_best));
    }
    let n = per_chart.iter().map(|(_, q, _)| *q).max().unwrap_or(0);
    let mut locus = ClosedSet::new();
    for (id, q, l) in per_chart {
        if q == n {
            locus.insert(&id, l);
        }
    }
    (n, locus)
}

/// Re-tag every record's sign from the current s₀: `Minus` for E⁻.
pub fn apply_partition(b: &mut BasicObject, s_zero: usize) {
    for s in &mut b.states {
        for r in &mut s.chart.exceptionals {
            r.sign = if r.birth <= s_zero { Sign::Minus } else { Sign::Plus };
        }
        for p in &mut s.chart.principal {
            p.sign = if p.birth <= s_zero { Sign::Minus } else { Sign::Plus };
        }
    }
}

/// The monomial-stage value: over points of Sing, the least set of divisors
/// whose exponents reach the control, with its weight and birth tuple.
pub fn gamma_max(b: &BasicObject) -> Result<(GammaValue, ClosedSet)> {
    let sing = b.sing();
    if sing.is_empty() {
        return Err(Error::Precondition("gamma_max on an empty singular locus".into()));
    }
    // the stage premise: J is an exceptional monomial near Sing
    for s in &b.states {
        let Some(sing_ideal) = sing.ideal_for(&s.chart.id) else { continue };
        let bar = s.bar_ideal()?;
        if !s.chart.saturate_units(&bar.sum(sing_ideal)).is_unit() {
            return Err(Error::MonomialCaseViolated(format!(
                "residual factor {bar:?} meets the singular locus on chart {}",
                s.chart.id
            )));
        }
    }

    let mut best: Option<(GammaValue, Vec<(String, Ideal)>)> = None;
    for s in &b.states {
        let Some(sing_ideal) = sing.ideal_for(&s.chart.id) else { continue };
        let positive: Vec<(usize, u64, usize)> = s
            .chart
            .exceptionals
            .iter()
            .filter(|r| r.a_num > 0)
            .map(|r| (r.var, r.a_num, r.birth))
            .collect();
        for p in 1..=positive.len() {
            for subset in positive.iter().combinations(p) {
                let total: u64 = subset.iter().map(|(_, a, _)| a).sum();
                if total < b.b {
                    continue;
                }
                let vars: Vec<usize> = subset.iter().map(|(v, _, _)| *v).collect();
                let locus = s
                    .chart
                    .saturate_units(&sing_ideal.sum(&Ideal::of_vars(&s.chart.ctx, &vars)));
                if locus.is_unit() {
                    continue;
                }
                let mut alpha: Vec<usize> = subset.iter().map(|(_, _, birth)| *birth).collect();
                alpha.sort_unstable_by(|x, y| y.cmp(x));
                let value = GammaValue {
                    neg_p: -(p as i64),
                    w: Q::new(BigInt::from(total), BigInt::from(b.b)),
                    alpha,
                };
                match &mut best {
                    None => best = Some((value, vec![(s.chart.id.clone(), locus)])),
                    Some((cur, loci)) => match value.cmp(cur) {
                        Ordering::Greater => best = Some((value, vec![(s.chart.id.clone(), locus)])),
                        Ordering::Equal => loci.push((s.chart.id.clone(), locus)),
                        Ordering::Less => {}
                    },
                }
            }
        }
    }
    let Some((value, loci)) = best else {
        return Err(Error::Internal(
            "monomial stage reached with no exponent subset meeting the control".into(),
        ));
    };
    let mut locus = ClosedSet::new();
    for (id, l) in loci {
        locus.insert(&id, l);
    }
    Ok((value, locus))
}

/// What g_assemble decided at the top level, for transcripts and drivers.
pub enum StagePick {
    /// Monomial stage: Γ value, center from the Γ locus.
    Monomial,
    /// Max t has codimension-1 components: blow them up directly.
    CodimOne,
    /// Descent produced the remaining components.
    Descent,
}

/// Assemble the resolution-function value and center at ambient dimension
/// `dim`: the monomial stage yields a Γ head, a codimension-1 part of Max t
/// yields an immediate center, and otherwise `descend` supplies the value
/// tail and center from one dimension down.
pub fn g_assemble(
    b: &BasicObject,
    dim: usize,
    descend: &mut dyn FnMut(&BasicObject, &TMax) -> Result<(Vec<InvariantComponent>, ClosedSet)>,
) -> Result<(InvariantValue, ClosedSet, StagePick)> {
    let (w, _) = word_max(b)?;
    if w.is_zero() {
        let (gamma, locus) = gamma_max(b)?;
        let value = InvariantValue::new(vec![InvariantComponent::Gamma(gamma)]).padded(dim + 1);
        return Ok((value, locus, StagePick::Monomial));
    }
    let t = t_max(b)?;
    let r1 = crate::descent::r1_components(b, &t.locus)?;
    if !r1.is_empty() {
        let value = InvariantValue::new(vec![InvariantComponent::QZ(t.value.0.clone(), t.value.1)])
            .padded(dim + 1);
        return Ok((value, r1, StagePick::CodimOne));
    }
    let (tail, center) = descend(b, &t)?;
    let mut components = vec![InvariantComponent::QZ(t.value.0.clone(), t.value.1)];
    components.extend(tail);
    Ok((InvariantValue::new(components).padded(dim + 1), center, StagePick::Descent))
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::algebra::VarContext;
    use crate::basic_object::{object_from_ideal, ChartState};
    use crate::charts::Chart;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn ord_max_examples() {
        let ctx = VarContext::new(&["x", "y"]);
        let cusp = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - y^3"]), 2, &[]).unwrap();
        let (v, locus) = ord_max(&cusp).unwrap();
        assert_eq!(v, q(1, 1));
        assert!(locus.ideal_for("r").unwrap().same_zero_set(&Ideal::parse(&ctx, &["x", "y"])));

        let one = VarContext::new(&["x"]);
        let pow = object_from_ideal(&one, Ideal::parse(&one, &["x^7"]), 3, &[]).unwrap();
        let (v, locus) = ord_max(&pow).unwrap();
        assert_eq!(v, q(7, 3));
        assert!(locus.ideal_for("r").unwrap().equals(&Ideal::parse(&one, &["x"])));
    }

    #[test]
    fn word_max_matches_ord_on_fresh_objects() {
        let ctx = VarContext::new(&["x", "y"]);
        let cusp = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - y^3"]), 2, &[]).unwrap();
        let (vo, _) = ord_max(&cusp).unwrap();
        let (vw, _) = word_max(&cusp).unwrap();
        assert_eq!(vo, vw);
    }

    #[test]
    fn word_max_strips_the_ledger() {
        let ctx = VarContext::new(&["x", "y"]);
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(1, Sign::Plus)]);
            c.exceptionals[0].birth = 1;
            c.exceptionals[0].a_num = 2;
            c
        };
        let j = Ideal::parse(&ctx, &["y^2*(x^2 - y)^2"]);
        let mut b =
            BasicObject { states: vec![ChartState { chart, j }], b: 2, step: 1, history: vec![(0, q(2, 1))], partition_snapshot: None };
        let (v, locus) = word_max(&b).unwrap();
        assert_eq!(v, q(1, 1));
        // attained along the parabola inside Sing
        assert!(locus
            .ideal_for("r")
            .unwrap()
            .same_zero_set(&Ideal::parse(&ctx, &["x^2 - y"])));

        // fully monomial: w-ord 0 with the whole singular locus
        b.states[0].j = Ideal::parse(&ctx, &["y^3"]);
        b.states[0].chart.exceptionals[0].a_num = 3;
        let (v, locus) = word_max(&b).unwrap();
        assert!(v.is_zero());
        assert!(locus.ideal_for("r").unwrap().same_zero_set(&Ideal::parse(&ctx, &["y"])));
    }

    #[test]
    fn t_max_counts_old_divisors() {
        let ctx = VarContext::new(&["x", "y"]);
        // no divisors: n = 0
        let cusp = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - y^3"]), 2, &[]).unwrap();
        let t = t_max(&cusp).unwrap();
        assert_eq!(t.value, (q(1, 1), 0));
        assert_eq!(t.s_zero, 0);

        // one old divisor through the locus: n = 1
        let mut with_div =
            object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - y^3"]), 2, &[(0, Sign::Minus)])
                .unwrap();
        let t = t_max(&with_div).unwrap();
        assert_eq!(t.value, (q(1, 1), 1));

        // two old divisors through the origin: n = 2
        with_div.states[0].chart.exceptionals.push(crate::charts::ExceptionalRecord {
            var: 1,
            birth: 0,
            sign: Sign::Minus,
            a_num: 0,
        });
        let t = t_max(&with_div).unwrap();
        assert_eq!(t.value, (q(1, 1), 2));
        assert!(t
            .locus
            .ideal_for("r")
            .unwrap()
            .same_zero_set(&Ideal::parse(&ctx, &["x", "y"])));
    }

    #[test]
    fn t_em_uses_the_snapshot_and_allows_zero_word() {
        let ctx = VarContext::new(&["x", "y"]);
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(1, Sign::Plus)]);
            c.exceptionals[0].a_num = 3;
            c
        };
        let j = Ideal::parse(&ctx, &["y^3"]);
        let mut b = BasicObject {
            states: vec![ChartState { chart, j }],
            b: 2,
            step: 0,
            history: vec![],
            partition_snapshot: Some(vec![]),
        };
        let t = t_em_max(&b).unwrap();
        assert_eq!(t.value, (q(0, 1), 0));
        b.partition_snapshot = Some(vec![0]);
        let t = t_em_max(&b).unwrap();
        assert_eq!(t.value, (q(0, 1), 1));
    }

    #[test]
    fn gamma_examples() {
        let ctx = VarContext::new(&["x", "y"]);
        // single divisor with a = 3, b = 2
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(1, Sign::Plus)]);
            c.exceptionals[0].birth = 1;
            c.exceptionals[0].a_num = 3;
            c
        };
        let b = BasicObject {
            states: vec![ChartState { chart, j: Ideal::parse(&ctx, &["y^3"]) }],
            b: 2,
            step: 1,
            history: vec![],
            partition_snapshot: None,
        };
        let (g, locus) = gamma_max(&b).unwrap();
        assert_eq!(g, GammaValue { neg_p: -1, w: q(3, 2), alpha: vec![1] });
        assert!(locus.ideal_for("r").unwrap().same_zero_set(&Ideal::parse(&ctx, &["y"])));
        assert_eq!(g.text(), "(-1,3/2,[1])");

        // two divisors each short of the control: need both
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(0, Sign::Plus), (1, Sign::Plus)]);
            c.exceptionals[0].birth = 1;
            c.exceptionals[0].a_num = 1;
            c.exceptionals[1].birth = 2;
            c.exceptionals[1].a_num = 1;
            c
        };
        let b = BasicObject {
            states: vec![ChartState { chart, j: Ideal::parse(&ctx, &["x*y"]) }],
            b: 2,
            step: 2,
            history: vec![],
            partition_snapshot: None,
        };
        let (g, locus) = gamma_max(&b).unwrap();
        assert_eq!(g, GammaValue { neg_p: -2, w: q(1, 1), alpha: vec![2, 1] });
        assert!(locus.ideal_for("r").unwrap().same_zero_set(&Ideal::parse(&ctx, &["x", "y"])));

        // exact threshold: p = 1, w = 1
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(1, Sign::Plus)]);
            c.exceptionals[0].birth = 1;
            c.exceptionals[0].a_num = 2;
            c
        };
        let b = BasicObject {
            states: vec![ChartState { chart, j: Ideal::parse(&ctx, &["y^2"]) }],
            b: 2,
            step: 1,
            history: vec![],
            partition_snapshot: None,
        };
        let (g, _) = gamma_max(&b).unwrap();
        assert_eq!((g.neg_p, g.w.clone()), (-1, q(1, 1)));
    }

    #[test]
    fn gamma_rejects_residual_factors() {
        let ctx = VarContext::new(&["x", "y"]);
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(1, Sign::Plus)]);
            c.exceptionals[0].a_num = 2;
            c
        };
        // bar ideal x^2 - y vanishes somewhere on Sing(J, 2)
        let j = Ideal::parse(&ctx, &["y^2*(x^2 - y)^2"]);
        let b = BasicObject {
            states: vec![ChartState { chart, j }],
            b: 2,
            step: 1,
            history: vec![],
            partition_snapshot: None,
        };
        assert!(matches!(gamma_max(&b), Err(Error::MonomialCaseViolated(_))));
    }

    #[test]
    fn component_and_value_ordering() {
        use InvariantComponent::*;
        assert!(Top > QZ(q(100, 1), 5));
        assert!(QZ(q(1, 1), 0) > Gamma(GammaValue { neg_p: -1, w: q(9, 1), alpha: vec![1] }));
        assert!(QZ(q(3, 2), 0) > QZ(q(1, 1), 7));
        assert!(QZ(q(1, 1), 2) > QZ(q(1, 1), 1));
        assert!(
            Gamma(GammaValue { neg_p: -1, w: q(2, 1), alpha: vec![3] })
                > Gamma(GammaValue { neg_p: -2, w: q(5, 1), alpha: vec![4, 2] })
        );
        let a = InvariantValue::new(vec![QZ(q(1, 1), 0), Top]);
        let b = InvariantValue::new(vec![QZ(q(1, 1), 0), QZ(q(3, 2), 0)]);
        assert!(a > b);
        assert_eq!(a.text(), "1,0;inf");
        assert_eq!(b.text(), "1,0;3/2,0");
        assert_eq!(b.stripped().len(), 2);
        assert_eq!(a.stripped().len(), 1);
    }

    #[test]
    fn g_assemble_picks_stage() {
        let ctx = VarContext::new(&["x", "y"]);
        // codimension-1 Max t: value (3/2, 0) with Top padding
        let family = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^3"]), 2, &[]).unwrap();
        let (v, center, pick) = g_assemble(&family, 2, &mut |_, _| unreachable!()).unwrap();
        assert!(matches!(pick, StagePick::CodimOne));
        assert_eq!(v.text(), "3/2,0;inf;inf");
        assert!(center.ideal_for("r").unwrap().equals(&Ideal::parse(&ctx, &["x"])));

        // cusp: descent is consulted and its tail is appended
        let cusp = object_from_ideal(&ctx, Ideal::parse(&ctx, &["x^2 - y^3"]), 2, &[]).unwrap();
        let (v, center, pick) = g_assemble(&cusp, 2, &mut |b, t| {
            assert_eq!(t.value, (q(1, 1), 0));
            let mut c = ClosedSet::new();
            c.insert("r", Ideal::parse(&b.states[0].chart.ctx, &["x", "y"]));
            Ok((vec![InvariantComponent::QZ(q(3, 2), 0)], c))
        })
        .unwrap();
        assert!(matches!(pick, StagePick::Descent));
        assert_eq!(v.text(), "1,0;3/2,0;inf");
        assert!(center.ideal_for("r").unwrap().equals(&Ideal::parse(&ctx, &["x", "y"])));

        // monomial stage: Γ head
        let chart = {
            let mut c = Chart::root("r", &ctx, &[(1, Sign::Plus)]);
            c.exceptionals[0].birth = 1;
            c.exceptionals[0].a_num = 3;
            c
        };
        let mono = BasicObject {
            states: vec![ChartState { chart, j: Ideal::parse(&ctx, &["y^3"]) }],
            b: 2,
            step: 1,
            history: vec![],
            partition_snapshot: None,
        };
        let (v, _, pick) = g_assemble(&mono, 2, &mut |_, _| unreachable!()).unwrap();
        assert!(matches!(pick, StagePick::Monomial));
        assert_eq!(v.text(), "(-1,3/2,[1]);inf;inf");
    }
}
