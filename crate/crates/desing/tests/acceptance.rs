//! End-to-end acceptance: closed-form laws, replay properties, certificate
//! checks, and a per-node audit of every run, all recomputed from raw ideals.

use std::time::{Duration, Instant};

use desing::algebra::{
    codim_of, components_of, is_smooth, Ctx, Ideal, Poly, Q, VarContext,
};
use desing::basic_object::{object_from_ideal, BasicObject};
use desing::charts::Chart;
use desing::descent::coefficient_descent;
use desing::invariants::{t_max, InvariantComponent};
use desing::resolver::{
    embedded_resolve, hironaka_trick, principalize, resolve, Limits, ResolutionTree,
};
use desing::verify::{
    check_monomial_final, check_pullback_compat, check_snc, check_weak_equiv_scaling,
};

fn power_object(ctx: &Ctx, a: u64, b: u64) -> BasicObject {
    let j = Ideal::principal(Poly::var(ctx, 0).pow(a));
    object_from_ideal(ctx, j, b, &[]).unwrap()
}

/// The image of `f` with every exceptional factor divided out, recomputed
/// here so the certificate does not lean on the engine's own helper.
fn strict_on(chart: &Chart, f: &Poly) -> Poly {
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

fn det(ctx: &Ctx, m: &[Vec<Poly>]) -> Poly {
    if m.is_empty() {
        return Poly::one(ctx);
    }
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

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for last in (k - 1)..n {
        for mut head in combinations(last, k - 1) {
            head.push(last);
            out.push(head);
        }
    }
    out
}

/// Ideal of k x k minors of the Jacobian of `polys`.
fn rank_minors(ctx: &Ctx, polys: &[&Poly], k: usize) -> Ideal {
    let n = ctx.len();
    let rows: Vec<Vec<Poly>> =
        polys.iter().map(|p| (0..n).map(|v| p.derivative(v)).collect()).collect();
    let mut minors = Vec::new();
    for rsel in combinations(polys.len(), k) {
        for csel in combinations(n, k) {
            let m: Vec<Vec<Poly>> = rsel
                .iter()
                .map(|&r| csel.iter().map(|&c| rows[r][c].clone()).collect())
                .collect();
            minors.push(det(ctx, &m));
        }
    }
    Ideal::new(ctx, minors)
}

/// Every center component must be smooth and cross the chart's divisor
/// configuration normally.
fn audit_center(chart: &Chart, center: &Ideal, label: &str) {
    let n = chart.ctx.len();
    let mut divisors: Vec<Poly> = chart
        .exceptionals
        .iter()
        .map(|r| Poly::var(&chart.ctx, r.var))
        .collect();
    divisors.extend(chart.principal.iter().map(|p| p.poly.clone()));
    let comps = components_of(center).expect("center components decompose");
    for comp in &comps {
        assert!(is_smooth(comp).unwrap(), "{label}: singular center component on {}", chart.id);
        let c = codim_of(comp).expect("center component has a codimension");
        for mask in 0u32..(1 << divisors.len()) {
            let subset: Vec<&Poly> = (0..divisors.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| &divisors[i])
                .collect();
            let mut meet = comp.clone();
            for h in &subset {
                meet = meet.sum(&Ideal::principal((*h).clone()));
            }
            let meet = chart.saturate_units(&meet);
            if meet.is_unit() {
                continue;
            }
            // divisors containing the component impose no extra condition
            let fresh: Vec<&Poly> = subset
                .iter()
                .filter(|h| !comp.vanishes_on(&Ideal::principal((**h).clone())))
                .copied()
                .collect();
            let rank = c + fresh.len();
            assert!(
                rank <= n,
                "{label}: {} hypersurfaces through a codim-{c} center on chart {}",
                fresh.len(),
                chart.id
            );
            let mut rows: Vec<&Poly> = comp.gens().iter().collect();
            rows.extend(fresh);
            let minors = rank_minors(&chart.ctx, &rows, rank);
            let fail = chart.saturate_units(&meet.sum(&minors));
            assert!(
                fail.is_unit(),
                "{label}: center tangent to divisors on chart {} at {:?}",
                chart.id,
                fail.gens_text()
            );
        }
    }
}

/// Per-chart ledger and satellite checks on one snapshot.
fn audit_object(object: &BasicObject, label: &str) {
    for s in &object.states {
        // ledger maximality (bar_ideal re-divides and re-asserts exactness)
        let bar = s.bar_ideal().unwrap_or_else(|e| panic!("{label}: {e} on {}", s.chart.id));
        for p in &s.chart.principal {
            assert!(
                !s.j.gens().iter().all(|g| g.divide_exact(&p.poly).is_some()),
                "{label}: principal divisor V({}) carries content on {}",
                p.poly,
                s.chart.id
            );
        }
        let sing = s.sing_ideal(object.b);
        if sing.is_unit() {
            continue;
        }
        // satellite identity ord = w-ord + sum a_j/b along sampled subvarieties
        let ledger_sum = |y: &Ideal| -> u64 {
            s.chart
                .exceptionals
                .iter()
                .filter(|r| y.vanishes_on(&Ideal::principal(Poly::var(&s.chart.ctx, r.var))))
                .map(|r| r.a_num)
                .sum()
        };
        if let Ok(comps) = components_of(&sing) {
            for y in &comps {
                let total = s.j.order_along(y);
                let residual = bar.order_along(y);
                assert_eq!(
                    total,
                    residual + ledger_sum(y),
                    "{label}: satellite identity fails along {:?} on {}",
                    y.gens_text(),
                    s.chart.id
                );
            }
        }
        let origin: Vec<Q> = (0..s.chart.ctx.len()).map(|_| Q::default()).collect();
        if sing.gens().iter().all(|g| g.eval(&origin) == Q::default()) {
            let total = s.j.order_at_point(&origin).unwrap();
            let residual = bar.order_at_point(&origin).unwrap();
            let at_origin: u64 = s
                .chart
                .exceptionals
                .iter()
                .map(|r| r.a_num)
                .sum();
            assert_eq!(
                total,
                residual + at_origin,
                "{label}: satellite identity fails at the origin of {}",
                s.chart.id
            );
        }
    }
}

/// Walk a transcript: monotone invariants within each constant-control
/// segment, ledger and satellite checks per node, center smoothness and
/// normal crossings, and the descent-frame singular-locus identity.
fn audit_tree(tree: &ResolutionTree, label: &str) {
    let mut prev: Option<(&desing::resolver::Node, u64)> = None;
    for node in &tree.nodes {
        audit_object(&node.object, label);
        for (cid, center) in &node.centers {
            let s = node.object.state(cid).expect("center chart exists");
            audit_center(&s.chart, center, label);
        }
        if let (Some(value), Some(maxw)) = (&node.value, &node.maxw) {
            if let Some((pn, pb)) = prev {
                if pb == node.object.b {
                    let pv = pn.value.as_ref().unwrap();
                    let pw = pn.maxw.as_ref().unwrap();
                    assert!(
                        maxw <= pw,
                        "{label}: max w-ord rose from {pw} to {maxw} at node {}",
                        node.id
                    );
                    assert!(
                        value < pv,
                        "{label}: invariant failed to drop at node {} ({} to {})",
                        node.id,
                        pn.invariant_text,
                        node.invariant_text
                    );
                    if let (
                        Some(InvariantComponent::QZ(qp, np)),
                        Some(InvariantComponent::QZ(qc, nc)),
                    ) = (pv.components.first(), value.components.first())
                    {
                        assert!(
                            (qc, nc) <= (qp, np),
                            "{label}: max t rose at node {}",
                            node.id
                        );
                    }
                }
            }
            prev = Some((node, node.object.b));
            // descent frames re-derived on stages below the monomial case
            if matches!(value.components.first(), Some(InvariantComponent::QZ(..))) {
                let t = t_max(&node.object).expect("t recomputes");
                coefficient_descent(&node.object, &t)
                    .unwrap_or_else(|e| panic!("{label}: descent frame at node {}: {e}", node.id));
            }
        }
    }
}

#[test]
fn power_resolution_step_counts_follow_the_floor_law() {
    let t0 = Instant::now();
    let ctx = VarContext::new(&["x"]);
    for a in 1..=12u64 {
        for b in 1..=a {
            let tree = resolve(power_object(&ctx, a, b), &Limits::default()).unwrap();
            assert!(tree.terminal, "a={a} b={b}");
            assert_eq!(tree.nodes.len() as u64 - 1, a / b, "a={a} b={b}");
        }
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(1), "floor-law grid took {dt:?}");
    println!("PASS floor law: floor(a/b) blow-ups for all 1 <= b <= a <= 12 in {dt:?}");
}

#[test]
fn order_drop_experiment_matches_the_closed_form_bound() {
    let t0 = Instant::now();
    let limits = Limits { max_steps: 128 };
    for b_prime in 2..=6u64 {
        for b in 1..=b_prime {
            for n in 2..=8u64 {
                let report = hironaka_trick(b_prime, b, n, &limits).unwrap();
                let bound = ((n - 1) * (b_prime - b)) / b;
                assert_eq!(report.s_max, bound, "b'={b_prime} b={b} N={n}");
                for (i, a) in report.point_exponents.iter().enumerate() {
                    assert_eq!(*a, (i as u64 + 1) * (b_prime - b));
                }
                for (s, a) in report.sweep_exponents.iter().enumerate() {
                    assert_eq!(*a, (n - 1) * (b_prime - b) - (s as u64 + 1) * b);
                }
            }
        }
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(5), "experiment grid took {dt:?}");
    println!("PASS order-drop bound: S = floor((N-1)(b'/b - 1)) over the full grid in {dt:?}");
}

fn scaling_corpus() -> (Vec<&'static str>, Vec<(Ctx, Ideal)>) {
    let plane = VarContext::new(&["x", "y"]);
    let space = VarContext::new(&["x", "y", "z"]);
    let names = vec!["x^2 - y^3", "x^2 - y^5", "<x^2, y^3>", "x*y*(x + y)", "x^2 - z*y^2"];
    let ideals = vec![
        (plane.clone(), Ideal::parse(&plane, &["x^2 - y^3"])),
        (plane.clone(), Ideal::parse(&plane, &["x^2 - y^5"])),
        (plane.clone(), Ideal::parse(&plane, &["x^2", "y^3"])),
        (plane.clone(), Ideal::parse(&plane, &["x*y*(x + y)"])),
        (space.clone(), Ideal::parse(&space, &["x^2 - z*y^2"])),
    ];
    (names, ideals)
}

#[test]
fn scaled_pairs_replay_with_identical_centers() {
    let t0 = Instant::now();
    let (names, ideals) = scaling_corpus();
    for (name, (ctx, j)) in names.iter().zip(&ideals) {
        for k in [2u64, 3] {
            let cert = check_weak_equiv_scaling(ctx, j, 2, k).unwrap();
            assert!(cert.pass, "{name} k={k}: {:?}", cert.witnesses);
        }
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(30), "scaling corpus took {dt:?}");
    println!("PASS scaling: (J,2) and (J^k,2k) agree node-by-node on the corpus in {dt:?}");
}

#[test]
fn principalization_corpus_monomializes_with_certificates() {
    let t0 = Instant::now();
    let ctx = VarContext::new(&["x", "y"]);
    for gens in [vec!["x^2", "y^3"], vec!["x^2 - y^3"], vec!["x*y"]] {
        let j = Ideal::parse(&ctx, &gens.iter().map(|s| *s).collect::<Vec<_>>());
        let tree = principalize(&ctx, j, &[], &Limits::default()).unwrap();
        assert!(tree.terminal, "{gens:?}");
        assert!(tree.nodes.len() <= 11, "{gens:?} took {} steps", tree.nodes.len() - 1);
        let cert = check_monomial_final(&tree).unwrap();
        assert!(cert.pass, "{gens:?}: {:?}", cert.witnesses);
        let charts: Vec<Chart> =
            tree.nodes.last().unwrap().object.states.iter().map(|s| s.chart.clone()).collect();
        let snc = check_snc(&charts, &[]).unwrap();
        assert!(snc.pass, "{gens:?}: {:?}", snc.witnesses);
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(10), "principalization corpus took {dt:?}");
    println!("PASS principalization: corpus monomial within 10 steps, snc certified, in {dt:?}");
}

#[test]
fn embedded_corpus_ends_smooth_with_normal_crossings() {
    let t0 = Instant::now();
    let plane = VarContext::new(&["x", "y"]);
    let space = VarContext::new(&["x", "y", "z"]);
    let corpus: Vec<(Ctx, Poly)> = vec![
        (plane.clone(), Poly::parse(&plane, "x^2 - y^3").unwrap()),
        (plane.clone(), Poly::parse(&plane, "x^2 - y^5").unwrap()),
        (space.clone(), Poly::parse(&space, "x^2 - z*y^2").unwrap()),
    ];
    for (ctx, f) in &corpus {
        let tree = embedded_resolve(ctx, f, &[], &Limits::default()).unwrap();
        assert!(tree.terminal, "{f}: strict transform stays singular");
        assert!(tree.nodes.len() <= 65, "{f} took {} steps", tree.nodes.len() - 1);
        let last = &tree.nodes.last().unwrap().object;
        let charts: Vec<Chart> = last.states.iter().map(|s| s.chart.clone()).collect();
        let extra: Vec<Vec<Ideal>> = charts
            .iter()
            .map(|c| {
                let strict = strict_on(c, f);
                if strict.is_constant() { Vec::new() } else { vec![Ideal::principal(strict)] }
            })
            .collect();
        let snc = check_snc(&charts, &extra).unwrap();
        assert!(snc.pass, "{f}: {:?}", snc.witnesses);
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(60), "embedded corpus took {dt:?}");
    println!("PASS embedded: strict transforms smooth with snc configurations in {dt:?}");
}

#[test]
fn every_node_of_every_run_passes_the_invariant_audit() {
    let t0 = Instant::now();
    let line = VarContext::new(&["x"]);
    for a in 1..=12u64 {
        for b in 1..=a {
            let tree = resolve(power_object(&line, a, b), &Limits::default()).unwrap();
            audit_tree(&tree, &format!("x^{a} control {b}"));
        }
    }
    let (names, ideals) = scaling_corpus();
    for (name, (ctx, j)) in names.iter().zip(&ideals) {
        for k in [1u64, 2, 3] {
            let object = object_from_ideal(ctx, j.power(k), 2 * k, &[]).unwrap();
            let tree = resolve(object, &Limits::default()).unwrap();
            audit_tree(&tree, &format!("{name} scaled by {k}"));
        }
    }
    let plane = VarContext::new(&["x", "y"]);
    for gens in [vec!["x^2", "y^3"], vec!["x^2 - y^3"], vec!["x*y"]] {
        let j = Ideal::parse(&plane, &gens.iter().map(|s| *s).collect::<Vec<_>>());
        let tree = principalize(&plane, j, &[], &Limits::default()).unwrap();
        audit_tree(&tree, &format!("principalize {gens:?}"));
    }
    let space = VarContext::new(&["x", "y", "z"]);
    let embedded: Vec<(Ctx, Poly)> = vec![
        (plane.clone(), Poly::parse(&plane, "x^2 - y^3").unwrap()),
        (plane.clone(), Poly::parse(&plane, "x^2 - y^5").unwrap()),
        (space.clone(), Poly::parse(&space, "x^2 - z*y^2").unwrap()),
    ];
    for (ctx, f) in &embedded {
        let tree = embedded_resolve(ctx, f, &[], &Limits::default()).unwrap();
        audit_tree(&tree, &format!("embedded {f}"));
    }
    println!("PASS audit: zero violations across all transcripts in {:?}", t0.elapsed());
}

#[test]
fn pullback_replays_give_cylinder_centers_and_equal_traces() {
    let t0 = Instant::now();
    let plane = VarContext::new(&["x", "y"]);
    let cusp = Ideal::parse(&plane, &["x^2 - y^3"]);
    let cert = check_pullback_compat(&plane, &cusp, 2).unwrap();
    assert!(cert.pass, "cusp: {:?}", cert.witnesses);
    let line = VarContext::new(&["x"]);
    for a in 2..=6u64 {
        let j = Ideal::principal(Poly::var(&line, 0).pow(a));
        let cert = check_pullback_compat(&line, &j, 2).unwrap();
        assert!(cert.pass, "x^{a}: {:?}", cert.witnesses);
    }
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(10), "pullback family took {dt:?}");
    println!("PASS pullback: cylinder centers and equal stripped traces in {dt:?}");
}
