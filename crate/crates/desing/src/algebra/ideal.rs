//! Ideals with cached reduced Groebner bases and the operations the engine
//! is built on: membership, derivative ideals, orders, saturation, radical
//! membership, sums, products, powers, and elimination.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num::{One, Zero};

use super::poly::{cmp_degrevlex, Poly, Q};
use super::Ctx;
use crate::{Error, Result};

/// Term orders understood by the Groebner engine.  `ElimLast(k)` eliminates
/// the last `k` variables of the context: any monomial involving them beats
/// every monomial that does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermOrder {
    DegRevLex,
    ElimLast(usize),
}

impl TermOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            TermOrder::DegRevLex => cmp_degrevlex(a, b),
            TermOrder::ElimLast(k) => {
                let n = a.len();
                let da: u64 = a[n - k..].iter().map(|&e| e as u64).sum();
                let db: u64 = b[n - k..].iter().map(|&e| e as u64).sum();
                if da != db {
                    return da.cmp(&db);
                }
                cmp_degrevlex(a, b)
            }
        }
    }
}

/// A finitely generated ideal of `Q[ctx]`.  Generators are stored
/// content-normalized with zero generators dropped; the reduced degrevlex
/// Groebner basis is computed on demand and cached.
#[derive(Clone)]
pub struct Ideal {
    ctx: Ctx,
    gens: Vec<Poly>,
    gb: OnceLock<Vec<Poly>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.gens == other.gens
    }
}
impl Eq for Ideal {}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.gens.iter().map(|g| g.to_string()).join(", "))
    }
}

impl Ideal {
    pub fn new(ctx: &Ctx, gens: Vec<Poly>) -> Ideal {
        let mut gens: Vec<Poly> =
            gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.normalized()).collect();
        gens.sort_by(|a, b| cmp_polys(a, b));
        gens.dedup();
        Ideal { ctx: ctx.clone(), gens, gb: OnceLock::new() }
    }

    pub fn zero(ctx: &Ctx) -> Ideal {
        Ideal::new(ctx, vec![])
    }

    pub fn unit(ctx: &Ctx) -> Ideal {
        Ideal::new(ctx, vec![Poly::one(ctx)])
    }

    pub fn principal(g: Poly) -> Ideal {
        let ctx = g.ctx().clone();
        Ideal::new(&ctx, vec![g])
    }

    pub fn of_vars(ctx: &Ctx, vars: &[usize]) -> Ideal {
        Ideal::new(ctx, vars.iter().map(|&v| Poly::var(ctx, v)).collect())
    }

    pub fn parse(ctx: &Ctx, gens: &[&str]) -> Ideal {
        Ideal::new(ctx, gens.iter().map(|s| Poly::parse(ctx, s).expect("bad test polynomial")).collect())
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// The reduced degrevlex Groebner basis (computed once, then cached).
    pub fn gb(&self) -> &[Poly] {
        self.gb.get_or_init(|| buchberger(&self.ctx, &self.gens, TermOrder::DegRevLex))
    }

    pub fn gb_with(&self, order: TermOrder) -> Vec<Poly> {
        match order {
            TermOrder::DegRevLex => self.gb().to_vec(),
            _ => buchberger(&self.ctx, &self.gens, order),
        }
    }

    /// The ideal presented by its reduced Groebner basis under `order`.
    pub fn groebner_basis(&self, order: TermOrder) -> Ideal {
        Ideal::new(&self.ctx, self.gb_with(order))
    }

    /// Whole ring: `1` lies in the ideal.  Over the algebraic closure this is
    /// exactly "the zero set is empty".
    pub fn is_unit(&self) -> bool {
        self.gb().len() == 1 && self.gb()[0].is_constant()
    }

    pub fn contains_poly(&self, f: &Poly) -> bool {
        normal_form(f, self.gb(), TermOrder::DegRevLex).is_zero()
    }

    /// `other` is a subset of `self`.
    pub fn contains(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains_poly(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.contains(other) && other.contains(self)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ctx, gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ideal::new(&self.ctx, gens)
    }

    pub fn power(&self, k: u64) -> Ideal {
        assert!(k >= 1, "ideal powers below 1 are not used");
        if self.is_zero() {
            return Ideal::zero(&self.ctx);
        }
        let mut gens = Vec::new();
        for combo in (0..self.gens.len()).combinations_with_replacement(k as usize) {
            let mut g = Poly::one(&self.ctx);
            for i in combo {
                g = g.mul(&self.gens[i]);
            }
            gens.push(g);
        }
        Ideal::new(&self.ctx, gens)
    }

    /// Extend the ideal by the first partial derivatives of its generators.
    /// Well defined on ideals; the result is returned Groebner-reduced so
    /// iterated applications stay small.
    pub fn delta(&self) -> Ideal {
        let base = self.gb();
        let mut gens: Vec<Poly> = base.to_vec();
        for g in base {
            for v in 0..self.ctx.len() {
                let d = g.derivative(v);
                if !d.is_zero() {
                    gens.push(d);
                }
            }
        }
        Ideal::new(&self.ctx, gens).groebner_basis(TermOrder::DegRevLex)
    }

    /// `k`-fold derivative ideal.
    pub fn delta_pow(&self, k: u64) -> Ideal {
        let mut out = self.groebner_basis(TermOrder::DegRevLex);
        for _ in 0..k {
            if out.is_unit() {
                return out;
            }
            out = out.delta();
        }
        out
    }

    /// Order of vanishing at a rational point, through derivative ideals:
    /// the least `k` such that some element of the `k`-fold derivative ideal
    /// is nonzero at the point.  `None` for the zero ideal.
    pub fn order_at_point(&self, point: &[Q]) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut cur = self.groebner_basis(TermOrder::DegRevLex);
        for k in 0..4096 {
            if cur.gens.iter().any(|g| !g.eval(point).is_zero()) {
                return Some(k);
            }
            cur = cur.delta();
        }
        unreachable!("order iteration failed to terminate");
    }

    /// Generic order along the prime `p`: the largest `k` with
    /// `delta^(k-1)(self)` contained in `p`; zero when `self` is not
    /// contained in `p`.  The caller asserts that `p` is prime.
    pub fn order_along(&self, p: &Ideal) -> u64 {
        if self.is_zero() {
            // the zero ideal vanishes to infinite order; callers exclude it
            panic!("order_along called on the zero ideal");
        }
        let mut cur = self.groebner_basis(TermOrder::DegRevLex);
        for k in 0..4096 {
            if !p.contains(&cur) {
                return k;
            }
            cur = cur.delta();
        }
        unreachable!("order iteration failed to terminate");
    }

    /// Inject into a larger context; `var_map[i]` is the target index of the
    /// `i`-th variable of `self`.
    pub fn inject(&self, target: &Ctx, var_map: &[usize]) -> Ideal {
        let assigns: Vec<Poly> = var_map.iter().map(|&j| Poly::var(target, j)).collect();
        Ideal::new(target, self.gens.iter().map(|g| g.substitute(target, &assigns)).collect())
    }

    /// Saturation `self : f^infinity` by the Rabinowitsch trick: adjoin `t`,
    /// add `1 - t*f`, eliminate `t`.
    pub fn saturate(&self, f: &Poly) -> Ideal {
        assert!(!f.is_zero(), "saturation by zero");
        if f.is_constant() {
            return self.clone();
        }
        let (ext, t) = super::VarContext::extend(&self.ctx, "_t");
        let var_map: Vec<usize> = (0..self.ctx.len()).collect();
        let lifted = self.inject(&ext, &var_map);
        let f_ext = f.substitute(&ext, &var_map.iter().map(|&j| Poly::var(&ext, j)).collect::<Vec<_>>());
        let relation = Poly::one(&ext).sub(&Poly::var(&ext, t).mul(&f_ext));
        let mut gens = lifted.gens.clone();
        gens.push(relation);
        let gb = buchberger(&ext, &gens, TermOrder::ElimLast(1));
        let kept: Vec<Poly> = gb
            .into_iter()
            .filter(|g| !g.involves_var(t))
            .map(|g| restrict_last(&g, &self.ctx))
            .collect();
        Ideal::new(&self.ctx, kept)
    }

    /// Saturate by several elements in turn.
    pub fn saturate_all(&self, fs: &[Poly]) -> Ideal {
        let mut out = self.clone();
        for f in fs {
            out = out.saturate(f);
        }
        out
    }

    /// Radical membership: `f` vanishes on the zero set of `self`.
    pub fn radical_contains_poly(&self, f: &Poly) -> bool {
        if f.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        let (ext, t) = super::VarContext::extend(&self.ctx, "_t");
        let var_map: Vec<usize> = (0..self.ctx.len()).collect();
        let lifted = self.inject(&ext, &var_map);
        let f_ext = f.substitute(&ext, &var_map.iter().map(|&j| Poly::var(&ext, j)).collect::<Vec<_>>());
        let relation = Poly::one(&ext).sub(&Poly::var(&ext, t).mul(&f_ext));
        let mut gens = lifted.gens.clone();
        gens.push(relation);
        Ideal::new(&ext, gens).is_unit()
    }

    /// Zero-set containment `V(self)` inside `V(other)`.
    pub fn vanishes_on(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.radical_contains_poly(g))
    }

    /// Equality of zero sets.
    pub fn same_zero_set(&self, other: &Ideal) -> bool {
        self.vanishes_on(other) && other.vanishes_on(self)
    }

    /// Ideal intersection via a tag variable.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        if self.is_zero() {
            return self.clone();
        }
        if other.is_zero() {
            return other.clone();
        }
        let (ext, t) = super::VarContext::extend(&self.ctx, "_t");
        let var_map: Vec<usize> = (0..self.ctx.len()).collect();
        let tv = Poly::var(&ext, t);
        let one_minus_t = Poly::one(&ext).sub(&tv);
        let mut gens: Vec<Poly> =
            self.inject(&ext, &var_map).gens.iter().map(|g| g.mul(&tv)).collect();
        gens.extend(other.inject(&ext, &var_map).gens.iter().map(|g| g.mul(&one_minus_t)));
        let gb = buchberger(&ext, &gens, TermOrder::ElimLast(1));
        let kept: Vec<Poly> = gb
            .into_iter()
            .filter(|g| !g.involves_var(t))
            .map(|g| restrict_last(&g, &self.ctx))
            .collect();
        Ideal::new(&self.ctx, kept)
    }

    /// Render generators in a stable order.
    pub fn gens_text(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

/// Deterministic polynomial sort: by leading monomial, then textual form.
fn cmp_polys(a: &Poly, b: &Poly) -> Ordering {
    let la = a.leading(&cmp_degrevlex).map(|(e, _)| e.clone());
    let lb = b.leading(&cmp_degrevlex).map(|(e, _)| e.clone());
    match (la, lb) {
        (Some(ea), Some(eb)) => cmp_degrevlex(&ea, &eb).then_with(|| a.to_string().cmp(&b.to_string())),
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
    }
}

/// Drop a final helper variable (which must not occur) from a polynomial.
fn restrict_last(g: &Poly, target: &Ctx) -> Poly {
    let assigns: Vec<Poly> = (0..target.len())
        .map(|j| Poly::var(target, j))
        .chain(std::iter::once(Poly::zero(target)))
        .collect();
    g.substitute(target, &assigns)
}

/// Fully reduced normal form of `f` modulo `basis` under `order`.
pub fn normal_form(f: &Poly, basis: &[Poly], order: TermOrder) -> Poly {
    let cmp = |a: &[u32], b: &[u32]| order.cmp(a, b);
    let leads: Vec<(Vec<u32>, Q)> = basis
        .iter()
        .map(|g| {
            let (e, c) = g.leading(&cmp).expect("zero polynomial in basis");
            (e.clone(), c.clone())
        })
        .collect();
    let mut rem = f.clone();
    'outer: loop {
        if rem.is_zero() {
            return rem;
        }
        // scan terms from largest; reduce the first reducible one
        let mut terms: Vec<(Vec<u32>, Q)> = rem.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        terms.sort_by(|(a, _), (b, _)| cmp(b, a));
        for (e, c) in &terms {
            for (gi, (le, lc)) in leads.iter().enumerate() {
                if le.iter().zip(e).all(|(a, b)| a <= b) {
                    let qe: Vec<u32> = e.iter().zip(le).map(|(a, b)| a - b).collect();
                    let qc = c.clone() / lc.clone();
                    rem = rem.sub(&basis[gi].mul_term(&qe, &qc));
                    continue 'outer;
                }
            }
        }
        return rem;
    }
}

/// Reduced Groebner basis by Buchberger's algorithm with the coprimality
/// criterion; deterministic pair selection, generator order, and scaling.
pub fn buchberger(ctx: &Ctx, gens: &[Poly], order: TermOrder) -> Vec<Poly> {
    let cmp = |a: &[u32], b: &[u32]| order.cmp(a, b);
    let mut basis: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.normalized()).collect();
    basis.sort_by(cmp_polys);
    basis.dedup();
    if basis.iter().any(|g| g.is_constant()) {
        return vec![Poly::one(ctx)];
    }
    if basis.is_empty() {
        return vec![];
    }

    let lead = |g: &Poly| -> (Vec<u32>, Q) {
        let (e, c) = g.leading(&cmp).unwrap();
        (e.clone(), c.clone())
    };
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let pair_key = |basis: &[Poly], i: usize, j: usize| -> (u64, usize, usize) {
        let (ei, _) = basis[i].leading(&cmp).unwrap();
        let (ej, _) = basis[j].leading(&cmp).unwrap();
        let deg: u64 = ei.iter().zip(ej).map(|(a, b)| *a.max(b) as u64).sum();
        (deg, i, j)
    };
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.insert(pair_key(&basis, i, j));
        }
    }

    while let Some(&(key, i, j)) = pairs.iter().next() {
        pairs.remove(&(key, i, j));
        let (ei, ci) = lead(&basis[i]);
        let (ej, cj) = lead(&basis[j]);
        // coprime leading monomials reduce to zero
        if ei.iter().zip(&ej).all(|(a, b)| *a.min(b) == 0) {
            continue;
        }
        let lcm: Vec<u32> = ei.iter().zip(&ej).map(|(a, b)| *a.max(b)).collect();
        let qi: Vec<u32> = lcm.iter().zip(&ei).map(|(a, b)| a - b).collect();
        let qj: Vec<u32> = lcm.iter().zip(&ej).map(|(a, b)| a - b).collect();
        let s = basis[i]
            .mul_term(&qi, &(Q::one() / ci))
            .sub(&basis[j].mul_term(&qj, &(Q::one() / cj)));
        let r = normal_form(&s, &basis, order).normalized();
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![Poly::one(ctx)];
        }
        basis.push(r);
        let n = basis.len() - 1;
        for k in 0..n {
            pairs.insert(pair_key(&basis, k, n));
        }
    }

    // minimalize: drop generators whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (ei, _) = basis[i].leading(&cmp).unwrap();
        let ei = ei.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (ej, _) = basis[j].leading(&cmp).unwrap();
            if ej.iter().zip(&ei).all(|(a, b)| a <= b) && *ej != ei {
                keep[i] = false;
                break;
            }
            if *ej == ei && j < i {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Poly> = basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect();

    // inter-reduce tails
    let mut reduced: Vec<Poly> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Poly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let r = if others.is_empty() {
            minimal[i].clone()
        } else {
            normal_form(&minimal[i], &others, order)
        };
        if !r.is_zero() {
            reduced.push(r.normalized());
        }
    }
    reduced.sort_by(cmp_polys);
    reduced.dedup();
    reduced
}

/// Check that the pair `(I, b)` of an ideal and control makes sense.
pub fn check_control(b: u64) -> Result<()> {
    if b == 0 {
        return Err(Error::Precondition("control must be positive".into()));
    }
    Ok(())
}
