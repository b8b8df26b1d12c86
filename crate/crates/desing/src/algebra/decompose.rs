//! Minimal primes, dimension, and Jacobian smoothness.
//!
//! Decomposition is a desk-scale heuristic with an honest failure mode: it
//! splits factorable generators, eliminates variables that occur linearly
//! with a constant coefficient, certifies irreducibility for the generator
//! shapes that actually occur (monomials, linear forms, binomials with a
//! primitive exponent gap, polynomials that are linear in some variable with
//! unit or coprime-monomial coefficient, quadratics with non-square
//! discriminant), and reports `DecompositionUnsupported` for anything else.

use itertools::Itertools;
use num::{BigInt, One, Signed, Zero};

use super::ideal::{buchberger, Ideal, TermOrder};
use super::poly::{Poly, Q};
use super::Ctx;
use crate::{Error, Result};

/// Irreducible factors with multiplicities, or an error when irreducibility
/// cannot be certified by the heuristics.
pub fn factor_poly(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let f = f.normalized();
    if f.is_constant() {
        return Ok(vec![]);
    }
    let ctx = f.ctx().clone();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    let mut rest = f;
    // monomial content
    for v in 0..ctx.len() {
        let m = rest.min_exp_in_var(v);
        if m > 0 {
            push_factor(&mut factors, Poly::var(&ctx, v), m);
            rest = rest.divide_exact(&Poly::var(&ctx, v).pow(m as u64)).unwrap();
        }
    }
    if rest.is_constant() {
        return Ok(factors);
    }
    for (g, k) in factor_primitive(&rest)? {
        push_factor(&mut factors, g, k);
    }
    Ok(factors)
}

fn push_factor(factors: &mut Vec<(Poly, u32)>, g: Poly, k: u32) {
    let g = g.normalized();
    for (h, m) in factors.iter_mut() {
        if *h == g {
            *m += k;
            return;
        }
    }
    factors.push((g, k));
}

/// Factor a polynomial with no monomial content.
fn factor_primitive(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let ctx = f.ctx().clone();
    let deg = f.total_degree().unwrap();
    if deg == 1 {
        return Ok(vec![(f.clone(), 1)]);
    }

    // perfect powers
    for k in (2..=deg).rev() {
        if deg % k != 0 {
            continue;
        }
        if let Some(g) = f.nth_root(k) {
            let inner = factor_primitive(&g.normalized())?;
            return Ok(inner.into_iter().map(|(h, m)| (h, m * k)).collect());
        }
    }

    let occurring: Vec<usize> = (0..ctx.len()).filter(|&v| f.involves_var(v)).collect();

    // univariate: rational roots, then degree bound
    if occurring.len() == 1 {
        return factor_univariate(f, occurring[0]);
    }

    // binomials: difference-of-powers splitting; primitive gap certifies
    if f.num_terms() == 2 {
        return factor_binomial(f);
    }

    // quadratic in exactly two variables: discriminant decides
    if occurring.len() == 2 && deg == 2 {
        if let Some(out) = factor_bivariate_quadratic(f, occurring[0], occurring[1])? {
            return Ok(out);
        }
    }

    // linear in some variable
    for &v in &occurring {
        if f.degree_in_var(v) != 1 {
            continue;
        }
        let a = f.coefficient_of(v, 1);
        let b = f.coefficient_of(v, 0);
        if a.is_constant() {
            return Ok(vec![(f.clone(), 1)]);
        }
        if let Some(h) = b.divide_exact(&a) {
            let mut out = factor_primitive(&a.normalized())?;
            let lin = Poly::var(&ctx, v).add(&h);
            for (g, k) in factor_primitive(&lin.normalized())? {
                for _ in 0..k {
                    push_factor_vec(&mut out, g.clone());
                }
            }
            return Ok(out);
        }
        // coefficient is a monomial sharing no variable content with b:
        // the polynomial is primitive of degree one in v, hence irreducible
        if a.is_monomial() && (0..ctx.len()).all(|u| a.min_exp_in_var(u) == 0 || b.min_exp_in_var(u) == 0)
        {
            return Ok(vec![(f.clone(), 1)]);
        }
    }

    Err(Error::DecompositionUnsupported(format!(
        "cannot certify a factorization of {f}"
    )))
}

fn push_factor_vec(factors: &mut Vec<(Poly, u32)>, g: Poly) {
    let g = g.normalized();
    for (h, m) in factors.iter_mut() {
        if *h == g {
            *m += 1;
            return;
        }
    }
    factors.push((g, 1));
}

fn factor_univariate(f: &Poly, v: usize) -> Result<Vec<(Poly, u32)>> {
    let ctx = f.ctx().clone();
    let deg = f.degree_in_var(v);
    // rational roots p/q with p | constant term, q | leading coefficient
    let c0 = f.coefficient_of(v, 0).as_constant().unwrap();
    let cn = f.coefficient_of(v, deg).as_constant().unwrap();
    debug_assert!(!c0.is_zero(), "monomial content was removed");
    if let (Some(ps), Some(qs)) = (divisors(c0.numer()), divisors(cn.numer())) {
        for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let root = Q::new(p.clone() * BigInt::from(sign), q.clone());
                    let mut point = vec![Q::zero(); ctx.len()];
                    point[v] = root.clone();
                    if f.eval(&point).is_zero() {
                        let lin = Poly::var(&ctx, v)
                            .scale(&Q::from_integer(q.clone()))
                            .sub(&Poly::constant(&ctx, Q::from_integer(p.clone() * BigInt::from(sign))));
                        let lin = lin.normalized();
                        let quo = f.divide_exact(&lin).expect("root found but division failed");
                        let mut out = factor_primitive(&quo.normalized())?;
                        push_factor_vec(&mut out, lin);
                        return Ok(out);
                    }
                }
            }
        }
    }
    if deg <= 2 {
        // no rational root: irreducible over the rationals
        return Ok(vec![(f.clone(), 1)]);
    }
    Err(Error::DecompositionUnsupported(format!(
        "univariate factorization beyond roots not supported: {f}"
    )))
}

fn factor_binomial(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let ctx = f.ctx().clone();
    let terms: Vec<(Vec<u32>, Q)> = f.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    let (e1, c1) = &terms[1];
    let (e2, c2) = &terms[0];
    let mut d = 0u32;
    for &e in e1.iter().chain(e2.iter()) {
        d = num::integer::gcd(d, e);
    }
    if d >= 2 {
        let a: Vec<u32> = e1.iter().map(|&e| e / d).collect();
        let b: Vec<u32> = e2.iter().map(|&e| e / d).collect();
        let ratio = -(c2.clone() / c1.clone());
        for dp in (2..=d).rev() {
            if d % dp != 0 {
                continue;
            }
            if let Some(r) = rational_root_of(&ratio, dp) {
                // m1^dp - r^dp * m2^dp, with the complementary power left over
                let am = Poly::monomial(&ctx, a.iter().map(|&e| e * (d / dp)).collect(), Q::one());
                let bm = Poly::monomial(&ctx, b.iter().map(|&e| e * (d / dp)).collect(), Q::one());
                let lin = am.sub(&bm.scale(&r));
                let quo = f.divide_exact(&lin.normalized());
                if let Some(quo) = quo {
                    let mut out = factor_primitive(&quo.normalized())?;
                    push_factor_vec(&mut out, lin.normalized());
                    return Ok(out);
                }
            }
        }
        // biquadratic exception: A^4 + 4 s^4 B^4 splits into two quadratics
        if d % 4 == 0 {
            let quarter = -(c2.clone() / c1.clone());
            if let Some(s) = rational_root_of(&(quarter / Q::from_integer(BigInt::from(-4))), 4) {
                let am = Poly::monomial(&ctx, a.iter().map(|&e| e * (d / 4)).collect(), Q::one());
                let bm = Poly::monomial(&ctx, b.iter().map(|&e| e * (d / 4)).collect(), Q::one());
                let two_s = s.clone() + s.clone();
                let two_s2 = (s.clone() * s.clone()) + (s.clone() * s.clone());
                let cross = am.mul(&bm).scale(&two_s);
                let sq = am.mul(&am).add(&bm.mul(&bm).scale(&two_s2));
                let g1 = sq.add(&cross);
                let g2 = sq.sub(&cross);
                if f.divide_exact(&g1.normalized()).is_some() {
                    let mut out = factor_primitive(&g1.normalized())?;
                    for (g, k) in factor_primitive(&g2.normalized())? {
                        for _ in 0..k {
                            push_factor_vec(&mut out, g.clone());
                        }
                    }
                    return Ok(out);
                }
            }
        }
    }
    // exponent gap is primitive and no root split applies: irreducible
    Ok(vec![(f.clone(), 1)])
}

fn factor_bivariate_quadratic(f: &Poly, u: usize, v: usize) -> Result<Option<Vec<(Poly, u32)>>> {
    // homogeneous a*u^2 + b*u*v + c*v^2 only; others fall through
    let ctx = f.ctx().clone();
    if f.terms().any(|(e, _)| e.iter().sum::<u32>() != 2) {
        return Ok(None);
    }
    let coef = |eu: u32, ev: u32| -> Q {
        let mut e = vec![0u32; ctx.len()];
        e[u] = eu;
        e[v] = ev;
        f.terms()
            .find(|(te, _)| **te == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    };
    let (a, b, c) = (coef(2, 0), coef(1, 1), coef(0, 2));
    if a.is_zero() || c.is_zero() {
        return Ok(None); // has monomial factor or linear in one variable
    }
    let disc = b.clone() * b.clone() - Q::from_integer(BigInt::from(4)) * a.clone() * c.clone();
    match rational_root_of(&disc, 2) {
        Some(s) => {
            // roots (-b +- s) / 2a in u/v
            let two_a = a.clone() + a.clone();
            let r1 = (-b.clone() + s.clone()) / two_a.clone();
            let lin1 = Poly::var(&ctx, u).sub(&Poly::var(&ctx, v).scale(&r1));
            let quo = f.divide_exact(&lin1.normalized()).expect("discriminant split failed");
            let mut out = factor_primitive(&quo.normalized())?;
            push_factor_vec(&mut out, lin1.normalized());
            Ok(Some(out))
        }
        None => Ok(Some(vec![(f.clone(), 1)])),
    }
}

fn rational_root_of(c: &Q, k: u32) -> Option<Q> {
    if c.is_zero() {
        return Some(Q::zero());
    }
    if c.is_negative() && k % 2 == 0 {
        return None;
    }
    let n = int_root(&c.numer().abs(), k)?;
    let d = int_root(&c.denom().abs(), k)?;
    let mut r = Q::new(n, d);
    if c.is_negative() {
        r = -r;
    }
    Some(r)
}

fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    let mut check = BigInt::one();
    for _ in 0..k {
        check *= &r;
    }
    (check == *n).then_some(r)
}

/// Divisors of |n|, or `None` when n is too large to enumerate.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n > BigInt::from(1_000_000i64) {
        return None;
    }
    let n: i64 = n.to_string().parse().ok()?;
    let n = n.max(1);
    let mut out = Vec::new();
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// Minimal primes of `i`, each returned Groebner-reduced, deterministically
/// ordered.  The unit ideal is rejected; the zero ideal is its own component.
pub fn components_of(i: &Ideal) -> Result<Vec<Ideal>> {
    if i.is_zero() {
        return Ok(vec![i.clone()]);
    }
    if i.is_unit() {
        return Err(Error::Precondition("components_of called on the unit ideal".into()));
    }
    let ctx = i.ctx().clone();
    let comps = decompose_rec(&ctx, i.gb().to_vec(), 0)?;
    Ok(minimize(comps))
}

fn decompose_rec(ctx: &Ctx, gens: Vec<Poly>, depth: usize) -> Result<Vec<Ideal>> {
    if depth > 64 {
        return Err(Error::Internal("decomposition recursion too deep".into()));
    }
    let gb = buchberger(ctx, &gens, TermOrder::DegRevLex);
    if gb.is_empty() {
        return Ok(vec![Ideal::zero(ctx)]);
    }
    if gb.len() == 1 && gb[0].is_constant() {
        return Ok(vec![]);
    }

    // eliminate a variable occurring linearly with constant coefficient
    for g in &gb {
        for v in 0..ctx.len() {
            if g.degree_in_var(v) != 1 {
                continue;
            }
            let a = g.coefficient_of(v, 1);
            let Some(ac) = a.as_constant() else { continue };
            if ac.is_zero() {
                continue;
            }
            // v = -b/a eliminates v from the other generators
            let b = g.coefficient_of(v, 0);
            let image = b.scale(&(-Q::one() / ac));
            let assigns: Vec<Poly> = (0..ctx.len())
                .map(|u| if u == v { image.clone() } else { Poly::var(ctx, u) })
                .collect();
            let others: Vec<Poly> = gb
                .iter()
                .filter(|h| *h != g)
                .map(|h| h.substitute(ctx, &assigns))
                .collect();
            let sub = decompose_rec(ctx, others, depth + 1)?;
            return Ok(sub
                .into_iter()
                .map(|p| {
                    let mut pg = p.gens().to_vec();
                    pg.push(g.clone());
                    Ideal::new(ctx, pg).groebner_basis(TermOrder::DegRevLex)
                })
                .collect());
        }
    }

    // split on the first generator that factors
    let mut first_error: Option<Error> = None;
    for (gi, g) in gb.iter().enumerate() {
        match factor_poly(g) {
            Ok(factors) => {
                if factors.len() == 1 && factors[0].1 == 1 {
                    continue;
                }
                let mut out = Vec::new();
                for (h, _) in &factors {
                    let mut branch: Vec<Poly> = gb
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != gi)
                        .map(|(_, p)| p.clone())
                        .collect();
                    branch.push(h.clone());
                    out.extend(decompose_rec(ctx, branch, depth + 1)?);
                }
                return Ok(out);
            }
            Err(e) => {
                if first_error.is_none() {
                    first_error = Some(e);
                }
            }
        }
    }
    if let Some(e) = first_error {
        return Err(e);
    }

    // no elimination, no splitting, every generator certified irreducible
    if gb.len() == 1 {
        return Ok(vec![Ideal::new(ctx, gb)]);
    }
    Err(Error::DecompositionUnsupported(format!(
        "cannot certify primality of <{}>",
        gb.iter().map(|g| g.to_string()).join(", ")
    )))
}

fn minimize(comps: Vec<Ideal>) -> Vec<Ideal> {
    let mut canon: Vec<Ideal> = Vec::new();
    for c in comps {
        let c = c.groebner_basis(TermOrder::DegRevLex);
        if !canon.iter().any(|d| d.equals(&c)) {
            canon.push(c);
        }
    }
    let keep: Vec<bool> = canon
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !canon
                .iter()
                .enumerate()
                .any(|(j, q)| i != j && p.contains(q) && !q.contains(p))
        })
        .collect();
    let mut out: Vec<Ideal> =
        canon.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    out.sort_by(|a, b| {
        a.gens_text().cmp(&b.gens_text())
    });
    out
}

/// Krull dimension of the zero set via independent variable sets modulo the
/// lead-term ideal.  `None` for the unit ideal (empty set).
pub fn dimension_of(i: &Ideal) -> Option<usize> {
    if i.is_unit() {
        return None;
    }
    let n = i.ctx().len();
    if i.is_zero() {
        return Some(n);
    }
    let supports: Vec<Vec<usize>> = i
        .gb()
        .iter()
        .map(|g| {
            let (e, _) = g.leading(&super::poly::cmp_degrevlex).unwrap();
            e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(v, _)| v).collect()
        })
        .collect();
    for size in (0..=n).rev() {
        for subset in (0..n).combinations(size) {
            let independent = supports
                .iter()
                .all(|s| !s.iter().all(|v| subset.contains(v)));
            if independent {
                return Some(size);
            }
        }
    }
    Some(0)
}

/// Codimension of the zero set inside its ambient space.
pub fn codim_of(i: &Ideal) -> Option<usize> {
    dimension_of(i).map(|d| i.ctx().len() - d)
}

/// Jacobian smoothness of `V(i)`: on every minimal component, the
/// codimension-many minors of the Jacobian of the component's generators
/// generate the unit ideal modulo the component.
pub fn is_smooth(i: &Ideal) -> Result<bool> {
    let comps = components_of(i)?;
    for p in comps {
        if p.is_zero() {
            continue;
        }
        let c = codim_of(&p).expect("component cannot be the unit ideal");
        if c == 0 {
            continue;
        }
        let gens = p.gb().to_vec();
        let n = p.ctx().len();
        if gens.len() < c {
            return Err(Error::Internal("component has fewer generators than its codimension".into()));
        }
        let mut minors: Vec<Poly> = Vec::new();
        for rows in (0..gens.len()).combinations(c) {
            for cols in (0..n).combinations(c) {
                let m: Vec<Vec<Poly>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&cv| gens[r].derivative(cv)).collect())
                    .collect();
                minors.push(det(&m));
            }
        }
        let mut test = p.gens().to_vec();
        test.extend(minors);
        if !Ideal::new(p.ctx(), test).is_unit() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let ctx = m[0][0].ctx().clone();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut out = Poly::zero(&ctx);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let sub: Vec<Vec<Poly>> = (1..n)
            .map(|r| (0..n).filter(|&cc| cc != j).map(|cc| m[r][cc].clone()).collect())
            .collect();
        let cof = entry.mul(&det(&sub));
        out = if j % 2 == 0 { out.add(&cof) } else { out.sub(&cof) };
    }
    out
}
