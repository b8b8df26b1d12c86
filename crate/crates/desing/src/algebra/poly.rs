//! Multivariate polynomials with exact rational coefficients.
//!
//! Terms are stored in a map keyed by exponent vectors, so the representation
//! is canonical independently of any term order; order-sensitive operations
//! (leading terms, division) take the order as a parameter.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::Ctx;

fn q_pow(c: &Q, k: u32) -> Q {
    let mut out = Q::one();
    for _ in 0..k {
        out *= c.clone();
    }
    out
}

/// Exact rational scalar used throughout the engine.
pub type Q = BigRational;

/// An ordered list of variable names defining an affine coordinate ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    pub fn new(names: &[&str]) -> Ctx {
        Arc::new(VarContext { names: names.iter().map(|s| s.to_string()).collect() })
    }

    pub fn from_names(names: Vec<String>) -> Ctx {
        Arc::new(VarContext { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Extend a context by one fresh variable, preferring `base`, then
    /// `base1`, `base2`, ... until an unused name is found.
    pub fn extend(ctx: &Ctx, base: &str) -> (Ctx, usize) {
        let mut name = base.to_string();
        let mut k = 0usize;
        while ctx.index_of(&name).is_some() {
            k += 1;
            name = format!("{base}{k}");
        }
        let mut names = ctx.names.clone();
        names.push(name);
        let idx = names.len() - 1;
        (Arc::new(VarContext { names }), idx)
    }

    /// Drop one variable, keeping the order of the others.
    pub fn without(ctx: &Ctx, var: usize) -> Ctx {
        let names =
            ctx.names.iter().enumerate().filter(|(i, _)| *i != var).map(|(_, n)| n.clone()).collect();
        Arc::new(VarContext { names })
    }
}

/// Graded reverse lexicographic comparison of exponent vectors.
pub fn cmp_degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len().max(b.len())).rev() {
        let (ea, eb) = (*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0));
        if ea != eb {
            return eb.cmp(&ea);
        }
    }
    Ordering::Equal
}

/// A polynomial in the coordinate ring of `ctx`; no zero coefficients stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: Ctx,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(ctx: &Ctx) -> Poly {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Ctx, c: Q) -> Poly {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(vec![0; ctx.len()], c);
        }
        p
    }

    pub fn int(ctx: &Ctx, c: i64) -> Poly {
        Poly::constant(ctx, Q::from_integer(BigInt::from(c)))
    }

    pub fn one(ctx: &Ctx) -> Poly {
        Poly::int(ctx, 1)
    }

    pub fn var(ctx: &Ctx, i: usize) -> Poly {
        let mut e = vec![0u32; ctx.len()];
        e[i] = 1;
        Poly::monomial(ctx, e, Q::one())
    }

    pub fn monomial(ctx: &Ctx, exps: Vec<u32>, coef: Q) -> Poly {
        let mut p = Poly::zero(ctx);
        if !coef.is_zero() {
            assert_eq!(exps.len(), ctx.len());
            p.terms.insert(exps, coef);
        }
        p
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// The single variable index if the polynomial is `c * x_i`.
    pub fn as_scaled_var(&self) -> Option<usize> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, _) = self.terms.iter().next().unwrap();
        let mut var = None;
        for (i, &k) in e.iter().enumerate() {
            match (k, var) {
                (0, _) => {}
                (1, None) => var = Some(i),
                _ => return None,
            }
        }
        var
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn insert_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Multiply by the term `coef * x^exps`.
    pub fn mul_term(&self, exps: &[u32], coef: &Q) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (e, c) in &self.terms {
            let ne: Vec<u32> = e.iter().zip(exps).map(|(x, y)| x + y).collect();
            out.insert_term(ne, c.clone() * coef.clone());
        }
        out
    }

    pub fn pow(&self, k: u64) -> Poly {
        let mut out = Poly::one(&self.ctx);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.insert_term(ne, c.clone() * Q::from_integer(BigInt::from(e[var])));
        }
        out
    }

    /// Substitute every variable of `self` by the matching polynomial in
    /// `assigns` (all in `target`'s context).
    pub fn substitute(&self, target: &Ctx, assigns: &[Poly]) -> Poly {
        assert_eq!(assigns.len(), self.ctx.len());
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&assigns[i].pow(k as u64));
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut out = Q::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    v *= point[i].clone();
                }
            }
            out += v;
        }
        out
    }

    /// `p(x + a)`: translate the origin to `a`.
    pub fn translate(&self, point: &[Q]) -> Poly {
        let assigns: Vec<Poly> = (0..self.ctx.len())
            .map(|i| Poly::var(&self.ctx, i).add(&Poly::constant(&self.ctx, point[i].clone())))
            .collect();
        self.substitute(&self.ctx.clone(), &assigns)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max()
    }

    /// Order of vanishing at the origin: the minimal total degree of a term.
    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).min()
    }

    pub fn degree_in_var(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn min_exp_in_var(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    pub fn involves_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// The coefficient of `x_var^k`, as a polynomial not involving `x_var`.
    pub fn coefficient_of(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut ne = e.clone();
                ne[var] = 0;
                out.insert_term(ne, c.clone());
            }
        }
        out
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&vec![0; self.ctx.len()]).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficients of the homogeneous degree-one part, indexed by variable.
    pub fn linear_coefficients(&self) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ctx.len()];
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == 1 {
                let var = e.iter().position(|&k| k == 1).unwrap();
                out[var] = c.clone();
            }
        }
        out
    }

    /// The leading exponent/coefficient under `cmp`.
    pub fn leading<'a>(&'a self, cmp: &dyn Fn(&[u32], &[u32]) -> Ordering) -> Option<(&'a Vec<u32>, &'a Q)> {
        self.terms.iter().max_by(|(a, _), (b, _)| cmp(a, b))
    }

    /// Exact division by `d`; `None` when the remainder would be nonzero.
    pub fn divide_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero());
        let cmp = cmp_degrevlex;
        let (dl, dc) = d.leading(&cmp).unwrap();
        let dl = dl.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quo = Poly::zero(&self.ctx);
        while !rem.is_zero() {
            let (rl, rc) = rem.leading(&cmp).unwrap();
            if !dl.iter().zip(rl).all(|(a, b)| a <= b) {
                return None;
            }
            let qe: Vec<u32> = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let qc = rc.clone() / dc.clone();
            quo.insert_term(qe.clone(), qc.clone());
            rem = rem.sub(&d.mul_term(&qe, &qc));
        }
        Some(quo)
    }

    /// Exact `k`-th root when it exists.
    pub fn nth_root(&self, k: u32) -> Option<Poly> {
        if k == 1 {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let cmp = cmp_degrevlex;
        let (le, lc) = self.leading(&cmp).unwrap();
        if le.iter().any(|&e| e % k != 0) {
            return None;
        }
        let root_exp: Vec<u32> = le.iter().map(|&e| e / k).collect();
        let root_coef = rational_nth_root(lc, k)?;
        let mut g = Poly::monomial(&self.ctx, root_exp, root_coef);
        // Grow g term by term: the leading term of the defect determines the
        // next term of g uniquely.
        for _ in 0..(self.num_terms() * (k as usize) + 8) {
            let defect = self.sub(&g.pow(k as u64));
            if defect.is_zero() {
                return Some(g);
            }
            let (de, dc) = defect.leading(&cmp).unwrap();
            let (ge, gc) = g.leading(&cmp).unwrap();
            // next term t satisfies k * lt(g)^(k-1) * t = lt(defect)
            let mut base = vec![0u32; self.ctx.len()];
            for (i, &e) in ge.iter().enumerate() {
                base[i] = e * (k - 1);
            }
            if !base.iter().zip(de).all(|(a, b)| a <= b) {
                return None;
            }
            let te: Vec<u32> = de.iter().zip(&base).map(|(a, b)| a - b).collect();
            if cmp(&te, ge) != Ordering::Less {
                return None;
            }
            let denom = Q::from_integer(BigInt::from(k)) * q_pow(gc, k - 1);
            let tc = dc.clone() / denom;
            g.insert_term(te, tc);
        }
        None
    }

    /// Scale so coefficients are coprime integers with positive coefficient
    /// on the `cmp_degrevlex` leading term.
    pub fn normalized(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * &denom_lcm / c.denom();
            num_gcd = num::integer::gcd(num_gcd, n);
        }
        let mut factor = Q::new(denom_lcm, num_gcd);
        let (_, lc) = self.leading(&cmp_degrevlex).unwrap();
        if (lc.clone() * factor.clone()).is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Render one term; `first` controls sign placement.
    fn fmt_term(&self, e: &[u32], c: &Q, first: bool, out: &mut String) {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut parts: Vec<String> = Vec::new();
        let is_const = e.iter().all(|&k| k == 0);
        if !mag.is_one() || is_const {
            if mag.denom().is_one() {
                parts.push(mag.numer().to_string());
            } else {
                parts.push(format!("{}/{}", mag.numer(), mag.denom()));
            }
        }
        for (i, &k) in e.iter().enumerate() {
            if k == 1 {
                parts.push(self.ctx.name(i).to_string());
            } else if k > 1 {
                parts.push(format!("{}^{}", self.ctx.name(i), k));
            }
        }
        out.push_str(&parts.join("*"));
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| cmp_degrevlex(b, a));
        let mut out = String::new();
        for (i, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            self.fmt_term(e, c, i == 0, &mut out);
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn rational_nth_root(c: &Q, k: u32) -> Option<Q> {
    let neg = c.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let n = int_nth_root(&c.numer().abs(), k)?;
    let d = int_nth_root(&c.denom().abs(), k)?;
    let mut r = Q::new(n, d);
    if neg {
        r = -r;
    }
    Some(r)
}

fn int_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let r = n.nth_root(k);
    let mut check = BigInt::one();
    for _ in 0..k {
        check *= &r;
    }
    if check == *n {
        Some(r)
    } else {
        None
    }
}

/// Error raised by the expression parser, with a character offset into the
/// parsed string.
#[derive(Debug, Clone)]
pub struct PolyParseError {
    pub offset: usize,
    pub msg: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    ctx: &'a Ctx,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> std::result::Result<T, PolyParseError> {
        Err(PolyParseError { offset: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> std::result::Result<Poly, PolyParseError> {
        let mut neg = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Poly, PolyParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> std::result::Result<Poly, PolyParseError> {
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == start {
                return self.err("expected exponent");
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let k: u64 = digits.parse().map_err(|_| PolyParseError {
                offset: start,
                msg: "exponent out of range".into(),
            })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn base(&mut self) -> std::result::Result<Poly, PolyParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = digits.parse().unwrap();
                Ok(Poly::constant(self.ctx, Q::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.ctx.index_of(&name) {
                    Some(i) => Ok(Poly::var(self.ctx, i)),
                    None => Err(PolyParseError {
                        offset: start,
                        msg: format!("unknown variable '{name}'"),
                    }),
                }
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
            None => self.err("unexpected end of expression"),
        }
    }
}

impl Poly {
    /// Parse an expression over `+ - * ^`, integers, named variables, and
    /// parentheses.
    pub fn parse(ctx: &Ctx, s: &str) -> std::result::Result<Poly, PolyParseError> {
        let mut p = Parser { chars: s.chars().collect(), pos: 0, ctx };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return p.err("trailing input");
        }
        Ok(out)
    }
}

#[cfg(test)]
mod test {
    use super::*;

    fn ctx2() -> Ctx {
        VarContext::new(&["x", "y"])
    }

    fn p(s: &str) -> Poly {
        Poly::parse(&ctx2(), s).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["x^2 - y^3", "2*x*y + 1", "-x + 1", "x*(x + y) - y^2", "0", "7"] {
            let q = p(s);
            let r = Poly::parse(&ctx2(), &q.to_string()).unwrap();
            assert_eq!(q, r, "round trip failed for {s}");
        }
    }

    #[test]
    fn parse_rejects_unknown_variable_and_junk() {
        assert!(Poly::parse(&ctx2(), "x + z").is_err());
        assert!(Poly::parse(&ctx2(), "x +").is_err());
        assert!(Poly::parse(&ctx2(), "x ** y").is_err());
        assert!(Poly::parse(&ctx2(), "(x").is_err());
    }

    #[test]
    fn arithmetic_identities() {
        let a = p("x^2 - y^3");
        let b = p("x + y");
        assert_eq!(a.mul(&b).divide_exact(&b), Some(a.clone()));
        assert_eq!(a.sub(&a), Poly::zero(&ctx2()));
        assert_eq!(a.add(&a.neg()), Poly::zero(&ctx2()));
        let sq = b.mul(&b);
        assert_eq!(sq.nth_root(2), Some(b.clone()));
        assert_eq!(p("x^2 + 2*x*y + y^2").nth_root(2), Some(b));
        assert_eq!(p("x^2 + y^2").nth_root(2), None);
    }

    #[test]
    fn derivative_and_order() {
        let a = p("x^2 - y^3");
        assert_eq!(a.derivative(0), p("2*x"));
        assert_eq!(a.derivative(1), p("-3*y^2"));
        assert_eq!(a.min_total_degree(), Some(2));
        assert_eq!(a.total_degree(), Some(3));
    }

    #[test]
    fn substitution_and_eval() {
        let ctx = ctx2();
        let a = p("x^2 - y^3");
        // blow-up style substitution x -> x*y
        let assigns = vec![p("x*y"), p("y")];
        assert_eq!(a.substitute(&ctx, &assigns), p("x^2*y^2 - y^3"));
        let q = |n: i64| Q::from_integer(BigInt::from(n));
        assert_eq!(a.eval(&[q(1), q(1)]), q(0));
        assert_eq!(a.eval(&[q(3), q(2)]), q(1));
        let t = a.translate(&[q(1), q(0)]);
        assert_eq!(t, p("x^2 + 2*x + 1 - y^3"));
    }

    #[test]
    fn normalization_is_content_one_with_positive_lead() {
        let a = p("2*x^2 - 4*y^3").normalized();
        assert_eq!(a, p("2*y^3 - x^2"));
        let b = p("x").scale(&Q::new(BigInt::from(-1), BigInt::from(3)));
        assert_eq!(b.normalized(), p("x"));
    }

    #[test]
    fn degrevlex_orders_by_degree_then_reverse_lex() {
        // x*y^2 beats x^2*z in degrevlex with x > y > z
        let ctx = VarContext::new(&["x", "y", "z"]);
        let a = Poly::parse(&ctx, "x*y^2").unwrap();
        let b = Poly::parse(&ctx, "x^2*z").unwrap();
        let (ea, _) = a.leading(&cmp_degrevlex).unwrap();
        let (eb, _) = b.leading(&cmp_degrevlex).unwrap();
        assert_eq!(cmp_degrevlex(ea, eb), Ordering::Greater);
    }
}
