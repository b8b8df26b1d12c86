//! Problem-file grammar, command driver, and JSON transcripts.
//!
//! A problem file is line-directive text: `vars x y`, `gens x^2 - y^3, x*z`,
//! `control 2`, and optional `divisor y minus` lines, with `#` comments.  The
//! driver exposes `resolve`, `principalize`, `embedded`, `trick`, `verify`,
//! and `selftest`, with `--max-steps`, `--json PATH`, and `--trace` flags.
//! Exit codes: 0 success, 1 i/o, 2 parse, 3 step limit, 4 violated assertion.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser as ClapParser, Subcommand};
use serde::Serialize;

use crate::algebra::{Ctx, Ideal, Poly, VarContext};
use crate::basic_object::object_from_ideal;
use crate::charts::{center_text, Sign};
use crate::invariants::q_text;
use crate::resolver::{
    embedded_resolve, hironaka_trick, principalize, resolve, Limits, Node, ResolutionTree,
};
use crate::verify::{
    check_monomial_final, check_pullback_compat, check_snc, check_weak_equiv_scaling, Certificate,
};
use crate::{Error, Result};

/// A parsed problem file: ambient variables, ideal generators, the control,
/// and the initial exceptional divisors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub ctx: Ctx,
    pub gens: Vec<Poly>,
    pub control: u64,
    pub divisors: Vec<(usize, Sign)>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::ParseError { line, col, msg: msg.into() }
}

fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Words of a line together with the 1-based column of each.
fn words_with_cols(chars: &[char], from: usize) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut i = from;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        out.push((start + 1, chars[start..i].iter().collect()));
    }
    out
}

/// Parse the line-directive problem grammar.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut vars: Option<Vec<String>> = None;
    let mut gens: Option<Vec<Poly>> = None;
    let mut control: Option<u64> = None;
    let mut divisors: Vec<(usize, Sign)> = Vec::new();
    let mut ctx: Option<Ctx> = None;
    let mut line_count = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        line_count = line;
        let mut chars: Vec<char> = raw.chars().collect();
        if let Some(pos) = chars.iter().position(|&c| c == '#') {
            chars.truncate(pos);
        }
        let words = words_with_cols(&chars, 0);
        let Some((dcol, directive)) = words.first().cloned() else { continue };
        match directive.as_str() {
            "vars" => {
                if vars.is_some() {
                    return Err(perr(line, dcol, "duplicate vars directive"));
                }
                if words.len() == 1 {
                    return Err(perr(line, dcol, "vars needs at least one name"));
                }
                let mut names = Vec::new();
                for (col, word) in &words[1..] {
                    if !is_identifier(word) {
                        return Err(perr(line, *col, format!("invalid variable name '{word}'")));
                    }
                    if names.contains(word) {
                        return Err(perr(line, *col, format!("duplicate variable '{word}'")));
                    }
                    names.push(word.clone());
                }
                ctx = Some(VarContext::from_names(names.clone()));
                vars = Some(names);
            }
            "gens" => {
                let Some(ctx) = &ctx else {
                    return Err(perr(line, dcol, "vars must be declared before gens"));
                };
                if gens.is_some() {
                    return Err(perr(line, dcol, "duplicate gens directive"));
                }
                let rest_start = dcol - 1 + directive.chars().count();
                let mut parsed = Vec::new();
                let mut piece_start = rest_start;
                let mut i = rest_start;
                let mut pieces: Vec<(usize, String)> = Vec::new();
                while i <= chars.len() {
                    if i == chars.len() || chars[i] == ',' {
                        pieces.push((piece_start, chars[piece_start..i].iter().collect()));
                        piece_start = i + 1;
                    }
                    i += 1;
                }
                for (start, piece) in pieces {
                    if piece.trim().is_empty() {
                        return Err(perr(line, start + 1, "empty generator expression"));
                    }
                    let g = Poly::parse(ctx, &piece)
                        .map_err(|e| perr(line, start + e.offset + 1, e.msg))?;
                    if g.is_zero() {
                        return Err(perr(line, start + 1, "generator is zero"));
                    }
                    parsed.push(g);
                }
                gens = Some(parsed);
            }
            "control" => {
                if control.is_some() {
                    return Err(perr(line, dcol, "duplicate control directive"));
                }
                if words.len() != 2 {
                    return Err(perr(line, dcol, "control needs one positive integer"));
                }
                let (col, word) = &words[1];
                let b: u64 = word
                    .parse()
                    .map_err(|_| perr(line, *col, format!("invalid control '{word}'")))?;
                if b == 0 {
                    return Err(perr(line, *col, "control must be positive"));
                }
                control = Some(b);
            }
            "divisor" => {
                let Some(ctx) = &ctx else {
                    return Err(perr(line, dcol, "vars must be declared before divisor"));
                };
                if words.len() != 3 {
                    return Err(perr(line, dcol, "divisor needs a variable and a sign word"));
                }
                let (vcol, name) = &words[1];
                let Some(v) = ctx.index_of(name) else {
                    return Err(perr(line, *vcol, format!("undeclared divisor variable '{name}'")));
                };
                let (scol, word) = &words[2];
                let sign = match word.as_str() {
                    "plus" => Sign::Plus,
                    "minus" => Sign::Minus,
                    _ => return Err(perr(line, *scol, format!("sign must be plus or minus, got '{word}'"))),
                };
                if divisors.iter().any(|(u, _)| *u == v) {
                    return Err(perr(line, *vcol, format!("duplicate divisor '{name}'")));
                }
                divisors.push((v, sign));
            }
            other => {
                return Err(perr(line, dcol, format!("unknown directive '{other}'")));
            }
        }
    }

    let Some(ctx) = ctx else { return Err(perr(line_count + 1, 1, "missing vars directive")) };
    let Some(gens) = gens else { return Err(perr(line_count + 1, 1, "missing gens directive")) };
    let Some(control) = control else {
        return Err(perr(line_count + 1, 1, "missing control directive"));
    };
    Ok(ProblemFile { ctx, gens, control, divisors })
}

/// Render a problem back to directive text; `parse_problem` inverts this.
pub fn print_problem(p: &ProblemFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("vars {}\n", p.ctx.names().join(" ")));
    let gens: Vec<String> = p.gens.iter().map(|g| g.to_string()).collect();
    out.push_str(&format!("gens {}\n", gens.join(", ")));
    out.push_str(&format!("control {}\n", p.control));
    for (v, sign) in &p.divisors {
        out.push_str(&format!("divisor {} {}\n", p.ctx.name(*v), sign.word()));
    }
    out
}

fn load(path: &Path) -> Result<ProblemFile> {
    let text = fs::read_to_string(path)?;
    parse_problem(&text)
}

#[derive(Serialize)]
struct ExcDoc {
    var: String,
    birth: usize,
    a: u64,
    sign: String,
}

#[derive(Serialize)]
struct ChartDoc {
    id: String,
    vars: Vec<String>,
    #[serde(rename = "J")]
    j: Vec<String>,
    exceptionals: Vec<ExcDoc>,
}

#[derive(Serialize)]
struct NodeDoc {
    id: usize,
    parent: Option<usize>,
    invariant: String,
    charts: Vec<ChartDoc>,
    center: BTreeMap<String, Vec<String>>,
    subst: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Serialize)]
struct TreeDoc {
    control: u64,
    nodes: Vec<NodeDoc>,
    terminal: bool,
}

fn node_doc(node: &Node) -> NodeDoc {
    let charts = node
        .object
        .states
        .iter()
        .map(|s| {
            let ctx = &s.chart.ctx;
            let mut exceptionals: Vec<ExcDoc> = s
                .chart
                .exceptionals
                .iter()
                .map(|r| ExcDoc {
                    var: ctx.name(r.var).to_string(),
                    birth: r.birth,
                    a: r.a_num,
                    sign: r.sign.word().to_string(),
                })
                .collect();
            for p in &s.chart.principal {
                exceptionals.push(ExcDoc {
                    var: p.poly.to_string(),
                    birth: p.birth,
                    a: 0,
                    sign: p.sign.word().to_string(),
                });
            }
            ChartDoc {
                id: s.chart.id.clone(),
                vars: ctx.names().to_vec(),
                j: s.j.gens().iter().map(|g| g.to_string()).collect(),
                exceptionals,
            }
        })
        .collect();
    let center = node
        .centers
        .iter()
        .map(|(id, c)| (id.clone(), c.gens().iter().map(|g| g.to_string()).collect()))
        .collect();
    let subst = node
        .substs
        .iter()
        .map(|(child, (_, m))| {
            let rows = (0..m.source().len())
                .map(|v| (m.source().name(v).to_string(), m.image_text(v)))
                .collect();
            (child.clone(), rows)
        })
        .collect();
    NodeDoc {
        id: node.id,
        parent: node.parent,
        invariant: node.invariant_text.clone(),
        charts,
        center,
        subst,
    }
}

/// The JSON transcript of a finished run, with stable key order.
pub fn tree_doc_json(tree: &ResolutionTree) -> String {
    let doc = TreeDoc {
        control: tree.control,
        nodes: tree.nodes.iter().map(node_doc).collect(),
        terminal: tree.terminal,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("transcript serializes");
    text.push('\n');
    text
}

/// Write the JSON transcript of `tree` to `path`.
pub fn emit_tree(tree: &ResolutionTree, path: &Path) -> Result<()> {
    fs::write(path, tree_doc_json(tree))?;
    Ok(())
}

/// Constructive resolution of pairs (ideal, control) on affine charts.
#[derive(ClapParser)]
#[command(name = "desing", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Hard cap on the number of blow-up steps.
    #[arg(long, global = true, default_value_t = 64)]
    max_steps: usize,
    /// Write the resolution tree as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Print one line per step with the invariant and the center.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve the basic object described by a problem file.
    Resolve { file: PathBuf },
    /// Principalize the ideal of a problem file (the control is taken as 1).
    Principalize { file: PathBuf },
    /// Embedded resolution of the hypersurface in a problem file.
    Embedded { file: PathBuf },
    /// Blow up x^b' against control b on a line times a parameter, N points.
    Trick { b_prime: u64, b: u64, n: u64 },
    /// Re-run a problem file and print independent certificates.
    Verify { file: PathBuf },
    /// Run a small built-in check suite.
    Selftest,
}

/// Parse process arguments, run the requested command, return the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let limits = Limits { max_steps: cli.max_steps };
    match &cli.command {
        Command::Resolve { file } => {
            let p = load(file)?;
            let j = Ideal::new(&p.ctx, p.gens.clone());
            let object = object_from_ideal(&p.ctx, j, p.control, &p.divisors)?;
            if object.sing().is_empty() {
                println!("already resolved");
                return Ok(0);
            }
            let tree = resolve(object, &limits)?;
            report_tree(&tree, cli)?;
            Ok(0)
        }
        Command::Principalize { file } => {
            let p = load(file)?;
            let j = Ideal::new(&p.ctx, p.gens.clone());
            if j.is_unit() {
                println!("already resolved");
                return Ok(0);
            }
            let tree = principalize(&p.ctx, j, &p.divisors, &limits)?;
            report_tree(&tree, cli)?;
            Ok(0)
        }
        Command::Embedded { file } => {
            let p = load(file)?;
            if p.gens.len() != 1 {
                return Err(Error::Precondition(format!(
                    "embedded resolution expects exactly one generator, found {}",
                    p.gens.len()
                )));
            }
            let tree = embedded_resolve(&p.ctx, &p.gens[0], &p.divisors, &limits)?;
            report_tree(&tree, cli)?;
            Ok(0)
        }
        Command::Trick { b_prime, b, n } => {
            let r = hironaka_trick(*b_prime, *b, *n, &limits)?;
            let bound = (*n - 1) * (*b_prime - *b) / *b;
            println!("S_max = {}", r.s_max);
            let status = if r.s_max == bound { "attained" } else { "NOT attained" };
            println!("bound floor((N-1)(b'-b)/b) = {bound}: {status}");
            if cli.trace {
                trace_tree(&r.tree);
            }
            if let Some(path) = &cli.json {
                emit_tree(&r.tree, path)?;
            }
            Ok(if r.s_max == bound { 0 } else { 4 })
        }
        Command::Verify { file } => run_verify(&load(file)?, &limits),
        Command::Selftest => selftest(&limits),
    }
}

fn trace_tree(tree: &ResolutionTree) {
    for node in &tree.nodes {
        if node.centers.is_empty() {
            continue;
        }
        let maxw = node.maxw.as_ref().map(q_text).unwrap_or_else(|| "-".into());
        let t = match &node.value {
            Some(v) => v.components.first().map(|c| c.text()).unwrap_or_default(),
            None => node.invariant_text.clone(),
        };
        let centers = node
            .centers
            .iter()
            .map(|(id, c)| format!("{id}: {}", center_text(c)))
            .collect::<Vec<_>>()
            .join(" | ");
        println!("step {}: maxw={maxw}, t={t}, center={centers}", node.id);
    }
}

fn report_tree(tree: &ResolutionTree, cli: &Cli) -> Result<()> {
    if cli.trace {
        trace_tree(tree);
    }
    let steps = tree.nodes.iter().filter(|n| !n.centers.is_empty()).count();
    let noun = if steps == 1 { "step" } else { "steps" };
    if tree.terminal {
        println!("resolved in {steps} {noun}");
    } else {
        println!("stopped after {steps} {noun} with nonempty singular locus");
    }
    if let Some(path) = &cli.json {
        emit_tree(tree, path)?;
    }
    Ok(())
}

fn print_certificate(c: &Certificate) {
    println!("{}: {}", c.kind, if c.pass { "PASS" } else { "FAIL" });
    for r in &c.report {
        println!("  {r}");
    }
    for w in &c.witnesses {
        println!("  witness: {w}");
    }
}

fn run_verify(p: &ProblemFile, limits: &Limits) -> Result<i32> {
    let j = Ideal::new(&p.ctx, p.gens.clone());
    let object = object_from_ideal(&p.ctx, j.clone(), p.control, &p.divisors)?;
    let mut certs: Vec<Certificate> = Vec::new();
    if object.sing().is_empty() {
        println!("already resolved");
    } else {
        let tree = resolve(object, limits)?;
        let last = tree.nodes.last().expect("nonempty transcript");
        let charts: Vec<_> = last.object.states.iter().map(|s| s.chart.clone()).collect();
        certs.push(check_snc(&charts, &[])?);
        if p.control == 1 {
            certs.push(check_monomial_final(&tree)?);
        }
    }
    certs.push(check_weak_equiv_scaling(&p.ctx, &j, p.control, 2)?);
    certs.push(check_pullback_compat(&p.ctx, &j, p.control)?);
    let mut all = true;
    for c in &certs {
        print_certificate(c);
        all &= c.pass;
    }
    Ok(if all { 0 } else { 4 })
}

fn selftest(limits: &Limits) -> Result<i32> {
    let mut failures = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {}", name, if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let line = VarContext::new(&["x"]);
    let j = Ideal::principal(Poly::parse(&line, "x^5").expect("parses"));
    let tree = resolve(object_from_ideal(&line, j, 2, &[])?, limits)?;
    check("power floor law", tree.terminal && tree.nodes.len() == 3);

    let plane = VarContext::new(&["x", "y"]);
    let cusp = Ideal::principal(Poly::parse(&plane, "x^2 - y^3").expect("parses"));
    let tree = resolve(object_from_ideal(&plane, cusp.clone(), 2, &[])?, limits)?;
    check("cusp resolution terminates", tree.terminal);

    let tree = principalize(&plane, cusp.clone(), &[], limits)?;
    check("cusp principalization is monomial", check_monomial_final(&tree)?.pass);

    let r = hironaka_trick(3, 2, 5, limits)?;
    check("order-drop bound", r.s_max == 2);

    let c = check_pullback_compat(&plane, &cusp, 2)?;
    check("pullback compatibility", c.pass);

    Ok(if failures == 0 { 0 } else { 4 })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::verify::final_exponents;
    use itertools::Itertools;

    fn cusp_problem() -> ProblemFile {
        parse_problem("vars x y\ngens x^2 - y^3\ncontrol 2\ndivisor y minus\n").expect("parses")
    }

    #[test]
    fn problem_files_round_trip_through_print() {
        let p = cusp_problem();
        assert_eq!(p.control, 2);
        assert_eq!(p.divisors, vec![(1, Sign::Minus)]);
        let again = parse_problem(&print_problem(&p)).expect("round trip parses");
        assert_eq!(again, p);

        let q = parse_problem("vars x y z\ngens x^2, y^3 - z, x*y*z\ncontrol 3\n").expect("parses");
        assert_eq!(parse_problem(&print_problem(&q)).expect("round trip"), q);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# cusp fixture\nvars x y  # ambient plane\n\ngens x^2 - y^3\ncontrol 2\n";
        let p = parse_problem(text).expect("parses");
        assert_eq!(p.gens.len(), 1);
        assert_eq!(p.ctx.names(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn grammar_violations_report_line_and_column() {
        let missing = parse_problem("vars x y\ngens x^2 - y^3\n");
        match missing {
            Err(Error::ParseError { line, col, msg }) => {
                assert_eq!((line, col), (3, 1));
                assert!(msg.contains("control"), "{msg}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }

        let undeclared = parse_problem("vars x y\ngens x\ncontrol 1\ndivisor w minus\n");
        match undeclared {
            Err(Error::ParseError { line, col, msg }) => {
                assert_eq!(line, 4);
                assert_eq!(col, 9);
                assert!(msg.contains("undeclared"), "{msg}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }

        let dup = parse_problem("vars x\nvars y\ngens x\ncontrol 1\n");
        assert!(matches!(dup, Err(Error::ParseError { line: 2, .. })));

        let bad_poly = parse_problem("vars x y\ngens x^2 - q^3\ncontrol 2\n");
        match bad_poly {
            Err(Error::ParseError { line, col, msg }) => {
                assert_eq!(line, 2);
                assert_eq!(col, 12);
                assert!(msg.contains("unknown variable"), "{msg}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }

        let zero = parse_problem("vars x\ngens x - x\ncontrol 1\n");
        assert!(matches!(zero, Err(Error::ParseError { line: 2, .. })));
    }

    #[test]
    fn json_transcripts_are_deterministic_and_count_steps() {
        let p = cusp_problem();
        let j = Ideal::new(&p.ctx, p.gens.clone());
        let limits = Limits::default();
        let object = object_from_ideal(&p.ctx, j.clone(), p.control, &p.divisors).expect("object");
        let tree = resolve(object, &limits).expect("resolves");
        let doc = tree_doc_json(&tree);
        let object = object_from_ideal(&p.ctx, j, p.control, &p.divisors).expect("object");
        let again = tree_doc_json(&resolve(object, &limits).expect("resolves"));
        assert_eq!(doc, again, "identical runs must serialize identically");
        assert!(doc.contains("\"terminal\": true"));
        assert!(doc.contains("\"control\": 2"));

        let parsed: serde_json::Value = serde_json::from_str(&doc).expect("valid json");
        let nodes = parsed["nodes"].as_array().expect("node array");
        let steps = nodes.iter().filter(|n| !n["center"].as_object().unwrap().is_empty()).count();
        assert_eq!(nodes.len(), steps + 1, "one terminal node after the step nodes");
        assert_eq!(nodes[0]["parent"], serde_json::Value::Null);
        let root_chart = &nodes[0]["charts"][0];
        assert_eq!(root_chart["id"], "r");
        assert_eq!(root_chart["exceptionals"][0]["sign"], "minus");
    }

    #[test]
    fn terminal_single_node_tree_serializes_with_one_node() {
        let plane = VarContext::new(&["x", "y"]);
        let smooth = Poly::parse(&plane, "x").expect("parses");
        let tree = embedded_resolve(&plane, &smooth, &[], &Limits::default()).expect("runs");
        let parsed: serde_json::Value =
            serde_json::from_str(&tree_doc_json(&tree)).expect("valid json");
        assert_eq!(parsed["terminal"], serde_json::Value::Bool(true));
        assert_eq!(parsed["nodes"].as_array().expect("nodes").len(), 1);
    }

    #[test]
    fn monomial_report_matches_the_final_exponent_table() {
        let plane = VarContext::new(&["x", "y"]);
        let j = Ideal::new(
            &plane,
            vec![Poly::parse(&plane, "x^2").expect("parses"), Poly::parse(&plane, "y^3").expect("parses")],
        );
        let tree = principalize(&plane, j, &[], &Limits::default()).expect("principalizes");
        let cert = check_monomial_final(&tree).expect("certificate");
        assert!(cert.pass);
        let table = final_exponents(&tree).expect("exponents");
        for line in &cert.report {
            let (chart, monomial) = line
                .strip_prefix("chart ")
                .and_then(|r| r.split_once(": "))
                .expect("report line shape");
            let expected = table[chart]
                .iter()
                .filter(|(_, k)| *k > 0)
                .map(|(name, k)| {
                    if is_identifier(name) {
                        format!("{name}^{k}")
                    } else {
                        format!("({name})^{k}")
                    }
                })
                .join("*");
            let expected = if expected.is_empty() { "1".to_string() } else { expected };
            assert_eq!(monomial, expected, "chart {chart}");
        }
    }
}
