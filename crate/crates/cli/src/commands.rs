use std::io::Read;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use dtq_core::andor::{play, AndOrTree, PaperDelayer, PaperProver};
use dtq_core::bits::parse_bits;
use dtq_core::dtree::{GenKind, GenParams};
use dtq_core::error::MAX_ENUM_N;
use dtq_core::rank::{self, MAX_FUNC_N};
use dtq_core::weights::{self, Bounds, ProgramValue};
use dtq_core::{dualadv, formula, spanprog, DTree, TruthTable, WeightMap};

use crate::Outcome;

pub fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

pub fn load_tree(path: &str) -> Result<DTree> {
    let text = read_input(path)?;
    DTree::parse(&text).with_context(|| format!("tree {path}"))
}

fn load_weights(path: &str) -> Result<WeightMap> {
    let text = read_input(path)?;
    WeightMap::parse(&text).with_context(|| format!("weights {path}"))
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
}

fn weights_value(w: &WeightMap) -> Value {
    serde_json::from_str(&w.to_json()).expect("weight documents are valid JSON")
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

pub fn gen(kind: &str, n: Option<usize>, depth: Option<usize>, seed: u64, budget: Option<usize>) -> Result<Outcome> {
    let kind: GenKind = kind.parse()?;
    let t = DTree::generate(kind, &GenParams { n, depth, seed, budget })?;
    println!("{}", t.to_json());
    Ok(Outcome::Pass)
}

pub fn rank(path: &str, exhaustive: bool, json: bool) -> Result<Outcome> {
    let t = load_tree(path)?;
    let r = rank::tree_rank(&t);
    let coloring = rank::optimal_coloring(&t);
    let cost = rank::coloring_cost(&t, &coloring)?;
    let guess = if exhaustive {
        Some(rank::exhaustive_guessing_complexity(&t)?)
    } else {
        None
    };
    if json {
        let black: Vec<Value> = coloring
            .black_edges()
            .iter()
            .map(|e| json!({"parent": e.parent.0, "bit": e.bit}))
            .collect();
        print_json(&json!({
            "rank": r,
            "coloring_cost": cost,
            "black_edges": black,
            "guessing_complexity": guess,
        }));
    } else {
        println!("rank            {r}");
        println!("coloring cost   {cost}");
        if let Some(g) = guess {
            println!("guessing        {g}");
        }
    }
    Ok(verdict(cost == r && guess.map_or(true, |g| g == r)))
}

pub fn opt(path: &str, json: bool) -> Result<Outcome> {
    let t = load_tree(path)?;
    let v = weights::opt_value(&t);
    if json {
        print_json(&json!({ "opt": v }));
    } else {
        println!("{v}");
    }
    Ok(Outcome::Pass)
}

pub fn weights(path: &str, appendix_b: bool) -> Result<Outcome> {
    let t = load_tree(path)?;
    let w = if appendix_b {
        weights::appendix_b_weights(&t)
    } else {
        weights::canonical_weights(&t)
    };
    println!("{}", w.to_json());
    Ok(Outcome::Pass)
}

pub fn oracle(path: &str, seed: u64, tol: f64, json: bool) -> Result<Outcome> {
    let t = load_tree(path)?;
    let o = weights::brute_force_opt(&t, seed, tol)?;
    let rec = weights::opt_value(&t);
    let at_box: Vec<String> = o.at_box.iter().map(|e| e.to_string()).collect();
    if json {
        print_json(&json!({
            "objective": o.objective,
            "recurrence": rec,
            "restart": o.restart,
            "at_box": at_box,
            "weights": weights_value(&o.weights),
        }));
    } else {
        println!("oracle      {}", o.objective);
        println!("recurrence  {rec}");
        println!("restart     {}", o.restart);
        if !at_box.is_empty() {
            println!("at box edge {}", at_box.join(" "));
        }
    }
    Ok(Outcome::Pass)
}

pub fn verify_span(tree: &str, weights: &str, input: Option<&str>, json: bool) -> Result<Outcome> {
    let t = load_tree(tree)?;
    let w = load_weights(weights)?;
    let inst = spanprog::build(&t, &w)?;
    let rep = match input {
        Some(bits) => {
            let x = parse_bits(bits)?;
            spanprog::verify_one(&inst, &t, &x)?
        }
        None => spanprog::verify_all(&inst, &t)?,
    };
    if json {
        print_json(&rep);
    } else {
        let r = &rep.residuals;
        println!("inputs checked        {}", rep.inputs_checked);
        println!("unavailable columns   {:.3e}", r.unavailable_zero);
        println!("reaches target        {:.3e}", r.reaches_target);
        println!("orthogonal available  {:.3e}", r.orthogonal_available);
        println!("other targets         {:.3e}", r.other_targets);
        if let (false, Some(wc)) = (rep.pass, &rep.worst) {
            println!("FAIL: {} on x = {} (residual {:.3e})", wc.condition, wc.input, wc.residual);
        } else {
            println!("pass");
        }
    }
    Ok(verdict(rep.pass))
}

pub fn verify_dual(tree: &str, weights: &str, max_n: usize, json: bool) -> Result<Outcome> {
    let t = load_tree(tree)?;
    let w = load_weights(weights)?;
    let sol = dualadv::build(&t, &w)?;
    let rep = dualadv::check_feasibility(&sol, max_n)?;
    if json {
        print_json(&rep);
    } else {
        println!("pairs checked  {}", rep.pairs_checked);
        println!("max residual   {:.3e}", rep.max_residual);
        println!("objective      {}", rep.objective);
        match (&rep.worst_pair, rep.pass) {
            (Some((x, y)), false) => println!("FAIL: constraint broken on x = {x}, y = {y}"),
            _ => println!("pass"),
        }
    }
    Ok(verdict(rep.pass))
}

#[derive(Serialize)]
struct WeightingReport {
    scheme: &'static str,
    program: ProgramValue,
    /// Norm-based witness sizes; absent when n is too large to enumerate.
    witness: Option<spanprog::WitnessSizes>,
    span_pass: Option<bool>,
    dual_objective: Option<f64>,
    dual_pass: Option<bool>,
}

#[derive(Serialize)]
struct Report {
    n: usize,
    size: usize,
    depth: usize,
    rank: u32,
    opt: f64,
    oracle: Option<f64>,
    bounds: Bounds,
    bounds_hold: bool,
    weightings: Vec<WeightingReport>,
    pass: bool,
}

pub fn report(path: &str, oracle: Option<(u64, f64)>, json: bool) -> Result<Outcome> {
    let t = load_tree(path)?;
    let opt = weights::opt_value(&t);
    let bounds = weights::bounds(&t);
    let bounds_hold = opt <= bounds.rank_depth + 1e-9 && opt <= bounds.size + 1e-9;
    let oracle = match oracle {
        Some((seed, tol)) => Some(weights::brute_force_opt(&t, seed, tol)?.objective),
        None => None,
    };
    let mut weightings = Vec::new();
    let schemes = [
        ("unit", WeightMap::unit(&t)),
        ("canonical", weights::canonical_weights(&t)),
        ("appendix-b", weights::appendix_b_weights(&t)),
    ];
    for (scheme, w) in schemes {
        let program = weights::evaluate(&t, &w)?;
        let (witness, span_pass) = if t.n() <= MAX_ENUM_N {
            let inst = spanprog::build(&t, &w)?;
            let sizes = spanprog::witness_sizes(&inst, &t)?;
            (Some(sizes), Some(spanprog::verify_all(&inst, &t)?.pass))
        } else {
            (None, None)
        };
        let (dual_objective, dual_pass) = if t.n() <= MAX_ENUM_N {
            let sol = dualadv::build(&t, &w)?;
            let feasible = if t.n() <= dualadv::DEFAULT_MAX_PAIR_N {
                Some(dualadv::check_feasibility(&sol, dualadv::DEFAULT_MAX_PAIR_N)?.pass)
            } else {
                None
            };
            (Some(dualadv::objective(&sol)), feasible)
        } else {
            (None, None)
        };
        weightings.push(WeightingReport {
            scheme,
            program,
            witness,
            span_pass,
            dual_objective,
            dual_pass,
        });
    }
    let canonical_tight = {
        let c = &weightings[1];
        let close = |v: f64| (v - opt).abs() <= 1e-9 * opt.max(1.0);
        close(c.program.objective) && c.witness.map_or(true, |w| close(w.size))
    };
    let pass = bounds_hold
        && canonical_tight
        && weightings
            .iter()
            .all(|w| w.span_pass != Some(false) && w.dual_pass != Some(false));
    let rep = Report {
        n: t.n(),
        size: t.size(),
        depth: t.depth(),
        rank: rank::tree_rank(&t),
        opt,
        oracle,
        bounds,
        bounds_hold,
        weightings,
        pass,
    };
    if json {
        print_json(&rep);
    } else {
        print_report(&rep);
    }
    Ok(verdict(pass))
}

fn check(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "skipped",
    }
}

fn print_report(r: &Report) {
    println!("n {}  size {}  depth {}", r.n, r.size, r.depth);
    println!("rank                {}", r.rank);
    println!("OPT                 {}", r.opt);
    if let Some(o) = r.oracle {
        println!("OPT (oracle)        {o}");
    }
    println!("2 sqrt(rank depth)  {}", r.bounds.rank_depth);
    println!("sqrt(2 size)        {}", r.bounds.size);
    println!();
    println!("{:<11} {:>12} {:>12} {:>12} {:>12}  {:<8} {:<8}", "weights", "alpha", "beta", "wsize", "dual", "span", "dual");
    for w in &r.weightings {
        let ws = w.witness.map_or("-".to_string(), |s| format!("{:.6}", s.size));
        let dual = w.dual_objective.map_or("-".to_string(), |d| format!("{d:.6}"));
        println!(
            "{:<11} {:>12.6} {:>12.6} {:>12} {:>12}  {:<8} {:<8}",
            w.scheme,
            w.program.alpha,
            w.program.beta,
            ws,
            dual,
            check(w.span_pass),
            check(w.dual_pass)
        );
    }
    println!();
    println!("{}", if r.pass { "all checks pass" } else { "FAIL" });
}

pub fn andor_measures(depth: usize, json: bool) -> Result<Outcome> {
    let t = AndOrTree::complete(depth)?;
    let m = t.measures();
    if json {
        print_json(&json!({ "tree": t.to_string(), "measures": m }));
    } else {
        println!("{:<16} {:<6} {:>4} {:>4}  marked", "path", "node", "c", "d");
        for nm in &m.nodes {
            let path: Vec<String> = nm.path.iter().map(|k| k.to_string()).collect();
            let path = if path.is_empty() { "root".into() } else { path.join(".") };
            println!("{path:<16} {:<6} {:>4} {:>4}  {}", nm.label, nm.c, nm.d, if nm.marked { "*" } else { "" });
        }
        println!("P = {}  S = {}", m.p, m.s);
    }
    Ok(Outcome::Pass)
}

pub fn andor_rank(depth: usize, json: bool) -> Result<Outcome> {
    let t = AndOrTree::complete(depth)?;
    let n = t.n();
    let m = t.measures();
    let score = play(&t, &mut PaperProver, &mut PaperDelayer)?.final_score;
    let (func, game) = if n <= MAX_FUNC_N {
        let f = t.to_truth_table()?;
        (Some(rank::func_rank(&f)?), Some(rank::game_value(&f)?))
    } else {
        (None, None)
    };
    let formula = (depth % 2 == 0).then(|| (n as u32).div_ceil(3));
    if json {
        print_json(&json!({
            "n": n,
            "p": m.p,
            "s": m.s,
            "paper_game_score": score,
            "func_rank": func,
            "game_value": game,
            "n_plus_2_over_3": formula,
        }));
    } else {
        println!("n                 {n}");
        println!("P, S              {}, {}", m.p, m.s);
        println!("paper game score  {score}");
        if let (Some(f), Some(g)) = (func, game) {
            println!("function rank     {f}");
            println!("game value        {g}");
        }
        if let Some(v) = formula {
            println!("(n + 2) / 3       {v}");
        }
    }
    let consistent = score == m.p
        && formula.map_or(true, |v| v == score)
        && func.map_or(true, |f| f == score)
        && game.map_or(true, |g| g == score);
    Ok(verdict(consistent))
}

pub fn func_rank(n: usize, table: &str, json: bool) -> Result<Outcome> {
    let f = TruthTable::from_hex(n, table)?;
    let r = rank::func_rank(&f)?;
    let g = rank::game_value(&f)?;
    if json {
        print_json(&json!({ "n": n, "table": f.to_hex(), "rank": r, "game_value": g }));
    } else {
        println!("rank        {r}");
        println!("game value  {g}");
    }
    Ok(verdict(r == g))
}

pub fn formula(path: &str, check: bool, json: bool) -> Result<Outcome> {
    let t = load_tree(path)?;
    let f = formula::to_formula(&t)?;
    let size = formula::formula_size(&f);
    let bound = 5 * t.size();
    let rep = if check { Some(formula::check(&t, &f)?) } else { None };
    if json {
        print_json(&json!({
            "size": size,
            "bound": bound,
            "formula": (!check).then(|| f.to_string()),
            "check": rep,
        }));
    } else {
        if !check {
            println!("{f}");
        }
        println!("size        {size}");
        println!("5 * DTSize  {bound}");
        if let Some(r) = &rep {
            match &r.mismatch {
                None => println!("equivalent on all {} inputs", r.inputs_checked),
                Some(x) => println!("FAIL: differs on x = {x}"),
            }
        }
    }
    Ok(verdict(rep.map_or(size <= bound, |r| r.pass)))
}
