//! One test per acceptance criterion. Each prints a single
//! `PASS criterion N: ...` or `FAIL criterion N: ...` line before asserting.
//! Run with `--nocapture` to see them.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use clap::Parser;
use serde_json::Value;

use maxsat2::conjset::ConjSet;
use maxsat2::formula::{CnfFormula, DnfFormula, Literal, Variable};
use maxsat2::oracle::{instance_seed, oracle_dnf_max, oracle_maxsat, run_diff, DiffParams, DiffReport, SizeRange};
use maxsat2::pstar::{build_p_star_graph, enumerate_paths};
use maxsat2::reduction::reduce;
use maxsat2::search::{
    build_recursive_graph, compute_rs_all, compute_upbound, solve_dnf, Algorithm, Outcome, SearchOptions,
};
use maxsat2::sequencing::{build_sequence, build_sequences, compute_frequencies, GlobalOrdering, TieBreak};
use maxsat2::triegraph::{build_trie, build_graph, TrieLikeGraph};
use maxsat2_cli::bench::run_bench;
use maxsat2_cli::{run, write_shortfalls, Cli, Command};

/// Wall-clock limits. Criterion 1 and 10 are timed in the test profile.
const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const EXHAUSTIVE_LIMIT: Duration = Duration::from_secs(300);
const BENCH_LIMIT: Duration = Duration::from_secs(600);
const RANDOM_INSTANCES: usize = 10_000;
const RANDOM_CONJUNCTIONS: usize = 200;

fn report(n: &str, ok: bool, detail: impl AsRef<str>) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {n}: {}", detail.as_ref());
}

fn run_cli(args: &[&str]) -> (u8, String) {
    let cli = Cli::try_parse_from(std::iter::once("maxsat2").chain(args.iter().copied())).expect("valid arguments");
    let mut out = Vec::new();
    let code = run(&cli, &mut out).expect("command succeeds");
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn example_dnf() -> DnfFormula {
    DnfFormula::from_dimacs_conjunctions(6, &[&[1, 4], &[2, -4], &[2, 5], &[-3, -5], &[3, 6], &[-1, -6]])
}

fn example_order() -> TieBreak {
    TieBreak::Explicit([2, 3, 1, 4, 5, 6].map(Variable::new).to_vec())
}

fn example_graph() -> TrieLikeGraph {
    build_graph(&example_dnf(), &example_order()).unwrap().1
}

fn names(g: &TrieLikeGraph, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&i| g.name(i)).collect()
}

#[test]
fn criterion_01_worked_example_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("example_cnf.cnf");
    std::fs::write(&path, "p cnf 3 3\n1 2 0\n2 -3 0\n3 -1 0\n").unwrap();
    let p = path.to_str().unwrap();

    let start = Instant::now();
    let (code, out) = run_cli(&["solve", p, "--json"]);
    let elapsed = start.elapsed();
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    let (_, reduced) = run_cli(&["reduce", p]);

    let expected_dnf = "p dnf 6 6\n1 4 0\n2 -4 0\n2 5 0\n-3 -5 0\n3 6 0\n-1 -6 0\n";
    let ok = code == 0
        && v["best_size"] == 3
        && v["assignment"] == serde_json::json!([1, 1, 1])
        && reduced == expected_dnf
        && reduce(&CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[2, -3], &[3, -1]])).unwrap().0 == example_dnf()
        && elapsed < EXAMPLE_LIMIT;
    report(
        "1",
        ok,
        format!(
            "best_size={} assignment={} reduced DNF matches={} in {:.1} ms (limit {} ms)",
            v["best_size"],
            v["assignment"],
            reduced == expected_dnf,
            elapsed.as_secs_f64() * 1e3,
            EXAMPLE_LIMIT.as_millis()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_sequence_and_frequency_tables() {
    let d = example_dnf();
    let o = GlobalOrdering::from_order([2, 3, 1, 4, 5, 6].map(Variable::new).to_vec()).unwrap();
    let rows: Vec<String> = d
        .conjunctions
        .iter()
        .map(|c| build_sequence(c, &o, d.num_vars).unwrap().to_string())
        .collect();
    let expected = [
        "#.(c2,*).(c3,*).c1.c4.(c5,*).(c6,*).$",
        "#.c2.(c3,*).(c1,*).(c5,*).(c6,*).$",
        "#.c2.(c3,*).(c1,*).(c4,*).c5.(c6,*).$",
        "#.(c2,*).(c1,*).(c4,*).(c6,*).$",
        "#.(c2,*).c3.(c1,*).(c4,*).(c5,*).c6.$",
        "#.(c2,*).(c3,*).(c4,*).(c5,*).$",
    ];
    let t = compute_frequencies(&d);
    let ok = rows == expected && t.count == [5, 6, 5, 5, 5, 5] && t.total == 6;
    report(
        "2",
        ok,
        format!("6/6 sequence rows match={} frequencies={:?}/{}", rows == expected, t.count, t.total),
    );
    assert!(ok, "{rows:#?}");
}

#[test]
fn criterion_03_trie_numbering_and_span() {
    let d = example_dnf();
    let o = GlobalOrdering::from_order([2, 3, 1, 4, 5, 6].map(Variable::new).to_vec()).unwrap();
    let seqs = build_sequences(&d, &o);
    let mut g = build_trie(&seqs, d.num_vars);
    g.assign_pre_post();
    let v2 = (g.node(2).pre, g.node(2).post);
    let v9 = (g.node(9).pre, g.node(9).post);
    let pgraphs: Vec<_> = seqs.iter().map(build_p_star_graph).collect();
    g.overlay_spans(&pgraphs).unwrap();
    let span = g.span(0, 2).map(|s| s.conj_ids.clone());
    let ok = v2 == (3, 12) && v9 == (10, 6) && span == Some(ConjSet::from([1, 5, 6]));
    report(
        "3",
        ok,
        format!("v2={v2:?} v9={v9:?} span(v0,v2)={}", span.map_or("none".into(), |s| s.to_string())),
    );
    assert!(ok);
}

#[test]
fn criterion_04_closed_graph_paths() {
    let mut failures = Vec::new();
    let mut total_paths = 0usize;
    for k in 0..RANDOM_CONJUNCTIONS {
        let h = instance_seed(4, k);
        let m = 1 + (h % 10) as u32;
        let lits: Vec<Literal> = (0..m)
            .filter_map(|i| match (h >> (8 + 2 * i)) % 3 {
                0 => None,
                s => Some(Literal::new(Variable::new(i + 1), s == 2)),
            })
            .collect();
        let d = DnfFormula::new(m, vec![lits]);
        let c = &d.conjunctions[0];
        let s = build_sequence(c, &GlobalOrdering::identity(m), m).unwrap();
        let paths = enumerate_paths(&build_p_star_graph(&s), 1 << 11).unwrap();
        let distinct: BTreeSet<Vec<bool>> = paths.iter().map(|a| a.values().to_vec()).collect();
        total_paths += paths.len();
        if paths.len() != 1 << s.num_optional()
            || distinct.len() != paths.len()
            || !paths.iter().all(|a| c.is_satisfied(a))
        {
            failures.push(k);
        }
    }
    let ok = failures.is_empty();
    report(
        "4",
        ok,
        format!(
            "{RANDOM_CONJUNCTIONS} conjunctions, {total_paths} paths, {} failures",
            failures.len()
        ),
    );
    assert!(ok, "{failures:?}");
}

/// Every clause over `m` variables: distinct-variable 2-clauses and units.
fn clause_shapes(m: u32) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in 1..=m as i64 {
        out.push(vec![a]);
        out.push(vec![-a]);
        for b in a + 1..=m as i64 {
            for (x, y) in [(a, b), (a, -b), (-a, b), (-a, -b)] {
                out.push(vec![x, y]);
            }
        }
    }
    out
}

#[test]
fn criterion_05_reduction_exhaustive() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for m in 1..=3u32 {
        let shapes = clause_shapes(m);
        for n in 1..=3usize {
            let mut idx = vec![0usize; n];
            loop {
                let clauses: Vec<&[i64]> = idx.iter().map(|&i| shapes[i].as_slice()).collect();
                let f = CnfFormula::from_dimacs_clauses(m, &clauses);
                let (d, _) = reduce(&f).unwrap();
                let lhs = oracle_maxsat(&f, 24).unwrap().0;
                let rhs = oracle_dnf_max(&d, 24).unwrap().0;
                if lhs != rhs {
                    failures.push(f.to_dimacs());
                }
                checked += 1;
                let mut pos = 0;
                while pos < n {
                    idx[pos] += 1;
                    if idx[pos] < shapes.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < EXHAUSTIVE_LIMIT;
    report(
        "5",
        ok,
        format!(
            "{checked} instances, {} mismatches, {:.1} s (limit {} s)",
            failures.len(),
            elapsed.as_secs_f64(),
            EXHAUSTIVE_LIMIT.as_secs()
        ),
    );
    assert!(ok, "{failures:?}");
}

fn random_params() -> DiffParams {
    DiffParams {
        vars: SizeRange { min: 2, max: 8 },
        clauses: SizeRange { min: 1, max: 10 },
        unit_fraction: 0.1,
        seed: 2024,
        count: RANDOM_INSTANCES,
        options: SearchOptions {
            algorithm: Algorithm::Improved,
            check_candidates: true,
            ..SearchOptions::default()
        },
    }
}

/// One shared run: criteria 6 and 7 read the same report.
fn shared_diff() -> &'static Result<DiffReport, String> {
    static REPORT: OnceLock<Result<DiffReport, String>> = OnceLock::new();
    REPORT.get_or_init(|| run_diff(&random_params()).map_err(|e| e.to_string()))
}

#[test]
fn criterion_06_soundness_gate() {
    let r = shared_diff();
    let ok = matches!(r, Ok(rep) if rep.instances_run >= RANDOM_INSTANCES && rep.soundness_violations.is_empty());
    let detail = match r {
        Ok(rep) => format!(
            "{} instances (m 2..8, n 1..10), every candidate re-checked, {} soundness violations",
            rep.instances_run,
            rep.soundness_violations.len()
        ),
        Err(e) => format!("harness stopped: {e}"),
    };
    report("6", ok, detail);
    assert!(ok);
}

#[test]
fn criterion_07_exactness_measurement() {
    let rep = match shared_diff() {
        Ok(rep) => rep,
        Err(e) => {
            report("7", false, format!("harness stopped: {e}"));
            panic!("{e}");
        }
    };
    let dir = tempfile::tempdir().unwrap();
    let written = write_shortfalls(dir.path(), rep).unwrap();
    let mut replay_ok = written.len() == rep.shortfalls.len();
    if !written.is_empty() {
        let mut args: Vec<String> = vec!["diff".into(), "--replay".into()];
        args.extend(written.iter().map(|p| p.display().to_string()));
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, out) = run_cli(&refs);
        let records: Vec<Value> = serde_json::from_str(out.trim()).unwrap();
        replay_ok &= records.len() == written.len();
        for (rec, s) in records.iter().zip(&rep.shortfalls) {
            replay_ok &= rec["solver_size"] == s.minimized_solver_size
                && rec["oracle_size"] == s.minimized_oracle_size
                && s.minimized_solver_size < s.minimized_oracle_size;
        }
    }
    let bounded = rep.shortfalls.iter().all(|s| s.solver_size < s.oracle_size);
    let ok = rep.instances_run >= RANDOM_INSTANCES && bounded && replay_ok;
    report(
        "7",
        ok,
        format!(
            "{} instances, agreement {}/{} = {:.4}, {} shortfalls shrunk and replayed, {} truncated",
            rep.instances_run,
            rep.agreements,
            rep.instances_run,
            rep.agreement_rate,
            rep.shortfalls.len(),
            rep.truncated_runs
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_reachable_sets_and_boundaries() {
    let g = example_graph();
    let v2 = g.find_by_name("v2").unwrap();
    let v3 = g.find_by_name("v3").unwrap();
    let ub3 = names(&g, &compute_upbound(&compute_rs_all(&g, v3), &g));
    let rs2 = compute_rs_all(&g, v2);
    let ub2 = names(&g, &compute_upbound(&rs2, &g));
    let c5 = rs2
        .iter()
        .find(|s| s.anchor == v2 && s.label.to_string() == "c5")
        .map(|s| names(&g, &s.members));
    let ok = ub3 == ["v5", "v8"] && ub2 == ["v4", "v8", "v11"] && c5.as_deref() == Some(&["v5", "v8", "v12"].map(String::from)[..]);
    report("8", ok, format!("upBound(v3)={ub3:?} upBound(v2)={ub2:?} RS_v2[c5]={c5:?}"));
    assert!(ok);
}

#[test]
fn criterion_09a_v3_recursion_leaf_set() {
    let g = example_graph();
    let v3 = g.find_by_name("v3").unwrap();
    let ub = compute_upbound(&compute_rs_all(&g, v3), &g);
    let sub = build_recursive_graph(&g, v3, &ub);
    let leaves: Vec<ConjSet> = sub
        .graph
        .leaves()
        .map(|l| sub.graph.node(l).leaf_conj_ids.clone())
        .filter(|s| !s.is_empty())
        .collect();
    let ok = leaves == [ConjSet::from([2, 5])];
    let shown: Vec<String> = leaves.iter().map(ToString::to_string).collect();
    report("9a", ok, format!("v3 recursion leaf sets {shown:?}, expected [{{2,5}}]"));
    assert!(ok, "leaf sets {shown:?}");
}

#[test]
fn criterion_09b_v2_recursion_found_set() {
    let opts = SearchOptions {
        tie_break: example_order(),
        prune: false,
        trace: true,
        ..SearchOptions::default()
    };
    let r = solve_dnf(&example_dnf(), &opts).unwrap();
    let event = r
        .trace
        .iter()
        .find(|e| e.node == "v2" && e.depth == 0 && e.outcome == Outcome::Recursed);
    let ok = event.is_some_and(|e| e.found.contains(&vec![3, 6]));
    report(
        "9b",
        ok,
        format!("v2 recursion found {:?} (expects [3, 6])", event.map(|e| &e.found)),
    );
    assert!(ok);
}

#[test]
fn criterion_10_scaling_report() {
    let cli = Cli::try_parse_from(["maxsat2", "bench"]).unwrap();
    let Command::Bench(args) = cli.command else {
        unreachable!()
    };
    let start = Instant::now();
    let rep = run_bench(&args).unwrap();
    let elapsed = start.elapsed();
    let points = args.clauses.len() * args.vars.len();
    let ok = rep.rows.len() == points && elapsed < BENCH_LIMIT;
    let fit = rep
        .fit
        .as_ref()
        .map_or("no fit".into(), |f| format!("fit n^{:.2} m^{:.2}", f.n_exponent, f.m_exponent));
    report(
        "10",
        ok,
        format!(
            "{} grid points in {:.1} s (limit {} s), {fit}, {} truncated runs",
            rep.rows.len(),
            elapsed.as_secs_f64(),
            BENCH_LIMIT.as_secs(),
            rep.rows.iter().map(|r| r.truncated).sum::<usize>()
        ),
    );
    assert!(ok);
}
