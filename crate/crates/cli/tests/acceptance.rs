//! Acceptance suite: one line per criterion, failing at the end if any
//! criterion failed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rlp_core::builder::build;
use rlp_core::layout::{draw, read_angles};
use rlp_core::oracle::{
    compare, has_rep, measure_spirality, oracle_intervals, verify_drawing, verify_orthorep, DEFAULT_CAP,
};
use rlp_core::spq::NodeKind;
use rlp_core::tester::{compute_all_intervals, Outcome, RejectReason};
use rlp_core::{
    all_terms, build_spq_tree, gen_random_spterm, gen_random_spterm_with, parse_spterm, test, GenParams, SpTerm,
};

const MAX_EXHAUSTIVE: usize = 8;
const RANDOM_SMALL: u64 = 300;
const RANDOM_LARGE: u64 = 50;
const LINEARITY_SIZES: [usize; 3] = [10_000, 100_000, 1_000_000];
const LINEARITY_RESIDUAL: f64 = 0.30;
const LINEARITY_BUDGET_SECS: f64 = 5.0;
const TIMING_RUNS: usize = 5;

struct Line {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn corpus() -> Vec<SpTerm> {
    let mut terms = all_terms(MAX_EXHAUSTIVE);
    terms.extend((0..RANDOM_SMALL).map(|s| gen_random_spterm(9 + (s % 6) as usize, s).unwrap()));
    terms
}

fn large_params() -> GenParams {
    GenParams { min_chain: 3, ..GenParams::default() }
}

fn verdict_equivalence(terms: &[SpTerm]) -> Line {
    let mut bad = Vec::new();
    let started = Instant::now();
    for t in terms {
        let v = test(t).unwrap();
        if has_rep(&v.rooted.graph, DEFAULT_CAP).unwrap() != v.accepted() {
            bad.push(t.to_string());
        }
    }
    Line {
        id: 1,
        name: "oracle verdict equivalence",
        pass: bad.is_empty(),
        detail: format!(
            "{}/{} agree in {:.1?}; first mismatches {:?}",
            terms.len() - bad.len(),
            terms.len(),
            started.elapsed(),
            &bad[..bad.len().min(3)]
        ),
    }
}

fn interval_exactness(terms: &[SpTerm]) -> Line {
    let (mut nodes, mut bad) = (0, Vec::new());
    for t in terms {
        let rooted = build_spq_tree(t).unwrap();
        let intervals = compute_all_intervals(&rooted.tree);
        let sets = oracle_intervals(&rooted, DEFAULT_CAP).unwrap();
        nodes += rooted.tree.len() - 2;
        bad.extend(compare(&rooted.tree, &intervals, &sets).iter().map(|m| format!("{t}: {m}")));
    }
    Line {
        id: 2,
        name: "interval exactness",
        pass: bad.is_empty(),
        detail: format!("{nodes} nodes, {} mismatches {:?}", bad.len(), &bad[..bad.len().min(3)]),
    }
}

/// Checks representation, drawing and spiralities; `None` if rejected.
fn construction(t: &SpTerm) -> Option<Result<(), String>> {
    let v = test(t).unwrap();
    if !v.accepted() {
        return None;
    }
    let check = || -> Result<(), String> {
        let c = build(&v).map_err(|e| e.to_string())?;
        let g = c.rep.graph();
        let report = verify_orthorep(&c.rep, &v.rooted.graph);
        if !report.passed() {
            return Err(format!("representation: {report}"));
        }
        let d = draw(&c.rep).map_err(|e| e.to_string())?;
        let report = verify_drawing(&d, g);
        if !report.passed() {
            return Err(format!("drawing: {report}"));
        }
        if read_angles(&d, g).as_deref() != Some(c.rep.all_angles()) {
            return Err("angles read off the drawing differ".into());
        }
        let tree = v.tree();
        match tree
            .postorder()
            .filter(|&id| id != tree.root())
            .find(|&id| measure_spirality(&c.working, tree, id) != c.assignment.sigma(id))
        {
            Some(id) => Err(format!("spirality of node {id} differs")),
            None => Ok(()),
        }
    };
    Some(check())
}

fn construction_validity(terms: &[SpTerm]) -> Line {
    let mut bad = Vec::new();
    let mut accepted = 0;
    for t in terms {
        if let Some(r) = construction(t) {
            accepted += 1;
            if let Err(e) = r {
                bad.push(format!("{t}: {e}"));
            }
        }
    }
    let mut large = 0;
    let mut sizes = (usize::MAX, 0);
    for i in 0..RANDOM_LARGE {
        let edges = (1e3 * 100f64.powf(i as f64 / (RANDOM_LARGE - 1) as f64)).round() as usize;
        let t = gen_random_spterm_with(edges, i, large_params()).unwrap();
        sizes = (sizes.0.min(edges), sizes.1.max(edges));
        match construction(&t) {
            Some(Ok(())) => large += 1,
            Some(Err(e)) => bad.push(format!("{edges} edges seed {i}: {e}")),
            None => bad.push(format!("{edges} edges seed {i}: rejected")),
        }
    }
    Line {
        id: 3,
        name: "construction validity",
        pass: bad.is_empty(),
        detail: format!(
            "{accepted} accepted corpus instances, {large}/{RANDOM_LARGE} large instances ({}..{} edges); failures {:?}",
            sizes.0,
            sizes.1,
            &bad[..bad.len().min(3)]
        ),
    }
}

fn canonical_fixtures() -> Line {
    let mut failures = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    let oracle = |s: &str| has_rep(&build_spq_tree(&parse_spterm(s).unwrap()).unwrap().graph, DEFAULT_CAP).unwrap();

    let tri = test(&parse_spterm("P(Q1,S(Q1,Q1))").unwrap()).unwrap();
    expect(
        matches!(tri.outcome, Outcome::Rejected(r) if r.reason == RejectReason::Root),
        "triangle rejected at the root",
    );
    expect(!oracle("P(Q1,S(Q1,Q1))"), "oracle: triangle");

    let sq = test(&parse_spterm("P(Q2,Q2)").unwrap()).unwrap();
    expect(sq.accepted() && oracle("P(Q2,Q2)"), "square accepted");
    if sq.accepted() {
        let rep = build(&sq).unwrap().rep;
        let d = draw(&rep).unwrap();
        let xs: Vec<i64> = d.coords.iter().map(|c| c[0]).collect();
        let ys: Vec<i64> = d.coords.iter().map(|c| c[1]).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let mut corners: Vec<[i64; 2]> = d.coords.clone();
        corners.sort_unstable();
        expect(
            x0 < x1 && y0 < y1 && corners == [[x0, y0], [x0, y1], [x1, y0], [x1, y1]],
            "square drawn as a rectangle",
        );
        let g = rep.graph();
        let faces = g.faces();
        let internal = faces.ids().filter(|&f| f != faces.external()).flat_map(|f| faces.corners(f).iter().copied());
        let angles = read_angles(&d, g).unwrap();
        expect(
            internal.map(|(v, i)| angles[v.idx()][i]).collect::<Vec<_>>() == [1, 1, 1, 1],
            "four internal right angles",
        );
    }

    for s in ["P(Q2,Q2,Q2)", "P(Q1,Q1,Q1)"] {
        let v = test(&parse_spterm(s).unwrap()).unwrap();
        let tree = v.tree();
        let at_eta = match v.outcome {
            Outcome::Rejected(r) => r.node == tree.eta() && tree.node(r.node).kind == NodeKind::P,
            Outcome::Accepted { .. } => false,
        };
        expect(at_eta && !oracle(s), &format!("{s} rejected at its parallel node"));
    }
    let p3 = test(&parse_spterm("P(Q2,Q2,Q2)").unwrap()).unwrap();
    expect(
        matches!(p3.outcome, Outcome::Rejected(r) if r.reason == RejectReason::P3),
        "P(Q2,Q2,Q2) rejected by the P3 condition",
    );

    Line {
        id: 4,
        name: "canonical fixtures",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "triangle, square, thetas as expected".into()
        } else {
            format!("failed: {failures:?}")
        },
    }
}

/// Least squares fit of `t = a n + b` minimizing relative residuals.
fn relative_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let w = 1.0 / (y * y);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let a = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
    (a, (sy - a * sx) / sw)
}

fn linearity() -> Line {
    let mut points = Vec::new();
    for &n in &LINEARITY_SIZES {
        let t = gen_random_spterm_with(n, 7, large_params()).unwrap();
        let mut times: Vec<f64> = (0..TIMING_RUNS)
            .map(|_| {
                let started = Instant::now();
                let v = test(&t).unwrap();
                assert!(v.accepted());
                started.elapsed().as_secs_f64()
            })
            .collect();
        times.sort_by(f64::total_cmp);
        points.push((t.edge_count() as f64, times[TIMING_RUNS / 2]));
    }
    let (a, b) = relative_fit(&points);
    let worst = points.iter().map(|&(x, y)| ((y - (a * x + b)) / (a * x + b)).abs()).fold(0.0, f64::max);
    let largest = points.last().unwrap().1;
    let timings: Vec<String> = points.iter().map(|(x, y)| format!("{x:.0}:{:.2}ms", y * 1e3)).collect();
    Line {
        id: 5,
        name: "linearity",
        pass: worst <= LINEARITY_RESIDUAL && largest <= LINEARITY_BUDGET_SECS,
        detail: format!(
            "{} a={a:.3e}s/edge b={b:.2e}s max residual {:.1}% (<= {:.0}%)",
            timings.join(" "),
            worst * 100.0,
            LINEARITY_RESIDUAL * 100.0
        ),
    }
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Exit code, stdout, stderr and written files of one run.
type RunRecord = (Option<i32>, Vec<u8>, Vec<u8>, Vec<(String, Vec<u8>)>);

fn run(args: &[String], dir: &Path) -> RunRecord {
    let out = Command::new(env!("CARGO_BIN_EXE_rlp")).args(args).current_dir(dir).output().unwrap();
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    (out.status.code(), out.stdout, out.stderr, files)
}

fn determinism() -> Line {
    let mut fixtures: Vec<PathBuf> = std::fs::read_dir(fixtures_dir()).unwrap().map(|e| e.unwrap().path()).collect();
    fixtures.sort();
    let mut commands: Vec<Vec<String>> = Vec::new();
    for f in &fixtures {
        let f = f.display().to_string();
        let with =
            |extra: &[&str]| [&[f.as_str()][..], extra].concat().iter().map(|s| s.to_string()).collect::<Vec<_>>();
        for (cmd, extra) in [
            ("test", &[][..]),
            ("test", &["--explain"][..]),
            ("intervals", &[][..]),
            ("intervals", &["--tree"][..]),
            ("intervals", &["--json"][..]),
            ("draw", &["-o", "out.svg", "--coords", "coords.json", "--rep", "rep.json"][..]),
            ("oracle", &["--compare"][..]),
        ] {
            commands.push([vec![cmd.to_string()], with(extra)].concat());
        }
    }
    for format in ["spt", "json"] {
        commands.push(
            ["gen", "--edges", "500", "--seed", "11", "--format", format, "-o", "gen.out"].map(String::from).to_vec(),
        );
    }
    let mut differing = Vec::new();
    for args in &commands {
        let runs: Vec<_> = (0..2)
            .map(|_| {
                let dir = tempfile::tempdir().unwrap();
                run(args, dir.path())
            })
            .collect();
        if runs[0] != runs[1] || runs[0].0.is_none_or(|c| c == 2) {
            differing.push(args.join(" "));
        }
    }
    Line {
        id: 6,
        name: "determinism",
        pass: differing.is_empty(),
        detail: format!(
            "{} commands over {} fixtures run twice; differing or failing {:?}",
            commands.len(),
            fixtures.len(),
            differing
        ),
    }
}

#[test]
fn acceptance() {
    let lines = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(|| {
            let terms = corpus();
            vec![
                verdict_equivalence(&terms),
                interval_exactness(&terms),
                construction_validity(&terms),
                canonical_fixtures(),
                linearity(),
                determinism(),
            ]
        })
        .unwrap()
        .join()
        .unwrap();
    for l in &lines {
        println!("{} {} {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.name, l.detail);
    }
    let failed: Vec<u8> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
