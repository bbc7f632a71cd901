//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails on data it could evaluate.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use lrc_core::curvature::{
    bfc_edge, clamps_inactive, frc_edge, jost_liu_clamped_lower, lrc_edge, orc_edge,
    orc_upper_bound, w1_local,
};
use lrc_core::graph::{cheeger_constant, diameter, parse_gml_subset, spectral_gap, write_edge_list};
use lrc_core::metrics::DEFAULT_MAX_SWEEPS;
use lrc_core::sbm::run_grid_replicates;
use lrc_core::{
    ami, ari, curvature_all, find_threshold, fit_gmm2, lpa_detect, overlapping_f1, preprocess_lrc,
    sample_sbm, Cover, CurvatureKind, GmmConfig, Graph, GridSpec, Partition, SbmSpec,
    ThresholdMode,
};
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Outcome of one criterion: `Ok(detail)` passes, `Err(Missing)` means an
/// input dataset was not available.
enum Failure {
    Check(String),
    Missing(String),
}

type Outcome = Result<String, Failure>;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(msg.into()))
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), Failure> {
    check(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn single_worker<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn formula_table() -> Outcome {
    let start = Instant::now();
    let (k2, k3, k4, p3, c4) = (complete(2), complete(3), complete(4), path(3), cycle(4));
    let (s3, s5) = (star(3), star(5));
    // frc, lrc, bfc, orc; every edge of each graph is equivalent.
    let cases: [(&str, &Graph, [f64; 4]); 7] = [
        ("K2", &k2, [2.0, 2.0, 2.0, 0.0]),
        ("K3", &k3, [3.0, 1.5, 1.5, 0.5]),
        ("K4", &k4, [4.0, 4.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0]),
        ("P3", &p3, [1.0, 1.0, 1.0, 0.0]),
        ("C4", &c4, [0.0, 0.0, 1.0, 0.0]),
        ("K1,3", &s3, [0.0, 2.0 / 3.0, 2.0 / 3.0, 0.0]),
        ("K1,5", &s5, [-2.0, 0.4, 0.4, 0.0]),
    ];
    let mut count = 0;
    for (name, g, [frc, lrc, bfc, orc]) in cases {
        for &(u, v) in g.canonical_edges() {
            let (u, v) = (u as usize, v as usize);
            let f = frc_edge(g, u, v).unwrap();
            check(f == frc && f.fract() == 0.0, format!("{name} frc {f}"))?;
            let l = lrc_edge(g, u, v).unwrap();
            check(close(l, lrc), format!("{name} lrc {l}"))?;
            let b = bfc_edge(g, u, v).unwrap();
            check(close(b, bfc), format!("{name} bfc {b}"))?;
            let o = orc_edge(g, u, v).unwrap();
            check(close(o, orc), format!("{name} orc {o}"))?;
            count += 1;
        }
    }
    // FRC is integral on arbitrary graphs too.
    let mut r = rng(1);
    for _ in 0..50 {
        let g = erdos_renyi(30, 0.2, &mut r);
        if g.edge_count() == 0 {
            continue;
        }
        let frc = curvature_all(&g, CurvatureKind::Frc).unwrap();
        check(frc.values.iter().all(|x| x.fract() == 0.0), "non-integral frc")?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{count} edges"))
}

fn transport_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let (mut graphs, mut edges) = (0, 0);
    while graphs < 200 {
        let n = r.random_range(2..=12);
        let g = bounded_degree(n, 4, r.random_range(0.2..0.8), &mut r);
        if g.edge_count() == 0 {
            continue;
        }
        let dist = all_pairs(&g);
        for &(u, v) in g.canonical_edges() {
            let (u, v) = (u as usize, v as usize);
            let (cost, scale) = w1_enumerated(&g, &dist, u, v);
            let exact = cost as f64 / scale as f64;
            let got = w1_local(&g, u, v).unwrap();
            check(close(got, exact), format!("edge {u}-{v}: {got} vs {exact}"))?;
            edges += 1;
        }
        graphs += 1;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{graphs} graphs, {edges} edges"))
}

fn bound_suite() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let (mut graphs, mut edges, mut inactive) = (0, 0, 0);
    while graphs < 500 {
        let n = r.random_range(20..=200);
        let g = match graphs % 4 {
            3 => {
                let k = r.random_range(2..=4);
                let p_in = r.random_range(0.1..0.5);
                let p_out = r.random_range(0.005..0.05);
                sample_sbm(&SbmSpec::planted(n, k, p_in, p_out, r.random()).unwrap()).unwrap().0
            }
            i => erdos_renyi(n, [0.05, 0.1, 0.3][i], &mut r),
        };
        if g.edge_count() == 0 {
            continue;
        }
        let lrc = curvature_all(&g, CurvatureKind::Lrc).unwrap().values;
        let bfc = curvature_all(&g, CurvatureKind::Bfc).unwrap().values;
        let orc = curvature_all(&g, CurvatureKind::Orc).unwrap().values;
        for (i, &(u, v)) in g.canonical_edges().iter().enumerate() {
            let (u, v) = (u as usize, v as usize);
            let (l, b, o) = (lrc[i], bfc[i], orc[i]);
            check(l <= b, format!("lrc {l} > bfc {b}"))?;
            check((-2.0..=2.0).contains(&l) && (-2.0..=2.0).contains(&b), format!("range {l} {b}"))?;
            let lower = jost_liu_clamped_lower(&g, u, v).unwrap();
            check(lower <= o, format!("lower {lower} > orc {o}"))?;
            let upper = orc_upper_bound(&g, u, v).unwrap();
            check(o <= upper + 1e-9, format!("orc {o} > upper {upper}"))?;
            if clamps_inactive(&g, u, v).unwrap() {
                check(l <= o, format!("lrc {l} > orc {o} with inactive clamps"))?;
                inactive += 1;
            }
            edges += 1;
        }
        graphs += 1;
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{graphs} graphs, {edges} edges, {inactive} clamp-inactive"))
}

fn positive_curvature_consequences() -> Outcome {
    let start = Instant::now();
    let cases =
        [("K2", complete(2)), ("K3", complete(3)), ("K4", complete(4)), ("K5", complete(5)), ("P3", path(3)), ("K1,3", star(3)), ("K1,5", star(5))];
    let mut parts = Vec::new();
    for (name, g) in cases {
        let alpha = curvature_all(&g, CurvatureKind::Lrc).unwrap().values.into_iter().fold(f64::INFINITY, f64::min);
        check(alpha > 0.0, format!("{name}: alpha {alpha}"))?;
        let diam = diameter(&g).unwrap() as f64;
        let gap = spectral_gap(&g).unwrap();
        let h = cheeger_constant(&g).unwrap();
        check(diam <= 2.0 / alpha, format!("{name}: diam {diam} > 2/{alpha}"))?;
        check(gap >= alpha, format!("{name}: gap {gap} < {alpha}"))?;
        check(h >= alpha / 2.0, format!("{name}: cheeger {h} < {alpha}/2"))?;
        parts.push(format!("{name} a={alpha:.3}"));
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(parts.join(", "))
}

fn sbm_scores() -> Outcome {
    let start = Instant::now();
    let mean = |outcomes: &[lrc_core::sbm::ReplicateOutcome], idx: usize| {
        outcomes.iter().map(|o| o.scores[0].1[idx]).sum::<f64>() / outcomes.len() as f64
    };
    let spec = |cells, replicates, curvatures| GridSpec { cells, n: 100, k: 2, replicates, curvatures, base_seed: 20_240_601 };
    let easy = run_grid_replicates(&spec(vec![(0.8, 0.05)], 100, vec![CurvatureKind::Lrc])).unwrap();
    let (aer, aop, pps) = (mean(&easy, 0), mean(&easy, 1), mean(&easy, 2));
    check(pps >= 0.9, format!("pps {pps}"))?;
    check(aer <= 0.05, format!("aer {aer}"))?;
    check(aop >= 1.8, format!("aop {aop}"))?;
    let hard = run_grid_replicates(&spec(vec![(0.3, 0.25)], 100, vec![CurvatureKind::Lrc])).unwrap();
    let hard_aop = mean(&hard, 1);
    check(hard_aop <= 1.0, format!("aop at (0.3, 0.25) {hard_aop}"))?;
    let grid = spec(lrc_core::sbm::default_grid(), 20, CurvatureKind::ALL.to_vec());
    let mut checked = 0;
    for o in run_grid_replicates(&grid).unwrap() {
        for (kind, [aer, _, pps]) in &o.scores {
            check((*pps == 1.0) == (*aer == 0.0), format!("{kind} at ({}, {}) r{}: pps {pps} aer {aer}", o.p1, o.p2, o.replicate))?;
            checked += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!("pps {pps:.3} aer {aer:.4} aop {aop:.3}; hard aop {hard_aop:.3}; {checked} identity checks"))
}

fn football_path() -> PathBuf {
    std::env::var_os("LRC_FOOTBALL_GML").map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/football.gml")
    })
}

fn football() -> Outcome {
    let path = football_path();
    let Ok(file) = std::fs::File::open(&path) else {
        return Err(Failure::Missing(format!("dataset not found at {} (set LRC_FOOTBALL_GML)", path.display())));
    };
    let start = Instant::now();
    let (g, truth) = parse_gml_subset(std::io::BufReader::new(file)).map_err(|e| Failure::Check(e.to_string()))?;
    check(g.node_count() == 115 && g.edge_count() == 613, format!("n {} m {}", g.node_count(), g.edge_count()))?;
    check(truth.community_count() == 12, format!("{} conferences", truth.community_count()))?;
    let (pruned, _, t, _) = preprocess_lrc(&g, &GmmConfig::default()).map_err(|e| Failure::Check(e.to_string()))?;
    let score = |g: &Graph| {
        let runs: Vec<Partition> = (0..50).map(|s| lpa_detect(g, s, DEFAULT_MAX_SWEEPS).partition).collect();
        let a = median(runs.iter().map(|p| ari(&truth, p).unwrap()).collect());
        let m = median(runs.iter().map(|p| ami(&truth, p).unwrap()).collect());
        (a, m)
    };
    let (ari_raw, ami_raw) = score(&g);
    let (ari_pre, ami_pre) = score(&pruned);
    let detail = format!(
        "{:?}, ari {ari_raw:.3} -> {ari_pre:.3}, ami {ami_raw:.3} -> {ami_pre:.3}",
        t.mode
    );
    check((0.67..=0.83).contains(&ari_raw), format!("raw ari; {detail}"))?;
    check((0.81..=0.95).contains(&ari_pre), format!("preprocessed ari; {detail}"))?;
    check(ami_pre >= ami_raw + 0.03, format!("ami gain; {detail}"))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(detail)
}

fn valley_threshold() -> Outcome {
    let start = Instant::now();
    let (a, b) = (Normal::new(-1.0, 0.1).unwrap(), Normal::new(1.0, 0.1).unwrap());
    let mut betas = Vec::new();
    let mut iterations = 0;
    for seed in 0..10 {
        let mut r = rng(7_000 + seed);
        let xs: Vec<f64> =
            (0..2000).map(|_| if r.random::<bool>() { a.sample(&mut r) } else { b.sample(&mut r) }).collect();
        let fit = fit_gmm2(&xs, &GmmConfig::default()).map_err(|e| Failure::Check(e.to_string()))?;
        for w in fit.trace.windows(2) {
            check(w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0), format!("seed {seed}: likelihood fell {w:?}"))?;
        }
        iterations += fit.trace.len();
        let t = find_threshold(&fit);
        check(t.mode == ThresholdMode::Valley, format!("seed {seed}: {:?}", t.mode))?;
        let beta = t.beta.unwrap();
        check((-0.1..=0.1).contains(&beta), format!("seed {seed}: beta {beta}"))?;
        betas.push(beta);
    }
    let worst = betas.iter().fold(0.0f64, |m, b| m.max(b.abs()));
    Ok(format!("max |beta| {worst:.4}, {iterations} EM steps checked, {:.2?}", start.elapsed()))
}

fn agreement_metrics() -> Outcome {
    let p = |l: &[u64]| Partition::new(l.to_vec());
    let v = ari(&p(&[0, 0, 1, 1]), &p(&[0, 1, 0, 1])).unwrap();
    check((v + 0.5).abs() <= 1e-12, format!("hand ari {v}"))?;
    let mut r = rng(9);
    let mut pairs = 0;
    while pairs < 100 {
        let n = r.random_range(2..=8);
        let a = random_labels(n, r.random_range(1..=4), &mut r);
        let b = random_labels(n, r.random_range(1..=4), &mut r);
        let oracle = ari_by_pairs(a.labels(), b.labels());
        if !oracle.is_finite() {
            continue;
        }
        let got = ari(&a, &b).unwrap();
        check((got - oracle).abs() <= 1e-12, format!("{a:?} {b:?}: {got} vs {oracle}"))?;
        pairs += 1;
    }
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut r = rng(90_000 + seed);
        let a = random_labels(10_000, 10, &mut r);
        let b = random_labels(10_000, 10, &mut r);
        let v = ami(&a, &b).unwrap();
        worst = worst.max(v.abs());
    }
    check(worst <= 0.02, format!("null ami {worst}"))?;
    let cover = |s: &[&[u64]]| Cover::new(s.iter().map(|c| c.to_vec()).collect()).unwrap();
    let x = cover(&[&[1, 2, 3], &[4, 5]]);
    check(overlapping_f1(&x, &x).unwrap() == 1.0, "f1 self")?;
    check(overlapping_f1(&x, &cover(&[&[6, 7]])).unwrap() == 0.0, "f1 disjoint")?;
    let f = overlapping_f1(&cover(&[&[1, 2, 3]]), &cover(&[&[1, 2]])).unwrap();
    check(close(f, 0.8), format!("f1 subset {f}"))?;
    let f = overlapping_f1(&x, &cover(&[&[1, 2, 3]])).unwrap();
    check(close(f, 0.75), format!("f1 partial {f}"))?;
    Ok(format!("{pairs} oracle pairs, max null |ami| {worst:.4}"))
}

fn scalability() -> Outcome {
    let sbm = |n: usize, seed| {
        // Ten blocks, expected degree 16 within and 4 across.
        let block = n / 10;
        let spec = SbmSpec::planted(n, 10, 16.0 / (block - 1) as f64, 4.0 / (n - block) as f64, seed).unwrap();
        sample_sbm(&spec).unwrap().0
    };
    let time = |g: &Graph, kind| {
        single_worker(|| {
            (0..3)
                .map(|_| {
                    let t = Instant::now();
                    curvature_all(g, kind).unwrap();
                    t.elapsed()
                })
                .min()
                .unwrap()
        })
    };
    let small = sbm(20_000, 1);
    let large = sbm(40_000, 2);
    let (t1, t2) = (time(&small, CurvatureKind::Lrc), time(&large, CurvatureKind::Lrc));
    let ratio = t2.as_secs_f64() / t1.as_secs_f64();
    let t = Instant::now();
    single_worker(|| curvature_all(&small, CurvatureKind::Orc).unwrap());
    let orc = t.elapsed();
    let orc_ratio = orc.as_secs_f64() / t1.as_secs_f64();
    let detail = format!(
        "m {} lrc {t1:.2?}; m {} lrc {t2:.2?} ({ratio:.2}x); orc {orc:.2?} ({orc_ratio:.1}x lrc)",
        small.edge_count(),
        large.edge_count()
    );
    check(t1 < Duration::from_secs(5), format!("lrc too slow; {detail}"))?;
    check(ratio <= 3.0, format!("doubling ratio; {detail}"))?;
    check(orc_ratio <= 50.0 && orc < Duration::from_secs(600), format!("orc; {detail}"))?;
    Ok(detail)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let d = dir.path();
    let (g, truth) = sample_sbm(&SbmSpec::planted(120, 3, 0.4, 0.03, 5).unwrap()).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf).unwrap();
    std::fs::write(d.join("g.txt"), &buf).unwrap();
    let mut buf = Vec::new();
    lrc_core::graph::write_label_file(&g, &truth, &mut buf).unwrap();
    std::fs::write(d.join("truth.txt"), &buf).unwrap();
    std::fs::write(d.join("cover.txt"), "0 1 2 3\n4 5 6\n7 8 9 10 11\n").unwrap();
    std::fs::write(d.join("cover2.txt"), "0 1 2\n4 5 6 7\n9 10 11\n").unwrap();
    let p = |name: &str| d.join(name).to_str().unwrap().to_owned();
    let out = |tag: &str, name: &str| p(&format!("{tag}-{name}"));
    // Each command lists its argument vector; `{out}` names a file output.
    let commands: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        ("curvature-lrc", vec!["curvature".into(), "-i".into(), p("g.txt"), "--measure".into(), "lrc".into()], vec![]),
        ("curvature-frc", vec!["curvature".into(), "-i".into(), p("g.txt"), "--measure".into(), "frc".into()], vec![]),
        ("curvature-bfc", vec!["curvature".into(), "-i".into(), p("g.txt"), "--measure".into(), "bfc".into()], vec![]),
        ("curvature-orc", vec!["curvature".into(), "-i".into(), p("g.txt"), "--measure".into(), "orc".into()], vec![]),
        ("preprocess", vec!["preprocess".into(), "-i".into(), p("g.txt"), "-o".into(), "{out}pruned.txt".into(), "--curvature-csv".into(), "{out}c.csv".into()], vec!["pruned.txt", "c.csv"]),
        ("simulate", vec!["simulate".into(), "--seed".into(), "11".into(), "--replicates".into(), "3".into(), "--cells".into(), "0.8:0.05,0.5:0.1,0.3:0.25".into()], vec![]),
        ("detect-lpa", vec!["detect".into(), "-i".into(), p("g.txt"), "--seed".into(), "4".into()], vec![]),
        ("detect-components", vec!["detect".into(), "-i".into(), p("g.txt"), "--algo".into(), "components".into()], vec![]),
        ("eval-ari", vec!["eval".into(), "--metric".into(), "ari".into(), "--truth".into(), p("truth.txt"), "--pred".into(), p("truth.txt")], vec![]),
        ("eval-ami", vec!["eval".into(), "--metric".into(), "ami".into(), "--truth".into(), p("truth.txt"), "--pred".into(), p("truth.txt")], vec![]),
        ("eval-f1", vec!["eval".into(), "--metric".into(), "f1".into(), "--truth".into(), p("cover.txt"), "--pred".into(), p("cover2.txt")], vec![]),
        ("pipeline", vec!["pipeline".into(), "-i".into(), p("g.txt"), "--truth".into(), p("truth.txt"), "--seed".into(), "3".into(), "--runs".into(), "5".into()], vec![]),
    ];
    let run = |tag: &str, workers: Option<&str>, args: &[String], files: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_lrc"));
        if let Some(w) = workers {
            cmd.args(["--workers", w]);
        }
        cmd.args(args.iter().map(|a| match a.strip_prefix("{out}") {
            Some(name) => out(tag, name),
            None => a.clone(),
        }));
        let o = cmd.output().unwrap();
        let mut bytes = vec![o.stdout, o.stderr, o.status.code().unwrap_or(-1).to_string().into_bytes()];
        bytes.extend(files.iter().map(|f| std::fs::read(out(tag, f)).unwrap_or_default()));
        (o.status.success(), bytes)
    };
    for (name, args, files) in &commands {
        let (ok, first) = run("a", None, args, files);
        check(ok, format!("{name} failed: {}", String::from_utf8_lossy(&first[1])))?;
        let (_, second) = run("b", None, args, files);
        check(first == second, format!("{name}: repeated runs differ"))?;
        let (_, one) = run("c", Some("1"), args, files);
        let (_, eight) = run("d", Some("8"), args, files);
        check(one == eight, format!("{name}: --workers 1 and 8 differ"))?;
        check(one == first, format!("{name}: --workers 1 differs from default"))?;
    }
    Ok(format!("{} commands", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("formula unit table", formula_table),
        ("transport oracle", transport_oracle),
        ("bound suite", bound_suite),
        ("positive curvature consequences", positive_curvature_consequences),
        ("block model scores", sbm_scores),
        ("football communities", football),
        ("valley threshold", valley_threshold),
        ("scalability", scalability),
        ("agreement metrics", agreement_metrics),
        ("CLI determinism", cli_determinism),
    ];
    let only: Option<usize> = std::env::var("LRC_ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let strict = std::env::var_os("LRC_ACCEPTANCE_STRICT").is_some();
    let mut failed = false;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
                Err(Failure::Check(format!("panic: {}", msg.unwrap_or_default())))
            });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS [{secs:7.2}s] {name}: {detail}"),
            Err(Failure::Check(why)) => {
                failed = true;
                println!("criterion {id:>2} FAIL [{secs:7.2}s] {name}: {why}");
            }
            Err(Failure::Missing(why)) => {
                failed |= strict;
                println!("criterion {id:>2} FAIL [{secs:7.2}s] {name}: {why}");
            }
        }
    }
    if failed {
        std::process::exit(1);
    }
}
