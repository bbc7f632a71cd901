mod args;
mod error;

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use lrc_core::curvature::write_curvature_csv;
use lrc_core::graph::{
    parse_community_file, parse_edge_list, parse_gml_subset, parse_label_file, write_edge_list,
    write_label_file,
};
use lrc_core::metrics::{ami, ari, lpa_detect, overlapping_f1};
use lrc_core::sbm::{default_grid, run_grid, write_grid_csv, GridSpec};
use lrc_core::{curvature_all, preprocess, Cover, Graph, Partition, PreprocessConfig, Threshold};
use serde_json::json;

use args::{Algo, Cli, Command, GraphInput, InputFormat, Metric};
use error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

fn is_gml(path: &Path, format: InputFormat) -> bool {
    match format {
        InputFormat::Gml => true,
        InputFormat::Edgelist => false,
        InputFormat::Auto => path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("gml")),
    }
}

/// The graph, plus node labels when the file carries them.
fn read_graph(input: &GraphInput) -> Result<(Graph, Option<Partition>)> {
    let reader = open(&input.input)?;
    if is_gml(&input.input, input.format) {
        let (g, labels) =
            parse_gml_subset(reader).map_err(|e| CliError::in_file(&input.input, e))?;
        Ok((g, Some(labels)))
    } else {
        let g = parse_edge_list(reader).map_err(|e| CliError::in_file(&input.input, e))?;
        Ok((g, None))
    }
}

struct Output {
    path: Option<PathBuf>,
    inner: BufWriter<Box<dyn Write>>,
}

impl Output {
    fn create(path: Option<&Path>) -> Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).map_err(|e| CliError::io(p, e))?),
            None => Box::new(std::io::stdout()),
        };
        Ok(Output {
            path: path.map(Path::to_path_buf),
            inner: BufWriter::new(inner),
        })
    }

    fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(|e| match &self.path {
            Some(p) => CliError::io(p, e),
            None => CliError::from(e),
        })
    }
}

impl Write for Output {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.inner.write(buf)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

fn require_seed(seed: Option<u64>, command: &str) -> Result<u64> {
    seed.ok_or_else(|| CliError::Usage(format!("{command} needs an explicit --seed")))
}

fn parse_threshold(s: &str) -> Result<Threshold> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Threshold::Auto);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Threshold::Fixed(x)),
        _ => Err(CliError::Usage(format!(
            "--threshold expects auto or a number, got {s:?}"
        ))),
    }
}

fn parse_cells(cells: &[String]) -> Result<Vec<(f64, f64)>> {
    if cells.is_empty() {
        return Ok(default_grid());
    }
    cells
        .iter()
        .map(|c| {
            let parsed = c
                .split_once(':')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            parsed.ok_or_else(|| CliError::Usage(format!("grid cell {c:?} is not p1:p2")))
        })
        .collect()
}

fn detect(g: &Graph, algo: Algo, seed: u64, max_sweeps: usize) -> Partition {
    match algo {
        Algo::Lpa => lpa_detect(g, seed, max_sweeps).partition,
        Algo::Components => g.connected_components(),
    }
}

/// `(node, label)` pairs from a label file or a GML file.
fn read_labels(path: &Path) -> Result<Vec<(u64, u64)>> {
    if is_gml(path, InputFormat::Auto) {
        let (g, labels) = parse_gml_subset(open(path)?).map_err(|e| CliError::in_file(path, e))?;
        Ok((0..g.node_count())
            .map(|i| (g.external_id(i), labels.label(i)))
            .collect())
    } else {
        parse_label_file(open(path)?).map_err(|e| CliError::in_file(path, e))
    }
}

fn read_cover(path: &Path) -> Result<Cover> {
    if is_gml(path, InputFormat::Auto) {
        let (g, labels) = parse_gml_subset(open(path)?).map_err(|e| CliError::in_file(path, e))?;
        let sets = labels
            .to_cover()
            .into_iter()
            .map(|c| c.into_iter().map(|i| g.external_id(i)).collect())
            .collect();
        Ok(Cover::new(sets)?)
    } else {
        parse_community_file(open(path)?).map_err(|e| CliError::in_file(path, e))
    }
}

fn aligned(mut a: Vec<(u64, u64)>, mut b: Vec<(u64, u64)>) -> Result<(Partition, Partition)> {
    a.sort_unstable();
    b.sort_unstable();
    if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| x.0 != y.0) {
        return Err(lrc_core::Error::NodeSetMismatch(format!(
            "{} labeled nodes vs {}",
            a.len(),
            b.len()
        ))
        .into());
    }
    Ok((
        Partition::new(a.into_iter().map(|x| x.1).collect()),
        Partition::new(b.into_iter().map(|x| x.1).collect()),
    ))
}

/// Truth labels in the graph's internal node order.
fn truth_for(g: &Graph, pairs: Vec<(u64, u64)>) -> Result<Partition> {
    let map: HashMap<u64, u64> = pairs.into_iter().collect();
    let mut labels = Vec::with_capacity(g.node_count());
    for i in 0..g.node_count() {
        let id = g.external_id(i);
        match map.get(&id) {
            Some(&l) => labels.push(l),
            None => {
                return Err(lrc_core::Error::NodeSetMismatch(format!(
                    "node {id} has no ground-truth label"
                ))
                .into())
            }
        }
    }
    if map.len() != g.node_count() {
        return Err(lrc_core::Error::NodeSetMismatch(format!(
            "{} labels for {} nodes",
            map.len(),
            g.node_count()
        ))
        .into());
    }
    Ok(Partition::new(labels))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Curvature(a) => {
            let (g, _) = read_graph(&a.graph)?;
            let c = curvature_all(&g, a.measure)?;
            let mut out = Output::create(a.output.as_deref())?;
            write_curvature_csv(&g, &c, &mut out)?;
            out.finish()
        }
        Command::Preprocess(a) => {
            let (g, _) = read_graph(&a.graph)?;
            let config = PreprocessConfig {
                curvature: a.curvature,
                threshold: parse_threshold(&a.threshold)?,
                ..PreprocessConfig::default()
            };
            let outcome = preprocess(&g, &config)?;
            let mut edges = Output::create(Some(&a.output))?;
            write_edge_list(&outcome.graph, &mut edges)?;
            edges.finish()?;
            if let Some(path) = &a.curvature_csv {
                let mut csv = Output::create(Some(path))?;
                write_curvature_csv(&g, &outcome.curvatures, &mut csv)?;
                csv.finish()?;
            }
            let fit = outcome.fit.as_ref();
            let report = json!({
                "edges_before": outcome.report.edges_before,
                "edges_after": outcome.report.edges_after,
                "beta": outcome.threshold.beta,
                "mu1": fit.map(|f| f.mu1),
                "mu2": fit.map(|f| f.mu2),
                "sigma1": fit.map(|f| f.sigma1),
                "sigma2": fit.map(|f| f.sigma2),
                "pi1": fit.map(|f| f.pi1),
                "mode": outcome.threshold.mode.name(),
            });
            let mut out = Output::create(a.report.as_deref())?;
            writeln!(out, "{report}")?;
            out.finish()
        }
        Command::Simulate(a) => {
            let seed = require_seed(a.seed, "simulate")?;
            let spec = GridSpec {
                cells: parse_cells(&a.cells)?,
                n: a.n,
                k: a.k,
                replicates: a.replicates,
                curvatures: a.curvatures,
                base_seed: seed,
            };
            let records = run_grid(&spec)?;
            let mut out = Output::create(a.output.as_deref())?;
            write_grid_csv(&records, &mut out)?;
            out.finish()
        }
        Command::Detect(a) => {
            let seed = match a.algo {
                Algo::Lpa => require_seed(a.seed, "detect --algo lpa")?,
                Algo::Components => a.seed.unwrap_or(0),
            };
            let (g, _) = read_graph(&a.graph)?;
            let labels = detect(&g, a.algo, seed, a.max_sweeps);
            let mut out = Output::create(a.output.as_deref())?;
            write_label_file(&g, &labels, &mut out)?;
            out.finish()
        }
        Command::Eval(a) => {
            let value = match a.metric {
                Metric::F1 => overlapping_f1(&read_cover(&a.truth)?, &read_cover(&a.pred)?)?,
                Metric::Ari | Metric::Ami => {
                    let (t, p) = aligned(read_labels(&a.truth)?, read_labels(&a.pred)?)?;
                    if a.metric == Metric::Ari {
                        ari(&t, &p)?
                    } else {
                        ami(&t, &p)?
                    }
                }
            };
            println!("{value:.6}");
            Ok(())
        }
        Command::Pipeline(a) => {
            let seed = match a.algo {
                Algo::Lpa => require_seed(a.seed, "pipeline --algo lpa")?,
                Algo::Components => a.seed.unwrap_or(0),
            };
            if a.runs == 0 {
                return Err(CliError::Usage("--runs must be positive".into()));
            }
            let (g, embedded) = read_graph(&a.graph)?;
            let truth = match (&a.truth, embedded) {
                (Some(path), _) => truth_for(&g, read_labels(path)?)?,
                (None, Some(labels)) => labels,
                (None, None) => {
                    return Err(CliError::Usage(
                        "pipeline needs --truth for edge-list input".into(),
                    ))
                }
            };
            let config = PreprocessConfig {
                curvature: a.curvature,
                ..PreprocessConfig::default()
            };
            let outcome = preprocess(&g, &config)?;
            let mut out = Output::create(a.output.as_deref())?;
            let mut cols: [Vec<f64>; 4] = Default::default();
            for r in 0..a.runs {
                let s = seed.wrapping_add(r as u64);
                let before = detect(&g, a.algo, s, lrc_core::metrics::DEFAULT_MAX_SWEEPS);
                let after = detect(&outcome.graph, a.algo, s, lrc_core::metrics::DEFAULT_MAX_SWEEPS);
                let row = [
                    ari(&truth, &before)?,
                    ari(&truth, &after)?,
                    ami(&truth, &before)?,
                    ami(&truth, &after)?,
                ];
                for (c, v) in cols.iter_mut().zip(row) {
                    c.push(v);
                }
                let line = json!({
                    "run": r,
                    "seed": s,
                    "ari_before": row[0],
                    "ari_after": row[1],
                    "ami_before": row[2],
                    "ami_after": row[3],
                });
                writeln!(out, "{line}")?;
            }
            let [ab, aa, mb, ma] = cols;
            let summary = json!({
                "runs": a.runs,
                "edges_before": outcome.report.edges_before,
                "edges_after": outcome.report.edges_after,
                "beta": outcome.threshold.beta,
                "mode": outcome.threshold.mode.name(),
                "median_ari_before": median(ab),
                "median_ari_after": median(aa),
                "median_ami_before": median(mb),
                "median_ami_after": median(ma),
            });
            writeln!(out, "{summary}")?;
            out.finish()
        }
    }
}

fn fail(e: &CliError) -> ! {
    eprintln!("error: {e}");
    let line = json!({"error": e.kind(), "exit": e.exit_code(), "message": e.to_string()});
    eprintln!("{line}");
    std::process::exit(e.exit_code());
}

fn main() {
    let argv = match args::with_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => fail(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => {
            let _ = e.print();
            fail(&CliError::Usage(e.kind().to_string()));
        }
    };
    if let Some(n) = cli.workers {
        if n == 0 {
            fail(&CliError::Usage("--workers must be positive".into()));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            fail(&CliError::Usage(e.to_string()));
        }
    }
    if let Err(e) = run(cli) {
        fail(&e);
    }
}
