use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use qpuf_core::security::uniqueness_experiment;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::resolve;
use crate::error::{required, CliResult};
use crate::output::Emitter;

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessArgs {
    /// Qubit counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<Vec<usize>>,
    /// Layer counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<Vec<usize>>,
    /// Instance pairs per (n, k).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// CSV path; the JSON report goes next to it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threads: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Row {
    run_index: usize,
    n_qubits: usize,
    n_blocks: usize,
    diamond_distance: f64,
}

pub fn run(flags: UniquenessArgs) -> CliResult<()> {
    let started = Instant::now();
    let (a, echo) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let ns = required(a.n, "n")?;
    let ks = required(a.k, "k")?;
    let runs = required(a.runs, "runs")?;
    let out = required(a.out, "out")?;
    let seed = a.seed.unwrap_or(0);

    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &n in &ns {
        for &k in &ks {
            let rep = uniqueness_experiment(n, k, runs, seed)?;
            rows.extend(rep.distances.iter().enumerate().map(|(i, &d)| Row {
                run_index: i,
                n_qubits: n,
                n_blocks: k,
                diamond_distance: d,
            }));
            println!("n={n} k={k} min={} mean={} stddev={}", rep.min, rep.mean, rep.stddev);
            summary.push(json!({ "n_qubits": n, "n_blocks": k, "runs": runs, "min": rep.min, "mean": rep.mean, "stddev": rep.stddev }));
        }
    }
    let emitter = Emitter {
        command: "uniqueness",
        master_seed: seed,
        config: &echo,
        started,
    };
    emitter.emit(&out, &rows, json!({ "metric": "diamond_distance", "groups": summary }))?;
    Ok(())
}
