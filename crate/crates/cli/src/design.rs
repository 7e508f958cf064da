use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use qpuf_core::design::{arc_statistics, design_error, frame_potential, Ensemble, QgenExactMoments, Sampler};
use qpuf_core::seed::child_seed;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::resolve;
use crate::error::{required, CliError, CliResult};
use crate::output::Emitter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Qgen,
    Haar,
}

impl SamplerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SamplerKind::Qgen => "qgen",
            SamplerKind::Haar => "haar",
        }
    }
}

/// `qgen` needs `n` and `k`; `haar` takes `d`, or `2^n` when only `n` is set.
pub fn build_sampler(kind: SamplerKind, n: Option<usize>, d: Option<usize>, k: Option<usize>) -> CliResult<Sampler> {
    match kind {
        SamplerKind::Qgen => Ok(Sampler::Qgen {
            n: required(n, "n")?,
            k: required(k, "k")?,
        }),
        SamplerKind::Haar => match (d, n) {
            (Some(d), _) => Ok(Sampler::Haar { d }),
            (None, Some(n)) if n < usize::BITS as usize => Ok(Sampler::Haar { d: 1 << n }),
            (None, Some(n)) => Err(CliError::Dimension(format!("2^{n} overflows"))),
            (None, None) => Err(CliError::Usage("haar sampler needs --d or --n".into())),
        },
    }
}

pub(crate) fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Subcommand)]
pub enum DesignCommand {
    /// Moment-operator distance to Haar (two proxies).
    Error(ErrorArgs),
    /// Monte Carlo frame potential E|Tr(U^dag V)|^{2t}.
    FramePotential(FramePotentialArgs),
    /// Eigenvalue counts in a fixed arc.
    ArcStats(ArcArgs),
}

macro_rules! sampler_args {
    ($(#[$meta:meta])* pub struct $name:ident { $($(#[$fmeta:meta])* pub $field:ident: $ty:ty,)* }) => {
        $(#[$meta])*
        #[derive(Debug, Args, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            #[arg(long, value_enum)]
            #[serde(skip_serializing_if = "Option::is_none", default)]
            pub sampler: Option<SamplerKind>,
            /// Qubits; the dimension is 2^n.
            #[arg(long)]
            #[serde(skip_serializing_if = "Option::is_none", default)]
            pub n: Option<usize>,
            /// Dimension of a Haar sampler.
            #[arg(long)]
            #[serde(skip_serializing_if = "Option::is_none", default)]
            pub d: Option<usize>,
            /// Layers of a qgen sampler.
            #[arg(long)]
            #[serde(skip_serializing_if = "Option::is_none", default)]
            pub k: Option<usize>,
            $($(#[$fmeta])* pub $field: $ty,)*
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
    };
}

sampler_args! {
    pub struct ErrorArgs {
        /// Moment order (1 or 2 for exact Haar references).
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub t: Option<usize>,
        /// Draws per Monte Carlo ensemble.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub budget: Option<usize>,
        /// Independent ensembles, ensemble j seeded by child_seed(seed, j).
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub ensembles: Option<usize>,
        /// qgen only: integrate the gate angles exactly instead of sampling,
        /// reporting every depth 1..=k.
        #[arg(long)]
        #[serde(skip_serializing_if = "is_false", default)]
        pub exact: bool,
    }
}

sampler_args! {
    pub struct FramePotentialArgs {
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub t: Option<usize>,
        /// Independent pairs (U, V).
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub pairs: Option<usize>,
    }
}

sampler_args! {
    pub struct ArcArgs {
        /// Arc length in radians, starting at angle 0.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub arc: Option<f64>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub samples: Option<usize>,
    }
}

#[derive(Debug, Serialize)]
struct ErrorRow {
    ensemble_index: usize,
    sampler: &'static str,
    source: &'static str,
    d: usize,
    n_blocks: Option<usize>,
    t: usize,
    budget: usize,
    frobenius_moment_error: f64,
    choi_trace_distance: f64,
}

fn proxy_notes() -> Value {
    json!({
        "frobenius_moment_error": "Frobenius norm of M_t(ensemble) - M_t(Haar); a proxy, not a diamond norm",
        "choi_trace_distance": "trace norm of the difference of the normalized Choi states, in [0, 2]; a lower bound on the diamond distance",
    })
}

pub fn run(cmd: DesignCommand) -> CliResult<()> {
    match cmd {
        DesignCommand::Error(a) => run_error(a),
        DesignCommand::FramePotential(a) => run_frame_potential(a),
        DesignCommand::ArcStats(a) => run_arc(a),
    }
}

fn run_error(flags: ErrorArgs) -> CliResult<()> {
    let started = Instant::now();
    let (a, echo) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let out = required(a.out, "out")?;
    let seed = a.seed.unwrap_or(0);
    let t = a.t.unwrap_or(2);
    let kind = a.sampler.unwrap_or(SamplerKind::Qgen);
    let sampler = build_sampler(kind, a.n, a.d, a.k)?;
    let d = sampler.dim();

    let rows: Vec<ErrorRow> = if a.exact {
        let Sampler::Qgen { n, k } = sampler else {
            return Err(CliError::Usage("--exact applies to the qgen sampler only".into()));
        };
        let mut exact = QgenExactMoments::new(n, t)?;
        let mut rows = Vec::with_capacity(k);
        for layer in 1..=k {
            exact.step();
            let e = exact.design_error()?;
            rows.push(ErrorRow {
                ensemble_index: 0,
                sampler: "qgen",
                source: "exact",
                d,
                n_blocks: Some(layer),
                t,
                budget: 0,
                frobenius_moment_error: e.frobenius,
                choi_trace_distance: e.probe_trace,
            });
        }
        rows
    } else {
        let budget = a.budget.unwrap_or(2000);
        let ensembles = a.ensembles.unwrap_or(1);
        let n_blocks = match sampler {
            Sampler::Qgen { k, .. } => Some(k),
            _ => None,
        };
        (0..ensembles)
            .map(|j| {
                let e = Ensemble::generative(sampler.clone(), budget, child_seed(seed, j as u64))?;
                let err = design_error(&e, t)?;
                Ok(ErrorRow {
                    ensemble_index: j,
                    sampler: kind.as_str(),
                    source: "monte-carlo",
                    d,
                    n_blocks,
                    t,
                    budget,
                    frobenius_moment_error: err.frobenius,
                    choi_trace_distance: err.probe_trace,
                })
            })
            .collect::<CliResult<_>>()?
    };
    let mean = |f: fn(&ErrorRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len().max(1) as f64;
    let summary = json!({
        "proxies": proxy_notes(),
        "mean_frobenius_moment_error": mean(|r| r.frobenius_moment_error),
        "mean_choi_trace_distance": mean(|r| r.choi_trace_distance),
    });
    for r in &rows {
        println!(
            "k={} ensemble={} frobenius_moment_error={} choi_trace_distance={}",
            r.n_blocks.map_or("-".into(), |k| k.to_string()),
            r.ensemble_index,
            r.frobenius_moment_error,
            r.choi_trace_distance
        );
    }
    Emitter {
        command: "design error",
        master_seed: seed,
        config: &echo,
        started,
    }
    .emit(&out, &rows, summary)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct FramePotentialRow {
    sampler: &'static str,
    d: usize,
    n_blocks: Option<usize>,
    t: usize,
    pairs: usize,
    frame_potential: f64,
    std_error: f64,
    haar_value: Option<f64>,
}

fn factorial(t: usize) -> f64 {
    (1..=t).map(|i| i as f64).product()
}

fn run_frame_potential(flags: FramePotentialArgs) -> CliResult<()> {
    let started = Instant::now();
    let (a, echo) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let out = required(a.out, "out")?;
    let seed = a.seed.unwrap_or(0);
    let t = a.t.unwrap_or(2);
    let pairs = a.pairs.unwrap_or(1000);
    let kind = a.sampler.unwrap_or(SamplerKind::Qgen);
    let sampler = build_sampler(kind, a.n, a.d, a.k)?;
    let d = sampler.dim();
    let n_blocks = match sampler {
        Sampler::Qgen { k, .. } => Some(k),
        _ => None,
    };
    let fp = frame_potential(&Ensemble::generative(sampler, 2 * pairs, seed)?, t, pairs)?;
    let row = FramePotentialRow {
        sampler: kind.as_str(),
        d,
        n_blocks,
        t,
        pairs,
        frame_potential: fp.value,
        std_error: fp.std_error,
        haar_value: (d >= t).then(|| factorial(t)),
    };
    println!("frame_potential={} std_error={}", fp.value, fp.std_error);
    let summary = json!({ "frame_potential": fp.value, "std_error": fp.std_error, "haar_value": row.haar_value });
    Emitter {
        command: "design frame-potential",
        master_seed: seed,
        config: &echo,
        started,
    }
    .emit(&out, &[row], summary)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ArcRow {
    sampler: &'static str,
    d: usize,
    n_blocks: Option<usize>,
    arc_length: f64,
    sample_count: usize,
    mean_count: f64,
    var_count: f64,
    predicted_mean: f64,
    predicted_var: f64,
}

fn run_arc(flags: ArcArgs) -> CliResult<()> {
    let started = Instant::now();
    let (a, echo) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let out = required(a.out, "out")?;
    let seed = a.seed.unwrap_or(0);
    let samples = a.samples.unwrap_or(200);
    let kind = a.sampler.unwrap_or(SamplerKind::Haar);
    let sampler = build_sampler(kind, a.n, a.d, a.k)?;
    let n_blocks = match sampler {
        Sampler::Qgen { k, .. } => Some(k),
        _ => None,
    };
    let rep = arc_statistics(
        &Ensemble::generative(sampler, samples, seed)?,
        a.arc.unwrap_or(PI),
        samples,
    )?;
    let row = ArcRow {
        sampler: kind.as_str(),
        d: rep.d,
        n_blocks,
        arc_length: rep.arc_length,
        sample_count: rep.sample_count,
        mean_count: rep.mean_count,
        var_count: rep.var_count,
        predicted_mean: rep.predicted_mean,
        predicted_var: rep.predicted_var,
    };
    println!(
        "mean_count={} (predicted {}) var_count={} (predicted {})",
        rep.mean_count, rep.predicted_mean, rep.var_count, rep.predicted_var
    );
    let summary = serde_json::to_value(&rep).map_err(|e| CliError::Parse(e.to_string()))?;
    Emitter {
        command: "design arc-stats",
        master_seed: seed,
        config: &echo,
        started,
    }
    .emit(&out, &[row], summary)?;
    Ok(())
}
