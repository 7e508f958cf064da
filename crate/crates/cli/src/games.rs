use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use qpuf_core::circuits::{compile, deserialize, qgen_seeded, QpufDescriptor};
use qpuf_core::design::{Ensemble, Sampler};
use qpuf_core::security::{
    forgery_game, noise_theorem_check, unknownness_game, Distinguisher, ExactCloneForger, Forger,
    HelstromDistinguisher, HypothesisModel, IdentityForger, RandomGuess, RandomUnitaryForger, UnitaryNoiseModel,
};
use qpuf_core::seed::child_seed;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::resolve;
use crate::design::{build_sampler, SamplerKind};
use crate::error::{required, CliError, CliResult};
use crate::output::Emitter;

#[derive(Debug, Subcommand)]
pub enum GamesCommand {
    /// Distinguish the sampler from Haar given m copies of U|phi>.
    Unknownness(UnknownnessArgs),
    /// Predict the response to a fresh Haar challenge.
    Forge(ForgeArgs),
    /// Check eps' <= eps + eps_t + tolerance under angle jitter.
    NoiseCheck(NoiseArgs),
}

pub fn run(cmd: GamesCommand) -> CliResult<()> {
    match cmd {
        GamesCommand::Unknownness(a) => run_unknownness(a),
        GamesCommand::Forge(a) => run_forge(a),
        GamesCommand::NoiseCheck(a) => run_noise(a),
    }
}

fn read_descriptor(path: &PathBuf) -> CliResult<QpufDescriptor> {
    Ok(deserialize(&std::fs::read(path)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameSampler {
    Qgen,
    /// Haar against Haar: the control, no advantage possible.
    Haar,
    /// The single unitary of `--descriptor`.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistinguisherKind {
    RandomGuess,
    Helstrom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForgerKind {
    Identity,
    RandomUnitary,
    ExactClone,
}

macro_rules! common_tail {
    ($(#[$meta:meta])* pub struct $name:ident { $($(#[$fmeta:meta])* pub $field:ident: $ty:ty,)* }) => {
        $(#[$meta])*
        #[derive(Debug, Args, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
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

common_tail! {
    pub struct UnknownnessArgs {
        #[arg(long, value_enum)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub sampler: Option<GameSampler>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub n: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub k: Option<usize>,
        /// Descriptor of the fixed sampler.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub descriptor: Option<PathBuf>,
        /// Copies of U|phi> handed to the adversary.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub m: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub trials: Option<usize>,
        /// Adversaries, comma separated.
        #[arg(long, value_enum, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub adversary: Option<Vec<DistinguisherKind>>,
        /// Draws averaged into the m-copy design state of a qgen sampler.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub model_budget: Option<usize>,
    }
}

common_tail! {
    pub struct ForgeArgs {
        /// Target QPUF; when absent one is generated from --n, --k, --seed.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub descriptor: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub n: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub k: Option<usize>,
        /// CRPs disclosed to the adversary per trial.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub num_crps: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub trials: Option<usize>,
        #[arg(long, value_enum, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub adversary: Option<Vec<ForgerKind>>,
    }
}

common_tail! {
    pub struct NoiseArgs {
        #[arg(long, value_enum)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub sampler: Option<SamplerKind>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub n: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub d: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub k: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub t: Option<usize>,
        /// Angle jitter standard deviations, comma separated.
        #[arg(long, value_delimiter = ',')]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub sigma: Option<Vec<f64>>,
        /// Members per ensemble.
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub budget: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub ensembles: Option<usize>,
        #[arg(long)]
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pub tolerance: Option<f64>,
    }
}

#[derive(Debug, Serialize)]
struct UnknownnessRow {
    sampler: &'static str,
    m: usize,
    adversary: String,
    trials: usize,
    successes: usize,
    success_rate: f64,
    helstrom_bound: f64,
    epsilon: f64,
    ceiling: f64,
    sigma: f64,
}

fn run_unknownness(flags: UnknownnessArgs) -> CliResult<()> {
    let started = Instant::now();
    let (a, echo) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let out = required(a.out, "out")?;
    let seed = a.seed.unwrap_or(0);
    let kind = a.sampler.unwrap_or(GameSampler::Qgen);
    let m = a.m.unwrap_or(1);
    let trials = a.trials.unwrap_or(2000);
    let model_budget = a.model_budget.unwrap_or(2000);
    let (sampler, name) = match kind {
        GameSampler::Qgen => (build_sampler(SamplerKind::Qgen, a.n, None, a.k)?, "qgen"),
        GameSampler::Haar => (build_sampler(SamplerKind::Haar, a.n, None, None)?, "haar"),
        GameSampler::Fixed => {
            let desc = read_descriptor(&required(a.descriptor, "descriptor")?)?;
            (Sampler::Fixed(compile(&desc)?), "fixed")
        }
    };
    let adversaries = a
        .adversary
        .unwrap_or_else(|| vec![DistinguisherKind::RandomGuess, DistinguisherKind::Helstrom]);
    let mut rows = Vec::new();
    for kind in adversaries {
        let adv: Box<dyn Distinguisher> = match kind {
            DistinguisherKind::RandomGuess => Box::new(RandomGuess),
            DistinguisherKind::Helstrom => Box::new(HelstromDistinguisher::new(HypothesisModel::new(
                &sampler,
                m,
                model_budget,
                child_seed(seed, u64::MAX),
            )?)),
        };
        let r = unknownness_game(&sampler, m, trials, adv.as_ref(), seed, model_budget)?;
        println!(
            "{}: success_rate={} helstrom_bound={} sigma={}",
            r.adversary, r.success_rate, r.bound, r.sigma
        );
        rows.push(UnknownnessRow {
            sampler: name,
            m,
            adversary: r.adversary,
            trials: r.trials,
            successes: r.successes,
            success_rate: r.success_rate,
            helstrom_bound: r.bound,
            epsilon: r.epsilon,
            ceiling: r.ceiling,
            sigma: r.sigma,
        });
    }
    let within = rows.iter().all(|r| r.success_rate <= r.helstrom_bound + 3.0 * r.sigma);
    let summary = json!({ "all_within_bound_plus_3_sigma": within });
    Emitter {
        command: "games unknownness",
        master_seed: seed,
        config: &echo,
        started,
    }
    .emit(&out, &rows, summary)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ForgeRow {
    adversary: String,
    n_qubits: usize,
    n_blocks: usize,
    num_crps: usize,
    trials: usize,
    mean_fidelity: f64,
    std_error: f64,
    identity_baseline: f64,
}

fn run_forge(flags: ForgeArgs) -> CliResult<()> {
    let started = Instant::now();
    let (a, echo) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let out = required(a.out, "out")?;
    let seed = a.seed.unwrap_or(0);
    let desc = match a.descriptor {
        Some(p) => read_descriptor(&p)?,
        None => qgen_seeded(required(a.n, "n")?, required(a.k, "k")?, child_seed(seed, u64::MAX))?,
    };
    let num_crps = a.num_crps.unwrap_or(0);
    let trials = a.trials.unwrap_or(2000);
    let adversaries = a
        .adversary
        .unwrap_or_else(|| vec![ForgerKind::Identity, ForgerKind::RandomUnitary, ForgerKind::ExactClone]);
    let mut rows = Vec::new();
    for kind in adversaries {
        let adv: Box<dyn Forger> = match kind {
            ForgerKind::Identity => Box::new(IdentityForger),
            ForgerKind::RandomUnitary => Box::new(RandomUnitaryForger),
            ForgerKind::ExactClone => Box::new(ExactCloneForger::new(&desc)?),
        };
        let r = forgery_game(&desc, num_crps, trials, adv.as_ref(), seed)?;
        println!(
            "{}: mean_fidelity={} std_error={}",
            r.adversary, r.mean_fidelity, r.std_error
        );
        rows.push(ForgeRow {
            adversary: r.adversary,
            n_qubits: desc.n_qubits,
            n_blocks: desc.n_blocks,
            num_crps,
            trials,
            mean_fidelity: r.mean_fidelity,
            std_error: r.std_error,
            identity_baseline: r.identity_baseline,
        });
    }
    let summary = json!({ "score": "mean squared overlap |<forged|true>|^2" });
    Emitter {
        command: "games forge",
        master_seed: seed,
        config: &echo,
        started,
    }
    .emit(&out, &rows, summary)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct NoiseRow {
    ensemble_index: usize,
    sigma: f64,
    t: usize,
    epsilon: f64,
    epsilon_t: f64,
    epsilon_noisy: f64,
    tolerance: f64,
    holds: bool,
    meaningful: bool,
}

fn run_noise(flags: NoiseArgs) -> CliResult<()> {
    let started = Instant::now();
    let (a, echo) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let out = required(a.out, "out")?;
    let seed = a.seed.unwrap_or(0);
    let sampler = build_sampler(a.sampler.unwrap_or(SamplerKind::Qgen), a.n, a.d, a.k)?;
    let t = a.t.unwrap_or(2);
    let sigmas = a.sigma.unwrap_or_else(|| vec![0.005, 0.05]);
    let budget = a.budget.unwrap_or(200);
    let ensembles = a.ensembles.unwrap_or(1);
    let tolerance = a.tolerance.unwrap_or(0.02);

    let mut rows = Vec::new();
    for j in 0..ensembles {
        let s = child_seed(seed, j as u64);
        let e = Ensemble::generative(sampler.clone(), budget, child_seed(s, 0))?;
        for &sigma in &sigmas {
            let r = noise_theorem_check(
                &e,
                &UnitaryNoiseModel::angle_jitter(sigma)?,
                t,
                child_seed(s, 1),
                tolerance,
            )?;
            println!(
                "ensemble={j} sigma={sigma}: eps={} eps_t={} eps'={} holds={}",
                r.epsilon, r.epsilon_t, r.epsilon_noisy, r.holds
            );
            rows.push(NoiseRow {
                ensemble_index: j,
                sigma,
                t,
                epsilon: r.epsilon,
                epsilon_t: r.epsilon_t,
                epsilon_noisy: r.epsilon_noisy,
                tolerance,
                holds: r.holds,
                meaningful: r.meaningful,
            });
        }
    }
    let failures = rows.iter().filter(|r| !r.holds).count();
    let summary = json!({
        "proxy": "epsilon values are Choi-state trace distances to Haar",
        "all_hold": failures == 0,
        "failures": failures,
    });
    Emitter {
        command: "games noise-check",
        master_seed: seed,
        config: &echo,
        started,
    }
    .emit(&out, &rows, summary)?;
    if failures > 0 {
        return Err(CliError::Assertion(format!(
            "noise bound violated in {failures} of {} cases",
            rows.len()
        )));
    }
    Ok(())
}
