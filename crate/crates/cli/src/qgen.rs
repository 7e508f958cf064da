use std::path::PathBuf;

use clap::Args;
use qpuf_core::circuits::{qgen_seeded, serialize};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::resolve;
use crate::error::{required, CliResult};

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QgenArgs {
    /// Number of qubits (>= 2).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    /// Number of random layers.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Descriptor file to write.
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

/// Writes the canonical descriptor and prints `sha256  path`.
pub fn run(flags: QgenArgs) -> CliResult<()> {
    let (a, _) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let n = required(a.n, "n")?;
    let k = required(a.k, "k")?;
    let out = required(a.out, "out")?;
    let desc = qgen_seeded(n, k, a.seed.unwrap_or(0))?;
    let bytes = serialize(&desc);
    std::fs::write(&out, &bytes)?;
    println!("{}  {}", hex::encode(Sha256::digest(&bytes)), out.display());
    Ok(())
}
