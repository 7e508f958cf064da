use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use qpuf_core::circuits::{compile, deserialize, qeval_pure};
use qpuf_core::qmath::{fidelity_pure, PureState};
use qpuf_core::security::{pairs_to_state, CrpRecord};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::resolve;
use crate::error::{required, CliError, CliResult};

#[derive(Debug, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QevalArgs {
    /// QPUF descriptor file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub descriptor: Option<PathBuf>,
    /// Challenge state: a JSON array of `[re, im]` amplitudes, or an object
    /// with a `challenge` field (e.g. a CRP record).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub challenge: Option<PathBuf>,
    /// Expected response: an amplitude array or an object with a
    /// `response` field. Its fidelity with the actual response is printed.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected: Option<PathBuf>,
    /// CRP store (JSON lines); the record is appended.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threads: Option<usize>,
}

fn read_state(path: &Path, field: &str) -> CliResult<PureState> {
    let bytes = std::fs::read(path)?;
    let parse_err = |e: String| CliError::Parse(format!("{}: {e}", path.display()));
    let mut value: Value = serde_json::from_slice(&bytes).map_err(|e| parse_err(e.to_string()))?;
    if let Value::Object(map) = &mut value {
        value = map
            .remove(field)
            .ok_or_else(|| parse_err(format!("missing `{field}`")))?;
    }
    let pairs: Vec<[f64; 2]> = serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))?;
    Ok(pairs_to_state(&pairs)?)
}

pub fn run(flags: QevalArgs) -> CliResult<()> {
    let (a, _) = resolve(&flags, flags.config.as_deref())?;
    crate::init_threads(a.threads)?;
    let desc_path = required(a.descriptor, "descriptor")?;
    let challenge_path = required(a.challenge, "challenge")?;
    let out = required(a.out, "out")?;

    let desc = deserialize(&std::fs::read(&desc_path)?)?;
    let challenge = read_state(&challenge_path, "challenge")?;
    if challenge.dim() != desc.dim() {
        return Err(CliError::Dimension(format!(
            "challenge has dimension {}, descriptor acts on {}",
            challenge.dim(),
            desc.dim()
        )));
    }
    let response = qeval_pure(&compile(&desc)?, &challenge)?;
    let record = CrpRecord::pure(&challenge, &response)?;
    let mut line = serde_json::to_vec(&record).map_err(|e| CliError::Parse(e.to_string()))?;
    line.push(b'\n');
    std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&out)?
        .write_all(&line)?;

    if let Some(p) = a.expected {
        let expected = read_state(&p, "response")?;
        if expected.dim() != response.dim() {
            return Err(CliError::Dimension(format!(
                "expected response has dimension {}, actual {}",
                expected.dim(),
                response.dim()
            )));
        }
        println!("fidelity {}", fidelity_pure(&expected, &response)?);
    }
    Ok(())
}
