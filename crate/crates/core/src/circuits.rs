//! The QPUF construction: gate set, block unitaries, the parallel random
//! circuit, compilation to a dense unitary, and evaluation on states.
//!
//! Conventions:
//! - `rot_p(theta) = exp(-i theta P / 2)` for Pauli `P`.
//! - Qubit 0 (the paper's qubit 1) is the most significant tensor factor.
//! - Layer 0 is applied first; `compile` returns `L_{k-1} ... L_1 L_0`.
//! - An even-pairing layer acts on pairs `(0,1), (2,3), ...`; an odd-pairing
//!   layer on `(1,2), (3,4), ...`. For `n = 2` an odd layer acts on no pair
//!   and compiles to the identity.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{c64, CMatrix, DensityMatrix, PureState, Unitary, C64, MAX_DIM};
use crate::seed::rng_from_seed;

pub const DESCRIPTOR_VERSION: u64 = 1;

pub fn rot_x(theta: f64) -> Unitary {
    let (s, c) = (theta / 2.0).sin_cos();
    Unitary::from_trusted(CMatrix::from_row_slice(
        2,
        2,
        &[c64(c, 0.0), c64(0.0, -s), c64(0.0, -s), c64(c, 0.0)],
    ))
}

pub fn rot_z(theta: f64) -> Unitary {
    let half = theta / 2.0;
    Unitary::from_trusted(CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::from_polar(1.0, -half),
            c64(0.0, 0.0),
            c64(0.0, 0.0),
            C64::from_polar(1.0, half),
        ],
    ))
}

pub fn cz() -> Unitary {
    let mut m = CMatrix::identity(4, 4);
    m[(3, 3)] = c64(-1.0, 0.0);
    Unitary::from_trusted(m)
}

/// Parameters of one two-qubit block drawn from the gate set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub m: [u8; 4],
}

impl BlockParams {
    pub fn validate(&self) -> Result<()> {
        for (name, a) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !(a.is_finite() && (0.0..TAU).contains(&a)) {
                return Err(Error::InvalidParameter(format!("{name} = {a} outside [0, 2pi)")));
            }
        }
        if self.m.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter(format!("bits {:?} not in {{0,1}}", self.m)));
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut angle = || rng.random_range(0.0..TAU);
        let (alpha, beta, gamma, delta) = (angle(), angle(), angle(), angle());
        let m = [0; 4].map(|_| rng.random_range(0..2u8));
        Self {
            alpha,
            beta,
            gamma,
            delta,
            m,
        }
    }

    /// Effective rotation angles after the `m * pi` shifts.
    pub fn effective_angles(&self) -> [f64; 4] {
        let shift = |i: usize| f64::from(self.m[i]) * PI;
        [
            self.alpha + shift(0),
            self.beta + shift(1),
            self.gamma + shift(2),
            self.delta + shift(3),
        ]
    }
}

fn mul2(a: &Unitary, b: &Unitary) -> CMatrix {
    a.matrix() * b.matrix()
}

/// `CZ · (X(α')Z(β') ⊗ X(γ')Z(δ'))` with the primed angles shifted by `m·π`.
pub fn block_unitary(p: &BlockParams) -> Unitary {
    let [a, b, g, d] = p.effective_angles();
    let upper = mul2(&rot_x(a), &rot_z(b));
    let lower = mul2(&rot_x(g), &rot_z(d));
    let mut m = crate::qmath::kron(&upper, &lower);
    // CZ flips the sign of the |11> row
    for j in 0..4 {
        m[(3, j)] = -m[(3, j)];
    }
    Unitary::from_trusted(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// First qubit of every pair acted on by a layer of the given parity.
pub fn layer_pairs(n: usize, parity: Parity) -> Vec<usize> {
    let start = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    (start..n.saturating_sub(1)).step_by(2).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDescriptor {
    pub parity: Parity,
    pub blocks: Vec<BlockParams>,
}

/// Complete description of one generated QPUF. The compiled unitary is a
/// pure function of this value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpufDescriptor {
    pub version: u64,
    pub n_qubits: usize,
    pub n_blocks: usize,
    pub master_seed: u64,
    pub layers: Vec<LayerDescriptor>,
}

impl QpufDescriptor {
    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != DESCRIPTOR_VERSION {
            return Err(Error::UnknownVersion(self.version));
        }
        if self.n_qubits < 2 {
            return Err(Error::InvalidParameter(format!("n_qubits = {} < 2", self.n_qubits)));
        }
        if self.n_qubits > 30 {
            return Err(Error::InvalidParameter(format!(
                "n_qubits = {} too large",
                self.n_qubits
            )));
        }
        if self.layers.len() != self.n_blocks {
            return Err(Error::Malformed(format!(
                "n_blocks = {} but {} layers present",
                self.n_blocks,
                self.layers.len()
            )));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            let expected = layer_pairs(self.n_qubits, layer.parity).len();
            if layer.blocks.len() != expected {
                return Err(Error::Malformed(format!(
                    "layer {i} ({}) has {} blocks, expected {expected}",
                    layer.parity.as_str(),
                    layer.blocks.len()
                )));
            }
            for b in &layer.blocks {
                b.validate()?;
            }
        }
        Ok(())
    }

    /// Every block of every layer, in application order.
    pub fn blocks(&self) -> impl Iterator<Item = &BlockParams> {
        self.layers.iter().flat_map(|l| l.blocks.iter())
    }

    pub fn blocks_mut(&mut self) -> impl Iterator<Item = &mut BlockParams> {
        self.layers.iter_mut().flat_map(|l| l.blocks.iter_mut())
    }
}

/// Draws a descriptor: `k` layers, each with a fair-coin parity and i.i.d.
/// uniform block parameters. `master_seed` is recorded for provenance.
pub fn qgen<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R, master_seed: u64) -> Result<QpufDescriptor> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 qubits, got {n}")));
    }
    let layers = (0..k)
        .map(|_| {
            let parity = if rng.random_bool(0.5) {
                Parity::Odd
            } else {
                Parity::Even
            };
            let blocks = layer_pairs(n, parity)
                .iter()
                .map(|_| BlockParams::sample(rng))
                .collect();
            LayerDescriptor { parity, blocks }
        })
        .collect();
    Ok(QpufDescriptor {
        version: DESCRIPTOR_VERSION,
        n_qubits: n,
        n_blocks: k,
        master_seed,
        layers,
    })
}

/// [`qgen`] driven by a fresh generator seeded with `master_seed`.
pub fn qgen_seeded(n: usize, k: usize, master_seed: u64) -> Result<QpufDescriptor> {
    qgen(n, k, &mut rng_from_seed(master_seed), master_seed)
}

/// Left-multiplies `m` (d x d, d = 2^n) by a 4x4 gate on qubits `(q, q+1)`.
pub(crate) fn apply_two_qubit(m: &mut CMatrix, n: usize, q: usize, gate: &CMatrix) {
    let hi = 1usize << (n - 1 - q);
    let lo = 1usize << (n - 2 - q);
    let d = m.nrows();
    let g: [[C64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| gate[(r, c)]));
    for mut col in m.column_iter_mut() {
        for base in 0..d {
            if base & (hi | lo) != 0 {
                continue;
            }
            let idx = [base, base | lo, base | hi, base | hi | lo];
            let v = idx.map(|i| col[i]);
            for (r, &i) in idx.iter().enumerate() {
                col[i] = g[r][0] * v[0] + g[r][1] * v[1] + g[r][2] * v[2] + g[r][3] * v[3];
            }
        }
    }
}

/// The dense `2^n x 2^n` unitary of a descriptor.
pub fn compile(desc: &QpufDescriptor) -> Result<Unitary> {
    desc.validate()?;
    let d = desc.dim();
    if d > MAX_DIM {
        return Err(Error::GuardExceeded {
            what: "2^n",
            value: d,
            limit: MAX_DIM,
        });
    }
    let n = desc.n_qubits;
    let mut u = CMatrix::identity(d, d);
    for layer in &desc.layers {
        for (&q, block) in layer_pairs(n, layer.parity).iter().zip(&layer.blocks) {
            apply_two_qubit(&mut u, n, q, block_unitary(block).matrix());
        }
    }
    Unitary::new(u)
}

/// `U rho U^dag`.
pub fn qeval(u: &Unitary, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
    rho_in.conjugate(u)
}

pub fn qeval_pure(u: &Unitary, psi: &PureState) -> Result<PureState> {
    u.apply(psi)
}

/// Formats `x` with exactly 17 significant digits, positional when the
/// decimal exponent is moderate.
pub fn format_f64_17(x: f64) -> String {
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else {
        let p = point as usize;
        if p >= digits.len() {
            format!("{}{}.0", digits, "0".repeat(p - digits.len()))
        } else {
            format!("{}.{}", &digits[..p], &digits[p..])
        }
    };
    format!("{sign}{body}")
}

/// Canonical JSON bytes of a descriptor (fixed field order, 17 significant
/// digits per angle).
pub fn serialize(desc: &QpufDescriptor) -> Vec<u8> {
    let mut s = String::new();
    write!(
        s,
        "{{\"version\":{},\"n_qubits\":{},\"n_blocks\":{},\"master_seed\":{},\"layers\":[",
        desc.version, desc.n_qubits, desc.n_blocks, desc.master_seed
    )
    .unwrap();
    for (li, layer) in desc.layers.iter().enumerate() {
        if li > 0 {
            s.push(',');
        }
        write!(s, "{{\"parity\":\"{}\",\"blocks\":[", layer.parity.as_str()).unwrap();
        for (bi, b) in layer.blocks.iter().enumerate() {
            if bi > 0 {
                s.push(',');
            }
            write!(
                s,
                "{{\"alpha\":{},\"beta\":{},\"gamma\":{},\"delta\":{},\"m\":[{},{},{},{}]}}",
                format_f64_17(b.alpha),
                format_f64_17(b.beta),
                format_f64_17(b.gamma),
                format_f64_17(b.delta),
                b.m[0],
                b.m[1],
                b.m[2],
                b.m[3]
            )
            .unwrap();
        }
        s.push_str("]}");
    }
    s.push_str("]}\n");
    s.into_bytes()
}

pub fn deserialize(bytes: &[u8]) -> Result<QpufDescriptor> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
    let version = value
        .get("version")
        .ok_or_else(|| Error::Malformed("missing version".into()))?
        .as_u64()
        .ok_or_else(|| Error::Malformed("version is not an unsigned integer".into()))?;
    if version != DESCRIPTOR_VERSION {
        return Err(Error::UnknownVersion(version));
    }
    let desc: QpufDescriptor = serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
    desc.validate()?;
    Ok(desc)
}

/// Thresholds of the correctness properties and of the practical
/// unknownness game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityParams {
    pub delta_r: f64,
    pub delta_c: f64,
    pub delta_u: f64,
    pub epsilon: f64,
    pub t: usize,
}

impl SecurityParams {
    pub fn new(delta_r: f64, delta_c: f64, delta_u: f64, epsilon: f64, t: usize) -> Result<Self> {
        for (name, v) in [("delta_r", delta_r), ("delta_c", delta_c), ("delta_u", delta_u)] {
            if !(0.0..=2.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 2]")));
            }
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon} outside (0, 1)")));
        }
        if t == 0 {
            return Err(Error::InvalidParameter("t must be positive".into()));
        }
        if delta_r > delta_c || delta_r > delta_u {
            return Err(Error::InvalidParameter(
                "require delta_r <= delta_c and delta_r <= delta_u".into(),
            ));
        }
        Ok(Self {
            delta_r,
            delta_c,
            delta_u,
            epsilon,
            t,
        })
    }

    /// The unknownness ceiling `1/2 (1 + epsilon / 2)`.
    pub fn unknownness_ceiling(&self) -> f64 {
        0.5 * (1.0 + 0.5 * self.epsilon)
    }
}
