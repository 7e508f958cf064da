//! How close an ensemble of unitaries is to a unitary t-design.
//!
//! Moment operators act on row-major vectorizations, so that
//! `vec(A Y B) = (A ⊗ Bᵀ) vec(Y)` and the channel `Y -> W Y W†` has matrix
//! `W ⊗ conj(W)`. With `D = d^t` the Choi state of a moment operator `M` is
//! `J[(i·D+a),(j·D+b)] = M[(i·D+j),(a·D+b)] / D`, the output of the channel
//! tensored with the identity on the maximally entangled probe.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{compile, layer_pairs, qgen_seeded, Parity};
use crate::error::{Error, Result};
use crate::qmath::{
    c64, checked_pow, eig_unitary, haar_unitary, hermitian_eigenvalues, hermitize, CMatrix, Unitary, C64,
};
use crate::seed::{child_rng, child_seed};

/// Largest `d^t` for which dense moment operators are built.
pub const MAX_MOMENT_DIM: usize = 64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Draws folded into one dense update.
const CHUNK: usize = 128;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Entrywise compensated accumulation of complex matrices.
struct CompensatedMatrix {
    sum: Vec<f64>,
    comp: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl CompensatedMatrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            sum: vec![0.0; 2 * rows * cols],
            comp: vec![0.0; 2 * rows * cols],
            rows,
            cols,
        }
    }

    fn add(&mut self, m: &CMatrix) {
        let parts = m.as_slice().iter().flat_map(|z| [z.re, z.im]);
        for ((s, c), x) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(parts) {
            let t = *s + x;
            if s.abs() >= x.abs() {
                *c += (*s - t) + x;
            } else {
                *c += (x - t) + *s;
            }
            *s = t;
        }
    }

    fn finish(self) -> CMatrix {
        let data: Vec<C64> = self
            .sum
            .chunks_exact(2)
            .zip(self.comp.chunks_exact(2))
            .map(|(s, c)| c64(s[0] + c[0], s[1] + c[1]))
            .collect();
        CMatrix::from_vec(self.rows, self.cols, data)
    }
}

/// Source of random unitaries for generative ensembles. Draw `i` of a
/// sampler under `seed` depends only on `(seed, i)`.
#[derive(Debug, Clone)]
pub enum Sampler {
    Haar {
        d: usize,
    },
    /// `compile(qgen_seeded(n, k, child_seed(seed, i)))`.
    Qgen {
        n: usize,
        k: usize,
    },
    Fixed(Unitary),
}

impl Sampler {
    pub fn dim(&self) -> usize {
        match self {
            Sampler::Haar { d } => *d,
            Sampler::Qgen { n, .. } => 1 << n,
            Sampler::Fixed(u) => u.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sampler::Haar { .. } => "haar",
            Sampler::Qgen { .. } => "qgen",
            Sampler::Fixed(_) => "fixed",
        }
    }

    pub fn draw(&self, seed: u64, index: u64) -> Result<Unitary> {
        match self {
            Sampler::Haar { d } => Ok(haar_unitary(*d, &mut child_rng(seed, index))),
            Sampler::Qgen { n, k } => compile(&qgen_seeded(*n, *k, child_seed(seed, index))?),
            Sampler::Fixed(u) => Ok(u.clone()),
        }
    }

    /// Draws `start..start+count`, in parallel, returned in index order.
    pub fn draw_range(&self, seed: u64, start: u64, count: usize) -> Result<Vec<Unitary>> {
        (0..count as u64)
            .into_par_iter()
            .map(|i| self.draw(seed, start + i))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Member {
    pub p: f64,
    pub u: Unitary,
}

#[derive(Debug, Clone)]
pub enum Ensemble {
    Explicit(Vec<Member>),
    /// Uniform weight `1/budget` on draws `0..budget`.
    Generative {
        sampler: Sampler,
        budget: usize,
        seed: u64,
    },
}

impl Ensemble {
    pub fn explicit(members: Vec<Member>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyEnsemble)?;
        let d = first.u.dim();
        let mut total = CompensatedSum::default();
        for m in &members {
            if !(m.p.is_finite() && m.p >= 0.0) {
                return Err(Error::InvalidParameter(format!("weight {} is not a probability", m.p)));
            }
            if m.u.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.u.dim(),
                });
            }
            total.add(m.p);
        }
        if (total.value() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {}", total.value())));
        }
        Ok(Ensemble::Explicit(members))
    }

    pub fn uniform(us: Vec<Unitary>) -> Result<Self> {
        if us.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let p = 1.0 / us.len() as f64;
        // a plain 1/N weight can miss the 1e-12 tolerance only for absurd N
        Ensemble::explicit(us.into_iter().map(|u| Member { p, u }).collect())
    }

    pub fn generative(sampler: Sampler, budget: usize, seed: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::EmptyEnsemble);
        }
        Ok(Ensemble::Generative { sampler, budget, seed })
    }

    pub fn dim(&self) -> usize {
        match self {
            Ensemble::Explicit(m) => m[0].u.dim(),
            Ensemble::Generative { sampler, .. } => sampler.dim(),
        }
    }

    fn size(&self) -> usize {
        match self {
            Ensemble::Explicit(m) => m.len(),
            Ensemble::Generative { budget, .. } => *budget,
        }
    }

    /// Members `start..start+count` with their weights.
    fn members(&self, start: usize, count: usize) -> Result<Vec<Member>> {
        match self {
            Ensemble::Explicit(m) => Ok(m[start..start + count].to_vec()),
            Ensemble::Generative { sampler, budget, seed } => {
                let p = 1.0 / *budget as f64;
                Ok(sampler
                    .draw_range(*seed, start as u64, count)?
                    .into_iter()
                    .map(|u| Member { p, u })
                    .collect())
            }
        }
    }

    /// Visits all members in fixed-size chunks, in order.
    fn for_each_chunk(&self, mut f: impl FnMut(&[Member]) -> Result<()>) -> Result<()> {
        let size = self.size();
        let mut start = 0;
        while start < size {
            let count = CHUNK.min(size - start);
            f(&self.members(start, count)?)?;
            start += count;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentSource {
    Exact,
    MonteCarlo { budget: usize, seed: u64 },
}

/// Dense matrix of `Y -> Σ p_i U_i^{⊗t} Y U_i^{†⊗t}` on `d^t x d^t` inputs.
#[derive(Debug, Clone)]
pub struct MomentOperator {
    pub t: usize,
    pub d: usize,
    pub matrix: CMatrix,
    pub source: MomentSource,
}

impl MomentOperator {
    /// `d^t`.
    pub fn big_dim(&self) -> usize {
        self.d.pow(self.t as u32)
    }

    pub fn apply(&self, y: &CMatrix) -> Result<CMatrix> {
        let dd = self.big_dim();
        if y.shape() != (dd, dd) {
            return Err(Error::DimensionMismatch {
                expected: dd,
                found: y.nrows(),
            });
        }
        let v = CMatrix::from_row_slice(dd * dd, 1, y.transpose().as_slice());
        let out = &self.matrix * v;
        Ok(CMatrix::from_row_slice(dd, dd, out.as_slice()))
    }

    pub fn choi(&self) -> CMatrix {
        let dd = self.big_dim();
        reshuffle(&self.matrix, dd).unscale(dd as f64)
    }
}

/// `out[(i·D+a),(j·D+b)] = m[(i·D+j),(a·D+b)]`; an involution.
pub fn reshuffle(m: &CMatrix, big_d: usize) -> CMatrix {
    let n = big_d * big_d;
    CMatrix::from_fn(n, n, |r, c| {
        let (i, a) = (r / big_d, r % big_d);
        let (j, b) = (c / big_d, c % big_d);
        m[(i * big_d + j, a * big_d + b)]
    })
}

/// `d^t`, rejected above [`MAX_MOMENT_DIM`].
pub fn moment_dim(d: usize, t: usize) -> Result<usize> {
    if t == 0 {
        return Err(Error::InvalidParameter("order t must be >= 1".into()));
    }
    let big = checked_pow(d, t)?;
    if big > MAX_MOMENT_DIM {
        return Err(Error::GuardExceeded {
            what: "d^t",
            value: big,
            limit: MAX_MOMENT_DIM,
        });
    }
    Ok(big)
}

fn row_major_vec(m: &CMatrix) -> Vec<C64> {
    m.transpose().as_slice().to_vec()
}

/// Choi state `Σ p_i vec(U_i^{⊗t}) vec(U_i^{⊗t})† / d^t`.
pub fn ensemble_choi(e: &Ensemble, t: usize) -> Result<CMatrix> {
    let big = moment_dim(e.dim(), t)?;
    let n = big * big;
    let mut acc = CompensatedMatrix::zeros(n, n);
    e.for_each_chunk(|members| {
        let cols: Vec<Vec<C64>> = members
            .par_iter()
            .map(|m| {
                let w = m.u.tensor_power(t)?;
                let s = m.p.sqrt();
                Ok(row_major_vec(w.matrix()).into_iter().map(|z| z * s).collect())
            })
            .collect::<Result<_>>()?;
        let a = CMatrix::from_vec(n, cols.len(), cols.concat());
        acc.add(&(&a * a.adjoint()));
        Ok(())
    })?;
    Ok(acc.finish().unscale(big as f64))
}

fn source_of(e: &Ensemble) -> MomentSource {
    match e {
        Ensemble::Explicit(_) => MomentSource::Exact,
        Ensemble::Generative { budget, seed, .. } => MomentSource::MonteCarlo {
            budget: *budget,
            seed: *seed,
        },
    }
}

/// Exact for explicit ensembles; the Monte Carlo average over the budget
/// for generative ones.
pub fn moment_operator(e: &Ensemble, t: usize) -> Result<MomentOperator> {
    let big = moment_dim(e.dim(), t)?;
    let j = ensemble_choi(e, t)?;
    Ok(MomentOperator {
        t,
        d: e.dim(),
        matrix: reshuffle(&j, big).scale(big as f64),
        source: source_of(e),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HaarMode {
    Exact,
    MonteCarlo { budget: usize, seed: u64 },
}

/// Row-major vectorized permutation operators of S_t on `(C^d)^{⊗t}`
/// (`t ∈ {1, 2}`) and the matching Weingarten matrix.
fn weingarten_terms(d: usize, t: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let df = d as f64;
    match t {
        1 => {
            let id: Vec<f64> = (0..d * d).map(|r| if r / d == r % d { 1.0 } else { 0.0 }).collect();
            (vec![id], vec![vec![1.0 / df]])
        }
        _ => {
            let big = d * d;
            let mut id = vec![0.0; big * big];
            let mut swap = vec![0.0; big * big];
            for a in 0..d {
                for b in 0..d {
                    let row = a * d + b;
                    id[row * big + row] = 1.0;
                    swap[row * big + (b * d + a)] = 1.0;
                }
            }
            let e = 1.0 / (df * df - 1.0);
            let s = -1.0 / (df * (df * df - 1.0));
            (vec![id, swap], vec![vec![e, s], vec![s, e]])
        }
    }
}

pub fn haar_moment_operator(d: usize, t: usize, mode: HaarMode) -> Result<MomentOperator> {
    let big = moment_dim(d, t)?;
    match mode {
        HaarMode::MonteCarlo { budget, seed } => {
            moment_operator(&Ensemble::generative(Sampler::Haar { d }, budget, seed)?, t)
        }
        HaarMode::Exact => {
            if t > 2 {
                return Err(Error::UnsupportedOrder(t));
            }
            if d < t.max(2) {
                return Err(Error::InvalidParameter(format!(
                    "exact Haar twirl needs d >= max(t, 2), got d = {d}"
                )));
            }
            let (perms, wg) = weingarten_terms(d, t);
            let n = big * big;
            let mut m = CMatrix::zeros(n, n);
            for (s, ps) in perms.iter().enumerate() {
                for (r, pr) in perms.iter().enumerate() {
                    let w = wg[s][r];
                    for (i, &x) in ps.iter().enumerate() {
                        if x == 0.0 {
                            continue;
                        }
                        for (j, &y) in pr.iter().enumerate() {
                            if y != 0.0 {
                                m[(i, j)] += c64(w * x * y, 0.0);
                            }
                        }
                    }
                }
            }
            Ok(MomentOperator {
                t,
                d,
                matrix: m,
                source: MomentSource::Exact,
            })
        }
    }
}

/// Both computable stand-ins for the diamond distance between the ensemble
/// twirl and the Haar twirl.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignError {
    /// `||M_t(e) - M_t^H||_F`.
    pub frobenius: f64,
    /// Trace distance of the two Choi states; a lower bound on the diamond
    /// distance.
    pub probe_trace: f64,
}

fn exact_reference_available(d: usize, t: usize) -> bool {
    t <= 2 && d >= t.max(2)
}

fn reference_operator(e: &Ensemble, t: usize) -> Result<MomentOperator> {
    let d = e.dim();
    if exact_reference_available(d, t) {
        return haar_moment_operator(d, t, HaarMode::Exact);
    }
    let (budget, seed) = match e {
        Ensemble::Generative { budget, seed, .. } => ((*budget).max(10_000), child_seed(*seed, u64::MAX)),
        Ensemble::Explicit(_) => (10_000, 0x4841_4152),
    };
    haar_moment_operator(d, t, HaarMode::MonteCarlo { budget, seed })
}

/// `Σ_ij p_i p_j |Tr(U_i† U_j)|^{2t}` over all ordered pairs of members.
pub fn exact_frame_potential(e: &Ensemble, t: usize) -> Result<f64> {
    let d = e.dim();
    let size = e.size();
    let all = e.members(0, size)?;
    let vecs: Vec<C64> = all.iter().flat_map(|m| row_major_vec(m.u.matrix())).collect();
    let b = CMatrix::from_vec(d * d, size, vecs);
    let weights: Vec<f64> = all.iter().map(|m| m.p).collect();
    let partials: Vec<CompensatedSum> = (0..size)
        .step_by(CHUNK)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|start| {
            let count = CHUNK.min(size - start);
            let g = b.columns(start, count).adjoint() * &b;
            let mut s = CompensatedSum::default();
            for i in 0..count {
                for j in 0..size {
                    s.add(weights[start + i] * weights[j] * g[(i, j)].norm_sqr().powi(t as i32));
                }
            }
            s
        })
        .collect();
    Ok(partials
        .iter()
        .map(CompensatedSum::value)
        .collect::<CompensatedSum>()
        .value())
}

fn factorial(t: usize) -> f64 {
    (1..=t).map(|x| x as f64).product()
}

/// Frobenius proxy. Against the exact Haar twirl (a rank-t! projector
/// absorbing any `U^{⊗t} ⊗ conj(U^{⊗t})`), `||M_e - M_H||_F^2` equals the
/// frame potential minus `t!`, which avoids the dense `d^{2t}` matrices.
pub fn frobenius_error(e: &Ensemble, t: usize) -> Result<f64> {
    let d = e.dim();
    moment_dim(d, t)?;
    if exact_reference_available(d, t) {
        let fp = exact_frame_potential(e, t)?;
        return Ok((fp - factorial(t)).max(0.0).sqrt());
    }
    let m = moment_operator(e, t)?;
    let h = reference_operator(e, t)?;
    Ok((&m.matrix - &h.matrix).norm())
}

/// Trace distance between the Choi states of the ensemble and Haar twirls.
pub fn probe_trace_error(e: &Ensemble, t: usize) -> Result<f64> {
    let d = e.dim();
    let je = ensemble_choi(e, t)?;
    let jh = reference_operator(e, t)?.choi();
    Ok(choi_trace_distance(&je, &jh, d, t))
}

pub fn design_error(e: &Ensemble, t: usize) -> Result<DesignError> {
    Ok(DesignError {
        frobenius: frobenius_error(e, t)?,
        probe_trace: probe_trace_error(e, t)?,
    })
}

/// `||a - b||_1` for Choi states of t-fold twirls, capped at 2. For `t = 2`
/// both states commute with the swap of the two copies applied to system
/// and reference together, and are supported on its symmetric subspace, so
/// the trace norm is taken there.
pub fn choi_trace_distance(a: &CMatrix, b: &CMatrix, d: usize, t: usize) -> f64 {
    let diff = a - b;
    let reduced = if t == 2 { joint_swap_reduce(&diff, d) } else { diff };
    hermitian_eigenvalues(&hermitize(&reduced))
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
        .min(2.0)
}

/// Compresses a `d^4 x d^4` operator to the +1 eigenspace of the joint
/// copy swap `(s1,s2,r1,r2) -> (s2,s1,r2,r1)`.
pub fn joint_swap_reduce(x: &CMatrix, d: usize) -> CMatrix {
    let big = d * d;
    let n = big * big;
    assert_eq!(x.nrows(), n, "operator must act on (C^d)^{{⊗4}}");
    let sigma = |idx: usize| {
        let (s, r) = (idx / big, idx % big);
        let (s1, s2, r1, r2) = (s / d, s % d, r / d, r % d);
        (s2 * d + s1) * big + (r2 * d + r1)
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let basis: Vec<Vec<(usize, f64)>> = (0..n)
        .filter_map(|i| {
            let j = sigma(i);
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => Some(vec![(i, 1.0)]),
                std::cmp::Ordering::Less => Some(vec![(i, h), (j, h)]),
                std::cmp::Ordering::Greater => None,
            }
        })
        .collect();
    let m = basis.len();
    CMatrix::from_fn(m, m, |r, c| {
        let mut z = c64(0.0, 0.0);
        for &(i, ci) in &basis[r] {
            for &(j, cj) in &basis[c] {
                z += x[(i, j)] * (ci * cj);
            }
        }
        z
    })
}

/// Choi state of the exact Haar twirl.
pub fn haar_choi(d: usize, t: usize) -> Result<CMatrix> {
    Ok(haar_moment_operator(d, t, HaarMode::Exact)?.choi())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePotential {
    pub value: f64,
    pub std_error: f64,
    pub pairs: usize,
}

/// Mean of `|Tr(U† V)|^{2t}` over independent pairs. Generative ensembles
/// use draws `2i` and `2i+1` for pair `i`; explicit ensembles are summed
/// exactly (`std_error = 0`).
pub fn frame_potential(e: &Ensemble, t: usize, pairs: usize) -> Result<FramePotential> {
    if pairs == 0 {
        return Err(Error::InvalidParameter("need at least one pair".into()));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("order t must be >= 1".into()));
    }
    let (sampler, seed) = match e {
        Ensemble::Explicit(_) => {
            return Ok(FramePotential {
                value: exact_frame_potential(e, t)?,
                std_error: 0.0,
                pairs,
            })
        }
        Ensemble::Generative { sampler, seed, .. } => (sampler, *seed),
    };
    let samples: Vec<f64> = (0..pairs as u64)
        .into_par_iter()
        .map(|i| {
            let u = sampler.draw(seed, 2 * i)?;
            let v = sampler.draw(seed, 2 * i + 1)?;
            let tr = u.matrix().dotc(v.matrix());
            Ok(tr.norm_sqr().powi(t as i32))
        })
        .collect::<Result<_>>()?;
    let (mean, var) = mean_and_variance(&samples);
    Ok(FramePotential {
        value: mean,
        std_error: (var / pairs as f64).sqrt(),
        pairs,
    })
}

/// Mean and unbiased sample variance, both compensated.
pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss = xs
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value();
    (mean, ss / (n - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcStatisticsReport {
    pub d: usize,
    pub arc_length: f64,
    pub sample_count: usize,
    pub mean_count: f64,
    pub var_count: f64,
    pub predicted_mean: f64,
    pub predicted_var: f64,
}

/// `(1/π²)(ln d + 1 + γ + ln|2 sin(arc/2)|)`; zero for the full circle.
pub fn predicted_arc_variance(d: usize, arc_length: f64) -> f64 {
    if arc_length >= TAU {
        return 0.0;
    }
    let v = ((d as f64).ln() + 1.0 + EULER_GAMMA + (2.0 * (arc_length / 2.0).sin()).abs().ln()) / (PI * PI);
    v.max(0.0)
}

/// Counts eigenvalues of each draw in the fixed arc `[0, arc_length)`.
pub fn arc_statistics(e: &Ensemble, arc_length: f64, samples: usize) -> Result<ArcStatisticsReport> {
    let Ensemble::Generative { sampler, seed, .. } = e else {
        return Err(Error::InvalidParameter(
            "arc statistics need a generative ensemble".into(),
        ));
    };
    if samples < 30 {
        return Err(Error::InvalidParameter(format!(
            "need at least 30 samples, got {samples}"
        )));
    }
    if !(arc_length > 0.0 && arc_length <= TAU) {
        return Err(Error::InvalidParameter(format!(
            "arc length {arc_length} outside (0, 2pi]"
        )));
    }
    let d = sampler.dim();
    let counts: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let angles = eig_unitary(&sampler.draw(*seed, i)?)?;
            Ok(angles.angles().iter().filter(|&&a| a < arc_length).count() as f64)
        })
        .collect::<Result<_>>()?;
    let (mean, var) = mean_and_variance(&counts);
    Ok(ArcStatisticsReport {
        d,
        arc_length,
        sample_count: samples,
        mean_count: mean,
        var_count: var,
        predicted_mean: d as f64 * arc_length / TAU,
        predicted_var: predicted_arc_variance(d, arc_length),
    })
}

/// Moments of the qgen distribution itself, with every rotation angle
/// integrated out exactly.
///
/// A uniform angle enters `Rz(β)^{⊗t} ⊗ conj(Rz(β)^{⊗t})` only through
/// integer frequencies, so its average keeps exactly the matrix entries
/// whose ket and bra carry the same number of ones on the rotated qubit's
/// copies (a dephasing); the `mπ` shifts drop out. `Rx` is the same in the
/// Hadamard frame. One layer is the even/odd average of these blocks and
/// `k` layers are `k` applications to the Choi state.
pub struct QgenExactMoments {
    n: usize,
    t: usize,
    layers: usize,
    dim: usize,
    choi: CMatrix,
}

impl QgenExactMoments {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 qubits, got {n}")));
        }
        if t > 2 {
            return Err(Error::UnsupportedOrder(t));
        }
        let big = moment_dim(1 << n, t)?;
        let dim = big * big;
        // Choi state of the identity channel
        let mut choi = CMatrix::zeros(dim, dim);
        let w = 1.0 / big as f64;
        for i in 0..big {
            for j in 0..big {
                choi[(i * big + i, j * big + j)] = c64(w, 0.0);
            }
        }
        Ok(Self {
            n,
            t,
            layers: 0,
            dim,
            choi,
        })
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    /// Bit (from the least significant end of a Choi index) of system copy
    /// `c`, qubit `q`.
    fn bit(&self, c: usize, q: usize) -> usize {
        let total = 2 * self.t * self.n;
        1 << (total - 1 - (c * self.n + q))
    }

    fn copies_mask(&self, q: usize) -> usize {
        (0..self.t).map(|c| self.bit(c, q)).fold(0, |a, b| a | b)
    }

    fn apply_block(&self, m: &mut CMatrix, q: usize) {
        let masks = [self.copies_mask(q), self.copies_mask(q + 1)];
        let bits: Vec<usize> = (0..self.t).flat_map(|c| [self.bit(c, q), self.bit(c, q + 1)]).collect();
        dephase(m, &masks);
        for &b in &bits {
            hadamard_both_sides(m, b);
        }
        dephase(m, &masks);
        for &b in &bits {
            hadamard_both_sides(m, b);
        }
        let pairs: Vec<(usize, usize)> = (0..self.t).map(|c| (self.bit(c, q), self.bit(c, q + 1))).collect();
        cz_phase(m, &pairs);
    }

    /// Appends one layer with a fair-coin parity.
    pub fn step(&mut self) {
        let mut branches = [Parity::Even, Parity::Odd].map(|parity| {
            let mut m = self.choi.clone();
            for q in layer_pairs(self.n, parity) {
                self.apply_block(&mut m, q);
            }
            m
        });
        let [even, odd] = &mut branches;
        *even += &*odd;
        self.choi = std::mem::replace(even, CMatrix::zeros(0, 0)).unscale(2.0);
        self.layers += 1;
    }

    pub fn design_error(&self) -> Result<DesignError> {
        let d = 1usize << self.n;
        let big = (self.dim as f64).sqrt().round();
        let jh = haar_choi(d, self.t)?;
        Ok(DesignError {
            frobenius: big * (&self.choi - &jh).norm(),
            probe_trace: choi_trace_distance(&self.choi, &jh, d, self.t),
        })
    }
}

fn dephase(m: &mut CMatrix, masks: &[usize]) {
    let dim = m.nrows();
    m.as_mut_slice().par_chunks_mut(dim).enumerate().for_each(|(c, col)| {
        let cw: Vec<u32> = masks.iter().map(|&k| (c & k).count_ones()).collect();
        for (r, z) in col.iter_mut().enumerate() {
            if masks.iter().zip(&cw).any(|(&k, &w)| (r & k).count_ones() != w) {
                *z = c64(0.0, 0.0);
            }
        }
    });
}

/// `H_b m H_b` with `H_b` a Hadamard on index bit `b`.
fn hadamard_both_sides(m: &mut CMatrix, bit: usize) {
    let dim = m.nrows();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    m.as_mut_slice().par_chunks_mut(dim).for_each(|col| {
        for r in 0..dim {
            if r & bit == 0 {
                let (x, y) = (col[r], col[r | bit]);
                col[r] = (x + y) * s;
                col[r | bit] = (x - y) * s;
            }
        }
    });
    m.as_mut_slice().par_chunks_mut(2 * bit * dim).for_each(|block| {
        let (lo, hi) = block.split_at_mut(bit * dim);
        for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = (a + b) * s;
            *y = (a - b) * s;
        }
    });
}

fn cz_phase(m: &mut CMatrix, pairs: &[(usize, usize)]) {
    let dim = m.nrows();
    let sign = |x: usize| pairs.iter().filter(|&&(a, b)| x & a != 0 && x & b != 0).count() % 2 == 1;
    m.as_mut_slice().par_chunks_mut(dim).enumerate().for_each(|(c, col)| {
        let sc = sign(c);
        for (r, z) in col.iter_mut().enumerate() {
            if sign(r) != sc {
                *z = -*z;
            }
        }
    });
}
