//! Security properties as experiments: uniqueness, robustness and collision
//! checks, the unknownness distinguishing game, the selective-forgery game,
//! and unitary noise with the robust-design bound.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{compile, qgen_seeded, rot_x, rot_z, QpufDescriptor};
use crate::design::{mean_and_variance, probe_trace_error, Ensemble, Member, Sampler};
use crate::error::{Error, Result};
use crate::metrics::{
    diamond_distance_unitary, diamond_from_range, helstrom_measurement, numerical_range_from_angles, p_distinguish,
};
use crate::qmath::{
    c64, checked_pow, eig_unitary, fidelity, haar_pure_state, haar_unitary, wrap_angle, CMatrix, CVector,
    DensityMatrix, PureState, Unitary, MAX_DIM,
};
use crate::seed::{child_rng, child_seed, TrialRng};

/// Slack allowed on fidelity comparisons in the robustness and collision
/// checks.
pub const FIDELITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub n: usize,
    pub k: usize,
    pub runs: usize,
    pub seed: u64,
    pub distances: Vec<f64>,
    pub min: f64,
    pub mean: f64,
    pub stddev: f64,
}

/// Seed of run `run` of the `(n, k)` uniqueness experiment under `master`.
pub fn uniqueness_run_seed(master: u64, n: usize, k: usize, run: usize) -> u64 {
    child_seed(child_seed(child_seed(master, n as u64), k as u64), run as u64)
}

/// Per run, two independent qgen instances and their diamond distance.
pub fn uniqueness_experiment(n: usize, k: usize, runs: usize, seed: u64) -> Result<UniquenessReport> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} outside [2, 8]")));
    }
    if k == 0 || runs == 0 {
        return Err(Error::InvalidParameter("need k >= 1 and runs >= 1".into()));
    }
    let distances: Vec<f64> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let s = uniqueness_run_seed(seed, n, k, r);
            let u0 = compile(&qgen_seeded(n, k, child_seed(s, 0))?)?;
            let u1 = compile(&qgen_seeded(n, k, child_seed(s, 1))?)?;
            diamond_distance_unitary(&u0, &u1)
        })
        .collect::<Result<_>>()?;
    let (mean, var) = mean_and_variance(&distances);
    Ok(UniquenessReport {
        n,
        k,
        runs,
        seed,
        min: distances.iter().copied().fold(f64::INFINITY, f64::min),
        mean,
        stddev: var.sqrt(),
        distances,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub f_in: f64,
    pub f_out: f64,
    pub applicable: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub threshold: f64,
    pub pairs: Vec<PairCheck>,
    pub applicable: usize,
    pub all_passed: bool,
    /// Largest `|F_in - F_out|` over all pairs.
    pub max_fidelity_change: f64,
}

fn fidelity_check(
    u: &Unitary,
    pairs: &[(DensityMatrix, DensityMatrix)],
    threshold: f64,
    applies: impl Fn(f64) -> bool + Sync,
    holds: impl Fn(f64) -> bool + Sync,
) -> Result<CheckReport> {
    let checks: Vec<PairCheck> = pairs
        .par_iter()
        .map(|(rho, sigma)| {
            let f_in = fidelity(rho, sigma)?;
            let f_out = fidelity(&rho.conjugate(u)?, &sigma.conjugate(u)?)?;
            let applicable = applies(f_in);
            Ok(PairCheck {
                f_in,
                f_out,
                applicable,
                passed: !applicable || holds(f_out),
            })
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport {
        threshold,
        applicable: checks.iter().filter(|c| c.applicable).count(),
        all_passed: checks.iter().all(|c| c.passed),
        max_fidelity_change: checks.iter().map(|c| (c.f_in - c.f_out).abs()).fold(0.0, f64::max),
        pairs: checks,
    })
}

/// Pairs with `F_in >= 1 - delta_r` must keep `F_out >= 1 - delta_r`.
pub fn robustness_check(u: &Unitary, pairs: &[(DensityMatrix, DensityMatrix)], delta_r: f64) -> Result<CheckReport> {
    let floor = 1.0 - delta_r;
    fidelity_check(
        u,
        pairs,
        delta_r,
        |f| f >= floor - FIDELITY_SLACK,
        |f| f >= floor - FIDELITY_SLACK,
    )
}

/// Pairs with `F_in <= 1 - delta_c` must keep `F_out <= 1 - delta_c`.
pub fn collision_check(u: &Unitary, pairs: &[(DensityMatrix, DensityMatrix)], delta_c: f64) -> Result<CheckReport> {
    let ceil = 1.0 - delta_c;
    fidelity_check(
        u,
        pairs,
        delta_c,
        |f| f <= ceil + FIDELITY_SLACK,
        |f| f <= ceil + FIDELITY_SLACK,
    )
}

/// Which distribution the challenger drew from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Design,
    Haar,
}

/// Outcome of a distinguishing game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub adversary: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean over trials of the Helstrom value of the two m-copy hypotheses.
    pub bound: f64,
    /// Mean trace distance between the hypotheses; the unknownness ceiling
    /// is `1/2 (1 + epsilon/2)`.
    pub epsilon: f64,
    pub ceiling: f64,
    /// Binomial standard deviation of the success rate at `bound`.
    pub sigma: f64,
    pub seed: u64,
}

/// A strategy that sees `m` copies of `U|phi>` and the challenge `|phi>`.
/// Simulated adversaries only act on the copies through measurements.
pub trait Distinguisher: Sync {
    fn name(&self) -> &str;
    fn guess(&self, copies: &PureState, challenge: &PureState, rng: &mut TrialRng) -> Result<Hypothesis>;
}

/// Ignores its input.
pub struct RandomGuess;

impl Distinguisher for RandomGuess {
    fn name(&self) -> &str {
        "random-guess"
    }

    fn guess(&self, _: &PureState, _: &PureState, rng: &mut TrialRng) -> Result<Hypothesis> {
        Ok(if rng.random_bool(0.5) {
            Hypothesis::Design
        } else {
            Hypothesis::Haar
        })
    }
}

/// The m-copy states seen under each hypothesis.
pub struct HypothesisModel {
    m: usize,
    d: usize,
    kind: ModelKind,
    haar: DensityMatrix,
}

enum ModelKind {
    Fixed(Unitary),
    Haar,
    Samples(Vec<Unitary>),
}

/// `Π_sym / dim Sym^m` on `(C^d)^{⊗m}`: the m-copy state of a Haar-random
/// unitary applied to any fixed pure state.
pub fn haar_copies_state(d: usize, m: usize) -> Result<DensityMatrix> {
    let big = copies_dim(d, m)?;
    let mut proj = CMatrix::zeros(big, big);
    let perms = permutations(m);
    let w = 1.0 / perms.len() as f64;
    for perm in &perms {
        for idx in 0..big {
            let digits = to_digits(idx, d, m);
            let permuted: Vec<usize> = perm.iter().map(|&p| digits[p]).collect();
            proj[(from_digits(&permuted, d), idx)] += c64(w, 0.0);
        }
    }
    let tr = proj.trace().re;
    Ok(DensityMatrix::from_trusted(proj.unscale(tr)))
}

fn copies_dim(d: usize, m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one copy".into()));
    }
    let big = checked_pow(d, m)?;
    if big > MAX_DIM {
        return Err(Error::GuardExceeded {
            what: "d^m",
            value: big,
            limit: MAX_DIM,
        });
    }
    Ok(big)
}

fn to_digits(mut x: usize, d: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = x % d;
        x /= d;
    }
    out
}

fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

fn copies(psi: &PureState, m: usize) -> PureState {
    (1..m).fold(psi.clone(), |acc, _| acc.tensor(psi))
}

impl HypothesisModel {
    /// Fixed samplers give the exact pure state, Haar samplers the exact
    /// symmetric state, anything else a Monte Carlo average over `budget`
    /// draws under `seed`.
    pub fn new(sampler: &Sampler, m: usize, budget: usize, seed: u64) -> Result<Self> {
        let d = sampler.dim();
        let haar = haar_copies_state(d, m)?;
        let kind = match sampler {
            Sampler::Fixed(u) => ModelKind::Fixed(u.clone()),
            Sampler::Haar { .. } => ModelKind::Haar,
            Sampler::Qgen { .. } => {
                if budget == 0 {
                    return Err(Error::EmptyEnsemble);
                }
                ModelKind::Samples(sampler.draw_range(seed, 0, budget)?)
            }
        };
        Ok(Self { m, d, kind, haar })
    }

    pub fn haar_state(&self) -> &DensityMatrix {
        &self.haar
    }

    pub fn design_state(&self, phi: &PureState) -> Result<DensityMatrix> {
        match &self.kind {
            ModelKind::Fixed(u) => Ok(copies(&u.apply(phi)?, self.m).density()),
            ModelKind::Haar => Ok(self.haar.clone()),
            ModelKind::Samples(us) => {
                let big = copies_dim(self.d, self.m)?;
                let mut acc = CMatrix::zeros(big, big);
                for u in us {
                    let v = copies(&u.apply(phi)?, self.m);
                    let a = v.amplitudes();
                    acc += a * a.adjoint();
                }
                Ok(DensityMatrix::from_trusted(crate::qmath::hermitize(
                    &acc.unscale(us.len() as f64),
                )))
            }
        }
    }
}

/// Performs the Helstrom measurement for its model of the two hypotheses.
pub struct HelstromDistinguisher {
    model: HypothesisModel,
}

impl HelstromDistinguisher {
    pub fn new(model: HypothesisModel) -> Self {
        Self { model }
    }
}

impl Distinguisher for HelstromDistinguisher {
    fn name(&self) -> &str {
        "helstrom"
    }

    fn guess(&self, copies: &PureState, challenge: &PureState, rng: &mut TrialRng) -> Result<Hypothesis> {
        let rho = self.model.design_state(challenge)?;
        let (proj, _) = helstrom_measurement(&rho, self.model.haar_state())?;
        let a = copies.amplitudes();
        let p = (a.adjoint() * &proj * a)[(0, 0)].re.clamp(0.0, 1.0);
        Ok(if rng.random::<f64>() < p {
            Hypothesis::Design
        } else {
            Hypothesis::Haar
        })
    }
}

/// Per trial: a fair coin picks the sampler or Haar; the adversary receives
/// `m` copies of `U|phi>` for a fresh Haar challenge `|phi>`.
pub fn unknownness_game(
    sampler: &Sampler,
    m: usize,
    trials: usize,
    adversary: &dyn Distinguisher,
    seed: u64,
    model_budget: usize,
) -> Result<GameResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let d = sampler.dim();
    copies_dim(d, m)?;
    let model = HypothesisModel::new(sampler, m, model_budget, child_seed(seed, u64::MAX))?;
    let outcomes: Vec<(bool, f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(seed, i);
            let truth = if rng.random_bool(0.5) {
                Hypothesis::Design
            } else {
                Hypothesis::Haar
            };
            let u = match truth {
                Hypothesis::Design => sampler.draw(child_seed(seed, i), 0)?,
                Hypothesis::Haar => haar_unitary(d, &mut rng),
            };
            let phi = haar_pure_state(d, &mut rng);
            let state = copies(&u.apply(&phi)?, m);
            let rho = model.design_state(&phi)?;
            let bound = p_distinguish(&rho, model.haar_state())?;
            let mut adv_rng = child_rng(child_seed(seed, i), 1);
            let guess = adversary.guess(&state, &phi, &mut adv_rng)?;
            Ok((guess == truth, bound, 4.0 * (bound - 0.5)))
        })
        .collect::<Result<_>>()?;
    let successes = outcomes.iter().filter(|o| o.0).count();
    let bounds: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
    let eps: Vec<f64> = outcomes.iter().map(|o| o.2).collect();
    let bound = mean_and_variance(&bounds).0;
    let epsilon = mean_and_variance(&eps).0;
    Ok(GameResult {
        adversary: adversary.name().to_string(),
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        bound,
        epsilon,
        ceiling: 0.5 * (1.0 + 0.5 * epsilon),
        sigma: (bound * (1.0 - bound) / trials as f64).sqrt(),
        seed,
    })
}

/// A challenge with its true response.
#[derive(Debug, Clone)]
pub struct Crp {
    pub challenge: PureState,
    pub response: PureState,
}

/// A strategy that answers a fresh challenge given observed CRPs.
pub trait Forger: Sync {
    fn name(&self) -> &str;
    fn forge(&self, crps: &[Crp], challenge: &PureState, rng: &mut TrialRng) -> Result<PureState>;
}

/// Replays the challenge.
pub struct IdentityForger;

impl Forger for IdentityForger {
    fn name(&self) -> &str {
        "identity"
    }

    fn forge(&self, _: &[Crp], challenge: &PureState, _: &mut TrialRng) -> Result<PureState> {
        Ok(challenge.clone())
    }
}

/// Applies a fresh Haar-random unitary to the challenge.
pub struct RandomUnitaryForger;

impl Forger for RandomUnitaryForger {
    fn name(&self) -> &str {
        "random-unitary"
    }

    fn forge(&self, _: &[Crp], challenge: &PureState, rng: &mut TrialRng) -> Result<PureState> {
        haar_unitary(challenge.dim(), rng).apply(challenge)
    }
}

/// Holds the descriptor and applies the true unitary.
pub struct ExactCloneForger {
    u: Unitary,
}

impl ExactCloneForger {
    pub fn new(desc: &QpufDescriptor) -> Result<Self> {
        Ok(Self { u: compile(desc)? })
    }
}

impl Forger for ExactCloneForger {
    fn name(&self) -> &str {
        "exact-clone"
    }

    fn forge(&self, _: &[Crp], challenge: &PureState, _: &mut TrialRng) -> Result<PureState> {
        self.u.apply(challenge)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForgeryResult {
    pub adversary: String,
    pub trials: usize,
    pub num_crps: usize,
    /// Mean of `F(response, true response)^2`.
    pub mean_fidelity: f64,
    pub std_error: f64,
    /// Haar-challenge average of `|<phi|U|phi>|^2`, the score of replaying
    /// the challenge.
    pub identity_baseline: f64,
    pub seed: u64,
}

/// `(d + |Tr U|^2) / (d (d + 1))`.
pub fn haar_average_overlap(u: &Unitary) -> f64 {
    let d = u.dim() as f64;
    (d + u.matrix().trace().norm_sqr()) / (d * (d + 1.0))
}

pub fn forgery_game(
    desc: &QpufDescriptor,
    num_crps: usize,
    trials: usize,
    adversary: &dyn Forger,
    seed: u64,
) -> Result<ForgeryResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let u = compile(desc)?;
    let d = u.dim();
    let scores: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(seed, i);
            let crps: Vec<Crp> = (0..num_crps)
                .map(|_| {
                    let challenge = haar_pure_state(d, &mut rng);
                    let response = u.apply(&challenge)?;
                    Ok(Crp { challenge, response })
                })
                .collect::<Result<_>>()?;
            let challenge = haar_pure_state(d, &mut rng);
            let truth = u.apply(&challenge)?;
            let mut adv_rng = child_rng(child_seed(seed, i), 1);
            let answer = adversary.forge(&crps, &challenge, &mut adv_rng)?;
            Ok(answer.inner(&truth)?.norm_sqr().min(1.0))
        })
        .collect::<Result<_>>()?;
    let (mean, var) = mean_and_variance(&scores);
    Ok(ForgeryResult {
        adversary: adversary.name().to_string(),
        trials,
        num_crps,
        mean_fidelity: mean,
        std_error: (var / trials as f64).sqrt(),
        identity_baseline: haar_average_overlap(&u),
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    AngleJitter,
}

/// Independent Gaussian jitter of standard deviation `sigma` on every gate
/// angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryNoiseModel {
    pub kind: NoiseKind,
    pub sigma: f64,
}

impl UnitaryNoiseModel {
    pub fn angle_jitter(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma = {sigma} must be finite and >= 0"
            )));
        }
        Ok(Self {
            kind: NoiseKind::AngleJitter,
            sigma,
        })
    }

    fn normal(&self) -> Normal<f64> {
        Normal::new(0.0, self.sigma).expect("sigma validated")
    }
}

/// Every angle `a` becomes `(a + N(0, sigma^2)) mod 2pi`; bits are kept.
pub fn apply_noise<R: Rng + ?Sized>(
    desc: &QpufDescriptor,
    model: &UnitaryNoiseModel,
    rng: &mut R,
) -> Result<QpufDescriptor> {
    let normal = model.normal();
    let mut out = desc.clone();
    for b in out.blocks_mut() {
        for a in [&mut b.alpha, &mut b.beta, &mut b.gamma, &mut b.delta] {
            *a = wrap_angle(*a + normal.sample(rng));
        }
    }
    out.validate()?;
    Ok(out)
}

/// Jitter on a layer of zero-angle `Rx Rz` gates on every qubit, for
/// unitaries that come without a gate description.
pub fn jitter_layer<R: Rng + ?Sized>(n: usize, model: &UnitaryNoiseModel, rng: &mut R) -> Unitary {
    let normal = model.normal();
    let mut m = CMatrix::identity(1, 1);
    for _ in 0..n {
        let x = normal.sample(rng);
        let z = normal.sample(rng);
        let g = rot_x(x).matrix() * rot_z(z).matrix();
        m = crate::qmath::kron(&m, &g);
    }
    Unitary::new(m).expect("product of rotations")
}

/// Exact `||ad_{U^{⊗t}} - ad_{U'^{⊗t}}||_⋄`, from t-fold sums of the
/// eigen angles of `U† U'`.
pub fn noise_strength(u: &Unitary, u_noisy: &Unitary, t: usize) -> Result<f64> {
    let w = u.adjoint().mul(u_noisy)?;
    let angles = eig_unitary(&w)?.tensor_power(t)?;
    if angles.dim() < 2 {
        return Ok(0.0);
    }
    Ok(diamond_from_range(&numerical_range_from_angles(&angles)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseTheoremReport {
    pub t: usize,
    pub sigma: f64,
    /// Probe-trace design error of the clean ensemble.
    pub epsilon: f64,
    /// Largest per-member noise strength.
    pub epsilon_t: f64,
    /// Probe-trace design error of the noisy ensemble.
    pub epsilon_noisy: f64,
    pub tolerance: f64,
    pub holds: bool,
    /// The bound only says something when `epsilon + epsilon_t <= 1`.
    pub meaningful: bool,
}

/// Noisy counterpart of every member, under the noise stream `noise_seed`.
fn noisy_members(e: &Ensemble, model: &UnitaryNoiseModel, noise_seed: u64) -> Result<(Vec<Member>, Vec<Member>)> {
    let (clean, descs): (Vec<Member>, Option<Vec<QpufDescriptor>>) = match e {
        Ensemble::Explicit(m) => (m.clone(), None),
        Ensemble::Generative {
            sampler: Sampler::Qgen { n, k },
            budget,
            seed,
        } => {
            let descs: Vec<QpufDescriptor> = (0..*budget as u64)
                .into_par_iter()
                .map(|i| qgen_seeded(*n, *k, child_seed(*seed, i)))
                .collect::<Result<_>>()?;
            let p = 1.0 / *budget as f64;
            let clean = descs
                .par_iter()
                .map(|d| Ok(Member { p, u: compile(d)? }))
                .collect::<Result<_>>()?;
            (clean, Some(descs))
        }
        Ensemble::Generative { sampler, budget, seed } => {
            let p = 1.0 / *budget as f64;
            let us = sampler.draw_range(*seed, 0, *budget)?;
            (us.into_iter().map(|u| Member { p, u }).collect(), None)
        }
    };
    let d = clean[0].u.dim();
    let noisy = match descs {
        Some(descs) => descs
            .par_iter()
            .zip(&clean)
            .enumerate()
            .map(|(i, (desc, m))| {
                let nd = apply_noise(desc, model, &mut child_rng(noise_seed, i as u64))?;
                Ok(Member {
                    p: m.p,
                    u: compile(&nd)?,
                })
            })
            .collect::<Result<_>>()?,
        None => {
            if !d.is_power_of_two() {
                return Err(Error::InvalidParameter(format!("jitter layer needs d = 2^n, got {d}")));
            }
            let n = d.trailing_zeros() as usize;
            clean
                .par_iter()
                .enumerate()
                .map(|(i, m)| {
                    let j = jitter_layer(n, model, &mut child_rng(noise_seed, i as u64));
                    Ok(Member {
                        p: m.p,
                        u: j.mul(&m.u)?,
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    Ok((clean, noisy))
}

/// Measures `epsilon`, `epsilon_t` and the noisy design error, and checks
/// `epsilon' <= epsilon + epsilon_t + tolerance`.
pub fn noise_theorem_check(
    e: &Ensemble,
    model: &UnitaryNoiseModel,
    t: usize,
    noise_seed: u64,
    tolerance: f64,
) -> Result<NoiseTheoremReport> {
    let (clean, noisy) = noisy_members(e, model, noise_seed)?;
    let epsilon = probe_trace_error(&Ensemble::Explicit(clean.clone()), t)?;
    let epsilon_noisy = probe_trace_error(&Ensemble::Explicit(noisy.clone()), t)?;
    let strengths: Vec<f64> = clean
        .par_iter()
        .zip(&noisy)
        .map(|(a, b)| noise_strength(&a.u, &b.u, t))
        .collect::<Result<_>>()?;
    let epsilon_t = strengths.iter().copied().fold(0.0, f64::max);
    Ok(NoiseTheoremReport {
        t,
        sigma: model.sigma,
        epsilon,
        epsilon_t,
        epsilon_noisy,
        tolerance,
        holds: epsilon_noisy <= epsilon + epsilon_t + tolerance,
        meaningful: epsilon + epsilon_t <= 1.0,
    })
}

/// One line of a CRP store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrpRecord {
    pub challenge: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub response: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub response_dm: Option<Vec<Vec<[f64; 2]>>>,
    pub n_qubits: usize,
}

fn amplitudes_to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn pairs_to_state(pairs: &[[f64; 2]]) -> Result<PureState> {
    PureState::new(CVector::from_iterator(
        pairs.len(),
        pairs.iter().map(|p| c64(p[0], p[1])),
    ))
}

impl CrpRecord {
    pub fn pure(challenge: &PureState, response: &PureState) -> Result<Self> {
        let d = challenge.dim();
        if !d.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("dimension {d} is not a power of two")));
        }
        Ok(Self {
            challenge: amplitudes_to_pairs(challenge.amplitudes()),
            response: Some(amplitudes_to_pairs(response.amplitudes())),
            response_dm: None,
            n_qubits: d.trailing_zeros() as usize,
        })
    }

    pub fn mixed(challenge: &PureState, response: &DensityMatrix) -> Result<Self> {
        let mut rec = Self::pure(challenge, challenge)?;
        let m = response.matrix();
        rec.response = None;
        rec.response_dm = Some(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        );
        Ok(rec)
    }
}
