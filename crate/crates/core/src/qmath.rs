//! Dense complex linear algebra and quantum-state primitives.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. The validated wrappers
//! [`Unitary`], [`PureState`] and [`DensityMatrix`] check their invariants
//! once at construction and are immutable afterwards.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, QR, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Max-entry tolerance on `U^dag U - I`.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Tolerance on state normalisation, trace and Hermiticity.
pub const STATE_TOL: f64 = 1e-10;
/// Smallest eigenvalue admitted in a density matrix.
pub const EIGEN_FLOOR: f64 = -1e-9;
/// Largest Hilbert-space dimension handled by the dense routines.
pub const MAX_DIM: usize = 4096;

const SCHUR_EPS: f64 = 1e-15;
const MAX_ITER: usize = 10_000;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for q in 0..bc {
                for p in 0..br {
                    out[(i * br + p, j * bc + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `max_ij |(U^dag U - I)_ij|`.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    let g = m.adjoint() * m;
    let mut worst = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// A square matrix verified unitary to within [`UNITARITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    m: CMatrix,
}

impl Unitary {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        if !all_finite(&m) {
            return Err(Error::NonFinite);
        }
        let deviation = unitarity_deviation(&m);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { m })
    }

    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        debug_assert!(unitarity_deviation(&m) <= 1e-8);
        Self { m }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            m: CMatrix::identity(d, d),
        }
    }

    pub fn diagonal_phases(angles: &[f64]) -> Self {
        let diag = CVector::from_iterator(angles.len(), angles.iter().map(|&a| C64::from_polar(1.0, a)));
        Self {
            m: CMatrix::from_diagonal(&diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn adjoint(&self) -> Unitary {
        Self { m: self.m.adjoint() }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Unitary) -> Result<Unitary> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::from_trusted(&self.m * &other.m))
    }

    pub fn kron(&self, other: &Unitary) -> Unitary {
        Self::from_trusted(kron(&self.m, &other.m))
    }

    pub fn with_phase(&self, phi: f64) -> Unitary {
        Self::from_trusted(&self.m * C64::from_polar(1.0, phi))
    }

    /// `U^{⊗t}`.
    pub fn tensor_power(&self, t: usize) -> Result<Unitary> {
        if t == 0 {
            return Err(Error::InvalidParameter("tensor power t must be >= 1".into()));
        }
        let dim = checked_pow(self.dim(), t)?;
        if dim > MAX_DIM {
            return Err(Error::GuardExceeded {
                what: "d^t",
                value: dim,
                limit: MAX_DIM,
            });
        }
        let mut out = self.m.clone();
        for _ in 1..t {
            out = kron(&out, &self.m);
        }
        Ok(Self::from_trusted(out))
    }

    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        check_dims(self.dim(), psi.dim())?;
        Ok(PureState {
            amps: &self.m * &psi.amps,
        })
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v <= 1 << 40)
            .ok_or(Error::GuardExceeded {
                what: "dimension",
                value: usize::MAX,
                limit: MAX_DIM,
            })?;
    }
    Ok(acc)
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A normalised state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVector,
}

impl PureState {
    pub fn new(amps: CVector) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { amps })
    }

    /// Rescales a nonzero vector onto the unit sphere.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState(
                "cannot normalise a zero or non-finite vector".into(),
            ));
        }
        Self::new(amps.unscale(norm))
    }

    pub fn basis(d: usize, index: usize) -> Self {
        assert!(index < d, "basis index out of range");
        let mut amps = CVector::zeros(d);
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            m: &self.amps * self.amps.adjoint(),
            pure: Some(self.amps.clone()),
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
///
/// States built from a [`PureState`] remember their vector, which enables the
/// `|<psi|phi>|` fidelity shortcut.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    m: CMatrix,
    pure: Option<CVector>,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidState("empty matrix".into()));
        }
        if !all_finite(&m) {
            return Err(Error::NonFinite);
        }
        let herm_dev = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_dev > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm_dev:.3e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = hermitian_eigenvalues(&m).into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < EIGEN_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { m, pure: None })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            m: CMatrix::identity(d, d).unscale(d as f64),
            pure: None,
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.density()
    }

    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self { m, pure: None }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// The state vector, when the state is known to be pure.
    pub fn pure_vector(&self) -> Option<&CVector> {
        self.pure.as_ref()
    }

    /// Drops the remembered state vector.
    pub fn without_pure_hint(mut self) -> Self {
        self.pure = None;
        self
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// `U rho U^dag`.
    pub fn conjugate(&self, u: &Unitary) -> Result<DensityMatrix> {
        check_dims(u.dim(), self.dim())?;
        let m = u.matrix() * &self.m * u.matrix().adjoint();
        let m = hermitize(&m);
        Ok(Self {
            m,
            pure: self.pure.as_ref().map(|v| u.matrix() * v),
        })
    }

    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev = hermitian_eigenvalues(&self.m);
        ev.sort_by(f64::total_cmp);
        ev
    }
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

/// Eigenvalues of a Hermitian matrix (only the lower triangle is read).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    m.symmetric_eigenvalues().iter().copied().collect()
}

/// Eigen-decomposition of a Hermitian matrix: `(values, vectors)` with
/// vectors stored column-wise.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let eig = SymmetricEigen::try_new(hermitize(m), f64::EPSILON, MAX_ITER).ok_or(Error::EigenFailure)?;
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Trace norm of a Hermitian matrix, `sum |lambda_i|`.
pub fn trace_norm_hermitian(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(&hermitize(m)).iter().map(|l| l.abs()).sum()
}

/// Eigenvalues below this are treated as zero when taking square roots.
const SQRT_CUTOFF: f64 = 1e-14;

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let scale = vals.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
    let roots: Vec<C64> = vals
        .iter()
        .map(|&v| {
            if v > SQRT_CUTOFF * scale {
                C64::new(v.sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let mut scaled = vecs.clone();
    for (j, r) in roots.iter().enumerate() {
        scaled.column_mut(j).scale_mut(r.re);
    }
    Ok(scaled * vecs.adjoint())
}

/// Uhlmann fidelity `Tr sqrt(sqrt(rho) sigma sqrt(rho))`.
///
/// Uses `|<psi|phi>|` when both states carry a pure-state vector; otherwise
/// the nuclear norm of `sqrt(rho) sqrt(sigma)`, whose singular values are
/// the square roots of the eigenvalues of `sqrt(rho) sigma sqrt(rho)`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    if let (Some(a), Some(b)) = (rho.pure_vector(), sigma.pure_vector()) {
        return Ok(a.dotc(b).norm().min(1.0));
    }
    fidelity_general(rho, sigma)
}

/// The general fidelity path, ignoring any pure-state hints.
pub fn fidelity_general(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let a = psd_sqrt(rho.matrix())?;
    let b = psd_sqrt(sigma.matrix())?;
    let svd = SVD::try_new(a * b, false, false, f64::EPSILON, MAX_ITER).ok_or(Error::EigenFailure)?;
    Ok(svd.singular_values.iter().sum::<f64>().clamp(0.0, 1.0))
}

pub fn fidelity_pure(psi: &PureState, phi: &PureState) -> Result<f64> {
    Ok(psi.inner(phi)?.norm().min(1.0))
}

/// `||rho - sigma||_1`.
pub fn trace_norm_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    Ok(trace_norm_hermitian(&(rho.matrix() - sigma.matrix())).min(2.0))
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Unitary {
    assert!(d >= 1, "dimension must be positive");
    let z = CMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    let qr = QR::new(z);
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let phase = if n > 0.0 { rjj / n } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Unitary::from_trusted(q)
}

/// Uniformly random point on the complex unit sphere.
pub fn haar_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v = CVector::from_fn(d, |_, _| complex_normal(rng));
        let n = v.norm();
        if n > 1e-150 {
            return PureState { amps: v.unscale(n) };
        }
    }
}

/// Eigenphases `alpha_j in [0, 2pi)` of a unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenAngles {
    angles: Vec<f64>,
}

/// Wraps any real angle into `[0, 2pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl EigenAngles {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidParameter("no eigen angles".into()));
        }
        if let Some(bad) = angles.iter().find(|a| !(a.is_finite() && (0.0..TAU).contains(*a))) {
            return Err(Error::InvalidParameter(format!("eigen angle {bad} outside [0, 2pi)")));
        }
        Ok(Self { angles })
    }

    /// Builds angles from arbitrary real phases, wrapping into `[0, 2pi)`.
    pub fn from_phases(phases: impl IntoIterator<Item = f64>) -> Result<Self> {
        Self::new(phases.into_iter().map(wrap_angle).collect())
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.angles.iter().map(|&a| C64::from_polar(1.0, a)).collect()
    }

    /// Angles of `V^{⊗t}` given these angles of `V`: all `t`-fold sums.
    pub fn tensor_power(&self, t: usize) -> Result<EigenAngles> {
        if t == 0 {
            return Err(Error::InvalidParameter("tensor power t must be >= 1".into()));
        }
        let total = checked_pow(self.dim(), t)?;
        if total > MAX_DIM {
            return Err(Error::GuardExceeded {
                what: "d^t",
                value: total,
                limit: MAX_DIM,
            });
        }
        let mut acc = vec![0.0f64];
        for _ in 0..t {
            acc = acc
                .iter()
                .flat_map(|&s| self.angles.iter().map(move |&a| s + a))
                .collect();
        }
        EigenAngles::from_phases(acc)
    }
}

/// Eigenphases together with the eigenbasis (columns).
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub angles: EigenAngles,
    pub basis: CMatrix,
}

impl UnitaryEigen {
    /// `V diag(e^{i alpha}) V^dag`.
    pub fn reconstruct(&self) -> CMatrix {
        let mut scaled = self.basis.clone();
        for (j, a) in self.angles.angles().iter().enumerate() {
            let phase = C64::from_polar(1.0, *a);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= phase;
            }
        }
        scaled * self.basis.adjoint()
    }
}

/// Eigenphases of a unitary via the complex Schur form, which is diagonal
/// for normal matrices.
pub fn eig_unitary(u: &Unitary) -> Result<EigenAngles> {
    Ok(eig_unitary_full(u)?.angles)
}

pub fn eig_unitary_full(u: &Unitary) -> Result<UnitaryEigen> {
    let d = u.dim();
    if d == 1 {
        let z = u.matrix()[(0, 0)];
        return Ok(UnitaryEigen {
            angles: EigenAngles::from_phases([z.arg()])?,
            basis: CMatrix::identity(1, 1),
        });
    }
    let schur = Schur::try_new(u.matrix().clone(), SCHUR_EPS, MAX_ITER).ok_or(Error::EigenFailure)?;
    let (q, t) = schur.unpack();
    let mut phases = Vec::with_capacity(d);
    for i in 0..d {
        let z = t[(i, i)];
        if !(z.re.is_finite() && z.im.is_finite()) || (z.norm() - 1.0).abs() > 1e-8 {
            return Err(Error::EigenFailure);
        }
        phases.push(z.arg());
    }
    Ok(UnitaryEigen {
        angles: EigenAngles::from_phases(phases)?,
        basis: q,
    })
}
