//! Distinguishability of unitaries and states: the numerical-range minimum,
//! the closed-form diamond distance between unitary channels, and the
//! Helstrom success probability.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{check_dims, eig_unitary, hermitian_eigen, hermitize, CMatrix, DensityMatrix, EigenAngles, Unitary};

/// Tolerance used when comparing circular gaps against `pi`.
pub const GAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericalRangeResult {
    /// `min |<phi|U|phi>|` over unit vectors.
    pub delta: f64,
    /// Length of the smallest arc containing every eigenvalue.
    pub arc_theta: f64,
    pub origin_enclosed: bool,
}

/// Smallest arc (length) covering all angles on the circle.
pub fn smallest_covering_arc(angles: &[f64]) -> f64 {
    let mut sorted = angles.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut max_gap = sorted[0] + TAU - sorted[sorted.len() - 1];
    for w in sorted.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    (TAU - max_gap).clamp(0.0, TAU)
}

/// Numerical-range minimum from eigen angles alone.
pub fn numerical_range_from_angles(angles: &EigenAngles) -> NumericalRangeResult {
    let arc = smallest_covering_arc(angles.angles());
    if arc <= PI - GAP_TOL {
        NumericalRangeResult {
            delta: (arc / 2.0).cos(),
            arc_theta: arc,
            origin_enclosed: false,
        }
    } else {
        // an arc of exactly pi puts the origin on the hull boundary
        NumericalRangeResult {
            delta: 0.0,
            arc_theta: arc,
            origin_enclosed: true,
        }
    }
}

pub fn numerical_range_min(u: &Unitary) -> Result<NumericalRangeResult> {
    if u.dim() < 2 {
        return Err(Error::InvalidParameter("numerical range needs d >= 2".into()));
    }
    Ok(numerical_range_from_angles(&eig_unitary(u)?))
}

/// Diamond distance from the numerical range of `U0^dag U1`.
/// `2 sin(theta/2)` equals `2 sqrt(1 - delta^2)` and keeps precision near 0.
pub fn diamond_from_range(r: &NumericalRangeResult) -> f64 {
    if r.origin_enclosed {
        2.0
    } else {
        (2.0 * (r.arc_theta / 2.0).sin()).clamp(0.0, 2.0)
    }
}

pub fn diamond_distance_unitary(u0: &Unitary, u1: &Unitary) -> Result<f64> {
    check_dims(u0.dim(), u1.dim())?;
    let w = u0.adjoint().mul(u1)?;
    Ok(diamond_from_range(&numerical_range_min(&w)?))
}

/// Helstrom success probability for two equiprobable hypotheses.
pub fn p_distinguish(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    Ok(helstrom_measurement(rho1, rho2)?.1)
}

/// Projector onto the positive eigenspace of `rho1 - rho2` (outcome
/// "rho1") and the success probability it achieves.
pub fn helstrom_measurement(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<(CMatrix, f64)> {
    check_dims(rho1.dim(), rho2.dim())?;
    let diff = hermitize(&(rho1.matrix() - rho2.matrix()));
    let (vals, vecs) = hermitian_eigen(&diff)?;
    let d = diff.nrows();
    let mut proj = CMatrix::zeros(d, d);
    let mut positive = 0.0;
    for (j, &l) in vals.iter().enumerate() {
        if l > 0.0 {
            let v = vecs.column(j);
            proj += v * v.adjoint();
            positive += l;
        }
    }
    Ok((proj, (0.5 + 0.5 * positive).clamp(0.5, 1.0)))
}
