//! Distance to a constrained clamped elastica.

use crate::curve::{DiscreteCurve, VectorField};
use crate::error::{Error, Result};
use crate::geometry::GeometricFields;
use crate::multiplier::{l2_ds, lambda_direct_from, DEFAULT_EPS_ENERGY};

/// Residual of `grad E - lambda kappa = 0` at the best-fitting multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticaReport {
    /// Minimizer of `|grad E - lambda kappa|_{L2(ds)}` over `lambda`.
    pub lambda_star: f64,
    pub residual_field: VectorField,
    pub residual_l2: f64,
    pub residual_sup: f64,
}

pub fn residual_from(geo: &GeometricFields, eps_energy: f64) -> Result<ElasticaReport> {
    let lambda_star = lambda_direct_from(geo, eps_energy)?;
    let residual_field = geo.grad_e.axpy(-lambda_star, &geo.kappa);
    Ok(ElasticaReport {
        lambda_star,
        residual_l2: l2_ds(geo, &residual_field),
        residual_sup: residual_field.max_norm(),
        residual_field,
    })
}

pub fn residual(curve: &DiscreteCurve) -> Result<ElasticaReport> {
    residual_from(&GeometricFields::compute(curve)?, DEFAULT_EPS_ENERGY)
}

/// `residual_l2 <= tol`.
pub fn is_stationary(curve: &DiscreteCurve, tol: f64) -> Result<bool> {
    Ok(residual(curve)?.residual_l2 <= tol)
}

/// Largest admissible endpoint value (and one-sided first difference) of a test field.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// `int <kappa, u> ds` for a variation `u` vanishing to first order at both ends.
///
/// The endpoint check uses the undivided one-sided difference
/// `(-3 u_0 + 4 u_1 - u_2) / 2` (mirrored at the far end).
pub fn tangent_constraint(curve: &DiscreteCurve, u: &VectorField) -> Result<f64> {
    let geo = GeometricFields::compute(curve)?;
    tangent_constraint_from(&geo, u)
}

pub fn tangent_constraint_from(geo: &GeometricFields, u: &VectorField) -> Result<f64> {
    let n = geo.gamma.len();
    if u.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: u.len(),
        });
    }
    let ends = [(0usize, [0usize, 1, 2]), (1, [n - 1, n - 2, n - 3])];
    for (end, [i0, i1, i2]) in ends {
        let value = u.at(i0).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if value > BOUNDARY_TOL {
            return Err(Error::BoundaryViolation { end, value });
        }
        let slope = (0..u.dim)
            .map(|c| (0.5 * (-3.0 * u.at(i0)[c] + 4.0 * u.at(i1)[c] - u.at(i2)[c])).abs())
            .fold(0.0f64, f64::max);
        if slope > BOUNDARY_TOL {
            return Err(Error::BoundaryViolation { end, value: slope });
        }
    }
    Ok(geo.quad(&geo.kappa.dots(u)))
}
