//! The length-preserving multiplier `lambda(f) = N(f) / (2 E(f))`.

use crate::curve::{DiscreteCurve, VectorField};
use crate::error::{Error, Result};
use crate::geometry::{lambda_densities_from, GeometricFields};

/// Default lower bound on the energy below which the multiplier is undefined.
pub const DEFAULT_EPS_ENERGY: f64 = 1e-10;

/// Both forms of the multiplier and the a-priori bound for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaReport {
    pub lambda_direct: f64,
    pub lambda_ibp: f64,
    /// Numerator `N(f)` of the integrated-by-parts form.
    pub numerator: f64,
    /// `2 E(f)`.
    pub energy_denominator: f64,
    pub bound_lhs: f64,
    pub bound_rhs: f64,
}

fn check_energy(energy: f64, eps_energy: f64) -> Result<()> {
    if !(energy > eps_energy) {
        return Err(Error::ZeroEnergy { energy });
    }
    Ok(())
}

/// `int <grad E, kappa> ds / int |kappa|^2 ds`.
pub fn lambda_direct_from(geo: &GeometricFields, eps_energy: f64) -> Result<f64> {
    check_energy(geo.energy, eps_energy)?;
    let num = geo.quad(&geo.grad_e.dots(&geo.kappa));
    Ok(num / (2.0 * geo.energy))
}

/// Numerator after integration by parts:
/// `<nabla_s kappa, kappa>|_0^1 - int |nabla_s kappa|^2 ds + 1/2 int |kappa|^4 ds`.
pub fn ibp_numerator_from(geo: &GeometricFields) -> f64 {
    let (k4, nk2, nkk) = lambda_densities_from(&geo.jet);
    let boundary = nkk[nkk.len() - 1] - nkk[0];
    boundary - geo.quad(&nk2) + 0.5 * geo.quad(&k4)
}

pub fn lambda_ibp_from(geo: &GeometricFields, eps_energy: f64) -> Result<f64> {
    check_energy(geo.energy, eps_energy)?;
    Ok(ibp_numerator_from(geo) / (2.0 * geo.energy))
}

/// Both sides of `|lambda| (ell - |p1 - p0|) <= 2 ell |v_perp|_{L1(ds)} + int |kappa|^2 ds + int |nabla_s kappa| ds`.
pub fn lambda_bound_from(
    geo: &GeometricFields,
    curve: &DiscreteCurve,
    lambda: f64,
    dt_perp: &VectorField,
) -> (f64, f64) {
    let b = curve.boundary();
    let lhs = lambda.abs() * (b.ell - b.chord());
    let vel_l1 = geo.quad(&dt_perp.norms());
    let k2 = geo.quad(&geo.kappa.dots(&geo.kappa));
    let nk_l1 = geo.quad(&geo.nabla_s_kappa.norms());
    (lhs, 2.0 * b.ell * vel_l1 + k2 + nk_l1)
}

pub fn lambda_direct(curve: &DiscreteCurve) -> Result<f64> {
    lambda_direct_from(&GeometricFields::compute(curve)?, DEFAULT_EPS_ENERGY)
}

/// Multiplier without fourth derivatives.
pub fn lambda_ibp(curve: &DiscreteCurve) -> Result<f64> {
    lambda_ibp_from(&GeometricFields::compute(curve)?, DEFAULT_EPS_ENERGY)
}

/// Bound evaluated with the integrated-by-parts multiplier.
pub fn lambda_bound(curve: &DiscreteCurve, dt_perp: &VectorField) -> Result<(f64, f64)> {
    let geo = GeometricFields::compute(curve)?;
    let lambda = lambda_ibp_from(&geo, DEFAULT_EPS_ENERGY)?;
    Ok(lambda_bound_from(&geo, curve, lambda, dt_perp))
}

/// Full report for a curve and a normal velocity field.
pub fn lambda_report(curve: &DiscreteCurve, dt_perp: &VectorField, eps_energy: f64) -> Result<LambdaReport> {
    let geo = GeometricFields::compute(curve)?;
    let lambda_direct = lambda_direct_from(&geo, eps_energy)?;
    let lambda_ibp = lambda_ibp_from(&geo, eps_energy)?;
    let (bound_lhs, bound_rhs) = lambda_bound_from(&geo, curve, lambda_ibp, dt_perp);
    Ok(LambdaReport {
        lambda_direct,
        lambda_ibp,
        numerator: ibp_numerator_from(&geo),
        energy_denominator: 2.0 * geo.energy,
        bound_lhs,
        bound_rhs,
    })
}

/// `|v|_{L2(ds)}` of a field on the curve.
pub fn l2_ds(geo: &GeometricFields, field: &VectorField) -> f64 {
    libm::sqrt(geo.quad(&field.dots(field)))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::BoundaryData;
    use crate::shapes::Arc;
    use alloc::vec;
    use alloc::vec::Vec;
    use core::f64::consts::PI;

    #[test]
    fn semicircle_half() {
        let c = Arc::semicircle(1.0).unwrap().sample(201).unwrap();
        assert!((lambda_direct(&c).unwrap() - 0.5).abs() < 5e-4);
        assert!((lambda_ibp(&c).unwrap() - 0.5).abs() < 5e-4);
        let r = lambda_report(&c, &VectorField::zeros(201, 2), DEFAULT_EPS_ENERGY).unwrap();
        assert!((r.energy_denominator - PI).abs() < 1e-3);
        assert!((r.numerator - PI / 2.0).abs() < 1e-3);
    }

    #[test]
    fn stationary_bound() {
        let c = Arc::semicircle(1.0).unwrap().sample(201).unwrap();
        let (lhs, rhs) = lambda_bound(&c, &VectorField::zeros(201, 2)).unwrap();
        assert!((lhs - 0.5 * (PI - 2.0)).abs() < 1e-3);
        assert!((rhs - PI).abs() < 1e-3);
        assert!(lhs <= rhs);
    }

    #[test]
    fn straight_curve_has_no_multiplier() {
        let n = 21;
        let nodes: Vec<f64> = (0..n).flat_map(|i| [i as f64 / (n - 1) as f64, 0.0]).collect();
        let b = BoundaryData::new(vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], 2.0).unwrap();
        let c = DiscreteCurve::new(nodes, b).unwrap();
        assert!(matches!(lambda_direct(&c), Err(Error::ZeroEnergy { .. })));
        assert!(matches!(lambda_ibp(&c), Err(Error::ZeroEnergy { .. })));
    }
}
