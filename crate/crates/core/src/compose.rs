//! Geometric quantities built by chaining the primitive operators
//! (`deriv`, division by the arc element, normal projection) instead of the
//! closed-form expansions in [`crate::geometry`]. Used to cross-check them.

use alloc::vec::Vec;

use crate::curve::{
    deriv, deriv_field, dot, project_normal, unit_tangent, DiscreteCurve, ScalarField, VectorField,
};
use crate::error::Result;

fn divide_by(field: &VectorField, gamma: &[f64]) -> VectorField {
    let mut out = field.clone();
    for (i, g) in gamma.iter().enumerate() {
        out.at_mut(i).iter_mut().for_each(|v| *v /= g);
    }
    out
}

/// Arc-length derivative `d/ds = gamma^-1 d/dx` of a field on the curve.
pub fn d_ds(curve: &DiscreteCurve, field: &VectorField) -> Result<VectorField> {
    let gamma = deriv(curve, 1)?.norms();
    Ok(divide_by(&deriv_field(field, 1, curve.h())?, &gamma))
}

/// Normal connection `P_perp d/ds`.
pub fn covariant_ds(curve: &DiscreteCurve, field: &VectorField) -> Result<VectorField> {
    project_normal(curve, &d_ds(curve, field)?)
}

/// Curvature as the normal part of `d/ds (d/ds f)`.
pub fn curvature(curve: &DiscreteCurve) -> Result<VectorField> {
    let t = unit_tangent(curve)?;
    covariant_ds(curve, &t)
}

pub fn nabla_s_kappa(curve: &DiscreteCurve) -> Result<VectorField> {
    covariant_ds(curve, &curvature(curve)?)
}

pub fn nabla_s2_kappa(curve: &DiscreteCurve) -> Result<VectorField> {
    covariant_ds(curve, &nabla_s_kappa(curve)?)
}

/// `nabla_s^2 kappa + |kappa|^2 kappa / 2` from chained primitives.
pub fn elastic_gradient(curve: &DiscreteCurve) -> Result<VectorField> {
    let kappa = curvature(curve)?;
    let mut out = nabla_s2_kappa(curve)?;
    for i in 0..out.len() {
        let k = kappa.at(i);
        let s = 0.5 * dot(k, k);
        for (o, kc) in out.at_mut(i).iter_mut().zip(k) {
            *o += s * kc;
        }
    }
    Ok(out)
}

/// The three multiplier densities from composed fields.
pub fn lambda_densities(curve: &DiscreteCurve) -> Result<(ScalarField, ScalarField, ScalarField)> {
    let kappa = curvature(curve)?;
    let nk = covariant_ds(curve, &kappa)?;
    let k2 = kappa.dots(&kappa);
    let k4: Vec<f64> = k2.iter().map(|v| v * v).collect();
    Ok((k4, nk.dots(&nk), nk.dots(&kappa)))
}
