//! Sampled open curves on the uniform grid `x_i = i / (n - 1)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stencil;

/// Minimum node count: the widest one-sided stencil (fourth order) spans six points.
pub const MIN_NODES: usize = 7;

/// Default immersion threshold on the arc element.
pub const DEFAULT_GAMMA_MIN: f64 = 1e-8;

const UNIT_TOL: f64 = 1e-12;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Clamped boundary data: endpoint positions, unit tangents and the prescribed length.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
    pub tau0: Vec<f64>,
    pub tau1: Vec<f64>,
    pub ell: f64,
}

impl BoundaryData {
    /// Checks dimensions, unit tangents and `ell > 0`.
    ///
    /// The strict chord condition `|p1 - p0| < ell` is reported by
    /// [`BoundaryData::is_admissible`] rather than enforced here, so that
    /// inadmissible data can still be built and diagnosed.
    pub fn new(p0: Vec<f64>, p1: Vec<f64>, tau0: Vec<f64>, tau1: Vec<f64>, ell: f64) -> Result<Self> {
        let d = p0.len();
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if p1.len() != d || tau0.len() != d || tau1.len() != d {
            return Err(Error::InvalidBoundary("components disagree in dimension"));
        }
        if (norm(&tau0) - 1.0).abs() > UNIT_TOL || (norm(&tau1) - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidBoundary("tangents must be unit vectors"));
        }
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::InvalidBoundary("prescribed length must be positive"));
        }
        Ok(BoundaryData {
            p0,
            p1,
            tau0,
            tau1,
            ell,
        })
    }

    pub fn dim(&self) -> usize {
        self.p0.len()
    }

    /// Distance between the clamped endpoints.
    pub fn chord(&self) -> f64 {
        let diff: Vec<f64> = self.p1.iter().zip(&self.p0).map(|(a, b)| a - b).collect();
        norm(&diff)
    }

    /// `|p1 - p0| < ell`: the prescribed length rules out a straight segment.
    pub fn is_admissible(&self) -> bool {
        self.chord() < self.ell
    }
}

/// Vector field along a curve, node-major (`values[i * dim + c]`).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl VectorField {
    pub fn zeros(n: usize, dim: usize) -> Self {
        VectorField {
            dim,
            values: vec![0.0; n * dim],
        }
    }

    pub fn from_values(values: Vec<f64>, dim: usize) -> Self {
        VectorField { dim, values }
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn at_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Pointwise Euclidean norms.
    pub fn norms(&self) -> Vec<f64> {
        (0..self.len()).map(|i| norm(self.at(i))).collect()
    }

    /// Pointwise inner products with another field.
    pub fn dots(&self, other: &VectorField) -> Vec<f64> {
        (0..self.len()).map(|i| dot(self.at(i), other.at(i))).collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &VectorField) -> VectorField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + s * b)
            .collect();
        VectorField {
            dim: self.dim,
            values,
        }
    }

    pub fn scaled(&self, s: f64) -> VectorField {
        VectorField {
            dim: self.dim,
            values: self.values.iter().map(|v| s * v).collect(),
        }
    }
}

/// Scalar field along a curve.
pub type ScalarField = Vec<f64>;

/// Immersed open curve sampled on the uniform parameter grid of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    nodes: Vec<f64>,
    dim: usize,
    boundary: BoundaryData,
}

impl DiscreteCurve {
    /// Builds a curve from node-major coordinates.
    ///
    /// Requires at least [`MIN_NODES`] nodes and endpoints equal to the clamped positions.
    pub fn new(nodes: Vec<f64>, boundary: BoundaryData) -> Result<Self> {
        let dim = boundary.dim();
        if nodes.len() % dim != 0 {
            return Err(Error::LengthMismatch {
                expected: (nodes.len() / dim + 1) * dim,
                found: nodes.len(),
            });
        }
        let n = nodes.len() / dim;
        if n < MIN_NODES {
            return Err(Error::TooFewNodes {
                nodes: n,
                required: MIN_NODES,
            });
        }
        if nodes.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if nodes[..dim] != boundary.p0[..] {
            return Err(Error::EndpointMismatch { end: 0 });
        }
        if nodes[(n - 1) * dim..] != boundary.p1[..] {
            return Err(Error::EndpointMismatch { end: 1 });
        }
        Ok(DiscreteCurve {
            nodes,
            dim,
            boundary,
        })
    }

    /// Builds a curve and overwrites its endpoints with the clamped positions.
    pub fn with_clamped_ends(mut nodes: Vec<f64>, boundary: BoundaryData) -> Result<Self> {
        let dim = boundary.dim();
        if nodes.len() >= 2 * dim {
            let n = nodes.len() / dim;
            nodes[..dim].copy_from_slice(&boundary.p0);
            nodes[(n - 1) * dim..n * dim].copy_from_slice(&boundary.p1);
        }
        Self::new(nodes, boundary)
    }

    pub fn len(&self) -> usize {
        self.nodes.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Grid spacing `1 / (n - 1)`.
    pub fn h(&self) -> f64 {
        1.0 / (self.len() - 1) as f64
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    pub fn into_nodes(self) -> Vec<f64> {
        self.nodes
    }

    /// Parameter value of node `i`.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    /// Positions as a field (handy for pointwise arithmetic).
    pub fn as_field(&self) -> VectorField {
        VectorField::from_values(self.nodes.clone(), self.dim)
    }

    fn check_aligned(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }
}

/// Second-order finite-difference approximation of `d^k f / dx^k`, `k` in `1..=4`.
pub fn deriv(curve: &DiscreteCurve, order: usize) -> Result<VectorField> {
    deriv_field(&curve.as_field(), order, curve.h())
}

/// Same stencils applied to an arbitrary vector field on the grid.
pub fn deriv_field(field: &VectorField, order: usize, h: f64) -> Result<VectorField> {
    let values = stencil::derivative(&field.values, field.dim, order, h)?;
    Ok(VectorField::from_values(values, field.dim))
}

/// Checks every arc element against `gamma_min`.
pub(crate) fn check_gamma(gamma: &[f64], gamma_min: f64) -> Result<()> {
    match gamma
        .iter()
        .enumerate()
        .find(|(_, g)| !(**g > gamma_min))
    {
        Some((node, &g)) => Err(Error::DegenerateCurve { node, gamma: g }),
        None => Ok(()),
    }
}

/// Arc element `|df/dx|` with the default immersion threshold.
pub fn arc_element(curve: &DiscreteCurve) -> Result<ScalarField> {
    arc_element_with(curve, DEFAULT_GAMMA_MIN)
}

pub fn arc_element_with(curve: &DiscreteCurve, gamma_min: f64) -> Result<ScalarField> {
    let gamma = deriv(curve, 1)?.norms();
    check_gamma(&gamma, gamma_min)?;
    Ok(gamma)
}

/// Trapezoid weights of the grid (`h/2` at the ends, `h` inside).
pub(crate) fn trapezoid_weight(i: usize, n: usize, h: f64) -> f64 {
    if i == 0 || i + 1 == n {
        0.5 * h
    } else {
        h
    }
}

/// Trapezoid rule for `int g(x) * gamma(x) dx` given the arc element directly.
pub fn quad_with_gamma(g: &[f64], gamma: &[f64], h: f64) -> f64 {
    let n = g.len();
    g.iter()
        .zip(gamma)
        .enumerate()
        .map(|(i, (gi, ga))| trapezoid_weight(i, n, h) * gi * ga)
        .sum()
}

/// Trapezoid rule in the parameter measure `dx`.
pub fn quad_dx(g: &[f64], h: f64) -> f64 {
    let n = g.len();
    g.iter()
        .enumerate()
        .map(|(i, gi)| trapezoid_weight(i, n, h) * gi)
        .sum()
}

/// `int g ds` by the trapezoid rule with arc-length weights.
pub fn quad_ds(curve: &DiscreteCurve, g: &[f64]) -> Result<f64> {
    curve.check_aligned(g.len())?;
    let gamma = deriv(curve, 1)?.norms();
    Ok(quad_with_gamma(g, &gamma, curve.h()))
}

/// Unit tangent `df/ds` at every node.
pub fn unit_tangent(curve: &DiscreteCurve) -> Result<VectorField> {
    let mut d1 = deriv(curve, 1)?;
    let gamma = d1.norms();
    check_gamma(&gamma, DEFAULT_GAMMA_MIN)?;
    for (i, g) in gamma.iter().enumerate() {
        for v in d1.at_mut(i) {
            *v /= g;
        }
    }
    Ok(d1)
}

/// Removes the component along a pointwise unit tangent field.
pub(crate) fn project_with_tangent(field: &VectorField, tangent: &VectorField) -> VectorField {
    let mut out = field.clone();
    for i in 0..field.len() {
        let t = tangent.at(i);
        let s = dot(field.at(i), t);
        for (o, tc) in out.at_mut(i).iter_mut().zip(t) {
            *o -= s * tc;
        }
    }
    out
}

/// `X - <X, df/ds> df/ds` pointwise.
pub fn project_normal(curve: &DiscreteCurve, field: &VectorField) -> Result<VectorField> {
    curve.check_aligned(field.len())?;
    if field.dim != curve.dim() {
        return Err(Error::LengthMismatch {
            expected: curve.dim(),
            found: field.dim,
        });
    }
    let tangent = unit_tangent(curve)?;
    Ok(project_with_tangent(field, &tangent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn line(n: usize, slope: [f64; 2]) -> DiscreteCurve {
        let nodes: Vec<f64> = (0..n)
            .flat_map(|i| {
                let x = i as f64 / (n - 1) as f64;
                [slope[0] * x, slope[1] * x]
            })
            .collect();
        let p1 = vec![slope[0], slope[1]];
        let t = norm(&p1);
        let tau = vec![slope[0] / t, slope[1] / t];
        let b = BoundaryData::new(vec![0.0, 0.0], p1, tau.clone(), tau, t * 2.0).unwrap();
        DiscreteCurve::new(nodes, b).unwrap()
    }

    #[test]
    fn linear_curve_has_constant_first_derivative() {
        let c = line(11, [1.0, 0.0]);
        let d = deriv(&c, 1).unwrap();
        for i in 0..c.len() {
            assert!((d.at(i)[0] - 1.0).abs() < 1e-12 && d.at(i)[1].abs() < 1e-12);
        }
    }

    #[test]
    fn parabola_second_derivative() {
        let n = 21;
        let nodes: Vec<f64> = (0..n)
            .flat_map(|i| {
                let x = i as f64 / (n - 1) as f64;
                [x, x * x]
            })
            .collect();
        let b = BoundaryData::new(
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt()],
            2.0,
        )
        .unwrap();
        let c = DiscreteCurve::new(nodes, b).unwrap();
        let d = deriv(&c, 2).unwrap();
        for i in 0..n {
            assert!(d.at(i)[0].abs() < 1e-10);
            assert!((d.at(i)[1] - 2.0).abs() < 1e-10);
        }
        assert_eq!(deriv(&c, 5).unwrap_err(), Error::InvalidOrder(5));
    }

    #[test]
    fn arc_element_of_stretched_line() {
        let c = line(9, [2.0, 0.0]);
        for g in arc_element(&c).unwrap() {
            assert!((g - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_node_is_degenerate() {
        let n = 9;
        let mut nodes: Vec<f64> = (0..n)
            .flat_map(|i| [i as f64 / (n - 1) as f64, 0.0])
            .collect();
        // collapse nodes 3..=5 onto one point: the central difference at node 4 vanishes
        for i in 3..=5 {
            nodes[2 * i] = 0.5;
        }
        let b = BoundaryData::new(
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            2.0,
        )
        .unwrap();
        let c = DiscreteCurve::new(nodes, b).unwrap();
        assert!(matches!(
            arc_element(&c),
            Err(Error::DegenerateCurve { node: 4, .. })
        ));
    }

    #[test]
    fn quadrature_examples() {
        let c = line(17, [3.0, 0.0]);
        assert!((quad_ds(&c, &vec![1.0; 17]).unwrap() - 3.0).abs() < 1e-13);
        assert_eq!(quad_ds(&c, &vec![0.0; 17]).unwrap(), 0.0);
        assert!(quad_ds(&c, &[1.0; 3]).is_err());
    }

    #[test]
    fn normal_projection_examples() {
        let c = line(9, [1.0, 0.0]);
        let up = VectorField::from_values((0..9).flat_map(|_| [0.0, 1.0]).collect(), 2);
        assert_eq!(project_normal(&c, &up).unwrap(), up);
        let t = unit_tangent(&c).unwrap();
        assert!(project_normal(&c, &t).unwrap().max_norm() < 1e-15);

        let n = 41;
        let nodes: Vec<f64> = (0..n)
            .flat_map(|i| {
                let x = i as f64 / (n - 1) as f64;
                [-(PI * x).cos(), (PI * x).sin()]
            })
            .collect();
        let b = BoundaryData::new(
            vec![-1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
            PI,
        )
        .unwrap();
        let c = DiscreteCurve::with_clamped_ends(nodes, b).unwrap();
        let x = VectorField::from_values((0..n).flat_map(|i| [i as f64, 1.0]).collect(), 2);
        let p = project_normal(&c, &x).unwrap();
        let pp = project_normal(&c, &p).unwrap();
        let t = unit_tangent(&c).unwrap();
        for i in 0..n {
            assert!(dot(p.at(i), t.at(i)).abs() < 1e-12);
            assert!(norm(p.at(i)) <= norm(x.at(i)) + 1e-12);
            for k in 0..2 {
                assert!((p.at(i)[k] - pp.at(i)[k]).abs() < 1e-12);
            }
        }
    }
}
