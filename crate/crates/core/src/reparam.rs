//! Constant-speed reparametrization and the velocity comparison it enables.

use alloc::vec;
use alloc::vec::Vec;

use crate::curve::{arc_element, quad_dx, quad_with_gamma, DiscreteCurve, VectorField};
use crate::error::{Error, Result};
use crate::stepper::FlowState;

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Butland slopes).
///
/// Monotone data produce a monotone interpolant; the slopes depend
/// continuously on the data.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

fn same_sign(a: f64, b: f64) -> bool {
    (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0)
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if !same_sign(d, m0) {
        0.0
    } else if !same_sign(m0, m1) && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

impl MonotoneCubic {
    /// `xs` must be strictly increasing with at least two points.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n, "need matching abscissae and values");
        let hs: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / hs[i]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = secants[0];
            slopes[1] = secants[0];
        } else {
            for i in 1..n - 1 {
                let (m0, m1) = (secants[i - 1], secants[i]);
                if same_sign(m0, m1) {
                    let w1 = 2.0 * hs[i] + hs[i - 1];
                    let w2 = hs[i] + 2.0 * hs[i - 1];
                    slopes[i] = (w1 + w2) / (w1 / m0 + w2 / m1);
                }
            }
            slopes[0] = end_slope(hs[0], hs[1], secants[0], secants[1]);
            slopes[n - 1] = end_slope(hs[n - 2], hs[n - 3], secants[n - 2], secants[n - 3]);
        }
        MonotoneCubic { xs, ys, slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

/// Normalized cumulative arc length at the nodes and its inverse at the uniform targets.
#[derive(Debug, Clone, PartialEq)]
pub struct ReparamMap {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

/// Cumulative trapezoid of `gamma`, normalized to end at one.
fn normalized_cumulative(gamma: &[f64], h: f64) -> Vec<f64> {
    let n = gamma.len();
    let mut phi = vec![0.0; n];
    for i in 1..n {
        phi[i] = phi[i - 1] + 0.5 * h * (gamma[i - 1] + gamma[i]);
    }
    let total = phi[n - 1];
    for v in phi.iter_mut() {
        *v /= total;
    }
    phi[n - 1] = 1.0;
    phi
}

fn invert(phi: &[f64]) -> Vec<f64> {
    let n = phi.len();
    let grid = uniform_grid(n);
    let inverse = MonotoneCubic::new(phi.to_vec(), grid.clone());
    let mut psi: Vec<f64> = grid.iter().map(|&y| inverse.eval(y)).collect();
    psi[0] = 0.0;
    psi[n - 1] = 1.0;
    psi
}

pub fn cumulative_arclength(curve: &DiscreteCurve) -> Result<ReparamMap> {
    let gamma = arc_element(curve)?;
    let phi = normalized_cumulative(&gamma, curve.h());
    let psi = invert(&phi);
    Ok(ReparamMap { phi, psi })
}

const STENCIL_POINTS: usize = 6;

/// Piecewise degree-five interpolant of the nodes: on each cell the Lagrange
/// polynomial through the six nearest nodes, shifted inward near the ends.
///
/// Fourth differences of resampled nodes amplify interpolation error by
/// `h^-4`; a sixth-order interpolant keeps that at `O(h^2)`.
struct NodeInterpolant<'a> {
    curve: &'a DiscreteCurve,
    m: usize,
}

impl<'a> NodeInterpolant<'a> {
    fn new(curve: &'a DiscreteCurve) -> Self {
        NodeInterpolant {
            curve,
            m: STENCIL_POINTS.min(curve.len()),
        }
    }

    fn cell(&self, u: f64) -> usize {
        let n = self.curve.len();
        (libm::floor(u / self.curve.h()).max(0.0) as usize).min(n - 2)
    }

    fn stencil_start(&self, cell: usize) -> usize {
        let n = self.curve.len();
        (cell as isize - (self.m as isize / 2 - 1)).clamp(0, (n - self.m) as isize) as usize
    }

    /// Position (`order = 0`) or parameter derivative (`order = 1`) at `u`.
    fn eval_into(&self, u: f64, order: usize, out: &mut [f64]) {
        let h = self.curve.h();
        let start = self.stencil_start(self.cell(u));
        out.iter_mut().for_each(|v| *v = 0.0);
        for j in start..start + self.m {
            let xj = j as f64 * h;
            let w = if order == 0 {
                let mut w = 1.0;
                for k in start..start + self.m {
                    if k != j {
                        w *= (u - k as f64 * h) / (xj - k as f64 * h);
                    }
                }
                w
            } else {
                let mut sum = 0.0;
                for l in start..start + self.m {
                    if l == j {
                        continue;
                    }
                    let mut term = 1.0 / (xj - l as f64 * h);
                    for k in start..start + self.m {
                        if k != j && k != l {
                            term *= (u - k as f64 * h) / (xj - k as f64 * h);
                        }
                    }
                    sum += term;
                }
                sum
            };
            for (o, v) in out.iter_mut().zip(self.curve.node(j)) {
                *o += w * v;
            }
        }
    }

    fn speed(&self, u: f64, scratch: &mut [f64]) -> f64 {
        self.eval_into(u, 1, scratch);
        libm::sqrt(scratch.iter().map(|v| v * v).sum())
    }

    /// Arc length of the interpolant between `a` and `b` inside one cell.
    fn arc(&self, a: f64, b: f64, scratch: &mut [f64]) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        GAUSS_5
            .iter()
            .map(|(x, w)| w * self.speed(mid + half * x, scratch))
            .sum::<f64>()
            * half
    }
}

/// Five-point Gauss-Legendre nodes and weights on `[-1, 1]`.
const GAUSS_5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Parameter in `[0, 1]` at which the interpolant has arc length `target`.
fn invert_arclength(interp: &NodeInterpolant, cumulative: &[f64], target: f64, scratch: &mut [f64]) -> f64 {
    let h = interp.curve.h();
    let cells = cumulative.len() - 1;
    let cell = cumulative.partition_point(|&v| v <= target).clamp(1, cells) - 1;
    let (lo0, hi0) = (cell as f64 * h, (cell + 1) as f64 * h);
    let (mut lo, mut hi) = (lo0, hi0);
    let mut u = lo0 + h * (target - cumulative[cell]) / (cumulative[cell + 1] - cumulative[cell]);
    for _ in 0..60 {
        let f = cumulative[cell] + interp.arc(lo0, u, scratch) - target;
        if f.abs() <= 1e-15 * cumulative[cells] {
            break;
        }
        if f > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let next = u - f / interp.speed(u, scratch);
        u = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    u
}

/// Resamples the curve at equal arc-length spacing.
///
/// Arc length is measured on a sixth-order piecewise interpolant of the
/// nodes and inverted by safeguarded Newton iteration, so the output is the
/// same curve sampled at constant speed up to `O(h^6)` in position. Applying
/// the map twice changes the nodes only by that interpolation error.
pub fn constant_speed(curve: &DiscreteCurve) -> Result<DiscreteCurve> {
    arc_element(curve)?;
    let n = curve.len();
    let dim = curve.dim();
    let h = curve.h();
    let interp = NodeInterpolant::new(curve);
    let mut scratch = vec![0.0; dim];
    let mut cumulative = vec![0.0; n];
    for j in 1..n {
        let a = (j - 1) as f64 * h;
        cumulative[j] = cumulative[j - 1] + interp.arc(a, a + h, &mut scratch);
    }
    let total = cumulative[n - 1];
    let mut nodes = vec![0.0; n * dim];
    for i in 1..n - 1 {
        let u = invert_arclength(&interp, &cumulative, total * i as f64 * h, &mut scratch);
        interp.eval_into(u, 0, &mut nodes[i * dim..(i + 1) * dim]);
    }
    DiscreteCurve::with_clamped_ends(nodes, curve.boundary().clone())
}

/// `sqrt(2 / ell + 16 E0)`.
pub fn velocity_bound_constant(ell: f64, e0: f64) -> Result<f64> {
    if !(ell > 0.0) {
        return Err(Error::InvalidParameter("length must be positive"));
    }
    if !(e0 >= 0.0) {
        return Err(Error::InvalidParameter("energy must be nonnegative"));
    }
    Ok(libm::sqrt(2.0 / ell + 16.0 * e0))
}

/// `(|(g_next - g_prev) / dt|_{L2(dx)}, constant * |velocity|_{L2(ds)})` for
/// already reparametrized curves `g_prev`, `g_next`; `velocity` lives on `next`.
pub fn velocity_bound_pair(
    tilde_prev: &DiscreteCurve,
    tilde_next: &DiscreteCurve,
    next: &DiscreteCurve,
    velocity: &VectorField,
    dt: f64,
    constant: f64,
) -> Result<(f64, f64)> {
    let n = tilde_next.len();
    let sq: Vec<f64> = (0..n)
        .map(|i| {
            tilde_next
                .node(i)
                .iter()
                .zip(tilde_prev.node(i))
                .map(|(a, b)| {
                    let v = (a - b) / dt;
                    v * v
                })
                .sum()
        })
        .collect();
    let lhs = libm::sqrt(quad_dx(&sq, tilde_next.h()));
    let gamma = arc_element(next)?;
    let rhs = constant * libm::sqrt(quad_with_gamma(&velocity.dots(velocity), &gamma, next.h()));
    Ok((lhs, rhs))
}

/// Compares the reparametrized velocity of two consecutive states with the
/// normal-flow velocity, using the constant built from `e0 = E(f_0)`.
pub fn velocity_bound_check(prev: &FlowState, next: &FlowState, e0: f64) -> Result<(f64, f64)> {
    let constant = velocity_bound_constant(next.curve.boundary().ell, e0)?;
    let tp = constant_speed(&prev.curve)?;
    let tn = constant_speed(&next.curve)?;
    velocity_bound_pair(&tp, &tn, &next.curve, &next.velocity, next.dt_used, constant)
}
