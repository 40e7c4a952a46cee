#![allow(dead_code)]

use std::f64::consts::PI;

use elastica_core::curve::{DiscreteCurve, VectorField};
use elastica_core::geometry::GeometricFields;
use elastica_core::shapes::{arc_with_modes, Arc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Node counts of a refinement ladder: `N - 1` doubles each level.
pub const LADDER: [usize; 3] = [101, 201, 401];

/// Errors on the ladder must drop by a factor in `[3.2, 4.8]` per level.
pub fn assert_order_two(name: &str, errors: &[f64]) {
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            (3.2..=4.8).contains(&ratio),
            "{name}: ratio {ratio} outside [3.2, 4.8] (errors {errors:?})"
        );
    }
}

/// `C h^2` bound with `C` fitted on the first two levels, checked on the rest:
/// every finer error must stay below the fitted line (allowing a ratio down to 3.2).
pub fn assert_within_fitted_h2(name: &str, errors: &[f64]) {
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            ratio >= 3.2 || w[1] < 1e-13,
            "{name}: decay ratio {ratio} below 3.2 (errors {errors:?})"
        );
    }
}

pub fn ladder(f: impl Fn(usize) -> f64) -> Vec<f64> {
    LADDER.iter().map(|&n| f(n)).collect()
}

pub fn semicircle(r: f64, n: usize) -> DiscreteCurve {
    Arc::semicircle(r).unwrap().sample(n).unwrap()
}

/// Seeded smooth clamped curve: unit semicircle plus a few gentle modes.
pub fn random_curve(seed: u64, n: usize) -> DiscreteCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..3).map(|k| rng.gen_range(-0.08..0.08) / (k + 1) as f64).collect();
    arc_with_modes(&Arc::semicircle(1.0).unwrap(), &coeffs, n).unwrap()
}

pub fn max_dist(a: &VectorField, b: &VectorField, nodes: std::ops::Range<usize>) -> f64 {
    nodes
        .map(|i| a.at(i).iter().zip(b.at(i)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &[f64], b: &[f64], nodes: std::ops::Range<usize>) -> f64 {
    nodes.map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
}

/// Nodes with `x` in `[0.12, 0.88]`. Chained one-sided stencils lose all
/// accuracy next to the ends, so composed oracles are only compared here.
pub fn inner_window(n: usize) -> std::ops::Range<usize> {
    let k = (0.12 * (n - 1) as f64).round() as usize;
    k..n - k
}

/// `C^inf` bump supported on `(c - w, c + w)`.
pub fn bump(x: f64, c: f64, w: f64) -> f64 {
    let t = (x - c) / w;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp() * std::f64::consts::E
    }
}

/// Random compactly supported normal field: a few bumps inside `[0.15, 0.85]`
/// along the discrete unit normal (rotated tangent).
pub fn random_normal_field(geo: &GeometricFields, n: usize, rng: &mut ChaCha8Rng) -> VectorField {
    let bumps: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            let w = rng.gen_range(0.05..0.15);
            let c = rng.gen_range(0.15 + w..0.85 - w);
            (rng.gen_range(-1.0..1.0), c, w)
        })
        .collect();
    let mut u = VectorField::zeros(n, 2);
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        let a: f64 = bumps.iter().map(|&(amp, c, w)| amp * bump(x, c, w)).sum();
        let t = geo.tangent.at(i);
        u.at_mut(i).copy_from_slice(&[-a * t[1], a * t[0]]);
    }
    u
}

/// `(-cos theta, sin theta)` with `theta = pi (x + x^2) / 2`: the unit
/// semicircle traversed at non-uniform speed, `phi(x) = (x + x^2) / 2`.
pub fn uneven_semicircle(n: usize) -> DiscreteCurve {
    let nodes: Vec<f64> = (0..n)
        .flat_map(|i| {
            let x = i as f64 / (n - 1) as f64;
            let th = 0.5 * PI * (x + x * x);
            [-th.cos(), th.sin()]
        })
        .collect();
    DiscreteCurve::with_clamped_ends(nodes, Arc::semicircle(1.0).unwrap().boundary()).unwrap()
}
