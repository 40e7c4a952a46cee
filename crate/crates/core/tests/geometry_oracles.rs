//! Geometric fields against circle values, composed primitives and finite
//! differences of the energy.

mod common;

use std::f64::consts::PI;

use common::*;
use elastica_core::compose;
use elastica_core::curve::{DiscreteCurve, VectorField};
use elastica_core::elastica::residual;
use elastica_core::geometry::{self, GeometricFields, Jet};
use elastica_core::multiplier::{lambda_direct, lambda_ibp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RADII: [f64; 3] = [0.8, 1.0, 1.25];

#[test]
fn circle_curvature_points_to_the_centre() {
    for r in [1.0, 2.0] {
        let errors = ladder(|n| {
            let c = semicircle(r, n);
            let k = geometry::curvature(&c).unwrap();
            // centre of the semicircle arc is the origin
            (0..n)
                .map(|i| {
                    let p = c.node(i);
                    let exact = [-p[0] / (r * r), -p[1] / (r * r)];
                    (k.at(i)[0] - exact[0]).hypot(k.at(i)[1] - exact[1])
                })
                .fold(0.0, f64::max)
        });
        assert_order_two(&format!("curvature r={r}"), &errors);
    }
}

#[test]
fn circle_gradient_is_half_curvature() {
    let errors = ladder(|n| {
        let c = semicircle(1.0, n);
        let geo = GeometricFields::compute(&c).unwrap();
        max_dist(&geo.grad_e, &geo.kappa.scaled(0.5), 0..n)
    });
    assert_within_fitted_h2("grad E - kappa/2", &errors);
}

#[test]
fn circle_energy_length_and_multiplier() {
    for r in RADII {
        let energy = ladder(|n| (geometry::energy(&semicircle(r, n)).unwrap() - PI / (2.0 * r)).abs());
        assert_order_two(&format!("energy r={r}"), &energy);
        let length = ladder(|n| (geometry::length(&semicircle(r, n)).unwrap() - PI * r).abs());
        assert_order_two(&format!("length r={r}"), &length);
        let target = 0.5 / (r * r);
        let direct = ladder(|n| (lambda_direct(&semicircle(r, n)).unwrap() - target).abs());
        assert_order_two(&format!("lambda_direct r={r}"), &direct);
        let ibp = ladder(|n| (lambda_ibp(&semicircle(r, n)).unwrap() - target).abs());
        assert_order_two(&format!("lambda_ibp r={r}"), &ibp);
        let star = ladder(|n| (residual(&semicircle(r, n)).unwrap().lambda_star * r * r - 0.5).abs());
        assert_within_fitted_h2(&format!("lambda_star r^2 r={r}"), &star);
    }
}

#[test]
fn circle_densities_and_tangential_speed() {
    let densities = ladder(|n| {
        let (k4, nk2, nkk) = geometry::lambda_densities(&semicircle(1.0, n)).unwrap();
        let a = k4.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        let b = nk2.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let c = nkk.iter().map(|v| v.abs()).fold(0.0, f64::max);
        a.max(b).max(c)
    });
    assert_order_two("densities", &densities);
    // A(f) has no tangential part on a constant-speed circle
    let mu = ladder(|n| {
        let geo = GeometricFields::compute(&semicircle(1.0, n)).unwrap();
        geo.mu().iter().map(|v| v.abs()).fold(0.0, f64::max)
    });
    assert_within_fitted_h2("mu", &mu);
}

#[test]
fn straight_line_densities_vanish() {
    let b = elastica_core::BoundaryData::new(vec![0.0, 0.0], vec![2.0, 1.0], vec![2.0 / 5f64.sqrt(), 1.0 / 5f64.sqrt()], vec![2.0 / 5f64.sqrt(), 1.0 / 5f64.sqrt()], 3.0).unwrap();
    let nodes: Vec<f64> = (0..41).flat_map(|i| [2.0 * i as f64 / 40.0, i as f64 / 40.0]).collect();
    let c = DiscreteCurve::new(nodes, b).unwrap();
    let (k4, nk2, nkk) = geometry::lambda_densities(&c).unwrap();
    for v in k4.iter().chain(&nk2).chain(&nkk) {
        assert!(v.abs() < 1e-20);
    }
}

/// Exact derivatives of the semicircle fed through the same formulas: any
/// discrepancy is a transcription error, not a discretization error.
#[test]
fn formulas_are_exact_on_an_analytic_jet() {
    let n = 33;
    let field = |k: i32| {
        let pk = PI.powi(k);
        let values = (0..n)
            .flat_map(|i| {
                let th = PI * i as f64 / (n - 1) as f64 + 0.5 * PI * k as f64;
                [-pk * th.cos(), pk * th.sin()]
            })
            .collect();
        VectorField::from_values(values, 2)
    };
    let jet = Jet {
        d1: field(1),
        d2: field(2),
        d3: field(3),
        d4: field(4),
        gamma: vec![PI; n],
        h: 1.0 / (n - 1) as f64,
    };
    let kappa = geometry::curvature_from(&jet);
    let nsk = geometry::nabla_s_kappa_from(&jet);
    let ns2k = geometry::nabla_s2_kappa_from(&jet);
    let grad = geometry::elastic_gradient_from(&jet);
    let (k4, nk2, nkk) = geometry::lambda_densities_from(&jet);
    for i in 0..n {
        let th = PI * i as f64 / (n - 1) as f64;
        let p = [-th.cos(), th.sin()];
        for k in 0..2 {
            assert!((kappa.at(i)[k] + p[k]).abs() < 1e-13);
            assert!(nsk.at(i)[k].abs() < 1e-12);
            assert!(ns2k.at(i)[k].abs() < 1e-11);
            assert!((grad.at(i)[k] + 0.5 * p[k]).abs() < 1e-11);
        }
        assert!((k4[i] - 1.0).abs() < 1e-12 && nk2[i].abs() < 1e-12 && nkk[i].abs() < 1e-12);
    }
}

#[test]
fn expansions_match_composed_primitives() {
    for seed in 0..4 {
        let kappa = ladder(|n| {
            let c = random_curve(seed, n);
            max_dist(&geometry::curvature(&c).unwrap(), &compose::curvature(&c).unwrap(), inner_window(n))
        });
        assert_order_two("curvature", &kappa);
        let nsk = ladder(|n| {
            let c = random_curve(seed, n);
            max_dist(&geometry::nabla_s_kappa(&c).unwrap(), &compose::nabla_s_kappa(&c).unwrap(), inner_window(n))
        });
        assert_order_two("nabla_s kappa", &nsk);
        let ns2k = ladder(|n| {
            let c = random_curve(seed, n);
            max_dist(&geometry::nabla_s2_kappa(&c).unwrap(), &compose::nabla_s2_kappa(&c).unwrap(), inner_window(n))
        });
        assert_order_two("nabla_s^2 kappa", &ns2k);
        let grad = ladder(|n| {
            let c = random_curve(seed, n);
            max_dist(&geometry::elastic_gradient(&c).unwrap(), &compose::elastic_gradient(&c).unwrap(), inner_window(n))
        });
        assert_order_two("elastic gradient", &grad);
        let dens = ladder(|n| {
            let c = random_curve(seed, n);
            let (a, b, d) = geometry::lambda_densities(&c).unwrap();
            let (x, y, z) = compose::lambda_densities(&c).unwrap();
            let w = inner_window(n);
            max_abs_diff(&a, &x, w.clone()).max(max_abs_diff(&b, &y, w.clone())).max(max_abs_diff(&d, &z, w))
        });
        assert_order_two("densities", &dens);
    }
}

#[test]
fn gradient_paths_agree_and_are_normal() {
    for seed in 0..4 {
        let n = 201;
        let c = random_curve(seed, n);
        let jet = Jet::new(&c).unwrap();
        let t = jet.tangent();
        let grad = geometry::elastic_gradient_from(&jet);
        let split = geometry::elastic_gradient_split_from(&jet);
        let scale = grad.max_norm();
        assert!(max_dist(&grad, &split, 0..n) <= 1e-12 * scale);
        let kappa = geometry::curvature_from(&jet);
        for i in 0..n {
            let tk: f64 = t.at(i).iter().zip(kappa.at(i)).map(|(a, b)| a * b).sum();
            let tg: f64 = t.at(i).iter().zip(grad.at(i)).map(|(a, b)| a * b).sum();
            assert!(tk.abs() < 1e-10 && tg.abs() < 1e-10 * scale);
        }
    }
}

/// Largest discrepancy, over random normal fields, between the pairing with
/// the gradient and the best centred difference of the energy.
fn first_variation_gap(c: &DiscreteCurve, fields: usize, seed: u64) -> f64 {
    let n = c.len();
    let geo = GeometricFields::compute(c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let energy_at = |u: &VectorField, eps: f64| {
        let moved = c.as_field().axpy(eps, u);
        geometry::energy(&DiscreteCurve::new(moved.values, c.boundary().clone()).unwrap()).unwrap()
    };
    let mut worst = 0.0f64;
    for _ in 0..fields {
        let u = random_normal_field(&geo, n, &mut rng);
        let pairing = geo.quad(&geo.grad_e.dots(&u));
        let norm = geo.quad(&u.dots(&u)).sqrt();
        let best = (1..=9)
            .map(|k| {
                let eps = 10f64.powi(-k);
                let fd = (energy_at(&u, eps) - energy_at(&u, -eps)) / (2.0 * eps);
                (pairing - fd).abs() / norm
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    worst
}

#[test]
fn energy_first_variation_converges() {
    let gaps = ladder(|n| first_variation_gap(&random_curve(7, n), 5, 11));
    assert_order_two("first variation", &gaps);
}
