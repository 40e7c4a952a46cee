//! Sampled circular arcs and their clamped, length-matched perturbations.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::curve::{BoundaryData, DiscreteCurve};
use crate::error::{Error, Result};
use crate::geometry::length;

/// Circular arc of radius `r` subtending `angle`, symmetric about the vertical
/// axis with its endpoints on the horizontal axis, traversed left to right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub radius: f64,
    pub angle: f64,
}

impl Arc {
    pub fn new(radius: f64, angle: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter("arc radius must be positive"));
        }
        if !(angle > 0.0 && angle < 2.0 * PI) {
            return Err(Error::InvalidParameter("arc angle must lie in (0, 2 pi)"));
        }
        Ok(Arc { radius, angle })
    }

    pub fn semicircle(radius: f64) -> Result<Self> {
        Self::new(radius, PI)
    }

    fn theta(&self, x: f64) -> f64 {
        0.5 * PI + 0.5 * self.angle - self.angle * x
    }

    fn center(&self) -> [f64; 2] {
        [0.0, -self.radius * libm::cos(0.5 * self.angle)]
    }

    /// Outward unit normal at parameter `x`.
    pub fn radial(&self, x: f64) -> [f64; 2] {
        let th = self.theta(x);
        [libm::cos(th), libm::sin(th)]
    }

    pub fn point(&self, x: f64) -> [f64; 2] {
        let c = self.center();
        let e = self.radial(x);
        [c[0] + self.radius * e[0], c[1] + self.radius * e[1]]
    }

    /// Unit tangent in the direction of increasing parameter.
    pub fn tangent(&self, x: f64) -> [f64; 2] {
        let th = self.theta(x);
        [libm::sin(th), -libm::cos(th)]
    }

    pub fn length(&self) -> f64 {
        self.radius * self.angle
    }

    /// Clamped data read off the arc; the prescribed length is the arc length.
    pub fn boundary(&self) -> BoundaryData {
        let half = 0.5 * self.angle;
        let s = self.radius * libm::sin(half);
        BoundaryData::new(
            vec![-s, 0.0],
            vec![s, 0.0],
            self.tangent(0.0).to_vec(),
            self.tangent(1.0).to_vec(),
            self.length(),
        )
        .expect("arc boundary data are valid")
    }

    pub fn sample(&self, n: usize) -> Result<DiscreteCurve> {
        self.sample_displaced(n, |_| 0.0)
    }

    /// Samples `point(x) + radius * w(x) * radial(x)`.
    pub fn sample_displaced(&self, n: usize, w: impl Fn(f64) -> f64) -> Result<DiscreteCurve> {
        if n < 2 {
            return Err(Error::TooFewNodes {
                nodes: n,
                required: crate::curve::MIN_NODES,
            });
        }
        let nodes: Vec<f64> = (0..n)
            .flat_map(|i| {
                let x = i as f64 / (n - 1) as f64;
                let p = self.point(x);
                let e = self.radial(x);
                let s = self.radius * w(x);
                [p[0] + s * e[0], p[1] + s * e[1]]
            })
            .collect();
        DiscreteCurve::with_clamped_ends(nodes, self.boundary())
    }
}

fn sin2(x: f64) -> f64 {
    let s = libm::sin(x);
    s * s
}

/// Radial displacement profile `amp [(1 - s) sin^2(m pi x) - s sin^2(2 m pi x)]`.
///
/// Both terms vanish together with their first derivative at the endpoints.
pub fn blended_bump(amp: f64, mode: u32, blend: f64) -> impl Fn(f64) -> f64 {
    let m = mode as f64;
    move |x| amp * ((1.0 - blend) * sin2(m * PI * x) - blend * sin2(2.0 * m * PI * x))
}

/// Arc with a clamped radial bump of amplitude `amp` (relative to the radius),
/// blended with a counter-bump so that the discrete length equals the arc length.
///
/// The blend weight is found by bisection; fails when the length cannot be
/// bracketed on `[0, 1]`.
pub fn perturbed_arc(arc: &Arc, amp: f64, mode: u32, n: usize) -> Result<DiscreteCurve> {
    if mode == 0 {
        return Err(Error::InvalidParameter("perturbation mode must be at least 1"));
    }
    if amp == 0.0 {
        return arc.sample(n);
    }
    let target = arc.length();
    let defect = |s: f64| -> Result<f64> {
        let c = arc.sample_displaced(n, blended_bump(amp, mode, s))?;
        Ok(length(&c)? - target)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut d_lo = defect(lo).map_err(|_| Error::GenerationFailure("perturbed curve is degenerate"))?;
    let d_hi = defect(hi).map_err(|_| Error::GenerationFailure("perturbed curve is degenerate"))?;
    if d_lo == 0.0 {
        return arc.sample_displaced(n, blended_bump(amp, mode, lo));
    }
    if d_lo.signum() == d_hi.signum() {
        return Err(Error::GenerationFailure(
            "length cannot be matched by blending, amplitude too large",
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let d_mid = defect(mid)?;
        if d_mid == 0.0 {
            lo = mid;
            break;
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    let a = arc.sample_displaced(n, blended_bump(amp, mode, lo))?;
    let b = arc.sample_displaced(n, blended_bump(amp, mode, hi))?;
    if (length(&a)? - target).abs() <= (length(&b)? - target).abs() {
        Ok(a)
    } else {
        Ok(b)
    }
}

/// Arc with an arbitrary clamped radial displacement built from the modes
/// `sin^2(pi x) sin(k pi x)`, `k = 1..=coeffs.len()`. The prescribed length is
/// set to the discrete length of the result.
pub fn arc_with_modes(arc: &Arc, coeffs: &[f64], n: usize) -> Result<DiscreteCurve> {
    let w = |x: f64| -> f64 {
        let base = sin2(PI * x);
        coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * base * libm::sin((k + 1) as f64 * PI * x))
            .sum()
    };
    let c = arc.sample_displaced(n, w)?;
    let mut b = c.boundary().clone();
    b.ell = length(&c)?;
    DiscreteCurve::new(c.into_nodes(), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_boundary_data() {
        let b = Arc::semicircle(1.0).unwrap().boundary();
        let close = |a: &[f64], e: [f64; 2]| (a[0] - e[0]).abs() < 1e-15 && (a[1] - e[1]).abs() < 1e-15;
        assert!(close(&b.p0, [-1.0, 0.0]) && close(&b.p1, [1.0, 0.0]));
        assert!(close(&b.tau0, [0.0, 1.0]) && close(&b.tau1, [0.0, -1.0]));
        assert!((b.ell - PI).abs() < 1e-15);
        assert!(Arc::new(1.0, 0.0).is_err() && Arc::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn perturbed_arc_matches_length() {
        let arc = Arc::semicircle(1.0).unwrap();
        let c = perturbed_arc(&arc, 0.1, 1, 201).unwrap();
        assert!((length(&c).unwrap() - PI).abs() < 1e-10);
        assert!(crate::geometry::energy(&c).unwrap() > PI / 2.0);
        assert!(matches!(perturbed_arc(&arc, 10.0, 1, 201), Err(Error::GenerationFailure(_))));
        assert!(perturbed_arc(&arc, 0.1, 0, 201).is_err());
    }

    #[test]
    fn bump_is_clamped() {
        let w = blended_bump(0.3, 2, 0.4);
        let d = 1e-6;
        assert_eq!(w(0.0), 0.0);
        assert!(w(1.0).abs() < 1e-15);
        assert!(((w(d) - w(0.0)) / d).abs() < 1e-4);
    }
}
