//! Finite-difference weights on the uniform parameter grid.
//!
//! Interior nodes use the symmetric second-order stencil for each order.
//! Nodes closer to an end than the stencil half-width use a one-sided stencil
//! on the `k + 2` nearest grid points, which is exact for polynomials of
//! degree `k + 1` and second-order accurate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Highest derivative order supported.
pub const MAX_ORDER: usize = 4;

/// Fornberg's recursion: weights for derivatives `0..=order` at `z` on the points `xs`.
///
/// Returns `w[k][j]`, the weight of point `j` in the `k`-th derivative.
pub fn fornberg(z: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Stencil weights for one derivative order, in units of grid steps (divide by `h^k`).
#[derive(Debug, Clone)]
pub struct Stencil {
    pub order: usize,
    /// Half-width of the central stencil.
    pub half: usize,
    /// Central weights at offsets `-half..=half`.
    pub central: Vec<f64>,
    /// One-sided weights for nodes `0..half`, each on grid points `0..order + 2`.
    pub left: Vec<Vec<f64>>,
    /// One-sided weights for nodes `n - half..n`, each on the last `order + 2` points.
    /// Entry `i` belongs to node `n - half + i`.
    pub right: Vec<Vec<f64>>,
}

impl Stencil {
    pub fn new(order: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidOrder(order));
        }
        let half = order.div_ceil(2).max(1);
        let offsets: Vec<f64> = (0..=2 * half).map(|j| j as f64 - half as f64).collect();
        let central = fornberg(0.0, &offsets, order).swap_remove(order);

        let width = order + 2;
        let pts: Vec<f64> = (0..width).map(|j| j as f64).collect();
        let left = (0..half)
            .map(|i| fornberg(i as f64, &pts, order).swap_remove(order))
            .collect();
        let right = (0..half)
            .map(|i| {
                // node n - half + i sits at local coordinate width - half + i
                let z = (width - half + i) as f64;
                fornberg(z, &pts, order).swap_remove(order)
            })
            .collect();
        Ok(Stencil {
            order,
            half,
            central,
            left,
            right,
        })
    }

    /// Points needed by the widest one-sided stencil.
    pub fn width(&self) -> usize {
        self.order + 2
    }

    /// Grid indices and weights used at `node` on an `n`-point grid (unscaled).
    pub fn weights_at(&self, node: usize, n: usize) -> (usize, &[f64]) {
        if node < self.half {
            (0, &self.left[node])
        } else if node + self.half >= n {
            (n - self.width(), &self.right[node + self.half - n])
        } else {
            (node - self.half, &self.central)
        }
    }

    /// Applies the stencil to a field of `n` nodes with `dim` components stored node-major.
    pub fn apply(&self, values: &[f64], dim: usize, h: f64) -> Vec<f64> {
        let n = values.len() / dim;
        let scale = 1.0 / libm::pow(h, self.order as f64);
        let mut out = vec![0.0; values.len()];
        for node in 0..n {
            let (start, w) = self.weights_at(node, n);
            let dst = &mut out[node * dim..(node + 1) * dim];
            for (j, &wj) in w.iter().enumerate() {
                let src = &values[(start + j) * dim..(start + j + 1) * dim];
                for c in 0..dim {
                    dst[c] += wj * src[c];
                }
            }
            for v in dst.iter_mut() {
                *v *= scale;
            }
        }
        out
    }
}

/// `k`-th derivative of a node-major field with `dim` components on a grid with spacing `h`.
pub fn derivative(values: &[f64], dim: usize, order: usize, h: f64) -> Result<Vec<f64>> {
    let stencil = Stencil::new(order)?;
    let n = values.len() / dim.max(1);
    if n < stencil.width() + 1 {
        return Err(Error::TooFewNodes {
            nodes: n,
            required: stencil.width() + 1,
        });
    }
    Ok(stencil.apply(values, dim, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn central_weights_are_the_textbook_ones() {
        assert!(close(&Stencil::new(1).unwrap().central, &[-0.5, 0.0, 0.5]));
        assert!(close(&Stencil::new(2).unwrap().central, &[1.0, -2.0, 1.0]));
        assert!(close(
            &Stencil::new(3).unwrap().central,
            &[-0.5, 1.0, 0.0, -1.0, 0.5]
        ));
        assert!(close(
            &Stencil::new(4).unwrap().central,
            &[1.0, -4.0, 6.0, -4.0, 1.0]
        ));
    }

    #[test]
    fn one_sided_first_derivative() {
        let s = Stencil::new(1).unwrap();
        assert!(close(&s.left[0], &[-1.5, 2.0, -0.5]));
        assert!(close(&s.right[0], &[0.5, -2.0, 1.5]));
    }

    #[test]
    fn rejects_bad_order() {
        assert_eq!(Stencil::new(0).unwrap_err(), Error::InvalidOrder(0));
        assert_eq!(Stencil::new(5).unwrap_err(), Error::InvalidOrder(5));
    }

    #[test]
    fn exact_on_polynomials_of_degree_k_plus_one() {
        let n = 9;
        let h = 1.0 / (n - 1) as f64;
        for k in 1..=4usize {
            let deg = k + 1;
            let vals: Vec<f64> = (0..n).map(|i| libm::pow(i as f64 * h, deg as f64)).collect();
            let d = derivative(&vals, 1, k, h).unwrap();
            for (i, v) in d.iter().enumerate() {
                let x = i as f64 * h;
                let mut coef = 1.0;
                for m in 0..k {
                    coef *= (deg - m) as f64;
                }
                let exact = coef * libm::pow(x, (deg - k) as f64);
                assert!((v - exact).abs() < 1e-7, "k={k} node={i}: {v} vs {exact}");
            }
        }
    }
}
