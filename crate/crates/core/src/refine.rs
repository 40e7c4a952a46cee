//! Two-level refinement fits `e = C h^p`.

/// Observed order from errors on grids with spacings `h_coarse`, `h_fine`.
pub fn observed_order(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    libm::log(e_coarse / e_fine) / libm::log(h_coarse / h_fine)
}

/// Constant `C` of `e = C h^p` fitted at the finer level.
pub fn fitted_constant(e_fine: f64, h_fine: f64, order: f64) -> f64 {
    e_fine / libm::pow(h_fine, order)
}

/// Grid spacing of an `n`-node grid on `[0, 1]`.
pub fn spacing(n: usize) -> f64 {
    1.0 / (n - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_quadratic_order() {
        let (h1, h2) = (spacing(101), spacing(201));
        let p = observed_order(3.0 * h1 * h1, 3.0 * h2 * h2, h1, h2);
        assert!((p - 2.0).abs() < 1e-12);
        assert!((fitted_constant(3.0 * h2 * h2, h2, p) - 3.0).abs() < 1e-9);
    }
}
