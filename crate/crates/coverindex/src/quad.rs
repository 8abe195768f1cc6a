//! Composite Gauss-Legendre quadrature.
//!
//! Fixed 4-point rule per panel (exact through degree 7), composed over a
//! configurable panel count. Summation order is fixed and compensated, so a
//! given configuration always reproduces the same bits.

/// 4-point Gauss-Legendre nodes on [-1, 1].
pub fn gl4_nodes() -> [f64; 4] {
    let a = (3.0 / 7.0 - 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
    let b = (3.0 / 7.0 + 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
    [-b, -a, a, b]
}

/// Weights matching [`gl4_nodes`].
pub fn gl4_weights() -> [f64; 4] {
    let w_in = (18.0 + 30.0f64.sqrt()) / 36.0;
    let w_out = (18.0 - 30.0f64.sqrt()) / 36.0;
    [w_out, w_in, w_in, w_out]
}

/// Neumaier compensated accumulator with a deterministic add order.
#[derive(Default, Clone, Copy)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// ∫_a^b f over `panels` equal panels.
pub fn integrate_1d(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let nodes = gl4_nodes();
    let weights = gl4_weights();
    let h = (b - a) / panels as f64;
    let mut acc = Accumulator::default();
    for p in 0..panels {
        let left = a + h * p as f64;
        let mid = left + 0.5 * h;
        for k in 0..4 {
            acc.add(weights[k] * f(mid + 0.5 * h * nodes[k]));
        }
    }
    acc.value() * 0.5 * h
}

/// ∫∫ over [ax,bx]×[ay,by] with `px`×`py` panels.
pub fn integrate_2d(
    f: &dyn Fn(f64, f64) -> f64,
    ax: f64,
    bx: f64,
    ay: f64,
    by: f64,
    px: usize,
    py: usize,
) -> f64 {
    let nodes = gl4_nodes();
    let weights = gl4_weights();
    let hx = (bx - ax) / px as f64;
    let hy = (by - ay) / py as f64;
    let mut acc = Accumulator::default();
    for i in 0..px {
        let mx = ax + hx * (i as f64 + 0.5);
        for j in 0..py {
            let my = ay + hy * (j as f64 + 0.5);
            for k in 0..4 {
                let x = mx + 0.5 * hx * nodes[k];
                for l in 0..4 {
                    let y = my + 0.5 * hy * nodes[l];
                    acc.add(weights[k] * weights[l] * f(x, y));
                }
            }
        }
    }
    acc.value() * 0.25 * hx * hy
}

/// Cumulative antiderivative h(x) = ∫_0^x f, evaluated at an arbitrary point
/// by integrating whole panels up to the containing panel plus a partial tail.
pub struct Cumulative {
    panel_sums: Vec<f64>,
    a: f64,
    h: f64,
}

impl Cumulative {
    /// Precomputes panel integrals of `f` over [a, b] at `panels_per_unit`
    /// resolution.
    pub fn new(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels_per_unit: usize) -> Self {
        let total_panels = (((b - a) * panels_per_unit as f64).round() as usize).max(1);
        let h = (b - a) / total_panels as f64;
        let mut panel_sums = Vec::with_capacity(total_panels);
        for p in 0..total_panels {
            let left = a + h * p as f64;
            panel_sums.push(integrate_1d(f, left, left + h, 1));
        }
        Cumulative { panel_sums, a, h }
    }

    /// ∫_a^x f for x within the precomputed range, with a fresh partial-panel
    /// integral for the fractional part.
    pub fn eval_from_a(&self, f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
        let offset = (x - self.a) / self.h;
        let full = (offset.floor() as isize).clamp(0, self.panel_sums.len() as isize) as usize;
        let mut acc = Accumulator::default();
        for s in &self.panel_sums[..full] {
            acc.add(*s);
        }
        let left = self.a + self.h * full as f64;
        if x > left {
            acc.add(integrate_1d(f, left, x, 1));
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomials_exactly() {
        // degree 7 is exact for the 4-point rule
        let f = |x: f64| 3.0 * x.powi(7) - x.powi(4) + 2.0;
        let exact = 3.0 / 8.0 * (2.0f64.powi(8) - 1.0) - (2.0f64.powi(5) - 1.0) / 5.0 + 2.0;
        assert_relative_eq!(integrate_1d(&f, 1.0, 2.0, 1), exact, epsilon = 1e-12);
    }

    #[test]
    fn smooth_periodic_integral_is_tiny() {
        let f = |x: f64| (2.0 * PI * x).sin();
        assert!(integrate_1d(&f, 0.0, 1.0, 64).abs() < 1e-14);
    }

    #[test]
    fn two_dimensional_product_rule() {
        let f = |x: f64, y: f64| (2.0 * PI * x).cos().powi(2) * (2.0 * PI * y).sin().powi(2);
        assert_relative_eq!(
            integrate_2d(&f, 0.0, 1.0, 0.0, 1.0, 16, 16),
            0.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn doubling_panels_shrinks_error_fast() {
        let f = |x: f64| (x.sin().exp()) * (3.0 * x).cos();
        let exact = integrate_1d(&f, 0.0, 2.0, 512);
        let e1 = (integrate_1d(&f, 0.0, 2.0, 2) - exact).abs();
        let e2 = (integrate_1d(&f, 0.0, 2.0, 4) - exact).abs();
        assert!(e1 > 1e-12, "error should be visible at 2 panels");
        assert!(e1 / e2 >= 4.0, "order check: {} vs {}", e1, e2);
    }

    #[test]
    fn cumulative_matches_direct() {
        let f = |x: f64| (2.0 * PI * x).cos();
        let c = Cumulative::new(&f, -3.0, 3.0, 64);
        for &x in &[-2.7, -0.5, 0.0, 0.33, 2.99] {
            let direct = integrate_1d(&f, -3.0, x, 200);
            assert_relative_eq!(c.eval_from_a(&f, x), direct, epsilon = 1e-12);
        }
    }
}
