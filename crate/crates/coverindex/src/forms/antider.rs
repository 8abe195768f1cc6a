//! The M = ℝ antiderivative test.
//!
//! For a bounded f, the 1-form f dx is zero in the coinvariants iff
//! h(x) = ∫_0^x f stays bounded. Cumulative quadrature computes h; the
//! verdict reads the fitted tail slope, which for constant-plus-periodic
//! integrands equals the per-domain integral mean.

use crate::coinvariants::CoinvariantRep;
use crate::expr::Expr;
use crate::quad::{self, Cumulative};
use crate::rat;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassEvidence {
    /// sup|h| stabilizes: evidence that [f dx] = 0.
    ZeroEvidence,
    /// |h| grows linearly: evidence that [f dx] is a nonzero multiple of the
    /// class of 𝟙.
    NonzeroEvidence,
}

#[derive(Debug, Clone)]
pub struct AntiderivativeReport {
    pub sup_h: f64,
    pub sup_location: f64,
    /// Least-squares slope of h over the outer halves of both tails.
    pub tail_slope: f64,
    /// sup|h| over the inner half window, for the stabilization comparison.
    pub sup_h_inner: f64,
    pub verdict: ClassEvidence,
    /// Per-domain integrals ∫_n^{n+1} f for n in [-X, X).
    pub per_domain: Vec<(i64, f64)>,
    /// When a coinvariant representative was supplied: does the measured
    /// slope match its constant part within the slope tolerance?
    pub comparison_consistent: Option<bool>,
}

/// Computes h by cumulative quadrature on [-X, X] and classifies the growth.
pub fn antiderivative_bounded(
    f: &Expr,
    x_extent: f64,
    panels_per_unit: usize,
    slope_tol: f64,
    comparison: Option<&CoinvariantRep>,
) -> Result<AntiderivativeReport> {
    if x_extent < 4.0 {
        return Err(Error::Input("extent must be at least 4 domains".into()));
    }
    if let Some(axis) = f.max_coord() {
        if axis != 0 {
            return Err(Error::Input("integrand must be a function of x".into()));
        }
    }
    let eval = |x: f64| f.eval(&[x]);
    let cumulative = Cumulative::new(&eval, -x_extent, x_extent, panels_per_unit);
    let at_zero = cumulative.eval_from_a(&eval, 0.0);
    let h = |x: f64| cumulative.eval_from_a(&eval, x) - at_zero;

    // sup |h|: coarse scan plus local trisection refinement
    let coarse_n = ((2.0 * x_extent) as usize) * 64;
    let mut best_x = 0.0;
    let mut best = 0.0f64;
    for k in 0..=coarse_n {
        let x = -x_extent + 2.0 * x_extent * k as f64 / coarse_n as f64;
        let v = h(x).abs();
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let step = 2.0 * x_extent / coarse_n as f64;
    let (mut lo, mut hi) = (
        (best_x - step).max(-x_extent),
        (best_x + step).min(x_extent),
    );
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if h(m1).abs() < h(m2).abs() {
            lo = m1;
        } else {
            hi = m2;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let sup_location = 0.5 * (lo + hi);
    let sup_h = best.max(h(sup_location).abs());

    // tail slope: least squares per tail, then averaged. Fitting both tails
    // jointly would bias the slope whenever a central perturbation offsets
    // the two tails by opposite constants.
    let half = (x_extent / 2.0).floor() as i64;
    let full = x_extent.floor() as i64;
    let pos: Vec<(f64, f64)> = (half..=full).map(|n| (n as f64, h(n as f64))).collect();
    let neg: Vec<(f64, f64)> = (half..=full)
        .map(|n| (-n as f64, h(-n as f64)))
        .collect();
    let tail_slope = 0.5 * (least_squares_slope(&pos) + least_squares_slope(&neg));

    let mut sup_h_inner = 0.0f64;
    for k in 0..=coarse_n / 2 {
        let x = -x_extent / 2.0 + x_extent * k as f64 / (coarse_n / 2) as f64;
        sup_h_inner = sup_h_inner.max(h(x).abs());
    }

    let mut per_domain = Vec::new();
    for n in (-(full))..full {
        let a = h((n + 1) as f64) - h(n as f64);
        per_domain.push((n, a));
    }

    let verdict = if tail_slope.abs() <= slope_tol {
        ClassEvidence::ZeroEvidence
    } else {
        ClassEvidence::NonzeroEvidence
    };

    let comparison_consistent = comparison.map(|rep| {
        let constant = rat::to_f64(rep.constant());
        (tail_slope - constant).abs() <= slope_tol.max(1e-6)
    });

    Ok(AntiderivativeReport {
        sup_h,
        sup_location,
        tail_slope,
        sup_h_inner,
        verdict,
        per_domain,
        comparison_consistent,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut num = quad::Accumulator::default();
    let mut den = quad::Accumulator::default();
    for (x, y) in points {
        num.add((x - mean_x) * (y - mean_y));
        den.add((x - mean_x) * (x - mean_x));
    }
    num.value() / den.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn cosine_has_bounded_antiderivative() {
        let f = parse("cos(2*pi*x)").unwrap();
        let report = antiderivative_bounded(&f, 20.0, 64, 1e-3, None).unwrap();
        assert_relative_eq!(report.sup_h, 1.0 / (2.0 * PI), epsilon = 1e-8);
        assert!(report.tail_slope.abs() < 1e-10);
        assert_eq!(report.verdict, ClassEvidence::ZeroEvidence);
    }

    #[test]
    fn constant_grows_linearly() {
        let f = parse("1").unwrap();
        let report = antiderivative_bounded(&f, 20.0, 64, 1e-3, None).unwrap();
        assert_relative_eq!(report.tail_slope, 1.0, epsilon = 1e-6);
        assert_eq!(report.verdict, ClassEvidence::NonzeroEvidence);
    }

    #[test]
    fn constant_part_dominates_a_finitely_supported_bump() {
        // 1 + cos(2πx) minus a unit-mass gaussian spike near 0, far below
        // tolerance beyond |x| ~ 3: slope stays 1
        let f = parse("1 + cos(2*pi*x) - 1.1283791670955126*exp(-4*x*x)").unwrap();
        let report = antiderivative_bounded(&f, 20.0, 64, 1e-3, None).unwrap();
        assert_relative_eq!(report.tail_slope, 1.0, epsilon = 1e-4);
        assert_eq!(report.verdict, ClassEvidence::NonzeroEvidence);
    }

    #[test]
    fn comparison_against_a_coinvariant_representative() {
        use std::sync::Arc;
        let z = Arc::new(crate::group::GroupSpec::cyclic_z());
        let one = CoinvariantRep::one(z.clone());
        let f = parse("1").unwrap();
        let report = antiderivative_bounded(&f, 16.0, 64, 1e-3, Some(&one)).unwrap();
        assert_eq!(report.comparison_consistent, Some(true));

        let zero = CoinvariantRep::zero(z);
        let report = antiderivative_bounded(&f, 16.0, 64, 1e-3, Some(&zero)).unwrap();
        assert_eq!(report.comparison_consistent, Some(false));
    }

    #[test]
    fn per_domain_integrals_are_reported() {
        let f = parse("1").unwrap();
        let report = antiderivative_bounded(&f, 8.0, 32, 1e-3, None).unwrap();
        assert_eq!(report.per_domain.len(), 16);
        for (_, v) in &report.per_domain {
            assert_relative_eq!(*v, 1.0, epsilon = 1e-12);
        }
    }
}
