//! Bounded differential forms on flat model spaces and the per-domain
//! integral into ℓ∞(G).
//!
//! The integral of a top form over the translate gD is plain composite
//! Gauss-Legendre quadrature over the unit box at offset + g. Boundedness of
//! |ω| and |dω| is what periodicity outside a finite deviation box delivers;
//! the estimate here is an advisory grid supremum.

mod antider;
mod stokes;
mod thom;

pub use antider::{antiderivative_bounded, AntiderivativeReport, ClassEvidence};
pub use stokes::{stokes_check, StokesReport};
pub use thom::{
    homotopy_invariance_check, index_via_thom, majority_entry, thom_table_for_field,
    HomotopyReport, ThomBump,
};

use crate::expr::Expr;
use crate::flat::{FlatWindow, Rect};
use crate::group::GroupElement;
use crate::quad;
use crate::{Error, Result};

/// A differential form with expression coefficients.
///
/// Coefficient layout: degree 0 stores the function; degree 1 in dimension
/// two stores (P, Q) for P dx + Q dy; top degree stores the single density.
#[derive(Debug, Clone)]
pub struct DifferentialForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<Expr>,
    deviation_box: Option<Rect>,
}

impl DifferentialForm {
    pub fn new(
        dim: usize,
        degree: usize,
        coeffs: Vec<Expr>,
        deviation_box: Option<Rect>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Input("form dimension must be 1 or 2".into()));
        }
        if degree > dim {
            return Err(Error::Input("form degree exceeds the dimension".into()));
        }
        let expected = if dim == 2 && degree == 1 { 2 } else { 1 };
        if coeffs.len() != expected {
            return Err(Error::Input(format!(
                "a degree-{} form in dimension {} needs {} coefficients",
                degree, dim, expected
            )));
        }
        for c in &coeffs {
            if let Some(axis) = c.max_coord() {
                if axis >= dim {
                    return Err(Error::Input(
                        "coefficient uses a coordinate beyond the dimension".into(),
                    ));
                }
            }
        }
        if let Some(b) = &deviation_box {
            if b.dim() != dim {
                return Err(Error::Input("deviation box dimension mismatch".into()));
            }
        }
        Ok(DifferentialForm {
            dim,
            degree,
            coeffs,
            deviation_box,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn eval_coeffs(&self, x: &[f64]) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.eval(x)).collect()
    }

    /// Pointwise coefficient norm.
    pub fn norm(&self, x: &[f64]) -> f64 {
        self.eval_coeffs(x)
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    fn outside_deviation(&self, x: &[f64]) -> bool {
        self.deviation_box
            .as_ref()
            .map(|b| !b.contains(x))
            .unwrap_or(true)
    }
}

/// Advisory boundedness report: grid suprema of the coefficients and of
/// their first partials (central finite differences), plus the worst
/// periodicity defect sampled outside the deviation box.
#[derive(Debug, Clone)]
pub struct BoundednessReport {
    pub sup_norm: f64,
    pub sup_derivative: f64,
    pub periodicity_defect: f64,
    pub periodicity_ok: bool,
}

pub fn boundedness_estimate(
    form: &DifferentialForm,
    window: &Rect,
    grid: usize,
) -> BoundednessReport {
    let step = 1e-5;
    let mut sup_norm = 0.0f64;
    let mut sup_derivative = 0.0f64;
    let mut defect = 0.0f64;
    for point in sample_grid(window, grid) {
        sup_norm = sup_norm.max(form.norm(&point));
        for coeff in &form.coeffs {
            for axis in 0..form.dim {
                let mut plus = point.clone();
                let mut minus = point.clone();
                plus[axis] += step;
                minus[axis] -= step;
                let d = (coeff.eval(&plus) - coeff.eval(&minus)) / (2.0 * step);
                sup_derivative = sup_derivative.max(d.abs());
            }
        }
        for axis in 0..form.dim {
            let mut shifted = point.clone();
            shifted[axis] += 1.0;
            if form.outside_deviation(&point) && form.outside_deviation(&shifted) {
                let a = form.eval_coeffs(&point);
                let b = form.eval_coeffs(&shifted);
                for (x, y) in a.iter().zip(&b) {
                    defect = defect.max((x - y).abs());
                }
            }
        }
    }
    BoundednessReport {
        sup_norm,
        sup_derivative,
        periodicity_defect: defect,
        periodicity_ok: defect <= 1e-9,
    }
}

pub(crate) fn sample_grid(window: &Rect, per_axis: usize) -> Vec<Vec<f64>> {
    let n = per_axis.max(2);
    let axis = |a: usize| -> Vec<f64> {
        (0..=n)
            .map(|k| window.lo[a] + window.side(a) * k as f64 / n as f64)
            .collect()
    };
    match window.dim() {
        1 => axis(0).into_iter().map(|x| vec![x]).collect(),
        _ => {
            let xs = axis(0);
            let ys = axis(1);
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    out.push(vec![*x, *y]);
                }
            }
            out
        }
    }
}

/// (∫_M ω)(g) = ∫_{gD} ω for a top form, by composite Gauss-Legendre over
/// the unit box of the translate.
pub fn integrate_over_domain(
    form: &DifferentialForm,
    window: &FlatWindow,
    g: &GroupElement,
    panels: usize,
) -> Result<f64> {
    if form.degree != form.dim || form.dim != window.dim() {
        return Err(Error::Input(
            "per-domain integration needs a top form matching the model dimension".into(),
        ));
    }
    let cell = window.cell_box(g)?;
    let value = match form.dim {
        1 => {
            let c = &form.coeffs[0];
            quad::integrate_1d(&|x| c.eval(&[x]), cell.lo[0], cell.hi[0], panels)
        }
        _ => {
            let c = &form.coeffs[0];
            quad::integrate_2d(
                &|x, y| c.eval(&[x, y]),
                cell.lo[0],
                cell.hi[0],
                cell.lo[1],
                cell.hi[1],
                panels,
                panels,
            )
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_relative_eq;

    #[test]
    fn boundedness_of_the_sine_form() {
        let form = DifferentialForm::new(1, 1, vec![parse("sin(2*pi*x)").unwrap()], None).unwrap();
        let report = boundedness_estimate(&form, &Rect::new_1d(-2.0, 2.0), 256);
        assert_relative_eq!(report.sup_norm, 1.0, epsilon = 1e-2);
        assert_relative_eq!(
            report.sup_derivative,
            2.0 * std::f64::consts::PI,
            epsilon = 0.05
        );
        assert!(report.periodicity_ok);
    }

    #[test]
    fn drifting_form_reports_a_periodicity_violation() {
        let form = DifferentialForm::new(1, 1, vec![parse("x").unwrap()], None).unwrap();
        let report = boundedness_estimate(&form, &Rect::new_1d(-2.0, 2.0), 64);
        assert!(!report.periodicity_ok);
        assert_relative_eq!(report.periodicity_defect, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn constant_area_form() {
        let form = DifferentialForm::new(2, 2, vec![parse("1").unwrap()], None).unwrap();
        let report =
            boundedness_estimate(&form, &Rect::new_2d([-1.0, -1.0], [1.0, 1.0]), 32);
        assert_relative_eq!(report.sup_norm, 1.0, epsilon = 1e-12);
        assert!(report.sup_derivative < 1e-9);
    }

    #[test]
    fn per_domain_integrals() {
        let w = FlatWindow::new_1d(0.0, 3).unwrap();
        let dx = DifferentialForm::new(1, 1, vec![parse("1").unwrap()], None).unwrap();
        let sine =
            DifferentialForm::new(1, 1, vec![parse("sin(2*pi*x)").unwrap()], None).unwrap();
        for g in w.inner_labels() {
            assert_relative_eq!(
                integrate_over_domain(&dx, &w, &g, 64).unwrap(),
                1.0,
                epsilon = 1e-14
            );
            assert!(integrate_over_domain(&sine, &w, &g, 64).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_unit_mass_bump_integrates_to_one() {
        // (1 + cos 2πx)(1 + cos 2πy) has unit mass on every unit square
        let w = FlatWindow::new_2d([0.0, 0.0], 2).unwrap();
        let form = DifferentialForm::new(
            2,
            2,
            vec![parse("(1 + cos(2*pi*x))*(1 + cos(2*pi*y))").unwrap()],
            None,
        )
        .unwrap();
        for g in w.inner_labels() {
            let mass = integrate_over_domain(&form, &w, &g, 32).unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "mass {}", mass);
        }
    }

    #[test]
    fn lattice_periodic_integrand_is_translation_consistent() {
        let w = FlatWindow::new_2d([0.25, 0.25], 2).unwrap();
        let form = DifferentialForm::new(
            2,
            2,
            vec![parse("exp(sin(2*pi*x))*cos(2*pi*y)").unwrap()],
            None,
        )
        .unwrap();
        let values: Vec<f64> = w
            .inner_labels()
            .iter()
            .map(|g| integrate_over_domain(&form, &w, g, 16).unwrap())
            .collect();
        for v in &values {
            assert_relative_eq!(*v, values[0], epsilon = 1e-12);
        }
    }

    #[test]
    fn degree_must_match_for_domain_integrals() {
        let w = FlatWindow::new_2d([0.0, 0.0], 2).unwrap();
        let one_form = DifferentialForm::new(
            2,
            1,
            vec![parse("x").unwrap(), parse("y").unwrap()],
            None,
        )
        .unwrap();
        let g = w.group().identity();
        assert!(integrate_over_domain(&one_form, &w, &g, 8).is_err());
    }
}
