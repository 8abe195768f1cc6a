//! Thom bump forms and the index as a pullback integral.
//!
//! The fiber form is built from a quintic smoothstep profile ρ vanishing
//! near 0 and equal to 1 beyond ε/2, giving a radial density of exact unit
//! fiber mass supported in the annulus where ρ climbs. Pulling it back under
//! a strongly tame field and integrating over a translate recovers the sum
//! of local indices there: the integrand vanishes identically outside the
//! δ-balls around the zeros, so the per-domain integral localizes and is
//! evaluated only over those balls.

use super::sample_grid;
use crate::analytic::{AnalyticField, ZeroSet, FD_STEP};
use crate::flat::FlatWindow;
use crate::group::GroupElement;
use crate::quad;
use crate::table::{IndexTable, Provenance};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Radial fiber bump of unit mass supported in the ε/2-ball.
#[derive(Debug, Clone)]
pub struct ThomBump {
    epsilon: f64,
    /// ρ transition band: 0 below `inner`, 1 above `outer` = ε/2.
    inner: f64,
    outer: f64,
}

impl ThomBump {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon <= 0.0 {
            return Err(Error::Input("bump epsilon must be positive".into()));
        }
        Ok(ThomBump {
            epsilon,
            inner: epsilon / 8.0,
            outer: epsilon / 2.0,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn support_radius(&self) -> f64 {
        self.outer
    }

    /// Quintic smoothstep profile.
    pub fn rho(&self, r: f64) -> f64 {
        if r <= self.inner {
            0.0
        } else if r >= self.outer {
            1.0
        } else {
            let t = (r - self.inner) / (self.outer - self.inner);
            t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
        }
    }

    pub fn rho_prime(&self, r: f64) -> f64 {
        if r <= self.inner || r >= self.outer {
            0.0
        } else {
            let t = (r - self.inner) / (self.outer - self.inner);
            30.0 * t * t * (1.0 - t) * (1.0 - t) / (self.outer - self.inner)
        }
    }

    /// The fiber density w(y): ρ'(|y|)/2 on the line, ρ'(|y|)/(2π|y|) on the
    /// plane. ∫ w = ∫ρ' = 1 exactly, independently of the band choice.
    pub fn density(&self, y: &[f64]) -> f64 {
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        match y.len() {
            1 => 0.5 * self.rho_prime(r),
            _ => {
                if r <= self.inner {
                    0.0
                } else {
                    self.rho_prime(r) / (2.0 * std::f64::consts::PI * r)
                }
            }
        }
    }

    /// Fiber mass by the radial reduction: in either dimension the angular
    /// part integrates away and the mass is ∫ ρ' over the band, a quartic
    /// polynomial that Gauss-Legendre integrates exactly when the panels are
    /// aligned to the band. The closed form is exactly 1.
    pub fn fiber_mass(&self, panels: usize) -> f64 {
        quad::integrate_1d(&|r| self.rho_prime(r), self.inner, self.outer, panels)
    }

    /// Raw cartesian quadrature of the fiber density, for cross-checking the
    /// radial reduction (panel edges straddle the profile kinks, so this
    /// converges slowly and is only approximate).
    pub fn fiber_mass_cartesian(&self, dim: usize, panels: usize) -> f64 {
        let b = self.outer * 1.01;
        match dim {
            1 => quad::integrate_1d(&|y| self.density(&[y]), -b, b, panels),
            _ => quad::integrate_2d(
                &|y1, y2| self.density(&[y1, y2]),
                -b,
                b,
                -b,
                b,
                panels,
                panels,
            ),
        }
    }
}

fn det_jacobian(v: &AnalyticField, x: &[f64]) -> f64 {
    let jac = v.jacobian_fd(x, FD_STEP);
    match v.dim() {
        1 => jac[0][0],
        _ => jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0],
    }
}

/// Per-domain integral of the pulled-back Thom form, rounded to integers
/// with the rounding gap recorded. `epsilon` is the bump parameter; the
/// field must be strongly tame with tameness ε at least `epsilon`, so that
/// the bump support pulls back into the δ-balls.
pub fn index_via_thom(
    v: &AnalyticField,
    window: &FlatWindow,
    zeros: &ZeroSet,
    delta: f64,
    epsilon: f64,
    panels_per_box: usize,
) -> Result<IndexTable> {
    if v.dim() != window.dim() {
        return Err(Error::Input("field and window dimensions differ".into()));
    }
    let bump = ThomBump::new(epsilon)?;
    let support = bump.support_radius();

    // the integrand must vanish identically away from the zero boxes;
    // sample the complement to catch support leaks early
    let bbox = window.inner_bounding_box()?;
    for p in sample_grid(&bbox, 24) {
        let near = zeros
            .zeros
            .iter()
            .any(|z| p.iter().zip(&z.point).all(|(a, b)| (a - b).abs() <= delta));
        if !near && v.norm(&p) < support {
            return Err(Error::Quadrature(format!(
                "bump support leaks outside the δ-balls at {:?}; |v| = {:.4} < {:.4}",
                p,
                v.norm(&p),
                support
            )));
        }
    }

    let mut raw: BTreeMap<GroupElement, f64> = BTreeMap::new();
    for g in window.inner_labels() {
        raw.insert(g, 0.0);
    }
    for z in &zeros.zeros {
        let label = window.label_for_point(&z.point)?;
        let Some(entry) = raw.get_mut(&label) else {
            continue; // zero outside the inner window
        };
        let integral = match v.dim() {
            1 => {
                let f = |x: f64| bump.density(&v.eval(&[x])) * det_jacobian(v, &[x]);
                quad::integrate_1d(
                    &f,
                    z.point[0] - delta,
                    z.point[0] + delta,
                    panels_per_box,
                )
            }
            _ => {
                let f = |x: f64, y: f64| {
                    bump.density(&v.eval(&[x, y])) * det_jacobian(v, &[x, y])
                };
                quad::integrate_2d(
                    &f,
                    z.point[0] - delta,
                    z.point[0] + delta,
                    z.point[1] - delta,
                    z.point[1] + delta,
                    panels_per_box,
                    panels_per_box,
                )
            }
        };
        *entry += integral;
    }

    let mut table = IndexTable::new(window.group().clone(), Provenance::ThomQuadrature);
    for (g, value) in raw {
        let rounded = value.round();
        let gap = (value - rounded).abs();
        if gap > 0.1 {
            return Err(Error::Quadrature(format!(
                "per-domain value {} at {} is {:.4} from an integer; refine the quadrature",
                value,
                window.group().element_string(&g),
                gap
            )));
        }
        table.set_with_gap(g, rounded as i64, gap);
    }
    Ok(table)
}

/// Thom table for a field, treating a numerically zero field as the zero
/// section (its pullback integrand vanishes identically).
pub fn thom_table_for_field(
    v: &AnalyticField,
    window: &FlatWindow,
    delta: f64,
    epsilon_tame: f64,
    find_grid: usize,
    panels_per_box: usize,
) -> Result<IndexTable> {
    let bbox = window.inner_bounding_box()?;
    let sup = sample_grid(&bbox, 64)
        .iter()
        .map(|p| v.norm(p))
        .fold(0.0, f64::max);
    if sup < 1e-12 {
        let mut table = IndexTable::new(window.group().clone(), Provenance::ThomQuadrature);
        for g in window.inner_labels() {
            table.set_with_gap(g, 0, 0.0);
        }
        return Ok(table);
    }
    let zeros = crate::analytic::find_zeros(v, &bbox, find_grid, crate::analytic::NEWTON_TOL)?;
    let verdict =
        crate::analytic::tameness_check(v, &zeros, delta, epsilon_tame, window, find_grid)?;
    if !verdict.is_strongly_tame() {
        return Err(Error::Input(format!(
            "field is not strongly tame at δ = {}, ε = {}: {:?}",
            delta, epsilon_tame, verdict
        )));
    }
    // bump ε defaults to half the certified tameness ε
    index_via_thom(v, window, &zeros, delta, 0.5 * epsilon_tame, panels_per_box)
}

#[derive(Debug, Clone)]
pub struct HomotopyReport {
    pub table_first: IndexTable,
    pub table_second: IndexTable,
    pub tables_equal: bool,
    pub classes_equal: bool,
}

/// Straight-line homotopy invariance: both fields must be strongly tame and
/// periodic outside finite boxes, in which case their Thom tables define the
/// same coinvariant class.
pub fn homotopy_invariance_check(
    first: &AnalyticField,
    second: &AnalyticField,
    window: &FlatWindow,
    delta: f64,
    epsilon_tame: f64,
    find_grid: usize,
    panels_per_box: usize,
) -> Result<HomotopyReport> {
    if first.dim() != second.dim() || first.dim() != window.dim() {
        return Err(Error::NotComparable(
            "fields live on different model spaces".into(),
        ));
    }
    let bbox = window.inner_bounding_box()?;
    for (name, field) in [("first", first), ("second", second)] {
        if field.check_periodicity(&bbox, 32, 1e-9).is_err() {
            return Err(Error::NotComparable(format!(
                "{} field leaves the periodic-plus-finite-deviation class",
                name
            )));
        }
    }
    let table_first =
        thom_table_for_field(first, window, delta, epsilon_tame, find_grid, panels_per_box)?;
    let table_second =
        thom_table_for_field(second, window, delta, epsilon_tame, find_grid, panels_per_box)?;
    let tables_equal = table_first.entries() == table_second.entries();
    let rep_first = table_first.to_coinvariant(majority_entry(&table_first))?;
    let rep_second = table_second.to_coinvariant(majority_entry(&table_second))?;
    let classes_equal = rep_first.class_equal(&rep_second)?;
    Ok(HomotopyReport {
        table_first,
        table_second,
        tables_equal,
        classes_equal,
    })
}

/// The most common entry: the periodic part of a table whose deviations are
/// finitely supported.
pub fn majority_entry(table: &IndexTable) -> i64 {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for v in table.entries().values() {
        *counts.entry(*v).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by_key(|(_, c)| *c)
        .map(|(v, _)| v)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_relative_eq;

    #[test]
    fn fiber_mass_is_one() {
        for eps in [0.5, 0.45, 0.2] {
            let bump = ThomBump::new(eps).unwrap();
            assert_relative_eq!(bump.fiber_mass(4), 1.0, epsilon = 1e-12);
            assert_relative_eq!(bump.fiber_mass_cartesian(1, 512), 1.0, epsilon = 1e-8);
            assert_relative_eq!(bump.fiber_mass_cartesian(2, 400), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn profile_shape() {
        let bump = ThomBump::new(0.4).unwrap();
        assert_eq!(bump.rho(0.0), 0.0);
        assert_eq!(bump.rho(0.04), 0.0); // below ε/8 = 0.05
        assert_eq!(bump.rho(0.2), 1.0); // at ε/2
        assert_eq!(bump.rho(0.5), 1.0);
        assert!(bump.rho(0.1) > 0.0 && bump.rho(0.1) < 1.0);
        assert_eq!(bump.density(&[0.3, 0.0]), 0.0, "support radius is ε/2");
    }

    #[test]
    fn one_dimensional_sine_indices_cancel_per_domain() {
        let v = crate::analytic::AnalyticField::new(
            1,
            vec![parse("sin(2*pi*x)").unwrap()],
            None,
        )
        .unwrap();
        let w = FlatWindow::new_1d(0.25, 4).unwrap();
        let table = thom_table_for_field(&v, &w, 0.2, 0.9, 512, 48).unwrap();
        assert!(table.entries().values().all(|&e| e == 0));
        assert!(table.max_gap() < 1e-6, "gap {}", table.max_gap());
    }

    #[test]
    fn zero_field_gives_the_zero_table() {
        let v = crate::analytic::AnalyticField::new(1, vec![parse("0").unwrap()], None).unwrap();
        let w = FlatWindow::new_1d(0.25, 3).unwrap();
        let table = thom_table_for_field(&v, &w, 0.2, 0.5, 64, 16).unwrap();
        assert!(table.entries().values().all(|&e| e == 0));
    }

    #[test]
    fn table_is_invariant_under_halving_epsilon() {
        // representative independence: the index cannot see the bump choice
        let v = crate::analytic::AnalyticField::new(
            2,
            vec![parse("sin(2*pi*x)").unwrap(), parse("sin(2*pi*y)").unwrap()],
            None,
        )
        .unwrap();
        let w = FlatWindow::new_2d([0.25, 0.25], 2).unwrap();
        let bbox = w.inner_bounding_box().unwrap();
        let zeros = crate::analytic::find_zeros(&v, &bbox, 96, crate::analytic::NEWTON_TOL)
            .unwrap();
        let full = index_via_thom(&v, &w, &zeros, 0.2, 0.45, 48).unwrap();
        let halved = index_via_thom(&v, &w, &zeros, 0.2, 0.225, 48).unwrap();
        assert_eq!(full.entries(), halved.entries());
    }

    #[test]
    fn perturbed_field_keeps_its_class() {
        // a gaussian nudge confined to one domain moves a zero without
        // crossing a wall: same table, same class
        let v = crate::analytic::AnalyticField::new(
            1,
            vec![parse("sin(2*pi*x)").unwrap()],
            None,
        )
        .unwrap();
        let nudged = crate::analytic::AnalyticField::new(
            1,
            vec![parse("sin(2*pi*x) + 0.1*exp(-16*(x - 0.5)*(x - 0.5))").unwrap()],
            Some(crate::flat::Rect::new_1d(-1.0, 2.0)),
        )
        .unwrap();
        let window = FlatWindow::new_1d(0.25, 3).unwrap();
        let report =
            homotopy_invariance_check(&v, &nudged, &window, 0.2, 0.6, 512, 48).unwrap();
        assert!(report.classes_equal);
        assert!(report.tables_equal);
    }

    #[test]
    fn field_and_zero_section_share_the_class_on_the_torus_cover() {
        let v = crate::analytic::AnalyticField::new(
            2,
            vec![parse("sin(2*pi*x)").unwrap(), parse("sin(2*pi*y)").unwrap()],
            None,
        )
        .unwrap();
        let zero_section = crate::analytic::AnalyticField::new(
            2,
            vec![parse("0").unwrap(), parse("0").unwrap()],
            None,
        )
        .unwrap();
        let w = FlatWindow::new_2d([0.25, 0.25], 2).unwrap();
        let report =
            homotopy_invariance_check(&v, &zero_section, &w, 0.2, 0.9, 96, 48).unwrap();
        assert!(report.classes_equal, "both are class 0 = χ(torus)·[1]");
    }

    #[test]
    fn scaling_the_field_preserves_the_table() {
        let v = crate::analytic::AnalyticField::new(
            1,
            vec![parse("sin(2*pi*x)").unwrap()],
            None,
        )
        .unwrap();
        let w2 = crate::analytic::AnalyticField::new(
            1,
            vec![parse("2*sin(2*pi*x)").unwrap()],
            None,
        )
        .unwrap();
        let window = FlatWindow::new_1d(0.25, 3).unwrap();
        let report =
            homotopy_invariance_check(&v, &w2, &window, 0.2, 0.9, 512, 48).unwrap();
        assert!(report.tables_equal);
        assert!(report.classes_equal);
    }

    #[test]
    fn drifting_field_is_not_comparable() {
        // x is not lattice-periodic, so the straight line to it leaves the
        // admissible class
        let v = crate::analytic::AnalyticField::new(
            1,
            vec![parse("sin(2*pi*x)").unwrap()],
            None,
        )
        .unwrap();
        let drift = crate::analytic::AnalyticField::new(1, vec![parse("x").unwrap()], None)
            .unwrap();
        let w = FlatWindow::new_1d(0.25, 3).unwrap();
        assert!(matches!(
            homotopy_invariance_check(&v, &drift, &w, 0.2, 0.9, 128, 16),
            Err(Error::NotComparable(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_not_comparable() {
        let v1 = crate::analytic::AnalyticField::new(1, vec![parse("sin(2*pi*x)").unwrap()], None)
            .unwrap();
        let v2 = crate::analytic::AnalyticField::new(
            2,
            vec![parse("sin(2*pi*x)").unwrap(), parse("sin(2*pi*y)").unwrap()],
            None,
        )
        .unwrap();
        let w = FlatWindow::new_1d(0.25, 3).unwrap();
        assert!(matches!(
            homotopy_invariance_check(&v1, &v2, &w, 0.2, 0.9, 64, 16),
            Err(Error::NotComparable(_))
        ));
    }
}
