//! Analytic vector fields on flat model spaces: zero finding, winding
//! indices, tameness.
//!
//! Fields are expression maps ℝⁿ → ℝⁿ, lattice-periodic outside a declared
//! finite-deviation box; periodicity is what makes |v| and |dv| bounded.
//! Local indices are mapping degrees: winding numbers in dimension two, sign
//! pairs in dimension one. Degenerate zeros are flagged, never silently
//! assigned a Jacobian-sign index.

use crate::expr::Expr;
use crate::flat::{FlatWindow, Rect};
use crate::group::GroupElement;
use crate::table::{IndexTable, Provenance};
use crate::{Error, Result};
use std::collections::BTreeMap;

pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITERS: usize = 50;
pub const FD_STEP: f64 = 1e-5;
pub const WINDING_SAMPLES_MIN: usize = 64;
pub const WINDING_SAMPLES_MAX: usize = 8192;

#[derive(Debug, Clone)]
pub struct AnalyticField {
    dim: usize,
    components: Vec<Expr>,
    deviation_box: Option<Rect>,
}

impl AnalyticField {
    pub fn new(dim: usize, components: Vec<Expr>, deviation_box: Option<Rect>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Input("field dimension must be 1 or 2".into()));
        }
        if components.len() != dim {
            return Err(Error::Input(format!(
                "{} components given for a {}-dimensional field",
                components.len(),
                dim
            )));
        }
        for c in &components {
            if let Some(axis) = c.max_coord() {
                if axis >= dim {
                    return Err(Error::Input(
                        "component uses a coordinate beyond the field dimension".into(),
                    ));
                }
            }
        }
        if let Some(b) = &deviation_box {
            if b.dim() != dim {
                return Err(Error::Input("deviation box dimension mismatch".into()));
            }
        }
        Ok(AnalyticField {
            dim,
            components,
            deviation_box,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn deviation_box(&self) -> Option<&Rect> {
        self.deviation_box.as_ref()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.eval(x).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Sampled check that the field equals its unit-lattice translate
    /// wherever both points are outside the deviation box.
    pub fn check_periodicity(&self, window: &Rect, per_axis: usize, tol: f64) -> Result<()> {
        let outside = |x: &[f64]| {
            self.deviation_box
                .as_ref()
                .map(|b| !b.contains(x))
                .unwrap_or(true)
        };
        let mut worst = 0.0f64;
        for point in grid_points(window, per_axis) {
            for axis in 0..self.dim {
                let mut shifted = point.clone();
                shifted[axis] += 1.0;
                if !outside(&point) || !outside(&shifted) {
                    continue;
                }
                let a = self.eval(&point);
                let b = self.eval(&shifted);
                for (va, vb) in a.iter().zip(&b) {
                    worst = worst.max((va - vb).abs());
                }
            }
        }
        if worst > tol {
            return Err(Error::Input(format!(
                "periodicity violation: translate mismatch {} exceeds {}",
                worst, tol
            )));
        }
        Ok(())
    }

    /// Central finite-difference Jacobian.
    pub fn jacobian_fd(&self, x: &[f64], step: f64) -> Vec<Vec<f64>> {
        let mut jac = vec![vec![0.0; self.dim]; self.dim];
        for j in 0..self.dim {
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[j] += step;
            minus[j] -= step;
            let vp = self.eval(&plus);
            let vm = self.eval(&minus);
            for i in 0..self.dim {
                jac[i][j] = (vp[i] - vm[i]) / (2.0 * step);
            }
        }
        jac
    }
}

fn grid_points(window: &Rect, per_axis: usize) -> Vec<Vec<f64>> {
    let n = per_axis.max(2);
    let axis_points = |axis: usize| -> Vec<f64> {
        (0..=n)
            .map(|k| window.lo[axis] + window.side(axis) * k as f64 / n as f64)
            .collect()
    };
    match window.dim() {
        1 => axis_points(0).into_iter().map(|x| vec![x]).collect(),
        _ => {
            let xs = axis_points(0);
            let ys = axis_points(1);
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

#[derive(Debug, Clone)]
pub struct Zero {
    pub point: Vec<f64>,
    /// Jacobian nearly singular at the zero: winding is the only index
    /// authority for it.
    pub degenerate: bool,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub zeros: Vec<Zero>,
    /// Certified separation: half the minimum pairwise distance.
    pub separation: f64,
}

/// Locates the zeros of the field in a box by grid bracketing plus bisection
/// (n = 1) or damped Newton from sign-change cells (n = 2). Suspected
/// degenerate clusters or near-zeros away from located zeros produce a
/// refinement error, never a silent guess.
pub fn find_zeros(v: &AnalyticField, window: &Rect, grid: usize, tol: f64) -> Result<ZeroSet> {
    let mut zeros = match v.dim() {
        1 => find_zeros_1d(v, window, grid, tol)?,
        _ => find_zeros_2d(v, window, grid, tol)?,
    };
    zeros.sort_by(|a, b| a.point.partial_cmp(&b.point).expect("finite coordinates"));

    // global miss detection: |v| small far from every located zero
    let cell = window.side(0) / grid as f64;
    let mut suspicious = f64::INFINITY;
    for p in grid_points(window, grid) {
        let near_zero = zeros
            .iter()
            .any(|z| dist(&p, &z.point) < 2.0 * cell);
        if !near_zero {
            suspicious = suspicious.min(v.norm(&p));
        }
    }
    if suspicious < 1e-6 {
        return Err(Error::Refinement(format!(
            "|v| = {:.3e} far from every located zero; possible missed or degenerate zero",
            suspicious
        )));
    }

    let mut min_pair = f64::INFINITY;
    for i in 0..zeros.len() {
        for j in (i + 1)..zeros.len() {
            min_pair = min_pair.min(dist(&zeros[i].point, &zeros[j].point));
        }
    }
    if min_pair < 4.0 * cell && min_pair.is_finite() {
        return Err(Error::Refinement(format!(
            "zeros {:.3e} apart at grid pitch {:.3e}; refine the grid",
            min_pair, cell
        )));
    }
    let separation = if min_pair.is_finite() {
        min_pair / 2.0
    } else {
        window.side(0) / 2.0
    };
    Ok(ZeroSet { zeros, separation })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn find_zeros_1d(v: &AnalyticField, window: &Rect, grid: usize, tol: f64) -> Result<Vec<Zero>> {
    let (a, b) = (window.lo[0], window.hi[0]);
    let h = (b - a) / grid as f64;
    let f = |x: f64| v.eval(&[x])[0];
    let mut zeros: Vec<Zero> = Vec::new();
    let mut push_zero = |x: f64, v: &AnalyticField| {
        if zeros.iter().all(|z| (z.point[0] - x).abs() > 2.0 * tol) {
            let deriv = v.jacobian_fd(&[x], FD_STEP)[0][0];
            zeros.push(Zero {
                point: vec![x],
                degenerate: deriv.abs() < 1e-6,
                residual: f(x).abs(),
            });
        }
    };
    // grid values this small are zeros sitting (up to roundoff) on a node
    let atol = 1e-12;
    for k in 0..grid {
        let (x0, x1) = (a + h * k as f64, a + h * (k + 1) as f64);
        let (f0, f1) = (f(x0), f(x1));
        if f0.abs() <= atol {
            push_zero(x0, v);
            continue;
        }
        if f0 * f1 < 0.0 {
            // bisection
            let (mut lo, mut hi) = (x0, x1);
            let mut flo = f0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 || hi - lo < tol {
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            push_zero(0.5 * (lo + hi), v);
        }
    }
    if f(b).abs() <= atol {
        push_zero(b, v);
    }
    Ok(zeros)
}

fn find_zeros_2d(v: &AnalyticField, window: &Rect, grid: usize, tol: f64) -> Result<Vec<Zero>> {
    let hx = window.side(0) / grid as f64;
    let hy = window.side(1) / grid as f64;
    let mut zeros: Vec<Zero> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let corners = [
                [window.lo[0] + hx * i as f64, window.lo[1] + hy * j as f64],
                [
                    window.lo[0] + hx * (i + 1) as f64,
                    window.lo[1] + hy * j as f64,
                ],
                [
                    window.lo[0] + hx * i as f64,
                    window.lo[1] + hy * (j + 1) as f64,
                ],
                [
                    window.lo[0] + hx * (i + 1) as f64,
                    window.lo[1] + hy * (j + 1) as f64,
                ],
            ];
            let values: Vec<Vec<f64>> = corners.iter().map(|c| v.eval(c)).collect();
            let straddles = (0..2).all(|comp| {
                let vs: Vec<f64> = values.iter().map(|val| val[comp]).collect();
                vs.iter().cloned().fold(f64::INFINITY, f64::min) <= 0.0
                    && vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) >= 0.0
            });
            if !straddles {
                continue;
            }
            let center = [
                window.lo[0] + hx * (i as f64 + 0.5),
                window.lo[1] + hy * (j as f64 + 0.5),
            ];
            if let Some(z) = newton_2d(v, &center, tol) {
                if !window.contains(&z.point) {
                    continue;
                }
                let pitch = hx.min(hy);
                match zeros
                    .iter()
                    .find(|existing| dist(&existing.point, &z.point) <= pitch)
                {
                    None => zeros.push(z),
                    Some(existing) => {
                        // re-convergence from a neighboring cell lands within
                        // Newton tolerance; anything farther is a second zero
                        // the grid cannot separate
                        let gap = dist(&existing.point, &z.point);
                        let merge_radius = if z.degenerate || existing.degenerate {
                            pitch
                        } else {
                            50.0 * tol
                        };
                        if gap > merge_radius {
                            return Err(Error::Refinement(format!(
                                "two zeros {:.3e} apart inside one grid cell (pitch {:.3e})",
                                gap, pitch
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(zeros)
}

fn newton_2d(v: &AnalyticField, start: &[f64; 2], tol: f64) -> Option<Zero> {
    let mut x = [start[0], start[1]];
    for _ in 0..NEWTON_MAX_ITERS {
        let f = v.eval(&x);
        let norm = (f[0] * f[0] + f[1] * f[1]).sqrt();
        if norm < tol {
            let jac = v.jacobian_fd(&x, FD_STEP);
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            return Some(Zero {
                point: x.to_vec(),
                degenerate: det.abs() < 1e-6,
                residual: norm,
            });
        }
        let jac = v.jacobian_fd(&x, FD_STEP);
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let step = if det.abs() < 1e-14 {
            // singular Jacobian: damped gradient-ish fallback
            [0.5 * f[0], 0.5 * f[1]]
        } else {
            [
                (jac[1][1] * f[0] - jac[0][1] * f[1]) / det,
                (-jac[1][0] * f[0] + jac[0][0] * f[1]) / det,
            ]
        };
        // damping keeps the iteration inside the basin
        let cap = 0.5;
        let step_norm = (step[0] * step[0] + step[1] * step[1]).sqrt();
        let scale = if step_norm > cap { cap / step_norm } else { 1.0 };
        x[0] -= scale * step[0];
        x[1] -= scale * step[1];
    }
    // linear convergence on degenerate zeros can exhaust the budget while
    // still being essentially converged
    let f = v.eval(&x);
    let norm = (f[0] * f[0] + f[1] * f[1]).sqrt();
    if norm < 1e-7 {
        return Some(Zero {
            point: x.to_vec(),
            degenerate: true,
            residual: norm,
        });
    }
    None
}

/// Mapping degree of v/|v| on a small contour around the zero. Dimension one
/// uses the sign pair, dimension two accumulates angle increments with
/// adaptive sample doubling until every increment is below π/2.
pub fn winding_index(v: &AnalyticField, zero: &[f64], radius: f64, samples: usize) -> Result<i64> {
    if radius <= 0.0 {
        return Err(Error::Input("contour radius must be positive".into()));
    }
    match v.dim() {
        1 => {
            let right = v.eval(&[zero[0] + radius])[0];
            let left = v.eval(&[zero[0] - radius])[0];
            if right == 0.0 || left == 0.0 {
                return Err(Error::Input(
                    "field vanishes at a contour point; shrink the radius".into(),
                ));
            }
            Ok(((right.signum() - left.signum()) / 2.0) as i64)
        }
        _ => {
            let mut n = samples.max(WINDING_SAMPLES_MIN);
            loop {
                let mut total = 0.0f64;
                let mut prev_angle: Option<f64> = None;
                let mut first_angle = 0.0;
                let mut ok = true;
                for k in 0..n {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    let p = [
                        zero[0] + radius * theta.cos(),
                        zero[1] + radius * theta.sin(),
                    ];
                    let val = v.eval(&p);
                    let norm = (val[0] * val[0] + val[1] * val[1]).sqrt();
                    if norm < 1e-12 {
                        return Err(Error::Input(
                            "field nearly vanishes on the contour; adjust the radius".into(),
                        ));
                    }
                    let angle = val[1].atan2(val[0]);
                    if let Some(prev) = prev_angle {
                        let delta = wrap_angle(angle - prev);
                        if delta.abs() >= std::f64::consts::FRAC_PI_2 {
                            ok = false;
                            break;
                        }
                        total += delta;
                    } else {
                        first_angle = angle;
                    }
                    prev_angle = Some(angle);
                }
                if ok {
                    let closing = wrap_angle(first_angle - prev_angle.expect("n >= 1"));
                    if closing.abs() >= std::f64::consts::FRAC_PI_2 {
                        ok = false;
                    } else {
                        total += closing;
                        let winding = total / (2.0 * std::f64::consts::PI);
                        let rounded = winding.round();
                        if (winding - rounded).abs() > 0.25 {
                            return Err(Error::Quadrature(format!(
                                "winding {} is not close to an integer",
                                winding
                            )));
                        }
                        return Ok(rounded as i64);
                    }
                }
                if !ok {
                    if n >= WINDING_SAMPLES_MAX {
                        return Err(Error::Refinement(
                            "angle increments stay above π/2 at the maximum sample count".into(),
                        ));
                    }
                    n *= 2;
                }
            }
        }
    }
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a;
    while a > std::f64::consts::PI {
        a -= 2.0 * std::f64::consts::PI;
    }
    while a < -std::f64::consts::PI {
        a += 2.0 * std::f64::consts::PI;
    }
    a
}

/// Tameness verdicts. `Tame` means the separation and lower-bound conditions
/// hold; `StronglyTame` additionally places every δ-ball inside a single
/// domain translate.
#[derive(Debug, Clone, PartialEq)]
pub enum TameVerdict {
    StronglyTame { delta: f64, epsilon: f64 },
    Tame { delta: f64, epsilon: f64, obstruction: String },
    Fail { reason: String },
}

impl TameVerdict {
    pub fn is_strongly_tame(&self) -> bool {
        matches!(self, TameVerdict::StronglyTame { .. })
    }

    pub fn is_tame(&self) -> bool {
        !matches!(self, TameVerdict::Fail { .. })
    }
}

/// Grid-verifies |v| ≥ ε outside the δ-balls around the zeros, then checks
/// each ball against the domain walls.
pub fn tameness_check(
    v: &AnalyticField,
    zeros: &ZeroSet,
    delta: f64,
    epsilon: f64,
    window: &FlatWindow,
    grid: usize,
) -> Result<TameVerdict> {
    if delta <= 0.0 || epsilon <= 0.0 {
        return Err(Error::Input("delta and epsilon must be positive".into()));
    }
    for i in 0..zeros.zeros.len() {
        for j in (i + 1)..zeros.zeros.len() {
            if dist(&zeros.zeros[i].point, &zeros.zeros[j].point) < 2.0 * delta {
                return Ok(TameVerdict::Fail {
                    reason: format!(
                        "δ-balls around zeros {} and {} overlap",
                        i, j
                    ),
                });
            }
        }
    }
    let bbox = window.inner_bounding_box()?;
    let mut min_off_ball = f64::INFINITY;
    for p in grid_points(&bbox, grid) {
        let inside_ball = zeros.zeros.iter().any(|z| dist(&p, &z.point) < delta);
        if !inside_ball {
            min_off_ball = min_off_ball.min(v.norm(&p));
        }
    }
    if min_off_ball < epsilon {
        return Ok(TameVerdict::Fail {
            reason: format!(
                "|v| reaches {:.6} < ε = {} off the δ-balls",
                min_off_ball, epsilon
            ),
        });
    }
    // strong tameness: the closed δ-interval around each zero must fit in
    // one translate per axis
    for z in &zeros.zeros {
        for axis in 0..window.dim() {
            let off = window.offset()[axis];
            let lo_cell = (z.point[axis] - delta - off).floor();
            let hi = z.point[axis] + delta;
            if hi > off + lo_cell + 1.0 {
                return Ok(TameVerdict::Tame {
                    delta,
                    epsilon,
                    obstruction: format!(
                        "zero at {:?} sits within δ of a domain wall",
                        z.point
                    ),
                });
            }
        }
    }
    Ok(TameVerdict::StronglyTame { delta, epsilon })
}

/// v = f - id for an expression map C¹-close to the identity; fixed points
/// of f are zeros of v.
pub fn diffeo_to_field(f_components: Vec<Expr>, window: &Rect, grid: usize) -> Result<AnalyticField> {
    let dim = window.dim();
    if f_components.len() != dim {
        return Err(Error::Input("map component count mismatch".into()));
    }
    let v_components: Vec<Expr> = f_components
        .iter()
        .enumerate()
        .map(|(i, f)| crate::expr::sub(f.clone(), Expr::coord(i)))
        .collect();
    let v = AnalyticField::new(dim, v_components, None)?;
    let mut worst = 0.0f64;
    for p in grid_points(window, grid) {
        let jac = v.jacobian_fd(&p, FD_STEP); // Df - I
        for row in &jac {
            for entry in row {
                worst = worst.max(entry.abs());
            }
        }
    }
    if worst >= 1.0 {
        return Err(Error::NotC1Close(format!(
            "max |Df - I| = {:.4} on the sampled box",
            worst
        )));
    }
    Ok(v)
}

/// Per-domain winding index table over the inner window. The field must be
/// strongly tame at the given δ so every zero is interior to one translate.
pub fn winding_index_table(
    v: &AnalyticField,
    window: &FlatWindow,
    zeros: &ZeroSet,
    delta: f64,
) -> Result<IndexTable> {
    let mut per_label: BTreeMap<GroupElement, i64> = BTreeMap::new();
    for g in window.inner_labels() {
        per_label.insert(g, 0);
    }
    let radius = (0.5 * delta).max(1e-4);
    for z in &zeros.zeros {
        let label = window.label_for_point(&z.point)?;
        if let Some(entry) = per_label.get_mut(&label) {
            *entry += winding_index(v, &z.point, radius, WINDING_SAMPLES_MIN)?;
        }
    }
    let mut table = IndexTable::new(window.group().clone(), Provenance::Winding);
    for (g, value) in per_label {
        table.set(g, value);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_relative_eq;

    fn sin_field_1d() -> AnalyticField {
        AnalyticField::new(1, vec![parse("sin(2*pi*x)").unwrap()], None).unwrap()
    }

    fn sin_field_2d() -> AnalyticField {
        AnalyticField::new(
            2,
            vec![parse("sin(2*pi*x)").unwrap(), parse("sin(2*pi*y)").unwrap()],
            None,
        )
        .unwrap()
    }

    #[test]
    fn zeros_of_sine_on_a_period() {
        let v = sin_field_1d();
        let zs = find_zeros(&v, &Rect::new_1d(-0.1, 1.9), 128, NEWTON_TOL).unwrap();
        let points: Vec<f64> = zs.zeros.iter().map(|z| z.point[0]).collect();
        assert_eq!(points.len(), 4);
        for (found, expected) in points.iter().zip([0.0, 0.5, 1.0, 1.5]) {
            assert_relative_eq!(*found, expected, epsilon = 1e-10);
        }
        assert!(zs.zeros.iter().all(|z| !z.degenerate));
    }

    #[test]
    fn zeros_of_the_product_field() {
        let v = sin_field_2d();
        let zs = find_zeros(
            &v,
            &Rect::new_2d([0.1, 0.1], [1.1, 1.1]),
            64,
            NEWTON_TOL,
        )
        .unwrap();
        assert_eq!(zs.zeros.len(), 4, "half-integer lattice points");
        for z in &zs.zeros {
            for c in &z.point {
                let nearest = (c * 2.0).round() / 2.0;
                assert_relative_eq!(*c, nearest, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_double_zero_is_flagged() {
        // v = (x² - y², 2xy) is z², a double zero at the origin
        let v = AnalyticField::new(
            2,
            vec![parse("x*x - y*y").unwrap(), parse("2*x*y").unwrap()],
            None,
        )
        .unwrap();
        let zs = find_zeros(&v, &Rect::new_2d([-1.0, -1.0], [1.0, 1.0]), 64, NEWTON_TOL).unwrap();
        assert_eq!(zs.zeros.len(), 1);
        assert!(zs.zeros[0].degenerate);
        assert!(zs.zeros[0].point.iter().all(|c| c.abs() < 1e-5));
    }

    #[test]
    fn winding_indices_of_model_fields() {
        let id = AnalyticField::new(2, vec![parse("x").unwrap(), parse("y").unwrap()], None).unwrap();
        assert_eq!(winding_index(&id, &[0.0, 0.0], 0.5, 64).unwrap(), 1);
        let reflect =
            AnalyticField::new(2, vec![parse("x").unwrap(), parse("-y").unwrap()], None).unwrap();
        assert_eq!(winding_index(&reflect, &[0.0, 0.0], 0.5, 64).unwrap(), -1);
        let squared = AnalyticField::new(
            2,
            vec![parse("x*x - y*y").unwrap(), parse("2*x*y").unwrap()],
            None,
        )
        .unwrap();
        assert_eq!(winding_index(&squared, &[0.0, 0.0], 0.5, 4096).unwrap(), 2);
    }

    #[test]
    fn one_dimensional_signs() {
        let v = sin_field_1d();
        assert_eq!(winding_index(&v, &[0.0], 0.2, 0).unwrap(), 1);
        assert_eq!(winding_index(&v, &[0.5], 0.2, 0).unwrap(), -1);
    }

    #[test]
    fn winding_is_radius_stable_and_additive() {
        let v = sin_field_2d();
        // single zero: halving the radius changes nothing
        assert_eq!(winding_index(&v, &[0.5, 0.5], 0.2, 64).unwrap(), 1);
        assert_eq!(winding_index(&v, &[0.5, 0.5], 0.1, 64).unwrap(), 1);
        // a big contour around four zeros sums their indices: +1-1-1+1 = 0
        assert_eq!(winding_index(&v, &[0.25, 0.25], 0.45, 256).unwrap(), 0);
    }

    #[test]
    fn winding_matches_jacobian_sign_for_nondegenerate_zeros() {
        let v = sin_field_2d();
        let zs = find_zeros(&v, &Rect::new_2d([0.1, 0.1], [1.1, 1.1]), 64, NEWTON_TOL).unwrap();
        for z in &zs.zeros {
            let jac = v.jacobian_fd(&z.point, FD_STEP);
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            let w = winding_index(&v, &z.point, 0.15, 64).unwrap();
            assert_eq!(w, det.signum() as i64);
        }
    }

    #[test]
    fn tameness_depends_on_the_domain_offset() {
        let v = sin_field_1d();

        let shifted = FlatWindow::new_1d(0.25, 3).unwrap();
        let bbox = shifted.inner_bounding_box().unwrap();
        let zs = find_zeros(&v, &bbox, 512, NEWTON_TOL).unwrap();
        let verdict = tameness_check(&v, &zs, 0.2, 0.5, &shifted, 512).unwrap();
        assert!(verdict.is_strongly_tame(), "{:?}", verdict);

        let aligned = FlatWindow::new_1d(0.0, 3).unwrap();
        let bbox = aligned.inner_bounding_box().unwrap();
        let zs = find_zeros(&v, &bbox, 512, NEWTON_TOL).unwrap();
        let verdict = tameness_check(&v, &zs, 0.2, 0.5, &aligned, 512).unwrap();
        assert!(verdict.is_tame() && !verdict.is_strongly_tame(), "{:?}", verdict);
    }

    #[test]
    fn product_field_is_strongly_tame_at_quarter_offset() {
        let v = sin_field_2d();
        let w = FlatWindow::new_2d([0.25, 0.25], 2).unwrap();
        let bbox = w.inner_bounding_box().unwrap();
        let zs = find_zeros(&v, &bbox, 96, NEWTON_TOL).unwrap();
        let verdict = tameness_check(&v, &zs, 0.2, 0.3, &w, 128).unwrap();
        assert!(verdict.is_strongly_tame(), "{:?}", verdict);
    }

    #[test]
    fn epsilon_too_large_fails() {
        let v = sin_field_1d();
        let w = FlatWindow::new_1d(0.25, 3).unwrap();
        let bbox = w.inner_bounding_box().unwrap();
        let zs = find_zeros(&v, &bbox, 512, NEWTON_TOL).unwrap();
        let verdict = tameness_check(&v, &zs, 0.2, 1.5, &w, 512).unwrap();
        assert!(matches!(verdict, TameVerdict::Fail { .. }));
    }

    #[test]
    fn diffeo_conversion_and_closeness() {
        let f = vec![parse("x + 0.1*sin(2*pi*x)").unwrap()];
        let v = diffeo_to_field(f, &Rect::new_1d(-2.0, 2.0), 256).unwrap();
        let zs = find_zeros(&v, &Rect::new_1d(-0.2, 1.2), 256, NEWTON_TOL).unwrap();
        let pts: Vec<f64> = zs.zeros.iter().map(|z| z.point[0]).collect();
        assert_eq!(pts.len(), 3); // 0, 0.5, 1 within the box
        // steep map: |f'(x) - 1| = 2π·0.9 > 1 somewhere
        let steep = vec![parse("x + 0.9*sin(2*pi*x)").unwrap()];
        assert!(matches!(
            diffeo_to_field(steep, &Rect::new_1d(-2.0, 2.0), 256),
            Err(Error::NotC1Close(_))
        ));
    }

    #[test]
    fn identity_map_is_flagged_as_degenerate() {
        // f = id gives v ≡ 0: no isolated zeros, reported as a refinement
        // diagnostic instead of a silent empty zero set
        let v = diffeo_to_field(vec![parse("x").unwrap()], &Rect::new_1d(-2.0, 2.0), 64)
            .unwrap();
        assert!(matches!(
            find_zeros(&v, &Rect::new_1d(-2.0, 2.0), 128, NEWTON_TOL),
            Err(Error::Refinement(_))
        ));
    }

    #[test]
    fn periodicity_check_distinguishes_fields() {
        let periodic = sin_field_1d();
        assert!(periodic
            .check_periodicity(&Rect::new_1d(-2.0, 2.0), 64, 1e-9)
            .is_ok());
        let drifting = AnalyticField::new(1, vec![parse("x").unwrap()], None).unwrap();
        assert!(drifting
            .check_periodicity(&Rect::new_1d(-2.0, 2.0), 64, 1e-9)
            .is_err());
    }

    #[test]
    fn winding_table_for_the_product_field() {
        let v = sin_field_2d();
        let window = FlatWindow::new_2d([0.25, 0.25], 3).unwrap();
        let bbox = window.inner_bounding_box().unwrap();
        let zs = find_zeros(&v, &bbox, 96, NEWTON_TOL).unwrap();
        let verdict = tameness_check(&v, &zs, 0.2, 0.3, &window, 96).unwrap();
        assert!(verdict.is_strongly_tame());
        let table = winding_index_table(&v, &window, &zs, 0.2).unwrap();
        assert!(table.entries().values().all(|&v| v == 0));
        assert_eq!(table.len(), window.inner_labels().len());
    }
}
