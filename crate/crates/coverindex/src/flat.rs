//! Flat model spaces: ℝ over ℤ and ℝ² over ℤ², with unit-translate
//! fundamental domains at a configurable offset.
//!
//! These are the spaces where the numerical integral is honest: the domain of
//! the translate g is the unit interval or square at offset + g, and the word
//! metric window is the ball of the deck lattice.

use crate::group::{Ball, GroupElement, GroupSpec};
use crate::{Error, Result};
use std::sync::Arc;

/// An axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct Rect {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Rect {
    pub fn new_1d(lo: f64, hi: f64) -> Self {
        Rect {
            lo: vec![lo],
            hi: vec![hi],
        }
    }

    pub fn new_2d(lo: [f64; 2], hi: [f64; 2]) -> Self {
        Rect {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(xi, (lo, hi))| *xi >= *lo && *xi <= *hi)
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }
}

/// A finite window of unit domains on a flat model space.
#[derive(Debug, Clone)]
pub struct FlatWindow {
    group: Arc<GroupSpec>,
    dim: usize,
    radius: u32,
    offset: Vec<f64>,
    ball: Ball,
}

impl FlatWindow {
    pub fn new_1d(offset: f64, radius: u32) -> Result<Self> {
        let group = Arc::new(GroupSpec::cyclic_z());
        let ball = Ball::compute(&group, &group.standard_generators(), radius)?;
        Ok(FlatWindow {
            group,
            dim: 1,
            radius,
            offset: vec![offset],
            ball,
        })
    }

    pub fn new_2d(offset: [f64; 2], radius: u32) -> Result<Self> {
        let group = Arc::new(GroupSpec::free_abelian(2)?);
        let ball = Ball::compute(&group, &group.standard_generators(), radius)?;
        Ok(FlatWindow {
            group,
            dim: 2,
            radius,
            offset: offset.to_vec(),
            ball,
        })
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn labels(&self) -> &[GroupElement] {
        self.ball.elements()
    }

    pub fn inner_labels(&self) -> Vec<GroupElement> {
        self.ball.sub_ball(self.radius.saturating_sub(1))
    }

    pub fn contains_label(&self, g: &GroupElement) -> bool {
        self.ball.contains(g)
    }

    /// Integer coordinates of a label.
    pub fn coords(&self, g: &GroupElement) -> Result<Vec<i64>> {
        match (self.dim, g.as_int(), g.as_vector()) {
            (1, Some(k), _) => Ok(vec![k]),
            (2, _, Some(v)) => Ok(v.to_vec()),
            _ => Err(Error::Input("label does not match the model dimension".into())),
        }
    }

    pub fn label_from_coords(&self, coords: &[i64]) -> Result<GroupElement> {
        let s = match self.dim {
            1 => coords[0].to_string(),
            _ => format!(
                "({})",
                coords
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        };
        self.group.parse_element(&s)
    }

    /// The closed unit box of the translate gD.
    pub fn cell_box(&self, g: &GroupElement) -> Result<Rect> {
        let coords = self.coords(g)?;
        let lo: Vec<f64> = coords
            .iter()
            .zip(&self.offset)
            .map(|(c, off)| *c as f64 + off)
            .collect();
        let hi: Vec<f64> = lo.iter().map(|l| l + 1.0).collect();
        Ok(Rect { lo, hi })
    }

    /// Which translate's half-open box [offset + k, offset + k + 1) contains
    /// the point.
    pub fn label_for_point(&self, x: &[f64]) -> Result<GroupElement> {
        if x.len() != self.dim {
            return Err(Error::Input("point dimension mismatch".into()));
        }
        let coords: Vec<i64> = x
            .iter()
            .zip(&self.offset)
            .map(|(xi, off)| (xi - off).floor() as i64)
            .collect();
        self.label_from_coords(&coords)
    }

    /// Bounding box of the inner window's cells.
    pub fn inner_bounding_box(&self) -> Result<Rect> {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for g in self.inner_labels() {
            let cell = self.cell_box(&g)?;
            for a in 0..self.dim {
                lo[a] = lo[a].min(cell.lo[a]);
                hi[a] = hi[a].max(cell.hi[a]);
            }
        }
        Ok(Rect { lo, hi })
    }
}
