//! The cover restricted to a word-metric window, the fundamental domain, and
//! facet structure.
//!
//! Cell copies are pairs (base cell, label). The deck action multiplies
//! labels on the left and lifts multiply on the right, so equivariance of the
//! boundary is an identity rather than a conjugation. Assertions are made on
//! the inner window only: cells near the sphere of radius R can have
//! incomplete stars, so each window carries a margin equal to the longest
//! side shift of the base (at least 1).

use super::{BaseComplex, CellId};
use crate::group::{Ball, GroupElement, GroupSpec};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A labeled copy of a base cell.
pub type CellCopy = (CellId, GroupElement);

#[derive(Debug, Clone)]
pub struct CoverWindow {
    base: Arc<BaseComplex>,
    gens: Vec<GroupElement>,
    radius: u32,
    ball: Ball,
    margin: u32,
    side_shifts: Vec<[GroupElement; 3]>,
}

impl CoverWindow {
    /// Builds the window over ball(radius), validating the base first.
    pub fn build(base: Arc<BaseComplex>, gens: &[GroupElement], radius: u32) -> Result<Self> {
        let report = base.validate();
        if !report.is_valid() {
            return Err(Error::InvalidComplex(format!(
                "base complex invalid: {}",
                report
                    .violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            )));
        }
        Self::build_unchecked(base, gens, radius)
    }

    /// Builds without validating the base. Intended for negative fixtures
    /// (e.g. deliberately mis-oriented complexes).
    pub fn build_unchecked(
        base: Arc<BaseComplex>,
        gens: &[GroupElement],
        radius: u32,
    ) -> Result<Self> {
        if radius < 2 {
            return Err(Error::Window("window radius must be at least 2".into()));
        }
        let spec = base.group().clone();
        let ball = Ball::compute(&spec, gens, radius)?;
        let side_shifts: Vec<[GroupElement; 3]> = (0..base.triangles().len())
            .map(|t| base.side_shifts(t))
            .collect();

        // margin: the largest word distance over the fundamental domain's
        // cell labels (side shifts and shift·voltage vertex labels) and the
        // edge voltages. Every matched pair has a top cell at its anchor's
        // identity label or an edge whose two faces differ by one voltage,
        // so a pair touching a cell within distance R - margin has both its
        // anchor and its partner inside ball(R): inner table entries are
        // never corrupted by rim truncation.
        let mut reach: BTreeSet<GroupElement> = BTreeSet::new();
        reach.insert(spec.identity());
        for e in base.edges() {
            reach.insert(e.voltage.clone());
        }
        for (t, shifts) in side_shifts.iter().enumerate() {
            for (j, shift) in shifts.iter().enumerate() {
                reach.insert(shift.clone());
                let edge = base.triangles()[t].sides[j].edge;
                reach.insert(spec.multiply(shift, &base.edges()[edge].voltage)?);
            }
        }
        let distances = element_distances(&spec, gens, &reach, 200_000)?;
        let margin = distances.values().max().cloned().unwrap_or(0).max(1);
        if margin > radius {
            return Err(Error::Window(format!(
                "window radius {} too small for margin {}",
                radius, margin
            )));
        }
        Ok(CoverWindow {
            base,
            gens: gens.to_vec(),
            radius,
            ball,
            margin,
            side_shifts,
        })
    }

    pub fn base(&self) -> &Arc<BaseComplex> {
        &self.base
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        self.base.group()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn margin(&self) -> u32 {
        self.margin
    }

    pub fn inner_radius(&self) -> u32 {
        self.radius - self.margin
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    /// Labels of the inner window, in BFS order.
    pub fn inner_labels(&self) -> Vec<GroupElement> {
        self.ball.sub_ball(self.inner_radius())
    }

    pub fn contains_label(&self, g: &GroupElement) -> bool {
        self.ball.contains(g)
    }

    /// Total number of cell copies before boundary truncation.
    pub fn cell_copy_count(&self) -> usize {
        self.ball.len() * self.base.cell_count()
    }

    /// Copy-label shift of side j of triangle t.
    pub fn side_shift(&self, tri: usize, side: usize) -> &GroupElement {
        &self.side_shifts[tri][side]
    }

    /// The three edge copies bounding triangle copy (tri, label):
    /// (edge index, edge label, reversed).
    pub fn triangle_sides(
        &self,
        tri: usize,
        label: &GroupElement,
    ) -> Result<[(usize, GroupElement, bool); 3]> {
        let spec = self.group();
        let t = &self.base.triangles()[tri];
        let mut out = Vec::with_capacity(3);
        for (j, s) in t.sides.iter().enumerate() {
            let edge_label = spec.multiply(label, &self.side_shifts[tri][j])?;
            out.push((s.edge, edge_label, s.reversed));
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }

    /// Endpoint vertex copies of edge copy (edge, label): tail then head.
    pub fn edge_endpoints(
        &self,
        edge: usize,
        label: &GroupElement,
    ) -> Result<[(usize, GroupElement); 2]> {
        let spec = self.group();
        let e = &self.base.edges()[edge];
        let head_label = spec.multiply(label, &e.voltage)?;
        Ok([(e.tail, label.clone()), (e.head, head_label)])
    }

    /// Triangle copies containing edge copy (edge, label):
    /// (triangle index, side index, triangle label).
    pub fn edge_cofaces(
        &self,
        edge: usize,
        label: &GroupElement,
    ) -> Result<Vec<(usize, usize, GroupElement)>> {
        let spec = self.group();
        let mut out = Vec::new();
        for &(t, j) in self.base.edge_usages(edge) {
            let shift_inv = spec.invert(&self.side_shifts[t][j])?;
            out.push((t, j, spec.multiply(label, &shift_inv)?));
        }
        Ok(out)
    }

    /// Edge copies containing vertex copy (vertex, label):
    /// (edge index, end: 0 = tail / 1 = head, edge label).
    pub fn vertex_cofaces(
        &self,
        vertex: usize,
        label: &GroupElement,
    ) -> Result<Vec<(usize, u8, GroupElement)>> {
        let spec = self.group();
        let mut out = Vec::new();
        for (ei, e) in self.base.edges().iter().enumerate() {
            if e.tail == vertex {
                out.push((ei, 0, label.clone()));
            }
            if e.head == vertex {
                let inv = spec.invert(&e.voltage)?;
                out.push((ei, 1, spec.multiply(label, &inv)?));
            }
        }
        Ok(out)
    }

    /// Face copies of a cell copy: dimension-1 lower cells with labels.
    pub fn faces(&self, cell: CellId, label: &GroupElement) -> Result<Vec<CellCopy>> {
        match cell.dim {
            0 => Ok(Vec::new()),
            1 => {
                let [tail, head] = self.edge_endpoints(cell.index, label)?;
                Ok(vec![
                    (CellId::vertex(tail.0), tail.1),
                    (CellId::vertex(head.0), head.1),
                ])
            }
            2 => {
                let sides = self.triangle_sides(cell.index, label)?;
                Ok(sides
                    .iter()
                    .map(|(e, l, _)| (CellId::edge(*e), l.clone()))
                    .collect())
            }
            _ => Err(Error::Input("cell dimension out of range".into())),
        }
    }
}

/// Word distances of finitely many targets by an expanding BFS that stops as
/// soon as every target is found, never building more of the group than
/// needed (surface-group balls grow too fast for a fixed probe radius).
fn element_distances(
    spec: &GroupSpec,
    gens: &[GroupElement],
    targets: &BTreeSet<GroupElement>,
    cap: usize,
) -> Result<BTreeMap<GroupElement, u32>> {
    let mut found: BTreeMap<GroupElement, u32> = BTreeMap::new();
    let mut distance: BTreeMap<GroupElement, u32> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    let id = spec.identity();
    distance.insert(id.clone(), 0);
    if targets.contains(&id) {
        found.insert(id.clone(), 0);
    }
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        if found.len() == targets.len() {
            break;
        }
        if distance.len() > cap {
            return Err(Error::Window(
                "voltage labels lie outside the searchable part of the group".into(),
            ));
        }
        let d = distance[&g];
        for s in gens {
            let next = spec.multiply(&g, s)?;
            if !distance.contains_key(&next) {
                distance.insert(next.clone(), d + 1);
                if targets.contains(&next) {
                    found.insert(next.clone(), d + 1);
                }
                queue.push_back(next);
            }
        }
    }
    if found.len() < targets.len() {
        return Err(Error::Window(
            "a voltage label is not generated by the declared generating set".into(),
        ));
    }
    Ok(found)
}

/// The closed subcomplex generated by the identity-labeled top cells, with
/// its facet records.
#[derive(Debug, Clone)]
pub struct FundamentalDomain {
    /// All cell copies of D, grouped by dimension.
    pub cells: BTreeMap<u8, BTreeSet<CellCopy>>,
    /// Codimension-1 cells of ∂D with the neighbor translate: the facet cell
    /// lies in D ∩ sD.
    pub facets: Vec<FacetRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetRecord {
    pub cell: CellCopy,
    pub neighbor: GroupElement,
}

impl FundamentalDomain {
    pub fn contains(&self, copy: &CellCopy) -> bool {
        self.cells
            .get(&copy.0.dim)
            .map(|set| set.contains(copy))
            .unwrap_or(false)
    }

    /// Interior cells: members of D all of whose top-cell cofaces are
    /// identity-labeled.
    pub fn is_interior(&self, window: &CoverWindow, copy: &CellCopy) -> Result<bool> {
        if !self.contains(copy) {
            return Ok(false);
        }
        let top_dim = window.base().dim();
        if copy.0.dim == top_dim {
            return Ok(true);
        }
        let id = window.group().identity();
        for top in top_cofaces(window, copy)? {
            if top.1 != id {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// All top-dimensional cofaces of a cell copy (through the incidence poset).
fn top_cofaces(window: &CoverWindow, copy: &CellCopy) -> Result<Vec<CellCopy>> {
    let base_dim = window.base().dim();
    let mut out = BTreeSet::new();
    match (base_dim, copy.0.dim) {
        (_, d) if d == base_dim => {
            out.insert(copy.clone());
        }
        (1, 0) => {
            for (e, _, l) in window.vertex_cofaces(copy.0.index, &copy.1)? {
                out.insert((CellId::edge(e), l));
            }
        }
        (2, 1) => {
            for (t, _, l) in window.edge_cofaces(copy.0.index, &copy.1)? {
                out.insert((CellId::triangle(t), l));
            }
        }
        (2, 0) => {
            for (e, _, l) in window.vertex_cofaces(copy.0.index, &copy.1)? {
                for (t, _, tl) in window.edge_cofaces(e, &l)? {
                    out.insert((CellId::triangle(t), tl));
                }
            }
        }
        _ => return Err(Error::Input("unsupported dimension".into())),
    }
    Ok(out.into_iter().collect())
}

/// Computes the fundamental domain D of a window.
pub fn fundamental_domain(window: &CoverWindow) -> Result<FundamentalDomain> {
    let base = window.base();
    let spec = window.group();
    let id = spec.identity();
    let top_dim = base.dim();

    let mut cells: BTreeMap<u8, BTreeSet<CellCopy>> = BTreeMap::new();
    for d in 0..=top_dim {
        cells.insert(d, BTreeSet::new());
    }
    let mut frontier: Vec<CellCopy> = base
        .cells_of_dim(top_dim)
        .into_iter()
        .map(|c| (c, id.clone()))
        .collect();
    while let Some(copy) = frontier.pop() {
        if !cells.get_mut(&copy.0.dim).unwrap().insert(copy.clone()) {
            continue;
        }
        if copy.0.dim > 0 {
            frontier.extend(window.faces(copy.0, &copy.1)?);
        }
    }

    // facet records: codim-1 cells of D adjacent to a non-identity translate
    let mut facets = Vec::new();
    let codim1 = top_dim - 1;
    for copy in cells[&codim1].iter() {
        let mut neighbors = BTreeSet::new();
        for top in top_cofaces(window, copy)? {
            if top.1 != id {
                neighbors.insert(top.1);
            }
        }
        for s in neighbors {
            facets.push(FacetRecord {
                cell: copy.clone(),
                neighbor: s,
            });
        }
    }
    Ok(FundamentalDomain { cells, facets })
}

/// The facet generating set S and its partition S⁺ ⊔ S⁻ ⊔ S⁰.
#[derive(Debug, Clone)]
pub struct FacetGenerators {
    pub s: Vec<GroupElement>,
    pub s_plus: Vec<GroupElement>,
    pub s_minus: Vec<GroupElement>,
    pub s_zero: Vec<GroupElement>,
    /// Facet cells of D grouped by neighbor translate.
    pub facets_by_neighbor: BTreeMap<GroupElement, Vec<CellCopy>>,
}

/// S = {g ≠ e : D ∩ gD has codimension one}, with the order-two elements in
/// S⁰ and the rest split into inverse pairs.
pub fn facet_generators(window: &CoverWindow) -> Result<FacetGenerators> {
    let spec = window.group();
    let domain = fundamental_domain(window)?;
    let mut facets_by_neighbor: BTreeMap<GroupElement, Vec<CellCopy>> = BTreeMap::new();
    for rec in &domain.facets {
        facets_by_neighbor
            .entry(rec.neighbor.clone())
            .or_default()
            .push(rec.cell.clone());
    }
    let s: Vec<GroupElement> = facets_by_neighbor.keys().cloned().collect();

    // S must be symmetric: crossing a facet into sD is crossing back via s⁻¹
    for g in &s {
        let inv = spec.invert(g)?;
        if !s.contains(&inv) {
            return Err(Error::Window(format!(
                "facet set not symmetric on this window: {} present, {} missing",
                spec.element_string(g),
                spec.element_string(&inv)
            )));
        }
    }

    let id = spec.identity();
    let mut s_plus = Vec::new();
    let mut s_minus = Vec::new();
    let mut s_zero = Vec::new();
    for g in &s {
        let inv = spec.invert(g)?;
        if spec.multiply(g, g)? == id {
            s_zero.push(g.clone());
        } else if *g <= inv {
            s_plus.push(g.clone());
        } else {
            s_minus.push(g.clone());
        }
    }
    Ok(FacetGenerators {
        s,
        s_plus,
        s_minus,
        s_zero,
        facets_by_neighbor,
    })
}

/// Checks that on every shared codimension-1 cell copy of the inner window,
/// the two incident top-cell copies induce opposite orientations: a shared
/// edge is traversed once forward and once backward (a shared vertex is once
/// a head and once a tail).
pub fn orientation_opposition_check(window: &CoverWindow) -> Result<bool> {
    let base = window.base();
    let inner = window.inner_labels();
    if base.dim() == 2 {
        for label in &inner {
            for e in 0..base.edges().len() {
                let cofaces = window.edge_cofaces(e, label)?;
                let in_window: Vec<_> = cofaces
                    .iter()
                    .filter(|(_, _, l)| window.contains_label(l))
                    .collect();
                if in_window.len() != 2 {
                    continue;
                }
                let r0 = base.triangles()[in_window[0].0].sides[in_window[0].1].reversed;
                let r1 = base.triangles()[in_window[1].0].sides[in_window[1].1].reversed;
                if r0 == r1 {
                    return Ok(false);
                }
            }
        }
    } else {
        for label in &inner {
            for v in 0..base.vertex_count() {
                let cofaces = window.vertex_cofaces(v, label)?;
                let in_window: Vec<_> = cofaces
                    .iter()
                    .filter(|(_, _, l)| window.contains_label(l))
                    .collect();
                if in_window.len() != 2 {
                    continue;
                }
                // end 0 = tail (departing), end 1 = head (arriving)
                if in_window[0].1 == in_window[1].1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
