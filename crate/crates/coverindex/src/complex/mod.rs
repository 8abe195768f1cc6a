//! Oriented triangulated closed 1- and 2-manifolds with flat voltage
//! labelings, and their covers restricted to finite windows.
//!
//! A cover is specified by a voltage labeling: each oriented edge carries a
//! deck-group element, inverted on reversal, with trivial product around
//! every triangle. Flatness makes the labeling a homomorphism π₁ → G, so the
//! lift is purely combinatorial: the cell set of the cover is (base cell) ×
//! G, an edge with voltage s starting in copy g ends in copy g·s, and the
//! deck action multiplies labels on the left.

mod io;
mod library;
mod window;

pub use io::{export_base_complex, parse_base_complex};
pub use library::library_complex;
pub use window::{
    facet_generators, fundamental_domain, orientation_opposition_check, CellCopy, CoverWindow,
    FacetGenerators, FacetRecord, FundamentalDomain,
};

use crate::group::{GroupElement, GroupSpec};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Identifies a base cell by dimension and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub dim: u8,
    pub index: usize,
}

impl CellId {
    pub fn vertex(index: usize) -> Self {
        CellId { dim: 0, index }
    }

    pub fn edge(index: usize) -> Self {
        CellId { dim: 1, index }
    }

    pub fn triangle(index: usize) -> Self {
        CellId { dim: 2, index }
    }
}

/// One directed traversal of an edge inside a triangle boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub edge: usize,
    pub reversed: bool,
}

#[derive(Debug, Clone)]
pub struct EdgeData {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub voltage: GroupElement,
}

#[derive(Debug, Clone)]
pub struct TriangleData {
    pub name: String,
    /// A closed path: the end vertex of each side is the start of the next.
    pub sides: [Side; 3],
}

/// An oriented triangulated manifold (dimension 1 or 2) with a voltage
/// labeling into its deck group.
#[derive(Debug, Clone)]
pub struct BaseComplex {
    group: Arc<GroupSpec>,
    dim: u8,
    vertex_names: Vec<String>,
    edges: Vec<EdgeData>,
    triangles: Vec<TriangleData>,
    /// For each edge, the (triangle, side) pairs traversing it.
    edge_usages: Vec<Vec<(usize, usize)>>,
}

impl BaseComplex {
    /// Structural construction: indices must be in range, names unique, and
    /// each triangle boundary a closed vertex path. Manifold, flatness, and
    /// orientation conditions are checked separately by [`Self::validate`].
    pub fn from_parts(
        group: Arc<GroupSpec>,
        dim: u8,
        vertex_names: Vec<String>,
        edges: Vec<EdgeData>,
        triangles: Vec<TriangleData>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidComplex("dimension must be 1 or 2".into()));
        }
        if dim == 1 && !triangles.is_empty() {
            return Err(Error::InvalidComplex(
                "a 1-complex must not contain triangles".into(),
            ));
        }
        if vertex_names.is_empty() {
            return Err(Error::InvalidComplex("no vertices".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in vertex_names
            .iter()
            .chain(edges.iter().map(|e| &e.name))
            .chain(triangles.iter().map(|t| &t.name))
        {
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidComplex(format!(
                    "duplicate cell name '{}'",
                    name
                )));
            }
        }
        for e in &edges {
            if e.tail >= vertex_names.len() || e.head >= vertex_names.len() {
                return Err(Error::InvalidComplex(format!(
                    "edge '{}' references a missing vertex",
                    e.name
                )));
            }
            if !group.belongs(&e.voltage) {
                return Err(Error::InvalidComplex(format!(
                    "edge '{}' voltage outside the deck group",
                    e.name
                )));
            }
        }
        let side_vertices = |s: &Side| -> Result<(usize, usize)> {
            let e = edges
                .get(s.edge)
                .ok_or_else(|| Error::InvalidComplex("side references a missing edge".into()))?;
            Ok(if s.reversed {
                (e.head, e.tail)
            } else {
                (e.tail, e.head)
            })
        };
        for t in &triangles {
            for j in 0..3 {
                let (_, end) = side_vertices(&t.sides[j])?;
                let (next_start, _) = side_vertices(&t.sides[(j + 1) % 3])?;
                if end != next_start {
                    return Err(Error::InvalidComplex(format!(
                        "triangle '{}' boundary is not a closed path",
                        t.name
                    )));
                }
            }
        }
        let mut edge_usages = vec![Vec::new(); edges.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for (j, s) in t.sides.iter().enumerate() {
                edge_usages[s.edge].push((ti, j));
            }
        }
        Ok(BaseComplex {
            group,
            dim,
            vertex_names,
            edges,
            triangles,
            edge_usages,
        })
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[EdgeData] {
        &self.edges
    }

    pub fn triangles(&self) -> &[TriangleData] {
        &self.triangles
    }

    pub fn edge_usages(&self, edge: usize) -> &[(usize, usize)] {
        &self.edge_usages[edge]
    }

    /// Total cell count across dimensions.
    pub fn cell_count(&self) -> usize {
        self.vertex_count() + self.edges.len() + self.triangles.len()
    }

    /// χ = V - E + T.
    pub fn euler_char(&self) -> i64 {
        self.vertex_count() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn top_dim_cell_count(&self) -> usize {
        if self.dim == 1 {
            self.edges.len()
        } else {
            self.triangles.len()
        }
    }

    /// All cells of a given dimension.
    pub fn cells_of_dim(&self, dim: u8) -> Vec<CellId> {
        match dim {
            0 => (0..self.vertex_count()).map(CellId::vertex).collect(),
            1 => (0..self.edges.len()).map(CellId::edge).collect(),
            2 => (0..self.triangles.len()).map(CellId::triangle).collect(),
            _ => Vec::new(),
        }
    }

    pub fn cell_name(&self, cell: CellId) -> &str {
        match cell.dim {
            0 => &self.vertex_names[cell.index],
            1 => &self.edges[cell.index].name,
            _ => &self.triangles[cell.index].name,
        }
    }

    pub fn cell_by_name(&self, name: &str) -> Option<CellId> {
        if let Some(i) = self.vertex_names.iter().position(|n| n == name) {
            return Some(CellId::vertex(i));
        }
        if let Some(i) = self.edges.iter().position(|e| e.name == name) {
            return Some(CellId::edge(i));
        }
        self.triangles
            .iter()
            .position(|t| t.name == name)
            .map(CellId::triangle)
    }

    /// The start and end vertices of a side.
    pub fn side_vertices(&self, s: &Side) -> (usize, usize) {
        let e = &self.edges[s.edge];
        if s.reversed {
            (e.head, e.tail)
        } else {
            (e.tail, e.head)
        }
    }

    /// Voltage of a side: the edge voltage, inverted on reversal.
    pub fn side_voltage(&self, s: &Side) -> GroupElement {
        let v = &self.edges[s.edge].voltage;
        if s.reversed {
            self.group.invert(v).expect("voltage belongs to the group")
        } else {
            v.clone()
        }
    }

    /// Copy-label shifts of a lifted triangle's sides: the lift of triangle t
    /// at copy g has side j on edge copy (edge_j, g·shift_j).
    pub fn side_shifts(&self, tri: usize) -> [GroupElement; 3] {
        let spec = &self.group;
        let t = &self.triangles[tri];
        let mut walk = spec.identity();
        let mut shifts = [spec.identity(), spec.identity(), spec.identity()];
        for (shift, s) in shifts.iter_mut().zip(&t.sides) {
            let next = spec
                .multiply(&walk, &self.side_voltage(s))
                .expect("voltages compose");
            *shift = if s.reversed { next.clone() } else { walk.clone() };
            walk = next;
        }
        shifts
    }

    /// Manifold, flatness, and orientation checks. Violations are collected,
    /// not short-circuited.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        self.check_connected(&mut violations);
        if self.dim == 1 {
            self.check_dim1(&mut violations);
        } else {
            self.check_dim2(&mut violations);
        }
        ValidationReport { violations }
    }

    fn check_connected(&self, out: &mut Vec<Violation>) {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            out.push(Violation::NonManifold("complex is not connected".into()));
        }
    }

    fn check_dim1(&self, out: &mut Vec<Violation>) {
        // closed 1-manifold: two edge-ends per vertex; coherent orientation:
        // one incoming, one outgoing
        for v in 0..self.vertex_count() {
            let outgoing = self.edges.iter().filter(|e| e.tail == v).count();
            let incoming = self.edges.iter().filter(|e| e.head == v).count();
            if outgoing + incoming != 2 {
                out.push(Violation::NonManifold(format!(
                    "vertex '{}' has {} edge-ends, expected 2",
                    self.vertex_names[v],
                    outgoing + incoming
                )));
            } else if outgoing != 1 || incoming != 1 {
                out.push(Violation::IncoherentOrientation(format!(
                    "vertex '{}' is not traversed coherently",
                    self.vertex_names[v]
                )));
            }
        }
    }

    fn check_dim2(&self, out: &mut Vec<Violation>) {
        for (ei, usages) in self.edge_usages.iter().enumerate() {
            if usages.len() != 2 {
                out.push(Violation::NonManifold(format!(
                    "edge '{}' lies in {} triangles, expected 2",
                    self.edges[ei].name,
                    usages.len()
                )));
                continue;
            }
            let r0 = self.triangles[usages[0].0].sides[usages[0].1].reversed;
            let r1 = self.triangles[usages[1].0].sides[usages[1].1].reversed;
            if r0 == r1 {
                out.push(Violation::IncoherentOrientation(format!(
                    "edge '{}' is traversed twice in the same direction",
                    self.edges[ei].name
                )));
            }
        }
        for (ti, t) in self.triangles.iter().enumerate() {
            let mut prod = self.group.identity();
            for s in &t.sides {
                prod = self
                    .group
                    .multiply(&prod, &self.side_voltage(s))
                    .expect("voltages compose");
            }
            if prod != self.group.identity() {
                out.push(Violation::FlatnessViolation(format!(
                    "voltage product around triangle '{}' is {}",
                    t.name,
                    self.group.element_string(&prod)
                )));
            }
            let _ = ti;
        }
        self.check_vertex_links(out);
    }

    /// Each vertex link must be a single circle: build the graph whose nodes
    /// are edge-ends at the vertex and whose edges are triangle corners, and
    /// require it to be one cycle.
    fn check_vertex_links(&self, out: &mut Vec<Violation>) {
        for v in 0..self.vertex_count() {
            // edge-ends at v: (edge index, end) with end 0 = tail, 1 = head
            let mut ends: Vec<(usize, u8)> = Vec::new();
            for (ei, e) in self.edges.iter().enumerate() {
                if e.tail == v {
                    ends.push((ei, 0));
                }
                if e.head == v {
                    ends.push((ei, 1));
                }
            }
            if ends.is_empty() {
                out.push(Violation::NonManifold(format!(
                    "vertex '{}' is isolated",
                    self.vertex_names[v]
                )));
                continue;
            }
            let end_index: BTreeMap<(usize, u8), usize> = ends
                .iter()
                .enumerate()
                .map(|(i, &end)| (end, i))
                .collect();
            let mut degree = vec![0usize; ends.len()];
            let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); ends.len()];
            for t in &self.triangles {
                for j in 0..3 {
                    let arrive = &t.sides[j];
                    let depart = &t.sides[(j + 1) % 3];
                    let (_, corner_vertex) = self.side_vertices(arrive);
                    if corner_vertex != v {
                        continue;
                    }
                    // the corner joins the arriving end of one side to the
                    // departing end of the next
                    let arrive_end = (arrive.edge, if arrive.reversed { 0 } else { 1 });
                    let depart_end = (depart.edge, if depart.reversed { 1 } else { 0 });
                    let (Some(&i), Some(&k)) = (end_index.get(&arrive_end), end_index.get(&depart_end))
                    else {
                        out.push(Violation::NonManifold(format!(
                            "corner at vertex '{}' references a foreign edge-end",
                            self.vertex_names[v]
                        )));
                        continue;
                    };
                    degree[i] += 1;
                    degree[k] += 1;
                    adjacency[i].push(k);
                    adjacency[k].push(i);
                }
            }
            if degree.iter().any(|&d| d != 2) {
                out.push(Violation::NonManifold(format!(
                    "link of vertex '{}' is not 2-regular",
                    self.vertex_names[v]
                )));
                continue;
            }
            // connectivity of the link graph
            let mut seen = vec![false; ends.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for &k in &adjacency[i] {
                    if !seen[k] {
                        seen[k] = true;
                        stack.push(k);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                out.push(Violation::NonManifold(format!(
                    "link of vertex '{}' is not a single circle",
                    self.vertex_names[v]
                )));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonManifold(String),
    FlatnessViolation(String),
    IncoherentOrientation(String),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonManifold(m) => write!(f, "non-manifold: {}", m),
            Violation::FlatnessViolation(m) => write!(f, "flatness violation: {}", m),
            Violation::IncoherentOrientation(m) => write!(f, "incoherent orientation: {}", m),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_with_unit_total_voltage_is_valid() {
        let base = library_complex("circle_Z").unwrap();
        assert!(base.validate().is_valid());
        assert_eq!(base.euler_char(), 0);
        assert_eq!(base.vertex_count(), 3);
        assert_eq!(base.edges().len(), 3);
    }

    #[test]
    fn flatness_violation_is_named() {
        let torus = library_complex("torus_Z2").unwrap();
        let group = torus.group().clone();
        let mut edges = torus.edges().to_vec();
        // break the diagonal voltage
        edges[2].voltage = group.parse_element("(5,0)").unwrap();
        let broken = BaseComplex::from_parts(
            group,
            2,
            torus.vertex_names().to_vec(),
            edges,
            torus.triangles().to_vec(),
        )
        .unwrap();
        let report = broken.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FlatnessViolation(_))));
    }

    #[test]
    fn flipped_triangle_breaks_orientation_coherence() {
        let torus = library_complex("torus_Z2").unwrap();
        let mut triangles = torus.triangles().to_vec();
        let t = &mut triangles[0];
        // reversing the cyclic order flips the orientation
        t.sides = [
            Side {
                edge: t.sides[2].edge,
                reversed: !t.sides[2].reversed,
            },
            Side {
                edge: t.sides[1].edge,
                reversed: !t.sides[1].reversed,
            },
            Side {
                edge: t.sides[0].edge,
                reversed: !t.sides[0].reversed,
            },
        ];
        let flipped = BaseComplex::from_parts(
            torus.group().clone(),
            2,
            torus.vertex_names().to_vec(),
            torus.edges().to_vec(),
            triangles,
        )
        .unwrap();
        let report = flipped.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IncoherentOrientation(_))));
    }

    #[test]
    fn euler_characteristics_of_library_bases() {
        assert_eq!(library_complex("circle_Z").unwrap().euler_char(), 0);
        assert_eq!(library_complex("torus_Z2").unwrap().euler_char(), 0);
        assert_eq!(library_complex("genus2_ladder_Z").unwrap().euler_char(), -2);
        assert_eq!(library_complex("genus2_F2").unwrap().euler_char(), -2);
        assert_eq!(library_complex("genus2_Z5").unwrap().euler_char(), -2);
    }

    #[test]
    fn all_library_complexes_validate() {
        for name in [
            "circle_Z",
            "torus_Z2",
            "genus2_ladder_Z",
            "genus2_F2",
            "genus2_Z5",
            "torus_Zmod2",
        ] {
            let base = library_complex(name).unwrap();
            let report = base.validate();
            assert!(
                report.is_valid(),
                "{} failed validation: {:?}",
                name,
                report.violations
            );
        }
        assert!(library_complex("nonexistent").is_err());
    }
}
