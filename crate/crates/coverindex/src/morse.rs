//! Discrete vector fields on cover windows: acyclic matchings and their
//! critical index tables.
//!
//! A field is a matching on cells of the fundamental domain, lifted
//! periodically to every translate, patched by replacement matchings on
//! finitely many copies. Critical cells play the role of zeros with local
//! index (-1)^dim; each cell copy is owned by its label, so the index table
//! entry at g is the alternating sum over unmatched cells labeled g. For the
//! pure periodic lift that sum is χ(base) at every label, regardless of the
//! matching: matched pairs cancel in the alternating count.

use crate::coinvariants::CoinvariantRep;
use crate::complex::{CellCopy, CellId, CoverWindow};
use crate::group::GroupElement;
use crate::table::{IndexTable, Provenance};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// A matched pair with labels relative to the anchor translate. The upper
/// cell must lie in the fundamental domain and the lower must be one of its
/// regular faces, so every pair stays inside the anchor's closed domain copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchPair {
    pub lower: CellCopy,
    pub upper: CellCopy,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<MatchPair>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { pairs: Vec::new() }
    }

    pub fn new(pairs: Vec<MatchPair>) -> Self {
        Matching { pairs }
    }
}

/// A periodic core plus finitely many per-copy replacements.
#[derive(Debug, Clone, Default)]
pub struct DiscreteField {
    pub core: Matching,
    /// Replacement matchings: the core's pairs at these anchors are replaced
    /// wholesale (a replacement wishing to keep core pairs re-lists them).
    pub overrides: BTreeMap<GroupElement, Matching>,
}

impl DiscreteField {
    pub fn periodic(core: Matching) -> Self {
        DiscreteField {
            core,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_override(mut self, anchor: GroupElement, matching: Matching) -> Self {
        self.overrides.insert(anchor, matching);
        self
    }
}

/// The absolute matching on the window: cell copy → matched partner, both
/// directions. Validates regularity, domain locality, and global
/// disjointness. Pairs truncated by the window boundary are dropped.
pub fn window_matching(
    field: &DiscreteField,
    window: &CoverWindow,
) -> Result<BTreeMap<CellCopy, CellCopy>> {
    let spec = window.group();
    let domain = crate::complex::fundamental_domain(window)?;

    let validate_pairs = |matching: &Matching| -> Result<()> {
        let mut used: BTreeSet<CellCopy> = BTreeSet::new();
        for pair in &matching.pairs {
            if pair.upper.0.dim != pair.lower.0.dim + 1 {
                return Err(Error::Input(format!(
                    "pair ({:?}, {:?}) is not codimension one",
                    pair.lower, pair.upper
                )));
            }
            if !domain.contains(&pair.upper) {
                return Err(Error::Input(format!(
                    "upper cell {:?} is not a cell of the fundamental domain",
                    pair.upper
                )));
            }
            let faces = window.faces(pair.upper.0, &pair.upper.1)?;
            let occurrences = faces.iter().filter(|f| **f == pair.lower).count();
            if occurrences != 1 {
                return Err(Error::Input(format!(
                    "lower cell {:?} is not a regular face of {:?}",
                    pair.lower, pair.upper
                )));
            }
            if !used.insert(pair.lower.clone()) || !used.insert(pair.upper.clone()) {
                return Err(Error::Input(
                    "a cell appears in two pairs of one matching".into(),
                ));
            }
        }
        Ok(())
    };

    validate_pairs(&field.core)?;
    for (anchor, matching) in &field.overrides {
        if !window.contains_label(anchor) {
            return Err(Error::Input(format!(
                "override anchor {} lies outside the window",
                spec.element_string(anchor)
            )));
        }
        validate_pairs(matching)?;
    }

    let mut matched: BTreeMap<CellCopy, CellCopy> = BTreeMap::new();
    for anchor in window.ball().elements() {
        let matching = field.overrides.get(anchor).unwrap_or(&field.core);
        for pair in &matching.pairs {
            let lower = (pair.lower.0, spec.multiply(anchor, &pair.lower.1)?);
            let upper = (pair.upper.0, spec.multiply(anchor, &pair.upper.1)?);
            if !window.contains_label(&lower.1) || !window.contains_label(&upper.1) {
                continue; // truncated at the window rim
            }
            if matched.contains_key(&lower) || matched.contains_key(&upper) {
                return Err(Error::Input(format!(
                    "cell copy matched twice near anchor {}",
                    spec.element_string(anchor)
                )));
            }
            matched.insert(lower.clone(), upper.clone());
            matched.insert(upper, lower);
        }
    }
    Ok(matched)
}

/// True iff the patched matching admits no closed V-path. Checks both the
/// window matching and the projected core on the base complex: a core cycle
/// lifts to an infinite V-path that escapes every window but admits no
/// bounded discrete Morse function, so it is rejected too.
pub fn acyclic_matching_check(field: &DiscreteField, window: &CoverWindow) -> Result<bool> {
    if !core_acyclic_on_base(field, window)? {
        return Ok(false);
    }
    let matched = window_matching(field, window)?;
    // V-path digraph on matched lower cells: σ → σ' when σ' ≠ σ is a matched
    // lower face of σ's partner
    let lowers: Vec<CellCopy> = matched
        .iter()
        .filter(|(cell, partner)| cell.0.dim + 1 == partner.0.dim)
        .map(|(cell, _)| cell.clone())
        .collect();
    let lower_set: BTreeSet<CellCopy> = lowers.iter().cloned().collect();
    let mut arcs: BTreeMap<CellCopy, Vec<CellCopy>> = BTreeMap::new();
    for sigma in &lowers {
        let tau = &matched[sigma];
        let mut out = Vec::new();
        for face in window.faces(tau.0, &tau.1)? {
            if face != *sigma && lower_set.contains(&face) {
                out.push(face);
            }
        }
        arcs.insert(sigma.clone(), out);
    }
    Ok(!has_directed_cycle(&arcs))
}

fn core_acyclic_on_base(field: &DiscreteField, window: &CoverWindow) -> Result<bool> {
    let base = window.base();
    let mut partner: BTreeMap<CellId, CellId> = BTreeMap::new();
    for pair in &field.core.pairs {
        partner.insert(pair.lower.0, pair.upper.0);
    }
    let mut arcs: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for (&sigma, &tau) in &partner {
        let faces: Vec<CellId> = match tau.dim {
            1 => {
                let e = &base.edges()[tau.index];
                vec![CellId::vertex(e.tail), CellId::vertex(e.head)]
            }
            2 => base.triangles()[tau.index]
                .sides
                .iter()
                .map(|s| CellId::edge(s.edge))
                .collect(),
            _ => Vec::new(),
        };
        let out: Vec<CellId> = faces
            .into_iter()
            .filter(|f| *f != sigma && partner.contains_key(f))
            .collect();
        arcs.insert(sigma, out);
    }
    Ok(!has_directed_cycle(&arcs))
}

fn has_directed_cycle<N: Ord + Clone>(arcs: &BTreeMap<N, Vec<N>>) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Active,
        Done,
    }
    let mut state: BTreeMap<N, State> = BTreeMap::new();
    for start in arcs.keys() {
        if state.contains_key(start) {
            continue;
        }
        // iterative DFS with an explicit edge cursor
        let mut stack: Vec<(N, usize)> = vec![(start.clone(), 0)];
        state.insert(start.clone(), State::Active);
        while let Some((node, cursor)) = stack.pop() {
            let next = arcs.get(&node).and_then(|out| out.get(cursor)).cloned();
            match next {
                Some(succ) => {
                    stack.push((node, cursor + 1));
                    match state.get(&succ) {
                        Some(State::Active) => return true,
                        Some(State::Done) => {}
                        None => {
                            state.insert(succ.clone(), State::Active);
                            stack.push((succ, 0));
                        }
                    }
                }
                None => {
                    state.insert(node, State::Done);
                }
            }
        }
    }
    false
}

/// Per-copy alternating sums over critical cells, as a table on the inner
/// window, together with its coinvariant representative (constant χ(base)
/// plus the finitely supported deviation the overrides induce).
pub fn critical_index_table(
    field: &DiscreteField,
    window: &CoverWindow,
) -> Result<(IndexTable, CoinvariantRep)> {
    if !acyclic_matching_check(field, window)? {
        return Err(Error::Input(
            "matching has a closed V-path; not a discrete vector field".into(),
        ));
    }
    let matched = window_matching(field, window)?;
    let base = window.base();
    let group = base.group().clone();
    let mut table = IndexTable::new(group.clone(), Provenance::Combinatorial);
    for label in window.inner_labels() {
        let mut sum = 0i64;
        for dim in 0..=base.dim() {
            let sign = if dim % 2 == 0 { 1 } else { -1 };
            for cell in base.cells_of_dim(dim) {
                if !matched.contains_key(&(cell, label.clone())) {
                    sum += sign;
                }
            }
        }
        table.set(label, sum);
    }
    let rep = table.to_coinvariant(base.euler_char())?;
    Ok((table, rep))
}
