//! Per-domain index tables: g ↦ Σ_{zeros in gD} ind_x(v).

use crate::coinvariants::CoinvariantRep;
use crate::group::{GroupElement, GroupSpec};
use crate::rat::{self, Rat};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// How the entries were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Combinatorial,
    Winding,
    ThomQuadrature,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Combinatorial => write!(f, "combinatorial"),
            Provenance::Winding => write!(f, "winding"),
            Provenance::ThomQuadrature => write!(f, "thom-quadrature"),
        }
    }
}

/// Integer index sums per fundamental-domain translate, over a finite window
/// of labels. Thom-quadrature tables also carry the rounding gap per entry.
#[derive(Debug, Clone)]
pub struct IndexTable {
    group: Arc<GroupSpec>,
    provenance: Provenance,
    entries: BTreeMap<GroupElement, i64>,
    gaps: BTreeMap<GroupElement, f64>,
}

impl IndexTable {
    pub fn new(group: Arc<GroupSpec>, provenance: Provenance) -> Self {
        IndexTable {
            group,
            provenance,
            entries: BTreeMap::new(),
            gaps: BTreeMap::new(),
        }
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn set(&mut self, g: GroupElement, value: i64) {
        self.entries.insert(g, value);
    }

    pub fn set_with_gap(&mut self, g: GroupElement, value: i64, gap: f64) {
        self.gaps.insert(g.clone(), gap);
        self.entries.insert(g, value);
    }

    pub fn get(&self, g: &GroupElement) -> Option<i64> {
        self.entries.get(g).copied()
    }

    pub fn entries(&self) -> &BTreeMap<GroupElement, i64> {
        &self.entries
    }

    pub fn gaps(&self) -> &BTreeMap<GroupElement, f64> {
        &self.gaps
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps.values().cloned().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all entries (the sum functional for finite deck groups).
    pub fn total(&self) -> i64 {
        self.entries.values().sum()
    }

    /// Interprets the table as constant + finitely supported deviation. The
    /// deviation is whatever differs from `constant` inside the window.
    pub fn to_coinvariant(&self, constant: i64) -> Result<CoinvariantRep> {
        let mut deviation = BTreeMap::new();
        for (g, v) in &self.entries {
            if *v != constant {
                deviation.insert(g.clone(), rat::rat(v - constant));
            }
        }
        CoinvariantRep::new(self.group.clone(), rat::rat(constant), deviation)
    }

    /// Exact mean over a Følner set, which must lie inside the window.
    pub fn folner_mean(&self, n: u32) -> Result<Rat> {
        let f = crate::group::folner_set(&self.group, n)?;
        let mut sum = rat::rat(0);
        for g in &f {
            match self.entries.get(g) {
                Some(v) => sum += rat::rat(*v),
                None => {
                    return Err(Error::Window(format!(
                        "Følner set F_{} leaves the table window",
                        n
                    )))
                }
            }
        }
        Ok(sum / rat::rat(f.len() as i64))
    }

    /// Rows (element string, value, provenance, gap) for CSV export, in the
    /// table's deterministic key order.
    pub fn csv_rows(&self) -> Vec<(String, i64, String, Option<f64>)> {
        self.entries
            .iter()
            .map(|(g, v)| {
                (
                    self.group.element_string(g),
                    *v,
                    self.provenance.to_string(),
                    self.gaps.get(g).copied(),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn table_to_coinvariant_extracts_deviation() {
        let z = Arc::new(GroupSpec::cyclic_z());
        let mut t = IndexTable::new(z.clone(), Provenance::Combinatorial);
        for k in -5i64..=5 {
            t.set(z.parse_element(&k.to_string()).unwrap(), -2);
        }
        t.set(z.parse_element("3").unwrap(), -1);
        let phi = t.to_coinvariant(-2).unwrap();
        assert_eq!(phi.constant(), &rat(-2));
        assert_eq!(phi.deviation().len(), 1);
        assert_eq!(phi.eval(&z.parse_element("3").unwrap()), rat(-1));
    }

    #[test]
    fn folner_mean_requires_window_coverage() {
        let z = Arc::new(GroupSpec::cyclic_z());
        let mut t = IndexTable::new(z.clone(), Provenance::Combinatorial);
        for k in -3i64..=3 {
            t.set(z.parse_element(&k.to_string()).unwrap(), 1);
        }
        assert_eq!(t.folner_mean(3).unwrap(), rat(1));
        assert!(t.folner_mean(4).is_err());
    }
}
