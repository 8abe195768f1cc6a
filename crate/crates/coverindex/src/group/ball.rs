//! Word-metric balls by breadth-first search, annulus counts, Følner sets.

use super::{GroupElement, GroupFamily, GroupSpec, Letter, NormalForm};
use crate::{Error, Result};
use std::collections::{BTreeMap, VecDeque};
use std::sync::Mutex;

/// A word-metric ball with exact distances from the identity.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: u32,
    /// Elements in BFS discovery order (identity first).
    elements: Vec<GroupElement>,
    distance: BTreeMap<GroupElement, u32>,
}

impl Ball {
    /// BFS over `gens` to depth `r`, deduplicating by normal form. The
    /// generating set must be symmetric.
    pub fn compute(spec: &GroupSpec, gens: &[GroupElement], r: u32) -> Result<Ball> {
        check_generating_set(spec, gens)?;
        let mut distance = BTreeMap::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::new();
        let id = spec.identity();
        distance.insert(id.clone(), 0);
        elements.push(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            let d = distance[&g];
            if d == r {
                continue;
            }
            for s in gens {
                let next = spec.multiply(&g, s)?;
                if !distance.contains_key(&next) {
                    distance.insert(next.clone(), d + 1);
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(Ball {
            radius: r,
            elements,
            distance,
        })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.distance.contains_key(g)
    }

    /// Exact word distance from the identity, if within the ball.
    pub fn distance(&self, g: &GroupElement) -> Option<u32> {
        self.distance.get(g).copied()
    }

    /// Elements at distance exactly `d`.
    pub fn sphere(&self, d: u32) -> Vec<GroupElement> {
        self.elements
            .iter()
            .filter(|g| self.distance[*g] == d)
            .cloned()
            .collect()
    }

    /// Elements at distance at most `d` (a sub-ball, in BFS order).
    pub fn sub_ball(&self, d: u32) -> Vec<GroupElement> {
        self.elements
            .iter()
            .filter(|g| self.distance[*g] <= d)
            .cloned()
            .collect()
    }
}

fn check_generating_set(spec: &GroupSpec, gens: &[GroupElement]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::Input("empty generating set".into()));
    }
    for g in gens {
        if !spec.belongs(g) {
            return Err(Error::Input("generator outside the group family".into()));
        }
        let inv = spec.invert(g)?;
        if !gens.contains(&inv) {
            return Err(Error::Input(format!(
                "generating set is not symmetric: missing inverse of {}",
                spec.element_string(g)
            )));
        }
    }
    Ok(())
}

/// Result of an annulus count around a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnulusCount {
    pub count: usize,
    /// Set when the input set was empty; the criterion quantifies over
    /// non-empty sets only.
    pub warning: Option<String>,
}

/// #{g : 0 < d(g, S) <= r}, computed exactly by multi-source BFS.
pub fn outer_boundary_count(
    spec: &GroupSpec,
    gens: &[GroupElement],
    set: &[GroupElement],
    r: u32,
) -> Result<AnnulusCount> {
    if r == 0 {
        return Err(Error::Input("annulus radius must be at least 1".into()));
    }
    if set.is_empty() {
        return Ok(AnnulusCount {
            count: 0,
            warning: Some("empty set: annulus is empty by convention".into()),
        });
    }
    check_generating_set(spec, gens)?;
    let mut distance: BTreeMap<GroupElement, u32> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for g in set {
        if !spec.belongs(g) {
            return Err(Error::Input("set element outside the group family".into()));
        }
        if !distance.contains_key(g) {
            distance.insert(g.clone(), 0);
            queue.push_back(g.clone());
        }
    }
    let mut count = 0usize;
    while let Some(g) = queue.pop_front() {
        let d = distance[&g];
        if d == r {
            continue;
        }
        for s in gens {
            let next = spec.multiply(&g, s)?;
            if !distance.contains_key(&next) {
                distance.insert(next.clone(), d + 1);
                count += 1;
                queue.push_back(next);
            }
        }
    }
    Ok(AnnulusCount {
        count,
        warning: None,
    })
}

/// Følner sets for the amenable families: intervals for ℤ (and rank-one free
/// groups), boxes for ℤ^d, the whole group for finite tables.
pub fn folner_set(spec: &GroupSpec, n: u32) -> Result<Vec<GroupElement>> {
    match spec.family() {
        GroupFamily::CyclicZ => Ok((-(n as i64)..=n as i64)
            .map(|k| GroupElement {
                form: NormalForm::Int(k),
            })
            .collect()),
        GroupFamily::FreeAbelian(d) => {
            let d = *d as usize;
            let mut out = Vec::new();
            let mut v = vec![-(n as i64); d];
            'odometer: loop {
                out.push(GroupElement {
                    form: NormalForm::Vector(v.clone()),
                });
                for axis in (0..d).rev() {
                    if v[axis] < n as i64 {
                        v[axis] += 1;
                        for entry in v.iter_mut().skip(axis + 1) {
                            *entry = -(n as i64);
                        }
                        continue 'odometer;
                    }
                }
                return Ok(out);
            }
        }
        GroupFamily::Free(1) => Ok((-(n as i64)..=n as i64)
            .map(|k| {
                let letter = Letter::new(0, k < 0);
                GroupElement {
                    form: NormalForm::Word(vec![letter; k.unsigned_abs() as usize]),
                }
            })
            .collect()),
        GroupFamily::FiniteTable(t) => Ok((0..t.order())
            .map(|id| GroupElement {
                form: NormalForm::Table(id),
            })
            .collect()),
        GroupFamily::Free(_) | GroupFamily::Surface(_) => Err(Error::NonAmenable(format!(
            "{} admits no Følner sets",
            spec
        ))),
    }
}

/// Memoized ball construction keyed by (generating set, radius).
///
/// Downstream modules re-query the same balls constantly; the cache is
/// internally synchronized so scenario workers can share one.
type BallKey = (Vec<GroupElement>, u32);

#[derive(Default)]
pub struct BallCache {
    inner: Mutex<BTreeMap<BallKey, std::sync::Arc<Ball>>>,
}

impl BallCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        spec: &GroupSpec,
        gens: &[GroupElement],
        r: u32,
    ) -> Result<std::sync::Arc<Ball>> {
        let key = (gens.to_vec(), r);
        let mut guard = self.inner.lock().expect("ball cache poisoned");
        if let Some(b) = guard.get(&key) {
            return Ok(b.clone());
        }
        let ball = std::sync::Arc::new(Ball::compute(spec, gens, r)?);
        guard.insert(key, ball.clone());
        Ok(ball)
    }
}
