//! Ponzi flow on free groups: 𝟙 as an explicit sum of boundary terms.
//!
//! On the (2k)-regular Cayley tree of a rank-k free group, every vertex
//! forwards what it receives plus one unit, split equally among its children:
//! F_0 = 1/(2k) at the root, F_{n+1} = (F_n + 1)/(2k-1) below. The flows stay
//! strictly under the fixed point 1/(2k-2), so they assemble into bounded
//! functions whose boundary terms sum to the constant function 1.
//!
//! With ψ_s(g) the signed flow on the edge (g, gs) and s running over the
//! free basis, the exact divergence identity is
//!   Σ_s (ψ_s(g) − ψ_s(g·s⁻¹)) = 1 for every g,
//! i.e. 𝟙 = Σ_s (ψ_s − s⁻¹ψ_s) under the action (hψ)(g) = ψ(gh). All
//! arithmetic is rational.

use crate::group::{Ball, GroupElement, GroupSpec};
use crate::rat::{self, Rat};
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct PonziFlow {
    pub rank: u16,
    pub radius: u32,
    /// F_0, F_1, ..., F_radius: outward flow per edge at each depth.
    pub edge_flows: Vec<Rat>,
    /// ψ_s per basis generator, restricted to ball(radius).
    pub psi: Vec<BTreeMap<GroupElement, Rat>>,
    /// Largest edge flow seen; strictly below `flow_bound`.
    pub max_flow: Rat,
    /// The fixed point 1/(2k-2).
    pub flow_bound: Rat,
    /// Vertices of ball(radius - 1) where the divergence was verified to be
    /// exactly one.
    pub checked_vertices: usize,
}

/// Builds the outward unit-mass flow and verifies its divergence exactly on
/// the inner window.
pub fn ponzi_flow_free_group(rank: u16, radius: u32) -> Result<PonziFlow> {
    if rank < 2 {
        return Err(Error::Input(
            "rank must be at least 2: the rank-one free group is infinite cyclic, hence amenable, and no Ponzi flow exists".into(),
        ));
    }
    if radius < 2 {
        return Err(Error::Input("radius must be at least 2".into()));
    }
    let spec = GroupSpec::free(rank)?;
    let gens = spec.standard_generators();
    let ball = Ball::compute(&spec, &gens, radius)?;

    let degree = 2 * rank as i64;
    let mut edge_flows = vec![rat::ratio(1, degree)];
    for _ in 0..radius {
        let prev = edge_flows.last().unwrap().clone();
        edge_flows.push((prev + rat::rat(1)) / rat::rat(degree - 1));
    }
    let flow_bound = rat::ratio(1, degree - 2);
    let max_flow = edge_flows.iter().max().unwrap().clone();
    if max_flow >= flow_bound {
        return Err(Error::Input(
            "flow recursion left its invariant region; this is a bug".into(),
        ));
    }

    // signed flow on the edge (g, gs): positive outward, negative inward
    let depth = |g: &GroupElement| -> usize { g.as_word().map(|w| w.len()).unwrap_or(0) };
    let mut psi: Vec<BTreeMap<GroupElement, Rat>> = vec![BTreeMap::new(); rank as usize];
    for (i, psi_s) in psi.iter_mut().enumerate() {
        let s = spec.generator(i)?;
        for g in ball.elements() {
            let gs = spec.multiply(g, &s)?;
            let d_g = depth(g);
            let d_gs = depth(&gs);
            let value = if d_gs == d_g + 1 {
                edge_flows[d_g].clone()
            } else {
                -edge_flows[d_gs].clone()
            };
            psi_s.insert(g.clone(), value);
        }
    }

    let mut checked_vertices = 0usize;
    for g in ball.sub_ball(radius - 1) {
        let mut divergence = rat::rat(0);
        for (i, psi_s) in psi.iter().enumerate() {
            let s = spec.generator(i)?;
            let s_inv = spec.invert(&s)?;
            let g_s_inv = spec.multiply(&g, &s_inv)?;
            let at_g = psi_s
                .get(&g)
                .ok_or_else(|| Error::Window("psi undefined at a window vertex".into()))?;
            let at_shift = psi_s
                .get(&g_s_inv)
                .ok_or_else(|| Error::Window("psi undefined at a shifted vertex".into()))?;
            divergence += at_g.clone() - at_shift;
        }
        if divergence != rat::rat(1) {
            return Err(Error::Input(format!(
                "divergence at {} is {} instead of 1",
                spec.element_string(&g),
                rat::to_string(&divergence)
            )));
        }
        checked_vertices += 1;
    }

    Ok(PonziFlow {
        rank,
        radius,
        edge_flows,
        psi,
        max_flow,
        flow_bound,
        checked_vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn rank_two_flow_values() {
        let flow = ponzi_flow_free_group(2, 4).unwrap();
        assert_eq!(flow.edge_flows[0], ratio(1, 4));
        assert_eq!(flow.edge_flows[1], ratio(5, 12));
        assert_eq!(flow.edge_flows[2], ratio(17, 36));
        assert_eq!(flow.flow_bound, ratio(1, 2));
        assert!(flow.max_flow < ratio(1, 2));
    }

    #[test]
    fn divergence_is_one_on_the_window() {
        let flow = ponzi_flow_free_group(2, 5).unwrap();
        // |ball(4)| of F_2
        assert_eq!(flow.checked_vertices, 161);
    }

    #[test]
    fn rank_three_fixed_point() {
        let flow = ponzi_flow_free_group(3, 3).unwrap();
        assert_eq!(flow.flow_bound, ratio(1, 4));
        assert!(flow.max_flow < ratio(1, 4));
        // flows increase toward the fixed point
        for pair in flow.edge_flows.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn rank_one_is_rejected() {
        assert!(ponzi_flow_free_group(1, 4).is_err());
    }

    #[test]
    fn flows_are_strictly_monotone_and_bounded() {
        let flow = ponzi_flow_free_group(2, 8).unwrap();
        for f in &flow.edge_flows {
            assert!(*f < ratio(1, 2));
            assert!(*f >= ratio(1, 4));
        }
        assert_eq!(flow.edge_flows.len(), 9);
        let last = flow.edge_flows.last().unwrap();
        // three iterations from 1/4: gap to 1/2 shrinks by 3^n
        let gap = ratio(1, 2) - last;
        assert_eq!(gap, ratio(1, 4) / rat(3i64.pow(8)));
    }
}
