//! Built-in base complexes.
//!
//! The genus-2 surface is the quotient octagon a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹,
//! triangulated by a fan of five diagonals; diagonal voltages are forced by
//! flatness once the four handle voltages are chosen, and the relator
//! condition [α,β][γ,δ] = 1 is exactly the flatness of the last fan triangle.

use super::{BaseComplex, EdgeData, Side, TriangleData};
use crate::group::{GroupElement, GroupSpec};
use crate::{Error, Result};
use std::sync::Arc;

/// Library base complexes by name: `circle_Z`, `torus_Z2`, `genus2_ladder_Z`,
/// `genus2_F2`, `genus2_Z5`, `torus_Zmod2`.
pub fn library_complex(name: &str) -> Result<BaseComplex> {
    match name {
        "circle_Z" => circle_z(),
        "torus_Z2" => {
            let group = Arc::new(GroupSpec::free_abelian(2)?);
            let a = group.parse_element("(1,0)")?;
            let b = group.parse_element("(0,1)")?;
            torus(group, a, b)
        }
        "torus_Zmod2" => {
            let group = Arc::new(GroupSpec::finite_cyclic(2));
            let a = group.parse_element("1")?;
            let b = group.identity();
            torus(group, a, b)
        }
        "genus2_ladder_Z" => {
            // voltages are intersection numbers with the first handle loop:
            // only b crosses it
            let group = Arc::new(GroupSpec::cyclic_z());
            let zero = group.identity();
            let one = group.parse_element("1")?;
            genus2(group.clone(), zero.clone(), one, zero.clone(), zero)
        }
        "genus2_F2" => {
            let group = Arc::new(GroupSpec::free(2)?);
            let x = group.normal_form("x")?;
            let y = group.normal_form("y")?;
            let e = group.identity();
            genus2(group.clone(), x, e.clone(), y, e)
        }
        "genus2_Z5" => {
            // the ladder voltages reduced mod 5
            let group = Arc::new(GroupSpec::finite_cyclic(5));
            let zero = group.identity();
            let one = group.parse_element("1")?;
            genus2(group.clone(), zero.clone(), one, zero.clone(), zero)
        }
        other => Err(Error::Input(format!("unknown library complex '{}'", other))),
    }
}

/// Circle with three edges; the total voltage 1 makes the cover the line.
fn circle_z() -> Result<BaseComplex> {
    let group = Arc::new(GroupSpec::cyclic_z());
    let one = group.parse_element("1")?;
    let zero = group.identity();
    BaseComplex::from_parts(
        group,
        1,
        vec!["v0".into(), "v1".into(), "v2".into()],
        vec![
            EdgeData {
                name: "e0".into(),
                tail: 0,
                head: 1,
                voltage: one,
            },
            EdgeData {
                name: "e1".into(),
                tail: 1,
                head: 2,
                voltage: zero.clone(),
            },
            EdgeData {
                name: "e2".into(),
                tail: 2,
                head: 0,
                voltage: zero,
            },
        ],
        Vec::new(),
    )
}

/// One-vertex torus: edges a, b and the diagonal c = a·b, two triangles.
fn torus(group: Arc<GroupSpec>, va: GroupElement, vb: GroupElement) -> Result<BaseComplex> {
    let vc = group.multiply(&va, &vb)?;
    BaseComplex::from_parts(
        group,
        2,
        vec!["v".into()],
        vec![
            EdgeData {
                name: "a".into(),
                tail: 0,
                head: 0,
                voltage: va,
            },
            EdgeData {
                name: "b".into(),
                tail: 0,
                head: 0,
                voltage: vb,
            },
            EdgeData {
                name: "c".into(),
                tail: 0,
                head: 0,
                voltage: vc,
            },
        ],
        vec![
            TriangleData {
                name: "T1".into(),
                sides: [side(0, false), side(1, false), side(2, true)],
            },
            TriangleData {
                name: "T2".into(),
                sides: [side(2, false), side(0, true), side(1, true)],
            },
        ],
    )
}

/// One-vertex genus-2 surface from the octagon a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹ with
/// handle voltages (α, β, γ, δ); requires [α,β][γ,δ] = 1.
fn genus2(
    group: Arc<GroupSpec>,
    alpha: GroupElement,
    beta: GroupElement,
    gamma: GroupElement,
    delta: GroupElement,
) -> Result<BaseComplex> {
    let commutator = |a: &GroupElement, b: &GroupElement| -> Result<GroupElement> {
        let ab = group.multiply(a, b)?;
        let a_inv = group.invert(a)?;
        let b_inv = group.invert(b)?;
        group.multiply(&group.multiply(&ab, &a_inv)?, &b_inv)
    };
    let relator = group.multiply(&commutator(&alpha, &beta)?, &commutator(&gamma, &delta)?)?;
    if relator != group.identity() {
        return Err(Error::InvalidComplex(
            "handle voltages must satisfy the surface relator".into(),
        ));
    }

    // diagonal voltages forced by flatness of the fan triangles
    let ab = group.multiply(&alpha, &beta)?;
    let aba = group.multiply(&ab, &group.invert(&alpha)?)?;
    let comm_ab = commutator(&alpha, &beta)?;
    let comm_ab_c = group.multiply(&comm_ab, &gamma)?;
    let comm_ab_cd = group.multiply(&comm_ab_c, &delta)?;

    let edge = |name: &str, voltage: GroupElement| EdgeData {
        name: name.into(),
        tail: 0,
        head: 0,
        voltage,
    };

    BaseComplex::from_parts(
        group.clone(),
        2,
        vec!["v".into()],
        vec![
            edge("a", alpha),
            edge("b", beta),
            edge("c", gamma),
            edge("d", delta),
            edge("d2", ab),
            edge("d3", aba),
            edge("d4", comm_ab),
            edge("d5", comm_ab_c),
            edge("d6", comm_ab_cd),
        ],
        vec![
            TriangleData {
                name: "T1".into(),
                sides: [side(0, false), side(1, false), side(4, true)],
            },
            TriangleData {
                name: "T2".into(),
                sides: [side(4, false), side(0, true), side(5, true)],
            },
            TriangleData {
                name: "T3".into(),
                sides: [side(5, false), side(1, true), side(6, true)],
            },
            TriangleData {
                name: "T4".into(),
                sides: [side(6, false), side(2, false), side(7, true)],
            },
            TriangleData {
                name: "T5".into(),
                sides: [side(7, false), side(3, false), side(8, true)],
            },
            TriangleData {
                name: "T6".into(),
                sides: [side(8, false), side(2, true), side(3, true)],
            },
        ],
    )
}

fn side(edge: usize, reversed: bool) -> Side {
    Side { edge, reversed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_voltages_are_flat() {
        let base = library_complex("genus2_ladder_Z").unwrap();
        assert!(base.validate().is_valid());
        // the diagonal d2 carries αβ = 1
        let d2 = base.cell_by_name("d2").unwrap();
        assert_eq!(
            base.edges()[d2.index].voltage,
            base.group().parse_element("1").unwrap()
        );
    }

    #[test]
    fn relator_violation_is_rejected() {
        // α = x, β = y do not commute, so [α,β][e,e] ≠ 1 in F₂
        let group = Arc::new(GroupSpec::free(2).unwrap());
        let x = group.normal_form("x").unwrap();
        let y = group.normal_form("y").unwrap();
        let e = group.identity();
        let result = genus2(group, x, y, e.clone(), e);
        assert!(result.is_err());
    }
}
