//! The shipped scenario library: one named scenario per verified statement.

use super::config::*;

fn base_scenario(name: &str) -> ScenarioConfig {
    ScenarioConfig {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        base: None,
        generators: None,
        radius: 4,
        field: None,
        offset: None,
        checks: Vec::new(),
        tolerances: Tolerances::default(),
        quad: QuadConfig::default(),
        seed: 0,
    }
}

fn empty_discrete() -> FieldConfig {
    FieldConfig::Discrete {
        core: Vec::new(),
        overrides: Vec::new(),
    }
}

fn cell(name: &str) -> CellRefConfig {
    CellRefConfig {
        cell: name.into(),
        label: None,
    }
}

fn cell_at(name: &str, label: &str) -> CellRefConfig {
    CellRefConfig {
        cell: name.into(),
        label: Some(label.into()),
    }
}

/// All built-in scenarios, in a fixed order.
pub fn builtin_scenarios() -> Vec<ScenarioConfig> {
    let mut out = Vec::new();

    // index theorem, periodic combinatorial field on the infinite-genus
    // two-ended ladder cover
    let mut s = base_scenario("ladder-periodic");
    s.base = Some(BaseRef::Library("genus2_ladder_Z".into()));
    s.radius = 6;
    s.field = Some(empty_discrete());
    s.checks = vec![
        CheckConfig::IndexTableConstant { expected: -2 },
        CheckConfig::Class {
            expected: "-2*[1]".into(),
        },
    ];
    out.push(s);

    // same cover with three overrides in distinct copies: the deviation is
    // finitely supported and the class does not move
    let mut s = base_scenario("ladder-perturbed");
    s.base = Some(BaseRef::Library("genus2_ladder_Z".into()));
    s.radius = 6;
    s.field = Some(FieldConfig::Discrete {
        core: Vec::new(),
        overrides: vec![
            OverrideConfig {
                anchor: "-2".into(),
                pairs: vec![PairConfig {
                    lower: cell("v"),
                    upper: cell("b"),
                }],
            },
            OverrideConfig {
                anchor: "0".into(),
                pairs: vec![PairConfig {
                    lower: cell_at("a", "1"),
                    upper: cell("T2"),
                }],
            },
            OverrideConfig {
                anchor: "3".into(),
                pairs: vec![PairConfig {
                    lower: cell("d2"),
                    upper: cell("T1"),
                }],
            },
        ],
    });
    s.checks = vec![
        CheckConfig::ClassEqualConstant { constant: -2 },
        CheckConfig::FolnerMeans {
            ns: vec![5, 10, 20],
            constant: -2,
        },
    ];
    out.push(s);

    // a finitely supported candidate contradicts the theorem on the ladder
    let mut s = base_scenario("ladder-infinitude");
    s.base = Some(BaseRef::Library("genus2_ladder_Z".into()));
    s.radius = 4;
    s.checks = vec![CheckConfig::Infinitude {
        candidate: vec![("-1".into(), 3), ("0".into(), -1), ("1".into(), 2)],
        expected: InfinitudeExpectation::Contradiction,
    }];
    out.push(s);

    // χ = 0: nothing to contradict on the torus
    let mut s = base_scenario("torus-infinitude");
    s.base = Some(BaseRef::Library("torus_Z2".into()));
    s.radius = 4;
    s.checks = vec![CheckConfig::Infinitude {
        candidate: vec![("(0,0)".into(), 1)],
        expected: InfinitudeExpectation::NotApplicable,
    }];
    out.push(s);

    // non-amenable deck group: the required class is itself zero
    let mut s = base_scenario("f2-infinitude");
    s.base = Some(BaseRef::Library("genus2_F2".into()));
    s.radius = 3;
    s.checks = vec![CheckConfig::Infinitude {
        candidate: vec![("e".into(), 1)],
        expected: InfinitudeExpectation::NoContradiction,
    }];
    out.push(s);

    // free-group cover: the table is -2 but the class collapses, witnessed
    // by the exact Ponzi certificate for the triviality of 𝟙
    let mut s = base_scenario("f2-cover");
    s.base = Some(BaseRef::Library("genus2_F2".into()));
    s.radius = 4;
    s.field = Some(empty_discrete());
    s.checks = vec![
        CheckConfig::IndexTableConstant { expected: -2 },
        CheckConfig::Class {
            expected: "0".into(),
        },
        CheckConfig::Ponzi {
            rank: 2,
            radius: 8,
        },
    ];
    out.push(s);

    // finite cyclic cover: the sum functional recovers χ of the total space
    let mut s = base_scenario("z5-cover");
    s.base = Some(BaseRef::Library("genus2_Z5".into()));
    s.radius = 4;
    s.field = Some(empty_discrete());
    s.checks = vec![
        CheckConfig::EulerTotal { expected: -10 },
        CheckConfig::Class {
            expected: "-10".into(),
        },
    ];
    out.push(s);

    // analytic product field on the torus cover: winding and Thom agree
    let mut s = base_scenario("torus-analytic");
    s.radius = 3;
    s.offset = Some(vec![0.25, 0.25]);
    s.field = Some(FieldConfig::Analytic {
        dim: 2,
        components: vec!["sin(2*pi*x)".into(), "sin(2*pi*y)".into()],
        deviation_box: None,
    });
    s.checks = vec![
        CheckConfig::WindingTable {
            expected: 0,
            per_domain_indices: vec![1, -1, -1, 1],
        },
        CheckConfig::ThomVsWinding,
    ];
    out.push(s);

    // a diffeomorphism close to the identity on the line cover
    let mut s = base_scenario("circle-diffeo");
    s.radius = 4;
    s.offset = Some(vec![0.25]);
    s.tolerances.epsilon_tame = 0.09;
    s.checks = vec![CheckConfig::Diffeo {
        map: vec!["x + 0.1*sin(2*pi*x)".into()],
        fixed_points_per_domain: 2,
        indices_per_domain: vec![1, -1],
    }];
    out.push(s);

    // per-domain Stokes on the line
    let mut s = base_scenario("stokes-1d");
    s.radius = 4;
    s.offset = Some(vec![0.25]);
    // the phase keeps the integrand from being even about the domain
    // midpoints, which would hide the quadrature error entirely
    s.checks = vec![CheckConfig::Stokes {
        coefficients: vec!["exp(sin(2*pi*x + 1))".into()],
        check_doubling: true,
    }];
    out.push(s);

    // per-domain Stokes on the plane, plus the convergence-order check on a
    // form whose quadrature error is visible at low panel counts
    let mut s = base_scenario("stokes-2d");
    s.radius = 3;
    s.offset = Some(vec![0.3, 0.7]);
    s.checks = vec![
        CheckConfig::Stokes {
            coefficients: vec!["cos(2*pi*x)".into(), "0".into()],
            check_doubling: false,
        },
        CheckConfig::Stokes {
            coefficients: vec![
                "exp(sin(2*pi*x + 0.5))*exp(cos(2*pi*y))".into(),
                "exp(cos(2*pi*y + 0.3))*exp(sin(2*pi*x + 0.1))".into(),
            ],
            check_doubling: true,
        },
    ];
    out.push(s);

    // the M = ℝ antiderivative dichotomy
    let mut s = base_scenario("antider-line");
    s.checks = vec![
        CheckConfig::Antiderivative {
            integrand: "cos(2*pi*x)".into(),
            expected: ClassEvidenceExpectation::ZeroEvidence,
            slope: Some(0.0),
            sup: Some(1.0 / (2.0 * std::f64::consts::PI)),
        },
        CheckConfig::Antiderivative {
            integrand: "1".into(),
            expected: ClassEvidenceExpectation::NonzeroEvidence,
            slope: Some(1.0),
            sup: None,
        },
        CheckConfig::AntiderivativeRandom { count: 10 },
    ];
    out.push(s);

    // summing-criterion checks: certification for a point mass, refutations
    // for 𝟙 across a (C, r) sweep
    let mut s = base_scenario("whyte-criterion");
    s.checks = vec![
        CheckConfig::WhyteCertifyDelta {
            c: "1".into(),
            r: 1,
            max_n: 50,
        },
        CheckConfig::WhyteRefuteSweep {
            cs: vec!["1".into(), "2".into(), "4".into(), "8".into()],
            rs: vec![1, 2, 3],
        },
        CheckConfig::Ponzi {
            rank: 2,
            radius: 8,
        },
    ];
    out.push(s);

    // facet structure of the ladder domain
    let mut s = base_scenario("ladder-facets");
    s.base = Some(BaseRef::Library("genus2_ladder_Z".into()));
    s.radius = 4;
    s.checks = vec![
        CheckConfig::FacetPartition {
            expected_s: vec!["1".into(), "-1".into()],
            expected_s_zero: vec![],
        },
        CheckConfig::Orientation { expected: true },
    ];
    out.push(s);

    // order-two facet generator on the double cover of the torus
    let mut s = base_scenario("torus-mod2-facets");
    s.base = Some(BaseRef::Library("torus_Zmod2".into()));
    s.radius = 3;
    s.checks = vec![
        CheckConfig::FacetPartition {
            expected_s: vec!["1".into()],
            expected_s_zero: vec!["1".into()],
        },
        CheckConfig::Orientation { expected: true },
    ];
    out.push(s);

    out
}

pub fn builtin_scenario(name: &str) -> Option<ScenarioConfig> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_are_unique() {
        let scenarios = builtin_scenarios();
        let mut names: Vec<&str> = scenarios.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), scenarios.len());
    }

    #[test]
    fn scenarios_serialize() {
        for s in builtin_scenarios() {
            let text = s.to_json();
            let back = ScenarioConfig::from_json(&text).unwrap();
            assert_eq!(back.name, s.name);
        }
    }
}
