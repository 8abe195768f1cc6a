//! Scenario configuration: a single versioned JSON document.
//!
//! All tolerances live here with documented defaults, so a verdict is
//! reproducible from the config alone.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    /// Base complex for cover scenarios; absent for flat-model scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseRef>,
    /// Generating set as words over the deck group; defaults to the standard
    /// symmetric set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default = "default_radius")]
    pub radius: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    /// Domain offset for flat models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<f64>>,
    pub checks: Vec<CheckConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub quad: QuadConfig,
    #[serde(default)]
    pub seed: u64,
}

fn default_radius() -> u32 {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseRef {
    /// One of the built-in complexes.
    Library(String),
    /// Path to a base complex text file, with the deck group named inline.
    File { path: String, group: GroupRef },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupRef {
    CyclicZ,
    FreeAbelian { rank: u16 },
    Free { rank: u16 },
    Surface { genus: u16 },
    FiniteCyclic { order: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FieldConfig {
    Discrete {
        #[serde(default)]
        core: Vec<PairConfig>,
        #[serde(default)]
        overrides: Vec<OverrideConfig>,
    },
    Analytic {
        dim: usize,
        components: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        deviation_box: Option<BoxConfig>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairConfig {
    pub lower: CellRefConfig,
    pub upper: CellRefConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellRefConfig {
    pub cell: String,
    /// Label relative to the anchor, as an element string; defaults to the
    /// identity.
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OverrideConfig {
    pub anchor: String,
    pub pairs: Vec<PairConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CheckConfig {
    /// The combinatorial index table is constant `expected` on the inner
    /// window.
    IndexTableConstant { expected: i64 },
    /// The coinvariant class descriptor prints as `expected`.
    Class { expected: String },
    /// The class equals `constant`·[𝟙].
    ClassEqualConstant { constant: i64 },
    /// Følner means match constant + (Σ deviation)/|F_N| exactly.
    FolnerMeans { ns: Vec<u32>, constant: i64 },
    /// A finitely supported candidate index table contradicts (or fails to
    /// contradict) the index theorem.
    Infinitude {
        candidate: Vec<(String, i64)>,
        expected: InfinitudeExpectation,
    },
    /// Fixed points of an expression map close to the identity.
    Diffeo {
        map: Vec<String>,
        fixed_points_per_domain: usize,
        indices_per_domain: Vec<i64>,
    },
    /// The winding index table is constant `expected`, with the given
    /// multiset of per-zero indices in every domain.
    WindingTable {
        expected: i64,
        #[serde(default)]
        per_domain_indices: Vec<i64>,
    },
    /// Rounded Thom table equals the winding table entry by entry.
    ThomVsWinding,
    /// Per-domain Stokes residuals at the configured panel counts.
    Stokes {
        coefficients: Vec<String>,
        #[serde(default)]
        check_doubling: bool,
    },
    /// Antiderivative growth classification on the line.
    Antiderivative {
        integrand: String,
        expected: ClassEvidenceExpectation,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slope: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sup: Option<f64>,
    },
    /// Randomized zero-mean periodic integrands plus perturbations, and
    /// integrands with a constant part; slopes must match the constant part.
    AntiderivativeRandom { count: usize },
    /// Certify the Whyte inequality for a point mass over intervals.
    WhyteCertifyDelta { c: String, r: u32, max_n: u32 },
    /// Refute triviality of 𝟙 over a (C, r) sweep on this scenario's group
    /// and on the rank-two lattice.
    WhyteRefuteSweep { cs: Vec<String>, rs: Vec<u32> },
    /// Exact Ponzi flow certificate on the free group.
    Ponzi { rank: u16, radius: u32 },
    /// Facet generating set and its partition.
    FacetPartition {
        expected_s: Vec<String>,
        #[serde(default)]
        expected_s_zero: Vec<String>,
    },
    /// Orientation opposition across all shared facets.
    Orientation { expected: bool },
    /// Total of the index table over a finite deck group.
    EulerTotal { expected: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfinitudeExpectation {
    Contradiction,
    NotApplicable,
    NoContradiction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassEvidenceExpectation {
    ZeroEvidence,
    NonzeroEvidence,
}

/// All numeric tolerances, with the documented defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Per-domain Stokes residual, one-dimensional models.
    pub stokes_residual_1d: f64,
    /// Per-domain Stokes residual, two-dimensional models.
    pub stokes_residual_2d: f64,
    /// Largest admissible distance of a Thom per-domain value from an
    /// integer.
    pub thom_gap: f64,
    /// Separation radius for tameness checks.
    pub delta: f64,
    /// Tameness lower bound; the Thom bump uses half of it.
    pub epsilon_tame: f64,
    /// Antiderivative verdict threshold on the fitted tail slope.
    pub slope_tol: f64,
    /// Tolerance when comparing a fitted slope to a prescribed value.
    pub slope_match: f64,
    /// Tolerance on sup|h| against a closed form.
    pub sup_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            stokes_residual_1d: 1e-10,
            stokes_residual_2d: 1e-8,
            thom_gap: 1e-3,
            delta: 0.2,
            epsilon_tame: 0.9,
            slope_tol: 1e-3,
            slope_match: 1e-4,
            sup_tol: 1e-8,
        }
    }
}

/// Quadrature and search resolutions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadConfig {
    /// Panels per unit length, one-dimensional integrals.
    pub panels_1d: usize,
    /// Panels per unit length and axis, two-dimensional integrals.
    pub panels_2d: usize,
    /// Panels per axis over each zero box in Thom integrals.
    pub thom_box_panels: usize,
    /// Zero-finding grid over one-dimensional windows.
    pub find_grid: usize,
    /// Zero-finding grid per axis over two-dimensional windows.
    pub find_grid_2d: usize,
    /// Extent of the antiderivative window [-X, X].
    pub antider_extent: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            panels_1d: 64,
            panels_2d: 32,
            thom_box_panels: 48,
            find_grid: 256,
            find_grid_2d: 96,
            antider_extent: 20.0,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> crate::Result<Self> {
        let config: ScenarioConfig = serde_json::from_str(text)
            .map_err(|e| crate::Error::Config(format!("bad scenario config: {}", e)))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(crate::Error::Config(format!(
                "unsupported schema version {} (expected {})",
                config.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configs_round_trip_through_json() {
        let config = ScenarioConfig {
            schema_version: SCHEMA_VERSION,
            name: "round-trip".into(),
            base: Some(BaseRef::Library("genus2_ladder_Z".into())),
            generators: None,
            radius: 6,
            field: Some(FieldConfig::Discrete {
                core: vec![],
                overrides: vec![OverrideConfig {
                    anchor: "3".into(),
                    pairs: vec![PairConfig {
                        lower: CellRefConfig {
                            cell: "v".into(),
                            label: None,
                        },
                        upper: CellRefConfig {
                            cell: "b".into(),
                            label: None,
                        },
                    }],
                }],
            }),
            offset: None,
            checks: vec![
                CheckConfig::IndexTableConstant { expected: -2 },
                CheckConfig::Class {
                    expected: "-2*[1]".into(),
                },
            ],
            tolerances: Tolerances::default(),
            quad: QuadConfig::default(),
            seed: 0,
        };
        let text = config.to_json();
        let back = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(back.name, "round-trip");
        assert_eq!(back.radius, 6);
        assert_eq!(back.checks.len(), 2);
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = r#"{"schema_version": 99, "name": "x", "checks": []}"#;
        assert!(ScenarioConfig::from_json(text).is_err());
    }
}
