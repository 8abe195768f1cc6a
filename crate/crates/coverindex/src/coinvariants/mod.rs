//! Decidable arithmetic in the module of coinvariants ℓ∞(G)_G.
//!
//! The representable slice is "constant multiple of 𝟙 plus a finitely
//! supported deviation". It is closed under the G-action (gφ)(h) = φ(hg) and
//! under boundary terms φ - gφ, and every index table this crate produces
//! lands in it. Class arithmetic is decided by the family trichotomy: for an
//! infinite amenable group a finitely supported function is a boundary and 𝟙
//! is not, for an infinite non-amenable group everything is a boundary, and
//! for a finite group the sum functional identifies the classes with ℝ.
//!
//! All scalars are exact rationals; verdicts never depend on rounding.

mod ponzi;
mod whyte;

pub use ponzi::{ponzi_flow_free_group, PonziFlow};
pub use whyte::{whyte_check, whyte_refute_ones, RefutationOutcome, WhyteMode, WhyteReport, WhyteRow};

use crate::group::{GroupElement, GroupSpec};
use crate::rat::{self, Rat};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A bounded function constant + deviation, the decidable slice of ℓ∞(G).
#[derive(Debug, Clone, PartialEq)]
pub struct CoinvariantRep {
    group: Arc<GroupSpec>,
    constant: Rat,
    deviation: BTreeMap<GroupElement, Rat>,
}

impl CoinvariantRep {
    pub fn new(
        group: Arc<GroupSpec>,
        constant: Rat,
        deviation: BTreeMap<GroupElement, Rat>,
    ) -> Result<Self> {
        for (g, v) in &deviation {
            if !group.belongs(g) {
                return Err(Error::Input(format!(
                    "deviation support element {:?} outside the group",
                    g
                )));
            }
            if rat::is_zero(v) {
                return Err(Error::Input("deviation must not store zero values".into()));
            }
        }
        Ok(CoinvariantRep {
            group,
            constant,
            deviation,
        })
    }

    /// The constant function 𝟙.
    pub fn one(group: Arc<GroupSpec>) -> Self {
        Self::constant_multiple(group, rat::rat(1))
    }

    pub fn zero(group: Arc<GroupSpec>) -> Self {
        Self::constant_multiple(group, rat::rat(0))
    }

    pub fn constant_multiple(group: Arc<GroupSpec>, c: Rat) -> Self {
        CoinvariantRep {
            group,
            constant: c,
            deviation: BTreeMap::new(),
        }
    }

    /// The point mass v·δ_g.
    pub fn delta(group: Arc<GroupSpec>, g: GroupElement, v: Rat) -> Result<Self> {
        let mut deviation = BTreeMap::new();
        if !rat::is_zero(&v) {
            deviation.insert(g, v);
        }
        Self::new(group, rat::rat(0), deviation)
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn constant(&self) -> &Rat {
        &self.constant
    }

    pub fn deviation(&self) -> &BTreeMap<GroupElement, Rat> {
        &self.deviation
    }

    /// Pointwise value φ(g).
    pub fn eval(&self, g: &GroupElement) -> Rat {
        match self.deviation.get(g) {
            Some(d) => self.constant.clone() + d,
            None => self.constant.clone(),
        }
    }

    /// An explicit bound |φ| ≤ |constant| + max|deviation|.
    pub fn sup_bound(&self) -> Rat {
        let dev_max = self
            .deviation
            .values()
            .map(rat::abs)
            .max()
            .unwrap_or_else(|| rat::rat(0));
        rat::abs(&self.constant) + dev_max
    }

    fn check_same_group(&self, other: &CoinvariantRep) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::Input(
                "coinvariant representatives over different groups".into(),
            ))
        }
    }

    /// The action (gφ)(h) = φ(hg): the constant part is fixed and the
    /// deviation support is translated h ↦ h·g⁻¹.
    pub fn act(&self, g: &GroupElement) -> Result<CoinvariantRep> {
        let g_inv = self.group.invert(g)?;
        let mut deviation = BTreeMap::new();
        for (h, v) in &self.deviation {
            deviation.insert(self.group.multiply(h, &g_inv)?, v.clone());
        }
        Ok(CoinvariantRep {
            group: self.group.clone(),
            constant: self.constant.clone(),
            deviation,
        })
    }

    /// φ - gφ. Its constant part is always zero.
    pub fn boundary_term(&self, g: &GroupElement) -> Result<CoinvariantRep> {
        self.sub(&self.act(g)?)
    }

    pub fn add(&self, other: &CoinvariantRep) -> Result<CoinvariantRep> {
        self.check_same_group(other)?;
        let mut deviation = self.deviation.clone();
        for (g, v) in &other.deviation {
            let entry = deviation.entry(g.clone()).or_insert_with(|| rat::rat(0));
            *entry += v;
            if rat::is_zero(entry) {
                deviation.remove(g);
            }
        }
        Ok(CoinvariantRep {
            group: self.group.clone(),
            constant: self.constant.clone() + &other.constant,
            deviation,
        })
    }

    pub fn sub(&self, other: &CoinvariantRep) -> Result<CoinvariantRep> {
        self.add(&other.scale(&rat::rat(-1)))
    }

    pub fn scale(&self, c: &Rat) -> CoinvariantRep {
        if rat::is_zero(c) {
            return Self::zero(self.group.clone());
        }
        CoinvariantRep {
            group: self.group.clone(),
            constant: self.constant.clone() * c,
            deviation: self
                .deviation
                .iter()
                .map(|(g, v)| (g.clone(), v.clone() * c))
                .collect(),
        }
    }

    /// The canonical class descriptor of [φ] in ℓ∞(G)_G.
    ///
    /// Infinite amenable family: the deviation is finitely supported, hence a
    /// boundary, and the class is constant·[𝟙]. Infinite non-amenable family:
    /// 𝟙 itself is a boundary, so everything representable here is zero.
    /// Finite group: the sum functional Σ_g φ(g) is a complete invariant.
    pub fn class_reduce(&self) -> CoinvariantClass {
        if let Some(order) = self.group.order() {
            let mut total = self.constant.clone() * rat::rat(order as i64);
            for v in self.deviation.values() {
                total += v;
            }
            return CoinvariantClass::Scalar(total);
        }
        if self.group.is_amenable() {
            CoinvariantClass::OneMultiple(self.constant.clone())
        } else {
            CoinvariantClass::Zero
        }
    }

    /// Whether [φ] = [ψ].
    pub fn class_equal(&self, other: &CoinvariantRep) -> Result<bool> {
        self.check_same_group(other)?;
        Ok(self.class_reduce() == other.class_reduce())
    }

    /// Følner average (1/|F_N|) Σ_{g∈F_N} φ(g), exact. Converges to the
    /// constant with error at most Σ|deviation| / |F_N|.
    pub fn folner_mean(&self, n: u32) -> Result<Rat> {
        let f = crate::group::folner_set(&self.group, n)?;
        let size = rat::rat(f.len() as i64);
        let mut dev_sum = rat::rat(0);
        for g in &f {
            if let Some(v) = self.deviation.get(g) {
                dev_sum += v;
            }
        }
        Ok(self.constant.clone() + dev_sum / size)
    }

    /// Structured record {constant, deviations: [(element-string, value)]}.
    pub fn to_record(&self) -> serde_json::Value {
        let deviations: Vec<serde_json::Value> = self
            .deviation
            .iter()
            .map(|(g, v)| {
                serde_json::json!([self.group.element_string(g), rat::to_string(v)])
            })
            .collect();
        serde_json::json!({
            "constant": rat::to_string(&self.constant),
            "deviations": deviations,
        })
    }

    pub fn from_record(group: Arc<GroupSpec>, value: &serde_json::Value) -> Result<Self> {
        let constant = value
            .get("constant")
            .and_then(|v| v.as_str())
            .and_then(rat::parse)
            .ok_or_else(|| Error::Parse("coinvariant record: bad constant".into()))?;
        let mut deviation = BTreeMap::new();
        if let Some(devs) = value.get("deviations").and_then(|v| v.as_array()) {
            for pair in devs {
                let (g, v) = match pair.as_array().map(|a| a.as_slice()) {
                    Some([g, v]) => (g, v),
                    _ => return Err(Error::Parse("coinvariant record: bad pair".into())),
                };
                let elem = group.parse_element(
                    g.as_str()
                        .ok_or_else(|| Error::Parse("element must be a string".into()))?,
                )?;
                let val = v
                    .as_str()
                    .and_then(rat::parse)
                    .ok_or_else(|| Error::Parse("bad deviation value".into()))?;
                if !rat::is_zero(&val) {
                    deviation.insert(elem, val);
                }
            }
        }
        Self::new(group, constant, deviation)
    }
}

/// Canonical descriptor of a class in ℓ∞(G)_G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoinvariantClass {
    /// c·[𝟙] for an infinite amenable deck group.
    OneMultiple(Rat),
    /// The zero module: infinite non-amenable deck group.
    Zero,
    /// The value of the sum functional for a finite deck group.
    Scalar(Rat),
}

impl CoinvariantClass {
    pub fn is_zero(&self) -> bool {
        match self {
            CoinvariantClass::OneMultiple(c) | CoinvariantClass::Scalar(c) => rat::is_zero(c),
            CoinvariantClass::Zero => true,
        }
    }
}

impl fmt::Display for CoinvariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinvariantClass::OneMultiple(c) => write!(f, "{}*[1]", rat::to_string(c)),
            CoinvariantClass::Zero => write!(f, "0"),
            CoinvariantClass::Scalar(v) => write!(f, "{}", rat::to_string(v)),
        }
    }
}
