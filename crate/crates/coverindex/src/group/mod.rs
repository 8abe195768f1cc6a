//! Finitely generated group families with solvable word problem.
//!
//! Every element carries a family-specific canonical normal form, so equality
//! is identity of forms and elements can key ordered maps. The word metric is
//! always realized by breadth-first search over a declared symmetric
//! generating set (see [`ball`]), never by normal-form word length.

mod ball;
mod dehn;

pub use ball::{folner_set, outer_boundary_count, AnnulusCount, Ball, BallCache};

use crate::{Error, Result};
use std::fmt;
use std::sync::OnceLock;

/// One symbol of a word: a generator index plus an inversion flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u16, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// Canonical carrier for a group element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalForm {
    /// Infinite cyclic: the exponent.
    Int(i64),
    /// Free abelian: the exponent vector.
    Vector(Vec<i64>),
    /// Free or surface group: a reduced word (freely reduced, and for surface
    /// groups the lexicographically least Dehn-reduced representative).
    Word(Vec<Letter>),
    /// Finite group given by a multiplication table: the element id.
    Table(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    form: NormalForm,
}

impl GroupElement {
    pub fn form(&self) -> &NormalForm {
        &self.form
    }

    pub fn as_int(&self) -> Option<i64> {
        match &self.form {
            NormalForm::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match &self.form {
            NormalForm::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&[Letter]> {
        match &self.form {
            NormalForm::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_table_id(&self) -> Option<usize> {
        match &self.form {
            NormalForm::Table(id) => Some(*id),
            _ => None,
        }
    }
}

/// Finite group presented by its full multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTable {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteTable {
    /// Validates the group axioms on construction: associativity, two-sided
    /// identity, and inverses. Generators must be closed under inversion.
    pub fn new(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        identity: usize,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::Input("finite table: malformed table".into()));
        }
        if table.iter().flatten().any(|&v| v >= n) || identity >= n {
            return Err(Error::Input("finite table: entry out of range".into()));
        }
        #[allow(clippy::needless_range_loop)]
        for a in 0..n {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(Error::Input("finite table: identity axiom fails".into()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        #[allow(clippy::needless_range_loop)]
        for a in 0..n {
            for b in 0..n {
                if table[a][b] == identity && table[b][a] == identity {
                    inverse[a] = b;
                }
            }
            if inverse[a] == usize::MAX {
                return Err(Error::Input(format!(
                    "finite table: no inverse for element {}",
                    names[a]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Input("finite table: associativity fails".into()));
                    }
                }
            }
        }
        if generators.is_empty() || generators.iter().any(|&g| g >= n) {
            return Err(Error::Input("finite table: bad generator list".into()));
        }
        for &g in &generators {
            if !generators.contains(&inverse[g]) {
                return Err(Error::Input(
                    "finite table: generators not closed under inverse".into(),
                ));
            }
        }
        Ok(FiniteTable {
            names,
            table,
            identity,
            inverse,
            generators,
        })
    }

    /// The cyclic group of order `n` with generators {1, n-1}.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let generators = if n == 1 {
            vec![0]
        } else if n == 2 {
            vec![1]
        } else {
            vec![1, n - 1]
        };
        FiniteTable::new(names, table, 0, generators).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// The supported group families.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupFamily {
    CyclicZ,
    FreeAbelian(u16),
    Free(u16),
    Surface(u16),
    FiniteTable(FiniteTable),
}

/// A group together with its ordered generator symbols.
///
/// The symbol list stores one name per positive generator; formal inverses
/// are written `name^-1` in words, so the symbol set is closed under
/// inversion by construction.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    family: GroupFamily,
    generator_names: Vec<String>,
    dehn: OnceLock<dehn::DehnTables>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.generator_names == other.generator_names
    }
}

impl GroupSpec {
    pub fn new(family: GroupFamily) -> Result<Self> {
        let generator_names = match &family {
            GroupFamily::CyclicZ => vec!["t".to_string()],
            GroupFamily::FreeAbelian(d) | GroupFamily::Free(d) => {
                if *d == 0 {
                    return Err(Error::Input("rank must be positive".into()));
                }
                default_letter_names(*d as usize)
            }
            GroupFamily::Surface(g) => {
                if *g < 2 {
                    return Err(Error::Input("surface genus must be at least 2".into()));
                }
                let mut names = Vec::new();
                for i in 1..=*g {
                    names.push(format!("a{}", i));
                    names.push(format!("b{}", i));
                }
                names
            }
            GroupFamily::FiniteTable(t) => {
                t.generators.iter().map(|&g| t.names[g].clone()).collect()
            }
        };
        Ok(GroupSpec {
            family,
            generator_names,
            dehn: OnceLock::new(),
        })
    }

    pub fn cyclic_z() -> Self {
        GroupSpec::new(GroupFamily::CyclicZ).unwrap()
    }

    pub fn free_abelian(rank: u16) -> Result<Self> {
        GroupSpec::new(GroupFamily::FreeAbelian(rank))
    }

    pub fn free(rank: u16) -> Result<Self> {
        GroupSpec::new(GroupFamily::Free(rank))
    }

    pub fn surface(genus: u16) -> Result<Self> {
        GroupSpec::new(GroupFamily::Surface(genus))
    }

    pub fn finite_cyclic(n: usize) -> Self {
        GroupSpec::new(GroupFamily::FiniteTable(FiniteTable::cyclic(n))).unwrap()
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// Amenability of the family. `Free(1)` is infinite cyclic and therefore
    /// amenable; higher-rank free groups and surface groups are not.
    pub fn is_amenable(&self) -> bool {
        match &self.family {
            GroupFamily::CyclicZ | GroupFamily::FreeAbelian(_) | GroupFamily::FiniteTable(_) => {
                true
            }
            GroupFamily::Free(k) => *k <= 1,
            GroupFamily::Surface(_) => false,
        }
    }

    pub fn order(&self) -> Option<usize> {
        match &self.family {
            GroupFamily::FiniteTable(t) => Some(t.order()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn identity(&self) -> GroupElement {
        let form = match &self.family {
            GroupFamily::CyclicZ => NormalForm::Int(0),
            GroupFamily::FreeAbelian(d) => NormalForm::Vector(vec![0; *d as usize]),
            GroupFamily::Free(_) | GroupFamily::Surface(_) => NormalForm::Word(Vec::new()),
            GroupFamily::FiniteTable(t) => NormalForm::Table(t.identity),
        };
        GroupElement { form }
    }

    /// The i-th positive generator as an element.
    pub fn generator(&self, i: usize) -> Result<GroupElement> {
        if i >= self.generator_names.len() {
            return Err(Error::Input(format!("no generator with index {}", i)));
        }
        match &self.family {
            GroupFamily::CyclicZ => Ok(GroupElement {
                form: NormalForm::Int(1),
            }),
            GroupFamily::FreeAbelian(d) => {
                let mut v = vec![0; *d as usize];
                v[i] = 1;
                Ok(GroupElement {
                    form: NormalForm::Vector(v),
                })
            }
            GroupFamily::Free(_) | GroupFamily::Surface(_) => Ok(GroupElement {
                form: NormalForm::Word(vec![Letter::new(i as u16, false)]),
            }),
            GroupFamily::FiniteTable(t) => Ok(GroupElement {
                form: NormalForm::Table(t.generators[i]),
            }),
        }
    }

    /// The standard symmetric generating set: each generator and its inverse,
    /// deduplicated (order-two generators appear once).
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for i in 0..self.generator_names.len() {
            let g = self.generator(i).expect("index in range");
            let inv = self.invert(&g).expect("same family");
            if !out.contains(&g) {
                out.push(g);
            }
            if !out.contains(&inv) {
                out.push(inv);
            }
        }
        out
    }

    pub fn belongs(&self, e: &GroupElement) -> bool {
        match (&self.family, &e.form) {
            (GroupFamily::CyclicZ, NormalForm::Int(_)) => true,
            (GroupFamily::FreeAbelian(d), NormalForm::Vector(v)) => v.len() == *d as usize,
            (GroupFamily::Free(k), NormalForm::Word(w)) => {
                w.iter().all(|l| (l.gen as usize) < *k as usize)
            }
            (GroupFamily::Surface(g), NormalForm::Word(w)) => {
                w.iter().all(|l| (l.gen as usize) < 2 * *g as usize)
            }
            (GroupFamily::FiniteTable(t), NormalForm::Table(id)) => *id < t.order(),
            _ => false,
        }
    }

    fn check_belongs(&self, e: &GroupElement) -> Result<()> {
        if self.belongs(e) {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "element {:?} does not belong to this group family",
                e.form
            )))
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_belongs(a)?;
        self.check_belongs(b)?;
        let form = match (&self.family, &a.form, &b.form) {
            (GroupFamily::CyclicZ, NormalForm::Int(x), NormalForm::Int(y)) => {
                NormalForm::Int(x + y)
            }
            (GroupFamily::FreeAbelian(_), NormalForm::Vector(x), NormalForm::Vector(y)) => {
                NormalForm::Vector(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            (GroupFamily::Free(_), NormalForm::Word(x), NormalForm::Word(y)) => {
                let mut w = x.clone();
                w.extend_from_slice(y);
                NormalForm::Word(dehn::free_reduce(&w))
            }
            (GroupFamily::Surface(_), NormalForm::Word(x), NormalForm::Word(y)) => {
                let mut w = x.clone();
                w.extend_from_slice(y);
                NormalForm::Word(self.dehn_tables().canonical(&w))
            }
            (GroupFamily::FiniteTable(t), NormalForm::Table(x), NormalForm::Table(y)) => {
                NormalForm::Table(t.table[*x][*y])
            }
            _ => unreachable!("belongs() already checked"),
        };
        Ok(GroupElement { form })
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_belongs(a)?;
        let form = match (&self.family, &a.form) {
            (GroupFamily::CyclicZ, NormalForm::Int(x)) => NormalForm::Int(-x),
            (GroupFamily::FreeAbelian(_), NormalForm::Vector(v)) => {
                NormalForm::Vector(v.iter().map(|x| -x).collect())
            }
            (GroupFamily::Free(_), NormalForm::Word(w)) => {
                NormalForm::Word(dehn::invert_word(w))
            }
            (GroupFamily::Surface(_), NormalForm::Word(w)) => {
                NormalForm::Word(self.dehn_tables().canonical(&dehn::invert_word(w)))
            }
            (GroupFamily::FiniteTable(t), NormalForm::Table(id)) => {
                NormalForm::Table(t.inverse[*id])
            }
            _ => unreachable!("belongs() already checked"),
        };
        Ok(GroupElement { form })
    }

    /// Canonical form of a word over the generator symbols, e.g.
    /// `"x y^-1 x"` or `"a1*b1*a1^-1*b1^-1"`. `e` and `1` denote the identity.
    pub fn normal_form(&self, word: &str) -> Result<GroupElement> {
        let tokens = tokenize_word(word)?;
        let mut acc = self.identity();
        for (name, exp) in tokens {
            let base = self.symbol_element(&name)?;
            let factor = if exp >= 0 {
                base
            } else {
                self.invert(&base)?
            };
            for _ in 0..exp.unsigned_abs() {
                acc = self.multiply(&acc, &factor)?;
            }
        }
        Ok(acc)
    }

    fn symbol_element(&self, name: &str) -> Result<GroupElement> {
        if let Some(i) = self.generator_names.iter().position(|n| n == name) {
            return self.generator(i);
        }
        // finite tables accept any element name, not just generators
        if let GroupFamily::FiniteTable(t) = &self.family {
            if let Some(id) = t.names.iter().position(|n| n == name) {
                return Ok(GroupElement {
                    form: NormalForm::Table(id),
                });
            }
        }
        Err(Error::Input(format!("unknown symbol '{}'", name)))
    }

    /// Display form: integers for ℤ, tuples for ℤ^d, reduced words for free
    /// and surface groups (identity prints as `e`), names for finite tables.
    pub fn element_string(&self, e: &GroupElement) -> String {
        match (&self.family, &e.form) {
            (_, NormalForm::Int(n)) => n.to_string(),
            (_, NormalForm::Vector(v)) => {
                let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(","))
            }
            (_, NormalForm::Word(w)) => {
                if w.is_empty() {
                    "e".to_string()
                } else {
                    w.iter()
                        .map(|l| {
                            let name = &self.generator_names[l.gen as usize];
                            if l.inv {
                                format!("{}^-1", name)
                            } else {
                                name.clone()
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("*")
                }
            }
            (GroupFamily::FiniteTable(t), NormalForm::Table(id)) => t.names[*id].clone(),
            (_, NormalForm::Table(id)) => id.to_string(),
        }
    }

    /// Inverse of [`Self::element_string`]; also accepts arbitrary words.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        match &self.family {
            GroupFamily::CyclicZ => {
                if let Ok(n) = s.parse::<i64>() {
                    return Ok(GroupElement {
                        form: NormalForm::Int(n),
                    });
                }
            }
            GroupFamily::FreeAbelian(d) => {
                if let Some(body) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                    let parts: Vec<&str> = body.split(',').collect();
                    if parts.len() == *d as usize {
                        let mut v = Vec::with_capacity(parts.len());
                        let mut ok = true;
                        for p in parts {
                            match p.trim().parse::<i64>() {
                                Ok(x) => v.push(x),
                                Err(_) => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if ok {
                            return Ok(GroupElement {
                                form: NormalForm::Vector(v),
                            });
                        }
                    }
                }
            }
            // element names take precedence over word syntax: the names of a
            // cyclic table are digits, which word syntax would read as the
            // identity shorthand '1'
            GroupFamily::FiniteTable(t) => {
                if let Some(id) = t.names.iter().position(|n| n == s) {
                    return Ok(GroupElement {
                        form: NormalForm::Table(id),
                    });
                }
            }
            _ => {}
        }
        self.normal_form(s)
    }

    pub(crate) fn dehn_tables(&self) -> &dehn::DehnTables {
        let genus = match &self.family {
            GroupFamily::Surface(g) => *g,
            _ => panic!("dehn tables are only defined for surface groups"),
        };
        self.dehn.get_or_init(|| dehn::DehnTables::new(genus))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            GroupFamily::CyclicZ => write!(f, "Z"),
            GroupFamily::FreeAbelian(d) => write!(f, "Z^{}", d),
            GroupFamily::Free(k) => write!(f, "F_{}", k),
            GroupFamily::Surface(g) => write!(f, "Surface_{}", g),
            GroupFamily::FiniteTable(t) => write!(f, "FiniteTable({})", t.order()),
        }
    }
}

fn default_letter_names(rank: usize) -> Vec<String> {
    const SHORT: [&str; 4] = ["x", "y", "z", "w"];
    if rank <= SHORT.len() {
        SHORT[..rank].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=rank).map(|i| format!("x{}", i)).collect()
    }
}

fn tokenize_word(word: &str) -> Result<Vec<(String, i64)>> {
    let mut out = Vec::new();
    for raw in word.split(|c: char| c.is_whitespace() || c == '*') {
        if raw.is_empty() || raw == "e" || raw == "1" {
            continue;
        }
        let (name, exp) = match raw.split_once('^') {
            Some((n, e)) => {
                let exp: i64 = e
                    .parse()
                    .map_err(|_| Error::Input(format!("bad exponent in token '{}'", raw)))?;
                (n, exp)
            }
            None => (raw, 1),
        };
        if name.is_empty() {
            return Err(Error::Input(format!("empty symbol in token '{}'", raw)));
        }
        out.push((name.to_string(), exp));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_abelian_commutes() {
        let spec = GroupSpec::free_abelian(2).unwrap();
        let e = spec.normal_form("x y x^-1").unwrap();
        assert_eq!(e.as_vector().unwrap(), &[0, 1]);
    }

    #[test]
    fn free_group_reduces() {
        let spec = GroupSpec::free(2).unwrap();
        let e = spec.normal_form("x y y^-1 x").unwrap();
        assert_eq!(spec.element_string(&e), "x*x");
        let inv = spec.invert(&spec.normal_form("x y").unwrap()).unwrap();
        assert_eq!(spec.element_string(&inv), "y^-1*x^-1");
    }

    #[test]
    fn surface_relator_is_identity() {
        let spec = GroupSpec::surface(2).unwrap();
        let r = spec
            .normal_form("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1")
            .unwrap();
        assert_eq!(r, spec.identity());
    }

    #[test]
    fn surface_half_relator_words_agree() {
        // a1 b1 a1^-1 b1^-1  equals  b2 a2 b2^-1 a2^-1  in the genus-2 group
        let spec = GroupSpec::surface(2).unwrap();
        let u = spec.normal_form("a1 b1 a1^-1 b1^-1").unwrap();
        let v = spec.normal_form("b2 a2 b2^-1 a2^-1").unwrap();
        assert_eq!(u, v, "canonical forms must merge half-relator pairs");
    }

    #[test]
    fn cyclic_and_finite_arithmetic() {
        let z = GroupSpec::cyclic_z();
        let three = z.normal_form("t^3").unwrap();
        let four = z.normal_form("t^4").unwrap();
        assert_eq!(z.multiply(&three, &four).unwrap().as_int(), Some(7));

        let z5 = GroupSpec::finite_cyclic(5);
        let a = z5.normal_form("3").unwrap();
        let b = z5.normal_form("4").unwrap();
        assert_eq!(z5.element_string(&z5.multiply(&a, &b).unwrap()), "2");
    }

    #[test]
    fn unknown_symbol_is_an_input_error() {
        let spec = GroupSpec::free(2).unwrap();
        assert!(matches!(spec.normal_form("x q"), Err(Error::Input(_))));
    }

    #[test]
    fn family_mismatch_is_an_input_error() {
        let z = GroupSpec::cyclic_z();
        let f2 = GroupSpec::free(2).unwrap();
        let w = f2.normal_form("x").unwrap();
        assert!(z.multiply(&z.identity(), &w).is_err());
    }

    #[test]
    fn double_inverse_is_identity_map() {
        let spec = GroupSpec::surface(2).unwrap();
        let g = spec.normal_form("a1 b2 a2^-1 b1").unwrap();
        let gg = spec.invert(&spec.invert(&g).unwrap()).unwrap();
        assert_eq!(g, gg);
    }

    #[test]
    fn element_strings_round_trip() {
        let z2 = GroupSpec::free_abelian(2).unwrap();
        let e = z2.normal_form("x^3 y^-2").unwrap();
        assert_eq!(z2.element_string(&e), "(3,-2)");
        assert_eq!(z2.parse_element("(3,-2)").unwrap(), e);

        let f2 = GroupSpec::free(2).unwrap();
        let w = f2.normal_form("x y^-1").unwrap();
        assert_eq!(f2.parse_element(&f2.element_string(&w)).unwrap(), w);
        assert_eq!(f2.parse_element("e").unwrap(), f2.identity());
    }

    #[test]
    fn finite_table_rejects_non_groups() {
        // 2x2 table that is not associative / lacks identity structure
        let bad = FiniteTable::new(
            vec!["e".into(), "a".into()],
            vec![vec![0, 1], vec![1, 1]],
            0,
            vec![1],
        );
        assert!(bad.is_err());
    }
}
