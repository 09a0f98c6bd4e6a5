//! Finite structures over binary-relation signatures.

mod enumerate;
mod morphism;
mod relation;
mod substructure;

pub use enumerate::{count_structures, enumerate_structures, random_structure, random_structure_with, EnumerateOptions, StructureStream};
pub use morphism::{automorphism_generators, automorphism_orbits, homomorphisms, isomorphism, is_homomorphism, OrbitOptions};
pub use relation::Relation;
pub use substructure::{ball, disjoint_union, generated_substructure, Mode};
pub(crate) use substructure::distances;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// An ordered list of opaque element identifiers with a reverse index.
///
/// Cloning is cheap; enumerators share one domain across every structure of a given size.
#[derive(Clone)]
pub struct Domain {
    names: Arc<[String]>,
    index: Arc<HashMap<String, usize>>,
}

impl Domain {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateElement(n.clone()));
            }
        }
        Ok(Domain {
            names: names.into(),
            index: Arc::new(index),
        })
    }

    /// Elements `"1"`, …, `"k"`.
    pub fn numbered(k: usize) -> Self {
        Self::new((1..=k).map(|i| i.to_string()).collect()).expect("numbered names are unique")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for Domain {}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

/// Classes of structures distinguished by the function-preservation properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureClass {
    All,
    PartialFunctions,
    TotalFunctions,
    InjectivePartialFunctions,
}

impl StructureClass {
    pub fn contains(self, r: &Relation) -> bool {
        match self {
            StructureClass::All => true,
            StructureClass::PartialFunctions => r.is_partial_function(),
            StructureClass::TotalFunctions => r.is_total_function(),
            StructureClass::InjectivePartialFunctions => r.is_injective_partial_function(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureClass::All => "all",
            StructureClass::PartialFunctions => "partial-functions",
            StructureClass::TotalFunctions => "total-functions",
            StructureClass::InjectivePartialFunctions => "injective-partial-functions",
        }
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite domain together with named binary relations over it.
#[derive(Clone, PartialEq, Eq)]
pub struct Structure {
    domain: Domain,
    relations: BTreeMap<String, Relation>,
}

impl Structure {
    /// Builds a structure from element names and named pair lists.
    pub fn new<S: Into<String>>(
        domain: Vec<String>,
        relations: impl IntoIterator<Item = (S, Vec<(String, String)>)>,
    ) -> Result<Self> {
        let domain = Domain::new(domain)?;
        let mut rels = BTreeMap::new();
        for (name, pairs) in relations {
            let mut r = Relation::empty(domain.len());
            for (a, b) in pairs {
                match (domain.index_of(&a), domain.index_of(&b)) {
                    (Ok(i), Ok(j)) => r.insert(i, j),
                    _ => return Err(Error::PairOutsideDomain(a, b)),
                }
            }
            rels.insert(name.into(), r);
        }
        Ok(Structure {
            domain,
            relations: rels,
        })
    }

    /// Assembles a structure from already-indexed relations.
    ///
    /// Panics if a relation is sized for a different domain.
    pub fn from_parts(domain: Domain, relations: BTreeMap<String, Relation>) -> Self {
        for (name, r) in &relations {
            assert_eq!(r.size(), domain.len(), "relation {name} sized for a different domain");
        }
        Structure { domain, relations }
    }

    /// Convenience constructor used heavily in tests: `&[("f", &[("1","2")])]`.
    pub fn from_lists(domain: &[&str], relations: &[(&str, &[(&str, &str)])]) -> Result<Self> {
        Self::new(
            domain.iter().map(|s| s.to_string()).collect(),
            relations.iter().map(|(n, ps)| {
                (
                    n.to_string(),
                    ps.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
                )
            }),
        )
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn name(&self, i: usize) -> &str {
        self.domain.name(i)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.domain.index_of(name)
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Relation names in sorted order.
    pub fn signature(&self) -> Vec<String> {
        self.relations.keys().cloned().collect()
    }

    pub fn with_relation(mut self, name: impl Into<String>, r: Relation) -> Self {
        assert_eq!(r.size(), self.size());
        self.relations.insert(name.into(), r);
        self
    }

    pub fn in_class(&self, class: StructureClass) -> bool {
        self.relations.values().all(|r| class.contains(r))
    }

    /// Describes the first relation that falls outside `class`, if any.
    pub fn class_violation(&self, class: StructureClass) -> Option<Error> {
        self.relations
            .iter()
            .find(|(_, r)| !class.contains(r))
            .map(|(name, _)| Error::ClassViolation {
                class: class.to_string(),
                detail: format!("relation {name} violates the class predicate"),
            })
    }

    /// Induced substructure on `elems`, in the given order.
    pub fn induced(&self, elems: &[usize]) -> Structure {
        let names = elems.iter().map(|&i| self.domain.name(i).to_string()).collect();
        let domain = Domain::new(names).expect("distinct elements");
        let mut map = vec![None; self.size()];
        for (new, &old) in elems.iter().enumerate() {
            map[old] = Some(new);
        }
        let relations = self
            .relations
            .iter()
            .map(|(k, r)| (k.clone(), r.remap(&map, elems.len())))
            .collect();
        Structure { domain, relations }
    }

    /// Renders a relation over this structure's domain as name pairs.
    pub fn pairs_named(&self, r: &Relation) -> Vec<(String, String)> {
        r.pairs()
            .map(|(a, b)| (self.name(a).to_string(), self.name(b).to_string()))
            .collect()
    }

    pub fn to_json_value(&self) -> StructureFile {
        StructureFile {
            domain: self.domain.names().to_vec(),
            relations: self
                .relations
                .iter()
                .map(|(k, r)| {
                    let pairs = self.pairs_named(r).into_iter().map(|(a, b)| [a, b]).collect();
                    (k.clone(), pairs)
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StructureFile = serde_json::from_str(text)?;
        file.into_structure()
    }
}

/// On-disk structure format: `{"domain": [...], "relations": {"f": [["a","b"]]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub domain: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
}

impl StructureFile {
    pub fn into_structure(self) -> Result<Structure> {
        Structure::new(
            self.domain,
            self.relations
                .into_iter()
                .map(|(k, ps)| (k, ps.into_iter().map(|[a, b]| (a, b)).collect())),
        )
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dom {{{}}}", self.domain.names().join(","))?;
        for (name, r) in &self.relations {
            let pairs: Vec<String> = self
                .pairs_named(r)
                .into_iter()
                .map(|(a, b)| format!("({a},{b})"))
                .collect();
            write!(f, "; {name}={{{}}}", pairs.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = Structure::from_lists(&["a", "b"], &[("f", &[("a", "b")])]).unwrap();
        let back = Structure::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn json_rejects_unknown_keys() {
        let err = Structure::from_json(r#"{"domain": ["a"], "relations": {}, "extra": 1}"#);
        assert!(err.is_err());
    }

    #[test]
    fn json_rejects_pairs_outside_domain() {
        let err = Structure::from_json(r#"{"domain": ["a"], "relations": {"f": [["a","zz"]]}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("\"zz\""), "{err}");
    }

    #[test]
    fn duplicate_elements_rejected() {
        assert!(matches!(
            Structure::from_lists(&["a", "a"], &[]),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn empty_domain_allowed() {
        let s = Structure::from_lists(&[], &[("f", &[])]).unwrap();
        assert_eq!(s.size(), 0);
        assert!(s.relation("f").unwrap().is_empty());
        assert!(s.in_class(StructureClass::TotalFunctions));
    }

    #[test]
    fn class_membership() {
        let s = Structure::from_lists(&["1", "2"], &[("f", &[("1", "2"), ("2", "2")])]).unwrap();
        assert!(s.in_class(StructureClass::PartialFunctions));
        assert!(s.in_class(StructureClass::TotalFunctions));
        assert!(!s.in_class(StructureClass::InjectivePartialFunctions));
    }
}
