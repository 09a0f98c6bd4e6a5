//! Bounded semantic checks of preservation properties.
//!
//! A pass only means no counterexample exists within the enumerated search space, which every
//! verdict records.

mod props;
mod table1;

pub use props::check;
pub use table1::{table1_matrix, Table1Report, Table1Row, TABLE1_COLUMNS, TABLE1_EXPECTED};

use crate::oracle::Oracle;
use crate::structures::{Structure, StructureClass, StructureFile};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// Partial-function inputs give a partial-function output.
    Fp,
    Tfp,
    Ifp,
    Homsafe,
    Subsafe,
    Forward,
    Local,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Fp,
        Property::Tfp,
        Property::Ifp,
        Property::Homsafe,
        Property::Subsafe,
        Property::Forward,
        Property::Local,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Fp => "fp",
            Property::Tfp => "tfp",
            Property::Ifp => "ifp",
            Property::Homsafe => "homsafe",
            Property::Subsafe => "subsafe",
            Property::Forward => "forward",
            Property::Local => "local",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Class of the enumerated structures unless overridden.
    pub fn default_class(self) -> StructureClass {
        match self {
            Property::Fp | Property::Forward => StructureClass::PartialFunctions,
            Property::Tfp => StructureClass::TotalFunctions,
            Property::Ifp | Property::Local => StructureClass::InjectivePartialFunctions,
            Property::Homsafe | Property::Subsafe => StructureClass::All,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Search space of one check.
#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    /// Every structure of the class up to this size is checked.
    pub max_size: usize,
    /// For homomorphism safety: both structures of an exhaustive pair stay within this size.
    pub pair_max_size: usize,
    pub samples: usize,
    pub sample_max_size: usize,
    /// Overrides the property's default structure class.
    pub class: Option<StructureClass>,
}

impl Bounds {
    /// Exhaustive to size 3 for operations on two or more symbols and 4 otherwise; 1000 random
    /// samples up to size 12. Exhaustive homomorphism pairs stop at size 2 for two or more
    /// symbols and 3 otherwise.
    pub fn for_symbols(symbols: usize) -> Bounds {
        let max_size = if symbols >= 2 { 3 } else { 4 };
        Bounds {
            max_size,
            pair_max_size: if symbols >= 2 { 2 } else { 3 },
            samples: 1000,
            sample_max_size: 12,
            class: None,
        }
    }

    pub fn for_oracle(op: &Oracle) -> Bounds {
        Bounds::for_symbols(op.symbols().len())
    }

    pub fn with_max_size(mut self, n: usize) -> Bounds {
        self.max_size = n;
        self.pair_max_size = self.pair_max_size.min(n);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    PassBounded,
    Fail,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    /// One structure for class checks; `(A, B)` for homomorphisms and embeddings;
    /// `(A, A_a)` for forward and local checks.
    pub structures: Vec<Structure>,
    /// Element map from the first structure into the second, when relevant.
    pub map: Option<Vec<(String, String)>>,
    pub pair: Option<(String, String)>,
    pub explanation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleFile {
    pub structures: Vec<StructureFile>,
    pub map: Option<Vec<[String; 2]>>,
    pub pair: Option<[String; 2]>,
    pub explanation: String,
}

impl Counterexample {
    pub fn to_file(&self) -> CounterexampleFile {
        CounterexampleFile {
            structures: self.structures.iter().map(Structure::to_json_value).collect(),
            map: self
                .map
                .as_ref()
                .map(|m| m.iter().map(|(a, b)| [a.clone(), b.clone()]).collect()),
            pair: self.pair.as_ref().map(|(a, b)| [a.clone(), b.clone()]),
            explanation: self.explanation.clone(),
        }
    }

    /// Largest domain among the witness structures.
    pub fn max_domain(&self) -> usize {
        self.structures.iter().map(Structure::size).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub property: Property,
    pub operation: String,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub bounds: Bounds,
    pub class: StructureClass,
    pub seed: u64,
    /// Structures (or structure pairs) examined exhaustively and at random.
    pub exhaustive_checked: u64,
    pub random_checked: u64,
    /// A fail verdict whose witness was confirmed by a second, unoptimized evaluation.
    pub reverified: bool,
}

#[derive(Serialize)]
struct VerdictFile<'a> {
    schema: u32,
    property: Property,
    operation: &'a str,
    status: Status,
    counterexample: Option<CounterexampleFile>,
    bounds: &'a Bounds,
    class: StructureClass,
    seed: u64,
    exhaustive_checked: u64,
    random_checked: u64,
    reverified: bool,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == Status::PassBounded
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(VerdictFile {
            schema: 1,
            property: self.property,
            operation: &self.operation,
            status: self.status,
            counterexample: self.counterexample.as_ref().map(Counterexample::to_file),
            bounds: &self.bounds,
            class: self.class,
            seed: self.seed,
            exhaustive_checked: self.exhaustive_checked,
            random_checked: self.random_checked,
            reverified: self.reverified,
        })
        .expect("verdict serializes")
    }
}
