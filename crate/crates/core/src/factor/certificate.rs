use serde::{Deserialize, Serialize};

use super::partition::Partition;
use crate::lattice::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Independent,
    Nice,
    Factored,
    InductivelyFree,
    InductiveFactorization,
    InductivelyFactored,
    Supersolvable,
    HereditarilyFactored,
    HereditarilyInductivelyFactored,
    HereditarilyInductivelyFree,
    KappaIsomorphism,
}

/// The property a hereditary check tests on each restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hereditary {
    Factored,
    InductivelyFactored,
    InductivelyFree,
}

impl Hereditary {
    pub fn property(self) -> Property {
        match self {
            Hereditary::Factored => Property::Factored,
            Hereditary::InductivelyFactored => Property::InductivelyFactored,
            Hereditary::InductivelyFree => Property::InductivelyFree,
        }
    }

    pub fn hereditary_property(self) -> Property {
        match self {
            Hereditary::Factored => Property::HereditarilyFactored,
            Hereditary::InductivelyFactored => Property::HereditarilyInductivelyFactored,
            Hereditary::InductivelyFree => Property::HereditarilyInductivelyFree,
        }
    }
}

/// Evidence for a verdict. Hyperplane and flat member numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Verdict follows from a base case or an exhaustive search.
    None,
    /// A nice partition or inductive factorization.
    Partition { partition: Partition },
    /// One hyperplane per block, linearly dependent.
    DependentTransversal { hyperplanes: Vec<usize> },
    /// A flat whose induced partition has no singleton block.
    NoSingleton { flat: Vec<usize>, induced: Partition },
    /// The Poincaré polynomial is not a product of integer linear factors.
    PoincareNotFactored { poincare: Poly },
    /// Maximal chain of modular flats, V excluded.
    ModularChain { flats: Vec<Vec<usize>> },
    /// Hyperplanes in the order they are added, starting from the empty
    /// arrangement; every step is an addition in the sense of the checked
    /// property.
    InductionOrder { order: Vec<usize> },
    /// An inductive factorization together with its addition order.
    Factorization { partition: Partition, order: Vec<usize> },
    /// The inductive-freeness exponents disagree with the block sizes.
    ExponentMismatch { exponents: Vec<usize>, block_sizes: Vec<usize> },
    /// A flat whose restriction fails the property.
    FailingRestriction { flat: Vec<usize>, certificate: Box<Certificate> },
    /// κ has different domain and codomain dimension in this degree.
    DimensionMismatch { degree: usize, domain: usize, codomain: usize },
    /// κ is square but singular in this degree.
    Singular { degree: usize },
    /// Domain and codomain dimensions per degree of an isomorphic κ.
    GradedDimensions { dims: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: Property,
    pub verdict: bool,
    /// The partition under test, for properties of a pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<usize>>,
    pub witness: Witness,
}

impl Certificate {
    pub fn new(property: Property, verdict: bool, witness: Witness) -> Certificate {
        Certificate { property, verdict, partition: None, exponents: None, witness }
    }

    pub fn with_partition(mut self, p: &Partition) -> Certificate {
        self.partition = Some(p.clone());
        self
    }

    pub fn with_exponents(mut self, e: Vec<usize>) -> Certificate {
        self.exponents = Some(e);
        self
    }
}

pub(crate) fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub(crate) fn zero_based(v: &[usize]) -> Option<Vec<usize>> {
    v.iter().map(|i| i.checked_sub(1)).collect()
}
