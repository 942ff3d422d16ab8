//! Variables, universes, and total assignments — the substrate every model
//! in this crate evaluates over.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Index of a variable within a [`Universe`] (0-based declaration order).
pub type VarId = usize;

/// Hard cap on exhaustive operations (truth tables, brute-force analyses).
pub const MAX_EXHAUSTIVE_VARS: usize = 24;

/// An ordered set of uniquely named Boolean variables.
///
/// The position of a name is its [`VarId`]; all bit vectors in this crate are
/// indexed by it. Row indices of truth tables use variable 0 as the most
/// significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, VarId>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::DuplicateVariable(String::new()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        Ok(Universe { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    /// True when both universes contain the same names, regardless of order.
    pub fn same_names(&self, other: &Universe) -> bool {
        self.len() == other.len() && self.names.iter().all(|n| other.index_of(n).is_some())
    }

    /// Number of rows of an exhaustive table over this universe.
    ///
    /// Errors with [`Error::TooManyVariables`] above [`MAX_EXHAUSTIVE_VARS`].
    pub fn row_count(&self) -> Result<usize> {
        if self.len() > MAX_EXHAUSTIVE_VARS {
            return Err(Error::TooManyVariables {
                count: self.len(),
                max: MAX_EXHAUSTIVE_VARS,
            });
        }
        Ok(1usize << self.len())
    }

    /// Bits of row `row`, indexed by `VarId`. Variable 0 is the most
    /// significant bit of the row index.
    pub fn row_bits(&self, row: usize) -> Vec<bool> {
        let n = self.len();
        (0..n).map(|v| (row >> (n - 1 - v)) & 1 == 1).collect()
    }

    /// Row index of a bit vector (inverse of [`Universe::row_bits`]).
    pub fn row_of(&self, bits: &[bool]) -> usize {
        let n = self.len();
        bits.iter()
            .enumerate()
            .fold(0, |acc, (v, &b)| acc | ((b as usize) << (n - 1 - v)))
    }

    pub fn assignment(&self, bits: Vec<bool>) -> Result<Assignment> {
        if bits.len() != self.len() {
            return Err(Error::UniverseMismatch {
                expected: self.names.clone(),
                found: vec![format!("<{} bits>", bits.len())],
            });
        }
        Ok(Assignment {
            universe: self.clone(),
            bits,
        })
    }

    /// Assignment with the named variables set to 1 and everything else 0.
    pub fn assignment_from_true<'a, I>(&self, set: I) -> Result<Assignment>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = vec![false; self.len()];
        for name in set {
            let v = self
                .index_of(name)
                .ok_or_else(|| Error::UnresolvedReference(name.to_string()))?;
            bits[v] = true;
        }
        self.assignment(bits)
    }
}

/// A total map from a universe's variables to Boolean values.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    universe: Universe,
    bits: Vec<bool>,
}

impl Assignment {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, v: VarId) -> bool {
        self.bits[v]
    }

    pub fn get_name(&self, name: &str) -> Option<bool> {
        self.universe.index_of(name).map(|v| self.bits[v])
    }

    /// Re-expresses the bits in `target` variable order.
    ///
    /// Errors with [`Error::UniverseMismatch`] when the name sets differ.
    pub fn bits_for(&self, target: &Universe) -> Result<Vec<bool>> {
        if !self.universe.same_names(target) {
            return Err(Error::UniverseMismatch {
                expected: target.names().to_vec(),
                found: self.universe.names().to_vec(),
            });
        }
        Ok(target
            .names()
            .iter()
            .map(|n| self.bits[self.universe.index_of(n).unwrap()])
            .collect())
    }
}
