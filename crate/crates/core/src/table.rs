//! Exhaustive truth tables: the brute-force oracle that every other
//! representation in this crate is checked against.

use crate::cutsets::{CutSet, CutSetCollection};
use crate::error::{Error, Result};
use crate::universe::{Assignment, Universe};

/// A total Boolean function over a universe, stored as one output bit per
/// assignment. Row `i` is the assignment given by the binary digits of `i`
/// with variable 0 as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    universe: Universe,
    outputs: Vec<bool>,
}

impl TruthTable {
    /// Tabulates `f` over all `2^n` assignments. The slice passed to `f` is
    /// indexed by `VarId`.
    pub fn from_fn<F>(universe: Universe, mut f: F) -> Result<Self>
    where
        F: FnMut(&[bool]) -> bool,
    {
        let rows = universe.row_count()?;
        let mut outputs = Vec::with_capacity(rows);
        for row in 0..rows {
            outputs.push(f(&universe.row_bits(row)));
        }
        Ok(TruthTable { universe, outputs })
    }

    pub fn from_outputs(universe: Universe, outputs: Vec<bool>) -> Result<Self> {
        let rows = universe.row_count()?;
        if outputs.len() != rows {
            return Err(Error::UniverseMismatch {
                expected: universe.names().to_vec(),
                found: vec![format!("<{} outputs>", outputs.len())],
            });
        }
        Ok(TruthTable { universe, outputs })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn outputs(&self) -> &[bool] {
        &self.outputs
    }

    pub fn get(&self, row: usize) -> bool {
        self.outputs[row]
    }

    pub fn count_ones(&self) -> usize {
        self.outputs.iter().filter(|&&b| b).count()
    }

    /// Looks up the stored output for `a`'s row.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        let bits = a.bits_for(&self.universe)?;
        Ok(self.outputs[self.universe.row_of(&bits)])
    }

    /// Exhaustive dominance scan: every single-bit 0→1 flip must not turn the
    /// output 1→0.
    pub fn is_monotone(&self) -> bool {
        let n = self.universe.len();
        for row in 0..self.outputs.len() {
            if !self.outputs[row] {
                continue;
            }
            for v in 0..n {
                let bit = 1usize << (n - 1 - v);
                if row & bit == 0 && !self.outputs[row | bit] {
                    return false;
                }
            }
        }
        true
    }

    /// Brute-force minimal cut sets: the inclusion-minimal variable sets whose
    /// joint occurrence (all else 0) makes the function true.
    ///
    /// For a monotone function a true row is minimal exactly when clearing any
    /// single 1-bit makes it false, so one pass over the table suffices.
    pub fn minimal_cut_sets(&self) -> Result<CutSetCollection> {
        if self.outputs.is_empty() || self.outputs[0] {
            return Err(Error::TrivialFunction);
        }
        if !self.is_monotone() {
            return Err(Error::NonMonotoneFunction);
        }
        let n = self.universe.len();
        let mut sets: Vec<CutSet> = Vec::new();
        for row in 0..self.outputs.len() {
            if !self.outputs[row] {
                continue;
            }
            let minimal = (0..n).all(|v| {
                let bit = 1usize << (n - 1 - v);
                row & bit == 0 || !self.outputs[row & !bit]
            });
            if minimal {
                sets.push(
                    (0..n)
                        .filter(|&v| row & (1usize << (n - 1 - v)) != 0)
                        .map(|v| self.universe.name(v).to_string())
                        .collect(),
                );
            }
        }
        let mut out = CutSetCollection::new(sets);
        out.sort_canonical();
        Ok(out)
    }

    /// Brute-force probability that the function is true, assuming independent
    /// variables: the sum over all true rows of the row's product weight.
    /// `p` is indexed by `VarId`.
    pub fn probability(&self, p: &[f64]) -> Result<f64> {
        let n = self.universe.len();
        if p.len() != n {
            return Err(Error::UniverseMismatch {
                expected: self.universe.names().to_vec(),
                found: vec![format!("<{} probabilities>", p.len())],
            });
        }
        for (v, &pv) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&pv) {
                return Err(Error::ProbabilityOutOfRange {
                    name: self.universe.name(v).to_string(),
                    value: pv,
                });
            }
        }
        let mut total = 0.0;
        for row in 0..self.outputs.len() {
            if !self.outputs[row] {
                continue;
            }
            let mut weight = 1.0;
            for (v, &pv) in p.iter().enumerate() {
                let bit = 1usize << (n - 1 - v);
                weight *= if row & bit != 0 { pv } else { 1.0 - pv };
            }
            total += weight;
        }
        Ok(total)
    }

    /// Semantic equality across possibly different variable orders over the
    /// same name set.
    pub fn equivalent(&self, other: &TruthTable) -> Result<bool> {
        if !self.universe.same_names(other.universe()) {
            return Err(Error::UniverseMismatch {
                expected: self.universe.names().to_vec(),
                found: other.universe().names().to_vec(),
            });
        }
        let remap: Vec<usize> = other
            .universe()
            .names()
            .iter()
            .map(|n| self.universe.index_of(n).unwrap())
            .collect();
        for row in 0..self.outputs.len() {
            let bits = self.universe.row_bits(row);
            let other_bits: Vec<bool> = remap.iter().map(|&v| bits[v]).collect();
            if self.outputs[row] != other.get(other.universe().row_of(&other_bits)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
