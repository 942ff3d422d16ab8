//! Cut sets — the qualitative-analysis currency shared by fault trees,
//! decision trees, and BDDs.

use std::collections::BTreeSet;
use std::fmt;

/// A set of variable names whose joint occurrence triggers the top event.
pub type CutSet = BTreeSet<String>;

/// A collection of cut sets. After [`CutSetCollection::minimize`] it is an
/// antichain: no duplicates, no member a subset of another.
#[derive(Debug, Clone, Default)]
pub struct CutSetCollection {
    sets: Vec<CutSet>,
}

impl CutSetCollection {
    pub fn new(sets: Vec<CutSet>) -> Self {
        CutSetCollection { sets }
    }

    pub fn from_names<I, J, S>(sets: I) -> Self
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = S>,
        S: Into<String>,
    {
        CutSetCollection {
            sets: sets
                .into_iter()
                .map(|s| s.into_iter().map(Into::into).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[CutSet] {
        &self.sets
    }

    pub fn iter(&self) -> impl Iterator<Item = &CutSet> {
        self.sets.iter()
    }

    /// Absorption: drop duplicates and supersets, keeping the union-of-prime
    /// semantics unchanged. Result is sorted canonically.
    pub fn minimize(mut self) -> Self {
        // Smaller sets can only absorb larger ones, so scan by size.
        self.sets.sort_by_key(|s| s.len());
        let mut kept: Vec<CutSet> = Vec::with_capacity(self.sets.len());
        for set in self.sets {
            if !kept.iter().any(|k| k.is_subset(&set)) {
                kept.push(set);
            }
        }
        let mut out = CutSetCollection { sets: kept };
        out.sort_canonical();
        out
    }

    /// True when no member is a subset of another and there are no duplicates.
    pub fn is_antichain(&self) -> bool {
        for (i, a) in self.sets.iter().enumerate() {
            for (j, b) in self.sets.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Sorts members lexicographically by their (sorted) name sequences.
    pub fn sort_canonical(&mut self) {
        self.sets
            .sort_by(|a, b| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()));
    }

    /// One line per set, members sorted, lines sorted lexicographically.
    pub fn to_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .sets
            .iter()
            .map(|s| s.iter().cloned().collect::<Vec<_>>().join(" "))
            .collect();
        lines.sort();
        lines
    }

    fn canonical(&self) -> BTreeSet<&CutSet> {
        self.sets.iter().collect()
    }
}

/// Order-insensitive set equality.
impl PartialEq for CutSetCollection {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for CutSetCollection {}

impl fmt::Display for CutSetCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.to_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absorption_drops_supersets() {
        let c = CutSetCollection::from_names([vec!["B1"], vec!["B1", "B2"]]).minimize();
        assert_eq!(c, CutSetCollection::from_names([vec!["B1"]]));
    }

    #[test]
    fn duplicates_collapse() {
        let c = CutSetCollection::from_names([vec!["B1", "B2"], vec!["B2", "B1"]]).minimize();
        assert_eq!(c.len(), 1);
        assert!(c.is_antichain());
    }

    #[test]
    fn already_minimal_unchanged() {
        let seal = CutSetCollection::from_names([
            vec!["B1", "B2"],
            vec!["B3", "B4", "B5", "B7"],
            vec!["B3", "B4", "B6", "B7"],
            vec!["B3", "B5", "B6", "B7"],
        ]);
        let minimized = seal.clone().minimize();
        assert_eq!(minimized, seal);
        assert_eq!(
            minimized.to_lines(),
            vec!["B1 B2", "B3 B4 B5 B7", "B3 B4 B6 B7", "B3 B5 B6 B7"]
        );
    }

    #[test]
    fn minimize_is_idempotent() {
        let c = CutSetCollection::from_names([
            vec!["A"],
            vec!["A", "B"],
            vec!["B", "C"],
            vec!["C", "B"],
            vec!["A", "B", "C"],
        ]);
        let once = c.minimize();
        let twice = once.clone().minimize();
        assert_eq!(once, twice);
        assert!(once.is_antichain());
    }
}
