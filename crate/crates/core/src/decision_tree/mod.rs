//! Binary classification decision trees over binary features: CART-style
//! Gini induction, evaluation, and positive-rule extraction.

use std::collections::BTreeSet;

use crate::cutsets::{CutSet, CutSetCollection};
use crate::error::{Error, Result};
use crate::table::TruthTable;
use crate::universe::{Assignment, Universe, VarId};

/// Labeled binary rows over a universe; the training input for induction.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    universe: Universe,
    rows: Vec<(Vec<bool>, bool)>,
}

/// Provenance of a sampled dataset, written as a `#` comment in its CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMeta {
    pub seed: u64,
    pub p_success: f64,
}

impl Dataset {
    pub fn new(universe: Universe, rows: Vec<(Vec<bool>, bool)>) -> Result<Self> {
        for (bits, _) in &rows {
            if bits.len() != universe.len() {
                return Err(Error::UniverseMismatch {
                    expected: universe.names().to_vec(),
                    found: vec![format!("<{} bits>", bits.len())],
                });
            }
        }
        Ok(Dataset { universe, rows })
    }

    /// The exhaustive dataset: one row per assignment.
    pub fn from_truth_table(t: &TruthTable) -> Self {
        let universe = t.universe().clone();
        let rows = (0..t.outputs().len())
            .map(|row| (universe.row_bits(row), t.get(row)))
            .collect();
        Dataset { universe, rows }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn rows(&self) -> &[(Vec<bool>, bool)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn label_mean(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        self.rows.iter().filter(|(_, l)| *l).count() as f64 / self.rows.len() as f64
    }

    /// CSV serialization: optional `# seed=.. p=..` comment, a header of
    /// variable names plus `top`, then `0`/`1` rows.
    pub fn to_csv(&self, meta: Option<SampleMeta>) -> String {
        let mut out = String::new();
        if let Some(m) = meta {
            out.push_str(&format!("# seed={} p={}\n", m.seed, m.p_success));
        }
        out.push_str(&self.universe.names().join(","));
        out.push_str(",top\n");
        for (bits, label) in &self.rows {
            for &b in bits {
                out.push(if b { '1' } else { '0' });
                out.push(',');
            }
            out.push(if *label { '1' } else { '0' });
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (header_no, header) = lines.next().ok_or(Error::EmptyDataset)?;
        let mut cols: Vec<&str> = header.split(',').map(str::trim).collect();
        match cols.pop() {
            Some("top") => {}
            _ => {
                return Err(Error::Syntax {
                    line: header_no + 1,
                    col: 1,
                    msg: "last CSV column must be `top`".to_string(),
                })
            }
        }
        let universe = Universe::new(cols)?;
        let mut rows = Vec::new();
        for (no, line) in lines {
            let mut bits = Vec::with_capacity(universe.len() + 1);
            for field in line.split(',') {
                match field.trim() {
                    "0" => bits.push(false),
                    "1" => bits.push(true),
                    other => {
                        return Err(Error::Syntax {
                            line: no + 1,
                            col: 1,
                            msg: format!("expected 0 or 1, found `{other}`"),
                        })
                    }
                }
            }
            if bits.len() != universe.len() + 1 {
                return Err(Error::Syntax {
                    line: no + 1,
                    col: 1,
                    msg: format!(
                        "expected {} fields, found {}",
                        universe.len() + 1,
                        bits.len()
                    ),
                });
            }
            let label = bits.pop().unwrap();
            rows.push((bits, label));
        }
        Dataset::new(universe, rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DtNode {
    Leaf(bool),
    Split { var: VarId, lo: usize, hi: usize },
}

/// A proper binary tree classifier: every node has one parent, and no
/// variable repeats along a root-to-leaf path.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    universe: Universe,
    nodes: Vec<DtNode>,
    root: usize,
}

impl DecisionTree {
    /// Greedy CART-style induction with the Gini criterion.
    ///
    /// At each node the unused variable with the largest impurity decrease is
    /// chosen (ties to the smallest variable index). An impure node whose
    /// best decrease is zero is still split on the first variable that
    /// separates its rows, so exhaustive noise-free data always induces an
    /// exact tree; a leaf is emitted only when the rows are pure or no unused
    /// variable separates them (majority label, ties to 1).
    pub fn induce(data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut tree = DecisionTree {
            universe: data.universe().clone(),
            nodes: Vec::new(),
            root: 0,
        };
        let all_rows: Vec<usize> = (0..data.len()).collect();
        let mut used = vec![false; data.universe().len()];
        tree.root = tree.grow(data, &all_rows, &mut used);
        Ok(tree)
    }

    fn grow(&mut self, data: &Dataset, rows: &[usize], used: &mut Vec<bool>) -> usize {
        let ones = rows.iter().filter(|&&r| data.rows[r].1).count();
        if ones == 0 || ones == rows.len() {
            return self.push(DtNode::Leaf(ones > 0));
        }

        let parent_gini = gini(ones, rows.len());
        let mut best: Option<(f64, VarId)> = None;
        for v in 0..self.universe.len() {
            if used[v] {
                continue;
            }
            let (mut n1, mut c1) = (0usize, 0usize);
            for &r in rows {
                let (bits, label) = &data.rows[r];
                if bits[v] {
                    n1 += 1;
                    c1 += *label as usize;
                }
            }
            let n0 = rows.len() - n1;
            if n0 == 0 || n1 == 0 {
                continue; // does not separate this subset
            }
            let c0 = ones - c1;
            let weighted = (n0 as f64 * gini(c0, n0) + n1 as f64 * gini(c1, n1))
                / rows.len() as f64;
            let gain = parent_gini - weighted;
            if best.map_or(true, |(g, _)| gain > g) {
                best = Some((gain, v));
            }
        }

        let Some((_, var)) = best else {
            // Only duplicate rows with conflicting labels remain.
            return self.push(DtNode::Leaf(2 * ones >= rows.len()));
        };

        let (lo_rows, hi_rows): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&r| !data.rows[r].0[var]);
        used[var] = true;
        let lo = self.grow(data, &lo_rows, used);
        let hi = self.grow(data, &hi_rows, used);
        used[var] = false;
        self.push(DtNode::Split { var, lo, hi })
    }

    fn push(&mut self, node: DtNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Assembles a tree from parts; used by the BDD unfolding converter.
    pub fn from_parts(universe: Universe, nodes: Vec<DtNode>, root: usize) -> Result<Self> {
        let dt = DecisionTree { universe, nodes, root };
        // Paths must never repeat a variable.
        fn scan(dt: &DecisionTree, id: usize, seen: &mut Vec<bool>) -> Result<()> {
            if let DtNode::Split { var, lo, hi } = dt.nodes[id] {
                if seen[var] {
                    return Err(Error::DuplicateVariable(
                        dt.universe.name(var).to_string(),
                    ));
                }
                seen[var] = true;
                scan(dt, lo, seen)?;
                scan(dt, hi, seen)?;
                seen[var] = false;
            }
            Ok(())
        }
        let mut seen = vec![false; dt.universe.len()];
        scan(&dt, dt.root, &mut seen)?;
        Ok(dt)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn nodes(&self) -> &[DtNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Total node count (decision nodes plus leaves).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn split_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, DtNode::Split { .. }))
            .count()
    }

    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        let bits = a.bits_for(&self.universe)?;
        Ok(self.evaluate_row(&bits))
    }

    /// Walks branches by bit values (indexed by this tree's `VarId`).
    pub fn evaluate_row(&self, bits: &[bool]) -> bool {
        let mut id = self.root;
        loop {
            match self.nodes[id] {
                DtNode::Leaf(label) => return label,
                DtNode::Split { var, lo, hi } => {
                    id = if bits[var] { hi } else { lo };
                }
            }
        }
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.universe.clone(), |bits| self.evaluate_row(bits))
    }

    /// For every leaf labeled 1: the variables taken on their 1-branch along
    /// the path, minimized by absorption.
    pub fn positive_rules(&self) -> CutSetCollection {
        self.raw_positive_rules().minimize()
    }

    /// The unminimized path sets, exactly as read off the tree.
    pub fn raw_positive_rules(&self) -> CutSetCollection {
        let mut sets = Vec::new();
        let mut path: BTreeSet<String> = BTreeSet::new();
        self.collect_rules(self.root, &mut path, &mut sets);
        let mut c = CutSetCollection::new(sets);
        c.sort_canonical();
        c
    }

    fn collect_rules(&self, id: usize, path: &mut CutSet, sets: &mut Vec<CutSet>) {
        match &self.nodes[id] {
            DtNode::Leaf(true) => sets.push(path.clone()),
            DtNode::Leaf(false) => {}
            DtNode::Split { var, lo, hi } => {
                self.collect_rules(*lo, path, sets);
                let name = self.universe.name(*var).to_string();
                path.insert(name.clone());
                self.collect_rules(*hi, path, sets);
                path.remove(&name);
            }
        }
    }

    /// Fraction of the table's assignments this tree classifies identically.
    pub fn accuracy_against(&self, t: &TruthTable) -> Result<f64> {
        if !self.universe.same_names(t.universe()) {
            return Err(Error::UniverseMismatch {
                expected: t.universe().names().to_vec(),
                found: self.universe.names().to_vec(),
            });
        }
        let remap: Vec<usize> = self
            .universe
            .names()
            .iter()
            .map(|n| t.universe().index_of(n).unwrap())
            .collect();
        let rows = t.outputs().len();
        let mut agree = 0usize;
        for row in 0..rows {
            let bits = t.universe().row_bits(row);
            let mine: Vec<bool> = remap.iter().map(|&v| bits[v]).collect();
            if self.evaluate_row(&mine) == t.get(row) {
                agree += 1;
            }
        }
        Ok(agree as f64 / rows as f64)
    }

    /// DOT rendering: decision nodes as circles labeled by variable, leaves
    /// as squares labeled 0/1; 1-edge solid, 0-edge dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph decision_tree {\n");
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                DtNode::Leaf(label) => {
                    out.push_str(&format!(
                        "  n{id} [shape=square, label=\"{}\"];\n",
                        *label as u8
                    ));
                }
                DtNode::Split { var, .. } => {
                    out.push_str(&format!(
                        "  n{id} [shape=circle, label=\"{}\"];\n",
                        self.universe.name(*var)
                    ));
                }
            }
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if let DtNode::Split { lo, hi, .. } = node {
                out.push_str(&format!("  n{id} -> n{hi} [style=solid];\n"));
                out.push_str(&format!("  n{id} -> n{lo} [style=dashed];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn gini(ones: usize, total: usize) -> f64 {
    let p1 = ones as f64 / total as f64;
    let p0 = 1.0 - p1;
    1.0 - p0 * p0 - p1 * p1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault_tree::FaultTree;

    fn exhaustive(ft: &FaultTree) -> Dataset {
        Dataset::from_truth_table(&ft.truth_table().unwrap())
    }

    fn container_seal() -> FaultTree {
        FaultTree::parse(crate::fault_tree::CONTAINER_SEAL).unwrap()
    }

    #[test]
    fn exact_induction_of_and() {
        let ft = FaultTree::parse("toplevel G; G and B1 B2; B1 prob=0.5; B2 prob=0.5;").unwrap();
        let dt = DecisionTree::induce(&exhaustive(&ft)).unwrap();
        let t = dt.truth_table().unwrap();
        assert_eq!(t.outputs(), &[false, false, false, true]);
        assert_eq!(
            dt.positive_rules(),
            CutSetCollection::from_names([vec!["B1", "B2"]])
        );
    }

    #[test]
    fn exact_induction_of_or() {
        let ft = FaultTree::parse("toplevel G; G or B1 B2; B1 prob=0.5; B2 prob=0.5;").unwrap();
        let dt = DecisionTree::induce(&exhaustive(&ft)).unwrap();
        assert_eq!(
            dt.positive_rules(),
            CutSetCollection::from_names([vec!["B1"], vec!["B2"]])
        );
    }

    #[test]
    fn exact_induction_on_container_seal() {
        let ft = container_seal();
        let dt = DecisionTree::induce(&exhaustive(&ft)).unwrap();
        let accuracy = dt.accuracy_against(&ft.truth_table().unwrap()).unwrap();
        assert_eq!(accuracy, 1.0);
        assert_eq!(dt.truth_table().unwrap().count_ones(), 44);
    }

    #[test]
    fn container_rules_match_known_cut_sets() {
        let ft = container_seal();
        let dt = DecisionTree::induce(&exhaustive(&ft)).unwrap();
        let expect = CutSetCollection::from_names([
            vec!["B1", "B2"],
            vec!["B3", "B4", "B5", "B7"],
            vec!["B3", "B4", "B6", "B7"],
            vec!["B3", "B5", "B6", "B7"],
        ]);
        assert_eq!(dt.positive_rules(), expect);
        // The raw path sets cover the same function but need not be minimal.
        let raw = dt.raw_positive_rules();
        assert_eq!(raw.minimize(), expect);
    }

    #[test]
    fn paper_rule_readings_hold_on_exact_tree() {
        // B1=0 and B3=0 imply no failure; B1=1 and B2=1 imply failure.
        let ft = container_seal();
        let dt = DecisionTree::induce(&exhaustive(&ft)).unwrap();
        let u = dt.universe().clone();
        let n = u.len();
        for row in 0..(1usize << n) {
            let bits = u.row_bits(row);
            let b = |name: &str| bits[u.index_of(name).unwrap()];
            if !b("B1") && !b("B3") {
                assert!(!dt.evaluate_row(&bits));
            }
            if b("B1") && b("B2") {
                assert!(dt.evaluate_row(&bits));
            }
        }
    }

    #[test]
    fn single_leaf_for_constant_labels() {
        let u = Universe::new(["A", "B"]).unwrap();
        let rows = vec![(vec![false, true], false), (vec![true, true], false)];
        let dt = DecisionTree::induce(&Dataset::new(u, rows).unwrap()).unwrap();
        assert_eq!(dt.node_count(), 1);
        assert!(!dt.evaluate_row(&[true, true]));
    }

    #[test]
    fn empty_dataset_rejected() {
        let u = Universe::new(["A"]).unwrap();
        let d = Dataset::new(u, vec![]).unwrap();
        assert_eq!(DecisionTree::induce(&d).unwrap_err(), Error::EmptyDataset);
    }

    #[test]
    fn conflicting_duplicates_take_majority_with_ties_to_one() {
        let u = Universe::new(["A"]).unwrap();
        let rows = vec![
            (vec![true], true),
            (vec![true], false),
            (vec![false], false),
        ];
        let dt = DecisionTree::induce(&Dataset::new(u.clone(), rows).unwrap()).unwrap();
        // The A=1 rows tie 1:1 and resolve to the failure label.
        assert!(dt.evaluate_row(&[true]));
        assert!(!dt.evaluate_row(&[false]));
    }

    #[test]
    fn xor_table_is_learned_exactly() {
        // All root splits have zero Gini gain; induction must still separate.
        let u = Universe::new(["A", "B"]).unwrap();
        let t = TruthTable::from_fn(u, |bits| bits[0] ^ bits[1]).unwrap();
        let dt = DecisionTree::induce(&Dataset::from_truth_table(&t)).unwrap();
        assert_eq!(dt.accuracy_against(&t).unwrap(), 1.0);
    }

    #[test]
    fn no_variable_repeats_on_any_path() {
        let ft = container_seal();
        let dt = DecisionTree::induce(&exhaustive(&ft)).unwrap();
        fn walk(dt: &DecisionTree, id: usize, seen: &mut Vec<bool>) {
            if let DtNode::Split { var, lo, hi } = dt.nodes()[id] {
                assert!(!seen[var], "variable repeated on a path");
                seen[var] = true;
                walk(dt, lo, seen);
                walk(dt, hi, seen);
                seen[var] = false;
            }
        }
        walk(&dt, dt.root(), &mut vec![false; dt.universe().len()]);
    }

    #[test]
    fn induction_is_deterministic() {
        let ft = container_seal();
        let d = exhaustive(&ft);
        let a = DecisionTree::induce(&d).unwrap();
        let b = DecisionTree::induce(&d).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_round_trip() {
        let ft = container_seal();
        let d = ft.sample_dataset(50, 0.5, 7).unwrap();
        let csv = d.to_csv(Some(SampleMeta {
            seed: 7,
            p_success: 0.5,
        }));
        assert!(csv.starts_with("# seed=7 p=0.5\nB1,B2,B3,B4,B5,B6,B7,top\n"));
        let back = Dataset::from_csv(&csv).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(
            Dataset::from_csv("A,B\n0,1\n"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            Dataset::from_csv("A,top\n0,2\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            Dataset::from_csv("A,top\n0,0,1\n"),
            Err(Error::Syntax { .. })
        ));
        assert_eq!(Dataset::from_csv("").unwrap_err(), Error::EmptyDataset);
    }

    #[test]
    fn dot_output_shapes() {
        let ft = FaultTree::parse("toplevel G; G and B1 B2; B1 prob=0.5; B2 prob=0.5;").unwrap();
        let dt = DecisionTree::induce(&exhaustive(&ft)).unwrap();
        let dot = dt.to_dot();
        assert!(dot.contains("shape=circle"));
        assert!(dot.contains("shape=square"));
        assert!(dot.contains("style=solid"));
        assert!(dot.contains("style=dashed"));
    }
}
