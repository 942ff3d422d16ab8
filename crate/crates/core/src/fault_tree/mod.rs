//! Fault trees: a DAG of AND/OR/VOT gates over probabilistic basic events,
//! denoting a monotone Boolean function of the basic events.

mod parse;
mod sample;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::table::TruthTable;
use crate::universe::{Assignment, Universe, VarId};

/// Index of a node within a [`FaultTree`].
pub type FtNodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    And,
    Or,
    /// Fires when at least `k` of the children fire ("k of N" voting).
    AtLeast(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Basic { prob: f64, var: VarId },
    Gate { kind: GateKind, children: Vec<FtNodeId> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FtNode {
    name: String,
    kind: NodeKind,
}

impl FtNode {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }
}

/// A structurally validated fault tree: single top event, acyclic, all
/// references resolved, every node reachable from the top.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultTree {
    nodes: Vec<FtNode>,
    top: FtNodeId,
    /// Basic events in declaration order; position = `VarId`.
    basics: Vec<FtNodeId>,
}

/// Per-node probabilities computed by the gate formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct FtProbabilities {
    top: String,
    values: BTreeMap<String, f64>,
}

impl FtProbabilities {
    pub fn top_probability(&self) -> f64 {
        self.values[&self.top]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    /// All node probabilities, sorted by node name.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Incremental construction with the same validation as the text parser.
#[derive(Debug, Default)]
pub struct FaultTreeBuilder {
    defs: Vec<(String, RawKind)>,
    top: Option<String>,
}

#[derive(Debug)]
enum RawKind {
    Basic { prob: f64 },
    Gate { kind: GateKind, children: Vec<String> },
}

impl FaultTreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basic_event(&mut self, name: impl Into<String>, prob: f64) -> &mut Self {
        self.defs.push((name.into(), RawKind::Basic { prob }));
        self
    }

    pub fn gate<I, S>(&mut self, name: impl Into<String>, kind: GateKind, children: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.defs.push((
            name.into(),
            RawKind::Gate {
                kind,
                children: children.into_iter().map(Into::into).collect(),
            },
        ));
        self
    }

    pub fn top(&mut self, name: impl Into<String>) -> &mut Self {
        self.top = Some(name.into());
        self
    }

    pub fn build(self) -> Result<FaultTree> {
        let top = self.top.ok_or(Error::MissingTop)?;
        FaultTree::construct(self.defs, top)
    }
}

impl FaultTree {
    /// Parses the `;`-terminated statement grammar (see crate docs).
    pub fn parse(text: &str) -> Result<FaultTree> {
        parse::parse(text)
    }

    /// Renders back to the text grammar; `parse` of the result is
    /// structurally identical to `self`.
    pub fn render(&self) -> String {
        parse::render(self)
    }

    fn construct(defs: Vec<(String, RawKind)>, top: String) -> Result<FaultTree> {
        let mut by_name: HashMap<String, FtNodeId> = HashMap::new();
        for (i, (name, _)) in defs.iter().enumerate() {
            if by_name.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateDefinition(name.clone()));
            }
        }

        let mut nodes = Vec::with_capacity(defs.len());
        let mut basics = Vec::new();
        for (i, (name, raw)) in defs.into_iter().enumerate() {
            let kind = match raw {
                RawKind::Basic { prob } => {
                    if !(0.0..=1.0).contains(&prob) {
                        return Err(Error::ProbabilityOutOfRange { name, value: prob });
                    }
                    basics.push(i);
                    NodeKind::Basic {
                        prob,
                        var: basics.len() - 1,
                    }
                }
                RawKind::Gate { kind, children } => {
                    let mut ids = Vec::with_capacity(children.len());
                    for child in &children {
                        let id = *by_name
                            .get(child)
                            .ok_or_else(|| Error::UnresolvedReference(child.clone()))?;
                        if ids.contains(&id) {
                            return Err(Error::BadArity {
                                gate: name.clone(),
                                msg: format!("duplicate child `{child}`"),
                            });
                        }
                        ids.push(id);
                    }
                    check_arity(&name, kind, ids.len())?;
                    NodeKind::Gate { kind, children: ids }
                }
            };
            nodes.push(FtNode { name, kind });
        }

        let top = *by_name
            .get(&top)
            .ok_or_else(|| Error::UnresolvedReference(top.clone()))?;

        let ft = FaultTree { nodes, top, basics };
        ft.check_acyclic()?;
        ft.check_reachable()?;
        Ok(ft)
    }

    fn check_acyclic(&self) -> Result<()> {
        // Iterative three-color DFS over every node.
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if color[start] != WHITE {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            color[start] = GRAY;
            while let Some(&(id, next)) = stack.last() {
                let children = match &self.nodes[id].kind {
                    NodeKind::Gate { children, .. } => children.as_slice(),
                    NodeKind::Basic { .. } => &[],
                };
                if next < children.len() {
                    stack.last_mut().unwrap().1 += 1;
                    let child = children[next];
                    match color[child] {
                        GRAY => return Err(Error::CycleDetected(self.nodes[child].name.clone())),
                        WHITE => {
                            color[child] = GRAY;
                            stack.push((child, 0));
                        }
                        _ => {}
                    }
                } else {
                    color[id] = BLACK;
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    fn check_reachable(&self) -> Result<()> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.top];
        seen[self.top] = true;
        while let Some(id) = stack.pop() {
            if let NodeKind::Gate { children, .. } = &self.nodes[id].kind {
                for &child in children {
                    if !seen[child] {
                        seen[child] = true;
                        stack.push(child);
                    }
                }
            }
        }
        if let Some(id) = seen.iter().position(|&s| !s) {
            return Err(Error::UnreachableDefinition(self.nodes[id].name.clone()));
        }
        Ok(())
    }

    pub fn top(&self) -> FtNodeId {
        self.top
    }

    pub fn top_name(&self) -> &str {
        &self.nodes[self.top].name
    }

    pub fn node(&self, id: FtNodeId) -> &FtNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[FtNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn basic_count(&self) -> usize {
        self.basics.len()
    }

    pub fn gate_count(&self) -> usize {
        self.nodes.len() - self.basics.len()
    }

    /// Basic-event names in declaration order.
    pub fn basic_names(&self) -> Vec<String> {
        self.basics
            .iter()
            .map(|&id| self.nodes[id].name.clone())
            .collect()
    }

    /// The universe of basic events, declaration order.
    pub fn universe(&self) -> Universe {
        Universe::new(self.basic_names()).expect("basic event names are unique")
    }

    /// Basic-event probabilities indexed by `VarId`.
    pub fn basic_probs(&self) -> Vec<f64> {
        self.basics
            .iter()
            .map(|&id| match self.nodes[id].kind {
                NodeKind::Basic { prob, .. } => prob,
                _ => unreachable!(),
            })
            .collect()
    }

    /// Basic-event probabilities keyed by name.
    pub fn probability_map(&self) -> BTreeMap<String, f64> {
        self.basic_names()
            .into_iter()
            .zip(self.basic_probs())
            .collect()
    }

    /// Bottom-up Boolean evaluation of the top event.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        let bits = a.bits_for(&self.universe())?;
        Ok(self.evaluate_row(&bits))
    }

    /// Evaluation over bits indexed by `VarId` (declaration order).
    pub fn evaluate_row(&self, bits: &[bool]) -> bool {
        let mut memo: Vec<Option<bool>> = vec![None; self.nodes.len()];
        self.eval_node(self.top, bits, &mut memo)
    }

    fn eval_node(&self, id: FtNodeId, bits: &[bool], memo: &mut Vec<Option<bool>>) -> bool {
        if let Some(v) = memo[id] {
            return v;
        }
        let value = match &self.nodes[id].kind {
            NodeKind::Basic { var, .. } => bits[*var],
            NodeKind::Gate { kind, children } => {
                let fired = children
                    .iter()
                    .filter(|&&c| self.eval_node(c, bits, memo))
                    .count();
                match kind {
                    GateKind::And => fired == children.len(),
                    GateKind::Or => fired >= 1,
                    GateKind::AtLeast(k) => fired >= *k,
                }
            }
        };
        memo[id] = Some(value);
        value
    }

    /// Exhaustive table of the top event over all assignments.
    pub fn truth_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.universe(), |bits| self.evaluate_row(bits))
    }

    /// True when every node has at most one parent, i.e. the DAG is a tree.
    pub fn is_tree_shaped(&self) -> bool {
        self.shared_node().is_none()
    }

    fn shared_node(&self) -> Option<FtNodeId> {
        let mut indegree = vec![0usize; self.nodes.len()];
        for node in &self.nodes {
            if let NodeKind::Gate { children, .. } = &node.kind {
                for &c in children {
                    indegree[c] += 1;
                }
            }
        }
        indegree.iter().position(|&d| d > 1)
    }

    /// Per-node probabilities by the classic gate formulas, exact for
    /// tree-shaped FTs under independent basic events:
    /// AND = product, OR = 1 - product of complements, and VOT k-of-N the
    /// exact tail of the distribution of how many children fire.
    ///
    /// Refuses shared nodes, where per-gate independence no longer holds.
    pub fn probability_formulas(&self) -> Result<FtProbabilities> {
        if let Some(id) = self.shared_node() {
            return Err(Error::SharedEvent(self.nodes[id].name.clone()));
        }
        let mut memo: Vec<Option<f64>> = vec![None; self.nodes.len()];
        self.prob_node(self.top, &mut memo);
        let values = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, node)| (node.name.clone(), memo[id].expect("all nodes reachable")))
            .collect();
        Ok(FtProbabilities {
            top: self.top_name().to_string(),
            values,
        })
    }

    fn prob_node(&self, id: FtNodeId, memo: &mut Vec<Option<f64>>) -> f64 {
        if let Some(p) = memo[id] {
            return p;
        }
        let p = match &self.nodes[id].kind {
            NodeKind::Basic { prob, .. } => *prob,
            NodeKind::Gate { kind, children } => {
                let probs: Vec<f64> = children
                    .iter()
                    .map(|&c| self.prob_node(c, memo))
                    .collect();
                match kind {
                    GateKind::And => probs.iter().product(),
                    GateKind::Or => 1.0 - probs.iter().map(|p| 1.0 - p).product::<f64>(),
                    GateKind::AtLeast(k) => at_least_probability(*k, &probs),
                }
            }
        };
        memo[id] = Some(p);
        p
    }

    /// DOT rendering of the gate structure (gates as boxes, events as circles).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph fault_tree {\n");
        for node in &self.nodes {
            match &node.kind {
                NodeKind::Basic { .. } => {
                    out.push_str(&format!("  \"{}\" [shape=circle];\n", node.name));
                }
                NodeKind::Gate { kind, .. } => {
                    let label = match kind {
                        GateKind::And => "AND".to_string(),
                        GateKind::Or => "OR".to_string(),
                        GateKind::AtLeast(k) => format!("{k}/N"),
                    };
                    out.push_str(&format!(
                        "  \"{}\" [shape=box, label=\"{}\\n{}\"];\n",
                        node.name, node.name, label
                    ));
                }
            }
        }
        for node in &self.nodes {
            if let NodeKind::Gate { children, .. } = &node.kind {
                for &c in children {
                    out.push_str(&format!(
                        "  \"{}\" -> \"{}\";\n",
                        node.name, self.nodes[c].name
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn check_arity(name: &str, kind: GateKind, n: usize) -> Result<()> {
    match kind {
        GateKind::And | GateKind::Or if n < 2 => Err(Error::BadArity {
            gate: name.to_string(),
            msg: format!("AND/OR gates need at least 2 children, got {n}"),
        }),
        GateKind::AtLeast(k) if n < 2 || k < 1 || k > n => Err(Error::BadArity {
            gate: name.to_string(),
            msg: format!("VOT gate requires 1 <= k <= N and N >= 2, got k={k}, N={n}"),
        }),
        _ => Ok(()),
    }
}

/// Exact probability that at least `k` of the independent events with the
/// given probabilities occur (Poisson-binomial tail via the count DP).
fn at_least_probability(k: usize, probs: &[f64]) -> f64 {
    let mut dist = vec![0.0; probs.len() + 1];
    dist[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        for j in (0..=i + 1).rev() {
            let stay = dist[j] * (1.0 - p);
            let step = if j > 0 { dist[j - 1] * p } else { 0.0 };
            dist[j] = stay + step;
        }
    }
    dist[k..].iter().sum()
}

/// The Container Seal running example (see `assets/container_seal.ft`).
#[cfg(test)]
pub(crate) const CONTAINER_SEAL: &str = "\
toplevel G1;
G1 or G2 G3;
G2 and B1 B2;
G3 and B3 G4 B7;
G4 2of3 B4 B5 B6;
B1 prob=1e-3; B2 prob=1e-3; B3 prob=1e-3; B4 prob=1e-3;
B5 prob=1e-3; B6 prob=1e-3; B7 prob=1e-3;
";

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn container_seal() -> FaultTree {
        FaultTree::parse(CONTAINER_SEAL).unwrap()
    }

    #[test]
    fn evaluate_minimal_cut_pair() {
        let ft = container_seal();
        let u = ft.universe();
        let a = u.assignment_from_true(["B1", "B2"]).unwrap();
        assert!(ft.evaluate(&a).unwrap());
    }

    #[test]
    fn evaluate_listed_cut_set() {
        let ft = container_seal();
        let u = ft.universe();
        let a = u.assignment_from_true(["B3", "B4", "B5", "B7"]).unwrap();
        assert!(ft.evaluate(&a).unwrap());
    }

    #[test]
    fn evaluate_incomplete_combination() {
        // G3 needs B3 and B7 as well.
        let ft = container_seal();
        let u = ft.universe();
        let a = u.assignment_from_true(["B4", "B5", "B6"]).unwrap();
        assert!(!ft.evaluate(&a).unwrap());
    }

    #[test]
    fn truth_table_of_single_gates() {
        let and = FaultTree::parse("toplevel G; G and B1 B2; B1 prob=0.5; B2 prob=0.5;").unwrap();
        assert_eq!(and.truth_table().unwrap().outputs(), &[false, false, false, true]);
        let or = FaultTree::parse("toplevel G; G or B1 B2; B1 prob=0.5; B2 prob=0.5;").unwrap();
        assert_eq!(or.truth_table().unwrap().outputs(), &[false, true, true, true]);
    }

    #[test]
    fn container_seal_failure_count() {
        // 44 of 128 rows fail; cross-checked by inclusion-exclusion:
        // P = 1/4 + 1/8 - 1/32 = 11/32 at p = 1/2.
        let ft = container_seal();
        let t = ft.truth_table().unwrap();
        assert_eq!(t.count_ones(), 44);
        assert_eq!(44.0 / 128.0, 0.25 + 0.125 - 0.03125);
    }

    #[test]
    fn gate_formula_chain_matches_reported_values() {
        let ft = container_seal();
        let probs = ft.probability_formulas().unwrap();
        let p: f64 = 1e-3;
        let g4 = 3.0 * p * p * (1.0 - p) + p * p * p;
        assert!((probs.get("G4").unwrap() - g4).abs() < 1e-18);
        assert!((probs.get("G4").unwrap() - 2.998e-6).abs() < 1e-12);
        assert!((probs.get("G2").unwrap() - 1e-6).abs() < 1e-18);
        assert!((probs.get("G3").unwrap() - 2.998e-12).abs() < 1e-15);
        let g1 = probs.top_probability();
        assert!((g1 - 1.000003e-6).abs() < 1e-11);
        assert_eq!(format!("{:.6e}", g1), "1.000003e-6");
    }

    #[test]
    fn gate_formulas_match_oracle_on_example() {
        let ft = container_seal();
        let formula = ft.probability_formulas().unwrap().top_probability();
        let oracle = ft
            .truth_table()
            .unwrap()
            .probability(&ft.basic_probs())
            .unwrap();
        assert!((formula - oracle).abs() < 1e-15);
    }

    #[test]
    fn shared_events_are_refused() {
        let ft = FaultTree::parse(
            "toplevel G1; G1 or G2 G3; G2 and B1 B2; G3 and B2 B3; \
             B1 prob=0.1; B2 prob=0.1; B3 prob=0.1;",
        )
        .unwrap();
        assert_eq!(
            ft.probability_formulas().unwrap_err(),
            Error::SharedEvent("B2".into())
        );
        assert!(!ft.is_tree_shaped());
        // Evaluation still works on the DAG.
        let a = ft.universe().assignment_from_true(["B2", "B3"]).unwrap();
        assert!(ft.evaluate(&a).unwrap());
    }

    #[test]
    fn at_least_probability_equal_probs_is_binomial_tail() {
        let p: f64 = 0.3;
        let probs = [p; 3];
        let expect = 3.0 * p * p * (1.0 - p) + p * p * p;
        assert!((at_least_probability(2, &probs) - expect).abs() < 1e-15);
        assert_eq!(at_least_probability(1, &[1.0, 0.0]), 1.0);
    }

    #[test]
    fn at_least_probability_unequal_probs() {
        // 2-of-3 with distinct probabilities, against the expanded sum.
        let (a, b, c) = (0.1, 0.25, 0.6);
        let expect = a * b * (1.0 - c) + a * (1.0 - b) * c + (1.0 - a) * b * c + a * b * c;
        assert!((at_least_probability(2, &[a, b, c]) - expect).abs() < 1e-15);
    }

    #[test]
    fn vot_gate_evaluates_as_threshold() {
        let ft = FaultTree::parse(
            "toplevel G; G 2of3 B1 B2 B3; B1 prob=0.1; B2 prob=0.1; B3 prob=0.1;",
        )
        .unwrap();
        let t = ft.truth_table().unwrap();
        for row in 0..8 {
            let fired = ft.universe().row_bits(row).iter().filter(|&&b| b).count();
            assert_eq!(t.get(row), fired >= 2);
        }
    }

    #[test]
    fn builder_matches_parser() {
        let mut b = FaultTreeBuilder::new();
        b.gate("G1", GateKind::Or, ["G2", "G3"])
            .gate("G2", GateKind::And, ["B1", "B2"])
            .gate("G3", GateKind::And, ["B3", "G4", "B7"])
            .gate("G4", GateKind::AtLeast(2), ["B4", "B5", "B6"])
            .top("G1");
        for name in ["B1", "B2", "B3", "B4", "B5", "B6", "B7"] {
            b.basic_event(name, 1e-3);
        }
        let built = b.build().unwrap();
        assert!(built
            .truth_table()
            .unwrap()
            .equivalent(&container_seal().truth_table().unwrap())
            .unwrap());
    }
}
