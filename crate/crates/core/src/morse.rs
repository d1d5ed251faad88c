//! Topological Morse simplification as a rewrite system on halves.
//!
//! One step removes a sphere (`S → ∅`), or contracts a handle
//! (`Sg(g+1) → Sg(g)`, with `Sg1 → S`; `V(p+2) → V(p)`). Every step lowers
//! the total Betti number by two. `V1` and `V2` are terminal.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::topology::{Half, HalfDecomposition, SurfaceComponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MorseStep {
    RemoveSphere,
    ContractOrientableHandle { from_genus: u32 },
    ContractNonorientableHandle { from_crosscaps: u32 },
}

impl MorseStep {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MorseStep::RemoveSphere => "RemoveSphere",
            MorseStep::ContractOrientableHandle { .. } => "ContractOrientableHandle",
            MorseStep::ContractNonorientableHandle { .. } => "ContractNonorientableHandle",
        }
    }

    fn apply(&self, c: SurfaceComponent) -> Option<Option<SurfaceComponent>> {
        match (*self, c) {
            (MorseStep::RemoveSphere, SurfaceComponent::Sphere) => Some(None),
            (
                MorseStep::ContractOrientableHandle { from_genus },
                SurfaceComponent::Orientable(g),
            ) if g == from_genus => Some(Some(SurfaceComponent::orientable(g - 1))),
            (
                MorseStep::ContractNonorientableHandle { from_crosscaps },
                SurfaceComponent::Nonorientable(p),
            ) if p == from_crosscaps => Some(Some(SurfaceComponent::Nonorientable(p - 2))),
            _ => None,
        }
    }

    fn for_component(c: SurfaceComponent) -> Option<MorseStep> {
        match c {
            SurfaceComponent::Sphere => Some(MorseStep::RemoveSphere),
            SurfaceComponent::Orientable(g) => {
                Some(MorseStep::ContractOrientableHandle { from_genus: g })
            }
            SurfaceComponent::Nonorientable(p) if p >= 3 => {
                Some(MorseStep::ContractNonorientableHandle { from_crosscaps: p })
            }
            SurfaceComponent::Nonorientable(_) => None,
        }
    }
}

impl fmt::Display for MorseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorseStep::RemoveSphere => f.write_str("S -> 0"),
            MorseStep::ContractOrientableHandle { from_genus: 1 } => f.write_str("Sg1 -> S"),
            MorseStep::ContractOrientableHandle { from_genus } => {
                write!(f, "Sg{from_genus} -> Sg{}", from_genus - 1)
            }
            MorseStep::ContractNonorientableHandle { from_crosscaps } => {
                write!(f, "V{from_crosscaps} -> V{}", from_crosscaps - 2)
            }
        }
    }
}

/// Every half reachable from `h` by one Morse step, deduplicated.
pub fn simplify_once(h: &Half) -> Vec<(MorseStep, Half)> {
    let mut out: Vec<(MorseStep, Half)> = Vec::new();
    for (i, &c) in h.components().iter().enumerate() {
        // Equal components give equal results; the first one suffices.
        if i > 0 && h.components()[i - 1] == c {
            continue;
        }
        if let Some(step) = MorseStep::for_component(c) {
            let replacement = step.apply(c).expect("step matches its component");
            out.push((step, h.replaced(i, replacement)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DagEdge {
    pub from: usize,
    pub to: usize,
    #[serde(serialize_with = "serialize_step")]
    pub step: MorseStep,
}

fn serialize_step<S: serde::Serializer>(step: &MorseStep, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(step.kind_name())
}

/// Derivatives of a root decomposition under simplification of `half2`.
/// Node 0 is the root; nodes appear in breadth-first order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeDag {
    nodes: Vec<HalfDecomposition>,
    edges: Vec<DagEdge>,
}

impl DerivativeDag {
    pub fn root(&self) -> &HalfDecomposition {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[HalfDecomposition] {
        &self.nodes
    }

    pub fn edges(&self) -> &[DagEdge] {
        &self.edges
    }

    pub fn contains(&self, d: &HalfDecomposition) -> bool {
        self.nodes.contains(d)
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        // Edges are emitted in BFS order of their source, so a single pass
        // in topological order is enough once sorted by Betti number.
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.nodes[i].half2.total_betti()));
        for i in order {
            for e in self.edges.iter().filter(|e| e.from == i) {
                depth[e.to] = depth[e.to].max(depth[i] + 1);
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Graphviz description; node labels are canonical half texts.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph derivatives {\n");
        let _ = writeln!(out, "  label=\"E1 = {}\";", self.root().half1);
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", n.half2);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  n{} -> n{} [label=\"{}\"];",
                e.from,
                e.to,
                e.step.kind_name()
            );
        }
        out.push_str("}\n");
        out
    }
}

pub fn derive_dag(root: &HalfDecomposition) -> DerivativeDag {
    let mut index: BTreeMap<Half, usize> = BTreeMap::new();
    let mut nodes = vec![root.clone()];
    let mut edges = Vec::new();
    index.insert(root.half2.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let half2 = nodes[i].half2.clone();
        for (step, next) in simplify_once(&half2) {
            let to = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = nodes.len();
                    nodes.push(HalfDecomposition::new(root.half1.clone(), next.clone()));
                    index.insert(next, j);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(DagEdge { from: i, to, step });
        }
    }
    DerivativeDag { nodes, edges }
}
