//! Labeled binary forests: the transcripts of sieve runs.
//!
//! A forest over `ℓ` leaves is stored as a node list in topological order
//! (children before parents). Leaves carry singleton leafsets; an internal
//! node's leafset is the disjoint union of its two children's. Any two
//! leafsets are disjoint or nested, which is what makes the associated
//! projection operators commute.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// One node of a forest. `children` is `None` for leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestNode {
    pub children: Option<(usize, usize)>,
    /// Register indices (0-based) of the leaves below this node, sorted.
    pub leafset: Vec<usize>,
}

/// A binary forest over `ℓ` registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    leaves: usize,
    nodes: Vec<ForestNode>,
}

impl Forest {
    /// Build from child links in topological order. Leaf registers are
    /// numbered by order of appearance of the leaf nodes.
    pub fn new(leaves: usize, children: Vec<Option<(usize, usize)>>) -> Result<Self> {
        let mut nodes: Vec<ForestNode> = Vec::with_capacity(children.len());
        let mut used = vec![false; children.len()];
        let mut next_register = 0usize;
        for (id, ch) in children.iter().enumerate() {
            let leafset = match ch {
                None => {
                    let r = next_register;
                    next_register += 1;
                    vec![r]
                }
                Some((a, b)) => {
                    for &c in [a, b] {
                        if c >= id {
                            return Err(Error::BadInput {
                                node: id,
                                msg: "children must precede parents".into(),
                            });
                        }
                        if used[c] {
                            return Err(Error::BadInput {
                                node: id,
                                msg: format!("node {c} has two parents"),
                            });
                        }
                        used[c] = true;
                    }
                    if a == b {
                        return Err(Error::BadInput {
                            node: id,
                            msg: "children must be distinct".into(),
                        });
                    }
                    let mut set = nodes[*a].leafset.clone();
                    set.extend_from_slice(&nodes[*b].leafset);
                    set.sort_unstable();
                    set.dedup();
                    if set.len() != nodes[*a].leafset.len() + nodes[*b].leafset.len() {
                        return Err(Error::BadInput {
                            node: id,
                            msg: "children leafsets overlap".into(),
                        });
                    }
                    set
                }
            };
            nodes.push(ForestNode {
                children: *ch,
                leafset,
            });
        }
        if next_register != leaves {
            return Err(Error::BadInput {
                node: 0,
                msg: format!("found {next_register} leaves, header says {leaves}"),
            });
        }
        Ok(Forest { leaves, nodes })
    }

    /// A forest of `leaves` isolated single-node trees.
    pub fn singletons(leaves: usize) -> Forest {
        Forest::new(leaves, vec![None; leaves]).expect("singleton forest is valid")
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    /// Total node count `k`.
    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_none()
    }

    /// Node ids that are not children of any node.
    pub fn roots(&self) -> Vec<usize> {
        let mut is_child = vec![false; self.nodes.len()];
        for n in &self.nodes {
            if let Some((a, b)) = n.children {
                is_child[a] = true;
                is_child[b] = true;
            }
        }
        (0..self.nodes.len()).filter(|&i| !is_child[i]).collect()
    }

    /// Extend with a new root over two current roots; returns the new id.
    pub fn combine(&mut self, a: usize, b: usize) -> Result<usize> {
        let roots = self.roots();
        if !roots.contains(&a) || !roots.contains(&b) || a == b {
            return Err(Error::invalid("combine needs two distinct current roots"));
        }
        let mut set = self.nodes[a].leafset.clone();
        set.extend_from_slice(&self.nodes[b].leafset);
        set.sort_unstable();
        self.nodes.push(ForestNode {
            children: Some((a, b)),
            leafset: set,
        });
        Ok(self.nodes.len() - 1)
    }

    /// Depth of a node: leaves are level 0, internal nodes one above the
    /// deeper child.
    pub fn level(&self, id: usize) -> usize {
        match self.nodes[id].children {
            None => 0,
            Some((a, b)) => 1 + self.level(a).max(self.level(b)),
        }
    }

    /// Swap the children of one internal node (for invariance tests).
    pub fn with_swapped_children(&self, id: usize) -> Forest {
        let mut f = self.clone();
        if let Some((a, b)) = f.nodes[id].children {
            f.nodes[id].children = Some((b, a));
        }
        f
    }

    /// Canonical key up to sibling exchange and tree order.
    fn canonical_key(&self) -> String {
        fn tree_key(f: &Forest, id: usize) -> String {
            match f.nodes[id].children {
                None => format!("L{}", f.nodes[id].leafset[0]),
                Some((a, b)) => {
                    let (ka, kb) = (tree_key(f, a), tree_key(f, b));
                    let (lo, hi) = if ka <= kb { (ka, kb) } else { (kb, ka) };
                    format!("({lo},{hi})")
                }
            }
        }
        let mut keys: Vec<String> = self.roots().into_iter().map(|r| tree_key(self, r)).collect();
        keys.sort();
        keys.join(";")
    }
}

/// A forest with an (optional) irrep label per node. Label values are
/// indices into whatever irrep list the evaluation context uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestTranscript {
    pub forest: Forest,
    pub labels: Vec<Option<usize>>,
}

impl ForestTranscript {
    pub fn unlabeled(forest: Forest) -> Self {
        let n = forest.k();
        ForestTranscript {
            forest,
            labels: vec![None; n],
        }
    }

    pub fn fully_labeled(&self) -> Option<Vec<usize>> {
        self.labels.iter().copied().collect()
    }
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    children: Option<(usize, usize)>,
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ForestJson {
    leaves: usize,
    nodes: Vec<NodeJson>,
}

/// Parse the forest file format. Node ids may be arbitrary but children must
/// reference ids defined earlier in the list. Labels are returned as raw
/// strings for the caller's irrep parser.
pub fn parse_forest_json(text: &str) -> Result<(Forest, Vec<Option<String>>)> {
    let parsed: ForestJson = serde_json::from_str(text)?;
    let mut index_of = std::collections::HashMap::new();
    let mut children = Vec::with_capacity(parsed.nodes.len());
    let mut labels = Vec::with_capacity(parsed.nodes.len());
    for (pos, node) in parsed.nodes.iter().enumerate() {
        if index_of.insert(node.id, pos).is_some() {
            return Err(Error::BadInput {
                node: node.id,
                msg: "duplicate node id".into(),
            });
        }
        let ch = match node.children {
            None => None,
            Some((a, b)) => {
                let ia = *index_of.get(&a).ok_or(Error::BadInput {
                    node: node.id,
                    msg: format!("child {a} not defined before its parent"),
                })?;
                let ib = *index_of.get(&b).ok_or(Error::BadInput {
                    node: node.id,
                    msg: format!("child {b} not defined before its parent"),
                })?;
                Some((ia, ib))
            }
        };
        children.push(ch);
        labels.push(node.label.clone());
    }
    let forest = Forest::new(parsed.leaves, children)?;
    Ok((forest, labels))
}

/// Serialize a forest with label strings into the file format.
pub fn forest_to_json(forest: &Forest, labels: &[Option<String>]) -> serde_json::Value {
    let nodes: Vec<serde_json::Value> = forest
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, n)| {
            serde_json::json!({
                "id": id,
                "children": n.children.map(|(a, b)| vec![a, b]),
                "label": labels.get(id).cloned().flatten(),
            })
        })
        .collect();
    serde_json::json!({ "leaves": forest.leaves(), "nodes": nodes })
}

/// Every forest topology with exactly `leaves` leaves and at most `max_k`
/// total nodes, canonicalized up to sibling exchange (and tree order).
pub fn enumerate_forests(leaves: usize, max_k: usize) -> Vec<Forest> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    let start = Forest::singletons(leaves);
    if start.k() <= max_k {
        grow(&start, max_k, &mut seen, &mut out);
    }
    out
}

fn grow(f: &Forest, max_k: usize, seen: &mut BTreeSet<String>, out: &mut Vec<Forest>) {
    let key = f.canonical_key();
    if !seen.insert(key) {
        return;
    }
    out.push(f.clone());
    if f.k() >= max_k {
        return;
    }
    let roots = f.roots();
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let mut g = f.clone();
            g.combine(roots[i], roots[j]).unwrap();
            grow(&g, max_k, seen, out);
        }
    }
}

/// Forests over every leaf count `1..=max_leaves` with at most `max_k` nodes.
pub fn enumerate_all_forests(max_leaves: usize, max_k: usize) -> Vec<Forest> {
    let mut out = Vec::new();
    for leaves in 1..=max_leaves {
        out.extend(enumerate_forests(leaves, max_k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_tree_3() -> Forest {
        // ((0,1),2): leaves 0,1,2; internal 3 = (0,1); root 4 = (3,2).
        Forest::new(3, vec![None, None, None, Some((0, 1)), Some((3, 2))]).unwrap()
    }

    #[test]
    fn leafsets_and_roots() {
        let f = full_tree_3();
        assert_eq!(f.leaves(), 3);
        assert_eq!(f.k(), 5);
        assert_eq!(f.nodes()[3].leafset, vec![0, 1]);
        assert_eq!(f.nodes()[4].leafset, vec![0, 1, 2]);
        assert_eq!(f.roots(), vec![4]);
        assert_eq!(f.level(4), 2);
        assert_eq!(f.level(3), 1);
    }

    #[test]
    fn leafsets_disjoint_or_nested() {
        for f in enumerate_all_forests(4, 7) {
            for a in f.nodes() {
                for b in f.nodes() {
                    let sa: BTreeSet<_> = a.leafset.iter().collect();
                    let sb: BTreeSet<_> = b.leafset.iter().collect();
                    let disjoint = sa.is_disjoint(&sb);
                    let nested = sa.is_subset(&sb) || sb.is_subset(&sa);
                    assert!(disjoint || nested);
                }
            }
        }
    }

    #[test]
    fn rejects_malformed() {
        // Parent before child.
        assert!(Forest::new(2, vec![Some((1, 2)), None, None]).is_err());
        // Reused child.
        assert!(Forest::new(3, vec![None, None, None, Some((0, 1)), Some((0, 2))]).is_err());
        // Leaf count mismatch.
        assert!(Forest::new(2, vec![None, None, None]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // One leaf: a single forest.
        assert_eq!(enumerate_forests(1, 5).len(), 1);
        // Two leaves: singletons, or one combined tree.
        assert_eq!(enumerate_forests(2, 5).len(), 2);
        // Three leaves, k <= 5: singletons; three one-merge forests;
        // three full trees (up to sibling swaps).
        assert_eq!(enumerate_forests(3, 5).len(), 7);
        // k <= 3 keeps only the singleton forest for 3 leaves.
        assert_eq!(enumerate_forests(3, 3).len(), 1);
        assert_eq!(enumerate_forests(3, 4).len(), 4);
        // Total nodes of a full binary forest on l leaves is 2l - #trees.
        for f in enumerate_forests(4, 7) {
            assert_eq!(f.k(), 2 * 4 - f.roots().len());
        }
    }

    #[test]
    fn sibling_swap_is_same_canonical_topology() {
        let f = full_tree_3();
        let g = f.with_swapped_children(3);
        assert_eq!(f.canonical_key(), g.canonical_key());
        let h = f.with_swapped_children(4);
        assert_eq!(f.canonical_key(), h.canonical_key());
    }

    #[test]
    fn json_round_trip() {
        let f = full_tree_3();
        let labels = vec![
            Some("inhom:2|1,1".to_string()),
            None,
            Some("hom:+:2".to_string()),
            None,
            None,
        ];
        let json = forest_to_json(&f, &labels);
        let text = serde_json::to_string(&json).unwrap();
        let (f2, l2) = parse_forest_json(&text).unwrap();
        assert_eq!(f, f2);
        assert_eq!(labels, l2);
    }

    #[test]
    fn json_rejects_bad_children() {
        let bad = r#"{"leaves":2,"nodes":[{"id":0,"children":null,"label":null},
            {"id":1,"children":[0,2],"label":null},
            {"id":2,"children":null,"label":null}]}"#;
        let err = parse_forest_json(bad).unwrap_err();
        match err {
            Error::BadInput { node, .. } => assert_eq!(node, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn combine_requires_roots() {
        let mut f = Forest::singletons(3);
        let r = f.combine(0, 1).unwrap();
        assert_eq!(r, 3);
        assert!(f.combine(0, 2).is_err()); // 0 is no longer a root
        assert!(f.combine(2, 2).is_err());
    }
}
