//! Finite labeled tree domains.
//!
//! A tree is a prefix-closed, left-sibling-closed set of Gorn addresses. Nodes
//! are stored in preorder, which for Gorn addresses coincides with the
//! lexicographic order on child-index sequences (a prefix sorts first). That
//! makes the structural relations interval tests on preorder indices.
//!
//! Domination is reflexive. Precedence holds only between
//! dominance-incomparable nodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Path of 0-based child indices from the root. The empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GornAddress(pub Vec<u32>);

impl GornAddress {
    pub fn root() -> Self {
        GornAddress(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u32) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        GornAddress(p)
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(GornAddress(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_prefix_of(&self, other: &GornAddress) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl From<Vec<u32>> for GornAddress {
    fn from(v: Vec<u32>) -> Self {
        GornAddress(v)
    }
}

impl From<&[u32]> for GornAddress {
    fn from(v: &[u32]) -> Self {
        GornAddress(v.to_vec())
    }
}

impl serde::Serialize for GornAddress {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for GornAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// The four binary relations of the signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Idom,
    Dom,
    Prec,
    Eq,
}

/// Address-level definitions of the relations, independent of any tree.
pub fn relation_on_addresses(rel: Relation, x: &GornAddress, y: &GornAddress) -> bool {
    match rel {
        Relation::Eq => x == y,
        Relation::Dom => x.is_prefix_of(y),
        Relation::Idom => y.0.len() == x.0.len() + 1 && x.is_prefix_of(y),
        Relation::Prec => {
            if x.is_prefix_of(y) || y.is_prefix_of(x) {
                return false;
            }
            let first_diff = x.0.iter().zip(&y.0).position(|(a, b)| a != b);
            match first_diff {
                Some(i) => x.0[i] < y.0[i],
                None => false,
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("address {0} is not in the tree domain")]
    AddressNotInDomain(GornAddress),
    #[error("not a tree domain: {0}")]
    NotATreeDomain(String),
    #[error("constant `{0}` is bound more than once")]
    DuplicateConstant(String),
}

/// True iff `addresses` is nonempty, prefix-closed and left-sibling-closed.
pub fn is_tree_domain(addresses: &BTreeSet<GornAddress>) -> bool {
    if addresses.is_empty() {
        return false;
    }
    addresses.iter().all(|a| match a.0.split_last() {
        None => true,
        Some((&last, prefix)) => {
            let parent = GornAddress(prefix.to_vec());
            addresses.contains(&parent) && (last == 0 || addresses.contains(&parent.child(last - 1)))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    address: GornAddress,
    labels: BTreeSet<String>,
}

/// A finite labeled tree. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    nodes: Vec<Node>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    subtree_size: Vec<usize>,
    constants: BTreeMap<String, usize>,
}

impl LabeledTree {
    pub fn new(
        domain: BTreeSet<GornAddress>,
        mut labels: BTreeMap<GornAddress, BTreeSet<String>>,
        constants: BTreeMap<String, GornAddress>,
    ) -> Result<Self, TreeError> {
        if !is_tree_domain(&domain) {
            return Err(TreeError::NotATreeDomain(
                "domain must be nonempty, prefix-closed and left-sibling-closed".into(),
            ));
        }
        if let Some(a) = labels.keys().find(|a| !domain.contains(*a)) {
            return Err(TreeError::AddressNotInDomain(a.clone()));
        }
        let nodes: Vec<Node> = domain
            .into_iter()
            .map(|address| {
                let labels = labels.remove(&address).unwrap_or_default();
                Node { address, labels }
            })
            .collect();
        let index: BTreeMap<&GornAddress, usize> =
            nodes.iter().enumerate().map(|(i, n)| (&n.address, i)).collect();
        let mut constant_idx = BTreeMap::new();
        for (name, addr) in constants {
            let i = *index
                .get(&addr)
                .ok_or_else(|| TreeError::AddressNotInDomain(addr.clone()))?;
            constant_idx.insert(name, i);
        }
        let n = nodes.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for (i, node) in nodes.iter().enumerate() {
            if let Some(p) = node.address.parent() {
                let pi = index[&p];
                parent[i] = Some(pi);
                children[pi].push(i);
            }
        }
        let mut subtree_size = vec![1; n];
        for i in (0..n).rev() {
            if let Some(p) = parent[i] {
                subtree_size[p] += subtree_size[i];
            }
        }
        Ok(LabeledTree { nodes, parent, children, subtree_size, constants: constant_idx })
    }

    /// Builds a tree from a preorder child-count sequence and per-node label
    /// sets (also in preorder).
    pub fn from_preorder(
        child_counts: &[usize],
        labels: Vec<BTreeSet<String>>,
    ) -> Result<Self, TreeError> {
        if child_counts.len() != labels.len() || child_counts.is_empty() {
            return Err(TreeError::NotATreeDomain("shape/label length mismatch".into()));
        }
        let mut addresses = Vec::with_capacity(child_counts.len());
        // stack of (address, children still to place, next child index)
        let mut stack: Vec<(GornAddress, usize, u32)> = Vec::new();
        for (i, &c) in child_counts.iter().enumerate() {
            let addr = if i == 0 {
                GornAddress::root()
            } else {
                loop {
                    let top = stack
                        .last_mut()
                        .ok_or_else(|| TreeError::NotATreeDomain("invalid preorder shape".into()))?;
                    if top.1 == 0 {
                        stack.pop();
                        continue;
                    }
                    top.1 -= 1;
                    let a = top.0.child(top.2);
                    top.2 += 1;
                    break a;
                }
            };
            addresses.push(addr.clone());
            stack.push((addr, c, 0));
        }
        if stack.iter().any(|s| s.1 != 0) {
            return Err(TreeError::NotATreeDomain("invalid preorder shape".into()));
        }
        let label_map = addresses.iter().cloned().zip(labels).collect();
        LabeledTree::new(addresses.into_iter().collect(), label_map, BTreeMap::new())
    }

    /// Tree of the given preorder shape with no labels.
    pub fn unlabeled(child_counts: &[usize]) -> Self {
        Self::from_preorder(child_counts, vec![BTreeSet::new(); child_counts.len()]).expect("valid shape")
    }

    /// Single-node tree.
    pub fn leaf<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let l: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        LabeledTree::from_preorder(&[0], vec![l]).expect("leaf is a tree")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn address(&self, i: usize) -> &GornAddress {
        &self.nodes[i].address
    }

    pub fn addresses(&self) -> impl Iterator<Item = &GornAddress> {
        self.nodes.iter().map(|n| &n.address)
    }

    pub fn index_of(&self, a: &GornAddress) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.address.cmp(a)).ok()
    }

    pub fn contains(&self, a: &GornAddress) -> bool {
        self.index_of(a).is_some()
    }

    pub fn labels(&self, i: usize) -> &BTreeSet<String> {
        &self.nodes[i].labels
    }

    pub fn labels_at(&self, a: &GornAddress) -> Option<&BTreeSet<String>> {
        self.index_of(a).map(|i| &self.nodes[i].labels)
    }

    pub fn has_label(&self, i: usize, label: &str) -> bool {
        self.nodes[i].labels.contains(label)
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn subtree_size(&self, i: usize) -> usize {
        self.subtree_size[i]
    }

    pub fn max_branching(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// All label names occurring anywhere in the tree.
    pub fn label_names(&self) -> BTreeSet<&str> {
        self.nodes.iter().flat_map(|n| n.labels.iter().map(String::as_str)).collect()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &GornAddress)> {
        self.constants.iter().map(|(k, &i)| (k.as_str(), &self.nodes[i].address))
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn with_constant(mut self, name: &str, a: &GornAddress) -> Result<Self, TreeError> {
        let i = self.index_of(a).ok_or_else(|| TreeError::AddressNotInDomain(a.clone()))?;
        if self.constants.insert(name.to_string(), i).is_some() {
            return Err(TreeError::DuplicateConstant(name.to_string()));
        }
        Ok(self)
    }

    /// Preorder child counts; identifies the shape.
    pub fn shape(&self) -> Vec<usize> {
        self.children.iter().map(Vec::len).collect()
    }

    // Index-level relations. Nodes are numbered in preorder, so `i` dominates
    // `j` iff `j` falls in `i`'s subtree interval, and `i` precedes `j` iff `j`
    // starts after that interval ends.

    #[inline]
    pub fn dom_idx(&self, i: usize, j: usize) -> bool {
        i <= j && j < i + self.subtree_size[i]
    }

    #[inline]
    pub fn idom_idx(&self, i: usize, j: usize) -> bool {
        self.parent[j] == Some(i)
    }

    #[inline]
    pub fn prec_idx(&self, i: usize, j: usize) -> bool {
        j >= i + self.subtree_size[i]
    }

    pub fn relation_idx(&self, rel: Relation, i: usize, j: usize) -> bool {
        match rel {
            Relation::Idom => self.idom_idx(i, j),
            Relation::Dom => self.dom_idx(i, j),
            Relation::Prec => self.prec_idx(i, j),
            Relation::Eq => i == j,
        }
    }

    pub fn relation(&self, rel: Relation, x: &GornAddress, y: &GornAddress) -> Result<bool, TreeError> {
        let i = self.index_of(x).ok_or_else(|| TreeError::AddressNotInDomain(x.clone()))?;
        let j = self.index_of(y).ok_or_else(|| TreeError::AddressNotInDomain(y.clone()))?;
        Ok(self.relation_idx(rel, i, j))
    }
}

/// Lazily yields preorder child-count sequences for every ordered tree with
/// exactly `n` nodes and branching at most `k`, lexicographically ascending.
#[derive(Clone, Debug)]
pub struct Shapes {
    n: usize,
    k: usize,
    seq: Vec<usize>,
    started: bool,
    done: bool,
}

impl Shapes {
    pub fn new(n: usize, k: usize) -> Self {
        Shapes { n, k, seq: Vec::with_capacity(n), started: false, done: n == 0 }
    }

    // open slots after the prefix seq[..len]
    fn open_after(seq: &[usize]) -> usize {
        let mut open = 1usize;
        for &c in seq {
            open = open - 1 + c;
        }
        open
    }

    fn valid_choice(&self, pos: usize, open_before: usize, c: usize) -> bool {
        let remaining_after = self.n - pos - 1;
        let open = open_before - 1 + c;
        if remaining_after == 0 {
            open == 0
        } else {
            open >= 1 && open <= remaining_after
        }
    }

    // Complete seq greedily with the smallest valid choices from position
    // seq.len(). Returns false if impossible.
    fn fill_min(&mut self) -> bool {
        while self.seq.len() < self.n {
            let pos = self.seq.len();
            let open = Self::open_after(&self.seq);
            match (0..=self.k).find(|&c| self.valid_choice(pos, open, c)) {
                Some(c) => self.seq.push(c),
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        while let Some(last) = self.seq.pop() {
            let pos = self.seq.len();
            let open = Self::open_after(&self.seq);
            for c in last + 1..=self.k {
                if !self.valid_choice(pos, open, c) {
                    continue;
                }
                self.seq.push(c);
                if self.fill_min() {
                    return true;
                }
                self.seq.truncate(pos);
            }
        }
        false
    }
}

impl Iterator for Shapes {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.fill_min()
        } else {
            self.advance()
        };
        if ok {
            Some(self.seq.clone())
        } else {
            self.done = true;
            None
        }
    }
}

/// Number of ordered shapes with exactly `n` nodes and branching ≤ `k`.
pub fn count_shapes(n: usize, k: usize) -> usize {
    Shapes::new(n, k).count()
}

/// Yields every labeled tree with at most `max_nodes` nodes, branching at most
/// `max_branching`, and each node labeled by any subset of `label_set`.
///
/// Order: node count ascending, then shape (preorder child counts,
/// lexicographic), then labeling. A labeling is the preorder sequence of
/// per-node masks, compared lexicographically; bit `i` of a mask stands for
/// `label_set[i]`.
pub fn enumerate_trees(
    max_nodes: usize,
    max_branching: usize,
    label_set: &[String],
) -> impl Iterator<Item = LabeledTree> + '_ {
    (1..=max_nodes).flat_map(move |n| {
        Shapes::new(n, max_branching).flat_map(move |shape| labelings(shape, label_set))
    })
}

/// All labelings of one shape, in enumeration order.
pub fn labelings(shape: Vec<usize>, label_set: &[String]) -> impl Iterator<Item = LabeledTree> + '_ {
    let n = shape.len();
    let per_node = 1u64 << label_set.len();
    let mut masks = vec![0u64; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let labels = masks.iter().map(|&m| mask_to_labels(m, label_set)).collect();
        let tree = LabeledTree::from_preorder(&shape, labels).expect("valid shape");
        // odometer, last node fastest
        let mut i = n;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            masks[i] += 1;
            if masks[i] < per_node {
                break;
            }
            masks[i] = 0;
        }
        Some(tree)
    })
}

pub fn mask_to_labels(mask: u64, label_set: &[String]) -> BTreeSet<String> {
    label_set
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, l)| l.clone())
        .collect()
}
