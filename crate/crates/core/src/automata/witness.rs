//! Emptiness, minimal witnesses and language equivalence.
//!
//! Only symbols with all variable bits clear are considered, matching what
//! [`TreeAutomaton::run`] sees on a plain tree.

use super::{AutomatonError, State, TreeAutomaton};
use crate::tree::{mask_to_labels, LabeledTree, Shapes};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    /// A smallest tree accepted by exactly one of the two automata.
    Differ(LabeledTree),
}

impl TreeAutomaton {
    /// Size of the smallest tree reaching each state.
    fn min_sizes(&self, syms: &[u32]) -> Vec<Option<usize>> {
        let mut size: Vec<Option<usize>> = vec![None; self.num_states()];
        let mut changed = true;
        while changed {
            changed = false;
            for (t, tg) in self.rules() {
                let Some(sub) = t.iter().try_fold(1usize, |acc, &q| size[q as usize].map(|s| acc + s)) else {
                    continue;
                };
                for &s in syms {
                    for &q in &tg[s as usize] {
                        if size[q as usize].is_none_or(|old| sub < old) {
                            size[q as usize] = Some(sub);
                            changed = true;
                        }
                    }
                }
            }
        }
        size
    }

    /// Node count of the smallest accepted tree, if any.
    pub fn min_accepted_size(&self) -> Option<usize> {
        let sizes = self.min_sizes(&self.label_symbols());
        self.finals().filter_map(|q| sizes[q as usize]).min()
    }

    pub fn is_empty(&self) -> bool {
        self.min_accepted_size().is_none()
    }

    /// A smallest accepted tree, the first such in enumeration order (shape,
    /// then per-node label masks in preorder), or `None` if the language is
    /// empty.
    pub fn witness(&self) -> Option<LabeledTree> {
        let n = self.min_accepted_size()?;
        let syms = self.label_symbols();
        let mut ordered = syms.clone();
        ordered.sort_by_key(|&s| self.global_mask(s));
        let k = self.max_branching();
        for shape in Shapes::new(n, k) {
            let skeleton = LabeledTree::unlabeled(&shape);
            let mut fixed: Vec<Option<u32>> = vec![None; n];
            if !self.feasible(&skeleton, &fixed, &syms) {
                continue;
            }
            for i in 0..n {
                for &s in &ordered {
                    fixed[i] = Some(s);
                    if self.feasible(&skeleton, &fixed, &syms) {
                        break;
                    }
                }
            }
            let labels = fixed
                .iter()
                .map(|s| mask_to_labels(self.global_mask(s.expect("all fixed")), &self.alphabet().labels))
                .collect::<Vec<_>>();
            return Some(LabeledTree::from_preorder(&shape, labels).expect("valid shape"));
        }
        unreachable!("a shape of the minimal size must admit a run")
    }

    fn feasible(&self, skeleton: &LabeledTree, fixed: &[Option<u32>], syms: &[u32]) -> bool {
        let singles: Vec<[u32; 1]> = fixed.iter().map(|s| [s.unwrap_or(0)]).collect();
        let sets = self.reachable_sets(skeleton, |i| match fixed[i] {
            Some(_) => &singles[i][..],
            None => syms,
        });
        sets[0].iter().any(|&q: &State| self.is_final(q))
    }

    /// Language equality, with a smallest distinguishing tree otherwise.
    pub fn equivalent(&self, other: &Self, cap: usize) -> Result<Equivalence, AutomatonError> {
        let left = self.product(&other.complement(cap)?, cap)?.witness();
        let right = other.product(&self.complement(cap)?, cap)?.witness();
        let key = |t: &LabeledTree| (t.len(), t.shape(), self.label_masks(t).unwrap_or_default());
        Ok(match (left, right) {
            (None, None) => Equivalence::Equal,
            (Some(t), None) | (None, Some(t)) => Equivalence::Differ(t),
            (Some(a), Some(b)) => Equivalence::Differ(if key(&a) <= key(&b) { a } else { b }),
        })
    }
}
