//! Bitsets over preorder node indices.

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodeSet {
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet { words: vec![0; n.div_ceil(64).max(1)] }
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in idx {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i >> 6).is_some_and(|w| w >> (i & 63) & 1 == 1)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        if i >> 6 >= self.words.len() {
            self.words.resize((i >> 6) + 1, 0);
        }
        self.words[i >> 6] |= 1 << (i & 63);
    }

    /// Overwrites the set with the low bits of `mask` (for n ≤ 64).
    #[inline]
    pub fn set_mask(&mut self, mask: u64) {
        self.words[0] = mask;
        for w in &mut self.words[1..] {
            *w = 0;
        }
    }

    /// Low word; the whole set when there are at most 64 nodes.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }
}
