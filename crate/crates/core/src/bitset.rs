/// Fixed-capacity set of vertex indices packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bitset {
    words: Box<[u64]>,
}

impl Bitset {
    pub fn empty(capacity: usize) -> Self {
        Bitset { words: vec![0; capacity.div_ceil(64)].into_boxed_slice() }
    }

    pub fn full(capacity: usize) -> Self {
        let mut set = Bitset::empty(capacity);
        for (i, w) in set.words.iter_mut().enumerate() {
            let remaining = capacity - 64 * i;
            *w = if remaining >= 64 { u64::MAX } else { (1u64 << remaining) - 1 };
        }
        set
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
    }

    /// Removes and returns the smallest element.
    pub fn pop_first(&mut self) -> Option<usize> {
        let i = self.first()?;
        self.remove(i);
        Some(i)
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self.words.iter().zip(other.words.iter()).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(64 * i + bit)
            })
        })
    }
}
