//! Bitmask subsets of `{0, .., n-1}` with `n <= 63`.
//!
//! Indices are zero-based throughout the library. k-subsets are enumerated in
//! increasing bitmask order, which coincides with colexicographic order, so the
//! position of a subset in [`iter_subsets`] is its [`IndexSubset::colex_rank`].

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported universe.
pub const MAX_UNIVERSE: usize = 63;

/// A subset of `{0, .., universe_size-1}` stored as one machine word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSubset {
    bits: u64,
    universe_size: u8,
}

impl IndexSubset {
    pub fn new(bits: u64, universe_size: usize) -> Result<Self> {
        if universe_size > MAX_UNIVERSE {
            return Err(Error::InvalidCardinality { n: universe_size, k: 0 });
        }
        if bits >> universe_size != 0 {
            let index = 63 - bits.leading_zeros() as usize;
            return Err(Error::OutOfRange { index, size: universe_size });
        }
        Ok(Self { bits, universe_size: universe_size as u8 })
    }

    pub fn empty(universe_size: usize) -> Self {
        assert!(universe_size <= MAX_UNIVERSE);
        Self { bits: 0, universe_size: universe_size as u8 }
    }

    pub fn full(universe_size: usize) -> Self {
        assert!(universe_size <= MAX_UNIVERSE);
        Self { bits: low_mask(universe_size), universe_size: universe_size as u8 }
    }

    pub fn from_indices(indices: &[usize], universe_size: usize) -> Result<Self> {
        if universe_size > MAX_UNIVERSE {
            return Err(Error::InvalidCardinality { n: universe_size, k: indices.len() });
        }
        let mut bits = 0u64;
        for &i in indices {
            if i >= universe_size {
                return Err(Error::OutOfRange { index: i, size: universe_size });
            }
            bits |= 1 << i;
        }
        Ok(Self { bits, universe_size: universe_size as u8 })
    }

    pub fn singleton(index: usize, universe_size: usize) -> Result<Self> {
        Self::from_indices(&[index], universe_size)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn universe_size(self) -> usize {
        self.universe_size as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.bits >> index & 1 == 1
    }

    pub fn is_subset_of(self, other: IndexSubset) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: IndexSubset) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(self, other: IndexSubset) -> Self {
        Self { bits: self.bits | other.bits, universe_size: self.universe_size.max(other.universe_size) }
    }

    pub fn intersection(self, other: IndexSubset) -> Self {
        Self { bits: self.bits & other.bits, universe_size: self.universe_size }
    }

    pub fn difference(self, other: IndexSubset) -> Self {
        Self { bits: self.bits & !other.bits, universe_size: self.universe_size }
    }

    /// Complement within the universe.
    pub fn complement(self) -> Self {
        Self { bits: !self.bits & low_mask(self.universe_size()), universe_size: self.universe_size }
    }

    /// Same bits viewed in a different (large enough) universe.
    pub fn with_universe(self, universe_size: usize) -> Result<Self> {
        Self::new(self.bits, universe_size)
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.bits)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of this subset among all subsets of equal cardinality in
    /// colexicographic (= increasing bitmask) order.
    pub fn colex_rank(self) -> usize {
        self.iter()
            .enumerate()
            .map(|(i, e)| binomial_u64(e, i + 1) as usize)
            .sum()
    }

    /// The subset of the given cardinality with the given colexicographic rank.
    pub fn from_colex_rank(mut rank: usize, k: usize, universe_size: usize) -> Result<Self> {
        if k > universe_size || universe_size > MAX_UNIVERSE {
            return Err(Error::InvalidCardinality { n: universe_size, k });
        }
        if rank as u64 >= binomial_u64(universe_size, k) {
            return Err(Error::OutOfRange { index: rank, size: binomial_u64(universe_size, k) as usize });
        }
        let mut bits = 0u64;
        let mut top = universe_size;
        for i in (1..=k).rev() {
            // largest c < top with C(c, i) <= rank
            let mut c = top - 1;
            while binomial_u64(c, i) as usize > rank {
                c -= 1;
            }
            bits |= 1 << c;
            rank -= binomial_u64(c, i) as usize;
            top = c;
        }
        Ok(Self { bits, universe_size: universe_size as u8 })
    }

    /// The members of `self` picked by the positions set in `mask`
    /// (bit `i` of `mask` selects the `i`-th smallest member).
    pub fn select(self, mask: u64) -> Self {
        let mut out = 0u64;
        let mut rest = self.bits;
        let mut m = mask;
        while m != 0 && rest != 0 {
            let low = rest & rest.wrapping_neg();
            if m & 1 == 1 {
                out |= low;
            }
            rest ^= low;
            m >>= 1;
        }
        Self { bits: out, universe_size: self.universe_size }
    }

    /// All `k`-subsets of `self`, in increasing bitmask order.
    pub fn subsets_of_size(self, k: usize) -> impl Iterator<Item = IndexSubset> {
        let parent = self;
        let len = self.len();
        let inner = if k <= len { Some(Combinations::new(len, k)) } else { None };
        inner.into_iter().flatten().map(move |mask| parent.select(mask))
    }
}

impl fmt::Debug for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over the members of a subset.
#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Raw `k`-combinations of `{0..n-1}` as bitmasks, increasing order.
#[derive(Clone, Debug)]
struct Combinations {
    current: u64,
    limit: u64,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        debug_assert!(k <= n && n <= MAX_UNIVERSE);
        Self { current: low_mask(k), limit: 1u64 << n, done: false }
    }
}

impl Iterator for Combinations {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.done || self.current >= self.limit {
            return None;
        }
        let out = self.current;
        if out == 0 {
            self.done = true;
        } else {
            // Gosper's hack
            let low = out & out.wrapping_neg();
            let ripple = out + low;
            self.current = (((out ^ ripple) >> 2) / low) | ripple;
        }
        Some(out)
    }
}

/// Stream of all `k`-subsets of `{0..n-1}` in increasing bitmask order.
#[derive(Clone, Debug)]
pub struct SubsetIter {
    inner: Combinations,
    n: u8,
}

impl Iterator for SubsetIter {
    type Item = IndexSubset;

    #[inline]
    fn next(&mut self) -> Option<IndexSubset> {
        self.inner.next().map(|bits| IndexSubset { bits, universe_size: self.n })
    }
}

/// All subsets of `{0..n-1}` with exactly `k` elements.
pub fn iter_subsets(n: usize, k: usize) -> Result<SubsetIter> {
    if k > n || n > MAX_UNIVERSE {
        return Err(Error::InvalidCardinality { n, k });
    }
    Ok(SubsetIter { inner: Combinations::new(n, k), n: n as u8 })
}

#[inline]
fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// `C(n, k)` for `n <= 66`; 0 when `k > n`.
pub fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}
