use std::fmt;

use crate::error::{Error, Result};
use crate::subset::IndexSubset;

/// Ordered list of pairwise disjoint, nonempty column blocks covering a
/// column set `L`.
#[derive(Clone, PartialEq, Eq)]
pub struct ColumnPartition {
    blocks: Vec<IndexSubset>,
    universe: IndexSubset,
}

impl ColumnPartition {
    /// Validates disjointness and nonemptiness; the universe is the union.
    pub fn new(blocks: Vec<IndexSubset>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidPartition("no blocks".into()));
        };
        let size = first.universe_size();
        let mut universe = IndexSubset::empty(size);
        for (k, b) in blocks.iter().enumerate() {
            if b.universe_size() != size {
                return Err(Error::InvalidPartition(format!("block {k} has a different universe size")));
            }
            if b.is_empty() {
                return Err(Error::InvalidPartition(format!("block {k} is empty")));
            }
            if !b.is_disjoint(universe) {
                return Err(Error::InvalidPartition(format!("block {k} overlaps an earlier block")));
            }
            universe = universe.union(*b);
        }
        Ok(Self { blocks, universe })
    }

    /// Like [`ColumnPartition::new`] but also requires the union to be `universe`.
    pub fn covering(blocks: Vec<IndexSubset>, universe: IndexSubset) -> Result<Self> {
        let p = Self::new(blocks)?;
        if p.universe.bits() != universe.bits() {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {} but the column set is {}",
                p.universe, universe
            )));
        }
        Ok(p)
    }

    /// Consecutive blocks of the given sizes over the members of `columns`
    /// taken in ascending order: sizes `1,1,2` over `{0,1,2,3}` gives
    /// `{0},{1},{2,3}`.
    pub fn consecutive(sizes: &[usize], columns: IndexSubset) -> Result<Self> {
        let total: usize = sizes.iter().sum();
        if total != columns.len() {
            return Err(Error::InvalidPartition(format!(
                "block sizes sum to {total}, but there are {} columns",
                columns.len()
            )));
        }
        let members = columns.to_vec();
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut start = 0;
        for &s in sizes {
            let block = IndexSubset::from_indices(&members[start..start + s], columns.universe_size())?;
            blocks.push(block);
            start += s;
        }
        Self::new(blocks)
    }

    /// One singleton block per column of `columns`.
    pub fn singletons(columns: IndexSubset) -> Self {
        let blocks = columns
            .iter()
            .map(|c| IndexSubset::singleton(c, columns.universe_size()).expect("member in universe"))
            .collect();
        Self::new(blocks).expect("singletons form a partition")
    }

    /// A single block equal to `columns`.
    pub fn whole(columns: IndexSubset) -> Result<Self> {
        Self::new(vec![columns])
    }

    pub fn blocks(&self) -> &[IndexSubset] {
        &self.blocks
    }

    pub fn universe(&self) -> IndexSubset {
        self.universe
    }

    /// Number of blocks `d`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block sizes `m_k`.
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }
}

impl fmt::Debug for ColumnPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.blocks.iter()).finish()
    }
}

/// All compositions of `n` (ordered lists of positive parts summing to `n`).
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    // bit i of mask set => cut after position i
    (0u64..1 << (n - 1))
        .map(|mask| {
            let mut parts = Vec::new();
            let mut run = 1;
            for i in 0..n - 1 {
                if mask >> i & 1 == 1 {
                    parts.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            parts
        })
        .collect()
}

/// Every set partition of `columns` (Bell-number many), blocks ordered by
/// their smallest member.
pub fn set_partitions(columns: IndexSubset) -> Vec<ColumnPartition> {
    fn rec(rest: &[usize], blocks: &mut Vec<Vec<usize>>, n: usize, out: &mut Vec<ColumnPartition>) {
        let Some((&first, tail)) = rest.split_first() else {
            let subsets = blocks.iter().map(|b| IndexSubset::from_indices(b, n).expect("in range")).collect();
            out.push(ColumnPartition::new(subsets).expect("disjoint nonempty blocks"));
            return;
        };
        for k in 0..blocks.len() {
            blocks[k].push(first);
            rec(tail, blocks, n, out);
            blocks[k].pop();
        }
        blocks.push(vec![first]);
        rec(tail, blocks, n, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    if !columns.is_empty() {
        rec(&columns.to_vec(), &mut Vec::new(), columns.universe_size(), &mut out);
    }
    out
}
