use std::fmt;

use crate::error::{Error, Result};

/// Default upper limit on the total Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Per-party local dimensions. Amplitudes are laid out row-major with the
/// last party's index varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimensionVector {
    dims: Vec<usize>,
}

impl DimensionVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("a state needs at least one party".into()));
        }
        if let Some(p) = dims.iter().position(|&d| d < 2) {
            return Err(Error::Shape(format!(
                "party {} has dimension {}; every local dimension must be at least 2",
                p, dims[p]
            )));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= cap)
                .ok_or_else(|| Error::Size(format!("dimension product of {dims:?} exceeds cap {cap}")))?;
        }
        Ok(Self { dims })
    }

    /// Dimension vector without the size cap, for internal reshaping
    /// (merged blocks, reduced states).
    pub(crate) fn unchecked(dims: Vec<usize>) -> Self {
        debug_assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 1));
        Self { dims }
    }

    #[inline]
    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn dim(&self, party: usize) -> usize {
        self.dims[party]
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: `stride[p] = prod_{q > p} d_q`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for p in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * self.dims[p + 1];
        }
        strides
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for p in (0..self.dims.len()).rev() {
            digits[p] = index % self.dims[p];
            index /= self.dims[p];
        }
        digits
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        digits.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Dimensions of the listed parties, in the given order.
    pub fn project(&self, parties: &[usize]) -> Self {
        Self::unchecked(parties.iter().map(|&p| self.dims[p]).collect())
    }

    pub(crate) fn check_party_set(&self, parties: &[usize]) -> Result<()> {
        if parties.is_empty() {
            return Err(Error::Index("party set is empty".into()));
        }
        let mut seen = vec![false; self.parties()];
        for &p in parties {
            if p >= self.parties() {
                return Err(Error::Index(format!("party {p} out of range for {} parties", self.parties())));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::Index(format!("party {p} listed twice")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// For a party permutation (`new party k = old party perm[k]`), the old flat
/// index of every new flat index.
pub(crate) fn permutation_index_map(dims: &DimensionVector, perm: &[usize]) -> Vec<usize> {
    let old_strides = dims.strides();
    let new_dims = dims.project(perm);
    (0..dims.total())
        .map(|new_index| {
            new_dims.decode(new_index).iter().zip(perm).map(|(&digit, &old_party)| digit * old_strides[old_party]).sum()
        })
        .collect()
}

/// For each flat index, its flat index restricted to `parties` and to the complement.
pub(crate) fn split_indices(dims: &DimensionVector, parties: &[usize]) -> (Vec<usize>, Vec<usize>, usize, usize) {
    let complement: Vec<usize> = (0..dims.parties()).filter(|p| !parties.contains(p)).collect();
    let kept_dims = dims.project(parties);
    let rest_dims = if complement.is_empty() { DimensionVector::unchecked(vec![1]) } else { dims.project(&complement) };
    let mut kept = Vec::with_capacity(dims.total());
    let mut rest = Vec::with_capacity(dims.total());
    for index in 0..dims.total() {
        let digits = dims.decode(index);
        let k: Vec<usize> = parties.iter().map(|&p| digits[p]).collect();
        let r: Vec<usize> = complement.iter().map(|&p| digits[p]).collect();
        kept.push(kept_dims.encode(&k));
        rest.push(if complement.is_empty() { 0 } else { rest_dims.encode(&r) });
    }
    (kept, rest, kept_dims.total(), rest_dims.total())
}

/// Grouping of parties into disjoint, nonempty blocks covering every party.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, parties: usize) -> Result<Self> {
        let mut seen = vec![false; parties];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Partition("empty block".into()));
            }
            for &p in block {
                if p >= parties {
                    return Err(Error::Partition(format!("party {p} out of range for {parties} parties")));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::Partition(format!("party {p} appears in more than one block")));
                }
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::Partition(format!("party {p} is not covered")));
        }
        Ok(Self { blocks })
    }

    pub fn singletons(parties: usize) -> Self {
        Self { blocks: (0..parties).map(|p| vec![p]).collect() }
    }

    /// Parses `1|2|34`-style notation (1-based, single-digit party labels).
    pub fn parse(text: &str, parties: usize) -> Result<Self> {
        let blocks = text
            .split('|')
            .map(|block| {
                block
                    .chars()
                    .map(|ch| {
                        ch.to_digit(10)
                            .filter(|&d| d >= 1)
                            .map(|d| d as usize - 1)
                            .ok_or_else(|| Error::Partition(format!("bad party label {ch:?} in {text:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks, parties)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn parties(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Party order obtained by concatenating the blocks.
    pub fn flattened(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1) && self.flattened().iter().enumerate().all(|(i, &p)| i == p)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.blocks.iter().map(|b| b.iter().map(|p| (p + 1).to_string()).collect::<String>()).collect();
        write!(f, "{}", parts.join("|"))
    }
}
