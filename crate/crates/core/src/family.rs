use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::PartitionMatrix;
use crate::subset::PartSubset;

/// Subset-closed family of part sets, stored as its inclusion-maximal members.
///
/// The empty representation stands for `{∅}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ListFamily {
    n_parts: usize,
    maximal: Vec<PartSubset>,
}

impl ListFamily {
    /// Closure of `sets`: non-maximal and duplicate members are dropped and
    /// the rest sorted by bit pattern.
    pub fn new<I>(n_parts: usize, sets: I) -> Self
    where
        I: IntoIterator<Item = PartSubset>,
    {
        let all = PartSubset::full(n_parts);
        let mut sets: Vec<PartSubset> = sets
            .into_iter()
            .map(|s| s & all)
            .filter(|s| !s.is_empty())
            .collect();
        sets.sort_by_key(|s| std::cmp::Reverse(s.len()));
        let mut maximal: Vec<PartSubset> = Vec::new();
        for s in sets {
            if !maximal.iter().any(|m| s.is_subset(*m)) {
                maximal.push(s);
            }
        }
        maximal.sort();
        ListFamily { n_parts, maximal }
    }

    /// `𝒫(D)`, represented as `{D}`.
    pub fn full(n_parts: usize) -> Self {
        ListFamily::new(n_parts, [PartSubset::full(n_parts)])
    }

    /// Closure of the image of a list function.
    pub fn from_image(n_parts: usize, lists: &ListFunction) -> Self {
        ListFamily::new(n_parts, lists.iter())
    }

    pub fn n_parts(&self) -> usize {
        self.n_parts
    }

    pub fn maximal(&self) -> &[PartSubset] {
        &self.maximal
    }

    pub fn contains(&self, x: PartSubset) -> bool {
        x.is_empty() || self.maximal.iter().any(|m| x.is_subset(*m))
    }

    /// Proper containment of the closed families.
    pub fn is_strict_subfamily(&self, other: &ListFamily) -> bool {
        self.maximal.iter().all(|&m| other.contains(m)) && self != other
    }

    /// Purity of the closed family, which reduces to purity of the maximal
    /// members since subsets of pure blocks are pure.
    pub fn is_purifying(&self, m: &PartitionMatrix) -> bool {
        m.is_purifying(&self.maximal)
    }

    /// Every member of the closure with at least `min_len` elements.
    pub fn members_with_len_at_least(&self, min_len: usize) -> Vec<PartSubset> {
        let mut out: Vec<PartSubset> = self
            .maximal
            .iter()
            .flat_map(|m| m.subsets())
            .filter(|s| s.len() >= min_len)
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// One list per vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ListFunction(Vec<PartSubset>);

impl ListFunction {
    pub fn new(lists: Vec<PartSubset>) -> Self {
        ListFunction(lists)
    }

    pub fn constant(n: usize, list: PartSubset) -> Self {
        ListFunction(vec![list; n])
    }

    /// Checks the list count against the graph and membership in `fam`.
    pub fn validate(&self, g: &Graph, fam: &ListFamily) -> Result<()> {
        if self.0.len() != g.n() {
            return Err(Error::ListCount {
                expected: g.n(),
                got: self.0.len(),
            });
        }
        match self.0.iter().position(|&l| !fam.contains(l)) {
            Some(v) => Err(Error::ListNotInFamily(v)),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> PartSubset {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, list: PartSubset) {
        self.0[v] = list;
    }

    pub fn iter(&self) -> impl Iterator<Item = PartSubset> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[PartSubset] {
        &self.0
    }

    pub fn has_empty_list(&self) -> bool {
        self.0.iter().any(|l| l.is_empty())
    }

    /// `σ` respects the lists.
    pub fn respects(&self, sigma: &[usize]) -> bool {
        sigma.iter().zip(&self.0).all(|(&d, l)| l.contains(d))
    }
}

impl std::ops::Index<usize> for ListFunction {
    type Output = PartSubset;
    fn index(&self, v: usize) -> &PartSubset {
        &self.0[v]
    }
}
