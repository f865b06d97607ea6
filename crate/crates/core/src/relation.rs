use crate::error::{Error, Result};
use crate::subset::PartSubset;

/// Binary relation between `X ⊆ D` and `Y ⊆ D`.
///
/// Rows are indexed by absolute part index, so `rows[i]` is the set of `j`
/// with `(i, j)` in the relation. Rows outside `X` are always empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    x: PartSubset,
    y: PartSubset,
    rows: Vec<PartSubset>,
}

impl Relation {
    pub fn empty(n_parts: usize, x: PartSubset, y: PartSubset) -> Self {
        Relation {
            x,
            y,
            rows: vec![PartSubset::EMPTY; n_parts],
        }
    }

    /// `A × B` with domains `A` and `B`.
    pub fn product(n_parts: usize, a: PartSubset, b: PartSubset) -> Self {
        let mut r = Relation::empty(n_parts, a, b);
        for i in a.iter() {
            r.rows[i] = b;
        }
        r
    }

    pub fn identity(n_parts: usize, x: PartSubset) -> Self {
        let mut r = Relation::empty(n_parts, x, x);
        for i in x.iter() {
            r.rows[i] = PartSubset::singleton(i);
        }
        r
    }

    /// Builds a relation from pairs; pairs outside `X × Y` are rejected.
    pub fn from_pairs<I>(n_parts: usize, x: PartSubset, y: PartSubset, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Relation::empty(n_parts, x, y);
        for (i, j) in pairs {
            if !x.contains(i) || !y.contains(j) {
                return Err(Error::DomainMismatch);
            }
            r.rows[i].insert(j);
        }
        Ok(r)
    }

    pub(crate) fn set_row(&mut self, i: usize, row: PartSubset) {
        debug_assert!(row.is_subset(self.y));
        debug_assert!(row.is_empty() || self.x.contains(i));
        self.rows[i] = row;
    }

    pub fn n_parts(&self) -> usize {
        self.rows.len()
    }

    pub fn domain_x(&self) -> PartSubset {
        self.x
    }

    pub fn domain_y(&self) -> PartSubset {
        self.y
    }

    #[inline]
    pub fn row(&self, i: usize) -> PartSubset {
        self.rows[i]
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.x
            .iter()
            .flat_map(move |i| self.rows[i].iter().map(move |j| (i, j)))
    }

    /// `π1(R)`
    pub fn first_projection(&self) -> PartSubset {
        self.x
            .iter()
            .filter(|&i| !self.rows[i].is_empty())
            .collect()
    }

    /// `π2(R)`
    pub fn second_projection(&self) -> PartSubset {
        self.rows.iter().fold(PartSubset::EMPTY, |acc, &r| acc | r)
    }

    /// `{(i, k) | ∃j: (i, j) ∈ self, (j, k) ∈ other}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        if self.y != other.x || self.n_parts() != other.n_parts() {
            return Err(Error::DomainMismatch);
        }
        let mut out = Relation::empty(self.n_parts(), self.x, other.y);
        for i in self.x.iter() {
            out.rows[i] = self.rows[i]
                .iter()
                .fold(PartSubset::EMPTY, |acc, j| acc | other.rows[j]);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Relation {
        let mut out = Relation::empty(self.n_parts(), self.y, self.x);
        for (i, j) in self.pairs() {
            out.rows[j].insert(i);
        }
        out
    }

    /// Pairwise intersection; the domains are intersected too.
    pub fn intersect(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.n_parts(), self.x & other.x, self.y & other.y);
        for (o, (a, b)) in out.rows.iter_mut().zip(self.rows.iter().zip(&other.rows)) {
            *o = *a & *b;
        }
        out
    }

    /// `R ∩ (A × B)` with domains `A` and `B`.
    pub fn restrict(&self, a: PartSubset, b: PartSubset) -> Relation {
        let mut out = Relation::empty(self.n_parts(), a, b);
        for i in a.iter() {
            out.rows[i] = self.rows[i] & b;
        }
        out
    }

    /// Rows that meet must coincide.
    pub fn is_rectangular(&self) -> bool {
        let rows: Vec<PartSubset> = self
            .x
            .iter()
            .map(|i| self.rows[i])
            .filter(|r| !r.is_empty())
            .collect();
        for (a, &r) in rows.iter().enumerate() {
            for &s in &rows[a + 1..] {
                if r != s && r.intersects(s) {
                    return false;
                }
            }
        }
        true
    }

    /// `Some((A, B))` if the relation equals `A × B`; the empty relation is
    /// `∅ × ∅`.
    pub fn as_cartesian_product(&self) -> Option<(PartSubset, PartSubset)> {
        let a = self.first_projection();
        let b = self.second_projection();
        if a.iter().all(|i| self.rows[i] == b) {
            Some((a, b))
        } else {
            None
        }
    }

    /// Block decomposition `R = ⋃ A_i × B_i`, sorted by least element of `A_i`.
    pub fn blocks(&self) -> Result<Vec<(PartSubset, PartSubset)>> {
        if self.is_empty() {
            return Err(Error::EmptyRelation);
        }
        if !self.is_rectangular() {
            return Err(Error::NotRectangular);
        }
        let mut out: Vec<(PartSubset, PartSubset)> = Vec::new();
        for i in self.x.iter() {
            let r = self.rows[i];
            if r.is_empty() {
                continue;
            }
            match out.iter_mut().find(|(_, b)| *b == r) {
                Some((a, _)) => a.insert(i),
                None => out.push((PartSubset::singleton(i), r)),
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}
