use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::subset::{PartSubset, MAX_PARTS};

/// Ordered, named index set `D` of a partition matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct PartSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyPartSet);
        }
        if names.len() > MAX_PARTS {
            return Err(Error::TooManyParts { got: names.len() });
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicatePart(name.clone()));
            }
        }
        Ok(PartSet { names, index })
    }

    /// Parts named `0`, `1`, ..., `n-1`.
    pub fn numbered(n: usize) -> Result<Self> {
        PartSet::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn all(&self) -> PartSubset {
        PartSubset::full(self.len())
    }

    pub fn subset<'a, I>(&self, names: I) -> Result<PartSubset>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut s = PartSubset::EMPTY;
        for name in names {
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownPart(name.to_string()))?;
            s.insert(i);
        }
        Ok(s)
    }

    /// Space-separated part names of `s`, in index order.
    pub fn format_subset(&self, s: PartSubset) -> String {
        s.iter()
            .map(|i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for PartSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    One,
    Star,
}

impl Entry {
    pub fn from_char(c: char) -> Option<Entry> {
        match c {
            '0' => Some(Entry::Zero),
            '1' => Some(Entry::One),
            '*' => Some(Entry::Star),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Entry::Zero => '0',
            Entry::One => '1',
            Entry::Star => '*',
        }
    }
}

/// Symmetric `{0,1,*}` matrix indexed by a [`PartSet`].
///
/// Besides the entries, each row keeps the masks of its `0`, `1` and `*`
/// columns so that purity and star-relation queries are word operations.
#[derive(Clone, PartialEq, Eq)]
pub struct PartitionMatrix {
    parts: PartSet,
    entries: Vec<Entry>,
    zeros: Vec<PartSubset>,
    ones: Vec<PartSubset>,
    stars: Vec<PartSubset>,
}

impl PartitionMatrix {
    /// Builds a matrix from row-major entries. Asymmetric input is rejected.
    pub fn new(parts: PartSet, entries: Vec<Entry>) -> Result<Self> {
        let n = parts.len();
        if entries.len() != n * n {
            return Err(Error::MatrixShape { expected: n });
        }
        for i in 0..n {
            for j in i + 1..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::Asymmetric(i, j));
                }
            }
        }
        let mut zeros = vec![PartSubset::EMPTY; n];
        let mut ones = vec![PartSubset::EMPTY; n];
        let mut stars = vec![PartSubset::EMPTY; n];
        for i in 0..n {
            for j in 0..n {
                match entries[i * n + j] {
                    Entry::Zero => zeros[i].insert(j),
                    Entry::One => ones[i].insert(j),
                    Entry::Star => stars[i].insert(j),
                }
            }
        }
        Ok(PartitionMatrix {
            parts,
            entries,
            zeros,
            ones,
            stars,
        })
    }

    /// Parses rows such as `["0*", "*1"]` over the given part names.
    pub fn from_rows<S: AsRef<str>>(names: &[&str], rows: &[S]) -> Result<Self> {
        let parts = PartSet::new(names.iter().copied())?;
        let n = parts.len();
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            let row: Vec<Entry> = row
                .as_ref()
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    Entry::from_char(c)
                        .ok_or_else(|| Error::parse(r + 1, 1, format!("bad entry `{c}`")))
                })
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::MatrixShape { expected: n });
            }
            entries.extend(row);
        }
        PartitionMatrix::new(parts, entries)
    }

    pub fn parts(&self) -> &PartSet {
        &self.parts
    }

    /// `|D|`
    pub fn size(&self) -> usize {
        self.parts.len()
    }

    pub fn all(&self) -> PartSubset {
        self.parts.all()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Entry {
        self.entries[i * self.size() + j]
    }

    #[inline]
    pub fn zeros_in_row(&self, i: usize) -> PartSubset {
        self.zeros[i]
    }

    #[inline]
    pub fn ones_in_row(&self, i: usize) -> PartSubset {
        self.ones[i]
    }

    #[inline]
    pub fn stars_in_row(&self, i: usize) -> PartSubset {
        self.stars[i]
    }

    /// Whether `M|_{X×Y}` contains a `0`.
    #[inline]
    pub fn has_zero(&self, x: PartSubset, y: PartSubset) -> bool {
        x.iter().any(|i| self.zeros[i].intersects(y))
    }

    /// Whether `M|_{X×Y}` contains a `1`.
    #[inline]
    pub fn has_one(&self, x: PartSubset, y: PartSubset) -> bool {
        x.iter().any(|i| self.ones[i].intersects(y))
    }

    /// `M|_{X×Y}` has no `0`s or no `1`s.
    pub fn is_pure(&self, x: PartSubset, y: PartSubset) -> bool {
        !self.has_zero(x, y) || !self.has_one(x, y)
    }

    /// Every ordered pair from `family` (including repeated members) gives a
    /// pure submatrix.
    pub fn is_purifying(&self, family: &[PartSubset]) -> bool {
        family
            .iter()
            .enumerate()
            .all(|(a, &x)| family[a..].iter().all(|&y| self.is_pure(x, y)))
    }

    /// `H^M_{X,Y}`: the pairs of `X×Y` whose entry is `*`.
    pub fn star_relation(&self, x: PartSubset, y: PartSubset) -> Relation {
        let mut rel = Relation::empty(self.size(), x, y);
        for i in x.iter() {
            rel.set_row(i, self.stars[i] & y);
        }
        rel
    }

    pub fn is_star_rectangular(&self, x: PartSubset, y: PartSubset) -> bool {
        self.star_relation(x, y).is_rectangular()
    }

    /// Rows of `M|_{X×Y}` that contain a `0`.
    pub fn rows_with_zero(&self, x: PartSubset, y: PartSubset) -> PartSubset {
        x.iter().filter(|&i| self.zeros[i].intersects(y)).collect()
    }

    /// The `0/1/*` rows as text, one row per line.
    pub fn format_rows(&self) -> Vec<String> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).as_char()).collect())
            .collect()
    }
}

impl fmt::Debug for PartitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?}", self.parts)?;
        for row in self.format_rows() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Named matrices that show up throughout the tests and the CLI.
pub mod known {
    use super::PartitionMatrix;

    /// `((0,*),(*,1))` over `{i, c}`: split graphs.
    pub fn split() -> PartitionMatrix {
        PartitionMatrix::from_rows(&["i", "c"], &["0*", "*1"]).expect("valid matrix")
    }

    /// Proper `k`-colouring: zero diagonal, `*` elsewhere.
    pub fn colouring(k: usize) -> PartitionMatrix {
        let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let rows: Vec<String> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { '0' } else { '*' }).collect())
            .collect();
        PartitionMatrix::from_rows(&names, &rows).expect("valid matrix")
    }

    /// Homogeneous pairs: parts 1 and 2 hold `W1` and `W2`, parts 3 to 6
    /// hold `U` split by adjacency to `W1` and `W2`.
    pub fn homogeneous_pair() -> PartitionMatrix {
        PartitionMatrix::from_rows(
            &["1", "2", "3", "4", "5", "6"],
            &["**1010", "**1100", "11****", "01****", "10****", "00****"],
        )
        .expect("valid matrix")
    }

    /// Homogeneous sets: part 1 holds the set, parts 2 and 3 the rest.
    pub fn homogeneous_set() -> PartitionMatrix {
        PartitionMatrix::from_rows(&["1", "2", "3"], &["*01", "0**", "1**"]).expect("valid matrix")
    }
}
