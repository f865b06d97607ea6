//! Counting partitions under per-part minimum sizes by inclusion-exclusion
//! over list-partition counts, and counting homogeneous pairs on top of it.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use crate::counter::{CountOptions, ListPartitionCounter};
use crate::error::{Error, Result};
use crate::family::{ListFamily, ListFunction};
use crate::graph::Graph;
use crate::matrix::{known, PartitionMatrix};
use crate::meta::{classify, Classification, SearchLimits};
use crate::subset::PartSubset;

/// Minimum number of vertices per part; parts not mentioned default to 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CardinalityConstraint {
    mins: Vec<usize>,
}

impl CardinalityConstraint {
    pub fn none(n_parts: usize) -> Self {
        CardinalityConstraint {
            mins: vec![0; n_parts],
        }
    }

    pub fn from_mins(mins: Vec<usize>) -> Self {
        CardinalityConstraint { mins }
    }

    pub fn set(&mut self, part: usize, min: usize) {
        self.mins[part] = min;
    }

    pub fn min(&self, part: usize) -> usize {
        self.mins[part]
    }

    pub fn mins(&self) -> &[usize] {
        &self.mins
    }

    /// `|C|`, the sum of all minimums.
    pub fn total(&self) -> usize {
        self.mins.iter().sum()
    }

    /// Parts with a positive minimum.
    pub fn support(&self) -> PartSubset {
        (0..self.mins.len()).filter(|&d| self.mins[d] > 0).collect()
    }

    pub fn satisfied_by(&self, sigma: &[usize]) -> bool {
        let mut sizes = vec![0usize; self.mins.len()];
        for &d in sigma {
            sizes[d] += 1;
        }
        sizes.iter().zip(&self.mins).all(|(s, m)| s >= m)
    }
}

/// Count together with the number of list-counter calls made for the
/// failure terms and the total size of the list-function families they were
/// drawn from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityTrace {
    pub count: BigUint,
    pub queries: usize,
    pub list_functions: usize,
}

/// Number of `M`-partitions of `g` with at least `c(d)` vertices in each
/// part `d`.
pub fn count_with_cardinality(
    g: &Graph,
    m: &PartitionMatrix,
    c: &CardinalityConstraint,
    options: CountOptions,
) -> Result<BigUint> {
    Ok(count_with_cardinality_traced(g, m, c, options)?.count)
}

pub fn count_with_cardinality_traced(
    g: &Graph,
    m: &PartitionMatrix,
    c: &CardinalityConstraint,
    options: CountOptions,
) -> Result<CardinalityTrace> {
    if c.mins.len() != m.size() {
        return Err(Error::MatrixShape { expected: m.size() });
    }
    let counter = ListPartitionCounter::new(m.clone(), ListFamily::full(m.size()), options)?;
    let (count, queries, list_functions) = combination(g, &counter, &[(c.clone(), 1)])?;
    assert!(
        queries <= list_functions,
        "more list queries than list functions"
    );
    Ok(CardinalityTrace {
        count,
        queries,
        list_functions,
    })
}

/// `Σ_C w_C · #{σ satisfying C}`, evaluated with one list-counter call per
/// distinct list function across all terms.
///
/// For a single constraint `C` with `R = {d : C(d) > 0}` this is
/// `|Σ| + Σ_{∅≠P⊆R} (-1)^{|P|} Σ_{L ∈ L_P} N(L)`, where `L_P` holds the list
/// functions giving fewer than `C(p)` vertices the list `{p}` for each
/// `p ∈ P` and every other vertex the list `D \ P`.
///
/// Returns the value, the number of failure-term queries and `Σ |L_P|`.
fn combination(
    g: &Graph,
    counter: &ListPartitionCounter,
    terms: &[(CardinalityConstraint, i64)],
) -> Result<(BigUint, usize, usize)> {
    let m = counter.matrix();
    let n = g.n();
    let all = m.all();
    // coefficient per distinct list function, and whether it stems from a
    // failure term (with n = 0 the empty function is also the base term)
    let mut coeffs: BTreeMap<Vec<PartSubset>, (BigInt, bool)> = BTreeMap::new();
    let mut list_functions = 0usize;
    let base: BigInt = terms.iter().map(|(_, w)| BigInt::from(*w)).sum();
    coeffs.insert(vec![all; n], (base, false));
    for (c, w) in terms {
        let r = c.support();
        for p in r.subsets().filter(|p| !p.is_empty()) {
            let sign = if p.len() % 2 == 0 { *w } else { -*w };
            let parts: Vec<usize> = p.iter().collect();
            let rest = all - p;
            let mut lists = vec![rest; n];
            let mut used = vec![0usize; parts.len()];
            enumerate_failures(0, &parts, c, &mut used, &mut lists, &mut |l| {
                list_functions += 1;
                let e = coeffs.entry(l.to_vec()).or_default();
                e.0 += sign;
                e.1 = true;
            });
        }
    }
    let mut total = BigInt::zero();
    let mut queries = 0usize;
    for (lists, (coeff, failure)) in &coeffs {
        if coeff.is_zero() || lists.iter().any(|l| l.is_empty()) {
            continue;
        }
        queries += usize::from(*failure);
        let cnt = counter.count(g, &ListFunction::new(lists.clone()))?;
        total += coeff * BigInt::from(cnt);
    }
    match total.sign() {
        Sign::Minus => unreachable!("inclusion-exclusion produced a negative count"),
        _ => Ok((total.magnitude().clone(), queries, list_functions)),
    }
}

/// Visits every assignment of disjoint vertex sets `S_p` with
/// `|S_p| < C(p)`; vertices outside all `S_p` keep their current list.
fn enumerate_failures(
    v: usize,
    parts: &[usize],
    c: &CardinalityConstraint,
    used: &mut [usize],
    lists: &mut [PartSubset],
    visit: &mut dyn FnMut(&[PartSubset]),
) {
    if v == lists.len() {
        visit(lists);
        return;
    }
    enumerate_failures(v + 1, parts, c, used, lists, visit);
    let keep = lists[v];
    for (k, &p) in parts.iter().enumerate() {
        if used[k] + 1 < c.min(p) {
            used[k] += 1;
            lists[v] = PartSubset::singleton(p);
            enumerate_failures(v + 1, parts, c, used, lists, visit);
            lists[v] = keep;
            used[k] -= 1;
        }
    }
}

/// Inclusion-exclusion expansion of a union of minimum-size events into
/// weighted constraint vectors, merged by vector.
fn union_of_events(events: &[Vec<usize>]) -> Vec<(Vec<usize>, i64)> {
    let width = events.first().map_or(0, Vec::len);
    let mut acc: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for mask in 1u32..(1 << events.len()) {
        let mut v = vec![0usize; width];
        for (e, ev) in events.iter().enumerate() {
            if mask >> e & 1 == 1 {
                for (x, &y) in v.iter_mut().zip(ev) {
                    *x = (*x).max(y);
                }
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        *acc.entry(v).or_default() += sign;
    }
    acc.into_iter().filter(|&(_, w)| w != 0).collect()
}

/// Events "some part has at least 2" and "two distinct parts have at least
/// 1 each" over `k` parts; their union is "the parts hold at least 2 in
/// total".
fn at_least_two_in_total(k: usize) -> Vec<Vec<usize>> {
    let mut events = Vec::new();
    for d in 0..k {
        let mut v = vec![0; k];
        v[d] = 2;
        events.push(v);
    }
    for d in 0..k {
        for e in d + 1..k {
            let mut v = vec![0; k];
            v[d] = 1;
            v[e] = 1;
            events.push(v);
        }
    }
    events
}

fn homogeneous_counters() -> &'static (ListPartitionCounter, ListPartitionCounter) {
    static COUNTERS: OnceLock<(ListPartitionCounter, ListPartitionCounter)> = OnceLock::new();
    COUNTERS.get_or_init(|| {
        let build = |m: PartitionMatrix| {
            let fam = ListFamily::full(m.size());
            assert_eq!(
                classify(&m, &fam, SearchLimits::default()),
                Classification::Tractable,
                "homogeneous-pair matrices must be tractable"
            );
            ListPartitionCounter::trusted(m, fam)
        };
        (
            build(known::homogeneous_pair()),
            build(known::homogeneous_set()),
        )
    })
}

/// Number of homogeneous pairs `(U, W1, W2)` of `g`, counted as ordered
/// triples: `(U, A, B)` and `(U, B, A)` are distinct when `A ≠ B`. Halve the
/// part with both `W`s non-empty for unordered pairs.
pub fn count_homogeneous_pairs(g: &Graph) -> BigUint {
    let (hp, hs) = homogeneous_counters();

    // W1 and W2 non-empty, one of them with at least 2 vertices, U >= 2
    let u_events = union_of_events(&at_least_two_in_total(4));
    let mut hp_terms = Vec::new();
    for (w1, w2, sign) in [(2, 1, 1i64), (1, 2, 1), (2, 2, -1)] {
        for (u, weight) in &u_events {
            let mut mins = vec![w1, w2];
            mins.extend(u);
            hp_terms.push((CardinalityConstraint::from_mins(mins), sign * weight));
        }
    }
    let (with_both, _, _) = combination(g, hp, &hp_terms).expect("tractable by construction");

    // exactly one of W1, W2 empty: the other has at least 2 vertices
    let hs_terms: Vec<(CardinalityConstraint, i64)> = union_of_events(&at_least_two_in_total(2))
        .into_iter()
        .map(|(u, w)| {
            let mut mins = vec![2];
            mins.extend(u);
            (CardinalityConstraint::from_mins(mins), w)
        })
        .collect();
    let (one_side, _, _) = combination(g, hs, &hs_terms).expect("tractable by construction");

    with_both + one_side * BigUint::from(2u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::known;

    fn opts() -> CountOptions {
        CountOptions::default()
    }

    fn unconstrained_matches(g: &Graph, m: &PartitionMatrix) -> bool {
        let c = CardinalityConstraint::none(m.size());
        count_with_cardinality(g, m, &c, opts()).unwrap()
            == crate::counter::count_partitions(g, m, opts()).unwrap()
    }

    #[test]
    fn split_with_both_parts_required() {
        let m = known::split();
        let c = CardinalityConstraint::from_mins(vec![1, 1]);
        assert_eq!(
            count_with_cardinality(&Graph::path(3), &m, &c, opts()).unwrap(),
            3u32.into()
        );
        assert!(count_with_cardinality(&Graph::empty(1), &m, &c, opts())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn zero_constraint_is_plain_count() {
        for g in [Graph::path(4), Graph::cycle(4), Graph::empty(0)] {
            assert!(unconstrained_matches(&g, &known::split()));
        }
    }

    #[test]
    fn union_expansion_counts_totals() {
        // every vector in {0..3}^4 with total >= 2 is counted exactly once
        let terms = union_of_events(&at_least_two_in_total(4));
        for code in 0..256usize {
            let sizes: Vec<usize> = (0..4).map(|i| code >> (2 * i) & 3).collect();
            let hits: i64 = terms
                .iter()
                .filter(|(v, _)| v.iter().zip(&sizes).all(|(m, s)| s >= m))
                .map(|(_, w)| w)
                .sum();
            let want = i64::from(sizes.iter().sum::<usize>() >= 2);
            assert_eq!(hits, want, "{sizes:?}");
        }
    }

    #[test]
    fn small_graphs_have_no_homogeneous_pairs() {
        for n in 0..=3 {
            assert!(count_homogeneous_pairs(&Graph::empty(n)).is_zero());
            assert!(count_homogeneous_pairs(&Graph::complete(n)).is_zero());
        }
    }

    #[test]
    fn query_count_within_bound() {
        let m = known::split();
        let g = Graph::path(4);
        let c = CardinalityConstraint::from_mins(vec![2, 1]);
        let t = count_with_cardinality_traced(&g, &m, &c, opts()).unwrap();
        assert!(t.queries <= t.list_functions);
        assert!(t.list_functions <= 4 * 4usize.pow(3));
        assert_eq!(t.count, count_with_cardinality(&g, &m, &c, opts()).unwrap());
    }
}
