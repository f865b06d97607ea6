//! Brute-force reference implementations.
//!
//! Nothing here calls into the counting, purification or search code; only
//! the plain data types are shared. Every function takes an explicit budget
//! and fails with [`Error::BudgetExceeded`] rather than truncating.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::{ListFamily, ListFunction};
use crate::graph::Graph;
use crate::matrix::{Entry, PartitionMatrix};
use crate::meta::DerectCertificate;
use crate::subset::PartSubset;

pub const DEFAULT_BUDGET: u128 = 10_000_000;

fn check_budget(base: usize, exp: usize, budget: u128) -> Result<()> {
    let mut needed: u128 = 1;
    for _ in 0..exp {
        needed = needed.saturating_mul(base as u128);
    }
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn allowed(m: &PartitionMatrix, g: &Graph, u: usize, du: usize, v: usize, dv: usize) -> bool {
    match m.entry(du, dv) {
        Entry::Zero => !g.has_edge(u, v),
        Entry::One => g.has_edge(u, v),
        Entry::Star => true,
    }
}

/// Calls `visit` on every `M`-partition of `g` respecting `lists`, as a
/// vector of part indices. Pairs are checked as soon as both ends are set.
pub fn for_each_partition(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
    budget: u128,
    visit: &mut dyn FnMut(&[usize]),
) -> Result<()> {
    check_budget(m.size(), g.n(), budget)?;
    if lists.len() != g.n() {
        return Err(Error::ListCount {
            expected: g.n(),
            got: lists.len(),
        });
    }
    let mut sigma = Vec::with_capacity(g.n());
    extend(g, lists, m, &mut sigma, visit);
    Ok(())
}

fn extend(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
    sigma: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let v = sigma.len();
    if v == g.n() {
        visit(sigma);
        return;
    }
    for d in 0..m.size() {
        if !lists[v].contains(d) {
            continue;
        }
        if (0..v).all(|u| allowed(m, g, u, sigma[u], v, d)) {
            sigma.push(d);
            extend(g, lists, m, sigma, visit);
            sigma.pop();
        }
    }
}

/// Number of `M`-partitions of `g` respecting `lists`.
pub fn brute_count(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
    budget: u128,
) -> Result<BigUint> {
    let mut count = BigUint::zero();
    for_each_partition(g, lists, m, budget, &mut |_| count += 1u32)?;
    Ok(count)
}

/// Number of `M`-partitions of `g` with at least `mins[d]` vertices in each
/// part `d`.
pub fn brute_count_with_minimums(
    g: &Graph,
    m: &PartitionMatrix,
    mins: &[usize],
    budget: u128,
) -> Result<BigUint> {
    let lists = ListFunction::constant(g.n(), m.all());
    let mut count = BigUint::zero();
    for_each_partition(g, &lists, m, budget, &mut |sigma| {
        let mut sizes = vec![0usize; m.size()];
        for &d in sigma {
            sizes[d] += 1;
        }
        if sizes.iter().zip(mins).all(|(s, k)| s >= k) {
            count += 1u32;
        }
    })?;
    Ok(count)
}

/// Ordered triples `(U, W1, W2)` partitioning the vertices with `|U| >= 2`,
/// `|W1| >= 2` or `|W2| >= 2`, and every vertex of `U` complete or
/// anticomplete to each of `W1` and `W2`.
pub fn brute_homogeneous_pairs(g: &Graph, budget: u128) -> Result<BigUint> {
    let n = g.n();
    check_budget(3, n, budget)?;
    let mut count = BigUint::zero();
    let mut side = vec![0u8; n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for s in side.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        let size = |k: u8| side.iter().filter(|&&s| s == k).count();
        if size(0) < 2 || (size(1) < 2 && size(2) < 2) {
            continue;
        }
        let uniform = |u: usize, k: u8| {
            let adj: Vec<bool> = (0..n)
                .filter(|&w| side[w] == k)
                .map(|w| g.has_edge(u, w))
                .collect();
            adj.iter().all(|&a| a) || adj.iter().all(|&a| !a)
        };
        if (0..n)
            .filter(|&u| side[u] == 0)
            .all(|u| uniform(u, 1) && uniform(u, 2))
        {
            count += 1u32;
        }
    }
    Ok(count)
}

/// Whether `g` has an independent set of size `k`.
pub fn brute_independent_set(g: &Graph, k: usize, budget: u128) -> Result<bool> {
    let n = g.n();
    check_budget(2, n, budget)?;
    Ok((0u64..1 << n).any(|mask| {
        mask.count_ones() as usize == k
            && (0..n).all(|u| {
                (u + 1..n).all(|v| mask >> u & 1 == 0 || mask >> v & 1 == 0 || !g.has_edge(u, v))
            })
    }))
}

/// Exhaustive search for a derectangularising sequence of length at most
/// `max_len` over every member of `fam` with at least two parts.
pub fn brute_find_derect(
    m: &PartitionMatrix,
    fam: &ListFamily,
    max_len: usize,
    budget: u128,
) -> Result<Option<DerectCertificate>> {
    let d = m.size();
    let sets: Vec<PartSubset> = m
        .all()
        .subsets()
        .filter(|s| s.len() >= 2 && fam.contains(*s))
        .collect();
    check_budget(sets.len(), max_len, budget)?;
    let pure = |x: PartSubset, y: PartSubset| {
        let entries: Vec<Entry> = x
            .iter()
            .flat_map(|i| y.iter().map(move |j| m.entry(i, j)))
            .collect();
        !entries.contains(&Entry::Zero) || !entries.contains(&Entry::One)
    };
    let q = sets.len();
    let pure_pair: Vec<Vec<bool>> = sets
        .iter()
        .map(|&x| sets.iter().map(|&y| pure(x, y)).collect())
        .collect();
    let star = |x: PartSubset, y: PartSubset| -> Vec<Vec<bool>> {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| x.contains(i) && y.contains(j) && m.entry(i, j) == Entry::Star)
                    .collect()
            })
            .collect()
    };
    let mut search = DerectSearch {
        sets: &sets,
        pure_pair,
        star: (0..q)
            .map(|a| (0..q).map(|b| star(sets[a], sets[b])).collect())
            .collect(),
        max_len,
        seen: HashSet::new(),
        path: Vec::new(),
    };
    // iterative deepening, so the first hit is a shortest sequence
    for limit in 2..=max_len {
        search.max_len = limit;
        search.seen.clear();
        if let Some(cert) = search.run(d) {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

impl DerectSearch<'_> {
    fn run(&mut self, d: usize) -> Option<DerectCertificate> {
        let search = self;
        let q = search.sets.len();
        for s in 0..q {
            if !search.pure_pair[s][s] {
                continue;
            }
            search.path.push(s);
            let mut used = vec![false; q];
            used[s] = true;
            let identity: Vec<Vec<bool>> =
                (0..d).map(|i| (0..d).map(|j| i == j).collect()).collect();
            if search.dfs(s, &mut used, identity, true) {
                let sequence = search.path.iter().map(|&i| search.sets[i]).collect();
                return Some(DerectCertificate { sequence });
            }
            search.path.pop();
        }
        None
    }
}

/// Depth, last set, sets used so far and the composed relation.
type SearchKey = (usize, usize, Vec<bool>, Vec<Vec<bool>>);

struct DerectSearch<'a> {
    sets: &'a [PartSubset],
    pure_pair: Vec<Vec<bool>>,
    star: Vec<Vec<Vec<Vec<bool>>>>,
    max_len: usize,
    seen: HashSet<SearchKey>,
    path: Vec<usize>,
}

impl DerectSearch<'_> {
    fn dfs(&mut self, last: usize, used: &mut Vec<bool>, rel: Vec<Vec<bool>>, first: bool) -> bool {
        if !first && !rectangular(&rel) {
            return true;
        }
        if self.path.len() == self.max_len {
            return false;
        }
        if !self
            .seen
            .insert((self.path.len(), last, used.clone(), rel.clone()))
        {
            return false;
        }
        for next in 0..self.sets.len() {
            let ok = (0..self.sets.len())
                .filter(|&u| used[u])
                .all(|u| self.pure_pair[u][next])
                && self.pure_pair[next][next];
            if !ok {
                continue;
            }
            let step = &self.star[last][next];
            let composed = compose(&rel, step);
            let was = used[next];
            used[next] = true;
            self.path.push(next);
            if self.dfs(next, used, composed, false) {
                return true;
            }
            self.path.pop();
            used[next] = was;
        }
        false
    }
}

fn compose(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|k| (0..d).any(|j| a[i][j] && b[j][k])).collect())
        .collect()
}

/// The four-quantifier definition: `(a,b), (a',b), (a,b')` in the relation
/// force `(a',b')`.
fn rectangular(r: &[Vec<bool>]) -> bool {
    let d = r.len();
    for a in 0..d {
        for a2 in 0..d {
            for b in 0..d {
                for b2 in 0..d {
                    if r[a][b] && r[a2][b] && r[a][b2] && !r[a2][b2] {
                        return false;
                    }
                }
            }
        }
    }
    true
}
