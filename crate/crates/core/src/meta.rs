//! Deciding which side of the dichotomy a matrix and list family fall on,
//! by searching for derectangularising sequences, plus the independent-set
//! gadget that makes that search NP-hard.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::family::ListFamily;
use crate::graph::Graph;
use crate::matrix::{Entry, PartSet, PartitionMatrix};
use crate::subset::{PartSubset, MAX_PARTS};

/// A sequence `D_1, ..., D_k` witnessing #P-completeness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerectCertificate {
    pub sequence: Vec<PartSubset>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Tractable,
    Hard(DerectCertificate),
    /// A search budget ran out before the space was exhausted.
    Inconclusive,
}

/// Budgets for [`find_derect_sequence`]. `None` means unbounded.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchLimits {
    pub max_cliques: Option<usize>,
    pub max_states: Option<usize>,
    pub time: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(DerectCertificate),
    Exhausted,
    Truncated,
}

/// Checks every defining property of a derectangularising sequence.
pub fn verify_certificate(m: &PartitionMatrix, fam: &ListFamily, cert: &DerectCertificate) -> bool {
    let seq = &cert.sequence;
    if seq.len() < 2 {
        return false;
    }
    if seq
        .iter()
        .any(|&d| d.len() < 2 || !fam.contains(d) || !d.is_subset(m.all()))
    {
        return false;
    }
    let mut members = seq.clone();
    members.sort();
    members.dedup();
    if !m.is_purifying(&members) {
        return false;
    }
    let mut rel = m.star_relation(seq[0], seq[1]);
    for w in seq[1..].windows(2) {
        rel = rel
            .compose(&m.star_relation(w[0], w[1]))
            .expect("consecutive domains agree");
    }
    !rel.is_rectangular()
}

/// Self-pure subsets of size 2 or 3 of members of the family, in bit order.
pub fn candidate_subsets(m: &PartitionMatrix, fam: &ListFamily) -> Vec<PartSubset> {
    let mut out: Vec<PartSubset> = Vec::new();
    for &x in fam.maximal() {
        let elems: Vec<usize> = x.iter().collect();
        for (a, &i) in elems.iter().enumerate() {
            for (b, &j) in elems.iter().enumerate().skip(a + 1) {
                out.push(PartSubset::from_indices([i, j]));
                for &k in &elems[b + 1..] {
                    out.push(PartSubset::from_indices([i, j, k]));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out.retain(|&s| m.is_pure(s, s));
    out
}

/// Searches for a derectangularising sequence among subsets of size 2
/// and 3 of family members, which is complete: any sequence can be shrunk
/// to one of that shape.
///
/// Sequences must be pairwise pure, so they live inside cliques of the
/// purity graph on candidates. Within each maximal clique a breadth-first
/// search runs over `(start, current, relation)` states; a relation on sets
/// of size at most 3 has at most 9 pairs, so the state space is finite and
/// no length cap is needed.
pub fn find_derect_sequence(
    m: &PartitionMatrix,
    fam: &ListFamily,
    limits: SearchLimits,
) -> SearchOutcome {
    let cands = candidate_subsets(m, fam);
    let nc = cands.len();
    let words = nc.div_ceil(64).max(1);
    let mut adj = vec![0u64; nc * words];
    for a in 0..nc {
        for b in a + 1..nc {
            if m.is_pure(cands[a], cands[b]) {
                adj[a * words + b / 64] |= 1 << (b % 64);
                adj[b * words + a / 64] |= 1 << (a % 64);
            }
        }
    }
    let mut search = CliqueSearch {
        m,
        cands: &cands,
        words,
        adj: &adj,
        limits,
        start: Instant::now(),
        cliques: 0,
        states: 0,
        truncated: false,
        found: None,
    };
    let mut p = vec![0u64; words];
    for a in 0..nc {
        p[a / 64] |= 1 << (a % 64);
    }
    search.bron_kerbosch(&mut Vec::new(), p, vec![0u64; words]);
    match search.found {
        Some(seq) => {
            let cert = DerectCertificate { sequence: seq };
            assert!(
                verify_certificate(m, fam, &cert),
                "search produced an invalid certificate"
            );
            SearchOutcome::Found(cert)
        }
        None if search.truncated => SearchOutcome::Truncated,
        None => SearchOutcome::Exhausted,
    }
}

pub fn classify(m: &PartitionMatrix, fam: &ListFamily, limits: SearchLimits) -> Classification {
    match find_derect_sequence(m, fam, limits) {
        SearchOutcome::Found(cert) => Classification::Hard(cert),
        SearchOutcome::Exhausted => Classification::Tractable,
        SearchOutcome::Truncated => Classification::Inconclusive,
    }
}

struct CliqueSearch<'a> {
    m: &'a PartitionMatrix,
    cands: &'a [PartSubset],
    words: usize,
    adj: &'a [u64],
    limits: SearchLimits,
    start: Instant,
    cliques: usize,
    states: usize,
    truncated: bool,
    found: Option<Vec<PartSubset>>,
}

fn bits_iter(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

impl CliqueSearch<'_> {
    fn stop(&self) -> bool {
        self.found.is_some() || self.truncated
    }

    fn out_of_time(&mut self) -> bool {
        if let Some(t) = self.limits.time {
            if self.start.elapsed() > t {
                self.truncated = true;
            }
        }
        self.truncated
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    /// Bron-Kerbosch with pivoting.
    fn bron_kerbosch(&mut self, r: &mut Vec<usize>, mut p: Vec<u64>, mut x: Vec<u64>) {
        if self.stop() || self.out_of_time() {
            return;
        }
        if p.iter().all(|&w| w == 0) {
            if x.iter().all(|&w| w == 0) {
                self.cliques += 1;
                if self
                    .limits
                    .max_cliques
                    .is_some_and(|cap| self.cliques > cap)
                {
                    self.truncated = true;
                    return;
                }
                self.search_clique(r);
            }
            return;
        }
        let pivot = bits_iter(&p)
            .chain(bits_iter(&x))
            .max_by_key(|&u| {
                self.row(u)
                    .iter()
                    .zip(&p)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
            })
            .expect("p is non-empty");
        let pivot_row: Vec<u64> = self.row(pivot).to_vec();
        let outside: Vec<u64> = p.iter().zip(&pivot_row).map(|(a, b)| a & !b).collect();
        let todo: Vec<usize> = bits_iter(&outside).collect();
        for v in todo {
            let row = self.row(v).to_vec();
            let np: Vec<u64> = p.iter().zip(&row).map(|(a, b)| a & b).collect();
            let nx: Vec<u64> = x.iter().zip(&row).map(|(a, b)| a & b).collect();
            r.push(v);
            self.bron_kerbosch(r, np, nx);
            r.pop();
            if self.stop() {
                return;
            }
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }

    /// Breadth-first search over `(start, current, relation)` inside one
    /// clique. Relations are 9-bit masks: bit `3i + j` relates the `i`-th
    /// element of the start set to the `j`-th element of the current set.
    fn search_clique(&mut self, clique: &[usize]) {
        let mut members: Vec<usize> = clique.to_vec();
        members.sort_unstable();
        let sets: Vec<Vec<usize>> = members
            .iter()
            .map(|&c| self.cands[c].iter().collect())
            .collect();
        let q = members.len();
        // step[a][b][j]: positions in set b related to element j of set a
        let mut step = vec![[0u16; 3]; q * q];
        for a in 0..q {
            for b in 0..q {
                for (j, &d) in sets[a].iter().enumerate() {
                    let stars = self.m.stars_in_row(d);
                    let mut mask = 0u16;
                    for (t, &e) in sets[b].iter().enumerate() {
                        if stars.contains(e) {
                            mask |= 1 << t;
                        }
                    }
                    step[a * q + b][j] = mask;
                }
            }
        }
        let compose = |rel: u16, a: usize, b: usize, la: usize| -> u16 {
            let mut out = 0u16;
            for i in 0..3 {
                let row = rel >> (3 * i) & 0b111;
                let mut nrow = 0u16;
                for (j, &s) in step[a * q + b].iter().enumerate().take(la) {
                    if row >> j & 1 == 1 {
                        nrow |= s;
                    }
                }
                out |= nrow << (3 * i);
            }
            out
        };
        let initial = |a: usize| -> u16 {
            let mut rel = 0u16;
            for i in 0..sets[a].len() {
                rel |= 1 << (3 * i + i);
            }
            rel
        };

        // (start, current, relation)
        type State = (usize, usize, u16);
        let mut parent: HashMap<State, Option<State>> = HashMap::new();
        let mut frontier = Vec::new();
        for (s, set) in sets.iter().enumerate() {
            for c in 0..q {
                let rel = compose(initial(s), s, c, set.len());
                if rel == 0 {
                    continue;
                }
                let key = (s, c, rel);
                if parent.insert(key, None).is_none() {
                    frontier.push(key);
                }
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for key in frontier {
                self.states += 1;
                if self.limits.max_states.is_some_and(|cap| self.states > cap) {
                    self.truncated = true;
                    return;
                }
                if !rectangular_mask(key.2) {
                    let mut chain = vec![key.1];
                    let mut cur = key;
                    while let Some(prev) = parent[&cur] {
                        chain.push(prev.1);
                        cur = prev;
                    }
                    chain.push(key.0);
                    chain.reverse();
                    self.found = Some(chain.iter().map(|&i| self.cands[members[i]]).collect());
                    return;
                }
                let (s, c, rel) = key;
                for d in 0..q {
                    let nrel = compose(rel, c, d, sets[c].len());
                    if nrel == 0 {
                        continue;
                    }
                    let nkey = (s, d, nrel);
                    if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(nkey) {
                        e.insert(Some(key));
                        next.push(nkey);
                    }
                }
            }
            if self.out_of_time() {
                return;
            }
            frontier = next;
        }
    }
}

/// Rows of a 3x3 mask that meet must be equal.
fn rectangular_mask(rel: u16) -> bool {
    let rows = [rel & 7, rel >> 3 & 7, rel >> 6 & 7];
    for a in 0..3 {
        for b in a + 1..3 {
            if rows[a] & rows[b] != 0 && rows[a] != rows[b] {
                return false;
            }
        }
    }
    true
}

/// Matrix and family produced by [`reduce_independent_set`].
#[derive(Clone, Debug)]
pub struct GadgetOutput {
    pub matrix: PartitionMatrix,
    pub family: ListFamily,
    /// `sets[v * k + j]` is `D[v, j]`, with 0-based `v` and `j`.
    pub sets: Vec<PartSubset>,
}

const M_START: [&str; 3] = ["**0", "**0", "00*"];
const M_END: [&str; 3] = ["*00", "0**", "0**"];
const M_BIJ: [&str; 3] = ["*00", "0*0", "00*"];
const ZERO: [&str; 3] = ["000", "000", "000"];
const ID: [&str; 3] = ["100", "010", "001"];
/// Diagonal block for `k = 1`, where one layer is both first and last: its
/// `*`-relation is itself non-rectangular, so `D[v,1], D[v,1]` witnesses.
const M_SINGLE: [&str; 3] = ["**0", "***", "0**"];

/// Gadget over `D = [n] × [k] × [3]` that admits a derectangularising
/// sequence exactly when `g` has an independent set of size `k`.
///
/// Part `(v, j, c)` has index `3(vk + j) + c` and is named `(v,j,c)` with
/// 1-based coordinates.
pub fn reduce_independent_set(g: &Graph, k: usize) -> Result<GadgetOutput> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let size = 3 * n * k;
    if size > MAX_PARTS {
        return Err(Error::TooManyParts { got: size });
    }
    let names: Vec<String> = (0..n)
        .flat_map(|v| {
            (0..k)
                .flat_map(move |j| (0..3).map(move |c| format!("({},{},{})", v + 1, j + 1, c + 1)))
        })
        .collect();
    let parts = PartSet::new(names)?;
    let block = |v: usize, j: usize, w: usize, l: usize| -> [&str; 3] {
        if v == w && j == l {
            if k == 1 {
                M_SINGLE
            } else if j == 0 {
                M_START
            } else if j == k - 1 {
                M_END
            } else {
                M_BIJ
            }
        } else if v != w && !g.has_edge(v, w) && j != l {
            if j.abs_diff(l) == 1 {
                M_BIJ
            } else {
                ZERO
            }
        } else {
            ID
        }
    };
    let mut entries = vec![Entry::Star; size * size];
    let idx = |v: usize, j: usize, c: usize| 3 * (v * k + j) + c;
    for v in 0..n {
        for j in 0..k {
            for w in 0..n {
                for l in 0..k {
                    let b = block(v, j, w, l);
                    for c in 0..3 {
                        for e in 0..3 {
                            let ch = b[c].as_bytes()[e] as char;
                            entries[idx(v, j, c) * size + idx(w, l, e)] =
                                Entry::from_char(ch).expect("block literal");
                        }
                    }
                }
            }
        }
    }
    let matrix = PartitionMatrix::new(parts, entries)?;
    let sets: Vec<PartSubset> = (0..n * k)
        .map(|b| PartSubset::from_indices(3 * b..3 * b + 3))
        .collect();
    let family = ListFamily::new(size, sets.iter().copied());
    Ok(GadgetOutput {
        matrix,
        family,
        sets,
    })
}
