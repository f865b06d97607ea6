#![allow(dead_code)]

use listpart::{Entry, Graph, ListFamily, ListFunction, PartSet, PartSubset, PartitionMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix where each entry is `*` with probability `star` and
/// otherwise `0` or `1` with equal odds.
pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize, star: f64) -> PartitionMatrix {
    let mut entries = vec![Entry::Star; d * d];
    for i in 0..d {
        for j in i..d {
            let e = if rng.gen_bool(star) {
                Entry::Star
            } else if rng.gen_bool(0.5) {
                Entry::One
            } else {
                Entry::Zero
            };
            entries[i * d + j] = e;
            entries[j * d + i] = e;
        }
    }
    PartitionMatrix::new(PartSet::numbered(d).unwrap(), entries).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, d: usize) -> PartSubset {
    PartSubset::from_bits(rng.gen_range(0..1u128 << d))
}

/// Closure of one to three random non-empty sets.
pub fn random_family(rng: &mut ChaCha8Rng, d: usize) -> ListFamily {
    let k = rng.gen_range(1..=3);
    let sets: Vec<PartSubset> = (0..k)
        .map(|_| PartSubset::from_bits(rng.gen_range(1..1u128 << d)))
        .collect();
    ListFamily::new(d, sets)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Each list is a random subset of a random maximal member of `fam`.
pub fn random_lists(rng: &mut ChaCha8Rng, n: usize, fam: &ListFamily) -> ListFunction {
    let max = fam.maximal();
    ListFunction::new(
        (0..n)
            .map(|_| {
                if max.is_empty() {
                    return PartSubset::EMPTY;
                }
                let x = max[rng.gen_range(0..max.len())];
                if rng.gen_bool(0.5) {
                    x
                } else {
                    x & random_subset(rng, fam.n_parts())
                }
            })
            .collect(),
    )
}

/// Split graph: a clique on the first half, an independent set on the
/// rest, cross edges with probability `p`.
pub fn random_split_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let k = n / 2;
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let edge = if v < k {
                true
            } else if u >= k {
                false
            } else {
                rng.gen_bool(p)
            };
            if edge {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Two-colourability by breadth-first search on the subgraph induced by
/// `keep`, reading adjacency through `adjacent`.
pub fn two_colourable(n: usize, keep: &[bool], adjacent: impl Fn(usize, usize) -> bool) -> bool {
    let mut colour = vec![None; n];
    for s in 0..n {
        if !keep[s] || colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut queue = vec![s];
        while let Some(u) = queue.pop() {
            for v in 0..n {
                if v == u || !keep[v] || !adjacent(u, v) {
                    continue;
                }
                let want = !colour[u].unwrap();
                match colour[v] {
                    None => {
                        colour[v] = Some(want);
                        queue.push(v);
                    }
                    Some(c) if c != want => return false,
                    _ => {}
                }
            }
        }
    }
    true
}
