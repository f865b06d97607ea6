use crate::graph::Graph;

/// Partition `(B, C)` of the vertices with `G[B]` bipartite and the
/// complement of `G[C]` bipartite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BicobipPartition {
    in_b: Vec<bool>,
}

impl BicobipPartition {
    pub fn from_membership(in_b: Vec<bool>) -> Self {
        BicobipPartition { in_b }
    }

    pub fn in_b(&self, v: usize) -> bool {
        self.in_b[v]
    }

    pub fn b(&self) -> Vec<usize> {
        (0..self.in_b.len()).filter(|&v| self.in_b[v]).collect()
    }

    pub fn c(&self) -> Vec<usize> {
        (0..self.in_b.len()).filter(|&v| !self.in_b[v]).collect()
    }

    /// One character per vertex, `1` for `B` and `0` for `C`.
    pub fn to_bit_string(&self) -> String {
        self.in_b
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// Union-find with parity and an undo log, so placements can be retracted
/// in reverse order.
struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<u8>,
    rank: Vec<u8>,
    log: Vec<Option<(usize, usize)>>,
}

impl ParityDsu {
    fn new(n: usize) -> Self {
        ParityDsu {
            parent: (0..n).collect(),
            parity: vec![0; n],
            rank: vec![0; n],
            log: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> (usize, u8) {
        let mut p = 0;
        while self.parent[x] != x {
            p ^= self.parity[x];
            x = self.parent[x];
        }
        (x, p)
    }

    /// Requires `a` and `b` on opposite sides. Returns `false` on an odd cycle.
    fn separate(&mut self, a: usize, b: usize) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            self.log.push(None);
            return pa != pb;
        }
        let (lo, hi) = if self.rank[ra] < self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        let bumped = self.rank[lo] == self.rank[hi];
        self.parent[lo] = hi;
        self.parity[lo] = pa ^ pb ^ 1;
        if bumped {
            self.rank[hi] += 1;
        }
        self.log.push(Some((lo, usize::from(bumped))));
        true
    }

    fn mark(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            if let Some((lo, bumped)) = self.log.pop().expect("non-empty log") {
                let hi = self.parent[lo];
                if bumped == 1 {
                    self.rank[hi] -= 1;
                }
                self.parent[lo] = lo;
                self.parity[lo] = 0;
            }
        }
    }
}

/// All bipartite-cobipartite partitions, sorted by the bit string of `B`.
///
/// Vertices are placed one at a time, `C` before `B`, and a branch is cut
/// as soon as the placed part of `B` has an odd cycle or the placed part of
/// `C` has an odd anticycle. Both properties are hereditary, so every
/// surviving node is a partition of a prefix subgraph; a bipartite set and
/// a cobipartite set share at most four vertices, which bounds the number of
/// such partitions polynomially.
pub fn bicobipartite_partitions(g: &Graph) -> Vec<BicobipPartition> {
    // alternate dense and sparse vertices so that odd cycles in B and odd
    // anticycles in C show up early in the search
    let mut by_degree: Vec<usize> = (0..g.n()).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut order = Vec::with_capacity(g.n());
    let (mut lo, mut hi) = (0, g.n());
    while lo < hi {
        order.push(by_degree[lo]);
        lo += 1;
        if lo < hi {
            hi -= 1;
            order.push(by_degree[hi]);
        }
    }
    let h = g.induced(&order);
    let mut out: Vec<BicobipPartition> = enumerate(&h)
        .into_iter()
        .map(|p| {
            let mut in_b = vec![false; g.n()];
            for (k, &v) in order.iter().enumerate() {
                in_b[v] = p.in_b[k];
            }
            BicobipPartition { in_b }
        })
        .collect();
    out.sort_by(|a, b| a.in_b.cmp(&b.in_b));
    out
}

fn enumerate(g: &Graph) -> Vec<BicobipPartition> {
    let n = g.n();
    let words = n.div_ceil(64).max(1);
    let mut search = Search {
        g,
        words,
        b_mask: vec![0; words],
        c_mask: vec![0; words],
        dsu: ParityDsu::new(n),
        in_b: vec![false; n],
        out: Vec::new(),
    };
    search.run(0);
    search.out
}

struct Search<'a> {
    g: &'a Graph,
    words: usize,
    b_mask: Vec<u64>,
    c_mask: Vec<u64>,
    dsu: ParityDsu,
    in_b: Vec<bool>,
    out: Vec<BicobipPartition>,
}

impl Search<'_> {
    fn run(&mut self, v: usize) {
        if v == self.g.n() {
            self.out.push(BicobipPartition {
                in_b: self.in_b.clone(),
            });
            return;
        }
        for to_b in [false, true] {
            let mark = self.dsu.mark();
            if self.place(v, to_b) {
                let (w, bit) = (v / 64, 1u64 << (v % 64));
                let mask = if to_b {
                    &mut self.b_mask
                } else {
                    &mut self.c_mask
                };
                mask[w] |= bit;
                self.in_b[v] = to_b;
                self.run(v + 1);
                let mask = if to_b {
                    &mut self.b_mask
                } else {
                    &mut self.c_mask
                };
                mask[w] &= !bit;
                self.in_b[v] = false;
            }
            self.dsu.rollback(mark);
        }
    }

    /// Adds the parity constraints of `v` against placed vertices of its side:
    /// neighbours in `B`, non-neighbours in `C`.
    fn place(&mut self, v: usize, to_b: bool) -> bool {
        let row = self.g.row(v);
        for (i, &r) in row.iter().enumerate().take(self.words) {
            let mut w = if to_b {
                r & self.b_mask[i]
            } else {
                !r & self.c_mask[i]
            };
            while w != 0 {
                let u = i * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                if !self.dsu.separate(v, u) {
                    return false;
                }
            }
        }
        true
    }
}
