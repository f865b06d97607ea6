use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n` with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
            edges: Vec::new(),
        }
    }

    /// Rejects self-loops, duplicate edges and out-of-range endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u, v));
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        self.edges.push((u.min(v), u.max(v)));
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adjacency row of `v` as bitset words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &w)| {
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

    /// Subgraph induced by `vertices`; vertex `i` of the result is
    /// `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j).expect("induced edge is fresh");
                }
            }
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).expect("complement edge is fresh");
                }
            }
        }
        g
    }

    /// Disjoint union, with `other` shifted past `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        Graph::new(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift))),
        )
        .expect("disjoint union is simple")
    }
}
