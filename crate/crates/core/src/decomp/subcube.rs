use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trit {
    Zero,
    One,
    Free,
}

/// Vertices fixed by propagation, with their side value.
type Forced = Vec<(usize, bool)>;

impl Trit {
    fn fixed(bit: bool) -> Trit {
        if bit {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    pub fn allows(self, bit: bool) -> bool {
        match self {
            Trit::Zero => !bit,
            Trit::One => bit,
            Trit::Free => true,
        }
    }
}

/// Product `∏ S_u` with each `S_u` one of `{0}`, `{1}`, `{0,1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subcube(pub Vec<Trit>);

impl Subcube {
    pub fn free_count(&self) -> usize {
        self.0.iter().filter(|&&t| t == Trit::Free).count()
    }

    /// Whether the subcube is a single point.
    pub fn is_point(&self) -> bool {
        self.free_count() == 0
    }

    pub fn contains(&self, bits: &[bool]) -> bool {
        self.0.iter().zip(bits).all(|(t, &b)| t.allows(b))
    }

    pub fn intersects(&self, other: &Subcube) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| !matches!((a, b), (Trit::Zero, Trit::One) | (Trit::One, Trit::Zero)))
    }
}

impl fmt::Display for Subcube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            f.write_str(match t {
                Trit::Zero => "0",
                Trit::One => "1",
                Trit::Free => "f",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Subcube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubcubePair {
    pub left: Subcube,
    pub right: Subcube,
}

/// Subcube decomposition of the bipartite graph `(U, U', E)`.
///
/// Subcubes are indexed by position in `left` and `right`. Their disjoint
/// union is exactly the set of `σ: U ∪ U' → {0,1}` with no edge mapped to
/// `(0,0)` and no non-edge of `U × U'` mapped to `(1,1)`, and every pair has
/// a single point on at least one side.
pub fn subcube_decomposition(
    left: &[usize],
    right: &[usize],
    edges: &[(usize, usize)],
) -> Result<Vec<SubcubePair>> {
    let pos = |side: &[usize], v: usize| side.iter().position(|&w| w == v);
    if let Some(&v) = left.iter().find(|&&v| pos(right, v).is_some()) {
        return Err(Error::NotBipartiteShape(v, v));
    }
    let (a, b) = (left.len(), right.len());
    let mut adj = vec![vec![false; b]; a];
    for &(x, y) in edges {
        match (pos(left, x), pos(right, y)) {
            (Some(i), Some(j)) => adj[i][j] = true,
            _ => match (pos(left, y), pos(right, x)) {
                (Some(i), Some(j)) => adj[i][j] = true,
                _ => return Err(Error::NotBipartiteShape(x, y)),
            },
        }
    }
    let mut dec = Decomposer {
        adj,
        out: Vec::new(),
        calls: 0,
    };
    dec.rec(
        (0..a).collect(),
        (0..b).collect(),
        vec![Trit::Free; a],
        vec![Trit::Free; b],
    );
    assert!(
        dec.calls <= 4 * (a + b) + 1,
        "subcube recursion made {} calls on {} vertices",
        dec.calls,
        a + b
    );
    Ok(dec.out)
}

struct Decomposer {
    adj: Vec<Vec<bool>>,
    out: Vec<SubcubePair>,
    calls: usize,
}

impl Decomposer {
    fn rec(&mut self, au: Vec<usize>, aw: Vec<usize>, lu: Vec<Trit>, lw: Vec<Trit>) {
        self.calls += 1;
        let edges = au
            .iter()
            .map(|&i| aw.iter().filter(|&&j| self.adj[i][j]).count())
            .sum::<usize>();
        if edges == 0 {
            self.base(&au, &aw, lu, lw, false);
            return;
        }
        if edges == au.len() * aw.len() {
            self.base(&au, &aw, lu, lw, true);
            return;
        }
        let pick_u = au.iter().copied().find(|&i| {
            let deg = aw.iter().filter(|&&j| self.adj[i][j]).count();
            deg > 0 && deg < aw.len()
        });
        let (x, x_left) = match pick_u {
            Some(i) => (i, true),
            None => {
                let j = aw
                    .iter()
                    .copied()
                    .find(|&j| {
                        let deg = au.iter().filter(|&&i| self.adj[i][j]).count();
                        deg > 0 && deg < au.len()
                    })
                    .expect("a non-trivial graph has a mixed vertex");
                (j, false)
            }
        };
        for c in [false, true] {
            let (fu, fw) = self.propagate(&au, &aw, x, x_left, c);
            let mut nu = lu.clone();
            let mut nw = lw.clone();
            for &(i, bit) in &fu {
                nu[i] = Trit::fixed(bit);
            }
            for &(j, bit) in &fw {
                nw[j] = Trit::fixed(bit);
            }
            let ru: Vec<usize> = au
                .iter()
                .copied()
                .filter(|&i| nu[i] == Trit::Free)
                .collect();
            let rw: Vec<usize> = aw
                .iter()
                .copied()
                .filter(|&j| nw[j] == Trit::Free)
                .collect();
            self.rec(ru, rw, nu, nw);
        }
    }

    /// Forced values after setting `x := c`: a `0` forces its neighbours to
    /// `1`, a `1` forces its non-neighbours to `0`. In a bipartite graph the
    /// forced value depends only on the side, so no conflicts arise.
    fn propagate(
        &self,
        au: &[usize],
        aw: &[usize],
        x: usize,
        x_left: bool,
        c: bool,
    ) -> (Forced, Forced) {
        let mut su: Vec<Option<bool>> = vec![None; self.adj.len()];
        let mut sw: Vec<Option<bool>> = vec![None; self.adj.first().map_or(0, Vec::len)];
        let mut stack = vec![(x, x_left, c)];
        if x_left {
            su[x] = Some(c);
        } else {
            sw[x] = Some(c);
        }
        while let Some((y, y_left, val)) = stack.pop() {
            let others: &[usize] = if y_left { aw } else { au };
            for &z in others {
                let edge = if y_left {
                    self.adj[y][z]
                } else {
                    self.adj[z][y]
                };
                // 0 forces neighbours to 1; 1 forces non-neighbours to 0
                if edge != val {
                    let slot = if y_left { &mut sw[z] } else { &mut su[z] };
                    let forced = !val;
                    match *slot {
                        None => {
                            *slot = Some(forced);
                            stack.push((z, !y_left, forced));
                        }
                        Some(prev) => debug_assert_eq!(prev, forced),
                    }
                }
            }
        }
        let fu = au.iter().filter_map(|&i| su[i].map(|b| (i, b))).collect();
        let fw = aw.iter().filter_map(|&j| sw[j].map(|b| (j, b))).collect();
        (fu, fw)
    }

    /// Edgeless (`fill = false`) or complete (`fill = true`) active graph:
    /// the all-`fill` point, then the cube on each side minus that point.
    fn base(&mut self, au: &[usize], aw: &[usize], lu: Vec<Trit>, lw: Vec<Trit>, fill: bool) {
        let mut pu = lu;
        let mut pw = lw;
        for &i in au {
            pu[i] = Trit::fixed(fill);
        }
        for &j in aw {
            pw[j] = Trit::fixed(fill);
        }
        self.out.push(SubcubePair {
            left: Subcube(pu.clone()),
            right: Subcube(pw.clone()),
        });
        for k in 0..au.len() {
            let mut cu = pu.clone();
            cu[au[k]] = Trit::fixed(!fill);
            for &i in &au[k + 1..] {
                cu[i] = Trit::Free;
            }
            self.out.push(SubcubePair {
                left: Subcube(cu),
                right: Subcube(pw.clone()),
            });
        }
        for k in 0..aw.len() {
            let mut cw = pw.clone();
            cw[aw[k]] = Trit::fixed(!fill);
            for &j in &aw[k + 1..] {
                cw[j] = Trit::Free;
            }
            self.out.push(SubcubePair {
                left: Subcube(pu.clone()),
                right: Subcube(cw),
            });
        }
    }
}
