//! Counting CSP over the constraint language of `*`-relations: instance
//! model, arc consistency, factoring and the component-splitting counter.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::ListFunction;
use crate::graph::Graph;
use crate::matrix::{PartSet, PartitionMatrix};
use crate::relation::Relation;
use crate::subset::PartSubset;

/// Unrestricted instance: any number of unary and binary constraints,
/// including binary constraints whose scope repeats a variable.
#[derive(Clone, Debug)]
pub struct CspInstance {
    pub n_parts: usize,
    pub n_vars: usize,
    pub unary: Vec<(usize, PartSubset)>,
    pub binary: Vec<(usize, usize, Relation)>,
}

/// Binary constraint of a [`SimpleInstance`], always stored with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binary {
    pub u: usize,
    pub v: usize,
    pub rel: Relation,
}

/// One unary constraint per variable, no self-scoped binaries, and at most
/// one binary constraint per unordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleInstance {
    n_parts: usize,
    unary: Vec<PartSubset>,
    binary: Vec<Binary>,
}

impl SimpleInstance {
    /// Scopes `(v, u)` with `u < v` are flipped to `(u, v)` with the inverse
    /// relation. Repeated pairs and self-scopes are rejected.
    pub fn new(
        n_parts: usize,
        unary: Vec<PartSubset>,
        binary: Vec<(usize, usize, Relation)>,
    ) -> Result<Self> {
        let n = unary.len();
        let mut seen = HashMap::new();
        let mut out = Vec::with_capacity(binary.len());
        for (u, v, rel) in binary {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(Error::PreconditionViolated(
                    "binary constraint on a single variable",
                ));
            }
            let b = orient(u, v, rel);
            if seen.insert((b.u, b.v), ()).is_some() {
                return Err(Error::PreconditionViolated(
                    "two binary constraints on one pair",
                ));
            }
            out.push(b);
        }
        Ok(SimpleInstance {
            n_parts,
            unary,
            binary: out,
        })
    }

    pub fn n_parts(&self) -> usize {
        self.n_parts
    }

    pub fn n_vars(&self) -> usize {
        self.unary.len()
    }

    pub fn unary(&self) -> &[PartSubset] {
        &self.unary
    }

    pub fn binary(&self) -> &[Binary] {
        &self.binary
    }

    /// Replaces the unary constraint of `v`.
    pub fn pin(&self, v: usize, values: PartSubset) -> SimpleInstance {
        let mut out = self.clone();
        out.unary[v] = values;
        out
    }

    pub fn satisfied_by(&self, sigma: &[usize]) -> bool {
        sigma.iter().zip(&self.unary).all(|(&d, x)| x.contains(d))
            && self
                .binary
                .iter()
                .all(|b| b.rel.contains(sigma[b.u], sigma[b.v]))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vars()];
        for (c, b) in self.binary.iter().enumerate() {
            adj[b.u].push(c);
            adj[b.v].push(c);
        }
        adj
    }

    /// One line per constraint: `unary v: parts` or `binary u v: (a,b) ...`.
    pub fn dump(&self, parts: &PartSet) -> String {
        let mut out = String::new();
        for (v, x) in self.unary.iter().enumerate() {
            let _ = writeln!(out, "unary {v}: {}", parts.format_subset(*x));
        }
        for b in &self.binary {
            let pairs: Vec<String> = b
                .rel
                .pairs()
                .map(|(i, j)| format!("({},{})", parts.name(i), parts.name(j)))
                .collect();
            let _ = writeln!(out, "binary {} {}: {}", b.u, b.v, pairs.join(" "));
        }
        out
    }
}

fn orient(u: usize, v: usize, rel: Relation) -> Binary {
    if u < v {
        Binary { u, v, rel }
    } else {
        Binary {
            u: v,
            v: u,
            rel: rel.inverse(),
        }
    }
}

/// Equivalent simple instance with the same satisfying assignments.
pub fn simplify(inst: &CspInstance) -> SimpleInstance {
    let all = PartSubset::full(inst.n_parts);
    let mut unary = vec![all; inst.n_vars];
    for &(v, x) in &inst.unary {
        unary[v] &= x;
    }
    let mut pairs: HashMap<(usize, usize), Relation> = HashMap::new();
    let mut order = Vec::new();
    for (u, v, rel) in &inst.binary {
        if u == v {
            let diag: PartSubset = rel
                .domain_x()
                .iter()
                .filter(|&d| rel.contains(d, d))
                .collect();
            unary[*u] &= diag;
            continue;
        }
        let b = orient(*u, *v, rel.clone());
        match pairs.get_mut(&(b.u, b.v)) {
            Some(r) => *r = r.intersect(&b.rel),
            None => {
                order.push((b.u, b.v));
                pairs.insert((b.u, b.v), b.rel);
            }
        }
    }
    let binary = order
        .into_iter()
        .map(|(u, v)| Binary {
            u,
            v,
            rel: pairs.remove(&(u, v)).expect("recorded pair"),
        })
        .collect();
    SimpleInstance {
        n_parts: inst.n_parts,
        unary,
        binary,
    }
}

/// Values of `du` with a partner in `dv`, and the partners reached.
#[inline]
fn revise(rel: &Relation, du: PartSubset, dv: PartSubset) -> (PartSubset, PartSubset) {
    let mut keep = PartSubset::EMPTY;
    let mut image = PartSubset::EMPTY;
    for a in du.iter() {
        let r = rel.row(a) & dv;
        if !r.is_empty() {
            keep.insert(a);
            image |= r;
        }
    }
    (keep, image)
}

/// Greatest arc-consistent domains below the unary constraints.
pub fn arc_consistent_domains(inst: &SimpleInstance) -> Vec<PartSubset> {
    let mut doms = inst.unary.clone();
    let adj = inst.adjacency();
    let mut queued = vec![true; inst.n_vars()];
    let mut queue: VecDeque<usize> = (0..inst.n_vars()).collect();
    while let Some(x) = queue.pop_front() {
        queued[x] = false;
        for &c in &adj[x] {
            let b = &inst.binary[c];
            let (du, dv) = revise(&b.rel, doms[b.u], doms[b.v]);
            for (w, d) in [(b.u, du), (b.v, dv)] {
                if d != doms[w] {
                    doms[w] = d;
                    if !queued[w] {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    doms
}

/// Replaces every binary constraint that is a Cartesian product on the
/// current domains by two tightened unary constraints.
pub fn factor(inst: &SimpleInstance, doms: &[PartSubset]) -> SimpleInstance {
    let mut unary = inst.unary.clone();
    let mut binary = Vec::with_capacity(inst.binary.len());
    for b in &inst.binary {
        match b.rel.restrict(doms[b.u], doms[b.v]).as_cartesian_product() {
            Some((a, c)) => {
                unary[b.u] &= a;
                unary[b.v] &= c;
            }
            None => binary.push(b.clone()),
        }
    }
    SimpleInstance {
        n_parts: inst.n_parts,
        unary,
        binary,
    }
}

/// Number of satisfying assignments.
///
/// Polynomial when the governing lists and matrix admit no
/// derectangularising sequence; otherwise the recursion may hit the depth
/// guard of `|D| + 1` and report [`Error::DepthExceeded`].
pub fn ac_count(inst: &SimpleInstance) -> Result<BigUint> {
    count_rec(inst, 0, inst.n_parts + 1)
}

fn count_rec(inst: &SimpleInstance, depth: usize, limit: usize) -> Result<BigUint> {
    if depth > limit {
        return Err(Error::DepthExceeded { limit });
    }
    let n = inst.n_vars();
    if n == 0 {
        return Ok(BigUint::one());
    }
    let doms = arc_consistent_domains(inst);
    if doms.iter().any(|d| d.is_empty()) {
        return Ok(BigUint::zero());
    }
    let f = factor(inst, &doms);

    let mut comp = UnionFind::new(n);
    for b in &f.binary {
        comp.union(b.u, b.v);
    }
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut roots = Vec::new();
    for v in 0..n {
        let r = comp.find(v);
        members
            .entry(r)
            .or_insert_with(|| {
                roots.push(r);
                Vec::new()
            })
            .push(v);
    }
    let mut by_comp: HashMap<usize, Vec<&Binary>> = HashMap::new();
    for b in &f.binary {
        by_comp.entry(comp.find(b.u)).or_default().push(b);
    }

    let mut total = BigUint::one();
    for r in roots {
        let vars = &members[&r];
        if vars.len() == 1 {
            total *= BigUint::from(doms[vars[0]].len());
            continue;
        }
        assert!(
            vars.iter().all(|&v| doms[v].len() > 1),
            "a singleton-domain variable must be isolated after factoring"
        );
        let w = *vars
            .iter()
            .max_by_key(|&&v| (doms[v].len(), std::cmp::Reverse(v)))
            .expect("non-empty component");
        let local: HashMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sub = SimpleInstance {
            n_parts: inst.n_parts,
            unary: vars.iter().map(|&v| doms[v]).collect(),
            binary: by_comp[&r]
                .iter()
                .map(|b| Binary {
                    u: local[&b.u],
                    v: local[&b.v],
                    rel: b.rel.clone(),
                })
                .collect(),
        };
        let lw = local[&w];
        let mut part = BigUint::zero();
        for d in doms[w].iter() {
            let pinned = PartSubset::singleton(d);
            assert!(
                pinned.is_strict_subset(sub.unary[lw]),
                "pinning must shrink the domain"
            );
            part += count_rec(&sub.pin(lw, pinned), depth + 1, limit)?;
        }
        if part.is_zero() {
            return Ok(part);
        }
        total *= part;
    }
    Ok(total)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// CSP whose satisfying assignments are the list `M`-partitions of `g`
/// respecting `lists`. The image of `lists` must be `M`-purifying.
pub fn partition_to_csp(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
) -> Result<SimpleInstance> {
    Ok(build_csp(g, lists, m, false)?.expect("no early exit requested"))
}

/// As [`partition_to_csp`], but returns `None` as soon as a required
/// constraint is the empty relation, i.e. the count is zero.
pub(crate) fn partition_to_csp_or_zero(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
) -> Result<Option<SimpleInstance>> {
    build_csp(g, lists, m, true)
}

struct PairInfo {
    zero: bool,
    one: bool,
    rel: Relation,
}

fn build_csp(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
    stop_on_empty: bool,
) -> Result<Option<SimpleInstance>> {
    if lists.len() != g.n() {
        return Err(Error::ListCount {
            expected: g.n(),
            got: lists.len(),
        });
    }
    let mut distinct: Vec<PartSubset> = lists.iter().collect();
    distinct.sort();
    distinct.dedup();
    if !m.is_purifying(&distinct) {
        return Err(Error::NotPurifying);
    }
    let k = distinct.len();
    let class: Vec<usize> = lists
        .iter()
        .map(|l| distinct.binary_search(&l).expect("list is in the image"))
        .collect();
    let info: Vec<PairInfo> = (0..k * k)
        .map(|ab| {
            let (x, y) = (distinct[ab / k], distinct[ab % k]);
            PairInfo {
                zero: m.has_zero(x, y),
                one: m.has_one(x, y),
                rel: m.star_relation(x, y),
            }
        })
        .collect();
    let n = g.n();
    let mut binary = Vec::new();
    for u in 0..n {
        let cu = class[u] * k;
        for v in u + 1..n {
            let p = &info[cu + class[v]];
            let needed = if g.has_edge(u, v) { p.zero } else { p.one };
            if needed {
                if stop_on_empty && p.rel.is_empty() {
                    return Ok(None);
                }
                binary.push(Binary {
                    u,
                    v,
                    rel: p.rel.clone(),
                });
            }
        }
    }
    Ok(Some(SimpleInstance {
        n_parts: m.size(),
        unary: lists.as_slice().to_vec(),
        binary,
    }))
}

/// Output of [`csp_to_partition`].
#[derive(Clone, Debug)]
pub struct CspAsPartition {
    pub graph: Graph,
    pub lists: ListFunction,
    /// Product of `|X_v|` over variables without binary constraints.
    pub isolated_factor: BigUint,
    /// Vertex of each variable, `None` for stripped isolated variables.
    pub vertex_of_var: Vec<Option<usize>>,
}

/// List-partition problem equivalent to `inst`: the count of `inst` equals
/// `isolated_factor` times the number of list `M`-partitions of the output.
///
/// Every binary relation must be a `*`-relation `H^M_{X,Y}` of `m`, stored
/// with domains `X` and `Y`, and the resulting lists must be `M`-purifying.
pub fn csp_to_partition(inst: &SimpleInstance, m: &PartitionMatrix) -> Result<CspAsPartition> {
    let n = inst.n_vars();
    let mut touched = vec![false; n];
    let mut lists = inst.unary.clone();
    for b in &inst.binary {
        if b.rel != m.star_relation(b.rel.domain_x(), b.rel.domain_y()) {
            return Err(Error::PreconditionViolated(
                "binary relation is not a star relation of the matrix",
            ));
        }
        touched[b.u] = true;
        touched[b.v] = true;
        lists[b.u] &= b.rel.domain_x();
        lists[b.v] &= b.rel.domain_y();
    }
    let mut isolated_factor = BigUint::one();
    let mut vertex_of_var = vec![None; n];
    let mut kept = Vec::new();
    for v in 0..n {
        if touched[v] {
            vertex_of_var[v] = Some(kept.len());
            kept.push(v);
        } else {
            isolated_factor *= BigUint::from(inst.unary[v].len());
        }
    }
    let out_lists: Vec<PartSubset> = kept.iter().map(|&v| lists[v]).collect();
    let mut distinct = out_lists.clone();
    distinct.sort();
    distinct.dedup();
    if !m.is_purifying(&distinct) {
        return Err(Error::NotPurifying);
    }
    let mut constrained = HashMap::new();
    for b in &inst.binary {
        constrained.insert(
            (vertex_of_var[b.u].unwrap(), vertex_of_var[b.v].unwrap()),
            (),
        );
    }
    let mut graph = Graph::empty(kept.len());
    for a in 0..kept.len() {
        for b in a + 1..kept.len() {
            let (x, y) = (out_lists[a], out_lists[b]);
            let edge = if constrained.contains_key(&(a, b)) {
                m.has_zero(x, y)
            } else {
                m.has_one(x, y)
            };
            if edge {
                graph.add_edge(a, b)?;
            }
        }
    }
    Ok(CspAsPartition {
        graph,
        lists: ListFunction::new(out_lists),
        isolated_factor,
        vertex_of_var,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::known;
    use proptest::prelude::*;

    fn s(ix: &[usize]) -> PartSubset {
        PartSubset::from_indices(ix.iter().copied())
    }

    /// Enumerates every assignment over `D^n`.
    fn brute(inst: &SimpleInstance) -> u64 {
        let n = inst.n_vars();
        let d = inst.n_parts();
        let mut sigma = vec![0; n];
        let mut count = 0;
        loop {
            if inst.satisfied_by(&sigma) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                sigma[i] += 1;
                if sigma[i] < d {
                    break;
                }
                sigma[i] = 0;
                i += 1;
            }
        }
    }

    fn triangle() -> SimpleInstance {
        let d = s(&[0, 1]);
        let ne = Relation::from_pairs(2, d, d, [(0, 1), (1, 0)]).unwrap();
        SimpleInstance::new(
            2,
            vec![d; 3],
            vec![(0, 1, ne.clone()), (1, 2, ne.clone()), (2, 0, ne)],
        )
        .unwrap()
    }

    #[test]
    fn triangle_is_arc_consistent_but_unsatisfiable() {
        let t = triangle();
        assert_eq!(arc_consistent_domains(&t), vec![s(&[0, 1]); 3]);
        assert_eq!(ac_count(&t).unwrap(), BigUint::zero());
    }

    #[test]
    fn empty_relation_prunes_everything() {
        let d = s(&[0, 1]);
        let inst =
            SimpleInstance::new(2, vec![d, d, d], vec![(0, 1, Relation::empty(2, d, d))]).unwrap();
        let doms = arc_consistent_domains(&inst);
        assert!(doms[0].is_empty() && doms[1].is_empty());
        assert_eq!(doms[2], d);
    }

    #[test]
    fn single_unconstrained_variable() {
        let inst = SimpleInstance::new(2, vec![s(&[0, 1])], vec![]).unwrap();
        assert_eq!(ac_count(&inst).unwrap(), BigUint::from(2u32));
        let none = SimpleInstance::new(2, vec![], vec![]).unwrap();
        assert_eq!(ac_count(&none).unwrap(), BigUint::one());
    }

    #[test]
    fn singleton_domain_factors_away() {
        let d = s(&[0, 1]);
        let r = Relation::from_pairs(2, d, d, [(0, 1), (1, 0)]).unwrap();
        let inst = SimpleInstance::new(2, vec![s(&[0]), d], vec![(0, 1, r)]).unwrap();
        let f = factor(&inst, &arc_consistent_domains(&inst));
        assert!(f.binary().is_empty());
        assert_eq!(f.unary(), &[s(&[0]), s(&[1])]);
    }

    #[test]
    fn simplify_merges_opposite_scopes() {
        let d = s(&[0, 1, 2]);
        let r = Relation::from_pairs(3, d, d, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let t = Relation::from_pairs(3, d, d, [(1, 0), (2, 1)]).unwrap();
        let inst = CspInstance {
            n_parts: 3,
            n_vars: 2,
            unary: vec![(0, s(&[0, 1]))],
            binary: vec![(0, 1, r.clone()), (1, 0, t.clone())],
        };
        let simple = simplify(&inst);
        assert_eq!(simple.unary(), &[s(&[0, 1]), d]);
        assert_eq!(simple.binary().len(), 1);
        assert_eq!(simple.binary()[0].rel, r.intersect(&t.inverse()));
        assert_eq!(
            simplify(&CspInstance {
                n_parts: 3,
                n_vars: 2,
                unary: simple.unary().iter().copied().enumerate().collect(),
                binary: simple
                    .binary()
                    .iter()
                    .map(|b| (b.u, b.v, b.rel.clone()))
                    .collect(),
            }),
            simple
        );
    }

    #[test]
    fn self_scope_becomes_unary() {
        let d = s(&[0, 1, 2]);
        let r = Relation::from_pairs(3, d, d, [(0, 0), (1, 2), (2, 2)]).unwrap();
        let inst = CspInstance {
            n_parts: 3,
            n_vars: 1,
            unary: vec![],
            binary: vec![(0, 0, r)],
        };
        assert_eq!(simplify(&inst).unary(), &[s(&[0, 2])]);
    }

    #[test]
    fn split_path_counts_three() {
        let m = known::split();
        let g = Graph::path(3);
        let lists = ListFunction::constant(3, m.all());
        assert!(matches!(
            partition_to_csp(&g, &lists, &m),
            Err(Error::NotPurifying)
        ));
        // purified branches: every singleton assignment
        let mut total = BigUint::zero();
        for bits in 0..8usize {
            let l = ListFunction::new(
                (0..3)
                    .map(|v| PartSubset::singleton(bits >> v & 1))
                    .collect(),
            );
            total += ac_count(&partition_to_csp(&g, &l, &m).unwrap()).unwrap();
        }
        assert_eq!(total, BigUint::from(3u32));
    }

    #[test]
    fn adjacent_independent_vertices_give_empty_relation() {
        let m = known::split();
        let g = Graph::path(2);
        let l = ListFunction::constant(2, s(&[0]));
        let inst = partition_to_csp(&g, &l, &m).unwrap();
        assert!(inst.binary()[0].rel.is_empty());
        assert!(ac_count(&inst).unwrap().is_zero());
        assert!(partition_to_csp_or_zero(&g, &l, &m).unwrap().is_none());
    }

    #[test]
    fn free_product_constraint() {
        let m = known::colouring(3);
        let x = s(&[0, 1]);
        let y = s(&[2]);
        let inst = SimpleInstance::new(3, vec![x, y], vec![(0, 1, m.star_relation(x, y))]).unwrap();
        let back = csp_to_partition(&inst, &m).unwrap();
        assert_eq!(back.lists.as_slice(), &[x, y]);
        assert_eq!(back.graph.edge_count(), 0);
    }

    fn arb_instance() -> impl Strategy<Value = SimpleInstance> {
        (1usize..=3, 0usize..=6).prop_flat_map(|(d, n)| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let np = pairs.len();
            (
                proptest::collection::vec(0u32..(1 << d), n),
                proptest::collection::vec(proptest::option::of(0u32..(1 << (d * d))), np),
            )
                .prop_map(move |(un, bins)| {
                    let all = PartSubset::full(d);
                    let unary = un
                        .iter()
                        .map(|&b| PartSubset::from_bits(b as u128))
                        .collect();
                    let binary = pairs
                        .iter()
                        .zip(bins)
                        .filter_map(|(&(u, v), b)| {
                            let b = b?;
                            let r = Relation::from_pairs(
                                d,
                                all,
                                all,
                                (0..d * d)
                                    .filter(|k| b >> k & 1 == 1)
                                    .map(|k| (k / d, k % d)),
                            )
                            .unwrap();
                            Some((u, v, r))
                        })
                        .collect();
                    SimpleInstance::new(d, unary, binary).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn factoring_and_domains_are_sound(inst in arb_instance()) {
            let doms = arc_consistent_domains(&inst);
            let f = factor(&inst, &doms);
            let n = inst.n_vars();
            let d = inst.n_parts();
            let total = d.pow(n as u32);
            for code in 0..total {
                let sigma: Vec<usize> = (0..n).map(|i| code / d.pow(i as u32) % d).collect();
                let sat = inst.satisfied_by(&sigma);
                prop_assert_eq!(sat, f.satisfied_by(&sigma));
                if sat {
                    prop_assert!(sigma.iter().zip(&doms).all(|(&x, dom)| dom.contains(x)));
                }
            }
        }

        #[test]
        fn domains_ignore_constraint_order(inst in arb_instance()) {
            let mut rev = inst.clone();
            rev.binary.reverse();
            prop_assert_eq!(arc_consistent_domains(&inst), arc_consistent_domains(&rev));
        }

        #[test]
        fn count_matches_enumeration(inst in arb_instance()) {
            // arbitrary relations may need deeper recursion than the guard allows
            let c = count_rec(&inst, 0, usize::MAX).unwrap();
            prop_assert_eq!(c, BigUint::from(brute(&inst)));
        }
    }
}
