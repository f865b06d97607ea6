//! Reduction of a list-partition instance to instances whose lists are
//! `M`-purifying.
//!
//! Every list `M`-partition respecting the input lists respects exactly one
//! of the output list functions, and each output only uses lists from a
//! strictly smaller family, so the recursion in [`purify`] terminates.

use crate::decomp::{bicobipartite_partitions, subcube_decomposition, Trit};
use crate::error::{Error, Result};
use crate::family::{ListFamily, ListFunction};
use crate::graph::Graph;
use crate::matrix::{Entry, PartitionMatrix};
use crate::subset::PartSubset;

/// One purification step for a family that is not `M`-purifying.
///
/// Requires that no length-2 derectangularising sequence exists for `fam`;
/// a detected violation of the structure this guarantees is reported as
/// [`Error::HypothesisViolated`].
pub fn purify_step(
    g: &Graph,
    lists: &ListFunction,
    fam: &ListFamily,
    m: &PartitionMatrix,
) -> Result<Vec<ListFunction>> {
    if fam.is_purifying(m) {
        return Err(Error::PreconditionViolated(
            "purify_step needs a family that is not purifying",
        ));
    }
    if lists.len() != g.n() {
        return Err(Error::ListCount {
            expected: g.n(),
            got: lists.len(),
        });
    }
    if lists.has_empty_list() {
        return Ok(Vec::new());
    }
    let max = fam.maximal();
    if let Some((x, d)) = mixed_column(m, max) {
        return Ok(case_one(g, lists, m, x, d));
    }
    if let Some(&x) = max.iter().find(|&&x| !m.is_pure(x, x)) {
        return case_two(g, lists, m, x);
    }
    for (a, &x) in max.iter().enumerate() {
        for &y in &max[a + 1..] {
            if !m.is_pure(x, y) {
                return case_three(g, lists, m, x, y);
            }
        }
    }
    unreachable!("a family that is not purifying has an impure pair of maximal members")
}

/// First maximal `X`, `Y` and `d ∈ Y` whose column `d` restricted to `X`
/// holds both a `0` and a `1`.
fn mixed_column(m: &PartitionMatrix, max: &[PartSubset]) -> Option<(PartSubset, usize)> {
    for &x in max {
        for &y in max {
            for d in y.iter() {
                if m.zeros_in_row(d).intersects(x) && m.ones_in_row(d).intersects(x) {
                    return Some((x, d));
                }
            }
        }
    }
    None
}

/// Branches on the first vertex placed in part `d`, plus one branch where no
/// vertex uses `d`.
fn case_one(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
    _x: PartSubset,
    d: usize,
) -> Vec<ListFunction> {
    let n = g.n();
    let dset = PartSubset::singleton(d);
    let not_zero = !m.zeros_in_row(d);
    let not_one = !m.ones_in_row(d);
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut li = lists.clone();
        li.set(i, lists[i] & dset);
        for j in 0..n {
            if j == i {
                continue;
            }
            let compatible = if g.has_edge(i, j) { not_zero } else { not_one };
            let mut l = lists[j] & compatible;
            if j < i {
                l = l - dset;
            }
            li.set(j, l);
        }
        if !li.has_empty_list() {
            out.push(li);
        }
    }
    let last = ListFunction::new(lists.iter().map(|l| l - dset).collect());
    if !last.has_empty_list() {
        out.push(last);
    }
    out
}

fn case_two(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
    x: PartSubset,
) -> Result<Vec<ListFunction>> {
    let x0 = m.rows_with_zero(x, x);
    let x1 = x - x0;
    if let Some(d) = x.iter().find(|&d| m.entry(d, d) == Entry::Star) {
        return Err(Error::HypothesisViolated(format!(
            "diagonal entry {d} of an impure list block is *"
        )));
    }
    if x0.iter().any(|i| (m.stars_in_row(i) & x1) != x1) {
        return Err(Error::HypothesisViolated(
            "the block between zero rows and other rows is not all *".into(),
        ));
    }
    let vx: Vec<usize> = (0..g.n()).filter(|&v| lists[v] == x).collect();
    if vx.is_empty() {
        return Ok(vec![lists.clone()]);
    }
    let sub = g.induced(&vx);
    Ok(bicobipartite_partitions(&sub)
        .iter()
        .map(|p| {
            let mut li = lists.clone();
            for (k, &v) in vx.iter().enumerate() {
                li.set(v, if p.in_b(k) { x0 } else { x1 });
            }
            li
        })
        .collect())
}

fn case_three(
    g: &Graph,
    lists: &ListFunction,
    m: &PartitionMatrix,
    x: PartSubset,
    y: PartSubset,
) -> Result<Vec<ListFunction>> {
    let x0 = m.rows_with_zero(x, y);
    let x1 = x - x0;
    let y0 = m.rows_with_zero(y, x);
    let y1 = y - y0;
    let all_zero = x0.iter().all(|i| (m.zeros_in_row(i) & y0) == y0);
    let all_one = x1.iter().all(|i| (m.ones_in_row(i) & y1) == y1);
    if !all_zero || !all_one {
        return Err(Error::HypothesisViolated(
            "impure off-diagonal list block lacks the 0/1 corner structure".into(),
        ));
    }
    let vx: Vec<usize> = (0..g.n()).filter(|&v| lists[v] == x).collect();
    let vy: Vec<usize> = (0..g.n()).filter(|&v| lists[v] == y).collect();
    if vx.is_empty() || vy.is_empty() {
        return Ok(vec![lists.clone()]);
    }
    let edges: Vec<(usize, usize)> = vx
        .iter()
        .flat_map(|&u| vy.iter().map(move |&w| (u, w)))
        .filter(|&(u, w)| g.has_edge(u, w))
        .collect();
    let cubes = subcube_decomposition(&vx, &vy, &edges)?;
    let refine = |t: Trit, full: PartSubset, zero: PartSubset, one: PartSubset| match t {
        Trit::Zero => zero,
        Trit::One => one,
        Trit::Free => full,
    };
    Ok(cubes
        .iter()
        .map(|pair| {
            let mut li = lists.clone();
            for (k, &v) in vx.iter().enumerate() {
                li.set(v, refine(pair.left.0[k], x, x0, x1));
            }
            for (k, &v) in vy.iter().enumerate() {
                li.set(v, refine(pair.right.0[k], y, y0, y1));
            }
            li
        })
        .collect())
}

/// List functions with `M`-purifying images whose respecting partitions
/// split those of `lists`.
pub fn purify(
    g: &Graph,
    lists: &ListFunction,
    fam: &ListFamily,
    m: &PartitionMatrix,
) -> Result<Vec<ListFunction>> {
    if fam.is_purifying(m) {
        return Ok(vec![lists.clone()]);
    }
    let mut out = Vec::new();
    for li in purify_step(g, lists, fam, m)? {
        let sub = ListFamily::from_image(m.size(), &li);
        assert!(
            sub.is_strict_subfamily(fam),
            "purification must shrink the list family"
        );
        out.extend(purify(g, &li, &sub, m)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::known;

    fn s(ix: &[usize]) -> PartSubset {
        PartSubset::from_indices(ix.iter().copied())
    }

    fn respecting(g: &Graph, lists: &ListFunction, m: &PartitionMatrix) -> Vec<Vec<usize>> {
        let n = g.n();
        let d = m.size();
        let mut out = Vec::new();
        for code in 0..d.pow(n as u32) {
            let sigma: Vec<usize> = (0..n).map(|i| code / d.pow(i as u32) % d).collect();
            if !lists.respects(&sigma) {
                continue;
            }
            let ok = (0..n).all(|u| {
                (u + 1..n).all(|v| match m.entry(sigma[u], sigma[v]) {
                    Entry::Zero => !g.has_edge(u, v),
                    Entry::One => g.has_edge(u, v),
                    Entry::Star => true,
                })
            });
            if ok {
                out.push(sigma);
            }
        }
        out
    }

    #[test]
    fn split_path_case_two() {
        let m = known::split();
        let g = Graph::path(3);
        let l = ListFunction::constant(3, m.all());
        let fam = ListFamily::full(2);
        let step = purify_step(&g, &l, &fam, &m).unwrap();
        assert_eq!(step.len(), 8);
        assert!(step.iter().all(|li| li.iter().all(|x| x.len() == 1)));
        let out = purify(&g, &l, &fam, &m).unwrap();
        assert_eq!(out.len(), 8);
        for sigma in respecting(&g, &l, &m) {
            assert_eq!(out.iter().filter(|li| li.respects(&sigma)).count(), 1);
        }
    }

    #[test]
    fn empty_list_gives_no_branches() {
        let m = known::split();
        let g = Graph::path(2);
        let l = ListFunction::new(vec![m.all(), PartSubset::EMPTY]);
        assert!(purify_step(&g, &l, &ListFamily::full(2), &m)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn case_two_without_vertices_returns_input() {
        let m = known::split();
        let g = Graph::path(2);
        let l = ListFunction::new(vec![s(&[0]), s(&[1])]);
        let out = purify_step(&g, &l, &ListFamily::full(2), &m).unwrap();
        assert_eq!(out, vec![l]);
    }

    #[test]
    fn single_vertex_splits_into_singletons() {
        let m = known::split();
        let g = Graph::empty(1);
        let l = ListFunction::constant(1, m.all());
        let out = purify(&g, &l, &ListFamily::full(2), &m).unwrap();
        let mut lists: Vec<PartSubset> = out.iter().map(|li| li[0]).collect();
        lists.sort();
        assert_eq!(lists, vec![s(&[0]), s(&[1])]);
    }

    #[test]
    fn purifying_family_is_returned_unchanged() {
        let m = known::split();
        let g = Graph::path(2);
        let l = ListFunction::new(vec![s(&[0]), s(&[1])]);
        let fam = ListFamily::new(2, [s(&[0]), s(&[1])]);
        assert_eq!(purify(&g, &l, &fam, &m).unwrap(), vec![l.clone()]);
        assert!(matches!(
            purify_step(&g, &l, &fam, &m),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn case_one_and_three_cover_exactly_once() {
        // parts 0,1 form a pure block, part 2 sees 0 as 1 and 1 as 0 (mixed column)
        let m = PartitionMatrix::from_rows(&["a", "b", "c"], &["**1", "**0", "10*"]).unwrap();
        for (n, edges) in [(3, vec![(0, 1)]), (4, vec![(0, 1), (1, 2), (2, 3)])] {
            let g = Graph::new(n, edges).unwrap();
            let l = ListFunction::constant(n, m.all());
            let out = purify(&g, &l, &ListFamily::full(3), &m).unwrap();
            for li in &out {
                let mut img: Vec<PartSubset> = li.iter().collect();
                img.dedup();
                assert!(m.is_purifying(&img));
            }
            for sigma in respecting(&g, &l, &m) {
                assert_eq!(out.iter().filter(|li| li.respects(&sigma)).count(), 1);
            }
        }
    }
}
