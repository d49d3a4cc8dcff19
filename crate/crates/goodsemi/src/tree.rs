//! Multiplicity trees: admissible splitting numbers, compatibility of a
//! splitting matrix, building and reading trees, and the passage between
//! trees and semigroups through blow-ups.

use crate::branch::{is_plane_sequence, PlaneSequence};
use crate::error::{Error, Result};
use crate::semigroup::GoodSemigroup;
use crate::transfer::{blow_down_semigroup, blow_up_semigroup, split_product};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleReport {
    pub ok: bool,
    pub failing_clause: Option<u8>,
}

fn cond1(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> bool {
    (1..k).all(|i| {
        let i = i as usize;
        (e.get(i - 1) == e.get(i)) == (f.get(i - 1) == f.get(i))
    })
}

fn cond2(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> bool {
    (0..=k).all(|j| e.restriction(j as usize) == f.restriction(j as usize))
}

/// Past this index both sequences are 1's with free entries, so clauses 1
/// and 2 never start failing there.
fn horizon(e: &PlaneSequence, f: &PlaneSequence) -> i64 {
    let len = |s: &PlaneSequence| s.report().restriction_numbers.len().max(s.prefix().len());
    (len(e).max(len(f)) + 2) as i64
}

fn maximal(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> bool {
    k < horizon(e, f) && !(cond1(e, f, k + 1) && cond2(e, f, k + 1))
}

fn free(s: &PlaneSequence, j: i64) -> bool {
    s.restriction(j as usize) == 1
}

/// Admissibility by the three-clause form: clauses 1 and 2, and either `k`
/// is maximal with them or both `(k+1)`-th points are free.
pub fn admissible_short(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> Option<u8> {
    if k == -1 {
        return None;
    }
    if !cond1(e, f, k) {
        return Some(1);
    }
    if !cond2(e, f, k) {
        return Some(2);
    }
    if maximal(e, f, k) || (free(e, k + 1) && free(f, k + 1)) {
        None
    } else {
        Some(3)
    }
}

/// Admissibility by the four-clause form.
pub fn admissible_long(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> Option<u8> {
    if k == -1 {
        return None;
    }
    if !cond1(e, f, k) {
        return Some(1);
    }
    if !cond2(e, f, k) {
        return Some(2);
    }
    let u = k as usize;
    if k >= 1 && e.get(u - 1) > e.get(u) && f.get(u - 1) != f.get(u) {
        return Some(3);
    }
    let sat = |s: &PlaneSequence, j: usize| s.restriction(j) == 2;
    if k >= 1
        && sat(e, u)
        && sat(f, u)
        && sat(e, u + 1)
        && sat(f, u + 1)
        && e.get(u - 1) == e.get(u)
        && f.get(u - 1) <= f.get(u)
    {
        return Some(4);
    }
    None
}

/// Uses the three-clause form; the four-clause form is evaluated alongside
/// and a disagreement panics, since the two are proved equivalent.
pub fn is_admissible(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> AdmissibleReport {
    let short = admissible_short(e, f, k);
    let long = admissible_long(e, f, k);
    assert_eq!(short.is_none(), long.is_none(), "admissibility forms disagree on {e:?}, {f:?}, k={k}");
    AdmissibleReport { ok: short.is_none(), failing_clause: short }
}

/// First triple `(i, j, t)` with `k_{j,t} > k_{j,i}` but `k_{i,t} ≠ k_{i,j}`.
pub fn check_compatibility(k: &[Vec<i64>]) -> Option<(usize, usize, usize)> {
    let d = k.len();
    for i in 0..d {
        for j in 0..d {
            for t in 0..d {
                if i == j || j == t || i == t {
                    continue;
                }
                if k[j][t] > k[j][i] && k[i][t] != k[i][j] {
                    return Some((i, j, t));
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    pub e: Vec<PlaneSequence>,
    /// Symmetric, entries ≥ −1; the diagonal is ignored.
    pub k: Vec<Vec<i64>>,
}

fn check_shape(d: usize, k: &[Vec<i64>]) -> Result<()> {
    if k.len() != d || k.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidTree(format!("splitting matrix must be {d}x{d}")));
    }
    for i in 0..d {
        for j in 0..i {
            if k[i][j] != k[j][i] {
                return Err(Error::InvalidTree(format!("splitting matrix not symmetric at ({},{})", j + 1, i + 1)));
            }
            if k[i][j] < -1 {
                return Err(Error::InvalidTree(format!("k_{},{} < -1", j + 1, i + 1)));
            }
        }
    }
    Ok(())
}

/// Shape, pairwise admissibility and compatibility.
pub fn check_splitting_data(e: &[PlaneSequence], k: &[Vec<i64>]) -> Result<()> {
    check_shape(e.len(), k)?;
    for i in 0..e.len() {
        for j in 0..i {
            if !is_admissible(&e[j], &e[i], k[j][i]).ok {
                return Err(Error::NotAdmissible { i: j + 1, j: i + 1, k: k[j][i] });
            }
        }
    }
    match check_compatibility(k) {
        Some((i, j, t)) => Err(Error::NotCompatible(i + 1, j + 1, t + 1)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Node {
    pub depth: usize,
    /// Sorted branch indices through this vertex.
    pub branches: Vec<usize>,
    pub parent: Option<usize>,
    pub weight: Vec<u32>,
}

impl Node {
    pub fn id(&self, d: usize) -> String {
        let sep = if d >= 10 { "," } else { "" };
        let b: Vec<String> = self.branches.iter().map(|i| (i + 1).to_string()).collect();
        format!("{}:{}", self.depth, b.join(sep))
    }
}

/// Depths `0..tail_from`; past that every vertex is a single branch of
/// multiplicity 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTree {
    pub d: usize,
    pub nodes: Vec<Node>,
}

impl MultiplicityTree {
    pub fn tail_from(&self) -> usize {
        self.nodes.iter().map(|n| n.depth + 1).max().unwrap_or(0)
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].parent.is_none()).collect()
    }

    /// Node list sorted by depth then branch set, with parents re-linked.
    fn canonical(d: usize, mut nodes: Vec<Node>) -> MultiplicityTree {
        let keyed: Vec<(usize, Vec<usize>)> = nodes.iter().map(|n| (n.depth, n.branches.clone())).collect();
        let parent_keys: Vec<Option<(usize, Vec<usize>)>> = nodes.iter().map(|n| n.parent.map(|p| keyed[p].clone())).collect();
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| keyed[a].cmp(&keyed[b]));
        let mut sorted: Vec<Node> = order.iter().map(|&i| nodes[i].clone()).collect();
        let pk: Vec<Option<(usize, Vec<usize>)>> = order.iter().map(|&i| parent_keys[i].clone()).collect();
        let index = |key: &(usize, Vec<usize>)| sorted.iter().position(|n| n.depth == key.0 && n.branches == key.1);
        let parents: Vec<Option<usize>> = pk.iter().map(|k| k.as_ref().and_then(index)).collect();
        for (n, p) in sorted.iter_mut().zip(parents) {
            n.parent = p;
        }
        nodes.clear();
        MultiplicityTree { d, nodes: sorted }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        for (g, root) in self.roots().into_iter().enumerate() {
            let _ = writeln!(out, "digraph tree{} {{", g);
            let _ = writeln!(out, "  node [shape=box];");
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                let n = &self.nodes[v];
                let w: Vec<String> = n.weight.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "  \"{}\" [label=\"({})\"];", n.id(self.d), w.join(","));
                for (c, m) in self.nodes.iter().enumerate() {
                    if m.parent == Some(v) {
                        let b: Vec<String> = m.branches.iter().map(|i| (i + 1).to_string()).collect();
                        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", n.id(self.d), m.id(self.d), b.join(","));
                        stack.push(c);
                    }
                }
            }
            let _ = writeln!(out, "}}");
        }
        out
    }
}

/// Vertices at depth `t` are the classes of `i ∼_t j ⇔ k_{i,j} ≥ t`.
pub fn build_tree(data: &SplittingData) -> Result<MultiplicityTree> {
    let d = data.e.len();
    check_shape(d, &data.k)?;
    if let Some((i, j, t)) = check_compatibility(&data.k) {
        return Err(Error::NotCompatible(i + 1, j + 1, t + 1));
    }
    let mut last = data.e.iter().map(|s| s.prefix().len() - 1).max().unwrap_or(0);
    for i in 0..d {
        for j in 0..i {
            last = last.max((data.k[i][j] + 1).max(0) as usize);
        }
    }
    let mut nodes: Vec<Node> = Vec::new();
    let mut prev: Vec<usize> = Vec::new();
    for t in 0..=last {
        let mut cls: Vec<Option<usize>> = vec![None; d];
        let mut here = vec![0; d];
        for i in 0..d {
            if cls[i].is_some() {
                continue;
            }
            let members: Vec<usize> = (0..d).filter(|&j| j == i || data.k[i][j] >= t as i64).collect();
            let weight = (0..d).map(|j| if members.contains(&j) { data.e[j].get(t) } else { 0 }).collect();
            let parent = (t > 0).then(|| prev[i]);
            nodes.push(Node { depth: t, branches: members.clone(), parent, weight });
            for &j in &members {
                cls[j] = Some(nodes.len() - 1);
                here[j] = nodes.len() - 1;
            }
        }
        prev = here;
    }
    Ok(MultiplicityTree::canonical(d, nodes))
}

/// Sequences (as read, not yet checked) and splitting numbers.
fn read_raw(t: &MultiplicityTree) -> Result<(Vec<Vec<u32>>, Vec<Vec<i64>>)> {
    let bad = |m: String| Err(Error::MalformedTree(m));
    let d = t.d;
    if d == 0 || t.nodes.is_empty() {
        return bad("empty tree".into());
    }
    let depth = t.tail_from();
    let mut at = vec![vec![usize::MAX; d]; depth];
    for (v, n) in t.nodes.iter().enumerate() {
        if n.weight.len() != d {
            return bad(format!("vertex {} has weight of length {}", n.id(d), n.weight.len()));
        }
        if n.branches.is_empty() {
            return bad(format!("vertex at depth {} carries no branch", n.depth));
        }
        for i in 0..d {
            let inside = n.branches.contains(&i);
            if inside != (n.weight[i] > 0) {
                return bad(format!("vertex {}: weight entry {} does not match its branch set", n.id(d), i + 1));
            }
            if inside {
                if at[n.depth][i] != usize::MAX {
                    return bad(format!("branch {} appears twice at depth {}", i + 1, n.depth));
                }
                at[n.depth][i] = v;
            }
        }
        match (n.depth, n.parent) {
            (0, None) => {}
            (0, Some(_)) => return bad(format!("root {} has a parent", n.id(d))),
            (_, None) => return bad(format!("vertex {} has no parent", n.id(d))),
            (_, Some(p)) => {
                let par = t.nodes.get(p).ok_or_else(|| Error::MalformedTree(format!("dangling parent {p}")))?;
                if par.depth + 1 != n.depth || !n.branches.iter().all(|b| par.branches.contains(b)) {
                    return bad(format!("vertex {} does not refine its parent", n.id(d)));
                }
            }
        }
    }
    for (t_, row) in at.iter().enumerate() {
        if let Some(i) = row.iter().position(|&v| v == usize::MAX) {
            return bad(format!("branch {} is missing at depth {}", i + 1, t_));
        }
    }
    let e: Vec<Vec<u32>> = (0..d)
        .map(|i| {
            let mut s: Vec<u32> = (0..depth).map(|t_| t.nodes[at[t_][i]].weight[i]).collect();
            s.push(1);
            s
        })
        .collect();
    let mut k = vec![vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..d {
            if i != j {
                k[i][j] = (0..depth).filter(|&t_| at[t_][i] == at[t_][j]).count() as i64 - 1;
            }
        }
    }
    Ok((e, k))
}

pub fn read_tree(t: &MultiplicityTree) -> Result<SplittingData> {
    let (e, k) = read_raw(t)?;
    let e = e
        .iter()
        .map(|s| PlaneSequence::new(s).map_err(|err| Error::MalformedTree(err.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SplittingData { e, k })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeReport {
    pub ok: bool,
    /// 0 structure, 1 plane sequences, 2 admissibility, 3 compatibility.
    pub failed_condition: Option<u8>,
    pub detail: Option<String>,
}

pub fn validate_tree(t: &MultiplicityTree) -> TreeReport {
    let fail = |c: u8, m: String| TreeReport { ok: false, failed_condition: Some(c), detail: Some(m) };
    let (raw, k) = match read_raw(t) {
        Ok(x) => x,
        Err(err) => return fail(0, err.to_string()),
    };
    let mut e = Vec::new();
    for (i, s) in raw.iter().enumerate() {
        let rep = is_plane_sequence(s);
        if !rep.ok {
            return fail(1, format!("branch {}: {}", i + 1, rep.reason.unwrap_or_default()));
        }
        e.push(PlaneSequence::new(s).unwrap());
    }
    for i in 0..t.d {
        for j in i + 1..t.d {
            let rep = is_admissible(&e[i], &e[j], k[i][j]);
            if !rep.ok {
                return fail(
                    2,
                    format!("k_{},{} = {} fails clause {}", i + 1, j + 1, k[i][j], rep.failing_clause.unwrap()),
                );
            }
        }
    }
    if let Some((i, j, s)) = check_compatibility(&k) {
        return fail(3, format!("triple ({},{},{})", i + 1, j + 1, s + 1));
    }
    TreeReport { ok: true, failed_condition: None, detail: None }
}

/// Safety bound on the blow-up chain length.
fn depth_bound(s: &GoodSemigroup) -> usize {
    let e: u32 = s.fine_multiplicity().coords().iter().sum();
    let c: u32 = s.conductor().iter().sum();
    (4 * e as usize).max((c + e + 4) as usize)
}

/// Tree of a semigroup: split into blocks, blow up each local block and
/// record its fine multiplicity, until every block is `N`.
pub fn semigroup_tree(s: &GoodSemigroup) -> Result<MultiplicityTree> {
    let d = s.dim();
    let bound = depth_bound(s);
    let mut nodes: Vec<Node> = Vec::new();
    // (coordinates, semigroup, parent node)
    let mut frontier: Vec<(Vec<usize>, GoodSemigroup, Option<usize>)> = vec![((0..d).collect(), s.clone(), None)];
    for depth in 0.. {
        if depth > bound {
            return Err(Error::NonTermination(bound));
        }
        let mut blocks = Vec::new();
        for (coords, g, parent) in frontier {
            for (idx, part) in split_product(&g) {
                blocks.push((idx.iter().map(|&i| coords[i]).collect::<Vec<usize>>(), part, parent));
            }
        }
        let done = blocks.iter().all(|(c, g, _)| c.len() == 1 && g.conductor()[0] == 0);
        let mut next = Vec::new();
        for (coords, g, parent) in blocks {
            let (up, m) = blow_up_semigroup(&g)?;
            let mut weight = vec![0; d];
            for (&c, &w) in coords.iter().zip(&m) {
                weight[c] = w;
            }
            let mut branches = coords.clone();
            branches.sort();
            nodes.push(Node { depth, branches, parent, weight });
            next.push((coords, up, Some(nodes.len() - 1)));
        }
        if done {
            break;
        }
        frontier = next;
    }
    Ok(MultiplicityTree::canonical(d, nodes))
}

/// Product of semigroups on disjoint coordinate blocks, in coordinate order.
fn product_in_order(parts: &[(Vec<usize>, GoodSemigroup)]) -> Result<GoodSemigroup> {
    let d: usize = parts.iter().map(|(c, _)| c.len()).sum();
    let mut bound = vec![0u32; d];
    for (c, g) in parts {
        for (k, &i) in c.iter().enumerate() {
            bound[i] = g.conductor()[k];
        }
    }
    GoodSemigroup::from_predicate(&bound, |p| {
        parts.iter().all(|(c, g)| g.contains_unchecked(&c.iter().map(|&i| p[i]).collect::<Vec<_>>()))
    })
}

/// Blow down from the last depth upwards, taking products where the tree
/// splits.
pub fn semigroup_from_tree(t: &MultiplicityTree) -> Result<GoodSemigroup> {
    let rep = validate_tree(t);
    if !rep.ok {
        return Err(Error::InvalidTree(rep.detail.unwrap_or_default()));
    }
    fn at(t: &MultiplicityTree, v: usize) -> Result<GoodSemigroup> {
        let n = &t.nodes[v];
        let children: Vec<usize> = (0..t.nodes.len()).filter(|&c| t.nodes[c].parent == Some(v)).collect();
        let below = if children.is_empty() {
            GoodSemigroup::natural(n.branches.len())
        } else {
            let parts = children
                .iter()
                .map(|&c| {
                    let local: Vec<usize> =
                        t.nodes[c].branches.iter().map(|b| n.branches.iter().position(|x| x == b).unwrap()).collect();
                    Ok((local, at(t, c)?))
                })
                .collect::<Result<Vec<_>>>()?;
            product_in_order(&parts)?
        };
        let omega: Vec<u32> = n.branches.iter().map(|&b| n.weight[b]).collect();
        blow_down_semigroup(&below, &omega)
    }
    let parts = t.roots().into_iter().map(|r| Ok((t.nodes[r].branches.clone(), at(t, r)?))).collect::<Result<Vec<_>>>()?;
    product_in_order(&parts)
}
