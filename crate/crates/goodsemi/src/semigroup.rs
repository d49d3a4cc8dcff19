//! Good semigroups of N^d stored by their small elements.
//!
//! Only the points below the conductor are kept; a point `α` of N^d belongs to
//! the semigroup iff `min(α, conductor)` is one of the stored small elements.

use crate::error::{Error, Result};
use crate::point::{Grid, Point};
use std::fmt;

#[derive(Clone)]
pub struct GoodSemigroup {
    grid: Grid,
    table: Vec<bool>,
    smalls: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// Least valid conductor of the set, when one exists.
    pub minimal_conductor: Option<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaKind {
    /// `β_i = α_i` on U, strictly larger elsewhere.
    Exact(u64),
    /// `β_i = α_i` on U, larger or equal elsewhere, `β ≠ α`.
    Tilde(u64),
    Single(usize),
    Union,
}

/// Witness of a complete infimum: `α` is the pairwise wedge of the betas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub betas: Vec<Point>,
    pub fs: Vec<u64>,
}

impl Witness {
    pub fn verify(&self, alpha: &Point) -> bool {
        let d = alpha.dim();
        let full = full_mask(d);
        if self.betas.len() < 2 || self.betas.len() != self.fs.len() {
            return false;
        }
        for (b, &f) in self.betas.iter().zip(&self.fs) {
            if f == 0 || f == full || !in_delta(alpha, b, DeltaKind::Exact(f)) {
                return false;
            }
        }
        for j in 0..self.betas.len() {
            for k in j + 1..self.betas.len() {
                if self.betas[j].wedge(&self.betas[k]).coords() != alpha.coords() {
                    return false;
                }
            }
        }
        self.fs.iter().fold(full, |acc, f| acc & f) == 0
    }
}

pub(crate) fn full_mask(d: usize) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// Membership of `beta` in the Δ-set of `alpha` named by `kind`.
pub fn in_delta(alpha: &Point, beta: &Point, kind: DeltaKind) -> bool {
    let d = alpha.dim();
    let test = |u: u64, strict: bool| {
        (0..d).all(|i| {
            let (a, b) = (alpha.get(i), beta.get(i));
            if u >> i & 1 == 1 {
                a == b
            } else if strict {
                // Two capped coordinates have representatives in either order.
                b > a || b == a && alpha.is_capped(i) && beta.is_capped(i)
            } else {
                b >= a
            }
        })
    };
    match kind {
        DeltaKind::Exact(u) => test(u, true),
        DeltaKind::Tilde(u) => test(u, false) && alpha.coords() != beta.coords(),
        DeltaKind::Single(i) => test(1 << i, true),
        DeltaKind::Union => (0..d).any(|i| test(1 << i, true)),
    }
}

fn check_kind(d: usize, kind: DeltaKind) -> Result<()> {
    let full = full_mask(d);
    match kind {
        DeltaKind::Exact(u) | DeltaKind::Tilde(u) if u == 0 || u & !full != 0 || u == full => {
            Err(Error::BadIndexSet(format!("mask {u:#b} for d={d}")))
        }
        DeltaKind::Single(i) if i >= d => Err(Error::BadIndexSet(format!("index {i} for d={d}"))),
        _ => Ok(()),
    }
}

/// Δ-set of `alpha` inside an arbitrary point set.
pub fn delta_in(points: &[Point], alpha: &Point, kind: DeltaKind) -> Result<Vec<Point>> {
    check_kind(alpha.dim(), kind)?;
    Ok(points.iter().filter(|b| in_delta(alpha, b, kind)).cloned().collect())
}

/// Whether `target` is a disjoint union of members of `parts`; returns them.
pub(crate) fn exact_cover(target: u64, parts: &[u64]) -> Option<Vec<u64>> {
    if target == 0 {
        return Some(Vec::new());
    }
    let low = target & target.wrapping_neg();
    for &p in parts {
        if p & low != 0 && p & !target == 0 {
            if let Some(mut rest) = exact_cover(target & !p, parts) {
                rest.insert(0, p);
                return Some(rest);
            }
        }
    }
    None
}

/// Searches `set` for elements `β^(j) ∈ Δ_{F_j}(α)` with pairwise wedge `α`
/// and `⋂ F_j = ∅`. Equivalently the complements of the `F_j` partition the
/// coordinates; a capped coordinate of `α` may be strict or equal in any
/// witness, so only the uncapped coordinates need covering.
pub fn is_complete_infimum(set: &[Point], alpha: &Point) -> Option<Witness> {
    let d = alpha.dim();
    if d < 2 {
        return None;
    }
    let full = full_mask(d);
    let capped = alpha.cap_mask();
    let uncapped = full ^ capped;
    let mut by_part: std::collections::BTreeMap<u64, &Point> = Default::default();
    for b in set {
        if !alpha.le(b) || (0..d).any(|i| alpha.is_capped(i) && !b.is_capped(i)) {
            continue;
        }
        let g = uncapped & !alpha.equal_mask(b);
        if g != 0 && g != uncapped {
            by_part.entry(g).or_insert(b);
        }
    }
    let parts: Vec<u64> = by_part.keys().copied().collect();
    let cover = exact_cover(uncapped, &parts)?;
    let fs = cover.iter().enumerate().map(|(j, &g)| if j == 0 { full & !g & !capped } else { full & !g }).collect();
    Some(Witness { betas: cover.iter().map(|g| by_part[g].clone()).collect(), fs })
}

/// Least `c` in the box with every point above it marked, if unique.
pub(crate) fn minimal_conductor(grid: &Grid, table: &[bool]) -> Option<Vec<u32>> {
    let d = grid.dim();
    let mut valid = vec![false; grid.len()];
    for idx in (0..grid.len()).rev() {
        if !table[idx] {
            continue;
        }
        let c = grid.coords(idx);
        valid[idx] = (0..d).all(|i| c[i] == grid.bound()[i] || valid[idx + grid.stride(i)]);
    }
    let mut lo: Option<Vec<u32>> = None;
    for (idx, &v) in valid.iter().enumerate() {
        if v {
            let c = grid.coords(idx);
            lo = Some(match lo {
                None => c,
                Some(l) => l.iter().zip(&c).map(|(a, b)| *a.min(b)).collect(),
            });
        }
    }
    let lo = lo?;
    if valid[grid.index(&lo)] {
        Some(lo)
    } else {
        None
    }
}

fn scan_axioms(grid: &Grid, table: &[bool], smalls: &[Point], violations: &mut Vec<Violation>) {
    let d = grid.dim();
    let bound = grid.bound().to_vec();
    let member = |p: &Point| table[grid.index(p.coords())];
    'g1: for (x, a) in smalls.iter().enumerate() {
        for b in &smalls[x + 1..] {
            if !a.le(b) && !b.le(a) && !member(&a.wedge(b)) {
                violations.push(Violation { axiom: "G1", witness: vec![a.clone(), b.clone()] });
                break 'g1;
            }
        }
    }
    'add: for (x, a) in smalls.iter().enumerate() {
        for b in &smalls[x..] {
            if !member(&a.add_capped(b, &bound)) {
                violations.push(Violation { axiom: "additive", witness: vec![a.clone(), b.clone()] });
                break 'add;
            }
        }
    }
    // (G2) through one reachability table per set of pinned coordinates.
    let mut reach: Vec<Option<Vec<bool>>> = vec![None; 1 << d];
    for i in 0..d {
        let mut buckets: std::collections::BTreeMap<u32, Vec<&Point>> = Default::default();
        for p in smalls {
            buckets.entry(p.get(i)).or_default().push(p);
        }
        for bucket in buckets.values() {
            for (x, a) in bucket.iter().enumerate() {
                for b in &bucket[x + 1..] {
                    let diff = full_mask(d) & !a.equal_mask(b);
                    let q: Vec<u32> = (0..d)
                        .map(|j| {
                            if j == i {
                                (a.get(i) + 1).min(bound[i])
                            } else {
                                a.get(j).min(b.get(j))
                            }
                        })
                        .collect();
                    let tab = reach[diff as usize].get_or_insert_with(|| grid.up_closure(table, diff));
                    if !tab[grid.index(&q)] {
                        violations.push(Violation {
                            axiom: "G2",
                            witness: vec![(*a).clone(), (*b).clone()],
                        });
                        return;
                    }
                }
            }
        }
    }
}

/// Checks the good-semigroup axioms on a truncated set.
pub fn verify_good(smalls: &[Vec<u32>], conductor: &[u32]) -> Result<GoodReport> {
    if smalls.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = conductor.len();
    let grid = Grid::new(conductor);
    let mut table = vec![false; grid.len()];
    let mut violations = Vec::new();
    for s in smalls {
        if s.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: s.len() });
        }
        if s.iter().zip(conductor).any(|(a, b)| a > b) {
            violations.push(Violation { axiom: "bounds", witness: vec![Point::new(s.clone())] });
            continue;
        }
        table[grid.index(s)] = true;
    }
    if !table[grid.index(conductor)] {
        return Err(Error::ConductorMissing);
    }
    if !table[0] {
        violations.push(Violation { axiom: "zero", witness: vec![Point::zero(d)] });
    }
    let pts: Vec<Point> = (0..grid.len()).filter(|&i| table[i]).map(|i| grid.point(i)).collect();
    scan_axioms(&grid, &table, &pts, &mut violations);
    let minimal_conductor = minimal_conductor(&grid, &table);
    if minimal_conductor.is_none() {
        violations.push(Violation { axiom: "conductor", witness: vec![Point::new(conductor.to_vec())] });
    }
    Ok(GoodReport { ok: violations.is_empty(), violations, minimal_conductor })
}

impl GoodSemigroup {
    /// Builds and checks a semigroup; the stored conductor is the least one.
    pub fn new(conductor: &[u32], smalls: &[Vec<u32>]) -> Result<GoodSemigroup> {
        let report = verify_good(smalls, conductor)?;
        if !report.ok {
            let v = &report.violations[0];
            return Err(Error::NotGood(format!("{} fails at {:?}", v.axiom, v.witness)));
        }
        let grid = Grid::new(conductor);
        let mut table = vec![false; grid.len()];
        for s in smalls {
            table[grid.index(s)] = true;
        }
        Ok(GoodSemigroup::from_table(grid, table).retruncate(report.minimal_conductor.as_deref().unwrap()))
    }

    /// Trusted constructor; callers guarantee the axioms.
    pub(crate) fn from_table(grid: Grid, table: Vec<bool>) -> GoodSemigroup {
        let smalls = (0..grid.len()).filter(|&i| table[i]).map(|i| grid.point(i)).collect();
        GoodSemigroup { grid, table, smalls }
    }

    /// Builds from a membership predicate on the box `[0, bound]`, then shrinks
    /// to the least conductor and checks the axioms.
    pub fn from_predicate(bound: &[u32], mut member: impl FnMut(&[u32]) -> bool) -> Result<GoodSemigroup> {
        let grid = Grid::new(bound);
        let table: Vec<bool> = (0..grid.len()).map(|i| member(&grid.coords(i))).collect();
        if !table[0] {
            return Err(Error::NotGood("0 missing".into()));
        }
        let c = minimal_conductor(&grid, &table)
            .ok_or_else(|| Error::NotGood("no conductor inside the working box".into()))?;
        let s = GoodSemigroup::from_table(grid, table).retruncate(&c);
        s.check()?;
        Ok(s)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let mut violations = Vec::new();
        scan_axioms(&self.grid, &self.table, &self.smalls, &mut violations);
        match violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::NotGood(format!("{} fails at {:?}", v.axiom, v.witness))),
        }
    }

    /// The same semigroup stored with another bound (any bound at or above the
    /// least conductor is valid).
    pub fn retruncate(&self, bound: &[u32]) -> GoodSemigroup {
        let grid = Grid::new(bound);
        let table = (0..grid.len()).map(|i| self.contains_unchecked(&grid.coords(i))).collect();
        GoodSemigroup::from_table(grid, table)
    }

    /// N^d.
    pub fn natural(d: usize) -> GoodSemigroup {
        let grid = Grid::new(&vec![0; d]);
        GoodSemigroup::from_table(grid, vec![true])
    }

    /// Numerical semigroup generated by `gens` (gcd 1 required).
    pub fn numerical(gens: &[u32]) -> Result<GoodSemigroup> {
        let g = gens.iter().filter(|&&x| x > 0).fold(0u32, |a, &b| num_integer::gcd(a, b));
        if g != 1 {
            return Err(Error::NotGood(format!("generators {gens:?} have gcd {g}")));
        }
        let m = *gens.iter().filter(|&&x| x > 0).min().unwrap() as usize;
        let mut member = vec![true];
        let mut run = 1usize;
        let mut n = 0usize;
        while run < m {
            n += 1;
            let hit = gens.iter().any(|&g| g > 0 && n >= g as usize && member[n - g as usize]);
            member.push(hit);
            run = if hit { run + 1 } else { 0 };
        }
        let c = (n + 1 - m) as u32;
        let grid = Grid::new(&[c]);
        let table = (0..=c as usize).map(|i| member[i]).collect();
        Ok(GoodSemigroup::from_table(grid, table))
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn conductor(&self) -> &[u32] {
        self.grid.bound()
    }

    /// `conductor − 1`; may be negative in coordinates where the conductor is 0.
    pub fn gamma(&self) -> Vec<i64> {
        self.conductor().iter().map(|&c| c as i64 - 1).collect()
    }

    pub fn smalls(&self) -> &[Point] {
        &self.smalls
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn contains(&self, alpha: &[u32]) -> Result<bool> {
        if alpha.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: alpha.len() });
        }
        Ok(self.contains_unchecked(alpha))
    }

    pub fn contains_unchecked(&self, alpha: &[u32]) -> bool {
        self.table[self.grid.index_clamped(alpha)]
    }

    /// Only `0` has a zero coordinate.
    pub fn is_local(&self) -> bool {
        let d = self.dim();
        self.smalls.iter().all(|p| {
            let zero = p.coords().iter().all(|&c| c == 0);
            let has_zero = p.coords().iter().any(|&c| c == 0);
            !has_zero || zero && (d == 1 || p.cap_mask() == 0)
        })
    }

    /// Least element with every coordinate positive.
    pub fn fine_multiplicity(&self) -> Point {
        let mut best: Option<Vec<u32>> = None;
        for p in &self.smalls {
            let rep: Option<Vec<u32>> = (0..p.dim())
                .map(|i| match (p.get(i), p.is_capped(i)) {
                    (0, true) => Some(1),
                    (0, false) => None,
                    (v, _) => Some(v),
                })
                .collect();
            if let Some(r) = rep {
                best = Some(match best {
                    None => r,
                    Some(b) => b.iter().zip(&r).map(|(x, y)| *x.min(y)).collect(),
                });
            }
        }
        Point::new(best.expect("the conductor is a positive representative"))
    }

    pub fn product(&self, other: &GoodSemigroup) -> GoodSemigroup {
        let mut bound = self.conductor().to_vec();
        bound.extend_from_slice(other.conductor());
        let grid = Grid::new(&bound);
        let d1 = self.dim();
        let table = (0..grid.len())
            .map(|i| {
                let c = grid.coords(i);
                self.contains_unchecked(&c[..d1]) && other.contains_unchecked(&c[d1..])
            })
            .collect();
        GoodSemigroup::from_table(grid, table)
    }

    /// Projection on the coordinates `idx` (0-based, increasing).
    pub fn project(&self, idx: &[usize]) -> Result<GoodSemigroup> {
        if idx.is_empty() || idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= self.dim()) {
            return Err(Error::BadIndexSet(format!("{idx:?} for d={}", self.dim())));
        }
        let bound: Vec<u32> = idx.iter().map(|&i| self.conductor()[i]).collect();
        let grid = Grid::new(&bound);
        let mut table = vec![false; grid.len()];
        for p in &self.smalls {
            table[grid.index(p.restrict(idx).coords())] = true;
        }
        let c = minimal_conductor(&grid, &table)
            .ok_or_else(|| Error::NotGood(format!("projection on {idx:?} has no conductor")))?;
        let s = GoodSemigroup::from_table(grid, table).retruncate(&c);
        s.check()?;
        Ok(s)
    }

    pub fn delta(&self, alpha: &Point, kind: DeltaKind) -> Result<Vec<Point>> {
        if alpha.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: alpha.dim() });
        }
        delta_in(&self.smalls, &alpha.recap(self.conductor()), kind)
    }

    /// Exhaustive axiom report for this semigroup.
    pub fn report(&self) -> GoodReport {
        let smalls: Vec<Vec<u32>> = self.smalls.iter().map(|p| p.coords().to_vec()).collect();
        verify_good(&smalls, self.conductor()).expect("stored semigroups are nonempty")
    }
}

impl PartialEq for GoodSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor() && self.table == other.table
    }
}

impl Eq for GoodSemigroup {}

impl fmt::Debug for GoodSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GoodSemigroup(c={:?}, {} smalls)", self.conductor(), self.smalls.len())
    }
}
