//! Apéry sets `S ∖ (ω + S)` and their partition into levels.
//!
//! Apéry sets are infinite when d ≥ 2; they are stored inside the box
//! `[0, cap]` with `cap ≥ c + ω`, a capped coordinate standing for the whole
//! ray beyond it.

use crate::error::{Error, Result};
use crate::point::{Grid, Point};
use crate::semigroup::{exact_cover, full_mask, GoodSemigroup, Witness};

#[derive(Clone, Debug)]
pub struct AperySet {
    parent: GoodSemigroup,
    omega: Vec<u32>,
    grid: Grid,
    table: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPartition {
    pub omega: Vec<u32>,
    /// Truncation bound shared by every level.
    pub cap: Vec<u32>,
    /// `levels[i]` is `A_i`, sorted lexicographically.
    pub levels: Vec<Vec<Point>>,
}

fn check_omega(s: &GoodSemigroup, omega: &[u32]) -> Result<()> {
    if omega.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: omega.len() });
    }
    if omega.iter().any(|&w| w == 0) {
        return Err(Error::OmegaNotPositive);
    }
    if !s.contains_unchecked(omega) {
        return Err(Error::OmegaNotInS);
    }
    Ok(())
}

/// `Ap(S, ω)` truncated at `c + ω`.
pub fn apery_set(s: &GoodSemigroup, omega: &[u32]) -> Result<AperySet> {
    apery_set_with_margin(s, omega, 0)
}

/// Same set truncated `margin` further out in every coordinate.
pub fn apery_set_with_margin(s: &GoodSemigroup, omega: &[u32], margin: u32) -> Result<AperySet> {
    check_omega(s, omega)?;
    let cap: Vec<u32> = s.conductor().iter().zip(omega).map(|(c, w)| c + w + margin).collect();
    let grid = Grid::new(&cap);
    let table = (0..grid.len())
        .map(|i| {
            let p = grid.coords(i);
            let shifted = p.iter().zip(omega).all(|(a, w)| a >= w)
                && s.contains_unchecked(&p.iter().zip(omega).map(|(a, w)| a - w).collect::<Vec<_>>());
            s.contains_unchecked(&p) && !shifted
        })
        .collect();
    Ok(AperySet { parent: s.clone(), omega: omega.to_vec(), grid, table })
}

impl AperySet {
    pub fn parent(&self) -> &GoodSemigroup {
        &self.parent
    }

    pub fn omega(&self) -> &[u32] {
        &self.omega
    }

    pub fn cap(&self) -> &[u32] {
        self.grid.bound()
    }

    /// `c_E = c + ω`.
    pub fn conductor_e(&self) -> Vec<u32> {
        self.parent.conductor().iter().zip(&self.omega).map(|(c, w)| c + w).collect()
    }

    pub fn elements(&self) -> Vec<Point> {
        (0..self.grid.len()).filter(|&i| self.table[i]).map(|i| self.grid.point(i)).collect()
    }

    pub fn contains(&self, alpha: &[u32]) -> bool {
        self.table[self.grid.index_clamped(alpha)]
    }
}

/// Definition of the levels: peel off the `≤≤`-maximal elements that are not
/// complete infima among the maximal ones, last level first.
pub fn partition_levels(a: &AperySet) -> LevelPartition {
    let grid = &a.grid;
    let d = grid.dim();
    let cap = grid.bound().to_vec();
    let full = full_mask(d);
    let mut remaining = a.table.clone();
    let mut left = remaining.iter().filter(|&&b| b).count();
    let mut peeled: Vec<Vec<Point>> = Vec::new();
    while left > 0 {
        let above = grid.up_closure(&remaining, 0);
        let mut maximal = vec![false; grid.len()];
        let mut members = Vec::new();
        for idx in 0..grid.len() {
            if !remaining[idx] {
                continue;
            }
            // A capped coordinate stands for a whole ray, so it is dominated by
            // any capped coordinate.
            let q: Vec<u32> = grid.coords(idx).iter().zip(&cap).map(|(&x, &k)| (x + 1).min(k)).collect();
            if !above[grid.index(&q)] {
                maximal[idx] = true;
                members.push(idx);
            }
        }
        let reach: Vec<Vec<bool>> =
            (0..=full).map(|m| if m == 0 || m == full { Vec::new() } else { grid.up_closure(&maximal, m) }).collect();
        let mut level = Vec::new();
        for &idx in &members {
            let c = grid.coords(idx);
            // A witness `β` with `β_i = α_i` on `F` and `β_i > α_i` off `F`
            // is recorded by `G`, the uncapped part of the complement of `F`;
            // capped coordinates can go either way, so `α` is a complete
            // infimum iff such `G`s partition its uncapped coordinates.
            let capped: u64 = (0..d).filter(|&j| c[j] == cap[j]).fold(0, |a, j| a | 1 << j);
            let uncapped = full ^ capped;
            let mut parts = Vec::new();
            let mut g = (uncapped - 1) & uncapped;
            while g != 0 {
                let mut q = c.clone();
                for j in 0..d {
                    if g >> j & 1 == 1 {
                        q[j] = (q[j] + 1).min(cap[j]);
                    }
                }
                if reach[(full ^ g) as usize][grid.index(&q)] {
                    parts.push(g);
                }
                g = (g - 1) & uncapped;
            }
            let infimum = exact_cover(uncapped, &parts).is_some();
            if !infimum {
                level.push(idx);
            }
        }
        assert!(!level.is_empty(), "the <=-maximal elements are never complete infima");
        for &idx in &level {
            remaining[idx] = false;
        }
        left -= level.len();
        peeled.push(level.into_iter().map(|i| grid.point(i)).collect());
    }
    peeled.reverse();
    LevelPartition { omega: a.omega.clone(), cap, levels: peeled }
}

/// Witness search restricted to one peeling step, for re-verification.
pub fn infimum_witness(set: &[Point], alpha: &Point) -> Option<Witness> {
    crate::semigroup::is_complete_infimum(set, alpha)
}

impl LevelPartition {
    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn expected_n(&self) -> usize {
        self.omega.iter().map(|&w| w as usize).sum()
    }

    pub fn elements(&self) -> Vec<Point> {
        let mut all: Vec<Point> = self.levels.iter().flatten().cloned().collect();
        all.sort();
        all
    }

    /// Index of the level holding `alpha` (clamped to the cap).
    pub fn level_of(&self, alpha: &[u32]) -> Option<usize> {
        let p = Point::capped_at(alpha, &self.cap);
        self.levels.iter().position(|l| l.binary_search(&p).is_ok())
    }

    /// The same partition with a larger cap: capped coordinates are expanded
    /// into the explicit values they stand for.
    pub fn expand_to(&self, cap: &[u32]) -> LevelPartition {
        let levels = self.levels.iter().map(|l| expand_points(l, &self.cap, cap)).collect();
        LevelPartition { omega: self.omega.clone(), cap: cap.to_vec(), levels }
    }

    pub fn recap(&self, cap: &[u32]) -> LevelPartition {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let mut v: Vec<Point> = l.iter().map(|p| p.recap(cap)).collect();
                v.sort();
                v.dedup();
                v
            })
            .collect();
        LevelPartition { omega: self.omega.clone(), cap: cap.to_vec(), levels }
    }
}

/// Rewrites points truncated at `from` as points truncated at `to ≥ from`.
pub(crate) fn expand_points(points: &[Point], from: &[u32], to: &[u32]) -> Vec<Point> {
    let mut out = Vec::new();
    for p in points {
        let ranges: Vec<(u32, u32)> = (0..p.dim())
            .map(|i| if p.get(i) >= from[i] { (from[i], to[i]) } else { (p.get(i), p.get(i)) })
            .collect();
        let mut cur: Vec<u32> = ranges.iter().map(|r| r.0).collect();
        loop {
            out.push(Point::capped_at(&cur, to));
            let mut i = 0;
            loop {
                if i == cur.len() {
                    out.sort();
                    out.dedup();
                    break;
                }
                if cur[i] < ranges[i].1 {
                    cur[i] += 1;
                    break;
                }
                cur[i] = ranges[i].0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `λ(α)`: the level of `α` when it lies in the Apéry set, otherwise one more
/// than the highest level with an element strictly below `α`.
pub fn level_function(s: &GoodSemigroup, p: &LevelPartition, alpha: &[u32]) -> Result<usize> {
    if alpha.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: alpha.len() });
    }
    if !s.contains_unchecked(alpha) {
        return Err(Error::NotInSemigroup);
    }
    let a = Point::capped_at(alpha, &p.cap);
    if let Some(i) = p.level_of(alpha) {
        return Ok(i);
    }
    let below = p.levels.iter().rposition(|l| l.iter().any(|t| t.le(&a))).expect("0 lies in every Apéry set");
    Ok(below + 1)
}

/// Level of `(α¹, α²)` in a product as the sum of the factor levels.
pub fn level_via_product(
    s1: &GoodSemigroup,
    p1: &LevelPartition,
    s2: &GoodSemigroup,
    p2: &LevelPartition,
    alpha: &[u32],
) -> Result<usize> {
    let d1 = s1.dim();
    if alpha.len() != d1 + s2.dim() {
        return Err(Error::DimensionMismatch { expected: d1 + s2.dim(), got: alpha.len() });
    }
    Ok(level_function(s1, p1, &alpha[..d1])? + level_function(s2, p2, &alpha[d1..])?)
}

/// Whether enlarging the cap by one changes nothing after re-capping, i.e.
/// every capped coordinate really stands for a ray inside one level.
pub fn cap_stable(s: &GoodSemigroup, p: &LevelPartition) -> Result<bool> {
    let margin = p.cap[0] + 1 - s.conductor()[0] - p.omega[0];
    let wider = partition_levels(&apery_set_with_margin(s, &p.omega, margin)?);
    Ok(wider.n() == p.n() && wider.recap(&p.cap) == *p)
}
