//! Moving Apéry levels between a semigroup and its blow-up, rebuilding a
//! semigroup from an Apéry set, and splitting products apart.

use crate::apery::{apery_set, expand_points, partition_levels, LevelPartition};
use crate::error::{Error, Result};
use crate::point::{Grid, Point};
use crate::semigroup::GoodSemigroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `A_i = A'_i + iω`, from the blow-up to the original ring.
    Down,
    /// `A'_i = A_i − iω`, from the original ring to its blow-up.
    Up,
}

fn add(a: &[u32], b: &[u32], k: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn shift_levels(p: &LevelPartition, omega: &[u32], direction: Direction) -> Result<LevelPartition> {
    if omega.len() != p.cap.len() {
        return Err(Error::DimensionMismatch { expected: p.cap.len(), got: omega.len() });
    }
    let n = p.n() as u32;
    let mut levels = Vec::with_capacity(p.levels.len());
    let cap = match direction {
        Direction::Down => add(&p.cap, omega, n.saturating_sub(1)),
        Direction::Up => p.cap.clone(),
    };
    for (i, level) in p.levels.iter().enumerate() {
        let i = i as u32;
        let out = match direction {
            Direction::Down => {
                // Rays beyond the cap stay rays once every level reaches the common cap.
                let wide = expand_points(level, &p.cap, &add(&p.cap, omega, n - 1 - i));
                wide.iter().map(|q| Point::capped_at(&add(q.coords(), omega, i), &cap)).collect::<Vec<_>>()
            }
            Direction::Up => {
                let wide = expand_points(level, &p.cap, &add(&p.cap, omega, i));
                let mut v = Vec::with_capacity(wide.len());
                for q in &wide {
                    if q.coords().iter().zip(omega).any(|(x, w)| *x < i * w) {
                        return Err(Error::NegativeCoordinate {
                            level: i as usize,
                            point: q.to_string(),
                            shift: format!("{:?}", omega.iter().map(|w| i * w).collect::<Vec<_>>()),
                        });
                    }
                    let c: Vec<u32> = q.coords().iter().zip(omega).map(|(x, w)| x - i * w).collect();
                    v.push(Point::capped_at(&c, &cap));
                }
                v
            }
        };
        let mut out = out;
        out.sort();
        out.dedup();
        levels.push(out);
    }
    Ok(LevelPartition { omega: omega.to_vec(), cap, levels })
}

/// `S = ⋃_k (A + kω)` for an Apéry set stored with truncation bound `cap`
/// (the set must be constant along rays beyond `cap`).
pub fn semigroup_from_apery(points: &[Point], cap: &[u32], omega: &[u32]) -> Result<GoodSemigroup> {
    let d = cap.len();
    if omega.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: omega.len() });
    }
    if omega.iter().any(|&w| w == 0) {
        return Err(Error::OmegaNotPositive);
    }
    if points.iter().any(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: points.iter().map(|p| p.dim()).find(|&x| x != d).unwrap() });
    }
    let grid = Grid::new(cap);
    let mut a = vec![false; grid.len()];
    for p in points {
        a[grid.index_clamped(p.coords())] = true;
    }
    if !a[0] {
        return Err(Error::NotGood("0 is not in the Apéry set".into()));
    }
    let work = add(cap, omega, 1);
    GoodSemigroup::from_predicate(&work, |p| {
        let mut q = p.to_vec();
        loop {
            if a[grid.index_clamped(&q)] {
                return true;
            }
            if q.iter().zip(omega).any(|(x, w)| x < w) {
                return false;
            }
            for (x, w) in q.iter_mut().zip(omega) {
                *x -= w;
            }
        }
    })
}

pub fn semigroup_from_levels(p: &LevelPartition) -> Result<GoodSemigroup> {
    semigroup_from_apery(&p.elements(), &p.cap, &p.omega)
}

/// The blow-up of a local semigroup together with its fine multiplicity.
pub fn blow_up_semigroup(s: &GoodSemigroup) -> Result<(GoodSemigroup, Vec<u32>)> {
    if !s.is_local() {
        return Err(Error::NotLocal);
    }
    let e = s.fine_multiplicity().coords().to_vec();
    let levels = partition_levels(&apery_set(s, &e)?);
    let up = shift_levels(&levels, &e, Direction::Up)?;
    Ok((semigroup_from_levels(&up)?, e))
}

/// The local semigroup with fine multiplicity `ω` whose blow-up is `s`.
pub fn blow_down_semigroup(s: &GoodSemigroup, omega: &[u32]) -> Result<GoodSemigroup> {
    let levels = partition_levels(&apery_set(s, omega)?);
    let down = shift_levels(&levels, omega, Direction::Down)?;
    semigroup_from_levels(&down)
}

/// Finest splitting of the coordinates into blocks with `S` the product of
/// its projections; blocks ordered by their smallest index.
pub fn split_product(s: &GoodSemigroup) -> Vec<(Vec<usize>, GoodSemigroup)> {
    let d = s.dim();
    let full = (1u64 << d) - 1;
    let grid = s.grid();
    let splits = |m: u64| {
        s.smalls().iter().all(|p| {
            let keep: Vec<u32> = (0..d).map(|i| if m >> i & 1 == 1 { p.get(i) } else { 0 }).collect();
            s.contains_unchecked(&keep)
        })
    };
    let mut good = vec![full];
    for m in 1..full {
        if splits(m) && splits(full ^ m) {
            good.push(m);
        }
    }
    let mut blocks: Vec<u64> = Vec::new();
    for i in 0..d {
        let b = good.iter().filter(|&&m| m >> i & 1 == 1).fold(full, |acc, &m| acc & m);
        if !blocks.contains(&b) {
            blocks.push(b);
        }
    }
    let out: Vec<(Vec<usize>, GoodSemigroup)> = blocks
        .iter()
        .map(|&b| {
            let idx: Vec<usize> = (0..d).filter(|&i| b >> i & 1 == 1).collect();
            let proj = s.project(&idx).expect("projections of good semigroups are good");
            (idx, proj)
        })
        .collect();
    debug_assert!((0..grid.len()).all(|k| {
        let c = grid.coords(k);
        let prod = out.iter().all(|(idx, t)| t.contains_unchecked(&idx.iter().map(|&i| c[i]).collect::<Vec<_>>()));
        prod == s.contains_unchecked(&c)
    }));
    out
}
