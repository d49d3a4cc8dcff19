//! Lattice points of N^d with an optional truncation cap per coordinate.
//!
//! A capped coordinate stands for "this value or anything larger". Inside one
//! container all points share the same bound and a coordinate is capped exactly
//! when it equals the bound, so plain integer comparison already gives the
//! capped semantics: two capped coordinates compare equal and a capped one is
//! larger than any uncapped one.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<u32>,
    capped: u64,
}

impl Point {
    pub fn new(coords: Vec<u32>) -> Point {
        assert!(coords.len() <= 64, "at most 64 coordinates");
        Point { coords, capped: 0 }
    }

    pub fn zero(d: usize) -> Point {
        Point::new(vec![0; d])
    }

    /// Clamp every coordinate to `bound`, flagging the clamped ones.
    pub fn capped_at(coords: &[u32], bound: &[u32]) -> Point {
        debug_assert_eq!(coords.len(), bound.len());
        let mut capped = 0u64;
        let coords = coords
            .iter()
            .zip(bound)
            .enumerate()
            .map(|(i, (&c, &b))| {
                if c >= b {
                    capped |= 1 << i;
                    b
                } else {
                    c
                }
            })
            .collect();
        Point { coords, capped }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> u32 {
        self.coords[i]
    }

    pub fn is_capped(&self, i: usize) -> bool {
        self.capped >> i & 1 == 1
    }

    pub fn cap_mask(&self) -> u64 {
        self.capped
    }

    pub fn recap(&self, bound: &[u32]) -> Point {
        Point::capped_at(&self.coords, bound)
    }

    pub fn wedge(&self, other: &Point) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        let mut capped = 0u64;
        let coords = (0..self.dim())
            .map(|i| {
                let (a, b) = (self.coords[i], other.coords[i]);
                if a == b && self.is_capped(i) && other.is_capped(i) {
                    capped |= 1 << i;
                }
                a.min(b)
            })
            .collect();
        Point { coords, capped }
    }

    /// Componentwise sum, truncated at `bound`.
    pub fn add_capped(&self, other: &Point, bound: &[u32]) -> Point {
        let s: Vec<u32> = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Point::capped_at(&s, bound)
    }

    /// Componentwise partial order.
    pub fn le(&self, other: &Point) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    /// Strict domination: smaller in every coordinate.
    pub fn ll(&self, other: &Point) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a < b)
    }

    pub fn leqleq(&self, other: &Point) -> bool {
        self == other || self.ll(other)
    }

    /// Coordinates where `self` and `other` agree, as a bitmask.
    pub fn equal_mask(&self, other: &Point) -> u64 {
        let mut m = 0;
        for i in 0..self.dim() {
            if self.coords[i] == other.coords[i] {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn restrict(&self, idx: &[usize]) -> Point {
        let mut capped = 0u64;
        let coords = idx
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                if self.is_capped(i) {
                    capped |= 1 << k;
                }
                self.coords[i]
            })
            .collect();
        Point { coords, capped }
    }

    pub fn concat(&self, other: &Point) -> Point {
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Point { coords, capped: self.capped | other.capped << self.dim() }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if self.is_capped(i) {
                write!(f, "{}+", c)?;
            } else {
                write!(f, "{}", c)?;
            }
        }
        write!(f, ")")
    }
}

/// Dense indexing of the box `[0, bound]` (inclusive).
#[derive(Clone, Debug)]
pub struct Grid {
    bound: Vec<u32>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    pub fn new(bound: &[u32]) -> Grid {
        let mut strides = vec![0; bound.len()];
        let mut len = 1usize;
        for i in (0..bound.len()).rev() {
            strides[i] = len;
            len *= bound[i] as usize + 1;
        }
        Grid { bound: bound.to_vec(), strides, len }
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.bound.len()
    }

    pub fn index(&self, coords: &[u32]) -> usize {
        coords.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    /// Index of `coords` clamped into the box.
    pub fn index_clamped(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .zip(&self.bound)
            .zip(&self.strides)
            .map(|((&c, &b), &s)| c.min(b) as usize * s)
            .sum()
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.bound.len()];
        for i in 0..self.bound.len() {
            out[i] = (idx / self.strides[i]) as u32;
            idx %= self.strides[i];
        }
        out
    }

    pub fn point(&self, idx: usize) -> Point {
        Point::capped_at(&self.coords(idx), &self.bound)
    }

    pub fn stride(&self, i: usize) -> usize {
        self.strides[i]
    }

    /// Flags over the box marking the points from which some marked point of
    /// `table` is reachable by moving up in the coordinates outside `fixed`.
    pub fn up_closure(&self, table: &[bool], fixed: u64) -> Vec<bool> {
        let mut up = table.to_vec();
        for idx in (0..self.len).rev() {
            if up[idx] {
                continue;
            }
            let c = self.coords(idx);
            for i in 0..self.dim() {
                if fixed >> i & 1 == 0 && c[i] < self.bound[i] && up[idx + self.strides[i]] {
                    up[idx] = true;
                    break;
                }
            }
        }
        up
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capping_clamps_and_flags() {
        let p = Point::capped_at(&[3, 9, 1], &[5, 4, 1]);
        assert_eq!(p.coords(), &[3, 4, 1]);
        assert!(!p.is_capped(0) && p.is_capped(1) && p.is_capped(2));
    }

    #[test]
    fn wedge_keeps_cap_only_when_both_capped() {
        let b = [4, 4];
        let p = Point::capped_at(&[4, 2], &b);
        let q = Point::capped_at(&[7, 4], &b);
        let w = p.wedge(&q);
        assert_eq!(w.coords(), &[4, 2]);
        assert!(w.is_capped(0) && !w.is_capped(1));
    }

    #[test]
    fn orders() {
        let a = Point::new(vec![1, 1]);
        let b = Point::new(vec![2, 3]);
        let c = Point::new(vec![1, 3]);
        assert!(a.ll(&b) && a.leqleq(&b) && a.leqleq(&a));
        assert!(a.le(&c) && !a.ll(&c) && !a.leqleq(&c));
        assert_eq!(a.equal_mask(&c), 0b01);
    }

    #[test]
    fn grid_round_trip() {
        let g = Grid::new(&[2, 3, 1]);
        assert_eq!(g.len(), 24);
        for idx in 0..g.len() {
            assert_eq!(g.index(&g.coords(idx)), idx);
        }
    }

    #[test]
    fn up_closure_respects_fixed_coordinates() {
        let g = Grid::new(&[2, 2]);
        let mut t = vec![false; g.len()];
        t[g.index(&[2, 1])] = true;
        let free = g.up_closure(&t, 0);
        assert!(free[g.index(&[0, 0])]);
        assert!(!free[g.index(&[0, 2])]);
        let fix1 = g.up_closure(&t, 0b10);
        assert!(fix1[g.index(&[0, 1])]);
        assert!(!fix1[g.index(&[0, 0])]);
    }
}
