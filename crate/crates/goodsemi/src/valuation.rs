//! Value semigroups of parametrized curves.
//!
//! The ring is the algebra generated by `x` and `y` inside
//! `Π K[t_i]/(t_i^{T_i})`, spanned as a vector space. A point `α` is a value
//! iff every subspace `V_{≥α+ε_i}` is proper in `V_{≥α}`; the dimensions are
//! read off one basis per choice of the non-main coordinates, kept in echelon
//! form for the orders along the main branch.

use crate::error::{Error, Result};
use crate::hn::BranchParam;
use crate::point::{Grid, Point};
use crate::semigroup::GoodSemigroup;
use crate::series::{Series, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParam {
    pub branches: Vec<BranchParam>,
}

pub fn value_of(f: &[Series]) -> Result<Point> {
    let c = f.iter().enumerate().map(|(i, s)| s.order().map(|o| o as u32).ok_or(Error::ZeroComponent(i))).collect::<Result<Vec<_>>>()?;
    Ok(Point::new(c))
}

type Vector = Vec<BigInt>;

fn normalize(v: &mut Vector) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// `v ← p[col]·v − v[col]·p`, clearing `v[col]`.
fn eliminate(v: &mut Vector, p: &Vector, col: usize) {
    let a = p[col].clone();
    let b = v[col].clone();
    if b.is_zero() {
        return;
    }
    let g = a.gcd(&b);
    let (a, b) = (&a / &g, &b / &g);
    for (x, y) in v.iter_mut().zip(p) {
        if y.is_zero() {
            if !x.is_zero() {
                *x *= &a;
            }
        } else {
            *x = &*x * &a - &b * y;
        }
    }
    normalize(v);
}

/// Integer coordinates of a curve element truncated blockwise, scaled by a
/// common denominator.
struct Layout {
    t: Vec<usize>,
    off: Vec<usize>,
    n: usize,
}

impl Layout {
    fn new(t: &[usize]) -> Layout {
        let mut off = Vec::new();
        let mut n = 0;
        for &x in t {
            off.push(n);
            n += x;
        }
        Layout { t: t.to_vec(), off, n }
    }

    fn vector(&self, f: &[Series]) -> Vector {
        let den = f
            .iter()
            .zip(&self.t)
            .flat_map(|(s, &t)| (0..t).map(move |j| s.coeff(j).denom().clone()))
            .fold(BigInt::one(), |l, d| l.lcm(&d));
        let mut v = vec![BigInt::zero(); self.n];
        for (i, s) in f.iter().enumerate() {
            for j in 0..self.t[i] {
                let c: Q = s.coeff(j) * Q::from_integer(den.clone());
                v[self.off[i] + j] = c.to_integer();
            }
        }
        v
    }

    /// Blockwise product, truncated.
    fn mul(&self, v: &Vector, w: &Vector) -> Vector {
        let mut out = vec![BigInt::zero(); self.n];
        for (i, &t) in self.t.iter().enumerate() {
            let o = self.off[i];
            for a in 0..t {
                if v[o + a].is_zero() {
                    continue;
                }
                for b in 0..t - a {
                    if !w[o + b].is_zero() {
                        out[o + a + b] += &v[o + a] * &w[o + b];
                    }
                }
            }
        }
        normalize(&mut out);
        out
    }
}

/// Basis of the algebra generated by `x` and `y` modulo `t^T`.
fn algebra_basis(layout: &Layout, x: &Vector, y: &Vector) -> Vec<Vector> {
    let mut basis: Vec<(usize, Vector)> = Vec::new();
    let one: Vector = (0..layout.n).map(|k| if layout.off.contains(&k) { BigInt::one() } else { BigInt::zero() }).collect();
    let mut queue = vec![one];
    while let Some(mut v) = queue.pop() {
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                eliminate(&mut v, b, *p);
            }
        }
        let Some(p) = v.iter().position(|c| !c.is_zero()) else { continue };
        queue.push(layout.mul(&v, x));
        queue.push(layout.mul(&v, y));
        let at = basis.partition_point(|(q, _)| *q < p);
        basis.insert(at, (p, v));
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

/// Per choice `γ` of the non-main orders: `dim V_{≥(0,γ)}` and the orders
/// along the main branch that occur in it.
struct Profile {
    dim: usize,
    orders: Vec<bool>,
}

struct Echelon {
    vecs: Vec<(usize, Vector)>,
}

impl Echelon {
    fn new(mut basis: Vec<Vector>, lo: usize, hi: usize) -> Echelon {
        let lead = |v: &Vector| (lo..hi).find(|&k| !v[k].is_zero()).map_or(usize::MAX, |k| k - lo);
        let mut done: Vec<(usize, Vector)> = Vec::new();
        while let Some(mut v) = basis.pop() {
            loop {
                let l = lead(&v);
                match done.iter().find(|(m, _)| *m == l && l != usize::MAX) {
                    Some((_, p)) => eliminate(&mut v, p, lo + l),
                    None => {
                        if v.iter().any(|c| !c.is_zero()) {
                            done.push((l, v));
                        }
                        break;
                    }
                }
            }
        }
        Echelon { vecs: done }
    }

    /// Restricts to the subspace where coordinate `col` vanishes.
    fn impose(&mut self, col: usize) {
        let Some(pi) = (0..self.vecs.len()).filter(|&i| !self.vecs[i].1[col].is_zero()).max_by_key(|&i| self.vecs[i].0) else {
            return;
        };
        let (_, p) = self.vecs.swap_remove(pi);
        for (_, v) in self.vecs.iter_mut() {
            if !v[col].is_zero() {
                eliminate(v, &p, col);
            }
        }
    }

    fn profile(&self, t_main: usize) -> Profile {
        let mut orders = vec![false; t_main];
        for (l, _) in &self.vecs {
            if *l != usize::MAX {
                orders[*l] = true;
            }
        }
        Profile { dim: self.vecs.len(), orders }
    }
}

/// `S ∩ [0, bound]` as a membership table over the grid `[0, bound]`.
fn value_table(c: &CurveParam, bound: &[u32]) -> Result<(Grid, Vec<bool>)> {
    let d = c.branches.len();
    let t: Vec<usize> = bound.iter().map(|&b| b as usize + 1).collect();
    for (i, b) in c.branches.iter().enumerate() {
        if b.x.precision() < t[i] || b.y.precision() < t[i] {
            return Err(Error::InsufficientPrecision(format!(
                "branch {} needs precision {} for bound {}",
                i + 1,
                t[i],
                bound[i]
            )));
        }
    }
    let layout = Layout::new(&t);
    let xs: Vec<Series> = c.branches.iter().map(|b| b.x.clone()).collect();
    let ys: Vec<Series> = c.branches.iter().map(|b| b.y.clone()).collect();
    let basis = algebra_basis(&layout, &layout.vector(&xs), &layout.vector(&ys));

    let main = (0..d).max_by_key(|&i| (t[i], std::cmp::Reverse(i))).unwrap();
    let others: Vec<usize> = (0..d).filter(|&i| i != main).collect();
    // γ ranges over Π [0, T_o] for the other branches.
    let gdims: Vec<u32> = others.iter().map(|&o| t[o] as u32).collect();
    let ggrid = Grid::new(&gdims);
    let mut profiles: Vec<Option<Profile>> = (0..ggrid.len()).map(|_| None).collect();
    let root = Echelon::new(basis, layout.off[main], layout.off[main] + t[main]);
    fn walk(
        k: usize,
        mut cur: Echelon,
        gamma: &mut Vec<u32>,
        ctx: &(&[usize], &Layout, &Grid, usize),
        out: &mut Vec<Option<Profile>>,
    ) {
        let (others, layout, ggrid, main) = *ctx;
        if k == others.len() {
            out[ggrid.index(gamma)] = Some(cur.profile(layout.t[main]));
            return;
        }
        let o = others[k];
        for g in 0..=layout.t[o] {
            if g > 0 {
                cur.impose(layout.off[o] + g - 1);
            }
            gamma[k] = g as u32;
            if k + 1 == others.len() {
                out[ggrid.index(gamma)] = Some(cur.profile(layout.t[main]));
            } else {
                walk(k + 1, Echelon { vecs: cur.vecs.clone() }, gamma, ctx, out);
            }
        }
    }
    let mut gamma = vec![0u32; others.len()];
    walk(0, root, &mut gamma, &(&others, &layout, &ggrid, main), &mut profiles);

    let grid = Grid::new(bound);
    let below = |p: &Profile, a: usize| p.dim - p.orders[..a].iter().filter(|&&b| b).count();
    let table = (0..grid.len())
        .map(|idx| {
            let alpha = grid.coords(idx);
            let a = alpha[main] as usize;
            let g: Vec<u32> = others.iter().map(|&o| alpha[o]).collect();
            let here = profiles[ggrid.index(&g)].as_ref().unwrap();
            if !here.orders[a] {
                return false;
            }
            let dim = below(here, a);
            (0..others.len()).all(|k| {
                let mut g2 = g.clone();
                g2[k] += 1;
                below(profiles[ggrid.index(&g2)].as_ref().unwrap(), a) < dim
            })
        })
        .collect();
    Ok((grid, table))
}

/// Value semigroup with its conductor found inside `[0, bound]`. The box must
/// leave room for one multiplicity step above the conductor.
pub fn value_semigroup(c: &CurveParam, bound: &[u32]) -> Result<GoodSemigroup> {
    let d = c.branches.len();
    if d == 0 {
        return Err(Error::EmptySet);
    }
    if bound.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: bound.len() });
    }
    let (grid, table) = value_table(c, bound)?;
    let step: Vec<u32> =
        c.branches.iter().map(|b| b.x.order().unwrap_or(1).max(1) as u32).collect();
    let cond = crate::semigroup::minimal_conductor(&grid, &table)
        .filter(|cd| cd.iter().zip(&step).zip(bound).all(|((x, s), b)| x + s <= *b))
        .ok_or_else(|| Error::BoundTooSmall(format!("{bound:?}")))?;
    let s = GoodSemigroup::from_table(grid, table).retruncate(&cond);
    s.check()?;
    Ok(s)
}

/// Starts from a bound of a few multiplicities per branch and doubles on
/// [`Error::BoundTooSmall`]; the branches must carry enough precision.
pub fn value_semigroup_auto(c: &CurveParam) -> Result<GoodSemigroup> {
    let mut bound: Vec<u32> = c.branches.iter().map(|b| 4 * b.x.order().unwrap_or(1).max(1) as u32 + 4).collect();
    loop {
        match value_semigroup(c, &bound) {
            Err(Error::BoundTooSmall(_)) => {
                let prec = c.branches.iter().map(|b| b.x.precision().min(b.y.precision())).min().unwrap_or(0);
                let next: Vec<u32> = bound.iter().map(|b| 2 * b).collect();
                if next.iter().any(|&b| b as usize + 1 > prec) {
                    return Err(Error::BoundTooSmall(format!("{bound:?} at precision {prec}")));
                }
                bound = next;
            }
            r => return r,
        }
    }
}

/// Branchwise `(x, y/x)`.
pub fn blow_up_param(c: &CurveParam) -> Result<CurveParam> {
    let branches = c
        .branches
        .iter()
        .map(|b| {
            let (nx, ny) = (b.x.order(), b.y.order());
            if nx.is_none() || ny.is_some_and(|v| v < nx.unwrap()) {
                return Err(Error::NotTransversal);
            }
            Ok(BranchParam { x: b.x.clone(), y: b.y.div(&b.x)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveParam { branches })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordinateChange {
    Swap,
    /// `y ↦ y + λx`.
    Shear(Q),
}

pub fn coordinate_change(c: &CurveParam, kind: &CoordinateChange) -> CurveParam {
    let branches = c
        .branches
        .iter()
        .map(|b| match kind {
            CoordinateChange::Swap => BranchParam { x: b.y.clone(), y: b.x.clone() },
            CoordinateChange::Shear(l) => BranchParam { x: b.x.clone(), y: b.y.add(&b.x.scale(l)) },
        })
        .collect();
    CurveParam { branches }
}
