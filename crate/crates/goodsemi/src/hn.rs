//! Hamburger-Noether expansions of plane branches: computing them from a
//! parametrization, inverting them, synthesizing branches with a prescribed
//! multiplicity sequence, and reading off splitting numbers and intersection
//! multiplicities.

use crate::branch::{h_from_sequence, HRow, HType, PlaneSequence};
use crate::error::{Error, Result};
use crate::series::{q, Series, Q};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchParam {
    pub x: Series,
    pub y: Series,
}

/// `z_{j-1} = Σ_{i≤h_j} a_{j,i} z_j^i + z_j^{h_j} z_{j+1}` for the finite rows,
/// and `z_{r-1} = Σ_{i≥1} a_{r,i} z_r^i` for the last one, with `z_{-1} = y`,
/// `z_0 = x` and `z_r = t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNExpansion {
    /// `a_{j,1..h_j}` for `j < r`.
    pub rows: Vec<Vec<Q>>,
    /// The last row as a series in `z_r`: coefficient `i` is `a_{r,i}`.
    pub last: Series,
    /// The last row is a polynomial: coefficients past its precision are zero.
    pub exact: bool,
}

impl HNExpansion {
    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn h(&self, j: usize) -> Option<u32> {
        self.rows.get(j).map(|a| a.len() as u32)
    }

    /// `a_{j,i}`, or `None` past the known part of the last row.
    pub fn coeff(&self, j: usize, i: usize) -> Option<Q> {
        if j < self.r() {
            return Some(self.rows[j][i - 1].clone());
        }
        if i < self.last.precision() || self.exact {
            Some(self.last.coeff(i))
        } else {
            None
        }
    }

    /// First nonzero coefficient index of row `j` (`k_j` on free rows).
    fn first_nonzero(&self, j: usize) -> Option<usize> {
        if j < self.r() {
            self.rows[j].iter().position(|a| !a.is_zero()).map(|i| i + 1)
        } else {
            self.last.order()
        }
    }

    /// `n_j = ν(z_j)` for `j = 0..=r`.
    pub fn n(&self) -> Vec<u32> {
        let r = self.r();
        let mut n = vec![0u32; r + 1];
        n[r] = 1;
        for j in (1..=r).rev() {
            n[j - 1] = match self.first_nonzero(j) {
                Some(k) => k as u32 * n[j],
                None => self.h(j).unwrap() * n[j] + n[j + 1],
            };
        }
        n
    }

    pub fn htype(&self) -> HType {
        let r = self.r();
        let rows = (0..=r)
            .map(|j| HRow { k: if j == 0 { None } else { self.first_nonzero(j).map(|k| k as u32) }, h: self.h(j) })
            .collect();
        HType { rows }
    }
}

pub fn hn_expand(b: &BranchParam) -> Result<HNExpansion> {
    let nx = b.x.order().ok_or_else(|| Error::InsufficientPrecision("x vanishes to its precision".into()))?;
    if nx == 0 {
        return Err(Error::NotTransversal);
    }
    if b.y.order().is_some_and(|v| v < nx) {
        return Err(Error::NotTransversal);
    }
    let mut rows = Vec::new();
    let (mut v, mut w) = (b.x.clone(), b.y.clone());
    loop {
        let nv = v.order().unwrap();
        if nv == 1 {
            // v is a parameter, so w is a power series in it.
            let mut c = vec![Q::zero()];
            while w.precision() > 1 {
                let quot = w.div(&v)?;
                let a = quot.coeff(0);
                w = quot.sub(&Series::monomial(a.clone(), 0, quot.precision()));
                c.push(a);
            }
            let p = c.len();
            return Ok(HNExpansion { rows, last: Series::new(c, p), exact: false });
        }
        let mut row = Vec::new();
        loop {
            match w.order() {
                Some(o) if o < nv => break,
                None if w.precision() <= nv => {
                    return Err(Error::InsufficientPrecision(format!(
                        "row {}: remainder vanishes to precision {} (or the parametrization is not primitive)",
                        rows.len(),
                        w.precision()
                    )))
                }
                _ => {}
            }
            let quot = w.div(&v)?;
            if quot.precision() == 0 {
                return Err(Error::InsufficientPrecision(format!("row {}", rows.len())));
            }
            let a = quot.coeff(0);
            w = quot.sub(&Series::monomial(a.clone(), 0, quot.precision()));
            row.push(a);
        }
        rows.push(row);
        std::mem::swap(&mut v, &mut w);
    }
}

/// Parametrization with `t = z_r`, truncated at `precision`.
pub fn hn_to_param(h: &HNExpansion, precision: usize) -> BranchParam {
    let r = h.r();
    let last = if h.exact { Series::new(h.last.coeffs().to_vec(), precision.max(h.last.precision())) } else { h.last.clone() };
    // z[j + 1] holds z_j.
    let mut z = vec![Series::zero(0); r + 2];
    z[r + 1] = Series::t(precision);
    z[r] = last.truncate(precision);
    for j in (0..r).rev() {
        let zj = &z[j + 1];
        let mut acc = Series::zero(precision);
        let mut pow = Series::one(precision);
        for a in &h.rows[j] {
            pow = pow.mul(zj).truncate(precision);
            if !a.is_zero() {
                acc = acc.add(&pow.scale(a));
            }
        }
        acc = acc.add(&pow.mul(&z[j + 2])).truncate(precision);
        z[j] = acc;
    }
    BranchParam { x: z[1].clone(), y: z[0].clone() }
}

pub fn multiplicity_sequence(h: &HNExpansion) -> PlaneSequence {
    let n = h.n();
    let mut e = Vec::new();
    for j in 0..h.r() {
        e.extend(std::iter::repeat(n[j]).take(h.rows[j].len()));
    }
    e.push(1);
    PlaneSequence::new(&e).expect("HN expansions give plane sequences")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Zero,
    NonZero,
    Free,
}

/// Slot kinds at positions `1..=len`; position `Σ_{j'<j} h_{j'} + i` holds `a_{j,i}`.
fn slots(t: &HType, len: usize) -> Vec<Slot> {
    let mut out = Vec::with_capacity(len);
    let mut j = 0;
    let mut i = 1;
    while out.len() < len {
        let row = t.rows[j];
        out.push(match row.k {
            _ if j == 0 => Slot::Free,
            None => Slot::Zero,
            Some(k) if (i as u32) < k => Slot::Zero,
            Some(k) if i as u32 == k => Slot::NonZero,
            Some(_) => Slot::Free,
        });
        i += 1;
        if row.h.is_some_and(|h| i as u32 > h) {
            j += 1;
            i = 1;
        }
    }
    out
}

/// Number of positions covered by the finite rows plus the first nonzero slot
/// of the last row.
fn base_len(t: &HType) -> usize {
    let finite: u32 = t.rows.iter().filter_map(|r| r.h).sum();
    finite as usize + t.rows.last().unwrap().k.unwrap_or(1) as usize
}

fn assemble(t: &HType, vals: &[Q]) -> HNExpansion {
    let mut rows = Vec::new();
    let mut p = 0;
    for row in &t.rows {
        if let Some(h) = row.h {
            rows.push(vals[p..p + h as usize].to_vec());
            p += h as usize;
        }
    }
    let mut c = vec![Q::zero()];
    c.extend(vals[p..].iter().cloned());
    let len = c.len();
    HNExpansion { rows, last: Series::new(c, len), exact: true }
}

struct Counter(i64);

impl Counter {
    fn next_avoiding(&mut self, avoid: &[Q]) -> Q {
        loop {
            let v = q(self.0);
            self.0 += 1;
            if !avoid.contains(&v) {
                return v;
            }
        }
    }
}

fn default_values(t: &HType, len: usize, counter: &mut Counter) -> Vec<Q> {
    let base = base_len(t);
    slots(t, len)
        .into_iter()
        .enumerate()
        .map(|(p, s)| match s {
            Slot::Zero => Q::zero(),
            _ if p >= base => Q::zero(),
            _ => counter.next_avoiding(&[]),
        })
        .collect()
}

/// A branch with multiplicity sequence `e`: free coefficients take the values
/// 1, 2, 3, … in order, and the last row stops at its first nonzero term.
pub fn synth_branch(e: &PlaneSequence) -> HNExpansion {
    let t = h_from_sequence(e);
    let vals = default_values(&t, base_len(&t), &mut Counter(1));
    assemble(&t, &vals)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub s: usize,
    pub t: usize,
    pub k: i64,
    pub intersection: u64,
}

pub fn splitting_data(h: &HNExpansion, g: &HNExpansion) -> Result<Splitting> {
    let (nh, ng) = (h.n(), g.n());
    let mut sum = 0u64;
    let mut before = 0usize;
    let mut s = 0;
    while s < h.r() && s < g.r() && h.rows[s] == g.rows[s] {
        let hs = h.rows[s].len();
        sum += hs as u64 * nh[s] as u64 * ng[s] as u64;
        before += hs;
        s += 1;
    }
    let (hs, gs) = (h.h(s), g.h(s));
    let lim = match (hs, gs) {
        (Some(a), Some(b)) => Some(a.min(b) as usize + 1),
        (Some(a), None) | (None, Some(a)) => Some(a as usize + 1),
        (None, None) => None,
    };
    let mut t = 1;
    loop {
        if lim == Some(t) {
            break;
        }
        match (h.coeff(s, t), g.coeff(s, t)) {
            (Some(a), Some(b)) if a != b => break,
            (Some(_), Some(_)) => {
                if lim.is_none() && h.exact && g.exact && t >= h.last.precision() && t >= g.last.precision() {
                    return Err(Error::IdenticalBranches);
                }
            }
            _ if lim.is_none() => return Err(Error::IdenticalBranches),
            _ => return Err(Error::InsufficientPrecision(format!("row {s} coefficient {t}"))),
        }
        t += 1;
    }
    let k = (before + t) as i64 - 1;
    let (n, m) = (nh[s] as u64, ng[s] as u64);
    let t64 = t as u64;
    let intersection = match (hs, gs) {
        (_, Some(b)) if t == b as usize + 1 && hs.is_none_or(|a| b < a) => sum + b as u64 * n * m + ng[s + 1] as u64 * n,
        (Some(a), _) if t == a as usize + 1 => sum + a as u64 * n * m + nh[s + 1] as u64 * m,
        _ => sum + t64 * n * m,
    };
    Ok(Splitting { s, t, k, intersection })
}

pub fn noether_intersection(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> u64 {
    (0..=k).map(|j| e.get(j as usize) as u64 * f.get(j as usize) as u64).sum()
}

pub fn splitting_from_intersection(e: &PlaneSequence, f: &PlaneSequence, m: u64) -> Result<i64> {
    let mut sum = 0u64;
    let mut k = -1i64;
    while sum < m {
        k += 1;
        sum += e.get(k as usize) as u64 * f.get(k as usize) as u64;
    }
    if sum == m {
        Ok(k)
    } else {
        Err(Error::NoSuchK(m))
    }
}

/// Splitting number of two branches given by parametrizations in the same
/// coordinates; branches through different points give −1.
pub fn splitting_number(a: &BranchParam, b: &BranchParam) -> Result<i64> {
    let (ca, cb) = (a.y.coeff(0), b.y.coeff(0));
    if ca != cb || !a.x.coeff(0).is_zero() || !b.x.coeff(0).is_zero() {
        return Ok(-1);
    }
    let shift = |p: &BranchParam| BranchParam { x: p.x.clone(), y: p.y.sub(&Series::monomial(ca.clone(), 0, p.y.precision())) };
    Ok(splitting_data(&hn_expand(&shift(a))?, &hn_expand(&shift(b))?)?.k)
}

/// Curves with branch sequences `e` and splitting matrix `k`, as HN expansions
/// in common coordinates plus one constant per `∼_0` class, which is added to
/// `y` to move the classes apart.
pub fn synth_curve_expansions(e: &[PlaneSequence], k: &[Vec<i64>]) -> Result<Vec<(HNExpansion, i64)>> {
    let d = e.len();
    crate::tree::check_splitting_data(e, k)?;
    let types: Vec<HType> = e.iter().map(h_from_sequence).collect();
    let mut counter = Counter(1);
    let mut built: Vec<(Vec<Q>, Vec<Slot>, i64)> = Vec::new();
    for i in 0..d {
        let reference = (0..i).max_by_key(|&j| (k[i][j], std::cmp::Reverse(j)));
        let shared = reference.map_or(-1, |j| k[i][j]);
        let class = match reference {
            Some(j) if shared >= 0 => built[j].2,
            _ => built.iter().map(|b| b.2 + 1).max().unwrap_or(0),
        };
        let len = base_len(&types[i]).max((shared + 2) as usize);
        let kinds = slots(&types[i], len);
        let mut vals = default_values(&types[i], len, &mut counter);
        if let Some(j) = reference.filter(|_| shared >= 0) {
            let rv = &built[j].0;
            for p in 0..shared as usize {
                let theirs = rv.get(p).cloned().unwrap_or_else(Q::zero);
                let clash = match kinds[p] {
                    Slot::Zero => !theirs.is_zero(),
                    Slot::NonZero => theirs.is_zero(),
                    Slot::Free => false,
                };
                if clash {
                    return Err(Error::NotAdmissible { i: j, j: i, k: shared });
                }
                vals[p] = theirs;
            }
            let p = shared as usize;
            if kinds[p] != Slot::Zero {
                let avoid: Vec<Q> = built
                    .iter()
                    .filter(|(v, _, c)| *c == class && (0..p).all(|x| v.get(x).cloned().unwrap_or_else(Q::zero) == vals[x]))
                    .map(|(v, _, _)| v.get(p).cloned().unwrap_or_else(Q::zero))
                    .collect();
                let mut avoid = avoid;
                if kinds[p] == Slot::NonZero {
                    avoid.push(Q::zero());
                }
                if avoid.contains(&vals[p]) {
                    vals[p] = counter.next_avoiding(&avoid);
                }
            }
        }
        built.push((vals, kinds, class));
    }
    let out: Vec<(HNExpansion, i64)> =
        built.iter().zip(&types).map(|((v, _, c), t)| (assemble(t, v), *c)).collect();
    for i in 0..d {
        for j in 0..i {
            let got = if out[i].1 != out[j].1 { -1 } else { splitting_data(&out[i].0, &out[j].0)?.k };
            if got != k[i][j] {
                return Err(Error::NotAdmissible { i: j, j: i, k: k[i][j] });
            }
        }
    }
    Ok(out)
}

pub fn synth_curve(e: &[PlaneSequence], k: &[Vec<i64>], precision: usize) -> Result<Vec<BranchParam>> {
    Ok(synth_curve_expansions(e, k)?
        .into_iter()
        .map(|(h, c)| {
            let mut b = hn_to_param(&h, precision);
            b.y = b.y.add(&Series::monomial(q(c), 0, precision));
            b
        })
        .collect())
}
