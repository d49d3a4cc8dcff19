//! Multiplicity sequences of plane branches, proximity, and the H-type
//! encoding used by Hamburger-Noether expansions.

use crate::error::{Error, Result};
use crate::semigroup::GoodSemigroup;
use crate::transfer::{blow_down_semigroup, blow_up_semigroup};
use std::fmt;

/// A plane multiplicity sequence, stored up to and including its first 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneSequence {
    prefix: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub ok: bool,
    pub reason: Option<String>,
    /// `r(e_j)` up to the last entry that can be a satellite; empty unless `ok`.
    pub restriction_numbers: Vec<u8>,
    /// `true` for satellite entries (`r = 2`).
    pub satellite: Vec<bool>,
}

fn at(e: &[u32], i: usize) -> u32 {
    e.get(i).copied().unwrap_or(1)
}

fn proximity_failure(e: &[u32]) -> Option<String> {
    if e.is_empty() {
        return Some("empty sequence".into());
    }
    if let Some(i) = e.iter().position(|&x| x == 0) {
        return Some(format!("entry {i} is zero"));
    }
    for i in 0..e.len() {
        let (a, b) = (at(e, i), at(e, i + 1));
        if b > a {
            return Some(format!("increase at position {}", i + 1));
        }
        if b < a {
            let (q, r) = (a / b, a % b);
            for j in 1..=q as usize {
                if at(e, i + j) != b {
                    return Some(format!("proximity fails at {i}: expected {q} entries equal to {b}"));
                }
            }
            if r != 0 && at(e, i + q as usize + 1) != r {
                return Some(format!("proximity fails at {i}: expected remainder {r} at {}", i + q as usize + 1));
            }
        }
    }
    None
}

/// `h(i)`: the number of following entries summing to `e_i`.
fn sum_length(e: &[u32], i: usize) -> usize {
    let mut acc = 0;
    let mut k = 0;
    while acc < at(e, i) {
        k += 1;
        acc += at(e, i + k);
    }
    k
}

pub fn is_plane_sequence(e: &[u32]) -> SequenceReport {
    if let Some(reason) = proximity_failure(e) {
        return SequenceReport { ok: false, reason: Some(reason), restriction_numbers: vec![], satellite: vec![] };
    }
    let prefix = trimmed(e);
    // Entries past the last sum reaching out of the prefix are all free.
    let n = (0..prefix.len()).map(|i| i + sum_length(&prefix, i)).max().unwrap() + 1;
    let mut r = vec![0u8; n];
    for i in 0..n {
        let h = sum_length(&prefix, i);
        for j in i + 1..=(i + h).min(n - 1) {
            r[j] += 1;
        }
    }
    r[0] = 1;
    let satellite = r.iter().map(|&x| x == 2).collect();
    SequenceReport { ok: true, reason: None, restriction_numbers: r, satellite }
}

fn trimmed(e: &[u32]) -> Vec<u32> {
    let mut v: Vec<u32> = match e.iter().position(|&x| x == 1) {
        Some(p) => e[..=p].to_vec(),
        None => e.to_vec(),
    };
    if v.last() != Some(&1) {
        v.push(1);
    }
    v
}

impl PlaneSequence {
    /// Accepts any list whose continuation by 1's is a plane sequence.
    pub fn new(e: &[u32]) -> Result<PlaneSequence> {
        match proximity_failure(e) {
            Some(reason) => Err(Error::InvalidSequence(reason)),
            None => Ok(PlaneSequence { prefix: trimmed(e) }),
        }
    }

    pub fn smooth() -> PlaneSequence {
        PlaneSequence { prefix: vec![1] }
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn get(&self, i: usize) -> u32 {
        at(&self.prefix, i)
    }

    pub fn multiplicity(&self) -> u32 {
        self.prefix[0]
    }

    pub fn is_smooth(&self) -> bool {
        self.prefix[0] == 1
    }

    /// The sequence of the first blow-up.
    pub fn tail(&self) -> PlaneSequence {
        if self.is_smooth() {
            return self.clone();
        }
        PlaneSequence { prefix: self.prefix[1..].to_vec() }
    }

    pub fn h(&self, i: usize) -> usize {
        sum_length(&self.prefix, i)
    }

    /// `r(e_j)`; entries in the tail of 1's are free.
    pub fn restriction(&self, j: usize) -> u8 {
        if j == 0 {
            return 1;
        }
        (0..j).filter(|&i| j <= i + self.h(i)).count() as u8
    }

    pub fn report(&self) -> SequenceReport {
        is_plane_sequence(&self.prefix)
    }
}

impl fmt::Debug for PlaneSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.prefix)
    }
}

/// One row of an H-type: `h = None` marks the final infinite row and `k` is
/// present on the rows where the value of the previous row is a multiple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HRow {
    pub k: Option<u32>,
    pub h: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HType {
    pub rows: Vec<HRow>,
}

impl HType {
    pub fn new(rows: Vec<HRow>) -> Result<HType> {
        let bad = |m: String| Err(Error::InvalidHType(m));
        let r = match rows.len() {
            0 => return bad("no rows".into()),
            n => n - 1,
        };
        for (j, row) in rows.iter().enumerate() {
            match (j == r, row.h) {
                (true, Some(_)) => return bad("last row must be infinite".into()),
                (false, None) => return bad(format!("row {j} is infinite but not last")),
                (false, Some(0)) => return bad(format!("row {j} has h = 0")),
                _ => {}
            }
            match row.k {
                Some(_) if j == 0 => return bad("row 0 cannot carry k".into()),
                None if j == r && r > 0 => return bad("last row must carry k".into()),
                Some(k) if k < 2 || row.h.is_some_and(|h| k > h) => {
                    return bad(format!("row {j}: need 2 <= k <= h"));
                }
                _ => {}
            }
        }
        Ok(HType { rows })
    }

    pub fn r(&self) -> usize {
        self.rows.len() - 1
    }

    /// `n_j = ν(z_j)`.
    pub fn n(&self) -> Vec<u32> {
        let r = self.r();
        let mut n = vec![0u32; r + 1];
        n[r] = 1;
        for j in (1..=r).rev() {
            n[j - 1] = match self.rows[j].k {
                Some(k) => k * n[j],
                None => self.rows[j].h.unwrap() * n[j] + n[j + 1],
            };
        }
        n
    }

    /// Rows carrying `k`, i.e. `s_1 < … < s_g`.
    pub fn s(&self) -> Vec<usize> {
        (0..self.rows.len()).filter(|&j| self.rows[j].k.is_some()).collect()
    }
}

pub fn h_from_sequence(e: &PlaneSequence) -> HType {
    let p = e.prefix();
    let mut n: Vec<u32> = Vec::new();
    let mut h: Vec<u32> = Vec::new();
    for &x in p {
        if n.last() == Some(&x) {
            *h.last_mut().unwrap() += 1;
        } else {
            n.push(x);
            h.push(1);
        }
    }
    let r = n.len() - 1;
    let rows = (0..=r)
        .map(|j| HRow {
            k: (j > 0 && n[j - 1] % n[j] == 0).then(|| n[j - 1] / n[j]),
            h: (j < r).then_some(h[j]),
        })
        .collect();
    HType { rows }
}

pub fn sequence_from_h(t: &HType) -> Result<PlaneSequence> {
    let t = HType::new(t.rows.clone())?;
    let n = t.n();
    let mut e = Vec::new();
    for j in 0..t.r() {
        e.extend(std::iter::repeat(n[j]).take(t.rows[j].h.unwrap() as usize));
    }
    e.push(1);
    PlaneSequence::new(&e).map_err(|err| Error::InvalidHType(err.to_string()))
}

/// Value semigroup of any plane branch with multiplicity sequence `e`.
pub fn semigroup_from_sequence(e: &PlaneSequence) -> Result<GoodSemigroup> {
    let mut s = GoodSemigroup::natural(1);
    for &m in e.prefix().iter().rev().skip(1) {
        s = blow_down_semigroup(&s, &[m]).map_err(|err| Error::InvalidSequence(err.to_string()))?;
    }
    Ok(s)
}

pub fn sequence_from_semigroup(s: &GoodSemigroup) -> Result<PlaneSequence> {
    if s.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: s.dim() });
    }
    let mut e = Vec::new();
    let mut cur = s.clone();
    while cur.conductor()[0] > 0 {
        let (next, m) = blow_up_semigroup(&cur).map_err(|err| Error::NotPlane(err.to_string()))?;
        e.push(m[0]);
        cur = next;
    }
    e.push(1);
    let e = PlaneSequence::new(&e).map_err(|err| Error::NotPlane(err.to_string()))?;
    // Blow-ups of a non-plane semigroup can still end in N.
    if semigroup_from_sequence(&e)? != *s {
        return Err(Error::NotPlane(format!("the blow-up sequence {:?} belongs to another semigroup", e.prefix())));
    }
    Ok(e)
}
