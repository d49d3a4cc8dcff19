//! Independent oracles and generators shared by the integration tests. Nothing
//! here calls into the library's own versions of what it checks.
#![allow(dead_code)]

pub mod invariants;

use goodsemi::branch::PlaneSequence;
use goodsemi::transfer::blow_down_semigroup;
use goodsemi::tree::{build_tree, check_splitting_data, semigroup_from_tree, SplittingData};
use goodsemi::GoodSemigroup;
use rand::rngs::StdRng;
use rand::Rng;

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Membership in the numerical semigroup generated by `gens`, for `0..=upto`.
pub fn numerical_set(gens: &[u32], upto: u32) -> Vec<bool> {
    let mut m = vec![false; upto as usize + 1];
    m[0] = true;
    for s in 1..=upto as usize {
        m[s] = gens.iter().any(|&g| g as usize <= s && g > 0 && m[s - g as usize]);
    }
    m
}

/// Conductor of a numerical semigroup by brute force (gcd must be 1).
pub fn numerical_conductor(gens: &[u32]) -> u32 {
    let top = gens.iter().copied().max().unwrap_or(1).pow(2) + 2;
    let m = numerical_set(gens, top);
    (0..=top).rev().find(|&s| !m[s as usize]).map_or(0, |f| f + 1)
}

/// Generators `β̄_0 < … < β̄_g` of a plane branch semigroup: the gcds
/// `e_i = gcd(β̄_0..β̄_i)` strictly decrease to 1 and `n_i β̄_i < β̄_{i+1}`
/// with `n_i = e_{i-1}/e_i`. Conductor `Σ (n_i − 1) β̄_i − β̄_0 + 1`.
pub fn plane_generators_upto(cmax: u32) -> Vec<Vec<u32>> {
    fn extend(b: &mut Vec<u32>, e: u32, c: i64, cmax: u32, out: &mut Vec<Vec<u32>>) {
        if e == 1 {
            out.push(b.clone());
            return;
        }
        let last = *b.last().unwrap();
        let lower = if b.len() == 1 {
            last + 1
        } else {
            let prev_e = b[..b.len() - 1].iter().fold(0, |a, &x| gcd(a, x));
            (prev_e / e) * last + 1
        };
        let mut nb = lower;
        loop {
            let ne = gcd(e, nb);
            // Each step adds (n − 1)·β̄ ≥ β̄ to the conductor.
            if c + nb as i64 > cmax as i64 {
                break;
            }
            if ne < e {
                let n = e / ne;
                let c2 = c + (n as i64 - 1) * nb as i64;
                if c2 <= cmax as i64 {
                    b.push(nb);
                    extend(b, ne, c2, cmax, out);
                    b.pop();
                }
            }
            nb += 1;
        }
    }
    let mut out = vec![vec![1]];
    for b0 in 2..=cmax + 1 {
        extend(&mut vec![b0], b0, 1 - b0 as i64, cmax, &mut out);
    }
    out
}

/// Puiseux characteristic `(n; β_1..β_g)` from semigroup generators.
pub fn characteristic(gens: &[u32]) -> (u32, Vec<u32>) {
    let n = gens[0];
    let mut e = vec![n];
    for &g in &gens[1..] {
        e.push(gcd(*e.last().unwrap(), g));
    }
    let mut beta: Vec<u32> = Vec::new();
    for i in 1..gens.len() {
        if i == 1 {
            beta.push(gens[1]);
        } else {
            let ni = e[i - 2] / e[i - 1];
            beta.push(gens[i] + beta[i - 2] - ni * gens[i - 1]);
        }
    }
    (n, beta)
}

/// Semigroup generators from a Puiseux characteristic.
pub fn generators(n: u32, beta: &[u32]) -> Vec<u32> {
    let mut g = vec![n];
    let mut e = n;
    for (i, &b) in beta.iter().enumerate() {
        if i == 0 {
            g.push(b);
        } else {
            let ne = gcd(e, beta[i - 1]);
            let ni = e / ne;
            let prev = *g.last().unwrap();
            g.push(ni * prev + b - beta[i - 1]);
            e = ne;
        }
    }
    g
}

/// Characteristic of the first blow-up of a plane branch.
pub fn blow_up_characteristic(n: u32, beta: &[u32]) -> (u32, Vec<u32>) {
    if n == 1 || beta.is_empty() {
        return (1, vec![]);
    }
    if beta[0] > 2 * n {
        return (n, beta.iter().map(|b| b - n).collect());
    }
    // After dividing by x the first exponent drops below n: swap the roles
    // of the coordinates (inversion of the Puiseux series).
    let m = beta[0] - n;
    let mut out = Vec::new();
    if n % m != 0 {
        out.push(n);
    }
    out.extend(beta[1..].iter().map(|b| b - beta[0] + n));
    (m, out)
}

pub fn plane_blow_up_generators(gens: &[u32]) -> Vec<u32> {
    let (n, beta) = characteristic(gens);
    let (m, b) = blow_up_characteristic(n, &beta);
    if m == 1 {
        vec![1]
    } else {
        generators(m, &b)
    }
}

/// Proximity check written out from the definition.
pub fn proximity_ok(e: &[u32]) -> bool {
    let at = |i: usize| e.get(i).copied().unwrap_or(1);
    if e.is_empty() || e.contains(&0) {
        return false;
    }
    for i in 0..e.len() {
        if at(i + 1) > at(i) {
            return false;
        }
        if at(i) > at(i + 1) {
            let (q, r) = (at(i) / at(i + 1), at(i) % at(i + 1));
            if (1..=q as usize).any(|j| at(i + j) != at(i + 1)) {
                return false;
            }
            if r != 0 && at(i + q as usize + 1) != r {
                return false;
            }
        }
    }
    true
}

/// Plane multiplicity prefixes (ending in a single 1) with `e_0 ≤ max_e0`
/// and at most `max_len` entries above 1.
pub fn plane_sequences(max_e0: u32, max_len: usize) -> Vec<Vec<u32>> {
    fn grow(p: &mut Vec<u32>, max_len: usize, out: &mut Vec<Vec<u32>>) {
        let mut full = p.clone();
        full.push(1);
        if proximity_ok(&full) {
            out.push(full);
        }
        if p.len() == max_len {
            return;
        }
        let top = *p.last().unwrap();
        for x in 2..=top {
            p.push(x);
            grow(p, max_len, out);
            p.pop();
        }
    }
    let mut out = vec![vec![1]];
    for e0 in 2..=max_e0 {
        grow(&mut vec![e0], max_len, &mut out);
    }
    out
}

/// Plane sequences with `Σ e_i(e_i − 1) ≤ max`; this sum is the conductor
/// of the branch semigroup.
pub fn plane_sequences_milnor(max: u32) -> Vec<Vec<u32>> {
    fn grow(p: &mut Vec<u32>, budget: u32, out: &mut Vec<Vec<u32>>) {
        let mut full = p.clone();
        full.push(1);
        if proximity_ok(&full) {
            out.push(full);
        }
        let top = *p.last().unwrap();
        for x in 2..=top {
            if x * (x - 1) <= budget {
                p.push(x);
                grow(p, budget - x * (x - 1), out);
                p.pop();
            }
        }
    }
    let mut out = vec![vec![1]];
    for e0 in 2u32.. {
        if e0 * (e0 - 1) > max {
            break;
        }
        grow(&mut vec![e0], max - e0 * (e0 - 1), &mut out);
    }
    out
}

pub fn milnor(e: &[u32]) -> u32 {
    e.iter().map(|x| x * (x - 1)).sum()
}

pub fn seq(e: &[u32]) -> PlaneSequence {
    PlaneSequence::new(e).unwrap()
}

/// A numerical semigroup with conductor at most `cmax`.
pub fn random_numerical(rng: &mut StdRng, cmax: u32) -> GoodSemigroup {
    loop {
        let k = rng.gen_range(1..=3);
        let gens: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=cmax + 1)).collect();
        if gens.iter().fold(0, |a, &x| gcd(a, x)) != 1 {
            continue;
        }
        if numerical_conductor(&gens) <= cmax {
            return GoodSemigroup::numerical(&gens).unwrap();
        }
    }
}

/// A random element of `s` with positive coordinates, inside `[1, c + 2]`.
pub fn random_positive_element(rng: &mut StdRng, s: &GoodSemigroup) -> Vec<u32> {
    loop {
        let p: Vec<u32> = s.conductor().iter().map(|&c| rng.gen_range(1..=c + 2)).collect();
        if s.contains(&p).unwrap() {
            return p;
        }
    }
}

/// Good semigroups of dimension ≤ 3 with conductor coordinates ≤ `cmax`:
/// products of numerical semigroups, and blow-downs of such products.
pub fn random_good(rng: &mut StdRng, cmax: u32) -> GoodSemigroup {
    loop {
        let d = rng.gen_range(1..=3);
        let mut s = random_numerical(rng, cmax);
        for _ in 1..d {
            s = s.product(&random_numerical(rng, cmax));
        }
        if rng.gen_bool(0.5) && d >= 2 {
            let w: Vec<u32> = (0..d).map(|_| rng.gen_range(1..=3)).collect();
            let w = if s.contains(&w).unwrap() { w } else { random_positive_element(rng, &s) };
            if w.iter().sum::<u32>() > 8 {
                continue;
            }
            match blow_down_semigroup(&s, &w) {
                Ok(t) => s = t,
                Err(_) => continue,
            }
        }
        if s.conductor().iter().all(|&c| c <= cmax) {
            return s;
        }
    }
}

/// Splitting data on `2..=max_d` branches with multiplicities at most 3,
/// accepted by the checker; `local` keeps every `k ≥ 0`.
pub fn random_data(rng: &mut StdRng, max_d: usize, local: bool) -> SplittingData {
    let pool: Vec<PlaneSequence> = plane_sequences(3, 3).iter().map(|e| seq(e)).collect();
    loop {
        let d = rng.gen_range(2..=max_d);
        let e: Vec<PlaneSequence> = (0..d).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let mut k = vec![vec![0i64; d]; d];
        for i in 0..d {
            for j in i + 1..d {
                k[i][j] = rng.gen_range(if local { 0 } else { -1 }..=3);
                k[j][i] = k[i][j];
            }
        }
        if check_splitting_data(&e, &k).is_ok() {
            return SplittingData { e, k };
        }
    }
}

/// Value semigroup of a plane curve with one to three branches, through its
/// multiplicity tree.
pub fn random_curve_semigroup(rng: &mut StdRng) -> GoodSemigroup {
    if rng.gen_bool(0.25) {
        let pool = plane_sequences(4, 4);
        let e = &pool[rng.gen_range(0..pool.len())];
        return goodsemi::branch::semigroup_from_sequence(&seq(e)).unwrap();
    }
    let local = rng.gen_bool(0.7);
    let data = random_data(rng, 3, local);
    semigroup_from_tree(&build_tree(&data).unwrap()).unwrap()
}
