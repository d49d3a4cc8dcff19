//! Invariants checked on generated instances. Each returns a description of
//! the first failure; the proptest targets and the acceptance runner share them.

use super::{gcd, numerical_set, plane_blow_up_generators};
use goodsemi::apery::{apery_set_with_margin, cap_stable, level_function, level_via_product};
use goodsemi::branch::{
    h_from_sequence, is_plane_sequence, semigroup_from_sequence, sequence_from_h, sequence_from_semigroup, HType,
    PlaneSequence,
};
use goodsemi::hn::{hn_expand, hn_to_param, multiplicity_sequence, noether_intersection, splitting_data, BranchParam, HNExpansion};
use goodsemi::series::Series;
use goodsemi::transfer::{blow_down_semigroup, blow_up_semigroup, semigroup_from_levels, shift_levels, Direction};
use goodsemi::tree::{build_tree, read_tree, semigroup_from_tree, semigroup_tree, validate_tree, MultiplicityTree, SplittingData};
use goodsemi::valuation::{blow_up_param, coordinate_change, value_of, value_semigroup_auto, CoordinateChange, CurveParam};
use goodsemi::{apery_set, partition_levels, GoodSemigroup, LevelPartition, Point};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn box_points(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out.into_iter().flat_map(|p: Vec<u32>| (0..=b).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

// ---- semigroup_core ----

pub fn wedge_laws(a: &Point, b: &Point, c: &Point) -> Check {
    ensure!(a.wedge(a) == *a, "wedge not idempotent at {a:?}");
    ensure!(a.wedge(b) == b.wedge(a), "wedge not commutative at {a:?}, {b:?}");
    ensure!(a.wedge(&b.wedge(c)) == a.wedge(b).wedge(c), "wedge not associative at {a:?}, {b:?}, {c:?}");
    Ok(())
}

pub fn cap_stability(s: &GoodSemigroup) -> Check {
    ensure!(s.report().ok, "not good: {:?}", s.report());
    let wider: Vec<u32> = s.conductor().iter().map(|c| c + 1).collect();
    let t = s.retruncate(&wider);
    ensure!(t.report().ok, "re-embedding at {wider:?} is not good");
    let probe: Vec<u32> = s.conductor().iter().map(|c| c + 3).collect();
    for p in box_points(&probe) {
        ensure!(s.contains(&p).unwrap() == t.contains(&p).unwrap(), "membership of {p:?} changes with the cap");
    }
    Ok(())
}

pub fn product_project(a: &GoodSemigroup, b: &GoodSemigroup) -> Check {
    let p = a.product(b);
    let (da, db) = (a.dim(), b.dim());
    let left: Vec<usize> = (0..da).collect();
    let right: Vec<usize> = (da..da + db).collect();
    ensure!(p.project(&left).map_err(|e| e.to_string())? == *a, "left projection differs");
    ensure!(p.project(&right).map_err(|e| e.to_string())? == *b, "right projection differs");
    Ok(())
}

/// Products of numerical semigroups against the generator closure.
pub fn contains_product_oracle(g1: &[u32], g2: &[u32]) -> Check {
    let s = GoodSemigroup::numerical(g1).unwrap().product(&GoodSemigroup::numerical(g2).unwrap());
    let m1 = numerical_set(g1, 60);
    let m2 = numerical_set(g2, 60);
    for p in box_points(&[30, 30]) {
        let want = m1[p[0] as usize] && m2[p[1] as usize];
        ensure!(s.contains(&p).unwrap() == want, "contains({p:?}) disagrees with the closure of {g1:?} x {g2:?}");
    }
    Ok(())
}

/// Closure under `+` and `∧` of the elements of `s` that are not a sum of
/// two nonzero elements, inside the box `[0, 2c + 1]` with plain integer
/// arithmetic, compared with `contains` on that box.
pub fn contains_closure_oracle(s: &GoodSemigroup) -> Check {
    use std::collections::BTreeSet;
    let top: Vec<u32> = s.conductor().iter().map(|c| 2 * c + 1).collect();
    let inside = |p: &[u32]| p.iter().zip(&top).all(|(x, t)| x <= t);
    let member: BTreeSet<Vec<u32>> = box_points(&top).into_iter().filter(|p| s.contains(p).unwrap()).collect();
    let zero = vec![0; top.len()];
    let mut sums = BTreeSet::new();
    for a in &member {
        for b in &member {
            if *a != zero && *b != zero {
                sums.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<u32>>());
            }
        }
    }
    let mut closed: BTreeSet<Vec<u32>> = member.iter().filter(|p| !sums.contains(*p)).cloned().collect();
    let gens = closed.len();
    loop {
        let cur: Vec<Vec<u32>> = closed.iter().cloned().collect();
        let mut grew = false;
        for a in &cur {
            for b in &cur {
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if inside(&sum) {
                    grew |= closed.insert(sum);
                }
                grew |= closed.insert(a.iter().zip(b).map(|(x, y)| *x.min(y)).collect());
            }
        }
        if !grew {
            break;
        }
    }
    ensure!(closed == member, "closure of {gens} generators differs from contains: {:?}", closed.symmetric_difference(&member).collect::<Vec<_>>());
    Ok(())
}

// ---- apery_levels ----

pub fn level_laws(s: &GoodSemigroup, omega: &[u32]) -> Check {
    let a = apery_set(s, omega).map_err(|e| e.to_string())?;
    let p = partition_levels(&a);
    let n: u32 = omega.iter().sum();
    ensure!(p.n() == n as usize, "{} levels for omega {omega:?}, expected {n}", p.n());
    let mut all: Vec<Point> = p.levels.iter().flatten().cloned().collect();
    let total = all.len();
    all.sort();
    all.dedup();
    ensure!(all.len() == total, "levels overlap");
    ensure!(all == a.elements(), "levels do not cover the Apery set");
    if s.is_local() {
        ensure!(p.levels[0] == vec![Point::zero(s.dim())], "A_0 = {:?} for a local semigroup", p.levels[0]);
    }
    for (i, li) in p.levels.iter().enumerate() {
        for (j, lj) in p.levels.iter().enumerate() {
            for x in li {
                for y in lj {
                    ensure!(!x.ll(y) || i < j, "{x:?} << {y:?} but levels {i} >= {j}");
                }
            }
        }
    }
    ensure!(cap_stable(s, &p).map_err(|e| e.to_string())?, "partition changes with a wider cap");
    lemma_chain(&p)?;
    lemma_level_function(s, &p)?;
    finite_determination(s, &p)?;
    Ok(())
}

/// Every element of `A_i` lies strictly above some element of each lower
/// level, and a full chain through all levels exists.
fn lemma_chain(p: &LevelPartition) -> Check {
    for i in 1..p.n() {
        for a in &p.levels[i] {
            for j in 0..i {
                ensure!(p.levels[j].iter().any(|b| b.le(a) && b != a), "{a:?} in A_{i} has nothing below it in A_{j}");
            }
        }
    }
    // Chain search from the top level down.
    let mut reach: Vec<Point> = p.levels[p.n() - 1].clone();
    for j in (0..p.n() - 1).rev() {
        reach = p.levels[j].iter().filter(|&b| reach.iter().any(|a| b.le(a) && b != a)).cloned().collect();
        ensure!(!reach.is_empty(), "no chain through level {j}");
    }
    Ok(())
}

/// `λ(α) ≤ j ⇔ ∃β ∈ A_j, α ≤ β` for `α ∈ S` strictly inside the cap.
fn lemma_level_function(s: &GoodSemigroup, p: &LevelPartition) -> Check {
    let inner: Vec<u32> = p.cap.iter().map(|c| c - 1).collect();
    for alpha in box_points(&inner) {
        if !s.contains(&alpha).unwrap() {
            continue;
        }
        let lam = level_function(s, p, &alpha).map_err(|e| e.to_string())?;
        let a = Point::new(alpha.clone());
        for j in 0..p.n() {
            let dominated = p.levels[j].iter().any(|b| a.le(b));
            ensure!((lam <= j) == dominated, "lambda({alpha:?}) = {lam} but domination by A_{j} is {dominated}");
        }
    }
    Ok(())
}

/// Membership of a point beyond the cap is decided by its wedge with the cap.
fn finite_determination(s: &GoodSemigroup, p: &LevelPartition) -> Check {
    let wide: Vec<u32> = p.cap.iter().map(|c| c + 2).collect();
    let margin = 2;
    let q = partition_levels(&apery_set_with_margin(s, &p.omega, p.cap[0] - s.conductor()[0] - p.omega[0] + margin).map_err(|e| e.to_string())?);
    ensure!(q.cap == wide, "unexpected cap {:?}", q.cap);
    for alpha in box_points(&wide) {
        let theta: Vec<u32> = alpha.iter().zip(&p.cap).map(|(a, c)| *a.min(c)).collect();
        ensure!(q.level_of(&alpha) == p.level_of(&theta), "level of {alpha:?} is not that of {theta:?}");
    }
    Ok(())
}

pub fn product_levels(s1: &GoodSemigroup, w1: &[u32], s2: &GoodSemigroup, w2: &[u32]) -> Check {
    let p1 = partition_levels(&apery_set(s1, w1).map_err(|e| e.to_string())?);
    let p2 = partition_levels(&apery_set(s2, w2).map_err(|e| e.to_string())?);
    let s = s1.product(s2);
    let w = [w1, w2].concat();
    let p = partition_levels(&apery_set(&s, &w).map_err(|e| e.to_string())?);
    for (i, l) in p.levels.iter().enumerate() {
        for a in l {
            let via = level_via_product(s1, &p1, s2, &p2, a.coords()).map_err(|e| e.to_string())?;
            ensure!(via == i, "{a:?} in level {i} but factor levels sum to {via}");
        }
    }
    Ok(())
}

// ---- blowup_transfer ----

pub fn blow_round_trip(s: &GoodSemigroup) -> Check {
    if !s.is_local() {
        return Ok(());
    }
    let (b, e) = blow_up_semigroup(s).map_err(|e| e.to_string())?;
    let back = blow_down_semigroup(&b, &e).map_err(|e| e.to_string())?;
    ensure!(back == *s, "blow-down of the blow-up differs: {back:?} vs {s:?}");
    Ok(())
}

pub fn down_up_round_trip(s: &GoodSemigroup, omega: &[u32]) -> Check {
    let down = blow_down_semigroup(s, omega).map_err(|e| e.to_string())?;
    ensure!(down.is_local(), "blow-down is not local");
    ensure!(down.fine_multiplicity().coords() == omega, "fine multiplicity {:?} != {omega:?}", down.fine_multiplicity());
    let (up, e) = blow_up_semigroup(&down).map_err(|e| e.to_string())?;
    ensure!(e == omega && up == *s, "blow-up of the blow-down differs");
    Ok(())
}

/// Level count is preserved by shifting, and the up-shift of a curve
/// semigroup's levels rebuilds a good semigroup.
pub fn shift_conservation(s: &GoodSemigroup) -> Check {
    let e = s.fine_multiplicity().coords().to_vec();
    let p = partition_levels(&apery_set(s, &e).map_err(|e| e.to_string())?);
    let up = shift_levels(&p, &e, Direction::Up).map_err(|e| e.to_string())?;
    ensure!(up.n() == p.n(), "up-shift changed the level count");
    let rebuilt = semigroup_from_levels(&up).map_err(|e| e.to_string())?;
    ensure!(rebuilt.report().ok, "up-shift does not rebuild a good semigroup");
    let down = shift_levels(&up, &e, Direction::Down).map_err(|e| e.to_string())?;
    ensure!(down.n() == p.n(), "down-shift changed the level count");
    Ok(())
}

/// `gens` must generate a plane branch semigroup.
pub fn numerical_blow_up(gens: &[u32]) -> Check {
    let s = GoodSemigroup::numerical(gens).unwrap();
    let want = GoodSemigroup::numerical(&plane_blow_up_generators(gens)).unwrap();
    let (got, e) = blow_up_semigroup(&s).map_err(|e| e.to_string())?;
    ensure!(e == vec![gens[0]], "multiplicity {e:?} for {gens:?}");
    ensure!(got == want, "blow-up of <{gens:?}> is {got:?}, oracle says {want:?}");
    Ok(())
}

pub fn sequence_semigroup_round_trip(gens: &[u32]) -> Check {
    let s = GoodSemigroup::numerical(gens).unwrap();
    let e = sequence_from_semigroup(&s).map_err(|e| format!("{gens:?}: {e}"))?;
    ensure!(semigroup_from_sequence(&e).unwrap() == s, "{gens:?} -> {e:?} does not come back");
    Ok(())
}

// ---- plane_branch ----

pub fn htype_round_trip(t: &HType) -> Check {
    let e = sequence_from_h(t).map_err(|e| e.to_string())?;
    ensure!(h_from_sequence(&e) == *t, "{t:?} -> {e:?} -> {:?}", h_from_sequence(&e));
    Ok(())
}

pub fn sequence_laws(e: &PlaneSequence) -> Check {
    ensure!(sequence_from_h(&h_from_sequence(e)).unwrap() == *e, "h round trip fails on {e:?}");
    let p = e.prefix();
    for i in 0..p.len() {
        let mut acc = 0;
        let mut k = 0;
        while acc < e.get(i) {
            k += 1;
            acc += e.get(i + k);
        }
        ensure!(acc == e.get(i), "no partial sum of the entries after {i} equals e_{i} in {e:?}");
    }
    let r = is_plane_sequence(p);
    ensure!(r.ok, "{e:?} rejected");
    ensure!(r.restriction_numbers.iter().all(|&x| (1..=2).contains(&x)), "restriction numbers {:?}", r.restriction_numbers);
    Ok(())
}

// ---- hn_engine ----

pub fn series_laws(f: &Series, g: &Series) -> Check {
    let (of, og) = (f.order(), g.order());
    if let (Some(a), Some(b)) = (of, og) {
        let prod = f.mul(g);
        if a + b < prod.precision() {
            ensure!(prod.order() == Some(a + b), "order of product {:?} != {a} + {b}", prod.order());
        }
        let sum = f.add(g);
        if let Some(o) = sum.order() {
            ensure!(o >= a.min(b), "order of sum below the minimum");
            if a != b {
                ensure!(o == a.min(b), "order of sum {o} with distinct orders {a}, {b}");
            }
        }
    }
    ensure!(f.add(g).sub(g) == f.truncate(f.add(g).precision()), "add/sub do not cancel");
    ensure!(f.mul(g) == g.mul(f), "product not commutative");
    Ok(())
}

pub fn hn_round_trip(h: &HNExpansion) -> Check {
    let b = hn_to_param(h, 80);
    let back = hn_expand(&b).map_err(|e| e.to_string())?;
    ensure!(back.rows == h.rows, "rows differ: {:?} vs {:?}", back.rows, h.rows);
    ensure!(back.htype() == h.htype(), "H-type differs");
    Ok(())
}

pub fn synth_sequence(e: &PlaneSequence) -> Check {
    let h = goodsemi::hn::synth_branch(e);
    ensure!(multiplicity_sequence(&h) == *e, "synth_branch({e:?}) has sequence {:?}", multiplicity_sequence(&h));
    Ok(())
}

pub fn pair_consistency(e: &PlaneSequence, f: &PlaneSequence, k: i64) -> Check {
    let data = SplittingData { e: vec![e.clone(), f.clone()], k: vec![vec![0, k], vec![k, 0]] };
    let hs = goodsemi::hn::synth_curve_expansions(&data.e, &data.k).map_err(|err| err.to_string())?;
    let sp = splitting_data(&hs[0].0, &hs[1].0).map_err(|err| err.to_string())?;
    ensure!(sp.k == k, "requested k = {k}, measured {}", sp.k);
    ensure!(sp.intersection == noether_intersection(e, f, k), "intersection {} != Noether {}", sp.intersection, noether_intersection(e, f, k));
    Ok(())
}

// ---- multiplicity_tree ----

pub fn tree_round_trip(data: &SplittingData) -> Check {
    let t = build_tree(data).map_err(|e| e.to_string())?;
    let back = read_tree(&t).map_err(|e| e.to_string())?;
    ensure!(back.e == data.e && back.k == data.k, "read_tree(build_tree(D)) != D");
    ensure!(build_tree(&back).unwrap() == t, "build_tree(read_tree(T)) != T");
    ensure!(validate_tree(&t).ok, "built tree fails validation: {:?}", validate_tree(&t));
    Ok(())
}

pub fn tree_semigroup_loop(data: &SplittingData) -> Check {
    let t = build_tree(data).map_err(|e| e.to_string())?;
    let s = semigroup_from_tree(&t).map_err(|e| e.to_string())?;
    let back = semigroup_tree(&s).map_err(|e| e.to_string())?;
    ensure!(back == t, "semigroup_tree(semigroup_from_tree(T)) != T");
    ensure!(semigroup_from_tree(&back).unwrap() == s, "semigroup_from_tree(semigroup_tree(S)) != S");
    Ok(())
}

/// Two branches share exactly `k + 1` nodes of the tree.
pub fn trunk_lengths(t: &MultiplicityTree, k: &[Vec<i64>]) -> Check {
    for i in 0..t.d {
        for j in 0..t.d {
            if i == j {
                continue;
            }
            let shared = t.nodes.iter().filter(|n| n.branches.contains(&i) && n.branches.contains(&j)).count() as i64;
            ensure!(shared == k[i][j] + 1, "branches {i},{j} share {shared} nodes, k = {}", k[i][j]);
        }
    }
    Ok(())
}

// ---- valuation_engine ----

/// Evaluate `Σ c_ab x^a y^b` on every branch.
pub fn evaluate(c: &CurveParam, poly: &[(u32, u32, i64)]) -> Vec<Series> {
    c.branches
        .iter()
        .map(|b| {
            let p = b.x.precision().min(b.y.precision());
            poly.iter().fold(Series::zero(p), |acc, &(a, bb, k)| {
                acc.add(&b.x.pow(a).mul(&b.y.pow(bb)).scale(&goodsemi::series::q(k)))
            })
        })
        .collect()
}

pub fn value_morphism(c: &CurveParam, f: &[(u32, u32, i64)], g: &[(u32, u32, i64)]) -> Check {
    let (vf, vg) = (evaluate(c, f), evaluate(c, g));
    let (Ok(a), Ok(b)) = (value_of(&vf), value_of(&vg)) else { return Ok(()) };
    let fg: Vec<Series> = vf.iter().zip(&vg).map(|(x, y)| x.mul(y)).collect();
    let Ok(ab) = value_of(&fg) else { return Err("product vanishes to the working precision".into()) };
    let sum: Vec<u32> = a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect();
    ensure!(ab.coords() == sum, "v(fg) = {ab:?}, v(f) + v(g) = {sum:?}");
    Ok(())
}

pub fn curve_invariants(c: &CurveParam) -> Check {
    let s = value_semigroup_auto(c).map_err(|e| e.to_string())?;
    ensure!(s.report().ok, "value semigroup not good");
    let sheared = coordinate_change(c, &CoordinateChange::Shear(goodsemi::series::q(3)));
    ensure!(value_semigroup_auto(&sheared).map_err(|e| e.to_string())? == s, "shear changes the value semigroup");
    // Apéry levels of v(O) against those of the blow-up, shifted.
    let b = blow_up_param(c).map_err(|e| e.to_string())?;
    let sb = value_semigroup_auto(&b).map_err(|e| e.to_string())?;
    let w = s.fine_multiplicity().coords().to_vec();
    let down = blow_down_semigroup(&sb, &w).map_err(|e| e.to_string())?;
    ensure!(down == s, "blow-down of v(B(O)) by {w:?} is not v(O)");
    let levels = partition_levels(&apery_set(&s, &w).unwrap());
    let shifted = shift_levels(&partition_levels(&apery_set(&sb, &w).unwrap()), &w, Direction::Down).unwrap();
    let cap: Vec<u32> = levels.cap.iter().zip(&shifted.cap).map(|(a, b)| *a.max(b)).collect();
    ensure!(levels.expand_to(&cap) == shifted.expand_to(&cap), "levels of v(O) are not the shifted levels of v(B(O))");
    // Tree from the semigroup against the tree from the parametrization.
    let t = semigroup_tree(&s).map_err(|e| e.to_string())?;
    ensure!(validate_tree(&t).ok, "tree of v(O) fails validation");
    let e: Vec<PlaneSequence> = c.branches.iter().map(|br| multiplicity_sequence(&hn_expand(br).unwrap())).collect();
    let d = c.branches.len();
    let mut k = vec![vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..d {
            if i != j {
                k[i][j] = goodsemi::hn::splitting_number(&c.branches[i], &c.branches[j]).map_err(|e| e.to_string())?;
            }
        }
    }
    let from_param = build_tree(&SplittingData { e, k: k.clone() }).map_err(|e| e.to_string())?;
    ensure!(t == from_param, "semigroup tree differs from the parametrization tree");
    trunk_lengths(&t, &k)?;
    Ok(())
}

pub fn branch_param(h: &HNExpansion, precision: usize) -> BranchParam {
    hn_to_param(h, precision)
}

pub fn coprime(gens: &[u32]) -> bool {
    gens.iter().fold(0, |a, &x| gcd(a, x)) == 1
}
