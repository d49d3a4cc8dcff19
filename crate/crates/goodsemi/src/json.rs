//! JSON encodings of the library's objects.

use crate::apery::LevelPartition;
use crate::branch::{HRow, HType, PlaneSequence};
use crate::error::{Error, Result};
use crate::hn::{BranchParam, HNExpansion};
use crate::point::Point;
use crate::semigroup::GoodSemigroup;
use crate::series::{Series, Q};
use crate::tree::{MultiplicityTree, Node, SplittingData};
use crate::valuation::CurveParam;
use num_bigint::BigInt;
use serde_json::{json, Value};

fn perr<T>(m: impl Into<String>) -> Result<T> {
    Err(Error::Parse(m.into()))
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| Error::Parse(format!("missing field \"{k}\"")))
}

fn uint(v: &Value) -> Result<u32> {
    match v {
        Value::Number(n) => n.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| Error::Parse(format!("bad integer {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer \"{s}\""))),
        _ => perr(format!("expected an integer, got {v}")),
    }
}

fn int(v: &Value) -> Result<i64> {
    match v {
        Value::Number(n) => n.as_i64().ok_or_else(|| Error::Parse(format!("bad integer {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer \"{s}\""))),
        _ => perr(format!("expected an integer, got {v}")),
    }
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("expected an array, got {v}")))
}

pub fn uints(v: &Value) -> Result<Vec<u32>> {
    array(v)?.iter().map(uint).collect()
}

pub fn rational_to_string(q: &Q) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational \"{s}\""));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn rational(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(|x| Q::from_integer(x.into())).ok_or_else(|| Error::Parse(format!("bad rational {n}"))),
        _ => perr(format!("expected a rational, got {v}")),
    }
}

pub fn semigroup_to_json(s: &GoodSemigroup) -> Value {
    let smalls: Vec<&[u32]> = s.smalls().iter().map(|p| p.coords()).collect();
    json!({"dim": s.dim(), "conductor": s.conductor(), "smalls": smalls})
}

pub fn semigroup_from_json(v: &Value) -> Result<GoodSemigroup> {
    let c = uints(field(v, "conductor")?)?;
    if let Some(d) = v.get("dim") {
        if uint(d)? as usize != c.len() {
            return Err(Error::DimensionMismatch { expected: uint(d)? as usize, got: c.len() });
        }
    }
    let smalls = array(field(v, "smalls")?)?.iter().map(uints).collect::<Result<Vec<_>>>()?;
    GoodSemigroup::new(&c, &smalls)
}

fn point_strings(p: &Point) -> Value {
    Value::Array(
        (0..p.dim()).map(|i| Value::String(if p.is_capped(i) { "inf".into() } else { p.get(i).to_string() })).collect(),
    )
}

pub fn levels_to_json(p: &LevelPartition) -> Value {
    let levels: Vec<Vec<Value>> = p.levels.iter().map(|l| l.iter().map(point_strings).collect()).collect();
    json!({"omega": p.omega, "cap": p.cap, "N": p.n(), "levels": levels})
}

/// Same layout with capped coordinates printed as the cap value.
pub fn levels_to_json_raw(p: &LevelPartition) -> Value {
    let raw = |q: &Point| Value::Array(q.coords().iter().map(|c| Value::String(c.to_string())).collect());
    let levels: Vec<Vec<Value>> = p.levels.iter().map(|l| l.iter().map(raw).collect()).collect();
    json!({"omega": p.omega, "cap": p.cap, "N": p.n(), "levels": levels})
}

pub fn levels_from_json(v: &Value) -> Result<LevelPartition> {
    let omega = uints(field(v, "omega")?)?;
    let cap = uints(field(v, "cap")?)?;
    let mut levels = Vec::new();
    for l in array(field(v, "levels")?)? {
        let mut pts = Vec::new();
        for p in array(l)? {
            let c = array(p)?
                .iter()
                .enumerate()
                .map(|(i, x)| match x.as_str() {
                    Some("inf") => cap.get(i).copied().ok_or_else(|| Error::Parse("point longer than cap".into())),
                    _ => uint(x),
                })
                .collect::<Result<Vec<u32>>>()?;
            if c.len() != cap.len() {
                return Err(Error::DimensionMismatch { expected: cap.len(), got: c.len() });
            }
            pts.push(Point::capped_at(&c, &cap));
        }
        levels.push(pts);
    }
    Ok(LevelPartition { omega, cap, levels })
}

pub fn sequence_to_json(e: &PlaneSequence) -> Value {
    json!({"sequence": e.prefix()})
}

/// Accepts `{"sequence": [...]}` or a bare array.
pub fn sequence_from_json(v: &Value) -> Result<PlaneSequence> {
    let a = v.get("sequence").unwrap_or(v);
    PlaneSequence::new(&uints(a)?)
}

pub fn htype_to_json(t: &HType) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            let h = match r.h {
                Some(h) => json!(h),
                None => json!("inf"),
            };
            match r.k {
                Some(k) => json!([k, h]),
                None => json!([h]),
            }
        })
        .collect();
    json!({ "htype": rows })
}

pub fn htype_from_json(v: &Value) -> Result<HType> {
    let rows = array(v.get("htype").unwrap_or(v))?
        .iter()
        .map(|r| {
            let a = array(r)?;
            let h = |x: &Value| if x.as_str() == Some("inf") { Ok(None) } else { uint(x).map(Some) };
            match a.as_slice() {
                [x] => Ok(HRow { k: None, h: h(x)? }),
                [k, x] => Ok(HRow { k: Some(uint(k)?), h: h(x)? }),
                _ => perr("an H-type row is [h] or [k, h]"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    HType::new(rows)
}

pub fn series_to_json(s: &Series) -> Value {
    let terms: Vec<Value> = s.terms().iter().map(|(e, a)| json!([e, rational_to_string(a)])).collect();
    json!({"precision": s.precision(), "terms": terms})
}

pub fn series_from_json(v: &Value) -> Result<Series> {
    let p = uint(field(v, "precision")?)? as usize;
    let mut terms = Vec::new();
    for t in array(field(v, "terms")?)? {
        match array(t)?.as_slice() {
            [e, a] => terms.push((uint(e)? as usize, rational(a)?)),
            _ => return perr("a term is [exponent, coefficient]"),
        }
    }
    Ok(Series::from_terms(&terms, p))
}

pub fn hn_to_json(h: &HNExpansion) -> Value {
    let mut rows: Vec<Value> = h
        .rows
        .iter()
        .map(|r| json!({"h": r.len(), "a": r.iter().map(rational_to_string).collect::<Vec<_>>()}))
        .collect();
    rows.push(json!({"inf": true, "exact": h.exact, "series": series_to_json(&h.last)}));
    json!({ "rows": rows })
}

pub fn hn_from_json(v: &Value) -> Result<HNExpansion> {
    let all = array(field(v, "rows")?)?;
    let Some((last, finite)) = all.split_last() else { return perr("no rows") };
    let rows = finite
        .iter()
        .map(|r| {
            let a = array(field(r, "a")?)?.iter().map(rational).collect::<Result<Vec<_>>>()?;
            if let Some(h) = r.get("h") {
                if uint(h)? as usize != a.len() {
                    return perr("row h does not match its coefficient count");
                }
            }
            if a.is_empty() {
                return perr("empty finite row");
            }
            Ok(a)
        })
        .collect::<Result<Vec<_>>>()?;
    if last.get("inf").and_then(Value::as_bool) != Some(true) {
        return perr("last row must be marked \"inf\"");
    }
    let exact = last.get("exact").and_then(Value::as_bool).unwrap_or(false);
    Ok(HNExpansion { rows, last: series_from_json(field(last, "series")?)?, exact })
}

pub fn branch_to_json(b: &BranchParam) -> Value {
    json!({"x": series_to_json(&b.x), "y": series_to_json(&b.y)})
}

pub fn branch_from_json(v: &Value) -> Result<BranchParam> {
    Ok(BranchParam { x: series_from_json(field(v, "x")?)?, y: series_from_json(field(v, "y")?)? })
}

pub fn curve_to_json(c: &CurveParam) -> Value {
    json!({"branches": c.branches.iter().map(branch_to_json).collect::<Vec<_>>()})
}

pub fn curve_from_json(v: &Value) -> Result<CurveParam> {
    let branches = array(field(v, "branches")?)?.iter().map(branch_from_json).collect::<Result<Vec<_>>>()?;
    if branches.is_empty() {
        return perr("a curve needs at least one branch");
    }
    Ok(CurveParam { branches })
}

pub fn splitting_to_json(s: &SplittingData) -> Value {
    let k: Vec<Vec<i64>> =
        (0..s.k.len()).map(|i| (0..s.k.len()).map(|j| if i == j { 0 } else { s.k[i][j] }).collect()).collect();
    json!({"sequences": s.e.iter().map(|e| e.prefix().to_vec()).collect::<Vec<_>>(), "k": k})
}

pub fn splitting_from_json(v: &Value) -> Result<SplittingData> {
    let e = array(field(v, "sequences")?)?.iter().map(|s| PlaneSequence::new(&uints(s)?)).collect::<Result<Vec<_>>>()?;
    let k = match v.get("k") {
        Some(k) => array(k)?.iter().map(|r| array(r)?.iter().map(int).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?,
        None if e.len() == 1 => vec![vec![0]],
        None => return perr("missing field \"k\""),
    };
    Ok(SplittingData { e, k })
}

pub fn tree_to_json(t: &MultiplicityTree) -> Value {
    let nodes: Vec<Value> = t
        .nodes
        .iter()
        .map(|n| {
            let parent = n.parent.map(|p| Value::String(t.nodes[p].id(t.d))).unwrap_or(Value::Null);
            json!({"id": n.id(t.d), "parent": parent, "weight": n.weight})
        })
        .collect();
    json!({"d": t.d, "nodes": nodes, "tail_from": t.tail_from()})
}

fn parse_id(id: &str, d: usize) -> Result<(usize, Vec<usize>)> {
    let bad = || Error::MalformedTree(format!("bad vertex id \"{id}\""));
    let (depth, rest) = id.split_once(':').ok_or_else(bad)?;
    let depth = depth.parse().map_err(|_| bad())?;
    let parts: Vec<&str> = if d >= 10 { rest.split(',').collect() } else { rest.split("").filter(|s| !s.is_empty()).collect() };
    let mut b = Vec::new();
    for p in parts {
        let i: usize = p.parse().map_err(|_| bad())?;
        if i == 0 || i > d {
            return Err(bad());
        }
        b.push(i - 1);
    }
    b.sort();
    Ok((depth, b))
}

pub fn tree_from_json(v: &Value) -> Result<MultiplicityTree> {
    let d = uint(field(v, "d")?)? as usize;
    let raw = array(field(v, "nodes")?)?;
    let mut ids = Vec::new();
    let mut nodes = Vec::new();
    for n in raw {
        let id = field(n, "id")?.as_str().ok_or_else(|| Error::Parse("vertex id must be a string".into()))?;
        let (depth, branches) = parse_id(id, d)?;
        let weight = uints(field(n, "weight")?)?;
        ids.push(id.to_string());
        nodes.push(Node { depth, branches, parent: None, weight });
    }
    for (k, n) in raw.iter().enumerate() {
        match n.get("parent") {
            None | Some(Value::Null) => {}
            Some(Value::String(p)) => {
                let idx = ids.iter().position(|x| x == p).ok_or_else(|| Error::MalformedTree(format!("unknown parent \"{p}\"")))?;
                nodes[k].parent = Some(idx);
            }
            Some(other) => return Err(Error::Parse(format!("bad parent {other}"))),
        }
    }
    let t = MultiplicityTree { d, nodes };
    if let Some(tf) = v.get("tail_from") {
        if uint(tf)? as usize != t.tail_from() {
            return Err(Error::MalformedTree(format!("tail_from {} but deepest vertex is at {}", tf, t.tail_from() as i64 - 1)));
        }
    }
    Ok(t)
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": e.kind(), "message": e.to_string()})
}
