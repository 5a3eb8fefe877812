//! Text formats: poset, structure-constant, complex and functional JSON, and
//! DOT export of Hasse diagrams.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Functional, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{format_q, parse_q, Q};
use crate::poset::Poset;
use crate::topology::SimplicialComplex;

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Debug, Serialize, Deserialize)]
struct PosetJson {
    n: usize,
    #[serde(default)]
    relations: Vec<[usize; 2]>,
}

/// `{"n": 4, "relations": [[1,2],[2,3],[2,4]]}`; relations are generators.
pub fn parse_poset(s: &str) -> Result<Poset> {
    let raw: PosetJson = serde_json::from_str(s).map_err(parse_err)?;
    let gens: Vec<(usize, usize)> = raw.relations.iter().map(|&[i, j]| (i, j)).collect();
    Poset::new(raw.n, &gens)
}

/// Poset JSON listing the cover relations.
pub fn poset_to_json(p: &Poset) -> Value {
    serde_json::to_value(PosetJson {
        n: p.n(),
        relations: p.covers().iter().map(|&(i, j)| [i, j]).collect(),
    })
    .expect("poset serializes")
}

fn value_to_q(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Q::from_integer(i.into())),
            None => Err(Error::Parse(format!("non-integer number {n}; use a \"p/q\" string"))),
        },
        Value::String(s) => parse_q(s),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

/// `{"dim": 7, "brackets": [[1, 4, {"4": 2}], ...]}`: 1-based `[b_i, b_j] =
/// sum_k c_k b_k` for `i < j`; coefficients are integers or `"p/q"` strings.
pub fn parse_structure_constants(s: &str) -> Result<LieAlgebra> {
    let v: Value = serde_json::from_str(s).map_err(parse_err)?;
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing \"dim\"".into()))? as usize;
    let entries = match v.get("brackets") {
        None => Vec::new(),
        Some(Value::Array(a)) => a.clone(),
        Some(_) => return Err(Error::Parse("\"brackets\" must be an array".into())),
    };
    let mut brackets = Vec::new();
    for e in &entries {
        let bad = || Error::Parse(format!("bad bracket entry {e}"));
        let arr = e.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
        let i = arr[0].as_u64().ok_or_else(bad)? as usize;
        let j = arr[1].as_u64().ok_or_else(bad)? as usize;
        let mut terms = Vec::new();
        for (k, c) in arr[2].as_object().ok_or_else(bad)? {
            let k: usize = k.parse().map_err(|_| bad())?;
            terms.push((k, value_to_q(c)?));
        }
        brackets.push((i, j, terms));
    }
    LieAlgebra::from_structure_constants(dim, &brackets)
}

#[derive(Deserialize)]
struct ComplexJson {
    faces: Vec<Vec<usize>>,
}

/// `{"faces": [[1],[2],[1,2]]}`.
pub fn parse_complex(s: &str) -> Result<SimplicialComplex> {
    let raw: ComplexJson = serde_json::from_str(s).map_err(parse_err)?;
    SimplicialComplex::from_faces(&raw.faces)
}

pub fn complex_to_json(k: &SimplicialComplex) -> Value {
    serde_json::json!({ "faces": k.all_faces().collect::<Vec<_>>() })
}

/// A matrix-entry functional as `[[i, j, "p/q"], ...]`; a dual-coordinate one
/// as a plain list of `"p/q"` strings.
pub fn functional_to_json(phi: &Functional) -> Value {
    match phi {
        Functional::Matrix(_) => Value::Array(
            phi.terms()
                .into_iter()
                .map(|(i, j, c)| serde_json::json!([i, j, format_q(&c)]))
                .collect(),
        ),
        Functional::Dual(v) => Value::Array(v.iter().map(|c| Value::String(format_q(c))).collect()),
    }
}

pub fn parse_functional(s: &str) -> Result<Functional> {
    let v: Value = serde_json::from_str(s).map_err(parse_err)?;
    let arr = v.as_array().ok_or_else(|| Error::Parse("functional must be an array".into()))?;
    if arr.iter().all(|t| !t.is_array()) {
        return Ok(Functional::Dual(arr.iter().map(value_to_q).collect::<Result<_>>()?));
    }
    let mut terms = Vec::new();
    for t in arr {
        let bad = || Error::Parse(format!("bad functional term {t}"));
        let a = t.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
        let i = a[0].as_u64().ok_or_else(bad)? as usize;
        let j = a[1].as_u64().ok_or_else(bad)? as usize;
        terms.push((i, j, value_to_q(&a[2])?));
    }
    Ok(Functional::from_terms(terms))
}

/// Hasse diagram in DOT, bottom to top, with elements of equal depth on the
/// same rank.
pub fn hasse_dot(p: &Poset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    let depths = p.depths();
    let top = depths.iter().copied().max().unwrap_or(0);
    for d in 0..=top {
        let nodes: Vec<String> = p
            .elements()
            .filter(|&i| depths[i - 1] == d)
            .map(|i| i.to_string())
            .collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", nodes.join("; "));
    }
    for &(i, j) in p.covers() {
        let _ = writeln!(out, "  {i} -> {j};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::index_one_noncontact_example;
    use crate::linalg::q;

    #[test]
    fn poset_round_trip() {
        let p = parse_poset(r#"{"n": 4, "relations": [[1,2],[2,3],[2,4]]}"#).unwrap();
        assert_eq!(p.relation_count(), 5);
        assert_eq!(parse_poset(&poset_to_json(&p).to_string()).unwrap(), p);
        assert!(matches!(parse_poset(r#"{"n": 2, "relations": [[2,1]]}"#), Err(Error::LabelOrderViolation(2, 1))));
        assert!(matches!(parse_poset("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn structure_constants() {
        let s = r#"{"dim": 7, "brackets": [[1,4,{"4":2}],[2,4,{"4":1}],[1,5,{"5":1}],[2,5,{"5":2}],
            [3,5,{"5":1}],[1,6,{"6":1}],[3,6,{"6":1}],[2,7,{"7":1}],[3,7,{"7":"2"}]]}"#;
        let g = parse_structure_constants(s).unwrap();
        let h = index_one_noncontact_example();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(g.bracket_basis(i, j), h.bracket_basis(i, j));
            }
        }
        assert!(parse_structure_constants(r#"{"dim": 2, "brackets": [[1,2,{"x":1}]]}"#).is_err());
    }

    #[test]
    fn functionals() {
        let phi = Functional::from_terms([(2, 2, q(1)), (1, 3, Q::new(1.into(), 2.into()))]);
        let v = functional_to_json(&phi);
        assert_eq!(v.to_string(), r#"[[1,3,"1/2"],[2,2,"1/1"]]"#);
        assert_eq!(parse_functional(&v.to_string()).unwrap(), phi);
        assert_eq!(parse_functional(r#"[1, "2/3"]"#).unwrap(), Functional::Dual(vec![q(1), Q::new(2.into(), 3.into())]));
    }

    #[test]
    fn complexes_and_dot() {
        let k = parse_complex(r#"{"faces": [[1],[2],[3],[1,2],[2,3],[1,3],[1,2,3]]}"#).unwrap();
        assert_eq!(k.face_counts(), vec![3, 3, 1]);
        assert_eq!(parse_complex(&complex_to_json(&k).to_string()).unwrap(), k);
        let dot = hasse_dot(&Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap());
        assert!(dot.contains("{ rank=same; 3; 4; }"));
        assert!(dot.contains("  2 -> 4;"));
    }
}
