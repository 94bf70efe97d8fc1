//! Shared fixtures and generators for the integration tests.
#![allow(dead_code)]

use deltalink::alexander::{arf_knot, arf_split_link2, fingerprint};
use deltalink::catalog::Catalog;
use deltalink::diagram::{parse_pd, DeltaSite, LinkDiagram};
use deltalink::laurent::LaurentPoly;
use deltalink::pathways::parse_certificate;
use proptest::prelude::*;

pub const UNKNOT3: &str = "X(1,1,2,6),X(3,3,4,2),X(5,5,6,4)";
pub const HOPF: &str = "X+(1,3,2,4),X+(3,1,4,2)";

/// Every diagram shipped with the crate: links, knots and pathway steps.
pub fn pool(c: &Catalog) -> Vec<LinkDiagram> {
    let mut v: Vec<LinkDiagram> = c.links.iter().map(|r| r.diagram().clone()).collect();
    v.extend(c.knots.iter().map(|k| k.diagram().clone()));
    for text in c.pathways.values() {
        let p = parse_certificate(text, c).unwrap();
        v.extend(p.steps.into_iter().flatten().map(|s| s.diagram));
    }
    v.push(parse_pd(UNKNOT3).unwrap());
    v.retain(|d| !d.delta_sites().is_empty());
    v
}

/// Walks `choices.len() - 1` random moves away from `d` and returns the
/// diagram reached together with one more site on it.
pub fn walk(d: &LinkDiagram, choices: &[usize]) -> (LinkDiagram, DeltaSite) {
    let mut d = d.clone();
    let (last, path) = choices.split_last().unwrap();
    for &k in path {
        let sites = d.delta_sites();
        if sites.is_empty() {
            break;
        }
        let e = d.apply_delta_move(&sites[k % sites.len()]).unwrap();
        if e.delta_sites().is_empty() {
            break;
        }
        d = e;
    }
    let sites = d.delta_sites();
    let s = sites[last % sites.len()];
    (d, s)
}

/// Arf invariant where it is computable from the diagram alone.
pub fn computed_arf(d: &LinkDiagram) -> Option<u8> {
    match d.ncomponents() {
        1 => arf_knot(d).ok(),
        2 if d.is_algebraically_split() => arf_split_link2(d).ok(),
        _ => None,
    }
}

/// A move keeps the linking matrix and flips arf on proper links.
pub fn check_move(d: &LinkDiagram, s: &DeltaSite) -> Result<(), String> {
    let e = d.apply_delta_move(s).map_err(|e| e.to_string())?;
    if e.linking_matrix() != d.linking_matrix() {
        return Err(format!("linking changed on {}", d.to_pd_string()));
    }
    if e.ncrossings() != d.ncrossings() || e.ncomponents() != d.ncomponents() {
        return Err("crossing or component count changed".into());
    }
    if d.is_proper() {
        if let (Some(a), Some(b)) = (computed_arf(d), computed_arf(&e)) {
            if a == b {
                return Err(format!("arf did not flip on {} at {:?}", d.to_pd_string(), s.crossings));
            }
        }
    }
    Ok(())
}

/// Applying the move twice at the same crossings gives back the diagram.
pub fn check_involution(d: &LinkDiagram, s: &DeltaSite) -> Result<(), String> {
    let e = d.apply_delta_move(s).map_err(|e| e.to_string())?;
    let s2 = e.find_site(s.crossings).map_err(|e| e.to_string())?;
    let back = e.apply_delta_move(&s2).map_err(|e| e.to_string())?;
    if back != d.relabeled() {
        return Err(format!("not an involution on {}", d.to_pd_string()));
    }
    let (f, g) = (fingerprint(d).map_err(|e| e.to_string())?, fingerprint(&back).map_err(|e| e.to_string())?);
    if f != g {
        return Err("fingerprint changed".into());
    }
    Ok(())
}

pub fn move_case(n: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..n, prop::collection::vec(any::<usize>(), 1..4))
}

pub fn poly(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    let exp = if nvars == 2 { (-3i32..4, -3i32..4).boxed() } else { (-3i32..4, Just(0)).boxed() };
    prop::collection::vec((exp, -6i64..7), 0..6)
        .prop_map(move |ts| LaurentPoly::from_terms(nvars, ts.into_iter().map(|((a, b), c)| ([a, b], c))))
}

pub fn poly_triple() -> impl Strategy<Value = (LaurentPoly, LaurentPoly, LaurentPoly)> {
    (1usize..3).prop_flat_map(|n| (poly(n), poly(n), poly(n)))
}

pub fn ring_axioms(p: &LaurentPoly, q: &LaurentPoly, r: &LaurentPoly) -> Result<(), String> {
    let ok = &(p + q) + r == p + &(q + r)
        && &(p * q) * r == p * &(q * r)
        && p * &(q + r) == &(p * q) + &(p * r)
        && p + q == q + p
        && p * q == q * p
        && p + &(-p) == LaurentPoly::zero(p.nvars());
    if !ok {
        return Err(format!("ring axiom fails for {p}, {q}, {r}"));
    }
    let pt: Vec<i64> = if p.nvars() == 2 { vec![-1, 1] } else { vec![-1] };
    if (p * q).evaluate(&pt).unwrap() != p.evaluate(&pt).unwrap() * q.evaluate(&pt).unwrap() {
        return Err(format!("evaluation is not multiplicative on {p}, {q}"));
    }
    if !q.is_zero() {
        let d = (p * q).exact_divide(q).map_err(|e| format!("{e} for ({p})*({q}) / ({q})"))?;
        if !d.eq_up_to_unit(p) && !(p.is_zero() && d.is_zero()) {
            return Err(format!("({p})*({q}) / ({q}) = {d}"));
        }
    }
    let n = p.normalize();
    if n.normalize() != n || p.shift([2, 0]).scale(&(-1).into()).normalize() != n {
        return Err(format!("normalize not canonical on {p}"));
    }
    Ok(())
}

/// Every distinct edge of the bundled pathway tree as a one-step
/// certificate, with a flag for edges leaving an undetermined link.
pub fn tree_edges(c: &Catalog) -> Vec<(deltalink::pathways::PathwayCertificate, bool)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = vec![];
    for text in c.pathways.values() {
        let p = parse_certificate(text, c).unwrap();
        for i in 0..p.len() {
            let e = p.edge(i);
            let key = (e.nodes[0].name.clone(), e.nodes[1].name.clone());
            if seen.insert(key) {
                let dashed = c.link(&e.nodes[0].name).is_some_and(|r| r.udelta_expected.exact().is_none());
                out.push((e, dashed));
            }
        }
    }
    out
}
