//! Knots in the solid torus and the `β₁` invariant.
//!
//! An annular diagram is an ordinary knot diagram together with the
//! places where its arcs cross a fixed ray from the puncture. Each
//! `cut(arc, ±1)` records one such crossing; the sign is the direction
//! of the arc relative to the ray (`+1` counterclockwise around the
//! puncture).
//!
//! Lifting to the infinite cyclic cover, arc `a` of the lift `K_0` sits
//! on sheet `level(a)`. A crossing whose strands lie on adjacent sheets
//! contributes one crossing between `K_0` and `K_1`, so
//! `β₁ = lk(K_0, K_1)` is half the signed count of those crossings.

use std::collections::HashMap;
use std::str::FromStr;

use thiserror::Error;

use crate::diagram::{Arc, DiagramError, LinkDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnnularError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("annular diagram must be a knot, got {0} components")]
    NotAKnot(usize),
    #[error("cut on unknown arc {0}")]
    UnknownArc(Arc),
    #[error("total winding is {0}, expected 0")]
    Winding(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnularDiagram {
    base: LinkDiagram,
    cuts: Vec<(Arc, i8)>,
    levels: HashMap<Arc, i64>,
}

impl AnnularDiagram {
    pub fn new(base: LinkDiagram, cuts: Vec<(Arc, i8)>) -> Result<Self, AnnularError> {
        if base.ncomponents() != 1 {
            return Err(AnnularError::NotAKnot(base.ncomponents()));
        }
        let mut net: HashMap<Arc, i64> = HashMap::new();
        for &(a, s) in &cuts {
            if base.crossings().is_empty() || !base.components()[0].contains(&a) {
                return Err(AnnularError::UnknownArc(a));
            }
            *net.entry(a).or_default() += s as i64;
        }
        let winding: i64 = net.values().sum();
        if winding != 0 {
            return Err(AnnularError::Winding(winding));
        }

        // level at the start of each arc, basepoint = first arc
        let mut levels = HashMap::new();
        let mut l = 0;
        if let Some(arcs) = base.components().first() {
            for &a in arcs {
                levels.insert(a, l);
                l += net.get(&a).copied().unwrap_or(0);
            }
        }
        Ok(Self { base, cuts, levels })
    }

    pub fn base(&self) -> &LinkDiagram { &self.base }
    pub fn cuts(&self) -> &[(Arc, i8)] { &self.cuts }

    pub fn level(&self, a: Arc) -> i64 {
        self.levels[&a]
    }

    pub fn beta1(&self) -> i64 {
        let mut sum = 0;
        for x in self.base.crossings() {
            // levels at the crossing point are those of the outgoing arcs
            let du = self.level(x.under_out()) - self.level(x.over_out());
            if du.abs() == 1 {
                sum += x.sign as i64;
            }
        }
        debug_assert!(sum % 2 == 0);
        sum / 2
    }

    pub fn mirror(&self) -> Self {
        Self::new(self.base.mirror(), self.cuts.clone()).unwrap()
    }

    /// The same knot with the cut ray traversed the other way.
    pub fn flip_cuts(&self) -> Self {
        let cuts = self.cuts.iter().map(|&(a, s)| (a, -s)).collect();
        Self::new(self.base.clone(), cuts).unwrap()
    }
}

/// `PD line` followed by `cut(arc, ±1)` lines. Blank lines and `#`
/// comments are skipped.
pub fn parse_annular(text: &str) -> Result<AnnularDiagram, AnnularError> {
    let mut lines = text.lines().enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let base: LinkDiagram = match lines.next() {
        Some((_, l)) => l.parse()?,
        None => return Err(AnnularError::Parse { line: 1, msg: "missing PD line".into() }),
    };

    let mut cuts = vec![];
    for (line, l) in lines {
        let err = |msg: &str| AnnularError::Parse { line, msg: msg.into() };
        let s: String = l.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s.strip_prefix("cut(").and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| err("expected cut(arc,dir)"))?;
        let (a, d) = inner.split_once(',').ok_or_else(|| err("expected cut(arc,dir)"))?;
        let a: Arc = a.parse().map_err(|_| err("bad arc label"))?;
        let d: i8 = match d {
            "1" | "+1" => 1,
            "-1" => -1,
            _ => return Err(err("direction must be +1 or -1")),
        };
        cuts.push((a, d));
    }
    AnnularDiagram::new(base, cuts)
}

impl FromStr for AnnularDiagram {
    type Err = AnnularError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_annular(s)
    }
}

/// A single toroidal Δ-move changes `β₁` by at most 2, and the trivial
/// link has `β₁ = 0`.
pub fn obstructs_single_toroidal_delta(b: i64) -> bool {
    b.abs() >= 3
}

#[cfg(test)]
mod tests {
    use super::*;

    const L9A18: &str = include_str!("../data/L9a18.annular");
    const TREFOIL: &str = "X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)";

    #[test]
    fn no_cuts() {
        let a = parse_annular(TREFOIL).unwrap();
        assert!((1..=6).all(|i| a.level(i) == 0));
        assert_eq!(a.beta1(), 0);
    }

    #[test]
    fn two_cuts() {
        let a = parse_annular(&format!("{TREFOIL}\ncut(2,+1)\ncut(5,-1)")).unwrap();
        let lv: Vec<_> = (1..=6).map(|i| a.level(i)).collect();
        assert_eq!(lv, [0, 0, 1, 1, 1, 0]);
    }

    #[test]
    fn winding() {
        let e = parse_annular(&format!("{TREFOIL}\ncut(2,1)")).unwrap_err();
        assert_eq!(e, AnnularError::Winding(1));
        let e = parse_annular(&format!("{TREFOIL}\ncut(9,1)\ncut(1,-1)")).unwrap_err();
        assert_eq!(e, AnnularError::UnknownArc(9));
        assert!(matches!(parse_annular(&format!("{TREFOIL}\ncut(1)")), Err(AnnularError::Parse { line: 2, .. })));
        assert!(matches!(parse_annular("X+(1,3,2,4),X+(3,1,4,2)"), Err(AnnularError::NotAKnot(2))));
    }

    #[test]
    fn l9a18() {
        let a = parse_annular(L9A18).unwrap();
        assert_eq!(a.beta1().abs(), 3);
        assert_eq!(a.mirror().beta1(), -a.beta1());
        assert_eq!(a.flip_cuts().beta1(), a.beta1());
    }

    #[test]
    fn obstruction() {
        assert!(obstructs_single_toroidal_delta(3));
        assert!(obstructs_single_toroidal_delta(-3));
        assert!(!obstructs_single_toroidal_delta(2));
        assert!(!obstructs_single_toroidal_delta(0));
    }
}
