//! Alexander polynomials from the Wirtinger presentation, and the
//! invariants derived from them.
//!
//! Generators are over-arcs. A crossing with over-generator `o`, incoming
//! under-generator `a` and outgoing `c` gives the Fox row
//!
//! ```text
//!   sign +1:  o: 1 - t_a    a: t_o   c: -1
//!   sign -1:  o: t_a - 1    a: 1     c: -t_o      (multiplied by t_o)
//! ```
//!
//! where `t_g` is the variable of the component carrying `g`. Two-component
//! links use `x`, `y`; three or more components use a single variable `t`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::diagram::{Arc, LinkDiagram};
use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlexanderError {
    #[error("expected {expected} component(s), got {got}")]
    Components { expected: &'static str, got: usize },
    #[error("minors disagree: {0} vs {1}")]
    MinorMismatch(String, String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("link is not algebraically split")]
    NotSplit,
    #[error("|Δ(-1)| = {0} is even")]
    EvenDeterminant(BigInt),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Clone, Debug)]
pub struct AlexanderMatrix {
    pub rows: Vec<Vec<LaurentPoly>>,
    /// component index of each generator (column)
    pub component_of: Vec<usize>,
    pub nvars: usize,
}

impl AlexanderMatrix {
    pub fn nrows(&self) -> usize { self.rows.len() }
    pub fn ncols(&self) -> usize { self.component_of.len() }

    pub fn minor(&self, row: usize, col: usize) -> LaurentPoly {
        let m: Vec<Vec<_>> = self.rows.iter().enumerate().filter(|(i, _)| *i != row).map(|(_, r)| {
            r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect()
        }).collect();
        det(m, self.nvars)
    }
}

fn var_of(nvars: usize, comp: usize) -> LaurentPoly {
    LaurentPoly::var(nvars, if nvars == 2 { comp } else { 0 })
}

fn nvars_for(m: usize) -> usize {
    if m == 2 { 2 } else { 1 }
}

pub fn alexander_matrix(d: &LinkDiagram) -> AlexanderMatrix {
    let nvars = nvars_for(d.ncomponents());

    // over-arcs: merge the two over-arcs at each crossing
    let mut uf: BTreeMap<Arc, Arc> = BTreeMap::new();
    fn find(uf: &mut BTreeMap<Arc, Arc>, a: Arc) -> Arc {
        let p = *uf.get(&a).unwrap_or(&a);
        if p == a { a } else { let r = find(uf, p); uf.insert(a, r); r }
    }
    for x in d.crossings() {
        let (p, q) = (find(&mut uf, x.over_in()), find(&mut uf, x.over_out()));
        if p != q {
            uf.insert(p.max(q), p.min(q));
        }
    }
    let mut gen: HashMap<Arc, usize> = HashMap::new();
    let mut component_of = vec![];
    for c in d.components() {
        for &a in c {
            let r = find(&mut uf, a);
            if let std::collections::hash_map::Entry::Vacant(e) = gen.entry(r) {
                e.insert(component_of.len());
                component_of.push(d.component_of(a));
            }
        }
    }
    let mut g = |a: Arc| gen[&find(&mut uf, a)];

    let n = component_of.len();
    let one = LaurentPoly::one(nvars);
    let rows = d.crossings().iter().map(|x| {
        let (o, a, c) = (g(x.over_in()), g(x.under_in()), g(x.under_out()));
        let (to, ta) = (var_of(nvars, component_of[o]), var_of(nvars, component_of[a]));
        let (eo, ea, ec) = if x.sign > 0 {
            (&one - &ta, to, -&one)
        } else {
            (&ta - &one, one.clone(), -&to)
        };
        let mut row = vec![LaurentPoly::zero(nvars); n];
        row[o] = &row[o] + &eo;
        row[a] = &row[a] + &ea;
        row[c] = &row[c] + &ec;
        row
    }).collect();

    AlexanderMatrix { rows, component_of, nvars }
}

/// Fraction-free (Bareiss) elimination.
pub fn det(mut m: Vec<Vec<LaurentPoly>>, nvars: usize) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one(nvars);
    }
    let mut prev = LaurentPoly::one(nvars);
    let mut neg = false;
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].nterms()) else {
            return LaurentPoly::zero(nvars);
        };
        if p != k {
            m.swap(p, k);
            neg = !neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.exact_divide(&prev).expect("Bareiss step is exact");
            }
            m[i][k] = LaurentPoly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let r = m[n - 1][n - 1].clone();
    if neg { -r } else { r }
}

fn check_same(p: &LaurentPoly, q: &LaurentPoly) -> Result<(), AlexanderError> {
    if p.eq_up_to_unit(q) {
        Ok(())
    } else {
        Err(AlexanderError::MinorMismatch(p.to_string(), q.to_string()))
    }
}

/// A component that is never under-crossed can be lifted off.
fn has_free_component(d: &LinkDiagram) -> bool {
    if d.free_loops() > 0 {
        return true;
    }
    let mut under = vec![false; d.components().len()];
    for x in d.crossings() {
        under[d.component_of(x.under_in())] = true;
    }
    under.iter().any(|u| !u)
}

/// Normalized Δ_K(t), checked on two different minors.
pub fn alexander_poly_knot(d: &LinkDiagram) -> Result<LaurentPoly, AlexanderError> {
    if !d.is_knot() {
        return Err(AlexanderError::Components { expected: "1", got: d.ncomponents() });
    }
    if d.ncrossings() == 0 {
        return Ok(LaurentPoly::one(1));
    }
    let a = alexander_matrix(d);
    let p = a.minor(0, 0);
    if a.ncols() >= 2 {
        check_same(&p, &a.minor(1, 1))?;
    }
    Ok(p.normalize())
}

fn torres_quotient(a: &AlexanderMatrix, col: usize) -> Result<LaurentPoly, AlexanderError> {
    let m = a.minor(0, col);
    let t = &var_of(a.nvars, a.component_of[col]) - &LaurentPoly::one(a.nvars);
    m.exact_divide(&t).map_err(|_| AlexanderError::NotDivisible(format!("({m}) / ({t})")))
}

fn link_poly(d: &LinkDiagram) -> Result<LaurentPoly, AlexanderError> {
    let nvars = nvars_for(d.ncomponents());
    if has_free_component(d) {
        return Ok(LaurentPoly::zero(nvars));
    }
    let a = alexander_matrix(d);
    let p = torres_quotient(&a, 0)?;
    check_same(&p, &torres_quotient(&a, 1)?)?;
    Ok(p.normalize())
}

/// Normalized Δ_L(x, y) of a two-component link.
pub fn alexander_poly_link2(d: &LinkDiagram) -> Result<LaurentPoly, AlexanderError> {
    if d.ncomponents() != 2 {
        return Err(AlexanderError::Components { expected: "2", got: d.ncomponents() });
    }
    link_poly(d)
}

/// Δ for any component count; three or more components are collapsed to
/// one variable.
pub fn alexander_poly(d: &LinkDiagram) -> Result<LaurentPoly, AlexanderError> {
    match d.ncomponents() {
        0 => Err(AlexanderError::Components { expected: "at least 1", got: 0 }),
        1 => alexander_poly_knot(d),
        _ => link_poly(d),
    }
}

pub fn arf_from_delta(delta: &LaurentPoly) -> Result<u8, AlexanderError> {
    let v = delta.evaluate(&[-1])?.abs();
    match v.mod_floor(&BigInt::from(8)).to_u8().unwrap() {
        1 | 7 => Ok(0),
        3 | 5 => Ok(1),
        _ => Err(AlexanderError::EvenDeterminant(v)),
    }
}

pub fn arf_knot(d: &LinkDiagram) -> Result<u8, AlexanderError> {
    arf_from_delta(&alexander_poly_knot(d)?)
}

/// `f` with `Δ_L = (x-1)(y-1) f`.
pub fn milnor_f(d: &LinkDiagram) -> Result<LaurentPoly, AlexanderError> {
    if d.ncomponents() != 2 {
        return Err(AlexanderError::Components { expected: "2", got: d.ncomponents() });
    }
    if !d.is_algebraically_split() {
        return Err(AlexanderError::NotSplit);
    }
    let delta = alexander_poly_link2(d)?;
    let one = LaurentPoly::one(2);
    let q = &(&LaurentPoly::var(2, 0) - &one) * &(&LaurentPoly::var(2, 1) - &one);
    delta.exact_divide(&q).map_err(|_| AlexanderError::NotDivisible(format!("({delta}) / ({q})")))
}

/// `|μ̄(1122)| = |f(1,1)|`.
pub fn milnor_1122(d: &LinkDiagram) -> Result<u64, AlexanderError> {
    let f = milnor_f(d)?;
    Ok(f.evaluate(&[1, 1])?.abs().to_u64().expect("small"))
}

/// Representative of `p` up to units, variable swap and inversion of each
/// variable.
pub fn canonical(p: &LaurentPoly) -> LaurentPoly {
    let mut cands = vec![];
    let swaps = if p.nvars() == 2 { vec![p.clone(), p.swap_vars()] } else { vec![p.clone()] };
    for q in swaps {
        for inv in [[false, false], [true, false], [false, true], [true, true]] {
            if p.nvars() == 1 && inv[1] {
                continue;
            }
            cands.push(q.invert_vars(inv).normalize());
        }
    }
    cands.into_iter().min().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub m: usize,
    pub lk: Vec<i64>,
    pub delta: LaurentPoly,
    pub component_deltas: Vec<LaurentPoly>,
    pub arf: Option<u8>,
}

impl Fingerprint {
    /// Equality, comparing arf only when both sides carry one.
    pub fn matches(&self, other: &Fingerprint) -> bool {
        self.m == other.m
            && self.lk == other.lk
            && self.delta == other.delta
            && self.component_deltas == other.component_deltas
            && match (self.arf, other.arf) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
    }

    pub fn with_arf(mut self, arf: Option<u8>) -> Self {
        self.arf = arf;
        self
    }
}

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cs: Vec<_> = self.component_deltas.iter().map(|p| p.to_string()).collect();
        write!(f, "m={} lk={:?} Δ={} comps=[{}]", self.m, self.lk, self.delta, cs.join("; "))?;
        if let Some(a) = self.arf {
            write!(f, " arf={a}")?;
        }
        Ok(())
    }
}

/// Invariant tuple identifying small links up to mirror, reversal and
/// component order. Arf is filled in for knots only.
pub fn fingerprint(d: &LinkDiagram) -> Result<Fingerprint, AlexanderError> {
    let d = d.simplify();
    let m = d.ncomponents();
    if m == 0 {
        return Err(AlexanderError::Components { expected: "at least 1", got: 0 });
    }
    let delta = canonical(&alexander_poly(&d)?);
    let component_deltas = if m == 1 {
        vec![delta.clone()]
    } else {
        let mut v = (0..m).map(|k| {
            let s = d.extract_sublink(&[k]).expect("valid index").simplify();
            alexander_poly_knot(&s).map(|p| canonical(&p))
        }).collect::<Result<Vec<_>, _>>()?;
        v.sort();
        v
    };
    let arf = if m == 1 { Some(arf_from_delta(&delta)?) } else { None };
    Ok(Fingerprint { m, lk: d.linking_matrix().abs_multiset(), delta, component_deltas, arf })
}

/// Sato–Levine form of the Arf invariant of a two-component algebraically
/// split link: `arf(L1) + arf(L2) + μ̄(1122) mod 2`.
pub fn arf_split_link2(d: &LinkDiagram) -> Result<u8, AlexanderError> {
    let mu = milnor_1122(d)?;
    let mut s = (mu % 2) as u8;
    for k in 0..2 {
        s += arf_knot(&d.extract_sublink(&[k]).expect("valid index"))?;
    }
    Ok(s % 2)
}
