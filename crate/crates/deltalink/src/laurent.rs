//! Integer Laurent polynomials in one or two variables.
//!
//! Exponents are stored as `[i32; 2]`; in the one-variable case the second
//! slot is always zero. Coefficients are arbitrary precision.

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Exp = [i32; 2];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("variable count mismatch: {0} vs {1}")]
    NVarsMismatch(usize, usize),
    #[error("point has dimension {got}, polynomial has {nvars} variables")]
    Dimension { nvars: usize, got: usize },
    #[error("negative power of {0} is not an integer")]
    NotIntegral(i64),
    #[error("division by zero")]
    DivByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exp, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars == 1 || nvars == 2, "nvars must be 1 or 2");
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn constant<T: Into<BigInt>>(nvars: usize, c: T) -> Self {
        Self::mono(nvars, c, [0, 0])
    }

    pub fn mono<T: Into<BigInt>>(nvars: usize, c: T, e: Exp) -> Self {
        let mut p = Self::zero(nvars);
        assert!(nvars == 2 || e[1] == 0);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The variable `i` (0-based) as a polynomial.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = [0, 0];
        e[i] = 1;
        Self::mono(nvars, 1, e)
    }

    pub fn from_terms<I, T>(nvars: usize, terms: I) -> Self
    where I: IntoIterator<Item = (Exp, T)>, T: Into<BigInt> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0, 0]).is_some_and(|c| c.is_one())
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Lexicographically greatest term.
    pub fn leading(&self) -> Option<(&Exp, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// `±x^a y^b`
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().unwrap().abs().is_one()
    }

    fn add_term(&mut self, e: Exp, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e).or_default();
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(LaurentError::NVarsMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(*e, c.clone());
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term([e1[0] + e2[0], e1[1] + e2[1]], c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, d)| (*e, d * c)).collect() }
    }

    /// Multiply by the monomial `x^e[0] y^e[1]`.
    pub fn shift(&self, e: Exp) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(f, c)| ([f[0] + e[0], f[1] + e[1]], c.clone())).collect(),
        }
    }

    /// Substitute `t_i -> t_i^{-1}` for every `i` with `inv[i]`.
    pub fn invert_vars(&self, inv: [bool; 2]) -> Self {
        let s = |k: usize, v: i32| if inv[k] { -v } else { v };
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| ([s(0, e[0]), s(1, e[1])], c.clone())).collect(),
        }
    }

    pub fn swap_vars(&self) -> Self {
        if self.nvars == 1 {
            return self.clone();
        }
        Self { nvars: 2, terms: self.terms.iter().map(|(e, c)| ([e[1], e[0]], c.clone())).collect() }
    }

    /// Substitute every variable by a single variable `t`.
    pub fn collapse(&self) -> Self {
        Self::from_terms(1, self.terms.iter().map(|(e, c)| ([e[0] + e[1], 0], c.clone())))
    }

    /// Lift a one-variable polynomial into two variables by substituting
    /// `t -> x` (i = 0) or `t -> y` (i = 1).
    pub fn embed(&self, i: usize) -> Self {
        assert_eq!(self.nvars, 1);
        Self::from_terms(2, self.terms.iter().map(|(e, c)| {
            let mut f = [0, 0];
            f[i] = e[0];
            (f, c.clone())
        }))
    }

    pub fn min_exps(&self) -> Option<Exp> {
        if self.is_zero() {
            return None;
        }
        let a = self.terms.keys().map(|e| e[0]).min().unwrap();
        let b = self.terms.keys().map(|e| e[1]).min().unwrap();
        Some([a, b])
    }

    pub fn max_exps(&self) -> Option<Exp> {
        if self.is_zero() {
            return None;
        }
        let a = self.terms.keys().map(|e| e[0]).max().unwrap();
        let b = self.terms.keys().map(|e| e[1]).max().unwrap();
        Some([a, b])
    }

    pub fn evaluate(&self, point: &[i64]) -> Result<BigInt, LaurentError> {
        if point.len() != self.nvars {
            return Err(LaurentError::Dimension { nvars: self.nvars, got: point.len() });
        }
        let mut sum = BigInt::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (k, &x) in point.iter().enumerate() {
                v *= ipow(x, e[k])?;
            }
            sum += v;
        }
        Ok(sum)
    }

    /// The representative of `p`'s unit class with all minimal exponents
    /// zero and a positive leading coefficient.
    pub fn normalize(&self) -> Self {
        let Some(m) = self.min_exps() else { return self.clone() };
        let p = self.shift([-m[0], -m[1]]);
        if p.leading().unwrap().1.is_negative() {
            -p
        } else {
            p
        }
    }

    pub fn eq_up_to_unit(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.normalize() == other.normalize()
    }

    /// Exact quotient `p / q`.
    ///
    /// Lex-leading terms are divided off one at a time. Every quotient
    /// exponent must stay inside the box
    /// `[min(p) - min(q), max(p) - max(q)]`, which bounds the loop.
    pub fn exact_divide(&self, q: &Self) -> Result<Self, LaurentError> {
        self.check(q)?;
        if q.is_zero() {
            return Err(LaurentError::DivByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let (pmin, pmax) = (self.min_exps().unwrap(), self.max_exps().unwrap());
        let (qmin, qmax) = (q.min_exps().unwrap(), q.max_exps().unwrap());
        let lo = [pmin[0] - qmin[0], pmin[1] - qmin[1]];
        let hi = [pmax[0] - qmax[0], pmax[1] - qmax[1]];

        let (qe, qc) = q.leading().map(|(e, c)| (*e, c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);

        while let Some((re, rc)) = rem.leading().map(|(e, c)| (*e, c.clone())) {
            let e = [re[0] - qe[0], re[1] - qe[1]];
            if e[0] < lo[0] || e[0] > hi[0] || e[1] < lo[1] || e[1] > hi[1] {
                return Err(LaurentError::NotDivisible);
            }
            let (c, r) = rc.div_rem(&qc);
            if !r.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let t = Self::mono(self.nvars, c, e);
            rem = &rem - &(&t * q);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Parse with an explicit variable count (`t` for one variable, `x`, `y`
    /// for two).
    pub fn parse(s: &str, nvars: usize) -> Result<Self, LaurentError> {
        parse_poly(s, nvars)
    }
}

fn ipow(x: i64, e: i32) -> Result<BigInt, LaurentError> {
    if e >= 0 {
        return Ok(num_traits::pow(BigInt::from(x), e as usize));
    }
    match x {
        1 => Ok(BigInt::one()),
        -1 => Ok(if e % 2 == 0 { BigInt::one() } else { -BigInt::one() }),
        _ => Err(LaurentError::NotIntegral(x)),
    }
}

// Lexicographic on the term list; used to pick canonical representatives.
impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.nvars.cmp(&other.nvars).then_with(|| self.terms.iter().cmp(other.terms.iter()))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                #[allow(clippy::redundant_closure_call)]
                ($body)(self, rhs).expect("nvars mismatch")
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a: &LaurentPoly, b: &LaurentPoly| a.try_add(b));
impl_binop!(Sub, sub, |a: &LaurentPoly, b: &LaurentPoly| a.try_add(&-b));
impl_binop!(Mul, mul, |a: &LaurentPoly, b: &LaurentPoly| a.try_mul(b));

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn var_names(nvars: usize) -> &'static [&'static str] {
    if nvars == 1 { &["t"] } else { &["x", "y"] }
}

impl Display for LaurentPoly {
    /// Terms by total degree, then with higher powers of the first
    /// variable first: `-1 + x + y - x*y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = var_names(self.nvars);
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by_key(|(e, _)| (e[0] + e[1], std::cmp::Reverse(**e)));

        for (k, (e, c)) in ts.into_iter().enumerate() {
            let mono = (0..self.nvars).filter(|&i| e[i] != 0).map(|i| match e[i] {
                1 => names[i].to_string(),
                p => format!("{}^{}", names[i], p),
            }).collect::<Vec<_>>().join("*");

            let (neg, a) = (c.is_negative(), c.abs());
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Infers the variable count: any `x` or `y` means two variables.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let nvars = if s.contains('x') || s.contains('y') { 2 } else { 1 };
        parse_poly(s, nvars)
    }
}

fn parse_poly(s: &str, nvars: usize) -> Result<LaurentPoly, LaurentError> {
    let err = |m: &str| LaurentError::Parse(format!("{m} in {s:?}"));
    let src: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(err("empty input"));
    }
    let names = var_names(nvars);
    let mut p = LaurentPoly::zero(nvars);
    let mut i = 0;

    let read_int = |i: &mut usize| -> Option<i64> {
        let st = *i;
        if *i < src.len() && src[*i] == '-' {
            *i += 1;
        }
        while *i < src.len() && src[*i].is_ascii_digit() {
            *i += 1;
        }
        src[st..*i].iter().collect::<String>().parse().ok()
    };

    while i < src.len() {
        let mut sign = 1i64;
        if src[i] == '+' || src[i] == '-' {
            if src[i] == '-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return Err(err("expected + or -"));
        }

        let mut coef = BigInt::from(sign);
        let mut e = [0, 0];
        loop {
            if i >= src.len() {
                return Err(err("dangling operator"));
            }
            if src[i].is_ascii_digit() {
                let st = i;
                while i < src.len() && src[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[st..i].iter().collect::<String>().parse().unwrap();
                coef *= n;
            } else if let Some(k) = names.iter().position(|n| n.starts_with(src[i])) {
                i += 1;
                let mut pw = 1;
                if i < src.len() && src[i] == '^' {
                    i += 1;
                    let paren = i < src.len() && src[i] == '(';
                    if paren {
                        i += 1;
                    }
                    pw = read_int(&mut i).ok_or_else(|| err("bad exponent"))?;
                    if paren {
                        if i >= src.len() || src[i] != ')' {
                            return Err(err("unclosed parenthesis"));
                        }
                        i += 1;
                    }
                }
                e[k] += pw as i32;
            } else {
                return Err(err(&format!("unexpected {:?}", src[i])));
            }
            if i < src.len() && src[i] == '*' {
                i += 1;
                continue;
            }
            break;
        }
        p.add_term(e, coef);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> LaurentPoly { LaurentPoly::var(2, 0) }
    fn y() -> LaurentPoly { LaurentPoly::var(2, 1) }
    fn c2(n: i64) -> LaurentPoly { LaurentPoly::constant(2, n) }

    #[test]
    fn add_zero() {
        let p: LaurentPoly = "3 - x*y^2 + x^-1".parse().unwrap();
        assert_eq!(&p + &LaurentPoly::zero(2), p);
    }

    #[test]
    fn expand() {
        let p = (x() - c2(1)) * (y() - c2(1));
        assert_eq!(p.to_string(), "1 - x - y + x*y");
        assert_eq!(p, "x*y - x - y + 1".parse().unwrap());
    }

    #[test]
    fn display_order() {
        let p = -((x() - c2(1)) * (y() - c2(1)));
        assert_eq!(p.to_string(), "-1 + x + y - x*y");
        let q: LaurentPoly = "2*t^-1 - 3 + 2*t".parse().unwrap();
        assert_eq!(q.to_string(), "2*t^-1 - 3 + 2*t");
        assert_eq!(LaurentPoly::zero(1).to_string(), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["1 - x - y + x*y", "-x^-2*y^3 + 7", "t^(-1) - 1 + t", "-4*t^3"] {
            let p: LaurentPoly = s.parse().unwrap();
            let q: LaurentPoly = p.to_string().parse().unwrap();
            assert_eq!(p, q);
        }
        assert!("1 + + x".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("x^".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn evaluate() {
        let p: LaurentPoly = "y^4 - y^3 + y^2 - y + 1".parse().unwrap();
        assert_eq!(p.evaluate(&[1, 1]).unwrap(), BigInt::from(1));
        assert_eq!(LaurentPoly::zero(2).evaluate(&[5, -3]).unwrap(), BigInt::zero());
        let t: LaurentPoly = "t - 1 + t^-1".parse().unwrap();
        assert_eq!(t.evaluate(&[-1]).unwrap(), BigInt::from(-3));
        assert!(t.evaluate(&[2]).is_err());
        assert!(t.evaluate(&[1, 1]).is_err());
    }

    #[test]
    fn normalize() {
        // -x^-2 y (-x^-1 + 1) has normal form x - x^2 up to sign
        let p: LaurentPoly = "-x^-1 + 1".parse().unwrap();
        let u = LaurentPoly::mono(2, -1, [-2, 1]);
        let n = (&u * &p).normalize();
        assert_eq!(n, "x - 1".parse().unwrap());
        assert_eq!(n.min_exps(), Some([0, 0]));
        assert_eq!(n.normalize(), n);
        assert_eq!(p.normalize(), (&p * &LaurentPoly::mono(2, -1, [5, -7])).normalize());
    }

    #[test]
    fn divide() {
        let a = (x() - c2(1)) * (y() - c2(1));
        let p = &a * &"y^2 + 1".parse().unwrap();
        assert_eq!(p.exact_divide(&a).unwrap(), "y^2 + 1".parse().unwrap());
        assert!(p.exact_divide(&p).unwrap().is_one());
        assert_eq!(LaurentPoly::zero(2).exact_divide(&a).unwrap(), LaurentPoly::zero(2));
        assert_eq!(p.exact_divide(&(&a * &y())).unwrap(), "y + y^-1".parse().unwrap());
        assert_eq!("x + 1".parse::<LaurentPoly>().unwrap().exact_divide(&a), Err(LaurentError::NotDivisible));
        assert_eq!("2*x".parse::<LaurentPoly>().unwrap().exact_divide(&"3*x".parse().unwrap()), Err(LaurentError::NotDivisible));
        assert_eq!(a.exact_divide(&LaurentPoly::zero(2)), Err(LaurentError::DivByZero));
    }

    #[test]
    fn mismatch() {
        let p = LaurentPoly::one(1);
        assert!(p.try_add(&c2(1)).is_err());
        assert!(p.try_mul(&c2(1)).is_err());
        assert!(p.exact_divide(&c2(1)).is_err());
    }
}
