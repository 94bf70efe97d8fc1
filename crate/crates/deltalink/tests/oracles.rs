//! Invariants checked against values computed independently of the
//! library: Seifert matrices for knots, hand counts for small diagrams.

mod common;

use deltalink::alexander::*;
use deltalink::catalog::Catalog;
use deltalink::diagram::parse_pd;
use deltalink::laurent::LaurentPoly;

use common::*;

/// Coefficients (lowest degree first) of `det(V - t V^T)` for a 2x2 `V`.
fn seifert_det(v: [[i64; 2]; 2]) -> Vec<i64> {
    // entry (i,j) of V - tV^T is v[i][j] - t v[j][i]
    let e = |i: usize, j: usize| [v[i][j], -v[j][i]];
    let mul = |a: [i64; 2], b: [i64; 2]| [a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]];
    let (p, q) = (mul(e(0, 0), e(1, 1)), mul(e(0, 1), e(1, 0)));
    let mut c: Vec<i64> = (0..3).map(|k| p[k] - q[k]).collect();
    while c.first() == Some(&0) {
        c.remove(0);
    }
    if c.last().is_some_and(|&x| x < 0) {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    c
}

fn coeffs(p: &LaurentPoly) -> Vec<i64> {
    let hi = p.max_exps().unwrap()[0];
    (0..=hi).map(|k| p.coeff(&[k, 0]).try_into().unwrap()).collect()
}

#[test]
fn trefoil_seifert() {
    let c = Catalog::bundled();
    let want = seifert_det([[-1, 1], [0, -1]]);
    assert_eq!(want, [1, -1, 1]);
    for d in [parse_pd("X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)").unwrap(), c.knot("3_1").unwrap().diagram().clone()] {
        let p = alexander_poly_knot(&d).unwrap();
        assert_eq!(coeffs(&p), want);
        assert_eq!(arf_knot(&d).unwrap(), 1);
    }
    // t - 1 + 1/t at t = -1
    assert_eq!(LaurentPoly::parse("t - 1 + t^-1", 1).unwrap().evaluate(&[-1]).unwrap(), (-3).into());
}

#[test]
fn figure_eight_seifert() {
    let c = Catalog::bundled();
    let want = seifert_det([[-1, 1], [0, 1]]);
    assert_eq!(want, [1, -3, 1]);
    let d = c.knot("4_1").unwrap().diagram();
    assert_eq!(coeffs(&alexander_poly_knot(d).unwrap()), want);
    assert_eq!(alexander_poly_knot(d).unwrap().evaluate(&[-1]).unwrap(), 5.into());
    assert_eq!(arf_knot(d).unwrap(), 1);
}

#[test]
fn unknot() {
    let d = parse_pd("O*1").unwrap();
    assert!(alexander_poly_knot(&d).unwrap().is_one());
    assert_eq!(arf_knot(&d).unwrap(), 0);
    assert!(alexander_poly_knot(&parse_pd(UNKNOT3).unwrap()).unwrap().is_one());
}

#[test]
fn hopf_by_hand() {
    // both crossings positive: lk = (1 + 1) / 2
    let d = parse_pd(HOPF).unwrap();
    assert!(d.crossings().iter().all(|x| x.sign == 1));
    assert_eq!(d.linking_matrix().get(0, 1), 1);
    assert!(!d.is_algebraically_split() && !d.is_proper());
    assert_eq!(milnor_1122(&d), Err(AlexanderError::NotSplit));
}

#[test]
fn unknot_to_trefoil() {
    let c = Catalog::bundled();
    let d = parse_pd(UNKNOT3).unwrap();
    let s = d.find_site([0, 1, 2]).unwrap();
    let e = d.apply_delta_move(&s).unwrap();
    let want = fingerprint(c.knot("3_1").unwrap().diagram()).unwrap();
    assert!(fingerprint(&e).unwrap().matches(&want));
    assert_ne!(fingerprint(&d).unwrap(), want);
}

#[test]
fn l9a2() {
    let c = Catalog::bundled();
    let d = c.link("L9a2").unwrap().diagram();
    let f: LaurentPoly = "1 - y + y^2 - y^3 + y^4".parse().unwrap();
    assert_eq!(f.evaluate(&[1, 1]).unwrap(), 1.into());
    let g = milnor_f(d).unwrap();
    assert!(g.eq_up_to_unit(&f) || g.swap_vars().eq_up_to_unit(&f), "{g}");
    assert_eq!(milnor_1122(d).unwrap(), 1);
    let m = alexander_poly_link2(&d.mirror()).unwrap();
    assert!(m.eq_up_to_unit(&alexander_poly_link2(d).unwrap().invert_vars([true, true])));

    let names: Vec<_> = (0..2).map(|k| c.identify_knot(&d.extract_sublink(&[k]).unwrap()).unwrap().unwrap()).collect();
    assert!(names.contains(&"3_1".to_string()) && names.contains(&"0_1".to_string()));
    let k = names.iter().position(|n| n == "0_1").unwrap();
    assert_eq!(d.extract_sublink(&[k]).unwrap().simplify().ncrossings(), 0);
}

#[test]
fn table_mu_values() {
    let c = Catalog::bundled();
    assert_eq!(milnor_1122(c.link("L8a2").unwrap().diagram()).unwrap(), 0);
    assert_eq!(milnor_1122(c.link("L9a40").unwrap().diagram()).unwrap(), 5);
    assert_eq!(milnor_1122(&parse_pd("O*2").unwrap()).unwrap(), 0);
}

#[test]
fn fingerprints() {
    let c = Catalog::bundled();
    let l7a4 = c.link("L7a4").unwrap().diagram();
    assert_eq!(fingerprint(l7a4).unwrap(), fingerprint(&l7a4.mirror()).unwrap());
    assert!(c.resolve("mL7a4").unwrap().fingerprint().unwrap().matches(&fingerprint(&l7a4.mirror()).unwrap()));
    let l5a1 = fingerprint(c.link("L5a1").unwrap().diagram()).unwrap();
    let triv = fingerprint(&parse_pd("O*2").unwrap()).unwrap();
    assert!(!l5a1.delta.is_zero() && triv.delta.is_zero());
    assert!(!l5a1.matches(&triv));
}
