mod common;

use std::fs;

use deltalink::bounds::*;
use deltalink::catalog::*;
use deltalink::pathways::*;

fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

#[test]
fn load_from_disk() {
    let c = load_catalog(data_dir().join("catalog.txt")).unwrap();
    let b = Catalog::bundled();
    assert_eq!(c.links.len(), 34);
    assert_eq!(c.pathways, b.pathways);
    assert_eq!(c.link("L9a18").unwrap().annular_diagram(), b.link("L9a18").unwrap().annular_diagram());
    assert!(matches!(load_catalog(data_dir().join("nope.txt")), Err(CatalogError::Io { .. })));
}

#[test]
fn record_invariants() {
    let c = Catalog::bundled();
    for r in &c.links {
        let d = r.diagram();
        assert!(d.is_algebraically_split() && d.is_proper(), "{}", r.name_t);
        assert_eq!(r.components.len(), d.ncomponents());
        assert!(r.g4.0 <= r.g4.1);
        assert_eq!(r.mu1122_ref.is_some(), d.ncomponents() == 2, "{}", r.name_t);
        assert!(r.name_r.starts_with(|ch: char| ch.is_ascii_digit()) && r.name_r.contains('^'));
    }
    assert_eq!(c.links.iter().filter(|r| r.mu1122_ref.is_some()).count(), 29);
}

#[test]
fn computed_columns_agree() {
    let c = Catalog::bundled();
    let checks = c.validate_against_computation();
    let bad: Vec<_> = checks.iter().filter(|ch| !ch.ok).map(|ch| ch.to_string()).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    assert_eq!(checks.iter().filter(|ch| ch.field == "arf").count(), 29);
}

#[test]
fn no_collisions() {
    assert_eq!(Catalog::bundled().fingerprint_collisions().unwrap(), vec![]);
}

#[test]
fn rejects_bad_records() {
    let dir = std::env::temp_dir().join(format!("deltalink-cat-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let text = fs::read_to_string(data_dir().join("catalog.txt")).unwrap();

    let bad = text.replacen("udelta_expected = 4|6", "udelta_expected = 3|5", 1);
    fs::write(dir.join("catalog.txt"), &bad).unwrap();
    match load_catalog(dir.join("catalog.txt")) {
        Err(CatalogError::Field { record, field, .. }) => assert_eq!((record.as_str(), field.as_str()), ("L9a14", "udelta_expected")),
        other => panic!("{other:?}"),
    }

    let bad = text.replacen("g4 = 3..3", "g4 = 3..2", 1);
    fs::write(dir.join("catalog.txt"), &bad).unwrap();
    assert!(matches!(load_catalog(dir.join("catalog.txt")), Err(CatalogError::Field { field, .. }) if field == "g4"));

    // annular data is looked up next to the catalog
    fs::write(dir.join("catalog.txt"), &text).unwrap();
    assert!(matches!(load_catalog(dir.join("catalog.txt")), Err(CatalogError::Field { field, .. }) if field == "annular"));
    fs::copy(data_dir().join("L9a18.annular"), dir.join("L9a18.annular")).unwrap();
    let c = load_catalog(dir.join("catalog.txt")).unwrap();
    assert!(c.pathways.is_empty());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_rows() {
    let c = Catalog::bundled();
    let mut rows = vec![];
    for r in &c.links {
        let p = parse_certificate(&c.pathways[&r.name_t], &c).unwrap();
        let ub = upper_bound_from(&p, &verify_level_a(&p)).unwrap();
        let rep = combine(r, Some(ub), r.beta1_flag()).unwrap();
        assert!(rep.status.agrees(&r.udelta_expected), "{rep}");
        assert_eq!(rep.lb_final % 2, r.arf as u32);
        assert!(rep.lower_bounds.iter().all(|(v, _)| *v <= rep.lb_final));
        assert_eq!(lb_restricted(r, &r.methods_expected, r.beta1_flag()).unwrap(), rep.lb_final, "{}", r.name_t);
        rows.push(TableRow::from_report(r, &rep).unwrap());
    }
    assert!(rows.iter().all(TableRow::matches_expected));
    let csv = table_csv(&rows).unwrap();
    assert_eq!(parse_table_csv(&csv).unwrap(), rows);
    assert_eq!(csv.lines().count(), 35);
}

#[test]
fn monotone() {
    let c = Catalog::bundled();
    for r in &c.links {
        let base = combine(r, None, false).unwrap().lb_final;
        let mut s = r.clone();
        s.g4 = (r.g4.0 + 1, r.g4.1 + 1);
        assert!(combine(&s, None, false).unwrap().lb_final >= base);
        let mut s = r.clone();
        s.u += 2;
        assert!(combine(&s, None, false).unwrap().lb_final >= base);
    }
}
