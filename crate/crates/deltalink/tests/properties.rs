mod common;

use std::sync::OnceLock;

use deltalink::alexander::fingerprint;
use deltalink::catalog::Catalog;
use deltalink::diagram::LinkDiagram;
use proptest::prelude::*;

use common::*;

fn diagrams() -> &'static Vec<LinkDiagram> {
    static POOL: OnceLock<Vec<LinkDiagram>> = OnceLock::new();
    POOL.get_or_init(|| pool(&Catalog::bundled()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn laurent_ring((p, q, r) in poly_triple()) {
        ring_axioms(&p, &q, &r).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn delta_move_invariance((i, ch) in move_case(diagrams().len())) {
        let (d, s) = walk(&diagrams()[i], &ch);
        check_move(&d, &s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn delta_move_involution((i, ch) in move_case(diagrams().len())) {
        let (d, s) = walk(&diagrams()[i], &ch);
        check_involution(&d, &s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn mirror_and_simplify((i, ch) in move_case(diagrams().len())) {
        let (d, _) = walk(&diagrams()[i], &ch);
        let m = d.mirror();
        prop_assert_eq!(m.mirror(), d.clone());
        let (l, lm) = (d.linking_matrix(), m.linking_matrix());
        for a in 0..l.size() {
            for b in 0..l.size() {
                prop_assert_eq!(lm.get(a, b), -l.get(a, b));
            }
        }
        let s = d.simplify();
        prop_assert!(s.ncrossings() <= d.ncrossings());
        prop_assert_eq!(s.simplify(), s.clone());
        prop_assert_eq!(s.linking_matrix().abs_multiset(), l.abs_multiset());
        prop_assert_eq!(fingerprint(&s).unwrap(), fingerprint(&d).unwrap());
        prop_assert_eq!(fingerprint(&m).unwrap(), fingerprint(&d).unwrap());
    }
}
