use proptest::prelude::*;

use gridknot::census::knot_determinant;
use gridknot::simplify::divides;
use gridknot::{apply, available_moves, inverse, io, CromwellMove, GridDiagram, Symmetry};

/// Column `i` joins rows `x[i]` and `o[i]`; a shuffle pair with no fixed
/// coincidence is always a valid diagram.
fn grid(max_n: usize) -> impl Strategy<Value = GridDiagram> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let rows: Vec<usize> = (0..n).collect();
            (Just(rows.clone()).prop_shuffle(), Just(rows).prop_shuffle())
        })
        .prop_filter("coincident ends", |(x, o)| x.iter().zip(o).all(|(a, b)| a != b))
        .prop_map(|(x, o)| {
            let cols: Vec<_> = x.iter().zip(&o).map(|(&a, &b)| (a.min(b), a.max(b))).collect();
            GridDiagram::new(x.len(), &cols).unwrap()
        })
}

fn sizes_change_as_declared(d: &GridDiagram, m: &CromwellMove, e: &GridDiagram) {
    assert_eq!(e.n() as isize, d.n() as isize + m.size_delta(), "{m}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_move_is_undone_by_its_inverse(d in grid(8)) {
        for m in available_moves(&d) {
            let e = apply(&d, &m).unwrap();
            sizes_change_as_declared(&d, &m, &e);
            let back = inverse(&d, &m).unwrap();
            prop_assert_eq!(apply(&e, &back).unwrap(), d.clone(), "{}", m);
        }
    }

    #[test]
    fn divides_are_undone_by_merges(d in grid(7)) {
        for m in divides(&d) {
            let e = apply(&d, &m).unwrap();
            prop_assert_eq!(e.n(), d.n() + 1);
            let back = inverse(&d, &m).unwrap();
            prop_assert!(back.is_merge());
            prop_assert_eq!(apply(&e, &back).unwrap(), d.clone());
        }
    }

    #[test]
    fn canonical_form_is_a_class_function(d in grid(9), k in 0usize..8) {
        let c = d.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert_eq!(d.transform(Symmetry::ALL[k]).canonical(), c.clone());
        let (form, s) = d.canonical_form();
        prop_assert_eq!(d.transform(s), form);
        prop_assert_eq!(8 % d.orbit_size(), 0);
    }

    #[test]
    fn symmetries_preserve_invariants(d in grid(8), k in 0usize..8) {
        let e = d.transform(Symmetry::ALL[k]);
        prop_assert_eq!(e.crossing_count(), d.crossing_count());
        prop_assert_eq!(e.component_count(), d.component_count());
        prop_assert_eq!(e.transform(Symmetry::ALL[k].inverse()), d);
    }

    #[test]
    fn text_and_json_round_trip(d in grid(10)) {
        prop_assert_eq!(io::parse_text(&io::to_text(&d)).unwrap(), d.clone());
        prop_assert_eq!(io::from_json(&io::to_json(&d)).unwrap(), d.clone());
        prop_assert_eq!(io::parse_any(&io::to_json(&d).to_string()).unwrap(), d);
    }

    #[test]
    fn determinant_survives_every_move(d in grid(6)) {
        prop_assume!(d.is_knot());
        let det = knot_determinant(&d).unwrap();
        prop_assert_eq!(det % 2, 1);
        for m in available_moves(&d) {
            let e = apply(&d, &m).unwrap();
            prop_assert_eq!(knot_determinant(&e).unwrap(), det, "{}", m);
        }
    }

    #[test]
    fn moves_preserve_component_count(d in grid(8)) {
        for m in available_moves(&d) {
            prop_assert_eq!(apply(&d, &m).unwrap().component_count(), d.component_count());
        }
    }
}
