use gridknot::census::{enumerate, CensusFilter, CensusOptions};
use gridknot::moves::{interleaved, Interleaving};
use gridknot::{
    apply, available_moves, extremal_diagram, inverse, max_crossings_bound, max_length_bound,
    Axis, CromwellMove, Direction, Error, GridDiagram, MoveKind, Symmetry,
};

fn g(n: usize, cols: &[(usize, usize)]) -> GridDiagram {
    GridDiagram::from_one_based(n, cols).unwrap()
}

#[test]
fn validation() {
    assert_eq!(g(2, &[(1, 2), (1, 2)]), GridDiagram::trivial());
    assert!(matches!(
        GridDiagram::from_one_based(2, &[(1, 1), (2, 2)]),
        Err(Error::DegenerateColumn { .. })
    ));
    let three = g(3, &[(1, 2), (1, 3), (2, 3)]);
    assert_eq!(three.component_count(), 1);
    assert_eq!(three.crossing_count(), 1);
    assert!(GridDiagram::from_one_based(1, &[(1, 1)]).is_err());
}

#[test]
fn components_and_lengths() {
    assert_eq!(GridDiagram::trivial().component_count(), 1);
    assert_eq!(g(4, &[(1, 2), (1, 2), (3, 4), (3, 4)]).component_count(), 2);
    assert_eq!(GridDiagram::trivial().length_stats().total_all, 4);
    assert_eq!(extremal_diagram(8).unwrap().length_stats().total_all, 64);
    assert_eq!(extremal_diagram(7).unwrap().length_stats().total_all, 48);
}

#[test]
fn bound_formulas() {
    assert_eq!((max_crossings_bound(8).unwrap(), max_length_bound(8).unwrap()), (24, 64));
    assert_eq!((max_crossings_bound(7).unwrap(), max_length_bound(7).unwrap()), (17, 48));
    assert_eq!((max_crossings_bound(2).unwrap(), max_length_bound(2).unwrap()), (0, 4));
    assert_eq!(extremal_diagram(4).unwrap().crossing_count(), 4);
    assert_eq!(extremal_diagram(3).unwrap().crossing_count(), 1);
    let five = extremal_diagram(5).unwrap().length_stats();
    assert_eq!((five.crossing_count, five.total_all), (7, 24));
    assert!(max_crossings_bound(1).is_err());
}

#[test]
fn crossings_never_exceed_the_bounds() {
    for n in 2..=6 {
        let cb = max_crossings_bound(n).unwrap();
        let lb = max_length_bound(n).unwrap();
        enumerate(n, CensusFilter::ALL, &CensusOptions::default(), &mut |d| {
            let s = d.length_stats();
            assert!(s.crossing_count <= cb && s.total_all <= lb, "{d:?}");
        })
        .unwrap();
    }
}

#[test]
fn canonical_form_is_the_least_image() {
    assert_eq!(GridDiagram::trivial().canonical(), GridDiagram::trivial());
    let d = g(3, &[(1, 2), (1, 3), (2, 3)]);
    let least = Symmetry::ALL.iter().map(|&s| d.transform(s)).min().unwrap();
    assert_eq!(d.canonical(), least);
    let half = Symmetry::ALL.into_iter().find(|s| s.name() == "rot180").unwrap();
    let t = extremal_diagram(6).unwrap();
    assert_eq!(t.transform(half).canonical(), t.canonical());
}

#[test]
fn interleaving() {
    assert_eq!(interleaved((1, 3), (2, 4)), Interleaving::Interleaved);
    assert_eq!(interleaved((1, 4), (2, 3)), Interleaving::Nested);
    assert_eq!(interleaved((1, 2), (2, 3)), Interleaving::SharedEndpoint);
    assert_eq!(interleaved((1, 2), (3, 4)), Interleaving::Disjoint);
}

#[test]
fn moves_on_the_trivial_diagram() {
    let d = GridDiagram::trivial();
    let ms = available_moves(&d);
    assert!(ms.iter().all(|m| !m.is_exchange()));
    for m in [
        CromwellMove::InteriorMerge {
            axis: Axis::Horizontal,
            edge: 0,
        },
        CromwellMove::InteriorMerge {
            axis: Axis::Vertical,
            edge: 1,
        },
    ] {
        assert!(matches!(apply(&d, &m), Err(Error::InapplicableMove(_))));
    }
}

#[test]
fn extremal_three_grid_has_a_merge() {
    let d = extremal_diagram(3).unwrap();
    assert!(available_moves(&d).iter().any(CromwellMove::is_merge));
}

#[test]
fn stuck_eight_grids_admit_only_exterior_exchanges_and_rotations() {
    let opts = CensusOptions {
        jobs: 4,
        ..CensusOptions::default()
    };
    let stuck = enumerate(8, CensusFilter::STUCK_TRIVIAL, &opts, &mut |_| {})
        .unwrap()
        .representatives;
    assert!(!stuck.is_empty());
    for d in stuck {
        let ms = available_moves(&d);
        let kinds: Vec<_> = ms.iter().map(CromwellMove::kind).collect();
        assert_eq!(kinds.iter().filter(|&&k| k == MoveKind::ExteriorExchange).count(), 2);
        assert!(kinds
            .iter()
            .all(|&k| k == MoveKind::ExteriorExchange || k == MoveKind::Rotation));
    }
}

#[test]
fn rotation_has_order_n() {
    let top = CromwellMove::Rotation {
        direction: Direction::TopToBottom,
    };
    enumerate(4, CensusFilter::ALL, &CensusOptions::default(), &mut |d| {
        let mut cur = d.clone();
        for _ in 0..4 {
            cur = apply(&cur, &top).unwrap();
        }
        assert_eq!(&cur, d);
    })
    .unwrap();
    assert_eq!(
        inverse(&GridDiagram::trivial(), &top).unwrap(),
        CromwellMove::Rotation {
            direction: Direction::BottomToTop
        }
    );
}

#[test]
fn knot_merges_exist_exactly_with_short_or_spanning_edges() {
    for n in 3..=6 {
        enumerate(n, CensusFilter::KNOTS, &CensusOptions::default(), &mut |d| {
            let short = d
                .cols()
                .chain(d.rows())
                .any(|(a, b)| b - a == 1 || b - a == n - 1);
            let merge = available_moves(d).iter().any(CromwellMove::is_merge);
            assert_eq!(short, merge, "{d:?}");
        })
        .unwrap();
    }
}

#[test]
fn shared_endpoints_come_with_a_merge_on_knots() {
    for n in 3..=6 {
        enumerate(n, CensusFilter::KNOTS, &CensusOptions::default(), &mut |d| {
            let cols: Vec<_> = d.cols().collect();
            let rows = d.rows();
            let shared = |spans: &[(usize, usize)]| {
                spans
                    .windows(2)
                    .any(|w| interleaved(w[0], w[1]) == Interleaving::SharedEndpoint)
            };
            if shared(&cols) || shared(&rows) {
                assert!(available_moves(d).iter().any(|m| m.kind() == MoveKind::InteriorMerge));
            }
        })
        .unwrap();
    }
}
