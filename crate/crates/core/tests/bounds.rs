use gridknot::bounds::{jump_decomposition, sigma, theorem3_bound, verify_theorem3, BoundKind};
use gridknot::census::{enumerate, CensusFilter, CensusOptions};
use gridknot::{
    apply, available_moves, extremal_diagram, Axis, CromwellMove, Direction, GridDiagram,
    MoveKind,
};

fn knots(n: usize) -> Vec<GridDiagram> {
    enumerate(n, CensusFilter::KNOTS, &CensusOptions::default(), &mut |_| {})
        .unwrap()
        .representatives
}

fn exterior(d: &GridDiagram) -> impl Iterator<Item = CromwellMove> {
    available_moves(d).into_iter().filter(CromwellMove::is_exterior)
}

fn epsilon(n: usize) -> usize {
    n % 2
}

#[test]
fn formula_is_exact_for_every_size() {
    for n in 2..40usize {
        let e = epsilon(n);
        let full = 3 * n * n - 4 * n - 4 - 3 * e;
        assert_eq!(theorem3_bound(n, BoundKind::ExteriorExchange).unwrap(), full);
        assert_eq!(theorem3_bound(n, BoundKind::ExteriorMerge).unwrap(), full / 2);
        assert_eq!(
            theorem3_bound(n, BoundKind::Rotation).unwrap(),
            (3 * n * n - 4 * n - 2 - 3 * e) / 2
        );
    }
    assert!(theorem3_bound(0, BoundKind::ExteriorMerge).is_err());
}

#[test]
fn decomposition_shapes() {
    for n in 3..=5 {
        for d in knots(n) {
            for m in exterior(&d) {
                let specs = jump_decomposition(&d, &m).unwrap();
                let want = if m.kind() == MoveKind::ExteriorExchange { 2 } else { 1 };
                assert_eq!(specs.len(), want, "{m}");
                assert_eq!(specs[0].host, d);
                let last = specs.last().unwrap().result().unwrap();
                let moved = apply(&d, &m).unwrap().canonical();
                if m.kind() == MoveKind::ExteriorMerge {
                    // The jump leaves a unit edge; an ordinary merge finishes.
                    assert_eq!(last.n(), n);
                    let merged = available_moves(&last)
                        .into_iter()
                        .filter(CromwellMove::is_merge)
                        .any(|k| apply(&last, &k).unwrap().canonical() == moved);
                    assert!(merged, "{d:?} {m}");
                } else {
                    assert_eq!(last.canonical(), moved, "{d:?} {m}");
                }
            }
        }
    }
}

#[test]
fn exchange_jumps_the_longer_edge_first() {
    for n in 3..=6 {
        for d in knots(n) {
            for axis in [Axis::Horizontal, Axis::Vertical] {
                let m = CromwellMove::ExteriorExchange { axis };
                let Ok(specs) = jump_decomposition(&d, &m) else {
                    continue;
                };
                let w = specs[0].working();
                let rows = w.rows();
                let len = |r: usize| rows[r].1 - rows[r].0;
                let other = if specs[0].row == 0 { n - 1 } else { 0 };
                assert!(len(specs[0].row) >= len(other), "{d:?} {axis:?}");
            }
        }
    }
}

#[test]
fn rotation_jump_matches_the_first_exchange_jump() {
    for d in knots(5) {
        let ex = CromwellMove::ExteriorExchange {
            axis: Axis::Horizontal,
        };
        let Ok(specs) = jump_decomposition(&d, &ex) else {
            continue;
        };
        let rows = d.rows();
        let len = |r: usize| rows[r].1 - rows[r].0;
        if len(d.n() - 1) < len(0) {
            continue;
        }
        let rot = CromwellMove::Rotation {
            direction: Direction::TopToBottom,
        };
        let r = jump_decomposition(&d, &rot).unwrap();
        assert_eq!(sigma(&r[0]).unwrap(), sigma(&specs[0]).unwrap(), "{d:?}");
    }
}

#[test]
fn counting_identities_hold() {
    for n in 2..=6 {
        for d in knots(n) {
            for m in exterior(&d) {
                for spec in jump_decomposition(&d, &m).unwrap() {
                    let s = sigma(&spec).unwrap();
                    assert_eq!(2 * s.e, 4 * s.v + s.boundary_points, "{d:?} {m}");
                    assert!(s.e_i + s.e_ss + s.e_partial + s.e_s <= s.e, "{d:?} {m}");
                    assert!(s.e_svs <= s.sv2_vertices);
                    assert!(s.sigma_strong <= s.sigma_simple);
                    assert_eq!(s.sigma_simple, s.v + s.e);
                    assert_eq!(s.sigma_no_r1_valid, s.e_partial == 0);
                }
            }
        }
    }
}

#[test]
fn single_jump_counts_respect_the_size_limits() {
    for n in 3..=6 {
        let e = epsilon(n);
        for d in knots(n) {
            for m in exterior(&d) {
                let specs = jump_decomposition(&d, &m).unwrap();
                let s = sigma(&specs[0]).unwrap();
                match m.kind() {
                    MoveKind::ExteriorExchange => {
                        assert!(2 * s.v <= n * (n - 2) - e, "{d:?} {m}");
                        assert!(s.e <= n * n - n - 2 - e, "{d:?} {m}");
                    }
                    MoveKind::Rotation => assert!(s.e <= n * n - n - 1 - e, "{d:?} {m}"),
                    _ => {}
                }
            }
        }
    }
}

#[test]
fn extremal_diagrams_stay_within_the_bound() {
    for n in 3..=9 {
        let d = extremal_diagram(n).unwrap();
        for m in exterior(&d) {
            let r = verify_theorem3(&d, &m).unwrap();
            assert!(r.holds, "n={n} {m}: {} > {}", r.total, r.bound);
            assert_eq!(r.slack, r.bound as i64 - r.total as i64);
        }
    }
}

#[test]
fn interior_moves_have_no_decomposition() {
    let d = GridDiagram::from_one_based(4, &[(1, 3), (2, 4), (1, 3), (2, 4)]).unwrap();
    for m in available_moves(&d).into_iter().filter(|m| !m.is_exterior()) {
        assert!(jump_decomposition(&d, &m).is_err(), "{m}");
        assert!(verify_theorem3(&d, &m).is_err(), "{m}");
    }
}
