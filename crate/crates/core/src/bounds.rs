//! Reidemeister move budgets for exterior moves.
//!
//! Every exterior move and rotation is decomposed into jump moves. A jump
//! takes the topmost edge of a suitably transformed copy of the diagram (the
//! working frame), together with its two legs, and carries it underneath the
//! whole diagram. The jumped strand `s` and its replacement `u` bound a
//! rectangle `Q`; the part of the diagram inside `Q` determines the cost.
//!
//! All geometry is in the working frame at doubled resolution (see
//! [`crate::geometry`]).

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::grid::{GridDiagram, Symmetry};
use crate::io;
use crate::moves::{self, Axis, CromwellMove, Direction, End, MoveKind};
use crate::qmap::{QMap, VKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    ExteriorExchange,
    ExteriorMerge,
    Rotation,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::ExteriorExchange => "exterior_exchange",
            BoundKind::ExteriorMerge => "exterior_merge",
            BoundKind::Rotation => "rotation",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exterior_exchange" => Ok(BoundKind::ExteriorExchange),
            "exterior_merge" => Ok(BoundKind::ExteriorMerge),
            "rotation" => Ok(BoundKind::Rotation),
            _ => Err(Error::Parse(format!("unknown bound kind {s:?}"))),
        }
    }

    pub fn of_move(m: &CromwellMove) -> Result<Self> {
        match m.kind() {
            MoveKind::ExteriorExchange => Ok(BoundKind::ExteriorExchange),
            MoveKind::ExteriorMerge => Ok(BoundKind::ExteriorMerge),
            MoveKind::Rotation => Ok(BoundKind::Rotation),
            _ => Err(Error::InapplicableMove(format!(
                "{m} is not an exterior move"
            ))),
        }
    }
}

/// Worst-case number of Reidemeister moves realizing one move of `kind` on
/// an `n`-grid.
pub fn theorem3_bound(n: usize, kind: BoundKind) -> Result<usize> {
    if n < 2 {
        return Err(Error::Size(n));
    }
    let eps = n % 2;
    let full = 3 * n * n - 4 * n - 4 - 3 * eps;
    Ok(match kind {
        BoundKind::ExteriorExchange => full,
        BoundKind::ExteriorMerge => full / 2,
        BoundKind::Rotation => (full + 2) / 2,
    })
}

/// One jump move: in `host.transform(frame)`, the edge on row `row` and its
/// two downward legs are carried below row 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpSpec {
    pub host: GridDiagram,
    pub frame: Symmetry,
    pub row: usize,
}

/// Placement of a jump in its working frame (zero-based grid units).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JumpGeometry {
    pub n: usize,
    pub r: usize,
    pub a: usize,
    pub b: usize,
    /// Lower ends of the legs at columns `a` and `b`.
    pub ya: usize,
    pub yb: usize,
}

impl JumpGeometry {
    /// The jumped strand, from `(a, ya)` over the top to `(b, yb)`.
    pub fn s_path(&self) -> Vec<Point> {
        let (a, b, r) = (2 * self.a as i32, 2 * self.b as i32, 2 * self.r as i32);
        vec![
            (a, 2 * self.ya as i32),
            (a, r),
            (b, r),
            (b, 2 * self.yb as i32),
        ]
    }

    /// Its replacement, running half a unit below row 0.
    pub fn u_path(&self) -> Vec<Point> {
        let (a, b) = (2 * self.a as i32, 2 * self.b as i32);
        vec![
            (a, 2 * self.ya as i32),
            (a, -1),
            (b, -1),
            (b, 2 * self.yb as i32),
        ]
    }

    /// Corners of `Q`, counter-clockwise from the bottom left.
    pub fn q_polygon(&self) -> Vec<Point> {
        let (a, b, r) = (2 * self.a as i32, 2 * self.b as i32, 2 * self.r as i32);
        vec![(a, -1), (b, -1), (b, r), (a, r)]
    }

    pub(crate) fn strictly_inside(&self, p: Point) -> bool {
        let (a, b, r) = (2 * self.a as i32, 2 * self.b as i32, 2 * self.r as i32);
        a < p.0 && p.0 < b && -1 < p.1 && p.1 < r
    }

    /// Position along `s` of a point on it.
    pub(crate) fn s_position(&self, p: Point) -> i32 {
        let (a, b, r, ya) = (
            2 * self.a as i32,
            2 * self.b as i32,
            2 * self.r as i32,
            2 * self.ya as i32,
        );
        if p.0 == a && p.1 < r {
            p.1 - ya
        } else if p.1 == r {
            (r - ya) + (p.0 - a)
        } else {
            (r - ya) + (b - a) + (r - p.1)
        }
    }
}

impl JumpSpec {
    pub fn working(&self) -> GridDiagram {
        self.host.transform(self.frame)
    }

    pub fn geometry(&self) -> Result<JumpGeometry> {
        let w = self.working();
        let n = w.n();
        let r = self.row;
        if r >= n || r == 0 {
            return Err(Error::DegenerateGeometry(format!("row {r} cannot jump")));
        }
        let (a, b) = w.rows()[r];
        let (la, ha) = w.col(a);
        let (lb, hb) = w.col(b);
        if ha != r || hb != r {
            return Err(Error::DegenerateGeometry(
                "legs of the jumped edge do not both go down".into(),
            ));
        }
        if (a + 1..b).any(|c| {
            let (lo, hi) = w.col(c);
            lo < r && r < hi
        }) {
            return Err(Error::DegenerateGeometry(
                "jumped edge passes under a vertical".into(),
            ));
        }
        Ok(JumpGeometry {
            n,
            r,
            a,
            b,
            ya: la,
            yb: lb,
        })
    }

    /// The host diagram after the jump.
    pub fn result(&self) -> Result<GridDiagram> {
        let g = self.geometry()?;
        let w = self.working();
        let f = |y: usize| {
            if y == g.r {
                0
            } else if y < g.r {
                y + 1
            } else {
                y
            }
        };
        let cols: Vec<(usize, usize)> = w
            .cols()
            .map(|(lo, hi)| (f(lo).min(f(hi)), f(lo).max(f(hi))))
            .collect();
        Ok(GridDiagram::new(g.n, &cols)?.transform(self.frame.inverse()))
    }

    pub fn to_json(&self) -> Result<Value> {
        let g = self.geometry()?;
        let pts = |v: Vec<Point>| -> Vec<[f64; 2]> {
            v.into_iter()
                .map(|(x, y)| [x as f64 / 2.0 + 1.0, y as f64 / 2.0 + 1.0])
                .collect()
        };
        Ok(json!({
            "host": io::to_json(&self.host),
            "frame": self.frame.name(),
            "row": self.row + 1,
            "edge": [g.a + 1, g.b + 1],
            "strand_role": "over",
            "s": pts(g.s_path()),
            "u": pts(g.u_path()),
            "q": pts(g.q_polygon()),
        }))
    }
}

fn then_rot180(s: Symmetry) -> Symmetry {
    Symmetry {
        transpose: s.transpose,
        flip_x: !s.flip_x,
        flip_y: !s.flip_y,
    }
}

fn axis_frame(axis: Axis) -> Symmetry {
    Symmetry {
        transpose: axis == Axis::Vertical,
        flip_x: false,
        flip_y: false,
    }
}

/// Frame in which a rotation carries the top edge to the bottom.
pub fn rotation_frame(direction: Direction) -> Symmetry {
    match direction {
        Direction::TopToBottom => Symmetry::IDENTITY,
        Direction::BottomToTop => Symmetry::ROT180,
        Direction::RightToLeft => axis_frame(Axis::Vertical),
        Direction::LeftToRight => then_rot180(axis_frame(Axis::Vertical)),
    }
}

/// Jump moves realizing an exterior move or rotation.
///
/// An exterior merge is one jump followed by an interior merge that changes
/// nothing in the drawing. An exterior exchange is two jumps: the longer
/// extreme edge (the top one on ties) first, then the other.
pub fn jump_decomposition(d: &GridDiagram, m: &CromwellMove) -> Result<Vec<JumpSpec>> {
    moves::apply(d, m)?;
    let n = d.n();
    let specs = match *m {
        CromwellMove::Rotation { direction } => {
            vec![JumpSpec {
                host: d.clone(),
                frame: rotation_frame(direction),
                row: n - 1,
            }]
        }
        CromwellMove::ExteriorMerge {
            axis, placement, ..
        } => {
            let base = axis_frame(axis);
            let frame = if placement == End::Low {
                base
            } else {
                then_rot180(base)
            };
            vec![JumpSpec {
                host: d.clone(),
                frame,
                row: n - 1,
            }]
        }
        CromwellMove::ExteriorExchange { axis } => {
            let base = axis_frame(axis);
            let rows = d.transform(base).rows();
            let len = |(l, r): (usize, usize)| r - l;
            let f1 = if len(rows[n - 1]) >= len(rows[0]) {
                base
            } else {
                then_rot180(base)
            };
            let first = JumpSpec {
                host: d.clone(),
                frame: f1,
                row: n - 1,
            };
            let mid = first.result()?;
            vec![
                first,
                JumpSpec {
                    host: mid,
                    frame: then_rot180(f1),
                    row: n - 2,
                },
            ]
        }
        _ => {
            return Err(Error::InapplicableMove(format!(
                "{m} is not an exterior move"
            )))
        }
    };
    for s in &specs {
        s.geometry()?;
    }
    Ok(specs)
}

/// Counts of the graph `D_Q` cut out of the diagram by `Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SigmaBreakdown {
    #[serde(rename = "V")]
    pub v: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "E_i")]
    pub e_i: usize,
    #[serde(rename = "E_ss")]
    pub e_ss: usize,
    #[serde(rename = "E_partial")]
    pub e_partial: usize,
    #[serde(rename = "E_s")]
    pub e_s: usize,
    #[serde(rename = "E_svs")]
    pub e_svs: usize,
    /// Interior vertices joined to the interior of `s` by exactly two edges.
    pub sv2_vertices: usize,
    /// Vertices of `D_Q` on the boundary of `Q`.
    pub boundary_points: usize,
    pub sigma_simple: usize,
    pub sigma_strong: usize,
    pub sigma_no_r1: usize,
    /// `sigma_no_r1` only bounds jumps whose graph has no edge at the ends of `s`.
    pub sigma_no_r1_valid: bool,
}

/// Exact counts of `D_Q` for a jump.
pub fn sigma(j: &JumpSpec) -> Result<SigmaBreakdown> {
    Ok(sigma_of(&QMap::build(j)?))
}

pub(crate) fn sigma_of(map: &QMap) -> SigmaBreakdown {
    let vs = &map.vertices;
    let mut out = SigmaBreakdown {
        v: vs.iter().filter(|v| v.kind == VKind::Interior).count(),
        e: map.d_edges().count(),
        boundary_points: vs
            .iter()
            .filter(|v| !matches!(v.kind, VKind::Interior | VKind::Corner))
            .count(),
        ..Default::default()
    };
    let on_s = |v: usize| matches!(vs[v].kind, VKind::IntS | VKind::EndS);
    let kind = |v: usize| vs[v].kind;
    let mut e_sv: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, e) in map.d_edges() {
        let (x, y) = (e.from, e.to);
        if !on_s(x) && !on_s(y) {
            out.e_i += 1;
        } else if kind(x) == VKind::IntS && kind(y) == VKind::IntS {
            out.e_ss += 1;
        } else if kind(x) == VKind::EndS || kind(y) == VKind::EndS {
            out.e_partial += 1;
        } else if kind(x) == VKind::Interior {
            e_sv.entry(x).or_default().push(k);
        } else if kind(y) == VKind::Interior {
            e_sv.entry(y).or_default().push(k);
        }
    }
    out.e_s = e_sv.values().map(|l| l.len().saturating_sub(2)).sum();
    out.sv2_vertices = e_sv.values().filter(|l| l.len() == 2).count();
    out.e_svs = count_svs(map, &e_sv);
    out.sigma_simple = out.v + out.e;
    out.sigma_strong = out.v + out.e_i + out.e_ss + out.e_partial + out.e_s + out.e_svs;
    out.sigma_no_r1 = out.sigma_strong + out.v;
    out.sigma_no_r1_valid = out.e_partial == 0;
    out
}

fn components(map: &QMap) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..map.vertices.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (_, e) in map.d_edges() {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        parent[a] = b;
    }
    (0..parent.len()).map(|i| find(&mut parent, i)).collect()
}

/// Crossing-number test with half-open vertical edges; `p` and the polygon
/// are at doubled resolution, `p` never lies on the boundary.
fn inside(poly: &[Point], p: Point) -> bool {
    let mut c = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if a.0 == b.0 && a.0 > p.0 && ((a.1 <= p.1 && p.1 < b.1) || (b.1 <= p.1 && p.1 < a.1)) {
            c = !c;
        }
    }
    c
}

fn count_svs(map: &QMap, e_sv: &HashMap<usize, Vec<usize>>) -> usize {
    let g = &map.geom;
    let comp = components(map);
    let mut matched = std::collections::BTreeSet::new();
    for (&v, es) in e_sv {
        if es.len() != 2 {
            continue;
        }
        let ends: Vec<(usize, Vec<Point>)> = es
            .iter()
            .map(|&k| {
                let e = &map.edges[k];
                if e.from == v {
                    (e.to, e.path.clone())
                } else {
                    (e.from, e.path.iter().rev().copied().collect())
                }
            })
            .collect();
        let (ve, vf) = (ends[0].0, ends[1].0);
        if ve == vf {
            continue;
        }
        let (pe, pf) = (
            g.s_position(map.vertices[ve].p),
            g.s_position(map.vertices[vf].p),
        );
        let (lo, hi) = (pe.min(pf), pe.max(pf));
        let blocked = map.vertices.iter().enumerate().any(|(i, vx)| {
            matches!(vx.kind, VKind::IntS | VKind::EndS)
                && comp[i] == comp[v]
                && i != ve
                && i != vf
                && {
                    let p = g.s_position(vx.p);
                    lo < p && p < hi
                }
        });
        if blocked {
            continue;
        }
        // R = e, then t along s from v_e to v_f, then f back to v.
        let mut poly: Vec<Point> = ends[0].1.clone();
        let s = g.s_path();
        let corners: Vec<Point> = s[1..3]
            .iter()
            .copied()
            .filter(|&c| {
                let p = g.s_position(c);
                lo < p && p < hi
            })
            .collect();
        if pe < pf {
            poly.extend(corners.iter().copied());
        } else {
            poly.extend(corners.iter().rev().copied());
        }
        poly.extend(ends[1].1.iter().rev().skip(1).copied());
        let scaled: Vec<Point> = poly.iter().map(|&(x, y)| (2 * x, 2 * y)).collect();
        let vp = map.vertices[v].p;
        let others: Vec<Point> = map
            .d_edges()
            .filter(|(k, _)| !es.contains(k))
            .flat_map(|(_, e)| {
                let mut firsts = Vec::new();
                if e.from == v {
                    firsts.push(e.path[1]);
                }
                if e.to == v {
                    firsts.push(e.path[e.path.len() - 2]);
                }
                firsts
            })
            .collect();
        if others
            .iter()
            .all(|&q| inside(&scaled, (vp.0 + q.0, vp.1 + q.1)))
        {
            matched.insert(comp[v]);
        }
    }
    matched.len()
}

/// Budget check of one exterior move against its closed-form bound.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem3Report {
    pub kind: BoundKind,
    pub n: usize,
    pub jumps: Vec<SigmaBreakdown>,
    pub total: usize,
    pub bound: usize,
    pub slack: i64,
    pub holds: bool,
}

pub fn verify_theorem3(d: &GridDiagram, m: &CromwellMove) -> Result<Theorem3Report> {
    let kind = BoundKind::of_move(m)?;
    let jumps = jump_decomposition(d, m)?
        .iter()
        .map(sigma)
        .collect::<Result<Vec<_>>>()?;
    let total = jumps.iter().map(|s| s.sigma_simple).sum();
    let bound = theorem3_bound(d.n(), kind)?;
    Ok(Theorem3Report {
        kind,
        n: d.n(),
        jumps,
        total,
        bound,
        slack: bound as i64 - total as i64,
        holds: total <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::available_moves;

    #[test]
    fn formula_values() {
        assert_eq!(theorem3_bound(8, BoundKind::ExteriorExchange).unwrap(), 156);
        assert_eq!(theorem3_bound(8, BoundKind::ExteriorMerge).unwrap(), 78);
        assert_eq!(theorem3_bound(8, BoundKind::Rotation).unwrap(), 79);
        assert_eq!(theorem3_bound(2, BoundKind::ExteriorExchange).unwrap(), 0);
        assert_eq!(theorem3_bound(3, BoundKind::Rotation).unwrap(), 5);
        assert!(theorem3_bound(1, BoundKind::Rotation).is_err());
    }

    #[test]
    fn trivial_rotation_has_one_partial_edge() {
        let d = GridDiagram::trivial();
        let m = CromwellMove::Rotation {
            direction: Direction::TopToBottom,
        };
        let specs = jump_decomposition(&d, &m).unwrap();
        assert_eq!(specs.len(), 1);
        let b = sigma(&specs[0]).unwrap();
        assert_eq!((b.v, b.e, b.e_partial, b.boundary_points), (0, 1, 1, 2));
        assert_eq!((b.sigma_simple, b.sigma_strong), (1, 1));
        assert!(!b.sigma_no_r1_valid);
    }

    #[test]
    fn jump_results_agree_with_moves() {
        let d = crate::grid::extremal_diagram(7).unwrap();
        for n in [5, 6] {
            let e = crate::grid::extremal_diagram(n).unwrap();
            for m in available_moves(&e).into_iter().chain(available_moves(&d)) {
                let host = if m.kind() == MoveKind::Rotation {
                    &e
                } else {
                    continue;
                };
                let specs = jump_decomposition(host, &m).unwrap();
                assert_eq!(specs[0].result().unwrap(), moves::apply(host, &m).unwrap());
            }
        }
    }

    #[test]
    fn handshake_on_extremal_rotations() {
        for n in 3..=9 {
            let d = crate::grid::extremal_diagram(n).unwrap();
            for direction in Direction::ALL {
                let m = CromwellMove::Rotation { direction };
                for s in jump_decomposition(&d, &m).unwrap() {
                    let b = sigma(&s).unwrap();
                    assert_eq!(2 * b.e, 4 * b.v + b.boundary_points, "n={n} {direction:?}");
                    assert!(b.sigma_strong <= b.sigma_simple);
                }
                assert!(verify_theorem3(&d, &m).unwrap().holds);
            }
        }
    }
}
