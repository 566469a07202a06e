//! The plane graph cut out of a diagram by the region `Q` of a jump.
//!
//! Vertices are the crossings inside `Q` and the points where the diagram
//! meets the boundary of `Q`; edges are the pieces of the diagram inside `Q`
//! together with the arcs into which those points cut `s` and `u`. The map
//! also records, for every component of the diagram with `s` removed, the
//! sequence of crossings and edge pieces met along it, which is what is
//! needed to write down Gauss codes once a moving copy of `s` is laid over it.

use std::collections::HashMap;

use crate::bounds::{JumpGeometry, JumpSpec};
use crate::error::Result;
use crate::geometry::{grid_corners, Point};
use crate::grid::GridDiagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum VKind {
    Interior,
    /// On `s`, away from its ends.
    IntS,
    /// An end of `s` where the diagram continues into `Q`.
    EndS,
    /// An end of `s` where the diagram leaves `Q`.
    Corner,
    /// On `u`, away from its ends.
    IntU,
}

impl VKind {
    pub(crate) fn on_u(self) -> bool {
        matches!(self, VKind::IntU | VKind::EndS | VKind::Corner)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EKind {
    D,
    SArc,
    UArc,
}

#[derive(Clone, Debug)]
pub(crate) struct MVertex {
    pub kind: VKind,
    pub p: Point,
}

#[derive(Clone, Debug)]
pub(crate) struct MEdge {
    pub kind: EKind,
    pub from: usize,
    pub to: usize,
    /// Unit-step lattice path from `from` to `to`.
    pub path: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Half {
    pub edge: usize,
    pub at_start: bool,
}

/// An edge with a direction; its left face is the face it bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct MDart {
    pub edge: usize,
    pub forward: bool,
}

impl MDart {
    pub(crate) fn rev(self) -> MDart {
        MDart {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    /// The half-edge this dart leaves from.
    pub(crate) fn out_half(self) -> Half {
        Half {
            edge: self.edge,
            at_start: self.forward,
        }
    }

    /// The half-edge this dart arrives through.
    pub(crate) fn in_half(self) -> Half {
        Half {
            edge: self.edge,
            at_start: !self.forward,
        }
    }
}

impl Half {
    pub(crate) fn outgoing(self) -> MDart {
        MDart {
            edge: self.edge,
            forward: self.at_start,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Item {
    /// A crossing of two grid edges, identified by (column, row).
    Occ { col: usize, row: usize, over: bool },
    /// A piece of the diagram inside `Q`, traversed forwards.
    Slot(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Walk {
    pub items: Vec<Item>,
    /// The component containing `s`, written from the far end of `s` to its near end.
    pub carries_s: bool,
}

pub(crate) struct QMap {
    pub geom: JumpGeometry,
    pub vertices: Vec<MVertex>,
    pub edges: Vec<MEdge>,
    /// Half-edges around each vertex, counter-clockwise.
    pub rot: Vec<Vec<Half>>,
    pub faces: Vec<Vec<MDart>>,
    pub face_of: HashMap<MDart, usize>,
    pub next: HashMap<MDart, MDart>,
    pub sa: usize,
    pub sb: usize,
    /// Vertices on the interior of `s`, in order from `sa` to `sb`.
    pub ints: Vec<usize>,
    pub walks: Vec<Walk>,
    /// Signs of the grid crossings, for the orientation used by `walks`.
    pub dd_sign: HashMap<(usize, usize), i8>,
}

fn dir_index(d: Point) -> u8 {
    match d {
        (1, 0) => 0,
        (0, 1) => 1,
        (-1, 0) => 2,
        _ => 3,
    }
}

fn unit_steps(pts: &[Point], closed: bool) -> Vec<Point> {
    let mut steps = vec![pts[0]];
    let m = pts.len();
    let last = if closed { m } else { m - 1 };
    for i in 0..last {
        let (p, q) = (pts[i], pts[(i + 1) % m]);
        let d = ((q.0 - p.0).signum(), (q.1 - p.1).signum());
        let mut c = p;
        while c != q {
            c = (c.0 + d.0, c.1 + d.1);
            steps.push(c);
        }
    }
    steps
}

impl QMap {
    pub(crate) fn build(spec: &JumpSpec) -> Result<QMap> {
        let g = spec.geometry()?;
        let w = spec.working();
        Ok(Self::from_grid(&w, g))
    }

    pub(crate) fn from_grid(w: &GridDiagram, g: JumpGeometry) -> QMap {
        let (ax, bx, ry) = (2 * g.a as i32, 2 * g.b as i32, 2 * g.r as i32);
        let rows = w.rows();

        let mut vmap: HashMap<Point, VKind> = HashMap::new();
        for x in w.crossings() {
            if g.a < x.col && x.col < g.b && x.row < g.r {
                vmap.insert((2 * x.col as i32, 2 * x.row as i32), VKind::Interior);
            }
        }
        for (leg, y_end) in [(g.a, g.ya), (g.b, g.yb)] {
            for (k, &(l, r)) in rows.iter().enumerate() {
                if l < leg && leg < r && k < g.r && k != y_end {
                    let kind = if k > y_end { VKind::IntS } else { VKind::IntU };
                    vmap.insert((2 * leg as i32, 2 * k as i32), kind);
                }
            }
        }
        let pa = (ax, 2 * g.ya as i32);
        let pb = (bx, 2 * g.yb as i32);
        vmap.insert(
            pa,
            if rows[g.ya].1 > g.a {
                VKind::EndS
            } else {
                VKind::Corner
            },
        );
        vmap.insert(
            pb,
            if rows[g.yb].0 < g.b {
                VKind::EndS
            } else {
                VKind::Corner
            },
        );
        let mut pts: Vec<(Point, VKind)> = vmap.into_iter().collect();
        pts.sort_by_key(|e| e.0);
        let vertices: Vec<MVertex> = pts.iter().map(|&(p, kind)| MVertex { kind, p }).collect();
        let index: HashMap<Point, usize> = pts.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
        let is_dd = |p: Point| {
            p.0 % 2 == 0 && p.1 % 2 == 0 && {
                let (c, j) = ((p.0 / 2) as usize, (p.1 / 2) as usize);
                c != g.a && c != g.b && j != g.r && {
                    let (lo, hi) = w.col(c);
                    let (l, r) = rows[j];
                    lo < j && j < hi && l < c && c < r
                }
            }
        };

        // Traverse with s running from a to b.
        let s_top = [(ax, ry), (bx, ry)];
        let mut edges: Vec<MEdge> = Vec::new();
        let mut walks = Vec::new();
        let mut dd_dirs: HashMap<(usize, usize), [Point; 2]> = HashMap::new();
        for mut corners in grid_corners(w) {
            let k = corners.len();
            let find =
                |c: &[Point]| (0..k).find(|&i| c[i] == s_top[0] && c[(i + 1) % k] == s_top[1]);
            let mut start = find(&corners);
            if start.is_none()
                && (0..k).any(|i| corners[i] == s_top[1] && corners[(i + 1) % k] == s_top[0])
            {
                corners.reverse();
                start = find(&corners);
            }
            let (steps, closed) = match start {
                Some(i) => {
                    let seq: Vec<Point> = (0..k - 2).map(|t| corners[(i + 2 + t) % k]).collect();
                    (unit_steps(&seq, false), false)
                }
                None => (unit_steps(&corners, true), true),
            };
            let m = if closed { steps.len() - 1 } else { steps.len() };
            let at = |i: usize| steps[i % m.max(1)];
            let events: Vec<usize> = (0..m).filter(|&i| index.contains_key(&steps[i])).collect();
            // Edge piece starting at each event index, when it runs inside Q.
            let mut slot_at: HashMap<usize, usize> = HashMap::new();
            for (t, &i) in events.iter().enumerate() {
                let j = if t + 1 < events.len() {
                    events[t + 1]
                } else if closed {
                    events[0] + m
                } else {
                    continue;
                };
                if !g.strictly_inside(at(i + 1)) {
                    continue;
                }
                let path: Vec<Point> = (i..=j).map(at).collect();
                slot_at.insert(i, edges.len());
                edges.push(MEdge {
                    kind: EKind::D,
                    from: index[&at(i)],
                    to: index[&at(j)],
                    path,
                });
            }
            let mut items = Vec::new();
            for i in 0..m {
                let p = steps[i];
                if is_dd(p) {
                    let d = if closed || i + 1 < steps.len() {
                        let q = at(i + 1);
                        (q.0 - p.0, q.1 - p.1)
                    } else {
                        let q = steps[i - 1];
                        (p.0 - q.0, p.1 - q.1)
                    };
                    let over = d.0 == 0;
                    let key = ((p.0 / 2) as usize, (p.1 / 2) as usize);
                    dd_dirs.entry(key).or_insert([(0, 0); 2])[if over { 0 } else { 1 }] = d;
                    items.push(Item::Occ {
                        col: key.0,
                        row: key.1,
                        over,
                    });
                }
                if let Some(&e) = slot_at.get(&i) {
                    items.push(Item::Slot(e));
                }
            }
            walks.push(Walk {
                items,
                carries_s: !closed,
            });
        }
        let dd_sign = dd_dirs
            .into_iter()
            .map(|(k, [o, u])| (k, (o.0 * u.1 - o.1 * u.0).signum() as i8))
            .collect();

        // Boundary arcs.
        let sa = index[&pa];
        let sb = index[&pb];
        let s_steps = unit_steps(&g.s_path(), false);
        let u_steps = unit_steps(&g.u_path(), false);
        let mut ints = Vec::new();
        for (steps, kind) in [(&s_steps, EKind::SArc), (&u_steps, EKind::UArc)] {
            let stops: Vec<usize> = (0..steps.len())
                .filter(|&i| {
                    index.get(&steps[i]).is_some_and(|&v| {
                        v == sa
                            || v == sb
                            || (kind == EKind::SArc && vertices[v].kind == VKind::IntS)
                            || (kind == EKind::UArc && vertices[v].kind == VKind::IntU)
                    })
                })
                .collect();
            for pair in stops.windows(2) {
                let (i, j) = (pair[0], pair[1]);
                let (from, to) = (index[&steps[i]], index[&steps[j]]);
                if kind == EKind::SArc && to != sb {
                    ints.push(to);
                }
                edges.push(MEdge {
                    kind,
                    from,
                    to,
                    path: steps[i..=j].to_vec(),
                });
            }
        }

        let mut rot: Vec<Vec<Half>> = vec![Vec::new(); vertices.len()];
        for (e, me) in edges.iter().enumerate() {
            rot[me.from].push(Half {
                edge: e,
                at_start: true,
            });
            rot[me.to].push(Half {
                edge: e,
                at_start: false,
            });
        }
        let dir_of = |h: &Half| {
            let p = &edges[h.edge].path;
            let (a, b) = if h.at_start {
                (p[0], p[1])
            } else {
                (p[p.len() - 1], p[p.len() - 2])
            };
            dir_index((b.0 - a.0, b.1 - a.1))
        };
        for r in rot.iter_mut() {
            r.sort_by_key(&dir_of);
        }
        let vertex_of = |h: Half| {
            if h.at_start {
                edges[h.edge].from
            } else {
                edges[h.edge].to
            }
        };
        let mut next = HashMap::new();
        for (e, _) in edges.iter().enumerate() {
            for forward in [true, false] {
                let d = MDart { edge: e, forward };
                let h = d.in_half();
                let r = &rot[vertex_of(h)];
                let k = r
                    .iter()
                    .position(|&x| x == h)
                    .expect("half-edge in rotation");
                let out = r[(k + r.len() - 1) % r.len()];
                next.insert(d, out.outgoing());
            }
        }
        let mut faces = Vec::new();
        let mut face_of = HashMap::new();
        for e in 0..edges.len() {
            for forward in [true, false] {
                let start = MDart { edge: e, forward };
                if face_of.contains_key(&start) {
                    continue;
                }
                let id = faces.len();
                let mut f = Vec::new();
                let mut d = start;
                loop {
                    face_of.insert(d, id);
                    f.push(d);
                    d = next[&d];
                    if d == start {
                        break;
                    }
                }
                faces.push(f);
            }
        }
        QMap {
            geom: g,
            vertices,
            edges,
            rot,
            faces,
            face_of,
            next,
            sa,
            sb,
            ints,
            walks,
            dd_sign,
        }
    }

    pub(crate) fn origin(&self, d: MDart) -> usize {
        let e = &self.edges[d.edge];
        if d.forward {
            e.from
        } else {
            e.to
        }
    }

    pub(crate) fn terminus(&self, d: MDart) -> usize {
        self.origin(d.rev())
    }

    pub(crate) fn vertex_of(&self, h: Half) -> usize {
        self.origin(h.outgoing())
    }

    pub(crate) fn opposite(&self, h: Half) -> Half {
        let r = &self.rot[self.vertex_of(h)];
        let k = r
            .iter()
            .position(|&x| x == h)
            .expect("half-edge in rotation");
        r[(k + 2) % r.len()]
    }

    /// The half-edge of an end of `s` along which the diagram enters `Q`.
    pub(crate) fn end_edge(&self, v: usize) -> Option<Half> {
        self.rot[v]
            .iter()
            .copied()
            .find(|h| self.edges[h.edge].kind == EKind::D)
    }

    pub(crate) fn u_half(&self, v: usize) -> Half {
        self.rot[v]
            .iter()
            .copied()
            .find(|h| self.edges[h.edge].kind == EKind::UArc)
            .expect("u arc at an end of s")
    }

    pub(crate) fn d_edges(&self) -> impl Iterator<Item = (usize, &MEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind == EKind::D)
    }
}
