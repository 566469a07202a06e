//! A copy `s'` of the jumping strand, pushed through `Q` one face at a time.
//!
//! The diagram minus `s` is fixed; `s'` is recorded only by the ordered list
//! of edges of the map it passes over. A piece of `s'` between consecutive
//! crossings cuts off, on the side not yet swept, a region of one face. When
//! that region is bounded by the piece and a single stretch of the face
//! boundary, it is a monogon, bigon or triangle, or it can be made into one by
//! pushing `s'` across the next edge. Sweeping stops when every such region
//! only touches `u`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::planar::{Label, Occ, PlanarDiagram};
use crate::qmap::{EKind, Half, Item, MDart, QMap, VKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    R1Create(Label),
    R1Delete(Label),
    R2Create(Label, Label),
    R2Delete(Label, Label),
    R3([Label; 3]),
}

pub(crate) struct Sweep<'a> {
    map: &'a QMap,
    dd: HashMap<(usize, usize), Label>,
    /// Crossings of `s'`, from the near end of `s` to the far end.
    chain: Vec<Label>,
    /// Dart of the crossed edge whose left face `s'` enters.
    delta: HashMap<Label, MDart>,
    /// Crossings of `s'` on each edge, from its start to its end.
    on: Vec<Vec<Label>>,
    /// `s'` leaves `sa` into the face left of this half-edge's outgoing dart.
    h_start: Half,
    /// `s'` reaches `sb` through the face left of the dart arriving along this half-edge.
    h_end: Half,
    next_label: Label,
}

#[derive(Debug)]
struct Arc {
    first: MDart,
    last: MDart,
    /// Darts traversed in full, between consecutive vertices.
    full: Vec<MDart>,
    vertices: Vec<usize>,
    clean: bool,
}

enum Action {
    Flip,
    Op(Op),
}

impl<'a> Sweep<'a> {
    pub(crate) fn new(map: &'a QMap) -> Self {
        let mut keys: Vec<(usize, usize)> = map.dd_sign.keys().copied().collect();
        keys.sort();
        let dd: HashMap<(usize, usize), Label> = keys
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, i as Label + 1))
            .collect();
        let mut s = Sweep {
            map,
            dd,
            chain: Vec::new(),
            delta: HashMap::new(),
            on: vec![Vec::new(); map.edges.len()],
            h_start: map.end_edge(map.sa).unwrap_or_else(|| map.u_half(map.sa)),
            h_end: map.end_edge(map.sb).unwrap_or_else(|| map.u_half(map.sb)),
            next_label: keys.len() as Label + 1,
        };
        for &v in &map.ints {
            let h = map
                .end_edge(v)
                .expect("an edge leaves every point inside s");
            let l = s.fresh();
            let d = h.outgoing();
            if d.forward {
                s.on[d.edge].insert(0, l);
            } else {
                s.on[d.edge].push(l);
            }
            s.delta.insert(l, d);
            s.chain.push(l);
        }
        s
    }

    fn fresh(&mut self) -> Label {
        self.next_label += 1;
        self.next_label - 1
    }

    pub(crate) fn max_label(&self) -> Label {
        self.next_label - 1
    }

    /// Gauss code of the current diagram in the working frame.
    pub(crate) fn code(&self) -> PlanarDiagram {
        let mut comps = Vec::new();
        let mut signs = BTreeMap::new();
        for w in &self.map.walks {
            let mut seq = Vec::new();
            for item in &w.items {
                match *item {
                    Item::Occ { col, row, over } => {
                        let l = self.dd[&(col, row)];
                        signs.insert(l, self.map.dd_sign[&(col, row)]);
                        seq.push(Occ { label: l, over });
                    }
                    Item::Slot(e) => seq.extend(self.on[e].iter().map(|&l| Occ {
                        label: l,
                        over: false,
                    })),
                }
            }
            if w.carries_s {
                for &l in &self.chain {
                    seq.push(Occ {
                        label: l,
                        over: true,
                    });
                    signs.insert(l, if self.delta[&l].forward { -1 } else { 1 });
                }
            }
            comps.push(seq);
        }
        PlanarDiagram::new(comps, signs).expect("sweep states are well formed")
    }

    fn ccw(&self, h: Half, step: isize) -> Half {
        let r = &self.map.rot[self.map.vertex_of(h)];
        let k = r
            .iter()
            .position(|&x| x == h)
            .expect("half-edge in rotation") as isize;
        r[(k + step).rem_euclid(r.len() as isize) as usize]
    }

    /// Position of crossing `l` along dart `d`.
    fn pos(&self, d: MDart, l: Label) -> isize {
        let list = &self.on[d.edge];
        let k = list
            .iter()
            .position(|&x| x == l)
            .expect("crossing on its edge") as isize;
        if d.forward {
            k
        } else {
            list.len() as isize - 1 - k
        }
    }

    fn count_between(&self, d: MDart, lo: isize, hi: isize) -> usize {
        let n = self.on[d.edge].len() as isize;
        (hi.min(n) - (lo + 1).max(0)).max(0) as usize
    }

    /// The stretch of boundary cut off by piece `i` of `s'`.
    fn arc(&self, i: usize) -> Result<Arc> {
        let k = self.chain.len();
        let (first, mut from) = if i == 0 {
            (self.h_start.outgoing(), -1)
        } else {
            let d = self.delta[&self.chain[i - 1]];
            (d, self.pos(d, self.chain[i - 1]))
        };
        let (last, to) = if i == k {
            let d = self.h_end.outgoing().rev();
            (d, self.on[d.edge].len() as isize)
        } else {
            let d = self.delta[&self.chain[i]].rev();
            (d, self.pos(d, self.chain[i]))
        };
        let mut arc = Arc {
            first,
            last,
            full: Vec::new(),
            vertices: Vec::new(),
            clean: true,
        };
        let mut cur = first;
        let limit = self.map.faces[self.map.face_of[&first]].len() + 1;
        loop {
            let len = self.on[cur.edge].len() as isize;
            if cur == last && to > from {
                if self.count_between(cur, from, to) > 0 {
                    arc.clean = false;
                }
                break;
            }
            if self.count_between(cur, from, len) > 0 {
                arc.clean = false;
            }
            arc.vertices.push(self.map.terminus(cur));
            cur = self.map.next[&cur];
            from = -1;
            if cur != last {
                arc.full.push(cur);
            }
            if arc.vertices.len() > limit {
                return Err(Error::SweepObstruction(format!(
                    "piece {i} does not close up"
                )));
            }
        }
        Ok(arc)
    }

    fn kind(&self, v: usize) -> VKind {
        self.map.vertices[v].kind
    }

    fn is_d(&self, d: MDart) -> bool {
        self.map.edges[d.edge].kind == EKind::D
    }

    fn choose(&self) -> Result<Option<(u8, usize, Action, Arc)>> {
        let k = self.chain.len();
        let mut best: Option<(u8, usize, Action, Arc)> = None;
        let mut unclean = 0;
        for i in 0..=k {
            let arc = self.arc(i)?;
            if !arc.clean {
                unclean += 1;
                continue;
            }
            let m = arc.vertices.len();
            let (p_cross, r_cross) = (i > 0, i < k);
            let action = if m == 0 {
                match (p_cross, r_cross) {
                    (true, true) => Some((
                        1,
                        Action::Op(Op::R2Delete(self.chain[i - 1], self.chain[i])),
                    )),
                    (false, true) => Some((1, Action::Op(Op::R1Delete(self.chain[i])))),
                    (true, false) => Some((1, Action::Op(Op::R1Delete(self.chain[i - 1])))),
                    (false, false) => self.is_d(arc.first).then_some((0, Action::Flip)),
                }
            } else if m == 1 && p_cross && r_cross && self.kind(arc.vertices[0]) == VKind::Interior
            {
                let w = self.map.vertices[arc.vertices[0]].p;
                let wl = self.dd[&((w.0 / 2) as usize, (w.1 / 2) as usize)];
                Some((
                    2,
                    Action::Op(Op::R3([self.chain[i - 1], self.chain[i], wl])),
                ))
            } else if !p_cross && self.is_d(arc.first) && self.kind(self.map.terminus(arc.first)).on_u() {
                Some((3, Action::Op(Op::R1Create(0))))
            } else if !r_cross && self.is_d(arc.last) && self.kind(self.map.origin(arc.last)).on_u() {
                Some((3, Action::Op(Op::R1Create(1))))
            } else if p_cross
                && self.kind(arc.vertices[0]) == VKind::Interior
                && !arc.full.is_empty()
            {
                Some((4, Action::Op(Op::R2Create(0, 0))))
            } else if r_cross
                && self.kind(arc.vertices[m - 1]) == VKind::Interior
                && !arc.full.is_empty()
            {
                Some((4, Action::Op(Op::R2Create(arc.full.len() as Label - 1, 0))))
            } else {
                arc.full
                    .iter()
                    .position(|&d| self.is_d(d))
                    .map(|j| (5, Action::Op(Op::R2Create(j as Label, 0))))
                    .or_else(|| {
                        if !p_cross && self.is_d(arc.first) {
                            Some((6, Action::Op(Op::R1Create(0))))
                        } else if !r_cross && self.is_d(arc.last) {
                            Some((6, Action::Op(Op::R1Create(1))))
                        } else {
                            None
                        }
                    })
            };
            if let Some((p, a)) = action {
                if best.as_ref().is_none_or(|b| p < b.0) {
                    best = Some((p, i, a, arc));
                }
            }
        }
        if best.is_none() && unclean > 0 {
            return Err(Error::SweepObstruction(format!(
                "{unclean} pieces of s' are blocked"
            )));
        }
        Ok(best)
    }

    fn remove(&mut self, l: Label) {
        let e = self.delta.remove(&l).expect("known crossing").edge;
        self.on[e].retain(|&x| x != l);
    }

    /// Puts crossing `l` on the dart `d`, next to the vertex `d` leaves.
    fn place_first(&mut self, l: Label, d: MDart) {
        if d.forward {
            self.on[d.edge].insert(0, l);
        } else {
            self.on[d.edge].push(l);
        }
        self.delta.insert(l, d);
    }

    /// Performs one step. `None` once `s'` runs alongside `u`.
    pub(crate) fn step(&mut self) -> Result<Option<Op>> {
        loop {
            let Some((_, i, action, arc)) = self.choose()? else {
                return Ok(None);
            };
            let op = match action {
                Action::Flip => {
                    self.h_start = self.ccw(self.h_start, -1);
                    self.h_end = self.ccw(self.h_end, 1);
                    continue;
                }
                Action::Op(op) => op,
            };
            return Ok(Some(match op {
                Op::R2Delete(p, r) => {
                    self.remove(p);
                    self.remove(r);
                    self.chain.drain(i - 1..=i);
                    op
                }
                Op::R1Delete(x) => {
                    self.remove(x);
                    if i == 0 {
                        self.chain.remove(0);
                        self.h_start = self.ccw(self.h_start, -1);
                    } else {
                        self.chain.pop();
                        self.h_end = self.ccw(self.h_end, 1);
                    }
                    op
                }
                Op::R1Create(at_end) => {
                    let l = self.fresh();
                    if at_end == 0 {
                        let d = self.h_start.outgoing();
                        self.place_first(l, d);
                        self.chain.insert(0, l);
                        self.h_start = self.ccw(self.h_start, -1);
                    } else {
                        let d = self.h_end.outgoing();
                        self.place_first(l, d);
                        self.chain.push(l);
                        self.h_end = self.ccw(self.h_end, 1);
                    }
                    Op::R1Create(l)
                }
                Op::R3([p, r, w]) => {
                    let hp = arc.first.in_half();
                    let hr = arc.last.out_half();
                    let (op_, or_) = (self.map.opposite(hp), self.map.opposite(hr));
                    self.remove(p);
                    self.remove(r);
                    self.place_first(r, or_.outgoing());
                    self.place_first(p, op_.outgoing());
                    self.chain[i - 1] = r;
                    self.chain[i] = p;
                    Op::R3([p, r, w])
                }
                Op::R2Create(j, _) => {
                    let g = arc.full[j as usize];
                    let (y1, y2) = (self.fresh(), self.fresh());
                    self.on[g.edge] = if g.forward {
                        vec![y1, y2]
                    } else {
                        vec![y2, y1]
                    };
                    self.delta.insert(y1, g.rev());
                    self.delta.insert(y2, g);
                    self.chain.splice(i..i, [y1, y2]);
                    Op::R2Create(y1, y2)
                }
            }));
        }
    }
}
