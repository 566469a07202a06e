//! Planar link diagrams as signed Gauss codes.
//!
//! Each component is a cyclic sequence of crossing occurrences; every crossing
//! label occurs exactly twice (once over, once under) and carries a sign. The
//! sign together with the over/under data fixes the cyclic order of the four
//! half-edges at the crossing, which gives the rotation system and the faces.
//!
//! Sign convention: with `o` the direction of the over strand and `u` that of
//! the under strand, the sign is that of the cross product `o x u`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Label = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occ {
    pub label: Label,
    pub over: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlanarDiagram {
    comps: Vec<Vec<Occ>>,
    signs: BTreeMap<Label, i8>,
}

/// Edge `(comp, k)` runs from occurrence `k` to occurrence `k + 1` (cyclically).
type EdgeId = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct HalfEdge {
    edge: EdgeId,
    head: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    edge: EdgeId,
    forward: bool,
}

impl Dart {
    fn arrival(self) -> HalfEdge {
        HalfEdge {
            edge: self.edge,
            head: self.forward,
        }
    }
}

/// Faces of the diagram with, for every dart, the vertex it arrives at.
pub struct Faces {
    pub faces: Vec<Vec<Dart>>,
    arrive: HashMap<Dart, Label>,
}

impl Faces {
    pub fn vertices(&self, f: usize) -> Vec<Label> {
        self.faces[f].iter().map(|d| self.arrive[d]).collect()
    }
}

impl PlanarDiagram {
    /// Builds a diagram from occurrence sequences and signs, checking that every
    /// label occurs once over and once under and has a sign of +-1.
    pub fn new(comps: Vec<Vec<Occ>>, signs: BTreeMap<Label, i8>) -> Result<Self> {
        let mut seen: HashMap<Label, (u8, u8)> = HashMap::new();
        for o in comps.iter().flatten() {
            let e = seen.entry(o.label).or_default();
            if o.over {
                e.0 += 1
            } else {
                e.1 += 1
            }
        }
        for (l, &(ov, un)) in &seen {
            if ov != 1 || un != 1 {
                return Err(Error::Parse(format!(
                    "crossing {l} occurs {ov} over / {un} under"
                )));
            }
            match signs.get(l) {
                Some(1) | Some(-1) => {}
                _ => return Err(Error::Parse(format!("crossing {l} has no sign"))),
            }
        }
        if signs.len() != seen.len() {
            return Err(Error::Parse("signs for absent crossings".into()));
        }
        Ok(PlanarDiagram { comps, signs })
    }

    /// A single crossing-free circle.
    pub fn unknot() -> Self {
        PlanarDiagram {
            comps: vec![vec![]],
            signs: BTreeMap::new(),
        }
    }

    pub fn components(&self) -> &[Vec<Occ>] {
        &self.comps
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn sign(&self, l: Label) -> Option<i8> {
        self.signs.get(&l).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.signs.keys().copied()
    }

    pub fn max_label(&self) -> Label {
        self.signs.keys().next_back().copied().unwrap_or(0)
    }

    fn positions(&self) -> HashMap<Occ, (usize, usize)> {
        let mut m = HashMap::new();
        for (c, comp) in self.comps.iter().enumerate() {
            for (k, o) in comp.iter().enumerate() {
                m.insert(*o, (c, k));
            }
        }
        m
    }

    fn edge_before(&self, (c, k): (usize, usize)) -> EdgeId {
        let len = self.comps[c].len();
        (c, (k + len - 1) % len)
    }

    fn occ_at(&self, (c, k): (usize, usize)) -> Occ {
        self.comps[c][k % self.comps[c].len()]
    }

    /// Counter-clockwise half-edges around crossing `l`.
    fn rotation(&self, pos: &HashMap<Occ, (usize, usize)>, l: Label) -> [HalfEdge; 4] {
        let po = pos[&Occ {
            label: l,
            over: true,
        }];
        let pu = pos[&Occ {
            label: l,
            over: false,
        }];
        let o_out = HalfEdge {
            edge: po,
            head: false,
        };
        let o_in = HalfEdge {
            edge: self.edge_before(po),
            head: true,
        };
        let u_out = HalfEdge {
            edge: pu,
            head: false,
        };
        let u_in = HalfEdge {
            edge: self.edge_before(pu),
            head: true,
        };
        if self.signs[&l] > 0 {
            [o_out, u_out, o_in, u_in]
        } else {
            [o_out, u_in, o_in, u_out]
        }
    }

    fn vertex_of(&self, h: HalfEdge) -> Label {
        let (c, k) = h.edge;
        let len = self.comps[c].len();
        if h.head {
            self.comps[c][(k + 1) % len].label
        } else {
            self.comps[c][k].label
        }
    }

    pub fn faces(&self) -> Faces {
        let pos = self.positions();
        // Clockwise successor of each half-edge.
        let mut cw: HashMap<HalfEdge, HalfEdge> = HashMap::new();
        for &l in self.signs.keys() {
            let r = self.rotation(&pos, l);
            for i in 0..4 {
                cw.insert(r[i], r[(i + 3) % 4]);
            }
        }
        let mut faces = Vec::new();
        let mut face_of = HashMap::new();
        let mut arrive = HashMap::new();
        for (c, comp) in self.comps.iter().enumerate() {
            for k in 0..comp.len() {
                for forward in [true, false] {
                    let start = Dart {
                        edge: (c, k),
                        forward,
                    };
                    if face_of.contains_key(&start) {
                        continue;
                    }
                    let id = faces.len();
                    let mut face = Vec::new();
                    let mut d = start;
                    loop {
                        face_of.insert(d, id);
                        let h = d.arrival();
                        arrive.insert(d, self.vertex_of(h));
                        face.push(d);
                        let out = cw[&h];
                        d = Dart {
                            edge: out.edge,
                            forward: !out.head,
                        };
                        if d == start {
                            break;
                        }
                    }
                    faces.push(face);
                }
            }
        }
        Faces { faces, arrive }
    }

    /// Groups of components joined through shared crossings.
    fn pieces(&self) -> Vec<Vec<usize>> {
        let n = self.comps.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut first: HashMap<Label, usize> = HashMap::new();
        for (c, comp) in self.comps.iter().enumerate() {
            for o in comp {
                if let Some(&d) = first.get(&o.label) {
                    let (a, b) = (find(&mut parent, c), find(&mut parent, d));
                    parent[a] = b;
                } else {
                    first.insert(o.label, c);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..n {
            let r = find(&mut parent, c);
            groups.entry(r).or_default().push(c);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.pieces().len() <= 1
    }

    /// Euler check: each piece with `v > 0` crossings must have `v + 2` faces.
    pub fn is_planar(&self) -> bool {
        let faces = self.faces();
        let expected: usize = self
            .pieces()
            .iter()
            .map(|p| p.iter().map(|&c| self.comps[c].len()).sum::<usize>() / 2)
            .filter(|&v| v > 0)
            .map(|v| v + 2)
            .sum();
        faces.faces.len() == expected
    }

    fn edge_between(&self, a: Occ, b: Occ, pos: &HashMap<Occ, (usize, usize)>) -> Option<EdgeId> {
        let (ca, ka) = pos[&a];
        let (cb, kb) = pos[&b];
        if ca != cb {
            return None;
        }
        let len = self.comps[ca].len();
        if (ka + 1) % len == kb {
            Some((ca, ka))
        } else if (kb + 1) % len == ka {
            Some((ca, kb))
        } else {
            None
        }
    }

    /// Whether crossings `x` and `y` bound a removable bigon face: the over
    /// occurrences and the under occurrences are adjacent and the two
    /// connecting edges form a face.
    fn bigon_between(&self, x: Label, y: Label) -> bool {
        if x == y {
            return false;
        }
        let pos = self.positions();
        let o = |l, over| Occ { label: l, over };
        let (Some(e1), Some(e2)) = (
            self.edge_between(o(x, true), o(y, true), &pos),
            self.edge_between(o(x, false), o(y, false), &pos),
        ) else {
            return false;
        };
        let faces = self.faces();
        faces.faces.iter().any(|f| {
            f.len() == 2 && {
                let es: HashSet<EdgeId> = f.iter().map(|d| d.edge).collect();
                es.len() == 2 && es.contains(&e1) && es.contains(&e2)
            }
        })
    }

    fn monogon_at(&self, x: Label) -> bool {
        let faces = self.faces();
        faces
            .faces
            .iter()
            .enumerate()
            .any(|(i, f)| f.len() == 1 && faces.vertices(i) == [x])
    }

    /// Edges of a triangular face on exactly the vertices `xs`.
    fn triangles(&self, xs: [Label; 3]) -> Vec<Vec<EdgeId>> {
        let set: HashSet<Label> = xs.into_iter().collect();
        if set.len() != 3 {
            return Vec::new();
        }
        let faces = self.faces();
        (0..faces.faces.len())
            .filter(|&i| faces.faces[i].len() == 3)
            .filter(|&i| faces.vertices(i).into_iter().collect::<HashSet<_>>() == set)
            .map(|i| faces.faces[i].iter().map(|d| d.edge).collect())
            .collect()
    }

    fn triangle(&self, xs: [Label; 3]) -> Option<Vec<EdgeId>> {
        self.triangles(xs).into_iter().next()
    }

    /// Start occurrence of the edge joining two over occurrences of a triangle.
    fn top_of(&self, edges: &[EdgeId]) -> Option<Occ> {
        edges.iter().find_map(|&(c, k)| {
            let a = self.occ_at((c, k));
            (a.over && self.occ_at((c, k + 1)).over).then_some(a)
        })
    }

    /// Top-strand start occurrences of every triangular face on `labels`.
    /// More than one entry means an R3 there needs its `top` field.
    pub fn r3_tops(&self, labels: [Label; 3]) -> Vec<Occ> {
        self.triangles(labels)
            .iter()
            .filter_map(|t| self.top_of(t))
            .collect()
    }

    fn insert_pos(&self, anchor: Anchor) -> std::result::Result<(usize, usize), String> {
        match anchor {
            Anchor::Start(c) if c < self.comps.len() => Ok((c, 0)),
            Anchor::Start(c) => Err(format!("no component {c}")),
            Anchor::After(o) => {
                let p = self.positions();
                let &(c, k) = p.get(&o).ok_or_else(|| format!("no occurrence {o:?}"))?;
                Ok((c, k + 1))
            }
        }
    }

    /// Applies one Reidemeister move after checking it is legal at its site.
    pub fn apply(&self, mv: &ReidemeisterMove) -> std::result::Result<PlanarDiagram, String> {
        match *mv {
            ReidemeisterMove::R1Delete { label } => {
                if !self.signs.contains_key(&label) {
                    return Err(format!("no crossing {label}"));
                }
                if !self.monogon_at(label) {
                    return Err(format!("crossing {label} does not bound a monogon"));
                }
                Ok(self.without(&[label]))
            }
            ReidemeisterMove::R2Delete { first, second } => {
                if !self.signs.contains_key(&first) || !self.signs.contains_key(&second) {
                    return Err("unknown crossing".into());
                }
                if self.signs[&first] == self.signs[&second] {
                    return Err(format!("crossings {first},{second} have equal signs"));
                }
                if !self.bigon_between(first, second) {
                    return Err(format!("crossings {first},{second} do not bound a bigon"));
                }
                Ok(self.without(&[first, second]))
            }
            ReidemeisterMove::R3 { labels, top } => {
                let mut found = self.triangles(labels);
                if let Some(t) = top {
                    found.retain(|e| self.top_of(e) == Some(t));
                }
                if found.len() > 1 {
                    return Err(format!("{labels:?} names several triangular faces"));
                }
                let edges = found
                    .pop()
                    .ok_or_else(|| format!("{labels:?} is not a triangular face"))?;
                let mut roles = Vec::new();
                for &(c, k) in &edges {
                    let a = self.occ_at((c, k));
                    let b = self.occ_at((c, k + 1));
                    roles.push(a.over as u8 + b.over as u8);
                }
                roles.sort();
                if roles != [0, 1, 2] {
                    return Err(format!(
                        "{labels:?}: strands are not stacked bottom/middle/top"
                    ));
                }
                let mut next = self.clone();
                for &(c, k) in &edges {
                    let len = next.comps[c].len();
                    next.comps[c].swap(k, (k + 1) % len);
                }
                if !next.is_planar() || next.triangle(labels).is_none() {
                    return Err(format!("{labels:?}: result is not planar"));
                }
                Ok(next)
            }
            ReidemeisterMove::R1Create {
                label,
                sign,
                over_first,
                anchor,
            } => {
                if self.signs.contains_key(&label) {
                    return Err(format!("label {label} already used"));
                }
                let (c, k) = self.insert_pos(anchor)?;
                let mut next = self.clone();
                let pair = [
                    Occ {
                        label,
                        over: over_first,
                    },
                    Occ {
                        label,
                        over: !over_first,
                    },
                ];
                next.comps[c].splice(k..k, pair);
                next.signs.insert(label, sign);
                if !next.is_planar() || !next.monogon_at(label) {
                    return Err(format!("kink {label} is not a monogon"));
                }
                Ok(next)
            }
            ReidemeisterMove::R2Create {
                first,
                second,
                sign_first,
                over_anchor,
                under_anchor,
                under_reversed,
            } => {
                if first == second
                    || self.signs.contains_key(&first)
                    || self.signs.contains_key(&second)
                {
                    return Err("labels already used".into());
                }
                let over = [
                    Occ {
                        label: first,
                        over: true,
                    },
                    Occ {
                        label: second,
                        over: true,
                    },
                ];
                let mut under = [
                    Occ {
                        label: first,
                        over: false,
                    },
                    Occ {
                        label: second,
                        over: false,
                    },
                ];
                if under_reversed {
                    under.reverse();
                }
                // An anchor may name an occurrence of the other new pair, which
                // then has to be inserted first.
                let refers_new = |a: Anchor| matches!(a, Anchor::After(o) if o.label == first || o.label == second);
                let mut steps = [(over_anchor, over), (under_anchor, under)];
                if refers_new(over_anchor) {
                    steps.swap(0, 1);
                }
                if refers_new(steps[0].0) {
                    return Err("anchors refer to each other".into());
                }
                let mut next = self.clone();
                for (anchor, occs) in steps {
                    let (c, k) = next.insert_pos(anchor)?;
                    next.comps[c].splice(k..k, occs);
                }
                next.signs.insert(first, sign_first);
                next.signs.insert(second, -sign_first);
                if !next.is_planar() || !next.bigon_between(first, second) {
                    return Err(format!(
                        "{first},{second}: created region is not a bigon face"
                    ));
                }
                Ok(next)
            }
        }
    }

    /// Drops every occurrence of the given crossings, without any check.
    pub fn without_labels(&self, labels: &[Label]) -> PlanarDiagram {
        self.without(labels)
    }

    fn without(&self, labels: &[Label]) -> PlanarDiagram {
        let mut next = self.clone();
        for c in next.comps.iter_mut() {
            c.retain(|o| !labels.contains(&o.label));
        }
        for l in labels {
            next.signs.remove(l);
        }
        next
    }

    /// Same labelled diagram, allowing each component to start anywhere.
    pub fn cyclic_eq(&self, other: &PlanarDiagram) -> bool {
        if self.signs != other.signs || self.comps.len() != other.comps.len() {
            return false;
        }
        let mut used = vec![false; other.comps.len()];
        'outer: for a in &self.comps {
            for (j, b) in other.comps.iter().enumerate() {
                if !used[j] && rotation_of(a, b) {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Reverses the orientation of every component. Signs are unchanged.
    pub fn reversed(&self) -> PlanarDiagram {
        let mut next = self.clone();
        for c in next.comps.iter_mut() {
            c.reverse();
        }
        next
    }

    /// Switches every crossing while reflecting the plane: over and under are
    /// exchanged and signs kept.
    pub fn swap_over_under(&self) -> PlanarDiagram {
        let mut next = self.clone();
        for o in next.comps.iter_mut().flatten() {
            o.over = !o.over;
        }
        next
    }

    /// Planar mirror image: signs negated.
    pub fn reflected(&self) -> PlanarDiagram {
        let mut next = self.clone();
        for s in next.signs.values_mut() {
            *s = -*s;
        }
        next
    }

    pub fn relabel(&self, map: &HashMap<Label, Label>) -> PlanarDiagram {
        let f = |l: Label| *map.get(&l).unwrap_or(&l);
        PlanarDiagram {
            comps: self
                .comps
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|o| Occ {
                            label: f(o.label),
                            over: o.over,
                        })
                        .collect()
                })
                .collect(),
            signs: self.signs.iter().map(|(&l, &s)| (f(l), s)).collect(),
        }
    }

    /// For knot diagrams: a relabelling `other -> self` (with orientation
    /// reversal if needed) making the two codes cyclically equal.
    pub fn find_isomorphism(&self, other: &PlanarDiagram) -> Option<(bool, HashMap<Label, Label>)> {
        if self.comps.len() != 1 || other.comps.len() != 1 {
            return None;
        }
        let a = &self.comps[0];
        let len = a.len();
        if other.comps[0].len() != len {
            return None;
        }
        if len == 0 {
            return Some((false, HashMap::new()));
        }
        for reversed in [false, true] {
            let ob = if reversed {
                other.reversed()
            } else {
                other.clone()
            };
            let b = &ob.comps[0];
            'start: for s in 0..len {
                let mut map: HashMap<Label, Label> = HashMap::new();
                let mut back: HashMap<Label, Label> = HashMap::new();
                for i in 0..len {
                    let (x, y) = (b[(s + i) % len], a[i]);
                    if x.over != y.over || ob.signs[&x.label] != self.signs[&y.label] {
                        continue 'start;
                    }
                    if *map.entry(x.label).or_insert(y.label) != y.label
                        || *back.entry(y.label).or_insert(x.label) != x.label
                    {
                        continue 'start;
                    }
                }
                return Some((reversed, map));
            }
        }
        None
    }

    /// Canonical signed Gauss code of a knot diagram: minimum over base point
    /// and orientation, with labels renumbered by first appearance.
    pub fn gauss_code(&self) -> Result<GaussCode> {
        if self.comps.len() != 1 {
            return Err(Error::NotAKnot(self.comps.len()));
        }
        let seq = &self.comps[0];
        let len = seq.len();
        let mut best: Option<Vec<(u32, bool, i8)>> = None;
        for reversed in [false, true] {
            for s in 0..len.max(1) {
                if len == 0 {
                    break;
                }
                let mut ren: HashMap<Label, u32> = HashMap::new();
                let mut cand = Vec::with_capacity(len);
                for i in 0..len {
                    let o = if reversed {
                        seq[(s + len - i) % len]
                    } else {
                        seq[(s + i) % len]
                    };
                    let next = ren.len() as u32 + 1;
                    let id = *ren.entry(o.label).or_insert(next);
                    // Over sorts before under.
                    cand.push((id, !o.over, self.signs[&o.label]));
                }
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        Ok(GaussCode(
            best.unwrap_or_default()
                .into_iter()
                .map(|(id, under, sign)| (id, !under, sign))
                .collect(),
        ))
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Vec<String>> = self
            .comps
            .iter()
            .map(|c| {
                c.iter()
                    .map(|o| format!("{}{}", if o.over { 'O' } else { 'U' }, o.label))
                    .collect()
            })
            .collect();
        let signs: serde_json::Map<String, Value> = self
            .signs
            .iter()
            .map(|(l, s)| (l.to_string(), json!(s)))
            .collect();
        json!({ "components": comps, "signs": signs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("planar JSON: {m}"));
        let comps = v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("components"))?
            .iter()
            .map(|c| {
                c.as_array()
                    .ok_or_else(|| bad("component"))?
                    .iter()
                    .map(|t| {
                        let t = t.as_str().ok_or_else(|| bad("occurrence"))?;
                        let over = match t.chars().next() {
                            Some('O') => true,
                            Some('U') => false,
                            _ => return Err(bad("occurrence prefix")),
                        };
                        let label = t[1..].parse().map_err(|_| bad("occurrence label"))?;
                        Ok(Occ { label, over })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut signs = BTreeMap::new();
        for (k, s) in v
            .get("signs")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("signs"))?
        {
            let l: Label = k.parse().map_err(|_| bad("sign label"))?;
            signs.insert(l, s.as_i64().ok_or_else(|| bad("sign"))? as i8);
        }
        PlanarDiagram::new(comps, signs)
    }
}

fn rotation_of(a: &[Occ], b: &[Occ]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[i] == b[(s + i) % a.len()]))
}

/// Canonical signed Gauss code: `(label, over, sign)` per occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussCode(pub Vec<(u32, bool, i8)>);

impl GaussCode {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn crossing_count(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(l, over, s)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(
                f,
                "{}{}{}",
                if over { 'O' } else { 'U' },
                l,
                if s > 0 { '+' } else { '-' }
            )?;
        }
        Ok(())
    }
}

/// Where new occurrences are inserted: right after an existing occurrence, or
/// at the start of a component that has none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Anchor {
    After(Occ),
    Start(usize),
}

impl Anchor {
    fn to_json(self) -> Value {
        match self {
            Anchor::After(o) => {
                json!({ "after": format!("{}{}", if o.over { 'O' } else { 'U' }, o.label) })
            }
            Anchor::Start(c) => json!({ "start": c }),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        if let Some(c) = v.get("start").and_then(Value::as_u64) {
            return Ok(Anchor::Start(c as usize));
        }
        let t = v
            .get("after")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("anchor".into()))?;
        let over = t.starts_with('O');
        let label = t[1..]
            .parse()
            .map_err(|_| Error::Parse("anchor label".into()))?;
        Ok(Anchor::After(Occ { label, over }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReidemeisterKind {
    R1Create,
    R1Delete,
    R2Create,
    R2Delete,
    R3,
}

impl ReidemeisterKind {
    pub const ALL: [ReidemeisterKind; 5] = [
        ReidemeisterKind::R1Create,
        ReidemeisterKind::R1Delete,
        ReidemeisterKind::R2Create,
        ReidemeisterKind::R2Delete,
        ReidemeisterKind::R3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReidemeisterKind::R1Create => "R1_create",
            ReidemeisterKind::R1Delete => "R1_delete",
            ReidemeisterKind::R2Create => "R2_create",
            ReidemeisterKind::R2Delete => "R2_delete",
            ReidemeisterKind::R3 => "R3",
        }
    }
}

/// A Reidemeister move with its site, addressed by crossing labels.
///
/// Creation moves carry everything needed to rebuild the new crossings: the
/// fresh labels, the sign of the (first) new crossing and the anchors after
/// which the new occurrences are inserted. For `R2Create`, `first` and
/// `second` are in order along the over strand; `under_reversed` says that the
/// under strand meets them in the opposite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReidemeisterMove {
    R1Create {
        label: Label,
        sign: i8,
        over_first: bool,
        anchor: Anchor,
    },
    R1Delete {
        label: Label,
    },
    R2Create {
        first: Label,
        second: Label,
        sign_first: i8,
        over_anchor: Anchor,
        under_anchor: Anchor,
        under_reversed: bool,
    },
    R2Delete {
        first: Label,
        second: Label,
    },
    R3 {
        labels: [Label; 3],
        /// Start of the top strand's edge; needed only when two triangular
        /// faces share the same three crossings.
        top: Option<Occ>,
    },
}

impl ReidemeisterMove {
    pub fn kind(&self) -> ReidemeisterKind {
        match self {
            ReidemeisterMove::R1Create { .. } => ReidemeisterKind::R1Create,
            ReidemeisterMove::R1Delete { .. } => ReidemeisterKind::R1Delete,
            ReidemeisterMove::R2Create { .. } => ReidemeisterKind::R2Create,
            ReidemeisterMove::R2Delete { .. } => ReidemeisterKind::R2Delete,
            ReidemeisterMove::R3 { .. } => ReidemeisterKind::R3,
        }
    }

    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> ReidemeisterMove {
        let a = |x: Anchor| match x {
            Anchor::After(o) => Anchor::After(Occ {
                label: f(o.label),
                over: o.over,
            }),
            s => s,
        };
        match *self {
            ReidemeisterMove::R1Create {
                label,
                sign,
                over_first,
                anchor,
            } => ReidemeisterMove::R1Create {
                label: f(label),
                sign,
                over_first,
                anchor: a(anchor),
            },
            ReidemeisterMove::R1Delete { label } => ReidemeisterMove::R1Delete { label: f(label) },
            ReidemeisterMove::R2Create {
                first,
                second,
                sign_first,
                over_anchor,
                under_anchor,
                under_reversed,
            } => ReidemeisterMove::R2Create {
                first: f(first),
                second: f(second),
                sign_first,
                over_anchor: a(over_anchor),
                under_anchor: a(under_anchor),
                under_reversed,
            },
            ReidemeisterMove::R2Delete { first, second } => ReidemeisterMove::R2Delete {
                first: f(first),
                second: f(second),
            },
            ReidemeisterMove::R3 { labels, top } => ReidemeisterMove::R3 {
                labels: labels.map(&f),
                top: top.map(|o| Occ {
                    label: f(o.label),
                    over: o.over,
                }),
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let site = match *self {
            ReidemeisterMove::R1Create {
                label,
                sign,
                over_first,
                anchor,
            } => json!({
                "label": label, "sign": sign, "over_first": over_first, "anchor": anchor.to_json(),
            }),
            ReidemeisterMove::R1Delete { label } => json!({ "label": label }),
            ReidemeisterMove::R2Create {
                first,
                second,
                sign_first,
                over_anchor,
                under_anchor,
                under_reversed,
            } => {
                json!({
                    "labels": [first, second],
                    "sign_first": sign_first,
                    "over_anchor": over_anchor.to_json(),
                    "under_anchor": under_anchor.to_json(),
                    "under_reversed": under_reversed,
                })
            }
            ReidemeisterMove::R2Delete { first, second } => json!({ "labels": [first, second] }),
            ReidemeisterMove::R3 { labels, top: None } => json!({ "labels": labels }),
            ReidemeisterMove::R3 {
                labels,
                top: Some(o),
            } => json!({ "labels": labels, "top": Anchor::After(o).to_json()["after"] }),
        };
        json!({ "kind": self.kind().name(), "site": site })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("reidemeister JSON: {m}"));
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("kind"))?;
        let site = v.get("site").ok_or_else(|| bad("site"))?;
        let num = |k: &str| site.get(k).and_then(Value::as_i64).ok_or_else(|| bad(k));
        let labels = || -> Result<Vec<Label>> {
            site.get("labels")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("labels"))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as Label).ok_or_else(|| bad("label")))
                .collect()
        };
        let anchor = |k: &str| Anchor::from_json(site.get(k).ok_or_else(|| bad(k))?);
        let flag = |k: &str| site.get(k).and_then(Value::as_bool).ok_or_else(|| bad(k));
        Ok(match kind {
            "R1_create" => ReidemeisterMove::R1Create {
                label: num("label")? as Label,
                sign: num("sign")? as i8,
                over_first: flag("over_first")?,
                anchor: anchor("anchor")?,
            },
            "R1_delete" => ReidemeisterMove::R1Delete {
                label: num("label")? as Label,
            },
            "R2_create" => {
                let l = labels()?;
                if l.len() != 2 {
                    return Err(bad("labels"));
                }
                ReidemeisterMove::R2Create {
                    first: l[0],
                    second: l[1],
                    sign_first: num("sign_first")? as i8,
                    over_anchor: anchor("over_anchor")?,
                    under_anchor: anchor("under_anchor")?,
                    under_reversed: flag("under_reversed")?,
                }
            }
            "R2_delete" => {
                let l = labels()?;
                if l.len() != 2 {
                    return Err(bad("labels"));
                }
                ReidemeisterMove::R2Delete {
                    first: l[0],
                    second: l[1],
                }
            }
            "R3" => {
                let l = labels()?;
                if l.len() != 3 {
                    return Err(bad("labels"));
                }
                let top = match site.get("top") {
                    None | Some(Value::Null) => None,
                    Some(t) => match Anchor::from_json(&json!({ "after": t }))? {
                        Anchor::After(o) => Some(o),
                        Anchor::Start(_) => return Err(bad("top")),
                    },
                };
                ReidemeisterMove::R3 {
                    labels: [l[0], l[1], l[2]],
                    top,
                }
            }
            other => return Err(bad(&format!("unknown kind {other}"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(s: &str) -> Occ {
        Occ {
            label: s[1..].parse().unwrap(),
            over: s.starts_with('O'),
        }
    }

    fn knot(seq: &str, signs: &[(Label, i8)]) -> PlanarDiagram {
        PlanarDiagram::new(
            vec![seq.split_whitespace().map(occ).collect()],
            signs.iter().copied().collect(),
        )
        .unwrap()
    }

    fn trefoil() -> PlanarDiagram {
        knot("O1 U2 O3 U1 O2 U3", &[(1, 1), (2, 1), (3, 1)])
    }

    #[test]
    fn trefoil_is_planar_with_five_faces() {
        let t = trefoil();
        assert!(t.is_planar());
        assert_eq!(t.faces().faces.len(), 5);
        // Wrong signs give a virtual (non-planar) code.
        let v = knot("O1 U2 O3 U1 O2 U3", &[(1, 1), (2, -1), (3, 1)]);
        assert!(!v.is_planar());
    }

    #[test]
    fn r1_round_trip() {
        let u = PlanarDiagram::unknot();
        let m = ReidemeisterMove::R1Create {
            label: 1,
            sign: 1,
            over_first: true,
            anchor: Anchor::Start(0),
        };
        let k = u.apply(&m).unwrap();
        assert_eq!(k.crossing_count(), 1);
        let back = k.apply(&ReidemeisterMove::R1Delete { label: 1 }).unwrap();
        assert!(back.cyclic_eq(&u));
    }

    #[test]
    fn r2_round_trip_on_trefoil() {
        let t = trefoil();
        // Push the edge after O1 over the edge after U1: both lie on a common face?
        let mut ok = 0;
        let occs: Vec<Occ> = t.components()[0].clone();
        for &a in &occs {
            for &b in &occs {
                for sign_first in [1, -1] {
                    for under_reversed in [false, true] {
                        let m = ReidemeisterMove::R2Create {
                            first: 10,
                            second: 11,
                            sign_first,
                            over_anchor: Anchor::After(a),
                            under_anchor: Anchor::After(b),
                            under_reversed,
                        };
                        if let Ok(x) = t.apply(&m) {
                            ok += 1;
                            let y = x
                                .apply(&ReidemeisterMove::R2Delete {
                                    first: 10,
                                    second: 11,
                                })
                                .unwrap();
                            assert!(y.cyclic_eq(&t));
                        }
                    }
                }
            }
        }
        assert!(ok > 0);
    }

    #[test]
    fn r2_delete_rejects_clasp() {
        // Hopf-like clasp inside the trefoil: crossings 1,2 alternate.
        let t = trefoil();
        assert!(t
            .apply(&ReidemeisterMove::R2Delete {
                first: 1,
                second: 2
            })
            .is_err());
        assert!(t
            .apply(&ReidemeisterMove::R3 {
                labels: [1, 2, 3],
                top: None,
            })
            .is_err());
    }

    #[test]
    fn gauss_code_invariant_under_basepoint() {
        let t = trefoil();
        let r = knot("U2 O3 U1 O2 U3 O1", &[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(t.gauss_code().unwrap(), r.gauss_code().unwrap());
        assert_eq!(t.gauss_code().unwrap(), t.reversed().gauss_code().unwrap());
        assert_eq!(t.gauss_code().unwrap().len(), 6);
        assert_ne!(t.gauss_code().unwrap(), t.reflected().gauss_code().unwrap());
        assert!(PlanarDiagram::unknot().gauss_code().unwrap().is_empty());
    }

    #[test]
    fn isomorphism_recovers_relabelling() {
        let t = trefoil();
        let map: HashMap<Label, Label> = [(1, 7), (2, 9), (3, 8)].into_iter().collect();
        let r = t.relabel(&map).reversed();
        let (rev, iso) = t.find_isomorphism(&r).unwrap();
        let back = if rev { r.reversed() } else { r.clone() }.relabel(&iso);
        assert!(back.cyclic_eq(&t));
    }

    #[test]
    fn json_round_trip() {
        let t = trefoil();
        assert_eq!(PlanarDiagram::from_json(&t.to_json()).unwrap(), t);
        let m = ReidemeisterMove::R2Create {
            first: 4,
            second: 5,
            sign_first: -1,
            over_anchor: Anchor::After(Occ {
                label: 1,
                over: true,
            }),
            under_anchor: Anchor::Start(0),
            under_reversed: true,
        };
        assert_eq!(ReidemeisterMove::from_json(&m.to_json()).unwrap(), m);
    }
}
