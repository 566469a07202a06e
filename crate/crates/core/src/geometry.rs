//! Rectilinear drawings and their signed Gauss codes.
//!
//! Points live on an integer lattice at twice the grid resolution, so grid
//! lines sit at even coordinates and everything drawn between them (sweep
//! strands, jogs) at odd ones.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::grid::GridDiagram;
use crate::planar::{Label, Occ, PlanarDiagram};

pub type Point = (i32, i32);

/// Which piece of the drawing a segment belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Col(usize),
    Row(usize),
    /// A piece of a strand that is not part of the grid.
    Strand(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seg {
    pub from: Point,
    pub to: Point,
    /// Stacking height; the higher segment passes over.
    pub layer: u8,
    pub tag: Tag,
}

impl Seg {
    fn horizontal(&self) -> bool {
        self.from.1 == self.to.1
    }

    fn dir(&self) -> Point {
        (
            (self.to.0 - self.from.0).signum(),
            (self.to.1 - self.from.1).signum(),
        )
    }
}

fn strictly_between(v: i32, a: i32, b: i32) -> bool {
    a.min(b) < v && v < a.max(b)
}

fn transverse(h: &Seg, v: &Seg) -> Option<Point> {
    let (x, y) = (v.from.0, h.from.1);
    (strictly_between(x, h.from.0, h.to.0) && strictly_between(y, v.from.1, v.to.1))
        .then_some((x, y))
}

/// Corner points of each component of a grid diagram in traversal order, at
/// doubled resolution. Each component starts at the low end of its
/// lowest-index column and first runs up that column.
pub fn grid_corners(d: &GridDiagram) -> Vec<Vec<Point>> {
    let n = d.n();
    let rows = d.rows();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut pts = Vec::new();
        let (mut c, mut y) = (start, d.col(start).0);
        loop {
            seen[c] = true;
            let (lo, hi) = d.col(c);
            let y2 = if y == lo { hi } else { lo };
            pts.push((2 * c as i32, 2 * y as i32));
            pts.push((2 * c as i32, 2 * y2 as i32));
            let (l, r) = rows[y2];
            c = if l == c { r } else { l };
            y = y2;
            if c == start {
                break;
            }
        }
        out.push(pts);
    }
    out
}

/// Closed polyline through `pts`, tagging grid-aligned segments as columns
/// and rows. Verticals are drawn over horizontals.
pub fn grid_segments(pts: &[Point]) -> Vec<Seg> {
    let k = pts.len();
    (0..k)
        .map(|i| {
            let (from, to) = (pts[i], pts[(i + 1) % k]);
            if from.0 == to.0 {
                Seg {
                    from,
                    to,
                    layer: 1,
                    tag: Tag::Col((from.0 / 2) as usize),
                }
            } else {
                Seg {
                    from,
                    to,
                    layer: 0,
                    tag: Tag::Row((from.1 / 2) as usize),
                }
            }
        })
        .collect()
}

/// Signed Gauss code of a rectilinear drawing. `label` names the crossing
/// between an over piece and an under piece.
pub fn planar_from_segments(
    comps: &[Vec<Seg>],
    mut label: impl FnMut(Tag, Tag) -> Option<Label>,
) -> Result<PlanarDiagram> {
    let all: Vec<(usize, usize, &Seg)> = comps
        .iter()
        .enumerate()
        .flat_map(|(c, segs)| segs.iter().enumerate().map(move |(i, s)| (c, i, s)))
        .collect();
    // Occurrences per segment: (parameter along the segment, occurrence).
    let mut on: HashMap<(usize, usize), Vec<(i32, Occ)>> = HashMap::new();
    let mut signs = BTreeMap::new();
    for (p, &(c1, i1, s1)) in all.iter().enumerate() {
        for &(c2, i2, s2) in &all[p + 1..] {
            if s1.horizontal() == s2.horizontal() {
                if s1.horizontal() && s1.from.1 == s2.from.1
                    || !s1.horizontal() && s1.from.0 == s2.from.0
                {
                    let overlap = |a: &Seg, b: &Seg, k: fn(Point) -> i32| {
                        k(a.from).min(k(a.to)).max(k(b.from).min(k(b.to)))
                            < k(a.from).max(k(a.to)).min(k(b.from).max(k(b.to)))
                    };
                    let key: fn(Point) -> i32 = if s1.horizontal() { |p| p.0 } else { |p| p.1 };
                    if overlap(s1, s2, key) {
                        return Err(Error::DegenerateGeometry(format!(
                            "overlapping segments {:?} {:?}",
                            s1.tag, s2.tag
                        )));
                    }
                }
                continue;
            }
            let (h, v) = if s1.horizontal() { (s1, s2) } else { (s2, s1) };
            let Some(pt) = transverse(h, v) else { continue };
            if s1.layer == s2.layer {
                return Err(Error::DegenerateGeometry(format!(
                    "crossing at {pt:?} on a single layer"
                )));
            }
            let ((co, io, so), (cu, iu, su)) = if s1.layer > s2.layer {
                ((c1, i1, s1), (c2, i2, s2))
            } else {
                ((c2, i2, s2), (c1, i1, s1))
            };
            let l = label(so.tag, su.tag).ok_or_else(|| {
                Error::DegenerateGeometry(format!(
                    "unlabelled crossing {:?} over {:?}",
                    so.tag, su.tag
                ))
            })?;
            let (o, u) = (so.dir(), su.dir());
            let sign = (o.0 * u.1 - o.1 * u.0).signum() as i8;
            if signs.insert(l, sign).is_some() {
                return Err(Error::DegenerateGeometry(format!("label {l} used twice")));
            }
            let along = |s: &Seg| (pt.0 - s.from.0).abs() + (pt.1 - s.from.1).abs();
            on.entry((co, io)).or_default().push((
                along(so),
                Occ {
                    label: l,
                    over: true,
                },
            ));
            on.entry((cu, iu)).or_default().push((
                along(su),
                Occ {
                    label: l,
                    over: false,
                },
            ));
        }
    }
    let seqs = comps
        .iter()
        .enumerate()
        .map(|(c, segs)| {
            let mut seq = Vec::new();
            for i in 0..segs.len() {
                if let Some(v) = on.get_mut(&(c, i)) {
                    v.sort_by_key(|e| e.0);
                    seq.extend(v.iter().map(|e| e.1));
                }
            }
            seq
        })
        .collect();
    PlanarDiagram::new(seqs, signs)
}

/// The planar diagram drawn by a grid diagram, verticals over horizontals.
/// Crossings are labelled `1..` in the order of [`GridDiagram::crossings`].
pub fn to_planar(d: &GridDiagram) -> PlanarDiagram {
    let labels: HashMap<(usize, usize), Label> = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(i, x)| ((x.col, x.row), i as Label + 1))
        .collect();
    let comps: Vec<Vec<Seg>> = grid_corners(d).iter().map(|p| grid_segments(p)).collect();
    planar_from_segments(&comps, |o, u| match (o, u) {
        (Tag::Col(c), Tag::Row(r)) => labels.get(&(c, r)).copied(),
        _ => None,
    })
    .expect("grid drawings are generic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{extremal_diagram, Symmetry};

    #[test]
    fn trivial_grid_is_a_plain_circle() {
        let p = to_planar(&GridDiagram::trivial());
        assert_eq!(p.components().len(), 1);
        assert_eq!(p.crossing_count(), 0);
    }

    #[test]
    fn extremal_crossings_match() {
        for n in 2..=10 {
            let d = extremal_diagram(n).unwrap();
            let p = to_planar(&d);
            assert_eq!(p.crossing_count(), d.crossing_count());
            assert_eq!(p.components().len(), d.component_count());
            assert!(p.is_planar());
        }
    }

    #[test]
    fn half_turn_keeps_code_and_transpose_switches_crossings() {
        let d = GridDiagram::from_one_based(5, &[(1, 4), (3, 5), (2, 4), (1, 3), (2, 5)]).unwrap();
        let p = to_planar(&d);
        assert_eq!(p.crossing_count(), 3);
        let code = p.gauss_code().unwrap();
        assert_eq!(
            to_planar(&d.transform(Symmetry::ROT180))
                .gauss_code()
                .unwrap(),
            code
        );
        let t = Symmetry {
            transpose: true,
            flip_x: false,
            flip_y: false,
        };
        assert_eq!(
            to_planar(&d.transform(t))
                .swap_over_under()
                .gauss_code()
                .unwrap(),
            code
        );
    }
}
