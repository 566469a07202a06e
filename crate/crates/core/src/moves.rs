//! Cromwell moves: merges, divides, exchanges and rotations.
//!
//! Every move is implemented for the horizontal axis directly on the column
//! representation; vertical moves conjugate by the transpose.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grid::{GridDiagram, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Which extreme of an axis: bottom/left (`Low`) or top/right (`High`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Low,
    High,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    TopToBottom,
    BottomToTop,
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::TopToBottom,
        Direction::BottomToTop,
        Direction::LeftToRight,
        Direction::RightToLeft,
    ];

    pub fn opposite(self) -> Direction {
        match self {
            Direction::TopToBottom => Direction::BottomToTop,
            Direction::BottomToTop => Direction::TopToBottom,
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Direction::TopToBottom | Direction::BottomToTop => Axis::Horizontal,
            _ => Axis::Vertical,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Direction::TopToBottom => "top_to_bottom",
            Direction::BottomToTop => "bottom_to_top",
            Direction::LeftToRight => "left_to_right",
            Direction::RightToLeft => "right_to_left",
        }
    }

    /// The equivalent horizontal rotation after transposing.
    fn horizontal(self) -> Direction {
        match self {
            Direction::LeftToRight => Direction::BottomToTop,
            Direction::RightToLeft => Direction::TopToBottom,
            d => d,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    InteriorMerge,
    ExteriorMerge,
    Divide,
    InteriorExchange,
    ExteriorExchange,
    Rotation,
}

/// One Cromwell move with its site. Indices are zero-based levels along the
/// axis perpendicular to the edges that the move acts on.
///
/// * `InteriorMerge.edge`: the unit-length connecting edge (a column for a
///   horizontal merge).
/// * `ExteriorMerge.edge`: the full-length connecting edge; `placement` is
///   where the merged edge goes.
/// * `Divide`: splits the edge at level `edge`; the new connecting edge is
///   inserted at index `at` of the result, and the `moved_end` endpoint of the
///   split edge moves to the new level (adjacent above for interior divides,
///   the opposite extreme for exterior ones).
/// * `InteriorExchange.level`: the lower of the two adjacent levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CromwellMove {
    InteriorMerge {
        axis: Axis,
        edge: usize,
    },
    ExteriorMerge {
        axis: Axis,
        edge: usize,
        placement: End,
    },
    Divide {
        axis: Axis,
        edge: usize,
        at: usize,
        moved_end: End,
        exterior: bool,
    },
    InteriorExchange {
        axis: Axis,
        level: usize,
    },
    ExteriorExchange {
        axis: Axis,
    },
    Rotation {
        direction: Direction,
    },
}

impl CromwellMove {
    pub fn kind(&self) -> MoveKind {
        match self {
            CromwellMove::InteriorMerge { .. } => MoveKind::InteriorMerge,
            CromwellMove::ExteriorMerge { .. } => MoveKind::ExteriorMerge,
            CromwellMove::Divide { .. } => MoveKind::Divide,
            CromwellMove::InteriorExchange { .. } => MoveKind::InteriorExchange,
            CromwellMove::ExteriorExchange { .. } => MoveKind::ExteriorExchange,
            CromwellMove::Rotation { .. } => MoveKind::Rotation,
        }
    }

    pub fn axis(&self) -> Axis {
        match *self {
            CromwellMove::InteriorMerge { axis, .. }
            | CromwellMove::ExteriorMerge { axis, .. }
            | CromwellMove::Divide { axis, .. }
            | CromwellMove::InteriorExchange { axis, .. }
            | CromwellMove::ExteriorExchange { axis } => axis,
            CromwellMove::Rotation { direction } => direction.axis(),
        }
    }

    /// Moves that involve the extreme levels of the grid.
    pub fn is_exterior(&self) -> bool {
        matches!(
            self,
            CromwellMove::ExteriorMerge { .. }
                | CromwellMove::ExteriorExchange { .. }
                | CromwellMove::Rotation { .. }
                | CromwellMove::Divide { exterior: true, .. }
        )
    }

    pub fn is_merge(&self) -> bool {
        matches!(
            self,
            CromwellMove::InteriorMerge { .. } | CromwellMove::ExteriorMerge { .. }
        )
    }

    pub fn is_exchange(&self) -> bool {
        matches!(
            self,
            CromwellMove::InteriorExchange { .. } | CromwellMove::ExteriorExchange { .. }
        )
    }

    /// Change in grid size caused by the move.
    pub fn size_delta(&self) -> isize {
        match self {
            CromwellMove::InteriorMerge { .. } | CromwellMove::ExteriorMerge { .. } => -1,
            CromwellMove::Divide { .. } => 1,
            _ => 0,
        }
    }

    fn with_axis(self, axis: Axis) -> Self {
        match self {
            CromwellMove::InteriorMerge { edge, .. } => CromwellMove::InteriorMerge { axis, edge },
            CromwellMove::ExteriorMerge {
                edge, placement, ..
            } => CromwellMove::ExteriorMerge {
                axis,
                edge,
                placement,
            },
            CromwellMove::Divide {
                edge,
                at,
                moved_end,
                exterior,
                ..
            } => CromwellMove::Divide {
                axis,
                edge,
                at,
                moved_end,
                exterior,
            },
            CromwellMove::InteriorExchange { level, .. } => {
                CromwellMove::InteriorExchange { axis, level }
            }
            CromwellMove::ExteriorExchange { .. } => CromwellMove::ExteriorExchange { axis },
            CromwellMove::Rotation { direction } => match axis {
                Axis::Horizontal => CromwellMove::Rotation {
                    direction: direction.horizontal(),
                },
                Axis::Vertical => self,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let axis = match self.axis() {
            Axis::Horizontal => "horizontal",
            Axis::Vertical => "vertical",
        };
        let site = match *self {
            CromwellMove::InteriorMerge { edge, .. } => json!({ "edge": edge + 1 }),
            CromwellMove::ExteriorMerge {
                axis,
                edge,
                placement,
            } => {
                json!({ "edge": edge + 1, "placement": placement_name(axis, placement) })
            }
            CromwellMove::Divide {
                edge,
                at,
                moved_end,
                exterior,
                ..
            } => json!({
                "edge": edge + 1,
                "at": at + 1,
                "moved_end": end_name(moved_end),
                "exterior": exterior,
            }),
            CromwellMove::InteriorExchange { level, .. } => json!({ "level": level + 1 }),
            CromwellMove::ExteriorExchange { .. } => Value::Null,
            CromwellMove::Rotation { direction } => json!({ "direction": direction.name() }),
        };
        json!({ "kind": kind_name(self.kind()), "axis": axis, "site": site })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("move JSON: {m}"));
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing kind"))?;
        let axis = match v.get("axis").and_then(Value::as_str) {
            Some("horizontal") => Axis::Horizontal,
            Some("vertical") => Axis::Vertical,
            None if kind == "rotation" => Axis::Horizontal,
            other => return Err(bad(&format!("bad axis {other:?}"))),
        };
        let site = v.get("site").cloned().unwrap_or(Value::Null);
        let idx = |key: &str| -> Result<usize> {
            let x = site
                .get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(key))?;
            if x == 0 {
                return Err(bad(&format!("{key} is one-based")));
            }
            Ok(x as usize - 1)
        };
        Ok(match kind {
            "interior_merge" => CromwellMove::InteriorMerge {
                axis,
                edge: idx("edge")?,
            },
            "exterior_merge" => {
                let p = site
                    .get("placement")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("placement"))?;
                let placement = match p {
                    "top" | "right" | "high" => End::High,
                    "bottom" | "left" | "low" => End::Low,
                    _ => return Err(bad("placement")),
                };
                CromwellMove::ExteriorMerge {
                    axis,
                    edge: idx("edge")?,
                    placement,
                }
            }
            "divide" => {
                let moved_end = match site.get("moved_end").and_then(Value::as_str) {
                    Some("high") => End::High,
                    Some("low") => End::Low,
                    _ => return Err(bad("moved_end")),
                };
                let exterior = site
                    .get("exterior")
                    .and_then(Value::as_bool)
                    .unwrap_or(false);
                CromwellMove::Divide {
                    axis,
                    edge: idx("edge")?,
                    at: idx("at")?,
                    moved_end,
                    exterior,
                }
            }
            "interior_exchange" => CromwellMove::InteriorExchange {
                axis,
                level: idx("level")?,
            },
            "exterior_exchange" => CromwellMove::ExteriorExchange { axis },
            "rotation" => {
                let d = site
                    .get("direction")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("direction"))?;
                let direction = Direction::ALL
                    .into_iter()
                    .find(|x| x.name() == d)
                    .ok_or_else(|| bad("direction"))?;
                CromwellMove::Rotation { direction }
            }
            other => return Err(bad(&format!("unknown kind {other}"))),
        })
    }
}

impl fmt::Display for CromwellMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

pub fn kind_name(k: MoveKind) -> &'static str {
    match k {
        MoveKind::InteriorMerge => "interior_merge",
        MoveKind::ExteriorMerge => "exterior_merge",
        MoveKind::Divide => "divide",
        MoveKind::InteriorExchange => "interior_exchange",
        MoveKind::ExteriorExchange => "exterior_exchange",
        MoveKind::Rotation => "rotation",
    }
}

fn end_name(e: End) -> &'static str {
    match e {
        End::Low => "low",
        End::High => "high",
    }
}

fn placement_name(axis: Axis, e: End) -> &'static str {
    match (axis, e) {
        (Axis::Horizontal, End::Low) => "bottom",
        (Axis::Horizontal, End::High) => "top",
        (Axis::Vertical, End::Low) => "left",
        (Axis::Vertical, End::High) => "right",
    }
}

/// Relative position of two parallel edges at distinct levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Interleaving {
    Interleaved,
    Nested,
    Disjoint,
    SharedEndpoint,
}

/// Classifies two spans by the pattern of their sorted endpoints.
pub fn interleaved(a: (usize, usize), b: (usize, usize)) -> Interleaving {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
        return Interleaving::SharedEndpoint;
    }
    let inside = |x: usize, lo: usize, hi: usize| lo < x && x < hi;
    match (inside(b0, a0, a1), inside(b1, a0, a1)) {
        (true, true) => Interleaving::Nested,
        (true, false) | (false, true) => Interleaving::Interleaved,
        (false, false) if inside(a0, b0, b1) => Interleaving::Nested,
        _ => Interleaving::Disjoint,
    }
}

fn exchangeable(a: (usize, usize), b: (usize, usize)) -> bool {
    matches!(
        interleaved(a, b),
        Interleaving::Nested | Interleaving::Disjoint
    )
}

/// Horizontal moves of `d` (merges of horizontal edges, exchanges of rows,
/// vertical rotations excluded).
fn horizontal_moves(d: &GridDiagram, out: &mut Vec<CromwellMove>, axis: Axis) {
    let n = d.n();
    let rows = d.rows();
    if n > 2 {
        for (i, (lo, hi)) in d.cols().enumerate() {
            let a = other_end(rows[lo], i);
            let b = other_end(rows[hi], i);
            if a == b {
                continue;
            }
            if hi - lo == 1 {
                out.push(CromwellMove::InteriorMerge { axis, edge: i });
            }
            if lo == 0 && hi == n - 1 {
                for placement in [End::Low, End::High] {
                    out.push(CromwellMove::ExteriorMerge {
                        axis,
                        edge: i,
                        placement,
                    });
                }
            }
        }
    }
    for j in 0..n - 1 {
        if exchangeable(rows[j], rows[j + 1]) {
            out.push(CromwellMove::InteriorExchange { axis, level: j });
        }
    }
    if n > 2 && exchangeable(rows[0], rows[n - 1]) {
        out.push(CromwellMove::ExteriorExchange { axis });
    }
}

fn other_end(span: (usize, usize), i: usize) -> usize {
    if span.0 == i {
        span.1
    } else {
        span.0
    }
}

/// Which moves to list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveSet {
    pub interior_merges: bool,
    pub exterior_merges: bool,
    pub interior_exchanges: bool,
    pub exterior_exchanges: bool,
    pub rotations: bool,
}

impl MoveSet {
    pub const ALL: MoveSet = MoveSet {
        interior_merges: true,
        exterior_merges: true,
        interior_exchanges: true,
        exterior_exchanges: true,
        rotations: true,
    };

    /// Merges and exchanges only: the moves of a monotone simplification.
    pub const MONOTONE: MoveSet = MoveSet {
        rotations: false,
        ..MoveSet::ALL
    };

    /// Everything except exterior exchanges and rotations.
    pub const NO_EXTERIOR_EXCHANGE: MoveSet = MoveSet {
        exterior_exchanges: false,
        rotations: false,
        ..MoveSet::ALL
    };

    pub fn allows(&self, m: &CromwellMove) -> bool {
        match m.kind() {
            MoveKind::InteriorMerge => self.interior_merges,
            MoveKind::ExteriorMerge => self.exterior_merges,
            MoveKind::InteriorExchange => self.interior_exchanges,
            MoveKind::ExteriorExchange => self.exterior_exchanges,
            MoveKind::Rotation => self.rotations,
            MoveKind::Divide => false,
        }
    }
}

/// Every applicable merge, exchange and rotation. Divides are parameterised
/// and never listed.
pub fn available_moves(d: &GridDiagram) -> Vec<CromwellMove> {
    let mut out = Vec::new();
    horizontal_moves(d, &mut out, Axis::Horizontal);
    let t = d.transform(TRANSPOSE);
    horizontal_moves(&t, &mut out, Axis::Vertical);
    out.extend(Direction::ALL.map(|direction| CromwellMove::Rotation { direction }));
    out
}

pub fn available_moves_in(d: &GridDiagram, set: MoveSet) -> Vec<CromwellMove> {
    available_moves(d)
        .into_iter()
        .filter(|m| set.allows(m))
        .collect()
}

/// No merge of either kind and no interior exchange.
pub fn is_stuck(d: &GridDiagram) -> bool {
    !available_moves(d)
        .iter()
        .any(|m| m.is_merge() || m.kind() == MoveKind::InteriorExchange)
}

const TRANSPOSE: Symmetry = Symmetry {
    transpose: true,
    flip_x: false,
    flip_y: false,
};

fn inapplicable(m: &CromwellMove, why: &str) -> Error {
    Error::InapplicableMove(format!("{m}: {why}"))
}

/// Applies a move, checking its precondition.
pub fn apply(d: &GridDiagram, m: &CromwellMove) -> Result<GridDiagram> {
    if m.axis() == Axis::Vertical {
        let t = d.transform(TRANSPOSE);
        let r = apply_horizontal(&t, &m.with_axis(Axis::Horizontal), m)?;
        return Ok(r.transform(TRANSPOSE));
    }
    apply_horizontal(d, m, m)
}

fn relabel_rows(d: &GridDiagram, f: impl Fn(usize) -> usize) -> GridDiagram {
    let cols = d
        .cols()
        .map(|(a, b)| {
            let (x, y) = (f(a), f(b));
            (x.min(y) as u8, x.max(y) as u8)
        })
        .collect();
    GridDiagram::from_cols_unchecked(cols)
}

fn apply_horizontal(d: &GridDiagram, m: &CromwellMove, orig: &CromwellMove) -> Result<GridDiagram> {
    let n = d.n();
    let rows = d.rows();
    match *m {
        CromwellMove::InteriorExchange { level, .. } => {
            if level + 1 >= n {
                return Err(inapplicable(orig, "level out of range"));
            }
            if !exchangeable(rows[level], rows[level + 1]) {
                return Err(inapplicable(
                    orig,
                    "edges are interleaved or share an endpoint",
                ));
            }
            Ok(relabel_rows(d, |r| {
                if r == level {
                    level + 1
                } else if r == level + 1 {
                    level
                } else {
                    r
                }
            }))
        }
        CromwellMove::ExteriorExchange { .. } => {
            if n < 3 || !exchangeable(rows[0], rows[n - 1]) {
                return Err(inapplicable(
                    orig,
                    "extreme edges are interleaved or share an endpoint",
                ));
            }
            Ok(relabel_rows(d, |r| {
                if r == 0 {
                    n - 1
                } else if r == n - 1 {
                    0
                } else {
                    r
                }
            }))
        }
        CromwellMove::Rotation { direction } => match direction {
            Direction::TopToBottom => Ok(relabel_rows(d, |r| (r + 1) % n)),
            Direction::BottomToTop => Ok(relabel_rows(d, |r| (r + n - 1) % n)),
            _ => unreachable!("vertical rotations are transposed first"),
        },
        CromwellMove::InteriorMerge { edge, .. } => {
            if n <= 2 {
                return Err(inapplicable(orig, "the 2x2 diagram is terminal"));
            }
            if edge >= n {
                return Err(inapplicable(orig, "edge out of range"));
            }
            let (lo, hi) = d.col(edge);
            if hi - lo != 1 {
                return Err(inapplicable(orig, "connecting edge is not of length 1"));
            }
            let (a, b) = (other_end(rows[lo], edge), other_end(rows[hi], edge));
            if a == b {
                return Err(inapplicable(orig, "merge would collapse a component"));
            }
            // Row `hi` joins row `lo`, then is removed.
            Ok(remove(d, edge, hi, |r| if r == hi { lo } else { r }))
        }
        CromwellMove::ExteriorMerge {
            edge, placement, ..
        } => {
            if n <= 2 {
                return Err(inapplicable(orig, "the 2x2 diagram is terminal"));
            }
            if edge >= n {
                return Err(inapplicable(orig, "edge out of range"));
            }
            let (lo, hi) = d.col(edge);
            if lo != 0 || hi != n - 1 {
                return Err(inapplicable(
                    orig,
                    "connecting edge does not join the extreme edges",
                ));
            }
            let (a, b) = (other_end(rows[lo], edge), other_end(rows[hi], edge));
            if a == b {
                return Err(inapplicable(orig, "merge would collapse a component"));
            }
            match placement {
                End::High => Ok(remove(d, edge, 0, |r| if r == 0 { n - 1 } else { r })),
                End::Low => Ok(remove(d, edge, n - 1, |r| if r == n - 1 { 0 } else { r })),
            }
        }
        CromwellMove::Divide {
            edge,
            at,
            moved_end,
            exterior,
            ..
        } => divide(d, edge, at, moved_end, exterior)
            .ok_or_else(|| inapplicable(orig, "bad divide site")),
    }
}

/// Removes column `col` and row `row` after redirecting row ends through `redirect`.
fn remove(
    d: &GridDiagram,
    col: usize,
    row: usize,
    redirect: impl Fn(usize) -> usize,
) -> GridDiagram {
    let cols = d
        .cols()
        .enumerate()
        .filter(|&(i, _)| i != col)
        .map(|(_, (a, b))| {
            let f = |r: usize| {
                let r = redirect(r);
                if r > row {
                    r - 1
                } else {
                    r
                }
            };
            let (x, y) = (f(a), f(b));
            (x.min(y) as u8, x.max(y) as u8)
        })
        .collect();
    GridDiagram::from_cols_unchecked(cols)
}

fn divide(
    d: &GridDiagram,
    edge: usize,
    at: usize,
    moved_end: End,
    exterior: bool,
) -> Option<GridDiagram> {
    let n = d.n();
    if edge >= n || at > n || n + 1 > crate::grid::MAX_N {
        return None;
    }
    let (l, r) = d.rows()[edge];
    let moved_col = match moved_end {
        End::Low => l,
        End::High => r,
    };
    // New row index in the result and the shift applied to old rows.
    let (new_row, shift): (usize, Box<dyn Fn(usize) -> usize>) = if !exterior {
        (
            edge + 1,
            Box::new(move |x| if x > edge { x + 1 } else { x }),
        )
    } else if edge == n - 1 {
        (0, Box::new(|x| x + 1))
    } else if edge == 0 {
        (n, Box::new(|x| x))
    } else {
        return None;
    };
    let mut cols: Vec<(usize, usize)> = d
        .cols()
        .enumerate()
        .map(|(i, (a, b))| {
            let f = |x: usize| {
                if i == moved_col && x == edge {
                    new_row
                } else {
                    shift(x)
                }
            };
            (f(a), f(b))
        })
        .collect();
    let new_col = (shift(edge).min(new_row), shift(edge).max(new_row));
    cols.insert(at, new_col);
    GridDiagram::new(n + 1, &cols).ok()
}

/// The move undoing `m`, given the diagram `d` it is applied to.
pub fn inverse(d: &GridDiagram, m: &CromwellMove) -> Result<CromwellMove> {
    let n = d.n();
    match *m {
        CromwellMove::InteriorExchange { .. } | CromwellMove::ExteriorExchange { .. } => Ok(*m),
        CromwellMove::Rotation { direction } => Ok(CromwellMove::Rotation {
            direction: direction.opposite(),
        }),
        CromwellMove::InteriorMerge { axis, edge }
        | CromwellMove::ExteriorMerge { axis, edge, .. } => {
            let h = if axis == Axis::Vertical {
                d.transform(TRANSPOSE)
            } else {
                d.clone()
            };
            let hm = m.with_axis(Axis::Horizontal);
            apply_horizontal(&h, &hm, m)?;
            let rows = h.rows();
            let (lo, hi) = h.col(edge);
            let (a, b) = (other_end(rows[lo], edge), other_end(rows[hi], edge));
            let shifted = |c: usize| if c > edge { c - 1 } else { c };
            let (a, b) = (shifted(a), shifted(b));
            Ok(match *m {
                CromwellMove::InteriorMerge { .. } => CromwellMove::Divide {
                    axis,
                    edge: lo,
                    at: edge,
                    moved_end: if b > a { End::High } else { End::Low },
                    exterior: false,
                },
                CromwellMove::ExteriorMerge { placement, .. } => {
                    // The endpoint that travelled around returns to its old level.
                    let (level, moved) = match placement {
                        End::High => (n - 2, a),
                        End::Low => (0, b),
                    };
                    let other = if moved == a { b } else { a };
                    CromwellMove::Divide {
                        axis,
                        edge: level,
                        at: edge,
                        moved_end: if moved > other { End::High } else { End::Low },
                        exterior: true,
                    }
                }
                _ => unreachable!(),
            })
        }
        CromwellMove::Divide {
            axis,
            edge,
            at,
            exterior,
            ..
        } => {
            if !exterior {
                Ok(CromwellMove::InteriorMerge { axis, edge: at })
            } else {
                let placement = if edge == 0 { End::Low } else { End::High };
                Ok(CromwellMove::ExteriorMerge {
                    axis,
                    edge: at,
                    placement,
                })
            }
        }
    }
}
