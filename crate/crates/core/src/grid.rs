//! Rectangular (grid) diagrams.
//!
//! A diagram of size `n` has one vertical edge on each line `x = i` and one
//! horizontal edge on each line `y = j`, `i, j in 0..n`. Vertical edges pass
//! over horizontal edges at every crossing. Indices are zero-based in memory;
//! the text and JSON formats in [`crate::io`] are one-based.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported grid size. Canonical keys pack one byte per column.
pub const MAX_N: usize = 15;

/// A validated grid diagram stored as column spans.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridDiagram {
    cols: Vec<(u8, u8)>,
}

/// A crossing: column `col` passes over the horizontal edge on row `row`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub col: usize,
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthStats {
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
    pub total_vertical: usize,
    pub total_horizontal: usize,
    pub total_all: usize,
    pub crossing_count: usize,
}

impl GridDiagram {
    /// Validates raw zero-based column spans. Pairs may be given in either order.
    pub fn new(n: usize, columns: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::Size(n));
        }
        if n > MAX_N {
            return Err(Error::Size(n));
        }
        if columns.len() != n {
            return Err(Error::ColumnCount {
                n,
                got: columns.len(),
            });
        }
        let mut uses = vec![0usize; n];
        let mut cols = Vec::with_capacity(n);
        for (i, &(a, b)) in columns.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::RowOutOfRange {
                    col: i,
                    row: a.max(b),
                    n,
                });
            }
            if a == b {
                return Err(Error::DegenerateColumn { col: i, row: a });
            }
            let (lo, hi) = (a.min(b), a.max(b));
            uses[lo] += 1;
            uses[hi] += 1;
            cols.push((lo as u8, hi as u8));
        }
        if let Some(row) = uses.iter().position(|&u| u != 2) {
            return Err(Error::RowCount {
                row,
                count: uses[row],
            });
        }
        // lo < hi rules out both uses of a row sitting in the same column.
        Ok(GridDiagram { cols })
    }

    /// Validates one-based spans, as written in the external formats.
    pub fn from_one_based(n: usize, columns: &[(usize, usize)]) -> Result<Self> {
        if columns.iter().any(|&(a, b)| a == 0 || b == 0) {
            let col = columns.iter().position(|&(a, b)| a == 0 || b == 0).unwrap();
            return Err(Error::RowOutOfRange { col, row: 0, n });
        }
        let zero: Vec<_> = columns.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        if n < 2 {
            return Err(Error::Size(n));
        }
        GridDiagram::new(n, &zero)
    }

    pub(crate) fn from_cols_unchecked(cols: Vec<(u8, u8)>) -> Self {
        debug_assert!(GridDiagram::new(
            cols.len(),
            &cols
                .iter()
                .map(|&(a, b)| (a as usize, b as usize))
                .collect::<Vec<_>>()
        )
        .is_ok());
        GridDiagram { cols }
    }

    /// The 2x2 diagram of the unknot.
    pub fn trivial() -> Self {
        GridDiagram {
            cols: vec![(0, 1), (0, 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn is_trivial_2x2(&self) -> bool {
        self.cols.len() == 2
    }

    /// Span `(lo, hi)` of the vertical edge at column `i`.
    pub fn col(&self, i: usize) -> (usize, usize) {
        let (lo, hi) = self.cols[i];
        (lo as usize, hi as usize)
    }

    pub fn cols(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cols.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    /// One-based spans in column order.
    pub fn one_based(&self) -> Vec<(usize, usize)> {
        self.cols().map(|(a, b)| (a + 1, b + 1)).collect()
    }

    /// Spans of the horizontal edges: `rows()[j] = (left, right)` columns.
    pub fn rows(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut first = vec![usize::MAX; n];
        let mut rows = vec![(0, 0); n];
        for (i, (lo, hi)) in self.cols().enumerate() {
            for r in [lo, hi] {
                if first[r] == usize::MAX {
                    first[r] = i;
                } else {
                    rows[r] = (first[r], i);
                }
            }
        }
        rows
    }

    /// The column whose vertical edge ends at `(col's other end)`; i.e. the
    /// other column using row `row`.
    pub fn row_partner(&self, row: usize, col: usize) -> usize {
        let (l, r) = self.rows()[row];
        if l == col {
            r
        } else {
            l
        }
    }

    /// Number of link components.
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        // Each column joins its two rows; components are the row classes.
        for (lo, hi) in self.cols() {
            let (a, b) = (find(&mut parent, lo), find(&mut parent, hi));
            if a != b {
                parent[a] = b;
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    /// All crossings, sorted by column then row.
    pub fn crossings(&self) -> Vec<Crossing> {
        let rows = self.rows();
        let mut out = Vec::new();
        for (i, (lo, hi)) in self.cols().enumerate() {
            for (j, &(l, r)) in rows.iter().enumerate().take(hi).skip(lo + 1) {
                if l < i && i < r {
                    out.push(Crossing { col: i, row: j });
                }
            }
        }
        out
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings().len()
    }

    pub fn length_stats(&self) -> LengthStats {
        let vertical: Vec<usize> = self.cols().map(|(a, b)| b - a).collect();
        let horizontal: Vec<usize> = self.rows().iter().map(|&(a, b)| b - a).collect();
        let total_vertical = vertical.iter().sum();
        let total_horizontal = horizontal.iter().sum();
        LengthStats {
            total_all: total_vertical + total_horizontal,
            crossing_count: self.crossing_count(),
            vertical,
            horizontal,
            total_vertical,
            total_horizontal,
        }
    }

    /// Image under a symmetry of the square.
    pub fn transform(&self, s: Symmetry) -> GridDiagram {
        let n = self.n() as u8;
        let mut cols = if s.transpose {
            self.rows()
                .iter()
                .map(|&(a, b)| (a as u8, b as u8))
                .collect()
        } else {
            self.cols.clone()
        };
        if s.flip_y {
            for c in cols.iter_mut() {
                *c = (n - 1 - c.1, n - 1 - c.0);
            }
        }
        if s.flip_x {
            cols.reverse();
        }
        GridDiagram { cols }
    }

    /// Canonical representative of the dihedral orbit (lexicographically least
    /// column list) together with the symmetry mapping `self` onto it.
    pub fn canonical_form(&self) -> (GridDiagram, Symmetry) {
        let mut best = (self.clone(), Symmetry::IDENTITY);
        for s in Symmetry::ALL.iter().skip(1) {
            let img = self.transform(*s);
            if img.cols < best.0.cols {
                best = (img, *s);
            }
        }
        best
    }

    pub fn canonical(&self) -> GridDiagram {
        self.canonical_form().0
    }

    /// Number of distinct images under the dihedral group.
    pub fn orbit_size(&self) -> usize {
        let mut imgs: Vec<_> = Symmetry::ALL
            .iter()
            .map(|s| self.transform(*s).cols)
            .collect();
        imgs.sort();
        imgs.dedup();
        imgs.len()
    }

    /// Packed key of the column list; injective for `n <= MAX_N`.
    pub fn key(&self) -> u128 {
        let mut k: u128 = self.cols.len() as u128;
        for &(a, b) in &self.cols {
            k = (k << 8) | ((a as u128) << 4) | b as u128;
        }
        k
    }
}

impl fmt::Debug for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid[")?;
        for (i, (a, b)) in self.one_based().into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "]")
    }
}

/// An element of the dihedral group of the square, written as an optional
/// transpose followed by reflections of the x and y axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub transpose: bool,
    pub flip_x: bool,
    pub flip_y: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        transpose: false,
        flip_x: false,
        flip_y: false,
    };
    pub const ROT180: Symmetry = Symmetry {
        transpose: false,
        flip_x: true,
        flip_y: true,
    };

    pub const ALL: [Symmetry; 8] = {
        let mut all = [Symmetry::IDENTITY; 8];
        let mut k = 0;
        while k < 8 {
            all[k] = Symmetry {
                transpose: k & 4 != 0,
                flip_x: k & 1 != 0,
                flip_y: k & 2 != 0,
            };
            k += 1;
        }
        all
    };

    /// Stable short name used in JSON output.
    pub fn name(self) -> &'static str {
        match (self.transpose, self.flip_x, self.flip_y) {
            (false, false, false) => "id",
            (false, true, false) => "flip_x",
            (false, false, true) => "flip_y",
            (false, true, true) => "rot180",
            (true, false, false) => "transpose",
            (true, true, false) => "transpose_flip_x",
            (true, false, true) => "transpose_flip_y",
            (true, true, true) => "transpose_rot180",
        }
    }

    pub fn inverse(self) -> Symmetry {
        if self.transpose {
            Symmetry {
                transpose: true,
                flip_x: self.flip_y,
                flip_y: self.flip_x,
            }
        } else {
            self
        }
    }

    /// Whether the map reverses the orientation of the plane.
    pub fn reverses_orientation(self) -> bool {
        self.transpose ^ self.flip_x ^ self.flip_y
    }
}

/// Maximum crossing count of an `n`-grid.
pub fn max_crossings_bound(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Size(n));
    }
    Ok((n * n - 2 * n - n % 2) / 2)
}

/// Maximum total edge length (both directions) of an `n`-grid.
pub fn max_length_bound(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Size(n));
    }
    Ok(n * n - n % 2)
}

/// A diagram attaining both [`max_crossings_bound`] and [`max_length_bound`].
///
/// Concentric spans: the left half uses `(m-1-i, m+i)` outward from the middle
/// rows, the right half mirrors it (even `n`) or continues the spiral through
/// the full-height column (odd `n`).
pub fn extremal_diagram(n: usize) -> Result<GridDiagram> {
    if n < 2 {
        return Err(Error::Size(n));
    }
    if n > MAX_N {
        return Err(Error::Size(n));
    }
    let m = n / 2;
    let mut cols: Vec<(usize, usize)> = (1..=m).map(|i| (m - i, m + i - 1)).collect();
    if n % 2 == 0 {
        let left = cols.clone();
        cols.extend(left.into_iter().rev());
    } else {
        cols.push((0, n - 1));
        cols.extend((0..m).map(|k| (k + 1, n - 1 - k)));
    }
    GridDiagram::new(n, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, c: &[(usize, usize)]) -> Result<GridDiagram> {
        GridDiagram::from_one_based(n, c)
    }

    #[test]
    fn validation_examples() {
        assert_eq!(g(2, &[(1, 2), (1, 2)]).unwrap(), GridDiagram::trivial());
        assert!(matches!(
            g(2, &[(1, 1), (2, 2)]),
            Err(Error::DegenerateColumn { .. })
        ));
        assert!(g(3, &[(1, 2), (1, 3), (2, 3)]).is_ok());
        assert!(matches!(
            g(3, &[(1, 2), (1, 2), (1, 3)]),
            Err(Error::RowCount { .. })
        ));
        assert!(matches!(g(1, &[(1, 1)]), Err(Error::Size(1))));
    }

    #[test]
    fn components() {
        assert_eq!(GridDiagram::trivial().component_count(), 1);
        assert_eq!(
            g(3, &[(1, 2), (1, 3), (2, 3)]).unwrap().component_count(),
            1
        );
        assert_eq!(
            g(4, &[(1, 2), (1, 2), (3, 4), (3, 4)])
                .unwrap()
                .component_count(),
            2
        );
    }

    #[test]
    fn crossings_small() {
        assert!(GridDiagram::trivial().crossings().is_empty());
        assert_eq!(g(3, &[(1, 2), (1, 3), (2, 3)]).unwrap().crossing_count(), 1);
        assert_eq!(extremal_diagram(8).unwrap().crossing_count(), 24);
    }

    #[test]
    fn bounds_formulas() {
        assert_eq!(
            (
                max_crossings_bound(8).unwrap(),
                max_length_bound(8).unwrap()
            ),
            (24, 64)
        );
        assert_eq!(
            (
                max_crossings_bound(7).unwrap(),
                max_length_bound(7).unwrap()
            ),
            (17, 48)
        );
        assert_eq!(
            (
                max_crossings_bound(2).unwrap(),
                max_length_bound(2).unwrap()
            ),
            (0, 4)
        );
        assert!(max_crossings_bound(1).is_err());
    }

    #[test]
    fn extremal_attains_bounds() {
        for n in 2..=MAX_N {
            let d = extremal_diagram(n).unwrap();
            let st = d.length_stats();
            assert_eq!(st.crossing_count, max_crossings_bound(n).unwrap(), "n={n}");
            assert_eq!(st.total_all, max_length_bound(n).unwrap(), "n={n}");
        }
        assert_eq!(extremal_diagram(4).unwrap().crossing_count(), 4);
        assert_eq!(extremal_diagram(5).unwrap().length_stats().total_all, 24);
        assert_eq!(extremal_diagram(3).unwrap().crossing_count(), 1);
    }

    #[test]
    fn crossings_bounded_by_horizontal_length() {
        let d = extremal_diagram(7).unwrap();
        let st = d.length_stats();
        assert!(st.crossing_count <= st.total_horizontal - d.n());
        assert_eq!(GridDiagram::trivial().length_stats().total_all, 4);
    }

    #[test]
    fn canonical_orbit() {
        let d = g(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        let orbit: Vec<_> = Symmetry::ALL.iter().map(|s| d.transform(*s)).collect();
        let min = orbit.iter().min().unwrap().clone();
        assert_eq!(d.canonical(), min);
        for img in &orbit {
            assert_eq!(img.canonical(), min);
        }
        let t = GridDiagram::trivial();
        assert_eq!(t.canonical(), t);
        assert_eq!(t.orbit_size(), 1);
    }

    #[test]
    fn transform_group_closure() {
        let d = extremal_diagram(5).unwrap();
        for s in Symmetry::ALL {
            let img = d.transform(s);
            assert!(GridDiagram::new(5, &img.cols().collect::<Vec<_>>()).is_ok());
            assert_eq!(img.crossing_count(), d.crossing_count());
        }
        assert_eq!(d.transform(Symmetry::ROT180).transform(Symmetry::ROT180), d);
    }

    #[test]
    fn inverse_undoes_transform() {
        let d = g(5, &[(1, 3), (2, 5), (1, 4), (3, 5), (2, 4)]).unwrap();
        for s in Symmetry::ALL {
            assert_eq!(d.transform(s).transform(s.inverse()), d, "{}", s.name());
        }
    }
}
