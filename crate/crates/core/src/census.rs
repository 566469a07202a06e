//! Exhaustive enumeration of grid diagrams up to the symmetries of the
//! square, with the pruned search for stuck diagrams of the trivial knot.
//!
//! Diagrams are built one column at a time. Work is split by the first
//! column, each part runs on its own, and a diagram is kept only when it is
//! the canonical member of its orbit, so parts never need to talk.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grid::GridDiagram;
use crate::io::{parse_text, to_text};
use crate::moves::{available_moves, interleaved, is_stuck, Axis, CromwellMove, Interleaving};
use crate::simplify::{is_trivial, needs_exterior, SearchLimits, Verdict};

/// Largest size the census accepts.
pub const CENSUS_MAX_N: usize = 9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFilter {
    pub knots_only: bool,
    /// No merges of either kind and no interior exchanges. The 2x2 diagram
    /// is the end point of every simplification and is never stuck.
    pub stuck_only: bool,
    pub trivial_only: bool,
    /// The first and last columns cannot be exchanged.
    pub no_exterior_vertical: bool,
    /// The first and last rows can be exchanged.
    pub exterior_horizontal: bool,
}

impl CensusFilter {
    pub const ALL: CensusFilter = CensusFilter {
        knots_only: false,
        stuck_only: false,
        trivial_only: false,
        no_exterior_vertical: false,
        exterior_horizontal: false,
    };

    pub const KNOTS: CensusFilter = CensusFilter {
        knots_only: true,
        ..CensusFilter::ALL
    };

    pub const STUCK_TRIVIAL: CensusFilter = CensusFilter {
        knots_only: true,
        stuck_only: true,
        trivial_only: true,
        ..CensusFilter::ALL
    };

    /// Stuck trivial knots whose only exchange is the exterior horizontal one.
    pub const ONLY_EXTERIOR_HORIZONTAL: CensusFilter = CensusFilter {
        no_exterior_vertical: true,
        exterior_horizontal: true,
        ..CensusFilter::STUCK_TRIVIAL
    };

    /// Whether `d` passes every condition except triviality.
    pub fn admits_shape(&self, d: &GridDiagram) -> bool {
        if self.knots_only && !d.is_knot() {
            return false;
        }
        if self.stuck_only && (d.n() < 3 || !is_stuck(d)) {
            return false;
        }
        if self.no_exterior_vertical || self.exterior_horizontal {
            let ms = available_moves(d);
            let has = |axis| ms.contains(&CromwellMove::ExteriorExchange { axis });
            if self.no_exterior_vertical && has(Axis::Vertical) {
                return false;
            }
            if self.exterior_horizontal && !has(Axis::Horizontal) {
                return false;
            }
        }
        true
    }

    fn prunes(&self) -> bool {
        self.stuck_only
    }
}

/// Knobs for a census run that do not change its result.
#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    pub search: SearchLimits,
    /// Turn off in-construction pruning (for checking it).
    pub no_pruning: bool,
}

/// Counts for one census run. Orbit counts are over canonical forms; the
/// raw count weights each by its orbit size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCounts {
    pub orbit_count: usize,
    pub raw_count: usize,
    pub stuck_count: usize,
    pub determinant_one_count: usize,
    pub trivial_count: usize,
    pub trivial_stuck_count: usize,
}

impl CensusCounts {
    fn add(&mut self, o: &CensusCounts) {
        self.orbit_count += o.orbit_count;
        self.raw_count += o.raw_count;
        self.stuck_count += o.stuck_count;
        self.determinant_one_count += o.determinant_one_count;
        self.trivial_count += o.trivial_count;
        self.trivial_stuck_count += o.trivial_stuck_count;
    }
}

#[derive(Clone, Debug)]
pub struct CensusResult {
    pub n: usize,
    pub filter: CensusFilter,
    pub counts: CensusCounts,
    /// Canonical forms passing the whole filter, sorted.
    pub representatives: Vec<GridDiagram>,
    pub elapsed_s: f64,
    pub workers: usize,
}

impl CensusResult {
    pub fn summary_json(&self) -> Value {
        let c = &self.counts;
        json!({
            "n": self.n,
            "raw_count": c.raw_count,
            "orbit_count": c.orbit_count,
            "stuck_count": c.stuck_count,
            "determinant_one_count": c.determinant_one_count,
            "trivial_count": c.trivial_count,
            "trivial_stuck_count": c.trivial_stuck_count,
            "representatives": self.representatives.len(),
            "elapsed_s": self.elapsed_s,
            "workers": self.workers,
        })
    }
}

/// Column-by-column generator state.
struct Builder<'a> {
    n: usize,
    prune: bool,
    cols: Vec<(u8, u8)>,
    uses: Vec<u8>,
    first: Vec<u8>,
    spans: Vec<Option<(u8, u8)>>,
    emit: &'a mut dyn FnMut(GridDiagram),
}

impl Builder<'_> {
    fn bad_length(&self, len: usize) -> bool {
        self.prune && (len == 1 || len == self.n - 1)
    }

    /// Adjacent parallel edges must interleave (or share an end, which the
    /// length rule already excludes) in a stuck diagram.
    fn bad_pair(&self, a: (u8, u8), b: (u8, u8)) -> bool {
        self.prune
            && matches!(
                interleaved(
                    (a.0 as usize, a.1 as usize),
                    (b.0 as usize, b.1 as usize)
                ),
                Interleaving::Nested | Interleaving::Disjoint
            )
    }

    fn row_ok(&self, r: usize) -> bool {
        let Some(s) = self.spans[r] else { return true };
        let near = [r.checked_sub(1), (r + 1 < self.n).then_some(r + 1)];
        near.into_iter()
            .flatten()
            .filter_map(|q| self.spans[q])
            .all(|t| !self.bad_pair(s, t))
    }

    fn place(&mut self, col: usize, lo: usize, hi: usize) -> bool {
        let mut ok = true;
        let mut done = Vec::new();
        for r in [lo, hi] {
            self.uses[r] += 1;
            if self.uses[r] == 1 {
                self.first[r] = col as u8;
            } else {
                let p = self.first[r] as usize;
                self.spans[r] = Some((p as u8, col as u8));
                done.push(r);
                ok &= !self.bad_length(col - p);
            }
        }
        ok && done.iter().all(|&r| self.row_ok(r))
    }

    fn unplace(&mut self, lo: usize, hi: usize) {
        for r in [lo, hi] {
            if self.uses[r] == 2 {
                self.spans[r] = None;
            }
            self.uses[r] -= 1;
        }
    }

    fn run(&mut self, col: usize) {
        let n = self.n;
        if col == n {
            let d = GridDiagram::from_cols_unchecked(self.cols.clone());
            (self.emit)(d);
            return;
        }
        // Rows still unused need two more columns.
        let fresh = self.uses.iter().filter(|&&u| u == 0).count();
        if fresh > 0 && n - col < 2 {
            return;
        }
        for lo in 0..n {
            if self.uses[lo] == 2 {
                continue;
            }
            for hi in lo + 1..n {
                if self.uses[hi] == 2 || self.bad_length(hi - lo) {
                    continue;
                }
                let c = (lo as u8, hi as u8);
                if col > 0 && self.bad_pair(self.cols[col - 1], c) {
                    continue;
                }
                let ok = self.place(col, lo, hi);
                if ok {
                    self.cols.push(c);
                    self.run(col + 1);
                    self.cols.pop();
                }
                self.unplace(lo, hi);
            }
        }
    }
}

/// Every valid diagram of size `n` whose first column is `first`, passed to
/// `emit`. With `prune`, branches that cannot end in a stuck diagram are cut.
pub fn generate(n: usize, first: (usize, usize), prune: bool, emit: &mut dyn FnMut(GridDiagram)) {
    let mut b = Builder {
        n,
        prune,
        cols: Vec::with_capacity(n),
        uses: vec![0; n],
        first: vec![0; n],
        spans: vec![None; n],
        emit,
    };
    let (lo, hi) = first;
    if hi >= n || lo >= hi || b.bad_length(hi - lo) {
        return;
    }
    if b.place(0, lo, hi) {
        b.cols.push((lo as u8, hi as u8));
        b.run(1);
    }
}

fn first_columns(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|lo| (lo + 1..n).map(move |hi| (lo, hi)))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Part {
    n: usize,
    filter: CensusFilter,
    first: (usize, usize),
    counts: CensusCounts,
    found: Vec<String>,
}

fn run_part(
    n: usize,
    first: (usize, usize),
    filter: CensusFilter,
    opts: &CensusOptions,
) -> Result<Part> {
    let mut shapes = Vec::new();
    let prune = filter.prunes() && !opts.no_pruning;
    generate(n, first, prune, &mut |d| {
        if d == d.canonical() && filter.admits_shape(&d) {
            shapes.push(d);
        }
    });
    let mut counts = CensusCounts::default();
    let mut found = Vec::new();
    for d in shapes {
        counts.orbit_count += 1;
        counts.raw_count += d.orbit_size();
        let stuck = d.n() >= 3 && is_stuck(&d);
        counts.stuck_count += stuck as usize;
        if filter.trivial_only {
            let det = knot_determinant(&d)?;
            if det != 1 {
                continue;
            }
            counts.determinant_one_count += 1;
            let search = SearchLimits {
                jobs: 1,
                check_exterior: false,
                ..opts.search
            };
            if is_trivial(&d, &search)?.verdict != Verdict::Trivial {
                continue;
            }
            counts.trivial_count += 1;
            counts.trivial_stuck_count += stuck as usize;
        }
        found.push(to_text(&d));
    }
    Ok(Part {
        n,
        filter,
        first,
        counts,
        found,
    })
}

fn load_checkpoint(path: &Path, n: usize, filter: CensusFilter) -> Result<BTreeMap<(usize, usize), Part>> {
    let mut out = BTreeMap::new();
    let Ok(text) = fs::read_to_string(path) else {
        return Ok(out);
    };
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let part: Part = serde_json::from_str(line)?;
        if part.n == n && part.filter == filter {
            out.insert(part.first, part);
        }
    }
    Ok(out)
}

/// Enumerates canonical diagrams of size `n` passing `filter`, calling `sink`
/// on each in sorted order.
pub fn enumerate(
    n: usize,
    filter: CensusFilter,
    opts: &CensusOptions,
    sink: &mut dyn FnMut(&GridDiagram),
) -> Result<CensusResult> {
    if !(2..=CENSUS_MAX_N).contains(&n) {
        return Err(Error::Size(n));
    }
    let started = Instant::now();
    let mut parts = match &opts.checkpoint {
        Some(p) => load_checkpoint(p, n, filter)?,
        None => BTreeMap::new(),
    };
    let todo: Vec<(usize, usize)> = first_columns(n)
        .into_iter()
        .filter(|f| !parts.contains_key(f))
        .collect();
    let workers = opts.jobs.max(1);
    log::debug!(
        "census n={n}: {} parts to run, {} from checkpoint, {workers} workers",
        todo.len(),
        parts.len()
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::ResourceLimit(e.to_string()))?;
    let file = match &opts.checkpoint {
        Some(p) => Some(std::sync::Mutex::new(
            fs::OpenOptions::new().create(true).append(true).open(p)?,
        )),
        None => None,
    };
    let fresh: Vec<Part> = pool.install(|| {
        todo.par_iter()
            .map(|&first| {
                let part = run_part(n, first, filter, opts)?;
                log::debug!("census n={n}: part {first:?} done, {} kept", part.found.len());
                if let Some(f) = &file {
                    let line = serde_json::to_string(&part)?;
                    let mut f = f.lock().expect("checkpoint lock");
                    writeln!(f, "{line}")?;
                    f.flush()?;
                }
                Ok(part)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    for p in fresh {
        parts.insert(p.first, p);
    }
    let mut counts = CensusCounts::default();
    let mut representatives = Vec::new();
    for p in parts.values() {
        counts.add(&p.counts);
        for t in &p.found {
            representatives.push(parse_text(t)?);
        }
    }
    representatives.sort();
    for d in &representatives {
        sink(d);
    }
    Ok(CensusResult {
        n,
        filter,
        counts,
        representatives,
        elapsed_s: started.elapsed().as_secs_f64(),
        workers,
    })
}

/// |Δ(−1)| from the Goeritz matrix of the checkerboard colouring.
///
/// Faces of the diagram are unions of unit cells of the grid, with one ring
/// of cells outside it. A cell is shaded when a vertical ray from its centre
/// meets the diagram an odd number of times. Each crossing joins the two
/// unshaded cells at opposite corners and carries the sign +1 when those are
/// the upper-left and lower-right corners (where the vertical over-strand
/// turns when rotated anticlockwise).
pub fn knot_determinant(d: &GridDiagram) -> Result<u64> {
    if !d.is_knot() {
        return Err(Error::NotAKnot(d.component_count()));
    }
    let n = d.n() as i64;
    let rows = d.rows();
    let cols: Vec<(usize, usize)> = d.cols().collect();
    // Cell (x, y) is [x, x+1] x [y, y+1] for x, y in -1..n.
    let side = (n + 1) as usize;
    let idx = |x: i64, y: i64| ((x + 1) as usize) * side + (y + 1) as usize;
    let v_wall = |x: i64, y: i64| {
        // Unit segment x = x, from y to y + 1.
        (0..n).contains(&x) && {
            let (lo, hi) = cols[x as usize];
            lo as i64 <= y && y < hi as i64
        }
    };
    let h_wall = |x: i64, y: i64| {
        (0..n).contains(&y) && {
            let (a, b) = rows[y as usize];
            a as i64 <= x && x < b as i64
        }
    };
    let mut uf: Vec<usize> = (0..side * side).collect();
    fn find(uf: &mut [usize], mut a: usize) -> usize {
        while uf[a] != a {
            uf[a] = uf[uf[a]];
            a = uf[a];
        }
        a
    }
    let join = |uf: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(uf, a), find(uf, b));
        uf[ra] = rb;
    };
    for x in -1..n {
        for y in -1..n {
            if x + 1 < n && !v_wall(x + 1, y) {
                join(&mut uf, idx(x, y), idx(x + 1, y));
            }
            if y + 1 < n && !h_wall(x, y + 1) {
                join(&mut uf, idx(x, y), idx(x, y + 1));
            }
        }
    }
    let shaded = |x: i64, y: i64| ((y + 1)..n).filter(|&r| h_wall(x, r)).count() % 2 == 1;
    let mut white: BTreeMap<usize, usize> = BTreeMap::new();
    for x in -1..n {
        for y in -1..n {
            if !shaded(x, y) {
                let r = find(&mut uf, idx(x, y));
                let k = white.len();
                white.entry(r).or_insert(k);
            }
        }
    }
    let m = white.len();
    let mut g = vec![vec![0i128; m]; m];
    for c in d.crossings() {
        let (x, y) = (c.col as i64, c.row as i64);
        let (corners, eta) = if !shaded(x - 1, y) {
            ([(x - 1, y), (x, y - 1)], 1)
        } else {
            ([(x, y), (x - 1, y - 1)], -1)
        };
        let [p, q] = corners.map(|(a, b)| white[&find(&mut uf, idx(a, b))]);
        if p != q {
            g[p][q] -= eta;
            g[q][p] -= eta;
            g[p][p] += eta;
            g[q][q] += eta;
        }
    }
    let minor: Vec<Vec<i128>> = g.iter().skip(1).map(|r| r[1..].to_vec()).collect();
    Ok(bareiss(minor).unsigned_abs() as u64)
}

/// Determinant by fraction-free elimination; the empty matrix has determinant 1.
pub fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let k = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for i in 0..k {
        if a[i][i] == 0 {
            let Some(p) = (i + 1..k).find(|&r| a[r][i] != 0) else {
                return 0;
            };
            a.swap(i, p);
            sign = -sign;
        }
        for r in i + 1..k {
            for c in i + 1..k {
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) / prev;
            }
            a[r][i] = 0;
        }
        prev = a[i][i];
    }
    if k == 0 {
        1
    } else {
        sign * a[k - 1][k - 1]
    }
}

#[derive(Clone, Debug)]
pub struct Theorem2Report {
    pub n: usize,
    pub counts: CensusCounts,
    pub stuck_trivial: Vec<GridDiagram>,
    /// Members admitting both exterior exchanges.
    pub both_exterior: usize,
    /// Members whose simplification needs an exterior exchange.
    pub needing_exterior: usize,
    pub holds: bool,
}

impl Theorem2Report {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "stuck_count": self.counts.stuck_count,
            "trivial_stuck_count": self.counts.trivial_stuck_count,
            "both_exterior_exchanges": self.both_exterior,
            "needing_exterior": self.needing_exterior,
            "holds": self.holds,
            "members": self.stuck_trivial.iter().map(crate::io::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Checks the stuck-trivial claims at size `n`: none for `n <= 7`; for
/// `n = 8` a non-empty set, each member admitting both exterior exchanges
/// and needing one.
pub fn verify_theorem2(n: usize, opts: &CensusOptions) -> Result<Theorem2Report> {
    if !(2..=8).contains(&n) {
        return Err(Error::Size(n));
    }
    let r = enumerate(n, CensusFilter::STUCK_TRIVIAL, opts, &mut |_| {})?;
    let mut both_exterior = 0;
    let mut needing_exterior = 0;
    for d in &r.representatives {
        let ms = available_moves(d);
        let both = [Axis::Horizontal, Axis::Vertical]
            .iter()
            .all(|&axis| ms.contains(&CromwellMove::ExteriorExchange { axis }));
        both_exterior += both as usize;
        needing_exterior += needs_exterior(d, &opts.search)? as usize;
    }
    let k = r.representatives.len();
    let holds = if n <= 7 {
        k == 0
    } else {
        k > 0 && both_exterior == k && needing_exterior == k
    };
    Ok(Theorem2Report {
        n,
        counts: r.counts,
        stuck_trivial: r.representatives,
        both_exterior,
        needing_exterior,
        holds,
    })
}

/// A trivial diagram of size `n` that is stuck and whose only exchange is
/// the exterior horizontal one, if the pruned census finds one.
pub fn find_only_exterior_horizontal(n: usize, opts: &CensusOptions) -> Result<Option<GridDiagram>> {
    let r = enumerate(n, CensusFilter::ONLY_EXTERIOR_HORIZONTAL, opts, &mut |_| {})?;
    Ok(r.representatives.into_iter().next())
}

/// Largest crossing count and total edge length over all diagrams of size `n`.
pub fn max_stats(n: usize, opts: &CensusOptions) -> Result<(usize, usize)> {
    if !(2..=6).contains(&n) {
        return Err(Error::Size(n));
    }
    let mut best = (0, 0);
    enumerate(n, CensusFilter::ALL, opts, &mut |d| {
        let s = d.length_stats();
        best = (best.0.max(s.crossing_count), best.1.max(s.total_all));
    })?;
    Ok(best)
}
