//! Unknot recognition by monotone simplification.
//!
//! A knot diagram is trivial exactly when merges and exchanges, none of them
//! increasing the size, take it to the 2x2 diagram. Since a merge of a
//! trivial diagram is again trivial, the default search works one size at a
//! time: a breadth-first search through the size-preserving moves stops at
//! the first diagram that admits a merge, performs it, and starts over one
//! size down. Running out of diagrams at some size means the knot is not
//! trivial. Searches with a restricted move set explore every size at once.

use std::collections::HashMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grid::GridDiagram;
use crate::moves::{apply, available_moves_in, inverse, Axis, CromwellMove, End, MoveSet};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchLimits {
    pub max_states: usize,
    pub max_seconds: Option<f64>,
    /// Leave rotations out, so that only merges and exchanges are used.
    pub strict: bool,
    /// Also decide whether some witness avoids exterior exchanges.
    pub check_exterior: bool,
    pub jobs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_states: 4_000_000,
            max_seconds: None,
            strict: false,
            check_exterior: false,
            jobs: 1,
        }
    }
}

/// Rough heap cost of one visited diagram: its hash entry and its parent
/// link.
pub const STATE_BYTES: usize = 64;

impl SearchLimits {
    /// Lowers `max_states` so the visited set stays near `mb` megabytes.
    pub fn with_memory_mb(mut self, mb: usize) -> Self {
        let cap = mb.saturating_mul(1 << 20) / STATE_BYTES;
        self.max_states = self.max_states.min(cap.max(1));
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    NotTrivial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplificationWitness {
    pub start: GridDiagram,
    pub moves: Vec<CromwellMove>,
    pub uses_exterior: Vec<bool>,
}

impl SimplificationWitness {
    pub fn new(start: GridDiagram, moves: Vec<CromwellMove>) -> Self {
        let uses_exterior = moves.iter().map(CromwellMove::is_exterior).collect();
        SimplificationWitness {
            start,
            moves,
            uses_exterior,
        }
    }

    /// Replays the moves, checking that none is a divide and that the walk
    /// ends at the 2x2 diagram.
    pub fn replay(&self) -> Result<GridDiagram> {
        let mut cur = self.start.clone();
        for m in &self.moves {
            if m.size_delta() > 0 {
                return Err(Error::InapplicableMove(format!(
                    "{m}: witnesses may not divide"
                )));
            }
            cur = apply(&cur, m)?;
        }
        if !cur.is_trivial_2x2() {
            return Err(Error::InapplicableMove(format!(
                "witness ends at a diagram of size {}",
                cur.n()
            )));
        }
        Ok(cur)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": crate::io::to_json(&self.start),
            "moves": self.moves.iter().map(CromwellMove::to_json).collect::<Vec<_>>(),
            "uses_exterior": self.uses_exterior,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let start = crate::io::from_json(
            v.get("start")
                .ok_or_else(|| Error::Parse("witness: start".into()))?,
        )?;
        let moves = v
            .get("moves")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("witness: moves".into()))?
            .iter()
            .map(CromwellMove::from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplificationWitness::new(start, moves))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub verdict: Verdict,
    pub states_visited: usize,
    pub witness: Option<SimplificationWitness>,
    /// Present when requested through [`SearchLimits::check_exterior`] on a
    /// trivial input.
    pub exterior_required: Option<bool>,
}

impl SearchReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": match self.verdict {
                Verdict::Trivial => "trivial",
                Verdict::NotTrivial => "not_trivial",
            },
            "states_visited": self.states_visited,
            "witness": self.witness.as_ref().map(SimplificationWitness::to_json),
            "exterior_required": self.exterior_required,
        })
    }
}

struct Budget {
    limits: SearchLimits,
    started: Instant,
    visited: usize,
}

impl Budget {
    fn new(limits: &SearchLimits) -> Self {
        Budget {
            limits: *limits,
            started: Instant::now(),
            visited: 0,
        }
    }

    fn charge(&mut self, k: usize) -> Result<()> {
        self.visited += k;
        let timed_out = self
            .limits
            .max_seconds
            .is_some_and(|s| self.started.elapsed().as_secs_f64() > s);
        if self.visited > self.limits.max_states || timed_out {
            return Err(Error::LimitExceeded {
                states: self.visited,
            });
        }
        Ok(())
    }
}

/// Nodes of one breadth-first search, with the move that reached each.
struct Tree {
    parent: Vec<(u32, Option<CromwellMove>)>,
    seen: HashMap<u128, u32>,
}

impl Tree {
    fn new(root: &GridDiagram) -> Self {
        let mut seen = HashMap::new();
        seen.insert(root.canonical().key(), 0);
        Tree {
            parent: vec![(0, None)],
            seen,
        }
    }

    fn path(&self, mut node: u32) -> Vec<CromwellMove> {
        let mut out = Vec::new();
        while let (p, Some(m)) = self.parent[node as usize] {
            out.push(m);
            node = p;
        }
        out.reverse();
        out
    }
}

/// Successors of every diagram in `level`, in a fixed order whatever the
/// number of workers.
fn expand(
    level: &[(u32, GridDiagram)],
    set: MoveSet,
    jobs: usize,
) -> Vec<(u32, CromwellMove, GridDiagram, u128)> {
    let one = |(idx, d): &(u32, GridDiagram)| {
        available_moves_in(d, set)
            .into_iter()
            .filter_map(|m| {
                let e = apply(d, &m).ok()?;
                let k = e.canonical().key();
                Some((*idx, m, e, k))
            })
            .collect::<Vec<_>>()
    };
    if jobs > 1 && level.len() > 64 {
        level.par_iter().map(one).collect::<Vec<_>>().concat()
    } else {
        level.iter().flat_map(one).collect()
    }
}

/// Breadth-first search through `set` from `start` until `goal` holds.
/// Returns the path to the first goal diagram found, or `None` once every
/// reachable diagram has been seen.
fn bfs(
    start: &GridDiagram,
    set: MoveSet,
    goal: impl Fn(&GridDiagram) -> bool,
    budget: &mut Budget,
) -> Result<Option<(Vec<CromwellMove>, GridDiagram)>> {
    let mut tree = Tree::new(start);
    let mut level = vec![(0u32, start.clone())];
    budget.charge(1)?;
    while !level.is_empty() {
        if let Some((idx, d)) = level.iter().find(|(_, d)| goal(d)) {
            return Ok(Some((tree.path(*idx), d.clone())));
        }
        let succ = expand(&level, set, budget.limits.jobs);
        let mut next = Vec::new();
        for (p, m, e, k) in succ {
            if tree.seen.contains_key(&k) {
                continue;
            }
            let idx = tree.parent.len() as u32;
            tree.seen.insert(k, idx);
            tree.parent.push((p, Some(m)));
            next.push((idx, e));
        }
        budget.charge(next.len())?;
        level = next;
    }
    Ok(None)
}

fn same_size(set: MoveSet) -> MoveSet {
    MoveSet {
        interior_merges: false,
        exterior_merges: false,
        ..set
    }
}

/// Monotone descent: the moves to the 2x2 diagram, or `None` if some size
/// class is exhausted first.
fn descend(d: &GridDiagram, set: MoveSet, budget: &mut Budget) -> Result<Option<Vec<CromwellMove>>> {
    let mut cur = d.clone();
    let mut moves = Vec::new();
    let merges = |e: &GridDiagram| {
        available_moves_in(e, set)
            .into_iter()
            .find(CromwellMove::is_merge)
    };
    while !cur.is_trivial_2x2() {
        let Some((path, at)) = bfs(&cur, same_size(set), |e| merges(e).is_some(), budget)? else {
            return Ok(None);
        };
        let m = merges(&at).expect("goal admits a merge");
        cur = apply(&at, &m)?;
        moves.extend(path);
        moves.push(m);
    }
    Ok(Some(moves))
}

/// Decides whether a knot diagram is trivial and gives a witness if it is.
pub fn is_trivial(d: &GridDiagram, limits: &SearchLimits) -> Result<SearchReport> {
    if !d.is_knot() {
        return Err(Error::NotAKnot(d.component_count()));
    }
    let set = if limits.strict {
        MoveSet::MONOTONE
    } else {
        MoveSet::ALL
    };
    let mut budget = Budget::new(limits);
    let found = descend(d, set, &mut budget)?;
    log::debug!(
        "simplify n={}: {} after {} states",
        d.n(),
        if found.is_some() { "trivial" } else { "exhausted" },
        budget.visited
    );
    let mut report = SearchReport {
        verdict: if found.is_some() {
            Verdict::Trivial
        } else {
            Verdict::NotTrivial
        },
        states_visited: budget.visited,
        witness: found.map(|moves| SimplificationWitness::new(d.clone(), moves)),
        exterior_required: None,
    };
    if limits.check_exterior && report.verdict == Verdict::Trivial {
        report.exterior_required = Some(!reaches_without_exterior(d, &mut budget)?);
        report.states_visited = budget.visited;
    }
    Ok(report)
}

fn reaches_without_exterior(d: &GridDiagram, budget: &mut Budget) -> Result<bool> {
    let found = bfs(
        d,
        MoveSet::NO_EXTERIOR_EXCHANGE,
        GridDiagram::is_trivial_2x2,
        budget,
    )?;
    Ok(found.is_some())
}

/// Whether every monotone simplification of a trivial diagram uses an
/// exterior exchange: the search without exterior exchanges and rotations
/// runs out before reaching the 2x2 diagram.
pub fn needs_exterior(d: &GridDiagram, limits: &SearchLimits) -> Result<bool> {
    let report = is_trivial(
        d,
        &SearchLimits {
            check_exterior: false,
            ..*limits
        },
    )?;
    if report.verdict != Verdict::Trivial {
        return Err(Error::NotTrivialInput);
    }
    let mut budget = Budget::new(limits);
    Ok(!reaches_without_exterior(d, &mut budget)?)
}

/// Every divide of `d` that undoes to `d` by the corresponding merge.
pub fn divides(d: &GridDiagram) -> Vec<CromwellMove> {
    let n = d.n();
    let mut out = Vec::new();
    for axis in [Axis::Horizontal, Axis::Vertical] {
        for edge in 0..n {
            for at in 0..=n {
                for moved_end in [End::Low, End::High] {
                    for exterior in [false, true] {
                        if exterior && edge != 0 && edge != n - 1 {
                            continue;
                        }
                        let m = CromwellMove::Divide {
                            axis,
                            edge,
                            at,
                            moved_end,
                            exterior,
                        };
                        let Ok(e) = apply(d, &m) else { continue };
                        let back = inverse(d, &m).and_then(|inv| apply(&e, &inv));
                        if back.as_ref() == Ok(d) {
                            out.push(m);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Largest diagram [`scramble`] grows.
pub const SCRAMBLE_MAX_N: usize = 10;

/// A diagram of the trivial knot made by `steps` random divides, exchanges
/// and rotations of the 2x2 diagram. The same seed gives the same diagram.
pub fn scramble(seed: u64, steps: usize) -> GridDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = GridDiagram::trivial();
    for _ in 0..steps {
        let grow = d.n() < SCRAMBLE_MAX_N && (d.n() < 4 || rng.gen_bool(0.5));
        let options = if grow {
            divides(&d)
        } else {
            available_moves_in(
                &d,
                MoveSet {
                    interior_merges: false,
                    exterior_merges: false,
                    ..MoveSet::ALL
                },
            )
        };
        if let Some(m) = options.choose(&mut rng) {
            d = apply(&d, m).expect("listed moves apply");
        }
    }
    d
}
