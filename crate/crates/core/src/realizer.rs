//! Realization of exterior Cromwell moves as Reidemeister sequences.
//!
//! Each move is split into jumps of a single strand. For every jump the
//! strand is swept through its region face by face, and every intermediate
//! diagram is written down as a signed Gauss code. Each step is then turned
//! into an explicit Reidemeister move that is checked against the codes on
//! both sides of it.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::bounds::{jump_decomposition, sigma_of, JumpSpec, SigmaBreakdown};
use crate::error::{Error, Result};
use crate::geometry::to_planar;
use crate::grid::GridDiagram;
use crate::moves::CromwellMove;
use crate::planar::{Anchor, GaussCode, Label, Occ, PlanarDiagram, ReidemeisterKind, ReidemeisterMove};
use crate::qmap::QMap;
use crate::sweep::{Op, Sweep};

/// Moves spent on one jump, next to the counts that bound them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpReport {
    pub moves: usize,
    pub r3: usize,
    pub r1: usize,
    pub sigma: SigmaBreakdown,
    /// Set when the jump was carried out through a degenerate diagram
    /// instead of the sweep.
    pub termination: Option<Termination>,
}

/// Degenerate diagrams a jump may pass through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The sweep overran its budget, so the host is taken apart to the bare
    /// circle and the result is drawn from it, all by R1 and R2 moves.
    CrossingFree,
    /// As above, through a diagram with crossings that both the host and
    /// the result reduce to.
    SharedReduction,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::CrossingFree => "crossing_free",
            Termination::SharedReduction => "shared_reduction",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RealizationTrace {
    pub initial: PlanarDiagram,
    pub moves: Vec<ReidemeisterMove>,
    pub final_diagram: PlanarDiagram,
    pub jumps: Vec<JumpReport>,
}

impl RealizationTrace {
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out: BTreeMap<&'static str, usize> = ReidemeisterKind::ALL
            .iter()
            .map(|k| (k.name(), 0))
            .collect();
        for m in &self.moves {
            *out.entry(m.kind().name()).or_default() += 1;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let final_gauss = self
            .final_diagram
            .gauss_code()
            .map(|c| c.to_string())
            .unwrap_or_default();
        json!({
            "initial": self.initial.to_json(),
            "moves": self.moves.iter().map(ReidemeisterMove::to_json).collect::<Vec<_>>(),
            "final_gauss": final_gauss,
        })
    }

    /// Replays the stored moves from the stored initial diagram.
    pub fn replay(&self) -> Result<PlanarDiagram> {
        replay(&self.initial, &self.moves)
    }
}

/// Applies `moves` in order, reporting the first one that is not legal.
pub fn replay(initial: &PlanarDiagram, moves: &[ReidemeisterMove]) -> Result<PlanarDiagram> {
    let mut cur = initial.clone();
    for (step, mv) in moves.iter().enumerate() {
        cur = cur
            .apply(mv)
            .map_err(|reason| Error::IllegalMoveAtSite { step, reason })?;
    }
    Ok(cur)
}

/// Reads a trace written by [`RealizationTrace::to_json`] and replays it.
pub fn replay_json(v: &Value) -> Result<(PlanarDiagram, Vec<ReidemeisterMove>, PlanarDiagram)> {
    let bad = |w: &str| Error::Parse(format!("trace: missing {w}"));
    let initial = PlanarDiagram::from_json(v.get("initial").ok_or_else(|| bad("initial"))?)?;
    let moves = v
        .get("moves")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("moves"))?
        .iter()
        .map(ReidemeisterMove::from_json)
        .collect::<Result<Vec<_>>>()?;
    let fin = replay(&initial, &moves)?;
    if let Some(expected) = v.get("final_gauss").and_then(Value::as_str) {
        let got = fin.gauss_code().map(|c| c.to_string()).unwrap_or_default();
        if got != expected {
            return Err(Error::IllegalMoveAtSite {
                step: moves.len(),
                reason: format!("final code {got} differs from recorded {expected}"),
            });
        }
    }
    Ok((initial, moves, fin))
}

fn positions(d: &PlanarDiagram) -> HashMap<Occ, (usize, usize)> {
    let mut out = HashMap::new();
    for (c, comp) in d.components().iter().enumerate() {
        for (k, &o) in comp.iter().enumerate() {
            out.insert(o, (c, k));
        }
    }
    out
}

/// Occurrences `x` then `y` adjacent in one component of `d`, as (component, index of `x`).
fn adjacent(d: &PlanarDiagram, x: Occ, y: Occ) -> Option<(usize, usize)> {
    let pos = positions(d);
    let &(c, k) = pos.get(&x)?;
    let comp = &d.components()[c];
    (comp[(k + 1) % comp.len()] == y).then_some((c, k))
}

fn anchor_before(d: &PlanarDiagram, c: usize, k: usize) -> Anchor {
    let comp = &d.components()[c];
    Anchor::After(comp[(k + comp.len() - 1) % comp.len()])
}

/// The Reidemeister move taking `before` to `after`, given what the sweep did.
fn derive(before: &PlanarDiagram, after: &PlanarDiagram, op: Op) -> Result<ReidemeisterMove> {
    let fail = |why: String| Error::SweepObstruction(why);
    let mv = match op {
        Op::R1Delete(label) => ReidemeisterMove::R1Delete { label },
        Op::R2Delete(first, second) => ReidemeisterMove::R2Delete { first, second },
        Op::R3(labels) => {
            let tops = before.r3_tops(labels);
            let pick = |top| ReidemeisterMove::R3 { labels, top };
            if tops.len() < 2 {
                pick(None)
            } else {
                tops.into_iter()
                    .map(|t| pick(Some(t)))
                    .find(|mv| before.apply(mv).is_ok_and(|d| d.cyclic_eq(after)))
                    .unwrap_or(pick(None))
            }
        }
        Op::R1Create(label) => {
            let o = Occ { label, over: true };
            let u = Occ { label, over: false };
            let (c, k, over_first) = match adjacent(after, o, u) {
                Some((c, k)) => (c, k, true),
                None => {
                    let (c, k) = adjacent(after, u, o)
                        .ok_or_else(|| fail(format!("kink {label} is not a loop")))?;
                    (c, k, false)
                }
            };
            let anchor = if after.components()[c].len() == 2 {
                Anchor::Start(c)
            } else {
                anchor_before(after, c, k)
            };
            let sign = after.sign(label).expect("created crossing has a sign");
            ReidemeisterMove::R1Create {
                label,
                sign,
                over_first,
                anchor,
            }
        }
        Op::R2Create(y1, y2) => {
            let ov = |l| Occ {
                label: l,
                over: true,
            };
            let un = |l| Occ {
                label: l,
                over: false,
            };
            let ((co, ko), first, second) = match adjacent(after, ov(y1), ov(y2)) {
                Some(p) => (p, y1, y2),
                None => (
                    adjacent(after, ov(y2), ov(y1))
                        .ok_or_else(|| fail("over pair split".into()))?,
                    y2,
                    y1,
                ),
            };
            let ((cu, ku), under_reversed) = match adjacent(after, un(first), un(second)) {
                Some(p) => (p, false),
                None => (
                    adjacent(after, un(second), un(first))
                        .ok_or_else(|| fail("under pair split".into()))?,
                    true,
                ),
            };
            let new = |a: Anchor| matches!(a, Anchor::After(o) if o.label == y1 || o.label == y2);
            let mut over_anchor = anchor_before(after, co, ko);
            let under_anchor = anchor_before(after, cu, ku);
            if new(over_anchor) && new(under_anchor) {
                over_anchor = Anchor::Start(co);
            }
            let sign_first = after.sign(first).expect("created crossing has a sign");
            ReidemeisterMove::R2Create {
                first,
                second,
                sign_first,
                over_anchor,
                under_anchor,
                under_reversed,
            }
        }
    };
    let got = before
        .apply(&mv)
        .map_err(|e| fail(format!("{mv:?}: {e}")))?;
    if !got.cyclic_eq(after) {
        return Err(fail(format!("{mv:?} does not produce the swept diagram")));
    }
    Ok(mv)
}

struct JumpRun {
    states: Vec<PlanarDiagram>,
    ops: Vec<Op>,
    max_label: Label,
    report: JumpReport,
}

fn run_jump(spec: &JumpSpec) -> Result<JumpRun> {
    let map = QMap::build(spec)?;
    let sigma = sigma_of(&map);
    let swap = spec.frame.transpose;
    let frame_code = |d: PlanarDiagram| if swap { d.swap_over_under() } else { d };
    let mut sweep = Sweep::new(&map);
    let mut states = vec![frame_code(sweep.code())];
    let mut ops = Vec::new();
    let cap = 8 * (sigma.sigma_simple + sigma.boundary_points) + 16;
    while let Some(op) = sweep.step()? {
        ops.push(op);
        states.push(frame_code(sweep.code()));
        if ops.len() > cap {
            return Err(Error::SweepObstruction(format!(
                "no progress after {cap} moves"
            )));
        }
    }
    let mut termination = None;
    let over = ops.len() > sigma.sigma_simple;
    if let Some((path, path_ops, kind)) = over
        .then(|| shortcut(&states[0], &states[states.len() - 1], ops.len()))
        .flatten()
    {
        termination = Some(kind);
        states = path;
        ops = path_ops;
    }
    let r3 = ops.iter().filter(|o| matches!(o, Op::R3(_))).count();
    let r1 = ops
        .iter()
        .filter(|o| matches!(o, Op::R1Create(_) | Op::R1Delete(_)))
        .count();
    let report = JumpReport {
        moves: ops.len(),
        r3,
        r1,
        sigma,
        termination,
    };
    let max_label = states
        .iter()
        .map(PlanarDiagram::max_label)
        .max()
        .unwrap_or(0)
        .max(sweep.max_label());
    Ok(JumpRun {
        states,
        ops,
        max_label,
        report,
    })
}

type Path = (Vec<PlanarDiagram>, Vec<Op>);

/// Diagrams reachable from `p` by at most `depth` R1 and R2 deletions, keyed
/// by canonical code, each with one shortest path to it.
fn deletions(p: &PlanarDiagram, depth: usize) -> HashMap<GaussCode, Path> {
    const CAP: usize = 20_000;
    let mut seen: HashMap<GaussCode, Path> = HashMap::new();
    let Ok(code) = p.gauss_code() else {
        return seen;
    };
    seen.insert(code.clone(), (vec![p.clone()], Vec::new()));
    let mut frontier = vec![code];
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for code in frontier {
            let (states, ops) = seen[&code].clone();
            let here = states.last().expect("path has a state").clone();
            let labels: Vec<Label> = here.labels().collect();
            let mut steps: Vec<Op> = labels.iter().map(|&l| Op::R1Delete(l)).collect();
            for (k, &a) in labels.iter().enumerate() {
                steps.extend(labels[k + 1..].iter().map(|&b| Op::R2Delete(a, b)));
            }
            for op in steps {
                let mv = match op {
                    Op::R1Delete(label) => ReidemeisterMove::R1Delete { label },
                    Op::R2Delete(first, second) => ReidemeisterMove::R2Delete { first, second },
                    _ => unreachable!(),
                };
                let Ok(next) = here.apply(&mv) else { continue };
                let Ok(c) = next.gauss_code() else { continue };
                if seen.contains_key(&c) || seen.len() >= CAP {
                    continue;
                }
                let mut path = (states.clone(), ops.clone());
                path.0.push(next);
                path.1.push(op);
                seen.insert(c.clone(), path);
                next_frontier.push(c);
            }
        }
        frontier = next_frontier;
    }
    seen
}

/// A path from `host` to `last` made of R1 and R2 moves only, shorter than
/// `limit`: deletions down to a diagram both reduce to, then creations back
/// up. The states end at a relabelling of `last`.
fn shortcut(
    host: &PlanarDiagram,
    last: &PlanarDiagram,
    limit: usize,
) -> Option<(Vec<PlanarDiagram>, Vec<Op>, Termination)> {
    let floor = host.labels().count().abs_diff(last.labels().count()).div_ceil(2);
    if floor >= limit {
        return None;
    }
    let depth = limit - 1;
    let up = deletions(host, depth);
    let down = deletions(last, depth);
    let ((path, path_ops), (back, back_ops)) = up
        .iter()
        .filter_map(|(c, a)| down.get(c).map(|b| (a, b)))
        .filter(|(a, b)| a.1.len() + b.1.len() < limit)
        .min_by_key(|(a, b)| (a.1.len() + b.1.len(), a.0.last().map(|p| p.labels().count())))?;
    let meet = path.last().expect("path has a state");
    let (rev, map) = meet.find_isomorphism(back.last().expect("path has a state"))?;
    let offset = path
        .iter()
        .chain(back)
        .map(PlanarDiagram::max_label)
        .max()
        .unwrap_or(0);
    let f = |l: Label| map.get(&l).copied().unwrap_or(l + offset);
    let tr = |p: &PlanarDiagram| {
        let p = p.relabel(&p.labels().map(|l| (l, f(l))).collect());
        if rev {
            p.reversed()
        } else {
            p
        }
    };
    let mut states = path.clone();
    states.extend(back.iter().rev().skip(1).map(tr));
    let mut ops = path_ops.clone();
    ops.extend(back_ops.iter().rev().map(|&o| match o {
        Op::R1Delete(l) => Op::R1Create(f(l)),
        Op::R2Delete(a, b) => Op::R2Create(f(a), f(b)),
        other => other,
    }));
    let kind = if meet.labels().next().is_none() {
        Termination::CrossingFree
    } else {
        Termination::SharedReduction
    };
    Some((states, ops, kind))
}

fn map_op(op: Op, f: &impl Fn(Label) -> Label) -> Op {
    match op {
        Op::R1Create(l) => Op::R1Create(f(l)),
        Op::R1Delete(l) => Op::R1Delete(f(l)),
        Op::R2Create(a, b) => Op::R2Create(f(a), f(b)),
        Op::R2Delete(a, b) => Op::R2Delete(f(a), f(b)),
        Op::R3([a, b, c]) => Op::R3([f(a), f(b), f(c)]),
    }
}

/// Realizes an exterior move (or any move, as a sequence of jumps) on a grid
/// diagram as an explicit, checked Reidemeister sequence.
pub fn realize(d: &GridDiagram, m: &CromwellMove) -> Result<RealizationTrace> {
    let specs = jump_decomposition(d, m)?;
    let mut states: Vec<PlanarDiagram> = Vec::new();
    let mut ops: Vec<Op> = Vec::new();
    let mut tags: Vec<usize> = Vec::new();
    let mut jumps = Vec::new();
    let mut used: Label = 0;
    for spec in &specs {
        let run = run_jump(spec)?;
        let (reverse, f): (bool, Box<dyn Fn(Label) -> Label>) = match states.last() {
            None => (false, Box::new(|l| l)),
            Some(prev) => {
                let (rev, map) = prev
                    .find_isomorphism(&run.states[0])
                    .ok_or_else(|| Error::NotAKnot(prev.components().len()))?;
                let offset = used;
                (
                    rev,
                    Box::new(move |l| map.get(&l).copied().unwrap_or(l + offset)),
                )
            }
        };
        let tr = |p: &PlanarDiagram| {
            let p = p.relabel(&p.labels().map(|l| (l, f(l))).collect());
            if reverse {
                p.reversed()
            } else {
                p
            }
        };
        let mut iter = run.states.iter();
        let first = tr(iter.next().expect("initial state"));
        if states.is_empty() {
            states.push(first);
        }
        states.extend(iter.map(tr));
        tags.extend(run.ops.iter().map(|_| jumps.len()));
        ops.extend(run.ops.iter().map(|&o| map_op(o, &f)));
        used = used.max(f(run.max_label)).max(
            states
                .iter()
                .map(PlanarDiagram::max_label)
                .max()
                .unwrap_or(0),
        );
        jumps.push(run.report);
    }
    let target = to_planar(&crate::moves::apply(d, m)?).gauss_code().ok();
    if states.last().and_then(|p| p.gauss_code().ok()) != target {
        settle_kink(&mut states, &mut ops, &mut tags, target.as_ref())?;
    }
    cut_loops(&mut states, &mut ops, &mut tags);
    for (k, jump) in jumps.iter_mut().enumerate() {
        let own = || ops.iter().zip(&tags).filter(|&(_, &t)| t == k).map(|(o, _)| o);
        jump.moves = own().count();
        jump.r3 = own().filter(|o| matches!(o, Op::R3(_))).count();
        jump.r1 = own()
            .filter(|o| matches!(o, Op::R1Create(_) | Op::R1Delete(_)))
            .count();
    }
    let mut moves = Vec::with_capacity(ops.len());
    for (i, &op) in ops.iter().enumerate() {
        moves.push(derive(&states[i], &states[i + 1], op)?);
    }
    let initial = states[0].clone();
    let final_diagram = states.pop().expect("at least one state");
    Ok(RealizationTrace {
        initial,
        moves,
        final_diagram,
        jumps,
    })
}

/// When a merge folds its new edge back over a column, the swept diagram and
/// the merged one differ by a kink next to the end of the strand. The kink is
/// dropped from the sweep if that leaves every step valid, and removed by an
/// extra move otherwise.
fn settle_kink(
    states: &mut Vec<PlanarDiagram>,
    ops: &mut Vec<Op>,
    tags: &mut Vec<usize>,
    target: Option<&crate::planar::GaussCode>,
) -> Result<()> {
    let last = states.last().expect("at least one state").clone();
    let created = ops.iter().filter_map(|o| {
        if let Op::R1Create(l) = *o {
            Some(l)
        } else {
            None
        }
    });
    let kink = created
        .chain(last.labels())
        .find(|&l| {
            last.sign(l).is_some()
                && last
                    .apply(&ReidemeisterMove::R1Delete { label: l })
                    .is_ok_and(|p| p.gauss_code().ok().as_ref() == target)
        })
        .ok_or_else(|| Error::SweepObstruction("swept diagram does not match the move".into()))?;
    if let Some(i) = ops.iter().position(|&o| o == Op::R1Create(kink)) {
        let trimmed: Vec<PlanarDiagram> = states[i + 2..]
            .iter()
            .map(|p| {
                p.apply(&ReidemeisterMove::R1Delete { label: kink })
                    .unwrap_or_else(|_| p.without_labels(&[kink]))
            })
            .collect();
        let mut cand_states = states[..=i].to_vec();
        cand_states.extend(trimmed);
        let mut cand_ops = ops.clone();
        cand_ops.remove(i);
        let ok = cand_ops
            .iter()
            .enumerate()
            .all(|(k, &op)| derive(&cand_states[k], &cand_states[k + 1], op).is_ok());
        if ok {
            *states = cand_states;
            *ops = cand_ops;
            tags.remove(i);
            return Ok(());
        }
    }
    tags.push(tags.last().copied().unwrap_or(0));
    ops.push(Op::R1Delete(kink));
    states.push(
        last.apply(&ReidemeisterMove::R1Delete { label: kink })
            .expect("checked above"),
    );
    Ok(())
}

/// Removes detours: whenever a later diagram is isomorphic to an earlier
/// one, the moves in between are dropped and the rest are relabelled onto
/// the earlier diagram. A cut is kept only if every remaining step still
/// derives to a legal move, and never across an R3.
fn cut_loops(states: &mut Vec<PlanarDiagram>, ops: &mut Vec<Op>, tags: &mut Vec<usize>) {
    let mut i = 0;
    while i < ops.len() {
        let size = |p: &PlanarDiagram| p.labels().count();
        let mut j = ops.len();
        while j > i {
            let keeps_r3 = ops[i..j].iter().all(|o| !matches!(o, Op::R3(_)));
            if keeps_r3 && size(&states[j]) == size(&states[i]) {
                if let Some(cut) = try_cut(states, ops, i, j) {
                    *states = cut.0;
                    *ops = cut.1;
                    tags.drain(i..j);
                    break;
                }
            }
            j -= 1;
        }
        i += 1;
    }
}

fn try_cut(
    states: &[PlanarDiagram],
    ops: &[Op],
    i: usize,
    j: usize,
) -> Option<(Vec<PlanarDiagram>, Vec<Op>)> {
    let (rev, map) = states[i].find_isomorphism(&states[j])?;
    let offset = states.iter().map(PlanarDiagram::max_label).max().unwrap_or(0);
    let f = |l: Label| map.get(&l).copied().unwrap_or(l + offset);
    let tr = |p: &PlanarDiagram| {
        let p = p.relabel(&p.labels().map(|l| (l, f(l))).collect());
        if rev {
            p.reversed()
        } else {
            p
        }
    };
    let mut cand_states = states[..=i].to_vec();
    cand_states.extend(states[j + 1..].iter().map(tr));
    let mut cand_ops = ops[..i].to_vec();
    cand_ops.extend(ops[j..].iter().map(|&o| map_op(o, &f)));
    let ok = (i..cand_ops.len())
        .all(|k| derive(&cand_states[k], &cand_states[k + 1], cand_ops[k]).is_ok());
    ok.then_some((cand_states, cand_ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::available_moves;

    fn check(d: &GridDiagram, m: &CromwellMove) -> RealizationTrace {
        let t = realize(d, m).unwrap_or_else(|e| panic!("{d:?} {m:?}: {e}"));
        assert_eq!(
            t.initial.gauss_code().unwrap(),
            to_planar(d).gauss_code().unwrap()
        );
        let fin = t.replay().unwrap();
        assert!(fin.cyclic_eq(&t.final_diagram));
        let target = to_planar(&crate::moves::apply(d, m).unwrap());
        assert_eq!(
            fin.gauss_code().unwrap(),
            target.gauss_code().unwrap(),
            "{d:?} {m:?}"
        );
        t
    }

    #[test]
    fn extremal_exterior_moves_replay() {
        for n in 3..=6 {
            let d = crate::grid::extremal_diagram(n).unwrap();
            if d.component_count() != 1 {
                continue;
            }
            for m in available_moves(&d) {
                if m.is_exterior() {
                    check(&d, &m);
                }
            }
        }
    }

    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }

    pub(super) fn knots(n: usize) -> Vec<GridDiagram> {
        let ps = perms(n);
        let mut out = Vec::new();
        for x in &ps {
            for o in &ps {
                let cols: Vec<(usize, usize)> =
                    (0..n).map(|i| (x[i].min(o[i]), x[i].max(o[i]))).collect();
                if let Ok(d) = GridDiagram::new(n, &cols) {
                    if d.is_knot() && x[0] < o[0] {
                        out.push(d);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn small_knots_replay_within_budget() {
        let mut worst = i64::MIN;
        for n in 2..=5 {
            for d in knots(n) {
                for m in available_moves(&d) {
                    if !m.is_exterior() {
                        continue;
                    }
                    let t = check(&d, &m);
                    let budget: usize = t.jumps.iter().map(|j| j.sigma.sigma_simple).sum();
                    assert!(t.moves.len() <= budget, "{d:?} {m:?} {:?}", t.jumps);
                    for j in t.jumps.iter().filter(|j| j.termination.is_none()) {
                        assert_eq!(j.r3, j.sigma.v, "{d:?} {m:?}");
                        if j.sigma.e_partial == 0 {
                            assert_eq!(j.r1, 0, "{d:?} {m:?}");
                        }
                    }
                    worst = worst.max(t.moves.len() as i64 - budget as i64);
                }
            }
        }
        eprintln!("least slack against the budget: {}", -worst);
    }
}
