//! Degenerations: a simple branch point of `g` runs into `0`, `1/256` or
//! `∞`, joining two cycles of the local monodromy there.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hodge::HodgeStatus;
use crate::hurwitz::{for_each_cover, Permutation, PermutationTuple, SearchOptions, SearchOutcome};
use crate::profile::{BranchPoint, RamificationProfile, SmoothnessReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialFlag {
    /// A single node whose threefold admits no crepant resolution.
    NodeNoCrepantResolution,
    /// Total ramification over `0` and `∞` with an extra `Z/5Z` action.
    ExtraCyclicSymmetry,
    /// Limit with maximally unipotent monodromy over `0`.
    MaximallyUnipotentLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergedParts {
    /// Indices into the target partition before the merge.
    pub indices: (usize, usize),
    pub parts: (usize, usize),
    pub result: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionReport {
    pub before: RamificationProfile,
    pub after: RamificationProfile,
    pub target: BranchPoint,
    pub merged: MergedParts,
    pub after_cy: bool,
    /// `None` when the result is not Calabi-Yau.
    pub after_smoothness: Option<SmoothnessReport>,
    pub hodge_before: HodgeStatus,
    pub hodge_after: HodgeStatus,
    pub special_flags: BTreeSet<SpecialFlag>,
    pub notes: Vec<String>,
}

/// The relation `k + l + m − n − r = 2`.
pub fn branching_relation(p: &RamificationProfile) -> i64 {
    (p.k() + p.l() + p.m()) as i64 - p.n() as i64 - p.r()
}

/// Join parts `parts.0` and `parts.1` of the partition over `target`.
///
/// Only joins are modelled: a transposition that splits a cycle would raise
/// the number of preimages and cannot lower `r`.
pub fn degenerate(
    p: &RamificationProfile,
    target: BranchPoint,
    parts: (usize, usize),
) -> Result<TransitionReport> {
    if p.r() < 1 {
        return Err(Error::InvalidDegeneration(format!("{p}: r = 0, no simple branch point to move")));
    }
    let over = p.over(target);
    let joined = over.join(parts.0, parts.1)?;
    let merged = MergedParts {
        indices: parts,
        parts: (over.parts()[parts.0], over.parts()[parts.1]),
        result: over.parts()[parts.0] + over.parts()[parts.1],
    };
    let (mut x, mut y, mut z) = (p.x().clone(), p.y().clone(), p.z().clone());
    match target {
        BranchPoint::Zero => x = joined,
        BranchPoint::Quarter => z = joined,
        BranchPoint::Infinity => y = joined,
    }
    let after = RamificationProfile::from_partitions(x, y, z)?;
    assert_eq!(after.n(), p.n());
    assert_eq!(after.r(), p.r() - 1);
    assert_eq!(branching_relation(&after), 2);
    assert_eq!(branching_relation(p), 2);

    let after_cy = after.is_calabi_yau().calabi_yau;
    let after_smoothness = after_cy.then(|| after.smoothness()).transpose()?;
    let (special_flags, notes) = flags(p, &after, target, &merged);
    Ok(TransitionReport {
        before: p.clone(),
        hodge_before: HodgeStatus::of(p),
        hodge_after: HodgeStatus::of(&after),
        after,
        target,
        merged,
        after_cy,
        after_smoothness,
        special_flags,
        notes,
    })
}

fn flags(
    before: &RamificationProfile,
    after: &RamificationProfile,
    target: BranchPoint,
    merged: &MergedParts,
) -> (BTreeSet<SpecialFlag>, Vec<String>) {
    let mut set = BTreeSet::new();
    let mut notes = Vec::new();
    let quintic = *before == RamificationProfile::quintic_mirror();
    match target {
        BranchPoint::Quarter if quintic && merged.parts == (1, 1) => {
            set.insert(SpecialFlag::NodeNoCrepantResolution);
            notes.push(
                "single node: the threefold is not Q-factorial and does not admit a crepant resolution"
                    .into(),
            );
        }
        BranchPoint::Infinity if quintic => {
            set.insert(SpecialFlag::ExtraCyclicSymmetry);
            notes.push("g totally ramified over 0 and infinity: additional Z/5Z action".into());
        }
        BranchPoint::Zero if after.k() == 1 => {
            set.insert(SpecialFlag::MaximallyUnipotentLimit);
            notes.push("g totally ramified over 0: maximally unipotent monodromy there".into());
        }
        _ => {}
    }
    (set, notes)
}

/// Every degeneration of `p`: each target and each pair `i < j` of parts,
/// skipping pairs of equal parts already listed.
pub fn all_degenerations(p: &RamificationProfile) -> Vec<(BranchPoint, (usize, usize))> {
    let mut out = Vec::new();
    if p.r() < 1 {
        return out;
    }
    for target in BranchPoint::ALL {
        let parts = p.over(target).parts();
        let mut seen = HashSet::new();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if seen.insert((parts[i], parts[j])) {
                    out.push((target, (i, j)));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Slot {
    Special(BranchPoint),
    Extra,
}

type Word = Vec<(Slot, Permutation)>;

/// Hurwitz move on positions `i, i+1`: `(a, b) ↦ (b, b⁻¹ a b)`.
fn braid_left(word: &mut Word, i: usize) {
    let a = word[i].1.clone();
    let b = word[i + 1].1.clone();
    word[i].1 = a.conjugate_by(&b);
    word.swap(i, i + 1);
}

/// Inverse move: `(a, b) ↦ (a b a⁻¹, a)`.
fn braid_right(word: &mut Word, i: usize) {
    let a = word[i].1.clone();
    let b = word[i + 1].1.clone();
    word[i + 1].1 = b.conjugate_by(&a.inverse());
    word.swap(i, i + 1);
}

/// Representative of the word up to simultaneous relabelling: the least
/// relabelling by breadth-first order from some starting point. Requires a
/// transitive word.
fn canonical_relabel(word: &Word) -> Word {
    let n = word[0].1.degree();
    let mut best: Option<Word> = None;
    for start in 0..n {
        let mut label = vec![usize::MAX; n];
        let mut order = vec![start];
        label[start] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for (_, p) in word {
                let u = p.apply(v);
                if label[u] == usize::MAX {
                    label[u] = order.len();
                    order.push(u);
                }
            }
        }
        let relabel = Permutation::from_images(label).expect("transitive word");
        let candidate: Word = word
            .iter()
            .map(|(s, p)| (*s, p.conjugate_by(&relabel)))
            .collect();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.expect("nonempty degree")
}

/// Bring a word back to the order `σ_0, σ_quarter, σ_∞, τ…` with moves
/// that only conjugate the entries being passed over.
fn to_standard_order(mut word: Word) -> PermutationTuple {
    let order = [
        Slot::Special(BranchPoint::Zero),
        Slot::Special(BranchPoint::Quarter),
        Slot::Special(BranchPoint::Infinity),
    ];
    for (pos, want) in order.into_iter().enumerate() {
        let mut j = pos + word[pos..].iter().position(|(s, _)| *s == want).unwrap();
        while j > pos {
            braid_left(&mut word, j - 1);
            j -= 1;
        }
    }
    let mut it = word.into_iter().map(|(_, p)| p);
    PermutationTuple {
        sigma_zero: it.next().unwrap(),
        sigma_quarter: it.next().unwrap(),
        sigma_inf: it.next().unwrap(),
        taus: it.collect(),
    }
}

/// Whether `tau` joins two distinct cycles of `sigma` of the given lengths.
fn joins(sigma: &Permutation, tau: &Permutation, want: (usize, usize)) -> bool {
    let moved: Vec<usize> = (0..sigma.degree()).filter(|&i| tau.apply(i) != i).collect();
    let cycles = sigma.cycles();
    let cycle_of = |v: usize| cycles.iter().position(|c| c.contains(&v)).unwrap();
    let (ca, cb) = (cycle_of(moved[0]), cycle_of(moved[1]));
    if ca == cb {
        return false;
    }
    let (a, b) = (cycles[ca].len(), cycles[cb].len());
    (a.min(b), a.max(b)) == (want.0.min(want.1), want.0.max(want.1))
}

/// Merges of an extra transposition into the adjacent target entry.
fn merges(word: &Word, target: BranchPoint, want: (usize, usize)) -> Vec<Word> {
    let len = word.len();
    let mut out = Vec::new();
    for i in 0..len {
        let j = (i + 1) % len;
        let (si, sj) = (word[i].0, word[j].0);
        let merged = if si == Slot::Special(target) && sj == Slot::Extra {
            joins(&word[i].1, &word[j].1, want).then(|| (i, j, word[i].1.then(&word[j].1)))
        } else if si == Slot::Extra && sj == Slot::Special(target) {
            joins(&word[j].1, &word[i].1, want).then(|| (j, i, word[i].1.then(&word[j].1)))
        } else {
            None
        };
        let Some((keep, drop, sigma)) = merged else { continue };
        let mut next = word.clone();
        if j == 0 {
            // the pair wraps around: rotate so it is contiguous
            next.rotate_left(len - 1);
            let (keep, drop) = ((keep + 1) % len, (drop + 1) % len);
            next[keep].1 = sigma;
            next.remove(drop);
        } else {
            next[keep].1 = sigma;
            next.remove(drop);
        }
        out.push(next);
    }
    out
}

fn to_word(w: &PermutationTuple) -> Word {
    BranchPoint::ALL
        .iter()
        .map(|&b| (Slot::Special(b), w.special(b).clone()))
        .chain(w.taus.iter().map(|t| (Slot::Extra, t.clone())))
        .collect()
}

/// Breadth-first walk of the braid orbit of `start`. Returns the first
/// successful transform and the set of words visited; the set is the whole
/// orbit when the walk ends without success below `budget`.
fn search_orbit(
    start: Word,
    report: &TransitionReport,
    budget: usize,
    seen: &mut HashSet<Word>,
) -> Option<PermutationTuple> {
    let target = report.target;
    let want = report.merged.parts;
    let start = canonical_relabel(&start);
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    let mut explored = 0;
    while let Some(word) = queue.pop_front() {
        for merged in merges(&word, target, want) {
            let candidate = to_standard_order(merged);
            if candidate.verify(&report.after).is_ok() {
                return Some(candidate);
            }
        }
        let len = word.len();
        let mut rotated = word.clone();
        rotated.rotate_left(1);
        let mut next = vec![rotated];
        for i in 0..len - 1 {
            let mut l = word.clone();
            braid_left(&mut l, i);
            let mut r = word.clone();
            braid_right(&mut r, i);
            next.push(l);
            next.push(r);
        }
        for n in next {
            if explored >= budget {
                break;
            }
            let n = canonical_relabel(&n);
            if seen.insert(n.clone()) {
                explored += 1;
                queue.push_back(n);
            }
        }
    }
    None
}

/// Transform a witness of `report.before` into one of `report.after` by
/// letting one transposition run into the target entry.
///
/// Explores the braid orbit of the witness breadth first (Hurwitz moves and
/// cyclic rotation, words taken up to simultaneous relabelling, at most
/// `budget` of them). In each word an extra entry adjacent to the target
/// entry that joins cycles of the requested lengths is multiplied in; the
/// remaining word is braided back to standard order and kept if it
/// generates a transitive group.
pub fn transform_witness(
    w: &PermutationTuple,
    report: &TransitionReport,
    budget: usize,
) -> Result<PermutationTuple> {
    w.verify(&report.before).map_err(Error::InvalidDegeneration)?;
    let mut seen = HashSet::new();
    search_orbit(to_word(w), report, budget, &mut seen).ok_or_else(|| {
        Error::InvalidDegeneration(format!(
            "no braid-equivalent witness of {} absorbs a transposition joining parts {}+{} over {} ({} words explored)",
            report.before,
            report.merged.parts.0,
            report.merged.parts.1,
            report.target,
            seen.len()
        ))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DegenerationWitness {
    /// A witness of the degenerate profile obtained from one of `before`.
    Found { before: PermutationTuple, after: PermutationTuple, orbits_tried: usize },
    /// Every braid orbit of witnesses of `before` was explored in full and
    /// none degenerates this way.
    Impossible { orbits_tried: usize },
    /// A search budget ran out first.
    Inconclusive { orbits_tried: usize },
}

/// Look for a witness of `report.before`, in any braid orbit, whose
/// transform realizes the degeneration. Witnesses are taken in the order of
/// [`crate::hurwitz::for_each_cover`]; orbits already explored are skipped.
pub fn degeneration_witness(
    report: &TransitionReport,
    opts: SearchOptions,
    orbit_budget: usize,
) -> Result<DegenerationWitness> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut orbits = 0;
    let mut truncated = false;
    let mut result = None;
    let outcome = for_each_cover(&report.before, opts, |w| {
        let word = to_word(w);
        if seen.contains(&canonical_relabel(&word)) {
            return ControlFlow::Continue(());
        }
        orbits += 1;
        let before = seen.len();
        match search_orbit(word, report, orbit_budget, &mut seen) {
            Some(after) => {
                result = Some(after);
                ControlFlow::Break(())
            }
            None => {
                truncated |= seen.len() - before > orbit_budget;
                ControlFlow::Continue(())
            }
        }
    })?;
    Ok(match (outcome, result) {
        (SearchOutcome::Found { witness, .. }, Some(after)) => DegenerationWitness::Found {
            before: witness,
            after,
            orbits_tried: orbits,
        },
        (SearchOutcome::NotFound { .. }, _) if !truncated => {
            DegenerationWitness::Impossible { orbits_tried: orbits }
        }
        _ => DegenerationWitness::Inconclusive { orbits_tried: orbits },
    })
}
