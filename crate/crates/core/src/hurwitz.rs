//! Riemann existence data: permutation tuples realizing a ramification
//! profile as a connected branched cover of `P¹`.
//!
//! Products are read left to right (apply the left factor first). A tuple
//! `(σ_0, σ_quarter, σ_∞, τ_1, …, τ_r)` is a witness when
//! `σ_0 · σ_quarter · σ_∞ · τ_1 ⋯ τ_r = 1`, the cycle types of the three
//! special entries are `x`, `z`, `y`, every `τ_i` is a transposition, and the
//! generated group is transitive.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hodge;
use crate::profile::{BranchPoint, Partition, RamificationProfile};

/// A permutation of `{0, …, n−1}` in one-line form. Text and JSON forms are
/// 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 0-based images; checks bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    /// From a 1-based one-line array such as `[2, 3, 1]`.
    pub fn from_one_line(one_based: &[usize]) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::Parse("one-line entries are 1-based".into()));
        }
        Self::from_images(one_based.iter().map(|&i| i - 1).collect())
    }

    /// Transposition of the 0-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        assert!(a != b && a < n && b < n);
        let mut p = Self::identity(n);
        p.0.swap(a, b);
        p
    }

    /// Parses 1-based cycle notation like `(1 2 3)(4 5)`; commas are also
    /// accepted as separators. `n` defaults to the largest point mentioned.
    pub fn parse_cycles(s: &str, n: Option<usize>) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let cycle = open[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::Parse(format!("bad point {t:?} in {s:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        let max = cycles.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
        let n = n.unwrap_or(max);
        if max > n {
            return Err(Error::Parse(format!("point {max} exceeds degree {n}")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for c in &cycles {
            for (i, &a) in c.iter().enumerate() {
                if std::mem::replace(&mut seen[a], true) {
                    return Err(Error::Parse(format!("point {} repeated in {s:?}", a + 1)));
                }
                images[a] = c[(i + 1) % c.len()];
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// `c⁻¹ · self · c`: relabel every point `i` as `c(i)`.
    pub fn conjugate_by(&self, c: &Self) -> Self {
        c.inverse().then(self).then(c)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycles (fixed points included), each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.0[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.0[cur];
            }
            out.push(cycle);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(Vec::len).collect()).expect("nonempty degree")
    }

    /// Points moved minus orbits: the contribution to Riemann–Hurwitz.
    pub fn ramification(&self) -> usize {
        self.degree() - self.num_cycles()
    }

    pub fn is_transposition(&self) -> bool {
        self.0.iter().enumerate().filter(|&(i, &j)| i != j).count() == 2
    }

    /// The least permutation (one-line order) with the given cycle type:
    /// consecutive blocks `(s s+1 … e)` with lengths in ascending order.
    pub fn canonical_of_type(cycle_type: &Partition) -> Self {
        let mut lens: Vec<usize> = cycle_type.parts().to_vec();
        lens.sort_unstable();
        let mut images = Vec::with_capacity(cycle_type.sum());
        let mut start = 0;
        for len in lens {
            for i in 0..len {
                images.push(start + (i + 1) % len);
            }
            start += len;
        }
        Permutation(images)
    }

    pub fn to_one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, v) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", v + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_line().serialize(s)
    }
}

/// Visit every permutation of `{0..n}` with the given cycle type.
///
/// Order: the least unused point opens a new cycle; cycle lengths are tried
/// in descending order, then the remaining cycle members in lexicographic
/// order of their sequence.
pub fn for_each_of_type<B>(
    cycle_type: &Partition,
    mut visit: impl FnMut(&Permutation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let n = cycle_type.sum();
    let mut lens: Vec<usize> = cycle_type.parts().to_vec();
    let mut images = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fill(&mut lens, &mut images, &mut used, &mut visit)
}

fn fill<B>(
    lens: &mut Vec<usize>,
    images: &mut [usize],
    used: &mut [bool],
    visit: &mut impl FnMut(&Permutation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let Some(first) = used.iter().position(|u| !u) else {
        return visit(&Permutation(images.to_vec()));
    };
    let mut distinct = lens.clone();
    distinct.dedup();
    for len in distinct {
        let idx = lens.iter().position(|&l| l == len).unwrap();
        lens.remove(idx);
        used[first] = true;
        let mut cycle = vec![first];
        extend_cycle(len, &mut cycle, lens, images, used, visit)?;
        used[first] = false;
        lens.insert(idx, len);
    }
    ControlFlow::Continue(())
}

fn extend_cycle<B>(
    len: usize,
    cycle: &mut Vec<usize>,
    lens: &mut Vec<usize>,
    images: &mut [usize],
    used: &mut [bool],
    visit: &mut impl FnMut(&Permutation) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if cycle.len() == len {
        for (i, &a) in cycle.iter().enumerate() {
            images[a] = cycle[(i + 1) % len];
        }
        return fill(lens, images, used, visit);
    }
    for next in 0..used.len() {
        if used[next] {
            continue;
        }
        used[next] = true;
        cycle.push(next);
        let flow = extend_cycle(len, cycle, lens, images, used, visit);
        cycle.pop();
        used[next] = false;
        flow?;
    }
    ControlFlow::Continue(())
}

/// Minimal factorization into `n − #cycles` transpositions: each cycle
/// `(c₁ c₂ … c_j)` (least point first, cycles by least point) becomes
/// `(c₁ c₂)(c₁ c₃)⋯(c₁ c_j)`.
pub fn min_transposition_factorization(sigma: &Permutation) -> Vec<Permutation> {
    let n = sigma.degree();
    sigma
        .cycles()
        .into_iter()
        .flat_map(|c| {
            let head = c[0];
            c.into_iter()
                .skip(1)
                .map(move |b| Permutation::transposition(n, head, b))
        })
        .collect()
}

/// Left-to-right product of a sequence of permutations of degree `n`.
pub fn product<'a>(n: usize, perms: impl IntoIterator<Item = &'a Permutation>) -> Permutation {
    perms
        .into_iter()
        .fold(Permutation::identity(n), |acc, p| acc.then(p))
}

/// Number of orbits of the group generated by `perms` on `{0..n}`.
pub fn orbit_count<'a>(n: usize, perms: impl IntoIterator<Item = &'a Permutation>) -> usize {
    let mut uf = UnionFind::new(n);
    for p in perms {
        uf.absorb(p);
    }
    uf.components
}

#[derive(Clone)]
struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.components -= 1;
        }
    }

    fn absorb(&mut self, p: &Permutation) {
        for (i, &j) in p.0.iter().enumerate() {
            self.union(i, j);
        }
    }
}

/// Monodromy data of a cover branched over `0`, `1/256`, `∞` and further
/// points. In a simple tuple every entry of `taus` is a transposition; the
/// extended form used by [`simplify_to_simple`] allows any permutation there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationTuple {
    pub sigma_zero: Permutation,
    pub sigma_quarter: Permutation,
    pub sigma_inf: Permutation,
    pub taus: Vec<Permutation>,
}

impl PermutationTuple {
    pub fn degree(&self) -> usize {
        self.sigma_zero.degree()
    }

    pub fn special(&self, point: BranchPoint) -> &Permutation {
        match point {
            BranchPoint::Zero => &self.sigma_zero,
            BranchPoint::Quarter => &self.sigma_quarter,
            BranchPoint::Infinity => &self.sigma_inf,
        }
    }

    pub fn special_mut(&mut self, point: BranchPoint) -> &mut Permutation {
        match point {
            BranchPoint::Zero => &mut self.sigma_zero,
            BranchPoint::Quarter => &mut self.sigma_quarter,
            BranchPoint::Infinity => &mut self.sigma_inf,
        }
    }

    /// Entries in product order.
    pub fn entries(&self) -> impl Iterator<Item = &Permutation> {
        [&self.sigma_zero, &self.sigma_quarter, &self.sigma_inf]
            .into_iter()
            .chain(self.taus.iter())
    }

    pub fn product(&self) -> Permutation {
        product(self.degree(), self.entries())
    }

    pub fn is_transitive(&self) -> bool {
        orbit_count(self.degree(), self.entries()) == 1
    }

    /// `Σ (n − #cycles)` over all entries; equals `2n − 2` for a cover of
    /// genus zero.
    pub fn total_ramification(&self) -> usize {
        self.entries().map(Permutation::ramification).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.taus.iter().all(Permutation::is_transposition)
    }

    /// Checks every witness condition against `profile`; the error string
    /// names the first violated condition.
    pub fn verify(&self, profile: &RamificationProfile) -> std::result::Result<(), String> {
        let n = profile.n();
        if self.entries().any(|p| p.degree() != n) {
            return Err(format!("entries must all have degree {n}"));
        }
        for point in BranchPoint::ALL {
            let got = self.special(point).cycle_type();
            if &got != profile.over(point) {
                return Err(format!(
                    "cycle type over {point} is {got}, expected {}",
                    profile.over(point)
                ));
            }
        }
        if !self.is_simple() {
            return Err("some extra entry is not a transposition".into());
        }
        if self.taus.len() as i64 != profile.r() {
            return Err(format!("{} transpositions, expected r = {}", self.taus.len(), profile.r()));
        }
        if !self.product().is_identity() {
            return Err("ordered product is not the identity".into());
        }
        if !self.is_transitive() {
            return Err("generated group is not transitive".into());
        }
        if self.total_ramification() != 2 * n - 2 {
            return Err("Riemann-Hurwitz count differs from 2n - 2".into());
        }
        Ok(())
    }
}

/// Replace every extra entry by its minimal transposition factorization.
/// Identity entries disappear; the ordered product and the generated group
/// are unchanged.
pub fn simplify_to_simple(t: &PermutationTuple) -> PermutationTuple {
    PermutationTuple {
        taus: t.taus.iter().flat_map(min_transposition_factorization).collect(),
        ..t.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
    /// Largest degree accepted.
    pub max_degree: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 10_000_000,
            max_degree: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { witness: PermutationTuple, nodes: u64 },
    NotFound { nodes: u64 },
    Inconclusive { nodes: u64 },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&PermutationTuple> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found { .. } => "found",
            SearchOutcome::NotFound { .. } => "not_found",
            SearchOutcome::Inconclusive { .. } => "inconclusive",
        }
    }
}

struct Search<'a> {
    n: usize,
    r: usize,
    sigma_zero: &'a Permutation,
    nodes: u64,
    budget: u64,
    visit: &'a mut dyn FnMut(&PermutationTuple) -> ControlFlow<()>,
}

enum Stop {
    Found(PermutationTuple),
    Budget,
}

impl Search<'_> {
    fn tick(&mut self) -> ControlFlow<Stop> {
        self.nodes += 1;
        if self.nodes > self.budget {
            ControlFlow::Break(Stop::Budget)
        } else {
            ControlFlow::Continue(())
        }
    }

    /// Extend `taus` so that their product equals `rest`, keeping the group
    /// transitive. `uf` holds the orbits generated so far.
    fn taus(
        &mut self,
        rest: &Permutation,
        uf: &UnionFind,
        taus: &mut Vec<Permutation>,
        specials: (&Permutation, &Permutation),
    ) -> ControlFlow<Stop> {
        let remaining = self.r - taus.len();
        if remaining == 0 {
            if rest.is_identity() && uf.components == 1 {
                let found = PermutationTuple {
                    sigma_zero: self.sigma_zero.clone(),
                    sigma_quarter: specials.0.clone(),
                    sigma_inf: specials.1.clone(),
                    taus: taus.clone(),
                };
                if (self.visit)(&found).is_break() {
                    return ControlFlow::Break(Stop::Found(found));
                }
            }
            return ControlFlow::Continue(());
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                self.tick()?;
                let tau = Permutation::transposition(self.n, a, b);
                let next_rest = tau.then(rest);
                let needed = next_rest.ramification();
                if needed > remaining - 1 || !(remaining - 1 - needed).is_multiple_of(2) {
                    continue;
                }
                let mut next_uf = uf.clone();
                next_uf.union(a, b);
                if next_uf.components - 1 > remaining - 1 {
                    continue;
                }
                taus.push(tau);
                let flow = self.taus(&next_rest, &next_uf, taus, specials);
                taus.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Backtracking search for a witness tuple of `p` with `r` simple extra
/// branch points.
///
/// `σ_0` is fixed to the canonical representative of type `x` (every
/// witness is conjugate to one of this form). The returned witness is the
/// first in the enumeration order of [`for_each_of_type`] for `σ_quarter`,
/// then `σ_∞`, then transpositions `(a b)` in lexicographic order.
pub fn find_cover(p: &RamificationProfile, opts: SearchOptions) -> Result<SearchOutcome> {
    for_each_cover(p, opts, |_| ControlFlow::Break(()))
}

/// Visit witnesses of `p` in the order used by [`find_cover`] until `visit`
/// breaks (reported as `Found` with that witness), the search space is
/// exhausted (`NotFound`) or the budget runs out (`Inconclusive`).
pub fn for_each_cover(
    p: &RamificationProfile,
    opts: SearchOptions,
    mut visit: impl FnMut(&PermutationTuple) -> ControlFlow<()>,
) -> Result<SearchOutcome> {
    if opts.budget == 0 {
        return Err(Error::InvalidBudget);
    }
    if p.n() > opts.max_degree {
        return Err(Error::Hypothesis(format!(
            "degree {} exceeds the search cap {}",
            p.n(),
            opts.max_degree
        )));
    }
    let n = p.n();
    let sigma_zero = Permutation::canonical_of_type(p.x());
    let mut search = Search {
        n,
        r: p.r() as usize,
        sigma_zero: &sigma_zero,
        nodes: 0,
        budget: opts.budget,
        visit: &mut visit,
    };

    let flow = for_each_of_type(p.z(), |sq| {
        search.tick()?;
        let prefix = sigma_zero.then(sq);
        for_each_of_type(p.y(), |si| {
            search.tick()?;
            let rest = prefix.then(si).inverse();
            let needed = rest.ramification();
            if needed > search.r || !(search.r - needed).is_multiple_of(2) {
                return ControlFlow::Continue(());
            }
            let mut uf = UnionFind::new(n);
            uf.absorb(&sigma_zero);
            uf.absorb(sq);
            uf.absorb(si);
            if uf.components - 1 > search.r {
                return ControlFlow::Continue(());
            }
            search.taus(&rest, &uf, &mut Vec::new(), (sq, si))
        })
    });

    let nodes = search.nodes.min(opts.budget);
    Ok(match flow {
        ControlFlow::Break(Stop::Found(witness)) => {
            debug_assert_eq!(witness.verify(p), Ok(()));
            SearchOutcome::Found { witness, nodes }
        }
        ControlFlow::Break(Stop::Budget) => SearchOutcome::Inconclusive { nodes },
        ControlFlow::Continue(()) => SearchOutcome::NotFound { nodes },
    })
}

/// Dimension of the space of deformations of `g` preserving the profiles
/// over `0` and `∞`, for `l = 2` and `g` unramified over `1/256`: it is `k`.
pub fn deformation_dimension(p: &RamificationProfile) -> Result<usize> {
    p.require_calabi_yau()?;
    if p.l() != 2 {
        return Err(Error::Hypothesis(format!("{p}: requires l = 2")));
    }
    if p.m() != p.n() {
        return Err(Error::Hypothesis(format!("{p}: requires g unramified over 1/256 (m = n)")));
    }
    let k = p.k();
    let h21 = hodge::h21_closed_form(p)?;
    if h21 != k as i64 {
        return Err(Error::CrossCheck(format!("{p}: deformation dimension {k} but h21 = {h21}")));
    }
    Ok(k)
}
