//! Ramification profiles of the functional invariant `g: P¹ → P¹` over the
//! three special values `λ = 0`, `λ = 1/256` and `λ = ∞`.
//!
//! A profile is the whole combinatorial input: the degree `n` and three
//! partitions of `n`. The remaining ramification `r` (away from the special
//! values) is forced by Riemann–Hurwitz, `k + l + m − n − r − 2 = 0`, so it
//! is derived rather than supplied.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three special values of the modular parameter `λ`.
///
/// `Quarter` is the conifold value `λ = 1/256`; the name follows the JSON
/// key `over_quarter`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchPoint {
    Zero,
    Quarter,
    Infinity,
}

impl BranchPoint {
    pub const ALL: [BranchPoint; 3] = [BranchPoint::Zero, BranchPoint::Quarter, BranchPoint::Infinity];
}

impl fmt::Display for BranchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchPoint::Zero => "zero",
            BranchPoint::Quarter => "quarter",
            BranchPoint::Infinity => "infinity",
        })
    }
}

impl std::str::FromStr for BranchPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" | "0" => Ok(BranchPoint::Zero),
            "quarter" | "1/256" => Ok(BranchPoint::Quarter),
            "infinity" | "inf" => Ok(BranchPoint::Infinity),
            _ => Err(Error::Parse(format!("unknown branch point {s:?}"))),
        }
    }
}

/// A partition stored with parts in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts; rejects empty input and zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("partition has no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// `[1, 1, …, 1]` with `n` parts.
    pub fn ones(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn count_odd(&self) -> usize {
        self.0.iter().filter(|&&p| p % 2 == 1).count()
    }

    /// Replace parts `i` and `j` by their sum.
    pub fn join(&self, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidDegeneration(
                "a part cannot be joined with itself; splitting a cycle is a deformation, not a degeneration"
                    .into(),
            ));
        }
        if i >= self.len() || j >= self.len() {
            return Err(Error::InvalidDegeneration(format!(
                "part indices ({i}, {j}) out of range for {self}"
            )));
        }
        let mut parts: Vec<usize> = self
            .0
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx != i && idx != j)
            .map(|(_, &p)| p)
            .collect();
        parts.push(self.0[i] + self.0[j]);
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// All partitions of `n` in reverse-lexicographic order (`[n]` first,
/// `[1, …, 1]` last).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RamificationProfile {
    n: usize,
    x: Partition,
    y: Partition,
    z: Partition,
}

/// JSON form of a profile. `r` is written on output and ignored on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub degree: usize,
    pub over_zero: Vec<usize>,
    pub over_infinity: Vec<usize>,
    pub over_quarter: Vec<usize>,
    #[serde(default, skip_deserializing, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
}

impl RamificationProfile {
    /// Validates and canonicalizes. `x` lies over `λ = 0`, `y` over `λ = ∞`
    /// and `z` over `λ = 1/256`.
    pub fn new(n: usize, x: Vec<usize>, y: Vec<usize>, z: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("degree must be positive".into()));
        }
        let mut parts = Vec::with_capacity(3);
        for (name, raw) in [("over_zero", x), ("over_infinity", y), ("over_quarter", z)] {
            let p = Partition::new(raw).map_err(|e| match e {
                Error::InvalidPartition(msg) => Error::InvalidPartition(format!("{name}: {msg}")),
                other => other,
            })?;
            if p.sum() != n {
                return Err(Error::InvalidPartition(format!(
                    "{name} = {p} sums to {}, not the degree {n}",
                    p.sum()
                )));
            }
            parts.push(p);
        }
        let z = parts.pop().unwrap();
        let y = parts.pop().unwrap();
        let x = parts.pop().unwrap();
        let profile = RamificationProfile { n, x, y, z };
        let r = profile.r();
        if r < 0 {
            return Err(Error::NegativeR(r));
        }
        Ok(profile)
    }

    pub fn from_partitions(x: Partition, y: Partition, z: Partition) -> Result<Self> {
        Self::new(x.sum(), x.0, y.0, z.0)
    }

    /// The quintic mirror: `n = 5`, `x = [5]`, `y = [4, 1]`, `z = [1⁵]`.
    pub fn quintic_mirror() -> Self {
        Self::new(5, vec![5], vec![4, 1], vec![1; 5]).expect("valid")
    }

    /// The `(i, j)` family `λ = A s^{i+j} / (t^i (s − t)^j)`:
    /// `x = [i + j]`, `y = [i, j]`, unramified over `1/256`.
    pub fn ij_profile(i: usize, j: usize) -> Result<Self> {
        let n = i + j;
        Self::new(n, vec![n], vec![i, j], vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn x(&self) -> &Partition {
        &self.x
    }
    pub fn y(&self) -> &Partition {
        &self.y
    }
    pub fn z(&self) -> &Partition {
        &self.z
    }
    pub fn k(&self) -> usize {
        self.x.len()
    }
    pub fn l(&self) -> usize {
        self.y.len()
    }
    pub fn m(&self) -> usize {
        self.z.len()
    }

    pub fn over(&self, point: BranchPoint) -> &Partition {
        match point {
            BranchPoint::Zero => &self.x,
            BranchPoint::Quarter => &self.z,
            BranchPoint::Infinity => &self.y,
        }
    }

    /// Ramification away from the three special values.
    pub fn r(&self) -> i64 {
        (self.k() + self.l() + self.m()) as i64 - self.n as i64 - 2
    }

    /// Number of odd parts over `λ = 1/256`.
    pub fn m_odd(&self) -> usize {
        self.z.count_odd()
    }

    /// Degree of the canonical sheaf of the normalized pull-back, as a
    /// multiple of the fibre class: `n + r − k − m + Σ (y_i / gcd(y_i, 4) − 1)`.
    pub fn canonical_degree(&self) -> i64 {
        let base = self.n as i64 + self.r() - self.k() as i64 - self.m() as i64;
        let normalization: i64 = self
            .y
            .parts()
            .iter()
            .map(|&y| (y / gcd(y, 4)) as i64 - 1)
            .sum();
        base + normalization
    }

    /// Trivial canonical sheaf criterion: either `l = 2` with both parts in
    /// `{1, 2, 4}`, or `l = 1` with `y = [8]`.
    pub fn is_calabi_yau(&self) -> CalabiYauCheck {
        let y = self.y.parts();
        let (ok, reason) = match y {
            [a, b] if is_cy_part(*a) && is_cy_part(*b) => (true, "l=2 with y1,y2 in {1,2,4}"),
            [_, _] => (false, "l=2 requires y1,y2 in {1,2,4}"),
            [8] => (true, "l=1 with y1=8"),
            [_] => (false, "l=1 requires y1=8"),
            _ => (false, "l must be 1 or 2"),
        };
        if ok {
            assert_eq!(self.canonical_degree(), 0, "CY clause with nonzero canonical degree for {self}");
        }
        CalabiYauCheck {
            calabi_yau: ok,
            reason: reason.to_string(),
        }
    }

    pub fn require_calabi_yau(&self) -> Result<()> {
        let check = self.is_calabi_yau();
        if check.calabi_yau {
            Ok(())
        } else {
            Err(Error::NotCalabiYau(format!("{self}: {}", check.reason)))
        }
    }

    /// Smooth exactly when unramified over `λ = 1/256`; otherwise one
    /// isolated terminal `cA_{z−1}` point per part `z > 1`.
    pub fn smoothness(&self) -> Result<SmoothnessReport> {
        self.require_calabi_yau()?;
        let mut singularities: Vec<Singularity> = Vec::new();
        for &part in self.z.parts().iter().filter(|&&p| p > 1) {
            match singularities.iter_mut().find(|s| s.part == part) {
                Some(s) => s.count += 1,
                None => singularities.push(Singularity {
                    part,
                    count: 1,
                    kind: format!("cA{}", part - 1),
                }),
            }
        }
        let smooth = singularities.is_empty();
        debug_assert_eq!(smooth, self.m() == self.n);
        Ok(SmoothnessReport {
            smooth,
            caveat: (!smooth)
                .then(|| "terminal singularities present; crepant resolution not guaranteed".to_string()),
            singularities,
        })
    }

    pub fn to_json(&self) -> ProfileJson {
        ProfileJson {
            degree: self.n,
            over_zero: self.x.0.clone(),
            over_infinity: self.y.0.clone(),
            over_quarter: self.z.0.clone(),
            r: Some(self.r()),
        }
    }

    pub fn from_json(j: &ProfileJson) -> Result<Self> {
        Self::new(
            j.degree,
            j.over_zero.clone(),
            j.over_infinity.clone(),
            j.over_quarter.clone(),
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ProfileJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data")
    }
}

impl Serialize for RamificationProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, x={}, y={}, z={}, r={})", self.n, self.x, self.y, self.z, self.r())
    }
}

fn is_cy_part(y: usize) -> bool {
    matches!(y, 1 | 2 | 4)
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    num_integer::gcd(a, b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalabiYauCheck {
    pub calabi_yau: bool,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Singularity {
    /// Ramification index `z_j` over `λ = 1/256`.
    pub part: usize,
    pub count: usize,
    /// `cA_{z_j − 1}`.
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub singularities: Vec<Singularity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

/// A singular fibre of the resolved threefold over a preimage of `0` or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "over", content = "index")]
pub enum Fibre {
    /// Preimage of `λ = 0` with ramification index `x`.
    OverZero(usize),
    /// Preimage of `λ = ∞` with ramification index `y`.
    OverInfinity(usize),
}

impl fmt::Display for Fibre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fibre::OverZero(x) => write!(f, "zero[x={x}]"),
            Fibre::OverInfinity(y) => write!(f, "infinity[y={y}]"),
        }
    }
}

/// Component count of a fibre over `0` split by origin, for `x`-fold base
/// change of the tetrahedral semistable fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TetrahedronCensus {
    pub strict_transforms: u64,
    pub edge_blowups: u64,
    pub corner_blowups: u64,
}

impl TetrahedronCensus {
    pub fn new(x: u64) -> Self {
        assert!(x >= 1);
        TetrahedronCensus {
            strict_transforms: 4,
            edge_blowups: 6 * (x - 1),
            corner_blowups: 2 * (x - 1) * (x.saturating_sub(2)),
        }
    }

    pub fn total(&self) -> u64 {
        self.strict_transforms + self.edge_blowups + self.corner_blowups
    }
}

/// Number of irreducible components of the fibre.
pub fn fibre_components(fibre: Fibre) -> Result<u64> {
    match fibre {
        Fibre::OverZero(0) | Fibre::OverInfinity(0) => {
            Err(Error::InvalidPartition("ramification index must be positive".into()))
        }
        Fibre::OverZero(x) => Ok(TetrahedronCensus::new(x as u64).total()),
        Fibre::OverInfinity(1) => Ok(31),
        Fibre::OverInfinity(2) => Ok(11),
        Fibre::OverInfinity(4) => Ok(1),
        Fibre::OverInfinity(8) => Err(Error::Unsupported(
            "fibre over infinity with y = 8: the l = 1 case is a smooth degeneration of y = (4, 4) \
             and its components are not tabulated"
                .into(),
        )),
        Fibre::OverInfinity(y) => Err(Error::NotCalabiYau(format!(
            "ramification index {y} over infinity is not in {{1, 2, 4}}"
        ))),
    }
}
