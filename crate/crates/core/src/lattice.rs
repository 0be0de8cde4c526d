//! Integer lattices given by symmetric Gram matrices.
//!
//! The built-in lattices (hyperbolic plane, E8, `<-4>` and the rank 19
//! lattice `M2 = H ⊕ E8 ⊕ E8 ⊕ <-4>`) are read from a versioned JSON table
//! compiled into the crate.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{ExactMatrix, IntMatrix};

const TABLE_JSON: &str = include_str!("../data/lattices.json");

/// Order of the discriminant group of the rank 3 transcendental lattice
/// `M2^⊥`, which is cyclic of order 4. The Gram matrix of `M2^⊥` is never
/// constructed here; this is a recorded fact, not a computation.
pub const TRANSCENDENTAL_DISCRIMINANT: [u64; 1] = [4];

/// Rank of `M2^⊥` inside the K3 lattice.
pub const TRANSCENDENTAL_RANK: u64 = 3;

#[derive(Debug, Deserialize)]
struct Table {
    version: u32,
    lattices: BTreeMap<String, Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Gram { gram: Vec<Vec<i64>> },
    Sum { sum: Vec<String> },
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| serde_json::from_str(TABLE_JSON).expect("bundled lattice table is valid JSON"))
}

pub fn table_version() -> u32 {
    table().version
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    pub label: String,
    gram: IntMatrix,
}

/// Output of [`smith_normal_form`]: `u · m · v = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

impl IntegerLattice {
    pub fn new(label: impl Into<String>, gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Shape("Gram matrix must be square and symmetric".into()));
        }
        Ok(IntegerLattice {
            label: label.into(),
            gram,
        })
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("Gram matrices are square")
    }

    /// `(positive, negative)` inertia of the Gram form.
    ///
    /// The characteristic polynomial of a real symmetric matrix has only
    /// real roots, so Descartes' rule of signs counts them exactly.
    pub fn signature(&self) -> (usize, usize) {
        let q: ExactMatrix = self.gram.map(|v| BigRational::from_integer(v.clone()));
        let cp = q.char_poly().expect("square");
        let coeffs = cp.coeffs();
        let pos = sign_changes(coeffs.iter().map(|c| c.signum()));
        let neg = sign_changes(coeffs.iter().enumerate().map(|(i, c)| {
            let s = c.signum();
            if i % 2 == 1 {
                -s
            } else {
                s
            }
        }));
        (pos, neg)
    }

    /// All invariant factors of `coker(gram)`, including trivial ones.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        smith_normal_form(&self.gram).diagonal()
    }

    /// Invariant factors greater than one; empty for unimodular lattices.
    pub fn discriminant_group(&self) -> Result<Vec<BigInt>> {
        if self.determinant().is_zero() {
            return Err(Error::DegenerateGram);
        }
        Ok(self
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        IntegerLattice {
            label: format!("{}+{}", self.label, other.label),
            gram: self.gram.block_diag(&other.gram),
        }
    }

    pub fn summary(&self) -> Result<LatticeSummary> {
        let (p, n) = self.signature();
        Ok(LatticeSummary {
            name: self.label.clone(),
            rank: self.rank(),
            signature: [p, n],
            determinant: self.determinant().to_string(),
            invariant_factors: self.discriminant_group()?.iter().map(ToString::to_string).collect(),
            table_version: table_version(),
        })
    }
}

/// JSON view printed by the `lattice` subcommand.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LatticeSummary {
    pub name: String,
    pub rank: usize,
    pub signature: [usize; 2],
    pub determinant: String,
    pub invariant_factors: Vec<String>,
    pub table_version: u32,
}

fn sign_changes(signs: impl Iterator<Item = BigRational>) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for s in signs {
        if s.is_zero() {
            continue;
        }
        let positive = s.is_positive();
        if last.is_some_and(|l| l != positive) {
            count += 1;
        }
        last = Some(positive);
    }
    count
}

/// One of the built-in lattices: `H`, `E8`, `minus4` or `M2`.
pub fn build_standard(name: &str) -> Result<IntegerLattice> {
    let entry = table()
        .lattices
        .get(name)
        .ok_or_else(|| Error::UnknownLattice(name.to_string()))?;
    match entry {
        Entry::Gram { gram } => {
            let rows = gram
                .iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            IntegerLattice::new(name, IntMatrix::from_rows(rows)?)
        }
        Entry::Sum { sum } => {
            let mut acc = IntegerLattice::new(name, IntMatrix::zeros(0, 0))?;
            for part in sum {
                acc = acc.direct_sum(&build_standard(part)?);
            }
            acc.label = name.to_string();
            Ok(acc)
        }
    }
}

pub fn direct_sum(a: &IntegerLattice, b: &IntegerLattice) -> IntegerLattice {
    a.direct_sum(b)
}

/// Smith normal form of an arbitrary rectangular integer matrix.
///
/// Pivots are chosen as the nonzero entry of least absolute value in the
/// remaining block, which keeps coefficient growth small.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = &d[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    add_row_multiple(&mut d, i, t, &-q.clone());
                    add_row_multiple(&mut u, i, t, &-q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    add_col_multiple(&mut d, j, t, &-q.clone());
                    add_col_multiple(&mut v, j, t, &-q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = d[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &BigInt::one());
                    add_row_multiple(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for j in 0..cols {
                d[(t, j)] = -d[(t, j)].clone();
            }
            for j in 0..rows {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
    }
    SmithForm { d, u, v }
}

/// row[dst] += c · row[src]
fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    for j in 0..m.cols() {
        let add = &m[(src, j)] * c;
        m[(dst, j)] += add;
    }
}

/// col[dst] += c · col[src]
fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    for i in 0..m.rows() {
        let add = &m[(i, src)] * c;
        m[(i, dst)] += add;
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let (mut n, mut phi) = (n, n);
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Orders `n` of automorphisms compatible with an irreducible action on a
/// lattice of rank `rank_bound`: all `n` with `φ(n) | rank_bound`.
///
/// `φ(n) ≥ √n` for `n > 2, n ≠ 6`, so scanning `n ≤ max(rank_bound², 6)`
/// is exhaustive.
pub fn admissible_automorphism_orders(rank_bound: u64) -> Vec<u64> {
    assert!(rank_bound >= 1, "rank bound must be positive");
    let cutoff = (rank_bound * rank_bound).max(6);
    (1..=cutoff)
        .filter(|&n| rank_bound.is_multiple_of(euler_phi(n)))
        .collect()
}
