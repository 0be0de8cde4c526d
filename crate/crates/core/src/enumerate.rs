//! Enumeration of Calabi-Yau profiles up to a given degree.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hodge::HodgeStatus;
use crate::hurwitz::{find_cover, PermutationTuple, SearchOptions, SearchOutcome};
use crate::profile::{partitions, Partition, RamificationProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationQuery {
    pub max_degree: usize,
    /// Keep only profiles with `m = n`.
    pub require_smooth: bool,
    pub fixed_h21: Option<i64>,
    pub require_hurwitz_witness: bool,
    /// Node budget per witness search.
    pub budget: u64,
}

impl EnumerationQuery {
    pub fn new(max_degree: usize) -> Self {
        EnumerationQuery {
            max_degree,
            require_smooth: false,
            fixed_h21: None,
            require_hurwitz_witness: false,
            budget: SearchOptions::default().budget,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_degree < 1 {
            return Err(Error::InvalidParameters("max degree must be at least 1".into()));
        }
        if self.require_hurwitz_witness && self.budget < 1 {
            return Err(Error::InvalidBudget);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessStatus {
    NotRequested,
    Found { witness: PermutationTuple },
    NotFound,
    Inconclusive,
}

impl WitnessStatus {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessStatus::NotRequested => "not_requested",
            WitnessStatus::Found { .. } => "found",
            WitnessStatus::NotFound => "not_found",
            WitnessStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationRow {
    pub profile: RamificationProfile,
    pub hodge: HodgeStatus,
    pub witness: WitnessStatus,
}

/// Pole partitions allowed by the Calabi-Yau criterion in degree `n`.
fn cy_pole_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for a in [4, 2, 1] {
        for b in [4, 2, 1] {
            if b <= a && a + b == n {
                out.push(Partition::new(vec![a, b]).unwrap());
            }
        }
    }
    if n == 8 {
        out.push(Partition::new(vec![8]).unwrap());
    }
    out
}

/// Every Calabi-Yau profile of degree `≤ max_degree`, sorted by
/// `(n, x, y, z)`.
pub fn calabi_yau_profiles(max_degree: usize) -> Vec<RamificationProfile> {
    let mut out = Vec::new();
    for n in 1..=max_degree {
        let ys = cy_pole_partitions(n);
        if ys.is_empty() {
            continue;
        }
        let parts = partitions(n);
        for x in &parts {
            for y in &ys {
                for z in &parts {
                    if let Ok(p) = RamificationProfile::from_partitions(x.clone(), y.clone(), z.clone()) {
                        debug_assert!(p.is_calabi_yau().calabi_yau);
                        out.push(p);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Profiles passing the query's filters, with Hodge data and (optionally)
/// witness status. Output order does not depend on the thread count.
pub fn enumerate(q: &EnumerationQuery) -> Result<Vec<EnumerationRow>> {
    q.validate()?;
    let candidates: Vec<_> = calabi_yau_profiles(q.max_degree)
        .into_iter()
        .filter(|p| !q.require_smooth || p.m() == p.n())
        .map(|p| {
            let hodge = HodgeStatus::of(&p);
            (p, hodge)
        })
        .filter(|(_, h)| match q.fixed_h21 {
            None => true,
            Some(v) => h.data().is_some_and(|d| d.h21 == v),
        })
        .collect();
    let opts = SearchOptions { budget: q.budget, ..SearchOptions::default() };
    candidates
        .into_par_iter()
        .map(|(profile, hodge)| {
            let witness = if !q.require_hurwitz_witness {
                WitnessStatus::NotRequested
            } else if profile.n() > opts.max_degree {
                WitnessStatus::Inconclusive
            } else {
                match find_cover(&profile, opts)? {
                    SearchOutcome::Found { witness, .. } => WitnessStatus::Found { witness },
                    SearchOutcome::NotFound { .. } => WitnessStatus::NotFound,
                    SearchOutcome::Inconclusive { .. } => WitnessStatus::Inconclusive,
                }
            };
            Ok(EnumerationRow { profile, hodge, witness })
        })
        .collect()
}

fn joined(p: &Partition) -> String {
    p.parts().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    x: String,
    y: String,
    z: String,
    r: i64,
    h11: Option<i64>,
    h21: Option<i64>,
    euler: Option<i64>,
    smooth: bool,
    witness: &'static str,
}

/// CSV export; partitions are written with space-separated parts.
pub fn to_csv(rows: &[EnumerationRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        let p = &row.profile;
        let h = row.hodge.data();
        w.serialize(CsvRow {
            n: p.n(),
            x: joined(p.x()),
            y: joined(p.y()),
            z: joined(p.z()),
            r: p.r(),
            h11: h.map(|h| h.h11),
            h21: h.map(|h| h.h21),
            euler: h.map(|h| h.euler),
            smooth: p.m() == p.n(),
            witness: row.witness.label(),
        })
        .map_err(|e| Error::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
