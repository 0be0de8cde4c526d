//! Runtime self-check behind the `selftest` subcommand.

use std::time::Instant;

use serde::Serialize;

use crate::enumerate::{calabi_yau_profiles, enumerate, EnumerationQuery};
use crate::family;
use crate::hodge;
use crate::hurwitz::{find_cover, SearchOptions, SearchOutcome};
use crate::lattice;
use crate::monodromy;
use crate::profile::{partitions, BranchPoint, RamificationProfile};
use crate::scalar::{fmt_rational, rat};
use crate::transitions::{self, DegenerationWitness};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn() -> (bool, String);

const CHECKS: [(&str, Check); 11] = [
    ("quintic mirror Hodge numbers", quintic),
    ("identity cover has h1 = 0", identity_cover),
    ("monodromy relations", relations),
    ("R values against closed forms", r_values),
    ("h21 closed form against monodromy", h21_cross),
    ("canonical degree criterion", canonical_degree),
    ("Hurwitz existence and obstruction", hurwitz),
    ("(1,4) family collision sweep", collision),
    ("h21 = 1 smooth classification", classification),
    ("M2 lattice data", lattice_suite),
    ("degeneration round trip", degenerations),
];

pub fn run() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let start = Instant::now();
            let (passed, detail) = check();
            CheckResult {
                id: i as u8 + 1,
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn quintic() -> (bool, String) {
    match hodge::hodge_summary(&RamificationProfile::quintic_mirror()) {
        Ok(h) => (
            (h.h11, h.h21, h.euler) == (101, 1, 200),
            format!("h11={} h21={} euler={}", h.h11, h.h21, h.euler),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn identity_cover() -> (bool, String) {
    let p = RamificationProfile::new(1, vec![1], vec![1], vec![1]).expect("valid");
    let h1 = monodromy::h1_pullback(&p);
    (h1 == 0, format!("h1={h1}"))
}

fn relations() -> (bool, String) {
    let rel = monodromy::standard_system().check_relations();
    let failed: Vec<_> = rel.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
    (failed.is_empty(), format!("{} relations, failed: {failed:?}", rel.len()))
}

fn r_values() -> (bool, String) {
    let mut bad = 0;
    for e in 1..=64u64 {
        let gcd = |a: u64, b: u64| num_integer::gcd(a, b) as usize;
        bad += usize::from(monodromy::r_value(BranchPoint::Infinity, e) != 4 - gcd(e, 4));
        bad += usize::from(monodromy::r_value(BranchPoint::Quarter, e) != 2 - gcd(e, 2));
        bad += usize::from(monodromy::r_value(BranchPoint::Zero, e) != 2);
    }
    (bad == 0, format!("192 cases, {bad} mismatches"))
}

fn h21_cross() -> (bool, String) {
    let mut checked = 0;
    let mut bad = 0;
    for p in calabi_yau_profiles(10).iter().filter(|p| p.l() == 2) {
        checked += 1;
        let a = hodge::h21_closed_form(p);
        let b = hodge::h21_from_monodromy(p);
        if a.is_err() || a != b {
            bad += 1;
        }
    }
    (bad == 0, format!("{checked} profiles, {bad} mismatches"))
}

fn canonical_degree() -> (bool, String) {
    let mut checked = 0;
    let mut bad = 0;
    for n in 1..=12 {
        let parts = partitions(n);
        for x in &parts {
            for y in &parts {
                for z in &parts {
                    let Ok(p) = RamificationProfile::from_partitions(x.clone(), y.clone(), z.clone()) else {
                        continue;
                    };
                    checked += 1;
                    let ys = y.parts();
                    let expected = (ys.len() == 2 && ys.iter().all(|v| matches!(v, 1 | 2 | 4))) || ys == [8];
                    if (p.canonical_degree() == 0) != expected || p.is_calabi_yau().calabi_yau != expected {
                        bad += 1;
                    }
                }
            }
        }
    }
    (bad == 0, format!("{checked} profiles, {bad} mismatches"))
}

fn hurwitz() -> (bool, String) {
    let opts = SearchOptions::default();
    let q = RamificationProfile::quintic_mirror();
    let found = matches!(find_cover(&q, opts), Ok(SearchOutcome::Found { ref witness, .. }) if witness.verify(&q).is_ok());
    let k4 = RamificationProfile::new(4, vec![2, 2], vec![2, 2], vec![3, 1]).expect("valid");
    let absent = matches!(find_cover(&k4, opts), Ok(SearchOutcome::NotFound { .. }));
    (found && absent, format!("quintic witness: {found}, obstruction certified: {absent}"))
}

fn collision() -> (bool, String) {
    let grid = family::sweep_grid(&rat(1, 3125), &rat(100, 3125), 100).expect("grid");
    match family::sweep(1, 4, &grid) {
        Ok(rows) => {
            let hits: Vec<_> = rows.iter().filter(|r| r.collides).map(|r| r.a.clone()).collect();
            let shown: Vec<_> = hits.iter().map(fmt_rational).collect();
            (hits == [rat(1, 3125)], format!("{} values of A, collisions at {shown:?}", rows.len()))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn classification() -> (bool, String) {
    let q = EnumerationQuery {
        require_smooth: true,
        fixed_h21: Some(1),
        ..EnumerationQuery::new(8)
    };
    let mut expected: Vec<_> = [(1, 1), (2, 1), (4, 1), (2, 2), (4, 2), (4, 4)]
        .iter()
        .map(|&(i, j)| RamificationProfile::ij_profile(i, j).expect("valid"))
        .collect();
    expected.sort();
    match enumerate(&q) {
        Ok(rows) => {
            let got: Vec<_> = rows.into_iter().map(|r| r.profile).collect();
            (got == expected, format!("{} profiles", got.len()))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn lattice_suite() -> (bool, String) {
    let Ok(m2) = lattice::build_standard("M2") else {
        return (false, "M2 missing".into());
    };
    let disc = m2.discriminant_group().unwrap_or_default();
    let orders = lattice::admissible_automorphism_orders(3);
    let ok = m2.rank() == 19
        && m2.signature() == (1, 18)
        && disc == [4.into()]
        && orders == [1, 2];
    (
        ok,
        format!("rank {} signature {:?} discriminant {disc:?} orders(3) {orders:?}", m2.rank(), m2.signature()),
    )
}

fn degenerations() -> (bool, String) {
    let pool: Vec<_> = calabi_yau_profiles(8).into_iter().filter(|p| p.r() >= 1).collect();
    let stride = pool.len() / 50;
    let opts = SearchOptions::default();
    let (mut realized, mut impossible, mut bad) = (0, 0, 0);
    for p in pool.iter().step_by(stride.max(1)).take(50) {
        for (target, parts) in transitions::all_degenerations(p) {
            let Ok(report) = transitions::degenerate(p, target, parts) else {
                bad += 1;
                continue;
            };
            if transitions::branching_relation(&report.after) != 2 {
                bad += 1;
            }
            match transitions::degeneration_witness(&report, opts, 100_000) {
                Ok(DegenerationWitness::Found { after, .. }) if after.verify(&report.after).is_ok() => {
                    realized += 1
                }
                Ok(DegenerationWitness::Impossible { .. })
                    if matches!(find_cover(&report.after, opts), Ok(SearchOutcome::NotFound { .. })) =>
                {
                    impossible += 1
                }
                _ => bad += 1,
            }
        }
    }
    (
        bad == 0,
        format!("{realized} transformed witnesses, {impossible} unrealizable targets, {bad} failures"),
    )
}

#[cfg(test)]
mod tests {
    #[test]
    fn cheap_checks_pass() {
        for (name, check) in [super::CHECKS[0], super::CHECKS[1], super::CHECKS[2], super::CHECKS[9]] {
            let (ok, detail) = check();
            assert!(ok, "{name}: {detail}");
        }
    }
}
