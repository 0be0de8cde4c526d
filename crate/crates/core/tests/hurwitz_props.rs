use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;

use k3fib::hurwitz::{
    find_cover, for_each_of_type, min_transposition_factorization, product, simplify_to_simple, Permutation,
    PermutationTuple, SearchOptions, SearchOutcome,
};
use k3fib::profile::{partitions, Partition, RamificationProfile};
use proptest::prelude::*;

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            go(cur, k + 1, out);
            cur.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), 0, &mut out);
    out.sort();
    out
}

fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        let (mut len, mut i) = (0, s);
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

// `a` first, then `b`.
fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&i| b[i]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &v) in a.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn transitive(n: usize, gens: &[&[usize]]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for g in gens {
            if !seen[g[i]] {
                seen[g[i]] = true;
                stack.push(g[i]);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn is_transposition(p: &[usize]) -> bool {
    cycle_type(p).iter().filter(|&&c| c > 1).eq([2].iter())
}

/// Brute-force existence for `r ≤ 2`. Conjugation fixes `σ0` to any one
/// permutation of its type.
fn brute_force_exists(p: &RamificationProfile, perms: &[Vec<usize>]) -> bool {
    let n = p.n();
    let of_type = |part: &Partition| -> Vec<&Vec<usize>> {
        perms.iter().filter(|q| cycle_type(q) == part.parts()).collect()
    };
    let a = of_type(p.x())[0];
    let transpositions: Vec<&Vec<usize>> = perms.iter().filter(|q| is_transposition(q)).collect();
    for b in of_type(p.z()) {
        for c in of_type(p.y()) {
            let abc = compose(&compose(a, b), c);
            let found = match p.r() {
                0 => abc.iter().enumerate().all(|(i, &v)| i == v) && transitive(n, &[a, b, c]),
                1 => {
                    let t = inverse(&abc);
                    is_transposition(&t) && transitive(n, &[a, b, c, &t])
                }
                2 => transpositions.iter().any(|t1| {
                    let t2 = inverse(&compose(&abc, t1));
                    is_transposition(&t2) && transitive(n, &[a, b, c, t1, &t2])
                }),
                _ => unreachable!(),
            };
            if found {
                return true;
            }
        }
    }
    false
}

#[test]
fn search_agrees_with_brute_force_for_small_degree() {
    let mut checked = 0;
    for n in 1..=5 {
        let perms = all_perms(n);
        let parts = partitions(n);
        for x in &parts {
            for y in &parts {
                for z in &parts {
                    let Ok(p) = RamificationProfile::from_partitions(x.clone(), y.clone(), z.clone()) else {
                        continue;
                    };
                    if p.r() > 2 {
                        continue;
                    }
                    checked += 1;
                    let expected = brute_force_exists(&p, &perms);
                    match find_cover(&p, SearchOptions::default()).unwrap() {
                        SearchOutcome::Found { witness, .. } => {
                            assert!(expected, "{p}: search found a cover brute force rules out");
                            witness.verify(&p).unwrap();
                        }
                        SearchOutcome::NotFound { .. } => assert!(!expected, "{p}: search missed a cover"),
                        SearchOutcome::Inconclusive { .. } => panic!("{p}: inconclusive"),
                    }
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn canonical_representative_is_least_of_its_type() {
    for n in 1..=6 {
        let perms = all_perms(n);
        for part in partitions(n) {
            let brute: Vec<&Vec<usize>> = perms.iter().filter(|q| cycle_type(q) == part.parts()).collect();
            let canonical = Permutation::canonical_of_type(&part);
            assert_eq!(canonical.images(), brute[0].as_slice(), "{part}");

            let mut seen = HashSet::new();
            let _ = for_each_of_type::<()>(&part, |q| {
                assert_eq!(cycle_type(q.images()), part.parts());
                assert!(seen.insert(q.images().to_vec()), "{part}: repeated {q}");
                ControlFlow::Continue(())
            });
            assert_eq!(seen.len(), brute.len(), "{part}");
        }
    }
}

/// BFS distance from the identity in the transposition Cayley graph.
fn transposition_distances(n: usize) -> HashMap<Vec<usize>, usize> {
    let mut dist = HashMap::new();
    let start: Vec<usize> = (0..n).collect();
    dist.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for a in 0..n {
            for b in a + 1..n {
                let mut q = p.clone();
                q.swap(a, b);
                if !dist.contains_key(&q) {
                    dist.insert(q.clone(), d + 1);
                    queue.push_back(q);
                }
            }
        }
    }
    dist
}

#[test]
fn factorization_is_minimal() {
    for n in 1..=6 {
        let dist = transposition_distances(n);
        assert_eq!(dist.len(), (1..=n).product::<usize>());
        for (images, d) in dist {
            let sigma = Permutation::from_images(images).unwrap();
            let f = min_transposition_factorization(&sigma);
            assert_eq!(f.len(), d, "{sigma}");
            assert_eq!(product(n, &f), sigma);
        }
    }
}

#[test]
fn simplified_witness_stays_valid() {
    let p = RamificationProfile::new(4, vec![4], vec![2, 2], vec![2, 1, 1]).unwrap();
    let w = find_cover(&p, SearchOptions::default()).unwrap().witness().cloned().unwrap();
    let merged = PermutationTuple {
        taus: vec![product(4, &w.taus)],
        ..w.clone()
    };
    let back = simplify_to_simple(&merged);
    assert!(back.is_simple());
    assert!(back.product().is_identity());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn random_factorizations(images in (1usize..=9).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let n = images.len();
        let sigma = Permutation::from_images(images).unwrap();
        let f = min_transposition_factorization(&sigma);
        prop_assert_eq!(f.len(), n - sigma.cycles().len());
        prop_assert!(f.iter().all(|t| t.is_transposition()));
        prop_assert_eq!(product(n, &f), sigma);
    }
}
