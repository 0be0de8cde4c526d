use k3fib::lattice::{admissible_automorphism_orders, euler_phi, smith_normal_form};
use k3fib::monodromy::{fixed_subspace_dim, local_monodromy, r_value, standard_system};
use k3fib::profile::{partitions, BranchPoint, RamificationProfile};
use k3fib::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn to_int(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()).unwrap()
}

/// Determinant by cofactor expansion.
fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_valid_decomposition(rows in matrix()) {
        let m = to_int(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|d| !d.is_negative()));
        for w in diag.windows(2) {
            // d_i | d_{i+1}, with zeros trailing.
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides, "{:?}", diag);
        }
    }

    #[test]
    fn square_determinant_is_product_of_invariant_factors(n in 1usize..=6, seed in prop::collection::vec(-9i64..=9, 36)) {
        let rows: Vec<Vec<i64>> = seed.chunks(6).take(n).map(|r| r[..n].to_vec()).collect();
        let s = smith_normal_form(&to_int(&rows));
        let prod = s.diagonal().iter().fold(BigInt::one(), |acc, d| acc * d);
        prop_assert_eq!(prod, BigInt::from(det(&rows).abs()));
    }

    #[test]
    fn profile_json_round_trip(n in 1usize..=10, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let parts = partitions(n);
        let pick = |i: &prop::sample::Index| parts[i.index(parts.len())].clone();
        let p = RamificationProfile::from_partitions(pick(&a), pick(&b), pick(&c));
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let text = p.to_json_string();
        let back = RamificationProfile::from_json_str(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_json_string(), text);
    }
}

#[test]
fn admissible_orders_match_naive_scan() {
    for b in 1..=6u64 {
        let naive: Vec<u64> = (1..=10 * b * b)
            .filter(|&n| {
                let phi = (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u64;
                b % phi == 0
            })
            .collect();
        assert_eq!(admissible_automorphism_orders(b), naive, "rank bound {b}");
    }
    assert_eq!(euler_phi(1), 1);
    assert_eq!(euler_phi(36), 12);
}

#[test]
fn r_value_is_rank_minus_fixed_dimension_of_the_power() {
    let sys = standard_system();
    for point in [BranchPoint::Zero, BranchPoint::Quarter, BranchPoint::Infinity] {
        for e in 1..=64u64 {
            let power = sys.generator(point).pow(e).unwrap();
            assert_eq!(local_monodromy(point, e), power, "{point:?} {e}");
            let fixed = fixed_subspace_dim(&power).unwrap();
            assert_eq!(r_value(point, e), 3 - fixed, "{point:?} {e}");
        }
    }
}
