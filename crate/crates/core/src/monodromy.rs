//! Monodromy of the rank 3 transcendental local system of the mirror-quartic
//! family, and the cohomology of its pull-backs along `g`.
//!
//! The global representation comes from Levelt's companion-matrix
//! construction for the hypergeometric equation with exponents
//! `(1/4, 1/2, 3/4; 1, 1, 1)`. Everything is computed with the integer
//! representatives over exact rationals; no complex diagonal forms are used.
//!
//! Loop convention: generators are stored so that
//! `g_quarter · g_zero · g_inf = I`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::euler_phi;
use crate::profile::{BranchPoint, RamificationProfile};
use crate::{ExactMatrix, Integer, Rational, RationalPoly};

/// Rank of the transcendental local system.
pub const RANK: usize = 3;

/// Cyclotomic polynomial `Φ_d` over the rationals.
pub fn cyclotomic(d: u64) -> RationalPoly {
    assert!(d >= 1);
    let mut p = &RationalPoly::monomial(Rational::one(), d as usize) - &RationalPoly::one();
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        p = p.exact_div(&cyclotomic(e)).expect("Φ_e divides t^d - 1");
    }
    p
}

/// `∏ (t − e^{2πi·a})` over the exponents, provided the product has integer
/// coefficients. That happens exactly when, for every denominator `d`, the
/// exponents with reduced denominator `d` form whole copies of the set of
/// primitive `d`-th roots of unity.
pub fn exponent_polynomial(exponents: &[Rational]) -> Result<RationalPoly> {
    let mut by_denominator: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for e in exponents {
        let frac = e - e.floor();
        let d = frac
            .denom()
            .to_u64()
            .ok_or_else(|| Error::NonIntegralPolynomial(format!("denominator of {e} too large")))?;
        let k = frac.numer().to_u64().expect("fractional part is nonnegative");
        by_denominator.entry(d).or_default().push(k);
    }
    let mut poly = RationalPoly::one();
    for (d, mut ks) in by_denominator {
        let phi = euler_phi(d) as usize;
        ks.sort_unstable();
        let copies = ks.len() / phi;
        let expected: Vec<u64> = (0..d)
            .filter(|k| k.gcd(&d) == 1)
            .flat_map(|k| std::iter::repeat_n(k, copies))
            .collect();
        if ks.len() % phi != 0 || ks != expected {
            return Err(Error::NonIntegralPolynomial(format!(
                "exponents with denominator {d} do not form full sets of primitive roots"
            )));
        }
        poly = &poly * &cyclotomic(d).pow(copies);
    }
    Ok(poly)
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal and
/// `−c_0, …, −c_{d−1}` down the last column.
pub fn companion(p: &RationalPoly) -> ExactMatrix {
    let d = p.degree().expect("nonzero polynomial");
    assert!(p.leading().is_one(), "companion matrix needs a monic polynomial");
    let mut m = ExactMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Rational::one();
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.coeff(i);
    }
    m
}

/// Levelt's pair `(A, B)`: companion matrices of the polynomials whose
/// roots are `e^{2πi·a_j}` and `e^{2πi·b_j}`.
pub fn levelt_companion(a: &[Rational], b: &[Rational]) -> Result<(ExactMatrix, ExactMatrix)> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Shape(format!(
            "exponent lists must be nonempty with equal length, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok((companion(&exponent_polynomial(a)?), companion(&exponent_polynomial(b)?)))
}

/// Local monodromies around `λ = ∞`, `0` and `1/256`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranscendentalSystem {
    pub g_inf: ExactMatrix,
    pub g_zero: ExactMatrix,
    pub g_quarter: ExactMatrix,
}

const PRINTED_G_INF: [[i64; 3]; 3] = [[0, 0, -1], [1, 0, -1], [0, 1, -1]];
const PRINTED_G_ZERO: [[i64; 3]; 3] = [[3, 1, 0], [-3, 0, 1], [1, 0, 0]];
const PRINTED_G_QUARTER: [[i64; 3]; 3] = [[1, 0, -4], [0, 1, 2], [0, 0, -1]];

impl TranscendentalSystem {
    fn build() -> Self {
        let q = |p: i64, d: i64| Rational::new(p.into(), d.into());
        let (a, b) = levelt_companion(&[q(1, 4), q(1, 2), q(3, 4)], &[q(1, 1), q(1, 1), q(1, 1)])
            .expect("hypergeometric exponents are integral");
        let b_inv = b.inverse().unwrap().expect("companion of (t-1)^3 is invertible");
        let a_inv = a.inverse().unwrap().expect("companion of t^3+t^2+t+1 is invertible");
        let sys = TranscendentalSystem {
            g_quarter: &a_inv * &b,
            g_zero: b_inv,
            g_inf: a,
        };
        assert_eq!(sys.g_inf, ExactMatrix::from_ints(&PRINTED_G_INF));
        assert_eq!(sys.g_zero, ExactMatrix::from_ints(&PRINTED_G_ZERO));
        assert_eq!(sys.g_quarter, ExactMatrix::from_ints(&PRINTED_G_QUARTER));
        sys
    }

    pub fn generator(&self, point: BranchPoint) -> &ExactMatrix {
        match point {
            BranchPoint::Zero => &self.g_zero,
            BranchPoint::Quarter => &self.g_quarter,
            BranchPoint::Infinity => &self.g_inf,
        }
    }

    /// The relation suite, one named boolean per relation.
    pub fn check_relations(&self) -> Vec<(String, bool)> {
        let id = ExactMatrix::identity(RANK);
        let unip = &self.g_zero - &id;
        let det_unit = |m: &ExactMatrix| m.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
        vec![
            (
                "g_quarter*g_zero*g_inf = I".into(),
                (&(&self.g_quarter * &self.g_zero) * &self.g_inf).is_identity(),
            ),
            ("g_inf^4 = I".into(), self.g_inf.pow(4).unwrap().is_identity()),
            ("(g_zero - I)^3 = 0".into(), unip.pow(3).unwrap().is_zero()),
            ("(g_zero - I)^2 != 0".into(), !unip.pow(2).unwrap().is_zero()),
            ("g_quarter^2 = I".into(), self.g_quarter.pow(2).unwrap().is_identity()),
            (
                "charpoly(g_inf) = t^3+t^2+t+1".into(),
                self.g_inf.char_poly().unwrap() == RationalPoly::from_ints(&[1, 1, 1, 1]),
            ),
            ("trace(g_zero) = 3".into(), self.g_zero.trace() == Rational::from_integer(3.into())),
            (
                "det of generators in {+1,-1}".into(),
                det_unit(&self.g_inf) && det_unit(&self.g_zero) && det_unit(&self.g_quarter),
            ),
        ]
    }
}

/// The mirror-quartic system, built once from the Levelt data.
pub fn standard_system() -> &'static TranscendentalSystem {
    static SYSTEM: OnceLock<TranscendentalSystem> = OnceLock::new();
    SYSTEM.get_or_init(TranscendentalSystem::build)
}

/// `dim ker(mat − I)`.
pub fn fixed_subspace_dim(mat: &ExactMatrix) -> Result<usize> {
    if !mat.is_square() {
        return Err(Error::Shape(format!(
            "fixed subspace needs a square matrix, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    Ok((mat - &ExactMatrix::identity(mat.rows())).nullity())
}

/// Local monodromy of the pull-back at a point of ramification index
/// `ram_index` over `point`.
pub fn local_monodromy(point: BranchPoint, ram_index: u64) -> ExactMatrix {
    assert!(ram_index >= 1, "ramification index must be positive");
    standard_system().generator(point).pow(ram_index).expect("square")
}

/// `R(q) = rank − dim(fixed space of γ^e)` at a preimage with
/// ramification index `e`.
pub fn r_value(point: BranchPoint, ram_index: u64) -> usize {
    static CACHE: OnceLock<std::sync::Mutex<BTreeMap<(BranchPoint, u64), usize>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&(point, ram_index)) {
        return v;
    }
    let v = RANK - fixed_subspace_dim(&local_monodromy(point, ram_index)).expect("square");
    cache.lock().unwrap().insert((point, ram_index), v);
    v
}

/// `h¹(P¹, j_* g^*V)` for the pulled-back transcendental system: the sum of
/// `R(q)` over all preimages of the three special values, minus `2·rank`.
/// Ramification away from the special values has trivial local monodromy
/// and contributes nothing.
pub fn h1_pullback(p: &RamificationProfile) -> i64 {
    let total: usize = BranchPoint::ALL
        .iter()
        .map(|&pt| {
            p.over(pt)
                .parts()
                .iter()
                .map(|&e| r_value(pt, e as u64))
                .sum::<usize>()
        })
        .sum();
    total as i64 - 2 * RANK as i64
}

impl RamificationProfile {
    pub fn h1_pullback(&self) -> i64 {
        h1_pullback(self)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyReport {
    pub point: BranchPoint,
    pub index: u64,
    pub matrix: ExactMatrix,
    pub fixed_dim: usize,
    pub r_value: usize,
}

pub fn report(point: BranchPoint, index: u64) -> MonodromyReport {
    let matrix = local_monodromy(point, index);
    let fixed_dim = fixed_subspace_dim(&matrix).expect("square");
    MonodromyReport {
        point,
        index,
        matrix,
        fixed_dim,
        r_value: RANK - fixed_dim,
    }
}

/// Integer coefficients of a rational polynomial, if it has any.
pub fn integer_coefficients(p: &RationalPoly) -> Option<Vec<Integer>> {
    p.coeffs()
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}
