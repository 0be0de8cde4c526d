//! Explicit functional invariants `g(s)` in the affine chart `t = 1`.
//!
//! Two constructions are provided:
//!
//! * the normal form `g = a₁ (s−1)^{x₁} ∏_{i≥2} (s−a_i)^{x_i} / s^{y₁}`, whose
//!   second pole sits at `s = ∞` with order `y₂`;
//! * the one-parameter family `g = A s^{i+j} / (s−1)^j`, with a pole of order
//!   `i` at `s = ∞`.
//!
//! The substitution `s ↦ 1 − s` carries the second chart to the first with
//! `a₁ = (−1)^i A` and `(y₁, y₂) = (j, i)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::profile::{BranchPoint, Partition, RamificationProfile};
use crate::roots::{self, Interval, IsolatedRoot, RealRoot};
use crate::scalar::fmt_rational;
use crate::{Rational, RationalPoly};

/// The branch value of the conifold-type fibre.
pub fn quarter() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(256))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "chart", rename_all = "snake_case")]
pub enum Chart {
    NormalForm,
    IjFamily { i: usize, j: usize },
}

/// A point of the source `P¹` in the chart `t = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Rational),
    Infinity,
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Finite(q) => fmt_rational(q).serialize(s),
            Place::Infinity => "inf".serialize(s),
        }
    }
}

/// A preimage of `0` or `∞` fixed by the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralPoint {
    pub place: Place,
    pub over: BranchPoint,
    pub order: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalMap {
    #[serde(serialize_with = "ser_poly")]
    numerator: RationalPoly,
    #[serde(serialize_with = "ser_poly")]
    denominator: RationalPoly,
    degree: usize,
    x: Partition,
    /// Pole orders in chart order: the finite pole, then `s = ∞`.
    y: [usize; 2],
    #[serde(serialize_with = "ser_rationals")]
    params: Vec<Rational>,
    #[serde(flatten)]
    chart: Chart,
    structural: Vec<StructuralPoint>,
}

fn ser_poly<S: Serializer>(p: &RationalPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_rationals(p.coeffs(), s)
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(fmt_rational).collect::<Vec<_>>().serialize(s)
}

fn power_of_linear(root: &Rational, e: usize) -> RationalPoly {
    RationalPoly::linear(root.clone()).pow(e)
}

impl RationalMap {
    pub fn numerator(&self) -> &RationalPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &RationalPoly {
        &self.denominator
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn x(&self) -> &Partition {
        &self.x
    }

    pub fn y(&self) -> [usize; 2] {
        self.y
    }

    pub fn params(&self) -> &[Rational] {
        &self.params
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn structural_points(&self) -> &[StructuralPoint] {
        &self.structural
    }

    /// Profile implied by the construction and a given `z`.
    pub fn profile_with(&self, z: Vec<usize>) -> Result<RamificationProfile> {
        RamificationProfile::new(self.degree, self.x.parts().to_vec(), self.y.to_vec(), z)
    }

    /// `None` at a pole.
    pub fn eval(&self, s: &Rational) -> Option<Rational> {
        let d = self.denominator.eval(s);
        (!d.is_zero()).then(|| self.numerator.eval(s) / d)
    }

    fn eval_interval(&self, iv: &Interval) -> Option<Interval> {
        iv.eval(&self.numerator).div(&iv.eval(&self.denominator))
    }

    /// Re-derives the structural ramification from the polynomials: every
    /// declared point has the declared order, there are no other zeros or
    /// poles, and the orders reproduce `x` and `y`.
    pub fn verify_structure(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Inconsistent(msg));
        if self.numerator.gcd(&self.denominator).degree() != Some(0) {
            return fail("numerator and denominator share a factor".into());
        }
        let dn = self.numerator.degree().unwrap_or(0);
        let dd = self.denominator.degree().unwrap_or(0);
        let (mut zeros, mut poles) = (Vec::new(), Vec::new());
        let (mut finite_zero, mut finite_pole) = (0, 0);
        for p in &self.structural {
            let found = match (&p.place, p.over) {
                (Place::Finite(c), BranchPoint::Zero) => {
                    finite_zero += p.order;
                    self.numerator.root_multiplicity(c)
                }
                (Place::Finite(c), BranchPoint::Infinity) => {
                    finite_pole += p.order;
                    self.denominator.root_multiplicity(c)
                }
                (Place::Infinity, BranchPoint::Zero) => dd.saturating_sub(dn),
                (Place::Infinity, BranchPoint::Infinity) => dn.saturating_sub(dd),
                (_, BranchPoint::Quarter) => return fail("structural point over 1/256".into()),
            };
            if found != p.order {
                return fail(format!("{:?}: declared order {}, found {found}", p.place, p.order));
            }
            match p.over {
                BranchPoint::Zero => zeros.push(p.order),
                _ => poles.push(p.order),
            }
        }
        if finite_zero != dn || finite_pole != dd {
            return fail("undeclared zeros or poles".into());
        }
        if Partition::new(zeros)? != self.x {
            return fail("zero orders differ from x".into());
        }
        let mut y = self.y.to_vec();
        y.sort_unstable_by(|a, b| b.cmp(a));
        poles.sort_unstable_by(|a, b| b.cmp(a));
        if poles != y {
            return fail("pole orders differ from y".into());
        }
        if dn.max(dd) != self.degree {
            return fail("degree bookkeeping".into());
        }
        Ok(())
    }

    /// Wronskian `N′D − ND′` with the structural factors `(s−c)^{e−1}`
    /// removed; its roots are the extra critical points.
    pub fn extra_critical_polynomial(&self) -> RationalPoly {
        let w = &(&self.numerator.derivative() * &self.denominator)
            - &(&self.numerator * &self.denominator.derivative());
        let structural = self
            .structural
            .iter()
            .filter_map(|p| match &p.place {
                Place::Finite(c) => Some(power_of_linear(c, p.order - 1)),
                Place::Infinity => None,
            })
            .fold(RationalPoly::one(), |acc, f| &acc * &f);
        w.exact_div(&structural).expect("structural factors divide the Wronskian")
    }

    /// `(structural, extra)` ramification; they sum to `2n − 2`.
    pub fn ramification_audit(&self) -> (usize, usize) {
        let structural = self.structural.iter().map(|p| p.order - 1).sum();
        let extra = self.extra_critical_polynomial().degree().unwrap_or(0);
        (structural, extra)
    }
}

/// Normal form with parameters `(a₁, a₂, …, a_k)`: `a₁` is the overall
/// scale, `a_i` (`i ≥ 2`) the position of the zero of order `x_i`.
pub fn build_normal_form(x: &Partition, y: [usize; 2], params: &[Rational]) -> Result<RationalMap> {
    let n = x.sum();
    let bad = |msg: String| Err(Error::InvalidParameters(msg));
    if y[0] == 0 || y[1] == 0 || y[0] + y[1] != n {
        return bad(format!("y = {y:?} must be two positive parts summing to {n}"));
    }
    if params.len() != x.len() {
        return bad(format!("expected {} parameters, got {}", x.len(), params.len()));
    }
    if let Some(i) = params.iter().position(Zero::is_zero) {
        return bad(format!("parameter a{} is zero", i + 1));
    }
    let one = Rational::one();
    let mut positions = vec![one.clone()];
    for (i, a) in params.iter().enumerate().skip(1) {
        if positions.contains(a) {
            return bad(format!("parameter a{} = {} coincides with another zero", i + 1, fmt_rational(a)));
        }
        positions.push(a.clone());
    }

    let mut numerator = RationalPoly::constant(params[0].clone());
    let mut structural = Vec::new();
    for (pos, &e) in positions.iter().zip(x.parts()) {
        numerator = &numerator * &power_of_linear(pos, e);
        structural.push(StructuralPoint { place: Place::Finite(pos.clone()), over: BranchPoint::Zero, order: e });
    }
    let denominator = RationalPoly::monomial(one, y[0]);
    structural.push(StructuralPoint {
        place: Place::Finite(Rational::zero()),
        over: BranchPoint::Infinity,
        order: y[0],
    });
    structural.push(StructuralPoint { place: Place::Infinity, over: BranchPoint::Infinity, order: y[1] });

    let map = RationalMap {
        numerator,
        denominator,
        degree: n,
        x: x.clone(),
        y,
        params: params.to_vec(),
        chart: Chart::NormalForm,
        structural,
    };
    map.verify_structure()?;
    Ok(map)
}

/// `g = A s^{i+j} / (s−1)^j` for `i, j ∈ {1, 2, 4}`.
pub fn build_ij_family(i: usize, j: usize, a: &Rational) -> Result<RationalMap> {
    const ALLOWED: [usize; 3] = [1, 2, 4];
    if !ALLOWED.contains(&i) || !ALLOWED.contains(&j) {
        return Err(Error::InvalidParameters(format!("(i, j) = ({i}, {j}): both must lie in {{1, 2, 4}}")));
    }
    if a.is_zero() {
        return Err(Error::InvalidParameters("A must be nonzero".into()));
    }
    let n = i + j;
    let map = RationalMap {
        numerator: RationalPoly::monomial(a.clone(), n),
        denominator: power_of_linear(&Rational::one(), j),
        degree: n,
        x: Partition::new(vec![n])?,
        y: [j, i],
        params: vec![a.clone()],
        chart: Chart::IjFamily { i, j },
        structural: vec![
            StructuralPoint { place: Place::Finite(Rational::zero()), over: BranchPoint::Zero, order: n },
            StructuralPoint { place: Place::Finite(Rational::one()), over: BranchPoint::Infinity, order: j },
            StructuralPoint { place: Place::Infinity, over: BranchPoint::Infinity, order: i },
        ],
    };
    map.verify_structure()?;
    Ok(map)
}

/// The same cover in the normal-form chart, via `s ↦ 1 − s`.
pub fn to_normal_form(f: &RationalMap) -> Result<RationalMap> {
    match f.chart {
        Chart::NormalForm => Ok(f.clone()),
        Chart::IjFamily { i, j } => {
            let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
            build_normal_form(&f.x, [j, i], &[sign * &f.params[0]])
        }
    }
}

/// An exact rational or an enclosing interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enclosure {
    Exact(Rational),
    Interval(Interval),
}

impl Enclosure {
    pub fn contains(&self, q: &Rational) -> bool {
        match self {
            Enclosure::Exact(v) => v == q,
            Enclosure::Interval(iv) => iv.contains(q),
        }
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Enclosure::Exact(q) => fmt_rational(q).serialize(s),
            Enclosure::Interval(iv) => iv.serialize(s),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub location: Enclosure,
    /// `e − 1` at this point.
    pub ramification: usize,
    pub value: Enclosure,
    #[serde(skip)]
    root: Option<IsolatedRoot>,
}

impl CriticalPoint {
    fn new(f: &RationalMap, root: RealRoot, ramification: usize) -> Self {
        match root {
            RealRoot::Rational(s) => {
                let v = f.eval(&s).expect("critical points are not poles");
                CriticalPoint {
                    location: Enclosure::Exact(s),
                    ramification,
                    value: Enclosure::Exact(v),
                    root: None,
                }
            }
            RealRoot::Irrational(mut r) => {
                let value = loop {
                    if let Some(v) = f.eval_interval(r.interval()) {
                        break v;
                    }
                    r.bisect();
                };
                CriticalPoint {
                    location: Enclosure::Interval(r.interval().clone()),
                    ramification,
                    value: Enclosure::Interval(value),
                    root: Some(r),
                }
            }
        }
    }

    /// Bisect the location once more and re-enclose the value.
    pub fn refine(&mut self, f: &RationalMap) {
        if let Some(r) = &mut self.root {
            r.bisect();
            self.location = Enclosure::Interval(r.interval().clone());
            if let Some(v) = f.eval_interval(r.interval()) {
                self.value = Enclosure::Interval(v);
            }
        }
    }

    /// Decision about `value = 1/256` from the enclosure alone: `None` while
    /// the interval still contains `1/256`.
    pub fn enclosure_verdict(&self) -> Option<bool> {
        let q = quarter();
        match &self.value {
            Enclosure::Exact(v) => Some(*v == q),
            Enclosure::Interval(iv) => (!iv.contains(&q)).then_some(false),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalData {
    /// Real extra critical points, ascending.
    pub points: Vec<CriticalPoint>,
    /// Distinct non-real extra critical points.
    pub nonreal_points: usize,
    pub structural_ramification: usize,
    pub extra_ramification: usize,
}

fn real_critical_points(f: &RationalMap, q: &RationalPoly, width: &Rational) -> Vec<CriticalPoint> {
    roots::real_roots(q, width)
        .into_iter()
        .map(|(r, m)| CriticalPoint::new(f, r, m))
        .collect()
}

/// Extra critical points (away from the structural preimages of `0` and
/// `∞`) with their critical values. Irrational points are isolated to
/// `width`.
pub fn critical_values(f: &RationalMap, width: &Rational) -> CriticalData {
    let q = f.extra_critical_polynomial();
    let points = real_critical_points(f, &q, width);
    let distinct = q.square_free().degree().unwrap_or(0);
    let (structural, extra) = f.ramification_audit();
    CriticalData {
        nonreal_points: distinct - points.len(),
        points,
        structural_ramification: structural,
        extra_ramification: extra,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CollisionReport {
    pub collides: bool,
    /// Real critical points with value exactly `1/256`.
    pub witnesses: Vec<CriticalPoint>,
    pub nonreal_witnesses: usize,
}

/// Whether some extra critical value equals `1/256`: decided exactly by
/// `gcd(Q, 256N − D)` where `Q` is the extra critical polynomial.
pub fn detect_quarter_collision(f: &RationalMap, width: &Rational) -> CollisionReport {
    let q = f.extra_critical_polynomial();
    let level = &f.numerator.scale(&Rational::from_integer(BigInt::from(256))) - &f.denominator;
    let g = q.gcd(&level);
    let distinct = g.square_free().degree().unwrap_or(0);
    let witnesses: Vec<_> = if distinct == 0 {
        Vec::new()
    } else {
        real_critical_points(f, &q, width)
            .into_iter()
            .filter(|p| match (&p.location, &p.root) {
                (Enclosure::Exact(s), _) => g.eval(s).is_zero(),
                (_, Some(r)) => {
                    let h = r.poly().gcd(&g);
                    let iv = r.interval();
                    h.degree().unwrap_or(0) > 0
                        && roots::count_roots_in(&roots::sturm_sequence(&h), &iv.lo, &iv.hi) > 0
                }
                _ => false,
            })
            .collect()
    };
    CollisionReport {
        collides: distinct > 0,
        nonreal_witnesses: distinct - witnesses.len(),
        witnesses,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "ser_rational")]
    pub a: Rational,
    pub critical_values: Vec<Enclosure>,
    pub collides: bool,
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    fmt_rational(q).serialize(s)
}

/// `points` evenly spaced values of `A` from `from` to `to` inclusive.
pub fn sweep_grid(from: &Rational, to: &Rational, points: usize) -> Result<Vec<Rational>> {
    match points {
        0 => Err(Error::InvalidParameters("a sweep needs at least one point".into())),
        1 => Ok(vec![from.clone()]),
        _ => {
            let step = (to - from) / Rational::from_integer(BigInt::from(points - 1));
            Ok((0..points)
                .map(|t| from + &step * Rational::from_integer(BigInt::from(t)))
                .collect())
        }
    }
}

/// Collision verdicts of the `(i, j)` family over a grid of `A`, in grid
/// order.
pub fn sweep(i: usize, j: usize, grid: &[Rational]) -> Result<Vec<SweepRow>> {
    let width = roots::default_width();
    grid.iter()
        .map(|a| {
            let f = build_ij_family(i, j, a)?;
            let crit = critical_values(&f, &width);
            Ok(SweepRow {
                a: a.clone(),
                critical_values: crit.points.into_iter().map(|p| p.value).collect(),
                collides: detect_quarter_collision(&f, &width).collides,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn single_exact(f: &RationalMap) -> (Rational, Rational) {
        let c = critical_values(f, &roots::default_width());
        assert_eq!(c.points.len(), 1);
        assert_eq!(c.nonreal_points, 0);
        match (&c.points[0].location, &c.points[0].value) {
            (Enclosure::Exact(s), Enclosure::Exact(v)) => (s.clone(), v.clone()),
            other => panic!("expected exact data, got {other:?}"),
        }
    }

    #[test]
    fn smallest_normal_form() {
        let f = build_normal_form(&part(&[2]), [1, 1], &[rat(1, 1)]).unwrap();
        assert_eq!(f.numerator(), &RationalPoly::from_ints(&[1, -2, 1]));
        assert_eq!(f.denominator(), &RationalPoly::from_ints(&[0, 1]));
        assert_eq!(single_exact(&f), (rat(-1, 1), rat(-4, 1)));
    }

    #[test]
    fn two_simple_zeros() {
        let f = build_normal_form(&part(&[1, 1]), [1, 1], &[rat(1, 1), rat(2, 1)]).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.numerator(), &RationalPoly::from_ints(&[2, -3, 1]));
        assert_eq!(f.ramification_audit(), (0, 2));
    }

    #[test]
    fn parameter_errors() {
        let x = part(&[2, 1]);
        assert!(build_normal_form(&x, [2, 1], &[rat(1, 1), rat(0, 1)]).is_err());
        assert!(build_normal_form(&x, [2, 1], &[rat(0, 1), rat(3, 1)]).is_err());
        assert!(build_normal_form(&x, [2, 1], &[rat(5, 1), rat(1, 1)]).is_err());
        assert!(build_normal_form(&part(&[2, 1, 1]), [2, 2], &[rat(5, 1), rat(3, 1), rat(3, 1)]).is_err());
        assert!(build_normal_form(&x, [2, 2], &[rat(1, 1), rat(3, 1)]).is_err());
        assert!(build_normal_form(&x, [3, 0], &[rat(1, 1), rat(3, 1)]).is_err());
        assert!(build_normal_form(&x, [2, 1], &[rat(1, 1)]).is_err());
        assert!(build_normal_form(&x, [2, 1], &[rat(-1, 1), rat(3, 1)]).is_ok());
    }

    #[test]
    fn ij_family_examples() {
        let a = rat(7, 3);
        let f = build_ij_family(1, 4, &a).unwrap();
        assert_eq!(f.x().parts(), &[5]);
        assert_eq!(f.y(), [4, 1]);
        assert_eq!(single_exact(&f), (rat(5, 1), rat(3125, 256) * &a));
        assert_eq!(build_ij_family(1, 1, &a).unwrap().degree(), 2);
        let f = build_ij_family(2, 2, &a).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(single_exact(&f), (rat(2, 1), rat(16, 1) * &a));
        assert!(build_ij_family(3, 1, &a).is_err());
        assert!(build_ij_family(1, 1, &rat(0, 1)).is_err());
    }

    #[test]
    fn collisions() {
        let w = roots::default_width();
        let hit = detect_quarter_collision(&build_ij_family(1, 4, &rat(1, 3125)).unwrap(), &w);
        assert!(hit.collides);
        assert_eq!(hit.witnesses.len(), 1);
        assert_eq!(hit.witnesses[0].location, Enclosure::Exact(rat(5, 1)));
        assert!(!detect_quarter_collision(&build_ij_family(1, 4, &rat(1, 1)).unwrap(), &w).collides);
        let f = build_normal_form(&part(&[2]), [1, 1], &[rat(-1, 1024)]).unwrap();
        assert!(detect_quarter_collision(&f, &w).collides);
    }

    #[test]
    fn chart_change_preserves_values() {
        for (i, j) in [(1, 1), (1, 4), (2, 1), (4, 4)] {
            let f = build_ij_family(i, j, &rat(-3, 7)).unwrap();
            let g = to_normal_form(&f).unwrap();
            for s in [rat(2, 3), rat(-5, 1), rat(9, 4)] {
                let u = rat(1, 1) - &s;
                assert_eq!(f.eval(&s), g.eval(&u), "(i,j)=({i},{j}) at s={s}");
            }
            let (_, v) = single_exact(&f);
            assert_eq!(single_exact(&g).1, v);
        }
    }

    #[test]
    fn irrational_critical_points_are_enclosed() {
        // x = [1,1,1], a₂ = 2, a₃ = 3: Wronskian has irrational roots
        let f = build_normal_form(&part(&[1, 1, 1]), [2, 1], &[rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap();
        let c = critical_values(&f, &roots::default_width());
        assert_eq!(c.structural_ramification + c.extra_ramification, 2 * 3 - 2);
        assert!(c.points.iter().any(|p| matches!(p.location, Enclosure::Interval(_))));
        for p in &c.points {
            if let Enclosure::Interval(iv) = &p.location {
                assert!(iv.width() <= roots::default_width());
            }
        }
    }

    #[test]
    fn sweep_grid_endpoints() {
        let g = sweep_grid(&rat(1, 3125), &rat(100, 3125), 100).unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!(g[0], rat(1, 3125));
        assert_eq!(g[99], rat(100, 3125));
        assert!(sweep_grid(&rat(0, 1), &rat(1, 1), 0).is_err());
    }
}
