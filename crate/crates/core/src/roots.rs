//! Exact real-root isolation over the rationals with Sturm sequences.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::scalar::fmt_rational;
use crate::{Rational, RationalPoly};

/// Default isolation width, `2⁻⁶⁴`.
pub fn default_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 64)
}

/// Closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let products = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// `None` when the interval contains zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.contains(&Rational::zero()) {
            return None;
        }
        let recip = Interval::new(o.hi.recip(), o.lo.recip());
        Some(self.mul(&recip))
    }

    /// Horner evaluation; encloses `{ p(x) : x ∈ self }`.
    pub fn eval(&self, p: &RationalPoly) -> Self {
        p.coeffs()
            .iter()
            .rev()
            .fold(Interval::point(Rational::zero()), |acc, c| {
                acc.mul(self).add(&Interval::point(c.clone()))
            })
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rational(&self.lo), fmt_rational(&self.hi)].serialize(s)
    }
}

/// Sturm chain `p, p′, −rem(p, p′), …`, each member scaled by a positive
/// constant to keep coefficients small.
pub fn sturm_sequence(p: &RationalPoly) -> Vec<RationalPoly> {
    let normalize = |q: RationalPoly| {
        if q.is_zero() {
            q
        } else {
            let s = q.leading().abs().recip();
            q.scale(&s)
        }
    };
    let mut seq = vec![normalize(p.clone())];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(normalize(p.derivative()));
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(normalize(-&r));
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign(q: &Rational) -> Ordering {
    q.cmp(&Rational::zero())
}

fn changes_at(seq: &[RationalPoly], x: &Rational) -> usize {
    sign_changes(seq.iter().map(|q| sign(&q.eval(x))))
}

fn changes_at_infinity(seq: &[RationalPoly], positive: bool) -> usize {
    sign_changes(seq.iter().map(|q| {
        let s = sign(&q.leading());
        if !positive && q.degree().unwrap_or(0) % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }))
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn count_roots_in(seq: &[RationalPoly], lo: &Rational, hi: &Rational) -> usize {
    changes_at(seq, lo).saturating_sub(changes_at(seq, hi))
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &RationalPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(p);
    changes_at_infinity(&seq, false) - changes_at_infinity(&seq, true)
}

/// Cauchy bound: every root has absolute value below it.
pub fn cauchy_bound(p: &RationalPoly) -> Rational {
    let lc = p.leading();
    let max = p
        .coeffs()
        .iter()
        .map(|c| (c / &lc).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    max + Rational::one()
}

/// Square-free decomposition (Yun): monic, pairwise coprime factors `a_i`
/// with `p = lc · ∏ a_i^i`. Constant input gives an empty list.
pub fn square_free_decomposition(p: &RationalPoly) -> Vec<(RationalPoly, usize)> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let a = p.monic();
    let da = a.derivative();
    let b = a.gcd(&da);
    let mut c = a.exact_div(&b).unwrap();
    let mut d = &da.exact_div(&b).unwrap() - &c.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let f = c.gcd(&d);
        c = c.exact_div(&f).unwrap();
        d = &d.exact_div(&f).unwrap() - &c.derivative();
        if f.degree().unwrap_or(0) > 0 {
            out.push((f, i));
        }
        i += 1;
    }
    out
}

/// The rational with least denominator in `[lo, hi]` (smallest absolute
/// value among integers).
pub fn simplest_rational_in(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let fl = lo.floor();
    if &fl == lo || fl.clone() + Rational::one() <= *hi {
        let zero = Rational::zero();
        return if lo <= &zero && &zero <= hi {
            zero
        } else if lo > &zero {
            lo.ceil()
        } else {
            hi.floor()
        };
    }
    let inner = simplest_rational_in(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Irrational real root of a square-free polynomial, isolated in the open
/// interval `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    poly: RationalPoly,
    sturm: Vec<RationalPoly>,
    interval: Interval,
}

impl IsolatedRoot {
    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        let mid = self.interval.midpoint();
        if count_roots_in(&self.sturm, &self.interval.lo, &mid) == 1 {
            self.interval.hi = mid;
        } else {
            self.interval.lo = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while &self.interval.width() > width {
            self.bisect();
        }
    }
}

#[derive(Clone, Debug)]
pub enum RealRoot {
    Rational(Rational),
    Irrational(IsolatedRoot),
}

impl RealRoot {
    pub fn interval(&self) -> Interval {
        match self {
            RealRoot::Rational(q) => Interval::point(q.clone()),
            RealRoot::Irrational(r) => r.interval.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealRoot::Rational(q) => Some(q),
            RealRoot::Irrational(_) => None,
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        if let RealRoot::Irrational(r) = self {
            r.refine_to(width);
        }
    }
}

/// Leading coefficient of the primitive integer multiple of `p`.
fn integer_leading(p: &RationalPoly) -> BigInt {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().unwrap() / g).abs()
}

/// Distinct real roots of a square-free polynomial, ascending. Rational roots
/// are recognized exactly; the others are isolated to at most `width`.
fn isolate_square_free(p: &RationalPoly, width: &Rational) -> Vec<RealRoot> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = sturm_sequence(p);
    let bound = cauchy_bound(p);
    let mut stack = vec![Interval::new(-bound.clone(), bound)];
    let mut isolated = Vec::new();
    while let Some(iv) = stack.pop() {
        match count_roots_in(&sturm, &iv.lo, &iv.hi) {
            0 => {}
            1 => isolated.push(iv),
            _ => {
                let mid = iv.midpoint();
                stack.push(Interval::new(mid.clone(), iv.hi.clone()));
                stack.push(Interval::new(iv.lo, mid));
            }
        }
    }
    isolated.sort_by(|a, b| a.lo.cmp(&b.lo));

    let lc = integer_leading(p);
    let rational_gap = Rational::new(BigInt::one(), &lc * &lc);
    isolated
        .into_iter()
        .map(|iv| {
            if p.eval(&iv.hi).is_zero() {
                return RealRoot::Rational(iv.hi);
            }
            let mut root = IsolatedRoot { poly: p.clone(), sturm: sturm.clone(), interval: iv };
            // Any rational root has denominator dividing `lc`; two such
            // rationals are at least `1/lc²` apart.
            while root.interval.width() >= rational_gap {
                let mid = root.interval.midpoint();
                if p.eval(&mid).is_zero() {
                    return RealRoot::Rational(mid);
                }
                root.bisect();
            }
            let candidate = simplest_rational_in(&root.interval.lo, &root.interval.hi);
            if candidate.denom() <= &lc && p.eval(&candidate).is_zero() {
                return RealRoot::Rational(candidate);
            }
            root.refine_to(width);
            RealRoot::Irrational(root)
        })
        .collect()
}

/// Distinct real roots of `p` with multiplicities, sorted by the lower end of
/// their enclosures.
pub fn real_roots(p: &RationalPoly, width: &Rational) -> Vec<(RealRoot, usize)> {
    let mut out: Vec<(RealRoot, usize)> = square_free_decomposition(p)
        .into_iter()
        .flat_map(|(f, mult)| {
            isolate_square_free(&f, width)
                .into_iter()
                .map(move |r| (r, mult))
        })
        .collect();
    out.sort_by(|a, b| a.0.interval().lo.cmp(&b.0.interval().lo));
    out
}
