//! Piecewise linear Lorenz maps.
//!
//! On a domain `[lo, hi]` with critical point `c` the map is
//!
//! ```text
//! f(x) = a (x - c) + hi    for x in [lo, c)
//! f(x) = b (x - c) + lo    for x in (c, hi]
//! ```
//!
//! which on the unit interval is the familiar `a x + 1 - a c` / `b (x - c)`.
//! The map is undefined at `c`; only the one-sided limits `f(c-) = hi` and
//! `f(c+) = lo` exist, which is why points are often carried as
//! [`OneSidedPoint`]s.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Branch symbol. `L < R`, which is the order used for itineraries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    L,
    R,
}

impl Symbol {
    pub fn flip(self) -> Symbol {
        match self {
            Symbol::L => Symbol::R,
            Symbol::R => Symbol::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::R => 'R',
        }
    }
}

/// A finite word over `{L, R}`. Ordered lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&t| t == s).count()
    }

    /// Length of the longest common prefix.
    pub fn common_prefix(&self, other: &Word) -> usize {
        self.0.iter().zip(&other.0).take_while(|(x, y)| x == y).count()
    }

    /// Cyclic shift by `k` positions to the left.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.len());
        Word(v)
    }

    /// Smallest `d` dividing `len` with `self` equal to its `d`-prefix
    /// repeated.
    pub fn primitive_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]))
            .unwrap_or(n)
    }

    /// Every word of length `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Word> {
        (0u64..(1u64 << n)).map(move |bits| {
            Word(
                (0..n)
                    .map(|i| {
                        if bits >> (n - 1 - i) & 1 == 1 {
                            Symbol::R
                        } else {
                            Symbol::L
                        }
                    })
                    .collect(),
            )
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                'L' | 'l' => Ok(Symbol::L),
                'R' | 'r' => Ok(Symbol::R),
                other => Err(Error::Parse(format!("bad symbol `{other}` in word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// Which one-sided limit a point stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
    Exact,
}

/// A point together with the side it is approached from. The side only
/// matters at the critical point.
#[derive(Debug, Clone, PartialEq)]
pub struct OneSidedPoint<S> {
    pub x: S,
    pub side: Side,
}

impl<S: Scalar> OneSidedPoint<S> {
    pub fn exact(x: S) -> Self {
        OneSidedPoint { x, side: Side::Exact }
    }

    pub fn minus(x: S) -> Self {
        OneSidedPoint { x, side: Side::Minus }
    }

    pub fn plus(x: S) -> Self {
        OneSidedPoint { x, side: Side::Plus }
    }
}

impl<S: Scalar> fmt::Display for OneSidedPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Minus => write!(f, "{}-", self.x),
            Side::Plus => write!(f, "{}+", self.x),
            Side::Exact => write!(f, "{}", self.x),
        }
    }
}

/// Disjoint open intervals in increasing order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet<S> {
    intervals: Vec<(S, S)>,
}

impl<S: Scalar> IntervalSet<S> {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    /// Builds a set from arbitrary open intervals; empty ones are dropped and
    /// overlapping ones merged.
    pub fn from_intervals(mut raw: Vec<(S, S)>) -> Self {
        raw.retain(|(u, v)| u < v);
        raw.sort_by(|x, y| x.0.cmp_to(&y.0));
        let mut out: Vec<(S, S)> = Vec::with_capacity(raw.len());
        for (u, v) in raw {
            match out.last_mut() {
                Some(last) if u < last.1 => {
                    if v > last.1 {
                        last.1 = v;
                    }
                }
                _ => out.push((u, v)),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> S {
        self.intervals
            .iter()
            .fold(S::zero(), |acc, (u, v)| acc + (v.clone() - u.clone()))
    }

    /// `true` if `x` lies in the interior of one of the intervals.
    pub fn contains_interior(&self, x: &S) -> bool {
        self.intervals.iter().any(|(u, v)| u < x && x < v)
    }
}

/// Image of an open interval under one application of the map.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalImage<S> {
    pub image: IntervalSet<S>,
    pub crossed_c: bool,
}

/// Expand-on-average classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    /// Average slope at most one.
    NotExpandOnAverage,
    /// Expands on average but `c` is not strictly between `f(lo)` and `f(hi)`.
    L,
    /// Expands on average and `f(lo) < c < f(hi)`.
    L2,
}

impl Membership {
    pub fn in_l(self) -> bool {
        !matches!(self, Membership::NotExpandOnAverage)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Membership::NotExpandOnAverage => "not_expand_on_average",
            Membership::L => "L_only",
            Membership::L2 => "L2",
        }
    }
}

/// Affine change of coordinates `x = offset + scale * y` from the unit
/// interval onto `[offset, offset + scale]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChart<S> {
    pub offset: S,
    pub scale: S,
}

impl<S: Scalar> AffineChart<S> {
    pub fn to_unit(&self, x: &S) -> S {
        (x.clone() - self.offset.clone()) / self.scale.clone()
    }

    pub fn from_unit(&self, y: &S) -> S {
        self.offset.clone() + self.scale.clone() * y.clone()
    }
}

/// A piecewise linear Lorenz map with slopes `a` (left) and `b` (right).
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzMap<S> {
    a: S,
    b: S,
    c: S,
    lo: S,
    hi: S,
}

/// An exact orbit kept as an unreduced fraction `N / D` with `D > 0`. A
/// step only multiplies by the small integers of the branch coefficients,
/// so long orbits stay cheap where reduced rationals would spend their time
/// in gcd computations.
#[derive(Debug, Clone)]
pub(crate) struct FractionOrbit {
    num: BigInt,
    den: BigInt,
    /// Per branch: `N' = n_coef N + d_coef D`, `D' = scale D`.
    coeffs: [(BigInt, BigInt, BigInt); 2],
}

impl FractionOrbit {
    /// `None` unless the backend is exact.
    pub(crate) fn new<S: Scalar>(f: &LorenzMap<S>, start: &S) -> Option<Self> {
        let start = start.to_ratio()?;
        let coef = |s: Symbol| -> Option<(BigInt, BigInt, BigInt)> {
            let (m, k) = f.affine(s);
            let (m, k) = (m.to_ratio()?, k.to_ratio()?);
            Some((m.numer() * k.denom(), k.numer() * m.denom(), m.denom() * k.denom()))
        };
        Some(FractionOrbit {
            num: start.numer().clone(),
            den: start.denom().clone(),
            coeffs: [coef(Symbol::L)?, coef(Symbol::R)?],
        })
    }

    pub(crate) fn cmp_to(&self, r: &BigRational) -> Ordering {
        (&self.num * r.denom()).cmp(&(r.numer() * &self.den))
    }

    pub(crate) fn step(&mut self, s: Symbol) {
        let (n, d, scale) = &self.coeffs[s as usize];
        self.num = n * &self.num + d * &self.den;
        self.den *= scale;
    }
}

impl<S: Scalar> LorenzMap<S> {
    /// `f_{a,b,c}` on `[0, 1]`.
    pub fn new(a: S, b: S, c: S) -> Result<Self> {
        Self::on_domain(a, b, c, S::zero(), S::one())
    }

    /// Map on `[lo, hi]`. Both branches must map into the domain.
    pub fn on_domain(a: S, b: S, c: S, lo: S, hi: S) -> Result<Self> {
        if !(lo < c && c < hi) {
            return Err(Error::InvalidMap(format!(
                "critical point {c} must lie strictly inside [{lo}, {hi}]"
            )));
        }
        if a <= S::zero() || b <= S::zero() {
            return Err(Error::InvalidMap(format!(
                "slopes must be positive, got a = {a}, b = {b}"
            )));
        }
        let f = LorenzMap { a, b, c, lo, hi };
        if f.left(&f.lo) < f.lo {
            return Err(Error::InvalidMap(format!(
                "left branch leaves the domain: f({}) = {} < {}",
                f.lo,
                f.left(&f.lo),
                f.lo
            )));
        }
        if f.right(&f.hi) > f.hi {
            return Err(Error::InvalidMap(format!(
                "right branch leaves the domain: f({}) = {} > {}",
                f.hi,
                f.right(&f.hi),
                f.hi
            )));
        }
        Ok(f)
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn lo(&self) -> &S {
        &self.lo
    }

    pub fn hi(&self) -> &S {
        &self.hi
    }

    pub fn is_unit_domain(&self) -> bool {
        self.lo == S::zero() && self.hi == S::one()
    }

    pub fn slope(&self, s: Symbol) -> &S {
        match s {
            Symbol::L => &self.a,
            Symbol::R => &self.b,
        }
    }

    /// Left branch formula, valid on `[lo, c]` (with `c` read as `c-`).
    pub fn left(&self, x: &S) -> S {
        self.a.clone() * (x.clone() - self.c.clone()) + self.hi.clone()
    }

    /// Right branch formula, valid on `[c, hi]` (with `c` read as `c+`).
    pub fn right(&self, x: &S) -> S {
        self.b.clone() * (x.clone() - self.c.clone()) + self.lo.clone()
    }

    pub fn branch(&self, s: Symbol, x: &S) -> S {
        match s {
            Symbol::L => self.left(x),
            Symbol::R => self.right(x),
        }
    }

    /// The branch as `x -> slope * x + intercept`.
    pub fn affine(&self, s: Symbol) -> (S, S) {
        match s {
            Symbol::L => (self.a.clone(), self.hi.clone() - self.a.clone() * self.c.clone()),
            Symbol::R => (self.b.clone(), self.lo.clone() - self.b.clone() * self.c.clone()),
        }
    }

    /// Symbol of a point by strict comparison with `c`; `None` at `c`.
    pub fn symbol_of(&self, x: &S) -> Option<Symbol> {
        match x.cmp_to(&self.c) {
            Ordering::Less => Some(Symbol::L),
            Ordering::Greater => Some(Symbol::R),
            Ordering::Equal => None,
        }
    }

    /// Branch used by a one-sided point.
    pub fn symbol_of_point(&self, p: &OneSidedPoint<S>) -> Result<Symbol> {
        match self.symbol_of(&p.x) {
            Some(s) => Ok(s),
            None => match p.side {
                Side::Minus => Ok(Symbol::L),
                Side::Plus => Ok(Symbol::R),
                Side::Exact => Err(Error::PointAtDiscontinuityWithoutSide(p.x.to_string())),
            },
        }
    }

    pub fn in_domain(&self, x: &S) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    fn check_domain(&self, x: &S) -> Result<()> {
        if self.in_domain(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                point: x.to_string(),
                lo: self.lo.to_string(),
                hi: self.hi.to_string(),
            })
        }
    }

    /// Evaluates the map at a one-sided point.
    pub fn eval(&self, p: &OneSidedPoint<S>) -> Result<S> {
        self.check_domain(&p.x)?;
        let s = self.symbol_of_point(p)?;
        Ok(self.branch(s, &p.x))
    }

    /// Evaluates at an ordinary point; fails at `c`.
    pub fn apply(&self, x: &S) -> Result<S> {
        self.eval(&OneSidedPoint::exact(x.clone()))
    }

    /// Derivative at a one-sided point.
    pub fn derivative(&self, p: &OneSidedPoint<S>) -> Result<S> {
        Ok(self.slope(self.symbol_of_point(p)?).clone())
    }

    /// The first `n + 1` points `x, f(x), ..., f^n(x)` of an orbit. The start
    /// may be a one-sided point; any later landing on `c` is an error.
    pub fn orbit(&self, start: &OneSidedPoint<S>, n: usize) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(start.x.clone());
        if n == 0 {
            return Ok(out);
        }
        let mut x = self.eval(start)?;
        for step in 1..=n {
            out.push(x.clone());
            if step == n {
                break;
            }
            let s = self.symbol_of(&x).ok_or(Error::HitCritical { step })?;
            x = self.branch(s, &x);
        }
        Ok(out)
    }

    /// Orbit of a one-sided point where every landing on `c` is read from
    /// the same side as the start. This is the orbit of the endpoint of a lap,
    /// e.g. `c-` under `f^k` restricted to `(p, c)`.
    pub fn limit_orbit(&self, start: &OneSidedPoint<S>, n: usize) -> Result<Vec<S>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut p = start.clone();
        out.push(p.x.clone());
        for _ in 0..n {
            let y = self.eval(&p)?;
            out.push(y.clone());
            p = OneSidedPoint { x: y, side: start.side };
        }
        Ok(out)
    }

    /// Every `x` with `f(x) = y`, at most one per branch. `y = lo` also yields
    /// `c+` and `y = hi` yields `c-`.
    pub fn branch_preimages(&self, y: &S) -> Vec<OneSidedPoint<S>> {
        let mut out = Vec::with_capacity(2);
        if !self.in_domain(y) {
            return out;
        }
        // left: a (x - c) + hi = y
        let xl = (y.clone() - self.hi.clone()) / self.a.clone() + self.c.clone();
        if *y == self.hi {
            out.push(OneSidedPoint::minus(self.c.clone()));
        } else if self.lo <= xl && xl < self.c {
            out.push(OneSidedPoint::exact(xl));
        }
        // right: b (x - c) + lo = y
        let xr = (y.clone() - self.lo.clone()) / self.b.clone() + self.c.clone();
        if *y == self.lo {
            out.push(OneSidedPoint::plus(self.c.clone()));
        } else if self.c < xr && xr <= self.hi {
            out.push(OneSidedPoint::exact(xr));
        }
        out
    }

    /// Image of the open interval `(u, v)`.
    pub fn interval_image(&self, u: &S, v: &S) -> IntervalImage<S> {
        if u >= v {
            return IntervalImage {
                image: IntervalSet::empty(),
                crossed_c: false,
            };
        }
        if v <= &self.c {
            IntervalImage {
                image: IntervalSet::from_intervals(vec![(self.left(u), self.left(v))]),
                crossed_c: false,
            }
        } else if u >= &self.c {
            IntervalImage {
                image: IntervalSet::from_intervals(vec![(self.right(u), self.right(v))]),
                crossed_c: false,
            }
        } else {
            IntervalImage {
                image: IntervalSet::from_intervals(vec![
                    (self.left(u), self.hi.clone()),
                    (self.lo.clone(), self.right(v)),
                ]),
                crossed_c: true,
            }
        }
    }

    /// `f(lo+)`, the lower end of the image of the left branch.
    pub fn f_lo(&self) -> S {
        self.left(&self.lo)
    }

    /// `f(hi)`, the upper end of the image of the right branch.
    pub fn f_hi(&self) -> S {
        self.right(&self.hi)
    }

    pub fn average_slope(&self) -> S {
        (self.a.clone() * (self.c.clone() - self.lo.clone()) + self.b.clone() * (self.hi.clone() - self.c.clone()))
            / (self.hi.clone() - self.lo.clone())
    }

    pub fn classify_membership(&self) -> Membership {
        if self.average_slope() <= S::one() {
            Membership::NotExpandOnAverage
        } else if self.f_lo() < self.c && self.c < self.f_hi() {
            Membership::L2
        } else {
            Membership::L
        }
    }

    /// Fails unless the map expands on average.
    pub fn require_l(&self) -> Result<()> {
        if self.classify_membership().in_l() {
            Ok(())
        } else {
            Err(Error::NotExpandOnAverage {
                average_slope: self.average_slope().to_string(),
            })
        }
    }

    /// The affinely conjugate map on `[0, 1]` and the chart back to
    /// `[lo, hi]`. Slopes are unchanged.
    pub fn rescale_to_unit(&self) -> (LorenzMap<S>, AffineChart<S>) {
        let chart = AffineChart {
            offset: self.lo.clone(),
            scale: self.hi.clone() - self.lo.clone(),
        };
        if self.is_unit_domain() {
            return (self.clone(), chart);
        }
        let g = LorenzMap {
            a: self.a.clone(),
            b: self.b.clone(),
            c: chart.to_unit(&self.c),
            lo: S::zero(),
            hi: S::one(),
        };
        (g, chart)
    }

    /// Fixed points of the two branches that lie in their branch ranges.
    pub fn fixed_points(&self) -> Vec<S> {
        let mut out = Vec::new();
        if self.a != S::one() {
            // a x + (hi - a c) = x
            let x = (self.hi.clone() - self.a.clone() * self.c.clone()) / (S::one() - self.a.clone());
            if self.lo <= x && x < self.c {
                out.push(x);
            }
        }
        if self.b != S::one() {
            let x = (self.lo.clone() - self.b.clone() * self.c.clone()) / (S::one() - self.b.clone());
            if self.c < x && x <= self.hi {
                out.push(x);
            }
        }
        out
    }

    /// The same map mirrored by `x -> lo + hi - x`, which swaps the roles of
    /// the slopes.
    pub fn mirror(&self) -> LorenzMap<S> {
        LorenzMap {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.lo.clone() + self.hi.clone() - self.c.clone(),
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    /// Converts the parameters to another backend.
    pub fn convert<T: Scalar>(&self) -> LorenzMap<T> {
        let conv = |s: &S| T::from_f64(s.to_f64());
        LorenzMap {
            a: conv(&self.a),
            b: conv(&self.b),
            c: conv(&self.c),
            lo: conv(&self.lo),
            hi: conv(&self.hi),
        }
    }
}

impl LorenzMap<crate::scalar::Exact> {
    /// Exact parameters into any backend.
    pub fn to_backend<T: Scalar>(&self) -> LorenzMap<T> {
        LorenzMap {
            a: T::from_ratio(&self.a),
            b: T::from_ratio(&self.b),
            c: T::from_ratio(&self.c),
            lo: T::from_ratio(&self.lo),
            hi: T::from_ratio(&self.hi),
        }
    }
}

impl<S: Scalar> fmt::Display for LorenzMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f[a={}, b={}, c={}]", self.a, self.b, self.c)?;
        if !self.is_unit_domain() {
            write!(f, " on [{}, {}]", self.lo, self.hi)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Exact, Float};

    fn f(a: Exact, b: Exact, c: Exact) -> LorenzMap<Exact> {
        LorenzMap::new(a, b, c).unwrap()
    }

    #[test]
    fn eval_examples() {
        let g = f(q(3, 2), q(3, 2), q(1, 2));
        assert_eq!(g.apply(&q(1, 4)).unwrap(), q(5, 8));

        let h = f(q(13, 10), q(13, 10), q(1, 2));
        assert_eq!(h.eval(&OneSidedPoint::minus(q(1, 2))).unwrap(), q(1, 1));
        assert_eq!(h.eval(&OneSidedPoint::plus(q(1, 2))).unwrap(), q(0, 1));
        // 1.3 * 0.35 + 1 - 0.65
        assert_eq!(h.apply(&q(35, 100)).unwrap(), q(805, 1000));
    }

    #[test]
    fn eval_errors() {
        let h = f(q(13, 10), q(13, 10), q(1, 2));
        assert!(matches!(
            h.apply(&q(1, 2)),
            Err(Error::PointAtDiscontinuityWithoutSide(_))
        ));
        assert!(matches!(h.apply(&q(3, 2)), Err(Error::OutOfDomain { .. })));
        assert!(matches!(h.apply(&q(-1, 2)), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn endpoints_use_branch_formulas() {
        let h = f(q(13, 10), q(13, 10), q(1, 2));
        assert_eq!(h.apply(&q(0, 1)).unwrap(), q(35, 100));
        assert_eq!(h.apply(&q(1, 1)).unwrap(), q(65, 100));
    }

    #[test]
    fn invalid_maps_are_rejected() {
        assert!(LorenzMap::new(q(1, 1), q(1, 1), q(0, 1)).is_err());
        assert!(LorenzMap::new(q(-1, 1), q(1, 1), q(1, 2)).is_err());
        // 1.8 * (1 - 7/18) = 1.1 > 1
        assert!(LorenzMap::new(q(9, 5), q(9, 5), q(7, 18)).is_err());
        // a c > 1
        assert!(LorenzMap::new(q(3, 1), q(1, 1), q(1, 2)).is_err());
    }

    #[test]
    fn preimage_examples() {
        let g = f(q(1, 2), q(8, 5), q(2, 5));
        let pre = g.branch_preimages(&q(2, 5));
        assert_eq!(pre, vec![OneSidedPoint::exact(q(13, 20))]);

        let h = f(q(13, 10), q(13, 10), q(1, 2));
        let pre = h.branch_preimages(&q(65, 100));
        assert_eq!(pre, vec![OneSidedPoint::exact(q(3, 13)), OneSidedPoint::exact(q(1, 1))]);
        assert!((pre[0].x.to_f64() - 0.23077).abs() < 1e-5);

        let lo_pre = h.branch_preimages(&q(0, 1));
        assert!(lo_pre.contains(&OneSidedPoint::plus(q(1, 2))));
        let hi_pre = h.branch_preimages(&q(1, 1));
        assert!(hi_pre.contains(&OneSidedPoint::minus(q(1, 2))));
        assert!(h.branch_preimages(&q(2, 1)).is_empty());
    }

    #[test]
    fn interval_image_examples() {
        let h = f(q(13, 10), q(13, 10), q(1, 2));
        let img = h.interval_image(&q(13, 46), &q(1, 2));
        assert!(!img.crossed_c);
        assert_eq!(img.image.intervals(), &[(q(33, 46), q(1, 1))]);

        let img = h.interval_image(&q(2, 5), &q(3, 5));
        assert!(img.crossed_c);
        assert_eq!(img.image.intervals(), &[(q(0, 1), q(13, 100)), (q(87, 100), q(1, 1))]);

        let img = h.interval_image(&q(2, 5), &q(2, 5));
        assert!(img.image.is_empty());
        assert!(!img.crossed_c);
    }

    #[test]
    fn membership_examples() {
        assert_eq!(f(q(13, 10), q(13, 10), q(1, 2)).classify_membership(), Membership::L2);
        assert_eq!(f(q(1, 2), q(8, 5), q(2, 5)).classify_membership(), Membership::L);
        assert_eq!(
            f(q(1, 1), q(1, 1), q(1, 2)).classify_membership(),
            Membership::NotExpandOnAverage
        );
        assert_eq!(f(q(1, 2), q(8, 5), q(2, 5)).average_slope(), q(116, 100));
    }

    #[test]
    fn rescale_examples() {
        let g = LorenzMap::on_domain(q(4, 5), q(8, 5), q(2, 5), q(0, 1), q(96, 100)).unwrap();
        let (u, chart) = g.rescale_to_unit();
        assert_eq!(u, f(q(4, 5), q(8, 5), q(5, 12)));
        assert_eq!(chart.from_unit(&q(5, 12)), q(2, 5));
        let h = f(q(13, 10), q(13, 10), q(1, 2));
        assert_eq!(h.rescale_to_unit().0, h);
    }

    #[test]
    fn rescale_conjugates_the_dynamics() {
        let g = LorenzMap::on_domain(q(4, 5), q(8, 5), q(2, 5), q(0, 1), q(96, 100)).unwrap();
        let (u, chart) = g.rescale_to_unit();
        for x in [q(1, 10), q(1, 3), q(7, 10), q(9, 10)] {
            let lhs = chart.to_unit(&g.apply(&x).unwrap());
            let rhs = u.apply(&chart.to_unit(&x)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn fixed_point_examples() {
        // f(x) = 2x near 0, and f(1) = 1 as well.
        assert_eq!(f(q(2, 1), q(2, 1), q(1, 2)).fixed_points(), vec![q(0, 1), q(1, 1)]);
        assert!(f(q(3, 2), q(3, 2), q(1, 2)).fixed_points().is_empty());
        assert!(f(q(1, 2), q(8, 5), q(2, 5)).fixed_points().is_empty());
    }

    #[test]
    fn orbit_stops_at_critical_point() {
        // 0 -> 1/2 under f_{1,2,1/2}
        let g = f(q(1, 1), q(2, 1), q(1, 2));
        let err = g.orbit(&OneSidedPoint::exact(q(0, 1)), 3).unwrap_err();
        assert_eq!(err, Error::HitCritical { step: 1 });
        let lim = g.limit_orbit(&OneSidedPoint::minus(q(0, 1)), 3).unwrap();
        assert_eq!(lim, vec![q(0, 1), q(1, 2), q(1, 1), q(1, 1)]);
    }

    #[test]
    fn mirror_swaps_slopes() {
        let g = f(q(9, 10), q(9, 5), q(11, 20));
        let m = g.mirror();
        assert_eq!(m.a(), &q(9, 5));
        assert_eq!(m.c(), &q(9, 20));
        for x in [q(1, 10), q(3, 10), q(7, 10)] {
            let lhs = q(1, 1) - g.apply(&x).unwrap();
            let rhs = m.apply(&(q(1, 1) - x)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn word_helpers() {
        let w: Word = "LRRR".parse().unwrap();
        assert_eq!(w.to_string(), "LRRR");
        assert_eq!(w.count(Symbol::R), 3);
        assert_eq!(w.rotate(1).to_string(), "RRRL");
        assert_eq!("LRLR".parse::<Word>().unwrap().primitive_period(), 2);
        assert_eq!(w.primitive_period(), 4);
        assert_eq!(Word::all_of_length(3).count(), 8);
        let first: Vec<String> = Word::all_of_length(2).map(|w| w.to_string()).collect();
        assert_eq!(first, ["LL", "LR", "RL", "RR"]);
        assert!("LR".parse::<Word>().unwrap() < "RL".parse::<Word>().unwrap());
    }

    #[test]
    fn float_backend_agrees_on_examples() {
        let h: LorenzMap<Float> = f(q(13, 10), q(13, 10), q(1, 2)).to_backend();
        assert_eq!(h.apply(&Float(0.35)).unwrap(), Float(0.805));
        assert_eq!(h.classify_membership(), Membership::L2);
    }
}
