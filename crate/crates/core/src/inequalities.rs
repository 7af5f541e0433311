//! Validators for the inequalities behind nice-pair expansion.
//!
//! All validators act on maps on `[0, 1]` in `L2` with minimal period 2.
//! Such a map has a period-2 orbit `P_L < c < P_R` and two preimages of `c`,
//! `c_* < P_L` and `c^* > P_R`. Pulling `c_*` back along the linear branch of
//! `f^2` on `[c_*, P_L]` gives the ladder `c_n ↑ P_L`; the same on the right
//! gives `c'_n ↓ P_R`.
//!
//! Each validator checks instances exactly. A passing report proves the
//! statement for the given parameters and sample points, nothing more.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::map::{FractionOrbit, LorenzMap, Membership, OneSidedPoint, Side, Symbol};
use crate::periodic::enumerate_nice_pairs;
use crate::scalar::Scalar;

/// Closed-form period-2 points and preimages of `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForms<S> {
    pub p_left: S,
    pub p_right: S,
    pub c_star: S,
    pub c_upper_star: S,
}

fn require_l2_unit<S: Scalar>(f: &LorenzMap<S>) -> Result<()> {
    if !f.is_unit_domain() {
        return Err(Error::Precondition(format!("{f} is not on the unit interval")));
    }
    if f.classify_membership() != Membership::L2 {
        return Err(Error::Precondition(format!("{f} is not in L2")));
    }
    Ok(())
}

pub fn closed_forms<S: Scalar>(f: &LorenzMap<S>) -> Result<ClosedForms<S>> {
    require_l2_unit(f)?;
    let (a, b, c) = (f.a().clone(), f.b().clone(), f.c().clone());
    let f0 = f.f_lo();
    let p_left = b.clone() * (c.clone() - f0.clone()) / (a.clone() * b.clone() - S::one());
    let p_right = a.clone() * p_left.clone() + f0.clone();
    let c_star = (c.clone() - f0) / a;
    let c_upper_star = c.clone() * (S::one() + b.clone()) / b;
    Ok(ClosedForms {
        p_left,
        p_right,
        c_star,
        c_upper_star,
    })
}

/// The ladders `c_0 = c_*, c_1, ...` and `c'_0 = c^*, c'_1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct CnLadders<S> {
    pub c_seq: Vec<S>,
    pub cprime_seq: Vec<S>,
    pub forms: ClosedForms<S>,
}

/// `f^2`-preimage of `y` inside `(c_*, c)`.
fn pull_left<S: Scalar>(f: &LorenzMap<S>, y: &S) -> S {
    // f^2(x) = b (a x + f(0) - c) there
    (y.clone() / f.b().clone() + f.c().clone() - f.f_lo()) / f.a().clone()
}

/// `f^2`-preimage of `y` inside `(c, c^*)`.
fn pull_right<S: Scalar>(f: &LorenzMap<S>, y: &S) -> S {
    // f^2(x) = a b (x - c) + f(0) there
    (y.clone() - f.f_lo()) / (f.a().clone() * f.b().clone()) + f.c().clone()
}

/// Ladders with `depth + 1` terms each.
pub fn build_ladders<S: Scalar>(f: &LorenzMap<S>, depth: usize) -> Result<CnLadders<S>> {
    let forms = closed_forms(f)?;
    let mut c_seq = Vec::with_capacity(depth + 1);
    let mut cprime_seq = Vec::with_capacity(depth + 1);
    c_seq.push(forms.c_star.clone());
    cprime_seq.push(forms.c_upper_star.clone());
    for n in 1..=depth {
        c_seq.push(pull_left(f, &c_seq[n - 1]));
        cprime_seq.push(pull_right(f, &cprime_seq[n - 1]));
    }
    Ok(CnLadders {
        c_seq,
        cprime_seq,
        forms,
    })
}

/// Margins of the two length inequalities at one ladder index.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthCheck<S> {
    pub n: usize,
    /// `|(c_n, c)| - |(c_{n-1}, c_n)|`
    pub left_margin: S,
    /// `|(c, c'_n)| - |(c'_n, c'_{n-1})|`
    pub right_margin: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthReport<S> {
    pub checks: Vec<LengthCheck<S>>,
}

impl<S: Scalar> LengthReport<S> {
    pub fn min_margin(&self) -> Option<S> {
        self.checks
            .iter()
            .flat_map(|c| [c.left_margin.clone(), c.right_margin.clone()])
            .reduce(S::min_of)
    }
}

/// Checks `|(c_{n-1}, c_n)| <= |(c_n, c)|` and
/// `|(c'_n, c'_{n-1})| <= |(c, c'_n)|` for `n = 1..=depth`.
pub fn verify_length_lemma<S: Scalar>(f: &LorenzMap<S>, depth: usize) -> Result<LengthReport<S>> {
    let ladders = build_ladders(f, depth)?;
    let c = f.c().clone();
    let mut checks = Vec::with_capacity(depth);
    for n in 1..=depth {
        let cn = &ladders.c_seq[n];
        let cp = &ladders.cprime_seq[n];
        let left_margin = (c.clone() - cn.clone()) - (cn.clone() - ladders.c_seq[n - 1].clone());
        let right_margin = (cp.clone() - c.clone()) - (ladders.cprime_seq[n - 1].clone() - cp.clone());
        if left_margin < S::zero() || right_margin < S::zero() {
            return Err(Error::ViolationFound(format!(
                "length inequality fails at n = {n} for {f}: margins {left_margin}, {right_margin}"
            )));
        }
        checks.push(LengthCheck {
            n,
            left_margin,
            right_margin,
        });
    }
    Ok(LengthReport { checks })
}

/// Default number of ladder rungs searched when locating `f(0)` or `f(1)`.
pub const DEFAULT_LADDER_CAP: usize = 4096;

/// One clause of the product inequalities at index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductClause<S> {
    pub k: usize,
    /// `ab * P - (1 + P)` with `P = a^{k+1} b^k` (or `a^k b^{k+1}`).
    pub strong_margin: S,
    /// `P - 1`.
    pub weak_margin: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductReport<S> {
    /// Present when `f(0)` lies in `(c_*, P_L)`.
    pub left: Option<ProductClause<S>>,
    /// Present when `f(1)` lies in `(P_R, c^*)`.
    pub right: Option<ProductClause<S>>,
}

fn product_clause<S: Scalar>(f: &LorenzMap<S>, k: usize, left: bool) -> ProductClause<S> {
    let (a, b) = (f.a().clone(), f.b().clone());
    let k32 = k as u32;
    let p = if left {
        a.powu(k32 + 1) * b.powu(k32)
    } else {
        a.powu(k32) * b.powu(k32 + 1)
    };
    ProductClause {
        k,
        strong_margin: a * b * p.clone() - (S::one() + p.clone()),
        weak_margin: p - S::one(),
    }
}

/// Least `k >= 1` with `f(0) in (c_{k-1}, c_k]`.
pub fn locate_left_rung<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> Result<Option<usize>> {
    let forms = closed_forms(f)?;
    let f0 = f.f_lo();
    if !(forms.c_star < f0 && f0 < forms.p_left) {
        return Ok(None);
    }
    let mut ck = forms.c_star;
    for k in 1..=cap {
        ck = pull_left(f, &ck);
        if f0 <= ck {
            return Ok(Some(k));
        }
    }
    Err(Error::CapExceeded {
        what: "locating f(0) on the c_n ladder".into(),
        cap,
    })
}

/// Least `k >= 1` with `f(1) in [c'_k, c'_{k-1})`.
pub fn locate_right_rung<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> Result<Option<usize>> {
    let forms = closed_forms(f)?;
    let f1 = f.f_hi();
    if !(forms.p_right < f1 && f1 < forms.c_upper_star) {
        return Ok(None);
    }
    let mut ck = forms.c_upper_star;
    for k in 1..=cap {
        ck = pull_right(f, &ck);
        if ck <= f1 {
            return Ok(Some(k));
        }
    }
    Err(Error::CapExceeded {
        what: "locating f(1) on the c'_n ladder".into(),
        cap,
    })
}

/// Checks `ab a^{k+1} b^k > 1 + a^{k+1} b^k` and `a^{k+1} b^k > 1` when
/// `f(0) in (c_{k-1}, c_k]`, and the mirrored pair when
/// `f(1) in [c'_k, c'_{k-1})`.
pub fn verify_product_inequalities<S: Scalar>(f: &LorenzMap<S>) -> Result<ProductReport<S>> {
    let kl = locate_left_rung(f, DEFAULT_LADDER_CAP)?;
    let kr = locate_right_rung(f, DEFAULT_LADDER_CAP)?;
    if kl.is_none() && kr.is_none() {
        return Err(Error::PreconditionNotLocated);
    }
    let left = kl.map(|k| product_clause(f, k, true));
    let right = kr.map(|k| product_clause(f, k, false));
    for cl in left.iter().chain(right.iter()) {
        if cl.strong_margin <= S::zero() || cl.weak_margin <= S::zero() {
            return Err(Error::ViolationFound(format!(
                "product inequality fails at k = {} for {f}: margins {}, {}",
                cl.k, cl.strong_margin, cl.weak_margin
            )));
        }
    }
    Ok(ProductReport { left, right })
}

/// `a^i b^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub fn of(s: Symbol) -> Monomial {
        match s {
            Symbol::L => Monomial { i: 1, j: 0 },
            Symbol::R => Monomial { i: 0, j: 1 },
        }
    }

    pub fn is_one(self) -> bool {
        self.i == 0 && self.j == 0
    }

    pub fn value<S: Scalar>(self, f: &LorenzMap<S>) -> S {
        f.a().powu(self.i) * f.b().powu(self.j)
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial {
            i: self.i + rhs.i,
            j: self.j + rhs.j,
        }
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "a^{} b^{}", self.i, self.j)
    }
}

/// Closed interval used as the reference set of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedInterval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> ClosedInterval<S> {
    pub fn contains(&self, x: &S) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// `[0, c_*]`.
pub fn left_exit_set<S: Scalar>(f: &LorenzMap<S>) -> Result<ClosedInterval<S>> {
    Ok(ClosedInterval {
        lo: S::zero(),
        hi: closed_forms(f)?.c_star,
    })
}

/// `[c^*, 1]`.
pub fn right_exit_set<S: Scalar>(f: &LorenzMap<S>) -> Result<ClosedInterval<S>> {
    Ok(ClosedInterval {
        lo: closed_forms(f)?.c_upper_star,
        hi: S::one(),
    })
}

/// Factorization of `(f^n)'(x)` at the exit times from `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitDecomposition<S> {
    pub set: ClosedInterval<S>,
    pub x: OneSidedPoint<S>,
    pub n: usize,
    /// `n_1 < n_2 < ... <= n`.
    pub exit_times: Vec<usize>,
    /// `x_s = f^{n_s}(x)`.
    pub exit_points: Vec<S>,
    /// `M_A(x), M_A(x_1), ..., M_A(x_{s-1})`.
    pub factors: Vec<Monomial>,
    /// `W(x_s)`, the product over steps `n_s..n`.
    pub tail: Monomial,
    pub s_count: usize,
}

impl<S: Scalar> ExitDecomposition<S> {
    pub fn product(&self) -> Monomial {
        self.factors.iter().fold(self.tail, |acc, m| acc * *m)
    }

    pub fn factor_values(&self, f: &LorenzMap<S>) -> Vec<S> {
        self.factors.iter().map(|m| m.value(f)).collect()
    }
}

/// Symbols of the first `n` steps of the orbit of `x`; the first one follows
/// the side of `x` when it sits on `c`.
fn orbit_symbols<S: Scalar>(f: &LorenzMap<S>, x: &OneSidedPoint<S>, orbit: &[S]) -> Result<Vec<Symbol>> {
    let mut out = Vec::with_capacity(orbit.len().saturating_sub(1));
    for (k, y) in orbit[..orbit.len() - 1].iter().enumerate() {
        let s = if k == 0 {
            f.symbol_of_point(x)?
        } else {
            f.symbol_of(y).ok_or(Error::HitCritical { step: k })?
        };
        out.push(s);
    }
    Ok(out)
}

pub fn first_exit_decompose<S: Scalar>(
    f: &LorenzMap<S>,
    set: &ClosedInterval<S>,
    x: &OneSidedPoint<S>,
    n: usize,
) -> Result<ExitDecomposition<S>> {
    let orbit = f.orbit(x, n)?;
    let symbols = orbit_symbols(f, x, &orbit)?;
    let inside = |k: usize| -> bool {
        // a point on c carries a side and is never in a set away from c
        !(k == 0 && x.side != Side::Exact) && set.contains(&orbit[k])
    };
    let exit_times: Vec<usize> = (1..=n).filter(|&k| inside(k - 1) && !inside(k)).collect();
    let segment = |from: usize, to: usize| -> Monomial {
        symbols[from..to]
            .iter()
            .fold(Monomial::default(), |acc, &s| acc * Monomial::of(s))
    };
    let mut factors = Vec::with_capacity(exit_times.len());
    let mut start = 0;
    for &t in &exit_times {
        factors.push(segment(start, t));
        start = t;
    }
    let tail = segment(start, n);
    let s_count = exit_times.len();
    let exit_points = exit_times.iter().map(|&t| orbit[t].clone()).collect();
    Ok(ExitDecomposition {
        set: set.clone(),
        x: x.clone(),
        n,
        exit_times,
        exit_points,
        factors,
        tail,
        s_count,
    })
}

/// `M_A(x)` or the reason it is unavailable.
#[derive(Debug, Clone, PartialEq)]
pub enum ExitMultiplier {
    Exited {
        time: usize,
        factor: Monomial,
    },
    /// The orbit did not leave `A` (or never entered it) within the cap.
    NoExitWithinCap,
}

/// First exit time of `x` from `set` and the derivative product up to it.
pub fn exit_multiplier<S: Scalar>(
    f: &LorenzMap<S>,
    set: &ClosedInterval<S>,
    x: &OneSidedPoint<S>,
    cap: usize,
) -> Result<ExitMultiplier> {
    let was_inside = x.side == Side::Exact && set.contains(&x.x);
    let s = f.symbol_of_point(x)?;
    if let Some(r) = exact_exit_multiplier(f, set, x, s, was_inside, cap) {
        return r;
    }
    let mut factor = Monomial::default();
    let mut was_inside = was_inside;
    let mut s = s;
    let mut y = f.eval(x)?;
    for time in 1..=cap {
        factor = factor * Monomial::of(s);
        let now_inside = set.contains(&y);
        if was_inside && !now_inside {
            return Ok(ExitMultiplier::Exited { time, factor });
        }
        was_inside = now_inside;
        s = f.symbol_of(&y).ok_or(Error::HitCritical { step: time })?;
        y = f.branch(s, &y);
    }
    Ok(ExitMultiplier::NoExitWithinCap)
}

/// [`exit_multiplier`] on unreduced fractions; `None` for the float backend.
fn exact_exit_multiplier<S: Scalar>(
    f: &LorenzMap<S>,
    set: &ClosedInterval<S>,
    x: &OneSidedPoint<S>,
    first: Symbol,
    mut was_inside: bool,
    cap: usize,
) -> Option<Result<ExitMultiplier>> {
    let (lo, hi, c) = (set.lo.to_ratio()?, set.hi.to_ratio()?, f.c().to_ratio()?);
    let mut y = FractionOrbit::new(f, &x.x)?;
    let mut s = first;
    let mut factor = Monomial::default();
    y.step(s);
    for time in 1..=cap {
        factor = factor * Monomial::of(s);
        let now_inside = y.cmp_to(&lo) != Ordering::Less && y.cmp_to(&hi) != Ordering::Greater;
        if was_inside && !now_inside {
            return Some(Ok(ExitMultiplier::Exited { time, factor }));
        }
        was_inside = now_inside;
        s = match y.cmp_to(&c) {
            Ordering::Less => Symbol::L,
            Ordering::Greater => Symbol::R,
            Ordering::Equal => return Some(Err(Error::HitCritical { step: time })),
        };
        y.step(s);
    }
    Some(Ok(ExitMultiplier::NoExitWithinCap))
}

/// Default orbit length allowed for one `M_A(x)` evaluation.
pub const DEFAULT_VISIT_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MLemma {
    /// `a < 1 < b`, `f(0) in (c_*, c)`: `M_A(x) > 1` for `x >= f(0)`.
    FromImageOfZero,
    /// `a > 1 > b`, `f(1) in (c, c^*)`: `M_B(x) > 1` for `x <= f(1)`.
    FromImageOfOne,
    /// `a < 1 < b`, `f(0) < c_*`: `M_A(x) > 1` for `x >= c_1`.
    FromFirstRung,
    /// `a > 1 > b`, `f(1) > c^*`: `M_B(x) > 1` for `x <= c'_1`.
    FromFirstRungMirrored,
}

impl MLemma {
    pub fn as_str(self) -> &'static str {
        match self {
            MLemma::FromImageOfZero => "M_A>1 on [f(0),1]",
            MLemma::FromImageOfOne => "M_B>1 on [0,f(1)]",
            MLemma::FromFirstRung => "M_A>1 on [c_1,1]",
            MLemma::FromFirstRungMirrored => "M_B>1 on [0,c'_1]",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MLemmaReport<S> {
    pub lemma: MLemma,
    pub points_checked: usize,
    /// Points whose orbit did not exit within the cap (vacuously fine).
    pub no_exit: usize,
    /// Points whose orbit landed on `c`.
    pub hit_critical: usize,
    pub min_multiplier: Option<S>,
}

/// A lemma with the two intervals its hypothesis is stated on.
pub type MHypothesis<S> = (MLemma, ClosedInterval<S>, ClosedInterval<S>);

/// Which of the `M_A` lemmas applies to `f`, with its range of `x`.
pub fn m_lemma_hypothesis<S: Scalar>(f: &LorenzMap<S>) -> Result<Option<MHypothesis<S>>> {
    let ladders = build_ladders(f, 1)?;
    let forms = &ladders.forms;
    let one = S::one();
    let (a, b, c) = (f.a(), f.b(), f.c());
    let f0 = f.f_lo();
    let f1 = f.f_hi();
    if *a < one && one < *b {
        let set = ClosedInterval {
            lo: S::zero(),
            hi: forms.c_star.clone(),
        };
        if forms.c_star < f0 && f0 < *c {
            return Ok(Some((MLemma::FromImageOfZero, set, ClosedInterval { lo: f0, hi: one })));
        }
        if f0 < forms.c_star {
            let range = ClosedInterval {
                lo: ladders.c_seq[1].clone(),
                hi: one,
            };
            return Ok(Some((MLemma::FromFirstRung, set, range)));
        }
    } else if *a > one && one > *b {
        let set = ClosedInterval {
            lo: forms.c_upper_star.clone(),
            hi: S::one(),
        };
        if *c < f1 && f1 < forms.c_upper_star {
            return Ok(Some((
                MLemma::FromImageOfOne,
                set,
                ClosedInterval { lo: S::zero(), hi: f1 },
            )));
        }
        if f1 > forms.c_upper_star {
            let range = ClosedInterval {
                lo: S::zero(),
                hi: ladders.cprime_seq[1].clone(),
            };
            return Ok(Some((MLemma::FromFirstRungMirrored, set, range)));
        }
    }
    Ok(None)
}

/// Spot-checks `M_A(x) > 1` (or `M_B`) on ladder rungs, their midpoints,
/// points next to `c_*`, `c_1`, `P_L`, their mirrors, and `random_points`
/// uniform draws from the lemma's range.
pub fn verify_m_lemmas<S: Scalar, R: Rng + ?Sized>(
    f: &LorenzMap<S>,
    rng: &mut R,
    random_points: usize,
    visit_cap: usize,
) -> Result<MLemmaReport<S>> {
    let (lemma, set, range) =
        m_lemma_hypothesis(f)?.ok_or_else(|| Error::Precondition(format!("no M_A lemma applies to {f}")))?;
    let ladders = build_ladders(f, 6)?;
    let forms = &ladders.forms;
    let eps = S::from_frac(1, 1_000_000);
    let mut pts: Vec<S> = vec![range.lo.clone(), range.hi.clone()];
    for seq in [&ladders.c_seq, &ladders.cprime_seq] {
        pts.extend(seq.iter().cloned());
        for w in seq.windows(2) {
            pts.push((w[0].clone() + w[1].clone()) / S::from_int(2));
        }
    }
    for anchor in [
        &forms.c_star,
        &ladders.c_seq[1],
        &forms.p_left,
        &forms.p_right,
        &ladders.cprime_seq[1],
        &forms.c_upper_star,
    ] {
        pts.push(anchor.clone() - eps.clone());
        pts.push(anchor.clone() + eps.clone());
    }
    let span = range.hi.clone() - range.lo.clone();
    for _ in 0..random_points {
        let k: i64 = rng.gen_range(0..=(1 << 20));
        pts.push(range.lo.clone() + span.clone() * S::from_frac(k, 1 << 20));
    }
    pts.retain(|x| range.contains(x));

    // the critical point enters the range as c+ (or c-), never bare
    let side = match lemma {
        MLemma::FromImageOfZero | MLemma::FromFirstRung => Side::Plus,
        _ => Side::Minus,
    };
    let mut report = MLemmaReport {
        lemma,
        points_checked: 0,
        no_exit: 0,
        hit_critical: 0,
        min_multiplier: None,
    };
    for x in pts {
        let p = if x == *f.c() {
            OneSidedPoint { x, side }
        } else {
            OneSidedPoint::exact(x)
        };
        report.points_checked += 1;
        match exit_multiplier(f, &set, &p, visit_cap) {
            Ok(ExitMultiplier::Exited { factor, .. }) => {
                let m = factor.value(f);
                if m <= S::one() {
                    return Err(Error::ViolationFound(format!(
                        "{}: M = {factor} = {m} <= 1 at x = {p} for {f}",
                        lemma.as_str()
                    )));
                }
                report.min_multiplier = Some(match report.min_multiplier.take() {
                    Some(cur) => S::min_of(cur, m),
                    None => m,
                });
            }
            Ok(ExitMultiplier::NoExitWithinCap) => report.no_exit += 1,
            Err(Error::HitCritical { .. }) => report.hit_critical += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// `i = min{k : f^k(0) > c}` and `j = min{k : f^k(1) < c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossIndices {
    pub i: Option<usize>,
    pub j: Option<usize>,
}

fn first_crossing<S: Scalar>(f: &LorenzMap<S>, start: S, right: bool, cap: usize) -> Option<usize> {
    let c = f.c().clone();
    let mut y = start;
    for k in 1..=cap {
        let s = f.symbol_of(&y)?;
        y = f.branch(s, &y);
        if (right && y > c) || (!right && y < c) {
            return Some(k);
        }
    }
    None
}

pub fn cross_indices<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> CrossIndices {
    CrossIndices {
        i: first_crossing(f, S::zero(), true, cap),
        j: first_crossing(f, S::one(), false, cap),
    }
}

/// `lhs > rhs` with both sides recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictCheck<S> {
    pub lhs: S,
    pub rhs: S,
    pub holds: bool,
}

impl<S: Scalar> StrictCheck<S> {
    fn new(lhs: S, rhs: S) -> Self {
        let holds = lhs > rhs;
        StrictCheck { lhs, rhs, holds }
    }
}

/// The localization implied by a small product.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlCheck<S> {
    /// `b a^i` (or `a b^j`).
    pub product: S,
    /// `f^{i-1}(0)` (or `f^{j-1}(1)`).
    pub point: S,
    /// `(c_1, c)` (or `(c, c'_1)`).
    pub window: (S, S),
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BajReport<S> {
    pub indices: CrossIndices,
    /// `b a^{i-1} > 1 + a + ... + a^{i-2}`.
    pub baj_left: Option<StrictCheck<S>>,
    /// `a b^{j-1} > 1 + b + ... + b^{j-2}`.
    pub baj_right: Option<StrictCheck<S>>,
    /// Present when `b a^i < 1`.
    pub control_left: Option<ControlCheck<S>>,
    /// Present when `a b^j < 1`.
    pub control_right: Option<ControlCheck<S>>,
}

impl<S: Scalar> BajReport<S> {
    pub fn all_hold(&self) -> bool {
        self.baj_left.iter().all(|c| c.holds)
            && self.baj_right.iter().all(|c| c.holds)
            && self.control_left.iter().all(|c| c.holds)
            && self.control_right.iter().all(|c| c.holds)
    }
}

fn geometric_sum<S: Scalar>(r: &S, terms: usize) -> S {
    let mut acc = S::zero();
    let mut p = S::one();
    for _ in 0..terms {
        acc = acc + p.clone();
        p = p * r.clone();
    }
    acc
}

fn iterate<S: Scalar>(f: &LorenzMap<S>, x: S, k: usize) -> Option<S> {
    let mut y = x;
    for _ in 0..k {
        let s = f.symbol_of(&y)?;
        y = f.branch(s, &y);
    }
    Some(y)
}

/// Evaluates the crossing-index inequalities and, when `b a^i < 1` or
/// `a b^j < 1`, the localization of `f^{i-1}(0)` or `f^{j-1}(1)`.
pub fn verify_baj_control<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> Result<BajReport<S>> {
    let ladders = build_ladders(f, 1)?;
    let indices = cross_indices(f, cap);
    let (a, b, c) = (f.a().clone(), f.b().clone(), f.c().clone());
    let mut report = BajReport {
        indices,
        baj_left: None,
        baj_right: None,
        control_left: None,
        control_right: None,
    };
    if let Some(i) = indices.i {
        let i32_ = i as u32;
        report.baj_left = Some(StrictCheck::new(b.clone() * a.powu(i32_ - 1), geometric_sum(&a, i - 1)));
        let product = b.clone() * a.powu(i32_);
        if product < S::one() {
            let point = iterate(f, S::zero(), i - 1).ok_or(Error::HitCritical { step: i - 1 })?;
            let window = (ladders.c_seq[1].clone(), c.clone());
            let holds = window.0 < point && point < window.1;
            report.control_left = Some(ControlCheck {
                product,
                point,
                window,
                holds,
            });
        }
    }
    if let Some(j) = indices.j {
        let j32 = j as u32;
        report.baj_right = Some(StrictCheck::new(a.clone() * b.powu(j32 - 1), geometric_sum(&b, j - 1)));
        let product = a.clone() * b.powu(j32);
        if product < S::one() {
            let point = iterate(f, S::one(), j - 1).ok_or(Error::HitCritical { step: j - 1 })?;
            let window = (c.clone(), ladders.cprime_seq[1].clone());
            let holds = window.0 < point && point < window.1;
            report.control_right = Some(ControlCheck {
                product,
                point,
                window,
                holds,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport<S> {
    pub pairs_checked: usize,
    /// Smallest `(M_p - 1)(M_q - 1)` over the pairs.
    pub min_expansion: Option<S>,
    /// Periods of the minimizing pair.
    pub argmin_periods: Option<(usize, usize)>,
    /// Pairs with `(M_p - 1)(M_q - 1) <= 1`, as `(period of p, period of q, value)`.
    pub violations: Vec<(usize, usize, S)>,
}

/// `true` when `[f(0), f(1)]` is not inside `[P_L, P_R]`.
pub fn expansion_hypothesis<S: Scalar>(f: &LorenzMap<S>) -> Result<bool> {
    let forms = closed_forms(f)?;
    Ok(!(forms.p_left <= f.f_lo() && f.f_hi() <= forms.p_right))
}

/// Evaluates `(M_p - 1)(M_q - 1)` for every nice pair with periods at most
/// `max_period` and collects the pairs where it is not above 1.
pub fn expansion_scan<S: Scalar>(f: &LorenzMap<S>, max_period: usize) -> Result<ExpansionReport<S>> {
    if !expansion_hypothesis(f)? {
        return Err(Error::Precondition(format!(
            "[f(0), f(1)] lies inside [P_L, P_R] for {f}"
        )));
    }
    let pairs = enumerate_nice_pairs(f, max_period)?;
    let mut report = ExpansionReport {
        pairs_checked: 0,
        min_expansion: None,
        argmin_periods: None,
        violations: Vec::new(),
    };
    for pair in pairs {
        let e = pair.expansion();
        report.pairs_checked += 1;
        if e <= S::one() {
            report.violations.push((pair.p.period, pair.q.period, e.clone()));
        }
        let better = report.min_expansion.as_ref().is_none_or(|m| e < *m);
        if better {
            report.min_expansion = Some(e);
            report.argmin_periods = Some((pair.p.period, pair.q.period));
        }
    }
    Ok(report)
}

/// Like [`expansion_scan`] but fails on the first pair with
/// `(M_p - 1)(M_q - 1) <= 1`.
pub fn expansion_check<S: Scalar>(f: &LorenzMap<S>, max_period: usize) -> Result<ExpansionReport<S>> {
    let report = expansion_scan(f, max_period)?;
    if let Some((lp, lq, e)) = report.violations.first() {
        return Err(Error::ViolationFound(format!(
            "nice pair with periods ({lp}, {lq}) of {f} has (M_p - 1)(M_q - 1) = {e}"
        )));
    }
    Ok(report)
}
