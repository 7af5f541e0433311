//! Trivial and periodic renormalization, and the full cascade.
//!
//! A renormalization of `f` is the first-return map to an interval `[u, v]`
//! around `c`, built from `f^ell` left of `c` and `f^r` right of it. With
//! `(ell, r)` equal to `(2, 1)` or `(1, 2)` it is called trivial. Trivial
//! steps lower the minimal period without changing the verdict, so every
//! decision is taken on a map with `kappa <= 2`.

use crate::error::{Error, Result};
use crate::map::{AffineChart, LorenzMap, Membership, OneSidedPoint, Symbol, Word};
use crate::periodic::{
    critical_itineraries, minimal_period, minimal_periodic_orbit, slope_product, solve_itinerary, Kappa,
    DEFAULT_PERIOD_CAP,
};
use crate::scalar::Scalar;

/// Default bound on the number of periodic renormalizations in a cascade.
pub const DEFAULT_LEVEL_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrivialCase {
    /// `c <= f(lo)`: renormalize with `(f^2, f)` on `[lo, f(hi)]`.
    Left,
    /// `c >= f(hi)`: renormalize with `(f, f^2)` on `[f(lo), hi]`.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    TrivialLeft,
    TrivialRight,
    Periodic,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::TrivialLeft => "trivial_left",
            StepKind::TrivialRight => "trivial_right",
            StepKind::Periodic => "periodic",
        }
    }
}

/// One renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct RenormStep<S> {
    pub kind: StepKind,
    /// Renormalization interval `[u, v]` in the coordinates of `before`.
    pub interval: (S, S),
    pub ell: usize,
    pub r: usize,
    pub before: LorenzMap<S>,
    /// The renormalized map on `interval`, before rescaling.
    pub restricted: LorenzMap<S>,
    /// `restricted` rescaled to `[0, 1]`.
    pub after: LorenzMap<S>,
    /// Chart from `[0, 1]` back onto `interval`.
    pub chart: AffineChart<S>,
    pub e_minus: Option<S>,
    pub e_plus: Option<S>,
}

/// Which trivial renormalization applies, if any.
pub fn is_trivially_renormalizable<S: Scalar>(f: &LorenzMap<S>) -> Result<Option<TrivialCase>> {
    f.require_l()?;
    let c = f.c();
    if *c <= f.f_lo() {
        Ok(Some(TrivialCase::Left))
    } else if *c >= f.f_hi() {
        Ok(Some(TrivialCase::Right))
    } else {
        Ok(None)
    }
}

pub fn trivial_renormalize<S: Scalar>(f: &LorenzMap<S>) -> Result<RenormStep<S>> {
    let case = is_trivially_renormalizable(f)?
        .ok_or_else(|| Error::Precondition(format!("{f} is not trivially renormalizable")))?;
    let ab = f.a().clone() * f.b().clone();
    let (kind, lo, hi, a, b, ell, r) = match case {
        TrivialCase::Left => (StepKind::TrivialLeft, f.lo().clone(), f.f_hi(), ab, f.b().clone(), 2, 1),
        TrivialCase::Right => (
            StepKind::TrivialRight,
            f.f_lo(),
            f.hi().clone(),
            f.a().clone(),
            ab,
            1,
            2,
        ),
    };
    let restricted = LorenzMap::on_domain(a, b, f.c().clone(), lo.clone(), hi.clone())?;
    let (after, chart) = restricted.rescale_to_unit();
    Ok(RenormStep {
        kind,
        interval: (lo, hi),
        ell,
        r,
        before: f.clone(),
        restricted,
        after,
        chart,
        e_minus: None,
        e_plus: None,
    })
}

fn kappa_of<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> Result<usize> {
    match minimal_period(f, cap)?.kappa {
        Kappa::Finite(k) => Ok(k),
        Kappa::ExceedsCap => Err(Error::CapExceeded {
            what: "computing the minimal period".into(),
            cap,
        }),
    }
}

/// Trivially renormalizes until the map has a fixed point or lies in `L2`.
/// Every map reached this way has `kappa <= 2`.
pub fn reduce<S: Scalar>(f: &LorenzMap<S>) -> Result<(LorenzMap<S>, Vec<RenormStep<S>>)> {
    reduce_with_cap(f, DEFAULT_PERIOD_CAP)
}

pub fn reduce_with_cap<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> Result<(LorenzMap<S>, Vec<RenormStep<S>>)> {
    f.require_l()?;
    let mut g = f.clone();
    let mut chain = Vec::new();
    let mut kappa = kappa_of(&g, cap)?;
    while kappa >= 2 && is_trivially_renormalizable(&g)?.is_some() {
        let step = trivial_renormalize(&g)?;
        let next = step.after.clone();
        if !next.classify_membership().in_l() {
            return Err(Error::Invariant(format!(
                "trivial renormalization {next} left the class L"
            )));
        }
        let k = kappa_of(&next, cap)?;
        if k >= kappa {
            return Err(Error::Invariant(format!(
                "minimal period did not drop under trivial renormalization ({kappa} -> {k})"
            )));
        }
        chain.push(step);
        g = next;
        kappa = k;
    }
    Ok((g, chain))
}

/// The orbit of the trivial renormalization read off an orbit of `f`. The
/// doubled branch of `g` is two steps of `f`, so a visit to it skips one
/// point of the `f`-orbit.
pub fn first_return_orbit<S: Scalar>(f: &LorenzMap<S>, kind: StepKind, f_orbit: &[S], take: usize) -> Vec<S> {
    let doubled = match kind {
        StepKind::TrivialLeft => Symbol::L,
        _ => Symbol::R,
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < f_orbit.len() && out.len() < take {
        out.push(f_orbit[i].clone());
        i += if f.symbol_of(&f_orbit[i]) == Some(doubled) {
            2
        } else {
            1
        };
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodicVerdict {
    RenormalizablePeriodic,
    Prime,
}

impl PeriodicVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PeriodicVerdict::RenormalizablePeriodic => "renormalizable_periodic",
            PeriodicVerdict::Prime => "prime",
        }
    }
}

/// Outcome of the periodic-renormalization test on a reduced map.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCheck<S> {
    pub verdict: PeriodicVerdict,
    pub kappa: usize,
    /// The period-2 points, when `kappa = 2`.
    pub p_left: Option<S>,
    pub p_right: Option<S>,
    /// Set in float mode when an inclusion was decided within tolerance.
    pub ambiguous: bool,
}

/// Decides periodic renormalizability of a map with `kappa <= 2`: it holds
/// iff `[f(lo), f(hi)]` sits inside `[P_L, P_R]`.
pub fn check_periodic_renormalizable<S: Scalar>(f: &LorenzMap<S>) -> Result<PeriodicCheck<S>> {
    f.require_l()?;
    let kappa = kappa_of(f, DEFAULT_PERIOD_CAP)?;
    if kappa == 1 {
        return Ok(PeriodicCheck {
            verdict: PeriodicVerdict::Prime,
            kappa,
            p_left: None,
            p_right: None,
            ambiguous: false,
        });
    }
    if kappa != 2 {
        return Err(Error::Precondition(format!(
            "periodic check expects a reduced map with kappa <= 2, got {kappa}"
        )));
    }
    let lr: Word = Word(vec![Symbol::L, Symbol::R]);
    let rl: Word = Word(vec![Symbol::R, Symbol::L]);
    let p_left = solve_itinerary(f, &lr).ok_or(Error::NotFound { kappa: 2 })?.x;
    let p_right = solve_itinerary(f, &rl).ok_or(Error::NotFound { kappa: 2 })?.x;
    // f^2(c+) = f(lo) and f^2(c-) = f(hi)
    let lower = f.f_lo();
    let upper = f.f_hi();
    if lower == *f.c() || upper == *f.c() {
        return Err(Error::HitCritical { step: 2 });
    }
    let ambiguous = p_left.is_ambiguous_against(&lower) || upper.is_ambiguous_against(&p_right);
    let verdict = if p_left <= lower && upper <= p_right {
        PeriodicVerdict::RenormalizablePeriodic
    } else {
        PeriodicVerdict::Prime
    };
    Ok(PeriodicCheck {
        verdict,
        kappa,
        p_left: Some(p_left),
        p_right: Some(p_right),
        ambiguous,
    })
}

/// The inclusion `[f^k(c+), f^k(c-)] ⊆ [P_L, P_R]` evaluated directly at the
/// minimal period `k` of `f`, without reducing first. Used to cross-check the
/// reduced verdict. Maps with a fixed point are prime.
pub fn periodic_inclusion_at_kappa<S: Scalar>(f: &LorenzMap<S>) -> Result<PeriodicVerdict> {
    f.require_l()?;
    let kappa = kappa_of(f, DEFAULT_PERIOD_CAP)?;
    if kappa == 1 {
        return Ok(PeriodicVerdict::Prime);
    }
    let orbit = minimal_periodic_orbit(f, kappa)?;
    let plus = f.orbit(&OneSidedPoint::plus(f.c().clone()), kappa)?;
    let minus = f.orbit(&OneSidedPoint::minus(f.c().clone()), kappa)?;
    let lower = &plus[kappa];
    let upper = &minus[kappa];
    if orbit.p_left <= *lower && *upper <= orbit.p_right {
        Ok(PeriodicVerdict::RenormalizablePeriodic)
    } else {
        Ok(PeriodicVerdict::Prime)
    }
}

/// Least `k >= 1` such that `f^k` maps the open interval `(u, v)` across
/// `c`, i.e. `f^k` is continuous on `(u, v)` but `f^(k+1)` is not.
fn continuity_length<S: Scalar>(f: &LorenzMap<S>, u: &S, v: &S, cap: usize) -> Result<usize> {
    let (mut u, mut v) = (u.clone(), v.clone());
    for k in 1..=cap {
        let img = f.interval_image(&u, &v);
        let (nu, nv) = img
            .image
            .intervals()
            .first()
            .cloned()
            .ok_or_else(|| Error::Invariant("empty interval image".into()))?;
        if img.crossed_c {
            return Err(Error::Invariant("interval crossed c before the image did".into()));
        }
        if &nu < f.c() && f.c() < &nv {
            return Ok(k);
        }
        u = nu;
        v = nv;
    }
    Err(Error::ContinuityWitnessFailure { cap })
}

/// The minimal periodic renormalization of a reduced, renormalizable map.
pub fn renormalize<S: Scalar>(f: &LorenzMap<S>) -> Result<RenormStep<S>> {
    let check = check_periodic_renormalizable(f)?;
    if check.verdict != PeriodicVerdict::RenormalizablePeriodic {
        return Err(Error::Precondition(format!("{f} is not periodically renormalizable")));
    }
    let kappa = check.kappa;
    let cap = 10 * kappa + 64;
    let orbit = minimal_periodic_orbit(f, kappa)?;
    let (e_minus, e_plus) = (orbit.p_left, orbit.p_right);
    let c = f.c().clone();
    let ell = continuity_length(f, &e_minus, &c, cap)?;
    let r = continuity_length(f, &c, &e_plus, cap)?;

    let (wm, wp) = critical_itineraries(f, ell.max(r))?;
    let slope_left = slope_product(f, &Word(wm.symbols()[..ell].to_vec()));
    let slope_right = slope_product(f, &Word(wp.symbols()[..r].to_vec()));
    let minus = f.limit_orbit(&OneSidedPoint::minus(c.clone()), ell)?;
    let plus = f.limit_orbit(&OneSidedPoint::plus(c.clone()), r)?;
    let u = plus[r].clone();
    let v = minus[ell].clone();
    let restricted = LorenzMap::on_domain(slope_left, slope_right, c, u.clone(), v.clone())?;

    let back_minus = f.orbit(&OneSidedPoint::exact(e_minus.clone()), ell)?;
    if back_minus[ell] != e_minus {
        return Err(Error::Invariant(format!("f^{ell}(e-) != e-")));
    }
    let back_plus = f.orbit(&OneSidedPoint::exact(e_plus.clone()), r)?;
    if back_plus[r] != e_plus {
        return Err(Error::Invariant(format!("f^{r}(e+) != e+")));
    }
    let (after, chart) = restricted.rescale_to_unit();
    if after.a() != after.b() {
        return Err(Error::Invariant(format!(
            "periodic renormalization has unequal slopes {} and {}",
            after.a(),
            after.b()
        )));
    }
    Ok(RenormStep {
        kind: StepKind::Periodic,
        interval: (u, v),
        ell,
        r,
        before: f.clone(),
        restricted,
        after,
        chart,
        e_minus: Some(e_minus),
        e_plus: Some(e_plus),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dichotomy {
    /// The minimal completely invariant set is the period-`kappa` orbit.
    DEqualsO,
    /// The minimal completely invariant set is the whole interval.
    DEqualsI,
}

impl Dichotomy {
    pub fn as_str(self) -> &'static str {
        match self {
            Dichotomy::DEqualsO => "D_equals_O",
            Dichotomy::DEqualsI => "D_equals_I",
        }
    }
}

pub fn classify_dichotomy<S: Scalar>(f: &LorenzMap<S>) -> Result<Dichotomy> {
    Ok(match check_periodic_renormalizable(f)?.verdict {
        PeriodicVerdict::RenormalizablePeriodic => Dichotomy::DEqualsO,
        PeriodicVerdict::Prime => Dichotomy::DEqualsI,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminalClass {
    PrimeFixedPoint,
    PrimeDichotomy,
}

impl TerminalClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalClass::PrimeFixedPoint => "prime_fixed_point",
            TerminalClass::PrimeDichotomy => "prime_dichotomy",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeReport<S> {
    pub input: LorenzMap<S>,
    pub steps: Vec<RenormStep<S>>,
    /// Number of periodic steps.
    pub depth_m: usize,
    pub terminal: LorenzMap<S>,
    pub terminal_class: TerminalClass,
    /// One entry per reduced map met along the way.
    pub dichotomy_at_each_level: Vec<Dichotomy>,
    /// Minimal period of the input.
    pub kappa: usize,
    pub warnings: Vec<String>,
}

impl<S: Scalar> CascadeReport<S> {
    pub fn is_prime(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn periodic_steps(&self) -> impl Iterator<Item = &RenormStep<S>> {
        self.steps.iter().filter(|s| s.kind == StepKind::Periodic)
    }
}

pub fn cascade<S: Scalar>(f: &LorenzMap<S>) -> Result<CascadeReport<S>> {
    cascade_with_cap(f, DEFAULT_LEVEL_CAP)
}

/// Reduce, test, renormalize, repeat. Fails with `CapExceeded` after
/// `level_cap` periodic steps.
pub fn cascade_with_cap<S: Scalar>(f: &LorenzMap<S>, level_cap: usize) -> Result<CascadeReport<S>> {
    cascade_with_caps(f, level_cap, DEFAULT_PERIOD_CAP)
}

/// As [`cascade_with_cap`], with `period_cap` preimage levels for the
/// minimal-period searches during reduction.
pub fn cascade_with_caps<S: Scalar>(f: &LorenzMap<S>, level_cap: usize, period_cap: usize) -> Result<CascadeReport<S>> {
    f.require_l()?;
    let kappa = kappa_of(f, period_cap)?;
    let mut steps = Vec::new();
    let mut dichotomy = Vec::new();
    let mut warnings = Vec::new();
    let mut depth = 0;
    let mut cur = f.clone();
    loop {
        let (g, chain) = reduce_with_cap(&cur, period_cap)?;
        steps.extend(chain);
        let check = check_periodic_renormalizable(&g)?;
        if check.ambiguous {
            warnings.push(format!(
                "level {depth}: inclusion [f(0), f(1)] in [P_L, P_R] decided within tolerance"
            ));
        }
        match check.verdict {
            PeriodicVerdict::Prime => {
                dichotomy.push(Dichotomy::DEqualsI);
                let terminal_class = if check.kappa == 1 {
                    TerminalClass::PrimeFixedPoint
                } else {
                    TerminalClass::PrimeDichotomy
                };
                return Ok(CascadeReport {
                    input: f.clone(),
                    steps,
                    depth_m: depth,
                    terminal: g,
                    terminal_class,
                    dichotomy_at_each_level: dichotomy,
                    kappa,
                    warnings,
                });
            }
            PeriodicVerdict::RenormalizablePeriodic => {
                if depth == level_cap {
                    return Err(Error::CapExceeded {
                        what: "following the renormalization cascade".into(),
                        cap: level_cap,
                    });
                }
                dichotomy.push(Dichotomy::DEqualsO);
                let step = renormalize(&g)?;
                cur = step.after.clone();
                steps.push(step);
                depth += 1;
            }
        }
    }
}

/// `true` if the map is in `L2`.
pub fn in_l2<S: Scalar>(f: &LorenzMap<S>) -> bool {
    f.classify_membership() == Membership::L2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Exact, Float};

    fn f(a: Exact, b: Exact, c: Exact) -> LorenzMap<Exact> {
        LorenzMap::new(a, b, c).unwrap()
    }

    fn sym(a: Exact) -> LorenzMap<Exact> {
        f(a.clone(), a, q(1, 2))
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(
            is_trivially_renormalizable(&f(q(1, 2), q(8, 5), q(2, 5))).unwrap(),
            Some(TrivialCase::Left)
        );
        assert_eq!(is_trivially_renormalizable(&sym(q(13, 10))).unwrap(), None);
        // c = f(0) = 1 - a c with a = 3/2: c = 2/5
        let g = f(q(3, 2), q(3, 2), q(2, 5));
        assert_eq!(g.f_lo(), q(2, 5));
        assert_eq!(is_trivially_renormalizable(&g).unwrap(), Some(TrivialCase::Left));
        assert_eq!(
            is_trivially_renormalizable(&g.mirror()).unwrap(),
            Some(TrivialCase::Right)
        );
    }

    #[test]
    fn trivial_step_example() {
        let h = f(q(1, 2), q(8, 5), q(2, 5));
        let step = trivial_renormalize(&h).unwrap();
        assert_eq!(step.kind, StepKind::TrivialLeft);
        assert_eq!((step.ell, step.r), (2, 1));
        assert_eq!(step.interval, (q(0, 1), q(24, 25)));
        assert_eq!((step.after.a(), step.after.b()), (&q(4, 5), &q(8, 5)));
        assert_eq!(step.after.c(), &q(5, 12));
        assert_eq!(step.after.f_lo(), q(2, 3));
        assert_eq!(step.after.f_hi(), q(14, 15));
        assert!(trivial_renormalize(&sym(q(13, 10))).is_err());
    }

    #[test]
    fn trivial_step_drops_kappa() {
        let h = f(q(1, 2), q(8, 5), q(2, 5));
        let step = trivial_renormalize(&h).unwrap();
        assert_eq!(minimal_period(&step.after, 64).unwrap().kappa, Kappa::Finite(3));
    }

    #[test]
    fn trivial_orbit_identity() {
        let h = f(q(1, 2), q(8, 5), q(2, 5));
        let step = trivial_renormalize(&h).unwrap();
        let x = q(1, 10);
        let og = step.restricted.orbit(&OneSidedPoint::exact(x.clone()), 10).unwrap();
        let of = h.orbit(&OneSidedPoint::exact(x), 40).unwrap();
        assert_eq!(og, first_return_orbit(&h, StepKind::TrivialLeft, &of, 11));
    }

    #[test]
    fn window_intersection_is_not_the_orbit() {
        // f(0.1) = 0.85 lies in [0, 24/25] but g = f^2 jumps over it
        let h = f(q(1, 2), q(8, 5), q(2, 5));
        let step = trivial_renormalize(&h).unwrap();
        let (lo, hi) = step.interval.clone();
        let x = q(1, 10);
        let og = step.restricted.orbit(&OneSidedPoint::exact(x.clone()), 10).unwrap();
        let of = h.orbit(&OneSidedPoint::exact(x), 40).unwrap();
        let windowed: Vec<Exact> = of.into_iter().filter(|y| lo <= *y && *y <= hi).take(11).collect();
        assert_eq!(windowed[1], q(17, 20));
        assert_ne!(og, windowed);
    }

    #[test]
    fn trivial_right_is_mirror_of_left() {
        let h = f(q(1, 2), q(8, 5), q(2, 5));
        let left = trivial_renormalize(&h).unwrap();
        let right = trivial_renormalize(&h.mirror()).unwrap();
        assert_eq!(right.kind, StepKind::TrivialRight);
        assert_eq!(right.after, left.after.mirror());
    }

    #[test]
    fn reduce_examples() {
        let (g, chain) = reduce(&sym(q(13, 10))).unwrap();
        assert!(chain.is_empty());
        assert_eq!(g, sym(q(13, 10)));

        let h = f(q(1, 2), q(8, 5), q(2, 5));
        let (g, chain) = reduce(&h).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(minimal_period(&g, 64).unwrap().kappa, Kappa::Finite(2));

        let (_, chain) = reduce(&sym(q(2, 1))).unwrap();
        assert!(chain.is_empty());
    }

    #[test]
    fn reduce_boundary_case_reaches_fixed_point() {
        let g = f(q(3, 2), q(3, 2), q(2, 5));
        assert_eq!(minimal_period(&g, 64).unwrap().kappa, Kappa::Finite(2));
        let (r, chain) = reduce(&g).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(minimal_period(&r, 64).unwrap().kappa, Kappa::Finite(1));
    }

    #[test]
    fn periodic_check_examples() {
        let c = check_periodic_renormalizable(&sym(q(13, 10))).unwrap();
        assert_eq!(c.verdict, PeriodicVerdict::RenormalizablePeriodic);
        assert_eq!((c.p_left, c.p_right), (Some(q(13, 46)), Some(q(33, 46))));
        let c = check_periodic_renormalizable(&sym(q(3, 2))).unwrap();
        assert_eq!(c.verdict, PeriodicVerdict::Prime);
        assert_eq!(c.p_left, Some(q(3, 10)));
        let c = check_periodic_renormalizable(&sym(q(2, 1))).unwrap();
        assert_eq!((c.verdict, c.kappa), (PeriodicVerdict::Prime, 1));
    }

    #[test]
    fn renormalize_examples() {
        let s = renormalize(&sym(q(13, 10))).unwrap();
        assert_eq!((s.ell, s.r), (2, 2));
        assert_eq!(s.interval, (q(7, 20), q(13, 20)));
        assert_eq!(s.after, sym(q(169, 100)));
        assert_eq!((s.e_minus, s.e_plus), (Some(q(13, 46)), Some(q(33, 46))));

        let s = renormalize(&sym(q(6, 5))).unwrap();
        assert_eq!(s.after, sym(q(36, 25)));
        assert_eq!(s.e_minus, Some(q(3, 11)));
        assert_eq!(s.e_plus, Some(q(8, 11)));

        assert!(matches!(renormalize(&sym(q(3, 2))), Err(Error::Precondition(_))));
    }

    #[test]
    fn renormalized_branches_are_iterates() {
        let g = f(q(6, 5), q(11, 10), q(1, 2));
        let s = renormalize(&g).unwrap();
        let (u, v) = s.interval.clone();
        let c = g.c().clone();
        for k in 1..10 {
            let x = u.clone() + (c.clone() - u.clone()) * q(k, 10);
            let it = g.orbit(&OneSidedPoint::exact(x.clone()), s.ell).unwrap();
            assert_eq!(s.restricted.left(&x), it[s.ell]);
            let y = c.clone() + (v.clone() - c.clone()) * q(k, 10);
            let it = g.orbit(&OneSidedPoint::exact(y.clone()), s.r).unwrap();
            assert_eq!(s.restricted.right(&y), it[s.r]);
        }
    }

    #[test]
    fn cascade_examples() {
        let r = cascade(&sym(q(13, 10))).unwrap();
        assert_eq!(r.depth_m, 1);
        assert_eq!(r.terminal, sym(q(169, 100)));
        assert_eq!(r.terminal_class, TerminalClass::PrimeDichotomy);
        assert_eq!(
            r.dichotomy_at_each_level,
            vec![Dichotomy::DEqualsO, Dichotomy::DEqualsI]
        );

        assert_eq!(cascade(&sym(q(23, 20))).unwrap().depth_m, 2);
        let r = cascade(&sym(q(3, 2))).unwrap();
        assert_eq!(r.depth_m, 0);
        assert!(r.is_prime());

        let r = cascade(&sym(q(2, 1))).unwrap();
        assert_eq!(r.terminal_class, TerminalClass::PrimeFixedPoint);
        assert_eq!(r.dichotomy_at_each_level, vec![Dichotomy::DEqualsI]);
    }

    #[test]
    fn cascade_slopes_square() {
        let a = q(21, 20);
        let r = cascade(&sym(a.clone())).unwrap();
        for (k, step) in r.periodic_steps().enumerate() {
            assert_eq!(step.after, sym(a.powu(1 << (k + 1))));
        }
    }

    #[test]
    fn cascade_level_cap() {
        assert!(matches!(
            cascade_with_cap(&sym(q(101, 100)), 2),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn dichotomy_examples() {
        assert_eq!(classify_dichotomy(&sym(q(13, 10))).unwrap(), Dichotomy::DEqualsO);
        assert_eq!(classify_dichotomy(&sym(q(3, 2))).unwrap(), Dichotomy::DEqualsI);
        assert_eq!(classify_dichotomy(&sym(q(2, 1))).unwrap(), Dichotomy::DEqualsI);
    }

    #[test]
    fn inclusion_at_kappa_agrees_with_reduction() {
        for (a, b, c) in [
            (q(1, 2), q(8, 5), q(2, 5)),
            (q(6, 5), q(11, 10), q(9, 20)),
            (q(13, 10), q(13, 10), q(1, 2)),
            (q(7, 10), q(3, 2), q(1, 3)),
            (q(6, 5), q(3, 5), q(3, 4)),
        ] {
            let g = f(a, b, c);
            let (red, _) = reduce(&g).unwrap();
            let reduced = check_periodic_renormalizable(&red).unwrap().verdict;
            assert_eq!(periodic_inclusion_at_kappa(&g).unwrap(), reduced, "{g}");
        }
    }

    #[test]
    fn float_backend_agrees() {
        let g: LorenzMap<Float> = sym(q(13, 10)).to_backend();
        let r = cascade(&g).unwrap();
        assert_eq!(r.depth_m, 1);
        assert!((r.terminal.a().0 - 1.69).abs() < 1e-12);
    }
}
