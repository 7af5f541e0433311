//! Minimal period, periodic orbits and nice periodic points.
//!
//! The minimal period is read off the preimages of the critical point: with
//! no fixed point, `kappa = m + 2` where `m` is the first level of the
//! backward tree of `c` that meets `[f(lo), f(hi)]`. Periodic points are the
//! fixed points of the affine compositions prescribed by an itinerary.

use crate::error::{Error, Result};
use crate::map::{LorenzMap, Membership, OneSidedPoint, Side, Symbol, Word};
use crate::scalar::Scalar;

/// Default number of preimage levels searched by [`minimal_period`].
pub const DEFAULT_PERIOD_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kappa {
    Finite(usize),
    ExceedsCap,
}

impl Kappa {
    pub fn finite(self) -> Option<usize> {
        match self {
            Kappa::Finite(k) => Some(k),
            Kappa::ExceedsCap => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodReport<S> {
    pub kappa: Kappa,
    /// Preimage depth with `kappa = m + 2`; absent for fixed points and when
    /// the cap is hit.
    pub m: Option<usize>,
    /// The preimage of `c` found in `[f(lo), f(hi)]`.
    pub witness: Option<OneSidedPoint<S>>,
    pub fixed_point_case: bool,
}

/// Minimal period of the periodic points of `f`.
pub fn minimal_period<S: Scalar>(f: &LorenzMap<S>, cap: usize) -> Result<PeriodReport<S>> {
    f.require_l()?;
    if !f.fixed_points().is_empty() {
        return Ok(PeriodReport {
            kappa: Kappa::Finite(1),
            m: None,
            witness: None,
            fixed_point_case: true,
        });
    }
    let lower = f.f_lo();
    let upper = f.f_hi();
    let mut level: Vec<OneSidedPoint<S>> = vec![OneSidedPoint::exact(f.c().clone())];
    for m in 0..=cap {
        if let Some(hit) = level.iter().find(|p| lower <= p.x && p.x <= upper) {
            return Ok(PeriodReport {
                kappa: Kappa::Finite(m + 2),
                m: Some(m),
                witness: Some(hit.clone()),
                fixed_point_case: false,
            });
        }
        let mut next: Vec<OneSidedPoint<S>> = Vec::new();
        for p in &level {
            for pre in f.branch_preimages(&p.x) {
                if !next.iter().any(|q| q.x == pre.x && q.side == pre.side) {
                    next.push(pre);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(PeriodReport {
        kappa: Kappa::ExceedsCap,
        m: None,
        witness: None,
        fixed_point_case: false,
    })
}

/// A periodic point with its (minimal) period and itinerary.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPoint<S> {
    pub x: S,
    pub period: usize,
    pub itinerary: Word,
    /// `a^#L * b^#R` over one period.
    pub multiplier: S,
    pub nice: bool,
}

impl<S: Scalar> PeriodicPoint<S> {
    /// The points `x, f(x), ..., f^{period-1}(x)`.
    pub fn cycle(&self, f: &LorenzMap<S>) -> Vec<S> {
        let mut out = Vec::with_capacity(self.period);
        let mut x = self.x.clone();
        for &s in self.itinerary.symbols() {
            out.push(x.clone());
            x = f.branch(s, &x);
        }
        out
    }
}

/// `a^#L * b^#R` for a word.
pub fn slope_product<S: Scalar>(f: &LorenzMap<S>, w: &Word) -> S {
    f.a().powu(w.count(Symbol::L) as u32) * f.b().powu(w.count(Symbol::R) as u32)
}

fn compose<S: Scalar>(f: &LorenzMap<S>, w: &Word) -> (S, S) {
    let mut slope = S::one();
    let mut shift = S::zero();
    for &s in w.symbols() {
        let (m, k) = f.affine(s);
        shift = m.clone() * shift + k;
        slope = m * slope;
    }
    (slope, shift)
}

/// Checks that `x`, read from one side, follows `w` and returns to itself.
/// Both branches are increasing, so the side is kept along the orbit and
/// decides the symbol of any iterate equal to `c`.
fn follows_word<S: Scalar>(f: &LorenzMap<S>, x: &S, w: &Word) -> bool {
    [Symbol::L, Symbol::R].into_iter().any(|at_c| {
        let mut y = x.clone();
        for &s in w.symbols() {
            if !f.in_domain(&y) || f.symbol_of(&y).unwrap_or(at_c) != s {
                return false;
            }
            y = f.branch(s, &y);
        }
        y == *x
    })
}

/// The periodic point with itinerary `w`, if the affine fixed point of the
/// composed branches follows `w` strictly. The result is reduced to its
/// minimal period.
pub fn solve_itinerary<S: Scalar>(f: &LorenzMap<S>, w: &Word) -> Option<PeriodicPoint<S>> {
    if w.is_empty() {
        return None;
    }
    let (slope, shift) = compose(f, w);
    if slope == S::one() {
        return None;
    }
    let x = shift / (S::one() - slope);
    if !follows_word(f, &x, w) {
        return None;
    }
    let d = w.primitive_period();
    let itinerary = Word(w.symbols()[..d].to_vec());
    let multiplier = slope_product(f, &itinerary);
    let mut p = PeriodicPoint {
        x,
        period: d,
        itinerary,
        multiplier,
        nice: false,
    };
    p.nice = is_nice(f, &p).unwrap_or(false);
    Some(p)
}

/// `true` if `f^period` is continuous on the open interval between `p` and
/// `c`, checked by iterating both endpoints: they must stay on the same side
/// of `c` for `period` steps.
pub fn is_nice<S: Scalar>(f: &LorenzMap<S>, p: &PeriodicPoint<S>) -> Result<bool> {
    let side = match f.symbol_of(&p.x) {
        Some(Symbol::L) => Side::Minus,
        Some(Symbol::R) => Side::Plus,
        None => return Err(Error::HitCritical { step: 0 }),
    };
    let mut near = p.x.clone();
    let mut crit = OneSidedPoint { x: f.c().clone(), side };
    for step in 0..p.period {
        let s_near = f.symbol_of(&near).ok_or(Error::HitCritical { step })?;
        let s_crit = f.symbol_of_point(&crit)?;
        if s_near != s_crit {
            return Ok(false);
        }
        near = f.branch(s_near, &near);
        crit = OneSidedPoint {
            x: f.branch(s_crit, &crit.x),
            side,
        };
    }
    Ok(true)
}

/// All admissible cycles whose itinerary has length `n`, one periodic point
/// per admissible word, found by depth-first search over cylinders.
pub fn admissible_points<S: Scalar>(f: &LorenzMap<S>, n: usize) -> Vec<PeriodicPoint<S>> {
    struct Frame<S> {
        word: Vec<Symbol>,
        img_lo: S,
        img_hi: S,
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let c = f.c().clone();
    let mut stack = vec![Frame {
        word: Vec::new(),
        img_lo: f.lo().clone(),
        img_hi: f.hi().clone(),
    }];
    while let Some(fr) = stack.pop() {
        if fr.word.len() == n {
            if let Some(p) = solve_itinerary(f, &Word(fr.word)) {
                out.push(p);
            }
            continue;
        }
        // push R first so that L words pop first (lexicographic order)
        if fr.img_hi > c {
            let lo = S::max_of(fr.img_lo.clone(), c.clone());
            let mut w = fr.word.clone();
            w.push(Symbol::R);
            stack.push(Frame {
                word: w,
                img_lo: f.right(&lo),
                img_hi: f.right(&fr.img_hi),
            });
        }
        if fr.img_lo < c {
            let hi = S::min_of(fr.img_hi.clone(), c.clone());
            let mut w = fr.word;
            w.push(Symbol::L);
            stack.push(Frame {
                word: w,
                img_lo: f.left(&fr.img_lo),
                img_hi: f.left(&hi),
            });
        }
    }
    out
}

/// The unique cycle of minimal period `kappa` with its points sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit<S> {
    pub kappa: usize,
    pub points: Vec<PeriodicPoint<S>>,
    /// Largest orbit point below `c`, or `c` itself read as `c-`.
    pub p_left: S,
    /// Smallest orbit point above `c`, or `c` itself read as `c+`.
    pub p_right: S,
}

pub fn minimal_periodic_orbit<S: Scalar>(f: &LorenzMap<S>, kappa: usize) -> Result<PeriodicOrbit<S>> {
    if kappa < 2 {
        return Err(Error::Precondition(format!(
            "minimal periodic orbit needs kappa >= 2, got {kappa}"
        )));
    }
    let mut pts: Vec<PeriodicPoint<S>> = admissible_points(f, kappa)
        .into_iter()
        .filter(|p| p.period == kappa)
        .collect();
    pts.sort_by(|x, y| x.x.cmp_to(&y.x));
    pts.dedup_by(|x, y| x.x == y.x);
    if pts.is_empty() {
        return Err(Error::NotFound { kappa });
    }
    if pts.len() != kappa {
        return Err(Error::UniquenessViolation {
            kappa,
            found: pts.len().div_ceil(kappa),
        });
    }
    // all points must lie on one cycle
    let cycle = pts[0].cycle(f);
    if !pts.iter().all(|p| cycle.contains(&p.x)) {
        return Err(Error::UniquenessViolation { kappa, found: 2 });
    }
    // a point at `c` sits on the side its itinerary starts with
    let starts_with = |p: &PeriodicPoint<S>, s: Symbol| p.itinerary.symbols()[0] == s;
    let p_left = pts
        .iter()
        .filter(|p| starts_with(p, Symbol::L))
        .map(|p| p.x.clone())
        .last()
        .ok_or(Error::NotFound { kappa })?;
    let p_right = pts
        .iter()
        .find(|p| starts_with(p, Symbol::R))
        .map(|p| p.x.clone())
        .ok_or(Error::NotFound { kappa })?;
    Ok(PeriodicOrbit {
        kappa,
        points: pts,
        p_left,
        p_right,
    })
}

/// Smallest `n <= max_len` such that some word of length `n` is realized by
/// a periodic orbit. Independent of the preimage search in
/// [`minimal_period`].
pub fn brute_force_minimal_period<S: Scalar>(f: &LorenzMap<S>, max_len: usize) -> Option<usize> {
    (1..=max_len).find(|&n| !admissible_points(f, n).is_empty())
}

/// Symbols of the one-sided critical orbits, `c-` read as `L` and `c+` as
/// `R` whenever an iterate lands back on `c`. Entry `k` is the symbol of
/// `f^k(c-)` (resp. `f^k(c+)`), starting with `k = 0`.
pub fn critical_itineraries<S: Scalar>(f: &LorenzMap<S>, n: usize) -> Result<(Word, Word)> {
    let minus = f.limit_orbit(&OneSidedPoint::minus(f.c().clone()), n.saturating_sub(1))?;
    let plus = f.limit_orbit(&OneSidedPoint::plus(f.c().clone()), n.saturating_sub(1))?;
    let c = f.c();
    let wm = minus
        .iter()
        .take(n)
        .map(|x| if x <= c { Symbol::L } else { Symbol::R })
        .collect();
    let wp = plus
        .iter()
        .take(n)
        .map(|x| if x >= c { Symbol::R } else { Symbol::L })
        .collect();
    Ok((Word(wm), Word(wp)))
}

/// Left and right nice points.
pub type NicePoints<S> = (Vec<PeriodicPoint<S>>, Vec<PeriodicPoint<S>>);

/// Nice periodic points of period at most `max_period`, split by side.
///
/// Continuity of `f^l` on `(p, c)` forces the itinerary of `p` to agree with
/// the itinerary of `c-` for `l` steps, so each period has at most one
/// candidate per side: the periodic point of the corresponding prefix.
pub fn nice_points<S: Scalar>(f: &LorenzMap<S>, max_period: usize) -> Result<NicePoints<S>> {
    let (wm, wp) = critical_itineraries(f, max_period)?;
    let collect = |w: &Word, left: bool| -> Result<Vec<PeriodicPoint<S>>> {
        let mut out: Vec<PeriodicPoint<S>> = Vec::new();
        for len in 1..=max_period.min(w.len()) {
            let prefix = Word(w.symbols()[..len].to_vec());
            if prefix.primitive_period() != len {
                continue;
            }
            if let Some(p) = solve_itinerary(f, &prefix) {
                let correct_side = if left { p.x < *f.c() } else { p.x > *f.c() };
                if correct_side && p.period == len && is_nice(f, &p)? {
                    out.push(p);
                }
            }
        }
        Ok(out)
    };
    Ok((collect(&wm, true)?, collect(&wp, false)?))
}

/// Two nice periodic points straddling `c` with their multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct NicePair<S> {
    pub p: PeriodicPoint<S>,
    pub q: PeriodicPoint<S>,
    pub m_p: S,
    pub m_q: S,
}

impl<S: Scalar> NicePair<S> {
    /// `(M_p - 1)(M_q - 1)`.
    pub fn expansion(&self) -> S {
        (self.m_p.clone() - S::one()) * (self.m_q.clone() - S::one())
    }
}

/// Every nice pair with both periods at most `max_period`.
pub fn enumerate_nice_pairs<S: Scalar>(f: &LorenzMap<S>, max_period: usize) -> Result<Vec<NicePair<S>>> {
    if f.classify_membership() != Membership::L2 {
        return Err(Error::Precondition(format!("{f} is not in L2")));
    }
    if !f.fixed_points().is_empty() {
        return Err(Error::Precondition(format!("{f} has a fixed point")));
    }
    let (left, right) = nice_points(f, max_period)?;
    let mut out = Vec::with_capacity(left.len() * right.len());
    for p in &left {
        for q in &right {
            out.push(NicePair {
                p: p.clone(),
                q: q.clone(),
                m_p: p.multiplier.clone(),
                m_q: q.multiplier.clone(),
            });
        }
    }
    Ok(out)
}
