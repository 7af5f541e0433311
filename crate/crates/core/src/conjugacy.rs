//! Parameters of the conjugate β-transformation.
//!
//! `T_{β,α}(x) = βx + α mod 1` is the map `f_{β,β,(1-α)/β}`. It is a
//! self-map of `[0, 1]` only for `α <= 2 - β`, which bounds every search
//! below. The slope `β` is the exponential growth rate of the lap counts of
//! `f`. The offset `α` is found by bisection on the kneading words, which
//! are monotone in `α`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::map::{FractionOrbit, LorenzMap, OneSidedPoint, Symbol, Word};
use crate::periodic::DEFAULT_PERIOD_CAP;
use crate::renorm::{cascade_with_caps, DEFAULT_LEVEL_CAP};
use crate::scalar::Scalar;

/// Default largest lap index for [`lap_count`].
pub const DEFAULT_LAP_CAP: usize = 25;

/// Default kneading match depth for [`fit_alpha`].
pub const DEFAULT_MATCH_DEPTH: usize = 40;

/// Longest kneading prefix compared while bisecting.
pub const MAX_COMPARE_HORIZON: usize = 4096;

/// Itineraries of `f(c+) = lo` and `f(c-) = hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KneadingData {
    pub k_plus: Word,
    pub k_minus: Word,
    pub length: usize,
    /// First index at which either orbit lands on `c`; both words stop there
    /// or earlier.
    pub hit_critical_at: Option<usize>,
}

fn itinerary<S: Scalar>(f: &LorenzMap<S>, start: S, n: usize) -> (Word, Option<usize>) {
    let mut out = Vec::with_capacity(n);
    let mut y = start;
    for k in 0..n {
        match f.symbol_of(&y) {
            Some(s) => {
                out.push(s);
                y = f.branch(s, &y);
            }
            None => return (Word(out), Some(k)),
        }
    }
    (Word(out), None)
}

/// Same as [`itinerary`] for the exact backend, on unreduced fractions.
fn exact_itinerary<S: Scalar>(f: &LorenzMap<S>, start: &S, n: usize) -> Option<(Word, Option<usize>)> {
    let c = f.c().to_ratio()?;
    let mut y = FractionOrbit::new(f, start)?;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let s = match y.cmp_to(&c) {
            Ordering::Less => Symbol::L,
            Ordering::Greater => Symbol::R,
            Ordering::Equal => return Some((Word(out), Some(k))),
        };
        out.push(s);
        y.step(s);
    }
    Some((Word(out), None))
}

pub fn kneading<S: Scalar>(f: &LorenzMap<S>, n: usize) -> KneadingData {
    let exact = |x: &S| exact_itinerary(f, x, n);
    let (k_plus, hp) = exact(f.lo()).unwrap_or_else(|| itinerary(f, f.lo().clone(), n));
    let (k_minus, hm) = exact(f.hi()).unwrap_or_else(|| itinerary(f, f.hi().clone(), n));
    let hit_critical_at = match (hp, hm) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    KneadingData {
        k_plus,
        k_minus,
        length: n,
        hit_critical_at,
    }
}

/// Lap numbers `L_1, ..., L_n` of the iterates of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LapSeries {
    pub counts: Vec<BigUint>,
}

impl LapSeries {
    pub fn ratios(&self) -> Vec<f64> {
        self.counts.windows(2).map(|w| big_ratio(&w[1], &w[0])).collect()
    }
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(60);
    let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn lap_count<S: Scalar>(f: &LorenzMap<S>, n: usize) -> Result<LapSeries> {
    lap_count_with_cap(f, n, DEFAULT_LAP_CAP)
}

/// Lap numbers by tracking the image of every lap. The image of a lap of
/// `f^j` is `(f^k(c+), f^m(c-))` for some `k, m`; it splits in two under `f`
/// exactly when `c` lies strictly inside it.
pub fn lap_count_with_cap<S: Scalar>(f: &LorenzMap<S>, n: usize, cap: usize) -> Result<LapSeries> {
    f.require_l()?;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "counting laps".into(),
            cap,
        });
    }
    let c = f.c().clone();
    let plus = f.limit_orbit(&OneSidedPoint::plus(c.clone()), n + 1)?;
    let minus = f.limit_orbit(&OneSidedPoint::minus(c.clone()), n + 1)?;
    let mut laps: HashMap<(usize, usize), BigUint> = HashMap::new();
    laps.insert((1, 1), BigUint::one());
    let mut counts = Vec::with_capacity(n);
    for _ in 0..n {
        let mut next: HashMap<(usize, usize), BigUint> = HashMap::with_capacity(laps.len() * 2);
        for ((k, m), w) in laps {
            if plus[k] < c && c < minus[m] {
                *next.entry((k + 1, 1)).or_insert_with(BigUint::zero) += &w;
                *next.entry((1, m + 1)).or_insert_with(BigUint::zero) += w;
            } else {
                *next.entry((k + 1, m + 1)).or_insert_with(BigUint::zero) += w;
            }
        }
        counts.push(next.values().sum());
        laps = next;
    }
    Ok(LapSeries { counts })
}

/// Growth-rate estimate of the lap numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub beta: f64,
    /// Spread of the last two lap ratios.
    pub error_estimate: f64,
    /// Largest lap index used.
    pub n_used: usize,
    pub accelerated: bool,
}

/// `L_{n+1} / L_n` at the largest `n`, improved by Aitken's Δ² when the
/// accelerated value is steady and stays in `(1, 2]`; always returns a value
/// in `(1, 2]`.
pub fn entropy_beta<S: Scalar>(f: &LorenzMap<S>, n_max: usize, tol: f64) -> Result<EntropyEstimate> {
    let laps = lap_count_with_cap(f, n_max, n_max.max(DEFAULT_LAP_CAP))?;
    if laps.counts.len() < 4 {
        return Err(Error::CapExceeded {
            what: "estimating entropy from fewer than 4 lap numbers".into(),
            cap: n_max,
        });
    }
    let r = laps.ratios();
    let k = r.len();
    let (r0, r1, r2) = (r[k - 3], r[k - 2], r[k - 1]);
    let error_estimate = (r2 - r1).abs();
    let denom = (r2 - r1) - (r1 - r0);
    let mut beta = r2;
    let mut accelerated = false;
    if error_estimate > tol && denom.abs() > f64::EPSILON {
        let aitken = r2 - (r2 - r1) * (r2 - r1) / denom;
        // Aitken overshoots when the ratios oscillate; keep it only when it
        // moves by at most twice the last step.
        let steady = (aitken - r2).abs() <= 2.0 * error_estimate;
        if aitken.is_finite() && steady && aitken > 1.0 && aitken <= 2.0 {
            beta = aitken;
            accelerated = true;
        }
    }
    Ok(EntropyEstimate {
        beta: beta.clamp(1.0 + f64::EPSILON, 2.0),
        error_estimate,
        n_used: laps.counts.len(),
        accelerated,
    })
}

/// `T_{β,α}` as a Lorenz map.
pub fn beta_transformation<S: Scalar>(beta: &S, alpha: &S) -> Result<LorenzMap<S>> {
    let c = (S::one() - alpha.clone()) / beta.clone();
    LorenzMap::new(beta.clone(), beta.clone(), c)
}

/// Lexicographic order with `L < R` on the common length; a word that is a
/// prefix of the other compares equal.
fn cmp_prefix(u: &Word, v: &Word) -> (Ordering, usize) {
    let k = u.common_prefix(v);
    if k < u.len() && k < v.len() {
        (u.symbols()[k].cmp(&v.symbols()[k]), k)
    } else {
        (Ordering::Equal, k)
    }
}

/// Compares the kneading pair of `g` against that of `f`: the component that
/// diverges first decides. Returns the order and the match length.
fn compare_kneading(g: &KneadingData, f: &KneadingData) -> (Ordering, usize) {
    let (op, kp) = cmp_prefix(&g.k_plus, &f.k_plus);
    let (om, km) = cmp_prefix(&g.k_minus, &f.k_minus);
    let matched = kp.min(km);
    match (op, om) {
        (Ordering::Equal, Ordering::Equal) => (Ordering::Equal, matched),
        (Ordering::Equal, o) | (o, Ordering::Equal) => (o, matched),
        (o1, o2) => (if kp <= km { o1 } else { o2 }, matched),
    }
}

/// Kneading comparison of `T_{β,α}` against `f`, lengthening the words up
/// to [`MAX_COMPARE_HORIZON`] while they agree.
fn compare_at<S: Scalar>(f: &LorenzMap<S>, beta: &S, alpha: &S, n: usize) -> Result<(Ordering, usize)> {
    let t = beta_transformation(beta, alpha)?;
    let mut horizon = n.max(1);
    loop {
        let kt = kneading(&t, horizon);
        let kf = kneading(f, horizon);
        let (ord, matched) = compare_kneading(&kt, &kf);
        let truncated = kt.hit_critical_at.is_some() || kf.hit_critical_at.is_some();
        if ord != Ordering::Equal || truncated || horizon >= MAX_COMPARE_HORIZON {
            return Ok((ord, matched.min(n)));
        }
        horizon = (horizon * 2).min(MAX_COMPARE_HORIZON);
    }
}

/// Result of [`fit_alpha`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaFit<S> {
    pub alpha: S,
    /// Kneading symbols shared by `T_{β,α}` and `f`, at most `n`.
    pub match_length: usize,
    pub bisections: usize,
    /// Final bracket width.
    pub bracket: S,
}

/// Bisection over `α in [0, 2 - β]`. The kneading words of `T_{β,α}` grow
/// with `α`; a word below that of `f` moves the lower end up. Stops when
/// the bracket is narrower than `tol` or the words agree to
/// [`MAX_COMPARE_HORIZON`] symbols.
pub fn fit_alpha<S: Scalar>(f: &LorenzMap<S>, beta: &S, n: usize, tol: &S) -> Result<AlphaFit<S>> {
    f.require_l()?;
    let (f, _) = f.rescale_to_unit();
    let two = S::from_int(2);
    if !(*beta > S::one() && *beta <= two) {
        return Err(Error::Precondition(format!("beta = {beta} must lie in (1, 2]")));
    }
    let mut lo = S::zero();
    let mut hi = two - beta.clone();
    let (olo, mlo) = compare_at(&f, beta, &lo, n)?;
    if olo == Ordering::Equal {
        return Ok(AlphaFit {
            alpha: lo,
            match_length: mlo,
            bisections: 0,
            bracket: S::zero(),
        });
    }
    let (ohi, mhi) = compare_at(&f, beta, &hi, n)?;
    if ohi == Ordering::Equal {
        return Ok(AlphaFit {
            alpha: hi,
            match_length: mhi,
            bisections: 0,
            bracket: S::zero(),
        });
    }
    if !(olo == Ordering::Less && ohi == Ordering::Greater) {
        return Err(Error::NoMonotoneBracket);
    }
    let half = S::from_frac(1, 2);
    let mut bisections = 0;
    let mut best = (mlo.max(mhi), lo.clone());
    while hi.clone() - lo.clone() >= *tol && bisections < 200 {
        let mid = (lo.clone() + hi.clone()) * half.clone();
        let (ord, m) = compare_at(&f, beta, &mid, n)?;
        bisections += 1;
        if m >= best.0 {
            best = (m, mid.clone());
        }
        match ord {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => {
                return Ok(AlphaFit {
                    alpha: mid,
                    match_length: m,
                    bisections,
                    bracket: hi - lo,
                });
            }
        }
    }
    let alpha = (lo.clone() + hi.clone()) * half;
    let (_, m) = compare_at(&f, beta, &alpha, n)?;
    let (match_length, alpha) = if m >= best.0 { (m, alpha) } else { best };
    Ok(AlphaFit {
        alpha,
        match_length,
        bisections,
        bracket: hi - lo,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BetaSource {
    /// Equal slopes: `f` is already a β-transformation.
    ConstantSlope,
    /// Lap-number growth rate.
    LapGrowth,
}

impl BetaSource {
    pub fn as_str(self) -> &'static str {
        match self {
            BetaSource::ConstantSlope => "constant_slope",
            BetaSource::LapGrowth => "lap_growth",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub cascade_depth: usize,
    pub kneading_match_length: usize,
    pub beta_source: BetaSource,
    pub beta_error_estimate: f64,
    pub bisections: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaTransformParams<S> {
    pub beta: S,
    pub alpha: S,
    pub certificate: Certificate,
}

impl<S: Scalar> BetaTransformParams<S> {
    /// `f_{β,β,(1-α)/β}`.
    pub fn realization(&self) -> Result<LorenzMap<S>> {
        beta_transformation(&self.beta, &self.alpha)
    }
}

/// Options for [`conjugate_beta_transformation`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyOptions {
    /// Largest lap index used for the slope estimate.
    pub lap_depth: usize,
    pub match_depth: usize,
    pub alpha_tol: f64,
    /// Preimage levels for the minimal-period searches of the cascade.
    pub period_cap: usize,
}

impl Default for ConjugacyOptions {
    fn default() -> Self {
        ConjugacyOptions {
            lap_depth: 200,
            match_depth: DEFAULT_MATCH_DEPTH,
            alpha_tol: 1e-9,
            period_cap: DEFAULT_PERIOD_CAP,
        }
    }
}

pub fn conjugate_beta_transformation<S: Scalar>(f: &LorenzMap<S>) -> Result<BetaTransformParams<S>> {
    conjugate_with(f, &ConjugacyOptions::default())
}

/// Certifies the criterion with the cascade, then recovers `(β, α)` and
/// checks that the kneading words of `T_{β,α}` agree with those of `f` to
/// the reported match length.
pub fn conjugate_with<S: Scalar>(f: &LorenzMap<S>, opts: &ConjugacyOptions) -> Result<BetaTransformParams<S>> {
    let report = cascade_with_caps(f, DEFAULT_LEVEL_CAP, opts.period_cap)?;
    let (g, _) = f.rescale_to_unit();
    let n = opts.match_depth;
    let (beta, alpha, source, err, bisections, matched) = if g.a() == g.b() {
        let beta = g.a().clone();
        let alpha = g.f_lo();
        let t = beta_transformation(&beta, &alpha)?;
        let (_, matched) = compare_kneading(&kneading(&t, n), &kneading(&g, n));
        (beta, alpha, BetaSource::ConstantSlope, 0.0, 0, matched)
    } else {
        let est = entropy_beta(&g, opts.lap_depth, 1e-12)?;
        let beta = S::from_f64(est.beta);
        let fit = fit_alpha(&g, &beta, n, &S::from_f64(opts.alpha_tol))?;
        (
            beta,
            fit.alpha,
            BetaSource::LapGrowth,
            est.error_estimate,
            fit.bisections,
            fit.match_length,
        )
    };
    let params = BetaTransformParams {
        beta,
        alpha,
        certificate: Certificate {
            cascade_depth: report.depth_m,
            kneading_match_length: matched,
            beta_source: source,
            beta_error_estimate: err,
            bisections,
        },
    };
    let t = params.realization()?;
    let kt = kneading(&t, matched);
    let kg = kneading(&g, matched);
    if kt
        .k_plus
        .common_prefix(&kg.k_plus)
        .min(kt.k_minus.common_prefix(&kg.k_minus))
        < matched
            .min(kt.k_plus.len())
            .min(kg.k_plus.len())
            .min(kt.k_minus.len())
            .min(kg.k_minus.len())
    {
        return Err(Error::Invariant("kneading certificate does not reproduce".into()));
    }
    Ok(params)
}

/// First symbol where the two words differ, if any.
pub fn first_difference(u: &Word, v: &Word) -> Option<(usize, Symbol, Symbol)> {
    let k = u.common_prefix(v);
    if k < u.len() && k < v.len() {
        Some((k, u.symbols()[k], v.symbols()[k]))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Exact};

    fn f(a: Exact, b: Exact, c: Exact) -> LorenzMap<Exact> {
        LorenzMap::new(a, b, c).unwrap()
    }

    /// `1 + sum_{j<k} |f^{-j}(c)|`, with the preimage sets built level by
    /// level from the branch inverses.
    fn laps_from_preimages(g: &LorenzMap<Exact>, n: usize) -> Vec<u64> {
        let mut level: Vec<Exact> = vec![g.c().clone()];
        let mut total = 0u64;
        let mut out = Vec::new();
        for _ in 0..n {
            total += level.len() as u64;
            out.push(1 + total);
            let mut next = Vec::new();
            for y in &level {
                // left inverse: a (x - c) + 1 = y, right inverse: b (x - c) = y
                let xl = (y.clone() - q(1, 1)) / g.a().clone() + g.c().clone();
                if xl >= q(0, 1) && xl < *g.c() {
                    next.push(xl);
                }
                let xr = y.clone() / g.b().clone() + g.c().clone();
                if xr > *g.c() && xr <= q(1, 1) {
                    next.push(xr);
                }
            }
            level = next;
        }
        out
    }

    #[test]
    fn kneading_examples() {
        let g = f(q(13, 10), q(13, 10), q(1, 2));
        let k = kneading(&g, 4);
        assert_eq!(k.k_plus.to_string(), "LLRL");
        let swapped: Vec<Symbol> = k.k_plus.symbols().iter().map(|s| s.flip()).collect();
        assert_eq!(k.k_minus.symbols(), &swapped[..]);

        let k = kneading(&f(q(2, 1), q(2, 1), q(1, 2)), 6);
        assert_eq!(k.k_plus.to_string(), "LLLLLL");
        assert_eq!(k.hit_critical_at, None);
    }

    #[test]
    fn kneading_truncates_at_c() {
        // 0 -> 1 - a c = c when a = 2/3 and c = 3/5
        let g = f(q(2, 3), q(2, 1), q(3, 5));
        assert_eq!(g.f_lo(), q(3, 5));
        let k = kneading(&g, 5);
        assert_eq!(k.hit_critical_at, Some(1));
        assert_eq!(k.k_plus.len(), 1);
    }

    #[test]
    fn lap_examples() {
        let l = lap_count(&f(q(2, 1), q(2, 1), q(1, 2)), 10).unwrap();
        for (i, v) in l.counts.iter().enumerate() {
            assert_eq!(*v, BigUint::from(1u64 << (i + 1)));
        }
        let l = lap_count(&f(q(13, 10), q(13, 10), q(1, 2)), 2).unwrap();
        assert_eq!(l.counts, vec![BigUint::from(2u32), BigUint::from(4u32)]);
        assert!(lap_count(&f(q(13, 10), q(13, 10), q(1, 2)), 26).is_err());
    }

    #[test]
    fn lap_counts_match_preimage_tree() {
        for (a, b, c) in [
            (q(13, 10), q(13, 10), q(1, 2)),
            (q(9, 10), q(9, 5), q(11, 20)),
            (q(1, 2), q(8, 5), q(2, 5)),
            (q(4, 5), q(8, 5), q(5, 12)),
            (q(7, 5), q(6, 5), q(9, 20)),
        ] {
            let g = f(a, b, c);
            let dp: Vec<u64> = lap_count(&g, 16)
                .unwrap()
                .counts
                .iter()
                .map(|x| x.to_u64().unwrap())
                .collect();
            assert_eq!(dp, laps_from_preimages(&g, 16), "{g}");
        }
    }

    #[test]
    fn lap_growth_is_at_most_doubling() {
        let l = lap_count(&f(q(9, 10), q(9, 5), q(11, 20)), 25).unwrap();
        assert_eq!(l.counts[0], BigUint::from(2u32));
        for w in l.counts.windows(2) {
            assert!(w[1] <= &w[0] * 2u32);
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn entropy_examples() {
        let e = entropy_beta(&f(q(2, 1), q(2, 1), q(1, 2)), 25, 1e-3).unwrap();
        assert_eq!(e.beta, 2.0);
        for (s, c) in [(q(19, 10), q(1, 2)), (q(17, 10), q(9, 20)), (q(3, 2), q(1, 2))] {
            let g = f(s.clone(), s.clone(), c);
            let e = entropy_beta(&g, 25, 1e-3).unwrap();
            assert!((e.beta - Scalar::to_f64(&s)).abs() < 1e-2, "{g}: {e:?}");
        }
        let e = entropy_beta(&f(q(4, 5), q(8, 5), q(5, 12)), 25, 1e-3).unwrap();
        assert!(e.beta > 1.0 && e.beta <= 2.0);
        assert!(entropy_beta(&f(q(2, 1), q(2, 1), q(1, 2)), 3, 1e-3).is_err());
    }

    #[test]
    fn alpha_examples() {
        for (s, c, alpha) in [
            (q(13, 10), q(1, 2), q(35, 100)),
            (q(3, 2), q(1, 2), q(1, 4)),
            (q(9, 5), q(4, 9), q(1, 5)),
        ] {
            let g = f(s.clone(), s.clone(), c);
            let fit = fit_alpha(&g, &s, 40, &q(1, 100_000)).unwrap();
            let err = (fit.alpha.clone() - alpha).abs();
            assert!(err < q(1, 10_000), "{g}: {}", fit.alpha);
            assert!(fit.bisections <= 40);
            assert_eq!(fit.match_length, 40);
        }
    }

    #[test]
    fn alpha_rejects_bad_beta() {
        let g = f(q(13, 10), q(13, 10), q(1, 2));
        assert!(fit_alpha(&g, &q(5, 2), 40, &q(1, 1000)).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let p = conjugate_beta_transformation(&f(q(13, 10), q(13, 10), q(1, 2))).unwrap();
        assert_eq!((p.beta.clone(), p.alpha.clone()), (q(13, 10), q(7, 20)));
        assert_eq!(p.certificate.cascade_depth, 1);
        assert_eq!(p.certificate.kneading_match_length, DEFAULT_MATCH_DEPTH);

        let p = conjugate_beta_transformation(&f(q(2, 1), q(2, 1), q(1, 2))).unwrap();
        assert_eq!((p.beta, p.alpha), (q(2, 1), q(0, 1)));
        assert_eq!(p.certificate.cascade_depth, 0);

        let p = conjugate_beta_transformation(&f(q(1, 2), q(8, 5), q(2, 5))).unwrap();
        assert_eq!(p.certificate.beta_source, BetaSource::LapGrowth);
        assert!(p.certificate.kneading_match_length >= 40, "{:?}", p.certificate);
        let t = p.realization().unwrap();
        let kt = kneading(&t, 40);
        let kf = kneading(&f(q(1, 2), q(8, 5), q(2, 5)), 40);
        assert_eq!(kt.k_plus, kf.k_plus);
        assert_eq!(kt.k_minus, kf.k_minus);
    }
}
