//! Randomized verification suites.
//!
//! Each suite draws hypothesis-certified instances from a seeded generator,
//! runs a validator on every instance and tallies the outcome. Instances are
//! checked in parallel and merged back in draw order, so a seed fixes the
//! whole report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conjugacy::{beta_transformation, entropy_beta, fit_alpha};
use crate::error::{Error, Result};
use crate::inequalities::{
    expansion_hypothesis, expansion_scan, first_exit_decompose, left_exit_set, locate_left_rung, locate_right_rung,
    m_lemma_hypothesis, right_exit_set, verify_baj_control, verify_length_lemma, verify_m_lemmas,
    verify_product_inequalities, MLemma, DEFAULT_LADDER_CAP, DEFAULT_VISIT_CAP,
};
use crate::map::{LorenzMap, OneSidedPoint, Word};
use crate::periodic::{brute_force_minimal_period, minimal_period, slope_product, Kappa};
use crate::renorm::{
    check_periodic_renormalizable, classify_dichotomy, first_return_orbit, in_l2, is_trivially_renormalizable, reduce,
    reduce_with_cap, trivial_renormalize, Dichotomy, PeriodicVerdict,
};
use crate::sampling::{
    certified, grid_point, propose_beta_transformation, propose_constant_slope, propose_control, propose_late_crossing,
    propose_map, propose_mixed_slopes, propose_near_renormalizable, rng_from_seed, Draws, DEFAULT_DENOMINATOR,
};
use crate::scalar::{q, Exact, Scalar};

/// Proposals allowed per requested sample before a suite gives up.
pub const PROPOSALS_PER_SAMPLE: usize = 2000;

/// Largest period searched by the expansion suite.
pub const EXPANSION_MAX_PERIOD: usize = 16;

/// Largest period enumerated by the brute-force period oracle.
pub const BRUTE_FORCE_MAX_PERIOD: usize = 12;

/// Orbit length compared by the trivial-orbit suite.
pub const TRIVIAL_ORBIT_STEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Expansion,
    Lemmas,
    Decomposition,
    TrivialOrbit,
    PeriodOracle,
    Consistency,
    Conjugacy,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Expansion,
        Suite::Lemmas,
        Suite::Decomposition,
        Suite::TrivialOrbit,
        Suite::PeriodOracle,
        Suite::Consistency,
        Suite::Conjugacy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Expansion => "expansion",
            Suite::Lemmas => "lemmas",
            Suite::Decomposition => "decomposition",
            Suite::TrivialOrbit => "trivial-orbit",
            Suite::PeriodOracle => "period-oracle",
            Suite::Consistency => "consistency",
            Suite::Conjugacy => "conjugacy",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// How often each verdict of the dichotomy came up on the reduced maps of
/// the instances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DichotomyTally {
    pub d_equals_o: usize,
    pub d_equals_i: usize,
    /// Reduction or classification failed, for example on a critical orbit.
    pub unclassified: usize,
}

impl DichotomyTally {
    pub fn add(&mut self, other: &DichotomyTally) {
        self.d_equals_o += other.d_equals_o;
        self.d_equals_i += other.d_equals_i;
        self.unclassified += other.unclassified;
    }

    pub fn total(&self) -> usize {
        self.d_equals_o + self.d_equals_i + self.unclassified
    }

    /// Reduces `f` and records the verdict on the reduced map.
    pub fn record(&mut self, f: &LorenzMap<Exact>) {
        match dichotomy_of(f) {
            Ok(Dichotomy::DEqualsO) => self.d_equals_o += 1,
            Ok(Dichotomy::DEqualsI) => self.d_equals_i += 1,
            Err(_) => self.unclassified += 1,
        }
    }
}

/// Period cap used when reducing a map before classifying it. Slopes just
/// above 1 give minimal periods in the hundreds.
pub const DICHOTOMY_PERIOD_CAP: usize = 1024;

/// The dichotomy verdict of the reduced map of `f`.
pub fn dichotomy_of<S: Scalar>(f: &LorenzMap<S>) -> Result<Dichotomy> {
    let (g, _) = reduce_with_cap(f, DICHOTOMY_PERIOD_CAP)?;
    classify_dichotomy(&g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub requested: usize,
    pub accepted: usize,
    pub proposals: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest margin over the passing checks, where the check has one.
    pub min_margin: Option<f64>,
    /// Named counts beyond pass and fail.
    pub counters: BTreeMap<String, usize>,
    /// The first few failures, described.
    pub failures: Vec<String>,
    pub dichotomy: DichotomyTally,
}

/// Failures kept verbatim in a report.
pub const MAX_FAILURES_SHOWN: usize = 5;

impl SuiteReport {
    pub fn is_ok(&self) -> bool {
        self.failed == 0 && self.accepted == self.requested
    }

    pub fn rejection_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            (self.proposals - self.accepted) as f64 / self.proposals as f64
        }
    }

    pub fn counter(&self, key: &str) -> usize {
        self.counters.get(key).copied().unwrap_or(0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} passed, {} failed, {} proposals ({:.1}% rejected)",
            self.name,
            self.passed,
            self.accepted,
            self.failed,
            self.proposals,
            100.0 * self.rejection_rate()
        )?;
        if self.accepted < self.requested {
            write!(f, ", only {} of {} instances found", self.accepted, self.requested)?;
        }
        if let Some(m) = self.min_margin {
            write!(f, ", min margin {m:.6e}")?;
        }
        for (k, v) in &self.counters {
            write!(f, ", {k} {v}")?;
        }
        for msg in &self.failures {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

/// Result of one instance.
#[derive(Debug, Clone, Default)]
struct Outcome {
    pass: bool,
    margin: Option<f64>,
    counters: Vec<&'static str>,
    failure: Option<String>,
    dichotomy: DichotomyTally,
}

impl Outcome {
    fn verdict(pass: bool, failure: impl FnOnce() -> String) -> Self {
        Outcome {
            pass,
            failure: (!pass).then(failure),
            ..Default::default()
        }
    }

    fn error(e: Error) -> Self {
        Outcome {
            pass: false,
            failure: Some(e.to_string()),
            ..Default::default()
        }
    }

    fn count(mut self, key: &'static str, yes: bool) -> Self {
        if yes {
            self.counters.push(key);
        }
        self
    }

    fn margin(mut self, m: Option<f64>) -> Self {
        self.margin = m;
        self
    }

    fn touching(mut self, f: &LorenzMap<Exact>) -> Self {
        self.dichotomy.record(f);
        self
    }
}

fn run_checks<T, C>(name: &str, requested: usize, draws: Draws<T>, check: C) -> SuiteReport
where
    T: Sync,
    C: Fn(&T) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = draws.accepted.par_iter().map(&check).collect();
    let mut report = SuiteReport {
        name: name.to_string(),
        requested,
        accepted: draws.accepted.len(),
        proposals: draws.proposals,
        passed: 0,
        failed: 0,
        min_margin: None,
        counters: BTreeMap::new(),
        failures: Vec::new(),
        dichotomy: DichotomyTally::default(),
    };
    for o in outcomes {
        if o.pass {
            report.passed += 1;
            if let Some(m) = o.margin {
                report.min_margin = Some(report.min_margin.map_or(m, |x: f64| x.min(m)));
            }
        } else {
            report.failed += 1;
        }
        if let Some(msg) = o.failure {
            if report.failures.len() < MAX_FAILURES_SHOWN {
                report.failures.push(msg);
            }
        }
        for k in o.counters {
            *report.counters.entry(k.to_string()).or_insert(0) += 1;
        }
        report.dichotomy.add(&o.dichotomy);
    }
    report
}

fn budget(samples: usize) -> usize {
    samples.saturating_mul(PROPOSALS_PER_SAMPLE).max(PROPOSALS_PER_SAMPLE)
}

/// Runs one suite; `lemmas` yields one report per lemma.
pub fn run_suite(suite: Suite, samples: usize, seed: u64) -> Vec<SuiteReport> {
    match suite {
        Suite::Expansion => vec![expansion_suite(samples, seed)],
        Suite::Lemmas => lemma_suites(samples, seed),
        Suite::Decomposition => vec![decomposition_suite(samples, seed)],
        Suite::TrivialOrbit => vec![trivial_orbit_suite(samples, seed)],
        Suite::PeriodOracle => vec![period_oracle_suite(samples, seed)],
        Suite::Consistency => vec![consistency_suite(samples, seed)],
        Suite::Conjugacy => conjugacy_suites(samples, seed),
    }
}

fn hypothesis(f: &LorenzMap<Exact>, test: impl FnOnce(&LorenzMap<Exact>) -> Result<bool>) -> bool {
    f.require_l().is_ok() && test(f).unwrap_or(false)
}

/// Maps in `L2` whose interval `[f(0), f(1)]` is not inside `[P_L, P_R]`;
/// every nice pair up to [`EXPANSION_MAX_PERIOD`] must have
/// `(M_p - 1)(M_q - 1) > 1`.
pub fn expansion_suite(samples: usize, seed: u64) -> SuiteReport {
    let mut rng = rng_from_seed(seed);
    let draws = certified(
        &mut rng,
        samples,
        budget(samples),
        |r| propose_map(r, DEFAULT_DENOMINATOR),
        |f| hypothesis(f, |f| Ok(in_l2(f) && expansion_hypothesis(f)?)),
    );
    run_checks("expansion", samples, draws, |f| {
        match expansion_scan(f, EXPANSION_MAX_PERIOD) {
            Ok(rep) => {
                let only_period_two = rep.violations.iter().all(|(p, q, _)| (*p, *q) == (2, 2));
                let pass = rep.violations.is_empty();
                let ab = f.a().clone() * f.b().clone();
                Outcome::verdict(pass, || {
                    let (p, q, e) = &rep.violations[0];
                    format!("{f}: nice pair with periods ({p}, {q}) has (M_p - 1)(M_q - 1) = {e}, ab = {ab}")
                })
                .margin(rep.min_expansion.map(|e| e.to_f64() - 1.0))
                .count("violating maps with only the period-2 pair", !pass && only_period_two)
                .count("violating maps with a longer pair", !pass && !only_period_two)
                .count("maps with ab <= 2", ab <= q(2, 1))
                .touching(f)
            }
            Err(e) => Outcome::error(e).touching(f),
        }
    })
}

/// Renormalizable maps: after trivial reduction, the pair of the minimal
/// renormalization has equal multipliers `M = ab` and `(M - 1)^2 <= 1`,
/// and the expansion hypothesis fails.
pub fn consistency_suite(samples: usize, seed: u64) -> SuiteReport {
    let mut rng = rng_from_seed(seed);
    let draws = certified(
        &mut rng,
        samples,
        budget(samples),
        |r| propose_near_renormalizable(r, DEFAULT_DENOMINATOR),
        |f| {
            hypothesis(f, |f| {
                let (g, _) = reduce(f)?;
                Ok(in_l2(&g) && check_periodic_renormalizable(&g)?.verdict == PeriodicVerdict::RenormalizablePeriodic)
            })
        },
    );
    let lr: Word = "LR".parse().expect("word");
    let rl: Word = "RL".parse().expect("word");
    run_checks("consistency", samples, draws, |f| {
        let check = || -> Result<Outcome> {
            let (g, _) = reduce(f)?;
            let mp = slope_product(&g, &lr);
            let mq = slope_product(&g, &rl);
            let one = Exact::one();
            let prod = (mp.clone() - one.clone()) * (mq.clone() - one.clone());
            let outside = expansion_hypothesis(&g)?;
            let pass = prod <= one && mp == mq && !outside;
            Ok(Outcome::verdict(pass, || {
                format!("{f}: M_p = {mp}, M_q = {mq}, (M_p - 1)(M_q - 1) = {prod}, expansion hypothesis {outside}")
            })
            .margin(Some(1.0 - prod.to_f64())))
        };
        check().unwrap_or_else(Outcome::error).touching(f)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lemma {
    Length,
    Product,
    MImage,
    Baj,
    Control,
    MFirstRung,
}

impl Lemma {
    const ALL: [Lemma; 6] = [
        Lemma::Length,
        Lemma::Product,
        Lemma::MImage,
        Lemma::Baj,
        Lemma::Control,
        Lemma::MFirstRung,
    ];

    fn name(self) -> &'static str {
        match self {
            Lemma::Length => "lemma length",
            Lemma::Product => "lemma product",
            Lemma::MImage => "lemma M_A from f(0)",
            Lemma::Baj => "lemma crossing bound",
            Lemma::Control => "lemma crossing control",
            Lemma::MFirstRung => "lemma M_A from c_1",
        }
    }
}

/// Random points per instance for the `M_A` lemmas, on top of the fixed
/// ladder points.
pub const M_LEMMA_RANDOM_POINTS: usize = 4;

fn m_lemma_kind(f: &LorenzMap<Exact>) -> Option<MLemma> {
    m_lemma_hypothesis(f).ok().flatten().map(|(l, _, _)| l)
}

fn propose_for<R: Rng + ?Sized>(lemma: Lemma, r: &mut R) -> Option<(LorenzMap<Exact>, u64)> {
    let f = match lemma {
        Lemma::Length | Lemma::Product | Lemma::Baj => propose_map(r, DEFAULT_DENOMINATOR),
        Lemma::MImage => {
            let left = r.gen();
            propose_mixed_slopes(r, DEFAULT_DENOMINATOR, left)
        }
        Lemma::MFirstRung => {
            let mirrored = r.gen();
            propose_late_crossing(r, DEFAULT_DENOMINATOR, mirrored)
        }
        Lemma::Control => {
            let mirrored = r.gen();
            propose_control(r, DEFAULT_DENOMINATOR, mirrored)
        }
    };
    let seed = r.gen();
    f.map(|f| (f, seed))
}

fn lemma_hypothesis(lemma: Lemma, f: &LorenzMap<Exact>) -> bool {
    hypothesis(f, |f| {
        if !in_l2(f) {
            return Ok(false);
        }
        Ok(match lemma {
            Lemma::Length => true,
            Lemma::Product => {
                locate_left_rung(f, DEFAULT_LADDER_CAP)?.is_some()
                    || locate_right_rung(f, DEFAULT_LADDER_CAP)?.is_some()
            }
            Lemma::MImage => matches!(m_lemma_kind(f), Some(MLemma::FromImageOfZero | MLemma::FromImageOfOne)),
            Lemma::MFirstRung => matches!(
                m_lemma_kind(f),
                Some(MLemma::FromFirstRung | MLemma::FromFirstRungMirrored)
            ),
            Lemma::Baj => {
                let rep = verify_baj_control(f, DEFAULT_LADDER_CAP)?;
                rep.baj_left.is_some() || rep.baj_right.is_some()
            }
            Lemma::Control => {
                let rep = verify_baj_control(f, DEFAULT_LADDER_CAP)?;
                rep.control_left.is_some() || rep.control_right.is_some()
            }
        })
    })
}

fn lemma_check(lemma: Lemma, f: &LorenzMap<Exact>, seed: u64) -> Result<Outcome> {
    Ok(match lemma {
        Lemma::Length => {
            let rep = verify_length_lemma(f, 10)?;
            Outcome::verdict(true, String::new).margin(rep.min_margin().map(|m| m.to_f64()))
        }
        Lemma::Product => {
            let rep = verify_product_inequalities(f)?;
            let m = rep
                .left
                .iter()
                .chain(rep.right.iter())
                .flat_map(|c| [c.strong_margin.to_f64(), c.weak_margin.to_f64()])
                .fold(f64::INFINITY, f64::min);
            Outcome::verdict(true, String::new)
                .margin(Some(m))
                .count("clause on f(0)", rep.left.is_some())
                .count("clause on f(1)", rep.right.is_some())
        }
        Lemma::MImage | Lemma::MFirstRung => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rep = verify_m_lemmas(f, &mut rng, M_LEMMA_RANDOM_POINTS, DEFAULT_VISIT_CAP)?;
            let mut o = Outcome::verdict(true, String::new)
                .margin(rep.min_multiplier.map(|m| m.to_f64() - 1.0))
                .count(
                    "mirrored",
                    matches!(rep.lemma, MLemma::FromImageOfOne | MLemma::FromFirstRungMirrored),
                );
            for _ in 0..rep.no_exit {
                o = o.count("points without exit within cap", true);
            }
            for _ in 0..rep.points_checked {
                o = o.count("points checked", true);
            }
            o
        }
        Lemma::Baj => {
            let rep = verify_baj_control(f, DEFAULT_LADDER_CAP)?;
            let checks: Vec<_> = rep.baj_left.iter().chain(rep.baj_right.iter()).collect();
            let pass = checks.iter().all(|c| c.holds);
            let m = checks
                .iter()
                .map(|c| (c.lhs.clone() - c.rhs.clone()).to_f64())
                .fold(f64::INFINITY, f64::min);
            Outcome::verdict(pass, || format!("{f}: crossing bound fails: {checks:?}")).margin(Some(m))
        }
        Lemma::Control => {
            let rep = verify_baj_control(f, DEFAULT_LADDER_CAP)?;
            let checks: Vec<_> = rep.control_left.iter().chain(rep.control_right.iter()).collect();
            let pass = checks.iter().all(|c| c.holds);
            let m = checks
                .iter()
                .map(|c| {
                    let lo = (c.point.clone() - c.window.0.clone()).to_f64();
                    let hi = (c.window.1.clone() - c.point.clone()).to_f64();
                    lo.min(hi)
                })
                .fold(f64::INFINITY, f64::min);
            Outcome::verdict(pass, || {
                let missed: Vec<String> = checks
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| {
                        format!(
                            "product {:.6} < 1 but point {:.6} outside ({:.6}, {:.6})",
                            c.product.to_f64(),
                            c.point.to_f64(),
                            c.window.0.to_f64(),
                            c.window.1.to_f64()
                        )
                    })
                    .collect();
                format!("{f}: control window missed: {}", missed.join("; "))
            })
            .margin(Some(m))
            .count("mirrored", rep.control_right.is_some())
        }
    })
}

/// One report per lemma, each on `samples` certified instances.
pub fn lemma_suites(samples: usize, seed: u64) -> Vec<SuiteReport> {
    Lemma::ALL
        .iter()
        .enumerate()
        .map(|(k, &lemma)| {
            let mut rng = rng_from_seed(seed.wrapping_add(k as u64));
            let draws = certified(
                &mut rng,
                samples,
                budget(samples),
                |r| propose_for(lemma, r),
                |(f, _)| lemma_hypothesis(lemma, f),
            );
            let r = run_checks(lemma.name(), samples, draws, |(f, s)| {
                let steep = f.a().clone() * f.b().clone() > q(2, 1);
                let o = lemma_check(lemma, f, *s).unwrap_or_else(Outcome::error);
                let failed = !o.pass;
                o.count("violations with ab > 2", failed && steep).touching(f)
            });
            r
        })
        .collect()
}

/// A map, a starting point, a length and which exit set to use.
pub type DecompositionInstance = (LorenzMap<Exact>, Exact, usize, bool);

fn derivative_product(f: &LorenzMap<Exact>, x: &Exact, n: usize) -> Result<Exact> {
    let orbit = f.orbit(&OneSidedPoint::exact(x.clone()), n)?;
    orbit[..n].iter().try_fold(Exact::one(), |acc, y| {
        Ok(acc * f.derivative(&OneSidedPoint::exact(y.clone()))?)
    })
}

/// `(f, x, n)` with `n <= 30`: the exit factors times the tail equal the
/// derivative of `f^n` at `x` computed step by step.
pub fn decomposition_suite(samples: usize, seed: u64) -> SuiteReport {
    let mut rng = rng_from_seed(seed);
    let draws: Draws<DecompositionInstance> = certified(
        &mut rng,
        samples,
        budget(samples),
        |r| {
            let f = propose_map(r, DEFAULT_DENOMINATOR)?;
            let x = grid_point(r, &Exact::zero(), &Exact::one(), DEFAULT_DENOMINATOR, false)?;
            Some((f, x, r.gen_range(1..=30), r.gen()))
        },
        |(f, x, n, _)| {
            hypothesis(f, |f| {
                Ok(in_l2(f) && f.orbit(&OneSidedPoint::exact(x.clone()), *n).is_ok())
            })
        },
    );
    run_checks("decomposition", samples, draws, |(f, x, n, left)| {
        let check = || -> Result<Outcome> {
            let set = if *left { left_exit_set(f)? } else { right_exit_set(f)? };
            let d = first_exit_decompose(f, &set, &OneSidedPoint::exact(x.clone()), *n)?;
            let lhs = d.product().value(f);
            let rhs = derivative_product(f, x, *n)?;
            let w_one = d.tail.is_one() == (d.exit_times.last() == Some(n));
            let pass = lhs == rhs && w_one;
            Ok(Outcome::verdict(pass, || {
                format!("{f}, x = {x}, n = {n}: factors give {lhs}, derivative {rhs}")
            })
            .count("instances with an exit", d.s_count > 0))
        };
        check().unwrap_or_else(Outcome::error).touching(f)
    })
}

/// Trivially renormalizable maps. The orbit of `x` under the reduced map `g`
/// is compared with the `f`-orbit read at its returns to the reduced domain,
/// and the minimal period must drop at every trivial step. The literal
/// comparison with the `f`-orbit points that lie in the reduced domain is
/// counted separately.
pub fn trivial_orbit_suite(samples: usize, seed: u64) -> SuiteReport {
    let mut rng = rng_from_seed(seed);
    let steps = TRIVIAL_ORBIT_STEPS;
    let draws = certified(
        &mut rng,
        samples,
        budget(samples),
        |r| {
            let f = propose_map(r, DEFAULT_DENOMINATOR)?;
            let t: u64 = r.gen_range(0..=1 << 20);
            Some((f, t))
        },
        |(f, t)| {
            hypothesis(f, |f| {
                if minimal_period(f, 64)?.kappa.finite().is_none_or(|k| k < 2)
                    || is_trivially_renormalizable(f)?.is_none()
                {
                    return Ok(false);
                }
                let step = trivial_renormalize(f)?;
                let x = start_point(&step.interval, *t);
                Ok(f.orbit(&OneSidedPoint::exact(x), 2 * steps).is_ok())
            })
        },
    );
    run_checks("trivial-orbit", samples, draws, |(f, t)| {
        let check = || -> Result<Outcome> {
            let step = trivial_renormalize(f)?;
            let (lo, hi) = step.interval.clone();
            let x = start_point(&step.interval, *t);
            let og = step.restricted.orbit(&OneSidedPoint::exact(x.clone()), steps)?;
            let of = f.orbit(&OneSidedPoint::exact(x.clone()), 2 * steps)?;
            let corrected = first_return_orbit(f, step.kind, &of, steps + 1) == og;
            let windowed: Vec<Exact> = of
                .iter()
                .filter(|y| lo <= **y && **y <= hi)
                .take(steps + 1)
                .cloned()
                .collect();
            let literal = windowed == og;
            let (_, chain) = reduce(f)?;
            let mut decreasing = !chain.is_empty();
            for s in &chain {
                let before = minimal_period(&s.before, 64)?.kappa;
                let after = minimal_period(&s.after, 64)?.kappa;
                decreasing &= match (before, after) {
                    (Kappa::Finite(b), Kappa::Finite(a)) => a < b,
                    _ => false,
                };
            }
            let pass = corrected && decreasing;
            Ok(Outcome::verdict(pass, || {
                format!("{f}, x = {x}: first-return orbit {corrected}, period decreasing {decreasing}")
            })
            .count("first-return identity", corrected)
            .count("window intersection identity", literal)
            .count("period decreasing", decreasing))
        };
        check().unwrap_or_else(Outcome::error).touching(f)
    })
}

fn start_point((lo, hi): &(Exact, Exact), t: u64) -> Exact {
    lo.clone() + (hi.clone() - lo.clone()) * q(t as i64, 1 << 20)
}

/// Minimal period from the preimage search against brute-force enumeration
/// of admissible words up to [`BRUTE_FORCE_MAX_PERIOD`].
pub fn period_oracle_suite(samples: usize, seed: u64) -> SuiteReport {
    let mut rng = rng_from_seed(seed);
    let draws = certified(
        &mut rng,
        samples,
        budget(samples),
        |r| propose_map(r, DEFAULT_DENOMINATOR),
        |f| f.require_l().is_ok(),
    );
    run_checks("period-oracle", samples, draws, |f| {
        let check = || -> Result<Outcome> {
            let fast = minimal_period(f, 64)?.kappa;
            let brute = brute_force_minimal_period(f, BRUTE_FORCE_MAX_PERIOD);
            let pass = match (fast, brute) {
                (Kappa::Finite(k), Some(b)) => k == b,
                (Kappa::Finite(k), None) => k > BRUTE_FORCE_MAX_PERIOD,
                (Kappa::ExceedsCap, None) => true,
                (Kappa::ExceedsCap, Some(_)) => false,
            };
            Ok(
                Outcome::verdict(pass, || format!("{f}: preimage search {fast:?}, brute force {brute:?}"))
                    .count("both above the brute-force range", brute.is_none()),
            )
        };
        check().unwrap_or_else(Outcome::error).touching(f)
    })
}

/// Largest lap index used by the conjugacy suite.
pub const CONJUGACY_LAP_DEPTH: usize = 25;

/// Kneading match depth used by the conjugacy suite.
pub const CONJUGACY_MATCH_DEPTH: usize = 40;

/// Recovery of `(β, α)` from maps that are already β-transformations, and
/// of `s` from constant-slope maps.
pub fn conjugacy_suites(samples: usize, seed: u64) -> Vec<SuiteReport> {
    let mut rng = rng_from_seed(seed);
    let draws = certified(
        &mut rng,
        samples,
        budget(samples),
        |r| propose_beta_transformation(r, DEFAULT_DENOMINATOR),
        |(b, a)| beta_transformation(b, a).is_ok(),
    );
    let beta_report = run_checks("conjugacy beta-transformations", samples, draws, |(beta, alpha)| {
        let check = || -> Result<Outcome> {
            let t = beta_transformation(beta, alpha)?;
            let est = entropy_beta(&t, CONJUGACY_LAP_DEPTH, 1e-12)?;
            let beta_err = (est.beta - beta.to_f64()).abs();
            let fit = fit_alpha(&t, beta, CONJUGACY_MATCH_DEPTH, &q(1, 100_000))?;
            let alpha_err = (fit.alpha.clone() - alpha.clone()).abs().to_f64();
            let beta_ok = beta_err <= 1e-3;
            let alpha_ok = alpha_err <= 1e-4 && fit.bisections <= 40;
            Ok(Outcome::verdict(beta_ok && alpha_ok, || {
                format!(
                    "T_({beta}, {alpha}): beta error {beta_err:.2e} from {} lap numbers, alpha error {alpha_err:.2e} after {} bisections",
                    est.n_used, fit.bisections
                )
            })
            .margin(Some(1e-3 - beta_err))
            .count("beta within 1e-3", beta_ok)
            .count("alpha within 1e-4", alpha_ok)
            .touching(&t))
        };
        check().unwrap_or_else(Outcome::error)
    });
    let mut rng = rng_from_seed(seed.wrapping_add(1));
    let draws = certified(
        &mut rng,
        samples,
        budget(samples),
        |r| propose_constant_slope(r, DEFAULT_DENOMINATOR),
        |_| true,
    );
    let slope_report = run_checks("conjugacy constant slope", samples, draws, |f| {
        let check = || -> Result<Outcome> {
            let est = entropy_beta(f, CONJUGACY_LAP_DEPTH, 1e-12)?;
            let err = (est.beta - f.a().to_f64()).abs();
            Ok(
                Outcome::verdict(err <= 1e-3, || format!("{f}: slope estimate off by {err:.2e}"))
                    .margin(Some(1e-3 - err))
                    .touching(f),
            )
        };
        check().unwrap_or_else(Outcome::error)
    });
    vec![beta_report, slope_report]
}
