//! Seeded random parameters for the verification suites.
//!
//! All draws come from ChaCha8 seeded with a `u64`, so a seed fixes every
//! instance. Parameters are exact rationals on a grid `k / den`. A proposal
//! that misses a hypothesis is rejected, never adjusted, and the rejections
//! are counted.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::map::LorenzMap;
use crate::scalar::{q, Exact, Scalar};

/// Grid denominator used by the suites.
pub const DEFAULT_DENOMINATOR: i64 = 1000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn floor_times(x: &Exact, den: i64) -> i64 {
    let t = x * Exact::from_integer(BigInt::from(den));
    let (fl, _) = t.numer().div_mod_floor(t.denom());
    i64::try_from(fl).expect("grid bound fits in i64")
}

/// Uniform point of the grid `k / den` in `[lo, hi]`, or in `(lo, hi)` when
/// `open`. `None` if no grid point fits.
pub fn grid_point<R: Rng + ?Sized>(rng: &mut R, lo: &Exact, hi: &Exact, den: i64, open: bool) -> Option<Exact> {
    let mut kmin = floor_times(lo, den);
    if open || q(kmin, den) < *lo {
        kmin += 1;
    }
    let mut kmax = floor_times(hi, den);
    if open && q(kmax, den) == *hi {
        kmax -= 1;
    }
    (kmin <= kmax).then(|| q(rng.gen_range(kmin..=kmax), den))
}

/// Largest slope drawn by [`propose_map`].
pub const MAX_SLOPE: i64 = 4;

/// Any valid map: `c` in `(0, 1)`, then slopes up to the self-map bounds
/// `ac <= 1`, `b(1 - c) <= 1` and [`MAX_SLOPE`]. Membership in `L` is left
/// to the caller.
pub fn propose_map<R: Rng + ?Sized>(rng: &mut R, den: i64) -> Option<LorenzMap<Exact>> {
    let one = Exact::one();
    let cap = q(MAX_SLOPE, 1);
    let c = grid_point(rng, &Exact::zero(), &one, den, true)?;
    let amax = Exact::min_of(one.clone() / c.clone(), cap.clone());
    let bmax = Exact::min_of(one.clone() / (one - c.clone()), cap);
    let a = grid_point(rng, &Exact::zero(), &amax, den, false).filter(|a| !Scalar::is_zero(a))?;
    let b = grid_point(rng, &Exact::zero(), &bmax, den, false).filter(|b| !Scalar::is_zero(b))?;
    LorenzMap::new(a, b, c).ok()
}

/// A map with `a < 1 < b` (`left_contracting`) or `a > 1 > b`.
pub fn propose_mixed_slopes<R: Rng + ?Sized>(
    rng: &mut R,
    den: i64,
    left_contracting: bool,
) -> Option<LorenzMap<Exact>> {
    let one = Exact::one();
    let cap = q(MAX_SLOPE, 1);
    let c = grid_point(rng, &Exact::zero(), &one, den, true)?;
    let amax = Exact::min_of(one.clone() / c.clone(), cap.clone());
    let bmax = Exact::min_of(one.clone() / (one.clone() - c.clone()), cap);
    let (a, b) = if left_contracting {
        (
            grid_point(rng, &Exact::zero(), &one, den, true)?,
            grid_point(rng, &one, &bmax, den, true)?,
        )
    } else {
        (
            grid_point(rng, &one, &amax, den, true)?,
            grid_point(rng, &Exact::zero(), &one, den, true)?,
        )
    };
    LorenzMap::new(a, b, c).ok()
}

/// Proposal aimed at `b a^i < 1`, where `i` is the first time the orbit of
/// `0` passes `c`. With `S_k = 1 + a + ... + a^k` this needs
/// `S_{i-2} / a^{i-1} < b < a^{-i}` and `c` in `(S_{i-2}/S_{i-1}, S_{i-1}/S_i)`.
/// The slope bound [`MAX_SLOPE`] does not apply here. Mirrored by
/// `x -> 1 - x` when `mirrored`.
pub fn propose_control<R: Rng + ?Sized>(rng: &mut R, den: i64, mirrored: bool) -> Option<LorenzMap<Exact>> {
    let one = Exact::one();
    let a = grid_point(rng, &q(1, 10), &q(62, 100), den, true)?;
    let i: u32 = rng.gen_range(3..=6);
    let partial = |k: u32| (0..=k).fold(Exact::zero(), |acc, m| acc + a.powu(m));
    let b_lo = partial(i - 2) / a.powu(i - 1);
    let b_hi = one.clone() / a.powu(i);
    let b = grid_point(rng, &b_lo, &b_hi, den, true)?;
    let c_lo = partial(i - 2) / partial(i - 1);
    let c_hi = partial(i - 1) / partial(i);
    let c = grid_point(rng, &c_lo, &c_hi, den * 100, true)?;
    let f = LorenzMap::new(a, b, c).ok()?;
    Some(if mirrored { f.mirror() } else { f })
}

/// Proposal with `a < 1 < b` whose orbit of `0` stays left of `c` for at
/// least two steps, which is `f(0) < c_*`. The crossing time `i` is drawn
/// from `3..=6` and `c` from the window that produces it (see
/// [`propose_control`]); `b` is free up to the self-map bound.
pub fn propose_late_crossing<R: Rng + ?Sized>(rng: &mut R, den: i64, mirrored: bool) -> Option<LorenzMap<Exact>> {
    let one = Exact::one();
    let a = grid_point(rng, &Exact::zero(), &one, den, true)?;
    let i: u32 = rng.gen_range(3..=6);
    let partial = |k: u32| (0..=k).fold(Exact::zero(), |acc, m| acc + a.powu(m));
    let c = grid_point(
        rng,
        &(partial(i - 2) / partial(i - 1)),
        &(partial(i - 1) / partial(i)),
        den * 100,
        true,
    )?;
    let bmax = one.clone() / (one.clone() - c.clone());
    let b = grid_point(rng, &one, &bmax, den, true)?;
    let f = LorenzMap::new(a, b, c).ok()?;
    Some(if mirrored { f.mirror() } else { f })
}

/// Slopes near the renormalizable range `ab <= 2`, `c` central.
pub fn propose_near_renormalizable<R: Rng + ?Sized>(rng: &mut R, den: i64) -> Option<LorenzMap<Exact>> {
    let a = grid_point(rng, &q(7, 10), &q(17, 10), den, true)?;
    let b = grid_point(rng, &q(7, 10), &q(17, 10), den, true)?;
    let c = grid_point(rng, &q(3, 10), &q(7, 10), den, true)?;
    LorenzMap::new(a, b, c).ok()
}

/// `T_{β,α}` with `β` in `(1, 2]` and `α` in `[0, 2 - β]`, the range where
/// it maps `[0, 1]` into itself.
pub fn propose_beta_transformation<R: Rng + ?Sized>(rng: &mut R, den: i64) -> Option<(Exact, Exact)> {
    let beta = grid_point(rng, &Exact::one(), &q(2, 1), den, false).filter(|b| *b > Exact::one())?;
    let alpha = grid_point(rng, &Exact::zero(), &(q(2, 1) - beta.clone()), den, false)?;
    Some((beta, alpha))
}

/// Constant slope `s` in `(1, 2]` with `c` in the self-map range
/// `[1 - 1/s, 1/s]`.
pub fn propose_constant_slope<R: Rng + ?Sized>(rng: &mut R, den: i64) -> Option<LorenzMap<Exact>> {
    let s = grid_point(rng, &Exact::one(), &q(2, 1), den, false).filter(|s| *s > Exact::one())?;
    let one = Exact::one();
    let c = grid_point(
        rng,
        &(one.clone() - one.clone() / s.clone()),
        &(one / s.clone()),
        den,
        false,
    )?;
    LorenzMap::new(s.clone(), s, c).ok()
}

/// Accepted draws and the number of proposals it took.
#[derive(Debug, Clone)]
pub struct Draws<T> {
    pub accepted: Vec<T>,
    pub proposals: usize,
}

impl<T> Draws<T> {
    pub fn rejected(&self) -> usize {
        self.proposals - self.accepted.len()
    }

    pub fn rejection_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.rejected() as f64 / self.proposals as f64
        }
    }
}

/// Proposes until `wanted` candidates pass `certify` or `max_proposals` is
/// spent. An empty proposal counts as a rejection.
pub fn certified<T, R, P, C>(
    rng: &mut R,
    wanted: usize,
    max_proposals: usize,
    mut propose: P,
    mut certify: C,
) -> Draws<T>
where
    R: Rng + ?Sized,
    P: FnMut(&mut R) -> Option<T>,
    C: FnMut(&T) -> bool,
{
    let mut draws = Draws {
        accepted: Vec::with_capacity(wanted),
        proposals: 0,
    };
    while draws.accepted.len() < wanted && draws.proposals < max_proposals {
        draws.proposals += 1;
        if let Some(x) = propose(rng) {
            if certify(&x) {
                draws.accepted.push(x);
            }
        }
    }
    draws
}
