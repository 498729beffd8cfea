//! Independent cross-checks: floating-point sampling on `U_n`, the literal
//! group-sum Reynolds operator, and the two-value system solved in floats.
//! Nothing here decides membership; it only corroborates the exact path.

use itertools::Itertools;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{InvariantQuartic, SparsePoly};
use crate::rational::{self, Rational};

/// Samples per stream. Stream `k` draws from ChaCha8 seeded with `seed` on
/// stream number `k`, so results do not depend on the thread count.
pub const STREAM_LEN: usize = 4096;

/// Largest variable count accepted by [`brute_reynolds`].
pub const MAX_BRUTE_NVARS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub n: u32,
    pub a: String,
    pub b: String,
    pub samples: usize,
    pub seed: u64,
    pub min_value: f64,
    pub argmin_point: Vec<f64>,
}

/// Uniform point on the unit sphere of `U_n`: a Gaussian vector projected
/// onto the zero-sum hyperplane and normalized.
fn sphere_point(rng: &mut ChaCha8Rng, nvars: usize, buf: &mut Vec<f64>) {
    loop {
        buf.clear();
        buf.extend((0..nvars).map(|_| -> f64 { StandardNormal.sample(rng) }));
        let mean = buf.iter().sum::<f64>() / nvars as f64;
        buf.iter_mut().for_each(|v| *v -= mean);
        let norm = buf.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-6 {
            buf.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

fn form_value(a: f64, b: f64, x: &[f64]) -> f64 {
    let (p2, p4) = x.iter().fold((0.0, 0.0), |(s2, s4), v| {
        let sq = v * v;
        (s2 + sq, s4 + sq * sq)
    });
    a * p2 * p2 + b * p4
}

/// Minimum of `a*p2^2 + b*p4` over `samples` random unit vectors in `U_n`.
pub fn sample_min(n: u32, f: &InvariantQuartic, samples: usize, seed: u64) -> SampleReport {
    assert!(n >= 1 && samples >= 1, "need n >= 1 and samples >= 1");
    let nvars = n as usize + 1;
    let a = f.a.to_f64().unwrap_or(f64::NAN);
    let b = f.b.to_f64().unwrap_or(f64::NAN);
    let streams = samples.div_ceil(STREAM_LEN);
    let best = (0..streams)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = STREAM_LEN.min(samples - k * STREAM_LEN);
            let mut buf = Vec::with_capacity(nvars);
            let mut best = (f64::INFINITY, Vec::new());
            for _ in 0..count {
                sphere_point(&mut rng, nvars, &mut buf);
                let v = form_value(a, b, &buf);
                if v < best.0 {
                    best = (v, buf.clone());
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|acc, cur| if cur.0 < acc.0 { cur } else { acc })
        .expect("at least one stream");
    SampleReport {
        n,
        a: f.a.to_string(),
        b: f.b.to_string(),
        samples,
        seed,
        min_value: best.0,
        argmin_point: best.1,
    }
}

/// `(1/|G|) * sum_sigma sigma.f` over all `nvars!` permutations.
pub fn brute_reynolds(f: &SparsePoly) -> Result<SparsePoly> {
    let nvars = f.nvars();
    if nvars > MAX_BRUTE_NVARS {
        return Err(Error::TooManyVariables(nvars));
    }
    let mut sum = SparsePoly::zero(nvars);
    let mut count: i64 = 0;
    for perm in (0..nvars).permutations(nvars) {
        sum += &f.permute(&perm);
        count += 1;
    }
    Ok(sum.scale(&rational::frac(1, count.max(1))))
}

/// Solves `l t + (n+1-l) s = 0`, `l t^2 + (n+1-l) s^2 = 1` with `t > 0`.
pub fn numeric_two_value(n: u32, l: u32) -> Result<(f64, f64)> {
    if l == 0 || l > n {
        return Err(Error::OutOfRange { n, l });
    }
    let (nf, lf) = (f64::from(n), f64::from(l));
    let rest = nf + 1.0 - lf;
    let t = (rest / (lf * (nf + 1.0))).sqrt();
    let s = -lf * t / rest;
    Ok((s, t))
}

/// `p4` at the normalized two-value point, in floats.
pub fn numeric_p4(n: u32, l: u32) -> Result<f64> {
    let (s, t) = numeric_two_value(n, l)?;
    let (nf, lf) = (f64::from(n), f64::from(l));
    Ok(lf * t.powi(4) + (nf + 1.0 - lf) * s.powi(4))
}

/// Converts an exact rational to the nearest `f64` (oracle comparisons only).
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
