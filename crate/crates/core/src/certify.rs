//! Explicit sum-of-squares certificates and their exact verification.
//!
//! A certificate claims `target = sum_i w_i * base_i^2`, either as an identity
//! of polynomials in `n+1` variables or, when `modulo_p1` is set, modulo the
//! ideal `(p1)`. The `p1` multiplier is never written down: the difference
//! must vanish under [`reduce_mod_p1`], which holds iff `p1` divides it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones;
use crate::error::{Error, Result};
use crate::exactpoly::{
    reduce_mod_p1, InvariantQuartic, Monomial, PointPowers, PowerSumQuartic, SparsePoly,
};
use crate::rational::{self, Rational};

/// Number of random points on `p1 = 0` checked by [`verify`].
pub const SPOT_CHECKS: usize = 100;
const SPOT_SEED: u64 = 0x005e_ed0f_5057;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    pub weight: Rational,
    pub base: SparsePoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: u32,
    pub target: PowerSumQuartic,
    pub squares: Vec<Square>,
    pub modulo_p1: bool,
}

impl Certificate {
    pub fn nvars(&self) -> usize {
        self.n as usize + 1
    }

    /// Same squares and target, both multiplied by `c >= 0`.
    pub fn scaled(&self, c: &Rational) -> Certificate {
        Certificate {
            n: self.n,
            target: self.target.scale(c),
            squares: self
                .squares
                .iter()
                .filter(|_| !c.is_zero())
                .map(|s| Square {
                    weight: &s.weight * c,
                    base: s.base.clone(),
                })
                .collect(),
            modulo_p1: self.modulo_p1,
        }
    }

    /// `sum_i w_i * base_i^2`.
    /// Runs of equal weight are summed first, in machine integers when the
    /// bases allow it.
    pub fn sum_of_squares(&self) -> SparsePoly {
        let nvars = self.nvars();
        let mut acc = SparsePoly::zero(nvars);
        for run in self.squares.chunk_by(|x, y| x.weight == y.weight) {
            let bases = run.iter().map(|s| &s.base);
            let sum = integral_sum_of_squares(nvars, bases.clone()).unwrap_or_else(|| {
                let mut sum = SparsePoly::zero(nvars);
                for b in bases {
                    sum += &b.square();
                }
                sum
            });
            acc += &sum.scale(&run[0].weight);
        }
        acc
    }

    /// Serializes to the certificate file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n = {}", self.n).unwrap();
        writeln!(out, "modulo_p1 = {}", self.modulo_p1).unwrap();
        let t = self.target.to_array().map(|c| c.to_string()).join(" ");
        writeln!(out, "target = {t}").unwrap();
        for s in &self.squares {
            writeln!(out, "{} ; {}", s.weight, s.base).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Certificate> {
        let mut lines = text.lines();
        let mut header = |key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(" = "))
                .map(str::to_owned)
                .ok_or_else(|| Error::Parse(format!("expected `{key} = ...`, got {line:?}")))
        };
        let n: u32 = header("n")?
            .parse()
            .map_err(|_| Error::Parse("bad n".into()))?;
        let modulo_p1 = match header("modulo_p1")?.as_str() {
            "true" => true,
            "false" => false,
            other => return Err(Error::Parse(format!("bad modulo_p1 {other:?}"))),
        };
        let coeffs = header("target")?
            .split(' ')
            .map(rational::parse)
            .collect::<Result<Vec<_>>>()?;
        let coeffs: [Rational; 5] = coeffs
            .try_into()
            .map_err(|_| Error::Parse("target needs 5 coefficients".into()))?;
        let nvars = n as usize + 1;
        let squares = lines
            .map(|line| {
                let (w, base) = line
                    .split_once(" ; ")
                    .ok_or_else(|| Error::Parse(format!("bad square line {line:?}")))?;
                Ok(Square {
                    weight: rational::parse(w)?,
                    base: SparsePoly::parse(nvars, base)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate {
            n,
            target: PowerSumQuartic::from_array(coeffs),
            squares,
            modulo_p1,
        })
    }
}

fn integral_sum_of_squares<'a>(
    nvars: usize,
    bases: impl Iterator<Item = &'a SparsePoly>,
) -> Option<SparsePoly> {
    let mut acc: BTreeMap<Monomial, i128> = BTreeMap::new();
    for b in bases {
        let terms = b.integral_terms()?;
        for (ma, ca) in &terms {
            for (mb, cb) in &terms {
                let slot = acc.entry(ma.mul(mb)).or_insert(0);
                *slot = slot.checked_add(ca.checked_mul(*cb)?)?;
            }
        }
    }
    Some(SparsePoly::from_terms(
        nvars,
        acc.into_iter()
            .map(|(m, c)| (m.exponents().to_vec(), Rational::from_integer(c.into()))),
    ))
}

fn var(nvars: usize, i: usize) -> SparsePoly {
    SparsePoly::var(nvars, i)
}

fn square(weight: Rational, base: SparsePoly) -> Square {
    Square { weight, base }
}

fn target(a: Rational, b: Rational) -> PowerSumQuartic {
    InvariantQuartic::new(a, b).to_power_sum()
}

/// `p2^2 - p4 = 2 * sum_{i<j} (x_i x_j)^2`, exact in `R[x]`.
pub fn cert_p22_minus_p4(n: u32) -> Certificate {
    assert!(n >= 1, "need n >= 1");
    let nvars = n as usize + 1;
    let mut squares = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            squares.push(square(rational::int(2), &var(nvars, i) * &var(nvars, j)));
        }
    }
    Certificate {
        n,
        target: target(rational::one(), -rational::one()),
        squares,
        modulo_p1: false,
    }
}

/// `S1 = p4 - p2^2/(n+1) = (1/(n+1)) * sum_{i<j} (x_i^2 - x_j^2)^2`, exact.
pub fn cert_s1(n: u32) -> Certificate {
    assert!(n >= 2, "need n >= 2");
    let nvars = n as usize + 1;
    let w = rational::from_u32(n + 1).recip();
    let mut squares = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            let base = &var(nvars, i).square() - &var(nvars, j).square();
            squares.push(square(w.clone(), base));
        }
    }
    Certificate {
        n,
        target: target(-w, rational::one()),
        squares,
        modulo_p1: false,
    }
}

/// `S2 = 2 * sum ((x_i - x_j)(x_k - x_l))^2` modulo `(p1)`, the sum running
/// over the three pairings of every 4-subset of the variables.
pub fn cert_s2(n: u32) -> Result<Certificate> {
    let gens = cones::sos_generators(n)?;
    let nvars = n as usize + 1;
    // (x_p - x_q)(x_r - x_s) = x_p x_r - x_p x_s - x_q x_r + x_q x_s
    let product = |(p, q): (usize, usize), (r, s): (usize, usize)| {
        let mono = |u: usize, v: usize| {
            let mut e = vec![0u32; nvars];
            e[u] += 1;
            e[v] += 1;
            e
        };
        SparsePoly::from_terms(
            nvars,
            [
                (mono(p, r), rational::one()),
                (mono(p, s), -rational::one()),
                (mono(q, r), -rational::one()),
                (mono(q, s), rational::one()),
            ],
        )
    };
    let mut squares = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            for k in j + 1..nvars {
                for l in k + 1..nvars {
                    for ((p, q), (r, s)) in [((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))] {
                        squares.push(square(rational::int(2), product((p, q), (r, s))));
                    }
                }
            }
        }
    }
    Ok(Certificate {
        n,
        target: gens.s2.to_power_sum(),
        squares,
        modulo_p1: true,
    })
}

/// Certificate for any member of the sos cone: `a'` copies of the `S1`
/// certificate plus `b'` copies of the `S2` one.
pub fn cert_for(n: u32, f: &InvariantQuartic) -> Result<Certificate> {
    let (a, b) = cones::sos_coordinates_raw(n, f)?;
    if a.is_negative() || b.is_negative() {
        return Err(Error::NotInSosCone {
            a: Box::new(a),
            b: Box::new(b),
        });
    }
    let mut squares = Vec::new();
    if !a.is_zero() {
        squares.extend(cert_s1(n).scaled(&a).squares);
    }
    if !b.is_zero() {
        squares.extend(cert_s2(n)?.scaled(&b).squares);
    }
    Ok(Certificate {
        n,
        target: f.to_power_sum(),
        squares,
        modulo_p1: true,
    })
}

/// Certificate in `R[x]` (no reduction) for a globally nonnegative form,
/// written as `mu3 * p2^2 + mu1 (p2^2 - p4) + mu2 ((n+1) p4 - p2^2)`.
///
/// `mu3` takes as much `p2^2` as keeps the remainder globally nonnegative; the
/// remainder then sits on one boundary ray of that cone.
pub fn cert_global(n: u32, f: &InvariantQuartic) -> Result<Certificate> {
    if !cones::global_psd(n, f)? {
        return Err(Error::NotGloballyPsd);
    }
    let nvars = n as usize + 1;
    let n1 = rational::from_u32(n + 1);
    let slack_one = &f.a + &f.b;
    let slack_low = &f.a + &f.b / &n1;
    let mu3 = slack_one.clone().min(slack_low);
    let rest = InvariantQuartic::new(&f.a - &mu3, f.b.clone());
    // rest = mu1 (1, -1) + mu2 (-1, n+1)
    let mu2 = (&rest.a + &rest.b) / rational::from_u32(n);
    let mu1 = &rest.a + &mu2;

    let mut squares = Vec::new();
    if !mu3.is_zero() {
        squares.push(square(mu3, SparsePoly::power_sum(nvars, 2)));
    }
    if !mu1.is_zero() {
        squares.extend(cert_p22_minus_p4(n).scaled(&mu1).squares);
    }
    if !mu2.is_zero() {
        squares.extend(cert_s1(n).scaled(&(&mu2 * &n1)).squares);
    }
    Ok(Certificate {
        n,
        target: f.to_power_sum(),
        squares,
        modulo_p1: false,
    })
}

/// Exact check of the certificate identity, followed by spot evaluations at
/// seeded random rational points with `p1 = 0`. Never panics on malformed
/// input; any inconsistency yields `false`.
pub fn verify(c: &Certificate) -> bool {
    verify_detailed(c).is_ok()
}

/// Like [`verify`] but reports which check failed.
pub fn verify_detailed(c: &Certificate) -> std::result::Result<(), String> {
    let nvars = c.nvars();
    if nvars < 2 {
        return Err("certificate needs at least two variables".into());
    }
    for (k, s) in c.squares.iter().enumerate() {
        if s.weight.is_negative() {
            return Err(format!("square {k} has negative weight {}", s.weight));
        }
        if s.base.nvars() != nvars || !s.base.is_homogeneous(2) {
            return Err(format!(
                "square {k} is not a quadratic form in {nvars} variables"
            ));
        }
    }
    let target = c.target.expand(nvars);
    let diff = &target - &c.sum_of_squares();
    let exact = if c.modulo_p1 {
        reduce_mod_p1(&diff).is_zero()
    } else {
        diff.is_zero()
    };
    if !exact {
        return Err("target differs from the weighted sum of squares".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_SEED);
    for _ in 0..SPOT_CHECKS {
        let point = random_integer_hyperplane_point(&mut rng, nvars);
        if !spot_check(c, &point) {
            return Err(format!("spot evaluation mismatch at {point:?}"));
        }
    }
    Ok(())
}

/// Compares both sides at one integer point of `p1 = 0`. Both sides are
/// homogeneous of degree 4, so integer points stand in for rational ones.
/// Consecutive squares sharing a weight are summed before weighting.
fn spot_check(c: &Certificate, point: &[i64]) -> bool {
    let p = |k: u32| -> i128 { point.iter().map(|&x| i128::from(x).pow(k)).sum() };
    let (p1, p2, p3, p4) = (p(1), p(2), p(3), p(4));
    let lhs: Rational = c
        .target
        .to_array()
        .iter()
        .zip([p1.pow(4), p2 * p1 * p1, p3 * p1, p2 * p2, p4])
        .map(|(coef, v)| coef * Rational::from_integer(v.into()))
        .sum();
    let mut powers = None;
    let mut rhs = rational::zero();
    let mut run: Option<(&Rational, i128)> = None;
    for s in &c.squares {
        let fast = s
            .base
            .evaluate_integral(point)
            .and_then(|v| v.checked_mul(v));
        match (fast, run.as_mut()) {
            (Some(sq), Some((w, acc))) if *w == &s.weight => match acc.checked_add(sq) {
                Some(sum) => *acc = sum,
                None => {
                    rhs += *w * Rational::from_integer((*acc).into());
                    *acc = sq;
                }
            },
            (Some(sq), _) => {
                if let Some((w, acc)) = run.take() {
                    rhs += w * Rational::from_integer(acc.into());
                }
                run = Some((&s.weight, sq));
            }
            (None, _) => {
                let powers = powers.get_or_insert_with(|| {
                    let q: Vec<Rational> = point.iter().map(|&v| rational::int(v)).collect();
                    PointPowers::new(&q, 2)
                });
                let v = s.base.evaluate_powers(powers);
                rhs += &s.weight * &v * &v;
            }
        }
    }
    if let Some((w, acc)) = run {
        rhs += w * Rational::from_integer(acc.into());
    }
    lhs == rhs
}

/// Random integers in the first `nvars - 1` coordinates, last one chosen so
/// the coordinates sum to zero.
pub fn random_integer_hyperplane_point<R: Rng>(rng: &mut R, nvars: usize) -> Vec<i64> {
    let mut point: Vec<i64> = (0..nvars - 1).map(|_| rng.random_range(-30..=30)).collect();
    point.push(-point.iter().sum::<i64>());
    point
}

/// Small random rationals in the first `nvars - 1` coordinates, last one
/// chosen so the coordinates sum to zero.
pub fn random_hyperplane_point<R: Rng>(rng: &mut R, nvars: usize) -> Vec<Rational> {
    let mut point: Vec<Rational> = (0..nvars - 1)
        .map(|_| rational::frac(rng.random_range(-12..=12), rng.random_range(1..=9)))
        .collect();
    let last = -point.iter().sum::<Rational>();
    point.push(last);
    point
}
