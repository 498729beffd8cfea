//! Reynolds operator of the symmetric group acting by coordinate
//! permutation, computed per monomial orbit instead of as a literal group sum.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactpoly::{to_power_sum, Monomial, PowerSumQuartic, SparsePoly};
use crate::rational::{self, Rational};

/// Orbit of a monomial under coordinate permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitStats {
    /// Exponents in descending order, zeros included.
    pub sorted_exponents: Vec<u32>,
    /// `nvars! / prod(multiplicity!)`.
    pub orbit_size: BigUint,
}

impl OrbitStats {
    pub fn of(mono: &Monomial) -> Self {
        let mut sorted = mono.exponents().to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let orbit_size = multinomial(&sorted);
        OrbitStats {
            sorted_exponents: sorted,
            orbit_size,
        }
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn multinomial(sorted: &[u32]) -> BigUint {
    let mut denom = BigUint::one();
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    if !sorted.is_empty() {
        denom *= factorial(run);
    }
    factorial(sorted.len()) / denom
}

/// Coordinates of `reynolds(f)` on the monomial symmetric polynomials
/// `m_lambda`, keyed by the descending exponent vector `lambda`.
pub fn symmetric_coordinates(f: &SparsePoly) -> BTreeMap<Vec<u32>, Rational> {
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (m, c) in f.terms() {
        let orbit = OrbitStats::of(m);
        let share = c / Rational::from_integer(orbit.orbit_size.into());
        *out.entry(orbit.sorted_exponents)
            .or_insert_with(rational::zero) += share;
    }
    out.retain(|_, v| !num_traits::Zero::is_zero(v));
    out
}

/// `m_lambda`: the sum of all distinct rearrangements of `exponents`.
pub fn monomial_symmetric(exponents: &[u32]) -> SparsePoly {
    let nvars = exponents.len();
    let mut e = exponents.to_vec();
    e.sort_unstable();
    let mut out = SparsePoly::zero(nvars);
    loop {
        out.add_term(Monomial::new(e.clone()), rational::one());
        if !next_permutation(&mut e) {
            break;
        }
    }
    out
}

/// Lexicographic successor; repeated values yield each distinct
/// arrangement exactly once.
fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Average of `f` over all permutations of its variables.
pub fn reynolds(f: &SparsePoly) -> SparsePoly {
    let mut out = SparsePoly::zero(f.nvars());
    for (lambda, c) in symmetric_coordinates(f) {
        out += &monomial_symmetric(&lambda).scale(&c);
    }
    out
}

/// The three products whose symmetrizations span the invariant sums of
/// squares modulo `p1`: `p2^2`, `(x1^2 - x2^2)^2` and
/// `(x1 - x2)^2 (x3 - x4)^2`, in `n+1` variables.
pub fn lemma_sym_sources(n: u32) -> Result<[SparsePoly; 3]> {
    if n < 3 {
        return Err(Error::UnsupportedN(n));
    }
    let nvars = n as usize + 1;
    let x = |i: usize| SparsePoly::var(nvars, i);
    let p2 = SparsePoly::power_sum(nvars, 2);
    let diff_sq = &x(0).square() - &x(1).square();
    let cross = &(&x(0) - &x(1)).square() * &(&x(2) - &x(3)).square();
    Ok([p2.square(), diff_sq.square(), cross])
}

/// Closed forms of the symmetrized sources, in the power-sum basis:
///
/// * `R(p2^2) = p2^2`
/// * `R((x1^2-x2^2)^2) = (2/n) p4 - 2/((n+1)n) p2^2`
/// * `R((x1-x2)^2 (x3-x4)^2) = 4 (p1^4 + 3p2^2 - 4p3p1 + N^2(p2^2 - p4)
///   + N(-2p2p1^2 - 3p2^2 + 4p3p1 + p4)) / (N n (n-1)(n-2))` with `N = n+1`.
pub fn lemma_sym_closed_form(n: u32) -> Result<[PowerSumQuartic; 3]> {
    if n < 3 {
        return Err(Error::UnsupportedN(n));
    }
    let nn = rational::from_u32(n);
    let big_n = &nn + rational::one();
    let zero = rational::zero;

    let first = PowerSumQuartic::new(zero(), zero(), zero(), rational::one(), zero());
    let second = PowerSumQuartic::new(
        zero(),
        zero(),
        zero(),
        -rational::int(2) / (&big_n * &nn),
        rational::int(2) / &nn,
    );
    let denom = &big_n * &nn * (&nn - rational::one()) * (&nn - rational::int(2));
    let four = rational::int(4) / denom;
    let n_sq = &big_n * &big_n;
    let third = PowerSumQuartic::new(
        four.clone(),
        &four * (-rational::int(2) * &big_n),
        &four * (rational::int(4) * &big_n - rational::int(4)),
        &four * (rational::int(3) + &n_sq - rational::int(3) * &big_n),
        &four * (&big_n - &n_sq),
    );
    Ok([first, second, third])
}

/// Symmetrizes the three sources by orbit counting and compares their
/// power-sum coordinates against the closed forms.
pub fn verify_lemma_sym(n: u32) -> Result<bool> {
    let sources = lemma_sym_sources(n)?;
    let closed = lemma_sym_closed_form(n)?;
    for (src, want) in sources.iter().zip(closed.iter()) {
        if to_power_sum(&reynolds(src))? != *want {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn orbit_sizes() {
        let o = OrbitStats::of(&Monomial::new(vec![0, 3, 0, 1]));
        assert_eq!(o.sorted_exponents, vec![3, 1, 0, 0]);
        assert_eq!(o.orbit_size, BigUint::from(12u32));
        let o = OrbitStats::of(&Monomial::new(vec![1, 1, 1, 1, 0]));
        assert_eq!(o.orbit_size, BigUint::from(5u32));
        let o = OrbitStats::of(&Monomial::new(vec![2, 2]));
        assert_eq!(o.orbit_size, BigUint::from(1u32));
    }

    #[test]
    fn monomial_symmetric_counts() {
        assert_eq!(monomial_symmetric(&[1, 1, 0, 0, 0]).num_terms(), 10);
        assert_eq!(monomial_symmetric(&[3, 1, 0]).num_terms(), 6);
        assert_eq!(monomial_symmetric(&[2, 2, 2]).num_terms(), 1);
    }

    #[test]
    fn single_orbit() {
        let f = SparsePoly::var(3, 0).pow(4);
        assert_eq!(reynolds(&f), SparsePoly::power_sum(3, 4).scale(&frac(1, 3)));
    }

    #[test]
    fn p2_squared_is_fixed() {
        let f = SparsePoly::power_sum(5, 2).square();
        assert_eq!(reynolds(&f), f);
    }

    #[test]
    fn difference_of_squares_at_n4() {
        let [_, src, _] = lemma_sym_sources(4).unwrap();
        let want = PowerSumQuartic::new(int(0), int(0), int(0), frac(-1, 10), frac(1, 2));
        assert_eq!(to_power_sum(&reynolds(&src)).unwrap(), want);
        assert_eq!(reynolds(&src), want.expand(5));
    }

    #[test]
    fn closed_form_values_at_n4() {
        let [_, second, third] = lemma_sym_closed_form(4).unwrap();
        assert_eq!(
            second,
            PowerSumQuartic::new(int(0), int(0), int(0), frac(-1, 10), frac(1, 2))
        );
        let inv = third.invariant_part();
        assert_eq!((inv.a, inv.b), (frac(13, 30), frac(-2, 3)));
    }

    #[test]
    fn closed_forms_hold_small_n() {
        for n in 3..=6 {
            assert!(verify_lemma_sym(n).unwrap(), "n = {n}");
        }
        assert_eq!(verify_lemma_sym(2), Err(Error::UnsupportedN(2)));
    }

    #[test]
    fn third_form_at_n3_matches_polynomially() {
        let [_, _, src] = lemma_sym_sources(3).unwrap();
        let [_, _, third] = lemma_sym_closed_form(3).unwrap();
        assert_eq!(reynolds(&src), third.expand(4));
    }

    #[test]
    fn idempotent_and_symmetric() {
        let f = SparsePoly::parse(4, "3 * x1^3*x2 + -1/2 * x2^2*x4^2 + 5 * x1*x3").unwrap();
        let r = reynolds(&f);
        assert!(r.is_symmetric());
        assert_eq!(reynolds(&r), r);
    }
}
