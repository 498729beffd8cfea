//! Extrema of `p4` on `{p1 = 0, p2 = 1}` in `n+1` variables.
//!
//! Extrema of this degree-4 symmetric program are attained at points with at
//! most two distinct coordinates. With `l` coordinates equal to `n+1-l` and
//! the remaining `n+1-l` equal to `-l` the point is integral, sums to zero,
//! and `p4 / p2^2` is the normalized value
//!
//! ```text
//! phi(n, l) = ((n+1)^2 - 3l(n+1) + 3l^2) / ((n+1)(n+1-l) l)
//! ```
//!
//! so every optimizer and witness stays exact.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Integer point on `U_n` with two distinct coordinate values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoValuePoint {
    n: u32,
    l: u32,
    coordinates: Vec<i64>,
}

impl TwoValuePoint {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn coordinates(&self) -> &[i64] {
        &self.coordinates
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.coordinates.iter().map(|&c| rational::int(c)).collect()
    }

    /// `l (n+1-l) (n+1)`.
    pub fn p2(&self) -> BigInt {
        self.coordinates
            .iter()
            .map(|&c| BigInt::from(c).pow(2))
            .sum()
    }

    pub fn p4(&self) -> BigInt {
        self.coordinates
            .iter()
            .map(|&c| BigInt::from(c).pow(4))
            .sum()
    }

    /// The point scaled onto the unit sphere.
    pub fn to_unit_f64(&self) -> Vec<f64> {
        let norm = (self
            .coordinates
            .iter()
            .map(|&c| (c * c) as f64)
            .sum::<f64>())
        .sqrt();
        self.coordinates.iter().map(|&c| c as f64 / norm).collect()
    }
}

/// Value and full argument set of an extremum over integer `l` in `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremumResult {
    pub value: Rational,
    pub argmins: BTreeSet<u32>,
}

fn check_l(n: u32, l: u32) -> Result<()> {
    if l == 0 || l > n {
        return Err(Error::OutOfRange { n, l });
    }
    Ok(())
}

pub fn phi(n: u32, l: u32) -> Result<Rational> {
    check_l(n, l)?;
    let big_n = BigInt::from(n) + 1;
    let l = BigInt::from(l);
    let num = &big_n * &big_n - 3 * &l * &big_n + 3 * &l * &l;
    let den = &big_n * (&big_n - &l) * &l;
    Ok(Rational::new(num, den))
}

pub fn two_value_point(n: u32, l: u32) -> Result<TwoValuePoint> {
    check_l(n, l)?;
    let hi = i64::from(n) + 1 - i64::from(l);
    let lo = -i64::from(l);
    let coordinates = (0..=n).map(|i| if i < l { hi } else { lo }).collect();
    Ok(TwoValuePoint { n, l, coordinates })
}

fn extremum(n: u32, better: impl Fn(&Rational, &Rational) -> bool) -> ExtremumResult {
    assert!(n >= 1, "need n >= 1");
    let mut best: Option<ExtremumResult> = None;
    for l in 1..=n {
        let v = phi(n, l).expect("l in range");
        match &mut best {
            Some(b) if v == b.value => {
                b.argmins.insert(l);
            }
            Some(b) if !better(&v, &b.value) => {}
            _ => {
                best = Some(ExtremumResult {
                    value: v,
                    argmins: BTreeSet::from([l]),
                })
            }
        }
    }
    best.expect("n >= 1")
}

/// Minimum of `phi(n, .)` by exhaustive enumeration.
pub fn p4_min_int(n: u32) -> ExtremumResult {
    extremum(n, |v, best| v < best)
}

/// Maximum of `phi(n, .)` by exhaustive enumeration.
pub fn p4_max_int(n: u32) -> ExtremumResult {
    extremum(n, |v, best| v > best)
}

/// Closed-form minimum: `1/(n+1)` for odd `n`, otherwise
/// `(4 + 2n + n^2) / (2n + 3n^2 + n^3)`.
pub fn alpha(n: u32) -> Rational {
    assert!(n >= 2, "need n >= 2");
    let n_big = BigInt::from(n);
    if n % 2 == 1 {
        Rational::new(BigInt::from(1), n_big + 1)
    } else {
        let num = 4 + 2 * &n_big + &n_big * &n_big;
        let den = 2 * &n_big + 3 * &n_big * &n_big + n_big.pow(3);
        Rational::new(num, den)
    }
}

/// Closed-form maximum `(1 - n + n^2) / (n + n^2)`.
pub fn beta(n: u32) -> Rational {
    assert!(n >= 2, "need n >= 2");
    let n_big = BigInt::from(n);
    Rational::new(1 - &n_big + &n_big * &n_big, &n_big + &n_big * &n_big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn phi_examples() {
        assert_eq!(phi(4, 2).unwrap(), frac(7, 30));
        assert_eq!(phi(3, 1).unwrap(), frac(7, 12));
        assert_eq!(phi(5, 2).unwrap(), phi(5, 4).unwrap());
        assert_eq!(phi(4, 0), Err(Error::OutOfRange { n: 4, l: 0 }));
        assert_eq!(phi(4, 5), Err(Error::OutOfRange { n: 4, l: 5 }));
    }

    #[test]
    fn two_value_examples() {
        let p = two_value_point(4, 2).unwrap();
        assert_eq!(p.coordinates(), &[3, 3, -2, -2, -2]);
        assert_eq!(p.p2(), BigInt::from(30));
        assert_eq!(p.p4(), BigInt::from(210));
        assert_eq!(Rational::new(p.p4(), p.p2() * p.p2()), frac(7, 30));
        let p = two_value_point(3, 1).unwrap();
        assert_eq!(p.coordinates(), &[3, -1, -1, -1]);
        assert_eq!((p.p2(), p.p4()), (BigInt::from(12), BigInt::from(84)));
        assert!(two_value_point(3, 4).is_err());
    }

    #[test]
    fn extrema_examples() {
        let m = p4_min_int(5);
        assert_eq!(m.value, frac(1, 6));
        assert_eq!(m.argmins, BTreeSet::from([3]));
        let m = p4_min_int(4);
        assert_eq!(m.value, frac(7, 30));
        assert_eq!(m.argmins, BTreeSet::from([2, 3]));
        let m = p4_max_int(4);
        assert_eq!(m.value, frac(13, 20));
        assert_eq!(m.argmins, BTreeSet::from([1, 4]));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(alpha(5), frac(1, 6));
        assert_eq!(alpha(6), frac(13, 84));
        assert_eq!(p4_min_int(6).value, frac(13, 84));
        assert_eq!(beta(4), frac(13, 20));
        assert_eq!(alpha(3), frac(1, 4));
        assert_eq!(beta(3), frac(7, 12));
        assert_eq!(beta(5), frac(7, 10));
        assert_eq!(alpha(4) * int(30), int(7));
    }

    #[test]
    fn unit_point_on_sphere() {
        let u = two_value_point(6, 2).unwrap().to_unit_f64();
        assert!(u.iter().sum::<f64>().abs() < 1e-12);
        assert!((u.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
