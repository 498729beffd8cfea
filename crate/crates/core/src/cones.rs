//! The two planar cones of invariant quartics: `P` (nonnegative on `U_n`)
//! and `Sigma` (sums of squares modulo `p1`), in coordinates `(a, b)` for
//! `a*p2^2 + b*p4`.
//!
//! On `U_n` intersected with `p2 = 1` the power sum `p4` sweeps exactly
//! `[alpha, beta]`, so `(a, b)` is nonnegative iff `a + b*t >= 0` at both
//! ends. `Sigma` is generated by
//!
//! ```text
//! S1 = p4 - p2^2/(n+1)               = (-1/(n+1), 1)
//! S2 = (1 - n + n^2) p2^2 - n(n+1) p4 = (1 - n + n^2, -n(n+1))
//! ```

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::InvariantQuartic;
use crate::halfdeg::{self, TwoValuePoint};
use crate::rational::{self, Rational};

/// Position of a form relative to a closed cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Outside,
    Boundary,
    Interior,
}

impl Position {
    pub fn as_str(self) -> &'static str {
        match self {
            Position::Outside => "outside",
            Position::Boundary => "boundary",
            Position::Interior => "interior",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdRange {
    pub n: u32,
    pub alpha: Rational,
    pub beta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalRays {
    /// `-p2^2 + p4/alpha`.
    pub f: InvariantQuartic,
    /// `p2^2 - p4/beta`.
    pub g: InvariantQuartic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosGenerators {
    pub s1: InvariantQuartic,
    pub s2: InvariantQuartic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub psd: Position,
    pub sos: Position,
    /// Present iff `psd == Outside`.
    pub witness: Option<TwoValuePoint>,
    /// Present iff `sos != Outside`.
    pub sos_coords: Option<(Rational, Rational)>,
}

fn check_n(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::UnsupportedN(n));
    }
    Ok(())
}

pub fn psd_range(n: u32) -> Result<PsdRange> {
    check_n(n)?;
    Ok(PsdRange {
        n,
        alpha: halfdeg::alpha(n),
        beta: halfdeg::beta(n),
    })
}

pub fn extremal_rays(n: u32) -> Result<ExtremalRays> {
    let r = psd_range(n)?;
    Ok(ExtremalRays {
        f: InvariantQuartic::new(-rational::one(), r.alpha.recip()),
        g: InvariantQuartic::new(rational::one(), -r.beta.recip()),
    })
}

/// Position in `P` plus, when outside, a two-value point where the form is
/// strictly negative.
pub fn psd_position(n: u32, f: &InvariantQuartic) -> Result<(Position, Option<TwoValuePoint>)> {
    let r = psd_range(n)?;
    let at_alpha = &f.a + &f.b * &r.alpha;
    let at_beta = &f.a + &f.b * &r.beta;
    let low = at_alpha.min(at_beta);
    if low.is_positive() {
        return Ok((Position::Interior, None));
    }
    if low.is_zero() {
        return Ok((Position::Boundary, None));
    }
    let mut best: Option<(Rational, u32)> = None;
    for l in 1..=n {
        let v = &f.a + &f.b * halfdeg::phi(n, l)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, l));
        }
    }
    let (value, l) = best.expect("n >= 3");
    debug_assert!(value.is_negative());
    Ok((Position::Outside, Some(halfdeg::two_value_point(n, l)?)))
}

pub fn sos_generators(n: u32) -> Result<SosGenerators> {
    check_n(n)?;
    let nn = rational::from_u32(n);
    let n1 = &nn + rational::one();
    Ok(SosGenerators {
        s1: InvariantQuartic::new(-n1.recip(), rational::one()),
        s2: InvariantQuartic::new(rational::one() - &nn + &nn * &nn, -(&nn * &n1)),
    })
}

/// The unique `(a', b')` with `f = a' S1 + b' S2`, signs unchecked. The
/// system has determinant `-(n-1)^2`.
pub fn sos_coordinates_raw(n: u32, f: &InvariantQuartic) -> Result<(Rational, Rational)> {
    check_n(n)?;
    let nn = rational::from_u32(n);
    let n1 = &nn + rational::one();
    let nm1 = &nn - rational::one();
    let b_coord = (&f.a + &f.b / &n1) / (&nm1 * &nm1);
    let a_coord = &f.b + &nn * &n1 * &b_coord;
    Ok((a_coord, b_coord))
}

/// `Some((a', b'))` iff `f` lies in the sos cone.
pub fn sos_coordinates(n: u32, f: &InvariantQuartic) -> Result<Option<(Rational, Rational)>> {
    let (a, b) = sos_coordinates_raw(n, f)?;
    Ok((!a.is_negative() && !b.is_negative()).then_some((a, b)))
}

pub fn classify(n: u32, f: &InvariantQuartic) -> Result<Membership> {
    let (psd, witness) = psd_position(n, f)?;
    let coords = sos_coordinates(n, f)?;
    let sos = match &coords {
        None => Position::Outside,
        Some((a, b)) if a.is_zero() || b.is_zero() => Position::Boundary,
        Some(_) => Position::Interior,
    };
    Ok(Membership {
        psd,
        sos,
        witness,
        sos_coords: coords,
    })
}

/// Whether both extremal rays of `P` are sums of squares, i.e. `P = Sigma`.
pub fn cones_equal(n: u32) -> Result<bool> {
    let rays = extremal_rays(n)?;
    Ok(sos_coordinates(n, &rays.f)?.is_some() && sos_coordinates(n, &rays.g)?.is_some())
}

/// For even `n`, the form halfway between the `F_n` and `S1` rays (with
/// `b = 1`): nonnegative but not a sum of squares. `None` for odd `n`.
pub fn gap_witness(n: u32) -> Result<Option<InvariantQuartic>> {
    let r = psd_range(n)?;
    if n % 2 == 1 {
        return Ok(None);
    }
    let s1_ratio = rational::from_u32(n + 1).recip();
    let a = -(&r.alpha + s1_ratio) / rational::int(2);
    Ok(Some(InvariantQuartic::new(a, rational::one())))
}

/// Nonnegativity on all of `R^{n+1}`: on `p2 = 1` the power sum `p4` ranges
/// over `[1/(n+1), 1]`.
pub fn global_psd(n: u32, f: &InvariantQuartic) -> Result<bool> {
    check_n(n)?;
    let at_one = &f.a + &f.b;
    let at_low = &f.a + &f.b / rational::from_u32(n + 1);
    Ok(!at_one.is_negative() && !at_low.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn q(a: Rational, b: Rational) -> InvariantQuartic {
        InvariantQuartic::new(a, b)
    }

    #[test]
    fn range_and_rays() {
        let r = psd_range(4).unwrap();
        assert_eq!((r.alpha, r.beta), (frac(7, 30), frac(13, 20)));
        let rays = extremal_rays(4).unwrap();
        assert_eq!(rays.f, q(int(-1), frac(30, 7)));
        assert_eq!(rays.g, q(int(1), frac(-20, 13)));
        assert_eq!(extremal_rays(5).unwrap().f, q(int(-1), int(6)));
        assert_eq!(extremal_rays(3).unwrap().g, q(int(1), frac(-12, 7)));
        assert_eq!(psd_range(2), Err(Error::UnsupportedN(2)));
    }

    #[test]
    fn psd_positions() {
        let f4 = extremal_rays(4).unwrap().f;
        assert_eq!(psd_position(4, &f4).unwrap(), (Position::Boundary, None));
        for n in 3..8 {
            assert_eq!(
                psd_position(n, &q(int(1), int(0))).unwrap().0,
                Position::Interior
            );
        }
        let (pos, w) = psd_position(4, &q(int(-1), int(4))).unwrap();
        assert_eq!(pos, Position::Outside);
        let w = w.unwrap();
        assert_eq!(w.coordinates(), &[3, 3, -2, -2, -2]);
        // -p2^2 + 4 p4 at the witness
        let value = -(w.p2() * w.p2()) + 4 * w.p4();
        assert_eq!(value, (-60).into());
    }

    #[test]
    fn generators() {
        let g = sos_generators(4).unwrap();
        assert_eq!(g.s1, q(frac(-1, 5), int(1)));
        assert_eq!(g.s2, q(int(13), int(-20)));
        let g = sos_generators(5).unwrap();
        assert_eq!(g.s1, q(frac(-1, 6), int(1)));
        assert_eq!(g.s2, q(int(21), int(-30)));
        for n in 3..40u32 {
            let g = sos_generators(n).unwrap();
            let k = rational::from_u32(n * (n + 1));
            let lhs = &g.s1.scale(&k) + &g.s2;
            let m = rational::from_u32(n - 1);
            assert_eq!(lhs, q(&m * &m, int(0)));
        }
    }

    #[test]
    fn coordinates_of_rays() {
        let f4 = extremal_rays(4).unwrap().f;
        assert_eq!(
            sos_coordinates_raw(4, &f4).unwrap(),
            (frac(250, 63), frac(-1, 63))
        );
        assert_eq!(sos_coordinates(4, &f4).unwrap(), None);
        for n in 3..20u32 {
            let g = extremal_rays(n).unwrap().g;
            let nn = i64::from(n);
            assert_eq!(
                sos_coordinates(n, &g).unwrap(),
                Some((int(0), frac(1, 1 - nn + nn * nn)))
            );
        }
        let f5 = extremal_rays(5).unwrap().f;
        assert_eq!(sos_coordinates(5, &f5).unwrap(), Some((int(6), int(0))));
    }

    #[test]
    fn raw_coordinates_reconstruct() {
        for n in 3..10u32 {
            let gens = sos_generators(n).unwrap();
            let f = q(frac(-3, 7), frac(11, 5));
            let (a, b) = sos_coordinates_raw(n, &f).unwrap();
            assert_eq!(&gens.s1.scale(&a) + &gens.s2.scale(&b), f);
        }
    }

    #[test]
    fn classify_examples() {
        let m = classify(4, &extremal_rays(4).unwrap().f).unwrap();
        assert_eq!((m.psd, m.sos), (Position::Boundary, Position::Outside));
        let m = classify(5, &extremal_rays(5).unwrap().f).unwrap();
        assert_eq!((m.psd, m.sos), (Position::Boundary, Position::Boundary));
        for n in 3..7 {
            let m = classify(n, &InvariantQuartic::zero()).unwrap();
            assert_eq!((m.psd, m.sos), (Position::Boundary, Position::Boundary));
            assert_eq!(m.sos_coords, Some((int(0), int(0))));
        }
        let m = classify(4, &q(int(4), int(4))).unwrap();
        assert_eq!((m.psd, m.sos), (Position::Interior, Position::Interior));
    }

    #[test]
    fn equality_small_n() {
        assert!(cones_equal(3).unwrap());
        assert!(!cones_equal(4).unwrap());
        assert!(cones_equal(5).unwrap());
        assert_eq!(cones_equal(1), Err(Error::UnsupportedN(1)));
    }

    #[test]
    fn gap_witnesses() {
        let w = gap_witness(4).unwrap().unwrap();
        assert_eq!(w, q(frac(-13, 60), int(1)));
        let m = classify(4, &w).unwrap();
        assert_eq!((m.psd, m.sos), (Position::Interior, Position::Outside));
        assert_eq!(gap_witness(5).unwrap(), None);
        let w = gap_witness(6).unwrap().unwrap();
        let m = classify(6, &w).unwrap();
        assert_ne!(m.psd, Position::Outside);
        assert_eq!(m.sos, Position::Outside);
    }

    #[test]
    fn global_nonnegativity() {
        for n in 3..10u32 {
            assert!(global_psd(n, &q(int(1), int(-1))).unwrap());
            assert!(global_psd(n, &q(int(-1), rational::from_u32(n + 1))).unwrap());
        }
        assert!(!global_psd(4, &q(int(-1), frac(30, 7))).unwrap());
        assert_eq!(
            psd_position(4, &q(int(-1), frac(30, 7))).unwrap().0,
            Position::Boundary
        );
    }
}
