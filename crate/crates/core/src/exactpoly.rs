//! Sparse multivariate polynomials over the rationals, the power-sum basis of
//! symmetric quartics, and the two ring maps between `Q[y_1..y_n]` and
//! `Q[x_1..x_{n+1}] / (p1)`.
//!
//! Everything here is exact. Variables are indexed from 0 internally and
//! printed from 1 (`x1`, `x2`, ...).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exponent vector of a monomial. Ordered graded-lexicographically: total
/// degree first, then exponents compared from `x1` onward.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Moves the exponent of variable `i` to variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut e = vec![0; self.0.len()];
        for (i, &p) in perm.iter().enumerate() {
            e[p] = self.0[i];
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match e {
                1 => write!(f, "x{}", i + 1)?,
                _ => write!(f, "x{}^{}", i + 1, e)?,
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Powers `x_i^0 ..= x_i^max_exp` of every coordinate of a point, shared
/// across many evaluations at that point.
#[derive(Debug, Clone)]
pub struct PointPowers(Vec<Vec<Rational>>);

impl PointPowers {
    pub fn new(point: &[Rational], max_exp: u32) -> Self {
        PointPowers(
            point
                .iter()
                .map(|x| {
                    let mut row = Vec::with_capacity(max_exp as usize + 1);
                    row.push(rational::one());
                    for k in 1..=max_exp as usize {
                        let next = &row[k - 1] * x;
                        row.push(next);
                    }
                    row
                })
                .collect(),
        )
    }
}

/// Sparse polynomial in a fixed number of variables. No stored coefficient
/// is ever zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), rational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// `p_k = x_1^k + ... + x_nvars^k`.
    pub fn power_sum(nvars: usize, k: u32) -> Self {
        let mut p = Self::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = k;
            p.add_term(Monomial(e), rational::one());
        }
        p
    }

    pub fn add_term(&mut self, mono: Monomial, c: Rational) {
        debug_assert_eq!(mono.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(rational::zero)
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Substitutes `x_i -> x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permuted(perm), c.clone()))
                .collect(),
        }
    }

    /// Invariance under every adjacent transposition, which generate the
    /// full symmetric group.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            self.terms.iter().all(|(m, c)| {
                let mut e = m.0.clone();
                e.swap(i, i + 1);
                self.terms.get(&Monomial(e)) == Some(c)
            })
        })
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().copied())
            .max()
            .unwrap_or(0);
        Ok(self.evaluate_powers(&PointPowers::new(point, max_exp)))
    }

    /// Evaluation against a precomputed power table; exponents beyond the
    /// table's range panic.
    pub fn evaluate_powers(&self, powers: &PointPowers) -> Rational {
        assert_eq!(powers.0.len(), self.nvars, "point dimension");
        let mut sum = rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers.0[i][e as usize];
                }
            }
            sum += t;
        }
        sum
    }

    /// Coefficients as `i128` when all of them are integers that fit.
    pub fn integral_terms(&self) -> Option<Vec<(&Monomial, i128)>> {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                c.is_integer()
                    .then(|| c.numer().to_i128())
                    .flatten()
                    .map(|v| (m, v))
            })
            .collect()
    }

    /// Exact value at an integer point when every coefficient is an integer
    /// and the computation fits in `i128`; `None` otherwise.
    pub fn evaluate_integral(&self, point: &[i64]) -> Option<i128> {
        use num_traits::ToPrimitive;
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut sum: i128 = 0;
        for (m, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            let mut t = c.numer().to_i128()?;
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.checked_mul(i128::from(point[i]))?;
                }
            }
            sum = sum.checked_add(t)?;
        }
        Some(sum)
    }

    /// Floating-point evaluation, for the numeric oracle only.
    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.0.iter().enumerate() {
                    t *= point[i].powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Parses the canonical text form. Accepts any term order.
    pub fn parse(nvars: usize, s: &str) -> Result<Self> {
        let mut p = Self::zero(nvars);
        if s == "0" {
            return Ok(p);
        }
        for term in s.split(" + ") {
            let (coeff, mono) = match term.split_once(" * ") {
                Some((c, m)) => (c, Some(m)),
                None => (term, None),
            };
            let c = rational::parse(coeff)?;
            let mut e = vec![0u32; nvars];
            if let Some(mono) = mono {
                for factor in mono.split('*') {
                    let (var, exp) = match factor.split_once('^') {
                        Some((v, x)) => (v, parse_exponent(x)?),
                        None => (factor, 1),
                    };
                    let idx = var
                        .strip_prefix('x')
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&i| (1..=nvars).contains(&i))
                        .ok_or_else(|| Error::Parse(format!("bad variable {var:?}")))?;
                    e[idx - 1] += exp;
                }
            }
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient in term {term:?}")));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }
}

fn parse_exponent(s: &str) -> Result<u32> {
    s.parse::<u32>()
        .ok()
        .filter(|&e| e >= 1 && s.bytes().all(|b| b.is_ascii_digit()))
        .ok_or_else(|| Error::Parse(format!("bad exponent {s:?}")))
}

/// Canonical text: terms in descending graded-lex order joined by ` + `,
/// each written `coeff * x1^e1*x2^e2...` (constants as bare `coeff`).
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c} * {m}")?;
            }
        }
        Ok(())
    }
}

impl AddAssign<&SparsePoly> for SparsePoly {
    fn add_assign(&mut self, rhs: &SparsePoly) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SparsePoly {
    type Output = SparsePoly;
    fn add(mut self, rhs: SparsePoly) -> SparsePoly {
        self += &rhs;
        self
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: SparsePoly) -> SparsePoly {
        &self - &rhs
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = SparsePoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: SparsePoly) -> SparsePoly {
        &self * &rhs
    }
}

/// Coefficients of a symmetric quartic on the products
/// `p1^4, p2*p1^2, p3*p1, p2^2, p4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumQuartic {
    pub c1111: Rational,
    pub c211: Rational,
    pub c31: Rational,
    pub c22: Rational,
    pub c4: Rational,
}

impl PowerSumQuartic {
    pub fn new(
        c1111: Rational,
        c211: Rational,
        c31: Rational,
        c22: Rational,
        c4: Rational,
    ) -> Self {
        PowerSumQuartic {
            c1111,
            c211,
            c31,
            c22,
            c4,
        }
    }

    pub fn from_array([c1111, c211, c31, c22, c4]: [Rational; 5]) -> Self {
        Self::new(c1111, c211, c31, c22, c4)
    }

    pub fn to_array(&self) -> [Rational; 5] {
        [
            self.c1111.clone(),
            self.c211.clone(),
            self.c31.clone(),
            self.c22.clone(),
            self.c4.clone(),
        ]
    }

    pub fn zero() -> Self {
        Self::from_array(std::array::from_fn(|_| rational::zero()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_array(self.to_array().map(|v| v * c))
    }

    pub fn expand(&self, nvars: usize) -> SparsePoly {
        assert!(nvars >= 1, "need at least one variable");
        let mut out = SparsePoly::zero(nvars);
        let p1 = SparsePoly::power_sum(nvars, 1);
        let p2 = SparsePoly::power_sum(nvars, 2);
        if !self.c1111.is_zero() || !self.c211.is_zero() {
            let p1sq = p1.square();
            if !self.c1111.is_zero() {
                out += &p1sq.square().scale(&self.c1111);
            }
            if !self.c211.is_zero() {
                out += &(&p2 * &p1sq).scale(&self.c211);
            }
        }
        if !self.c31.is_zero() {
            out += &(&SparsePoly::power_sum(nvars, 3) * &p1).scale(&self.c31);
        }
        if !self.c22.is_zero() {
            out += &p2.square().scale(&self.c22);
        }
        if !self.c4.is_zero() {
            out += &SparsePoly::power_sum(nvars, 4).scale(&self.c4);
        }
        out
    }

    /// Class modulo `(p1)`: only the `p2^2` and `p4` coordinates survive.
    pub fn invariant_part(&self) -> InvariantQuartic {
        InvariantQuartic::new(self.c22.clone(), self.c4.clone())
    }

    /// Values of the five basis products at a point, in basis order.
    pub fn basis_values(point: &[Rational]) -> [Rational; 5] {
        let p = |k: u32| -> Rational {
            point
                .iter()
                .map(|x| num_traits::pow::pow(x.clone(), k as usize))
                .sum()
        };
        let (p1, p2, p3, p4) = (p(1), p(2), p(3), p(4));
        [
            num_traits::pow::pow(p1.clone(), 4),
            &p2 * &p1 * &p1,
            &p3 * &p1,
            &p2 * &p2,
            p4,
        ]
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        Self::basis_values(point)
            .iter()
            .zip(self.to_array().iter())
            .map(|(v, c)| v * c)
            .sum()
    }
}

impl fmt::Display for PowerSumQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.c1111, self.c211, self.c31, self.c22, self.c4
        )
    }
}

/// Supports of the points used to read off power-sum coordinates; each is
/// padded with zeros to the polynomial's variable count. The 4-entry point is
/// what separates `p1^4` from the rest, hence the 4-variable minimum.
const BASIS_POINTS: [&[i64]; 5] = [&[1], &[1, 1], &[1, 2], &[1, 1, 1], &[1, 1, 1, 1]];

/// Minimum variable count at which the five power-sum products are
/// linearly independent.
pub const MIN_BASIS_NVARS: usize = 4;

/// Inverse of [`PowerSumQuartic::expand`] on symmetric homogeneous quartics.
pub fn to_power_sum(f: &SparsePoly) -> Result<PowerSumQuartic> {
    let nvars = f.nvars();
    if nvars < MIN_BASIS_NVARS {
        return Err(Error::DegenerateBasis { nvars });
    }
    if !f.is_homogeneous(4) {
        return Err(Error::NotHomogeneousQuartic);
    }
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut rows = Vec::with_capacity(5);
    let mut rhs = Vec::with_capacity(5);
    for support in BASIS_POINTS {
        let mut point = vec![rational::zero(); nvars];
        for (slot, &v) in point.iter_mut().zip(support) {
            *slot = rational::int(v);
        }
        rows.push(PowerSumQuartic::basis_values(&point).to_vec());
        rhs.push(f.evaluate(&point)?);
    }
    let sol = solve_linear(rows, rhs).expect("power-sum basis points are nonsingular");
    Ok(PowerSumQuartic::from_array(
        sol.try_into().expect("five coordinates"),
    ))
}

/// Gaussian elimination over the rationals; `None` when singular.
#[allow(clippy::needless_range_loop)] // rows `r` and `col` of one matrix
pub(crate) fn solve_linear(
    mut a: Vec<Vec<Rational>>,
    mut b: Vec<Rational>,
) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[r][k] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Class of `a*p2^2 + b*p4` modulo `(p1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantQuartic {
    pub a: Rational,
    pub b: Rational,
}

impl InvariantQuartic {
    pub fn new(a: Rational, b: Rational) -> Self {
        InvariantQuartic { a, b }
    }

    pub fn zero() -> Self {
        Self::new(rational::zero(), rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.a * c, &self.b * c)
    }

    pub fn to_power_sum(&self) -> PowerSumQuartic {
        PowerSumQuartic::new(
            rational::zero(),
            rational::zero(),
            rational::zero(),
            self.a.clone(),
            self.b.clone(),
        )
    }

    pub fn expand(&self, nvars: usize) -> SparsePoly {
        self.to_power_sum().expand(nvars)
    }

    /// `a*p2^2 + b*p4` at a point given its `p2` and `p4`.
    pub fn value_at(&self, p2: &Rational, p4: &Rational) -> Rational {
        &self.a * p2 * p2 + &self.b * p4
    }
}

impl Add for &InvariantQuartic {
    type Output = InvariantQuartic;
    fn add(self, rhs: &InvariantQuartic) -> InvariantQuartic {
        InvariantQuartic::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl fmt::Display for InvariantQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Image under `x_{n+1} -> -(x_1 + ... + x_n)`, landing in `n = nvars - 1`
/// variables. Two polynomials agree modulo `(p1)` iff their images agree.
pub fn reduce_mod_p1(f: &SparsePoly) -> SparsePoly {
    let nvars = f.nvars();
    assert!(nvars >= 2, "reduction mod p1 needs at least two variables");
    let n = nvars - 1;
    // Group by the exponent of the eliminated variable.
    let mut by_last: BTreeMap<u32, SparsePoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let e = m.exponents();
        by_last
            .entry(e[n])
            .or_insert_with(|| SparsePoly::zero(n))
            .add_term(Monomial(e[..n].to_vec()), c.clone());
    }
    let minus_p1 = -SparsePoly::power_sum(n, 1);
    let mut out = SparsePoly::zero(n);
    let mut power = SparsePoly::constant(n, rational::one());
    let mut k = 0;
    for (e, g) in by_last {
        while k < e {
            power = &power * &minus_p1;
            k += 1;
        }
        out += &(&g * &power);
    }
    out
}

/// Substitution `y_i -> x_1 - x_{i+1}` from `n` to `n+1` variables.
pub fn y_to_x(f: &SparsePoly) -> SparsePoly {
    let n = f.nvars();
    let nx = n + 1;
    let images: Vec<SparsePoly> = (0..n)
        .map(|i| &SparsePoly::var(nx, 0) - &SparsePoly::var(nx, i + 1))
        .collect();
    let mut power_cache: BTreeMap<(usize, u32), SparsePoly> = BTreeMap::new();
    let mut out = SparsePoly::zero(nx);
    for (m, c) in f.terms() {
        let mut t = SparsePoly::constant(nx, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = power_cache
                .entry((i, e))
                .or_insert_with(|| images[i].pow(e));
            t = &t * pw;
        }
        out += &t;
    }
    out
}
