//! Exact constants of the form `(a/b)·π^(k/2)`.
//!
//! Half-integer factorials, unit-ball volumes, the half-ball integral, central
//! binomials with half-integer arguments and the Kingman secant constant
//! `v(B^{n-1})` are all closed under this representation. Sums of such terms
//! (Sylvester probabilities, the offcut expectation) are carried by [`PiSum`].
//! The module also provides the analytic offset densities of random secants.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quad;

/// Exact value `(num/den)·π^(pi_half_power/2)` with `num/den` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiRational {
    coeff: BigRational,
    pi_half_power: i32,
}

fn pi_half_pow(k: i32) -> f64 {
    let whole = PI.powi(k.div_euclid(2));
    if k.rem_euclid(2) == 1 {
        whole * PI.sqrt()
    } else {
        whole
    }
}

impl PiRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>, pi_half_power: i32) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self::from_ratio(BigRational::new(num.into(), den), pi_half_power))
    }

    pub fn from_ratio(coeff: BigRational, pi_half_power: i32) -> Self {
        let pi_half_power = if coeff.is_zero() { 0 } else { pi_half_power };
        PiRational {
            coeff,
            pi_half_power,
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::from_ratio(BigRational::from_integer(n.into()), 0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `π^(k/2)`.
    pub fn pi_power(k: i32) -> Self {
        Self::from_ratio(BigRational::one(), k)
    }

    pub fn num(&self) -> &BigInt {
        self.coeff.numer()
    }

    /// Always positive.
    pub fn den(&self) -> &BigInt {
        self.coeff.denom()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pi_half_power(&self) -> i32 {
        self.pi_half_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Self::from_ratio(self.coeff.recip(), -self.pi_half_power))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        Ok(Self::from_ratio(
            num_traits::pow(self.coeff.clone(), e as usize),
            self.pi_half_power * e,
        ))
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        c * pi_half_pow(self.pi_half_power)
    }
}

impl Mul for &PiRational {
    type Output = PiRational;
    fn mul(self, rhs: &PiRational) -> PiRational {
        PiRational::from_ratio(
            &self.coeff * &rhs.coeff,
            self.pi_half_power + rhs.pi_half_power,
        )
    }
}

impl Mul for PiRational {
    type Output = PiRational;
    fn mul(self, rhs: PiRational) -> PiRational {
        &self * &rhs
    }
}

impl Div for &PiRational {
    type Output = PiRational;
    /// Panics on a zero divisor, like integer division; use [`PiRational::recip`]
    /// for a fallible variant.
    fn div(self, rhs: &PiRational) -> PiRational {
        assert!(!rhs.is_zero(), "division of PiRational by zero");
        PiRational::from_ratio(
            &self.coeff / &rhs.coeff,
            self.pi_half_power - rhs.pi_half_power,
        )
    }
}

impl Div for PiRational {
    type Output = PiRational;
    fn div(self, rhs: PiRational) -> PiRational {
        &self / &rhs
    }
}

impl Neg for PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational::from_ratio(-self.coeff, self.pi_half_power)
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, coeff: &BigRational, k: i32) -> fmt::Result {
    write!(f, "{}", coeff.numer())?;
    if !coeff.denom().is_one() {
        write!(f, "/{}", coeff.denom())?;
    }
    match (k, k % 2 == 0) {
        (0, _) => Ok(()),
        (2, _) => write!(f, "·π"),
        (_, true) => write!(f, "·π^{}", k / 2),
        (_, false) => write!(f, "·π^({k}/2)"),
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(f, &self.coeff, self.pi_half_power)
    }
}

/// Finite sum of [`PiRational`] terms keyed by their π half-power.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiSum {
    terms: BTreeMap<i32, BigRational>,
}

impl PiSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Terms in ascending π half-power, zero terms removed.
    pub fn terms(&self) -> Vec<PiRational> {
        self.terms
            .iter()
            .map(|(k, c)| PiRational::from_ratio(c.clone(), *k))
            .collect()
    }

    /// The single term, if the sum has at most one.
    pub fn as_monomial(&self) -> Option<PiRational> {
        match self.terms.len() {
            0 => Some(PiRational::integer(0)),
            1 => self.terms().pop(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms().iter().map(PiRational::to_f64).sum()
    }

    fn accumulate(&mut self, term: &PiRational) {
        if term.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(term.pi_half_power)
            .or_insert_with(BigRational::zero);
        *slot += term.coeff.clone();
        if slot.is_zero() {
            self.terms.remove(&term.pi_half_power);
        }
    }
}

impl From<PiRational> for PiSum {
    fn from(term: PiRational) -> Self {
        let mut s = PiSum::zero();
        s.accumulate(&term);
        s
    }
}

impl Add<PiRational> for PiSum {
    type Output = PiSum;
    fn add(mut self, rhs: PiRational) -> PiSum {
        self.accumulate(&rhs);
        self
    }
}

impl Sub<PiRational> for PiSum {
    type Output = PiSum;
    fn sub(mut self, rhs: PiRational) -> PiSum {
        self.accumulate(&-rhs);
        self
    }
}

impl Add for PiSum {
    type Output = PiSum;
    fn add(mut self, rhs: PiSum) -> PiSum {
        for t in rhs.terms() {
            self.accumulate(&t);
        }
        self
    }
}

impl fmt::Display for PiSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
                fmt_term(f, &c.abs(), *k)?;
            } else {
                fmt_term(f, c, *k)?;
            }
        }
        Ok(())
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `(two_k / 2)!` for `two_k >= -1`. Half-integers use the duplication formula
/// `(m − ½)! = √π·(2m)! / (2^{2m}·m!)`.
pub fn half_integer_factorial(two_k: i64) -> Result<PiRational> {
    if two_k < -1 {
        return Err(Error::Domain(format!(
            "factorial of {two_k}/2 is undefined here"
        )));
    }
    if two_k % 2 == 0 {
        return Ok(PiRational::integer(factorial((two_k / 2) as u64)));
    }
    let m = ((two_k + 1) / 2) as u64;
    let num = factorial(2 * m);
    let den = (BigInt::one() << (2 * m)) * factorial(m);
    Ok(PiRational::from_ratio(BigRational::new(num, den), 1))
}

/// Volume `β_n = π^{n/2} / (n/2)!` of the unit ball in `R^n`; `β_0 = 1`.
pub fn unit_ball_volume(n: i64) -> Result<PiRational> {
    if n < 0 {
        return Err(Error::Domain(format!("ball dimension {n} < 0")));
    }
    let pi = PiRational::pi_power(n as i32);
    Ok(&pi / &half_integer_factorial(n)?)
}

/// `∫₀¹ (1 − p²)^{(N−1)/2} dp = β_N / (2·β_{N−1})`.
pub fn half_ball_integral(n: i64) -> Result<PiRational> {
    if n < 1 {
        return Err(Error::Domain(format!("half-ball integral needs N >= 1, got {n}")));
    }
    let ratio = &unit_ball_volume(n)? / &unit_ball_volume(n - 1)?;
    Ok(&ratio / &PiRational::integer(2))
}

/// `n! / ((n/2)!)²` for any `n >= 0`; carries `π^{-1}` when `n` is odd.
pub fn central_binomial(n: i64) -> Result<PiRational> {
    if n < 0 {
        return Err(Error::Domain(format!("central binomial of {n}")));
    }
    let half = half_integer_factorial(n)?;
    Ok(&half_integer_factorial(2 * n)? / &(&half * &half))
}

/// `C(n, n/2)` for odd `n`.
pub fn half_integer_binomial(n: i64) -> Result<PiRational> {
    if n < 1 || n % 2 == 0 {
        return Err(Error::Domain(format!(
            "half-integer binomial needs odd n >= 1, got {n}"
        )));
    }
    central_binomial(n)
}

/// Kingman's constant for the unit ball:
/// `v(B^{n−1}) = C(n, n/2)^n · C(n², n²/2)^{−1} · 2^{1−n}`.
///
/// It is the expected volume of the simplex spanned by `n` uniform points of
/// `B^{n−1}`, divided by the volume of `B^{n−1}`.
pub fn kingman_v(n: i64) -> Result<PiRational> {
    if n < 2 {
        return Err(Error::Domain(format!("kingman_v needs n >= 2, got {n}")));
    }
    let top = central_binomial(n)?.pow(n as i32)?;
    let big = central_binomial(n * n)?;
    let two = PiRational::integer(BigInt::one() << (n - 1));
    Ok(&(&top / &big) / &two)
}

/// Probability that `d + 2` uniform points of the unit ball `B^d` are in
/// convex position, `1 − (d + 2)·v(B^d)`.
pub fn sylvester_probability(d: i64) -> Result<PiSum> {
    if !(1..=3).contains(&d) {
        return Err(Error::Domain(format!(
            "Sylvester probability supported for d in 1..=3, got {d}"
        )));
    }
    let v = kingman_v(d + 1)?;
    Ok(PiSum::from(PiRational::one()) - &PiRational::integer(d + 2) * &v)
}

/// Shape of an analytic density on a bounded support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityKind {
    /// `norm · (1 − x²)^exponent`.
    OneMinusSquare { exponent: f64, norm: f64 },
    /// `degree · x^{degree − 1}`: the law of the largest of several radii.
    Power { degree: i32 },
}

/// Normalized density on `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityLaw {
    pub name: String,
    pub support: (f64, f64),
    pub kind: DensityKind,
}

impl DensityLaw {
    pub fn pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if !(lo..=hi).contains(&x) {
            return 0.0;
        }
        match self.kind {
            DensityKind::OneMinusSquare { exponent, norm } => {
                norm * (1.0 - x * x).max(0.0).powf(exponent)
            }
            DensityKind::Power { degree } => degree as f64 * x.powi(degree - 1),
        }
    }

    /// `∫_a^b pdf` by adaptive quadrature.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        let (lo, hi) = self.support;
        let (a, b) = (a.max(lo), b.min(hi));
        if a >= b {
            return 0.0;
        }
        quad::integrate(|x| self.pdf(x), a, b).value
    }

    pub fn mean(&self) -> f64 {
        let (lo, hi) = self.support;
        quad::integrate(|x| x * self.pdf(x), lo, hi).value
    }
}

/// Law of the offset `|p|` of the flat through `dim` uniform points of the
/// unit ball `B^dim`.
///
/// The flat's cross-section is a `(dim−1)`-ball of radius `√(1−p²)`, and the
/// secant measure weighs it by its volume to the power `dim + 1`, giving a
/// density proportional to `(1 − p²)^{(dim² − 1)/2}` on `[0, 1]`.
pub fn secant_offset_density(dim: i64) -> Result<DensityLaw> {
    if !(2..=4).contains(&dim) {
        return Err(Error::Domain(format!(
            "secant offset density supported for dim in 2..=4, got {dim}"
        )));
    }
    let exponent = (dim * dim - 1) as f64 / 2.0;
    let norm = 1.0 / half_ball_integral(dim * dim)?.to_f64();
    Ok(DensityLaw {
        name: format!("secant-offset-{dim}d"),
        support: (0.0, 1.0),
        kind: DensityKind::OneMinusSquare { exponent, norm },
    })
}

/// Law `6c⁵` of the largest radius among three uniform points of the unit disk.
pub fn max_radius_density() -> DensityLaw {
    DensityLaw {
        name: "max-radius-of-3".into(),
        support: (0.0, 1.0),
        kind: DensityKind::Power { degree: 6 },
    }
}

/// Law `2r` of the radius of a uniform point of the unit disk.
pub fn disk_radius_density() -> DensityLaw {
    DensityLaw {
        name: "disk-radius".into(),
        support: (0.0, 1.0),
        kind: DensityKind::Power { degree: 2 },
    }
}

/// Named exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedConstant {
    pub name: &'static str,
    pub value: PiSum,
}

fn term(num: i64, den: i64, k: i32) -> PiRational {
    PiRational::new(num, den, k).expect("nonzero denominator")
}

/// Expectations of the unit-disk triangle problems and the unit-interval distance.
pub fn reference_constants() -> Vec<NamedConstant> {
    vec![
        NamedConstant {
            name: "center_triangle",
            value: term(4, 9, -2).into(),
        },
        NamedConstant {
            name: "boundary_triangle",
            value: term(35, 36, -2).into(),
        },
        NamedConstant {
            name: "disk_triangle",
            value: term(35, 48, -2).into(),
        },
        NamedConstant {
            name: "offcut",
            value: PiSum::from(term(35, 72, -2)) + term(1, 3, 2),
        },
        NamedConstant {
            name: "unit_interval_distance",
            value: term(1, 3, 0).into(),
        },
    ]
}

/// Every constant the laboratory knows in closed form, in a stable order.
pub fn constant_table() -> Vec<NamedConstant> {
    let mut out = reference_constants();
    let mut push = |name: &'static str, value: PiSum| out.push(NamedConstant { name, value });
    let known = "arguments are in the supported domain";
    for (n, name) in [(1, "beta_1"), (2, "beta_2"), (3, "beta_3"), (4, "beta_4")] {
        push(name, unit_ball_volume(n).expect(known).into());
    }
    for (n, name) in [(2, "v_b1"), (3, "v_b2"), (4, "v_b3")] {
        push(name, kingman_v(n).expect(known).into());
    }
    for (d, name) in [(1, "sylvester_1d"), (2, "sylvester_2d"), (3, "sylvester_3d")] {
        push(name, sylvester_probability(d).expect(known));
    }
    push("half_ball_9", half_ball_integral(9).expect(known).into());
    push("half_ball_16", half_ball_integral(16).expect(known).into());
    push(
        "tetra_in_ball_mean",
        (&kingman_v(4).expect(known) * &unit_ball_volume(3).expect(known)).into(),
    );
    push("disk_mean_distance", term(128, 45, -2).into());
    out
}

/// Reduced `(num, den)` pair as `i128`, when it fits.
pub fn small_parts(x: &PiRational) -> Option<(i128, i128)> {
    Some((x.num().to_i128()?, x.den().to_i128()?))
}

/// Greatest common divisor of the coefficient parts; `1` for reduced values.
pub fn coeff_gcd(x: &PiRational) -> BigInt {
    x.num().gcd(x.den())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(num: i64, den: i64, k: i32) -> PiRational {
        PiRational::new(num, den, k).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn construction_reduces() {
        let x = pr(6, -4, 1);
        assert_eq!(x.num(), &BigInt::from(-3));
        assert_eq!(x.den(), &BigInt::from(2));
        assert!(PiRational::new(1, 0, 0).is_err());
        assert_eq!(pr(0, 5, 3).pi_half_power(), 0);
    }

    #[test]
    fn half_integer_factorial_examples() {
        assert_eq!(half_integer_factorial(-1).unwrap(), pr(1, 1, 1));
        assert_eq!(half_integer_factorial(4).unwrap(), pr(2, 1, 0));
        assert_eq!(half_integer_factorial(3).unwrap(), pr(3, 4, 1));
        assert_eq!(half_integer_factorial(0).unwrap(), pr(1, 1, 0));
        assert!(half_integer_factorial(-2).is_err());
        assert!(rel(half_integer_factorial(-1).unwrap().to_f64(), PI.sqrt()) < 1e-15);
    }

    #[test]
    fn unit_ball_volume_examples() {
        assert_eq!(unit_ball_volume(2).unwrap(), pr(1, 1, 2));
        assert_eq!(unit_ball_volume(3).unwrap(), pr(4, 3, 2));
        assert_eq!(unit_ball_volume(1).unwrap(), pr(2, 1, 0));
        assert_eq!(unit_ball_volume(4).unwrap(), pr(1, 2, 4));
        assert!(unit_ball_volume(-1).is_err());
    }

    #[test]
    fn half_ball_integral_examples() {
        assert_eq!(half_ball_integral(9).unwrap(), pr(128, 315, 0));
        assert_eq!(half_ball_integral(1).unwrap(), pr(1, 1, 0));
        assert!(half_ball_integral(0).is_err());
        // (1−p²)^{15/2}: β16/(2β15) is a rational multiple of π
        let v = half_ball_integral(16).unwrap();
        assert_eq!(v.pi_half_power(), 2);
        let q = quad::integrate(|p| (1.0 - p * p).powf(7.5), 0.0, 1.0);
        assert!((v.to_f64() - q.value).abs() < 1e-10);
    }

    #[test]
    fn half_integer_binomial_examples() {
        assert_eq!(half_integer_binomial(3).unwrap(), pr(32, 3, -2));
        assert_eq!(half_integer_binomial(1).unwrap(), pr(4, 1, -2));
        assert!(half_integer_binomial(4).is_err());
        assert_eq!(central_binomial(4).unwrap(), pr(6, 1, 0));
    }

    #[test]
    fn closing_binomial_identity() {
        // C(n+1, (n+1)/2) = 2^{2n+4} / (π(n+2)) · C(n+2, (n+2)/2)^{-1}
        for n in [1i64, 3, 5, 7, 9, 11] {
            let lhs = central_binomial(n + 1).unwrap();
            let factor = PiRational::from_ratio(
                BigRational::new(BigInt::one() << (2 * n + 4), BigInt::from(n + 2)),
                -2,
            );
            let rhs = &factor / &central_binomial(n + 2).unwrap();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn kingman_examples() {
        assert_eq!(kingman_v(2).unwrap(), pr(1, 3, 0));
        assert_eq!(kingman_v(3).unwrap(), pr(35, 48, -4));
        assert_eq!(kingman_v(4).unwrap(), pr(9, 715, 0));
        assert!(rel(kingman_v(3).unwrap().to_f64(), 35.0 / (48.0 * PI * PI)) < 1e-14);
        for n in 2..=8 {
            let v = kingman_v(n).unwrap();
            let expect = if n % 2 == 0 { 0 } else { 2 * (1 - n as i32) };
            assert_eq!(v.pi_half_power(), expect, "n = {n}");
        }
        assert!(kingman_v(1).is_err());
    }

    #[test]
    fn sylvester_examples() {
        let s2 = sylvester_probability(2).unwrap();
        assert!(s2.as_monomial().is_none());
        assert!((s2.to_f64() - (1.0 - 35.0 / (12.0 * PI * PI))).abs() < 1e-15);
        assert!((s2.to_f64() - 0.704_479_8).abs() < 1e-7);
        assert_eq!(sylvester_probability(3).unwrap().as_monomial(), Some(pr(134, 143, 0)));
        assert_eq!(sylvester_probability(1).unwrap(), PiSum::zero());
        assert!(sylvester_probability(4).is_err());
        assert_eq!(s2.to_string(), "1 - 35/12·π^-2");
    }

    #[test]
    fn densities_normalize() {
        for dim in 2..=4 {
            let law = secant_offset_density(dim).unwrap();
            assert!((law.mass(0.0, 1.0) - 1.0).abs() < 1e-10, "dim {dim}");
            assert_eq!(law.pdf(1.0), 0.0);
        }
        assert!((secant_offset_density(2).unwrap().pdf(0.0) - 16.0 / (3.0 * PI)).abs() < 1e-14);
        assert!((secant_offset_density(3).unwrap().pdf(0.0) - 315.0 / 128.0).abs() < 1e-14);
        assert!((max_radius_density().mass(0.0, 1.0) - 1.0).abs() < 1e-12);
        assert!((max_radius_density().mean() - 6.0 / 7.0).abs() < 1e-12);
        assert!((disk_radius_density().mass(0.0, 0.5) - 0.25).abs() < 1e-12);
        assert!(secant_offset_density(5).is_err());
    }

    #[test]
    fn reference_values() {
        let table = reference_constants();
        let get = |n: &str| table.iter().find(|c| c.name == n).unwrap().value.to_f64();
        assert!((get("disk_triangle") - 35.0 / (48.0 * PI)).abs() < 1e-16);
        assert!((get("disk_triangle") - 0.232_101_0).abs() < 1e-7);
        assert!((get("offcut") - (35.0 / (72.0 * PI) + PI / 3.0)).abs() < 1e-15);
        assert!((get("offcut") - 1.2019).abs() < 1e-4);
        assert_eq!(get("unit_interval_distance"), 1.0 / 3.0);
        // max-radius law recombines the boundary-vertex expectation into the disk one
        let q = quad::integrate(|c| 6.0 * c.powi(7) * get("boundary_triangle"), 0.0, 1.0);
        assert!((q.value - get("disk_triangle")).abs() < 1e-13);
    }

    #[test]
    fn constant_table_contents() {
        let t = constant_table();
        let get = |n: &str| t.iter().find(|c| c.name == n).unwrap().value.clone();
        assert_eq!(get("v_b3").as_monomial(), Some(pr(9, 715, 0)));
        assert_eq!(get("beta_4").as_monomial(), Some(pr(1, 2, 4)));
        assert!((get("sylvester_2d").to_f64() - 0.704_479_8).abs() < 1e-7);
        let names: Vec<_> = t.iter().map(|c| c.name).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
    }
}
