//! Exact real numbers of the form `c0 + c1·√2 + c2·√3 + c3·√5 + …`.
//!
//! Character values live in the ℚ-span of square roots of the first few
//! primes. The span is closed under addition and rational scaling, which is
//! all a homomorphism into ℝ needs, and the sign of every element is
//! decidable because the basis is ℚ-linearly independent.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Primes whose square roots may appear in a value; coordinate `i ≥ 1`
/// multiplies `√PRIMES[i-1]`.
pub const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValueError {
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("value has {0} coordinates, at most {max} supported", max = PRIMES.len() + 1)]
    TooManyCoordinates(usize),
}

pub fn parse_rational(s: &str) -> Result<Rational, ValueError> {
    let t = s.trim();
    let bad = || ValueError::BadRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of ℚ(√2, √3, …) restricted to the ℚ-span of `1, √p_1, …`.
///
/// Trailing zero coordinates are trimmed so that equal values have equal
/// representations.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Value {
    coords: Vec<Rational>,
}

impl Value {
    pub fn zero() -> Self {
        Value { coords: Vec::new() }
    }

    pub fn rational(q: Rational) -> Self {
        Self::from_coords(vec![q]).expect("one coordinate")
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    /// `√PRIMES[i]` scaled by `q`.
    pub fn sqrt_prime(i: usize, q: Rational) -> Self {
        let mut c = vec![Rational::zero(); i + 2];
        c[i + 1] = q;
        Self::from_coords(c).expect("index within basis")
    }

    pub fn from_coords(mut coords: Vec<Rational>) -> Result<Self, ValueError> {
        while coords.last().is_some_and(|c| c.is_zero()) {
            coords.pop();
        }
        if coords.len() > PRIMES.len() + 1 {
            return Err(ValueError::TooManyCoordinates(coords.len()));
        }
        Ok(Value { coords })
    }

    pub fn from_strings<S: AsRef<str>>(coords: &[S]) -> Result<Self, ValueError> {
        let c = coords
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coords(c)
    }

    /// Coordinates padded to `len` entries.
    pub fn coords_padded(&self, len: usize) -> Vec<Rational> {
        let mut c = self.coords.clone();
        c.resize(len.max(c.len()), Rational::zero());
        c
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_strings(&self, len: usize) -> Vec<String> {
        self.coords_padded(len).iter().map(format_rational).collect()
    }

    pub fn coord(&self, i: usize) -> Rational {
        self.coords.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.len() <= 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coord(0))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Value { coords: self.coords.iter().map(|c| c * q).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let n = BigInt::from(n);
        Value { coords: self.coords.iter().map(|c| c * &n).collect() }
    }

    /// Accumulates `n · other` into `self`.
    pub fn add_scaled_int(&mut self, other: &Value, n: i64) {
        if n == 0 || other.is_zero() {
            return;
        }
        if self.coords.len() < other.coords.len() {
            self.coords.resize(other.coords.len(), Rational::zero());
        }
        let n = BigInt::from(n);
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if a.is_integer() && b.is_integer() {
                *a = Rational::from_integer(a.numer() + b.numer() * &n);
            } else {
                *a += b * &n;
            }
        }
        while self.coords.last().is_some_and(|c| c.is_zero()) {
            self.coords.pop();
        }
    }

    pub fn signum(&self) -> Ordering {
        sign(self)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut acc = self.coord(0).to_f64().unwrap_or(f64::NAN);
        for (i, c) in self.coords.iter().enumerate().skip(1) {
            acc += c.to_f64().unwrap_or(f64::NAN) * f64::from(PRIMES[i - 1]).sqrt();
        }
        acc
    }

    /// Smallest integer `n ≥ 0` with `n · self ≥ target`, for `self > 0`.
    pub fn steps_to_reach(&self, target: &Value) -> u64 {
        assert!(self.is_positive(), "step must be positive");
        if !target.is_positive() {
            return 0;
        }
        let guess = (target.to_f64() / self.to_f64()).floor().max(0.0) as u64;
        let mut n = guess.saturating_sub(2);
        while &self.scale_int(n as i64) < target {
            n += 1;
        }
        n
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "√{}", PRIMES[i - 1])?;
            } else {
                write!(f, "{}√{}", format_rational(&mag), PRIMES[i - 1])?;
            }
        }
        Ok(())
    }
}

impl Add<&Value> for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        let n = self.coords.len().max(rhs.coords.len());
        let c = (0..n).map(|i| self.coord(i) + rhs.coord(i)).collect();
        Value::from_coords(c).expect("lengths bounded by inputs")
    }
}

impl Sub<&Value> for &Value {
    type Output = Value;
    fn sub(self, rhs: &Value) -> Value {
        let n = self.coords.len().max(rhs.coords.len());
        let c = (0..n).map(|i| self.coord(i) - rhs.coord(i)).collect();
        Value::from_coords(c).expect("lengths bounded by inputs")
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        &self + &rhs
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        &self - &rhs
    }
}

impl Neg for &Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        -&self
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.is_rational() && other.is_rational() {
            return self.coord(0).cmp(&other.coord(0));
        }
        sign(&(self - other))
    }
}

/// `floor(√p · 2^bits)`, cached.
fn sqrt_floor(p: u32, bits: u32) -> BigInt {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), BigInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("sqrt cache").get(&(p, bits)) {
        return v.clone();
    }
    let v = (BigInt::from(p) << (2 * bits as usize)).sqrt();
    cache.lock().expect("sqrt cache").insert((p, bits), v.clone());
    v
}

/// Exact sign of a value.
///
/// Rational values compare directly. Otherwise each `√p` is enclosed in a
/// dyadic interval of width `2^-bits` and the enclosure of the whole sum is
/// refined, doubling `bits`, until it excludes zero. A nonzero value is never
/// zero, so the loop terminates.
pub fn sign(v: &Value) -> Ordering {
    if v.is_zero() {
        return Ordering::Equal;
    }
    if v.is_rational() {
        return v.coord(0).cmp(&Rational::zero());
    }
    // Clear denominators: work with integers n_i = c_i · D.
    let d = v.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.coords.iter().map(|c| (c * &d).to_integer()).collect();
    let mut bits = 64u32;
    loop {
        // value · D · 2^bits lies in [lo, hi]
        let scale = BigInt::one() << bits as usize;
        let mut lo = &ints[0] * &scale;
        let mut hi = lo.clone();
        for (i, n) in ints.iter().enumerate().skip(1) {
            if n.is_zero() {
                continue;
            }
            let s = sqrt_floor(PRIMES[i - 1], bits);
            let a = n * &s;
            let b = n * (&s + 1);
            if n.is_positive() {
                lo += a;
                hi += b;
            } else {
                lo += b;
                hi += a;
            }
        }
        if lo.is_positive() {
            return Ordering::Greater;
        }
        if hi.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// A φ-value extended by `+∞` (the value of the zero element).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Valuation {
    Finite(Value),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Value> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn add_value(&self, v: &Value) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a + v),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    pub fn to_json(&self, len: usize) -> serde_json::Value {
        match self {
            Valuation::Finite(v) => serde_json::json!(v.to_strings(len)),
            Valuation::Infinite => serde_json::json!("inf"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "∞"),
        }
    }
}

impl From<Value> for Valuation {
    fn from(v: Value) -> Self {
        Valuation::Finite(v)
    }
}

impl Add<&Valuation> for &Valuation {
    type Output = Valuation;
    fn add(self, rhs: &Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> Value {
        Value::from_coords(c.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    // Squaring oracle for a + b√2 with integer a, b.
    fn sign_by_squaring(a: i64, b: i64) -> Ordering {
        match (a.signum(), b.signum()) {
            (0, s) | (s, 0) => s.cmp(&0),
            (1, 1) => Ordering::Greater,
            (-1, -1) => Ordering::Less,
            (sa, _) => {
                let lhs = (a as i128) * (a as i128);
                let rhs = 2 * (b as i128) * (b as i128);
                if sa > 0 { lhs.cmp(&rhs) } else { rhs.cmp(&lhs) }
            }
        }
    }

    #[test]
    fn signs_of_small_examples() {
        assert_eq!(sign(&Value::zero()), Ordering::Equal);
        assert_eq!(sign(&v(&[3, -2])), Ordering::Greater);
        assert_eq!(sign(&v(&[1, -1])), Ordering::Less);
        assert_eq!(sign(&v(&[0, 0, 0])), Ordering::Equal);
    }

    #[test]
    fn sign_matches_squaring_oracle() {
        for a in -12..=12 {
            for b in -12..=12 {
                assert_eq!(sign(&v(&[a, b])), sign_by_squaring(a, b), "{a} + {b}√2");
            }
        }
    }

    #[test]
    fn close_values_need_refinement() {
        // convergents of √2, within 4e-7 and 2e-9
        for (p, q) in [(1393i128, 985i128), (19601, 13860), (114243, 80782)] {
            let x = Value::from_coords(vec![ratio(-(p as i64), q as i64), rat(1)]).unwrap();
            // √2 - p/q against the squares 2q² and p²
            assert_eq!(sign(&x), (2 * q * q).cmp(&(p * p)), "{p}/{q}");
        }
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(v(&[1, 0, 0]), v(&[1]));
        assert!(v(&[0, 0]).is_zero());
    }

    #[test]
    fn rational_round_trip() {
        for s in ["3", "-7/2", "0"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuation_order_puts_infinity_last() {
        let a = Valuation::Finite(v(&[5]));
        assert!(a < Valuation::Infinite);
        assert_eq!(&a + &Valuation::Infinite, Valuation::Infinite);
    }

    #[test]
    fn steps_to_reach_is_minimal() {
        let step = v(&[0, 1]);
        let target = v(&[5]);
        let n = step.steps_to_reach(&target);
        assert_eq!(n, 4); // 4√2 ≈ 5.66 ≥ 5 > 3√2
    }
}
