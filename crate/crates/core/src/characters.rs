//! Real characters `φ: G → ℝ` factoring through the free abelianization.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{GroupContext, GroupError, Word};
use crate::value::{format_rational, parse_rational, Rational, Value, ValueError, PRIMES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("character has rank {found}, the abelianization has rank {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("character file: {0}")]
    Parse(String),
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("basis_primes must be an initial segment of {PRIMES:?}")]
    BasisPrimes,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `φ(e_j) = columns[j]` on the basis of `ℤ^rank`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Character {
    columns: Vec<Value>,
    pub label: Option<String>,
}

impl Character {
    pub fn new(columns: Vec<Value>) -> Self {
        Character { columns, label: None }
    }

    pub fn rational(coeffs: &[Rational]) -> Self {
        Self::new(coeffs.iter().map(|q| Value::rational(q.clone())).collect())
    }

    pub fn integral(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&n| Value::int(n)).collect())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Value] {
        &self.columns
    }

    /// Number of square-root basis elements actually used.
    pub fn basis_len(&self) -> usize {
        self.columns.iter().map(|v| v.coords().len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Value::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.columns.iter().all(Value::is_rational)
    }

    pub fn neg(&self) -> Character {
        Character { columns: self.columns.iter().map(|v| -v).collect(), label: self.label.clone() }
    }

    pub fn scale(&self, q: &Rational) -> Character {
        Character { columns: self.columns.iter().map(|v| v.scale(q)).collect(), label: self.label.clone() }
    }

    pub fn check_rank(&self, ctx: &GroupContext) -> Result<(), CharacterError> {
        let expected = ctx.abelianization().rank;
        if self.rank() != expected {
            return Err(CharacterError::RankMismatch { expected, found: self.rank() });
        }
        Ok(())
    }

    pub fn evaluate_coords(&self, coords: &[i64]) -> Value {
        let mut v = Value::zero();
        for (c, &n) in self.columns.iter().zip(coords) {
            v.add_scaled_int(c, n);
        }
        v
    }

    /// `φ(w)` for a word over the context's generators.
    pub fn evaluate(&self, ctx: &GroupContext, w: &Word) -> Value {
        debug_assert_eq!(self.rank(), ctx.abelianization().rank);
        self.evaluate_coords(&ctx.abelian_coords(w))
    }

    /// `φ` on each generator.
    pub fn generator_values(&self, ctx: &GroupContext) -> Vec<Value> {
        ctx.abelianization().projection.iter().map(|row| self.evaluate_coords(row)).collect()
    }

    /// Injective on `ℤ^r`: the columns are ℚ-linearly independent in the
    /// coordinate space of the value field.
    pub fn is_irrational(&self) -> bool {
        let rows = PRIMES.len() + 1;
        let m: Vec<Vec<Rational>> = self.columns.iter().map(|c| c.coords_padded(rows)).collect();
        rational_rank(m) == self.rank()
    }

    /// Integer coefficients, if every column is an integer.
    pub fn as_integral(&self) -> Option<Vec<i64>> {
        self.columns
            .iter()
            .map(|v| v.as_rational().filter(|q| q.is_integer()).and_then(|q| q.to_integer().to_i64()))
            .collect()
    }

    /// Rescales a rational character to a primitive integral one, returning
    /// the positive factor used (1 when already primitive).
    pub fn primitive(&self) -> Option<(Character, Rational)> {
        if !self.is_rational() || self.is_zero() {
            return None;
        }
        let qs: Vec<Rational> = self.columns.iter().map(|v| v.coord(0)).collect();
        let den = qs.iter().fold(BigInt::one(), |acc, q| num::integer::lcm(acc, q.denom().clone()));
        let ints: Vec<BigInt> = qs.iter().map(|q| (q * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, n| num::integer::gcd(acc, n.clone()));
        let factor = Rational::new(den, g.abs());
        Some((self.scale(&factor), factor))
    }

    /// `ψ^q(h) = ψ(s(q) h s(q)⁻¹)` for a character on a subgroup context.
    pub fn conjugate(&self, h: &GroupContext, q: usize) -> Result<Character, CharacterError> {
        self.check_rank(h)?;
        if q == 0 {
            return Ok(self.clone());
        }
        let eng = h.subgroup_engine().ok_or_else(|| CharacterError::Parse("not a subgroup context".into()))?;
        let ab = h.abelianization();
        let mut columns = Vec::with_capacity(ab.rank);
        for s in &ab.section {
            let w: Word = s
                .iter()
                .enumerate()
                .flat_map(|(g, &e)| Word::gen(g).pow(e).0)
                .collect();
            let c = eng.conjugate(q, &w)?;
            columns.push(self.evaluate(h, &c));
        }
        Ok(Character { columns, label: self.label.clone() })
    }

    /// Restriction to a subgroup context along its inclusion.
    pub fn restrict(&self, parent: &GroupContext, h: &GroupContext) -> Result<Character, CharacterError> {
        self.check_rank(parent)?;
        let eng = h.subgroup_engine().ok_or_else(|| CharacterError::Parse("not a subgroup context".into()))?;
        let ab = h.abelianization();
        let mut columns = Vec::with_capacity(ab.rank);
        for s in &ab.section {
            let w: Word = s.iter().enumerate().flat_map(|(g, &e)| Word::gen(g).pow(e).0).collect();
            columns.push(self.evaluate(parent, &eng.include(&w)?));
        }
        Ok(Character { columns, label: self.label.clone() })
    }

    pub fn to_file(&self) -> CharacterFile {
        let k = self.basis_len();
        let coeffs = (0..=k)
            .map(|i| self.columns.iter().map(|c| format_rational(&c.coord(i))).collect())
            .collect();
        CharacterFile { rank: self.rank(), coeffs, basis_primes: PRIMES[..k].to_vec(), label: self.label.clone() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Character, CharacterError> {
        let f: CharacterFile = serde_json::from_str(text).map_err(|e| CharacterError::Parse(e.to_string()))?;
        f.into_character()
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.columns.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `{ "rank": r, "coeffs": [[..r entries..], ..k+1 rows..], "basis_primes": [..k..] }`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CharacterFile {
    pub rank: usize,
    pub coeffs: Vec<Vec<String>>,
    #[serde(default)]
    pub basis_primes: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CharacterFile {
    pub fn into_character(self) -> Result<Character, CharacterError> {
        let k = self.basis_primes.len();
        if k > PRIMES.len() || self.basis_primes[..] != PRIMES[..k] {
            return Err(CharacterError::BasisPrimes);
        }
        if self.coeffs.len() != k + 1 {
            return Err(CharacterError::Parse(format!("expected {} coefficient rows, found {}", k + 1, self.coeffs.len())));
        }
        if let Some(row) = self.coeffs.iter().find(|row| row.len() != self.rank) {
            return Err(CharacterError::Parse(format!("coefficient row has {} entries, rank is {}", row.len(), self.rank)));
        }
        let mut columns = Vec::with_capacity(self.rank);
        for j in 0..self.rank {
            let c = self.coeffs.iter().map(|row| parse_rational(&row[j])).collect::<Result<Vec<_>, _>>()?;
            columns.push(Value::from_coords(c)?);
        }
        Ok(Character { columns, label: self.label })
    }
}

/// Rank of a list of rational vectors.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// The biordering on `ℤ^r`: by `φ`-value, ties broken lexicographically
/// from the last coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleOrder {
    pub character: Character,
}

impl CompatibleOrder {
    pub fn new(character: Character) -> Self {
        CompatibleOrder { character }
    }

    /// Ties are broken by the sign of the last nonzero coordinate of
    /// `a - b`, so every basis vector is positive and `e_1 < e_2 < …`.
    pub fn compare_coords(&self, a: &[i64], b: &[i64]) -> Ordering {
        let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.character
            .evaluate_coords(&diff)
            .signum()
            .then_with(|| diff.iter().rev().find(|&&d| d != 0).map_or(Ordering::Equal, |d| d.cmp(&0)))
    }

    /// Compares two elements; elements with the same image in `ℤ^r` are
    /// equal in this order.
    pub fn compare(&self, ctx: &GroupContext, g: &Word, h: &Word) -> Ordering {
        self.compare_coords(&ctx.abelian_coords(g), &ctx.abelian_coords(h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::quotient::{FiniteGroup, FiniteQuotient};
    use crate::groups::subgroup::subgroup_context;
    use crate::groups::Letter;
    use crate::value::rat;
    use proptest::prelude::*;

    fn phi_1_sqrt2() -> Character {
        Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1))])
    }

    #[test]
    fn evaluate_examples() {
        let ctx = GroupContext::parse("raag { a, b; a-b }").unwrap();
        let phi = phi_1_sqrt2();
        assert_eq!(phi.evaluate(&ctx, &Word::gen(0)), Value::int(1));
        assert!(phi.evaluate(&ctx, &Word::empty()).is_zero());
        let w = Word(vec![Letter::neg(0), Letter::pos(1)]);
        assert_eq!(phi.evaluate(&ctx, &w).to_string(), "-1 + √2");
    }

    #[test]
    fn irrationality() {
        assert!(phi_1_sqrt2().is_irrational());
        assert!(!Character::integral(&[1, 1]).is_irrational());
        assert!(!Character::integral(&[2, 3]).is_irrational());
        assert!(Character::integral(&[5]).is_irrational());
    }

    #[test]
    fn compare_examples() {
        let ctx = GroupContext::parse("raag { a, b; a-b }").unwrap();
        let o = CompatibleOrder::new(phi_1_sqrt2());
        assert_eq!(o.compare(&ctx, &Word::gen(0), &Word::gen(1)), Ordering::Less);
        assert_eq!(o.compare(&ctx, &Word::gen(0), &Word::gen(0)), Ordering::Equal);
        let zero = CompatibleOrder::new(Character::integral(&[0, 0]));
        assert_eq!(zero.compare(&ctx, &Word::gen(0), &Word::gen(1)), Ordering::Less);
        assert_eq!(zero.compare_coords(&[1, 0], &[0, 0]), Ordering::Greater);
    }

    #[test]
    fn json_round_trip() {
        let phi = phi_1_sqrt2();
        let f = phi.to_file();
        assert_eq!(f.coeffs, vec![vec!["1", "0"], vec!["0", "1"]]);
        assert_eq!(Character::from_json(&phi.to_json().to_string()).unwrap(), phi);
        let bad = r#"{"rank": 1, "coeffs": [["1"], ["1"]], "basis_primes": [3]}"#;
        assert_eq!(Character::from_json(bad), Err(CharacterError::BasisPrimes));
        let frac = r#"{"rank": 2, "coeffs": [["1/2", "-3"]], "basis_primes": []}"#;
        assert_eq!(Character::from_json(frac).unwrap().to_string(), "(1/2, -3)");
    }

    #[test]
    fn primitive_normalization() {
        let (p, f) = Character::rational(&[crate::value::ratio(2, 3), rat(4)]).primitive().unwrap();
        assert_eq!(p.as_integral(), Some(vec![1, 6]));
        assert_eq!(f, crate::value::ratio(3, 2));
    }

    fn f2_index_two() -> (GroupContext, GroupContext) {
        let g = GroupContext::parse("raag { a, b; }").unwrap();
        let q = FiniteQuotient::new(g.presentation(), FiniteGroup::cyclic(2), vec![1, 0], None).unwrap();
        let h = subgroup_context(&g, &q).unwrap();
        (g, h)
    }

    #[test]
    fn restricted_characters_are_conjugation_invariant() {
        let (g, h) = f2_index_two();
        let phi = Character::integral(&[2, -3]);
        let psi = phi.restrict(&g, &h).unwrap();
        assert_eq!(psi.conjugate(&h, 1).unwrap(), psi);
        assert_eq!(psi.conjugate(&h, 0).unwrap(), psi);
    }

    #[test]
    fn conjugation_on_rank_three_kernel() {
        // H = ⟨b_0, a_1, b_1⟩ with b_0 = b, a_1 = a², b_1 = a b a⁻¹; conjugation
        // by a swaps b_0 and b_1 and fixes a_1.
        let (_, h) = f2_index_two();
        assert_eq!(h.names(), &["b_0", "a_1", "b_1"]);
        let psi = Character::integral(&[1, 5, 7]);
        let c = psi.conjugate(&h, 1).unwrap();
        assert_eq!(c, Character::integral(&[7, 5, 1]));
        // (ψ^q)^q = ψ^{q²} = ψ
        assert_eq!(c.conjugate(&h, 1).unwrap(), psi);
    }

    proptest! {
        #[test]
        fn evaluate_is_homomorphism(u in prop::collection::vec((0usize..3, any::<bool>()), 0..8),
                                    v in prop::collection::vec((0usize..3, any::<bool>()), 0..8)) {
            let ctx = GroupContext::parse("raag { a, b, z; a-z, b-z }").unwrap();
            let phi = Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1)), Value::sqrt_prime(1, rat(-2))]);
            let u: Word = u.into_iter().map(|(g, i)| Letter::new(g, i)).collect();
            let v: Word = v.into_iter().map(|(g, i)| Letter::new(g, i)).collect();
            let uv = ctx.mul_nf(&ctx.nf(u.letters()), &ctx.nf(v.letters()));
            prop_assert_eq!(phi.evaluate(&ctx, &uv), &phi.evaluate(&ctx, &u) + &phi.evaluate(&ctx, &v));
        }

        #[test]
        fn irrational_characters_have_no_kernel(v in prop::collection::vec(-10i64..=10, 3)) {
            let phi = Character::new(vec![Value::int(1), Value::sqrt_prime(0, rat(1)), Value::sqrt_prime(1, rat(3))]);
            prop_assume!(v.iter().any(|&x| x != 0));
            prop_assert!(!phi.evaluate_coords(&v).is_zero());
        }

        #[test]
        fn order_is_total_and_invariant(a in prop::collection::vec(-5i64..=5, 2), b in prop::collection::vec(-5i64..=5, 2),
                                       c in prop::collection::vec(-5i64..=5, 2), rational in any::<bool>()) {
            let phi = if rational { Character::integral(&[1, -1]) } else { phi_1_sqrt2() };
            let o = CompatibleOrder::new(phi);
            prop_assert_eq!(o.compare_coords(&a, &b), o.compare_coords(&b, &a).reverse());
            prop_assert_eq!(o.compare_coords(&a, &b) == Ordering::Equal, a == b);
            if o.compare_coords(&a, &b) != Ordering::Greater && o.compare_coords(&b, &c) != Ordering::Greater {
                prop_assert_ne!(o.compare_coords(&a, &c), Ordering::Greater);
            }
            let shift = |x: &[i64]| -> Vec<i64> { x.iter().zip(&c).map(|(p, q)| p + q).collect() };
            prop_assert_eq!(o.compare_coords(&shift(&a), &shift(&b)), o.compare_coords(&a, &b));
        }
    }
}
