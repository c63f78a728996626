//! Normal forms for `BS(1, n) = ⟨a, t | t a t⁻¹ = aⁿ⟩` through its affine
//! model `ℤ[1/n] ⋊ ℤ`.
//!
//! The rewriting normal forms of these groups spell `aᵐ` out letter by
//! letter, so words grow exponentially in the `t`-exponent. Here a word is
//! evaluated to coordinates `(x, k)`, standing for `aˣ tᵏ`, and written back
//! as `t^-p · W(m) · t^(p+k)` where `x = m/nᵖ` and `W(m)` spells `aᵐ` in
//! base `n` (`aᵐ = aʳ · t a^(m') t⁻¹` with `m = r + n·m'`). Lengths are
//! logarithmic in `m`.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use super::word::{Letter, Word};
use super::GroupError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineEngine {
    base: usize,
    stable: usize,
    /// `-1` when the stable letter of the model is `t⁻¹`.
    sign: i64,
    n: u32,
}

impl AffineEngine {
    pub fn new(gens: usize, base: usize, stable: usize, sign: i64, n: u32) -> Result<Self, GroupError> {
        if gens != 2 || base == stable || base > 1 || stable > 1 {
            return Err(GroupError::EngineRejected("the affine engine needs exactly the two generators a, t".into()));
        }
        if n < 2 {
            return Err(GroupError::EngineRejected(format!("affine engine needs n ≥ 2, got {n}")));
        }
        Ok(AffineEngine { base, stable, sign: sign.signum(), n })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn stable(&self) -> usize {
        self.stable
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn power(&self, k: i64) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(self.n));
        if k >= 0 {
            num::pow(n, k as usize)
        } else {
            num::pow(n, (-k) as usize).recip()
        }
    }

    /// `(x, k)` with the word equal to `aˣ tᵏ`, `t` the model's stable letter.
    pub fn coordinates(&self, letters: &[Letter]) -> (BigRational, i64) {
        let mut x = BigRational::zero();
        let mut k = 0i64;
        for l in letters {
            if l.gen() == self.stable {
                k += l.sign() * self.sign;
            } else if l.sign() > 0 {
                x += self.power(k);
            } else {
                x -= self.power(k);
            }
        }
        (x, k)
    }

    fn t(&self, e: i64) -> impl Iterator<Item = Letter> {
        let l = Letter::new(self.stable, (e < 0) != (self.sign < 0));
        std::iter::repeat_n(l, e.unsigned_abs() as usize)
    }

    fn a(&self, e: i64) -> impl Iterator<Item = Letter> {
        std::iter::repeat_n(Letter::new(self.base, e < 0), e.unsigned_abs() as usize)
    }

    /// `(m, p, k)` with the word equal to `a^(m/nᵖ) tᵏ`, `p` minimal, in
    /// machine integers when they suffice.
    fn small_coordinates(&self, letters: &[Letter]) -> Option<(i128, i64, i64)> {
        let n = self.n as i128;
        let (mut k, mut kmin) = (0i64, 0i64);
        for l in letters {
            if l.gen() == self.stable {
                k += l.sign() * self.sign;
                kmin = kmin.min(k);
            }
        }
        let mut m = 0i128;
        let mut k = -kmin;
        for l in letters {
            if l.gen() == self.stable {
                k += l.sign() * self.sign;
            } else {
                let p = n.checked_pow(u32::try_from(k).ok()?)?;
                m = if l.sign() > 0 { m.checked_add(p)? } else { m.checked_sub(p)? };
            }
        }
        let mut p = -kmin;
        while p > 0 && m % n == 0 {
            m /= n;
            p -= 1;
        }
        Some((m, p, k + kmin))
    }

    fn spell(&self, m: &BigInt, out: &mut Vec<Letter>) {
        let n = BigInt::from(self.n);
        if m.abs() < n {
            out.extend(self.a(m.to_i64().expect("digit")));
            return;
        }
        let r = m % &n;
        out.extend(self.a(r.to_i64().expect("digit")));
        out.extend(self.t(1));
        self.spell(&((m - &r) / &n), out);
        out.extend(self.t(-1));
    }

    fn spell_small(&self, m: i128, out: &mut Vec<Letter>) {
        let n = self.n as i128;
        let mut digits = Vec::new();
        let mut m = m;
        while m.abs() >= n {
            let r = m % n;
            digits.push(r as i64);
            m = (m - r) / n;
        }
        for &r in &digits {
            out.extend(self.a(r));
            out.extend(self.t(1));
        }
        out.extend(self.a(m as i64));
        out.extend(self.t(-(digits.len() as i64)));
    }

    pub fn normalize(&self, letters: &[Letter]) -> Word {
        let mut raw = Vec::new();
        if let Some((m, p, k)) = self.small_coordinates(letters) {
            raw.extend(self.t(-p));
            self.spell_small(m, &mut raw);
            raw.extend(self.t(p + k));
            return Word(raw).free_reduce();
        }
        let (x, k) = self.coordinates(letters);
        let den = x.denom().clone();
        let n = BigInt::from(self.n);
        let mut p = 0i64;
        let mut scale = BigInt::one();
        while !scale.is_multiple_of(&den) {
            scale *= &n;
            p += 1;
        }
        let m = x.numer() * (scale / &den);
        raw.extend(self.t(-p));
        self.spell(&m, &mut raw);
        raw.extend(self.t(p + k));
        Word(raw).free_reduce()
    }
}
