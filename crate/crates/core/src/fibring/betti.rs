//! `β₁⁽²⁾` of free abelian groups, where the Linnell skew-field is the
//! field of fractions of the Laurent polynomial ring.

use std::collections::BTreeMap;

use num::Zero;

use crate::chain::ChainComplex;
use crate::ring::RingElement;
use crate::value::Rational;

use super::FibringError;

/// Laurent polynomial keyed by exponent vectors.
type Laurent = BTreeMap<Vec<i64>, Rational>;

fn to_laurent(x: &RingElement) -> Laurent {
    let ctx = x.context();
    let mut out = Laurent::new();
    for (g, c) in x.terms() {
        let e = ctx.abelian_coords(g);
        let slot = out.entry(e).or_insert_with(Rational::zero);
        *slot += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (e, c) in a {
        for (f, d) in b {
            let k: Vec<i64> = e.iter().zip(f).map(|(x, y)| x + y).collect();
            *out.entry(k).or_insert_with(Rational::zero) += c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn sub(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert_with(Rational::zero) -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Rank over the fraction field by cross-multiplying elimination, which
/// never divides and so stays inside the polynomial ring.
fn rank(mut m: Vec<Vec<Laurent>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_empty()) else { continue };
        m.swap(r, p);
        for i in (r + 1)..rows {
            if m[i][c].is_empty() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            for j in c..cols {
                m[i][j] = sub(&mul(&a, &m[i][j]), &mul(&b, &m[r][j]));
            }
        }
        r += 1;
    }
    r
}

/// `|gens| - rank d2 - rank d1` for a free abelian presentation.
pub fn betti1_abelian(cc: &ChainComplex) -> Result<Rational, FibringError> {
    if !cc.context().presentation().is_free_abelian() {
        return Err(FibringError::NotAbelian);
    }
    let d2: Vec<Vec<Laurent>> = cc.d2().iter().map(|row| row.iter().map(to_laurent).collect()).collect();
    let d1: Vec<Vec<Laurent>> = cc.d1().iter().map(|x| vec![to_laurent(x)]).collect();
    let n = cc.generators() as i64;
    Ok(Rational::from_integer((n - rank(d2) as i64 - rank(d1) as i64).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupContext;

    fn betti(src: &str) -> Result<Rational, FibringError> {
        let ctx = GroupContext::parse(src).unwrap();
        betti1_abelian(&ChainComplex::build(&ctx).unwrap())
    }

    #[test]
    fn free_abelian_groups_vanish() {
        for src in ["raag { t; }", "raag { a, b; a-b }", "raag { a, b, c; a-b, a-c, b-c }"] {
            assert_eq!(betti(src).unwrap(), Rational::zero());
        }
        assert_eq!(betti("raag { a, b; }").unwrap_err(), FibringError::NotAbelian);
    }

    #[test]
    fn ranks_of_small_matrices() {
        let one: Laurent = [(vec![0], Rational::from_integer(1.into()))].into();
        let t: Laurent = [(vec![1], Rational::from_integer(1.into()))].into();
        assert_eq!(rank(vec![vec![one.clone(), t.clone()], vec![t.clone(), mul(&t, &t)]]), 1);
        assert_eq!(rank(vec![vec![one.clone(), t.clone()], vec![t, one]]), 2);
        assert_eq!(rank(vec![vec![Laurent::new()]]), 0);
    }
}
