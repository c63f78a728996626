//! Free abelianization via Smith normal form of the relator exponent matrix.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::word::Word;

/// `G → ℤ^r`, the quotient of `G` by the torsion-closure of `[G, G]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub rank: usize,
    /// One row per generator: the image of that generator in `ℤ^rank`.
    pub projection: Vec<Vec<i64>>,
    /// Invariant factors `> 1` of the torsion subgroup.
    pub torsion: Vec<u64>,
    /// One row per free coordinate: a generator exponent vector projecting
    /// onto the corresponding unit vector.
    #[serde(skip)]
    pub section: Vec<Vec<i64>>,
}

impl Abelianization {
    pub fn project(&self, exponents: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.rank];
        for (g, &e) in exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.projection[g]) {
                *o += e * p;
            }
        }
        out
    }
}

pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    /// Column transform `V` with `U·A·V = D`.
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

/// Smith normal form of an `m × n` integer matrix, tracking the column
/// transform and its inverse. Row transforms are not recorded.
pub fn smith_normal_form(a: &[Vec<i64>], n: usize) -> SmithForm {
    let m = a.len();
    let mut a: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let identity = |k: usize| -> Vec<Vec<BigInt>> {
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    };
    let mut v = identity(n);
    let mut v_inv = identity(n);

    let swap_cols = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, vi: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };
    // col_i += c · col_j
    let add_col = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, vi: &mut Vec<Vec<BigInt>>, i: usize, j: usize, c: &BigInt| {
        for row in a.iter_mut() {
            let t = &row[j] * c;
            row[i] += t;
        }
        for row in v.iter_mut() {
            let t = &row[j] * c;
            row[i] += t;
        }
        let ri = vi[i].clone();
        for (x, y) in vi[j].iter_mut().zip(ri) {
            *x -= y * c;
        }
    };

    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        let mut dirty = false;
        for i in t + 1..m {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                let pivot_row = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= y * &q;
                }
            }
            dirty |= !a[i][t].is_zero();
        }
        for j in t + 1..n {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                add_col(&mut a, &mut v, &mut v_inv, j, t, &-q);
            }
            dirty |= !a[t][j].is_zero();
        }
        if dirty {
            continue;
        }
        // pivot must divide the whole trailing block
        let mut fixed = false;
        'outer: for i in t + 1..m {
            for j in t + 1..n {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    let row = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(row) {
                        *x += y;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if a[t][t].is_negative() {
            a[t][t] = -a[t][t].clone();
            // negating a column: V column and V⁻¹ row
            for row in v.iter_mut() {
                row[t] = -row[t].clone();
            }
            for x in v_inv[t].iter_mut() {
                *x = -x.clone();
            }
            for row in a.iter_mut().skip(t + 1) {
                row[t] = -row[t].clone();
            }
        }
        diagonal.push(a[t][t].clone());
        t += 1;
    }
    SmithForm { diagonal, v, v_inv }
}

pub fn free_abelianization(n_gens: usize, relators: &[Word]) -> Abelianization {
    let rows: Vec<Vec<i64>> = relators.iter().map(|r| r.exponent_vector(n_gens)).collect();
    let snf = smith_normal_form(&rows, n_gens);
    let k = snf.diagonal.len();
    let to_i64 = |x: &BigInt| x.to_i64().expect("abelianization entries fit in i64");
    let projection = (0..n_gens)
        .map(|g| (k..n_gens).map(|j| to_i64(&snf.v[g][j])).collect())
        .collect();
    let section = (k..n_gens)
        .map(|j| snf.v_inv[j].iter().map(to_i64).collect())
        .collect();
    let torsion = snf
        .diagonal
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("invariant factor fits in u64"))
        .collect();
    Abelianization { rank: n_gens - k, projection, torsion, section }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::word::Letter;
    use proptest::prelude::*;

    fn from_exps(rows: &[Vec<i64>]) -> Vec<Word> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .flat_map(|(g, &e)| {
                        std::iter::repeat_n(Letter::new(g, e < 0), e.unsigned_abs() as usize)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn z_squared() {
        let ab = free_abelianization(2, &from_exps(&[vec![0, 0]]));
        assert_eq!(ab.rank, 2);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn abab() {
        let ab = free_abelianization(2, &from_exps(&[vec![2, 2]]));
        assert_eq!(ab.rank, 1);
        assert_eq!(ab.torsion, vec![2]);
    }

    #[test]
    fn free_group() {
        let ab = free_abelianization(2, &[]);
        assert_eq!(ab.rank, 2);
        assert_eq!(ab.project(&[3, -1]), vec![3, -1]);
    }

    // rank of an integer matrix over ℚ by fraction-free elimination
    fn rational_rank(rows: &[Vec<i64>], n: usize) -> usize {
        let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut rank = 0;
        for c in 0..n {
            let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
            a.swap(rank, p);
            for i in 0..a.len() {
                if i != rank && a[i][c] != 0 {
                    let (f, g) = (a[rank][c], a[i][c]);
                    for j in 0..n {
                        a[i][j] = a[i][j] * f - a[rank][j] * g;
                    }
                    let gcd = a[i].iter().fold(0i128, |acc, &x| num::integer::gcd(acc, x));
                    if gcd > 1 {
                        a[i].iter_mut().for_each(|x| *x /= gcd);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn projection_kills_relators_and_rank_matches(
            rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 0..4)
        ) {
            let ab = free_abelianization(3, &from_exps(&rows));
            prop_assert_eq!(ab.rank, 3 - rational_rank(&rows, 3));
            for r in &rows {
                prop_assert!(ab.project(r).iter().all(|&x| x == 0));
            }
            // section vectors project to unit vectors
            for (j, s) in ab.section.iter().enumerate() {
                let p = ab.project(s);
                for (i, x) in p.iter().enumerate() {
                    prop_assert_eq!(*x, if i == j { 1 } else { 0 });
                }
            }
        }
    }
}
