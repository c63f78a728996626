//! Finite quotients `β: G → Q` given by multiplication tables, with
//! set-theoretic sections `s: Q → G`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::parse::parse_word;
use super::presentation::GroupPresentation;
use super::word::{Letter, Word};
use super::GroupError;

pub const DEFAULT_MAX_QUOTIENT: usize = 64;

/// Bound on `|Q|`, read from `NOVIKOV_MAX_Q`.
pub fn max_quotient_order() -> usize {
    std::env::var("NOVIKOV_MAX_Q")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUOTIENT)
}

/// A finite group as a multiplication table with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        let bad = |m: String| Err(GroupError::QuotientInvalid(m));
        if n == 0 {
            return bad("empty table".into());
        }
        let bound = max_quotient_order();
        if n > bound {
            return Err(GroupError::QuotientTooLarge { order: n, bound });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {i} has length {}, expected {n}", row.len()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return bad(format!("entry {x} in row {i} out of range"));
            }
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return bad(format!("0 is not an identity for {x}"));
            }
        }
        let mut inverses = vec![0; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == 0) {
                Some(y) if table[y][x] == 0 => inverses[x] = y,
                _ => return bad(format!("element {x} has no two-sided inverse")),
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return bad(format!("not associative at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(table).expect("cyclic table")
    }

    /// Direct product; `(a, b)` is encoded as `a·|B| + b`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::new(table).expect("product table")
    }

    /// Dihedral group of order `2n`: `r^i` is `i`, `r^i f` is `n + i`.
    pub fn dihedral(n: usize) -> Self {
        let elt = |i: usize, f: bool| if f { n + i } else { i };
        let table = (0..2 * n)
            .map(|x| {
                let (i, fx) = (x % n, x >= n);
                (0..2 * n)
                    .map(|y| {
                        let (j, fy) = (y % n, y >= n);
                        // r^i f^a · r^j f^b = r^(i ± j) f^(a+b)
                        let k = if fx { (i + n - j) % n } else { (i + j) % n };
                        elt(k, fx ^ fy)
                    })
                    .collect()
            })
            .collect();
        Self::new(table).expect("dihedral table")
    }

    /// The group generated by permutations of `{0, …, d-1}`, elements in
    /// breadth-first order from the identity.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        let d = gens.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..d).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p = compose(&elems[i], g);
                if !index.contains_key(&p) {
                    if elems.len() >= max_quotient_order() {
                        return Err(GroupError::QuotientTooLarge { order: elems.len() + 1, bound: max_quotient_order() });
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        let table = elems
            .iter()
            .map(|x| elems.iter().map(|y| index[&compose(x, y)]).collect())
            .collect();
        Self::new(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// `β: G → Q` with a section `s`, `s(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    group: FiniteGroup,
    images: Vec<usize>,
    section: Vec<Word>,
    pub kernel_name: String,
}

impl FiniteQuotient {
    /// Checks that `images` kill every relator and generate `Q`, and that the
    /// section (shortlex-least preimages if absent) is a section with
    /// `s(1) = 1`.
    pub fn new(
        p: &GroupPresentation,
        group: FiniteGroup,
        images: Vec<usize>,
        section: Option<Vec<Word>>,
    ) -> Result<Self, GroupError> {
        let bad = |m: String| Err(GroupError::QuotientInvalid(m));
        if images.len() != p.rank() {
            return bad(format!("{} images for {} generators", images.len(), p.rank()));
        }
        if let Some(&x) = images.iter().find(|&&x| x >= group.order()) {
            return bad(format!("image {x} out of range"));
        }
        let mut q = FiniteQuotient { group, images, section: Vec::new(), kernel_name: "H".into() };
        for (i, r) in p.relators.iter().enumerate() {
            if q.image(r) != 0 {
                return bad(format!("relator {} does not map to the identity", p.word_to_string(&p.relators[i])));
            }
        }
        let section = match section {
            Some(s) => s,
            None => q.shortlex_section()?,
        };
        if section.len() != q.order() {
            return bad(format!("section has {} entries, expected {}", section.len(), q.order()));
        }
        if !section[0].free_reduce().is_empty() {
            return bad("section of the identity must be the empty word".into());
        }
        for (x, w) in section.iter().enumerate() {
            if w.max_gen().is_some_and(|g| g >= p.rank()) {
                return bad(format!("section word for {x} uses an unknown generator"));
            }
            if q.image(w) != x {
                return bad(format!("section word for {x} maps to {}", q.image(w)));
            }
        }
        q.section = section;
        q.section[0] = Word::empty();
        Ok(q)
    }

    /// Shortlex-least preimage of every element, by breadth-first search.
    fn shortlex_section(&self) -> Result<Vec<Word>, GroupError> {
        let n = self.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let w = words[x].clone().expect("visited");
            for g in 0..self.images.len() {
                for l in [Letter::pos(g), Letter::neg(g)] {
                    let y = self.group.mul(x, self.letter_image(l));
                    if words[y].is_none() {
                        let mut v = w.clone();
                        v.0.push(l);
                        words[y] = Some(v);
                        queue.push_back(y);
                    }
                }
            }
        }
        words
            .into_iter()
            .enumerate()
            .map(|(x, w)| w.ok_or_else(|| GroupError::QuotientInvalid(format!("images do not generate element {x}"))))
            .collect()
    }

    /// Replaces the section without any check. Only for negative controls:
    /// downstream verifiers must reject the result.
    pub fn with_section_unchecked(mut self, section: Vec<Word>) -> Self {
        self.section = section;
        self
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.group.mul(x, y)
    }

    pub fn inv(&self, x: usize) -> usize {
        self.group.inv(x)
    }

    pub fn letter_image(&self, l: Letter) -> usize {
        let x = self.images[l.gen()];
        if l.is_inverse() {
            self.group.inv(x)
        } else {
            x
        }
    }

    pub fn image(&self, w: &Word) -> usize {
        w.letters().iter().fold(0, |acc, &l| self.group.mul(acc, self.letter_image(l)))
    }

    pub fn section(&self, q: usize) -> &Word {
        &self.section[q]
    }

    pub fn sections(&self) -> &[Word] {
        &self.section
    }

    pub fn from_json(text: &str, p: &GroupPresentation) -> Result<Self, GroupError> {
        let f: QuotientFile =
            serde_json::from_str(text).map_err(|e| GroupError::QuotientInvalid(format!("JSON: {e}")))?;
        let group = FiniteGroup::new(f.table)?;
        let images = match f.images {
            Images::List(v) => v,
            Images::Named(m) => {
                let mut v = vec![usize::MAX; p.rank()];
                for (name, x) in m {
                    let g = p
                        .generator_index(&name)
                        .ok_or_else(|| GroupError::QuotientInvalid(format!("unknown generator `{name}`")))?;
                    v[g] = x;
                }
                if let Some(g) = v.iter().position(|&x| x == usize::MAX) {
                    return Err(GroupError::QuotientInvalid(format!("no image for `{}`", p.generators[g])));
                }
                v
            }
        };
        let section = match f.section {
            None => None,
            Some(Section::List(v)) => Some(v.iter().map(|s| parse_word(s, &p.generators)).collect::<Result<_, _>>()?),
            Some(Section::Indexed(m)) => {
                let mut v = vec![None; group.order()];
                for (k, s) in m {
                    let i: usize = k
                        .parse()
                        .ok()
                        .filter(|&i| i < group.order())
                        .ok_or_else(|| GroupError::QuotientInvalid(format!("bad section index `{k}`")))?;
                    v[i] = Some(parse_word(&s, &p.generators)?);
                }
                v[0].get_or_insert_with(Word::empty);
                Some(
                    v.into_iter()
                        .enumerate()
                        .map(|(i, w)| w.ok_or_else(|| GroupError::QuotientInvalid(format!("no section word for {i}"))))
                        .collect::<Result<_, _>>()?,
                )
            }
        };
        let mut q = Self::new(p, group, images, section)?;
        if let Some(k) = f.kernel_name {
            q.kernel_name = k;
        }
        Ok(q)
    }

    pub fn to_json(&self, p: &GroupPresentation) -> serde_json::Value {
        let images: BTreeMap<&str, usize> =
            p.generators.iter().map(String::as_str).zip(self.images.iter().copied()).collect();
        serde_json::json!({
            "table": self.group.table,
            "images": images,
            "section": self.section.iter().map(|w| p.word_to_string(w)).collect::<Vec<_>>(),
            "kernel_name": self.kernel_name,
        })
    }
}

#[derive(Deserialize, Serialize)]
struct QuotientFile {
    table: Vec<Vec<usize>>,
    images: Images,
    #[serde(default)]
    section: Option<Section>,
    #[serde(default)]
    kernel_name: Option<String>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum Images {
    List(Vec<usize>),
    Named(BTreeMap<String, usize>),
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum Section {
    List(Vec<String>),
    Indexed(BTreeMap<String, String>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_presentation;

    #[test]
    fn tables_are_groups() {
        for g in [FiniteGroup::cyclic(5), FiniteGroup::dihedral(4), FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3))] {
            FiniteGroup::new(g.table().to_vec()).unwrap();
        }
        let s3 = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.order(), 6);
    }

    #[test]
    fn rejects_non_associative() {
        // a Latin square with identity 0 that is not a group table
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::new(t), Err(GroupError::QuotientInvalid(_))));
    }

    #[test]
    fn rejects_non_homomorphism() {
        let z2 = parse_presentation("raag { a, b; a-b }").unwrap();
        let s3 = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        // two non-commuting elements of S3
        let r = FiniteQuotient::new(&z2, s3, vec![1, 2], None);
        assert!(matches!(r, Err(GroupError::QuotientInvalid(_))));
    }

    #[test]
    fn default_section_is_shortlex() {
        let p = parse_presentation("raag { t; }").unwrap();
        let q = FiniteQuotient::new(&p, FiniteGroup::cyclic(4), vec![1], None).unwrap();
        let s: Vec<String> = q.sections().iter().map(|w| p.word_to_string(w)).collect();
        assert_eq!(s, vec!["1", "t", "t^2", "t^-1"]);
    }

    #[test]
    fn json_round_trip() {
        let p = parse_presentation("raag { a, b; }").unwrap();
        let text = r#"{"table": [[0,1],[1,0]], "images": {"a": 1, "b": 0}, "section": {"1": "a^-1"}}"#;
        let q = FiniteQuotient::from_json(text, &p).unwrap();
        assert_eq!(p.word_to_string(q.section(1)), "a^-1");
        let again = FiniteQuotient::from_json(&q.to_json(&p).to_string(), &p).unwrap();
        assert_eq!(q, again);
    }

    #[test]
    fn bound_is_enforced() {
        let t: Vec<Vec<usize>> = (0..70).map(|i| (0..70).map(|j| (i + j) % 70).collect()).collect();
        assert!(matches!(FiniteGroup::new(t), Err(GroupError::QuotientTooLarge { order: 70, .. })));
    }
}
