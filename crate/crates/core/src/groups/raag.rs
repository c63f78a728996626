//! Leftmost-least normal forms in right-angled Artin groups.
//!
//! A reduced word is obtained by letter-by-letter insertion: a new letter
//! cancels against the last occurrence of its inverse that can be shuffled to
//! the end through commuting letters. Reduced words for the same element
//! differ only by commutations, so the lexicographically least rearrangement
//! of the reduced word is a unique representative.

use super::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raag {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// `blocks[g]` has bit `h` set when `h` does not commute with `g`
    /// (including `h = g`).
    blocks: Vec<u64>,
}

pub const MAX_RAAG_GENERATORS: usize = 64;

impl Raag {
    /// Edges must already be validated: in range, no loops, no duplicates.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        assert!(n <= MAX_RAAG_GENERATORS);
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut blocks = vec![full; n];
        for &(a, b) in &edges {
            blocks[a] &= !(1u64 << b);
            blocks[b] &= !(1u64 << a);
        }
        Raag { n, edges, blocks }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.blocks[a] & (1u64 << b) == 0
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    fn insert(&self, w: &mut Vec<Letter>, x: Letter) {
        for i in (0..w.len()).rev() {
            let y = w[i];
            if y.gen() == x.gen() {
                if y == x.inverse() {
                    w.remove(i);
                    return;
                }
                break;
            }
            if !self.commute(y.gen(), x.gen()) {
                break;
            }
        }
        w.push(x);
    }

    fn lexmin(&self, w: Vec<Letter>) -> Vec<Letter> {
        let mut remaining = w;
        let mut out = Vec::with_capacity(remaining.len());
        while !remaining.is_empty() {
            let mut blocked = 0u64;
            let mut best: Option<usize> = None;
            for (i, &l) in remaining.iter().enumerate() {
                if blocked & (1u64 << l.gen()) == 0 && best.is_none_or(|b| l < remaining[b]) {
                    best = Some(i);
                }
                blocked |= self.blocks[l.gen()];
                if blocked.count_ones() as usize == self.n {
                    break;
                }
            }
            let i = best.expect("first letter is always available");
            out.push(remaining.remove(i));
        }
        out
    }

    pub fn normalize(&self, letters: &[Letter]) -> Word {
        let mut w = Vec::with_capacity(letters.len());
        for &x in letters {
            self.insert(&mut w, x);
        }
        Word(self.lexmin(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, VecDeque};

    fn word(s: &str) -> Vec<Letter> {
        // lowercase = generator, uppercase = inverse; a=0, b=1, z=2
        s.chars()
            .map(|c| {
                let g = match c.to_ascii_lowercase() {
                    'a' => 0,
                    'b' => 1,
                    'z' => 2,
                    _ => panic!(),
                };
                Letter::new(g, c.is_uppercase())
            })
            .collect()
    }

    fn path() -> Raag {
        // a–z–b
        Raag::new(3, vec![(0, 2), (1, 2)])
    }

    #[test]
    fn commuting_pair_sorts() {
        let r = Raag::new(3, vec![(0, 2)]);
        assert_eq!(r.normalize(&word("za")).0, word("az"));
    }

    #[test]
    fn free_cancellation() {
        assert!(path().normalize(&word("aA")).is_empty());
        assert!(path().normalize(&word("azAZ")).is_empty());
    }

    #[test]
    fn path_example() {
        assert_eq!(path().normalize(&word("bza")).0, word("baz"));
    }

    // Every word equivalent to `w` under commutation moves and insertion or
    // deletion of cancelling pairs, restricted to length ≤ limit.
    fn closure(r: &Raag, w: Vec<Letter>, limit: usize, alphabet: &[Letter]) -> BTreeSet<Vec<Letter>> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back(w);
        while let Some(u) = queue.pop_front() {
            let mut next = Vec::new();
            for i in 0..u.len().saturating_sub(1) {
                let (x, y) = (u[i], u[i + 1]);
                if x == y.inverse() {
                    let mut v = u.clone();
                    v.drain(i..i + 2);
                    next.push(v);
                } else if x.gen() != y.gen() && r.commute(x.gen(), y.gen()) {
                    let mut v = u.clone();
                    v.swap(i, i + 1);
                    next.push(v);
                }
            }
            if u.len() + 2 <= limit {
                for i in 0..=u.len() {
                    for &x in alphabet {
                        let mut v = u.clone();
                        v.insert(i, x);
                        v.insert(i + 1, x.inverse());
                        next.push(v);
                    }
                }
            }
            for v in next {
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    #[test]
    fn normal_form_agrees_with_exhaustive_closure() {
        let r = path();
        let alphabet: Vec<Letter> = (0..3).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
        // all words of length ≤ 4, closure up to length 6
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..4 {
            let mut longer = Vec::new();
            for w in &words {
                for &x in &alphabet {
                    let mut v = w.clone();
                    v.push(x);
                    longer.push(v);
                }
            }
            words.extend(longer.into_iter().filter(|v| v.len() <= 4));
            words.sort();
            words.dedup();
        }
        for w in words.iter().filter(|w| w.len() <= 3) {
            let cls = closure(&r, w.clone(), 5, &alphabet);
            let nf = r.normalize(w);
            for u in &cls {
                assert_eq!(r.normalize(u), nf, "{w:?} ~ {u:?}");
            }
            // the normal form is the shortlex-least member of the class
            let least = cls.iter().min_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b))).unwrap();
            assert_eq!(&nf.0, least);
        }
    }
}
