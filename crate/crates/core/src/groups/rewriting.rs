//! User-supplied string rewriting systems with a local-confluence check.

use std::cmp::Ordering;

use super::word::{Letter, Word};
use super::GroupError;

/// Total reduction orders on words. Both are compatible with concatenation
/// and well-founded, so a system whose rules all decrease terminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReductionOrder {
    #[default]
    Shortlex,
    /// Recursive path order on strings: compare last letters, descending
    /// recursively. Lets a rule grow a word as long as it moves a larger
    /// letter to the right (e.g. `a t^-1 -> t^-1 a a`).
    Recursive,
}

impl ReductionOrder {
    pub fn compare(self, u: &[Letter], v: &[Letter]) -> Ordering {
        match self {
            ReductionOrder::Shortlex => u.len().cmp(&v.len()).then_with(|| u.cmp(v)),
            ReductionOrder::Recursive => recursive_cmp(u, v),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReductionOrder::Shortlex => "shortlex",
            ReductionOrder::Recursive => "recursive",
        }
    }
}

fn recursive_gt(u: &[Letter], v: &[Letter]) -> bool {
    if u == v {
        return false;
    }
    let (Some((&a, u1)), Some((&b, v1))) = (u.split_last(), v.split_last()) else {
        return v.is_empty();
    };
    match a.cmp(&b) {
        Ordering::Equal => recursive_gt(u1, v1),
        Ordering::Greater => u == v1 || recursive_gt(u, v1),
        Ordering::Less => u1 == v || recursive_gt(u1, v),
    }
}

fn recursive_cmp(u: &[Letter], v: &[Letter]) -> Ordering {
    if u == v {
        Ordering::Equal
    } else if recursive_gt(u, v) {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

pub const DEFAULT_STEP_BUDGET: usize = 5_000_000;
/// Critical pairs whose overlap word is longer than this are not examined.
pub const CONFLUENCE_CHECK_LENGTH: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewritingSystem {
    n: usize,
    rules: Vec<Rule>,
    order: ReductionOrder,
    /// Rule indices bucketed by the last letter of the left-hand side.
    by_last: Vec<Vec<usize>>,
}

impl RewritingSystem {
    /// Checks that every rule decreases in `order`; confluence is checked
    /// separately by [`RewritingSystem::check_local_confluence`].
    pub fn new(n: usize, rules: Vec<Rule>, order: ReductionOrder) -> Result<Self, GroupError> {
        let mut by_last = vec![Vec::new(); 2 * n];
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.is_empty() {
                return Err(GroupError::EngineRejected(format!("rule {i} has an empty left-hand side")));
            }
            if order.compare(r.lhs.letters(), r.rhs.letters()) != Ordering::Greater {
                return Err(GroupError::EngineRejected(format!(
                    "rule {i} does not decrease in the {} order",
                    order.name()
                )));
            }
            let last = r.lhs.letters()[r.lhs.len() - 1];
            by_last[last.code() as usize].push(i);
        }
        Ok(RewritingSystem { n, rules, order, by_last })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn order(&self) -> ReductionOrder {
        self.order
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    /// Free reduction interleaved with rule application. The output stack is
    /// kept irreducible, so only its suffixes need matching.
    pub fn normalize(&self, letters: &[Letter], budget: usize) -> Result<Word, GroupError> {
        let mut input: Vec<Letter> = letters.iter().rev().copied().collect();
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        let mut steps = 0usize;
        while let Some(x) = input.pop() {
            if out.last() == Some(&x.inverse()) {
                out.pop();
                continue;
            }
            out.push(x);
            for &ri in &self.by_last[x.code() as usize] {
                let lhs = self.rules[ri].lhs.letters();
                if out.ends_with(lhs) {
                    steps += 1;
                    if steps > budget {
                        return Err(GroupError::StepBudgetExceeded(budget));
                    }
                    out.truncate(out.len() - lhs.len());
                    input.extend(self.rules[ri].rhs.letters().iter().rev());
                    break;
                }
            }
        }
        Ok(Word(out))
    }

    /// Resolves every critical pair (including those with the implicit free
    /// cancellation rules) whose overlap word has length ≤ `max_len`.
    pub fn check_local_confluence(&self, max_len: usize) -> Result<(), GroupError> {
        let mut all: Vec<(Vec<Letter>, Vec<Letter>)> = self
            .rules
            .iter()
            .map(|r| (r.lhs.0.clone(), r.rhs.0.clone()))
            .collect();
        for g in 0..self.n {
            for x in [Letter::pos(g), Letter::neg(g)] {
                all.push((vec![x, x.inverse()], vec![]));
            }
        }
        let budget = DEFAULT_STEP_BUDGET;
        let join = |a: Vec<Letter>, b: Vec<Letter>, overlap: &[Letter]| -> Result<(), GroupError> {
            let na = self.normalize(&a, budget)?;
            let nb = self.normalize(&b, budget)?;
            if na != nb {
                return Err(GroupError::NotConfluent { overlap: Word(overlap.to_vec()) });
            }
            Ok(())
        };
        for (l1, r1) in &all {
            for (l2, r2) in &all {
                // suffix of l1 overlaps prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let total = l1.len() + l2.len() - k;
                    if total > max_len {
                        continue;
                    }
                    let overlap: Vec<Letter> = l1.iter().chain(&l2[k..]).copied().collect();
                    let a: Vec<Letter> = r1.iter().chain(&l2[k..]).copied().collect();
                    let b: Vec<Letter> = l1[..l1.len() - k].iter().chain(r2).copied().collect();
                    join(a, b, &overlap)?;
                }
                // l2 occurs inside l1
                if l1 != l2 && l2.len() <= l1.len() && l1.len() <= max_len {
                    for i in 0..=l1.len() - l2.len() {
                        if l1[i..i + l2.len()] != l2[..] {
                            continue;
                        }
                        let b: Vec<Letter> = l1[..i]
                            .iter()
                            .chain(r2)
                            .chain(&l1[i + l2.len()..])
                            .copied()
                            .collect();
                        join(r1.clone(), b, l1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // a=0, t=1; lowercase generator, uppercase inverse
    fn w(s: &str) -> Word {
        s.chars()
            .map(|c| {
                let g = match c.to_ascii_lowercase() {
                    'a' => 0,
                    't' => 1,
                    _ => panic!(),
                };
                Letter::new(g, c.is_uppercase())
            })
            .collect()
    }

    fn rule(l: &str, r: &str) -> Rule {
        Rule { lhs: w(l), rhs: w(r) }
    }

    fn bs12() -> RewritingSystem {
        RewritingSystem::new(
            2,
            vec![rule("aat", "ta"), rule("aT", "Taa"), rule("At", "atA"), rule("AT", "TAA")],
            ReductionOrder::Recursive,
        )
        .unwrap()
    }

    #[test]
    fn recursive_order_accepts_growing_rules() {
        assert_eq!(ReductionOrder::Recursive.compare(&w("aT").0, &w("Taa").0), Ordering::Greater);
        assert_eq!(ReductionOrder::Shortlex.compare(&w("aT").0, &w("Taa").0), Ordering::Less);
    }

    #[test]
    fn bs12_is_locally_confluent() {
        bs12().check_local_confluence(CONFLUENCE_CHECK_LENGTH).unwrap();
    }

    #[test]
    fn bs12_relator_is_trivial() {
        let s = bs12();
        assert!(s.normalize(&w("taTAA").0, 1000).unwrap().is_empty());
        // t a t^-1 = a^2
        assert_eq!(s.normalize(&w("taT").0, 1000).unwrap(), w("aa"));
    }

    #[test]
    fn missing_rule_is_not_confluent() {
        let s = RewritingSystem::new(
            2,
            vec![rule("aat", "ta"), rule("aT", "Taa"), rule("AT", "TAA")],
            ReductionOrder::Recursive,
        )
        .unwrap();
        assert!(matches!(
            s.check_local_confluence(CONFLUENCE_CHECK_LENGTH),
            Err(GroupError::NotConfluent { .. })
        ));
    }

    #[test]
    fn increasing_rule_rejected() {
        let r = RewritingSystem::new(2, vec![rule("ta", "aat")], ReductionOrder::Shortlex);
        assert!(matches!(r, Err(GroupError::EngineRejected(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let s = bs12();
        // a T^8 doubles the a-block eight times
        let word = w("aTTTTTTTT");
        assert!(matches!(s.normalize(&word.0, 10), Err(GroupError::StepBudgetExceeded(10))));
        assert_eq!(s.normalize(&word.0, 100_000).unwrap().len(), 8 + 256);
    }
}
