//! Known BNS invariants, used only to cross-check the certifier.

use serde::{Deserialize, Serialize};

use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SigmaOracle {
    /// Free group of the given rank: `Σ` is empty from rank two on.
    Free { rank: usize },
    /// Every nonzero character.
    FreeAbelian,
    /// Right-angled Artin group: `χ ∈ Σ` iff the living subgraph
    /// `{v : χ(v) ≠ 0}` is connected and every dead vertex has a living
    /// neighbour (Meier–VanWyk).
    Raag { vertices: usize, edges: Vec<(usize, usize)> },
    /// `⟨a, t | t a t⁻¹ = a²⟩` has `Σ = {χ(t) < 0}` with the Cayley graph
    /// built from right multiplication; `sign` is the sign of `χ(t)` on
    /// `Σ`, so `+1` for the presentation with `t` inverted.
    BaumslagSolitar { t: usize, sign: i8 },
}

impl SigmaOracle {
    pub fn name(&self) -> &'static str {
        match self {
            SigmaOracle::Free { .. } => "free",
            SigmaOracle::FreeAbelian => "free-abelian",
            SigmaOracle::Raag { .. } => "meier-vanwyk",
            SigmaOracle::BaumslagSolitar { .. } => "bs12",
        }
    }

    /// Membership of a nonzero character given by its generator values;
    /// `None` for the zero character.
    pub fn contains(&self, values: &[Value]) -> Option<bool> {
        if values.iter().all(Value::is_zero) {
            return None;
        }
        Some(match self {
            SigmaOracle::Free { rank } => *rank == 1,
            SigmaOracle::FreeAbelian => true,
            SigmaOracle::Raag { vertices, edges } => living_subgraph_ok(*vertices, edges, values),
            SigmaOracle::BaumslagSolitar { t, sign } => {
                let v = &values[*t];
                if *sign < 0 { v.is_negative() } else { v.is_positive() }
            }
        })
    }
}

fn living_subgraph_ok(n: usize, edges: &[(usize, usize)], values: &[Value]) -> bool {
    let living: Vec<bool> = values.iter().take(n).map(|v| !v.is_zero()).collect();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for v in (0..n).filter(|&v| !living[v]) {
        if !adj[v].iter().any(|&u| living[u]) {
            return false;
        }
    }
    let Some(start) = (0..n).find(|&v| living[v]) else { return false };
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if living[u] && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).all(|v| !living[v] || seen[v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Value> {
        v.iter().map(|&x| Value::int(x)).collect()
    }

    #[test]
    fn raag_oracle_matches_special_cases() {
        let free = SigmaOracle::Raag { vertices: 2, edges: vec![] };
        let complete = SigmaOracle::Raag { vertices: 3, edges: vec![(0, 1), (0, 2), (1, 2)] };
        for v in [[1, 0], [0, 1], [2, -3]] {
            assert_eq!(free.contains(&ints(&v)), SigmaOracle::Free { rank: 2 }.contains(&ints(&v)));
        }
        for v in [[1, 0, 0], [0, 1, 1], [2, -3, 5]] {
            assert_eq!(complete.contains(&ints(&v)), Some(true));
        }
        assert_eq!(free.contains(&ints(&[0, 0])), None);
    }

    #[test]
    fn path_graph() {
        // a - z - b
        let path = SigmaOracle::Raag { vertices: 3, edges: vec![(0, 1), (1, 2)] };
        assert_eq!(path.contains(&ints(&[0, 1, 0])), Some(true));
        assert_eq!(path.contains(&ints(&[1, 0, 1])), Some(false));
        assert_eq!(path.contains(&ints(&[1, 0, 0])), Some(false));
        assert_eq!(path.contains(&ints(&[1, 1, 0])), Some(true));
    }
}
