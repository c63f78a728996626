use std::sync::Arc;

use super::affine::AffineEngine;
use super::raag::Raag;
use super::rewriting::RewritingSystem;
use super::subgroup::SubgroupEngine;
use super::word::Word;

#[derive(Clone, Debug)]
pub enum NormalFormEngine {
    Raag(Raag),
    Rewriting(RewritingSystem),
    /// `BS(1, n)` through its affine model.
    Affine(AffineEngine),
    /// Finite-index subgroup of another context; elements are normalized in
    /// the parent and rewritten onto the Schreier generators.
    Subgroup(Arc<SubgroupEngine>),
}

impl NormalFormEngine {
    pub fn kind(&self) -> &'static str {
        match self {
            NormalFormEngine::Raag(_) => "raag",
            NormalFormEngine::Rewriting(_) => "rewriting",
            NormalFormEngine::Affine(_) => "affine",
            NormalFormEngine::Subgroup(_) => "subgroup",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub engine: NormalFormEngine,
}

impl GroupPresentation {
    pub fn raag(generators: Vec<String>, edges: Vec<(usize, usize)>) -> Self {
        let relators = edges
            .iter()
            .map(|&(a, b)| Word::commutator(&Word::gen(a), &Word::gen(b)))
            .collect();
        let n = generators.len();
        GroupPresentation { generators, relators, engine: NormalFormEngine::Raag(Raag::new(n, edges)) }
    }

    pub fn free(generators: Vec<String>) -> Self {
        Self::raag(generators, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// True when the group is free abelian on its generators (complete RAAG).
    pub fn is_free_abelian(&self) -> bool {
        matches!(&self.engine, NormalFormEngine::Raag(r) if r.is_complete())
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    /// Canonical source text for RAAG and rewriting presentations.
    pub fn to_source(&self) -> String {
        let gens = self.generators.join(", ");
        match &self.engine {
            NormalFormEngine::Raag(r) => {
                let edges: Vec<String> = r
                    .edges()
                    .iter()
                    .map(|&(a, b)| format!("{}-{}", self.generators[a], self.generators[b]))
                    .collect();
                format!("raag {{ {gens}; {} }}", edges.join(", "))
            }
            NormalFormEngine::Rewriting(sys) => {
                let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
                let rules: Vec<String> = sys
                    .rules()
                    .iter()
                    .map(|r| format!("{} -> {}", self.word_to_string(&r.lhs), self.word_to_string(&r.rhs)))
                    .collect();
                format!(
                    "pres {{ {gens} | {} }} rewriting({}) {{ {} }}",
                    rels.join(", "),
                    sys.order().name(),
                    rules.join("; ")
                )
            }
            NormalFormEngine::Affine(e) => {
                let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
                let inv = if e.sign() < 0 { "^-1" } else { "" };
                format!(
                    "pres {{ {gens} | {} }} affine({}, {}{inv}, {})",
                    rels.join(", "),
                    self.generators[e.base()],
                    self.generators[e.stable()],
                    e.n()
                )
            }
            NormalFormEngine::Subgroup(_) => {
                let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
                format!("subgroup {{ {gens} | {} }}", rels.join(", "))
            }
        }
    }
}
