//! Short normal forms in BS(1, 2) through the affine model.

use novikov_core::fibring::catalog::{BS12, BS12_REWRITING};
use novikov_core::groups::word::{Letter, Word};
use novikov_core::groups::GroupContext;

fn main() {
    let affine = GroupContext::parse(BS12).unwrap();
    let rewriting = GroupContext::parse(BS12_REWRITING).unwrap();
    let names = affine.names();
    for n in [1usize, 7, 100, 1000] {
        let w: Vec<Letter> = std::iter::repeat_n(Letter::pos(0), n).collect();
        let nf = affine.nf(&w);
        println!("a^{n:<5} -> {} ({} letters)", Word::display(&nf, names), nf.len());
    }
    // t^k a t^-k a = a^(2^k + 1): the rewriting normal form grows like 2^k.
    for k in [4usize, 8, 12] {
        let mut w: Vec<Letter> = std::iter::repeat_n(Letter::pos(1), k).collect();
        w.push(Letter::pos(0));
        w.extend(std::iter::repeat_n(Letter::neg(1), k));
        w.push(Letter::pos(0));
        println!("k = {k:>2}: affine {} letters, rewriting {} letters", affine.nf(&w).len(), rewriting.nf(&w).len());
    }
}
