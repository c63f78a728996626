//! Two-sided certificates for single characters.

use novikov_core::chain::ChainComplex;
use novikov_core::characters::Character;
use novikov_core::fibring::catalog::find;
use novikov_core::fibring::{fibred_check, verify_certificate, CutoffPolicy};

fn main() {
    let policy = CutoffPolicy::default();
    for (name, phi) in [("Z", vec![1]), ("F2xZ", vec![0, 1, 0]), ("F2xZ", vec![1, 0, 0]), ("F2", vec![1, 1]), ("BS12", vec![1]), ("BS12-inverted", vec![1])] {
        let ctx = find(name).unwrap().context().unwrap();
        let cc = ChainComplex::build(&ctx).unwrap();
        let v = fibred_check(&cc, &Character::integral(&phi), &policy).unwrap();
        println!("{name:<14} φ = {:<12} +{:<22} -{:<22} {}", v.character.to_string(), v.plus.status().name(), v.minus.status().name(), v.verdict.name());
        if let Some(cert) = v.plus.certificate() {
            verify_certificate(&ctx, cert).expect("certificate re-verifies");
            println!("{:>16} margin {} radius {:?} digest {}", "", cert.margin, cert.radius, &cert.digest()[..12]);
        }
    }
}
