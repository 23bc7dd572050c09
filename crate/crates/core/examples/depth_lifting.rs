//! A relation derived at degree one holds at every degree: exact
//! verification of S_d(a) S_d(b) - S_d(a+b) = sum f_i S_d(a_i, a+b-a_i)
//! for d = 1, 2, 3 by rational arithmetic, with a forged set for contrast.
//!
//! Run with: cargo run --example depth_lifting

use multizeta::{delta_d, derive_relation, make_field, verify_relation_exact, PowerSums, RelationSet};

fn main() {
    let f3 = make_field(3, 1).unwrap();
    let mut sums = PowerSums::new(&f3);

    let rel = derive_relation(&f3, 4, 5);
    println!("S(4,5) over F_3: {:?}", rel.pairs);

    for d in 1..=3u32 {
        let outcome = verify_relation_exact(&mut sums, &rel, d).unwrap();
        println!("depth d = {d}: {}", if outcome.holds() { "holds exactly" } else { "FAILS" });
        assert!(outcome.holds());
    }

    // The deviation itself, at a couple of depths.
    for d in 1..=2u32 {
        println!("Delta_{d}(4,5) = {}", delta_d(&mut sums, d, 4, 5).unwrap());
    }

    // Forging a pair breaks the identity, and the checker returns the exact
    // nonzero difference as a witness.
    let forged = RelationSet { q: 3, a: 4, b: 5, pairs: vec![(1, 7)] };
    let outcome = verify_relation_exact(&mut sums, &forged, 1).unwrap();
    assert!(!outcome.holds());
    println!("forged set fails with witness: {}", outcome.witness().unwrap());
}
