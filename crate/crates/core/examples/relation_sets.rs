//! Deriving the relation sets S(a, b) with
//! S_1(a) S_1(b) - S_1(a+b) = sum of f_i S_1(a_i), and the parity property
//! that every gap a + b - a_i is a multiple of q - 1.
//!
//! Run with: cargo run --example relation_sets

use multizeta::{derive_relation, is_even_mult, make_field, shuffle_expand};

fn main() {
    let f2 = make_field(2, 1).unwrap();
    let f3 = make_field(3, 1).unwrap();

    // Delta(1,1) vanishes at q = 2, so the set is empty and
    // zeta(1)^2 = zeta(2).
    let rel = derive_relation(&f2, 1, 1);
    println!("S(1,1) over F_2: {:?}", rel.pairs);
    println!("shuffle form: zeta(1)*zeta(1) = {}", shuffle_expand(&f2, 1, 1));

    // A single-pair example and its lifted identity.
    let rel = derive_relation(&f3, 3, 2);
    println!("S(3,2) over F_3: {:?}", rel.pairs);
    println!("shuffle form: zeta(3)*zeta(2) = {}", shuffle_expand(&f3, 3, 2));

    // A denser one, with the parity of every gap on display. Some products
    // need no correction at all: Delta(7, 8) = 0 over F_3, for instance.
    assert!(derive_relation(&f3, 7, 8).pairs.is_empty());
    let rel = derive_relation(&f3, 8, 10);
    println!("S(8,10) over F_3:");
    for &(f, a_i) in &rel.pairs {
        let gap = rel.weight() - a_i;
        assert!(is_even_mult(gap as i64, 3));
        println!("  f = {f}, a_i = {a_i}, gap = {gap} (a multiple of q - 1)");
    }

    // The derivation is symmetric in (a, b).
    assert_eq!(rel.pairs, derive_relation(&f3, 10, 8).pairs);

    // Relation sets serialize to a one-line JSON interchange form.
    println!("as JSON: {}", serde_json::to_string(&rel).unwrap());
}
