//! Truncated multizeta values in F_q((1/t)) and shuffle identities checked
//! coefficient by coefficient.
//!
//! Run with: cargo run --example zeta_series

use multizeta::{make_field, verify_shuffle_numeric, zeta_trunc, PowerSums, ZetaRequest};

fn main() {
    let f2 = make_field(2, 1).unwrap();
    let mut sums = PowerSums::new(&f2);

    // Depth one: the a = 1 summand contributes the leading 1.
    let z2 = zeta_trunc(&mut sums, &ZetaRequest::new(vec![2], 24)).unwrap();
    println!("zeta(2)   over F_2: {z2}");

    // Depth two sums over strictly decreasing degree chains.
    let z12 = zeta_trunc(&mut sums, &ZetaRequest::new(vec![1, 2], 24)).unwrap();
    println!("zeta(1,2) over F_2: {z12}");

    // zeta(2) zeta(1) = zeta(3) + zeta(1,2), verified through u^40.
    let outcome = verify_shuffle_numeric(&mut sums, 2, 1, 40).unwrap();
    println!("zeta(2)*zeta(1) = zeta(3) + zeta(1,2): {outcome:?}");
    assert!(outcome.agrees());

    // The same machinery at q = 3 for a derived relation.
    let f3 = make_field(3, 1).unwrap();
    let mut sums3 = PowerSums::new(&f3);
    let outcome = verify_shuffle_numeric(&mut sums3, 2, 5, 30).unwrap();
    println!("q = 3, zeta(2)*zeta(5) against its expansion: {outcome:?}");
    assert!(outcome.agrees());

    // Tails carry their precision and serialize to JSON.
    let tail = zeta_trunc(&mut sums3, &ZetaRequest::new(vec![2, 3], 20)).unwrap();
    println!("zeta(2,3) over F_3: {tail}");
    println!("as JSON: {}", tail.to_json());
}
