//! The closed-form families: generators for S(1, b), S(2, b), S(3, b) and
//! the recursive small-a construction, all agreeing with the greedy
//! derivation, plus the standalone special-value identities.
//!
//! Run with: cargo run --example product_families

use multizeta::{
    check_large_indices, check_prop1, check_s1_neg_n, derive_relation, family_a1, family_a2,
    family_a3_q2, make_field, recursion_small_a, FamilyParams,
};

fn main() {
    let f2 = make_field(2, 1).unwrap();
    let f3 = make_field(3, 1).unwrap();

    // zeta(1) zeta(b): pairs walk down from b in steps of r_1 = q - 1.
    println!("S(1,7) over F_3 from the family: {:?}", family_a1(&f3, 7).pairs);
    assert_eq!(family_a1(&f3, 7), derive_relation(&f3, 1, 7));

    // zeta(2) zeta(b) for general p, with the indicator term on S_1(2)
    // whenever q - 1 divides b.
    for b in [2u64, 9, 14] {
        let fam = family_a2(&f3, b);
        assert_eq!(fam, derive_relation(&f3, 2, b));
        println!("S(2,{b}) over F_3: {:?}", fam.pairs);
    }

    // zeta(3) zeta(b) at q = 2, recursion length r_3 = 4.
    let params = FamilyParams::new(&f2, 3);
    println!("a = 3 at q = 2: r_a = {}, j_max = {}", params.r_a, params.j_max);
    for b in [4u64, 8, 12] {
        let fam = family_a3_q2(&f2, b).unwrap();
        assert_eq!(fam, derive_relation(&f2, 3, b));
        println!("S(3,{b}) over F_2: {:?}", fam.pairs);
    }

    // The recursive construction for 2 <= a <= p builds long sets from the
    // base window b <= r_a.
    let f5 = make_field(5, 1).unwrap();
    let rec = recursion_small_a(&f5, 3, 47).unwrap();
    assert_eq!(rec, derive_relation(&f5, 3, 47));
    println!("S(3,47) over F_5 has {} pairs", rec.pairs.len());

    // Special-value identities, each checked exactly from several routes.
    for q in [2u64, 3, 4] {
        let ctx = if q == 4 { make_field(2, 2).unwrap() } else { make_field(q, 1).unwrap() };
        assert!(check_prop1(&ctx, 2).unwrap());
        assert!(check_large_indices(&ctx, 2).unwrap());
        assert!(check_s1_neg_n(&ctx, 2).unwrap());
        println!("q = {q}: odd special value, large indices, constant sum: all hold");
    }
}
