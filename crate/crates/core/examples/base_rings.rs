//! Tour of the exact-arithmetic layers: finite fields, polynomials in t,
//! normalized rational functions, and truncated Laurent series in u = 1/t.
//!
//! Run with: cargo run --example base_rings

use multizeta::{make_field, BracketCache, FqPoly, LaurentTail, RatFunc};

fn main() {
    // Fields are built from (p, s); the modulus for an extension is chosen
    // deterministically, so F_4 is always F_2[x]/(x^2 + x + 1).
    let f2 = make_field(2, 1).unwrap();
    let f4 = make_field(2, 2).unwrap();
    let f9 = make_field(3, 2).unwrap();
    println!("F_4 modulus coefficients (c0, c1): {:?}", f4.modulus());
    println!("F_9 modulus coefficients (c0, c1): {:?}", f9.modulus());

    // Elements of an extension render as coordinate tuples.
    let x = f9.from_coords(&[0, 1]);
    println!("x * x in F_9 = F_3[x]/(x^2+1): {}", f9.render(f9.mul(x, x)));

    // The bracket quantities: [n] = t^{q^n} - t and friends.
    let mut brackets = BracketCache::new(&f2);
    let b1 = brackets.bracket(1).unwrap();
    let b2 = brackets.bracket(2).unwrap();
    println!("[1] over F_2: {b1}");
    println!("[2] over F_2: {b2}");
    println!("[2]/[1]     : {}", b2.exact_div(&b1));

    // Rational functions normalize themselves: monic denominator, gcd
    // removed, so equal values have equal representations.
    let one = FqPoly::one(&f2);
    let sum = &RatFunc::new(one.clone(), b1.pow(3)) + &RatFunc::new(one, b1.pow(2));
    println!("1/[1]^3 + 1/[1]^2 = {sum}");

    // Text forms round-trip.
    let parsed = RatFunc::parse(&f2, &sum.to_string()).unwrap();
    assert_eq!(parsed, sum);

    // Embedding into F_q((1/t)): long division in powers of u = 1/t.
    let tail = LaurentTail::from_ratfunc(&sum, 12);
    println!("its Laurent tail: {tail}");

    // The embedding is a ring homomorphism through the tracked precision.
    let s1 = RatFunc::parse(&f2, "1/(t^2 + t)").unwrap();
    let s2 = RatFunc::parse(&f2, "1/(t^4 + t^2)").unwrap();
    let exact_then_embed = LaurentTail::from_ratfunc(&(&s1 * &s2), 20);
    let embed_then_multiply =
        &LaurentTail::from_ratfunc(&s1, 20) * &LaurentTail::from_ratfunc(&s2, 20);
    assert_eq!(exact_then_embed.agrees_with(&embed_then_multiply), None);
    println!("embedding commutes with multiplication through u^20");
}
