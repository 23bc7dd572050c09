//! Power sums S_d(k) = sum of 1/a^k over the monic polynomials a of degree
//! d: enumeration, the closed-form dispatcher, and the canonical U-form of
//! the degree-one sums.
//!
//! Run with: cargo run --example power_sums

use multizeta::{
    make_field, s1_closed_form, s_d_bruteforce, s_d_nested, s_d_special, upoly_eval, PowerSums,
};

fn main() {
    let f2 = make_field(2, 1).unwrap();
    let f3 = make_field(3, 1).unwrap();

    // Plain enumeration. Degree 0 has the single summand 1.
    println!("S_0(7) over F_2: {}", s_d_bruteforce(&f2, 0, 7).unwrap());
    println!("S_1(1) over F_2: {}", s_d_bruteforce(&f2, 1, 1).unwrap());
    println!("S_2(3) over F_2: {}", s_d_bruteforce(&f2, 2, 3).unwrap());

    // Negative exponents give polynomials; this one collapses to -1.
    println!("S_1(-2) over F_3: {}", s_d_bruteforce(&f3, 1, -2).unwrap());

    // The degree-one closed form as a polynomial in U = 1/(t^q - t).
    let form = s1_closed_form(&f2, 3);
    println!("S_1(3) over F_2 has U-exponents and coefficients:");
    for term in &form.terms {
        println!("  i = {}: coefficient {} at U^{}", term.i, term.coeff, term.exponent);
    }
    let value = upoly_eval(&f2, &form.to_upoly(2));
    println!("evaluated at U = 1/[1]: {value}");
    assert_eq!(value, s_d_bruteforce(&f2, 1, 3).unwrap());

    // The dispatcher knows several shapes of (d, k); everything it returns
    // agrees with enumeration.
    for (d, k) in [(2u32, 2i64), (2, 8), (1, 5), (3, -2), (2, -8)] {
        match s_d_special(&f3, d, k) {
            Some(v) => {
                assert_eq!(v, s_d_bruteforce(&f3, d, k).unwrap());
                println!("S_{d}({k}) over F_3 via closed form: {v}");
            }
            None => println!("S_{d}({k}) over F_3 has no special shape"),
        }
    }

    // Nested sums iterate over strictly decreasing degrees.
    println!("S_2(1,1) over F_2: {}", s_d_nested(&f2, 2, &[1, 1]).unwrap());

    // A memoizing cache pays off when the same values recur.
    let mut sums = PowerSums::new(&f3);
    for k in 1..=6i64 {
        println!("S_1({k}) over F_3: {}", sums.s_d(1, k).unwrap());
    }
}
