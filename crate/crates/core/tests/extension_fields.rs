//! The whole pipeline over proper extensions F_4 and F_9: derivation,
//! exact depth lifting, numeric shuffle, and the CLI surface.

use multizeta::{
    derive_relation, make_field, verify_relation_exact, verify_shuffle_numeric, PowerSums,
};

#[test]
fn depth_lifting_over_f4() {
    let f4 = make_field(2, 2).unwrap();
    let mut sums = PowerSums::new(&f4);
    for (a, b) in [(1u64, 4u64), (3, 5), (2, 7), (4, 3)] {
        let rel = derive_relation(&f4, a, b);
        rel.check_invariants(2);
        for d in 1..=2u32 {
            assert!(
                verify_relation_exact(&mut sums, &rel, d).unwrap().holds(),
                "({a},{b}) at d = {d}"
            );
        }
    }
}

#[test]
fn numeric_shuffle_over_f4() {
    let f4 = make_field(2, 2).unwrap();
    let mut sums = PowerSums::new(&f4);
    // The large-index pair (q, q - 1) and a generic one.
    assert!(verify_shuffle_numeric(&mut sums, 4, 3, 30).unwrap().agrees());
    assert!(verify_shuffle_numeric(&mut sums, 2, 5, 25).unwrap().agrees());
}

#[test]
fn single_pair_relation_over_f9() {
    let f9 = make_field(3, 2).unwrap();
    let mut sums = PowerSums::new(&f9);
    let rel = derive_relation(&f9, 9, 8);
    assert_eq!(rel.pairs, vec![(2, 9)]);
    assert!(verify_relation_exact(&mut sums, &rel, 2).unwrap().holds());
}

#[test]
fn cli_handles_extensions() {
    let run = |args: &[&str]| {
        let mut out = Vec::new();
        let argv: Vec<String> =
            std::iter::once("mzv".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
        let code = multizeta::cli::run(argv, &mut out);
        (code, String::from_utf8(out).unwrap())
    };
    let (code, out) = run(&["powersum", "--q", "9", "--d", "1", "--k", "1"]);
    assert_eq!(code, 0);
    // 1/l_1 over F_9: the denominator is t^9 - t, printed with tuple
    // coefficients.
    assert!(out.contains("t^9"), "out = {out}");

    let (code, out) = run(&["family", "--q", "4", "--id", "a2", "--b", "1..30", "--format", "json"]);
    assert_eq!(code, 0, "out = {out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["all_ok"], true);

    let (code, out) = run(&["family", "--q", "5", "--id", "small", "--a", "3", "--b", "1..40"]);
    assert_eq!(code, 0);
    assert!(out.contains("40/40 pass"), "out = {out}");
}
