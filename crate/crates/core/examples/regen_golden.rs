//! Regenerates the golden expected-count file on stdout.
//!
//! Counts come from the oracle paths only: operation tables go through the
//! naive all-pairs associativity scan, multilinear polynomials through the
//! pointwise evaluation check. Redirect into data/golden_counts.json once the
//! run matches the committed values.

use nassoc::enumerate::{enumerate_assoc_ops_naive, poly_by_index};
use nassoc::GuardRail;

fn main() {
    let rail = GuardRail::default();

    let op_cases = [(2usize, 2usize), (2, 3), (2, 4), (3, 2)];
    let mut ops = Vec::new();
    for (k, n) in op_cases {
        let count = enumerate_assoc_ops_naive(k, n, &rail).expect("within the scan bound").len();
        ops.push(format!("    \"{k},{n}\": {count}"));
    }

    let poly_cases = [(2u64, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)];
    let mut multilinear = Vec::new();
    for (p, n) in poly_cases {
        let candidates = (p as u128).pow(1 << n);
        let mut count = 0u64;
        for id in 0..candidates {
            let poly = poly_by_index(p, n, id).expect("id in range");
            if poly.pointwise_associative(&rail).expect("within the scan bound") {
                count += 1;
            }
        }
        multilinear.push(format!("    \"{p},{n}\": {count}"));
    }

    println!("{{");
    println!("  \"version\": 1,");
    println!("  \"ops\": {{");
    println!("{}", ops.join(",\n"));
    println!("  }},");
    println!("  \"multilinear\": {{");
    println!("{}", multilinear.join(",\n"));
    println!("  }}");
    println!("}}");
}
