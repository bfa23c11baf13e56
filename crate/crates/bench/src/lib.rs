//! Shared inputs for the criterion benchmarks.

use oscover_core::{EpsilonChoice, EpsilonFamily, MuVector};

/// (d, μ, ε) triples of increasing size, all family A with k = 0.
pub fn family_inputs() -> Vec<(i64, MuVector, EpsilonChoice)> {
    let eps = EpsilonChoice::plain(EpsilonFamily::A, 0).expect("valid choice");
    [
        (1, [2, 1, 1, 1]),
        (2, [0, 1, 1, 1]),
        (3, [0, 1, 1, 1]),
        (6, [6, 7, 7, 7]),
    ]
    .into_iter()
    .map(|(d, mu)| (d, MuVector::new(mu).expect("valid μ"), eps))
    .collect()
}
