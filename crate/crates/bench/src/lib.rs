//! Fixed inputs shared by the benchmarks.

use homrep_core::{IntMatrix, Word};

/// Deterministic `n × n` matrix with entries in `[-9, 9]`.
pub fn sample_matrix(n: usize) -> IntMatrix {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
                    ((state >> 33) % 19) as i64 - 9
                })
                .collect()
        })
        .collect::<Vec<Vec<i64>>>();
    IntMatrix::from_i64(&rows).expect("rectangular")
}

/// A reduced word of the given length cycling through all signed letters.
pub fn sample_word(rank: usize, len: usize) -> Word {
    let letters: Vec<i32> = (0..len)
        .map(|k| {
            let i = (k % rank) as i32 + 1;
            if (k / rank) % 2 == 0 { i } else { -i }
        })
        .collect();
    Word::from_signed(rank, &letters).expect("valid letters")
}
