#![allow(dead_code)]

use homrep_core::{Automorphism, NielsenMove, Word};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

pub fn word_strategy(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    let rank = rank as i32;
    prop::collection::vec((1..=rank, any::<bool>()), 0..=max_len).prop_map(move |ls| {
        let signed: Vec<i32> = ls.into_iter().map(|(i, neg)| if neg { -i } else { i }).collect();
        Word::from_signed(rank as usize, &signed).unwrap()
    })
}

pub fn random_move(rank: usize, rng: &mut impl Rng) -> NielsenMove {
    let i = rng.gen_range(1..=rank);
    let mut j = rng.gen_range(1..rank);
    if j >= i {
        j += 1;
    }
    match rng.gen_range(0..4) {
        0 => NielsenMove::RightTransvection { i, j },
        1 => NielsenMove::LeftTransvection { i, j },
        2 => NielsenMove::Inversion { i },
        _ => NielsenMove::Swap { i, j },
    }
}

pub fn random_automorphism(rank: usize, moves: usize, rng: &mut impl Rng) -> Automorphism {
    let mut f = Automorphism::identity(rank);
    for _ in 0..moves {
        f = f.compose(&Automorphism::nielsen(rank, random_move(rank, rng)).unwrap()).unwrap();
    }
    f
}

pub fn automorphism_strategy(rank: usize, max_moves: usize) -> impl Strategy<Value = Automorphism> {
    (any::<u64>(), 0..=max_moves).prop_map(move |(seed, k)| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_automorphism(rank, k, &mut rng)
    })
}

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}
