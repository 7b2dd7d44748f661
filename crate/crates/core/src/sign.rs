//! Partition of ℚ* into sign classes.
//!
//! Any two sequences drawn from one class each have a nonzero dot product,
//! since every term `αᵢβᵢ` carries the same sign.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    Negative,
    Positive,
}

impl Block {
    pub const ALL: [Block; 2] = [Block::Negative, Block::Positive];

    /// `-1` or `+1`.
    pub fn sign(self) -> i8 {
        match self {
            Block::Negative => -1,
            Block::Positive => 1,
        }
    }
}

pub fn block_of(q: &Rational) -> Result<Block> {
    if q.is_zero() {
        Err(Error::ZeroHasNoBlock)
    } else if q.is_negative() {
        Ok(Block::Negative)
    } else {
        Ok(Block::Positive)
    }
}

/// `χ`: the block of `q`, or 0 for zero, as a small integer colour.
pub fn chi(q: &Rational) -> i8 {
    block_of(q).map_or(0, Block::sign)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub trials: usize,
    pub max_len: usize,
    pub zero_sums: usize,
}

impl PartitionReport {
    pub fn holds(&self) -> bool {
        self.zero_sums == 0
    }
}

fn random_in_block(rng: &mut ChaCha8Rng, block: Block) -> Rational {
    let num: i64 = rng.gen_range(1..=1000);
    let den: i64 = rng.gen_range(1..=1000);
    Rational::new(BigInt::from(num * i64::from(block.sign())), BigInt::from(den))
}

/// Draws `trials` pairs of sequences, each sequence from a single block and of
/// length at most `max_len`, and counts how many dot products vanish.
pub fn check_partition_property(max_len: usize, trials: usize, seed: u64) -> PartitionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut zero_sums = 0;
    for _ in 0..trials {
        let len = rng.gen_range(1..=max_len.max(1));
        let da = Block::ALL[rng.gen_range(0..2)];
        let db = Block::ALL[rng.gen_range(0..2)];
        let sum = (0..len)
            .fold(Rational::zero(), |acc, _| acc + random_in_block(&mut rng, da) * random_in_block(&mut rng, db));
        if block_of(&sum).is_err() {
            zero_sums += 1;
        }
    }
    PartitionReport { trials, max_len, zero_sums }
}
