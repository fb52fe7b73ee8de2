//! Seeded instance generators.
//!
//! All randomness comes from `ChaCha8Rng` seeded with `seed_from_u64`, which
//! yields the same stream on every platform.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::model::{Alphabet, Instance, Pattern};

/// A random instance with one planted, mutated motif copy per sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedSpec {
    pub t: usize,
    pub n: usize,
    pub l: usize,
    /// Substitutions per planted copy.
    pub d: usize,
    pub sigma: Alphabet,
    pub seed: u64,
}

fn random_string(rng: &mut ChaCha8Rng, len: usize, symbols: &[u8]) -> Vec<u8> {
    (0..len)
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect()
}

fn check_shape(t: usize, n: usize, l: usize) -> Result<()> {
    if t == 0 {
        return invalid("t must be at least 1");
    }
    if l == 0 || l > n {
        return invalid(format!("need 1 <= l <= n, got l = {l}, n = {n}"));
    }
    Ok(())
}

/// `t` sequences of `n` i.i.d. uniform symbols.
pub fn gen_random(t: usize, n: usize, l: usize, sigma: &Alphabet, seed: u64) -> Result<Instance> {
    check_shape(t, n, l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sequences = (0..t)
        .map(|_| random_string(&mut rng, n, sigma.symbols()))
        .collect();
    Instance::with_alphabet(sequences, l, sigma.clone())
}

/// Draws a motif and plants one copy per sequence at a uniform offset.
///
/// Each copy has `d` distinct positions replaced by a different symbol (no
/// substitution is possible over a one-symbol alphabet). Returns the instance
/// and the motif.
pub fn gen_planted(spec: &PlantedSpec) -> Result<(Instance, Pattern)> {
    let PlantedSpec {
        t,
        n,
        l,
        d,
        ref sigma,
        seed,
    } = *spec;
    check_shape(t, n, l)?;
    if d > l {
        return invalid(format!("d = {d} exceeds l = {l}"));
    }
    let symbols = sigma.symbols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let motif = random_string(&mut rng, l, symbols);
    let mut sequences = Vec::with_capacity(t);
    for _ in 0..t {
        let mut seq = random_string(&mut rng, n, symbols);
        let offset = rng.gen_range(0..=n - l);
        let mut copy = motif.clone();
        if symbols.len() > 1 {
            for pos in index::sample(&mut rng, l, d).iter() {
                let current = sigma.index_of(copy[pos]).expect("motif symbol");
                let mut other = rng.gen_range(0..symbols.len() - 1);
                if other >= current {
                    other += 1;
                }
                copy[pos] = symbols[other];
            }
        }
        seq[offset..offset + l].copy_from_slice(&copy);
        sequences.push(seq);
    }
    let inst = Instance::with_alphabet(sequences, l, sigma.clone())?;
    Ok((inst, Pattern::new(motif)))
}
