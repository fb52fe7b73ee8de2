//! Reference computations written straight from the problem definition.
//! Nothing here calls the library's solvers.

#![allow(dead_code)]

use closest_substring::model::Instance;

pub fn hamming(a: &[u8], b: &[u8]) -> u64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

pub fn windows(seq: &[u8], l: usize) -> impl Iterator<Item = &[u8]> {
    seq.windows(l)
}

/// `min_y d(v, y)` over the windows of `seq`.
pub fn best_distance(seq: &[u8], v: &[u8]) -> u64 {
    windows(seq, v.len()).map(|w| hamming(v, w)).min().unwrap()
}

/// `Σ_i min_y d(v, y)`.
pub fn pattern_cost(seqs: &[Vec<u8>], v: &[u8]) -> u64 {
    seqs.iter().map(|s| best_distance(s, v)).sum()
}

/// Every string of length `l` over `symbols`, in lexicographic order.
pub fn all_patterns(symbols: &[u8], l: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..l {
        let mut next = Vec::with_capacity(out.len() * symbols.len());
        for p in &out {
            for &s in symbols {
                let mut q = p.clone();
                q.push(s);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Optimum over `Σ^l` and the lexicographically first pattern attaining it.
pub fn brute_optimum(inst: &Instance) -> (u64, Vec<u8>) {
    let mut best: Option<(u64, Vec<u8>)> = None;
    for v in all_patterns(inst.alphabet().symbols(), inst.l()) {
        let c = pattern_cost(inst.sequences(), &v);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, v));
        }
    }
    best.unwrap()
}

/// Sum of pairwise distances between the chosen windows.
pub fn sum_of_pairs(inst: &Instance, offsets: &[usize]) -> u64 {
    let l = inst.l();
    let w: Vec<&[u8]> = offsets
        .iter()
        .enumerate()
        .map(|(i, &o)| &inst.sequence(i)[o..o + l])
        .collect();
    let mut total = 0;
    for i in 0..w.len() {
        for j in 0..i {
            total += hamming(w[i], w[j]);
        }
    }
    total
}

/// Calls `f` on every offset tuple, last sequence fastest.
pub fn for_each_tuple(t: usize, windows: usize, mut f: impl FnMut(&[usize])) {
    let mut offsets = vec![0usize; t];
    loop {
        f(&offsets);
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            offsets[i] += 1;
            if offsets[i] < windows {
                break;
            }
            offsets[i] = 0;
        }
    }
}

/// The approximation guarantee, computed independently.
pub fn ratio(r: usize, sigma: usize) -> f64 {
    let e: f64 = 1f64.exp();
    1.0 + (4.0 * sigma as f64 - 4.0) / (e.sqrt() * ((4.0 * r as f64 + 1.0).sqrt() - 3.0))
}

pub fn n_choose_k(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn ex1() -> Instance {
    Instance::from_strs(&["AAAABBBB", "BBBBAAAA", "AAAABBBA", "BBBBAAAA"], 4).unwrap()
}

pub fn ex1_prime() -> Instance {
    Instance::from_strs(
        &["AAAABBBB", "BBBBAAAA", "AAAABBBA", "BBBBAAAA", "BBBBBBBB"],
        4,
    )
    .unwrap()
}
