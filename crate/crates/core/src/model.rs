//! Strings, windows, consensus and the total-Hamming-distance objective.
//!
//! Every solver in the crate scores candidates through the functions here, so
//! the tie-break rules live in one place:
//!
//! * consensus columns pick the most frequent symbol, smallest symbol on ties;
//! * window scans keep the leftmost window among equally distant ones.

use std::fmt;

#[cfg(test)]
use crate::error::CspError;
use crate::error::{invalid, Result};

const NO_SYMBOL: u8 = u8::MAX;

/// A finite, totally ordered set of single-character symbols.
///
/// Symbols are printable ASCII bytes ordered by character code.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    index: [u8; 256],
}

impl Alphabet {
    pub fn new(symbols: impl AsRef<[u8]>) -> Result<Self> {
        let raw = symbols.as_ref();
        if raw.is_empty() {
            return invalid("alphabet must not be empty");
        }
        let mut sorted = raw.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return invalid(format!("duplicate alphabet symbol {:?}", pair[0] as char));
            }
        }
        if let Some(&bad) = sorted.iter().find(|b| !b.is_ascii_graphic()) {
            return invalid(format!(
                "alphabet symbol {bad:#04x} is not a printable character"
            ));
        }
        let mut index = [NO_SYMBOL; 256];
        for (i, &s) in sorted.iter().enumerate() {
            index[s as usize] = i as u8;
        }
        Ok(Self {
            symbols: sorted,
            index,
        })
    }

    /// The sorted set of symbols observed in `sequences`.
    pub fn infer<S: AsRef<[u8]>>(sequences: &[S]) -> Result<Self> {
        let mut seen = [false; 256];
        for s in sequences {
            for &b in s.as_ref() {
                seen[b as usize] = true;
            }
        }
        let symbols: Vec<u8> = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.index[symbol as usize] != NO_SYMBOL
    }

    /// Rank of `symbol` in the alphabet order.
    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        match self.index[symbol as usize] {
            NO_SYMBOL => None,
            i => Some(i as usize),
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", String::from_utf8_lossy(&self.symbols))
    }
}

/// `t` equal-length sequences and a pattern length `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    sequences: Vec<Vec<u8>>,
    l: usize,
    alphabet: Alphabet,
}

impl Instance {
    /// Builds an instance whose alphabet is inferred from the sequences.
    pub fn new(sequences: Vec<Vec<u8>>, l: usize) -> Result<Self> {
        if sequences.is_empty() {
            return invalid("an instance needs at least one sequence");
        }
        let alphabet = Alphabet::infer(&sequences)?;
        Self::with_alphabet(sequences, l, alphabet)
    }

    pub fn with_alphabet(sequences: Vec<Vec<u8>>, l: usize, alphabet: Alphabet) -> Result<Self> {
        if sequences.is_empty() {
            return invalid("an instance needs at least one sequence");
        }
        let n = sequences[0].len();
        if let Some(i) = sequences.iter().position(|s| s.len() != n) {
            return invalid(format!(
                "sequence {i} has length {}, expected {n}",
                sequences[i].len()
            ));
        }
        if l == 0 {
            return invalid("pattern length must be positive");
        }
        if l > n {
            return invalid(format!("pattern length {l} exceeds sequence length {n}"));
        }
        for (i, s) in sequences.iter().enumerate() {
            if let Some(&b) = s.iter().find(|&&b| !alphabet.contains(b)) {
                return invalid(format!(
                    "sequence {i} contains symbol {:?} outside the alphabet",
                    b as char
                ));
            }
        }
        Ok(Self {
            sequences,
            l,
            alphabet,
        })
    }

    /// Convenience constructor for string literals.
    pub fn from_strs(sequences: &[&str], l: usize) -> Result<Self> {
        Self::new(sequences.iter().map(|s| s.as_bytes().to_vec()).collect(), l)
    }

    pub fn t(&self) -> usize {
        self.sequences.len()
    }

    pub fn n(&self) -> usize {
        self.sequences[0].len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of `l`-windows per sequence, `n - l + 1`.
    pub fn window_count(&self) -> usize {
        self.n() - self.l + 1
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sequences(&self) -> &[Vec<u8>] {
        &self.sequences
    }

    pub fn sequence(&self, i: usize) -> &[u8] {
        &self.sequences[i]
    }

    /// Unchecked window access for the solver hot loops.
    #[inline]
    pub(crate) fn window(&self, seq: usize, pos: usize) -> &[u8] {
        &self.sequences[seq][pos..pos + self.l]
    }

    /// The first `count` sequences as a new instance over the same alphabet.
    pub fn prefix(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.t() {
            return invalid(format!(
                "prefix of {count} sequences out of range 1..={}",
                self.t()
            ));
        }
        Self::with_alphabet(
            self.sequences[..count].to_vec(),
            self.l,
            self.alphabet.clone(),
        )
    }

    fn check_occurrence(&self, occ: Occurrence) -> Result<()> {
        if occ.seq_index >= self.t() {
            return invalid(format!(
                "sequence index {} out of range for {} sequences",
                occ.seq_index,
                self.t()
            ));
        }
        if occ.position >= self.window_count() {
            return invalid(format!(
                "position {} out of range 0..={}",
                occ.position,
                self.window_count() - 1
            ));
        }
        Ok(())
    }

    fn check_pattern(&self, v: &Pattern) -> Result<()> {
        if v.len() != self.l {
            return invalid(format!(
                "pattern length {} differs from l = {}",
                v.len(),
                self.l
            ));
        }
        Ok(())
    }
}

/// A candidate closest substring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Vec<u8>);

impl Pattern {
    pub fn new(text: impl Into<Vec<u8>>) -> Self {
        Self(text.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&str> for Pattern {
    fn from(s: &str) -> Self {
        Self(s.as_bytes().to_vec())
    }
}

impl AsRef<[u8]> for Pattern {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

/// Location of one window: sequence index and 0-based start offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub seq_index: usize,
    pub position: usize,
}

impl Occurrence {
    pub fn new(seq_index: usize, position: usize) -> Self {
        Self {
            seq_index,
            position,
        }
    }
}

/// One occurrence per sequence, in sequence order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    occurrences: Vec<Occurrence>,
}

impl Solution {
    pub fn new(occurrences: Vec<Occurrence>) -> Result<Self> {
        if let Some((i, occ)) = occurrences
            .iter()
            .enumerate()
            .find(|(i, o)| o.seq_index != *i)
        {
            return invalid(format!(
                "occurrence {i} refers to sequence {}, expected {i}",
                occ.seq_index
            ));
        }
        Ok(Self { occurrences })
    }

    pub fn from_positions(positions: &[usize]) -> Self {
        Self {
            occurrences: positions
                .iter()
                .enumerate()
                .map(|(i, &p)| Occurrence::new(i, p))
                .collect(),
        }
    }

    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn positions(&self) -> Vec<usize> {
        self.occurrences.iter().map(|o| o.position).collect()
    }

    pub fn len(&self) -> usize {
        self.occurrences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }

    /// Appends one occurrence per position, continuing the sequence numbering.
    pub fn extended(&self, positions: &[usize]) -> Self {
        let mut occurrences = self.occurrences.clone();
        let start = occurrences.len();
        occurrences.extend(
            positions
                .iter()
                .enumerate()
                .map(|(i, &p)| Occurrence::new(start + i, p)),
        );
        Self { occurrences }
    }

    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.len() != inst.t() {
            return invalid(format!(
                "solution has {} occurrences for {} sequences",
                self.len(),
                inst.t()
            ));
        }
        self.occurrences
            .iter()
            .try_for_each(|&occ| inst.check_occurrence(occ))
    }
}

/// A solution together with its consensus and total Hamming distance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostedSolution {
    solution: Solution,
    consensus: Pattern,
    cost: u64,
}

impl CostedSolution {
    /// Assembles a costed solution without recomputing anything.
    ///
    /// Solution files are read through this; [`solution_cost`] is the
    /// checked route.
    pub fn from_parts(solution: Solution, consensus: Pattern, cost: u64) -> Self {
        Self {
            solution,
            consensus,
            cost,
        }
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn consensus(&self) -> &Pattern {
        &self.consensus
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }
}

/// Result of aligning a fixed pattern against every sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// The pattern that was aligned.
    pub pattern: Pattern,
    /// `Σ_i min_y d(pattern, y)` over the windows `y` of sequence `i`.
    pub pattern_cost: u64,
    /// The best-aligning windows, re-scored against their own consensus.
    pub costed: CostedSolution,
}

#[inline]
pub(crate) fn distance(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

/// Hamming distance, giving up once it reaches `limit`.
#[inline]
fn distance_capped(a: &[u8], b: &[u8], limit: u64) -> u64 {
    let mut d = 0;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            d += 1;
            if d >= limit {
                break;
            }
        }
    }
    d
}

pub fn hamming(a: &[u8], b: &[u8]) -> Result<u64> {
    if a.len() != b.len() {
        return invalid(format!("hamming on lengths {} and {}", a.len(), b.len()));
    }
    Ok(distance(a, b))
}

pub fn substring_at(inst: &Instance, occ: Occurrence) -> Result<Pattern> {
    inst.check_occurrence(occ)?;
    Ok(Pattern::new(inst.window(occ.seq_index, occ.position)))
}

/// Column-wise majority of equal-length windows, writing into `out`.
///
/// Ties go to the smallest symbol. `column` is scratch space.
pub(crate) fn consensus_into(windows: &[&[u8]], column: &mut Vec<u8>, out: &mut Vec<u8>) {
    out.clear();
    let width = windows.first().map_or(0, |w| w.len());
    for c in 0..width {
        column.clear();
        column.extend(windows.iter().map(|w| w[c]));
        column.sort_unstable();
        let (mut best, mut best_count) = (column[0], 0usize);
        let mut i = 0;
        while i < column.len() {
            let sym = column[i];
            let run = column[i..].iter().take_while(|&&b| b == sym).count();
            if run > best_count {
                best = sym;
                best_count = run;
            }
            i += run;
        }
        out.push(best);
    }
}

pub(crate) fn consensus_windows(windows: &[&[u8]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(windows.first().map_or(0, |w| w.len()));
    consensus_into(windows, &mut Vec::with_capacity(windows.len()), &mut out);
    out
}

pub fn consensus_of(patterns: &[Pattern]) -> Result<Pattern> {
    let Some(first) = patterns.first() else {
        return invalid("consensus of an empty list");
    };
    if let Some(p) = patterns.iter().find(|p| p.len() != first.len()) {
        return invalid(format!(
            "consensus over mixed lengths {} and {}",
            first.len(),
            p.len()
        ));
    }
    let windows: Vec<&[u8]> = patterns.iter().map(Pattern::as_bytes).collect();
    Ok(Pattern::new(consensus_windows(&windows)))
}

/// Scores already-validated positions against their consensus.
pub(crate) fn cost_positions(inst: &Instance, positions: &[usize]) -> CostedSolution {
    let windows: Vec<&[u8]> = positions
        .iter()
        .enumerate()
        .map(|(i, &p)| inst.window(i, p))
        .collect();
    let consensus = consensus_windows(&windows);
    let cost = windows.iter().map(|w| distance(&consensus, w)).sum();
    CostedSolution {
        solution: Solution::from_positions(positions),
        consensus: Pattern::new(consensus),
        cost,
    }
}

pub fn solution_cost(inst: &Instance, sol: &Solution) -> Result<CostedSolution> {
    sol.validate(inst)?;
    Ok(cost_positions(inst, &sol.positions()))
}

/// Leftmost window of `seq` closest to `v`, with its distance.
#[inline]
pub(crate) fn best_window(seq: &[u8], v: &[u8]) -> (usize, u64) {
    let l = v.len();
    let (mut best_pos, mut best) = (0, u64::MAX);
    for pos in 0..=seq.len() - l {
        let d = distance_capped(&seq[pos..pos + l], v, best);
        if d < best {
            best = d;
            best_pos = pos;
            if d == 0 {
                break;
            }
        }
    }
    (best_pos, best)
}

pub fn best_occurrence(
    inst: &Instance,
    v: &Pattern,
    seq_index: usize,
) -> Result<(Occurrence, u64)> {
    inst.check_pattern(v)?;
    if seq_index >= inst.t() {
        return invalid(format!(
            "sequence index {seq_index} out of range for {} sequences",
            inst.t()
        ));
    }
    let (pos, d) = best_window(inst.sequence(seq_index), v.as_bytes());
    Ok((Occurrence::new(seq_index, pos), d))
}

/// `Σ_i min_y d(v, y)`, or `None` as soon as the running sum reaches `limit`.
pub(crate) fn pattern_cost_below(inst: &Instance, v: &[u8], limit: u64) -> Option<u64> {
    let mut total = 0;
    for seq in inst.sequences() {
        total += best_window(seq, v).1;
        if total >= limit {
            return None;
        }
    }
    Some(total)
}

pub(crate) fn align_unchecked(inst: &Instance, v: &[u8]) -> Alignment {
    let mut positions = Vec::with_capacity(inst.t());
    let mut pattern_cost = 0;
    for seq in inst.sequences() {
        let (pos, d) = best_window(seq, v);
        positions.push(pos);
        pattern_cost += d;
    }
    Alignment {
        pattern: Pattern::new(v),
        pattern_cost,
        costed: cost_positions(inst, &positions),
    }
}

pub fn realign(inst: &Instance, v: &Pattern) -> Result<Alignment> {
    inst.check_pattern(v)?;
    Ok(align_unchecked(inst, v.as_bytes()))
}

/// Splits the cost of `sol` around sequence `i`, holding the full consensus fixed.
///
/// Returns `(Σ_{j≠i} d(v, y_j), d(v, y_i))`; the two always sum to the
/// solution cost.
pub fn decompose_cost(inst: &Instance, sol: &Solution, i: usize) -> Result<(u64, u64)> {
    let costed = solution_cost(inst, sol)?;
    if i >= inst.t() {
        return invalid(format!(
            "sequence index {i} out of range for {} sequences",
            inst.t()
        ));
    }
    let v = costed.consensus.as_bytes();
    let mut partial = 0;
    let mut leaf = 0;
    for occ in sol.occurrences() {
        let d = distance(v, inst.window(occ.seq_index, occ.position));
        if occ.seq_index == i {
            leaf = d;
        } else {
            partial += d;
        }
    }
    Ok((partial, leaf))
}
