//! Line-oriented text formats.
//!
//! Instance file:
//!
//! ```text
//! l=<int>
//! alphabet=<chars>      (optional)
//! <sequence>
//! ...
//! ```
//!
//! Solution file:
//!
//! ```text
//! cost=<int>
//! pattern=<string>
//! occ <seq_index> <position>
//! ...
//! ```
//!
//! Both end with a newline; indices are 0-based.

use std::fmt::Write as _;

use crate::error::{CspError, Result};
use crate::model::{Alphabet, CostedSolution, Instance, Occurrence, Pattern, Solution};

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(CspError::Parse {
        line,
        message: message.into(),
    })
}

/// Numbered lines with any `\r` stripped; requires the final newline.
fn lines(text: &str) -> Result<Vec<(usize, &str)>> {
    if text.is_empty() {
        return parse_err(1, "empty input");
    }
    if !text.ends_with('\n') {
        return parse_err(text.lines().count(), "missing trailing newline");
    }
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .collect())
}

fn header_value<'a>(line: usize, raw: &'a str, key: &str) -> Result<&'a str> {
    match raw.split_once('=') {
        Some((k, v)) if k == key => Ok(v),
        _ => parse_err(line, format!("expected `{key}=...`, found {raw:?}")),
    }
}

fn header_int(line: usize, raw: &str, key: &str) -> Result<usize> {
    let v = header_value(line, raw, key)?;
    v.parse().or_else(|_| {
        parse_err(
            line,
            format!("`{key}` must be a non-negative integer, found {v:?}"),
        )
    })
}

fn check_sequence(line: usize, raw: &str, alphabet: Option<&Alphabet>) -> Result<()> {
    if raw.is_empty() {
        return parse_err(line, "empty sequence line");
    }
    for (col, b) in raw.bytes().enumerate() {
        let legal = match alphabet {
            Some(a) => a.contains(b),
            None => b.is_ascii_graphic(),
        };
        if !legal {
            return parse_err(
                line,
                format!("illegal symbol {:?} at column {}", b as char, col + 1),
            );
        }
    }
    Ok(())
}

fn assemble(
    sequences: Vec<(usize, Vec<u8>)>,
    l: usize,
    l_line: usize,
    alphabet: Option<Alphabet>,
) -> Result<Instance> {
    let Some((first_line, first)) = sequences.first() else {
        return parse_err(l_line + 1, "no sequences");
    };
    let n = first.len();
    if let Some((line, s)) = sequences.iter().find(|(_, s)| s.len() != n) {
        return parse_err(
            *line,
            format!("sequence has length {}, expected {n}", s.len()),
        );
    }
    if l == 0 {
        return parse_err(l_line, "l must be positive");
    }
    if l > n {
        return parse_err(*first_line, format!("l = {l} exceeds sequence length {n}"));
    }
    let seqs: Vec<Vec<u8>> = sequences.into_iter().map(|(_, s)| s).collect();
    let built = match alphabet {
        Some(a) => Instance::with_alphabet(seqs, l, a),
        None => Instance::new(seqs, l),
    };
    built.or_else(|e| parse_err(l_line, e.to_string()))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let lines = lines(text)?;
    let mut it = lines.into_iter().peekable();
    let (l_line, raw) = it.next().expect("non-empty input has a line");
    let l = header_int(l_line, raw, "l")?;
    let mut alphabet = None;
    if let Some(&(line, raw)) = it.peek() {
        if raw.starts_with("alphabet=") {
            let symbols = header_value(line, raw, "alphabet")?;
            alphabet = Some(Alphabet::new(symbols).or_else(|e| parse_err(line, e.to_string()))?);
            it.next();
        }
    }
    let mut sequences = Vec::new();
    for (line, raw) in it {
        check_sequence(line, raw, alphabet.as_ref())?;
        sequences.push((line, raw.as_bytes().to_vec()));
    }
    assemble(sequences, l, l_line, alphabet)
}

/// Reads FASTA records, joining each record's lines; `l` comes from the caller.
pub fn parse_fasta(text: &str, l: usize) -> Result<Instance> {
    let lines = lines(text)?;
    let mut sequences: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut open = false;
    for (line, raw) in lines {
        if raw.starts_with('>') {
            open = false;
            continue;
        }
        if raw.trim().is_empty() {
            continue;
        }
        check_sequence(line, raw, None)?;
        match sequences.last_mut() {
            Some((_, s)) if open => s.extend_from_slice(raw.as_bytes()),
            _ => {
                sequences.push((line, raw.as_bytes().to_vec()));
                open = true;
            }
        }
    }
    assemble(sequences, l, 1, None)
}

/// Canonical text; an `alphabet=` line appears only when the alphabet differs
/// from the symbols actually used.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = format!("l={}\n", inst.l());
    let inferred = Alphabet::infer(inst.sequences()).expect("instance symbols are printable");
    if &inferred != inst.alphabet() {
        out.push_str("alphabet=");
        out.push_str(&String::from_utf8_lossy(inst.alphabet().symbols()));
        out.push('\n');
    }
    for s in inst.sequences() {
        out.push_str(&String::from_utf8_lossy(s));
        out.push('\n');
    }
    out
}

pub fn serialize_solution(costed: &CostedSolution) -> Result<String> {
    if costed.solution().is_empty() {
        return Err(CspError::InvalidArgument(
            "cannot serialize a solution without occurrences".into(),
        ));
    }
    let mut out = format!("cost={}\npattern={}\n", costed.cost(), costed.consensus());
    for occ in costed.solution().occurrences() {
        writeln!(out, "occ {} {}", occ.seq_index, occ.position).expect("writing to a String");
    }
    Ok(out)
}

/// Reads a solution file as written; nothing is re-scored.
pub fn parse_solution(text: &str) -> Result<CostedSolution> {
    let lines = lines(text)?;
    if lines.len() < 3 {
        return parse_err(
            lines.len() + 1,
            "expected cost, pattern and at least one occurrence",
        );
    }
    let cost = header_int(lines[0].0, lines[0].1, "cost")? as u64;
    let pattern = header_value(lines[1].0, lines[1].1, "pattern")?;
    let mut occurrences = Vec::new();
    for &(line, raw) in &lines[2..] {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let [tag, seq, pos] = fields[..] else {
            return parse_err(line, format!("expected `occ <seq> <pos>`, found {raw:?}"));
        };
        if tag != "occ" {
            return parse_err(line, format!("expected `occ`, found {tag:?}"));
        }
        let number = |s: &str| -> Result<usize> {
            s.parse()
                .or_else(|_| parse_err(line, format!("{s:?} is not a non-negative integer")))
        };
        occurrences.push(Occurrence::new(number(seq)?, number(pos)?));
    }
    let solution = Solution::new(occurrences).or_else(|e| parse_err(3, e.to_string()))?;
    Ok(CostedSolution::from_parts(
        solution,
        Pattern::from(pattern),
        cost,
    ))
}
