//! Compression-based behaviour analysis over consecutive binary inputs.

use std::io::Write;
use std::ops::RangeInclusive;

use flate2::write::DeflateEncoder;
use flate2::Compression;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{Outcome, SpaceTimeDiagram};
use crate::error::{Error, Result};
use crate::machine::{Symbol, TuringMachine};
use crate::simulate::{run, run_final, TapeConfiguration};

/// Raw DEFLATE level used by [`compressed_length`].
pub const COMPRESSION_LEVEL: u32 = 9;
/// Description written into output metadata.
pub const COMPRESSOR: &str = "deflate-raw(flate2/miniz_oxide) level 9";

/// Binary digits of `i`, most significant first.
pub fn integer_to_tape(i: u64) -> Result<Vec<Symbol>> {
    if i == 0 {
        return Err(Error::InvalidTape("inputs start at 1".into()));
    }
    let bits = 64 - i.leading_zeros();
    Ok((0..bits).rev().map(|b| Symbol(((i >> b) & 1) as u8)).collect())
}

/// Where the head starts on a binary input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadStart {
    /// Leftmost cell, the most significant digit.
    #[default]
    MostSignificant,
    /// Rightmost cell, the least significant digit.
    LeastSignificant,
}

/// Two-way tape holding the binary digits of `i` at cells `0..`, state 1.
pub fn input_configuration(i: u64, head: HeadStart) -> Result<TapeConfiguration> {
    let digits = integer_to_tape(i)?;
    let pos = match head {
        HeadStart::MostSignificant => 0,
        HeadStart::LeastSignificant => digits.len() as i64 - 1,
    };
    let mut config = TapeConfiguration::with_input(&digits);
    config.head = pos;
    Ok(config)
}

/// Compressed size in bytes of the diagram's row-major digit serialization.
pub fn compressed_length(diagram: &SpaceTimeDiagram) -> usize {
    compressed_len_bytes(&diagram.canonical_bytes())
}

fn compressed_len_bytes(data: &[u8]) -> usize {
    let mut enc = DeflateEncoder::new(Vec::new(), Compression::new(COMPRESSION_LEVEL));
    enc.write_all(data).expect("writing to a Vec cannot fail");
    enc.finish().expect("writing to a Vec cannot fail").len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviourSample {
    pub input_index: u64,
    pub compressed_length: usize,
    pub outcome: Outcome,
    /// Steps executed before halting or the cutoff.
    pub steps_run: u64,
}

/// One sample per input: binary tape, run for `steps`, compress.
pub fn behaviour_histogram(
    machine: &TuringMachine,
    inputs: RangeInclusive<u64>,
    steps: u64,
    head: HeadStart,
) -> Result<Vec<BehaviourSample>> {
    if steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    let inputs: Vec<u64> = inputs.collect();
    inputs
        .par_iter()
        .map(|&i| {
            let tape = input_configuration(i, head)?;
            let d = run(machine, &tape, steps)?;
            let steps_run = match d.outcome {
                Outcome::Halted { step } | Outcome::FellOffTape { step } => step,
                Outcome::MaxStepsReached => steps,
            };
            Ok(BehaviourSample {
                input_index: i,
                compressed_length: compressed_length(&d),
                outcome: d.outcome,
                steps_run,
            })
        })
        .collect()
}

/// Keeps row 0 and every row whose head position is beyond all earlier ones.
pub fn frontier_rows(diagram: &SpaceTimeDiagram) -> SpaceTimeDiagram {
    let mut rows = Vec::new();
    let mut heads = Vec::new();
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for (row, &h) in diagram.rows.iter().zip(&diagram.head_positions) {
        if rows.is_empty() || h > hi || h < lo {
            rows.push(row.clone());
            heads.push(h);
        }
        lo = lo.min(h);
        hi = hi.max(h);
    }
    SpaceTimeDiagram { rows, window: diagram.window, head_positions: heads, outcome: diagram.outcome }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionPoint {
    pub input: u64,
    /// Final tape with leading and trailing blanks removed, as digits.
    pub output: String,
    pub outcome: Outcome,
}

/// Input/output table of `machine` over binary inputs.
pub fn computed_function(
    machine: &TuringMachine,
    inputs: RangeInclusive<u64>,
    steps: u64,
    head: HeadStart,
) -> Result<Vec<FunctionPoint>> {
    if steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    let inputs: Vec<u64> = inputs.collect();
    inputs
        .par_iter()
        .map(|&i| {
            let tape = input_configuration(i, head)?;
            let summary = run_final(machine, &tape, steps)?;
            let output = match summary.config.non_blank_extent() {
                Some((a, b)) => summary.config.window(a, b).iter().map(|s| s.to_digit()).collect(),
                None => String::new(),
            };
            Ok(FunctionPoint { input: i, output, outcome: summary.outcome })
        })
        .collect()
}

/// A run of adjacent width-`bin_width` bins that each hold at least the
/// threshold fraction of samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mode {
    /// Inclusive compressed-length range covered.
    pub lengths: (usize, usize),
    pub samples: usize,
}

/// Groups compressed lengths into `bin_width`-wide bins and returns the
/// modes: bins holding at least `min_fraction` of all samples, merged
/// with neighbouring heavy bins unless an empty bin separates them.
pub fn detect_modes(lengths: &[usize], bin_width: usize, min_fraction: f64) -> Vec<Mode> {
    if lengths.is_empty() || bin_width == 0 {
        return Vec::new();
    }
    let lo_bin = lengths.iter().min().expect("non-empty") / bin_width;
    let hi_bin = lengths.iter().max().expect("non-empty") / bin_width;
    let mut bins = vec![0usize; hi_bin - lo_bin + 1];
    for &l in lengths {
        bins[l / bin_width - lo_bin] += 1;
    }
    let threshold = min_fraction * lengths.len() as f64;
    let mut modes: Vec<Mode> = Vec::new();
    let mut open = false;
    for (i, &count) in bins.iter().enumerate() {
        let bin = lo_bin + i;
        if count == 0 {
            open = false;
            continue;
        }
        if (count as f64) < threshold {
            continue;
        }
        let range = (bin * bin_width, bin * bin_width + bin_width - 1);
        match modes.last_mut() {
            Some(last) if open => {
                last.lengths.1 = range.1;
                last.samples += count;
            }
            _ => modes.push(Mode { lengths: range, samples: count }),
        }
        open = true;
    }
    modes
}

/// Modes under the default rule: width-4 bins, at least 5% of samples.
pub fn default_modes(samples: &[BehaviourSample]) -> Vec<Mode> {
    let lengths: Vec<usize> = samples.iter().map(|s| s.compressed_length).collect();
    detect_modes(&lengths, 4, 0.05)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::decode_rule;
    use crate::seed::rng;
    use rand::Rng;

    fn digits(v: &[Symbol]) -> String {
        v.iter().map(|s| s.to_digit()).collect()
    }

    #[test]
    fn binary_inputs() {
        assert_eq!(digits(&integer_to_tape(1).unwrap()), "1");
        assert_eq!(digits(&integer_to_tape(6).unwrap()), "110");
        assert_eq!(digits(&integer_to_tape(100).unwrap()), "1100100");
        assert!(integer_to_tape(0).is_err());
    }

    fn diagram_of(rows: Vec<Vec<Symbol>>, heads: Vec<i64>) -> SpaceTimeDiagram {
        let w = rows[0].len() as i64;
        SpaceTimeDiagram { rows, window: (0, w - 1), head_positions: heads, outcome: Outcome::MaxStepsReached }
    }

    #[test]
    fn head_start() {
        let c = input_configuration(6, HeadStart::MostSignificant).unwrap();
        assert_eq!((c.head, c.get(c.head)), (0, Symbol(1)));
        let c = input_configuration(6, HeadStart::LeastSignificant).unwrap();
        assert_eq!((c.head, c.get(c.head)), (2, Symbol(0)));
        assert_eq!(c.non_blank_extent(), Some((0, 1)));
    }

    #[test]
    fn constant_compresses_better_than_random() {
        let blank = diagram_of(vec![vec![Symbol(0); 10]; 10], vec![0; 10]);
        let mut r = rng(42);
        let noisy =
            diagram_of((0..10).map(|_| (0..10).map(|_| Symbol(r.gen_range(0..2))).collect()).collect(), vec![0; 10]);
        assert!(compressed_length(&blank) < compressed_length(&noisy));
        assert_eq!(compressed_length(&noisy), compressed_length(&noisy.clone()));
        assert!(compressed_length(&blank) > 0);
    }

    #[test]
    fn frontier_filtering() {
        let rows: Vec<Vec<Symbol>> = (0..6).map(|i| vec![Symbol(i as u8 % 2); 3]).collect();
        let right = diagram_of(rows.clone(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(frontier_rows(&right).rows.len(), 6);
        let osc = diagram_of(rows, vec![0, 1, -1, 0, 1, 0]);
        let f = frontier_rows(&osc);
        assert_eq!(f.head_positions, vec![0, 1, -1]);
        assert_eq!(frontier_rows(&f), f);
    }

    #[test]
    fn identity_machine_function() {
        let m = TuringMachine::from_standard("0RH1RH").unwrap();
        let f = computed_function(&m, 1..=20, 10, HeadStart::MostSignificant).unwrap();
        for p in &f {
            // trailing zeros are blanks and get stripped
            let input = digits(&integer_to_tape(p.input).unwrap());
            assert_eq!(p.output, input.trim_end_matches('0'));
            assert_eq!(p.outcome, Outcome::Halted { step: 1 });
        }
    }

    #[test]
    fn cutoff_snapshot() {
        // runs right forever, writing 1s over blanks
        let m = TuringMachine::from_standard("1RA1RA").unwrap();
        let f = computed_function(&m, 2..=2, 3, HeadStart::MostSignificant).unwrap();
        assert_eq!(f[0].outcome, Outcome::MaxStepsReached);
        assert_eq!(f[0].output, "111");
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn histogram_shape() {
        let m = decode_rule(2, 2, 4321).unwrap();
        assert!(behaviour_histogram(&m, 1..=0, 10, HeadStart::MostSignificant).unwrap().is_empty());
        let h = behaviour_histogram(&m, 1..=100, 10, HeadStart::MostSignificant).unwrap();
        assert_eq!(h.len(), 100);
        assert!(h.iter().enumerate().all(|(i, s)| s.input_index == i as u64 + 1));
        assert!(behaviour_histogram(&m, 1..=3, 0, HeadStart::MostSignificant).is_err());
    }

    #[test]
    fn modes() {
        assert!(detect_modes(&[], 4, 0.05).is_empty());
        // two clusters separated by an empty bin
        let lens = [10, 10, 11, 12, 13, 30, 31, 31];
        let m = detect_modes(&lens, 4, 0.05);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].samples + m[1].samples, 8);
        // adjacent heavy bins merge
        assert_eq!(detect_modes(&[3, 4, 5, 6], 4, 0.05).len(), 1);
        // a light bin in between does not split
        let mut lens = vec![0usize; 50];
        lens.extend(vec![8; 50]);
        lens.push(4);
        assert_eq!(detect_modes(&lens, 4, 0.05).len(), 1);
    }
}
