//! Coarse-graining and the machine-emulates-machine search.
//!
//! Pipeline for one emulator, one transform `t` of block size `b`, and an
//! initial pattern `I` of `L` cells:
//!
//! 1. The emulator starts in state 1 with its head on cell 0 of a tape
//!    holding `encode(t, I)` at cells `0..b·L`. The surrounding background
//!    is filled with copies of `t(blank)` far enough out that the head
//!    cannot leave it within the run.
//! 2. It runs for `b·m` steps (rows after a halt repeat the final tape).
//! 3. Rows `0, b, 2b, …, b·m` are cut into blocks aligned on cell 0 and
//!    decoded through the inverse of `t`.
//! 4. A candidate matches when its own `m`-step run on `I` (head on cell 0,
//!    state 1) has the same rows, with cells outside either window read as
//!    blanks. Internal states are never compared.
//!
//! Decoded evolutions that only repeat the initial row are trivial and
//! dropped.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::SpaceTimeDiagram;
use crate::error::{Error, Result};
use crate::machine::{decode_rule, Symbol, TuringMachine};
use crate::simulate::{run, TapeConfiguration, Topology};
use crate::transform::{decode_row, encode_tape, BlockTransform, DecodeFailure};

/// Decoded rows of a coarse-grained run, one per emulated step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseGrainedEvolution {
    pub rows: Vec<Vec<Symbol>>,
    pub m: u64,
    /// Inclusive decoded cell bounds.
    pub window: (i64, i64),
}

/// An evolution with the columns that are blank in every row removed
/// from both sides. Two evolutions agree under blank padding exactly when
/// their canonical forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalEvolution {
    /// Position of the first kept column (0 when every cell is blank).
    pub offset: i64,
    pub rows: Vec<Vec<Symbol>>,
}

impl CanonicalEvolution {
    /// `offset:row0|row1|…` with one digit per cell.
    pub fn serialize(&self) -> String {
        let rows: Vec<String> = self.rows.iter().map(|r| r.iter().map(|s| s.to_digit()).collect()).collect();
        format!("{}:{}", self.offset, rows.join("|"))
    }

    /// Hex of [`serialize`](Self::serialize).
    pub fn digest(&self) -> String {
        hex::encode(self.serialize())
    }
}

impl CoarseGrainedEvolution {
    /// The first `m + 1` rows of a direct run.
    pub fn from_diagram(diagram: &SpaceTimeDiagram, m: u64) -> Result<Self> {
        let needed = m as usize + 1;
        if diagram.rows.len() < needed {
            return Err(Error::InvalidTape(format!("diagram has {} rows, need {needed}", diagram.rows.len())));
        }
        Ok(CoarseGrainedEvolution { rows: diagram.rows[..needed].to_vec(), m, window: diagram.window })
    }

    pub fn canonical(&self) -> CanonicalEvolution {
        let width = self.rows.first().map(Vec::len).unwrap_or(0);
        let used = |c: usize| self.rows.iter().any(|r| !r[c].is_blank());
        let first = (0..width).find(|&c| used(c));
        match first {
            None => CanonicalEvolution { offset: 0, rows: vec![Vec::new(); self.rows.len()] },
            Some(first) => {
                let last = (0..width).rfind(|&c| used(c)).expect("a used column exists");
                CanonicalEvolution {
                    offset: self.window.0 + first as i64,
                    rows: self.rows.iter().map(|r| r[first..=last].to_vec()).collect(),
                }
            }
        }
    }

    pub fn digest(&self) -> String {
        self.canonical().digest()
    }
}

/// True when every row equals the initial row.
pub fn is_trivial(evolution: &CoarseGrainedEvolution) -> bool {
    match evolution.rows.split_first() {
        None => true,
        Some((first, rest)) => rest.iter().all(|r| r == first),
    }
}

/// Samples rows `0, b, …, b·m` of `diagram` and decodes each through `t`.
///
/// Blocks are aligned so that cell 0 starts a block; cells outside the
/// diagram window read as blank.
pub fn decode_rows(
    t: &BlockTransform,
    diagram: &SpaceTimeDiagram,
    m: u64,
) -> Result<CoarseGrainedEvolution, DecodeFailure> {
    let b = i64::from(t.block_size());
    let needed = (b as usize) * m as usize + 1;
    if diagram.rows.len() < needed {
        return Err(DecodeFailure::TooFewRows { needed, available: diagram.rows.len() });
    }
    let (lo, hi) = diagram.window;
    let block_lo = lo.div_euclid(b);
    let block_hi = hi.div_euclid(b);
    let raw_lo = block_lo * b;
    let raw_len = ((block_hi - block_lo + 1) * b) as usize;
    let left = (lo - raw_lo) as usize;

    let mut rows = Vec::with_capacity(m as usize + 1);
    let mut aligned = vec![Symbol::BLANK; raw_len];
    for step in 0..=m {
        let row = &diagram.rows[(step as i64 * b) as usize];
        aligned.fill(Symbol::BLANK);
        aligned[left..left + row.len()].copy_from_slice(row);
        rows.push(decode_row(t, &aligned, step)?);
    }
    Ok(CoarseGrainedEvolution { rows, m, window: (block_lo, block_hi) })
}

/// Encodes `initial` with `t`, runs `emulator` for `b·m` steps and decodes.
pub fn coarse_grained_run(
    emulator: &TuringMachine,
    t: &BlockTransform,
    initial: &[Symbol],
    m: u64,
) -> Result<Result<CoarseGrainedEvolution, DecodeFailure>> {
    if t.symbols() != emulator.symbols() {
        return Err(Error::InvalidTransform(format!(
            "transform over {} symbols used with a {}-symbol machine",
            t.symbols(),
            emulator.symbols()
        )));
    }
    let b = t.block_size() as usize;
    let pad = m as usize + 1;
    let background = t.block(Symbol::BLANK);
    let mut cells = Vec::with_capacity(b * (initial.len() + 2 * pad));
    for _ in 0..pad {
        cells.extend_from_slice(background);
    }
    cells.extend(encode_tape(t, initial));
    for _ in 0..pad {
        cells.extend_from_slice(background);
    }
    let start = -((b * pad) as i64);
    let tape = TapeConfiguration::from_symbols(&cells, start, 0, Topology::TwoWay)?;
    let diagram = run(emulator, &tape, b as u64 * m)?;
    Ok(decode_rows(t, &diagram, m))
}

/// Direct `m`-step run of `machine` on `initial`.
pub fn direct_evolution(machine: &TuringMachine, initial: &[Symbol], m: u64) -> Result<CoarseGrainedEvolution> {
    let diagram = run(machine, &TapeConfiguration::with_input(initial), m)?;
    CoarseGrainedEvolution::from_diagram(&diagram, m)
}

/// One verified emulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmulationRecord {
    pub n: u32,
    pub k: u32,
    pub emulator_rule: u128,
    pub transform_id: u128,
    pub block_size: u32,
    pub emulated_rule: u128,
    pub initial_condition: Vec<Symbol>,
    pub m: u64,
    /// Hex of the canonical serialization of the decoded rows.
    pub evolution_digest: String,
}

impl EmulationRecord {
    pub fn initial_digits(&self) -> String {
        self.initial_condition.iter().map(|s| s.to_digit()).collect()
    }

    /// Re-runs both sides of the match from the stored fields.
    pub fn verify(&self) -> Result<bool> {
        let emulator = decode_rule(self.n, self.k, self.emulator_rule)?;
        let emulated = decode_rule(self.n, self.k, self.emulated_rule)?;
        let t = BlockTransform::from_id(self.k, self.block_size, self.transform_id)?;
        let coarse = match coarse_grained_run(&emulator, &t, &self.initial_condition, self.m)? {
            Ok(e) => e,
            Err(_) => return Ok(false),
        };
        let direct = direct_evolution(&emulated, &self.initial_condition, self.m)?;
        Ok(!is_trivial(&coarse) && coarse.digest() == self.evolution_digest && direct.digest() == self.evolution_digest)
    }
}

/// Records plus bookkeeping for one emulator.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmulationSearch {
    pub records: Vec<EmulationRecord>,
    /// Transforms whose decoded evolution was trivial.
    pub trivial_filtered: u64,
    /// Transforms whose output could not be decoded.
    pub decode_failures: u64,
}

/// All records for `emulator` over `transforms × candidates`.
///
/// Output is ordered by transform id, then candidate rule number, then
/// position in `candidates`; it does not depend on the rayon pool size.
pub fn find_emulations(
    emulator: &TuringMachine,
    candidates: &[TuringMachine],
    transforms: &[BlockTransform],
    initial: &[Symbol],
    m: u64,
) -> Result<Vec<EmulationRecord>> {
    Ok(search_emulations(emulator, candidates, transforms, initial, m)?.records)
}

pub fn search_emulations(
    emulator: &TuringMachine,
    candidates: &[TuringMachine],
    transforms: &[BlockTransform],
    initial: &[Symbol],
    m: u64,
) -> Result<EmulationSearch> {
    let (n, k) = (emulator.states(), emulator.symbols());
    if m == 0 {
        return Err(Error::Config("emulated step count must be at least 1".into()));
    }
    if let Some(c) = candidates.iter().find(|c| (c.states(), c.symbols()) != (n, k)) {
        return Err(Error::Config(format!(
            "candidate in ({},{}) does not share the emulator's ({n},{k}) space",
            c.states(),
            c.symbols()
        )));
    }
    if let Some(s) = initial.iter().find(|s| u32::from(s.0) >= k) {
        return Err(Error::InvalidTape(format!("symbol {} outside the alphabet", s.0)));
    }

    let evolutions: Vec<CanonicalEvolution> =
        candidates.par_iter().map(|c| direct_evolution(c, initial, m).map(|e| e.canonical())).collect::<Result<_>>()?;
    let mut index: HashMap<&CanonicalEvolution, Vec<usize>> = HashMap::new();
    for (i, e) in evolutions.iter().enumerate() {
        index.entry(e).or_default().push(i);
    }

    enum Outcome {
        Failed,
        Trivial,
        Decoded(CanonicalEvolution),
    }
    let outcomes: Vec<Outcome> = transforms
        .par_iter()
        .map(|t| {
            Ok(match coarse_grained_run(emulator, t, initial, m)? {
                Err(_) => Outcome::Failed,
                Ok(e) if is_trivial(&e) => Outcome::Trivial,
                Ok(e) => Outcome::Decoded(e.canonical()),
            })
        })
        .collect::<Result<_>>()?;

    let mut search = EmulationSearch::default();
    let mut keyed = Vec::new();
    for (t, outcome) in transforms.iter().zip(outcomes) {
        let evolution = match outcome {
            Outcome::Failed => {
                search.decode_failures += 1;
                continue;
            }
            Outcome::Trivial => {
                search.trivial_filtered += 1;
                continue;
            }
            Outcome::Decoded(e) => e,
        };
        let Some(matches) = index.get(&evolution) else { continue };
        let digest = evolution.digest();
        for &ci in matches {
            let c = &candidates[ci];
            keyed.push((
                (t.id(), c.rule_number(), ci),
                EmulationRecord {
                    n,
                    k,
                    emulator_rule: emulator.rule_number(),
                    transform_id: t.id(),
                    block_size: t.block_size(),
                    emulated_rule: c.rule_number(),
                    initial_condition: initial.to_vec(),
                    m,
                    evolution_digest: digest.clone(),
                },
            ));
        }
    }
    keyed.sort_by_key(|k| k.0);
    search.records = keyed.into_iter().map(|(_, r)| r).collect();
    Ok(search)
}

/// Raw record count, or the number of distinct evolution digests.
pub fn count_emulations(records: &[EmulationRecord], distinct: bool) -> u64 {
    if distinct {
        records.iter().map(|r| r.evolution_digest.as_str()).collect::<BTreeSet<_>>().len() as u64
    } else {
        records.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Outcome as RunOutcome;
    use crate::transform::enumerate_transforms;

    fn syms(s: &[u8]) -> Vec<Symbol> {
        s.iter().map(|&x| Symbol(x)).collect()
    }

    fn evo(rows: &[&[u8]], lo: i64) -> CoarseGrainedEvolution {
        CoarseGrainedEvolution {
            rows: rows.iter().map(|r| syms(r)).collect(),
            m: rows.len() as u64 - 1,
            window: (lo, lo + rows[0].len() as i64 - 1),
        }
    }

    #[test]
    fn triviality() {
        assert!(is_trivial(&evo(&[&[1, 0, 1]], 0)));
        assert!(is_trivial(&evo(&[&[1, 0, 1], &[1, 0, 1], &[1, 0, 1]], 0)));
        assert!(!is_trivial(&evo(&[&[1, 0, 1], &[1, 0, 1], &[1, 1, 1]], 0)));
    }

    #[test]
    fn canonical_form_ignores_blank_margins() {
        let a = evo(&[&[0, 1, 2, 0], &[0, 1, 0, 0]], -1);
        let b = evo(&[&[1, 2], &[1, 0]], 0);
        let c = evo(&[&[1, 2], &[1, 0]], 1);
        assert_eq!(a.canonical(), b.canonical());
        assert_ne!(a.canonical(), c.canonical());
        assert_eq!(b.canonical().serialize(), "0:12|10");
        let blank = evo(&[&[0, 0], &[0, 0]], 3);
        assert_eq!(blank.canonical().serialize(), "0:|");
    }

    #[test]
    fn zero_step_decode_recovers_tape() {
        let m = decode_rule(2, 3, 77).unwrap();
        let initial = syms(&[1, 2, 0, 1]);
        for t in enumerate_transforms(3, 2, true).unwrap().iter().step_by(37) {
            let tape = TapeConfiguration::with_input(&encode_tape(t, &initial));
            let d = run(&m, &tape, 0).unwrap();
            let e = decode_rows(t, &d, 0).unwrap();
            // leading/trailing blank blocks may be dropped by the window
            let direct = evo(&[&[1, 2, 0, 1]], 0);
            assert_eq!(e.canonical(), direct.canonical());
        }
    }

    #[test]
    fn decode_reports_first_invalid_block() {
        let t = BlockTransform::new(3, vec![syms(&[1, 2]), syms(&[2, 0]), syms(&[2, 2])]).unwrap();
        let d = SpaceTimeDiagram::parse_rows("1220\n1200\n", 0, RunOutcome::MaxStepsReached).unwrap();
        let d = SpaceTimeDiagram { head_positions: vec![0, 0], ..d };
        // b = 2, m = 0 samples row 0 only
        assert!(decode_rows(&t, &d, 0).is_ok());
        let bad = SpaceTimeDiagram::parse_rows("1200\n", 0, RunOutcome::MaxStepsReached).unwrap();
        assert_eq!(decode_rows(&t, &bad, 0), Err(DecodeFailure::InvalidBlock { step: 0, block: 1 }));
        assert!(matches!(decode_rows(&t, &d, 1), Err(DecodeFailure::TooFewRows { .. })));
    }

    #[test]
    fn decode_aligns_on_cell_zero() {
        let t = BlockTransform::new(2, vec![syms(&[0, 0]), syms(&[1, 1])]).unwrap();
        // cells -1..=2; blocks are (-2,-1), (0,1), (2,3)
        let d = SpaceTimeDiagram::parse_rows("0110\n", -1, RunOutcome::MaxStepsReached).unwrap();
        let e = decode_rows(&t, &d, 0).unwrap();
        assert_eq!(e.window, (-1, 1));
        assert_eq!(e.rows, vec![syms(&[0, 1, 0])]);
        let d = SpaceTimeDiagram::parse_rows("1110\n", -1, RunOutcome::MaxStepsReached).unwrap();
        assert_eq!(decode_rows(&t, &d, 0), Err(DecodeFailure::InvalidBlock { step: 0, block: 0 }));
    }

    #[test]
    fn identity_self_emulation() {
        let m = TuringMachine::from_standard("1RB2LB1RH_2LA2RB1LB").unwrap();
        let initial = syms(&[0, 0, 1, 0, 1, 0]);
        let recs = find_emulations(&m, std::slice::from_ref(&m), &[BlockTransform::identity(3)], &initial, 2).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(recs[0].verify().unwrap());
    }

    #[test]
    fn immediate_halter_emulates_nothing() {
        // writes what it reads and halts
        let m = TuringMachine::from_standard("0RH1RH2RH_0RH1RH2RH").unwrap();
        let initial = syms(&[1, 2, 0, 1]);
        let ts = enumerate_transforms(3, 2, true).unwrap();
        let cands = vec![m.clone(), decode_rule(2, 3, 5_000_000).unwrap()];
        let s = search_emulations(&m, &cands, &ts, &initial, 2).unwrap();
        assert!(s.records.is_empty());
        assert_eq!(s.trivial_filtered + s.decode_failures, ts.len() as u64);
    }

    #[test]
    fn counting() {
        assert_eq!(count_emulations(&[], false), 0);
        assert_eq!(count_emulations(&[], true), 0);
        let r = EmulationRecord {
            n: 2,
            k: 3,
            emulator_rule: 1,
            transform_id: 2,
            block_size: 2,
            emulated_rule: 3,
            initial_condition: syms(&[1]),
            m: 1,
            evolution_digest: "ab".into(),
        };
        let mut other = r.clone();
        other.emulated_rule = 4;
        assert_eq!(count_emulations(&[r.clone(), other.clone()], false), 2);
        assert_eq!(count_emulations(&[r, other], true), 1);
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let m = decode_rule(2, 3, 1).unwrap();
        let c = decode_rule(2, 2, 1).unwrap();
        assert!(find_emulations(&m, &[c], &[BlockTransform::identity(3)], &syms(&[1]), 1).is_err());
        assert!(find_emulations(&m, &[], &[BlockTransform::identity(3)], &syms(&[1]), 0).is_err());
    }
}
