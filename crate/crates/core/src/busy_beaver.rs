//! Σ / S statistics, exhaustive Busy Beaver search and the champion registry.
//!
//! For `k > 2` the "ones" statistic counts every non-blank symbol.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{Outcome, SpaceTimeDiagram};
use crate::error::{Error, Result};
use crate::machine::{rule_space_size, TuringMachine};
use crate::simulate::{run_final, TapeConfiguration, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaltStatistics {
    /// Non-blank cells on the tape at halt.
    pub sigma: u64,
    /// Step at which the machine halted.
    pub steps: u64,
}

pub fn halt_statistics(diagram: &SpaceTimeDiagram) -> Result<HaltStatistics> {
    match diagram.outcome {
        Outcome::Halted { step } => Ok(HaltStatistics {
            sigma: diagram.final_row().iter().filter(|s| !s.is_blank()).count() as u64,
            steps: step,
        }),
        _ => Err(Error::NotHalted),
    }
}

/// Runs `machine` from a blank two-way tape and returns its statistics if
/// it halts within `cutoff` steps.
pub fn blank_tape_statistics(machine: &TuringMachine, cutoff: u64) -> Result<Option<HaltStatistics>> {
    let summary = run_final(machine, &TapeConfiguration::blank(Topology::TwoWay), cutoff)?;
    Ok(match summary.outcome {
        Outcome::Halted { step } => {
            Some(HaltStatistics { sigma: summary.config.non_blank_count() as u64, steps: step })
        }
        _ => None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Searched { cutoff: u64 },
    Registry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BusyBeaverRecord {
    pub n: u32,
    pub k: u32,
    pub sigma: u64,
    pub s_steps: u64,
    /// Rule numbers (ascending) of machines attaining `sigma`.
    pub champions_sigma: Vec<u128>,
    /// Rule numbers (ascending) of machines attaining `s_steps`.
    pub champions_steps: Vec<u128>,
    /// Machines still running at the cutoff.
    pub unresolved: u64,
    /// Machines that halted within the cutoff.
    pub halted: u64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Largest rule space that will be enumerated.
    pub budget: u128,
    /// Rule numbers handed to one worker task.
    pub chunk: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 100_000_000, chunk: 1 << 15 }
    }
}

/// Exhaustive search with default options.
pub fn bb_search(n: u32, k: u32, cutoff: u64) -> Result<BusyBeaverRecord> {
    bb_search_with(n, k, cutoff, SearchOptions::default())
}

/// Runs every machine of `(n, k)` on a blank two-way tape for at most
/// `cutoff` steps and reduces the maxima over the halters.
///
/// Work is split over the current rayon pool; the merge is associative
/// and commutative so the record does not depend on scheduling.
pub fn bb_search_with(n: u32, k: u32, cutoff: u64, opts: SearchOptions) -> Result<BusyBeaverRecord> {
    let size = rule_space_size(n, k)?;
    if size > opts.budget {
        return Err(Error::BudgetExceeded { size, budget: opts.budget });
    }
    if cutoff == 0 {
        return Err(Error::Config("cutoff must be at least 1".into()));
    }
    let size = size as u64;
    let chunk = opts.chunk.max(1);
    let chunks = size.div_ceil(chunk);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(size);
            search_range(n, k, cutoff, start, end)
        })
        .reduce(Partial::default, Partial::merge);
    Ok(BusyBeaverRecord {
        n,
        k,
        sigma: partial.sigma,
        s_steps: partial.steps,
        champions_sigma: partial.sigma_champions,
        champions_steps: partial.steps_champions,
        unresolved: partial.unresolved,
        halted: partial.halted,
        provenance: Provenance::Searched { cutoff },
    })
}

#[derive(Debug, Default, Clone)]
struct Partial {
    sigma: u64,
    steps: u64,
    sigma_champions: Vec<u128>,
    steps_champions: Vec<u128>,
    unresolved: u64,
    halted: u64,
}

fn merge_max(a: (u64, Vec<u128>), b: (u64, Vec<u128>)) -> (u64, Vec<u128>) {
    use std::cmp::Ordering::*;
    match a.0.cmp(&b.0) {
        Greater => a,
        Less => b,
        Equal => {
            let mut all = a.1;
            all.extend(b.1);
            all.sort_unstable();
            all.dedup();
            (a.0, all)
        }
    }
}

impl Partial {
    fn merge(self, other: Partial) -> Partial {
        let (sigma, sigma_champions) =
            merge_max((self.sigma, self.sigma_champions), (other.sigma, other.sigma_champions));
        let (steps, steps_champions) =
            merge_max((self.steps, self.steps_champions), (other.steps, other.steps_champions));
        Partial {
            sigma,
            steps,
            sigma_champions,
            steps_champions,
            unresolved: self.unresolved + other.unresolved,
            halted: self.halted + other.halted,
        }
    }

    fn observe(&mut self, rule: u128, sigma: u64, steps: u64) {
        self.halted += 1;
        if sigma > self.sigma || self.sigma_champions.is_empty() {
            self.sigma = sigma;
            self.sigma_champions.clear();
        }
        if sigma == self.sigma {
            self.sigma_champions.push(rule);
        }
        if steps > self.steps || self.steps_champions.is_empty() {
            self.steps = steps;
            self.steps_champions.clear();
        }
        if steps == self.steps {
            self.steps_champions.push(rule);
        }
    }
}

/// Packed table entry: `write | dir << 4 | next << 8`, `dir` = 0 halt,
/// 1 left, 2 right.
#[derive(Clone, Copy)]
struct Packed(u16);

impl Packed {
    fn from_digit(digit: u32, k: u32) -> Packed {
        if digit < k {
            return Packed(digit as u16);
        }
        let rest = digit - k;
        let dir = if rest % 2 == 1 { 2 } else { 1 };
        let pair = rest / 2;
        let next = pair / k + 1;
        let write = pair % k;
        Packed((write | dir << 4 | next << 8) as u16)
    }
}

/// Simulates rules `start..end` with a dense scratch tape and an
/// odometer over the table digits.
fn search_range(n: u32, k: u32, cutoff: u64, start: u64, end: u64) -> Partial {
    let base = k * (2 * n + 1);
    let len = (n * k) as usize;
    let lut: Vec<Packed> = (0..base).map(|d| Packed::from_digit(d, k)).collect();

    // digits[0] is the most significant digit
    let mut digits = vec![0u32; len];
    let mut rest = start;
    for d in digits.iter_mut().rev() {
        *d = (rest % u64::from(base)) as u32;
        rest /= u64::from(base);
    }
    let mut table: Vec<Packed> = digits.iter().map(|&d| lut[d as usize]).collect();

    let span = 2 * cutoff as usize + 3;
    let center = cutoff as usize + 1;
    let mut tape = vec![0u8; span];
    let mut out = Partial::default();
    let ku = k as usize;

    for rule in start..end {
        let mut state = 1usize;
        let mut pos = center;
        let (mut lo, mut hi) = (center, center);
        let mut halted_at = 0u64;
        for t in 1..=cutoff {
            let e = table[(state - 1) * ku + tape[pos] as usize].0;
            tape[pos] = (e & 0xf) as u8;
            match (e >> 4) & 0xf {
                0 => {
                    halted_at = t;
                    break;
                }
                1 => {
                    pos -= 1;
                    lo = lo.min(pos);
                }
                _ => {
                    pos += 1;
                    hi = hi.max(pos);
                }
            }
            state = (e >> 8) as usize;
        }
        if halted_at > 0 {
            let sigma = tape[lo..=hi].iter().filter(|&&s| s != 0).count() as u64;
            out.observe(u128::from(rule), sigma, halted_at);
        } else {
            out.unresolved += 1;
        }
        tape[lo..=hi].fill(0);

        // advance the odometer
        for i in (0..len).rev() {
            digits[i] += 1;
            if digits[i] < base {
                table[i] = lut[digits[i] as usize];
                break;
            }
            digits[i] = 0;
            table[i] = lut[0];
        }
    }
    out
}

/// One published champion table and the values it attains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryChampion {
    pub table: String,
    pub sigma: u64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub n: u32,
    pub k: u32,
    pub sigma: u64,
    pub steps: u64,
    pub source: String,
    pub champions: Vec<RegistryChampion>,
}

impl RegistryEntry {
    pub fn machines(&self) -> Result<Vec<(TuringMachine, &RegistryChampion)>> {
        self.champions
            .iter()
            .map(|c| {
                let m = TuringMachine::from_standard(&c.table)?;
                if (m.states(), m.symbols()) != (self.n, self.k) {
                    return Err(Error::Registry(format!("table {} is not in ({},{})", c.table, self.n, self.k)));
                }
                Ok((m, c))
            })
            .collect()
    }

    /// The machine attaining the step record.
    pub fn steps_champion(&self) -> Result<TuringMachine> {
        self.machines()?
            .into_iter()
            .find(|(_, c)| c.steps == self.steps)
            .map(|(m, _)| m)
            .ok_or_else(|| Error::Registry(format!("({},{}) has no step champion", self.n, self.k)))
    }

    pub fn to_record(&self) -> Result<BusyBeaverRecord> {
        let mut champions_sigma = Vec::new();
        let mut champions_steps = Vec::new();
        for (m, c) in self.machines()? {
            if c.sigma == self.sigma {
                champions_sigma.push(m.rule_number());
            }
            if c.steps == self.steps {
                champions_steps.push(m.rule_number());
            }
        }
        if champions_sigma.is_empty() || champions_steps.is_empty() {
            return Err(Error::Registry(format!("({},{}) lacks a champion for each record", self.n, self.k)));
        }
        champions_sigma.sort_unstable();
        champions_steps.sort_unstable();
        Ok(BusyBeaverRecord {
            n: self.n,
            k: self.k,
            sigma: self.sigma,
            s_steps: self.steps,
            champions_sigma,
            champions_steps,
            unresolved: 0,
            halted: 0,
            provenance: Provenance::Registry,
        })
    }

    /// Re-runs every champion from a blank tape and checks the recorded
    /// values, stepping at most `max_steps`.
    pub fn verify(&self, max_steps: u64) -> Result<()> {
        for (m, c) in self.machines()? {
            let stats = blank_tape_statistics(&m, max_steps.max(c.steps))?;
            let expected = HaltStatistics { sigma: c.sigma, steps: c.steps };
            if stats != Some(expected) {
                return Err(Error::Registry(format!("{} gives {stats:?}, recorded {expected:?}", c.table)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
struct RegistryFile {
    entry: Vec<RegistryEntry>,
}

/// Text of the shipped registry.
pub const REGISTRY_TOML: &str = include_str!("../data/registry.toml");

/// Parses registry text in the shipped TOML layout.
pub fn parse_registry(text: &str) -> Result<BTreeMap<(u32, u32), RegistryEntry>> {
    let file: RegistryFile = toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
    let mut map = BTreeMap::new();
    for e in file.entry {
        if map.insert((e.n, e.k), e).is_some() {
            return Err(Error::Registry("duplicate (n,k) entry".into()));
        }
    }
    Ok(map)
}

pub fn registry() -> &'static BTreeMap<(u32, u32), RegistryEntry> {
    static REGISTRY: OnceLock<BTreeMap<(u32, u32), RegistryEntry>> = OnceLock::new();
    REGISTRY.get_or_init(|| parse_registry(REGISTRY_TOML).expect("shipped registry parses"))
}

pub fn registry_entry(n: u32, k: u32) -> Result<&'static RegistryEntry> {
    registry().get(&(n, k)).ok_or(Error::UnknownRegistryEntry { n, k })
}

pub fn registry_lookup(n: u32, k: u32) -> Result<BusyBeaverRecord> {
    registry_entry(n, k)?.to_record()
}

/// The registry's step champion for `(n, k)`.
pub fn registry_machine(n: u32, k: u32) -> Result<TuringMachine> {
    registry_entry(n, k)?.steps_champion()
}
