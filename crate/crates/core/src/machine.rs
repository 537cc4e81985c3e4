//! The `(n, k)` Turing machine model and its rule-number encoding.
//!
//! A machine has states `1..=n` plus the halting state `0`, and symbols
//! `0..k` with `0` the blank. Its transition table is total: every
//! `(state, symbol)` pair with a non-halting state maps to an
//! [`Instruction`].
//!
//! Rule numbers enumerate the `(k·(2n+1))^(n·k)` machines of a space.
//! Table entries are read state-major, symbol-minor, as base-`k·(2n+1)`
//! digits with the most significant digit first. Digits `0..k` are the
//! halting instructions writing that symbol; the remaining digits encode
//! `k + ((next - 1)·k + write)·2 + (dir + 1)/2` for moves left (`dir = -1`)
//! and right (`dir = +1`).

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest symbol count supported; symbols render as single digits.
pub const MAX_SYMBOLS: u32 = 10;
/// Largest state count supported.
pub const MAX_STATES: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[repr(transparent)]
pub struct Symbol(pub u8);

impl Symbol {
    pub const BLANK: Symbol = Symbol(0);

    pub fn is_blank(self) -> bool {
        self.0 == 0
    }

    pub fn to_digit(self) -> char {
        char::from(b'0' + self.0)
    }

    pub fn from_digit(c: char) -> Option<Symbol> {
        c.to_digit(10).map(|d| Symbol(d as u8))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(transparent)]
pub struct State(pub u8);

impl State {
    pub const HALT: State = State(0);
    pub const START: State = State(1);

    pub fn is_halt(self) -> bool {
        self.0 == 0
    }
}

/// Head movement. Only halting instructions use [`Move::Stay`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn from_delta(d: i64) -> Option<Move> {
        match d {
            -1 => Some(Move::Left),
            0 => Some(Move::Stay),
            1 => Some(Move::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instruction {
    pub next_state: State,
    pub write: Symbol,
    pub direction: Move,
}

impl Instruction {
    /// Builds an instruction, enforcing that exactly the halting
    /// instructions stay in place.
    pub fn new(next_state: State, write: Symbol, direction: Move) -> Result<Self> {
        if next_state.is_halt() != (direction == Move::Stay) {
            return Err(Error::InvalidInstruction(format!(
                "next state {} with direction {}",
                next_state.0,
                direction.delta()
            )));
        }
        Ok(Instruction { next_state, write, direction })
    }

    pub fn halt(write: Symbol) -> Self {
        Instruction { next_state: State::HALT, write, direction: Move::Stay }
    }

    pub fn is_halt(&self) -> bool {
        self.next_state.is_halt()
    }

    fn digit(&self, k: u32) -> u32 {
        let write = u32::from(self.write.0);
        if self.is_halt() {
            write
        } else {
            let next = u32::from(self.next_state.0) - 1;
            let right = u32::from(self.direction == Move::Right);
            k + (next * k + write) * 2 + right
        }
    }

    fn from_digit(digit: u32, k: u32) -> Self {
        if digit < k {
            return Instruction::halt(Symbol(digit as u8));
        }
        let rest = digit - k;
        let direction = if rest % 2 == 1 { Move::Right } else { Move::Left };
        let pair = rest / 2;
        Instruction { next_state: State((pair / k + 1) as u8), write: Symbol((pair % k) as u8), direction }
    }
}

fn check_dimensions(n: u32, k: u32) -> Result<()> {
    if n == 0 || n > MAX_STATES || !(2..=MAX_SYMBOLS).contains(&k) {
        return Err(Error::InvalidDimensions { n, k });
    }
    Ok(())
}

/// Number of distinct machines with `n` states and `k` symbols,
/// `(k·(2n+1))^(n·k)`.
pub fn rule_space_size(n: u32, k: u32) -> Result<u128> {
    check_dimensions(n, k)?;
    let base = u128::from(k * (2 * n + 1));
    base.checked_pow(n * k).ok_or(Error::Overflow { n, k })
}

/// A deterministic single-tape machine with a total transition table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringMachine {
    n: u32,
    k: u32,
    table: Vec<Instruction>,
    rule_number: u128,
}

impl TuringMachine {
    /// Builds a machine from a table listed state-major (state 1 first),
    /// symbol-minor.
    pub fn from_table(n: u32, k: u32, table: Vec<Instruction>) -> Result<Self> {
        rule_space_size(n, k)?;
        if table.len() != (n * k) as usize {
            return Err(Error::InvalidTable(format!("expected {} entries, got {}", n * k, table.len())));
        }
        for (i, ins) in table.iter().enumerate() {
            Instruction::new(ins.next_state, ins.write, ins.direction)?;
            if u32::from(ins.next_state.0) > n || u32::from(ins.write.0) >= k {
                return Err(Error::InvalidTable(format!(
                    "entry {} ({},{}) is outside the ({n},{k}) space",
                    i,
                    i as u32 / k + 1,
                    i as u32 % k
                )));
            }
        }
        let base = u128::from(k * (2 * n + 1));
        let rule_number = table.iter().fold(0u128, |acc, ins| acc * base + u128::from(ins.digit(k)));
        Ok(TuringMachine { n, k, table, rule_number })
    }

    pub fn states(&self) -> u32 {
        self.n
    }

    pub fn symbols(&self) -> u32 {
        self.k
    }

    pub fn rule_number(&self) -> u128 {
        self.rule_number
    }

    pub fn table(&self) -> &[Instruction] {
        &self.table
    }

    /// Instruction for a non-halting `state` reading `symbol`.
    #[inline]
    pub fn instruction(&self, state: State, symbol: Symbol) -> &Instruction {
        debug_assert!(!state.is_halt());
        &self.table[(usize::from(state.0) - 1) * self.k as usize + usize::from(symbol.0)]
    }

    /// Renders the table in the compact `1RB1LB_1LA1RH` notation.
    pub fn to_standard(&self) -> String {
        let rows: Vec<String> = self
            .table
            .chunks(self.k as usize)
            .map(|row| {
                row.iter()
                    .map(|ins| {
                        let dir = match ins.direction {
                            Move::Left => 'L',
                            Move::Right => 'R',
                            // halting entries carry no direction
                            Move::Stay => 'N',
                        };
                        let st = if ins.is_halt() { 'H' } else { char::from(b'A' + ins.next_state.0 - 1) };
                        format!("{}{}{}", ins.write.to_digit(), dir, st)
                    })
                    .collect()
            })
            .collect();
        rows.join("_")
    }

    /// Parses the compact notation, e.g. `1RB1LB_1LA1RH`.
    ///
    /// States are letters starting at `A`; `H` or `Z` halts. Halting
    /// entries may carry any direction letter, which is discarded.
    pub fn from_standard(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.trim().split('_').collect();
        let n = rows.len() as u32;
        let first = rows.first().map(|r| r.len()).unwrap_or(0);
        if first == 0 || !first.is_multiple_of(3) {
            return Err(Error::Parse(format!("bad table row `{}`", rows[0])));
        }
        let k = (first / 3) as u32;
        check_dimensions(n, k)?;
        let mut table = Vec::with_capacity((n * k) as usize);
        for row in &rows {
            let cells: Vec<char> = row.chars().collect();
            if cells.len() != first {
                return Err(Error::Parse(format!("row `{row}` has the wrong length")));
            }
            for cell in cells.chunks(3) {
                let write =
                    Symbol::from_digit(cell[0]).ok_or_else(|| Error::Parse(format!("bad symbol `{}`", cell[0])))?;
                let halt = matches!(cell[2], 'H' | 'Z');
                let ins = if halt {
                    Instruction::halt(write)
                } else {
                    let direction = match cell[1] {
                        'L' => Move::Left,
                        'R' => Move::Right,
                        c => return Err(Error::Parse(format!("bad direction `{c}`"))),
                    };
                    if !cell[2].is_ascii_uppercase() {
                        return Err(Error::Parse(format!("bad state `{}`", cell[2])));
                    }
                    let next = State(cell[2] as u8 - b'A' + 1);
                    Instruction::new(next, write, direction)?
                };
                table.push(ins);
            }
        }
        TuringMachine::from_table(n, k, table)
    }
}

/// Canonical rule number of `machine`.
pub fn encode_rule(machine: &TuringMachine) -> u128 {
    machine.rule_number
}

/// Inverse of [`encode_rule`].
pub fn decode_rule(n: u32, k: u32, rule: u128) -> Result<TuringMachine> {
    let size = rule_space_size(n, k)?;
    if rule >= size {
        return Err(Error::RuleOutOfRange { n, k, rule, size });
    }
    let base = u128::from(k * (2 * n + 1));
    let len = (n * k) as usize;
    let mut table = vec![Instruction::halt(Symbol::BLANK); len];
    let mut rest = rule;
    for slot in table.iter_mut().rev() {
        *slot = Instruction::from_digit((rest % base) as u32, k);
        rest /= base;
    }
    Ok(TuringMachine { n, k, table, rule_number: rule })
}

/// Text form: a header line `n k rule_number` followed by one
/// `state symbol -> next write dir` line per table entry.
impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n, self.k, self.rule_number)?;
        for (i, ins) in self.table.iter().enumerate() {
            let state = i as u32 / self.k + 1;
            let symbol = i as u32 % self.k;
            writeln!(f, "{} {} -> {} {} {}", state, symbol, ins.next_state.0, ins.write.0, ins.direction.delta())?;
        }
        Ok(())
    }
}

impl FromStr for TuringMachine {
    type Err = Error;

    /// Accepts the header alone or the header plus a full table. When a
    /// table is present it must agree with the rule number.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty machine text".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("expected `n k rule_number`, got `{header}`")));
        }
        let parse_u32 = |t: &str| t.parse::<u32>().map_err(|e| Error::Parse(format!("`{t}`: {e}")));
        let n = parse_u32(fields[0])?;
        let k = parse_u32(fields[1])?;
        let rule: u128 = fields[2].parse().map_err(|e| Error::Parse(format!("`{}`: {e}", fields[2])))?;
        let machine = decode_rule(n, k, rule)?;

        let entries: Vec<&str> = lines.collect();
        if entries.is_empty() {
            return Ok(machine);
        }
        let mut table: Vec<Option<Instruction>> = vec![None; (n * k) as usize];
        for line in entries {
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Parse(format!("missing `->` in `{line}`")))?;
            let lhs: Vec<i64> = parse_ints(lhs)?;
            let rhs: Vec<i64> = parse_ints(rhs)?;
            if lhs.len() != 2 || rhs.len() != 3 {
                return Err(Error::Parse(format!("malformed entry `{line}`")));
            }
            let (state, symbol) = (lhs[0], lhs[1]);
            if state < 1 || state > i64::from(n) || symbol < 0 || symbol >= i64::from(k) {
                return Err(Error::Parse(format!("entry `{line}` outside ({n},{k})")));
            }
            if rhs[0] < 0 || rhs[0] > i64::from(n) || rhs[1] < 0 || rhs[1] >= i64::from(k) {
                return Err(Error::Parse(format!("instruction `{line}` outside ({n},{k})")));
            }
            let dir = Move::from_delta(rhs[2]).ok_or_else(|| Error::Parse(format!("bad direction in `{line}`")))?;
            let ins = Instruction::new(State(rhs[0] as u8), Symbol(rhs[1] as u8), dir)?;
            let slot = &mut table[((state - 1) * i64::from(k) + symbol) as usize];
            if slot.replace(ins).is_some() {
                return Err(Error::Parse(format!("duplicate entry `{line}`")));
            }
        }
        let table: Vec<Instruction> =
            table.into_iter().collect::<Option<_>>().ok_or_else(|| Error::Parse("table is not total".into()))?;
        let explicit = TuringMachine::from_table(n, k, table)?;
        if explicit.rule_number != rule {
            return Err(Error::Parse(format!("table encodes rule {} but header says {rule}", explicit.rule_number)));
        }
        Ok(explicit)
    }
}

/// Draws `count` uniform rule numbers from a generator seeded with `seed`
/// and decodes them.
pub fn sample_machines(n: u32, k: u32, count: usize, seed: u64) -> Result<Vec<TuringMachine>> {
    let size = rule_space_size(n, k)?;
    let mut rng = crate::seed::rng(seed);
    (0..count).map(|_| decode_rule(n, k, rng.gen_range(0..size))).collect()
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split_whitespace().map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("`{t}`: {e}")))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_sizes() {
        assert_eq!(rule_space_size(1, 2).unwrap(), 36);
        assert_eq!(rule_space_size(2, 2).unwrap(), 10_000);
        assert_eq!(rule_space_size(3, 2).unwrap(), 7_529_536);
        assert_eq!(rule_space_size(2, 3).unwrap(), 11_390_625);
        for n in 1..=6u32 {
            let classic = u128::from(4 * n + 2).pow(2 * n);
            assert_eq!(rule_space_size(n, 2).unwrap(), classic);
        }
        assert!(matches!(rule_space_size(64, 10), Err(Error::Overflow { .. })));
        assert!(rule_space_size(0, 2).is_err());
        assert!(rule_space_size(2, 1).is_err());
    }

    #[test]
    fn zero_rule_is_all_halt_blank() {
        let m = decode_rule(2, 2, 0).unwrap();
        assert!(m.table().iter().all(|i| *i == Instruction::halt(Symbol::BLANK)));
        assert_eq!(encode_rule(&m), 0);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(decode_rule(2, 2, 10_000), Err(Error::RuleOutOfRange { .. })));
        let m = decode_rule(2, 2, 9_999).unwrap();
        assert_eq!(encode_rule(&m), 9_999);
    }

    #[test]
    fn exhaustive_round_trip_small_spaces() {
        for (n, k) in [(1, 2), (2, 2)] {
            for rule in 0..rule_space_size(n, k).unwrap() {
                let m = decode_rule(n, k, rule).unwrap();
                let rebuilt = TuringMachine::from_table(n, k, m.table().to_vec()).unwrap();
                assert_eq!(rebuilt.rule_number(), rule);
            }
        }
    }

    #[test]
    fn digit_layout() {
        // (1,2): base 6, digits 0,1 halt; 2..6 move to state 1
        let m = decode_rule(1, 2, 2 * 6 + 5).unwrap();
        assert_eq!(m.table()[0], Instruction::new(State(1), Symbol(0), Move::Left).unwrap());
        assert_eq!(m.table()[1], Instruction::new(State(1), Symbol(1), Move::Right).unwrap());
    }

    #[test]
    fn instruction_invariant() {
        assert!(Instruction::new(State(0), Symbol(1), Move::Left).is_err());
        assert!(Instruction::new(State(1), Symbol(1), Move::Stay).is_err());
        assert!(Instruction::new(State(0), Symbol(1), Move::Stay).is_ok());
    }

    #[test]
    fn standard_notation() {
        let m = TuringMachine::from_standard("1RB1LB_1LA1RH").unwrap();
        assert_eq!((m.states(), m.symbols()), (2, 2));
        assert_eq!(m.to_standard(), "1RB1LB_1LA1NH");
        assert_eq!(TuringMachine::from_standard(&m.to_standard()).unwrap(), m);
        assert!(TuringMachine::from_standard("1RB1L").is_err());
        assert!(TuringMachine::from_standard("1RC1LB_1LA1RH").is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        assert!(sample_machines(2, 3, 0, 1).unwrap().is_empty());
        let a = sample_machines(2, 3, 50, 99).unwrap();
        assert_eq!(a, sample_machines(2, 3, 50, 99).unwrap());
        assert_ne!(a, sample_machines(2, 3, 50, 100).unwrap());
    }

    #[test]
    fn sampling_is_uniform_in_mean() {
        let size = rule_space_size(2, 3).unwrap();
        let sample = sample_machines(2, 3, 10_000, 1).unwrap();
        let mean = sample.iter().map(|m| m.rule_number() as f64).sum::<f64>() / sample.len() as f64;
        let expected = (size - 1) as f64 / 2.0;
        assert!((mean - expected).abs() / expected < 0.01, "mean {mean} vs {expected}");
    }

    #[test]
    fn text_form() {
        let m = decode_rule(2, 3, 2_797_435).unwrap();
        let text = m.to_string();
        assert_eq!(text.parse::<TuringMachine>().unwrap(), m);
        assert_eq!("2 3 2797435".parse::<TuringMachine>().unwrap(), m);

        let wrong = text.replacen("2 3 2797435", "2 3 2797436", 1);
        assert!(wrong.parse::<TuringMachine>().is_err());
        let partial: String = text.lines().take(3).collect::<Vec<_>>().join("\n");
        assert!(partial.parse::<TuringMachine>().is_err());
    }
}
