//! Tape configurations, single steps and full runs.

use serde::{Deserialize, Serialize};

use crate::diagram::{Outcome, SpaceTimeDiagram};
use crate::error::{Error, Result};
use crate::machine::{State, Symbol, TuringMachine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Topology {
    #[default]
    TwoWay,
    /// Cells at negative positions do not exist.
    OneWayRight,
}

/// A tape plus head and control state. Positions not stored are blank.
///
/// Cells are kept densely over `[origin, origin + cells.len())` and the
/// range grows on demand.
#[derive(Debug, Clone)]
pub struct TapeConfiguration {
    cells: Vec<Symbol>,
    origin: i64,
    pub head: i64,
    pub state: State,
    pub topology: Topology,
}

impl PartialEq for TapeConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head
            && self.state == other.state
            && self.topology == other.topology
            && self.non_blank_cells() == other.non_blank_cells()
    }
}

impl Eq for TapeConfiguration {}

impl TapeConfiguration {
    /// Blank tape, head at 0, start state.
    pub fn blank(topology: Topology) -> Self {
        TapeConfiguration { cells: Vec::new(), origin: 0, head: 0, state: State::START, topology }
    }

    /// Places `symbols` at positions `start..`, head at `head`, start state.
    pub fn from_symbols(symbols: &[Symbol], start: i64, head: i64, topology: Topology) -> Result<Self> {
        if topology == Topology::OneWayRight && (start < 0 || head < 0) {
            return Err(Error::InvalidTape(format!("one-way tape cannot hold cells at {start} or head at {head}")));
        }
        Ok(TapeConfiguration { cells: symbols.to_vec(), origin: start, head, state: State::START, topology })
    }

    /// Pattern at positions `0..`, head on its leftmost cell.
    pub fn with_input(symbols: &[Symbol]) -> Self {
        TapeConfiguration {
            cells: symbols.to_vec(),
            origin: 0,
            head: 0,
            state: State::START,
            topology: Topology::TwoWay,
        }
    }

    #[inline]
    pub fn get(&self, pos: i64) -> Symbol {
        let idx = pos - self.origin;
        if idx < 0 || idx as usize >= self.cells.len() {
            Symbol::BLANK
        } else {
            self.cells[idx as usize]
        }
    }

    pub fn set(&mut self, pos: i64, symbol: Symbol) {
        if self.cells.is_empty() {
            if symbol.is_blank() {
                return;
            }
            self.origin = pos;
            self.cells.push(symbol);
            return;
        }
        if pos < self.origin {
            if symbol.is_blank() {
                return;
            }
            // grow left with slack so long leftward sweeps stay amortized
            let need = (self.origin - pos) as usize;
            let grow = need.max(self.cells.len());
            let mut cells = vec![Symbol::BLANK; grow];
            cells.extend_from_slice(&self.cells);
            self.cells = cells;
            self.origin -= grow as i64;
        }
        let idx = (pos - self.origin) as usize;
        if idx >= self.cells.len() {
            if symbol.is_blank() {
                return;
            }
            self.cells.resize(idx + 1, Symbol::BLANK);
        }
        self.cells[idx] = symbol;
    }

    /// Inclusive bounds of the non-blank cells, if any.
    pub fn non_blank_extent(&self) -> Option<(i64, i64)> {
        let first = self.cells.iter().position(|s| !s.is_blank())?;
        let last = self.cells.iter().rposition(|s| !s.is_blank())?;
        Some((self.origin + first as i64, self.origin + last as i64))
    }

    pub fn non_blank_cells(&self) -> Vec<(i64, Symbol)> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_blank())
            .map(|(i, s)| (self.origin + i as i64, *s))
            .collect()
    }

    pub fn non_blank_count(&self) -> usize {
        self.cells.iter().filter(|s| !s.is_blank()).count()
    }

    /// Symbols over the inclusive window `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Symbol> {
        (lo..=hi).map(|p| self.get(p)).collect()
    }

    /// Applies one instruction in place.
    #[inline]
    fn advance(&mut self, machine: &TuringMachine) -> Transition {
        let read = self.get(self.head);
        let ins = *machine.instruction(self.state, read);
        self.set(self.head, ins.write);
        self.state = ins.next_state;
        if ins.is_halt() {
            return Transition::Halted;
        }
        let next = self.head + ins.direction.delta();
        if next < 0 && self.topology == Topology::OneWayRight {
            return Transition::FellOff;
        }
        self.head = next;
        Transition::Moved
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Transition {
    Moved,
    Halted,
    FellOff,
}

/// Result of a single [`step`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Running(TapeConfiguration),
    /// The halting instruction's write has been applied.
    Halted(TapeConfiguration),
    /// A one-way tape head tried to move left of cell 0; the write and
    /// state change were applied, the head stays at 0.
    FellOffTape(TapeConfiguration),
}

/// Executes one transition of `machine` from `config`.
pub fn step(machine: &TuringMachine, config: &TapeConfiguration) -> Result<StepOutcome> {
    if config.state.is_halt() {
        return Err(Error::AlreadyHalted);
    }
    check_fits(machine, config)?;
    let mut next = config.clone();
    Ok(match next.advance(machine) {
        Transition::Moved => StepOutcome::Running(next),
        Transition::Halted => StepOutcome::Halted(next),
        Transition::FellOff => StepOutcome::FellOffTape(next),
    })
}

fn check_fits(machine: &TuringMachine, config: &TapeConfiguration) -> Result<()> {
    if u32::from(config.state.0) > machine.states() {
        return Err(Error::InvalidTape(format!("state {} outside machine", config.state.0)));
    }
    if let Some(bad) = config.cells.iter().find(|s| u32::from(s.0) >= machine.symbols()) {
        return Err(Error::InvalidTape(format!("symbol {} outside machine alphabet", bad.0)));
    }
    Ok(())
}

/// Final configuration of a run that does not record rows.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub config: TapeConfiguration,
    pub outcome: Outcome,
    /// Steps actually executed.
    pub steps: u64,
}

/// Runs up to `max_steps` transitions keeping only the final configuration.
pub fn run_final(machine: &TuringMachine, initial: &TapeConfiguration, max_steps: u64) -> Result<RunSummary> {
    check_fits(machine, initial)?;
    let mut config = initial.clone();
    if config.state.is_halt() {
        return Ok(RunSummary { config, outcome: Outcome::Halted { step: 0 }, steps: 0 });
    }
    for t in 1..=max_steps {
        match config.advance(machine) {
            Transition::Moved => {}
            Transition::Halted => return Ok(RunSummary { config, outcome: Outcome::Halted { step: t }, steps: t }),
            Transition::FellOff => {
                return Ok(RunSummary { config, outcome: Outcome::FellOffTape { step: t }, steps: t })
            }
        }
    }
    Ok(RunSummary { config, outcome: Outcome::MaxStepsReached, steps: max_steps })
}

/// Runs `machine` for up to `max_steps` steps recording every row.
///
/// The diagram always has `max_steps + 1` rows. After a halt (or a fall
/// off a one-way tape) the last tape row and head position repeat.
/// The window is the hull of visited head positions and the initial
/// non-blank extent.
pub fn run(machine: &TuringMachine, initial: &TapeConfiguration, max_steps: u64) -> Result<SpaceTimeDiagram> {
    check_fits(machine, initial)?;
    let mut config = initial.clone();
    let mut heads = Vec::with_capacity(max_steps as usize + 1);
    let mut writes = Vec::with_capacity(max_steps as usize);
    heads.push(config.head);
    let mut outcome = Outcome::MaxStepsReached;
    if config.state.is_halt() {
        outcome = Outcome::Halted { step: 0 };
    } else {
        for t in 1..=max_steps {
            let pos = config.head;
            let transition = config.advance(machine);
            writes.push((pos, config.get(pos)));
            heads.push(config.head);
            match transition {
                Transition::Moved => {}
                Transition::Halted => {
                    outcome = Outcome::Halted { step: t };
                    break;
                }
                Transition::FellOff => {
                    outcome = Outcome::FellOffTape { step: t };
                    break;
                }
            }
        }
    }

    let (mut lo, mut hi) = (initial.head, initial.head);
    for &h in &heads {
        lo = lo.min(h);
        hi = hi.max(h);
    }
    if let Some((a, b)) = initial.non_blank_extent() {
        lo = lo.min(a);
        hi = hi.max(b);
    }

    let mut row = initial.window(lo, hi);
    let mut rows = Vec::with_capacity(max_steps as usize + 1);
    rows.push(row.clone());
    for &(pos, sym) in &writes {
        row[(pos - lo) as usize] = sym;
        rows.push(row.clone());
    }
    let last_head = *heads.last().expect("at least the initial head");
    while rows.len() <= max_steps as usize {
        rows.push(row.clone());
        heads.push(last_head);
    }
    Ok(SpaceTimeDiagram { rows, window: (lo, hi), head_positions: heads, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{decode_rule, Instruction, Move};

    fn one_step_halter() -> TuringMachine {
        // (1,0) -> (0,1,0); (1,1) -> move right
        let table = vec![Instruction::halt(Symbol(1)), Instruction::new(State(1), Symbol(1), Move::Right).unwrap()];
        TuringMachine::from_table(1, 2, table).unwrap()
    }

    #[test]
    fn halted_state_is_rejected() {
        let m = one_step_halter();
        let mut c = TapeConfiguration::blank(Topology::TwoWay);
        c.state = State::HALT;
        assert_eq!(step(&m, &c), Err(Error::AlreadyHalted));
    }

    #[test]
    fn one_step_halter_writes_one() {
        let m = one_step_halter();
        let c = TapeConfiguration::blank(Topology::TwoWay);
        match step(&m, &c).unwrap() {
            StepOutcome::Halted(next) => {
                assert_eq!(next.non_blank_cells(), vec![(0, Symbol(1))]);
                assert_eq!(next.head, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        let d = run(&m, &c, 5).unwrap();
        assert_eq!(d.outcome, Outcome::Halted { step: 1 });
        assert_eq!(d.rows.len(), 6);
    }

    #[test]
    fn step_is_deterministic() {
        let m = decode_rule(2, 3, 2_797_435).unwrap();
        let c = TapeConfiguration::with_input(&[Symbol(1), Symbol(2), Symbol(0), Symbol(1)]);
        assert_eq!(step(&m, &c).unwrap(), step(&m, &c).unwrap());
    }

    #[test]
    fn zero_steps_is_initial_row() {
        let m = decode_rule(2, 2, 1234).unwrap();
        let c = TapeConfiguration::with_input(&[Symbol(1), Symbol(0), Symbol(1)]);
        let d = run(&m, &c, 0).unwrap();
        assert_eq!(d.rows, vec![vec![Symbol(1), Symbol(0), Symbol(1)]]);
        assert_eq!(d.outcome, Outcome::MaxStepsReached);
        assert_eq!(d.head_positions, vec![0]);
    }

    #[test]
    fn one_way_tape_falls_off() {
        // always move left
        let m = TuringMachine::from_standard("1LA1LA").unwrap();
        let c = TapeConfiguration::blank(Topology::OneWayRight);
        match step(&m, &c).unwrap() {
            StepOutcome::FellOffTape(next) => {
                assert_eq!(next.head, 0);
                assert_eq!(next.get(0), Symbol(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        let d = run(&m, &c, 4).unwrap();
        assert_eq!(d.outcome, Outcome::FellOffTape { step: 1 });
        assert_eq!(d.rows.len(), 5);
        assert!(TapeConfiguration::from_symbols(&[Symbol(1)], -1, 0, Topology::OneWayRight).is_err());

        let two_way = run(&m, &TapeConfiguration::blank(Topology::TwoWay), 4).unwrap();
        assert_eq!(two_way.outcome, Outcome::MaxStepsReached);
        assert_eq!(two_way.window, (-4, 0));
    }

    #[test]
    fn tape_growth_both_directions() {
        let mut t = TapeConfiguration::blank(Topology::TwoWay);
        t.set(5, Symbol(1));
        t.set(-3, Symbol(2));
        t.set(9, Symbol(1));
        t.set(100, Symbol(0));
        assert_eq!(t.non_blank_extent(), Some((-3, 9)));
        assert_eq!(t.get(-3), Symbol(2));
        assert_eq!(t.get(4), Symbol(0));
        assert_eq!(t.non_blank_count(), 3);
    }

    #[test]
    fn symbols_outside_alphabet_rejected() {
        let m = decode_rule(2, 2, 0).unwrap();
        let c = TapeConfiguration::with_input(&[Symbol(2)]);
        assert!(run(&m, &c, 3).is_err());
    }
}
