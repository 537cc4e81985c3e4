use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::Symbol;

/// How a run ended.
///
/// `MaxStepsReached` says nothing about whether the machine would halt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Halted { step: u64 },
    MaxStepsReached,
    FellOffTape { step: u64 },
}

impl Outcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, Outcome::Halted { .. })
    }

    /// Short label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Halted { .. } => "halted",
            Outcome::MaxStepsReached => "cutoff",
            Outcome::FellOffTape { .. } => "fell_off",
        }
    }
}

/// Tape rows over a fixed window, one per time step starting at step 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeDiagram {
    pub rows: Vec<Vec<Symbol>>,
    /// Inclusive cell bounds of every row.
    pub window: (i64, i64),
    pub head_positions: Vec<i64>,
    pub outcome: Outcome,
}

impl SpaceTimeDiagram {
    pub fn width(&self) -> usize {
        (self.window.1 - self.window.0 + 1) as usize
    }

    pub fn final_row(&self) -> &[Symbol] {
        self.rows.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Widens the window to `lo..=hi` (which must contain the current one),
    /// filling new cells with blanks.
    pub fn padded(&self, lo: i64, hi: i64) -> Result<SpaceTimeDiagram> {
        if lo > self.window.0 || hi < self.window.1 {
            return Err(Error::InvalidTape(format!("window {lo}..={hi} does not contain {:?}", self.window)));
        }
        let left = (self.window.0 - lo) as usize;
        let right = (hi - self.window.1) as usize;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![Symbol::BLANK; left];
                row.extend_from_slice(r);
                row.resize(row.len() + right, Symbol::BLANK);
                row
            })
            .collect();
        Ok(SpaceTimeDiagram {
            rows,
            window: (lo, hi),
            head_positions: self.head_positions.clone(),
            outcome: self.outcome,
        })
    }

    /// Rows concatenated as one digit per cell, no separators.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.rows.len() * self.width());
        for row in &self.rows {
            out.extend(row.iter().map(|s| b'0' + s.0));
        }
        out
    }

    /// Binary (k = 2) or graymap (k > 2) portable image, one pixel per cell,
    /// darker for larger symbols.
    pub fn write_pnm<W: Write>(&self, mut w: W, k: u32) -> std::io::Result<()> {
        let (width, height) = (self.width(), self.rows.len());
        if k <= 2 {
            writeln!(w, "P1\n{width} {height}")?;
            for row in &self.rows {
                let line: Vec<String> = row.iter().map(|s| s.0.to_string()).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        } else {
            let max = k - 1;
            writeln!(w, "P2\n{width} {height}\n{max}")?;
            for row in &self.rows {
                let line: Vec<String> = row.iter().map(|s| (max - u32::from(s.0)).to_string()).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
        }
        Ok(())
    }

    /// Parses the row-per-line digit text produced by `Display`. Head
    /// positions are unknown and set to the left window edge.
    pub fn parse_rows(text: &str, lo: i64, outcome: Outcome) -> Result<SpaceTimeDiagram> {
        let rows: Vec<Vec<Symbol>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.trim()
                    .chars()
                    .map(|c| Symbol::from_digit(c).ok_or_else(|| Error::Parse(format!("bad cell `{c}`"))))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::Parse("rows must be non-empty and of equal length".into()));
        }
        let head_positions = vec![lo; rows.len()];
        Ok(SpaceTimeDiagram { rows, window: (lo, lo + width as i64 - 1), head_positions, outcome })
    }
}

impl fmt::Display for SpaceTimeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let line: String = row.iter().map(|s| s.to_digit()).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let d = SpaceTimeDiagram::parse_rows("0120\n0121\n", -1, Outcome::MaxStepsReached).unwrap();
        assert_eq!(d.window, (-1, 2));
        assert_eq!(d.to_string(), "0120\n0121\n");
        assert!(SpaceTimeDiagram::parse_rows("01\n012\n", 0, Outcome::MaxStepsReached).is_err());
    }

    #[test]
    fn padding_adds_blanks() {
        let d = SpaceTimeDiagram::parse_rows("12\n21\n", 0, Outcome::MaxStepsReached).unwrap();
        let p = d.padded(-1, 3).unwrap();
        assert_eq!(p.to_string(), "01200\n02100\n");
        assert!(d.padded(1, 3).is_err());
    }

    #[test]
    fn pnm_headers() {
        let d = SpaceTimeDiagram::parse_rows("12\n21\n", 0, Outcome::MaxStepsReached).unwrap();
        let mut buf = Vec::new();
        d.write_pnm(&mut buf, 3).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("P2\n2 2\n2\n"));
    }
}
