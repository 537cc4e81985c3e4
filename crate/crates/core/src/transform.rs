//! Block transformations: maps from each symbol to a fixed-length block.
//!
//! All `(k^b)^k` maps for a given `(k, b)` are numbered in lexicographic
//! order of `(block of 0, block of 1, ...)`, blocks themselves ordered
//! lexicographically. Only injective maps admit a back transformation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{Symbol, MAX_SYMBOLS};

/// Upper bound on the size of an enumerated transform list.
pub const MAX_TRANSFORMS: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockTransform {
    k: u32,
    b: u32,
    blocks: Vec<Vec<Symbol>>,
    id: u128,
    /// Symbol for each block index, `None` outside the image.
    inverse: Vec<Option<Symbol>>,
}

/// Why a back transformation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecodeFailure {
    /// Block `block` of sampled row `step` is not the image of any symbol.
    InvalidBlock { step: u64, block: usize },
    /// A row of `len` cells does not split into whole blocks.
    Misaligned { len: usize },
    /// The diagram has fewer rows than the sampling needs.
    TooFewRows { needed: usize, available: usize },
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeFailure::InvalidBlock { step, block } => write!(f, "no preimage for block {block} at step {step}"),
            DecodeFailure::Misaligned { len } => write!(f, "row of {len} cells is not a whole number of blocks"),
            DecodeFailure::TooFewRows { needed, available } => write!(f, "need {needed} rows, diagram has {available}"),
        }
    }
}

impl std::error::Error for DecodeFailure {}

fn block_index(block: &[Symbol], k: u32) -> usize {
    block.iter().fold(0usize, |acc, s| acc * k as usize + usize::from(s.0))
}

fn block_from_index(mut idx: usize, k: u32, b: u32) -> Vec<Symbol> {
    let mut block = vec![Symbol::BLANK; b as usize];
    for cell in block.iter_mut().rev() {
        *cell = Symbol((idx % k as usize) as u8);
        idx /= k as usize;
    }
    block
}

fn block_count(k: u32, b: u32) -> Result<u128> {
    if !(2..=MAX_SYMBOLS).contains(&k) || b == 0 {
        return Err(Error::InvalidTransform(format!("k={k} b={b}")));
    }
    u128::from(k).checked_pow(b).ok_or(Error::TooManyTransforms { k, b })
}

/// Number of maps from `k` symbols to `b`-blocks, `(k^b)^k`.
pub fn transform_count(k: u32, b: u32) -> Result<u128> {
    block_count(k, b)?.checked_pow(k).ok_or(Error::TooManyTransforms { k, b })
}

/// Number of injective maps, `k^b · (k^b − 1) ··· (k^b − k + 1)`.
pub fn injective_count(k: u32, b: u32) -> Result<u128> {
    let blocks = block_count(k, b)?;
    if blocks < u128::from(k) {
        return Ok(0);
    }
    (0..u128::from(k)).try_fold(1u128, |acc, i| acc.checked_mul(blocks - i).ok_or(Error::TooManyTransforms { k, b }))
}

impl BlockTransform {
    /// Builds a transform from explicit blocks, computing its enumeration id.
    pub fn new(k: u32, blocks: Vec<Vec<Symbol>>) -> Result<Self> {
        let b = blocks.first().map(|bl| bl.len() as u32).unwrap_or(0);
        let count = block_count(k, b)?;
        if blocks.len() != k as usize {
            return Err(Error::InvalidTransform(format!("expected {k} blocks, got {}", blocks.len())));
        }
        if blocks.iter().any(|bl| bl.len() != b as usize || bl.iter().any(|s| u32::from(s.0) >= k)) {
            return Err(Error::InvalidTransform("blocks must share one length and use symbols below k".into()));
        }
        let id = blocks.iter().fold(0u128, |acc, bl| acc * count + block_index(bl, k) as u128);
        Ok(Self::assemble(k, b, blocks, id))
    }

    /// The transform numbered `id` among all maps for `(k, b)`.
    pub fn from_id(k: u32, b: u32, id: u128) -> Result<Self> {
        let total = transform_count(k, b)?;
        if id >= total {
            return Err(Error::InvalidTransform(format!("id {id} >= {total}")));
        }
        let count = block_count(k, b)?;
        let mut rest = id;
        let mut blocks = vec![Vec::new(); k as usize];
        for block in blocks.iter_mut().rev() {
            *block = block_from_index((rest % count) as usize, k, b);
            rest /= count;
        }
        Ok(Self::assemble(k, b, blocks, id))
    }

    fn assemble(k: u32, b: u32, blocks: Vec<Vec<Symbol>>, id: u128) -> Self {
        let count = (k as usize).pow(b);
        let mut inverse = vec![None; count];
        // first symbol wins so non-injective maps still decode deterministically
        for (s, bl) in blocks.iter().enumerate().rev() {
            inverse[block_index(bl, k)] = Some(Symbol(s as u8));
        }
        BlockTransform { k, b, blocks, id, inverse }
    }

    pub fn identity(k: u32) -> Self {
        let blocks = (0..k).map(|s| vec![Symbol(s as u8)]).collect();
        Self::new(k, blocks).expect("identity is valid")
    }

    pub fn symbols(&self) -> u32 {
        self.k
    }

    pub fn block_size(&self) -> u32 {
        self.b
    }

    pub fn id(&self) -> u128 {
        self.id
    }

    pub fn blocks(&self) -> &[Vec<Symbol>] {
        &self.blocks
    }

    pub fn block(&self, symbol: Symbol) -> &[Symbol] {
        &self.blocks[usize::from(symbol.0)]
    }

    pub fn is_injective(&self) -> bool {
        self.inverse.iter().filter(|s| s.is_some()).count() == self.k as usize
    }

    /// Preimage of one block.
    #[inline]
    pub fn decode_block(&self, block: &[Symbol]) -> Option<Symbol> {
        debug_assert_eq!(block.len(), self.b as usize);
        self.inverse[block_index(block, self.k)]
    }
}

impl fmt::Display for BlockTransform {
    /// `0->12 1->20 2->22`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(s, bl)| format!("{s}->{}", bl.iter().map(|x| x.to_digit()).collect::<String>()))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Every map for `(k, b)` in id order, or only the injective ones.
pub fn enumerate_transforms(k: u32, b: u32, injective_only: bool) -> Result<Vec<BlockTransform>> {
    let total = if injective_only { injective_count(k, b)? } else { transform_count(k, b)? };
    if total > MAX_TRANSFORMS {
        return Err(Error::TooManyTransforms { k, b });
    }
    let count = block_count(k, b)? as usize;
    let mut out = Vec::with_capacity(total as usize);
    let mut chosen = Vec::with_capacity(k as usize);
    let mut used = vec![false; count];
    enumerate_rec(k, b, count, injective_only, &mut chosen, &mut used, &mut out);
    Ok(out)
}

fn enumerate_rec(
    k: u32,
    b: u32,
    count: usize,
    injective_only: bool,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<BlockTransform>,
) {
    if chosen.len() == k as usize {
        let id = chosen.iter().fold(0u128, |acc, &i| acc * count as u128 + i as u128);
        let blocks = chosen.iter().map(|&i| block_from_index(i, k, b)).collect();
        out.push(BlockTransform::assemble(k, b, blocks, id));
        return;
    }
    for i in 0..count {
        if injective_only && used[i] {
            continue;
        }
        used[i] = true;
        chosen.push(i);
        enumerate_rec(k, b, count, injective_only, chosen, used, out);
        chosen.pop();
        used[i] = false;
    }
}

/// Replaces every cell by its block.
pub fn encode_tape(t: &BlockTransform, tape: &[Symbol]) -> Vec<Symbol> {
    tape.iter().flat_map(|&s| t.block(s).iter().copied()).collect()
}

/// Inverse of [`encode_tape`]. The tape length must be a multiple of the
/// block size; an invalid block is reported at step 0.
pub fn decode_tape(t: &BlockTransform, tape: &[Symbol]) -> Result<Vec<Symbol>, DecodeFailure> {
    decode_row(t, tape, 0)
}

pub(crate) fn decode_row(t: &BlockTransform, row: &[Symbol], step: u64) -> Result<Vec<Symbol>, DecodeFailure> {
    let b = t.block_size() as usize;
    if !row.len().is_multiple_of(b) {
        return Err(DecodeFailure::Misaligned { len: row.len() });
    }
    row.chunks(b)
        .enumerate()
        .map(|(block, bl)| t.decode_block(bl).ok_or(DecodeFailure::InvalidBlock { step, block }))
        .collect()
}
