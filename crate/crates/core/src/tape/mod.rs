//! The simulated catalytic tape.
//!
//! The tape holds `N` blocks of `m` values, each value written in `b` bits.
//! Algorithms read whole blocks, replace a block by a shorter compression
//! record, and later restore it; the tape refuses raw reads of compressed
//! blocks, refuses records that do not save space, and checks every restored
//! block against the snapshot taken at start-up. [`CatalyticTape::verify_restored`]
//! compares the whole region bit for bit.
//!
//! The compute branch packs all blocks to the front of the tape, hands the
//! freed tail to the fallback algorithm as an [`Arena`], and unpacks again.

mod driver;
mod record;

pub use driver::{run_catalytic, BlockOutcome, Branch, CatalyticProblem, RunOutcome, SubRun};
pub use record::{AuditEvent, AuditStage, CaseTag, CompressionRecord, EncodedRecord, HeaderField, JournalSummary, RecordReader};

use std::collections::BTreeMap;

use bitvec::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::ffield::{FieldElement, FieldSpec};

type Bits = BitVec<u8, Msb0>;

/// Where the initial tape content comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TapeSource {
    /// Values drawn uniformly from `S` by a ChaCha8 stream.
    Seed(u64),
    /// Raw bytes read as consecutive `b`-bit chunks (most significant bit
    /// first), each reduced mod `s`.
    Bytes(Vec<u8>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BlockState {
    Pristine,
    Compressed,
}

/// Peak auxiliary memory per phase. Reported only; nothing is enforced.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Accounting {
    pub peak_bytes: BTreeMap<String, usize>,
    pub arena_bits: u64,
    pub arena_used_bits: u64,
    pub arena_overrun: bool,
}

impl Accounting {
    pub fn note(&mut self, phase: &str, bytes: usize) {
        let slot = self.peak_bytes.entry(phase.to_string()).or_insert(0);
        *slot = (*slot).max(bytes);
    }
}

#[derive(Clone, Debug)]
pub struct CatalyticTape {
    spec: FieldSpec,
    blocks: usize,
    block_len: usize,
    bits: Bits,
    snapshot: Bits,
    snapshot_hash: [u8; 32],
    state: Vec<BlockState>,
    // record length in bits for compressed blocks
    occupied: Vec<u64>,
    journal: Vec<CompressionRecord>,
    scratch: Vec<u8>,
    packed: bool,
    accounting: Accounting,
}

impl CatalyticTape {
    /// `blocks` blocks of `block_len` values each.
    pub fn new(source: &TapeSource, blocks: usize, block_len: usize, spec: FieldSpec) -> Result<Self> {
        if blocks == 0 || block_len == 0 {
            return invalid("a tape needs at least one block of at least one value");
        }
        let b = spec.value_bits() as usize;
        let total = blocks * block_len * b;
        let s = spec.value_set_size();
        let mut bits: Bits = BitVec::repeat(false, total);
        match source {
            TapeSource::Seed(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for k in 0..blocks * block_len {
                    let v = rng.gen_range(0..s);
                    write_uint(&mut bits, k * b, b, v);
                }
            }
            TapeSource::Bytes(bytes) => {
                if bytes.len() * 8 < total {
                    return invalid(format!(
                        "tape file holds {} bits, the tape needs {total}",
                        bytes.len() * 8
                    ));
                }
                let raw = bytes.view_bits::<Msb0>();
                for k in 0..blocks * block_len {
                    let v = if b == 0 { 0 } else { raw[k * b..(k + 1) * b].load_be::<u64>() };
                    write_uint(&mut bits, k * b, b, v % s);
                }
            }
        }
        let snapshot = bits.clone();
        let snapshot_hash = hash_bits(&snapshot);
        Ok(CatalyticTape {
            spec,
            blocks,
            block_len,
            bits,
            snapshot,
            snapshot_hash,
            state: vec![BlockState::Pristine; blocks],
            occupied: vec![0; blocks],
            journal: Vec::new(),
            scratch: Vec::new(),
            packed: false,
            accounting: Accounting::default(),
        })
    }

    /// Writes explicit block contents, e.g. an adversarial tape.
    pub fn from_blocks(blocks: &[Vec<FieldElement>], spec: FieldSpec) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return invalid("a tape needs at least one block");
        };
        let m = first.len();
        if blocks.iter().any(|blk| blk.len() != m) {
            return invalid("blocks have different lengths");
        }
        if blocks.iter().flatten().any(|&v| !spec.contains(v)) {
            return invalid("block value outside the value set");
        }
        let bytes = encode_values(blocks.iter().flatten().map(|v| v.value()), spec.value_bits());
        Self::new(&TapeSource::Bytes(bytes), blocks.len(), m, spec)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    fn block_bits(&self) -> usize {
        self.block_len * self.spec.value_bits() as usize
    }

    pub fn total_bits(&self) -> usize {
        self.bits.len()
    }

    pub fn snapshot_hash(&self) -> String {
        self.snapshot_hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn journal(&self) -> &[CompressionRecord] {
        &self.journal
    }

    pub fn summary(&self) -> JournalSummary {
        JournalSummary::of(&self.journal)
    }

    pub fn accounting(&self) -> &Accounting {
        &self.accounting
    }

    pub fn accounting_mut(&mut self) -> &mut Accounting {
        &mut self.accounting
    }

    pub fn is_compressed(&self, t: usize) -> bool {
        self.state.get(t) == Some(&BlockState::Compressed)
    }

    /// Bits freed by all compressed blocks so far.
    pub fn freed_bits(&self) -> u64 {
        (0..self.blocks).filter(|&t| self.is_compressed(t)).map(|t| self.block_bits() as u64 - self.occupied[t]).sum()
    }

    fn check_block(&self, t: usize) -> Result<()> {
        if t >= self.blocks {
            return Err(Error::ContractViolation(format!("block {t} does not exist")));
        }
        if self.packed {
            return Err(Error::ContractViolation("tape is packed for the compute branch".into()));
        }
        Ok(())
    }

    /// Values of a pristine block.
    pub fn read_block(&self, t: usize) -> Result<Vec<FieldElement>> {
        self.check_block(t)?;
        if self.is_compressed(t) {
            return Err(Error::ContractViolation(format!("block {t} is compressed and cannot be read as values")));
        }
        let b = self.spec.value_bits() as usize;
        let start = t * self.block_bits();
        Ok((0..self.block_len).map(|k| FieldElement::raw(read_uint(&self.bits, start + k * b, b))).collect())
    }

    /// Replaces pristine block `t` by `record`: header fields, then the
    /// values at the kept positions; the rest of the block is zeroed.
    pub fn compress_block(&mut self, t: usize, record: &EncodedRecord) -> Result<&CompressionRecord> {
        self.check_block(t)?;
        if self.is_compressed(t) {
            return Err(Error::ContractViolation(format!("block {t} is already compressed")));
        }
        let before = self.block_bits() as u64;
        let after = record.bits_after(self.block_len, self.spec.value_bits());
        if after >= before {
            return Err(Error::ContractViolation(format!(
                "record for block {t} needs {after} bits, the block has only {before}"
            )));
        }
        if let Some(&bad) = record.dropped.iter().find(|&&p| p >= self.block_len) {
            return Err(Error::ContractViolation(format!("dropped position {bad} outside block {t}")));
        }
        let values = self.read_block(t)?;
        let b = self.spec.value_bits() as usize;
        let start = t * self.block_bits();
        let mut cursor = start;
        for field in &record.fields {
            if field.width < 64 && field.value >> field.width != 0 {
                return Err(Error::ContractViolation(format!(
                    "field {} = {} does not fit in {} bits",
                    field.name, field.value, field.width
                )));
            }
            write_uint(&mut self.bits, cursor, field.width as usize, field.value);
            cursor += field.width as usize;
        }
        for (k, v) in values.iter().enumerate() {
            if record.dropped.contains(&k) {
                continue;
            }
            write_uint(&mut self.bits, cursor, b, v.value());
            cursor += b;
        }
        debug_assert_eq!((cursor - start) as u64, after);
        let end = start + self.block_bits();
        self.bits[cursor..end].fill(false);
        self.state[t] = BlockState::Compressed;
        self.occupied[t] = after;
        self.journal.push(CompressionRecord {
            block: t,
            case: record.case,
            fields: record.fields.clone(),
            dropped: record.dropped.clone(),
            bits_before: before,
            bits_after: after,
        });
        Ok(self.journal.last().unwrap())
    }

    /// Rebuilds compressed block `t`. The callback decodes the record from
    /// the block's bits and returns the full original value vector together
    /// with the number of candidates it found for the forgotten values.
    pub fn restore_block<F>(&mut self, t: usize, recompute: F) -> Result<()>
    where
        F: FnOnce(&mut RecordReader<'_>) -> Result<Restoration>,
    {
        self.check_block(t)?;
        if !self.is_compressed(t) {
            return Err(Error::ContractViolation(format!("block {t} is not compressed")));
        }
        let start = t * self.block_bits();
        let end = start + self.block_bits();
        let restored = {
            let mut reader = RecordReader::new(&self.bits[start..end], self.spec.value_bits());
            recompute(&mut reader)?
        };
        if restored.candidates != 1 {
            return Err(Error::UniquenessViolation { block: t, candidates: restored.candidates });
        }
        if restored.values.len() != self.block_len {
            return Err(Error::ContractViolation(format!("restoration of block {t} has the wrong length")));
        }
        let b = self.spec.value_bits() as usize;
        for (k, v) in restored.values.iter().enumerate() {
            write_uint(&mut self.bits, start + k * b, b, v.value());
        }
        self.state[t] = BlockState::Pristine;
        self.occupied[t] = 0;
        if self.bits[start..end] != self.snapshot[start..end] {
            return Err(Error::ContractViolation(format!("block {t} differs from the snapshot after restoration")));
        }
        Ok(())
    }

    /// Packs every block to the front so the freed space forms one
    /// contiguous arena at the end of the tape.
    pub fn pack(&mut self) -> Result<Arena<'_>> {
        if self.packed {
            return Err(Error::ContractViolation("tape is already packed".into()));
        }
        let mut cursor = 0usize;
        for t in 0..self.blocks {
            let len = self.used_bits(t);
            let src = t * self.block_bits();
            if src != cursor {
                self.bits.copy_within(src..src + len, cursor);
            }
            cursor += len;
        }
        self.packed = true;
        let capacity = (self.bits.len() - cursor) as u64;
        self.accounting.arena_bits = capacity;
        self.bits[cursor..].fill(false);
        Ok(Arena { region: &mut self.bits[cursor..], used: 0, overrun: false, accounting: &mut self.accounting })
    }

    /// Undoes [`pack`](Self::pack) and clears the freed tails again.
    pub fn unpack(&mut self) -> Result<()> {
        if !self.packed {
            return Err(Error::ContractViolation("tape is not packed".into()));
        }
        let offsets: Vec<usize> = (0..self.blocks)
            .scan(0usize, |acc, t| {
                let here = *acc;
                *acc += self.used_bits(t);
                Some(here)
            })
            .collect();
        for t in (0..self.blocks).rev() {
            let len = self.used_bits(t);
            let dst = t * self.block_bits();
            if offsets[t] != dst {
                self.bits.copy_within(offsets[t]..offsets[t] + len, dst);
            }
        }
        for t in 0..self.blocks {
            let start = t * self.block_bits();
            let used = self.used_bits(t);
            let end = start + self.block_bits();
            self.bits[start + used..end].fill(false);
        }
        self.packed = false;
        Ok(())
    }

    fn used_bits(&self, t: usize) -> usize {
        if self.is_compressed(t) {
            self.occupied[t] as usize
        } else {
            self.block_bits()
        }
    }

    /// The rank-workspace block. Its contents are not part of the
    /// restoration contract; it is cleared by [`release_scratch`](Self::release_scratch).
    pub fn scratch(&mut self, bytes: usize) -> &mut [u8] {
        if self.scratch.len() < bytes {
            self.scratch.resize(bytes, 0);
        }
        self.accounting.note("scratch", self.scratch.len());
        &mut self.scratch[..bytes]
    }

    pub fn release_scratch(&mut self) {
        self.scratch.iter_mut().for_each(|b| *b = 0);
    }

    /// True iff every block is pristine and every bit equals the snapshot.
    pub fn verify_restored(&self) -> bool {
        !self.packed
            && self.state.iter().all(|&s| s == BlockState::Pristine)
            && self.bits == self.snapshot
            && hash_bits(&self.bits) == self.snapshot_hash
    }

    /// Flips one bit of the catalytic region. Only useful for testing the
    /// verifier.
    pub fn flip_bit(&mut self, index: usize) {
        let old = self.bits[index];
        self.bits.set(index, !old);
    }
}

/// What a restore callback returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restoration {
    pub values: Vec<FieldElement>,
    pub candidates: u64,
}

/// The freed, contiguous tail of a packed tape.
pub struct Arena<'a> {
    region: &'a mut BitSlice<u8, Msb0>,
    used: u64,
    overrun: bool,
    accounting: &'a mut Accounting,
}

impl Arena<'_> {
    pub fn capacity_bits(&self) -> u64 {
        self.region.len() as u64
    }

    pub fn used_bits(&self) -> u64 {
        self.used
    }

    /// Appends `width` bits of `value`. Writes past the end are dropped and
    /// flagged as an overrun in the accounting.
    pub fn push(&mut self, value: u64, width: u32) {
        let start = self.used as usize;
        let end = start + width as usize;
        if end > self.region.len() {
            self.overrun = true;
        } else {
            write_uint(self.region, start, width as usize, value);
        }
        self.used += u64::from(width);
        self.accounting.arena_used_bits = self.accounting.arena_used_bits.max(self.used);
        self.accounting.arena_overrun |= self.overrun;
    }

    pub fn overrun(&self) -> bool {
        self.overrun
    }
}

pub(crate) fn write_uint(bits: &mut BitSlice<u8, Msb0>, at: usize, width: usize, value: u64) {
    if width == 0 {
        return;
    }
    if width <= 64 {
        bits[at..at + width].store_be::<u64>(value);
    } else {
        bits[at..at + width - 64].fill(false);
        bits[at + width - 64..at + width].store_be::<u64>(value);
    }
}

pub(crate) fn read_uint(bits: &BitSlice<u8, Msb0>, at: usize, width: usize) -> u64 {
    match width {
        0 => 0,
        1..=64 => bits[at..at + width].load_be::<u64>(),
        _ => bits[at + width - 64..at + width].load_be::<u64>(),
    }
}

/// Packs values at `bits` bits each into bytes, most significant bit first.
pub fn encode_values(values: impl IntoIterator<Item = u64>, bits: u32) -> Vec<u8> {
    let mut out: Bits = BitVec::new();
    for v in values {
        let at = out.len();
        out.resize(at + bits as usize, false);
        write_uint(&mut out, at, bits as usize, v);
    }
    out.into_vec()
}

fn hash_bits(bits: &Bits) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update((bits.len() as u64).to_be_bytes());
    h.update(bits.as_raw_slice());
    h.finalize().into()
}

#[cfg(test)]
mod tests;
