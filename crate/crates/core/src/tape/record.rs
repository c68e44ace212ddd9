use std::collections::BTreeMap;
use std::fmt;

use bitvec::prelude::*;
use serde::Serialize;

use super::read_uint;
use crate::error::{Error, Result};
use crate::ffield::FieldElement;

/// Which uniqueness argument a compressed block relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseTag {
    /// Tutte matrix: one variable change raises the rank by two.
    TwoA,
    /// Tutte matrix: same rank, larger deficiency set.
    TwoB,
    /// Mixed matrix: one variable change raises the rank by one.
    TwoAPrime,
    /// Mixed matrix: same rank, larger deficiency set.
    TwoBPrime,
    /// Perfect-matching search: a forgotten edge weight.
    PmEdge,
    /// Matrix pencil: a forgotten tuple of values.
    EdTuple,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::TwoA => "2A",
            CaseTag::TwoB => "2B",
            CaseTag::TwoAPrime => "2A'",
            CaseTag::TwoBPrime => "2B'",
            CaseTag::PmEdge => "PM-EDGE",
            CaseTag::EdTuple => "ED-TUPLE",
        };
        f.write_str(s)
    }
}

/// When a uniqueness claim was counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AuditStage {
    /// Brute-force recount over `S` at compression time.
    Compress,
    /// The count found by the restore routine itself.
    Restore,
}

/// How many values (or tuples) satisfied a restoring predicate. Every
/// uniqueness lemma demands exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEvent {
    pub block: usize,
    pub case: CaseTag,
    pub stage: AuditStage,
    pub candidates: u64,
}

/// One fixed-width integer at the head of a compressed block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeaderField {
    pub name: &'static str,
    pub value: u64,
    pub width: u32,
}

impl HeaderField {
    pub fn new(name: &'static str, value: u64, width: u32) -> Self {
        HeaderField { name, value, width }
    }
}

/// A compression record before it is written: header fields in order and
/// the block positions whose values are forgotten.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedRecord {
    pub case: CaseTag,
    pub fields: Vec<HeaderField>,
    pub dropped: Vec<usize>,
}

impl EncodedRecord {
    pub fn header_bits(&self) -> u64 {
        self.fields.iter().map(|f| u64::from(f.width)).sum()
    }

    pub fn bits_after(&self, block_len: usize, value_bits: u32) -> u64 {
        self.header_bits() + (block_len - self.dropped.len()) as u64 * u64::from(value_bits)
    }

    /// Bits saved relative to an uncompressed block (may be negative).
    pub fn margin(&self, value_bits: u32) -> i64 {
        self.dropped.len() as i64 * i64::from(value_bits) - self.header_bits() as i64
    }
}

/// Journal entry for a compressed block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressionRecord {
    pub block: usize,
    pub case: CaseTag,
    pub fields: Vec<HeaderField>,
    pub dropped: Vec<usize>,
    pub bits_before: u64,
    pub bits_after: u64,
}

impl CompressionRecord {
    pub fn saved_bits(&self) -> u64 {
        self.bits_before - self.bits_after
    }

    pub fn field(&self, name: &str) -> Option<u64> {
        self.fields.iter().find(|f| f.name == name).map(|f| f.value)
    }
}

/// Counts and savings per case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct JournalSummary {
    pub events: BTreeMap<String, usize>,
    pub bits_saved: u64,
    pub min_saving: Option<u64>,
}

impl JournalSummary {
    pub fn of(journal: &[CompressionRecord]) -> Self {
        let mut s = JournalSummary::default();
        for r in journal {
            *s.events.entry(r.case.to_string()).or_insert(0) += 1;
            s.bits_saved += r.saved_bits();
            s.min_saving = Some(s.min_saving.map_or(r.saved_bits(), |m| m.min(r.saved_bits())));
        }
        s
    }

    pub fn total_events(&self) -> usize {
        self.events.values().sum()
    }
}

impl fmt::Display for JournalSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.events.is_empty() {
            return write!(f, "no compressions");
        }
        let parts: Vec<String> = self.events.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{} ({} bits saved)", parts.join(" "), self.bits_saved)
    }
}

/// Sequential reader over the bits of one compressed block.
pub struct RecordReader<'a> {
    bits: &'a BitSlice<u8, Msb0>,
    value_bits: u32,
    cursor: usize,
}

impl<'a> RecordReader<'a> {
    pub(crate) fn new(bits: &'a BitSlice<u8, Msb0>, value_bits: u32) -> Self {
        RecordReader { bits, value_bits, cursor: 0 }
    }

    pub fn read(&mut self, width: u32) -> Result<u64> {
        let end = self.cursor + width as usize;
        if end > self.bits.len() {
            return Err(Error::ContractViolation("compressed record runs past its block".into()));
        }
        let v = read_uint(self.bits, self.cursor, width as usize);
        self.cursor = end;
        Ok(v)
    }

    /// Reads `count` values of the configured width.
    pub fn values(&mut self, count: usize) -> Result<Vec<FieldElement>> {
        (0..count).map(|_| self.read(self.value_bits).map(FieldElement::raw)).collect()
    }
}
