use super::*;
use crate::ffield::PrimeField;

fn spec(s: u64) -> FieldSpec {
    FieldSpec::new(PrimeField::new(101).unwrap(), s).unwrap()
}

// Forgets position 1 whenever it repeats position 0; restores it as a copy.
struct Duplicates {
    len: usize,
    computed: bool,
    wrong_count: bool,
}

impl CatalyticProblem for Duplicates {
    type Answer = &'static str;

    fn block_len(&self) -> usize {
        self.len
    }

    fn process(&mut self, _block: usize, values: &[FieldElement]) -> Result<BlockOutcome<&'static str>> {
        if values[0] == values[1] {
            Ok(BlockOutcome::Compress(EncodedRecord {
                case: CaseTag::TwoA,
                fields: vec![HeaderField::new("tag", 0, 1)],
                dropped: vec![1],
            }))
        } else {
            Ok(BlockOutcome::Success("distinct"))
        }
    }

    fn compute(&mut self, arena: &mut Arena<'_>) -> Result<&'static str> {
        self.computed = true;
        arena.push(0b101, 3);
        Ok("computed")
    }

    fn restore(&mut self, _block: usize, reader: &mut RecordReader<'_>) -> Result<Restoration> {
        assert_eq!(reader.read(1)?, 0);
        let kept = reader.values(self.len - 1)?;
        let mut values = vec![kept[0], kept[0]];
        values.extend_from_slice(&kept[1..]);
        Ok(Restoration { values, candidates: if self.wrong_count { 2 } else { 1 } })
    }
}

#[test]
fn seeded_tapes_are_deterministic() {
    let a = CatalyticTape::new(&TapeSource::Seed(0), 2, 3, spec(16)).unwrap();
    let b = CatalyticTape::new(&TapeSource::Seed(0), 2, 3, spec(16)).unwrap();
    assert_eq!(a.read_block(1).unwrap(), b.read_block(1).unwrap());
    assert_eq!(a.snapshot_hash(), b.snapshot_hash());
    let c = CatalyticTape::new(&TapeSource::Seed(1), 2, 3, spec(16)).unwrap();
    assert_ne!(a.snapshot_hash(), c.snapshot_hash());
    assert!(a.read_block(0).unwrap().iter().all(|v| v.value() < 16));
}

#[test]
fn file_tapes() {
    let zero = CatalyticTape::new(&TapeSource::Bytes(vec![0; 8]), 4, 4, spec(16)).unwrap();
    for t in 0..4 {
        assert!(zero.read_block(t).unwrap().iter().all(|v| v.is_zero()));
    }
    assert!(CatalyticTape::new(&TapeSource::Bytes(vec![0; 7]), 4, 4, spec(16)).is_err());
    // 0xff chunks of 4 bits read as 15, reduced mod 10
    let t = CatalyticTape::new(&TapeSource::Bytes(vec![0xff; 2]), 1, 4, spec(10)).unwrap();
    assert_eq!(t.read_block(0).unwrap()[0].value(), 5);
}

#[test]
fn compute_branch_round_trip() {
    let mut tape = CatalyticTape::new(&TapeSource::Bytes(vec![0; 16]), 4, 4, spec(16)).unwrap();
    let mut p = Duplicates { len: 4, computed: false, wrong_count: false };
    let out = run_catalytic(&mut p, &mut tape).unwrap();
    assert!(p.computed);
    assert_eq!(out.answer, "computed");
    assert_eq!(out.branch, Branch::Compute { early: false });
    assert_eq!(out.journal.len(), 4);
    // each record drops 4 bits and adds a 1-bit tag
    assert_eq!(out.freed_bits, 12);
    assert_eq!(out.accounting.arena_bits, 12);
    assert!(out.restored);
}

#[test]
fn success_restores_earlier_blocks() {
    let blocks: Vec<Vec<FieldElement>> = [[3u64, 3, 1], [2, 2, 9], [4, 5, 6], [7, 7, 7]]
        .iter()
        .map(|b| b.iter().map(|&v| FieldElement::raw(v)).collect())
        .collect();
    let mut tape = CatalyticTape::from_blocks(&blocks, spec(16)).unwrap();
    let mut p = Duplicates { len: 3, computed: false, wrong_count: false };
    let out = run_catalytic(&mut p, &mut tape).unwrap();
    assert_eq!(out.branch, Branch::Success { block: 2 });
    assert_eq!(out.journal.len(), 2);
    assert!(out.restored);
    assert!(!p.computed);
}

#[test]
fn uniqueness_violation_is_reported() {
    let mut tape = CatalyticTape::new(&TapeSource::Bytes(vec![0; 16]), 2, 4, spec(16)).unwrap();
    let mut p = Duplicates { len: 4, computed: false, wrong_count: true };
    let err = run_catalytic(&mut p, &mut tape).unwrap_err();
    assert_eq!(err, Error::UniquenessViolation { block: 0, candidates: 2 });
}

#[test]
fn access_discipline() {
    let mut tape = CatalyticTape::new(&TapeSource::Seed(3), 2, 4, spec(16)).unwrap();
    let rec = EncodedRecord { case: CaseTag::TwoB, fields: vec![HeaderField::new("u", 2, 2)], dropped: vec![0] };
    tape.compress_block(0, &rec).unwrap();
    assert!(matches!(tape.read_block(0), Err(Error::ContractViolation(_))));
    assert!(matches!(tape.compress_block(0, &rec), Err(Error::ContractViolation(_))));
    assert!(!tape.verify_restored());
    // a record that saves nothing is refused
    let fat = EncodedRecord { case: CaseTag::TwoB, fields: vec![HeaderField::new("u", 2, 4)], dropped: vec![0] };
    assert!(matches!(tape.compress_block(1, &fat), Err(Error::ContractViolation(_))));
    // a field wider than declared is refused
    let wide = EncodedRecord { case: CaseTag::TwoB, fields: vec![HeaderField::new("u", 9, 2)], dropped: vec![0] };
    assert!(matches!(tape.compress_block(1, &wide), Err(Error::ContractViolation(_))));
    // restoring with the wrong value is caught against the snapshot
    let snapshot_block = {
        let fresh = CatalyticTape::new(&TapeSource::Seed(3), 2, 4, spec(16)).unwrap();
        fresh.read_block(0).unwrap()
    };
    let mut wrong = snapshot_block.clone();
    wrong[0] = FieldElement::raw((wrong[0].value() + 1) % 16);
    let err = tape.restore_block(0, |_| Ok(Restoration { values: wrong, candidates: 1 })).unwrap_err();
    assert!(matches!(err, Error::ContractViolation(_)));
}

#[test]
fn restore_reads_back_record_bits() {
    let mut tape = CatalyticTape::new(&TapeSource::Seed(8), 1, 5, spec(32)).unwrap();
    let original = tape.read_block(0).unwrap();
    let rec = EncodedRecord {
        case: CaseTag::TwoA,
        fields: vec![HeaderField::new("tag", 1, 1), HeaderField::new("edge", 3, 3)],
        dropped: vec![3],
    };
    tape.compress_block(0, &rec).unwrap();
    let forgotten = original[3];
    tape.restore_block(0, |r| {
        assert_eq!(r.read(1)?, 1);
        assert_eq!(r.read(3)?, 3);
        let kept = r.values(4)?;
        let mut values = kept.clone();
        values.insert(3, forgotten);
        Ok(Restoration { values, candidates: 1 })
    })
    .unwrap();
    assert!(tape.verify_restored());
}

#[test]
fn corrupted_bit_fails_verification() {
    let mut tape = CatalyticTape::new(&TapeSource::Seed(2), 3, 3, spec(64)).unwrap();
    assert!(tape.verify_restored());
    tape.flip_bit(7);
    assert!(!tape.verify_restored());
    tape.flip_bit(7);
    assert!(tape.verify_restored());
}

#[test]
fn pack_and_unpack_preserve_records() {
    let mut tape = CatalyticTape::new(&TapeSource::Seed(4), 3, 6, spec(64)).unwrap();
    let rec = EncodedRecord { case: CaseTag::PmEdge, fields: vec![HeaderField::new("edge", 5, 3)], dropped: vec![2] };
    tape.compress_block(0, &rec).unwrap();
    tape.compress_block(2, &rec).unwrap();
    let before = tape.clone();
    {
        let mut arena = tape.pack().unwrap();
        assert_eq!(arena.capacity_bits(), 6);
        for _ in 0..3 {
            arena.push(0b11, 2);
        }
        assert!(!arena.overrun());
        arena.push(1, 1);
        assert!(arena.overrun());
    }
    assert!(tape.read_block(1).is_err());
    tape.unpack().unwrap();
    assert_eq!(tape.bits, before.bits);
    assert!(tape.accounting().arena_overrun);
}
