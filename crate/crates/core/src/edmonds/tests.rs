use super::catalytic::desk_value_set_size;
use super::*;
use crate::ffield::DEFAULT_PRIME;
use crate::harness::oracle_symbolic_rank;
use crate::params::{splitmix, RunConfig};
use crate::tape::{Branch, CatalyticTape};

fn gf() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

fn diag(f: PrimeField, d: &[i64]) -> DenseMatrix {
    let rows: Vec<Vec<i64>> = (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect()).collect();
    DenseMatrix::from_rows(f, &rows).unwrap()
}

fn fe(f: PrimeField, v: &[u64]) -> Vec<FieldElement> {
    v.iter().map(|&x| f.elem(x)).collect()
}

// single-variable moves from (1, 1, 1) over S = {0, 1} stall at rank 3 of 5
fn stalling_pencil() -> MatrixPencil {
    let f = gf();
    MatrixPencil::new(
        f,
        5,
        vec![diag(f, &[1, 1, 1, -1, -1]), diag(f, &[1, 1, 1, 1, 1]), diag(f, &[-2, -2, -1, 1, -1])],
    )
    .unwrap()
}

#[test]
fn params_follow_epsilon() {
    let half = ApproxParams::parse("1/2").unwrap();
    let third = ApproxParams::parse("1/3").unwrap();
    assert_eq!((half.ell(), half.c()), (1, 5));
    assert_eq!((third.ell(), third.c()), (2, 7));
    assert_eq!(ApproxParams::parse("0.25").unwrap().ell(), 3);
    assert_eq!(ApproxParams::parse("0.4").unwrap().ell(), 2);
    assert_eq!(half.bound(7), 4);
    assert_eq!(third.bound(5), 4);
    assert!(ApproxParams::parse("1").is_err());
    assert!(ApproxParams::parse("0/3").is_err());
}

#[test]
fn identity_examples() {
    let f = gf();
    let p = MatrixPencil::new(f, 3, vec![DenseMatrix::identity(f, 3)]).unwrap();
    let spec = FieldSpec::new(f, 16).unwrap();
    let half = ApproxParams::new(1, 2).unwrap();
    assert_eq!(
        tuple_case_split(&p, &fe(f, &[0]), &spec, &half).unwrap(),
        TupleCase::Witness { subset: vec![0], values: vec![FieldElement::ONE], rank: 0 }
    );
    assert_eq!(tuple_case_split(&p, &fe(f, &[5]), &spec, &half).unwrap(), TupleCase::Approx { rank: 3 });
    assert_eq!(tuple_ordinal(&p, &fe(f, &[0]), &[0], 0, &spec).unwrap(), (1, 1));
    let cfg = RunConfig::default();
    let mut tape = cfg.pencil_tape(&p, &half, 0).unwrap();
    assert_eq!(pencil_approx_rank(&p, &mut tape, &cfg, &half).unwrap().answer.rank, 3);
    assert!(MatrixPencil::parse(&p.to_text()).unwrap() == p);
}

#[test]
fn pair_moves_escape_a_single_move_stall() {
    let p = stalling_pencil();
    let f = p.field();
    let tiny = FieldSpec::new(f, 2).unwrap();
    let start = fe(f, &[1, 1, 1]);
    let half = ApproxParams::new(1, 2).unwrap();
    let third = ApproxParams::new(1, 3).unwrap();
    assert_eq!(tuple_case_split(&p, &start, &tiny, &half).unwrap(), TupleCase::Approx { rank: 3 });
    let big = FieldSpec::new(f, 1 << 20).unwrap();
    let r_star = oracle_symbolic_rank(&p, &big, 30, 7).unwrap();
    assert_eq!(r_star, 5);
    assert!(3 < third.bound(r_star));
    match tuple_case_split(&p, &start, &tiny, &third).unwrap() {
        TupleCase::Witness { subset, .. } => assert_eq!(subset.len(), 2),
        other => panic!("expected a witness, got {other:?}"),
    }
    // a tape holding only the stalled point: l = 2 must still clear the bound
    let blocks = vec![start.clone(); 4];
    let cfg = RunConfig { audit: true, ..Default::default() };
    let mut tape = CatalyticTape::from_blocks(&blocks, tiny).unwrap();
    let out = pencil_approx_rank(&p, &mut tape, &cfg, &third).unwrap();
    assert!(out.answer.rank >= third.bound(r_star));
    assert!(out.restored);
    let mut tape = CatalyticTape::from_blocks(&blocks, tiny).unwrap();
    let out = pencil_approx_rank(&p, &mut tape, &cfg, &half).unwrap();
    assert_eq!((out.answer.rank, out.branch), (3, Branch::Success { block: 0 }));
}

#[test]
fn ordinals_round_trip_and_respect_the_bound() {
    let f = gf();
    let mut state = 21;
    let mut next = || {
        state = splitmix(state);
        state
    };
    let spec = FieldSpec::new(f, 16).unwrap();
    let mut events = 0;
    while events < 100 {
        let n = 3 + (next() % 3) as usize;
        // rank-one summands keep the symbolic rank low
        let mats: Vec<DenseMatrix> = (0..3)
            .map(|_| {
                let u: Vec<i64> = (0..n).map(|_| (next() % 3) as i64).collect();
                let v: Vec<i64> = (0..n).map(|_| (next() % 3) as i64).collect();
                let rows: Vec<Vec<i64>> = u.iter().map(|&a| v.iter().map(|&b| a * b).collect()).collect();
                DenseMatrix::from_rows(f, &rows).unwrap()
            })
            .collect();
        let p = MatrixPencil::new(f, n, mats).unwrap();
        let values: Vec<FieldElement> = (0..3).map(|_| f.elem(next() % 4)).collect();
        for ell in 1..=2 {
            let params = ApproxParams::new(1, 2).unwrap().with_ell_override(ell).unwrap();
            if let TupleCase::Witness { subset, rank, .. } = tuple_case_split(&p, &values, &spec, &params).unwrap() {
                let (j, count) = tuple_ordinal(&p, &values, &subset, rank, &spec).unwrap();
                assert!(count <= (n as u64) * 16u64.pow(ell as u32 - 1));
                let back = tuple_at_ordinal(&p, &values, &subset, rank, j, &spec).unwrap().unwrap();
                let own: Vec<FieldElement> = subset.iter().map(|&i| values[i]).collect();
                assert_eq!(back, own);
                events += 1;
            }
        }
    }
}

#[test]
fn random_low_rank_pencils_meet_the_bound() {
    let f = gf();
    let mut state = 8;
    let mut next = || {
        state = splitmix(state);
        state
    };
    for seed in 0..6 {
        let n = 6;
        let mats: Vec<DenseMatrix> = (0..3)
            .map(|_| {
                let u: Vec<i64> = (0..n).map(|_| (next() % 5) as i64 - 2).collect();
                let v: Vec<i64> = (0..n).map(|_| (next() % 5) as i64 - 2).collect();
                let rows: Vec<Vec<i64>> = u.iter().map(|&a| v.iter().map(|&b| a * b).collect()).collect();
                DenseMatrix::from_rows(f, &rows).unwrap()
            })
            .collect();
        let p = MatrixPencil::new(f, n, mats).unwrap();
        let r_star = oracle_symbolic_rank(&p, &FieldSpec::new(f, 1 << 30).unwrap(), 30, seed).unwrap();
        for params in [ApproxParams::new(1, 2).unwrap(), ApproxParams::new(1, 3).unwrap()] {
            let cfg = RunConfig { audit: true, ..RunConfig::with_seed(seed) };
            let mut tape = cfg.pencil_tape(&p, &params, 0).unwrap();
            let out = pencil_approx_rank(&p, &mut tape, &cfg, &params).unwrap();
            assert!(out.answer.rank >= params.bound(r_star));
            assert!(out.restored);
            assert!(out.audit.iter().all(|e| e.candidates == 1));
        }
    }
}

#[test]
fn desk_value_sets_make_records_pay() {
    let s = desk_value_set_size(8, 5, 1, DEFAULT_PRIME);
    let f = gf();
    let p = MatrixPencil::new(f, 8, vec![DenseMatrix::zeros(f, 8, 8); 5]).unwrap();
    let half = ApproxParams::new(1, 2).unwrap();
    assert!(bits_for_s(s) > ed_header_bits(&p, &half, s));
    // l = 2 at n = 8 cannot pay within the scan budget
    let s2 = desk_value_set_size(8, 5, 2, DEFAULT_PRIME);
    assert!(s2 >= 18);
}

fn bits_for_s(s: u64) -> u32 {
    crate::ffield::bits_for(s)
}

#[test]
fn matroid_matching_reduces_to_graph_matching() {
    let f = gf();
    let g = crate::tutte::Graph::cycle(5);
    let params = ApproxParams::new(1, 2).unwrap();
    let cfg = RunConfig::default();
    let id = DenseMatrix::identity(f, 5);
    let pencil = matroid_matching_pencil(&id, &g).unwrap();
    let mut tape = cfg.pencil_tape(&pencil, &params, 0).unwrap();
    let got = matroid_matching_approx(&id, &g, &mut tape, &cfg, &params).unwrap().answer;
    assert!(got >= params.bound(2) && got <= 2);
    let zero = DenseMatrix::zeros(f, 2, 5);
    let pencil = matroid_matching_pencil(&zero, &g).unwrap();
    let mut tape = cfg.pencil_tape(&pencil, &params, 0).unwrap();
    assert_eq!(matroid_matching_approx(&zero, &g, &mut tape, &cfg, &params).unwrap().answer, 0);
}
