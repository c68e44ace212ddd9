use super::*;
use crate::ffield::PrimeField;
use crate::params::RunConfig;
use crate::tape::{Branch, CaseTag, TapeSource};

fn small_spec(s: u64) -> FieldSpec {
    FieldSpec::new(PrimeField::new(crate::ffield::DEFAULT_PRIME).unwrap(), s).unwrap()
}

fn fe(v: &[u64]) -> Vec<FieldElement> {
    v.iter().map(|&x| FieldElement::raw(x)).collect()
}

fn run(g: &Graph, cfg: &RunConfig) -> crate::tape::RunOutcome<MatchingSize> {
    let mut tape = cfg.tutte_tape(g, 0).unwrap();
    matching_size(g, &mut tape, cfg).unwrap()
}

#[test]
fn zero_edge_gives_2a() {
    let spec = small_spec(16);
    let g = Graph::path(2);
    let case = case_split(&g, &fe(&[0]), &spec, ScanStrategy::Sweep).unwrap();
    assert_eq!(case, TutteCase::TwoA { edge: 0, value: FieldElement::ONE, rank: 0 });
}

#[test]
fn path_with_dead_edge_gives_2b() {
    let spec = small_spec(16);
    let g = Graph::path(3);
    for scan in [ScanStrategy::Sweep, ScanStrategy::Exhaustive] {
        let case = case_split(&g, &fe(&[0, 5]), &spec, scan).unwrap();
        assert_eq!(case, TutteCase::TwoB { edge: 0, value: FieldElement::ONE, vertex: 2 });
    }
    let c = restore_value_2b(&g, &fe(&[0, 5]), 0, 2, &spec, ScanStrategy::Sweep).unwrap();
    assert_eq!((c.count, c.first), (1, Some(FieldElement::ZERO)));
}

#[test]
fn sweep_agrees_with_exhaustive() {
    let spec = small_spec(8);
    let graphs = [Graph::path(4), Graph::cycle(5), Graph::complete(4), Graph::new(5, &[(0, 1), (1, 2), (2, 0), (3, 4), (2, 3)]).unwrap()];
    let mut state = 7u64;
    for g in &graphs {
        for _ in 0..20 {
            let values: Vec<FieldElement> = (0..g.m())
                .map(|_| {
                    state = crate::params::splitmix(state);
                    FieldElement::raw(state % 3)
                })
                .collect();
            let a = case_split(g, &values, &spec, ScanStrategy::Sweep).unwrap();
            let b = case_split(g, &values, &spec, ScanStrategy::Exhaustive).unwrap();
            assert_eq!(a, b, "{g:?} {values:?}");
            for e in 0..g.m() {
                for rank in [0, 2, 4] {
                    assert_eq!(
                        restore_value_2a(g, &values, e, rank, &spec, ScanStrategy::Sweep).unwrap(),
                        restore_value_2a(g, &values, e, rank, &spec, ScanStrategy::Exhaustive).unwrap()
                    );
                }
                for v in 0..g.n() {
                    assert_eq!(
                        restore_value_2b(g, &values, e, v, &spec, ScanStrategy::Sweep).unwrap(),
                        restore_value_2b(g, &values, e, v, &spec, ScanStrategy::Exhaustive).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn greedy_reaches_matching_rank() {
    let spec = small_spec(64);
    for (g, nu) in [(Graph::path(3), 1), (Graph::cycle(5), 2), (Graph::complete(4), 2), (Graph::petersen(), 5)] {
        let values = geelen_greedy(&g, &spec, ScanStrategy::Sweep).unwrap();
        assert_eq!(tutte_matrix(&g, &values, spec.field).unwrap().rank(), 2 * nu);
        assert!(is_max_rank(&g, &values, &spec, ScanStrategy::Sweep).unwrap());
    }
}

#[test]
fn small_graphs_end_to_end() {
    let cfg = RunConfig::with_seed(3);
    let out = run(&Graph::path(3), &cfg);
    assert_eq!(out.answer.nu, 1);
    assert_eq!(out.answer.deficiency.as_slice(), &[0, 2]);
    assert!(out.restored);
    assert_eq!(run(&Graph::cycle(3), &cfg).answer.deficiency.len(), 3);
    let k4 = run(&Graph::complete(4), &cfg);
    assert_eq!(k4.answer.nu, 2);
    assert!(k4.answer.deficiency.is_empty());
    assert_eq!(run(&Graph::empty(3), &cfg).answer.nu, 0);
}

#[test]
fn zero_tape_takes_compute_branch() {
    let g = Graph::cycle(5);
    let cfg = RunConfig { tape: TapeSource::Bytes(vec![0; 4096]), audit: true, ..Default::default() };
    let out = run(&g, &cfg);
    assert_eq!(out.branch, Branch::Compute { early: false });
    assert_eq!(out.answer.nu, 2);
    assert!(out.restored);
    assert_eq!(out.summary.events.get(&CaseTag::TwoA.to_string()), Some(&g.n()));
    assert!(out.audit.iter().all(|e| e.candidates == 1));
    assert!(out.freed_bits > 0);
}

#[test]
fn gallai_edmonds_of_a_pendant_triangle() {
    // triangle 0-1-2 with a pendant 3 on 2
    let g = Graph::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
    let mut tape = RunConfig::default().tutte_tape(&g, 0).unwrap();
    let ge = gallai_edmonds(&g, &mut tape, &RunConfig::default()).unwrap().answer;
    assert_eq!(ge.nu, 2);
    assert!(ge.d.is_empty());
    assert_eq!(ge.c, vec![0, 1, 2, 3]);
    let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let mut tape = RunConfig::default().tutte_tape(&star, 0).unwrap();
    let ge = gallai_edmonds(&star, &mut tape, &RunConfig::default()).unwrap().answer;
    assert_eq!((ge.d.clone(), ge.a.clone(), ge.c.len()), (vec![1, 2, 3], vec![0], 0));
    assert_eq!(ge.d_components.len(), 3);
}
