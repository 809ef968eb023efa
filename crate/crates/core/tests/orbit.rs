//! Halting experiments: orbit hits against native runs.

mod common;

use cantor_tm::fixtures::{incrementer, two_state_loop};
use cantor_tm::format::parse_machine;
use cantor_tm::orbit::{
    read_trace, reader_latency, run_orbit, verify_with_trace, write_trace, TraceRow,
};
use cantor_tm::{build_experiment, verify_equivalence, ExperimentSpec, Mode, RadixRational};
use common::{corpus, pick_target};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(m: cantor_tm::TuringMachine, input: cantor_tm::Configuration, k: usize, target: Vec<u16>, mode: Mode, budget: u64) -> ExperimentSpec {
    ExperimentSpec { machine: m, input, k, target, mode, budget }
}

#[test]
fn incrementer_start_point_by_hand() {
    // sequence 1 . q0 1 1 over {b, 1, q0, qh}: radix 7, x = 0.2, y = 0.4 2 2
    let m = incrementer();
    let s = spec(m.clone(), m.input(-1, &[1, 1, 1]), 1, vec![1, 1, 0], Mode::Direct, 100);
    let exp = build_experiment(&s).unwrap();
    assert_eq!(exp.start.x, RadixRational::new(7, &BigInt::from(2), 1));
    assert_eq!(exp.start.y, RadixRational::new(7, &BigInt::from(4 * 49 + 2 * 7 + 2), 3));
    // exactly one domain block holds the start point
    let holding = exp.map.pieces().iter().filter(|p| p.domain.contains(&exp.start)).count()
        + exp.map.identity_domains().iter().filter(|b| b.contains(&exp.start)).count();
    assert_eq!(holding, 1);
}

#[test]
fn start_in_halt_region_hits_at_zero() {
    let m = incrementer();
    let mut input = m.input(0, &[1]);
    input.state = m.halting();
    let s = spec(m, input, 0, vec![1], Mode::Direct, 10);
    let exp = build_experiment(&s).unwrap();
    assert_eq!(run_orbit(&exp.map, &exp.start, &exp.halt_blocks, 10, None).hit, Some(0));
}

#[test]
fn looping_machine_never_hits() {
    let m = two_state_loop();
    let input = m.input(0, &[1]);
    assert!(m.run(&input, 10_000).unwrap().halted_steps().is_none());
    let s = spec(m, input, 0, vec![1], Mode::Direct, 10_000);
    let v = verify_equivalence(&s).unwrap();
    assert_eq!(v.orbit_hit, None);
    assert!(v.consistent);
}

#[test]
fn immediate_halt_hits_at_one() {
    let m = parse_machine(
        "alphabet: b 1\nstates: q0 qh\ninitial: q0\nhalt: qh\nrule: q0 b -> qh 1 N\nrule: q0 1 -> qh 1 N\n",
    )
    .unwrap();
    let s = spec(m.clone(), m.input(0, &[]), 0, vec![1], Mode::Direct, 5);
    let v = verify_equivalence(&s).unwrap();
    assert_eq!((v.orbit_hit, v.consistent, v.orbit_accepts), (Some(1), true, true));
}

#[test]
fn reader_offset_is_exact() {
    let m = incrementer();
    for k in 0..=2usize {
        let input = m.input(0, &[1, 1]);
        let out = m.run(&input, 100).unwrap();
        let n = out.halted_steps().unwrap();
        let target = out.config().output_window(k);
        let v = verify_equivalence(&spec(m.clone(), input, k, target, Mode::Reader, 100)).unwrap();
        assert_eq!(v.orbit_hit, Some(n + 3 * k as u64 + 1));
        assert_eq!(reader_latency(k), 3 * k as u64 + 1);
        assert!(v.consistent);
    }
}

#[test]
fn wrong_window_in_reader_mode_is_absorbed() {
    let m = incrementer();
    let input = m.input(0, &[1, 1]);
    for budget in [10, 100, 1000, 10_000] {
        let v = verify_equivalence(&spec(m.clone(), input.clone(), 1, vec![0, 0, 0], Mode::Reader, budget)).unwrap();
        assert_eq!(v.orbit_hit, None);
        assert!(v.consistent && !v.native_accepts);
    }
}

#[test]
fn random_corpus_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (m, input) in corpus(42, 80) {
        let k = rng.gen_range(0..=1);
        let target = pick_target(&mut rng, &m, &input, k);
        for mode in [Mode::Direct, Mode::Reader] {
            let v = verify_equivalence(&spec(m.clone(), input.clone(), k, target.clone(), mode, 2_000)).unwrap();
            assert!(v.consistent, "{mode:?} {}", cantor_tm::format::write_machine(&m));
        }
    }
}

#[test]
fn larger_budget_never_loses_a_hit() {
    for (m, input) in corpus(43, 60) {
        let mut last = None;
        for budget in [1, 5, 25, 125, 625] {
            let s = spec(m.clone(), input.clone(), 0, vec![0], Mode::Direct, budget);
            let exp = build_experiment(&s).unwrap();
            let hit = run_orbit(&exp.map, &exp.start, &exp.halt_blocks, budget, None).hit;
            if last.is_some() {
                assert_eq!(hit, last);
            }
            last = hit;
        }
    }
}

#[test]
fn trace_replays_exactly() {
    for (m, input) in corpus(44, 20) {
        let s = spec(m, input, 0, vec![0], Mode::Direct, 300);
        let exp = build_experiment(&s).unwrap();
        let mut rows: Vec<TraceRow> = Vec::new();
        verify_with_trace(&s, Some(&mut rows)).unwrap();
        let mut csv = Vec::new();
        write_trace(&mut csv, exp.map.radix(), &rows).unwrap();
        let (radix, back) = read_trace(&csv[..]).unwrap();
        assert_eq!(radix, exp.map.radix());
        assert_eq!(back, rows);
        for pair in back.windows(2) {
            assert_eq!(exp.map.apply(&pair[0].point), pair[1].point);
        }
        let mut again = Vec::new();
        write_trace(&mut again, radix, &back).unwrap();
        assert_eq!(again, csv);
    }
}
