//! Test-side oracles written independently of the library's own stepping
//! and encoding code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cantor_tm::fixtures::{random_input, random_machine};
use cantor_tm::{Configuration, SymbolIndex, TuringMachine};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// Tape as an ordered map of non-blank cells.
pub type Cells = BTreeMap<i64, SymbolIndex>;

pub fn cells(c: &Configuration) -> Cells {
    c.tape.iter().collect()
}

/// One step straight from the rule table: write, then move the tape so that
/// new cell n holds old cell n + ε (L: ε = +1, R: ε = −1, N: ε = 0).
pub fn oracle_step(m: &TuringMachine, state: u16, tape: &Cells) -> Option<(u16, Cells)> {
    let scanned = tape.get(&0).copied().unwrap_or(0);
    let act = m.rule(state, scanned)?;
    let eps = match act.movement.letter() {
        'L' => 1,
        'R' => -1,
        _ => 0,
    };
    let mut written = tape.clone();
    if act.write == 0 {
        written.remove(&0);
    } else {
        written.insert(0, act.write);
    }
    let moved = written.into_iter().map(|(p, s)| (p - eps, s)).collect();
    Some((act.state, moved))
}

/// Injectivity of the global transition map on every configuration whose
/// tape is supported in [−radius, radius]. Successors are keyed by their
/// exact cell contents.
pub fn brute_force_injective(m: &TuringMachine, radius: i64) -> bool {
    let n = m.num_symbols() as u64;
    let width = (2 * radius + 1) as u32;
    let tapes = n.pow(width);
    let mut seen = std::collections::HashSet::new();
    for q in 0..m.num_states() as u16 {
        for code in 0..tapes {
            let mut tape = Cells::new();
            let mut c = code;
            for p in -radius..=radius {
                let s = (c % n) as SymbolIndex;
                c /= n;
                if s != 0 {
                    tape.insert(p, s);
                }
            }
            let Some(next) = oracle_step(m, q, &tape) else {
                continue;
            };
            if !seen.insert(next) {
                return false;
            }
        }
    }
    true
}

/// Random machines (≤ 4 states, ≤ 3 symbols) with inputs of support ≤ 4.
pub fn corpus(seed: u64, count: usize) -> Vec<(TuringMachine, Configuration)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = random_machine(&mut rng, 4, 3);
            let c = random_input(&mut rng, &m, 4);
            (m, c)
        })
        .collect()
}

/// A target window for `(m, input)`: the actual output window half of the
/// time when the machine halts, random symbols otherwise.
pub fn pick_target(rng: &mut ChaCha8Rng, m: &TuringMachine, input: &Configuration, k: usize) -> Vec<SymbolIndex> {
    if rng.gen_bool(0.5) {
        if let Ok(r) = m.run(input, 10_000) {
            if r.halted_steps().is_some() {
                return r.config().output_window(k);
            }
        }
    }
    (0..2 * k + 1)
        .map(|_| rng.gen_range(0..m.num_symbols()) as SymbolIndex)
        .collect()
}
