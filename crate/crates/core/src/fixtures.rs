//! Reference machines and shifts used by the tests, the CLI and the docs,
//! plus seeded random corpora.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::format::parse_machine;
use crate::gshift::{GeneralizedShift, Window};
use crate::tape::{SymbolIndex, Tape};
use crate::tm::{Action, Configuration, Move, StateIndex, TuringMachine};

/// Unary incrementer: walks left over a block of `1`s and writes one more.
/// On input `1 1` it halts after 3 steps with `1 1 1` at positions −2..0.
pub fn incrementer() -> TuringMachine {
    parse_machine(
        "alphabet: b 1\nstates: q0 qh\ninitial: q0\nhalt: qh\n\
         rule: q0 1 -> q0 1 L\nrule: q0 b -> qh 1 N\n",
    )
    .expect("fixture parses")
}

/// Two rules with identical images: not reversible.
pub fn colliding() -> TuringMachine {
    parse_machine(
        "alphabet: 0 1\nstates: q0 q1 qh\ninitial: q0\nhalt: qh\n\
         rule: q0 0 -> q1 0 N\nrule: q0 1 -> q1 0 N\n\
         rule: q1 0 -> qh 0 N\nrule: q1 1 -> qh 1 N\n",
    )
    .expect("fixture parses")
}

/// Reversible once extended: every rule flips the scanned bit and moves left.
pub fn flipper() -> TuringMachine {
    parse_machine(
        "alphabet: 0 1\nstates: q0 qh\ninitial: q0\nhalt: qh\n\
         rule: q0 0 -> qh 1 L\nrule: q0 1 -> qh 0 L\n",
    )
    .expect("fixture parses")
}

/// Never halts: bounces between two states without touching the tape.
pub fn two_state_loop() -> TuringMachine {
    parse_machine(
        "alphabet: b 1\nstates: a c h\ninitial: a\nhalt: h\n\
         rule: a b -> c b N\nrule: a 1 -> c 1 N\nrule: c b -> a b N\nrule: c 1 -> a 1 N\n",
    )
    .expect("fixture parses")
}

/// Never halts and runs off to the left forever.
pub fn runaway() -> TuringMachine {
    parse_machine(
        "alphabet: b 1\nstates: a h\ninitial: a\nhalt: h\n\
         rule: a b -> a 1 L\nrule: a 1 -> a b L\n",
    )
    .expect("fixture parses")
}

/// Which `F` table to use for the two-symbol example shift on `D = {−1, 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleTable {
    /// `F(0.1) = F(1.1) = −1`, `F(0.0) = F(1.0) = 0`: the table whose block
    /// map is `(3x, y/3)` on A, `(3(x − 2/3), (y − 2/3)/3)` on B and
    /// `(x, y + 2/3)` on C and D.
    Consistent,
    /// `F(0.1) = F(0.0) = −1`, `F(1.1) = F(1.0) = 0`, as listed alongside
    /// the rewrite table; its block map does not match the drawn blocks.
    Literal,
}

/// The two-symbol example shift with `D_F = D_G = {−1, 0}` and
/// `G(0.1) = 0.1`, `G(1.1) = 0.0`, `G(0.0) = 0.1`, `G(1.0) = 1.1`.
pub fn example_shift(table: ExampleTable) -> GeneralizedShift {
    let w = Window::new(-1, 2);
    let mut s = GeneralizedShift::identity(vec!["0".into(), "1".into()], w, w)
        .expect("two symbols");
    s.set_g(&[1, 1], &[0, 0]);
    s.set_g(&[0, 0], &[0, 1]);
    s.set_g(&[1, 0], &[1, 1]);
    let minus_one: [[SymbolIndex; 2]; 2] = match table {
        ExampleTable::Consistent => [[0, 1], [1, 1]],
        ExampleTable::Literal => [[0, 1], [0, 0]],
    };
    for w in minus_one {
        s.set_f(&w, -1);
    }
    s
}

/// `F ≡ by`, `G = id` over `{0, 1}` with one-cell windows at 0.
pub fn standard_shift(by: i64) -> GeneralizedShift {
    let w = Window::new(0, 1);
    let mut s = GeneralizedShift::identity(vec!["0".into(), "1".into()], w, w)
        .expect("two symbols");
    s.set_f(&[0], by);
    s.set_f(&[1], by);
    s
}

/// Random machine with `2..=max_states` states (halting state included) and
/// `2..=max_symbols` symbols. Roughly one rule in four enters the halting
/// state so that a fair share of runs halt.
pub fn random_machine<R: Rng>(rng: &mut R, max_states: usize, max_symbols: usize) -> TuringMachine {
    let ns = rng.gen_range(2..=max_states.max(2));
    let na = rng.gen_range(2..=max_symbols.max(2));
    let mut states: Vec<String> = (0..ns - 1).map(|i| format!("q{i}")).collect();
    states.push("qh".into());
    let alphabet: Vec<String> = std::iter::once("b".to_string())
        .chain((1..na).map(|i| i.to_string()))
        .collect();
    let halting = (ns - 1) as StateIndex;
    let mut rules = Vec::new();
    for q in 0..halting {
        for s in 0..na as SymbolIndex {
            let target = if rng.gen_bool(0.25) {
                halting
            } else {
                rng.gen_range(0..halting)
            };
            let act = Action::new(
                target,
                rng.gen_range(0..na) as SymbolIndex,
                *Move::ALL.choose(rng).unwrap(),
            );
            rules.push(((q, s), act));
        }
    }
    TuringMachine::new(states, alphabet, 0, halting, rules).expect("generated machine is valid")
}

/// Input in the initial state with at most `max_support` random cells placed
/// in a window around position 0.
pub fn random_input<R: Rng>(rng: &mut R, machine: &TuringMachine, max_support: usize) -> Configuration {
    let len = rng.gen_range(0..=max_support);
    let start = -(rng.gen_range(0..=len) as i64);
    let cells: Vec<SymbolIndex> = (0..len)
        .map(|_| rng.gen_range(0..machine.num_symbols()) as SymbolIndex)
        .collect();
    Configuration::new(machine.initial(), Tape::from_slice(start, &cells))
}

/// Random configuration in any state, for conjugacy checks.
pub fn random_config<R: Rng>(rng: &mut R, machine: &TuringMachine, max_support: usize) -> Configuration {
    let mut c = random_input(rng, machine, max_support);
    c.state = rng.gen_range(0..machine.num_states()) as StateIndex;
    c
}

/// Every machine with `num_states` states (the last one halting, state 0
/// initial) over `num_symbols` symbols, in a fixed enumeration order.
pub fn all_machines(num_states: usize, num_symbols: usize) -> impl Iterator<Item = TuringMachine> {
    let mut states: Vec<String> = (0..num_states - 1).map(|i| format!("q{i}")).collect();
    states.push("qh".into());
    let alphabet: Vec<String> = (0..num_symbols).map(|i| i.to_string()).collect();
    let halting = (num_states - 1) as StateIndex;
    let actions: Vec<Action> = (0..num_states as StateIndex)
        .flat_map(|q| {
            (0..num_symbols as SymbolIndex)
                .flat_map(move |w| Move::ALL.into_iter().map(move |m| Action::new(q, w, m)))
        })
        .collect();
    let rows = (num_states - 1) * num_symbols;
    let total = actions.len().pow(rows as u32);
    (0..total).map(move |mut code| {
        let mut rules = Vec::with_capacity(rows);
        for q in 0..halting {
            for s in 0..num_symbols as SymbolIndex {
                rules.push(((q, s), actions[code % actions.len()]));
                code /= actions.len();
            }
        }
        TuringMachine::new(states.clone(), alphabet.clone(), 0, halting, rules)
            .expect("enumerated machine is valid")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(all_machines(2, 2).count(), 12 * 12);
        assert_eq!(all_machines(3, 2).take(5).count(), 5);
    }

    #[test]
    fn random_corpus_respects_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_machine(&mut rng, 4, 3);
            assert!(m.num_states() <= 4 && m.num_symbols() <= 3);
            let c = random_input(&mut rng, &m, 4);
            assert!(c.tape.iter().count() <= 4);
        }
    }
}
