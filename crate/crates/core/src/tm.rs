//! Single-tape Turing machines with a fixed head and a moving tape.
//!
//! A rule `δ(q, t₀) = (q′, t₀′, ε)` writes `t₀′` into cell 0 and then
//! re-indexes the tape so that the new cell `n` holds the old cell `n + ε`.
//! `ε = +1` is a left shift of the tape ([`Move::Left`]) and `ε = −1` a right
//! shift ([`Move::Right`]).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::tape::{SymbolIndex, Tape, BLANK};

pub type StateIndex = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmError {
    #[error("step requested from the halting state of an unextended machine")]
    HaltingStateStep,
    #[error("unknown state index {0}")]
    UnknownState(StateIndex),
    #[error("unknown symbol index {0}")]
    UnknownSymbol(SymbolIndex),
    #[error("symbol {0:?} is not in the alphabet")]
    SymbolNotInAlphabet(String),
    #[error("machine has no halting row; extend it first")]
    NotExtended,
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("target window has {got} symbols, expected {expected}")]
    TargetLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// ε = +1
    Left,
    /// ε = −1
    Right,
    /// ε = 0
    Stay,
}

impl Move {
    pub fn epsilon(self) -> i64 {
        match self {
            Move::Left => 1,
            Move::Right => -1,
            Move::Stay => 0,
        }
    }

    pub fn from_epsilon(eps: i64) -> Option<Move> {
        match eps {
            1 => Some(Move::Left),
            -1 => Some(Move::Right),
            0 => Some(Move::Stay),
            _ => None,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'N',
        }
    }

    pub fn from_letter(c: &str) -> Option<Move> {
        match c {
            "L" => Some(Move::Left),
            "R" => Some(Move::Right),
            "N" => Some(Move::Stay),
            _ => None,
        }
    }

    pub const ALL: [Move; 3] = [Move::Left, Move::Right, Move::Stay];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    pub state: StateIndex,
    pub write: SymbolIndex,
    pub movement: Move,
}

impl Action {
    pub fn new(state: StateIndex, write: SymbolIndex, movement: Move) -> Self {
        Action {
            state,
            write,
            movement,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringMachine {
    states: Vec<String>,
    /// `alphabet[0]` is the blank.
    alphabet: Vec<String>,
    initial: StateIndex,
    halting: StateIndex,
    /// Row-major over `(state, symbol)`. Halting rows are `None` until the
    /// machine is extended.
    rules: Vec<Option<Action>>,
}

impl TuringMachine {
    /// Validates and builds a machine. `rules` must cover every
    /// `(state, symbol)` pair with `state != halting`; halting rows may be
    /// given only if they are exactly the halting extension.
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: StateIndex,
        halting: StateIndex,
        rules: impl IntoIterator<Item = ((StateIndex, SymbolIndex), Action)>,
    ) -> Result<Self, TmError> {
        if alphabet.len() < 2 {
            return Err(TmError::Invalid(
                "alphabet needs at least two symbols".into(),
            ));
        }
        if states.len() < 2 {
            return Err(TmError::Invalid("need at least two states".into()));
        }
        check_unique(&states, "state")?;
        check_unique(&alphabet, "symbol")?;
        let ns = states.len();
        let na = alphabet.len();
        if initial as usize >= ns {
            return Err(TmError::UnknownState(initial));
        }
        if halting as usize >= ns {
            return Err(TmError::UnknownState(halting));
        }
        if initial == halting {
            return Err(TmError::Invalid(
                "initial and halting states must differ".into(),
            ));
        }
        let mut table = vec![None; ns * na];
        for ((q, s), act) in rules {
            if q as usize >= ns {
                return Err(TmError::UnknownState(q));
            }
            if act.state as usize >= ns {
                return Err(TmError::UnknownState(act.state));
            }
            if s as usize >= na {
                return Err(TmError::UnknownSymbol(s));
            }
            if act.write as usize >= na {
                return Err(TmError::UnknownSymbol(act.write));
            }
            let slot = &mut table[q as usize * na + s as usize];
            if slot.is_some() {
                return Err(TmError::Invalid(format!(
                    "duplicate rule for ({}, {})",
                    states[q as usize], alphabet[s as usize]
                )));
            }
            *slot = Some(act);
        }
        let machine = TuringMachine {
            states,
            alphabet,
            initial,
            halting,
            rules: table,
        };
        for q in 0..ns as StateIndex {
            for s in 0..na as SymbolIndex {
                let rule = machine.rule(q, s);
                if q == halting {
                    if let Some(act) = rule {
                        if act != Action::new(initial, s, Move::Stay) {
                            return Err(TmError::Invalid(
                                "rules from the halting state must be the halting extension".into(),
                            ));
                        }
                    }
                } else if rule.is_none() {
                    return Err(TmError::Invalid(format!(
                        "missing rule for ({}, {})",
                        machine.states[q as usize], machine.alphabet[s as usize]
                    )));
                }
            }
        }
        let halting_rows = (0..na as SymbolIndex)
            .filter(|&s| machine.rule(halting, s).is_some())
            .count();
        if halting_rows != 0 && halting_rows != na {
            return Err(TmError::Invalid("partial halting row".into()));
        }
        Ok(machine)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn initial(&self) -> StateIndex {
        self.initial
    }

    pub fn halting(&self) -> StateIndex {
        self.halting
    }

    pub fn state_name(&self, q: StateIndex) -> &str {
        &self.states[q as usize]
    }

    pub fn symbol_name(&self, s: SymbolIndex) -> &str {
        &self.alphabet[s as usize]
    }

    pub fn state_index(&self, name: &str) -> Option<StateIndex> {
        self.states.iter().position(|n| n == name).map(|i| i as StateIndex)
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolIndex> {
        self.alphabet
            .iter()
            .position(|n| n == name)
            .map(|i| i as SymbolIndex)
    }

    pub fn rule(&self, q: StateIndex, s: SymbolIndex) -> Option<Action> {
        self.rules[q as usize * self.alphabet.len() + s as usize]
    }

    /// All defined rules as `((state, scanned), action)`, in table order.
    pub fn rules(&self) -> impl Iterator<Item = ((StateIndex, SymbolIndex), Action)> + '_ {
        let na = self.alphabet.len();
        self.rules.iter().enumerate().filter_map(move |(i, r)| {
            r.map(|a| (((i / na) as StateIndex, (i % na) as SymbolIndex), a))
        })
    }

    pub fn is_extended(&self) -> bool {
        self.rule(self.halting, BLANK).is_some()
    }

    /// Defines `δ(q_halt, t₀) = (q₀, t₀, 0)` for every symbol; other rows are untouched.
    pub fn extend_halting(&self) -> TuringMachine {
        let mut out = self.clone();
        let na = self.alphabet.len();
        for s in 0..na {
            out.rules[self.halting as usize * na + s] =
                Some(Action::new(self.initial, s as SymbolIndex, Move::Stay));
        }
        out
    }

    fn check_config(&self, config: &Configuration) -> Result<(), TmError> {
        if config.state as usize >= self.states.len() {
            return Err(TmError::UnknownState(config.state));
        }
        if let Some((_, s)) = config
            .tape
            .iter()
            .find(|(_, s)| *s as usize >= self.alphabet.len())
        {
            return Err(TmError::UnknownSymbol(s));
        }
        Ok(())
    }

    /// One application of the global transition function.
    pub fn step(&self, config: &Configuration) -> Result<Configuration, TmError> {
        self.check_config(config)?;
        let mut next = config.clone();
        self.step_in_place(&mut next)?;
        Ok(next)
    }

    fn step_in_place(&self, config: &mut Configuration) -> Result<(), TmError> {
        let scanned = config.tape.get(0);
        let act = self
            .rule(config.state, scanned)
            .ok_or(TmError::HaltingStateStep)?;
        config.state = act.state;
        config.tape.set(0, act.write);
        config.tape.shift(act.movement.epsilon());
        Ok(())
    }

    /// Iterates [`step`](Self::step) until the halting state is reached or
    /// `max_steps` steps have been taken. Halting is detected before any
    /// halting-extension row fires.
    pub fn run(&self, input: &Configuration, max_steps: u64) -> Result<RunResult, TmError> {
        self.check_config(input)?;
        let mut config = input.clone();
        let mut steps = 0;
        loop {
            if config.state == self.halting {
                return Ok(RunResult::Halted { steps, config });
            }
            if steps == max_steps {
                return Ok(RunResult::Running { config });
            }
            self.step_in_place(&mut config)?;
            steps += 1;
        }
    }

    /// Decides injectivity of the global transition function from the rule
    /// table: two rules entering the same state are compatible only when
    /// they shift the same way and write different symbols.
    pub fn check_reversible(&self) -> Result<ReversibilityReport, TmError> {
        if !self.is_extended() {
            return Err(TmError::NotExtended);
        }
        let mut by_target: HashMap<StateIndex, Vec<((StateIndex, SymbolIndex), Action)>> =
            HashMap::new();
        for (src, act) in self.rules() {
            by_target.entry(act.state).or_default().push((src, act));
        }
        let mut targets: Vec<_> = by_target.keys().copied().collect();
        targets.sort_unstable();
        for target in targets {
            let rules = &by_target[&target];
            for (i, &(src1, act1)) in rules.iter().enumerate() {
                for &(src2, act2) in &rules[i + 1..] {
                    if act1.movement != act2.movement || act1.write == act2.write {
                        let configs = collision_pair(src1, act1, src2, act2);
                        return Ok(ReversibilityReport {
                            reversible: false,
                            witness: Some(CollisionWitness {
                                rules: [src1, src2],
                                configs,
                            }),
                        });
                    }
                }
            }
        }
        Ok(ReversibilityReport {
            reversible: true,
            witness: None,
        })
    }

    /// The output-reading machine: runs like `self`, but instead of halting
    /// it compares cells `−k..=k` with `target` and halts only on a match,
    /// otherwise it loops forever in a trap state.
    pub fn make_reader(&self, k: usize, target: &[SymbolIndex]) -> Result<TuringMachine, TmError> {
        if target.len() != 2 * k + 1 {
            return Err(TmError::TargetLength {
                expected: 2 * k + 1,
                got: target.len(),
            });
        }
        if let Some(&bad) = target.iter().find(|&&s| s as usize >= self.alphabet.len()) {
            return Err(TmError::SymbolNotInAlphabet(format!("#{bad}")));
        }
        let mut states = self.states.clone();
        let base = states.len() as StateIndex;
        let fresh = |stem: String, states: &mut Vec<String>| {
            let mut name = stem;
            while states.contains(&name) {
                name.push('\'');
            }
            states.push(name);
            (states.len() - 1) as StateIndex
        };
        let readers: Vec<StateIndex> = (0..=3 * k)
            .map(|i| fresh(format!("r{i}"), &mut states))
            .collect();
        let nohalt = fresh("q_nohalt".into(), &mut states);
        debug_assert_eq!(readers[0], base);

        let mut rules = Vec::new();
        for ((q, s), act) in self.rules() {
            if q == self.halting {
                continue;
            }
            if act.state == self.halting {
                rules.push(((q, s), Action::new(readers[0], act.write, act.movement)));
            } else {
                rules.push(((q, s), act));
            }
        }
        let na = self.alphabet.len() as SymbolIndex;
        // target[j] is the expected symbol at position j - k
        let expect = |pos: i64| target[(pos + k as i64) as usize];
        for i in 0..=3 * k {
            for s in 0..na {
                let act = if i == 3 * k {
                    if s == expect(k as i64) {
                        Action::new(self.halting, s, Move::Stay)
                    } else {
                        Action::new(nohalt, s, Move::Stay)
                    }
                } else if i < k {
                    if s == expect(-(i as i64)) {
                        Action::new(readers[i + 1], s, Move::Right)
                    } else {
                        Action::new(nohalt, s, Move::Stay)
                    }
                } else if s == expect(i as i64 - 2 * k as i64) {
                    Action::new(readers[i + 1], s, Move::Left)
                } else {
                    Action::new(nohalt, s, Move::Stay)
                };
                rules.push(((readers[i], s), act));
            }
        }
        for s in 0..na {
            rules.push(((nohalt, s), Action::new(nohalt, s, Move::Stay)));
        }
        TuringMachine::new(
            states,
            self.alphabet.clone(),
            self.initial,
            self.halting,
            rules,
        )
    }

    /// Configuration in the initial state with `symbols[0]` at position `origin`.
    pub fn input(&self, origin: i64, symbols: &[SymbolIndex]) -> Configuration {
        Configuration::new(self.initial, Tape::from_slice(origin, symbols))
    }
}

fn check_unique(names: &[String], what: &str) -> Result<(), TmError> {
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n.chars().any(char::is_whitespace) {
            return Err(TmError::Invalid(format!("bad {what} name {n:?}")));
        }
        if names[..i].contains(n) {
            return Err(TmError::Invalid(format!("duplicate {what} {n:?}")));
        }
    }
    Ok(())
}

/// Two configurations mapped to the same successor by the given rules.
fn collision_pair(
    src1: (StateIndex, SymbolIndex),
    act1: Action,
    src2: (StateIndex, SymbolIndex),
    act2: Action,
) -> [Configuration; 2] {
    // Common successor tape: each rule's written cell lands at −ε.
    let mut image = Tape::blank();
    image.set(-act1.movement.epsilon(), act1.write);
    image.set(-act2.movement.epsilon(), act2.write);
    let preimage = |(q, s): (StateIndex, SymbolIndex), act: Action| {
        let mut tape = image.clone();
        tape.shift(-act.movement.epsilon());
        tape.set(0, s);
        Configuration::new(q, tape)
    };
    [preimage(src1, act1), preimage(src2, act2)]
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateIndex,
    pub tape: Tape,
}

impl Configuration {
    pub fn new(state: StateIndex, tape: Tape) -> Self {
        Configuration { state, tape }
    }

    /// Symbols at positions `−k..=k`.
    pub fn output_window(&self, k: usize) -> Vec<SymbolIndex> {
        self.tape.window(-(k as i64), k as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunResult {
    Halted { steps: u64, config: Configuration },
    Running { config: Configuration },
}

impl RunResult {
    pub fn halted_steps(&self) -> Option<u64> {
        match self {
            RunResult::Halted { steps, .. } => Some(*steps),
            RunResult::Running { .. } => None,
        }
    }

    pub fn config(&self) -> &Configuration {
        match self {
            RunResult::Halted { config, .. } | RunResult::Running { config } => config,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionWitness {
    /// Sources `(state, scanned symbol)` of the two colliding rules.
    pub rules: [(StateIndex, SymbolIndex); 2],
    pub configs: [Configuration; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversibilityReport {
    pub reversible: bool,
    pub witness: Option<CollisionWitness>,
}

/// Renders configurations with the dot convention: `… t₋₁ . q t₀ t₁ …`.
pub struct ConfigDisplay<'a> {
    pub machine: &'a TuringMachine,
    pub config: &'a Configuration,
}

impl fmt::Display for ConfigDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.config.tape.support().unwrap_or((0, 0));
        let (lo, hi) = (lo.min(0), hi.max(0));
        write!(f, "{}:", self.machine.state_name(self.config.state))?;
        for p in lo..=hi {
            if p == 0 {
                write!(f, " .")?;
            }
            write!(f, " {}", self.machine.symbol_name(self.config.tape.get(p)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_machine;

    pub(crate) fn incrementer() -> TuringMachine {
        parse_machine(
            "alphabet: b 1\nstates: q0 qh\ninitial: q0\nhalt: qh\n\
             rule: q0 1 -> q0 1 L\nrule: q0 b -> qh 1 N\n",
        )
        .unwrap()
    }

    #[test]
    fn stay_rule_without_write_is_a_fixed_point() {
        let m = parse_machine(
            "alphabet: b 1\nstates: q0 qh\ninitial: q0\nhalt: qh\n\
             rule: q0 1 -> q0 1 N\nrule: q0 b -> qh b N\n",
        )
        .unwrap();
        let c = m.input(0, &[1]);
        assert_eq!(m.step(&c).unwrap(), c);
    }

    #[test]
    fn written_cell_moves_left_under_left_shift() {
        let m = parse_machine(
            "alphabet: b x\nstates: q0 q1 qh\ninitial: q0\nhalt: qh\n\
             rule: q0 b -> q1 x L\nrule: q0 x -> qh x N\n\
             rule: q1 b -> qh b N\nrule: q1 x -> qh x N\n",
        )
        .unwrap();
        let next = m.step(&m.input(0, &[])).unwrap();
        assert_eq!(next.state, 1);
        assert_eq!(next.tape, Tape::from_cells([(-1, 1)]));
    }

    #[test]
    fn step_from_halt_needs_extension() {
        let m = incrementer();
        let c = Configuration::new(m.halting(), Tape::blank());
        assert_eq!(m.step(&c), Err(TmError::HaltingStateStep));
        let ext = m.extend_halting();
        let tape = Tape::from_slice(-1, &[1, 1, 1]);
        let c = Configuration::new(ext.halting(), tape.clone());
        assert_eq!(ext.step(&c).unwrap(), Configuration::new(ext.initial(), tape));
        assert_eq!(ext.extend_halting(), ext);
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let m = incrementer();
        assert_eq!(
            m.step(&Configuration::new(7, Tape::blank())),
            Err(TmError::UnknownState(7))
        );
        assert_eq!(
            m.step(&Configuration::new(0, Tape::from_slice(0, &[5]))),
            Err(TmError::UnknownSymbol(5))
        );
    }

    #[test]
    fn incrementer_appends_a_one() {
        // input 11 at positions 0,1: two left shifts, then write 1 and halt
        let m = incrementer();
        let result = m.run(&m.input(0, &[1, 1]), 100).unwrap();
        let RunResult::Halted { steps, config } = result else {
            panic!("incrementer must halt")
        };
        assert_eq!(steps, 3);
        assert_eq!(config.tape, Tape::from_slice(-2, &[1, 1, 1]));
        assert_eq!(config.output_window(1), vec![1, 1, 0]);
        assert_eq!(config.output_window(2), vec![1, 1, 1, 0, 0]);

        // post-halt step re-enters q0 with the output intact
        let ext = m.extend_halting();
        let again = ext.step(&config).unwrap();
        assert_eq!(again.state, ext.initial());
        assert_eq!(again.tape, config.tape);
    }

    #[test]
    fn run_limits_and_immediate_halt() {
        let looping = parse_machine(
            "alphabet: b 1\nstates: a c h\ninitial: a\nhalt: h\n\
             rule: a b -> c b N\nrule: a 1 -> c 1 N\nrule: c b -> a b N\nrule: c 1 -> a 1 N\n",
        )
        .unwrap();
        assert!(matches!(
            looping.run(&looping.input(0, &[1]), 100).unwrap(),
            RunResult::Running { .. }
        ));
        let quick = parse_machine(
            "alphabet: b 1\nstates: a h\ninitial: a\nhalt: h\n\
             rule: a b -> h b N\nrule: a 1 -> h 1 R\n",
        )
        .unwrap();
        assert_eq!(
            quick.run(&quick.input(0, &[1]), 5).unwrap().halted_steps(),
            Some(1)
        );
        assert_eq!(
            quick.run(&quick.input(0, &[1]), 0).unwrap().halted_steps(),
            None
        );
    }

    #[test]
    fn identical_images_are_not_reversible() {
        let m = parse_machine(
            "alphabet: 0 1\nstates: q0 q1 qh\ninitial: q0\nhalt: qh\n\
             rule: q0 0 -> q1 0 N\nrule: q0 1 -> q1 0 N\n\
             rule: q1 0 -> qh 0 N\nrule: q1 1 -> qh 1 N\n",
        )
        .unwrap()
        .extend_halting();
        let report = m.check_reversible().unwrap();
        assert!(!report.reversible);
        let w = report.witness.unwrap();
        assert_ne!(w.configs[0], w.configs[1]);
        assert_eq!(
            m.step(&w.configs[0]).unwrap(),
            m.step(&w.configs[1]).unwrap()
        );
        assert_eq!(w.rules, [(0, 0), (0, 1)]);
        assert_eq!(w.configs[0].state, w.configs[1].state);
        assert_eq!(w.configs[0].tape.get(0), 0);
        assert_eq!(w.configs[1].tape.get(0), 1);
    }

    #[test]
    fn single_incoming_rules_are_reversible() {
        // every state, including q0 via the halting row, has compatible preimages
        let m = parse_machine(
            "alphabet: 0 1\nstates: q0 qh\ninitial: q0\nhalt: qh\n\
             rule: q0 0 -> qh 1 L\nrule: q0 1 -> qh 0 L\n",
        )
        .unwrap();
        assert_eq!(m.check_reversible(), Err(TmError::NotExtended));
        let report = m.extend_halting().check_reversible().unwrap();
        assert!(report.reversible);
        assert!(report.witness.is_none());
    }

    #[test]
    fn reader_rejects_bad_targets() {
        let m = incrementer();
        assert!(matches!(
            m.make_reader(1, &[1]),
            Err(TmError::TargetLength { expected: 3, got: 1 })
        ));
        assert!(matches!(
            m.make_reader(0, &[9]),
            Err(TmError::SymbolNotInAlphabet(_))
        ));
    }

    #[test]
    fn reader_checks_cell_zero() {
        let m = incrementer();
        let input = m.input(0, &[1, 1]);
        // the incrementer halts right after writing 1 into cell 0
        for (target, halts) in [(1, true), (0, false)] {
            let reader = m.make_reader(0, &[target]).unwrap();
            assert_eq!(reader.num_states(), m.num_states() + 2);
            let res = reader.run(&input, 1000).unwrap();
            assert_eq!(res.halted_steps().is_some(), halts, "target {target}");
            if halts {
                assert_eq!(res.halted_steps(), Some(3 + 1));
            } else {
                assert_eq!(reader.state_name(res.config().state), "q_nohalt");
            }
        }
    }

    #[test]
    fn reader_latency_is_three_k_plus_one() {
        let m = incrementer();
        let input = m.input(0, &[1, 1]);
        let halted = m.run(&input, 100).unwrap();
        let n = halted.halted_steps().unwrap();
        for k in 0..4 {
            let window = halted.config().output_window(k);
            let reader = m.make_reader(k, &window).unwrap();
            let res = reader.run(&input, 1000).unwrap();
            assert_eq!(res.halted_steps(), Some(n + 3 * k as u64 + 1), "k={k}");
        }
    }

    #[test]
    fn reader_state_names_avoid_collisions() {
        let m = parse_machine(
            "alphabet: b 1\nstates: r0 q_nohalt h\ninitial: r0\nhalt: h\n\
             rule: r0 b -> h b N\nrule: r0 1 -> q_nohalt 1 N\n\
             rule: q_nohalt b -> h b N\nrule: q_nohalt 1 -> h 1 N\n",
        )
        .unwrap();
        let reader = m.make_reader(0, &[0]).unwrap();
        assert_eq!(&reader.states()[3..], ["r0'", "q_nohalt'"]);
    }
}
