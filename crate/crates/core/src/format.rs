//! Line-oriented text formats for machines, shifts, experiments and block
//! map dumps.
//!
//! Every format uses `key: value` lines, `#` starts a comment, and blank
//! lines are ignored.
//!
//! Machine:
//!
//! ```text
//! alphabet: b 0 1        # first symbol is the blank
//! states: q0 q1 qh
//! initial: q0
//! halt: qh
//! rule: q0 0 -> q1 1 L   # L: ε = +1, R: ε = −1, N: ε = 0
//! ```
//!
//! Shift (only entries that differ from `F = 0`, `G = id` are listed):
//!
//! ```text
//! alphabet: b 1 q0 qh
//! states: q0 qh          # optional: acts on configuration sequences only
//! windowF: -1 1
//! windowG: -1 1
//! F: b q0 1 -> 1
//! G: b q0 1 -> b 1 q0
//! ```
//!
//! Experiment (the machine path is relative to the experiment file):
//!
//! ```text
//! machine: incrementer.tm
//! input: 1 1             # dot marks position 0: "1 . 1 1"
//! k: 1
//! target: 1 1 b
//! mode: direct           # or reader
//! budget: 10000
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::cantor::PiecewiseBlockMap;
use crate::gshift::{GeneralizedShift, ShiftDomain, Window};
use crate::tape::{SymbolIndex, Tape};
use crate::tm::{Action, Configuration, Move, StateIndex, TuringMachine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines as `(line number, key, value)`.
fn entries(text: &str) -> Result<Vec<(usize, &str, &str)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return err(i + 1, format!("expected `key: value`, got {line:?}"));
        };
        out.push((i + 1, key.trim(), value.trim()));
    }
    Ok(out)
}

fn words(value: &str) -> Vec<String> {
    value.split_whitespace().map(String::from).collect()
}

fn single<'a>(
    found: &mut Option<(usize, &'a str)>,
    line: usize,
    key: &str,
    value: &'a str,
) -> Result<(), ParseError> {
    if found.is_some() {
        return err(line, format!("duplicate `{key}`"));
    }
    *found = Some((line, value));
    Ok(())
}

fn required<'a>(found: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str), ParseError> {
    found.ok_or(ParseError {
        line: 0,
        message: format!("missing `{key}`"),
    })
}

pub fn parse_machine(text: &str) -> Result<TuringMachine, ParseError> {
    let mut alphabet = None;
    let mut states = None;
    let mut initial = None;
    let mut halt = None;
    let mut rules = Vec::new();
    for (line, key, value) in entries(text)? {
        match key {
            "alphabet" => single(&mut alphabet, line, key, value)?,
            "states" => single(&mut states, line, key, value)?,
            "initial" => single(&mut initial, line, key, value)?,
            "halt" => single(&mut halt, line, key, value)?,
            "rule" => rules.push((line, value)),
            other => return err(line, format!("unknown key `{other}`")),
        }
    }
    let (_, alphabet) = required(alphabet, "alphabet")?;
    let (_, states) = required(states, "states")?;
    let alphabet = words(alphabet);
    let states = words(states);
    let state = |line: usize, name: &str| -> Result<StateIndex, ParseError> {
        states
            .iter()
            .position(|s| s == name)
            .map(|i| i as StateIndex)
            .ok_or(ParseError {
                line,
                message: format!("unknown state {name:?}"),
            })
    };
    let symbol = |line: usize, name: &str| -> Result<SymbolIndex, ParseError> {
        alphabet
            .iter()
            .position(|s| s == name)
            .map(|i| i as SymbolIndex)
            .ok_or(ParseError {
                line,
                message: format!("unknown symbol {name:?}"),
            })
    };
    let (iline, initial) = required(initial, "initial")?;
    let initial = state(iline, initial)?;
    let (hline, halt) = required(halt, "halt")?;
    let halt = state(hline, halt)?;
    let mut table = Vec::new();
    for (line, value) in rules {
        let Some((lhs, rhs)) = value.split_once("->") else {
            return err(line, "rule needs `->`");
        };
        let lhs: Vec<&str> = lhs.split_whitespace().collect();
        let rhs: Vec<&str> = rhs.split_whitespace().collect();
        if lhs.len() != 2 || rhs.len() != 3 {
            return err(line, "rule must read `state symbol -> state symbol move`");
        }
        let movement = Move::from_letter(rhs[2]).ok_or(ParseError {
            line,
            message: format!("move must be L, R or N, got {:?}", rhs[2]),
        })?;
        table.push((
            (state(line, lhs[0])?, symbol(line, lhs[1])?),
            Action::new(state(line, rhs[0])?, symbol(line, rhs[1])?, movement),
        ));
    }
    TuringMachine::new(states, alphabet, initial, halt, table).map_err(|e| ParseError {
        line: 0,
        message: e.to_string(),
    })
}

pub fn write_machine(m: &TuringMachine) -> String {
    let mut out = String::new();
    writeln!(out, "alphabet: {}", m.alphabet().join(" ")).unwrap();
    writeln!(out, "states: {}", m.states().join(" ")).unwrap();
    writeln!(out, "initial: {}", m.state_name(m.initial())).unwrap();
    writeln!(out, "halt: {}", m.state_name(m.halting())).unwrap();
    for ((q, s), act) in m.rules() {
        writeln!(
            out,
            "rule: {} {} -> {} {} {}",
            m.state_name(q),
            m.symbol_name(s),
            m.state_name(act.state),
            m.symbol_name(act.write),
            act.movement.letter()
        )
        .unwrap();
    }
    out
}

fn parse_window(line: usize, value: &str) -> Result<Window, ParseError> {
    let bounds: Vec<i64> = value
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .or_else(|_| err(line, "window bounds must be integers"))?;
    match bounds[..] {
        [lo, hi] if lo <= hi => Ok(Window::from_bounds(lo, hi)),
        _ => err(line, "window must be `lo hi` with lo <= hi"),
    }
}

pub fn parse_shift(text: &str) -> Result<GeneralizedShift, ParseError> {
    let mut alphabet = None;
    let mut states = None;
    let mut wf = None;
    let mut wg = None;
    let mut f_lines = Vec::new();
    let mut g_lines = Vec::new();
    for (line, key, value) in entries(text)? {
        match key {
            "alphabet" => single(&mut alphabet, line, key, value)?,
            "states" => single(&mut states, line, key, value)?,
            "windowF" => single(&mut wf, line, key, value)?,
            "windowG" => single(&mut wg, line, key, value)?,
            "F" => f_lines.push((line, value)),
            "G" => g_lines.push((line, value)),
            other => return err(line, format!("unknown key `{other}`")),
        }
    }
    let (_, alphabet) = required(alphabet, "alphabet")?;
    let alphabet = words(alphabet);
    let (fl, wf) = required(wf, "windowF")?;
    let (gl, wg) = required(wg, "windowG")?;
    let wf = parse_window(fl, wf)?;
    let wg = parse_window(gl, wg)?;
    let mut shift = GeneralizedShift::identity(alphabet.clone(), wf, wg).map_err(|e| ParseError {
        line: 0,
        message: e.to_string(),
    })?;
    if let Some((line, value)) = states {
        let names = words(value);
        let first = alphabet.len().checked_sub(names.len());
        match first {
            Some(first) if !names.is_empty() && alphabet[first..] == names[..] => {
                shift = shift.with_domain(ShiftDomain::Configurations {
                    first_state: first as SymbolIndex,
                });
            }
            _ => return err(line, "`states` must list the trailing alphabet symbols"),
        }
    }
    let symbols = |line: usize, text: &str, len: usize| -> Result<Vec<SymbolIndex>, ParseError> {
        let w: Vec<SymbolIndex> = text
            .split_whitespace()
            .map(|name| {
                shift.symbol_index(name).ok_or(ParseError {
                    line,
                    message: format!("unknown symbol {name:?}"),
                })
            })
            .collect::<Result<_, _>>()?;
        if w.len() != len {
            return err(line, format!("expected {len} symbols"));
        }
        Ok(w)
    };
    let mut f_entries = Vec::new();
    for (line, value) in f_lines {
        let Some((lhs, rhs)) = value.split_once("->") else {
            return err(line, "F entry needs `->`");
        };
        let word = symbols(line, lhs, wf.len)?;
        let amount: i64 = rhs
            .trim()
            .parse()
            .or_else(|_| err(line, "F value must be an integer"))?;
        f_entries.push((word, amount));
    }
    let mut g_entries = Vec::new();
    for (line, value) in g_lines {
        let Some((lhs, rhs)) = value.split_once("->") else {
            return err(line, "G entry needs `->`");
        };
        g_entries.push((symbols(line, lhs, wg.len)?, symbols(line, rhs, wg.len)?));
    }
    for (w, a) in f_entries {
        shift.set_f(&w, a);
    }
    for (w, img) in g_entries {
        shift.set_g(&w, &img);
    }
    Ok(shift)
}

pub fn write_shift(shift: &GeneralizedShift) -> String {
    let names = |w: &[SymbolIndex]| {
        w.iter()
            .map(|&s| shift.alphabet()[s as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    writeln!(out, "alphabet: {}", shift.alphabet().join(" ")).unwrap();
    if let ShiftDomain::Configurations { first_state } = shift.domain() {
        writeln!(
            out,
            "states: {}",
            shift.alphabet()[first_state as usize..].join(" ")
        )
        .unwrap();
    }
    let (wf, wg) = (shift.window_f(), shift.window_g());
    writeln!(out, "windowF: {} {}", wf.start, wf.end()).unwrap();
    writeln!(out, "windowG: {} {}", wg.start, wg.end()).unwrap();
    for (w, a) in shift.f_entries() {
        writeln!(out, "F: {} -> {}", names(&w), a).unwrap();
    }
    for (w, img) in shift.g_entries() {
        writeln!(out, "G: {} -> {}", names(&w), names(&img)).unwrap();
    }
    out
}

/// Parses a cell list such as `1 1` or `0 1 . 1 0` into a tape. Without a
/// dot the first symbol sits at position 0; with one, the symbol right of
/// the dot does.
pub fn parse_cells(
    text: &str,
    lookup: impl Fn(&str) -> Option<SymbolIndex>,
) -> Result<Tape, String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let dots = tokens.iter().filter(|t| **t == ".").count();
    if dots > 1 {
        return Err("at most one `.` allowed".into());
    }
    let origin = match tokens.iter().position(|t| *t == ".") {
        Some(p) => -(p as i64),
        None => 0,
    };
    let mut tape = Tape::blank();
    for (i, name) in tokens.iter().filter(|t| **t != ".").enumerate() {
        let sym = lookup(name).ok_or_else(|| format!("unknown symbol {name:?}"))?;
        tape.set(origin + i as i64, sym);
    }
    Ok(tape)
}

pub fn parse_config(
    machine: &TuringMachine,
    text: &str,
    state: Option<&str>,
) -> Result<Configuration, String> {
    let tape = parse_cells(text, |n| machine.symbol_index(n))?;
    let state = match state {
        Some(name) => machine
            .state_index(name)
            .ok_or_else(|| format!("unknown state {name:?}"))?,
        None => machine.initial(),
    };
    Ok(Configuration::new(state, tape))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Direct,
    Reader,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Direct => "direct",
            Mode::Reader => "reader",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Mode::Direct),
            "reader" => Ok(Mode::Reader),
            other => Err(format!("mode must be direct or reader, got {other:?}")),
        }
    }
}

/// Raw experiment file; symbol names are resolved against the machine later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentFile {
    pub machine: String,
    pub input: String,
    pub state: Option<String>,
    pub k: usize,
    pub target: String,
    pub mode: Mode,
    pub budget: u64,
}

pub fn parse_experiment(text: &str) -> Result<ExperimentFile, ParseError> {
    let mut fields: [Option<(usize, &str)>; 7] = Default::default();
    const KEYS: [&str; 7] = ["machine", "input", "state", "k", "target", "mode", "budget"];
    for (line, key, value) in entries(text)? {
        let Some(slot) = KEYS.iter().position(|k| *k == key) else {
            return err(line, format!("unknown key `{key}`"));
        };
        single(&mut fields[slot], line, key, value)?;
    }
    let [machine, input, state, k, target, mode, budget] = fields;
    let (_, machine) = required(machine, "machine")?;
    let (kl, k) = required(k, "k")?;
    let k = k.parse().or_else(|_| err(kl, "k must be a count"))?;
    let (_, target) = required(target, "target")?;
    let mode = match mode {
        Some((line, m)) => m.parse().or_else(|e| err(line, e))?,
        None => Mode::Direct,
    };
    let budget = match budget {
        Some((line, b)) => b.parse().or_else(|_| err(line, "budget must be a count"))?,
        None => 10_000,
    };
    Ok(ExperimentFile {
        machine: machine.to_string(),
        input: input.map(|(_, v)| v.to_string()).unwrap_or_default(),
        state: state.map(|(_, v)| v.to_string()),
        k,
        target: target.to_string(),
        mode,
        budget,
    })
}

/// Listing of a block map with exact coefficients, one piece per line.
pub fn dump_blockmap(map: &PiecewiseBlockMap, alphabet: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "radix: {}", map.radix()).unwrap();
    writeln!(out, "symbols: {}", alphabet.join(" ")).unwrap();
    writeln!(
        out,
        "fixed: {} {}",
        -(map.x_depth() as i64),
        map.y_depth() as i64 - 1
    )
    .unwrap();
    writeln!(out, "pieces: {}", map.pieces().len()).unwrap();
    writeln!(out, "identity-blocks: {}", map.identity_domains().len()).unwrap();
    for (i, p) in map.pieces().iter().enumerate() {
        let word: Vec<&str> = p.word.iter().map(|&s| alphabet[s as usize].as_str()).collect();
        writeln!(
            out,
            "piece {i}: [{}] {} -> {} : x -> {}^{} x + {} ; y -> {}^{} y + {}",
            word.join(" "),
            p.domain.label(),
            p.image.label(),
            map.radix(),
            p.map.x_exponent,
            p.map.cx.to_ratio(),
            map.radix(),
            p.map.y_exponent(),
            p.map.cy.to_ratio(),
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MACHINE: &str = "\
# unary incrementer
alphabet: b 1
states: q0 qh
initial: q0
halt: qh
rule: q0 1 -> q0 1 L
rule: q0 b -> qh 1 N   # write and stop
";

    #[test]
    fn machine_round_trip() {
        let m = parse_machine(MACHINE).unwrap();
        assert_eq!(m.num_states(), 2);
        assert_eq!(parse_machine(&write_machine(&m)).unwrap(), m);
        let ext = m.extend_halting();
        assert_eq!(parse_machine(&write_machine(&ext)).unwrap(), ext);
    }

    #[test]
    fn machine_errors_carry_lines() {
        let e = parse_machine("alphabet: b 1\nstates: a h\ninitial: a\nhalt: h\nrule: a b -> h 1 X\n")
            .unwrap_err();
        assert_eq!(e.line, 5);
        assert!(parse_machine("alphabet: b 1\nstates: a h\ninitial: a\nhalt: h\n").is_err());
        assert!(parse_machine("alphabet b 1\n").is_err());
        assert!(parse_machine("alphabet: b\nstates: a h\ninitial: a\nhalt: h\n").is_err());
    }

    #[test]
    fn cells_with_and_without_dot() {
        let m = parse_machine(MACHINE).unwrap();
        let c = parse_config(&m, "1 1", None).unwrap();
        assert_eq!(c.tape, Tape::from_slice(0, &[1, 1]));
        let c = parse_config(&m, "1 . b 1", Some("qh")).unwrap();
        assert_eq!(c.tape, Tape::from_cells([(-1, 1), (1, 1)]));
        assert_eq!(c.state, 1);
        assert!(parse_config(&m, "1 . 1 . 1", None).is_err());
        assert!(parse_config(&m, "2", None).is_err());
    }

    #[test]
    fn shift_round_trip() {
        let text = "alphabet: 0 1\nwindowF: -1 0\nwindowG: -1 0\n\
                    F: 0 1 -> -1\nF: 1 1 -> -1\nG: 1 1 -> 0 0\nG: 0 0 -> 0 1\nG: 1 0 -> 1 1\n";
        let shift = parse_shift(text).unwrap();
        assert_eq!(shift.f(&[0, 1]), -1);
        assert_eq!(shift.g(&[1, 0]), &[1, 1]);
        assert_eq!(parse_shift(&write_shift(&shift)).unwrap(), shift);
        assert!(parse_shift("alphabet: 0 1\nwindowF: 1 0\nwindowG: 0 0\n").is_err());
        assert!(parse_shift("alphabet: 0 1 q\nstates: 0\nwindowF: 0 0\nwindowG: 0 0\n").is_err());
    }

    #[test]
    fn experiment_defaults() {
        let e = parse_experiment("machine: m.tm\nk: 0\ntarget: 1\n").unwrap();
        assert_eq!(e.mode, Mode::Direct);
        assert_eq!(e.budget, 10_000);
        assert_eq!(e.input, "");
        assert!(parse_experiment("machine: m.tm\nk: x\ntarget: 1\n").is_err());
        assert!(parse_experiment("machine: m.tm\nk: 0\ntarget: 1\nmode: sideways\n").is_err());
    }
}
