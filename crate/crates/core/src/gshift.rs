//! Generalized shifts and the conjugation of a Turing machine to one.
//!
//! A generalized shift reads a finite window `D_F` to pick a shift amount
//! and a window `D_G` to pick a local rewrite. One application rewrites the
//! `D_G` cells and then re-indexes the sequence so that the new cell `n`
//! holds the rewritten cell `n + F(s)`.

use std::fmt;

use thiserror::Error;

use crate::tape::{SymbolIndex, Tape};
use crate::tm::{Configuration, Move, StateIndex, TmError, TuringMachine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("machine has no halting row; extend it first")]
    NotExtended,
    #[error("sequence is not the image of a configuration: {0}")]
    NotInImage(String),
    #[error("invalid shift: {0}")]
    Invalid(String),
}

impl From<TmError> for ShiftError {
    fn from(e: TmError) -> Self {
        match e {
            TmError::NotExtended => ShiftError::NotExtended,
            other => ShiftError::Invalid(other.to_string()),
        }
    }
}

/// Contiguous integer window `{start, …, start + len − 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub start: i64,
    pub len: usize,
}

impl Window {
    pub fn new(start: i64, len: usize) -> Self {
        assert!(len >= 1, "windows are non-empty");
        Window { start, len }
    }

    pub fn from_bounds(lo: i64, hi: i64) -> Self {
        Window::new(lo, (hi - lo + 1) as usize)
    }

    pub fn end(&self) -> i64 {
        self.start + self.len as i64 - 1
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        self.start..=self.end()
    }

    pub fn contains(&self, pos: i64) -> bool {
        pos >= self.start && pos <= self.end()
    }
}

/// Which sequences the shift is meant to act on.
///
/// Shifts compiled from machines only ever see sequences with a state
/// symbol at position 0 and tape symbols everywhere else; the block map of
/// such a shift is restricted to that closed, invariant subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftDomain {
    Full,
    /// Symbols with index `>= first_state` are states.
    Configurations { first_state: SymbolIndex },
}

impl ShiftDomain {
    pub fn admits(&self, pos: i64, sym: SymbolIndex) -> bool {
        match *self {
            ShiftDomain::Full => true,
            ShiftDomain::Configurations { first_state } => (pos == 0) == (sym >= first_state),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedShift {
    alphabet: Vec<String>,
    window_f: Window,
    window_g: Window,
    /// Indexed by the window word read as a base-`n` number, most
    /// significant symbol first.
    table_f: Vec<i64>,
    /// `len(window_g)` symbols per entry.
    table_g: Vec<SymbolIndex>,
    domain: ShiftDomain,
}

/// Base-`n` index of a window word.
pub fn word_index(word: &[SymbolIndex], n: usize) -> usize {
    word.iter().fold(0, |acc, &s| acc * n + s as usize)
}

/// Inverse of [`word_index`] for words of length `len`.
pub fn index_word(mut index: usize, n: usize, len: usize) -> Vec<SymbolIndex> {
    let mut word = vec![0; len];
    for slot in word.iter_mut().rev() {
        *slot = (index % n) as SymbolIndex;
        index /= n;
    }
    word
}

impl GeneralizedShift {
    /// A shift with `F ≡ 0` and `G = id`; fill it in with
    /// [`set_f`](Self::set_f) and [`set_g`](Self::set_g).
    pub fn identity(
        alphabet: Vec<String>,
        window_f: Window,
        window_g: Window,
    ) -> Result<Self, ShiftError> {
        if alphabet.len() < 2 {
            return Err(ShiftError::Invalid("alphabet needs two symbols".into()));
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(ShiftError::Invalid(format!("duplicate symbol {a:?}")));
            }
        }
        let n = alphabet.len();
        let f_size = n
            .checked_pow(window_f.len as u32)
            .ok_or_else(|| ShiftError::Invalid("window F too large".into()))?;
        let g_size = n
            .checked_pow(window_g.len as u32)
            .ok_or_else(|| ShiftError::Invalid("window G too large".into()))?;
        let mut table_g = Vec::with_capacity(g_size * window_g.len);
        for i in 0..g_size {
            table_g.extend(index_word(i, n, window_g.len));
        }
        Ok(GeneralizedShift {
            alphabet,
            window_f,
            window_g,
            table_f: vec![0; f_size],
            table_g,
            domain: ShiftDomain::Full,
        })
    }

    pub fn set_f(&mut self, word: &[SymbolIndex], shift: i64) {
        assert_eq!(word.len(), self.window_f.len);
        let i = word_index(word, self.alphabet.len());
        self.table_f[i] = shift;
    }

    pub fn set_g(&mut self, word: &[SymbolIndex], image: &[SymbolIndex]) {
        let l = self.window_g.len;
        assert_eq!(word.len(), l);
        assert_eq!(image.len(), l);
        let i = word_index(word, self.alphabet.len());
        self.table_g[i * l..(i + 1) * l].copy_from_slice(image);
    }

    pub fn with_domain(mut self, domain: ShiftDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolIndex> {
        self.alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| i as SymbolIndex)
    }

    pub fn window_f(&self) -> Window {
        self.window_f
    }

    pub fn window_g(&self) -> Window {
        self.window_g
    }

    pub fn domain(&self) -> ShiftDomain {
        self.domain
    }

    pub fn f(&self, word: &[SymbolIndex]) -> i64 {
        self.table_f[word_index(word, self.alphabet.len())]
    }

    pub fn g(&self, word: &[SymbolIndex]) -> &[SymbolIndex] {
        let l = self.window_g.len;
        let i = word_index(word, self.alphabet.len());
        &self.table_g[i * l..(i + 1) * l]
    }

    /// `max |F|` over the whole table.
    pub fn max_abs_f(&self) -> u64 {
        self.table_f.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// `|D_F ∪ D_G|`.
    pub fn union_window_size(&self) -> usize {
        let (f, g) = (self.window_f, self.window_g);
        let overlap = (f.end().min(g.end()) - f.start.max(g.start) + 1).max(0) as usize;
        f.len + g.len - overlap
    }

    /// Entries of `F` that differ from 0, in index order.
    pub fn f_entries(&self) -> impl Iterator<Item = (Vec<SymbolIndex>, i64)> + '_ {
        let n = self.alphabet.len();
        self.table_f
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(move |(i, v)| (index_word(i, n, self.window_f.len), *v))
    }

    /// Entries of `G` that differ from the identity, in index order.
    pub fn g_entries(&self) -> impl Iterator<Item = (Vec<SymbolIndex>, Vec<SymbolIndex>)> + '_ {
        let n = self.alphabet.len();
        let l = self.window_g.len;
        (0..self.table_g.len() / l).filter_map(move |i| {
            let word = index_word(i, n, l);
            let image = &self.table_g[i * l..(i + 1) * l];
            (image != word.as_slice()).then(|| (word, image.to_vec()))
        })
    }

    /// One application of the shift.
    pub fn apply(&self, s: &BiSequence) -> BiSequence {
        let wf = s.0.window(self.window_f.start, self.window_f.end());
        let wg = s.0.window(self.window_g.start, self.window_g.end());
        let shift = self.f(&wf);
        let image = self.g(&wg);
        let mut out = s.0.clone();
        for (pos, &sym) in self.window_g.positions().zip(image) {
            out.set(pos, sym);
        }
        out.shift(shift);
        BiSequence(out)
    }

    /// Whether the shift is injective (hence bijective) on its domain,
    /// decided by pairwise disjointness of the image blocks of its block map.
    pub fn is_bijective(&self) -> bool {
        crate::cantor::compile_blockmap(self).image_overlap().is_none()
    }
}

/// A finitely-supported bi-infinite sequence over a shift alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BiSequence(pub Tape);

impl BiSequence {
    pub fn new(tape: Tape) -> Self {
        BiSequence(tape)
    }

    pub fn from_cells<I: IntoIterator<Item = (i64, SymbolIndex)>>(cells: I) -> Self {
        BiSequence(Tape::from_cells(cells))
    }

    pub fn get(&self, pos: i64) -> SymbolIndex {
        self.0.get(pos)
    }

    pub fn display<'a>(&'a self, alphabet: &'a [String]) -> SequenceDisplay<'a> {
        SequenceDisplay {
            seq: self,
            alphabet,
        }
    }
}

/// `(… s₋₁ . s₀ s₁ …)` over the non-blank span, always including position 0.
pub struct SequenceDisplay<'a> {
    seq: &'a BiSequence,
    alphabet: &'a [String],
}

impl fmt::Display for SequenceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.seq.0.support().unwrap_or((0, 0));
        let (lo, hi) = (lo.min(0), hi.max(0));
        for p in lo..=hi {
            if p > lo {
                write!(f, " ")?;
            }
            if p == 0 {
                write!(f, ". ")?;
            }
            write!(f, "{}", self.alphabet[self.seq.get(p) as usize])?;
        }
        Ok(())
    }
}

/// The encoding `(q, t) ↦ … t₋₁ . q t₀ t₁ …` of machine configurations into
/// sequences over `Σ ⊔ Q`.
///
/// Tape symbol `i` keeps index `i`; state `j` becomes symbol `|Σ| + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugation {
    machine: TuringMachine,
}

impl Conjugation {
    pub fn machine(&self) -> &TuringMachine {
        &self.machine
    }

    pub fn num_tape_symbols(&self) -> usize {
        self.machine.num_symbols()
    }

    pub fn state_symbol(&self, q: StateIndex) -> SymbolIndex {
        (self.machine.num_symbols() + q as usize) as SymbolIndex
    }

    /// Shift symbol of the halting state.
    pub fn halting_symbol(&self) -> SymbolIndex {
        self.state_symbol(self.machine.halting())
    }

    pub fn encode(&self, c: &Configuration) -> BiSequence {
        let mut tape = c.tape.clone();
        // non-negative cells move one step right to make room for the state
        let cells: Vec<(i64, SymbolIndex)> = tape
            .iter()
            .map(|(p, s)| (if p >= 0 { p + 1 } else { p }, s))
            .collect();
        tape = Tape::from_cells(cells);
        tape.set(0, self.state_symbol(c.state));
        BiSequence(tape)
    }

    pub fn decode(&self, s: &BiSequence) -> Result<Configuration, ShiftError> {
        let sigma = self.machine.num_symbols() as SymbolIndex;
        let head = s.get(0);
        if head < sigma || head as usize >= sigma as usize + self.machine.num_states() {
            return Err(ShiftError::NotInImage(
                "position 0 does not hold a state".into(),
            ));
        }
        let mut cells = Vec::new();
        for (p, sym) in s.0.iter() {
            if p == 0 {
                continue;
            }
            if sym >= sigma {
                return Err(ShiftError::NotInImage(format!(
                    "position {p} holds a non-tape symbol"
                )));
            }
            cells.push((if p > 0 { p - 1 } else { p }, sym));
        }
        Ok(Configuration::new(
            head - sigma,
            Tape::from_cells(cells),
        ))
    }
}

/// Builds the generalized shift conjugated to an extended machine, with
/// `D_F = D_G = {−1, 0, 1}` over the alphabet `Σ ⊔ Q`.
pub fn compile_tm(machine: &TuringMachine) -> Result<(GeneralizedShift, Conjugation), ShiftError> {
    if !machine.is_extended() {
        return Err(ShiftError::NotExtended);
    }
    for q in machine.states() {
        if machine.symbol_index(q).is_some() {
            return Err(ShiftError::Invalid(format!(
                "state {q:?} shares its name with a tape symbol"
            )));
        }
    }
    let mut alphabet = machine.alphabet().to_vec();
    alphabet.extend(machine.states().iter().cloned());
    let window = Window::new(-1, 3);
    let conj = Conjugation {
        machine: machine.clone(),
    };
    let mut shift = GeneralizedShift::identity(alphabet, window, window)?.with_domain(
        ShiftDomain::Configurations {
            first_state: machine.num_symbols() as SymbolIndex,
        },
    );
    let sigma = machine.num_symbols() as SymbolIndex;
    for ((q, scanned), act) in machine.rules() {
        let state = conj.state_symbol(q);
        let next = conj.state_symbol(act.state);
        for left in 0..sigma {
            let word = [left, state, scanned];
            let image = match act.movement {
                Move::Left => [left, act.write, next],
                Move::Right => [next, left, act.write],
                Move::Stay => [left, next, act.write],
            };
            shift.set_f(&word, act.movement.epsilon());
            shift.set_g(&word, &image);
        }
    }
    Ok((shift, conj))
}
