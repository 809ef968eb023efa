//! Finitely-supported bi-infinite tapes over a symbol index set.
//!
//! Symbol `0` is always the blank. A [`Tape`] stores the smallest window that
//! holds every non-blank cell, so two tapes compare equal exactly when they
//! agree at every integer position.

use std::fmt;

/// Index of a symbol inside some alphabet. Index `0` is the blank.
pub type SymbolIndex = u16;

pub const BLANK: SymbolIndex = 0;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Tape {
    /// Position of `cells[0]`; zero when `cells` is empty so that equality
    /// is equality of contents.
    origin: i64,
    /// Never starts or ends with a blank.
    cells: Vec<SymbolIndex>,
}

impl Tape {
    pub fn blank() -> Self {
        Self::default()
    }

    /// Builds a tape whose `symbols[0]` sits at position `origin`.
    pub fn from_slice(origin: i64, symbols: &[SymbolIndex]) -> Self {
        let mut tape = Tape {
            origin,
            cells: symbols.to_vec(),
        };
        tape.trim();
        tape
    }

    pub fn from_cells<I: IntoIterator<Item = (i64, SymbolIndex)>>(cells: I) -> Self {
        let mut tape = Tape::blank();
        for (pos, sym) in cells {
            tape.set(pos, sym);
        }
        tape
    }

    pub fn get(&self, pos: i64) -> SymbolIndex {
        if self.cells.is_empty() {
            return BLANK;
        }
        let rel = pos - self.origin;
        if rel < 0 || rel >= self.cells.len() as i64 {
            BLANK
        } else {
            self.cells[rel as usize]
        }
    }

    pub fn set(&mut self, pos: i64, sym: SymbolIndex) {
        if self.cells.is_empty() {
            if sym != BLANK {
                self.origin = pos;
                self.cells.push(sym);
            }
            return;
        }
        let rel = pos - self.origin;
        if rel >= 0 && (rel as usize) < self.cells.len() {
            self.cells[rel as usize] = sym;
            if sym == BLANK {
                self.trim();
            }
        } else if sym != BLANK {
            if rel < 0 {
                let grow = (-rel) as usize;
                let mut cells = vec![BLANK; grow];
                cells.extend_from_slice(&self.cells);
                self.cells = cells;
                self.origin = pos;
            } else {
                self.cells.resize(rel as usize + 1, BLANK);
            }
            self.cells[(pos - self.origin) as usize] = sym;
        }
    }

    /// Re-indexes the tape so that the new cell `n` holds the old cell `n + by`.
    pub fn shift(&mut self, by: i64) {
        if !self.cells.is_empty() {
            self.origin -= by;
        }
    }

    /// Inclusive bounds of the stored window, `None` for the all-blank tape.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.cells.is_empty() {
            None
        } else {
            Some((self.origin, self.origin + self.cells.len() as i64 - 1))
        }
    }

    pub fn is_blank(&self) -> bool {
        self.cells.is_empty()
    }

    /// Non-blank cells in increasing position order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, SymbolIndex)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != BLANK)
            .map(move |(i, s)| (self.origin + i as i64, *s))
    }

    /// Symbols at positions `lo..=hi`, blanks included.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<SymbolIndex> {
        (lo..=hi).map(|p| self.get(p)).collect()
    }

    pub fn map_symbols(&self, f: impl Fn(SymbolIndex) -> SymbolIndex) -> Tape {
        Tape::from_cells(self.iter().map(|(p, s)| (p, f(s))))
    }

    fn trim(&mut self) {
        let lead = self.cells.iter().take_while(|s| **s == BLANK).count();
        if lead == self.cells.len() {
            self.cells.clear();
            self.origin = 0;
            return;
        }
        if lead > 0 {
            self.cells.drain(..lead);
            self.origin += lead as i64;
        }
        while self.cells.last() == Some(&BLANK) {
            self.cells.pop();
        }
    }
}

impl fmt::Debug for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blank_writes_keep_canonical_form() {
        let mut t = Tape::blank();
        t.set(3, 1);
        t.set(-2, 2);
        assert_eq!(t.support(), Some((-2, 3)));
        t.set(-2, BLANK);
        assert_eq!(t.support(), Some((3, 3)));
        t.set(3, BLANK);
        assert!(t.is_blank());
        assert_eq!(t, Tape::blank());
    }

    #[test]
    fn shift_reindexes() {
        let mut t = Tape::from_slice(0, &[1, 2]);
        t.shift(1);
        assert_eq!(t.get(-1), 1);
        assert_eq!(t.get(0), 2);
        t.shift(-2);
        assert_eq!(t.get(1), 1);
    }

    #[test]
    fn equality_ignores_padding() {
        assert_eq!(Tape::from_slice(-1, &[0, 0, 1, 0]), Tape::from_cells([(1, 1)]));
    }
}
