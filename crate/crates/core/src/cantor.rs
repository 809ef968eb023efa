//! Sequences as points of the generalized square Cantor set, and the
//! piecewise-affine block map realizing a generalized shift on it.
//!
//! With `n` symbols the radix is `b = 2n − 1` and symbol `σ` is written as
//! the even digit `2σ`. Position `−i` of a sequence is the `i`-th digit of
//! `x` and position `i ≥ 0` is digit `i + 1` of `y`. For `n = 2` this is the
//! ternary square Cantor set.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::Rng;
use thiserror::Error;

use crate::gshift::{index_word, BiSequence, Conjugation, GeneralizedShift};
use crate::radix::RadixRational;
use crate::tape::{SymbolIndex, Tape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CantorError {
    #[error("point is not on the Cantor set: {0}")]
    NotCantor(String),
}

pub fn radix_for(num_symbols: usize) -> u32 {
    (2 * num_symbols - 1) as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorPoint {
    pub x: RadixRational,
    pub y: RadixRational,
}

impl CantorPoint {
    pub fn radix(&self) -> u32 {
        self.x.radix()
    }

    /// Every base-`b` digit of both coordinates is even and both lie in `[0, 1)`.
    pub fn is_cantor(&self) -> bool {
        [&self.x, &self.y].iter().all(|c| {
            c.is_unit_fraction() && c.fraction_digits().iter().all(|d| d % 2 == 0)
        })
    }

    /// `j`-th digit of `x`, `j ≥ 1`.
    pub fn x_digit(&self, j: u32) -> u32 {
        self.x.fraction_digit(j)
    }

    pub fn y_digit(&self, j: u32) -> u32 {
        self.y.fraction_digit(j)
    }
}

/// `x = Σ 2s₋ᵢ b⁻ⁱ`, `y = Σ 2sᵢ₋₁ b⁻ⁱ` with `b = 2n − 1`.
pub fn encode_point(s: &BiSequence, num_symbols: usize) -> CantorPoint {
    let radix = radix_for(num_symbols);
    let (lo, hi) = s.0.support().unwrap_or((0, -1));
    let x_len = (-lo).max(0) as i64;
    let y_len = (hi + 1).max(0);
    let x: Vec<u32> = (1..=x_len).map(|i| 2 * s.get(-i) as u32).collect();
    let y: Vec<u32> = (1..=y_len).map(|i| 2 * s.get(i - 1) as u32).collect();
    CantorPoint {
        x: RadixRational::from_fraction_digits(radix, &x),
        y: RadixRational::from_fraction_digits(radix, &y),
    }
}

/// Inverse of [`encode_point`] on points with finite even-digit expansions.
pub fn decode_point(p: &CantorPoint, num_symbols: usize) -> Result<BiSequence, CantorError> {
    if p.radix() != radix_for(num_symbols) || p.y.radix() != p.radix() {
        return Err(CantorError::NotCantor(format!(
            "radix {} does not match {} symbols",
            p.radix(),
            num_symbols
        )));
    }
    let mut tape = Tape::blank();
    for (coord, name) in [(&p.x, "x"), (&p.y, "y")] {
        if !coord.is_unit_fraction() {
            return Err(CantorError::NotCantor(format!("{name} outside [0, 1)")));
        }
        for (i, d) in coord.fraction_digits().into_iter().enumerate() {
            if d % 2 == 1 {
                return Err(CantorError::NotCantor(format!(
                    "digit {} of {name} is odd",
                    i + 1
                )));
            }
            let pos = if name == "x" { -(i as i64) - 1 } else { i as i64 };
            tape.set(pos, (d / 2) as SymbolIndex);
        }
    }
    Ok(BiSequence(tape))
}

/// `[a/bⁱ, (a+1)/bⁱ] × [c/bʲ, (c+1)/bʲ]`, stored by the base-`b` digits of
/// `a` and `c` (most significant first), so that `i` and `j` are the prefix
/// lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorBlock {
    pub radix: u32,
    pub x_prefix: Vec<u32>,
    pub y_prefix: Vec<u32>,
}

impl CantorBlock {
    pub fn x_depth(&self) -> usize {
        self.x_prefix.len()
    }

    pub fn y_depth(&self) -> usize {
        self.y_prefix.len()
    }

    /// Whether the block meets the Cantor set.
    pub fn is_cantor_block(&self) -> bool {
        self.x_prefix
            .iter()
            .chain(&self.y_prefix)
            .all(|d| d % 2 == 0)
    }

    /// `(lower, upper)` corners of the x interval.
    pub fn x_interval(&self) -> (RadixRational, RadixRational) {
        interval(self.radix, &self.x_prefix)
    }

    pub fn y_interval(&self) -> (RadixRational, RadixRational) {
        interval(self.radix, &self.y_prefix)
    }

    pub fn contains(&self, p: &CantorPoint) -> bool {
        self.x_prefix
            .iter()
            .enumerate()
            .all(|(i, &d)| p.x_digit(i as u32 + 1) == d)
            && self
                .y_prefix
                .iter()
                .enumerate()
                .all(|(i, &d)| p.y_digit(i as u32 + 1) == d)
    }

    /// Whether the two blocks share a Cantor point. Distinct even-digit
    /// prefixes of the same length are separated by a gap, so this is prefix
    /// compatibility in both coordinates.
    pub fn intersects(&self, other: &CantorBlock) -> bool {
        prefix_compatible(&self.x_prefix, &other.x_prefix)
            && prefix_compatible(&self.y_prefix, &other.y_prefix)
    }

    /// Share of the Cantor set inside the block, `n^{−(i+j)}`.
    pub fn cantor_measure(&self) -> BigRational {
        let n = (self.radix as i64 + 1) / 2;
        let depth = (self.x_depth() + self.y_depth()) as u32;
        BigRational::new(1.into(), num_bigint::BigInt::from(n).pow(depth))
    }

    pub fn label(&self) -> String {
        let digits = |v: &[u32]| {
            v.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        format!("x[{}]y[{}]", digits(&self.x_prefix), digits(&self.y_prefix))
    }
}

fn prefix_compatible(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x == y)
}

fn interval(radix: u32, prefix: &[u32]) -> (RadixRational, RadixRational) {
    let lo = RadixRational::from_fraction_digits(radix, prefix);
    let width = RadixRational::from_i64(radix, 1, prefix.len() as u32);
    let hi = lo.add(&width);
    (lo, hi)
}

/// `(x, y) ↦ (b^e·x + c_x, b^{−e}·y + c_y)`; determinant `b^e · b^{−e} = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub x_exponent: i64,
    pub cx: RadixRational,
    pub cy: RadixRational,
}

impl AffinePiece {
    pub fn y_exponent(&self) -> i64 {
        -self.x_exponent
    }

    /// Jacobian determinant as an exact rational.
    pub fn determinant(&self, radix: u32) -> BigRational {
        crate::radix::power_ratio(radix, self.x_exponent)
            * crate::radix::power_ratio(radix, self.y_exponent())
    }

    pub fn apply(&self, p: &CantorPoint) -> CantorPoint {
        let mut q = p.clone();
        self.apply_in_place(&mut q);
        q
    }

    pub fn apply_in_place(&self, p: &mut CantorPoint) {
        p.x.scale(self.x_exponent);
        p.x.add_assign(&self.cx);
        p.y.scale(self.y_exponent());
        p.y.add_assign(&self.cy);
    }

    pub fn is_identity(&self) -> bool {
        self.x_exponent == 0 && self.cx.is_zero() && self.cy.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    /// Window word over the map's fixed positions, lowest position first.
    pub word: Vec<SymbolIndex>,
    pub domain: CantorBlock,
    pub image: CantorBlock,
    pub map: AffinePiece,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Piece(usize),
    Identity,
    Outside,
}

/// Where a point falls in a block map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Piece(usize),
    /// In a domain block on which the map is the identity.
    Identity(usize),
    /// Not in any domain block; the map is the identity there too.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseBlockMap {
    radix: u32,
    num_symbols: usize,
    /// Fixed positions are `−x_depth ..= y_depth − 1`.
    x_depth: usize,
    y_depth: usize,
    pieces: Vec<Piece>,
    /// Domain blocks merged into the identity default.
    identity_domains: Vec<CantorBlock>,
    /// Indexed by window word.
    slots: Vec<Slot>,
    identity_slot: Vec<usize>,
    /// Admissible symbols per fixed position, lowest position first.
    admissible: Vec<usize>,
}

impl PiecewiseBlockMap {
    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn x_depth(&self) -> usize {
        self.x_depth
    }

    pub fn y_depth(&self) -> usize {
        self.y_depth
    }

    /// Non-identity pieces.
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn identity_domains(&self) -> &[CantorBlock] {
        &self.identity_domains
    }

    /// Piece count before identity pieces are merged into the default.
    pub fn unmerged_piece_count(&self) -> usize {
        self.pieces.len() + self.identity_domains.len()
    }

    pub fn locate(&self, p: &CantorPoint) -> Location {
        let n = self.num_symbols;
        let mut index = 0usize;
        let digits = (1..=self.x_depth as u32)
            .rev()
            .map(|j| p.x_digit(j))
            .chain((1..=self.y_depth as u32).map(|j| p.y_digit(j)));
        for d in digits {
            if d % 2 == 1 {
                return Location::Outside;
            }
            index = index * n + (d / 2) as usize;
        }
        match self.slots[index] {
            Slot::Piece(i) => Location::Piece(i),
            Slot::Identity => Location::Identity(self.identity_slot[index]),
            Slot::Outside => Location::Outside,
        }
    }

    /// One application of the map; exact.
    pub fn apply(&self, p: &CantorPoint) -> CantorPoint {
        let mut q = p.clone();
        self.apply_in_place(&mut q);
        q
    }

    pub fn apply_in_place(&self, p: &mut CantorPoint) -> Location {
        let loc = self.locate(p);
        if let Location::Piece(i) = loc {
            self.pieces[i].map.apply_in_place(p);
        }
        loc
    }

    /// A pair of blocks (pieces first, then identity domains, indexed in that
    /// order) whose images share a Cantor point, if any.
    pub fn image_overlap(&self) -> Option<(usize, usize)> {
        let images: Vec<&CantorBlock> = self
            .pieces
            .iter()
            .map(|p| &p.image)
            .chain(&self.identity_domains)
            .collect();
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i].intersects(images[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Domain and image of entry `i` in the combined indexing of
    /// [`image_overlap`](Self::image_overlap).
    pub fn block_pair(&self, i: usize) -> (&CantorBlock, &CantorBlock) {
        if i < self.pieces.len() {
            (&self.pieces[i].domain, &self.pieces[i].image)
        } else {
            let b = &self.identity_domains[i - self.pieces.len()];
            (b, b)
        }
    }

    /// Cantor measure of the shift's domain inside the unit square.
    pub fn domain_measure(&self) -> BigRational {
        let n = self.num_symbols as i64;
        self.admissible
            .iter()
            .fold(BigRational::one(), |acc, &k| acc * BigRational::new(k.into(), n.into()))
    }
}

/// Lowers a generalized shift to its piecewise-affine block map.
///
/// Every piece fixes the same positions `−I ..= J − 1`: the hull of
/// `D_F ∪ D_G` together with whatever `|F|` cells the shift pushes across the
/// origin, so the map is affine on every block.
pub fn compile_blockmap(shift: &GeneralizedShift) -> PiecewiseBlockMap {
    let n = shift.num_symbols();
    let radix = radix_for(n);
    let (wf, wg) = (shift.window_f(), shift.window_g());
    let lo = wf.start.min(wg.start);
    let hi = wf.end().max(wg.end());
    let mut x_depth = (-lo).max(0) as usize;
    let mut y_depth = (hi + 1).max(0) as usize;
    for (_, m) in shift.f_entries() {
        if m > 0 {
            y_depth = y_depth.max(m as usize);
        } else {
            x_depth = x_depth.max((-m) as usize);
        }
    }
    let width = x_depth + y_depth;
    let first = -(x_depth as i64);
    let domain = shift.domain();
    let admissible: Vec<usize> = (0..width)
        .map(|k| {
            (0..n as SymbolIndex)
                .filter(|&s| domain.admits(first + k as i64, s))
                .count()
        })
        .collect();

    let total = n.pow(width as u32);
    let mut slots = vec![Slot::Outside; total];
    let mut identity_slot = vec![usize::MAX; total];
    let mut pieces = Vec::new();
    let mut identity_domains = Vec::new();
    for index in 0..total {
        let word = index_word(index, n, width);
        let at = |w: &[SymbolIndex], pos: i64| w[(pos - first) as usize];
        if !word
            .iter()
            .enumerate()
            .all(|(k, &s)| domain.admits(first + k as i64, s))
        {
            continue;
        }
        let f_word: Vec<_> = wf.positions().map(|p| at(&word, p)).collect();
        let g_word: Vec<_> = wg.positions().map(|p| at(&word, p)).collect();
        let m = shift.f(&f_word);
        let mut rewritten = word.clone();
        for (p, &s) in wg.positions().zip(shift.g(&g_word)) {
            rewritten[(p - first) as usize] = s;
        }
        let domain_block = block_of(radix, &word, x_depth, y_depth);
        if m == 0 && rewritten == word {
            slots[index] = Slot::Identity;
            identity_slot[index] = identity_domains.len();
            identity_domains.push(domain_block);
            continue;
        }
        let map = affine_for(radix, &word, &rewritten, first, x_depth, y_depth, m);
        // the image cylinder fixes positions p − m for every fixed p
        let image = block_of(
            radix,
            &rewritten,
            (x_depth as i64 + m) as usize,
            (y_depth as i64 - m) as usize,
        );
        slots[index] = Slot::Piece(pieces.len());
        pieces.push(Piece {
            word,
            domain: domain_block,
            image,
            map,
        });
    }
    PiecewiseBlockMap {
        radix,
        num_symbols: n,
        x_depth,
        y_depth,
        pieces,
        identity_domains,
        slots,
        identity_slot,
        admissible,
    }
}

/// Block of the cylinder given by `word`, whose first `x_depth` symbols sit at
/// positions `−x_depth..−1` and the remaining `y_depth` at `0..`.
fn block_of(radix: u32, word: &[SymbolIndex], x_depth: usize, y_depth: usize) -> CantorBlock {
    debug_assert_eq!(word.len(), x_depth + y_depth);
    CantorBlock {
        radix,
        x_prefix: word[..x_depth].iter().rev().map(|&s| 2 * s as u32).collect(),
        y_prefix: word[x_depth..].iter().map(|&s| 2 * s as u32).collect(),
    }
}

/// Translation by the rewrite of the fixed digits, followed by the `m`-fold
/// digit shift between the two coordinates.
fn affine_for(
    radix: u32,
    word: &[SymbolIndex],
    rewritten: &[SymbolIndex],
    first: i64,
    x_depth: usize,
    y_depth: usize,
    m: i64,
) -> AffinePiece {
    let d = |w: &[SymbolIndex], pos: i64| 2 * w[(pos - first) as usize] as i64;
    let place = |value: i64, j: i64| {
        // value · b^{−j}
        RadixRational::from_i64(radix, value, 0).scaled(-j)
    };
    let mut dx = RadixRational::zero(radix);
    for i in 1..=x_depth as i64 {
        dx.add_assign(&place(d(rewritten, -i) - d(word, -i), i));
    }
    let mut dy = RadixRational::zero(radix);
    for i in 1..=y_depth as i64 {
        dy.add_assign(&place(d(rewritten, i - 1) - d(word, i - 1), i));
    }
    let mut kx = RadixRational::zero(radix);
    let mut ky = RadixRational::zero(radix);
    if m > 0 {
        // cells 0..m−1 move into x, y loses its leading m digits
        for i in 1..=m {
            kx.add_assign(&place(d(rewritten, m - i), i));
            ky.sub_assign(&place(d(rewritten, i - 1), i - m));
        }
    } else if m < 0 {
        let mu = -m;
        for i in 1..=mu {
            kx.sub_assign(&place(d(rewritten, -i), i - mu));
            ky.add_assign(&place(d(rewritten, i - 1 - mu), i));
        }
    }
    AffinePiece {
        x_exponent: -m,
        cx: dx.scaled(-m).add(&kx),
        cy: dy.scaled(m).add(&ky),
    }
}

/// Outcome of [`verify_blockmap`]; failures are recorded, never raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub domains_disjoint: bool,
    /// Domains jointly carry the full Cantor measure of the shift's domain.
    pub domains_cover: bool,
    pub unit_determinants: bool,
    /// Piece count after merging identity pieces.
    pub piece_count: usize,
    pub unmerged_piece_count: usize,
    /// `n^{|D_F ∪ D_G| + max|F|}`, saturating.
    pub piece_bound: u128,
    pub within_bound: bool,
    /// Affine image of each domain rectangle is exactly its image block.
    pub images_match_maps: bool,
    pub image_overlap: Option<(CantorBlock, CantorBlock)>,
    pub bijective: bool,
    pub conjugacy_samples: usize,
    pub conjugacy_failures: usize,
    /// Every sampled image point keeps even digits.
    pub cantor_invariant: bool,
}

impl VerificationReport {
    /// Every structural check passed. Image overlap is not a failure by
    /// itself; it only says the shift is not injective.
    pub fn passed(&self) -> bool {
        self.domains_disjoint
            && self.domains_cover
            && self.unit_determinants
            && self.within_bound
            && self.images_match_maps
            && self.conjugacy_failures == 0
            && self.cantor_invariant
    }
}

/// Checks the block map against the properties it is supposed to have and
/// spot-checks conjugacy with the shift on random points of every block.
pub fn verify_blockmap<R: Rng>(
    map: &PiecewiseBlockMap,
    shift: &GeneralizedShift,
    samples_per_block: usize,
    rng: &mut R,
) -> VerificationReport {
    let n = shift.num_symbols();
    let radix = map.radix;
    let domains: Vec<&CantorBlock> = map
        .pieces
        .iter()
        .map(|p| &p.domain)
        .chain(&map.identity_domains)
        .collect();
    let mut domains_disjoint = true;
    let mut seen = HashSet::new();
    for (i, a) in domains.iter().enumerate() {
        if !seen.insert((&a.x_prefix, &a.y_prefix)) {
            domains_disjoint = false;
        }
        if domains[i + 1..].iter().any(|b| a.intersects(b)) {
            domains_disjoint = false;
        }
    }
    let covered = domains
        .iter()
        .fold(BigRational::zero(), |acc, b| acc + b.cantor_measure());
    let domains_cover = domains_disjoint
        && covered == map.domain_measure()
        && domains.iter().all(|b| b.is_cantor_block());

    let unit_determinants = map
        .pieces
        .iter()
        .all(|p| p.map.determinant(radix) == BigRational::one());

    let exponent = shift.union_window_size() as u32 + shift.max_abs_f() as u32;
    let piece_bound = (n as u128).checked_pow(exponent).unwrap_or(u128::MAX);
    let within_bound = (map.pieces.len() as u128) <= piece_bound
        && (map.unmerged_piece_count() as u128) <= piece_bound;

    let images_match_maps = map.pieces.iter().all(|p| {
        let (x0, x1) = p.domain.x_interval();
        let (y0, y1) = p.domain.y_interval();
        let lo = p.map.apply(&CantorPoint { x: x0, y: y0 });
        let hi = p.map.apply(&CantorPoint { x: x1, y: y1 });
        let (ix0, ix1) = p.image.x_interval();
        let (iy0, iy1) = p.image.y_interval();
        lo.x == ix0 && hi.x == ix1 && lo.y == iy0 && hi.y == iy1
    });

    let image_overlap = map.image_overlap().map(|(i, j)| {
        (map.block_pair(i).1.clone(), map.block_pair(j).1.clone())
    });

    let mut conjugacy_samples = 0;
    let mut conjugacy_failures = 0;
    let mut cantor_invariant = true;
    let first = -(map.x_depth as i64);
    let domain = shift.domain();
    let words = map
        .pieces
        .iter()
        .map(|p| p.word.clone())
        .chain(map.identity_domains.iter().map(|b| block_word(b)));
    for word in words {
        for _ in 0..samples_per_block {
            let mut tape = Tape::blank();
            let reach = 4 + shift.max_abs_f() as i64;
            for pos in first - reach..(map.y_depth as i64) + reach {
                let sym = if pos >= first && pos < map.y_depth as i64 {
                    word[(pos - first) as usize]
                } else {
                    loop {
                        let s = rng.gen_range(0..n) as SymbolIndex;
                        if domain.admits(pos, s) {
                            break s;
                        }
                    }
                };
                tape.set(pos, sym);
            }
            let seq = BiSequence(tape);
            let p = encode_point(&seq, n);
            let q = map.apply(&p);
            conjugacy_samples += 1;
            if !q.is_cantor() {
                cantor_invariant = false;
                conjugacy_failures += 1;
                continue;
            }
            match decode_point(&q, n) {
                Ok(s) if s == shift.apply(&seq) => {}
                _ => conjugacy_failures += 1,
            }
        }
    }

    VerificationReport {
        domains_disjoint,
        domains_cover,
        unit_determinants,
        piece_count: map.pieces.len(),
        unmerged_piece_count: map.unmerged_piece_count(),
        piece_bound,
        within_bound,
        images_match_maps,
        bijective: image_overlap.is_none(),
        image_overlap,
        conjugacy_samples,
        conjugacy_failures,
        cantor_invariant,
    }
}

/// Window word of a uniform-depth domain block, lowest position first.
fn block_word(b: &CantorBlock) -> Vec<SymbolIndex> {
    b.x_prefix
        .iter()
        .rev()
        .chain(&b.y_prefix)
        .map(|&d| (d / 2) as SymbolIndex)
        .collect()
}

/// Blocks holding every sequence with the halting state at position 0:
/// `x` digit 1 and `y` digit 2 free over the alphabet, `y` digit 1 fixed.
pub fn halt_region(conj: &Conjugation) -> Vec<CantorBlock> {
    let n = conj.num_tape_symbols() + conj.machine().num_states();
    let radix = radix_for(n);
    let halt = 2 * conj.halting_symbol() as u32;
    let mut blocks = Vec::with_capacity(n * n);
    for left in 0..n as u32 {
        for right in 0..n as u32 {
            blocks.push(CantorBlock {
                radix,
                x_prefix: vec![2 * left],
                y_prefix: vec![halt, 2 * right],
            });
        }
    }
    blocks
}

/// Index of the halt block containing `p`, if any.
pub fn in_region(blocks: &[CantorBlock], p: &CantorPoint) -> Option<usize> {
    blocks.iter().position(|b| b.contains(p))
}
