//! Exact rationals whose denominators are powers of a fixed radix.
//!
//! The numerator is kept as little-endian base-`b` digits so that scaling by
//! `b^{±1}` is an exponent change and adding a short constant only touches the
//! most significant digits. Orbits of the block maps grow one digit per step,
//! and this keeps a step linear in the number of digits that actually change.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RadixRational {
    radix: u32,
    negative: bool,
    /// Numerator digits, least significant first. No leading (high) zeros;
    /// no trailing (low) zeros while `exp > 0`.
    digits: Vec<u32>,
    /// Value is `±numerator / radix^exp`.
    exp: u32,
}

impl RadixRational {
    pub fn zero(radix: u32) -> Self {
        assert!(radix >= 2, "radix must be at least 2");
        RadixRational {
            radix,
            negative: false,
            digits: Vec::new(),
            exp: 0,
        }
    }

    /// `numerator / radix^exp`, canonicalized.
    pub fn new(radix: u32, numerator: &BigInt, exp: u32) -> Self {
        let mut r = RadixRational::zero(radix);
        r.negative = numerator.sign() == Sign::Minus;
        r.digits = to_digits(numerator.magnitude(), radix);
        r.exp = exp;
        r.normalize();
        r
    }

    pub fn from_i64(radix: u32, numerator: i64, exp: u32) -> Self {
        RadixRational::new(radix, &BigInt::from(numerator), exp)
    }

    /// The value `0.d₁d₂…d_k` in base `radix`.
    pub fn from_fraction_digits(radix: u32, digits: &[u32]) -> Self {
        assert!(digits.iter().all(|&d| d < radix), "digit out of range");
        let mut r = RadixRational::zero(radix);
        r.digits = digits.iter().rev().copied().collect();
        r.exp = digits.len() as u32;
        r.normalize();
        r
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn numerator(&self) -> BigInt {
        let mag = from_digits(&self.digits, self.radix);
        BigInt::from_biguint(
            if self.negative { Sign::Minus } else { Sign::Plus },
            mag,
        )
    }

    pub fn to_ratio(&self) -> BigRational {
        let den = BigInt::from(self.radix).pow(self.exp);
        BigRational::new(self.numerator(), den)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = 0.0;
        for &d in self.digits.iter().rev() {
            v = v * self.radix as f64 + d as f64;
        }
        v /= (self.radix as f64).powi(self.exp as i32);
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// Digit at place `radix^{-j}` for `j ≥ 1` (the `j`-th digit after the point).
    pub fn fraction_digit(&self, j: u32) -> u32 {
        if j == 0 || j > self.exp {
            return 0;
        }
        self.digits
            .get((self.exp - j) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// All digits after the point, most significant first.
    pub fn fraction_digits(&self) -> Vec<u32> {
        (1..=self.exp).map(|j| self.fraction_digit(j)).collect()
    }

    /// True when `0 ≤ self < 1`.
    pub fn is_unit_fraction(&self) -> bool {
        !self.negative && self.digits.len() <= self.exp as usize
    }

    /// `self · radix^by`.
    pub fn scaled(&self, by: i64) -> Self {
        let mut r = self.clone();
        r.scale(by);
        r
    }

    pub fn scale(&mut self, by: i64) {
        if self.is_zero() {
            return;
        }
        if by < 0 {
            self.exp += (-by) as u32;
        } else {
            let by = by as u32;
            if by <= self.exp {
                self.exp -= by;
            } else {
                let pad = (by - self.exp) as usize;
                self.digits.splice(0..0, std::iter::repeat(0).take(pad));
                self.exp = 0;
            }
        }
        self.normalize();
    }

    pub fn add_assign(&mut self, other: &RadixRational) {
        assert_eq!(self.radix, other.radix, "radix mismatch");
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        if other.exp > self.exp {
            let pad = (other.exp - self.exp) as usize;
            self.digits.splice(0..0, std::iter::repeat(0).take(pad));
            self.exp = other.exp;
        }
        let offset = (self.exp - other.exp) as usize;
        if self.negative == other.negative {
            add_mag(&mut self.digits, &other.digits, offset, self.radix);
        } else {
            match cmp_mag(&self.digits, &other.digits, offset) {
                Ordering::Equal => {
                    *self = RadixRational::zero(self.radix);
                    return;
                }
                Ordering::Greater => sub_mag(&mut self.digits, &other.digits, offset, self.radix),
                Ordering::Less => {
                    let mut big = vec![0; offset];
                    big.extend_from_slice(&other.digits);
                    sub_mag(&mut big, &self.digits, 0, self.radix);
                    self.digits = big;
                    self.negative = other.negative;
                }
            }
        }
        self.normalize();
    }

    pub fn sub_assign(&mut self, other: &RadixRational) {
        self.add_assign(&other.neg());
    }

    pub fn add(&self, other: &RadixRational) -> Self {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &RadixRational) -> Self {
        let mut r = self.clone();
        r.sub_assign(other);
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        if !r.is_zero() {
            r.negative = !r.negative;
        }
        r
    }

    fn normalize(&mut self) {
        while self.digits.last() == Some(&0) {
            self.digits.pop();
        }
        if self.digits.is_empty() {
            self.negative = false;
            self.exp = 0;
            return;
        }
        let low = self
            .digits
            .iter()
            .take(self.exp as usize)
            .take_while(|&&d| d == 0)
            .count();
        if low > 0 {
            self.digits.drain(..low);
            self.exp -= low as u32;
        }
    }
}

impl PartialOrd for RadixRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RadixRational {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.radix, other.radix, "radix mismatch");
        match (self.negative, other.negative) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            (neg, _) => {
                let ord = cmp_aligned(self, other);
                if neg {
                    ord.reverse()
                } else {
                    ord
                }
            }
        }
    }
}

fn cmp_aligned(a: &RadixRational, b: &RadixRational) -> Ordering {
    let e = a.exp.max(b.exp);
    let pad_a = (e - a.exp) as usize;
    let pad_b = (e - b.exp) as usize;
    let len_a = a.digits.len() + pad_a;
    let len_b = b.digits.len() + pad_b;
    if a.digits.is_empty() || b.digits.is_empty() {
        return a.digits.len().cmp(&b.digits.len());
    }
    if len_a != len_b {
        return len_a.cmp(&len_b);
    }
    let at = |d: &[u32], pad: usize, i: usize| if i < pad { 0 } else { d[i - pad] };
    for i in (0..len_a).rev() {
        let ord = at(&a.digits, pad_a, i).cmp(&at(&b.digits, pad_b, i));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// `a += b · radix^offset`.
fn add_mag(a: &mut Vec<u32>, b: &[u32], offset: usize, radix: u32) {
    if a.len() < offset + b.len() {
        a.resize(offset + b.len(), 0);
    }
    let mut carry = 0u64;
    let mut i = offset;
    for &d in b {
        let s = a[i] as u64 + d as u64 + carry;
        a[i] = (s % radix as u64) as u32;
        carry = s / radix as u64;
        i += 1;
    }
    while carry > 0 {
        if i == a.len() {
            a.push(0);
        }
        let s = a[i] as u64 + carry;
        a[i] = (s % radix as u64) as u32;
        carry = s / radix as u64;
        i += 1;
    }
}

/// `a −= b · radix^offset`, requires `a ≥ b · radix^offset`.
fn sub_mag(a: &mut [u32], b: &[u32], offset: usize, radix: u32) {
    let mut borrow = 0i64;
    let mut i = offset;
    for &d in b {
        let mut s = a[i] as i64 - d as i64 - borrow;
        borrow = 0;
        if s < 0 {
            s += radix as i64;
            borrow = 1;
        }
        a[i] = s as u32;
        i += 1;
    }
    while borrow > 0 {
        let mut s = a[i] as i64 - borrow;
        borrow = 0;
        if s < 0 {
            s += radix as i64;
            borrow = 1;
        }
        a[i] = s as u32;
        i += 1;
    }
}

/// Compares `a` with `b · radix^offset`; both without leading zeros.
fn cmp_mag(a: &[u32], b: &[u32], offset: usize) -> Ordering {
    let lb = b.len() + offset;
    if a.len() != lb {
        return a.len().cmp(&lb);
    }
    for i in (0..a.len()).rev() {
        let db = if i < offset { 0 } else { b[i - offset] };
        let ord = a[i].cmp(&db);
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn to_digits(n: &BigUint, radix: u32) -> Vec<u32> {
    if radix <= 256 {
        let mut d: Vec<u32> = n.to_radix_le(radix).into_iter().map(u32::from).collect();
        while d.last() == Some(&0) {
            d.pop();
        }
        d
    } else {
        let mut n = n.clone();
        let r = BigUint::from(radix);
        let mut d = Vec::new();
        while !n.is_zero() {
            let (q, rem) = n.div_rem(&r);
            d.push(u32::try_from(rem).unwrap());
            n = q;
        }
        d
    }
}

fn from_digits(digits: &[u32], radix: u32) -> BigUint {
    if radix <= 256 && !digits.is_empty() {
        let bytes: Vec<u8> = digits.iter().map(|&d| d as u8).collect();
        return BigUint::from_radix_le(&bytes, radix).unwrap();
    }
    let mut n = BigUint::zero();
    let r = BigUint::from(radix);
    for &d in digits.iter().rev() {
        n = n * &r + BigUint::from(d);
    }
    n
}

impl fmt::Debug for RadixRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator(), self.radix, self.exp)
    }
}

impl fmt::Display for RadixRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}^{}", self.numerator(), self.radix, self.exp)
        }
    }
}

/// `radix^exp` as an exact rational, for tests and reports.
pub fn power_ratio(radix: u32, exp: i64) -> BigRational {
    let p = BigInt::from(radix).pow(exp.unsigned_abs());
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_form_strips_radix_factors() {
        let r = RadixRational::from_i64(3, 18, 3);
        assert_eq!(r.exponent(), 1);
        assert_eq!(r.numerator(), BigInt::from(2));
        assert_eq!(r, RadixRational::from_fraction_digits(3, &[2]));
        assert_eq!(RadixRational::from_i64(3, 0, 7), RadixRational::zero(3));
    }

    #[test]
    fn fraction_digits_read_back() {
        let r = RadixRational::from_fraction_digits(5, &[2, 0, 4]);
        assert_eq!(r.fraction_digits(), vec![2, 0, 4]);
        assert_eq!(r.fraction_digit(7), 0);
        assert_eq!(r.to_ratio(), ratio(2 * 25 + 4, 125));
        assert!(r.is_unit_fraction());
        assert!(!RadixRational::from_i64(5, 1, 0).is_unit_fraction());
    }

    proptest! {
        #[test]
        fn arithmetic_matches_big_rationals(
            a in -5000i64..5000, ea in 0u32..6,
            b in -5000i64..5000, eb in 0u32..6,
            s in -4i64..4,
            radix in prop::sample::select(vec![3u32, 5, 7, 11]),
        ) {
            let x = RadixRational::from_i64(radix, a, ea);
            let y = RadixRational::from_i64(radix, b, eb);
            let (rx, ry) = (x.to_ratio(), y.to_ratio());
            prop_assert_eq!(x.add(&y).to_ratio(), &rx + &ry);
            prop_assert_eq!(x.sub(&y).to_ratio(), &rx - &ry);
            prop_assert_eq!(x.scaled(s).to_ratio(), &rx * power_ratio(radix, s));
            prop_assert_eq!(x.cmp(&y), rx.cmp(&ry));
            prop_assert_eq!(x.add(&y), RadixRational::new(radix, &x.add(&y).numerator(), x.add(&y).exponent()));
        }
    }
}
