//! Two-bit direction codes and the path-register indexing.
//!
//! A path `(d_1, …, d_n)` maps to the integer whose binary literal reads
//! `code(d_1) ‖ code(d_2) ‖ … ‖ code(d_n)`, i.e. step 1 occupies the most
//! significant bit pair. `(S, E)` is therefore `0b1001 = 9`.

use std::fmt;

use crate::error::{Error, Result};
use crate::maze::Direction;

/// Largest supported path length; 4^11 amplitudes is 64 MiB of `Complex64`.
pub const MAX_PATH_LEN: u32 = 11;

pub fn encode_direction(d: Direction) -> u8 {
    match d {
        Direction::N => 0b00,
        Direction::E => 0b01,
        Direction::S => 0b10,
        Direction::W => 0b11,
    }
}

pub fn decode_direction(code: u8) -> Direction {
    match code & 0b11 {
        0b00 => Direction::N,
        0b01 => Direction::E,
        0b10 => Direction::S,
        _ => Direction::W,
    }
}

/// `4^n`, rejecting lengths above [`MAX_PATH_LEN`].
pub fn path_count(n: u32) -> Result<usize> {
    check_len(n)?;
    Ok(1usize << (2 * n))
}

pub(crate) fn check_len(n: u32) -> Result<()> {
    if n > MAX_PATH_LEN {
        Err(Error::CapExceeded { n, cap: MAX_PATH_LEN })
    } else {
        Ok(())
    }
}

/// A basis index of the `2n`-bit path register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathIndex {
    value: u64,
    len: u32,
}

impl PathIndex {
    pub fn new(value: u64, len: u32) -> Result<PathIndex> {
        check_len(len)?;
        if value >> (2 * len) != 0 {
            return Err(Error::IndexOutOfRange { value, n: len });
        }
        Ok(PathIndex { value, len })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn len(self) -> u32 {
        self.len
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Direction of step `k` (0-based).
    pub fn step(self, k: u32) -> Direction {
        assert!(k < self.len, "step {k} out of range for length {}", self.len);
        let shift = 2 * (self.len - 1 - k);
        decode_direction(((self.value >> shift) & 0b11) as u8)
    }

    /// Register contents as a `2n`-character bit string, step 1 first.
    pub fn bits(self) -> String {
        if self.len == 0 {
            return String::new();
        }
        format!("{:0width$b}", self.value, width = 2 * self.len as usize)
    }

    /// Direction letters, e.g. `"SE"`.
    pub fn letters(self) -> String {
        decode_index(self).into_iter().map(Direction::letter).collect()
    }
}

impl fmt::Display for PathIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.bits())
    }
}

pub fn encode_path(path: &[Direction]) -> Result<PathIndex> {
    let len = u32::try_from(path.len()).map_err(|_| Error::CapExceeded { n: u32::MAX, cap: MAX_PATH_LEN })?;
    check_len(len)?;
    let value = path.iter().fold(0u64, |acc, &d| (acc << 2) | encode_direction(d) as u64);
    Ok(PathIndex { value, len })
}

pub fn decode_index(index: PathIndex) -> Vec<Direction> {
    (0..index.len).map(|k| index.step(k)).collect()
}

/// Decode a raw register value; errors if `value ≥ 4^n`.
pub fn decode_value(value: u64, n: u32) -> Result<Vec<Direction>> {
    Ok(decode_index(PathIndex::new(value, n)?))
}

/// Parse direction letters (`"SE"`) into a path.
pub fn parse_letters(s: &str) -> Result<Vec<Direction>> {
    s.chars()
        .map(|c| Direction::from_letter(c).ok_or_else(|| Error::invalid(format!("{c:?} is not a direction letter"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Direction::*;

    #[test]
    fn direction_codes() {
        assert_eq!(encode_direction(N), 0b00);
        assert_eq!(encode_direction(E), 0b01);
        assert_eq!(encode_direction(S), 0b10);
        assert_eq!(encode_direction(W), 0b11);
        for d in Direction::ALL {
            assert_eq!(decode_direction(encode_direction(d)), d);
        }
    }

    #[test]
    fn worked_example_path() {
        let idx = encode_path(&[S, E]).unwrap();
        assert_eq!(idx.value(), 9);
        assert_eq!(idx.bits(), "1001");
        assert_eq!(idx.letters(), "SE");
        assert_eq!(encode_path(&[N, E, S]).unwrap().bits(), "000110");
    }

    #[test]
    fn empty_path() {
        let idx = encode_path(&[]).unwrap();
        assert_eq!((idx.value(), idx.len()), (0, 0));
        assert_eq!(idx.bits(), "");
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_value(9, 2).unwrap(), vec![S, E]);
        assert_eq!(decode_value(0, 3).unwrap(), vec![N, N, N]);
        assert!(matches!(decode_value(16, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn exhaustive_bijection_up_to_six() {
        for n in 0..=6u32 {
            let count = path_count(n).unwrap();
            let mut seen = vec![false; count];
            for v in 0..count as u64 {
                let path = decode_value(v, n).unwrap();
                assert_eq!(path.len(), n as usize);
                let back = encode_path(&path).unwrap();
                assert_eq!(back.value(), v);
                assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
        }
    }

    #[test]
    fn counts_and_cap() {
        assert_eq!(path_count(0).unwrap(), 1);
        assert_eq!(path_count(2).unwrap(), 16);
        assert_eq!(path_count(6).unwrap(), 4096);
        assert!(matches!(path_count(MAX_PATH_LEN + 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn letters_parse() {
        assert_eq!(parse_letters("se").unwrap(), vec![S, E]);
        assert!(parse_letters("SX").is_err());
    }
}
