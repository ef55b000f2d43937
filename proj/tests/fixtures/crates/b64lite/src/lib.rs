//! Minimal base64 codec used as a test fixture.

pub mod alphabet;
pub mod engine;

pub use engine::{Engine, GeneralPurpose, PAD, NO_PAD, STANDARD, URL_SAFE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    InvalidByte(usize, u8),
    InvalidLength,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_lookup() {
        assert_eq!(alphabet::symbol_index(&alphabet::STANDARD_SYMBOLS, b'B'), Some(1));
    }
}
