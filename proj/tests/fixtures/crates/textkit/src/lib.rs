//! Small text utilities used as a test fixture.

pub mod kv;
pub mod lex;

pub use kv::parse_kv;
pub use lex::{tokenize, Token};

pub fn clamp_pair(a: u8, b: u8) -> (u8, u8) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
