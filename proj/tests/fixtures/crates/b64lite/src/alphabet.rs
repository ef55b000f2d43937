pub const STANDARD_SYMBOLS: [u8; 64] =
    *b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
pub const URL_SAFE_SYMBOLS: [u8; 64] =
    *b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

pub fn symbol_index(symbols: &[u8; 64], byte: u8) -> Option<u8> {
    symbols.iter().position(|&s| s == byte).map(|i| i as u8)
}
