use crate::alphabet::{symbol_index, STANDARD_SYMBOLS, URL_SAFE_SYMBOLS};
use crate::DecodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub pad: bool,
}

pub const PAD: Config = Config { pad: true };
pub const NO_PAD: Config = Config { pad: false };

#[derive(Debug, Clone, Copy)]
pub struct GeneralPurpose {
    symbols: &'static [u8; 64],
    config: Config,
}

pub const STANDARD: GeneralPurpose = GeneralPurpose::new(&STANDARD_SYMBOLS, PAD);
pub const URL_SAFE: GeneralPurpose = GeneralPurpose::new(&URL_SAFE_SYMBOLS, PAD);

impl GeneralPurpose {
    pub const fn new(symbols: &'static [u8; 64], config: Config) -> Self {
        GeneralPurpose { symbols, config }
    }
}

pub trait Engine {
    fn symbols(&self) -> &[u8; 64];
    fn config(&self) -> Config;

    fn encode<T: AsRef<[u8]>>(&self, input: T) -> String {
        let input = input.as_ref();
        let symbols = self.symbols();
        let mut out = String::with_capacity((input.len() + 2) / 3 * 4);
        for chunk in input.chunks(3) {
            let b = [
                chunk[0],
                *chunk.get(1).unwrap_or(&0),
                *chunk.get(2).unwrap_or(&0),
            ];
            let n = (u32::from(b[0]) << 16) | (u32::from(b[1]) << 8) | u32::from(b[2]);
            let emit = chunk.len() + 1;
            for k in 0..4 {
                if k < emit {
                    let idx = ((n >> (18 - 6 * k)) & 0x3f) as usize;
                    out.push(symbols[idx] as char);
                } else if self.config().pad {
                    out.push('=');
                }
            }
        }
        out
    }

    fn decode<T: AsRef<[u8]>>(&self, input: T) -> Result<Vec<u8>, DecodeError> {
        let input = input.as_ref();
        let trimmed: &[u8] = if self.config().pad {
            if input.len() % 4 != 0 {
                return Err(DecodeError::InvalidLength);
            }
            let pads = input.iter().rev().take(2).take_while(|&&b| b == b'=').count();
            &input[..input.len() - pads]
        } else {
            input
        };
        if trimmed.len() % 4 == 1 {
            return Err(DecodeError::InvalidLength);
        }
        let mut out = Vec::with_capacity(trimmed.len() * 3 / 4);
        for (c, chunk) in trimmed.chunks(4).enumerate() {
            let mut n: u32 = 0;
            for (k, &byte) in chunk.iter().enumerate() {
                let v = symbol_index(self.symbols(), byte)
                    .ok_or(DecodeError::InvalidByte(c * 4 + k, byte))?;
                n |= u32::from(v) << (18 - 6 * k);
            }
            let bytes = [(n >> 16) as u8, (n >> 8) as u8, n as u8];
            let keep = chunk.len() - 1;
            if (n << (8 * keep as u32)) & 0x00ff_ffff != 0 && keep < 3 {
                return Err(DecodeError::InvalidByte(c * 4 + keep, chunk[keep]));
            }
            out.extend_from_slice(&bytes[..keep]);
        }
        Ok(out)
    }
}

impl Engine for GeneralPurpose {
    fn symbols(&self) -> &[u8; 64] {
        self.symbols
    }

    fn config(&self) -> Config {
        self.config
    }
}
