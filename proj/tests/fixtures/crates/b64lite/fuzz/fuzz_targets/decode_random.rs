#![no_main]
#[macro_use] extern crate libfuzzer_sys;
extern crate b64lite;
use b64lite::*;
mod utils;
fuzz_target!(|data: &[u8]| {
    let engine = utils::random_engine(data);
    let _ = engine.decode(data);
});
