#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: (u8, u8)| {
    let (lo, hi) = textkit::clamp_pair(input.0, input.1);
    assert!(lo <= hi);
});
