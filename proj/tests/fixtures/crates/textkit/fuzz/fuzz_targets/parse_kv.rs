#![no_main]
use libfuzzer_sys::fuzz_target;
use textkit::kv;

fuzz_target!(|data: &[u8]| {
    let pairs = kv::parse_kv(data);
    for (k, _) in &pairs {
        assert!(!k.is_empty());
    }
});
