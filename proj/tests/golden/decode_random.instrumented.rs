#![no_main]
#[macro_use] extern crate libfuzzer_sys;
extern crate b64lite;
use b64lite::*;
mod utils;
fuzz_target!(|data: &[u8]| {
    __testaug_report(data);
    let engine = utils::random_engine(data);
    let _ = engine.decode(data);
});

#[doc(hidden)]
#[allow(dead_code)]
fn __testaug_report(input: &[u8]) {
    use std::io::Write;
    static SINK: std::sync::OnceLock<Option<(std::sync::Mutex<std::fs::File>, usize)>> =
        std::sync::OnceLock::new();
    let sink = SINK.get_or_init(|| {
        let path = std::env::var_os("TESTAUG_SINK")?;
        let limit = std::env::var("TESTAUG_SINK_BELOW")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(usize::MAX);
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .ok()?;
        Some((std::sync::Mutex::new(file), limit))
    });
    if let Some((file, limit)) = sink {
        if input.len() >= *limit {
            return;
        }
        const HEX: &[u8; 16] = b"0123456789abcdef";
        let mut line = Vec::with_capacity(input.len() * 3 + 1);
        for (i, b) in input.iter().enumerate() {
            if i > 0 {
                line.push(b' ');
            }
            line.push(HEX[(b >> 4) as usize]);
            line.push(HEX[(b & 0xf) as usize]);
        }
        line.push(b'\n');
        let mut f = file.lock().unwrap_or_else(|e| e.into_inner());
        let _ = f.write_all(&line);
    }
}
