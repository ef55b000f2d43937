use b64lite::*;

#[test]
fn encode_all_bytes_url() {
    let bytes: Vec<u8> = (0..=255).collect();
    assert_eq!(
        "...", // expected result
        &engine::GeneralPurpose::new(&alphabet::URL_SAFE_SYMBOLS, PAD).encode(bytes)
    );
}
