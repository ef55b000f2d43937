use b64lite::{Engine, STANDARD};

#[test]
fn decode_padding() {
    assert_eq!(STANDARD.decode("YWI=").unwrap(), b"ab".to_vec());
}

#[test]
fn external_only() {
    assert_eq!(std::str::from_utf8(b"ab").unwrap().len(), 2);
}
