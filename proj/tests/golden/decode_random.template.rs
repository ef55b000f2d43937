#[test]
fn decode_random_template() {
    let data: &[u8] = __TESTAUG_DATA__;
    let engine = utils::random_engine(data);
    let _ = engine.decode(data);
}
