#[test]
fn decode_random_fuzzaug_1() {
    let data: &[u8] = &[3,44,12,3,21,2,255,12,4,34,12,4,12,3];
    let engine = utils::random_engine(data);
    let _ = engine.decode(data);
}
