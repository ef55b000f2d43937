/// Parses `key=value` pairs separated by `;`. Pairs without `=` are skipped.
pub fn parse_kv(input: &[u8]) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut out = Vec::new();
    for part in input.split(|&b| b == b';') {
        if let Some(eq) = part.iter().position(|&b| b == b'=') {
            let key = part[..eq].to_vec();
            if key.is_empty() {
                continue;
            }
            out.push((key, part[eq + 1..].to_vec()));
        }
    }
    out
}
