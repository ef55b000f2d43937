fn sign_of(x: i32) -> i32 {
    if x < 0 {
        return -1;
    }
    1
}
// Check the correctness of `sign_of`
#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn test_sign_of() {
        assert_eq!(sign_of(
