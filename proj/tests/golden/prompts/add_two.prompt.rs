use std::ops::Add;
fn add_two(a: i32, b: i32) -> i32 {
    a.add(b)
}
// Check the correctness of `add_two`
#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn test_add_two() {
        assert_eq!(add_two(
