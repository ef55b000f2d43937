use std::cmp::Ordering;
fn has_close_elements(numbers: Vec<f32>, threshold: f32) -> bool {
    for i in 0..numbers.len() {
        for j in (i + 1)..numbers.len() {
            if (numbers[i] - numbers[j]).abs() < threshold {
                return true;
            }
        }
    }
    false
}
// Check the correctness of `has_close_elements`
#[cfg(test)]
mod tests {
    use super::*;
    #[test]
    fn test_has_close_elements() {
        assert_eq!(has_close_elements(
