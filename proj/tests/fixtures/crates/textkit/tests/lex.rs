use textkit::{tokenize, Token};

#[test]
fn words_and_numbers() {
    assert_eq!(
        tokenize("ab 12"),
        vec![Token::Word("ab".into()), Token::Number(12)]
    );
}
