#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Word(String),
    Number(u64),
    Symbol(char),
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while let Some(&d) = chars.peek() {
                match d.to_digit(10) {
                    Some(v) => {
                        n = n.saturating_mul(10).saturating_add(u64::from(v));
                        chars.next();
                    }
                    None => break,
                }
            }
            out.push(Token::Number(n));
        } else if c.is_alphabetic() {
            let mut w = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_alphanumeric() {
                    break;
                }
                w.push(d);
                chars.next();
            }
            out.push(Token::Word(w));
        } else {
            out.push(Token::Symbol(c));
            chars.next();
        }
    }
    out
}
