//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp { "<->" imp }
//! imp     := or [ "->" imp ]
//! or      := and { "|" and }
//! and     := unary { "&" unary }
//! unary   := ("!" | "D" | "#" | "@") unary | atom
//! atom    := "0" | "1" | ident | "(" formula ")"
//! ident   := lowercase { letter | digit | "_" }
//! ```
//!
//! Unicode aliases: `¬ Δ □ ∇ ∧ ∨ ⊃ → ∼ ↔`.

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at column {col}")]
    UnexpectedChar { col: usize, ch: char },
    #[error("expected {expected} at column {col}, found `{found}`")]
    UnexpectedToken {
        col: usize,
        found: String,
        expected: &'static str,
    },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("`{name}` at column {col} is reserved and cannot be used as a variable")]
    Reserved { col: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    Not,
    Delta,
    Square,
    Nabla,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Zero => "0".into(),
            Tok::One => "1".into(),
            Tok::Ident(s) => s.clone(),
            Tok::Not => "!".into(),
            Tok::Delta => "D".into(),
            Tok::Square => "#".into(),
            Tok::Nabla => "@".into(),
            Tok::And => "&".into(),
            Tok::Or => "|".into(),
            Tok::Implies => "->".into(),
            Tok::Iff => "<->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

/// True if `name` is a valid variable name.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let starts = |s: &str| s.chars().enumerate().all(|(k, x)| chars.get(i + k) == Some(&x));
        let (tok, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0' => (Tok::Zero, 1),
            '1' => (Tok::One, 1),
            '!' | '¬' => (Tok::Not, 1),
            'D' | 'Δ' => (Tok::Delta, 1),
            '#' | '□' => (Tok::Square, 1),
            '@' | '∇' => (Tok::Nabla, 1),
            '&' | '∧' => (Tok::And, 1),
            '|' | '∨' => (Tok::Or, 1),
            '⊃' | '→' => (Tok::Implies, 1),
            '∼' | '↔' => (Tok::Iff, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '-' if starts("->") => (Tok::Implies, 2),
            '<' if starts("<->") => (Tok::Iff, 3),
            c if c.is_ascii_alphabetic() => {
                let end = (i..chars.len())
                    .find(|&j| !(chars[j].is_ascii_alphanumeric() || chars[j] == '_'))
                    .unwrap_or(chars.len());
                let word: String = chars[i..end].iter().collect();
                if !c.is_ascii_lowercase() {
                    return Err(ParseError::Reserved { col, name: word });
                }
                (Tok::Ident(word), end - i)
            }
            ch => return Err(ParseError::UnexpectedChar { col, ch }),
        };
        out.push((col, tok));
        i += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((col, tok)) => ParseError::UnexpectedToken {
                col: *col,
                found: tok.text(),
                expected,
            },
            None => ParseError::UnexpectedEnd { expected },
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(Formula::implies(lhs, self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Not) => Formula::not,
            Some(Tok::Delta) => Formula::delta,
            Some(Tok::Square) => Formula::square,
            Some(Tok::Nabla) => Formula::nabla,
            _ => return self.atom(),
        };
        self.pos += 1;
        Ok(wrap(self.unary()?))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &str = "`0`, `1`, a variable or `(`";
        let f = match self.peek() {
            Some(Tok::Zero) => Formula::Zero,
            Some(Tok::One) => Formula::One,
            Some(Tok::Ident(name)) => Formula::Var(name.clone()),
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("`)`"));
                }
                return Ok(inner);
            }
            _ => return Err(self.error(EXPECTED)),
        };
        self.pos += 1;
        Ok(f)
    }
}

/// Parses a formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = parser.iff()?;
    if parser.pos < parser.toks.len() {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("!p&q|r").unwrap(),
            Formula::or(Formula::and(Formula::not(v("p")), v("q")), v("r"))
        );
        assert_eq!(
            parse("D(D(0))").unwrap(),
            Formula::delta(Formula::delta(Formula::Zero))
        );
        assert_eq!(
            parse("p->q->r").unwrap(),
            Formula::implies(v("p"), Formula::implies(v("q"), v("r")))
        );
        assert_eq!(
            parse("p<->q<->r").unwrap(),
            Formula::iff(Formula::iff(v("p"), v("q")), v("r"))
        );
        assert_eq!(
            parse("p | q -> r <-> s").unwrap(),
            Formula::iff(Formula::implies(Formula::or(v("p"), v("q")), v("r")), v("s"))
        );
        assert_eq!(
            parse("Dp & #q & @r1_x").unwrap(),
            Formula::and(
                Formula::and(Formula::delta(v("p")), Formula::square(v("q"))),
                Formula::nabla(v("r1_x"))
            )
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(
            parse("¬Δp ∧ □q ∨ ∇r ⊃ p ∼ q").unwrap(),
            parse("!Dp & #q | @r -> p <-> q").unwrap()
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse("p & ").unwrap_err(),
            ParseError::UnexpectedEnd {
                expected: "`0`, `1`, a variable or `(`"
            }
        );
        assert!(matches!(
            parse("p $ q"),
            Err(ParseError::UnexpectedChar { col: 3, ch: '$' })
        ));
        assert!(matches!(
            parse("P & q"),
            Err(ParseError::Reserved { col: 1, .. })
        ));
        assert!(matches!(
            parse("(p & q"),
            Err(ParseError::UnexpectedEnd { expected: "`)`" })
        ));
        assert!(matches!(
            parse("p q"),
            Err(ParseError::UnexpectedToken { col: 3, .. })
        ));
        assert!(parse("").is_err());
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("p"));
        assert!(is_identifier("pi_1"));
        assert!(!is_identifier("D"));
        assert!(!is_identifier("1p"));
        assert!(!is_identifier(""));
    }
}
