//! Word grammar:
//!
//! ```text
//! word     := term+
//! term     := atom ('^' signed-int)?
//! atom     := variable | '[' word (',' word)+ ']' | '(' word ')'
//! variable := 'x' digits | a single letter a-z
//! ```
//!
//! `*` and whitespace separate terms and are otherwise ignored. Bare letters
//! are numbered `x1, x2, ...` in order of first appearance; the two variable
//! styles cannot be mixed in one word.

use super::{Letter, Word};
use crate::error::{Error, Result};

pub const MAX_VARIABLES: usize = 64;
const MAX_EXPONENT: i64 = 1_000_000;

#[derive(PartialEq)]
enum Naming {
    Unset,
    Indexed,
    Letters,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    naming: Naming,
    letter_ids: Vec<char>,
    max_index: usize,
}

pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        naming: Naming::Unset,
        letter_ids: Vec::new(),
        max_index: 0,
    };
    let w = p.word()?;
    p.skip_separators();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    let arity = match p.naming {
        Naming::Letters => p.letter_ids.len(),
        _ => p.max_index,
    };
    Ok(w.with_arity(arity))
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.chars.len() && (self.chars[self.pos] == '*' || self.chars[self.pos].is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_separators();
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word> {
        let mut acc = Word::empty(MAX_VARIABLES);
        let mut terms = 0;
        while let Some(c) = self.peek() {
            if c == ']' || c == ',' || c == ')' {
                break;
            }
            acc = acc.mul(&self.term()?);
            terms += 1;
        }
        if terms == 0 {
            return Err(self.error("expected a term"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.signed_int()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        self.skip_separators();
        let mut negative = false;
        if let Some(&c) = self.chars.get(self.pos) {
            if c == '-' || c == '+' {
                negative = c == '-';
                self.pos += 1;
            }
        }
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer exponent"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let value: i64 = digits
            .parse()
            .ok()
            .filter(|&v: &i64| v <= MAX_EXPONENT)
            .ok_or_else(|| Error::Syntax {
                position: start,
                message: format!("exponent {digits} exceeds {MAX_EXPONENT}"),
            })?;
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let mut parts = vec![self.word()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    parts.push(self.word()?);
                }
                if parts.len() < 2 {
                    return Err(self.error("commutator needs at least two entries"));
                }
                if self.peek() != Some(']') {
                    return Err(self.error("expected ']'"));
                }
                self.pos += 1;
                Ok(Word::left_normed(&parts))
            }
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(c) if c.is_ascii_lowercase() => self.variable(),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn variable(&mut self) -> Result<Word> {
        let c = self.chars[self.pos];
        let start = self.pos;
        self.pos += 1;
        let digits_start = self.pos;
        if c == 'x' {
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        let index = if self.pos > digits_start {
            self.set_naming(Naming::Indexed, start)?;
            let digits: String = self.chars[digits_start..self.pos].iter().collect();
            let n: usize = digits.parse().unwrap_or(usize::MAX);
            if n == 0 || n > MAX_VARIABLES {
                return Err(Error::VariableOverflow(format!(
                    "x{digits} at position {start}: indices run from 1 to {MAX_VARIABLES}"
                )));
            }
            self.max_index = self.max_index.max(n);
            n - 1
        } else {
            self.set_naming(Naming::Letters, start)?;
            match self.letter_ids.iter().position(|&l| l == c) {
                Some(i) => i,
                None => {
                    self.letter_ids.push(c);
                    self.letter_ids.len() - 1
                }
            }
        };
        Ok(Word::new(MAX_VARIABLES, [Letter::new(index, false)]))
    }

    fn set_naming(&mut self, naming: Naming, at: usize) -> Result<()> {
        if self.naming == Naming::Unset {
            self.naming = naming;
            Ok(())
        } else if self.naming == naming {
            Ok(())
        } else {
            Err(Error::Syntax {
                position: at,
                message: "cannot mix indexed variables (x1, x2, ...) with bare letters".into(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(var: usize, inverse: bool) -> Letter {
        Letter::new(var, inverse)
    }

    #[test]
    fn simple_product() {
        let w = parse_word("x*y^-1").unwrap();
        assert_eq!(w.letters(), &[l(0, false), l(1, true)]);
        assert_eq!(w.arity(), 2);
    }

    #[test]
    fn commutator_expands() {
        let w = parse_word("[x,y]").unwrap();
        assert_eq!(w.letters(), &[l(0, true), l(1, true), l(0, false), l(1, false)]);
    }

    #[test]
    fn power_times_inverse_commutator() {
        // x^2 [x,y]^-1 = x x (y^-1 x^-1 y x)
        let w = parse_word("x^2*[x,y]^-1").unwrap();
        assert_eq!(
            w.letters(),
            &[l(0, false), l(0, false), l(1, true), l(0, true), l(1, false), l(0, false)]
        );
    }

    #[test]
    fn left_normed_and_indexed() {
        let a = parse_word("[x1,x2,x2]").unwrap();
        let b = parse_word("[[x1,x2],x2]").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_word("x3").unwrap().arity(), 3);
        assert_eq!(parse_word("(a b)^2 a^-1").unwrap().to_string(), "x1*x2*x1*x2*x1^-1");
    }

    #[test]
    fn errors() {
        let e = parse_word("x,y").unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }));
        assert!(matches!(parse_word("x1*y").unwrap_err(), Error::Syntax { position: 3, .. }));
        assert!(matches!(parse_word("x0").unwrap_err(), Error::VariableOverflow(_)));
        assert!(matches!(parse_word("x65").unwrap_err(), Error::VariableOverflow(_)));
        assert!(matches!(parse_word("[x]").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse_word("x^").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse_word("(x").unwrap_err(), Error::Syntax { .. }));
        assert!(parse_word("").is_err());
    }
}
