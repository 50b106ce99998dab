//! Surface syntax for terms.
//!
//! ```text
//! expr    := postfix (binop postfix)*        all binary operators left-associative,
//!                                            equal precedence
//! postfix := atom '*'*
//! atom    := '0' | '1' | 'X' digits | '(' expr ')'
//! binop   := '+' (⊕) | '.' (⊙) | '-' (⊖) | '|' (∨) | '&' (∧)
//! ```
//!
//! The Unicode symbols `⊕ ⊙ ⊖ ∨ ∧` are accepted as aliases. Whitespace is
//! ignored. Derived operators are expanded into `{0, *, ⊕}` immediately.

use super::Term;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnbalancedParenthesis,
    UnknownSymbol(char),
    MalformedVariable,
    UnexpectedToken,
}

/// Parse failure; `position` is a character offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
    message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, position: usize) -> Self {
        let message = match kind {
            ParseErrorKind::EmptyInput => "empty input".to_string(),
            ParseErrorKind::UnbalancedParenthesis => "unbalanced parenthesis".to_string(),
            ParseErrorKind::UnknownSymbol(c) => format!("unknown symbol {c:?}"),
            ParseErrorKind::MalformedVariable => {
                "malformed variable (expected X followed by an index >= 1)".to_string()
            }
            ParseErrorKind::UnexpectedToken => "unexpected token".to_string(),
        };
        ParseError {
            kind,
            position,
            message,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BinOp {
    Oplus,
    Times,
    Minus,
    Join,
    Meet,
}

impl BinOp {
    fn apply(self, a: Term, b: Term) -> Term {
        match self {
            BinOp::Oplus => a.oplus(b),
            BinOp::Times => a.times(b),
            BinOp::Minus => a.minus(b),
            BinOp::Join => a.join(b),
            BinOp::Meet => a.meet(b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Var(u32),
    Star,
    Op(BinOp),
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0' => Tok::Zero,
            '1' => Tok::One,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' | '⊕' => Tok::Op(BinOp::Oplus),
            '.' | '⊙' => Tok::Op(BinOp::Times),
            '-' | '⊖' => Tok::Op(BinOp::Minus),
            '|' | '∨' => Tok::Op(BinOp::Join),
            '&' | '∧' => Tok::Op(BinOp::Meet),
            'X' => {
                let start = i;
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i + 1..j].iter().collect();
                let index = digits
                    .parse::<u32>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| ParseError::new(ParseErrorKind::MalformedVariable, start))?;
                toks.push((Tok::Var(index), start));
                i = j;
                continue;
            }
            other => return Err(ParseError::new(ParseErrorKind::UnknownSymbol(other), i)),
        };
        toks.push((tok, i));
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.postfix()?;
        while let Some(Tok::Op(op)) = self.peek() {
            self.pos += 1;
            let rhs = self.postfix()?;
            acc = op.apply(acc, rhs);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            t = t.neg();
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let at = self.here();
        let tok = self
            .peek()
            .ok_or_else(|| ParseError::new(ParseErrorKind::UnexpectedToken, at))?;
        self.pos += 1;
        match tok {
            Tok::Zero => Ok(Term::Zero),
            Tok::One => Ok(Term::one()),
            Tok::Var(i) => Ok(Term::Var(i)),
            Tok::LParen => {
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => Err(ParseError::new(ParseErrorKind::UnbalancedParenthesis, at)),
                    Some(_) => Err(ParseError::new(
                        ParseErrorKind::UnexpectedToken,
                        self.here(),
                    )),
                }
            }
            Tok::RParen if self.depth == 0 => {
                Err(ParseError::new(ParseErrorKind::UnbalancedParenthesis, at))
            }
            Tok::RParen | Tok::Star | Tok::Op(_) => {
                Err(ParseError::new(ParseErrorKind::UnexpectedToken, at))
            }
        }
    }
}

/// Parses a term, desugaring derived operators.
pub fn parse(input: &str) -> Result<Term, ParseError> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, 0));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.chars().count(),
        depth: 0,
    };
    let t = p.expr()?;
    match p.peek() {
        None => Ok(t),
        Some(Tok::RParen) => Err(ParseError::new(
            ParseErrorKind::UnbalancedParenthesis,
            p.here(),
        )),
        Some(_) => Err(ParseError::new(ParseErrorKind::UnexpectedToken, p.here())),
    }
}
