//! S-expressions with source positions and a canonical single-line printer.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Symbol(String),
    Nat(u64),
    Str(String),
}

/// Equality ignores positions.
#[derive(Clone, Debug)]
pub enum SExpr {
    Atom(Atom, Pos),
    Seq(Vec<SExpr>, Pos),
}

impl PartialEq for SExpr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SExpr::Atom(a, _), SExpr::Atom(b, _)) => a == b,
            (SExpr::Seq(a, _), SExpr::Seq(b, _)) => a == b,
            _ => false,
        }
    }
}

impl Eq for SExpr {}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl SyntaxError {
    pub fn at(pos: Pos, msg: impl Into<String>) -> SyntaxError {
        SyntaxError {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }
}

impl SExpr {
    pub fn sym(s: &str) -> SExpr {
        SExpr::Atom(Atom::Symbol(s.to_string()), Pos::default())
    }

    pub fn nat(n: u64) -> SExpr {
        SExpr::Atom(Atom::Nat(n), Pos::default())
    }

    pub fn str(s: &str) -> SExpr {
        SExpr::Atom(Atom::Str(s.to_string()), Pos::default())
    }

    pub fn seq(items: Vec<SExpr>) -> SExpr {
        SExpr::Seq(items, Pos::default())
    }

    /// `(head items...)`
    pub fn tagged(head: &str, mut items: Vec<SExpr>) -> SExpr {
        items.insert(0, SExpr::sym(head));
        SExpr::seq(items)
    }

    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::Seq(_, p) => *p,
        }
    }

    pub fn as_seq(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::Seq(items, _) => Some(items),
            SExpr::Atom(..) => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Atom::Symbol(s), _) => Some(s),
            _ => None,
        }
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            SExpr::Atom(Atom::Nat(n), _) => Some(*n),
            _ => None,
        }
    }

    /// A string or a symbol.
    pub fn as_name(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Atom::Str(s), _) | SExpr::Atom(Atom::Symbol(s), _) => Some(s),
            _ => None,
        }
    }

    /// The head symbol and remaining items of a tagged list.
    pub fn as_tagged(&self) -> Option<(&str, &[SExpr])> {
        let items = self.as_seq()?;
        let (head, rest) = items.split_first()?;
        Some((head.as_symbol()?, rest))
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(Atom::Symbol(s), _) => f.write_str(s),
            SExpr::Atom(Atom::Nat(n), _) => write!(f, "{n}"),
            SExpr::Atom(Atom::Str(s), _) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            SExpr::Seq(items, _) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_-+*/<>=!?%.:'&|^~$@#".contains(c)
}

/// Whether `s` prints as a symbol and reads back as the same symbol.
pub fn is_symbol(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_symbol_char) && !s.chars().all(|c| c.is_ascii_digit())
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Lexer<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expr(&mut self) -> Result<SExpr, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(SyntaxError::at(start, "unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(SyntaxError::at(start, "unclosed parenthesis")),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::Seq(items, start));
                        }
                        Some(_) => items.push(self.expr()?),
                    }
                }
            }
            Some(')') => Err(SyntaxError::at(start, "unexpected ')'")),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    let at = self.pos;
                    match self.bump() {
                        None => return Err(SyntaxError::at(start, "unterminated string")),
                        Some('"') => return Ok(SExpr::Atom(Atom::Str(s), start)),
                        Some('\\') => {
                            match self.bump() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                Some('t') => s.push('\t'),
                                _ => return Err(SyntaxError::at(at, "invalid escape")),
                            }
                        }
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(c) if is_symbol_char(c) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if !is_symbol_char(c) {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                if s.chars().all(|c| c.is_ascii_digit()) {
                    s.parse::<u64>()
                        .map(|n| SExpr::Atom(Atom::Nat(n), start))
                        .map_err(|_| SyntaxError::at(start, "number too large"))
                } else {
                    Ok(SExpr::Atom(Atom::Symbol(s), start))
                }
            }
            Some(c) => Err(SyntaxError::at(start, format!("unexpected character {c:?}"))),
        }
    }
}

/// Parses exactly one expression, allowing surrounding whitespace and
/// `;` comments.
pub fn parse(input: &str) -> Result<SExpr, SyntaxError> {
    let mut lx = Lexer {
        chars: input.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let e = lx.expr()?;
    lx.skip_ws();
    if lx.peek().is_some() {
        return Err(SyntaxError::at(lx.pos, "trailing input"));
    }
    Ok(e)
}
