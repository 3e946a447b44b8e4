use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Underscore,
    Arrow,
    Iff,
    Amp,
    Pipe,
    Tilde,
    Bang,
    Plus,
    Dot,
    Star,
    False,
    True,
    Next,
    Always,
    Eventually,
    Until,
    Dn,
    Up,
    Rr,
    Ll,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Nat(n) => return write!(f, "number `{n}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Underscore => "_",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Tilde => "~",
            Tok::Bang => "!",
            Tok::Plus => "+",
            Tok::Dot => ".",
            Tok::Star => "*",
            Tok::False => "false",
            Tok::True => "true",
            Tok::Next => "X",
            Tok::Always => "G",
            Tok::Eventually => "F",
            Tok::Until => "U",
            Tok::Dn => "dn",
            Tok::Up => "up",
            Tok::Rr => "rr",
            Tok::Ll => "ll",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    /// Byte offset into the input, for diagnostics.
    pub pos: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unexpected character `{ch}` at position {pos}")]
pub struct LexError {
    pub ch: char,
    pub pos: usize,
}

fn keyword(word: &str) -> Option<Tok> {
    match word {
        "false" => Some(Tok::False),
        "true" => Some(Tok::True),
        "X" => Some(Tok::Next),
        "G" => Some(Tok::Always),
        "F" => Some(Tok::Eventually),
        "U" => Some(Tok::Until),
        "dn" => Some(Tok::Dn),
        "up" => Some(Tok::Up),
        "rr" => Some(Tok::Rr),
        "ll" => Some(Tok::Ll),
        _ => None,
    }
}

/// Tokenizes formula or term text. Unicode aliases for the connectives are
/// accepted on input and normalized here.
pub fn lex(input: &str) -> Result<Vec<Spanned>, LexError> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        let simple = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' | '\u{27e6}' => Some(Tok::LBrack), // ⟦
            ']' | '\u{27e7}' => Some(Tok::RBrack), // ⟧
            '_' => Some(Tok::Underscore),
            '&' | '\u{2227}' => Some(Tok::Amp),   // ∧
            '|' | '\u{2228}' => Some(Tok::Pipe),  // ∨
            '~' | '\u{00ac}' => Some(Tok::Tilde), // ¬
            '!' => Some(Tok::Bang),
            '+' => Some(Tok::Plus),
            '.' | '\u{00b7}' => Some(Tok::Dot),               // ·
            '*' | '\u{22c6}' | '\u{2605}' => Some(Tok::Star), // ⋆
            '\u{2192}' => Some(Tok::Arrow),                   // →
            '\u{2194}' => Some(Tok::Iff),                     // ↔
            '\u{25cb}' | '\u{25ef}' => Some(Tok::Next),       // ○
            '\u{25c7}' | '\u{22c4}' => Some(Tok::Eventually), // ◇
            '\u{25a1}' | '\u{2610}' => Some(Tok::Always),     // □
            '\u{22a5}' => Some(Tok::False),                   // ⊥
            '\u{22a4}' => Some(Tok::True),                    // ⊤
            '\u{1d4b0}' => Some(Tok::Until),                  // 𝒰
            '\u{21d3}' => Some(Tok::Dn),                      // ⇓
            '\u{21d1}' => Some(Tok::Up),                      // ⇑
            '\u{21db}' => Some(Tok::Rr),                      // ⇛
            '\u{21da}' => Some(Tok::Ll),                      // ⇚
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            out.push(Spanned { tok, pos });
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        if ch == '-' {
            chars.next();
            match chars.peek() {
                Some(&(_, '>')) => {
                    chars.next();
                    out.push(Spanned {
                        tok: Tok::Arrow,
                        pos,
                    });
                }
                _ => return Err(LexError { ch: '-', pos }),
            }
            continue;
        }
        if ch == '<' {
            // only <-> is valid
            chars.next();
            let ok = matches!(chars.peek(), Some(&(_, '-')));
            if ok {
                chars.next();
                if matches!(chars.peek(), Some(&(_, '>'))) {
                    chars.next();
                    out.push(Spanned { tok: Tok::Iff, pos });
                    continue;
                }
            }
            return Err(LexError { ch: '<', pos });
        }
        if ch.is_ascii_digit() {
            let mut n: u32 = 0;
            while let Some(&(_, d)) = chars.peek() {
                if let Some(v) = d.to_digit(10) {
                    n = n.saturating_mul(10).saturating_add(v);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Nat(n),
                pos,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            let tok = keyword(&word).unwrap_or(Tok::Ident(word));
            out.push(Spanned { tok, pos });
            continue;
        }
        return Err(LexError { ch, pos });
    }
    Ok(out)
}
