use super::lexer::{lex, LexError, Spanned, Tok};
use super::{AgentId, Formula, Term};
use crate::SystemVariant;

/// Parsing context: the number of agents `h`, the active system variant,
/// and whether the experimental term operators are enabled.
#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub agents: u32,
    pub variant: SystemVariant,
    pub experimental: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            agents: 2,
            variant: SystemVariant::Lpltl,
            experimental: false,
        }
    }
}

impl ParseOptions {
    pub fn new(agents: u32, variant: SystemVariant) -> ParseOptions {
        ParseOptions {
            agents,
            variant,
            experimental: false,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    SyntaxError {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("{0}")]
    Lex(#[from] LexError),
    #[error("agent index {index} out of range 1..={max} at position {pos}")]
    AgentOutOfRange { pos: usize, index: u32, max: u32 },
    #[error("term operator `{op}` is not available in variant {variant} at position {pos}")]
    VariantError {
        pos: usize,
        op: &'static str,
        variant: SystemVariant,
    },
}

/// Parses a formula and expands all surface sugar to core form.
pub fn parse_formula(input: &str, opts: &ParseOptions) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: input.len(),
        opts: *opts,
    };
    let phi = p.formula(0)?;
    p.expect_end()?;
    Ok(phi)
}

/// Parses a justification term.
pub fn parse_term(input: &str, opts: &ParseOptions) -> Result<Term, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: input.len(),
        opts: *opts,
    };
    let t = p.term(0)?;
    p.expect_end()?;
    Ok(t)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    end: usize,
    opts: ParseOptions,
}

// Binding strength of the binary connectives, loosest first. All of them
// are right-associative; the unary operators bind tighter than any of them.
fn formula_prec(tok: &Tok) -> Option<u8> {
    match tok {
        Tok::Iff => Some(1),
        Tok::Arrow => Some(2),
        Tok::Pipe => Some(3),
        Tok::Amp => Some(4),
        Tok::Until => Some(5),
        _ => None,
    }
}

fn term_prec(tok: &Tok) -> Option<u8> {
    match tok {
        Tok::Plus => Some(1),
        Tok::Dot => Some(2),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|s| s.pos).unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Spanned> {
        let s = self.toks.get(self.at).cloned();
        if s.is_some() {
            self.at += 1;
        }
        s
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        }
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError::SyntaxError {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.found(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.advance();
            Ok(())
        } else {
            Err(self.err(&tok.to_string()))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("end of input"))
        }
    }

    fn formula(&mut self, min_prec: u8) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_unary()?;
        while let Some(prec) = self.peek().and_then(formula_prec) {
            if prec < min_prec {
                break;
            }
            let op = self.advance().unwrap().tok;
            // right-associative: parse the rhs at the same level
            let rhs = self.formula(prec)?;
            lhs = match op {
                Tok::Iff => lhs.iff(rhs),
                Tok::Arrow => lhs.implies(rhs),
                Tok::Pipe => lhs.or(rhs),
                Tok::Amp => lhs.and(rhs),
                Tok::Until => lhs.until(rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::False) => {
                self.advance();
                Ok(Formula::Bottom)
            }
            Some(Tok::True) => {
                self.advance();
                Ok(Formula::top())
            }
            Some(Tok::Tilde) => {
                self.advance();
                Ok(self.formula_unary()?.neg())
            }
            Some(Tok::Next) => {
                self.advance();
                Ok(self.formula_unary()?.next())
            }
            Some(Tok::Always) => {
                self.advance();
                Ok(self.formula_unary()?.always())
            }
            Some(Tok::Eventually) => {
                self.advance();
                Ok(self.formula_unary()?.eventually())
            }
            Some(Tok::Ident(_)) => {
                let Some(Spanned {
                    tok: Tok::Ident(name),
                    ..
                }) = self.advance()
                else {
                    unreachable!()
                };
                Ok(Formula::Prop(name))
            }
            Some(Tok::LBrack) => {
                self.advance();
                let term = self.term(0)?;
                self.expect(Tok::RBrack)?;
                self.expect(Tok::Underscore)?;
                let pos = self.pos();
                let index = match self.peek() {
                    Some(&Tok::Nat(n)) => {
                        self.advance();
                        n
                    }
                    _ => return Err(self.err("agent index")),
                };
                if index < 1 || index > self.opts.agents {
                    return Err(ParseError::AgentOutOfRange {
                        pos,
                        index,
                        max: self.opts.agents,
                    });
                }
                let body = self.formula_unary()?;
                Ok(Formula::just(term, AgentId::new(index), body))
            }
            Some(Tok::LParen) => {
                self.advance();
                let phi = self.formula(1)?;
                self.expect(Tok::RParen)?;
                Ok(phi)
            }
            _ => Err(self.err("a formula")),
        }
    }

    fn term(&mut self, min_prec: u8) -> Result<Term, ParseError> {
        let mut lhs = self.term_unary()?;
        while let Some(prec) = self.peek().and_then(term_prec) {
            if prec < min_prec {
                break;
            }
            let op = self.advance().unwrap().tok;
            let rhs = self.term(prec)?;
            lhs = match op {
                Tok::Plus => lhs.sum(rhs),
                Tok::Dot => lhs.app(rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn gate(&self, pos: usize, op: &'static str, allowed: bool) -> Result<(), ParseError> {
        if allowed {
            Ok(())
        } else {
            Err(ParseError::VariantError {
                pos,
                op,
                variant: self.opts.variant,
            })
        }
    }

    fn term_unary(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Bang) => {
                self.advance();
                Ok(self.term_unary()?.bang())
            }
            Some(Tok::Star) => {
                self.gate(pos, "*", self.opts.variant.allows_star())?;
                self.advance();
                Ok(self.term_unary()?.star())
            }
            Some(Tok::Dn) => {
                self.gate(pos, "dn", self.opts.experimental)?;
                self.advance();
                Ok(self.term_unary()?.down())
            }
            Some(Tok::Up) => {
                self.gate(pos, "up", self.opts.variant.allows_up())?;
                self.advance();
                Ok(self.term_unary()?.up())
            }
            Some(Tok::Rr) => {
                self.gate(pos, "rr", self.opts.experimental)?;
                self.advance();
                Ok(self.term_unary()?.rarr())
            }
            Some(Tok::Ll) => {
                self.gate(pos, "ll", self.opts.experimental)?;
                self.advance();
                Ok(self.term_unary()?.larr())
            }
            Some(Tok::Ident(name)) => {
                if name.starts_with('c') {
                    let name = name.clone();
                    self.advance();
                    Ok(Term::Const(name))
                } else if name.starts_with('x') {
                    let name = name.clone();
                    self.advance();
                    Ok(Term::Var(name))
                } else {
                    Err(self.err("a constant (c...) or variable (x...)"))
                }
            }
            Some(Tok::LParen) => {
                self.advance();
                let t = self.term(1)?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.err("a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> ParseOptions {
        ParseOptions::default()
    }

    fn star_opts() -> ParseOptions {
        ParseOptions::new(2, SystemVariant::LpltlStar)
    }

    fn p() -> Formula {
        Formula::prop("P")
    }

    fn q() -> Formula {
        Formula::prop("Q")
    }

    #[test]
    fn parses_always_to_core() {
        let phi = parse_formula("G P", &opts()).unwrap();
        assert_eq!(phi, p().always());
        // spot-check the exact core shape from the abbreviations
        let expected = Formula::Implies(
            Box::new(Formula::Until(
                Box::new(Formula::Implies(
                    Box::new(Formula::Bottom),
                    Box::new(Formula::Bottom),
                )),
                Box::new(Formula::Implies(Box::new(p()), Box::new(Formula::Bottom))),
            )),
            Box::new(Formula::Bottom),
        );
        assert_eq!(phi, expected);
    }

    #[test]
    fn parses_false_literal() {
        assert_eq!(parse_formula("false", &opts()).unwrap(), Formula::Bottom);
    }

    #[test]
    fn parses_justification() {
        let phi = parse_formula("[x]_1 (P -> Q)", &opts()).unwrap();
        assert_eq!(
            phi,
            Formula::just(Term::var("x"), AgentId::new(1), p().implies(q()))
        );
    }

    #[test]
    fn parses_term_examples() {
        assert_eq!(
            parse_term("!(c1 + x1)", &opts()).unwrap(),
            Term::constant("c1").sum(Term::var("x1")).bang()
        );
        assert_eq!(
            parse_term("*(*(c1))", &star_opts()).unwrap(),
            Term::constant("c1").star().star()
        );
        assert_eq!(
            parse_term("(c1 . x1)", &opts()).unwrap(),
            Term::constant("c1").app(Term::var("x1"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // -> is right-associative
        assert_eq!(
            parse_formula("P -> Q -> P", &opts()).unwrap(),
            p().implies(q().implies(p()))
        );
        // U binds tighter than &
        assert_eq!(
            parse_formula("P U Q & P", &opts()).unwrap(),
            p().until(q()).and(p())
        );
        // unary binds tightest
        assert_eq!(
            parse_formula("~P U Q", &opts()).unwrap(),
            p().neg().until(q())
        );
        // . binds tighter than +
        assert_eq!(
            parse_term("x1 + x2 . x3", &opts()).unwrap(),
            Term::var("x1").sum(Term::var("x2").app(Term::var("x3")))
        );
    }

    #[test]
    fn agent_out_of_range() {
        let err = parse_formula("[x]_3 P", &opts()).unwrap_err();
        assert!(matches!(
            err,
            ParseError::AgentOutOfRange {
                index: 3,
                max: 2,
                ..
            }
        ));
        let err = parse_formula("[x]_0 P", &opts()).unwrap_err();
        assert!(matches!(err, ParseError::AgentOutOfRange { index: 0, .. }));
    }

    #[test]
    fn star_requires_variant() {
        let err = parse_formula("[*c1]_1 P", &opts()).unwrap_err();
        assert!(matches!(err, ParseError::VariantError { op: "*", .. }));
        assert!(parse_formula("[*c1]_1 P", &star_opts()).is_ok());
    }

    #[test]
    fn rejects_bad_term_ident() {
        let err = parse_term("y1", &opts()).unwrap_err();
        assert!(matches!(err, ParseError::SyntaxError { .. }));
    }

    #[test]
    fn reports_position() {
        let err = parse_formula("(P -> ", &opts()).unwrap_err();
        match err {
            ParseError::SyntaxError { pos, .. } => assert_eq!(pos, 6),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
