//! The Cops-style TRS text format:
//!
//! ```text
//! (VAR x y)
//! (RULES
//!   g(x) -> f(x,x)   ; comments run to end of line
//!   a -> b
//! )
//! ```
//!
//! Identifiers listed under `VAR` are variables, everything else is a
//! function symbol whose arity is inferred from use.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::term::{Name, Rule, Term, TermError, Trs};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrsParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error(transparent)]
    Arity(#[from] TermError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Arrow,
    Ident(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | ',' | ';')
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        match c {
            ';' => {
                let mut n = 0;
                while i + n < chars.len() && chars[i + n] != '\n' {
                    n += 1;
                }
                advance(n, &mut i);
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '(' | ')' | ',' => {
                let tok = match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Comma,
                };
                advance(1, &mut i);
                out.push(Token { tok, line: l0, col: c0 });
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance(2, &mut i);
                out.push(Token {
                    tok: Tok::Arrow,
                    line: l0,
                    col: c0,
                });
            }
            _ => {
                let mut n = 0;
                while i + n < chars.len()
                    && !is_delim(chars[i + n])
                    && !(chars[i + n] == '-' && chars.get(i + n + 1) == Some(&'>'))
                {
                    n += 1;
                }
                let ident: String = chars[i..i + n].iter().collect();
                advance(n, &mut i);
                out.push(Token {
                    tok: Tok::Ident(ident),
                    line: l0,
                    col: c0,
                });
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    end: (usize, usize),
    vars: BTreeSet<String>,
}

impl Parser {
    fn new(text: &str) -> Self {
        let line = text.lines().count().max(1);
        let col = text.lines().last().map_or(1, |l| l.chars().count() + 1);
        Parser {
            toks: tokenize(text),
            at: 0,
            end: (line, col),
            vars: BTreeSet::new(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TrsParseError> {
        let (line, col) = self.toks.get(self.at).map_or(self.end, |t| (t.line, t.col));
        Err(TrsParseError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), TrsParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, TrsParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn term(&mut self) -> Result<Term, TrsParseError> {
        let start = self.at;
        let name = self.ident()?;
        if self.peek() != Some(&Tok::Open) {
            return Ok(if self.vars.contains(&name) {
                Term::Var(Name::new(&name))
            } else {
                Term::Fun(Name::new(&name), Vec::new())
            });
        }
        if self.vars.contains(&name) {
            self.at = start;
            return self.err(format!("variable {name} applied to arguments"));
        }
        self.at += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::Close) {
            self.at += 1;
            return Ok(Term::Fun(Name::new(&name), args));
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(Tok::Comma) => self.at += 1,
                Some(Tok::Close) => {
                    self.at += 1;
                    break;
                }
                _ => return self.err("expected ',' or ')'"),
            }
        }
        Ok(Term::Fun(Name::new(&name), args))
    }

    fn skip_block(&mut self) -> Result<(), TrsParseError> {
        let mut depth = 1;
        while depth > 0 {
            match self.peek() {
                Some(Tok::Open) => depth += 1,
                Some(Tok::Close) => depth -= 1,
                Some(_) => {}
                None => return self.err("unbalanced parentheses"),
            }
            self.at += 1;
        }
        Ok(())
    }

    fn trs(&mut self) -> Result<Vec<Rule>, TrsParseError> {
        let mut rules = None;
        while self.peek().is_some() {
            self.expect(Tok::Open, "'('")?;
            let head = self.ident()?;
            match head.as_str() {
                "VAR" => {
                    if rules.is_some() {
                        return self.err("VAR block must precede RULES");
                    }
                    while let Some(Tok::Ident(x)) = self.peek() {
                        self.vars.insert(x.clone());
                        self.at += 1;
                    }
                    self.expect(Tok::Close, "')'")?;
                }
                "RULES" => {
                    if rules.is_some() {
                        return self.err("duplicate RULES block");
                    }
                    let mut rs = Vec::new();
                    while self.peek() != Some(&Tok::Close) {
                        if self.peek().is_none() {
                            return self.err("unterminated RULES block");
                        }
                        let lhs = self.term()?;
                        self.expect(Tok::Arrow, "'->'")?;
                        let rhs = self.term()?;
                        rs.push(Rule::new(lhs, rhs));
                    }
                    self.at += 1;
                    rules = Some(rs);
                }
                "COMMENT" => self.skip_block()?,
                other => {
                    self.at -= 1;
                    return self.err(format!("unknown block {other}"));
                }
            }
        }
        match rules {
            Some(rs) => Ok(rs),
            None => self.err("missing RULES block"),
        }
    }
}

pub fn parse_trs(text: &str) -> Result<Trs, TrsParseError> {
    let rules = Parser::new(text).trs()?;
    Ok(Trs::new(rules)?)
}

/// Parses a single term; identifiers in `vars` are variables.
pub fn parse_term(text: &str, vars: &[&str]) -> Result<Term, TrsParseError> {
    let mut p = Parser::new(text);
    p.vars = vars.iter().map(|s| s.to_string()).collect();
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input after term");
    }
    Ok(t)
}

/// Renders `trs` in the format accepted by [`parse_trs`].
pub fn write_trs(trs: &Trs) -> String {
    let mut out = String::new();
    let vars = trs.variables();
    if !vars.is_empty() {
        out.push_str("(VAR");
        for x in &vars {
            let _ = write!(out, " {x}");
        }
        out.push_str(")\n");
    }
    out.push_str("(RULES\n");
    for r in trs.rules() {
        let _ = writeln!(out, "  {r}");
    }
    out.push_str(")\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_variables_and_rules() {
        let trs = parse_trs("(VAR x)(RULES g(x) -> f(x,x) a -> b)").unwrap();
        assert_eq!(trs.len(), 2);
        let sig: Vec<(String, usize)> =
            trs.signature().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        assert_eq!(
            sig,
            vec![("a".into(), 0), ("b".into(), 0), ("f".into(), 2), ("g".into(), 1)]
        );
        assert!(trs.rule(0).unwrap().lhs.args()[0].is_var());
    }

    #[test]
    fn parses_ground_system() {
        let trs = parse_trs("(RULES a -> b a -> d b -> a c -> a c -> b)").unwrap();
        assert_eq!(trs.len(), 5);
        assert!(trs.rules().iter().all(|r| r.lhs.is_ground() && r.rhs.is_ground()));
    }

    #[test]
    fn arity_clash() {
        let err = parse_trs("(VAR x)(RULES f(x) -> f(x,x))").unwrap_err();
        assert!(matches!(err, TrsParseError::Arity(TermError::ArityClash { .. })));
    }

    #[test]
    fn syntax_errors_carry_locations() {
        let err = parse_trs("(VAR x)\n(RULES\n  f(x -> a)").unwrap_err();
        match err {
            TrsParseError::Syntax { line, col, .. } => assert_eq!((line, col), (3, 7)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_trs("(VAR x)").is_err());
        assert!(parse_trs("(VAR x)(RULES x(a) -> a)").is_err());
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "; leading comment\n(VAR x y) ; vars\n(COMMENT some (nested) text)\n(RULES\n f(x,y)->x ; proj\n)\n";
        let trs = parse_trs(text).unwrap();
        assert_eq!(trs.len(), 1);
        assert_eq!(trs.rule(0).unwrap().to_string(), "f(x,y) -> x");
    }

    #[test]
    fn write_then_parse() {
        let trs = parse_trs("(VAR x y)(RULES g(x) -> f(x,y) f(a,x) -> x)").unwrap();
        assert_eq!(parse_trs(&write_trs(&trs)).unwrap(), trs);
    }
}
