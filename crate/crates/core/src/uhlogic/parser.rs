//! Sentence DSL:
//!
//! ```text
//! [label] ! u v w : f(w)=u & g(w)=v -> sigma(u,v)=w   # comment
//! ```
//!
//! The premise may be empty or `true`; the conclusion may be `false`.
//! `def h(u,v)` abbreviates `h(u,v)=h(u,v)`. A bare identifier that is not in
//! the prefix denotes a nullary symbol.

use super::syntax::{Atom, Labelled, Sentence, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bang,
    Colon,
    Amp,
    Arrow,
    Eq,
    LParen,
    RParen,
    Comma,
    Label(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    line_start: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '′'
}

fn tokenize(text: &str, line: usize) -> Result<Vec<(Tok, usize, usize)>> {
    let mut lx = Lexer { chars: text.char_indices().peekable(), line, line_start: 0 };
    let mut out = Vec::new();
    while let Some(&(i, c)) = lx.chars.peek() {
        let col = i - lx.line_start + 1;
        let here = lx.line;
        let err = |m: &str| Error::Parse { line: here, column: col, message: m.to_string() };
        match c {
            '\n' => {
                lx.chars.next();
                lx.line += 1;
                lx.line_start = i + 1;
            }
            c if c.is_whitespace() => {
                lx.chars.next();
            }
            '#' => {
                while let Some(&(_, c)) = lx.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    lx.chars.next();
                }
            }
            '!' | ':' | '&' | '=' | '(' | ')' | ',' => {
                lx.chars.next();
                let t = match c {
                    '!' => Tok::Bang,
                    ':' => Tok::Colon,
                    '&' => Tok::Amp,
                    '=' => Tok::Eq,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                };
                out.push((t, here, col));
            }
            '-' => {
                lx.chars.next();
                match lx.chars.next() {
                    Some((_, '>')) => out.push((Tok::Arrow, here, col)),
                    _ => return Err(err("expected `->`")),
                }
            }
            '[' => {
                lx.chars.next();
                let mut s = String::new();
                loop {
                    match lx.chars.next() {
                        Some((_, ']')) => break,
                        Some((_, '\n')) | None => return Err(err("unterminated label")),
                        Some((_, c)) => s.push(c),
                    }
                }
                out.push((Tok::Label(s.trim().to_string()), here, col));
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&(_, c)) = lx.chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    lx.chars.next();
                }
                out.push((Tok::Ident(s), here, col));
            }
            _ => return Err(err(&format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    vars: Vec<String>,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, column) = self.toks.get(self.pos).map(|t| (t.1, t.2)).unwrap_or(self.end);
        Err(Error::Parse { line, column, message: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Option<String> {
        if let Some(Tok::Ident(s)) = self.peek() {
            let s = s.clone();
            self.pos += 1;
            Some(s)
        } else {
            None
        }
    }

    fn term(&mut self) -> Result<Term> {
        let Some(name) = self.ident() else {
            return self.err("expected a term");
        };
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let mut args = Vec::new();
            if self.peek() == Some(&Tok::RParen) {
                self.pos += 1;
                return Ok(Term::App(name, args));
            }
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected `,` or `)`"),
                }
            }
            Ok(Term::App(name, args))
        } else if self.vars.contains(&name) {
            Ok(Term::Var(name))
        } else {
            Ok(Term::App(name, Vec::new()))
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "false" => {
                self.pos += 1;
                return Ok(Atom::False);
            }
            Some(Tok::Ident(s)) if s == "def" && !self.vars.iter().any(|v| v == "def") => {
                self.pos += 1;
                let t = self.term()?;
                if t.is_var() {
                    return self.err("`def` needs an application");
                }
                return Ok(Atom::def(t));
            }
            _ => {}
        }
        let start = self.pos;
        let t = self.term()?;
        if self.peek() == Some(&Tok::Eq) {
            self.pos += 1;
            let u = self.term()?;
            return Ok(Atom::Eq(t, u));
        }
        match t {
            Term::App(r, args) => Ok(Atom::Rel(r, args)),
            Term::Var(_) => {
                self.pos = start;
                self.err("a variable alone is not an atom")
            }
        }
    }

    fn sentence(&mut self) -> Result<Sentence> {
        self.expect(Tok::Bang, "`!`")?;
        while let Some(v) = self.ident() {
            if self.vars.contains(&v) {
                self.pos -= 1;
                return self.err(format!("variable `{v}` bound twice"));
            }
            self.vars.push(v);
        }
        self.expect(Tok::Colon, "`:` after the variables")?;
        let mut premise = Vec::new();
        match self.peek() {
            Some(Tok::Arrow) => {}
            Some(Tok::Ident(s)) if s == "true" && self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::Arrow) => {
                self.pos += 1;
            }
            _ => loop {
                premise.push(self.atom()?);
                if self.peek() == Some(&Tok::Amp) {
                    self.pos += 1;
                } else {
                    break;
                }
            },
        }
        self.expect(Tok::Arrow, "`->`")?;
        let conclusion = self.atom()?;
        Ok(Sentence { vars: std::mem::take(&mut self.vars), premise, conclusion })
    }
}

fn parse_tokens(toks: Vec<(Tok, usize, usize)>, end: (usize, usize)) -> Result<Labelled> {
    let mut p = Parser { toks, pos: 0, vars: Vec::new(), end };
    let label = match p.peek() {
        Some(Tok::Label(l)) => {
            let l = l.clone();
            p.pos += 1;
            Some(l)
        }
        _ => None,
    };
    let sentence = p.sentence()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected input after the conclusion");
    }
    Ok(Labelled { label, sentence })
}

/// Parses one sentence (an optional label is accepted and dropped).
pub fn parse_sentence(text: &str) -> Result<Sentence> {
    let toks = tokenize(text, 1)?;
    let end = (text.lines().count().max(1), text.lines().last().map_or(1, |l| l.len() + 1));
    Ok(parse_tokens(toks, end)?.sentence)
}

/// Parses a sentence file: one sentence per non-blank line.
pub fn parse_sentences(text: &str) -> Result<Vec<Labelled>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, i + 1)?;
        if toks.is_empty() {
            continue;
        }
        out.push(parse_tokens(toks, (i + 1, line.len() + 1))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uhlogic::syntax::print_sentence;

    #[test]
    fn parses_q_basis_sentence() {
        let s = parse_sentence("! u v : f(u)=v -> g(v)=u").unwrap();
        assert_eq!(s.vars, vec!["u", "v"]);
        assert_eq!(
            s.premise,
            vec![Atom::Eq(Term::app("f", vec![Term::var("u")]), Term::var("v"))]
        );
        assert_eq!(s.conclusion, Atom::Eq(Term::app("g", vec![Term::var("v")]), Term::var("u")));
    }

    #[test]
    fn false_premise_and_def_sugar() {
        let s = parse_sentence("! u : false -> u=u").unwrap();
        assert_eq!(s.premise, vec![Atom::False]);
        let d = parse_sentence("! u v : def h(u,v) -> true_(u)").unwrap();
        let h = Term::app("h", vec![Term::var("u"), Term::var("v")]);
        assert_eq!(d.premise, vec![Atom::Eq(h.clone(), h)]);
    }

    #[test]
    fn empty_and_true_premises() {
        let a = parse_sentence("! v : -> f(v)=f(f(v))").unwrap();
        let b = parse_sentence("! v : true -> f(v)=f(f(v))").unwrap();
        assert_eq!(a, b);
        assert!(a.premise.is_empty());
    }

    #[test]
    fn round_trip() {
        for text in [
            "! u v w : f(w)=u & g(w)=v -> sigma(u,v)=w",
            "! u v : sigma(u,v)=sigma(u,v) & sigma(v,u)=sigma(v,u) -> u=v",
            "! : true -> c()=c()",
            "! x : r(x,x) -> false",
        ] {
            let s = parse_sentence(text).unwrap();
            assert_eq!(print_sentence(&s), text);
            assert_eq!(parse_sentence(&print_sentence(&s)).unwrap(), s);
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_sentence("! u : f(u = u") {
            Err(Error::Parse { line: 1, column, .. }) => assert_eq!(column, 11),
            other => panic!("{other:?}"),
        }
        assert!(parse_sentence("! u u : u=u").is_err());
        assert!(parse_sentence("! u : u -> u=u").is_err());
    }

    #[test]
    fn labelled_file() {
        let text = "# basis\n[1a] ! u v : f(u)=v -> def g(v)\n\n[1b] ! u v w : f(u)=v & g(v)=w -> w=u # tail\n";
        let ss = parse_sentences(text).unwrap();
        assert_eq!(ss.len(), 2);
        assert_eq!(ss[0].label.as_deref(), Some("1a"));
        assert_eq!(ss[1].sentence.vars.len(), 3);
    }
}
