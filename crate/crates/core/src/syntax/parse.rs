use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown token {found:?} at position {pos}")]
    UnknownToken { pos: usize, found: char },
    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    Unexpected {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("variable index out of range at position {pos}")]
    BadIndex { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Imp,
    Iff,
    Dia,
    Box,
    LParen,
    RParen,
    Dot,
    Exists,
    Forall,
    True,
    False,
    Ident(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Not => "'~'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Imp => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::Dia => "'<>'".into(),
            Tok::Box => "'[]'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Exists => "'E'".into(),
            Tok::Forall => "'A'".into(),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let rest_starts = |i: usize, s: &str| {
        let mut j = i;
        for c in s.chars() {
            match chars.get(j) {
                Some(&(_, d)) if d == c => j += 1,
                _ => return false,
            }
        }
        true
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match c {
            '~' | '!' => (Tok::Not, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '.' => (Tok::Dot, 1),
            '-' if rest_starts(i, "->") => (Tok::Imp, 2),
            '<' if rest_starts(i, "<->") => (Tok::Iff, 3),
            '<' if rest_starts(i, "<>") => (Tok::Dia, 2),
            '[' if rest_starts(i, "[]") => (Tok::Box, 2),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let tok = match word.as_str() {
                    "E" => Tok::Exists,
                    "A" => Tok::Forall,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                (tok, j - i)
            }
            other => return Err(ParseError::UnknownToken { pos, found: other }),
        };
        out.push((pos, tok));
        i += len;
    }
    Ok(out)
}

/// `p<digits>` names a variable by index.
fn explicit_index(word: &str) -> Option<&str> {
    let digits = word.strip_prefix('p')?;
    (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())).then_some(digits)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    names: HashMap<String, Var>,
}

/// Parses the ASCII formula grammar.
///
/// Precedence, tightest first: prefix operators (`~`, `<>`, `[]`), `&`, `|`,
/// `->` (right associative), `<->`. A quantifier prefix `E v.` / `A v.` takes
/// the longest possible body. Bare identifiers other than `p<digits>` are
/// assigned, in order of first appearance, the least indices not written
/// explicitly anywhere in the text.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut explicit = BTreeSet::new();
    for (pos, t) in &toks {
        if let Tok::Ident(w) = t {
            if let Some(d) = explicit_index(w) {
                let idx: u32 = d.parse().map_err(|_| ParseError::BadIndex { pos: *pos })?;
                explicit.insert(idx);
            }
        }
    }
    let mut names = HashMap::new();
    let mut next = 0u32;
    for (_, t) in &toks {
        if let Tok::Ident(w) = t {
            if explicit_index(w).is_none() && !names.contains_key(w) {
                while explicit.contains(&next) {
                    next += 1;
                }
                names.insert(w.clone(), Var(next));
                next += 1;
            }
        }
    }
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.len(),
        names,
    };
    let f = parser.iff()?;
    if let Some((pos, t)) = parser.toks.get(parser.at) {
        return Err(ParseError::Unexpected {
            pos: *pos,
            expected: "end of input",
            found: t.describe(),
        });
    }
    Ok(f)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected {
            pos: self.pos(),
            expected,
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), Tok::describe),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn variable(&mut self) -> Result<Var, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(w)) => {
                self.at += 1;
                match explicit_index(&w) {
                    Some(d) => d.parse().map(Var).map_err(|_| ParseError::BadIndex { pos }),
                    None => Ok(self.names[&w]),
                }
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Dia) => {
                self.at += 1;
                Ok(Formula::dia(self.unary()?))
            }
            Some(Tok::Box) => {
                self.at += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.at += 1;
                let v = self.variable()?;
                if !self.eat(&Tok::Dot) {
                    return Err(self.unexpected("'.' after quantified variable"));
                }
                let body = self.iff()?;
                Ok(if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("')'"));
                }
                Ok(f)
            }
            Some(Tok::True) => {
                self.at += 1;
                Ok(Formula::Top)
            }
            Some(Tok::False) => {
                self.at += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(_)) => Ok(Formula::Atom(self.variable()?)),
            _ => Err(self.unexpected("a formula")),
        }
    }
}
