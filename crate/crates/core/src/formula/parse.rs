//! Recursive-descent parser for the concrete formula grammar.

use super::{Formula, FormulaError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Mu,
    Nu,
    True,
    False,
    Forall,
    Exists,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Box,
    Dia,
    BoxD,
    DiaD,
    Tangle,
    TangleD,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
}

const SYMBOLS: &[(&str, Tok)] = &[
    ("<->", Tok::Iff),
    ("<dt>", Tok::TangleD),
    ("<d>", Tok::DiaD),
    ("<t>", Tok::Tangle),
    ("<>", Tok::Dia),
    ("->", Tok::Imp),
    ("[]", Tok::Box),
    ("[d]", Tok::BoxD),
    ("~", Tok::Not),
    ("&", Tok::And),
    ("|", Tok::Or),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    (",", Tok::Comma),
    (".", Tok::Dot),
];

fn syntax(pos: usize, msg: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let tok = match &text[start..i] {
                "mu" => Tok::Mu,
                "nu" => Tok::Nu,
                "true" => Tok::True,
                "false" => Tok::False,
                "A" => Tok::Forall,
                "E" => Tok::Exists,
                name => Tok::Ident(name.to_string()),
            };
            out.push((start, tok));
            continue;
        }
        for (sym, tok) in SYMBOLS {
            if text[i..].starts_with(sym) {
                out.push((i, tok.clone()));
                i += sym.len();
                continue 'outer;
            }
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(syntax(i, format!("unexpected character {ch:?}")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), FormulaError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.prefix()?;
        while self.eat(&Tok::And) {
            let rhs = self.prefix()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, FormulaError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        self.at += 1;
        Ok(match tok {
            Tok::Ident(name) => Formula::Atom(name),
            Tok::True => Formula::top(),
            Tok::False => Formula::bot(),
            Tok::Not => Formula::not(self.prefix()?),
            Tok::Box => Formula::nec(self.prefix()?),
            Tok::BoxD => Formula::nec_d(self.prefix()?),
            Tok::Dia => Formula::dia(self.prefix()?),
            Tok::DiaD => Formula::dia_d(self.prefix()?),
            Tok::Forall => Formula::forall(self.prefix()?),
            Tok::Exists => Formula::exists(self.prefix()?),
            Tok::Tangle => Formula::Tangle(self.tangle_set()?),
            Tok::TangleD => Formula::TangleD(self.tangle_set()?),
            Tok::Mu | Tok::Nu => {
                let var = match self.peek().cloned() {
                    Some(Tok::Ident(v)) => v,
                    _ => return Err(syntax(self.pos(), "expected a variable after binder")),
                };
                self.at += 1;
                self.expect(&Tok::Dot, "'.' after bound variable")?;
                let body = self.expr()?;
                if tok == Tok::Mu {
                    Formula::mu(var, body)?
                } else {
                    Formula::nu(var, body)?
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                inner
            }
            other => return Err(syntax(pos, format!("unexpected token {other:?}"))),
        })
    }

    fn tangle_set(&mut self) -> Result<super::TangleSet, FormulaError> {
        self.expect(&Tok::LBrace, "'{' after tangle modality")?;
        if self.peek() == Some(&Tok::RBrace) {
            return Err(FormulaError::EmptyTangle);
        }
        let mut members = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            members.push(self.expr()?);
        }
        self.expect(&Tok::RBrace, "',' or '}'")?;
        super::TangleSet::new(members)
    }
}

/// Parses a formula of the concrete grammar.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let f = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(f)
}
