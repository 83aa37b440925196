//! Concrete syntax.
//!
//! Processes:
//!
//! ```text
//! process := sum
//! sum     := par ('+' par)*                  loosest, left associative
//! par     := prefix ('|' prefix)*            tighter, left associative
//! prefix  := '0' | 'tau' '.' prefix
//!          | name '!' name '.' prefix        free output
//!          | name '?' '(' name ')' '.' prefix  input
//!          | '[' name '=' name ']' prefix    match
//!          | 'nu' '(' name ')' prefix        restriction
//!          | '(' process ')'
//! name    := [a-z][A-Za-z0-9_]*              'tau', 'nu', 'tt', 'ff',
//!                                            'and', 'or' are reserved
//! ```
//!
//! Formulae:
//!
//! ```text
//! form := 'tt' | 'ff'
//!       | 'and' '[' (form (',' form)*)? ']'
//!       | 'or'  '[' (form (',' form)*)? ']'
//!       | '<' act '>' form | '[' act ']' form
//!       | '<' bact '(' name ')' '>' form | '[' bact '(' name ')' ']' form
//!       | '<' eqs '>' form | '[' eqs ']' form
//! act  := 'tau' | name '!' name
//! bact := name '!' | name '?'
//! eqs  := name '=' name (',' name '=' name)*
//! ```

use std::fmt;

use crate::syntax::{ActB, Form, Name, NameSupply, Pr, Scope, Tm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

const RESERVED: [&str; 6] = ["tau", "nu", "tt", "ff", "and", "or"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Plus,
    Bar,
    Dot,
    Bang,
    Query,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Equal,
    Comma,
    Lt,
    Gt,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Query => "`?`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Equal => "`=`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        if c.is_ascii_lowercase() {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    ident.push(advance(&mut chars));
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(ident), tline, tcol));
            continue;
        }
        let tok = match c {
            '0' => Tok::Zero,
            '+' => Tok::Plus,
            '|' => Tok::Bar,
            '.' => Tok::Dot,
            '!' => Tok::Bang,
            '?' => Tok::Query,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '=' => Tok::Equal,
            ',' => Tok::Comma,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        advance(&mut chars);
        out.push((tok, tline, tcol));
    }
    out.push((Tok::Eof, line, col));
    Ok(out)
}

struct Parser<'s> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    supply: &'s mut NameSupply,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = self.toks[self.pos];
        (l, c)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                if RESERVED.contains(&s.as_str()) {
                    return Err(self.error(format!("`{s}` is reserved and cannot name a channel")));
                }
                self.bump();
                let n = Name::global(s);
                self.supply.observe(&n);
                Ok(n)
            }
            other => Err(self.error(format!("expected name, found {}", other.describe()))),
        }
    }

    fn ident_is(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    // process := sum
    fn process(&mut self) -> Result<Pr, ParseError> {
        let mut acc = self.par()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.par()?;
            acc = Pr::Plus(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn par(&mut self) -> Result<Pr, ParseError> {
        let mut acc = self.prefix()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.prefix()?;
            acc = Pr::Par(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Pr, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Pr::Null)
            }
            Tok::LParen => {
                self.bump();
                let p = self.process()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::LBracket => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Equal)?;
                let y = self.name()?;
                self.expect(Tok::RBracket)?;
                let cont = self.prefix()?;
                Ok(Pr::Match(Tm::Var(x), Tm::Var(y), Box::new(cont)))
            }
            Tok::Ident(s) if s == "tau" => {
                self.bump();
                self.expect(Tok::Dot)?;
                let cont = self.prefix()?;
                Ok(Pr::Tau(Box::new(cont)))
            }
            Tok::Ident(s) if s == "nu" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.name()?;
                self.expect(Tok::RParen)?;
                let body = self.prefix()?;
                Ok(Pr::Nu(Box::new(Scope::bind(&x, body))))
            }
            Tok::Ident(_) => {
                let chan = self.name()?;
                match self.peek() {
                    Tok::Bang => {
                        self.bump();
                        let payload = self.name()?;
                        self.expect(Tok::Dot)?;
                        let cont = self.prefix()?;
                        Ok(Pr::Out(Tm::Var(chan), Tm::Var(payload), Box::new(cont)))
                    }
                    Tok::Query => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let binder = self.name()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Dot)?;
                        let cont = self.prefix()?;
                        Ok(Pr::In(Tm::Var(chan), Box::new(Scope::bind(&binder, cont))))
                    }
                    other => Err(self.error(format!(
                        "expected `!` or `?` after channel name, found {}",
                        other.describe()
                    ))),
                }
            }
            other => Err(self.error(format!("expected process, found {}", other.describe()))),
        }
    }

    fn formula(&mut self) -> Result<Form, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "tt" => {
                self.bump();
                Ok(Form::True)
            }
            Tok::Ident(s) if s == "ff" => {
                self.bump();
                Ok(Form::False)
            }
            Tok::Ident(s) if s == "and" || s == "or" => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let mut parts = Vec::new();
                if *self.peek() != Tok::RBracket {
                    parts.push(self.formula()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        parts.push(self.formula()?);
                    }
                }
                self.expect(Tok::RBracket)?;
                Ok(if s == "and" {
                    Form::Conj(parts)
                } else {
                    Form::Disj(parts)
                })
            }
            Tok::Lt => {
                self.bump();
                self.modal_body(Tok::Gt, true)
            }
            Tok::LBracket => {
                self.bump();
                self.modal_body(Tok::RBracket, false)
            }
            other => Err(self.error(format!("expected formula, found {}", other.describe()))),
        }
    }

    /// The interior of `<...>f` or `[...]f`, after the opening delimiter.
    fn modal_body(&mut self, close: Tok, diamond: bool) -> Result<Form, ParseError> {
        if self.ident_is("tau") {
            self.bump();
            self.expect(close)?;
            let body = Box::new(self.formula()?);
            return Ok(if diamond {
                Form::Dia(crate::syntax::Act::Tau, body)
            } else {
                Form::Box(crate::syntax::Act::Tau, body)
            });
        }
        let first = self.name()?;
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    // bound output
                    self.bump();
                    let binder = self.name()?;
                    self.expect(Tok::RParen)?;
                    self.expect(close)?;
                    let body = self.formula()?;
                    let scope = Box::new(Scope::bind(&binder, body));
                    Ok(if diamond {
                        Form::DiaB(ActB::Out(Tm::Var(first)), scope)
                    } else {
                        Form::BoxB(ActB::Out(Tm::Var(first)), scope)
                    })
                } else {
                    let payload = self.name()?;
                    self.expect(close)?;
                    let body = Box::new(self.formula()?);
                    let act = crate::syntax::Act::Out(Tm::Var(first), Tm::Var(payload));
                    Ok(if diamond {
                        Form::Dia(act, body)
                    } else {
                        Form::Box(act, body)
                    })
                }
            }
            Tok::Query => {
                self.bump();
                self.expect(Tok::LParen)?;
                let binder = self.name()?;
                self.expect(Tok::RParen)?;
                self.expect(close)?;
                let body = self.formula()?;
                let scope = Box::new(Scope::bind(&binder, body));
                Ok(if diamond {
                    Form::DiaB(ActB::In(Tm::Var(first)), scope)
                } else {
                    Form::BoxB(ActB::In(Tm::Var(first)), scope)
                })
            }
            Tok::Equal => {
                self.bump();
                let second = self.name()?;
                let mut eqs = vec![(Tm::Var(first), Tm::Var(second))];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    let a = self.name()?;
                    self.expect(Tok::Equal)?;
                    let b = self.name()?;
                    eqs.push((Tm::Var(a), Tm::Var(b)));
                }
                self.expect(close)?;
                let body = Box::new(self.formula()?);
                Ok(if diamond {
                    Form::DiaMatch(eqs, body)
                } else {
                    Form::BoxMatch(eqs, body)
                })
            }
            other => Err(self.error(format!(
                "expected `!`, `?` or `=` in modality, found {}",
                other.describe()
            ))),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!(
                "unexpected {} after complete input",
                self.peek().describe()
            )))
        }
    }
}

pub fn parse_process(text: &str, supply: &mut NameSupply) -> Result<Pr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        supply,
    };
    let pr = p.process()?;
    p.finish()?;
    Ok(pr)
}

pub fn parse_formula(text: &str, supply: &mut NameSupply) -> Result<Form, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        supply,
    };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}
