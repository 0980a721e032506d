//! Lexer and recursive-descent parser.
//!
//! ```text
//! expr := and ("or" and)*
//! and  := not ("and" not)*
//! not  := "not" not | cmp
//! cmp  := sum (cmpop sum)?          comparisons do not chain
//! sum  := atom ("+" atom)*
//! atom := ident | integer | "omega" | "(" expr ")"
//! ```
//!
//! Parenthesized atoms may hold either sort, so the parser builds an untyped
//! tree and a second pass checks that comparisons see terms and connectives
//! see conditions.

use super::ast::{CmpOp, RelationExpr, Term, Var};
use super::DslError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Cmp(CmpOp),
    LParen,
    RParen,
    And,
    Or,
    Not,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.char_indices().peekable(), line: 1, column: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, DslError> {
        let mut out = Vec::new();
        loop {
            while self.peek().is_some_and(char::is_whitespace) {
                self.bump();
            }
            let pos = Pos { line: self.line, column: self.column };
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, pos));
                return Ok(out);
            };
            let tok = match c {
                '+' => Tok::Plus,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '≠' => Tok::Cmp(CmpOp::Ne),
                'ω' => Tok::Ident("omega".into()),
                '≤' => Tok::Cmp(CmpOp::Le),
                '≥' => Tok::Cmp(CmpOp::Ge),
                '=' => {
                    if self.peek() == Some('=') {
                        self.bump();
                    }
                    Tok::Cmp(CmpOp::Eq)
                }
                '!' if self.peek() == Some('=') => {
                    self.bump();
                    Tok::Cmp(CmpOp::Ne)
                }
                '<' | '>' => {
                    let eq = self.peek() == Some('=');
                    if eq {
                        self.bump();
                    }
                    Tok::Cmp(match (c, eq) {
                        ('<', false) => CmpOp::Lt,
                        ('<', true) => CmpOp::Le,
                        (_, false) => CmpOp::Gt,
                        (_, true) => CmpOp::Ge,
                    })
                }
                '0'..='9' => {
                    let mut s = String::from(c);
                    while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                        s.push(d);
                        self.bump();
                    }
                    Tok::Int(s.parse().map_err(|_| DslError::syntax(pos, format!("integer literal {s} too large")))?)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut s = String::from(c);
                    while let Some(d) = self.peek().filter(|d| d.is_ascii_alphanumeric() || *d == '_') {
                        s.push(d);
                        self.bump();
                    }
                    match s.as_str() {
                        "and" => Tok::And,
                        "or" => Tok::Or,
                        "not" => Tok::Not,
                        _ => Tok::Ident(s),
                    }
                }
                other => return Err(DslError::syntax(pos, format!("unexpected character {other:?}"))),
            };
            out.push((tok, pos));
        }
    }
}

#[derive(Debug)]
enum Node {
    Var(Var),
    Lit(u64),
    Omega,
    Add(Box<Node>, Box<Node>, Pos),
    Cmp(CmpOp, Box<Node>, Box<Node>, Pos),
    Not(Box<Node>, Pos),
    And(Box<Node>, Box<Node>, Pos),
    Or(Box<Node>, Box<Node>, Pos),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn advance(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        let found = match self.peek() {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Int(k) => k.to_string(),
            Tok::Plus => "'+'".into(),
            Tok::Cmp(op) => format!("'{}'", op.symbol()),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::And => "'and'".into(),
            Tok::Or => "'or'".into(),
            Tok::Not => "'not'".into(),
        };
        DslError::syntax(self.pos(), format!("expected {wanted}, found {found}"))
    }

    fn expr(&mut self) -> Result<(Node, Pos), DslError> {
        let (mut lhs, start) = self.and()?;
        while *self.peek() == Tok::Or {
            let (_, pos) = self.advance();
            let (rhs, _) = self.and()?;
            lhs = Node::Or(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok((lhs, start))
    }

    fn and(&mut self) -> Result<(Node, Pos), DslError> {
        let (mut lhs, start) = self.not()?;
        while *self.peek() == Tok::And {
            let (_, pos) = self.advance();
            let (rhs, _) = self.not()?;
            lhs = Node::And(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok((lhs, start))
    }

    fn not(&mut self) -> Result<(Node, Pos), DslError> {
        if *self.peek() == Tok::Not {
            let (_, pos) = self.advance();
            let (inner, _) = self.not()?;
            return Ok((Node::Not(Box::new(inner), pos), pos));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<(Node, Pos), DslError> {
        let (lhs, start) = self.sum()?;
        if let Tok::Cmp(op) = *self.peek() {
            let (_, pos) = self.advance();
            let (rhs, _) = self.sum()?;
            if let Tok::Cmp(_) = self.peek() {
                return Err(DslError::syntax(self.pos(), "comparisons do not chain; add parentheses".into()));
            }
            return Ok((Node::Cmp(op, Box::new(lhs), Box::new(rhs), pos), start));
        }
        Ok((lhs, start))
    }

    fn sum(&mut self) -> Result<(Node, Pos), DslError> {
        let (mut lhs, start) = self.atom()?;
        while *self.peek() == Tok::Plus {
            let (_, pos) = self.advance();
            let (rhs, _) = self.atom()?;
            lhs = Node::Add(Box::new(lhs), Box::new(rhs), pos);
        }
        Ok((lhs, start))
    }

    fn atom(&mut self) -> Result<(Node, Pos), DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(k) => {
                self.advance();
                Ok((Node::Lit(k), pos))
            }
            Tok::Ident(s) => {
                self.advance();
                if s == "omega" {
                    return Ok((Node::Omega, pos));
                }
                let v = Var::from_name(&s).ok_or(DslError::UnknownIdentifier { name: s, line: pos.line, column: pos.column })?;
                Ok((Node::Var(v), pos))
            }
            Tok::LParen => {
                self.advance();
                let (inner, _) = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.advance();
                Ok((inner, pos))
            }
            _ => Err(self.unexpected("an operand")),
        }
    }
}

fn to_term(node: Node, _pos: Pos) -> Result<Term, DslError> {
    match node {
        Node::Var(v) => Ok(Term::Var(v)),
        Node::Lit(k) => Ok(Term::Lit(k)),
        Node::Omega => Ok(Term::Omega),
        Node::Add(l, r, p) => Ok(Term::Add(Box::new(to_term(*l, p)?), Box::new(to_term(*r, p)?))),
        Node::Cmp(_, _, _, p) | Node::Not(_, p) | Node::And(_, _, p) | Node::Or(_, _, p) => {
            Err(DslError::type_error(p, "a condition is used where a number is expected"))
        }
    }
}

fn to_expr(node: Node, pos: Pos) -> Result<RelationExpr, DslError> {
    match node {
        Node::Cmp(op, l, r, p) => Ok(RelationExpr::Cmp(op, to_term(*l, p)?, to_term(*r, p)?)),
        Node::Not(e, p) => Ok(RelationExpr::Not(Box::new(to_expr(*e, p)?))),
        Node::And(l, r, p) => Ok(RelationExpr::And(Box::new(to_expr(*l, p)?), Box::new(to_expr(*r, p)?))),
        Node::Or(l, r, p) => Ok(RelationExpr::Or(Box::new(to_expr(*l, p)?), Box::new(to_expr(*r, p)?))),
        Node::Var(_) | Node::Lit(_) | Node::Omega | Node::Add(..) => {
            Err(DslError::type_error(pos, "a number is used where a condition is expected"))
        }
    }
}

pub fn parse(text: &str) -> Result<RelationExpr, DslError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, at: 0 };
    let (node, pos) = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    to_expr(node, pos)
}
