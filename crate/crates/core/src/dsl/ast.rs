use std::fmt;

use crate::universe::PairType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    A,
    B,
    C,
    D,
    N,
    X,
    Y,
    Sd,
    Csd,
}

impl Var {
    pub const ALL: [Var; 9] = [Var::A, Var::B, Var::C, Var::D, Var::N, Var::X, Var::Y, Var::Sd, Var::Csd];

    pub fn name(self) -> &'static str {
        match self {
            Var::A => "a",
            Var::B => "b",
            Var::C => "c",
            Var::D => "d",
            Var::N => "n",
            Var::X => "x",
            Var::Y => "y",
            Var::Sd => "sd",
            Var::Csd => "csd",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }

    pub fn value(self, t: PairType) -> u64 {
        (match self {
            Var::A => t.a as usize,
            Var::B => t.b as usize,
            Var::C => t.c as usize,
            Var::D => t.d as usize,
            Var::N => t.n(),
            Var::X => t.x(),
            Var::Y => t.y(),
            Var::Sd => t.sd(),
            Var::Csd => t.csd(),
        }) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Arithmetic terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Lit(u64),
    Omega,
    Add(Box<Term>, Box<Term>),
}

/// Conditions over a pair type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelationExpr {
    Cmp(CmpOp, Term, Term),
    Not(Box<RelationExpr>),
    And(Box<RelationExpr>, Box<RelationExpr>),
    Or(Box<RelationExpr>, Box<RelationExpr>),
}

/// Finite values plus a single infinite value above all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Finite(u64),
    Omega,
}

impl Term {
    pub fn eval(&self, t: PairType) -> Value {
        match self {
            Term::Var(v) => Value::Finite(v.value(t)),
            Term::Lit(k) => Value::Finite(*k),
            Term::Omega => Value::Omega,
            Term::Add(l, r) => match (l.eval(t), r.eval(t)) {
                (Value::Finite(a), Value::Finite(b)) => a.checked_add(b).map_or(Value::Omega, Value::Finite),
                _ => Value::Omega,
            },
        }
    }
}

impl RelationExpr {
    pub fn eval(&self, t: PairType) -> bool {
        match self {
            RelationExpr::Cmp(op, l, r) => {
                let (l, r) = (l.eval(t), r.eval(t));
                match op {
                    CmpOp::Eq => l == r,
                    CmpOp::Ne => l != r,
                    CmpOp::Lt => l < r,
                    CmpOp::Le => l <= r,
                    CmpOp::Gt => l > r,
                    CmpOp::Ge => l >= r,
                }
            }
            RelationExpr::Not(e) => !e.eval(t),
            RelationExpr::And(l, r) => l.eval(t) && r.eval(t),
            RelationExpr::Or(l, r) => l.eval(t) || r.eval(t),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v.name()),
            Term::Lit(k) => write!(f, "{k}"),
            Term::Omega => f.write_str("omega"),
            Term::Add(l, r) => {
                write!(f, "{l} + ")?;
                // addition is left-associative
                if matches!(**r, Term::Add(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

impl RelationExpr {
    fn precedence(&self) -> u8 {
        match self {
            RelationExpr::Or(..) => 0,
            RelationExpr::And(..) => 1,
            RelationExpr::Not(..) => 2,
            RelationExpr::Cmp(..) => 3,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Canonical form: minimal parentheses, ASCII operators.
impl fmt::Display for RelationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationExpr::Cmp(op, l, r) => write!(f, "{l} {} {r}", op.symbol()),
            RelationExpr::Not(e) => {
                f.write_str("not ")?;
                e.fmt_child(f, 2)
            }
            RelationExpr::And(l, r) => {
                l.fmt_child(f, 1)?;
                f.write_str(" and ")?;
                r.fmt_child(f, 2)
            }
            RelationExpr::Or(l, r) => {
                l.fmt_child(f, 0)?;
                f.write_str(" or ")?;
                r.fmt_child(f, 1)
            }
        }
    }
}
