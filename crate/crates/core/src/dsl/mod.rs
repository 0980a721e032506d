//! A small condition language over the pair-type quadruple.
//!
//! Variables are `a b c d` (the four region counts), `n`, and the derived
//! sizes `x = a+b`, `y = a+c`, `sd = b+c`, `csd = a+d`. `omega` is a value
//! above every finite term. A condition compiles at a given `n` to the set of
//! pair types satisfying it, which must be an equivalence relation there.

mod ast;
mod parser;

use thiserror::Error;

pub use ast::{CmpOp, RelationExpr, Term, Value, Var};
pub use parser::{parse, Pos};

use crate::error::Result;
use crate::relation::{InvariantRelation, TypeSet};
use crate::universe::Universe;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown identifier {name:?} at {line}:{column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },
    #[error("type error at {line}:{column}: {message}")]
    Type { line: usize, column: usize, message: String },
    #[error("empty relation file")]
    Empty,
}

impl DslError {
    pub(crate) fn syntax(pos: Pos, message: String) -> Self {
        DslError::Syntax { line: pos.line, column: pos.column, message }
    }

    pub(crate) fn type_error(pos: Pos, message: &str) -> Self {
        DslError::Type { line: pos.line, column: pos.column, message: message.to_string() }
    }
}

/// Evaluate the condition at every pair type over `[n]` and validate.
pub fn compile(expr: &RelationExpr, n: usize) -> Result<InvariantRelation> {
    let u = Universe::new(n)?;
    InvariantRelation::new(TypeSet::from_predicate(u, |t| expr.eval(t)))
}

pub fn compile_str(text: &str, n: usize) -> Result<InvariantRelation> {
    compile(&parse(text)?, n)
}

/// Contents of a `.rel` file.
#[derive(Debug, Clone, PartialEq)]
pub struct RelFile {
    pub name: Option<String>,
    pub expr: RelationExpr,
}

/// `#` lines are comments; a `# name: …` comment names the relation. The
/// remaining lines form one expression.
pub fn parse_rel_file(text: &str) -> std::result::Result<RelFile, DslError> {
    let mut name = None;
    let mut body = String::new();
    for line in text.lines() {
        let trimmed = line.trim_start();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(n) = comment.trim_start().strip_prefix("name:") {
                name.get_or_insert_with(|| n.trim().to_string());
            }
            // keep line numbering intact for error positions
            body.push('\n');
            continue;
        }
        body.push_str(line);
        body.push('\n');
    }
    if body.trim().is_empty() {
        return Err(DslError::Empty);
    }
    Ok(RelFile { name, expr: parse(&body)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::LabError;
    use crate::relation::Catalog;
    use crate::universe::PairType;

    #[test]
    fn parse_examples() {
        let e = parse("b + c = 0").unwrap();
        assert_eq!(e, RelationExpr::Cmp(CmpOp::Eq, Term::Add(Box::new(Term::Var(Var::B)), Box::new(Term::Var(Var::C))), Term::Lit(0)));
        assert_eq!(parse("b = c").unwrap(), RelationExpr::Cmp(CmpOp::Eq, Term::Var(Var::B), Term::Var(Var::C)));
        match parse("a ++ b") {
            Err(DslError::Syntax { line: 1, column: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let e = parse("not a = 0 and b = 0 or c = 0").unwrap();
        assert_eq!(e.to_string(), "not a = 0 and b = 0 or c = 0");
        let RelationExpr::Or(l, _) = &e else { panic!() };
        let RelationExpr::And(nl, _) = &**l else { panic!() };
        assert!(matches!(**nl, RelationExpr::Not(_)));
        assert_eq!(parse("a = 0 and (b = 0 or c = 0)").unwrap().to_string(), "a = 0 and (b = 0 or c = 0)");
        assert_eq!(parse("((a)) = (b + (c + d))").unwrap().to_string(), "a = b + (c + d)");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("a = 0 and\n  q = 1"), Err(DslError::UnknownIdentifier { line: 2, column: 3, .. })));
        assert!(matches!(parse("a < b < c"), Err(DslError::Syntax { column: 7, .. })));
        assert!(matches!(parse("a + b"), Err(DslError::Type { .. })));
        assert!(matches!(parse("(a = b) + 1 = 2"), Err(DslError::Type { .. })));
        assert!(matches!(parse("a = 0 and b"), Err(DslError::Type { .. })));
        assert!(matches!(parse("(a = 0"), Err(DslError::Syntax { .. })));
        assert!(matches!(parse("a = 0)"), Err(DslError::Syntax { .. })));
        assert!(matches!(parse("a = $"), Err(DslError::Syntax { column: 5, .. })));
    }

    #[test]
    fn unicode_operators() {
        assert_eq!(parse("x ≤ y and sd ≠ ω").unwrap(), parse("x <= y and sd != omega").unwrap());
    }

    #[test]
    fn omega_semantics() {
        let t = PairType::new(1, 2, 0, 1);
        assert!(parse("sd < omega").unwrap().eval(t));
        assert!(parse("omega = omega").unwrap().eval(t));
        assert!(parse("omega + 1 = omega").unwrap().eval(t));
        assert!(!parse("omega <= 1000000").unwrap().eval(t));
    }

    #[test]
    fn compile_examples() {
        assert_eq!(compile_str("sd = 0 or csd = 0", 4).unwrap(), Catalog::Lcp.relation(4).unwrap());
        for n in 1..=6 {
            assert_eq!(compile_str("sd < omega", n).unwrap(), Catalog::Total.relation(n).unwrap());
        }
        match compile_str("b = 0", 3) {
            Err(LabError::NotEquivalence(r)) => {
                assert!(!r.symmetric);
                assert_eq!(r.asymmetric_type, Some(PairType::new(0, 0, 1, 2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_transitive_condition_carries_witness() {
        match compile_str("sd <= 2", 3) {
            Err(LabError::NotEquivalence(r)) => assert!(!r.transitive && r.counterexample.is_some()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transitivity_depends_on_n() {
        // one-element moves within a slice: transitive only while the slice
        // has no pair at distance two
        let cond = "x = y and sd <= 2";
        assert!(compile_str(cond, 2).is_ok());
        assert!(compile_str(cond, 4).is_err());
    }

    #[test]
    fn catalog_dsl_strings_match() {
        for n in 1..=8 {
            for c in Catalog::ALL {
                if let Some(src) = c.dsl() {
                    assert_eq!(compile_str(src, n).unwrap(), c.relation(n).unwrap(), "{c} at n={n}");
                }
            }
        }
    }

    #[test]
    fn rel_file_format() {
        let f = parse_rel_file("# name: LCP\n# another comment\nsd = 0\n  or csd = 0\n").unwrap();
        assert_eq!(f.name.as_deref(), Some("LCP"));
        assert_eq!(f.expr, parse("sd = 0 or csd = 0").unwrap());
        assert!(matches!(parse_rel_file("# name: x\n"), Err(DslError::Empty)));
        assert!(matches!(parse_rel_file("# c\nsd = = 0"), Err(DslError::Syntax { line: 2, .. })));
    }
}
