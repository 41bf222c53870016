//! A small piecewise-expression language in which distance rules and
//! self-maps are written as data. One clause per line, `condition => value`,
//! first matching clause wins. Conditions compare exact rational expressions
//! and may use the parity and power-of-base predicates; expressions are
//! four-function arithmetic with `abs` over the variables `x`, `y` (point
//! values) and `m`, `n` (point indices).
//!
//! The full grammar, with the header lines understood by corpus files, is
//! documented in the repository README.

mod eval;
mod parser;

pub use eval::{eval_clauses, eval_cond, eval_expr, Env, EvalError};
pub use parser::{
    parse_carrier_decl, parse_clause_line, parse_condition, parse_expression, parse_map_spec,
    parse_rational, parse_space_spec, VarSet,
};

use std::fmt;

use crate::scalar::Scalar;

/// Variables the language knows. `X`/`Y` bind point values, `M`/`N` point
/// indices; map rules see only `X` and `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    M,
    N,
}

impl Var {
    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::M => 'm',
            Var::N => 'n',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Lit(Scalar),
    Var(Var),
    Neg(Box<Expr>),
    Abs(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    /// Catch-all; only legal as a whole-clause condition.
    Otherwise,
    Cmp(CmpOp, Expr, Expr),
    Even(Expr),
    Odd(Expr),
    /// `power(b, e)`: e equals b^k for some k >= 1.
    Power(u32, Expr),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Not(Box<Cond>),
}

/// One `condition => expression` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub cond: Cond,
    pub expr: Expr,
}

/// Carrier declarations for generated spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CarrierDecl {
    /// `family n from K => expr`: the indexed family value(n) for n >= K.
    Family { start: i64, value: Expr },
    /// `interval LO HI` with `inf` allowed as HI.
    Interval { lo: Scalar, hi: Option<Scalar> },
    /// `members => cond`: membership predicate over the value x.
    Members { cond: Cond },
}

/// Parsed distance rule plus the headers a space file may carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceSpec {
    pub name: Option<String>,
    pub carrier: Option<CarrierDecl>,
    /// Claimed (v, s) class from the `claims:` header, if any.
    pub claimed_class: Option<(u32, Scalar)>,
    pub completeness_note: Option<String>,
    pub clauses: Vec<Clause>,
}

/// Parsed self-map rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub name: Option<String>,
    pub clauses: Vec<Clause>,
}

/// A positioned parse problem. Lines and columns are 1-based and refer to
/// the source text handed to the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(s) => write!(f, "{s}"),
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Neg(e) => write!(f, "-{}", paren_factor(e)),
            Expr::Abs(e) => write!(f, "abs({e})"),
            Expr::Bin(op, a, b) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                let left = wrap(a, prec, false);
                let right = wrap(b, prec, true);
                write!(f, "{left} {sym} {right}")
            }
        }
    }
}

fn precedence(e: &Expr) -> i32 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 2,
        // a fractional literal prints with a slash, so it reads back at
        // term level, not as an atom
        Expr::Lit(s) if !s.is_integer() => 2,
        _ => 3,
    }
}

fn wrap(e: &Expr, parent_prec: i32, right_side: bool) -> String {
    let p = precedence(e);
    // right operand of a same-precedence chain needs parens to keep - and /
    // left-associative through a round trip
    if p < parent_prec || (right_side && p == parent_prec) {
        format!("({e})")
    } else {
        format!("{e}")
    }
}

fn paren_factor(e: &Expr) -> String {
    if precedence(e) < 2 {
        format!("({e})")
    } else {
        format!("{e}")
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        };
        write!(f, "{s}")
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond::Otherwise => write!(f, "otherwise"),
            Cond::Cmp(op, a, b) => write!(f, "{a} {op} {b}"),
            Cond::Even(e) => write!(f, "even({e})"),
            Cond::Odd(e) => write!(f, "odd({e})"),
            Cond::Power(b, e) => write!(f, "power({b}, {e})"),
            Cond::And(a, b) => write!(f, "{} and {}", cond_atom(a), cond_atom(b)),
            Cond::Or(a, b) => {
                let left = match a.as_ref() {
                    Cond::Or(..) | Cond::And(..) => format!("({a})"),
                    _ => format!("{a}"),
                };
                let right = match b.as_ref() {
                    Cond::Or(..) | Cond::And(..) => format!("({b})"),
                    _ => format!("{b}"),
                };
                write!(f, "{left} or {right}")
            }
            Cond::Not(c) => write!(f, "not {}", cond_atom(c)),
        }
    }
}

fn cond_atom(c: &Cond) -> String {
    match c {
        Cond::And(..) | Cond::Or(..) => format!("({c})"),
        _ => format!("{c}"),
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.cond, self.expr)
    }
}

impl fmt::Display for CarrierDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CarrierDecl::Family { start, value } => write!(f, "family n from {start} => {value}"),
            CarrierDecl::Interval { lo, hi } => match hi {
                Some(hi) => write!(f, "interval {lo} {hi}"),
                None => write!(f, "interval {lo} inf"),
            },
            CarrierDecl::Members { cond } => write!(f, "members => {cond}"),
        }
    }
}

impl SpaceSpec {
    /// Canonical source form; re-parsing it yields a clause-identical spec.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name: {name}\n"));
        }
        if let Some(c) = &self.carrier {
            out.push_str(&format!("carrier: {c}\n"));
        }
        if let Some((v, s)) = &self.claimed_class {
            out.push_str(&format!("claims: v={v} s={s}"));
            if let Some(note) = &self.completeness_note {
                out.push_str(&format!(" {note}"));
            }
            out.push('\n');
        }
        for cl in &self.clauses {
            out.push_str(&format!("{cl}\n"));
        }
        out
    }
}

impl MapSpec {
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name: {name}\n"));
        }
        for cl in &self.clauses {
            out.push_str(&format!("{cl}\n"));
        }
        out
    }
}

/// Warns when two clauses both match some pair drawn from the sample
/// environments. First match still wins; the lint only flags the overlap.
pub fn lint_overlap(clauses: &[Clause], samples: &[Env]) -> Vec<String> {
    let mut warnings = Vec::new();
    for i in 0..clauses.len() {
        for j in i + 1..clauses.len() {
            if matches!(clauses[j].cond, Cond::Otherwise) {
                continue;
            }
            let both = samples.iter().any(|env| {
                matches!(eval_cond(&clauses[i].cond, env), Ok(true))
                    && matches!(eval_cond(&clauses[j].cond, env), Ok(true))
            });
            if both {
                warnings.push(format!(
                    "clauses {} and {} overlap on the sample set (first match wins)",
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    warnings
}
