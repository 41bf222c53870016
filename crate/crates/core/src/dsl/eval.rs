//! Exact evaluation of clause lists under a variable binding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::Scalar;

use super::{BinOp, Clause, CmpOp, Cond, Expr, Var};

/// Variable binding for one evaluation. Indices are bound as integer
/// scalars so they can appear in arithmetic.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub x: Option<Scalar>,
    pub y: Option<Scalar>,
    pub m: Option<Scalar>,
    pub n: Option<Scalar>,
}

impl Env {
    pub fn for_pair(
        x: Option<Scalar>,
        y: Option<Scalar>,
        m: Option<i64>,
        n: Option<i64>,
    ) -> Env {
        Env {
            x,
            y,
            m: m.map(Scalar::int),
            n: n.map(Scalar::int),
        }
    }

    fn get(&self, v: Var) -> Result<Scalar, EvalError> {
        let slot = match v {
            Var::X => &self.x,
            Var::Y => &self.y,
            Var::M => &self.m,
            Var::N => &self.n,
        };
        slot.clone().ok_or(EvalError::UnboundVariable(v.name()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no clause matches ({x}, {y})")]
    NoClauseMatches { x: String, y: String },
    #[error("division by zero while evaluating ({x}, {y})")]
    DivisionByZero { x: String, y: String },
    #[error("parity predicate applied to non-integer value {0}")]
    NonIntegerParity(String),
    #[error("variable `{0}` has no binding here")]
    UnboundVariable(char),
}

fn describe(env: &Env) -> (String, String) {
    let show = |v: &Option<Scalar>, i: &Option<Scalar>| match (v, i) {
        (Some(v), _) => v.to_string(),
        (None, Some(i)) => format!("#{i}"),
        (None, None) => "?".to_string(),
    };
    (show(&env.x, &env.m), show(&env.y, &env.n))
}

pub fn eval_expr(expr: &Expr, env: &Env) -> Result<Scalar, EvalError> {
    match expr {
        Expr::Lit(s) => Ok(s.clone()),
        Expr::Var(v) => env.get(*v),
        Expr::Neg(e) => Ok(-eval_expr(e, env)?),
        Expr::Abs(e) => Ok(eval_expr(e, env)?.abs()),
        Expr::Bin(op, a, b) => {
            let a = eval_expr(a, env)?;
            let b = eval_expr(b, env)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => a.checked_div(&b).ok_or_else(|| {
                    let (x, y) = describe(env);
                    EvalError::DivisionByZero { x, y }
                }),
            }
        }
    }
}

fn integer_of(e: &Expr, env: &Env) -> Result<BigInt, EvalError> {
    let v = eval_expr(e, env)?;
    v.to_integer()
        .ok_or_else(|| EvalError::NonIntegerParity(v.to_string()))
}

fn is_power_of(base: u32, value: &BigInt) -> bool {
    let base = BigInt::from(base);
    if value < &base {
        return false;
    }
    let mut v = value.clone();
    while v > BigInt::one() {
        let (q, r) = v.div_rem(&base);
        if !r.is_zero() {
            return false;
        }
        v = q;
    }
    true
}

pub fn eval_cond(cond: &Cond, env: &Env) -> Result<bool, EvalError> {
    match cond {
        Cond::Otherwise => Ok(true),
        Cond::Cmp(op, a, b) => {
            let a = eval_expr(a, env)?;
            let b = eval_expr(b, env)?;
            Ok(match op {
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
                CmpOp::Lt => a < b,
                CmpOp::Le => a <= b,
                CmpOp::Gt => a > b,
                CmpOp::Ge => a >= b,
            })
        }
        Cond::Even(e) => Ok(integer_of(e, env)?.is_even()),
        Cond::Odd(e) => Ok(integer_of(e, env)?.is_odd()),
        Cond::Power(base, e) => {
            let v = eval_expr(e, env)?;
            match v.to_integer() {
                Some(i) if !i.is_negative() => Ok(is_power_of(*base, &i)),
                _ => Ok(false),
            }
        }
        Cond::And(a, b) => Ok(eval_cond(a, env)? && eval_cond(b, env)?),
        Cond::Or(a, b) => Ok(eval_cond(a, env)? || eval_cond(b, env)?),
        Cond::Not(c) => Ok(!eval_cond(c, env)?),
    }
}

/// First-match clause evaluation.
pub fn eval_clauses(clauses: &[Clause], env: &Env) -> Result<Scalar, EvalError> {
    for clause in clauses {
        if eval_cond(&clause.cond, env)? {
            return eval_expr(&clause.expr, env);
        }
    }
    let (x, y) = describe(env);
    Err(EvalError::NoClauseMatches { x, y })
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse_map_spec, parse_space_spec, VarSet};
    use super::super::{lint_overlap, parse_clause_line};
    use super::*;

    fn rat(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn env_xy(x: &str, y: &str) -> Env {
        Env::for_pair(Some(rat(x)), Some(rat(y)), None, None)
    }

    const RECIPROCAL_INDEX_RULE: &str = "abs(m - n) != 1 => abs(m - n)\nabs(m - n) = 1 => 1/2\n";
    const POWERS_RULE: &str = "x = y => 0\n\
         x != 0 and y = 0 => 1/x\n\
         x = 0 and y != 0 => 1/y\n\
         (power(2, x) and power(3, y)) or (power(3, x) and power(2, y)) => 1/x + 1/y\n\
         otherwise => 1\n";
    const SHIFTED_AFFINE_RULE: &str = "x = y => 0\n\
         x > 0 and y > 0 => 1 + 2*x + 2*y\n\
         x != 0 and y = 0 => x\n\
         otherwise => y\n";

    #[test]
    fn index_distance_rule_parses_to_two_clauses() {
        let spec = parse_space_spec(RECIPROCAL_INDEX_RULE).unwrap();
        assert_eq!(spec.clauses.len(), 2);
        let env = Env::for_pair(None, None, Some(2), Some(3));
        assert_eq!(eval_clauses(&spec.clauses, &env).unwrap(), rat("1/2"));
        let env = Env::for_pair(None, None, Some(2), Some(4));
        assert_eq!(eval_clauses(&spec.clauses, &env).unwrap(), rat("2"));
    }

    #[test]
    fn single_clause_space_is_valid() {
        let spec = parse_space_spec("x = y => 0\n").unwrap();
        assert_eq!(spec.clauses.len(), 1);
        assert_eq!(
            eval_clauses(&spec.clauses, &env_xy("3/4", "3/4")).unwrap(),
            Scalar::zero()
        );
    }

    #[test]
    fn dangling_arrow_is_positioned_diagnostic() {
        let err = parse_space_spec("x == y =>\n").unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].line, 1);
        assert!(err[0].message.contains("expected expression"));
    }

    #[test]
    fn map_spec_parses_and_rejects_foreign_vars() {
        let spec = parse_map_spec("x < 1 => 0\nx >= 1 => (x + 1)/4\n").unwrap();
        assert_eq!(spec.clauses.len(), 2);
        let parity = parse_map_spec("even(x) => 0\nodd(x) => 2\n").unwrap();
        assert_eq!(parity.clauses.len(), 2);

        let err = parse_map_spec("y > 0 => 1\n").unwrap_err();
        assert!(err[0].message.contains("not allowed"));
        let empty = parse_map_spec("").unwrap_err();
        assert!(empty[0].message.contains("no clauses"));
    }

    #[test]
    fn power_pair_rule_matches_hand_value() {
        let spec = parse_space_spec(POWERS_RULE).unwrap();
        // 2 = 2^1 and 3 = 3^1
        assert_eq!(
            eval_clauses(&spec.clauses, &env_xy("2", "3")).unwrap(),
            rat("5/6")
        );
        assert_eq!(
            eval_clauses(&spec.clauses, &env_xy("4", "8")).unwrap(),
            rat("1")
        );
        assert_eq!(
            eval_clauses(&spec.clauses, &env_xy("0", "27")).unwrap(),
            rat("1/27")
        );
    }

    #[test]
    fn affine_rule_matches_hand_value() {
        let spec = parse_space_spec(SHIFTED_AFFINE_RULE).unwrap();
        assert_eq!(
            eval_clauses(&spec.clauses, &env_xy("1", "1/2")).unwrap(),
            rat("4")
        );
    }

    #[test]
    fn division_by_zero_outside_guard_is_reported() {
        let clause = parse_clause_line("otherwise => 1/x", 1, VarSet::SPACE).unwrap();
        let err = eval_clauses(&[clause], &env_xy("0", "2")).unwrap_err();
        assert!(matches!(err, EvalError::DivisionByZero { .. }));
    }

    #[test]
    fn literal_zero_division_is_a_parse_error() {
        let err = parse_space_spec("x = y => 3/0\n").unwrap_err();
        assert!(err[0].message.contains("division by zero in literal"));
    }

    #[test]
    fn no_clause_matches_reports_pair() {
        let clause = parse_clause_line("x = y => 0", 1, VarSet::SPACE).unwrap();
        let err = eval_clauses(&[clause], &env_xy("1", "2")).unwrap_err();
        assert_eq!(
            err,
            EvalError::NoClauseMatches { x: "1".into(), y: "2".into() }
        );
    }

    #[test]
    fn pretty_print_round_trips_clause_for_clause() {
        for src in [RECIPROCAL_INDEX_RULE, POWERS_RULE, SHIFTED_AFFINE_RULE] {
            let spec = parse_space_spec(src).unwrap();
            let printed = spec.pretty();
            let reparsed = parse_space_spec(&printed).unwrap();
            assert_eq!(spec.clauses, reparsed.clauses, "round trip of:\n{printed}");
        }
        let map = parse_map_spec("x <= 4 => x/2\notherwise => -2*x + 10\n").unwrap();
        let reparsed = parse_map_spec(&map.pretty()).unwrap();
        assert_eq!(map.clauses, reparsed.clauses);
    }

    #[test]
    fn overlap_lint_flags_double_matches() {
        let spec = parse_space_spec("x >= 0 => 1\nx >= 1 => 2\n").unwrap();
        let samples = vec![env_xy("2", "0"), env_xy("1/2", "0")];
        let warnings = lint_overlap(&spec.clauses, &samples);
        assert_eq!(warnings.len(), 1);
        let disjoint = parse_space_spec("x < 1 => 1\nx >= 1 => 2\n").unwrap();
        assert!(lint_overlap(&disjoint.clauses, &samples).is_empty());
    }

    #[test]
    fn deterministic_evaluation() {
        let spec = parse_space_spec(POWERS_RULE).unwrap();
        let env = env_xy("8", "9");
        let first = eval_clauses(&spec.clauses, &env).unwrap();
        for _ in 0..5 {
            assert_eq!(eval_clauses(&spec.clauses, &env).unwrap(), first);
        }
    }

    mod roundtrip {
        use super::super::super::{BinOp, Clause, CmpOp, Cond, Expr, Var};
        use super::*;
        use proptest::prelude::*;

        fn arb_expr() -> impl Strategy<Value = Expr> {
            let leaf = prop_oneof![
                (1i64..=12, 1i64..=6).prop_map(|(n, d)| Expr::Lit(Scalar::ratio(n, d))),
                prop_oneof![Just(Var::X), Just(Var::Y), Just(Var::M), Just(Var::N)]
                    .prop_map(Expr::Var),
            ];
            leaf.prop_recursive(3, 32, 2, |inner| {
                prop_oneof![
                    inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                    inner.clone().prop_map(|e| Expr::Abs(Box::new(e))),
                    (
                        prop_oneof![
                            Just(BinOp::Add),
                            Just(BinOp::Sub),
                            Just(BinOp::Mul),
                            Just(BinOp::Div)
                        ],
                        inner.clone(),
                        inner
                    )
                        .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
                ]
            })
        }

        fn arb_cond() -> impl Strategy<Value = Cond> {
            let atom = prop_oneof![
                (
                    prop_oneof![
                        Just(CmpOp::Eq),
                        Just(CmpOp::Ne),
                        Just(CmpOp::Lt),
                        Just(CmpOp::Le),
                        Just(CmpOp::Gt),
                        Just(CmpOp::Ge)
                    ],
                    arb_expr(),
                    arb_expr()
                )
                    .prop_map(|(op, a, b)| Cond::Cmp(op, a, b)),
                arb_expr().prop_map(Cond::Even),
                arb_expr().prop_map(Cond::Odd),
                (2u32..=5, arb_expr()).prop_map(|(b, e)| Cond::Power(b, e)),
            ];
            atom.prop_recursive(3, 16, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Cond::And(Box::new(a), Box::new(b))),
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| Cond::Or(Box::new(a), Box::new(b))),
                    inner.prop_map(|c| Cond::Not(Box::new(c))),
                ]
            })
        }

        proptest! {
            // printing normalises (literal ratios fold, negated literals
            // collapse); after one normalisation the print/parse loop is
            // the identity
            #[test]
            fn print_parse_is_idempotent(cond in arb_cond(), expr in arb_expr()) {
                let printed = Clause { cond, expr }.to_string();
                let once = parse_clause_line(&printed, 1, VarSet::SPACE)
                    .unwrap_or_else(|d| panic!("reparse of `{printed}`: {d}"));
                let twice = parse_clause_line(&once.to_string(), 1, VarSet::SPACE)
                    .unwrap_or_else(|d| panic!("second reparse of `{once}`: {d}"));
                prop_assert_eq!(once, twice);
            }
        }
    }
}
