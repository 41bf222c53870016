//! Line-oriented parser for the clause language and the corpus headers.

use std::str::FromStr;

use crate::scalar::Scalar;

use super::{
    BinOp, CarrierDecl, Clause, CmpOp, Cond, Expr, MapSpec, ParseDiagnostic, SpaceSpec, Var,
};

/// Variables the current context admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarSet {
    pub x: bool,
    pub y: bool,
    pub m: bool,
    pub n: bool,
}

impl VarSet {
    pub const SPACE: VarSet = VarSet { x: true, y: true, m: true, n: true };
    pub const MAP: VarSet = VarSet { x: true, y: false, m: false, n: true };
    pub const VALUE_ONLY: VarSet = VarSet { x: true, y: false, m: false, n: false };
    pub const INDEX_ONLY: VarSet = VarSet { x: false, y: false, m: false, n: true };

    fn allows(&self, v: Var) -> bool {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
            Var::M => self.m,
            Var::N => self.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(Scalar),
    Ident(String),
    Arrow, // =>
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
}

fn lex(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseDiagnostic> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = 0;
    let col_of = |byte: usize| line[..byte].chars().count() + 1;
    while i < chars.len() {
        let (byte, c) = chars[i];
        let col = col_of(byte);
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '#' => break, // trailing comment
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().map(|(_, c)| *c).collect();
                let value = Scalar::from_str(&text).map_err(|e| ParseDiagnostic {
                    line: line_no,
                    column: col,
                    message: e.to_string(),
                })?;
                toks.push((Tok::Int(value), col));
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '-')
                {
                    j += 1;
                }
                let text: String = chars[i..j].iter().map(|(_, c)| *c).collect();
                toks.push((Tok::Ident(text), col));
                i = j;
            }
            '=' => {
                if i + 1 < chars.len() && chars[i + 1].1 == '>' {
                    toks.push((Tok::Arrow, col));
                    i += 2;
                } else if i + 1 < chars.len() && chars[i + 1].1 == '=' {
                    toks.push((Tok::Eq, col));
                    i += 2;
                } else {
                    toks.push((Tok::Eq, col));
                    i += 1;
                }
            }
            '!' => {
                if i + 1 < chars.len() && chars[i + 1].1 == '=' {
                    toks.push((Tok::Ne, col));
                    i += 2;
                } else {
                    return Err(ParseDiagnostic {
                        line: line_no,
                        column: col,
                        message: "stray `!`; use `!=` or `not`".into(),
                    });
                }
            }
            '≠' => {
                toks.push((Tok::Ne, col));
                i += 1;
            }
            '<' => {
                if i + 1 < chars.len() && chars[i + 1].1 == '=' {
                    toks.push((Tok::Le, col));
                    i += 2;
                } else {
                    toks.push((Tok::Lt, col));
                    i += 1;
                }
            }
            '≤' => {
                toks.push((Tok::Le, col));
                i += 1;
            }
            '>' => {
                if i + 1 < chars.len() && chars[i + 1].1 == '=' {
                    toks.push((Tok::Ge, col));
                    i += 2;
                } else {
                    toks.push((Tok::Gt, col));
                    i += 1;
                }
            }
            '≥' => {
                toks.push((Tok::Ge, col));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' | '−' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '*' | '×' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '/' | '÷' => {
                toks.push((Tok::Slash, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            other => {
                return Err(ParseDiagnostic {
                    line: line_no,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    vars: VarSet,
}

impl Parser {
    fn new(toks: Vec<(Tok, usize)>, line: usize, end_col: usize, vars: VarSet) -> Self {
        Parser { toks, pos: 0, line, end_col, vars }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic { line: self.line, column: self.col(), message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseDiagnostic> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // expr := term (("+"|"-") term)*
    fn expr(&mut self) -> Result<Expr, ParseDiagnostic> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := factor (("*"|"/") factor)*
    fn term(&mut self) -> Result<Expr, ParseDiagnostic> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    let col = self.col();
                    self.pos += 1;
                    let rhs = self.factor()?;
                    // fold literal ratios so `1/2` round-trips as one literal
                    if let (Expr::Lit(a), Expr::Lit(b)) = (&lhs, &rhs) {
                        if b.is_zero() {
                            return Err(ParseDiagnostic {
                                line: self.line,
                                column: col,
                                message: "division by zero in literal".into(),
                            });
                        }
                        lhs = Expr::Lit(a / b);
                    } else {
                        lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                    }
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseDiagnostic> {
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let inner = self.factor()?;
                Ok(match inner {
                    Expr::Lit(s) => Expr::Lit(-s),
                    other => Expr::Neg(Box::new(other)),
                })
            }
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Lit(v))
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "abs" => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(` after abs")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "closing `)`")?;
                    Ok(Expr::Abs(Box::new(e)))
                }
                "x" | "y" | "m" | "n" => {
                    let var = match name.as_str() {
                        "x" => Var::X,
                        "y" => Var::Y,
                        "m" => Var::M,
                        _ => Var::N,
                    };
                    if !self.vars.allows(var) {
                        return Err(self.err(format!("variable `{name}` not allowed here")));
                    }
                    self.pos += 1;
                    Ok(Expr::Var(var))
                }
                other => Err(self.err(format!("unknown identifier `{other}` in expression"))),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(e)
            }
            _ => Err(self.err("expected expression")),
        }
    }

    // cond := and_chain ("or" and_chain)*
    fn cond(&mut self) -> Result<Cond, ParseDiagnostic> {
        let mut lhs = self.cond_and()?;
        while self.peek_ident("or") {
            self.pos += 1;
            let rhs = self.cond_and()?;
            lhs = Cond::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cond_and(&mut self) -> Result<Cond, ParseDiagnostic> {
        let mut lhs = self.cond_not()?;
        while self.peek_ident("and") {
            self.pos += 1;
            let rhs = self.cond_not()?;
            lhs = Cond::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn cond_not(&mut self) -> Result<Cond, ParseDiagnostic> {
        if self.peek_ident("not") {
            self.pos += 1;
            let inner = self.cond_not()?;
            return Ok(Cond::Not(Box::new(inner)));
        }
        self.cond_atom()
    }

    fn peek_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == word)
    }

    fn cond_atom(&mut self) -> Result<Cond, ParseDiagnostic> {
        if self.peek_ident("even") || self.peek_ident("odd") {
            let is_even = self.peek_ident("even");
            self.pos += 1;
            self.expect(Tok::LParen, "`(`")?;
            let e = self.expr()?;
            self.expect(Tok::RParen, "closing `)`")?;
            return Ok(if is_even { Cond::Even(e) } else { Cond::Odd(e) });
        }
        if self.peek_ident("power") {
            self.pos += 1;
            self.expect(Tok::LParen, "`(`")?;
            let base = match self.bump() {
                Some(Tok::Int(v)) if v.is_integer() => {
                    let b = v.to_integer().unwrap();
                    u32::try_from(&b).ok().filter(|b| *b >= 2).ok_or_else(|| {
                        self.err("power base must be an integer >= 2")
                    })?
                }
                _ => return Err(self.err("power base must be an integer literal")),
            };
            self.expect(Tok::Comma, "`,`")?;
            let e = self.expr()?;
            self.expect(Tok::RParen, "closing `)`")?;
            return Ok(Cond::Power(base, e));
        }
        // `( ... )` may enclose either a condition or an arithmetic
        // subexpression of a comparison; try the comparison first and
        // backtrack when no relational operator follows.
        let save = self.pos;
        match self.try_comparison() {
            Ok(c) => Ok(c),
            Err(first_err) => {
                self.pos = save;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let c = self.cond()?;
                    self.expect(Tok::RParen, "closing `)`")?;
                    Ok(c)
                } else {
                    Err(first_err)
                }
            }
        }
    }

    fn try_comparison(&mut self) -> Result<Cond, ParseDiagnostic> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Ge) => CmpOp::Ge,
            _ => return Err(self.err("expected comparison operator")),
        };
        self.pos += 1;
        let rhs = self.expr()?;
        Ok(Cond::Cmp(op, lhs, rhs))
    }
}

/// Parse one `condition => expression` line.
pub fn parse_clause_line(
    line: &str,
    line_no: usize,
    vars: VarSet,
) -> Result<Clause, ParseDiagnostic> {
    let toks = lex(line, line_no)?;
    let end_col = line.chars().count() + 1;
    let mut p = Parser::new(toks, line_no, end_col, vars);
    let cond = if p.peek_ident("otherwise") {
        p.pos += 1;
        Cond::Otherwise
    } else {
        p.cond()?
    };
    p.expect(Tok::Arrow, "`=>`")?;
    if p.at_end() {
        return Err(p.err("expected expression after `=>`"));
    }
    let expr = p.expr()?;
    if !p.at_end() {
        return Err(p.err("trailing input after clause"));
    }
    Ok(Clause { cond, expr })
}

/// Parse a standalone condition (used by carrier membership predicates).
pub fn parse_condition(text: &str, line_no: usize, vars: VarSet) -> Result<Cond, ParseDiagnostic> {
    let toks = lex(text, line_no)?;
    let end_col = text.chars().count() + 1;
    let mut p = Parser::new(toks, line_no, end_col, vars);
    let cond = p.cond()?;
    if !p.at_end() {
        return Err(p.err("trailing input after condition"));
    }
    Ok(cond)
}

/// Parse a standalone expression.
pub fn parse_expression(text: &str, line_no: usize, vars: VarSet) -> Result<Expr, ParseDiagnostic> {
    let toks = lex(text, line_no)?;
    let end_col = text.chars().count() + 1;
    let mut p = Parser::new(toks, line_no, end_col, vars);
    let expr = p.expr()?;
    if !p.at_end() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(expr)
}

/// Parse a rational literal such as `2`, `-7/4`.
pub fn parse_rational(text: &str) -> Result<Scalar, String> {
    Scalar::from_str(text).map_err(|e| e.to_string())
}

/// Parse a `carrier:` header payload.
pub fn parse_carrier_decl(text: &str, line_no: usize) -> Result<CarrierDecl, ParseDiagnostic> {
    let text = text.trim();
    let bad = |col: usize, msg: &str| ParseDiagnostic {
        line: line_no,
        column: col,
        message: msg.to_string(),
    };
    if let Some(rest) = text.strip_prefix("family") {
        // family n from K => expr
        let rest = rest.trim();
        let mut parts = rest.splitn(2, "=>");
        let head = parts.next().unwrap_or("").trim();
        let value_src = parts
            .next()
            .ok_or_else(|| bad(1, "family carrier needs `=> <value expression>`"))?
            .trim();
        let mut words = head.split_whitespace();
        match (words.next(), words.next(), words.next(), words.next()) {
            (Some("n"), Some("from"), Some(k), None) => {
                let start: i64 = k
                    .parse()
                    .map_err(|_| bad(1, "family start index must be an integer"))?;
                let value = parse_expression(value_src, line_no, VarSet::INDEX_ONLY)?;
                Ok(CarrierDecl::Family { start, value })
            }
            _ => Err(bad(1, "expected `family n from <k> => <expr>`")),
        }
    } else if let Some(rest) = text.strip_prefix("interval") {
        let mut words = rest.split_whitespace();
        let lo = words
            .next()
            .and_then(|w| Scalar::from_str(w).ok())
            .ok_or_else(|| bad(1, "interval lower bound must be a rational"))?;
        let hi_word = words
            .next()
            .ok_or_else(|| bad(1, "interval needs an upper bound or `inf`"))?;
        let hi = if hi_word == "inf" {
            None
        } else {
            Some(
                Scalar::from_str(hi_word)
                    .map_err(|_| bad(1, "interval upper bound must be a rational or `inf`"))?,
            )
        };
        if words.next().is_some() {
            return Err(bad(1, "trailing input after interval bounds"));
        }
        Ok(CarrierDecl::Interval { lo, hi })
    } else if let Some(rest) = text.strip_prefix("members") {
        let rest = rest.trim();
        let cond_src = rest
            .strip_prefix("=>")
            .ok_or_else(|| bad(1, "expected `members => <condition>`"))?;
        let cond = parse_condition(cond_src.trim(), line_no, VarSet::VALUE_ONLY)?;
        Ok(CarrierDecl::Members { cond })
    } else {
        Err(bad(1, "unknown carrier kind; expected family, interval or members"))
    }
}

fn parse_claims_header(
    text: &str,
    line_no: usize,
) -> Result<(Option<(u32, Scalar)>, Option<String>), ParseDiagnostic> {
    let mut v: Option<u32> = None;
    let mut s: Option<Scalar> = None;
    let mut note_words: Vec<&str> = Vec::new();
    for word in text.split_whitespace() {
        if let Some(val) = word.strip_prefix("v=") {
            v = Some(val.parse().map_err(|_| ParseDiagnostic {
                line: line_no,
                column: 1,
                message: "claims header: v must be a positive integer".into(),
            })?);
        } else if let Some(val) = word.strip_prefix("s=") {
            s = Some(Scalar::from_str(val).map_err(|e| ParseDiagnostic {
                line: line_no,
                column: 1,
                message: format!("claims header: {e}"),
            })?);
        } else {
            note_words.push(word);
        }
    }
    let class = match (v, s) {
        (Some(v), Some(s)) => Some((v, s)),
        (None, None) => None,
        _ => {
            return Err(ParseDiagnostic {
                line: line_no,
                column: 1,
                message: "claims header needs both v= and s= (or neither)".into(),
            })
        }
    };
    let note = if note_words.is_empty() {
        None
    } else {
        Some(note_words.join(" "))
    };
    Ok((class, note))
}

fn split_header(line: &str) -> Option<(&str, &str)> {
    let idx = line.find(':')?;
    let key = line[..idx].trim();
    if !key.chars().all(|c| c.is_ascii_alphabetic() || c == '-' || c == '_') || key.is_empty() {
        return None;
    }
    Some((key, line[idx + 1..].trim()))
}

fn is_blank_or_comment(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Parse a space file: optional headers followed by distance clauses over
/// x, y, m, n. Every malformed line produces its own diagnostic.
pub fn parse_space_spec(source: &str) -> Result<SpaceSpec, Vec<ParseDiagnostic>> {
    let mut spec = SpaceSpec {
        name: None,
        carrier: None,
        claimed_class: None,
        completeness_note: None,
        clauses: Vec::new(),
    };
    let mut diags = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        if is_blank_or_comment(line) {
            continue;
        }
        // a header only when the line has no `=>` before the colon payload
        if let Some((key, rest)) = split_header(line) {
            let is_clause = line.find("=>").map(|a| a < line.find(':').unwrap()).unwrap_or(false);
            if !is_clause {
                match key {
                    "name" => {
                        spec.name = Some(rest.to_string());
                        continue;
                    }
                    "carrier" => {
                        match parse_carrier_decl(rest, line_no) {
                            Ok(c) => spec.carrier = Some(c),
                            Err(d) => diags.push(d),
                        }
                        continue;
                    }
                    "claims" => {
                        match parse_claims_header(rest, line_no) {
                            Ok((class, note)) => {
                                spec.claimed_class = class;
                                spec.completeness_note = note;
                            }
                            Err(d) => diags.push(d),
                        }
                        continue;
                    }
                    _ => {} // fall through: treat as clause text
                }
            }
        }
        match parse_clause_line(line, line_no, VarSet::SPACE) {
            Ok(c) => spec.clauses.push(c),
            Err(d) => diags.push(d),
        }
    }
    if spec.clauses.is_empty() && diags.is_empty() {
        diags.push(ParseDiagnostic {
            line: source.lines().count().max(1),
            column: 1,
            message: "no clauses".into(),
        });
    }
    if diags.is_empty() {
        Ok(spec)
    } else {
        Err(diags)
    }
}

/// Parse a map file: optional `name:` header plus clauses over x, n.
pub fn parse_map_spec(source: &str) -> Result<MapSpec, Vec<ParseDiagnostic>> {
    let mut spec = MapSpec { name: None, clauses: Vec::new() };
    let mut diags = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        if is_blank_or_comment(line) {
            continue;
        }
        if let Some((key, rest)) = split_header(line) {
            let is_clause = line.find("=>").map(|a| a < line.find(':').unwrap()).unwrap_or(false);
            if !is_clause && key == "name" {
                spec.name = Some(rest.to_string());
                continue;
            }
        }
        match parse_clause_line(line, line_no, VarSet::MAP) {
            Ok(c) => spec.clauses.push(c),
            Err(d) => diags.push(d),
        }
    }
    if spec.clauses.is_empty() && diags.is_empty() {
        diags.push(ParseDiagnostic {
            line: source.lines().count().max(1),
            column: 1,
            message: "no clauses".into(),
        });
    }
    if diags.is_empty() {
        Ok(spec)
    } else {
        Err(diags)
    }
}
