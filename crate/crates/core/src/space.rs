//! Point, finite distance tables, generated (rule-defined) spaces and
//! self-maps.
//!
//! A `FiniteSpace` is a validated square table: zero diagonal, symmetric,
//! positive off the diagonal. A `GeneratedSpace` pairs a carrier (indexed
//! family, interval, or membership predicate) with a piecewise distance rule
//! and is only ever probed lazily; `truncate` snapshots a finite window of it
//! into a table. Everything is immutable after construction.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::dsl::{self, CarrierDecl, Env, EvalError, MapSpec, SpaceSpec};
use crate::scalar::Scalar;

/// A carrier element: canonical label, plus the numeric value and family
/// index when the carrier provides them. Identity is the label, which is the
/// canonical rendering of the value whenever a value exists.
#[derive(Debug, Clone)]
pub struct Point {
    label: String,
    value: Option<Scalar>,
    index: Option<i64>,
}

impl Point {
    pub fn from_value(value: Scalar) -> Point {
        Point {
            label: value.to_string(),
            value: Some(value),
            index: None,
        }
    }

    pub fn indexed(index: i64, value: Scalar) -> Point {
        Point {
            label: value.to_string(),
            value: Some(value),
            index: Some(index),
        }
    }

    pub fn labeled(label: impl Into<String>) -> Point {
        let label = label.into();
        let value = label.parse::<Scalar>().ok();
        Point { label, value, index: None }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self) -> Option<&Scalar> {
        self.value.as_ref()
    }

    pub fn index(&self) -> Option<i64> {
        self.index
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}

impl Eq for Point {}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.label.cmp(&other.label)
    }
}

impl std::hash::Hash for Point {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.label.hash(state);
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("table is not square or does not match the point count")]
    TableShape,
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("asymmetric table at ({0}, {1})")]
    AsymmetricTable(usize, usize),
    #[error("negative distance at ({0}, {1})")]
    NegativeDistance(usize, usize),
    #[error("zero distance between distinct points at ({0}, {1})")]
    ZeroOffDiagonal(usize, usize),
    #[error("nonzero diagonal at ({0})")]
    NonzeroDiagonal(usize),
    #[error("point `{0}` is not in the carrier")]
    PointNotInCarrier(String),
    #[error("generated rule violates an axiom on ({p}, {q}): {detail}")]
    LazyAxiomViolation { p: String, q: String, detail: String },
    #[error("empty selector")]
    EmptySelector,
    #[error("selector is out of the carrier range")]
    SelectorOutOfRange,
    #[error("map rule has no entry for `{0}`")]
    MapIncomplete(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Read access shared by finite and generated spaces.
pub trait Space {
    fn distance(&self, p: &Point, q: &Point) -> Result<Scalar, SpaceError>;
    /// Find the carrier point with the given value.
    fn resolve_value(&self, v: &Scalar) -> Result<Point, SpaceError>;
    fn contains(&self, p: &Point) -> bool;
}

/// Validated finite distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    points: Vec<Point>,
    table: Vec<Vec<Scalar>>,
}

impl FiniteSpace {
    /// Build and validate. Checks, in order per cell: diagonal zero,
    /// symmetry, non-negativity, and positivity off the diagonal.
    pub fn new(points: Vec<Point>, table: Vec<Vec<Scalar>>) -> Result<FiniteSpace, SpaceError> {
        let n = points.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(SpaceError::TableShape);
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.label().to_string()) {
                return Err(SpaceError::DuplicateLabel(p.label().to_string()));
            }
        }
        for i in 0..n {
            if !table[i][i].is_zero() {
                return Err(SpaceError::NonzeroDiagonal(i));
            }
            for j in 0..n {
                if table[i][j] != table[j][i] {
                    return Err(SpaceError::AsymmetricTable(i.min(j), i.max(j)));
                }
                if table[i][j].is_negative() {
                    return Err(SpaceError::NegativeDistance(i, j));
                }
                if i != j && table[i][j].is_zero() {
                    return Err(SpaceError::ZeroOffDiagonal(i.min(j), i.max(j)));
                }
            }
        }
        Ok(FiniteSpace { points, table })
    }

    /// Convenience constructor from textual labels; labels that read as
    /// rationals get values attached.
    pub fn from_labels(
        labels: &[&str],
        table: Vec<Vec<Scalar>>,
    ) -> Result<FiniteSpace, SpaceError> {
        let points = labels.iter().map(|l| Point::labeled(*l)).collect();
        FiniteSpace::new(points, table)
    }

    /// Absolute-difference space over distinct rational values.
    pub fn from_values_abs(values: &[Scalar]) -> Result<FiniteSpace, SpaceError> {
        let points: Vec<Point> = values.iter().cloned().map(Point::from_value).collect();
        let table = values
            .iter()
            .map(|a| values.iter().map(|b| (a - b).abs()).collect())
            .collect();
        FiniteSpace::new(points, table)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn position(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    pub fn distance_by_position(&self, i: usize, j: usize) -> &Scalar {
        &self.table[i][j]
    }

    /// Number of distinct nonzero distance values in the table.
    pub fn distinct_distance_count(&self) -> usize {
        let mut set = BTreeSet::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                set.insert(self.table[i][j].clone());
            }
        }
        set.len()
    }
}

impl Space for FiniteSpace {
    fn distance(&self, p: &Point, q: &Point) -> Result<Scalar, SpaceError> {
        let i = self
            .position(p)
            .ok_or_else(|| SpaceError::PointNotInCarrier(p.label().to_string()))?;
        let j = self
            .position(q)
            .ok_or_else(|| SpaceError::PointNotInCarrier(q.label().to_string()))?;
        Ok(self.table[i][j].clone())
    }

    fn resolve_value(&self, v: &Scalar) -> Result<Point, SpaceError> {
        self.points
            .iter()
            .find(|p| p.value() == Some(v))
            .cloned()
            .ok_or_else(|| SpaceError::PointNotInCarrier(v.to_string()))
    }

    fn contains(&self, p: &Point) -> bool {
        self.position(p).is_some()
    }
}

/// Window selection for `truncate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// Family indices, inclusive on both ends.
    IndexRange(i64, i64),
    /// Explicit point values.
    Points(Vec<Scalar>),
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::IndexRange(a, b) => write!(f, "{a}..{b}"),
            Selector::Points(vs) => {
                let inner: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "{{{}}}", inner.join(","))
            }
        }
    }
}

impl Selector {
    /// Parse `A..B` or `{p, q, ...}`.
    pub fn parse(text: &str) -> Result<Selector, String> {
        let text = text.trim();
        if let Some(body) = text.strip_prefix('{') {
            let body = body
                .strip_suffix('}')
                .ok_or_else(|| "selector missing closing `}`".to_string())?;
            let mut vals = Vec::new();
            for part in body.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                vals.push(part.parse::<Scalar>().map_err(|e| e.to_string())?);
            }
            Ok(Selector::Points(vals))
        } else if let Some((a, b)) = text.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| "bad range start".to_string())?;
            let b: i64 = b.trim().parse().map_err(|_| "bad range end".to_string())?;
            Ok(Selector::IndexRange(a, b))
        } else {
            Err(format!("cannot read selector `{text}`"))
        }
    }
}

/// A carrier plus a piecewise distance rule. Axioms are checked lazily on
/// every evaluated pair; nothing global is ever claimed.
#[derive(Debug, Clone)]
pub struct GeneratedSpace {
    pub name: String,
    pub carrier: CarrierDecl,
    pub spec: SpaceSpec,
    pub completeness_note: Option<String>,
}

/// How far value resolution scans a family carrier before giving up.
const FAMILY_RESOLVE_WINDOW: i64 = 10_000;

impl GeneratedSpace {
    pub fn from_spec(spec: SpaceSpec) -> Result<GeneratedSpace, SpaceError> {
        let carrier = spec
            .carrier
            .clone()
            .ok_or_else(|| SpaceError::PointNotInCarrier("<no carrier declared>".into()))?;
        Ok(GeneratedSpace {
            name: spec.name.clone().unwrap_or_else(|| "space".into()),
            completeness_note: spec.completeness_note.clone(),
            carrier,
            spec,
        })
    }

    pub fn family_point(&self, index: i64) -> Result<Point, SpaceError> {
        match &self.carrier {
            CarrierDecl::Family { start, value } => {
                if index < *start {
                    return Err(SpaceError::SelectorOutOfRange);
                }
                let env = Env::for_pair(None, None, None, Some(index));
                let v = dsl::eval_expr(value, &env)?;
                Ok(Point::indexed(index, v))
            }
            _ => Err(SpaceError::SelectorOutOfRange),
        }
    }

    fn env_for(&self, p: &Point, q: &Point) -> Env {
        Env {
            x: p.value().cloned(),
            y: q.value().cloned(),
            m: p.index().map(Scalar::int),
            n: q.index().map(Scalar::int),
        }
    }

    fn raw_distance(&self, p: &Point, q: &Point) -> Result<Scalar, SpaceError> {
        Ok(dsl::eval_clauses(&self.spec.clauses, &self.env_for(p, q))?)
    }

    /// Evaluate the rule with the per-pair lazy axiom checks.
    pub fn checked_distance(&self, p: &Point, q: &Point) -> Result<Scalar, SpaceError> {
        let d = self.raw_distance(p, q)?;
        let violation = |detail: &str| SpaceError::LazyAxiomViolation {
            p: p.label().to_string(),
            q: q.label().to_string(),
            detail: detail.to_string(),
        };
        if d.is_negative() {
            return Err(violation("negative value"));
        }
        if p == q {
            if !d.is_zero() {
                return Err(violation("nonzero self-distance"));
            }
            return Ok(d);
        }
        if d.is_zero() {
            return Err(violation("zero distance for distinct points"));
        }
        let back = self.raw_distance(q, p)?;
        if back != d {
            return Err(violation("asymmetric values"));
        }
        Ok(d)
    }

    /// Materialise the selected window as a validated finite space.
    pub fn truncate(&self, selector: &Selector) -> Result<FiniteSpace, SpaceError> {
        let points: Vec<Point> = match selector {
            Selector::IndexRange(a, b) => {
                if a > b {
                    return Err(SpaceError::EmptySelector);
                }
                (*a..=*b)
                    .map(|i| self.family_point(i))
                    .collect::<Result<_, _>>()?
            }
            Selector::Points(values) => {
                if values.is_empty() {
                    return Err(SpaceError::EmptySelector);
                }
                values
                    .iter()
                    .map(|v| self.resolve_value(v))
                    .collect::<Result<_, _>>()?
            }
        };
        let n = points.len();
        let mut table = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = self.checked_distance(&points[i], &points[j])?;
            }
        }
        FiniteSpace::new(points, table)
    }
}

impl Space for GeneratedSpace {
    fn distance(&self, p: &Point, q: &Point) -> Result<Scalar, SpaceError> {
        if !self.contains(p) {
            return Err(SpaceError::PointNotInCarrier(p.label().to_string()));
        }
        if !self.contains(q) {
            return Err(SpaceError::PointNotInCarrier(q.label().to_string()));
        }
        self.checked_distance(p, q)
    }

    fn resolve_value(&self, v: &Scalar) -> Result<Point, SpaceError> {
        match &self.carrier {
            CarrierDecl::Family { start, value } => {
                let mut index = *start;
                while index < start.saturating_add(FAMILY_RESOLVE_WINDOW) {
                    let env = Env::for_pair(None, None, None, Some(index));
                    let candidate = dsl::eval_expr(value, &env)?;
                    if &candidate == v {
                        return Ok(Point::indexed(index, candidate));
                    }
                    index += 1;
                }
                Err(SpaceError::PointNotInCarrier(v.to_string()))
            }
            CarrierDecl::Interval { lo, hi } => {
                let inside = v >= lo && hi.as_ref().map(|h| v <= h).unwrap_or(true);
                if inside {
                    Ok(Point::from_value(v.clone()))
                } else {
                    Err(SpaceError::PointNotInCarrier(v.to_string()))
                }
            }
            CarrierDecl::Members { cond } => {
                let env = Env::for_pair(Some(v.clone()), None, None, None);
                if dsl::eval_cond(cond, &env)? {
                    Ok(Point::from_value(v.clone()))
                } else {
                    Err(SpaceError::PointNotInCarrier(v.to_string()))
                }
            }
        }
    }

    fn contains(&self, p: &Point) -> bool {
        match (&self.carrier, p.value()) {
            (CarrierDecl::Family { .. }, Some(v)) => self.resolve_value(v).is_ok(),
            (_, Some(v)) => self.resolve_value(v).is_ok(),
            (_, None) => false,
        }
    }
}

/// A total self-map on a carrier: either an explicit table or a piecewise
/// rule over the point value / index.
#[derive(Debug, Clone)]
pub struct SelfMap {
    pub name: String,
    rule: MapRule,
}

#[derive(Debug, Clone)]
enum MapRule {
    Table(Vec<(Point, Point)>),
    Piecewise(MapSpec),
}

impl SelfMap {
    pub fn from_table(name: impl Into<String>, entries: Vec<(Point, Point)>) -> SelfMap {
        SelfMap {
            name: name.into(),
            rule: MapRule::Table(entries),
        }
    }

    pub fn identity(points: &[Point]) -> SelfMap {
        SelfMap::from_table(
            "identity",
            points.iter().map(|p| (p.clone(), p.clone())).collect(),
        )
    }

    pub fn from_spec(spec: MapSpec) -> SelfMap {
        SelfMap {
            name: spec.name.clone().unwrap_or_else(|| "map".into()),
            rule: MapRule::Piecewise(spec),
        }
    }

    pub fn piecewise_spec(&self) -> Option<&MapSpec> {
        match &self.rule {
            MapRule::Piecewise(spec) => Some(spec),
            MapRule::Table(_) => None,
        }
    }

    /// Image of `p`. Piecewise rules evaluate first-match over (x, n) and
    /// resolve the resulting value back to a carrier point of `space`.
    pub fn apply(&self, space: &dyn Space, p: &Point) -> Result<Point, SpaceError> {
        match &self.rule {
            MapRule::Table(entries) => entries
                .iter()
                .find(|(from, _)| from == p)
                .map(|(_, to)| to.clone())
                .ok_or_else(|| SpaceError::MapIncomplete(p.label().to_string())),
            MapRule::Piecewise(spec) => {
                let env = Env {
                    x: p.value().cloned(),
                    y: None,
                    m: None,
                    n: p.index().map(Scalar::int),
                };
                let image_value = dsl::eval_clauses(&spec.clauses, &env)?;
                space.resolve_value(&image_value)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_space_spec;

    fn rat(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn reciprocal_space() -> GeneratedSpace {
        let src = "name: e2\ncarrier: family n from 2 => 1/n\n\
                   abs(m - n) != 1 => abs(m - n)\nabs(m - n) = 1 => 1/2\n";
        GeneratedSpace::from_spec(parse_space_spec(src).unwrap()).unwrap()
    }

    fn affine_space() -> GeneratedSpace {
        let src = "carrier: interval 0 inf\nx = y => 0\nx != 0 and y = 0 => 2*x\n\
                   x = 0 and y != 0 => 2*y\notherwise => 4*(x + y) + 1\n";
        GeneratedSpace::from_spec(parse_space_spec(src).unwrap()).unwrap()
    }

    fn shifted_space() -> GeneratedSpace {
        let src = "carrier: interval 0 inf\nx = y => 0\n\
                   x > 0 and y > 0 => 1 + 2*x + 2*y\nx != 0 and y = 0 => x\notherwise => y\n";
        GeneratedSpace::from_spec(parse_space_spec(src).unwrap()).unwrap()
    }

    #[test]
    fn make_finite_space_validates_reciprocal_window() {
        // adjacent indices sit 1/2 apart, everything else |m - n|
        let half = rat("1/2");
        let table = vec![
            vec![rat("0"), half.clone(), rat("2")],
            vec![half.clone(), rat("0"), half.clone()],
            vec![rat("2"), half.clone(), rat("0")],
        ];
        let space = FiniteSpace::from_labels(&["1/2", "1/3", "1/4"], table).unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(
            space
                .distance(&Point::labeled("1/2"), &Point::labeled("1/3"))
                .unwrap(),
            half
        );
    }

    #[test]
    fn one_point_space_is_fine() {
        let space = FiniteSpace::from_labels(&["p"], vec![vec![Scalar::zero()]]).unwrap();
        assert_eq!(space.len(), 1);
    }

    #[test]
    fn asymmetric_table_is_rejected_with_cell() {
        let table = vec![
            vec![rat("0"), rat("1")],
            vec![rat("2"), rat("0")],
        ];
        let err = FiniteSpace::from_labels(&["a", "b"], table).unwrap_err();
        assert_eq!(err, SpaceError::AsymmetricTable(0, 1));
    }

    #[test]
    fn invalid_tables_name_the_offence() {
        let neg = vec![
            vec![rat("0"), rat("-1")],
            vec![rat("-1"), rat("0")],
        ];
        assert_eq!(
            FiniteSpace::from_labels(&["a", "b"], neg).unwrap_err(),
            SpaceError::NegativeDistance(0, 1)
        );
        let zero_off = vec![
            vec![rat("0"), rat("0")],
            vec![rat("0"), rat("0")],
        ];
        assert_eq!(
            FiniteSpace::from_labels(&["a", "b"], zero_off).unwrap_err(),
            SpaceError::ZeroOffDiagonal(0, 1)
        );
        let diag = vec![
            vec![rat("1"), rat("1")],
            vec![rat("1"), rat("0")],
        ];
        assert_eq!(
            FiniteSpace::from_labels(&["a", "b"], diag).unwrap_err(),
            SpaceError::NonzeroDiagonal(0)
        );
    }

    #[test]
    fn generated_distance_and_point_resolution() {
        let space = reciprocal_space();
        let p = space.resolve_value(&rat("1/2")).unwrap();
        let q = space.resolve_value(&rat("1/3")).unwrap();
        assert_eq!(p.index(), Some(2));
        assert_eq!(space.distance(&p, &q).unwrap(), rat("1/2"));
        assert_eq!(space.distance(&p, &p).unwrap(), Scalar::zero());

        let affine = affine_space();
        let one = affine.resolve_value(&rat("1")).unwrap();
        let two = affine.resolve_value(&rat("2")).unwrap();
        assert_eq!(affine.distance(&one, &two).unwrap(), rat("13"));
    }

    #[test]
    fn truncate_matches_rule_and_validates() {
        let space = reciprocal_space();
        let window = space.truncate(&Selector::IndexRange(2, 6)).unwrap();
        assert_eq!(window.len(), 5);
        for i in 0..window.len() {
            for j in 0..window.len() {
                let direct = space
                    .checked_distance(window.point(i), window.point(j))
                    .unwrap();
                assert_eq!(&direct, window.distance_by_position(i, j));
            }
        }

        let shifted = shifted_space();
        let window = shifted
            .truncate(&Selector::Points(vec![rat("0"), rat("1/2"), rat("1")]))
            .unwrap();
        assert_eq!(
            window
                .distance(&Point::labeled("1/2"), &Point::labeled("1"))
                .unwrap(),
            rat("4")
        );
    }

    #[test]
    fn empty_selector_is_an_error() {
        let space = reciprocal_space();
        assert_eq!(
            space.truncate(&Selector::Points(vec![])).unwrap_err(),
            SpaceError::EmptySelector
        );
        assert_eq!(
            space.truncate(&Selector::IndexRange(5, 2)).unwrap_err(),
            SpaceError::EmptySelector
        );
    }

    #[test]
    fn lazy_axiom_violation_surfaces() {
        let src = "carrier: interval 0 inf\nx < y => 1\notherwise => 2\n";
        let bad = GeneratedSpace::from_spec(parse_space_spec(src).unwrap()).unwrap();
        let p = Point::from_value(rat("1"));
        let q = Point::from_value(rat("2"));
        let err = bad.checked_distance(&p, &q).unwrap_err();
        assert!(matches!(err, SpaceError::LazyAxiomViolation { .. }));
    }

    #[test]
    fn map_application_follows_first_match() {
        let space = reciprocal_space();
        let spec = crate::dsl::parse_map_spec("n = 2 => 1/4\nn > 2 => 1/2\n").unwrap();
        let map = SelfMap::from_spec(spec);
        let half = space.resolve_value(&rat("1/2")).unwrap();
        assert_eq!(map.apply(&space, &half).unwrap(), Point::labeled("1/4"));

        let affine = affine_space();
        let t = crate::dsl::parse_map_spec("x < 1 => 0\nx >= 1 => (x + 1)/4\n").unwrap();
        let t = SelfMap::from_spec(t);
        let one = affine.resolve_value(&rat("1")).unwrap();
        assert_eq!(t.apply(&affine, &one).unwrap(), Point::labeled("1/2"));
    }

    #[test]
    fn identity_map_fixes_everything() {
        let space = reciprocal_space();
        let window = space.truncate(&Selector::IndexRange(2, 5)).unwrap();
        let id = SelfMap::identity(window.points());
        for p in window.points() {
            assert_eq!(&id.apply(&window, p).unwrap(), p);
        }
    }

    #[test]
    fn nonexhaustive_map_reports_no_clause() {
        let affine = affine_space();
        let t = crate::dsl::parse_map_spec("x > 5 => 0\n").unwrap();
        let t = SelfMap::from_spec(t);
        let one = affine.resolve_value(&rat("1")).unwrap();
        assert!(matches!(
            t.apply(&affine, &one).unwrap_err(),
            SpaceError::Eval(EvalError::NoClauseMatches { .. })
        ));
    }

    #[test]
    fn map_image_outside_carrier_is_flagged() {
        let space = reciprocal_space();
        // 2/3 is not of the form 1/n
        let spec = crate::dsl::parse_map_spec("otherwise => 2/3\n").unwrap();
        let map = SelfMap::from_spec(spec);
        let p = space.resolve_value(&rat("1/2")).unwrap();
        assert!(matches!(
            map.apply(&space, &p).unwrap_err(),
            SpaceError::PointNotInCarrier(_)
        ));
    }
}
