//! The four contractive conditions, checked pairwise over a finite sample
//! with distances drawn from the ambient space, plus an exact search for
//! feasible Reich coefficients.
//!
//! Strictness everywhere: a tie (lhs = rhs) is a failure. Reich and Kannan
//! run over ordered pairs because their endpoint terms are weighted
//! asymmetrically; the plain contractive and max conditions are symmetric
//! and run over unordered pairs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::space::{Point, SelfMap, Space, SpaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractionError {
    #[error("image of `{0}` escapes the checked sample; enlarge the sample")]
    ImageEscapesSample(String),
    #[error("coefficients must be non-negative and sum to 1")]
    BadCoefficients,
    #[error(transparent)]
    Space(SpaceError),
}

impl From<SpaceError> for ContractionError {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::PointNotInCarrier(l) | SpaceError::MapIncomplete(l) => {
                ContractionError::ImageEscapesSample(l)
            }
            other => ContractionError::Space(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    Banach,
    Reich,
    CiricMax,
    Kannan,
}

impl std::fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConditionKind::Banach => "banach",
            ConditionKind::Reich => "reich",
            ConditionKind::CiricMax => "ciric-max",
            ConditionKind::Kannan => "kannan",
        };
        write!(f, "{s}")
    }
}

/// Non-negative weights with a + b + c = 1. Kannan mode is a = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReichCoefficients {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl ReichCoefficients {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<Self, ContractionError> {
        let sum = &(&a + &b) + &c;
        if a.is_negative() || b.is_negative() || c.is_negative() || sum != Scalar::one() {
            return Err(ContractionError::BadCoefficients);
        }
        Ok(ReichCoefficients { a, b, c })
    }

    pub fn kannan(b: Scalar, c: Scalar) -> Result<Self, ContractionError> {
        ReichCoefficients::new(Scalar::zero(), b, c)
    }
}

/// First violating pair with both sides of the failed strict inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionWitness {
    pub x: Point,
    pub y: Point,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionOutcome {
    Pass,
    Fail(ContractionWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionVerdict {
    pub kind: ConditionKind,
    pub outcome: ContractionOutcome,
    pub pairs_checked: usize,
}

impl ContractionVerdict {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, ContractionOutcome::Pass)
    }

    pub fn witness(&self) -> Option<&ContractionWitness> {
        match &self.outcome {
            ContractionOutcome::Pass => None,
            ContractionOutcome::Fail(w) => Some(w),
        }
    }
}

/// Map images for every sample point, computed once up front.
fn images(
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
) -> Result<Vec<Point>, ContractionError> {
    sample.iter().map(|p| Ok(map.apply(space, p)?)).collect()
}

fn run_check(
    kind: ConditionKind,
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
    ordered: bool,
    rhs_of: impl Fn(usize, usize, &Scalar) -> Result<Scalar, ContractionError>,
) -> Result<ContractionVerdict, ContractionError> {
    let imgs = images(space, sample, map)?;
    let mut pairs_checked = 0;
    let mut check_pair = |i: usize, j: usize| -> Result<Option<ContractionWitness>, ContractionError> {
        pairs_checked += 1;
        let lhs = space.distance(&imgs[i], &imgs[j])?;
        let dxy = space.distance(&sample[i], &sample[j])?;
        let rhs = rhs_of(i, j, &dxy)?;
        if lhs < rhs {
            Ok(None)
        } else {
            Ok(Some(ContractionWitness {
                x: sample[i].clone(),
                y: sample[j].clone(),
                lhs,
                rhs,
            }))
        }
    };
    for i in 0..sample.len() {
        for j in 0..sample.len() {
            let admissible = if ordered { i != j } else { i < j };
            if !admissible || sample[i] == sample[j] {
                continue;
            }
            if let Some(w) = check_pair(i, j)? {
                return Ok(ContractionVerdict {
                    kind,
                    outcome: ContractionOutcome::Fail(w),
                    pairs_checked,
                });
            }
        }
    }
    Ok(ContractionVerdict { kind, outcome: ContractionOutcome::Pass, pairs_checked })
}

/// d(Tx, Ty) < d(x, y) for all distinct pairs of the sample.
pub fn check_banach_contractive(
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
) -> Result<ContractionVerdict, ContractionError> {
    run_check(ConditionKind::Banach, space, sample, map, false, |_, _, dxy| Ok(dxy.clone()))
}

/// d(Tx, Ty) < a d(x, y) + b d(x, Tx) + c d(y, Ty), ordered pairs.
pub fn check_reich(
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
    coeffs: &ReichCoefficients,
) -> Result<ContractionVerdict, ContractionError> {
    let imgs = images(space, sample, map)?;
    let self_dist: Vec<Scalar> = sample
        .iter()
        .zip(&imgs)
        .map(|(p, tp)| space.distance(p, tp))
        .collect::<Result<_, _>>()?;
    run_check(ConditionKind::Reich, space, sample, map, true, |i, j, dxy| {
        Ok(&(&(&coeffs.a * dxy) + &(&coeffs.b * &self_dist[i])) + &(&coeffs.c * &self_dist[j]))
    })
}

/// d(Tx, Ty) < max{d(x, y), d(x, Tx), d(y, Ty)}, unordered pairs.
pub fn check_ciric_max(
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
) -> Result<ContractionVerdict, ContractionError> {
    let imgs = images(space, sample, map)?;
    let self_dist: Vec<Scalar> = sample
        .iter()
        .zip(&imgs)
        .map(|(p, tp)| space.distance(p, tp))
        .collect::<Result<_, _>>()?;
    run_check(ConditionKind::CiricMax, space, sample, map, false, |i, j, dxy| {
        Ok(dxy
            .clone()
            .max(self_dist[i].clone())
            .max(self_dist[j].clone()))
    })
}

/// d(Tx, Ty) < b d(x, Tx) + c d(y, Ty) with b + c = 1, ordered pairs.
pub fn check_kannan(
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
    b: Scalar,
    c: Scalar,
) -> Result<ContractionVerdict, ContractionError> {
    let coeffs = ReichCoefficients::kannan(b, c)?;
    let verdict = check_reich(space, sample, map, &coeffs)?;
    Ok(ContractionVerdict { kind: ConditionKind::Kannan, ..verdict })
}

/// Result of the exact feasibility search over the coefficient simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReichSearch {
    Feasible {
        coeffs: ReichCoefficients,
        /// Minimum slack of the strict system at the returned point; > 0.
        slack: Scalar,
    },
    Infeasible {
        /// Pairs whose constraints are tight or violated at the best point.
        certificate: Vec<(Point, Point)>,
    },
}

/// One pairwise constraint a*P + b*Q + c*R > L as slack coefficients over
/// the free variables (a, b) with c = 1 - a - b:
/// f(a,b) = (P-R) a + (Q-R) b + (R - L).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct SlackPlane {
    ca: Scalar,
    cb: Scalar,
    c0: Scalar,
}

impl SlackPlane {
    fn eval(&self, a: &Scalar, b: &Scalar) -> Scalar {
        &(&(&self.ca * a) + &(&self.cb * b)) + &self.c0
    }
}

fn in_simplex(a: &Scalar, b: &Scalar) -> bool {
    !a.is_negative() && !b.is_negative() && (a + b) <= Scalar::one()
}

/// Solve the 2x2 linear system given by two lines c_a a + c_b b + c_0 = 0.
fn intersect(l1: (&Scalar, &Scalar, &Scalar), l2: (&Scalar, &Scalar, &Scalar)) -> Option<(Scalar, Scalar)> {
    let det = &(l1.0 * l2.1) - &(l1.1 * l2.0);
    if det.is_zero() {
        return None;
    }
    // Cramer: a = (-c0_1 * cb_2 + c0_2 * cb_1) / det, symmetric for b
    let a = &(&(-l1.2) * l2.1) - &(&(-l2.2) * l1.1);
    let b = &(l1.0 * &(-l2.2)) - &(l2.0 * &(-l1.2));
    Some((&a / &det, &b / &det))
}

/// Decide whether any (a, b, c) on the open simplex satisfies every strict
/// pairwise Reich constraint, by exactly maximising the minimum slack over
/// the closed simplex and testing the maximum against zero. Candidate
/// optima are simplex vertices, pairwise slack-plane bisectors crossed with
/// the simplex edges, and bisector/bisector intersections from plane
/// triples.
pub fn find_reich_coefficients(
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
) -> Result<ReichSearch, ContractionError> {
    let imgs = images(space, sample, map)?;
    let self_dist: Vec<Scalar> = sample
        .iter()
        .zip(&imgs)
        .map(|(p, tp)| space.distance(p, tp))
        .collect::<Result<_, _>>()?;

    let mut planes: BTreeSet<SlackPlane> = BTreeSet::new();
    let mut pair_of_plane: Vec<(SlackPlane, (Point, Point))> = Vec::new();
    for i in 0..sample.len() {
        for j in 0..sample.len() {
            if i == j || sample[i] == sample[j] {
                continue;
            }
            let lhs = space.distance(&imgs[i], &imgs[j])?;
            let p_coef = space.distance(&sample[i], &sample[j])?;
            let q_coef = self_dist[i].clone();
            let r_coef = self_dist[j].clone();
            let plane = SlackPlane {
                ca: &p_coef - &r_coef,
                cb: &q_coef - &r_coef,
                c0: &r_coef - &lhs,
            };
            if planes.insert(plane.clone()) {
                pair_of_plane.push((plane, (sample[i].clone(), sample[j].clone())));
            }
        }
    }
    let planes: Vec<SlackPlane> = planes.into_iter().collect();
    if planes.is_empty() {
        // no distinct pairs: anything works
        return Ok(ReichSearch::Feasible {
            coeffs: ReichCoefficients::new(Scalar::one(), Scalar::zero(), Scalar::zero())?,
            slack: Scalar::one(),
        });
    }

    let zero = Scalar::zero();
    let one = Scalar::one();
    let mut candidates: BTreeSet<(Scalar, Scalar)> = BTreeSet::new();
    candidates.insert((zero.clone(), zero.clone()));
    candidates.insert((one.clone(), zero.clone()));
    candidates.insert((zero.clone(), one.clone()));

    // simplex edges as lines: a = 0, b = 0, a + b = 1
    let edges: [(Scalar, Scalar, Scalar); 3] = [
        (one.clone(), zero.clone(), zero.clone()),
        (zero.clone(), one.clone(), zero.clone()),
        (one.clone(), one.clone(), -one.clone()),
    ];

    let bisector = |p: &SlackPlane, q: &SlackPlane| {
        (&p.ca - &q.ca, &p.cb - &q.cb, &p.c0 - &q.c0)
    };

    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            let (ba, bb, b0) = bisector(&planes[i], &planes[j]);
            for (ea, eb, e0) in &edges {
                if let Some((a, b)) = intersect((&ba, &bb, &b0), (ea, eb, e0)) {
                    if in_simplex(&a, &b) {
                        candidates.insert((a, b));
                    }
                }
            }
            for k in j + 1..planes.len() {
                let (ca, cb, c0) = bisector(&planes[j], &planes[k]);
                if let Some((a, b)) = intersect((&ba, &bb, &b0), (&ca, &cb, &c0)) {
                    if in_simplex(&a, &b) {
                        candidates.insert((a, b));
                    }
                }
            }
        }
    }

    let min_slack = |a: &Scalar, b: &Scalar| -> Scalar {
        planes
            .iter()
            .map(|p| p.eval(a, b))
            .min()
            .expect("at least one plane")
    };

    let mut best: Option<(Scalar, Scalar, Scalar)> = None; // (slack, a, b)
    for (a, b) in &candidates {
        let slack = min_slack(a, b);
        let better = best.as_ref().map(|(s, _, _)| &slack > s).unwrap_or(true);
        if better {
            best = Some((slack, a.clone(), b.clone()));
        }
    }
    let (slack, a, b) = best.expect("candidate set is never empty");
    if slack.is_positive() {
        let c = &(&one - &a) - &b;
        Ok(ReichSearch::Feasible {
            coeffs: ReichCoefficients::new(a, b, c)?,
            slack,
        })
    } else {
        let certificate = pair_of_plane
            .iter()
            .filter(|(p, _)| !p.eval(&a, &b).is_positive())
            .map(|(_, pair)| pair.clone())
            .collect();
        Ok(ReichSearch::Infeasible { certificate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_map_spec, parse_space_spec};
    use crate::space::{FiniteSpace, GeneratedSpace, Selector};

    fn rat(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn reciprocal() -> (GeneratedSpace, SelfMap) {
        let space = GeneratedSpace::from_spec(
            parse_space_spec(
                "carrier: family n from 2 => 1/n\n\
                 abs(m - n) != 1 => abs(m - n)\nabs(m - n) = 1 => 1/2\n",
            )
            .unwrap(),
        )
        .unwrap();
        let map = SelfMap::from_spec(parse_map_spec("n = 2 => 1/4\nn > 2 => 1/2\n").unwrap());
        (space, map)
    }

    fn powers() -> (GeneratedSpace, SelfMap) {
        let space = GeneratedSpace::from_spec(
            parse_space_spec(
                "carrier: members => x = 0 or power(2, x) or power(3, x)\n\
                 x = y => 0\n\
                 x != 0 and y = 0 => 1/x\n\
                 x = 0 and y != 0 => 1/y\n\
                 (power(2, x) and power(3, y)) or (power(3, x) and power(2, y)) => 1/x + 1/y\n\
                 otherwise => 1\n",
            )
            .unwrap(),
        )
        .unwrap();
        let map = SelfMap::from_spec(parse_map_spec("even(x) => 0\nodd(x) => 2\n").unwrap());
        (space, map)
    }

    fn halving() -> (GeneratedSpace, SelfMap) {
        let space = GeneratedSpace::from_spec(
            parse_space_spec(
                "carrier: interval 0 inf\nx = y => 0\n\
                 x > 0 and y > 0 => 1 + 2*x + 2*y\nx != 0 and y = 0 => x\notherwise => y\n",
            )
            .unwrap(),
        )
        .unwrap();
        let map = SelfMap::from_spec(parse_map_spec("x = 0 => 1/2\notherwise => x/2\n").unwrap());
        (space, map)
    }

    fn piecewise_slope() -> (GeneratedSpace, SelfMap) {
        let space = GeneratedSpace::from_spec(
            parse_space_spec("carrier: interval 0 5\notherwise => abs(x - y)\n").unwrap(),
        )
        .unwrap();
        let map =
            SelfMap::from_spec(parse_map_spec("x <= 4 => x/2\notherwise => -2*x + 10\n").unwrap());
        (space, map)
    }

    fn points(space: &GeneratedSpace, values: &[&str]) -> Vec<Point> {
        values
            .iter()
            .map(|v| space.resolve_value(&rat(v)).unwrap())
            .collect()
    }

    fn index_points(space: &GeneratedSpace, a: i64, b: i64) -> Vec<Point> {
        space
            .truncate(&Selector::IndexRange(a, b))
            .unwrap()
            .points()
            .to_vec()
    }

    #[test]
    fn reciprocal_map_is_not_contractive_at_first_adjacent_pair() {
        let (space, map) = reciprocal();
        let sample = index_points(&space, 2, 9);
        let v = check_banach_contractive(&space, &sample, &map).unwrap();
        let w = v.witness().expect("must fail");
        assert_eq!((w.x.label(), w.y.label()), ("1/2", "1/3"));
        assert_eq!(w.lhs, rat("2"));
        assert_eq!(w.rhs, rat("1/2"));
    }

    #[test]
    fn parity_map_is_not_contractive_at_zero_three() {
        let (space, map) = powers();
        let sample = points(&space, &["0", "2", "3", "4", "8", "9", "16", "27"]);
        let v = check_banach_contractive(&space, &sample, &map).unwrap();
        let w = v.witness().expect("must fail");
        assert_eq!((w.x.label(), w.y.label()), ("0", "3"));
        assert_eq!(w.lhs, rat("1/2"));
        assert_eq!(w.rhs, rat("1/3"));
    }

    #[test]
    fn identity_fails_banach_by_tie() {
        let (space, _) = reciprocal();
        let window = space.truncate(&Selector::IndexRange(2, 4)).unwrap();
        let id = SelfMap::identity(window.points());
        let v = check_banach_contractive(&window, window.points(), &id).unwrap();
        let w = v.witness().expect("identity cannot be contractive");
        assert_eq!(w.lhs, w.rhs);
    }

    // The one-third Reich inequality is violated on the reciprocal-carrier
    // example: at the ordered pair (1/2, 1/3) the left side is 2 while the
    // right side is (1/2 + 2 + 1/2)/3 = 1. Exact arithmetic refutes the
    // condition, so the checker must report that witness.
    #[test]
    fn reciprocal_map_fails_one_third_reich_with_exact_witness() {
        let (space, map) = reciprocal();
        let sample = index_points(&space, 2, 12);
        let coeffs =
            ReichCoefficients::new(rat("1/3"), rat("1/3"), rat("1/3")).unwrap();
        let v = check_reich(&space, &sample, &map, &coeffs).unwrap();
        let w = v.witness().expect("the strict inequality fails at (1/2, 1/3)");
        assert_eq!((w.x.label(), w.y.label()), ("1/2", "1/3"));
        assert_eq!(w.lhs, rat("2"));
        assert_eq!(w.rhs, rat("1"));
    }

    #[test]
    fn affine_space_satisfies_one_third_reich_on_sample() {
        let space = GeneratedSpace::from_spec(
            parse_space_spec(
                "carrier: interval 0 inf\nx = y => 0\nx != 0 and y = 0 => 2*x\n\
                 x = 0 and y != 0 => 2*y\notherwise => 4*(x + y) + 1\n",
            )
            .unwrap(),
        )
        .unwrap();
        let map =
            SelfMap::from_spec(parse_map_spec("x < 1 => 0\nx >= 1 => (x + 1)/4\n").unwrap());
        let sample = points(&space, &["0", "1/2", "3/4", "1", "2"]);
        let coeffs =
            ReichCoefficients::new(rat("1/3"), rat("1/3"), rat("1/3")).unwrap();
        let v = check_reich(&space, &sample, &map, &coeffs).unwrap();
        assert!(v.passed(), "witness: {:?}", v.witness());

        // spot value at the ordered pair (1, 2)
        let one = space.resolve_value(&rat("1")).unwrap();
        let two = space.resolve_value(&rat("2")).unwrap();
        let t_one = map.apply(&space, &one).unwrap();
        let t_two = map.apply(&space, &two).unwrap();
        assert_eq!(space.distance(&t_one, &t_two).unwrap(), rat("6"));
        let rhs = (space.distance(&one, &two).unwrap()
            + space.distance(&one, &t_one).unwrap()
            + space.distance(&two, &t_two).unwrap())
            / rat("3");
        assert_eq!(rhs, rat("32/3"));
    }

    #[test]
    fn constant_map_passes_reich_with_pure_a() {
        let (space, _) = reciprocal();
        let window = space.truncate(&Selector::IndexRange(2, 6)).unwrap();
        let target = window.point(0).clone();
        let constant = SelfMap::from_table(
            "const",
            window.points().iter().map(|p| (p.clone(), target.clone())).collect(),
        );
        let coeffs = ReichCoefficients::new(rat("1"), rat("0"), rat("0")).unwrap();
        let v = check_reich(&window, window.points(), &constant, &coeffs).unwrap();
        assert!(v.passed());
    }

    // The halving map fails the max condition near zero: at (0, 1/4) the
    // left side is 9/4 against a right side of max{1/4, 1/2, 7/4} = 7/4,
    // and at (0, 1/2) the two sides tie at 5/2.
    #[test]
    fn halving_map_fails_ciric_max_with_exact_witness() {
        let (space, map) = halving();
        let sample = points(&space, &["0", "1/4", "1/2", "1", "2"]);
        let v = check_ciric_max(&space, &sample, &map).unwrap();
        let w = v.witness().expect("the strict inequality fails at (0, 1/4)");
        assert_eq!((w.x.label(), w.y.label()), ("0", "1/4"));
        assert_eq!(w.lhs, rat("9/4"));
        assert_eq!(w.rhs, rat("7/4"));

        // away from zero the condition does hold
        let tail = points(&space, &["1/4", "1/2", "1", "2", "4"]);
        assert!(check_ciric_max(&space, &tail, &map).unwrap().passed());
    }

    #[test]
    fn slope_map_satisfies_ciric_max_on_sample() {
        let (space, map) = piecewise_slope();
        let sample = points(&space, &["0", "1", "2", "5/2", "4", "9/2", "5"]);
        assert!(check_ciric_max(&space, &sample, &map).unwrap().passed());
        let small = points(&space, &["0", "1", "2", "4", "5"]);
        assert!(check_ciric_max(&space, &small, &map).unwrap().passed());
    }

    #[test]
    fn identity_fails_ciric_and_kannan() {
        let (space, _) = reciprocal();
        let window = space.truncate(&Selector::IndexRange(2, 4)).unwrap();
        let id = SelfMap::identity(window.points());
        assert!(!check_ciric_max(&window, window.points(), &id).unwrap().passed());
        let v = check_kannan(&window, window.points(), &id, rat("1/2"), rat("1/2")).unwrap();
        let w = v.witness().unwrap();
        assert!(w.rhs.is_zero());
        assert!(w.lhs.is_positive());
    }

    #[test]
    fn two_point_collapse_passes_kannan() {
        let table = vec![
            vec![rat("0"), rat("1")],
            vec![rat("1"), rat("0")],
        ];
        let space = FiniteSpace::from_labels(&["p", "q"], table).unwrap();
        let p = space.point(0).clone();
        let map = SelfMap::from_table(
            "collapse",
            space.points().iter().map(|q| (q.clone(), p.clone())).collect(),
        );
        let v = check_kannan(&space, space.points(), &map, rat("1/2"), rat("1/2")).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn image_escape_is_reported_on_finite_window() {
        let (space, map) = reciprocal();
        // window without index 4: the image of 1/2 = 1/4 is missing
        let window = space.truncate(&Selector::Points(vec![rat("1/2"), rat("1/3")])).unwrap();
        let err = check_banach_contractive(&window, window.points(), &map).unwrap_err();
        assert!(matches!(err, ContractionError::ImageEscapesSample(l) if l == "1/4"));
    }

    #[test]
    fn reich_specialisations_agree() {
        let (space, map) = reciprocal();
        let sample = index_points(&space, 2, 7);
        let banach = check_banach_contractive(&space, &sample, &map).unwrap();
        let pure_a = ReichCoefficients::new(rat("1"), rat("0"), rat("0")).unwrap();
        let reich = check_reich(&space, &sample, &map, &pure_a).unwrap();
        assert_eq!(banach.passed(), reich.passed());

        let bc = ReichCoefficients::kannan(rat("1/3"), rat("2/3")).unwrap();
        let kannan = check_kannan(&space, &sample, &map, rat("1/3"), rat("2/3")).unwrap();
        let reich0 = check_reich(&space, &sample, &map, &bc).unwrap();
        assert_eq!(kannan.passed(), reich0.passed());
        assert_eq!(kannan.witness(), reich0.witness());
    }

    #[test]
    fn constant_map_search_is_feasible_and_reverifies() {
        let (space, _) = reciprocal();
        let window = space.truncate(&Selector::IndexRange(2, 6)).unwrap();
        let target = window.point(0).clone();
        let constant = SelfMap::from_table(
            "const",
            window.points().iter().map(|p| (p.clone(), target.clone())).collect(),
        );
        match find_reich_coefficients(&window, window.points(), &constant).unwrap() {
            ReichSearch::Feasible { coeffs, slack } => {
                assert!(slack.is_positive());
                let v = check_reich(&window, window.points(), &constant, &coeffs).unwrap();
                assert!(v.passed());
            }
            ReichSearch::Infeasible { .. } => panic!("constant maps admit coefficients"),
        }
    }

    #[test]
    fn identity_search_is_infeasible() {
        let (space, _) = reciprocal();
        let window = space.truncate(&Selector::IndexRange(2, 5)).unwrap();
        let id = SelfMap::identity(window.points());
        match find_reich_coefficients(&window, window.points(), &id).unwrap() {
            ReichSearch::Infeasible { certificate } => assert!(!certificate.is_empty()),
            ReichSearch::Feasible { .. } => panic!("identity admits no coefficients"),
        }
    }

    // The pair (1/2, 1/3) pins the whole simplex: its constraint reads
    // 2 < a/2 + 2b + c/2 = (3b + 1)/2, which needs b > 1. The search must
    // therefore return Infeasible on any window containing indices 2 and 3,
    // and a dense exact grid confirms it.
    #[test]
    fn reciprocal_map_search_is_infeasible_with_grid_confirmation() {
        let (space, map) = reciprocal();
        let sample = index_points(&space, 2, 8);
        let result = find_reich_coefficients(&space, &sample, &map).unwrap();
        let certificate = match result {
            ReichSearch::Infeasible { certificate } => certificate,
            ReichSearch::Feasible { coeffs, .. } => {
                panic!("claimed feasible at {coeffs:?}")
            }
        };
        assert!(certificate
            .iter()
            .any(|(x, y)| x.label() == "1/2" && y.label() == "1/3"));

        // independent dense-grid oracle, denominator 64
        let mut found = false;
        'outer: for i in 0..=64i64 {
            for j in 0..=(64 - i) {
                let a = Scalar::ratio(i, 64);
                let b = Scalar::ratio(j, 64);
                let c = &(&Scalar::one() - &a) - &b;
                let coeffs = ReichCoefficients::new(a, b, c).unwrap();
                if check_reich(&space, &sample, &map, &coeffs).unwrap().passed() {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(!found, "grid found a feasible point the LP missed");
    }

    #[test]
    fn feasible_search_on_a_genuinely_reich_map() {
        // collapse toward zero on a plain absolute-difference window
        let values: Vec<Scalar> = ["0", "1", "2", "4"].iter().map(|s| rat(s)).collect();
        let space = FiniteSpace::from_values_abs(&values).unwrap();
        let zero = Point::from_value(rat("0"));
        let entries = space
            .points()
            .iter()
            .map(|p| {
                let image = if p.label() == "4" {
                    Point::from_value(rat("1"))
                } else {
                    zero.clone()
                };
                (p.clone(), image)
            })
            .collect();
        let map = SelfMap::from_table("collapse", entries);
        match find_reich_coefficients(&space, space.points(), &map).unwrap() {
            ReichSearch::Feasible { coeffs, slack } => {
                assert!(slack.is_positive());
                assert!(check_reich(&space, space.points(), &map, &coeffs).unwrap().passed());
            }
            ReichSearch::Infeasible { .. } => panic!("this collapse admits coefficients"),
        }
    }
}
