//! The constructive incompleteness device: from a Cauchy sequence that
//! converges to nothing in the sampled space, build a Kannan-type self-map
//! with no fixed point.
//!
//! Members of the sequence are sent forward along it, outsiders are sent
//! into it, with target indices chosen so that
//!
//!   (1)  d(u_m, u_{n'}) < b * d(u_{n0}, u_{n'})   for all m >= n' > n0
//!   (2)  d(u_m, u_nx)   < b * D(x, A)             for all m >= nx
//!
//! where A is the sequence's range and D(x, A) = inf over A of d(x, .).
//! The quantifier over all m is infinite; it is discharged either by a
//! monotone tail certificate (recorded values strictly decrease toward a
//! declared limit, and the unrecorded tail continues to do so) or, absent a
//! certificate, downgraded to prefix-relative verdicts.
//!
//! The chosen indices are always the smallest admissible ones, so the
//! construction is reproducible.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::contraction::{check_kannan, ContractionError, ContractionWitness};
use crate::dsl::{self, Env, Expr};
use crate::scalar::Scalar;
use crate::space::{FiniteSpace, Point, SelfMap, Space, SpaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EscapeError {
    #[error("contraction weight b must satisfy 0 < b < 1, got {0}")]
    InvalidContractionWeight(Scalar),
    #[error("sequence entries must be pairwise distinct; `{0}` repeats")]
    RepeatedSequenceEntry(String),
    #[error("sequence entry `{0}` is outside the seed space")]
    SequenceEscapesSpace(String),
    #[error("sample point `{0}` is outside the seed space")]
    SampleEscapesSpace(String),
    #[error("monotone certificate violated: `{0}` does not sit strictly between the limit and its predecessor")]
    CertificateViolated(String),
    #[error("no admissible index for `{0}` within the recorded prefix; extend the seed")]
    NoAdmissibleIndex(String),
    #[error("distance from `{0}` to the sequence range computes to 0; the seed converges to a sampled point and is rejected")]
    ZeroDistanceToRange(String),
    #[error("the certificate cannot bound the range gap of `{0}`; declare range_gap for it")]
    CertificateGapMissing(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Tail knowledge about the unrecorded part of the sequence.
#[derive(Debug, Clone, Default)]
pub struct TailCertificate {
    /// Declares that the recorded values strictly decrease and the full
    /// sequence keeps doing so with this infimum/limit.
    pub monotone_limit: Option<Scalar>,
    /// Expression in n: a strict upper bound on every d(u_m, u_n), m >= n.
    /// Only consulted when no monotone limit is declared.
    pub tail_upper: Option<Expr>,
    /// Per-point positive lower bounds on D(x, A), keyed by point label.
    /// A non-positive declared bound rejects the point.
    pub range_gap: BTreeMap<String, Scalar>,
}

impl TailCertificate {
    pub fn is_empty(&self) -> bool {
        self.monotone_limit.is_none() && self.tail_upper.is_none() && self.range_gap.is_empty()
    }
}

/// A recorded Cauchy-sequence prefix inside a space, with optional tail
/// certificate.
#[derive(Debug, Clone)]
pub struct CauchySeed {
    pub space: FiniteSpace,
    pub sequence: Vec<Point>,
    pub certificate: Option<TailCertificate>,
}

impl CauchySeed {
    pub fn new(
        space: FiniteSpace,
        sequence: Vec<Point>,
        certificate: Option<TailCertificate>,
    ) -> Result<CauchySeed, EscapeError> {
        let mut seen = std::collections::BTreeSet::new();
        for p in &sequence {
            if !space.contains(p) {
                return Err(EscapeError::SequenceEscapesSpace(p.label().to_string()));
            }
            if !seen.insert(p.label().to_string()) {
                return Err(EscapeError::RepeatedSequenceEntry(p.label().to_string()));
            }
        }
        if let Some(cert) = &certificate {
            if let Some(limit) = &cert.monotone_limit {
                let mut prev: Option<&Scalar> = None;
                for p in &sequence {
                    let v = p.value().ok_or_else(|| {
                        EscapeError::CertificateViolated(p.label().to_string())
                    })?;
                    let below_prev = prev.map(|q| v < q).unwrap_or(true);
                    if !below_prev || v <= limit {
                        return Err(EscapeError::CertificateViolated(p.label().to_string()));
                    }
                    prev = Some(v);
                }
            }
        }
        Ok(CauchySeed { space, sequence, certificate })
    }

    fn monotone_limit(&self) -> Option<&Scalar> {
        self.certificate.as_ref()?.monotone_limit.as_ref()
    }

    /// Strict upper bound on d(u_m, u_j) over all m >= j, when the
    /// certificate provides one.
    fn tail_bound(&self, j: usize) -> Result<Option<Scalar>, EscapeError> {
        if let Some(limit) = self.monotone_limit() {
            let vj = self.sequence[j].value().expect("validated above");
            return Ok(Some(vj - limit));
        }
        if let Some(cert) = &self.certificate {
            if let Some(expr) = &cert.tail_upper {
                let env = Env::for_pair(None, None, None, Some(j as i64));
                let bound = dsl::eval_expr(expr, &env).map_err(SpaceError::from)?;
                return Ok(Some(bound));
            }
        }
        Ok(None)
    }

    /// Exact or certified-lower-bound distance from an outsider to the full
    /// range. Returns the value to use for the inequality threshold and a
    /// flag telling whether it covers the unrecorded tail.
    fn range_gap(&self, x: &Point) -> Result<(Scalar, bool), EscapeError> {
        let prefix_min = self
            .sequence
            .iter()
            .map(|u| self.space.distance(x, u))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .min()
            .expect("sequence is nonempty");
        if prefix_min.is_zero() {
            return Err(EscapeError::ZeroDistanceToRange(x.label().to_string()));
        }
        if let Some(cert) = &self.certificate {
            if let Some(declared) = cert.range_gap.get(x.label()) {
                if !declared.is_positive() {
                    return Err(EscapeError::ZeroDistanceToRange(x.label().to_string()));
                }
                return Ok((declared.clone().min(prefix_min), true));
            }
        }
        if let Some(limit) = self.monotone_limit() {
            let xv = x
                .value()
                .ok_or_else(|| EscapeError::CertificateGapMissing(x.label().to_string()))?;
            let last = self.sequence.last().unwrap().value().unwrap();
            if xv == limit {
                // the unrecorded tail sinks to exactly x
                return Err(EscapeError::ZeroDistanceToRange(x.label().to_string()));
            }
            if xv < limit {
                // every tail value stays above the limit
                return Ok(((limit - xv).min(prefix_min), true));
            }
            if xv > last {
                // tail values sit below the last recorded one, so the
                // recorded minimum is the true infimum
                return Ok((prefix_min, true));
            }
            // x sits inside the band the unrecorded tail sweeps through
            return Err(EscapeError::CertificateGapMissing(x.label().to_string()));
        }
        Ok((prefix_min, false))
    }
}

/// One verified inequality instance backing a choice of target index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundInstance {
    /// Inequality (1): member n0 mapped to n'.
    Member {
        n0: usize,
        n_prime: usize,
        threshold: Scalar,
        tail_bound: Option<Scalar>,
    },
    /// Inequality (2): outsider mapped to nx, with the range gap used.
    Outsider {
        x: Point,
        nx: usize,
        gap: Scalar,
        threshold: Scalar,
        tail_bound: Option<Scalar>,
    },
}

/// The assembled fixed-point-free map together with its audit trail.
#[derive(Debug, Clone)]
pub struct EscapeConstruction {
    pub map: SelfMap,
    pub sample: Vec<Point>,
    /// (n0, n'0) for each sample point that is a sequence member.
    pub member_choice: Vec<(usize, usize)>,
    /// (point, nx) for each sample point outside the range.
    pub outsider_choice: Vec<(Point, usize)>,
    pub bounds_used: Vec<BoundInstance>,
    /// True when some quantifier was only checked on the recorded prefix.
    pub prefix_relative: bool,
}

/// Smallest index whose recorded-and-certified distances all stay strictly
/// below `threshold`, scanning from `from`.
fn smallest_admissible(
    seed: &CauchySeed,
    from: usize,
    threshold: &Scalar,
    prefix_relative: &mut bool,
) -> Result<Option<(usize, Option<Scalar>)>, EscapeError> {
    if !threshold.is_positive() {
        return Ok(None);
    }
    'candidates: for j in from..seed.sequence.len() {
        let uj = &seed.sequence[j];
        for m in j..seed.sequence.len() {
            let d = seed.space.distance(&seed.sequence[m], uj)?;
            if &d >= threshold {
                continue 'candidates;
            }
        }
        match seed.tail_bound(j)? {
            Some(bound) => {
                // certified: d(u_m, u_j) < bound for every m >= j, so
                // bound <= threshold closes the infinite quantifier
                if &bound <= threshold {
                    return Ok(Some((j, Some(bound))));
                }
            }
            None => {
                *prefix_relative = true;
                return Ok(Some((j, None)));
            }
        }
    }
    Ok(None)
}

/// Build the escape map over `sample` with Kannan weight b (c = 1 - b).
pub fn build_escape_map(
    seed: &CauchySeed,
    sample: &[Point],
    b: &Scalar,
) -> Result<EscapeConstruction, EscapeError> {
    if !b.is_positive() || b >= &Scalar::one() {
        return Err(EscapeError::InvalidContractionWeight(b.clone()));
    }
    for p in sample {
        if !seed.space.contains(p) {
            return Err(EscapeError::SampleEscapesSpace(p.label().to_string()));
        }
    }
    let mut entries = Vec::new();
    let mut member_choice = Vec::new();
    let mut outsider_choice = Vec::new();
    let mut bounds_used = Vec::new();
    let mut prefix_relative = false;

    for x in sample {
        let membership = seed.sequence.iter().position(|u| u == x);
        match membership {
            Some(n0) => {
                let mut chosen = None;
                for n_prime in n0 + 1..seed.sequence.len() {
                    let threshold =
                        b * &seed.space.distance(&seed.sequence[n0], &seed.sequence[n_prime])?;
                    // all m >= n' must stay strictly below the threshold
                    let mut ok = true;
                    for m in n_prime..seed.sequence.len() {
                        let d = seed
                            .space
                            .distance(&seed.sequence[m], &seed.sequence[n_prime])?;
                        if d >= threshold {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        continue;
                    }
                    match seed.tail_bound(n_prime)? {
                        Some(bound) => {
                            if bound <= threshold {
                                chosen = Some((n_prime, threshold, Some(bound)));
                                break;
                            }
                        }
                        None => {
                            prefix_relative = true;
                            chosen = Some((n_prime, threshold, None));
                            break;
                        }
                    }
                }
                let (n_prime, threshold, tail_bound) = chosen
                    .ok_or_else(|| EscapeError::NoAdmissibleIndex(x.label().to_string()))?;
                entries.push((x.clone(), seed.sequence[n_prime].clone()));
                member_choice.push((n0, n_prime));
                bounds_used.push(BoundInstance::Member { n0, n_prime, threshold, tail_bound });
            }
            None => {
                let (gap, covers_tail) = seed.range_gap(x)?;
                if !covers_tail {
                    prefix_relative = true;
                }
                let threshold = b * &gap;
                let found =
                    smallest_admissible(seed, 0, &threshold, &mut prefix_relative)?;
                let (nx, tail_bound) = found
                    .ok_or_else(|| EscapeError::NoAdmissibleIndex(x.label().to_string()))?;
                entries.push((x.clone(), seed.sequence[nx].clone()));
                outsider_choice.push((x.clone(), nx));
                bounds_used.push(BoundInstance::Outsider {
                    x: x.clone(),
                    nx,
                    gap,
                    threshold,
                    tail_bound,
                });
            }
        }
    }

    let map = SelfMap::from_table("escape", entries);
    let construction = EscapeConstruction {
        map,
        sample: sample.to_vec(),
        member_choice,
        outsider_choice,
        bounds_used,
        prefix_relative,
    };
    // structural fixed-point freedom: members move strictly forward along
    // a pairwise-distinct sequence, outsiders move into the range
    for p in &construction.sample {
        let image = construction.map.apply(&seed.space, p)?;
        debug_assert_ne!(&image, p);
    }
    Ok(construction)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EscapeVerdict {
    Pass {
        ordered_pairs: usize,
        member_member: usize,
        outsider_outsider: usize,
        mixed: usize,
    },
    FailKannan(ContractionWitness),
    FailFixedPoint(Point),
}

impl EscapeVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, EscapeVerdict::Pass { .. })
    }
}

/// Check the two promised properties over the sample: the Kannan condition
/// with weights (b, 1-b) holds strictly on every ordered pair, and no
/// sample point is fixed.
pub fn verify_escape_map(
    construction: &EscapeConstruction,
    seed: &CauchySeed,
    b: &Scalar,
) -> Result<EscapeVerdict, EscapeError> {
    for p in &construction.sample {
        let image = construction.map.apply(&seed.space, p)?;
        if &image == p {
            return Ok(EscapeVerdict::FailFixedPoint(p.clone()));
        }
    }
    let c = &Scalar::one() - b;
    let verdict = check_kannan(
        &seed.space,
        &construction.sample,
        &construction.map,
        b.clone(),
        c,
    )
    .map_err(|e| match e {
        ContractionError::Space(se) => EscapeError::Space(se),
        ContractionError::ImageEscapesSample(l) => {
            EscapeError::Space(SpaceError::PointNotInCarrier(l))
        }
        ContractionError::BadCoefficients => {
            EscapeError::InvalidContractionWeight(b.clone())
        }
    })?;
    if let Some(w) = verdict.witness() {
        return Ok(EscapeVerdict::FailKannan(w.clone()));
    }
    let is_member = |p: &Point| seed.sequence.contains(p);
    let mut mm = 0;
    let mut oo = 0;
    let mut mixed = 0;
    for (i, p) in construction.sample.iter().enumerate() {
        for (j, q) in construction.sample.iter().enumerate() {
            if i == j {
                continue;
            }
            match (is_member(p), is_member(q)) {
                (true, true) => mm += 1,
                (false, false) => oo += 1,
                _ => mixed += 1,
            }
        }
    }
    Ok(EscapeVerdict::Pass {
        ordered_pairs: mm + oo + mixed,
        member_member: mm,
        outsider_outsider: oo,
        mixed,
    })
}

/// The bundled demonstration seed: the reciprocals 1/2, 1/3, ..., 1/202
/// sinking toward 0 under the absolute-difference distance, with ten
/// non-member sample points. With `adjoin_limit` the limit 0 joins both the
/// space and the sample, which must then be rejected.
pub fn demo_seed(adjoin_limit: bool) -> (CauchySeed, Vec<Point>) {
    let seq_values: Vec<Scalar> = (0..=200).map(|k| Scalar::ratio(1, k + 2)).collect();
    let outsiders: Vec<Scalar> = [
        "2/5", "3/7", "2/7", "3/8", "2/9", "4/9", "5/11", "5/12", "7/15", "7/16",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();

    let mut all = seq_values.clone();
    all.extend(outsiders.iter().cloned());
    if adjoin_limit {
        all.push(Scalar::zero());
    }
    let space = FiniteSpace::from_values_abs(&all).expect("demo values are distinct");

    let sequence: Vec<Point> = seq_values.into_iter().map(Point::from_value).collect();
    let certificate = TailCertificate {
        monotone_limit: Some(Scalar::zero()),
        tail_upper: None,
        range_gap: BTreeMap::new(),
    };
    let seed = CauchySeed::new(space, sequence, Some(certificate)).expect("demo seed is valid");

    let mut sample: Vec<Point> = seed.sequence[..20].to_vec();
    sample.extend(outsiders.into_iter().map(Point::from_value));
    if adjoin_limit {
        sample.push(Point::from_value(Scalar::zero()));
    }
    (seed, sample)
}

/// A parsed seed file: the seed itself, the sample to build over, and the
/// declared weight.
#[derive(Debug, Clone)]
pub struct SeedFile {
    pub seed: CauchySeed,
    pub sample: Vec<Point>,
    pub b: Scalar,
}

/// Parse the demo seed format: header lines (`b:`, `limit:`, `tail_upper:`,
/// `range_gap: <point> <bound>`, `members-in-sample:`, `outsider:`), then
/// one sequence value per line. The space is the absolute-difference table
/// over all listed values.
pub fn parse_seed_file(source: &str) -> Result<SeedFile, String> {
    let mut b: Option<Scalar> = None;
    let mut limit: Option<Scalar> = None;
    let mut tail_upper: Option<Expr> = None;
    let mut range_gap: BTreeMap<String, Scalar> = BTreeMap::new();
    let mut members_in_sample: usize = 20;
    let mut outsiders: Vec<Scalar> = Vec::new();
    let mut seq_values: Vec<Scalar> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let line_no = idx + 1;
        let fail = |m: String| format!("line {line_no}: {m}");
        if let Some((key, rest)) = t.split_once(':') {
            let rest = rest.trim();
            match key.trim() {
                "b" => {
                    b = Some(rest.parse().map_err(|e| fail(format!("{e}")))?);
                    continue;
                }
                "limit" => {
                    limit = Some(rest.parse().map_err(|e| fail(format!("{e}")))?);
                    continue;
                }
                "tail_upper" => {
                    let expr = dsl::parse_expression(rest, line_no, dsl::VarSet::INDEX_ONLY)
                        .map_err(|d| fail(d.to_string()))?;
                    tail_upper = Some(expr);
                    continue;
                }
                "range_gap" => {
                    let mut words = rest.split_whitespace();
                    let point: Scalar = words
                        .next()
                        .ok_or_else(|| fail("range_gap needs a point".into()))?
                        .parse()
                        .map_err(|e| fail(format!("{e}")))?;
                    let bound: Scalar = words
                        .next()
                        .ok_or_else(|| fail("range_gap needs a bound".into()))?
                        .parse()
                        .map_err(|e| fail(format!("{e}")))?;
                    range_gap.insert(point.to_string(), bound);
                    continue;
                }
                "members-in-sample" => {
                    members_in_sample =
                        rest.parse().map_err(|_| fail("needs an integer".into()))?;
                    continue;
                }
                "outsider" => {
                    outsiders.push(rest.parse().map_err(|e| fail(format!("{e}")))?);
                    continue;
                }
                _ => {}
            }
        }
        seq_values.push(t.parse().map_err(|e| fail(format!("{e}")))?);
    }

    if seq_values.len() < 2 {
        return Err("seed needs at least two sequence entries".into());
    }
    let mut all = seq_values.clone();
    all.extend(outsiders.iter().cloned());
    let space = FiniteSpace::from_values_abs(&all).map_err(|e| e.to_string())?;
    let sequence: Vec<Point> = seq_values.into_iter().map(Point::from_value).collect();
    let certificate = TailCertificate { monotone_limit: limit, tail_upper, range_gap };
    let certificate = if certificate.is_empty() { None } else { Some(certificate) };
    let seed = CauchySeed::new(space, sequence, certificate).map_err(|e| e.to_string())?;

    let members = members_in_sample.min(seed.sequence.len());
    let mut sample: Vec<Point> = seed.sequence[..members].to_vec();
    sample.extend(outsiders.into_iter().map(Point::from_value));
    Ok(SeedFile {
        seed,
        sample,
        b: b.unwrap_or_else(|| Scalar::ratio(1, 2)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn seed_file_round_trips_the_demo_shape() {
        let mut src = String::from("b: 1/2\nlimit: 0\nmembers-in-sample: 3\noutsider: 2/5\n");
        for k in 0..40 {
            src.push_str(&format!("1/{}\n", k + 2));
        }
        let file = parse_seed_file(&src).unwrap();
        assert_eq!(file.b, rat("1/2"));
        assert_eq!(file.seed.sequence.len(), 40);
        assert_eq!(file.sample.len(), 4);
        let construction = build_escape_map(&file.seed, &file.sample, &file.b).unwrap();
        assert_eq!(construction.member_choice[0], (0, 4));
    }

    #[test]
    fn member_choice_scans_to_the_first_admissible_index() {
        let (seed, _) = demo_seed(false);
        let sample = vec![seed.sequence[0].clone()]; // 1/2
        let construction = build_escape_map(&seed, &sample, &rat("1/2")).unwrap();
        // thresholds at n' = 1, 2, 3 are 1/12, 1/8, 3/20 against tail
        // bounds 1/3, 1/4, 1/5; n' = 4 is the first with 1/6 <= 1/6
        assert_eq!(construction.member_choice, vec![(0, 4)]);
        assert_eq!(construction.map.apply(&seed.space, &sample[0]).unwrap().label(), "1/6");
        assert!(!construction.prefix_relative);
    }

    #[test]
    fn outsider_choice_uses_the_exact_range_gap() {
        let (seed, _) = demo_seed(false);
        let x = Point::from_value(rat("2/5"));
        let construction = build_escape_map(&seed, &[x.clone()], &rat("1/2")).unwrap();
        // D(2/5, A) = 1/15 attained at 1/3; threshold 1/30; the first
        // certified index has value 1/30
        assert_eq!(construction.outsider_choice.len(), 1);
        let (_, nx) = &construction.outsider_choice[0];
        assert_eq!(*nx, 28);
        assert_eq!(seed.sequence[*nx].label(), "1/30");
        match &construction.bounds_used[0] {
            BoundInstance::Outsider { gap, threshold, .. } => {
                assert_eq!(gap, &rat("1/15"));
                assert_eq!(threshold, &rat("1/30"));
            }
            other => panic!("expected outsider bound, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_weights_are_rejected() {
        let (seed, sample) = demo_seed(false);
        assert!(matches!(
            build_escape_map(&seed, &sample, &rat("0")),
            Err(EscapeError::InvalidContractionWeight(_))
        ));
        assert!(matches!(
            build_escape_map(&seed, &sample, &rat("1")),
            Err(EscapeError::InvalidContractionWeight(_))
        ));
    }

    #[test]
    fn demo_construction_verifies_with_all_pair_classes() {
        let (seed, sample) = demo_seed(false);
        assert_eq!(sample.len(), 30);
        let b = rat("1/2");
        let construction = build_escape_map(&seed, &sample, &b).unwrap();
        assert_eq!(construction.member_choice.len(), 20);
        assert_eq!(construction.outsider_choice.len(), 10);
        match verify_escape_map(&construction, &seed, &b).unwrap() {
            EscapeVerdict::Pass { ordered_pairs, member_member, outsider_outsider, mixed } => {
                assert_eq!(ordered_pairs, 30 * 29);
                assert!(member_member > 0 && outsider_outsider > 0 && mixed > 0);
            }
            other => panic!("expected a passing verdict, got {other:?}"),
        }
    }

    #[test]
    fn adjoining_the_limit_is_rejected_as_zero_gap() {
        let (seed, sample) = demo_seed(true);
        let err = build_escape_map(&seed, &sample, &rat("1/2")).unwrap_err();
        assert_eq!(err, EscapeError::ZeroDistanceToRange("0".into()));
    }

    #[test]
    fn hand_built_fixed_point_is_caught() {
        let (seed, _) = demo_seed(false);
        let p = seed.sequence[3].clone();
        let construction = EscapeConstruction {
            map: SelfMap::from_table("bad", vec![(p.clone(), p.clone())]),
            sample: vec![p.clone()],
            member_choice: vec![(3, 3)],
            outsider_choice: vec![],
            bounds_used: vec![],
            prefix_relative: false,
        };
        match verify_escape_map(&construction, &seed, &rat("1/2")).unwrap() {
            EscapeVerdict::FailFixedPoint(q) => assert_eq!(q, p),
            other => panic!("expected fixed-point failure, got {other:?}"),
        }
    }

    #[test]
    fn undershooting_the_member_index_fails_the_kannan_check() {
        let (seed, _) = demo_seed(false);
        // send 1/2 to 1/3 (n' = 1, far too early) and keep a second member
        // honest so a violating ordered pair exists
        let x0 = seed.sequence[0].clone();
        let x1 = seed.sequence[1].clone();
        let good = build_escape_map(&seed, &[x1.clone()], &rat("1/2")).unwrap();
        let honest_image = good.map.apply(&seed.space, &x1).unwrap();
        let construction = EscapeConstruction {
            map: SelfMap::from_table(
                "bad",
                vec![(x0.clone(), x1.clone()), (x1.clone(), honest_image)],
            ),
            sample: vec![x0, x1],
            member_choice: vec![(0, 1), (1, 7)],
            outsider_choice: vec![],
            bounds_used: vec![],
            prefix_relative: false,
        };
        match verify_escape_map(&construction, &seed, &rat("1/2")).unwrap() {
            EscapeVerdict::FailKannan(w) => {
                assert!(w.lhs >= w.rhs);
            }
            other => panic!("expected a Kannan failure, got {other:?}"),
        }
    }

    #[test]
    fn prefix_relative_mode_is_flagged_without_certificate() {
        let (seed, _) = demo_seed(false);
        let uncertified = CauchySeed::new(
            seed.space.clone(),
            seed.sequence.clone(),
            None,
        )
        .unwrap();
        let sample = vec![uncertified.sequence[0].clone(), Point::from_value(rat("2/5"))];
        let construction = build_escape_map(&uncertified, &sample, &rat("1/2")).unwrap();
        assert!(construction.prefix_relative);
    }

    #[test]
    fn short_prefix_reports_no_admissible_index() {
        let (seed, _) = demo_seed(false);
        let short = CauchySeed::new(
            seed.space.clone(),
            seed.sequence[..3].to_vec(),
            seed.certificate.clone(),
        )
        .unwrap();
        let err = build_escape_map(&short, &[short.sequence[0].clone()], &rat("1/2")).unwrap_err();
        assert!(matches!(err, EscapeError::NoAdmissibleIndex(_)));
    }
}
