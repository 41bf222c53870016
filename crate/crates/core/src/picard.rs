//! Picard iteration and its diagnostics: the step-distance sequence
//! s_n = d(u_n, u_{n+1}), the candidate-limit sequence t_n = d(u_n, z),
//! fixed-point and cycle detection, tail diameters, and the Suzuki-type
//! asymptotic-uniformity probe
//!
//!   d(u_n, u_m) < factor * eps + delta  ==>  d(u_{n+1}, u_{m+1}) <= eps.
//!
//! The probe's quantifiers range over all n, m and are not decidable from a
//! finite orbit, so verdicts are always horizon- and grid-relative:
//! `SupportedUpToHorizon` / `RefutedUpToGrid`, never the bare statement.

use thiserror::Error;

use crate::scalar::Scalar;
use crate::space::{Point, SelfMap, Space, SpaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicardError {
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("orbit too short: need at least {needed} points, have {have}")]
    OrbitTooShort { needed: usize, have: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitStatus {
    /// T(p) = p was reached; `index` is the position of p in `points`.
    FixedPoint { point: Point, index: usize },
    /// The orbit re-entered a previously recorded point.
    Cycle { entry: usize, period: usize },
    BudgetExhausted,
}

/// A recorded Picard orbit u_0, u_1 = T u_0, ... with its diagnostics.
///
/// For absorbed orbits (fixed point or cycle) the continuation is known
/// exactly, so `point_at` extends past the recorded prefix up to the
/// requested budget.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub start: Point,
    pub points: Vec<Point>,
    pub s_seq: Vec<Scalar>,
    pub t_seq: Option<Vec<Scalar>>,
    pub status: OrbitStatus,
    pub budget: usize,
}

impl OrbitRecord {
    /// u_k, virtually extended through fixed points and cycles.
    pub fn point_at(&self, k: usize) -> Option<&Point> {
        if k < self.points.len() {
            return Some(&self.points[k]);
        }
        match &self.status {
            OrbitStatus::FixedPoint { point, .. } => Some(point),
            OrbitStatus::Cycle { entry, period } => {
                let off = (k - entry) % period;
                Some(&self.points[entry + off])
            }
            OrbitStatus::BudgetExhausted => None,
        }
    }

    /// Indices 0..horizon() address defined points.
    pub fn horizon(&self) -> usize {
        match self.status {
            OrbitStatus::BudgetExhausted => self.points.len(),
            _ => self.budget + 1,
        }
    }

    /// Populate t_n = d(u_n, z) against a candidate limit.
    pub fn attach_limit(&mut self, space: &dyn Space, z: &Point) -> Result<(), SpaceError> {
        let t: Vec<Scalar> = self
            .points
            .iter()
            .map(|p| space.distance(p, z))
            .collect::<Result<_, _>>()?;
        self.t_seq = Some(t);
        Ok(())
    }
}

/// Iterate T from `start` until a fixed point, a cycle, or the budget runs
/// out. `budget` bounds the number of map applications.
pub fn iterate(
    space: &dyn Space,
    map: &SelfMap,
    start: &Point,
    budget: usize,
) -> Result<OrbitRecord, PicardError> {
    if budget == 0 {
        return Err(PicardError::ZeroBudget);
    }
    if !space.contains(start) {
        return Err(SpaceError::PointNotInCarrier(start.label().to_string()).into());
    }
    let mut points = vec![start.clone()];
    let mut s_seq = Vec::new();
    let mut status = OrbitStatus::BudgetExhausted;
    for n in 0..budget {
        let current = points[n].clone();
        let next = map.apply(space, &current)?;
        if next == current {
            status = OrbitStatus::FixedPoint { point: current, index: n };
            break;
        }
        if let Some(entry) = points.iter().position(|p| p == &next) {
            status = OrbitStatus::Cycle { entry, period: n + 1 - entry };
            s_seq.push(space.distance(&current, &next)?);
            break;
        }
        s_seq.push(space.distance(&current, &next)?);
        points.push(next);
    }
    Ok(OrbitRecord {
        start: start.clone(),
        points,
        s_seq,
        t_seq: None,
        status,
        budget,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SnVerdict {
    Pass,
    /// First index with s_{n+1} >= s_n.
    Fail { index: usize },
}

/// The proof-diagnostic check that the step distances strictly decrease
/// before absorption. Vacuously true on orbits with fewer than two steps.
pub fn verify_sn_strict_decrease(orbit: &OrbitRecord) -> SnVerdict {
    for n in 0..orbit.s_seq.len().saturating_sub(1) {
        if orbit.s_seq[n + 1] >= orbit.s_seq[n] {
            return SnVerdict::Fail { index: n };
        }
    }
    SnVerdict::Pass
}

/// Exactly the sample points fixed by T, in sample order. Images are
/// compared by value, so they may fall outside the sample itself.
pub fn detect_fixed_points(
    space: &dyn Space,
    sample: &[Point],
    map: &SelfMap,
) -> Result<Vec<Point>, PicardError> {
    let mut fixed = Vec::new();
    for p in sample {
        if &map.apply(space, p)? == p {
            fixed.push(p.clone());
        }
    }
    Ok(fixed)
}

/// Candidate grids for the Suzuki probe. Delta entries are multipliers of
/// epsilon; candidates are scanned delta-major so the plain delta = eps
/// choice is found first whenever it works at any start index.
#[derive(Debug, Clone)]
pub struct SuzukiGrid {
    pub delta_multipliers: Vec<Scalar>,
    pub start_indices: Vec<usize>,
}

impl Default for SuzukiGrid {
    fn default() -> Self {
        SuzukiGrid {
            delta_multipliers: (0..=6).map(|k| Scalar::ratio(1, 1 << k)).collect(),
            start_indices: vec![0, 1, 2, 4, 8, 16],
        }
    }
}

/// Default epsilon list used by corpus claims and the CLI when none is
/// given.
pub fn default_eps_list() -> Vec<Scalar> {
    ["2", "1", "1/2", "1/4", "1/16"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuzukiWitness {
    pub delta: Scalar,
    pub start_index: usize,
    pub n: usize,
    pub m: usize,
    /// d(u_n, u_m): satisfies the premise.
    pub premise: Scalar,
    /// d(u_{n+1}, u_{m+1}): violates the conclusion.
    pub conclusion: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuzukiResult {
    /// First grid candidate under which every in-horizon pair satisfies the
    /// implication.
    SupportedUpToHorizon { delta: Scalar, start_index: usize },
    /// Every grid candidate has an in-horizon violating pair.
    RefutedUpToGrid { witnesses: Vec<SuzukiWitness> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuzukiFinding {
    pub epsilon: Scalar,
    pub result: SuzukiResult,
    pub horizon: usize,
}

impl SuzukiFinding {
    pub fn supported(&self) -> bool {
        matches!(self.result, SuzukiResult::SupportedUpToHorizon { .. })
    }
}

/// Probe the implication for each epsilon over all grid candidates.
/// Pairs range over start <= n < m < horizon - 1 so that both successors
/// stay inside the horizon.
pub fn check_suzuki(
    space: &dyn Space,
    orbit: &OrbitRecord,
    factor: &Scalar,
    eps_list: &[Scalar],
    grid: &SuzukiGrid,
) -> Result<Vec<SuzukiFinding>, PicardError> {
    let horizon = orbit.horizon();
    let max_start = grid.start_indices.iter().copied().max().unwrap_or(0);
    if horizon < max_start + 3 {
        return Err(PicardError::OrbitTooShort { needed: max_start + 3, have: horizon });
    }
    let dist = |a: usize, b: usize| -> Result<Scalar, PicardError> {
        let pa = orbit.point_at(a).expect("inside horizon");
        let pb = orbit.point_at(b).expect("inside horizon");
        Ok(space.distance(pa, pb)?)
    };
    let mut findings = Vec::new();
    for eps in eps_list {
        let mut result = None;
        let mut witnesses = Vec::new();
        'candidates: for mult in &grid.delta_multipliers {
            let delta = mult * eps;
            let bound = &(factor * eps) + &delta;
            for &start in &grid.start_indices {
                let mut violation = None;
                'pairs: for n in start..horizon.saturating_sub(2) {
                    for m in n + 1..horizon - 1 {
                        let premise = dist(n, m)?;
                        if premise < bound {
                            let conclusion = dist(n + 1, m + 1)?;
                            if &conclusion > eps {
                                violation = Some(SuzukiWitness {
                                    delta: delta.clone(),
                                    start_index: start,
                                    n,
                                    m,
                                    premise,
                                    conclusion,
                                });
                                break 'pairs;
                            }
                        }
                    }
                }
                match violation {
                    None => {
                        result = Some(SuzukiResult::SupportedUpToHorizon {
                            delta: delta.clone(),
                            start_index: start,
                        });
                        break 'candidates;
                    }
                    Some(w) => witnesses.push(w),
                }
            }
        }
        let result = result.unwrap_or(SuzukiResult::RefutedUpToGrid { witnesses });
        findings.push(SuzukiFinding { epsilon: eps.clone(), result, horizon });
    }
    Ok(findings)
}

/// Exact tail diameters: for each N, the maximum of d(u_n, u_m) over
/// N <= n < m < horizon. An eventually flat positive profile refutes
/// Cauchyness on the window; a profile sinking to 0 merely evidences it.
pub fn cauchy_profile(
    space: &dyn Space,
    orbit: &OrbitRecord,
    tail_starts: &[usize],
) -> Result<Vec<(usize, Scalar)>, PicardError> {
    let horizon = orbit.horizon();
    let mut rows = Vec::new();
    for &start in tail_starts {
        if start + 1 >= horizon {
            return Err(PicardError::OrbitTooShort { needed: start + 2, have: horizon });
        }
        let mut max = Scalar::zero();
        for n in start..horizon {
            for m in n + 1..horizon {
                let d = space.distance(
                    orbit.point_at(n).expect("inside horizon"),
                    orbit.point_at(m).expect("inside horizon"),
                )?;
                if d > max {
                    max = d;
                }
            }
        }
        rows.push((start, max));
    }
    Ok(rows)
}
