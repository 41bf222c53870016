//! Brute-force verification of the relaxed polygon inequality
//! `d(x,y) <= s * (d(x,u1) + d(u1,u2) + ... + d(uv,y))` over all unordered
//! pairs and all ordered tuples of v distinct interior points, together with
//! the exact minimal relaxation constant for a given v.
//!
//! Enumeration order is fixed: pairs in point order, tuples in lexicographic
//! order over point positions, so witnesses are reproducible across runs.
//! Partial chain sums are pruned once they can no longer violate (or no
//! longer improve) the bound; pruned branches contain no candidates, so the
//! reported witness is still the lexicographically first one.

use thiserror::Error;

use crate::scalar::Scalar;
use crate::space::{FiniteSpace, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomError {
    #[error("v must be at least 1")]
    BadV,
    #[error("s must be at least 1, got {0}")]
    BadS(Scalar),
}

/// Number of interior points and relaxation constant for one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvsParams {
    v: u32,
    s: Scalar,
}

impl BvsParams {
    pub fn new(v: u32, s: Scalar) -> Result<BvsParams, AxiomError> {
        if v == 0 {
            return Err(AxiomError::BadV);
        }
        if s < Scalar::one() {
            return Err(AxiomError::BadS(s));
        }
        Ok(BvsParams { v, s })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn s(&self) -> &Scalar {
        &self.s
    }
}

/// A violating pair with the first offending interior tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomWitness {
    pub x: Point,
    pub y: Point,
    pub chain: Vec<Point>,
    pub lhs: Scalar,
    pub chain_sum: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomVerdict {
    Pass,
    /// Fewer than v + 2 carrier points: no admissible tuple exists.
    PassVacuous,
    Fail(AxiomWitness),
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, AxiomVerdict::Fail(_))
    }
}

/// Walk all ordered v-tuples of distinct entries from `interior` in
/// lexicographic order, keeping a running chain sum
/// `d(x,u1)+d(u1,u2)+...+d(u_last, partial)`. `visit` receives the tuple and
/// the full chain sum including the closing leg to y; returning `false`
/// stops the walk. `prune` cuts a branch when the partial sum (an exact
/// lower bound on every completion) is already conclusive.
struct TupleWalk<'a> {
    space: &'a FiniteSpace,
    interior: &'a [usize],
    x: usize,
    y: usize,
    v: usize,
}

impl<'a> TupleWalk<'a> {
    fn run(
        &self,
        prune: &impl Fn(&Scalar) -> bool,
        visit: &mut impl FnMut(&[usize], Scalar) -> bool,
    ) {
        let mut tuple = Vec::with_capacity(self.v);
        let mut used = vec![false; self.interior.len()];
        self.descend(&mut tuple, &mut used, &Scalar::zero(), prune, visit);
    }

    fn descend(
        &self,
        tuple: &mut Vec<usize>,
        used: &mut [bool],
        partial: &Scalar,
        prune: &impl Fn(&Scalar) -> bool,
        visit: &mut impl FnMut(&[usize], Scalar) -> bool,
    ) -> bool {
        if tuple.len() == self.v {
            let last = *tuple.last().unwrap();
            let total = partial + self.space.distance_by_position(last, self.y);
            return visit(tuple, total);
        }
        for (slot, &cand) in self.interior.iter().enumerate() {
            if used[slot] {
                continue;
            }
            let leg_from = tuple.last().copied().unwrap_or(self.x);
            let next = partial + self.space.distance_by_position(leg_from, cand);
            if prune(&next) {
                continue;
            }
            used[slot] = true;
            tuple.push(cand);
            let keep_going = self.descend(tuple, used, &next, prune, visit);
            tuple.pop();
            used[slot] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }
}

fn interior_positions(n: usize, x: usize, y: usize) -> Vec<usize> {
    (0..n).filter(|&k| k != x && k != y).collect()
}

/// Decide the inequality for every admissible pair and tuple.
pub fn check_bvs(space: &FiniteSpace, params: &BvsParams) -> AxiomVerdict {
    let n = space.len();
    let v = params.v as usize;
    if n < v + 2 {
        return AxiomVerdict::PassVacuous;
    }
    for x in 0..n {
        for y in x + 1..n {
            let lhs = space.distance_by_position(x, y).clone();
            let interior = interior_positions(n, x, y);
            let walk = TupleWalk { space, interior: &interior, x, y, v };
            let mut witness: Option<AxiomWitness> = None;
            // a branch is dead once s * partial >= lhs: no completion violates
            let threshold = lhs.clone();
            let s = params.s.clone();
            walk.run(
                &|partial| (&s * partial) >= threshold,
                &mut |tuple, total| {
                    if lhs > (&s * &total) {
                        witness = Some(AxiomWitness {
                            x: space.point(x).clone(),
                            y: space.point(y).clone(),
                            chain: tuple.iter().map(|&k| space.point(k).clone()).collect(),
                            lhs: lhs.clone(),
                            chain_sum: total,
                        });
                        false
                    } else {
                        true
                    }
                },
            );
            if let Some(w) = witness {
                return AxiomVerdict::Fail(w);
            }
        }
    }
    AxiomVerdict::Pass
}

/// Exact minimal relaxation constant for a given v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalS {
    /// Fewer than v + 2 points.
    Vacuous,
    Bound {
        /// max(raw_ratio, 1): the least admissible s in [1, oo).
        s_min: Scalar,
        /// max over pairs of d(x,y) / (min chain sum); may fall below 1.
        raw_ratio: Scalar,
        /// Pair attaining the maximum together with its minimising tuple.
        witness: AxiomWitness,
    },
}

impl MinimalS {
    pub fn bound(&self) -> Option<&Scalar> {
        match self {
            MinimalS::Vacuous => None,
            MinimalS::Bound { s_min, .. } => Some(s_min),
        }
    }
}

/// Minimum chain sum over all ordered v-tuples for the pair (x, y), with
/// the lexicographically first minimising tuple.
fn min_chain(space: &FiniteSpace, x: usize, y: usize, v: usize) -> (Scalar, Vec<usize>) {
    let interior = interior_positions(space.len(), x, y);
    let walk = TupleWalk { space, interior: &interior, x, y, v };
    let mut best: Option<(Scalar, Vec<usize>)> = None;
    // borrow dance: prune reads the current best through a cell
    let best_cell = std::cell::RefCell::new(None::<Scalar>);
    walk.run(
        &|partial| {
            best_cell
                .borrow()
                .as_ref()
                .map(|b| partial >= b)
                .unwrap_or(false)
        },
        &mut |tuple, total| {
            let improved = best
                .as_ref()
                .map(|(b, _)| &total < b)
                .unwrap_or(true);
            if improved {
                *best_cell.borrow_mut() = Some(total.clone());
                best = Some((total, tuple.to_vec()));
            }
            true
        },
    );
    best.expect("carrier has at least v+2 points")
}

pub fn minimal_s(space: &FiniteSpace, v: u32) -> MinimalS {
    let n = space.len();
    let v_us = v as usize;
    if v == 0 || n < v_us + 2 {
        return MinimalS::Vacuous;
    }
    let mut best: Option<(Scalar, AxiomWitness)> = None;
    for x in 0..n {
        for y in x + 1..n {
            let lhs = space.distance_by_position(x, y).clone();
            let (chain_sum, tuple) = min_chain(space, x, y, v_us);
            // distances between distinct points are positive, so the chain
            // sum can never be zero
            let ratio = &lhs / &chain_sum;
            let better = best.as_ref().map(|(r, _)| &ratio > r).unwrap_or(true);
            if better {
                let witness = AxiomWitness {
                    x: space.point(x).clone(),
                    y: space.point(y).clone(),
                    chain: tuple.iter().map(|&k| space.point(k).clone()).collect(),
                    lhs,
                    chain_sum,
                };
                best = Some((ratio, witness));
            }
        }
    }
    let (raw_ratio, witness) = best.expect("space has at least v+2 >= 3 points");
    let s_min = raw_ratio.clone().max(Scalar::one());
    MinimalS::Bound { s_min, raw_ratio, witness }
}

/// Tabulate minimal_s for v = 1..=v_max.
pub fn classify(space: &FiniteSpace, v_max: u32) -> Vec<(u32, MinimalS)> {
    (1..=v_max.max(1))
        .map(|v| (v, minimal_s(space, v)))
        .collect()
}
