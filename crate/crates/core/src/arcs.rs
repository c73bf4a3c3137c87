//! s-degrees of point sets in PG(r, q) and the combinatorial bound on their
//! size.
//!
//! The s-degree of a set `X` is the largest number of points of `X` on one
//! hyperplane. A set of s-degree `d` has at most
//! `(d-1)q + 1 + ⌊(d-1)/(q^(r-2) + … + 1)⌋` points; the proof counts pairs
//! `(P, H)` with `P ∈ X ∖ {P0}` and `P0, P ∈ H` in two ways, and
//! [`double_count`] reproduces both sides.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::comb_bound;
use crate::projspace::{gaussian_count, ProjError, ProjPoint, ProjSpace};

/// Above this many hyperplanes the s-degree is accumulated point by point.
pub const FULL_SCAN_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("empty point set")]
    EmptySet,
    #[error("s-degree needs r >= 2, got r = {0}")]
    AmbientTooSmall(usize),
    #[error("point {0} is not in the set")]
    PointNotInSet(String),
    #[error("subset size {size} exceeds the {total} points of the space")]
    SizeTooLarge { size: usize, total: u64 },
    #[error(transparent)]
    Proj(#[from] ProjError),
}

/// A duplicate-free set of normalized points of one space.
#[derive(Debug, Clone)]
pub struct PointSet {
    space: ProjSpace,
    points: Vec<ProjPoint>,
}

impl PointSet {
    /// Normalizes and deduplicates; keeps first occurrences in input order.
    pub fn new(space: ProjSpace, points: impl IntoIterator<Item = ProjPoint>) -> Result<Self, ArcError> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for p in points {
            let p = space.normalize(p.coords())?;
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Ok(PointSet { space, points: out })
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check(x: &PointSet) -> Result<(), ArcError> {
    if x.space.dim() < 2 {
        return Err(ArcError::AmbientTooSmall(x.space.dim()));
    }
    if x.is_empty() {
        return Err(ArcError::EmptySet);
    }
    Ok(())
}

/// Maximum of `#(X ∩ H)` over all hyperplanes `H`.
pub fn s_degree(x: &PointSet) -> Result<u64, ArcError> {
    s_degree_with_limit(x, FULL_SCAN_LIMIT)
}

/// [`s_degree`] with an explicit switch-over point between the full
/// hyperplane scan and per-point accumulation.
pub fn s_degree_with_limit(x: &PointSet, full_scan_limit: u64) -> Result<u64, ArcError> {
    check(x)?;
    let space = &x.space;
    let total = space.num_points();
    if total <= full_scan_limit {
        let max = (0..total)
            .into_par_iter()
            .map(|i| {
                let h = space.hyperplane_at(i);
                x.points.iter().filter(|p| space.on(p, &h)).count() as u64
            })
            .max()
            .unwrap_or(0);
        return Ok(max);
    }
    let mut counts: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    for p in &x.points {
        for h in space.hyperplanes_through(p)? {
            *counts.entry(space.hyperplane_index(&h)).or_default() += 1;
        }
    }
    Ok(counts.into_values().max().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcBoundReport {
    pub n: u64,
    pub s_degree: u64,
    pub bound: u64,
    pub ok: bool,
}

/// Compares `#X` with the combinatorial bound at its own s-degree. By the
/// bound's proof `ok` is always true.
pub fn check_arc_bound(x: &PointSet) -> Result<ArcBoundReport, ArcError> {
    let d = s_degree(x)?;
    let bound = comb_bound(d, x.space.q(), x.space.dim()).expect("r >= 2 checked");
    let bound = u64::try_from(bound).expect("bound fits in u64");
    let n = x.len() as u64;
    Ok(ArcBoundReport { n, s_degree: d, bound, ok: n <= bound })
}

/// Both sides of the double count for the pairs `(P, H)` with
/// `P ∈ X ∖ {P0}`, `H ∋ P0` and `P ∈ H`: the direct count, and
/// `(N - 1)(q^(r-2) + … + 1)`.
pub fn double_count(x: &PointSet, p0: &ProjPoint) -> Result<(u64, u64), ArcError> {
    check(x)?;
    let space = &x.space;
    let p0 = space.normalize(p0.coords())?;
    if !x.points.contains(&p0) {
        return Err(ArcError::PointNotInSet(p0.to_string()));
    }
    let through = space.hyperplanes_through(&p0)?;
    Ok(double_count_with(x, &p0, &through))
}

/// [`double_count`] with the pencil of hyperplanes through `p0` supplied.
pub fn double_count_with(
    x: &PointSet,
    p0: &ProjPoint,
    hyperplanes_through_p0: &[crate::projspace::Hyperplane],
) -> (u64, u64) {
    let space = &x.space;
    let lhs = hyperplanes_through_p0
        .iter()
        .map(|h| x.points.iter().filter(|p| *p != p0 && space.on(p, h)).count() as u64)
        .sum();
    let rhs = (x.len() as u64 - 1) * gaussian_count(space.q(), space.dim() as i64 - 2);
    (lhs, rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetFailure {
    pub trial: usize,
    pub points: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetSuiteReport {
    pub r: usize,
    pub q: u64,
    pub seed: u64,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub double_count_checks: u64,
    pub failures: Vec<SubsetFailure>,
}

impl SubsetSuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the double count (at every base point) and the combinatorial
/// bound on one subset; `None` when both hold.
pub fn check_subset(x: &PointSet, pencils: &[Vec<crate::projspace::Hyperplane>]) -> Result<Option<String>, ArcError> {
    for p0 in x.points() {
        let idx = x.space.index_of(p0) as usize;
        let (lhs, rhs) = double_count_with(x, p0, &pencils[idx]);
        if lhs != rhs {
            return Ok(Some(format!("double count at {p0}: {lhs} != {rhs}")));
        }
    }
    let report = check_arc_bound(x)?;
    if !report.ok {
        return Ok(Some(format!("N = {} exceeds bound {} at s-degree {}", report.n, report.bound, report.s_degree)));
    }
    Ok(None)
}

/// All pencils `hyperplanes_through(P)` indexed by point index.
pub fn all_pencils(space: &ProjSpace) -> Vec<Vec<crate::projspace::Hyperplane>> {
    space.points().map(|p| space.hyperplanes_through(&p).expect("valid point")).collect()
}

/// Seeded random subsets of PG(r, q); trial `i` uses size `sizes[i % len]`.
pub fn random_subset_suite(
    space: &ProjSpace,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<SubsetSuiteReport, ArcError> {
    let total = space.num_points();
    if let Some(&size) = sizes.iter().find(|&&s| s as u64 > total) {
        return Err(ArcError::SizeTooLarge { size, total });
    }
    let mut report = SubsetSuiteReport {
        r: space.dim(),
        q: space.q(),
        seed,
        trials,
        sizes: sizes.to_vec(),
        double_count_checks: 0,
        failures: Vec::new(),
    };
    if trials == 0 || sizes.is_empty() {
        return Ok(report);
    }
    let pencils = all_pencils(space);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subsets: Vec<Vec<u64>> = (0..trials)
        .map(|i| {
            let size = sizes[i % sizes.len()];
            let mut idx: Vec<u64> = sample(&mut rng, total as usize, size).into_iter().map(|k| k as u64).collect();
            idx.sort_unstable();
            idx
        })
        .collect();
    let outcomes: Vec<Result<Option<String>, ArcError>> = subsets
        .par_iter()
        .map(|idx| {
            if idx.is_empty() {
                return Ok(None);
            }
            let x = PointSet::new(space.clone(), idx.iter().map(|&i| space.point_at(i)))?;
            check_subset(&x, &pencils)
        })
        .collect();
    for (trial, (idx, outcome)) in subsets.iter().zip(outcomes).enumerate() {
        report.double_count_checks += idx.len() as u64;
        if let Some(reason) = outcome? {
            report.failures.push(SubsetFailure {
                trial,
                points: idx.iter().map(|&i| space.point_at(i).to_string()).collect(),
                reason,
            });
        }
    }
    Ok(report)
}

/// Exhaustive check over every subset of size `1..=max_size`. Returns the
/// number of subsets examined and the first failure, if any.
pub fn exhaustive_subset_check(space: &ProjSpace, max_size: usize) -> Result<(u64, Option<String>), ArcError> {
    let total = space.num_points() as usize;
    let pencils = all_pencils(space);
    let mut examined = 1u64; // the empty set, vacuously
    for size in 1..=max_size.min(total) {
        let combos = combinations(total, size);
        let results: Vec<Result<Option<String>, ArcError>> = combos
            .par_iter()
            .map(|combo| {
                let x = PointSet::new(space.clone(), combo.iter().map(|&i| space.point_at(i as u64)))?;
                check_subset(&x, &pencils)
            })
            .collect();
        examined += combos.len() as u64;
        for r in results {
            if let Some(reason) = r? {
                return Ok((examined, Some(reason)));
            }
        }
    }
    Ok((examined, None))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] != i + n - k) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}
