//! Upper bounds for `N_q(C)` in exact arithmetic, curve reports, and a sweep
//! over the elementary inequalities the main bound is assembled from.
//!
//! No floating point anywhere: rationals are `BigRational`, and every
//! rational bound is reported together with its floor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arcs::{s_degree, PointSet};
use crate::curves::{count_points, CurveDef, CurveError};
use crate::projspace::{ProjPoint, ProjSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("denominator {0} is not positive")]
    NonpositiveDenominator(BigInt),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("check {check} failed: {detail}")]
    ValidationFailure { check: String, detail: String },
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn pow(q: u64, k: u64) -> BigInt {
    num_traits::pow(big(q), k as usize)
}

/// `q^k + … + q + 1`, and 0 for negative `k`.
pub fn geometric(q: u64, k: i64) -> BigInt {
    (0..=k).map(|i| pow(q, i as u64)).sum()
}

/// `S = Σ_{j=1}^{r} j q^(r-j)`.
pub fn s_sum(q: u64, r: u64) -> BigInt {
    (1..=r).map(|j| big(j) * pow(q, r - j)).sum()
}

fn floor_of(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

/// Integers that fit go out as JSON numbers, anything larger as a string.
fn ser_int<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

fn ser_opt_int<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_int(v, s),
        None => s.serialize_none(),
    }
}

/// A rational bound and its floor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactBound {
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    #[serde(serialize_with = "ser_int")]
    pub floor: BigInt,
}

impl ExactBound {
    fn new(value: BigRational) -> Self {
        let floor = floor_of(&value);
        ExactBound { value, floor }
    }

    /// `n ≤ value`, equivalently `n ≤ floor`.
    pub fn admits(&self, n: u64) -> bool {
        big(n) <= self.floor
    }
}

impl std::fmt::Display for ExactBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (floor {})", rational_string(&self.value), self.floor)
    }
}

fn check_params(q: u64, r: u64) -> Result<(), BoundsError> {
    if q < 2 {
        return Err(BoundsError::InvalidParameters(format!("q = {q} < 2")));
    }
    if r < 1 {
        return Err(BoundsError::InvalidParameters("r = 0".into()));
    }
    Ok(())
}

/// `(d-1)q + 1`.
pub fn sziklai_bound(d: u64, q: u64) -> BigInt {
    (big(d) - 1u32) * big(q) + 1u32
}

/// `(q-1)(q^(r+1)-1)d / (q(q^r-1) - r(q-1))`. The formula is meant for
/// `r ≥ 3` but evaluates whenever the denominator is positive.
pub fn thm32_bound(d: u64, q: u64, r: u64) -> Result<ExactBound, BoundsError> {
    check_params(q, r)?;
    let num = (big(q) - 1u32) * (pow(q, r + 1) - 1u32) * big(d);
    let den = big(q) * (pow(q, r) - 1u32) - big(r) * (big(q) - 1u32);
    if !den.is_positive() {
        return Err(BoundsError::NonpositiveDenominator(den));
    }
    Ok(ExactBound::new(BigRational::new(num, den)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cor33Bound {
    #[serde(serialize_with = "ser_int")]
    pub s: BigInt,
    #[serde(flatten)]
    pub bound: ExactBound,
}

/// `(q-1)d + (r+1)d/S` with `S = Σ j q^(r-j)`, computed as
/// `d((q-1)S + r + 1)/S`.
pub fn cor33_bound(d: u64, q: u64, r: u64) -> Result<Cor33Bound, BoundsError> {
    check_params(q, r)?;
    let s = s_sum(q, r);
    let num = big(d) * ((big(q) - 1u32) * &s + big(r) + 1u32);
    let bound = ExactBound::new(BigRational::new(num, s.clone()));
    Ok(Cor33Bound { s, bound })
}

/// `(d-1)q + 1 + ⌊(d-1)/(q^(r-2) + … + 1)⌋`, the bound for a point set of
/// s-degree `d` in PG(r, q).
pub fn comb_bound(d: u64, q: u64, r: usize) -> Result<BigInt, BoundsError> {
    if r < 2 {
        return Err(BoundsError::InvalidParameters(format!("r = {r} < 2")));
    }
    if d < 1 {
        return Err(BoundsError::InvalidParameters("d = 0".into()));
    }
    check_params(q, r as u64)?;
    let g = geometric(q, r as i64 - 2);
    Ok(sziklai_bound(d, q) + (big(d) - 1u32).div_floor(&g))
}

/// `(q^(r-1) + … + 1 - r)/(q-1)` and `Σ_{i=1}^{r} (i-1)q^(r-i)`, which
/// agree; panics if they ever do not.
pub fn lemma_rhs(q: u64, r: u64) -> Result<BigInt, BoundsError> {
    check_params(q, r)?;
    let num = geometric(q, r as i64 - 1) - big(r);
    let (quot, rem) = num.div_rem(&(big(q) - 1u32));
    assert!(rem.is_zero(), "q-1 divides q^(r-1)+…+1-r");
    let sum: BigInt = (1..=r).map(|i| big(i - 1) * pow(q, r - i)).sum();
    assert_eq!(quot, sum, "closed forms of the lemma bound disagree at q={q}, r={r}");
    Ok(quot)
}

/// Which half of the case split covers `d`: `d ≤ q^(r-2)+…+1` is settled
/// by the combinatorial bound, `d ≥ q` by the corollary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofCase {
    Combinatorial,
    Corollary33,
    Both,
    NotApplicable,
}

impl std::fmt::Display for ProofCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProofCase::Combinatorial => "combinatorial",
            ProofCase::Corollary33 => "corollary33",
            ProofCase::Both => "both",
            ProofCase::NotApplicable => "not-applicable",
        })
    }
}

/// The case split only exists for `r ≥ 3`, where one of the two always
/// applies because `q < q^(r-2) + … + 1`.
pub fn proof_case(d: u64, q: u64, r: u64) -> ProofCase {
    if r < 3 {
        return ProofCase::NotApplicable;
    }
    let small = big(d) <= geometric(q, r as i64 - 2);
    let large = d >= q;
    match (small, large) {
        (true, true) => ProofCase::Both,
        (true, false) => ProofCase::Combinatorial,
        (false, true) => ProofCase::Corollary33,
        (false, false) => unreachable!("q < q^(r-2)+…+1 leaves no gap for r >= 3"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub curve: String,
    pub q: u64,
    pub r: u64,
    pub d: u64,
    pub n_observed: u64,
    #[serde(serialize_with = "ser_int")]
    pub sziklai: BigInt,
    pub sziklai_satisfied: bool,
    /// `N` equals the bound.
    pub sziklai_equality: bool,
    /// Only for `r ≥ 3`.
    pub thm32: Option<ExactBound>,
    pub thm32_satisfied: Option<bool>,
    pub cor33: Option<Cor33Bound>,
    pub cor33_satisfied: Option<bool>,
    /// s-degree of `C(GF(q))`; absent when there are no points.
    pub s_degree: Option<u64>,
    /// Combinatorial bound at that s-degree.
    #[serde(serialize_with = "ser_opt_int")]
    pub comb: Option<BigInt>,
    pub comb_satisfied: Option<bool>,
    pub proof_case: ProofCase,
    /// The curve is the known quartic over GF(4) with 14 points.
    pub exception: bool,
    pub all_satisfied: bool,
}

impl BoundReport {
    /// A bound fails and the curve is not the known exception.
    pub fn unexpected_violation(&self) -> bool {
        !self.all_satisfied && !self.exception
    }
}

/// Counts `C(GF(q))` and evaluates every bound that applies.
pub fn verify_curve(c: &CurveDef) -> Result<BoundReport, CurveError> {
    let count = count_points(c);
    let points = match count.points {
        Some(p) => p,
        None => return Err(CurveError::NoPointsRetained),
    };
    Ok(report_for(c, &points))
}

/// [`verify_curve`] for an already computed point list.
pub fn report_for(c: &CurveDef, points: &[ProjPoint]) -> BoundReport {
    let q = c.q();
    let r = c.ambient_dim() as u64;
    let d = u64::from(c.degree());
    let n = points.len() as u64;
    let sziklai = sziklai_bound(d, q);
    let sziklai_satisfied = big(n) <= sziklai;
    let (thm32, cor33) = if r >= 3 {
        (thm32_bound(d, q, r).ok(), cor33_bound(d, q, r).ok())
    } else {
        (None, None)
    };
    let thm32_satisfied = thm32.as_ref().map(|b| b.admits(n));
    let cor33_satisfied = cor33.as_ref().map(|b| b.bound.admits(n));
    let s_deg = if points.is_empty() || r < 2 {
        None
    } else {
        let set = PointSet::new(c.space(), points.iter().cloned()).expect("curve points lie in the space");
        Some(s_degree(&set).expect("nonempty set, r >= 2"))
    };
    let comb = s_deg.map(|s| comb_bound(s, q, r as usize).expect("r >= 2, s >= 1"));
    let comb_satisfied = comb.as_ref().map(|b| big(n) <= *b);
    let all_satisfied = sziklai_satisfied
        && [thm32_satisfied, cor33_satisfied, comb_satisfied].iter().all(|f| f.unwrap_or(true));
    BoundReport {
        curve: c.label(),
        q,
        r,
        d,
        n_observed: n,
        sziklai_equality: big(n) == sziklai,
        sziklai,
        sziklai_satisfied,
        thm32,
        thm32_satisfied,
        cor33,
        cor33_satisfied,
        s_degree: s_deg,
        comb,
        comb_satisfied,
        proof_case: proof_case(d, q, r),
        exception: c.is_sziklai_k(),
        all_satisfied,
    }
}

/// Number of incident pairs `(P, H)`, `P ∈ C(GF(q))`, counted over all
/// hyperplanes, and `(q^(r-1) + … + 1) N`.
pub fn incidence_count_q(c: &CurveDef) -> Result<(u64, u64), CurveError> {
    let count = count_points(c);
    let points = count.points.ok_or(CurveError::NoPointsRetained)?;
    Ok(incidence_count_points(&c.space(), &points))
}

pub fn incidence_count_points(space: &ProjSpace, points: &[ProjPoint]) -> (u64, u64) {
    let direct = (0..space.num_points())
        .into_par_iter()
        .map(|i| {
            let h = space.hyperplane_at(i);
            points.iter().filter(|p| space.on(p, &h)).count() as u64
        })
        .sum();
    (direct, space.hyperplanes_per_point() * points.len() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub check: String,
    pub cases: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IneqReport {
    pub q: u64,
    pub r: u64,
    pub d_min: u64,
    pub d_max: u64,
    pub checks: Vec<CheckTally>,
}

impl IneqReport {
    pub fn total_cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }
}

fn fail(check: &str, detail: String) -> BoundsError {
    BoundsError::ValidationFailure { check: check.into(), detail }
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// The `d`-independent checks: (a), (c), (f), and the lemma bound's two forms.
fn fixed_checks(q: u64, r: u64, tally: &mut Vec<CheckTally>) -> Result<(), BoundsError> {
    let s = s_sum(q, r);
    let lhs = (big(q) - 1u32) * &s;
    let rhs: BigInt = (1..=r).map(|i| pow(q, i)).sum::<BigInt>() - big(r);
    if lhs != rhs {
        return Err(fail("a", format!("(q-1)S = {lhs} but q^r+…+q-r = {rhs}")));
    }
    let full = (big(q) - 1u32) * &s + big(r) + 1u32;
    if full != geometric(q, r as i64) {
        return Err(fail("a", format!("(q-1)S+r+1 = {full} != q^r+…+1")));
    }
    tally.push(CheckTally { check: "a".into(), cases: 2 });

    // S - (r+1)q, and its expansion as a sum of visibly positive terms.
    let gap = &s - big(r + 1) * big(q);
    if !gap.is_positive() {
        return Err(fail("c", format!("S - (r+1)q = {gap} at q={q}, r={r}")));
    }
    let expansion: BigInt = (1..=r.saturating_sub(3)).map(|j| big(j) * pow(q, r - j)).sum::<BigInt>()
        + big(r - 3) * pow(q, 2)
        + pow(q - 1, 2)
        + big(r - 1);
    if gap != expansion {
        return Err(fail("c", format!("S - (r+1)q = {gap} but the expansion gives {expansion}")));
    }
    tally.push(CheckTally { check: "c".into(), cases: 2 });

    let g = geometric(q, r as i64 - 2);
    if big(q) >= g {
        return Err(fail("f", format!("q = {q} >= q^(r-2)+…+1 = {g}")));
    }
    tally.push(CheckTally { check: "f".into(), cases: 1 });

    lemma_rhs(q, r)?;
    tally.push(CheckTally { check: "lemma-rhs".into(), cases: 1 });
    Ok(())
}

/// Per-`d` checks; returns how many cases each of (b), (d), (d-union),
/// (e), (identity), (case-split) covered.
fn checks_at(q: u64, r: u64, d: u64) -> Result<[u64; 6], BoundsError> {
    let mut n = [0u64; 6];
    let s = s_sum(q, r);
    let sz = sziklai_bound(d, q);
    let c33 = cor33_bound(d, q, r)?;

    // (b) quantity (6) and its lower bound at d = q.
    if d >= q {
        let coeff = BigRational::one() - BigRational::new(big(r + 1), s.clone());
        let q6 = &coeff * rat(big(d)) - rat(big(q)) + BigRational::one();
        if !coeff.is_positive() || !q6.is_positive() {
            return Err(fail("b", format!("quantity (6) = {} at d={d}", rational_string(&q6))));
        }
        if q6 != rat(sz.clone()) - &c33.bound.value {
            return Err(fail("b", format!("quantity (6) != sziklai - cor33 at d={d}")));
        }
        let q7 = BigRational::one() - BigRational::new(big(r + 1) * big(q), s.clone());
        if !q7.is_positive() || q6 < q7 {
            return Err(fail("b", format!("1 - (r+1)q/S = {} does not bound (6) at d={d}", rational_string(&q7))));
        }
        if sz < c33.bound.floor {
            return Err(fail("b", format!("sziklai {sz} < floor(cor33) {} at d={d}", c33.bound.floor)));
        }
        n[0] += 1;
    }

    // (d) unions of s components of degrees d_i >= 2.
    for comps in 2..=d / 2 {
        let rhs = sz.clone();
        let lhs = (big(d) - big(comps)) * big(q) + big(comps);
        // the partition 2, 2, …, 2, d - 2(s-1)
        let degrees: Vec<u64> = (0..comps).map(|i| if i + 1 < comps { 2 } else { d - 2 * (comps - 1) }).collect();
        let summed: BigInt = degrees.iter().map(|&di| sziklai_bound(di, q)).sum();
        if summed != lhs {
            return Err(fail("d", format!("Σ((d_i-1)q+1) = {summed} != (d-s)q+s = {lhs} for {degrees:?}")));
        }
        if lhs >= rhs {
            return Err(fail("d", format!("(d-s)q+s = {lhs} >= {rhs} at d={d}, s={comps}")));
        }
        n[1] += 1;
    }

    // (d-union) over GF(4): s' copies of the 14-point quartic among s components.
    if q == 4 {
        for comps in 2..=d / 2 {
            for k in 0..=comps {
                if 4 * k + 2 * (comps - k) > d {
                    break;
                }
                let others = comps - k;
                let mut degrees = vec![2u64; others as usize];
                if let Some(last) = degrees.last_mut() {
                    *last = d - 4 * k - 2 * (others - 1);
                } else if 4 * k != d {
                    continue;
                }
                let total = big(14 * k) + degrees.iter().map(|&di| big(4 * di) - 3).sum::<BigInt>();
                let closed = big(4 * d) - big(3 * comps) + big(k);
                if total != closed {
                    return Err(fail("d-union", format!("14s'+Σ(4d_i-3) = {total} != {closed} at d={d}, s={comps}, s'={k}")));
                }
                if total >= big(4 * d) - 3 {
                    return Err(fail("d-union", format!("{total} >= 4d-3 at d={d}, s={comps}, s'={k}")));
                }
                n[2] += 1;
            }
        }
    }

    // (e) conjugate components, t = 2.
    for rp in r - 1..=d / 2 {
        let half = BigRational::new(big(d), big(2));
        let lhs = (&half - rat(big(rp))) * rat(big(q) + 1) + rat(big(rp));
        let diff = rat(sz.clone()) - &lhs;
        let expected = rat(big(rp) * big(q)) + (&half - BigRational::one()) * rat(big(q) - 1u32);
        if diff != expected || !diff.is_positive() {
            return Err(fail("e", format!("(d/2-r')(q+1)+r' = {} vs {sz} at d={d}, r'={rp}", rational_string(&lhs))));
        }
        n[3] += 1;
    }

    // the two bound formulas agree
    let t32 = thm32_bound(d, q, r)?;
    if t32 != c33.bound {
        return Err(fail("identity", format!("thm32 {t32} != cor33 {} at d={d}", c33.bound)));
    }
    n[4] += 1;

    if proof_case(d, q, r) == ProofCase::NotApplicable {
        return Err(fail("case-split", format!("no case covers d={d}")));
    }
    n[5] += 1;
    Ok(n)
}

/// Runs every check over `d ∈ d_range`. Any failure is a bug, reported
/// with the first (smallest `d`) counterexample.
pub fn proof_ineq_suite(q: u64, r: u64, d_range: std::ops::RangeInclusive<u64>) -> Result<IneqReport, BoundsError> {
    check_params(q, r)?;
    if r < 3 {
        return Err(BoundsError::InvalidParameters(format!("r = {r} < 3")));
    }
    let (d_min, d_max) = (*d_range.start(), *d_range.end());
    if d_min < 1 {
        return Err(BoundsError::InvalidParameters("d starts at 0".into()));
    }
    let mut checks = Vec::new();
    fixed_checks(q, r, &mut checks)?;
    let per_d: Vec<Result<[u64; 6], BoundsError>> = d_range.into_par_iter().map(|d| checks_at(q, r, d)).collect();
    let mut totals = [0u64; 6];
    for res in per_d {
        for (t, c) in totals.iter_mut().zip(res?) {
            *t += c;
        }
    }
    for (name, cases) in ["b", "d", "d-union", "e", "identity", "case-split"].into_iter().zip(totals) {
        checks.push(CheckTally { check: name.into(), cases });
    }
    Ok(IneqReport { q, r, d_min, d_max, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{catalog, catalog_instances, hermitian, rational_normal, sziklai_k};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sziklai_values() {
        assert_eq!(sziklai_bound(4, 4), big(13));
        assert_eq!(sziklai_bound(1, 7), big(1));
        assert_eq!(sziklai_bound(3, 2), big(5));
    }

    #[test]
    fn thm32_values() {
        let b = thm32_bound(4, 2, 3).unwrap();
        assert_eq!((b.value, b.floor), (r(60, 11), big(5)));
        let b = thm32_bound(3, 2, 3).unwrap();
        assert_eq!((b.value, b.floor), (r(45, 11), big(4)));
        let b = thm32_bound(11, 2, 3).unwrap();
        assert_eq!((b.value, b.floor), (r(15, 1), big(15)));
        assert!(thm32_bound(1, 1, 3).is_err());
    }

    #[test]
    fn cor33_values() {
        let c = cor33_bound(4, 2, 3).unwrap();
        assert_eq!(c.s, big(11));
        assert_eq!(c.bound.value, r(60, 11));
        let c = cor33_bound(5, 3, 3).unwrap();
        assert_eq!(c.s, big(18));
        assert_eq!((c.bound.value, c.bound.floor), (r(100, 9), big(11)));
    }

    #[test]
    fn comb_values() {
        assert_eq!(comb_bound(3, 2, 3).unwrap(), big(5));
        assert_eq!(comb_bound(4, 2, 3).unwrap(), big(8));
        assert_eq!(comb_bound(5, 2, 2).unwrap(), big(13));
        assert!(comb_bound(5, 2, 1).is_err());
    }

    #[test]
    fn lemma_rhs_values() {
        assert_eq!(lemma_rhs(2, 3).unwrap(), big(4));
        assert_eq!(lemma_rhs(3, 3).unwrap(), big(5));
        assert_eq!(lemma_rhs(2, 4).unwrap(), big(11));
        for q in 2..=16 {
            for r in 1..=8 {
                lemma_rhs(q, r).unwrap();
            }
        }
    }

    #[test]
    fn thm32_equals_cor33_on_grid() {
        // direct oracle: independent integer cross-multiplication
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for rr in 3..=6u64 {
                for d in 1..=100u64 {
                    let t = thm32_bound(d, q, rr).unwrap();
                    let c = cor33_bound(d, q, rr).unwrap();
                    assert_eq!(t, c.bound);
                    let qi = q as i128;
                    let num = (qi - 1) * (qi.pow(rr as u32 + 1) - 1) * d as i128;
                    let den = qi * (qi.pow(rr as u32) - 1) - rr as i128 * (qi - 1);
                    assert_eq!(t.floor, BigInt::from(num.div_euclid(den)));
                    if d >= q {
                        assert!(sziklai_bound(d, q) >= c.bound.floor);
                    }
                }
            }
        }
    }

    #[test]
    fn comb_dominates_sziklai() {
        for q in [2u64, 3, 4, 5] {
            for rr in 2..=5usize {
                let g = (0..=rr as u32 - 2).map(|i| q.pow(i)).sum::<u64>();
                for d in 1..=60u64 {
                    let c = comb_bound(d, q, rr).unwrap();
                    let s = sziklai_bound(d, q);
                    assert!(c >= s);
                    assert_eq!(c == s, d - 1 < g);
                }
            }
        }
    }

    #[test]
    fn case_split() {
        assert_eq!(proof_case(3, 2, 3), ProofCase::Both);
        assert_eq!(proof_case(1, 5, 3), ProofCase::Combinatorial);
        assert_eq!(proof_case(9, 2, 3), ProofCase::Corollary33);
        assert_eq!(proof_case(9, 2, 2), ProofCase::NotApplicable);
    }

    #[test]
    fn suite_passes() {
        let rep = proof_ineq_suite(2, 3, 2..=100).unwrap();
        assert!(rep.total_cases() > 0);
        proof_ineq_suite(2, 5, 2..=50).unwrap();
        let rep4 = proof_ineq_suite(4, 3, 1..=40).unwrap();
        assert!(rep4.checks.iter().any(|c| c.check == "d-union" && c.cases > 0));
        assert!(proof_ineq_suite(2, 2, 1..=5).is_err());
    }

    #[test]
    fn gap_example() {
        // (16 + 8 + 3) - 4·4 = 11
        assert_eq!(s_sum(4, 3) - big(16), big(11));
        assert_eq!((big(1)) * s_sum(2, 3), big(8 + 4 + 2 - 3));
    }

    #[test]
    fn verify_k() {
        let rep = verify_curve(&sziklai_k()).unwrap();
        assert_eq!(rep.n_observed, 14);
        assert_eq!(rep.sziklai, big(13));
        assert!(!rep.sziklai_satisfied);
        assert!(rep.exception);
        assert!(!rep.unexpected_violation());
    }

    #[test]
    fn verify_hermitian_equality() {
        let rep = verify_curve(&hermitian(2).unwrap()).unwrap();
        assert_eq!((rep.n_observed, rep.sziklai.clone()), (9, big(9)));
        assert!(rep.sziklai_satisfied && rep.sziklai_equality && rep.all_satisfied);
        assert_eq!(rep.proof_case, ProofCase::NotApplicable);
    }

    #[test]
    fn verify_twisted_cubic() {
        let rep = verify_curve(&catalog("twisted-cubic(2)").unwrap()).unwrap();
        assert_eq!(rep.n_observed, 3);
        assert!(rep.all_satisfied);
        assert_eq!(rep.proof_case, ProofCase::Both);
    }

    #[test]
    fn rational_normal_bounds_strict() {
        for rr in [3usize, 4] {
            for q in [2u64, 3, 4, 5] {
                let rep = verify_curve(&rational_normal(rr, q).unwrap()).unwrap();
                assert_eq!(rep.n_observed, q + 1);
                assert!(big(rep.n_observed) < rep.sziklai);
                assert!(big(rep.n_observed) < rep.thm32.as_ref().unwrap().value.to_integer() + 1);
                assert!(rat(big(rep.n_observed)) < rep.thm32.unwrap().value);
                assert!(big(rep.n_observed) < rep.comb.unwrap());
            }
        }
    }

    #[test]
    fn only_k_violates() {
        let violators: Vec<String> = catalog_instances()
            .iter()
            .map(|c| verify_curve(c).unwrap())
            .filter(|rep| !rep.all_satisfied)
            .map(|rep| rep.curve)
            .collect();
        assert_eq!(violators.len(), 1);
        assert!(violators[0].contains("sziklai-K"));
    }

    #[test]
    fn incidence_counts() {
        assert_eq!(incidence_count_q(&catalog("twisted-cubic(2)").unwrap()).unwrap(), (21, 21));
        assert_eq!(incidence_count_q(&hermitian(2).unwrap()).unwrap(), (45, 45));
        let space = catalog("twisted-cubic(2)").unwrap().space();
        assert_eq!(incidence_count_points(&space, &[]), (0, 0));
        for c in catalog_instances() {
            let (a, b) = incidence_count_q(&c).unwrap();
            assert_eq!(a, b, "{}", c.label());
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(thm32_bound(4, 2, 3).unwrap()).unwrap();
        assert_eq!(v, serde_json::json!({"value": "60/11", "floor": 5}));
        let v = serde_json::to_value(cor33_bound(5, 3, 3).unwrap()).unwrap();
        assert_eq!(v, serde_json::json!({"s": 18, "value": "100/9", "floor": 11}));
    }
}
