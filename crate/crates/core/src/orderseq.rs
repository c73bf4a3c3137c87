//! Hyperplane multiplicities along a curve branch and the order sequence.
//!
//! A branch centered at `P = (1, 0, …, 0)` is given in the affine chart by
//! `r` power series `x_i(t)` with no constant term. A hyperplane through
//! `P` is `α₁x₁ + … + α_r x_r = 0` and meets the branch with multiplicity
//! `ord_t(Σ α_i x_i(t))`. Row reducing the coefficient matrix gives the
//! distinct values `j₁ < … < j_r` of these multiplicities.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::bounds::lemma_rhs;
use crate::gf::{FieldDescription, FieldElement, FieldSpec, GfError};
use crate::linalg::{inverse, row_reduce};
use crate::poly::{dense, PolyError, TruncatedSeries};
use crate::projspace::ProjSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderSeqError {
    #[error("every series vanishes through t^{0}")]
    AllSeriesZero(usize),
    #[error("the zero covector is not a hyperplane")]
    ZeroCovector,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("a branch needs r >= 1 series")]
    NoSeries,
    #[error("no branches supplied")]
    NoBranches,
    #[error("branches disagree on {0}")]
    BranchMismatch(&'static str),
    #[error(
        "insufficient precision: the hyperplane {covector} vanishes on branch {branch} through t^{truncation}; \
         raise the truncation, or the hyperplane contains the branch"
    )]
    InsufficientPrecision { covector: String, branch: usize, truncation: usize },
    #[error("the matrix must fix the center (1,0,…,0) and be invertible")]
    CenterNotFixed,
    #[error("coefficient {index} is not in GF({q}); series over extension fields are unsupported")]
    ExtensionCoefficient { index: u32, q: u32 },
    #[error("file has r = {r} but {got} series")]
    SeriesCount { r: usize, got: usize },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `r` truncated series sharing the truncation `T`, coefficients in GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    field: Arc<FieldSpec>,
    series: Vec<TruncatedSeries>,
}

/// File form: `{"field": {...}, "r": r, "truncation": T, "series": [[c11, …, c1T], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchFile {
    pub field: FieldDescription,
    pub r: usize,
    pub truncation: usize,
    pub series: Vec<Vec<u32>>,
}

impl Branch {
    pub fn new(field: Arc<FieldSpec>, series: Vec<TruncatedSeries>) -> Result<Self, OrderSeqError> {
        let t = series.first().ok_or(OrderSeqError::NoSeries)?.truncation();
        if let Some(s) = series.iter().find(|s| s.truncation() != t) {
            return Err(PolyError::TruncationMismatch(t, s.truncation()).into());
        }
        if series.iter().all(|s| s.ord().is_none()) {
            return Err(OrderSeqError::AllSeriesZero(t));
        }
        Ok(Branch { field, series })
    }

    pub fn from_file(file: &BranchFile) -> Result<Self, OrderSeqError> {
        let field = Arc::new(FieldSpec::from_description(&file.field)?);
        if file.series.len() != file.r {
            return Err(OrderSeqError::SeriesCount { r: file.r, got: file.series.len() });
        }
        let q = field.q();
        let mut series = Vec::with_capacity(file.r);
        for row in &file.series {
            if row.len() != file.truncation {
                return Err(PolyError::TruncationMismatch(file.truncation, row.len()).into());
            }
            if let Some(&index) = row.iter().find(|&&c| c >= q) {
                return Err(OrderSeqError::ExtensionCoefficient { index, q });
            }
            series.push(TruncatedSeries::new(row.iter().map(|&c| FieldElement::from_index_unchecked(c)).collect())?);
        }
        Branch::new(field, series)
    }

    pub fn to_file(&self) -> BranchFile {
        BranchFile {
            field: self.field.description(),
            r: self.r(),
            truncation: self.truncation(),
            series: self.series.iter().map(|s| s.coeffs().iter().map(|c| c.index()).collect()).collect(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn r(&self) -> usize {
        self.series.len()
    }

    pub fn truncation(&self) -> usize {
        self.series[0].truncation()
    }

    pub fn series(&self) -> &[TruncatedSeries] {
        &self.series
    }

    /// The same branch after the projective change of coordinates
    /// `y = M (1, x)`. `M` is `(r+1) × (r+1)`, invertible, and must send the
    /// center to itself (first column `(c, 0, …, 0)`, `c ≠ 0`).
    pub fn transformed(&self, m: &[Vec<FieldElement>]) -> Result<Branch, OrderSeqError> {
        let f = &*self.field;
        let n = self.r() + 1;
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(OrderSeqError::DimensionMismatch { expected: n, got: m.len() });
        }
        if m[0][0].is_zero() || m[1..].iter().any(|row| !row[0].is_zero()) || inverse(f, m).is_none() {
            return Err(OrderSeqError::CenterNotFixed);
        }
        let len = self.truncation() + 1;
        // dense[k] is the coefficient of t^k
        let affine = |row: &[FieldElement]| -> Vec<FieldElement> {
            let mut out = vec![FieldElement::ZERO; len];
            out[0] = row[0];
            for (&a, s) in row[1..].iter().zip(&self.series) {
                for (k, &c) in s.coeffs().iter().enumerate() {
                    out[k + 1] = f.add(out[k + 1], f.mul(a, c));
                }
            }
            out
        };
        let denom = dense::inverse(f, &affine(&m[0]), len).expect("constant term is m[0][0] != 0");
        let series = m[1..]
            .iter()
            .map(|row| {
                let num = affine(row);
                TruncatedSeries::new(dense::mul(f, &num, &denom, len)[1..].to_vec())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Branch::new(self.field.clone(), series)
    }
}

/// The branch `x_i = t^i`, `i = 1..r`, of the rational normal curve at
/// `(1, 0, …, 0)`.
pub fn rational_normal_branch(field: Arc<FieldSpec>, r: usize, truncation: usize) -> Result<Branch, OrderSeqError> {
    if r == 0 {
        return Err(OrderSeqError::NoSeries);
    }
    Branch::new(field, (1..=r).map(|i| TruncatedSeries::monomial(i, truncation)).collect())
}

/// Default truncation for an ambient dimension `r`.
pub fn default_truncation(r: usize) -> usize {
    4 * r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSequence {
    pub j: Vec<usize>,
    /// All `r` values were found within the truncation.
    pub complete: bool,
}

impl std::fmt::Display for OrderSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let js: Vec<String> = self.j.iter().map(|j| j.to_string()).collect();
        write!(f, "({}){}", js.join(","), if self.complete { "" } else { " incomplete" })
    }
}

/// Pivot columns of the `r × T` coefficient matrix in row-echelon form.
pub fn order_sequence(b: &Branch) -> OrderSequence {
    let rows: Vec<Vec<FieldElement>> = b.series.iter().map(|s| s.coeffs().to_vec()).collect();
    let (_, pivots) = row_reduce(&b.field, &rows);
    let j: Vec<usize> = pivots.into_iter().map(|c| c + 1).collect();
    OrderSequence { complete: j.len() == b.r(), j }
}

/// `ord_t(Σ α_i x_i)`, or `None` when that series vanishes through `t^T`.
pub fn mult_at(b: &Branch, alpha: &[FieldElement]) -> Result<Option<usize>, OrderSeqError> {
    if alpha.len() != b.r() {
        return Err(OrderSeqError::DimensionMismatch { expected: b.r(), got: alpha.len() });
    }
    if alpha.iter().all(|a| a.is_zero()) {
        return Err(OrderSeqError::ZeroCovector);
    }
    Ok(TruncatedSeries::compose_linear(&b.field, alpha, &b.series)?.ord())
}

fn check_branches(branches: &[Branch]) -> Result<(), OrderSeqError> {
    let first = branches.first().ok_or(OrderSeqError::NoBranches)?;
    for b in &branches[1..] {
        if b.field != first.field {
            return Err(OrderSeqError::BranchMismatch("the field"));
        }
        if b.r() != first.r() {
            return Err(OrderSeqError::BranchMismatch("the ambient dimension"));
        }
    }
    Ok(())
}

/// Multiplicity of every hyperplane through the center, summed over the
/// branches, in covector enumeration order.
fn summed_mults(branches: &[Branch]) -> Result<Vec<Result<usize, OrderSeqError>>, OrderSeqError> {
    check_branches(branches)?;
    let b0 = &branches[0];
    let dual = ProjSpace::new(b0.r() - 1, b0.field.clone());
    Ok((0..dual.num_points())
        .into_par_iter()
        .map(|i| {
            let alpha = dual.point_at(i);
            let mut total = 0;
            for (k, b) in branches.iter().enumerate() {
                match mult_at(b, alpha.coords())? {
                    Some(m) => total += m,
                    None => {
                        return Err(OrderSeqError::InsufficientPrecision {
                            covector: alpha.to_string(),
                            branch: k,
                            truncation: b.truncation(),
                        })
                    }
                }
            }
            Ok(total)
        })
        .collect())
}

/// `Σ_H (i(H.C; P) - 1)` over the `q^(r-1) + … + 1` hyperplanes through the
/// center, or `None` if some multiplicity is beyond the truncation.
pub fn excess_sum(b: &Branch) -> Result<Option<u64>, OrderSeqError> {
    match excess_sum_branches(std::slice::from_ref(b)) {
        Err(OrderSeqError::InsufficientPrecision { .. }) => Ok(None),
        other => other.map(Some),
    }
}

/// Excess with the multiplicity of each hyperplane summed over all branches
/// at the center. Errors with the first hyperplane whose multiplicity is
/// beyond the truncation.
pub fn excess_sum_branches(branches: &[Branch]) -> Result<u64, OrderSeqError> {
    let mut total = 0u64;
    for m in summed_mults(branches)? {
        total += m? as u64 - 1;
    }
    Ok(total)
}

/// How many hyperplanes through the center have each multiplicity.
pub fn mult_histogram(b: &Branch) -> Result<Option<BTreeMap<usize, u64>>, OrderSeqError> {
    let mut hist = BTreeMap::new();
    for m in summed_mults(std::slice::from_ref(b))? {
        match m {
            Ok(m) => *hist.entry(m).or_insert(0) += 1,
            Err(OrderSeqError::InsufficientPrecision { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(hist))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub q: u32,
    pub r: usize,
    pub branches: usize,
    pub truncation: usize,
    pub order_sequences: Vec<OrderSequence>,
    pub excess: u64,
    pub rhs: u64,
    pub ok: bool,
    pub equality: bool,
    /// Multiplicities are summed over the supplied branches, which is exact
    /// only if every branch at the center was supplied.
    pub note: &'static str,
}

/// Compares the excess at a center with `(q^(r-1) + … + 1 - r)/(q-1)`.
pub fn check_lemma(branches: &[Branch]) -> Result<LemmaReport, OrderSeqError> {
    let excess = excess_sum_branches(branches)?;
    let b0 = &branches[0];
    let q = b0.field.q();
    let rhs = lemma_rhs(u64::from(q), b0.r() as u64)
        .expect("q >= 2, r >= 1")
        .try_into()
        .expect("fits in u64");
    Ok(LemmaReport {
        q,
        r: b0.r(),
        branches: branches.len(),
        truncation: branches.iter().map(Branch::truncation).min().unwrap_or(0),
        order_sequences: branches.iter().map(order_sequence).collect(),
        excess,
        rhs,
        ok: excess >= rhs,
        equality: excess == rhs,
        note: "hyperplane multiplicities are summed over the supplied branches",
    })
}

/// A branch whose `r × T` coefficient matrix is uniformly random of full
/// rank, so its order sequence is complete.
pub fn random_complete_branch<R: Rng>(
    field: &Arc<FieldSpec>,
    r: usize,
    truncation: usize,
    rng: &mut R,
) -> Result<Branch, OrderSeqError> {
    if truncation < r {
        return Err(OrderSeqError::DimensionMismatch { expected: r, got: truncation });
    }
    let q = field.q();
    loop {
        let rows: Vec<Vec<FieldElement>> = (0..r)
            .map(|_| (0..truncation).map(|_| FieldElement::from_index_unchecked(rng.gen_range(0..q))).collect())
            .collect();
        if row_reduce(field, &rows).1.len() == r {
            let series = rows.into_iter().map(TruncatedSeries::new).collect::<Result<Vec<_>, _>>()?;
            return Branch::new(field.clone(), series);
        }
    }
}
