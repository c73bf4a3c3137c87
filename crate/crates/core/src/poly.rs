//! Sparse homogeneous polynomials over GF(q) and truncated power series.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldElement, FieldSpec};
use crate::projspace::{Hyperplane, ProjPoint, ProjSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("monomial {monomial:?} has degree {got}, expected {expected}")]
    NonHomogeneous { monomial: Vec<u32>, expected: u32, got: u32 },
    #[error("expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("expected a linear form, got degree {0}")]
    NotLinear(u32),
    #[error("operation supports plane curves only (3 variables), got {0}")]
    UnsupportedAmbient(usize),
    #[error("coefficient {index} is not an element of GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },
    #[error("series truncations differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("a truncated series needs at least one stored coefficient")]
    EmptySeries,
}

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// A nonzero homogeneous polynomial. Terms are kept sorted by monomial in
/// descending lexicographic order with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousPoly {
    nvars: usize,
    degree: u32,
    terms: Vec<(Monomial, FieldElement)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: u32,
    pub monomial: Vec<u32>,
}

/// File form: `{"degree": d, "terms": [{"coeff": c, "monomial": [e0, …]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub degree: u32,
    pub terms: Vec<TermRecord>,
}

type SparseMap = BTreeMap<Monomial, FieldElement>;

fn add_term(field: &FieldSpec, map: &mut SparseMap, mono: Monomial, c: FieldElement) {
    if c.is_zero() {
        return;
    }
    match map.entry(mono) {
        Entry::Occupied(mut slot) => {
            let sum = field.add(*slot.get(), c);
            if sum.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
    }
}

fn sparse_mul(field: &FieldSpec, a: &SparseMap, b: &SparseMap) -> SparseMap {
    let mut out = SparseMap::new();
    for (ma, &ca) in a {
        for (mb, &cb) in b {
            let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            add_term(field, &mut out, m, field.mul(ca, cb));
        }
    }
    out
}

impl HomogeneousPoly {
    /// Builds a polynomial from `(monomial, coefficient)` pairs, merging
    /// repeated monomials and dropping zero coefficients.
    pub fn new(
        field: &FieldSpec,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Result<Self, PolyError> {
        if degree == 0 {
            return Err(PolyError::ZeroDegree);
        }
        let mut map = SparseMap::new();
        for (mono, c) in terms {
            if mono.len() != nvars {
                return Err(PolyError::DimensionMismatch { expected: nvars, got: mono.len() });
            }
            let got: u32 = mono.iter().sum();
            if got != degree {
                return Err(PolyError::NonHomogeneous { monomial: mono, expected: degree, got });
            }
            if c.index() >= field.q() {
                return Err(PolyError::ElementOutOfRange { index: c.index(), q: field.q() });
            }
            add_term(field, &mut map, mono, c);
        }
        Self::from_map(nvars, degree, map)
    }

    fn from_map(nvars: usize, degree: u32, map: SparseMap) -> Result<Self, PolyError> {
        if map.is_empty() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut terms: Vec<(Monomial, FieldElement)> = map.into_iter().collect();
        terms.reverse();
        Ok(HomogeneousPoly { nvars, degree, terms })
    }

    /// The linear form `Σ cᵢ xᵢ`.
    pub fn linear(field: &FieldSpec, coeffs: &[FieldElement]) -> Result<Self, PolyError> {
        let n = coeffs.len();
        Self::new(
            field,
            n,
            1,
            coeffs.iter().enumerate().map(|(i, &c)| {
                let mut m = vec![0; n];
                m[i] = 1;
                (m, c)
            }),
        )
    }

    pub fn from_record(field: &FieldSpec, nvars: usize, rec: &PolyRecord) -> Result<Self, PolyError> {
        Self::new(
            field,
            nvars,
            rec.degree,
            rec.terms.iter().map(|t| (t.monomial.clone(), FieldElement::from_index_unchecked(t.coeff))),
        )
    }

    pub fn to_record(&self) -> PolyRecord {
        PolyRecord {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRecord { coeff: c.index(), monomial: m.clone() })
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    /// Evaluation at a raw coordinate vector without a length check.
    #[inline]
    pub fn eval_raw(&self, field: &FieldSpec, x: &[FieldElement]) -> FieldElement {
        self.terms.iter().fold(FieldElement::ZERO, |acc, (mono, c)| {
            let mut t = *c;
            for (&xi, &ei) in x.iter().zip(mono) {
                if ei != 0 {
                    t = field.mul(t, field.pow(xi, ei as u64));
                    if t.is_zero() {
                        break;
                    }
                }
            }
            field.add(acc, t)
        })
    }

    /// Value at the normalized representative of `p`.
    pub fn eval(&self, field: &FieldSpec, p: &ProjPoint) -> Result<FieldElement, PolyError> {
        if p.coords().len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: p.coords().len() });
        }
        Ok(self.eval_raw(field, p.coords()))
    }

    pub fn vanishes_at(&self, field: &FieldSpec, p: &ProjPoint) -> Result<bool, PolyError> {
        Ok(self.eval(field, p)?.is_zero())
    }

    /// Maps every coefficient through `f`, e.g. a field embedding.
    pub fn map_coefficients(&self, f: impl Fn(FieldElement) -> FieldElement) -> Self {
        HomogeneousPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(*c))).collect(),
        }
    }

    /// `f(L₀, …, L_n)` where `forms[i]` holds the coefficients of the linear
    /// form substituted for `xᵢ`, all over the same `m` new variables.
    /// Returns the sparse result, possibly empty (the zero polynomial).
    fn substitute_linear_map(&self, field: &FieldSpec, forms: &[Vec<FieldElement>]) -> SparseMap {
        let m = forms.first().map_or(0, Vec::len);
        let linear_maps: Vec<SparseMap> = forms
            .iter()
            .map(|form| {
                let mut map = SparseMap::new();
                for (j, &c) in form.iter().enumerate() {
                    let mut mono = vec![0; m];
                    mono[j] = 1;
                    add_term(field, &mut map, mono, c);
                }
                map
            })
            .collect();
        let mut one = SparseMap::new();
        one.insert(vec![0; m], FieldElement::ONE);
        // powers[i][k] = L_i^k
        let mut powers: Vec<Vec<SparseMap>> = linear_maps.iter().map(|_| vec![one.clone()]).collect();
        let mut out = SparseMap::new();
        for (mono, c) in &self.terms {
            let mut prod = one.clone();
            for (i, &e) in mono.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = sparse_mul(field, powers[i].last().unwrap(), &linear_maps[i]);
                    powers[i].push(next);
                }
                prod = sparse_mul(field, &prod, &powers[i][e as usize]);
                if prod.is_empty() {
                    break;
                }
            }
            for (pm, pc) in prod {
                add_term(field, &mut out, pm, field.mul(*c, pc));
            }
        }
        out
    }

    /// The polynomial `x ↦ f(M x)` for a square matrix `M`.
    pub fn pull_back(&self, field: &FieldSpec, matrix: &[Vec<FieldElement>]) -> Result<Self, PolyError> {
        if matrix.len() != self.nvars || matrix.iter().any(|r| r.len() != self.nvars) {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: matrix.len() });
        }
        let map = self.substitute_linear_map(field, matrix);
        Self::from_map(self.nvars, self.degree, map)
    }

    /// Whether the linear form `ell` divides `self`.
    ///
    /// Writes `ell = c·x_v + …` with `v` the first variable having a nonzero
    /// coefficient; the remainder of dividing by `ell` with respect to `x_v` is
    /// `self` with `x_v` replaced by `-(ell - c·x_v)/c`, and `ell` divides
    /// `self` exactly when that remainder is zero.
    pub fn divides_linear(&self, field: &FieldSpec, ell: &HomogeneousPoly) -> Result<bool, PolyError> {
        if ell.degree != 1 {
            return Err(PolyError::NotLinear(ell.degree));
        }
        if ell.nvars != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: ell.nvars });
        }
        let mut coeffs = vec![FieldElement::ZERO; self.nvars];
        for (mono, c) in &ell.terms {
            let i = mono.iter().position(|&e| e == 1).expect("linear monomial");
            coeffs[i] = *c;
        }
        Ok(self.divisible_by_covector(field, &coeffs))
    }

    /// [`divides_linear`](Self::divides_linear) with the form given as a
    /// coefficient vector.
    pub fn divisible_by_covector(&self, field: &FieldSpec, coeffs: &[FieldElement]) -> bool {
        let pivot = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero linear form");
        let scale = field.inv(coeffs[pivot]).unwrap();
        let forms: Vec<Vec<FieldElement>> = (0..self.nvars)
            .map(|i| {
                if i == pivot {
                    coeffs.iter().map(|&c| field.neg(field.mul(c, scale))).enumerate()
                        .map(|(j, c)| if j == pivot { FieldElement::ZERO } else { c })
                        .collect()
                } else {
                    let mut v = vec![FieldElement::ZERO; self.nvars];
                    v[i] = FieldElement::ONE;
                    v
                }
            })
            .collect();
        self.substitute_linear_map(field, &forms).is_empty()
    }

    /// First GF(q)-linear form, in hyperplane enumeration order of PG(2, q),
    /// dividing this plane polynomial.
    pub fn has_linear_component(&self, space: &ProjSpace) -> Result<Option<Hyperplane>, PolyError> {
        if self.nvars != 3 || space.dim() != 2 {
            return Err(PolyError::UnsupportedAmbient(self.nvars));
        }
        let field = space.field();
        Ok(space.hyperplanes().find(|h| self.divisible_by_covector(field, h.covector())))
    }
}

const VARS: [&str; 4] = ["x", "y", "z", "w"];

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if c.index() != 1 {
                parts.push(format!("{c}"));
            }
            for (i, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = if self.nvars <= 4 { VARS[i].to_string() } else { format!("x{i}") };
                parts.push(if e == 1 { v } else { format!("{v}^{e}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// A power series `c₁t + c₂t² + … + c_T t^T` modulo `t^(T+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<FieldElement>,
}

/// File form: `{"truncation": T, "coeffs": [c1, …, cT]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub truncation: usize,
    pub coeffs: Vec<u32>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::EmptySeries);
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn zero(truncation: usize) -> Self {
        TruncatedSeries { coeffs: vec![FieldElement::ZERO; truncation.max(1)] }
    }

    /// `t^k` truncated at `T`; zero if `k > T`.
    pub fn monomial(k: usize, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if (1..=truncation).contains(&k) {
            s.coeffs[k - 1] = FieldElement::ONE;
        }
        s
    }

    pub fn from_record(field: &FieldSpec, rec: &SeriesRecord) -> Result<Self, PolyError> {
        if rec.coeffs.len() != rec.truncation {
            return Err(PolyError::TruncationMismatch(rec.truncation, rec.coeffs.len()));
        }
        if let Some(&c) = rec.coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(PolyError::ElementOutOfRange { index: c, q: field.q() });
        }
        Self::new(rec.coeffs.iter().map(|&c| FieldElement::from_index_unchecked(c)).collect())
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord { truncation: self.truncation(), coeffs: self.coeffs.iter().map(|c| c.index()).collect() }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients of `t¹ … t^T`.
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, `k ≥ 1`.
    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k.wrapping_sub(1)).copied().unwrap_or(FieldElement::ZERO)
    }

    /// The `t`-adic order, or `None` when every stored coefficient is zero
    /// (the order exceeds the truncation).
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| i + 1)
    }

    /// `Σ coeffᵢ · seriesᵢ`.
    pub fn compose_linear(
        field: &FieldSpec,
        coeff: &[FieldElement],
        series: &[TruncatedSeries],
    ) -> Result<TruncatedSeries, PolyError> {
        if coeff.len() != series.len() {
            return Err(PolyError::DimensionMismatch { expected: series.len(), got: coeff.len() });
        }
        let t = series.first().ok_or(PolyError::EmptySeries)?.truncation();
        if let Some(s) = series.iter().find(|s| s.truncation() != t) {
            return Err(PolyError::TruncationMismatch(t, s.truncation()));
        }
        let mut out = vec![FieldElement::ZERO; t];
        for (&a, s) in coeff.iter().zip(series) {
            if a.is_zero() {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(&s.coeffs) {
                *o = field.add(*o, field.mul(a, c));
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let t = if i == 0 { "t".to_string() } else { format!("t^{}", i + 1) };
                if c.index() == 1 { t } else { format!("{c}*{t}") }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "O(t^{})", self.truncation() + 1)
        } else {
            write!(f, "{} + O(t^{})", parts.join(" + "), self.truncation() + 1)
        }
    }
}

/// Dense series with a constant term, used when a change of coordinates
/// forces division by a unit.
pub(crate) mod dense {
    use crate::gf::{FieldElement, FieldSpec};

    pub fn mul(field: &FieldSpec, a: &[FieldElement], b: &[FieldElement], len: usize) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; len];
        for (i, &x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len - i) {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
        out
    }

    /// Inverse of a series with nonzero constant term, modulo `t^len`.
    pub fn inverse(field: &FieldSpec, a: &[FieldElement], len: usize) -> Option<Vec<FieldElement>> {
        let a0 = *a.first()?;
        let inv0 = field.inv(a0).ok()?;
        let mut out = vec![FieldElement::ZERO; len];
        out[0] = inv0;
        for k in 1..len {
            let mut s = FieldElement::ZERO;
            for j in 1..=k.min(a.len() - 1) {
                s = field.add(s, field.mul(a[j], out[k - j]));
            }
            out[k] = field.neg(field.mul(s, inv0));
        }
        Some(out)
    }
}
