//! Exhaustive scan of plane curves of degree `d` over GF(q).
//!
//! Every nonzero ternary form is visited once per scalar class (leading
//! coefficient 1). Forms with a GF(q)-linear factor are skipped, and the
//! remaining point counts are compared with `(d-1)q + 1`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{FieldElement, FieldSpec};
use crate::poly::{HomogeneousPoly, Monomial};
use crate::projspace::ProjSpace;

pub const DEFAULT_SCAN_CAP: u128 = 10_000_000;

/// Argmax and violator lists keep at most this many forms.
pub const LIST_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("{classes} scalar classes of degree-{d} forms over GF({q}) exceed the cap of {cap}; pass --allow-large to run anyway")]
    ScanTooLarge { q: u64, d: u32, classes: u128, cap: u128 },
    #[error("degree must be at least 1")]
    ZeroDegree,
}

/// Monomials `x^a y^b z^c`, `a + b + c = d`, in descending lex order.
pub fn plane_monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push(vec![a, b, d - a - b]);
        }
    }
    out
}

/// `(q^n - 1)/(q - 1)` for `n` monomials, saturating.
pub fn scalar_classes(q: u64, d: u32) -> u128 {
    let n = (d + 1) * (d + 2) / 2;
    match (q as u128).checked_pow(n) {
        Some(total) => (total - 1) / (q as u128 - 1),
        None => u128::MAX,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanHit {
    pub form: String,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub q: u64,
    pub d: u32,
    pub monomials: usize,
    pub classes: u64,
    pub with_linear_component: u64,
    pub kept: u64,
    /// Largest point count among kept forms.
    pub max_n: Option<u64>,
    pub argmax_count: u64,
    /// First forms (in enumeration order) attaining `max_n`.
    pub argmax: Vec<String>,
    pub bound: u64,
    pub violator_count: u64,
    pub violators: Vec<ScanHit>,
}

impl ScanReport {
    pub fn within_bound(&self) -> bool {
        self.violator_count == 0
    }
}

#[derive(Default)]
struct Partial {
    with_linear_component: u64,
    kept: u64,
    max_n: Option<u64>,
    argmax_count: u64,
    argmax: Vec<Vec<FieldElement>>,
    violator_count: u64,
    violators: Vec<(Vec<FieldElement>, u64)>,
}

impl Partial {
    fn record(&mut self, coeffs: &[FieldElement], n: u64, bound: u64) {
        self.kept += 1;
        match self.max_n {
            Some(m) if n < m => {}
            Some(m) if n == m => {
                self.argmax_count += 1;
                if self.argmax.len() < LIST_CAP {
                    self.argmax.push(coeffs.to_vec());
                }
            }
            _ => {
                self.max_n = Some(n);
                self.argmax_count = 1;
                self.argmax = vec![coeffs.to_vec()];
            }
        }
        if n > bound {
            self.violator_count += 1;
            if self.violators.len() < LIST_CAP {
                self.violators.push((coeffs.to_vec(), n));
            }
        }
    }

    /// `other` covers later classes than `self`.
    fn merge(mut self, other: Partial) -> Partial {
        self.with_linear_component += other.with_linear_component;
        self.kept += other.kept;
        self.violator_count += other.violator_count;
        let room = LIST_CAP - self.violators.len();
        self.violators.extend(other.violators.into_iter().take(room));
        match (self.max_n, other.max_n) {
            (_, None) => {}
            (Some(a), Some(b)) if a > b => {}
            (Some(a), Some(b)) if a == b => {
                self.argmax_count += other.argmax_count;
                let room = LIST_CAP - self.argmax.len();
                self.argmax.extend(other.argmax.into_iter().take(room));
            }
            _ => {
                self.max_n = other.max_n;
                self.argmax_count = other.argmax_count;
                self.argmax = other.argmax;
            }
        }
        self
    }
}

/// Scans all degree-`d` plane forms over `field`. `cap` bounds the number of
/// scalar classes; `None` lifts it.
pub fn scan_plane(field: Arc<FieldSpec>, d: u32, cap: Option<u128>) -> Result<ScanReport, ScanError> {
    if d == 0 {
        return Err(ScanError::ZeroDegree);
    }
    let q = u64::from(field.q());
    let classes = scalar_classes(q, d);
    if let Some(cap) = cap {
        if classes > cap {
            return Err(ScanError::ScanTooLarge { q, d, classes, cap });
        }
    }
    let classes = u64::try_from(classes).map_err(|_| ScanError::ScanTooLarge { q, d, classes, cap: u64::MAX as u128 })?;
    let monomials = plane_monomials(d);
    let plane = ProjSpace::new(2, field.clone());
    let points = plane.enum_points();
    // values[p][k] = k-th monomial at point p
    let values: Vec<Vec<FieldElement>> = points
        .iter()
        .map(|p| monomials.iter().map(|m| monomial_value(&field, m, p.coords())).collect())
        .collect();
    let lines: Vec<(Vec<FieldElement>, Vec<usize>)> = plane
        .hyperplanes()
        .map(|h| {
            let on: Vec<usize> = points.iter().enumerate().filter(|(_, p)| plane.on(p, &h)).map(|(i, _)| i).collect();
            (h.covector().to_vec(), on)
        })
        .collect();
    let bound = (u64::from(d) - 1) * q + 1;
    let forms = ProjSpace::new(monomials.len() - 1, field.clone());
    let chunks = 1024u64.min(classes).max(1);
    let chunk = classes.div_ceil(chunks);
    let f = &*field;

    let partial = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let (start, end) = (i * chunk, ((i + 1) * chunk).min(classes));
            let mut acc = Partial::default();
            if start >= end {
                return acc;
            }
            let mut coeffs = forms.vector_at(start);
            let mut zero = vec![false; points.len()];
            for k in start..end {
                let mut n = 0u64;
                for (z, vals) in zero.iter_mut().zip(&values) {
                    let v = coeffs.iter().zip(vals).fold(FieldElement::ZERO, |s, (&c, &x)| {
                        if c.is_zero() { s } else { f.add(s, f.mul(c, x)) }
                    });
                    *z = v.is_zero();
                    n += u64::from(*z);
                }
                let linear = lines.iter().any(|(cov, on)| {
                    on.iter().all(|&p| zero[p]) && form(f, d, &monomials, &coeffs).divisible_by_covector(f, cov)
                });
                if linear {
                    acc.with_linear_component += 1;
                } else {
                    acc.record(&coeffs, n, bound);
                }
                if k + 1 < end {
                    forms.advance(&mut coeffs);
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Partial::default(), Partial::merge);

    let show = |c: &[FieldElement]| form(f, d, &monomials, c).to_string();
    Ok(ScanReport {
        q,
        d,
        monomials: monomials.len(),
        classes,
        with_linear_component: partial.with_linear_component,
        kept: partial.kept,
        max_n: partial.max_n,
        argmax_count: partial.argmax_count,
        argmax: partial.argmax.iter().map(|c| show(c)).collect(),
        bound,
        violator_count: partial.violator_count,
        violators: partial.violators.iter().map(|(c, n)| ScanHit { form: show(c), n: *n }).collect(),
    })
}

fn monomial_value(field: &FieldSpec, mono: &Monomial, x: &[FieldElement]) -> FieldElement {
    mono.iter().zip(x).fold(FieldElement::ONE, |acc, (&e, &xi)| field.mul(acc, field.pow(xi, u64::from(e))))
}

fn form(field: &FieldSpec, d: u32, monomials: &[Monomial], coeffs: &[FieldElement]) -> HomogeneousPoly {
    HomogeneousPoly::new(field, 3, d, monomials.iter().cloned().zip(coeffs.iter().copied()))
        .expect("nonzero homogeneous form")
}
