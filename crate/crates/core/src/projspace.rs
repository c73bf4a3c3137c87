//! Points, hyperplanes and incidence in PG(r, q).
//!
//! Both points and hyperplanes are stored normalized: the first nonzero
//! coordinate is 1. Enumeration order groups vectors by the position of that
//! leading 1 (position 0 first) and orders each group lexicographically by
//! the element indices of the remaining coordinates. [`ProjSpace::point_at`]
//! and [`ProjSpace::index_of`] convert between a vector and its rank in this
//! order, which is what lets counting loops split the space into contiguous
//! index ranges.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldElement, FieldSpec};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("flat spans projective dimension {got}, expected {expected}")]
    WrongSpanDimension { expected: isize, got: isize },
    #[error("empty point set")]
    EmptySet,
    #[error("coordinate index {index} is not an element of GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },
}

/// A normalized point of PG(r, q).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint(Vec<FieldElement>);

/// A normalized hyperplane covector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperplane(Vec<FieldElement>);

impl ProjPoint {
    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<FieldElement> {
        self.0
    }
}

impl Hyperplane {
    pub fn covector(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_covector(self) -> Vec<FieldElement> {
        self.0
    }
}

fn write_bracketed(f: &mut fmt::Formatter<'_>, v: &[FieldElement]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

/// Scales a vector so its first nonzero entry is 1.
pub fn normalize_vec(field: &FieldSpec, coords: &[FieldElement]) -> Result<Vec<FieldElement>, ProjError> {
    let lead = coords.iter().copied().find(|x| !x.is_zero()).ok_or(ProjError::ZeroVector)?;
    let scale = field.inv(lead).expect("lead is nonzero");
    Ok(coords.iter().map(|&x| field.mul(x, scale)).collect())
}

/// `1 + q + … + q^k`, i.e. the number of points of PG(k, q). Zero for `k < 0`.
pub fn gaussian_count(q: u64, k: i64) -> u64 {
    if k < 0 {
        return 0;
    }
    (0..=k).fold(0u64, |acc, _| acc * q + 1)
}

/// [`gaussian_count`], or `None` on u64 overflow.
pub fn checked_gaussian_count(q: u64, k: i64) -> Option<u64> {
    if k < 0 {
        return Some(0);
    }
    (0..=k).try_fold(0u64, |acc, _| acc.checked_mul(q)?.checked_add(1))
}

/// The projective space PG(r, q).
#[derive(Debug, Clone)]
pub struct ProjSpace {
    dim: usize,
    field: Arc<FieldSpec>,
}

impl ProjSpace {
    pub fn new(dim: usize, field: Arc<FieldSpec>) -> Self {
        ProjSpace { dim, field }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// `(q^(r+1) - 1) / (q - 1)`; also the number of hyperplanes.
    pub fn num_points(&self) -> u64 {
        gaussian_count(self.q(), self.dim as i64)
    }

    /// Number of hyperplanes through a fixed point: `q^(r-1) + … + 1`.
    pub fn hyperplanes_per_point(&self) -> u64 {
        gaussian_count(self.q(), self.dim as i64 - 1)
    }

    fn check_len(&self, len: usize) -> Result<(), ProjError> {
        if len == self.dim + 1 {
            Ok(())
        } else {
            Err(ProjError::DimensionMismatch { expected: self.dim + 1, got: len })
        }
    }

    fn check_elements(&self, v: &[FieldElement]) -> Result<(), ProjError> {
        let q = self.field.q();
        match v.iter().find(|x| x.index() >= q) {
            Some(x) => Err(ProjError::ElementOutOfRange { index: x.index(), q }),
            None => Ok(()),
        }
    }

    pub fn normalize(&self, coords: &[FieldElement]) -> Result<ProjPoint, ProjError> {
        self.check_len(coords.len())?;
        self.check_elements(coords)?;
        normalize_vec(&self.field, coords).map(ProjPoint)
    }

    pub fn normalize_hyperplane(&self, covector: &[FieldElement]) -> Result<Hyperplane, ProjError> {
        self.check_len(covector.len())?;
        self.check_elements(covector)?;
        normalize_vec(&self.field, covector).map(Hyperplane)
    }

    /// Point from raw indices, e.g. parsed from a file.
    pub fn point_from_indices(&self, indices: &[u32]) -> Result<ProjPoint, ProjError> {
        let v: Vec<FieldElement> = indices.iter().map(|&i| FieldElement::from_index_unchecked(i)).collect();
        self.normalize(&v)
    }

    /// The `index`-th normalized vector in enumeration order.
    pub fn vector_at(&self, index: u64) -> Vec<FieldElement> {
        let q = self.q();
        let r = self.dim;
        let mut rest = index;
        for lead in 0..=r {
            let class = q.pow((r - lead) as u32);
            if rest < class {
                let mut v = vec![FieldElement::ZERO; r + 1];
                v[lead] = FieldElement::ONE;
                for pos in (lead + 1..=r).rev() {
                    v[pos] = FieldElement::from_index_unchecked((rest % q) as u32);
                    rest /= q;
                }
                return v;
            }
            rest -= class;
        }
        panic!("index {index} out of range for PG({r},{q})");
    }

    /// Rank of a normalized vector in enumeration order.
    pub fn vector_index(&self, v: &[FieldElement]) -> u64 {
        let q = self.q();
        let r = self.dim;
        let lead = v.iter().position(|x| !x.is_zero()).expect("normalized vector is nonzero");
        let offset: u64 = (0..lead).map(|k| q.pow((r - k) as u32)).sum();
        let within = v[lead + 1..].iter().fold(0u64, |acc, x| acc * q + x.index() as u64);
        offset + within
    }

    pub fn point_at(&self, index: u64) -> ProjPoint {
        ProjPoint(self.vector_at(index))
    }

    pub fn hyperplane_at(&self, index: u64) -> Hyperplane {
        Hyperplane(self.vector_at(index))
    }

    pub fn index_of(&self, p: &ProjPoint) -> u64 {
        self.vector_index(&p.0)
    }

    pub fn hyperplane_index(&self, h: &Hyperplane) -> u64 {
        self.vector_index(&h.0)
    }

    /// Steps a normalized vector to its successor in enumeration order.
    /// Returns `false` (leaving `v` unspecified) after the last vector.
    pub fn advance(&self, v: &mut [FieldElement]) -> bool {
        let q = self.field.q();
        let lead = v.iter().position(|x| !x.is_zero()).expect("normalized vector is nonzero");
        for pos in (lead + 1..v.len()).rev() {
            let next = v[pos].index() + 1;
            if next < q {
                v[pos] = FieldElement::from_index_unchecked(next);
                return true;
            }
            v[pos] = FieldElement::ZERO;
        }
        v[lead] = FieldElement::ZERO;
        match v.get_mut(lead + 1) {
            Some(x) => {
                *x = FieldElement::ONE;
                true
            }
            None => false,
        }
    }

    /// Points with indices in `start..end`, produced incrementally.
    pub fn points_in_range(&self, start: u64, end: u64) -> impl Iterator<Item = ProjPoint> + '_ {
        let end = end.min(self.num_points());
        let mut current = (start < end).then(|| self.vector_at(start));
        let mut remaining = end.saturating_sub(start);
        std::iter::from_fn(move || {
            if remaining == 0 {
                return None;
            }
            let v = current.as_mut()?;
            let out = ProjPoint(v.clone());
            remaining -= 1;
            if remaining > 0 {
                self.advance(v);
            }
            Some(out)
        })
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.num_points()).map(move |i| self.point_at(i))
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = Hyperplane> + '_ {
        (0..self.num_points()).map(move |i| self.hyperplane_at(i))
    }

    pub fn enum_points(&self) -> Vec<ProjPoint> {
        self.points().collect()
    }

    pub fn enum_hyperplanes(&self) -> Vec<Hyperplane> {
        self.hyperplanes().collect()
    }

    #[inline]
    pub fn pairing(&self, p: &[FieldElement], h: &[FieldElement]) -> FieldElement {
        let f = &*self.field;
        p.iter().zip(h).fold(FieldElement::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// Unchecked incidence for hot loops.
    #[inline]
    pub fn on(&self, p: &ProjPoint, h: &Hyperplane) -> bool {
        self.pairing(&p.0, &h.0).is_zero()
    }

    pub fn incident(&self, p: &ProjPoint, h: &Hyperplane) -> Result<bool, ProjError> {
        self.check_len(p.0.len())?;
        self.check_len(h.0.len())?;
        Ok(self.on(p, h))
    }

    /// All hyperplanes containing every given point, in enumeration order.
    pub fn hyperplanes_containing(&self, points: &[ProjPoint]) -> Result<Vec<Hyperplane>, ProjError> {
        for p in points {
            self.check_len(p.0.len())?;
        }
        let rows: Vec<Vec<FieldElement>> = points.iter().map(|p| p.0.clone()).collect();
        let basis = linalg::null_space(&self.field, &rows, self.dim + 1);
        Ok(self.span_vectors(&basis).into_iter().map(Hyperplane).collect())
    }

    /// Normalized nonzero vectors of the span of `basis` (assumed independent),
    /// sorted in enumeration order.
    fn span_vectors(&self, basis: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
        if basis.is_empty() {
            return Vec::new();
        }
        let f = &*self.field;
        let coeff_space = ProjSpace::new(basis.len() - 1, self.field.clone());
        let mut out: Vec<(u64, Vec<FieldElement>)> = coeff_space
            .points()
            .map(|lambda| {
                let mut v = vec![FieldElement::ZERO; self.dim + 1];
                for (&l, b) in lambda.coords().iter().zip(basis) {
                    if l.is_zero() {
                        continue;
                    }
                    for (x, &bi) in v.iter_mut().zip(b) {
                        *x = f.add(*x, f.mul(l, bi));
                    }
                }
                let v = normalize_vec(f, &v).expect("independent basis");
                (self.vector_index(&v), v)
            })
            .collect();
        out.sort_unstable_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, v)| v).collect()
    }

    /// The `q^(r-1) + … + 1` hyperplanes through `p`.
    pub fn hyperplanes_through(&self, p: &ProjPoint) -> Result<Vec<Hyperplane>, ProjError> {
        self.hyperplanes_containing(std::slice::from_ref(p))
    }

    /// The `q + 1` hyperplanes containing a codimension-2 flat given by a
    /// spanning set of its points.
    pub fn pencil_through_flat(&self, flat: &[ProjPoint]) -> Result<Vec<Hyperplane>, ProjError> {
        let got = self.span_dim(flat)?;
        let expected = self.dim as isize - 2;
        if got != expected {
            return Err(ProjError::WrongSpanDimension { expected, got });
        }
        self.hyperplanes_containing(flat)
    }

    /// Projective dimension of the span: rank of the coordinate matrix minus one.
    pub fn span_dim(&self, points: &[ProjPoint]) -> Result<isize, ProjError> {
        if points.is_empty() {
            return Err(ProjError::EmptySet);
        }
        for p in points {
            self.check_len(p.0.len())?;
        }
        let rows: Vec<Vec<FieldElement>> = points.iter().map(|p| p.0.clone()).collect();
        Ok(linalg::rank(&self.field, &rows) as isize - 1)
    }

    /// All points of the linear span of `points`, in enumeration order.
    pub fn span_points(&self, points: &[ProjPoint]) -> Result<Vec<ProjPoint>, ProjError> {
        if points.is_empty() {
            return Err(ProjError::EmptySet);
        }
        let rows: Vec<Vec<FieldElement>> = points.iter().map(|p| p.0.clone()).collect();
        let (basis, _) = linalg::row_reduce(&self.field, &rows);
        Ok(self.span_vectors(&basis).into_iter().map(ProjPoint).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(r: usize, q: u64) -> ProjSpace {
        ProjSpace::new(r, Arc::new(FieldSpec::of_order(q).unwrap()))
    }

    fn pt(s: &ProjSpace, idx: &[u32]) -> ProjPoint {
        s.point_from_indices(idx).unwrap()
    }

    fn hp(s: &ProjSpace, idx: &[u32]) -> Hyperplane {
        let v: Vec<FieldElement> = idx.iter().map(|&i| FieldElement::from_index_unchecked(i)).collect();
        s.normalize_hyperplane(&v).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let s = space(2, 4);
        assert_eq!(pt(&s, &[0, 2, 2]).coords(), pt(&s, &[0, 1, 1]).coords());
        assert_eq!(pt(&s, &[0, 2, 2]).to_string(), "[0,1,1]");
        assert_eq!(pt(&s, &[1, 0, 1]).to_string(), "[1,0,1]");
        assert_eq!(s.point_from_indices(&[0, 0, 0]), Err(ProjError::ZeroVector));
        assert!(matches!(s.point_from_indices(&[1, 0]), Err(ProjError::DimensionMismatch { .. })));
        assert!(matches!(s.point_from_indices(&[1, 0, 4]), Err(ProjError::ElementOutOfRange { .. })));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(space(2, 2).enum_points().len(), 7);
        assert_eq!(space(3, 2).enum_points().len(), 15);
        assert_eq!(space(3, 4).enum_points().len(), 85);
        assert_eq!(space(2, 3).enum_hyperplanes().len(), 13);
        assert_eq!(space(3, 2).enum_hyperplanes().len(), 15);
        assert_eq!(space(4, 2).enum_hyperplanes().len(), 31);
    }

    #[test]
    fn enumeration_order_and_index_roundtrip() {
        let s = space(2, 3);
        let pts = s.enum_points();
        assert_eq!(pts[0].to_string(), "[1,0,0]");
        assert_eq!(pts[1].to_string(), "[1,0,1]");
        assert_eq!(pts[3].to_string(), "[1,1,0]");
        assert_eq!(pts[9].to_string(), "[0,1,0]");
        assert_eq!(pts[12].to_string(), "[0,0,1]");
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(s.index_of(p), i as u64);
        }
        for r in 2..=3 {
            let s = space(r, 4);
            let all = s.enum_points();
            assert_eq!(s.points_in_range(0, u64::MAX).collect::<Vec<_>>(), all);
            assert_eq!(s.points_in_range(7, 19).collect::<Vec<_>>(), all[7..19].to_vec());
            assert_eq!(s.points_in_range(5, 5).count(), 0);
        }
    }

    #[test]
    fn counts_and_distinctness_exhaustive() {
        for r in 1..=4usize {
            for q in [2u64, 3, 4, 5, 7, 8, 9] {
                let s = space(r, q);
                let expected = (q.pow(r as u32 + 1) - 1) / (q - 1);
                let pts = s.enum_points();
                assert_eq!(pts.len() as u64, expected);
                let mut dedup = pts.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), pts.len());
                assert!(pts.iter().all(|p| s.normalize(p.coords()).unwrap() == *p));
            }
        }
    }

    #[test]
    fn incidence_examples() {
        let s = space(2, 2);
        assert!(s.incident(&pt(&s, &[1, 0, 0]), &hp(&s, &[0, 1, 0])).unwrap());
        assert!(!s.incident(&pt(&s, &[1, 1, 1]), &hp(&s, &[1, 1, 1])).unwrap());
        let s3 = space(3, 3);
        assert!(!s3.incident(&pt(&s3, &[1, 1, 0, 0]), &hp(&s3, &[1, 1, 0, 0])).unwrap());
        assert!(matches!(s.incident(&pt(&s, &[1, 0, 0]), &hp(&s3, &[1, 0, 0, 0])), Err(ProjError::DimensionMismatch { .. })));
    }

    #[test]
    fn hyperplanes_through_a_point() {
        for (r, q, n) in [(3usize, 2u64, 7usize), (2, 4, 5), (3, 3, 13)] {
            let s = space(r, q);
            for p in s.points() {
                let hs = s.hyperplanes_through(&p).unwrap();
                assert_eq!(hs.len(), n);
                assert!(hs.iter().all(|h| s.on(&p, h)));
                let brute: Vec<Hyperplane> = s.hyperplanes().filter(|h| s.on(&p, h)).collect();
                assert_eq!(hs, brute);
            }
        }
    }

    #[test]
    fn incidence_double_count() {
        for r in [2usize, 3] {
            for q in [2u64, 3, 4] {
                let s = space(r, q);
                let pts = s.enum_points();
                let total: u64 = s.hyperplanes().map(|h| pts.iter().filter(|p| s.on(p, &h)).count() as u64).sum();
                assert_eq!(total, s.num_points() * s.hyperplanes_per_point());
            }
        }
    }

    #[test]
    fn hyperplanes_through_two_points() {
        for q in [2u64, 3] {
            let s = space(3, q);
            let pts = s.enum_points();
            let expected = gaussian_count(q, 1);
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    let n = s.hyperplanes().filter(|h| s.on(a, h) && s.on(b, h)).count() as u64;
                    assert_eq!(n, expected);
                }
            }
        }
    }

    #[test]
    fn normalize_constant_on_scalar_orbits() {
        for r in 1..=3usize {
            for q in [2u64, 3, 4] {
                let s = space(r, q);
                let f = s.field().clone();
                let total = q.pow(r as u32 + 1);
                for n in 1..total {
                    let v: Vec<FieldElement> = (0..=r)
                        .map(|i| FieldElement::from_index_unchecked(((n / q.pow(i as u32)) % q) as u32))
                        .collect();
                    let p = s.normalize(&v).unwrap();
                    assert_eq!(s.normalize(p.coords()).unwrap(), p);
                    for lambda in f.nonzero_elements() {
                        let scaled: Vec<FieldElement> = v.iter().map(|&x| f.mul(x, lambda)).collect();
                        assert_eq!(s.normalize(&scaled).unwrap(), p);
                    }
                }
            }
        }
    }

    #[test]
    fn pencils() {
        let s = space(3, 2);
        let line = [pt(&s, &[1, 0, 0, 0]), pt(&s, &[0, 1, 0, 0])];
        let pencil = s.pencil_through_flat(&line).unwrap();
        assert_eq!(pencil.len(), 3);
        assert!(pencil.iter().all(|h| line.iter().all(|p| s.on(p, h))));
        assert_eq!(
            s.pencil_through_flat(&line[..1]),
            Err(ProjError::WrongSpanDimension { expected: 1, got: 0 })
        );

        let s4 = space(3, 4);
        let line = [pt(&s4, &[1, 2, 3, 0]), pt(&s4, &[0, 1, 1, 1]), pt(&s4, &[1, 3, 2, 1])];
        assert_eq!(s4.span_dim(&line).unwrap(), 1);
        assert_eq!(s4.pencil_through_flat(&line).unwrap().len(), 5);
    }

    #[test]
    fn span_dimensions() {
        let s = space(2, 2);
        assert_eq!(s.span_dim(&[pt(&s, &[1, 0, 0])]).unwrap(), 0);
        assert_eq!(s.span_dim(&[pt(&s, &[1, 0, 0]), pt(&s, &[0, 1, 0]), pt(&s, &[1, 1, 0])]).unwrap(), 1);
        let s3 = space(3, 2);
        let cubic = [pt(&s3, &[1, 0, 0, 0]), pt(&s3, &[1, 1, 1, 1]), pt(&s3, &[0, 0, 0, 1])];
        assert_eq!(s3.span_dim(&cubic).unwrap(), 2);
        assert_eq!(s3.span_points(&cubic).unwrap().len(), 7);
        assert_eq!(s.span_dim(&[]), Err(ProjError::EmptySet));
    }
}
