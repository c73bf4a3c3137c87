//! Dense Gaussian elimination over GF(q). Matrices are small (at most a few
//! dozen rows) everywhere they are used.

use crate::gf::{FieldElement, FieldSpec};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduced row-echelon form. Returns the nonzero rows of the reduced matrix
/// and the pivot column of each, in increasing order.
pub fn row_reduce(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..ncols {
        let Some(found) = (next..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(next, found);
        let scale = field.inv(m[next][col]).expect("pivot is nonzero");
        for x in m[next].iter_mut() {
            *x = field.mul(*x, scale);
        }
        let pivot_row = m[next].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, pv));
            }
        }
        pivots.push(col);
        next += 1;
        if next == m.len() {
            break;
        }
    }
    m.truncate(next);
    (m, pivots)
}

pub fn rank(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> usize {
    row_reduce(field, rows).1.len()
}

/// A basis of `{v : row · v = 0 for every row}`.
pub fn null_space(field: &FieldSpec, rows: &[Vec<FieldElement>], ncols: usize) -> Matrix {
    let (reduced, pivots) = if rows.is_empty() { (Vec::new(), Vec::new()) } else { row_reduce(field, rows) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElement::ZERO; ncols];
            v[f] = FieldElement::ONE;
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = field.neg(row[f]);
            }
            v
        })
        .collect()
}

pub fn mat_vec(field: &FieldSpec, m: &[Vec<FieldElement>], v: &[FieldElement]) -> Vec<FieldElement> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
        })
        .collect()
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse(field: &FieldSpec, m: &[Vec<FieldElement>]) -> Option<Matrix> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return None;
    }
    let augmented: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }));
            r
        })
        .collect();
    let (reduced, pivots) = row_reduce(field, &augmented);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(reduced.into_iter().map(|r| r[n..].to_vec()).collect())
}
