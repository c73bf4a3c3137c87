//! Curve descriptions, rational point counts over GF(q) and its extensions,
//! a nondegeneracy heuristic, and the built-in catalog.
//!
//! A curve is whatever common zero locus its equations define; nothing here
//! checks that it is one-dimensional or irreducible. The declared degree is
//! trusted, except for plane curves given by a single equation, where the
//! degree of that equation wins.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldDescription, FieldElement, FieldSpec, GfError};
use crate::poly::{HomogeneousPoly, PolyError, PolyRecord};
use crate::projspace::{Hyperplane, ProjError, ProjPoint, ProjSpace};

/// Default cap on retained point lists.
pub const DEFAULT_RETAIN_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error("ambient dimension must be at least 2, got {0}")]
    AmbientTooSmall(usize),
    #[error("a curve needs at least one equation")]
    NoEquations,
    #[error("declared degree must be at least 1")]
    ZeroDegree,
    #[error("equation {index} has {got} variables, expected {expected}")]
    EquationArity { index: usize, expected: usize, got: usize },
    #[error("change-of-coordinates matrix is singular")]
    SingularMatrix,
    #[error("point list was not retained")]
    NoPointsRetained,
    #[error("the curve has no rational points")]
    EmptyPointSet,
    #[error("unknown catalog entry '{0}'")]
    UnknownCatalogEntry(String),
    #[error("catalog entry '{name}': {reason}")]
    BadCatalogParameter { name: String, reason: String },
}

/// Curve file: `{"field": {...}, "ambient_dim": r, "degree": d, "name": "...", "polynomials": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub field: FieldDescription,
    pub ambient_dim: usize,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub polynomials: Vec<PolyRecord>,
}

#[derive(Debug, Clone)]
pub struct CurveDef {
    field: Arc<FieldSpec>,
    ambient: usize,
    equations: Vec<HomogeneousPoly>,
    degree: u32,
    name: Option<String>,
}

impl CurveDef {
    pub fn new(
        field: Arc<FieldSpec>,
        ambient: usize,
        equations: Vec<HomogeneousPoly>,
        declared_degree: u32,
        name: Option<String>,
    ) -> Result<Self, CurveError> {
        if ambient < 2 {
            return Err(CurveError::AmbientTooSmall(ambient));
        }
        if equations.is_empty() {
            return Err(CurveError::NoEquations);
        }
        if declared_degree == 0 {
            return Err(CurveError::ZeroDegree);
        }
        for (index, eq) in equations.iter().enumerate() {
            if eq.nvars() != ambient + 1 {
                return Err(CurveError::EquationArity { index, expected: ambient + 1, got: eq.nvars() });
            }
        }
        let degree = if ambient == 2 && equations.len() == 1 { equations[0].degree() } else { declared_degree };
        Ok(CurveDef { field, ambient, equations, degree, name })
    }

    pub fn from_file(file: &CurveFile) -> Result<Self, CurveError> {
        let field = Arc::new(FieldSpec::from_description(&file.field)?);
        let equations = file
            .polynomials
            .iter()
            .map(|rec| HomogeneousPoly::from_record(&field, file.ambient_dim + 1, rec))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, file.ambient_dim, equations, file.degree, file.name.clone())
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile {
            field: self.field.description(),
            ambient_dim: self.ambient,
            degree: self.degree,
            name: self.name.clone(),
            polynomials: self.equations.iter().map(HomogeneousPoly::to_record).collect(),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn space(&self) -> ProjSpace {
        ProjSpace::new(self.ambient, self.field.clone())
    }

    pub fn equations(&self) -> &[HomogeneousPoly] {
        &self.equations
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("unnamed curve in PG({},{})", self.ambient, self.field.q()))
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// Whether this is, literally, the exceptional plane quartic over GF(4)
    /// from the catalog (same field modulus, same single equation).
    pub fn is_sziklai_k(&self) -> bool {
        let k = sziklai_k();
        *self.field == *k.field && self.ambient == 2 && self.equations == k.equations
    }

    #[inline]
    fn contains_raw(&self, field: &FieldSpec, equations: &[HomogeneousPoly], x: &[FieldElement]) -> bool {
        equations.iter().all(|f| f.eval_raw(field, x).is_zero())
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool, CurveError> {
        if p.coords().len() != self.ambient + 1 {
            return Err(ProjError::DimensionMismatch { expected: self.ambient + 1, got: p.coords().len() }.into());
        }
        Ok(self.contains_raw(&self.field, &self.equations, p.coords()))
    }

    /// Applies the projective change of coordinates `P ↦ M P`: the result
    /// vanishes at `M P` exactly when `self` vanishes at `P`.
    pub fn transformed(&self, matrix: &[Vec<FieldElement>]) -> Result<CurveDef, CurveError> {
        if matrix.len() != self.ambient + 1 || matrix.iter().any(|row| row.len() != self.ambient + 1) {
            return Err(PolyError::DimensionMismatch { expected: self.ambient + 1, got: matrix.len() }.into());
        }
        let inv = crate::linalg::inverse(&self.field, matrix).ok_or(CurveError::SingularMatrix)?;
        let equations = self
            .equations
            .iter()
            .map(|f| f.pull_back(&self.field, &inv))
            .collect::<Result<Vec<_>, _>>()?;
        CurveDef::new(self.field.clone(), self.ambient, equations, self.degree, self.name.clone())
    }
}

impl fmt::Display for CurveDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in PG({},{}), degree {}: ", self.label(), self.ambient, self.field.q(), self.degree)?;
        let eqs: Vec<String> = self.equations.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", eqs.join(", "))
    }
}

/// Number of GF(q^m)-points, with the point list when it is short enough.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub m: u32,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<ProjPoint>>,
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    /// Point lists longer than this are dropped.
    pub retain_cap: usize,
    /// Number of contiguous index ranges; `None` picks one from the thread pool.
    pub partitions: Option<usize>,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { retain_cap: DEFAULT_RETAIN_CAP, partitions: None }
    }
}

fn count_in_space(
    curve: &CurveDef,
    space: &ProjSpace,
    equations: &[HomogeneousPoly],
    m: u32,
    opts: CountOptions,
) -> PointCount {
    let total = space.num_points();
    let parts = opts.partitions.unwrap_or_else(|| rayon::current_num_threads() * 4).max(1) as u64;
    let chunk = total.div_ceil(parts).max(1);
    let field = &**space.field();
    let cap = opts.retain_cap;
    let pieces: Vec<(u64, Option<Vec<ProjPoint>>)> = (0..parts)
        .into_par_iter()
        .map(|i| {
            let start = i * chunk;
            let end = ((i + 1) * chunk).min(total);
            let mut count = 0u64;
            let mut kept = Some(Vec::new());
            for p in space.points_in_range(start, end) {
                if curve.contains_raw(field, equations, p.coords()) {
                    count += 1;
                    if let Some(list) = kept.as_mut() {
                        if list.len() < cap {
                            list.push(p);
                        } else {
                            kept = None;
                        }
                    }
                }
            }
            (count, kept)
        })
        .collect();
    let count = pieces.iter().map(|(c, _)| c).sum::<u64>();
    let points = if count as usize <= cap {
        let mut all = Vec::with_capacity(count as usize);
        for (_, kept) in pieces {
            all.extend(kept.expect("under the cap"));
        }
        Some(all)
    } else {
        None
    };
    PointCount { m, count, points }
}

/// `#C(GF(q))`, the number of points of PG(r, q) where every equation vanishes.
pub fn count_points(curve: &CurveDef) -> PointCount {
    count_points_with(curve, CountOptions::default())
}

pub fn count_points_with(curve: &CurveDef, opts: CountOptions) -> PointCount {
    count_in_space(curve, &curve.space(), &curve.equations, 1, opts)
}

/// Point count over GF(q^m), with the equations base-extended along the
/// default embedding.
pub fn count_points_ext(curve: &CurveDef, m: u32) -> Result<PointCount, CurveError> {
    count_points_ext_with(curve, m, CountOptions::default())
}

pub fn count_points_ext_with(curve: &CurveDef, m: u32, opts: CountOptions) -> Result<PointCount, CurveError> {
    if m <= 1 {
        return Ok(count_points_with(curve, opts));
    }
    let (space, equations) = base_extend(curve, m)?;
    Ok(count_in_space(curve, &space, &equations, m, opts))
}

fn base_extend(curve: &CurveDef, m: u32) -> Result<(ProjSpace, Vec<HomogeneousPoly>), CurveError> {
    let big = Arc::new(curve.field.extension(m)?);
    let emb = curve.field.embedding_into(&big)?;
    let equations = curve.equations.iter().map(|f| f.map_coefficients(|c| emb.apply(c))).collect();
    Ok((ProjSpace::new(curve.ambient, big), equations))
}

/// Projective dimension of the span of the retained rational points.
pub fn rational_points_span(curve: &CurveDef, count: &PointCount) -> Result<isize, CurveError> {
    let points = count.points.as_ref().ok_or(CurveError::NoPointsRetained)?;
    if points.is_empty() {
        return Err(CurveError::EmptyPointSet);
    }
    Ok(curve.space().span_dim(points)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Nondegeneracy {
    /// Every tested point lies on `hyperplane`, and more than `d` of them do,
    /// which a hyperplane not containing the curve cannot achieve.
    Degenerate { hyperplane: Hyperplane, points_on_hyperplane: u64 },
    /// Either no points were found, or a hyperplane holds all of them but
    /// too few to prove containment.
    Undetermined { candidate: Option<Hyperplane> },
    /// Every GF(q)-hyperplane misses some tested point.
    LikelyNondegenerate,
}

impl fmt::Display for Nondegeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nondegeneracy::Degenerate { hyperplane, points_on_hyperplane } => {
                write!(f, "degenerate: contained in {hyperplane} ({points_on_hyperplane} points on it)")
            }
            Nondegeneracy::Undetermined { candidate: Some(h) } => write!(f, "undetermined: all tested points lie on {h}"),
            Nondegeneracy::Undetermined { candidate: None } => write!(f, "undetermined: no points found"),
            Nondegeneracy::LikelyNondegenerate => write!(f, "likely nondegenerate"),
        }
    }
}

/// Looks for a GF(q)-hyperplane holding every GF(q^m)-point, `m ≤ mmax`.
pub fn nondegeneracy_heuristic(curve: &CurveDef, mmax: u32) -> Result<Nondegeneracy, CurveError> {
    let base = curve.space();
    let mut candidates: Vec<Hyperplane> = base.enum_hyperplanes();
    let mut any_points = false;
    let mut last_on = Vec::new();
    let opts = CountOptions { retain_cap: usize::MAX, partitions: None };
    for m in 1..=mmax.max(1) {
        let (space, count) = if m == 1 {
            (base.clone(), count_points_with(curve, opts))
        } else {
            let (space, equations) = base_extend(curve, m)?;
            let count = count_in_space(curve, &space, &equations, m, opts);
            (space, count)
        };
        let points = count.points.expect("uncapped");
        any_points |= !points.is_empty();
        let emb = curve.field.embedding_into(space.field())?;
        candidates.retain(|h| {
            let hb: Vec<FieldElement> = h.covector().iter().map(|&c| emb.apply(c)).collect();
            points.iter().all(|p| space.pairing(p.coords(), &hb).is_zero())
        });
        last_on = points;
    }
    if !any_points {
        return Ok(Nondegeneracy::Undetermined { candidate: None });
    }
    match candidates.into_iter().next() {
        None => Ok(Nondegeneracy::LikelyNondegenerate),
        Some(h) => {
            let on = last_on.len() as u64;
            if on > curve.degree as u64 {
                Ok(Nondegeneracy::Degenerate { hyperplane: h, points_on_hyperplane: on })
            } else {
                Ok(Nondegeneracy::Undetermined { candidate: Some(h) })
            }
        }
    }
}

/// Heuristic degree check: intersects the curve with a pseudorandom
/// GF(q^m)-hyperplane and returns a warning if more than `degree` points
/// land on it.
pub fn degree_cross_check(curve: &CurveDef, m: u32, seed: u64) -> Result<Option<String>, CurveError> {
    use rand::{Rng, SeedableRng};
    let (space, equations) = if m <= 1 {
        (curve.space(), curve.equations.clone())
    } else {
        base_extend(curve, m)?
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let h = space.hyperplane_at(rng.gen_range(0..space.num_points()));
    let count = count_in_space(curve, &space, &equations, m, CountOptions { retain_cap: usize::MAX, partitions: None });
    let on = count.points.unwrap().iter().filter(|p| space.on(p, &h)).count() as u64;
    Ok((on > curve.degree as u64).then(|| {
        format!(
            "hyperplane {h} over GF({}) meets the zero set in {on} points, more than the declared degree {}",
            space.q(),
            curve.degree
        )
    }))
}

// ---------------------------------------------------------------------------
// catalog

/// Names accepted by [`catalog`], with parameters in parentheses.
pub const CATALOG_NAMES: [&str; 5] = [
    "sziklai-K",
    "hermitian(q)",
    "twisted-cubic(q)",
    "rational-normal(r,q)",
    "elliptic-quartic-example(q)",
];

fn parse_args(name: &str) -> Option<(&str, Vec<u64>)> {
    let name = name.trim();
    match name.find('(') {
        None => Some((name, Vec::new())),
        Some(open) => {
            let inner = name[open + 1..].strip_suffix(')')?;
            let args = inner.split(',').map(|a| a.trim().parse::<u64>().ok()).collect::<Option<Vec<_>>>()?;
            Some((&name[..open], args))
        }
    }
}

fn bad(name: &str, reason: impl Into<String>) -> CurveError {
    CurveError::BadCatalogParameter { name: name.to_string(), reason: reason.into() }
}

fn field_of_order(name: &str, q: u64) -> Result<Arc<FieldSpec>, CurveError> {
    FieldSpec::of_order(q).map(Arc::new).map_err(|e| match e {
        GfError::FieldTooLarge { .. } => CurveError::Field(e),
        _ => bad(name, e.to_string()),
    })
}

/// Looks up a catalog curve by name, e.g. `twisted-cubic(3)`.
pub fn catalog(name: &str) -> Result<CurveDef, CurveError> {
    let unknown = || CurveError::UnknownCatalogEntry(name.to_string());
    let (base, args) = parse_args(name).ok_or_else(unknown)?;
    match (base, args.as_slice()) {
        ("sziklai-K", []) => Ok(sziklai_k()),
        ("hermitian", &[q]) => hermitian(q),
        ("twisted-cubic", &[q]) => {
            let mut c = rational_normal(3, q)?;
            c.name = Some(format!("twisted-cubic({q})"));
            Ok(c)
        }
        ("rational-normal", &[r, q]) => rational_normal(r as usize, q),
        ("elliptic-quartic-example", &[q]) => elliptic_quartic(q),
        _ => Err(unknown()),
    }
}

fn monomial(nvars: usize, exps: &[(usize, u32)]) -> Vec<u32> {
    let mut m = vec![0; nvars];
    for &(i, e) in exps {
        m[i] += e;
    }
    m
}

/// `(X+Y+Z)^4 + (XY+YZ+ZX)^2 + XYZ(X+Y+Z)` over GF(4) with modulus `x²+x+1`,
/// expanded in characteristic 2.
pub fn sziklai_k() -> CurveDef {
    let field = Arc::new(FieldSpec::new(2, 2, Some(&[1, 1, 1])).expect("GF(4)"));
    let exps: [[u32; 3]; 9] = [
        [4, 0, 0], [0, 4, 0], [0, 0, 4],
        [2, 2, 0], [0, 2, 2], [2, 0, 2],
        [2, 1, 1], [1, 2, 1], [1, 1, 2],
    ];
    let f = HomogeneousPoly::new(&field, 3, 4, exps.iter().map(|m| (m.to_vec(), FieldElement::ONE))).expect("K");
    CurveDef::new(field, 2, vec![f], 4, Some("sziklai-K".into())).expect("K")
}

/// `x^(q+1) + y^(q+1) + z^(q+1)` over GF(q²).
pub fn hermitian(q: u64) -> Result<CurveDef, CurveError> {
    let name = format!("hermitian({q})");
    let Some((p, e)) = crate::gf::prime_power(q) else {
        return Err(bad(&name, "q must be a prime power"));
    };
    if q.checked_mul(q).is_none_or(|qq| qq > crate::gf::MAX_ORDER) {
        return Err(CurveError::Field(GfError::FieldTooLarge { p: p.into(), e: 2 * u64::from(e) }));
    }
    let field = field_of_order(&name, q * q)?;
    let e = (q + 1) as u32;
    let f = HomogeneousPoly::new(
        &field,
        3,
        e,
        (0..3).map(|i| (monomial(3, &[(i, e)]), FieldElement::ONE)),
    )?;
    CurveDef::new(field, 2, vec![f], e, Some(name))
}

/// The rational normal curve of degree `r` in P^r, cut out by the 2×2 minors
/// of `[[x0 … x(r-1)], [x1 … xr]]`.
pub fn rational_normal(r: usize, q: u64) -> Result<CurveDef, CurveError> {
    let name = format!("rational-normal({r},{q})");
    if r < 2 {
        return Err(bad(&name, "need r >= 2"));
    }
    let field = field_of_order(&name, q)?;
    let n = r + 1;
    let minus_one = field.neg(FieldElement::ONE);
    let mut equations = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            // x_i x_(j+1) - x_(i+1) x_j
            let f = HomogeneousPoly::new(
                &field,
                n,
                2,
                [
                    (monomial(n, &[(i, 1), (j + 1, 1)]), FieldElement::ONE),
                    (monomial(n, &[(i + 1, 1), (j, 1)]), minus_one),
                ],
            )?;
            equations.push(f);
        }
    }
    CurveDef::new(field, r, equations, r as u32, Some(name))
}

/// A genus-one quartic in P³: the image of an elliptic curve
/// `y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6` under `(x, y) ↦ (1 : x : y : x²)`,
/// cut out by `X0 X3 = X1²` and the homogenized Weierstrass equation.
/// The curve `y² + y = x³ - x²` is used, which has good reduction away from
/// 11; in characteristic 11 it is replaced by `y² + y = x³ - x`.
pub fn elliptic_quartic(q: u64) -> Result<CurveDef, CurveError> {
    let name = format!("elliptic-quartic-example({q})");
    let field = field_of_order(&name, q)?;
    let (a1, a2, a3, a4, a6): (i64, i64, i64, i64, i64) = if field.p() == 11 { (0, 0, 1, -1, 0) } else { (0, -1, 1, 0, 0) };
    let c = |n: i64| field.from_int(n);
    let q1 = HomogeneousPoly::new(
        &field,
        4,
        2,
        [(monomial(4, &[(0, 1), (3, 1)]), c(1)), (monomial(4, &[(1, 2)]), c(-1))],
    )?;
    let q2 = HomogeneousPoly::new(
        &field,
        4,
        2,
        [
            (monomial(4, &[(2, 2)]), c(1)),
            (monomial(4, &[(1, 1), (2, 1)]), c(a1)),
            (monomial(4, &[(0, 1), (2, 1)]), c(a3)),
            (monomial(4, &[(1, 1), (3, 1)]), c(-1)),
            (monomial(4, &[(0, 1), (3, 1)]), c(-a2)),
            (monomial(4, &[(0, 1), (1, 1)]), c(-a4)),
            (monomial(4, &[(0, 2)]), c(-a6)),
        ],
    )?;
    CurveDef::new(field, 3, vec![q1, q2], 4, Some(name))
}

/// Concrete catalog instances used by sweeps and reports.
pub fn catalog_instances() -> Vec<CurveDef> {
    let mut names = vec!["sziklai-K".to_string(), "hermitian(2)".into(), "hermitian(3)".into()];
    for q in [2, 3, 4, 5] {
        names.push(format!("twisted-cubic({q})"));
        names.push(format!("rational-normal(4,{q})"));
        names.push(format!("elliptic-quartic-example({q})"));
    }
    names.iter().map(|n| catalog(n).expect("catalog instance")).collect()
}
