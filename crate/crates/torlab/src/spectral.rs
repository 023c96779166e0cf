//! Eigenstructure screening and splittings.
//!
//! The unit-circle decision is exact: the characteristic polynomial is
//! computed over Z, squarefree-decomposed, each squarefree part is split
//! into its reciprocal part (which holds every possible modulus-1 root),
//! and the reciprocal part's `x + 1/x` transform is root-counted on
//! `(-2, 2)` with Sturm sequences. Numeric roots (Aberth) are then
//! classified against these exact counts; any disagreement is a
//! certification error, never a silent guess. Subspace bases come from SVD
//! kernels of real polynomials in the matrix.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{
    aberth_roots, cyclotomic, cyclotomic_orders, squarefree_decomposition, sturm_count,
    trace_transform, IntPoly,
};
use crate::torus::IntMatrix;

pub mod refine;

/// Default numeric tolerance for subspace ranks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// Operation requires an ergodic matrix (no root-of-unity eigenvalue).
    Nonergodic,
    Singular,
    /// Numeric root moduli disagree with the exact Sturm certificate.
    Certification { factor: String, detail: String },
    /// The span hypothesis fails; carries the achieved rank.
    SpanFailed { rank: usize, dim: usize },
    /// Complement selection could not complete.
    Construction(String),
    /// Rotation data requested for a Jordan-type central part.
    UnsupportedJordan,
    DimensionMismatch { left: usize, right: usize },
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::Nonergodic => write!(f, "matrix is not ergodic"),
            SpectralError::Singular => write!(f, "matrix is singular"),
            SpectralError::Certification { factor, detail } => {
                write!(f, "certification failed for factor {factor}: {detail}")
            }
            SpectralError::SpanFailed { rank, dim } => {
                write!(f, "span condition fails: rank {rank} < {dim}")
            }
            SpectralError::Construction(msg) => write!(f, "complement construction: {msg}"),
            SpectralError::UnsupportedJordan => {
                write!(f, "central part has Jordan shear; rotation data undefined")
            }
            SpectralError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
        }
    }
}

impl std::error::Error for SpectralError {}

// ---------------------------------------------------------------------------
// Characteristic polynomial and ergodicity
// ---------------------------------------------------------------------------

/// Exact characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier.
/// All divisions are certified exact.
pub fn char_poly(m: &IntMatrix) -> IntPoly {
    let d = m.dim();
    let a: Vec<BigInt> = m.entries().iter().map(|&e| BigInt::from(e)).collect();
    let mut coeffs = vec![BigInt::zero(); d + 1];
    coeffs[d] = BigInt::one();
    // m_k tracks A (A_{k-1} + c_{d-k+1} I)
    let mut mk = a.clone();
    let trace = |mat: &[BigInt]| -> BigInt {
        (0..d).map(|i| mat[i * d + i].clone()).sum()
    };
    let mut c = -trace(&mk);
    if d >= 1 {
        coeffs[d - 1] = c.clone();
    }
    for k in 2..=d {
        // mk <- A (mk + c I)
        let mut shifted = mk.clone();
        for i in 0..d {
            shifted[i * d + i] += &c;
        }
        let mut next = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for l in 0..d {
                if a[i * d + l].is_zero() {
                    continue;
                }
                for j in 0..d {
                    let prod = &a[i * d + l] * &shifted[l * d + j];
                    next[i * d + j] += prod;
                }
            }
        }
        mk = next;
        let t = trace(&mk);
        let kk = BigInt::from(k);
        let (q, r) = num_integer::Integer::div_rem(&(-t), &kk);
        assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        c = q;
        coeffs[d - k] = c.clone();
    }
    IntPoly::new(coeffs)
}

/// Exact ergodicity test: no eigenvalue is a root of unity, decided by
/// trial division against every cyclotomic polynomial that could fit.
pub fn is_ergodic(m: &IntMatrix) -> bool {
    let f = char_poly(m);
    if f.constant_term().is_zero() {
        return false; // singular
    }
    for k in cyclotomic_orders(m.dim()) {
        if cyclotomic(k).divides(&f) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Exact-certified eigenvalue analysis
// ---------------------------------------------------------------------------

/// How an eigenvalue sits relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusClass {
    Inside,
    OnCircle,
    Outside,
}

/// One distinct eigenvalue with its multiplicity in the characteristic
/// polynomial and its certified modulus class.
#[derive(Debug, Clone)]
pub struct EigenValue {
    pub value: Complex64,
    pub multiplicity: usize,
    pub class: ModulusClass,
}

/// Full eigenvalue analysis: distinct roots, multiplicities, and exact
/// circle certification per squarefree factor.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub char_poly: IntPoly,
    pub roots: Vec<EigenValue>,
    /// Unit-circle root count (with multiplicity), from Sturm certificates.
    pub circle_count: usize,
}

impl EigenData {
    pub fn count(&self, class: ModulusClass) -> usize {
        self.roots
            .iter()
            .filter(|r| r.class == class)
            .map(|r| r.multiplicity)
            .sum()
    }
}

/// Analyzes any nonsingular integer matrix. Tolerance governs the numeric
/// cross-check of the exact circle counts.
pub fn eigen_analysis(m: &IntMatrix, tol: f64) -> Result<EigenData, SpectralError> {
    let f = char_poly(m);
    if f.constant_term().is_zero() {
        return Err(SpectralError::Singular);
    }
    let mut roots: Vec<EigenValue> = Vec::new();
    let mut circle_count = 0usize;
    for (u, mult) in squarefree_decomposition(&f) {
        // pull out the self-inverse rational roots first
        let mut core = u.clone();
        let mut unit_real_roots: Vec<f64> = Vec::new();
        for r in [1i64, -1i64] {
            let lin = IntPoly::from_i64(&[-r, 1]);
            if core.eval_big(&BigInt::from(r)).is_zero() {
                core = core.div_exact(&lin).expect("linear factor divides");
                unit_real_roots.push(r as f64);
            }
        }
        // reciprocal part of what is left carries every other circle root
        let pairs = if core.degree() == 0 {
            0
        } else {
            let rev = core.reverse();
            let g = core
                .to_rational()
                .gcd(&rev.to_rational())
                .to_primitive_int();
            if g.degree() == 0 {
                0
            } else {
                let q = trace_transform(&g).ok_or_else(|| SpectralError::Certification {
                    factor: format!("{g}"),
                    detail: "reciprocal part is not palindromic".into(),
                })?;
                let two = BigRational::from(BigInt::from(2));
                sturm_count(&q.to_rational(), &(-two.clone()), &two)
            }
        };
        let expected_circle = 2 * pairs + unit_real_roots.len();

        let numeric = aberth_roots(&u);
        if numeric.len() != u.degree() {
            return Err(SpectralError::Certification {
                factor: format!("{u}"),
                detail: "numeric root count mismatch".into(),
            });
        }
        let mut indexed: Vec<(usize, f64)> = numeric
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (r.norm() - 1.0).abs()))
            .collect();
        indexed.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        for (pos, (idx, dist)) in indexed.iter().enumerate() {
            let on_circle = pos < expected_circle;
            if on_circle && *dist > tol {
                return Err(SpectralError::Certification {
                    factor: format!("{u}"),
                    detail: format!(
                        "Sturm count asserts a circle root but nearest numeric \
                         modulus is off by {dist:.3e}"
                    ),
                });
            }
            if !on_circle && *dist <= tol {
                return Err(SpectralError::Certification {
                    factor: format!("{u}"),
                    detail: format!(
                        "numeric modulus within {dist:.3e} of 1 but Sturm count \
                         excludes it"
                    ),
                });
            }
            let mut value = numeric[*idx];
            let class = if on_circle {
                value /= value.norm(); // snap onto the circle
                ModulusClass::OnCircle
            } else if value.norm() < 1.0 {
                ModulusClass::Inside
            } else {
                ModulusClass::Outside
            };
            if on_circle {
                circle_count += mult;
            }
            roots.push(EigenValue {
                value,
                multiplicity: mult,
                class,
            });
        }
    }
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    assert_eq!(total, m.dim(), "eigenvalue multiplicities must sum to d");
    Ok(EigenData {
        char_poly: f,
        roots,
        circle_count,
    })
}

// ---------------------------------------------------------------------------
// Splittings
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Hyperbolic,
    QuasihyperbolicCentralSpin,
    QuasihyperbolicJordan,
    Nonergodic,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Hyperbolic => "hyperbolic",
            Classification::QuasihyperbolicCentralSpin => "quasihyperbolic_central_spin",
            Classification::QuasihyperbolicJordan => "quasihyperbolic_jordan",
            Classification::Nonergodic => "nonergodic",
        };
        write!(f, "{s}")
    }
}

/// The decomposition `R^d = s_- + s_0 + s_+` with the semisimple central
/// subspace `s_0'` and rotation data. Basis vectors are matrix columns.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub matrix: IntMatrix,
    pub stable: DMatrix<f64>,
    pub central: DMatrix<f64>,
    pub unstable: DMatrix<f64>,
    pub central_semisimple: DMatrix<f64>,
    pub classification: Classification,
    /// One angle in (0, 1/2) per semisimple rotation block, sorted.
    pub rotation_blocks: Vec<f64>,
    pub tolerance: f64,
    pub eigen: EigenData,
}

impl Splitting {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn dim_stable(&self) -> usize {
        self.stable.ncols()
    }

    pub fn dim_central(&self) -> usize {
        self.central.ncols()
    }

    pub fn dim_unstable(&self) -> usize {
        self.unstable.ncols()
    }

    pub fn dim_central_semisimple(&self) -> usize {
        self.central_semisimple.ncols()
    }

    /// Columns of `s_- + s_0'`, the directions along which orbit behavior
    /// transfers.
    pub fn transfer_pool(&self) -> DMatrix<f64> {
        concat_cols(&self.stable, &self.central_semisimple)
    }
}

fn concat_cols(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let rows = a.nrows().max(b.nrows());
    let mut out = DMatrix::zeros(rows, a.ncols() + b.ncols());
    for j in 0..a.ncols() {
        out.set_column(j, &a.column(j));
    }
    for j in 0..b.ncols() {
        out.set_column(a.ncols() + j, &b.column(j));
    }
    out
}

/// Real polynomial with the given complex roots (conjugates folded into
/// quadratic factors), as f64 coefficients ascending.
fn real_poly_from_roots(roots: &[(Complex64, usize)]) -> Vec<f64> {
    let mut poly = vec![1.0f64];
    let mul_factor = |poly: &[f64], factor: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; poly.len() + factor.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    for &(r, mult) in roots {
        if r.im.abs() < 1e-12 {
            for _ in 0..mult {
                poly = mul_factor(&poly, &[-r.re, 1.0]);
            }
        } else if r.im > 0.0 {
            let factor = [r.norm_sqr(), -2.0 * r.re, 1.0];
            for _ in 0..mult {
                poly = mul_factor(&poly, &factor);
            }
        }
        // conjugates with im < 0 are covered by their partner
    }
    poly
}

/// Evaluates a real polynomial at the matrix, normalizing to keep the SVD
/// well scaled. The kernel is unchanged by the normalization.
fn poly_at_matrix(coeffs: &[f64], m: &DMatrix<f64>) -> DMatrix<f64> {
    let d = m.nrows();
    let scale = coeffs.iter().fold(0.0f64, |a, &c| a.max(c.abs())).max(1.0);
    let mut acc = DMatrix::<f64>::zeros(d, d);
    for &c in coeffs.iter().rev() {
        acc = m * acc;
        for i in 0..d {
            acc[(i, i)] += c / scale;
        }
    }
    acc
}

/// Orthonormal kernel basis with an expected dimension, certified by the
/// singular value gap.
fn kernel_with_dim(
    mat: &DMatrix<f64>,
    expected: usize,
    tol: f64,
    what: &str,
) -> Result<DMatrix<f64>, SpectralError> {
    let d = mat.nrows();
    if expected == 0 {
        return Ok(DMatrix::zeros(d, 0));
    }
    let svd = mat.clone().svd(true, true);
    let mut sv: Vec<(usize, f64)> = svd
        .singular_values
        .iter()
        .cloned()
        .enumerate()
        .collect();
    sv.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let scale = sv.last().map(|x| x.1).unwrap_or(1.0).max(1.0);
    if sv[expected - 1].1 > tol * scale * 1e3 {
        return Err(SpectralError::Certification {
            factor: what.into(),
            detail: format!(
                "kernel of dimension {expected} not present: sigma_{} = {:.3e}",
                expected - 1,
                sv[expected - 1].1
            ),
        });
    }
    let vt = svd.v_t.expect("svd with v requested");
    let mut basis = DMatrix::zeros(d, expected);
    for (j, (idx, _)) in sv.iter().take(expected).enumerate() {
        for i in 0..d {
            basis[(i, j)] = vt[(*idx, i)];
        }
    }
    Ok(basis)
}

/// Kernel dimension by singular value threshold.
fn kernel_dim(mat: &DMatrix<f64>, tol: f64) -> usize {
    let svd = mat.clone().svd(false, false);
    let scale = svd
        .singular_values
        .iter()
        .cloned()
        .fold(1.0f64, f64::max);
    svd.singular_values
        .iter()
        .filter(|&&s| s <= tol * scale * 1e3)
        .count()
}

/// Computes the splitting of an ergodic matrix with exact circle
/// certification. Fails with `Nonergodic` for non-ergodic input and with
/// `Certification` when numeric and exact accounts disagree.
pub fn splitting(m: &IntMatrix, tol: f64) -> Result<Splitting, SpectralError> {
    if !is_ergodic(m) {
        return Err(SpectralError::Nonergodic);
    }
    let eigen = eigen_analysis(m, tol)?;
    let d = m.dim();
    let mf = DMatrix::from_row_slice(d, d, &m.to_f64s());

    let group = |class: ModulusClass| -> Vec<(Complex64, usize)> {
        eigen
            .roots
            .iter()
            .filter(|r| r.class == class)
            .map(|r| (r.value, r.multiplicity))
            .collect()
    };
    let inside = group(ModulusClass::Inside);
    let circle = group(ModulusClass::OnCircle);
    let outside = group(ModulusClass::Outside);

    let n_minus: usize = inside.iter().map(|x| x.1).sum();
    let n_zero: usize = circle.iter().map(|x| x.1).sum();
    let n_plus: usize = outside.iter().map(|x| x.1).sum();
    assert_eq!(n_minus + n_zero + n_plus, d);

    let stable = if n_minus > 0 {
        kernel_with_dim(
            &poly_at_matrix(&real_poly_from_roots(&inside), &mf),
            n_minus,
            tol,
            "stable subspace",
        )?
    } else {
        DMatrix::zeros(d, 0)
    };
    let central = if n_zero > 0 {
        kernel_with_dim(
            &poly_at_matrix(&real_poly_from_roots(&circle), &mf),
            n_zero,
            tol,
            "central subspace",
        )?
    } else {
        DMatrix::zeros(d, 0)
    };
    let unstable = if n_plus > 0 {
        kernel_with_dim(
            &poly_at_matrix(&real_poly_from_roots(&outside), &mf),
            n_plus,
            tol,
            "unstable subspace",
        )?
    } else {
        DMatrix::zeros(d, 0)
    };

    // semisimple central part: kernel of the squarefree circle polynomial
    // holds only true eigenvectors; the Jordan test compares with the square
    let (central_semisimple, classification, rotation_blocks) = if n_zero == 0 {
        (DMatrix::zeros(d, 0), Classification::Hyperbolic, vec![])
    } else {
        let sf_circle: Vec<(Complex64, usize)> =
            circle.iter().map(|&(r, _)| (r, 1)).collect();
        let p0 = poly_at_matrix(&real_poly_from_roots(&sf_circle), &mf);
        let dim_true = kernel_dim(&p0, tol);
        let dim_sq = kernel_dim(&(&p0 * &p0), tol);
        let semisimple_dim = dim_true;
        let basis = kernel_with_dim(&p0, semisimple_dim, tol, "semisimple central")?;
        let class = if dim_true == n_zero {
            debug_assert_eq!(dim_sq, dim_true);
            Classification::QuasihyperbolicCentralSpin
        } else {
            Classification::QuasihyperbolicJordan
        };
        let mut angles = Vec::new();
        if class == Classification::QuasihyperbolicCentralSpin {
            for &(r, mult) in &circle {
                if r.im > 0.0 {
                    let theta = r.im.atan2(r.re) / (2.0 * std::f64::consts::PI);
                    let theta = theta.rem_euclid(1.0);
                    for _ in 0..mult {
                        angles.push(theta);
                    }
                }
            }
            angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        (basis, class, angles)
    };

    Ok(Splitting {
        matrix: m.clone(),
        stable,
        central,
        unstable,
        central_semisimple,
        classification,
        rotation_blocks,
        tolerance: tol,
        eigen,
    })
}

// ---------------------------------------------------------------------------
// Span condition and complements
// ---------------------------------------------------------------------------

/// Result of the span hypothesis check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanCheck {
    pub spans: bool,
    pub rank: usize,
    /// Hypothesis warnings: the theorem wants both contracted subspaces
    /// nontrivial.
    pub s_minus_trivial: bool,
    pub t_minus_trivial: bool,
}

/// Checks that `s_- + s_0'` of the first splitting and `t_- + t_0'` of the
/// second together span `R^d`.
pub fn span_condition(
    sp_s: &Splitting,
    sp_t: &Splitting,
) -> Result<SpanCheck, SpectralError> {
    if sp_s.dim() != sp_t.dim() {
        return Err(SpectralError::DimensionMismatch {
            left: sp_s.dim(),
            right: sp_t.dim(),
        });
    }
    let d = sp_s.dim();
    let pool = concat_cols(&sp_s.transfer_pool(), &sp_t.transfer_pool());
    let rank = numeric_rank(&pool, sp_s.tolerance.max(sp_t.tolerance));
    Ok(SpanCheck {
        spans: rank == d,
        rank,
        s_minus_trivial: sp_s.dim_stable() == 0,
        t_minus_trivial: sp_t.dim_stable() == 0,
    })
}

fn numeric_rank(mat: &DMatrix<f64>, tol: f64) -> usize {
    if mat.ncols() == 0 {
        return 0;
    }
    let svd = mat.clone().svd(false, false);
    let scale = svd
        .singular_values
        .iter()
        .cloned()
        .fold(1.0f64, f64::max);
    svd.singular_values
        .iter()
        .filter(|&&s| s > tol * scale * 1e3)
        .count()
}

/// Complementary subspaces `s` in `s_- + s_0'` and `t` in `t_- + t_0'`
/// with `s + t = R^d`, plus the parallel projections.
#[derive(Debug, Clone)]
pub struct ComplementPair {
    /// Columns span `s` (orthonormal).
    pub s_basis: DMatrix<f64>,
    /// Columns span `t` (unit columns picked by max-volume pivoting).
    pub t_basis: DMatrix<f64>,
    /// Projection onto `s` parallel to `t`.
    pub proj_s: DMatrix<f64>,
    /// Projection onto `t` parallel to `s`.
    pub proj_t: DMatrix<f64>,
    pub condition_number: f64,
    pub tolerance: f64,
}

/// Greedy max-volume complement selection: seed with all of `s_- + s_0'`,
/// then extend with columns of `t_- + t_0'`, at each step taking the
/// candidate that maximizes the smallest singular value of the partial
/// basis.
pub fn choose_complements(
    sp_s: &Splitting,
    sp_t: &Splitting,
) -> Result<ComplementPair, SpectralError> {
    let check = span_condition(sp_s, sp_t)?;
    let d = sp_s.dim();
    if !check.spans {
        return Err(SpectralError::SpanFailed {
            rank: check.rank,
            dim: d,
        });
    }
    let tol = sp_s.tolerance.max(sp_t.tolerance);
    let s_pool = orthonormalize(&sp_s.transfer_pool(), tol);
    if s_pool.ncols() == 0 || s_pool.ncols() >= d {
        return Err(SpectralError::Construction(format!(
            "need 0 < dim s < {d}, got {}",
            s_pool.ncols()
        )));
    }
    let t_pool = orthonormalize(&sp_t.transfer_pool(), tol);

    let mut chosen = s_pool.clone();
    let mut picked: Vec<usize> = Vec::new();
    while chosen.ncols() < d {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..t_pool.ncols() {
            if picked.contains(&j) {
                continue;
            }
            let cand = concat_cols(&chosen, &DMatrix::from_column_slice(d, 1, t_pool.column(j).as_slice()));
            let sigma = smallest_singular_value(&cand);
            if best.map(|(_, s)| sigma > s).unwrap_or(true) {
                best = Some((j, sigma));
            }
        }
        match best {
            Some((j, sigma)) if sigma > tol => {
                picked.push(j);
                chosen = concat_cols(
                    &chosen,
                    &DMatrix::from_column_slice(d, 1, t_pool.column(j).as_slice()),
                );
            }
            _ => {
                return Err(SpectralError::Construction(
                    "no candidate extends the basis past the tolerance".into(),
                ))
            }
        }
    }

    let s_dim = s_pool.ncols();
    let mut t_basis = DMatrix::zeros(d, picked.len());
    for (col, &j) in picked.iter().enumerate() {
        t_basis.set_column(col, &t_pool.column(j));
    }
    let b = chosen;
    let b_inv = b
        .clone()
        .try_inverse()
        .ok_or_else(|| SpectralError::Construction("change of basis not invertible".into()))?;
    let mut selector = DMatrix::zeros(d, d);
    for i in 0..s_dim {
        selector[(i, i)] = 1.0;
    }
    let proj_s = &b * selector * &b_inv;
    let proj_t = DMatrix::identity(d, d) - &proj_s;
    let svd = b.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(ComplementPair {
        s_basis: s_pool,
        t_basis,
        proj_s,
        proj_t,
        condition_number: smax / smin,
        tolerance: tol,
    })
}

fn orthonormalize(mat: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    if mat.ncols() == 0 {
        return mat.clone();
    }
    let svd = mat.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let scale = svd
        .singular_values
        .iter()
        .cloned()
        .fold(1.0f64, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol * scale * 1e3)
        .count();
    let mut out = DMatrix::zeros(mat.nrows(), rank);
    let mut order: Vec<(usize, f64)> = svd
        .singular_values
        .iter()
        .cloned()
        .enumerate()
        .collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    for (col, (idx, _)) in order.into_iter().take(rank).enumerate() {
        out.set_column(col, &u.column(idx));
    }
    out
}

fn smallest_singular_value(mat: &DMatrix<f64>) -> f64 {
    let svd = mat.clone().svd(false, false);
    svd.singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Rotation angles of the semisimple central blocks, one per 2x2 rotation,
/// each in `[0, 1)`. Empty for hyperbolic matrices; an error for Jordan
/// central parts (the paper's drift obstruction).
pub fn rotation_vector(sp: &Splitting) -> Result<Vec<f64>, SpectralError> {
    match sp.classification {
        Classification::Hyperbolic => Ok(vec![]),
        Classification::QuasihyperbolicCentralSpin => Ok(sp.rotation_blocks.clone()),
        Classification::QuasihyperbolicJordan => Err(SpectralError::UnsupportedJordan),
        Classification::Nonergodic => Err(SpectralError::Nonergodic),
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use crate::torus::IntMatrix;

    pub(crate) fn cat() -> IntMatrix {
        IntMatrix::new(2, vec![2, 1, 1, 1]).unwrap()
    }

    pub(crate) fn cat_t() -> IntMatrix {
        IntMatrix::new(2, vec![1, 1, 1, 2]).unwrap()
    }

    /// Companion matrix of x^4 - x^3 - x^2 - x + 1 (a Salem polynomial).
    pub(crate) fn salem() -> IntMatrix {
        IntMatrix::new(4, vec![0, 0, 0, -1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::{cat, cat_t, salem};
    use super::*;

    #[test]
    fn char_poly_hand_cases() {
        assert_eq!(char_poly(&cat()), IntPoly::from_i64(&[1, -3, 1]));
        assert_eq!(
            char_poly(&IntMatrix::identity(2)),
            IntPoly::from_i64(&[1, -2, 1])
        );
        let rot = IntMatrix::new(2, vec![0, -1, 1, 0]).unwrap();
        assert_eq!(char_poly(&rot), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(char_poly(&salem()), IntPoly::from_i64(&[1, -1, -1, -1, 1]));
    }

    #[test]
    fn ergodicity_examples() {
        assert!(is_ergodic(&cat()));
        assert!(!is_ergodic(&IntMatrix::new(2, vec![0, -1, 1, 0]).unwrap()));
        assert!(!is_ergodic(&IntMatrix::identity(2)));
        assert!(is_ergodic(&salem()));
    }

    #[test]
    fn cat_splitting_matches_quadratic_oracle() {
        let sp = splitting(&cat(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(sp.classification, Classification::Hyperbolic);
        assert_eq!(sp.dim_stable(), 1);
        assert_eq!(sp.dim_central(), 0);
        assert_eq!(sp.dim_unstable(), 1);
        // stable direction proportional to (1, (-1-sqrt5)/2)
        let v = sp.stable.column(0);
        let ratio = v[1] / v[0];
        let expected = (-1.0 - 5.0f64.sqrt()) / 2.0;
        assert!((ratio - expected).abs() < 1e-9, "ratio {ratio}");
        let u = sp.unstable.column(0);
        let ratio_u = u[1] / u[0];
        let expected_u = (-1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((ratio_u - expected_u).abs() < 1e-9);
    }

    #[test]
    fn salem_is_central_spin() {
        let sp = splitting(&salem(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(sp.classification, Classification::QuasihyperbolicCentralSpin);
        assert_eq!(
            (sp.dim_stable(), sp.dim_central(), sp.dim_unstable()),
            (1, 2, 1)
        );
        assert_eq!(sp.dim_central_semisimple(), 2);
        assert_eq!(sp.rotation_blocks.len(), 1);
        // the circle pair is e^{+-i arccos((1-sqrt13)/4)};
        // z = (1 - sqrt 13)/2 root of z^2 - z - 3 in (-2,2), theta = arccos(z/2)/2pi
        let z = (1.0 - 13.0f64.sqrt()) / 2.0;
        let theta = (z / 2.0).acos() / (2.0 * std::f64::consts::PI);
        assert!((sp.rotation_blocks[0] - theta).abs() < 1e-9);
    }

    #[test]
    fn block_diagonal_cat_cat_is_hyperbolic() {
        let m = IntMatrix::block_diag(&cat(), &cat());
        let sp = splitting(&m, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(sp.classification, Classification::Hyperbolic);
        assert_eq!(sp.dim_stable(), 2);
        assert_eq!(sp.dim_unstable(), 2);
    }

    #[test]
    fn nonergodic_input_rejected() {
        let rot = IntMatrix::new(2, vec![0, -1, 1, 0]).unwrap();
        assert_eq!(
            splitting(&rot, DEFAULT_TOLERANCE).unwrap_err(),
            SpectralError::Nonergodic
        );
    }

    #[test]
    fn span_condition_two_torus_pair() {
        let sp_s = splitting(&cat(), DEFAULT_TOLERANCE).unwrap();
        let sp_t = splitting(&cat_t(), DEFAULT_TOLERANCE).unwrap();
        let check = span_condition(&sp_s, &sp_t).unwrap();
        assert!(check.spans);
        assert_eq!(check.rank, 2);
        // identical maps share the stable line
        let same = span_condition(&sp_s, &sp_s).unwrap();
        assert!(!same.spans);
        assert_eq!(same.rank, 1);
    }

    #[test]
    fn span_condition_block_diag_complementary() {
        // S contracts in the first block, T in the second
        let s = IntMatrix::block_diag(&cat(), &IntMatrix::new(2, vec![2, 1, 1, 1]).unwrap());
        let sp_s = splitting(&s, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(sp_s.dim_stable(), 2);
        let check = span_condition(&sp_s, &sp_s).unwrap();
        // same map: transfer pools coincide, rank 2 < 4
        assert!(!check.spans);
    }

    #[test]
    fn complements_for_two_torus_pair() {
        let sp_s = splitting(&cat(), DEFAULT_TOLERANCE).unwrap();
        let sp_t = splitting(&cat_t(), DEFAULT_TOLERANCE).unwrap();
        let pair = choose_complements(&sp_s, &sp_t).unwrap();
        assert_eq!(pair.s_basis.ncols(), 1);
        assert_eq!(pair.t_basis.ncols(), 1);
        assert!(pair.condition_number.is_finite());
        // projections are complementary idempotents
        let sum = &pair.proj_s + &pair.proj_t;
        assert!((sum - DMatrix::<f64>::identity(2, 2)).norm() < 1e-9);
        let idem = &pair.proj_s * &pair.proj_s - &pair.proj_s;
        assert!(idem.norm() < 1e-9);
        // proj_s annihilates t and fixes s
        let pt = &pair.proj_s * &pair.t_basis;
        assert!(pt.norm() < 1e-9);
        let ps = &pair.proj_s * &pair.s_basis;
        assert!((ps - &pair.s_basis).norm() < 1e-9);
    }

    #[test]
    fn commuting_pair_sharing_eigenlines_fails() {
        let sp_s = splitting(&cat(), DEFAULT_TOLERANCE).unwrap();
        let err = choose_complements(&sp_s, &sp_s).unwrap_err();
        assert!(matches!(err, SpectralError::SpanFailed { rank: 1, .. }));
    }

    #[test]
    fn rotation_vector_cases() {
        let sp = splitting(&cat(), DEFAULT_TOLERANCE).unwrap();
        assert!(rotation_vector(&sp).unwrap().is_empty());
        let sp_salem = splitting(&salem(), DEFAULT_TOLERANCE).unwrap();
        let angles = rotation_vector(&sp_salem).unwrap();
        assert_eq!(angles.len(), 1);
        assert!(angles[0] > 0.0 && angles[0] < 0.5);
    }

    #[test]
    fn rotation_vector_block_diag_salem() {
        // hyperbolic block + Salem block: only the Salem angles appear
        let m = IntMatrix::block_diag(&cat(), &salem());
        let sp = splitting(&m, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(sp.classification, Classification::QuasihyperbolicCentralSpin);
        let angles = rotation_vector(&sp).unwrap();
        let sp_salem = splitting(&salem(), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(angles.len(), 1);
        assert!((angles[0] - sp_salem.rotation_blocks[0]).abs() < 1e-9);
    }

    #[test]
    fn stable_basis_agrees_with_refined_direction() {
        // f64 iteration of the stable vector picks up unstable contamination
        // quickly, so geometric contraction over long horizons is checked on
        // the refined rational basis (see refine::tests). Here: the f64 and
        // refined directions agree.
        let sp = splitting(&cat(), DEFAULT_TOLERANCE).unwrap();
        let blocks = refine::refined_transfer_pool(&cat(), 128).unwrap().unwrap();
        let refined = &blocks[0].vectors()[0];
        let rf: Vec<f64> = refined
            .iter()
            .map(|c| {
                use num_traits::ToPrimitive;
                c.to_f64().unwrap()
            })
            .collect();
        let v = sp.stable.column(0);
        let cross = v[0] * rf[1] - v[1] * rf[0];
        assert!(cross.abs() < 1e-9, "directions differ: cross = {cross}");
    }

    #[test]
    fn short_horizon_contraction_of_f64_stable_vector() {
        let sp = splitting(&cat(), DEFAULT_TOLERANCE).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &cat().to_f64s());
        let mut v = sp.stable.column(0).clone_owned();
        let lam = (3.0 - 5.0f64.sqrt()) / 2.0;
        for _ in 0..10 {
            let next = &m * &v;
            let ratio = next.norm() / v.norm();
            assert!((ratio - lam).abs() < 1e-8);
            v = next;
        }
    }
}
