//! Exact arithmetic on the d-torus.
//!
//! Points live on `T^d = R^d / Z^d` and are stored in fixed point: each
//! coordinate is an integer `k` in `[0, 2^p)` standing for `k / 2^p`, where
//! `p` is the precision in bits. An integer matrix maps dyadic rationals to
//! dyadic rationals, so iteration is exact: the only error a point ever
//! carries is the one it was born with (decimal parsing, truncation of a
//! sampled real), and that error grows by at most the matrix norm per step.
//! The budget rule `p >= N*log2(norm) + 64` keeps the accumulated error of an
//! N-step orbit below `2^-64`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Euclid, One, Signed, ToPrimitive, Zero};

pub mod rational;

/// Guard bits added on top of the expansion loss when sizing a precision
/// budget for an orbit.
pub const GUARD_BITS: u32 = 64;

/// Accepted points must certify accumulated error below this (2^-32).
pub const MAX_ACCEPTED_ERROR_LOG2: i64 = -32;

#[derive(Debug, Clone, PartialEq)]
pub enum TorusError {
    /// An input coordinate was NaN or infinite.
    NonFinite { index: usize },
    DimensionMismatch { expected: usize, got: usize },
    /// The matrix is singular and does not define an endomorphism.
    Singular,
    /// A shape problem in the raw entry list.
    BadShape { dim: usize, entries: usize },
    /// Precision budget for an orbit is not met; `required` is the minimal
    /// sufficient precision in bits.
    Budget {
        precision: u32,
        steps: usize,
        required: u32,
    },
    /// Unreasonable precision request.
    BadPrecision { precision: u32 },
}

impl fmt::Display for TorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusError::NonFinite { index } => {
                write!(f, "coordinate {index} is not finite")
            }
            TorusError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            TorusError::Singular => write!(f, "matrix is singular"),
            TorusError::BadShape { dim, entries } => {
                write!(f, "{entries} entries do not form a {dim}x{dim} matrix")
            }
            TorusError::Budget {
                precision,
                steps,
                required,
            } => write!(
                f,
                "precision budget violated: {steps} steps need at least \
                 {required} bits, point has {precision}"
            ),
            TorusError::BadPrecision { precision } => {
                write!(f, "unsupported precision: {precision} bits")
            }
        }
    }
}

impl std::error::Error for TorusError {}

/// Hard cap so a typo in a config cannot allocate gigabytes.
const PRECISION_CAP: u32 = 1 << 24;

// ---------------------------------------------------------------------------
// IntMatrix
// ---------------------------------------------------------------------------

/// A nonsingular d x d integer matrix acting on `R^d` and on `T^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>, // row-major
}

impl IntMatrix {
    /// Builds a matrix from row-major entries and checks nonsingularity.
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self, TorusError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(TorusError::BadShape {
                dim,
                entries: entries.len(),
            });
        }
        let m = IntMatrix { dim, entries };
        if m.det().is_zero() {
            return Err(TorusError::Singular);
        }
        Ok(m)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        IntMatrix { dim, entries }
    }

    /// Stacks two matrices into a block-diagonal matrix.
    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let dim = a.dim + b.dim;
        let mut entries = vec![0i64; dim * dim];
        for i in 0..a.dim {
            for j in 0..a.dim {
                entries[i * dim + j] = a.entries[i * a.dim + j];
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                entries[(a.dim + i) * dim + (a.dim + j)] = b.entries[i * b.dim + j];
            }
        }
        IntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut entries = vec![0i64; self.dim * self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                entries[j * self.dim + i] = self.entries[i * self.dim + j];
            }
        }
        IntMatrix {
            dim: self.dim,
            entries,
        }
    }

    /// Exact determinant by cofactor expansion; dimensions here are desk
    /// scale so the factorial cost is irrelevant.
    pub fn det(&self) -> BigInt {
        let big: Vec<BigInt> = self.entries.iter().map(|&e| BigInt::from(e)).collect();
        det_big(&big, self.dim)
    }

    /// Max-norm as an operator on `(R^d, ||.||_inf)`: the maximum absolute
    /// row sum.
    pub fn inf_norm(&self) -> u64 {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entries[i * self.dim + j].unsigned_abs())
                    .sum::<u64>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Exact power as big-integer entries.
    pub fn pow_big(&self, k: u32) -> BigMatrix {
        let mut acc = BigMatrix::identity(self.dim);
        let base = BigMatrix::from_int_matrix(self);
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.entries.iter().map(|&e| e as f64).collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

fn det_big(entries: &[BigInt], dim: usize) -> BigInt {
    if dim == 1 {
        return entries[0].clone();
    }
    let mut acc = BigInt::zero();
    for col in 0..dim {
        if entries[col].is_zero() {
            continue;
        }
        let mut minor = Vec::with_capacity((dim - 1) * (dim - 1));
        for i in 1..dim {
            for j in 0..dim {
                if j != col {
                    minor.push(entries[i * dim + j].clone());
                }
            }
        }
        let term = &entries[col] * det_big(&minor, dim - 1);
        if col % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Integer matrix with arbitrary-precision entries, used for exact powers
/// `M^k` and their norms inside strategies and verifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatrix {
    pub dim: usize,
    pub entries: Vec<BigInt>,
}

impl BigMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        BigMatrix { dim, entries }
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Self {
        BigMatrix {
            dim: m.dim,
            entries: m.entries.iter().map(|&e| BigInt::from(e)).collect(),
        }
    }

    pub fn mul(&self, other: &BigMatrix) -> BigMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let prod = a * &other.entries[k * d + j];
                    entries[i * d + j] += prod;
                }
            }
        }
        BigMatrix { dim: d, entries }
    }

    pub fn inf_norm(&self) -> BigUint {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entries[i * self.dim + j].magnitude().clone())
                    .sum::<BigUint>()
            })
            .max()
            .unwrap_or_else(BigUint::zero)
    }

    /// Applies the matrix to a rational vector.
    pub fn apply_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = BigRational::zero();
                for j in 0..self.dim {
                    acc += BigRational::from(self.entries[i * self.dim + j].clone()) * &v[j];
                }
                acc
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// TorusPoint
// ---------------------------------------------------------------------------

/// A point of `T^d` in fixed-point representation at `precision` bits,
/// carrying a certified bound on the max-norm distance to the ideal point it
/// stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<BigUint>,
    precision: u32,
    error_bound: BigRational,
}

impl TorusPoint {
    /// Origin of `T^d`.
    pub fn zero(dim: usize, precision: u32) -> Self {
        TorusPoint {
            coords: vec![BigUint::zero(); dim],
            precision,
            error_bound: BigRational::zero(),
        }
    }

    /// Reduces a rational vector mod 1 and rounds to `precision` bits.
    /// The reported error bound is the exact rounding residual.
    pub fn from_rationals(v: &[BigRational], precision: u32) -> Result<Self, TorusError> {
        if precision == 0 || precision > PRECISION_CAP {
            return Err(TorusError::BadPrecision { precision });
        }
        let modulus = BigUint::one() << precision;
        let mut coords = Vec::with_capacity(v.len());
        let mut err = BigRational::zero();
        for value in v {
            let frac = value - value.floor();
            // round to nearest multiple of 2^-p
            let scaled = &frac * BigRational::from(BigInt::from(modulus.clone()));
            let rounded = scaled.round();
            let residual = (&scaled - &rounded).abs()
                / BigRational::from(BigInt::from(modulus.clone()));
            if residual > err {
                err = residual.clone();
            }
            let mut k = rounded.to_integer();
            // rounding 0.999.. up can land exactly on 2^p
            let modulus_int = BigInt::from(modulus.clone());
            if k >= modulus_int {
                k -= &modulus_int;
            }
            if k.sign() == Sign::Minus {
                k += &modulus_int;
            }
            coords.push(k.magnitude().clone());
        }
        Ok(TorusPoint {
            coords,
            precision,
            error_bound: err,
        })
    }

    /// Reduces a real vector mod 1. Every finite f64 is an exact rational,
    /// so this only rounds if `precision` is too small to hold it.
    pub fn from_f64s(v: &[f64], precision: u32) -> Result<Self, TorusError> {
        let mut rats = Vec::with_capacity(v.len());
        for (index, &x) in v.iter().enumerate() {
            if !x.is_finite() {
                return Err(TorusError::NonFinite { index });
            }
            rats.push(BigRational::from_float(x).expect("finite f64 is rational"));
        }
        Self::from_rationals(&rats, precision)
    }

    /// Exact fixed-point constructor; `numerators[i] / 2^precision`.
    pub fn from_fixed(numerators: Vec<BigUint>, precision: u32) -> Result<Self, TorusError> {
        if precision == 0 || precision > PRECISION_CAP {
            return Err(TorusError::BadPrecision { precision });
        }
        let modulus = BigUint::one() << precision;
        let coords = numerators.into_iter().map(|n| n % &modulus).collect();
        Ok(TorusPoint {
            coords,
            precision,
            error_bound: BigRational::zero(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn error_bound(&self) -> &BigRational {
        &self.error_bound
    }

    /// log2 of the error bound, or None when the point is exact.
    pub fn error_bound_log2(&self) -> Option<f64> {
        if self.error_bound.is_zero() {
            return None;
        }
        let num = self.error_bound.numer().magnitude();
        let den = self.error_bound.denom().magnitude();
        Some(log2_biguint(num) - log2_biguint(den))
    }

    /// Downstream acceptance gate: certified error below 2^-32.
    pub fn error_acceptable(&self) -> bool {
        self.error_bound
            < BigRational::new(
                BigInt::one(),
                BigInt::one() << (-MAX_ACCEPTED_ERROR_LOG2) as u32,
            )
    }

    pub fn with_error_bound(mut self, error_bound: BigRational) -> Self {
        self.error_bound = error_bound;
        self
    }

    /// Raw fixed-point numerators.
    pub fn numerators(&self) -> &[BigUint] {
        &self.coords
    }

    /// Exact coordinates as rationals in `[0, 1)`.
    pub fn to_rationals(&self) -> Vec<BigRational> {
        let den = BigInt::one() << self.precision;
        self.coords
            .iter()
            .map(|k| BigRational::new(BigInt::from(k.clone()), den.clone()))
            .collect()
    }

    /// Coordinates truncated to f64, error below 2^-52 per coordinate.
    pub fn to_f64s(&self) -> Vec<f64> {
        self.coords
            .iter()
            .map(|k| fixed_to_f64(k, self.precision))
            .collect()
    }

    /// Rescales to a new precision. Raising precision is lossless; lowering
    /// rounds and adds the residual to the error bound.
    pub fn with_precision(&self, precision: u32) -> Result<Self, TorusError> {
        if precision == 0 || precision > PRECISION_CAP {
            return Err(TorusError::BadPrecision { precision });
        }
        if precision == self.precision {
            return Ok(self.clone());
        }
        if precision > self.precision {
            let shift = precision - self.precision;
            let coords = self.coords.iter().map(|k| k << shift).collect();
            return Ok(TorusPoint {
                coords,
                precision,
                error_bound: self.error_bound.clone(),
            });
        }
        let shift = self.precision - precision;
        let half = BigUint::one() << (shift - 1);
        let modulus = BigUint::one() << precision;
        let mut extra = BigRational::zero();
        let coords: Vec<BigUint> = self
            .coords
            .iter()
            .map(|k| {
                let rounded = (k + &half) >> shift;
                let residual = (BigRational::new(
                    BigInt::from(rounded.clone()),
                    BigInt::one() << precision,
                ) - BigRational::new(
                    BigInt::from(k.clone()),
                    BigInt::one() << self.precision,
                ))
                .abs();
                if residual > extra {
                    extra = residual;
                }
                rounded % &modulus
            })
            .collect();
        Ok(TorusPoint {
            coords,
            precision,
            error_bound: &self.error_bound + extra,
        })
    }
}

fn fixed_to_f64(k: &BigUint, precision: u32) -> f64 {
    if precision <= 52 {
        return k.to_f64().unwrap_or(0.0) / (1u64 << precision) as f64;
    }
    let top = (k >> (precision - 52)).to_u64().unwrap_or(0);
    top as f64 / (1u64 << 52) as f64
}

fn log2_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().unwrap().log2();
    }
    let top = (n >> (bits - 53)).to_f64().unwrap();
    top.log2() + (bits - 53) as f64
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Reduces a real vector into `[0,1)^d` coordinatewise (floor subtraction).
pub fn reduce_mod1(v: &[f64], precision: u32) -> Result<TorusPoint, TorusError> {
    TorusPoint::from_f64s(v, precision)
}

/// Torus metric induced by the max norm: per coordinate the circle distance
/// `min(|dx|, 1 - |dx|)`, then the maximum over coordinates. Always <= 1/2.
pub fn torus_distance(x: &TorusPoint, y: &TorusPoint) -> Result<BigRational, TorusError> {
    if x.dim() != y.dim() {
        return Err(TorusError::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let p = x.precision.max(y.precision);
    let xs = x.with_precision(p)?;
    let ys = y.with_precision(p)?;
    let modulus = BigUint::one() << p;
    let mut best = BigUint::zero();
    for (a, b) in xs.coords.iter().zip(ys.coords.iter()) {
        let delta = if a >= b { a - b } else { b - a };
        let wrapped = (&modulus - &delta).min(delta);
        if wrapped > best {
            best = wrapped;
        }
    }
    Ok(BigRational::new(BigInt::from(best), BigInt::one() << p))
}

/// Same metric as [`torus_distance`] but for f64 work where exactness does
/// not matter (estimators, report formatting).
pub fn torus_distance_f64(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| {
            let d = (a - b).rem_euclid(1.0);
            d.min(1.0 - d)
        })
        .fold(0.0, f64::max)
}

/// Applies the matrix to a point: exact multiply-and-wrap in fixed point.
/// The error bound scales by the operator norm; the representation itself
/// adds no rounding because integer matrices preserve dyadic denominators.
pub fn apply(m: &IntMatrix, x: &TorusPoint) -> Result<TorusPoint, TorusError> {
    if m.dim() != x.dim() {
        return Err(TorusError::DimensionMismatch {
            expected: m.dim(),
            got: x.dim(),
        });
    }
    let modulus = BigInt::one() << x.precision;
    let d = x.dim();
    let mut coords = Vec::with_capacity(d);
    for i in 0..d {
        let mut acc = BigInt::zero();
        for j in 0..d {
            let e = m.entry(i, j);
            if e == 0 {
                continue;
            }
            acc += BigInt::from(e) * BigInt::from(x.coords[j].clone());
        }
        let wrapped = acc.rem_euclid(&modulus);
        coords.push(wrapped.magnitude().clone());
    }
    let error_bound = &x.error_bound * BigRational::from(BigInt::from(m.inf_norm()));
    Ok(TorusPoint {
        coords,
        precision: x.precision,
        error_bound,
    })
}

/// Minimal precision for an N-step orbit under `m`: expansion loss plus
/// guard bits.
pub fn required_precision(m: &IntMatrix, steps: usize) -> u32 {
    let norm = m.inf_norm().max(1);
    let loss = (steps as f64) * (norm as f64).log2();
    loss.ceil() as u32 + GUARD_BITS
}

/// Checks the orbit precision budget, returning the budget error with the
/// minimal sufficient precision on failure.
pub fn check_budget(m: &IntMatrix, x: &TorusPoint, steps: usize) -> Result<(), TorusError> {
    let required = required_precision(m, steps);
    if x.precision < required {
        return Err(TorusError::Budget {
            precision: x.precision,
            steps,
            required,
        });
    }
    Ok(())
}

/// A computed orbit segment `x, Mx, ..., M^N x` with its error ledger.
#[derive(Debug, Clone)]
pub struct OrbitSegment {
    pub base: TorusPoint,
    pub matrix: IntMatrix,
    pub points: Vec<TorusPoint>,
    pub per_step_error: Vec<BigRational>,
}

/// Iterates the orbit with the budget enforced. The segment holds `N + 1`
/// points and a nondecreasing error sequence.
pub fn orbit(m: &IntMatrix, x: &TorusPoint, steps: usize) -> Result<OrbitSegment, TorusError> {
    check_budget(m, x, steps)?;
    let mut points = Vec::with_capacity(steps + 1);
    let mut per_step_error = Vec::with_capacity(steps + 1);
    points.push(x.clone());
    per_step_error.push(x.error_bound.clone());
    let mut current = x.clone();
    for _ in 0..steps {
        current = apply(m, &current)?;
        points.push(current.clone());
        per_step_error.push(current.error_bound.clone());
    }
    Ok(OrbitSegment {
        base: x.clone(),
        matrix: m.clone(),
        points,
        per_step_error,
    })
}

/// Streaming orbit iterator; yields `x, Mx, M^2 x, ...` without storing the
/// whole segment. The budget is the caller's business (checked by the
/// operations that construct it).
pub struct OrbitIter {
    matrix: IntMatrix,
    current: TorusPoint,
}

impl OrbitIter {
    pub fn new(matrix: IntMatrix, start: TorusPoint) -> Self {
        OrbitIter {
            matrix,
            current: start,
        }
    }
}

impl Iterator for OrbitIter {
    type Item = TorusPoint;

    fn next(&mut self) -> Option<TorusPoint> {
        let out = self.current.clone();
        self.current = apply(&self.matrix, &self.current).expect("dimensions fixed");
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> IntMatrix {
        IntMatrix::new(2, vec![2, 1, 1, 1]).unwrap()
    }

    #[test]
    fn reduce_wraps_into_unit_box() {
        let p = reduce_mod1(&[1.25, -0.25], 64).unwrap();
        let r = p.to_rationals();
        assert_eq!(r[0], BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(r[1], BigRational::new(BigInt::from(3), BigInt::from(4)));
        assert!(p.error_bound().is_zero());
    }

    #[test]
    fn reduce_integer_vector_is_origin() {
        let p = reduce_mod1(&[3.0, -2.0], 64).unwrap();
        assert_eq!(p, TorusPoint::zero(2, 64));
        let q = reduce_mod1(&[0.0, 0.0], 64).unwrap();
        assert_eq!(q, TorusPoint::zero(2, 64));
    }

    #[test]
    fn reduce_rejects_non_finite() {
        let err = reduce_mod1(&[f64::NAN, 0.0], 64).unwrap_err();
        assert_eq!(err, TorusError::NonFinite { index: 0 });
    }

    #[test]
    fn distance_wraparound_and_bounds() {
        let x = reduce_mod1(&[0.1, 0.9], 64).unwrap();
        let y = TorusPoint::zero(2, 64);
        let d = torus_distance(&x, &y).unwrap();
        // 0.1 is not dyadic; compare against the stored coordinates instead
        let xr = x.to_rationals();
        let expected = (BigRational::one() - &xr[1]).max(xr[0].clone());
        assert_eq!(d, expected);
        assert!(d.to_f64().unwrap() - 0.1 < 1e-15);

        let z = reduce_mod1(&[0.5, 0.5], 64).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(torus_distance(&z, &y).unwrap(), half);
        assert!(torus_distance(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn apply_cat_map_hand_cases() {
        let m = cat();
        let x = reduce_mod1(&[0.5, 0.5], 64).unwrap();
        let y = apply(&m, &x).unwrap();
        let r = y.to_rationals();
        assert_eq!(r[0], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert!(r[1].is_zero());

        let id = IntMatrix::identity(2);
        let z = reduce_mod1(&[0.3, 0.7], 64).unwrap();
        assert_eq!(apply(&id, &z).unwrap(), z);
    }

    #[test]
    fn apply_rational_fifths() {
        // (1/5, 2/5) -> (4/5, 3/5) under the cat map
        let v = vec![
            BigRational::new(BigInt::from(1), BigInt::from(5)),
            BigRational::new(BigInt::from(2), BigInt::from(5)),
        ];
        let x = TorusPoint::from_rationals(&v, 128).unwrap();
        let y = apply(&cat(), &x).unwrap();
        let f = y.to_f64s();
        assert!((f[0] - 0.8).abs() < 1e-15);
        assert!((f[1] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn orbit_budget_enforced() {
        let m = cat();
        let x = TorusPoint::zero(2, 64);
        let err = orbit(&m, &x, 100).unwrap_err();
        match err {
            TorusError::Budget { required, .. } => {
                // 100 * log2(3) + 64 = 222.5...
                assert_eq!(required, 223);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn orbit_zero_steps_is_base_only() {
        let m = cat();
        let x = TorusPoint::zero(2, 64);
        let seg = orbit(&m, &x, 0).unwrap();
        assert_eq!(seg.points.len(), 1);
        assert_eq!(seg.points[0], x);
    }

    #[test]
    fn error_bound_scales_by_norm() {
        let m = cat();
        let v = vec![
            BigRational::new(BigInt::from(1), BigInt::from(10)),
            BigRational::new(BigInt::from(1), BigInt::from(10)),
        ];
        let x = TorusPoint::from_rationals(&v, 80).unwrap();
        let e0 = x.error_bound().clone();
        assert!(!e0.is_zero());
        let y = apply(&m, &x).unwrap();
        assert_eq!(y.error_bound(), &(&e0 * BigRational::from(BigInt::from(3))));
    }

    #[test]
    fn precision_lift_is_lossless() {
        let v = vec![BigRational::new(BigInt::from(1), BigInt::from(3))];
        let x = TorusPoint::from_rationals(&v, 100).unwrap();
        let y = x.with_precision(200).unwrap();
        assert_eq!(x.to_f64s(), y.to_f64s());
        assert_eq!(x.error_bound(), y.error_bound());
    }
}
