//! High-precision rational eigenvector refinement.
//!
//! The f64 bases from [`super::splitting`] are fine for rank decisions but
//! not for long exact iteration: a 1e-16 contamination along an expanding
//! direction blows up after a few dozen steps. Leaf embeddings and the
//! invariance checks instead use bases refined here: eigenvalues are
//! re-derived to an arbitrary bit count by exact Newton iteration on the
//! integer polynomial, and eigenvectors come from one rational inverse
//! iteration (columns of `(M - shift)^{-1}` lie within `2^-bits` of the
//!目标 eigenspace after normalization).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{squarefree_decomposition, sturm_count, trace_transform, IntPoly};
use crate::spectral::SpectralError;
use crate::torus::IntMatrix;
use crate::util::log2_rational_abs;

/// Rounds a rational to `bits` fractional bits, keeping denominators small
/// during Newton iteration.
fn round_bits(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

fn eval_rational(p: &IntPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc * x + BigRational::from(c.clone());
    }
    acc
}

/// Refines a simple real root of `p` from an f64 seed to `bits` bits by
/// exact Newton steps with dyadic rounding.
pub fn refine_real_root(p: &IntPoly, seed: f64, bits: u32) -> Result<BigRational, SpectralError> {
    let dp = p.derivative();
    let mut x = BigRational::from_float(seed).ok_or_else(|| SpectralError::Construction(
        "non-finite root seed".into(),
    ))?;
    let work_bits = bits + 64;
    let target = -(bits as f64);
    for _ in 0..200 {
        let fx = eval_rational(p, &x);
        if fx.is_zero() {
            return Ok(x);
        }
        let dfx = eval_rational(&dp, &x);
        if dfx.is_zero() {
            return Err(SpectralError::Construction(
                "Newton derivative vanished during refinement".into(),
            ));
        }
        let step = &fx / &dfx;
        x = round_bits(&(&x - &step), work_bits);
        if log2_rational_abs(&step) < target - 2.0 {
            return Ok(x);
        }
    }
    Err(SpectralError::Construction(
        "root refinement did not converge".into(),
    ))
}

/// Solves `A x = b` over the rationals by Gaussian elimination with
/// partial pivoting. Returns None for singular `A`.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            log2_rational_abs(&m[i][col])
                .partial_cmp(&log2_rational_abs(&m[j][col]))
                .unwrap()
        })?;
        if m[pivot][col].is_zero() {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..n {
            if row == col || m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] / &m[col][col];
            for k in col..=n {
                let sub = &factor * &m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(&m[i][n] / &m[i][i]);
    }
    Some(out)
}

fn rational_identity(d: usize) -> Vec<Vec<BigRational>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn matrix_rational(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    let d = m.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from(BigInt::from(m.entry(i, j))))
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

fn mat_apply(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for (c, x) in row.iter().zip(v.iter()) {
                acc += c * x;
            }
            acc
        })
        .collect()
}

fn normalize_max(v: &mut [BigRational]) {
    let mut best = BigRational::zero();
    for c in v.iter() {
        let a = c.abs();
        if a > best {
            best = a;
        }
    }
    if best.is_zero() {
        return;
    }
    for c in v.iter_mut() {
        *c /= &best;
    }
}

/// Extracts `count` well-independent normalized columns of `A^{-1}`, the
/// inverse-iteration approximation of the near-kernel of `A`.
fn dominant_columns(
    a: &[Vec<BigRational>],
    count: usize,
) -> Result<Vec<Vec<BigRational>>, SpectralError> {
    let d = a.len();
    let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = vec![BigRational::zero(); d];
        e[j] = BigRational::one();
        let mut col = solve_rational(a, &e).ok_or_else(|| {
            SpectralError::Construction("inverse iteration hit a singular shift".into())
        })?;
        normalize_max(&mut col);
        cols.push(col);
    }
    // greedy max-volume subset, scored in f64
    let to_f64 = |v: &Vec<BigRational>| -> Vec<f64> {
        v.iter()
            .map(|c| {
                let l = log2_rational_abs(c);
                if l == f64::NEG_INFINITY {
                    0.0
                } else {
                    let sign = if c.is_negative() { -1.0 } else { 1.0 };
                    sign * (2f64).powf(l.clamp(-512.0, 512.0))
                }
            })
            .collect()
    };
    let fcols: Vec<Vec<f64>> = cols.iter().map(to_f64).collect();
    let mut picked: Vec<usize> = Vec::new();
    let mut chosen_f: Vec<Vec<f64>> = Vec::new();
    for _ in 0..count {
        let mut best: Option<(usize, f64)> = None;
        for (j, fc) in fcols.iter().enumerate() {
            if picked.contains(&j) {
                continue;
            }
            // residual after projecting out the chosen ones
            let mut r = fc.clone();
            for c in &chosen_f {
                let dot: f64 = r.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
                let nc: f64 = c.iter().map(|x| x * x).sum();
                if nc > 0.0 {
                    for (ri, ci) in r.iter_mut().zip(c.iter()) {
                        *ri -= dot / nc * ci;
                    }
                }
            }
            let norm: f64 = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if best.map(|(_, s)| norm > s).unwrap_or(true) {
                best = Some((j, norm));
            }
        }
        let (j, score) = best.ok_or_else(|| {
            SpectralError::Construction("not enough independent inverse-iteration columns".into())
        })?;
        if score < 1e-6 {
            return Err(SpectralError::Construction(
                "inverse-iteration columns are too dependent".into(),
            ));
        }
        picked.push(j);
        chosen_f.push(fcols[j].clone());
    }
    Ok(picked.into_iter().map(|j| cols[j].clone()).collect())
}

/// A refined invariant block: either a real eigenline or a rotation plane
/// for a certified unit-circle pair.
#[derive(Debug, Clone)]
pub enum RefinedBlock {
    /// Real eigenvalue with its high-precision value and eigenvectors
    /// (one per multiplicity).
    Line {
        eigenvalue: BigRational,
        vectors: Vec<Vec<BigRational>>,
    },
    /// Unit-circle conjugate pair with trace `z = 2 cos(2 pi theta)`;
    /// `vectors` spans the true eigenplane(s), two per multiplicity.
    Plane {
        trace: BigRational,
        vectors: Vec<Vec<BigRational>>,
    },
}

impl RefinedBlock {
    pub fn vectors(&self) -> &[Vec<BigRational>] {
        match self {
            RefinedBlock::Line { vectors, .. } => vectors,
            RefinedBlock::Plane { vectors, .. } => vectors,
        }
    }
}

/// Residual check: `log2 ||A v|| / ||v||` must be below `-(bits/2)`.
fn check_residual(
    a: &[Vec<BigRational>],
    v: &[BigRational],
    bits: u32,
    what: &str,
) -> Result<(), SpectralError> {
    let av = mat_apply(a, v);
    let num = av
        .iter()
        .map(log2_rational_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    let den = v
        .iter()
        .map(log2_rational_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if num - den > -(bits as f64) / 2.0 {
        return Err(SpectralError::Certification {
            factor: what.into(),
            detail: format!(
                "refined vector residual 2^{:.1} exceeds 2^-{}",
                num - den,
                bits / 2
            ),
        });
    }
    Ok(())
}

/// Refined basis of the contracted-plus-semisimple-central subspace
/// `s_- + s_0'` at `bits` bits, for matrices whose off-circle stable
/// eigenvalues are all real. Returns `Ok(None)` when a complex contracting
/// pair is present (callers fall back to the f64 basis).
pub fn refined_transfer_pool(
    m: &IntMatrix,
    bits: u32,
) -> Result<Option<Vec<RefinedBlock>>, SpectralError> {
    let f = crate::spectral::char_poly(m);
    if f.constant_term().is_zero() {
        return Err(SpectralError::Singular);
    }
    let mr = matrix_rational(m);
    let mut blocks = Vec::new();
    for (u, mult) in squarefree_decomposition(&f) {
        // unit-circle planes from the reciprocal part
        let rev = u.reverse();
        let g = u.to_rational().gcd(&rev.to_rational()).to_primitive_int();
        let mut circle_traces: Vec<f64> = Vec::new();
        if g.degree() > 0 && g.eval_big(&BigInt::one()) != BigInt::zero()
            && g.eval_big(&BigInt::from(-1)) != BigInt::zero()
        {
            if let Some(q) = trace_transform(&g) {
                let two = BigRational::from(BigInt::from(2));
                let pairs = sturm_count(&q.to_rational(), &(-two.clone()), &two);
                if pairs > 0 {
                    // f64 seeds for the real roots of q in (-2, 2)
                    for r in crate::poly::aberth_roots(&q) {
                        if r.im.abs() < 1e-9 && r.re.abs() < 2.0 {
                            circle_traces.push(r.re);
                        }
                    }
                    if circle_traces.len() != pairs {
                        return Err(SpectralError::Certification {
                            factor: format!("{q}"),
                            detail: format!(
                                "expected {pairs} circle traces, found {}",
                                circle_traces.len()
                            ),
                        });
                    }
                    for seed in &circle_traces {
                        let z = refine_real_root(&q, *seed, bits)?;
                        // A = M^2 - z M + I
                        let m2 = mat_mul(&mr, &mr);
                        let d = m.dim();
                        let mut a = rational_identity(d);
                        for i in 0..d {
                            for j in 0..d {
                                let shift = &z * &mr[i][j];
                                a[i][j] += &m2[i][j] - shift;
                            }
                        }
                        let vectors = dominant_columns(&a, 2 * mult)?;
                        for v in &vectors {
                            check_residual(&a, v, bits, "circle plane")?;
                        }
                        blocks.push(RefinedBlock::Plane { trace: z, vectors });
                    }
                }
            }
        }
        // real contracting eigenvalues, rejecting complex contracting pairs
        for root in crate::poly::aberth_roots(&u) {
            if root.norm() >= 1.0 - 1e-9 {
                continue;
            }
            if root.im.abs() > 1e-9 {
                if root.im > 0.0 {
                    return Ok(None); // complex contracting pair: not refinable here
                }
                continue;
            }
            let lambda = refine_real_root(&u, root.re, bits)?;
            let d = m.dim();
            let mut a = matrix_rational(m);
            for (i, row) in a.iter_mut().enumerate().take(d) {
                row[i] -= &lambda;
            }
            let vectors = dominant_columns(&a, mult)?;
            for v in &vectors {
                check_residual(&a, v, bits, "stable line")?;
            }
            blocks.push(RefinedBlock::Line {
                eigenvalue: lambda,
                vectors,
            });
        }
    }
    Ok(Some(blocks))
}

/// Flattens refined blocks into one rational basis matrix (vectors as
/// columns in order).
pub fn pool_vectors(blocks: &[RefinedBlock]) -> Vec<Vec<BigRational>> {
    blocks
        .iter()
        .flat_map(|b| b.vectors().iter().cloned())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::tests_support::{cat, salem};

    #[test]
    fn refine_root_sqrt5() {
        // x^2 - 5, root sqrt(5)
        let p = IntPoly::from_i64(&[-5, 0, 1]);
        let r = refine_real_root(&p, 2.2360679, 300).unwrap();
        let residual = eval_rational(&p, &r);
        assert!(log2_rational_abs(&residual) < -290.0);
    }

    #[test]
    fn refined_stable_line_contracts_exactly() {
        let m = cat();
        let blocks = refined_transfer_pool(&m, 512).unwrap().unwrap();
        assert_eq!(blocks.len(), 1);
        let v = &blocks[0].vectors()[0];
        let mr = matrix_rational(&m);
        // after 50 exact steps the norm ratio still tracks (3 - sqrt5)/2
        let lam = (3.0 - 5.0f64.sqrt()) / 2.0;
        let mut cur = v.clone();
        for _ in 0..50 {
            let next = mat_apply(&mr, &cur);
            let ratio = (0..2)
                .map(|i| log2_rational_abs(&next[i]) - log2_rational_abs(&cur[i]))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((ratio - lam.log2()).abs() < 1e-6, "ratio 2^{ratio}");
            cur = next;
        }
    }

    #[test]
    fn refined_salem_plane_stays_bounded() {
        let m = salem();
        let blocks = refined_transfer_pool(&m, 512).unwrap().unwrap();
        // one stable line and one circle plane
        let mut planes = 0;
        let mr = matrix_rational(&m);
        for b in &blocks {
            if let RefinedBlock::Plane { vectors, .. } = b {
                planes += 1;
                assert_eq!(vectors.len(), 2);
                for v in vectors {
                    let start = v
                        .iter()
                        .map(log2_rational_abs)
                        .fold(f64::NEG_INFINITY, f64::max);
                    let mut cur = v.clone();
                    for _ in 0..100 {
                        cur = mat_apply(&mr, &cur);
                        let now = cur
                            .iter()
                            .map(log2_rational_abs)
                            .fold(f64::NEG_INFINITY, f64::max);
                        assert!(
                            (now - start).abs() < 3.33,
                            "drifted by factor 2^{}",
                            now - start
                        );
                    }
                }
            }
        }
        assert_eq!(planes, 1);
    }
}
