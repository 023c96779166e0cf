//! Exact rational orbits, the oracle fast path.
//!
//! Points with rational coordinates `p/q` stay in the finite set
//! `(Z/q)^d` under an integer matrix, so their orbits are computed exactly
//! and are eventually periodic. Test oracles use this to pin expected
//! values for periodic behavior without any rounding story.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{IntMatrix, TorusError};

/// A torus point with exact rational coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    pub coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        let coords = coords.into_iter().map(|c| {
            let f = c.floor();
            c - f
        }).collect();
        RationalPoint { coords }
    }

    pub fn from_fractions(fracs: &[(i64, i64)]) -> Self {
        Self::new(
            fracs
                .iter()
                .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// One exact step `x -> Mx mod 1`.
pub fn apply_exact(m: &IntMatrix, x: &RationalPoint) -> Result<RationalPoint, TorusError> {
    if m.dim() != x.dim() {
        return Err(TorusError::DimensionMismatch {
            expected: m.dim(),
            got: x.dim(),
        });
    }
    let d = m.dim();
    let mut coords = Vec::with_capacity(d);
    for i in 0..d {
        let mut acc = BigRational::zero();
        for j in 0..d {
            let e = m.entry(i, j);
            if e == 0 {
                continue;
            }
            acc += BigRational::from(BigInt::from(e)) * &x.coords[j];
        }
        let f = acc.floor();
        coords.push(acc - f);
    }
    Ok(RationalPoint { coords })
}

/// Exact orbit of length `steps + 1`.
pub fn orbit_exact(
    m: &IntMatrix,
    x: &RationalPoint,
    steps: usize,
) -> Result<Vec<RationalPoint>, TorusError> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(x.clone());
    let mut cur = x.clone();
    for _ in 0..steps {
        cur = apply_exact(m, &cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Finds (preperiod, period) of the exact orbit by direct search, capped at
/// `max_steps`. Returns None if no repeat shows up within the cap.
pub fn find_period(
    m: &IntMatrix,
    x: &RationalPoint,
    max_steps: usize,
) -> Result<Option<(usize, usize)>, TorusError> {
    let mut seen: Vec<RationalPoint> = vec![x.clone()];
    let mut cur = x.clone();
    for _ in 0..max_steps {
        cur = apply_exact(m, &cur)?;
        if let Some(pos) = seen.iter().position(|p| p == &cur) {
            return Ok(Some((pos, seen.len() - pos)));
        }
        seen.push(cur.clone());
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifths_are_periodic_under_cat() {
        let m = IntMatrix::new(2, vec![2, 1, 1, 1]).unwrap();
        let x = RationalPoint::from_fractions(&[(1, 5), (2, 5)]);
        let orbit = orbit_exact(&m, &x, 20).unwrap();
        // denominators all divide 5
        for p in &orbit {
            for c in &p.coords {
                assert_eq!(BigInt::from(5) % c.denom(), BigInt::zero());
            }
        }
        let (pre, period) = find_period(&m, &x, 100).unwrap().unwrap();
        assert_eq!(pre, 0); // cat map is invertible on (Z/5)^2
        assert!(period <= 25);
        assert_eq!(orbit[period].coords, x.coords);
    }
}
