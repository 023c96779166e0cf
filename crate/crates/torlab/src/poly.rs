//! Exact univariate polynomial arithmetic over Z and Q.
//!
//! Everything the spectral classifier certifies exactly lives here:
//! cyclotomic trial division, squarefree (Yun) decomposition, the
//! reciprocal-part extraction, the `x + 1/x` trace transform, and Sturm
//! sequence root counting on an interval. Numeric (f64) root finding with
//! Aberth iteration rounds the module out; its output is always
//! cross-checked against the exact counts by the callers.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer polynomial, coefficients ascending, no trailing zeros.
/// The zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// x^n - 1
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = -BigInt::one();
        coeffs[n] = BigInt::one();
        IntPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact division over Z; None when the division does not come out even.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dlead = divisor.leading();
        let ddeg = divisor.degree();
        let qdeg = self.degree() - ddeg;
        let mut quot = vec![BigInt::zero(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let top = rem[k + ddeg].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&dlead);
            if !r.is_zero() {
                return None;
            }
            quot[k] = q.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(quot))
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// The reversed polynomial x^deg * p(1/x).
    pub fn reverse(&self) -> IntPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPoly::new(coeffs)
    }

    pub fn is_palindromic(&self) -> bool {
        !self.is_zero() && self.coeffs == self.reverse().coeffs
    }

    /// Gcd of coefficients, positive.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Content-free copy with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval_big(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Complex64::new(c.to_f64().unwrap_or(f64::INFINITY), 0.0);
        }
        acc
    }

    pub fn to_rational(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect(),
        )
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => {
                    if a.is_one() {
                        write!(f, "x")?
                    } else {
                        write!(f, "{a}x")?
                    }
                }
                _ => {
                    if a.is_one() {
                        write!(f, "x^{i}")?
                    } else {
                        write!(f, "{a}x^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// All k with Euler phi(k) <= d; a root of unity of order k can divide the
/// characteristic polynomial of a d x d integer matrix only for these k.
pub fn cyclotomic_orders(d: usize) -> Vec<u64> {
    // phi(k) >= sqrt(k/2), so k <= 2 d^2 + 1 is a safe cutoff
    let cap = (2 * d * d + 2) as u64;
    (1..=cap).filter(|&k| euler_phi(k) <= d as u64).collect()
}

/// The k-th cyclotomic polynomial by recursive exact division of x^k - 1.
pub fn cyclotomic(k: u64) -> IntPoly {
    assert!(k > 0);
    if k == 1 {
        return IntPoly::from_i64(&[-1, 1]);
    }
    let mut result = IntPoly::x_pow_minus_one(k as usize);
    for d in 1..k {
        if k % d == 0 {
            let phi_d = cyclotomic(d);
            result = result
                .div_exact(&phi_d)
                .expect("cyclotomic division is exact");
        }
    }
    result
}

// ---------------------------------------------------------------------------
// Rational polynomials: gcd, squarefree decomposition, Sturm sequences
// ---------------------------------------------------------------------------

/// Rational-coefficient polynomial, ascending coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        RatPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::new(vec![]);
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean remainder.
    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        assert!(!divisor.is_zero());
        let mut rem = self.coeffs.clone();
        let dl = divisor.leading();
        let dd = divisor.degree();
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.last().unwrap().clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dd;
            let q = &top / &dl;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = shift + j;
                let sub = &q * dc;
                rem[idx] -= sub;
            }
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
        }
        RatPoly::new(rem)
    }

    pub fn div_exact(&self, divisor: &RatPoly) -> Option<RatPoly> {
        if divisor.is_zero() || self.is_zero() {
            return if self.is_zero() {
                Some(RatPoly::new(vec![]))
            } else {
                None
            };
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = divisor.leading();
        let dd = divisor.degree();
        let qd = self.degree() - dd;
        let mut quot = vec![BigRational::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let q = &top / &dl;
            quot[k] = q.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let sub = &q * dc;
                rem[k + j] -= sub;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(RatPoly::new(quot))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Clears denominators into a primitive integer polynomial.
    pub fn to_primitive_int(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }
}

/// Yun's squarefree decomposition: returns pairwise-coprime squarefree
/// `u_i` with multiplicities so that the input is `prod u_i^{m_i}` up to a
/// constant. Constant factors are dropped.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, usize)> {
    if f.is_zero() || f.degree() == 0 {
        return vec![];
    }
    let fr = f.to_rational().monic();
    let g = fr.gcd(&fr.derivative());
    if g.degree() == 0 {
        return vec![(f.primitive(), 1)];
    }
    let mut out = Vec::new();
    let mut c = fr.div_exact(&g).expect("gcd divides");
    let mut d = fr
        .derivative()
        .div_exact(&g)
        .expect("gcd divides derivative")
        .rem_sub(&c.derivative());
    let mut mult = 1usize;
    loop {
        let u = c.gcd(&d);
        if u.degree() > 0 {
            out.push((u.to_primitive_int(), mult));
        }
        c = c.div_exact(&u).expect("u divides c");
        if c.degree() == 0 {
            break;
        }
        d = d.div_exact(&u).expect("u divides d").rem_sub(&c.derivative());
        mult += 1;
    }
    out
}

impl RatPoly {
    fn rem_sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        RatPoly::new(out)
    }
}

/// Number of distinct real roots of `p` in the half-open interval `(a, b]`,
/// by Sturm's theorem. Works for non-squarefree inputs too (the chain
/// terminates at the gcd with the derivative).
pub fn sturm_count(p: &RatPoly, a: &BigRational, b: &BigRational) -> usize {
    assert!(a < b);
    if p.degree() == 0 || p.is_zero() {
        return 0;
    }
    let mut chain = vec![p.monic(), p.derivative().monic()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        let neg = RatPoly::new(r.coeffs.iter().map(|c| -c.clone()).collect());
        chain.push(neg.monic());
    }
    let variations = |x: &BigRational| -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None; // sign positive?
        for q in &chain {
            let v = q.eval(x);
            if v.is_zero() {
                continue;
            }
            let s = v.is_positive();
            if let Some(prev) = last {
                if prev != s {
                    count += 1;
                }
            }
            last = Some(s);
        }
        count
    };
    variations(a).saturating_sub(variations(b))
}

// ---------------------------------------------------------------------------
// Trace transform for palindromic polynomials
// ---------------------------------------------------------------------------

/// For a palindromic polynomial `p` of even degree `2m`, returns the degree-m
/// polynomial `q` with `p(x) = x^m q(x + 1/x)`. Roots of `p` on the unit
/// circle biject with roots of `q` in `(-2, 2)` via `z = 2 cos(theta)`.
pub fn trace_transform(p: &IntPoly) -> Option<IntPoly> {
    if !p.is_palindromic() || p.degree() % 2 != 0 {
        return None;
    }
    let m = p.degree() / 2;
    // c_i(z) = x^i + x^-i: c_0 = 2, c_1 = z, c_{i+1} = z c_i - c_{i-1}
    let z = IntPoly::from_i64(&[0, 1]);
    let mut c_prev = IntPoly::from_i64(&[2]);
    let mut c_cur = z.clone();
    let mut q = IntPoly::new(vec![p.coeff(m)]);
    for i in 1..=m {
        q = q.add(&c_cur.scale(&p.coeff(m + i)));
        if i < m {
            let next = z.mul(&c_cur).sub(&c_prev);
            c_prev = c_cur;
            c_cur = next;
        }
    }
    Some(q)
}

// ---------------------------------------------------------------------------
// Numeric root finding
// ---------------------------------------------------------------------------

/// All complex roots of `p` by Aberth-Ehrlich iteration with Newton
/// polishing. Intended for the low degrees that show up here; callers
/// cross-check against exact counts.
pub fn aberth_roots(p: &IntPoly) -> Vec<Complex64> {
    let deg = p.degree();
    if deg == 0 || p.is_zero() {
        return vec![];
    }
    let coeffs = p.to_f64s();
    let lead = coeffs[deg];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<f64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();

    let eval = |cs: &[f64], x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in cs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };

    // Cauchy bound on root modulus
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.abs())
            .fold(0.0f64, f64::max);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.354) / deg as f64;
            Complex64::from_polar(radius * 0.7, angle)
        })
        .collect();

    for _ in 0..200 {
        let mut done = true;
        let snapshot = roots.clone();
        for k in 0..deg {
            let x = snapshot[k];
            let px = eval(&monic, x);
            let dpx = eval(&deriv, x);
            if px.norm() == 0.0 {
                continue;
            }
            let newton = if dpx.norm() > 0.0 { px / dpx } else { px };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &other) in snapshot.iter().enumerate() {
                if j != k {
                    let diff = x - other;
                    if diff.norm() > 1e-300 {
                        s += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            let w = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            roots[k] = x - w;
            if w.norm() > 1e-13 * (1.0 + x.norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }

    // Newton polish against the exact coefficients
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let px = p.eval_complex(*r);
            let dpx = p.derivative().eval_complex(*r);
            if dpx.norm() == 0.0 {
                break;
            }
            *r -= px / dpx;
        }
        if r.im.abs() < 1e-10 {
            // snap near-real roots
            let real = Complex64::new(r.re, 0.0);
            if p.eval_complex(real).norm() <= p.eval_complex(*r).norm() * 4.0 + 1e-12 {
                *r = real;
            }
        }
    }
    roots.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn exact_division_and_cyclotomics() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_orders_for_plane() {
        // phi(k) <= 2: k in {1, 2, 3, 4, 6}
        assert_eq!(cyclotomic_orders(2), vec![1, 2, 3, 4, 6]);
    }

    #[test]
    fn squarefree_of_repeated_cat_poly() {
        // (x^2 - 3x + 1)^2
        let f = IntPoly::from_i64(&[1, -3, 1]);
        let sq = f.mul(&f);
        let dec = squarefree_decomposition(&sq);
        assert_eq!(dec.len(), 1);
        assert_eq!(dec[0].0, f.primitive());
        assert_eq!(dec[0].1, 2);
    }

    #[test]
    fn sturm_counts_quadratic() {
        // x^2 - 2 has one root in (0, 2], one in (-2, 0]
        let p = IntPoly::from_i64(&[-2, 0, 1]).to_rational();
        assert_eq!(sturm_count(&p, &rat(0), &rat(2)), 1);
        assert_eq!(sturm_count(&p, &rat(-2), &rat(0)), 1);
        assert_eq!(sturm_count(&p, &rat(-2), &rat(2)), 2);
        assert_eq!(sturm_count(&p, &rat(2), &rat(3)), 0);
    }

    #[test]
    fn trace_transform_salem_quartic() {
        // x^4 - x^3 - x^2 - x + 1 => q(z) = z^2 - z - 3
        let f = IntPoly::from_i64(&[1, -1, -1, -1, 1]);
        let q = trace_transform(&f).unwrap();
        assert_eq!(q, IntPoly::from_i64(&[-3, -1, 1]));
        // exactly one root of q in (-2, 2): one unit-circle pair
        assert_eq!(sturm_count(&q.to_rational(), &rat(-2), &rat(2)), 1);
    }

    #[test]
    fn trace_transform_cat_poly_has_no_circle_roots() {
        let f = IntPoly::from_i64(&[1, -3, 1]);
        let q = trace_transform(&f).unwrap();
        assert_eq!(q, IntPoly::from_i64(&[-3, 1]));
        assert_eq!(sturm_count(&q.to_rational(), &rat(-2), &rat(2)), 0);
    }

    #[test]
    fn aberth_finds_golden_ratio_roots() {
        let f = IntPoly::from_i64(&[1, -3, 1]); // roots (3 +- sqrt 5)/2
        let roots = aberth_roots(&f);
        assert_eq!(roots.len(), 2);
        let r0 = (3.0 - 5.0f64.sqrt()) / 2.0;
        let r1 = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!((roots[0].re - r0).abs() < 1e-12 && roots[0].im.abs() < 1e-12);
        assert!((roots[1].re - r1).abs() < 1e-12 && roots[1].im.abs() < 1e-12);
    }

    #[test]
    fn aberth_finds_imaginary_pair() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        let roots = aberth_roots(&f);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(r.re.abs() < 1e-12);
            assert!((r.im.abs() - 1.0).abs() < 1e-12);
        }
    }
}
