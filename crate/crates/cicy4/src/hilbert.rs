//! Hilbert functions of complete-intersection quotients.
//!
//! For a regular sequence of degrees (d_1,...,d_k) in N+1 variables, the
//! Koszul resolution gives the graded dimension of the quotient in degree n
//! as the alternating sum over subsets J of the degrees:
//!
//!   sum_J (-1)^|J| C(N + n - sum(J), N),   with C(m, N) = 0 for m < N.
//!
//! `verify_regular_sequence` certifies an actual sequence against this
//! prediction degree by degree using exact linear algebra.

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::RowSpace;
use crate::poly::{monomial_basis, HomogeneousPolynomial, Monomial};

/// Numerical profile of a complete intersection: the ambient projective
/// dimension N and the multiset of degrees of the regular sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulProfile {
    ambient_n: usize,
    degrees: Vec<u32>,
}

impl KoszulProfile {
    pub fn new(ambient_n: usize, mut degrees: Vec<u32>) -> Result<Self> {
        if ambient_n < 2 {
            return Err(Error::Validation(
                "ambient projective dimension must be at least 2".into(),
            ));
        }
        if degrees.len() > ambient_n {
            return Err(Error::Validation(format!(
                "{} degrees exceed the ambient dimension {}",
                degrees.len(),
                ambient_n
            )));
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::Validation("degrees must be positive".into()));
        }
        degrees.sort_unstable();
        Ok(KoszulProfile { ambient_n, degrees })
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Dimension of the complete intersection.
    pub fn dimension(&self) -> usize {
        self.ambient_n - self.degrees.len()
    }
}

/// Truncated binomial coefficient: C(m, n) with C(m, n) = 0 whenever m < n.
pub fn binomial(m: i64, n: u32) -> i64 {
    if m < n as i64 {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..n as i64 {
        r = r * (m - i) as i128 / (i as i128 + 1);
    }
    r as i64
}

/// dim (R/(s))_n for any regular sequence with the profile's degrees.
pub fn koszul_hilbert_function(profile: &KoszulProfile, n: i64) -> i64 {
    if n < 0 {
        return 0;
    }
    let nn = profile.ambient_n as u32;
    let k = profile.degrees.len();
    let mut total: i64 = 0;
    for mask in 0u32..(1 << k) {
        let mut deg_sum: i64 = 0;
        let mut parity = 0u32;
        for (j, &d) in profile.degrees.iter().enumerate() {
            if mask >> j & 1 == 1 {
                deg_sum += d as i64;
                parity += 1;
            }
        }
        let term = binomial(profile.ambient_n as i64 + n - deg_sum, nn);
        if parity % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    debug_assert!(total >= 0, "Koszul alternating sum went negative");
    total
}

/// The unique polynomial agreeing with the Hilbert function for all
/// n >= sum(degrees) - N, as ascending rational coefficients. Its value at 0
/// is chi(O) of the complete intersection.
pub fn hilbert_polynomial(profile: &KoszulProfile) -> Vec<BigRational> {
    let nn = profile.ambient_n;
    let k = profile.degrees.len();
    let mut total = vec![BigRational::zero(); nn + 1];
    for mask in 0u32..(1 << k) {
        let mut deg_sum: i64 = 0;
        let mut parity = 0u32;
        for (j, &d) in profile.degrees.iter().enumerate() {
            if mask >> j & 1 == 1 {
                deg_sum += d as i64;
                parity += 1;
            }
        }
        let term = binomial_polynomial(nn as i64 - deg_sum, nn);
        for (i, c) in term.into_iter().enumerate() {
            if parity % 2 == 0 {
                total[i] += c;
            } else {
                total[i] -= c;
            }
        }
    }
    while total.len() > 1 && total.last().map_or(false, |c| c.is_zero()) {
        total.pop();
    }
    total
}

/// Coefficients of the untruncated binomial C(t + c, n) = prod_{i=0}^{n-1}
/// (t + c - i) / n! as a polynomial in t.
fn binomial_polynomial(c: i64, n: usize) -> Vec<BigRational> {
    let mut poly = vec![BigRational::one()];
    for i in 0..n as i64 {
        // multiply by (t + c - i)
        let shift = BigRational::from_integer(BigInt::from(c - i));
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (j, a) in poly.iter().enumerate() {
            next[j] += a * &shift;
            next[j + 1] += a;
        }
        poly = next;
    }
    let mut factorial = BigRational::one();
    for i in 1..=n as i64 {
        factorial *= BigRational::from_integer(BigInt::from(i));
    }
    for a in poly.iter_mut() {
        *a /= &factorial;
    }
    poly
}

pub fn evaluate_polynomial(coeffs: &[BigRational], n: i64) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(n));
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

/// Brute-force graded dimension of R/(s_1,...,s_k) in degree n: dim R_n
/// minus the rank of the span of {m * s_j : deg(m s_j) = n}.
pub fn graded_quotient_dimension(generators: &[HomogeneousPolynomial], n: i64) -> Result<usize> {
    if n < 0 {
        return Ok(0);
    }
    let first = generators.first().ok_or_else(|| {
        Error::Validation("at least one generator is required".into())
    })?;
    let field = first.field().clone();
    let n_vars = first.n_vars();
    for g in generators {
        if g.field() != &field || g.n_vars() != n_vars {
            return Err(Error::RingMismatch);
        }
    }
    let basis = monomial_basis(n_vars, n as u32);
    let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut space = RowSpace::new(field.clone(), basis.len());
    for g in generators {
        if g.degree() as i64 > n || g.is_zero() {
            continue;
        }
        for m in monomial_basis(n_vars, (n - g.degree() as i64) as u32) {
            let row: Vec<(usize, _)> = g
                .terms()
                .map(|(mono, c)| (index[&mono.mul(&m)], c.clone()))
                .collect();
            space.insert_sparse(row);
        }
    }
    Ok(basis.len() - space.rank())
}

/// True iff the graded dimensions of R/(s) agree with the Koszul prediction
/// in every degree up to `up_to_degree`; false detects a non-regular
/// sequence at or below that degree.
pub fn verify_regular_sequence(
    generators: &[HomogeneousPolynomial],
    up_to_degree: i64,
) -> Result<bool> {
    let first = generators.first().ok_or_else(|| {
        Error::Validation("at least one generator is required".into())
    })?;
    let n_vars = first.n_vars();
    for g in generators {
        if g.field() != first.field() || g.n_vars() != n_vars {
            return Err(Error::RingMismatch);
        }
        if g.is_zero() {
            return Ok(false);
        }
    }
    let profile = KoszulProfile::new(
        n_vars - 1,
        generators.iter().map(|g| g.degree()).collect(),
    )?;
    for n in 0..=up_to_degree {
        let actual = graded_quotient_dimension(generators, n)? as i64;
        if actual != koszul_hilbert_function(&profile, n) {
            return Ok(false);
        }
    }
    Ok(true)
}
