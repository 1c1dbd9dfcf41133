//! Exact coefficient fields: the rationals, prime fields F_p, and simple
//! algebraic extensions F[z]/(m(z)).
//!
//! Every element is stored in a canonical form (reduced fractions with
//! positive denominator, residues in [0, p), extension coordinates of fixed
//! length), so structural equality is field equality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Largest prime modulus accepted; keeps products inside u64/u128 arithmetic.
pub const MAX_PRIME: u64 = 1 << 31;

/// Prime moduli below this bound use the delayed-reduction elimination path.
pub const FP_FAST_BOUND: u64 = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
    Extension(ExtensionField),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    pub base: Box<CoefficientField>,
    /// Monic minimal polynomial, coefficients over the base field in
    /// ascending degree; the leading 1 is stored explicitly.
    pub min_poly: Vec<FieldElement>,
    /// True when irreducibility was actually verified (degree <= 4 over the
    /// shipped bases); higher degrees are accepted on trust.
    pub irreducibility_verified: bool,
}

impl ExtensionField {
    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientField {
    kind: FieldKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Rational(BigRational),
    Residue(u64),
    /// Coordinates over the base field, length = degree of the minimal
    /// polynomial.
    Extension(Vec<FieldElement>),
}

impl CoefficientField {
    pub fn rationals() -> Self {
        CoefficientField {
            kind: FieldKind::Rationals,
        }
    }

    /// A prime field F_p. Primality is verified at construction.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoefficientField {
            kind: FieldKind::Prime(p),
        })
    }

    /// A simple extension base[z]/(min_poly). `min_poly` is given in
    /// ascending degree with elements of the base field and must be monic of
    /// degree >= 2. Irreducibility is verified for degree <= 4; larger
    /// degrees are accepted with `irreducibility_verified = false`.
    pub fn extension(base: CoefficientField, min_poly: Vec<FieldElement>) -> Result<Self> {
        let deg = min_poly.len().saturating_sub(1);
        if deg < 2 {
            return Err(Error::BadMinimalPolynomial(
                "degree must be at least 2".into(),
            ));
        }
        for c in &min_poly {
            if !base.contains(c) {
                return Err(Error::BadMinimalPolynomial(
                    "coefficient not in the base field".into(),
                ));
            }
        }
        if min_poly[deg] != base.one() {
            return Err(Error::BadMinimalPolynomial("must be monic".into()));
        }
        let verified = if deg <= 4 {
            if !is_irreducible(&base, &min_poly)? {
                return Err(Error::ReducibleMinPoly(format_univariate(
                    &base, &min_poly,
                )));
            }
            true
        } else {
            false
        };
        Ok(CoefficientField {
            kind: FieldKind::Extension(ExtensionField {
                base: Box::new(base),
                min_poly,
                irreducibility_verified: verified,
            }),
        })
    }

    /// Convenience constructor: Q[z]/(z^2 + 1).
    pub fn gaussian_rationals() -> Self {
        let q = CoefficientField::rationals();
        let mp = vec![q.from_i64(1), q.from_i64(0), q.from_i64(1)];
        CoefficientField::extension(q, mp).expect("z^2+1 is irreducible over Q")
    }

    /// Convenience constructor: Q[z]/(z^4 - z^2 + 1), the field generated by
    /// a primitive 12th root of unity.
    pub fn cyclotomic12() -> Self {
        let q = CoefficientField::rationals();
        let mp = vec![
            q.from_i64(1),
            q.from_i64(0),
            q.from_i64(-1),
            q.from_i64(0),
            q.from_i64(1),
        ];
        CoefficientField::extension(q, mp).expect("z^4-z^2+1 is irreducible over Q")
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            FieldKind::Rationals => 0,
            FieldKind::Prime(p) => *p,
            FieldKind::Extension(e) => e.base.characteristic(),
        }
    }

    /// Degree over the prime field / rationals (product over nested extensions).
    pub fn absolute_degree(&self) -> usize {
        match &self.kind {
            FieldKind::Rationals | FieldKind::Prime(_) => 1,
            FieldKind::Extension(e) => e.degree() * e.base.absolute_degree(),
        }
    }

    /// Shape check: does this element structurally belong to the field?
    pub fn contains(&self, a: &FieldElement) -> bool {
        match (&self.kind, a) {
            (FieldKind::Rationals, FieldElement::Rational(_)) => true,
            (FieldKind::Prime(p), FieldElement::Residue(r)) => r < p,
            (FieldKind::Extension(e), FieldElement::Extension(v)) => {
                v.len() == e.degree() && v.iter().all(|c| e.base.contains(c))
            }
            _ => false,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match &self.kind {
            FieldKind::Rationals => FieldElement::Rational(BigRational::zero()),
            FieldKind::Prime(_) => FieldElement::Residue(0),
            FieldKind::Extension(e) => {
                FieldElement::Extension(vec![e.base.zero(); e.degree()])
            }
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match &self.kind {
            FieldKind::Rationals => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldKind::Prime(p) => FieldElement::Residue(n.rem_euclid(*p as i64) as u64),
            FieldKind::Extension(e) => {
                let mut v = vec![e.base.zero(); e.degree()];
                v[0] = e.base.from_i64(n);
                FieldElement::Extension(v)
            }
        }
    }

    pub fn from_rational(&self, num: i64, den: i64) -> Result<FieldElement> {
        let d = self.from_i64(den);
        Ok(self.mul(&self.from_i64(num), &self.invert(&d)?))
    }

    /// The generator z of an extension field.
    pub fn generator(&self) -> Option<FieldElement> {
        match &self.kind {
            FieldKind::Extension(e) => {
                let mut v = vec![e.base.zero(); e.degree()];
                if e.degree() >= 2 {
                    v[1] = e.base.one();
                }
                Some(FieldElement::Extension(v))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Residue(r) => *r == 0,
            FieldElement::Extension(v) => v.iter().all(|c| self.base().is_zero(c)),
        }
    }

    fn base(&self) -> &CoefficientField {
        match &self.kind {
            FieldKind::Extension(e) => &e.base,
            _ => self,
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&self.kind, a, b) {
            (FieldKind::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x + y)
            }
            (FieldKind::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue(fp_add(*x, *y, *p))
            }
            (FieldKind::Extension(e), FieldElement::Extension(x), FieldElement::Extension(y)) => {
                FieldElement::Extension(
                    x.iter()
                        .zip(y.iter())
                        .map(|(u, v)| e.base.add(u, v))
                        .collect(),
                )
            }
            _ => panic!("field element shape mismatch in add"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (&self.kind, a) {
            (FieldKind::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(-x),
            (FieldKind::Prime(p), FieldElement::Residue(x)) => {
                FieldElement::Residue(if *x == 0 { 0 } else { p - x })
            }
            (FieldKind::Extension(e), FieldElement::Extension(x)) => {
                FieldElement::Extension(x.iter().map(|u| e.base.neg(u)).collect())
            }
            _ => panic!("field element shape mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&self.kind, a, b) {
            (FieldKind::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x * y)
            }
            (FieldKind::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue(fp_mul(*x, *y, *p))
            }
            (FieldKind::Extension(e), FieldElement::Extension(x), FieldElement::Extension(y)) => {
                FieldElement::Extension(ext_mul(e, x, y))
            }
            _ => panic!("field element shape mismatch in mul"),
        }
    }

    /// Multiplicative inverse. Fails on zero, and on zero divisors when the
    /// minimal polynomial of an extension was accepted unverified and is in
    /// fact reducible.
    pub fn invert(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::ZeroInversion);
        }
        match (&self.kind, a) {
            (FieldKind::Rationals, FieldElement::Rational(x)) => {
                Ok(FieldElement::Rational(x.recip()))
            }
            (FieldKind::Prime(p), FieldElement::Residue(x)) => {
                Ok(FieldElement::Residue(fp_inv(*x, *p)))
            }
            (FieldKind::Extension(e), FieldElement::Extension(x)) => ext_invert(e, x),
            _ => panic!("field element shape mismatch in invert"),
        }
    }

    pub fn pow(&self, a: &FieldElement, mut n: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        result
    }

    /// Searches for z with z^k = -1.
    ///
    /// Prime fields are searched exhaustively, so absence is decisive there.
    /// Over the rationals the only candidate is -1 (odd k). Over extensions
    /// the search covers -1 and +/- powers of the generator, which is
    /// complete for the cyclotomic-style extensions this crate ships;
    /// `None` for other extensions means "not found", not a proof of absence.
    pub fn root_of_minus_one(&self, k: u32) -> Option<FieldElement> {
        assert!(k >= 1, "k must be positive");
        let minus_one = self.from_i64(-1);
        match &self.kind {
            FieldKind::Prime(p) => {
                (0..*p).map(FieldElement::Residue).find(|z| self.pow(z, k as u64) == minus_one)
            }
            FieldKind::Rationals => {
                if k % 2 == 1 {
                    Some(minus_one)
                } else {
                    None
                }
            }
            FieldKind::Extension(_) => {
                let z = self.generator().unwrap();
                let mut candidates = vec![minus_one.clone()];
                let mut power = z.clone();
                for _ in 0..2 * self.absolute_degree() {
                    candidates.push(power.clone());
                    candidates.push(self.neg(&power));
                    power = self.mul(&power, &z);
                }
                candidates
                    .into_iter()
                    .find(|c| self.pow(c, k as u64) == minus_one)
            }
        }
    }

    pub fn format_element(&self, a: &FieldElement) -> String {
        match a {
            FieldElement::Rational(r) => format_rational(r),
            FieldElement::Residue(r) => r.to_string(),
            FieldElement::Extension(v) => {
                let base = self.base();
                let mut parts = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    if base.is_zero(c) {
                        continue;
                    }
                    let cs = base.format_element(c);
                    parts.push(match i {
                        0 => cs,
                        1 if cs == "1" => "z".into(),
                        1 => format!("{cs}*z"),
                        _ if cs == "1" => format!("z^{i}"),
                        _ => format!("{cs}*z^{i}"),
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "Fp:{p}"),
            FieldKind::Extension(e) => {
                write!(f, "{}[z]/({})", e.base, format_univariate(&e.base, &e.min_poly))
            }
        }
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn format_univariate(base: &CoefficientField, poly: &[FieldElement]) -> String {
    let mut parts = Vec::new();
    for (i, c) in poly.iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let cs = base.format_element(c);
        parts.push(match i {
            0 => cs,
            1 if cs == "1" => "z".into(),
            1 => format!("{cs}*z"),
            _ if cs == "1" => format!("z^{i}"),
            _ => format!("{cs}*z^{i}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// prime field scalar arithmetic

#[inline]
pub fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    if p < FP_FAST_BOUND {
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

pub fn fp_pow(mut a: u64, mut n: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while n > 0 {
        if n & 1 == 1 {
            r = fp_mul(r, a, p);
        }
        a = fp_mul(a, a, p);
        n >>= 1;
    }
    r
}

pub fn fp_inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverting zero mod {p}");
    fp_pow(a % p, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime >= `min` congruent to 1 modulo every 2k in `ks`, so that
/// every requested root of -1 exists in F_p.
pub fn prime_with_roots(ks: &[u32], min: u64) -> u64 {
    let modulus: u64 = ks.iter().fold(1u64, |m, &k| lcm(m, 2 * k as u64));
    let mut p = min.max(3);
    loop {
        if is_prime(p) && (p - 1) % modulus == 0 {
            return p;
        }
        p += 1;
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Default working prime for kernel computations; overridable through the
/// CICY4_PRIME environment variable.
pub fn default_prime() -> u64 {
    if let Ok(s) = std::env::var("CICY4_PRIME") {
        if let Ok(p) = s.parse::<u64>() {
            if is_prime(p) && p < MAX_PRIME {
                return p;
            }
        }
    }
    10007
}

// ---------------------------------------------------------------------------
// extension field arithmetic

fn ext_mul(e: &ExtensionField, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
    let d = e.degree();
    let base = &e.base;
    let mut prod = vec![base.zero(); 2 * d - 1];
    for (i, xi) in x.iter().enumerate() {
        if base.is_zero(xi) {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if base.is_zero(yj) {
                continue;
            }
            let t = base.mul(xi, yj);
            prod[i + j] = base.add(&prod[i + j], &t);
        }
    }
    ext_reduce(e, &mut prod);
    prod.truncate(d);
    prod
}

/// Reduces a coefficient vector modulo the monic minimal polynomial in place.
fn ext_reduce(e: &ExtensionField, v: &mut Vec<FieldElement>) {
    let d = e.degree();
    let base = &e.base;
    let mut k = v.len();
    while k > d {
        k -= 1;
        let lead = v[k].clone();
        if !base.is_zero(&lead) {
            for i in 0..d {
                let t = base.mul(&lead, &e.min_poly[i]);
                v[k - d + i] = base.sub(&v[k - d + i], &t);
            }
            v[k] = base.zero();
        }
    }
    v.truncate(d);
    while v.len() < d {
        v.push(base.zero());
    }
}

/// Extended Euclid in base[z] against the minimal polynomial. Detects zero
/// divisors when the modulus is reducible.
fn ext_invert(e: &ExtensionField, x: &[FieldElement]) -> Result<FieldElement> {
    let base = &e.base;
    // r0 = min_poly, r1 = x ; maintain t0, t1 with t*x = r (mod min_poly)
    let mut r0: Vec<FieldElement> = e.min_poly.clone();
    let mut r1: Vec<FieldElement> = x.to_vec();
    trim(base, &mut r0);
    trim(base, &mut r1);
    let mut t0: Vec<FieldElement> = vec![];
    let mut t1: Vec<FieldElement> = vec![base.one()];
    while !r1.is_empty() {
        let (q, r) = poly_divmod(base, &r0, &r1)?;
        let tq = poly_mul(base, &q, &t1);
        let tnew = poly_sub(base, &t0, &tq);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = tnew;
    }
    if r0.len() != 1 {
        // gcd(x, min_poly) is non-constant: x is a zero divisor.
        return Err(Error::NonInvertible);
    }
    let scale = base.invert(&r0[0])?;
    let mut inv: Vec<FieldElement> = t0.iter().map(|c| base.mul(c, &scale)).collect();
    ext_reduce(e, &mut inv);
    Ok(FieldElement::Extension(inv))
}

fn trim(base: &CoefficientField, v: &mut Vec<FieldElement>) {
    while v.last().map_or(false, |c| base.is_zero(c)) {
        v.pop();
    }
}

fn poly_mul(base: &CoefficientField, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = base.mul(x, y);
            out[i + j] = base.add(&out[i + j], &t);
        }
    }
    let mut out = out;
    trim(base, &mut out);
    out
}

fn poly_sub(base: &CoefficientField, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![base.zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = base.sub(&out[i], y);
    }
    trim(base, &mut out);
    out
}

fn poly_divmod(
    base: &CoefficientField,
    num: &[FieldElement],
    den: &[FieldElement],
) -> Result<(Vec<FieldElement>, Vec<FieldElement>)> {
    assert!(!den.is_empty(), "division by the zero polynomial");
    let dlead = base.invert(&den[den.len() - 1])?;
    let mut rem: Vec<FieldElement> = num.to_vec();
    if rem.len() < den.len() {
        return Ok((vec![], rem));
    }
    let qlen = rem.len() - den.len() + 1;
    let mut quot = vec![base.zero(); qlen];
    for k in (0..qlen).rev() {
        let idx = k + den.len() - 1;
        let c = base.mul(&rem[idx], &dlead);
        if base.is_zero(&c) {
            continue;
        }
        quot[k] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = base.mul(&c, dj);
            rem[k + j] = base.sub(&rem[k + j], &t);
        }
    }
    trim(base, &mut rem);
    trim(base, &mut quot);
    Ok((quot, rem))
}

// ---------------------------------------------------------------------------
// irreducibility checks (degree <= 4)

fn is_irreducible(base: &CoefficientField, min_poly: &[FieldElement]) -> Result<bool> {
    let deg = min_poly.len() - 1;
    match base.kind() {
        FieldKind::Prime(p) => Ok(rabin_irreducible(base, min_poly, *p)),
        FieldKind::Rationals => rational_irreducible(min_poly, deg),
        FieldKind::Extension(_) => {
            // Nested bases are accepted on trust; a full factorization engine
            // over towers is out of scope.
            Ok(true)
        }
    }
}

/// Rabin's test: f of degree n over F_p is irreducible iff z^(p^n) = z mod f
/// and gcd(z^(p^(n/q)) - z, f) = 1 for every prime q dividing n.
fn rabin_irreducible(base: &CoefficientField, f: &[FieldElement], p: u64) -> bool {
    let n = f.len() - 1;
    let prime_divisors: Vec<usize> = match n {
        2 => vec![1],
        3 => vec![1],
        4 => vec![2, 1],
        _ => (1..n).collect(),
    };
    for &k in &prime_divisors {
        // n/q for q prime divisor: for n=2,3 that is 1; for n=4 it is 2 and 1
        let h = frobenius_power_minus_z(base, f, p, k);
        if !poly_gcd_is_one(base, f, &h) {
            return false;
        }
    }
    let h = frobenius_power_minus_z(base, f, p, n);
    h.is_empty()
}

/// Computes z^(p^k) - z modulo f.
fn frobenius_power_minus_z(
    base: &CoefficientField,
    f: &[FieldElement],
    p: u64,
    k: usize,
) -> Vec<FieldElement> {
    // z^(p^k) mod f by iterated exponentiation
    let mut acc = vec![base.zero(), base.one()]; // z
    for _ in 0..k {
        acc = poly_powmod(base, &acc, p, f);
    }
    let z = vec![base.zero(), base.one()];
    poly_sub(base, &acc, &z)
}

fn poly_powmod(
    base: &CoefficientField,
    a: &[FieldElement],
    mut n: u64,
    modulus: &[FieldElement],
) -> Vec<FieldElement> {
    let mut result = vec![base.one()];
    let mut b = a.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            let prod = poly_mul(base, &result, &b);
            result = poly_divmod(base, &prod, modulus).expect("monic modulus").1;
        }
        let sq = poly_mul(base, &b, &b);
        b = poly_divmod(base, &sq, modulus).expect("monic modulus").1;
        n >>= 1;
    }
    result
}

fn poly_gcd_is_one(base: &CoefficientField, a: &[FieldElement], b: &[FieldElement]) -> bool {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(base, &mut r0);
    trim(base, &mut r1);
    while !r1.is_empty() {
        let (_, r) = poly_divmod(base, &r0, &r1).expect("nonzero divisor");
        r0 = r1;
        r1 = r;
    }
    r0.len() == 1
}

/// Irreducibility of a monic rational polynomial of degree <= 4: rational
/// root search, plus a quadratic-factor search for quartics. The polynomial
/// is first rescaled to a monic integer polynomial.
fn rational_irreducible(min_poly: &[FieldElement], deg: usize) -> Result<bool> {
    let coeffs: Vec<BigRational> = min_poly
        .iter()
        .map(|c| match c {
            FieldElement::Rational(r) => r.clone(),
            _ => unreachable!("rational base"),
        })
        .collect();
    // substitute z = y / k with k = lcm of denominators: y^n + a_{n-1} k y^{n-1} + ...
    let mut k = BigInt::one();
    for c in &coeffs {
        k = lcm_big(&k, c.denom());
    }
    let mut int_coeffs: Vec<BigInt> = Vec::with_capacity(coeffs.len());
    let mut kpow = BigInt::one();
    for i in (0..coeffs.len()).rev() {
        // coefficient of y^i is a_i * k^(n-i)
        let scaled = &coeffs[i] * BigRational::from_integer(kpow.clone());
        debug_assert!(scaled.denom().is_one());
        int_coeffs.push(scaled.numer().clone());
        kpow *= &k;
    }
    int_coeffs.reverse(); // ascending in y
    if int_coeffs[0].is_zero() {
        return Ok(false); // root at zero
    }
    // rational root theorem: monic, so candidate roots are integer divisors
    // of the constant term
    for d in divisors(&int_coeffs[0].abs()) {
        for root in [d.clone(), -d] {
            if eval_int_poly(&int_coeffs, &root).is_zero() {
                return Ok(false);
            }
        }
    }
    if deg <= 3 {
        return Ok(true);
    }
    // quartic: search monic integer quadratic factors y^2 + a y + b
    let s = int_coeffs[0].clone();
    let p3 = int_coeffs[3].clone();
    let q2 = int_coeffs[2].clone();
    let r1 = int_coeffs[1].clone();
    for b in divisors(&s.abs()) {
        for b in [b.clone(), -b] {
            if b.is_zero() {
                continue;
            }
            let d = &s / &b;
            // a satisfies a^2 - p a + (b + d - q) ... coefficient matching:
            //   p = a + c, q = b + d + a c, r = a d + b c  with c = p - a
            let cst = &q2 - &b - &d;
            // a(p - a) = q - b - d  =>  a^2 - p a + cst = 0
            let disc = &p3 * &p3 - BigInt::from(4) * &cst;
            if disc.sign() == num::bigint::Sign::Minus {
                continue;
            }
            let sq = disc.sqrt();
            if &sq * &sq != disc {
                continue;
            }
            for a in [(&p3 + &sq) / 2, (&p3 - &sq) / 2] {
                if &a * &a - &p3 * &a + &cst != BigInt::zero() {
                    continue; // not an exact integer root
                }
                let c = &p3 - &a;
                if &a * &d + &b * &c == r1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

fn eval_int_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    let g = gcd_big(a.clone(), b.clone());
    a / &g * b
}

fn gcd_big(a: BigInt, b: BigInt) -> BigInt {
    if b.is_zero() {
        a.abs()
    } else {
        let r = &a % &b;
        gcd_big(b, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f13() -> CoefficientField {
        CoefficientField::prime(13).unwrap()
    }

    #[test]
    fn invert_identity_everywhere() {
        for f in [
            CoefficientField::rationals(),
            f13(),
            CoefficientField::gaussian_rationals(),
            CoefficientField::cyclotomic12(),
        ] {
            assert_eq!(f.invert(&f.one()).unwrap(), f.one());
        }
    }

    #[test]
    fn invert_z_in_gaussian_field() {
        let f = CoefficientField::gaussian_rationals();
        let z = f.generator().unwrap();
        let inv = f.invert(&z).unwrap();
        assert_eq!(inv, f.neg(&z)); // z * (-z) = -z^2 = 1
        assert_eq!(f.mul(&z, &inv), f.one());
    }

    #[test]
    fn invert_two_mod_13() {
        let f = f13();
        // brute-force oracle over the residues
        let expected = (1..13)
            .find(|&r| (2 * r) % 13 == 1)
            .map(FieldElement::Residue)
            .unwrap();
        assert_eq!(expected, FieldElement::Residue(7));
        assert_eq!(f.invert(&f.from_i64(2)).unwrap(), expected);
    }

    #[test]
    fn invert_zero_fails() {
        let f = f13();
        assert_eq!(f.invert(&f.zero()), Err(Error::ZeroInversion));
    }

    #[test]
    fn zero_divisor_in_reducible_modulus_detected() {
        // build Q[z]/(z^2 - 1) bypassing the irreducibility gate
        let q = CoefficientField::rationals();
        let ext = ExtensionField {
            base: Box::new(q.clone()),
            min_poly: vec![q.from_i64(-1), q.from_i64(0), q.from_i64(1)],
            irreducibility_verified: false,
        };
        let f = CoefficientField {
            kind: FieldKind::Extension(ext),
        };
        // z - 1 is a zero divisor: (z-1)(z+1) = z^2 - 1 = 0
        let a = FieldElement::Extension(vec![q.from_i64(-1), q.from_i64(1)]);
        assert_eq!(f.invert(&a), Err(Error::NonInvertible));
    }

    #[test]
    fn reducible_min_poly_rejected() {
        let q = CoefficientField::rationals();
        let mp = vec![q.from_i64(-1), q.from_i64(0), q.from_i64(1)]; // z^2 - 1
        assert!(matches!(
            CoefficientField::extension(q, mp),
            Err(Error::ReducibleMinPoly(_))
        ));
        let f7 = CoefficientField::prime(7).unwrap();
        let mp = vec![f7.from_i64(2), f7.from_i64(0), f7.from_i64(1)]; // z^2+2 = (z-...)? roots: z^2 = 5 mod 7 -> none
        assert!(CoefficientField::extension(f7.clone(), mp).is_ok());
        let mp = vec![f7.from_i64(3), f7.from_i64(0), f7.from_i64(1)]; // z^2+3: z=2 -> 4+3=7=0, reducible
        assert!(matches!(
            CoefficientField::extension(f7, mp),
            Err(Error::ReducibleMinPoly(_))
        ));
    }

    #[test]
    fn cyclotomic12_is_irreducible_and_verified() {
        let f = CoefficientField::cyclotomic12();
        match f.kind() {
            FieldKind::Extension(e) => assert!(e.irreducibility_verified),
            _ => panic!(),
        }
    }

    #[test]
    fn root_of_minus_one_examples() {
        let f = f13();
        assert_eq!(f.root_of_minus_one(1), Some(FieldElement::Residue(12)));
        // exhaustive search oracle: 2^6 = 64 = 12 = -1 mod 13
        assert_eq!(f.root_of_minus_one(6), Some(FieldElement::Residue(2)));
        let f7 = CoefficientField::prime(7).unwrap();
        assert_eq!(f7.root_of_minus_one(6), None);
    }

    #[test]
    fn root_of_minus_one_in_extensions() {
        let gi = CoefficientField::gaussian_rationals();
        let z = gi.generator().unwrap();
        assert_eq!(gi.root_of_minus_one(2), Some(z.clone()));
        let r6 = gi.root_of_minus_one(6).unwrap();
        assert_eq!(gi.pow(&r6, 6), gi.from_i64(-1));
        let c12 = CoefficientField::cyclotomic12();
        let r = c12.root_of_minus_one(6).unwrap();
        assert_eq!(c12.pow(&r, 6), c12.from_i64(-1));
        let r2 = c12.root_of_minus_one(2).unwrap();
        assert_eq!(c12.pow(&r2, 2), c12.from_i64(-1));
        // no primitive 24th root of unity in Q(zeta_12)
        assert_eq!(c12.root_of_minus_one(12), None);
    }

    /// Existence criterion for z^k = -1 in F_p: 2*gcd(k, p-1) divides p-1
    /// (p odd; p = 2 always has 1 = -1). Checked exhaustively for p < 100,
    /// k <= 12 against the search itself.
    #[test]
    fn root_of_minus_one_existence_criterion() {
        for p in (2u64..100).filter(|&p| is_prime(p)) {
            let f = CoefficientField::prime(p).unwrap();
            for k in 1u32..=12 {
                let found = f.root_of_minus_one(k).is_some();
                let predicted = if p == 2 {
                    true
                } else {
                    (p - 1) % (2 * gcd(k as u64, p - 1)) == 0
                };
                assert_eq!(found, predicted, "p={p}, k={k}");
            }
        }
    }

    #[test]
    fn prime_with_roots_selects_13_and_10009() {
        assert_eq!(prime_with_roots(&[2, 6], 13), 13);
        assert_eq!(prime_with_roots(&[2, 6], 10007), 10009);
        assert_eq!(prime_with_roots(&[], 10007), 10007);
    }

    #[test]
    fn prime_constructor_validates() {
        assert!(CoefficientField::prime(13).is_ok());
        assert_eq!(CoefficientField::prime(15), Err(Error::NotPrime(15)));
    }

    fn arb_element(field: CoefficientField) -> impl Strategy<Value = (CoefficientField, FieldElement)> {
        (any::<i64>(), 1i64..50).prop_map(move |(n, d)| {
            let num = field.from_i64(n % 1000);
            let den = field.from_i64(d);
            let e = field.mul(&num, &field.invert(&den).unwrap());
            (field.clone(), e)
        })
    }

    proptest! {
        #[test]
        fn field_axioms_rationals((f, a) in arb_element(CoefficientField::rationals()),
                                  bn in -1000i64..1000, cn in -1000i64..1000) {
            let b = f.from_i64(bn);
            let c = f.from_i64(cn);
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)),
                            f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !f.is_zero(&a) {
                prop_assert_eq!(f.mul(&a, &f.invert(&a).unwrap()), f.one());
            }
        }

        #[test]
        fn field_axioms_prime(an in 0u64..13, bn in 0u64..13, cn in 0u64..13) {
            let f = f13();
            let (a, b, c) = (FieldElement::Residue(an), FieldElement::Residue(bn), FieldElement::Residue(cn));
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !f.is_zero(&a) {
                prop_assert_eq!(f.mul(&a, &f.invert(&a).unwrap()), f.one());
            }
        }

        #[test]
        fn field_axioms_cyclotomic(c0 in -9i64..9, c1 in -9i64..9, c2 in -9i64..9, c3 in -9i64..9,
                                   d0 in -9i64..9, d1 in -9i64..9) {
            let f = CoefficientField::cyclotomic12();
            let z = f.generator().unwrap();
            let mk = |v: &[i64]| {
                let mut acc = f.zero();
                for (i, &c) in v.iter().enumerate() {
                    acc = f.add(&acc, &f.mul(&f.from_i64(c), &f.pow(&z, i as u64)));
                }
                acc
            };
            let a = mk(&[c0, c1, c2, c3]);
            let b = mk(&[d0, d1]);
            let c = mk(&[d1, c2]);
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !f.is_zero(&a) {
                prop_assert_eq!(f.mul(&a, &f.invert(&a).unwrap()), f.one());
            }
        }

        /// Reduction modulo the minimal polynomial is idempotent: elements
        /// built from high generator powers are already canonical.
        #[test]
        fn ext_reduction_idempotent(e in 0u64..40, c in -20i64..20) {
            let f = CoefficientField::cyclotomic12();
            let z = f.generator().unwrap();
            let a = f.mul(&f.from_i64(c), &f.pow(&z, e));
            match &a {
                FieldElement::Extension(v) => prop_assert_eq!(v.len(), 4),
                _ => prop_assert!(false),
            }
            // multiplying by one re-runs the reduction path; must be a no-op
            prop_assert_eq!(f.mul(&a, &f.one()), a);
        }
    }
}
