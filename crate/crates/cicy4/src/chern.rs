//! Truncated intersection-ring calculus on a complete-intersection surface.
//!
//! Everything happens in Q[h]/(h^3) with one extra datum, the degree of the
//! surface fundamental class: the integral of h^2 over S is the product of
//! the surface degrees. Total Chern classes of sums of line bundles, Whitney
//! quotients, Todd classes and Riemann-Roch integrals are all evaluated as
//! exact rational arithmetic on (a0, a1, a2) triples.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hilbert::{evaluate_polynomial, hilbert_polynomial, KoszulProfile};

/// Element a0 + a1 h + a2 h^2 of the intersection ring truncated at h^3,
/// together with the degree of the surface class (the integral of h^2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernElement {
    pub a0: BigRational,
    pub a1: BigRational,
    pub a2: BigRational,
    pub surface_degree: i64,
}

impl ChernElement {
    pub fn new_int(a0: i64, a1: i64, a2: i64, surface_degree: i64) -> Self {
        ChernElement {
            a0: rat(a0),
            a1: rat(a1),
            a2: rat(a2),
            surface_degree,
        }
    }

    pub fn one(surface_degree: i64) -> Self {
        ChernElement::new_int(1, 0, 0, surface_degree)
    }

    pub fn multiply(&self, other: &ChernElement) -> ChernElement {
        assert_eq!(
            self.surface_degree, other.surface_degree,
            "mixed surface degrees in intersection-ring product"
        );
        ChernElement {
            a0: &self.a0 * &other.a0,
            a1: &self.a0 * &other.a1 + &self.a1 * &other.a0,
            a2: &self.a0 * &other.a2 + &self.a1 * &other.a1 + &self.a2 * &other.a0,
            surface_degree: self.surface_degree,
        }
    }

    /// Series inverse, defined when a0 = 1:
    /// (1 + a h + b h^2)^{-1} = 1 - a h + (a^2 - b) h^2.
    pub fn inverse(&self) -> Result<ChernElement> {
        if !self.a0.is_one() {
            return Err(Error::NonUnitLeadingTerm);
        }
        Ok(ChernElement {
            a0: BigRational::one(),
            a1: -self.a1.clone(),
            a2: &self.a1 * &self.a1 - &self.a2,
            surface_degree: self.surface_degree,
        })
    }

    /// Integral over the surface: the h^2 coefficient times the degree.
    pub fn integrate(&self) -> BigRational {
        &self.a2 * BigRational::from_integer(BigInt::from(self.surface_degree))
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn as_i64(r: &BigRational) -> Option<i64> {
    if r.denom().is_one() {
        // invariants here stay far below i64 range
        r.numer().to_string().parse().ok()
    } else {
        None
    }
}

/// Degree data of a complete-intersection surface in a complete-intersection
/// Calabi-Yau 4-fold: X in P^N is cut by N-4 equations of degrees e_i with
/// sum(e) = N+1, and S by N-2 equations of degrees d_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDegrees {
    ambient_n: usize,
    cy_degrees: Vec<u32>,
    surface_degrees: Vec<u32>,
}

impl SurfaceDegrees {
    pub fn new(ambient_n: usize, cy_degrees: Vec<u32>, surface_degrees: Vec<u32>) -> Result<Self> {
        if ambient_n < 5 {
            return Err(Error::Validation(
                "a Calabi-Yau 4-fold needs ambient dimension at least 5".into(),
            ));
        }
        if cy_degrees.len() != ambient_n - 4 {
            return Err(Error::Validation(format!(
                "expected {} Calabi-Yau degrees, got {}",
                ambient_n - 4,
                cy_degrees.len()
            )));
        }
        if surface_degrees.len() != ambient_n - 2 {
            return Err(Error::Validation(format!(
                "expected {} surface degrees, got {}",
                ambient_n - 2,
                surface_degrees.len()
            )));
        }
        if cy_degrees.iter().chain(surface_degrees.iter()).any(|&d| d == 0) {
            return Err(Error::Validation("degrees must be positive".into()));
        }
        let sum: u32 = cy_degrees.iter().sum();
        if sum as usize != ambient_n + 1 {
            return Err(Error::Validation(format!(
                "Calabi-Yau degree sum {} must equal N+1 = {}",
                sum,
                ambient_n + 1
            )));
        }
        Ok(SurfaceDegrees {
            ambient_n,
            cy_degrees,
            surface_degrees,
        })
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn cy_degrees(&self) -> &[u32] {
        &self.cy_degrees
    }

    pub fn surface_degrees(&self) -> &[u32] {
        &self.surface_degrees
    }

    /// The integral of h^2 over S: the product of the surface degrees.
    pub fn surface_class_degree(&self) -> i64 {
        self.surface_degrees.iter().map(|&d| d as i64).product()
    }

    pub fn surface_profile(&self) -> KoszulProfile {
        KoszulProfile::new(self.ambient_n, self.surface_degrees.clone())
            .expect("validated degrees")
    }

    /// Canonical class multiplier: K_S = (sum d_j - N - 1) h.
    pub fn canonical_multiple(&self) -> i64 {
        self.surface_degrees.iter().map(|&d| d as i64).sum::<i64>() - self.ambient_n as i64 - 1
    }
}

/// Total Chern class of a direct sum of line bundles O(d): prod (1 + d h).
pub fn total_chern_sum_of_lines(degrees: &[u32], surface_degree: i64) -> ChernElement {
    let mut acc = ChernElement::one(surface_degree);
    for &d in degrees {
        let line = ChernElement::new_int(1, d as i64, 0, surface_degree);
        acc = acc.multiply(&line);
    }
    acc
}

/// Whitney quotient: total Chern class divided by the class of a sub- or
/// quotient bundle with unit leading term.
pub fn chern_quotient(c_total: &ChernElement, c_sub_or_quot: &ChernElement) -> Result<ChernElement> {
    Ok(c_total.multiply(&c_sub_or_quot.inverse()?))
}

/// c(N_{S/X}) = prod(1 + d_j h) / prod(1 + e_i h) restricted to S.
pub fn normal_bundle_chern(cfg: &SurfaceDegrees) -> ChernElement {
    let deg = cfg.surface_class_degree();
    let num = total_chern_sum_of_lines(&cfg.surface_degrees, deg);
    let den = total_chern_sum_of_lines(&cfg.cy_degrees, deg);
    chern_quotient(&num, &den).expect("unit leading term")
}

/// c(T_S) = (1+h)^{N+1} / prod(1 + d_j h).
pub fn tangent_chern(cfg: &SurfaceDegrees) -> ChernElement {
    let deg = cfg.surface_class_degree();
    let ones = vec![1u32; cfg.ambient_n + 1];
    let num = total_chern_sum_of_lines(&ones, deg);
    let den = total_chern_sum_of_lines(&cfg.surface_degrees, deg);
    chern_quotient(&num, &den).expect("unit leading term")
}

/// Self-intersection of the surface class: the integral of c_2(N_{S/X}).
pub fn gamma_squared(cfg: &SurfaceDegrees) -> i64 {
    let c = normal_bundle_chern(cfg);
    as_i64(&c.integrate()).expect("gamma^2 must be an integer for integral degrees")
}

/// chi(O_S) by Noether's formula (K^2 + c_2(S)) / 12.
pub fn chi_structure_sheaf(cfg: &SurfaceDegrees) -> Result<i64> {
    let k = cfg.canonical_multiple();
    let k_squared = k * k * cfg.surface_class_degree();
    let c2 = as_i64(&tangent_chern(cfg).integrate())
        .ok_or(Error::NonIntegerChi)?;
    let chi12 = k_squared + c2;
    if chi12 % 12 != 0 {
        return Err(Error::NonIntegerChi);
    }
    Ok(chi12 / 12)
}

/// chi(O_S) through the Koszul Hilbert polynomial evaluated at 0; the
/// independent second route used by consistency checks.
pub fn chi_structure_sheaf_hilbert(cfg: &SurfaceDegrees) -> Result<i64> {
    let poly = hilbert_polynomial(&cfg.surface_profile());
    let v = evaluate_polynomial(&poly, 0);
    as_i64(&v).ok_or(Error::NonIntegerChi)
}

/// chi(N_{S/X}) = 2 chi(O_S) - gamma^2; cross-checked against the direct
/// Riemann-Roch integral of ch(N) td(S).
pub fn chi_normal_bundle(cfg: &SurfaceDegrees) -> Result<i64> {
    let shortcut = 2 * chi_structure_sheaf(cfg)? - gamma_squared(cfg);
    let direct = chi_normal_bundle_hrr(cfg)?;
    if shortcut != direct {
        return Err(Error::ConsistencyFailure(format!(
            "chi(N) mismatch: 2chi - gamma^2 = {shortcut}, HRR integral = {direct}"
        )));
    }
    Ok(shortcut)
}

/// Direct Hirzebruch-Riemann-Roch: chi(N) = integral of ch(N) td(S).
pub fn chi_normal_bundle_hrr(cfg: &SurfaceDegrees) -> Result<i64> {
    let deg = cfg.surface_class_degree();
    let cn = normal_bundle_chern(cfg);
    // ch of a rank-2 bundle: 2 + c1 h + (c1^2 - 2 c2)/2 h^2
    let ch = ChernElement {
        a0: rat(2),
        a1: cn.a1.clone(),
        a2: (&cn.a1 * &cn.a1 - rat(2) * &cn.a2) / rat(2),
        surface_degree: deg,
    };
    let ct = tangent_chern(cfg);
    // td(S) = 1 + c1(T)/2 + (c1(T)^2 + c2(T))/12
    let td = ChernElement {
        a0: rat(1),
        a1: &ct.a1 / rat(2),
        a2: (&ct.a1 * &ct.a1 + &ct.a2) / rat(12),
        surface_degree: deg,
    };
    let total = ch.multiply(&td).integrate();
    as_i64(&total).ok_or_else(|| {
        Error::ConsistencyFailure("HRR integral for chi(N) is not an integer".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sextic(d: &[u32]) -> SurfaceDegrees {
        SurfaceDegrees::new(5, vec![6], d.to_vec()).unwrap()
    }

    #[test]
    fn chern_of_line_sums() {
        assert_eq!(
            total_chern_sum_of_lines(&[], 1),
            ChernElement::new_int(1, 0, 0, 1)
        );
        assert_eq!(
            total_chern_sum_of_lines(&[1, 1, 1], 1),
            ChernElement::new_int(1, 3, 3, 1)
        );
        // (1+2h)(1+3h)^2 = 1 + 8h + 21h^2
        assert_eq!(
            total_chern_sum_of_lines(&[2, 3, 3], 18),
            ChernElement::new_int(1, 8, 21, 18)
        );
    }

    #[test]
    fn quotient_examples() {
        let id = ChernElement::new_int(1, 0, 0, 1);
        let a = ChernElement::new_int(1, 3, 3, 1);
        assert_eq!(chern_quotient(&a, &id).unwrap(), a);
        // plane in a sextic: (1+3h+3h^2)/(1+6h) = 1 - 3h + 21h^2
        let six = ChernElement::new_int(1, 6, 0, 1);
        assert_eq!(
            chern_quotient(&a, &six).unwrap(),
            ChernElement::new_int(1, -3, 21, 1)
        );
        // the (3,3,3) case: (1+9h+27h^2)/(1+6h) = 1 + 3h + 9h^2
        let b = ChernElement::new_int(1, 9, 27, 27);
        let six = ChernElement::new_int(1, 6, 0, 27);
        assert_eq!(
            chern_quotient(&b, &six).unwrap(),
            ChernElement::new_int(1, 3, 9, 27)
        );
        // non-unit divisor rejected
        let bad = ChernElement::new_int(2, 1, 0, 1);
        assert_eq!(chern_quotient(&a, &bad), Err(Error::NonUnitLeadingTerm));
    }

    #[test]
    fn gamma_squared_examples() {
        assert_eq!(gamma_squared(&sextic(&[1, 1, 1])), 21);
        assert_eq!(gamma_squared(&sextic(&[2, 2, 3])), 120);
        assert_eq!(gamma_squared(&sextic(&[3, 3, 3])), 243);
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_structure_sheaf(&sextic(&[1, 1, 1])).unwrap(), 1);
        assert_eq!(chi_structure_sheaf(&sextic(&[1, 2, 3])).unwrap(), 2);
        assert_eq!(chi_structure_sheaf(&sextic(&[2, 2, 3])).unwrap(), 7);
        // Noether path components for (2,2,3): K^2 = 12, c2 = 72
        let cfg = sextic(&[2, 2, 3]);
        assert_eq!(cfg.canonical_multiple().pow(2) * cfg.surface_class_degree(), 12);
        assert_eq!(as_i64(&tangent_chern(&cfg).integrate()), Some(72));
    }

    #[test]
    fn chi_normal_bundle_examples() {
        assert_eq!(chi_normal_bundle(&sextic(&[1, 1, 1])).unwrap(), -19);
        assert_eq!(chi_normal_bundle(&sextic(&[3, 3, 3])).unwrap(), -135);
        // degenerate arithmetic: 2*0 - 0 = 0
        assert_eq!(2 * 0 - 0, 0);
    }

    #[test]
    fn two_path_chi_agreement() {
        for d in [
            [1u32, 1, 1],
            [1, 1, 2],
            [1, 2, 3],
            [2, 2, 3],
            [3, 3, 3],
            [2, 3, 3],
            [1, 3, 3],
        ] {
            let cfg = sextic(&d);
            assert_eq!(
                chi_structure_sheaf(&cfg).unwrap(),
                chi_structure_sheaf_hilbert(&cfg).unwrap(),
                "degrees {d:?}"
            );
        }
    }

    #[test]
    fn whitney_multiplicativity() {
        // c(A+B)/c(B) = c(A) for sums of line bundles
        let a = [1u32, 4];
        let b = [2u32, 3, 5];
        let ab: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
        let q = chern_quotient(
            &total_chern_sum_of_lines(&ab, 7),
            &total_chern_sum_of_lines(&b, 7),
        )
        .unwrap();
        assert_eq!(q, total_chern_sum_of_lines(&a, 7));
    }

    #[test]
    fn gamma_squared_symmetry() {
        let a = gamma_squared(&SurfaceDegrees::new(6, vec![3, 4], vec![1, 2, 3, 2]).unwrap());
        let b = gamma_squared(&SurfaceDegrees::new(6, vec![4, 3], vec![2, 2, 3, 1]).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn validation_rejects_bad_degree_sum() {
        assert!(matches!(
            SurfaceDegrees::new(5, vec![5], vec![1, 1, 1]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            SurfaceDegrees::new(5, vec![6], vec![1, 1]),
            Err(Error::Validation(_))
        ));
    }
}
