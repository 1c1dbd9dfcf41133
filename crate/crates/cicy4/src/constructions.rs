//! Named surface constructions and seeded random instances.
//!
//! The `fermat-sextic` construction places a surface of degrees (d1,d2,d3)
//! on the Fermat sextic in P^5 by factoring each pair sum x^6 + y^6: the
//! j-th generator is the canonical degree-d_j factor of
//! x_{2j}^6 + x_{2j+1}^6, and the complementary factor is its cofactor.
//! Degrees 1 and 5 need a sixth root of -1, degree 3 a square root of -1;
//! degrees 2, 4 and 6 stay rational.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chern::SurfaceDegrees;
use crate::error::{Error, Result};
use crate::field::{prime_with_roots, CoefficientField, FieldElement};
use crate::normal_bundle::ExplicitPair;
use crate::poly::{monomial_basis, HomogeneousPolynomial, Monomial};

/// Roots of -1 required by the canonical factor of x^6 + y^6 of this degree:
/// the returned k ask for some z with z^k = -1.
pub fn fermat_roots_needed(degrees: &[u32]) -> Vec<u32> {
    let mut ks: Vec<u32> = degrees
        .iter()
        .filter_map(|&d| match d {
            1 | 5 => Some(6),
            3 => Some(2),
            _ => None,
        })
        .collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// Smallest prime >= `min` whose field carries every root the construction
/// needs.
pub fn fermat_compatible_prime(degrees: &[u32], min: u64) -> u64 {
    prime_with_roots(&fermat_roots_needed(degrees), min)
}

/// The canonical degree-d factor of x_a^6 + x_b^6 and its cofactor.
fn fermat_factor(
    field: &CoefficientField,
    a: usize,
    b: usize,
    d: u32,
) -> Result<(HomogeneousPolynomial, HomogeneousPolynomial)> {
    let n_vars = 6;
    let pair_monomial = |ea: u32, eb: u32| {
        let mut exps = vec![0u8; n_vars];
        exps[a] = ea as u8;
        exps[b] = eb as u8;
        Monomial::new(exps)
    };
    let two_terms = |da: u32, c: &FieldElement| -> Result<HomogeneousPolynomial> {
        HomogeneousPolynomial::from_terms(
            field.clone(),
            n_vars,
            da,
            vec![
                (pair_monomial(da, 0), field.one()),
                (pair_monomial(0, da), c.clone()),
            ],
        )
    };
    let quartic = |sign: i64| -> Result<HomogeneousPolynomial> {
        // x^4 + sign * x^2 y^2 + y^4
        HomogeneousPolynomial::from_terms(
            field.clone(),
            n_vars,
            4,
            vec![
                (pair_monomial(4, 0), field.one()),
                (pair_monomial(2, 2), field.from_i64(sign)),
                (pair_monomial(0, 4), field.one()),
            ],
        )
    };
    let root = |k: u32| {
        field.root_of_minus_one(k).ok_or_else(|| {
            Error::Validation(format!(
                "field {field} has no solution of z^{k} = -1 required by a degree-{d} factor"
            ))
        })
    };
    let quintic_for = |zeta: &FieldElement| -> Result<HomogeneousPolynomial> {
        // sum_{m=0}^{5} (-zeta)^m x^{5-m} y^m, the cofactor of x + zeta y
        let neg = field.neg(zeta);
        let mut terms = Vec::new();
        let mut c = field.one();
        for m in 0..=5u32 {
            terms.push((pair_monomial(5 - m, m), c.clone()));
            c = field.mul(&c, &neg);
        }
        HomogeneousPolynomial::from_terms(field.clone(), n_vars, 5, terms)
    };
    match d {
        1 => {
            let zeta = root(6)?;
            Ok((two_terms(1, &zeta)?, quintic_for(&zeta)?))
        }
        2 => Ok((two_terms(2, &field.one())?, quartic(-1)?)),
        3 => {
            let zeta = root(2)?;
            Ok((two_terms(3, &zeta)?, two_terms(3, &field.neg(&zeta))?))
        }
        4 => Ok((quartic(-1)?, two_terms(2, &field.one())?)),
        5 => {
            let zeta = root(6)?;
            Ok((quintic_for(&zeta)?, two_terms(1, &zeta)?))
        }
        6 => {
            let one_poly = HomogeneousPolynomial::from_terms(
                field.clone(),
                n_vars,
                0,
                vec![(Monomial::one(n_vars), field.one())],
            )?;
            Ok((two_terms(6, &field.one())?, one_poly))
        }
        _ => Err(Error::Validation(format!(
            "no canonical factor of x^6 + y^6 of degree {d}"
        ))),
    }
}

/// The Fermat sextic x0^6 + ... + x5^6.
pub fn fermat_sextic(field: &CoefficientField) -> HomogeneousPolynomial {
    let terms = (0..6).map(|i| {
        let mut exps = vec![0u8; 6];
        exps[i] = 6;
        (Monomial::new(exps), field.one())
    });
    HomogeneousPolynomial::from_terms(field.clone(), 6, 6, terms).expect("distinct monomials")
}

/// Canonical surface of degrees (d1,d2,d3) on the Fermat sextic, with its
/// canonical cofactors attached.
pub fn fermat_sextic_pair(degrees: &[u32], field: &CoefficientField) -> Result<ExplicitPair> {
    if degrees.len() != 3 {
        return Err(Error::Validation(
            "the fermat-sextic construction needs exactly three surface degrees".into(),
        ));
    }
    let mut s = Vec::with_capacity(3);
    let mut t = Vec::with_capacity(3);
    for (j, &d) in degrees.iter().enumerate() {
        let (factor, cofactor) = fermat_factor(field, 2 * j, 2 * j + 1, d)?;
        s.push(factor);
        t.push(Some(cofactor));
    }
    let f = fermat_sextic(field);
    ExplicitPair::new(vec![f], s, Some(vec![t]))
}

fn random_polynomial(
    field: &CoefficientField,
    n_vars: usize,
    degree: u32,
    rng: &mut ChaCha8Rng,
) -> Result<HomogeneousPolynomial> {
    let p = match field.kind() {
        crate::field::FieldKind::Prime(p) => *p,
        _ => {
            return Err(Error::Validation(
                "random instances are drawn over prime fields".into(),
            ))
        }
    };
    let basis = monomial_basis(n_vars, degree);
    let coeffs: Vec<FieldElement> = (0..basis.len())
        .map(|_| FieldElement::Residue(rng.gen_range(0..p)))
        .collect();
    HomogeneousPolynomial::from_vector(field.clone(), n_vars, degree, &basis, &coeffs)
}

/// Random surface of the given degrees inside a random Calabi-Yau complete
/// intersection containing it: draws dense random generators s_j and random
/// cofactors t_ij, and sets f_i = sum_j s_j t_ij. Fully determined by the
/// seed.
pub fn random_pair(cfg: &SurfaceDegrees, field: &CoefficientField, seed: u64) -> Result<ExplicitPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_vars = cfg.ambient_n() + 1;
    let mut surface = Vec::new();
    for &d in cfg.surface_degrees() {
        surface.push(random_polynomial(field, n_vars, d, &mut rng)?);
    }
    let mut cofactors = Vec::new();
    let mut cy = Vec::new();
    for &e in cfg.cy_degrees() {
        let mut row = Vec::new();
        let mut f = HomogeneousPolynomial::zero(field.clone(), n_vars, e);
        for (j, &d) in cfg.surface_degrees().iter().enumerate() {
            if d > e {
                row.push(None);
                continue;
            }
            let t = random_polynomial(field, n_vars, e - d, &mut rng)?;
            f = f.add(&surface[j].multiply(&t)?)?;
            row.push(Some(t));
        }
        if f.is_zero() {
            return Err(Error::Validation(
                "random Calabi-Yau equation degenerated to zero".into(),
            ));
        }
        cy.push(f);
        cofactors.push(row);
    }
    ExplicitPair::new(cy, surface, Some(cofactors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::verify_regular_sequence;
    use crate::normal_bundle::h0_normal;

    #[test]
    fn roots_needed_per_degree() {
        assert_eq!(fermat_roots_needed(&[1, 3, 3]), vec![2, 6]);
        assert_eq!(fermat_roots_needed(&[2, 3, 3]), vec![2]);
        assert_eq!(fermat_roots_needed(&[2, 4, 6]), Vec::<u32>::new());
        assert_eq!(fermat_compatible_prime(&[1, 3, 3], 13), 13);
        assert_eq!(fermat_compatible_prime(&[1, 3, 3], 10007), 10009);
    }

    #[test]
    fn factors_multiply_to_pair_sum() {
        let field = CoefficientField::prime(13).unwrap();
        for d in 1..=6u32 {
            let (s, t) = fermat_factor(&field, 0, 1, d).unwrap();
            let product = s.multiply(&t).unwrap();
            let expected =
                HomogeneousPolynomial::parse("x0^6 + x1^6", &field, 6).unwrap();
            assert_eq!(product, expected, "degree {d}");
        }
        // and over the cyclotomic extension
        let field = CoefficientField::cyclotomic12();
        for d in [1u32, 3, 5] {
            let (s, t) = fermat_factor(&field, 2, 3, d).unwrap();
            let product = s.multiply(&t).unwrap();
            let expected =
                HomogeneousPolynomial::parse("x2^6 + x3^6", &field, 6).unwrap();
            assert_eq!(product, expected, "degree {d}");
        }
    }

    #[test]
    fn canonical_pairs_are_regular() {
        let field = CoefficientField::prime(13).unwrap();
        for degrees in [[1u32, 3, 3], [2, 3, 3], [3, 3, 3], [1, 1, 1]] {
            let pair = fermat_sextic_pair(&degrees, &field).unwrap();
            let bound = pair.default_regularity_bound();
            assert!(
                verify_regular_sequence(pair.surface_polys(), bound).unwrap(),
                "degrees {degrees:?}"
            );
        }
    }

    #[test]
    fn missing_root_reported() {
        let field = CoefficientField::prime(7).unwrap(); // no sixth root of -1
        assert!(matches!(
            fermat_sextic_pair(&[1, 3, 3], &field),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn random_pair_reproducible_and_consistent() {
        let cfg = SurfaceDegrees::new(5, vec![6], vec![1, 1, 2]).unwrap();
        let field = CoefficientField::prime(10007).unwrap();
        let a = random_pair(&cfg, &field, 42).unwrap();
        let b = random_pair(&cfg, &field, 42).unwrap();
        assert_eq!(a.surface_polys(), b.surface_polys());
        assert_eq!(a.cy_polys(), b.cy_polys());
        let c = random_pair(&cfg, &field, 43).unwrap();
        assert_ne!(a.surface_polys(), c.surface_polys());
        // rigid degrees: the kernel vanishes for a generic instance
        assert_eq!(h0_normal(&a).unwrap(), 0);
    }
}
