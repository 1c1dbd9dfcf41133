//! The graded obstruction map of an explicit complete-intersection pair
//! S in X, and h^0 of the normal bundle N_{S/X} as its kernel dimension.
//!
//! With X in P^N cut by (f_i) of degrees (e_i) and S by a regular sequence
//! (s_j) of degrees (d_j), each f_i lies in the surface ideal: f_i equals
//! sum_j s_j t_ij for cofactors t_ij of degree e_i - d_j. The induced map
//!
//!    (+)_j (R/(s))_{d_j}  ->  (+)_i (R/(s))_{e_i},
//!    (u_j)  |->  ( sum_j u_j t_ij )_i
//!
//! is the restriction map on global sections of the two normal-direction
//! bundles, and its kernel computes h^0(N_{S/X}). Semi-regularity of
//! complete-intersection surfaces makes this kernel dimension the reduced
//! virtual dimension.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{CoefficientField, FieldElement};
use crate::hilbert::{koszul_hilbert_function, KoszulProfile};
use crate::linalg::{solve_linear_system, ExactMatrix, RowSpace};
use crate::poly::{monomial_basis, HomogeneousPolynomial, Monomial};

/// Explicit equations for a surface S inside a Calabi-Yau complete
/// intersection X, optionally with cofactors expressing each ambient
/// equation in the surface ideal.
#[derive(Debug, Clone)]
pub struct ExplicitPair {
    field: CoefficientField,
    ambient_n: usize,
    cy_polys: Vec<HomogeneousPolynomial>,
    surface_polys: Vec<HomogeneousPolynomial>,
    /// cofactors[i][j] has degree e_i - d_j; `None` when e_i < d_j.
    cofactors: Option<Vec<Vec<Option<HomogeneousPolynomial>>>>,
}

impl ExplicitPair {
    pub fn new(
        cy_polys: Vec<HomogeneousPolynomial>,
        surface_polys: Vec<HomogeneousPolynomial>,
        cofactors: Option<Vec<Vec<Option<HomogeneousPolynomial>>>>,
    ) -> Result<Self> {
        let first = cy_polys
            .first()
            .or_else(|| surface_polys.first())
            .ok_or_else(|| Error::Validation("no defining polynomials supplied".into()))?;
        let field = first.field().clone();
        let n_vars = first.n_vars();
        for p in cy_polys.iter().chain(surface_polys.iter()) {
            if p.field() != &field || p.n_vars() != n_vars {
                return Err(Error::RingMismatch);
            }
            if p.is_zero() {
                return Err(Error::Validation("defining polynomial is zero".into()));
            }
        }
        let ambient_n = n_vars - 1;
        if cy_polys.len() != ambient_n - 4 {
            return Err(Error::Validation(format!(
                "expected {} Calabi-Yau equations, got {}",
                ambient_n - 4,
                cy_polys.len()
            )));
        }
        if surface_polys.len() != ambient_n - 2 {
            return Err(Error::Validation(format!(
                "expected {} surface equations, got {}",
                ambient_n - 2,
                surface_polys.len()
            )));
        }
        let degree_sum: u32 = cy_polys.iter().map(|p| p.degree()).sum();
        if degree_sum as usize != ambient_n + 1 {
            return Err(Error::Validation(format!(
                "Calabi-Yau degree sum {} must equal N+1 = {}",
                degree_sum,
                ambient_n + 1
            )));
        }
        let pair = ExplicitPair {
            field,
            ambient_n,
            cy_polys,
            surface_polys,
            cofactors: None,
        };
        if let Some(cof) = cofactors {
            pair.check_cofactors(&cof)?;
            return Ok(ExplicitPair {
                cofactors: Some(cof),
                ..pair
            });
        }
        Ok(pair)
    }

    fn check_cofactors(&self, cof: &[Vec<Option<HomogeneousPolynomial>>]) -> Result<()> {
        if cof.len() != self.cy_polys.len() {
            return Err(Error::Validation("cofactor row count mismatch".into()));
        }
        for (i, row) in cof.iter().enumerate() {
            if row.len() != self.surface_polys.len() {
                return Err(Error::Validation("cofactor column count mismatch".into()));
            }
            let e_i = self.cy_polys[i].degree();
            let mut residual = self.cy_polys[i].clone();
            for (j, t) in row.iter().enumerate() {
                let d_j = self.surface_polys[j].degree();
                match t {
                    None => {
                        if e_i >= d_j {
                            return Err(Error::Validation(format!(
                                "missing cofactor t[{i}][{j}] for degrees e={e_i}, d={d_j}"
                            )));
                        }
                    }
                    Some(t) => {
                        if d_j > e_i || t.degree() != e_i - d_j {
                            return Err(Error::Validation(format!(
                                "cofactor t[{i}][{j}] has degree {}, expected {}",
                                t.degree(),
                                e_i as i64 - d_j as i64
                            )));
                        }
                        residual = residual.sub(&self.surface_polys[j].multiply(t)?)?;
                    }
                }
            }
            if !residual.is_zero() {
                return Err(Error::ConsistencyFailure(format!(
                    "cofactor identity fails for equation {i}: residual {residual}"
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &CoefficientField {
        &self.field
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn cy_polys(&self) -> &[HomogeneousPolynomial] {
        &self.cy_polys
    }

    pub fn surface_polys(&self) -> &[HomogeneousPolynomial] {
        &self.surface_polys
    }

    pub fn cofactors(&self) -> Option<&Vec<Vec<Option<HomogeneousPolynomial>>>> {
        self.cofactors.as_ref()
    }

    pub fn cy_degrees(&self) -> Vec<u32> {
        self.cy_polys.iter().map(|p| p.degree()).collect()
    }

    pub fn surface_degrees(&self) -> Vec<u32> {
        self.surface_polys.iter().map(|p| p.degree()).collect()
    }

    pub fn surface_profile(&self) -> Result<KoszulProfile> {
        KoszulProfile::new(self.ambient_n, self.surface_degrees())
    }

    /// Default degree bound for regular-sequence verification: the largest
    /// degree the downstream kernel computation touches.
    pub fn default_regularity_bound(&self) -> i64 {
        let sum_d: u32 = self.surface_degrees().iter().sum();
        let max_e = self.cy_degrees().into_iter().max().unwrap_or(0);
        sum_d.max(max_e) as i64
    }

    /// Solves all cofactors, replacing any supplied ones, and returns the
    /// completed pair.
    pub fn with_solved_cofactors(mut self) -> Result<Self> {
        let mut cof = Vec::with_capacity(self.cy_polys.len());
        for f in &self.cy_polys {
            let ts = cofactor_solve(f, &self.surface_polys)?;
            cof.push(ts);
        }
        self.cofactors = Some(cof);
        Ok(self)
    }

    /// Ensures cofactors are present, solving them if necessary.
    pub fn ensure_cofactors(self) -> Result<Self> {
        if self.cofactors.is_some() {
            Ok(self)
        } else {
            self.with_solved_cofactors()
        }
    }
}

/// Finds cofactors (t_j) with f = sum_j s_j t_j, deg t_j = deg f - deg s_j,
/// by solving the linear system on the coefficients of the t_j. Any solution
/// is acceptable; the echelon's first solution is returned. `None` entries
/// mark generators of degree exceeding deg f.
pub fn cofactor_solve(
    f: &HomogeneousPolynomial,
    s: &[HomogeneousPolynomial],
) -> Result<Vec<Option<HomogeneousPolynomial>>> {
    let field = f.field().clone();
    let n_vars = f.n_vars();
    let target = f.degree();
    for g in s {
        if g.field() != &field || g.n_vars() != n_vars {
            return Err(Error::RingMismatch);
        }
    }
    // unknown layout: for each j with d_j <= target, a block of coefficients
    // indexed by the monomial basis of degree target - d_j
    let mut unknown_bases: Vec<Option<Vec<Monomial>>> = Vec::with_capacity(s.len());
    let mut offsets: Vec<usize> = Vec::with_capacity(s.len());
    let mut total_unknowns = 0usize;
    for g in s {
        if g.degree() > target {
            unknown_bases.push(None);
            offsets.push(total_unknowns);
        } else {
            let basis = monomial_basis(n_vars, target - g.degree());
            offsets.push(total_unknowns);
            total_unknowns += basis.len();
            unknown_bases.push(Some(basis));
        }
    }
    let target_basis = monomial_basis(n_vars, target);
    let target_index: BTreeMap<&Monomial, usize> = target_basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    // equations indexed by target monomials: build the transpose
    // (column per unknown) first, then flip into sparse equation rows
    let mut equation_rows: Vec<Vec<(usize, FieldElement)>> =
        vec![Vec::new(); target_basis.len()];
    for (j, g) in s.iter().enumerate() {
        let Some(basis) = &unknown_bases[j] else {
            continue;
        };
        for (k, m) in basis.iter().enumerate() {
            let unknown = offsets[j] + k;
            for (mono, c) in g.terms() {
                let row = target_index[&mono.mul(m)];
                equation_rows[row].push((unknown, c.clone()));
            }
        }
    }
    let rhs = f.coefficient_vector(&target_basis)?;
    let equations = equation_rows
        .into_iter()
        .zip(rhs.into_iter())
        .map(|(mut row, b)| {
            row.sort_unstable_by_key(|(c, _)| *c);
            (row, b)
        });
    let solution = solve_linear_system(&field, total_unknowns, equations)
        .ok_or(Error::NotInIdeal {
            degree: target as i64,
        })?;

    let mut out = Vec::with_capacity(s.len());
    for (j, g) in s.iter().enumerate() {
        match &unknown_bases[j] {
            None => out.push(None),
            Some(basis) => {
                let coeffs = &solution[offsets[j]..offsets[j] + basis.len()];
                out.push(Some(HomogeneousPolynomial::from_vector(
                    field.clone(),
                    n_vars,
                    target - g.degree(),
                    basis,
                    coeffs,
                )?));
            }
        }
    }
    Ok(out)
}

/// Basis of a graded piece (R/(s))_n: coset monomials (the non-pivot columns
/// of the ideal's degree-n coefficient matrix) together with the echelonized
/// ideal row space used for canonical reduction.
pub struct GradedQuotientBasis {
    degree: i64,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    row_space: RowSpace,
    coset_monomials: Vec<Monomial>,
    coset_position: BTreeMap<usize, usize>,
}

impl GradedQuotientBasis {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coset_monomials(&self) -> &[Monomial] {
        &self.coset_monomials
    }

    pub fn dimension(&self) -> usize {
        self.coset_monomials.len()
    }

    /// Canonical coordinates of a degree-n polynomial in the coset basis.
    pub fn reduce(&self, poly: &HomogeneousPolynomial) -> Result<Vec<(usize, FieldElement)>> {
        if poly.degree() as i64 != self.degree {
            return Err(Error::RingMismatch);
        }
        let mut row: Vec<(usize, FieldElement)> = Vec::with_capacity(poly.num_terms());
        for (m, c) in poly.terms() {
            let col = *self
                .index
                .get(m)
                .ok_or_else(|| Error::BasisMismatch(m.to_string()))?;
            row.push((col, c.clone()));
        }
        row.sort_unstable_by_key(|(c, _)| *c);
        let residue = self.row_space.reduce_sparse(row);
        Ok(residue
            .into_iter()
            .map(|(col, v)| (self.coset_position[&col], v))
            .collect())
    }
}

/// Computes the coset basis of (R/(s))_n, verifying the cardinality against
/// the Koszul prediction.
pub fn quotient_basis(s: &[HomogeneousPolynomial], n: i64) -> Result<GradedQuotientBasis> {
    let first = s
        .first()
        .ok_or_else(|| Error::Validation("at least one generator is required".into()))?;
    let field = first.field().clone();
    let n_vars = first.n_vars();
    assert!(n >= 0, "graded pieces of negative degree are zero");
    let monomials = monomial_basis(n_vars, n as u32);
    let index: BTreeMap<Monomial, usize> = monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut row_space = RowSpace::new(field.clone(), monomials.len());
    for g in s {
        if g.degree() as i64 > n {
            continue;
        }
        for m in monomial_basis(n_vars, (n - g.degree() as i64) as u32) {
            let mut row: Vec<(usize, FieldElement)> = g
                .terms()
                .map(|(mono, c)| (index[&mono.mul(&m)], c.clone()))
                .collect();
            row.sort_unstable_by_key(|(c, _)| *c);
            row_space.insert_sparse(row);
        }
    }
    let nonpivot = row_space.nonpivot_cols();
    let coset_monomials: Vec<Monomial> = nonpivot.iter().map(|&c| monomials[c].clone()).collect();
    let coset_position: BTreeMap<usize, usize> =
        nonpivot.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let profile = KoszulProfile::new(n_vars - 1, s.iter().map(|g| g.degree()).collect())?;
    let expected = koszul_hilbert_function(&profile, n);
    if coset_monomials.len() as i64 != expected {
        return Err(Error::RegularityViolation {
            degree: n,
            actual: coset_monomials.len(),
            expected: expected as usize,
        });
    }
    Ok(GradedQuotientBasis {
        degree: n,
        monomials,
        index,
        row_space,
        coset_monomials,
        coset_position,
    })
}

/// The matrix of (u_j) |-> (sum_j u_j t_ij mod (s)) in quotient-basis
/// coordinates. Columns run over the coset bases of the degrees d_j, rows
/// over those of the degrees e_i.
pub fn obstruction_matrix(pair: &ExplicitPair) -> Result<ExactMatrix> {
    let cof = pair
        .cofactors()
        .ok_or_else(|| Error::Validation("cofactors must be solved first".into()))?;
    let s = pair.surface_polys();
    let field = pair.field().clone();

    let mut bases: BTreeMap<i64, GradedQuotientBasis> = BTreeMap::new();
    for d in pair
        .surface_degrees()
        .into_iter()
        .chain(pair.cy_degrees())
    {
        let d = d as i64;
        if let std::collections::btree_map::Entry::Vacant(e) = bases.entry(d) {
            e.insert(quotient_basis(s, d)?);
        }
    }

    let col_blocks: Vec<usize> = pair
        .surface_degrees()
        .iter()
        .map(|&d| bases[&(d as i64)].dimension())
        .collect();
    let row_blocks: Vec<usize> = pair
        .cy_degrees()
        .iter()
        .map(|&e| bases[&(e as i64)].dimension())
        .collect();
    let n_cols: usize = col_blocks.iter().sum();
    let n_rows: usize = row_blocks.iter().sum();

    let mut matrix = ExactMatrix::new(field, n_rows, n_cols);
    let mut col_offset = 0usize;
    for (j, g) in s.iter().enumerate() {
        let d_j = g.degree() as i64;
        let col_basis: Vec<Monomial> = bases[&d_j].coset_monomials().to_vec();
        for (k, m) in col_basis.iter().enumerate() {
            let col = col_offset + k;
            let mut row_offset = 0usize;
            for (i, f) in pair.cy_polys().iter().enumerate() {
                let e_i = f.degree() as i64;
                let target = &bases[&e_i];
                if let Some(t) = &cof[i][j] {
                    let product = t.multiply_monomial(m);
                    for (pos, v) in target.reduce(&product)? {
                        matrix.set(row_offset + pos, col, v);
                    }
                }
                row_offset += row_blocks[i];
            }
        }
        col_offset += col_blocks[j];
    }
    Ok(matrix)
}

/// h^0(N_{S/X}) as the kernel dimension of the obstruction map; for
/// complete-intersection surfaces this equals the reduced virtual dimension.
pub fn h0_normal(pair: &ExplicitPair) -> Result<usize> {
    let m = obstruction_matrix(pair)?;
    Ok(m.kernel_dimension())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f13() -> CoefficientField {
        CoefficientField::prime(13).unwrap()
    }

    fn fermat_sextic(field: &CoefficientField) -> HomogeneousPolynomial {
        HomogeneousPolynomial::parse(
            "x0^6 + x1^6 + x2^6 + x3^6 + x4^6 + x5^6",
            field,
            6,
        )
        .unwrap()
    }

    fn cube_generators(field: &CoefficientField) -> Vec<HomogeneousPolynomial> {
        (0..3)
            .map(|j| {
                HomogeneousPolynomial::parse(
                    &format!("x{}^3 + 5*x{}^3", 2 * j, 2 * j + 1),
                    field,
                    6,
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn cofactor_of_own_generator() {
        let f = f13();
        let s = cube_generators(&f);
        let ts = cofactor_solve(&s[0], &s).unwrap();
        // t = (1, 0, 0)
        let one = HomogeneousPolynomial::parse("1", &f, 6).unwrap();
        assert_eq!(ts[0].as_ref().unwrap(), &one);
        assert!(ts[1].as_ref().unwrap().is_zero());
        assert!(ts[2].as_ref().unwrap().is_zero());
    }

    #[test]
    fn cofactors_for_fermat_cubes() {
        let field = f13();
        let f = fermat_sextic(&field);
        let s = cube_generators(&field);
        let ts = cofactor_solve(&f, &s).unwrap();
        // verify the identity f = sum s_j t_j
        let mut residual = f.clone();
        for (g, t) in s.iter().zip(ts.iter()) {
            residual = residual.sub(&g.multiply(t.as_ref().unwrap()).unwrap()).unwrap();
        }
        assert!(residual.is_zero());
        // the hand factorization (x^3+5y^3)(x^3-5y^3) = x^6+y^6 mod 13 is
        // one valid solution; check it passes the cofactor validator
        let canonical: Vec<Option<HomogeneousPolynomial>> = (0..3)
            .map(|j| {
                Some(
                    HomogeneousPolynomial::parse(
                        &format!("x{}^3 - 5*x{}^3", 2 * j, 2 * j + 1),
                        &field,
                        6,
                    )
                    .unwrap(),
                )
            })
            .collect();
        let pair = ExplicitPair::new(vec![f], s, Some(vec![canonical])).unwrap();
        assert!(pair.cofactors().is_some());
    }

    #[test]
    fn coordinate_plane_not_on_fermat() {
        let field = f13();
        let f = fermat_sextic(&field);
        let s: Vec<_> = (0..3)
            .map(|j| {
                HomogeneousPolynomial::parse(&format!("x{} + x{}", 2 * j, 2 * j + 1), &field, 6)
                    .unwrap()
            })
            .collect();
        assert!(matches!(
            cofactor_solve(&f, &s),
            Err(Error::NotInIdeal { degree: 6 })
        ));
    }

    #[test]
    fn quotient_basis_examples() {
        let field = f13();
        let s: Vec<_> = (0..3)
            .map(|i| HomogeneousPolynomial::parse(&format!("x{i}"), &field, 6).unwrap())
            .collect();
        // degree 2: the six degree-2 monomials in x3, x4, x5
        let b = quotient_basis(&s, 2).unwrap();
        assert_eq!(b.dimension(), 6);
        for m in b.coset_monomials() {
            assert!(m.exponents()[..3].iter().all(|&e| e == 0));
        }
        // degree 6: C(8,2) = 28
        assert_eq!(quotient_basis(&s, 6).unwrap().dimension(), 28);
        // degree 0: just 1
        let b0 = quotient_basis(&s, 0).unwrap();
        assert_eq!(b0.coset_monomials(), &[Monomial::one(6)]);
    }

    #[test]
    fn quotient_reduction_idempotent() {
        let field = f13();
        let s = cube_generators(&field);
        let b = quotient_basis(&s, 6).unwrap();
        let f = fermat_sextic(&field);
        let coords = b.reduce(&f).unwrap();
        // rebuild the residue polynomial from the coset coordinates and
        // reduce again: fixed point
        let mut residue = HomogeneousPolynomial::zero(field.clone(), 6, 6);
        for (pos, v) in &coords {
            residue
                .add_term(b.coset_monomials()[*pos].clone(), v.clone())
                .unwrap();
        }
        assert_eq!(b.reduce(&residue).unwrap(), coords);
    }

    #[test]
    fn plane_obstruction_matrix_shape() {
        // s = (x0+2x1, x2+2x3, x4+2x5) over F_13; 2^6 = -1 mod 13
        let field = f13();
        let f = fermat_sextic(&field);
        let s: Vec<_> = (0..3)
            .map(|j| {
                HomogeneousPolynomial::parse(
                    &format!("x{} + 2*x{}", 2 * j, 2 * j + 1),
                    &field,
                    6,
                )
                .unwrap()
            })
            .collect();
        let pair = ExplicitPair::new(vec![f], s, None)
            .unwrap()
            .ensure_cofactors()
            .unwrap();
        let m = obstruction_matrix(&pair).unwrap();
        assert_eq!(m.n_cols(), 9); // three copies of dim (R/s)_1 = 3
        assert_eq!(m.n_rows(), 28); // dim (R/s)_6 = C(8,2)
        assert_eq!(m.kernel_dimension(), 0); // the plane is rigid
    }

    #[test]
    fn cofactor_independence() {
        // two cofactor solutions induce the same matrix after reduction
        let field = f13();
        let f = fermat_sextic(&field);
        let s = cube_generators(&field);
        let pair = ExplicitPair::new(vec![f.clone()], s.clone(), None)
            .unwrap()
            .ensure_cofactors()
            .unwrap();
        let m1 = obstruction_matrix(&pair).unwrap();

        // perturb: t'_1 = t_1 + g s_2, t'_2 = t_2 - g s_1 with deg g = 0
        let cof = pair.cofactors().unwrap().clone();
        let g = HomogeneousPolynomial::parse("4", &field, 6).unwrap();
        let mut cof2 = cof.clone();
        cof2[0][0] = Some(
            cof[0][0]
                .as_ref()
                .unwrap()
                .add(&s[1].multiply(&g).unwrap())
                .unwrap(),
        );
        cof2[0][1] = Some(
            cof[0][1]
                .as_ref()
                .unwrap()
                .sub(&s[0].multiply(&g).unwrap())
                .unwrap(),
        );
        let pair2 = ExplicitPair::new(vec![f], s, Some(cof2)).unwrap();
        let m2 = obstruction_matrix(&pair2).unwrap();
        assert_eq!(m1.n_rows(), m2.n_rows());
        assert_eq!(m1.n_cols(), m2.n_cols());
        for r in 0..m1.n_rows() {
            for c in 0..m1.n_cols() {
                assert_eq!(m1.get(r, c), m2.get(r, c), "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn fermat_cubes_kernel_dimension() {
        let field = f13();
        let f = fermat_sextic(&field);
        let s = cube_generators(&field);
        let pair = ExplicitPair::new(vec![f], s, None)
            .unwrap()
            .ensure_cofactors()
            .unwrap();
        assert_eq!(h0_normal(&pair).unwrap(), 3);
    }
}
