//! Exact rank, kernel and row-space computations over a coefficient field.
//!
//! Two engines back the public operations:
//!
//! * an incremental row echelon (`RowSpace`) with a dense delayed-reduction
//!   fast path for prime fields and a sparse exact path for every other
//!   field; it powers quotient-basis construction, ideal reduction and
//!   linear solving, and its reductions are canonical (residues vanish on
//!   all pivot columns);
//! * fraction-free Bareiss elimination for dense rank queries over the
//!   rationals and their extensions, working in Z or Z[z]/(m) so that every
//!   division is exact.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::field::{fp_inv, fp_mul, CoefficientField, FieldElement, FieldKind, FP_FAST_BOUND};

// ---------------------------------------------------------------------------
// ExactMatrix

/// Sparse exact matrix. Entries are unique per (row, col) and nonzero.
#[derive(Debug, Clone)]
pub struct ExactMatrix {
    field: CoefficientField,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), FieldElement>,
}

impl ExactMatrix {
    pub fn new(field: CoefficientField, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            field,
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_dense(field: CoefficientField, data: Vec<Vec<FieldElement>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = ExactMatrix::new(field, rows, cols);
        for (i, row) in data.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> &CoefficientField {
        &self.field
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, row: usize, col: usize, value: FieldElement) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        if self.field.is_zero(&value) {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> FieldElement {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn fill_ratio(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            0.0
        } else {
            self.entries.len() as f64 / (self.rows * self.cols) as f64
        }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::new(self.field.clone(), self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    /// Rows as sorted sparse vectors.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, FieldElement)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    /// Exact rank. Prime fields use plain elimination; the rationals and
    /// their extensions use fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        let rank = match rank_strategy(&self.field) {
            RankStrategy::PrimeField => {
                let mut space = RowSpace::new(self.field.clone(), self.cols);
                for row in self.sparse_rows() {
                    space.insert_sparse(row);
                }
                space.rank()
            }
            RankStrategy::BareissInt => bareiss_rank_rational(self),
            RankStrategy::BareissExt(min_poly) => bareiss_rank_extension(self, &min_poly),
            RankStrategy::Generic => {
                let mut space = RowSpace::new(self.field.clone(), self.cols);
                for row in self.sparse_rows() {
                    space.insert_sparse(row);
                }
                space.rank()
            }
        };
        debug_assert!(rank <= self.rows.min(self.cols));
        rank
    }

    /// Dimension of the right kernel: cols - rank.
    pub fn kernel_dimension(&self) -> usize {
        self.cols - self.rank()
    }

    /// Non-pivot column indices of a row echelon form; their count equals
    /// cols - rank.
    pub fn echelon_pivot_complement(&self) -> Vec<usize> {
        let mut space = RowSpace::new(self.field.clone(), self.cols);
        for row in self.sparse_rows() {
            space.insert_sparse(row);
        }
        space.nonpivot_cols()
    }
}

enum RankStrategy {
    PrimeField,
    BareissInt,
    BareissExt(Vec<BigInt>),
    Generic,
}

fn rank_strategy(field: &CoefficientField) -> RankStrategy {
    match field.kind() {
        FieldKind::Prime(_) => RankStrategy::PrimeField,
        FieldKind::Rationals => RankStrategy::BareissInt,
        FieldKind::Extension(e) => {
            if matches!(e.base.kind(), FieldKind::Rationals) {
                if let Some(mp) = integer_min_poly(&e.min_poly) {
                    return RankStrategy::BareissExt(mp);
                }
            }
            RankStrategy::Generic
        }
    }
}

fn integer_min_poly(min_poly: &[FieldElement]) -> Option<Vec<BigInt>> {
    min_poly
        .iter()
        .map(|c| match c {
            FieldElement::Rational(r) if r.denom().is_one() => Some(r.numer().clone()),
            _ => None,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// RowSpace: incremental echelon with canonical reduction

/// Incrementally built row echelon form with pivots normalized to 1.
///
/// Reduction against the stored rows eliminates every pivot column, so the
/// residue of a vector is canonical: two vectors are congruent modulo the
/// row space iff their residues are equal.
pub struct RowSpace {
    field: CoefficientField,
    cols: usize,
    inner: RowSpaceImpl,
}

enum RowSpaceImpl {
    Fp(FpRowSpace),
    Generic(GenericRowSpace),
}

impl RowSpace {
    pub fn new(field: CoefficientField, cols: usize) -> Self {
        let inner = match field.kind() {
            FieldKind::Prime(p) => RowSpaceImpl::Fp(FpRowSpace::new(*p, cols)),
            _ => RowSpaceImpl::Generic(GenericRowSpace::new(field.clone(), cols)),
        };
        RowSpace {
            field,
            cols,
            inner,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            RowSpaceImpl::Fp(s) => s.pivot_cols.len(),
            RowSpaceImpl::Generic(s) => s.pivot_cols.len(),
        }
    }

    /// Inserts a row; returns its pivot column if it enlarged the space.
    pub fn insert_sparse(&mut self, row: Vec<(usize, FieldElement)>) -> Option<usize> {
        match &mut self.inner {
            RowSpaceImpl::Fp(s) => {
                let dense = s.densify(&row);
                s.insert(dense)
            }
            RowSpaceImpl::Generic(s) => s.insert(row),
        }
    }

    pub fn insert_dense(&mut self, row: &[FieldElement]) -> Option<usize> {
        match &mut self.inner {
            RowSpaceImpl::Fp(s) => {
                let dense = row
                    .iter()
                    .map(|v| match v {
                        FieldElement::Residue(r) => *r,
                        _ => panic!("prime-field row space fed a non-residue"),
                    })
                    .collect();
                s.insert(dense)
            }
            RowSpaceImpl::Generic(s) => {
                let sparse = row
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !self.field.is_zero(v))
                    .map(|(i, v)| (i, v.clone()))
                    .collect();
                s.insert(sparse)
            }
        }
    }

    /// Canonical residue of a vector modulo the row space, as a sorted
    /// sparse vector supported on non-pivot columns.
    pub fn reduce_sparse(&self, row: Vec<(usize, FieldElement)>) -> Vec<(usize, FieldElement)> {
        match &self.inner {
            RowSpaceImpl::Fp(s) => {
                let reduced = s.reduce(s.densify(&row));
                reduced
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != 0)
                    .map(|(i, v)| (i, FieldElement::Residue(v)))
                    .collect()
            }
            RowSpaceImpl::Generic(s) => s.reduce(row),
        }
    }

    /// Sorted pivot columns.
    pub fn pivot_cols(&self) -> Vec<usize> {
        let mut p = match &self.inner {
            RowSpaceImpl::Fp(s) => s.pivot_cols.clone(),
            RowSpaceImpl::Generic(s) => s.pivot_cols.clone(),
        };
        p.sort_unstable();
        p
    }

    pub fn nonpivot_cols(&self) -> Vec<usize> {
        let pivots = self.pivot_cols();
        let mut out = Vec::with_capacity(self.cols - pivots.len());
        let mut it = pivots.iter().peekable();
        for c in 0..self.cols {
            if it.peek() == Some(&&c) {
                it.next();
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Treats the last column as the augmented right-hand side of a linear
    /// system and back-substitutes the particular solution with all free
    /// variables set to zero. Returns `None` when the system is
    /// inconsistent (a pivot appears in the augmented column).
    pub fn back_substitute(&self, rhs_col: usize) -> Option<Vec<FieldElement>> {
        assert_eq!(rhs_col, self.cols - 1, "rhs must be the last column");
        if self.pivot_cols().contains(&rhs_col) {
            return None;
        }
        match &self.inner {
            RowSpaceImpl::Fp(s) => s.back_substitute().map(|sol| {
                sol.into_iter().map(FieldElement::Residue).collect()
            }),
            RowSpaceImpl::Generic(s) => s.back_substitute(rhs_col, &self.field),
        }
    }
}

/// Solves `A x = b` given sparse equation rows; returns the echelon's first
/// solution (free variables zero) or `None` when inconsistent.
pub fn solve_linear_system(
    field: &CoefficientField,
    n_unknowns: usize,
    equations: impl IntoIterator<Item = (Vec<(usize, FieldElement)>, FieldElement)>,
) -> Option<Vec<FieldElement>> {
    let mut space = RowSpace::new(field.clone(), n_unknowns + 1);
    for (mut row, rhs) in equations {
        if !field.is_zero(&rhs) {
            row.push((n_unknowns, rhs));
        }
        space.insert_sparse(row);
    }
    space.back_substitute(n_unknowns)
}

// ---------------------------------------------------------------------------
// prime-field implementation: delayed reduction, rows stored sparse or dense

/// Echelon rows below this fill ratio are kept sparse (a tuning constant).
const DENSE_FILL: f64 = 0.25;

enum FpRow {
    Dense(Vec<u64>),
    /// Sorted (col, value) pairs, pivot first.
    Sparse(Vec<(u32, u64)>),
}

struct FpRowSpace {
    p: u64,
    cols: usize,
    rows: Vec<FpRow>,
    pivot_of_row: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
    pivot_cols: Vec<usize>,
}

impl FpRowSpace {
    fn new(p: u64, cols: usize) -> Self {
        FpRowSpace {
            p,
            cols,
            rows: Vec::new(),
            pivot_of_row: Vec::new(),
            pivot_of_col: vec![None; cols],
            pivot_cols: Vec::new(),
        }
    }

    fn densify(&self, row: &[(usize, FieldElement)]) -> Vec<u64> {
        let mut dense = vec![0u64; self.cols];
        for (c, v) in row {
            match v {
                FieldElement::Residue(r) => dense[*c] = *r,
                _ => panic!("prime-field row space fed a non-residue"),
            }
        }
        dense
    }

    /// Eliminates `work` against the stored rows in place, leaving entries
    /// reduced mod p and zero on every pivot column. For small p the data
    /// stays unreduced between pivot steps: each addend is below 2^30 and at
    /// most `cols` of them accumulate before a column is visited, so u64
    /// never overflows.
    fn eliminate(&self, work: &mut [u64]) {
        let p = self.p;
        let small = p < FP_FAST_BOUND;
        for c in 0..self.cols {
            let v = work[c] % p;
            work[c] = v;
            if v == 0 {
                continue;
            }
            let Some(r) = self.pivot_of_col[c] else {
                continue;
            };
            let f = p - v;
            match (&self.rows[r], small) {
                (FpRow::Dense(prow), true) => {
                    for k in c + 1..self.cols {
                        work[k] += f * prow[k];
                    }
                }
                (FpRow::Dense(prow), false) => {
                    for k in c + 1..self.cols {
                        if prow[k] != 0 {
                            work[k] = (work[k] % p + fp_mul(f, prow[k], p)) % p;
                        }
                    }
                }
                (FpRow::Sparse(entries), true) => {
                    for &(k, v) in entries.iter().skip(1) {
                        work[k as usize] += f * v;
                    }
                }
                (FpRow::Sparse(entries), false) => {
                    for &(k, v) in entries.iter().skip(1) {
                        let k = k as usize;
                        work[k] = (work[k] % p + fp_mul(f, v, p)) % p;
                    }
                }
            }
            work[c] = 0;
        }
        for v in work.iter_mut() {
            *v %= p;
        }
    }

    fn insert(&mut self, mut work: Vec<u64>) -> Option<usize> {
        let p = self.p;
        for v in work.iter_mut() {
            *v %= p;
        }
        self.eliminate(&mut work);
        let pivot = work.iter().position(|&v| v != 0)?;
        let inv = fp_inv(work[pivot], p);
        let mut nnz = 0usize;
        for v in work.iter_mut().skip(pivot) {
            if *v != 0 {
                *v = fp_mul(*v, inv, p);
                nnz += 1;
            }
        }
        let idx = self.rows.len();
        let row = if (nnz as f64) < DENSE_FILL * (self.cols as f64) {
            FpRow::Sparse(
                work.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, &v)| (c as u32, v))
                    .collect(),
            )
        } else {
            FpRow::Dense(work)
        };
        self.rows.push(row);
        self.pivot_of_row.push(pivot);
        self.pivot_of_col[pivot] = Some(idx);
        self.pivot_cols.push(pivot);
        Some(pivot)
    }

    fn reduce(&self, mut work: Vec<u64>) -> Vec<u64> {
        for v in work.iter_mut() {
            *v %= self.p;
        }
        self.eliminate(&mut work);
        work
    }

    fn row_entry(&self, row: usize, col: usize) -> u64 {
        match &self.rows[row] {
            FpRow::Dense(v) => v[col],
            FpRow::Sparse(entries) => entries
                .iter()
                .find(|(c, _)| *c as usize == col)
                .map_or(0, |(_, v)| *v),
        }
    }

    fn back_substitute(&self) -> Option<Vec<u64>> {
        let p = self.p;
        let n = self.cols - 1; // last column is the right-hand side
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&i| std::cmp::Reverse(self.pivot_of_row[i]));
        let mut x = vec![0u64; n];
        for i in order {
            let pc = self.pivot_of_row[i];
            if pc >= n {
                return None; // pivot in the augmented column
            }
            let mut acc = self.row_entry(i, n);
            match &self.rows[i] {
                FpRow::Dense(row) => {
                    for k in pc + 1..n {
                        if row[k] != 0 && x[k] != 0 {
                            let t = fp_mul(row[k], x[k], p);
                            acc = (acc + p - t) % p;
                        }
                    }
                }
                FpRow::Sparse(entries) => {
                    for &(k, v) in entries.iter().skip(1) {
                        let k = k as usize;
                        if k < n && x[k] != 0 {
                            let t = fp_mul(v, x[k], p);
                            acc = (acc + p - t) % p;
                        }
                    }
                }
            }
            x[pc] = acc % p;
        }
        Some(x)
    }
}

// ---------------------------------------------------------------------------
// generic implementation: sparse rows, exact field arithmetic

struct GenericRowSpace {
    field: CoefficientField,
    rows: Vec<Vec<(usize, FieldElement)>>,
    pivot_of_row: Vec<usize>,
    pivot_of_col: BTreeMap<usize, usize>,
    pivot_cols: Vec<usize>,
}

impl GenericRowSpace {
    fn new(field: CoefficientField, _cols: usize) -> Self {
        GenericRowSpace {
            field,
            rows: Vec::new(),
            pivot_of_row: Vec::new(),
            pivot_of_col: BTreeMap::new(),
            pivot_cols: Vec::new(),
        }
    }

    /// Walks the working vector column by column; pivot columns are
    /// eliminated, other entries survive into the residue.
    fn eliminate(&self, row: Vec<(usize, FieldElement)>) -> Vec<(usize, FieldElement)> {
        let f = &self.field;
        let mut work: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for (c, v) in row {
            if !f.is_zero(&v) {
                merge(f, &mut work, c, v);
            }
        }
        let mut residue: Vec<(usize, FieldElement)> = Vec::new();
        while let Some((&c, _)) = work.first_key_value() {
            let coeff = work.remove(&c).unwrap();
            if f.is_zero(&coeff) {
                continue;
            }
            match self.pivot_of_col.get(&c) {
                Some(&r) => {
                    // subtract coeff * (stored row); the stored pivot is 1
                    for (k, v) in &self.rows[r] {
                        if *k == c {
                            continue;
                        }
                        let t = f.mul(&coeff, v);
                        merge_sub(f, &mut work, *k, t);
                    }
                }
                None => residue.push((c, coeff)),
            }
        }
        residue
    }

    fn insert(&mut self, row: Vec<(usize, FieldElement)>) -> Option<usize> {
        let f = self.field.clone();
        let residue = self.eliminate(row);
        let (pivot, lead) = residue.first().cloned()?;
        let inv = f.invert(&lead).expect("nonzero leading entry");
        let normalized: Vec<(usize, FieldElement)> = residue
            .into_iter()
            .map(|(c, v)| (c, f.mul(&v, &inv)))
            .collect();
        let idx = self.rows.len();
        self.rows.push(normalized);
        self.pivot_of_row.push(pivot);
        self.pivot_of_col.insert(pivot, idx);
        self.pivot_cols.push(pivot);
        Some(pivot)
    }

    fn reduce(&self, row: Vec<(usize, FieldElement)>) -> Vec<(usize, FieldElement)> {
        self.eliminate(row)
    }

    fn back_substitute(&self, rhs_col: usize, f: &CoefficientField) -> Option<Vec<FieldElement>> {
        let n = rhs_col;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_unstable_by_key(|&i| std::cmp::Reverse(self.pivot_of_row[i]));
        let mut x = vec![f.zero(); n];
        for i in order {
            let pc = self.pivot_of_row[i];
            if pc >= n {
                return None;
            }
            let mut acc = f.zero();
            for (k, v) in &self.rows[i] {
                if *k == rhs_col {
                    acc = f.add(&acc, v);
                } else if *k > pc && *k < n && !f.is_zero(&x[*k]) {
                    let t = f.mul(v, &x[*k]);
                    acc = f.sub(&acc, &t);
                }
            }
            x[pc] = acc;
        }
        Some(x)
    }
}

fn merge(f: &CoefficientField, work: &mut BTreeMap<usize, FieldElement>, col: usize, v: FieldElement) {
    match work.entry(col) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = f.add(e.get(), &v);
            if f.is_zero(&sum) {
                e.remove();
            } else {
                e.insert(sum);
            }
        }
    }
}

fn merge_sub(
    f: &CoefficientField,
    work: &mut BTreeMap<usize, FieldElement>,
    col: usize,
    v: FieldElement,
) {
    merge(f, work, col, f.neg(&v));
}

// ---------------------------------------------------------------------------
// Bareiss elimination over Z and Z[z]/(m)

/// Scales each row to integers and runs one-step Bareiss elimination; all
/// intermediate entries are minors of the scaled matrix, so the divisions
/// are exact and coefficient growth stays polynomial.
fn bareiss_rank_rational(m: &ExactMatrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m.rows);
    for row in m.sparse_rows() {
        let mut lcm = BigInt::one();
        for (_, v) in &row {
            if let FieldElement::Rational(r) = v {
                lcm = lcm_big(&lcm, r.denom());
            }
        }
        let mut dense = vec![BigInt::zero(); m.cols];
        for (c, v) in row {
            if let FieldElement::Rational(r) = v {
                let scaled = r * BigRational::from_integer(lcm.clone());
                debug_assert!(scaled.denom().is_one());
                dense[c] = scaled.numer().clone();
            }
        }
        rows.push(dense);
    }
    bareiss_int(rows)
}

fn bareiss_int(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][c].clone();
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                // still rescale so the Sylvester identity stays aligned
                for k in c + 1..cols {
                    let num = &pivot * &m[r][k];
                    m[r][k] = &num / &prev;
                }
                continue;
            }
            let f = std::mem::replace(&mut m[r][c], BigInt::zero());
            for k in c + 1..cols {
                let num = &pivot * &m[r][k] - &f * &m[rank][k];
                debug_assert!((&num % &prev).is_zero());
                m[r][k] = &num / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    let g = gcd_big(a.clone(), b.clone());
    (a / &g * b).abs()
}

fn gcd_big(a: BigInt, b: BigInt) -> BigInt {
    if b.is_zero() {
        a.abs()
    } else {
        let r = &a % &b;
        gcd_big(b, r)
    }
}

/// Elements of Z[z]/(m): fixed-length integer coordinate vectors.
#[derive(Debug, Clone, PartialEq)]
struct ZExt(Vec<BigInt>);

struct ZExtRing {
    d: usize,
    /// monic, ascending, length d+1
    min_poly: Vec<BigInt>,
}

impl ZExtRing {
    fn zero(&self) -> ZExt {
        ZExt(vec![BigInt::zero(); self.d])
    }

    fn one(&self) -> ZExt {
        let mut v = vec![BigInt::zero(); self.d];
        v[0] = BigInt::one();
        ZExt(v)
    }

    fn is_zero(&self, a: &ZExt) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }

    fn mul(&self, a: &ZExt, b: &ZExt) -> ZExt {
        let mut prod = vec![BigInt::zero(); 2 * self.d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        // reduce modulo the monic minimal polynomial
        for k in (self.d..prod.len()).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let lead = std::mem::take(&mut prod[k]);
            for i in 0..self.d {
                let t = &lead * &self.min_poly[i];
                prod[k - self.d + i] -= t;
            }
        }
        prod.truncate(self.d);
        ZExt(prod)
    }

    fn sub(&self, a: &ZExt, b: &ZExt) -> ZExt {
        ZExt(a.0.iter().zip(b.0.iter()).map(|(x, y)| x - y).collect())
    }

    /// d x d integer matrix of multiplication by `b` (columns are b * z^j).
    fn mult_matrix(&self, b: &ZExt) -> Vec<Vec<BigInt>> {
        let mut cols = Vec::with_capacity(self.d);
        let mut power = b.clone();
        cols.push(power.0.clone());
        let z = {
            let mut v = vec![BigInt::zero(); self.d];
            if self.d >= 2 {
                v[1] = BigInt::one();
            }
            ZExt(v)
        };
        for _ in 1..self.d {
            power = self.mul(&power, &z);
            cols.push(power.0.clone());
        }
        // transpose columns into a row-major matrix
        let mut m = vec![vec![BigInt::zero(); self.d]; self.d];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[i][j] = v.clone();
            }
        }
        m
    }

    /// Exact division q = a / b in Z[z]/(m), via the adjugate of the
    /// multiplication matrix of b. Panics if the division is not exact,
    /// which cannot happen for Bareiss minors.
    fn divide_exact(&self, a: &ZExt, div: &PreparedDivisor) -> ZExt {
        if self.is_zero(a) {
            return self.zero();
        }
        let mut out = Vec::with_capacity(self.d);
        for i in 0..self.d {
            let mut acc = BigInt::zero();
            for j in 0..self.d {
                acc += &div.adjugate[i][j] * &a.0[j];
            }
            debug_assert!((&acc % &div.det).is_zero(), "inexact division in Z[z]/(m)");
            out.push(acc / &div.det);
        }
        ZExt(out)
    }

    fn prepare_divisor(&self, b: &ZExt) -> PreparedDivisor {
        let m = self.mult_matrix(b);
        let det = det_small(&m);
        let adjugate = adjugate_small(&m);
        PreparedDivisor { det, adjugate }
    }
}

struct PreparedDivisor {
    det: BigInt,
    adjugate: Vec<Vec<BigInt>>,
}

fn det_small(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor = minor_matrix(m, 0, j);
                let term = &m[0][j] * det_small(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn minor_matrix(m: &[Vec<BigInt>], row: usize, col: usize) -> Vec<Vec<BigInt>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

fn adjugate_small(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let cof = det_small(&minor_matrix(m, i, j));
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

fn bareiss_rank_extension(m: &ExactMatrix, min_poly: &[BigInt]) -> usize {
    let d = min_poly.len() - 1;
    let ring = ZExtRing {
        d,
        min_poly: min_poly.to_vec(),
    };
    // scale each row by the lcm of all rational denominators in it
    let mut rows: Vec<Vec<ZExt>> = Vec::with_capacity(m.rows);
    for row in m.sparse_rows() {
        let mut lcm = BigInt::one();
        for (_, v) in &row {
            if let FieldElement::Extension(coords) = v {
                for c in coords {
                    if let FieldElement::Rational(r) = c {
                        lcm = lcm_big(&lcm, r.denom());
                    }
                }
            }
        }
        let mut dense = vec![ring.zero(); m.cols];
        for (c, v) in row {
            if let FieldElement::Extension(coords) = v {
                let ints: Vec<BigInt> = coords
                    .iter()
                    .map(|x| match x {
                        FieldElement::Rational(r) => {
                            let scaled = r * BigRational::from_integer(lcm.clone());
                            debug_assert!(scaled.denom().is_one());
                            scaled.numer().clone()
                        }
                        _ => unreachable!("rational base"),
                    })
                    .collect();
                dense[c] = ZExt(ints);
            }
        }
        rows.push(dense);
    }

    let n_rows = rows.len();
    if n_rows == 0 {
        return 0;
    }
    let cols = m.cols;
    let mut prev: Option<PreparedDivisor> = None;
    let mut rank = 0;
    for c in 0..cols {
        if rank == n_rows {
            break;
        }
        let Some(pr) = (rank..n_rows).find(|&r| !ring.is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..n_rows {
            let f = std::mem::replace(&mut rows[r][c], ring.zero());
            let f_zero = ring.is_zero(&f);
            for k in c + 1..cols {
                let mut num = ring.mul(&pivot, &rows[r][k]);
                if !f_zero {
                    let t = ring.mul(&f, &rows[rank][k]);
                    num = ring.sub(&num, &t);
                }
                rows[r][k] = match &prev {
                    None => num,
                    Some(div) => ring.divide_exact(&num, div),
                };
            }
        }
        prev = Some(ring.prepare_divisor(&pivot));
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> CoefficientField {
        CoefficientField::rationals()
    }

    fn mat(field: &CoefficientField, data: &[&[i64]]) -> ExactMatrix {
        let dense: Vec<Vec<FieldElement>> = data
            .iter()
            .map(|row| row.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        ExactMatrix::from_dense(field.clone(), dense)
    }

    #[test]
    fn rank_basics() {
        let f = q();
        let id = mat(&f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(id.rank(), 3);
        assert_eq!(id.kernel_dimension(), 0);
        assert!(id.echelon_pivot_complement().is_empty());

        let zero = ExactMatrix::new(f.clone(), 3, 5);
        assert_eq!(zero.rank(), 0);
        assert_eq!(zero.kernel_dimension(), 5);
        let z24 = ExactMatrix::new(f.clone(), 2, 4);
        assert_eq!(z24.echelon_pivot_complement(), vec![0, 1, 2, 3]);

        let prop = mat(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(prop.rank(), 1);

        let single = mat(&f, &[&[1, 1, 0]]);
        assert_eq!(single.echelon_pivot_complement().len(), 2);
    }

    #[test]
    fn rank_over_prime_field_matches_rational() {
        let f13 = CoefficientField::prime(13).unwrap();
        let m = mat(&f13, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.rank(), 2);
        let mq = mat(&q(), &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(mq.rank(), 2);
    }

    #[test]
    fn rank_over_gaussian_extension() {
        let f = CoefficientField::gaussian_rationals();
        let z = f.generator().unwrap();
        // [[1, z], [z, -1]] has rank 1 because (z)*(1, z) = (z, z^2) = (z, -1)
        let mut m = ExactMatrix::new(f.clone(), 2, 2);
        m.set(0, 0, f.one());
        m.set(0, 1, z.clone());
        m.set(1, 0, z.clone());
        m.set(1, 1, f.from_i64(-1));
        assert_eq!(m.rank(), 1);
        // [[1, z], [z, 1]] has determinant 1 - z^2 = 2, rank 2
        let mut m2 = ExactMatrix::new(f.clone(), 2, 2);
        m2.set(0, 0, f.one());
        m2.set(0, 1, z.clone());
        m2.set(1, 0, z);
        m2.set(1, 1, f.one());
        assert_eq!(m2.rank(), 2);
    }

    #[test]
    fn solve_and_inconsistency() {
        let f = q();
        // x + y = 3, x - y = 1 -> x = 2, y = 1
        let sol = solve_linear_system(
            &f,
            2,
            vec![
                (vec![(0, f.one()), (1, f.one())], f.from_i64(3)),
                (vec![(0, f.one()), (1, f.from_i64(-1))], f.from_i64(1)),
            ],
        )
        .unwrap();
        assert_eq!(sol, vec![f.from_i64(2), f.from_i64(1)]);

        // x + y = 1, x + y = 2 -> inconsistent
        let none = solve_linear_system(
            &f,
            2,
            vec![
                (vec![(0, f.one()), (1, f.one())], f.from_i64(1)),
                (vec![(0, f.one()), (1, f.one())], f.from_i64(2)),
            ],
        );
        assert!(none.is_none());
    }

    #[test]
    fn reduction_is_canonical() {
        let f = CoefficientField::prime(13).unwrap();
        let mut space = RowSpace::new(f.clone(), 4);
        space.insert_sparse(vec![(0, f.from_i64(2)), (2, f.from_i64(1))]);
        space.insert_sparse(vec![(1, f.from_i64(1)), (3, f.from_i64(5))]);
        // residues vanish on pivot columns 0 and 1
        let r = space.reduce_sparse(vec![(0, f.one()), (1, f.one()), (2, f.one())]);
        assert!(r.iter().all(|(c, _)| *c >= 2));
        // reducing an element of the row space gives zero
        let r0 = space.reduce_sparse(vec![(0, f.from_i64(4)), (2, f.from_i64(2))]);
        assert!(r0.is_empty());
    }

    fn rank_oracle_f64(data: &[Vec<i64>]) -> usize {
        // independent floating-point rank estimate for small random integer
        // matrices with entries too small for cancellation issues
        let mut m: Vec<Vec<f64>> = data
            .iter()
            .map(|r| r.iter().map(|&v| v as f64).collect())
            .collect();
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut rank = 0;
        for c in 0..cols {
            let Some(pr) = (rank..rows).find(|&r| m[r][c].abs() > 1e-6) else {
                continue;
            };
            m.swap(rank, pr);
            let piv = m[rank][c];
            for r in rank + 1..rows {
                let f = m[r][c] / piv;
                for k in c..cols {
                    m[r][k] -= f * m[rank][k];
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_equals_transpose_rank(data in proptest::collection::vec(
            proptest::collection::vec(-5i64..=5, 5), 4)) {
            let f = q();
            let rows: Vec<Vec<FieldElement>> = data.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
            let m = ExactMatrix::from_dense(f, rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_invariant_under_scaling_and_swaps(data in proptest::collection::vec(
            proptest::collection::vec(-5i64..=5, 4), 4), s in 1i64..7, i in 0usize..4, j in 0usize..4) {
            let f = q();
            let mut rows: Vec<Vec<FieldElement>> = data.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
            let base = ExactMatrix::from_dense(f.clone(), rows.clone()).rank();
            rows.swap(i, j);
            for v in rows[0].iter_mut() {
                *v = f.mul(v, &f.from_i64(s));
            }
            let changed = ExactMatrix::from_dense(f, rows).rank();
            prop_assert_eq!(base, changed);
        }

        /// Integer matrices keep their rank from Q to F_p for two primes
        /// large enough to miss the tiny minors of these entries.
        #[test]
        fn multi_prime_rank_agreement(data in proptest::collection::vec(
            proptest::collection::vec(-4i64..=4, 5), 5)) {
            let rank_q = {
                let f = q();
                let rows: Vec<Vec<FieldElement>> = data.iter()
                    .map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
                ExactMatrix::from_dense(f, rows).rank()
            };
            prop_assert_eq!(rank_q, rank_oracle_f64(&data));
            for p in [10007u64, 10009] {
                let f = CoefficientField::prime(p).unwrap();
                let rows: Vec<Vec<FieldElement>> = data.iter()
                    .map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
                prop_assert_eq!(ExactMatrix::from_dense(f, rows).rank(), rank_q);
            }
        }
    }
}
