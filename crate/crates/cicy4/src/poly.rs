//! Homogeneous multivariate polynomials over an exact coefficient field.
//!
//! Monomials in x_0,...,x_N are ordered by graded reverse lexicographic
//! order; bases of graded pieces are listed in descending order, which is the
//! conventional listing for fixed degree.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{CoefficientField, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u8>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u8>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn one(n_vars: usize) -> Self {
        Monomial::new(vec![0; n_vars])
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    /// Re-derives the cached degree; used by debug assertions.
    pub fn degree_consistent(&self) -> bool {
        self.degree == self.exps.iter().map(|&e| e as u32).sum::<u32>()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    /// Graded reverse lexicographic order: higher degree wins; at equal
    /// degree the monomial whose trailing exponent difference is negative is
    /// the larger one.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.exps.iter().zip(other.exps.iter()).rev() {
            match a.cmp(b) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of the given degree in `n_vars` variables, in descending
/// grevlex order. The count is C(degree + n_vars - 1, n_vars - 1).
pub fn monomial_basis(n_vars: usize, degree: u32) -> Vec<Monomial> {
    assert!(n_vars >= 1);
    let mut out = Vec::new();
    let mut current = vec![0u8; n_vars];
    enumerate_exponents(&mut out, &mut current, 0, degree);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn enumerate_exponents(out: &mut Vec<Monomial>, current: &mut Vec<u8>, var: usize, remaining: u32) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(Monomial::new(current.clone()));
        current[var] = 0;
        return;
    }
    for e in 0..=remaining {
        current[var] = e as u8;
        enumerate_exponents(out, current, var + 1, remaining - e);
    }
    current[var] = 0;
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial {
    field: CoefficientField,
    n_vars: usize,
    degree: u32,
    /// Only nonzero coefficients are stored; every key has degree `degree`.
    terms: BTreeMap<Monomial, FieldElement>,
}

impl HomogeneousPolynomial {
    pub fn zero(field: CoefficientField, n_vars: usize, degree: u32) -> Self {
        HomogeneousPolynomial {
            field,
            n_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: CoefficientField,
        n_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    ) -> Result<Self> {
        let mut poly = HomogeneousPolynomial::zero(field, n_vars, degree);
        for (m, c) in terms {
            poly.add_term(m, c)?;
        }
        Ok(poly)
    }

    pub fn add_term(&mut self, monomial: Monomial, coeff: FieldElement) -> Result<()> {
        if monomial.n_vars() != self.n_vars {
            return Err(Error::VariableCountMismatch);
        }
        if monomial.degree() != self.degree {
            return Err(Error::RingMismatch);
        }
        if self.field.is_zero(&coeff) {
            return Ok(());
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.field.add(e.get(), &coeff);
                if self.field.is_zero(&sum) {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &CoefficientField {
        &self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
        self.check_compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::RingMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &FieldElement) -> HomogeneousPolynomial {
        let mut out = HomogeneousPolynomial::zero(self.field.clone(), self.n_vars, self.degree);
        if self.field.is_zero(c) {
            return out;
        }
        for (m, a) in &self.terms {
            let prod = self.field.mul(a, c);
            if !self.field.is_zero(&prod) {
                out.terms.insert(m.clone(), prod);
            }
        }
        out
    }

    /// Exact convolution product; zero coefficients are pruned.
    pub fn multiply(&self, other: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
        self.check_compatible(other)?;
        let mut out = HomogeneousPolynomial::zero(
            self.field.clone(),
            self.n_vars,
            self.degree + other.degree,
        );
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), self.field.mul(a, b))?;
            }
        }
        Ok(out)
    }

    /// Multiplies by a single monomial (the degree shifts accordingly).
    pub fn multiply_monomial(&self, m: &Monomial) -> HomogeneousPolynomial {
        let mut out = HomogeneousPolynomial::zero(
            self.field.clone(),
            self.n_vars,
            self.degree + m.degree(),
        );
        for (n, c) in &self.terms {
            out.terms.insert(n.mul(m), c.clone());
        }
        out
    }

    fn check_compatible(&self, other: &HomogeneousPolynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n_vars != other.n_vars {
            return Err(Error::VariableCountMismatch);
        }
        Ok(())
    }

    /// Coefficients of this polynomial relative to a full monomial basis of
    /// its degree. Reconstructing from the vector round-trips.
    pub fn coefficient_vector(&self, basis: &[Monomial]) -> Result<Vec<FieldElement>> {
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = vec![self.field.zero(); basis.len()];
        for (m, c) in &self.terms {
            match index.get(m) {
                Some(&i) => out[i] = c.clone(),
                None => return Err(Error::BasisMismatch(m.to_string())),
            }
        }
        Ok(out)
    }

    pub fn from_vector(
        field: CoefficientField,
        n_vars: usize,
        degree: u32,
        basis: &[Monomial],
        coeffs: &[FieldElement],
    ) -> Result<Self> {
        assert_eq!(basis.len(), coeffs.len());
        HomogeneousPolynomial::from_terms(
            field,
            n_vars,
            degree,
            basis.iter().cloned().zip(coeffs.iter().cloned()),
        )
    }

    /// Parses the literal syntax used by configuration files: a sum of terms
    /// `c * x0^a0 * ... * xN^aN` with exact rational coefficients;
    /// extension-field coefficients are written with the symbol `z`, e.g.
    /// `x0^3 + z*x1^3` or `(1 + z^2)*x0*x1`.
    pub fn parse(src: &str, field: &CoefficientField, n_vars: usize) -> Result<Self> {
        let mut tz = Tokenizer::new(src);
        let mut terms: Vec<(Monomial, FieldElement)> = Vec::new();
        loop {
            let sign = match tz.peek()? {
                Token::End => break,
                Token::Plus => {
                    tz.next()?;
                    1
                }
                Token::Minus => {
                    tz.next()?;
                    -1
                }
                _ if terms.is_empty() => 1,
                _ => return Err(tz.error("expected '+' or '-' between terms")),
            };
            if tz.peek()? == Token::End {
                return Err(tz.error("trailing sign"));
            }
            let (m, c) = parse_term(&mut tz, field, n_vars)?;
            let c = if sign < 0 { field.neg(&c) } else { c };
            terms.push((m, c));
        }
        if terms.is_empty() {
            return Err(tz.error("empty polynomial"));
        }
        let degree = terms[0].0.degree();
        for (m, _) in &terms {
            if m.degree() != degree {
                return Err(Error::Validation(format!(
                    "polynomial is not homogeneous: monomials of degree {} and {}",
                    degree,
                    m.degree()
                )));
            }
        }
        HomogeneousPolynomial::from_terms(field.clone(), n_vars, degree, terms)
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = self.field.format_element(c);
            if m.degree() == 0 {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{m}")?;
            } else if cs.contains(' ') {
                write!(f, "({cs})*{m}")?;
            } else {
                write!(f, "{cs}*{m}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Number(i64),
    Var(usize),
    Z,
    Caret,
    Star,
    Plus,
    Minus,
    Slash,
    LParen,
    RParen,
    End,
}

struct Tokenizer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Tokenizer<'a> {
    fn new(src: &'a str) -> Self {
        Tokenizer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            col: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    fn next(&mut self) -> Result<Token> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Token::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        match c {
            b'+' => Ok(Token::Plus),
            b'-' => Ok(Token::Minus),
            b'*' => Ok(Token::Star),
            b'^' => Ok(Token::Caret),
            b'/' => Ok(Token::Slash),
            b'(' => Ok(Token::LParen),
            b')' => Ok(Token::RParen),
            b'z' => Ok(Token::Z),
            b'x' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected variable index after 'x'"));
                }
                let idx: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.error("variable index out of range"))?;
                Ok(Token::Var(idx))
            }
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: i64 = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.error("integer literal out of range"))?;
                Ok(Token::Number(n))
            }
            _ => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn peek(&mut self) -> Result<Token> {
        let saved = self.pos;
        let t = self.next();
        self.pos = saved;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        // optional ^k suffix
        if self.peek()? == Token::Caret {
            self.next()?;
            match self.next()? {
                Token::Number(n) if n >= 0 && n <= u8::MAX as i64 => Ok(n as u32),
                _ => Err(self.error("expected a small non-negative exponent")),
            }
        } else {
            Ok(1)
        }
    }
}

/// One term: a product of rational literals, powers of `z`, parenthesized
/// z-polynomials, and variable powers, in any order, joined by `*`.
fn parse_term(
    tz: &mut Tokenizer,
    field: &CoefficientField,
    n_vars: usize,
) -> Result<(Monomial, FieldElement)> {
    let mut coeff = field.one();
    let mut exps = vec![0u8; n_vars];
    loop {
        match tz.next()? {
            Token::Number(n) => {
                let mut value = field.from_i64(n);
                if tz.peek()? == Token::Slash {
                    tz.next()?;
                    match tz.next()? {
                        Token::Number(d) if d != 0 => {
                            value = field
                                .mul(&value, &field.invert(&field.from_i64(d)).map_err(|_| {
                                    tz.error("zero denominator")
                                })?);
                        }
                        _ => return Err(tz.error("expected nonzero integer denominator")),
                    }
                }
                let e = tz.exponent()?;
                coeff = field.mul(&coeff, &field.pow(&value, e as u64));
            }
            Token::Z => {
                let z = field
                    .generator()
                    .ok_or_else(|| tz.error("symbol 'z' requires an extension field"))?;
                let e = tz.exponent()?;
                coeff = field.mul(&coeff, &field.pow(&z, e as u64));
            }
            Token::LParen => {
                let inner = parse_z_sum(tz, field)?;
                tz.expect(Token::RParen, "')'")?;
                let e = tz.exponent()?;
                coeff = field.mul(&coeff, &field.pow(&inner, e as u64));
            }
            Token::Var(idx) => {
                if idx >= n_vars {
                    return Err(tz.error(&format!(
                        "variable x{idx} out of range for {n_vars} variables"
                    )));
                }
                let e = tz.exponent()?;
                let total = exps[idx] as u32 + e;
                if total > u8::MAX as u32 {
                    return Err(tz.error("exponent too large"));
                }
                exps[idx] = total as u8;
            }
            _ => return Err(tz.error("expected a coefficient or variable factor")),
        }
        if tz.peek()? == Token::Star {
            tz.next()?;
        } else {
            break;
        }
    }
    Ok((Monomial::new(exps), coeff))
}

/// Sum of z-terms inside parentheses, e.g. `1 + z^2 - 2*z`.
fn parse_z_sum(tz: &mut Tokenizer, field: &CoefficientField) -> Result<FieldElement> {
    let mut acc = field.zero();
    let mut first = true;
    loop {
        let sign = match tz.peek()? {
            Token::RParen | Token::End => break,
            Token::Plus => {
                tz.next()?;
                1
            }
            Token::Minus => {
                tz.next()?;
                -1
            }
            _ if first => 1,
            _ => return Err(tz.error("expected '+' or '-' inside coefficient")),
        };
        first = false;
        let mut value = field.one();
        loop {
            match tz.next()? {
                Token::Number(n) => {
                    let mut v = field.from_i64(n);
                    if tz.peek()? == Token::Slash {
                        tz.next()?;
                        match tz.next()? {
                            Token::Number(d) if d != 0 => {
                                v = field.mul(
                                    &v,
                                    &field
                                        .invert(&field.from_i64(d))
                                        .map_err(|_| tz.error("zero denominator"))?,
                                );
                            }
                            _ => return Err(tz.error("expected nonzero integer denominator")),
                        }
                    }
                    value = field.mul(&value, &v);
                }
                Token::Z => {
                    let z = field
                        .generator()
                        .ok_or_else(|| tz.error("symbol 'z' requires an extension field"))?;
                    let e = tz.exponent()?;
                    value = field.mul(&value, &field.pow(&z, e as u64));
                }
                _ => return Err(tz.error("expected rational or z factor")),
            }
            if tz.peek()? == Token::Star {
                tz.next()?;
            } else {
                break;
            }
        }
        if sign < 0 {
            value = field.neg(&value);
        }
        acc = field.add(&acc, &value);
    }
    Ok(acc)
}

/// Parses a univariate polynomial in `z` over the given base field into an
/// ascending coefficient vector; used for minimal polynomials in field
/// descriptors like `Q[z]/(z^2+1)`.
pub fn parse_univariate_in_z(src: &str, base: &CoefficientField) -> Result<Vec<FieldElement>> {
    let mut tz = Tokenizer::new(src);
    let mut coeffs: Vec<FieldElement> = Vec::new();
    let mut first = true;
    loop {
        let sign = match tz.peek()? {
            Token::End => break,
            Token::Plus => {
                tz.next()?;
                1
            }
            Token::Minus => {
                tz.next()?;
                -1
            }
            _ if first => 1,
            _ => return Err(tz.error("expected '+' or '-' between terms")),
        };
        first = false;
        let mut value = base.one();
        let mut z_exp = 0u32;
        loop {
            match tz.next()? {
                Token::Number(n) => {
                    let mut v = base.from_i64(n);
                    if tz.peek()? == Token::Slash {
                        tz.next()?;
                        match tz.next()? {
                            Token::Number(d) if d != 0 => {
                                v = base.mul(
                                    &v,
                                    &base
                                        .invert(&base.from_i64(d))
                                        .map_err(|_| tz.error("zero denominator"))?,
                                );
                            }
                            _ => return Err(tz.error("expected nonzero integer denominator")),
                        }
                    }
                    value = base.mul(&value, &v);
                }
                Token::Z => {
                    z_exp += tz.exponent()?;
                }
                _ => return Err(tz.error("expected rational or z factor")),
            }
            if tz.peek()? == Token::Star {
                tz.next()?;
            } else {
                break;
            }
        }
        if sign < 0 {
            value = base.neg(&value);
        }
        while coeffs.len() <= z_exp as usize {
            coeffs.push(base.zero());
        }
        coeffs[z_exp as usize] = base.add(&coeffs[z_exp as usize], &value);
    }
    while coeffs.last().map_or(false, |c| base.is_zero(c)) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return Err(tz.error("empty polynomial"));
    }
    Ok(coeffs)
}
