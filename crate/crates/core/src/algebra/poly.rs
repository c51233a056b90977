//! Exact integer polynomials: sparse multivariate [`MultiPoly`] and dense
//! univariate [`UniPoly`], plus Lagrange interpolation over the integers.

use std::collections::{btree_map, BTreeMap};
use std::fmt;

use super::field::{FieldElement, PrimeField};
use crate::error::{Error, Result};

/// Exponent vector, one slot per variable (`exps[k-1]` is the power of `x_k`).
pub type Monomial = Vec<u16>;

/// Sparse multivariate polynomial with integer coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, so term order is
/// lexicographic and two polynomials are equal iff their maps are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, i128>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i128) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable `x_k`, `k` 1-based.
    pub fn var(nvars: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= nvars, "variable x{k} out of range 1..={nvars}");
        let mut exps = vec![0; nvars];
        exps[k - 1] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exps, 1);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, i128)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i128)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exps: &[u16]) -> i128 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: i128) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
            btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &MultiPoly) {
        assert_eq!(self.nvars, other.nvars);
        for (m, &c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn scale(&self, c: i128) -> MultiPoly {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by `x_k` (1-based).
    pub fn mul_var(&self, k: usize) -> MultiPoly {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &v)| {
                    let mut m = m.clone();
                    m[k - 1] += 1;
                    (m, v)
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(-1)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, k: usize) -> usize {
        self.terms
            .keys()
            .map(|m| m[k - 1] as usize)
            .max()
            .unwrap_or(0)
    }

    /// True when no variable appears with exponent above one.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e <= 1))
    }

    /// Variables (1-based) that occur in at least one term.
    pub fn support_variables(&self) -> Vec<usize> {
        (1..=self.nvars)
            .filter(|&k| self.terms.keys().any(|m| m[k - 1] > 0))
            .collect()
    }

    pub fn eval_int(&self, point: &[i128]) -> Result<i128> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc: i128 = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&e, &x) in m.iter().zip(point) {
                for _ in 0..e {
                    t = t.checked_mul(x).ok_or(Error::Overflow("polynomial evaluation"))?;
                }
            }
            acc = acc.checked_add(t).ok_or(Error::Overflow("polynomial evaluation"))?;
        }
        Ok(acc)
    }

    pub fn eval_mod(&self, field: &PrimeField, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = FieldElement::ZERO;
        for (m, &c) in &self.terms {
            let mut t = field.from_i128(c);
            for (&e, &x) in m.iter().zip(point) {
                if e > 0 {
                    t = field.mul(t, field.pow(x, e as u64));
                }
            }
            acc = field.add(acc, t);
        }
        Ok(acc)
    }

    /// Keeps `x_k` symbolic and substitutes `values[j]` for every other
    /// variable `x_{j+1}`, giving a univariate polynomial in `x_k`.
    pub fn restrict(&self, k: usize, values: &[i128]) -> Result<UniPoly> {
        if values.len() != self.nvars || k == 0 || k > self.nvars {
            return Err(Error::Dimension("restriction point arity".into()));
        }
        let mut coeffs = vec![0i128; self.degree_in(k) + 1];
        for (m, &c) in &self.terms {
            let mut t = c;
            for (j, (&e, &x)) in m.iter().zip(values).enumerate() {
                if j + 1 != k {
                    for _ in 0..e {
                        t = t.checked_mul(x).ok_or(Error::Overflow("restriction"))?;
                    }
                }
            }
            coeffs[m[k - 1] as usize] += t;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Renames variables: `x_k` becomes `x_{map(k)}` in a ring of `nvars` variables.
    pub fn relabel(&self, nvars: usize, map: impl Fn(usize) -> usize) -> MultiPoly {
        let mut out = Self::zero(nvars);
        for (m, &c) in &self.terms {
            let mut e = vec![0u16; nvars];
            for (k, &p) in m.iter().enumerate() {
                if p > 0 {
                    e[map(k + 1) - 1] += p;
                }
            }
            out.add_term(e, c);
        }
        out
    }

    /// Renders terms in descending order using `name(k)` for `x_k`.
    pub fn display_with<F: Fn(usize) -> String>(&self, name: F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    if e == 1 {
                        name(k + 1)
                    } else {
                        format!("{}^{}", name(k + 1), e)
                    }
                })
                .collect();
            let abs = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if abs != 1 {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|k| format!("x{k}")))
    }
}

/// Dense univariate polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<i128>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    /// `a*y + b`.
    pub fn linear(a: i128, b: i128) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i128 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, y: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * y + c)
    }

    pub fn eval_mod(&self, field: &PrimeField, y: FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| {
            field.add(field.mul(acc, y), field.from_i128(c))
        })
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as i128)
                .collect(),
        )
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            let abs = c.unsigned_abs();
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if abs != 1 {
                        write!(f, "{abs}")?;
                    }
                    if i == 1 {
                        f.write_str("y")?;
                    } else {
                        write!(f, "y^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Lagrange interpolation over the integers.
///
/// Returns the unique polynomial of degree `< points.len()` through the
/// points. All arithmetic is exact; a rational (non-integer) coefficient is
/// reported as [`Error::Internal`] because callers only interpolate values
/// of integer polynomials.
pub fn interpolate(points: &[(i128, i128)]) -> Result<UniPoly> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no interpolation points".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if points[i].0 == points[j].0 {
                return Err(Error::InvalidArgument(format!(
                    "duplicate abscissa {}",
                    points[i].0
                )));
            }
        }
    }
    let ovf = || Error::Overflow("interpolation");
    // Basis numerators prod_{j != i} (y - y_j) and denominators prod (y_i - y_j).
    let mut numerators = Vec::with_capacity(n);
    let mut denominators = Vec::with_capacity(n);
    for i in 0..n {
        let mut poly = vec![1i128];
        let mut den = 1i128;
        for j in 0..n {
            if j == i {
                continue;
            }
            let yj = points[j].0;
            let mut next = vec![0i128; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] = next[d + 1].checked_add(c).ok_or_else(ovf)?;
                next[d] = next[d]
                    .checked_sub(c.checked_mul(yj).ok_or_else(ovf)?)
                    .ok_or_else(ovf)?;
            }
            poly = next;
            den = den.checked_mul(points[i].0 - yj).ok_or_else(ovf)?;
        }
        numerators.push(poly);
        denominators.push(den);
    }
    let mut lcm = 1i128;
    for &d in &denominators {
        lcm = (lcm / gcd(lcm, d)).checked_mul(d.abs()).ok_or_else(ovf)?;
    }
    let mut scaled = vec![0i128; n];
    for i in 0..n {
        let w = (lcm / denominators[i])
            .checked_mul(points[i].1)
            .ok_or_else(ovf)?;
        for (d, &c) in numerators[i].iter().enumerate() {
            scaled[d] = scaled[d]
                .checked_add(c.checked_mul(w).ok_or_else(ovf)?)
                .ok_or_else(ovf)?;
        }
    }
    let mut coeffs = Vec::with_capacity(n);
    for c in scaled {
        if c % lcm != 0 {
            return Err(Error::Internal(
                "interpolated polynomial has a non-integer coefficient".into(),
            ));
        }
        coeffs.push(c / lcm);
    }
    Ok(UniPoly::new(coeffs))
}
