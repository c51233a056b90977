//! Integer-linear expressions, just enough to check `g * A * h` exactly.

use std::collections::BTreeMap;
use std::fmt;

use super::{Entry, VarMatrix};
use crate::algebra::SquareMatrix;
use crate::error::{Error, Result};

/// `constant + sum coeff_k * x_k` with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinExpr {
    constant: i64,
    coeffs: BTreeMap<u32, i64>,
}

impl LinExpr {
    pub fn from_entry(e: &Entry) -> Self {
        let mut out = Self::default();
        match *e {
            Entry::Zero => {}
            Entry::One => out.constant = 1,
            Entry::Int(c) => out.constant = c,
            Entry::Var(k) => {
                out.coeffs.insert(k, 1);
            }
        }
        out
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    pub fn coefficient(&self, k: u32) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &LinExpr, scale: i64) {
        if scale == 0 {
            return;
        }
        self.constant += scale * other.constant;
        for (&k, &c) in &other.coeffs {
            let slot = self.coeffs.entry(k).or_insert(0);
            *slot += scale * c;
            if *slot == 0 {
                self.coeffs.remove(&k);
            }
        }
    }

    /// The single matrix entry this expression equals, if any.
    pub fn as_entry(&self) -> Option<Entry> {
        match (self.constant, self.coeffs.len()) {
            (0, 0) => Some(Entry::Zero),
            (1, 0) => Some(Entry::One),
            (c, 0) => Some(Entry::Int(c)),
            (0, 1) => {
                let (&k, &c) = self.coeffs.iter().next()?;
                (c == 1).then_some(Entry::Var(k))
            }
            _ => None,
        }
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (&k, &c) in &self.coeffs {
            parts.push(match c {
                1 => format!("x{k}"),
                -1 => format!("-x{k}"),
                _ => format!("{c}*x{k}"),
            });
        }
        if self.constant != 0 || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinExprMatrix {
    n: usize,
    entries: Vec<LinExpr>,
}

impl LinExprMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &LinExpr {
        &self.entries[r * self.n + c]
    }

    /// Entrywise comparison against a variable matrix.
    pub fn equals(&self, a: &VarMatrix) -> bool {
        a.n() == self.n
            && (0..self.n).all(|r| {
                (0..self.n).all(|c| self.get(r, c) == &LinExpr::from_entry(a.get(r, c)))
            })
    }

    /// Positions where `self` and `a` differ.
    pub fn mismatches(&self, a: &VarMatrix) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.n.min(a.n()) {
            for c in 0..self.n.min(a.n()) {
                if self.get(r, c) != &LinExpr::from_entry(a.get(r, c)) {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Converts back when every entry is a single constant or variable.
    pub fn to_var_matrix(&self, template: &VarMatrix) -> Result<VarMatrix> {
        let mut rows = Vec::with_capacity(self.n);
        for r in 0..self.n {
            let mut row = Vec::with_capacity(self.n);
            for c in 0..self.n {
                let e = self.get(r, c).as_entry().ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "entry ({},{}) = {} is not a single variable or constant",
                        r + 1,
                        c + 1,
                        self.get(r, c)
                    ))
                })?;
                row.push(e);
            }
            rows.push(row);
        }
        VarMatrix::new(template.flavor(), template.naming(), template.var_count(), rows)
    }
}

/// The exact product `g * a * h` with linear-expression entries.
pub fn gl_sandwich(
    g: &SquareMatrix<i64>,
    a: &VarMatrix,
    h: &SquareMatrix<i64>,
) -> Result<LinExprMatrix> {
    let n = a.n();
    if g.n() != n || h.n() != n {
        return Err(Error::Dimension(format!(
            "g is {0}x{0}, A is {1}x{1}, h is {2}x{2}",
            g.n(),
            n,
            h.n()
        )));
    }
    // a * h first, then g * (a * h).
    let mut ah = vec![LinExpr::default(); n * n];
    for r in 0..n {
        for k in 0..n {
            let e = LinExpr::from_entry(a.get(r, k));
            if e == LinExpr::default() {
                continue;
            }
            for c in 0..n {
                ah[r * n + c].add_scaled(&e, h[(k, c)]);
            }
        }
    }
    let mut out = vec![LinExpr::default(); n * n];
    for r in 0..n {
        for k in 0..n {
            let s = g[(r, k)];
            if s == 0 {
                continue;
            }
            for c in 0..n {
                let (left, right) = (r * n + c, k * n + c);
                let src = ah[right].clone();
                out[left].add_scaled(&src, s);
            }
        }
    }
    Ok(LinExprMatrix { n, entries: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::parse_matrix;

    #[test]
    fn identity_sandwich_is_identity() {
        let a = parse_matrix("3\n0 x1 x3\nx2 0 1\nx4 1 0\n").unwrap();
        let id = SquareMatrix::identity(3);
        let p = gl_sandwich(&id, &a, &id).unwrap();
        assert!(p.equals(&a));
        assert_eq!(p.to_var_matrix(&a).unwrap(), a);
    }

    #[test]
    fn dimension_mismatch() {
        let a = parse_matrix("2\nx1 0\n0 1\n").unwrap();
        assert!(matches!(
            gl_sandwich(&SquareMatrix::identity(3), &a, &SquareMatrix::identity(2)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn linear_combination_is_canonical() {
        let a = parse_matrix("2\nx1 x2\nx2 1\n").unwrap();
        let g = SquareMatrix::from_rows(vec![vec![1, -1], vec![0, 1]]).unwrap();
        let p = gl_sandwich(&g, &a, &SquareMatrix::identity(2)).unwrap();
        // Row 0 = row0 - row1 = (x1 - x2, x2 - 1).
        assert_eq!(p.get(0, 0).coefficient(1), 1);
        assert_eq!(p.get(0, 0).coefficient(2), -1);
        assert_eq!(p.get(0, 1).constant(), -1);
        assert_eq!(p.get(0, 1).to_string(), "x2 - 1");
        assert!(p.get(0, 0).as_entry().is_none());
    }
}
