//! Determinant kernels over the integers, over `F_p`, and symbolically.

use std::collections::HashMap;
use std::ops::Index;

use super::field::{FieldElement, PrimeField};
use super::poly::MultiPoly;
use crate::error::{Error, Result};
use crate::matrix::{Entry, VarMatrix};

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.n + c] = v;
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(|r| r.to_vec()).collect()
    }
}

impl SquareMatrix<i64> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| (r == c) as i64)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.n, other.n
            )));
        }
        Ok(Self::from_fn(self.n, |r, c| {
            (0..self.n).map(|k| self[(r, k)] * other[(k, c)]).sum()
        }))
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.n + c]
    }
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
///
/// Every intermediate value is a minor of the input, and each update
/// multiplies two such minors before an exact division, all in `i128` with
/// overflow checks. For 0/1 (or `|a| <= 1`) entries this is safe through
/// `n = 30` (Hadamard: `|minor| <= k^{k/2}`); larger entries shrink the range
/// and an [`Error::Overflow`] is returned rather than a wrong value.
pub fn det_int(m: &SquareMatrix<i64>) -> Result<i128> {
    let n = m.n();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<i128> = m.data.iter().map(|&v| v as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    let ovf = || Error::Overflow("det_int");
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                return Ok(0);
            };
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let lead = a[i * n + k];
            for j in k + 1..n {
                let t = a[i * n + j]
                    .checked_mul(pivot)
                    .and_then(|x| x.checked_sub(lead.checked_mul(a[k * n + j])?))
                    .ok_or_else(ovf)?;
                a[i * n + j] = t / prev;
            }
            a[i * n + k] = 0;
        }
        prev = pivot;
    }
    Ok(sign * a[n * n - 1])
}

/// Determinant over `F_p` by Gaussian elimination with inverse pivots.
pub fn det_mod_p(field: &PrimeField, m: &SquareMatrix<FieldElement>) -> FieldElement {
    let n = m.n();
    let mut a = m.data.clone();
    let mut det = FieldElement::ONE;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
            return FieldElement::ZERO;
        };
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            det = field.neg(det);
        }
        let pivot = a[k * n + k];
        det = field.mul(det, pivot);
        let inv = field.inv(pivot).expect("nonzero pivot");
        for i in k + 1..n {
            let factor = field.mul(a[i * n + k], inv);
            if factor.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let t = field.mul(factor, a[k * n + j]);
                a[i * n + j] = field.sub(a[i * n + j], t);
            }
        }
    }
    det
}

/// Reduces an integer matrix into `F_p`.
pub fn reduce_mod_p(field: &PrimeField, m: &SquareMatrix<i64>) -> SquareMatrix<FieldElement> {
    m.map(|&v| field.from_i64(v))
}

/// Determinant of an `n x n` 0/1 matrix given as row bitmasks (column `c`
/// at bit `n-1-c`), `n <= 8`. Same Bareiss scheme as [`det_int`] in `i64`.
pub fn det_bits(rows: &[u32], n: usize) -> i64 {
    debug_assert!(n <= 8 && rows.len() >= n);
    if n == 0 {
        return 1;
    }
    let mut a = [[0i64; 8]; 8];
    for r in 0..n {
        for c in 0..n {
            a[r][c] = ((rows[r] >> (n - 1 - c)) & 1) as i64;
        }
    }
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        let pivot = a[k][k];
        for i in k + 1..n {
            let lead = a[i][k];
            for j in k + 1..n {
                a[i][j] = (a[i][j] * pivot - lead * a[k][j]) / prev;
            }
        }
        prev = pivot;
    }
    sign * a[n - 1][n - 1]
}

/// Largest determinant over all `n x n` 0/1 matrices, by exhaustive search.
pub fn max_det_exhaustive(n: usize) -> Result<i64> {
    if n == 0 || n > 5 {
        return Err(Error::SizeLimit(format!(
            "exhaustive maximum determinant supports 1 <= n <= 5, got {n}"
        )));
    }
    let row_mask = (1u32 << n) - 1;
    let total = 1u64 << (n * n);
    let mut best = i64::MIN;
    let mut rows = [0u32; 8];
    for code in 0..total {
        for (r, slot) in rows.iter_mut().enumerate().take(n) {
            *slot = ((code >> (r * n)) as u32) & row_mask;
        }
        best = best.max(det_bits(&rows, n));
    }
    Ok(best)
}

/// Upper bound on the number of terms [`det_symbolic`] will expand.
pub const SYMBOLIC_EXPANSION_LIMIT: usize = 8;

fn entry_is_zero(e: &Entry) -> bool {
    matches!(e, Entry::Zero | Entry::Int(0))
}

fn multiply_entry(term: &mut (Vec<u16>, i128), e: &Entry) {
    match *e {
        Entry::Zero => term.1 = 0,
        Entry::One => {}
        Entry::Int(c) => term.1 *= c as i128,
        Entry::Var(k) => term.0[k as usize - 1] += 1,
    }
}

/// Exact determinant by expansion over permutations, `sum sgn(pi) prod A[i, pi(i)]`.
///
/// Restricted to `n <= 8`; larger matrices should go through
/// [`det_symbolic_sparse`] or randomized evaluation.
pub fn det_symbolic(a: &VarMatrix) -> Result<MultiPoly> {
    let n = a.n();
    if n > SYMBOLIC_EXPANSION_LIMIT {
        return Err(Error::SizeLimit(format!(
            "symbolic expansion is limited to n <= {SYMBOLIC_EXPANSION_LIMIT} (got {n}); \
             use randomized verification or the sparse route"
        )));
    }
    let nvars = a.var_count() as usize;
    let mut out = MultiPoly::zero(nvars);
    let mut used = vec![false; n];
    let mut term = (vec![0u16; nvars], 1i128);
    expand(a, 0, &mut used, &mut term, 1, &mut out);
    Ok(out)
}

fn expand(
    a: &VarMatrix,
    row: usize,
    used: &mut [bool],
    term: &mut (Vec<u16>, i128),
    sign: i128,
    out: &mut MultiPoly,
) {
    let n = a.n();
    if row == n {
        out.add_term(term.0.clone(), sign * term.1);
        return;
    }
    for col in 0..n {
        let e = a.get(row, col);
        if used[col] || entry_is_zero(e) {
            continue;
        }
        // Columns already used to the right of `col` each form an inversion.
        let inversions = used[col + 1..].iter().filter(|&&u| u).count();
        let s = if inversions % 2 == 0 { sign } else { -sign };
        let saved = term.clone();
        multiply_entry(term, e);
        used[col] = true;
        expand(a, row + 1, used, term, s, out);
        used[col] = false;
        *term = saved;
    }
}

/// Exact determinant by dynamic programming over used-column subsets.
///
/// Exponential in `n` only through the number of reachable column subsets,
/// so it is practical for sparse matrices well beyond the expansion limit.
/// Supports `n <= 24`.
pub fn det_symbolic_sparse(a: &VarMatrix) -> Result<MultiPoly> {
    let n = a.n();
    if n > 24 {
        return Err(Error::SizeLimit(format!(
            "subset dynamic program supports n <= 24, got {n}"
        )));
    }
    let nvars = a.var_count() as usize;
    let mut layer: HashMap<u32, MultiPoly> = HashMap::new();
    layer.insert(0, MultiPoly::constant(nvars, 1));
    for row in 0..n {
        let mut next: HashMap<u32, MultiPoly> = HashMap::new();
        for (mask, poly) in &layer {
            for col in 0..n {
                let e = a.get(row, col);
                if mask & (1 << col) != 0 || entry_is_zero(e) {
                    continue;
                }
                let inversions = (mask >> (col + 1)).count_ones();
                let mut contrib = match *e {
                    Entry::Var(k) => poly.mul_var(k as usize),
                    Entry::One => poly.clone(),
                    Entry::Int(c) => poly.scale(c as i128),
                    Entry::Zero => unreachable!(),
                };
                if inversions % 2 == 1 {
                    contrib = contrib.neg();
                }
                next.entry(mask | (1 << col))
                    .or_insert_with(|| MultiPoly::zero(nvars))
                    .add_assign(&contrib);
            }
        }
        layer = next;
    }
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    Ok(layer.remove(&full).unwrap_or_else(|| MultiPoly::zero(nvars)))
}
