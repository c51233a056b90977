use crate::algebra::{is_permutation, FieldElement, PrimeField, SquareMatrix};
use crate::error::{Error, Result};

use super::{CandidateAssignment, Entry, Flavor, SupportMatrix, VarMatrix, VarNaming};

/// Puts `x_k` on every position of the `k`-th set; remaining ones stay `1`.
pub fn place_variables(b: &SupportMatrix, asgn: &CandidateAssignment) -> Result<VarMatrix> {
    let ids: Vec<u32> = (1..=asgn.len() as u32).collect();
    place_variables_as(b, asgn, VarNaming::Sequential, asgn.len() as u32, &ids)
}

/// Like [`place_variables`] but the `k`-th set receives variable `var_ids[k]`
/// in a matrix with the given naming and variable count.
pub fn place_variables_as(
    b: &SupportMatrix,
    asgn: &CandidateAssignment,
    naming: VarNaming,
    var_count: u32,
    var_ids: &[u32],
) -> Result<VarMatrix> {
    if var_ids.len() != asgn.len() {
        return Err(Error::Dimension(format!(
            "{} variable ids for {} position sets",
            var_ids.len(),
            asgn.len()
        )));
    }
    let n = b.n();
    let mut rows: Vec<Vec<Entry>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if b.get(r, c) { Entry::One } else { Entry::Zero })
                .collect()
        })
        .collect();
    for (set, &k) in asgn.sets().iter().zip(var_ids) {
        for p in set.positions() {
            if p.row >= n || p.col >= n {
                return Err(Error::Placement(format!("position {p} outside a {n}x{n} matrix")));
            }
            if !b.get(p.row, p.col) {
                return Err(Error::Placement(format!("position {p} is a zero of the support")));
            }
            rows[p.row][p.col] = Entry::Var(k);
        }
    }
    VarMatrix::new(Flavor::Binary, naming, var_count, rows)
}

fn check_point_len(a: &VarMatrix, len: usize) -> Result<()> {
    if len != a.var_count() as usize {
        return Err(Error::Dimension(format!(
            "point has {len} values, matrix has {} variables",
            a.var_count()
        )));
    }
    Ok(())
}

/// Replaces `x_k` by `point[k-1]`.
pub fn substitute(a: &VarMatrix, point: &[i64]) -> Result<SquareMatrix<i64>> {
    check_point_len(a, point.len())?;
    Ok(SquareMatrix::from_fn(a.n(), |r, c| match *a.get(r, c) {
        Entry::Zero => 0,
        Entry::One => 1,
        Entry::Int(v) => v,
        Entry::Var(k) => point[k as usize - 1],
    }))
}

pub fn substitute_mod(
    a: &VarMatrix,
    field: &PrimeField,
    point: &[FieldElement],
) -> Result<SquareMatrix<FieldElement>> {
    check_point_len(a, point.len())?;
    Ok(SquareMatrix::from_fn(a.n(), |r, c| match *a.get(r, c) {
        Entry::Zero => FieldElement::ZERO,
        Entry::One => FieldElement::ONE,
        Entry::Int(v) => field.from_i64(v),
        Entry::Var(k) => point[k as usize - 1],
    }))
}

/// Transposes first when `transpose` is set, then returns the matrix whose
/// entry `(i, j)` is the source entry `(row_perm[i], col_perm[j])`.
pub fn apply_equivalence(
    b: &SupportMatrix,
    row_perm: &[usize],
    col_perm: &[usize],
    transpose: bool,
) -> Result<SupportMatrix> {
    let n = b.n();
    if !is_permutation(row_perm, n) {
        return Err(Error::Permutation(format!("row map {row_perm:?} on {n} points")));
    }
    if !is_permutation(col_perm, n) {
        return Err(Error::Permutation(format!("column map {col_perm:?} on {n} points")));
    }
    let src = if transpose { b.transpose() } else { b.clone() };
    let mut out = SupportMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if src.get(row_perm[i], col_perm[j]) {
                out.set(i, j, true);
            }
        }
    }
    Ok(out)
}

/// Relabels `x_{ij}` as `x_{sigma(i) tau(j)}`, then as `x_{ji}` if
/// `transpose` is set. `sigma`, `tau` are 0-based permutations of `0..m`
/// and the matrix must carry `m^2` variables numbered row-major.
pub fn permute_target_variables(
    a: &VarMatrix,
    sigma: &[usize],
    tau: &[usize],
    transpose: bool,
) -> Result<VarMatrix> {
    let m = sigma.len();
    if a.var_count() as usize != m * m {
        return Err(Error::InvalidArgument(format!(
            "matrix has {} variables, expected {} for an {m}x{m} grid",
            a.var_count(),
            m * m
        )));
    }
    if !is_permutation(sigma, m) || !is_permutation(tau, m) {
        return Err(Error::Permutation(format!("{sigma:?}, {tau:?} on {m} points")));
    }
    let relabel = |k: u32| -> u32 {
        let k = k as usize - 1;
        let (i, j) = (sigma[k / m], tau[k % m]);
        let (i, j) = if transpose { (j, i) } else { (i, j) };
        (i * m + j + 1) as u32
    };
    let rows = a
        .rows()
        .map(|row| {
            row.iter()
                .map(|e| match *e {
                    Entry::Var(k) => Entry::Var(relabel(k)),
                    other => other,
                })
                .collect()
        })
        .collect();
    VarMatrix::new(a.flavor(), a.naming(), a.var_count(), rows)
}
