//! Candidate support matrices up to row/column permutation and transposition.

mod canonical;
mod report;

use std::collections::HashSet;

use rayon::prelude::*;

pub use canonical::{canonical_form, canonical_form_with, Canonicalizer, Equivalence};
pub use report::{parse_enumeration, write_enumeration};

use crate::algebra::{det_bits, permutations};
use crate::error::{Error, Result};
use crate::matrix::SupportMatrix;

/// One equivalence class: its canonical form and a member with distinct rows
/// and determinant `+det`. The member is the least row-sorted one with
/// distinct rows, with its first two rows swapped when its determinant is
/// negative. It is the canonical form whenever columns are distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSupport {
    pub canonical: SupportMatrix,
    pub representative: SupportMatrix,
    pub det: i64,
}

/// Constraints on generated matrices. Rows are always pairwise distinct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationParams {
    pub n: usize,
    /// Minimum number of ones in every row and column.
    pub min_weight: u32,
    pub distinct_columns: bool,
    /// Keep only matrices with this absolute determinant.
    pub abs_det: Option<i64>,
    pub equivalence: Equivalence,
}

impl EnumerationParams {
    /// The constraints for the `6 x 6` lower-bound argument.
    pub fn candidates(n: usize) -> Self {
        Self {
            n,
            min_weight: 2,
            distinct_columns: true,
            abs_det: Some(6),
            equivalence: Equivalence::RowColumn,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub params: EnumerationParams,
    /// Row-sorted matrices examined.
    pub examined: u64,
    /// Row-sorted matrices passing every filter.
    pub survivors: u64,
    /// Sorted by canonical key.
    pub classes: Vec<CanonicalSupport>,
}

pub const MAX_ENUMERATION_ORDER: usize = 6;

/// All classes of matrices satisfying `params`.
///
/// Matrices are generated with strictly increasing rows and filtered by
/// weights, distinct columns and determinant. A survivor is kept when it is
/// its own canonical form, so every class is emitted exactly once.
pub fn enumerate_supports(params: EnumerationParams) -> Result<Enumeration> {
    let n = params.n;
    if !(1..=MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(Error::SizeLimit(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    let canon = Canonicalizer::new(n)?;
    let rows: Vec<u8> = (0..1u32 << n)
        .filter(|r| r.count_ones() >= params.min_weight)
        .map(|r| r as u8)
        .collect();
    let parts: Vec<(u64, u64, Vec<u64>)> = (0..rows.len())
        .into_par_iter()
        .map(|first| {
            let mut walk = Walk {
                params: &params,
                canon: &canon,
                rows: &rows,
                chosen: [0u8; 8],
                examined: 0,
                survivors: 0,
                found: Vec::new(),
            };
            walk.chosen[0] = rows[first];
            walk.descend(1, first + 1);
            (walk.examined, walk.survivors, walk.found)
        })
        .collect();
    let examined = parts.iter().map(|p| p.0).sum();
    let survivors = parts.iter().map(|p| p.1).sum();
    let mut classes: Vec<CanonicalSupport> = parts
        .into_iter()
        .flat_map(|p| p.2)
        .map(|k| {
            let found = SupportMatrix::from_key(n, k);
            class_of(canon.canonical(&found, params.equivalence), found)
        })
        .collect();
    classes.sort_unstable_by_key(|c| c.canonical.key());
    Ok(Enumeration {
        params,
        examined,
        survivors,
        classes,
    })
}

fn class_of(canonical: SupportMatrix, found: SupportMatrix) -> CanonicalSupport {
    let mut representative = found;
    if representative.det() < 0 && representative.n() >= 2 {
        let mut rows = representative.row_bits().to_vec();
        rows.swap(0, 1);
        representative = SupportMatrix::from_row_bits(canonical.n(), rows).expect("same shape");
    }
    CanonicalSupport {
        det: representative.det() as i64,
        canonical,
        representative,
    }
}

/// The candidate classes for the lower bound: `|det| = 6`, weights at least
/// two, distinct rows and columns, up to row and column permutation.
pub fn enumerate_candidate_supports(n: usize) -> Result<Enumeration> {
    enumerate_supports(EnumerationParams::candidates(n))
}

struct Walk<'a> {
    params: &'a EnumerationParams,
    canon: &'a Canonicalizer,
    rows: &'a [u8],
    chosen: [u8; 8],
    examined: u64,
    survivors: u64,
    found: Vec<u64>,
}

impl Walk<'_> {
    fn descend(&mut self, depth: usize, start: usize) {
        let n = self.params.n;
        if depth == n {
            self.leaf();
            return;
        }
        let left = n - depth;
        for i in start..=self.rows.len().saturating_sub(left) {
            self.chosen[depth] = self.rows[i];
            self.descend(depth + 1, i + 1);
        }
    }

    fn leaf(&mut self) {
        self.examined += 1;
        let n = self.params.n;
        let rows = &self.chosen[..n];
        let mut cols = [0u8; 8];
        for (r, &bits) in rows.iter().enumerate() {
            for (c, col) in cols.iter_mut().enumerate().take(n) {
                *col |= ((bits >> (n - 1 - c)) & 1) << (n - 1 - r);
            }
        }
        let cols = &mut cols[..n];
        if cols.iter().any(|c| c.count_ones() < self.params.min_weight) {
            return;
        }
        if self.params.distinct_columns {
            cols.sort_unstable();
            if cols.windows(2).any(|w| w[0] == w[1]) {
                return;
            }
        }
        if let Some(target) = self.params.abs_det {
            let wide: [u32; 8] = std::array::from_fn(|i| self.chosen[i] as u32);
            if det_bits(&wide, n).abs() != target {
                return;
            }
        }
        self.survivors += 1;
        if self.canon.is_canonical(rows, self.params.equivalence) {
            self.found.push(rows.iter().fold(0u64, |k, &r| (k << n) | r as u64));
        }
    }
}

/// Number of classes of all `n x n` 0/1 matrices, by Burnside's lemma over
/// the group acting on positions.
pub fn count_bipartite_classes(n: usize, equivalence: Equivalence) -> Result<u128> {
    if !(1..=6).contains(&n) {
        return Err(Error::SizeLimit(format!("class count supports 1 <= n <= 6, got {n}")));
    }
    let perms = permutations(n);
    let transposes: &[bool] = match equivalence {
        Equivalence::RowColumn => &[false],
        Equivalence::RowColumnTranspose => &[false, true],
    };
    let mut total: u128 = 0;
    for &t in transposes {
        total += perms
            .par_iter()
            .map(|sigma| {
                perms
                    .iter()
                    .map(|tau| 1u128 << position_cycles(n, sigma, tau, t))
                    .sum::<u128>()
            })
            .sum::<u128>();
    }
    let order = (perms.len() * perms.len() * transposes.len()) as u128;
    if total % order != 0 {
        return Err(Error::Internal("Burnside sum not divisible by the group order".into()));
    }
    Ok(total / order)
}

/// Cycles of the position map `(i, j) -> (sigma(i), tau(j))`, or
/// `(i, j) -> (tau(j), sigma(i))` when transposing.
fn position_cycles(n: usize, sigma: &[usize], tau: &[usize], transpose: bool) -> u32 {
    let mut seen = 0u64;
    let mut cycles = 0;
    for start in 0..n * n {
        if seen >> start & 1 == 1 {
            continue;
        }
        cycles += 1;
        let mut p = start;
        while seen >> p & 1 == 0 {
            seen |= 1 << p;
            let (i, j) = (p / n, p % n);
            let (a, b) = if transpose { (tau[j], sigma[i]) } else { (sigma[i], tau[j]) };
            p = a * n + b;
        }
    }
    cycles
}

/// Class count by canonicalizing every `n x n` matrix (`n <= 4`).
pub fn count_classes_exhaustive(n: usize, equivalence: Equivalence) -> Result<usize> {
    if !(1..=4).contains(&n) {
        return Err(Error::SizeLimit(format!("exhaustive class count supports 1 <= n <= 4, got {n}")));
    }
    let canon = Canonicalizer::new(n)?;
    let mut keys = HashSet::new();
    for key in 0..1u64 << (n * n) {
        keys.insert(canon.canonical_key(&SupportMatrix::from_key(n, key), equivalence));
    }
    Ok(keys.len())
}
