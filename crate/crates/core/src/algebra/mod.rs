//! Exact and modular algebra kernels.

mod det;
mod field;
mod poly;
mod target;

pub use det::{
    det_bits, det_int, det_mod_p, det_symbolic, det_symbolic_sparse, max_det_exhaustive,
    reduce_mod_p, SquareMatrix, SYMBOLIC_EXPANSION_LIMIT,
};
pub use field::{is_prime, FieldElement, PrimeField, MERSENNE_61};
pub use poly::{interpolate, Monomial, MultiPoly, UniPoly};
pub use target::{TargetKind, TargetPolynomial};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// `+1` for even permutations, `-1` for odd.
pub fn permutation_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// True when `p` is a single cycle through all points.
pub fn is_full_cycle(p: &[usize]) -> bool {
    if p.is_empty() {
        return false;
    }
    let mut i = p[0];
    let mut len = 1;
    while i != 0 {
        i = p[i];
        len += 1;
        if len > p.len() {
            return false;
        }
    }
    len == p.len()
}

/// Checks that `p` is a permutation of `0..n`.
pub fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in p {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}
