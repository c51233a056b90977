//! Grenet's construction for the permanent, the subset construction for the
//! Hamiltonian cycle polynomial, and the fixed matrices used as references.

use crate::algebra::{SquareMatrix, TargetPolynomial};
use crate::error::{Error, Result};
use crate::gadgets::{abp_to_matrix, Abp, AbpEdge};
use crate::matrix::{parse_matrix, parse_matrix_with_grid, substitute, Entry, VarMatrix, VarNaming};

pub const GRENET_7X7: &str = include_str!("../data/grenet7x7.txt");
pub const EXAMPLE_A: &str = include_str!("../data/example_a.txt");
pub const EXAMPLE_G: &str = include_str!("../data/example_g.txt");
pub const EXAMPLE_H: &str = include_str!("../data/example_h.txt");
/// 3x3 matrix with determinant `per_2`, variables `x1..x4 = x11, x12, x21, x22`.
pub const PER2_3X3: &str = include_str!("../data/per2_3x3.txt");
/// `[[3, 0, -2], [0, x, 0], [x, 0, y]]`, determinant `3xy + 2x^2`.
pub const FIG1_C: &str = include_str!("../data/fig1_c.txt");
pub const HC2_EXPLICIT: &str = include_str!("../data/hc2.txt");
pub const HC3_EXPLICIT: &str = include_str!("../data/hc3.txt");

pub fn grenet_7x7() -> VarMatrix {
    parse_matrix(GRENET_7X7).expect("bundled matrix parses")
}

pub fn example_a() -> VarMatrix {
    parse_matrix_with_grid(EXAMPLE_A, 3).expect("bundled matrix parses")
}

fn integer_matrix(text: &str) -> SquareMatrix<i64> {
    let a = parse_matrix(text).expect("bundled matrix parses");
    substitute(&a, &[]).expect("no variables")
}

pub fn example_g() -> SquareMatrix<i64> {
    integer_matrix(EXAMPLE_G)
}

pub fn example_h() -> SquareMatrix<i64> {
    integer_matrix(EXAMPLE_H)
}

pub fn per2_3x3() -> VarMatrix {
    parse_matrix(PER2_3X3).expect("bundled matrix parses")
}

pub fn fig1_c() -> VarMatrix {
    parse_matrix(FIG1_C).expect("bundled matrix parses")
}

/// Largest `m` for which the Grenet program is built (`2^m` vertices).
pub const GRENET_MAX_ORDER: usize = 8;

fn grid_var(m: usize, i: usize, j: usize) -> Entry {
    Entry::Var(((i - 1) * m + j) as u32)
}

/// Vertices are the subsets of `[m]`, ordered by size and then as binary
/// numbers. The edge `I -> I + {j}` carries `x_{|I|+1, j}`, so every
/// permutation is exactly one source-target path. Path value is
/// `(-1)^(m-1) per_m`.
pub fn grenet_abp(m: usize) -> Result<Abp> {
    if m == 0 || m > GRENET_MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "Grenet construction supports 1 <= m <= {GRENET_MAX_ORDER}, got {m}"
        )));
    }
    let mut subsets: Vec<u32> = (0..1u32 << m).collect();
    subsets.sort_by_key(|&s| (s.count_ones(), s));
    let mut index = vec![0usize; 1 << m];
    for (i, &s) in subsets.iter().enumerate() {
        index[s as usize] = i;
    }
    let mut edges = Vec::new();
    for &set in &subsets {
        let row = set.count_ones() as usize + 1;
        for j in 0..m {
            if set & (1 << j) == 0 {
                edges.push(AbpEdge {
                    from: index[set as usize],
                    to: index[(set | 1 << j) as usize],
                    label: grid_var(m, row, j + 1),
                });
            }
        }
    }
    Abp::new(
        1 << m,
        0,
        (1 << m) - 1,
        edges,
        VarNaming::Grid(m as u32),
        (m * m) as u32,
    )
}

/// Largest `m` for the cycle construction.
pub const HC_MAX_ORDER: usize = 6;

/// Program for `HC_{m+1}`: a vertex `(I, i)` for each nonempty `I` in `[m]`
/// and `i` in `I`, ordered by `|I|`, then `I`, then `i`. A path
/// `s, (I_1, a_1), ..., (I_m, a_m), t` is the cycle `(a_1 ... a_m, m+1)`.
pub fn hc_abp(m: usize) -> Result<Abp> {
    if m == 0 || m > HC_MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "cycle construction supports 1 <= m <= {HC_MAX_ORDER}, got {m}"
        )));
    }
    let k = m + 1;
    let mut nodes: Vec<(u32, usize)> = Vec::new();
    for set in 1..1u32 << m {
        for i in 0..m {
            if set & (1 << i) != 0 {
                nodes.push((set, i));
            }
        }
    }
    nodes.sort_by_key(|&(set, i)| (set.count_ones(), set, i));
    let id = |set: u32, i: usize| -> usize {
        1 + nodes.binary_search_by_key(&(set.count_ones(), set, i), |&(s, j)| (s.count_ones(), s, j))
            .expect("vertex exists")
    };
    let t = nodes.len() + 1;
    let full = (1u32 << m) - 1;
    let mut edges = Vec::new();
    for i in 0..m {
        edges.push(AbpEdge {
            from: 0,
            to: id(1 << i, i),
            label: grid_var(k, k, i + 1),
        });
    }
    for &(set, i) in &nodes {
        for j in 0..m {
            if set & (1 << j) == 0 {
                edges.push(AbpEdge {
                    from: id(set, i),
                    to: id(set | 1 << j, j),
                    label: grid_var(k, i + 1, j + 1),
                });
            }
        }
        if set == full {
            edges.push(AbpEdge {
                from: id(set, i),
                to: t,
                label: grid_var(k, i + 1, k),
            });
        }
    }
    Abp::new(t + 1, 0, t, edges, VarNaming::Grid(k as u32), (k * k) as u32)
}

/// Matrix of size `2^m - 1` with determinant `per_m`.
pub fn grenet_matrix(m: usize) -> Result<VarMatrix> {
    abp_to_matrix(&grenet_abp(m)?, &TargetPolynomial::new(crate::algebra::TargetKind::Permanent, m)?.to_multipoly())
}

/// Matrix of size `m 2^(m-1) + 1` with determinant `HC_{m+1}`.
pub fn hc_matrix(m: usize) -> Result<VarMatrix> {
    let target = TargetPolynomial::new(crate::algebra::TargetKind::HamiltonianCycle, m + 1)?;
    abp_to_matrix(&hc_abp(m)?, &target.to_multipoly())
}

/// The hand-made matrices for `HC_2` (2x2) and `HC_3` (3x3).
pub fn explicit_hc_matrix(m: usize) -> Result<VarMatrix> {
    let text = match m {
        2 => HC2_EXPLICIT,
        3 => HC3_EXPLICIT,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "explicit matrices exist for m = 2, 3 only, got {m}"
            )))
        }
    };
    parse_matrix_with_grid(text, m as u32)
}
