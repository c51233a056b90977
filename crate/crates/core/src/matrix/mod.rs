//! Variable matrices, their 0/1 supports, and position bookkeeping.

mod linexpr;
mod ops;
mod text;

use std::fmt;

use crate::algebra::{det_bits, det_int, SquareMatrix};
use crate::error::{Error, Result};

pub use linexpr::{gl_sandwich, LinExpr, LinExprMatrix};
pub use ops::{apply_equivalence, permute_target_variables, place_variables, place_variables_as, substitute, substitute_mod};
pub use text::{parse_matrix, parse_matrix_with_grid, parse_var_token, serialize_matrix, VarToken};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    Zero,
    One,
    /// Variable `x_k`, `k >= 1`.
    Var(u32),
    /// Arbitrary integer, only in the integer flavor.
    Int(i64),
}

impl Entry {
    pub fn is_zero(&self) -> bool {
        matches!(self, Entry::Zero | Entry::Int(0))
    }

    fn normalized(self) -> Self {
        match self {
            Entry::Int(0) => Entry::Zero,
            Entry::Int(1) => Entry::One,
            e => e,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Entries in `{0, 1, variables}`.
    Binary,
    /// Entries are variables or arbitrary integers.
    Integer,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Binary => "binary",
            Flavor::Integer => "integer",
        })
    }
}

/// How variables are written. Internally they are always numbered
/// `1..=var_count`; `Grid(m)` renders `x_k` as `x<i>_<j>` with
/// `k = (i-1)*m + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarNaming {
    Sequential,
    Grid(u32),
}

impl VarNaming {
    pub fn name(&self, k: u32) -> String {
        match *self {
            VarNaming::Sequential => format!("x{k}"),
            VarNaming::Grid(m) => format!("x{}_{}", (k - 1) / m + 1, (k - 1) % m + 1),
        }
    }
}

/// A square matrix over `{0, 1, integers, variables}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarMatrix {
    n: usize,
    flavor: Flavor,
    naming: VarNaming,
    var_count: u32,
    entries: Vec<Entry>,
}

impl VarMatrix {
    pub fn new(
        flavor: Flavor,
        naming: VarNaming,
        var_count: u32,
        rows: Vec<Vec<Entry>>,
    ) -> Result<Self> {
        let n = rows.len();
        if let VarNaming::Grid(m) = naming {
            if var_count != m * m {
                return Err(Error::InvalidArgument(format!(
                    "grid naming with m = {m} requires {} variables, got {var_count}",
                    m * m
                )));
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            for e in row {
                let e = e.normalized();
                match e {
                    Entry::Int(c) if flavor == Flavor::Binary => {
                        return Err(Error::Flavor(format!(
                            "integer entry {c} in a binary matrix"
                        )))
                    }
                    Entry::Var(k) if k == 0 || k > var_count => {
                        return Err(Error::InvalidArgument(format!(
                            "variable index {k} outside 1..={var_count}"
                        )))
                    }
                    _ => {}
                }
                entries.push(e);
            }
        }
        Ok(Self {
            n,
            flavor,
            naming,
            var_count,
            entries,
        })
    }

    /// Binary matrix with sequential variables, `var_count` taken from the
    /// largest index present.
    pub fn binary(rows: Vec<Vec<Entry>>) -> Result<Self> {
        let var_count = max_var(&rows);
        Self::new(Flavor::Binary, VarNaming::Sequential, var_count, rows)
    }

    /// Integer-flavor matrix with sequential variables.
    pub fn integer(rows: Vec<Vec<Entry>>) -> Result<Self> {
        let var_count = max_var(&rows);
        Self::new(Flavor::Integer, VarNaming::Sequential, var_count, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn naming(&self) -> VarNaming {
        self.naming
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn get(&self, r: usize, c: usize) -> &Entry {
        &self.entries[r * self.n + c]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Entry]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<Entry>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn var_name(&self, k: u32) -> String {
        self.naming.name(k)
    }

    /// Positions holding `x_k`.
    pub fn positions_of(&self, k: u32) -> PositionSet {
        let mut out = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if self.entries[r * self.n + c] == Entry::Var(k) {
                    out.push(Position::new(r, c));
                }
            }
        }
        PositionSet { positions: out }
    }

    /// Reinterprets the matrix under a different flavor or naming.
    pub fn with_flavor(&self, flavor: Flavor) -> Result<Self> {
        Self::new(flavor, self.naming, self.var_count, self.to_rows())
    }

    pub fn with_naming(&self, naming: VarNaming, var_count: u32) -> Result<Self> {
        Self::new(self.flavor, naming, var_count, self.to_rows())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .map(|i| self.entries[(i % n) * n + i / n])
            .collect();
        Self {
            entries,
            ..self.clone()
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.n {
            self.entries.swap(a * self.n + c, b * self.n + c);
        }
    }

    /// Number of entries that are not zero.
    pub fn nonzeros(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    /// The 0/1 matrix obtained by setting every variable to 1.
    pub fn support(&self) -> Result<SupportMatrix> {
        if self.flavor != Flavor::Binary {
            return Err(Error::Flavor(
                "support is only defined for binary variable matrices".into(),
            ));
        }
        if self.n > 32 {
            return Err(Error::SizeLimit(format!(
                "support matrices hold at most 32 columns, got {}",
                self.n
            )));
        }
        let mut b = SupportMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                if !self.get(r, c).is_zero() {
                    b.set(r, c, true);
                }
            }
        }
        Ok(b)
    }
}

fn max_var(rows: &[Vec<Entry>]) -> u32 {
    rows.iter()
        .flatten()
        .filter_map(|e| match e {
            Entry::Var(k) => Some(*k),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// A matrix position, 0-based internally; displayed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col + 1)
    }
}

/// A sorted, duplicate-free set of positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionSet {
    positions: Vec<Position>,
}

impl PositionSet {
    pub fn new(mut positions: Vec<Position>) -> Result<Self> {
        positions.sort();
        if positions.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Placement("duplicate position in set".into()));
        }
        Ok(Self { positions })
    }

    /// Positions whose bit `row * n + col` is set.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let positions = (0..n * n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| Position::new(i / n, i % n))
            .collect();
        Self { positions }
    }

    pub fn mask(&self, n: usize) -> u64 {
        self.positions
            .iter()
            .fold(0u64, |m, p| m | 1 << (p.row * n + p.col))
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, p: Position) -> bool {
        self.positions.binary_search(&p).is_ok()
    }

    pub fn is_disjoint(&self, other: &PositionSet) -> bool {
        self.positions.iter().all(|p| !other.contains(*p))
    }
}

impl fmt::Display for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.positions.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// One position set per variable, pairwise disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateAssignment {
    sets: Vec<PositionSet>,
}

impl CandidateAssignment {
    pub fn new(sets: Vec<PositionSet>) -> Result<Self> {
        for i in 0..sets.len() {
            for j in 0..i {
                if !sets[i].is_disjoint(&sets[j]) {
                    return Err(Error::Placement(format!(
                        "sets for x{} and x{} overlap",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Self { sets })
    }

    /// Reads off where each variable `x_1..x_{var_count}` sits in `a`.
    pub fn read_off(a: &VarMatrix) -> Self {
        Self {
            sets: (1..=a.var_count()).map(|k| a.positions_of(k)).collect(),
        }
    }

    pub fn sets(&self) -> &[PositionSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// A 0/1 square matrix stored as row bitmasks; column `c` is bit `n-1-c`,
/// so numeric order of a row equals lexicographic order of its bits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportMatrix {
    n: usize,
    rows: Vec<u32>,
}

impl SupportMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= 32, "support matrices hold at most 32 columns");
        Self {
            n,
            rows: vec![0; n],
        }
    }

    pub fn from_row_bits(n: usize, rows: Vec<u32>) -> Result<Self> {
        if n > 32 || rows.len() != n {
            return Err(Error::Dimension(format!(
                "expected {n} rows of at most 32 bits, got {}",
                rows.len()
            )));
        }
        if n < 32 && rows.iter().any(|&r| r >> n != 0) {
            return Err(Error::Dimension("row has bits beyond column n".into()));
        }
        Ok(Self { n, rows })
    }

    pub fn from_grid(grid: &[Vec<u8>]) -> Result<Self> {
        let n = grid.len();
        let mut b = Self::zeros(n);
        for (r, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!("row {} is ragged", r + 1)));
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => b.set(r, c, true),
                    _ => return Err(Error::InvalidArgument(format!("entry {v} is not 0/1"))),
                }
            }
        }
        Ok(b)
    }

    /// Inverse of [`SupportMatrix::key`].
    pub fn from_key(n: usize, key: u64) -> Self {
        let mask = (1u64 << n) - 1;
        let rows = (0..n)
            .map(|r| ((key >> ((n - 1 - r) * n)) & mask) as u32)
            .collect();
        Self { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_bits(&self) -> &[u32] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r] >> (self.n - 1 - c) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let bit = 1 << (self.n - 1 - c);
        if v {
            self.rows[r] |= bit;
        } else {
            self.rows[r] &= !bit;
        }
    }

    /// Positions of all ones, row-major.
    pub fn ones(&self) -> Vec<Position> {
        let mut out = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if self.get(r, c) {
                    out.push(Position::new(r, c));
                }
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn row_weight(&self, r: usize) -> u32 {
        self.rows[r].count_ones()
    }

    pub fn col_weight(&self, c: usize) -> u32 {
        (0..self.n).filter(|&r| self.get(r, c)).count() as u32
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn to_int_matrix(&self) -> SquareMatrix<i64> {
        SquareMatrix::from_fn(self.n, |r, c| self.get(r, c) as i64)
    }

    pub fn det(&self) -> i128 {
        if self.n <= 8 {
            det_bits(&self.rows, self.n) as i128
        } else {
            det_int(&self.to_int_matrix()).expect("0/1 determinant within range")
        }
    }

    /// Rows concatenated, row 0 most significant (`n <= 8`).
    pub fn key(&self) -> u64 {
        assert!(self.n <= 8, "packed keys need n <= 8");
        self.rows
            .iter()
            .fold(0u64, |k, &r| (k << self.n) | r as u64)
    }

    /// Row-major `0`/`1` characters.
    pub fn bitstring(&self) -> String {
        let mut s = String::with_capacity(self.n * self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
        }
        s
    }

    pub fn from_bitstring(n: usize, s: &str) -> Result<Self> {
        if s.len() != n * n {
            return Err(Error::Dimension(format!(
                "bitstring of length {} for a {n}x{n} matrix",
                s.len()
            )));
        }
        let mut b = Self::zeros(n);
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => b.set(i / n, i % n, true),
                _ => return Err(Error::InvalidArgument(format!("bad bit `{ch}`"))),
            }
        }
        Ok(b)
    }

    /// As a binary variable matrix without variables.
    pub fn to_var_matrix(&self) -> VarMatrix {
        let rows = (0..self.n)
            .map(|r| {
                (0..self.n)
                    .map(|c| if self.get(r, c) { Entry::One } else { Entry::Zero })
                    .collect()
            })
            .collect();
        VarMatrix::new(Flavor::Binary, VarNaming::Sequential, 0, rows).expect("valid 0/1 matrix")
    }
}

impl fmt::Display for SupportMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            let row: Vec<&str> = (0..self.n)
                .map(|c| if self.get(r, c) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
