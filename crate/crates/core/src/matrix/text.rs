//! The matrix text format.
//!
//! ```text
//! <n> <binary|integer>
//! <n tokens>      (n lines)
//! ```
//!
//! Tokens are `0`, `1`, `x<k>` (sequential), `x<i>_<j>` (grid) or, in the
//! integer flavor, any signed integer. The flavor may be omitted from the
//! header, in which case it is `binary`. Output is always written with the
//! flavor, single spaces, `\n` endings and no trailing whitespace.

use super::{Entry, Flavor, VarMatrix, VarNaming};
use crate::error::{Error, Result};

/// A variable as written in a file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarToken {
    Sequential(u32),
    Grid(u32, u32),
}

/// Parses `x<k>` or `x<i>_<j>`; `None` if `tok` is not a variable token.
pub fn parse_var_token(tok: &str) -> Option<VarToken> {
    let rest = tok.strip_prefix('x')?;
    let number = |s: &str| -> Option<u32> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok().filter(|&v| v >= 1)
    };
    match rest.split_once('_') {
        Some((i, j)) => Some(VarToken::Grid(number(i)?, number(j)?)),
        None => Some(VarToken::Sequential(number(rest)?)),
    }
}

enum RawEntry {
    Const(i64),
    Var(VarToken),
}

/// Parses a matrix, inferring the grid size from the largest grid index.
pub fn parse_matrix(text: &str) -> Result<VarMatrix> {
    parse_impl(text, None)
}

/// Parses a matrix whose grid-form variables live in an `m x m` grid, even
/// if the largest index present is smaller.
pub fn parse_matrix_with_grid(text: &str, m: u32) -> Result<VarMatrix> {
    parse_impl(text, Some(m))
}

fn parse_impl(text: &str, grid_hint: Option<u32>) -> Result<VarMatrix> {
    let mut lines = text.split('\n').enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let mut head = header.split_whitespace();
    let n_tok = head
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing matrix size"))?;
    let n: usize = n_tok
        .parse()
        .map_err(|_| Error::parse(1, 1, format!("bad matrix size `{n_tok}`")))?;
    if n == 0 {
        return Err(Error::parse(1, 1, "matrix size must be positive"));
    }
    let flavor = match head.next() {
        None | Some("binary") => Flavor::Binary,
        Some("integer") => Flavor::Integer,
        Some(other) => {
            let col = header.find(other).unwrap_or(0) + 1;
            return Err(Error::parse(1, col, format!("unknown flavor `{other}`")));
        }
    };
    if let Some(extra) = head.next() {
        let col = header.rfind(extra).unwrap_or(0) + 1;
        return Err(Error::parse(1, col, format!("unexpected `{extra}` in header")));
    }

    let mut raw: Vec<Vec<RawEntry>> = Vec::with_capacity(n);
    let mut seen_seq = false;
    let mut seen_grid = false;
    for (idx, line) in lines.by_ref() {
        let lineno = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if raw.len() == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(lineno, 1, format!("more than {n} rows")));
        }
        let mut row = Vec::with_capacity(n);
        let mut pos = 0;
        for tok in line.split_whitespace() {
            let col = line[pos..].find(tok).map(|o| o + pos).unwrap_or(pos) + 1;
            pos = col - 1 + tok.len();
            let entry = if let Some(v) = parse_var_token(tok) {
                match v {
                    VarToken::Sequential(_) => seen_seq = true,
                    VarToken::Grid(..) => seen_grid = true,
                }
                RawEntry::Var(v)
            } else if let Ok(c) = tok.parse::<i64>() {
                if flavor == Flavor::Binary && c != 0 && c != 1 {
                    return Err(Error::parse(
                        lineno,
                        col,
                        format!("integer entry `{tok}` in a binary matrix"),
                    ));
                }
                RawEntry::Const(c)
            } else {
                return Err(Error::parse(lineno, col, format!("unknown token `{tok}`")));
            };
            row.push(entry);
        }
        if row.len() != n {
            return Err(Error::parse(
                lineno,
                1,
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
        raw.push(row);
    }
    if raw.len() != n {
        return Err(Error::parse(
            raw.len() + 2,
            1,
            format!("expected {n} rows, found {}", raw.len()),
        ));
    }
    if seen_seq && seen_grid {
        return Err(Error::parse(
            2,
            1,
            "mixed `x<k>` and `x<i>_<j>` variable forms",
        ));
    }

    let (naming, var_count) = if seen_grid || grid_hint.is_some() && !seen_seq {
        let max_index = raw
            .iter()
            .flatten()
            .filter_map(|e| match e {
                RawEntry::Var(VarToken::Grid(i, j)) => Some((*i).max(*j)),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let m = match grid_hint {
            Some(m) if m < max_index => {
                return Err(Error::parse(
                    2,
                    1,
                    format!("grid index {max_index} exceeds grid size {m}"),
                ))
            }
            Some(m) => m,
            None => max_index,
        };
        (VarNaming::Grid(m), m * m)
    } else {
        let max_k = raw
            .iter()
            .flatten()
            .filter_map(|e| match e {
                RawEntry::Var(VarToken::Sequential(k)) => Some(*k),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        (VarNaming::Sequential, max_k)
    };

    let rows = raw
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    RawEntry::Const(0) => Entry::Zero,
                    RawEntry::Const(1) => Entry::One,
                    RawEntry::Const(c) => Entry::Int(c),
                    RawEntry::Var(VarToken::Sequential(k)) => Entry::Var(k),
                    RawEntry::Var(VarToken::Grid(i, j)) => match naming {
                        VarNaming::Grid(m) => Entry::Var((i - 1) * m + j),
                        VarNaming::Sequential => unreachable!(),
                    },
                })
                .collect()
        })
        .collect();
    VarMatrix::new(flavor, naming, var_count, rows)
}

fn entry_token(a: &VarMatrix, e: &Entry) -> String {
    match *e {
        Entry::Zero => "0".into(),
        Entry::One => "1".into(),
        Entry::Int(c) => c.to_string(),
        Entry::Var(k) => a.var_name(k),
    }
}

pub fn serialize_matrix(a: &VarMatrix) -> String {
    let mut out = format!("{} {}\n", a.n(), a.flavor());
    for row in a.rows() {
        let toks: Vec<String> = row.iter().map(|e| entry_token(a, e)).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::GRENET_7X7;
    use proptest::prelude::*;

    #[test]
    fn parses_sequential_example() {
        let a = parse_matrix("3\n0 x1 x3\nx2 0 1\nx4 1 0").unwrap();
        assert_eq!(a.n(), 3);
        assert_eq!(a.var_count(), 4);
        assert_eq!(a.naming(), VarNaming::Sequential);
        assert_eq!(*a.get(0, 1), Entry::Var(1));
        assert_eq!(*a.get(1, 0), Entry::Var(2));
        assert_eq!(*a.get(2, 2), Entry::Zero);
    }

    #[test]
    fn parses_integer_flavor() {
        let a = parse_matrix("1 integer\n-2").unwrap();
        assert_eq!(a.flavor(), Flavor::Integer);
        assert_eq!(*a.get(0, 0), Entry::Int(-2));
    }

    #[test]
    fn grid_names_map_row_major() {
        let a = parse_matrix("2 binary\nx1_2 0\n0 x2_1\n").unwrap();
        assert_eq!(a.naming(), VarNaming::Grid(2));
        assert_eq!(*a.get(0, 0), Entry::Var(2));
        assert_eq!(*a.get(1, 1), Entry::Var(3));
        let hinted = parse_matrix_with_grid("1\nx1_1\n", 3).unwrap();
        assert_eq!(hinted.var_count(), 9);
    }

    #[test]
    fn grenet_file_round_trips() {
        let a = parse_matrix(GRENET_7X7).unwrap();
        assert_eq!(serialize_matrix(&a), GRENET_7X7);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let err = parse_matrix("2\n0 1\n1 y\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 3, .. }), "{err}");
        let err = parse_matrix("2\n0 1 1\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_matrix("2 binary\n0 5\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 3, .. }), "{err}");
        let err = parse_matrix("2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse_matrix("2\nx1 x1_1\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        assert!(parse_matrix("2 ternary\n0 0\n0 0\n").is_err());
        assert!(parse_matrix("2\nx0 0\n0 0\n").is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = VarMatrix> {
        (1usize..6, prop::bool::ANY).prop_flat_map(|(n, integer)| {
            let entry = if integer {
                prop_oneof![
                    Just(Entry::Zero),
                    Just(Entry::One),
                    (1u32..5).prop_map(Entry::Var),
                    (-20i64..20).prop_map(Entry::Int)
                ]
                .boxed()
            } else {
                prop_oneof![Just(Entry::Zero), Just(Entry::One), (1u32..5).prop_map(Entry::Var)].boxed()
            };
            prop::collection::vec(prop::collection::vec(entry, n), n).prop_map(move |rows| {
                let flavor = if integer { Flavor::Integer } else { Flavor::Binary };
                VarMatrix::new(flavor, VarNaming::Sequential, 4, rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(a in arb_matrix()) {
            let text = serialize_matrix(&a);
            let back = parse_matrix(&text).unwrap();
            // var_count is re-inferred from the largest index present.
            prop_assert_eq!(back.to_rows(), a.to_rows());
            prop_assert_eq!(back.flavor(), a.flavor());
            prop_assert_eq!(serialize_matrix(&back), text);
        }
    }
}
