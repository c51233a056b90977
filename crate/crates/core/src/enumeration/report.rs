use std::io::Write;

use super::{Enumeration, Equivalence};
use crate::error::{Error, Result};
use crate::matrix::SupportMatrix;

fn equivalence_name(e: Equivalence) -> &'static str {
    match e {
        Equivalence::RowColumn => "rows-columns",
        Equivalence::RowColumnTranspose => "rows-columns-transpose",
    }
}

/// Header line, then `<row-major bitstring> <det>` per class.
pub fn write_enumeration(e: &Enumeration, out: &mut impl Write) -> Result<()> {
    let p = &e.params;
    writeln!(
        out,
        "# n={} min_weight={} distinct_rows=true distinct_columns={} abs_det={} equivalence={} examined={} survivors={} classes={}",
        p.n,
        p.min_weight,
        p.distinct_columns,
        p.abs_det.map_or("any".to_string(), |d| d.to_string()),
        equivalence_name(p.equivalence),
        e.examined,
        e.survivors,
        e.classes.len()
    )?;
    for c in &e.classes {
        writeln!(out, "{} {}", c.representative.bitstring(), c.det)?;
    }
    Ok(())
}

/// Reads the matrices of an enumeration file, checking each stated determinant.
pub fn parse_enumeration(text: &str, n: usize) -> Result<Vec<SupportMatrix>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (Some(bits), Some(det), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::parse(i + 1, 1, "expected `<bitstring> <det>`"));
        };
        let b = SupportMatrix::from_bitstring(n, bits).map_err(|e| Error::parse(i + 1, 1, e.to_string()))?;
        let det: i128 = det
            .parse()
            .map_err(|_| Error::parse(i + 1, bits.len() + 2, format!("bad determinant `{det}`")))?;
        if b.det() != det {
            return Err(Error::parse(i + 1, bits.len() + 2, format!("stated determinant {det}, actual {}", b.det())));
        }
        out.push(b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_supports, EnumerationParams};

    #[test]
    fn round_trip() {
        let params = EnumerationParams {
            n: 4,
            min_weight: 2,
            distinct_columns: true,
            abs_det: Some(3),
            equivalence: Equivalence::RowColumnTranspose,
        };
        let e = enumerate_supports(params).unwrap();
        let mut buf = Vec::new();
        write_enumeration(&e, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# n=4 "));
        let back = parse_enumeration(&text, 4).unwrap();
        let want: Vec<_> = e.classes.iter().map(|c| c.representative.clone()).collect();
        assert_eq!(back, want);
        assert!(parse_enumeration("0110 5\n", 2).is_err());
    }
}
