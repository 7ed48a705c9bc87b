//! Matrix Market reader for real matrices, coordinate and array layouts.

use std::fmt::Write as _;
use std::path::Path;

use qcg_core::CsrMatrix;

use crate::error::{QcgError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| QcgError::io(path, e))?;
    parse_matrix_market(&text).map_err(|e| match e {
        QcgError::Parse { line, msg, .. } => QcgError::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        },
        other => other,
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> QcgError {
    QcgError::Parse {
        path: "<input>".into(),
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Result<(Layout, Symmetry)> {
    let fields: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    if fields[1] != "matrix" {
        return Err(QcgError::Unsupported(format!("object '{}'", fields[1])));
    }
    let layout = match fields[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(QcgError::Unsupported(format!("layout '{other}'"))),
    };
    match fields[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(QcgError::Unsupported(format!("field '{other}'"))),
    }
    let symmetry = match fields[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(QcgError::Unsupported(format!("symmetry '{other}'"))),
    };
    Ok((layout, symmetry))
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_matrix_market(text: &str) -> Result<CsrMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let (layout, symmetry) = parse_header(header)?;
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (size_no, size_line) = body.next().ok_or_else(|| parse_err(1, "missing size line"))?;
    let mut toks = size_line.split_whitespace();
    let rows: usize = number(toks.next(), size_no, "row count")?;
    let cols: usize = number(toks.next(), size_no, "column count")?;
    let declared = match layout {
        Layout::Coordinate => number::<usize>(toks.next(), size_no, "entry count")?,
        Layout::Array => match symmetry {
            Symmetry::General => rows * cols,
            Symmetry::Symmetric => rows * (rows + 1) / 2,
            Symmetry::Skew => rows * rows.saturating_sub(1) / 2,
        },
    };
    if toks.next().is_some() {
        return Err(parse_err(size_no, "trailing tokens on size line"));
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(size_no, "symmetric storage requires a square matrix"));
    }

    let mut trip = Vec::with_capacity(declared * if symmetry == Symmetry::General { 1 } else { 2 });
    let mut push = |r: usize, c: usize, v: f64| {
        trip.push((r, c, v));
        match symmetry {
            Symmetry::Symmetric if r != c => trip.push((c, r, v)),
            Symmetry::Skew if r != c => trip.push((c, r, -v)),
            _ => {}
        }
    };
    // Array layouts list columns top to bottom, only the lower triangle when symmetric.
    let array_slots = |k: usize| -> (usize, usize) {
        match symmetry {
            Symmetry::General => (k % rows, k / rows),
            _ => {
                let skip = usize::from(symmetry == Symmetry::Skew);
                let mut c = 0;
                let mut k = k;
                loop {
                    let len = rows - c - skip;
                    if k < len {
                        return (c + skip + k, c);
                    }
                    k -= len;
                    c += 1;
                }
            }
        }
    };
    let mut seen = 0usize;
    for (no, line) in body {
        if seen == declared {
            return Err(parse_err(no, format!("more than the declared {declared} entries")));
        }
        let mut t = line.split_whitespace();
        let (r, c) = match layout {
            Layout::Coordinate => {
                let r: usize = number(t.next(), no, "row index")?;
                let c: usize = number(t.next(), no, "column index")?;
                if r == 0 || c == 0 || r > rows || c > cols {
                    return Err(parse_err(no, format!("index ({r}, {c}) outside {rows}x{cols}")));
                }
                if symmetry != Symmetry::General && r < c {
                    return Err(parse_err(no, "entry above the diagonal in symmetric storage"));
                }
                if symmetry == Symmetry::Skew && r == c {
                    return Err(parse_err(no, "diagonal entry in skew-symmetric storage"));
                }
                (r - 1, c - 1)
            }
            Layout::Array => array_slots(seen),
        };
        let v: f64 = number(t.next(), no, "value")?;
        if !v.is_finite() {
            return Err(parse_err(no, "non-finite value"));
        }
        if t.next().is_some() {
            return Err(parse_err(no, "trailing tokens"));
        }
        if v != 0.0 || layout == Layout::Coordinate {
            push(r, c, v);
        }
        seen += 1;
    }
    if seen != declared {
        return Err(parse_err(size_no, format!("declared {declared} entries, found {seen}")));
    }
    Ok(CsrMatrix::from_triplets(rows, cols, &trip)?)
}

/// Writes a general real coordinate file.
pub fn to_matrix_market(a: &CsrMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", a.rows(), a.cols(), a.nnz());
    for r in 0..a.rows() {
        for k in a.row_ptr()[r]..a.row_ptr()[r + 1] {
            let _ = writeln!(s, "{} {} {:e}", r + 1, a.col_idx()[k] + 1, a.values()[k]);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_coordinate() {
        let a = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 3.0\n2 2 4.0\n").unwrap();
        assert_eq!(a.to_dense(), vec![3.0, 0.0, 0.0, 4.0]);
    }

    #[test]
    fn symmetric_is_mirrored() {
        let a = parse_matrix_market("%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 1\n3 1 2\n2 2 5\n").unwrap();
        assert_eq!(a.get(0, 2), 2.0);
        assert_eq!(a.get(2, 0), 2.0);
        assert_eq!(a.nnz(), 4);
    }

    #[test]
    fn skew_symmetric_is_negated() {
        let a = parse_matrix_market("%%MatrixMarket matrix coordinate integer skew-symmetric\n2 2 1\n2 1 7\n").unwrap();
        assert_eq!((a.get(1, 0), a.get(0, 1)), (7.0, -7.0));
    }

    #[test]
    fn array_layouts() {
        let a = parse_matrix_market("%%MatrixMarket matrix array real general\n2 3\n1\n2\n3\n4\n5\n6\n").unwrap();
        assert_eq!(a.to_dense(), vec![1.0, 3.0, 5.0, 2.0, 4.0, 6.0]);
        let s = parse_matrix_market("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").unwrap();
        assert_eq!(s.to_dense(), vec![1.0, 2.0, 2.0, 3.0]);
    }

    #[test]
    fn duplicates_are_summed() {
        let a = parse_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 1.5\n1 1 2.5\n").unwrap();
        assert_eq!(a.get(0, 0), 4.0);
    }

    #[test]
    fn rejects_unsupported_fields() {
        for f in ["complex", "pattern"] {
            let text = format!("%%MatrixMarket matrix coordinate {f} general\n1 1 1\n1 1 1\n");
            assert!(matches!(parse_matrix_market(&text), Err(QcgError::Unsupported(_))));
        }
        let h = "%%MatrixMarket matrix coordinate complex hermitian\n1 1 1\n1 1 1 0\n";
        assert!(parse_matrix_market(h).is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n3 1 2\n";
        match parse_matrix_market(text) {
            Err(QcgError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 x\n";
        assert!(matches!(parse_matrix_market(text), Err(QcgError::Parse { line: 3, .. })));
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n";
        assert!(matches!(parse_matrix_market(text), Err(QcgError::Parse { line: 2, .. })));
        assert!(parse_matrix_market("garbage\n").is_err());
    }

    #[test]
    fn roundtrip() {
        let a = CsrMatrix::from_triplets(3, 2, &[(0, 1, 0.1), (2, 0, -3.25e-7), (1, 1, 9.0)]).unwrap();
        assert_eq!(parse_matrix_market(&to_matrix_market(&a)).unwrap(), a);
    }
}
