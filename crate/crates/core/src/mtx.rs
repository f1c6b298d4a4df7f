//! Matrix Market reader and writer for integer matrices.
//!
//! Supports the `coordinate` and `array` formats with `integer` (or `pattern`)
//! fields and `general`, `symmetric` or `skew-symmetric` symmetry. Values are
//! parsed as arbitrary-precision integers.

use std::io::{self, BufRead, Write};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::BigIntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MtxFormat {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a Matrix Market stream.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<BigIntMatrix> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (header_no, header) = match lines.next() {
        Some((no, Ok(h))) => (no, h),
        Some((no, Err(e))) => return Err(parse_err(no, e.to_string())),
        None => return Err(parse_err(1, "empty input")),
    };
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(header_no, "missing %%MatrixMarket matrix header"));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => MtxFormat::Coordinate,
        "array" => MtxFormat::Array,
        other => {
            return Err(parse_err(
                header_no,
                format!("unsupported format '{other}'"),
            ))
        }
    };
    let pattern = match tokens[3].as_str() {
        "integer" => false,
        "pattern" if format == MtxFormat::Coordinate => true,
        other => return Err(parse_err(header_no, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => {
            return Err(parse_err(
                header_no,
                format!("unsupported symmetry '{other}'"),
            ))
        }
    };

    let mut data = lines.filter_map(|(no, l)| match l {
        Ok(l) => {
            let t = l.trim();
            (!t.is_empty() && !t.starts_with('%')).then(|| Ok((no, t.to_string())))
        }
        Err(e) => Some(Err(parse_err(no, e.to_string()))),
    });

    let (size_no, size_line) = data
        .next()
        .ok_or_else(|| parse_err(header_no + 1, "missing size line"))??;
    let sizes = size_line
        .split_whitespace()
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| parse_err(size_no, format!("bad size line: {e}")))?;

    let place = |m: &mut BigIntMatrix, no: usize, i: usize, j: usize, v: BigInt| {
        if i >= m.rows() || j >= m.cols() {
            return Err(parse_err(
                no,
                format!("entry ({}, {}) out of range", i + 1, j + 1),
            ));
        }
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m[(j, i)] = v.clone(),
                Symmetry::SkewSymmetric => m[(j, i)] = -v.clone(),
            }
        } else if symmetry == Symmetry::SkewSymmetric && !v.is_zero() {
            return Err(parse_err(no, "nonzero diagonal in skew-symmetric matrix"));
        }
        m[(i, j)] = v;
        Ok(())
    };

    let parse_value = |no: usize, s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| parse_err(no, format!("'{s}' is not an integer")))
    };

    match format {
        MtxFormat::Coordinate => {
            let [rows, cols, nnz] = sizes[..] else {
                return Err(parse_err(
                    size_no,
                    "coordinate size line needs rows cols nnz",
                ));
            };
            let mut m = BigIntMatrix::zeros(rows, cols);
            let mut seen = 0;
            for item in data {
                let (no, line) = item?;
                let parts: Vec<&str> = line.split_whitespace().collect();
                let expected = if pattern { 2 } else { 3 };
                if parts.len() != expected {
                    return Err(parse_err(no, format!("expected {expected} fields")));
                }
                let idx = |s: &str| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| parse_err(no, format!("bad index '{s}'")))
                };
                let (i, j) = (idx(parts[0])? - 1, idx(parts[1])? - 1);
                let v = if pattern {
                    BigInt::one()
                } else {
                    parse_value(no, parts[2])?
                };
                place(&mut m, no, i, j, v)?;
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(
                    size_no,
                    format!("declared {nnz} entries, found {seen}"),
                ));
            }
            Ok(m)
        }
        MtxFormat::Array => {
            let [rows, cols] = sizes[..] else {
                return Err(parse_err(size_no, "array size line needs rows cols"));
            };
            if symmetry != Symmetry::General && rows != cols {
                return Err(parse_err(size_no, "symmetric array matrix must be square"));
            }
            // column-major, lower triangle only when symmetric
            let positions: Vec<(usize, usize)> = (0..cols)
                .flat_map(|j| {
                    let start = match symmetry {
                        Symmetry::General => 0,
                        Symmetry::Symmetric => j,
                        Symmetry::SkewSymmetric => j + 1,
                    };
                    (start..rows).map(move |i| (i, j))
                })
                .collect();
            let mut m = BigIntMatrix::zeros(rows, cols);
            let mut values = Vec::with_capacity(positions.len());
            for item in data {
                let (no, line) = item?;
                for tok in line.split_whitespace() {
                    values.push((no, parse_value(no, tok)?));
                }
            }
            if values.len() != positions.len() {
                return Err(parse_err(
                    size_no,
                    format!(
                        "expected {} values, found {}",
                        positions.len(),
                        values.len()
                    ),
                ));
            }
            for ((i, j), (no, v)) in positions.into_iter().zip(values) {
                place(&mut m, no, i, j, v)?;
            }
            Ok(m)
        }
    }
}

/// Writes a general integer matrix in the given format.
pub fn write_matrix_market<W: Write>(
    m: &BigIntMatrix,
    format: MtxFormat,
    mut out: W,
) -> io::Result<()> {
    match format {
        MtxFormat::Coordinate => {
            writeln!(out, "%%MatrixMarket matrix coordinate integer general")?;
            let nnz = m.entries().iter().filter(|x| !x.is_zero()).count();
            writeln!(out, "{} {} {}", m.rows(), m.cols(), nnz)?;
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let x = &m[(i, j)];
                    if !x.is_zero() {
                        writeln!(out, "{} {} {}", i + 1, j + 1, x)?;
                    }
                }
            }
        }
        MtxFormat::Array => {
            writeln!(out, "%%MatrixMarket matrix array integer general")?;
            writeln!(out, "{} {}", m.rows(), m.cols())?;
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    writeln!(out, "{}", m[(i, j)])?;
                }
            }
        }
    }
    Ok(())
}

pub fn to_matrix_market_string(m: &BigIntMatrix, format: MtxFormat) -> String {
    let mut buf = Vec::new();
    write_matrix_market(m, format, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("matrix market output is ASCII")
}

pub fn from_matrix_market_str(s: &str) -> Result<BigIntMatrix> {
    read_matrix_market(s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_coordinate() {
        let src = "%%MatrixMarket matrix coordinate integer general\n% comment\n2 2 4\n1 1 2\n1 2 4\n2 1 6\n2 2 8\n";
        let m = from_matrix_market_str(src).unwrap();
        assert_eq!(m, BigIntMatrix::from_rows(&[[2, 4], [6, 8]]).unwrap());
    }

    #[test]
    fn reads_symmetric_array() {
        // lower triangle, column-major: (1,1) (2,1) (2,2)
        let src = "%%MatrixMarket matrix array integer symmetric\n2 2\n1\n-1\n1\n";
        let m = from_matrix_market_str(src).unwrap();
        assert_eq!(m, BigIntMatrix::from_rows(&[[1, -1], [-1, 1]]).unwrap());
    }

    #[test]
    fn big_entries_survive() {
        let src = "%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 123456789012345678901234567890\n";
        let m = from_matrix_market_str(src).unwrap();
        assert_eq!(m[(0, 0)].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn writes_and_reads_back() {
        let m = BigIntMatrix::from_rows(&[[0, -3, 0], [7, 0, 1]]).unwrap();
        for fmt in [MtxFormat::Coordinate, MtxFormat::Array] {
            let s = to_matrix_market_string(&m, fmt);
            assert_eq!(from_matrix_market_str(&s).unwrap(), m);
        }
        assert_eq!(
            to_matrix_market_string(&m, MtxFormat::Coordinate),
            "%%MatrixMarket matrix coordinate integer general\n2 3 3\n1 2 -3\n2 1 7\n2 3 1\n"
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            from_matrix_market_str(""),
            Err(Error::Parse { .. })
        ));
        assert!(from_matrix_market_str("hello\n").is_err());
        assert!(from_matrix_market_str(
            "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.5\n"
        )
        .is_err());
        assert!(from_matrix_market_str(
            "%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 1\n"
        )
        .is_err());
        assert!(from_matrix_market_str(
            "%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 1\n"
        )
        .is_err());
        assert!(from_matrix_market_str(
            "%%MatrixMarket matrix array integer general\n2 2\n1 2 3\n"
        )
        .is_err());
        assert!(
            from_matrix_market_str("%%MatrixMarket matrix array integer general\n1 1\nx\n")
                .is_err()
        );
    }
}
