//! Matrix Market coordinate I/O for symmetric matrices.
//!
//! Only `matrix coordinate real symmetric` files are accepted. Indices are
//! 1-based on disk and 0-based in memory; the writer emits the lower
//! triangle with 17 significant digits so values round-trip exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::SymmetricSparseMatrix;
use crate::error::{Error, Result};

const HEADER: &str = "%%MatrixMarket matrix coordinate real symmetric";

/// Reads a symmetric matrix from a Matrix Market file.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SymmetricSparseMatrix> {
    read_matrix_market_from(BufReader::new(File::open(path)?))
}

/// Reads a symmetric matrix from any buffered reader in Matrix Market form.
pub fn read_matrix_market_from(reader: impl BufRead) -> Result<SymmetricSparseMatrix> {
    let mut lines = reader.lines().enumerate();

    let (lineno, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?
        .1
        .map(|h| (1, h))
        .map_err(Error::Io)?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    let expected: Vec<&str> = HEADER.split_whitespace().collect();
    if tokens.len() != expected.len()
        || !tokens[0].eq_ignore_ascii_case(expected[0])
        || tokens[1..] != expected[1..]
    {
        return Err(parse_err(
            lineno,
            format!("expected header `{HEADER}`, got `{header}`"),
        ));
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut diag: Vec<f64> = Vec::new();
    let mut diag_seen: Vec<bool> = Vec::new();
    let mut offdiag: Vec<(usize, usize, f64)> = Vec::new();
    let mut entries_read = 0usize;

    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(Error::Io)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line must be `rows cols nnz`"));
                }
                let rows: usize = parse_field(fields[0], lineno, "rows")?;
                let cols: usize = parse_field(fields[1], lineno, "cols")?;
                let nnz: usize = parse_field(fields[2], lineno, "nnz")?;
                if rows != cols {
                    return Err(parse_err(
                        lineno,
                        format!("matrix must be square, got {rows}x{cols}"),
                    ));
                }
                diag = vec![0.0; rows];
                diag_seen = vec![false; rows];
                size = Some((rows, cols, nnz));
            }
            Some((n, _, nnz)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "entry line must be `row col value`"));
                }
                let i: usize = parse_field(fields[0], lineno, "row")?;
                let j: usize = parse_field(fields[1], lineno, "col")?;
                let v: f64 = parse_field(fields[2], lineno, "value")?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(
                        lineno,
                        format!("index ({i}, {j}) out of range for dimension {n}"),
                    ));
                }
                entries_read += 1;
                if entries_read > nnz {
                    return Err(parse_err(lineno, "more entries than declared nnz"));
                }
                if i == j {
                    if diag_seen[i - 1] {
                        return Err(parse_err(lineno, format!("duplicate diagonal entry {i}")));
                    }
                    diag_seen[i - 1] = true;
                    diag[i - 1] = v;
                } else {
                    offdiag.push((i - 1, j - 1, v));
                }
            }
        }
    }
    let (n, _, nnz) = size.ok_or_else(|| parse_err(0, "missing size line"))?;
    if entries_read != nnz {
        return Err(parse_err(
            0,
            format!("declared {nnz} entries but found {entries_read}"),
        ));
    }
    // `new` normalizes ordering and rejects duplicate off-diagonal pairs.
    SymmetricSparseMatrix::new(n, diag, offdiag)
}

/// Writes a symmetric matrix to a Matrix Market file.
pub fn write_matrix_market(path: impl AsRef<Path>, m: &SymmetricSparseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_market_to(&mut w, m)?;
    w.flush()?;
    Ok(())
}

/// Writes a symmetric matrix in Matrix Market form to any writer.
pub fn write_matrix_market_to(mut w: impl Write, m: &SymmetricSparseMatrix) -> Result<()> {
    let n = m.dim();
    let diag_nnz = m.diagonal().iter().filter(|&&v| v != 0.0).count();
    let nnz = diag_nnz + m.off_diagonals().len();
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{n} {n} {nnz}")?;
    for (i, &v) in m.diagonal().iter().enumerate() {
        if v != 0.0 {
            writeln!(w, "{} {} {:.16e}", i + 1, i + 1, v)?;
        }
    }
    // Stored as strict upper; emitted as the lower triangle.
    for &(r, c, v) in m.off_diagonals() {
        writeln!(w, "{} {} {:.16e}", c + 1, r + 1, v)?;
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from `{s}`")))
}
