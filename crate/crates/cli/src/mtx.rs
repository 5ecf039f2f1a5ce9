//! Matrix Market files.
//!
//! The writer emits the dense `array complex general` form, column-major,
//! with 17 significant digits so every double survives a round trip. The
//! reader also accepts `real`/`integer` fields, the `coordinate` format and
//! the `symmetric`, `hermitian` and `skew-symmetric` storage schemes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use symlog::CMatrix;

#[derive(Debug, thiserror::Error)]
pub enum MtxError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0}")]
    Matrix(#[from] symlog::Error),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scheme {
    General,
    Symmetric,
    Hermitian,
    Skew,
}

fn parse_err(line: usize, msg: impl Into<String>) -> MtxError {
    MtxError::Parse { line, msg: msg.into() }
}

/// Serializes `m` in the array format.
pub fn to_string(m: &CMatrix) -> String {
    let n = m.n();
    let mut out = String::with_capacity(48 * n * n + 64);
    out.push_str("%%MatrixMarket matrix array complex general\n");
    let _ = writeln!(out, "{n} {n}");
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            let _ = writeln!(out, "{:.16e} {:.16e}", z.re, z.im);
        }
    }
    out
}

pub fn write(path: &Path, m: &CMatrix) -> Result<(), MtxError> {
    fs::write(path, to_string(m)).map_err(|source| MtxError::Io { path: path.display().to_string(), source })
}

pub fn read(path: &Path) -> Result<CMatrix, MtxError> {
    let text =
        fs::read_to_string(path).map_err(|source| MtxError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<CMatrix, MtxError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let coordinate = match words[2].as_str() {
        "array" => false,
        "coordinate" => true,
        other => return Err(parse_err(1, format!("unknown format '{other}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(parse_err(1, format!("unsupported field '{other}'"))),
    };
    let scheme = match words[4].as_str() {
        "general" => Scheme::General,
        "symmetric" => Scheme::Symmetric,
        "hermitian" => Scheme::Hermitian,
        "skew-symmetric" => Scheme::Skew,
        other => return Err(parse_err(1, format!("unknown symmetry '{other}'"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims = parse_numbers::<usize>(size_line, size)?;
    let (rows, cols) = match (coordinate, dims.as_slice()) {
        (false, [r, c]) | (true, [r, c, _]) => (*r, *c),
        _ => return Err(parse_err(size_line, "malformed size line")),
    };
    if rows != cols {
        return Err(MtxError::NotSquare { rows, cols });
    }
    let n = rows;
    let mut m = CMatrix::zeros(n);
    let mut set = |i: usize, j: usize, z: Complex64| {
        m[(i, j)] = z;
        if i != j {
            match scheme {
                Scheme::General => {}
                Scheme::Symmetric => m[(j, i)] = z,
                Scheme::Hermitian => m[(j, i)] = z.conj(),
                Scheme::Skew => m[(j, i)] = -z,
            }
        }
    };
    let width = if field == Field::Complex { 2 } else { 1 };

    if coordinate {
        let nnz = dims[2];
        for k in 0..nnz {
            let (line, text) = body.next().ok_or_else(|| parse_err(size_line, format!("expected {nnz} entries, found {k}")))?;
            let words: Vec<&str> = text.split_whitespace().collect();
            if words.len() != 2 + width {
                return Err(parse_err(line, "malformed entry"));
            }
            let i = parse_index(line, words[0], n)?;
            let j = parse_index(line, words[1], n)?;
            set(i, j, parse_value(line, &words[2..])?);
        }
    } else {
        // column-major; packed schemes store only i >= j (i > j for skew)
        let positions: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .filter(|&(i, j)| match scheme {
                Scheme::General => true,
                Scheme::Symmetric | Scheme::Hermitian => i >= j,
                Scheme::Skew => i > j,
            })
            .collect();
        for (k, &(i, j)) in positions.iter().enumerate() {
            let (line, text) = body
                .next()
                .ok_or_else(|| parse_err(size_line, format!("expected {} values, found {k}", positions.len())))?;
            let words: Vec<&str> = text.split_whitespace().collect();
            if words.len() != width {
                return Err(parse_err(line, "malformed value"));
            }
            set(i, j, parse_value(line, &words)?);
        }
    }
    if let Some((line, _)) = body.next() {
        return Err(parse_err(line, "trailing data"));
    }
    Ok(m)
}

fn parse_numbers<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>, MtxError> {
    text.split_whitespace()
        .map(|w| w.parse::<T>().map_err(|_| parse_err(line, format!("invalid number '{w}'"))))
        .collect()
}

fn parse_index(line: usize, w: &str, n: usize) -> Result<usize, MtxError> {
    match w.parse::<usize>() {
        Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
        _ => Err(parse_err(line, format!("index '{w}' out of range 1..={n}"))),
    }
}

fn parse_value(line: usize, words: &[&str]) -> Result<Complex64, MtxError> {
    let v = parse_numbers::<f64>(line, &words.join(" "))?;
    let z = match v.as_slice() {
        [re] => Complex64::new(*re, 0.0),
        [re, im] => Complex64::new(*re, *im),
        _ => return Err(parse_err(line, "malformed value")),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(parse_err(line, "non-finite value"));
    }
    Ok(z)
}
