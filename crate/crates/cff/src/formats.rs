//! Text and JSON file formats.
//!
//! * Matrix: `CFF t n d`, then `t` lines of `n` characters from `{0,1}`.
//!   An optional sidecar `<file>.json` carries provenance, labels and the
//!   field descriptor.
//! * Design: `DESIGN kind n k v t` (`kind` is `OA` or `PA`), then `n` lines
//!   of `k` space-separated symbols.
//! * SHF: `SHF N n m w`, then `N` lines of `n` space-separated symbols.
//! * Sequence manifest: JSON, see [`Manifest`].
//!
//! Symbols are 0-based everywhere. Blank lines and lines starting with `#`
//! are ignored.

use std::fs;
use std::path::{Path, PathBuf};

use cff_core::designs::{ArrayKind, DesignArray, SepHashFamily};
use cff_core::{Field, FieldDescriptor, IncidenceMatrix, Provenance};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Design(#[from] cff_core::designs::DesignError),
    #[error(transparent)]
    Field(#[from] cff_core::FieldError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

pub fn read_to_string(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_string(path: &Path, s: &str) -> Result<(), FormatError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| FormatError::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    fs::write(path, s).map_err(|source| FormatError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Non-empty lines, numbered from 1.
fn lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header<'a>(
    it: &mut impl Iterator<Item = (usize, &'a str)>,
    tag: &str,
    fields: usize,
) -> Result<Vec<&'a str>, FormatError> {
    let (ln, line) = it.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.first() != Some(&tag) || parts.len() != fields + 1 {
        return Err(parse_err(ln, format!("expected header `{tag}` with {fields} fields")));
    }
    Ok(parts[1..].to_vec())
}

fn num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| parse_err(line, format!("bad {what}: {s:?}")))
}

pub fn matrix_to_text(m: &IncidenceMatrix) -> String {
    let mut s = String::with_capacity((m.cols() + 1) * m.rows() + 32);
    s.push_str(&format!("CFF {} {} {}\n", m.rows(), m.cols(), m.d_claimed));
    for r in 0..m.rows() {
        s.extend((0..m.cols()).map(|c| if m.get(r, c) { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn matrix_from_text(text: &str) -> Result<IncidenceMatrix, FormatError> {
    let mut it = lines(text);
    let h = header(&mut it, "CFF", 3)?;
    let t: usize = num(h[0], 1, "t")?;
    let n: usize = num(h[1], 1, "n")?;
    let d: u32 = num(h[2], 1, "d")?;
    let mut m = IncidenceMatrix::zeros(t, n);
    let mut rows = 0;
    for (ln, line) in it {
        if rows == t {
            return Err(parse_err(ln, "more rows than the header declares"));
        }
        if line.len() != n {
            return Err(parse_err(ln, format!("expected {n} columns, got {}", line.len())));
        }
        for (c, b) in line.bytes().enumerate() {
            match b {
                b'1' => m.set(rows, c, true),
                b'0' => {}
                _ => return Err(parse_err(ln, format!("unexpected character {:?}", b as char))),
            }
        }
        rows += 1;
    }
    if rows != t {
        return Err(parse_err(0, format!("expected {t} rows, got {rows}")));
    }
    m.d_claimed = d;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub m: u32,
    pub level: u32,
    /// Modulus coefficient indices, low to high, one list per level.
    pub moduli: Vec<Vec<u32>>,
}

impl From<FieldDescriptor> for FieldJson {
    fn from(d: FieldDescriptor) -> Self {
        Self {
            p: d.p,
            m: d.m,
            level: d.level,
            moduli: d.moduli,
        }
    }
}

impl FieldJson {
    pub fn of(field: &Field) -> Self {
        field.descriptor().into()
    }

    pub fn to_field(&self) -> Result<Field, FormatError> {
        let desc = FieldDescriptor {
            p: self.p,
            m: self.m,
            level: self.level,
            moduli: self.moduli.clone(),
        };
        Ok(Field::from_descriptor(&desc)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProvenanceJson {
    External,
    Polynomial { q: u64, k: u32, blocks: u32, level: u32 },
    HashFamily { functions: u32, range: u32, w: u32 },
    Embedding { level: u32, q: u64, k: u32, blocks: u32 },
}

impl From<&Provenance> for ProvenanceJson {
    fn from(p: &Provenance) -> Self {
        match *p {
            Provenance::External => Self::External,
            Provenance::Polynomial { q, k, blocks, level } => Self::Polynomial { q, k, blocks, level },
            Provenance::HashFamily { functions, range, w } => Self::HashFamily { functions, range, w },
            Provenance::Embedding { level, q, k, blocks } => Self::Embedding { level, q, k, blocks },
        }
    }
}

impl From<&ProvenanceJson> for Provenance {
    fn from(p: &ProvenanceJson) -> Self {
        match *p {
            ProvenanceJson::External => Self::External,
            ProvenanceJson::Polynomial { q, k, blocks, level } => Self::Polynomial { q, k, blocks, level },
            ProvenanceJson::HashFamily { functions, range, w } => Self::HashFamily { functions, range, w },
            ProvenanceJson::Embedding { level, q, k, blocks } => Self::Embedding { level, q, k, blocks },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub provenance: ProvenanceJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
    /// `(x_i, x_j)` element indices per row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<(u32, u32)>>,
    /// Canonical polynomial index per column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<u64>>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

/// Writes the matrix and its sidecar.
pub fn save_matrix(path: &Path, m: &IncidenceMatrix, field: Option<&Field>) -> Result<(), FormatError> {
    write_string(path, &matrix_to_text(m))?;
    let side = Sidecar {
        provenance: (&m.provenance).into(),
        field: field.map(FieldJson::of),
        row_labels: m.row_labels.clone(),
        col_labels: m.col_labels.clone(),
    };
    write_string(&sidecar_path(path), &to_json(&side))
}

/// Reads a matrix and, when present, its sidecar.
pub fn load_matrix(path: &Path) -> Result<(IncidenceMatrix, Option<Sidecar>), FormatError> {
    let mut m = matrix_from_text(&read_to_string(path)?)?;
    let side_path = sidecar_path(path);
    if !side_path.exists() {
        return Ok((m, None));
    }
    let side: Sidecar = serde_json::from_str(&read_to_string(&side_path)?).map_err(|source| FormatError::Json {
        path: side_path.clone(),
        source,
    })?;
    m.provenance = (&side.provenance).into();
    m.row_labels = side.row_labels.clone().filter(|l| l.len() == m.rows());
    m.col_labels = side.col_labels.clone().filter(|l| l.len() == m.cols());
    Ok((m, Some(side)))
}

fn symbols_text(rows: usize, cols: usize, get: impl Fn(usize, usize) -> u32) -> String {
    let mut s = String::new();
    for r in 0..rows {
        let line: Vec<String> = (0..cols).map(|c| get(r, c).to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

fn parse_symbols<'a>(
    it: impl Iterator<Item = (usize, &'a str)>,
    rows: usize,
    cols: usize,
) -> Result<Vec<u32>, FormatError> {
    let mut cells = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (ln, line) in it {
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|x| num(x, ln, "symbol"))
            .collect::<Result<_, _>>()?;
        if row.len() != cols {
            return Err(parse_err(ln, format!("expected {cols} symbols, got {}", row.len())));
        }
        cells.extend(row);
        seen += 1;
    }
    if seen != rows {
        return Err(parse_err(0, format!("expected {rows} rows, got {seen}")));
    }
    Ok(cells)
}

pub fn design_to_text(a: &DesignArray) -> String {
    let kind = match a.kind {
        ArrayKind::Orthogonal => "OA",
        ArrayKind::Packing => "PA",
    };
    let mut s = format!("DESIGN {kind} {} {} {} {}\n", a.rows, a.cols, a.v, a.t);
    s.push_str(&symbols_text(a.rows, a.cols, |r, c| a.get(r, c)));
    s
}

pub fn design_from_text(text: &str) -> Result<DesignArray, FormatError> {
    let mut it = lines(text);
    let h = header(&mut it, "DESIGN", 5)?;
    let kind = match h[0] {
        "OA" => ArrayKind::Orthogonal,
        "PA" => ArrayKind::Packing,
        other => return Err(parse_err(1, format!("kind must be OA or PA, got {other:?}"))),
    };
    let (n, k, v, t): (usize, usize, u32, usize) = (
        num(h[1], 1, "n")?,
        num(h[2], 1, "k")?,
        num(h[3], 1, "v")?,
        num(h[4], 1, "t")?,
    );
    let cells = parse_symbols(it, n, k)?;
    Ok(DesignArray::new(kind, n, k, v, t, cells)?)
}

pub fn shf_to_text(s: &SepHashFamily) -> String {
    let mut out = format!("SHF {} {} {} {}\n", s.functions, s.n, s.m, s.w);
    out.push_str(&symbols_text(s.functions, s.n, |r, c| s.get(r, c)));
    out
}

pub fn shf_from_text(text: &str) -> Result<SepHashFamily, FormatError> {
    let mut it = lines(text);
    let h = header(&mut it, "SHF", 4)?;
    let (big_n, n, m, w): (usize, usize, u32, usize) = (
        num(h[0], 1, "N")?,
        num(h[1], 1, "n")?,
        num(h[2], 1, "m")?,
        num(h[3], 1, "w")?,
    );
    let cells = parse_symbols(it, big_n, n)?;
    Ok(SepHashFamily::new(big_n, n, m, w, cells)?)
}

/// Kind of a text file, from its first word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Matrix,
    Design,
    Shf,
    Manifest,
}

pub fn sniff(text: &str) -> Option<FileKind> {
    let first = lines(text).next()?.1.split_whitespace().next()?;
    match first {
        "CFF" => Some(FileKind::Matrix),
        "DESIGN" => Some(FileKind::Design),
        "SHF" => Some(FileKind::Shf),
        _ if first.starts_with('{') => Some(FileKind::Manifest),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestLevel {
    pub i: u32,
    pub q: u64,
    pub k: u64,
    pub d: u64,
    /// Decimal; may exceed 64 bits.
    pub t: String,
    pub n: String,
    /// Matrix file relative to the manifest, when the level is materialized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    /// Canonical row index `a * q + b` of each row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_order: Option<Vec<u64>>,
    /// Canonical polynomial index of each column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_order: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub family: String,
    pub base_field: FieldJson,
    pub levels: Vec<ManifestLevel>,
}

pub fn save_manifest(path: &Path, m: &Manifest) -> Result<(), FormatError> {
    write_string(path, &to_json(m))
}

pub fn load_manifest(path: &Path) -> Result<Manifest, FormatError> {
    serde_json::from_str(&read_to_string(path)?).map_err(|source| FormatError::Json {
        path: path.to_owned(),
        source,
    })
}

/// Matrices of the materialized levels, in order; `None` for the others.
pub fn load_manifest_matrices(path: &Path, m: &Manifest) -> Result<Vec<Option<IncidenceMatrix>>, FormatError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    m.levels
        .iter()
        .map(|l| {
            l.matrix
                .as_ref()
                .map(|f| load_matrix(&dir.join(f)).map(|(m, _)| m))
                .transpose()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use cff_core::{cff, fixtures};

    #[test]
    fn matrix_roundtrip() {
        let m = fixtures::c3_1();
        let text = matrix_to_text(&m);
        assert!(text.starts_with("CFF 9 9 2\n100100100\n"));
        let back = matrix_from_text(&text).unwrap();
        assert!(back.same_bits(&m));
        assert_eq!(back.d_claimed, 2);
    }

    #[test]
    fn matrix_parse_errors() {
        assert!(matrix_from_text("").is_err());
        assert!(matrix_from_text("CFF 2 2 1\n10\n").is_err());
        assert!(matrix_from_text("CFF 1 2 1\n1x\n").is_err());
        assert!(matrix_from_text("CFF 1 2 1\n101\n").is_err());
        assert!(matrix_from_text("CFX 1 1 1\n1\n").is_err());
    }

    #[test]
    fn sidecar_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cff");
        let f = Field::of_order(9).unwrap();
        let m = cff::build_polynomial_cff(&f, 1).unwrap();
        save_matrix(&path, &m, Some(&f)).unwrap();
        let (back, side) = load_matrix(&path).unwrap();
        assert_eq!(back, m);
        let side = side.unwrap();
        let f2 = side.field.unwrap().to_field().unwrap();
        assert_eq!(f2.descriptor(), f.descriptor());
    }

    #[test]
    fn design_and_shf_roundtrip() {
        let a = cff_core::designs::bush_oa(&Field::of_order(3).unwrap(), 2).unwrap();
        let text = design_to_text(&a);
        assert!(text.starts_with("DESIGN OA 9 3 3 2\n0 0 0\n1 1 1\n"));
        assert_eq!(design_from_text(&text).unwrap(), a);
        let s = SepHashFamily::from_one_based(&fixtures::SHF_2X6_ONE_BASED, 2).unwrap();
        let text = shf_to_text(&s);
        assert_eq!(text, "SHF 2 6 4 2\n0 1 2 3 3 3\n3 3 3 0 1 2\n");
        assert_eq!(shf_from_text(&text).unwrap(), s);
        assert!(shf_from_text("SHF 1 2 2 1\n0 2\n").is_err());
        assert_eq!(sniff(&text), Some(FileKind::Shf));
    }
}
