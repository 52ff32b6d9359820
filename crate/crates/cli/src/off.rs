//! ASCII OFF triangle meshes.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use curvflow::surface::TriMesh;

use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at line {line}")]
pub struct OffError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> OffError {
    OffError { line, message: message.into() }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> std::result::Result<T, OffError> {
    token.parse().map_err(|_| err(line, format!("invalid {what} '{token}'")))
}

pub fn parse_off(text: &str) -> std::result::Result<TriMesh, OffError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or_else(|| err(1, "missing OFF header"))?;
    if header != ["OFF"] {
        return Err(err(header_line, format!("malformed header '{}'", header.join(" "))));
    }
    let (counts_line, counts) = lines.next().ok_or_else(|| err(header_line + 1, "missing counts line"))?;
    if counts.len() != 3 {
        return Err(err(counts_line, "counts line must hold 'V F E'"));
    }
    let nv: usize = parse_num(counts[0], counts_line, "vertex count")?;
    let nf: usize = parse_num(counts[1], counts_line, "face count")?;
    let _: usize = parse_num(counts[2], counts_line, "edge count")?;

    let mut last_line = counts_line;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, tokens) = lines.next().ok_or_else(|| err(last_line + 1, "unexpected end of file in vertex list"))?;
        if tokens.len() != 3 {
            return Err(err(line, format!("vertex needs 3 coordinates, found {}", tokens.len())));
        }
        let mut v = [0.0f64; 3];
        for (slot, t) in v.iter_mut().zip(&tokens) {
            *slot = parse_num(t, line, "coordinate")?;
            if !slot.is_finite() {
                return Err(err(line, "non-finite coordinate"));
            }
        }
        vertices.push(v);
        last_line = line;
    }

    let mut faces = Vec::with_capacity(nf);
    let mut edge_uses: HashMap<(usize, usize), usize> = HashMap::new();
    for _ in 0..nf {
        let (line, tokens) = lines.next().ok_or_else(|| err(last_line + 1, "unexpected end of file in face list"))?;
        let arity: usize = parse_num(tokens[0], line, "face size")?;
        if arity != 3 {
            return Err(err(line, "non-triangle face"));
        }
        if tokens.len() < 4 {
            return Err(err(line, "face lists fewer than 3 indices"));
        }
        let mut tri = [0usize; 3];
        for (slot, t) in tri.iter_mut().zip(&tokens[1..4]) {
            *slot = parse_num(t, line, "vertex index")?;
            if *slot >= nv {
                return Err(err(line, format!("vertex index {slot} out of range")));
            }
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return Err(err(line, "degenerate face"));
        }
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            let uses = edge_uses.entry((a.min(b), a.max(b))).or_insert(0);
            *uses += 1;
            if *uses > 2 {
                return Err(err(line, format!("non-manifold edge ({a}, {b})")));
            }
        }
        faces.push(tri);
        last_line = line;
    }
    if let Some((line, _)) = lines.next() {
        return Err(err(line, "unexpected trailing content"));
    }
    TriMesh::new(vertices, faces).map_err(|e| err(last_line, e.to_string()))
}

/// OFF text with 17 significant digits per coordinate.
pub fn format_off(mesh: &TriMesh) -> String {
    let mut out = String::new();
    out.push_str("OFF\n");
    let _ = writeln!(out, "{} {} {}", mesh.vertices().len(), mesh.faces().len(), mesh.edge_count());
    for v in mesh.vertices() {
        let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    out
}

pub fn load_mesh(path: &Path) -> Result<TriMesh> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_off(&text).map_err(|source| CliError::Off { path: path.to_owned(), source })
}

pub fn save_mesh(mesh: &TriMesh, path: &Path) -> Result<()> {
    std::fs::write(path, format_off(mesh)).map_err(|source| CliError::Io { path: path.to_owned(), source })
}
