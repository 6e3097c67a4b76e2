//! CSV field files.
//!
//! Volume fields: a header `n,shape_1..shape_n,h,origin_1..origin_n`, then one
//! row per interior cell holding the cell multi-index followed by the `2^n`
//! coefficients in blade-bitmask order.
//!
//! Boundary fields: a header `n,facets`, then one row per facet holding the
//! centre, the outward normal, the surface weight and the `2^n` coefficients.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

use super::{BoundaryField, BoundaryMesh, GridDomain, MultivectorField};

fn push_row(out: &mut String, items: impl IntoIterator<Item = String>) {
    let mut first = true;
    for it in items {
        if !first {
            out.push(',');
        }
        out.push_str(&it);
        first = false;
    }
    out.push('\n');
}

fn num<T: Real>(x: T) -> String {
    // shortest round-trip representation
    format!("{:?}", to_f64(x))
}

pub fn write_field<T: Real>(f: &MultivectorField<T>) -> String {
    let d = f.domain();
    let mut out = String::new();
    let mut header = vec![d.dim().to_string()];
    header.extend(d.shape().iter().map(|s| s.to_string()));
    header.push(num(d.h()));
    header.extend(d.origin().iter().map(|&o| num(o)));
    push_row(&mut out, header);
    for c in 0..f.len() {
        let mut row: Vec<String> = d.cell_index(c).iter().map(|i| i.to_string()).collect();
        row.extend(f.value(c).iter().map(|&v| num(v)));
        push_row(&mut out, row);
    }
    out
}

fn parse_num<T: Real>(tok: &str, line: usize) -> Result<T> {
    tok.trim()
        .parse::<f64>()
        .map(lit)
        .map_err(|e| Error::Parse {
            line,
            message: format!("bad number {tok:?}: {e}"),
        })
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.trim().parse::<usize>().map_err(|e| Error::Parse {
        line,
        message: format!("bad integer {tok:?}: {e}"),
    })
}

fn close<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= lit::<T>(1e-9) * (T::one() + a.abs().max(b.abs()))
}

/// Parses a volume field and checks that its header matches `domain`.
pub fn read_field<T: Real>(text: &str, domain: &Arc<GridDomain<T>>) -> Result<MultivectorField<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty field file".into(),
    })?;
    let toks: Vec<&str> = header.split(',').collect();
    let n = parse_usize(toks[0], 1)?;
    if n != domain.dim() {
        return Err(Error::Shape(format!(
            "file has dimension {n}, domain has {}",
            domain.dim()
        )));
    }
    if toks.len() != 2 * n + 2 {
        return Err(Error::Parse {
            line: 1,
            message: format!("header needs {} entries, found {}", 2 * n + 2, toks.len()),
        });
    }
    let shape = toks[1..=n]
        .iter()
        .map(|t| parse_usize(t, 1))
        .collect::<Result<Vec<_>>>()?;
    let h: T = parse_num(toks[n + 1], 1)?;
    let origin = toks[n + 2..]
        .iter()
        .map(|t| parse_num::<T>(t, 1))
        .collect::<Result<Vec<_>>>()?;
    if shape != domain.shape()
        || !close(h, domain.h())
        || origin
            .iter()
            .zip(domain.origin())
            .any(|(&a, &b)| !close(a, b))
    {
        return Err(Error::Shape(
            "field file grid does not match the configured domain".into(),
        ));
    }
    let stride = domain.stride();
    let mut data = vec![T::zero(); domain.len() * stride];
    let mut seen = vec![false; domain.len()];
    for (i, line) in lines {
        let lineno = i + 1;
        let toks: Vec<&str> = line.split(',').collect();
        if toks.len() != n + stride {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected {} columns, found {}", n + stride, toks.len()),
            });
        }
        let idx = toks[..n]
            .iter()
            .map(|t| parse_usize(t, lineno).map(|v| v as isize))
            .collect::<Result<Vec<_>>>()?;
        let cell = domain.cell_at(&idx).ok_or_else(|| {
            Error::Shape(format!(
                "line {lineno}: cell {idx:?} is not an interior cell"
            ))
        })?;
        if seen[cell] {
            return Err(Error::Parse {
                line: lineno,
                message: format!("cell {idx:?} listed twice"),
            });
        }
        seen[cell] = true;
        for (k, t) in toks[n..].iter().enumerate() {
            data[cell * stride + k] = parse_num(t, lineno)?;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Shape(format!(
            "cell {:?} has no value in the field file",
            domain.cell_index(missing)
        )));
    }
    MultivectorField::from_data(domain.clone(), data)
}

pub fn write_boundary_field<T: Real>(g: &BoundaryField<T>) -> String {
    let m = g.mesh();
    let mut out = String::new();
    push_row(&mut out, [m.dim().to_string(), m.len().to_string()]);
    for i in 0..m.len() {
        let f = m.facet(i);
        let mut row: Vec<String> = f.center.iter().map(|&v| num(v)).collect();
        row.extend(f.normal.iter().map(|&v| num(v)));
        row.push(num(f.weight));
        row.extend(g.value(i).iter().map(|&v| num(v)));
        push_row(&mut out, row);
    }
    out
}

/// Parses a boundary field; facet geometry must match `mesh`.
pub fn read_boundary_field<T: Real>(
    text: &str,
    mesh: &Arc<BoundaryMesh<T>>,
) -> Result<BoundaryField<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty boundary file".into(),
    })?;
    let toks: Vec<&str> = header.split(',').collect();
    if toks.len() != 2 {
        return Err(Error::Parse {
            line: 1,
            message: "boundary header must be `n,facets`".into(),
        });
    }
    let n = parse_usize(toks[0], 1)?;
    let count = parse_usize(toks[1], 1)?;
    if n != mesh.dim() || count != mesh.len() {
        return Err(Error::Shape(format!(
            "file has {count} facets in dimension {n}, mesh has {} in dimension {}",
            mesh.len(),
            mesh.dim()
        )));
    }
    let stride = 1 << n;
    let cols = 2 * n + 1 + stride;
    let mut data = Vec::with_capacity(count * stride);
    let mut rows = 0;
    for (i, line) in lines {
        let lineno = i + 1;
        let toks: Vec<&str> = line.split(',').collect();
        if toks.len() != cols {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected {cols} columns, found {}", toks.len()),
            });
        }
        if rows >= count {
            return Err(Error::Parse {
                line: lineno,
                message: "more rows than facets".into(),
            });
        }
        let center = toks[..n]
            .iter()
            .map(|t| parse_num::<T>(t, lineno))
            .collect::<Result<Vec<_>>>()?;
        if center
            .iter()
            .zip(mesh.center(rows))
            .any(|(&a, &b)| !close(a, b))
        {
            return Err(Error::Shape(format!(
                "line {lineno}: facet centre does not match the mesh"
            )));
        }
        for t in &toks[2 * n + 1..] {
            data.push(parse_num(t, lineno)?);
        }
        rows += 1;
    }
    if rows != count {
        return Err(Error::Shape(format!(
            "expected {count} facet rows, found {rows}"
        )));
    }
    BoundaryField::from_data(mesh.clone(), data)
}
