//! Text format for two-qubit density matrices.
//!
//! ```text
//! dims = [4, 4]
//! re = [
//!   0.5, 0.0, 0.0, 0.5,
//!   ...
//! ]
//! im = [ ... ]
//! ```
//!
//! `re` and `im` hold the 16 entries row-major in the `|00>,|01>,|10>,|11>`
//! basis. Non-Hermitian input is rejected with the line of the offending entry.

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use super::matrix::ComplexMatrix;
use super::state::{TwoQubitState, HERMITIAN_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStateFile {
    dims: Spanned<Vec<usize>>,
    re: Spanned<Vec<Spanned<f64>>>,
    im: Spanned<Vec<Spanned<f64>>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses the matrix without validating it as a density operator beyond Hermiticity.
pub fn parse_state_matrix(text: &str) -> Result<ComplexMatrix> {
    let raw: RawStateFile = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map(|s| line_of(text, s.start)).unwrap_or(1),
        message: e.message().trim().to_string(),
    })?;

    let dims = raw.dims.get_ref();
    if dims.as_slice() != [4, 4] {
        return Err(Error::Parse {
            line: line_of(text, raw.dims.span().start),
            message: format!("dims must be [4, 4], got {dims:?}"),
        });
    }
    for (name, arr) in [("re", &raw.re), ("im", &raw.im)] {
        if arr.get_ref().len() != 16 {
            return Err(Error::Parse {
                line: line_of(text, arr.span().start),
                message: format!("{name} must hold 16 numbers, got {}", arr.get_ref().len()),
            });
        }
    }

    let re = raw.re.get_ref();
    let im = raw.im.get_ref();
    let data: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(r, i)| Complex64::new(*r.get_ref(), *i.get_ref()))
        .collect();
    let m = ComplexMatrix::from_vec(4, 4, data)?;

    for i in 0..4 {
        for j in i..4 {
            let a = m[(i, j)];
            let b = m[(j, i)];
            let dre = (a.re - b.re).abs();
            let dim = (a.im + b.im).abs();
            if dre > HERMITIAN_TOL || dim > HERMITIAN_TOL {
                let (arr, label) = if dre > HERMITIAN_TOL {
                    (re, "re")
                } else {
                    (im, "im")
                };
                let k = if i == j { i * 4 + j } else { j * 4 + i };
                return Err(Error::Parse {
                    line: line_of(text, arr[k].span().start),
                    message: format!(
                        "matrix is not Hermitian: {label} entry ({j},{i}) does not match the conjugate of ({i},{j}) \
                         (({:e}{:+e}i) vs ({:e}{:+e}i))",
                        b.re, b.im, a.re, a.im
                    ),
                });
            }
        }
    }
    Ok(m)
}

/// Parses and validates a state file.
pub fn parse_state_file(text: &str) -> Result<TwoQubitState> {
    TwoQubitState::new(parse_state_matrix(text)?)
}

/// Serializes a state in the format accepted by [`parse_state_file`].
pub fn write_state_file(rho: &TwoQubitState) -> String {
    let m = rho.matrix();
    let mut out = String::from("dims = [4, 4]\n");
    for (name, part) in [("re", 0), ("im", 1)] {
        out.push_str(name);
        out.push_str(" = [\n");
        for i in 0..4 {
            out.push_str("  ");
            for j in 0..4 {
                let z = m[(i, j)];
                let v = if part == 0 { z.re } else { z.im };
                out.push_str(&format!("{v:?},"));
                if j < 3 {
                    out.push(' ');
                }
            }
            out.push('\n');
        }
        out.push_str("]\n");
    }
    out
}
