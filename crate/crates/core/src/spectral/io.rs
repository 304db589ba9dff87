//! Columnar text format for fields.
//!
//! ```text
//! lambda = 2
//! num_points = 64
//! alpha = 0.75
//! m, re, im
//! -32, 0.0, 0.0
//! ...
//! ```
//!
//! Floats are written in shortest round-trip form. `#` starts a comment line.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{SpectralField, TorusSpec};
use crate::error::{Error, Result};

pub fn write_field_text<W: Write>(
    field: &SpectralField,
    alpha: Option<f64>,
    mut out: W,
) -> Result<()> {
    let spec = field.spec();
    writeln!(out, "lambda = {:?}", spec.lambda())?;
    writeln!(out, "num_points = {}", spec.num_points())?;
    if let Some(a) = alpha {
        writeln!(out, "alpha = {a:?}")?;
    }
    writeln!(out, "m, re, im")?;
    let half = (spec.num_points() / 2) as i64;
    for m in -half..half {
        let c = field.coeff(m);
        writeln!(out, "{m}, {:?}, {:?}", c.re, c.im)?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a field and the optional attached `alpha`.
pub fn read_field_text<R: BufRead>(input: R) -> Result<(SpectralField, Option<f64>)> {
    let mut lambda = None;
    let mut num_points = None;
    let mut alpha = None;
    let mut rows: Vec<(i64, Complex64)> = Vec::new();
    let mut in_body = false;

    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}: {line}", lineno + 1));
        if !in_body {
            if line.replace(' ', "") == "m,re,im" {
                in_body = true;
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value"))?;
            let value = value.trim();
            match key.trim() {
                "lambda" => lambda = Some(value.parse::<f64>().map_err(|_| bad("bad lambda"))?),
                "num_points" => {
                    num_points = Some(value.parse::<usize>().map_err(|_| bad("bad num_points"))?)
                }
                "alpha" => alpha = Some(value.parse::<f64>().map_err(|_| bad("bad alpha"))?),
                _ => return Err(bad("unknown header key")),
            }
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let m = cols.next().and_then(|v| v.parse::<i64>().ok());
        let re = cols.next().and_then(|v| v.parse::<f64>().ok());
        let im = cols.next().and_then(|v| v.parse::<f64>().ok());
        match (m, re, im, cols.next()) {
            (Some(m), Some(re), Some(im), None) => rows.push((m, Complex64::new(re, im))),
            _ => return Err(bad("expected `m, re, im`")),
        }
    }

    let lambda = lambda.ok_or_else(|| Error::Parse("missing lambda".into()))?;
    let num_points = num_points.ok_or_else(|| Error::Parse("missing num_points".into()))?;
    let spec = TorusSpec::new(lambda, num_points)?;
    let mut field = SpectralField::zeros(spec);
    for (m, c) in rows {
        if spec.slot_of_index(m).is_none() {
            return Err(Error::Parse(format!("index {m} outside storage")));
        }
        field.set_coeff(m, c);
    }
    Ok((field, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn round_trip_is_exact() {
        let spec = TorusSpec::new(2.5, 32).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let coeffs: Vec<Complex64> = (0..32)
            .map(|_| Complex64::new(rng.random::<f64>() * 1e3, -rng.random::<f64>() * 1e-7))
            .collect();
        let f = SpectralField::from_coeffs(spec, coeffs).unwrap();
        let mut buf = Vec::new();
        write_field_text(&f, Some(0.75), &mut buf).unwrap();
        let (g, alpha) = read_field_text(buf.as_slice()).unwrap();
        assert_eq!(alpha, Some(0.75));
        assert_eq!(g, f);
    }

    #[test]
    fn header_without_alpha_and_sparse_rows() {
        let text =
            "# hand written\nlambda = 1\nnum_points = 8\nm, re, im\n3, 1.5, -2\n-4, 0.25, 0\n";
        let (f, alpha) = read_field_text(text.as_bytes()).unwrap();
        assert_eq!(alpha, None);
        assert_eq!(f.coeff(3), Complex64::new(1.5, -2.0));
        assert_eq!(f.coeff(-4), Complex64::new(0.25, 0.0));
        assert_eq!(f.support(), vec![-4, 3]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_field_text("num_points = 8\nm, re, im\n".as_bytes()).is_err());
        assert!(
            read_field_text("lambda = 1\nnum_points = 8\nm, re, im\n9, 1, 1\n".as_bytes()).is_err()
        );
        assert!(
            read_field_text("lambda = 1\nnum_points = 8\nm, re, im\n1, x, 1\n".as_bytes()).is_err()
        );
        assert!(read_field_text("lambda = 1\nfoo = 2\n".as_bytes()).is_err());
    }
}
