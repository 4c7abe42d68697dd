//! Argument parsing helpers.

use pgn_core::rational::{parse_ratio, Rational};

/// Exact rational from "p/q" or "p".
pub fn ratio(s: &str) -> anyhow::Result<Rational> {
    Ok(parse_ratio(s)?)
}

/// Matrix entries from "a,b;c,d" rows, or the named presets.
pub fn matrix(spec: &str, m: usize, n: usize) -> anyhow::Result<Vec<Vec<f64>>> {
    match spec {
        "zero" => Ok(vec![vec![0.0; n]; m]),
        "golden" => {
            let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
            Ok(vec![vec![phi; n]; m])
        }
        other => {
            if let Some(r) = other.strip_prefix("rational:") {
                let v = pgn_core::rational::to_f64(&ratio(r)?);
                return Ok(vec![vec![v; n]; m]);
            }
            let rows: Vec<&str> = other.split(';').collect();
            if rows.len() != m {
                anyhow::bail!("expected {m} rows, found {}", rows.len());
            }
            let mut out = Vec::with_capacity(m);
            for row in rows {
                let entries: Vec<f64> = row
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<_, _>>()?;
                if entries.len() != n {
                    anyhow::bail!("expected {n} entries per row, found {}", entries.len());
                }
                out.push(entries);
            }
            Ok(out)
        }
    }
}
