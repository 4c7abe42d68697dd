//! JSON output envelope: every numeric payload says which formula produced
//! it, and the emitting command echoes itself for reproducibility.

use pgn_core::rational::{format_ratio, to_f64, Rational};
use serde::Serialize;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    version: &'a str,
    value: T,
    formula: &'a str,
}

fn emit<T: Serialize>(command: &str, value: T, formula: &str) -> anyhow::Result<()> {
    let env = Envelope {
        command,
        version: env!("CARGO_PKG_VERSION"),
        value,
        formula,
    };
    println!("{}", serde_json::to_string_pretty(&env)?);
    Ok(())
}

/// Rational result: exact string plus a float rendering.
pub fn emit_ratio(command: &str, value: &Rational, formula: &str) -> anyhow::Result<()> {
    #[derive(Serialize)]
    struct Pair {
        exact: String,
        float: f64,
    }
    emit(
        command,
        Pair {
            exact: format_ratio(value),
            float: to_f64(value),
        },
        formula,
    )
}

pub fn emit_f64(command: &str, value: f64, formula: &str) -> anyhow::Result<()> {
    emit(command, value, formula)
}

pub fn emit_str(command: &str, value: &str, formula: &str) -> anyhow::Result<()> {
    emit(command, value, formula)
}

pub fn emit_json<T: Serialize>(command: &str, value: T, formula: &str) -> anyhow::Result<()> {
    emit(command, value, formula)
}
