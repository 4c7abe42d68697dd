//! `pgn template ...`: constructors, validation, analysis, rates.

use clap::Subcommand;
use pgn_core::analysis::{analyze_all, contraction_average};
use pgn_core::dims::Dims;
use pgn_core::families::{build_2x2_three_param, build_n1_case2, build_sing_on_average, build_starkov};
use pgn_core::ksingular::build_ksingular;
use pgn_core::rates::asymptotic_rates;
use pgn_core::rational::{format_ratio, to_f64};
use pgn_core::standard::{build_standard_chain, build_two_param, StandardSpec, TwoParamSpec};
use pgn_core::template::Template;
use serde::Serialize;
use std::path::PathBuf;

use crate::{envelope, parse};

#[derive(Subcommand)]
pub enum TemplateCmd {
    /// Build a template from one of the named families and print its JSON.
    Build {
        /// standard | two-param | 2x2 | ksingular | starkov | avg
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Points "t:eps,t:eps,..." for the standard family.
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        ratio: Option<String>,
        /// Proportion parameter for the avg family.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        /// Bound table "t:phi,t:phi,..." for the starkov family.
        #[arg(long)]
        phi: Option<String>,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate a template JSON file.
    Validate { file: PathBuf },
    /// Per-interval contraction analysis of a template JSON file.
    Analyze { file: PathBuf },
    /// Asymptotic average contraction rates.
    Rates { file: PathBuf },
    /// Average contraction over [from, to].
    Average {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
}

fn parse_points(s: &str) -> anyhow::Result<Vec<(pgn_core::rational::Rational, pgn_core::rational::Rational)>> {
    s.split(',')
        .map(|pair| {
            let (t, e) = pair
                .split_once(':')
                .ok_or_else(|| anyhow::anyhow!("point {pair:?} is not t:eps"))?;
            Ok((parse::ratio(t.trim())?, parse::ratio(e.trim())?))
        })
        .collect()
}

fn load_template(file: &PathBuf) -> anyhow::Result<Template> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", file.display()))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn run(cmd: TemplateCmd) -> anyhow::Result<()> {
    match cmd {
        TemplateCmd::Build {
            family,
            m,
            n,
            points,
            tau,
            lambda,
            gamma,
            k,
            j,
            ratio,
            p,
            eps,
            phi,
            output,
        } => {
            let dims = Dims::new(m, n)?;
            let need = |name: &str, v: &Option<String>| -> anyhow::Result<pgn_core::rational::Rational> {
                v.as_deref()
                    .ok_or_else(|| anyhow::anyhow!("--{name} is required for this family"))
                    .and_then(parse::ratio)
            };
            let template = match family.as_str() {
                "standard" => {
                    let spec = StandardSpec {
                        dims,
                        points: parse_points(
                            points
                                .as_deref()
                                .ok_or_else(|| anyhow::anyhow!("--points required"))?,
                        )?,
                    };
                    build_standard_chain(&spec)?
                }
                "two-param" => build_two_param(&TwoParamSpec {
                    dims,
                    tau: need("tau", &tau)?,
                    lambda: need("lambda", &lambda)?,
                })?,
                "2x2" => {
                    let g = match &gamma {
                        Some(s) => Some(parse::ratio(s)?),
                        None => None,
                    };
                    build_2x2_three_param(&need("tau", &tau)?, &need("lambda", &lambda)?, g.as_ref())?
                }
                "ksingular" => build_ksingular(
                    dims,
                    k.ok_or_else(|| anyhow::anyhow!("--k required"))?,
                    j.ok_or_else(|| anyhow::anyhow!("--j required"))?,
                    &ratio
                        .as_deref()
                        .map(parse::ratio)
                        .transpose()?
                        .unwrap_or_else(|| pgn_core::rational::int(100)),
                )?,
                "n1-case2" => build_n1_case2(m, &need("tau", &tau)?)?.0,
                "starkov" => build_starkov(
                    dims,
                    &parse_points(
                        phi.as_deref()
                            .ok_or_else(|| anyhow::anyhow!("--phi required"))?,
                    )?,
                )?,
                "avg" => build_sing_on_average(dims, &need("p", &p)?, &need("eps", &eps)?)?,
                other => anyhow::bail!(
                    "unknown family {other:?} (standard | two-param | 2x2 | ksingular | n1-case2 | starkov | avg)"
                ),
            };
            let json = serde_json::to_string_pretty(&template)?;
            match output {
                Some(path) => std::fs::write(&path, json)?,
                None => println!("{json}"),
            }
            Ok(())
        }
        TemplateCmd::Validate { file } => {
            let template = load_template(&file)?;
            let report = template.validate();
            #[derive(Serialize)]
            struct Out {
                ok: bool,
                balanced: bool,
                violations: Vec<String>,
            }
            envelope::emit_json(
                "template validate",
                Out {
                    ok: report.ok(),
                    balanced: template.balance_check(),
                    violations: report
                        .violations
                        .iter()
                        .map(|v| format!("{:?} at {}: {}", v.condition, v.location, v.detail))
                        .collect(),
                },
                "template conditions: ordering, slope range, quantized convex partial sums",
            )
        }
        TemplateCmd::Analyze { file } => {
            let template = load_template(&file)?;
            let analyses = analyze_all(&template)?;
            #[derive(Serialize)]
            struct Row {
                start: String,
                end: Option<String>,
                s_plus: Vec<usize>,
                s_minus: Vec<usize>,
                delta: usize,
            }
            let rows: Vec<Row> = analyses
                .iter()
                .map(|a| Row {
                    start: format_ratio(&a.start),
                    end: a.end.as_ref().map(format_ratio),
                    s_plus: a.s_plus.clone(),
                    s_minus: a.s_minus.clone(),
                    delta: a.delta,
                })
                .collect();
            envelope::emit_json(
                "template analyze",
                rows,
                "delta(f, I) counts approaching rising/falling index pairs",
            )
        }
        TemplateCmd::Rates { file } => {
            let template = load_template(&file)?;
            let rates = asymptotic_rates(&template)?;
            #[derive(Serialize)]
            struct Out {
                lower_exact: Option<String>,
                upper_exact: Option<String>,
                lower: Option<f64>,
                upper: Option<f64>,
                method: String,
            }
            envelope::emit_json(
                "template rates",
                Out {
                    lower_exact: rates.lower.as_ref().map(format_ratio),
                    upper_exact: rates.upper.as_ref().map(format_ratio),
                    lower: rates.lower.as_ref().map(to_f64),
                    upper: rates.upper.as_ref().map(to_f64),
                    method: format!("{:?}", rates.method),
                },
                "liminf/limsup of (1/T) integral of delta(f, t)",
            )
        }
        TemplateCmd::Average { file, from, to } => {
            let template = load_template(&file)?;
            let value = contraction_average(&template, &parse::ratio(&from)?, &parse::ratio(&to)?)?;
            envelope::emit_ratio(
                "template average",
                &value,
                "(1/(T2-T1)) integral of delta(f, t) over [T1, T2]",
            )
        }
    }
}
