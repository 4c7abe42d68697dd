//! `pgn`: command-line front end for the parametric geometry of numbers
//! toolkit. Structured results are JSON envelopes on stdout; curve and
//! profile data are CSV. Exit codes: 0 success, 1 domain/computation error,
//! 2 usage error.

mod config;
mod envelope;
mod game_cmd;
mod lattice_cmd;
mod parse;
mod template_cmd;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "pgn", version, about = "parametric geometry of numbers toolkit")]
struct Cli {
    /// Optional TOML config (keys: enumeration_budget, t_max, step,
    /// slope_tolerance, separation).
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form dimension values and exponent conversions.
    Formula {
        #[command(subcommand)]
        which: FormulaCmd,
    },
    /// Curve data as CSV.
    Curves {
        #[command(subcommand)]
        which: CurvesCmd,
    },
    /// Template construction, validation, and analysis.
    Template {
        #[command(subcommand)]
        which: template_cmd::TemplateCmd,
    },
    /// Lattice successive-minima profiles.
    Lattice {
        #[command(subcommand)]
        which: lattice_cmd::LatticeCmd,
    },
    /// The Hausdorff/packing ball game.
    Game {
        #[command(subcommand)]
        which: game_cmd::GameCmd,
    },
}

#[derive(Subcommand)]
enum FormulaCmd {
    /// delta_mn = mn(1 - 1/(m+n)).
    Delta {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Exponent correspondence tau = (1/n)(omega - n/m)/(omega + 1).
    Dani {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Uniform irrationality exponent ("inf" allowed).
        #[arg(long, conflicts_with = "tau")]
        omega: Option<String>,
        /// Uniform dynamical exponent, as an exact rational "p/q".
        #[arg(long)]
        tau: Option<String>,
    },
    /// The packing-dimension curve at (m, n), tau.
    Packing {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: String,
    },
    /// k-singular dimension value f_mn(k).
    Fk {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Hausdorff dimension curve for (1,2) at tau.
    Hd12 {
        #[arg(long)]
        tau: f64,
    },
    /// Packing dimension curve for (1,2) at tau.
    Pd12 {
        #[arg(long)]
        tau: f64,
    },
    /// Dimension with prescribed proportion of time near infinity.
    Avg {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
    },
    /// Dimension of the omega-approximable set: mn(1 - tau).
    OmegaApprox {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: String,
    },
    /// Linear near-zero packing envelope delta_mn - (m^2 n/(m+n)) tau.
    Hsmall {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: String,
    },
}

#[derive(Subcommand)]
enum CurvesCmd {
    /// CSV (tau, hd, pd) for the (1,2) dimension curves.
    Sing12 {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let cfg = match config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("pgn: {e}");
            std::process::exit(2);
        }
    };
    let result = match cli.command {
        Command::Formula { which } => formula(which),
        Command::Curves { which } => curves(which),
        Command::Template { which } => template_cmd::run(which),
        Command::Lattice { which } => lattice_cmd::run(which, &cfg),
        Command::Game { which } => game_cmd::run(which),
    };
    if let Err(e) = result {
        eprintln!("pgn: {e}");
        std::process::exit(1);
    }
}

fn formula(cmd: FormulaCmd) -> anyhow::Result<()> {
    use pgn_core::dims::Dims;
    use pgn_core::formulas as f;
    use pgn_core::rational::format_ratio;

    match cmd {
        FormulaCmd::Delta { m, n } => {
            let value = f::delta_mn(Dims::new(m, n)?);
            envelope::emit_ratio("formula delta", &value, "delta_mn = m*n*(1 - 1/(m+n))")
        }
        FormulaCmd::Dani { m, n, omega, tau } => {
            let dims = Dims::new(m, n)?;
            match (omega, tau) {
                (Some(w), None) => {
                    let omega = if w == "inf" {
                        f::Omega::Infinite
                    } else {
                        f::Omega::Finite(parse::ratio(&w)?)
                    };
                    let value = f::omega_to_tau(&omega, dims)?;
                    envelope::emit_ratio(
                        "formula dani",
                        &value,
                        "tau = (1/n)(omega - n/m)/(omega + 1)",
                    )
                }
                (None, Some(t)) => {
                    let tau = parse::ratio(&t)?;
                    let omega = f::tau_to_omega(&tau, dims)?;
                    let rendered = match omega {
                        f::Omega::Infinite => "inf".to_string(),
                        f::Omega::Finite(w) => format_ratio(&w),
                    };
                    envelope::emit_str(
                        "formula dani",
                        &rendered,
                        "omega = (n/m + n*tau)/(1 - n*tau)",
                    )
                }
                _ => anyhow::bail!("pass exactly one of --omega or --tau"),
            }
        }
        FormulaCmd::Packing { m, n, tau } => {
            let dims = Dims::new(m, n)?;
            let tau = parse::ratio(&tau)?;
            let value = f::packing_rate(dims, &tau)?;
            let provenance = if f::packing_rate_is_exact(dims) {
                "packing rate = max(mn - m, delta_mn - (mn/(m+n))(d+m)tau, mn - (mn/(m+n))(1+m tau)/(1-(mn/(m-1))tau))"
            } else {
                "packing rate (lower bound only for n = 1) = max(mn - m, delta_mn - (mn/(m+n))(d+m)tau, mn - (mn/(m+n))(1+m tau)/(1-(mn/(m-1))tau))"
            };
            envelope::emit_ratio("formula packing", &value, provenance)
        }
        FormulaCmd::Fk { m, n, k } => {
            let value = f::fmn_k(Dims::new(m, n)?, k)?;
            envelope::emit_ratio(
                "formula fk",
                &value,
                "f_mn(k) = mn - k(d-k)mn/d^2 - frac(km/d)*frac(kn/d)",
            )
        }
        FormulaCmd::Hd12 { tau } => envelope::emit_f64(
            "formula hd12",
            f::hd_sing12(tau)?,
            "4/3 - (4/3)sqrt(tau - 6 tau^3 + 4 tau^4) - 2 tau + (8/3) tau^2 below the transition, (1 - 2 tau)/(1 + tau) above",
        ),
        FormulaCmd::Pd12 { tau } => envelope::emit_f64(
            "formula pd12",
            f::pd_sing12(tau)?,
            "(4 - 8 tau)/3 for tau <= 1/8, else 1",
        ),
        FormulaCmd::Avg { m, n, p } => {
            let value = f::avg_singular_rate(Dims::new(m, n)?, &parse::ratio(&p)?)?;
            envelope::emit_ratio("formula avg", &value, "p*delta_mn + (1-p)*mn")
        }
        FormulaCmd::OmegaApprox { m, n, tau } => {
            let value = f::omega_approx_rate(Dims::new(m, n)?, &parse::ratio(&tau)?)?;
            envelope::emit_ratio("formula omega-approx", &value, "mn(1 - tau)")
        }
        FormulaCmd::Hsmall { m, n, tau } => {
            let value = f::hsmall_envelope(Dims::new(m, n)?, &parse::ratio(&tau)?)?;
            envelope::emit_ratio("formula hsmall", &value, "delta_mn - (m^2 n/(m+n)) tau")
        }
    }
}

fn curves(cmd: CurvesCmd) -> anyhow::Result<()> {
    match cmd {
        CurvesCmd::Sing12 { samples } => {
            use pgn_core::formulas::{hd_sing12, pd_sing12};
            if samples == 0 {
                anyhow::bail!("need at least one sample");
            }
            println!("tau,hd,pd");
            for i in 1..=samples {
                let tau = 0.5 * i as f64 / (samples as f64 + 1.0);
                println!("{tau},{},{}", hd_sing12(tau)?, pd_sing12(tau)?);
            }
            Ok(())
        }
    }
}
