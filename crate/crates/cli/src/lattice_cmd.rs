//! `pgn lattice ...`: flow profiles as CSV.

use clap::Subcommand;
use pgn_core::dims::Dims;
use pgn_core::lattice::{approx_template_check, h_profile, FlowMatrix};

use crate::config::Config;
use crate::parse;

#[derive(Subcommand)]
pub enum LatticeCmd {
    /// CSV (t, h_1..h_d, sum) of log successive minima of g_t u_A Z^d.
    Profile {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Entries "a,b;c,d", or zero | golden | rational:p/q.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        budget: Option<u64>,
        /// Append a template-conditions report to stderr.
        #[arg(long, default_value_t = false)]
        check: bool,
    },
}

pub fn run(cmd: LatticeCmd, cfg: &Config) -> anyhow::Result<()> {
    match cmd {
        LatticeCmd::Profile {
            m,
            n,
            matrix,
            t_max,
            step,
            budget,
            check,
        } => {
            let dims = Dims::new(m, n)?;
            let entries = parse::matrix(&matrix, m, n)?;
            let flow = FlowMatrix::new(dims, entries)?;
            let t_max = t_max.unwrap_or(cfg.t_max);
            let step = step.unwrap_or(cfg.step);
            if !(step > 0.0 && t_max >= 0.0) {
                anyhow::bail!("need step > 0 and t_max >= 0");
            }
            let mut grid = Vec::new();
            let mut t = 0.0;
            while t <= t_max + 1e-12 {
                grid.push(t);
                t += step;
            }
            let profile = h_profile(&flow, &grid, budget.unwrap_or(cfg.enumeration_budget))?;
            let d = dims.d();
            let header: Vec<String> = (1..=d).map(|i| format!("h{i}")).collect();
            println!("t,{},sum", header.join(","));
            for (i, &t) in profile.times.iter().enumerate() {
                let row: Vec<String> = profile.h[i].iter().map(|x| x.to_string()).collect();
                let sum: f64 = profile.h[i].iter().sum();
                println!("{t},{},{sum}", row.join(","));
            }
            if check {
                let report = approx_template_check(&profile, cfg.slope_tolerance, cfg.separation);
                eprintln!(
                    "ordering ok: {}; slope violations: {}; band reports: {}",
                    report.ordering_ok(),
                    report.slope_violations.len(),
                    report.band_reports.len()
                );
                for b in &report.band_reports {
                    eprintln!(
                        "  level {} on [{:.3}, {:.3}]: band width {:.4}",
                        b.level, b.t_start, b.t_end, b.band_width
                    );
                }
            }
            Ok(())
        }
    }
}
