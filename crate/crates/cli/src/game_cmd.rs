//! `pgn game ...`: play and re-check ball games.

use clap::Subcommand;
use pgn_core::dims::Dims;
use pgn_core::game::strategies::{alice_by_name, bob_by_name};
use pgn_core::game::trace::lattice_trace;
use pgn_core::game::{play, score, validate_transcript, GameConfig, GameMode, GameTranscript};
use serde::Serialize;
use std::path::PathBuf;

use crate::envelope;

#[derive(Subcommand)]
pub enum GameCmd {
    /// Play a game and emit the transcript with its score summary.
    Run {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        #[arg(long)]
        turns: usize,
        /// singleton | max-packing
        #[arg(long, default_value = "max-packing")]
        alice: String,
        /// random | first
        #[arg(long, default_value = "random")]
        bob: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// hausdorff | packing
        #[arg(long, default_value = "hausdorff")]
        mode: String,
        /// Write the transcript JSON here (stdout with the summary when
        /// omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-validate and re-score a transcript file.
    Check { file: PathBuf },
}

#[derive(Serialize)]
struct RunOut {
    transcript: GameTranscript,
    liminf_estimate: f64,
    limsup_estimate: f64,
    score: f64,
    outcome: Vec<f64>,
    outcome_tail_bound: f64,
    trace_mismatch: f64,
}

fn mode_of(s: &str) -> anyhow::Result<GameMode> {
    match s {
        "hausdorff" => Ok(GameMode::Hausdorff),
        "packing" => Ok(GameMode::Packing),
        other => anyhow::bail!("unknown mode {other:?}"),
    }
}

pub fn run(cmd: GameCmd) -> anyhow::Result<()> {
    match cmd {
        GameCmd::Run {
            m,
            n,
            beta,
            rho0,
            turns,
            alice,
            bob,
            seed,
            mode,
            output,
        } => {
            let dims = Dims::new(m, n)?;
            let mode = mode_of(&mode)?;
            let config = GameConfig::new(dims, beta, rho0, turns, mode)?;
            let mut alice = alice_by_name(&alice)
                .ok_or_else(|| anyhow::anyhow!("unknown alice strategy {alice:?}"))?;
            let mut bob = bob_by_name(&bob, seed)
                .ok_or_else(|| anyhow::anyhow!("unknown bob strategy {bob:?}"))?;
            let transcript = play(&config, alice.as_mut(), bob.as_mut())?;
            let summary = score(&transcript, mode);
            let (outcome, tail) = pgn_core::game::outcome(&transcript);
            let trace = lattice_trace(&transcript, 1e-8)?;
            let out = RunOut {
                transcript,
                liminf_estimate: summary.liminf_estimate,
                limsup_estimate: summary.limsup_estimate,
                score: summary.score,
                outcome,
                outcome_tail_bound: tail,
                trace_mismatch: trace.max_relative_mismatch,
            };
            let json = serde_json::to_string_pretty(&out)?;
            match output {
                Some(path) => std::fs::write(&path, json)?,
                None => println!("{json}"),
            }
            Ok(())
        }
        GameCmd::Check { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", file.display()))?;
            // Accept either a bare transcript or a run output wrapper.
            let transcript: GameTranscript = match serde_json::from_str(&text) {
                Ok(t) => t,
                Err(_) => {
                    let wrapper: serde_json::Value = serde_json::from_str(&text)?;
                    serde_json::from_value(
                        wrapper
                            .get("transcript")
                            .cloned()
                            .ok_or_else(|| anyhow::anyhow!("no transcript in file"))?,
                    )?
                }
            };
            validate_transcript(&transcript)?;
            let summary = score(&transcript, transcript.config.mode);
            #[derive(Serialize)]
            struct CheckOut {
                legal: bool,
                turns: usize,
                liminf_estimate: f64,
                limsup_estimate: f64,
                score: f64,
            }
            envelope::emit_json(
                "game check",
                CheckOut {
                    legal: true,
                    turns: transcript.alice_sets.len(),
                    liminf_estimate: summary.liminf_estimate,
                    limsup_estimate: summary.limsup_estimate,
                    score: summary.score,
                },
                "score averages log #A_k / (-log beta)",
            )
        }
    }
}
