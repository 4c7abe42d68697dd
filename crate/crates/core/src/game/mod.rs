//! The dimension-computing Hausdorff/packing ball game, modified rules.
//!
//! Moves are kept in rescaled coordinates: Alice's set on turn `k >= 1`
//! must be `3 beta`-separated and contained in the closed ball of radius
//! `1 - beta`; her opening set is `3 rho_0`-separated and unconstrained
//! otherwise. Bob picks one point per turn. The outcome resums the original
//! coordinates; the score averages `log #A_k / (-log beta)`.

pub mod strategies;
pub mod trace;

use serde::{Deserialize, Serialize};

use crate::dims::Dims;
use std::fmt;

/// Which score the transcript is judged by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameMode {
    Hausdorff,
    Packing,
}

/// Parameters of a finite-horizon game.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameConfig {
    pub dims: Dims,
    pub beta: f64,
    pub rho0: f64,
    /// Number of turns played.
    pub horizon: usize,
    pub mode: GameMode,
}

impl GameConfig {
    pub fn new(dims: Dims, beta: f64, rho0: f64, horizon: usize, mode: GameMode) -> Result<Self, GameError> {
        if !(0.0 < beta && beta < 1.0) {
            return Err(GameError::BadConfig(format!("beta = {beta} outside (0, 1)")));
        }
        if !(rho0 > 0.0 && rho0.is_finite()) {
            return Err(GameError::BadConfig(format!("rho0 = {rho0} must be positive")));
        }
        if horizon == 0 {
            return Err(GameError::BadConfig("horizon must be at least 1".into()));
        }
        Ok(GameConfig {
            dims,
            beta,
            rho0,
            horizon,
            mode,
        })
    }

    /// Ambient dimension of the move space (matrices flattened row-major).
    pub fn space_dim(&self) -> usize {
        self.dims.mn()
    }

    /// `rho_{-1} = rho_0 / beta`.
    pub fn rho_minus_one(&self) -> f64 {
        self.rho0 / self.beta
    }
}

/// Rule violations and usage errors.
#[derive(Clone, Debug, PartialEq)]
pub enum GameError {
    BadConfig(String),
    EmptySet { turn: usize },
    Separation { turn: usize, i: usize, j: usize, dist: f64, required: f64 },
    Containment { turn: usize, i: usize, norm: f64, allowed: f64 },
    BadPick { turn: usize, pick: usize, set_size: usize },
    BadShape { turn: usize },
    NumericalInstability(String),
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::BadConfig(s) => write!(f, "bad config: {s}"),
            GameError::EmptySet { turn } => write!(f, "turn {turn}: empty move set"),
            GameError::Separation { turn, i, j, dist, required } => write!(
                f,
                "turn {turn}: separation rule violated by points {i}, {j} (distance {dist} < {required})"
            ),
            GameError::Containment { turn, i, norm, allowed } => write!(
                f,
                "turn {turn}: containment rule violated by point {i} (norm {norm} > {allowed})"
            ),
            GameError::BadPick { turn, pick, set_size } => {
                write!(f, "turn {turn}: pick {pick} outside set of size {set_size}")
            }
            GameError::BadShape { turn } => write!(f, "turn {turn}: point of wrong dimension"),
            GameError::NumericalInstability(s) => write!(f, "numerical instability: {s}"),
        }
    }
}

impl std::error::Error for GameError {}

/// Full record of one game.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameTranscript {
    pub config: GameConfig,
    /// Alice's sets, one per turn.
    pub alice_sets: Vec<Vec<Vec<f64>>>,
    /// Bob's picks: indices into the corresponding sets.
    pub bob_picks: Vec<usize>,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Validates one Alice move against the rules for its turn.
pub fn validate_move(config: &GameConfig, turn: usize, set: &[Vec<f64>]) -> Result<(), GameError> {
    if set.is_empty() {
        return Err(GameError::EmptySet { turn });
    }
    let space = config.space_dim();
    if set.iter().any(|p| p.len() != space) {
        return Err(GameError::BadShape { turn });
    }
    let required = if turn == 0 {
        3.0 * config.rho0
    } else {
        3.0 * config.beta
    };
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let d = dist(&set[i], &set[j]);
            if d < required * (1.0 - 1e-12) {
                return Err(GameError::Separation {
                    turn,
                    i,
                    j,
                    dist: d,
                    required,
                });
            }
        }
    }
    if turn >= 1 {
        let allowed = 1.0 - config.beta;
        for (i, p) in set.iter().enumerate() {
            let nrm = norm(p);
            if nrm > allowed * (1.0 + 1e-12) {
                return Err(GameError::Containment {
                    turn,
                    i,
                    norm: nrm,
                    allowed,
                });
            }
        }
    }
    Ok(())
}

/// Replays a transcript through the validator.
pub fn validate_transcript(transcript: &GameTranscript) -> Result<(), GameError> {
    let config = &transcript.config;
    if transcript.alice_sets.len() != config.horizon
        || transcript.bob_picks.len() != config.horizon
    {
        return Err(GameError::BadConfig(format!(
            "transcript length {} does not match horizon {}",
            transcript.alice_sets.len(),
            config.horizon
        )));
    }
    for (turn, set) in transcript.alice_sets.iter().enumerate() {
        validate_move(config, turn, set)?;
        let pick = transcript.bob_picks[turn];
        if pick >= set.len() {
            return Err(GameError::BadPick {
                turn,
                pick,
                set_size: set.len(),
            });
        }
    }
    Ok(())
}

/// Alice chooses a finite set each turn.
pub trait AliceStrategy {
    fn choose(&mut self, config: &GameConfig, turn: usize) -> Vec<Vec<f64>>;
}

/// Bob picks an element of Alice's set.
pub trait BobStrategy {
    fn pick(&mut self, config: &GameConfig, turn: usize, set: &[Vec<f64>]) -> usize;
}

/// Plays a full game, validating every move as it is made.
pub fn play(
    config: &GameConfig,
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
) -> Result<GameTranscript, GameError> {
    let mut alice_sets = Vec::with_capacity(config.horizon);
    let mut bob_picks = Vec::with_capacity(config.horizon);
    for turn in 0..config.horizon {
        let set = alice.choose(config, turn);
        validate_move(config, turn, &set)?;
        let pick = bob.pick(config, turn, &set);
        if pick >= set.len() {
            return Err(GameError::BadPick {
                turn,
                pick,
                set_size: set.len(),
            });
        }
        alice_sets.push(set);
        bob_picks.push(pick);
    }
    Ok(GameTranscript {
        config: config.clone(),
        alice_sets,
        bob_picks,
    })
}

/// Score summary: per-turn contributions, running means, and the finite-
/// horizon liminf/limsup estimates (min/max of the running mean over the
/// tail half).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub per_turn: Vec<f64>,
    pub running_mean: Vec<f64>,
    pub liminf_estimate: f64,
    pub limsup_estimate: f64,
    /// The estimate selected by the game mode.
    pub score: f64,
}

/// Score arithmetic from the per-turn set sizes alone. The running mean
/// after `k+1` turns is `(1/(k+1)) sum_{i<=k} log #A_i / (-log beta)`; on
/// constant-count sequences every running mean equals `log N / (-log beta)`
/// exactly.
pub fn score_from_counts(counts: &[usize], beta: f64, mode: GameMode) -> ScoreSummary {
    let denom = -(beta.ln());
    let per_turn: Vec<f64> = counts.iter().map(|&n| (n as f64).ln() / denom).collect();
    let mut running_mean = Vec::with_capacity(per_turn.len());
    let mut acc = 0.0;
    for (i, x) in per_turn.iter().enumerate() {
        acc += x;
        running_mean.push(acc / (i + 1) as f64);
    }
    let tail_start = running_mean.len() / 2;
    let tail = &running_mean[tail_start..];
    let liminf_estimate = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let limsup_estimate = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let score = match mode {
        GameMode::Hausdorff => liminf_estimate,
        GameMode::Packing => limsup_estimate,
    };
    ScoreSummary {
        per_turn,
        running_mean,
        liminf_estimate,
        limsup_estimate,
        score,
    }
}

/// Scores a transcript (pure arithmetic; legality is the responsibility of
/// [`validate_transcript`], which the play path and the re-check command
/// run).
pub fn score(transcript: &GameTranscript, mode: GameMode) -> ScoreSummary {
    let counts: Vec<usize> = transcript.alice_sets.iter().map(|s| s.len()).collect();
    score_from_counts(&counts, transcript.config.beta, mode)
}

/// Truncated outcome `x_0 + sum_{k>=1} beta^k rho_{-1} x_k` with the
/// geometric bound on the discarded tail.
pub fn outcome(transcript: &GameTranscript) -> (Vec<f64>, f64) {
    let config = &transcript.config;
    let rho_m1 = config.rho_minus_one();
    let space = config.space_dim();
    let mut x = vec![0.0; space];
    for (k, (set, &pick)) in transcript
        .alice_sets
        .iter()
        .zip(&transcript.bob_picks)
        .enumerate()
    {
        let point = &set[pick];
        if k == 0 {
            x.copy_from_slice(point);
        } else {
            let w = config.beta.powi(k as i32) * rho_m1;
            for (xi, pi) in x.iter_mut().zip(point) {
                *xi += w * pi;
            }
        }
    }
    let k1 = transcript.alice_sets.len() as i32;
    let tail_bound = config.beta.powi(k1) * rho_m1 / (1.0 - config.beta);
    (x, tail_bound)
}

/// Reconstructed original-coordinates ball centers and radii: the nested
/// sequence `B_k = B(x_k, rho_k)`.
pub fn reconstruct_balls(transcript: &GameTranscript) -> Vec<(Vec<f64>, f64)> {
    let config = &transcript.config;
    let rho_m1 = config.rho_minus_one();
    let space = config.space_dim();
    let mut centers = Vec::with_capacity(transcript.alice_sets.len());
    let mut x = vec![0.0; space];
    for (k, (set, &pick)) in transcript
        .alice_sets
        .iter()
        .zip(&transcript.bob_picks)
        .enumerate()
    {
        let point = &set[pick];
        if k == 0 {
            x.copy_from_slice(point);
        } else {
            let w = config.beta.powi(k as i32) * rho_m1;
            for (xi, pi) in x.iter_mut().zip(point) {
                *xi += w * pi;
            }
        }
        centers.push((x.clone(), config.rho0 * config.beta.powi(k as i32)));
    }
    centers
}
