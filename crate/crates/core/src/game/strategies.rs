//! Built-in strategies.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AliceStrategy, BobStrategy, GameConfig};

/// Alice plays the single point at the origin every turn: always legal,
/// score zero.
pub struct AliceSingleton;

impl AliceStrategy for AliceSingleton {
    fn choose(&mut self, config: &GameConfig, _turn: usize) -> Vec<Vec<f64>> {
        vec![vec![0.0; config.space_dim()]]
    }
}

/// Alice packs a deterministic cubic grid of spacing equal to the required
/// separation into the allowed ball. Reproducible by construction; the
/// count only affects the achievable score, not legality.
pub struct AliceMaxPacking;

impl AliceStrategy for AliceMaxPacking {
    fn choose(&mut self, config: &GameConfig, turn: usize) -> Vec<Vec<f64>> {
        let (spacing, radius) = if turn == 0 {
            (3.0 * config.rho0, 1.0)
        } else {
            (3.0 * config.beta, 1.0 - config.beta)
        };
        let dim = config.space_dim();
        let reach = (radius / spacing).floor() as i64;
        let mut points = Vec::new();
        let mut index = vec![-reach; dim];
        'outer: loop {
            let p: Vec<f64> = index.iter().map(|&i| i as f64 * spacing).collect();
            let norm: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= radius {
                points.push(p);
            }
            for pos in 0..dim {
                index[pos] += 1;
                if index[pos] <= reach {
                    continue 'outer;
                }
                index[pos] = -reach;
            }
            break;
        }
        if points.is_empty() {
            points.push(vec![0.0; dim]);
        }
        points
    }
}

/// Alice replays a prepared list of sets.
pub struct AliceScripted {
    pub sets: Vec<Vec<Vec<f64>>>,
}

impl AliceStrategy for AliceScripted {
    fn choose(&mut self, config: &GameConfig, turn: usize) -> Vec<Vec<f64>> {
        self.sets
            .get(turn)
            .cloned()
            .unwrap_or_else(|| vec![vec![0.0; config.space_dim()]])
    }
}

/// Bob picks uniformly at random with a seeded generator.
pub struct BobRandom {
    rng: ChaCha8Rng,
}

impl BobRandom {
    pub fn seeded(seed: u64) -> Self {
        BobRandom {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl BobStrategy for BobRandom {
    fn pick(&mut self, _config: &GameConfig, _turn: usize, set: &[Vec<f64>]) -> usize {
        self.rng.gen_range(0..set.len())
    }
}

/// Bob always takes the first element.
pub struct BobFirst;

impl BobStrategy for BobFirst {
    fn pick(&mut self, _config: &GameConfig, _turn: usize, _set: &[Vec<f64>]) -> usize {
        0
    }
}

/// Bob replays a prepared list of picks (clamped into range).
pub struct BobScripted {
    pub picks: Vec<usize>,
}

impl BobStrategy for BobScripted {
    fn pick(&mut self, _config: &GameConfig, turn: usize, set: &[Vec<f64>]) -> usize {
        self.picks.get(turn).copied().unwrap_or(0).min(set.len() - 1)
    }
}

/// Builds an Alice strategy by name.
pub fn alice_by_name(name: &str) -> Option<Box<dyn AliceStrategy>> {
    match name {
        "singleton" => Some(Box::new(AliceSingleton)),
        "max-packing" => Some(Box::new(AliceMaxPacking)),
        _ => None,
    }
}

/// Builds a Bob strategy by name (random strategies take the seed).
pub fn bob_by_name(name: &str, seed: u64) -> Option<Box<dyn BobStrategy>> {
    match name {
        "random" => Some(Box::new(BobRandom::seeded(seed))),
        "first" => Some(Box::new(BobFirst)),
        _ => None,
    }
}
