//! Shared test support: seeded random feasible standard-pair chains.

use pgn_core::dims::Dims;
use pgn_core::rational::{int, rat, Rational};
use pgn_core::standard::{build_standard_chain, check_pair_feasible, StandardSpec};
use pgn_core::template::Template;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A seeded stream of valid balanced templates built from feasible
/// standard-pair chains with dims up to (3, 3).
pub struct ChainSampler {
    rng: ChaCha8Rng,
}

impl ChainSampler {
    pub fn new(seed: u64) -> Self {
        ChainSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn small_ratio(&mut self, max_num: i64, max_den: i64) -> Rational {
        let num = self.rng.gen_range(0..=max_num);
        let den = self.rng.gen_range(1..=max_den);
        rat(num, den)
    }

    /// One random template together with its dims.
    pub fn sample(&mut self) -> (Dims, Template) {
        loop {
            let m = self.rng.gen_range(1..=3usize);
            let n = self.rng.gen_range(1..=3usize);
            let dims = Dims::new(m, n).unwrap();
            let pairs = self.rng.gen_range(1..=4usize);
            let mut points: Vec<(Rational, Rational)> = Vec::new();
            let eps0 = if m == 1 && n == 1 {
                int(0)
            } else {
                self.small_ratio(2, 3)
            };
            points.push((int(0), eps0));
            let mut ok = true;
            for _ in 0..pairs {
                let (prev_t, prev_e) = points.last().unwrap().clone();
                let mut accepted = false;
                for _ in 0..60 {
                    let dt = self.small_ratio(8, 2) + rat(1, 2);
                    let eps = if m == 1 && n == 1 {
                        int(0)
                    } else {
                        self.small_ratio(3, 4)
                    };
                    let cand = (&prev_t + &dt, eps);
                    if check_pair_feasible(dims, &(prev_t.clone(), prev_e.clone()), &cand).is_ok()
                    {
                        points.push(cand);
                        accepted = true;
                        break;
                    }
                }
                if !accepted {
                    // Force feasibility: keep eps constant and stretch the
                    // step until the merge clearance holds.
                    let mut dt = int(2);
                    let mut placed = false;
                    for _ in 0..20 {
                        let cand = (&prev_t + &dt, prev_e.clone());
                        if check_pair_feasible(dims, &(prev_t.clone(), prev_e.clone()), &cand)
                            .is_ok()
                        {
                            points.push(cand);
                            placed = true;
                            break;
                        }
                        dt *= int(2);
                    }
                    if !placed {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let spec = StandardSpec { dims, points };
            match build_standard_chain(&spec) {
                Ok(t) => return (dims, t),
                Err(_) => continue,
            }
        }
    }
}
