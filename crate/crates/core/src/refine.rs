//! Simulated-annealing vertex search that lowers sampled distortion while
//! keeping every accepted curve at least `clearance_floor` away from
//! itself.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distortion::distortion_sampled_with;
use crate::error::{Error, Result};
use crate::geom::{segment_min_distance, Point3, PolyCurve};
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RefineConfig {
    pub iterations: u64,
    /// Largest displacement of a single move. Clamped to half the floor.
    pub step: f64,
    pub clearance_floor: f64,
    pub seed: u64,
    /// Geometric temperature decay per iteration, in `(0, 1)`.
    pub cooling: f64,
    pub temperature: f64,
    /// Uniform samples added to the vertices when evaluating the objective.
    pub samples: usize,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            iterations: 10_000,
            step: 0.01,
            clearance_floor: 0.02,
            seed: 0,
            cooling: 0.9999,
            temperature: 1e-3,
            samples: 128,
        }
    }
}

impl RefineConfig {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.step.is_nan() || self.step <= 0.0 {
            return bad(format!("step must be positive, got {}", self.step));
        }
        if self.clearance_floor.is_nan() || self.clearance_floor <= 0.0 {
            return bad(format!(
                "clearance_floor must be positive, got {}",
                self.clearance_floor
            ));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return bad(format!("cooling must lie in (0, 1), got {}", self.cooling));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return bad(format!("temperature must be non-negative, got {}", self.temperature));
        }
        if self.samples < 8 {
            return bad(format!("samples must be at least 8, got {}", self.samples));
        }
        Ok(())
    }

    pub fn effective_step(&self) -> f64 {
        self.step.min(self.clearance_floor / 2.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub iteration: u64,
    pub best_ratio: f64,
    pub clearance: f64,
}

#[derive(Clone, Debug)]
pub struct RefineResult {
    pub curve: PolyCurve,
    pub initial_ratio: f64,
    pub best_ratio: f64,
    pub accepted: u64,
    /// Smallest clearance over every accepted state, start included.
    pub min_clearance_seen: f64,
    /// One entry at the start and one per improvement of the best curve.
    pub log: Vec<LogEntry>,
}

fn objective(c: &PolyCurve, samples: usize) -> Result<f64> {
    Ok(distortion_sampled_with(c, samples, Exec::Sequential)?.ratio)
}

/// Distance from the two edges at vertex `v` to every edge sharing no
/// vertex with them.
fn local_clearance(vs: &[Point3], v: usize) -> f64 {
    let m = vs.len();
    let mut best = f64::INFINITY;
    for e in [(v + m - 1) % m, v] {
        let (a0, a1) = (vs[e], vs[(e + 1) % m]);
        for f in 0..m {
            let gap = (f + m - e) % m;
            if gap <= 1 || gap == m - 1 {
                continue;
            }
            best = best.min(segment_min_distance(a0, a1, vs[f], vs[(f + 1) % m]));
        }
    }
    best
}

fn random_offset(rng: &mut ChaCha8Rng, radius: f64) -> Point3 {
    loop {
        let p = Point3::new(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        if p.norm() <= 1.0 {
            return p * radius;
        }
    }
}

/// Runs the search. The returned curve is the best one seen, so its sampled
/// distortion never exceeds the input's.
pub fn refine(curve: &PolyCurve, cfg: &RefineConfig) -> Result<RefineResult> {
    cfg.validate()?;
    let start_clearance = curve.min_clearance();
    if start_clearance < cfg.clearance_floor {
        return Err(Error::InfeasibleStart {
            clearance: start_clearance,
            floor: cfg.clearance_floor,
        });
    }
    let step = cfg.effective_step();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let initial = objective(curve, cfg.samples)?;
    let mut current = curve.clone();
    let mut current_ratio = initial;
    let mut best = curve.clone();
    let mut best_ratio = initial;
    let mut temperature = cfg.temperature;
    let mut accepted = 0;
    let mut min_seen = start_clearance;
    let mut log = vec![LogEntry {
        iteration: 0,
        best_ratio: initial,
        clearance: start_clearance,
    }];

    for iteration in 1..=cfg.iterations {
        temperature *= cfg.cooling;
        let m = current.num_vertices();
        let v = rng.gen_range(0..m);
        let mut vs = current.vertices().to_vec();
        vs[v] = vs[v] + random_offset(&mut rng, step);
        let coin: f64 = rng.gen();

        if local_clearance(&vs, v) < cfg.clearance_floor {
            continue;
        }
        let Ok(candidate) = PolyCurve::new(vs) else { continue };
        if candidate.num_vertices() != m {
            continue;
        }
        let ratio = objective(&candidate, cfg.samples)?;
        let delta = ratio - current_ratio;
        let take = delta <= 0.0 || (temperature > 0.0 && coin < (-delta / temperature).exp());
        if !take {
            continue;
        }
        let clearance = candidate.min_clearance();
        if clearance < cfg.clearance_floor {
            return Err(Error::InvalidConfig(format!(
                "accepted state at iteration {iteration} has clearance {clearance} below the floor"
            )));
        }
        min_seen = min_seen.min(clearance);
        accepted += 1;
        current = candidate;
        current_ratio = ratio;
        if ratio < best_ratio {
            best_ratio = ratio;
            best = current.clone();
            log.push(LogEntry {
                iteration,
                best_ratio,
                clearance,
            });
        }
    }

    Ok(RefineResult {
        curve: best,
        initial_ratio: initial,
        best_ratio,
        accepted,
        min_clearance_seen: min_seen,
        log,
    })
}

/// Regular `m`-gon of unit radius in the `xy` plane with each vertex pushed
/// radially by a uniform amount in `[-jitter, jitter]`.
pub fn jittered_polygon(m: usize, jitter: f64, seed: u64) -> Result<PolyCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..m)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / m as f64;
            let r = 1.0
                + if jitter > 0.0 {
                    rng.gen_range(-jitter..=jitter)
                } else {
                    0.0
                };
            Point3::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect();
    PolyCurve::new(pts)
}
