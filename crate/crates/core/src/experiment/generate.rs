use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dubins::{euclidean_matrix, fuel_matrix_from_poses, Pose};
use crate::error::{Error, Result};
use crate::instance::{derive_constants, validate, Instance, Layout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Dubins,
    Euclidean,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Dubins => "dubins",
            Metric::Euclidean => "euclidean",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dubins" => Ok(Metric::Dubins),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(Error::InvalidInstance(format!("unknown metric `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n_targets: usize,
    /// At most 5; the first `n_depots` of the fixed layout are used.
    pub n_depots: usize,
    /// Side of the square area.
    pub area: f64,
    pub turn_radius: f64,
    pub capacity: f64,
    pub seed: u64,
    pub metric: Metric,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n_targets: 25,
            n_depots: 5,
            area: 5000.0,
            turn_radius: 100.0,
            capacity: 4500.0,
            seed: 0,
            metric: Metric::Dubins,
        }
    }
}

/// Cap on redraws before giving up on a parameter set.
pub const MAX_DRAWS: usize = 100_000;

/// Depot positions as fractions of the area side: centre, then the
/// midpoints of the bottom, top, left and right edges pulled in by a tenth.
pub const DEPOT_SITES: [(f64, f64); 5] = [(0.5, 0.5), (0.5, 0.1), (0.5, 0.9), (0.1, 0.5), (0.9, 0.5)];

fn heading(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.0..std::f64::consts::TAU)
}

fn draw(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let side = params.area;
    let targets: Vec<Pose> = (0..params.n_targets)
        .map(|_| {
            let x = rng.gen_range(0.0..side);
            let y = rng.gen_range(0.0..side);
            Pose::new(x, y, heading(rng))
        })
        .collect();
    let depots: Vec<Pose> =
        DEPOT_SITES[..params.n_depots].iter().map(|&(fx, fy)| Pose::new(fx * side, fy * side, heading(rng))).collect();
    let (fuel, turn_radius) = match params.metric {
        Metric::Dubins => {
            (fuel_matrix_from_poses(&targets, &depots, params.turn_radius, 1.0), Some(params.turn_radius))
        }
        Metric::Euclidean => (euclidean_matrix(&targets, &depots, 1.0), None),
    };
    Instance::new(params.n_targets, params.n_depots, 0, fuel, params.capacity)?.with_layout(Layout {
        targets,
        depots,
        turn_radius,
    })
}

/// Draws instances from `seed` until one passes validation with `a < 1`.
pub fn generate(params: &GenParams) -> Result<Instance> {
    if params.n_depots == 0 || params.n_depots > DEPOT_SITES.len() {
        return Err(Error::InvalidInstance(format!("n_depots must be between 1 and {}", DEPOT_SITES.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..MAX_DRAWS {
        let inst = draw(params, &mut rng)?;
        if validate(&inst).is_ok() && !derive_constants(&inst).degenerate_bound {
            return Ok(inst);
        }
    }
    Err(Error::InvalidInstance(format!("no valid instance in {MAX_DRAWS} draws for {params:?}")))
}
