use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GenError;
use crate::instance::{floyd_warshall, MetricInstance};
use crate::matrix::Matrix;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RandomModel {
    /// Integer weights in 1..=100, then shortest-path closure.
    #[serde(rename = "uniform")]
    UniformMatrixClosure,
    /// Points on a 0..=10 integer grid, L1 distances.
    #[serde(rename = "grid")]
    IntegerGrid2D,
    /// Every weight 1 or 2.
    #[serde(rename = "w12")]
    Weights12,
}

impl RandomModel {
    pub const ALL: [RandomModel; 3] =
        [RandomModel::UniformMatrixClosure, RandomModel::IntegerGrid2D, RandomModel::Weights12];

    pub fn as_str(self) -> &'static str {
        match self {
            RandomModel::UniformMatrixClosure => "uniform",
            RandomModel::IntegerGrid2D => "grid",
            RandomModel::Weights12 => "w12",
        }
    }
}

impl std::str::FromStr for RandomModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        RandomModel::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown model {s:?} (uniform, grid, w12)"))
    }
}

pub fn gen_random_metric(n_pairs: usize, seed: u64, model: RandomModel) -> Result<MetricInstance, GenError> {
    if n_pairs == 0 {
        return Err(GenError::NoPairs);
    }
    let n = 2 * n_pairs;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let meta = serde_json::json!({"family": "random", "model": model.as_str(), "seed": seed});
    let inst = match model {
        RandomModel::UniformMatrixClosure => {
            let raw = symmetric(n, || Weight::from_int(rng.gen_range(1..=100)));
            MetricInstance::new(n_pairs, floyd_warshall(&raw))?
        }
        RandomModel::Weights12 => {
            MetricInstance::new(n_pairs, symmetric(n, || Weight::from_int(rng.gen_range(1..=2))))?
        }
        RandomModel::IntegerGrid2D => {
            let pts: Vec<(u64, u64)> = (0..n).map(|_| (rng.gen_range(0..=10), rng.gen_range(0..=10))).collect();
            let m =
                Matrix::from_fn(n, |u, v| Weight::from_int(pts[u].0.abs_diff(pts[v].0) + pts[u].1.abs_diff(pts[v].1)));
            let points = pts.iter().map(|&(x, y)| vec![Weight::from_int(x), Weight::from_int(y)]).collect();
            MetricInstance::new(n_pairs, m)?.with_points(points)?
        }
    };
    Ok(inst.with_meta(meta))
}

fn symmetric(n: usize, mut draw: impl FnMut() -> Weight) -> Matrix<Weight> {
    let mut m = Matrix::filled(n, Weight::zero());
    for u in 0..n {
        for v in u + 1..n {
            m.set_sym(u, v, draw());
        }
    }
    m
}
