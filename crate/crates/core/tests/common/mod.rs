#![allow(dead_code)]

use std::sync::Arc;

use fourgeom::geometry::{
    round_s4, BiaxialS4, Chart, EllipsoidS4, Geometry, PageParams, PageSpace, Profile, S2xS2, SineProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point with every coordinate in the central 90% of its range.
pub fn interior_point(chart: &Chart<f64>, rng: &mut ChaCha8Rng) -> [f64; 4] {
    let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.05..0.95));
    chart.at_fraction(&u)
}

pub fn squashed_biaxial() -> BiaxialS4<f64> {
    let f: Arc<dyn Profile<f64>> = Arc::new(SineProfile { amp: 1.0, rate: 1.0 });
    let g: Arc<dyn Profile<f64>> = Arc::new(SineProfile { amp: 0.5, rate: 1.0 });
    BiaxialS4::new(f, g, std::f64::consts::PI).unwrap()
}

/// One instance of each catalog family.
pub fn catalog() -> Vec<Geometry<f64>> {
    vec![
        round_s4(1.3).unwrap().into(),
        EllipsoidS4::new(1.0, 0.8, 1.4).unwrap().into(),
        squashed_biaxial().into(),
        PageSpace::new(PageParams::standard()).into(),
        S2xS2::new(1.0, 0.7).unwrap().into(),
    ]
}
