//! Seeded synthetic survey data for demos and load tests.
//!
//! The generated responses are not real participant data. Each simulated
//! participant rates three modes; the per-mode tendencies are arbitrary
//! but fixed so the output is reproducible for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::survey::{SurveyResponse, TLX_ITEMS, TLX_WEIGHT_TOTAL};

pub const DEMO_MODES: [&str; 3] = ["Eye-gaze & Pinch", "Eye-gaze & Voice", "Drag & Drop"];
pub const DEMO_SEED: u64 = 20_220_429;

struct Profile {
    /// Usability tendency in [0, 1].
    usability: f64,
    /// Mean workload per subscale, 0..100.
    workload: [f64; TLX_ITEMS],
}

const PROFILES: [Profile; 3] = [
    Profile {
        usability: 0.55,
        workload: [55.0, 40.0, 45.0, 40.0, 50.0, 45.0],
    },
    Profile {
        usability: 0.52,
        workload: [55.0, 25.0, 45.0, 42.0, 50.0, 47.0],
    },
    Profile {
        usability: 0.72,
        workload: [35.0, 42.0, 30.0, 25.0, 33.0, 28.0],
    },
];

/// Roughly normal noise in [-1, 1] (scaled Irwin–Hall).
fn noise(rng: &mut impl Rng) -> f64 {
    let s: f64 = (0..4).map(|_| rng.gen::<f64>()).sum();
    (s - 2.0) / 2.0
}

fn tlx_weights(rng: &mut impl Rng) -> [u8; TLX_ITEMS] {
    let mut w = [0u8; TLX_ITEMS];
    for i in 0..TLX_ITEMS {
        for j in (i + 1)..TLX_ITEMS {
            let winner = if rng.gen_bool(0.5) { i } else { j };
            w[winner] += 1;
        }
    }
    debug_assert_eq!(w.iter().map(|&x| u32::from(x)).sum::<u32>(), TLX_WEIGHT_TOTAL);
    w
}

/// `participants × 3` responses with TLX weights, participant-major.
pub fn generate(participants: usize, seed: u64) -> Vec<SurveyResponse> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(participants * DEMO_MODES.len());
    for p in 1..=participants {
        let leniency = 0.15 * noise(&mut rng);
        for (mode, profile) in DEMO_MODES.iter().zip(&PROFILES) {
            let u = profile.usability + leniency;
            let mut sus = [0u8; 10];
            for (i, item) in sus.iter_mut().enumerate() {
                let agree = (u + 0.35 * noise(&mut rng)).clamp(0.0, 1.0);
                let positive = 1.0 + (4.0 * agree).round();
                *item = if i % 2 == 0 { positive as u8 } else { (6.0 - positive) as u8 };
            }
            let mut tlx = [0u8; TLX_ITEMS];
            for (t, mean) in tlx.iter_mut().zip(profile.workload) {
                let v = mean - 40.0 * leniency + 30.0 * noise(&mut rng);
                *t = v.round().clamp(0.0, 100.0) as u8;
            }
            out.push(SurveyResponse {
                participant_id: format!("synthetic-{p:03}"),
                mode: mode.to_string(),
                sus,
                tlx,
                tlx_weights: Some(tlx_weights(&mut rng)),
            });
        }
    }
    out
}
