//! Writes the synthetic demo survey (118 participants × 3 modes) to stdout.
//!
//! cargo run -p xreval-core --example gen_survey_demo > crates/core/examples/survey_demo.csv

use xreval_core::survey::write_responses_csv;
use xreval_core::synthetic::{generate, DEMO_SEED};

fn main() {
    print!("{}", write_responses_csv(&generate(118, DEMO_SEED)));
}
