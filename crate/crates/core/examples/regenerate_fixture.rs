//! Regenerates tests/data/synthetic_dice_110.csv, the 110-subject
//! Dice-shaped synthetic fixture shared by the test suites.
//!
//! The fixture is a seeded Normal(80.7, 10.75) sample rejection-clipped to
//! the Dice range [0, 100], written in the canonical CSV dialect so that a
//! save/load cycle of the file is byte-identical.

use evalprec_core::io::{save_samples, SampleFormat};
use evalprec_core::synthetic::bounded_normal_samples;

fn main() {
    let samples = bounded_normal_samples(110, 80.7, 10.75, 0.0, 100.0, 7).unwrap();
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/synthetic_dice_110.csv"
    );
    let mut file = std::fs::File::create(path).unwrap();
    save_samples(&mut file, &samples, SampleFormat::Csv).unwrap();
    println!("wrote {path}");
}
