//! Shared input builders for the criterion benchmarks in `benches/`.

use evalprec_core::{BinaryMask, MetricSampleSet};

/// The standard benchmark sample: 110 Normal(80.7, 10.75) values.
pub fn bench_samples() -> MetricSampleSet {
    evalprec_core::synthetic::normal_samples(110, 80.7, 10.75, 42).unwrap()
}

/// A pair of partially overlapping masks of the given cubic edge length.
pub fn bench_masks(edge: u32) -> (BinaryMask, BinaryMask) {
    let len = (edge * edge * edge) as usize;
    let pred: Vec<bool> = (0..len).map(|i| i % 3 != 0).collect();
    let gt: Vec<bool> = (0..len).map(|i| i % 2 == 0).collect();
    (
        BinaryMask::new((edge, edge, edge), pred).unwrap(),
        BinaryMask::new((edge, edge, edge), gt).unwrap(),
    )
}
