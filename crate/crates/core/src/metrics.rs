//! Desk-scale segmentation metrics: Dice coefficient on binary masks, with
//! label merging for multi-region label maps.

use crate::error::{Error, Result};

/// A dense 3-D label map. Voxels are 8-bit labels with 0 as background,
/// stored row-major with z varying fastest:
/// `index(x, y, z) = (x * dims.1 + y) * dims.2 + z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVolume {
    dims: (u32, u32, u32),
    voxels: Vec<u8>,
}

impl LabelVolume {
    pub fn new(dims: (u32, u32, u32), voxels: Vec<u8>) -> Result<Self> {
        let expected = expected_len(dims)?;
        if voxels.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "volume payload holds {} voxels but dims {:?} require {}",
                voxels.len(),
                dims,
                expected
            )));
        }
        Ok(Self { dims, voxels })
    }

    pub fn dims(&self) -> (u32, u32, u32) {
        self.dims
    }

    pub fn voxels(&self) -> &[u8] {
        &self.voxels
    }
}

/// A dense 3-D boolean mask with the same layout as [`LabelVolume`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    dims: (u32, u32, u32),
    voxels: Vec<bool>,
}

impl BinaryMask {
    pub fn new(dims: (u32, u32, u32), voxels: Vec<bool>) -> Result<Self> {
        let expected = expected_len(dims)?;
        if voxels.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "mask payload holds {} voxels but dims {:?} require {}",
                voxels.len(),
                dims,
                expected
            )));
        }
        Ok(Self { dims, voxels })
    }

    pub fn dims(&self) -> (u32, u32, u32) {
        self.dims
    }

    pub fn voxels(&self) -> &[bool] {
        &self.voxels
    }

    pub fn count_true(&self) -> usize {
        self.voxels.iter().filter(|&&v| v).count()
    }
}

fn expected_len(dims: (u32, u32, u32)) -> Result<usize> {
    if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
        return Err(Error::InvalidConfig(format!(
            "dims {dims:?} must all be positive"
        )));
    }
    (dims.0 as usize)
        .checked_mul(dims.1 as usize)
        .and_then(|p| p.checked_mul(dims.2 as usize))
        .ok_or_else(|| Error::InvalidConfig(format!("dims {dims:?} overflow the address space")))
}

/// Binarize a label map: true exactly where the voxel label is in `labels`.
/// The background label 0 may not be part of the merge set.
pub fn merge_labels(volume: &LabelVolume, labels: &[u8]) -> Result<BinaryMask> {
    if labels.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    if labels.contains(&0) {
        return Err(Error::BackgroundInLabelSet);
    }
    let mut member = [false; 256];
    for &l in labels {
        member[l as usize] = true;
    }
    let voxels = volume.voxels.iter().map(|&v| member[v as usize]).collect();
    BinaryMask::new(volume.dims, voxels)
}

/// Dice overlap of two masks, in percent: `100 * 2|A∩B| / (|A| + |B|)`.
///
/// Undefined (an error) when both masks are entirely empty; front ends that
/// prefer the "both empty counts as perfect" convention map that error to
/// 100 themselves.
pub fn dice(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    if pred.dims != gt.dims {
        return Err(Error::DimMismatch {
            a: pred.dims,
            b: gt.dims,
        });
    }
    let mut intersection = 0usize;
    let mut pred_count = 0usize;
    let mut gt_count = 0usize;
    for (&p, &g) in pred.voxels.iter().zip(&gt.voxels) {
        intersection += (p && g) as usize;
        pred_count += p as usize;
        gt_count += g as usize;
    }
    let denom = pred_count + gt_count;
    if denom == 0 {
        return Err(Error::UndefinedDice);
    }
    Ok(100.0 * 2.0 * intersection as f64 / denom as f64)
}
