//! On-disk container for label volumes.
//!
//! A `.jvol` file is a one-line UTF-8 JSON header terminated by a single
//! `\n` (0x0A), immediately followed by the raw voxel payload:
//!
//! ```text
//! {"format":"jvol","version":1,"dims":[X,Y,Z],"dtype":"u8"}\n<X*Y*Z payload bytes>
//! ```
//!
//! * the header is compact JSON (no internal newlines);
//! * `dtype` is always `"u8"`: one byte per voxel, values 0-255, label 0 is
//!   background (little-endian by definition for the single-byte type);
//! * the payload is row-major with z varying fastest:
//!   voxel (x, y, z) sits at offset `(x * Y + y) * Z + z`;
//! * an optional `"labels"` object may name the label values, e.g.
//!   `{"1":"anterior","2":"posterior"}`. It is carried through verbatim
//!   but has no semantics here.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::LabelVolume;

const FORMAT_NAME: &str = "jvol";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    dims: [u32; 3],
    dtype: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<String, String>>,
}

/// Read a label volume from a `.jvol` stream.
pub fn read_volume(reader: &mut impl Read) -> Result<LabelVolume> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::ParseError {
            location: "header".into(),
            message: "missing newline-terminated JSON header".into(),
        })?;
    let header: Header =
        serde_json::from_slice(&bytes[..newline]).map_err(|e| Error::ParseError {
            location: "header".into(),
            message: e.to_string(),
        })?;
    if header.format != FORMAT_NAME {
        return Err(Error::ParseError {
            location: "header".into(),
            message: format!("unknown format {:?}", header.format),
        });
    }
    if header.version != FORMAT_VERSION {
        return Err(Error::ParseError {
            location: "header".into(),
            message: format!("unsupported version {}", header.version),
        });
    }
    if header.dtype != "u8" {
        return Err(Error::ParseError {
            location: "header".into(),
            message: format!("unsupported dtype {:?}", header.dtype),
        });
    }
    let payload = bytes[newline + 1..].to_vec();
    let dims = (header.dims[0], header.dims[1], header.dims[2]);
    let expected = (dims.0 as usize)
        .checked_mul(dims.1 as usize)
        .and_then(|p| p.checked_mul(dims.2 as usize));
    if expected != Some(payload.len()) {
        return Err(Error::ParseError {
            location: "payload".into(),
            message: format!(
                "payload holds {} bytes but dims {:?} require {}",
                payload.len(),
                dims,
                expected
                    .map(|e| e.to_string())
                    .unwrap_or_else(|| "an impossible count".into())
            ),
        });
    }
    LabelVolume::new(dims, payload)
}

/// Write a label volume as a `.jvol` stream.
pub fn write_volume(writer: &mut impl Write, volume: &LabelVolume) -> Result<()> {
    let dims = volume.dims();
    let header = Header {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        dims: [dims.0, dims.1, dims.2],
        dtype: "u8".into(),
        labels: None,
    };
    let json = serde_json::to_string(&header).expect("header serializes");
    writer.write_all(json.as_bytes())?;
    writer.write_all(b"\n")?;
    writer.write_all(volume.voxels())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_bytes() {
        // The container layout is a contract; these exact bytes must keep
        // decoding to the same volume.
        let bytes: Vec<u8> = [
            br#"{"format":"jvol","version":1,"dims":[2,1,1],"dtype":"u8"}"#.as_slice(),
            b"\n",
            &[1u8, 2u8],
        ]
        .concat();
        let v = read_volume(&mut bytes.as_slice()).unwrap();
        assert_eq!(v.dims(), (2, 1, 1));
        assert_eq!(v.voxels(), &[1, 2]);

        let mut out = Vec::new();
        write_volume(&mut out, &v).unwrap();
        assert_eq!(out, bytes);
    }

    #[test]
    fn round_trip() {
        let v = LabelVolume::new((3, 2, 4), (0..24).map(|i| (i % 5) as u8).collect()).unwrap();
        let mut buf = Vec::new();
        write_volume(&mut buf, &v).unwrap();
        let back = read_volume(&mut buf.as_slice()).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn header_with_label_names_accepted() {
        let bytes: Vec<u8> = [
            br#"{"format":"jvol","version":1,"dims":[1,1,1],"dtype":"u8","labels":{"1":"anterior","2":"posterior"}}"#.as_slice(),
            b"\n",
            &[1u8],
        ]
        .concat();
        let v = read_volume(&mut bytes.as_slice()).unwrap();
        assert_eq!(v.voxels(), &[1]);
    }

    #[test]
    fn malformed_inputs_rejected() {
        // no newline
        let e = read_volume(&mut br#"{"format":"jvol"}"#.as_slice());
        assert!(matches!(e, Err(Error::ParseError { .. })));
        // bad json
        let e = read_volume(&mut b"not json\n".as_slice());
        assert!(matches!(e, Err(Error::ParseError { .. })));
        // wrong format name
        let bytes: Vec<u8> = [
            br#"{"format":"nope","version":1,"dims":[1,1,1],"dtype":"u8"}"#.as_slice(),
            b"\n",
            &[1u8],
        ]
        .concat();
        assert!(matches!(
            read_volume(&mut bytes.as_slice()),
            Err(Error::ParseError { .. })
        ));
        // wrong dtype
        let bytes: Vec<u8> = [
            br#"{"format":"jvol","version":1,"dims":[1,1,1],"dtype":"u16"}"#.as_slice(),
            b"\n",
            &[1u8, 0u8],
        ]
        .concat();
        assert!(matches!(
            read_volume(&mut bytes.as_slice()),
            Err(Error::ParseError { .. })
        ));
        // payload length mismatch
        let bytes: Vec<u8> = [
            br#"{"format":"jvol","version":1,"dims":[2,2,1],"dtype":"u8"}"#.as_slice(),
            b"\n",
            &[1u8, 0u8],
        ]
        .concat();
        assert!(matches!(
            read_volume(&mut bytes.as_slice()),
            Err(Error::ParseError { .. })
        ));
    }
}
