//! Fixed-size binary telemetry frames and the 10 kHz trace resampler.
//!
//! Wire layout, little-endian: 4-byte magic `VSRF`, u64 sequence,
//! u16 sample count, then `count × 3` f32 current samples. A live frame
//! carries 200 samples (20 ms at 10 kHz), 2414 bytes total.

use std::io::{Read, Write};

use vsr_core::sim::Trace;
use vsr_core::CoreError;

use crate::error::{FdxError, Result};

pub const MAGIC: [u8; 4] = *b"VSRF";
pub const FRAME_SAMPLES: usize = 200;
pub const STREAM_RATE: f64 = 10_000.0;
const HEADER_LEN: usize = 4 + 8 + 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub sequence: u64,
    pub samples: Vec<[f32; 3]>,
}

impl Frame {
    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + self.samples.len() * 12
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&self.sequence.to_le_bytes());
        out.extend_from_slice(&(self.samples.len() as u16).to_le_bytes());
        for s in &self.samples {
            for ch in s {
                out.extend_from_slice(&ch.to_le_bytes());
            }
        }
        out
    }

    /// Start time of this frame on the 10 kHz stream clock.
    pub fn t_start(&self) -> f64 {
        self.sequence as f64 * FRAME_SAMPLES as f64 / STREAM_RATE
    }
}

/// Reads one frame; `Ok(None)` on a clean end of stream.
pub fn read_frame<R: Read>(r: &mut R) -> Result<Option<Frame>> {
    let mut header = [0u8; HEADER_LEN];
    match r.read_exact(&mut header[..1]) {
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => return Ok(None),
        other => other?,
    }
    r.read_exact(&mut header[1..])?;
    if header[..4] != MAGIC {
        return Err(FdxError::Core(CoreError::MalformedFile(format!(
            "bad frame magic {:02x?}",
            &header[..4]
        ))));
    }
    let sequence = u64::from_le_bytes(header[4..12].try_into().unwrap());
    let count = u16::from_le_bytes(header[12..14].try_into().unwrap()) as usize;
    let mut payload = vec![0u8; count * 12];
    r.read_exact(&mut payload)?;
    let samples = payload
        .chunks_exact(12)
        .map(|c| {
            [
                f32::from_le_bytes(c[0..4].try_into().unwrap()),
                f32::from_le_bytes(c[4..8].try_into().unwrap()),
                f32::from_le_bytes(c[8..12].try_into().unwrap()),
            ]
        })
        .collect();
    Ok(Some(Frame { sequence, samples }))
}

pub fn write_frame<W: Write>(w: &mut W, frame: &Frame) -> Result<()> {
    w.write_all(&frame.encode())?;
    Ok(())
}

/// Linear interpolation of the trace currents onto the uniform 10 kHz
/// stream grid.
pub fn resample_currents(trace: &Trace) -> Result<Vec<[f32; 3]>> {
    if trace.sample_rate < STREAM_RATE {
        return Err(FdxError::Config(format!(
            "trace sample rate {} below the {} Hz stream grid",
            trace.sample_rate, STREAM_RATE
        )));
    }
    if trace.records.len() < 2 {
        return Err(FdxError::Config("trace too short to resample".into()));
    }
    let t0 = trace.records[0].t;
    let last = trace.records.len() - 1;
    let mut out = Vec::new();
    let mut j = 0u64;
    loop {
        let t = t0 + j as f64 / STREAM_RATE;
        let pos = (t - t0) * trace.sample_rate;
        let idx = pos.floor() as usize;
        if idx >= last {
            break;
        }
        let frac = pos - idx as f64;
        let (a, b) = (&trace.records[idx], &trace.records[idx + 1]);
        out.push([
            (a.i_abc[0] + frac * (b.i_abc[0] - a.i_abc[0])) as f32,
            (a.i_abc[1] + frac * (b.i_abc[1] - a.i_abc[1])) as f32,
            (a.i_abc[2] + frac * (b.i_abc[2] - a.i_abc[2])) as f32,
        ]);
        j += 1;
    }
    Ok(out)
}

/// Cuts the resampled stream into 200-sample frames; a short final
/// frame is dropped.
pub fn frames_from_trace(trace: &Trace) -> Result<Vec<Frame>> {
    let samples = resample_currents(trace)?;
    Ok(samples
        .chunks_exact(FRAME_SAMPLES)
        .enumerate()
        .map(|(k, chunk)| Frame { sequence: k as u64, samples: chunk.to_vec() })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use vsr_core::sim::{simulate, FaultScenario, SimParams};

    #[test]
    fn live_frame_is_2414_bytes() {
        let frame = Frame { sequence: 3, samples: vec![[0.0; 3]; FRAME_SAMPLES] };
        assert_eq!(frame.encoded_len(), 2414);
        assert_eq!(frame.encode().len(), 2414);
    }

    #[test]
    fn corrupted_magic_is_rejected() {
        let frame = Frame { sequence: 0, samples: vec![[1.0, 2.0, 3.0]; 4] };
        let mut bytes = frame.encode();
        bytes[0] = b'X';
        assert!(read_frame(&mut bytes.as_slice()).is_err());
    }

    #[test]
    fn one_second_trace_yields_50_frames() {
        let trace = simulate(&FaultScenario::healthy(), 1.0, &SimParams::default(), 0).unwrap();
        let frames = frames_from_trace(&trace).unwrap();
        assert_eq!(frames.len(), 50);
        assert!(frames.iter().enumerate().all(|(k, f)| f.sequence == k as u64));
    }

    #[test]
    fn low_rate_trace_is_rejected() {
        let mut trace = simulate(&FaultScenario::healthy(), 0.02, &SimParams::default(), 0).unwrap();
        trace.sample_rate = 5_000.0;
        assert!(frames_from_trace(&trace).is_err());
    }

    proptest! {
        #[test]
        fn codec_round_trip_is_bit_exact(
            sequence in any::<u64>(),
            samples in proptest::collection::vec(
                (any::<f32>(), any::<f32>(), any::<f32>()).prop_map(|(a, b, c)| [a, b, c]),
                0..300,
            )
        ) {
            let frame = Frame { sequence, samples };
            let bytes = frame.encode();
            let back = read_frame(&mut bytes.as_slice()).unwrap().unwrap();
            prop_assert_eq!(back.sequence, frame.sequence);
            prop_assert_eq!(back.samples.len(), frame.samples.len());
            for (a, b) in frame.samples.iter().zip(&back.samples) {
                for ch in 0..3 {
                    prop_assert_eq!(a[ch].to_bits(), b[ch].to_bits());
                }
            }
        }
    }
}
