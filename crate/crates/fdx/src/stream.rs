//! One-way framed telemetry over a stream socket, with optional
//! wall-clock pacing (one frame per 20 ms).

use std::io::{BufReader, BufWriter, Write};
use std::net::{TcpListener, TcpStream};
use std::time::{Duration, Instant};

use crate::error::{FdxError, Result};
use crate::frame::{read_frame, write_frame, Frame, FRAME_SAMPLES, STREAM_RATE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pacing {
    /// One frame per 20 ms of data, against an absolute schedule.
    RealTime,
    MaxSpeed,
}

impl std::str::FromStr for Pacing {
    type Err = FdxError;

    fn from_str(s: &str) -> Result<Pacing> {
        match s {
            "realtime" | "real-time" => Ok(Pacing::RealTime),
            "max" | "max-speed" => Ok(Pacing::MaxSpeed),
            other => Err(FdxError::Config(format!("unknown pacing '{other}'"))),
        }
    }
}

/// Frame period implied by the stream grid.
pub fn frame_period() -> Duration {
    Duration::from_secs_f64(FRAME_SAMPLES as f64 / STREAM_RATE)
}

/// Accepts one client on the listener and streams all frames to it.
/// Returns the number of frames sent.
pub fn serve_frames(listener: &TcpListener, frames: &[Frame], pacing: Pacing) -> Result<u64> {
    let (socket, _addr) = listener
        .accept()
        .map_err(|e| FdxError::Connection(format!("accept failed: {e}")))?;
    socket.set_nodelay(true).ok();
    let mut w = BufWriter::new(socket);

    let start = Instant::now();
    for (k, frame) in frames.iter().enumerate() {
        if pacing == Pacing::RealTime {
            let due = start + frame_period() * k as u32;
            if let Some(wait) = due.checked_duration_since(Instant::now()) {
                std::thread::sleep(wait);
            }
        }
        write_frame(&mut w, frame)
            .map_err(|e| FdxError::Connection(format!("send failed: {e}")))?;
        if pacing == Pacing::RealTime {
            w.flush().map_err(|e| FdxError::Connection(format!("flush failed: {e}")))?;
        }
    }
    w.flush().map_err(|e| FdxError::Connection(format!("flush failed: {e}")))?;
    Ok(frames.len() as u64)
}

/// Blocking frame source over a connected socket.
pub struct FrameReader {
    inner: BufReader<TcpStream>,
}

impl FrameReader {
    pub fn connect(addr: &str) -> Result<FrameReader> {
        let socket = TcpStream::connect(addr)
            .map_err(|e| FdxError::Connection(format!("connect to {addr} failed: {e}")))?;
        Ok(FrameReader { inner: BufReader::new(socket) })
    }

    pub fn from_stream(socket: TcpStream) -> FrameReader {
        FrameReader { inner: BufReader::new(socket) }
    }

    /// Next frame, or `None` when the sender closed the stream.
    pub fn next_frame(&mut self) -> Result<Option<Frame>> {
        read_frame(&mut self.inner)
    }
}
