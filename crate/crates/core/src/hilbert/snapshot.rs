//! Sparse text snapshot of a state: one `(index-tuple, re, im)` triple per
//! line for every amplitude whose modulus reaches [`SNAPSHOT_THRESHOLD`].
//!
//! ```text
//! # axes: pol_a spat_a pol_b spat_b pol_c spat_c nv1 nv2 nv3 nv4
//! (0,0,0,0,0,0,0,1,0,1) 0.25 0
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use super::{HyperState, Layout};

pub const SNAPSHOT_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotEntry {
    pub index: Vec<usize>,
    pub amplitude: Complex64,
}

#[derive(Debug, Error, PartialEq)]
pub enum SnapshotError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl HyperState {
    pub fn snapshot(&self) -> Vec<SnapshotEntry> {
        self.amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() >= SNAPSHOT_THRESHOLD)
            .map(|(i, a)| SnapshotEntry {
                index: self.layout().digits(i),
                amplitude: *a,
            })
            .collect()
    }

    pub fn snapshot_text(&self) -> String {
        let l = self.layout();
        let mut axes = Vec::new();
        for p in l.photons() {
            axes.push(format!("pol_{}", p.name));
            axes.push(format!("spat_{}", p.name));
        }
        axes.extend(l.spins().iter().cloned());
        let mut out = format!("# axes: {}\n", axes.join(" "));
        for e in self.snapshot() {
            let idx: Vec<String> = e.index.iter().map(|d| d.to_string()).collect();
            // {:e}-free shortest round-trip formatting
            let _ = writeln!(
                out,
                "({}) {} {}",
                idx.join(","),
                e.amplitude.re,
                e.amplitude.im
            );
        }
        out
    }

    pub fn from_snapshot_text(layout: Arc<Layout>, text: &str) -> Result<Self, SnapshotError> {
        let mut state = HyperState::zero(Arc::clone(&layout));
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: &str| SnapshotError::Malformed {
                line: n + 1,
                message: message.to_string(),
            };
            let close = line.find(')').ok_or_else(|| bad("missing ')'"))?;
            let inner = line
                .strip_prefix('(')
                .ok_or_else(|| bad("missing '('"))?
                .get(..close - 1)
                .ok_or_else(|| bad("bad index tuple"))?;
            let digits = inner
                .split(',')
                .map(|d| d.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad("non-integer index"))?;
            let i = layout
                .flat(&digits)
                .ok_or_else(|| bad("index outside layout"))?;
            let mut nums = line[close + 1..].split_whitespace();
            let mut next = || -> Result<f64, SnapshotError> {
                nums.next()
                    .ok_or_else(|| bad("missing component"))?
                    .parse()
                    .map_err(|_| bad("bad number"))
            };
            let re = next()?;
            let im = next()?;
            state.amplitudes_mut()[i] = Complex64::new(re, im);
        }
        Ok(state)
    }
}
