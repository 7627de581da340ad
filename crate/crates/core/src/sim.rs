//! Channel models, capacities and the parallel Monte Carlo harness.

use std::num::NonZeroUsize;
use std::time::Instant;

use gauss_quad::hermite::GaussHermite;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::decode::{decode, DecoderConfig};
use crate::error::{Error, Result};
use crate::graphgen::CodeInstance;

/// Gauss–Hermite nodes used for the BiAWGN capacity.
pub const HERMITE_NODES: usize = 96;
/// Frames decoded between two evaluations of the stop rule.
pub const BATCH_FRAMES: u64 = 256;
pub const THREADS_ENV: &str = "FECLAB_THREADS";
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelPoint {
    Bec { p: f64 },
    Awgn { ebn0_db: f64, rate: f64 },
}

impl ChannelPoint {
    pub fn bec(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("erasure probability {p} outside [0, 1]")));
        }
        Ok(Self::Bec { p })
    }

    pub fn awgn(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !ebn0_db.is_finite() || !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!("bad AWGN point ({ebn0_db} dB, rate {rate})")));
        }
        Ok(Self::Awgn { ebn0_db, rate })
    }

    /// Noise standard deviation; `None` on the erasure channel.
    pub fn sigma(&self) -> Option<f64> {
        match *self {
            Self::Bec { .. } => None,
            Self::Awgn { ebn0_db, rate } => Some(awgn_sigma(ebn0_db, rate)),
        }
    }

    pub fn capacity(&self) -> f64 {
        match *self {
            Self::Bec { p } => bec_capacity(p),
            Self::Awgn { ebn0_db, rate } => biawgn_capacity(ebn0_db, rate),
        }
    }
}

/// `σ² = 1 / (2 R 10^(Eb/N0 / 10))`.
pub fn awgn_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

pub fn bec_capacity(p: f64) -> f64 {
    1.0 - p
}

/// Capacity of BPSK over AWGN with noise deviation `sigma`, in bits.
pub fn biawgn_capacity_sigma(sigma: f64) -> f64 {
    let quad = GaussHermite::new(NonZeroUsize::new(HERMITE_NODES).expect("nonzero"));
    // L ~ N(2/σ², 4/σ²) given the +1 symbol.
    let mean = 2.0 / (sigma * sigma);
    let dev = 2.0 / sigma;
    let expected = quad.integrate(|t| softplus(-(mean + std::f64::consts::SQRT_2 * dev * t)))
        / std::f64::consts::PI.sqrt();
    1.0 - expected / std::f64::consts::LN_2
}

pub fn biawgn_capacity(ebn0_db: f64, rate: f64) -> f64 {
    biawgn_capacity_sigma(awgn_sigma(ebn0_db, rate))
}

fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Eb/N0 (dB) at which the BiAWGN capacity equals `rate`, to 0.001 dB.
pub fn shannon_limit_ebn0(rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(format!("rate {rate} outside (0, 1)")));
    }
    let (mut lo, mut hi) = (-20.0f64, 30.0f64);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if biawgn_capacity(mid, rate) < rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_frame_errors: 100, max_frames: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub point: ChannelPoint,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    /// Frames that ended on a valid codeword other than the transmitted one.
    pub undetected_errors: u64,
    pub iterations: u64,
    pub wer: f64,
    pub ber: f64,
    pub avg_iters: f64,
    /// 95% normal-approximation half-widths.
    pub ci_wer: f64,
    pub ci_ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub seed: u64,
    pub n: usize,
    pub points: Vec<PointResult>,
    pub wall_time_s: f64,
}

impl SimResult {
    pub const CSV_HEADER: [&'static str; 9] =
        ["ebn0_db", "p", "frames", "frame_errors", "bit_errors", "wer", "ber", "avg_iters", "ci_wer"];

    /// Rows matching [`Self::CSV_HEADER`]; the unused channel column is empty.
    pub fn csv_rows(&self) -> Vec<[String; 9]> {
        self.points
            .iter()
            .map(|r| {
                let (ebn0, p) = match r.point {
                    ChannelPoint::Bec { p } => (String::new(), p.to_string()),
                    ChannelPoint::Awgn { ebn0_db, .. } => (ebn0_db.to_string(), String::new()),
                };
                [
                    ebn0,
                    p,
                    r.frames.to_string(),
                    r.frame_errors.to_string(),
                    r.bit_errors.to_string(),
                    format!("{:e}", r.wer),
                    format!("{:e}", r.ber),
                    format!("{:.4}", r.avg_iters),
                    format!("{:e}", r.ci_wer),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
    undetected: u64,
    iterations: u64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.frames += o.frames;
        self.frame_errors += o.frame_errors;
        self.bit_errors += o.bit_errors;
        self.undetected += o.undetected;
        self.iterations += o.iterations;
        self
    }
}

/// Worker cap from `FECLAB_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Simulates the all-zero codeword at every point, capping workers via `FECLAB_THREADS`.
pub fn simulate(
    instance: &CodeInstance,
    points: &[ChannelPoint],
    stop: StopRule,
    cfg: &DecoderConfig,
    seed: u64,
) -> Result<SimResult> {
    simulate_with_threads(instance, points, stop, cfg, seed, threads_from_env())
}

/// As [`simulate`] with an explicit worker count; results do not depend on it.
pub fn simulate_with_threads(
    instance: &CodeInstance,
    points: &[ChannelPoint],
    stop: StopRule,
    cfg: &DecoderConfig,
    seed: u64,
    threads: Option<usize>,
) -> Result<SimResult> {
    cfg.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let results = pool.install(|| {
        points
            .iter()
            .enumerate()
            .map(|(idx, &point)| simulate_point(instance, point, idx as u64, stop, cfg, seed))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SimResult { seed, n: instance.n(), points: results, wall_time_s: start.elapsed().as_secs_f64() })
}

fn simulate_point(
    instance: &CodeInstance,
    point: ChannelPoint,
    point_index: u64,
    stop: StopRule,
    cfg: &DecoderConfig,
    seed: u64,
) -> Result<PointResult> {
    let mut tally = Tally::default();
    while tally.frames < stop.max_frames && tally.frame_errors < stop.min_frame_errors {
        let first = tally.frames;
        let last = (first + BATCH_FRAMES).min(stop.max_frames);
        let batch = (first..last)
            .into_par_iter()
            .map(|frame| run_frame(instance, point, point_index, frame, cfg, seed))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        tally = tally.merge(batch);
    }
    let frames = tally.frames.max(1) as f64;
    let bits = frames * instance.n() as f64;
    let wer = tally.frame_errors as f64 / frames;
    let ber = tally.bit_errors as f64 / bits;
    Ok(PointResult {
        point,
        frames: tally.frames,
        frame_errors: tally.frame_errors,
        bit_errors: tally.bit_errors,
        undetected_errors: tally.undetected,
        iterations: tally.iterations,
        wer,
        ber,
        avg_iters: tally.iterations as f64 / frames,
        ci_wer: Z95 * (wer * (1.0 - wer) / frames).sqrt(),
        ci_ber: Z95 * (ber * (1.0 - ber) / bits).sqrt(),
    })
}

/// Independent stream for one frame, keyed by (seed, point index, frame index).
pub fn frame_rng(seed: u64, point_index: u64, frame: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point_index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(frame);
    rng
}

/// Channel LLRs for the all-zero codeword.
pub fn channel_llrs(point: ChannelPoint, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match point {
        ChannelPoint::Bec { p } => (0..n).map(|_| if rng.gen_bool(p) { 0.0 } else { f64::INFINITY }).collect(),
        ChannelPoint::Awgn { ebn0_db, rate } => {
            let sigma = awgn_sigma(ebn0_db, rate);
            let scale = 2.0 / (sigma * sigma);
            (0..n)
                .map(|_| {
                    let z: f64 = rng.sample(StandardNormal);
                    scale * (1.0 + sigma * z)
                })
                .collect()
        }
    }
}

fn run_frame(
    instance: &CodeInstance,
    point: ChannelPoint,
    point_index: u64,
    frame: u64,
    cfg: &DecoderConfig,
    seed: u64,
) -> Result<Tally> {
    let mut rng = frame_rng(seed, point_index, frame);
    let llrs = channel_llrs(point, instance.n(), &mut rng);
    let out = decode(instance, &llrs, cfg)?;
    // Undecided bits count as errors alongside wrong ones.
    let wrong = out.hard_decisions.iter().filter(|&&b| b != 0).count() as u64;
    let bit_errors = wrong + out.residual_erasures as u64;
    let failed = bit_errors > 0;
    Ok(Tally {
        frames: 1,
        frame_errors: u64::from(failed),
        bit_errors,
        undetected: u64::from(failed && out.converged),
        iterations: out.iterations_used as u64,
    })
}
