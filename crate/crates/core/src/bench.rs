//! Benchmark harness: brute force, cover and wedge decoders on one seeded
//! rotation set. Words are checked for agreement before anything is timed.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decode::{Decoded, RotationAlphabet, RotationMethod, WedgeAlphabet};
use crate::domains::haar_rotations;
use crate::error::{Error, Result};
use crate::lie::Rotation;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MethodReport {
    pub method: RotationMethod,
    /// Seconds for the fastest of [`TIMING_PASSES`] uninterrupted passes.
    pub total_wall_time: f64,
    /// Per-call statistics from a separate pass with per-call clock reads.
    pub mean_per_call: f64,
    pub std_per_call: f64,
    pub distance_evaluations_per_call: f64,
    pub sign_tests_per_call: f64,
    /// Brute-force evaluations divided by this method's.
    pub eval_speedup: f64,
    /// Brute-force total time divided by this method's.
    pub wall_speedup: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub samples: usize,
    /// Threads used for the agreement check; the timed loop is single-threaded.
    pub check_threads: usize,
    pub timing_threads: usize,
    pub cover_len: usize,
    pub methods: Vec<MethodReport>,
}

impl BenchReport {
    pub fn method(&self, m: RotationMethod) -> Option<&MethodReport> {
        self.methods.iter().find(|r| r.method == m)
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub samples: usize,
    pub seed: u64,
    pub methods: Vec<RotationMethod>,
    /// Threads for the agreement check; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            samples: 1000,
            seed: 0,
            methods: vec![RotationMethod::Brute, RotationMethod::Cover, RotationMethod::Wedge],
            threads: None,
        }
    }
}

/// Timed passes over the whole input; the fastest is reported, which
/// filters out scheduler noise on shared machines.
pub const TIMING_PASSES: usize = 5;

/// Timings and summed stats of one method.
struct Timing {
    /// Fastest uninterrupted pass over all inputs.
    total: f64,
    /// A separate pass with a clock read around every call.
    per_call: Vec<f64>,
    evaluations: usize,
    sign_tests: usize,
}

fn timed_pass(rs: &[Rotation], f: &dyn Fn(&Rotation) -> Decoded) -> (f64, usize, usize) {
    let mut evaluations = 0;
    let mut sign_tests = 0;
    let start = Instant::now();
    for r in rs {
        let d = std::hint::black_box(f(std::hint::black_box(r)));
        evaluations += d.stats.distance_evaluations;
        sign_tests += d.stats.sign_tests;
    }
    (start.elapsed().as_secs_f64(), evaluations, sign_tests)
}

fn per_call_pass(rs: &[Rotation], f: &dyn Fn(&Rotation) -> Decoded) -> Vec<f64> {
    rs.iter()
        .map(|r| {
            let start = Instant::now();
            std::hint::black_box(f(std::hint::black_box(r)));
            start.elapsed().as_secs_f64()
        })
        .collect()
}

/// Passes are interleaved across methods so that slow phases of the
/// machine hit every method alike.
fn time_methods(rs: &[Rotation], methods: &[&dyn Fn(&Rotation) -> Decoded]) -> Vec<Timing> {
    let mut out: Vec<Timing> = methods
        .iter()
        .map(|f| Timing {
            total: f64::INFINITY,
            per_call: per_call_pass(rs, *f),
            evaluations: 0,
            sign_tests: 0,
        })
        .collect();
    for _ in 0..TIMING_PASSES {
        for (t, f) in out.iter_mut().zip(methods) {
            let (total, evaluations, sign_tests) = timed_pass(rs, *f);
            t.total = t.total.min(total);
            t.evaluations = evaluations;
            t.sign_tests = sign_tests;
        }
    }
    out
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Checks that the cover decoder reproduces brute force and the wedge
/// decoder reproduces the exhaustive wedge scan on every rotation.
pub fn check_agreement(rotations: &RotationAlphabet, wedge: &WedgeAlphabet, rs: &[Rotation], methods: &[RotationMethod]) -> Result<()> {
    let cover = methods.contains(&RotationMethod::Cover);
    let wedged = methods.contains(&RotationMethod::Wedge);
    rs.par_iter().enumerate().try_for_each(|(k, r)| {
        if cover {
            let b = rotations.decode_bruteforce(r);
            let c = rotations.decode_cover_checked(r).map_err(Error::at(k))?;
            if b.near_tie.is_none() && b.pair() != c.pair() {
                return Err(Error::Disagreement(format!(
                    "rotation {k} {:?}: brute force {:?}, cover {:?}",
                    r.to_row_major(),
                    b.pair(),
                    c.pair()
                )));
            }
        }
        if wedged {
            let fast = wedge.decode_wedge(r);
            let slow = wedge.decode_exhaustive(r);
            if fast.pair() != slow.pair() {
                return Err(Error::Disagreement(format!(
                    "rotation {k} {:?}: wedge {:?}, exhaustive scan {:?}",
                    r.to_row_major(),
                    fast.pair(),
                    slow.pair()
                )));
            }
        }
        Ok(())
    })
}

/// Runs the benchmark. Brute force is always timed because speedups are
/// relative to it.
pub fn run_bench(config: &BenchConfig, rotations: &RotationAlphabet, wedge: &WedgeAlphabet) -> Result<BenchReport> {
    if config.samples == 0 {
        return Err(Error::Validation("benchmark needs at least one sample".into()));
    }
    let rs = haar_rotations(config.samples, config.seed);
    let check = || check_agreement(rotations, wedge, &rs, &config.methods);
    let check_threads = match config.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Validation(e.to_string()))?;
            pool.install(check)?;
            t
        }
        None => {
            check()?;
            rayon::current_num_threads()
        }
    };

    let brute_fn = |r: &Rotation| rotations.decode_bruteforce(r);
    let cover_fn = |r: &Rotation| rotations.decode_cover(r);
    let wedge_fn = |r: &Rotation| wedge.decode_wedge(r);
    let mut fns: Vec<&dyn Fn(&Rotation) -> Decoded> = vec![&brute_fn];
    let mut labels = vec![RotationMethod::Brute];
    for &m in &config.methods {
        match m {
            RotationMethod::Brute => {}
            RotationMethod::Cover => fns.push(&cover_fn),
            RotationMethod::Wedge => fns.push(&wedge_fn),
        }
        if m != RotationMethod::Brute {
            labels.push(m);
        }
    }
    let timings = time_methods(&rs, &fns);
    let brute = &timings[0];
    let n = rs.len() as f64;
    let methods = labels
        .iter()
        .zip(&timings)
        .filter(|(m, _)| config.methods.contains(m))
        .map(|(&method, t)| {
            let (mean, std) = mean_std(&t.per_call);
            MethodReport {
                method,
                total_wall_time: t.total,
                mean_per_call: mean,
                std_per_call: std,
                distance_evaluations_per_call: t.evaluations as f64 / n,
                sign_tests_per_call: t.sign_tests as f64 / n,
                eval_speedup: brute.evaluations as f64 / t.evaluations as f64,
                wall_speedup: brute.total / t.total,
            }
        })
        .collect();
    Ok(BenchReport {
        seed: config.seed,
        samples: config.samples,
        check_threads,
        timing_threads: 1,
        cover_len: rotations.cover().len(),
        methods,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_has_zero_spread() {
        let rot = RotationAlphabet::icosahedral_conjugated(5_000, 1).unwrap();
        let wedge = WedgeAlphabet::icosahedral().unwrap();
        let config = BenchConfig {
            samples: 1,
            threads: Some(1),
            ..Default::default()
        };
        let report = run_bench(&config, &rot, &wedge).unwrap();
        assert_eq!(report.methods.len(), 3);
        for m in &report.methods {
            assert_eq!(m.std_per_call, 0.0);
            assert!(m.mean_per_call.is_finite());
        }
        let cover = report.method(RotationMethod::Cover).unwrap();
        assert_eq!(cover.distance_evaluations_per_call, (60 + rot.cover().len()) as f64);
    }

    #[test]
    fn zero_samples_rejected() {
        let rot = RotationAlphabet::icosahedral_conjugated(1_000, 1).unwrap();
        let wedge = WedgeAlphabet::icosahedral().unwrap();
        let config = BenchConfig {
            samples: 0,
            ..Default::default()
        };
        assert!(matches!(run_bench(&config, &rot, &wedge), Err(Error::Validation(_))));
    }
}
