//! Acceptance suite. Runs every criterion in sequence (timing criteria must
//! not share the machine with other tests) and prints one line per
//! criterion. Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use motion_alphabet::bench::{run_bench, BenchConfig};
use motion_alphabet::codec::{encode, reference_times, sample_parametric, Alphabet, TrajectorySpec};
use motion_alphabet::crystal::{wallpaper, WallpaperKind};
use motion_alphabet::decode::{
    reference_conjugation, RotationAlphabet, RotationMethod, Se3Alphabet, WedgeAlphabet, REFERENCE_CONJUGATION,
};
use motion_alphabet::domains::{build_cover, haar_rotations, DoubleCosetDomain};
use motion_alphabet::groups::{
    conjugate_group, generate_icosahedral, generate_platonic, intersection_pairs, FiniteRotationGroup,
    IcosahedralFrame, PlatonicKind,
};
use motion_alphabet::lie::{exp_so3, log_so3, random_rotation, rho_so3, PlanarMotion, Se2Metric, SpatialMotion};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn icosa() -> FiniteRotationGroup {
    generate_icosahedral(IcosahedralFrame::VertexUp)
}

fn icosa_conj() -> FiniteRotationGroup {
    conjugate_group(&icosa(), &reference_conjugation())
}

fn cayley_is_latin(g: &FiniteRotationGroup) -> bool {
    let n = g.len();
    let table = g.cayley_table();
    (0..n).all(|a| {
        let mut seen = vec![false; n];
        (0..n).all(|b| !std::mem::replace(&mut seen[table[a * n + b]], true))
    })
}

fn c1_group_orders() -> Outcome {
    let orders: Vec<(usize, bool)> = [PlatonicKind::Tetrahedral, PlatonicKind::Octahedral, PlatonicKind::Icosahedral]
        .iter()
        .map(|&k| {
            let g = generate_platonic(k);
            (g.len(), cayley_is_latin(&g))
        })
        .collect();
    let vertex_up = icosa();
    let ok = orders.iter().map(|o| o.0).eq([12, 24, 60])
        && orders.iter().all(|o| o.1)
        && vertex_up.len() == 60
        && cayley_is_latin(&vertex_up);
    check(ok, format!("orders {:?}, Cayley tables closed", orders.iter().map(|o| o.0).collect::<Vec<_>>()))
}

fn c2_trivial_intersection() -> Outcome {
    let pairs = intersection_pairs(&icosa(), &icosa_conj());
    check(
        pairs == vec![(0, 0)],
        format!("3600 pairs scanned, shared elements {:?}", pairs),
    )
}

fn c3_cover_size() -> Outcome {
    let d = DoubleCosetDomain::new(icosa(), icosa_conj()).map_err(|e| e.to_string())?;
    let cover = build_cover(&d, 100_000, 0).map_err(|e| e.to_string())?;
    check(
        (176..=186).contains(&cover.len()),
        format!("cover size {} from 1e5 probes (band 176..=186, reference 181)", cover.len()),
    )
}

fn c4_oracle_equivalence(a: &RotationAlphabet, w: &WedgeAlphabet) -> Outcome {
    let rs = haar_rotations(1000, 4);
    let mut compared = 0;
    let mut cover_bad = 0;
    let mut wedge_bad = 0;
    for r in &rs {
        let b = a.decode_bruteforce(r);
        let gap = a.domain().nearest_word(r).gap();
        if gap > 1e-9 {
            compared += 1;
            match a.decode_cover_checked(r) {
                Ok(c) if c.pair() == b.pair() => {}
                _ => cover_bad += 1,
            }
        }
        if w.decode_wedge(r).pair() != w.decode_exhaustive(r).pair() {
            wedge_bad += 1;
        }
    }
    check(
        cover_bad == 0 && wedge_bad == 0,
        format!(
            "cover vs brute force: {cover_bad} mismatches of {compared}; wedge vs exhaustive wedge scan: {wedge_bad} of {}",
            rs.len()
        ),
    )
}

fn c5_eval_count(a: &RotationAlphabet) -> Outcome {
    let rs = haar_rotations(1000, 5);
    let max_cover = rs.iter().map(|r| a.decode_cover(r).stats.distance_evaluations).max().unwrap();
    let brute = a.decode_bruteforce(&rs[0]).stats.distance_evaluations;
    let ratio = brute as f64 / max_cover as f64;
    check(
        max_cover <= 241 && brute == 3600 && ratio >= 14.9,
        format!("{max_cover} evaluations per cover decode vs {brute}, ratio {ratio:.2}"),
    )
}

fn c6_wall_clock(a: &RotationAlphabet, w: &WedgeAlphabet) -> Outcome {
    let config = BenchConfig {
        samples: 1000,
        seed: 6,
        threads: Some(1),
        ..Default::default()
    };
    let report = run_bench(&config, a, w).map_err(|e| e.to_string())?;
    let cover = report.method(RotationMethod::Cover).unwrap().wall_speedup;
    let wedge = report.method(RotationMethod::Wedge).unwrap().wall_speedup;
    check(
        cover >= 10.0 && wedge >= 20.0 && wedge > cover,
        format!("wall-clock speedup cover {cover:.2}x, wedge {wedge:.2}x (floors 10x, 20x)"),
    )
}

fn c7_equivolume(a: &RotationAlphabet) -> Outcome {
    const N: usize = 3_600_000;
    const CHUNKS: usize = 36;
    let nk = a.k().len();
    let cells = a.word_count();
    let counts = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u32; cells];
            for r in haar_rotations(N / CHUNKS, 7_000 + c as u64) {
                let w = a.domain().nearest_word(&r);
                counts[w.i * nk + w.j] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u32; cells],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        );
    let p = 1.0 / cells as f64;
    let mean = N as f64 * p;
    let sigma = (N as f64 * p * (1.0 - p)).sqrt();
    let worst = counts.iter().map(|&c| (c as f64 - mean).abs() / sigma).fold(0.0, f64::max);
    check(
        worst <= 5.0,
        format!("{N} samples over {cells} cells, largest deviation {worst:.2} sigma"),
    )
}

fn c8_wedge_partition(w: &WedgeAlphabet) -> Outcome {
    const N: usize = 100_000;
    let band = 1e-9;
    let cell = w.wedge().coset();
    let mut in_base = 0usize;
    let mut none = 0usize;
    let mut multiple = 0usize;
    let mut on_band = 0usize;
    for r in haar_rotations(N, 8) {
        let (_, q) = cell.pull_back(&r);
        let x = q.skew_direction();
        let strict = w.wedge().multiplicity(&x, -band);
        let loose = w.wedge().multiplicity(&x, band);
        if loose == 0 {
            none += 1;
        } else if strict > 1 {
            multiple += 1;
        } else if loose > 1 {
            on_band += 1;
        }
        if w.wedge().in_copy(0, &x, 0.0) {
            in_base += 1;
        }
    }
    let p = 1.0 / 60.0;
    let sigma = (N as f64 * p * (1.0 - p)).sqrt();
    let z = (in_base as f64 - N as f64 * p) / sigma;
    check(
        none == 0 && multiple == 0 && z.abs() <= 5.0,
        format!(
            "{N} samples: uncovered {none}, in two wedges {multiple}, within band {on_band}; base wedge occupancy {:.5} ({z:+.2} sigma from 1/60)",
            in_base as f64 / N as f64
        ),
    )
}

fn c9_se2_extents() -> Outcome {
    let expected = [
        (WallpaperKind::P1, 2.0 * PI),
        (WallpaperKind::P2, PI),
        (WallpaperKind::P4, PI / 2.0),
        (WallpaperKind::P3, 2.0 * PI / 3.0),
        (WallpaperKind::P6, PI / 3.0),
    ];
    let mut worst = 0.0f64;
    for (kind, extent) in expected {
        let d = wallpaper(kind, 1.0).map_err(|e| e.to_string())?.voronoi_domain(Se2Metric::default());
        worst = worst.max((d.theta_extent() - extent).abs());
    }
    check(worst < 1e-15, format!("p1 p2 p4 p3 p6 theta extents, max error {worst:.1e}"))
}

fn c10_worked_sentence() -> Outcome {
    let samples = sample_parametric(&TrajectorySpec::ReferenceSe2, &reference_times(-2..=2)).map_err(|e| e.to_string())?;
    let sentence = encode(&samples, &Alphabet::reference_planar()).map_err(|e| e.to_string())?;
    let text = sentence.to_string();
    check(
        text == "(g(2,3,-2),d(3)), (g(2,-1,-1),d(4)), (g(2,-4,0),d(0)), (g(2,-1,1),d(1)), (g(2,3,2),d(2))",
        text,
    )
}

fn c11_se3_alphabet() -> Outcome {
    let a = Se3Alphabet::reference(1.0, 100_000, 11).map_err(|e| e.to_string())?;
    let words = a.rotational_word_count();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = 0;
    for _ in 0..500 {
        let t = Vector3::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let g = SpatialMotion::new(random_rotation(&mut rng), t);
        let fast = a.decode(&g).map_err(|e| e.to_string())?;
        let slow = a.decode_bruteforce(&g);
        if (fast.gamma, fast.delta) != (slow.gamma, slow.delta) {
            bad += 1;
        }
    }
    check(
        words == 1440 && bad == 0,
        format!("{words} rotational words; 500 poses, {bad} disagreements with brute force"),
    )
}

fn c12_numerical_core() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut roundtrip = 0.0f64;
    for _ in 0..10_000 {
        let dir = Vector3::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5).normalize();
        let x = dir * rng.random_range(0.0..PI - 1e-6);
        let back = log_so3(&exp_so3(&x)).map_err(|e| e.to_string())?;
        roundtrip = roundtrip.max((back.vector() - x).norm() / x.norm().max(1.0));
    }
    let mut bi = 0.0f64;
    for _ in 0..100 {
        let (a, b, q) = (random_rotation(&mut rng), random_rotation(&mut rng), random_rotation(&mut rng));
        let d = rho_so3(&a, &b);
        bi = bi.max((d - rho_so3(&(q * a), &(q * b))).abs());
        bi = bi.max((d - rho_so3(&(a * q), &(b * q))).abs());
    }
    let metric = Se2Metric::default();
    let pose = |rng: &mut ChaCha8Rng| {
        PlanarMotion::new(
            rng.random_range(-PI..PI),
            Vector2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
        )
    };
    let mut left = 0.0f64;
    let mut right = 0.0f64;
    for _ in 0..100 {
        let (p1, p2, q) = (pose(&mut rng), pose(&mut rng), pose(&mut rng));
        let d = metric.distance(&p1, &p2);
        left = left.max((d - metric.distance(&q.compose(&p1), &q.compose(&p2))).abs());
        right = right.max((d - metric.distance(&p1.compose(&q), &p2.compose(&q))).abs());
    }
    check(
        roundtrip <= 1e-9 && bi <= 1e-10 && left <= 1e-10 && right > 1e-6,
        format!(
            "exp/log roundtrip {roundtrip:.1e}; SO(3) bi-invariance {bi:.1e}; SE(2) left {left:.1e}, right {right:.2} (must be nonzero)"
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters from the default harness are not
    // meaningful here; a listing request gets a single entry.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let start = Instant::now();
    let alphabet = RotationAlphabet::icosahedral_conjugated(100_000, 0).expect("reference alphabet");
    let wedge = WedgeAlphabet::icosahedral().expect("icosahedral wedge");
    assert_eq!(alphabet.cover().g, Some(REFERENCE_CONJUGATION));

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("group orders", Box::new(c1_group_orders)),
        ("trivial intersection", Box::new(c2_trivial_intersection)),
        ("cover size", Box::new(c3_cover_size)),
        ("oracle equivalence", Box::new(|| c4_oracle_equivalence(&alphabet, &wedge))),
        ("evaluation-count speedup", Box::new(|| c5_eval_count(&alphabet))),
        ("wall-clock speedup", Box::new(|| c6_wall_clock(&alphabet, &wedge))),
        ("equal cell volumes", Box::new(|| c7_equivolume(&alphabet))),
        ("wedge partition", Box::new(|| c8_wedge_partition(&wedge))),
        ("SE(2) domain extents", Box::new(c9_se2_extents)),
        ("worked sentence", Box::new(c10_worked_sentence)),
        ("SE(3) alphabet", Box::new(c11_se3_alphabet)),
        ("numerical core", Box::new(c12_numerical_core)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2}. {name}: {detail} ({secs:.1} s)", k + 1);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1} s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
