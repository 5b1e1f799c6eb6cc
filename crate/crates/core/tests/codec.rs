use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use motion_alphabet::codec::{
    decode_sentence, encode, reference_times, sample_parametric, Alphabet, GammaLetter, Pose, TrajectorySample,
    TrajectorySpec,
};
use motion_alphabet::crystal::SpaceGroupElement;
use motion_alphabet::decode::Se3Alphabet;
use motion_alphabet::lie::{random_rotation, Rotation, SpatialMotion};

#[test]
fn spatial_sentence_matches_individual_decodes() {
    let se3 = Se3Alphabet::reference(1.0, 50_000, 1).unwrap();
    let alphabet = Alphabet::Spatial(se3.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<TrajectorySample> = (0..100)
        .map(|k| {
            let t = Vector3::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            TrajectorySample {
                tau: k as f64,
                pose: Pose::Spatial(SpatialMotion::new(random_rotation(&mut rng), t)),
            }
        })
        .collect();
    let sentence = encode(&samples, &alphabet).unwrap();
    assert_eq!(sentence.alphabet_id, "P432xI");
    for (s, sym) in samples.iter().zip(&sentence.symbols) {
        let Pose::Spatial(g) = s.pose else { unreachable!() };
        let w = se3.decode(&g).unwrap();
        assert_eq!(sym.gamma, GammaLetter::Spatial(w.gamma));
        assert_eq!(sym.delta, w.delta);
        assert_eq!(sym.tau, s.tau);
        // translation round-off is at most half a lattice step per axis
        assert!(w.residual.translation.amax() <= 0.5 + 1e-12);
    }
    let reps = decode_sentence(&sentence, &alphabet).unwrap();
    assert_eq!(encode(&reps, &alphabet).unwrap(), sentence);
}

#[test]
fn identity_pose_in_space() {
    let se3 = Se3Alphabet::reference(1.0, 20_000, 1).unwrap();
    let w = se3.decode(&SpatialMotion::new(Rotation::identity(), Vector3::new(0.2, -0.3, 0.1))).unwrap();
    assert_eq!(w.gamma, SpaceGroupElement { p: 0, m: 0, n: 0, o: 0 });
    assert_eq!(w.delta, 0);
}

#[test]
fn reference_representatives_are_close() {
    let alphabet = Alphabet::reference_planar();
    let samples = sample_parametric(&TrajectorySpec::ReferenceSe2, &reference_times(-2..=2)).unwrap();
    let sentence = encode(&samples, &alphabet).unwrap();
    let reps = decode_sentence(&sentence, &alphabet).unwrap();
    assert_eq!(reps.len(), 5);
    // the identity cell of p4 x C5 is the unit square times |θ| ≤ π/20
    let extent = (0.5f64 + (PI / 20.0).powi(2)).sqrt();
    for (s, r) in samples.iter().zip(&reps) {
        let (Pose::Planar(a), Pose::Planar(b)) = (s.pose, r.pose) else { unreachable!() };
        let d = motion_alphabet::lie::Se2Metric::default().distance(&a, &b);
        assert!(d <= extent + 1e-12, "{d}");
        assert_eq!(s.tau, r.tau);
    }
}
