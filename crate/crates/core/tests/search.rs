use rand::Rng;
use rand_chacha::ChaCha8Rng;
use superbridge::search::{
    confinement, edge_lengths, polygon_rng, search, search_with, EquilateralSampler, Sampler,
    COORDINATE_SCALE,
};
use superbridge::{
    find_certificate, random_equilateral_polygon, superbridge_number, verify_bundle, SearchConfig,
};

fn config(n: usize, target: usize, samples: usize) -> SearchConfig {
    SearchConfig {
        n,
        target,
        samples,
        seed: 42,
        confinement_radius: n as f64,
        screen_samples: 500,
    }
}

#[test]
fn equilateral_sweep_keeps_invariants() {
    let scale = COORDINATE_SCALE as f64;
    for i in 0..10_000u64 {
        let p = random_equilateral_polygon(10, 1.5, &mut polygon_rng(5, i)).unwrap();
        assert!(p.edges().sum().is_zero());
        for l in edge_lengths(&p) {
            assert!((l / scale - 1.0).abs() < 2e-3, "{l}");
        }
        // rounding moves each vertex by at most half a unit per coordinate
        assert!(confinement(&p) / scale <= 1.5 + 2e-3);
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let cfg = config(8, 3, 300);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| search(&cfg).unwrap())
    };
    let (a, sa) = run(1);
    let (b, sb) = run(4);
    assert_eq!(a, b);
    assert_eq!(sa, sb);
}

#[test]
fn candidates_meet_target_and_carry_certificates() {
    let cfg = config(10, 4, 60);
    let (cands, stats) = search(&cfg).unwrap();
    assert_eq!(stats.generated, 60);
    assert!(stats.confirmed <= stats.screened && stats.screened <= stats.generated);
    assert_eq!(stats.confirmed, cands.len());
    for c in &cands {
        assert!(c.exact_sb <= 4);
        assert_eq!(superbridge_number(&c.knot).unwrap().value, c.exact_sb);
        let b = c.certificate.as_ref().expect("sb < 5 has a certificate");
        assert_eq!(verify_bundle(&c.knot, b).unwrap().certified_upper, 4);
    }
}

#[test]
fn jin_target_accepts_everything() {
    let cfg = config(7, 3, 40);
    let (cands, stats) = search(&cfg).unwrap();
    assert_eq!(cands.len(), 40);
    assert_eq!(stats.confirmed, 40);
}

#[test]
fn small_quadrilateral_search() {
    let mut cfg = config(4, 1, 50);
    cfg.confinement_radius = 1.0;
    // a nonplanar quadrilateral always has sb = 2, so equilateral space
    // quadrilaterals never qualify
    let mut found = Vec::new();
    let stats = search_with(&cfg, &EquilateralSampler, |c| found.push(c)).unwrap();
    assert_eq!(stats.generated, 50);
    assert!(found.is_empty());

    let stats = search_with(&cfg, &PlanarRhombus, |c| found.push(c)).unwrap();
    assert_eq!(stats.confirmed, 50);
    for c in found {
        assert_eq!(c.exact_sb, 1);
        assert!(find_certificate(&c.knot).bundle().is_some());
    }
}

/// Random rhombi in the xy-plane.
struct PlanarRhombus;

impl Sampler for PlanarRhombus {
    fn attempt(&self, _n: usize, _radius: f64, rng: &mut ChaCha8Rng) -> Option<Vec<[f64; 3]>> {
        let a: f64 = rng.gen_range(0.3..1.2);
        let b: f64 = rng.gen_range(0.3..1.2) + a;
        let (u, w) = ([a.cos(), a.sin(), 0.0], [b.cos(), b.sin(), 0.0]);
        Some(vec![[0.0; 3], u, [u[0] + w[0], u[1] + w[1], 0.0], w])
    }
}

#[test]
fn triangle_is_equilateral() {
    for i in 0..50 {
        let p = random_equilateral_polygon(3, 1.0, &mut polygon_rng(0, i)).unwrap();
        let ls = edge_lengths(&p);
        let max = ls.iter().cloned().fold(0.0, f64::max);
        let min = ls.iter().cloned().fold(f64::MAX, f64::min);
        assert!((max - min) / max < 3e-3);
    }
}
