//! Independent-oracle checks: each test recomputes a statistic through a
//! second, separately coded route and compares against the library.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use valuekit::agreement::{average_ranks, kendall_tau, pearson, spearman};
use valuekit::structure::{
    frobenius_sq, procrustes, smacof, stress1, theoretical_config, SmacofOptions,
};

#[test]
fn kendall_matches_the_sign_product_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let n = rng.gen_range(4..20);
        // draw from a small integer range to force ties
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
        let lib = kendall_tau(&x, &y);

        // oracle: tau-b as a cosine of pairwise sign vectors
        // (f64::signum maps 0.0 to 1.0, so spell out the three-way sign)
        let sgn = |v: f64| -> f64 {
            if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                0.0
            }
        };
        let mut num = 0.0f64;
        let mut sx = 0.0f64;
        let mut sy = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = sgn(x[i] - x[j]);
                let dy = sgn(y[i] - y[j]);
                num += dx * dy;
                sx += dx * dx;
                sy += dy * dy;
            }
        }
        if sx == 0.0 || sy == 0.0 {
            assert!(lib.is_err());
            continue;
        }
        let oracle = num / (sx * sy).sqrt();
        assert!((lib.unwrap() - oracle).abs() < 1e-12);
    }
}

#[test]
fn spearman_matches_the_no_ties_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let n = rng.gen_range(4..30);
        // distinct values, then shuffle: guaranteed tie-free
        let mut x: Vec<f64> = (0..n).map(|i| i as f64 + rng.gen_range(0.0..0.4)).collect();
        let mut y: Vec<f64> = (0..n).map(|i| i as f64 + rng.gen_range(0.0..0.4)).collect();
        x.shuffle(&mut rng);
        y.shuffle(&mut rng);

        let rho = spearman(&x, &y).unwrap();
        let rx = average_ranks(&x);
        let ry = average_ranks(&y);
        let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
        let nf = n as f64;
        let closed_form = 1.0 - 6.0 * d2 / (nf * (nf * nf - 1.0));
        assert!((rho - closed_form).abs() < 1e-10, "rho={rho} cf={closed_form}");
    }
}

#[test]
fn spearman_tied_case_matches_an_independent_rank_pearson() {
    // duplicate-value case ranked by hand: x -> [1, 2.5, 2.5, 4]
    let x = [1.0, 2.0, 2.0, 3.0];
    let y = [1.0, 2.0, 3.0, 4.0];
    let hand_ranked_x = [1.0, 2.5, 2.5, 4.0];
    let hand_ranked_y = [1.0, 2.0, 3.0, 4.0];
    let oracle = pearson(&hand_ranked_x, &hand_ranked_y).unwrap();
    assert!((spearman(&x, &y).unwrap() - oracle).abs() < 1e-12);
}

#[test]
fn smacof_stress_is_non_increasing_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..25 {
        let n = rng.gen_range(4..12);
        // random points in up to 4 dimensions give valid metric distances
        let dims = rng.gen_range(2..5);
        let points: Vec<Vec<f64>> =
            (0..n).map(|_| (0..dims).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let mut delta = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d: f64 = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                delta[i][j] = d;
                delta[j][i] = d;
            }
        }
        let result = smacof(&delta, &SmacofOptions::default()).unwrap();
        for pair in result.stress_trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "stress rose {} -> {}", pair[0], pair[1]);
        }
        assert!((stress1(&result.config, &delta) - result.stress).abs() < 1e-12);
    }
}

#[test]
fn random_similarity_probes_never_beat_procrustes() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    // a fixed non-trivial configuration against the circle target
    let target = theoretical_config();
    let source: Vec<[f64; 2]> = (0..target.len())
        .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
        .collect();
    let aligned = procrustes(&source, &target).unwrap();
    let best = frobenius_sq(&aligned, &target);

    for _ in 0..1000 {
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let scale: f64 = rng.gen_range(0.05..5.0);
        let tx: f64 = rng.gen_range(-2.0..2.0);
        let ty: f64 = rng.gen_range(-2.0..2.0);
        let reflect = rng.gen_bool(0.5);
        let probe: Vec<[f64; 2]> = source
            .iter()
            .map(|p| {
                let x = if reflect { -p[0] } else { p[0] };
                let (s, c) = angle.sin_cos();
                [scale * (c * x - s * p[1]) + tx, scale * (s * x + c * p[1]) + ty]
            })
            .collect();
        let probe_dist = frobenius_sq(&probe, &target);
        assert!(probe_dist + 1e-12 >= best, "random probe beat procrustes: {probe_dist} < {best}");
    }
}
