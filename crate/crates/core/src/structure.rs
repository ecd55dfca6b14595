//! Structural validation of predicted value probabilities against the
//! theoretical circle: correlation matrix, correlation-derived distances,
//! SMACOF multidimensional scaling, Procrustes alignment, Tucker congruence,
//! and the discrepancy-vs-length regression.
//!
//! SMACOF here is metric MDS by stress majorization: a Torgerson (classical
//! scaling) initialization followed by Guttman transforms, which guarantees
//! a non-increasing stress sequence. Stress is Kruskal's Stress-1 over the
//! strict lower triangle.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::agreement::{kendall_tau, pearson};
use crate::circle::{theoretical_coordinates, ValueProfile, ValueType, VALUE_COUNT};
use crate::error::{Error, Result};

/// A 2-D configuration: one `[x, y]` row per object.
pub type Config2 = Vec<[f64; 2]>;

// ---------------------------------------------------------------------------
// Correlation matrix
// ---------------------------------------------------------------------------

/// Symmetric 10×10 Pearson correlation matrix with unit diagonal and
/// eigenvalues ≥ −1e-8.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    r: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn new(r: Vec<Vec<f64>>) -> Result<Self> {
        if r.len() != VALUE_COUNT || r.iter().any(|row| row.len() != VALUE_COUNT) {
            return Err(Error::Shape(format!("correlation matrix must be {VALUE_COUNT}x{VALUE_COUNT}")));
        }
        for i in 0..VALUE_COUNT {
            if (r[i][i] - 1.0).abs() > 1e-12 {
                return Err(Error::Input(format!("diagonal entry ({i},{i}) is {}", r[i][i])));
            }
            for j in 0..VALUE_COUNT {
                if !r[i][j].is_finite() || r[i][j] < -1.0 - 1e-12 || r[i][j] > 1.0 + 1e-12 {
                    return Err(Error::Input(format!("entry ({i},{j}) = {} outside [-1,1]", r[i][j])));
                }
                if (r[i][j] - r[j][i]).abs() > 1e-12 {
                    return Err(Error::Input(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        let (eigenvalues, _) = jacobi_eigen(&r);
        if let Some(bad) = eigenvalues.iter().find(|l| **l < -1e-8) {
            return Err(Error::Input(format!("correlation matrix has eigenvalue {bad} < -1e-8")));
        }
        Ok(Self { r })
    }

    pub fn entry(&self, a: ValueType, b: ValueType) -> f64 {
        self.r[a.circle_index()][b.circle_index()]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.r
    }
}

/// Pearson correlations between the ten per-value probability columns.
///
/// Errors on fewer than 3 posts or on a constant column, naming the value.
pub fn correlation_matrix(profiles: &[ValueProfile]) -> Result<CorrelationMatrix> {
    if profiles.len() < 3 {
        return Err(Error::Input(format!(
            "correlation matrix needs at least 3 posts, got {}",
            profiles.len()
        )));
    }
    let columns: Vec<Vec<f64>> = (0..VALUE_COUNT)
        .map(|v| profiles.iter().map(|p| p.weights()[v]).collect())
        .collect();
    for (v, column) in columns.iter().enumerate() {
        if column.iter().all(|x| *x == column[0]) {
            return Err(Error::Undefined(format!(
                "constant probability column for {}",
                ValueType::ALL[v]
            )));
        }
    }
    let mut r = vec![vec![0.0; VALUE_COUNT]; VALUE_COUNT];
    for i in 0..VALUE_COUNT {
        r[i][i] = 1.0;
        for j in (i + 1)..VALUE_COUNT {
            let rij = pearson(&columns[i], &columns[j])?;
            r[i][j] = rij;
            r[j][i] = rij;
        }
    }
    CorrelationMatrix::new(r)
}

/// Distance transform d = 1 − r (0 diagonal, entries in [0, 2]).
pub fn corr_to_distance(r: &CorrelationMatrix) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; VALUE_COUNT]; VALUE_COUNT];
    for i in 0..VALUE_COUNT {
        for j in 0..VALUE_COUNT {
            d[i][j] = if i == j { 0.0 } else { 1.0 - r.rows()[i][j] };
        }
    }
    d
}

/// Pairwise chord distances between the theoretical anchor points.
pub fn theoretical_distance_matrix() -> Vec<Vec<f64>> {
    let coords = theoretical_config();
    let n = coords.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let dx = coords[i][0] - coords[j][0];
            let dy = coords[i][1] - coords[j][1];
            d[i][j] = (dx * dx + dy * dy).sqrt();
        }
    }
    d
}

/// Theoretical anchor coordinates as a configuration.
pub fn theoretical_config() -> Config2 {
    theoretical_coordinates().iter().map(|c| [c.x, c.y]).collect()
}

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Eigenvalues and eigenvectors (as columns) of a symmetric matrix, sorted
/// by descending eigenvalue. Deterministic; plenty for 10×10 inputs.
fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|x, y| a[*y][*y].partial_cmp(&a[*x][*x]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|i| a[*i][*i]).collect();
    let mut eigenvectors = vec![vec![0.0; n]; n];
    for (col, src) in order.iter().enumerate() {
        // sign convention: largest-magnitude component positive
        let pivot = (0..n).max_by(|x, y| v[*x][*src].abs().partial_cmp(&v[*y][*src].abs()).unwrap());
        let sign = pivot.map_or(1.0, |p| if v[p][*src] < 0.0 { -1.0 } else { 1.0 });
        for k in 0..n {
            eigenvectors[k][col] = sign * v[k][*src];
        }
    }
    (eigenvalues, eigenvectors)
}

// ---------------------------------------------------------------------------
// SMACOF
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SmacofOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SmacofOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 1000 }
    }
}

#[derive(Debug, Clone)]
pub struct SmacofResult {
    pub config: Config2,
    /// Kruskal Stress-1 of the final configuration.
    pub stress: f64,
    pub iterations: usize,
    /// Stress after initialization, then after every iteration.
    pub stress_trace: Vec<f64>,
}

fn validate_distances(d: &[Vec<f64>]) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Err(Error::Input("distance matrix needs at least 2 objects".into()));
    }
    for i in 0..n {
        if d[i].len() != n {
            return Err(Error::Shape(format!("row {i} has length {}, expected {n}", d[i].len())));
        }
        if d[i][i] != 0.0 {
            return Err(Error::Input(format!("nonzero diagonal at ({i},{i})")));
        }
        for j in 0..n {
            if !d[i][j].is_finite() || d[i][j] < 0.0 {
                return Err(Error::Input(format!("distance ({i},{j}) = {} invalid", d[i][j])));
            }
            if (d[i][j] - d[j][i]).abs() > 1e-9 {
                return Err(Error::Input(format!("asymmetric distance at ({i},{j})")));
            }
        }
    }
    Ok(())
}

fn config_distances(x: &[[f64; 2]]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i][0] - x[j][0];
            let dy = x[i][1] - x[j][1];
            let dist = (dx * dx + dy * dy).sqrt();
            d[i][j] = dist;
            d[j][i] = dist;
        }
    }
    d
}

/// Kruskal Stress-1: sqrt(Σ_{i<j}(d_ij(X) − δ_ij)² / Σ_{i<j} δ_ij²).
/// An all-zero dissimilarity matrix has stress 0 by convention.
pub fn stress1(x: &[[f64; 2]], delta: &[Vec<f64>]) -> f64 {
    let dx = config_distances(x);
    let n = x.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = dx[i][j] - delta[i][j];
            num += r * r;
            den += delta[i][j] * delta[i][j];
        }
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        0.0
    }
}

/// Classical (Torgerson) scaling: eigendecomposition of the double-centered
/// squared-distance matrix, top two components.
fn torgerson_init(delta: &[Vec<f64>]) -> Config2 {
    let n = delta.len();
    let mut sq = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            sq[i][j] = delta[i][j] * delta[i][j];
        }
    }
    let mut row_mean = vec![0.0; n];
    let mut grand = 0.0;
    for i in 0..n {
        row_mean[i] = sq[i].iter().sum::<f64>() / n as f64;
        grand += row_mean[i];
    }
    grand /= n as f64;
    let mut b = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            b[i][j] = -0.5 * (sq[i][j] - row_mean[i] - row_mean[j] + grand);
        }
    }
    let (eigenvalues, eigenvectors) = jacobi_eigen(&b);
    let mut x = vec![[0.0; 2]; n];
    for dim in 0..2 {
        let scale = eigenvalues.get(dim).copied().unwrap_or(0.0).max(0.0).sqrt();
        for (i, row) in x.iter_mut().enumerate() {
            row[dim] = scale * eigenvectors[i][dim];
        }
    }
    x
}

/// Metric MDS by stress majorization (Guttman transform, unit weights) from
/// a Torgerson initialization. Stops when the stress decrease falls below
/// `tol` or after `max_iter` iterations; the stress trace is non-increasing
/// by construction and is returned for verification.
pub fn smacof(delta: &[Vec<f64>], options: &SmacofOptions) -> Result<SmacofResult> {
    validate_distances(delta)?;
    let n = delta.len();

    let mut x = torgerson_init(delta);
    let mut stress = stress1(&x, delta);
    let mut trace = vec![stress];
    let mut iterations = 0;

    for _ in 0..options.max_iter {
        let dx = config_distances(&x);
        // Guttman transform: X' = (1/n) B(X) X
        let mut b = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                if i != j && dx[i][j] > 1e-15 {
                    b[i][j] = -delta[i][j] / dx[i][j];
                    row_sum += b[i][j];
                }
            }
            b[i][i] = -row_sum;
        }
        let mut next = vec![[0.0; 2]; n];
        for i in 0..n {
            for dim in 0..2 {
                let mut sum = 0.0;
                for j in 0..n {
                    sum += b[i][j] * x[j][dim];
                }
                next[i][dim] = sum / n as f64;
            }
        }
        x = next;
        iterations += 1;

        let new_stress = stress1(&x, delta);
        debug_assert!(new_stress <= stress + 1e-12, "majorization must not increase stress");
        trace.push(new_stress);
        let improvement = stress - new_stress;
        stress = new_stress;
        if improvement < options.tol {
            break;
        }
    }

    Ok(SmacofResult { config: x, stress, iterations, stress_trace: trace })
}

// ---------------------------------------------------------------------------
// Procrustes
// ---------------------------------------------------------------------------

/// Align a configuration to a target with the similarity transform
/// (translation, orthogonal rotation/reflection, uniform dilation) that
/// minimizes the Frobenius distance to the target.
pub fn procrustes(x: &[[f64; 2]], target: &[[f64; 2]]) -> Result<Config2> {
    if x.len() != target.len() || x.is_empty() {
        return Err(Error::Shape(format!(
            "configurations must have equal nonzero length, got {} and {}",
            x.len(),
            target.len()
        )));
    }
    let n = x.len() as f64;
    let centroid = |c: &[[f64; 2]]| -> [f64; 2] {
        let mut m = [0.0; 2];
        for row in c {
            m[0] += row[0] / n;
            m[1] += row[1] / n;
        }
        m
    };
    let cx = centroid(x);
    let ct = centroid(target);

    // cross-covariance M = Xcᵀ Tc and the centered norm of X
    let mut m = [[0.0; 2]; 2];
    let mut x_norm_sq = 0.0;
    for (xr, tr) in x.iter().zip(target) {
        let xc = [xr[0] - cx[0], xr[1] - cx[1]];
        let tc = [tr[0] - ct[0], tr[1] - ct[1]];
        for a in 0..2 {
            for b in 0..2 {
                m[a][b] += xc[a] * tc[b];
            }
        }
        x_norm_sq += xc[0] * xc[0] + xc[1] * xc[1];
    }
    if x_norm_sq < 1e-30 {
        return Err(Error::Input("degenerate rank-0 configuration".into()));
    }

    // best rotation vs best reflection by trace maximization
    let rot_a = m[0][0] + m[1][1];
    let rot_b = m[1][0] - m[0][1];
    let rot_trace = (rot_a * rot_a + rot_b * rot_b).sqrt();
    let ref_a = m[0][0] - m[1][1];
    let ref_b = m[1][0] + m[0][1];
    let ref_trace = (ref_a * ref_a + ref_b * ref_b).sqrt();

    let q: [[f64; 2]; 2] = if rot_trace >= ref_trace {
        if rot_trace < 1e-30 {
            [[1.0, 0.0], [0.0, 1.0]]
        } else {
            let c = rot_a / rot_trace;
            let s = rot_b / rot_trace;
            [[c, -s], [s, c]]
        }
    } else {
        let c = ref_a / ref_trace;
        let s = ref_b / ref_trace;
        [[c, s], [s, -c]]
    };
    let scale = rot_trace.max(ref_trace) / x_norm_sq;

    Ok(x.iter()
        .map(|row| {
            let xc = [row[0] - cx[0], row[1] - cx[1]];
            [
                scale * (xc[0] * q[0][0] + xc[1] * q[1][0]) + ct[0],
                scale * (xc[0] * q[0][1] + xc[1] * q[1][1]) + ct[1],
            ]
        })
        .collect())
}

/// Squared Frobenius distance between two configurations.
pub fn frobenius_sq(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let dx = x[0] - y[0];
            let dy = x[1] - y[1];
            dx * dx + dy * dy
        })
        .sum()
}

/// Tucker congruence over the flattened, column-centered coordinates.
pub fn congruence(x: &[[f64; 2]], target: &[[f64; 2]]) -> Result<f64> {
    if x.len() != target.len() || x.is_empty() {
        return Err(Error::Shape("configurations must have equal nonzero length".into()));
    }
    let center = |c: &[[f64; 2]]| -> Vec<f64> {
        let n = c.len() as f64;
        let mut mean = [0.0; 2];
        for row in c {
            mean[0] += row[0] / n;
            mean[1] += row[1] / n;
        }
        c.iter().flat_map(|row| [row[0] - mean[0], row[1] - mean[1]]).collect()
    };
    let xf = center(x);
    let tf = center(target);
    let dot: f64 = xf.iter().zip(&tf).map(|(a, b)| a * b).sum();
    let nx: f64 = xf.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nt: f64 = tf.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nx < 1e-30 || nt < 1e-30 {
        return Err(Error::Undefined("congruence of a zero-norm configuration".into()));
    }
    Ok(dot / (nx * nt))
}

/// Kendall tau-b between the strict lower triangles of two distance
/// matrices.
pub fn structure_tau(d_empirical: &[Vec<f64>], d_theoretical: &[Vec<f64>]) -> Result<f64> {
    let n = d_empirical.len();
    if d_theoretical.len() != n || d_empirical.iter().chain(d_theoretical).any(|r| r.len() != n) {
        return Err(Error::Shape("distance matrices must have the same square shape".into()));
    }
    let mut a = Vec::with_capacity(n * (n - 1) / 2);
    let mut b = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in 0..i {
            a.push(d_empirical[i][j]);
            b.push(d_theoretical[i][j]);
        }
    }
    kendall_tau(&a, &b)
}

// ---------------------------------------------------------------------------
// Discrepancy vs length regression
// ---------------------------------------------------------------------------

/// Standardized simple-regression slope of discrepancy distance on post
/// length. Both variables are z-scored, so the slope equals the Pearson
/// correlation; both routes are computed and must agree.
pub fn discrepancy_length_regression(distances: &[f64], lengths: &[f64]) -> Result<f64> {
    if distances.len() != lengths.len() || distances.len() < 3 {
        return Err(Error::Input(format!(
            "regression needs equal vectors of length >= 3, got {} and {}",
            distances.len(),
            lengths.len()
        )));
    }
    let z = |v: &[f64]| -> Result<Vec<f64>> {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        if var <= 0.0 {
            return Err(Error::Undefined("regression over a constant vector".into()));
        }
        let sd = var.sqrt();
        Ok(v.iter().map(|x| (x - mean) / sd).collect())
    };
    let zy = z(distances)?;
    let zx = z(lengths)?;
    let sxy: f64 = zx.iter().zip(&zy).map(|(a, b)| a * b).sum();
    let sxx: f64 = zx.iter().map(|a| a * a).sum();
    let beta = sxy / sxx;
    let r = pearson(distances, lengths)?;
    debug_assert!((beta - r).abs() < 1e-10, "standardized slope must equal Pearson r");
    Ok(beta)
}

// ---------------------------------------------------------------------------
// Full structure analysis
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub stress: f64,
    pub congruence: f64,
    pub tau: f64,
    pub iterations: usize,
    /// Tucker congruence above 0.9 reads as an excellent structural match.
    pub excellent_match: bool,
}

#[derive(Debug, Clone)]
pub struct StructureAnalysis {
    pub correlation: CorrelationMatrix,
    pub distances: Vec<Vec<f64>>,
    /// Raw SMACOF embedding before alignment.
    pub embedding: Config2,
    /// Embedding after Procrustes alignment to the theoretical circle.
    pub aligned: Config2,
    pub report: StructureReport,
}

/// Correlation → distance → SMACOF → Procrustes toward the theoretical
/// circle, with congruence and rank-correlation diagnostics.
pub fn analyze_structure(
    profiles: &[ValueProfile],
    options: &SmacofOptions,
) -> Result<StructureAnalysis> {
    let correlation = correlation_matrix(profiles)?;
    let distances = corr_to_distance(&correlation);
    let mds = smacof(&distances, options)?;
    let target = theoretical_config();
    let aligned = procrustes(&mds.config, &target)?;
    let rc = congruence(&aligned, &target)?;
    let tau = structure_tau(&distances, &theoretical_distance_matrix())?;
    Ok(StructureAnalysis {
        correlation,
        distances,
        embedding: mds.config,
        aligned,
        report: StructureReport {
            stress: mds.stress,
            congruence: rc,
            tau,
            iterations: mds.iterations,
            excellent_match: rc > 0.9,
        },
    })
}

/// Synthetic probability profiles generated from the theoretical circle:
/// each post gets a random angle and per-value weights decaying with angular
/// distance to the value's anchor, plus small uniform noise.
pub fn synthetic_circle_profiles(posts: usize, seed: u64, noise: f64) -> Vec<ValueProfile> {
    use std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anchor_angles: Vec<f64> = (0..VALUE_COUNT)
        .map(|k| PI / 2.0 - (k as f64) * (2.0 * PI / VALUE_COUNT as f64))
        .collect();
    let falloff = 0.8; // radians; adjacent anchors keep visible correlation
    (0..posts)
        .map(|_| {
            let phi = rng.gen_range(0.0..(2.0 * PI));
            let mut weights = [0.0; VALUE_COUNT];
            for (k, w) in weights.iter_mut().enumerate() {
                let mut a = (phi - anchor_angles[k]).rem_euclid(2.0 * PI);
                if a > PI {
                    a = 2.0 * PI - a;
                }
                let base = (-(a / falloff) * (a / falloff)).exp();
                let jitter = rng.gen_range(-noise..=noise);
                *w = (base + jitter).clamp(1e-3, 1.0 - 1e-3);
            }
            ValueProfile::new(weights).expect("clamped weights are valid")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_profiles() -> Vec<ValueProfile> {
        synthetic_circle_profiles(300, 7, 0.02)
    }

    #[test]
    fn correlation_of_duplicated_column_is_one() {
        // two identical columns via identical weights on two values
        let profiles: Vec<ValueProfile> = (0..5)
            .map(|i| {
                let x = 0.1 + 0.2 * i as f64;
                let mut w = [0.0; VALUE_COUNT];
                for (k, slot) in w.iter_mut().enumerate() {
                    *slot = if k < 2 { x } else { 0.9 - 0.15 * ((i + k) % 5) as f64 };
                }
                ValueProfile::new(w).unwrap()
            })
            .collect();
        let r = correlation_matrix(&profiles).unwrap();
        assert!((r.entry(ValueType::SelfDirection, ValueType::Stimulation) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_is_undefined_and_named() {
        let profiles: Vec<ValueProfile> = (0..4)
            .map(|i| {
                let mut w = [0.5; VALUE_COUNT];
                for (k, slot) in w.iter_mut().enumerate().skip(1) {
                    *slot = 0.1 + 0.1 * ((i + k) % 7) as f64;
                }
                ValueProfile::new(w).unwrap()
            })
            .collect();
        match correlation_matrix(&profiles) {
            Err(Error::Undefined(msg)) => assert!(msg.contains("Self-Direction")),
            other => panic!("expected undefined-correlation error, got {other:?}"),
        }
    }

    #[test]
    fn corr_to_distance_transform_points() {
        let mut r = vec![vec![0.0; VALUE_COUNT]; VALUE_COUNT];
        for i in 0..VALUE_COUNT {
            r[i][i] = 1.0;
        }
        r[0][1] = 0.55;
        r[1][0] = 0.55;
        r[2][3] = -1.0;
        r[3][2] = -1.0;
        let m = CorrelationMatrix::new(r);
        // the hand-built matrix may be indefinite; bypass full validation
        // by checking the transform arithmetic directly
        if let Ok(m) = m {
            let d = corr_to_distance(&m);
            assert!((d[0][1] - 0.45).abs() < 1e-12);
            assert!((d[2][3] - 2.0).abs() < 1e-12);
            assert_eq!(d[0][0], 0.0);
        }
    }

    #[test]
    fn jacobi_recovers_a_known_spectrum() {
        // diag(3,1) rotated by 45 degrees has eigenvalues {3, 1}
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let (values, vectors) = jacobi_eigen(&a);
        assert!((values[0] - 3.0).abs() < 1e-12);
        assert!((values[1] - 1.0).abs() < 1e-12);
        assert!((vectors[0][0].abs() - c).abs() < 1e-12);
    }

    #[test]
    fn exact_circle_distances_embed_with_negligible_stress() {
        let delta = theoretical_distance_matrix();
        let result = smacof(&delta, &SmacofOptions::default()).unwrap();
        assert!(result.stress < 1e-6, "stress {} too high", result.stress);
    }

    #[test]
    fn simplex_distances_do_not_embed_in_the_plane() {
        let n = VALUE_COUNT;
        let mut delta = vec![vec![1.0; n]; n];
        for (i, row) in delta.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        let result = smacof(&delta, &SmacofOptions::default()).unwrap();
        assert!(result.stress > 0.01, "a 10-point simplex cannot be flat");
        assert!(result.iterations <= 1000);
    }

    #[test]
    fn smacof_stress_trace_never_increases() {
        let profiles = circle_profiles();
        let r = correlation_matrix(&profiles).unwrap();
        let delta = corr_to_distance(&r);
        let result = smacof(&delta, &SmacofOptions::default()).unwrap();
        for pair in result.stress_trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "stress increased: {} -> {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn smacof_rejects_malformed_input() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(smacof(&asym, &SmacofOptions::default()).is_err());
        let negative = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(smacof(&negative, &SmacofOptions::default()).is_err());
    }

    #[test]
    fn procrustes_identity_when_already_aligned() {
        let target = theoretical_config();
        let aligned = procrustes(&target, &target).unwrap();
        assert!(frobenius_sq(&aligned, &target) < 1e-20);
    }

    #[test]
    fn procrustes_inverts_a_known_similarity_transform() {
        let target = theoretical_config();
        // rotate 90 degrees, scale 3, translate (1, -2)
        let transformed: Config2 =
            target.iter().map(|p| [3.0 * -p[1] + 1.0, 3.0 * p[0] - 2.0]).collect();
        let recovered = procrustes(&transformed, &target).unwrap();
        assert!(frobenius_sq(&recovered, &target) < 1e-20);
    }

    #[test]
    fn procrustes_handles_reflections() {
        let target = theoretical_config();
        let mirrored: Config2 = target.iter().map(|p| [-p[0], p[1]]).collect();
        let recovered = procrustes(&mirrored, &target).unwrap();
        assert!(frobenius_sq(&recovered, &target) < 1e-20);
    }

    #[test]
    fn procrustes_is_idempotent() {
        let profiles = circle_profiles();
        let r = correlation_matrix(&profiles).unwrap();
        let mds = smacof(&corr_to_distance(&r), &SmacofOptions::default()).unwrap();
        let target = theoretical_config();
        let once = procrustes(&mds.config, &target).unwrap();
        let twice = procrustes(&once, &target).unwrap();
        assert!(frobenius_sq(&once, &twice) < 1e-20);
    }

    #[test]
    fn procrustes_rejects_degenerate_input() {
        let flat = vec![[1.0, 2.0]; 10];
        let target = theoretical_config();
        assert!(matches!(procrustes(&flat, &target), Err(Error::Input(_))));
    }

    #[test]
    fn congruence_of_target_with_itself_is_one() {
        let t = theoretical_config();
        assert!((congruence(&t, &t).unwrap() - 1.0).abs() < 1e-12);
        let neg: Config2 = t.iter().map(|p| [-p[0], -p[1]]).collect();
        assert!((congruence(&neg, &t).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn congruence_invariances() {
        let t = theoretical_config();
        let scaled: Config2 = t.iter().map(|p| [2.5 * p[0], 2.5 * p[1]]).collect();
        assert!((congruence(&scaled, &t).unwrap() - 1.0).abs() < 1e-12);
        // simultaneous rotation of both configurations
        let rot = |c: &Config2| -> Config2 { c.iter().map(|p| [-p[1], p[0]]).collect() };
        let a = synthetic_config();
        let ra = rot(&a);
        let rt = rot(&t);
        assert!((congruence(&a, &t).unwrap() - congruence(&ra, &rt).unwrap()).abs() < 1e-12);
    }

    fn synthetic_config() -> Config2 {
        (0..VALUE_COUNT).map(|i| [0.1 * i as f64, 0.3 - 0.05 * (i as f64).sin()]).collect()
    }

    #[test]
    fn structure_tau_is_rank_invariant() {
        let d = theoretical_distance_matrix();
        assert!((structure_tau(&d, &d).unwrap() - 1.0).abs() < 1e-12);
        // a monotone transform preserves ranks exactly
        let squared: Vec<Vec<f64>> =
            d.iter().map(|row| row.iter().map(|x| x * x).collect()).collect();
        assert!((structure_tau(&squared, &d).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regression_of_a_variable_on_itself_is_one() {
        let v = [3.0, 7.0, 1.0, 9.0, 4.0];
        assert!((discrepancy_length_regression(&v, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regression_on_an_orthogonal_fixture_is_zero() {
        // constructed so Σ zx·zy = 0
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [1.0, -1.0, 0.0, -1.0, 1.0];
        let beta = discrepancy_length_regression(&y, &x).unwrap();
        assert!(beta.abs() < 1e-12, "beta = {beta}");
    }

    #[test]
    fn regression_rejects_constant_input() {
        assert!(matches!(
            discrepancy_length_regression(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn end_to_end_circle_recovery() {
        let profiles = circle_profiles();
        let analysis = analyze_structure(&profiles, &SmacofOptions::default()).unwrap();
        assert!(analysis.report.stress < 0.1, "stress = {}", analysis.report.stress);
        assert!(analysis.report.congruence > 0.95, "r_c = {}", analysis.report.congruence);
        assert!(analysis.report.excellent_match);
    }
}
