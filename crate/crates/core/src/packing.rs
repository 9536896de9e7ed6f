//! Projective-space geometry of saturation recovery: Welch bound,
//! multi-packings, the critical saturation level and empirical stability.
//!
//! For a full-spark frame, `x` is determined by its clipped coefficients
//! exactly when at most `m − n` coefficients exceed `λ` in magnitude. On
//! the unit sphere that makes the critical level
//!
//! ```text
//! λ_c = max_{‖x‖=1} max_{|S| = m−n+1} min_{j∈S} |⟨x, x_j⟩|
//! ```
//!
//! For fixed `x` the inner max-min is attained by the `m − n + 1` largest
//! magnitudes, since replacing any member of `S` with a larger coefficient
//! cannot lower the minimum. So `λ_c` is the sphere maximum of the single
//! scalar field `f(x) = (m−n+1)`-th largest `|⟨x, x_j⟩|`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{binomial, next_combination, Frame, EXHAUSTIVE_SPARK_LIMIT};
use crate::numerics::{self, dot, norm, Mat, Rng};
use crate::saturation;

/// Grid resolution of the ℝ² oracle.
pub const ORACLE_GRID: usize = 1_000_000;

/// Cut points closer than this on the projective circle are merged.
const ARC_TIE_TOL: f64 = 1e-12;

/// `d([x],[y]) = arccos |⟨x, y⟩|` for unit vectors.
pub fn projective_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    for (index, v) in [x, y].into_iter().enumerate() {
        let r = norm(v);
        if (r - 1.0).abs() > crate::frames::UNIT_NORM_TOL {
            return Err(Error::NotUnitNorm { index, norm: r });
        }
    }
    if x.len() != y.len() {
        return Err(Error::BadShape("vectors of different length".into()));
    }
    Ok(dot(x, y).abs().min(1.0).acos())
}

/// Lower bound `((m−n)/(n(m−1)))^{1/2}` on the coherence of `m` unit
/// vectors in ℝⁿ.
pub fn welch_bound(m: usize, n: usize) -> Result<f64> {
    if n == 0 || m < n || m < 2 {
        return Err(Error::BadShape(format!(
            "Welch bound needs m >= n >= 1 and m >= 2, got m = {m}, n = {n}"
        )));
    }
    let (m, n) = (m as f64, n as f64);
    Ok(((m - n) / (n * (m - 1.0))).sqrt())
}

/// How [`is_multipacking`] searches for overfull points.
pub enum PackingMode<'a> {
    /// Exact arc sweep, ℝ² only.
    ExactCircle,
    Sampled { samples: usize, rng: &'a mut Rng },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiPackingVerdict {
    pub epsilon: f64,
    pub fold: usize,
    pub is_multipacking: bool,
    pub exact: bool,
    /// Largest number of open balls found covering one point.
    pub max_depth: usize,
    /// A unit vector lying strictly inside more than `fold` balls.
    pub witness: Option<Vec<f64>>,
}

/// Number of centers strictly within projective distance `epsilon` of `u`.
fn depth_at(frame: &Frame, u: &[f64], epsilon: f64) -> usize {
    frame
        .vectors()
        .filter(|v| dot(u, v).abs().min(1.0).acos() < epsilon)
        .count()
}

/// Is `(B°_ε([x_j]))_j` an `fold`-fold multi-packing of `P^{n−1}`, i.e.
/// does every line lie strictly within `ε` of at most `fold` centers?
pub fn is_multipacking(
    frame: &Frame,
    epsilon: f64,
    fold: usize,
    mode: PackingMode<'_>,
) -> Result<MultiPackingVerdict> {
    use std::f64::consts::FRAC_PI_2;
    if !(epsilon > 0.0 && epsilon <= FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "packing radius {epsilon} outside (0, pi/2]"
        )));
    }
    if fold == 0 {
        return Err(Error::InvalidArgument("fold must be at least 1".into()));
    }
    frame.check_unit_norm()?;
    let (max_depth, witness, exact) = match mode {
        PackingMode::ExactCircle => {
            if frame.dim() != 2 {
                return Err(Error::BadShape(
                    "exact multi-packing check is only available in dimension 2".into(),
                ));
            }
            let (d, w) = deepest_point_on_circle(frame, epsilon);
            (d, w, true)
        }
        PackingMode::Sampled { samples, rng } => {
            let mut best = (0, Vec::new());
            let mut consider = |u: Vec<f64>| {
                let r = norm(&u);
                if r == 0.0 {
                    return;
                }
                let u: Vec<f64> = u.iter().map(|v| v / r).collect();
                let d = depth_at(frame, &u, epsilon);
                if d > best.0 || best.1.is_empty() {
                    best = (d, u);
                }
            };
            for i in 0..frame.len() {
                consider(frame.vector(i).to_vec());
                for j in (i + 1)..frame.len() {
                    let (a, b) = (frame.vector(i), frame.vector(j));
                    consider(a.iter().zip(b).map(|(p, q)| p + q).collect());
                    consider(a.iter().zip(b).map(|(p, q)| p - q).collect());
                }
            }
            for _ in 0..samples {
                consider(numerics::normal_unit_vector(frame.dim(), rng));
            }
            (best.0, Some(best.1), false)
        }
    };
    let is_multipacking = max_depth <= fold;
    Ok(MultiPackingVerdict {
        epsilon,
        fold,
        is_multipacking,
        exact,
        max_depth,
        witness: if is_multipacking { None } else { witness },
    })
}

/// Sweep the circle of lines `θ ∈ [0, π)`. Ball `j` is the open arc of
/// half-width `ε` about `θ_j`; coverage is constant between arc endpoints,
/// so evaluating one interior point per gap finds the maximum depth.
/// Endpoints closer than [`ARC_TIE_TOL`] are merged, so a vanishing gap
/// never produces a violation.
fn deepest_point_on_circle(frame: &Frame, epsilon: f64) -> (usize, Option<Vec<f64>>) {
    use std::f64::consts::PI;
    let centers: Vec<f64> = frame
        .vectors()
        .map(|v| v[1].atan2(v[0]).rem_euclid(PI))
        .collect();
    let mut cuts: Vec<f64> = centers
        .iter()
        .flat_map(|&t| [(t - epsilon).rem_euclid(PI), (t + epsilon).rem_euclid(PI)])
        .collect();
    cuts.sort_by(f64::total_cmp);
    let raw = cuts.len();
    cuts.dedup_by(|a, b| (*a - *b).abs() <= ARC_TIE_TOL);
    if cuts.len() > 1 && (cuts[0] + PI - cuts[cuts.len() - 1]) <= ARC_TIE_TOL {
        cuts.pop();
    }
    if cuts.len() < raw {
        log::debug!(
            "arc sweep merged {} endpoint(s) within {ARC_TIE_TOL:e}",
            raw - cuts.len()
        );
    }
    let arc_depth = |theta: f64| -> usize {
        centers
            .iter()
            .filter(|&&c| {
                let d = (theta - c).rem_euclid(PI);
                d.min(PI - d) < epsilon
            })
            .count()
    };
    let mut best: (usize, f64) = (0, 0.0);
    for (i, &a) in cuts.iter().enumerate() {
        let b = if i + 1 < cuts.len() {
            cuts[i + 1]
        } else {
            cuts[0] + PI
        };
        let mid = 0.5 * (a + b);
        let d = arc_depth(mid);
        if d > best.0 {
            best = (d, mid);
        }
    }
    let witness = vec![best.1.cos(), best.1.sin()];
    (best.0, Some(witness))
}

/// A critical-level result, tagged by how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaC {
    Exact {
        value: f64,
        full_spark: bool,
        coherence: f64,
    },
    Interval {
        lower: f64,
        upper: f64,
        /// The subset search for the packing constant was exhaustive. When
        /// false the lower end is still valid but the upper end is not
        /// certified.
        exhaustive: bool,
        packing_constant: f64,
        subset: Vec<usize>,
    },
    Estimate {
        /// Attained at `witness`, hence a lower bound on `λ_c`.
        value: f64,
        restarts: usize,
        best_restart: usize,
        witness: Vec<f64>,
    },
    Oracle {
        value: f64,
        grid: usize,
        angle: f64,
    },
}

impl LambdaC {
    /// Point value, or the interval's upper end.
    pub fn value(&self) -> f64 {
        match self {
            LambdaC::Exact { value, .. }
            | LambdaC::Estimate { value, .. }
            | LambdaC::Oracle { value, .. } => *value,
            LambdaC::Interval { upper, .. } => *upper,
        }
    }
}

fn half_angle_cos(alpha: f64) -> f64 {
    (0.5 * (1.0 + alpha)).sqrt()
}

/// Critical level of `n + 1` unit vectors in ℝⁿ: `2^{-1/2}(1+α)^{1/2}` with
/// `α` the coherence when full spark, otherwise 1.
pub fn lambda_c_exact_simplex_case(frame: &Frame) -> Result<LambdaC> {
    if frame.len() != frame.dim() + 1 {
        return Err(Error::BadShape(format!(
            "exact critical level needs m = n + 1, got m = {}, n = {}",
            frame.len(),
            frame.dim()
        )));
    }
    let coherence = frame.coherence()?;
    let full_spark = frame.is_full_spark();
    let value = if full_spark {
        half_angle_cos(coherence)
    } else {
        1.0
    };
    Ok(LambdaC::Exact {
        value,
        full_spark,
        coherence,
    })
}

fn require_full_spark(frame: &Frame) -> Result<()> {
    let spark = frame.full_spark();
    if !spark.full_spark {
        return Err(Error::NotFullSpark(format!(
            "dependent subset {:?}",
            spark.witness.unwrap_or_default()
        )));
    }
    Ok(())
}

/// Two-sided bounds `α ≤ λ_c ≤ 2^{-1/2}(1+α)^{1/2}` where `α` is the largest,
/// over `(m−n+1)`-subsets, of the smallest pairwise `|⟨x_i, x_j⟩|`.
pub fn lambda_c_bounds(frame: &Frame) -> Result<LambdaC> {
    let (m, n) = (frame.len(), frame.dim());
    if m <= n {
        return Err(Error::BadShape(format!(
            "critical-level bounds need m > n, got m = {m}, n = {n}"
        )));
    }
    frame.check_unit_norm()?;
    require_full_spark(frame)?;
    let k = m - n + 1;
    let g = frame.gram();
    let abs_g = |i: usize, j: usize| g[(i, j)].abs();
    let min_pairwise = |s: &[usize]| -> f64 {
        let mut best = f64::INFINITY;
        for a in 0..s.len() {
            for b in (a + 1)..s.len() {
                best = best.min(abs_g(s[a], s[b]));
            }
        }
        best
    };

    let exhaustive = binomial(m as u64, k as u64) <= EXHAUSTIVE_SPARK_LIMIT;
    let (alpha, subset) = if exhaustive {
        let mut s: Vec<usize> = (0..k).collect();
        let mut best = (min_pairwise(&s), s.clone());
        while next_combination(&mut s, m) {
            let v = min_pairwise(&s);
            if v > best.0 {
                best = (v, s.clone());
            }
        }
        best
    } else {
        greedy_packing_constant(m, k, &abs_g, &min_pairwise)
    };
    Ok(LambdaC::Interval {
        lower: alpha,
        upper: half_angle_cos(alpha),
        exhaustive,
        packing_constant: alpha,
        subset,
    })
}

/// Greedy growth from every seed pair followed by single swaps. Returns a
/// subset achieving a lower bound on the max-min over `k`-subsets.
fn greedy_packing_constant(
    m: usize,
    k: usize,
    abs_g: &dyn Fn(usize, usize) -> f64,
    min_pairwise: &dyn Fn(&[usize]) -> f64,
) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for i in 0..m {
        for j in (i + 1)..m {
            let mut s = vec![i, j];
            let mut cur = abs_g(i, j);
            while s.len() < k {
                let pick = (0..m)
                    .filter(|c| !s.contains(c))
                    .map(|c| (s.iter().map(|&t| abs_g(c, t)).fold(cur, f64::min), c))
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .unwrap();
                cur = pick.0;
                s.push(pick.1);
            }
            // Swap improvements.
            let mut improved = true;
            while improved {
                improved = false;
                for pos in 0..k {
                    for c in 0..m {
                        if s.contains(&c) {
                            continue;
                        }
                        let old = s[pos];
                        s[pos] = c;
                        let v = min_pairwise(&s);
                        if v > cur + 1e-15 {
                            cur = v;
                            improved = true;
                        } else {
                            s[pos] = old;
                        }
                    }
                }
            }
            if cur > best.0 {
                let mut sorted = s.clone();
                sorted.sort_unstable();
                best = (cur, sorted);
            }
        }
    }
    best
}

/// `(m−n+1)`-th largest `|⟨x, x_j⟩|`.
pub fn critical_objective(frame: &Frame, x: &[f64]) -> f64 {
    let k = frame.len() + 1 - frame.dim();
    let mut mags: Vec<f64> = frame.analysis_matrix().matvec(x).iter().map(|c| c.abs()).collect();
    let (_, kth, _) = mags.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    *kth
}

fn normalize(v: &mut [f64]) {
    let r = norm(v);
    v.iter_mut().for_each(|x| *x /= r);
}

/// Local ascent of the critical objective from a unit start point.
///
/// Ascends the smooth surrogate `⟨x, s_p x_p⟩` of the current pivot
/// (the `(m−n+1)`-th largest coefficient) with step halving, then polishes
/// on the active set: for the top `m−n+1` indices with signs `s_j`,
/// `max_{‖x‖≤1} min_j s_j⟨x, x_j⟩` is the distance from 0 to
/// `conv{s_j x_j}`, attained at the normalized min-norm point.
fn ascend(frame: &Frame, mut x: Vec<f64>) -> (f64, Vec<f64>) {
    let m = frame.len();
    let k = m + 1 - frame.dim();
    let theta = frame.analysis_matrix();
    let mut value = critical_objective(frame, &x);
    let mut step = 0.5;
    while step >= 1e-10 {
        let c = theta.matvec(&x);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| c[b].abs().total_cmp(&c[a].abs()));
        let p = order[k - 1];
        let s = if c[p] < 0.0 { -1.0 } else { 1.0 };
        let mut g: Vec<f64> = frame.vector(p).iter().map(|v| s * v).collect();
        let gx = dot(&g, &x);
        numerics::axpy(-gx, &x, &mut g);
        if norm(&g) < 1e-15 {
            break;
        }
        let mut cand = x.clone();
        numerics::axpy(step, &g, &mut cand);
        normalize(&mut cand);
        let v = critical_objective(frame, &cand);
        if v > value {
            x = cand;
            value = v;
            step = (step * 1.5).min(1.0);
        } else {
            step *= 0.5;
        }
    }

    for _ in 0..100 {
        let c = theta.matvec(&x);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| c[b].abs().total_cmp(&c[a].abs()));
        let points: Vec<Vec<f64>> = order[..k]
            .iter()
            .map(|&j| {
                let s = if c[j] < 0.0 { -1.0 } else { 1.0 };
                frame.vector(j).iter().map(|v| s * v).collect()
            })
            .collect();
        let w = min_norm_point(&points);
        let r = norm(&w);
        if r <= 0.0 {
            break;
        }
        let cand: Vec<f64> = w.iter().map(|v| v / r).collect();
        let v = critical_objective(frame, &cand);
        if v > value + 1e-16 {
            x = cand;
            value = v;
        } else {
            break;
        }
    }
    (value, x)
}

/// Nearest point to the origin in the convex hull of `points` (Wolfe's
/// algorithm).
pub fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    assert!(!points.is_empty());
    let dim = points[0].len();
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max);
    let tol = 1e-15 * scale.max(1e-300);
    let combine = |set: &[usize], w: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (&i, &wi) in set.iter().zip(w) {
            numerics::axpy(wi, &points[i], &mut out);
        }
        out
    };

    let start = (0..points.len())
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .unwrap();
    let mut set = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..1000 {
        let xx = dot(&x, &x);
        let (j, xj) = (0..points.len())
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xj >= xx - 1e-12 * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        weights.push(0.0);

        loop {
            // Affine minimizer over the current set.
            let s = set.len();
            let mut kkt = Mat::zeros(s + 1, s + 1);
            for a in 0..s {
                for b in 0..s {
                    kkt[(a, b)] = dot(&points[set[a]], &points[set[b]]);
                }
                kkt[(a, s)] = 1.0;
                kkt[(s, a)] = 1.0;
            }
            let mut rhs = vec![0.0; s + 1];
            rhs[s] = 1.0;
            let Some(sol) = numerics::solve(&kkt, &rhs) else {
                // Affinely dependent set: drop the newest point and stop.
                set.pop();
                weights.pop();
                return combine(&set, &weights);
            };
            let affine = &sol[..s];
            if affine.iter().all(|&v| v > tol) {
                weights = affine.to_vec();
                x = combine(&set, &weights);
                break;
            }
            let mut t = 1.0_f64;
            for i in 0..s {
                if affine[i] <= tol {
                    let denom = weights[i] - affine[i];
                    if denom > 0.0 {
                        t = t.min(weights[i] / denom);
                    }
                }
            }
            for i in 0..s {
                weights[i] = t * affine[i] + (1.0 - t) * weights[i];
            }
            let mut keep_set = Vec::with_capacity(s);
            let mut keep_w = Vec::with_capacity(s);
            for i in 0..s {
                if weights[i] > tol {
                    keep_set.push(set[i]);
                    keep_w.push(weights[i]);
                }
            }
            if keep_set.is_empty() {
                return x;
            }
            let total: f64 = keep_w.iter().sum();
            keep_w.iter_mut().for_each(|w| *w /= total);
            set = keep_set;
            weights = keep_w;
            x = combine(&set, &weights);
        }
    }
    x
}

/// Random-restart maximization of the critical objective over the sphere.
/// The returned value is attained at `witness`, so it never exceeds `λ_c`.
pub fn lambda_c_estimate(frame: &Frame, restarts: usize, rng: &mut Rng) -> Result<LambdaC> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    if frame.len() < frame.dim() {
        return Err(Error::BadShape("need m >= n".into()));
    }
    require_full_spark(frame)?;
    let master = rng.next_u64();
    let mut best = (f64::NEG_INFINITY, Vec::new(), 0);
    for r in 0..restarts {
        let mut child = Rng::seed_from_u64(numerics::child_seed(master, r as u64, 0));
        let start = numerics::normal_unit_vector(frame.dim(), &mut child);
        let (v, x) = ascend(frame, start);
        if v > best.0 {
            best = (v, x, r);
        }
    }
    Ok(LambdaC::Estimate {
        value: best.0,
        restarts,
        best_restart: best.2,
        witness: best.1,
    })
}

/// Brute-force critical level in ℝ²: the `(m−1)`-th largest `|⟨u(θ), x_j⟩|`
/// on a uniform grid of [`ORACLE_GRID`] angles in `[0, π)`, followed by
/// golden-section refinement around every grid maximum within `1e-4` of
/// the best.
pub fn lambda_c_oracle_n2(frame: &Frame) -> Result<LambdaC> {
    use std::f64::consts::PI;
    if frame.dim() != 2 {
        return Err(Error::BadShape("the grid oracle works in dimension 2".into()));
    }
    if frame.len() < 2 {
        return Err(Error::BadShape("need at least two vectors".into()));
    }
    let k = frame.len() - 1;
    let vecs: Vec<[f64; 2]> = frame.vectors().map(|v| [v[0], v[1]]).collect();
    let mut mags = vec![0.0; vecs.len()];
    let mut f = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        for (m, v) in mags.iter_mut().zip(&vecs) {
            *m = (v[0] * c + v[1] * s).abs();
        }
        let (_, kth, _) = mags.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
        *kth
    };
    let h = PI / ORACLE_GRID as f64;
    let values: Vec<f64> = (0..ORACLE_GRID).map(|i| f(i as f64 * h)).collect();
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..ORACLE_GRID {
        let prev = values[(i + ORACLE_GRID - 1) % ORACLE_GRID];
        let next = values[(i + 1) % ORACLE_GRID];
        let v = values[i];
        if v < prev || v < next || v < top - 1e-4 {
            continue;
        }
        let centre = i as f64 * h;
        let (mut a, mut b) = (centre - h, centre + h);
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        let mut local = (v, centre);
        while b - a > 1e-12 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
            for (t, ft) in [(c, fc), (d, fd)] {
                if ft > local.0 {
                    local = (ft, t);
                }
            }
        }
        if local.0 > best.0 {
            best = local;
        }
    }
    Ok(LambdaC::Oracle {
        value: best.0,
        grid: ORACLE_GRID,
        angle: best.1.rem_euclid(PI),
    })
}

/// Monte-Carlo lower bound on the stability constant of `Φ_λΘ` on
/// `radius · B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityEstimate {
    /// Largest observed `‖x−y‖ / ‖Φ_λΘx − Φ_λΘy‖`; `+∞` when a colliding
    /// pair was found.
    pub value: f64,
    pub pairs_evaluated: usize,
    pub pairs_skipped: usize,
    /// A pair with distinct points and (numerically) equal clipped
    /// coefficients.
    pub collision: Option<(Vec<f64>, Vec<f64>)>,
}

/// One pair in this many is a near-collision `y = x + δu`.
const NEAR_PAIR_EVERY: usize = 5;

pub fn stability_estimate(
    frame: &Frame,
    lambda: f64,
    radius: f64,
    pairs: usize,
    rng: &mut Rng,
) -> Result<StabilityEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::BadLambda(lambda));
    }
    if !(radius > 0.0) || pairs == 0 {
        return Err(Error::InvalidArgument(format!(
            "radius {radius} and pairs {pairs} must be positive"
        )));
    }
    let n = frame.dim();
    let clipped = |x: &[f64]| -> Vec<f64> {
        frame
            .analysis_matrix()
            .matvec(x)
            .into_iter()
            .map(|c| c.clamp(-lambda, lambda))
            .collect()
    };
    let mut out = StabilityEstimate {
        value: 0.0,
        pairs_evaluated: 0,
        pairs_skipped: 0,
        collision: None,
    };
    for i in 0..pairs {
        let x = numerics::uniform_in_ball(n, radius, rng);
        let y = if i % NEAR_PAIR_EVERY == NEAR_PAIR_EVERY - 1 {
            let delta = 10f64.powf(rng.uniform_in(-6.0, -2.0));
            let u = near_pair_direction(frame, &x, lambda, rng);
            let mut y = x.clone();
            numerics::axpy(delta, &u, &mut y);
            let r = norm(&y);
            if r > radius {
                y.iter_mut().for_each(|v| *v *= radius / r);
            }
            y
        } else {
            numerics::uniform_in_ball(n, radius, rng)
        };
        let num = numerics::distance(&x, &y);
        let den = numerics::distance(&clipped(&x), &clipped(&y));
        if den < 1e-14 {
            if num < 1e-14 {
                out.pairs_skipped += 1;
                continue;
            }
            out.pairs_evaluated += 1;
            out.value = f64::INFINITY;
            out.collision = Some((x, y));
            break;
        }
        out.pairs_evaluated += 1;
        out.value = out.value.max(num / den);
    }
    Ok(out)
}

/// Half the near pairs move along the kernel of the unsaturated vectors at
/// `x` when that kernel is nontrivial; the rest move in a random direction.
fn near_pair_direction(frame: &Frame, x: &[f64], lambda: f64, rng: &mut Rng) -> Vec<f64> {
    let along_kernel = rng.uniform() < 0.5;
    if along_kernel {
        if let Ok(p) = saturation::pattern(frame, x, lambda) {
            if !frame.spans_with(&p.strictly_unsaturated, saturation::SPAN_TOL) {
                let sub = frame.rows_of(&p.strictly_unsaturated);
                if let Ok(eig) = numerics::sym_eig(&sub.gram_cols()) {
                    return eig.vectors.col(0);
                }
            }
        }
    }
    numerics::normal_unit_vector(frame.dim(), rng)
}
