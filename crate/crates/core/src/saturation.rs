//! The clipping nonlinearity, the index sets it induces, and predicates
//! deciding whether clipped coefficients still determine a vector.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::numerics::{self, dot, norm, Rng};
use crate::recovery::{self, StepSchedule};

/// Rank tolerance used for every span test on sub-collections.
pub const SPAN_TOL: f64 = 1e-10;

/// Absolute tolerance on the equality `⟨x, x₂⟩ = λ` in [`badfa_conditions`].
pub const BOUNDARY_EQ_TOL: f64 = 1e-9;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::BadLambda(lambda))
    }
}

/// `φ_λ(t)`: clamp `t` to `[-λ, λ]`.
pub fn phi(t: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(t.clamp(-lambda, lambda))
}

/// Entrywise `φ_λ`.
pub fn saturate(c: &[f64], lambda: f64) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    Ok(c.iter().map(|t| t.clamp(-lambda, lambda)).collect())
}

/// Partition of the frame indices induced by a point `x`.
///
/// `|⟨x,x_j⟩| = λ` counts as unsaturated; the strict set excludes it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaturationPattern {
    pub lambda: f64,
    pub unsaturated: Vec<usize>,
    pub strictly_unsaturated: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

impl SaturationPattern {
    /// Classify raw (unclipped) coefficients.
    pub fn from_coefficients(c: &[f64], lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        let mut p = SaturationPattern {
            lambda,
            unsaturated: Vec::new(),
            strictly_unsaturated: Vec::new(),
            positive: Vec::new(),
            negative: Vec::new(),
        };
        for (j, &t) in c.iter().enumerate() {
            if t > lambda {
                p.positive.push(j);
            } else if t < -lambda {
                p.negative.push(j);
            } else {
                p.unsaturated.push(j);
                if t.abs() < lambda {
                    p.strictly_unsaturated.push(j);
                }
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.unsaturated.len() + self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Saturated indices that an iterate `y` has not yet pushed past the clip
/// level: `J⁺(x,y)` and `J⁻(x,y)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RelativeSaturation {
    pub pos_active: Vec<usize>,
    pub neg_active: Vec<usize>,
}

impl RelativeSaturation {
    pub fn is_empty(&self) -> bool {
        self.pos_active.is_empty() && self.neg_active.is_empty()
    }

    pub(crate) fn from_sets(
        positive: &[usize],
        negative: &[usize],
        y_coeffs: &[f64],
        lambda: f64,
    ) -> Self {
        RelativeSaturation {
            pos_active: positive
                .iter()
                .copied()
                .filter(|&j| y_coeffs[j] < lambda)
                .collect(),
            neg_active: negative
                .iter()
                .copied()
                .filter(|&j| y_coeffs[j] > -lambda)
                .collect(),
        }
    }
}

pub fn pattern(frame: &Frame, x: &[f64], lambda: f64) -> Result<SaturationPattern> {
    SaturationPattern::from_coefficients(&frame.analysis(x)?, lambda)
}

pub fn relative_pattern(
    frame: &Frame,
    x: &[f64],
    y: &[f64],
    lambda: f64,
) -> Result<RelativeSaturation> {
    let p = pattern(frame, x, lambda)?;
    let cy = frame.analysis(y)?;
    Ok(RelativeSaturation::from_sets(&p.positive, &p.negative, &cy, lambda))
}

/// Whether the unsaturated vectors at `x` (strictly unsaturated when
/// `strict`) span ℝⁿ.
pub fn recovers_at(frame: &Frame, x: &[f64], lambda: f64, strict: bool) -> Result<bool> {
    let p = pattern(frame, x, lambda)?;
    let idx = if strict {
        &p.strictly_unsaturated
    } else {
        &p.unsaturated
    };
    Ok(frame.spans_with(idx, SPAN_TOL))
}

/// Verdict of [`recovers_on_ball`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BallVerdict {
    /// Decided over every point of the ball.
    Exact {
        holds: bool,
        counterexample: Option<Vec<f64>>,
    },
    /// Checked on sampled points only. A counterexample is definitive; a
    /// pass is not.
    Sampled {
        holds_on_samples: bool,
        samples: usize,
        counterexample: Option<Vec<f64>>,
    },
}

impl BallVerdict {
    pub fn holds(&self) -> bool {
        match self {
            BallVerdict::Exact { holds, .. } => *holds,
            BallVerdict::Sampled {
                holds_on_samples, ..
            } => *holds_on_samples,
        }
    }

    pub fn counterexample(&self) -> Option<&[f64]> {
        match self {
            BallVerdict::Exact { counterexample, .. }
            | BallVerdict::Sampled { counterexample, .. } => counterexample.as_deref(),
        }
    }
}

/// Does `Φ_λΘ` determine every vector of `radius · B`?
///
/// Shrinking a point only shrinks its saturated set, so only the sphere
/// of the given radius matters. In ℝ² the sphere is a circle and the
/// unsaturated set is constant between the finitely many angles where some
/// `|⟨x, x_j⟩| = λ`; checking one point per arc is then exact. Other
/// dimensions are sampled.
pub fn recovers_on_ball(
    frame: &Frame,
    lambda: f64,
    radius: f64,
    samples: usize,
    rng: &mut Rng,
) -> Result<BallVerdict> {
    check_lambda(lambda)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("ball radius {radius}")));
    }
    let max_norm = frame.vectors().map(norm).fold(0.0, f64::max);
    if lambda >= radius * max_norm {
        // No coefficient of a point in the ball can exceed λ.
        return Ok(BallVerdict::Exact {
            holds: frame.spans(),
            counterexample: if frame.spans() {
                None
            } else {
                Some(vec![0.0; frame.dim()])
            },
        });
    }
    if frame.dim() == 2 {
        return Ok(recovers_on_circle(frame, lambda, radius));
    }

    let n = frame.dim();
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    // Structured candidates: frame directions and pairwise bisectors.
    for i in 0..frame.len() {
        let xi = frame.vector(i);
        candidates.push(xi.to_vec());
        for j in (i + 1)..frame.len() {
            let xj = frame.vector(j);
            candidates.push(xi.iter().zip(xj).map(|(a, b)| a + b).collect());
            candidates.push(xi.iter().zip(xj).map(|(a, b)| a - b).collect());
        }
    }
    let mut checked = 0;
    for cand in candidates
        .into_iter()
        .chain((0..samples).map(|_| numerics::normal_unit_vector(n, rng)))
    {
        let r = norm(&cand);
        if r == 0.0 {
            continue;
        }
        let x: Vec<f64> = cand.iter().map(|v| v * radius / r).collect();
        checked += 1;
        if !recovers_at(frame, &x, lambda, false)? {
            return Ok(BallVerdict::Sampled {
                holds_on_samples: false,
                samples: checked,
                counterexample: Some(x),
            });
        }
    }
    Ok(BallVerdict::Sampled {
        holds_on_samples: true,
        samples: checked,
        counterexample: None,
    })
}

/// Critical angles `φ` on the circle of the given radius where
/// `radius · |⟨u(φ), x_j⟩| = λ`, one rank test per arc between them.
fn recovers_on_circle(frame: &Frame, lambda: f64, radius: f64) -> BallVerdict {
    use std::f64::consts::TAU;
    let mut cuts = Vec::new();
    for v in frame.vectors() {
        let r = norm(v);
        if r == 0.0 {
            continue;
        }
        let ratio = lambda / (radius * r);
        if ratio >= 1.0 {
            continue;
        }
        let theta = v[1].atan2(v[0]);
        for target in [ratio, -ratio] {
            let w = target.acos();
            cuts.push((theta + w).rem_euclid(TAU));
            cuts.push((theta - w).rem_euclid(TAU));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    let mut probes = Vec::with_capacity(cuts.len().max(1));
    if cuts.is_empty() {
        probes.push(0.0);
    }
    for (i, &a) in cuts.iter().enumerate() {
        let b = if i + 1 < cuts.len() {
            cuts[i + 1]
        } else {
            cuts[0] + TAU
        };
        if b - a <= 1e-12 && cuts.len() > 1 {
            log::debug!("arc of length {:e} at angle {a} skipped as a tie", b - a);
            continue;
        }
        probes.push(0.5 * (a + b));
    }
    for phi in probes {
        let x = [radius * phi.cos(), radius * phi.sin()];
        // Shape is fixed at 2, so the only possible error is unreachable.
        if !recovers_at(frame, &x, lambda, false).unwrap_or(false) {
            return BallVerdict::Exact {
                holds: false,
                counterexample: Some(x.to_vec()),
            };
        }
    }
    BallVerdict::Exact {
        holds: true,
        counterexample: None,
    }
}

/// Conditions under which the saturated iteration with unit steps on a
/// Parseval frame overshoots: `‖y₂‖ > ‖x‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OvershootReport {
    /// `⟨x,x₁⟩ > λ`
    pub a: bool,
    /// `⟨x,x₂⟩ = λ` within [`BOUNDARY_EQ_TOL`]
    pub b: bool,
    /// `|⟨x,x_j⟩| + |⟨x,x₁⟩−λ|·|⟨x₁,x_j⟩| ≤ λ` for every `j > 2`
    pub c: bool,
    /// `⟨x,x₁⟩‖x₁‖² < −⟨x₁,x₂⟩λ`
    pub d: bool,
    pub x_norm: f64,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub y1_norm: f64,
    pub y2_norm: f64,
}

impl OvershootReport {
    pub fn all_hold(&self) -> bool {
        self.a && self.b && self.c && self.d
    }

    /// Names of the conditions that hold, e.g. `['a', 'b', 'd']`.
    pub fn holding(&self) -> Vec<char> {
        [('a', self.a), ('b', self.b), ('c', self.c), ('d', self.d)]
            .into_iter()
            .filter_map(|(k, v)| v.then_some(k))
            .collect()
    }

    pub fn overshoots(&self) -> bool {
        self.y2_norm > self.x_norm
    }
}

/// Evaluate the four overshoot conditions on the first two frame vectors
/// and run two unit steps of the saturated iteration.
pub fn badfa_conditions(frame: &Frame, x: &[f64], lambda: f64) -> Result<OvershootReport> {
    check_lambda(lambda)?;
    frame.check_parseval(1e-8)?;
    if frame.len() < 2 {
        return Err(Error::BadShape("need at least two frame vectors".into()));
    }
    let c = frame.analysis(x)?;
    let g = frame.gram();
    let excess = c[0] - lambda;
    let a = c[0] > lambda;
    let b = (c[1] - lambda).abs() <= BOUNDARY_EQ_TOL;
    let cond_c = (2..frame.len()).all(|j| c[j].abs() + excess.abs() * g[(0, j)].abs() <= lambda);
    let d = c[0] * g[(0, 0)] < -g[(0, 1)] * lambda;

    let sat = saturate(&c, lambda)?;
    let trace = recovery::saturated_frame_algorithm(
        frame,
        &sat,
        lambda,
        &StepSchedule::constant(1.0, 1.0),
        2,
        None,
    )?;
    let y1 = trace.iterates[1].clone();
    let y2 = trace.iterates[2].clone();
    Ok(OvershootReport {
        a,
        b,
        c: cond_c,
        d,
        x_norm: norm(x),
        y1_norm: norm(&y1),
        y2_norm: norm(&y2),
        y1,
        y2,
    })
}

/// The closed-form second iterate when all four conditions hold:
/// `y₂ = x − (⟨x,x₁⟩−λ)(‖x₁‖² x₁ + ⟨x₁,x₂⟩ x₂)`.
pub fn overshoot_closed_form(frame: &Frame, x: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let c0 = dot(x, frame.vector(0));
    let g = frame.gram();
    let excess = c0 - lambda;
    let mut y2 = x.to_vec();
    numerics::axpy(-excess * g[(0, 0)], frame.vector(0), &mut y2);
    numerics::axpy(-excess * g[(0, 1)], frame.vector(1), &mut y2);
    Ok(y2)
}
