//! EXIT curves on the erasure channel, the area theorem, density-evolution
//! thresholds and a linear-programming degree optimizer.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use crate::basecode::{custom_base, make_block_tldpc_base, BaseCodeSpec, BaseTransfer};
use crate::ensemble::{BaseFamily, DegreeDistribution, EnsembleSpec, NormalizedDistribution};
use crate::error::{Error, Result};
use crate::fraction::{ratio, to_f64};

/// Grid size used for base curves and LP constraints.
pub const BASE_GRID: usize = 512;
/// DE stops successfully once the erasure fraction drops below this.
pub const DE_TOLERANCE: f64 = 1e-10;
pub const DE_MAX_ITERATIONS: usize = 100_000;
/// Bisection resolution of [`bec_threshold`].
pub const THRESHOLD_RESOLUTION: f64 = 1e-4;
const LP_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveRole {
    VariableNodes,
    BaseCode,
}

/// Sampled transfer curve. Points are `(horizontal, vertical)`: for the
/// variable nodes `(p Λ̃(x), x)`, for the base code `(x, f(x; p))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitCurve {
    pub role: CurveRole,
    pub p: f64,
    pub points: Vec<(f64, f64)>,
}

impl ExitCurve {
    /// Area between the curve and the lower-right corner of the unit square:
    /// `1 - ∫ h dv` for variable nodes, `∫ v dh` for the base code.
    pub fn area(&self) -> f64 {
        match self.role {
            CurveRole::VariableNodes => {
                let h: Vec<f64> = self.points.iter().map(|p| p.0).collect();
                1.0 - simpson(&h, 1.0 / (h.len() - 1) as f64)
            }
            CurveRole::BaseCode => {
                let v: Vec<f64> = self.points.iter().map(|p| p.1).collect();
                simpson(&v, 1.0 / (v.len() - 1) as f64)
            }
        }
    }
}

fn grid(samples: usize) -> impl Iterator<Item = f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(move |i| i as f64 / last)
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("channel erasure probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Points `(p Λ̃(x), x)` on a uniform grid of `x`.
pub fn variable_curve(nd: &NormalizedDistribution, p: f64, samples: usize) -> Result<ExitCurve> {
    check_samples(samples)?;
    check_probability(p)?;
    let points = grid(samples).map(|x| (p * nd.evaluate(x), x)).collect();
    Ok(ExitCurve { role: CurveRole::VariableNodes, p, points })
}

/// Base-code curve: erasure `x` on degree->1 positions, `p` on degree-one
/// positions, mean extrinsic erasure over degree->1 positions.
pub fn base_curve(spec: &BaseCodeSpec, p: f64, samples: usize) -> Result<ExitCurve> {
    base_curve_from(&BaseTransfer::from_base(spec)?, p, samples)
}

pub fn base_curve_from(transfer: &BaseTransfer, p: f64, samples: usize) -> Result<ExitCurve> {
    check_samples(samples)?;
    check_probability(p)?;
    let points = grid(samples).map(|x| (x, transfer.evaluate(x, p))).collect();
    Ok(ExitCurve { role: CurveRole::BaseCode, p, points })
}

/// Exact base transfer of the ensemble's base family.
pub fn base_transfer(spec: &EnsembleSpec) -> Result<BaseTransfer> {
    match &spec.base {
        BaseFamily::BlockTldpc => BaseTransfer::from_base(&make_block_tldpc_base(1)?),
        BaseFamily::Ldpc { rho } => BaseTransfer::from_check_distribution(rho),
        BaseFamily::Custom { component, degree_one } => {
            BaseTransfer::from_base(&custom_base(component.clone(), degree_one, 1)?)
        }
    }
}

/// Composite Simpson rule on uniformly spaced samples; an odd number of
/// intervals closes with the 3/8 rule.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        2 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        3 => 3.0 * h / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3]),
        _ => {
            let even = if n % 2 == 0 { n } else { n - 3 };
            let mut s = values[0] + values[even];
            for (i, v) in values.iter().enumerate().take(even).skip(1) {
                s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = h / 3.0 * s;
            if even < n {
                total += simpson(&values[even..], h);
            }
            total
        }
    }
}

/// `1 - p (1/λ̄ - λ₁) / (1 - λ₁)`.
pub fn area_variable_closed(d: &DegreeDistribution, p: f64) -> Result<f64> {
    let tilde = d.normalize_over_degree_one()?;
    Ok(1.0 - p * to_f64(&tilde.nodes_per_edge()))
}

/// `(R_b - (1 - p) λ₁) / (1 - λ₁)`.
pub fn area_base_closed(base_rate: f64, lambda_1: f64, p: f64) -> f64 {
    (base_rate - (1.0 - p) * lambda_1) / (1.0 - lambda_1)
}

/// `(C - R) / (λ̄ (1 - λ₁))`.
pub fn delta_area(capacity: f64, rate: f64, lambda_bar: f64, lambda_1: f64) -> f64 {
    (capacity - rate) / (lambda_bar * (1.0 - lambda_1))
}

/// Areas swept when the channel parameter moves by `Δp`: the base curve
/// shift `λ₁/(1-λ₁) Δp` and the variable curve shift `Δp / λ̃̄`.
pub fn curve_shift_areas(lambda_1: f64, tilde_lambda_bar: f64, delta_p: f64) -> (f64, f64) {
    (lambda_1 / (1.0 - lambda_1) * delta_p, delta_p / tilde_lambda_bar)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AreaReport {
    pub p: f64,
    pub rate: f64,
    pub lambda_bar: f64,
    pub lambda_1: f64,
    pub area_variable: f64,
    pub area_base: f64,
    /// Numerically integrated `area_variable - area_base`.
    pub delta_area: f64,
    pub closed_form_delta: f64,
}

/// Integrates both curves and compares with the area theorem.
pub fn area_report(spec: &EnsembleSpec, p: f64, samples: usize) -> Result<AreaReport> {
    let tilde = spec.normalized()?;
    let transfer = base_transfer(spec)?;
    let area_variable = variable_curve(&tilde, p, samples)?.area();
    let area_base = base_curve_from(&transfer, p, samples)?.area();
    let rate = to_f64(&spec.design_rate()?);
    let lambda_bar = to_f64(&spec.distribution.average_left_degree());
    let lambda_1 = to_f64(&spec.distribution.degree_one_fraction());
    Ok(AreaReport {
        p,
        rate,
        lambda_bar,
        lambda_1,
        area_variable,
        area_base,
        delta_area: area_variable - area_base,
        closed_form_delta: delta_area(1.0 - p, rate, lambda_bar, lambda_1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeOutcome {
    pub converged: bool,
    pub iterations: usize,
    pub final_erasure: f64,
}

/// Runs `x ← p Λ̃(f(x; p))` from `x = 1`.
pub fn density_evolution(transfer: &BaseTransfer, tilde: &NormalizedDistribution, p: f64) -> DeOutcome {
    let coeffs: Vec<(i32, f64)> = tilde.iter().map(|(d, f)| (d as i32 - 1, to_f64(f))).collect();
    let lambda = |y: f64| coeffs.iter().map(|&(e, c)| c * y.powi(e)).sum::<f64>();
    let mut x = 1.0;
    for it in 1..=DE_MAX_ITERATIONS {
        let next = p * lambda(transfer.evaluate(x, p));
        if next < DE_TOLERANCE {
            return DeOutcome { converged: true, iterations: it, final_erasure: next };
        }
        if next >= x {
            return DeOutcome { converged: false, iterations: it, final_erasure: next };
        }
        x = next;
    }
    DeOutcome { converged: false, iterations: DE_MAX_ITERATIONS, final_erasure: x }
}

/// Largest channel erasure probability for which DE converges, to within
/// [`THRESHOLD_RESOLUTION`].
pub fn bec_threshold(spec: &EnsembleSpec) -> Result<f64> {
    Ok(threshold_for(&base_transfer(spec)?, &spec.normalized()?))
}

pub fn threshold_for(transfer: &BaseTransfer, tilde: &NormalizedDistribution) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if density_evolution(transfer, tilde, hi).converged {
        return hi;
    }
    while hi - lo > THRESHOLD_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if density_evolution(transfer, tilde, mid).converged {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Degree distribution of maximal rate whose variable curve clears the
/// base curve at `p_target` with a small margin on a uniform grid.
pub fn optimize_degrees(
    base: &BaseCodeSpec,
    p_target: f64,
    max_degree: u32,
    tilde_lambda_2_cap: f64,
) -> Result<NormalizedDistribution> {
    optimize_degrees_with(&BaseTransfer::from_base(base)?, p_target, max_degree, tilde_lambda_2_cap)
}

pub fn optimize_degrees_with(
    transfer: &BaseTransfer,
    p_target: f64,
    max_degree: u32,
    tilde_lambda_2_cap: f64,
) -> Result<NormalizedDistribution> {
    check_probability(p_target)?;
    if max_degree < 2 {
        return Err(Error::InvalidParameter("maximum degree must be at least 2".into()));
    }
    let degrees: Vec<u32> = (2..=max_degree).collect();
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = degrees
        .iter()
        .map(|&d| {
            let upper = if d == 2 { tilde_lambda_2_cap.clamp(0.0, 1.0) } else { 1.0 };
            problem.add_var(1.0 / d as f64, (0.0, upper))
        })
        .collect();
    problem.add_constraint(vars.iter().map(|&v| (v, 1.0)), ComparisonOp::Eq, 1.0);
    for x in grid(BASE_GRID).skip(1) {
        let y = transfer.evaluate(x, p_target);
        let row: Vec<_> = vars
            .iter()
            .zip(&degrees)
            .map(|(&v, &d)| (v, p_target * y.powi(d as i32 - 1)))
            .collect();
        problem.add_constraint(row, ComparisonOp::Le, x - LP_MARGIN);
    }
    let solution = problem.solve().map_err(|e| {
        Error::Infeasible(format!("no degree distribution clears the base curve at p = {p_target}: {e}"))
    })?;
    let values: Vec<f64> = vars.iter().map(|&v| solution[v].max(0.0)).collect();
    let tilde = quantize(&degrees, &values)?;
    let threshold = threshold_for(transfer, &tilde);
    if threshold < p_target - 1e-3 {
        return Err(Error::Infeasible(format!(
            "optimized distribution reaches only threshold {threshold:.4} < {p_target}"
        )));
    }
    Ok(tilde)
}

/// Rounds LP output to exact multiples of 1e-9 summing to one.
fn quantize(degrees: &[u32], values: &[f64]) -> Result<NormalizedDistribution> {
    const SCALE: i64 = 1_000_000_000;
    let mut units: Vec<i64> = values.iter().map(|v| (v * SCALE as f64).round() as i64).collect();
    let gap = SCALE - units.iter().sum::<i64>();
    let largest = (0..units.len()).max_by_key(|&i| units[i]).unwrap_or(0);
    units[largest] += gap;
    let pairs: Vec<_> = degrees
        .iter()
        .zip(&units)
        .filter(|(_, &u)| u > 0)
        .map(|(&d, &u)| (d, ratio(u, SCALE)))
        .collect();
    NormalizedDistribution::new(pairs)
}
