//! Degree-distribution algebra and rate arithmetic.
//!
//! Distributions are stored edge-perspective with exact rational fractions;
//! floating point only appears when a polynomial is evaluated.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::basecode::ComponentCode;
use crate::error::{Error, Result};
use crate::fraction::{self, format_fraction, parse_fraction, to_f64};

const SUM_TOLERANCE: f64 = 1e-12;

/// Edge-perspective degree distribution: `fraction(i)` is the fraction of
/// edges incident to nodes of degree `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    fractions: BTreeMap<u32, BigRational>,
}

impl DegreeDistribution {
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, BigRational)>,
    {
        let mut fractions = BTreeMap::new();
        for (degree, value) in pairs {
            if degree == 0 {
                return Err(Error::InvalidDistribution("degree 0 is not allowed".into()));
            }
            if value.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative fraction for degree {degree}"
                )));
            }
            if fractions.insert(degree, value).is_some() {
                return Err(Error::InvalidDistribution(format!("degree {degree} listed twice")));
            }
        }
        fractions.retain(|_, v| !v.is_zero());
        let sum: BigRational = fractions.values().cloned().sum();
        if sum.is_zero() {
            return Err(Error::InvalidDistribution("fractions sum to zero".into()));
        }
        if (to_f64(&sum) - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "fractions sum to {} instead of 1",
                to_f64(&sum)
            )));
        }
        Ok(Self { fractions })
    }

    pub fn from_f64<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let converted = pairs
            .into_iter()
            .map(|(d, v)| fraction::from_f64(v).map(|r| (d, r)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(converted)
    }

    /// A distribution with every edge on nodes of a single degree.
    pub fn single(degree: u32) -> Result<Self> {
        Self::new([(degree, BigRational::one())])
    }

    pub fn fraction(&self, degree: u32) -> BigRational {
        self.fractions.get(&degree).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree_one_fraction(&self) -> BigRational {
        self.fraction(1)
    }

    pub fn max_degree(&self) -> u32 {
        self.fractions.keys().next_back().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.fractions.iter().map(|(d, v)| (*d, v))
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.fractions.keys().copied()
    }

    /// `Σ_i λ_i / i`, i.e. the number of nodes per edge.
    pub fn nodes_per_edge(&self) -> BigRational {
        self.fractions
            .iter()
            .map(|(d, v)| v / fraction::int(*d as i64))
            .sum()
    }

    /// Average left degree `1 / Σ_i (λ_i / i)`; equals `m / n` for any instance.
    pub fn average_left_degree(&self) -> BigRational {
        self.nodes_per_edge().recip()
    }

    /// Node-perspective fractions, derived on demand.
    pub fn node_fractions(&self) -> BTreeMap<u32, BigRational> {
        let per_edge = self.nodes_per_edge();
        self.fractions
            .iter()
            .map(|(d, v)| (*d, v / fraction::int(*d as i64) / &per_edge))
            .collect()
    }

    /// `Λ(x) = Σ_i λ_i x^{i-1}`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.fractions
            .iter()
            .map(|(d, v)| to_f64(v) * x.powi(*d as i32 - 1))
            .sum()
    }

    pub fn normalize_over_degree_one(&self) -> Result<NormalizedDistribution> {
        let one = self.degree_one_fraction();
        if one.is_one() {
            return Err(Error::AllDegreeOne);
        }
        let scale = BigRational::one() - &one;
        let fractions = self
            .fractions
            .iter()
            .filter(|(d, _)| **d > 1)
            .map(|(d, v)| (*d, v / &scale))
            .collect();
        Ok(NormalizedDistribution { fractions })
    }

    pub fn to_json(&self) -> Value {
        fractions_to_json(&self.fractions)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        Self::new(fractions_from_json(value)?)
    }
}

/// Average left degree of `d` (free-function form of
/// [`DegreeDistribution::average_left_degree`]).
pub fn average_left_degree(d: &DegreeDistribution) -> BigRational {
    d.average_left_degree()
}

pub fn normalize_over_degree_one(d: &DegreeDistribution) -> Result<NormalizedDistribution> {
    d.normalize_over_degree_one()
}

/// Distribution of the edges of degree > 1, renormalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedDistribution {
    fractions: BTreeMap<u32, BigRational>,
}

impl NormalizedDistribution {
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, BigRational)>,
    {
        let dist = DegreeDistribution::new(pairs)?;
        if dist.fractions.contains_key(&1) {
            return Err(Error::InvalidDistribution(
                "normalized distribution cannot contain degree 1".into(),
            ));
        }
        Ok(Self { fractions: dist.fractions })
    }

    pub fn from_f64<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let dist = DegreeDistribution::from_f64(pairs)?;
        Self::new(dist.fractions)
    }

    pub fn fraction(&self, degree: u32) -> BigRational {
        self.fractions.get(&degree).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.fractions.iter().map(|(d, v)| (*d, v))
    }

    pub fn max_degree(&self) -> u32 {
        self.fractions.keys().next_back().copied().unwrap_or(0)
    }

    /// `Σ_{i>1} λ̃_i / i`.
    pub fn nodes_per_edge(&self) -> BigRational {
        self.fractions
            .iter()
            .map(|(d, v)| v / fraction::int(*d as i64))
            .sum()
    }

    /// `1 / Σ_{i>1} (λ̃_i / i)`.
    pub fn average_degree(&self) -> BigRational {
        self.nodes_per_edge().recip()
    }

    /// `Λ̃(x) = Σ_{i>1} λ̃_i x^{i-1}`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.fractions
            .iter()
            .map(|(d, v)| to_f64(v) * x.powi(*d as i32 - 1))
            .sum()
    }

    /// Rebuilds the full distribution given the degree-one edge fraction.
    pub fn denormalize(&self, degree_one: &BigRational) -> Result<DegreeDistribution> {
        if degree_one.is_negative() || degree_one >= &BigRational::one() {
            return Err(Error::InvalidDistribution(format!(
                "degree-one fraction {} outside [0, 1)",
                to_f64(degree_one)
            )));
        }
        let scale = BigRational::one() - degree_one;
        let mut pairs: Vec<(u32, BigRational)> =
            self.fractions.iter().map(|(d, v)| (*d, v * &scale)).collect();
        if !degree_one.is_zero() {
            pairs.push((1, degree_one.clone()));
        }
        DegreeDistribution::new(pairs)
    }

    pub fn to_json(&self) -> Value {
        fractions_to_json(&self.fractions)
    }
}

/// Family of the base code an ensemble is built on.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseFamily {
    /// Juxtaposition of the 6-bit, rate-1/2 blocks with two degree-one positions each.
    BlockTldpc,
    /// Juxtaposition of single parity checks with edge-perspective degree distribution `rho`.
    Ldpc { rho: DegreeDistribution },
    /// Juxtaposition of copies of a user-supplied component code.
    Custom { component: ComponentCode, degree_one: Vec<usize> },
}

impl BaseFamily {
    /// Rate of the base code `R_b`.
    pub fn base_rate(&self) -> BigRational {
        match self {
            BaseFamily::BlockTldpc => fraction::ratio(1, 2),
            BaseFamily::Ldpc { rho } => BigRational::one() - rho.nodes_per_edge(),
            BaseFamily::Custom { component, .. } => {
                fraction::ratio(component.dimension() as i64, component.length() as i64)
            }
        }
    }

    /// Fraction of base positions marked degree one.
    pub fn degree_one_position_fraction(&self) -> BigRational {
        match self {
            BaseFamily::BlockTldpc => fraction::ratio(1, 3),
            BaseFamily::Ldpc { .. } => BigRational::zero(),
            BaseFamily::Custom { component, degree_one } => {
                fraction::ratio(degree_one.len() as i64, component.length() as i64)
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BaseFamily::BlockTldpc => "block-tldpc",
            BaseFamily::Ldpc { .. } => "ldpc",
            BaseFamily::Custom { .. } => "custom",
        }
    }
}

/// A variable-degree distribution together with the base-code family.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub distribution: DegreeDistribution,
    pub base: BaseFamily,
}

impl EnsembleSpec {
    pub fn new(distribution: DegreeDistribution, base: BaseFamily) -> Self {
        Self { distribution, base }
    }

    pub fn base_rate(&self) -> BigRational {
        self.base.base_rate()
    }

    pub fn normalized(&self) -> Result<NormalizedDistribution> {
        self.distribution.normalize_over_degree_one()
    }

    /// `R = 1 - (1 - R_b) λ̄`.
    pub fn design_rate(&self) -> Result<BigRational> {
        let rate = BigRational::one()
            - (BigRational::one() - self.base_rate()) * self.distribution.average_left_degree();
        if !rate.is_positive() {
            return Err(Error::DegenerateRate(to_f64(&rate)));
        }
        Ok(rate)
    }

    /// Parses the ensemble JSON format.
    ///
    /// ```json
    /// { "lambda": {"1": "1/3", "2": "4/15"},
    ///   "base": {"kind": "ldpc", "rho": {"3": 1}} }
    /// ```
    ///
    /// Instead of `lambda`, a pair `lambda1` + `lambda_tilde` may be given.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("ensemble JSON: {e}")))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("ensemble must be a JSON object".into()))?;
        let distribution = match (obj.get("lambda"), obj.get("lambda_tilde")) {
            (Some(lambda), None) => DegreeDistribution::from_json(lambda)?,
            (None, Some(tilde)) => {
                let normalized = NormalizedDistribution::new(fractions_from_json(tilde)?)?;
                let one = match obj.get("lambda1") {
                    Some(v) => fraction_from_json(v)?,
                    None => BigRational::zero(),
                };
                normalized.denormalize(&one)?
            }
            _ => {
                return Err(Error::Parse(
                    "ensemble needs exactly one of `lambda` or `lambda_tilde`".into(),
                ))
            }
        };
        let base = obj
            .get("base")
            .ok_or_else(|| Error::Parse("ensemble is missing `base`".into()))?;
        let kind = base
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("base is missing `kind`".into()))?;
        let base = match kind {
            "block-tldpc" => BaseFamily::BlockTldpc,
            "ldpc" => {
                let rho = base
                    .get("rho")
                    .ok_or_else(|| Error::Parse("ldpc base is missing `rho`".into()))?;
                BaseFamily::Ldpc { rho: DegreeDistribution::from_json(rho)? }
            }
            "custom" => {
                let component = base
                    .get("component")
                    .ok_or_else(|| Error::Parse("custom base is missing `component`".into()))?;
                let (component, degree_one) = ComponentCode::from_json(component)?;
                BaseFamily::Custom { component, degree_one }
            }
            other => return Err(Error::Parse(format!("unknown base kind {other:?}"))),
        };
        Ok(Self { distribution, base })
    }

    pub fn to_json(&self) -> Value {
        let base = match &self.base {
            BaseFamily::BlockTldpc => json!({ "kind": "block-tldpc" }),
            BaseFamily::Ldpc { rho } => json!({ "kind": "ldpc", "rho": rho.to_json() }),
            BaseFamily::Custom { component, degree_one } => json!({
                "kind": "custom",
                "component": component.to_json(degree_one),
            }),
        };
        json!({ "lambda": self.distribution.to_json(), "base": base })
    }
}

/// Design rate of `spec` (free-function form of [`EnsembleSpec::design_rate`]).
pub fn design_rate(spec: &EnsembleSpec) -> Result<BigRational> {
    spec.design_rate()
}

fn fractions_to_json(fractions: &BTreeMap<u32, BigRational>) -> Value {
    let map: Map<String, Value> = fractions
        .iter()
        .map(|(d, v)| (d.to_string(), Value::String(format_fraction(v))))
        .collect();
    Value::Object(map)
}

fn fraction_from_json(value: &Value) -> Result<BigRational> {
    match value {
        Value::String(s) => parse_fraction(s),
        Value::Number(n) => parse_fraction(&n.to_string()),
        other => Err(Error::Parse(format!("expected a fraction, got {other}"))),
    }
}

fn fractions_from_json(value: &Value) -> Result<Vec<(u32, BigRational)>> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("degree map must be a JSON object".into()))?;
    obj.iter()
        .map(|(k, v)| {
            let degree: u32 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree key {k:?}")))?;
            Ok((degree, fraction_from_json(v)?))
        })
        .collect()
}

/// Integer counts summing to `total`, each within one of its target
/// (largest-remainder apportionment, ties broken by index).
pub fn largest_remainder(targets: &[f64], total: u64) -> Vec<u64> {
    let mut counts: Vec<u64> = targets.iter().map(|t| t.max(0.0).floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    if assigned >= total {
        return counts;
    }
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = targets[a] - targets[a].floor();
        let rb = targets[b] - targets[b].floor();
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &idx in order.iter().cycle().take((total - assigned) as usize) {
        counts[idx] += 1;
    }
    counts
}

/// Node counts close to `targets` (pairs of degree and real-valued count)
/// whose degree-weighted sum is exactly `edges`.
///
/// Counts are first restricted to the floor/ceiling of each target; the window
/// is widened by one node at a time only when no exact solution exists.
/// Among admissible solutions the total absolute deviation is minimized.
pub fn round_to_edge_total(targets: &[(u32, f64)], edges: u64) -> Result<Vec<u64>> {
    const MAX_WIDEN: u64 = 3;
    for widen in 0..=MAX_WIDEN {
        if let Some(counts) = min_deviation_counts(targets, edges, widen) {
            return Ok(counts);
        }
    }
    Err(Error::Construction(format!(
        "no degree counts near the targets realize exactly {edges} edges"
    )))
}

fn min_deviation_counts(targets: &[(u32, f64)], edges: u64, widen: u64) -> Option<Vec<u64>> {
    let total = edges as usize;
    let ranges: Vec<(u64, u64)> = targets
        .iter()
        .map(|&(_, t)| {
            if t <= 0.0 {
                (0, 0)
            } else {
                let lo = (t.floor() as u64).saturating_sub(widen);
                (lo, t.ceil() as u64 + widen)
            }
        })
        .collect();
    // cost[s] after processing a prefix of degrees; choice[layer][s] remembers the count.
    let mut cost = vec![f64::INFINITY; total + 1];
    cost[0] = 0.0;
    let mut choices: Vec<Vec<u64>> = Vec::with_capacity(targets.len());
    for (layer, &(degree, target)) in targets.iter().enumerate() {
        let (lo, hi) = ranges[layer];
        let mut next = vec![f64::INFINITY; total + 1];
        let mut choice = vec![u64::MAX; total + 1];
        for (sum, &base_cost) in cost.iter().enumerate() {
            if !base_cost.is_finite() {
                continue;
            }
            for count in lo..=hi {
                let reached = sum as u64 + count * degree as u64;
                if reached > edges {
                    break;
                }
                let c = base_cost + (count as f64 - target).abs();
                if c < next[reached as usize] - 1e-12 {
                    next[reached as usize] = c;
                    choice[reached as usize] = count;
                }
            }
        }
        cost = next;
        choices.push(choice);
    }
    if !cost[total].is_finite() {
        return None;
    }
    let mut counts = vec![0u64; targets.len()];
    let mut remaining = edges;
    for layer in (0..targets.len()).rev() {
        let count = choices[layer][remaining as usize];
        counts[layer] = count;
        remaining -= count * targets[layer].0 as u64;
    }
    Some(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::{int, ratio};

    fn ldpc_lambda() -> DegreeDistribution {
        DegreeDistribution::from_f64([
            (2, 0.486),
            (3, 0.165),
            (4, 0.037),
            (5, 0.15),
            (11, 0.132),
            (12, 0.03),
        ])
        .unwrap()
    }

    fn ldpc_rho() -> DegreeDistribution {
        DegreeDistribution::new([(2, ratio(1, 10)), (3, ratio(1, 2)), (4, ratio(2, 5))]).unwrap()
    }

    fn tldpc_lambda() -> DegreeDistribution {
        NormalizedDistribution::from_f64([
            (2, 0.4),
            (3, 0.264209),
            (5, 0.090866),
            (9, 0.236716),
            (10, 0.008209),
        ])
        .unwrap()
        .denormalize(&ratio(1, 3))
        .unwrap()
    }

    /// Independent oracle: plain f64 summation of λ_i / i.
    fn oracle_inverse_degree(pairs: &[(u32, f64)]) -> f64 {
        pairs.iter().map(|(d, v)| v / *d as f64).sum()
    }

    #[test]
    fn average_left_degree_single_degree() {
        let d = DegreeDistribution::single(1).unwrap();
        assert_eq!(d.average_left_degree(), int(1));
        let d = DegreeDistribution::single(3).unwrap();
        assert_eq!(average_left_degree(&d), int(3));
    }

    #[test]
    fn average_left_degree_ldpc_example() {
        let pairs = [(2, 0.486), (3, 0.165), (4, 0.037), (5, 0.15), (11, 0.132), (12, 0.03)];
        let s = oracle_inverse_degree(&pairs);
        assert!((s - 0.35175).abs() < 5e-6, "{s}");
        let lbar = to_f64(&ldpc_lambda().average_left_degree());
        assert!((lbar - 1.0 / s).abs() < 1e-12);
        assert!((lbar - 2.8429).abs() < 1e-4);
    }

    #[test]
    fn average_left_degree_tldpc_example() {
        let tilde = [(2, 0.4), (3, 0.264209), (5, 0.090866), (9, 0.236716), (10, 0.008209)];
        let s_tilde = oracle_inverse_degree(&tilde);
        assert!((s_tilde - 0.33337).abs() < 1e-5);
        let expected = 1.0 / (1.0 / 3.0 + 2.0 / 3.0 * s_tilde);
        let lbar = to_f64(&tldpc_lambda().average_left_degree());
        assert!((lbar - expected).abs() < 1e-12);
        assert!((lbar - 1.7999).abs() < 1e-4);
    }

    #[test]
    fn rejects_invalid_distributions() {
        assert!(DegreeDistribution::new([(0, int(1))]).is_err());
        assert!(DegreeDistribution::new([(2, ratio(1, 2))]).is_err());
        assert!(DegreeDistribution::new([(2, ratio(3, 2)), (3, ratio(-1, 2))]).is_err());
        assert!(DegreeDistribution::new(Vec::<(u32, BigRational)>::new()).is_err());
    }

    #[test]
    fn design_rate_identity_graph() {
        let spec = EnsembleSpec::new(DegreeDistribution::single(1).unwrap(), BaseFamily::BlockTldpc);
        assert_eq!(spec.design_rate().unwrap(), ratio(1, 2));
    }

    #[test]
    fn design_rate_tldpc() {
        let spec = EnsembleSpec::new(tldpc_lambda(), BaseFamily::BlockTldpc);
        let r = to_f64(&design_rate(&spec).unwrap());
        assert!((r - 0.1000).abs() < 1e-4, "{r}");
    }

    #[test]
    fn design_rate_ldpc() {
        let spec = EnsembleSpec::new(ldpc_lambda(), BaseFamily::Ldpc { rho: ldpc_rho() });
        let rb = to_f64(&spec.base_rate());
        assert!((rb - 0.683333333).abs() < 1e-8);
        let r = to_f64(&spec.design_rate().unwrap());
        assert!((r - 0.0997).abs() < 1e-4, "{r}");
    }

    #[test]
    fn design_rate_degenerate() {
        let spec = EnsembleSpec::new(
            DegreeDistribution::single(3).unwrap(),
            BaseFamily::Ldpc { rho: DegreeDistribution::single(3).unwrap() },
        );
        assert!(matches!(spec.design_rate(), Err(Error::DegenerateRate(_))));
    }

    #[test]
    fn normalize_identity_without_degree_one() {
        let d = ldpc_lambda();
        let n = d.normalize_over_degree_one().unwrap();
        for (deg, v) in d.iter() {
            assert_eq!(&n.fraction(deg), v);
        }
    }

    #[test]
    fn normalize_degree_two() {
        let d = DegreeDistribution::new([(1, ratio(1, 3)), (2, ratio(4, 15)), (3, ratio(2, 5))])
            .unwrap();
        let n = normalize_over_degree_one(&d).unwrap();
        assert_eq!(n.fraction(2), ratio(2, 5));
        assert_eq!(n.fraction(1), int(0));
        assert_eq!(tldpc_lambda().normalize_over_degree_one().unwrap().fraction(2), ratio(2, 5));
    }

    #[test]
    fn normalize_all_degree_one() {
        let d = DegreeDistribution::single(1).unwrap();
        assert_eq!(d.normalize_over_degree_one(), Err(Error::AllDegreeOne));
    }

    #[test]
    fn json_round_trip() {
        let spec = EnsembleSpec::new(tldpc_lambda(), BaseFamily::BlockTldpc);
        let text = spec.to_json().to_string();
        assert_eq!(EnsembleSpec::from_json_str(&text).unwrap(), spec);

        let text = r#"{"lambda": {"2": 0.5, "3": "1/2"}, "base": {"kind": "ldpc", "rho": {"6": 1}}}"#;
        let spec = EnsembleSpec::from_json_str(text).unwrap();
        assert_eq!(spec.distribution.fraction(2), ratio(1, 2));
        assert_eq!(spec.base_rate(), ratio(5, 6));

        let text = r#"{"lambda1": "1/3", "lambda_tilde": {"2": 1}, "base": {"kind": "block-tldpc"}}"#;
        let spec = EnsembleSpec::from_json_str(text).unwrap();
        assert_eq!(spec.distribution.fraction(2), ratio(2, 3));
        assert!(EnsembleSpec::from_json_str(r#"{"lambda": {"0": 1}, "base": {"kind": "ldpc"}}"#)
            .is_err());
    }

    #[test]
    fn largest_remainder_hits_total() {
        assert_eq!(largest_remainder(&[1.5, 5.0, 3.5], 10), vec![2, 5, 3]);
        assert_eq!(largest_remainder(&[0.2, 0.2, 0.6], 1), vec![0, 0, 1]);
    }

    #[test]
    fn edge_total_rounding_is_exact() {
        // Degrees ≥ 3 of the rate-1/10 ensemble with 625 clusters.
        let tilde = [(3u32, 0.264209), (5, 0.090866), (9, 0.236716), (10, 0.008209)];
        let targets: Vec<(u32, f64)> =
            tilde.iter().map(|&(d, v)| (d, v * 2500.0 / d as f64)).collect();
        let counts = round_to_edge_total(&targets, 1500).unwrap();
        let edges: u64 = counts.iter().zip(&targets).map(|(c, (d, _))| c * *d as u64).sum();
        assert_eq!(edges, 1500);
        for (c, (_, t)) in counts.iter().zip(&targets) {
            assert!((*c as f64 - t).abs() < 1.0);
        }
        // 30 check edges over degrees 2, 3, 4 with ρ = (0.1, 0.5, 0.4).
        let counts = round_to_edge_total(&[(2, 1.5), (3, 5.0), (4, 3.0)], 30).unwrap();
        assert_eq!(counts[0] * 2 + counts[1] * 3 + counts[2] * 4, 30);
    }

    proptest::proptest! {
        #[test]
        fn normalize_round_trip(weights in proptest::collection::vec(1u32..50, 1..6), one in 0u32..40) {
            let total: u32 = weights.iter().sum::<u32>() + one;
            let mut pairs: Vec<(u32, BigRational)> = weights
                .iter()
                .enumerate()
                .map(|(i, w)| (i as u32 + 2, ratio(*w as i64, total as i64)))
                .collect();
            if one > 0 {
                pairs.push((1, ratio(one as i64, total as i64)));
            }
            let d = DegreeDistribution::new(pairs).unwrap();
            let n = d.normalize_over_degree_one().unwrap();
            let back = n.denormalize(&d.degree_one_fraction()).unwrap();
            proptest::prop_assert_eq!(back, d);
        }

        #[test]
        fn average_degree_order_invariant(weights in proptest::collection::vec(1u32..50, 2..7)) {
            let total: u32 = weights.iter().sum();
            let pairs: Vec<(u32, BigRational)> = weights
                .iter()
                .enumerate()
                .map(|(i, w)| (i as u32 + 1, ratio(*w as i64, total as i64)))
                .collect();
            let mut reversed = pairs.clone();
            reversed.reverse();
            let a = DegreeDistribution::new(pairs).unwrap().average_left_degree();
            let b = DegreeDistribution::new(reversed).unwrap().average_left_degree();
            proptest::prop_assert_eq!(a, b);
        }
    }
}
