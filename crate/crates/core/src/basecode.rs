//! Base codes built as juxtapositions of small component codes.
//!
//! Every component carries its full codeword table, so membership, MAP
//! extrinsics and erasure recoverability are computed by exact enumeration.
//! Single parity checks additionally have closed-form fast paths.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::ensemble::{largest_remainder, round_to_edge_total, DegreeDistribution};
use crate::error::{Error, Result};
use crate::fraction::to_f64;
use crate::gf2;

/// Longest component supported.
pub const MAX_COMPONENT_LENGTH: usize = 24;
/// Largest component dimension for which a codeword table is built.
pub const MAX_COMPONENT_DIMENSION: usize = 20;
/// Saturation applied to finite LLRs before exponentiation.
pub const DEFAULT_LLR_CLIP: f64 = 38.0;

/// A short binary linear code given by a generator basis.
#[derive(Debug, Clone)]
pub struct ComponentCode {
    length: usize,
    generators: Vec<u32>,
    codewords: Vec<u32>,
    checks: Vec<u32>,
    single_parity: bool,
}

impl PartialEq for ComponentCode {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.codewords == other.codewords
    }
}

impl ComponentCode {
    /// Builds a component from generator masks (bit `i` = position `i`).
    pub fn new(length: usize, generators: Vec<u32>) -> Result<Self> {
        if length == 0 || length > MAX_COMPONENT_LENGTH {
            return Err(Error::InvalidComponent(format!(
                "length {length} outside 1..={MAX_COMPONENT_LENGTH}"
            )));
        }
        let full = full_mask(length);
        if generators.iter().any(|&g| g == 0 || g & !full != 0) {
            return Err(Error::InvalidComponent("generator is zero or too long".into()));
        }
        if gf2::rank_u32(&generators) != generators.len() {
            return Err(Error::InvalidComponent("generators are linearly dependent".into()));
        }
        if generators.len() > MAX_COMPONENT_DIMENSION {
            return Err(Error::EnumerationBudget(format!(
                "component dimension {} exceeds {MAX_COMPONENT_DIMENSION}",
                generators.len()
            )));
        }
        let mut codewords = Vec::with_capacity(1 << generators.len());
        let mut current = 0u32;
        codewords.push(0);
        for step in 1u32..(1u32 << generators.len()) {
            current ^= generators[step.trailing_zeros() as usize];
            codewords.push(current);
        }
        codewords.sort_unstable_by_key(|&c| lexicographic_key(c, length));
        let checks = gf2::null_space_u32(&generators, length);
        let single_parity = checks.len() == 1 && checks[0] == full && length >= 2;
        Ok(Self { length, generators, codewords, checks, single_parity })
    }

    /// Single parity check on `degree` positions (even-weight words).
    pub fn parity_check(degree: usize) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidComponent("parity check needs degree >= 2".into()));
        }
        let generators = (1..degree).map(|i| 1u32 | 1 << i).collect();
        Self::new(degree, generators)
    }

    /// The 6-bit, dimension-3 block generated by `111000`, `100101`, `101011`.
    pub fn tldpc_block() -> Self {
        Self::from_strings(&["111000", "100101", "101011"]).expect("valid block generators")
    }

    /// Builds a component from generator strings such as `"111000"` (first character = position 0).
    pub fn from_strings(rows: &[&str]) -> Result<Self> {
        let length = rows.first().map_or(0, |r| r.len());
        let mut gens = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != length {
                return Err(Error::InvalidComponent("generators differ in length".into()));
            }
            gens.push(parse_word(row)?);
        }
        Self::new(length, gens)
    }

    /// Parses the component-code JSON format, returning the code and its degree-one positions.
    pub fn from_json(value: &Value) -> Result<(Self, Vec<usize>)> {
        let length = value
            .get("length")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("component is missing `length`".into()))?
            as usize;
        let rows = value
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("component is missing `generators`".into()))?;
        let rows: Vec<&str> = rows
            .iter()
            .map(|r| r.as_str().ok_or_else(|| Error::Parse("generator must be a string".into())))
            .collect::<Result<_>>()?;
        let code = Self::from_strings(&rows)?;
        if code.length != length {
            return Err(Error::Parse(format!(
                "declared length {length} differs from generator length {}",
                code.length
            )));
        }
        let degree_one: Vec<usize> = match value.get("degree_one") {
            None => Vec::new(),
            Some(v) => v
                .as_array()
                .ok_or_else(|| Error::Parse("`degree_one` must be an array".into()))?
                .iter()
                .map(|p| {
                    p.as_u64()
                        .map(|p| p as usize)
                        .filter(|&p| p < length)
                        .ok_or_else(|| Error::Parse("bad degree-one position".into()))
                })
                .collect::<Result<_>>()?,
        };
        Ok((code, degree_one))
    }

    pub fn to_json(&self, degree_one: &[usize]) -> Value {
        json!({
            "length": self.length,
            "generators": self.generators.iter().map(|&g| word_string(g, self.length)).collect::<Vec<_>>(),
            "degree_one": degree_one,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// All codewords in lexicographic order of their position vectors.
    pub fn codewords(&self) -> &[u32] {
        &self.codewords
    }

    /// Dual basis (parity checks).
    pub fn checks(&self) -> &[u32] {
        &self.checks
    }

    pub fn is_single_parity(&self) -> bool {
        self.single_parity
    }

    pub fn contains(&self, word: u32) -> bool {
        word & !full_mask(self.length) == 0 && self.checks.iter().all(|&h| (h & word).count_ones() % 2 == 0)
    }

    /// True if the projection of the code onto `positions` is surjective, i.e.
    /// those positions can be completed to an information set.
    pub fn extends_to_information_set(&self, positions: &[usize]) -> bool {
        let mask = positions.iter().fold(0u32, |m, &p| m | 1 << p);
        let projected: Vec<u32> = self.generators.iter().map(|g| g & mask).collect();
        gf2::rank_u32(&projected) == positions.len()
    }

    /// Exact MAP extrinsic LLRs (natural log, positive favours bit 0).
    ///
    /// Infinite inputs act as hard constraints; finite inputs are saturated at
    /// `±clip`. Positions whose value is undetermined get exactly 0.
    pub fn extrinsic_llr(&self, input: &[f64], out: &mut [f64], clip: f64) {
        debug_assert_eq!(input.len(), self.length);
        if self.single_parity {
            parity_extrinsic_llr(input, out, clip);
        } else {
            self.table_extrinsic_llr(input, out, clip);
        }
    }

    /// Codeword-table enumeration; the reference path for every component.
    pub fn table_extrinsic_llr(&self, input: &[f64], out: &mut [f64], clip: f64) {
        let n = self.length;
        let mut must_zero = 0u32;
        let mut must_one = 0u32;
        let mut half = [0.0f64; MAX_COMPONENT_LENGTH];
        for (i, &v) in input.iter().enumerate() {
            if v == f64::INFINITY {
                must_zero |= 1 << i;
            } else if v == f64::NEG_INFINITY {
                must_one |= 1 << i;
            } else {
                half[i] = 0.5 * v.clamp(-clip, clip);
            }
        }
        if must_zero | must_one == 0 && self.grouped_extrinsic_llr(&half[..n], out) {
            return;
        }
        // (codeword, conflicting positions, metric over finite positions)
        let mut acc0 = [LogSum::EMPTY; MAX_COMPONENT_LENGTH];
        let mut acc1 = [LogSum::EMPTY; MAX_COMPONENT_LENGTH];
        for &c in &self.codewords {
            let conflicts = (c & must_zero) | (!c & must_one);
            if conflicts.count_ones() > 1 {
                continue;
            }
            let mut metric = 0.0;
            for (i, h) in half.iter().enumerate().take(n) {
                metric += if c >> i & 1 == 1 { -h } else { *h };
            }
            for j in 0..n {
                if conflicts != 0 && conflicts != 1 << j {
                    continue;
                }
                let bit = c >> j & 1 == 1;
                let own = if bit { -half[j] } else { half[j] };
                if bit {
                    acc1[j].add(metric - own);
                } else {
                    acc0[j].add(metric - own);
                }
            }
        }
        for j in 0..n {
            out[j] = match (acc0[j].value(), acc1[j].value()) {
                (None, None) => 0.0,
                (Some(_), None) => f64::INFINITY,
                (None, Some(_)) => f64::NEG_INFINITY,
                (Some(a), Some(b)) => a - b,
            };
        }
    }

    /// Finite-input path: one exponential per codeword, grouped by bit value.
    /// Returns false when the metric spread risks underflow.
    fn grouped_extrinsic_llr(&self, half: &[f64], out: &mut [f64]) -> bool {
        let n = self.length;
        let metric = |c: u32| -> f64 {
            half.iter().enumerate().map(|(i, h)| if c >> i & 1 == 1 { -h } else { *h }).sum()
        };
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for &c in &self.codewords {
            let v = metric(c);
            hi = hi.max(v);
            lo = lo.min(v);
        }
        if hi - lo > 600.0 {
            return false;
        }
        let mut s0 = [0.0f64; MAX_COMPONENT_LENGTH];
        let mut s1 = [0.0f64; MAX_COMPONENT_LENGTH];
        for &c in &self.codewords {
            let w = (metric(c) - hi).exp();
            for j in 0..n {
                if c >> j & 1 == 1 {
                    s1[j] += w;
                } else {
                    s0[j] += w;
                }
            }
        }
        for j in 0..n {
            out[j] = match (s0[j] > 0.0, s1[j] > 0.0) {
                (true, true) => (s0[j] / s1[j]).ln() - 2.0 * half[j],
                (true, false) => f64::INFINITY,
                (false, _) => f64::NEG_INFINITY,
            };
        }
        true
    }

    /// Exact extrinsic erasure probabilities under independent erasures with
    /// the given per-position probabilities.
    pub fn extrinsic_erasure(&self, input: &[f64], out: &mut [f64]) {
        let n = self.length;
        if self.single_parity {
            for j in 0..n {
                let known: f64 = (0..n).filter(|&i| i != j).map(|i| 1.0 - input[i]).product();
                out[j] = 1.0 - known;
            }
            return;
        }
        for j in 0..n {
            let covers = self.unresolving_supports(j);
            let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
            let mut total = 0.0;
            for pattern in 0u32..(1u32 << others.len()) {
                let mut erased = 0u32;
                let mut prob = 1.0;
                for (k, &pos) in others.iter().enumerate() {
                    if pattern >> k & 1 == 1 {
                        erased |= 1 << pos;
                        prob *= input[pos];
                    } else {
                        prob *= 1.0 - input[pos];
                    }
                }
                if prob > 0.0 && covers.iter().any(|&s| s & !erased == 0) {
                    total += prob;
                }
            }
            out[j] = total;
        }
    }

    /// Supports (without `j`) of codewords containing `j`; position `j` is
    /// unrecoverable exactly when one of them lies inside the erased set.
    fn unresolving_supports(&self, j: usize) -> Vec<u32> {
        let mut supports: Vec<u32> = self
            .codewords
            .iter()
            .filter(|&&c| c >> j & 1 == 1)
            .map(|&c| c & !(1 << j))
            .collect();
        supports.sort_unstable_by_key(|s| s.count_ones());
        let mut minimal: Vec<u32> = Vec::new();
        for s in supports {
            if !minimal.iter().any(|&m| m & !s == 0) {
                minimal.push(s);
            }
        }
        minimal
    }

    /// Positions fixed by the known values, and their values.
    ///
    /// Returns `None` when no codeword agrees with the known values.
    pub fn resolve(&self, known_mask: u32, known_values: u32) -> Option<(u32, u32)> {
        let mut and_acc = full_mask(self.length);
        let mut or_acc = 0u32;
        let mut any = false;
        for &c in &self.codewords {
            if (c ^ known_values) & known_mask == 0 {
                and_acc &= c;
                or_acc |= c;
                any = true;
            }
        }
        any.then(|| (!(and_acc ^ or_acc) & full_mask(self.length), and_acc))
    }

    /// Exact erasure transfer of this component with erasure probability `x`
    /// on positions of degree > 1 and `p` on the positions in `degree_one`.
    pub fn erasure_transfer(&self, degree_one: &[usize]) -> ComponentTransfer {
        let n = self.length;
        let small_mask = degree_one.iter().fold(0u32, |m, &p| m | 1 << p);
        let big: Vec<usize> = (0..n).filter(|p| small_mask >> p & 1 == 0).collect();
        let big_others = big.len().saturating_sub(1);
        let small = degree_one.len();
        let mut coeffs = vec![vec![0.0f64; small + 1]; big_others + 1];
        if self.single_parity {
            // Everything but the all-known pattern leaves the position erased.
            for (a, row) in coeffs.iter_mut().enumerate() {
                for (b, c) in row.iter_mut().enumerate() {
                    if a + b > 0 {
                        *c = big.len() as f64 * binomial(big_others, a) * binomial(small, b);
                    }
                }
            }
        } else {
            for &j in &big {
                let covers = self.unresolving_supports(j);
                let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
                for pattern in 0u32..(1u32 << others.len()) {
                    let erased = others
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| pattern >> k & 1 == 1)
                        .fold(0u32, |m, (_, &p)| m | 1 << p);
                    if covers.iter().any(|&s| s & !erased == 0) {
                        let b = (erased & small_mask).count_ones() as usize;
                        let a = erased.count_ones() as usize - b;
                        coeffs[a][b] += 1.0;
                    }
                }
            }
        }
        ComponentTransfer { big_positions: big.len(), small_positions: small, coeffs }
    }
}

/// Polynomial form of a component's erasure transfer; `sum(x, p)` is the sum
/// over its degree->1 positions of their extrinsic erasure probabilities.
#[derive(Debug, Clone)]
pub struct ComponentTransfer {
    big_positions: usize,
    small_positions: usize,
    coeffs: Vec<Vec<f64>>,
}

impl ComponentTransfer {
    pub fn big_positions(&self) -> usize {
        self.big_positions
    }

    pub fn sum(&self, x: f64, p: f64) -> f64 {
        let a_max = self.coeffs.len() - 1;
        let b_max = self.small_positions;
        let mut total = 0.0;
        for (a, row) in self.coeffs.iter().enumerate() {
            let xa = x.powi(a as i32) * (1.0 - x).powi((a_max - a) as i32);
            for (b, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    total += c * xa * p.powi(b as i32) * (1.0 - p).powi((b_max - b) as i32);
                }
            }
        }
        total
    }

    pub fn mean(&self, x: f64, p: f64) -> f64 {
        if self.big_positions == 0 {
            0.0
        } else {
            self.sum(x, p) / self.big_positions as f64
        }
    }
}

/// Mixture of component transfers weighted by their share of degree->1
/// positions; evaluates the base-code EXIT function.
#[derive(Debug, Clone)]
pub struct BaseTransfer {
    parts: Vec<(f64, ComponentTransfer)>,
}

impl BaseTransfer {
    pub fn new(parts: Vec<(f64, ComponentTransfer)>) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.is_empty() || !(total > 0.0) {
            return Err(Error::InvalidParameter("empty base transfer".into()));
        }
        let parts = parts.into_iter().map(|(w, t)| (w / total, t)).collect();
        Ok(Self { parts })
    }

    /// Mean extrinsic erasure over degree->1 positions.
    pub fn evaluate(&self, x: f64, p: f64) -> f64 {
        self.parts.iter().map(|(w, t)| w * t.mean(x, p)).sum()
    }

    /// Transfer of a concrete base code (components are grouped by structure).
    pub fn from_base(spec: &BaseCodeSpec) -> Result<Self> {
        let mut groups: HashMap<(usize, Vec<u32>, Vec<usize>), (usize, ComponentTransfer)> =
            HashMap::new();
        let mut order = Vec::new();
        for comp in spec.components() {
            let local_one: Vec<usize> = comp
                .positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| spec.degree_one_mask()[p])
                .map(|(i, _)| i)
                .collect();
            let key = (comp.code.length(), comp.code.codewords().to_vec(), local_one.clone());
            let entry = groups.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                (0, comp.code.erasure_transfer(&local_one))
            });
            entry.0 += 1;
        }
        let parts = order
            .into_iter()
            .map(|key| {
                let (count, t) = groups.remove(&key).expect("group exists");
                ((count * t.big_positions()) as f64, t)
            })
            .filter(|(w, _)| *w > 0.0)
            .collect();
        Self::new(parts)
    }

    /// Transfer of the check side of an LDPC ensemble, `1 - ρ(1 - x)`.
    pub fn from_check_distribution(rho: &DegreeDistribution) -> Result<Self> {
        let parts = rho
            .iter()
            .map(|(d, w)| Ok((to_f64(w), ComponentCode::parity_check(d as usize)?.erasure_transfer(&[]))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// One component of a base code and the base positions it covers.
#[derive(Debug, Clone)]
pub struct Component {
    pub code: Arc<ComponentCode>,
    pub positions: Vec<usize>,
}

/// Structural kind of a base code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Ldpc,
    BlockTldpc,
    Custom,
}

/// Compact description from which a base code can be rebuilt.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseDescriptor {
    BlockTldpc { blocks: usize },
    Ldpc { check_degrees: Vec<usize> },
    Custom { component: ComponentCode, degree_one: Vec<usize>, copies: usize },
}

impl BaseDescriptor {
    pub fn build(&self) -> Result<BaseCodeSpec> {
        match self {
            BaseDescriptor::BlockTldpc { blocks } => make_block_tldpc_base(*blocks),
            BaseDescriptor::Ldpc { check_degrees } => ldpc_base_from_degrees(check_degrees),
            BaseDescriptor::Custom { component, degree_one, copies } => {
                custom_base(component.clone(), degree_one, *copies)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            BaseDescriptor::BlockTldpc { blocks } => json!({ "kind": "block-tldpc", "blocks": blocks }),
            BaseDescriptor::Ldpc { check_degrees } => {
                json!({ "kind": "ldpc", "check_degrees": check_degrees })
            }
            BaseDescriptor::Custom { component, degree_one, copies } => json!({
                "kind": "custom",
                "component": component.to_json(degree_one),
                "copies": copies,
            }),
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let kind = value
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("base reference is missing `kind`".into()))?;
        let count = |key: &str| -> Result<usize> {
            value
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::Parse(format!("base reference is missing `{key}`")))
        };
        match kind {
            "block-tldpc" => Ok(BaseDescriptor::BlockTldpc { blocks: count("blocks")? }),
            "ldpc" => {
                let degrees = value
                    .get("check_degrees")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("ldpc base is missing `check_degrees`".into()))?
                    .iter()
                    .map(|d| d.as_u64().map(|d| d as usize).ok_or_else(|| Error::Parse("bad check degree".into())))
                    .collect::<Result<_>>()?;
                Ok(BaseDescriptor::Ldpc { check_degrees: degrees })
            }
            "custom" => {
                let comp = value
                    .get("component")
                    .ok_or_else(|| Error::Parse("custom base is missing `component`".into()))?;
                let (component, degree_one) = ComponentCode::from_json(comp)?;
                Ok(BaseDescriptor::Custom { component, degree_one, copies: count("copies")? })
            }
            other => Err(Error::Parse(format!("unknown base kind {other:?}"))),
        }
    }
}

/// A base code: components over `m` positions plus the degree-one position mask.
#[derive(Debug, Clone)]
pub struct BaseCodeSpec {
    m: usize,
    components: Vec<Component>,
    degree_one_mask: Vec<bool>,
    /// (component index, local index) for every base position.
    locate: Vec<(usize, usize)>,
    descriptor: BaseDescriptor,
}

impl BaseCodeSpec {
    /// Assembles a base code; the component position lists must partition `0..m`.
    pub fn from_components(
        m: usize,
        components: Vec<Component>,
        degree_one_mask: Vec<bool>,
        descriptor: BaseDescriptor,
    ) -> Result<Self> {
        if degree_one_mask.len() != m {
            return Err(Error::LengthMismatch { expected: m, actual: degree_one_mask.len() });
        }
        let mut locate = vec![(usize::MAX, 0); m];
        for (ci, comp) in components.iter().enumerate() {
            if comp.positions.len() != comp.code.length() {
                return Err(Error::InvalidComponent(format!(
                    "component {ci} covers {} positions but has length {}",
                    comp.positions.len(),
                    comp.code.length()
                )));
            }
            for (li, &p) in comp.positions.iter().enumerate() {
                if p >= m || locate[p].0 != usize::MAX {
                    return Err(Error::InvalidComponent(format!(
                        "position {p} is out of range or covered twice"
                    )));
                }
                locate[p] = (ci, li);
            }
        }
        if locate.iter().any(|l| l.0 == usize::MAX) {
            return Err(Error::InvalidComponent("components do not cover every position".into()));
        }
        Ok(Self { m, components, degree_one_mask, locate, descriptor })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn degree_one_mask(&self) -> &[bool] {
        &self.degree_one_mask
    }

    pub fn descriptor(&self) -> &BaseDescriptor {
        &self.descriptor
    }

    pub fn kind(&self) -> BaseKind {
        match self.descriptor {
            BaseDescriptor::BlockTldpc { .. } => BaseKind::BlockTldpc,
            BaseDescriptor::Ldpc { .. } => BaseKind::Ldpc,
            BaseDescriptor::Custom { .. } => BaseKind::Custom,
        }
    }

    /// (component index, index inside the component) of base position `p`.
    pub fn locate(&self, p: usize) -> (usize, usize) {
        self.locate[p]
    }

    pub fn dimension(&self) -> usize {
        self.components.iter().map(|c| c.code.dimension()).sum()
    }

    /// Number of parity checks (dual dimension).
    pub fn num_checks(&self) -> usize {
        self.m - self.dimension()
    }

    /// `R_b = dim / m`.
    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.m as f64
    }

    pub fn degree_one_fraction(&self) -> f64 {
        self.degree_one_mask.iter().filter(|&&b| b).count() as f64 / self.m as f64
    }

    /// Restriction of `assignment` to component `ci` as a local mask.
    pub fn local_word(&self, ci: usize, assignment: &[u8]) -> u32 {
        self.components[ci]
            .positions
            .iter()
            .enumerate()
            .fold(0u32, |w, (i, &p)| w | ((assignment[p] & 1) as u32) << i)
    }

    /// Checks that the degree-one positions of every component extend to an information set.
    pub fn degree_one_extends_to_information_set(&self) -> bool {
        self.components.iter().all(|comp| {
            let local: Vec<usize> = comp
                .positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| self.degree_one_mask[p])
                .map(|(i, _)| i)
                .collect();
            comp.code.extends_to_information_set(&local)
        })
    }
}

/// Rate-1/2 block base: `num_blocks` copies of [`ComponentCode::tldpc_block`] with
/// positions 2 and 5 of every block marked degree one.
pub fn make_block_tldpc_base(num_blocks: usize) -> Result<BaseCodeSpec> {
    if num_blocks == 0 {
        return Err(Error::InvalidParameter("block base needs at least one block".into()));
    }
    let code = Arc::new(ComponentCode::tldpc_block());
    let components = (0..num_blocks)
        .map(|b| Component { code: code.clone(), positions: (6 * b..6 * b + 6).collect() })
        .collect();
    let mask = (0..6 * num_blocks).map(|p| p % 3 == 2).collect();
    BaseCodeSpec::from_components(
        6 * num_blocks,
        components,
        mask,
        BaseDescriptor::BlockTldpc { blocks: num_blocks },
    )
}

/// Juxtaposition of single parity checks of the given degrees, laid out consecutively.
pub fn ldpc_base_from_degrees(check_degrees: &[usize]) -> Result<BaseCodeSpec> {
    if check_degrees.is_empty() {
        return Err(Error::InvalidParameter("no checks".into()));
    }
    let mut cache: HashMap<usize, Arc<ComponentCode>> = HashMap::new();
    let mut components = Vec::with_capacity(check_degrees.len());
    let mut next = 0;
    for &d in check_degrees {
        let code = match cache.get(&d) {
            Some(c) => c.clone(),
            None => {
                let c = Arc::new(ComponentCode::parity_check(d)?);
                cache.insert(d, c.clone());
                c
            }
        };
        components.push(Component { code, positions: (next..next + d).collect() });
        next += d;
    }
    BaseCodeSpec::from_components(
        next,
        components,
        vec![false; next],
        BaseDescriptor::Ldpc { check_degrees: check_degrees.to_vec() },
    )
}

fn check_degrees_from_counts(degrees: &[u32], counts: &[u64]) -> Vec<usize> {
    degrees
        .iter()
        .zip(counts)
        .flat_map(|(&d, &c)| std::iter::repeat(d as usize).take(c as usize))
        .collect()
}

/// Parity-check base with `num_checks` checks whose degrees follow the
/// edge-perspective distribution `rho` (largest-remainder on check counts).
pub fn make_ldpc_base(rho: &DegreeDistribution, num_checks: usize) -> Result<BaseCodeSpec> {
    if num_checks == 0 {
        return Err(Error::InvalidParameter("no checks".into()));
    }
    let node = rho.node_fractions();
    let degrees: Vec<u32> = node.keys().copied().collect();
    let targets: Vec<f64> = node.values().map(|f| to_f64(f) * num_checks as f64).collect();
    let counts = largest_remainder(&targets, num_checks as u64);
    ldpc_base_from_degrees(&check_degrees_from_counts(&degrees, &counts))
}

/// Parity-check base with exactly `num_edges` positions, check degrees following `rho`.
pub fn make_ldpc_base_with_edges(rho: &DegreeDistribution, num_edges: usize) -> Result<BaseCodeSpec> {
    let degrees: Vec<u32> = rho.degrees().collect();
    let targets: Vec<(u32, f64)> = rho
        .iter()
        .map(|(d, f)| (d, to_f64(f) * num_edges as f64 / d as f64))
        .collect();
    let counts = round_to_edge_total(&targets, num_edges as u64)?;
    ldpc_base_from_degrees(&check_degrees_from_counts(&degrees, &counts))
}

/// `copies` juxtaposed copies of a user-defined component.
pub fn custom_base(component: ComponentCode, degree_one: &[usize], copies: usize) -> Result<BaseCodeSpec> {
    if copies == 0 {
        return Err(Error::InvalidParameter("custom base needs at least one copy".into()));
    }
    let len = component.length();
    if degree_one.iter().any(|&p| p >= len) {
        return Err(Error::InvalidComponent("degree-one position out of range".into()));
    }
    let code = Arc::new(component.clone());
    let components = (0..copies)
        .map(|b| Component { code: code.clone(), positions: (len * b..len * (b + 1)).collect() })
        .collect();
    let mask = (0..len * copies).map(|p| degree_one.contains(&(p % len))).collect();
    BaseCodeSpec::from_components(
        len * copies,
        components,
        mask,
        BaseDescriptor::Custom { component, degree_one: degree_one.to_vec(), copies },
    )
}

pub fn is_codeword(spec: &BaseCodeSpec, assignment: &[u8]) -> Result<bool> {
    if assignment.len() != spec.m() {
        return Err(Error::LengthMismatch { expected: spec.m(), actual: assignment.len() });
    }
    Ok((0..spec.components().len())
        .all(|ci| spec.components()[ci].code.contains(spec.local_word(ci, assignment))))
}

/// Exact per-position MAP extrinsics over the whole base code.
pub fn extrinsic_llr(spec: &BaseCodeSpec, intrinsic: &[f64]) -> Result<Vec<f64>> {
    extrinsic_llr_with_clip(spec, intrinsic, DEFAULT_LLR_CLIP)
}

pub fn extrinsic_llr_with_clip(spec: &BaseCodeSpec, intrinsic: &[f64], clip: f64) -> Result<Vec<f64>> {
    if intrinsic.len() != spec.m() {
        return Err(Error::LengthMismatch { expected: spec.m(), actual: intrinsic.len() });
    }
    if let Some(i) = intrinsic.iter().position(|v| v.is_nan()) {
        return Err(Error::NotANumber(i));
    }
    let mut out = vec![0.0; spec.m()];
    let mut local_in = [0.0; MAX_COMPONENT_LENGTH];
    let mut local_out = [0.0; MAX_COMPONENT_LENGTH];
    for comp in spec.components() {
        let n = comp.positions.len();
        for (i, &p) in comp.positions.iter().enumerate() {
            local_in[i] = intrinsic[p];
        }
        comp.code.extrinsic_llr(&local_in[..n], &mut local_out[..n], clip);
        for (i, &p) in comp.positions.iter().enumerate() {
            out[p] = local_out[i];
        }
    }
    Ok(out)
}

/// Exact per-position extrinsic erasure probabilities.
pub fn extrinsic_erasure(spec: &BaseCodeSpec, input: &[f64]) -> Result<Vec<f64>> {
    if input.len() != spec.m() {
        return Err(Error::LengthMismatch { expected: spec.m(), actual: input.len() });
    }
    if let Some((index, &value)) = input.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
        return Err(Error::ProbabilityOutOfRange { index, value });
    }
    let mut out = vec![0.0; spec.m()];
    let mut local_in = [0.0; MAX_COMPONENT_LENGTH];
    let mut local_out = [0.0; MAX_COMPONENT_LENGTH];
    for comp in spec.components() {
        let n = comp.positions.len();
        for (i, &p) in comp.positions.iter().enumerate() {
            local_in[i] = input[p];
        }
        comp.code.extrinsic_erasure(&local_in[..n], &mut local_out[..n]);
        for (i, &p) in comp.positions.iter().enumerate() {
            out[p] = local_out[i];
        }
    }
    Ok(out)
}

/// All codewords of the base code in lexicographic order.
pub fn enumerate_codewords(spec: &BaseCodeSpec, max_dim: usize) -> Result<Vec<Vec<u8>>> {
    let dim = spec.dimension();
    if dim > max_dim || max_dim > MAX_COMPONENT_LENGTH {
        return Err(Error::EnumerationBudget(format!(
            "base dimension {dim} exceeds the limit {}",
            max_dim.min(MAX_COMPONENT_LENGTH)
        )));
    }
    let generators: Vec<Vec<u8>> = spec
        .components()
        .iter()
        .flat_map(|comp| {
            comp.code.generators().iter().map(move |&g| {
                let mut v = vec![0u8; spec.m()];
                for (i, &p) in comp.positions.iter().enumerate() {
                    v[p] = (g >> i & 1) as u8;
                }
                v
            })
        })
        .collect();
    let mut words = Vec::with_capacity(1 << dim);
    let mut current = vec![0u8; spec.m()];
    words.push(current.clone());
    for step in 1u64..(1u64 << dim) {
        let g = &generators[step.trailing_zeros() as usize];
        for (c, b) in current.iter_mut().zip(g) {
            *c ^= b;
        }
        words.push(current.clone());
    }
    words.sort();
    Ok(words)
}

fn full_mask(length: usize) -> u32 {
    if length >= 32 {
        u32::MAX
    } else {
        (1u32 << length) - 1
    }
}

/// Sort key that orders masks like their position vectors read left to right.
fn lexicographic_key(word: u32, length: usize) -> u32 {
    word.reverse_bits() >> (32 - length)
}

fn parse_word(text: &str) -> Result<u32> {
    text.chars().enumerate().try_fold(0u32, |w, (i, ch)| match ch {
        '0' => Ok(w),
        '1' => Ok(w | 1 << i),
        _ => Err(Error::InvalidComponent(format!("bad generator {text:?}"))),
    })
}

fn word_string(word: u32, length: usize) -> String {
    (0..length).map(|i| if word >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Running log-sum-exp.
#[derive(Clone, Copy)]
struct LogSum {
    max: f64,
    sum: f64,
}

impl LogSum {
    const EMPTY: LogSum = LogSum { max: f64::NEG_INFINITY, sum: 0.0 };

    fn add(&mut self, v: f64) {
        if v <= self.max {
            self.sum += (v - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    fn value(&self) -> Option<f64> {
        (self.sum > 0.0).then(|| self.max + self.sum.ln())
    }
}

/// `a ⊞ b` with exact handling of infinite operands.
pub fn box_plus(a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        return if a > 0.0 { b } else { -b };
    }
    if b.is_infinite() {
        return if b > 0.0 { a } else { -a };
    }
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

fn parity_extrinsic_llr(input: &[f64], out: &mut [f64], clip: f64) {
    let n = input.len();
    let clipped = |v: f64| if v.is_infinite() { v } else { v.clamp(-clip, clip) };
    // Forward pass stores prefixes in `out`, backward pass combines with suffixes.
    let mut acc = f64::INFINITY;
    for j in 0..n {
        out[j] = acc;
        acc = box_plus(acc, clipped(input[j]));
    }
    let mut acc = f64::INFINITY;
    for j in (0..n).rev() {
        out[j] = box_plus(out[j], acc);
        acc = box_plus(acc, clipped(input[j]));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    /// Brute-force MAP oracle over an explicit codeword list.
    fn brute_map(words: &[Vec<u8>], llr: &[f64]) -> Vec<f64> {
        (0..llr.len())
            .map(|j| {
                let mut p = [0.0f64; 2];
                for w in words {
                    let weight: f64 = (0..llr.len())
                        .filter(|&i| i != j)
                        .map(|i| if w[i] == 0 { 0.5 * llr[i] } else { -0.5 * llr[i] })
                        .sum::<f64>()
                        .exp();
                    p[w[j] as usize] += weight;
                }
                (p[0] / p[1]).ln()
            })
            .collect()
    }

    /// Brute-force erasure oracle: enumerate every erasure pattern of the
    /// whole component and test determinacy with the codeword list.
    fn brute_erasure(words: &[Vec<u8>], probs: &[f64]) -> Vec<f64> {
        let n = probs.len();
        (0..n)
            .map(|j| {
                let mut total = 0.0;
                for pattern in 0u32..(1 << n) {
                    if pattern >> j & 1 == 1 {
                        continue;
                    }
                    let prob: f64 = (0..n)
                        .filter(|&i| i != j)
                        .map(|i| if pattern >> i & 1 == 1 { probs[i] } else { 1.0 - probs[i] })
                        .product();
                    let ambiguous = words.iter().any(|w| {
                        w[j] == 1 && (0..n).all(|i| i == j || pattern >> i & 1 == 1 || w[i] == 0)
                    });
                    if ambiguous {
                        total += prob;
                    }
                }
                total
            })
            .collect()
    }

    #[test]
    fn block_has_eight_codewords_and_rate_half() {
        let base = make_block_tldpc_base(1).unwrap();
        assert_eq!(base.m(), 6);
        assert_eq!(enumerate_codewords(&base, 24).unwrap().len(), 8);
        assert_eq!(base.rate(), 0.5);
        assert!((base.degree_one_fraction() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(base.degree_one_mask(), &[false, false, true, false, false, true]);
        assert_eq!(make_block_tldpc_base(2).unwrap().rate(), 0.5);
        assert!(make_block_tldpc_base(0).is_err());
    }

    #[test]
    fn block_pairs_have_partial_weight_two_codewords() {
        let base = make_block_tldpc_base(1).unwrap();
        let words = enumerate_codewords(&base, 24).unwrap();
        let big = [0usize, 1, 3, 4];
        let mut covered = Vec::new();
        for w in &words {
            let support: Vec<usize> = big.iter().copied().filter(|&p| w[p] == 1).collect();
            if support.len() == 2 {
                let small = w[2] + w[5];
                assert!(small <= 2);
                covered.push((support[0], support[1]));
            }
        }
        covered.sort();
        covered.dedup();
        assert_eq!(covered, vec![(0, 1), (0, 3), (0, 4), (1, 3), (1, 4), (3, 4)]);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let base = ldpc_base_from_degrees(&[3]).unwrap();
        let words = enumerate_codewords(&base, 24).unwrap();
        assert_eq!(words, vec![bits("000"), bits("011"), bits("101"), bits("110")]);
        let two = make_block_tldpc_base(2).unwrap();
        let words = enumerate_codewords(&two, 24).unwrap();
        assert_eq!(words.len(), 64);
        assert!(words.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate_codewords(&two, 5).is_err());
    }

    #[test]
    fn codeword_membership() {
        let base = make_block_tldpc_base(1).unwrap();
        assert!(is_codeword(&base, &bits("000000")).unwrap());
        assert!(is_codeword(&base, &bits("111000")).unwrap());
        assert!(is_codeword(&base, &bits("110110")).unwrap());
        assert!(!is_codeword(&base, &bits("110000")).unwrap());
        let spc = ldpc_base_from_degrees(&[3]).unwrap();
        assert!(!is_codeword(&spc, &bits("100")).unwrap());
        assert!(matches!(is_codeword(&spc, &bits("10")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn dual_basis_annihilates_generators() {
        for code in [ComponentCode::tldpc_block(), ComponentCode::parity_check(5).unwrap()] {
            assert_eq!(code.checks().len(), code.length() - code.dimension());
            for &h in code.checks() {
                for &g in code.generators() {
                    assert_eq!((h & g).count_ones() % 2, 0);
                }
            }
            for &c in code.codewords() {
                assert!(code.contains(c));
            }
        }
    }

    #[test]
    fn block_degree_one_positions_extend_to_information_set() {
        let base = make_block_tldpc_base(3).unwrap();
        assert!(base.degree_one_extends_to_information_set());
        // Two positions that are always equal cannot both be information bits.
        let rep = ComponentCode::from_strings(&["11"]).unwrap();
        assert!(!rep.extends_to_information_set(&[0, 1]));
    }

    #[test]
    fn ldpc_base_shapes() {
        let base = ldpc_base_from_degrees(&[3]).unwrap();
        assert_eq!(base.m(), 3);
        let regular = DegreeDistribution::single(4).unwrap();
        let base = make_ldpc_base(&regular, 5).unwrap();
        assert_eq!(base.m(), 20);
        assert_eq!(base.components().len(), 5);
        assert!(base.degree_one_mask().iter().all(|b| !b));

        let rho = DegreeDistribution::from_f64([(2, 0.1), (3, 0.5), (4, 0.4)]).unwrap();
        let base = make_ldpc_base_with_edges(&rho, 30).unwrap();
        assert_eq!(base.m(), 30);
        let mut hist = [0usize; 5];
        for c in base.components() {
            hist[c.code.length()] += 1;
        }
        // Targets are (1.5, 5, 3) checks of degrees (2, 3, 4).
        assert!(hist[2].abs_diff(1) <= 2 && hist[3].abs_diff(5) <= 1 && hist[4].abs_diff(3) <= 1);
        let base = make_ldpc_base_with_edges(&rho, 60).unwrap();
        let degs: Vec<usize> = base.components().iter().map(|c| c.code.length()).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 2).count(), 3);
        assert_eq!(degs.iter().filter(|&&d| d == 3).count(), 10);
        assert_eq!(degs.iter().filter(|&&d| d == 4).count(), 6);
    }

    #[test]
    fn extrinsic_zero_inputs_give_zero() {
        let base = make_block_tldpc_base(2).unwrap();
        let out = extrinsic_llr(&base, &vec![0.0; 12]).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn extrinsic_parity_box_plus_value() {
        let base = ldpc_base_from_degrees(&[3]).unwrap();
        let out = extrinsic_llr(&base, &[0.7, 2.0, 2.0]).unwrap();
        let expected = 2.0 * ((1.0f64).tanh() * (1.0f64).tanh()).atanh();
        assert!((out[0] - expected).abs() < 1e-12);
        assert!((out[0] - 1.3250).abs() < 1e-4);
        let code = ComponentCode::parity_check(3).unwrap();
        let mut table = [0.0; 3];
        code.table_extrinsic_llr(&[0.7, 2.0, 2.0], &mut table, DEFAULT_LLR_CLIP);
        assert!((table[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn extrinsic_matches_brute_force_map() {
        let base = make_block_tldpc_base(1).unwrap();
        let words = enumerate_codewords(&base, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let llr: Vec<f64> = (0..6).map(|_| rng.gen_range(-6.0..6.0)).collect();
            let got = extrinsic_llr(&base, &llr).unwrap();
            let want = brute_map(&words, &llr);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12, "{g} vs {w}");
            }
        }
    }

    #[test]
    fn parity_fast_path_matches_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for degree in 2..9 {
            let code = ComponentCode::parity_check(degree).unwrap();
            for _ in 0..50 {
                let llr: Vec<f64> = (0..degree)
                    .map(|_| match rng.gen_range(0..10) {
                        0 => f64::INFINITY,
                        1 => f64::NEG_INFINITY,
                        _ => rng.gen_range(-50.0..50.0),
                    })
                    .collect();
                let mut fast = vec![0.0; degree];
                let mut table = vec![0.0; degree];
                code.extrinsic_llr(&llr, &mut fast, DEFAULT_LLR_CLIP);
                code.table_extrinsic_llr(&llr, &mut table, DEFAULT_LLR_CLIP);
                for (a, b) in fast.iter().zip(&table) {
                    if a.is_infinite() || b.is_infinite() {
                        assert_eq!(a, b);
                    } else {
                        assert!((a - b).abs() < 1e-9, "{a} vs {b} for {llr:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn extrinsic_infinities_are_exact() {
        let base = make_block_tldpc_base(1).unwrap();
        // Known zeros on p2, p4, p5 determine p1.
        let inf = f64::INFINITY;
        let out = extrinsic_llr(&base, &[0.0, inf, 0.0, inf, inf, 0.0]).unwrap();
        assert_eq!(out[0], inf);
        // Everything erased except the degree-one positions: degree>1 bits stay ambiguous.
        let out = extrinsic_llr(&base, &[0.0, 0.0, inf, 0.0, 0.0, inf]).unwrap();
        for p in [0, 1, 3, 4] {
            assert_eq!(out[p], 0.0);
        }
        assert!(extrinsic_llr(&base, &[f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn erasure_parity_closed_form() {
        let base = ldpc_base_from_degrees(&[4]).unwrap();
        let out = extrinsic_erasure(&base, &[0.5; 4]).unwrap();
        assert!(out.iter().all(|&v| (v - 0.875).abs() < 1e-15));
        let out = extrinsic_erasure(&base, &[0.0; 4]).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
        assert!(extrinsic_erasure(&base, &[1.5, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn erasure_matches_brute_force() {
        let base = make_block_tldpc_base(1).unwrap();
        let words = enumerate_codewords(&base, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let probs: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
            let got = extrinsic_erasure(&base, &probs).unwrap();
            let want = brute_erasure(&words, &probs);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn block_degree_one_information_propagates() {
        let base = make_block_tldpc_base(1).unwrap();
        // All degree>1 positions erased, degree-one known: the weight-4 word
        // 110110 is invisible to the known positions, so nothing is resolved.
        let out = extrinsic_erasure(&base, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
        for p in [0, 1, 3, 4] {
            assert_eq!(out[p], 1.0);
        }
        // Any residual knowledge on degree>1 inputs combines with the degree-one values.
        let with_one = extrinsic_erasure(&base, &[0.9, 0.9, 0.0, 0.9, 0.9, 0.0]).unwrap();
        let without = extrinsic_erasure(&base, &[0.9, 0.9, 1.0, 0.9, 0.9, 1.0]).unwrap();
        for p in [0, 1, 3, 4] {
            assert!(with_one[p] < 1.0);
            assert!(with_one[p] < without[p]);
        }
    }

    #[test]
    fn transfer_polynomial_matches_enumeration() {
        let base = make_block_tldpc_base(1).unwrap();
        let transfer = BaseTransfer::from_base(&base).unwrap();
        for &(x, p) in &[(0.0, 0.0), (0.3, 0.8), (0.9, 0.2), (1.0, 1.0), (0.5, 0.5)] {
            let out = extrinsic_erasure(&base, &[x, x, p, x, x, p]).unwrap();
            let mean = (out[0] + out[1] + out[3] + out[4]) / 4.0;
            assert!((transfer.evaluate(x, p) - mean).abs() < 1e-14);
        }
        let rho = DegreeDistribution::from_f64([(2, 0.1), (3, 0.5), (4, 0.4)]).unwrap();
        let t = BaseTransfer::from_check_distribution(&rho).unwrap();
        for x in [0.0f64, 0.2, 0.7, 1.0] {
            let closed = 1.0 - (0.1 * (1.0 - x) + 0.5 * (1.0 - x).powi(2) + 0.4 * (1.0 - x).powi(3));
            assert!((t.evaluate(x, 0.3) - closed).abs() < 1e-14);
        }
        let concrete = make_ldpc_base_with_edges(&rho, 60).unwrap();
        let t2 = BaseTransfer::from_base(&concrete).unwrap();
        for x in [0.1, 0.4, 0.9] {
            assert!((t.evaluate(x, 0.0) - t2.evaluate(x, 0.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn resolve_reports_determined_positions() {
        let code = ComponentCode::tldpc_block();
        // p2, p4, p5 known zero: p1 forced to zero.
        let known = 0b011010;
        let (det, vals) = code.resolve(known, 0).unwrap();
        assert!(det & 1 == 1 && vals & 1 == 0);
        // 110000 is not completable.
        assert!(code.resolve(0b111111, 0b000011).is_none());
    }

    #[test]
    fn component_json_round_trip() {
        let v: Value = serde_json::from_str(
            r#"{ "length": 6, "generators": ["111000","100101","101011"], "degree_one": [2,5] }"#,
        )
        .unwrap();
        let (code, ones) = ComponentCode::from_json(&v).unwrap();
        assert_eq!(code, ComponentCode::tldpc_block());
        assert_eq!(ones, vec![2, 5]);
        assert_eq!(code.to_json(&ones), v);
        let dep: Value = serde_json::from_str(r#"{"length": 3, "generators": ["110","110"]}"#).unwrap();
        assert!(ComponentCode::from_json(&dep).is_err());
    }

    proptest::proptest! {
        #[test]
        fn parity_extrinsic_sign_symmetry(llr in proptest::collection::vec(-20.0f64..20.0, 12)) {
            let spc = ldpc_base_from_degrees(&[4, 4, 4]).unwrap();
            let neg: Vec<f64> = llr.iter().map(|v| -v).collect();
            let a = extrinsic_llr(&spc, &llr).unwrap();
            let b = extrinsic_llr(&spc, &neg).unwrap();
            for (x, y) in a.iter().zip(&b) {
                proptest::prop_assert!((x + y).abs() < 1e-12);
            }
        }

        #[test]
        fn erasure_is_monotone(probs in proptest::collection::vec(0.0f64..1.0, 6), idx in 0usize..6, bump in 0.0f64..1.0) {
            let base = make_block_tldpc_base(1).unwrap();
            let before = extrinsic_erasure(&base, &probs).unwrap();
            let mut raised = probs.clone();
            raised[idx] = (raised[idx] + bump).min(1.0);
            let after = extrinsic_erasure(&base, &raised).unwrap();
            for (a, b) in before.iter().zip(&after) {
                proptest::prop_assert!(*b >= *a - 1e-12);
            }
        }
    }
}
