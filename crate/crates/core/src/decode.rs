//! Iterative decoding: exact component-wise base-code extrinsics alternated
//! with variable-node combining on a flooding schedule.

use crate::basecode::DEFAULT_LLR_CLIP;
use crate::error::{Error, Result};
use crate::graphgen::CodeInstance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub max_iterations: usize,
    pub stop_on_valid: bool,
    pub llr_clip: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self { max_iterations: 200, stop_on_valid: true, llr_clip: DEFAULT_LLR_CLIP }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        if !(self.llr_clip > 0.0) {
            return Err(Error::InvalidParameter("llr_clip must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub hard_decisions: Vec<u8>,
    pub iterations_used: usize,
    /// All parity constraints hold and no bit is left undecided.
    pub converged: bool,
    /// Bits whose a-posteriori LLR is exactly zero.
    pub residual_erasures: usize,
    pub posterior: Vec<f64>,
}

/// Sum of LLRs where opposite infinities (contradictory hard evidence) cancel to 0.
fn llr_add(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        0.0
    } else {
        s
    }
}

/// Decodes channel LLRs (positive favours 0; erasures are 0; ±∞ are hard values).
pub fn decode(instance: &CodeInstance, channel_llrs: &[f64], cfg: &DecoderConfig) -> Result<DecodeOutcome> {
    cfg.validate()?;
    let n = instance.n();
    if channel_llrs.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: channel_llrs.len() });
    }
    if let Some(i) = channel_llrs.iter().position(|v| v.is_nan()) {
        return Err(Error::NotANumber(i));
    }
    let base = instance.base();
    let m = base.m();
    let p2v = instance.position_to_var();
    let mut ext = vec![0.0f64; m];
    let mut next = vec![0.0f64; m];
    let mut posterior = channel_llrs.to_vec();
    // Variables whose combined evidence includes an infinite term.
    let mut hard_evidence: Vec<bool> = channel_llrs.iter().map(|l| l.is_infinite()).collect();
    let mut hard = vec![0u8; n];
    let mut assignment = vec![0u8; m];
    let mut local_in = [0.0f64; crate::basecode::MAX_COMPONENT_LENGTH];
    let mut local_out = [0.0f64; crate::basecode::MAX_COMPONENT_LENGTH];
    let mut iterations = 0;
    let mut converged = false;
    for it in 1..=cfg.max_iterations {
        iterations = it;
        for comp in base.components() {
            let len = comp.positions.len();
            for (i, &p) in comp.positions.iter().enumerate() {
                let v = p2v[p];
                local_in[i] = if hard_evidence[v] {
                    // Exclude the own extrinsic term by summation, not subtraction.
                    let mut s = channel_llrs[v];
                    for &q in instance.positions_of(v) {
                        if q != p {
                            s = llr_add(s, ext[q]);
                        }
                    }
                    s
                } else {
                    posterior[v] - ext[p]
                };
            }
            comp.code.extrinsic_llr(&local_in[..len], &mut local_out[..len], cfg.llr_clip);
            for (i, &p) in comp.positions.iter().enumerate() {
                next[p] = local_out[i];
            }
        }
        let fixed_point = next.iter().zip(&ext).all(|(a, b)| a.to_bits() == b.to_bits());
        std::mem::swap(&mut ext, &mut next);
        let mut undecided = false;
        for v in 0..n {
            let s = instance.positions_of(v).iter().fold(channel_llrs[v], |s, &q| llr_add(s, ext[q]));
            posterior[v] = s;
            hard_evidence[v] = channel_llrs[v].is_infinite()
                || instance.positions_of(v).iter().any(|&q| ext[q].is_infinite());
            hard[v] = u8::from(s < 0.0);
            undecided |= s == 0.0;
        }
        for (p, a) in assignment.iter_mut().enumerate() {
            *a = hard[p2v[p]];
        }
        let valid = base
            .components()
            .iter()
            .enumerate()
            .all(|(ci, comp)| comp.code.contains(base.local_word(ci, &assignment)));
        converged = valid && !undecided;
        if (converged && cfg.stop_on_valid) || fixed_point {
            break;
        }
    }
    let residual_erasures = posterior.iter().filter(|&&s| s == 0.0).count();
    Ok(DecodeOutcome { hard_decisions: hard, iterations_used: iterations, converged, residual_erasures, posterior })
}

/// Exact erasure decoding by repeated component-wise resolution.
///
/// Erased bits are reported as 0 in `hard_decisions`; a bit is never
/// assigned a value that disagrees with the known ones.
pub fn decode_erasures(instance: &CodeInstance, erased: &[bool], values: &[u8]) -> Result<DecodeOutcome> {
    let n = instance.n();
    if erased.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: erased.len() });
    }
    if values.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: values.len() });
    }
    let base = instance.base();
    let p2v = instance.position_to_var();
    let mut known: Vec<bool> = erased.iter().map(|e| !e).collect();
    let mut value: Vec<u8> = values.iter().zip(&known).map(|(&v, &k)| if k { v & 1 } else { 0 }).collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut learned: Vec<(usize, u8)> = Vec::new();
        for (ci, comp) in base.components().iter().enumerate() {
            let mut mask = 0u32;
            let mut vals = 0u32;
            for (i, &p) in comp.positions.iter().enumerate() {
                let v = p2v[p];
                if known[v] {
                    mask |= 1 << i;
                    vals |= (value[v] as u32) << i;
                }
            }
            let (determined, fixed) = comp.code.resolve(mask, vals).ok_or(Error::Contradiction(ci))?;
            for (i, &p) in comp.positions.iter().enumerate() {
                if determined >> i & 1 == 1 {
                    let v = p2v[p];
                    let bit = (fixed >> i & 1) as u8;
                    if known[v] && value[v] != bit {
                        return Err(Error::Contradiction(ci));
                    }
                    if !known[v] {
                        learned.push((v, bit));
                    }
                }
            }
        }
        let mut progress = false;
        for (v, bit) in learned {
            if known[v] {
                if value[v] != bit {
                    return Err(Error::Contradiction(base.locate(instance.positions_of(v)[0]).0));
                }
            } else {
                known[v] = true;
                value[v] = bit;
                progress = true;
            }
        }
        if !progress || known.iter().all(|&k| k) {
            break;
        }
    }
    let residual_erasures = known.iter().filter(|&&k| !k).count();
    let posterior = known
        .iter()
        .zip(&value)
        .map(|(&k, &v)| match (k, v) {
            (false, _) => 0.0,
            (true, 0) => f64::INFINITY,
            (true, _) => f64::NEG_INFINITY,
        })
        .collect();
    Ok(DecodeOutcome {
        hard_decisions: value,
        iterations_used: rounds,
        converged: residual_erasures == 0,
        residual_erasures,
        posterior,
    })
}

/// Channel LLRs for an erasure pattern: ±∞ on known bits, 0 on erased ones.
pub fn erasure_llrs(erased: &[bool], values: &[u8]) -> Vec<f64> {
    erased
        .iter()
        .zip(values)
        .map(|(&e, &v)| match (e, v & 1) {
            (true, _) => 0.0,
            (false, 0) => f64::INFINITY,
            (false, _) => f64::NEG_INFINITY,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basecode::{ldpc_base_from_degrees, make_block_tldpc_base, BaseCodeSpec};
    use crate::ensemble::{BaseFamily, DegreeDistribution, EnsembleSpec};
    use crate::graphgen::{build_random_ldpc, build_random_over_base, extract_parity_matrix};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn identity(base: BaseCodeSpec) -> CodeInstance {
        let m = base.m();
        CodeInstance::new(base, m, (0..m).collect(), 0, None).unwrap()
    }

    fn small_ldpc(seed: u64) -> CodeInstance {
        build_random_ldpc(
            &DegreeDistribution::single(3).unwrap(),
            &DegreeDistribution::single(6).unwrap(),
            24,
            seed,
        )
        .unwrap()
    }

    fn small_block(seed: u64) -> CodeInstance {
        let lambda = DegreeDistribution::from_f64([(1, 1.0 / 3.0), (2, 1.0 / 3.0), (3, 1.0 / 3.0)]).unwrap();
        build_random_over_base(&EnsembleSpec::new(lambda, BaseFamily::BlockTldpc), 4, seed).unwrap()
    }

    /// Largest stopping set inside the erased set: union of every erased
    /// subset that no component can shrink.
    fn brute_residual(instance: &CodeInstance, erased: &[bool]) -> Vec<bool> {
        let idx: Vec<usize> = (0..erased.len()).filter(|&v| erased[v]).collect();
        let base = instance.base();
        let mut union = vec![false; erased.len()];
        for subset in 0u32..(1 << idx.len()) {
            let mut s = vec![false; erased.len()];
            for (k, &v) in idx.iter().enumerate() {
                s[v] = subset >> k & 1 == 1;
            }
            let stopping = base.components().iter().all(|comp| {
                let mut mask = 0u32;
                for (i, &p) in comp.positions.iter().enumerate() {
                    if !s[instance.var_of(p)] {
                        mask |= 1 << i;
                    }
                }
                let (det, _) = comp.code.resolve(mask, 0).unwrap();
                comp.positions.iter().enumerate().all(|(i, &p)| !s[instance.var_of(p)] || det >> i & 1 == 0)
            });
            if stopping {
                for v in 0..s.len() {
                    union[v] |= s[v];
                }
            }
        }
        union
    }

    #[test]
    fn noiseless_converges_in_one_iteration() {
        let inst = small_block(1);
        let out = decode(&inst, &vec![38.0; inst.n()], &DecoderConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations_used, 1);
        assert!(out.hard_decisions.iter().all(|&b| b == 0));
    }

    #[test]
    fn block_recovers_single_erasure() {
        let inst = identity(make_block_tldpc_base(1).unwrap());
        for word in ["111000", "100101", "011101"] {
            let values: Vec<u8> = word.bytes().map(|b| b - b'0').collect();
            let mut llr: Vec<f64> = values.iter().map(|&b| if b == 0 { 38.0 } else { -38.0 }).collect();
            llr[0] = 0.0;
            let out = decode(&inst, &llr, &DecoderConfig::default()).unwrap();
            assert_eq!(out.hard_decisions, values);
            assert!(out.converged);
        }
    }

    #[test]
    fn rejects_nan_and_bad_length() {
        let inst = small_ldpc(0);
        let mut llr = vec![1.0; inst.n()];
        llr[3] = f64::NAN;
        assert!(matches!(decode(&inst, &llr, &DecoderConfig::default()), Err(Error::NotANumber(3))));
        assert!(decode(&inst, &llr[1..], &DecoderConfig::default()).is_err());
        let cfg = DecoderConfig { max_iterations: 0, ..Default::default() };
        assert!(decode(&inst, &vec![1.0; inst.n()], &cfg).is_err());
    }

    #[test]
    fn erasure_decoder_edge_cases() {
        let inst = small_ldpc(2);
        let zeros = vec![0u8; inst.n()];
        let out = decode_erasures(&inst, &vec![false; inst.n()], &zeros).unwrap();
        assert_eq!(out.residual_erasures, 0);
        assert_eq!(out.hard_decisions, zeros);
        let out = decode_erasures(&inst, &vec![true; inst.n()], &zeros).unwrap();
        assert_eq!(out.residual_erasures, inst.n());
    }

    #[test]
    fn erasure_decoder_reports_contradiction() {
        let inst = identity(ldpc_base_from_degrees(&[3]).unwrap());
        assert!(matches!(
            decode_erasures(&inst, &[false, false, false], &[1, 0, 0]),
            Err(Error::Contradiction(0))
        ));
    }

    #[test]
    fn residual_matches_stopping_set_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let inst = if trial % 2 == 0 { small_ldpc(trial) } else { small_block(trial) };
            let h = extract_parity_matrix(&inst);
            let cw = random_codeword(&h, &mut rng);
            let erased = random_erasures(inst.n(), 11, &mut rng);
            let out = decode_erasures(&inst, &erased, &cw).unwrap();
            let oracle = brute_residual(&inst, &erased);
            for v in 0..inst.n() {
                let residual = out.posterior[v] == 0.0;
                assert_eq!(residual, oracle[v], "trial {trial} var {v}");
                if !residual {
                    assert_eq!(out.hard_decisions[v], cw[v]);
                }
            }
        }
    }

    #[test]
    fn bp_matches_peeling_on_erasures() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..100 {
            let inst = if trial % 2 == 0 { small_ldpc(100 + trial) } else { small_block(100 + trial) };
            let h = extract_parity_matrix(&inst);
            let cw = random_codeword(&h, &mut rng);
            let k = rng.gen_range(0..inst.n());
            let erased = random_erasures(inst.n(), k, &mut rng);
            let peel = decode_erasures(&inst, &erased, &cw).unwrap();
            let bp = decode(&inst, &erasure_llrs(&erased, &cw), &DecoderConfig::default()).unwrap();
            assert_eq!(bp.hard_decisions, peel.hard_decisions, "trial {trial}");
            assert_eq!(bp.residual_erasures, peel.residual_erasures);
            assert_eq!(bp.converged, peel.converged);
        }
    }

    #[test]
    fn sign_flip_flips_posteriors_on_even_parity_codes() {
        let inst = build_random_ldpc(
            &DegreeDistribution::single(2).unwrap(),
            &DegreeDistribution::single(4).unwrap(),
            24,
            9,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let llr: Vec<f64> = (0..inst.n()).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let neg: Vec<f64> = llr.iter().map(|v| -v).collect();
        let cfg = DecoderConfig { max_iterations: 5, stop_on_valid: false, ..Default::default() };
        let a = decode(&inst, &llr, &cfg).unwrap();
        let b = decode(&inst, &neg, &cfg).unwrap();
        for (x, y) in a.posterior.iter().zip(&b.posterior) {
            assert!((x + y).abs() < 1e-9);
        }
    }

    fn random_codeword(h: &crate::gf2::SparseBinMatrix, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let mut word = crate::gf2::BitVec::zeros(h.num_cols());
        for b in h.kernel_basis() {
            if rng.gen_bool(0.5) {
                word.xor_assign(&b);
            }
        }
        word.to_bits()
    }

    fn random_erasures(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
        let mut erased = vec![false; n];
        for v in rand::seq::index::sample(rng, n, k.min(n)) {
            erased[v] = true;
        }
        erased
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn removing_an_erasure_never_grows_the_residual(seed in 0u64..1000, mask in any::<u32>(), drop in 0usize..24) {
            let inst = small_ldpc(seed);
            let zeros = vec![0u8; inst.n()];
            let mut erased: Vec<bool> = (0..inst.n()).map(|v| mask >> v & 1 == 1).collect();
            let before = decode_erasures(&inst, &erased, &zeros).unwrap();
            erased[drop % inst.n()] = false;
            let after = decode_erasures(&inst, &erased, &zeros).unwrap();
            for v in 0..inst.n() {
                prop_assert!(!(after.posterior[v] == 0.0 && before.posterior[v] != 0.0));
            }
        }
    }
}
