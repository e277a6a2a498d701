//! Exhaustive check of the subgroup ↔ fixed-subspace correspondence on one
//! group, plus randomized recovery trials.

use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::galois::{check_closure, closure, decompose_R, random_block_vector, recover_subgroup, GaloisContext};
use crate::group::{enumerate_subgroups, Group, Subgroup};
use crate::linalg::{RngSeed, Subspace};
use crate::rep::{fixed_dim_by_character, fixed_subspace};

pub const DEFAULT_TRIALS: usize = 25;
const TRIAL_STREAM: u64 = 0x7a1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceDims {
    /// `dim M^H`.
    pub fixed: usize,
    /// `dim (M^H ∩ M_χ)` per block.
    pub components: Vec<usize>,
    /// `(1/|H|) Σ_h χ(h)` per block.
    pub by_character: Vec<usize>,
    /// `dim S`, present when recovery reached that stage.
    pub s: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupResult {
    pub subgroup: Vec<usize>,
    pub closure_ok: bool,
    pub recovered: Option<Vec<usize>>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub dims: SubspaceDims,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    /// Blocks of `M` the random seed vector is supported on.
    pub support: Vec<usize>,
    pub dim: usize,
    pub recovered: Option<Vec<usize>>,
    pub fixed_match: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub group_order: usize,
    pub subgroup_count: usize,
    pub hom_count: usize,
    pub seed: u64,
    pub tol: f64,
    pub results: Vec<SubgroupResult>,
    pub random_trials: Vec<TrialResult>,
    pub injectivity_ok: bool,
    pub antitone_ok: bool,
    pub ok: bool,
}

impl VerificationReport {
    /// Key-sorted pretty JSON; identical inputs give identical bytes.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

fn check_subgroup(ctx: &GaloisContext, h: &Subgroup, fixed: &Subspace) -> SubgroupResult {
    let by_character = (0..ctx.table.len())
        .map(|r| fixed_dim_by_character(&ctx.table, h, r).unwrap_or(usize::MAX))
        .collect();
    let mut result = SubgroupResult {
        subgroup: h.members().to_vec(),
        closure_ok: false,
        recovered: None,
        matched: false,
        dims: SubspaceDims {
            fixed: fixed.dim(),
            components: Vec::new(),
            by_character,
            s: None,
        },
        error: None,
    };
    let r = match decompose_R(fixed, &ctx.module, ctx.tol) {
        Ok(r) => r,
        Err(e) => {
            result.error = Some(e.to_string());
            return result;
        }
    };
    result.dims.components = r.component_dims();
    result.closure_ok = check_closure(&r, &ctx.homs).is_ok();
    match recover_subgroup(&r, ctx) {
        Ok(cert) => {
            result.dims.s = Some(cert.s_dim);
            result.matched = cert.subgroup == *h && cert.fixed_match && result.dims.components == result.dims.by_character;
            result.recovered = Some(cert.subgroup.members().to_vec());
        }
        Err(e) => result.error = Some(e.to_string()),
    }
    result
}

fn run_trial<R: Rng>(ctx: &GaloisContext, rng: &mut R, trial: usize, subgroups: &[Subgroup]) -> TrialResult {
    let blocks = ctx.module.block_count();
    // Random nonempty set of nontrivial blocks (just the trivial one for G = 1).
    let candidates: Vec<usize> = (1..blocks).collect();
    let mut support: Vec<usize> = candidates.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    if support.is_empty() {
        support.push(*candidates.choose(rng).unwrap_or(&0));
    }
    let v = random_block_vector(rng, &ctx.module, &support);
    let mut result = TrialResult {
        trial,
        support,
        dim: 0,
        recovered: None,
        fixed_match: false,
        error: None,
    };
    let seed_space = match Subspace::span(ctx.module.total_dim(), [&v], ctx.tol) {
        Ok(s) => s,
        Err(e) => {
            result.error = Some(e.to_string());
            return result;
        }
    };
    let outcome = closure(&seed_space, &ctx.module, &ctx.homs, ctx.tol).and_then(|r| {
        let dim = r.space.dim();
        recover_subgroup(&r, ctx).map(|cert| (dim, cert))
    });
    match outcome {
        Ok((dim, cert)) => {
            result.dim = dim;
            result.fixed_match = cert.fixed_match && subgroups.contains(&cert.subgroup);
            result.recovered = Some(cert.subgroup.members().to_vec());
        }
        Err(e) => result.error = Some(e.to_string()),
    }
    result
}

/// Builds `M`, then for every subgroup `H` checks that `M^H` is closed and
/// recovers exactly `H`, that `H ↦ M^H` is injective and order-reversing in
/// both directions, and runs `trials` random closure-and-recover rounds.
pub fn verify_galois(group: Group, seed: RngSeed, tol: f64, trials: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let ctx = GaloisContext::new(group, seed, tol)?;
    log::info!(
        "built M (dim {}) and {} intertwiners in {:?}",
        ctx.module.total_dim(),
        ctx.homs.len(),
        started.elapsed()
    );
    let subgroups = enumerate_subgroups(&ctx.group);
    let fixed: Vec<Subspace> = subgroups
        .iter()
        .map(|h| fixed_subspace(&ctx.module, h))
        .collect::<Result<_>>()?;

    let t = Instant::now();
    let results: Vec<SubgroupResult> = subgroups
        .iter()
        .zip(&fixed)
        .map(|(h, f)| check_subgroup(&ctx, h, f))
        .collect();
    log::info!("{} subgroup round trips in {:?}", subgroups.len(), t.elapsed());

    let mut injectivity_ok = true;
    let mut antitone_ok = true;
    for i in 0..subgroups.len() {
        for j in 0..subgroups.len() {
            if i != j && fixed[i].equal(&fixed[j])? {
                injectivity_ok = false;
            }
            let sub = subgroups[i].is_subset_of(&subgroups[j]);
            let sup_space = fixed[i].contains_subspace(&fixed[j])?;
            if sub != sup_space {
                antitone_ok = false;
            }
        }
    }

    let t = Instant::now();
    let mut rng = seed.rng(TRIAL_STREAM);
    let random_trials: Vec<TrialResult> = (0..trials)
        .map(|k| run_trial(&ctx, &mut rng, k, &subgroups))
        .collect();
    log::info!("{trials} random trials in {:?}", t.elapsed());

    let ok = injectivity_ok
        && antitone_ok
        && results.iter().all(|r| r.closure_ok && r.matched)
        && random_trials.iter().all(|t| t.fixed_match && t.error.is_none());
    Ok(VerificationReport {
        group_order: ctx.group.order(),
        subgroup_count: subgroups.len(),
        hom_count: ctx.homs.len(),
        seed: seed.0,
        tol,
        results,
        random_trials,
        injectivity_ok,
        antitone_ok,
        ok,
    })
}
