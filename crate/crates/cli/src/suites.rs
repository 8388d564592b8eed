//! Seeded randomized suites. Instance `i` of a run with seed `s` is drawn
//! from a generator seeded with `s + i`, so any failure can be replayed on
//! its own.

use std::collections::BTreeMap;

use linfty::modules::{check_module_twist_consistency, check_triangle_twist_consistency, module_from_morphism};
use linfty::random::{candidate, conjugate, curved_dgla, dg_module, ladder, Instance};
use linfty::resolution::{prop_key_pipeline, Verdict};
use linfty::twisting::{check_twist_composition, mc_check, mc_preservation, push_mc, twist_morphism, twist_structure};
use linfty::{LInftyMorphism, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const VERIFY_ARITY: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteFailure {
    pub instance: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub instances: u64,
    pub failures: Vec<SuiteFailure>,
    /// Named tallies, e.g. how many ladders met the hypotheses.
    pub tallies: BTreeMap<String, u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `check` on `count` instances; `Ok(Err(reason))` is a mathematical
/// failure, and so is an error from the library.
fn run(
    seed: u64,
    count: u64,
    mut check: impl FnMut(&mut ChaCha8Rng, u64, &mut BTreeMap<String, u64>) -> Result<std::result::Result<(), String>>,
) -> SuiteReport {
    let mut failures = Vec::new();
    let mut tallies = BTreeMap::new();
    for i in 0..count {
        let instance = seed.wrapping_add(i);
        let mut rng = ChaCha8Rng::seed_from_u64(instance);
        let reason = match check(&mut rng, i, &mut tallies) {
            Ok(Ok(())) => continue,
            Ok(Err(reason)) => reason,
            Err(e) => e.to_string(),
        };
        failures.push(SuiteFailure { instance, reason });
    }
    SuiteReport {
        seed,
        instances: count,
        failures,
        tallies,
    }
}

fn fail_unless(ok: bool, reason: &str) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(reason.into())
    }
}

/// A genuinely non-strict instance: a two-step curved dgla conjugated by a
/// random automorphism, with the automorphism.
fn instance(rng: &mut ChaCha8Rng, i: u64) -> Result<(Instance, Instance, LInftyMorphism)> {
    let base = curved_dgla(rng, i % 2 == 1)?;
    let (moved, f) = conjugate(rng, &base)?;
    Ok((base, moved, f))
}

/// Twisting by arbitrary proper degree-0 elements keeps `Q² = 0`, and
/// twisting back by `−π` recovers `Q`.
pub fn twisting(seed: u64, count: u64) -> SuiteReport {
    run(seed, count, |rng, i, _| {
        let (_, moved, _) = instance(rng, i)?;
        let q = &moved.structure;
        for pi in [candidate(rng, q.space()), moved.pi.clone()] {
            let t = twist_structure(q, &pi)?;
            if !t.check_square_zero(VERIFY_ARITY)?.passed() {
                return Ok(Err(format!("Q^π is not square zero for π = {}", pi.element().format(q.space()))));
            }
            if twist_structure(&t, &pi.neg())?.table() != q.table() {
                return Ok(Err("(Q^π)^(−π) differs from Q".into()));
            }
        }
        Ok(Ok(()))
    })
}

/// The two MC routes agree, MC is equivalent to a flat twist, and MC
/// elements push forward along morphisms to MC elements with `F^π` a
/// morphism.
pub fn maurer_cartan(seed: u64, count: u64) -> SuiteReport {
    run(seed, count, |rng, i, tallies| {
        let (base, moved, f) = instance(rng, i)?;
        let q = &moved.structure;
        let perturbed = moved.pi.plus(&candidate(rng, q.space()));
        for pi in [&moved.pi, &perturbed] {
            let (is_mc, _, report) = mc_check(q, pi)?;
            if !report.routes_agree {
                return Ok(Err("MC routes disagree".into()));
            }
            if is_mc != twist_structure(q, pi)?.is_flat() {
                return Ok(Err("MC does not match flatness of the twist".into()));
            }
            *tallies.entry(if is_mc { "mc" } else { "not_mc" }.into()).or_insert(0) += 1;
        }
        if !mc_check(q, &moved.pi)?.0 {
            return Ok(Err("transported MC element is not MC".into()));
        }
        // push_mc itself verifies F(exp π) = exp(π_F)
        push_mc(&f, &base.pi)?;
        if !mc_preservation(&f, &base.pi)? {
            return Ok(Err("π_F is not MC".into()));
        }
        let f_pi = twist_morphism(&f, &base.pi)?;
        Ok(fail_unless(f_pi.check(VERIFY_ARITY)?.passed(), "F^π is not an L∞-morphism"))
    })
}

/// All composition identities for twisting, with `B` an arbitrary second
/// element.
pub fn composition(seed: u64, count: u64) -> SuiteReport {
    run(seed, count, |rng, i, _| {
        let (base, moved, f) = instance(rng, i)?;
        let (_, g) = conjugate(rng, &moved)?;
        let b = candidate(rng, base.structure.space());
        let report = check_twist_composition(&f, &g, &base.pi, &b)?;
        Ok(match report.checks.iter().find(|c| !c.holds) {
            None => Ok(()),
            Some(c) => Err(format!("{} fails", c.identity)),
        })
    })
}

/// Modules from dg modules and from morphisms are square zero, and twisting
/// commutes with passing to the module along a morphism or triangle.
pub fn modules(seed: u64, count: u64) -> SuiteReport {
    run(seed, count, |rng, i, _| {
        let (base, moved, f) = instance(rng, i)?;
        let dg = dg_module(rng, &base.structure)?;
        if !dg.check_square_zero(VERIFY_ARITY)?.passed() {
            return Ok(Err("dg module is not square zero".into()));
        }
        if !module_from_morphism(&f)?.check_square_zero(VERIFY_ARITY)?.passed() {
            return Ok(Err("module along F is not square zero".into()));
        }
        let report = check_module_twist_consistency(&f, &base.pi)?;
        if let Some(c) = report.checks.iter().find(|c| !c.holds) {
            return Ok(Err(format!("{} fails", c.identity)));
        }
        let (_, f2) = conjugate(rng, &moved)?;
        let g = f.then(&f2)?;
        let report = check_triangle_twist_consistency(&g, &f, &f2, &base.pi)?;
        Ok(match report.checks.iter().find(|c| !c.holds) {
            None => Ok(()),
            Some(c) => Err(format!("{} fails", c.identity)),
        })
    })
}

/// Random Čech ladders: the chase and the direct computation never
/// disagree, and confirmed cases are tallied.
pub fn ladders(seed: u64, count: u64) -> SuiteReport {
    run(seed, count, |rng, i, tallies| {
        let (u, pi) = ladder(rng, i % 2 == 0)?;
        let report = prop_key_pipeline(&u, &pi, 3)?;
        let key = match &report.verdict {
            Verdict::QuasiIsomorphism => "quasi_isomorphism",
            Verdict::NotQuasiIsomorphism => "not_quasi_isomorphism",
            Verdict::HypothesesUnmet(_) => "hypotheses_unmet",
            Verdict::RoutesDisagree => "routes_disagree",
        };
        *tallies.entry(key.into()).or_insert(0) += 1;
        Ok(match report.verdict {
            Verdict::RoutesDisagree => Err("chase and direct computation disagree".into()),
            Verdict::NotQuasiIsomorphism => Err("hypotheses hold but the twisted map is not a quasi-isomorphism".into()),
            _ if report.routes_agree == Some(false) => Err("routes disagree".into()),
            _ => Ok(()),
        })
    })
}
