//! Seeded generators of small valid instances for the randomized suites.
//!
//! The basic shape is a curved dgla that is two-step nilpotent: generators
//! at level 1 bracket into the higher levels, and everything involving a
//! higher level brackets to zero. Any differential from level 1 upwards and
//! any curvature in the higher levels then satisfies the axioms, and the
//! curvature (or the differential, in the flat variant) is calibrated so a
//! chosen element is Maurer–Cartan. Conjugating by a random non-strict
//! automorphism turns this into a genuine L∞ structure.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cech::{cech_ladder, constant_cech, constant_fiberwise, Cover};
use crate::error::Result;
use crate::graded::{Element, Generator, GradedSpace, LinearMap, Word};
use crate::linfty::{Bracket, LInftyMorphism, LInftyStructure, Table};
use crate::modules::LInftyModule;
use crate::resolution::ResolutionMorphism;
use crate::scalar::int;
use crate::sym::SymElement;
use crate::twisting::{mc_check, push_mc, TwistCandidate};

/// A structure together with one of its Maurer–Cartan elements.
#[derive(Debug, Clone)]
pub struct Instance {
    pub structure: Arc<LInftyStructure>,
    pub pi: TwistCandidate,
}

/// Raw curved Lie data in the unshifted convention, not necessarily
/// satisfying any axiom.
#[derive(Debug, Clone)]
pub struct LieData {
    pub space: Arc<GradedSpace>,
    pub curvature: Element,
    pub differential: LinearMap,
    pub bracket: Bracket,
}

impl LieData {
    pub fn structure(&self) -> Result<LInftyStructure> {
        LInftyStructure::from_curved_lie(self.space.clone(), &self.curvature, &self.differential, &self.bracket)
    }
}

fn coefficient(rng: &mut impl Rng) -> i64 {
    rng.gen_range(-2..=2)
}

/// A random combination of the generators with the given degree and level
/// at least `min_level`.
fn random_element(rng: &mut impl Rng, space: &GradedSpace, degree: i64, min_level: u32) -> Element {
    Element::from_terms(
        (0..space.dim())
            .filter(|&i| space.degree(i) == degree && space.level(i) >= min_level)
            .map(|i| (i, int(coefficient(rng)))),
    )
}

fn random_space(rng: &mut impl Rng) -> Arc<GradedSpace> {
    let n: u32 = rng.gen_range(3..=4);
    let low = rng.gen_range(1..=3);
    let high = rng.gen_range(1..=6 - low);
    let mut gens = Vec::new();
    for i in 0..low {
        // one degree-0 generator at level 1 carries the MC element
        let degree = if i == 0 { 0 } else { rng.gen_range(-1..=0) };
        gens.push(Generator::new(format!("a{i}"), degree, 1));
    }
    for i in 0..high {
        gens.push(Generator::new(format!("b{i}"), rng.gen_range(-1..=1), rng.gen_range(2..n)));
    }
    Arc::new(GradedSpace::new(gens, n).expect("distinct names and levels below the order"))
}

/// Unshifted curved dgla data on a two-step nilpotent space.
fn two_step_data(rng: &mut impl Rng, space: Arc<GradedSpace>) -> LieData {
    let low: Vec<usize> = (0..space.dim()).filter(|&i| space.level(i) == 1).collect();
    let mut bracket = Bracket::new();
    for (p, &i) in low.iter().enumerate() {
        for &j in &low[p..] {
            if i == j && space.degree(i) % 2 != 0 {
                continue;
            }
            let v = random_element(rng, &space, space.degree(i) + space.degree(j) + 1, 2);
            if !v.is_zero() {
                bracket.insert((i, j), v);
            }
        }
    }
    let differential = LinearMap::from_images(
        low.iter()
            .map(|&i| (i, random_element(rng, &space, space.degree(i) + 1, 2))),
    );
    LieData {
        curvature: random_element(rng, &space, 1, 2),
        space,
        differential,
        bracket,
    }
}

/// The degree-0 element `a0 + …` used as the Maurer–Cartan element.
fn random_pi(rng: &mut impl Rng, space: &GradedSpace) -> TwistCandidate {
    let mut e = Element::generator(space.index_of("a0").expect("a0 exists"));
    for i in 0..space.dim() {
        if space.degree(i) == 0 && space.level(i) == 1 && space.name(i) != "a0" {
            e.add_term(i, int(coefficient(rng)));
        }
    }
    TwistCandidate::new(space, e).expect("degree-0 element")
}

/// A two-step curved dgla with a Maurer–Cartan element. With `flat`, the
/// curvature is zero and the differential on `a0` is adjusted instead.
pub fn curved_dgla(rng: &mut impl Rng, flat: bool) -> Result<Instance> {
    let space = random_space(rng);
    let mut data = two_step_data(rng, space.clone());
    let pi = random_pi(rng, &space);
    if flat {
        data.curvature = Element::zero();
    }
    let structure = data.structure()?;
    let (_, residual, _) = mc_check(&structure, &pi)?;
    let mut table = structure.table().clone();
    if flat {
        // Q_1(π) is linear in the coefficient of a0, which is 1
        let a0 = space.index_of("a0")?;
        let mut q1 = structure.component(&Word::single(a0));
        q1.add_scaled(&residual, &int(-1));
        table.insert(Word::single(a0), q1);
    } else {
        let mut q0 = structure.curvature();
        q0.add_scaled(&residual, &int(-1));
        table.insert(Word::unit(), q0);
    }
    table.retain(|_, v| !v.is_zero());
    let structure = Arc::new(LInftyStructure::new(space, table, structure.arity_cap())?);
    Ok(Instance { structure, pi })
}

/// Unconstrained curved Lie data: every generator at level 1 to 3 with
/// order 4, so Jacobi is a genuine condition. Half of the time the data is
/// two-step and hence valid.
pub fn lie_data(rng: &mut impl Rng) -> LieData {
    let dim = rng.gen_range(2..=4);
    let gens: Vec<Generator> = (0..dim)
        .map(|i| Generator::new(format!("g{i}"), rng.gen_range(-1..=1), rng.gen_range(1..=3)))
        .collect();
    let space = Arc::new(GradedSpace::new(gens, 4).expect("distinct names"));
    if rng.gen_bool(0.5) && (0..dim).any(|i| space.level(i) == 1) {
        return two_step_data(rng, space);
    }
    let mut bracket = Bracket::new();
    for i in 0..dim {
        for j in i..dim {
            if i == j && space.degree(i) % 2 != 0 {
                continue;
            }
            let v = random_element(rng, &space, space.degree(i) + space.degree(j) + 1, space.level(i) + space.level(j));
            if !v.is_zero() {
                bracket.insert((i, j), v);
            }
        }
    }
    let differential = LinearMap::from_images(
        (0..dim).map(|i| (i, random_element(rng, &space, space.degree(i) + 1, space.level(i)))),
    );
    LieData {
        curvature: random_element(rng, &space, 1, 1),
        space,
        differential,
        bracket,
    }
}

/// A random degree-0 element at level at least 1, usable as a second
/// twisting element.
pub fn candidate(rng: &mut impl Rng, space: &GradedSpace) -> TwistCandidate {
    TwistCandidate::new(space, random_element(rng, space, 0, 1)).expect("degree-0 element")
}

/// A dg module over a two-step instance (as produced by [`curved_dgla`]):
/// level-0 generators `m*` are sent by `b` and by the level-1 part of the
/// base into level-1-or-higher generators `n*`, on which everything acts
/// by zero.
pub fn dg_module(rng: &mut impl Rng, base: &Arc<LInftyStructure>) -> Result<LInftyModule> {
    let ls = base.space();
    let order = ls.nilpotency();
    let mut gens = Vec::new();
    for i in 0..rng.gen_range(1..=2) {
        gens.push(Generator::new(format!("m{i}"), rng.gen_range(-1..=0), 0));
    }
    for i in 0..rng.gen_range(1..=3) {
        gens.push(Generator::new(format!("n{i}"), rng.gen_range(-1..=1), rng.gen_range(1..order)));
    }
    let space = Arc::new(GradedSpace::new(gens, order)?);
    let low: Vec<usize> = (0..space.dim()).filter(|&i| space.level(i) == 0).collect();
    let b = LinearMap::from_images(
        low.iter()
            .map(|&m| (m, random_element(rng, &space, space.degree(m) + 1, 1))),
    );
    let mut action = BTreeMap::new();
    for g in (0..ls.dim()).filter(|&g| ls.level(g) == 1) {
        for &m in &low {
            let v = random_element(rng, &space, ls.degree(g) + space.degree(m) + 1, 1);
            if !v.is_zero() {
                action.insert((g, m), v);
            }
        }
    }
    LInftyModule::from_dg_module(base.clone(), space, &b, &action)
}

/// A random automorphism of the coalgebra with `F_1 = id`, as a morphism
/// between structureless copies of the space.
fn random_automorphism(rng: &mut impl Rng, space: &Arc<GradedSpace>) -> Result<LInftyMorphism> {
    let bound = space.filtration_arity_bound().unwrap_or(1).min(3);
    let mut table: Table = (0..space.dim()).map(|i| (Word::single(i), Element::generator(i))).collect();
    for w in space.canonical_words(bound) {
        if w.arity() < 2 || rng.gen_bool(0.5) {
            continue;
        }
        let v = random_element(rng, space, space.word_degree(&w), space.word_weight(&w));
        if !v.is_zero() {
            table.insert(w, v);
        }
    }
    let bare = Arc::new(LInftyStructure::zero(space.clone()));
    LInftyMorphism::new(bare.clone(), bare, table, bound.max(1))
}

/// Transports `Q` along a random automorphism `F`: `Q' = F Q F^{-1}`.
/// Returns the new instance and `F` as a morphism from the old structure.
pub fn conjugate(rng: &mut impl Rng, instance: &Instance) -> Result<(Instance, LInftyMorphism)> {
    let q = &instance.structure;
    let space = q.space().clone();
    let f = random_automorphism(rng, &space)?;
    let g = f.inverse()?;
    let bound = space.filtration_arity_bound().unwrap_or(2);
    let mut table = Table::new();
    for w in space.canonical_words(bound) {
        let gw = if w.is_empty() { SymElement::unit() } else { g.apply_word(&w)? };
        let v = f.apply_components(&q.coderivation(&gw)?);
        if !v.is_zero() {
            table.insert(w, v);
        }
    }
    let transported = Arc::new(LInftyStructure::new(space, table, bound.max(1))?);
    let f = LInftyMorphism::new(q.clone(), transported.clone(), f.table().clone(), f.arity_cap())?;
    let pi = push_mc(&f, &instance.pi)?;
    Ok((
        Instance {
            structure: transported,
            pi,
        },
        f,
    ))
}

/// A random cover on 2 or 3 opens whose nerve is closed under faces.
pub fn cover(rng: &mut impl Rng) -> Cover {
    let n = rng.gen_range(2..=3);
    let opens: Vec<String> = (0..n).map(|i| format!("U{i}")).collect();
    let mut pairs: Vec<Vec<String>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.7) {
                pairs.push(vec![opens[i].clone(), opens[j].clone()]);
            }
        }
    }
    if pairs.is_empty() {
        pairs.push(vec![opens[0].clone(), opens[1].clone()]);
    }
    pairs.shuffle(rng);
    let mut intersections = pairs.clone();
    if n == 3 && pairs.len() == 3 && rng.gen_bool(0.5) {
        intersections.push(opens.clone());
    }
    Cover::new(opens, &intersections).expect("nerve closed under faces")
}

/// A ladder between constant Čech resolutions induced by a random
/// automorphism `U`, together with a Maurer–Cartan element of the source.
pub fn ladder(rng: &mut impl Rng, flat: bool) -> Result<(ResolutionMorphism, TwistCandidate)> {
    let source = curved_dgla(rng, flat)?;
    let (target, u) = conjugate(rng, &source)?;
    let cover = cover(rng);
    let fiberwise: BTreeMap<_, _> = constant_fiberwise(&cover, &u);
    let l = constant_cech(cover.clone(), source.structure.clone())?;
    let k = constant_cech(cover, target.structure)?;
    Ok((cech_ladder(&l, &k, &u, &fiberwise)?, source.pi))
}
