//! Finite products of L∞-algebras.
//!
//! The product space carries the generators of every factor, renamed
//! `name@label`. Taylor coefficients act factorwise; words mixing two
//! factors are sent to zero.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{Element, Generator, GradedSpace, LinearMap, Word};
use crate::linfty::{LInftyMorphism, LInftyStructure, Table};
use crate::twisting::{mc_check, push_mc, twist_morphism, twist_structure, IdentityCheck, TwistCandidate};

/// Where the generators of each factor sit in the product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    labels: Vec<String>,
    factors: Vec<Arc<GradedSpace>>,
    space: Arc<GradedSpace>,
    embeddings: Vec<Vec<usize>>,
}

impl ProductSpace {
    /// Product of labelled spaces; its order is `max N_i` unless a larger
    /// one is requested.
    pub fn new(labels: Vec<String>, factors: Vec<Arc<GradedSpace>>, order: Option<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if labels.len() != factors.len() {
            return Err(Error::Shape("one label per factor".into()));
        }
        let max = factors.iter().map(|s| s.nilpotency()).max().unwrap_or(1);
        let n = match order {
            Some(n) if n < max => {
                return Err(Error::NilpotencyMismatch(format!(
                    "product order {n} is below a factor order {max}"
                )))
            }
            Some(n) => n,
            None => max,
        };
        let gens = labels.iter().zip(&factors).flat_map(|(label, s)| {
            s.generators()
                .iter()
                .map(move |g| Generator::new(format!("{}@{label}", g.name), g.degree, g.filtration))
        });
        let space = Arc::new(GradedSpace::new(gens, n)?);
        let embeddings = labels
            .iter()
            .zip(&factors)
            .map(|(label, s)| {
                (0..s.dim())
                    .map(|i| space.index_of(&format!("{}@{label}", s.name(i))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductSpace {
            labels,
            factors,
            space,
            embeddings,
        })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn factor(&self, i: usize) -> &Arc<GradedSpace> {
        &self.factors[i]
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownGenerator(format!("factor `{label}`")))
    }

    /// Global index of generator `g` of factor `i`.
    pub fn embed_index(&self, i: usize, g: usize) -> usize {
        self.embeddings[i][g]
    }

    pub fn embed(&self, i: usize, e: &Element) -> Element {
        Element::from_terms(e.iter().map(|(g, c)| (self.embeddings[i][g], c.clone())))
    }

    /// The slot `f(i)` of a product element.
    pub fn restrict(&self, i: usize, e: &Element) -> Element {
        Element::from_terms(
            self.embeddings[i]
                .iter()
                .enumerate()
                .map(|(g, &global)| (g, e.coeff(global))),
        )
    }

    /// A factor word as a signed canonical product word (the basis orders
    /// may differ).
    pub fn embed_word(&self, i: usize, w: &Word) -> Option<(Word, crate::graded::Sign)> {
        let factors: Vec<usize> = w.iter().map(|&g| self.embeddings[i][g]).collect();
        let (word, sign) = self.space.normalize(&factors).expect("valid indices")?;
        self.space.word_survives(&word).then_some((word, sign))
    }

    /// Embeds a factor table, re-signing words whose order changed.
    fn embed_table(&self, i: usize, table: &Table, embed_values: bool) -> Table {
        let mut out = Table::new();
        for (w, v) in table {
            let Some((word, sign)) = self.embed_word(i, w) else {
                continue;
            };
            let value = if embed_values { self.embed(i, v) } else { v.clone() };
            let entry = out.entry(word).or_default();
            entry.add(&sign.apply_element(&value));
        }
        out
    }
}

/// A product of L∞-algebras together with its assembled structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStructure {
    space: ProductSpace,
    factors: Vec<Arc<LInftyStructure>>,
    assembled: Arc<LInftyStructure>,
}

impl ProductStructure {
    pub fn new(labels: Vec<String>, factors: Vec<Arc<LInftyStructure>>) -> Result<Self> {
        Self::with_order(labels, factors, None)
    }

    pub fn with_order(labels: Vec<String>, factors: Vec<Arc<LInftyStructure>>, order: Option<u32>) -> Result<Self> {
        let space = ProductSpace::new(
            labels,
            factors.iter().map(|q| q.space().clone()).collect(),
            order,
        )?;
        let mut table = Table::new();
        for (i, q) in factors.iter().enumerate() {
            for (w, v) in space.embed_table(i, q.table(), true) {
                table.entry(w).or_default().add(&v);
            }
        }
        let cap = factors.iter().map(|q| q.arity_cap()).max().unwrap_or(0);
        let assembled = Arc::new(LInftyStructure::new(space.space.clone(), table, cap)?);
        Ok(ProductStructure {
            space,
            factors,
            assembled,
        })
    }

    pub fn product_space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.space.space()
    }

    pub fn factors(&self) -> &[Arc<LInftyStructure>] {
        &self.factors
    }

    pub fn assembled(&self) -> &Arc<LInftyStructure> {
        &self.assembled
    }

    pub fn labels(&self) -> &[String] {
        self.space.labels()
    }

    /// The strict projection `pr^i(f) = f(i)`.
    pub fn projection(&self, i: usize) -> Result<LInftyMorphism> {
        if i >= self.factors.len() {
            return Err(Error::Shape(format!("no factor {i}")));
        }
        let f = LinearMap::from_images(
            (0..self.factors[i].space().dim()).map(|g| (self.space.embed_index(i, g), Element::generator(g))),
        );
        LInftyMorphism::strict(self.assembled.clone(), self.factors[i].clone(), &f)
    }

    /// The element `(i ↦ e_i)`.
    pub fn assemble_element(&self, parts: &[Element]) -> Result<Element> {
        if parts.len() != self.factors.len() {
            return Err(Error::Shape("one element per factor".into()));
        }
        let mut out = Element::zero();
        for (i, e) in parts.iter().enumerate() {
            out.add(&self.space.embed(i, e));
        }
        Ok(out)
    }
}

/// The unique morphism `L → ∏ K_i` with `pr^i ∘ F = F_i`.
pub fn product_morphism(target: &ProductStructure, family: &[LInftyMorphism]) -> Result<LInftyMorphism> {
    if family.len() != target.factors.len() {
        return Err(Error::Shape("one morphism per factor".into()));
    }
    let source = family[0].source().clone();
    let mut table = Table::new();
    for (i, f) in family.iter().enumerate() {
        if *f.source() != source {
            return Err(Error::SpaceMismatch("the family needs a common source".into()));
        }
        if *f.target() != target.factors[i] {
            return Err(Error::SpaceMismatch(format!(
                "morphism {i} does not land in factor `{}`",
                target.labels()[i]
            )));
        }
        for (w, v) in f.table() {
            table.entry(w.clone()).or_default().add(&target.space.embed(i, v));
        }
    }
    let cap = family.iter().map(LInftyMorphism::arity_cap).max().unwrap_or(1);
    LInftyMorphism::new(source, target.assembled.clone(), table, cap)
}

/// `∏ F_i : ∏ L_i → ∏ K_i`, i.e. the product morphism of `F_i ∘ pr^i`.
pub fn product_of_morphisms(
    source: &ProductStructure,
    target: &ProductStructure,
    family: &[LInftyMorphism],
) -> Result<LInftyMorphism> {
    if family.len() != source.factors.len() || family.len() != target.factors.len() {
        return Err(Error::Shape("one morphism per factor".into()));
    }
    let mut table = Table::new();
    for (i, f) in family.iter().enumerate() {
        if *f.source() != source.factors[i] || *f.target() != target.factors[i] {
            return Err(Error::SpaceMismatch(format!("morphism {i} does not match its factors")));
        }
        for (w, v) in f.table() {
            let Some((word, sign)) = source.space.embed_word(i, w) else {
                continue;
            };
            let value = sign.apply_element(&target.space.embed(i, v));
            table.entry(word).or_default().add(&value);
        }
    }
    let cap = family.iter().map(LInftyMorphism::arity_cap).max().unwrap_or(1);
    LInftyMorphism::new(source.assembled.clone(), target.assembled.clone(), table, cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotMc {
    pub label: String,
    pub maurer_cartan: bool,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductTwistReport {
    pub checks: Vec<IdentityCheck>,
    pub slots: Vec<SlotMc>,
    pub global_maurer_cartan: bool,
    pub global_residual: String,
}

impl ProductTwistReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn claim(identity: &str, holds: bool, left: impl FnOnce() -> String, right: impl FnOnce() -> String) -> IdentityCheck {
    let (left, right) = if holds {
        (String::new(), String::new())
    } else {
        (left(), right())
    };
    IdentityCheck {
        identity: identity.into(),
        holds,
        left,
        right,
    }
}

/// Verifies, for `π = (i ↦ π_i)`: the twisted product is the product of the
/// twists; the twist of `∏F^i` is `∏(F^i)^{π_i}` (when `maps` is given);
/// and the MC residual of `π` is the tuple of slot residuals, so `π` is MC
/// iff every `π_i` is.
pub fn assemble_and_twist(
    product: &ProductStructure,
    pis: &[TwistCandidate],
    maps: Option<(&ProductStructure, &[LInftyMorphism])>,
) -> Result<ProductTwistReport> {
    let n = product.factors.len();
    if pis.len() != n {
        return Err(Error::Shape("one twist candidate per factor".into()));
    }
    let pi = TwistCandidate::new(
        product.space(),
        product.assemble_element(&pis.iter().map(|p| p.element().clone()).collect::<Vec<_>>())?,
    )?;
    let space = product.space();
    let mut checks = Vec::new();

    let twisted_factors = product
        .factors
        .iter()
        .zip(pis)
        .map(|(q, p)| twist_structure(q, p).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let of_twists = ProductStructure::with_order(product.labels().to_vec(), twisted_factors.clone(), Some(space.nilpotency()))?;
    let twist_of = twist_structure(&product.assembled, &pi)?;
    checks.push(claim(
        "(∏Q^i)^π = ∏(Q^i)^(π_i)",
        twist_of.table() == of_twists.assembled.table(),
        || format!("{:?}", twist_of.table()),
        || format!("{:?}", of_twists.assembled.table()),
    ));

    if let Some((target, family)) = maps {
        let prod = product_of_morphisms(product, target, family)?;
        let twisted = twist_morphism(&prod, &pi)?;
        let pushed = family
            .iter()
            .zip(pis)
            .map(|(f, p)| push_mc(f, p))
            .collect::<Result<Vec<_>>>()?;
        let twisted_targets = target
            .factors
            .iter()
            .zip(&pushed)
            .map(|(k, p)| twist_structure(k, p).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let twisted_target = ProductStructure::with_order(
            target.labels().to_vec(),
            twisted_targets,
            Some(target.space().nilpotency()),
        )?;
        let pieces = family
            .iter()
            .zip(pis)
            .map(|(f, p)| twist_morphism(f, p))
            .collect::<Result<Vec<_>>>()?;
        let assembled = product_of_morphisms(&of_twists, &twisted_target, &pieces)?;
        checks.push(claim(
            "(∏F^i)^π = ∏(F^i)^(π_i)",
            twisted.table() == assembled.table() && twisted.target() == assembled.target(),
            || format!("{:?}", twisted.table()),
            || format!("{:?}", assembled.table()),
        ));
    }

    let mut slots = Vec::new();
    let mut residuals = Vec::new();
    for (i, (q, p)) in product.factors.iter().zip(pis).enumerate() {
        let (ok, residual, _) = mc_check(q, p)?;
        slots.push(SlotMc {
            label: product.labels()[i].clone(),
            maurer_cartan: ok,
            residual: residual.format(q.space()),
        });
        residuals.push(residual);
    }
    let (global_ok, global_residual, _) = mc_check(&product.assembled, &pi)?;
    let tuple = product.assemble_element(&residuals)?;
    checks.push(claim(
        "MC residual of π = (i ↦ residual of π_i)",
        global_residual == tuple && global_ok == slots.iter().all(|s| s.maurer_cartan),
        || global_residual.format(space),
        || tuple.format(space),
    ));
    Ok(ProductTwistReport {
        checks,
        slots,
        global_maurer_cartan: global_ok,
        global_residual: global_residual.format(space),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::testing::{candidate, fix_a, fix_b};

    fn labels(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_products_are_rejected() {
        assert_eq!(
            ProductStructure::new(vec![], vec![]).unwrap_err(),
            Error::EmptyIndexSet
        );
    }

    #[test]
    fn singleton_product_is_a_copy() {
        let q = fix_b();
        let p = ProductStructure::new(labels(&["U"]), vec![q.clone()]).unwrap();
        let pr = p.projection(0).unwrap();
        assert!(pr.check(4).unwrap().passed());
        let back = product_morphism(&p, &[LInftyMorphism::identity(q.clone())]).unwrap();
        let round = back.then(&pr).unwrap();
        assert_eq!(round.table(), LInftyMorphism::identity(q).table());
    }

    #[test]
    fn two_copies_of_fix_a_are_block_diagonal() {
        let q = fix_a();
        let p = ProductStructure::new(labels(&["1", "2"]), vec![q.clone(), q]).unwrap();
        let s = p.space();
        let d = p.assembled().linear_part();
        for slot in ["1", "2"] {
            let a = s.index_of(&format!("a@{slot}")).unwrap();
            let b = s.index_of(&format!("b@{slot}")).unwrap();
            assert_eq!(d.image(a), Element::generator(b));
        }
        assert_eq!(d.images().count(), 2);
        assert!(p.assembled().check_square_zero(3).unwrap().passed());
        for i in 0..2 {
            assert!(p.projection(i).unwrap().check(3).unwrap().passed());
        }
    }

    #[test]
    fn curvature_is_the_tuple_of_curvatures() {
        let p = ProductStructure::new(labels(&["flat", "curved"]), vec![fix_a(), fix_b()]).unwrap();
        let s = p.space();
        let c = s.index_of("c@curved").unwrap();
        assert_eq!(p.assembled().curvature(), Element::term(c, int(-1)));
        assert!(p.assembled().check_square_zero(4).unwrap().passed());
    }

    #[test]
    fn universal_property_recovers_the_family() {
        let q = fix_b();
        let p = ProductStructure::new(labels(&["U", "V"]), vec![q.clone(), q.clone()]).unwrap();
        let id = LInftyMorphism::identity(q.clone());
        let diag = product_morphism(&p, &[id.clone(), id.clone()]).unwrap();
        assert!(diag.check(4).unwrap().passed());
        for i in 0..2 {
            assert_eq!(diag.then(&p.projection(i).unwrap()).unwrap().table(), id.table());
        }
    }

    #[test]
    fn twisted_product_of_fix_b() {
        let q = fix_b();
        let p = ProductStructure::new(labels(&["U", "V"]), vec![q.clone(), q.clone()]).unwrap();
        let id = LInftyMorphism::identity(q.clone());
        let x = candidate(&q, "x");
        let r = assemble_and_twist(&p, &[x.clone(), x.clone()], Some((&p, &[id.clone(), id.clone()]))).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.global_maurer_cartan);
        let zero = TwistCandidate::zero();
        let r = assemble_and_twist(&p, &[zero.clone(), zero], Some((&p, &[id.clone(), id]))).unwrap();
        assert!(r.passed());
        assert!(!r.global_maurer_cartan);
    }

    #[test]
    fn non_mc_slot_is_localized() {
        let q = fix_b();
        let p = ProductStructure::new(labels(&["U", "V"]), vec![q.clone(), q.clone()]).unwrap();
        let x = candidate(&q, "x");
        let half = TwistCandidate::new(q.space(), x.element().scaled(&crate::scalar::frac(1, 2))).unwrap();
        let r = assemble_and_twist(&p, &[x, half], None).unwrap();
        assert!(r.passed());
        assert!(!r.global_maurer_cartan);
        assert!(r.slots[0].maurer_cartan && !r.slots[1].maurer_cartan);
        assert!(r.global_residual.contains("c@V") && !r.global_residual.contains("c@U"));
    }
}
