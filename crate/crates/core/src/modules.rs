//! L∞-modules over an L∞-algebra and their morphisms.
//!
//! A module is stored through its components `φ_n(γ_1∨…∨γ_n ⊗ m)`, keyed by
//! a canonical base word and a module generator. The filtration on
//! `S^c(L) ⊗ M` is the total weight: word weight plus the level of `m`, and
//! tensors of total weight `>= N_M` vanish.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{is_odd, Element, GradedSpace, LinearMap, Word};
use crate::homology::{chain_map, cohomology, induced_map_on_cohomology, ChainComplex, CohomologyReport, InducedMapReport};
use crate::linfty::{words_up_to, IdentityReport, LInftyMorphism, LInftyStructure, Residual, WORD_CAP};
use crate::scalar::{format_term, Scalar};
use crate::sym::{multiply, selection_sign, splits, SymElement};
use crate::twisting::{exp_element, push_mc, twist_morphism, twist_structure, IdentityCheck, TwistCandidate};

/// Components keyed by `(w, m)`: the value of `F_{|w|}(w ⊗ m)`.
pub type ModuleTable = BTreeMap<(Word, usize), Element>;

/// A finite combination of tensors `w ⊗ m` in `S^c(L[1]) ⊗ M`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComoduleElement {
    terms: BTreeMap<(Word, usize), Scalar>,
}

impl ComoduleElement {
    pub fn zero() -> Self {
        ComoduleElement::default()
    }

    pub fn term(w: Word, m: usize, c: Scalar) -> Self {
        let mut out = ComoduleElement::zero();
        out.add_term(w, m, c);
        out
    }

    /// `x ⊗ m` for a symmetric element and a module element.
    pub fn tensor(x: &SymElement, m: &Element) -> Self {
        let mut out = ComoduleElement::zero();
        for (w, c) in x.iter() {
            for (i, d) in m.iter() {
                out.add_term(w.clone(), i, c * d);
            }
        }
        out
    }

    pub fn add_term(&mut self, w: Word, m: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (w, m);
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &ComoduleElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for ((w, m), v) in &other.terms {
            self.add_term(w.clone(), *m, v * c);
        }
    }

    pub fn sub(&self, other: &ComoduleElement) -> ComoduleElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word, m: usize) -> Scalar {
        self.terms
            .get(&(w.clone(), m))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The `1 ⊗ M` part.
    pub fn cogenerator_part(&self) -> Element {
        Element::from_terms(
            self.terms
                .iter()
                .filter(|((w, _), _)| w.is_empty())
                .map(|((_, m), c)| (*m, c.clone())),
        )
    }

    pub fn format(&self, base: &GradedSpace, module: &GradedSpace) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for ((w, m), c) in &self.terms {
            let label = format!("{}⊗{}", base.format_word(w), module.name(*m));
            out.push_str(&format_term(c, &label, out.is_empty()));
        }
        out
    }
}

/// Whether `w ⊗ m` survives the truncation of `S^c(L) ⊗ M` at total
/// weight `N_M`.
fn term_survives(base: &GradedSpace, module: &GradedSpace, w: &Word, m: usize) -> bool {
    base.word_weight(w) + module.level(m) < module.nilpotency()
}

fn apply_module_table(table: &ModuleTable, x: &ComoduleElement) -> Element {
    let mut out = Element::zero();
    for (key, c) in x.iter() {
        if let Some(v) = table.get(key) {
            out.add_scaled(v, c);
        }
    }
    out
}

fn format_key(base: &GradedSpace, module: &GradedSpace, (w, m): &(Word, usize)) -> String {
    format!("{}⊗{}", base.format_word(w), module.name(*m))
}

fn validate_module_table(
    base: &GradedSpace,
    source: &GradedSpace,
    target: &GradedSpace,
    table: &ModuleTable,
    degree: i64,
    cap: usize,
    context: &str,
) -> Result<()> {
    for ((w, m), value) in table {
        base.check_canonical(w, context)?;
        source.check_index(*m)?;
        if w.arity() > cap {
            return Err(Error::ArityCapExceeded {
                arity: w.arity(),
                cap,
            });
        }
        let label = format_key(base, source, &(w.clone(), *m));
        let expected = base.word_degree(w) + source.degree(*m) + degree;
        let weight = base.word_weight(w) + source.level(*m);
        for (j, _) in value.iter() {
            target.check_index(j)?;
            if target.degree(j) != expected {
                return Err(Error::DegreeMismatch {
                    context: format!("{context} on {label}"),
                    generator: target.name(j).to_string(),
                    expected,
                    found: target.degree(j),
                });
            }
            if target.level(j) < weight {
                return Err(Error::FiltrationViolation {
                    context: context.to_string(),
                    word: label.clone(),
                    required: weight,
                    found: target.name(j).to_string(),
                    level: target.level(j),
                });
            }
        }
    }
    Ok(())
}

fn check_module_order(base: &LInftyStructure, space: &GradedSpace) -> Result<()> {
    if space.nilpotency() > base.space().nilpotency() {
        return Err(Error::NilpotencyMismatch(format!(
            "a module needs its order ({}) not to exceed the base order ({})",
            space.nilpotency(),
            base.space().nilpotency()
        )));
    }
    Ok(())
}

fn arity_checked(w: &Word) -> Result<()> {
    if w.arity() > WORD_CAP {
        return Err(Error::ArityCapExceeded {
            arity: w.arity(),
            cap: WORD_CAP,
        });
    }
    Ok(())
}

/// An L∞-module `(M, φ)` over a curved L∞-algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LInftyModule {
    base: Arc<LInftyStructure>,
    space: Arc<GradedSpace>,
    table: ModuleTable,
    arity_cap: usize,
}

impl LInftyModule {
    pub fn new(
        base: Arc<LInftyStructure>,
        space: Arc<GradedSpace>,
        table: ModuleTable,
        arity_cap: usize,
    ) -> Result<Self> {
        check_module_order(&base, &space)?;
        let table: ModuleTable = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        validate_module_table(base.space(), &space, &space, &table, 1, arity_cap, "module component")?;
        Ok(LInftyModule {
            base,
            space,
            table,
            arity_cap,
        })
    }

    pub fn zero(base: Arc<LInftyStructure>, space: Arc<GradedSpace>) -> Result<Self> {
        LInftyModule::new(base, space, ModuleTable::new(), 0)
    }

    /// A dg module `(M, b, ρ)` over a dgla: `φ_0(m) = -b m` and
    /// `φ_1(γ⊗m) = -(-1)^{|γ|} ρ(γ)m`, `|γ|` the degree in `L[1]`. The
    /// action is given on pairs (base generator, module generator).
    pub fn from_dg_module(
        base: Arc<LInftyStructure>,
        space: Arc<GradedSpace>,
        b: &LinearMap,
        action: &BTreeMap<(usize, usize), Element>,
    ) -> Result<Self> {
        b.check_graded(&space, &space, 1, "module differential")?;
        let mut table = ModuleTable::new();
        for (m, img) in b.images() {
            table.insert((Word::unit(), m), img.neg());
        }
        for (&(g, m), v) in action {
            base.space().check_index(g)?;
            space.check_index(m)?;
            let w = Word::single(g);
            if !base.space().word_survives(&w) {
                continue;
            }
            let value = if is_odd(base.space().degree(g)) {
                v.clone()
            } else {
                v.neg()
            };
            table.insert((w, m), value);
        }
        LInftyModule::new(base, space, table, 1)
    }

    pub fn base(&self) -> &Arc<LInftyStructure> {
        &self.base
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn table(&self) -> &ModuleTable {
        &self.table
    }

    pub fn arity_cap(&self) -> usize {
        self.arity_cap
    }

    pub fn component(&self, w: &Word, m: usize) -> Element {
        self.table.get(&(w.clone(), m)).cloned().unwrap_or_default()
    }

    /// `φ_0` as a linear map on `M`.
    pub fn differential(&self) -> LinearMap {
        LinearMap::from_images(
            self.table
                .iter()
                .filter(|((w, _), _)| w.is_empty())
                .map(|((_, m), v)| (*m, v.clone())),
        )
    }

    pub fn apply_components(&self, x: &ComoduleElement) -> Element {
        apply_module_table(&self.table, x)
    }

    /// The full coderivation on `w ⊗ m`:
    /// `Q(w)⊗m + Σ ε'ε (w|left) ⊗ φ(w|right ⊗ m)`, with
    /// `ε' = (-1)^{Σ|γ|}` over the left block.
    pub fn coderivation_apply(&self, w: &Word, m: usize) -> Result<ComoduleElement> {
        arity_checked(w)?;
        let base = self.base.space();
        let mut out = ComoduleElement::zero();
        for (u, c) in self.base.coderivation_apply(w)?.iter() {
            if term_survives(base, &self.space, u, m) {
                out.add_term(u.clone(), m, c.clone());
            }
        }
        let degrees: Vec<i64> = w.iter().map(|&i| base.degree(i)).collect();
        for (right, left) in splits(w.arity()) {
            if right.len() > self.arity_cap {
                continue;
            }
            let Some(value) = self.table.get(&(w.select(right.iter().copied()), m)) else {
                continue;
            };
            let mut sign = selection_sign(&left, &right, &degrees);
            let left_degree: i64 = left.iter().map(|&p| degrees[p]).sum();
            if is_odd(left_degree) {
                sign = sign * crate::graded::Sign::Minus;
            }
            let kept = w.select(left.iter().copied());
            for (j, c) in value.iter() {
                if term_survives(base, &self.space, &kept, j) {
                    out.add_term(kept.clone(), j, sign.apply(c.clone()));
                }
            }
        }
        Ok(out)
    }

    pub fn coderivation(&self, x: &ComoduleElement) -> Result<ComoduleElement> {
        let mut out = ComoduleElement::zero();
        for ((w, m), c) in x.iter() {
            out.add_scaled(&self.coderivation_apply(w, *m)?, c);
        }
        Ok(out)
    }

    /// Every `w ⊗ m` (arity `<= max_arity`) with `φ(φ(w⊗m)) ≠ 0`.
    pub fn check_square_zero(&self, max_arity: usize) -> Result<IdentityReport> {
        let words = words_up_to(self.base.space(), max_arity)?;
        let mut failures = Vec::new();
        let mut checked = 0;
        for w in &words {
            for m in 0..self.space.dim() {
                if !term_survives(self.base.space(), &self.space, w, m) {
                    continue;
                }
                checked += 1;
                let phi2 = self.coderivation(&self.coderivation_apply(w, m)?)?;
                if !phi2.is_zero() {
                    failures.push(Residual {
                        input: format_key(self.base.space(), &self.space, &(w.clone(), m)),
                        arity: w.arity(),
                        residual: phi2.format(self.base.space(), &self.space),
                    });
                }
            }
        }
        Ok(IdentityReport {
            identity: "φ∘φ = 0".into(),
            max_arity,
            words_checked: checked,
            failures,
        })
    }

    /// `(M, φ_0)`; defined when the base is flat.
    pub fn complex(&self) -> Result<ChainComplex> {
        if !self.base.is_flat() {
            return Err(Error::FlatnessRequired(
                "module base".into(),
                self.base.curvature().format(self.base.space()),
            ));
        }
        ChainComplex::from_linear_map(&self.space, &self.differential())
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        Ok(cohomology(&self.complex()?).report())
    }

    /// Largest base arity on which components can be nonzero.
    pub fn effective_arity(&self) -> usize {
        self.base
            .space()
            .filtration_arity_bound()
            .map_or(self.arity_cap, |b| b.min(self.arity_cap))
    }
}

fn clip(base: &GradedSpace, raw: usize) -> usize {
    base.filtration_arity_bound().map_or(raw, |b| b.min(raw))
}

/// `K` as a module over `L` along `F: L → K`:
/// `φ_k(w ⊗ m) = pr_K Q_K(F(w) ∨ m)`.
pub fn module_from_morphism(f: &LInftyMorphism) -> Result<LInftyModule> {
    let base = f.source().clone();
    let target = f.target();
    let k_space = target.space().clone();
    let raw = target.arity_cap().saturating_sub(1).saturating_mul(f.arity_cap());
    let cap = clip(base.space(), raw);
    let mut table = ModuleTable::new();
    for w in words_up_to(base.space(), cap)? {
        let fw = f.apply_word(&w)?;
        for m in 0..k_space.dim() {
            let joined = multiply(&k_space, &fw, &SymElement::word(Word::single(m), Scalar::one()));
            let v = target.apply_components(&joined);
            if !v.is_zero() {
                table.insert((w.clone(), m), v);
            }
        }
    }
    LInftyModule::new(base, k_space, table, cap)
}

/// A morphism of L∞-modules over a common base, by Taylor components
/// `F_n(w ⊗ m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMorphism {
    source: Arc<LInftyModule>,
    target: Arc<LInftyModule>,
    table: ModuleTable,
    arity_cap: usize,
}

impl ModuleMorphism {
    pub fn new(
        source: Arc<LInftyModule>,
        target: Arc<LInftyModule>,
        table: ModuleTable,
        arity_cap: usize,
    ) -> Result<Self> {
        if source.base != target.base {
            return Err(Error::SpaceMismatch(
                "module morphisms need a common base algebra".into(),
            ));
        }
        if target.space.nilpotency() > source.space.nilpotency() {
            return Err(Error::NilpotencyMismatch(format!(
                "a module morphism needs the target order ({}) not to exceed the source order ({})",
                target.space.nilpotency(),
                source.space.nilpotency()
            )));
        }
        let table: ModuleTable = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        validate_module_table(
            source.base.space(),
            &source.space,
            &target.space,
            &table,
            0,
            arity_cap,
            "module morphism component",
        )?;
        Ok(ModuleMorphism {
            source,
            target,
            table,
            arity_cap,
        })
    }

    /// Only the zeroth component `F_0 = f`.
    pub fn strict(source: Arc<LInftyModule>, target: Arc<LInftyModule>, f: &LinearMap) -> Result<Self> {
        let table = f
            .images()
            .map(|(m, e)| ((Word::unit(), m), e.clone()))
            .collect();
        ModuleMorphism::new(source, target, table, 0)
    }

    pub fn identity(module: Arc<LInftyModule>) -> Self {
        let dim = module.space.dim();
        ModuleMorphism::strict(module.clone(), module, &LinearMap::identity(dim))
            .expect("identity is always valid")
    }

    pub fn source(&self) -> &Arc<LInftyModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LInftyModule> {
        &self.target
    }

    pub fn table(&self) -> &ModuleTable {
        &self.table
    }

    pub fn arity_cap(&self) -> usize {
        self.arity_cap
    }

    pub fn component(&self, w: &Word, m: usize) -> Element {
        self.table.get(&(w.clone(), m)).cloned().unwrap_or_default()
    }

    /// `F_0` as a linear map.
    pub fn linear_part(&self) -> LinearMap {
        LinearMap::from_images(
            self.table
                .iter()
                .filter(|((w, _), _)| w.is_empty())
                .map(|((_, m), v)| (*m, v.clone())),
        )
    }

    pub fn apply_components(&self, x: &ComoduleElement) -> Element {
        apply_module_table(&self.table, x)
    }

    /// `F(w ⊗ m) = Σ ε (w|left) ⊗ F(w|right ⊗ m)`.
    pub fn apply_term(&self, w: &Word, m: usize) -> Result<ComoduleElement> {
        arity_checked(w)?;
        let base = self.source.base.space();
        let degrees: Vec<i64> = w.iter().map(|&i| base.degree(i)).collect();
        let mut out = ComoduleElement::zero();
        for (right, left) in splits(w.arity()) {
            if right.len() > self.arity_cap {
                continue;
            }
            let Some(value) = self.table.get(&(w.select(right.iter().copied()), m)) else {
                continue;
            };
            let sign = selection_sign(&left, &right, &degrees);
            let kept = w.select(left.iter().copied());
            for (j, c) in value.iter() {
                if term_survives(base, &self.target.space, &kept, j) {
                    out.add_term(kept.clone(), j, sign.apply(c.clone()));
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &ComoduleElement) -> Result<ComoduleElement> {
        let mut out = ComoduleElement::zero();
        for ((w, m), c) in x.iter() {
            out.add_scaled(&self.apply_term(w, *m)?, c);
        }
        Ok(out)
    }

    /// Residuals of `F∘φ = φ̃∘F` on every `w ⊗ m` up to `max_arity`.
    pub fn check(&self, max_arity: usize) -> Result<IdentityReport> {
        let base = self.source.base.space();
        let words = words_up_to(base, max_arity)?;
        let mut failures = Vec::new();
        let mut checked = 0;
        for w in &words {
            for m in 0..self.source.space.dim() {
                if !term_survives(base, &self.source.space, w, m) {
                    continue;
                }
                checked += 1;
                let lhs = self.apply(&self.source.coderivation_apply(w, m)?)?;
                let rhs = self.target.coderivation(&self.apply_term(w, m)?)?;
                let diff = lhs.sub(&rhs);
                if !diff.is_zero() {
                    failures.push(Residual {
                        input: format_key(base, &self.source.space, &(w.clone(), m)),
                        arity: w.arity(),
                        residual: diff.format(base, &self.target.space),
                    });
                }
            }
        }
        Ok(IdentityReport {
            identity: "F∘φ = φ̃∘F".into(),
            max_arity,
            words_checked: checked,
            failures,
        })
    }

    /// `second ∘ self`: `(G∘F)_n(w⊗m) = Σ G(u⊗m')` over the terms of
    /// `F(w⊗m)`.
    pub fn then(&self, second: &ModuleMorphism) -> Result<ModuleMorphism> {
        if *self.target != *second.source {
            return Err(Error::SpaceMismatch(
                "composable module morphisms need matching target and source".into(),
            ));
        }
        let base = self.source.base.space();
        let cap = clip(base, self.arity_cap + second.arity_cap);
        let mut table = ModuleTable::new();
        for w in words_up_to(base, cap)? {
            for m in 0..self.source.space.dim() {
                let v = second.apply_components(&self.apply_term(&w, m)?);
                if !v.is_zero() {
                    table.insert((w.clone(), m), v);
                }
            }
        }
        ModuleMorphism::new(self.source.clone(), second.target.clone(), table, cap)
    }

    /// Whether `F_0` is a quasi-isomorphism of `(M, φ_0) → (M̃, φ̃_0)`; the
    /// base must be flat.
    pub fn is_quasi_iso(&self) -> Result<ModuleQuasiIsoReport> {
        let hs = cohomology(&self.source.complex()?);
        let ht = cohomology(&self.target.complex()?);
        let f = chain_map(&self.source.space, &self.target.space, &self.linear_part())?;
        let induced = induced_map_on_cohomology(&hs, &ht, &f)?;
        Ok(ModuleQuasiIsoReport {
            quasi_isomorphism: induced.is_isomorphism(),
            source: hs.report(),
            target: ht.report(),
            induced: induced.report(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleQuasiIsoReport {
    pub quasi_isomorphism: bool,
    pub source: CohomologyReport,
    pub target: CohomologyReport,
    pub induced: InducedMapReport,
}

/// `F ∘ H = G` compared on Taylor coefficients.
pub fn triangle_commutes(g: &LInftyMorphism, h: &LInftyMorphism, f: &LInftyMorphism) -> Result<bool> {
    if g.source() != h.source() || h.target() != f.source() || f.target() != g.target() {
        return Ok(false);
    }
    Ok(h.then(f)?.table() == g.table())
}

/// The module morphism `ℌ → 𝔊` (modules along `H` and `G`) induced by a
/// commuting triangle `F∘H = G`: `𝓕_n(w⊗m) = pr F(H(w) ∨ m)`.
pub fn module_morphism_from_triangle(
    g: &LInftyMorphism,
    h: &LInftyMorphism,
    f: &LInftyMorphism,
) -> Result<ModuleMorphism> {
    if !triangle_commutes(g, h, f)? {
        let detail = if g.source() != h.source() || h.target() != f.source() || f.target() != g.target() {
            "the morphisms do not form a triangle".to_string()
        } else {
            let fh = h.then(f)?;
            let src = g.source().space();
            let tgt = g.target().space();
            let keys: std::collections::BTreeSet<&Word> = fh.table().keys().chain(g.table().keys()).collect();
            let diffs: Vec<String> = keys
                .into_iter()
                .filter_map(|w| {
                    let d = fh.component(w).sub(&g.component(w));
                    (!d.is_zero()).then(|| format!("{} ↦ {}", src.format_word(w), d.format(tgt)))
                })
                .collect();
            format!("F∘H − G = {{{}}}", diffs.join("; "))
        };
        return Err(Error::DiagramViolation(detail));
    }
    let source = Arc::new(module_from_morphism(h)?);
    let target = Arc::new(module_from_morphism(g)?);
    let h_space = h.target().space();
    let raw = f.arity_cap().saturating_sub(1).saturating_mul(h.arity_cap());
    let cap = clip(g.source().space(), raw);
    let mut table = ModuleTable::new();
    for w in words_up_to(g.source().space(), cap)? {
        let hw = h.apply_word(&w)?;
        for m in 0..h_space.dim() {
            let joined = multiply(h_space, &hw, &SymElement::word(Word::single(m), Scalar::one()));
            let v = f.apply_components(&joined);
            if !v.is_zero() {
                table.insert((w.clone(), m), v);
            }
        }
    }
    ModuleMorphism::new(source, target, table, cap)
}

/// `(exp π ∨ w) ⊗ m`.
fn shifted_term(base: &GradedSpace, e: &SymElement, w: &Word, m: usize) -> ComoduleElement {
    let shifted = multiply(base, e, &SymElement::word(w.clone(), Scalar::one()));
    ComoduleElement::tensor(&shifted, &Element::generator(m))
}

/// `φ^π(X) = e^{-π} φ(e^π X)`, in components
/// `φ^π_k(w⊗m) = Σ_ℓ φ_{k+ℓ}(π^ℓ ∨ w ⊗ m)/ℓ!`.
pub fn twist_module(module: &LInftyModule, pi: &TwistCandidate) -> Result<LInftyModule> {
    let base = module.base.space();
    let twisted_base = Arc::new(twist_structure(&module.base, pi)?);
    let e = exp_element(base, pi);
    let mut table = ModuleTable::new();
    for w in words_up_to(base, module.arity_cap)? {
        for m in 0..module.space.dim() {
            let v = module.apply_components(&shifted_term(base, &e, &w, m));
            if !v.is_zero() {
                table.insert((w.clone(), m), v);
            }
        }
    }
    LInftyModule::new(twisted_base, module.space.clone(), table, module.arity_cap)
}

pub fn twist_module_morphism(f: &ModuleMorphism, pi: &TwistCandidate) -> Result<ModuleMorphism> {
    let base = f.source.base.space();
    let source = Arc::new(twist_module(&f.source, pi)?);
    let target = Arc::new(twist_module(&f.target, pi)?);
    let e = exp_element(base, pi);
    let mut table = ModuleTable::new();
    for w in words_up_to(base, f.arity_cap)? {
        for m in 0..f.source.space.dim() {
            let v = f.apply_components(&shifted_term(base, &e, &w, m));
            if !v.is_zero() {
                table.insert((w.clone(), m), v);
            }
        }
    }
    ModuleMorphism::new(source, target, table, f.arity_cap)
}

fn format_module_table(base: &GradedSpace, source: &GradedSpace, target: &GradedSpace, t: &ModuleTable) -> String {
    let entries: Vec<String> = t
        .iter()
        .map(|(k, v)| format!("{} ↦ {}", format_key(base, source, k), v.format(target)))
        .collect();
    format!("{{{}}}", entries.join("; "))
}

fn identity_check(identity: &str, holds: bool, left: impl FnOnce() -> String, right: impl FnOnce() -> String) -> IdentityCheck {
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

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleConsistencyReport {
    pub checks: Vec<IdentityCheck>,
}

impl ModuleConsistencyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Twisting the module along `F` agrees with the module along `F^π`.
pub fn check_module_twist_consistency(f: &LInftyMorphism, pi: &TwistCandidate) -> Result<ModuleConsistencyReport> {
    let base = f.source().space();
    let k = f.target().space();
    let twisted = twist_module(&module_from_morphism(f)?, pi)?;
    let along = module_from_morphism(&twist_morphism(f, pi)?)?;
    let checks = vec![
        identity_check(
            "base of (φ_F)^π = base of φ_(F^π)",
            twisted.base == along.base,
            || format!("{:?}", twisted.base.table()),
            || format!("{:?}", along.base.table()),
        ),
        identity_check(
            "(φ_F)^π = φ_(F^π)",
            twisted.table == along.table,
            || format_module_table(base, k, k, &twisted.table),
            || format_module_table(base, k, k, &along.table),
        ),
    ];
    Ok(ModuleConsistencyReport { checks })
}

/// The morphism half: for `F∘H = G`, the twisted triangle commutes and its
/// module morphism is the twist of the original one.
pub fn check_triangle_twist_consistency(
    g: &LInftyMorphism,
    h: &LInftyMorphism,
    f: &LInftyMorphism,
    pi: &TwistCandidate,
) -> Result<ModuleConsistencyReport> {
    let base = g.source().space();
    let mid = h.target().space();
    let outer = g.target().space();
    let original = module_morphism_from_triangle(g, h, f)?;
    let twisted = twist_module_morphism(&original, pi)?;
    let pi_h = push_mc(h, pi)?;
    let g_pi = twist_morphism(g, pi)?;
    let h_pi = twist_morphism(h, pi)?;
    let f_pi = twist_morphism(f, &pi_h)?;
    let commutes = triangle_commutes(&g_pi, &h_pi, &f_pi)?;
    let mut checks = vec![identity_check(
        "F^(π_H) ∘ H^π = G^π",
        commutes,
        || "twisted triangle".into(),
        || "does not commute".into(),
    )];
    if commutes {
        let rebuilt = module_morphism_from_triangle(&g_pi, &h_pi, &f_pi)?;
        checks.push(identity_check(
            "(𝓕)^π = 𝓕 of the twisted triangle",
            rebuilt.table == twisted.table && rebuilt.source == twisted.source && rebuilt.target == twisted.target,
            || format_module_table(base, mid, outer, &twisted.table),
            || format_module_table(base, mid, outer, &rebuilt.table),
        ));
    }
    Ok(ModuleConsistencyReport { checks })
}
