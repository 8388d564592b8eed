//! Curved L∞-algebras and L∞-morphisms as Taylor-coefficient tables.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{is_odd, koszul_sign, Element, GradedSpace, LinearMap, Sign, Word};
use crate::homology::{chain_map, cohomology, induced_map_on_cohomology, ChainComplex, CohomologyReport, InducedMapReport};
use crate::linalg::Matrix;
use crate::sym::{multiply, multiply_words, selection_sign, set_partitions, splits, SymElement};

/// Arity up to which identities are verified unless told otherwise.
pub const DEFAULT_VERIFY_ARITY: usize = 4;

/// Largest word arity the coalgebra expansions will handle.
pub const WORD_CAP: usize = 8;

/// Sparse Taylor coefficients keyed by canonical input words; absent keys
/// are zero.
pub type Table = BTreeMap<Word, Element>;

/// A (graded-symmetric) bilinear bracket given on ordered pairs of generator
/// indices, in the unshifted convention.
pub type Bracket = BTreeMap<(usize, usize), Element>;

/// Checks that every entry of a Taylor table lives on a canonical surviving
/// word of bounded arity, has the expected degree and respects the
/// filtration.
pub(crate) fn validate_table(
    source: &GradedSpace,
    target: &GradedSpace,
    table: &Table,
    degree: i64,
    min_arity: usize,
    cap: usize,
    context: &str,
) -> Result<()> {
    for (w, value) in table {
        source.check_canonical(w, context)?;
        if w.arity() > cap {
            return Err(Error::ArityCapExceeded {
                arity: w.arity(),
                cap,
            });
        }
        if w.arity() < min_arity {
            return Err(Error::NonCanonicalWord {
                context: format!("{context} (arity below {min_arity})"),
                word: source.format_word(w),
            });
        }
        let expected = source.word_degree(w) + degree;
        let weight = source.word_weight(w);
        for (j, _) in value.iter() {
            target.check_index(j)?;
            if target.degree(j) != expected {
                return Err(Error::DegreeMismatch {
                    context: format!("{context} on {}", source.format_word(w)),
                    generator: target.name(j).to_string(),
                    expected,
                    found: target.degree(j),
                });
            }
            if target.level(j) < weight {
                return Err(Error::FiltrationViolation {
                    context: context.to_string(),
                    word: source.format_word(w),
                    required: weight,
                    found: target.name(j).to_string(),
                    level: target.level(j),
                });
            }
        }
    }
    Ok(())
}

/// Normalizes a named table entry: `f(b∨a) = v` is stored as
/// `f(a∨b) = ±v`. Entries on vanishing words must be zero.
pub fn table_entry(space: &GradedSpace, factors: &[&str], value: Element) -> Result<Option<(Word, Element)>> {
    match space.normalize_names(factors)? {
        Some((w, sign)) if space.word_survives(&w) => Ok(Some((w, value.scaled(&sign.to_scalar())))),
        _ if value.is_zero() => Ok(None),
        _ => Err(Error::NonCanonicalWord {
            context: "table entry on a vanishing word".into(),
            word: factors.join("∨"),
        }),
    }
}

/// Words of arity `<= max_arity` clipped by the filtration bound and the
/// global word cap.
pub(crate) fn words_up_to(space: &GradedSpace, max_arity: usize) -> Result<Vec<Word>> {
    let bound = space.filtration_arity_bound().map_or(max_arity, |b| b.min(max_arity));
    if bound > WORD_CAP {
        return Err(Error::ArityCapExceeded {
            arity: bound,
            cap: WORD_CAP,
        });
    }
    Ok(space.canonical_words(bound))
}

/// `Σ c · T(u)` over the words of `x`.
pub(crate) fn apply_table(table: &Table, x: &SymElement) -> Element {
    let mut out = Element::zero();
    for (w, c) in x.iter() {
        if let Some(v) = table.get(w) {
            out.add_scaled(v, c);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub input: String,
    pub arity: usize,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub max_arity: usize,
    pub words_checked: usize,
    pub failures: Vec<Residual>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure_arity(&self) -> Option<usize> {
        self.failures.iter().map(|r| r.arity).min()
    }
}

/// A curved L∞-structure on a graded space, all in `L[1]` degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct LInftyStructure {
    space: Arc<GradedSpace>,
    table: Table,
    arity_cap: usize,
}

impl LInftyStructure {
    pub fn new(space: Arc<GradedSpace>, table: Table, arity_cap: usize) -> Result<Self> {
        let table: Table = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        validate_table(&space, &space, &table, 1, 0, arity_cap, "structure component")?;
        Ok(LInftyStructure {
            space,
            table,
            arity_cap,
        })
    }

    pub fn zero(space: Arc<GradedSpace>) -> Self {
        LInftyStructure {
            space,
            table: Table::new(),
            arity_cap: 0,
        }
    }

    /// Curved Lie algebra `(L, R, d, [·,·])` given unshifted: `Q_0(1) = -R`,
    /// `Q_1 = -d`, `Q_2(γ∨μ) = -(-1)^{|γ|}[γ, μ]` with `|γ|` the degree in
    /// `L[1]`.
    pub fn from_curved_lie(
        space: Arc<GradedSpace>,
        curvature: &Element,
        d: &LinearMap,
        bracket: &Bracket,
    ) -> Result<Self> {
        for (i, _) in curvature.iter() {
            space.check_index(i)?;
            if space.degree(i) + 1 != 2 {
                return Err(Error::DegreeMismatch {
                    context: "curvature (unshifted degree)".into(),
                    generator: space.name(i).to_string(),
                    expected: 2,
                    found: space.degree(i) + 1,
                });
            }
        }
        d.check_graded(&space, &space, 1, "differential")?;
        let full = complete_bracket(&space, bracket)?;
        let mut table = Table::new();
        table.insert(Word::unit(), curvature.neg());
        for (i, img) in d.images() {
            table.insert(Word::single(i), img.neg());
        }
        for (&(i, j), v) in &full {
            if i > j {
                continue;
            }
            let w = Word(vec![i, j]);
            if i == j && is_odd(space.degree(i)) || !space.word_survives(&w) {
                if !v.is_zero() {
                    return Err(Error::FiltrationViolation {
                        context: "bracket".into(),
                        word: space.format_word(&w),
                        required: space.word_weight(&w),
                        found: v.format(&space),
                        level: v.filtration_weight(&space),
                    });
                }
                continue;
            }
            let sign = Sign::from_parity(!is_odd(space.degree(i)));
            table.insert(w, sign.apply_element(v));
        }
        LInftyStructure::new(space, table, 2)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn arity_cap(&self) -> usize {
        self.arity_cap
    }

    pub fn component(&self, w: &Word) -> Element {
        self.table.get(w).cloned().unwrap_or_default()
    }

    pub fn curvature(&self) -> Element {
        self.component(&Word::unit())
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    /// `Q_1` as a linear map.
    pub fn linear_part(&self) -> LinearMap {
        LinearMap::from_images(
            self.table
                .iter()
                .filter(|(w, _)| w.arity() == 1)
                .map(|(w, v)| (w.0[0], v.clone())),
        )
    }

    /// `Σ Q_{|u|}(u)` summed over the words of `x`: the cogenerator part of
    /// the coderivation.
    pub fn apply_components(&self, x: &SymElement) -> Element {
        apply_table(&self.table, x)
    }

    /// The coderivation on a canonical word:
    /// `Q(γ_1∨…∨γ_n) = Σ_k Σ_σ ε(σ) Q_k(γ_σ(1)…) ∨ γ_σ(k+1) ∨ …`.
    pub fn coderivation_apply(&self, w: &Word) -> Result<SymElement> {
        if w.arity() > WORD_CAP {
            return Err(Error::ArityCapExceeded {
                arity: w.arity(),
                cap: WORD_CAP,
            });
        }
        let space = &*self.space;
        let degrees: Vec<i64> = w.iter().map(|&i| space.degree(i)).collect();
        let mut out = SymElement::zero();
        for (sel, rest) in splits(w.arity()) {
            if sel.len() > self.arity_cap {
                continue;
            }
            let inner = w.select(sel.iter().copied());
            let Some(value) = self.table.get(&inner) else {
                continue;
            };
            let sign = selection_sign(&sel, &rest, &degrees);
            let tail = w.select(rest.iter().copied());
            for (g, c) in value.iter() {
                if let Some((word, s)) = multiply_words(space, &Word::single(g), &tail) {
                    out.add_term(word, (sign * s).apply(c.clone()));
                }
            }
        }
        Ok(out)
    }

    pub fn coderivation(&self, x: &SymElement) -> Result<SymElement> {
        let mut out = SymElement::zero();
        for (w, c) in x.iter() {
            out.add_scaled(&self.coderivation_apply(w)?, c);
        }
        Ok(out)
    }

    /// Lists every canonical word `w` of arity `<= max_arity` with
    /// `Q(Q(w)) ≠ 0`.
    pub fn check_square_zero(&self, max_arity: usize) -> Result<IdentityReport> {
        let words = words_up_to(&self.space, max_arity)?;
        let mut failures = Vec::new();
        for w in &words {
            let qq = self.coderivation(&self.coderivation_apply(w)?)?;
            if !qq.is_zero() {
                failures.push(Residual {
                    input: self.space.format_word(w),
                    arity: w.arity(),
                    residual: qq.format(&self.space),
                });
            }
        }
        Ok(IdentityReport {
            identity: "Q∘Q = 0".into(),
            max_arity,
            words_checked: words.len(),
            failures,
        })
    }

    /// Largest arity at which the Taylor coefficients can be nonzero,
    /// clipped by the filtration.
    pub fn effective_arity(&self) -> usize {
        self.space
            .filtration_arity_bound()
            .map_or(self.arity_cap, |b| b.min(self.arity_cap))
    }

    /// Cohomology of `(L, Q_1)`; requires a flat structure.
    pub fn cohomology(&self) -> Result<CohomologyReport> {
        Ok(cohomology(&self.complex()?).report())
    }

    pub fn complex(&self) -> Result<ChainComplex> {
        if !self.is_flat() {
            return Err(Error::FlatnessRequired(
                "structure".into(),
                self.curvature().format(&self.space),
            ));
        }
        ChainComplex::from_linear_map(&self.space, &self.linear_part())
    }
}

/// Fills in `[j, i]` from `[i, j]` by graded antisymmetry (unshifted
/// degrees) and checks consistency where both are given.
fn complete_bracket(space: &GradedSpace, bracket: &Bracket) -> Result<Bracket> {
    let mut full = Bracket::new();
    for (&(i, j), v) in bracket {
        space.check_index(i)?;
        space.check_index(j)?;
        let (ui, uj) = (space.degree(i) + 1, space.degree(j) + 1);
        for (g, _) in v.iter() {
            space.check_index(g)?;
            if space.degree(g) + 1 != ui + uj {
                return Err(Error::DegreeMismatch {
                    context: format!("bracket [{}, {}] (unshifted degree)", space.name(i), space.name(j)),
                    generator: space.name(g).to_string(),
                    expected: ui + uj,
                    found: space.degree(g) + 1,
                });
            }
        }
        // [μ, γ] = -(-1)^{|γ||μ|} [γ, μ]
        let swapped = Sign::from_parity(!(is_odd(ui) && is_odd(uj))).apply_element(v);
        let antisym_err = || Error::NotAntisymmetric {
            context: "bracket".into(),
            left: space.name(i).to_string(),
            right: space.name(j).to_string(),
        };
        if i == j {
            if swapped != *v {
                return Err(antisym_err());
            }
        } else if let Some(other) = bracket.get(&(j, i)) {
            if *other != swapped {
                return Err(antisym_err());
            }
        }
        full.insert((i, j), v.clone());
        full.entry((j, i)).or_insert(swapped);
    }
    Ok(full)
}

impl Sign {
    pub fn apply_element(self, e: &Element) -> Element {
        match self {
            Sign::Plus => e.clone(),
            Sign::Minus => e.neg(),
        }
    }
}

/// An L∞-morphism given by its Taylor coefficients `F_n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LInftyMorphism {
    source: Arc<LInftyStructure>,
    target: Arc<LInftyStructure>,
    table: Table,
    arity_cap: usize,
}

impl LInftyMorphism {
    pub fn new(
        source: Arc<LInftyStructure>,
        target: Arc<LInftyStructure>,
        table: Table,
        arity_cap: usize,
    ) -> Result<Self> {
        if target.space.nilpotency() > source.space.nilpotency() {
            return Err(Error::NilpotencyMismatch(format!(
                "a morphism needs the target order ({}) not to exceed the source order ({})",
                target.space.nilpotency(),
                source.space.nilpotency()
            )));
        }
        let table: Table = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        validate_table(&source.space, &target.space, &table, 0, 1, arity_cap, "morphism component")?;
        Ok(LInftyMorphism {
            source,
            target,
            table,
            arity_cap,
        })
    }

    /// A morphism with only a linear Taylor coefficient.
    pub fn strict(source: Arc<LInftyStructure>, target: Arc<LInftyStructure>, f: &LinearMap) -> Result<Self> {
        let table = f.images().map(|(i, e)| (Word::single(i), e.clone())).collect();
        LInftyMorphism::new(source, target, table, 1)
    }

    pub fn identity(structure: Arc<LInftyStructure>) -> Self {
        let dim = structure.space.dim();
        LInftyMorphism::strict(structure.clone(), structure, &LinearMap::identity(dim))
            .expect("identity is always valid")
    }

    pub fn source(&self) -> &Arc<LInftyStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LInftyStructure> {
        &self.target
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn arity_cap(&self) -> usize {
        self.arity_cap
    }

    pub fn component(&self, w: &Word) -> Element {
        self.table.get(w).cloned().unwrap_or_default()
    }

    pub fn linear_part(&self) -> LinearMap {
        LinearMap::from_images(
            self.table
                .iter()
                .filter(|(w, _)| w.arity() == 1)
                .map(|(w, v)| (w.0[0], v.clone())),
        )
    }

    pub fn apply_components(&self, x: &SymElement) -> Element {
        apply_table(&self.table, x)
    }

    /// The coalgebra morphism on a canonical word. Each unordered partition
    /// into blocks stands for the `p!` orderings of the shuffle formula,
    /// which all contribute the same signed product.
    pub fn apply_word(&self, w: &Word) -> Result<SymElement> {
        if w.arity() > WORD_CAP {
            return Err(Error::ArityCapExceeded {
                arity: w.arity(),
                cap: WORD_CAP,
            });
        }
        let src = &*self.source.space;
        let tgt = &*self.target.space;
        let degrees: Vec<i64> = w.iter().map(|&i| src.degree(i)).collect();
        let mut out = SymElement::zero();
        'partitions: for blocks in set_partitions(w.arity()) {
            let mut product = SymElement::unit();
            for b in &blocks {
                if b.len() > self.arity_cap {
                    continue 'partitions;
                }
                let Some(v) = self.table.get(&w.select(b.iter().copied())) else {
                    continue 'partitions;
                };
                product = multiply(tgt, &product, &SymElement::from_element(v));
                if product.is_zero() {
                    continue 'partitions;
                }
            }
            let perm: Vec<usize> = blocks.concat();
            let sign = koszul_sign(&perm, &degrees)?;
            out.add_scaled(&product, &sign.to_scalar());
        }
        Ok(out)
    }

    pub fn apply(&self, x: &SymElement) -> Result<SymElement> {
        let mut out = SymElement::zero();
        for (w, c) in x.iter() {
            out.add_scaled(&self.apply_word(w)?, c);
        }
        Ok(out)
    }

    /// Residuals `F(Q(w)) − Q̃(F(w))` on all canonical words up to
    /// `max_arity`, the unit included.
    pub fn check(&self, max_arity: usize) -> Result<IdentityReport> {
        let words = words_up_to(&self.source.space, max_arity)?;
        let mut failures = Vec::new();
        for w in &words {
            let lhs = self.apply(&self.source.coderivation_apply(w)?)?;
            let rhs = self.target.coderivation(&self.apply_word(w)?)?;
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                failures.push(Residual {
                    input: self.source.space.format_word(w),
                    arity: w.arity(),
                    residual: diff.format(&self.target.space),
                });
            }
        }
        Ok(IdentityReport {
            identity: "F∘Q = Q̃∘F".into(),
            max_arity,
            words_checked: words.len(),
            failures,
        })
    }

    /// Largest arity at which the composite with another morphism can have
    /// nonzero coefficients.
    fn composite_arity(&self, second: &LInftyMorphism) -> usize {
        let raw = self.arity_cap.saturating_mul(second.arity_cap.max(1));
        self.source
            .space
            .filtration_arity_bound()
            .map_or(raw, |b| b.min(raw))
    }

    /// `second ∘ self`, with coefficients `(G∘F)_n(w) = Σ G_{|u|}(u)` over the
    /// words `u` of `F(w)`.
    pub fn then(&self, second: &LInftyMorphism) -> Result<LInftyMorphism> {
        if *self.target != *second.source {
            return Err(Error::SpaceMismatch(
                "composable morphisms need matching target and source".into(),
            ));
        }
        let cap = self.composite_arity(second);
        let mut table = Table::new();
        for w in words_up_to(&self.source.space, cap)? {
            if w.is_empty() {
                continue;
            }
            let v = second.apply_components(&self.apply_word(&w)?);
            if !v.is_zero() {
                table.insert(w, v);
            }
        }
        LInftyMorphism::new(self.source.clone(), second.target.clone(), table, cap.max(1))
    }

    /// The inverse of an L∞-morphism with invertible linear part, solved
    /// arity by arity. Needs either a strict morphism or a filtration that
    /// bounds the arity.
    pub fn inverse(&self) -> Result<LInftyMorphism> {
        let src = &self.source.space;
        let tgt = &self.target.space;
        if src.nilpotency() != tgt.nilpotency() {
            return Err(Error::NilpotencyMismatch(
                "an invertible morphism needs equal nilpotency orders".into(),
            ));
        }
        if src.dim() != tgt.dim() {
            return Err(Error::Singular);
        }
        let n = src.dim();
        let f1 = self.linear_part();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (i, c) in f1.image(j).iter() {
                m[(i, j)] = c.clone();
            }
        }
        let inv = m.inverse()?;
        let g1 = LinearMap::from_images((0..n).map(|j| {
            (
                j,
                Element::from_terms((0..n).map(|i| (i, inv[(i, j)].clone()))),
            )
        }));
        let strict = self.table.keys().all(|w| w.arity() == 1);
        let cap = if strict {
            1
        } else {
            tgt.filtration_arity_bound().ok_or_else(|| {
                Error::Unsupported(
                    "inverting a non-strict morphism needs every generator at filtration level >= 1"
                        .into(),
                )
            })?
        };
        let mut partial = LInftyMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            table: g1.images().map(|(i, e)| (Word::single(i), e.clone())).collect(),
            arity_cap: cap.max(1),
        };
        for w in words_up_to(tgt, cap)? {
            if w.arity() < 2 {
                continue;
            }
            // G_n is still absent, so G(w) contains only the products of
            // lower coefficients
            let rest = partial.apply_word(&w)?;
            let correction = self.apply_components(&rest);
            let gw = g1.apply(&correction).neg();
            if !gw.is_zero() {
                partial.table.insert(w, gw);
            }
        }
        LInftyMorphism::new(partial.source, partial.target, partial.table, partial.arity_cap)
    }

    /// Whether `F_1` induces an isomorphism on cohomology; only defined for
    /// flat source and target.
    pub fn is_quasi_iso(&self) -> Result<QuasiIsoReport> {
        for (which, s) in [("source", &self.source), ("target", &self.target)] {
            if !s.is_flat() {
                return Err(Error::FlatnessRequired(which.into(), s.curvature().format(&s.space)));
            }
        }
        let hs = cohomology(&self.source.complex()?);
        let ht = cohomology(&self.target.complex()?);
        let f = chain_map(&self.source.space, &self.target.space, &self.linear_part())?;
        let induced = induced_map_on_cohomology(&hs, &ht, &f)?;
        Ok(QuasiIsoReport {
            quasi_isomorphism: induced.is_isomorphism(),
            source: hs.report(),
            target: ht.report(),
            induced: induced.report(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub quasi_isomorphism: bool,
    pub source: CohomologyReport,
    pub target: CohomologyReport,
    pub induced: InducedMapReport,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Generator;
    use crate::scalar::{int, Scalar};
    use crate::sym::power;
    use itertools::Itertools;
    use num_traits::One;

    fn fix_a() -> LInftyStructure {
        let s = Arc::new(
            GradedSpace::new([Generator::new("a", 0, 1), Generator::new("b", 1, 1)], 2).unwrap(),
        );
        let table = Table::from([(Word::single(0), Element::generator(1))]);
        LInftyStructure::new(s, table, 1).unwrap()
    }

    #[test]
    fn coderivation_on_a_generator() {
        let q = fix_a();
        let out = q.coderivation_apply(&Word::single(0)).unwrap();
        assert_eq!(out, SymElement::word(Word::single(1), int(1)));
        assert!(q.check_square_zero(4).unwrap().passed());
    }

    #[test]
    fn curved_generator_expansion() {
        // Q(γ) = Q_0(1)∨γ + Q_1(γ)
        let s = Arc::new(
            GradedSpace::new([Generator::new("x", 0, 1), Generator::new("c", 1, 2)], 4).unwrap(),
        );
        let x = s.index_of("x").unwrap();
        let c = s.index_of("c").unwrap();
        let table = Table::from([
            (Word::unit(), Element::term(c, int(-1))),
            (Word::single(x), Element::term(c, int(5))),
        ]);
        let q = LInftyStructure::new(s.clone(), table, 1).unwrap();
        let out = q.coderivation_apply(&Word::single(x)).unwrap();
        let mut expected = SymElement::word(Word::single(c), int(5));
        let (w, sign) = s.normalize(&[c, x]).unwrap().unwrap();
        expected.add_term(w, sign.apply(int(-1)));
        assert_eq!(out, expected);
    }

    #[test]
    fn morphism_on_a_pair() {
        // F(γ1∨γ2) = F_2(γ1∨γ2) + F_1(γ1)∨F_1(γ2)
        let s = Arc::new(
            GradedSpace::new(
                [Generator::new("u", 0, 1), Generator::new("v", 0, 1), Generator::new("w", 0, 2)],
                3,
            )
            .unwrap(),
        );
        let zero = Arc::new(LInftyStructure::zero(s.clone()));
        let (u, v, w) = (0, 1, 2);
        let table = Table::from([
            (Word::single(u), Element::generator(v)),
            (Word::single(v), Element::generator(u)),
            (Word(vec![u, v]), Element::term(w, int(3))),
        ]);
        let f = LInftyMorphism::new(zero.clone(), zero, table, 2).unwrap();
        assert_eq!(f.apply_word(&Word::unit()).unwrap(), SymElement::unit());
        let out = f.apply_word(&Word(vec![u, v])).unwrap();
        let mut expected = SymElement::word(Word::single(w), int(3));
        expected.add_term(Word(vec![u, v]), int(1));
        assert_eq!(out, expected);
    }

    #[test]
    fn differential_is_not_a_degree_zero_morphism() {
        let q = Arc::new(fix_a());
        let d = q.linear_part();
        let err = LInftyMorphism::strict(q.clone(), q, &d).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
    }

    #[test]
    fn identity_of_fix_a_is_a_quasi_iso() {
        let q = Arc::new(fix_a());
        let id = LInftyMorphism::identity(q);
        assert!(id.check(4).unwrap().passed());
        let r = id.is_quasi_iso().unwrap();
        assert!(r.quasi_isomorphism);
    }

    #[test]
    fn kernel_inclusion_into_acyclic_is_not_quasi_iso() {
        let k = Arc::new(LInftyStructure::zero(Arc::new(
            GradedSpace::new([Generator::new("k", 0, 1)], 2).unwrap(),
        )));
        let a = Arc::new(fix_a());
        // k ↦ a is not a chain map (d a = b ≠ 0); k ↦ 0 is, and H⁰ has ranks 1 vs 0
        let f = LInftyMorphism::strict(k, a, &LinearMap::zero()).unwrap();
        assert!(f.check(4).unwrap().passed());
        let r = f.is_quasi_iso().unwrap();
        assert!(!r.quasi_isomorphism);
        assert_eq!(r.induced.failing_degree, Some(0));
    }

    #[test]
    fn quasi_iso_requires_flatness() {
        let s = Arc::new(GradedSpace::new([Generator::new("c", 1, 1)], 2).unwrap());
        let q = Arc::new(
            LInftyStructure::new(s, Table::from([(Word::unit(), Element::generator(0))]), 0).unwrap(),
        );
        let id = LInftyMorphism::identity(q);
        assert!(matches!(id.is_quasi_iso(), Err(Error::FlatnessRequired(..))));
    }

    /// The literal ordered shuffle formula with `1/p!`, as an oracle for the
    /// set-partition evaluation.
    fn ordered_formula(f: &LInftyMorphism, w: &Word) -> SymElement {
        let src = &*f.source.space;
        let tgt = &*f.target.space;
        let n = w.arity();
        let degrees: Vec<i64> = w.iter().map(|&i| src.degree(i)).collect();
        let mut out = SymElement::zero();
        if n == 0 {
            return SymElement::unit();
        }
        for p in 1..=n {
            // compositions k_1 + … + k_p = n
            for cuts in (1..n).combinations(p - 1) {
                let mut bounds = vec![0];
                bounds.extend(cuts);
                bounds.push(n);
                let sizes: Vec<usize> = bounds.windows(2).map(|b| b[1] - b[0]).collect();
                for perm in (0..n).permutations(n) {
                    let mut ok = true;
                    let mut blocks = Vec::new();
                    let mut start = 0;
                    for &k in &sizes {
                        let blk = &perm[start..start + k];
                        if blk.windows(2).any(|x| x[0] > x[1]) {
                            ok = false;
                            break;
                        }
                        blocks.push(blk.to_vec());
                        start += k;
                    }
                    if !ok {
                        continue;
                    }
                    let sign = koszul_sign(&perm, &degrees).unwrap();
                    let mut product = SymElement::unit();
                    for b in &blocks {
                        let v = f.component(&w.select(b.iter().copied()));
                        product = multiply(tgt, &product, &SymElement::from_element(&v));
                    }
                    let c = sign.to_scalar() * crate::scalar::inv_factorial(p);
                    out.add_scaled(&product, &c);
                }
            }
        }
        out
    }

    #[test]
    fn partition_evaluation_matches_ordered_formula() {
        let s = Arc::new(
            GradedSpace::new(
                [
                    Generator::new("p", -1, 1),
                    Generator::new("q", 0, 1),
                    Generator::new("r", 1, 1),
                    Generator::new("t", -1, 2),
                    Generator::new("z", 0, 3),
                    Generator::new("y", 1, 3),
                ],
                5,
            )
            .unwrap(),
        );
        let zero = Arc::new(LInftyStructure::zero(s.clone()));
        let mut table = Table::new();
        for w in s.canonical_words(3) {
            if w.is_empty() {
                continue;
            }
            let deg = s.word_degree(&w);
            let weight = s.word_weight(&w);
            let img = Element::from_terms(
                (0..s.dim())
                    .filter(|&j| s.degree(j) == deg && s.level(j) >= weight)
                    .map(|j| (j, int((w.arity() + j) as i64 % 3 - 1))),
            );
            table.insert(w, img);
        }
        let f = LInftyMorphism::new(zero.clone(), zero, table, 3).unwrap();
        for w in s.canonical_words(4) {
            assert_eq!(f.apply_word(&w).unwrap(), ordered_formula(&f, &w), "{w:?}");
        }
    }

    #[test]
    fn powers_of_even_elements() {
        let s = GradedSpace::new([Generator::new("x", 0, 1)], 4).unwrap();
        let p = power(&s, &Element::generator(0), 3);
        assert_eq!(p.coeff(&Word(vec![0, 0, 0])), Scalar::one());
    }
}
