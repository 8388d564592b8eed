//! Maurer–Cartan elements and twisting by `exp(π)`.

use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{Element, GradedSpace};
use crate::linfty::{words_up_to, LInftyMorphism, LInftyStructure, Table};
use crate::scalar::Scalar;
use crate::sym::{exp, multiply, SymElement};

/// An element of `F^1 L[1]^0`, the admissible input of every twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCandidate {
    element: Element,
}

impl TwistCandidate {
    pub fn new(space: &GradedSpace, element: Element) -> Result<Self> {
        for (i, _) in element.iter() {
            space.check_index(i)?;
            if space.degree(i) != 0 {
                return Err(Error::NotDegreeZero(element.format(space)));
            }
        }
        let weight = element.filtration_weight(space);
        if weight < 1 {
            return Err(Error::NonProperElement {
                element: element.format(space),
                weight,
            });
        }
        Ok(TwistCandidate { element })
    }

    pub fn zero() -> Self {
        TwistCandidate {
            element: Element::zero(),
        }
    }

    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn neg(&self) -> Self {
        TwistCandidate {
            element: self.element.neg(),
        }
    }

    /// `π + B`; the sum of two candidates is again a candidate.
    pub fn plus(&self, other: &TwistCandidate) -> Self {
        let mut element = self.element.clone();
        element.add(&other.element);
        TwistCandidate { element }
    }
}

/// `exp(π) = Σ π^k / k!`, finite because `π` has positive weight.
pub fn exp_element(space: &GradedSpace, pi: &TwistCandidate) -> SymElement {
    exp(space, &pi.element)
}

/// `exp(π) ∨ w` for a canonical word.
fn shifted_word(space: &GradedSpace, e: &SymElement, w: &crate::graded::Word) -> SymElement {
    multiply(space, e, &SymElement::word(w.clone(), Scalar::one()))
}

/// `Q^π_k(γ_1…γ_k) = Σ_ℓ Q_{k+ℓ}(π^ℓ ∨ γ_1 ∨ … ∨ γ_k) / ℓ!`.
pub fn twist_structure(q: &LInftyStructure, pi: &TwistCandidate) -> Result<LInftyStructure> {
    let space = q.space();
    let e = exp_element(space, pi);
    let mut table = Table::new();
    for w in words_up_to(space, q.arity_cap())? {
        let v = q.apply_components(&shifted_word(space, &e, &w));
        if !v.is_zero() {
            table.insert(w, v);
        }
    }
    LInftyStructure::new(space.clone(), table, q.arity_cap())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McReport {
    pub element: String,
    pub maurer_cartan: bool,
    /// `Σ Q_n(π^n)/n!`
    pub residual: String,
    /// Cogenerator projection of `Q(exp π)`.
    pub coderivation_residual: String,
    /// `exp(-π) ∨ Q(exp π)`, which must be the residual itself.
    pub conjugation_residual: String,
    pub routes_agree: bool,
}

/// Evaluates the Maurer–Cartan series and cross-checks it against the
/// coderivation on `exp(π)`.
pub fn mc_check(q: &LInftyStructure, pi: &TwistCandidate) -> Result<(bool, Element, McReport)> {
    let space = q.space();
    let e = exp_element(space, pi);
    let residual = q.apply_components(&e);
    let full = q.coderivation(&e)?;
    let projected = full.cogenerator_part();
    let conjugated = multiply(space, &exp_element(space, &pi.neg()), &full);
    let expected_full = multiply(space, &SymElement::from_element(&residual), &e);
    let routes_agree = projected == residual
        && conjugated == SymElement::from_element(&residual)
        && full == expected_full;
    let is_mc = residual.is_zero();
    let report = McReport {
        element: pi.element.format(space),
        maurer_cartan: is_mc,
        residual: residual.format(space),
        coderivation_residual: projected.format(space),
        conjugation_residual: conjugated.format(space),
        routes_agree,
    };
    Ok((is_mc, residual, report))
}

pub fn is_maurer_cartan(q: &LInftyStructure, pi: &TwistCandidate) -> Result<bool> {
    Ok(mc_check(q, pi)?.0)
}

/// `π_F = Σ F_n(π^n)/n!`, verified against `F(exp π) = exp(π_F)`.
pub fn push_mc(f: &LInftyMorphism, pi: &TwistCandidate) -> Result<TwistCandidate> {
    let src = f.source().space();
    let tgt = f.target().space();
    let e = exp_element(src, pi);
    let mut reduced = e.clone();
    reduced.add_term(crate::graded::Word::unit(), -Scalar::one());
    let pushed = TwistCandidate::new(tgt, f.apply_components(&reduced))?;
    let lhs = f.apply(&e)?;
    let rhs = exp_element(tgt, &pushed);
    if lhs != rhs {
        return Err(Error::IdentityViolated(format!(
            "F(exp π) = {} but exp(π_F) = {}",
            lhs.format(tgt),
            rhs.format(tgt)
        )));
    }
    Ok(pushed)
}

/// `F^π_k(γ_1…γ_k) = Σ_ℓ F_{k+ℓ}(π^ℓ ∨ γ_1 ∨ … ∨ γ_k) / ℓ!`, a morphism
/// `L^π → L̃^{π_F}`.
pub fn twist_morphism(f: &LInftyMorphism, pi: &TwistCandidate) -> Result<LInftyMorphism> {
    let src = f.source().space();
    let pushed = push_mc(f, pi)?;
    let source = Arc::new(twist_structure(f.source(), pi)?);
    let target = Arc::new(twist_structure(f.target(), &pushed)?);
    let e = exp_element(src, pi);
    let mut table = Table::new();
    for w in words_up_to(src, f.arity_cap())? {
        if w.is_empty() {
            continue;
        }
        let v = f.apply_components(&shifted_word(src, &e, &w));
        if !v.is_zero() {
            table.insert(w, v);
        }
    }
    LInftyMorphism::new(source, target, table, f.arity_cap())
}

/// `π_F` is MC whenever `π` is; errors if `π` is not MC to begin with.
pub fn mc_preservation(f: &LInftyMorphism, pi: &TwistCandidate) -> Result<bool> {
    let (ok, residual, _) = mc_check(f.source(), pi)?;
    if !ok {
        return Err(Error::NotMaurerCartan {
            element: pi.element.format(f.source().space()),
            residual: residual.format(f.source().space()),
        });
    }
    let pushed = push_mc(f, pi)?;
    is_maurer_cartan(f.target(), &pushed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub holds: bool,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistCompositionReport {
    pub checks: Vec<IdentityCheck>,
}

impl TwistCompositionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn format_table(space: &GradedSpace, target: &GradedSpace, t: &Table) -> String {
    let entries: Vec<String> = t
        .iter()
        .map(|(w, v)| format!("{} ↦ {}", space.format_word(w), v.format(target)))
        .collect();
    format!("{{{}}}", entries.join("; "))
}

fn check(identity: &str, holds: bool, left: impl FnOnce() -> String, right: impl FnOnce() -> String) -> IdentityCheck {
    // the two sides are only rendered when they differ
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

/// The composition rules for twisting:
/// `(Q^π)^B = Q^{π+B} = (Q^B)^π`, `(F^π)^B = F^{π+B} = (F^B)^π`,
/// `π_F + B_{F^π} = (π+B)_F = B_F + π_{F^B}` and `(π_F)_G = π_{G∘F}`.
pub fn check_twist_composition(
    f: &LInftyMorphism,
    g: &LInftyMorphism,
    pi: &TwistCandidate,
    b: &TwistCandidate,
) -> Result<TwistCompositionReport> {
    let q = f.source();
    let space = q.space();
    let tgt = f.target().space();
    let sum = pi.plus(b);
    let mut checks = Vec::new();

    let q_pi_b = twist_structure(&twist_structure(q, pi)?, b)?;
    let q_sum = twist_structure(q, &sum)?;
    let q_b_pi = twist_structure(&twist_structure(q, b)?, pi)?;
    checks.push(check(
        "(Q^π)^B = Q^(π+B)",
        q_pi_b.table() == q_sum.table(),
        || format_table(space, space, q_pi_b.table()),
        || format_table(space, space, q_sum.table()),
    ));
    checks.push(check(
        "Q^(π+B) = (Q^B)^π",
        q_sum.table() == q_b_pi.table(),
        || format_table(space, space, q_sum.table()),
        || format_table(space, space, q_b_pi.table()),
    ));

    let f_pi = twist_morphism(f, pi)?;
    let f_b = twist_morphism(f, b)?;
    let f_pi_b = twist_morphism(&f_pi, b)?;
    let f_sum = twist_morphism(f, &sum)?;
    let f_b_pi = twist_morphism(&f_b, pi)?;
    checks.push(check(
        "(F^π)^B = F^(π+B)",
        f_pi_b.table() == f_sum.table(),
        || format_table(space, tgt, f_pi_b.table()),
        || format_table(space, tgt, f_sum.table()),
    ));
    checks.push(check(
        "F^(π+B) = (F^B)^π",
        f_sum.table() == f_b_pi.table(),
        || format_table(space, tgt, f_sum.table()),
        || format_table(space, tgt, f_b_pi.table()),
    ));

    let pi_f = push_mc(f, pi)?;
    let b_f = push_mc(f, b)?;
    let left = pi_f.plus(&push_mc(&f_pi, b)?);
    let middle = push_mc(f, &sum)?;
    let right = b_f.plus(&push_mc(&f_b, pi)?);
    checks.push(check(
        "π_F + B_(F^π) = (π+B)_F",
        left == middle,
        || left.element.format(tgt),
        || middle.element.format(tgt),
    ));
    checks.push(check(
        "(π+B)_F = B_F + π_(F^B)",
        middle == right,
        || middle.element.format(tgt),
        || right.element.format(tgt),
    ));

    let gf = f.then(g)?;
    let outer = g.target().space();
    let twice = push_mc(g, &pi_f)?;
    let once = push_mc(&gf, pi)?;
    checks.push(check(
        "(π_F)_G = π_(G∘F)",
        twice == once,
        || twice.element.format(outer),
        || once.element.format(outer),
    ));
    Ok(TwistCompositionReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{Generator, LinearMap, Word};
    use crate::linfty::Bracket;
    use crate::scalar::{frac, int};

    /// x (degree 0, level 1), c (degree 1, level 2), N = 3; R = c and
    /// [x, x] = -2c, so Q_0(1) = -c and Q_2(x∨x) = 2c.
    fn fix_b() -> Arc<LInftyStructure> {
        let s = Arc::new(
            GradedSpace::new([Generator::new("x", 0, 1), Generator::new("c", 1, 2)], 3).unwrap(),
        );
        let x = s.index_of("x").unwrap();
        let c = s.index_of("c").unwrap();
        let bracket = Bracket::from([((x, x), Element::term(c, int(-2)))]);
        Arc::new(
            LInftyStructure::from_curved_lie(s, &Element::generator(c), &LinearMap::zero(), &bracket)
                .unwrap(),
        )
    }

    fn x_of(q: &LInftyStructure) -> TwistCandidate {
        TwistCandidate::new(q.space(), Element::generator(q.space().index_of("x").unwrap())).unwrap()
    }

    #[test]
    fn fix_b_components() {
        let q = fix_b();
        let s = q.space();
        let (x, c) = (s.index_of("x").unwrap(), s.index_of("c").unwrap());
        assert_eq!(q.curvature(), Element::term(c, int(-1)));
        assert_eq!(q.component(&Word(vec![x, x])), Element::term(c, int(2)));
        assert!(q.check_square_zero(4).unwrap().passed());
    }

    #[test]
    fn exp_of_x() {
        let q = fix_b();
        let s = q.space();
        let x = s.index_of("x").unwrap();
        let e = exp_element(s, &x_of(&q));
        let mut expected = SymElement::unit();
        expected.add_term(Word::single(x), int(1));
        expected.add_term(Word(vec![x, x]), frac(1, 2));
        assert_eq!(e, expected);
    }

    #[test]
    fn x_flattens_fix_b() {
        let q = fix_b();
        let s = q.space();
        let (ok, residual, report) = mc_check(&q, &x_of(&q)).unwrap();
        assert!(ok && residual.is_zero() && report.routes_agree);
        let t = twist_structure(&q, &x_of(&q)).unwrap();
        assert!(t.is_flat());
        let (x, c) = (s.index_of("x").unwrap(), s.index_of("c").unwrap());
        assert_eq!(t.component(&Word::single(x)), Element::term(c, int(2)));
        assert_eq!(t.cohomology().unwrap().total_betti(), 0);
    }

    #[test]
    fn non_mc_residual() {
        let s = Arc::new(
            GradedSpace::new([Generator::new("a", 0, 1), Generator::new("b", 1, 1)], 2).unwrap(),
        );
        let q = LInftyStructure::new(
            s.clone(),
            Table::from([(Word::single(0), Element::generator(1))]),
            1,
        )
        .unwrap();
        let a = TwistCandidate::new(&s, Element::generator(0)).unwrap();
        let (ok, residual, report) = mc_check(&q, &a).unwrap();
        assert!(!ok);
        assert_eq!(residual, Element::generator(1));
        assert!(report.routes_agree);
    }

    #[test]
    fn candidates_are_validated() {
        let q = fix_b();
        let s = q.space();
        let c = s.index_of("c").unwrap();
        assert!(matches!(
            TwistCandidate::new(s, Element::generator(c)),
            Err(Error::NotDegreeZero(_))
        ));
        let s0 = GradedSpace::new([Generator::new("y", 0, 0)], 2).unwrap();
        assert!(matches!(
            TwistCandidate::new(&s0, Element::generator(0)),
            Err(Error::NonProperElement { .. })
        ));
    }

    #[test]
    fn pushing_along_a_morphism_with_quadratic_part() {
        // F_1 = id and F_2(x∨x) = 3y with y of degree 0, level 2
        let s = Arc::new(
            GradedSpace::new(
                [Generator::new("x", 0, 1), Generator::new("y", 0, 2), Generator::new("c", 1, 2)],
                3,
            )
            .unwrap(),
        );
        let zero = Arc::new(LInftyStructure::zero(s.clone()));
        let (x, y) = (s.index_of("x").unwrap(), s.index_of("y").unwrap());
        let mut table: Table = (0..3).map(|i| (Word::single(i), Element::generator(i))).collect();
        table.insert(Word(vec![x, x]), Element::term(y, int(3)));
        let f = LInftyMorphism::new(zero.clone(), zero, table, 2).unwrap();
        let pi = TwistCandidate::new(&s, Element::generator(x)).unwrap();
        let pushed = push_mc(&f, &pi).unwrap();
        assert_eq!(
            *pushed.element(),
            Element::from_terms([(x, int(1)), (y, frac(3, 2))])
        );
    }

    #[test]
    fn composition_identities_on_fix_b() {
        let q = fix_b();
        let id = LInftyMorphism::identity(q.clone());
        let x = x_of(&q);
        let r = check_twist_composition(&id, &id, &x, &x).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = check_twist_composition(&id, &id, &TwistCandidate::zero(), &TwistCandidate::zero()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn twist_matches_conjugation() {
        // Q^π(a) = exp(-π) ∨ Q(exp(π) ∨ a) on every word
        let q = fix_b();
        let s = q.space();
        let pi = x_of(&q);
        let t = twist_structure(&q, &pi).unwrap();
        let e = exp_element(s, &pi);
        let e_neg = exp_element(s, &pi.neg());
        for w in s.canonical_words(3) {
            let inner = multiply(s, &e, &SymElement::word(w.clone(), Scalar::one()));
            let conj = multiply(s, &e_neg, &q.coderivation(&inner).unwrap());
            assert_eq!(conj, t.coderivation_apply(&w).unwrap(), "{w:?}");
        }
    }
}
