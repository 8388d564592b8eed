//! The truncated symmetric coalgebra `S^c(L[1])`.
//!
//! Words whose total filtration weight reaches the nilpotency order are
//! dropped. Every structure map in this crate respects the filtration, so
//! the truncation is compatible with all of them.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::graded::{Element, GradedSpace, Sign, Word};
use crate::scalar::{format_term, inv_factorial, Scalar};

/// A finite linear combination of canonical words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymElement {
    terms: BTreeMap<Word, Scalar>,
}

impl SymElement {
    pub fn zero() -> Self {
        SymElement::default()
    }

    pub fn unit() -> Self {
        SymElement::word(Word::unit(), Scalar::one())
    }

    pub fn word(w: Word, c: Scalar) -> Self {
        let mut s = SymElement::zero();
        s.add_term(w, c);
        s
    }

    /// The arity-one embedding of a cogenerator.
    pub fn from_element(e: &Element) -> Self {
        let mut s = SymElement::zero();
        for (i, c) in e.iter() {
            s.add_term(Word::single(i), c.clone());
        }
        s
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(entry) => {
                *entry += c;
                if entry.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SymElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn add(&mut self, other: &SymElement) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn sub(&self, other: &SymElement) -> SymElement {
        let mut s = self.clone();
        s.add_scaled(other, &-Scalar::one());
        s
    }

    pub fn scaled(&self, c: &Scalar) -> SymElement {
        let mut s = SymElement::zero();
        s.add_scaled(self, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.terms.keys().map(Word::arity).max().unwrap_or(0)
    }

    pub fn arity_part(&self, n: usize) -> SymElement {
        SymElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.arity() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Projection onto the cogenerators (the arity-one part).
    pub fn cogenerator_part(&self) -> Element {
        Element::from_terms(
            self.terms
                .iter()
                .filter(|(w, _)| w.arity() == 1)
                .map(|(w, c)| (w.0[0], c.clone())),
        )
    }

    pub fn format(&self, space: &GradedSpace) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .enumerate()
            .map(|(k, (w, c))| {
                if w.is_empty() {
                    // the unit: print the bare coefficient
                    let body = c.abs().to_string();
                    match (k == 0, c.is_negative()) {
                        (true, false) => body,
                        (true, true) => format!("-{body}"),
                        (false, false) => format!(" + {body}"),
                        (false, true) => format!(" - {body}"),
                    }
                } else {
                    format_term(c, &space.format_word(w), k == 0)
                }
            })
            .collect()
    }
}

/// `u ∨ v` as a signed canonical word, or `None` if it vanishes (repeated
/// odd generator or truncated by the filtration).
pub fn multiply_words(space: &GradedSpace, u: &Word, v: &Word) -> Option<(Word, Sign)> {
    let mut factors = u.0.clone();
    factors.extend_from_slice(&v.0);
    let (w, sign) = space
        .normalize(&factors)
        .expect("words are built from valid indices")?;
    space.word_survives(&w).then_some((w, sign))
}

pub fn multiply(space: &GradedSpace, a: &SymElement, b: &SymElement) -> SymElement {
    let mut out = SymElement::zero();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            if let Some((w, sign)) = multiply_words(space, u, v) {
                out.add_term(w, sign.apply(cu * cv));
            }
        }
    }
    out
}

/// `e ∨ … ∨ e` (`n` factors); `n = 0` gives the unit.
pub fn power(space: &GradedSpace, e: &Element, n: usize) -> SymElement {
    let base = SymElement::from_element(e);
    let mut acc = SymElement::unit();
    for _ in 0..n {
        acc = multiply(space, &acc, &base);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `Σ e^k / k!`, stopping once the powers vanish. Only meaningful (finite)
/// for elements of positive filtration weight or odd degree.
pub fn exp(space: &GradedSpace, e: &Element) -> SymElement {
    let base = SymElement::from_element(e);
    let mut out = SymElement::unit();
    let mut pow = SymElement::unit();
    let bound = space.nilpotency() as usize + 1;
    for k in 1..=bound.max(space.dim() + 1) {
        pow = multiply(space, &pow, &base);
        if pow.is_zero() {
            break;
        }
        out.add_scaled(&pow, &inv_factorial(k));
    }
    out
}

/// Tensor square elements `Σ c u ⊗ v`, used for comultiplication checks.
pub type TensorSquare = BTreeMap<(Word, Word), Scalar>;

fn add_tensor(t: &mut TensorSquare, key: (Word, Word), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = t.entry(key.clone()).or_insert_with(Scalar::zero);
    *entry += c;
    if entry.is_zero() {
        t.remove(&key);
    }
}

/// Unshuffle coproduct `Δ(w) = Σ ε(σ) w|S ⊗ w|Sᶜ`, keeping only pairs whose
/// combined weight survives the truncation.
pub fn coproduct(space: &GradedSpace, x: &SymElement) -> TensorSquare {
    let mut out = TensorSquare::new();
    for (w, c) in x.iter() {
        let n = w.arity();
        let degrees: Vec<i64> = w.iter().map(|&i| space.degree(i)).collect();
        for mask in 0u32..(1 << n) {
            let left: Vec<usize> = (0..n).filter(|p| mask & (1 << p) != 0).collect();
            let right: Vec<usize> = (0..n).filter(|p| mask & (1 << p) == 0).collect();
            let sign = selection_sign(&left, &right, &degrees);
            add_tensor(
                &mut out,
                (w.select(left), w.select(right)),
                sign.apply(c.clone()),
            );
        }
    }
    out
}

/// `(a ⊗ b)` for a tensor of two symmetric elements, truncated on the
/// combined weight.
pub fn tensor(space: &GradedSpace, a: &SymElement, b: &SymElement) -> TensorSquare {
    let mut out = TensorSquare::new();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            if space.word_weight(u) + space.word_weight(v) < space.nilpotency() {
                add_tensor(&mut out, (u.clone(), v.clone()), cu * cv);
            }
        }
    }
    out
}

/// Sign of moving the `first` positions (in order) in front of the `rest`.
pub(crate) fn selection_sign(first: &[usize], rest: &[usize], degrees: &[i64]) -> Sign {
    let mut sign = Sign::Plus;
    for &a in first {
        for &b in rest {
            if b < a {
                sign = sign * Sign::koszul(degrees[a], degrees[b]);
            }
        }
    }
    sign
}

/// All subsets of `0..n` as (selected, rest) position lists, in a fixed
/// order.
pub(crate) fn splits(n: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    (0u64..(1u64 << n)).map(move |mask| {
        let sel: Vec<usize> = (0..n).filter(|p| mask & (1 << p) != 0).collect();
        let rest: Vec<usize> = (0..n).filter(|p| mask & (1 << p) == 0).collect();
        (sel, rest)
    })
}

/// Unordered set partitions of `0..n` into nonempty blocks, each block
/// increasing and blocks ordered by their minimum.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(i);
            rec(i + 1, n, current, out);
            current[b].pop();
        }
        current.push(vec![i]);
        rec(i + 1, n, current, out);
        current.pop();
    }
    rec(0, n, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Generator;
    use crate::scalar::{frac, int};

    fn fix_b_space() -> GradedSpace {
        GradedSpace::new([Generator::new("x", 0, 1), Generator::new("c", 1, 2)], 3).unwrap()
    }

    #[test]
    fn exp_truncates_by_filtration() {
        let s = fix_b_space();
        let x = s.index_of("x").unwrap();
        let e = exp(&s, &Element::generator(x));
        let mut expected = SymElement::unit();
        expected.add_term(Word::single(x), int(1));
        expected.add_term(Word(vec![x, x]), frac(1, 2));
        assert_eq!(e, expected);
        assert_eq!(exp(&s, &Element::zero()), SymElement::unit());
    }

    #[test]
    fn exp_at_order_two_is_linear() {
        let s = GradedSpace::new([Generator::new("p", 0, 1)], 2).unwrap();
        let p = Element::generator(0);
        let mut expected = SymElement::unit();
        expected.add_term(Word::single(0), int(1));
        assert_eq!(exp(&s, &p), expected);
    }

    #[test]
    fn odd_squares_vanish() {
        let s = GradedSpace::new([Generator::new("g", 1, 0)], 1).unwrap();
        assert!(power(&s, &Element::generator(0), 2).is_zero());
    }

    #[test]
    fn products_are_graded_commutative() {
        let s = GradedSpace::new(
            [Generator::new("a", 1, 0), Generator::new("b", 1, 0), Generator::new("e", 0, 0)],
            1,
        )
        .unwrap();
        let a = SymElement::from_element(&Element::generator(s.index_of("a").unwrap()));
        let b = SymElement::from_element(&Element::generator(s.index_of("b").unwrap()));
        let e = SymElement::from_element(&Element::generator(s.index_of("e").unwrap()));
        assert_eq!(multiply(&s, &a, &b), multiply(&s, &b, &a).scaled(&int(-1)));
        assert_eq!(multiply(&s, &a, &e), multiply(&s, &e, &a));
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b);
        }
    }

    #[test]
    fn coproduct_of_a_generator() {
        let s = fix_b_space();
        let x = Word::single(0);
        let d = coproduct(&s, &SymElement::word(x.clone(), int(1)));
        assert_eq!(d.len(), 2);
        assert_eq!(d[&(Word::unit(), x.clone())], int(1));
        assert_eq!(d[&(x, Word::unit())], int(1));
    }
}
