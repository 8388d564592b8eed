//! Small structures shared by the unit tests.

use std::sync::Arc;

use crate::graded::{Element, Generator, GradedSpace, LinearMap, Word};
use crate::linfty::{Bracket, LInftyStructure, Table};
use crate::scalar::int;
use crate::twisting::TwistCandidate;

/// a (degree 0) ↦ b (degree 1), both at level 1, N = 2.
pub fn fix_a() -> Arc<LInftyStructure> {
    let s = Arc::new(
        GradedSpace::new([Generator::new("a", 0, 1), Generator::new("b", 1, 1)], 2).unwrap(),
    );
    Arc::new(LInftyStructure::new(s, Table::from([(Word::single(0), Element::generator(1))]), 1).unwrap())
}

/// x (degree 0, level 1), c (degree 1, level 2), N = 3; R = c and
/// [x, x] = -2c.
pub fn fix_b() -> Arc<LInftyStructure> {
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

pub fn candidate(q: &LInftyStructure, name: &str) -> TwistCandidate {
    TwistCandidate::new(q.space(), Element::generator(q.space().index_of(name).unwrap())).unwrap()
}

/// The two-dimensional Lie algebra `[e, f] = f`, unfiltered (N = 1).
pub fn affine_lie() -> Arc<LInftyStructure> {
    let s = Arc::new(
        GradedSpace::new([Generator::new("e", -1, 0), Generator::new("f", -1, 0)], 1).unwrap(),
    );
    let (e, f) = (s.index_of("e").unwrap(), s.index_of("f").unwrap());
    let bracket = Bracket::from([((e, f), Element::generator(f))]);
    Arc::new(
        LInftyStructure::from_curved_lie(s, &Element::zero(), &LinearMap::zero(), &bracket).unwrap(),
    )
}

/// One constant `f` of degree 0 with no structure, N = 1.
pub fn constants() -> Arc<LInftyStructure> {
    let s = Arc::new(GradedSpace::new([Generator::new("f", 0, 0)], 1).unwrap());
    Arc::new(LInftyStructure::zero(s))
}

/// FIX-B with curvature 4c' and [x', x'] = -2c'; `x ↦ 2x'`, `c ↦ 4c'` is a
/// strict isomorphism onto it.
pub fn fix_b_scaled() -> Arc<LInftyStructure> {
    let s = Arc::new(
        GradedSpace::new([Generator::new("x'", 0, 1), Generator::new("c'", 1, 2)], 3).unwrap(),
    );
    let x = s.index_of("x'").unwrap();
    let c = s.index_of("c'").unwrap();
    let bracket = Bracket::from([((x, x), Element::term(c, int(-2)))]);
    Arc::new(
        LInftyStructure::from_curved_lie(s, &Element::term(c, int(4)), &LinearMap::zero(), &bracket)
            .unwrap(),
    )
}
