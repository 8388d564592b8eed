//! Cochain complexes over the rationals and their cohomology.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{Element, GradedSpace, LinearMap};
use crate::linalg::Matrix;
use crate::scalar::{format_term, Scalar};

/// A bounded cochain complex: one finite basis per degree and differentials
/// `d_k : C^k → C^{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    bases: BTreeMap<i64, Vec<String>>,
    differentials: BTreeMap<i64, Matrix>,
}

/// A chain map, one matrix per degree (`D^k × C^k`).
pub type ChainMap = BTreeMap<i64, Matrix>;

impl ChainComplex {
    /// Builds a complex and verifies `d_{k+1} d_k = 0`. Missing differentials
    /// are zero.
    pub fn new(
        bases: BTreeMap<i64, Vec<String>>,
        mut differentials: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        for (&k, basis) in &bases {
            let next = bases.get(&(k + 1)).map_or(0, Vec::len);
            let d = differentials
                .entry(k)
                .or_insert_with(|| Matrix::zeros(next, basis.len()));
            if d.rows() != next || d.cols() != basis.len() {
                return Err(Error::Shape(format!("differential in degree {k}")));
            }
        }
        if let Some(k) = differentials.keys().find(|k| !bases.contains_key(k)) {
            return Err(Error::Shape(format!("differential in empty degree {k}")));
        }
        let c = ChainComplex {
            bases,
            differentials,
        };
        for &k in c.bases.keys() {
            if c.bases.contains_key(&(k + 1)) {
                let dd = c.differentials[&(k + 1)].mul(&c.differentials[&k])?;
                if !dd.is_zero() {
                    return Err(Error::NotDifferential(k));
                }
            }
        }
        Ok(c)
    }

    /// The complex `(V, d)` for a degree `+1` linear map on a graded space;
    /// the degree-`k` basis lists the generators of that degree in order.
    pub fn from_linear_map(space: &GradedSpace, d: &LinearMap) -> Result<Self> {
        d.check_graded(space, space, 1, "differential")?;
        let bases: BTreeMap<i64, Vec<String>> = space
            .degrees()
            .into_iter()
            .map(|k| {
                let names = space
                    .indices_of_degree(k)
                    .into_iter()
                    .map(|i| space.name(i).to_string())
                    .collect();
                (k, names)
            })
            .collect();
        let mut diffs = BTreeMap::new();
        for &k in bases.keys() {
            diffs.insert(k, degree_block(space, space, d, k, k + 1));
        }
        ChainComplex::new(bases, diffs)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.bases.keys().copied()
    }

    pub fn dim(&self, k: i64) -> usize {
        self.bases.get(&k).map_or(0, Vec::len)
    }

    pub fn basis(&self, k: i64) -> &[String] {
        self.bases.get(&k).map_or(&[], Vec::as_slice)
    }

    /// `d_k`, a zero matrix of the right shape where the complex is empty.
    pub fn differential(&self, k: i64) -> Matrix {
        self.differentials
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(k + 1), self.dim(k)))
    }
}

/// The block of a linear map from degree `from` of `source` into degree `to`
/// of `target`.
pub fn degree_block(
    source: &GradedSpace,
    target: &GradedSpace,
    f: &LinearMap,
    from: i64,
    to: i64,
) -> Matrix {
    let cols = source.indices_of_degree(from);
    let rows = target.indices_of_degree(to);
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (j, &src) in cols.iter().enumerate() {
        let img = f.image(src);
        for (i, &dst) in rows.iter().enumerate() {
            m[(i, j)] = img.coeff(dst);
        }
    }
    m
}

/// Degree-`0` linear map as a chain map (one block per degree of either
/// space).
pub fn chain_map(source: &GradedSpace, target: &GradedSpace, f: &LinearMap) -> Result<ChainMap> {
    f.check_graded(source, target, 0, "chain map")?;
    let degrees: BTreeSet<i64> = source
        .degrees()
        .into_iter()
        .chain(target.degrees())
        .collect();
    Ok(degrees
        .into_iter()
        .map(|k| (k, degree_block(source, target, f, k, k)))
        .collect())
}

#[derive(Debug, Clone)]
struct DegreeData {
    /// Columns: a basis of the boundaries followed by the representatives.
    basis: Matrix,
    boundary_rank: usize,
    cycle_dim: usize,
    representatives: Vec<Vec<Scalar>>,
}

/// Cohomology of a complex with a deterministic choice of representatives.
#[derive(Debug, Clone)]
pub struct Cohomology {
    complex: ChainComplex,
    data: BTreeMap<i64, DegreeData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCohomology {
    pub degree: i64,
    pub dim: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub betti: usize,
    pub representatives: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyReport {
    pub fn betti(&self) -> Vec<(i64, usize)> {
        self.degrees.iter().map(|d| (d.degree, d.betti)).collect()
    }

    pub fn total_betti(&self) -> usize {
        self.degrees.iter().map(|d| d.betti).sum()
    }
}

fn format_vector(v: &[Scalar], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, label) in v.iter().zip(labels) {
        if !c.is_zero() {
            out.push_str(&format_term(c, label, out.is_empty()));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn cohomology(complex: &ChainComplex) -> Cohomology {
    let mut data = BTreeMap::new();
    for k in complex.degrees() {
        let n = complex.dim(k);
        let cycles = complex.differential(k).kernel();
        let incoming = complex.differential(k - 1);
        let boundary_cols: Vec<Vec<Scalar>> = {
            let (_, piv) = incoming.rref();
            piv.iter().map(|&j| incoming.column(j)).collect()
        };
        let b = Matrix::from_columns(n, &boundary_cols);
        let z = Matrix::from_columns(n, &cycles);
        let combined = b.hstack(&z).expect("same row count");
        let (_, pivots) = combined.rref();
        let representatives: Vec<Vec<Scalar>> = pivots
            .iter()
            .filter(|&&p| p >= boundary_cols.len())
            .map(|&p| combined.column(p))
            .collect();
        let mut basis_cols = boundary_cols.clone();
        basis_cols.extend(representatives.iter().cloned());
        data.insert(
            k,
            DegreeData {
                basis: Matrix::from_columns(n, &basis_cols),
                boundary_rank: boundary_cols.len(),
                cycle_dim: cycles.len(),
                representatives,
            },
        );
    }
    Cohomology {
        complex: complex.clone(),
        data,
    }
}

impl Cohomology {
    pub fn betti(&self, k: i64) -> usize {
        self.data.get(&k).map_or(0, |d| d.representatives.len())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.data.keys().copied()
    }

    pub fn betti_map(&self) -> BTreeMap<i64, usize> {
        self.data
            .iter()
            .map(|(&k, d)| (k, d.representatives.len()))
            .collect()
    }

    pub fn representatives(&self, k: i64) -> &[Vec<Scalar>] {
        self.data
            .get(&k)
            .map_or(&[], |d| d.representatives.as_slice())
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn class_of(&self, k: i64, cocycle: &[Scalar]) -> Result<Vec<Scalar>> {
        let Some(d) = self.data.get(&k) else {
            return Ok(Vec::new());
        };
        let x = d
            .basis
            .solve(cocycle)
            .ok_or_else(|| Error::Shape(format!("vector in degree {k} is not a cocycle")))?;
        Ok(x[d.boundary_rank..].to_vec())
    }

    pub fn report(&self) -> CohomologyReport {
        CohomologyReport {
            degrees: self
                .data
                .iter()
                .map(|(&k, d)| DegreeCohomology {
                    degree: k,
                    dim: self.complex.dim(k),
                    cocycles: d.cycle_dim,
                    coboundaries: d.boundary_rank,
                    betti: d.representatives.len(),
                    representatives: d
                        .representatives
                        .iter()
                        .map(|v| format_vector(v, self.complex.basis(k)))
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedDegree {
    pub degree: i64,
    pub source_betti: usize,
    pub target_betti: usize,
    pub rank: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedMapReport {
    pub degrees: Vec<InducedDegree>,
    pub isomorphism: bool,
    /// First degree in which the induced map is not bijective.
    pub failing_degree: Option<i64>,
}

/// The map induced on cohomology, one matrix per degree in the chosen
/// representative bases.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub matrices: BTreeMap<i64, Matrix>,
}

impl InducedMap {
    pub fn is_isomorphism(&self) -> bool {
        self.failing_degree().is_none()
    }

    pub fn failing_degree(&self) -> Option<i64> {
        self.matrices
            .iter()
            .find(|(_, m)| m.rows() != m.cols() || m.rank() != m.rows())
            .map(|(&k, _)| k)
    }

    pub fn compose(&self, first: &InducedMap) -> Result<InducedMap> {
        let mut matrices = BTreeMap::new();
        for (&k, m) in &first.matrices {
            if let Some(g) = self.matrices.get(&k) {
                matrices.insert(k, g.mul(m)?);
            }
        }
        Ok(InducedMap { matrices })
    }

    pub fn report(&self) -> InducedMapReport {
        InducedMapReport {
            degrees: self
                .matrices
                .iter()
                .map(|(&k, m)| InducedDegree {
                    degree: k,
                    source_betti: m.cols(),
                    target_betti: m.rows(),
                    rank: m.rank(),
                    matrix: m.to_strings(),
                })
                .collect(),
            isomorphism: self.is_isomorphism(),
            failing_degree: self.failing_degree(),
        }
    }
}

fn block(f: &ChainMap, k: i64, rows: usize, cols: usize) -> Result<Matrix> {
    match f.get(&k) {
        Some(m) if m.rows() == rows && m.cols() == cols => Ok(m.clone()),
        Some(_) => Err(Error::Shape(format!("chain map block in degree {k}"))),
        None => Ok(Matrix::zeros(rows, cols)),
    }
}

/// Verifies `d_D f = f d_C` and returns the induced map `H(C) → H(D)`.
pub fn induced_map_on_cohomology(
    source: &Cohomology,
    target: &Cohomology,
    f: &ChainMap,
) -> Result<InducedMap> {
    let c = source.complex();
    let d = target.complex();
    let degrees: BTreeSet<i64> = c.degrees().chain(d.degrees()).collect();
    for &k in &degrees {
        let fk = block(f, k, d.dim(k), c.dim(k))?;
        let fk1 = block(f, k + 1, d.dim(k + 1), c.dim(k + 1))?;
        let lhs = d.differential(k).mul(&fk)?;
        let rhs = fk1.mul(&c.differential(k))?;
        if lhs != rhs {
            return Err(Error::NotChainMap(k));
        }
    }
    let mut matrices = BTreeMap::new();
    for &k in &degrees {
        let fk = block(f, k, d.dim(k), c.dim(k))?;
        let columns = source
            .representatives(k)
            .iter()
            .map(|r| target.class_of(k, &fk.apply(r)))
            .collect::<Result<Vec<_>>>()?;
        matrices.insert(k, Matrix::from_columns(target.betti(k), &columns));
    }
    Ok(InducedMap { matrices })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub exact: bool,
    pub nodes: Vec<String>,
    /// Name of the first node (and degree) where exactness fails.
    pub failure: Option<ExactnessFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessFailure {
    pub node: String,
    pub degree: i64,
    pub kernel_dim: usize,
    pub image_rank: usize,
}

/// Exactness of `0 → V_0 → V_1 → … → V_n → 0`, degree by degree. `dims[i]`
/// gives the graded dimension of node `i`, `maps[i] : V_i → V_{i+1}`.
pub fn is_exact(
    names: &[String],
    dims: &[BTreeMap<i64, usize>],
    maps: &[BTreeMap<i64, Matrix>],
) -> Result<ExactnessReport> {
    if names.len() != dims.len() || maps.len() + 1 != dims.len().max(1) {
        return Err(Error::Shape("exact sequence shape".into()));
    }
    let degrees: BTreeSet<i64> = dims.iter().flat_map(|d| d.keys().copied()).collect();
    let dim = |i: usize, k: i64| dims[i].get(&k).copied().unwrap_or(0);
    let map = |i: usize, k: i64| -> Result<Matrix> {
        let (r, c) = (dim(i + 1, k), dim(i, k));
        match maps[i].get(&k) {
            Some(m) if m.rows() == r && m.cols() == c => Ok(m.clone()),
            Some(_) => Err(Error::Shape(format!("map {i} in degree {k}"))),
            None => Ok(Matrix::zeros(r, c)),
        }
    };
    for i in 0..maps.len().saturating_sub(1) {
        for &k in &degrees {
            if !map(i + 1, k)?.mul(&map(i, k)?)?.is_zero() {
                return Err(Error::DiagramViolation(format!(
                    "composite {} → {} → {} is nonzero in degree {k}",
                    names[i],
                    names[i + 1],
                    names[i + 2]
                )));
            }
        }
    }
    let mut failure = None;
    'outer: for (i, name) in names.iter().enumerate().take(dims.len()) {
        for &k in &degrees {
            let kernel_dim = if i < maps.len() {
                dim(i, k) - map(i, k)?.rank()
            } else {
                dim(i, k)
            };
            let image_rank = if i > 0 { map(i - 1, k)?.rank() } else { 0 };
            if kernel_dim != image_rank {
                failure = Some(ExactnessFailure {
                    node: name.clone(),
                    degree: k,
                    kernel_dim,
                    image_rank,
                });
                break 'outer;
            }
        }
    }
    Ok(ExactnessReport {
        exact: failure.is_none(),
        nodes: names.to_vec(),
        failure,
    })
}

/// Cocycle vectors converted back into elements of a graded space.
pub fn vector_to_element(space: &GradedSpace, degree: i64, v: &[Scalar]) -> Element {
    Element::from_terms(
        space
            .indices_of_degree(degree)
            .into_iter()
            .zip(v.iter().cloned()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Generator;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn fix_a() -> (GradedSpace, LinearMap) {
        let s = GradedSpace::new([Generator::new("a", 0, 1), Generator::new("b", 1, 1)], 2).unwrap();
        let d = LinearMap::from_images([(0, Element::generator(1))]);
        (s, d)
    }

    #[test]
    fn fix_a_is_acyclic() {
        let (s, d) = fix_a();
        let c = ChainComplex::from_linear_map(&s, &d).unwrap();
        assert_eq!(c.differential(0), Matrix::from_rows(vec![vec![int(1)]]).unwrap());
        let h = cohomology(&c);
        assert_eq!(h.report().betti(), vec![(0, 0), (1, 0)]);
    }

    #[test]
    fn zero_differential_keeps_everything() {
        let s = GradedSpace::new(
            (0..2)
                .map(|i| Generator::new(format!("u{i}"), 0, 0))
                .chain((0..3).map(|i| Generator::new(format!("v{i}"), 1, 0))),
            1,
        )
        .unwrap();
        let c = ChainComplex::from_linear_map(&s, &LinearMap::zero()).unwrap();
        assert_eq!(cohomology(&c).report().betti(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn non_differential_rejected() {
        let s = GradedSpace::new(
            [Generator::new("p", 0, 0), Generator::new("q", 1, 0), Generator::new("r", 2, 0)],
            1,
        )
        .unwrap();
        let d = LinearMap::from_images([(0, Element::generator(1)), (1, Element::generator(2))]);
        assert_eq!(
            ChainComplex::from_linear_map(&s, &d),
            Err(Error::NotDifferential(0))
        );
    }

    #[test]
    fn identity_induces_identity() {
        let s = GradedSpace::new([Generator::new("u", 0, 0), Generator::new("w", 0, 0)], 1).unwrap();
        let c = ChainComplex::from_linear_map(&s, &LinearMap::zero()).unwrap();
        let h = cohomology(&c);
        let id = chain_map(&s, &s, &LinearMap::identity(2)).unwrap();
        let m = induced_map_on_cohomology(&h, &h, &id).unwrap();
        assert!(m.is_isomorphism());
        assert_eq!(m.matrices[&0], Matrix::identity(2));
    }

    #[test]
    fn acyclic_to_zero_is_quasi_iso() {
        let (s, d) = fix_a();
        let ha = cohomology(&ChainComplex::from_linear_map(&s, &d).unwrap());
        let z = GradedSpace::zero(2).unwrap();
        let hz = cohomology(&ChainComplex::from_linear_map(&z, &LinearMap::zero()).unwrap());
        let f = chain_map(&s, &z, &LinearMap::zero()).unwrap();
        assert!(induced_map_on_cohomology(&ha, &hz, &f).unwrap().is_isomorphism());
    }

    #[test]
    fn non_surjective_inclusion_detected() {
        // ℚ → ℚ² in degree 0 with zero differentials
        let s = GradedSpace::new([Generator::new("u", 0, 0)], 1).unwrap();
        let t = GradedSpace::new([Generator::new("u", 0, 0), Generator::new("w", 0, 0)], 1).unwrap();
        let hs = cohomology(&ChainComplex::from_linear_map(&s, &LinearMap::zero()).unwrap());
        let ht = cohomology(&ChainComplex::from_linear_map(&t, &LinearMap::zero()).unwrap());
        let f = chain_map(&s, &t, &LinearMap::from_images([(0, Element::generator(0))])).unwrap();
        let m = induced_map_on_cohomology(&hs, &ht, &f).unwrap();
        assert_eq!(m.failing_degree(), Some(0));
    }

    fn node(d: usize) -> BTreeMap<i64, usize> {
        BTreeMap::from([(0, d)])
    }

    #[test]
    fn exactness_examples() {
        let names: Vec<String> = ["V", "W"].iter().map(|s| s.to_string()).collect();
        let id = BTreeMap::from([(0, Matrix::identity(2))]);
        let r = is_exact(&names, &[node(2), node(2)], &[id]).unwrap();
        assert!(r.exact);

        // 0 → ℚ → ℚ² → ℚ → 0 with f ↦ (f, f) and (g1, g2) ↦ g2 − g1
        let names: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        let inc = BTreeMap::from([(0, Matrix::from_rows(vec![vec![int(1)], vec![int(1)]]).unwrap())]);
        let diff = BTreeMap::from([(0, Matrix::from_rows(vec![vec![int(-1), int(1)]]).unwrap())]);
        let r = is_exact(&names, &[node(1), node(2), node(1)], &[inc.clone(), diff]).unwrap();
        assert!(r.exact);

        let zero = BTreeMap::from([(0, Matrix::zeros(1, 2))]);
        let r = is_exact(&names, &[node(1), node(2), node(1)], &[inc, zero]).unwrap();
        assert_eq!(r.failure.unwrap().node, "B");
    }

    fn random_complex() -> impl Strategy<Value = (ChainComplex, Vec<usize>)> {
        // d = A·B with B·A = 0 is awkward to sample; use d_0 arbitrary and
        // d_1 a basis of the left null space of d_0.
        (1usize..4, 1usize..4, proptest::collection::vec(-2i64..3, 9)).prop_map(|(n0, n1, v)| {
            let d0 = Matrix::from_rows(
                (0..n1).map(|i| (0..n0).map(|j| int(v[(i * 3 + j) % v.len()])).collect()).collect(),
            )
            .unwrap();
            // rows of d1 span the left kernel of d0
            let t = Matrix::from_rows((0..n0).map(|j| d0.column(j)).collect()).unwrap();
            let rows = t.kernel();
            let n2 = rows.len();
            let d1 = if n2 == 0 {
                Matrix::zeros(0, n1)
            } else {
                Matrix::from_rows(rows).unwrap()
            };
            let bases = BTreeMap::from([
                (0, (0..n0).map(|i| format!("p{i}")).collect()),
                (1, (0..n1).map(|i| format!("q{i}")).collect()),
                (2, (0..n2).map(|i| format!("r{i}")).collect::<Vec<_>>()),
            ]);
            let c = ChainComplex::new(bases, BTreeMap::from([(0, d0), (1, d1)])).unwrap();
            (c, vec![n0, n1, n2])
        })
    }

    fn permute_basis(c: &ChainComplex, k: i64) -> ChainComplex {
        // reverse the basis in degree k
        let n = c.dim(k);
        let p = Matrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| int((i + j + 1 == n) as i64)).collect())
                .collect(),
        )
        .unwrap_or_else(|_| Matrix::zeros(0, 0));
        let mut bases = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for kk in c.degrees() {
            let mut b = c.basis(kk).to_vec();
            if kk == k {
                b.reverse();
            }
            bases.insert(kk, b);
            let mut d = c.differential(kk);
            if kk == k && n > 0 {
                d = d.mul(&p).unwrap();
            }
            if kk + 1 == k && n > 0 {
                d = p.mul(&d).unwrap();
            }
            diffs.insert(kk, d);
        }
        ChainComplex::new(bases, diffs).unwrap()
    }

    proptest! {
        #[test]
        fn betti_numbers_are_basis_order_invariant((c, _) in random_complex(), k in 0i64..3) {
            let h = cohomology(&c).betti_map();
            let h2 = cohomology(&permute_basis(&c, k)).betti_map();
            prop_assert_eq!(h, h2);
        }

        #[test]
        fn euler_characteristic((c, dims) in random_complex()) {
            let h = cohomology(&c).betti_map();
            let chi_h: i64 = h.iter().map(|(&k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            let chi_c = dims[0] as i64 - dims[1] as i64 + dims[2] as i64;
            prop_assert_eq!(chi_h, chi_c);
        }

        #[test]
        fn induced_maps_are_functorial(
            (c, _) in random_complex(),
            s1 in -2i64..3,
            s2 in -2i64..3,
            h1 in proptest::collection::vec(-2i64..3, 18),
            h2 in proptest::collection::vec(-2i64..3, 18),
        ) {
            // f = s·id + d h + h d is a chain map for any homotopy h
            let h = cohomology(&c);
            let make = |s: i64, entries: &[i64]| -> ChainMap {
                let hom = |k: i64| -> Matrix {
                    let (r, cols) = (c.dim(k - 1), c.dim(k));
                    let mut m = Matrix::zeros(r, cols);
                    for i in 0..r {
                        for j in 0..cols {
                            m[(i, j)] = int(entries[(k as usize * 9 + i * 3 + j) % entries.len()]);
                        }
                    }
                    m
                };
                c.degrees().map(|k| {
                    let n = c.dim(k);
                    let mut m = Matrix::identity(n);
                    for i in 0..n { m[(i, i)] = int(s); }
                    let dh = c.differential(k - 1).mul(&hom(k)).unwrap();
                    let hd = hom(k + 1).mul(&c.differential(k)).unwrap();
                    let m = m.sub(&dh.sub(&hd.scaled_neg()).unwrap()).unwrap();
                    (k, m)
                }).collect()
            };
            let f = make(s1, &h1);
            let g = make(s2, &h2);
            let gf: ChainMap = f.iter().map(|(&k, m)| (k, g[&k].mul(m).unwrap())).collect();
            let hf = induced_map_on_cohomology(&h, &h, &f).unwrap();
            let hg = induced_map_on_cohomology(&h, &h, &g).unwrap();
            let hgf = induced_map_on_cohomology(&h, &h, &gf).unwrap();
            let composed = hg.compose(&hf).unwrap();
            for (k, m) in &hgf.matrices {
                prop_assert_eq!(m, &composed.matrices[k]);
            }
        }
    }
}
