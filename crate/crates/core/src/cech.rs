//! Čech complexes of local L∞-algebras over a finite abstract cover.
//!
//! Simplices are strictly increasing tuples of open indices; the empty
//! tuple stands for the global algebra. Level `k` is the product of the
//! local algebras over the `k`-simplices (tuples of length `k + 1`), and
//! `∂(s)(b) = Σ_j (-1)^j r(s(b∖b_j))`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::LinearMap;
use crate::homology::{cohomology, ChainComplex, CohomologyReport};
use crate::linalg::Matrix;
use crate::linfty::{LInftyMorphism, LInftyStructure, DEFAULT_VERIFY_ARITY};
use crate::modules::{module_from_morphism, module_morphism_from_triangle, ModuleMorphism};
use crate::product::{product_morphism, product_of_morphisms, ProductStructure};
use crate::resolution::{ResolutionDiagram, ResolutionMorphism};
use crate::scalar::int;

pub type Simplex = Vec<usize>;

/// The combinatorial data of a cover: named opens and the nonempty
/// intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    opens: Vec<String>,
    nerve: BTreeSet<Simplex>,
}

impl Cover {
    /// Every open is a vertex; the nerve lists the further nonempty
    /// intersections and must be closed under faces.
    pub fn new(opens: Vec<String>, intersections: &[Vec<String>]) -> Result<Self> {
        if opens.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        let mut seen = BTreeSet::new();
        for o in &opens {
            if !seen.insert(o) {
                return Err(Error::Cover(format!("open `{o}` listed twice")));
            }
        }
        let mut nerve: BTreeSet<Simplex> = (0..opens.len()).map(|i| vec![i]).collect();
        for names in intersections {
            let simplex = names
                .iter()
                .map(|n| {
                    opens
                        .iter()
                        .position(|o| o == n)
                        .ok_or_else(|| Error::Cover(format!("unknown open `{n}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if simplex.is_empty() || simplex.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::Cover(format!(
                    "intersection {names:?} must list opens in increasing order without repeats"
                )));
            }
            nerve.insert(simplex);
        }
        for s in &nerve {
            for j in 0..s.len() {
                let face = face(s, j);
                if !face.is_empty() && !nerve.contains(&face) {
                    return Err(Error::Cover(format!(
                        "nerve is not closed under faces: missing {:?}",
                        face.iter().map(|&i| &opens[i]).collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(Cover { opens, nerve })
    }

    pub fn opens(&self) -> &[String] {
        &self.opens
    }

    pub fn nerve(&self) -> impl Iterator<Item = &Simplex> {
        self.nerve.iter()
    }

    /// Simplices with `k + 1` vertices, in lexicographic order.
    pub fn simplices(&self, k: usize) -> Vec<Simplex> {
        self.nerve.iter().filter(|s| s.len() == k + 1).cloned().collect()
    }

    pub fn top_level(&self) -> usize {
        self.nerve.iter().map(Vec::len).max().unwrap_or(1) - 1
    }

    pub fn label(&self, s: &[usize]) -> String {
        if s.is_empty() {
            return "global".into();
        }
        s.iter().map(|&i| self.opens[i].as_str()).collect::<Vec<_>>().join(",")
    }

    pub fn simplex(&self, names: &[String]) -> Result<Simplex> {
        let s = names
            .iter()
            .map(|n| {
                self.opens
                    .iter()
                    .position(|o| o == n)
                    .ok_or_else(|| Error::Cover(format!("unknown open `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !s.is_empty() && !self.nerve.contains(&s) {
            return Err(Error::Cover(format!("{names:?} is not in the nerve")));
        }
        Ok(s)
    }
}

/// `b` with its `j`-th vertex removed.
fn face(b: &[usize], j: usize) -> Simplex {
    b.iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &v)| v)
        .collect()
}

/// Local algebras over the nerve with strict codimension-one restrictions.
#[derive(Debug, Clone)]
pub struct CechComplex {
    cover: Cover,
    global: Arc<LInftyStructure>,
    locals: BTreeMap<Simplex, Arc<LInftyStructure>>,
    faces: BTreeMap<(Simplex, Simplex), LInftyMorphism>,
    restrictions: BTreeMap<Simplex, LInftyMorphism>,
    levels: Vec<ProductStructure>,
    level_restrictions: Vec<LInftyMorphism>,
    differentials: Vec<LinearMap>,
}

impl CechComplex {
    /// `faces[(a, b)]` is the restriction from `a` to `b ⊃ a` (one vertex
    /// more; `a` may be the empty tuple, i.e. the global algebra).
    pub fn new(
        cover: Cover,
        global: Arc<LInftyStructure>,
        locals: BTreeMap<Simplex, Arc<LInftyStructure>>,
        faces: BTreeMap<(Simplex, Simplex), LinearMap>,
    ) -> Result<Self> {
        let algebra = |s: &Simplex| -> Result<Arc<LInftyStructure>> {
            if s.is_empty() {
                return Ok(global.clone());
            }
            locals
                .get(s)
                .cloned()
                .ok_or_else(|| Error::Cover(format!("no local algebra on {}", cover.label(s))))
        };
        if let Some(extra) = locals.keys().find(|s| !cover.nerve.contains(*s)) {
            return Err(Error::Cover(format!("local algebra on {:?} outside the nerve", extra)));
        }
        let mut strict = BTreeMap::new();
        for b in &cover.nerve {
            for j in 0..b.len() {
                let a = face(b, j);
                let f = faces.get(&(a.clone(), b.clone())).ok_or_else(|| {
                    Error::Cover(format!(
                        "missing restriction {} → {}",
                        cover.label(&a),
                        cover.label(b)
                    ))
                })?;
                let m = LInftyMorphism::strict(algebra(&a)?, algebra(b)?, f)?;
                if !m.check(DEFAULT_VERIFY_ARITY)?.passed() {
                    return Err(Error::IdentityViolated(format!(
                        "restriction {} → {} is not an L∞-morphism",
                        cover.label(&a),
                        cover.label(b)
                    )));
                }
                strict.insert((a, b.clone()), m);
            }
        }
        if let Some(key) = faces.keys().find(|k| !strict.contains_key(*k)) {
            return Err(Error::Cover(format!(
                "restriction {} → {} is not a codimension-one face",
                cover.label(&key.0),
                cover.label(&key.1)
            )));
        }
        // functoriality: both routes a ⊂ c ⊂ b agree when b has two more
        // vertices than a
        for b in &cover.nerve {
            for j in 0..b.len() {
                for i in 0..b.len() - 1 {
                    let c = face(b, j);
                    let a = face(&c, i);
                    let via_c = strict[&(c.clone(), b.clone())]
                        .linear_part()
                        .compose(&strict[&(a.clone(), c.clone())].linear_part());
                    // the other route drops the same two vertices in the
                    // opposite order
                    let other_c: Simplex = b.iter().copied().filter(|&v| v != c[i]).collect();
                    let via_other = strict[&(other_c.clone(), b.clone())]
                        .linear_part()
                        .compose(&strict[&(a.clone(), other_c)].linear_part());
                    if via_c != via_other {
                        return Err(Error::NonFunctorial {
                            lower: a.iter().map(|&v| cover.opens[v].clone()).collect(),
                            upper: b.iter().map(|&v| cover.opens[v].clone()).collect(),
                        });
                    }
                }
            }
        }
        let mut restrictions = BTreeMap::new();
        for s in &cover.nerve {
            let mut r = LInftyMorphism::identity(global.clone());
            for len in 1..=s.len() {
                let (lower, upper) = (s[..len - 1].to_vec(), s[..len].to_vec());
                r = LInftyMorphism::strict(
                    global.clone(),
                    algebra(&upper)?,
                    &strict[&(lower, upper)].linear_part().compose(&r.linear_part()),
                )?;
            }
            restrictions.insert(s.clone(), r);
        }
        let order = global.space().nilpotency();
        let mut levels = Vec::new();
        let mut level_restrictions = Vec::new();
        for k in 0..=cover.top_level() {
            let simplices = cover.simplices(k);
            let product = ProductStructure::with_order(
                simplices.iter().map(|s| cover.label(s)).collect(),
                simplices.iter().map(|s| locals[s].clone()).collect(),
                Some(order),
            )?;
            let family: Vec<LInftyMorphism> = simplices.iter().map(|s| restrictions[s].clone()).collect();
            level_restrictions.push(product_morphism(&product, &family)?);
            levels.push(product);
        }
        let mut differentials = Vec::new();
        for k in 0..cover.top_level() {
            let (lower, upper) = (&levels[k], &levels[k + 1]);
            let lower_simplices = cover.simplices(k);
            let mut d = LinearMap::zero();
            for (bi, b) in cover.simplices(k + 1).iter().enumerate() {
                for j in 0..b.len() {
                    let a = face(b, j);
                    let ai = lower_simplices.iter().position(|s| *s == a).expect("closed nerve");
                    let r = strict[&(a.clone(), b.clone())].linear_part();
                    let sign = if j % 2 == 0 { int(1) } else { int(-1) };
                    for g in 0..locals[&a].space().dim() {
                        let src = lower.product_space().embed_index(ai, g);
                        let mut img = d.image(src);
                        img.add_scaled(&upper.product_space().embed(bi, &r.image(g)), &sign);
                        d.set(src, img);
                    }
                }
            }
            differentials.push(d);
        }
        Ok(CechComplex {
            cover,
            global,
            locals,
            faces: strict,
            restrictions,
            levels,
            level_restrictions,
            differentials,
        })
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn global(&self) -> &Arc<LInftyStructure> {
        &self.global
    }

    pub fn local(&self, s: &Simplex) -> Option<&Arc<LInftyStructure>> {
        self.locals.get(s)
    }

    pub fn face(&self, a: &Simplex, b: &Simplex) -> Option<&LInftyMorphism> {
        self.faces.get(&(a.clone(), b.clone()))
    }

    /// `R^a`, the restriction from the global algebra to a simplex.
    pub fn restriction(&self, s: &Simplex) -> Option<&LInftyMorphism> {
        self.restrictions.get(s)
    }

    pub fn levels(&self) -> &[ProductStructure] {
        &self.levels
    }

    /// `𝓡^k : L → Č^k`.
    pub fn level_restrictions(&self) -> &[LInftyMorphism] {
        &self.level_restrictions
    }

    pub fn differentials(&self) -> &[LinearMap] {
        &self.differentials
    }

    /// The Čech complex `Č^0 → Č^1 → …` of the zeroth components, graded
    /// by Čech degree.
    pub fn cech_complex(&self) -> Result<ChainComplex> {
        let mut bases = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (k, level) in self.levels.iter().enumerate() {
            let s = level.space();
            bases.insert(k as i64, (0..s.dim()).map(|i| s.name(i).to_string()).collect());
            if let Some(d) = self.differentials.get(k) {
                let t = self.levels[k + 1].space();
                let mut m = Matrix::zeros(t.dim(), s.dim());
                for j in 0..s.dim() {
                    for (i, c) in d.image(j).iter() {
                        m[(i, j)] = c.clone();
                    }
                }
                diffs.insert(k as i64, m);
            }
        }
        ChainComplex::new(bases, diffs)
    }

    pub fn cech_cohomology(&self) -> Result<CohomologyReport> {
        Ok(cohomology(&self.cech_complex()?).report())
    }

    /// The resolution `0 → K → Č^0 → Č^1 → …` of modules over the source of
    /// `along : L → K` (the global algebra itself when `along` is `None`):
    /// the levels are modules along `𝓡^k ∘ along`, the augmentation comes
    /// from the triangle `𝓡^0 ∘ along = 𝓡^0 ∘ along`, and `∂^k` is the
    /// Čech differential with only a zeroth component.
    pub fn resolution(&self, along: Option<&LInftyMorphism>) -> Result<ResolutionDiagram> {
        let along = match along {
            Some(u) => u.clone(),
            None => LInftyMorphism::identity(self.global.clone()),
        };
        if *along.target() != self.global {
            return Err(Error::SpaceMismatch("the morphism must land in the global algebra".into()));
        }
        let composites = self
            .level_restrictions
            .iter()
            .map(|r| along.then(r))
            .collect::<Result<Vec<_>>>()?;
        let augmentation = module_morphism_from_triangle(&composites[0], &along, &self.level_restrictions[0])?;
        let modules = composites
            .iter()
            .map(|g| module_from_morphism(g).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let connecting = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| ModuleMorphism::strict(modules[k].clone(), modules[k + 1].clone(), d))
            .collect::<Result<Vec<_>>>()?;
        ResolutionDiagram::new(augmentation, connecting)
    }
}

/// The ladder induced by a global morphism `U : L → K` and fiberwise
/// morphisms `U^a : L_a → K_a` over the same cover, with
/// `U^a ∘ R^a = A^a ∘ U`.
pub fn cech_ladder(
    source: &CechComplex,
    target: &CechComplex,
    u: &LInftyMorphism,
    fiberwise: &BTreeMap<Simplex, LInftyMorphism>,
) -> Result<ResolutionMorphism> {
    if source.cover != target.cover {
        return Err(Error::Cover("ladders need one cover on both sides".into()));
    }
    let top = module_morphism_from_triangle(u, &LInftyMorphism::identity(source.global.clone()), u)?;
    let mut levels = Vec::new();
    for k in 0..source.levels.len() {
        let simplices = source.cover.simplices(k);
        let family = simplices
            .iter()
            .map(|s| {
                fiberwise.get(s).cloned().ok_or_else(|| {
                    Error::Cover(format!("no fiberwise morphism on {}", source.cover.label(s)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let prod = product_of_morphisms(&source.levels[k], &target.levels[k], &family)?;
        let g = u.then(&target.level_restrictions[k])?;
        levels.push(module_morphism_from_triangle(&g, &source.level_restrictions[k], &prod)?);
    }
    ResolutionMorphism::new(source.resolution(None)?, target.resolution(Some(u))?, top, levels)
}

/// The same data with every local algebra equal to the global one and all
/// restrictions the identity.
pub fn constant_cech(cover: Cover, global: Arc<LInftyStructure>) -> Result<CechComplex> {
    let dim = global.space().dim();
    let locals: BTreeMap<Simplex, Arc<LInftyStructure>> =
        cover.nerve.iter().map(|s| (s.clone(), global.clone())).collect();
    let mut faces = BTreeMap::new();
    for b in &cover.nerve {
        for j in 0..b.len() {
            faces.insert((face(b, j), b.clone()), LinearMap::identity(dim));
        }
    }
    CechComplex::new(cover, global, locals, faces)
}

/// Applies a fiberwise morphism on every simplex of a constant cover.
pub fn constant_fiberwise(cover: &Cover, u: &LInftyMorphism) -> BTreeMap<Simplex, LInftyMorphism> {
    cover.nerve.iter().map(|s| (s.clone(), u.clone())).collect()
}
