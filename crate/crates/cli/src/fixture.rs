//! The fixture format: a JSON document of named sections whose scalars are
//! exact `"p/q"` strings. Parsing happens in two passes — serde checks the
//! shape, then every object is built and validated by the library, in
//! dependency order.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use linfty::cech::{cech_ladder, CechComplex, Cover, Simplex};
use linfty::linfty::{table_entry, Bracket, Table};
use linfty::modules::{module_from_morphism, module_morphism_from_triangle, LInftyModule, ModuleMorphism, ModuleTable};
use linfty::resolution::{ResolutionDiagram, ResolutionMorphism};
use linfty::scalar::{format_scalar, parse_scalar};
use linfty::{Element, Generator, GradedSpace, LInftyMorphism, LInftyStructure, LinearMap, Scalar, Word};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

pub const FORMAT_VERSION: &str = "1";

/// An exact coefficient, written `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeff(pub Scalar);

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(&self.0))
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Coeff;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exact scalar string \"p\" or \"p/q\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Coeff, E> {
                parse_scalar(v)
                    .map(Coeff)
                    .ok_or_else(|| E::custom(format!("`{v}` is not an exact scalar \"p\" or \"p/q\"")))
            }
        }
        d.deserialize_str(V)
    }
}

/// Generator name ↦ coefficient.
pub type Scalars = BTreeMap<String, Coeff>;

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, RawSpace>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub structures: BTreeMap<String, RawStructure>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, RawMorphism>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, RawModule>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub module_morphisms: BTreeMap<String, RawModuleMorphism>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub covers: BTreeMap<String, RawCover>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub resolutions: BTreeMap<String, RawResolution>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ladders: BTreeMap<String, RawLadder>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, RawElement>,
    #[serde(default, skip_serializing_if = "RawDefaults::is_empty")]
    pub defaults: RawDefaults,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpace {
    pub order: u32,
    pub generators: Vec<RawGenerator>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGenerator {
    pub name: String,
    pub degree: i64,
    pub level: u32,
}

/// A Taylor coefficient `Q(x∨y∨…) = output`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComponent {
    pub input: Vec<String>,
    pub output: Scalars,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStructure {
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<RawComponent>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curved_lie: Option<RawCurvedLie>,
}

/// A curved Lie algebra in the unshifted convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCurvedLie {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub curvature: Scalars,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, Scalars>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bracket: Vec<RawBracket>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBracket {
    pub left: String,
    pub right: String,
    pub value: Scalars,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMorphism {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<RawComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModuleComponent {
    pub input: Vec<String>,
    pub module: String,
    pub output: Scalars,
}

/// Exactly one of `along`, `dg` or `components` (absent: the zero module).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModule {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub along: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dg: Option<RawDgModule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<RawModuleComponent>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDgModule {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, Scalars>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<RawAction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAction {
    pub base: String,
    pub module: String,
    pub value: Scalars,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTriangle {
    pub g: String,
    pub h: String,
    pub f: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModuleMorphism {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle: Option<RawTriangle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<RawModuleComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCover {
    pub opens: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intersections: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLocal {
    pub simplex: Vec<String>,
    pub structure: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRestriction {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub map: BTreeMap<String, Scalars>,
}

/// Local algebras default to the global one and restrictions to the
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCech {
    pub cover: String,
    pub global: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub locals: Vec<RawLocal>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restrictions: Vec<RawRestriction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub along: Option<String>,
}

/// Either an explicit diagram or a Čech resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawResolution {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub connecting: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cech: Option<RawCech>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFiberwise {
    pub simplex: Vec<String>,
    pub morphism: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCechLadder {
    pub morphism: String,
    /// Defaults to `morphism` on every simplex.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fiberwise: Vec<RawFiberwise>,
}

/// Replaces a level map of a ladder by a strict one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOverride {
    pub level: usize,
    pub linear: BTreeMap<String, Scalars>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLadder {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cech: Option<RawCechLadder>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<RawOverride>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawElement {
    pub structure: String,
    pub value: Scalars,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDefaults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_element: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_arity: Option<usize>,
}

impl RawDefaults {
    fn is_empty(&self) -> bool {
        *self == RawDefaults::default()
    }
}

/// Rejects number literals with a fraction or exponent outside strings.
fn reject_floats(text: &str) -> Result<(), CliError> {
    let (mut line, mut column) = (1, 0);
    let mut in_string = false;
    let mut escaped = false;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        column += 1;
        if c == '\n' {
            line += 1;
            column = 0;
            continue;
        }
        if in_string {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        if c == '"' {
            in_string = true;
        } else if c == '-' || c.is_ascii_digit() {
            let start = column;
            let mut token = String::from(c);
            while let Some(&n) = chars.peek() {
                if n.is_ascii_alphanumeric() || n == '.' || n == '+' || n == '-' {
                    token.push(n);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            if token.contains(['.', 'e', 'E']) {
                return Err(CliError::Parse {
                    line,
                    column: start,
                    message: format!("exact scalars required: float literal `{token}`"),
                });
            }
        }
    }
    Ok(())
}

pub fn parse_raw(text: &str) -> Result<RawDocument, CliError> {
    reject_floats(text)?;
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.format_version != FORMAT_VERSION {
        return Err(CliError::fixture(
            "format_version",
            format!("unsupported version `{}` (expected `{FORMAT_VERSION}`)", raw.format_version),
        ));
    }
    Ok(raw)
}

/// The canonical text of a document: sorted keys, normalized scalars,
/// defaults omitted.
pub fn serialize(raw: &RawDocument) -> String {
    let mut s = serde_json::to_string_pretty(raw).expect("documents serialize");
    s.push('\n');
    s
}

/// Resolves a fixture path: as given, with `.json` appended, or as a
/// directory holding `fixture.json`.
pub fn resolve_path(path: &Path) -> Result<PathBuf, CliError> {
    let with_ext = PathBuf::from(format!("{}.json", path.display()));
    let candidates = [path.to_path_buf(), with_ext, path.join("fixture.json")];
    candidates
        .into_iter()
        .find(|p| p.is_file())
        .ok_or_else(|| CliError::Io(format!("no fixture at {}", path.display())))
}

/// A fully built fixture.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub raw: RawDocument,
    pub spaces: BTreeMap<String, Arc<GradedSpace>>,
    pub structures: BTreeMap<String, Arc<LInftyStructure>>,
    pub morphisms: BTreeMap<String, LInftyMorphism>,
    pub modules: BTreeMap<String, Arc<LInftyModule>>,
    pub module_morphisms: BTreeMap<String, ModuleMorphism>,
    pub covers: BTreeMap<String, Cover>,
    pub cech: BTreeMap<String, CechComplex>,
    pub resolutions: BTreeMap<String, ResolutionDiagram>,
    pub ladders: BTreeMap<String, ResolutionMorphism>,
    /// Name ↦ (structure, value).
    pub elements: BTreeMap<String, (String, Element)>,
}

pub fn load(path: &Path) -> Result<Fixture, CliError> {
    let path = resolve_path(path)?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_fixture(&text)
}

pub fn parse_fixture(text: &str) -> Result<Fixture, CliError> {
    build(parse_raw(text)?)
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str, at: &str) -> Result<&'a T, CliError> {
    map.get(name)
        .ok_or_else(|| CliError::fixture(at, format!("unknown {kind} `{name}`")))
}

fn element(space: &GradedSpace, value: &Scalars, at: &str) -> Result<Element, CliError> {
    let mut e = Element::zero();
    for (name, c) in value {
        let i = space.index_of(name).map_err(|err| CliError::fixture(at, err))?;
        e.add_term(i, c.0.clone());
    }
    Ok(e)
}

fn linear_map(source: &GradedSpace, target: &GradedSpace, images: &BTreeMap<String, Scalars>, at: &str) -> Result<LinearMap, CliError> {
    let mut map = LinearMap::zero();
    for (name, img) in images {
        let i = source.index_of(name).map_err(|e| CliError::fixture(at, e))?;
        map.set(i, element(target, img, &format!("{at}.{name}"))?);
    }
    Ok(map)
}

fn table(source: &GradedSpace, target: &GradedSpace, comps: &[RawComponent], at: &str) -> Result<Table, CliError> {
    let mut t = Table::new();
    for (k, c) in comps.iter().enumerate() {
        let at = format!("{at}[{k}]");
        let value = element(target, &c.output, &at)?;
        let factors: Vec<&str> = c.input.iter().map(String::as_str).collect();
        if let Some((w, v)) = table_entry(source, &factors, value).map_err(|e| CliError::fixture(&at, e))? {
            if t.insert(w, v).is_some() {
                return Err(CliError::fixture(&at, "component given twice"));
            }
        }
    }
    Ok(t)
}

fn module_table(
    base: &GradedSpace,
    source: &GradedSpace,
    target: &GradedSpace,
    comps: &[RawModuleComponent],
    at: &str,
) -> Result<ModuleTable, CliError> {
    let mut t = ModuleTable::new();
    for (k, c) in comps.iter().enumerate() {
        let at = format!("{at}[{k}]");
        let value = element(target, &c.output, &at)?;
        let m = source.index_of(&c.module).map_err(|e| CliError::fixture(&at, e))?;
        let factors: Vec<&str> = c.input.iter().map(String::as_str).collect();
        if let Some((w, v)) = table_entry(base, &factors, value).map_err(|e| CliError::fixture(&at, e))? {
            if t.insert((w, m), v).is_some() {
                return Err(CliError::fixture(&at, "component given twice"));
            }
        }
    }
    Ok(t)
}

fn default_cap(words: impl Iterator<Item = usize>) -> usize {
    words.max().unwrap_or(0)
}

fn simplex(cover: &Cover, names: &[String], at: &str) -> Result<Simplex, CliError> {
    cover.simplex(names).map_err(|e| CliError::fixture(at, e))
}

pub fn build(raw: RawDocument) -> Result<Fixture, CliError> {
    let mut spaces = BTreeMap::new();
    for (name, s) in &raw.spaces {
        let gens = s.generators.iter().map(|g| Generator::new(g.name.clone(), g.degree, g.level));
        let space = GradedSpace::new(gens, s.order).map_err(|e| CliError::fixture(&format!("spaces.{name}"), e))?;
        spaces.insert(name.clone(), Arc::new(space));
    }

    let mut structures = BTreeMap::new();
    for (name, s) in &raw.structures {
        let at = format!("structures.{name}");
        let space = lookup(&spaces, "space", &s.space, &at)?.clone();
        let q = match (&s.components, &s.curved_lie) {
            (Some(_), Some(_)) => return Err(CliError::fixture(&at, "give either components or curved_lie")),
            (Some(comps), None) => {
                let t = table(&space, &space, comps, &format!("{at}.components"))?;
                let cap = s.arity_cap.unwrap_or_else(|| default_cap(t.keys().map(Word::arity)));
                LInftyStructure::new(space, t, cap)
            }
            (None, Some(lie)) => {
                let at = format!("{at}.curved_lie");
                let curvature = element(&space, &lie.curvature, &format!("{at}.curvature"))?;
                let d = linear_map(&space, &space, &lie.differential, &format!("{at}.differential"))?;
                let mut bracket = Bracket::new();
                for (k, b) in lie.bracket.iter().enumerate() {
                    let at = format!("{at}.bracket[{k}]");
                    let i = space.index_of(&b.left).map_err(|e| CliError::fixture(&at, e))?;
                    let j = space.index_of(&b.right).map_err(|e| CliError::fixture(&at, e))?;
                    bracket.insert((i, j), element(&space, &b.value, &at)?);
                }
                LInftyStructure::from_curved_lie(space, &curvature, &d, &bracket)
            }
            (None, None) => Ok(LInftyStructure::zero(space)),
        }
        .map_err(|e| CliError::fixture(&at, e))?;
        structures.insert(name.clone(), Arc::new(q));
    }

    let mut morphisms = BTreeMap::new();
    for (name, m) in &raw.morphisms {
        let at = format!("morphisms.{name}");
        let source = lookup(&structures, "structure", &m.source, &at)?.clone();
        let target = lookup(&structures, "structure", &m.target, &at)?.clone();
        let f = if m.identity {
            if source != target || !m.components.is_empty() {
                return Err(CliError::fixture(&at, "an identity needs equal endpoints and no components"));
            }
            Ok(LInftyMorphism::identity(source))
        } else {
            let t = table(source.space(), target.space(), &m.components, &format!("{at}.components"))?;
            let cap = m.arity_cap.unwrap_or_else(|| default_cap(t.keys().map(Word::arity)).max(1));
            LInftyMorphism::new(source, target, t, cap)
        }
        .map_err(|e| CliError::fixture(&at, e))?;
        morphisms.insert(name.clone(), f);
    }

    let mut modules = BTreeMap::new();
    for (name, m) in &raw.modules {
        let at = format!("modules.{name}");
        let module = if let Some(along) = &m.along {
            if m.base.is_some() || m.space.is_some() || m.dg.is_some() || m.components.is_some() {
                return Err(CliError::fixture(&at, "a module along a morphism takes no other fields"));
            }
            module_from_morphism(lookup(&morphisms, "morphism", along, &at)?)
        } else {
            let need = |field: &Option<String>, what: &str| {
                field
                    .clone()
                    .ok_or_else(|| CliError::fixture(&at, format!("missing `{what}`")))
            };
            let base = lookup(&structures, "structure", &need(&m.base, "base")?, &at)?.clone();
            let space = lookup(&spaces, "space", &need(&m.space, "space")?, &at)?.clone();
            match (&m.dg, &m.components) {
                (Some(_), Some(_)) => return Err(CliError::fixture(&at, "give either dg or components")),
                (Some(dg), None) => {
                    let b = linear_map(&space, &space, &dg.differential, &format!("{at}.dg.differential"))?;
                    let mut action = BTreeMap::new();
                    for (k, a) in dg.action.iter().enumerate() {
                        let at = format!("{at}.dg.action[{k}]");
                        let g = base.space().index_of(&a.base).map_err(|e| CliError::fixture(&at, e))?;
                        let v = space.index_of(&a.module).map_err(|e| CliError::fixture(&at, e))?;
                        action.insert((g, v), element(&space, &a.value, &at)?);
                    }
                    LInftyModule::from_dg_module(base, space, &b, &action)
                }
                (None, Some(comps)) => {
                    let t = module_table(base.space(), &space, &space, comps, &format!("{at}.components"))?;
                    let cap = m.arity_cap.unwrap_or_else(|| default_cap(t.keys().map(|(w, _)| w.arity())));
                    LInftyModule::new(base, space, t, cap)
                }
                (None, None) => LInftyModule::zero(base, space),
            }
        }
        .map_err(|e| CliError::fixture(&at, e))?;
        modules.insert(name.clone(), Arc::new(module));
    }

    let mut module_morphisms = BTreeMap::new();
    for (name, m) in &raw.module_morphisms {
        let at = format!("module_morphisms.{name}");
        let f = if let Some(t) = &m.triangle {
            if m.source.is_some() || m.target.is_some() || m.identity || !m.components.is_empty() {
                return Err(CliError::fixture(&at, "a triangle takes no other fields"));
            }
            let get = |n: &str| lookup(&morphisms, "morphism", n, &at);
            module_morphism_from_triangle(get(&t.g)?, get(&t.h)?, get(&t.f)?)
        } else {
            let get = |field: &Option<String>, what: &str| -> Result<Arc<LInftyModule>, CliError> {
                let n = field
                    .as_deref()
                    .ok_or_else(|| CliError::fixture(&at, format!("missing `{what}`")))?;
                Ok(lookup(&modules, "module", n, &at)?.clone())
            };
            let (source, target) = (get(&m.source, "source")?, get(&m.target, "target")?);
            if m.identity {
                if source != target || !m.components.is_empty() {
                    return Err(CliError::fixture(&at, "an identity needs equal endpoints and no components"));
                }
                Ok(ModuleMorphism::identity(source))
            } else {
                let t = module_table(
                    source.base().space(),
                    source.space(),
                    target.space(),
                    &m.components,
                    &format!("{at}.components"),
                )?;
                let cap = m.arity_cap.unwrap_or_else(|| default_cap(t.keys().map(|(w, _)| w.arity())));
                ModuleMorphism::new(source, target, t, cap)
            }
        }
        .map_err(|e| CliError::fixture(&at, e))?;
        module_morphisms.insert(name.clone(), f);
    }

    let mut covers = BTreeMap::new();
    for (name, c) in &raw.covers {
        let cover = Cover::new(c.opens.clone(), &c.intersections)
            .map_err(|e| CliError::fixture(&format!("covers.{name}"), e))?;
        covers.insert(name.clone(), cover);
    }

    let mut cech = BTreeMap::new();
    let mut resolutions = BTreeMap::new();
    for (name, r) in &raw.resolutions {
        let at = format!("resolutions.{name}");
        let diagram = if let Some(c) = &r.cech {
            if r.augmentation.is_some() || !r.connecting.is_empty() {
                return Err(CliError::fixture(&at, "a Čech resolution takes no explicit maps"));
            }
            let at = format!("{at}.cech");
            let cover = lookup(&covers, "cover", &c.cover, &at)?.clone();
            let global = lookup(&structures, "structure", &c.global, &at)?.clone();
            let mut locals: BTreeMap<Simplex, Arc<LInftyStructure>> =
                cover.nerve().map(|s| (s.clone(), global.clone())).collect();
            for (k, l) in c.locals.iter().enumerate() {
                let at = format!("{at}.locals[{k}]");
                let s = simplex(&cover, &l.simplex, &at)?;
                if s.is_empty() {
                    return Err(CliError::fixture(&at, "the empty simplex is the global algebra"));
                }
                locals.insert(s, lookup(&structures, "structure", &l.structure, &at)?.clone());
            }
            let algebra = |s: &Simplex| if s.is_empty() { global.clone() } else { locals[s].clone() };
            let mut faces = BTreeMap::new();
            for b in cover.nerve() {
                for j in 0..b.len() {
                    let mut a = b.clone();
                    a.remove(j);
                    let (sa, sb) = (algebra(&a), algebra(b));
                    if sa.space() == sb.space() {
                        faces.insert((a, b.clone()), LinearMap::identity(sa.space().dim()));
                    }
                }
            }
            for (k, rr) in c.restrictions.iter().enumerate() {
                let at = format!("{at}.restrictions[{k}]");
                let (a, b) = (simplex(&cover, &rr.from, &at)?, simplex(&cover, &rr.to, &at)?);
                let map = linear_map(algebra(&a).space(), algebra(&b).space(), &rr.map, &at)?;
                faces.insert((a, b), map);
            }
            let complex = CechComplex::new(cover, global, locals, faces).map_err(|e| CliError::fixture(&at, e))?;
            let along = c
                .along
                .as_ref()
                .map(|u| lookup(&morphisms, "morphism", u, &at))
                .transpose()?;
            let diagram = complex.resolution(along).map_err(|e| CliError::fixture(&at, e))?;
            if c.along.is_none() {
                cech.insert(name.clone(), complex);
            }
            diagram
        } else {
            let aug = r
                .augmentation
                .as_deref()
                .ok_or_else(|| CliError::fixture(&at, "missing `augmentation` (or `cech`)"))?;
            let aug = lookup(&module_morphisms, "module morphism", aug, &at)?.clone();
            let connecting = r
                .connecting
                .iter()
                .map(|d| lookup(&module_morphisms, "module morphism", d, &at).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            ResolutionDiagram::new(aug, connecting).map_err(|e| CliError::fixture(&at, e))?
        };
        resolutions.insert(name.clone(), diagram);
    }

    let mut ladders = BTreeMap::new();
    for (name, l) in &raw.ladders {
        let at = format!("ladders.{name}");
        let ladder = if let Some(c) = &l.cech {
            if l.top.is_some() || !l.levels.is_empty() {
                return Err(CliError::fixture(&at, "a Čech ladder takes no explicit maps"));
            }
            let get = |n: &str| {
                cech.get(n).ok_or_else(|| {
                    CliError::fixture(&at, format!("`{n}` is not a Čech resolution without `along`"))
                })
            };
            let (source, target) = (get(&l.source)?, get(&l.target)?);
            let u = lookup(&morphisms, "morphism", &c.morphism, &at)?;
            let mut fiberwise: BTreeMap<Simplex, LInftyMorphism> =
                source.cover().nerve().map(|s| (s.clone(), u.clone())).collect();
            for (k, f) in c.fiberwise.iter().enumerate() {
                let at = format!("{at}.cech.fiberwise[{k}]");
                let s = simplex(source.cover(), &f.simplex, &at)?;
                fiberwise.insert(s, lookup(&morphisms, "morphism", &f.morphism, &at)?.clone());
            }
            cech_ladder(source, target, u, &fiberwise)
        } else {
            let source = lookup(&resolutions, "resolution", &l.source, &at)?.clone();
            let target = lookup(&resolutions, "resolution", &l.target, &at)?.clone();
            let top = l
                .top
                .as_deref()
                .ok_or_else(|| CliError::fixture(&at, "missing `top` (or `cech`)"))?;
            let top = lookup(&module_morphisms, "module morphism", top, &at)?.clone();
            let levels = l
                .levels
                .iter()
                .map(|n| lookup(&module_morphisms, "module morphism", n, &at).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            ResolutionMorphism::new(source, target, top, levels)
        }
        .map_err(|e| CliError::fixture(&at, e))?;
        let ladder = apply_overrides(ladder, &l.overrides, &at)?;
        ladders.insert(name.clone(), ladder);
    }

    let mut elements = BTreeMap::new();
    for (name, e) in &raw.elements {
        let at = format!("elements.{name}");
        let q = lookup(&structures, "structure", &e.structure, &at)?;
        elements.insert(name.clone(), (e.structure.clone(), element(q.space(), &e.value, &at)?));
    }

    Ok(Fixture {
        raw,
        spaces,
        structures,
        morphisms,
        modules,
        module_morphisms,
        covers,
        cech,
        resolutions,
        ladders,
        elements,
    })
}

fn apply_overrides(ladder: ResolutionMorphism, overrides: &[RawOverride], at: &str) -> Result<ResolutionMorphism, CliError> {
    if overrides.is_empty() {
        return Ok(ladder);
    }
    let mut levels = ladder.levels().to_vec();
    for (k, o) in overrides.iter().enumerate() {
        let at = format!("{at}.overrides[{k}]");
        let old = levels
            .get(o.level)
            .ok_or_else(|| CliError::fixture(&at, format!("no level {}", o.level)))?;
        let (s, t) = (old.source().clone(), old.target().clone());
        let map = linear_map(s.space(), t.space(), &o.linear, &at)?;
        levels[o.level] = ModuleMorphism::strict(s, t, &map).map_err(|e| CliError::fixture(&at, e))?;
    }
    ResolutionMorphism::new(ladder.source().clone(), ladder.target().clone(), ladder.top().clone(), levels)
        .map_err(|e| CliError::fixture(at, e))
}

impl Fixture {
    /// An element by name on `structure`: an entry of `elements` declared
    /// on the same space, or a generator of the space.
    pub fn element_on(&self, structure: &LInftyStructure, name: &str) -> Option<Element> {
        if let Some((s, e)) = self.elements.get(name) {
            return (self.structures[s].space() == structure.space()).then(|| e.clone());
        }
        structure.space().index_of(name).ok().map(Element::generator)
    }

    /// The structure owning a named entry of `elements`.
    pub fn element_structure(&self, name: &str) -> Option<&str> {
        self.elements.get(name).map(|(s, _)| s.as_str())
    }
}

fn scalars(space: &GradedSpace, e: &Element) -> Scalars {
    e.iter().map(|(i, c)| (space.name(i).to_string(), Coeff(c.clone()))).collect()
}

/// A structure written back as an explicit component table.
pub fn raw_structure(space_name: &str, q: &LInftyStructure) -> RawStructure {
    let s = q.space();
    RawStructure {
        space: space_name.into(),
        arity_cap: Some(q.arity_cap()),
        components: Some(
            q.table()
                .iter()
                .map(|(w, v)| RawComponent {
                    input: w.iter().map(|&i| s.name(i).to_string()).collect(),
                    output: scalars(s, v),
                })
                .collect(),
        ),
        curved_lie: None,
    }
}

pub fn raw_space(s: &GradedSpace) -> RawSpace {
    RawSpace {
        order: s.nilpotency(),
        generators: s
            .generators()
            .iter()
            .enumerate()
            .map(|(i, _)| RawGenerator {
                name: s.name(i).to_string(),
                degree: s.degree(i),
                level: s.level(i),
            })
            .collect(),
    }
}

pub fn raw_element(structure: &str, space: &GradedSpace, e: &Element) -> RawElement {
    RawElement {
        structure: structure.into(),
        value: scalars(space, e),
    }
}
