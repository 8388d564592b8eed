//! Subcommands, each a [`Command`] object in a registry. The CLI parser is
//! generated from the registry, so adding a command means adding one impl
//! and one line in [`registry`].

use std::path::PathBuf;
use std::sync::Arc;

use linfty::modules::{check_module_twist_consistency, check_triangle_twist_consistency};
use linfty::resolution::{
    check_adapted_mc, check_resolution, check_resolution_morphism, connecting_maps_twist_invariant, prop_key_pipeline,
    Verdict,
};
use linfty::linfty::IdentityReport;
use linfty::twisting::{check_twist_composition, mc_check, twist_structure, TwistCandidate};
use linfty::{LInftyMorphism, LInftyStructure};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::fixture::{self, Fixture, RawDocument};
use crate::report::RunReport;
use crate::suites::{self, SuiteReport};

pub const DEFAULT_MAX_ARITY: usize = 4;
pub const DEFAULT_SUITE_SIZE: u64 = 100;
pub const DEFAULT_LADDER_SUITE_SIZE: u64 = 25;

/// Parsed flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub fixture: Option<PathBuf>,
    pub element: Option<String>,
    pub second_element: Option<String>,
    pub max_arity: Option<usize>,
    pub seed: Option<u64>,
    pub count: Option<u64>,
    pub output: Option<PathBuf>,
}

/// What a command sees: the options and, if a path was given, the loaded
/// fixture.
pub struct Context {
    pub options: Options,
    pub fixture: Option<Fixture>,
}

impl Context {
    pub fn fixture(&self) -> Result<&Fixture, CliError> {
        self.fixture
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs a fixture path".into()))
    }

    pub fn max_arity(&self) -> usize {
        self.options
            .max_arity
            .or(self.fixture.as_ref().and_then(|f| f.raw.defaults.max_arity))
            .unwrap_or(DEFAULT_MAX_ARITY)
    }

    fn named(&self, flag: &Option<String>, default: impl Fn(&Fixture) -> Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.fixture.as_ref().and_then(default))
    }

    pub fn element_name(&self) -> Option<String> {
        self.named(&self.options.element, |f| f.raw.defaults.element.clone())
    }

    pub fn second_element_name(&self) -> Option<String> {
        self.named(&self.options.second_element, |f| f.raw.defaults.second_element.clone())
    }

    pub fn require_element(&self) -> Result<String, CliError> {
        self.element_name()
            .ok_or_else(|| CliError::Usage("no element given (use --element or set defaults.element)".into()))
    }

    /// The element as a twisting candidate on `q`, if the name makes sense
    /// there; a name that resolves but is not a candidate is an input error.
    /// The name `0` is the zero element on every structure.
    pub fn candidate_on(&self, q: &LInftyStructure, name: &str) -> Result<Option<TwistCandidate>, CliError> {
        if name == "0" {
            return Ok(Some(TwistCandidate::zero()));
        }
        let Some(e) = self.fixture()?.element_on(q, name) else {
            return Ok(None);
        };
        TwistCandidate::new(q.space(), e)
            .map(Some)
            .map_err(|err| CliError::Usage(format!("`{name}`: {err}")))
    }

    pub fn suite_size(&self, default: u64) -> u64 {
        self.options.count.unwrap_or(default)
    }
}

pub trait Command {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Whether `--output` is meaningful.
    fn writes_output(&self) -> bool {
        false
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError>;
}

pub fn registry() -> Vec<Box<dyn Command>> {
    vec![
        Box::new(Validate),
        Box::new(Mc),
        Box::new(Twist),
        Box::new(Cohomology),
        Box::new(TwistIdentities),
        Box::new(ModuleConsistency),
        Box::new(ResolutionCheck),
        Box::new(AdaptedMc),
        Box::new(PropKey),
    ]
}

/// Records the outcome of a library call as a section; library errors are
/// mathematical failures of that section.
fn record<T: Serialize>(report: &mut RunReport, name: String, result: linfty::Result<(bool, T)>) {
    match result {
        Ok((passed, details)) => report.section(name, passed, details),
        Err(e) => report.section(name, false, json!({ "error": e.to_string() })),
    }
}

fn identity_details(r: IdentityReport) -> (bool, serde_json::Value) {
    let first = r.first_failure_arity();
    (r.passed(), json!({ "first_failure_arity": first, "report": r }))
}

fn record_suite(report: &mut RunReport, name: &str, suite: SuiteReport) {
    let passed = suite.passed();
    report.section(name, passed, suite);
}

fn nothing_applies(what: &str, element: &str) -> CliError {
    CliError::Usage(format!("`{element}` does not apply to any {what} of the fixture"))
}

/// Structures on which `name` resolves, with the candidate.
fn structures_with(ctx: &Context, name: &str) -> Result<Vec<(String, Arc<LInftyStructure>, TwistCandidate)>, CliError> {
    let f = ctx.fixture()?;
    let mut out = Vec::new();
    for (s, q) in &f.structures {
        if let Some(owner) = f.element_structure(name) {
            if owner != s {
                continue;
            }
        }
        if let Some(pi) = ctx.candidate_on(q, name)? {
            out.push((s.clone(), q.clone(), pi));
        }
    }
    if out.is_empty() {
        return Err(nothing_applies("structure", name));
    }
    Ok(out)
}

struct Validate;

impl Command for Validate {
    fn name(&self) -> &'static str {
        "validate"
    }
    fn about(&self) -> &'static str {
        "Load a fixture and verify every declared object"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        let f = ctx.fixture()?;
        let n = ctx.max_arity();
        for (name, q) in &f.structures {
            record(report, format!("structure {name}"), q.check_square_zero(n).map(identity_details));
        }
        for (name, m) in &f.morphisms {
            record(report, format!("morphism {name}"), m.check(n).map(identity_details));
        }
        for (name, m) in &f.modules {
            record(report, format!("module {name}"), m.check_square_zero(n).map(identity_details));
        }
        for (name, m) in &f.module_morphisms {
            record(report, format!("module morphism {name}"), m.check(n).map(identity_details));
        }
        for (name, c) in &f.cech {
            record(
                report,
                format!("cech {name}"),
                c.cech_cohomology().map(|h| (true, json!({ "restrictions": "strict and functorial", "cohomology": h }))),
            );
        }
        for (name, r) in &f.resolutions {
            report.section(format!("resolution {name}"), true, json!({ "nodes": r.node_names() }));
        }
        for (name, u) in &f.ladders {
            report.section(format!("ladder {name}"), true, json!({ "levels": u.levels().len() }));
        }
        Ok(())
    }
}

struct Mc;

impl Command for Mc {
    fn name(&self) -> &'static str {
        "mc"
    }
    fn about(&self) -> &'static str {
        "Maurer–Cartan check by the series and by the coderivation on exp(π)"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        if let Some(seed) = ctx.options.seed {
            record_suite(report, "random maurer-cartan", suites::maurer_cartan(seed, ctx.suite_size(DEFAULT_SUITE_SIZE)));
            if ctx.fixture.is_none() {
                return Ok(());
            }
        }
        let name = ctx.require_element()?;
        for (s, q, pi) in structures_with(ctx, &name)? {
            let result = mc_check(&q, &pi).and_then(|(is_mc, _, r)| {
                let twisted = twist_structure(&q, &pi)?;
                let curvature = twisted.curvature().format(twisted.space());
                // MC exactly when the twist is flat, and both routes agree
                let passed = is_mc && r.routes_agree && twisted.is_flat();
                Ok((
                    passed,
                    json!({
                        "maurer_cartan": is_mc,
                        "residual": r.residual.clone(),
                        "routes_agree": r.routes_agree,
                        "twisted_curvature": curvature,
                        "report": r,
                    }),
                ))
            });
            record(report, format!("{name} in {s}"), result);
        }
        Ok(())
    }
}

struct Twist;

impl Command for Twist {
    fn name(&self) -> &'static str {
        "twist"
    }
    fn about(&self) -> &'static str {
        "Twist structures by a Maurer–Cartan element and write the twisted fixture"
    }
    fn writes_output(&self) -> bool {
        true
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        if let Some(seed) = ctx.options.seed {
            record_suite(report, "random twists", suites::twisting(seed, ctx.suite_size(DEFAULT_SUITE_SIZE)));
            if ctx.fixture.is_none() {
                return Ok(());
            }
        }
        let f = ctx.fixture()?;
        let name = ctx.require_element()?;
        let n = ctx.max_arity();
        let mut doc = RawDocument {
            format_version: fixture::FORMAT_VERSION.into(),
            spaces: Default::default(),
            structures: Default::default(),
            morphisms: Default::default(),
            modules: Default::default(),
            module_morphisms: Default::default(),
            covers: Default::default(),
            resolutions: Default::default(),
            ladders: Default::default(),
            elements: Default::default(),
            defaults: Default::default(),
        };
        for (s, q, pi) in structures_with(ctx, &name)? {
            let space_name = f.raw.structures[&s].space.clone();
            let result = mc_check(&q, &pi).and_then(|(is_mc, _, mc)| {
                if !is_mc {
                    return Ok((false, json!({ "maurer_cartan": mc })));
                }
                let t = twist_structure(&q, &pi)?;
                let sq = t.check_square_zero(n)?;
                doc.spaces.insert(space_name.clone(), f.raw.spaces[&space_name].clone());
                doc.structures.insert(s.clone(), fixture::raw_structure(&space_name, &t));
                Ok((
                    sq.passed() && t.is_flat(),
                    json!({ "maurer_cartan": mc, "flat": t.is_flat(), "square_zero": sq }),
                ))
            });
            record(report, format!("{s} twisted by {name}"), result);
        }
        let text = fixture::serialize(&doc);
        if let Some(out) = &ctx.options.output {
            std::fs::write(out, &text).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
        }
        let value: serde_json::Value = serde_json::from_str(&text).expect("canonical text is JSON");
        report.section("twisted fixture", true, value);
        Ok(())
    }
}

struct Cohomology;

impl Command for Cohomology {
    fn name(&self) -> &'static str {
        "cohomology"
    }
    fn about(&self) -> &'static str {
        "Betti tables of flat (or twisted) structures and of Čech complexes"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        let f = ctx.fixture()?;
        match ctx.element_name() {
            Some(name) => {
                for (s, q, pi) in structures_with(ctx, &name)? {
                    let result = twist_structure(&q, &pi).and_then(|t| cohomology_of(&t));
                    record(report, format!("{s} twisted by {name}"), result);
                }
            }
            None => {
                for (s, q) in &f.structures {
                    record(report, format!("structure {s}"), cohomology_of(q));
                }
            }
        }
        for (name, c) in &f.cech {
            record(report, format!("cech {name}"), c.cech_cohomology().map(|h| (true, h)));
        }
        Ok(())
    }
}

fn cohomology_of(q: &LInftyStructure) -> linfty::Result<(bool, serde_json::Value)> {
    if !q.is_flat() {
        return Ok((
            false,
            json!({ "error": "curved structure; twist by a Maurer–Cartan element first",
                    "curvature": q.curvature().format(q.space()) }),
        ));
    }
    let h = q.cohomology()?;
    Ok((true, json!({ "betti": h.betti(), "cohomology": h })))
}

struct TwistIdentities;

impl Command for TwistIdentities {
    fn name(&self) -> &'static str {
        "twist-identities"
    }
    fn about(&self) -> &'static str {
        "Composition identities for twisting structures, morphisms and elements"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        if let Some(seed) = ctx.options.seed {
            record_suite(report, "random composition identities", suites::composition(seed, ctx.suite_size(DEFAULT_SUITE_SIZE)));
            if ctx.fixture.is_none() {
                return Ok(());
            }
        }
        let f = ctx.fixture()?;
        let name = ctx.require_element()?;
        let second = ctx.second_element_name();
        // each morphism F followed by every G out of its target, or the
        // identity; a fixture without morphisms uses identities throughout
        let mut pairs: Vec<(String, LInftyMorphism, LInftyMorphism)> = Vec::new();
        for (fname, fm) in &f.morphisms {
            let mut any = false;
            for (gname, gm) in &f.morphisms {
                if gm.source() == fm.target() {
                    pairs.push((format!("F = {fname}, G = {gname}"), fm.clone(), gm.clone()));
                    any = true;
                }
            }
            if !any {
                pairs.push((format!("F = {fname}, G = id"), fm.clone(), LInftyMorphism::identity(fm.target().clone())));
            }
        }
        if f.morphisms.is_empty() {
            for (s, q) in &f.structures {
                let id = LInftyMorphism::identity(q.clone());
                pairs.push((format!("F = G = id on {s}"), id.clone(), id));
            }
        }
        let mut ran = false;
        for (label, fm, gm) in pairs {
            let Some(pi) = ctx.candidate_on(fm.source(), &name)? else {
                continue;
            };
            let b = match &second {
                Some(b) => match ctx.candidate_on(fm.source(), b)? {
                    Some(b) => b,
                    None => continue,
                },
                None => TwistCandidate::zero(),
            };
            ran = true;
            record(
                report,
                label,
                check_twist_composition(&fm, &gm, &pi, &b).map(|r| (r.passed(), r)),
            );
        }
        if !ran {
            return Err(nothing_applies("morphism source", &name));
        }
        Ok(())
    }
}

struct ModuleConsistency;

impl Command for ModuleConsistency {
    fn name(&self) -> &'static str {
        "module-consistency"
    }
    fn about(&self) -> &'static str {
        "Twisting commutes with forming modules along morphisms and triangles"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        if let Some(seed) = ctx.options.seed {
            record_suite(report, "random module suite", suites::modules(seed, ctx.suite_size(DEFAULT_SUITE_SIZE)));
            if ctx.fixture.is_none() {
                return Ok(());
            }
        }
        let f = ctx.fixture()?;
        let name = ctx.require_element()?;
        let n = ctx.max_arity();
        for (m, module) in &f.modules {
            record(report, format!("module {m}"), module.check_square_zero(n).map(identity_details));
        }
        let mut ran = false;
        for (m, fm) in &f.morphisms {
            let Some(pi) = ctx.candidate_on(fm.source(), &name)? else {
                continue;
            };
            ran = true;
            record(
                report,
                format!("module along {m}"),
                check_module_twist_consistency(fm, &pi).map(|r| (r.passed(), r)),
            );
        }
        for (m, raw) in &f.raw.module_morphisms {
            let Some(t) = &raw.triangle else { continue };
            let (g, h, fm) = (&f.morphisms[&t.g], &f.morphisms[&t.h], &f.morphisms[&t.f]);
            let Some(pi) = ctx.candidate_on(g.source(), &name)? else {
                continue;
            };
            ran = true;
            record(
                report,
                format!("triangle {m}"),
                check_triangle_twist_consistency(g, h, fm, &pi).map(|r| (r.passed(), r)),
            );
        }
        if !ran {
            return Err(nothing_applies("morphism", &name));
        }
        Ok(())
    }
}

struct ResolutionCheck;

impl Command for ResolutionCheck {
    fn name(&self) -> &'static str {
        "resolution-check"
    }
    fn about(&self) -> &'static str {
        "Check resolutions and ladders of resolutions"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        let f = ctx.fixture()?;
        let n = ctx.max_arity();
        let element = ctx.element_name();
        for (name, r) in &f.resolutions {
            record(report, format!("resolution {name}"), check_resolution(r, n).map(|rep| (rep.resolution, rep)));
            if let Some(e) = &element {
                if let Some(pi) = ctx.candidate_on(r.base(), e)? {
                    record(
                        report,
                        format!("resolution {name}: connecting maps unchanged by twisting with {e}"),
                        connecting_maps_twist_invariant(r, &pi).map(|ok| (ok, ok)),
                    );
                }
            }
        }
        for (name, u) in &f.ladders {
            record(
                report,
                format!("ladder {name}"),
                check_resolution_morphism(u, n).map(|rep| {
                    let failure = rep.first_failure();
                    (rep.passed, json!({ "first_failure": failure, "report": rep }))
                }),
            );
        }
        Ok(())
    }
}

struct AdaptedMc;

impl Command for AdaptedMc {
    fn name(&self) -> &'static str {
        "adapted-mc"
    }
    fn about(&self) -> &'static str {
        "Is the twisted resolution still exact?"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        let f = ctx.fixture()?;
        let name = ctx.require_element()?;
        let mut ran = false;
        for (r, diagram) in &f.resolutions {
            let Some(pi) = ctx.candidate_on(diagram.base(), &name)? else {
                continue;
            };
            ran = true;
            record(
                report,
                format!("resolution {r}"),
                check_adapted_mc(diagram, &pi).map(|rep| {
                    let failure = rep.sequence.exactness.failure.clone();
                    let node = failure.as_ref().map(|f| format!("{} (degree {})", f.node, f.degree));
                    (
                        rep.adapted,
                        json!({ "adapted": rep.adapted, "failure_at": node, "failure": failure, "report": rep }),
                    )
                }),
            );
        }
        if !ran {
            return Err(nothing_applies("resolution", &name));
        }
        Ok(())
    }
}

struct PropKey;

impl Command for PropKey {
    fn name(&self) -> &'static str {
        "prop-key"
    }
    fn about(&self) -> &'static str {
        "Twisted ladders between exact rows: chase versus direct computation"
    }
    fn run(&self, ctx: &Context, report: &mut RunReport) -> Result<(), CliError> {
        if let Some(seed) = ctx.options.seed {
            record_suite(report, "random ladders", suites::ladders(seed, ctx.suite_size(DEFAULT_LADDER_SUITE_SIZE)));
            if ctx.fixture.is_none() {
                return Ok(());
            }
        }
        let f = ctx.fixture()?;
        let name = ctx.require_element()?;
        let n = ctx.max_arity();
        let mut ran = false;
        for (l, u) in &f.ladders {
            let Some(pi) = ctx.candidate_on(u.source().base(), &name)? else {
                continue;
            };
            ran = true;
            record(
                report,
                format!("ladder {l}"),
                prop_key_pipeline(u, &pi, n).map(|rep| {
                    let (verdict, clause) = match &rep.verdict {
                        Verdict::QuasiIsomorphism => ("quasi-isomorphism", None),
                        Verdict::NotQuasiIsomorphism => ("not a quasi-isomorphism", None),
                        Verdict::HypothesesUnmet(c) => ("hypotheses unmet", Some(c.clone())),
                        Verdict::RoutesDisagree => ("routes disagree", None),
                    };
                    (
                        rep.verdict == Verdict::QuasiIsomorphism,
                        json!({ "verdict": verdict, "unmet": clause, "routes_agree": rep.routes_agree, "report": rep }),
                    )
                }),
            );
        }
        if !ran {
            return Err(nothing_applies("ladder", &name));
        }
        Ok(())
    }
}
