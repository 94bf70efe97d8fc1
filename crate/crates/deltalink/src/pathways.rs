//! Δ-move pathway certificates.
//!
//! ```text
//! pathway: L9a2 -> 3_1#0_1 -> 0_1^2
//! step 1: pd = X(...),... ; site = (0,1,2)
//! ```
//!
//! Steps are numbered from 1; site entries are 0-based crossing indices
//! into the step's diagram. A step without a `step` line can only be
//! checked at level A.

use std::fmt::{self, Display};

use thiserror::Error;

use crate::alexander::{fingerprint, AlexanderError};
use crate::catalog::{Catalog, CatalogError, Node};
use crate::diagram::{parse_pd, LinkDiagram, SiteError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathwayError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Node(#[from] CatalogError),
    #[error("line {line}: malformed site `{text}`")]
    Site { line: usize, text: String },
    #[error("step {0} has no explicit diagram and site")]
    MissingStep(usize),
    #[error("step {step}: invalid site: {err}")]
    SiteInvalid { step: usize, err: SiteError },
    #[error("step {0}: {1}")]
    Alexander(usize, AlexanderError),
    #[error("certificate is not verified")]
    Unverified,
    #[error("certificate ends at {0}, not at a trivial link")]
    NotTerminal(String),
}

#[derive(Clone, Debug)]
pub struct Step {
    pub pd: String,
    pub diagram: LinkDiagram,
    pub site: [usize; 3],
}

#[derive(Clone, Debug)]
pub struct PathwayCertificate {
    pub nodes: Vec<Node>,
    pub steps: Vec<Option<Step>>,
}

impl PathwayCertificate {
    pub fn len(&self) -> usize { self.steps.len() }
    pub fn is_empty(&self) -> bool { self.steps.is_empty() }

    pub fn names(&self) -> Vec<&str> {
        self.nodes.iter().map(|n| n.name.as_str()).collect()
    }

    /// The single-step certificate for edge `i`.
    pub fn edge(&self, i: usize) -> PathwayCertificate {
        PathwayCertificate { nodes: self.nodes[i..i + 2].to_vec(), steps: vec![self.steps[i].clone()] }
    }
}

impl Display for PathwayCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pathway: {}", self.names().join(" -> "))?;
        for (i, s) in self.steps.iter().enumerate() {
            if let Some(s) = s {
                let [a, b, c] = s.site;
                write!(f, "\nstep {}: pd = {} ; site = ({a},{b},{c})", i + 1, s.pd)?;
            }
        }
        Ok(())
    }
}

fn parse_site(s: &str) -> Option<[usize; 3]> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let v: Vec<usize> = inner.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
    v.try_into().ok()
}

pub fn parse_certificate(text: &str, catalog: &Catalog) -> Result<PathwayCertificate, PathwayError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((line, head)) = lines.next() else {
        return Err(PathwayError::Parse { line: 1, msg: "empty certificate".into() });
    };
    let head = head.strip_prefix("pathway:").unwrap_or(head);
    let names: Vec<&str> = head.split("->").map(str::trim).collect();
    if names.iter().any(|n| n.is_empty()) {
        return Err(PathwayError::Parse { line, msg: "empty node name".into() });
    }
    let nodes = names.iter().map(|n| catalog.resolve(n)).collect::<Result<Vec<_>, _>>()?;

    let mut steps = vec![None; nodes.len() - 1];
    for (line, l) in lines {
        let perr = |msg: String| PathwayError::Parse { line, msg };
        let rest = l.strip_prefix("step").ok_or_else(|| perr("expected `step i: ...`".into()))?;
        let (idx, body) = rest.split_once(':').ok_or_else(|| perr("expected `step i: ...`".into()))?;
        let i: usize = idx.trim().parse().map_err(|_| perr(format!("bad step number `{}`", idx.trim())))?;
        if i == 0 || i > steps.len() {
            return Err(perr(format!("step {i} out of range 1..={}", steps.len())));
        }
        if steps[i - 1].is_some() {
            return Err(perr(format!("step {i} given twice")));
        }
        let (pd, site) = body.split_once(';').ok_or_else(|| perr("expected `pd = ... ; site = (...)`".into()))?;
        let pd = pd.trim().strip_prefix("pd").map(|s| s.trim_start()).and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| perr("expected `pd = ...`".into()))?.trim();
        let site_text = site.trim().strip_prefix("site").map(|s| s.trim_start()).and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| perr("expected `site = (...)`".into()))?.trim();
        let site = parse_site(site_text).ok_or_else(|| PathwayError::Site { line, text: site_text.into() })?;
        let diagram = parse_pd(pd).map_err(|e| perr(e.to_string()))?;
        steps[i - 1] = Some(Step { pd: pd.into(), diagram, site });
    }
    Ok(PathwayCertificate { nodes, steps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub step: usize,
    pub from: String,
    pub to: String,
    pub checks: Vec<(&'static str, Outcome)>,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, o)| !matches!(o, Outcome::Fail(_)))
    }

    pub fn outcome(&self, check: &str) -> Option<&Outcome> {
        self.checks.iter().find(|(c, _)| *c == check).map(|(_, o)| o)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub level: char,
    pub steps: Vec<StepReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(StepReport::passed)
    }
}

impl Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {}", self.level.to_ascii_uppercase(), if self.passed() { "pass" } else { "FAIL" })?;
        for s in &self.steps {
            write!(f, "\n  step {}: {} -> {}", s.step, s.from, s.to)?;
            for (c, o) in &s.checks {
                match o {
                    Outcome::Pass => write!(f, "\n    {c}: ok")?,
                    Outcome::Fail(m) => write!(f, "\n    {c}: FAIL ({m})")?,
                    Outcome::Skipped(m) => write!(f, "\n    {c}: skipped ({m})")?,
                }
            }
        }
        Ok(())
    }
}

fn level_a_checks(a: &Node, b: &Node, da: &LinkDiagram, db: &LinkDiagram) -> Vec<(&'static str, Outcome)> {
    let mut out = vec![];
    let (ma, mb) = (da.ncomponents(), db.ncomponents());
    out.push(("components", if ma == mb { Outcome::Pass } else { Outcome::Fail(format!("{ma} vs {mb}")) }));

    let (la, lb) = (da.linking_matrix(), db.linking_matrix());
    out.push(("linking", if la.abs_multiset() == lb.abs_multiset() && ma == mb {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{:?} vs {:?}", la.abs_multiset(), lb.abs_multiset()))
    }));

    out.push(("arf", match (a.arf, b.arf) {
        _ if !da.is_proper() || !db.is_proper() => Outcome::Skipped("not proper".into()),
        (Some(x), Some(y)) if x != y => Outcome::Pass,
        (Some(x), Some(_)) => Outcome::Fail(format!("arf {x} on both ends")),
        _ => Outcome::Skipped("arf unknown".into()),
    }));

    out.push(("g4", match (a.g4, b.g4) {
        (Some((x, x2)), Some((y, y2))) if x == x2 && y == y2 => {
            if x.abs_diff(y) <= 1 { Outcome::Pass } else { Outcome::Fail(format!("g4 {x} vs {y}")) }
        }
        _ => Outcome::Skipped("g4 not exact".into()),
    }));
    out
}

/// Necessary conditions on every edge: component count, linking numbers,
/// arf flips on proper links, 4-genus changes by at most one.
pub fn verify_level_a(c: &PathwayCertificate) -> VerificationReport {
    let steps = c.nodes.windows(2).enumerate().map(|(i, w)| StepReport {
        step: i + 1,
        from: w[0].name.clone(),
        to: w[1].name.clone(),
        checks: level_a_checks(&w[0], &w[1], &w[0].diagram, &w[1].diagram),
    }).collect();
    VerificationReport { level: 'a', steps }
}

/// Applies every move and identifies the result by fingerprint.
pub fn verify_level_b(c: &PathwayCertificate) -> Result<VerificationReport, PathwayError> {
    let mut steps = vec![];
    for (i, w) in c.nodes.windows(2).enumerate() {
        let step = i + 1;
        let s = c.steps[i].as_ref().ok_or(PathwayError::MissingStep(step))?;
        let alex = |e| PathwayError::Alexander(step, e);
        let site = s.diagram.find_site(s.site).map_err(|err| PathwayError::SiteInvalid { step, err })?;
        let moved = s.diagram.apply_delta_move(&site)
            .map_err(|e| match e {
                crate::diagram::DiagramError::Site(err) => PathwayError::SiteInvalid { step, err },
                e => PathwayError::Parse { line: 0, msg: e.to_string() },
            })?.simplify();

        let mut checks = vec![];
        let fp_src = fingerprint(&s.diagram).map_err(alex)?;
        let want_src = w[0].fingerprint().map_err(alex)?;
        checks.push(("source", if fp_src.matches(&want_src) {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("diagram is {fp_src}, {} is {want_src}", w[0].name))
        }));

        let fp = fingerprint(&moved).map_err(alex)?;
        let want = w[1].fingerprint().map_err(alex)?;
        checks.push(("target", if fp.matches(&want) {
            Outcome::Pass
        } else {
            Outcome::Fail(format!("move gives {fp}, {} is {want}", w[1].name))
        }));

        checks.extend(level_a_checks(&w[0], &w[1], &s.diagram, &moved));
        steps.push(StepReport { step, from: w[0].name.clone(), to: w[1].name.clone(), checks });
    }
    Ok(VerificationReport { level: 'b', steps })
}

/// Number of moves of a verified certificate ending at a trivial link.
pub fn upper_bound_from(c: &PathwayCertificate, report: &VerificationReport) -> Result<u32, PathwayError> {
    if !report.passed() || report.steps.len() != c.len() {
        return Err(PathwayError::Unverified);
    }
    let last = c.nodes.last().expect("nonempty");
    if !last.is_trivial() {
        return Err(PathwayError::NotTerminal(last.name.clone()));
    }
    Ok(c.len() as u32)
}
