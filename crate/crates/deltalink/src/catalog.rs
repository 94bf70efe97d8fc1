//! The bundled dataset: algebraically split links up to nine crossings,
//! their component knots, and the pathway certificates.
//!
//! Format: blocks starting with `[link]` or `[knot]`, followed by
//! `key = value` lines, one blank line between blocks. Absent optional
//! values are written `--`, intervals `lo..hi`, pairs `a|b`, lists
//! comma-separated.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Display};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::alexander::{self, fingerprint, AlexanderError, Fingerprint};
use crate::bounds::Method;
use crate::diagram::{parse_pd, LinkDiagram};
use crate::solid_torus::{parse_annular, AnnularDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{record}: field `{field}`: {msg}")]
    Field { record: String, field: String, msg: String },
    #[error("duplicate record {0}")]
    Duplicate(String),
    #[error("unknown link or knot `{0}`")]
    UnknownNode(String),
    #[error("{0}: {1}")]
    Alexander(String, AlexanderError),
}

fn field_err(record: &str, field: &str, msg: impl Into<String>) -> CatalogError {
    CatalogError::Field { record: record.into(), field: field.into(), msg: msg.into() }
}

/// Expected Δ-unlinking number: exact, or one of two values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UDelta {
    Exact(u32),
    Either(u32, u32),
}

impl UDelta {
    pub fn exact(&self) -> Option<u32> {
        match *self {
            UDelta::Exact(n) => Some(n),
            UDelta::Either(..) => None,
        }
    }

    pub fn values(&self) -> Vec<u32> {
        match *self {
            UDelta::Exact(n) => vec![n],
            UDelta::Either(a, b) => vec![a, b],
        }
    }
}

impl Display for UDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UDelta::Exact(n) => write!(f, "{n}"),
            UDelta::Either(a, b) => write!(f, "{a}|{b}"),
        }
    }
}

impl FromStr for UDelta {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad integer `{t}`"));
        match s.split_once('|') {
            Some((a, b)) => Ok(UDelta::Either(num(a)?, num(b)?)),
            None => Ok(UDelta::Exact(num(s)?)),
        }
    }
}

pub fn parse_interval(s: &str) -> Result<(u32, u32), String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad integer `{t}`"));
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got `{s}`"))?;
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo > hi {
        return Err(format!("empty interval {lo}..{hi}"));
    }
    Ok((lo, hi))
}

pub fn format_interval((lo, hi): (u32, u32)) -> String {
    format!("{lo}..{hi}")
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    s.split(',').map(|t| t.trim()).filter(|t| !t.is_empty()).map(|t| t.parse()).collect()
}

pub fn format_methods(ms: &[Method]) -> String {
    ms.iter().map(|m| m.tag()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentKnot {
    pub name: String,
    pub udelta: u32,
}

#[derive(Clone, Debug)]
pub struct LinkRecord {
    pub name_t: String,
    pub name_r: String,
    pub pd: String,
    pub components: Vec<ComponentKnot>,
    pub u: u32,
    pub arf: u8,
    pub g4: (u32, u32),
    pub mu1122_ref: Option<u64>,
    pub udelta_expected: UDelta,
    pub methods_expected: Vec<Method>,
    pub toroidal_obstruction: bool,
    pub annular: Option<String>,
    diagram: LinkDiagram,
    annular_diagram: Option<AnnularDiagram>,
}

impl LinkRecord {
    pub fn diagram(&self) -> &LinkDiagram { &self.diagram }
    pub fn annular_diagram(&self) -> Option<&AnnularDiagram> { self.annular_diagram.as_ref() }
    pub fn ncomponents(&self) -> usize { self.diagram.ncomponents() }

    /// The `m`-component trivial link as a record.
    pub fn trivial(m: usize) -> Self {
        let name = format!("0_1^{m}");
        Self {
            name_t: name.clone(),
            name_r: name,
            pd: format!("O*{m}"),
            components: vec![ComponentKnot { name: "0_1".into(), udelta: 0 }; m],
            u: 0,
            arf: 0,
            g4: (0, 0),
            mu1122_ref: if m == 2 { Some(0) } else { None },
            udelta_expected: UDelta::Exact(0),
            methods_expected: vec![],
            toroidal_obstruction: false,
            annular: None,
            diagram: LinkDiagram::empty(m),
            annular_diagram: None,
        }
    }

    /// The `β₁` flag: the record is marked for the toroidal obstruction and
    /// its annular data has `|β₁| ≥ 3`.
    pub fn beta1_flag(&self) -> bool {
        self.toroidal_obstruction
            && self.annular_diagram.as_ref()
                .is_some_and(|a| crate::solid_torus::obstructs_single_toroidal_delta(a.beta1()))
    }
}

#[derive(Clone, Debug)]
pub struct KnotRecord {
    pub name: String,
    pub pd: String,
    pub udelta: u32,
    pub arf: u8,
    diagram: LinkDiagram,
}

impl KnotRecord {
    pub fn diagram(&self) -> &LinkDiagram { &self.diagram }
}

/// A resolved pathway node.
#[derive(Clone, Debug)]
pub struct Node {
    pub name: String,
    pub diagram: LinkDiagram,
    pub arf: Option<u8>,
    pub g4: Option<(u32, u32)>,
}

impl Node {
    pub fn fingerprint(&self) -> Result<Fingerprint, AlexanderError> {
        let f = fingerprint(&self.diagram)?;
        Ok(match self.arf {
            Some(_) => f.with_arf(self.arf),
            None => f,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.diagram.ncrossings() == 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub links: Vec<LinkRecord>,
    pub knots: Vec<KnotRecord>,
    /// Pathway certificate texts keyed by source link.
    pub pathways: BTreeMap<String, String>,
    extra: BTreeMap<String, Node>,
}

macro_rules! bundled_pathways {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/pathways/", $name, ".path")))),*]
    };
}

const BUNDLED_CATALOG: &str = include_str!("../data/catalog.txt");
const BUNDLED_ANNULAR: &[(&str, &str)] = &[("L9a18.annular", include_str!("../data/L9a18.annular"))];
const BUNDLED_PATHWAYS: &[(&str, &str)] = bundled_pathways!(
    "L5a1", "L6a4", "L7a1", "L7a3", "L7a4", "L7n2", "L8a1", "L8a2", "L8a4", "L8n2",
    "L9a1", "L9a2", "L9a3", "L9a4", "L9a8", "L9a9", "L9a10", "L9a14", "L9a15", "L9a17",
    "L9a18", "L9a35", "L9a38", "L9a40", "L9a42", "L9a53", "L9a54", "L9n2", "L9n3", "L9n5",
    "L9n6", "L9n8", "L9n25", "L9n27",
);

impl Catalog {
    pub fn bundled() -> Self {
        let mut c = parse_catalog(BUNDLED_CATALOG, |f| {
            BUNDLED_ANNULAR.iter().find(|(n, _)| *n == f).map(|(_, t)| t.to_string())
                .ok_or_else(|| format!("no bundled file {f}"))
        }).expect("bundled catalog is valid");
        c.pathways = BUNDLED_PATHWAYS.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect();
        c
    }

    pub fn link(&self, name: &str) -> Option<&LinkRecord> {
        self.links.iter().find(|r| r.name_t == name || r.name_r == name)
    }

    pub fn knot(&self, name: &str) -> Option<&KnotRecord> {
        self.knots.iter().find(|k| k.name == name)
    }

    /// Makes an ad-hoc diagram available as a pathway node.
    pub fn register_diagram(&mut self, name: &str, diagram: LinkDiagram, arf: Option<u8>) {
        self.extra.insert(name.into(), Node { name: name.into(), diagram, arf, g4: None });
    }

    /// Resolves a node name: link or knot names, `mX` for the mirror of
    /// `X`, `0_1^n` for the trivial link and `A#B` for split unions.
    pub fn resolve(&self, name: &str) -> Result<Node, CatalogError> {
        let name = name.trim();
        let unknown = || CatalogError::UnknownNode(name.into());
        if let Some(n) = self.extra.get(name) {
            return Ok(n.clone());
        }
        if let Some((a, b)) = name.split_once('#') {
            let (a, b) = (self.resolve(a)?, self.resolve(b)?);
            return Ok(Node {
                name: name.into(),
                diagram: a.diagram.disjoint_union(&b.diagram),
                arf: a.arf.zip(b.arf).map(|(x, y)| (x + y) % 2),
                g4: a.g4.zip(b.g4).map(|(x, y)| (x.0 + y.0, x.1 + y.1)),
            });
        }
        if let Some(m) = name.strip_prefix("0_1^") {
            let m: usize = m.parse().map_err(|_| unknown())?;
            if m == 0 {
                return Err(unknown());
            }
            return Ok(Node { name: name.into(), diagram: LinkDiagram::empty(m), arf: Some(0), g4: Some((0, 0)) });
        }
        if let Some(r) = self.link(name) {
            return Ok(Node { name: name.into(), diagram: r.diagram.clone(), arf: Some(r.arf), g4: Some(r.g4) });
        }
        if let Some(k) = self.knot(name) {
            let g4 = (k.name == "0_1").then_some((0, 0));
            return Ok(Node { name: name.into(), diagram: k.diagram.clone(), arf: Some(k.arf), g4 });
        }
        if let Some(base) = name.strip_prefix('m') {
            if let Ok(n) = self.resolve(base) {
                return Ok(Node { name: name.into(), diagram: n.diagram.mirror(), ..n });
            }
        }
        Err(unknown())
    }

    pub fn fingerprint_of(&self, record: &LinkRecord) -> Result<Fingerprint, CatalogError> {
        fingerprint(&record.diagram)
            .map(|f| f.with_arf(Some(record.arf)))
            .map_err(|e| CatalogError::Alexander(record.name_t.clone(), e))
    }

    /// Pairs of link records whose fingerprints cannot be told apart.
    pub fn fingerprint_collisions(&self) -> Result<Vec<(String, String)>, CatalogError> {
        let fps = self.links.iter().map(|r| self.fingerprint_of(r)).collect::<Result<Vec<_>, _>>()?;
        let mut out = vec![];
        for i in 0..fps.len() {
            for j in i + 1..fps.len() {
                if fps[i].matches(&fps[j]) {
                    out.push((self.links[i].name_t.clone(), self.links[j].name_t.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Name of the catalog knot with the fingerprint of `d`, if any.
    pub fn identify_knot(&self, d: &LinkDiagram) -> Result<Option<String>, AlexanderError> {
        let f = fingerprint(d)?;
        for k in &self.knots {
            if fingerprint(&k.diagram)?.matches(&f) {
                return Ok(Some(k.name.clone()));
            }
        }
        Ok(None)
    }

    /// Recomputes `μ̄(1122)`, the component knot types and the Sato–Levine
    /// relation for every link record.
    pub fn validate_against_computation(&self) -> Vec<Check> {
        let mut out = vec![];
        for r in &self.links {
            let d = &r.diagram;
            let mut push = |field: &str, ok: bool, detail: String| {
                out.push(Check { record: r.name_t.clone(), field: field.into(), ok, detail });
            };

            let mu = if d.ncomponents() == 2 { Some(alexander::milnor_1122(d)) } else { None };
            match (&mu, r.mu1122_ref) {
                (Some(Ok(v)), Some(e)) => push("mu1122_ref", *v == e, format!("computed {v}, recorded {e}")),
                (Some(Err(e)), _) => push("mu1122_ref", false, e.to_string()),
                (None, None) => {}
                (Some(Ok(v)), None) => push("mu1122_ref", false, format!("computed {v}, recorded --")),
                (None, Some(e)) => push("mu1122_ref", false, format!("recorded {e} for a {}-component link", d.ncomponents())),
            }

            let names: Result<Vec<_>, _> = (0..d.ncomponents()).map(|k| {
                let s = d.extract_sublink(&[k]).expect("valid index");
                self.identify_knot(&s).map(|n| n.unwrap_or_else(|| "?".into()))
            }).collect();
            let mut want: Vec<_> = r.components.iter().map(|c| c.name.clone()).collect();
            want.sort();
            match names {
                Ok(mut got) => {
                    got.sort();
                    push("components", got == want, format!("computed {}, recorded {}", got.join(", "), want.join(", ")));
                }
                Err(e) => push("components", false, e.to_string()),
            }

            if let Some(Ok(mu)) = mu {
                let ks: Option<Vec<u8>> = r.components.iter().map(|c| self.knot(&c.name).map(|k| k.arf)).collect();
                if let Some(ks) = ks {
                    let s = (ks.iter().map(|&a| a as u64).sum::<u64>() + mu) % 2;
                    push("arf", s == r.arf as u64,
                        format!("arf(L1)+arf(L2)+mu = {s} mod 2, recorded {}", r.arf));
                }
            }
        }
        out
    }
}

/// One line of a validation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub record: String,
    pub field: String,
    pub ok: bool,
    pub detail: String,
}

impl Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.ok { "ok  " } else { "FAIL" };
        write!(f, "{s} {} {}: {}", self.record, self.field, self.detail)
    }
}

/// Loads a catalog file. Annular references are resolved relative to the
/// file; certificates are read from a sibling `pathways/` directory when
/// present.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let io = |p: &Path, e: std::io::Error| CatalogError::Io { path: p.display().to_string(), msg: e.to_string() };
    let text = fs::read_to_string(path).map_err(|e| io(path, e))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));

    let mut c = parse_catalog(&text, |f| fs::read_to_string(dir.join(f)).map_err(|e| e.to_string()))?;

    let pdir = dir.join("pathways");
    if pdir.is_dir() {
        let mut entries: Vec<_> = fs::read_dir(&pdir).map_err(|e| io(&pdir, e))?
            .filter_map(|e| e.ok()).map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "path"))
            .collect();
        entries.sort();
        for p in entries {
            let name = p.file_stem().unwrap().to_string_lossy().to_string();
            let t = fs::read_to_string(&p).map_err(|e| io(&p, e))?;
            c.pathways.insert(name, t);
        }
    }
    Ok(c)
}

const LINK_KEYS: [&str; 12] = [
    "name_t", "name_r", "pd", "components", "u", "arf", "g4", "mu1122_ref",
    "udelta_expected", "methods_expected", "toroidal_obstruction", "annular",
];
const KNOT_KEYS: [&str; 4] = ["name", "pd", "udelta", "arf"];

struct Block {
    kind: String,
    line: usize,
    fields: BTreeMap<String, String>,
}

fn split_blocks(text: &str) -> Result<Vec<Block>, CatalogError> {
    let mut blocks: Vec<Block> = vec![];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if l.starts_with('[') {
            let kind = l.trim_matches(|c| c == '[' || c == ']').to_string();
            if kind != "link" && kind != "knot" {
                return Err(CatalogError::Parse { line, msg: format!("unknown block [{kind}]") });
            }
            blocks.push(Block { kind, line, fields: BTreeMap::new() });
            continue;
        }
        let Some(b) = blocks.last_mut() else {
            return Err(CatalogError::Parse { line, msg: "key outside of a block".into() });
        };
        let (k, v) = l.split_once('=').ok_or_else(|| CatalogError::Parse { line, msg: "expected key = value".into() })?;
        let (k, v) = (k.trim(), v.trim());
        let known = if b.kind == "link" { LINK_KEYS.contains(&k) } else { KNOT_KEYS.contains(&k) };
        if !known {
            return Err(CatalogError::Parse { line, msg: format!("unknown key `{k}` in [{}]", b.kind) });
        }
        if b.fields.insert(k.into(), v.into()).is_some() {
            return Err(CatalogError::Parse { line, msg: format!("repeated key `{k}`") });
        }
    }
    Ok(blocks)
}

fn opt(v: &str) -> Option<&str> {
    (v != "--" && !v.is_empty()).then_some(v)
}

/// Parses catalog text; `annular` maps a file reference to its contents.
pub fn parse_catalog(
    text: &str,
    annular: impl Fn(&str) -> Result<String, String>,
) -> Result<Catalog, CatalogError> {
    let blocks = split_blocks(text)?;
    let mut cat = Catalog::default();

    let get = |b: &Block, rec: &str, k: &str| -> Result<String, CatalogError> {
        b.fields.get(k).cloned().ok_or_else(|| field_err(rec, k, "missing"))
    };
    let num = |rec: &str, k: &str, v: &str| -> Result<u32, CatalogError> {
        v.parse().map_err(|_| field_err(rec, k, format!("bad integer `{v}`")))
    };
    let bit = |rec: &str, k: &str, v: &str| -> Result<u8, CatalogError> {
        match v {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(field_err(rec, k, format!("expected 0 or 1, got `{v}`"))),
        }
    };

    for b in blocks.iter().filter(|b| b.kind == "knot") {
        let rec = b.fields.get("name").cloned().unwrap_or_else(|| format!("[knot] at line {}", b.line));
        let pd = get(b, &rec, "pd")?;
        let diagram = parse_pd(&pd).map_err(|e| field_err(&rec, "pd", e.to_string()))?;
        if !diagram.is_knot() {
            return Err(field_err(&rec, "pd", format!("{} components, expected 1", diagram.ncomponents())));
        }
        let arf = bit(&rec, "arf", &get(b, &rec, "arf")?)?;
        let computed = alexander::arf_knot(&diagram).map_err(|e| CatalogError::Alexander(rec.clone(), e))?;
        if computed != arf {
            return Err(field_err(&rec, "arf", format!("recorded {arf}, computed {computed}")));
        }
        if cat.knot(&rec).is_some() {
            return Err(CatalogError::Duplicate(rec));
        }
        cat.knots.push(KnotRecord {
            name: get(b, &rec, "name")?,
            udelta: num(&rec, "udelta", &get(b, &rec, "udelta")?)?,
            pd,
            arf,
            diagram,
        });
    }

    let mut seen = HashSet::new();
    for b in blocks.iter().filter(|b| b.kind == "link") {
        let rec = b.fields.get("name_t").cloned().unwrap_or_else(|| format!("[link] at line {}", b.line));
        if !seen.insert(rec.clone()) {
            return Err(CatalogError::Duplicate(rec));
        }
        let g = |k: &str| get(b, &rec, k);

        let pd = g("pd")?;
        let diagram = parse_pd(&pd).map_err(|e| field_err(&rec, "pd", e.to_string()))?;
        if !diagram.is_algebraically_split() {
            return Err(field_err(&rec, "pd", format!("not algebraically split:\n{}", diagram.linking_matrix())));
        }

        let components = g("components")?.split(',').map(|s| s.trim()).filter(|s| !s.is_empty())
            .map(|s| {
                cat.knot(s).map(|k| ComponentKnot { name: k.name.clone(), udelta: k.udelta })
                    .ok_or_else(|| field_err(&rec, "components", format!("unknown knot `{s}`")))
            }).collect::<Result<Vec<_>, _>>()?;
        if components.len() != diagram.ncomponents() {
            return Err(field_err(&rec, "components",
                format!("{} listed, pd has {}", components.len(), diagram.ncomponents())));
        }

        let arf = bit(&rec, "arf", &g("arf")?)?;
        let g4 = parse_interval(&g("g4")?).map_err(|e| field_err(&rec, "g4", e))?;
        let mu1122_ref = match opt(&g("mu1122_ref")?) {
            Some(v) => Some(num(&rec, "mu1122_ref", v)? as u64),
            None => None,
        };
        let udelta_expected: UDelta = g("udelta_expected")?.parse().map_err(|e| field_err(&rec, "udelta_expected", e))?;
        if udelta_expected.values().iter().any(|v| v % 2 != arf as u32) {
            return Err(field_err(&rec, "udelta_expected", format!("{udelta_expected} has parity different from arf {arf}")));
        }
        let methods_expected = parse_methods(&g("methods_expected")?).map_err(|e| field_err(&rec, "methods_expected", e))?;
        let toroidal_obstruction = match g("toroidal_obstruction")?.as_str() {
            "true" => true,
            "false" => false,
            v => return Err(field_err(&rec, "toroidal_obstruction", format!("expected true/false, got `{v}`"))),
        };
        let annular_ref = opt(&g("annular")?).map(String::from);
        let annular_diagram = match &annular_ref {
            Some(f) => {
                let t = annular(f).map_err(|e| field_err(&rec, "annular", e))?;
                Some(parse_annular(&t).map_err(|e| field_err(&rec, "annular", e.to_string()))?)
            }
            None => None,
        };
        if toroidal_obstruction && annular_diagram.is_none() {
            return Err(field_err(&rec, "annular", "required when toroidal_obstruction = true"));
        }

        cat.links.push(LinkRecord {
            name_t: rec.clone(),
            name_r: g("name_r")?,
            pd,
            components,
            u: num(&rec, "u", &g("u")?)?,
            arf,
            g4,
            mu1122_ref,
            udelta_expected,
            methods_expected,
            toroidal_obstruction,
            annular: annular_ref,
            diagram,
            annular_diagram,
        });
    }
    Ok(cat)
}
