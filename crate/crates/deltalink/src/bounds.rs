//! Lower and upper bounds on the Δ-unlinking number, and their
//! combination into a verdict per link.

use std::fmt::{self, Display};
use std::str::FromStr;

use thiserror::Error;

use crate::alexander::{self, AlexanderError};
use crate::catalog::{self, LinkRecord, UDelta};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{link}: upper bound {ub} is below lower bound {lb}")]
    Inconsistent { link: String, lb: u32, ub: u32 },
    #[error("{link}: upper bound {ub} has the wrong parity (arf {arf})")]
    Parity { link: String, ub: u32, arf: u8 },
    #[error("{0} and {1} are not Δ-equivalent (different component count or linking numbers)")]
    NotEquivalent(String, String),
    #[error("{0}: {1}")]
    Alexander(String, AlexanderError),
    #[error("csv: {0}")]
    Csv(String),
}

/// Tags for the arguments producing a bound. All but `ArfParity` are
/// lower-bound sources.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    HalfUnlinking,
    ComponentSum,
    ComponentSumMuBump,
    FourGenus,
    Beta1Obstruction,
    ArfParity,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::HalfUnlinking => "half_unlinking",
            Method::ComponentSum => "component_sum",
            Method::ComponentSumMuBump => "component_sum_mu_bump",
            Method::FourGenus => "four_genus",
            Method::Beta1Obstruction => "beta1_obstruction",
            Method::ArfParity => "arf_parity",
        }
    }
}

impl Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "half_unlinking" => Method::HalfUnlinking,
            "component_sum" => Method::ComponentSum,
            "component_sum_mu_bump" => Method::ComponentSumMuBump,
            "four_genus" => Method::FourGenus,
            "beta1_obstruction" => Method::Beta1Obstruction,
            "arf_parity" => Method::ArfParity,
            _ => return Err(format!("unknown method `{s}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Exact(u32),
    /// `{lb, lb + 2, ..., ub}`
    Interval(Vec<u32>),
    LowerOnly(u32),
}

impl Status {
    /// Whether this agrees with a recorded value.
    pub fn agrees(&self, u: &UDelta) -> bool {
        match self {
            Status::Exact(n) => *u == UDelta::Exact(*n),
            Status::Interval(v) => v.len() == 2 && *u == UDelta::Either(v[0], v[1]),
            Status::LowerOnly(_) => false,
        }
    }
}

impl Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Exact(n) => write!(f, "{n}"),
            Status::Interval(v) => {
                let s: Vec<_> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", s.join(" or "))
            }
            Status::LowerOnly(n) => write!(f, ">= {n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub link: String,
    pub lower_bounds: Vec<(u32, Method)>,
    pub parity: u8,
    pub lb_final: u32,
    pub ub: Option<u32>,
    pub status: Status,
    /// Sources attaining the final lower bound, plus `ArfParity` when the
    /// parity step raised it.
    pub contributing: Vec<Method>,
}

impl Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "link: {}", self.link)?;
        for (v, m) in &self.lower_bounds {
            writeln!(f, "  lower {v:>2}  [{m}]")?;
        }
        writeln!(f, "  parity (arf) {}", self.parity)?;
        writeln!(f, "  lower bound {}  [{}]", self.lb_final, catalog::format_methods(&self.contributing))?;
        match self.ub {
            Some(u) => writeln!(f, "  upper bound {u}  [pathway certificate]")?,
            None => writeln!(f, "  upper bound --")?,
        }
        write!(f, "  u^Δ = {}", self.status)
    }
}

pub fn lower_half_unlinking(u: u32) -> u32 {
    u.div_ceil(2)
}

/// Sum of the components' Δ-unknotting numbers, plus one when `μ̄(1122)`
/// is nonzero.
pub fn lower_component_sum(udelta_components: &[u32], mu1122: Option<u64>) -> (u32, Method) {
    let s = udelta_components.iter().sum();
    match mu1122 {
        Some(m) if m != 0 => (s + 1, Method::ComponentSumMuBump),
        _ => (s, Method::ComponentSum),
    }
}

pub fn lower_four_genus(g4_lo: u32) -> u32 {
    g4_lo
}

pub fn parity_adjust(lb: u32, arf: u8) -> u32 {
    if lb % 2 == arf as u32 % 2 { lb } else { lb + 1 }
}

/// `μ̄(1122)` computed from the record's diagram (two components only).
pub fn mu_of(record: &LinkRecord) -> Result<Option<u64>, BoundsError> {
    if record.ncomponents() != 2 {
        return Ok(None);
    }
    alexander::milnor_1122(record.diagram()).map(Some)
        .map_err(|e| BoundsError::Alexander(record.name_t.clone(), e))
}

fn sources(record: &LinkRecord, mu: Option<u64>) -> Vec<(u32, Method)> {
    let ks: Vec<u32> = record.components.iter().map(|c| c.udelta).collect();
    let (cs, ctag) = lower_component_sum(&ks, mu);
    vec![
        (lower_half_unlinking(record.u), Method::HalfUnlinking),
        (cs, ctag),
        (lower_four_genus(record.g4.0), Method::FourGenus),
    ]
}

pub fn combine(record: &LinkRecord, ub: Option<u32>, beta1_flag: bool) -> Result<BoundReport, BoundsError> {
    let mu = mu_of(record)?;
    let mut lower_bounds = sources(record, mu);
    let parity = record.arf;
    let max = lower_bounds.iter().map(|s| s.0).max().unwrap_or(0);
    let mut lb = parity_adjust(max, parity);

    let mut contributing: Vec<Method> = lower_bounds.iter().filter(|s| s.0 == max && max > 0).map(|s| s.1).collect();
    if lb != max {
        contributing.push(Method::ArfParity);
    }
    // β₁ rules out 1, parity rules out 2
    if beta1_flag && lb == 1 && parity == 1 {
        lb = 3;
        lower_bounds.push((3, Method::Beta1Obstruction));
        contributing = vec![Method::Beta1Obstruction];
    }
    contributing.sort();

    let link = record.name_t.clone();
    let status = match ub {
        None => Status::LowerOnly(lb),
        Some(u) if u < lb => return Err(BoundsError::Inconsistent { link, lb, ub: u }),
        Some(u) if u % 2 != parity as u32 => return Err(BoundsError::Parity { link, ub: u, arf: parity }),
        Some(u) if u == lb => Status::Exact(u),
        Some(u) => Status::Interval((lb..=u).step_by(2).collect()),
    };
    Ok(BoundReport { link, lower_bounds, parity, lb_final: lb, ub, status, contributing })
}

/// The lower bound obtainable from `methods` alone. Used to check that a
/// recorded method list suffices for the recorded value.
pub fn lb_restricted(record: &LinkRecord, methods: &[Method], beta1_flag: bool) -> Result<u32, BoundsError> {
    let mu = mu_of(record)?;
    let mut cands = sources(record, mu);
    // the plain sum stays available when the bump is not claimed
    cands.push(lower_component_sum(&record.components.iter().map(|c| c.udelta).collect::<Vec<_>>(), None));
    let max = cands.into_iter().filter(|s| methods.contains(&s.1)).map(|s| s.0).max().unwrap_or(0);
    let beta = beta1_flag && methods.contains(&Method::Beta1Obstruction);
    // the toroidal argument carries its own parity step
    let mut lb = if methods.contains(&Method::ArfParity) || beta { parity_adjust(max, record.arf) } else { max };
    if beta && lb <= 1 && record.arf == 1 {
        lb = 3;
    }
    Ok(lb)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceBounds {
    pub lower: u32,
    pub upper: Option<u32>,
    pub parity: u8,
}

/// Bounds on the Δ-Gordian distance between two records, using certified
/// 4-genus intervals and recorded exact Δ-unlinking numbers.
pub fn delta_distance_bounds(a: &LinkRecord, b: &LinkRecord) -> Result<DistanceBounds, BoundsError> {
    let (la, lb) = (a.diagram().linking_matrix(), b.diagram().linking_matrix());
    if a.ncomponents() != b.ncomponents() || la.abs_multiset() != lb.abs_multiset() {
        return Err(BoundsError::NotEquivalent(a.name_t.clone(), b.name_t.clone()));
    }
    let g = a.g4.0.saturating_sub(b.g4.1).max(b.g4.0.saturating_sub(a.g4.1));
    let (ua, ub) = (a.udelta_expected.exact(), b.udelta_expected.exact());
    let u = ua.zip(ub).map(|(x, y)| x.abs_diff(y)).unwrap_or(0);
    let parity = (a.arf + b.arf) % 2;
    Ok(DistanceBounds {
        lower: parity_adjust(g.max(u), parity),
        upper: ua.zip(ub).map(|(x, y)| x + y),
        parity,
    })
}

/// One row of the regenerated table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub name_t: String,
    pub name_r: String,
    pub udelta: Status,
    pub u: u32,
    pub component_sum: u32,
    pub arf: u8,
    pub g4: (u32, u32),
    pub mu1122: Option<u64>,
    pub methods: Vec<Method>,
    pub expected: UDelta,
}

impl TableRow {
    pub fn from_report(record: &LinkRecord, report: &BoundReport) -> Result<Self, BoundsError> {
        Ok(Self {
            name_t: record.name_t.clone(),
            name_r: record.name_r.clone(),
            udelta: report.status.clone(),
            u: record.u,
            component_sum: record.components.iter().map(|c| c.udelta).sum(),
            arf: record.arf,
            g4: record.g4,
            mu1122: mu_of(record)?,
            methods: report.contributing.clone(),
            expected: record.udelta_expected,
        })
    }

    pub fn matches_expected(&self) -> bool {
        self.udelta.agrees(&self.expected)
    }

    fn half_u(&self) -> String {
        if self.u % 2 == 0 { format!("{}", self.u / 2) } else { format!("{}.5", self.u / 2) }
    }

    fn g4_text(&self) -> String {
        let (lo, hi) = self.g4;
        if lo == hi { lo.to_string() } else { format!("{lo} or {hi}") }
    }
}

fn opt_text<T: Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "--".into())
}

pub fn table_markdown(rows: &[TableRow]) -> String {
    let mut s = String::from("| Link | Rolfsen | u^Δ | u/2 | Σ u^Δ(L_i) | arf | g4 | \\|μ̄(1122)\\| | Method(s) | expected |\n");
    s += "|---|---|---|---|---|---|---|---|---|---|\n";
    for r in rows {
        let mark = if r.matches_expected() { "" } else { " ✗" };
        s += &format!("| {} | {} | {} | {} | {} | {} | {} | {} | {} | {}{} |\n",
            r.name_t, r.name_r, r.udelta, r.half_u(), r.component_sum, r.arf, r.g4_text(),
            opt_text(&r.mu1122), catalog::format_methods(&r.methods), r.expected, mark);
    }
    s
}

const CSV_HEADER: [&str; 10] = ["name_t", "name_r", "udelta", "u", "component_sum", "arf", "g4", "mu1122", "methods", "udelta_expected"];

fn status_cell(s: &Status) -> String {
    match s {
        Status::Exact(n) => n.to_string(),
        Status::Interval(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|"),
        Status::LowerOnly(n) => format!("{n}.."),
    }
}

fn parse_status(s: &str) -> Result<Status, String> {
    if let Some(n) = s.strip_suffix("..") {
        return n.parse().map(Status::LowerOnly).map_err(|_| format!("bad status `{s}`"));
    }
    let v: Vec<u32> = s.split('|').map(|t| t.parse().map_err(|_| format!("bad status `{s}`"))).collect::<Result<_, _>>()?;
    Ok(if v.len() == 1 { Status::Exact(v[0]) } else { Status::Interval(v) })
}

/// CSV with cells in the dataset's value syntax.
pub fn table_csv(rows: &[TableRow]) -> Result<String, BoundsError> {
    let mut w = csv::Writer::from_writer(vec![]);
    let err = |e: csv::Error| BoundsError::Csv(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.name_t.clone(),
            r.name_r.clone(),
            status_cell(&r.udelta),
            r.u.to_string(),
            r.component_sum.to_string(),
            r.arf.to_string(),
            catalog::format_interval(r.g4),
            opt_text(&r.mu1122),
            catalog::format_methods(&r.methods),
            r.expected.to_string(),
        ]).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| BoundsError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

pub fn parse_table_csv(text: &str) -> Result<Vec<TableRow>, BoundsError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| BoundsError::Csv(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(BoundsError::Csv("unexpected header".into()));
    }
    let mut rows = vec![];
    for rec in r.records() {
        let rec = rec.map_err(|e| BoundsError::Csv(e.to_string()))?;
        let e = |m: String| BoundsError::Csv(format!("{}: {m}", &rec[0]));
        let n = |i: usize| rec[i].parse::<u32>().map_err(|_| e(format!("bad integer `{}`", &rec[i])));
        rows.push(TableRow {
            name_t: rec[0].into(),
            name_r: rec[1].into(),
            udelta: parse_status(&rec[2]).map_err(e)?,
            u: n(3)?,
            component_sum: n(4)?,
            arf: n(5)? as u8,
            g4: catalog::parse_interval(&rec[6]).map_err(e)?,
            mu1122: if &rec[7] == "--" { None } else { Some(n(7)? as u64) },
            methods: catalog::parse_methods(&rec[8]).map_err(e)?,
            expected: rec[9].parse().map_err(e)?,
        });
    }
    Ok(rows)
}
