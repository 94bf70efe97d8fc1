use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use deltalink::alexander::{alexander_poly, arf_knot, milnor_1122};
use deltalink::bounds::{self, combine, TableRow};
use deltalink::catalog::{load_catalog, Catalog, LinkRecord};
use deltalink::diagram::{parse_pd, LinkDiagram};
use deltalink::pathways::{parse_certificate, upper_bound_from, verify_level_a, verify_level_b, PathwayCertificate, VerificationReport};
use deltalink::solid_torus::{obstructs_single_toroidal_delta, parse_annular};

#[derive(Parser)]
#[command(name = "deltalink", version, about = "Δ-unlinking number invariants, bounds and pathway certificates")]
struct Cli {
    /// Dataset file (default: the bundled catalog)
    #[arg(long, global = true, env = "DELTA_LINK_CATALOG")]
    catalog: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Level::A)]
    level: Level,
    /// Only report failures
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format { Md, Csv }

#[derive(Clone, Copy, ValueEnum)]
enum Level { A, B }

#[derive(Subcommand)]
enum Cmd {
    /// Linking matrix, Alexander polynomial, arf and μ̄(1122)
    Invariants { target: String },
    /// Lower and upper bounds for a catalog link
    Bounds { link: String },
    /// Verify a pathway certificate (file, or catalog link name)
    Verify { certificate: String },
    /// Regenerate the table and compare with the recorded values
    Table,
    /// β₁ of an annular diagram (file, or catalog link name)
    Beta1 { target: String },
}

/// Failure with its exit code.
struct Fail(u8, String);

fn parse_err(e: impl ToString) -> Fail { Fail(2, e.to_string()) }
fn failed(e: impl ToString) -> Fail { Fail(1, e.to_string()) }

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let r = run(&cli, &mut out);
    print!("{out}");
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn catalog(cli: &Cli) -> Result<Catalog, Fail> {
    match &cli.catalog {
        Some(p) => load_catalog(p).map_err(parse_err),
        None => Ok(Catalog::bundled()),
    }
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Fail> {
    let cat = catalog(cli)?;
    match &cli.cmd {
        Cmd::Invariants { target } => invariants(&cat, target, out),
        Cmd::Bounds { link } => {
            let r = cat.link(link).ok_or_else(|| parse_err(format!("unknown link `{link}`")))?;
            let (ub, _) = certified_ub(cli, &cat, r)?;
            let rep = combine(r, ub, r.beta1_flag()).map_err(failed)?;
            writeln!(out, "{rep}").unwrap();
            if !rep.status.agrees(&r.udelta_expected) {
                return Err(failed(format!("{}: computed {}, recorded {}", r.name_t, rep.status, r.udelta_expected)));
            }
            Ok(())
        }
        Cmd::Verify { certificate } => {
            let text = read_or_named(certificate, |n| cat.pathways.get(n).cloned())?;
            let p = parse_certificate(&text, &cat).map_err(parse_err)?;
            let rep = verify(cli, &p)?;
            if !cli.quiet || !rep.passed() {
                writeln!(out, "{}\n{rep}", p.names().join(" -> ")).unwrap();
            }
            if !rep.passed() {
                return Err(failed("certificate refuted"));
            }
            if let Ok(n) = upper_bound_from(&p, &rep) {
                if !cli.quiet {
                    writeln!(out, "upper bound: {n}").unwrap();
                }
            }
            Ok(())
        }
        Cmd::Table => table(cli, &cat, out),
        Cmd::Beta1 { target } => {
            let a = match cat.link(target).and_then(LinkRecord::annular_diagram) {
                Some(a) => a.clone(),
                None => parse_annular(&read_or_named(target, |_| None)?).map_err(parse_err)?,
            };
            let b = a.beta1();
            writeln!(out, "beta1 = {b}").unwrap();
            writeln!(out, "obstructs a single toroidal Δ-move to the trivial link: {}", obstructs_single_toroidal_delta(b)).unwrap();
            Ok(())
        }
    }
}

/// Contents of the file `s`, or the catalog entry named `s` (also with a
/// file extension stripped).
fn read_or_named(s: &str, named: impl Fn(&str) -> Option<String>) -> Result<String, Fail> {
    if Path::new(s).is_file() {
        return fs::read_to_string(s).map_err(parse_err);
    }
    let stem = Path::new(s).file_stem().map(|x| x.to_string_lossy().to_string()).unwrap_or_default();
    named(s).or_else(|| named(&stem)).ok_or_else(|| parse_err(format!("no such file or catalog entry `{s}`")))
}

fn verify(cli: &Cli, p: &PathwayCertificate) -> Result<VerificationReport, Fail> {
    match cli.level {
        Level::A => Ok(verify_level_a(p)),
        Level::B => verify_level_b(p).map_err(failed),
    }
}

fn certified_ub(cli: &Cli, cat: &Catalog, r: &LinkRecord) -> Result<(Option<u32>, bool), Fail> {
    let Some(text) = cat.pathways.get(&r.name_t) else { return Ok((None, true)) };
    let p = parse_certificate(text, cat).map_err(parse_err)?;
    let rep = verify(cli, &p)?;
    Ok((upper_bound_from(&p, &rep).ok(), rep.passed()))
}

fn target_diagram<'a>(cat: &'a Catalog, target: &str) -> Result<(LinkDiagram, Option<&'a LinkRecord>), Fail> {
    if target.contains('(') || target.starts_with("O*") {
        return Ok((parse_pd(target).map_err(parse_err)?, None));
    }
    let node = cat.resolve(target).map_err(parse_err)?;
    Ok((node.diagram, cat.link(target)))
}

fn invariants(cat: &Catalog, target: &str, out: &mut String) -> Result<(), Fail> {
    let (d, rec) = target_diagram(cat, target)?;
    let m = d.ncomponents();
    writeln!(out, "components: {m}").unwrap();
    writeln!(out, "crossings: {}", d.ncrossings()).unwrap();
    writeln!(out, "linking matrix:\n{}", d.linking_matrix()).unwrap();
    writeln!(out, "algebraically split: {}", d.is_algebraically_split()).unwrap();
    writeln!(out, "proper: {}", d.is_proper()).unwrap();
    if m == 0 {
        return Ok(());
    }
    let delta = alexander_poly(&d).map_err(failed)?;
    writeln!(out, "alexander: {delta}").unwrap();
    if m == 1 {
        writeln!(out, "arf: {}", arf_knot(&d).map_err(failed)?).unwrap();
    } else if let Some(r) = rec {
        writeln!(out, "arf: {} (catalog)", r.arf).unwrap();
    }
    if m == 2 && d.is_algebraically_split() {
        writeln!(out, "mu1122: {}", milnor_1122(&d).map_err(failed)?).unwrap();
    }
    Ok(())
}

fn table(cli: &Cli, cat: &Catalog, out: &mut String) -> Result<(), Fail> {
    let mut rows = vec![];
    let mut diffs = vec![];
    for r in &cat.links {
        let (ub, passed) = certified_ub(cli, cat, r)?;
        if !passed {
            diffs.push(format!("{}: pathway certificate refuted", r.name_t));
        }
        let rep = combine(r, ub, r.beta1_flag()).map_err(failed)?;
        let row = TableRow::from_report(r, &rep).map_err(failed)?;
        if !row.matches_expected() {
            diffs.push(format!("{}: computed {}, recorded {}", r.name_t, row.udelta, r.udelta_expected));
        }
        let route = bounds::lb_restricted(r, &r.methods_expected, r.beta1_flag()).map_err(failed)?;
        if route != rep.lb_final {
            diffs.push(format!("{}: recorded methods give {route}, not {}", r.name_t, rep.lb_final));
        }
        rows.push(row);
    }
    match cli.format {
        Format::Md => out.push_str(&bounds::table_markdown(&rows)),
        Format::Csv => out.push_str(&bounds::table_csv(&rows).map_err(failed)?),
    }
    if diffs.is_empty() {
        if !cli.quiet {
            eprintln!("{} rows, no differences", rows.len());
        }
        Ok(())
    } else {
        Err(failed(diffs.join("\n")))
    }
}
