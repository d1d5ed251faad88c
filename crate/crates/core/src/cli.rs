//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 decomposition not covered by the
//! catalog, 3 parse or validation failure (including a failing `verify`).
//! Every error writes one line to stderr, prefixed with `E_USAGE`,
//! `E_NOT_IN_CATALOG` or `E_VALIDATION`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::{self, describe_quarters, Catalog};
use crate::monodromy::{
    classify_family, is_realizable, monodromy_group, verify_catalog, MonodromyError,
};
use crate::morse::derive_dag;
use crate::permgroup::{identify, GroupId, Permutation};
use crate::real_scheme::{
    catalog_lookup, parse_scheme, reversal_equivalent, RealScheme, SchemeFamily,
};
use crate::root_scheme::{canonical_form, parse_root_scheme, symmetry_group};
use crate::topology::{surface_kind, HalfDecomposition, HalfIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Color {
    Auto,
    Never,
}

#[derive(Debug, Parser)]
#[command(
    name = "enriques",
    version,
    about = "Monodromy groups of hyperbolic real Enriques surfaces"
)]
pub struct CliConfig {
    /// Output format; dot is accepted by `derive` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Color::Auto)]
    pub color: Color,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct HalvesArgs {
    /// Distinguished half, e.g. "V3" or "V4 + S".
    #[arg(long, allow_hyphen_values = true)]
    pub half1: String,
    /// Second half, e.g. "V1 + 4S"; "0" for the empty half.
    #[arg(long, allow_hyphen_values = true)]
    pub half2: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kind of the real part with per-component Euler characteristics and
    /// Betti numbers.
    Classify(HalvesArgs),
    /// Morse derivatives obtained by simplifying the second half.
    Derive(HalvesArgs),
    /// Realized permutation groups of both halves.
    Monodromy {
        #[command(flatten)]
        halves: HalvesArgs,
        /// Check one permutation instead, in cycle notation on canonical
        /// component indices, e.g. "(1 2)".
        #[arg(long)]
        perm: Option<String>,
        /// Half the permutation acts on.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        on_half: u8,
    },
    /// Real scheme notation.
    Scheme {
        #[command(subcommand)]
        op: SchemeOp,
    },
    /// Real root schemes.
    Rootscheme {
        #[command(subcommand)]
        op: RootSchemeOp,
    },
    /// Recompute every group claimed by the catalog.
    Verify,
    /// Print the catalog in its file format.
    CatalogDump,
}

#[derive(Debug, Subcommand)]
pub enum SchemeOp {
    Parse {
        text: String,
    },
    Canon {
        text: String,
    },
    /// Equality, up to reversal of zones for schemes with bars.
    Equiv {
        a: String,
        b: String,
    },
    /// Find a rigid isotopy class: PlaneQuartic, Sigma2Cubic or P4QuadricPair.
    Lookup {
        family: String,
        key: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RootSchemeOp {
    Sym { text: String },
    Canon { text: String },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    NotInCatalog(String),
    Validation(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::NotInCatalog(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    fn line(&self) -> String {
        let (prefix, msg) = match self {
            CliError::Usage(m) => ("E_USAGE", m),
            CliError::NotInCatalog(m) => ("E_NOT_IN_CATALOG", m),
            CliError::Validation(m) => ("E_VALIDATION", m),
        };
        format!("{prefix}: {}", msg.replace('\n', " "))
    }
}

impl From<MonodromyError> for CliError {
    fn from(e: MonodromyError) -> Self {
        match e {
            MonodromyError::NotInCatalog(_) => CliError::NotInCatalog(e.to_string()),
            MonodromyError::Perm(p) => CliError::Validation(p.to_string()),
        }
    }
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let first = e.to_string();
            let first = first
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "{}", CliError::Usage(first.to_string()).line());
            return 1;
        }
    };
    match execute(&config) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err((e, partial)) => {
            let _ = out.write_all(partial.as_bytes());
            let _ = writeln!(err, "{}", e.line());
            e.code()
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn load_catalog(config: &CliConfig) -> Result<Catalog, CliError> {
    match &config.catalog {
        Some(path) => catalog::load(path).map_err(validation),
        None => Ok(catalog::embedded_default()),
    }
}

fn halves(args: &HalvesArgs) -> Result<HalfDecomposition, CliError> {
    HalfDecomposition::parse(&args.half1, &args.half2).map_err(validation)
}

// Errors carry whatever output was produced before the failure.
fn execute(config: &CliConfig) -> Result<String, (CliError, String)> {
    if config.format == Format::Dot && !matches!(config.command, Command::Derive(_)) {
        return Err((
            CliError::Usage("--format dot is only valid for derive".into()),
            String::new(),
        ));
    }
    let plain = |r: Result<String, CliError>| r.map_err(|e| (e, String::new()));
    match &config.command {
        Command::Classify(args) => plain(classify(config, args)),
        Command::Derive(args) => plain(derive(config, args)),
        Command::Monodromy {
            halves: args,
            perm,
            on_half,
        } => plain(monodromy(config, args, perm.as_deref(), *on_half)),
        Command::Scheme { op } => plain(scheme(config, op)),
        Command::Rootscheme { op } => plain(rootscheme(config, op)),
        Command::Verify => verify(config),
        Command::CatalogDump => plain(load_catalog(config).map(|c| c.format())),
    }
}

fn classify(config: &CliConfig, args: &HalvesArgs) -> Result<String, CliError> {
    let d = halves(args)?;
    let kind = surface_kind(&d);
    let family = classify_family(&d);
    let rows: Vec<_> = [(1, &d.half1), (2, &d.half2)]
        .into_iter()
        .flat_map(|(i, h)| {
            h.classes().into_iter().map(move |(c, n)| {
                json!({
                    "half": i,
                    "component": c.to_string(),
                    "count": n,
                    "euler": c.euler_characteristic(),
                    "betti": c.betti(),
                })
            })
        })
        .collect();
    if config.format == Format::Json {
        return Ok(to_json(&json!({
            "half1": d.half1.to_string(),
            "half2": d.half2.to_string(),
            "kind": kind.to_string(),
            "family": family.tag(),
            "components": rows,
            "total_betti": {"half1": d.half1.total_betti(), "half2": d.half2.total_betti()},
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "decomposition  {d}");
    let _ = writeln!(s, "kind           {kind}");
    let _ = writeln!(s, "family         {family}");
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<5} {:<10} {:>5} {:>6} {:>6}",
        "half", "component", "count", "euler", "betti"
    );
    for r in &rows {
        let _ = writeln!(
            s,
            "{:<5} {:<10} {:>5} {:>6} {:>6}",
            r["half"],
            r["component"].as_str().unwrap_or(""),
            r["count"],
            r["euler"],
            r["betti"]
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "total betti    half1 {}, half2 {}",
        d.half1.total_betti(),
        d.half2.total_betti()
    );
    Ok(s)
}

fn derive(config: &CliConfig, args: &HalvesArgs) -> Result<String, CliError> {
    let d = halves(args)?;
    let dag = derive_dag(&d);
    match config.format {
        Format::Dot => Ok(dag.to_dot()),
        Format::Json => {
            let nodes: Vec<_> = dag
                .nodes()
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    json!({
                        "id": i,
                        "half1": n.half1.to_string(),
                        "half2": n.half2.to_string(),
                        "betti2": n.half2.total_betti(),
                    })
                })
                .collect();
            Ok(to_json(&json!({
                "root": {"half1": d.half1.to_string(), "half2": d.half2.to_string()},
                "nodes": nodes,
                "edges": dag.edges(),
            })))
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "half1 fixed: {}", d.half1);
            let _ = writeln!(s, "{:>4}  {:<24} {:>6}", "id", "half2", "betti");
            for (i, n) in dag.nodes().iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{:>4}  {:<24} {:>6}",
                    i,
                    n.half2.to_string(),
                    n.half2.total_betti()
                );
            }
            let _ = writeln!(s, "edges:");
            for e in dag.edges() {
                let _ = writeln!(s, "  {} -> {}  {}", e.from, e.to, e.step);
            }
            Ok(s)
        }
    }
}

fn monodromy(
    config: &CliConfig,
    args: &HalvesArgs,
    perm: Option<&str>,
    on_half: u8,
) -> Result<String, CliError> {
    let d = halves(args)?;
    let catalog = load_catalog(config)?;
    if let Some(text) = perm {
        let index = HalfIndex::from_number(on_half).expect("clap restricts to 1..=2");
        let pi = Permutation::parse_cycles(d.half(index).len(), text).map_err(validation)?;
        let realizable = is_realizable(&d, index, &pi, &catalog)?;
        return Ok(match config.format {
            Format::Json => to_json(&json!({
                "half": on_half,
                "permutation": pi.to_string(),
                "realizable": realizable,
            })),
            _ => format!(
                "half{on_half} {pi}: {}\n",
                if realizable {
                    "realizable"
                } else {
                    "not realizable"
                }
            ),
        });
    }
    let r = monodromy_group(&d, &catalog)?;
    if config.format == Format::Json {
        return Ok(to_json(&r));
    }
    let mut s = String::new();
    let _ = writeln!(s, "decomposition  {d}");
    let _ = writeln!(s, "family         {}", r.family);
    for (label, h, g) in [
        ("half1", &d.half1, &r.group_half1),
        ("half2", &d.half2, &r.group_half2),
    ] {
        let gens: Vec<String> = g
            .group
            .generators()
            .iter()
            .map(ToString::to_string)
            .collect();
        let _ = writeln!(
            s,
            "{label:<14} {h}: {} (order {}), generators {}",
            group_label(g.id),
            g.group.order(),
            if gens.is_empty() {
                "-".to_string()
            } else {
                gens.join(" ")
            }
        );
    }
    match &r.quarter_partition {
        Some(q) => {
            let _ = writeln!(
                s,
                "exceptional    yes, quarters {}",
                describe_quarters(&d.half2, q)
            );
        }
        None => {
            let _ = writeln!(s, "exceptional    no");
        }
    }
    if let Some(m) = &r.mechanism {
        let _ = writeln!(s, "mechanism      {m}");
    }
    for n in &r.notes {
        let _ = writeln!(s, "note           {n}");
    }
    Ok(s)
}

fn scheme_kind(s: &RealScheme) -> &'static str {
    match s {
        RealScheme::Plane(_) => "plane",
        RealScheme::Sigma2(_) => "sigma2",
    }
}

fn scheme(config: &CliConfig, op: &SchemeOp) -> Result<String, CliError> {
    let json = config.format == Format::Json;
    match op {
        SchemeOp::Parse { text } => {
            let s = parse_scheme(text).map_err(validation)?;
            let bars = s.as_sigma2().map_or(0, |z| z.bars());
            if json {
                return Ok(to_json(&json!({
                    "input": text,
                    "canonical": s.canonical_text(),
                    "kind": scheme_kind(&s),
                    "ovals": s.oval_count(),
                    "bars": bars,
                })));
            }
            Ok(format!(
                "canonical  {}\nkind       {}\novals      {}\nbars       {}\n",
                s.canonical_text(),
                scheme_kind(&s),
                s.oval_count(),
                bars
            ))
        }
        SchemeOp::Canon { text } => {
            let s = parse_scheme(text).map_err(validation)?;
            Ok(if json {
                to_json(&json!({"input": text, "canonical": s.canonical_text()}))
            } else {
                format!("{}\n", s.canonical_text())
            })
        }
        SchemeOp::Equiv { a, b } => {
            let sa = parse_scheme(a).map_err(validation)?;
            let sb = parse_scheme(b).map_err(validation)?;
            let equivalent = match (&sa, &sb) {
                (RealScheme::Sigma2(x), RealScheme::Sigma2(y)) => reversal_equivalent(x, y),
                _ => sa == sb,
            };
            Ok(if json {
                to_json(
                    &json!({"a": sa.canonical_text(), "b": sb.canonical_text(), "equivalent": equivalent}),
                )
            } else {
                format!("{equivalent}\n")
            })
        }
        SchemeOp::Lookup { family, key } => {
            let family: SchemeFamily = family.parse().map_err(CliError::Usage)?;
            let catalog = load_catalog(config)?;
            let record = catalog_lookup(catalog.scheme_catalogs(), family, key)
                .map_err(|e| CliError::NotInCatalog(e.to_string()))?;
            let rigid = record.metadata.all_oval_permutations_rigid;
            Ok(if json {
                to_json(&json!({
                    "family": family.name(),
                    "key": record.key.to_string(),
                    "all_oval_permutations_rigid": rigid,
                }))
            } else {
                format!(
                    "{} class {}{}\n",
                    family.name(),
                    record.key,
                    if rigid {
                        " (every oval permutation realized by rigid isotopy)"
                    } else {
                        ""
                    }
                )
            })
        }
    }
}

fn rootscheme(config: &CliConfig, op: &RootSchemeOp) -> Result<String, CliError> {
    let json = config.format == Format::Json;
    match op {
        RootSchemeOp::Canon { text } => {
            let s = parse_root_scheme(text).map_err(validation)?;
            let c = canonical_form(&s);
            Ok(if json {
                to_json(&json!({"input": text, "canonical": c.to_string()}))
            } else {
                format!("{c}\n")
            })
        }
        RootSchemeOp::Sym { text } => {
            let s = parse_root_scheme(text).map_err(validation)?;
            let (syms, g) = symmetry_group(&s);
            let id = identify(&g);
            let syms: Vec<String> = syms.iter().map(ToString::to_string).collect();
            let gens: Vec<String> = g.generators().iter().map(ToString::to_string).collect();
            Ok(if json {
                to_json(&json!({
                    "scheme": s.to_string(),
                    "segments": s.segment_count(),
                    "symmetries": syms,
                    "induced": {"order": g.order(), "id": id, "generators": gens},
                }))
            } else {
                format!(
                    "scheme      {s}\nsegments    {}\nsymmetries  {}\ninduced     {} (order {}), generators {}\n",
                    s.segment_count(),
                    syms.join(" "),
                    group_label(id),
                    g.order(),
                    if gens.is_empty() { "-".to_string() } else { gens.join(" ") }
                )
            })
        }
    }
}

// "Z2 = S2", or just the name when there is no other common one.
fn group_label(id: GroupId) -> String {
    if id.alias() == id.name() {
        id.name()
    } else {
        format!("{} = {}", id.name(), id.alias())
    }
}

fn verify(config: &CliConfig) -> Result<String, (CliError, String)> {
    let catalog = load_catalog(config).map_err(|e| (e, String::new()))?;
    let report = verify_catalog(&catalog);
    let color = config.color == Color::Auto
        && config.format == Format::Table
        && std::io::stdout().is_terminal();
    let text = if config.format == Format::Json {
        to_json(&json!({"all_passed": report.all_passed(), "checks": report.checks}))
    } else {
        let mut s = String::new();
        for c in &report.checks {
            let tag = match (c.passed, color) {
                (true, true) => "\x1b[32mPASS\x1b[0m",
                (false, true) => "\x1b[31mFAIL\x1b[0m",
                (true, false) => "PASS",
                (false, false) => "FAIL",
            };
            let _ = writeln!(s, "{tag}  {}: {}", c.name, c.detail);
        }
        let passed = report.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(s, "{passed}/{} checks passed", report.checks.len());
        s
    };
    if report.all_passed() {
        Ok(text)
    } else {
        let failed: BTreeSet<&str> = report.failures().map(|c| c.name.as_str()).collect();
        let names: Vec<&str> = failed.into_iter().collect();
        Err((
            CliError::Validation(format!(
                "{} check(s) failed: {}",
                names.len(),
                names.join("; ")
            )),
            text,
        ))
    }
}
