//! Batch command-line front end.
//!
//! Options come from flags and from an optional `--config` file of
//! `key=value` lines (keys are flag names without dashes, plus `command`).
//! Flags win over the file. Errors are reported as a single line
//! `error: kind=<kind> command=<command> message=<text>` on stderr.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::abelian_group::{FiniteAbelianGroup, SymbolicOrder};
use crate::algebra::{graded_dimension, oracle_graded_dimension, AlgebraSpec, GroupSpec, Variant, ORACLE_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::linalg::format_rational;
use crate::par::{map_collect, with_threads, Execution};
use crate::partitions::JVector;
use crate::poly::Poly;
use crate::rigidity::{self, adjoint_matrix, commutant_sp, random_commutant_group_element, sp_dimension, AbelianSymplecticAction};
use crate::series::{
    j_twisted_dims, putman_gap, render_columns, stratum_census, twisted_cohomology_dims, DimensionTable, LevelMode, Provenance,
    TableMeta, TableRow, TwistedRequest,
};
use crate::symmetry::{character_report, cycle_types, decompose, permutation_character};

const COMMANDS: [&str; 8] = ["dims", "twisted", "gap", "character", "commutant", "oracle-check", "strata", "j-twisted"];
const BOOL_FLAGS: [&str; 7] = ["allow-extrapolated", "full-mcg", "closed", "sequential", "with-basis", "with-oracle", "check-adjoint"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "prymcoh", version, about = "Dimension tables, characters and commutants for twisted cohomology of level mapping class groups")]
pub struct Cli {
    /// key=value file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Run every batch on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded dimensions of one algebra.
    Dims(DimsArgs),
    /// Twisted cohomology table.
    Twisted(TwistedArgs),
    /// Full versus level mapping class group at one degree.
    Gap(GapArgs),
    /// S_r permutation character and its decomposition.
    Character(CharacterArgs),
    /// Commutant of a symplectic action.
    Commutant(CommutantArgs),
    /// Closed form against generators-and-relations row reduction.
    OracleCheck(OracleArgs),
    /// Census of D-weighted partitions by codimension.
    Strata(StrataArgs),
    /// Table for tensor products mixing Prym and closed-cover factors.
    JTwisted(JArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Dims(_) => "dims",
            Command::Twisted(_) => "twisted",
            Command::Gap(_) => "gap",
            Command::Character(_) => "character",
            Command::Commutant(_) => "commutant",
            Command::OracleCheck(_) => "oracle-check",
            Command::Strata(_) => "strata",
            Command::JTwisted(_) => "j-twisted",
        }
    }
}

/// Where `m = |D|` comes from: a group literal, `(ℓ, g)`, or nothing.
#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group literal such as Z3, Z2xZ4, Z3^4 or H1(g=2,l=3).
    #[arg(long, conflicts_with_all = ["level", "genus"])]
    pub group: Option<String>,
    #[arg(long)]
    pub level: Option<u64>,
    #[arg(long)]
    pub genus: Option<u64>,
}

impl GroupArgs {
    fn concrete_group(&self) -> Result<Option<FiniteAbelianGroup>> {
        self.group.as_deref().map(str::parse).transpose()
    }

    fn m(&self) -> Result<Option<BigInt>> {
        if let Some(g) = self.concrete_group()? {
            return Ok(Some(g.order()));
        }
        check_level(self.level)?;
        Ok(SymbolicOrder {
            level: self.level,
            genus: self.genus,
        }
        .specialize())
    }
}

fn check_level(level: Option<u64>) -> Result<()> {
    match level {
        Some(l) if l < 2 => Err(Error::invalid(format!("level {l} must be at least 2"))),
        _ => Ok(()),
    }
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[arg(long)]
    pub variant: Variant,
    #[arg(long)]
    pub r: usize,
    /// Single degree; omit to print degrees 0..=max-degree.
    #[arg(long)]
    pub degree: Option<u64>,
    #[arg(long, default_value_t = 12)]
    pub max_degree: u64,
    /// Also recompute each cell by row reduction and mark it `oracle`.
    #[arg(long)]
    pub with_oracle: bool,
    #[command(flatten)]
    pub group: GroupArgs,
}

#[derive(Debug, Args)]
pub struct TwistedArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long)]
    pub level: Option<u64>,
    #[arg(long)]
    pub genus: Option<u64>,
    #[arg(long)]
    pub max_k: u64,
    /// Use the full mapping class group instead of the level subgroup.
    #[arg(long, conflicts_with = "level")]
    pub full_mcg: bool,
    /// The surface has no boundary.
    #[arg(long)]
    pub closed: bool,
    /// Print rows outside the stable range (marked `extrapolated`).
    #[arg(long)]
    pub allow_extrapolated: bool,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub level: u64,
    #[arg(long)]
    pub genus: u64,
}

#[derive(Debug, Args)]
pub struct CharacterArgs {
    #[arg(long, default_value = "level-prime")]
    pub variant: Variant,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub degree: u64,
}

#[derive(Debug, Args)]
pub struct CommutantArgs {
    /// trivial, minus-identity, plane-swap, rotation2, rotation3, rotation4 or rotation6.
    #[arg(long, conflicts_with = "action")]
    pub fixture: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// JSON file {"h": h, "generators": [[["num/den", ...], ...], ...]}.
    #[arg(long)]
    pub action: Option<String>,
    #[arg(long)]
    pub with_basis: bool,
    /// Conjugate by a seeded random element of the commutant group and report the adjoint matrix invariants.
    #[arg(long)]
    pub check_adjoint: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 3)]
    pub r_max: usize,
    /// Comma-separated group literals.
    #[arg(long, default_value = "1,Z2,Z3")]
    pub groups: String,
    #[arg(long, default_value_t = 8)]
    pub max_degree: u64,
}

#[derive(Debug, Args)]
pub struct StrataArgs {
    #[arg(long)]
    pub r: usize,
    #[command(flatten)]
    pub group: GroupArgs,
}

#[derive(Debug, Args)]
pub struct JArgs {
    /// Tags such as 1,0,1 (1 = Prym factor).
    #[arg(long, default_value = "")]
    pub j: String,
    #[arg(long)]
    pub level: Option<u64>,
    #[arg(long)]
    pub genus: Option<u64>,
    #[arg(long)]
    pub max_k: u64,
    #[arg(long)]
    pub allow_extrapolated: bool,
}

/// Runs the CLI, writing results to `out` and diagnostics to stderr.
pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let stderr = std::io::stderr();
    let mut err = stderr.lock();
    run_with(args, out, &mut err)
}

/// [`run`] with an explicit diagnostics stream.
pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let guessed = args.iter().skip(1).find(|a| COMMANDS.contains(&a.as_str())).cloned();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => return report(err, guessed.as_deref().unwrap_or("none"), &e),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{}", e.render());
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let command = args.iter().skip(1).find(|a| COMMANDS.contains(&a.as_str())).cloned();
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return report(err, command.as_deref().unwrap_or("none"), &Error::invalid(first));
        }
    };
    let name = cli.command.name();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = with_threads(cli.threads, || execute(&cli, exec));
    match result {
        Ok(output) => {
            for note in &output.notes {
                let _ = writeln!(err, "note: {note}");
            }
            if out.write_all(output.body.as_bytes()).is_err() {
                return report(err, name, &Error::Io("cannot write output".into()));
            }
            let _ = out.flush();
            output.status
        }
        Err(e) => report(err, name, &e),
    }
}

fn report(err: &mut dyn Write, command: &str, e: &Error) -> i32 {
    let message = e.to_string().replace(['\n', '\r'], " ");
    let _ = writeln!(err, "error: kind={} command={} message={}", e.kind(), command, message);
    e.exit_code()
}

/// Reads `--config` and appends its entries as flags that are not already given.
fn merge_config(args: &[String]) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args.to_vec());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let mut merged = args.to_vec();
    let has_command = args.iter().skip(1).any(|a| COMMANDS.contains(&a.as_str()));
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("config line {} is not key=value", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "command" {
            if !has_command {
                merged.insert(1.min(merged.len()), value.to_string());
            }
            continue;
        }
        if key == "config" {
            return Err(Error::parse(line, "config files cannot include other config files"));
        }
        let flag = format!("--{key}");
        let given = args.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        if BOOL_FLAGS.contains(&key) {
            match value {
                "true" => merged.push(flag),
                "false" => {}
                _ => return Err(Error::parse(value, format!("`{key}` expects true or false"))),
            }
        } else {
            merged.push(format!("{flag}={value}"));
        }
    }
    Ok(merged)
}

struct Output {
    body: String,
    notes: Vec<String>,
    status: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output {
            body,
            notes: Vec::new(),
            status: 0,
        }
    }
}

fn execute(cli: &Cli, exec: Execution) -> Result<Output> {
    match &cli.command {
        Command::Dims(a) => cmd_dims(a, cli.format, exec),
        Command::Twisted(a) => cmd_twisted(a, cli.format, exec),
        Command::Gap(a) => cmd_gap(a, cli.format),
        Command::Character(a) => cmd_character(a, cli.format, exec),
        Command::Commutant(a) => cmd_commutant(a, cli.format, cli.seed),
        Command::OracleCheck(a) => cmd_oracle_check(a, cli.format, exec),
        Command::Strata(a) => cmd_strata(a, cli.format),
        Command::JTwisted(a) => cmd_j(a, cli.format, exec),
    }
}

fn render_table(t: &DimensionTable, format: Format) -> String {
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => json_line(&t.to_json()),
        Format::Pretty => t.to_pretty(),
    }
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn cmd_dims(a: &DimsArgs, format: Format, exec: Execution) -> Result<Output> {
    let concrete = a.group.concrete_group()?;
    let m = a.group.m()?;
    let spec = AlgebraSpec::new(
        a.variant,
        a.r,
        match &concrete {
            Some(g) => GroupSpec::Concrete(g.clone()),
            None => GroupSpec::Symbolic(SymbolicOrder {
                level: a.group.level,
                genus: a.group.genus,
            }),
        },
    );
    let degrees: Vec<u64> = match a.degree {
        Some(n) => vec![n],
        None => (0..=a.max_degree).collect(),
    };
    if let Some(&n) = degrees.last() {
        if n > crate::series::MAX_TABLE_DEGREE {
            return Err(Error::cap("degree", n, crate::series::MAX_TABLE_DEGREE));
        }
    }
    let oracle_group = if a.with_oracle {
        if a.variant.is_level() {
            Some(concrete.clone().ok_or_else(|| Error::invalid("--with-oracle needs --group"))?)
        } else {
            Some(FiniteAbelianGroup::trivial())
        }
    } else {
        None
    };
    let rows = map_collect(exec, degrees, |n| -> Result<TableRow> {
        let dim = graded_dimension(&spec, n);
        let value = if a.variant.is_level() {
            m.as_ref().map(|m| dim.eval(m))
        } else {
            Some(dim.eval(&BigInt::from(1)))
        };
        let mut provenance = Provenance::Formula;
        if let Some(g) = &oracle_group {
            let o = oracle_graded_dimension(&spec, n, g)?;
            if Some(&o) != value.as_ref() {
                return Err(Error::OracleMismatch(format!("{} r={} degree {n}: formula {:?} oracle {o}", a.variant, a.r, value)));
            }
            provenance = Provenance::Oracle;
        }
        Ok(TableRow {
            k: n,
            cohomological_degree: n as i64,
            dim,
            dim_at_m: value,
            in_stable_range: true,
            provenance,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let table = DimensionTable {
        meta: TableMeta {
            table: "algebra",
            r: a.r,
            p: 0,
            level: a.group.level,
            genus: a.group.genus,
            variant: Some(a.variant),
        },
        rows,
    };
    Ok(Output::ok(render_table(&table, format)))
}

fn filter_rows(t: DimensionTable, allow: bool, flag: &str) -> (DimensionTable, Vec<String>) {
    if allow {
        return (t, Vec::new());
    }
    let dropped: Vec<String> = t.rows.iter().filter(|r| !r.in_stable_range).map(|r| r.k.to_string()).collect();
    let mut notes = Vec::new();
    if !dropped.is_empty() {
        notes.push(format!(
            "omitted {} row(s) outside the stable range (k={}); pass {flag} to include them",
            dropped.len(),
            dropped.join(",")
        ));
    }
    (t.in_range_only(), notes)
}

fn cmd_twisted(a: &TwistedArgs, format: Format, exec: Execution) -> Result<Output> {
    check_level(a.level)?;
    let mode = if a.full_mcg {
        LevelMode::FullMcg { genus: a.genus }
    } else {
        LevelMode::Level {
            level: a.level,
            genus: a.genus,
        }
    };
    let mut req = TwistedRequest::new(a.r, a.p, mode, a.max_k);
    req.closed = a.closed;
    let table = twisted_cohomology_dims(&req, exec)?;
    let (table, notes) = filter_rows(table, a.allow_extrapolated, "--allow-extrapolated");
    Ok(Output {
        body: render_table(&table, format),
        notes,
        status: 0,
    })
}

fn cmd_j(a: &JArgs, format: Format, exec: Execution) -> Result<Output> {
    check_level(a.level)?;
    let j: JVector = a.j.parse()?;
    let table = j_twisted_dims(&j, a.level, a.genus, a.max_k, exec)?;
    let (table, notes) = filter_rows(table, a.allow_extrapolated, "--allow-extrapolated");
    Ok(Output {
        body: render_table(&table, format),
        notes,
        status: 0,
    })
}

fn cmd_gap(a: &GapArgs, format: Format) -> Result<Output> {
    check_level(Some(a.level))?;
    let g = putman_gap(a.r, a.p, a.k, a.level, a.genus)?;
    let message = if g.differ {
        format!("dims differ; not an isomorphism for r = {}", g.r)
    } else {
        format!("dims equal; consistent with isomorphism for r = {}", g.r)
    };
    let body = match format {
        Format::Csv => csv(
            "r,k,level,genus,lhs,rhs,differ",
            &[vec![
                g.r.to_string(),
                g.k.to_string(),
                g.level.to_string(),
                g.genus.to_string(),
                g.lhs.to_string(),
                g.rhs.to_string(),
                g.differ.to_string(),
            ]],
        ),
        Format::Json => {
            let mut v = serde_json::to_value(&g).expect("report serializes");
            v["message"] = Value::String(message);
            json_line(&v)
        }
        Format::Pretty => format!(
            "r = {}, k = {}, level = {}, genus = {}\nfull mapping class group: {}\nlevel subgroup:           {}\n{message}\n",
            g.r, g.k, g.level, g.genus, g.lhs, g.rhs
        ),
    };
    Ok(Output::ok(body))
}

fn cmd_character(a: &CharacterArgs, format: Format, exec: Execution) -> Result<Output> {
    let group: FiniteAbelianGroup = a.group.parse()?;
    let spec = AlgebraSpec::concrete(a.variant, a.r, group.clone());
    let chi = permutation_character(&spec, a.degree, exec)?;
    let body = match format {
        Format::Json => json_line(&character_report(&chi, a.degree, &group)?),
        Format::Csv | Format::Pretty => {
            let decomposition = decompose(&chi)?;
            let label = |p: &[usize]| p.iter().map(usize::to_string).collect::<Vec<_>>().join("+");
            let mut rows: Vec<Vec<String>> = cycle_types(chi.r())
                .iter()
                .zip(chi.values())
                .map(|(c, v)| vec!["trace".into(), label(c.parts()), v.to_string()])
                .collect();
            rows.extend(
                decomposition
                    .iter()
                    .map(|(l, m)| vec!["multiplicity".into(), label(l), m.to_string()]),
            );
            if format == Format::Csv {
                csv("kind,label,value", &rows)
            } else {
                let mut cells = vec![["kind".to_string(), "class/partition".into(), "value".into()]];
                cells.extend(rows.into_iter().map(|r| [r[0].clone(), r[1].clone(), r[2].clone()]));
                render_columns(&cells)
            }
        }
    };
    Ok(Output::ok(body))
}

fn cmd_commutant(a: &CommutantArgs, format: Format, seed: u64) -> Result<Output> {
    let action = match (&a.fixture, &a.action) {
        (Some(name), None) => rigidity::fixtures::by_name(name, a.h)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::parse(path.as_str(), e.to_string()))?;
            AbelianSymplecticAction::from_json(&v)?
        }
        _ => return Err(Error::invalid("give exactly one of --fixture or --action")),
    };
    let report = commutant_sp(&action);
    let h = action.space().h() as u64;
    let mut v = report.to_json(a.with_basis);
    v["h"] = json!(h);
    v["sp_dimension"] = json!(sp_dimension(h));
    if a.check_adjoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_commutant_group_element(&action, &report, &mut rng);
        let ad = adjoint_matrix(&action, &report, &f)?;
        v["adjoint"] = json!({
            "seed": seed,
            "trace": format_rational(&ad.trace()),
            "determinant": format_rational(&ad.determinant()),
        });
    }
    let body = match format {
        Format::Json => json_line(&v),
        Format::Csv | Format::Pretty => {
            let mut header = vec!["h", "dimension", "sp_dimension"];
            let mut row = vec![h.to_string(), report.dimension.to_string(), sp_dimension(h).to_string()];
            if let Some(ad) = v.get("adjoint") {
                header.extend(["adjoint_trace", "adjoint_determinant"]);
                row.push(ad["trace"].as_str().unwrap_or_default().to_string());
                row.push(ad["determinant"].as_str().unwrap_or_default().to_string());
            }
            if format == Format::Csv {
                csv(&header.join(","), &[row])
            } else {
                header
                    .iter()
                    .zip(&row)
                    .map(|(k, v)| format!("{k}: {v}\n"))
                    .collect()
            }
        }
    };
    Ok(Output::ok(body))
}

struct OracleCell {
    variant: Variant,
    r: usize,
    group: FiniteAbelianGroup,
    degree: u64,
}

fn cmd_oracle_check(a: &OracleArgs, format: Format, exec: Execution) -> Result<Output> {
    if a.max_degree > ORACLE_MAX_DEGREE {
        return Err(Error::cap("oracle degree", a.max_degree, ORACLE_MAX_DEGREE));
    }
    let groups = a
        .groups
        .split(',')
        .map(|s| s.trim().parse::<FiniteAbelianGroup>())
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::new();
    for variant in Variant::ALL {
        for r in 0..=a.r_max {
            for g in &groups {
                if !variant.is_level() && !g.is_trivial() {
                    continue;
                }
                for degree in 0..=a.max_degree {
                    cells.push(OracleCell {
                        variant,
                        r,
                        group: g.clone(),
                        degree,
                    });
                }
            }
        }
    }
    let results = map_collect(exec, cells, |c| -> Result<(OracleCell, BigInt, BigInt)> {
        let spec = AlgebraSpec::concrete(c.variant, c.r, c.group.clone());
        let formula = graded_dimension(&spec, c.degree).eval(&spec.effective_group()?.order());
        let oracle = oracle_graded_dimension(&spec, c.degree, &c.group)?;
        Ok((c, formula, oracle))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mismatches = results.iter().filter(|(_, f, o)| f != o).count();
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|(c, f, o)| {
            vec![
                c.variant.to_string(),
                c.r.to_string(),
                c.group.to_string(),
                c.degree.to_string(),
                f.to_string(),
                o.to_string(),
                (f == o).to_string(),
            ]
        })
        .collect();
    let header = ["variant", "r", "group", "degree", "formula", "oracle", "match"];
    let body = match format {
        Format::Csv => csv(&header.join(","), &rows),
        Format::Json => json_line(&json!({
            "cells": rows.iter().map(|r| {
                header.iter().zip(r).map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect::<serde_json::Map<_, _>>()
            }).collect::<Vec<_>>(),
            "mismatches": mismatches,
        })),
        Format::Pretty => {
            let mut cells = vec![header.map(String::from)];
            cells.extend(rows.iter().map(|r| std::array::from_fn(|i| r[i].clone())));
            let mut s = render_columns(&cells);
            s.push_str(&format!("{} cells, {mismatches} mismatches\n", rows.len()));
            s
        }
    };
    let mut out = Output::ok(body);
    if mismatches > 0 {
        let e = Error::OracleMismatch(format!("{mismatches} of {} cells disagree", rows.len()));
        out.notes.push(e.to_string());
        out.status = e.exit_code();
    }
    Ok(out)
}

fn cmd_strata(a: &StrataArgs, format: Format) -> Result<Output> {
    let m = a.group.m()?;
    let counts = (0..=a.r).map(|c| stratum_census(a.r, c)).collect::<Result<Vec<Poly>>>()?;
    let value = |p: &Poly| m.as_ref().map_or("symbolic".to_string(), |m| p.eval(m).to_string());
    let body = match format {
        Format::Csv => csv(
            "codim,count_polynomial_in_m,count_at_concrete_m",
            &counts
                .iter()
                .enumerate()
                .map(|(c, p)| vec![c.to_string(), p.to_string(), value(p)])
                .collect::<Vec<_>>(),
        ),
        Format::Json => json_line(&json!({
            "r": a.r,
            "strata": counts.iter().enumerate().map(|(c, p)| json!({
                "codim": c,
                "count": p.to_string(),
                "count_at_m": m.as_ref().map(|m| p.eval(m).to_string()),
            })).collect::<Vec<_>>(),
        })),
        Format::Pretty => {
            let mut cells = vec![["codim".to_string(), "count(m)".into(), "count".into()]];
            cells.extend(counts.iter().enumerate().map(|(c, p)| [c.to_string(), p.to_string(), value(p)]));
            render_columns(&cells)
        }
    };
    Ok(Output::ok(body))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut full = vec!["prymcoh".to_string()];
        full.extend(args.iter().map(|s| s.to_string()));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(&full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn dims_example() {
        let (code, out, _) = call(&["dims", "--variant", "level-prime", "--r", "2", "--group", "Z3", "--degree", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1), Some("2,2,m,3,true,formula"));
    }

    #[test]
    fn twisted_example_keeps_in_range_row() {
        let (code, out, err) = call(&["twisted", "--r", "2", "--p", "0", "--level", "2", "--genus", "24", "--max-k", "4"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(rows, vec!["2,0,m,281474976710656,true,formula"]);
        assert!(err.contains("--allow-extrapolated"));
    }

    #[test]
    fn gap_r1() {
        let (code, out, _) = call(&["gap", "--r", "1", "--k", "4", "--level", "5", "--genus", "100", "--format", "pretty"]);
        assert_eq!(code, 0);
        assert!(out.contains("dims equal; consistent with isomorphism for r = 1"));
    }

    #[test]
    fn error_line_and_codes() {
        let (code, _, err) = call(&["dims", "--variant", "nope", "--r", "2"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: kind=invalid-parameter command=dims message="));
        let (code, _, err) = call(&["oracle-check", "--r-max", "4"]);
        assert_eq!(code, 3);
        assert!(err.contains("kind=cap-exceeded"));
        let (code, _, err) = call(&["gap", "--r", "2", "--k", "3", "--level", "2", "--genus", "100"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = std::env::temp_dir().join(format!("prymcoh-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "command=dims\nvariant=level-prime\nr=2\ngroup=Z2\ndegree=2\n").unwrap();
        let p = path.to_str().unwrap();
        let (code, out, _) = call(&["--config", p]);
        assert_eq!(code, 0);
        assert!(out.contains(",2,true,formula"));
        let (code, out, _) = call(&["--config", p, "dims", "--group", "Z3"]);
        assert_eq!(code, 0);
        assert!(out.contains(",3,true,formula"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
