//! Subcommands of the `cosetfactor` binary. Each `cmd_*` writes its report to
//! the given writer and returns an error carrying the exit code.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use cosetfactor::atlas::{AtlasError, Catalog, GroupSpec};
use cosetfactor::dcsearch::{SearchLimits, DEFAULT_CANDIDATE_CAP};
use cosetfactor::exactcover::{
    count_solutions, solve_first, ExactCoverInstance, SolveOutcome, DEFAULT_NODE_BUDGET,
};
use cosetfactor::factorlib::{
    analyze, divisors, Certificate, CertificateError, CoverStatus, FactorError, FactorOptions,
    Factorization, Factorizer, InvalidReason, DEFAULT_FINDER_ATTEMPTS,
};
use cosetfactor::permgroup::GroupTable;

/// Schema tag of every machine-readable output line.
pub const REPORT_SCHEMA: &str = "cosetfactor.report/1";

/// Groups below this order make up the default table.
pub const TABLE_ORDER_LIMIT: usize = 10_000;

/// M12 divisors attempted by `table --extended`.
pub const EXTENDED_M12: [usize; 2] = [135, 297];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 usage, 2 mathematical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Failure(_) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cosetfactor",
    version,
    about = "Factor finite groups into two subsets"
)]
pub struct Cli {
    /// Catalog file replacing the built-in one.
    #[arg(long, global = true, env = "COSETFACTOR_CATALOG")]
    pub catalog: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a catalog group with |A| = a.
    Factor(FactorArgs),
    /// Classify the divisors a <= sqrt(n) of a group.
    Analyze(GroupArg),
    /// Factor every divisor that needs the search, for all small catalog groups.
    Table(TableArgs),
    /// Re-check a certificate against the catalog.
    Verify(VerifyArgs),
    /// List catalog groups.
    Groups,
    /// Standalone exact-cover solver.
    #[command(subcommand)]
    Xc(XcCommand),
}

#[derive(Debug, Clone, Args)]
pub struct GroupArg {
    #[arg(long)]
    pub group: String,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// A0 candidates per (h, k) pair.
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
    pub max_candidates: u64,
    /// Exact-cover nodes per candidate.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
    /// Seconds per (h, k) pair.
    #[arg(long, default_value_t = 60)]
    pub time_budget: u64,
    #[arg(long, default_value_t = DEFAULT_FINDER_ATTEMPTS)]
    pub finder_attempts: usize,
}

impl Default for SearchArgs {
    fn default() -> Self {
        SearchArgs {
            seed: 0,
            workers: 1,
            max_candidates: DEFAULT_CANDIDATE_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget: 60,
            finder_attempts: DEFAULT_FINDER_ATTEMPTS,
        }
    }
}

impl SearchArgs {
    pub fn options(&self, pair: Option<(usize, usize)>) -> FactorOptions {
        FactorOptions {
            seed: self.seed,
            workers: self.workers,
            limits: SearchLimits {
                max_candidates: self.max_candidates,
                node_budget: self.node_budget,
                time_budget: Duration::from_secs(self.time_budget),
            },
            pair,
            finder_attempts: self.finder_attempts,
            ..FactorOptions::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FactorArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub a: usize,
    /// Order of H for the double-coset search (requires --k).
    #[arg(long, requires = "k")]
    pub h: Option<usize>,
    #[arg(long, requires = "h")]
    pub k: Option<usize>,
    /// Certificate path; defaults to <group>_<a>.cert.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TableArgs {
    /// Also attempt M12 with a = 135 and a = 297.
    #[arg(long)]
    pub extended: bool,
    /// Factor every divisor of every group, not only the search cases.
    #[arg(long)]
    pub full_sweep: bool,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub certificate: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum XcCommand {
    /// Solve an instance file: first line the column count, then `id col col …`.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Count solutions (up to this cap) instead of printing one.
        #[arg(long)]
        count: Option<u64>,
    },
}

pub fn load_catalog(path: Option<&Path>) -> Result<Catalog, CliError> {
    match path {
        Some(p) => Catalog::load(p).map_err(|e| CliError::Usage(e.to_string())),
        None => Ok(Catalog::builtin()),
    }
}

fn lookup<'c>(catalog: &'c Catalog, name: &str) -> Result<&'c GroupSpec, CliError> {
    catalog.get(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown group {name:?}; catalog has: {}",
            catalog.names().join(", ")
        ))
    })
}

fn enumerate(spec: &GroupSpec) -> Result<GroupTable, CliError> {
    spec.table()
        .map_err(|e: AtlasError| CliError::Usage(e.to_string()))
}

fn json_line(out: &mut dyn Write, kind: &str, body: serde_json::Value) -> Result<(), CliError> {
    let mut record = json!({ "schema": REPORT_SCHEMA, "kind": kind });
    if let (Some(r), serde_json::Value::Object(b)) = (record.as_object_mut(), body) {
        r.extend(b);
    }
    writeln!(out, "{record}")?;
    Ok(())
}

/// Outcome of a successful `factor` run.
#[derive(Debug, Clone)]
pub struct FactorSummary {
    pub certificate: Certificate,
    pub path: PathBuf,
    pub elapsed: Duration,
}

pub fn cmd_factor(
    catalog: &Catalog,
    args: &FactorArgs,
    format: Format,
    out: &mut dyn Write,
) -> Result<FactorSummary, CliError> {
    let spec = lookup(catalog, &args.group)?;
    let n = spec.claimed_order;
    if args.a == 0 || n % args.a != 0 {
        return Err(CliError::Usage(format!(
            "{} does not divide |{}| = {n}",
            args.a, spec.name
        )));
    }
    let table = enumerate(spec)?;
    let pair = args.h.zip(args.k);
    let start = Instant::now();
    let f = Factorizer::new(&table, spec, args.search.options(pair))
        .and_then(|mut fz| fz.factor(args.a))
        .map_err(|e| factor_failure(e, format))?;
    let elapsed = start.elapsed();
    let certificate = Certificate::new(spec, &table, &f, args.search.seed);
    let path = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}_{}.cert.json", spec.name, args.a)));
    std::fs::write(&path, certificate.to_json())
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    match format {
        Format::Text => {
            writeln!(out, "group      {} (n = {n})", spec.display_name())?;
            writeln!(out, "sizes      |A| = {}, |B| = {}", f.a.len(), f.b.len())?;
            writeln!(out, "strategy   {}", describe(&f))?;
            writeln!(out, "verified   yes")?;
            writeln!(out, "time       {} ms", elapsed.as_millis())?;
            writeln!(out, "certificate {}", path.display())?;
        }
        Format::Json => json_line(
            out,
            "factor",
            json!({
                "group": spec.name,
                "n": n,
                "a": f.a.len(),
                "b": f.b.len(),
                "strategy": f.provenance.label(),
                "search": f.provenance.search_record(),
                "verified": true,
                "elapsed_ms": elapsed.as_millis() as u64,
                "certificate": path,
            }),
        )?,
    }
    Ok(FactorSummary {
        certificate,
        path,
        elapsed,
    })
}

fn factor_failure(e: FactorError, format: Format) -> CliError {
    match e {
        FactorError::NotADivisor { .. } => CliError::Usage(e.to_string()),
        FactorError::Exhausted { a, ref attempts } => {
            let lines: Vec<String> = match format {
                Format::Text => attempts
                    .iter()
                    .map(|t| format!("  [{} depth {} |D| = {}] {}", t.strategy, t.depth, t.domain_order, t.detail))
                    .collect(),
                Format::Json => vec![json!({ "schema": REPORT_SCHEMA, "kind": "exhausted", "a": a, "attempts": attempts }).to_string()],
            };
            CliError::Failure(format!("{e}\n{}", lines.join("\n")))
        }
        other => CliError::Failure(other.to_string()),
    }
}

fn describe(f: &Factorization) -> String {
    match f.provenance.search_record() {
        Some(r) => format!(
            "{} (searched h = {}, k = {}, a0 = {}, b0 = {}, {} candidates, {} nodes)",
            f.provenance.label(),
            r.h,
            r.k,
            r.a0,
            r.b0,
            r.candidates,
            r.nodes
        ),
        None => f.provenance.label().to_string(),
    }
}

pub fn cmd_analyze(
    catalog: &Catalog,
    group: &str,
    format: Format,
    out: &mut dyn Write,
) -> Result<Vec<usize>, CliError> {
    let spec = lookup(catalog, group)?;
    let report = analyze(spec);
    match format {
        Format::Text => {
            writeln!(out, "{} (n = {})", spec.display_name(), report.n)?;
            for e in &report.entries {
                let status = match e.status {
                    CoverStatus::SubgroupCovered => {
                        format!("subgroup-covered (order {})", e.witness.unwrap_or(0))
                    }
                    CoverStatus::NeedsSearch => "needs-search".to_string(),
                };
                writeln!(out, "  a = {:>4}  {status}", e.a)?;
            }
            let needs = report.needs_search();
            writeln!(out, "needs-search: {needs:?}")?;
        }
        Format::Json => {
            for e in &report.entries {
                json_line(
                    out,
                    "divisor",
                    json!({ "group": spec.name, "n": report.n, "a": e.a, "status": e.status, "witness": e.witness }),
                )?;
            }
        }
    }
    Ok(report.needs_search())
}

/// One row of the `table` report.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub group: String,
    pub n: usize,
    pub a: usize,
    pub h: Option<usize>,
    pub k: Option<usize>,
    pub strategy: String,
    pub verified: bool,
    pub elapsed_ms: u64,
    pub note: Option<String>,
}

/// Per-group outcome of the chain check in `table`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainRow {
    pub group: String,
    pub indices: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub chains: Vec<ChainRow>,
}

impl TableReport {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified)
    }
}

fn has_prime_index(spec: &GroupSpec) -> bool {
    let n = spec.claimed_order;
    spec.known_subgroup_orders
        .iter()
        .any(|&m| m < n && cosetfactor::atlas::field::is_prime((n / m) as u32))
}

/// Factors one `(group, a)` and re-verifies the result independently.
pub fn table_row(
    spec: &GroupSpec,
    table: &GroupTable,
    fz: &mut Factorizer<'_>,
    a: usize,
) -> TableRow {
    let start = Instant::now();
    let result = fz.factor(a);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let (h, k, strategy, verified, note) = match result {
        Ok(f) => {
            let cert = Certificate::new(spec, table, &f, fz.options().seed);
            let verified = cert.check_against(spec, table).is_ok();
            let pair = f.provenance.search_pair();
            (
                pair.map(|p| p.0),
                pair.map(|p| p.1),
                f.provenance.label().to_string(),
                verified,
                None,
            )
        }
        Err(e) => (None, None, "none".to_string(), false, Some(e.to_string())),
    };
    TableRow {
        group: spec.name.clone(),
        n: spec.claimed_order,
        a,
        h,
        k,
        strategy,
        verified,
        elapsed_ms,
        note,
    }
}

pub fn cmd_table(
    catalog: &Catalog,
    args: &TableArgs,
    format: Format,
    out: &mut dyn Write,
) -> Result<TableReport, CliError> {
    let mut report = TableReport::default();
    if format == Format::Text {
        writeln!(
            out,
            "{:<8} {:>6} {:>5} {:>4} {:>4}  {:<20} {:<8} {:>8}",
            "group", "n", "a", "h", "k", "strategy", "verified", "ms"
        )?;
    }
    let mut groups: Vec<&GroupSpec> = catalog
        .groups()
        .iter()
        .filter(|s| s.claimed_order < TABLE_ORDER_LIMIT)
        .collect();
    if args.extended {
        groups.extend(catalog.get("M12"));
    }
    for spec in groups {
        let table = enumerate(spec)?;
        let mut fz = Factorizer::new(&table, spec, args.search.options(None))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let n = spec.claimed_order;
        let targets: Vec<usize> = if spec.claimed_order >= TABLE_ORDER_LIMIT {
            EXTENDED_M12
                .iter()
                .copied()
                .filter(|a| n % a == 0)
                .collect()
        } else if args.full_sweep {
            divisors(n)
        } else if has_prime_index(spec) {
            report.chains.push(ChainRow {
                group: spec.name.clone(),
                indices: fz.prime_chain().map(|c| c.indices()),
            });
            divisors(n).into_iter().take_while(|a| a * a <= n).collect()
        } else {
            analyze(spec).needs_search()
        };
        for a in targets {
            let row = table_row(spec, &table, &mut fz, a);
            match format {
                Format::Text => writeln!(
                    out,
                    "{:<8} {:>6} {:>5} {:>4} {:>4}  {:<20} {:<8} {:>8}{}",
                    row.group,
                    row.n,
                    row.a,
                    row.h.map_or("-".into(), |h| h.to_string()),
                    row.k.map_or("-".into(), |k| k.to_string()),
                    row.strategy,
                    if row.verified { "yes" } else { "NO" },
                    row.elapsed_ms,
                    row.note
                        .as_ref()
                        .map_or(String::new(), |n| format!("  {n}"))
                )?,
                Format::Json => json_line(out, "table-row", serde_json::to_value(&row).unwrap())?,
            }
            report.rows.push(row);
        }
    }
    for c in &report.chains {
        match format {
            Format::Text => writeln!(
                out,
                "chain {:<8} {}",
                c.group,
                c.indices
                    .as_ref()
                    .map_or("none found".to_string(), |ix| format!("indices {ix:?}"))
            )?,
            Format::Json => json_line(out, "chain", serde_json::to_value(c).unwrap())?,
        }
    }
    let verified = report.rows.iter().filter(|r| r.verified).count();
    match format {
        Format::Text => writeln!(out, "{verified}/{} verified", report.rows.len())?,
        Format::Json => json_line(
            out,
            "table-summary",
            json!({ "rows": report.rows.len(), "verified": verified }),
        )?,
    }
    if report.all_verified() {
        Ok(report)
    } else {
        Err(CliError::Failure(format!(
            "{} of {} factorizations failed",
            report.rows.len() - verified,
            report.rows.len()
        )))
    }
}

pub fn cmd_verify(
    catalog: &Catalog,
    path: &Path,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cert = Certificate::from_json(&text).map_err(|e| match e {
        CertificateError::Schema(_) => CliError::Usage(e.to_string()),
        other => CliError::Failure(other.to_string()),
    })?;
    let result = cert.check(catalog);
    let message = match &result {
        Ok(_) => "valid".to_string(),
        Err(CertificateError::Invalid(InvalidReason::Collision {
            first,
            second,
            product,
        })) => {
            // element indices mean nothing outside this run; report permutations
            let table = catalog.get(&cert.group).map(|s| s.table());
            match table {
                Some(Ok(t)) => format!(
                    "collision: {} * {} = {} * {} = {}",
                    t.perm(first.0),
                    t.perm(first.1),
                    t.perm(second.0),
                    t.perm(second.1),
                    t.perm(*product)
                ),
                _ => result.as_ref().unwrap_err().to_string(),
            }
        }
        Err(e) => e.to_string(),
    };
    match format {
        Format::Text => writeln!(out, "{}: {message}", path.display())?,
        Format::Json => json_line(
            out,
            "verify",
            json!({ "certificate": path, "group": cert.group, "valid": result.is_ok(), "message": message }),
        )?,
    }
    match result {
        Ok(_) => Ok(()),
        Err(CertificateError::UnknownGroup { .. }) => Err(CliError::Usage(message)),
        Err(_) => Err(CliError::Failure(message)),
    }
}

pub fn cmd_groups(catalog: &Catalog, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    for s in catalog.groups() {
        match format {
            Format::Text => writeln!(
                out,
                "{:<8} {:<8} n = {:>6}  degree {:>3}",
                s.name,
                s.display_name(),
                s.claimed_order,
                s.degree
            )?,
            Format::Json => json_line(
                out,
                "group",
                json!({ "name": s.name, "display": s.display_name(), "n": s.claimed_order, "degree": s.degree }),
            )?,
        }
    }
    Ok(())
}

pub fn cmd_xc_solve(
    file: &Path,
    budget: u64,
    count: Option<u64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let inst = ExactCoverInstance::parse_text(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(cap) = count {
        let c = count_solutions(&inst, cap);
        match format {
            Format::Text => writeln!(out, "solutions {c}")?,
            Format::Json => json_line(out, "xc-count", json!({ "solutions": c, "cap": cap }))?,
        }
        return Ok(());
    }
    let report = solve_first(&inst, budget);
    let (status, rows) = match &report.outcome {
        SolveOutcome::Found(s) => ("found", Some(s.row_ids.clone())),
        SolveOutcome::None => ("none", None),
        SolveOutcome::BudgetExhausted => ("budget-exhausted", None),
    };
    match format {
        Format::Text => match &rows {
            Some(r) => writeln!(
                out,
                "found {} ({} nodes)",
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                report.nodes
            )?,
            None => writeln!(out, "{status} ({} nodes)", report.nodes)?,
        },
        Format::Json => json_line(
            out,
            "xc-solve",
            json!({ "status": status, "rows": rows, "nodes": report.nodes }),
        )?,
    }
    match report.outcome {
        SolveOutcome::Found(_) => Ok(()),
        _ => Err(CliError::Failure(format!("no exact cover: {status}"))),
    }
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let catalog = || load_catalog(cli.catalog.as_deref());
    match &cli.command {
        Command::Factor(args) => cmd_factor(&catalog()?, args, cli.format, out).map(|_| ()),
        Command::Analyze(g) => cmd_analyze(&catalog()?, &g.group, cli.format, out).map(|_| ()),
        Command::Table(args) => cmd_table(&catalog()?, args, cli.format, out).map(|_| ()),
        Command::Verify(v) => cmd_verify(&catalog()?, &v.certificate, cli.format, out),
        Command::Groups => cmd_groups(&catalog()?, cli.format, out),
        Command::Xc(XcCommand::Solve {
            file,
            budget,
            count,
        }) => cmd_xc_solve(file, *budget, *count, cli.format, out),
    }
}
