//! Command-line surface: every table the engine can produce, as CSV, TSV,
//! Markdown, or DOT.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 when a step budget ran
//! out and only partial output was written.

mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use collatz_spectra::families::{
    cumulative_sl, distribution_dl, enumerate_families, pp_distribution_table, rising_fraction,
};
use collatz_spectra::maps::MapId;
use collatz_spectra::numtheory::{BigInt, BigRational};
use collatz_spectra::render;
use collatz_spectra::stopping::{build_triangle, empirical_f, Flavor};
use collatz_spectra::trees::{build_tree, chain_from, export_dot, ChainStatus};
use collatz_spectra::verify::{slice_fraction, Domain};

use table::Table;

#[derive(Parser)]
#[command(
    name = "collatz-spectra",
    version,
    about = "Exact trajectory-density tables for the 3x+1 and 5x+1 problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapName {
    C3,
    T3,
    U3,
    U3g,
    Fraku3,
    C5,
    T5,
    U5,
    U5g,
    Fraku5,
}

impl MapName {
    fn id(self) -> MapId {
        match self {
            MapName::C3 => MapId::C3,
            MapName::T3 => MapId::T3,
            MapName::U3 => MapId::U3Full,
            MapName::U3g => MapId::U3Grouped,
            MapName::Fraku3 => MapId::FrakU3,
            MapName::C5 => MapId::C5,
            MapName::T5 => MapId::T5,
            MapName::U5 => MapId::U5Full,
            MapName::U5g => MapId::U5Grouped,
            MapName::Fraku5 => MapId::FrakU5,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Tsv,
    Markdown,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorName {
    Strict,
    Terras,
    /// Both flavors side by side, with a column marking where they differ.
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainName {
    All,
    Odd,
}

/// Inclusive range written `lo..hi`, or a single value.
#[derive(Clone, Copy, Debug)]
struct LengthRange {
    lo: u32,
    hi: u32,
}

impl std::str::FromStr for LengthRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a, b),
            None => (s, s),
        };
        let lo: u32 = lo.trim().parse().map_err(|_| format!("invalid range `{s}`"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| format!("invalid range `{s}`"))?;
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(LengthRange { lo, hi })
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Significant digits for decimal rendering.
    #[arg(long, default_value_t = 7)]
    precision: usize,
    /// Emit exact rationals (numerator/denominator) instead of decimals.
    #[arg(long)]
    exact: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Worker threads for the parallel inner loops
    /// (default: COLLATZ_SPECTRA_THREADS, else all cores).
    #[arg(long)]
    threads: Option<usize>,
}

impl OutputArgs {
    fn number(&self, r: &BigRational) -> String {
        if self.exact {
            render::exact(r)
        } else {
            render::to_sig_decimal(r, self.precision)
        }
    }

    fn table_format(&self) -> anyhow::Result<table::TableFormat> {
        Ok(match self.format {
            Format::Csv => table::TableFormat::Csv,
            Format::Tsv => table::TableFormat::Tsv,
            Format::Markdown => table::TableFormat::Markdown,
            Format::Dot => anyhow::bail!("dot output is only available for the tree command"),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sequence families per length: words, classes, directions, densities.
    Families {
        #[arg(long, value_enum)]
        map: MapName,
        /// Length or inclusive length range, e.g. `2..6`.
        #[arg(long = "L", visible_alias = "length")]
        length: LengthRange,
        /// Per-increment summary with D_L and S_L instead of family rows.
        #[arg(long)]
        summary: bool,
        /// Rising families only (start below end), with cumulative density.
        #[arg(long)]
        pp: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The rising-fraction function per level.
    Density {
        #[arg(long, value_enum)]
        map: MapName,
        #[arg(long)]
        lmax: u32,
        #[arg(long, default_value_t = 1)]
        levels: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stopping-time distribution F(k) from the survivor triangle.
    Stopping {
        #[arg(long, value_enum)]
        map: MapName,
        /// Iteration count or inclusive range, e.g. `0..10`.
        #[arg(long)]
        k: LengthRange,
        #[arg(long, value_enum, default_value = "strict")]
        flavor: FlavorName,
        /// Also estimate each F(k) by iterating all n up to this bound.
        #[arg(long)]
        empirical: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The interlocking branch tree, breadth-first by inverse steps.
    Tree {
        #[arg(long, value_enum)]
        map: MapName,
        /// Node budget.
        #[arg(long, default_value_t = 100)]
        nodes: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Successive branches from a starting integer.
    Chain {
        #[arg(long, value_enum)]
        map: MapName,
        #[arg(long)]
        start: i64,
        #[arg(long, default_value_t = 1)]
        levels: u32,
        /// Total step budget across all levels.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Measured rising fractions over an initial slice of the integers.
    Slices {
        #[arg(long, value_enum)]
        map: MapName,
        #[arg(long, default_value_t = 1)]
        levels: u32,
        /// Slice bound (inclusive).
        #[arg(long)]
        until: u64,
        #[arg(long, value_enum, default_value = "all")]
        domain: DomainName,
        /// Per-chain step budget.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Length cap for the analytic comparison column.
        #[arg(long, default_value_t = 30)]
        lmax: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn init_threads(output: &OutputArgs) {
    let n = output.threads.or_else(|| {
        std::env::var("COLLATZ_SPECTRA_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Families { map, length, summary, pp, output } => {
            let map = map.id();
            let table = if summary {
                families_summary(map, length)?
            } else if pp {
                families_pp(map, length)?
            } else {
                families_rows(map, length)?
            };
            emit(&table.render(output.table_format()?), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Density { map, lmax, levels, output } => {
            let report = rising_fraction(map.id(), lmax, levels)?;
            if report.achieved_lmax < report.lmax {
                eprintln!(
                    "note: length cap clamped to {} to stay inside the state-space budget",
                    report.achieved_lmax
                );
            }
            let mut t = Table::new(["level", "fraction", "percent"]);
            for (i, f) in report.fractions.iter().enumerate() {
                t.row([(i + 1).to_string(), output.number(f), render::percent(f)]);
            }
            emit(&t.render(output.table_format()?), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stopping { map, k, flavor, empirical, output } => {
            init_threads(&output);
            let map = map.id();
            if let FlavorName::Both = flavor {
                let strict = build_triangle(map, k.hi, Flavor::Strict)?;
                let terras = build_triangle(map, k.hi, Flavor::Terras)?;
                let mut t = Table::new(["k", "F_strict", "F_terras", "differ"]);
                for kk in k.lo..=k.hi {
                    let fs = strict.distribution_f(kk);
                    let ft = terras.distribution_f(kk);
                    let differ = if fs == ft { "" } else { "*" };
                    t.row([
                        kk.to_string(),
                        output.number(&fs),
                        output.number(&ft),
                        differ.to_string(),
                    ]);
                }
                emit(&t.render(output.table_format()?), &output)?;
                return Ok(ExitCode::SUCCESS);
            }
            let flavor = match flavor {
                FlavorName::Strict => Flavor::Strict,
                _ => Flavor::Terras,
            };
            let triangle = build_triangle(map, k.hi, flavor)?;
            let mut headers = vec!["k".to_string(), "F".to_string()];
            if empirical.is_some() {
                headers.extend(
                    ["empirical", "survivors", "total", "class_survivors", "disagreements"]
                        .map(String::from),
                );
            }
            let mut t = Table::with_headers(headers);
            for kk in k.lo..=k.hi {
                let f = triangle.distribution_f(kk);
                let mut row = vec![kk.to_string(), output.number(&f)];
                if let Some(n_max) = empirical {
                    let r = empirical_f(map, kk, n_max, flavor)?;
                    row.extend([
                        output.number(&r.fraction()),
                        r.survivors.to_string(),
                        r.total.to_string(),
                        r.class_survivors.to_string(),
                        r.disagreements.to_string(),
                    ]);
                }
                t.row(row);
            }
            emit(&t.render(output.table_format()?), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tree { map, nodes, output } => {
            let tree = build_tree(map.id(), nodes)?;
            match output.format {
                Format::Dot => emit(&export_dot(&tree), &output)?,
                _ => {
                    let mut t = Table::new(["node", "next", "operation"]);
                    let labels = map.id().branches().unwrap();
                    for (n, m, b) in tree.edges() {
                        t.row([
                            n.to_string(),
                            m.to_string(),
                            labels[b as usize].label.to_string(),
                        ]);
                    }
                    emit(&t.render(output.table_format()?), &output)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Chain { map, start, levels, budget, output } => {
            let chain = chain_from(map.id(), &BigInt::from(start), levels, budget)?;
            let mut t = Table::new([
                "level",
                "start",
                "end",
                "length",
                "direction",
                "vs_origin",
                "status",
                "sequence",
            ]);
            for (i, level) in chain.levels.iter().enumerate() {
                let b = &level.branch;
                let status = if b.complete {
                    "complete"
                } else if b.cycle {
                    "cycle"
                } else {
                    "budget-exhausted"
                };
                let seq = b
                    .values()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("->");
                t.row([
                    (i + 1).to_string(),
                    b.start.to_string(),
                    b.end().to_string(),
                    b.length().to_string(),
                    level.vs_level_start.map_or("-".into(), |d| d.to_string()),
                    level.vs_origin.map_or("-".into(), |d| d.to_string()),
                    status.to_string(),
                    seq,
                ]);
            }
            emit(&t.render(output.table_format()?), &output)?;
            Ok(match chain.status {
                ChainStatus::BudgetExhausted => ExitCode::from(3),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::Slices { map, levels, until, domain, budget, lmax, output } => {
            init_threads(&output);
            let domain = match domain {
                DomainName::All => Domain::AllIntegers,
                DomainName::Odd => Domain::OddIntegers,
            };
            let report =
                slice_fraction(map.id(), levels, until, domain, budget)?.with_analytic(lmax)?;
            let mut t = Table::new([
                "level",
                "count",
                "denominator",
                "fraction",
                "analytic",
                "cycle_hits",
                "budget_hits",
            ]);
            for lvl in 1..=levels {
                let analytic = report.analytic[lvl as usize - 1]
                    .as_ref()
                    .map_or("-".into(), |f| output.number(f));
                t.row([
                    lvl.to_string(),
                    report.counts[lvl as usize - 1].to_string(),
                    report.denominator.to_string(),
                    output.number(&report.fraction(lvl)),
                    analytic,
                    report.cycle_hits.to_string(),
                    report.budget_hits.to_string(),
                ]);
            }
            emit(&t.render(output.table_format()?), &output)?;
            Ok(if report.budget_hits > 0 {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn families_rows(map: MapId, length: LengthRange) -> anyhow::Result<Table> {
    let mut t = Table::new([
        "L",
        "sequence",
        "modulo",
        "direction",
        "x_class",
        "y_class",
        "density",
        "word",
    ]);
    for l in length.lo..=length.hi {
        let table = enumerate_families(map, l)?;
        for fam in &table.families {
            let seq = fam
                .realize()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("->");
            t.row([
                l.to_string(),
                seq,
                fam.x_class.modulus().to_string(),
                fam.direction.to_string(),
                fam.x_class.to_string(),
                fam.y_class.to_string(),
                format!("1/{}", fam.x_class.modulus()),
                fam.word.to_string(),
            ]);
        }
    }
    Ok(t)
}

fn families_summary(map: MapId, length: LengthRange) -> anyhow::Result<Table> {
    let mut t = Table::new(["L", "words", "modulo", "count", "dist", "D_L", "S_L", "S_L_pct"]);
    for l in length.lo..=length.hi {
        let table = enumerate_families(map, l)?;
        let dl = distribution_dl(map, l)?;
        let sl = cumulative_sl(map, l)?;
        let words = table.families.len();
        for (modulus, count) in table.grouped_counts() {
            t.row([
                l.to_string(),
                words.to_string(),
                modulus.to_string(),
                count.to_string(),
                format!("{count}/{modulus}"),
                render::exact(&dl),
                render::exact(&sl),
                render::percent(&sl),
            ]);
        }
    }
    Ok(t)
}

fn families_pp(map: MapId, length: LengthRange) -> anyhow::Result<Table> {
    let rows = pp_distribution_table(map, length.lo, length.hi)?;
    let mut t = Table::new([
        "L",
        "modulo",
        "count",
        "dist",
        "per_L",
        "cumulative",
        "cumulative_pct",
        "S_L_pct",
    ]);
    for row in rows {
        let sl = cumulative_sl(map, row.l)?;
        t.row([
            row.l.to_string(),
            row.modulus.to_string(),
            row.count.to_string(),
            format!("{}/{}", row.count, row.modulus),
            render::exact(&row.per_l),
            render::exact(&row.cumulative),
            render::percent(&row.cumulative),
            render::percent(&sl),
        ]);
    }
    Ok(t)
}

fn emit(text: &str, output: &OutputArgs) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
