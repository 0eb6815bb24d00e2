//! `minvar`: counts, growth exponents and gap structure of colored compositions.
//!
//! Exit codes: 0 success, 2 invalid input, 3 certification failure.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use minvar::analysis::{conductor, gap_profile, Lacunarity};
use minvar::enumeration::{compositions, to_variety};
use minvar::growth::{
    b_sequence, beta_bracket, gcd_subsequence_roots, roots_table, solve_alpha, RootBracket,
    SolverConfig,
};
use minvar::numeric::{format_significant, parse_rational, rational_to_f64};
use minvar::{MultisetSpec, SolveError};

use output::{Cell, Format, Table};

const MAX_ORDER_VAR: &str = "MINVAR_MAX_ORDER";

#[derive(Parser, Debug)]
#[command(
    name = "minvar",
    version,
    about = "Colored compositions over weight multisets"
)]
struct Cli {
    /// Output format (csv for tables, plain for `solve`/`semigroup`, unless given).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Truncation order N.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Bracket width for `solve`, as a decimal or a fraction.
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Stop listing after this many items.
    #[arg(long, global = true)]
    limit: Option<u64>,
    /// Significant digits for root and bracket decimals.
    #[arg(long, global = true, default_value_t = 10)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nonzero coefficients a_k of a(t).
    Coeffs {
        /// fg-codim, codim, gk-fg:d=D, gk:d=D, factorial, zeta:n=N or file:PATH.
        spec: String,
    },
    /// Counts b_n and their n-th roots.
    Roots {
        /// fg-codim, codim, gk-fg:d=D, gk:d=D, factorial, zeta:n=N or file:PATH.
        spec: String,
        /// Only rows n = d, 2d, ... where d is the gcd of the support.
        #[arg(long)]
        gcd: bool,
    },
    /// Certified bracket for the root alpha of a(t) = 1 and for beta = 1/alpha.
    Solve {
        /// fg-codim, codim, gk-fg:d=D, gk:d=D, factorial, zeta:n=N or file:PATH.
        spec: String,
    },
    /// List the colored compositions of n.
    Enumerate {
        /// fg-codim, codim, gk-fg:d=D, gk:d=D, factorial, zeta:n=N or file:PATH.
        spec: String,
        /// Total weight.
        #[arg(long)]
        n: u64,
        /// Translate each composition into its minimal variety.
        #[arg(long)]
        varieties: bool,
        /// Print only the number of compositions.
        #[arg(long)]
        count_only: bool,
    },
    /// Gap and ratio profile of the support of a(t).
    Gaps {
        /// fg-codim, codim, gk-fg:d=D, gk:d=D, factorial, zeta:n=N or file:PATH.
        spec: String,
        /// Largest exponent examined.
        #[arg(long, default_value_t = 100)]
        bound: u64,
        /// Report maximal blocks of consecutive exponents instead of single exponents.
        #[arg(long)]
        blocks: bool,
        /// Trailing window for the gap-trend verdict.
        #[arg(long, default_value_t = 5)]
        window: usize,
    },
    /// Frobenius number and conductor of a numerical semigroup.
    Semigroup {
        /// Positive generators with gcd 1.
        #[arg(required = true)]
        generators: Vec<u64>,
    },
}

enum Failure {
    Input(String),
    Certification(String),
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Certification(msg)) => {
            eprintln!("certification failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let spec = |s: &str| MultisetSpec::parse(s).map_err(Failure::input);
    match &cli.command {
        Command::Coeffs { spec: s } => coeffs(cli, &spec(s)?),
        Command::Roots { spec: s, gcd } => roots(cli, &spec(s)?, *gcd),
        Command::Solve { spec: s } => solve(cli, &spec(s)?),
        Command::Enumerate {
            spec: s,
            n,
            varieties,
            count_only,
        } => enumerate(cli, &spec(s)?, *n, *varieties, *count_only),
        Command::Gaps {
            spec: s,
            bound,
            blocks,
            window,
        } => gaps(cli, &spec(s)?, *bound, *blocks, *window),
        Command::Semigroup { generators } => semigroup(cli, generators),
    }
}

fn decimal(cli: &Cli, x: f64) -> Cell {
    Cell::Number(format_significant(x, cli.precision))
}

fn rational_decimal(cli: &Cli, q: &BigRational) -> Cell {
    decimal(cli, rational_to_f64(q))
}

fn coeffs(cli: &Cli, spec: &MultisetSpec) -> Outcome {
    let order = cli.order.unwrap_or(20);
    let mut table = Table::new(&["k", "a_k"]);
    for (k, a) in spec.terms(order as u64) {
        table.push(vec![Cell::int(k), Cell::int(a)]);
    }
    table.limit(cli.limit);
    Ok(table.render(cli.format.unwrap_or(Format::Csv)))
}

fn roots(cli: &Cli, spec: &MultisetSpec, along_gcd: bool) -> Outcome {
    let order = cli.order.unwrap_or(16);
    let rows = if along_gcd {
        gcd_subsequence_roots(spec, order).map_err(Failure::input)?
    } else {
        roots_table(spec, order)
    };
    let mut table = Table::new(&["n", "b_n", "root"]);
    for row in rows.rows {
        let root = row.root.map_or(Cell::Empty, |r| decimal(cli, r));
        table.push(vec![Cell::int(row.n), Cell::int(&row.count), root]);
    }
    table.limit(cli.limit);
    Ok(table.render(cli.format.unwrap_or(Format::Csv)))
}

fn solver_config() -> Result<SolverConfig, Failure> {
    let mut config = SolverConfig::default();
    if let Ok(v) = std::env::var(MAX_ORDER_VAR) {
        config.max_order = v.trim().parse().map_err(|_| {
            Failure::Input(format!(
                "{MAX_ORDER_VAR} must be a positive integer, got `{v}`"
            ))
        })?;
        if config.max_order == 0 {
            return Err(Failure::Input(format!("{MAX_ORDER_VAR} must be positive")));
        }
    }
    Ok(config)
}

fn solve(cli: &Cli, spec: &MultisetSpec) -> Outcome {
    let eps = parse_rational(cli.eps.as_deref().unwrap_or("1e-6")).map_err(Failure::input)?;
    let bracket = solve_alpha(spec, &eps, &solver_config()?).map_err(|e| match e {
        SolveError::NonPositiveTolerance => Failure::input(e),
        other => Failure::Certification(other.to_string()),
    })?;
    let format = cli.format.unwrap_or(Format::Plain);
    let mut table = Table::new(&[
        "verdict",
        "alpha_lo",
        "alpha_hi",
        "alpha_mid",
        "beta_lo",
        "beta_hi",
        "beta_mid",
        "lower_order",
        "lower_bound",
        "upper_order",
        "upper_bound",
        "rho",
        "sup",
        "sup_order",
    ]);
    let text = |q: &BigRational| Cell::text(q);
    match &bracket {
        RootBracket::Bracketed { lower, upper } => {
            let (alpha_lo, alpha_hi) = (&lower.point, &upper.point);
            let alpha_mid = bracket.midpoint().expect("bracketed");
            let beta = beta_bracket(&bracket).ok();
            let (beta_lo, beta_hi, beta_mid) = match &beta {
                Some((lo, hi)) => {
                    let mid = (lo + hi) / BigRational::from_integer(2.into());
                    (
                        rational_decimal(cli, lo),
                        rational_decimal(cli, hi),
                        rational_decimal(cli, &mid),
                    )
                }
                None => (Cell::Empty, Cell::Empty, Cell::Empty),
            };
            if format == Format::Plain {
                let mut out = format!(
                    "bracketed alpha in [{}, {}] (midpoint {})\n",
                    format_significant(rational_to_f64(alpha_lo), cli.precision),
                    format_significant(rational_to_f64(alpha_hi), cli.precision),
                    format_significant(rational_to_f64(&alpha_mid), cli.precision),
                );
                match &beta {
                    Some((lo, hi)) => out.push_str(&format!(
                        "beta in [{}, {}]\n",
                        format_significant(rational_to_f64(lo), cli.precision),
                        format_significant(rational_to_f64(hi), cli.precision),
                    )),
                    None => out.push_str("beta unbounded above (alpha_lo = 0)\n"),
                }
                out.push_str(&format!(
                    "alpha_lo = {alpha_lo}\n  a(alpha_lo) <= {} < 1 (order {})\n",
                    format_significant(rational_to_f64(&lower.value), cli.precision),
                    lower.order
                ));
                out.push_str(&format!(
                    "alpha_hi = {alpha_hi}\n  a(alpha_hi) >= {} >= 1 (order {})\n",
                    format_significant(rational_to_f64(&upper.value), cli.precision),
                    upper.order
                ));
                return Ok(out);
            }
            table.push(vec![
                Cell::text("bracketed"),
                text(alpha_lo),
                text(alpha_hi),
                rational_decimal(cli, &alpha_mid),
                beta_lo,
                beta_hi,
                beta_mid,
                Cell::int(lower.order),
                text(&lower.value),
                Cell::int(upper.order),
                text(&upper.value),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
        }
        RootBracket::NoRootBelowRadius { radius, sup, order } => {
            if format == Format::Plain {
                return Ok(format!(
                    "no-root-below-radius rho={radius}\n  a(q) <= {} < 1 for all 0 <= q < rho (order {order})\n  \
                     beta = 1/rho = {} (not certified by a root of a(t) = 1)\n",
                    format_significant(rational_to_f64(sup), cli.precision),
                    radius.recip(),
                ));
            }
            let mut row = vec![Cell::text("no-root-below-radius")];
            row.extend(std::iter::repeat_n(Cell::Empty, 10));
            row.push(text(radius));
            row.push(text(sup));
            row.push(Cell::int(*order));
            table.push(row);
        }
    }
    Ok(table.render(format))
}

fn enumerate(cli: &Cli, spec: &MultisetSpec, n: u64, varieties: bool, count_only: bool) -> Outcome {
    if count_only {
        let count = b_sequence(spec, n as usize)
            .pop()
            .unwrap_or_else(BigUint::zero);
        return Ok(match cli.format.unwrap_or(Format::Plain) {
            Format::Plain => format!("{count}\n"),
            format => {
                let mut table = Table::new(&["n", "count"]);
                table.push(vec![Cell::int(n), Cell::int(count)]);
                table.render(format)
            }
        });
    }
    if varieties && !spec.has_variety_semantics() {
        return Err(Failure::Input(format!(
            "{spec} has no minimal-variety interpretation"
        )));
    }
    let columns: &[&'static str] = if varieties {
        &["index", "weights", "colors", "variety"]
    } else {
        &["index", "weights", "colors"]
    };
    let mut table = Table::new(columns);
    let join =
        |it: &mut dyn Iterator<Item = u64>| it.map(|x| x.to_string()).collect::<Vec<_>>().join("+");
    let mut stream = compositions(spec, n).map_err(Failure::input)?;
    let limit = cli.limit.unwrap_or(u64::MAX);
    let mut index = 0u64;
    while index < limit {
        let Some(c) = stream.next() else { break };
        index += 1;
        let mut row = vec![
            Cell::int(index),
            Cell::text(join(&mut c.weights())),
            Cell::text(join(&mut c.colors())),
        ];
        if varieties {
            row.push(Cell::text(to_variety(spec, &c).map_err(Failure::input)?));
        }
        table.push(row);
    }
    if index == limit && stream.next().is_some() {
        table.note(format!("truncated after {limit} items"));
    }
    Ok(table.render(cli.format.unwrap_or(Format::Csv)))
}

fn gaps(cli: &Cli, spec: &MultisetSpec, bound: u64, blocks: bool, window: usize) -> Outcome {
    let profile = gap_profile(spec, bound);
    let mut table;
    if blocks {
        table = Table::new(&["i", "p_i", "q_i", "gap", "ratio"]);
        for (i, b) in profile.blocks.iter().enumerate() {
            let (gap, ratio) = match (profile.gaps.get(i), profile.ratios.get(i)) {
                (Some(g), Some(r)) => (Cell::int(g), Cell::text(r)),
                _ => (Cell::Empty, Cell::Empty),
            };
            table.push(vec![
                Cell::int(i + 1),
                Cell::int(b.start),
                Cell::int(b.end),
                gap,
                ratio,
            ]);
        }
    } else {
        table = Table::new(&["i", "k_i", "gap", "ratio", "cohn"]);
        let gaps = profile.support_gaps();
        let ratios = profile.support_ratios();
        let cohn = profile.cohn_ratios();
        for (i, k) in profile.support.iter().enumerate() {
            let (gap, ratio, c) = match (gaps.get(i), ratios.get(i), cohn.get(i)) {
                (Some(g), Some(r), Some(c)) => (
                    Cell::int(g),
                    Cell::text(r),
                    c.map_or(Cell::Empty, |c| decimal(cli, c)),
                ),
                _ => (Cell::Empty, Cell::Empty, Cell::Empty),
            };
            table.push(vec![Cell::int(i + 1), Cell::int(k), gap, ratio, c]);
        }
    }
    table.limit(cli.limit);
    let verdict = match profile.verdict(window) {
        Lacunarity::StronglyLacunaryPrefix => "prefix consistent with strongly lacunary",
        Lacunarity::LacunaryPrefix => "prefix consistent with lacunary",
        Lacunarity::NotEvidenced => "no growing gap trend in prefix",
    };
    table.note(format!(
        "verdict: {verdict} (bound {bound}, window {window})"
    ));
    if profile.cohn_is_vacuous() {
        table.note("cohn: vacuous (all coefficients are 0 or 1)");
    }
    Ok(table.render(cli.format.unwrap_or(Format::Csv)))
}

fn semigroup(cli: &Cli, generators: &[u64]) -> Outcome {
    let report = conductor(generators).map_err(Failure::input)?;
    let gens = report
        .generators
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    let frobenius = report
        .frobenius
        .map_or("none".to_string(), |f| f.to_string());
    Ok(match cli.format.unwrap_or(Format::Plain) {
        Format::Plain => format!("frobenius {frobenius} conductor {}\n", report.conductor),
        format => {
            let mut table = Table::new(&["generators", "frobenius", "conductor"]);
            table.push(vec![
                Cell::text(gens),
                report.frobenius.map_or(Cell::Empty, Cell::int),
                Cell::int(report.conductor),
            ]);
            table.render(format)
        }
    })
}
