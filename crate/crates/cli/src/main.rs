//! `pvsft`: orbit tables, count vectors and exact Fourier matrices for
//! prehomogeneous vector spaces over prime fields.

mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pvsft_core::census::{
    count_in_subspace, full_census, oracle_ft_matrix, CensusConfig, SubspaceSpec, DEFAULT_BUDGET,
};
use pvsft_core::counts::{count_table, format_mask, parse_mask};
use pvsft_core::exec::ExecConfig;
use pvsft_core::ftsolver::{solve_ft_matrix, FTMatrix, Provider};
use pvsft_core::paperdata::expected_ft_matrix;
use pvsft_core::reps::{RepKind, Space};
use pvsft_core::symbolic::{
    compare_paper, interpolate, interpolate_primes, render, render_entry_text, PolyMatrix, RenderFormat,
};
use pvsft_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "pvsft",
    version,
    about = "Exact Fourier transforms of orbit indicators over F_p"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "PVSFT_THREADS")]
    threads: Option<usize>,
    /// Largest enumeration allowed, in classified elements.
    #[arg(long = "enum-budget", global = true, env = "PVSFT_BUDGET")]
    enum_budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit labels, representatives and sizes.
    Orbits {
        #[arg(long, value_parser = parse_rep)]
        rep: RepKind,
        #[arg(long)]
        q: u64,
        /// Enumerate the whole space and compare with the size formulas.
        #[arg(long)]
        verify_census: bool,
    },
    /// Orbit counts in coordinate subspaces.
    Counts {
        #[arg(long, value_parser = parse_rep)]
        rep: RepKind,
        #[arg(long)]
        q: u64,
        /// Coordinate mask such as `110|100`; omitted prints the closed-form table.
        #[arg(long)]
        mask: Option<String>,
    },
    /// The Fourier matrix at one q.
    Ft {
        #[arg(long, value_parser = parse_rep)]
        rep: RepKind,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Method::Subspace)]
        method: Method,
    },
    /// Same as `ft --method oracle`.
    Oracle {
        #[arg(long, value_parser = parse_rep)]
        rep: RepKind,
        #[arg(long)]
        q: u64,
    },
    /// Polynomial matrices q^dim·M(q), one per congruence class.
    Symbolic {
        #[arg(long, value_parser = parse_rep)]
        rep: RepKind,
        /// Sample primes from one class; the last one is held out.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Full check battery at one q.
    Verify {
        #[arg(long, value_parser = parse_rep)]
        rep: RepKind,
        #[arg(long)]
        q: u64,
        /// Also run the large enumerations (quartic oracle at q = 5).
        #[arg(long)]
        slow: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Subspace-average identity with closed-form counts.
    Subspace,
    /// Direct character sums over the whole space.
    Oracle,
    /// Transcribed theorem matrix evaluated at q.
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
    Pretty,
}

fn parse_rep(s: &str) -> std::result::Result<RepKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a subcommand produced: text for the output, and whether its checks held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn census_config(cli: &Cli) -> CensusConfig {
    CensusConfig {
        budget: cli.enum_budget.unwrap_or(DEFAULT_BUDGET),
        exec: ExecConfig {
            threads: cli.threads.filter(|&n| n > 0),
            ..Default::default()
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.text) {
                report_error(&e);
                return ExitCode::from(2);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            report_error(&e);
            ExitCode::from(2)
        }
    }
}

fn report_error(e: &dyn std::fmt::Display) {
    eprintln!("{}", json!({ "status": "error", "error": e.to_string() }));
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = census_config(cli);
    match &cli.command {
        Command::Orbits { rep, q, verify_census } => cmd_orbits(*rep, *q, *verify_census, cli.format, &cfg),
        Command::Counts { rep, q, mask } => cmd_counts(*rep, *q, mask.as_deref(), cli.format, &cfg),
        Command::Ft { rep, q, method } => cmd_ft(*rep, *q, *method, cli.format, &cfg),
        Command::Oracle { rep, q } => cmd_ft(*rep, *q, Method::Oracle, cli.format, &cfg),
        Command::Symbolic { rep, primes } => cmd_symbolic(*rep, primes.as_deref(), cli.format, &cfg.exec),
        Command::Verify { rep, q, slow } => {
            let report = verify::run_battery(*rep, *q, *slow, &cfg)?;
            let ok = report.passed;
            let text = match cli.format {
                Format::Json => to_json(&report),
                _ => report.to_text(),
            };
            Ok(Outcome { text, ok })
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

fn fmt_vector(x: &[u32]) -> String {
    let parts: Vec<String> = x.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Serialize)]
struct OrbitRow {
    label: String,
    representative: Vec<u32>,
    size_polynomial: String,
    size: String,
    zeros: String,
}

fn cmd_orbits(kind: RepKind, q: u64, verify_census: bool, format: Format, cfg: &CensusConfig) -> Result<Outcome> {
    let space = Space::new(kind, q)?;
    let d = kind.descriptor();
    let reps = space.representatives()?;
    let rows: Vec<OrbitRow> = d
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| OrbitRow {
            label: l.to_string(),
            representative: reps[i].clone(),
            size_polynomial: d.sizes[i].to_string(),
            size: d.sizes[i].eval_int(q as i64).to_string(),
            zeros: d.zeros[i].eval_int(q as i64).to_string(),
        })
        .collect();

    let mut census_line = None;
    let mut ok = true;
    if verify_census {
        let got = full_census(&space, cfg)?;
        let mismatched: Vec<&str> = rows
            .iter()
            .zip(&got.counts)
            .filter(|(r, c)| r.size != c.to_string())
            .map(|(r, _)| r.label.as_str())
            .collect();
        ok = mismatched.is_empty();
        census_line = Some(if ok {
            format!("census OK: {} orbits matched, total {}", rows.len(), got.total())
        } else {
            format!("census MISMATCH on {}", mismatched.join(", "))
        });
    }

    let text = match format {
        Format::Json => to_json(&json!({
            "rep": kind,
            "q": q,
            "orbits": rows,
            "census": census_line,
        })),
        Format::Csv => {
            let mut out = String::from("label,representative,size_polynomial,size,zeros\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "\"{}\",\"{}\",\"{}\",{},{}",
                    r.label,
                    fmt_vector(&r.representative),
                    r.size_polynomial,
                    r.size,
                    r.zeros
                );
            }
            out
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{llll}\norbit & representative & size & zeros \\\\\n\\hline\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "${}$ & ${}$ & ${}$ & ${}$ \\\\",
                    r.label,
                    fmt_vector(&r.representative),
                    r.size_polynomial,
                    r.zeros
                );
            }
            out.push_str("\\end{tabular}");
            out
        }
        Format::Pretty => {
            let reps_s: Vec<String> = rows.iter().map(|r| fmt_vector(&r.representative)).collect();
            let lw = rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max(5);
            let rw = reps_s.iter().map(String::len).max().unwrap_or(0).max(14);
            let sw = rows.iter().map(|r| r.size.len()).max().unwrap_or(0).max(4);
            let mut out = format!("{kind} over F_{q}: {} orbits\n", rows.len());
            let _ = writeln!(
                out,
                "{:lw$}  {:rw$}  {:>sw$}  size polynomial",
                "orbit", "representative", "size"
            );
            for (r, rs) in rows.iter().zip(&reps_s) {
                let _ = writeln!(out, "{:lw$}  {rs:rw$}  {:>sw$}  {}", r.label, r.size, r.size_polynomial);
            }
            out
        }
    };
    let text = match (&census_line, format) {
        (Some(line), Format::Pretty | Format::Csv | Format::Latex) => format!("{text}\n{line}"),
        _ => text,
    };
    Ok(Outcome { text, ok })
}

fn cmd_counts(kind: RepKind, q: u64, mask: Option<&str>, format: Format, cfg: &CensusConfig) -> Result<Outcome> {
    let table = count_table(kind);
    let labels: Vec<String> = kind.descriptor().labels.iter().map(|l| l.to_string()).collect();
    let Some(mask) = mask else {
        // whole closed-form table; valid for odd prime powers of good characteristic
        if q.is_multiple_of(2) || !kind.bad_primes().iter().all(|&b| !q.is_multiple_of(b)) {
            return Err(Error::BadPrime {
                rep: kind.to_string(),
                p: q,
            });
        }
        let text = match format {
            Format::Csv => table.to_csv(q),
            Format::Json => {
                let mut entries = Vec::new();
                for e in &table.entries {
                    let vals = table.evaluate(&e.id, q)?;
                    entries.push(json!({
                        "id": e.id,
                        "mask": e.mask,
                        "dim": e.dim,
                        "counts": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    }));
                }
                to_json(&json!({ "rep": kind, "q": q, "orbit_labels": labels, "entries": entries }))
            }
            Format::Latex | Format::Pretty => {
                let mut out = format!("{kind} at q = {q}\n{:8} {:14}", "id", "mask");
                for l in &labels {
                    let _ = write!(out, " {l:>8}");
                }
                out.push('\n');
                for e in &table.entries {
                    let _ = write!(out, "{:8} {:14}", e.id, e.mask);
                    for v in table.evaluate(&e.id, q)? {
                        let _ = write!(out, " {v:>8}");
                    }
                    out.push('\n');
                }
                out
            }
        };
        return Ok(Outcome::ok(text));
    };

    let bits = parse_mask(mask)?;
    let space = Space::new(kind, q)?;
    let got = count_in_subspace(&space, &SubspaceSpec::Mask(bits.clone()), cfg)?;
    let canonical = format_mask(kind, &bits);
    let entry = table.entries.iter().find(|e| e.mask_bits() == bits);
    let formula = match entry {
        Some(e) => Some(table.evaluate(&e.id, q)?),
        None => None,
    };
    let ok = formula.as_ref().is_none_or(|f| *f == got.to_rationals());
    let text = match format {
        Format::Json => to_json(&json!({
            "rep": kind,
            "q": q,
            "mask": canonical,
            "orbit_labels": labels,
            "counts": got.counts,
            "formula_entry": entry.map(|e| e.id.clone()),
            "matches_formula": formula.as_ref().map(|_| ok),
        })),
        Format::Csv => {
            let mut out = String::from("orbit,count\n");
            for (l, c) in labels.iter().zip(&got.counts) {
                let _ = writeln!(out, "\"{l}\",{c}");
            }
            out
        }
        Format::Latex | Format::Pretty => {
            let mut out = format!("{kind} at q = {q}, mask {canonical}\n");
            for (l, c) in labels.iter().zip(&got.counts) {
                let _ = writeln!(out, "{l:10} {c}");
            }
            match entry {
                Some(e) => {
                    let _ = write!(out, "closed form {}: {}", e.id, if ok { "match" } else { "MISMATCH" });
                }
                None => out.push_str("no closed form for this mask"),
            }
            out
        }
    };
    Ok(Outcome { text, ok })
}

fn cmd_ft(kind: RepKind, q: u64, method: Method, format: Format, cfg: &CensusConfig) -> Result<Outcome> {
    let m = match method {
        Method::Subspace => solve_ft_matrix(kind, q, &Provider::Formula)?,
        Method::Table => expected_ft_matrix(kind, q)?,
        Method::Oracle => {
            let space = Space::new(kind, q)?;
            FTMatrix {
                rep: kind,
                q,
                matrix: oracle_ft_matrix(&space, cfg)?,
            }
        }
    };
    let text = match format {
        Format::Json => m.to_json(),
        Format::Csv => m.to_csv(),
        Format::Latex => m.to_latex(),
        Format::Pretty => m.to_pretty(),
    };
    Ok(Outcome::ok(text))
}

fn cmd_symbolic(kind: RepKind, primes: Option<&[u64]>, format: Format, exec: &ExecConfig) -> Result<Outcome> {
    let pms: Vec<PolyMatrix> = match primes {
        Some(ps) => {
            let first = *ps
                .first()
                .ok_or_else(|| Error::InvalidArgument("--primes is empty".into()))?;
            let class = kind.class_of(first);
            if let Some(&bad) = ps.iter().find(|&&p| kind.class_of(p) != class) {
                return Err(Error::InvalidArgument(format!(
                    "{bad} and {first} lie in different classes mod {}",
                    kind.modulus()
                )));
            }
            vec![interpolate_primes(kind, class, ps, exec)?]
        }
        None => interpolate(kind, exec)?,
    };

    let mut diffs = Vec::new();
    for pm in &pms {
        for d in compare_paper(pm)? {
            diffs.push(json!({
                "class": pm.class,
                "row": d.row_label,
                "col": d.col_label,
                "got": d.got,
                "expected": d.expected,
            }));
        }
    }
    if !diffs.is_empty() {
        eprintln!("{}", to_json(&json!({ "status": "mismatch", "diffs": diffs })));
    }

    let text = match format {
        Format::Json => {
            let values: Vec<serde_json::Value> = pms
                .iter()
                .map(|pm| serde_json::from_str(&render(pm, RenderFormat::Json)).expect("rendered json parses"))
                .collect();
            to_json(&values)
        }
        Format::Csv => {
            let mut out = String::from("class,row,col,polynomial\n");
            for pm in &pms {
                for line in render(pm, RenderFormat::Csv).lines().skip(1) {
                    let _ = writeln!(out, "{},{line}", pm.class);
                }
            }
            out
        }
        Format::Latex => pms
            .iter()
            .map(|pm| render(pm, RenderFormat::Latex))
            .collect::<Vec<_>>()
            .join("\n\n"),
        Format::Pretty => pms.iter().map(pretty_poly).collect::<Vec<_>>().join("\n"),
    };
    Ok(Outcome {
        text,
        ok: diffs.is_empty(),
    })
}

fn pretty_poly(pm: &PolyMatrix) -> String {
    let labels = &pm.rep.descriptor().labels;
    let mut out = format!(
        "{} for q = {} mod {}: q^{}·M, [abc] = (q-1)^a q^b (q+1)^c, phi2 = q^2+q+1\n",
        pm.rep,
        pm.class,
        pm.rep.modulus(),
        pm.rep.dim()
    );
    for (i, row) in pm.entries.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(render_entry_text).collect();
        let _ = writeln!(out, "{:10} {}", labels[i].to_string(), cells.join("  "));
    }
    out
}
