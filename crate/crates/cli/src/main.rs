use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tlt_core::classes::{canonical_representative, cc, class_path, partition_classes, paths_below, LatticePath};
use tlt_core::insertion::{decode, generate_all, InsertionCode};
use tlt_core::pasep::{mc_sample, parse_rational, stationary_distribution, tableau_distribution, PasepParams};
use tlt_core::perm::{count_pk_in_corner, phi, phi_inverse, Permutation};
use tlt_core::poly::IntPolynomial;
use tlt_core::stats::{p_enum, p_recurrence, stat_report};
use tlt_core::symmetric::{
    corners_total_symmetric, diagonal_points, generate_symmetric, generate_symmetric_paired, q_enum, q_recurrence,
    signed_factorial, triplet_image,
};
use tlt_core::verify::{run_suite, Suite, SuiteOptions};
use tlt_core::Cell;

#[derive(Parser)]
#[command(name = "tlt", version, about = "Tree-like tableaux: enumeration, statistics and checks")]
struct Cli {
    /// Size parameter.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Jsonl,
    Ascii,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "P")]
    P,
    #[value(name = "Q")]
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// List every tableau of size n.
    Generate {
        #[arg(long, value_enum, default_value_t = Emit::Jsonl)]
        emit: Emit,
    },
    /// Occupied-corner and corner totals over all tableaux of size n.
    Stats,
    /// Generating polynomial of occupied corners.
    Poly {
        #[arg(long, value_enum, default_value_t = Family::P)]
        family: Family,
        /// Also enumerate and compare.
        #[arg(long)]
        check: bool,
    },
    /// Map an insertion code (m1,...,mn) to its permutation, or back.
    Phi {
        #[arg(long, conflicts_with = "perm")]
        code: Option<String>,
        #[arg(long)]
        perm: Option<String>,
    },
    /// Number of tableaux of size n with p_k in a corner, for each k.
    PkCorners,
    /// Classes of tableaux sharing a point set.
    Classes,
    /// Paths weakly below a path, with their common corners.
    Paths {
        #[arg(long)]
        p: String,
    },
    /// Symmetric tableaux of an odd size.
    Sym {
        #[arg(long)]
        size: usize,
        #[arg(long, value_parser = ["all"])]
        check: Option<String>,
    },
    /// Stationary distribution of the exclusion process on n sites.
    Pasep {
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, default_value = "1")]
        q: String,
        /// Sample this many steps instead of solving exactly.
        #[arg(long)]
        mc: Option<u64>,
    },
    /// Run a verification suite up to n.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        /// Record per-check wall-clock time.
        #[arg(long)]
        timings: bool,
    },
}

/// Bad input, reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn need_n(cli: &Cli, max: usize) -> Result<usize> {
    match cli.n {
        None => usage("--n is required"),
        Some(n) if n < 1 || n > max => usage(format!("--n must be in 1..={max}")),
        Some(n) => Ok(n),
    }
}

fn poly_json(p: &IntPolynomial) -> Value {
    json!({
        "coeffs": p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

#[derive(Debug)]
struct Output {
    body: String,
    ok: bool,
}

impl Output {
    fn json(v: Value) -> Self {
        Output { body: serde_json::to_string_pretty(&v).expect("json") + "\n", ok: true }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let table = cli.format == Format::Table;
    match &cli.command {
        Command::Generate { emit } => {
            let n = need_n(cli, 10)?;
            let mut body = String::new();
            for g in generate_all(n) {
                match emit {
                    Emit::Jsonl => {
                        let v = json!({ "code": g.code.full(), "rows": g.tableau.rows(), "points": g.tableau.points() });
                        body += &(v.to_string() + "\n");
                    }
                    Emit::Ascii => body += &format!("{}\n{}\n", g.code, g.tableau.to_ascii()),
                }
            }
            Ok(Output { body, ok: true })
        }
        Command::Stats => {
            let r = stat_report(need_n(cli, 10)?);
            if table {
                let hist: Vec<String> = r.oc_histogram.iter().map(ToString::to_string).collect();
                let body = format!(
                    "n                {}\ntableaux         {}\noccupied corners {}\ncorners          {}\noc histogram     {}\nvariance         {}\n",
                    r.n, r.total_tableaux, r.total_oc, r.total_corners, hist.join(" "), r.variance
                );
                return Ok(Output { body, ok: true });
            }
            Ok(Output::json(serde_json::to_value(&r)?))
        }
        Command::Poly { family, check } => {
            let n = cli.n.ok_or_else(|| Usage("--n is required".into()))?;
            if *check && (n > 9 || *family == Family::Q && 2 * n + 1 > 11 || *family == Family::P && n == 0) {
                return usage("enumeration is limited to 1 <= n <= 9 for P and 2n + 1 <= 11 for Q");
            }
            let (name, rec, en) = match family {
                Family::P => ("P", p_recurrence(n)?, check.then(|| p_enum(n))),
                Family::Q => ("Q", q_recurrence(n)?, check.then(|| q_enum(n))),
            };
            let ok = en.as_ref().is_none_or(|e| e == &rec);
            if table {
                let mut body = format!("{name}_{n} = {rec}\n");
                if let Some(e) = &en {
                    body += &format!("enumerated = {e}\n");
                }
                return Ok(Output { body, ok });
            }
            let mut v = json!({ "family": name, "n": n, "recurrence": poly_json(&rec) });
            if let Some(e) = &en {
                v["enumerated"] = poly_json(e);
                v["equal"] = json!(ok);
            }
            Ok(Output { ok, ..Output::json(v) })
        }
        Command::Phi { code, perm } => match (code, perm) {
            (Some(code), None) => {
                let full: Vec<usize> = code
                    .trim_matches(|c| c == '(' || c == ')')
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Usage(format!("cannot parse code {code:?}")))?;
                let code = InsertionCode::from_full(&full).map_err(|e| Usage(e.to_string()))?;
                let sigma = phi(&code);
                let (t, _) = decode(&code);
                Ok(Output::json(json!({ "code": code.full(), "permutation": sigma.to_string(), "tableau": t })))
            }
            (None, Some(p)) => {
                let sigma: Permutation = p.parse().map_err(|e: tlt_core::perm::PermError| Usage(e.to_string()))?;
                let code = phi_inverse(&sigma);
                let (t, _) = decode(&code);
                Ok(Output::json(json!({ "code": code.full(), "permutation": sigma.to_string(), "tableau": t })))
            }
            _ => usage("give exactly one of --code or --perm"),
        },
        Command::PkCorners => {
            let n = need_n(cli, 1000)?;
            if n < 2 {
                return usage("--n must be at least 2");
            }
            let rows: Vec<(usize, String)> = (2..=n).map(|k| (k, count_pk_in_corner(n, k).expect("k in range").to_string())).collect();
            if table {
                let body = rows.iter().map(|(k, c)| format!("{k:>4}  {c}\n")).collect();
                return Ok(Output { body, ok: true });
            }
            let v: Vec<Value> = rows.into_iter().map(|(k, c)| json!({ "k": k, "count": c })).collect();
            Ok(Output::json(json!({ "n": n, "counts": v })))
        }
        Command::Classes => {
            let n = need_n(cli, 9)?;
            let classes = partition_classes(n);
            let mut ok = true;
            let mut list = Vec::new();
            for members in classes.values() {
                let canon = match canonical_representative(members) {
                    Ok(c) => c,
                    Err(e) => {
                        ok = false;
                        list.push(json!({ "size": members.len(), "error": e.to_string() }));
                        continue;
                    }
                };
                let oc: usize = members.iter().map(|t| t.occupied_corner_count()).sum();
                let path = class_path(canon);
                ok &= oc == members.len();
                list.push(json!({
                    "size": members.len(),
                    "oc_sum": oc,
                    "canonical": canon,
                    "path": path.to_string(),
                    "paths_below": paths_below(&path).len(),
                }));
            }
            if table {
                let mut by_size = std::collections::BTreeMap::new();
                for members in classes.values() {
                    *by_size.entry(members.len()).or_insert(0usize) += 1;
                }
                let mut body = format!("{} classes of size-{n} tableaux\nclass size  count\n", classes.len());
                for (size, count) in by_size {
                    body += &format!("{size:>10}  {count}\n");
                }
                return Ok(Output { body, ok });
            }
            Ok(Output { ok, ..Output::json(json!({ "n": n, "classes": list })) })
        }
        Command::Paths { p } => {
            let p: LatticePath = p.parse().map_err(|e: tlt_core::classes::ClassError| Usage(e.to_string()))?;
            if !p.is_corner_bounded() {
                return usage("the path must start and end with EN");
            }
            let below = paths_below(&p);
            let ccs: Vec<usize> = below.iter().map(|q| cc(&p, q).expect("below")).collect();
            let total: usize = ccs.iter().sum();
            if table {
                let mut body: String = below.iter().zip(&ccs).map(|(q, c)| format!("{q}  {c}\n")).collect();
                body += &format!("{} paths, sum of cc = {total}\n", below.len());
                return Ok(Output { body, ok: total == below.len() });
            }
            let v: Vec<Value> = below.iter().zip(&ccs).map(|(q, c)| json!({ "path": q.to_string(), "cc": c })).collect();
            Ok(Output { ok: total == below.len(), ..Output::json(json!({ "p": p.to_string(), "count": below.len(), "cc_sum": total, "paths": v })) })
        }
        Command::Sym { size, check } => {
            let size = *size;
            if size % 2 == 0 || size > 11 {
                return usage("--size must be odd and at most 11");
            }
            let m = size / 2;
            let all = if size <= 9 { generate_symmetric(size)? } else { generate_symmetric_paired(size)? };
            let oc: usize = all.iter().map(|t| t.occupied_corner_count()).sum();
            let corners = corners_total_symmetric(size)?;
            let mut v = json!({
                "size": size,
                "count": all.len(),
                "expected_count": signed_factorial(m).to_string(),
                "oc_total": oc,
                "q_enum": poly_json(&q_enum(m)),
                "corners_total": corners.enumerated.to_string(),
                "corners_conjectured": corners.conjectured.to_string(),
            });
            let mut ok = true;
            if check.is_some() {
                let agree = size > 9 || generate_symmetric_paired(size)? == all;
                let diagonal = all.iter().all(|t| diagonal_points(t) == [Cell::ROOT]);
                let triplets = m == 0 || triplet_image(m).is_some_and(|s| s.len() == all.len());
                let counts = signed_factorial(m) == all.len().into() && oc == all.len();
                ok = agree && diagonal && triplets && counts;
                v["checks"] = json!({ "generators_agree": agree, "root_only_on_diagonal": diagonal, "triplet_bijection": triplets, "counts": counts });
            }
            if table {
                let mut body = format!("size {size}: {} tableaux, oc total {oc}, Q = {}\n", all.len(), q_enum(m));
                if let Some(c) = v.get("checks") {
                    body += &format!("checks: {c}\n");
                }
                return Ok(Output { body, ok });
            }
            Ok(Output { ok, ..Output::json(v) })
        }
        Command::Pasep { alpha, beta, q, mc } => {
            let n = need_n(cli, 12)?;
            let parse = |s: &str| parse_rational(s).map_err(|e| Usage(e.to_string()));
            let params = PasepParams::new(parse(alpha)?, parse(beta)?, parse(q)?).map_err(|e| Usage(e.to_string()))?;
            let dist = match mc {
                Some(steps) => mc_sample(n, &params, *steps, cli.seed)?,
                None => {
                    if n > 8 {
                        return usage("exact solves are limited to n <= 8; use --mc");
                    }
                    stationary_distribution(n, &params)?
                }
            };
            if table {
                let mut body = String::new();
                for (s, p) in dist.iter() {
                    body += &format!("{s}  {p}\n");
                }
                if mc.is_none() && params == PasepParams::uniform() && n <= 7 {
                    body += &format!("equals tableau projection: {}\n", dist == tableau_distribution(n));
                }
                return Ok(Output { body, ok: true });
            }
            Ok(Output::json(serde_json::to_value(&dist)?))
        }
        Command::Verify { suite, timings } => {
            let suite: Suite = suite.parse().map_err(|e: tlt_core::verify::VerifyError| Usage(e.to_string()))?;
            let n = cli.n.unwrap_or(8);
            let opts = SuiteOptions { n_max: n, seed: cli.seed, timings: *timings };
            let report = run_suite(suite, opts).map_err(|e| Usage(e.to_string()))?;
            if !cli.quiet {
                eprint!("{}", report.table());
            }
            Ok(Output { body: report.to_jsonl(), ok: !report.failed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if e.is::<Usage>() { 2 } else { 1 });
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &out.body).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(out.body.as_bytes()).context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn n_bounds() {
        let cli = Cli::parse_from(["tlt", "stats", "--n", "0"]);
        assert!(run(&cli).unwrap_err().is::<Usage>());
    }
}
