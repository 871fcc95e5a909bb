//! Command-line front end for `qmoduli`.

mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qmoduli::bundles::normalize_line_bundle;
use qmoduli::geometry::{h1_obstruction_basis, Bounds};
use qmoduli::moduli::{self, Strategy};
use qmoduli::poisson::{star_check, BivectorSpec};
use qmoduli::ring::{FormalFunction, LaurentPoly, Scalar};
use qmoduli::sampling::default_seed;
use qmoduli::{Error, Result};

use table::Table;

#[derive(Parser, Debug)]
#[command(name = "qmoduli", version, about = "First-order quantum moduli of rank-2 bundles on W_1 and W_2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Obstruction monomials of H^1(W_k, O) inside a box.
    H1 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_l: u32,
        #[arg(long)]
        max_i: u32,
        #[arg(long)]
        max_s: u32,
    },
    /// Associativity mod hbar^2 and Jacobi on random triples.
    StarCheck {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Normalize a line-bundle transition function read from a file,
    /// one hbar-coefficient per line.
    Normalize {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: i32,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        f: PathBuf,
    },
    /// Stalk dimension over one classical point.
    Stalk {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        sigma: String,
        /// Comma-separated coordinates in extension-basis order.
        #[arg(long)]
        point: String,
        /// Include the direction matrix in csv/table output.
        #[arg(long)]
        emit_matrix: bool,
    },
    /// Coranks over coordinate-support patterns.
    Stratify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "support-patterns")]
        strategy: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare stalks against the closed-form claims.
    Verify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reduced engine versus the full-gauge solve on random instances.
    OracleCheck {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    command: &'static str,
    seed: u64,
    report: T,
}

struct Output {
    json: String,
    tables: Vec<Table>,
    code: u8,
}

fn output<T: Serialize>(command: &'static str, seed: u64, report: &T, tables: Vec<Table>, code: u8) -> Result<Output> {
    let json = serde_json::to_string_pretty(&Envelope { command, seed, report })
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(Output { json, tables, code })
}

fn parse_point(text: &str) -> Result<Vec<Scalar>> {
    text.split(',')
        .map(|t| t.trim().parse::<Scalar>().map_err(|_| Error::Parse(format!("bad coordinate {t:?} in point"))))
        .collect()
}

fn read_series(path: &PathBuf, order: usize) -> Result<FormalFunction<Scalar>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let coeffs = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<LaurentPoly<Scalar>>())
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err(Error::Parse(format!("{}: no coefficients", path.display())));
    }
    Ok(FormalFunction::new(order.max(coeffs.len() - 1), coeffs))
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::H1 { k, max_l, max_i, max_s } => {
            let basis = h1_obstruction_basis(*k, Bounds { max_l: *max_l, max_i: *max_i, max_s: *max_s })?;
            let names: Vec<String> = basis.iter().map(|m| LaurentPoly::<Scalar>::mono(m.l, m.i, m.s).to_string()).collect();
            #[derive(Serialize)]
            struct H1 {
                k: u32,
                bounds: [u32; 3],
                count: usize,
                basis: Vec<String>,
            }
            let mut t = Table::new(["monomial", "l", "i", "s"]);
            for (m, n) in basis.iter().zip(&names) {
                t.push([n.clone(), m.l.to_string(), m.i.to_string(), m.s.to_string()]);
            }
            let report = H1 { k: *k, bounds: [*max_l, *max_i, *max_s], count: names.len(), basis: names };
            output("h1", default_seed(), &report, vec![t], 0)
        }
        Command::StarCheck { k, sigma, trials, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let spec = BivectorSpec::parse(*k, sigma)?;
            let r = star_check(*k, &spec.to_bivector()?, *trials, seed);
            let mut t = Table::new(["sigma", "trials", "associator_failures", "jacobi_failures", "status"]);
            t.push([
                r.sigma.clone(),
                r.trials.to_string(),
                r.associator_failures.to_string(),
                r.jacobi_failures.to_string(),
                mark(r.passed()).to_string(),
            ]);
            output("star-check", seed, &r, vec![t], if r.passed() { 0 } else { 2 })
        }
        Command::Normalize { k, j, sigma, order, f } => {
            let spec = BivectorSpec::parse(*k, sigma)?;
            let series = read_series(f, *order)?;
            let r = normalize_line_bundle(&spec.to_bivector()?, *k, &series, *order)?;
            if r.j != *j {
                return Err(Error::Invalid(format!("f_0 has degree z^{}, expected z^{}", -r.j, -j)));
            }
            let mut t = Table::new(["n", "S_n", "a_n", "alpha_n", "residual"]);
            for n in 0..r.s.len() {
                t.push([
                    (n + 1).to_string(),
                    r.s[n].to_string(),
                    r.a[n].to_string(),
                    r.alpha[n].to_string(),
                    r.residuals[n].to_string(),
                ]);
            }
            output("normalize", default_seed(), &r, vec![t], if r.verified { 0 } else { 2 })
        }
        Command::Stalk { k, j, sigma, point, emit_matrix } => {
            let spec = BivectorSpec::parse(*k, sigma)?;
            let p = parse_point(point)?;
            let r = moduli::stalk_dimension(*k, *j, &spec.to_bivector()?, &p)?;
            let mut t = Table::new(["k", "j", "sigma", "point", "rank", "stalk", "quotient_basis"]);
            t.push([
                k.to_string(),
                j.to_string(),
                r.sigma.clone(),
                p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                r.rank.to_string(),
                r.stalk.to_string(),
                r.quotient_basis.join(" "),
            ]);
            let mut tables = vec![t];
            if *emit_matrix {
                let mut head = vec!["row".to_string()];
                head.extend(r.columns.iter().cloned());
                let mut m = Table::new(head);
                for (label, row) in r.rows.iter().zip(&r.matrix) {
                    let mut line = vec![label.clone()];
                    line.extend(row.iter().cloned());
                    m.push(line);
                }
                tables.push(m);
            }
            output("stalk", default_seed(), &r, tables, 0)
        }
        Command::Stratify { k, j, sigma, strategy, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let spec = BivectorSpec::parse(*k, sigma)?;
            let strategy: Strategy = strategy.parse()?;
            let r = moduli::stratify(*k, *j, &spec.to_bivector()?, strategy, seed)?;
            let mut t = Table::new(["corank", "hits", "support", "witness", "verified"]);
            for s in &r.strata {
                t.push([
                    s.corank.to_string(),
                    s.hits.to_string(),
                    format!("{:?}", s.support),
                    s.witness.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                    s.verified.to_string(),
                ]);
            }
            output("stratify", seed, &r, vec![t], 0)
        }
        Command::Verify { k, j, sigma, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let spec = BivectorSpec::parse(*k, sigma)?;
            let r = moduli::verify_paper_claims(*k, *j, &spec, seed)?;
            let mut t = Table::new(["claim", "expected", "observed", "status", "witnesses"]);
            for c in &r.claims {
                t.push([
                    c.name.clone(),
                    c.expected.clone(),
                    c.observed.clone(),
                    c.status.to_string(),
                    c.witnesses.iter().map(|w| format!("({})", w.join(","))).collect::<Vec<_>>().join(" "),
                ]);
            }
            output("verify", seed, &r, vec![t], r.exit_code() as u8)
        }
        Command::OracleCheck { k, j, sigma, trials, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let spec = BivectorSpec::parse(*k, sigma)?;
            let r = moduli::oracle_check(*k, *j, &spec.to_bivector()?, *trials, seed)?;
            let mut t = Table::new(["trials", "agreements", "engine_true", "oracle_true", "status"]);
            t.push([
                r.trials.len().to_string(),
                r.agreements.to_string(),
                r.engine_true.to_string(),
                r.oracle_true.to_string(),
                mark(r.all_agree()).to_string(),
            ]);
            output("oracle-check", seed, &r, vec![t], if r.all_agree() { 0 } else { 2 })
        }
    }
}

fn render(cli: &Cli, out: &Output) -> Result<String> {
    Ok(match cli.format {
        Format::Json => format!("{}\n", out.json),
        Format::Table => out.tables.iter().map(Table::render).collect::<Vec<_>>().join("\n"),
        Format::Csv => out
            .tables
            .iter()
            .map(Table::to_csv)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Invalid(e.to_string()))?
            .join("\n"),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|out| {
        let text = render(&cli, &out)?;
        match &cli.output {
            Some(path) => fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
