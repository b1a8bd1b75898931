use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use branchcover::arith::Poly;
use branchcover::class_group::{
    class_group_generic, class_group_of_quadratic_field, class_group_quadratic, ClassGroup, RelationConfig,
};
use branchcover::cyclotomic::herbrand_ribet_report;
use branchcover::field::{minkowski_bound, NumberField};
use branchcover::report::{self, catalog, Entry};
use branchcover::torsion::verify_certificate;
use branchcover::Error;

#[derive(Parser)]
#[command(name = "branchcover", version, about = "Class-group torsion from specialized superelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a parameter range and write the configured sinks.
    Scan(ScanArgs),
    /// Maximal order and class group of Q[x]/(f).
    Field {
        /// Descending coefficients, e.g. `1,0,-5`.
        poly: String,
        #[arg(long = "budget.relations")]
        relations: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Class group of a fundamental discriminant from reduced forms.
    Classgroup {
        #[arg(short = 'd', allow_hyphen_values = true)]
        d: BigInt,
    },
    /// Bernoulli numbers, irregular pairs and h^- for an odd prime.
    Bernoulli {
        #[arg(short = 'p')]
        p: u64,
    },
    /// Re-verify every certificate stored in a catalog.
    Certify {
        #[arg(long)]
        catalog: PathBuf,
        /// Restrict to one field key.
        #[arg(long)]
        key: Option<String>,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "curve.m")]
    curve_m: Option<String>,
    #[arg(long = "curve.f", allow_hyphen_values = true)]
    curve_f: Option<String>,
    #[arg(long = "scan.range", allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long = "budget.factor")]
    factor: Option<String>,
    #[arg(long = "budget.principality")]
    principality: Option<String>,
    #[arg(long = "budget.relations")]
    relations: Option<String>,
    #[arg(long = "out.csv")]
    csv: Option<String>,
    #[arg(long = "out.catalog")]
    catalog: Option<String>,
    #[arg(long = "out.report")]
    report: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 3,
        Error::Contract(_) => 4,
        _ => 2,
    }
}

fn fail(e: Error) -> ExitCode {
    match &e {
        Error::Parse { line: 0, message, .. } => eprintln!("error: command line: {}", message),
        _ => eprintln!("error: {}", e),
    }
    ExitCode::from(exit_code(&e))
}

fn scan(args: ScanArgs) -> Result<ExitCode, Error> {
    let entries = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {}", p.display(), e)))?;
            report::parse_entries(&text)?
        }
        None => Vec::new(),
    };
    let flags = [
        ("curve.m", &args.curve_m),
        ("curve.f", &args.curve_f),
        ("scan.range", &args.range),
        ("scan.seed", &args.seed),
        ("budget.factor", &args.factor),
        ("budget.principality", &args.principality),
        ("budget.relations", &args.relations),
        ("out.csv", &args.csv),
        ("out.catalog", &args.catalog),
        ("out.report", &args.report),
    ];
    let overrides: Vec<Entry> = flags
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| Entry::flag(k, v)))
        .collect();
    let config = report::build_config(&entries, &overrides)?;
    let outcome = report::run_pipeline(&config)?;
    let r = outcome.report();
    println!("curve {} (genus {}), t in {}..{}", r.curve, r.genus, r.lo, r.hi);
    for w in &r.warnings {
        println!("warning: {}", w);
    }
    for (status, n) in &r.counts.by_status {
        println!("  {:<17}{}", status, n);
    }
    println!(
        "certificates {}: {} of exact order > 1, {} undecided",
        r.counts.certificates, r.counts.nontrivial, r.counts.undecided
    );
    if config.csv.is_none() && config.report.is_none() {
        print!("{}", report::csv_text(r));
    }
    if outcome.contract_violations() > 0 {
        eprintln!("error: {} rows violated an internal contract", outcome.contract_violations());
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_group(cg: &ClassGroup) {
    let inv: Vec<String> = cg.invariants.iter().map(|d| d.to_string()).collect();
    println!(
        "class group: [{}], h = {} ({:?})",
        inv.join(", "),
        cg.class_number(),
        cg.certification
    );
    for (g, d) in cg.generators.iter().zip(&cg.invariants) {
        println!("  generator of order {}: {:?}", d, g);
    }
}

fn field(poly: &str, relations: Option<u64>, seed: u64) -> Result<ExitCode, Error> {
    let f = Poly::parse_descending(poly).map_err(|message| Error::Parse {
        line: 1,
        column: 1,
        message,
    })?;
    let k = Arc::new(NumberField::new(&f)?);
    let (r1, r2) = k.signature();
    println!("field Q[x]/({})", f);
    println!("degree {}, signature ({}, {})", k.degree(), r1, r2);
    println!("polynomial discriminant {}", k.poly_disc());
    println!("field discriminant {}", k.field_disc());
    println!("index [O_K : Z[x]] = {}", k.index());
    let (basis, den) = k.integral_basis();
    println!("integral basis (rows / {}, power-basis coordinates):", den);
    for row in basis.row_vecs() {
        let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("  [{}]", r.join(", "));
    }
    println!("Minkowski bound {:.4}", minkowski_bound(&k).to_f64().unwrap_or(f64::INFINITY));
    let cg = if k.degree() == 2 {
        class_group_of_quadratic_field(&k)
    } else {
        let mut cfg = relations.map(RelationConfig::with_budget).unwrap_or_default();
        cfg.seed = seed;
        class_group_generic(&k, &cfg)
    };
    match cg {
        Ok(cg) => print_group(&cg),
        Err(e @ Error::Incomplete(_)) => println!("class group: {}", e),
        Err(e) => return Err(e),
    }
    Ok(ExitCode::SUCCESS)
}

fn classgroup(d: &BigInt) -> Result<ExitCode, Error> {
    let cg = class_group_quadratic(d)?;
    println!("discriminant {}", d);
    print_group(&cg);
    Ok(ExitCode::SUCCESS)
}

fn bernoulli(p: u64) -> Result<ExitCode, Error> {
    let r = herbrand_ribet_report(p, None)?;
    println!("{}", r.summary);
    for line in &r.lines {
        println!("  {}", line);
    }
    Ok(ExitCode::SUCCESS)
}

fn certify(path: &PathBuf, key: Option<&str>) -> Result<ExitCode, Error> {
    let records = catalog::compact(catalog::load(path)?);
    let mut failures = 0;
    let mut checked = 0;
    for r in records.iter().filter(|r| key.map_or(true, |k| r.key == k)) {
        for c in &r.certificates {
            checked += 1;
            match verify_certificate(c) {
                Ok(()) => println!("ok   {} t={} q={} order {}", c.id(), c.t, c.q, c.order.proven_order),
                Err(e) => {
                    failures += 1;
                    println!("FAIL {} t={} q={}: {}", c.id(), c.t, c.q, e);
                }
            }
        }
    }
    println!("{} certificates checked, {} failed", checked, failures);
    Ok(if failures > 0 { ExitCode::from(4) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan(args) => scan(args),
        Command::Field { poly, relations, seed } => field(&poly, relations, seed),
        Command::Classgroup { d } => classgroup(&d),
        Command::Bernoulli { p } => bernoulli(p),
        Command::Certify { catalog, key } => certify(&catalog, key.as_deref()),
    };
    result.unwrap_or_else(fail)
}
