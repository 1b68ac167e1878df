use std::process::exit;
use std::str::FromStr;
use std::time::Duration;

use abc_forge::classes;
use abc_forge::core_arith::{BigNat, FactoringBudget};
use abc_forge::cycles::{self, GeneratorConfig, SolveBounds};
use abc_forge::oracle::OracleTable;
use abc_forge::search_domain;
use abc_forge::triples::{self, AbcTriple, HitRecord, HitStatus, Provenance};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::One;

#[derive(Parser)]
#[command(name = "abc-forge", version, about = "Radical and hit analysis for abc triples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Wall-clock factoring cap in milliseconds.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget_ms: u64,
    /// Trial-division bound before Pollard rho takes over.
    #[arg(long, global = true, default_value_t = 100_000)]
    trial_bound: u64,
    /// Max rho iterations per composite cofactor.
    #[arg(long, global = true, default_value_t = 4_000_000)]
    rho_cap: u64,
    /// Seed for randomized factoring; fixed seed, identical output.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for the oracle scan.
    #[arg(long, global = true, env = "ABC_FORGE_THREADS")]
    threads: Option<usize>,
    /// Size guard: generator candidates above this bit count stay symbolic.
    #[arg(long, global = true, default_value_t = 1_000_000.0)]
    max_bits: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenForm {
    Phi,
    Psi,
}

#[derive(Subcommand)]
enum Command {
    /// Check one triple: exit 0 hit, 1 non-hit, 2 invalid, 3 unknown.
    Verify {
        a: String,
        b: String,
        c: String,
    },
    /// Exhaustive hit scan up to a bound.
    Search {
        bound: u64,
    },
    /// Counting and density statistics up to a bound.
    Stats {
        bound: u64,
    },
    /// Run a recursive hit generator from a base hit.
    Generate {
        #[arg(value_enum)]
        form: GenForm,
        base_a: String,
        base_b: String,
        base_c: String,
        /// Fixed product-kernel side (radical of a).
        #[arg(long, default_value_t = 1)]
        d1: u64,
        /// Second kernel side for phi (radical of b).
        #[arg(long)]
        d2: Option<u64>,
        /// Sum-kernel side for psi (radical of c).
        #[arg(long)]
        d3: Option<u64>,
        #[arg(long, default_value_t = 6)]
        count: usize,
        /// Override the derived congruence modulus.
        #[arg(long)]
        modulus: Option<u64>,
        /// Emit rejected candidates alongside hits.
        #[arg(long)]
        show_rejects: bool,
    },
    /// Class membership, family listing, or certification.
    Class {
        /// List members of the class with this squareful kernel.
        #[arg(long)]
        members: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        limit: u64,
        /// List classes of the family with this radical.
        #[arg(long)]
        family: Option<u64>,
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// Certify a single value as hit-free.
        #[arg(long)]
        certify: Option<String>,
    },
    /// Admissible product-kernel domain of one c.
    Domain {
        c: String,
    },
    /// No-hit certificate: exit 0 when certified, 1 otherwise.
    NoHitCheck {
        c: String,
    },
}

/// Accepts plain decimals and factored forms like `3^10*109`.
fn parse_number(s: &str) -> Result<BigNat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    let mut acc = BigNat::one();
    for part in s.split('*') {
        let part = part.trim();
        let (base, e) = match part.split_once('^') {
            Some((b, e)) => {
                let e: u32 = e
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad exponent in '{part}'"))?;
                (b.trim(), e)
            }
            None => (part, 1),
        };
        let b = BigNat::from_str(base).map_err(|_| format!("bad number '{base}'"))?;
        acc *= b.pow(e);
    }
    Ok(acc)
}

fn must_parse(s: &str) -> BigNat {
    parse_number(s).unwrap_or_else(|e| {
        eprintln!("parse error: {e}");
        exit(64);
    })
}

fn budget_of(cli: &Cli) -> FactoringBudget {
    FactoringBudget {
        trial_division_bound: cli.trial_bound,
        rho_iteration_cap: cli.rho_cap,
        total_time_cap: Duration::from_millis(cli.budget_ms),
        seed: cli.seed,
    }
}

fn json_line<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .ok();
    }
    let budget = budget_of(&cli);
    if budget.validate().is_err() {
        eprintln!("invalid budget flags");
        exit(64);
    }
    match &cli.command {
        Command::Verify { a, b, c } => cmd_verify(&cli, &budget, a, b, c),
        Command::Search { bound } => cmd_search(&cli, &budget, *bound),
        Command::Stats { bound } => cmd_stats(&cli, *bound),
        Command::Generate {
            form,
            base_a,
            base_b,
            base_c,
            d1,
            d2,
            d3,
            count,
            modulus,
            show_rejects,
        } => cmd_generate(
            &cli,
            &budget,
            *form,
            (base_a, base_b, base_c),
            *d1,
            *d2,
            *d3,
            *count,
            *modulus,
            *show_rejects,
        ),
        Command::Class {
            members,
            limit,
            family,
            count,
            certify,
        } => cmd_class(&cli, &budget, *members, *limit, *family, *count, certify.as_deref()),
        Command::Domain { c } => cmd_domain(&cli, &budget, c),
        Command::NoHitCheck { c } => cmd_no_hit_check(&cli, &budget, c),
    }
}

fn cmd_verify(cli: &Cli, budget: &FactoringBudget, a: &str, b: &str, c: &str) {
    let (a, b, c) = (must_parse(a), must_parse(b), must_parse(c));
    let triple = match AbcTriple::validate(a, b, c) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("invalid triple: {e}");
            exit(2);
        }
    };
    let rec = HitRecord::build(&triple, budget, Provenance::External);
    match cli.format {
        Format::Json => json_line(&rec),
        _ => {
            println!("a = {}", rec.a);
            println!("b = {}", rec.b);
            println!("c = {}", rec.c);
            match (&rec.d1, &rec.d2, &rec.d3) {
                (Some(d1), Some(d2), Some(d3)) => {
                    println!("kernels: d1 = {d1}, d2 = {d2}, d3 = {d3}");
                }
                _ => println!("kernels: not fully factored within budget"),
            }
            if let Some(q) = rec.quality {
                println!("quality = {q:.5}");
            }
            if let Ok(sf) = triples::standard_form(&triple, budget) {
                println!(
                    "standard form: {}*{} + {}*{} = {}*{}",
                    sf.d1, sf.qa, sf.d2, sf.qb, sf.d3, sf.qc
                );
            }
            println!(
                "hit: {}",
                match rec.verified {
                    HitStatus::Yes => "yes",
                    HitStatus::No => "no",
                    HitStatus::Unknown => "unknown",
                }
            );
        }
    }
    match rec.verified {
        HitStatus::Yes => exit(0),
        HitStatus::No => exit(1),
        HitStatus::Unknown => exit(3),
    }
}

fn cmd_search(cli: &Cli, budget: &FactoringBudget, bound: u64) {
    let table = OracleTable::build(bound);
    match cli.format {
        Format::Csv => print!("{}", table.export_csv(false)),
        Format::Json => {
            for &c in &table.exceptions() {
                for rec in table.hits_for(c, budget) {
                    json_line(&rec);
                }
            }
        }
        Format::Table => {
            println!("hits with c <= {bound}: {}", table.cumulative_hits(bound));
            println!("distinct exceptional c: {}", table.exceptions().len());
            for &c in &table.exceptions() {
                let parts: Vec<String> = table
                    .raw_hits(c)
                    .iter()
                    .map(|&a| format!("({a}, {}, {c})", c - a))
                    .collect();
                println!("c = {c}: H = {} {}", table.h(c), parts.join(" "));
            }
        }
    }
}

fn cmd_stats(cli: &Cli, bound: u64) {
    let table = OracleTable::build(bound);
    let density = table.density_report();
    let totient = table.totient_checks();
    match cli.format {
        Format::Json => {
            json_line(&serde_json::json!({
                "density": density,
                "totient": totient,
            }));
        }
        _ => {
            println!("bound: {bound}");
            println!("cumulative hits: {}", density.cumulative_hits);
            println!("distinct exceptions: {}", density.distinct_exceptions);
            println!("hit density: {:.6}", density.hit_density);
            println!("squarefree density: {:.6}", density.squarefree_density);
            println!("pair-count asymptotic ratio: {:.4}", totient.asymptotic_ratio);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    cli: &Cli,
    budget: &FactoringBudget,
    form: GenForm,
    base: (&str, &str, &str),
    d1: u64,
    d2: Option<u64>,
    d3: Option<u64>,
    count: usize,
    modulus: Option<u64>,
    show_rejects: bool,
) {
    let (a, b, c) = (must_parse(base.0), must_parse(base.1), must_parse(base.2));
    let triple = match AbcTriple::validate(a, b, c) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("invalid base triple: {e}");
            exit(2);
        }
    };
    let rec = HitRecord::build(&triple, budget, Provenance::External);
    if rec.verified != HitStatus::Yes {
        eprintln!("base triple is not a verified hit");
        exit(2);
    }
    let cfg = GeneratorConfig {
        modulus,
        max_bits: cli.max_bits,
        bounds: SolveBounds::default(),
        pop_cap: 200_000,
        budget: budget.clone(),
    };
    let stream = match form {
        GenForm::Phi => {
            let d2 = d2.unwrap_or_else(|| {
                eprintln!("--d2 is required for phi");
                exit(64);
            });
            cycles::phi_sequence(&rec, d1, d2, count, &cfg)
        }
        GenForm::Psi => {
            let d3 = d3.unwrap_or_else(|| {
                eprintln!("--d3 is required for psi");
                exit(64);
            });
            cycles::psi_sequence(&rec, d1, d3, count, &cfg)
        }
    };
    let stream = match stream {
        Ok(s) => s,
        Err(e) => {
            eprintln!("generator failed: {e}");
            exit(2);
        }
    };
    let shown: Vec<_> = stream
        .iter()
        .filter(|g| show_rejects || g.is_hit())
        .collect();
    match cli.format {
        Format::Json => {
            for g in &shown {
                json_line(g);
            }
            json_line(&serde_json::json!({
                "growth_report": cycles::growth_report(&stream)
            }));
        }
        _ => {
            for g in &shown {
                match &g.record {
                    Some(rec) => {
                        let status = serde_json::to_value(g).unwrap();
                        println!(
                            "{} ({}, {}, {})",
                            status["status"].as_str().unwrap_or("?"),
                            rec.a,
                            rec.b,
                            rec.c
                        );
                    }
                    None => println!("candidate near 2^{:.0} (symbolic)", g.approx_bits),
                }
            }
            let report = cycles::growth_report(&stream);
            println!(
                "members: {}, cofactor increases: {}, violations: {}",
                report.members, report.cofactor_increases, report.cofactor_violations
            );
        }
    }
}

fn cmd_class(
    cli: &Cli,
    budget: &FactoringBudget,
    members: Option<u64>,
    limit: u64,
    family: Option<u64>,
    count: usize,
    certify: Option<&str>,
) {
    if let Some(q) = members {
        let list = classes::class_members(q, limit);
        let certs: Vec<_> = list
            .iter()
            .map(|&c| classes::certify_no_hit(&BigNat::from(c), budget))
            .collect();
        match cli.format {
            Format::Json => json_line(&serde_json::json!({
                "Q": q.to_string(),
                "members": list.iter().map(u64::to_string).collect::<Vec<_>>(),
                "certificates": certs,
            })),
            _ => {
                println!("class {q}, members <= {limit}: {list:?}");
                for cert in certs {
                    println!("  c = {}: {:?}", cert.c, cert.reason);
                }
            }
        }
        return;
    }
    if let Some(q) = family {
        match classes::family_classes(q, count) {
            Ok(vs) => match cli.format {
                Format::Json => json_line(&serde_json::json!({
                    "q": q.to_string(),
                    "classes": vs.iter().map(u64::to_string).collect::<Vec<_>>(),
                })),
                _ => println!("family {q}: {vs:?}"),
            },
            Err(e) => {
                eprintln!("{e}");
                exit(64);
            }
        }
        return;
    }
    if let Some(c) = certify {
        let c = must_parse(c);
        let cert = classes::certify_no_hit(&c, budget);
        match cli.format {
            Format::Json => json_line(&cert),
            _ => println!("c = {}: {:?}", cert.c, cert.reason),
        }
        return;
    }
    eprintln!("one of --members, --family or --certify is required");
    exit(64);
}

fn cmd_domain(cli: &Cli, budget: &FactoringBudget, c: &str) {
    let c = must_parse(c);
    match search_domain::search_domain(&c, budget) {
        Ok(report) => {
            let counts = search_domain::equation_count(&report);
            match cli.format {
                Format::Json => json_line(&serde_json::json!({
                    "report": report,
                    "equation_count": counts,
                })),
                _ => {
                    println!("c = {}, Q = {}, G = {}", report.c, report.q_part, report.g);
                    println!("domain: {:?}", report.domain);
                    println!("excluded: {:?}", report.excluded);
                    println!("equations: {}", counts.total);
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            exit(2);
        }
    }
}

fn cmd_no_hit_check(cli: &Cli, budget: &FactoringBudget, c: &str) {
    let c = must_parse(c);
    let cert = classes::certify_no_hit(&c, budget);
    match cli.format {
        Format::Json => json_line(&cert),
        _ => println!("c = {}: {:?}", cert.c, cert.reason),
    }
    exit(if cert.certified() { 0 } else { 1 });
}
