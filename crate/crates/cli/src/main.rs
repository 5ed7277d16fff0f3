//! Command-line surface for the term-counting toolkit: compute and print
//! exact count tables, cross-verify the independent routes against the
//! brute-force oracle, evaluate asymptotic constants and bounds, and sample
//! uniform random terms.
//!
//! Exit codes: 0 success, 1 verification or internal failure, 2 usage error.

mod cache;
mod render;

use cache::{cache_load, cache_store, CacheEntry, CacheFile, CacheValue, SpotCheck};
use clap::{Parser, Subcommand, ValueEnum};
use lambdacount::asymptotics::{
    bci1_growth_log, compute_ap, compute_bp, compute_bp_eml, eml_base_constant, lambda_bounds,
    lambert_w, ln_bigint, BciConstants,
};
use lambdacount::exactnum::BigInt;
use lambdacount::oracle::{from_debruijn, to_debruijn, Constraint, Oracle};
use lambdacount::sampler::{sample_bci, sample_closed, SamplerState};
use lambdacount::sequences::{
    alpha, bci_counts, bci_phi, bck_counts, bck_counts_bivar, bck_counts_delta, catalan,
    closed_counts, closed_counts_debruijn, closed_counts_indirect, delta_direct, delta_fast,
    delta_fast_validation, motzkin_bivar, motzkin_leaf_bounded, motzkin_table, q_poly, zeta,
    CountTable, TnkTable,
};
use num_traits::Zero;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "lambdacount",
    version,
    about = "Exact counting, asymptotics and uniform random generation for closed lambda-terms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact counting sequence of a family
    Count {
        /// Family to count
        #[arg(long)]
        family: CountFamily,
        /// Pointer bound, required for the p-indexed families
        #[arg(long)]
        p: Option<u32>,
        /// Largest size (index) to print
        #[arg(long)]
        max_size: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Cache directory; also settable via LAMBDACOUNT_CACHE_DIR
        #[arg(long, env = "LAMBDACOUNT_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
        /// Disable the cache even if a directory is configured
        #[arg(long)]
        no_cache: bool,
    },
    /// Run the route-equivalence and oracle cross-checks
    Verify {
        /// Largest size for brute-force oracle comparisons
        #[arg(long, default_value_t = 10)]
        max_size: u64,
        /// Largest size for route-vs-route comparisons
        #[arg(long, default_value_t = 60)]
        route_size: u64,
        /// Comma-separated subset of checks (prefix match); default all
        #[arg(long)]
        families: Option<String>,
    },
    /// Evaluate growth constants, estimates and bounds
    Asymptotics {
        #[arg(long)]
        family: AsymFamily,
        #[arg(long)]
        p: Option<u32>,
        /// Size at which to evaluate (bci1 and closed)
        #[arg(long)]
        n: Option<u64>,
        /// Slack parameter of the upper bound (closed)
        #[arg(long)]
        epsilon: Option<f64>,
        /// Exact terms feeding the constant estimates
        #[arg(long, default_value_t = 400)]
        terms: u64,
    },
    /// Sample uniformly random terms
    Sample {
        #[arg(long)]
        family: SampleFamily,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        size: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TermFormat::Debruijn)]
        format: TermFormat,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CountFamily {
    Catalan,
    Motzkin,
    MotzkinLeafBounded,
    Bci,
    BciLinearized,
    Bck,
    Closed,
    ClosedDebruijn,
}

impl CountFamily {
    fn name(&self) -> &'static str {
        match self {
            CountFamily::Catalan => "catalan",
            CountFamily::Motzkin => "motzkin",
            CountFamily::MotzkinLeafBounded => "motzkin-leaf-bounded",
            CountFamily::Bci => "bci",
            CountFamily::BciLinearized => "bci-linearized",
            CountFamily::Bck => "bck",
            CountFamily::Closed => "closed",
            CountFamily::ClosedDebruijn => "closed-debruijn",
        }
    }

    fn needs_p(&self) -> bool {
        matches!(
            self,
            CountFamily::MotzkinLeafBounded
                | CountFamily::Bci
                | CountFamily::BciLinearized
                | CountFamily::Bck
        )
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AsymFamily {
    /// constants of the exactly-p family (p >= 2)
    Bci,
    /// growth shape of the exactly-one family
    Bci1,
    /// two-sided bounds for closed terms
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFamily {
    Closed,
    Bci,
}

#[derive(Clone, Copy, ValueEnum)]
enum TermFormat {
    Debruijn,
    Named,
    Json,
    Dot,
}

/// Error carrying the process exit code.
enum AppError {
    Usage(String),
    Internal(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Internal(m) => m,
        }
    }
}

fn internal<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Internal(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Count {
            family,
            p,
            max_size,
            format,
            cache_dir,
            no_cache,
        } => cmd_count(family, p, max_size, format, cache_dir.filter(|_| !no_cache)),
        Command::Verify {
            max_size,
            route_size,
            families,
        } => cmd_verify(max_size, route_size, families),
        Command::Asymptotics {
            family,
            p,
            n,
            epsilon,
            terms,
        } => cmd_asymptotics(family, p, n, epsilon, terms),
        Command::Sample {
            family,
            p,
            size,
            count,
            seed,
            format,
        } => cmd_sample(family, p, size, count, seed, format),
    }
}

// ---------------------------------------------------------------- count --

/// Computes the table values `(index, count)` for printing; indices start
/// at 0 for the Catalan family and at 1 for everything else.
fn compute_family(
    family: CountFamily,
    p: Option<u32>,
    max_size: u64,
) -> Result<Vec<(u64, BigInt)>, AppError> {
    let table_values = |t: &CountTable| -> Vec<(u64, BigInt)> {
        (1..=max_size).map(|n| (n, t.get_or_zero(n))).collect()
    };
    Ok(match family {
        CountFamily::Catalan => (0..=max_size).map(|n| (n, catalan(n))).collect(),
        CountFamily::Motzkin => {
            let m = motzkin_table(max_size.max(1));
            (1..=max_size).map(|n| (n, m[n as usize].clone())).collect()
        }
        CountFamily::MotzkinLeafBounded => {
            let p = u64::from(p.unwrap());
            let m = motzkin_bivar(max_size.max(1), p);
            (1..=max_size)
                .map(|n| (n, motzkin_leaf_bounded(&m, n, p)))
                .collect()
        }
        CountFamily::Bci => {
            let p = p.unwrap();
            let j_max = (max_size + 1) / (2 * u64::from(p) + 1);
            let t = bci_counts(p, j_max.max(1)).map_err(internal)?;
            table_values(&t)
        }
        CountFamily::BciLinearized => {
            let p = p.unwrap();
            let j_max = (max_size + 1) / (2 * u64::from(p) + 1);
            let t = lambdacount::sequences::linearized_counts(p, j_max.max(1))
                .map_err(internal)?;
            table_values(&t)
        }
        CountFamily::Bck => {
            let t = bck_counts(p.unwrap(), max_size).map_err(internal)?;
            table_values(&t)
        }
        CountFamily::Closed => {
            let t = if max_size > 400 {
                closed_counts_indirect(max_size).map_err(internal)?
            } else {
                closed_counts(max_size).map_err(internal)?
            };
            table_values(&t)
        }
        CountFamily::ClosedDebruijn => {
            if max_size > 1500 {
                return Err(AppError::Usage(
                    "closed-debruijn holds a quadratic table; use --family closed beyond 1500"
                        .into(),
                ));
            }
            let (t, _) = closed_counts_debruijn(max_size).map_err(internal)?;
            table_values(&t)
        }
    })
}

fn cmd_count(
    family: CountFamily,
    p: Option<u32>,
    max_size: u64,
    format: OutputFormat,
    cache_dir: Option<PathBuf>,
) -> Result<(), AppError> {
    if family.needs_p() && p.is_none() {
        return Err(AppError::Usage(format!(
            "--p is required for --family {}",
            family.name()
        )));
    }
    if !family.needs_p() && p.is_some() {
        return Err(AppError::Usage(format!(
            "--p does not apply to --family {}",
            family.name()
        )));
    }
    if max_size == 0 {
        return Err(AppError::Usage("--max-size must be at least 1".into()));
    }
    if let Some(pv) = p {
        if pv == 0 {
            return Err(AppError::Usage("--p must be at least 1".into()));
        }
    }

    let values = match cache_dir {
        None => compute_family(family, p, max_size)?,
        Some(dir) => cached_family(&dir, family, p, max_size)?,
    };

    match format {
        OutputFormat::Text => {
            for (n, v) in &values {
                println!("{n}\t{v}");
            }
        }
        OutputFormat::Csv => {
            for (n, v) in &values {
                println!("{n},{v}");
            }
        }
        OutputFormat::Json => {
            let json = serde_json::json!({
                "family": family.name(),
                "p": p,
                "values": values
                    .iter()
                    .map(|(n, v)| serde_json::json!({"n": n, "count": v.to_string()}))
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
    }
    Ok(())
}

/// Spot-check recomputation is capped: verifying a sampled cache entry
/// rebuilds its family table up to that index, so only moderate indices are
/// re-derived on load.
const SPOT_RECHECK_MAX: u64 = 256;

fn cache_file_name(family: CountFamily, p: Option<u32>) -> String {
    match p {
        Some(p) => format!("{}_p{p}.json", family.name()),
        None => format!("{}.json", family.name()),
    }
}

fn recompute_for_spot_check(family: &str, p: Option<u32>, n: u64) -> Option<BigInt> {
    if n > SPOT_RECHECK_MAX {
        return None;
    }
    let fam = match family {
        "catalan" => CountFamily::Catalan,
        "motzkin" => CountFamily::Motzkin,
        "motzkin-leaf-bounded" => CountFamily::MotzkinLeafBounded,
        "bci" => CountFamily::Bci,
        "bci-linearized" => CountFamily::BciLinearized,
        "bck" => CountFamily::Bck,
        "closed" => CountFamily::Closed,
        "closed-debruijn" => CountFamily::ClosedDebruijn,
        _ => return None,
    };
    let values = compute_family(fam, p, n).ok()?;
    values.into_iter().find(|(i, _)| *i == n).map(|(_, v)| v)
}

fn cached_family(
    dir: &std::path::Path,
    family: CountFamily,
    p: Option<u32>,
    max_size: u64,
) -> Result<Vec<(u64, BigInt)>, AppError> {
    let path = dir.join(cache_file_name(family, p));
    if path.exists() {
        let file = cache_load(&path, SpotCheck::Fraction(0.01), recompute_for_spot_check)
            .map_err(internal)?;
        if let Some(entry) = file
            .entries
            .iter()
            .find(|e| e.family == family.name() && e.p == p)
        {
            if entry.max_index() >= Some(max_size) {
                let mut out = Vec::new();
                let start = if family == CountFamily::Catalan { 0 } else { 1 };
                for n in start..=max_size {
                    let v = match entry.get(n) {
                        Some(s) => BigInt::from_str(s).map_err(internal)?,
                        None => BigInt::zero(),
                    };
                    out.push((n, v));
                }
                return Ok(out);
            }
        }
    }
    // compute fresh beyond the cached range, then persist the longer table
    let values = compute_family(family, p, max_size)?;
    let entry = CacheEntry {
        family: family.name().to_string(),
        p,
        route: "count".to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        values: values
            .iter()
            .map(|(n, v)| CacheValue {
                n: *n,
                count: v.to_string(),
            })
            .collect(),
    };
    let file = CacheFile {
        format_version: cache::FORMAT_VERSION,
        entries: vec![entry],
    };
    cache_store(&path, &file).map_err(internal)?;
    Ok(values)
}

// --------------------------------------------------------------- verify --

struct CheckOutcome {
    name: &'static str,
    result: Result<String, String>,
}

fn cmd_verify(max_size: u64, route_size: u64, families: Option<String>) -> Result<(), AppError> {
    let wanted: Option<Vec<String>> =
        families.map(|f| f.split(',').map(|s| s.trim().to_string()).collect());
    let selected = |name: &str| -> bool {
        match &wanted {
            None => true,
            Some(list) => list.iter().any(|w| name.starts_with(w.as_str())),
        }
    };

    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    let mut run_check = |name: &'static str, f: &dyn Fn() -> Result<String, String>| {
        if selected(name) {
            outcomes.push(CheckOutcome { name, result: f() });
        }
    };

    let oracle = Oracle::with_cap(max_size.max(14));

    run_check("closed-vs-oracle", &|| {
        let grafting = closed_counts(max_size).map_err(|e| e.to_string())?;
        let indirect = closed_counts_indirect(max_size).map_err(|e| e.to_string())?;
        let (debruijn, _) = closed_counts_debruijn(max_size).map_err(|e| e.to_string())?;
        for n in 1..=max_size {
            let reference = oracle
                .count_terms(n, Constraint::Closed)
                .map_err(|e| e.to_string())?;
            for (route, t) in [
                ("grafting", &grafting),
                ("substitution", &indirect),
                ("debruijn", &debruijn),
            ] {
                if t.get(n) != Some(&reference) {
                    return Err(format!("first disagreement: {route} at n={n}"));
                }
            }
        }
        Ok(format!("3 routes == oracle for n <= {max_size}"))
    });

    run_check("bci-vs-oracle", &|| {
        for p in 1..=2u32 {
            let step = 2 * u64::from(p) + 1;
            let j_max = (max_size + 1) / step;
            if j_max == 0 {
                continue;
            }
            let t = bci_counts(p, j_max).map_err(|e| e.to_string())?;
            for j in 1..=j_max {
                let n = step * j - 1;
                let reference = oracle
                    .count_terms(n, Constraint::ExactlyP(p))
                    .map_err(|e| e.to_string())?;
                if t.get(n) != Some(&reference) {
                    return Err(format!("first disagreement: p={p}, n={n}"));
                }
            }
        }
        Ok(format!("p=1,2 on the support up to {max_size}"))
    });

    run_check("bck-vs-oracle", &|| {
        for p in 1..=2u32 {
            let t = bck_counts(p, max_size).map_err(|e| e.to_string())?;
            for n in 1..=max_size {
                let reference = oracle
                    .count_terms(n, Constraint::AtMostP(p))
                    .map_err(|e| e.to_string())?;
                if t.get(n) != Some(&reference) {
                    return Err(format!("first disagreement: p={p}, n={n}"));
                }
            }
        }
        Ok(format!("p=1,2 for n <= {max_size}"))
    });

    run_check("closed-routes", &|| {
        let grafting = closed_counts(route_size).map_err(|e| e.to_string())?;
        let indirect = closed_counts_indirect(route_size).map_err(|e| e.to_string())?;
        let (debruijn, _) = closed_counts_debruijn(route_size).map_err(|e| e.to_string())?;
        for n in 1..=route_size {
            if grafting.get(n) != indirect.get(n) || grafting.get(n) != debruijn.get(n) {
                return Err(format!("first disagreement at n={n}"));
            }
        }
        Ok(format!(
            "3 routes agree for n <= {route_size} ({})",
            grafting.route()
        ))
    });

    run_check("bck-routes", &|| {
        let n = route_size.min(80);
        for p in 1..=3u32 {
            bck_counts_bivar(p, n).map_err(|e| e.to_string())?;
            bck_counts_delta(p, n).map_err(|e| e.to_string())?;
        }
        Ok(format!("3 routes agree for p <= 3, n <= {n}"))
    });

    run_check("delta-fast", &|| match delta_fast_validation() {
        Ok(()) => {
            for n in 2..=60u64 {
                for l in 1..n {
                    let fast = delta_fast(n, l).map_err(|e| e.to_string())?;
                    let direct = delta_direct(n, l, None).map_err(|e| e.to_string())?;
                    if fast != direct {
                        return Err(format!("first disagreement at (n={n}, l={l})"));
                    }
                }
            }
            Ok("recurrence == direct sums for n <= 60".to_string())
        }
        Err(e) => Ok(format!("fast path disabled and reported: {e}")),
    });

    run_check("identities", &|| {
        for p in 1..=8u32 {
            for l in 1..=p {
                alpha(l, p).map_err(|e| e.to_string())?;
            }
            for n in 1..=60u64 {
                q_poly(p, n).map_err(|e| e.to_string())?;
            }
        }
        for s in 0..=30u64 {
            for r in 0..=s / 2 {
                zeta(s, r).map_err(|e| e.to_string())?;
            }
        }
        Ok("alpha, Q and zeta dual routes agree".to_string())
    });

    let mut failed = false;
    for o in &outcomes {
        match &o.result {
            Ok(msg) => println!("check {:<18} PASS  {msg}", o.name),
            Err(msg) => {
                failed = true;
                println!("check {:<18} FAIL  {msg}", o.name);
            }
        }
    }
    if outcomes.is_empty() {
        return Err(AppError::Usage("no checks selected".into()));
    }
    if failed {
        return Err(AppError::Internal("verification failed".into()));
    }
    Ok(())
}

// --------------------------------------------------------- asymptotics --

fn cmd_asymptotics(
    family: AsymFamily,
    p: Option<u32>,
    n: Option<u64>,
    epsilon: Option<f64>,
    terms: u64,
) -> Result<(), AppError> {
    match family {
        AsymFamily::Bci => {
            let p = p.ok_or_else(|| AppError::Usage("--p is required for --family bci".into()))?;
            if p < 2 {
                return Err(AppError::Usage(
                    "constants converge for p >= 2; use --family bci1 for p = 1".into(),
                ));
            }
            let phi = bci_phi(p, terms + 1).map_err(internal)?;
            let est = compute_ap(&phi, terms as usize).map_err(internal)?;
            let constants = BciConstants::compute(&phi, terms as usize).map_err(internal)?;
            println!("family bci, p = {p}");
            println!("beta          = {:.10}", constants.beta_p);
            println!("gamma         = {:.10}", constants.gamma_p);
            println!("B (product)   = {:.10}", compute_bp(p));
            println!("B (integral)  = {:.10}", compute_bp_eml(p));
            println!("  integral base constant = {:.12}", eml_base_constant());
            println!(
                "a (partial)   = {:.10}  [{} exact factors]",
                est.partial, est.n_terms
            );
            println!("a (corrected) = {:.10}", est.value);
            println!("A = a * B     = {:.10}", constants.big_a_p);
            println!("last factor rel change = {:.3e}", est.last_rel_change);
            println!(
                "stirling form: bar_beta = {:.10}, bar_gamma = {:.6}, bar_A = {:.10}",
                constants.bar_beta_p, constants.bar_gamma_p, constants.bar_a_p
            );
        }
        AsymFamily::Bci1 => {
            let n =
                n.ok_or_else(|| AppError::Usage("--n is required for --family bci1".into()))?;
            if n % 3 != 2 {
                return Err(AppError::Usage(format!(
                    "size {n} is off the support (sizes are 2 mod 3)"
                )));
            }
            let j = (n + 1) / 3;
            let phi = bci_phi(1, j).map_err(internal)?;
            let growth = bci1_growth_log(n).map_err(internal)?;
            println!("family bci1, size n = {n}");
            println!("growth exponent (log scale, constant-free) = {growth:.6}");
            let exact = ln_bigint(phi.phi(j as usize));
            println!("exact log count                            = {exact:.6}");
            println!(
                "fitted constant C (ratio at n, empirical)  = {:.6}",
                (exact - growth).exp()
            );
            let j0 = (j / 2).max(1);
            let r0 =
                (ln_bigint(phi.phi(j0 as usize)) - bci1_growth_log(3 * j0 - 1).unwrap()).exp();
            println!(
                "ratio drift from n={} to n={n}             = {:+.4}%",
                3 * j0 - 1,
                ((exact - growth).exp() / r0 - 1.0) * 100.0
            );
        }
        AsymFamily::Closed => {
            let n =
                n.ok_or_else(|| AppError::Usage("--n is required for --family closed".into()))?;
            if n < 3 {
                return Err(AppError::Usage("--n must be at least 3".into()));
            }
            let eps = epsilon.unwrap_or(0.1);
            if eps <= 0.0 {
                return Err(AppError::Usage("--epsilon must be positive".into()));
            }
            let table = if n > 400 {
                closed_counts_indirect(n).map_err(internal)?
            } else {
                closed_counts(n).map_err(internal)?
            };
            let log_lambda = ln_bigint(table.get(n).unwrap());
            let report = lambda_bounds(n, eps, log_lambda);
            println!("family closed, n = {n}, epsilon = {eps}");
            println!("log lambda_n     = {:.6}", report.log_lambda);
            println!("lower exponent   = {:.6}  (+ log c1)", report.lower_exponent);
            println!("upper exponent   = {:.6}  (+ log c2)", report.upper_exponent);
            let nf = n as f64;
            let corridor = 2.0 / nf * log_lambda - (nf / nf.ln()).ln();
            println!("corridor value (2/n) log lambda - log(n/log n) = {corridor:.6}");
            println!(
                "lambert W(e n)   = {:.6}",
                lambert_w(std::f64::consts::E * nf)
            );
        }
    }
    Ok(())
}

// -------------------------------------------------------------- sample --

fn cmd_sample(
    family: SampleFamily,
    p: Option<u32>,
    size: u64,
    count: u64,
    seed: u64,
    format: TermFormat,
) -> Result<(), AppError> {
    let mut state = SamplerState::new(seed);
    match family {
        SampleFamily::Closed => {
            if p.is_some() {
                return Err(AppError::Usage(
                    "--p does not apply to --family closed".into(),
                ));
            }
            if size < 2 {
                return Err(AppError::Usage(format!(
                    "no closed terms of size {size}; the count there is zero"
                )));
            }
            let tnk = TnkTable::new(size);
            for i in 0..count {
                let term = sample_closed(size, &tnk, &mut state).map_err(internal)?;
                print_term(&term, format, i)?;
            }
        }
        SampleFamily::Bci => {
            let p = p.ok_or_else(|| AppError::Usage("--p is required for --family bci".into()))?;
            if p == 0 {
                return Err(AppError::Usage("--p must be at least 1".into()));
            }
            let step = 2 * u64::from(p) + 1;
            if !(size + 1).is_multiple_of(step) || size == 0 {
                return Err(AppError::Usage(format!(
                    "no terms of size {size} for p={p}; sizes are {step}j - 1, so the count there is zero"
                )));
            }
            let j = (size + 1) / step;
            let phi = bci_phi(p, j).map_err(internal)?;
            for i in 0..count {
                let tree = sample_bci(p, size, &phi, &mut state).map_err(internal)?;
                match format {
                    TermFormat::Dot => {
                        print!("{}", render::dot(&tree, &format!("term{i}")));
                    }
                    _ => {
                        let term = to_debruijn(&tree);
                        print_term(&term, format, i)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn print_term(
    term: &lambdacount::oracle::LambdaTermDB,
    format: TermFormat,
    index: u64,
) -> Result<(), AppError> {
    match format {
        TermFormat::Debruijn => println!("{}", render::debruijn(term)),
        TermFormat::Named => println!("{}", render::named(term)),
        TermFormat::Json => println!("{}", render::json_term(term)),
        TermFormat::Dot => {
            let enriched = from_debruijn(term).map_err(internal)?;
            print!("{}", render::dot(&enriched, &format!("term{index}")));
        }
    }
    Ok(())
}
