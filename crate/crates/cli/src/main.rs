use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use dblcover::geometry::{
    certify_over_rationals, f2_ring, is_smooth_projective_hypersurface, DoubleCoverDatum, SmoothnessCertificate,
    SmoothnessVerdict,
};
use dblcover::pipeline::{
    degree_bounds, lift_and_certify, rosenberg_cover, search_witnesses, verify_cover, LiftChoice, SearchOptions,
    VerifyOptions, DEFAULT_PRIMES,
};
use dblcover::polyring::{parse_poly, Field, Polynomial, Ring};
use dblcover::solve::DEFAULT_MAX_EXT_DEGREE;
use dblcover::Error;

/// Certify singularities of inseparable double covers over F2 and
/// smoothness of their lifts over Q.
#[derive(Parser)]
#[command(name = "dblcover", version)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Add wall-clock timings to reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Caps {
    /// Largest extension degree of F2 the solver may build.
    #[arg(long, default_value_t = DEFAULT_MAX_EXT_DEGREE)]
    char2_ext_cap: u32,
    /// Also require {g = 0} to be smooth.
    #[arg(long)]
    strict_g_smooth: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that {y^2 = f, g = 0} has only the prescribed singularities.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u32,
        /// f, or @file.
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Verify the double cover y^2 = h of P^n.
    Cover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        h: String,
        #[command(flatten)]
        caps: Caps,
    },
    /// Verify the Rosenberg double cover of P^n branched in degree d.
    Rosenberg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        caps: Caps,
    },
    /// Verify the cover, lift (f, g) to Z and certify g^2 - 4f smooth over Q.
    Lift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Integer lift of f (default: coefficients 0 and 1).
        #[arg(long)]
        f_lift: Option<String>,
        #[arg(long)]
        g_lift: Option<String>,
        /// Prime tried first; the remaining defaults (3, 5, 7) follow.
        #[arg(long)]
        p: Option<u64>,
        /// Fall back to the direct computation over Q.
        #[arg(long)]
        direct_q: bool,
        /// Certify the lift even if the cover is not verified.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        caps: Caps,
    },
    /// Smoothness of a projective hypersurface.
    Smooth {
        /// q, f2, f3, f5 or any fP with P prime.
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
        /// Number of variables (default: one past the largest index used).
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        direct_q: bool,
    },
    /// Degree thresholds for hypersurfaces in P^{n+1}.
    Bound {
        #[arg(long)]
        n: usize,
    },
    /// Seeded random search for covers with only prescribed singularities.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        tries: usize,
        /// Terms in each sampled f (default 2(n+2)).
        #[arg(long)]
        f_terms: Option<usize>,
        /// A pair verified before the sampled candidates.
        #[arg(long, requires = "plant_g")]
        plant_f: Option<String>,
        #[arg(long, requires = "plant_f")]
        plant_g: Option<String>,
        #[command(flatten)]
        caps: Caps,
    },
}

fn read_expr(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse_in(arg: &str, ring: &Arc<Ring>) -> Result<Polynomial, Error> {
    parse_poly(&read_expr(arg)?, ring)
}

/// One past the largest index of a variable `x<digits>` in the text.
fn infer_vars(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'x' && (i == 0 || !bytes[i - 1].is_ascii_alphanumeric()) {
            let digits: String = text[i + 1..].chars().take_while(|c| c.is_ascii_digit()).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k + 1);
            }
        }
    }
    best
}

fn field_named(name: &str) -> Result<Field, Error> {
    match name.to_ascii_lowercase().as_str() {
        "q" => Ok(Field::Rationals),
        s => match s.strip_prefix('f').and_then(|p| p.parse::<u64>().ok()) {
            Some(p) => Field::prime(p),
            None => Err(Error::InvalidInput(format!("unknown field `{name}`"))),
        },
    }
}

fn options(caps: &Caps, timings: bool) -> VerifyOptions {
    VerifyOptions {
        max_ext_degree: caps.char2_ext_cap,
        strict_g_smooth: caps.strict_g_smooth,
        timings,
        ..VerifyOptions::default()
    }
}

fn cover_datum(n: usize, a: u32, f: &str, g: &str) -> Result<DoubleCoverDatum, Error> {
    let ring = f2_ring(n + 2);
    DoubleCoverDatum::new(n, a, parse_in(f, &ring)?, Some(parse_in(g, &ring)?))
}

fn certificate_exit(cert: &SmoothnessCertificate) -> u8 {
    match cert.verdict {
        SmoothnessVerdict::Smooth => 0,
        SmoothnessVerdict::Singular => 1,
        SmoothnessVerdict::Inconclusive => 3,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let timings = cli.timings;
    match cli.command {
        Command::Verify { n, a, f, g, caps } => {
            let report = verify_cover(&cover_datum(n, a, &f, &g)?, &options(&caps, timings))?;
            println!("{}", report.to_json());
            Ok(report.exit_code() as u8)
        }
        Command::Cover { n, d, h, caps } => {
            if d % 2 != 0 {
                return Err(Error::InvalidInput(format!("the branch degree must be even, got {d}")));
            }
            let ring = f2_ring(n + 1);
            let y = DoubleCoverDatum::new(n, d / 2, parse_in(&h, &ring)?, None)?;
            let report = verify_cover(&y, &options(&caps, timings))?;
            println!("{}", report.to_json());
            Ok(report.exit_code() as u8)
        }
        Command::Rosenberg { n, d, caps } => {
            let (_, report) = rosenberg_cover(n, d, &options(&caps, timings))?;
            println!("{}", report.to_json());
            Ok(report.exit_code() as u8)
        }
        Command::Lift { n, a, f, g, f_lift, g_lift, p, direct_q, force, caps } => {
            let y = cover_datum(n, a, &f, &g)?;
            let qring = y.ring().with_field(Field::Rationals);
            let mut primes = DEFAULT_PRIMES.to_vec();
            if let Some(p) = p {
                primes.retain(|&q| q != p);
                primes.insert(0, p);
            }
            let choice = LiftChoice {
                f_lift: f_lift.map(|s| parse_in(&s, &qring)).transpose()?,
                g_lift: g_lift.map(|s| parse_in(&s, &qring)).transpose()?,
                primes,
                direct: direct_q,
                force,
            };
            let report = lift_and_certify(&y, &choice, &options(&caps, timings))?;
            println!("{}", report.to_json());
            Ok(report.exit_code() as u8)
        }
        Command::Smooth { field, poly, vars, direct_q } => {
            let field = field_named(&field)?;
            let text = read_expr(&poly)?;
            let ring = Ring::standard(vars.unwrap_or_else(|| infer_vars(&text)).max(1), field);
            let p = parse_poly(&text, &ring)?;
            let limits = Default::default();
            let cert = match field {
                Field::Rationals => certify_over_rationals(&p, &DEFAULT_PRIMES, direct_q, &limits)?,
                _ => is_smooth_projective_hypersurface(&p, &limits)?,
            };
            println!("{}", serde_json::to_string_pretty(&cert).expect("certificates serialize"));
            Ok(certificate_exit(&cert))
        }
        Command::Bound { n } => {
            println!("{}", serde_json::to_string_pretty(&degree_bounds(n)).expect("bounds serialize"));
            Ok(0)
        }
        Command::Search { n, a, seed, tries, f_terms, plant_f, plant_g, caps } => {
            let mut planted = Vec::new();
            if let (Some(f), Some(g)) = (plant_f, plant_g) {
                let y = cover_datum(n, a, &f, &g)?;
                planted.push((y.f().clone(), y.g().expect("cover has g").clone()));
            }
            let opts = SearchOptions { verify: options(&caps, timings), f_terms, planted };
            let hits = search_witnesses(n, a, seed, tries, &opts)?;
            println!("{}", serde_json::to_string_pretty(&hits).expect("reports serialize"));
            Ok(if hits.is_empty() { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
