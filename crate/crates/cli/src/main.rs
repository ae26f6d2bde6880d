use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use connsum::engine::{
    derive_cyclic_identity, derive_cyclic_identity_mod_p, derive_dual, derive_harmonic, derive_hoffman_dual,
    derive_hoffman_relation, derive_shuffle, replay_trace, Family, Identity, Trace, Validity,
};
use connsum::finite::{
    verify_boundary_mod_p, verify_cyclic_mod_p, verify_identity_mod_p, verify_shuffle_mod_p, CongruenceReport,
};
use connsum::index::oracle::{dual_oracle, harmonic_oracle, hoffman_dual_oracle, shuffle_oracle};
use connsum::numeric::{
    default_tolerance, verify_duality_tails, verify_identity_numeric, EvalParams, EvalReport, DEFAULT_CAP, DEFAULT_N,
};
use connsum::sweep::{run_sweep, Suite, SweepConfig, SAFE_MAX_WEIGHT};
use connsum::{Error, Index, Rational};

#[derive(Parser)]
#[command(name = "connsum", version, about = "Derive and verify multiple zeta value identities by connected sums")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a transport algorithm and print its trace.
    Derive(IndexArgs),
    /// Check an identity numerically: exactly at N, or at a cap against a tolerance.
    Verify(VerifyArgs),
    /// Check a congruence modulo a prime at N = p - 1.
    VerifyModp(ModpArgs),
    /// Shuffle or harmonic product by the classical recursions.
    Product(ProductArgs),
    /// Dual index by the duality algorithm.
    Dual(SingleIndex),
    /// Hoffman dual index by the Hoffman duality algorithm.
    Hdual(SingleIndex),
    /// Run the acceptance suites over all indices up to a weight.
    Sweep(SweepArgs),
    /// Re-execute a trace file step by step.
    Replay(ReplayArgs),
}

fn parse_index(s: &str) -> Result<Index, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_tol(s: &str) -> Result<Rational, String> {
    let r: Rational = s.trim().parse().map_err(|_| format!("tolerance must be a fraction p/q, got {s:?}"))?;
    if r <= Rational::from_integer(0.into()) {
        return Err(format!("tolerance must be positive, got {s}"));
    }
    Ok(r)
}

#[derive(Args)]
struct IndexArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_parser = parse_index)]
    k: Index,
    #[arg(long, value_parser = parse_index)]
    l: Option<Index>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct Source {
    #[arg(long, value_parser = parse_family, required_unless_present = "identity_file")]
    family: Option<Family>,
    #[arg(long, value_parser = parse_index, requires = "family")]
    k: Option<Index>,
    #[arg(long, value_parser = parse_index, requires = "family")]
    l: Option<Index>,
    /// JSON identity, or the output of `derive --json`.
    #[arg(long, conflicts_with = "family")]
    identity_file: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Truncation for identities exact at every N.
    #[arg(long = "N", default_value_t = DEFAULT_N)]
    n: u32,
    /// Cap for limit identities.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u32,
    /// Tolerance p/q for limit identities (default 10/cap).
    #[arg(long, value_parser = parse_tol)]
    tol: Option<Rational>,
    /// Tails n,m of the duality sums (dual family only).
    #[arg(long, value_parser = parse_tails)]
    tails: Option<(u32, u32)>,
    /// Demand an exact check; refused for limit identities.
    #[arg(long)]
    exact: bool,
}

fn parse_tails(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("tails must be n,m, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|_| format!("bad tail {x:?}"));
    Ok((p(a)?, p(b)?))
}

#[derive(Args)]
struct ModpArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 13)]
    p: u64,
    /// Check the connected-sum boundary congruence instead (shuffle family).
    #[arg(long)]
    boundary: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Shuffle,
    Harmonic,
}

#[derive(Args)]
struct ProductArgs {
    #[arg(long, value_enum)]
    kind: ProductKind,
    #[arg(long, value_parser = parse_index)]
    k: Index,
    #[arg(long, value_parser = parse_index)]
    l: Index,
}

#[derive(Args)]
struct SingleIndex {
    #[arg(long, value_parser = parse_index)]
    k: Index,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 5)]
    max_weight: u32,
    /// Suites to run (repeatable); all by default.
    #[arg(long, value_parser = parse_suite)]
    suite: Vec<Suite>,
    /// Truncations for exact suites, comma separated.
    #[arg(long = "N", value_delimiter = ',', default_values_t = [1, 2, 7, 20])]
    ns: Vec<u32>,
    /// Primes for congruence suites, comma separated.
    #[arg(long = "p", value_delimiter = ',', default_values_t = [5, 7, 11, 13])]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random instances per rule and truncation in the transport suite.
    #[arg(long, default_value_t = 200)]
    instances: usize,
    /// Allow a maximum weight above the safety bound.
    #[arg(long)]
    force: bool,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct ReplayArgs {
    /// Trace JSON, or the output of `derive --json`.
    #[arg(long)]
    trace_file: PathBuf,
}

/// A failure carrying its exit status.
struct Exit {
    code: u8,
    msg: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => 3,
            Error::Replay { .. } => 1,
            _ => 2,
        };
        Exit { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Exit {
    Exit { code: 2, msg: msg.into() }
}

type Run = Result<bool, Exit>;

fn emit<T: Serialize + Display>(json: bool, v: &T) {
    if json {
        println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    } else {
        println!("{v}");
    }
}

fn need_l(family: Family, l: Option<Index>) -> Result<Index, Exit> {
    l.ok_or_else(|| usage(format!("family {family} needs --l")))
}

/// What a derivation produced, for printing.
struct Derivation {
    output: String,
    trace: Trace,
}

fn derive(family: Family, k: &Index, l: Option<Index>) -> Result<Derivation, Exit> {
    let d = match family {
        Family::Shuffle => {
            let (s, trace) = derive_shuffle(k, &need_l(family, l)?)?;
            Derivation { output: s.to_string(), trace }
        }
        Family::Harmonic => {
            let (s, trace) = derive_harmonic(k, &need_l(family, l)?)?;
            Derivation { output: s.to_string(), trace }
        }
        Family::Dual => {
            let (d, trace) = derive_dual(k)?;
            Derivation { output: d.paren().to_string(), trace }
        }
        Family::HoffmanDual => {
            let (d, trace) = derive_hoffman_dual(k)?;
            Derivation { output: d.paren().to_string(), trace }
        }
        Family::Cyclic => {
            let (id, trace) = derive_cyclic_identity(k)?;
            Derivation { output: id.to_string(), trace }
        }
        Family::CyclicModP => {
            let (id, trace) = derive_cyclic_identity_mod_p(k)?;
            Derivation { output: id.to_string(), trace }
        }
        Family::Hoffman => {
            let (id, trace) = derive_hoffman_relation(k)?;
            Derivation { output: id.to_string(), trace }
        }
    };
    Ok(d)
}

fn cmd_derive(a: IndexArgs, json: bool) -> Run {
    let d = derive(a.family, &a.k, a.l)?;
    if json {
        let v = json!({
            "family": a.family,
            "output": d.output,
            "identity": d.trace.identity,
            "trace": d.trace,
        });
        println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
    } else {
        println!("{}", d.trace);
        if let Some(id) = &d.trace.identity {
            println!("identity: {id}");
        }
        println!("{}", d.output);
    }
    Ok(true)
}

fn read_json(path: &Path) -> Result<Value, Exit> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{} is not JSON: {e}", path.display())))
}

/// Accepts a bare identity, a trace carrying one, or `derive --json` output.
fn identity_from_json(v: Value) -> Result<Identity, Exit> {
    let v = if v.get("validity").is_some() {
        v
    } else {
        match v.get("identity") {
            Some(Value::Null) | None => return Err(usage("the file holds no identity")),
            Some(id) => id.clone(),
        }
    };
    let id: Identity = serde_json::from_value(v).map_err(|e| usage(format!("malformed identity: {e}")))?;
    id.check()?;
    Ok(id)
}

fn trace_from_json(v: Value) -> Result<Trace, Exit> {
    let v = if v.get("steps").is_some() { v } else { v.get("trace").cloned().unwrap_or(Value::Null) };
    serde_json::from_value(v).map_err(|e| usage(format!("malformed trace: {e}")))
}

fn source_identity(s: &Source) -> Result<Identity, Exit> {
    if let Some(path) = &s.identity_file {
        return identity_from_json(read_json(path)?);
    }
    let family = s.family.expect("clap requires a family");
    let k = s.k.clone().ok_or_else(|| usage(format!("family {family} needs --k")))?;
    let d = derive(family, &k, s.l.clone())?;
    d.trace.identity.ok_or_else(|| usage(format!("family {family} yields no identity")))
}

fn report(json: bool, r: &EvalReport) -> Run {
    emit(json, r);
    Ok(r.passed())
}

fn creport(json: bool, r: &CongruenceReport) -> Run {
    emit(json, r);
    Ok(r.passed())
}

fn cmd_verify(a: VerifyArgs, json: bool) -> Run {
    if let Some((n, m)) = a.tails {
        if a.source.family != Some(Family::Dual) {
            return Err(usage("--tails applies to the dual family only"));
        }
        let k = a.source.k.clone().ok_or_else(|| usage("family dual needs --k"))?;
        let tol = a.tol.clone().unwrap_or_else(|| default_tolerance(a.cap));
        return report(json, &verify_duality_tails(&k, n, m, a.cap, &tol)?);
    }
    let id = source_identity(&a.source)?;
    match id.validity {
        Validity::ModP => return Err(usage("this identity is a congruence; use verify-modp")),
        Validity::LimitOnly if a.exact => {
            return Err(usage("this identity holds only in the limit and cannot be checked exactly"))
        }
        _ => {}
    }
    let tol = a.tol.clone().unwrap_or_else(|| default_tolerance(a.cap));
    report(json, &verify_identity_numeric(&id, &EvalParams::new(a.n, a.cap), Some(&tol))?)
}

fn cmd_verify_modp(a: ModpArgs, json: bool) -> Run {
    let s = &a.source;
    if a.boundary {
        if s.family != Some(Family::Shuffle) {
            return Err(usage("--boundary applies to the shuffle family only"));
        }
        let k = s.k.clone().ok_or_else(|| usage("family shuffle needs --k"))?;
        return creport(json, &verify_boundary_mod_p(&k, &need_l(Family::Shuffle, s.l.clone())?, a.p)?);
    }
    match (s.family, &s.k) {
        (Some(Family::Shuffle), Some(k)) => {
            creport(json, &verify_shuffle_mod_p(k, &need_l(Family::Shuffle, s.l.clone())?, a.p)?)
        }
        (Some(Family::Cyclic | Family::CyclicModP), Some(k)) => creport(json, &verify_cyclic_mod_p(k, a.p)?),
        _ => creport(json, &verify_identity_mod_p(&source_identity(s)?, a.p)?),
    }
}

fn cmd_product(a: ProductArgs, json: bool) -> Run {
    let (name, s) = match a.kind {
        ProductKind::Shuffle => ("shuffle", shuffle_oracle(&a.k, &a.l)),
        ProductKind::Harmonic => ("harmonic", harmonic_oracle(&a.k, &a.l)),
    };
    if json {
        let terms: Vec<Value> = s.iter().map(|(h, c)| json!({"coeff": c, "index": h})).collect();
        println!("{}", json!({"kind": name, "k": a.k, "l": a.l, "terms": terms}));
    } else {
        println!("{s}");
    }
    Ok(true)
}

fn cmd_dual(k: Index, hoffman: bool, json: bool) -> Run {
    let (d, trace, oracle) = if hoffman {
        let (d, t) = derive_hoffman_dual(&k)?;
        (d, t, hoffman_dual_oracle(&k)?)
    } else {
        let (d, t) = derive_dual(&k)?;
        (d, t, dual_oracle(&k)?)
    };
    if d != oracle {
        return Err(Exit { code: 3, msg: format!("algorithm gives {d}, word dual gives {oracle}") });
    }
    if json {
        println!("{}", json!({"k": k, "dual": d, "steps": trace.len()}));
    } else {
        println!("{}", d.paren());
    }
    Ok(true)
}

fn cmd_sweep(a: SweepArgs, json: bool) -> Run {
    if a.max_weight > SAFE_MAX_WEIGHT && !a.force {
        return Err(usage(format!(
            "max weight {} exceeds the safety bound {SAFE_MAX_WEIGHT}; pass --force to run anyway",
            a.max_weight
        )));
    }
    let suites = if a.suite.is_empty() { Suite::ALL.to_vec() } else { a.suite };
    let cfg = SweepConfig { max_weight: a.max_weight, ns: a.ns, primes: a.primes, seed: a.seed, instances: a.instances };
    let reports = run_sweep(&suites, &cfg)?;
    let ok = reports.iter().all(|r| r.ok());
    if json {
        println!("{}", serde_json::to_string_pretty(&json!({"config": cfg, "suites": reports, "ok": ok})).expect("serializable"));
    } else {
        for r in &reports {
            println!("{r}");
        }
        println!("{}", if ok { "all suites pass" } else { "some suites FAIL" });
    }
    if reports.iter().any(|r| r.invariant_violation) {
        return Err(Exit { code: 3, msg: "an invariant was violated during the sweep".into() });
    }
    Ok(ok)
}

fn cmd_replay(a: ReplayArgs, json: bool) -> Run {
    let trace = trace_from_json(read_json(&a.trace_file)?)?;
    let result = replay_trace(&trace)?;
    let ok = result == trace.result;
    if json {
        println!("{}", json!({"steps": trace.len(), "replayed": result, "matches": ok}));
    } else {
        println!("replayed {} steps: {result}", trace.len());
        println!("{}", if ok { "matches the recorded result" } else { "does NOT match the recorded result" });
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let run = match cli.command {
        Command::Derive(a) => cmd_derive(a, json),
        Command::Verify(a) => cmd_verify(a, json),
        Command::VerifyModp(a) => cmd_verify_modp(a, json),
        Command::Product(a) => cmd_product(a, json),
        Command::Dual(a) => cmd_dual(a.k, false, json),
        Command::Hdual(a) => cmd_dual(a.k, true, json),
        Command::Sweep(a) => cmd_sweep(a, json),
        Command::Replay(a) => cmd_replay(a, json),
    };
    match run {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
