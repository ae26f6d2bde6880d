//! Exhaustive and seeded acceptance sweeps over indices of bounded weight.
//!
//! Cases within a suite run in parallel; results are collected in case order so
//! the report is the same on every run.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{
    derive_dual, derive_harmonic, derive_hoffman_dual, derive_shuffle, replay_trace, Level, RuleId, Tails,
    Term, Trace,
};
use crate::error::{Error, Result};
use crate::finite::{check_transport_mod_p, verify_boundary_mod_p, verify_cyclic_mod_p, verify_shuffle_mod_p};
use crate::index::oracle::{dual_oracle, harmonic_oracle, hoffman_dual_oracle, shuffle_oracle};
use crate::index::{cyclic_class, Index};
use crate::numeric::{boundary_checks, check_transport_numeric, verify_identity_numeric, EvalParams};

/// Largest weight the sweep accepts unless the caller raises it explicitly.
pub const SAFE_MAX_WEIGHT: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ShuffleOracle,
    HarmonicOracle,
    Dual,
    Hdual,
    ExactIdentities,
    Boundary,
    Transport,
    ModpShuffle,
    ModpCyclic,
    ModpBoundary,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::ShuffleOracle,
        Suite::HarmonicOracle,
        Suite::Dual,
        Suite::Hdual,
        Suite::ExactIdentities,
        Suite::Boundary,
        Suite::Transport,
        Suite::ModpShuffle,
        Suite::ModpCyclic,
        Suite::ModpBoundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ShuffleOracle => "shuffle-oracle",
            Suite::HarmonicOracle => "harmonic-oracle",
            Suite::Dual => "dual",
            Suite::Hdual => "hdual",
            Suite::ExactIdentities => "exact-identities",
            Suite::Boundary => "boundary",
            Suite::Transport => "transport",
            Suite::ModpShuffle => "modp-shuffle",
            Suite::ModpCyclic => "modp-cyclic",
            Suite::ModpBoundary => "modp-boundary",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_weight: u32,
    pub ns: Vec<u32>,
    pub primes: Vec<u64>,
    pub seed: u64,
    /// Random instances per rule and `N` in the transport suite.
    pub instances: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { max_weight: 5, ns: vec![1, 2, 7, 20], primes: vec![5, 7, 11, 13], seed: 0, instances: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub passed: usize,
    /// Descriptions of the failing cases, in case order.
    pub failures: Vec<String>,
    /// Some case hit an invariant violation or a replay mismatch.
    pub invariant_violation: bool,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "pass" } else { "FAIL" };
        write!(f, "{:<18} {:>6}/{:<6} {status}", self.suite.name(), self.passed, self.cases)?;
        for line in self.failures.iter().take(10) {
            write!(f, "\n    {line}")?;
        }
        if self.failures.len() > 10 {
            write!(f, "\n    ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}

/// What one case produced: `None` on success, a description on failure.
type Outcome = Result<Option<String>>;

fn expect(cond: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!cond).then(msg)
}

fn check_replay(t: &Trace) -> Result<Option<String>> {
    let replayed = replay_trace(t)?;
    Ok(expect(replayed == t.result, || format!("trace from {} replays to {replayed}, recorded {}", t.start, t.result)))
}

fn collect(suite: Suite, outcomes: Vec<(String, Outcome)>) -> SuiteReport {
    let cases = outcomes.len();
    let mut failures = Vec::new();
    let mut invariant_violation = false;
    for (name, o) in outcomes {
        match o {
            Ok(None) => {}
            Ok(Some(msg)) => failures.push(format!("{name}: {msg}")),
            Err(e) => {
                invariant_violation |= matches!(e, Error::Invariant(_) | Error::Replay { .. });
                failures.push(format!("{name}: {e}"));
            }
        }
    }
    SuiteReport { suite, cases, passed: cases - failures.len(), failures, invariant_violation }
}

fn run_cases<T: Sync>(suite: Suite, items: Vec<T>, f: impl Fn(&T) -> (String, Outcome) + Sync + Send) -> SuiteReport {
    let outcomes: Vec<(String, Outcome)> = items.par_iter().map(f).collect();
    collect(suite, outcomes)
}

/// All pairs `(k, l)` with `wt(k) + wt(l) ≤ w`.
pub fn pairs_up_to(w: u32) -> Vec<(Index, Index)> {
    let all = Index::all_up_to_weight(w);
    let mut out = Vec::new();
    for k in &all {
        for l in &all {
            if k.weight() + l.weight() <= w {
                out.push((k.clone(), l.clone()));
            }
        }
    }
    out
}

/// One index per cyclic class, nonempty, weight `≤ w`.
pub fn class_representatives(w: u32) -> Vec<Index> {
    Index::all_up_to_weight(w)
        .into_iter()
        .filter(|k| !k.is_empty())
        .filter(|k| cyclic_class(k).map(|c| &c[0] == k).unwrap_or(false))
        .collect()
}

fn both(a: Outcome, b: impl FnOnce() -> Outcome) -> Outcome {
    match a? {
        Some(m) => Ok(Some(m)),
        None => b(),
    }
}

fn shuffle_case((k, l): &(Index, Index)) -> (String, Outcome) {
    let name = format!("{}ш{}", k.paren(), l.paren());
    let out = derive_shuffle(k, l).and_then(|(s, t)| {
        let o = shuffle_oracle(k, l);
        both(Ok(expect(s == o, || format!("engine {s}, oracle {o}"))), || check_replay(&t))
    });
    (name, out)
}

fn harmonic_case((k, l): &(Index, Index)) -> (String, Outcome) {
    let name = format!("{}*{}", k.paren(), l.paren());
    let out = derive_harmonic(k, l).and_then(|(s, t)| {
        let o = harmonic_oracle(k, l);
        both(Ok(expect(s == o, || format!("engine {s}, oracle {o}"))), || check_replay(&t))
    });
    (name, out)
}

fn dual_case(k: &Index) -> (String, Outcome) {
    let out = (|| {
        let (d, t) = derive_dual(k)?;
        let o = dual_oracle(k)?;
        let (dd, _) = derive_dual(&d)?;
        if let Some(m) = expect(d == o, || format!("engine {d}, oracle {o}")) {
            return Ok(Some(m));
        }
        if let Some(m) = expect(dd == *k, || format!("dual of dual is {dd}")) {
            return Ok(Some(m));
        }
        if let Some(m) = expect(t.len() == k.weight() as usize, || format!("{} steps for weight {}", t.len(), k.weight())) {
            return Ok(Some(m));
        }
        check_replay(&t)
    })();
    (format!("{}†", k.paren()), out)
}

fn hdual_case(k: &Index) -> (String, Outcome) {
    let out = (|| {
        let (d, t) = derive_hoffman_dual(k)?;
        let o = hoffman_dual_oracle(k)?;
        let (dd, _) = derive_hoffman_dual(&d)?;
        if let Some(m) = expect(d == o, || format!("engine {d}, oracle {o}")) {
            return Ok(Some(m));
        }
        if let Some(m) = expect(dd == *k, || format!("Hoffman dual of dual is {dd}")) {
            return Ok(Some(m));
        }
        if let Some(m) = expect(t.len() == k.weight() as usize, || format!("{} steps for weight {}", t.len(), k.weight())) {
            return Ok(Some(m));
        }
        check_replay(&t)
    })();
    (format!("{}∨", k.paren()), out)
}

enum ExactCase {
    Harmonic(Index, Index, u32),
    HoffmanDual(Index, u32),
}

fn exact_case(c: &ExactCase) -> (String, Outcome) {
    let (name, id) = match c {
        ExactCase::Harmonic(k, l, n) => (
            format!("ζ_{n}{}ζ_{n}{}", k.paren(), l.paren()),
            derive_harmonic(k, l).map(|(_, t)| (t.identity, *n)),
        ),
        ExactCase::HoffmanDual(k, n) => (format!("H⋆_{n}{}", k.paren()), derive_hoffman_dual(k).map(|(_, t)| (t.identity, *n))),
    };
    let out = id.and_then(|(id, n)| {
        let id = id.ok_or_else(|| Error::invariant("derivation recorded no identity"))?;
        let r = verify_identity_numeric(&id, &EvalParams::new(n, n), None)?;
        Ok(expect(r.passed(), || format!("lhs {} rhs {}", r.lhs, r.rhs)))
    });
    (name, out)
}

fn boundary_case((k, l, n): &(Index, Index, u32)) -> (String, Outcome) {
    let out = boundary_checks(k, l, *n).map(|checks| {
        let bad: Vec<String> = checks.iter().filter(|c| !c.holds()).map(|c| c.name.clone()).collect();
        expect(bad.is_empty(), || bad.join("; "))
    });
    (format!("{}, {} at N = {n}", k.paren(), l.paren()), out)
}

/// The relations checked exactly at finite `N` by the transport suite.
pub const EXACT_TRANSPORT_RULES: [RuleId; 10] = [
    RuleId::SH_SYM,
    RuleId::SH_MAIN,
    RuleId::SH_UNLOAD,
    RuleId::HAR_SYM,
    RuleId::HAR_MAIN,
    RuleId::HAR_UNLOAD,
    RuleId::HD_UP,
    RuleId::HD_ARROW,
    RuleId::CS_UP,
    RuleId::D_SYM,
];

/// A uniformly random composition of a weight in `lo..=hi` (`∅` for weight 0).
fn random_index(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> Index {
    let w = rng.gen_range(lo..=hi);
    let mut entries = Vec::new();
    let mut cur = 0;
    for i in 0..w {
        cur += 1;
        if i + 1 == w || rng.gen_bool(0.5) {
            entries.push(cur);
            cur = 0;
        }
    }
    Index::from_slice(&entries)
}

fn random_term(r: RuleId, rng: &mut ChaCha8Rng, w: u32) -> Term {
    use RuleId::*;
    let idx = |rng: &mut ChaCha8Rng, lo: u32| random_index(rng, lo, w.max(lo));
    match r {
        SH_SYM | SH_MAIN | SH_UNLOAD => Term::Sh { k: idx(rng, 0), l: idx(rng, 0), h: idx(rng, 1) },
        HAR_SYM | HAR_MAIN | HAR_UNLOAD => Term::Har { k: idx(rng, 1), l: idx(rng, 1), h: idx(rng, 0) },
        HD_UP | HD_ARROW => Term::HD { k: idx(rng, 1), l: idx(rng, 0) },
        CS_UP | CS_ROTATE_MODP => Term::O { k: idx(rng, 2), level: Level::Truncated },
        D_SYM | D_UP | D_ARROW => {
            let tails = if rng.gen_bool(0.5) { Tails::Straight } else { Tails::Swapped };
            Term::D { k: idx(rng, 0), l: idx(rng, 0), tails }
        }
        CS_ROTATE => Term::O { k: idx(rng, 2), level: Level::Limit },
        H_UP | H_ARROW => Term::H { k: idx(rng, 1), l: idx(rng, 1) },
    }
}

/// `count` random terms on which `r` applies, drawn from a stream fixed by `seed`.
/// Slot weights are at most `w`; returns fewer terms only if none can be found.
pub fn random_instances(r: RuleId, count: usize, w: u32, seed: u64) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((r as u64 + 1) << 32));
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count && misses < 100 * count.max(1) {
        let t = random_term(r, &mut rng, w);
        if t.check().is_ok() && r.guard(&t).is_ok() {
            out.push(t);
        } else {
            misses += 1;
        }
    }
    out
}

fn transport_case((r, t, n): &(RuleId, Term, u32)) -> (String, Outcome) {
    let out = check_transport_numeric(*r, t, &EvalParams::new(*n, *n), None)
        .map(|rep| expect(rep.passed(), || format!("lhs {} rhs {}", rep.lhs, rep.rhs)));
    (format!("[{r}] {t} at N = {n}"), out)
}

fn modp_transport_case((t, p): &(Term, u64)) -> (String, Outcome) {
    let out = check_transport_mod_p(RuleId::CS_ROTATE_MODP, t, *p)
        .map(|rep| expect(rep.passed(), || format!("lhs {} rhs {}", rep.lhs, rep.rhs)));
    (format!("[CS_ROTATE_MODP] {t} at p = {p}"), out)
}

fn congruence(name: String, r: Result<crate::finite::CongruenceReport>) -> (String, Outcome) {
    (name, r.map(|rep| expect(rep.passed(), || format!("lhs {} rhs {} (mod {})", rep.lhs, rep.rhs, rep.p))))
}

/// Runs one suite. Fails only on an invalid configuration; case failures are
/// reported in the [`SuiteReport`].
pub fn run_suite(suite: Suite, cfg: &SweepConfig) -> Result<SuiteReport> {
    let w = cfg.max_weight;
    for &p in &cfg.primes {
        crate::finite::PrimeField::new(p)?;
    }
    Ok(match suite {
        Suite::ShuffleOracle => run_cases(suite, pairs_up_to(w), shuffle_case),
        Suite::HarmonicOracle => run_cases(suite, pairs_up_to(w), harmonic_case),
        Suite::Dual => {
            let ks: Vec<Index> = Index::all_up_to_weight(w).into_iter().filter(|k| k.is_admissible()).collect();
            run_cases(suite, ks, dual_case)
        }
        Suite::Hdual => {
            let ks: Vec<Index> = Index::all_up_to_weight(w).into_iter().filter(|k| !k.is_empty()).collect();
            run_cases(suite, ks, hdual_case)
        }
        Suite::ExactIdentities => {
            let mut cases = Vec::new();
            for &n in &cfg.ns {
                for (k, l) in pairs_up_to(w) {
                    cases.push(ExactCase::Harmonic(k, l, n));
                }
                for k in Index::all_up_to_weight(w).into_iter().filter(|k| !k.is_empty()) {
                    cases.push(ExactCase::HoffmanDual(k, n));
                }
            }
            run_cases(suite, cases, exact_case)
        }
        Suite::Boundary => {
            let mut cases = Vec::new();
            for &n in &cfg.ns {
                for (k, l) in pairs_up_to(w) {
                    cases.push((k, l, n));
                }
            }
            run_cases(suite, cases, boundary_case)
        }
        Suite::Transport => {
            let mut cases = Vec::new();
            for &n in &cfg.ns {
                for r in EXACT_TRANSPORT_RULES {
                    for t in random_instances(r, cfg.instances, w, cfg.seed ^ n as u64) {
                        cases.push((r, t, n));
                    }
                }
            }
            run_cases(suite, cases, transport_case)
        }
        Suite::ModpShuffle => {
            let mut cases = Vec::new();
            for &p in &cfg.primes {
                for (k, l) in pairs_up_to(w) {
                    cases.push((k, l, p));
                }
            }
            run_cases(suite, cases, |(k, l, p)| {
                congruence(format!("{}ш{} mod {p}", k.paren(), l.paren()), verify_shuffle_mod_p(k, l, *p))
            })
        }
        Suite::ModpBoundary => {
            let mut cases = Vec::new();
            for &p in &cfg.primes {
                for (k, l) in pairs_up_to(w) {
                    cases.push((k, l, p));
                }
            }
            run_cases(suite, cases, |(k, l, p)| {
                congruence(format!("Zш({}, {}) mod {p}", k.paren(), l.paren()), verify_boundary_mod_p(k, l, *p))
            })
        }
        Suite::ModpCyclic => {
            let mut identities = Vec::new();
            let mut transports = Vec::new();
            for &p in &cfg.primes {
                for k in class_representatives(w) {
                    identities.push((k, p));
                }
                for k in Index::all_up_to_weight(w) {
                    let t = Term::O { k, level: Level::Truncated };
                    if t.check().is_ok() && RuleId::CS_ROTATE_MODP.guard(&t).is_ok() {
                        transports.push((t, p));
                    }
                }
            }
            let mut outcomes: Vec<(String, Outcome)> = identities
                .par_iter()
                .map(|(k, p)| congruence(format!("cyclic {} mod {p}", k.paren()), verify_cyclic_mod_p(k, *p)))
                .collect();
            outcomes.extend(transports.par_iter().map(modp_transport_case).collect::<Vec<_>>());
            collect(suite, outcomes)
        }
    })
}

/// Runs the given suites in order.
pub fn run_sweep(suites: &[Suite], cfg: &SweepConfig) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_zero_is_vacuous() {
        let cfg = SweepConfig { max_weight: 0, ..SweepConfig::default() };
        for r in run_sweep(&Suite::ALL, &cfg).unwrap() {
            assert!(r.ok(), "{r}");
        }
    }

    #[test]
    fn small_sweep_passes() {
        let cfg = SweepConfig { max_weight: 3, ns: vec![1, 5], primes: vec![5, 7], seed: 1, instances: 10 };
        for r in run_sweep(&Suite::ALL, &cfg).unwrap() {
            assert!(r.ok(), "{r}");
            assert!(r.cases > 0, "{r}");
        }
    }

    #[test]
    fn instances_are_reproducible() {
        let a = random_instances(RuleId::SH_MAIN, 20, 4, 7);
        let b = random_instances(RuleId::SH_MAIN, 20, 4, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
