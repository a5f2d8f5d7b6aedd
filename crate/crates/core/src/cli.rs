//! Batch front-end: `build | verify | growth | oracle`.
//!
//! A run is fully described by a [`RunConfig`]; identical configurations give
//! byte-identical output. Exit codes: 0 when every check passes, 1 on a
//! failed check or a runtime error (including an exhausted time budget),
//! 2 on usage or configuration errors.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::growth::{envelope_report, EnvelopeConstants, EnvelopeRow};
use crate::neumann::{GroupContext, NeumannError};
use crate::schreier::verify_alt_generation;
use crate::seqgen::{validate_hypotheses, GrowthProfile, SequenceRow};
use crate::words::{enumerate_reduced, random_reduced_with, Letter, Word};
use crate::wreath::WreathElement;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("time budget of {0} ms exceeded")]
    Budget(u64),
    #[error(transparent)]
    Group(#[from] NeumannError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

impl From<crate::seqgen::SeqError> for CliError {
    fn from(e: crate::seqgen::SeqError) -> Self {
        CliError::Group(e.into())
    }
}

impl From<crate::perm::PermError> for CliError {
    fn from(e: crate::perm::PermError) -> Self {
        CliError::Group(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Build,
    Verify,
    Growth,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ProfilePreset {
    Toy,
    Builtin,
}

impl ProfilePreset {
    pub fn profile(self) -> GrowthProfile {
        match self {
            ProfilePreset::Toy => GrowthProfile::toy(),
            ProfilePreset::Builtin => GrowthProfile::builtin(1.0, 1.0),
        }
    }
}

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub profile: GrowthProfile,
    pub command: Command,
    /// Number of indices (`build`, `verify`, `growth`) or the largest ball
    /// radius (`oracle`).
    pub n: u64,
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub budget_ms: Option<u64>,
    #[serde(default)]
    pub envelope: EnvelopeConstants,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            profile: GrowthProfile::toy(),
            command: Command::Verify,
            n: 10,
            seed: 0,
            format: Format::Tsv,
            budget_ms: None,
            envelope: EnvelopeConstants::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

struct Budget {
    start: Instant,
    limit_ms: Option<u64>,
}

impl Budget {
    fn new(limit_ms: Option<u64>) -> Self {
        Self {
            start: Instant::now(),
            limit_ms,
        }
    }

    fn check(&self) -> Result<(), CliError> {
        match self.limit_ms {
            Some(ms) if self.start.elapsed() > Duration::from_millis(ms) => {
                Err(CliError::Budget(ms))
            }
            _ => Ok(()),
        }
    }
}

fn flag(b: bool) -> u8 {
    b as u8
}

fn opt_f64(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.9}"))
}

fn opt_bool(x: Option<bool>) -> String {
    x.map_or_else(|| "-".to_string(), |v| flag(v).to_string())
}

// ---------------------------------------------------------------------------
// build

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub rows: Vec<SequenceRow>,
}

impl BuildReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.cert.all())
    }

    pub fn tsv(&self) -> String {
        let mut s = String::from(
            "n\tf\td\tq\tr\td_prime\tbertrand_window\td_at_least_16n\tq_window\tr_window\tr_below_third\tcongruences\n",
        );
        for r in &self.rows {
            let c = &r.cert;
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.n,
                r.f,
                r.d,
                r.q,
                r.r,
                flag(c.d_prime),
                flag(c.bertrand_window),
                flag(c.divisor_at_least_16n),
                flag(c.q_window),
                flag(c.r_window),
                flag(c.r_below_third),
                flag(c.congruences)
            )
            .unwrap();
        }
        s
    }
}

pub fn cmd_build(cfg: &RunConfig) -> Result<BuildReport, CliError> {
    let ctx = GroupContext::new(cfg.profile.clone());
    Ok(BuildReport {
        rows: ctx.seqs().rows(cfg.n)?,
    })
}

// ---------------------------------------------------------------------------
// verify

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub cases: u64,
    pub failures: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn tsv(&self) -> String {
        let mut s = String::from("check\tpass\tcases\tfailures\tdetail\n");
        for c in &self.checks {
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}",
                c.name,
                flag(c.pass),
                c.cases,
                c.failures,
                c.detail
            )
            .unwrap();
        }
        s
    }
}

/// Indices covered by the generation check in `verify`, and the largest
/// degree it attempts.
pub const VERIFY_GENERATION_MAX: u64 = 8;
pub const VERIFY_GENERATION_MAX_DEGREE: u64 = 200;
/// Indices covered by the witness check in `verify`.
pub const VERIFY_WITNESS_MAX: u64 = 10;
/// Random words, their maximal length and the coordinates scanned by the
/// locality check in `verify`.
pub const VERIFY_LOCALITY_WORDS: u64 = 500;
pub const VERIFY_LOCALITY_MAX_LEN: usize = 16;
pub const VERIFY_LOCALITY_COORDS: u64 = 64;

fn tally(name: &str, detail: String, results: impl IntoIterator<Item = bool>) -> Check {
    let (mut cases, mut failures) = (0, 0);
    for ok in results {
        cases += 1;
        failures += u64::from(!ok);
    }
    Check {
        name: name.into(),
        pass: failures == 0,
        cases,
        failures,
        detail,
    }
}

/// Whether `k ≡ ±x, ±2x (mod d)`.
fn congruent_pm(k: u64, x: u64, d: u64) -> bool {
    let k = k % d;
    [x % d, (d - x % d) % d, (2 * x) % d, (d - (2 * x) % d) % d].contains(&k)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let budget = Budget::new(cfg.budget_ms);
    let ctx = GroupContext::new(cfg.profile.clone());
    let n = cfg.n;
    let mut checks = Vec::new();

    let rows = ctx.seqs().rows(n)?;
    let mut pair_ok = Vec::new();
    for a in &rows {
        for b in &rows {
            if a.n != b.n {
                pair_ok.push(!congruent_pm(a.r, b.r, b.d));
            }
        }
    }
    checks.push(tally(
        "r_construction",
        format!(
            "certificates, r(1) = 2 and pairwise r(l) ≢ ±r(m), ±2r(m) mod d(m) for l ≠ m ≤ {n}"
        ),
        rows.iter()
            .map(|r| r.cert.all() && (r.n != 1 || r.r == 2))
            .chain(pair_ok),
    ));
    budget.check()?;

    if !cfg.profile.is_toy() {
        let rep = validate_hypotheses(ctx.seqs(), n)?;
        for h in rep.checks {
            checks.push(Check {
                name: if h.name.starts_with("hypothesis") {
                    h.name
                } else {
                    format!("hypothesis_{}", h.name)
                },
                pass: h.pass,
                cases: n,
                failures: h.failures.len() as u64,
                detail: h.detail,
            });
        }
    }

    let mut gen = Vec::new();
    let mut skipped = 0;
    for m in 1..=n.min(VERIFY_GENERATION_MAX) {
        let (d, r) = ctx.params(m)?;
        if d > VERIFY_GENERATION_MAX_DEGREE {
            skipped += 1;
            continue;
        }
        gen.push(verify_alt_generation(d as usize, r as usize, r as usize)?);
        budget.check()?;
    }
    checks.push(tally(
        "generation",
        format!(
            "⟨αₘ, βₘ⟩ = Alt(d(m)) by Schreier–Sims order for m ≤ {} ({skipped} skipped with d(m) > {VERIFY_GENERATION_MAX_DEGREE})",
            n.min(VERIFY_GENERATION_MAX)
        ),
        gen,
    ));

    let b = Word::power(Letter::B, 1);
    let mut comm = Vec::new();
    for m in 1..=n {
        for k in 1..=n {
            let rk = ctx.params(k)?.1;
            let c = Word::commutator(&b, &Word::conjugate(&b, &Word::a_pow(rk as i64)));
            comm.push(ctx.coordinate_eval_sparse(&c, m)?.is_identity() == (m != k));
        }
        budget.check()?;
    }
    checks.push(tally(
        "commuting_criterion",
        format!("[βₘ, αₘ^r(k) βₘ αₘ^-r(k)] = e iff m ≠ k for m, k ≤ {n}"),
        comm,
    ));

    let mut wit = Vec::new();
    for m in 1..=n.min(VERIFY_WITNESS_MAX) {
        wit.push(ctx.witness(m).is_ok());
        budget.check()?;
    }
    checks.push(tally(
        "witness",
        format!(
            "[b, a^r b a^-r] of length 4 + 4r(m) lies in the m-th factor for m ≤ {}",
            n.min(VERIFY_WITNESS_MAX)
        ),
        wit,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut loc = Vec::new();
    for _ in 0..VERIFY_LOCALITY_WORDS {
        let len = rng.gen_range(0..=VERIFY_LOCALITY_MAX_LEN);
        let w = random_reduced_with(&mut rng, len);
        let x = WreathElement::eval(&w);
        for m in 1..=VERIFY_LOCALITY_COORDS {
            if !ctx.spread_ok(m, len as u64)? {
                continue;
            }
            let p = ctx.coordinate_eval_sparse(&w, m)?;
            loc.push(p.is_identity() == x.is_identity() && p == ctx.reconstruct_from_lamps(&x, m)?);
        }
        budget.check()?;
    }
    checks.push(tally(
        "locality",
        format!(
            "{VERIFY_LOCALITY_WORDS} seeded words of length ≤ {VERIFY_LOCALITY_MAX_LEN}, spread coordinates ≤ {VERIFY_LOCALITY_COORDS}: triviality and normal form match the lamplighter image"
        ),
        loc,
    ));

    Ok(VerifyReport { checks })
}

// ---------------------------------------------------------------------------
// growth

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub constants: EnvelopeConstants,
    pub rows: Vec<EnvelopeRow>,
}

impl GrowthReport {
    /// Only the ordering of the proven bounds decides the exit status; the
    /// envelope flags test user-supplied candidate constants.
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.bounds_ordered)
    }

    pub fn tsv(&self) -> String {
        let mut s = String::from(
            "n\tkind\tlower_log\tupper_log\tlog_F\tenvelope_lower_log\tenvelope_upper_log\tbounds_ordered\tlower_inside\tupper_inside\n",
        );
        for r in &self.rows {
            let kind = match r.kind {
                crate::growth::BoundKind::Rf => "rf",
                crate::growth::BoundKind::FullRf => "full_rf",
            };
            writeln!(
                s,
                "{}\t{}\t{:.9}\t{:.9}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.n,
                kind,
                r.lower_log,
                r.upper_log,
                opt_f64(r.log_f),
                opt_f64(r.envelope_lower_log),
                opt_f64(r.envelope_upper_log),
                flag(r.bounds_ordered),
                opt_bool(r.lower_inside),
                opt_bool(r.upper_inside)
            )
            .unwrap();
        }
        s
    }
}

pub fn cmd_growth(cfg: &RunConfig) -> Result<GrowthReport, CliError> {
    let ctx = GroupContext::new(cfg.profile.clone());
    let rep = envelope_report(&ctx, cfg.n, cfg.envelope)?;
    Ok(GrowthReport {
        constants: rep.constants,
        rows: rep.rows,
    })
}

// ---------------------------------------------------------------------------
// oracle

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallLine {
    pub radius: u64,
    pub words: u64,
    pub ball_size: u64,
    pub pairwise_size: u64,
    pub rho_injective: bool,
    pub representatives: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub balls: Vec<BallLine>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.balls
            .iter()
            .all(|b| b.rho_injective && b.ball_size == b.pairwise_size)
    }

    pub fn tsv(&self) -> String {
        let mut s = String::from("radius\twords\tball_size\tpairwise_size\trho_injective\n");
        for b in &self.balls {
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}",
                b.radius,
                b.words,
                b.ball_size,
                b.pairwise_size,
                flag(b.rho_injective)
            )
            .unwrap();
        }
        s
    }

    /// One JSON object per line.
    pub fn json_lines(&self) -> String {
        let mut s = String::new();
        for b in &self.balls {
            s.push_str(&serde_json::to_string(b).expect("serializes"));
            s.push('\n');
        }
        s
    }
}

/// Number of classes of reduced words of length `≤ n` under `is_trivial(uv⁻¹)`.
pub fn pairwise_class_count(ctx: &GroupContext, n: u64) -> Result<u64, NeumannError> {
    let mut reps: Vec<Word> = Vec::new();
    for w in enumerate_reduced(n as usize) {
        let mut found = false;
        for r in &reps {
            if ctx.equal(&w, r)? {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(w);
        }
    }
    Ok(reps.len() as u64)
}

/// Whether `ρₙ` (coordinates `1..=2n`) separates the given representatives.
pub fn rho_injective(ctx: &GroupContext, reps: &[Word], n: u64) -> Result<bool, NeumannError> {
    let mut seen = HashMap::new();
    for w in reps {
        if seen.insert(ctx.rho(w, n)?, ()).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<OracleReport, CliError> {
    let budget = Budget::new(cfg.budget_ms);
    let ctx = GroupContext::new(cfg.profile.clone());
    let mut balls = Vec::new();
    for radius in 0..=cfg.n {
        let ball = ctx.ball(radius, None)?;
        budget.check()?;
        let reps: Vec<Word> = ball.into_iter().map(|(w, _)| w).collect();
        let pairwise = pairwise_class_count(&ctx, radius)?;
        budget.check()?;
        balls.push(BallLine {
            radius,
            words: enumerate_reduced(radius as usize).count() as u64,
            ball_size: reps.len() as u64,
            pairwise_size: pairwise,
            rho_injective: rho_injective(&ctx, &reps, radius)?,
            representatives: reps.iter().map(|w| w.to_string()).collect(),
        });
        budget.check()?;
    }
    Ok(OracleReport { balls })
}

// ---------------------------------------------------------------------------
// Entry point

#[derive(Parser, Debug)]
#[command(
    name = "rfgrowth",
    version,
    about = "B(d, r, r) groups: sequences, word problem and growth bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Sequence table n, f, d, q, r with certificate flags
    Build(Overrides),
    /// Structural checks on the constructed group
    Verify(Overrides),
    /// Proven growth bounds against the envelopes
    Growth(Overrides),
    /// Ball sizes, pairwise oracle and injectivity of ρₙ
    Oracle(Overrides),
}

#[derive(clap::Args, Debug, Default, Clone)]
pub struct Overrides {
    /// JSON run configuration; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub profile: Option<ProfilePreset>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub budget_ms: Option<u64>,
}

impl Cli {
    /// The run configuration: file (or defaults), then flags.
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let (command, o) = match &self.command {
            CliCommand::Build(o) => (Command::Build, o),
            CliCommand::Verify(o) => (Command::Verify, o),
            CliCommand::Growth(o) => (Command::Growth, o),
            CliCommand::Oracle(o) => (Command::Oracle, o),
        };
        let mut cfg = match &o.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        cfg.command = command;
        if let Some(p) = o.profile {
            cfg.profile = p.profile();
        }
        if let Some(n) = o.n {
            cfg.n = n;
        }
        if let Some(s) = o.seed {
            cfg.seed = s;
        }
        if let Some(f) = o.format {
            cfg.format = f;
        }
        if o.budget_ms.is_some() {
            cfg.budget_ms = o.budget_ms;
        }
        Ok(cfg)
    }
}

fn render<T: Serialize>(fmt: Format, value: &T, tsv: impl FnOnce() -> String) -> String {
    match fmt {
        Format::Tsv => tsv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializes");
            s.push('\n');
            s
        }
    }
}

/// Runs one configured command, returning its output and whether every
/// check passed.
pub fn execute(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    Ok(match cfg.command {
        Command::Build => {
            let r = cmd_build(cfg)?;
            (render(cfg.format, &r, || r.tsv()), r.pass())
        }
        Command::Verify => {
            let r = cmd_verify(cfg)?;
            (render(cfg.format, &r, || r.tsv()), r.pass())
        }
        Command::Growth => {
            let r = cmd_growth(cfg)?;
            (render(cfg.format, &r, || r.tsv()), r.pass())
        }
        Command::Oracle => {
            let r = cmd_oracle(cfg)?;
            let out = match cfg.format {
                Format::Tsv => r.tsv(),
                Format::Json => r.json_lines(),
            };
            (out, r.pass())
        }
    })
}

/// Output text and exit code for a parsed command line.
pub fn run(cli: &Cli) -> (String, String, i32) {
    match cli.config().and_then(|cfg| execute(&cfg)) {
        Ok((out, pass)) => (out, String::new(), if pass { 0 } else { 1 }),
        Err(e) => (String::new(), format!("error: {e}\n"), e.exit_code()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.profile = GrowthProfile::builtin(1.5, 0.5);
        cfg.budget_ms = Some(1234);
        cfg.format = Format::Json;
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        let toy = RunConfig::default();
        assert_eq!(RunConfig::from_json(&toy.to_json()).unwrap(), toy);
    }

    #[test]
    fn config_errors_exit_two() {
        let e = RunConfig::from_json("{\"n\": 3}").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let cli = Cli::parse_from(["rfgrowth", "build", "--config", "/nonexistent/cfg.json"]);
        assert_eq!(run(&cli).2, 2);
    }

    #[test]
    fn flags_override_defaults() {
        let cli = Cli::parse_from([
            "rfgrowth",
            "growth",
            "--profile",
            "builtin",
            "--n",
            "7",
            "--seed",
            "9",
            "--format",
            "json",
        ]);
        let cfg = cli.config().unwrap();
        assert_eq!(cfg.command, Command::Growth);
        assert_eq!(cfg.profile, GrowthProfile::builtin(1.0, 1.0));
        assert_eq!((cfg.n, cfg.seed, cfg.format), (7, 9, Format::Json));
    }

    #[test]
    fn build_twenty_rows() {
        let cfg = RunConfig {
            command: Command::Build,
            n: 20,
            ..RunConfig::default()
        };
        let r = cmd_build(&cfg).unwrap();
        assert_eq!(r.rows.len(), 20);
        assert!(r.pass());
        assert_eq!(r.tsv().lines().count(), 21);
    }

    #[test]
    fn oracle_radius_one() {
        let cfg = RunConfig {
            command: Command::Oracle,
            n: 1,
            ..RunConfig::default()
        };
        let r = cmd_oracle(&cfg).unwrap();
        assert_eq!(r.balls[1].ball_size, 5);
        assert!(r.pass());
    }

    #[test]
    fn budget_exhaustion_exits_one() {
        let cfg = RunConfig {
            n: 30,
            budget_ms: Some(0),
            ..RunConfig::default()
        };
        let e = cmd_verify(&cfg).unwrap_err();
        assert!(matches!(e, CliError::Budget(0)));
        assert_eq!(e.exit_code(), 1);
    }
}
