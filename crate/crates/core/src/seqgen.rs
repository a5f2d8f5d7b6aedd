//! The integer sequences `f → d → q → r` that parametrize the group.
//!
//! * `f(n) = ⌈log F(n+C₂) / log log F(n+C₂)⌉` (or given directly by a toy
//!   profile),
//! * `d(n)` the smallest prime `≥ max(f(n), 5)`, which lies in `[f(n), 2f(n)]`,
//! * `q(n)` a lower offset, `n` by default,
//! * `r(n)` chosen greedily in `(q(n), q(n) + 17n)` so that no two indices
//!   `l ≠ m` satisfy `r(l) ≡ ±r(m), ±2r(m) (mod d(m))`.
//!
//! Every materialized index is checked against its side conditions; a
//! violation is an error, never a silently wrong value.

use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeqError {
    #[error("sequence indices start at 1")]
    IndexZero,
    #[error("profile too small at n={n}: log F = {log_f} must exceed e")]
    ProfileTooSmall { n: u64, log_f: f64 },
    #[error("profile has no value for F({arg}) (needed for n={n})")]
    ProfileExhausted { n: u64, arg: u64 },
    #[error("f({n}) = {f} is below 3")]
    FTooSmall { n: u64, f: u64 },
    #[error("{what} decreases at n={n}")]
    NotMonotone { n: u64, what: &'static str },
    #[error("prime search for f({n}) = {f} left the window [f, 2f] (found {d})")]
    BertrandWindow { n: u64, f: u64, d: u64 },
    #[error("q({n}) = {q} outside [n, d(n)/4] with d(n) = {d}")]
    QOutOfRange { n: u64, q: u64, d: u64 },
    #[error("d({n}) = {d} < 16n")]
    DivisorTooSmall { n: u64, d: u64 },
    #[error("no admissible r({n}) in (q, q + {window}]")]
    NoAdmissibleResidue { n: u64, window: u64 },
    #[error("r({n}) = {r} is not below d(n)/3 with d(n) = {d}")]
    RTooLarge { n: u64, r: u64, d: u64 },
}

// ---------------------------------------------------------------------------
// Primality

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let odd = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `≥ x`.
pub fn next_prime(x: u64) -> u64 {
    let mut p = x.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

// ---------------------------------------------------------------------------
// Profiles

/// `x·ln x·(ln ln x)^e`, with `ln ln x` clamped at 0 below `x = e`.
pub fn nloglog(x: f64, exponent: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    let l = x.ln();
    x * l * l.ln().max(0.0).powf(exponent)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    /// `log F(n) = c·n·(ln n)²·(ln ln n)^{1+ε}`.
    Builtin { c: f64 },
    /// Explicit natural-log values `log F(1), log F(2), …`.
    Table { log_f: Vec<f64> },
    /// `f(n) = slope·n + offset`, bypassing `F` entirely.
    ToyLinear { slope: u64, offset: u64 },
    /// `f(1), f(2), …` given directly.
    ToyTable { f: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QRule {
    /// `q(n) = n`.
    #[default]
    Identity,
    /// `q(1), q(2), …` given directly.
    Table { q: Vec<u64> },
}

fn default_eps() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    #[serde(flatten)]
    pub kind: ProfileKind,
    #[serde(default = "default_eps")]
    pub eps: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(default)]
    pub q: QRule,
}

impl GrowthProfile {
    /// The shipped toy profile: `f(n) = 16n + 1`, `q(n) = n`.
    pub fn toy() -> Self {
        Self::toy_linear(16, 1)
    }

    pub fn toy_linear(slope: u64, offset: u64) -> Self {
        Self {
            kind: ProfileKind::ToyLinear { slope, offset },
            eps: 1.0,
            c0: 1.0,
            c1: 1.0,
            c2: 0.0,
            q: QRule::Identity,
        }
    }

    pub fn toy_table(f: Vec<u64>) -> Self {
        Self {
            kind: ProfileKind::ToyTable { f },
            ..Self::toy()
        }
    }

    /// Builtin profile with the shipped constants `C₀ = C₁ = 4`, `C₂ = 256`.
    pub fn builtin(c: f64, eps: f64) -> Self {
        Self {
            kind: ProfileKind::Builtin { c },
            eps,
            c0: 4.0,
            c1: 4.0,
            c2: 256.0,
            q: QRule::Identity,
        }
    }

    pub fn table(log_f: Vec<f64>) -> Self {
        Self {
            kind: ProfileKind::Table { log_f },
            eps: 1.0,
            c0: 1.0,
            c1: 1.0,
            c2: 0.0,
            q: QRule::Identity,
        }
    }

    pub fn is_toy(&self) -> bool {
        matches!(
            self.kind,
            ProfileKind::ToyLinear { .. } | ProfileKind::ToyTable { .. }
        )
    }

    /// Natural log of `F(n)`, if the profile defines `F` there.
    pub fn log_f(&self, n: u64) -> Option<f64> {
        match &self.kind {
            ProfileKind::Builtin { c } => {
                let x = n as f64;
                if x <= 1.0 {
                    return Some(0.0);
                }
                let l = x.ln();
                Some(c * x * l * l * l.ln().max(0.0).powf(1.0 + self.eps))
            }
            ProfileKind::Table { log_f } => n
                .checked_sub(1)
                .and_then(|i| log_f.get(i as usize))
                .copied(),
            _ => None,
        }
    }

    /// Lower envelope `c·n·(ln n)²·(ln ln n)^{1+ε}` demanded of `log F`.
    pub fn hypothesis_a_floor(&self, c: f64, n: u64) -> f64 {
        let x = n as f64;
        if x <= 1.0 {
            return 0.0;
        }
        c * x * x.ln().powi(2) * x.ln().ln().max(0.0).powf(1.0 + self.eps)
    }

    fn q_of(&self, n: u64) -> Option<u64> {
        match &self.q {
            QRule::Identity => Some(n),
            QRule::Table { q } => q.get(n as usize - 1).copied(),
        }
    }
}

/// `f(n)` for the profile.
pub fn f_of(profile: &GrowthProfile, n: u64) -> Result<u64, SeqError> {
    if n == 0 {
        return Err(SeqError::IndexZero);
    }
    match &profile.kind {
        ProfileKind::ToyLinear { slope, offset } => Ok(slope * n + offset),
        ProfileKind::ToyTable { f } => f
            .get(n as usize - 1)
            .copied()
            .ok_or(SeqError::ProfileExhausted { n, arg: n }),
        ProfileKind::Builtin { .. } | ProfileKind::Table { .. } => {
            // F at a non-integer point means F at its ceiling.
            let arg = (n as f64 + profile.c2).ceil().max(1.0) as u64;
            let v = profile
                .log_f(arg)
                .ok_or(SeqError::ProfileExhausted { n, arg })?;
            f_from_log(n, v)
        }
    }
}

/// `⌈v / ln v⌉` for `v = log F`, requiring `v > e`.
pub fn f_from_log(n: u64, v: f64) -> Result<u64, SeqError> {
    if !(v > std::f64::consts::E) {
        return Err(SeqError::ProfileTooSmall { n, log_f: v });
    }
    Ok((v / v.ln()).ceil() as u64)
}

/// `d` for a given `f(n)`: the smallest prime `≥ max(f, 5)`, asserted to lie
/// in Bertrand's window `[f, 2f]`.
pub fn d_from_f(n: u64, f: u64) -> Result<u64, SeqError> {
    if f < 3 {
        return Err(SeqError::FTooSmall { n, f });
    }
    let d = next_prime(f.max(5));
    if d > 2 * f {
        return Err(SeqError::BertrandWindow { n, f, d });
    }
    Ok(d)
}

// ---------------------------------------------------------------------------
// Sequence materialization

/// Which side conditions were verified for one index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub d_prime: bool,
    pub bertrand_window: bool,
    pub divisor_at_least_16n: bool,
    pub q_window: bool,
    pub r_window: bool,
    pub r_below_third: bool,
    pub congruences: bool,
}

impl Certificate {
    pub fn all(&self) -> bool {
        self.d_prime
            && self.bertrand_window
            && self.divisor_at_least_16n
            && self.q_window
            && self.r_window
            && self.r_below_third
            && self.congruences
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub n: u64,
    pub f: u64,
    pub d: u64,
    pub q: u64,
    pub r: u64,
    pub cert: Certificate,
}

#[derive(Default)]
struct State {
    f: Vec<u64>,
    d: Vec<u64>,
    q: Vec<u64>,
    r: Vec<u64>,
    certs: Vec<Certificate>,
}

/// Lazily materialized `f, d, q, r`. Values never change once computed;
/// readers share the lock and only extension takes it exclusively.
pub struct SequenceSet {
    profile: GrowthProfile,
    state: RwLock<State>,
}

/// Whether `k` is excluded by the pair `(r_m, d_m)` or excludes it at `d_n`.
fn conflicts(k: u64, r_m: u64, d_m: u64, d_n: u64) -> bool {
    let bad_mod = |x: u64, y: u64, d: u64| {
        // x ≡ ±y or ±2y (mod d)
        let x = x % d;
        let y1 = y % d;
        let y2 = (2 * y) % d;
        x == y1 || x == (d - y1) % d || x == y2 || x == (d - y2) % d
    };
    bad_mod(k, r_m, d_m) || bad_mod(r_m, k, d_n)
}

impl SequenceSet {
    pub fn new(profile: GrowthProfile) -> Self {
        Self {
            profile,
            state: RwLock::new(State::default()),
        }
    }

    pub fn profile(&self) -> &GrowthProfile {
        &self.profile
    }

    /// Materializes `f` and `d` through index `n`.
    pub fn ensure_d(&self, n: u64) -> Result<(), SeqError> {
        if self.state.read().unwrap().d.len() as u64 >= n {
            return Ok(());
        }
        let mut st = self.state.write().unwrap();
        while (st.d.len() as u64) < n {
            let i = st.d.len() as u64 + 1;
            let f = f_of(&self.profile, i)?;
            if let Some(&prev) = st.f.last() {
                if f < prev {
                    return Err(SeqError::NotMonotone { n: i, what: "f" });
                }
            }
            let d = d_from_f(i, f)?;
            st.f.push(f);
            st.d.push(d);
        }
        Ok(())
    }

    /// Materializes `f, d, q, r` through index `n`.
    pub fn ensure_r(&self, n: u64) -> Result<(), SeqError> {
        if self.state.read().unwrap().r.len() as u64 >= n {
            return Ok(());
        }
        self.ensure_d(n)?;
        let mut st = self.state.write().unwrap();
        while (st.r.len() as u64) < n {
            let i = st.r.len() as u64 + 1;
            let (q, r, cert) = self.next_r(&st, i)?;
            st.q.push(q);
            st.r.push(r);
            st.certs.push(cert);
        }
        Ok(())
    }

    fn next_r(&self, st: &State, n: u64) -> Result<(u64, u64, Certificate), SeqError> {
        let idx = n as usize - 1;
        let d = st.d[idx];
        let q = self
            .profile
            .q_of(n)
            .ok_or(SeqError::ProfileExhausted { n, arg: n })?;
        if q < n || 4 * q > d {
            return Err(SeqError::QOutOfRange { n, q, d });
        }
        if let Some(&prev) = st.q.last() {
            if q < prev {
                return Err(SeqError::NotMonotone { n, what: "q" });
            }
        }
        if d < 16 * n {
            return Err(SeqError::DivisorTooSmall { n, d });
        }
        let window = 17 * n - 1;
        let r = (q + 1..=q + window)
            .find(|&k| (0..idx).all(|m| !conflicts(k, st.r[m], st.d[m], d)))
            .ok_or(SeqError::NoAdmissibleResidue { n, window })?;
        if 3 * r >= d {
            return Err(SeqError::RTooLarge { n, r, d });
        }
        let cert = Certificate {
            d_prime: is_prime(d) && d % 2 == 1,
            bertrand_window: st.f[idx] <= d && d <= 2 * st.f[idx],
            divisor_at_least_16n: true,
            q_window: true,
            r_window: q < r && r < q + 17 * n,
            r_below_third: true,
            congruences: true,
        };
        Ok((q, r, cert))
    }

    fn read<T>(&self, n: u64, pick: impl Fn(&State) -> &Vec<T>) -> Result<T, SeqError>
    where
        T: Copy,
    {
        if n == 0 {
            return Err(SeqError::IndexZero);
        }
        Ok(pick(&self.state.read().unwrap())[n as usize - 1])
    }

    pub fn f(&self, n: u64) -> Result<u64, SeqError> {
        self.ensure_d(n)?;
        self.read(n, |s| &s.f)
    }

    pub fn d(&self, n: u64) -> Result<u64, SeqError> {
        self.ensure_d(n)?;
        self.read(n, |s| &s.d)
    }

    pub fn q(&self, n: u64) -> Result<u64, SeqError> {
        self.ensure_r(n)?;
        self.read(n, |s| &s.q)
    }

    pub fn r(&self, n: u64) -> Result<u64, SeqError> {
        self.ensure_r(n)?;
        self.read(n, |s| &s.r)
    }

    pub fn row(&self, n: u64) -> Result<SequenceRow, SeqError> {
        if n == 0 {
            return Err(SeqError::IndexZero);
        }
        self.ensure_r(n)?;
        let st = self.state.read().unwrap();
        let i = n as usize - 1;
        Ok(SequenceRow {
            n,
            f: st.f[i],
            d: st.d[i],
            q: st.q[i],
            r: st.r[i],
            cert: st.certs[i],
        })
    }

    pub fn rows(&self, n: u64) -> Result<Vec<SequenceRow>, SeqError> {
        self.ensure_r(n)?;
        (1..=n).map(|i| self.row(i)).collect()
    }

    /// `d(1..=n)` as a vector.
    pub fn d_prefix(&self, n: u64) -> Result<Vec<u64>, SeqError> {
        self.ensure_d(n)?;
        Ok(self.state.read().unwrap().d[..n as usize].to_vec())
    }

    /// `(d(m), r(m))` for `m = 1..=n`.
    pub fn dr_prefix(&self, n: u64) -> Result<Vec<(u64, u64)>, SeqError> {
        self.ensure_r(n)?;
        let st = self.state.read().unwrap();
        Ok(st.d[..n as usize]
            .iter()
            .copied()
            .zip(st.r[..n as usize].iter().copied())
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Hypothesis report

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub pass: bool,
    /// Up to ten failing indices.
    pub failures: Vec<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub n_max: u64,
    pub checks: Vec<HypothesisCheck>,
    pub series_sum: f64,
    /// Largest `C` with `d(n) ≥ C·n·log n·(log log n)^{1+ε/2} + C` on `1..=N`.
    pub c0_max: f64,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check_over(
    name: &str,
    n_max: u64,
    detail: String,
    mut ok: impl FnMut(u64) -> bool,
) -> HypothesisCheck {
    let failures: Vec<u64> = (1..=n_max).filter(|&n| !ok(n)).collect();
    HypothesisCheck {
        name: name.to_string(),
        pass: failures.is_empty(),
        failures: failures.into_iter().take(10).collect(),
        detail,
    }
}

/// Checks the hypotheses of the `r` construction, and the growth facts the
/// construction relies on, over `1..=n_max`. Only `f`, `d` and `q` are used.
pub fn validate_hypotheses(seqs: &SequenceSet, n_max: u64) -> Result<HypothesisReport, SeqError> {
    let p = seqs.profile();
    seqs.ensure_d(n_max)?;
    let f: Vec<u64> = (1..=n_max).map(|n| seqs.f(n)).collect::<Result<_, _>>()?;
    let d = seqs.d_prefix(n_max)?;
    let at = |v: &Vec<u64>, n: u64| v[n as usize - 1];
    let half = 1.0 + p.eps / 2.0;
    let growth_term = |n: u64| nloglog(n as f64, half);

    let mut checks = vec![
        check_over(
            "d_odd_prime",
            n_max,
            "(i) d(n) is an odd prime".into(),
            |n| {
                let x = at(&d, n);
                x % 2 == 1 && is_prime(x)
            },
        ),
        check_over(
            "d_growth",
            n_max,
            format!(
                "(ii) d(n) ≥ C·n·log n·(log log n)^{half} + C with C = C₀ = {}",
                p.c0
            ),
            |n| at(&d, n) as f64 >= p.c0 * growth_term(n) + p.c0,
        ),
        check_over(
            "q_window",
            n_max,
            "(iii) n ≤ q(n) ≤ d(n)/4".into(),
            |n| match p.q_of(n) {
                Some(q) => q >= n && 4 * q <= at(&d, n),
                None => false,
            },
        ),
        check_over("d_at_least_16n", n_max, "d(n) ≥ 16n".into(), |n| {
            at(&d, n) >= 16 * n
        }),
        check_over("f_nondecreasing", n_max, "f(n-1) ≤ f(n)".into(), |n| {
            n == 1 || at(&f, n - 1) <= at(&f, n)
        }),
        check_over("d_nondecreasing", n_max, "d(n-1) ≤ d(n)".into(), |n| {
            n == 1 || at(&d, n - 1) <= at(&d, n)
        }),
        check_over(
            "bertrand_window",
            n_max,
            "f(n) ≤ d(n) ≤ 2f(n)".into(),
            |n| at(&f, n) <= at(&d, n) && at(&d, n) <= 2 * at(&f, n),
        ),
        check_over(
            "f_lower_bound",
            n_max,
            format!(
                "f(n) ≥ C₁·n·log n·(log log n)^{half} + C₁ with C₁ = {}",
                p.c1
            ),
            |n| at(&f, n) as f64 >= p.c1 * growth_term(n) + p.c1,
        ),
    ];

    if let ProfileKind::Builtin { c } = p.kind {
        checks.push(check_over(
            "hypothesis_a",
            n_max,
            format!(
                "log F(n) ≥ c·n·log(n)²·log log(n)^{} with c = {c}",
                1.0 + p.eps
            ),
            |n| {
                p.log_f(n).unwrap_or(f64::NEG_INFINITY)
                    >= p.hypothesis_a_floor(c, n) * (1.0 - 1e-12)
            },
        ));
    }

    let series_sum: f64 = d.iter().map(|&x| 1.0 / x as f64).sum();
    checks.push(HypothesisCheck {
        name: "series_bound".into(),
        pass: series_sum < 1.0 / 16.0,
        failures: vec![],
        detail: format!("Σ_{{m≤{n_max}}} 1/d(m) = {series_sum:.6} < 1/16"),
    });

    let c0_max = (1..=n_max)
        .map(|n| at(&d, n) as f64 / (growth_term(n) + 1.0))
        .fold(f64::INFINITY, f64::min);

    Ok(HypothesisReport {
        n_max,
        checks,
        series_sum,
        c0_max,
    })
}
