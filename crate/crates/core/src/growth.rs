//! Growth bounds in natural-log domain.
//!
//! The residual finiteness growth `F_G(n)` and the full growth `R_G(n)` are
//! never computed; only the proven bounds are:
//!
//! * `F_G(4 + 4r(m)) ≥ d(m)!/2`,
//! * `F_G(n) ≤ d(n)!/2`,
//! * `R_G(n) ≤ 2^{-2n} ∏_{k ≤ 2n} d(k)!`,
//!
//! together with the factorial estimates that turn them into powers of `F`.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::neumann::{GroupContext, NeumannError};
use crate::seqgen::GrowthProfile;

/// Largest `n` whose factorial is kept exactly.
pub const EXACT_FACTORIAL_MAX: u64 = 2000;

/// Natural log of `x`, accurate to a few ulps whatever the size of `x`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln 0");
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("fits in 64 bits");
    (top as f64).ln() + shift as f64 * LN_2
}

/// A positive quantity as its natural log, with the exact integer when it is
/// small enough to carry.
#[derive(Clone, Debug, PartialEq)]
pub struct LogValue {
    // invariant: if exact is Some(x), |ln x - ln| ≤ 1e-9·max(1, ln)
    ln: f64,
    exact: Option<BigUint>,
}

impl LogValue {
    pub fn from_exact(x: BigUint) -> Self {
        Self {
            ln: ln_biguint(&x),
            exact: Some(x),
        }
    }

    pub fn from_ln(ln: f64) -> Self {
        Self { ln, exact: None }
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn exact(&self) -> Option<&BigUint> {
        self.exact.as_ref()
    }

    /// `x / 2`; the exact part survives only when `x` is even.
    pub fn half(&self) -> Self {
        let two = BigUint::from(2u32);
        Self {
            ln: self.ln - LN_2,
            exact: self
                .exact
                .as_ref()
                .filter(|x| (*x % &two).is_zero())
                .map(|x| x / &two),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            ln: self.ln + other.ln,
            exact: match (&self.exact, &other.exact) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            },
        }
    }
}

fn exact_factorials() -> &'static [BigUint] {
    static TABLE: OnceLock<Vec<BigUint>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(EXACT_FACTORIAL_MAX as usize + 1);
        v.push(BigUint::one());
        for k in 1..=EXACT_FACTORIAL_MAX {
            let next = v.last().unwrap() * BigUint::from(k);
            v.push(next);
        }
        v
    })
}

/// `n!` exactly, for `n ≤ EXACT_FACTORIAL_MAX`.
pub fn exact_factorial(n: u64) -> Option<&'static BigUint> {
    exact_factorials().get(n as usize)
}

/// `ln n!`: exact integer for `n ≤ 2000`, `ln Γ(n+1)` beyond.
pub fn log_factorial(n: u64) -> LogValue {
    match exact_factorial(n) {
        Some(x) => LogValue {
            ln: ln_biguint(x),
            exact: Some(x.clone()),
        },
        None => LogValue::from_ln(ln_gamma(n as f64 + 1.0)),
    }
}

/// `Σ_{k ≤ n} ln k`, an independent path to `ln n!`.
pub fn log_factorial_summed(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `n ln n - n ≤ ln n! ≤ n ln n`.
pub fn stirling_bounds(n: u64) -> (f64, f64) {
    if n == 0 {
        return (-1.0, 0.0);
    }
    let x = n as f64;
    (x * x.ln() - x, x * x.ln())
}

// ---------------------------------------------------------------------------
// Bound tables

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Rf,
    FullRf,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: u64,
    pub lower_log: f64,
    pub upper_log: f64,
    pub kind: BoundKind,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    /// Rows with `lower_log > upper_log`.
    pub fn violations(&self) -> Vec<BoundRow> {
        self.rows
            .iter()
            .filter(|r| r.lower_log > r.upper_log)
            .copied()
            .collect()
    }
}

/// `(4 + 4r, ln(d!/2))`.
pub fn lower_point(d: u64, r: u64) -> (u64, LogValue) {
    (4 + 4 * r, log_factorial(d).half())
}

/// A lower-bound point `F_G(n) ≥ e^{value}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerPoint {
    pub m: u64,
    pub n: u64,
    pub lower_log: f64,
}

/// `F_G(4 + 4r(m)) ≥ d(m)!/2` for `m = 1..=m_max`.
pub fn rf_lower_points(ctx: &GroupContext, m_max: u64) -> Result<Vec<LowerPoint>, NeumannError> {
    (1..=m_max)
        .map(|m| {
            let (d, r) = ctx.params(m)?;
            let (n, v) = lower_point(d, r);
            Ok(LowerPoint {
                m,
                n,
                lower_log: v.ln(),
            })
        })
        .collect()
}

/// `d(n)!/2 ≥ F_G(n)`.
pub fn rf_upper(ctx: &GroupContext, n: u64) -> Result<LogValue, NeumannError> {
    Ok(log_factorial(ctx.seqs().d(n)?).half())
}

/// `2^{-2n} ∏_{k ≤ 2n} d(k)! ≥ R_G(n)`.
pub fn full_rf_upper(ctx: &GroupContext, n: u64) -> Result<LogValue, NeumannError> {
    let mut acc = LogValue::from_exact(BigUint::one());
    for d in ctx.seqs().d_prefix(2 * n)? {
        acc = acc.mul(&log_factorial(d).half());
    }
    Ok(acc)
}

/// `F_G(n) ≤ R_G(n) ≤ F_G(2n)^{|B(n)|²}` applied to the upper bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub n: u64,
    pub ball_size: u64,
    pub rf_upper_log: f64,
    pub full_rf_upper_log: f64,
    pub rf_upper_2n_pow_log: f64,
    pub pass: bool,
}

pub fn chain_check(ctx: &GroupContext, n: u64, ball_size: u64) -> Result<ChainCheck, NeumannError> {
    let a = rf_upper(ctx, n)?.ln();
    let b = full_rf_upper(ctx, n)?.ln();
    let c = (ball_size as f64).powi(2) * rf_upper(ctx, 2 * n)?.ln();
    Ok(ChainCheck {
        n,
        ball_size,
        rf_upper_log: a,
        full_rf_upper_log: b,
        rf_upper_2n_pow_log: c,
        pass: a <= b && b <= c,
    })
}

/// `f(n)!/2 ≤ d(n)!/2 ≤ (2f(n))!` with exact integers.
pub fn exact_factorial_sandwich(ctx: &GroupContext, n: u64) -> Result<bool, NeumannError> {
    let f = ctx.seqs().f(n)?;
    let d = ctx.seqs().d(n)?;
    let fact = |k: u64| -> BigUint { (1..=k).map(BigUint::from).product() };
    let two = BigUint::from(2u32);
    let df = fact(d) / &two;
    Ok(fact(f) / &two <= df && df <= fact(2 * f))
}

/// The proven bounds on `F_G` and `R_G` for `n = 1..=n_max`.
///
/// `F_G` is nondecreasing, so the lower bound at `n` is the largest lower
/// point at or below `n` (or `ln 1`); `R_G ≥ F_G` gives the same lower bound
/// for the full growth.
pub fn bound_table(ctx: &GroupContext, n_max: u64) -> Result<BoundTable, NeumannError> {
    let lower = rf_lower_points(ctx, n_max)?;
    let mut rows = Vec::with_capacity(2 * n_max as usize);
    for n in 1..=n_max {
        let lower_log = lower
            .iter()
            .filter(|p| p.n <= n)
            .map(|p| p.lower_log)
            .fold(0.0, f64::max);
        rows.push(BoundRow {
            n,
            lower_log,
            upper_log: rf_upper(ctx, n)?.ln(),
            kind: BoundKind::Rf,
        });
        rows.push(BoundRow {
            n,
            lower_log,
            upper_log: full_rf_upper(ctx, n)?.ln(),
            kind: BoundKind::FullRf,
        });
    }
    Ok(BoundTable { rows })
}

// ---------------------------------------------------------------------------
// Envelopes

/// Candidate constants `c₁, c₂, c₃` for the envelope
/// `F(n/c₁ - c₂)^{1 - c₃ λ(n)} ≤ F_G(n) ≤ F(c₁n + c₂)^{2 + c₃ λ(n)}`,
/// `λ(n) = lnlnln F(n) / lnln F(n)`, and its full-growth analogue with upper
/// exponent `(2 + c₃ ln n / lnln F(n))·n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for EnvelopeConstants {
    fn default() -> Self {
        Self {
            c1: 2.0,
            c2: 512.0,
            c3: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub n: u64,
    pub kind: BoundKind,
    pub lower_log: f64,
    pub upper_log: f64,
    pub log_f: Option<f64>,
    pub envelope_lower_log: Option<f64>,
    pub envelope_upper_log: Option<f64>,
    pub bounds_ordered: bool,
    pub lower_inside: Option<bool>,
    pub upper_inside: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub constants: EnvelopeConstants,
    pub rows: Vec<EnvelopeRow>,
}

impl EnvelopeReport {
    pub fn table(&self) -> BoundTable {
        BoundTable {
            rows: self
                .rows
                .iter()
                .map(|r| BoundRow {
                    n: r.n,
                    lower_log: r.lower_log,
                    upper_log: r.upper_log,
                    kind: r.kind,
                })
                .collect(),
        }
    }
}

/// `ln F(x)` for real `x ≥ 1`, reading `F` at `⌈x⌉`; `None` below 1 or
/// outside the profile.
fn log_f_at(profile: &GrowthProfile, x: f64) -> Option<f64> {
    if x < 1.0 {
        return None;
    }
    profile.log_f(x.ceil() as u64)
}

/// `(lnlnln F / lnln F, ln n / lnln F)` at `n`, with non-positive logs read
/// as 0.
fn correction_terms(log_f: f64, n: u64) -> (f64, f64) {
    let ll = if log_f > 1.0 { log_f.ln() } else { 0.0 };
    if ll <= 0.0 {
        return (0.0, 0.0);
    }
    let lll = if ll > 1.0 { ll.ln() } else { 0.0 };
    (lll / ll, (n as f64).ln() / ll)
}

/// The computed bounds against the envelopes for the given constants.
/// Toy profiles have no `F`, so only `bounds_ordered` is meaningful there.
pub fn envelope_report(
    ctx: &GroupContext,
    n_max: u64,
    constants: EnvelopeConstants,
) -> Result<EnvelopeReport, NeumannError> {
    let profile = ctx.seqs().profile();
    let EnvelopeConstants { c1, c2, c3 } = constants;
    let table = bound_table(ctx, n_max)?;
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let n = row.n;
            let log_f = profile.log_f(n);
            let (lam, mu) = log_f.map_or((0.0, 0.0), |v| correction_terms(v, n));
            let env_lower = log_f.map(|_| {
                log_f_at(profile, n as f64 / c1 - c2).map_or(0.0, |v| v * (1.0 - c3 * lam))
            });
            let up_arg = log_f_at(profile, c1 * n as f64 + c2);
            let env_upper = log_f.and(up_arg).map(|v| match row.kind {
                BoundKind::Rf => v * (2.0 + c3 * lam),
                BoundKind::FullRf => v * (2.0 + c3 * mu) * n as f64,
            });
            EnvelopeRow {
                n,
                kind: row.kind,
                lower_log: row.lower_log,
                upper_log: row.upper_log,
                log_f,
                envelope_lower_log: env_lower,
                envelope_upper_log: env_upper,
                bounds_ordered: row.lower_log <= row.upper_log,
                lower_inside: env_lower.map(|e| e <= row.lower_log),
                upper_inside: env_upper.map(|e| row.upper_log <= e),
            }
        })
        .collect();
    Ok(EnvelopeReport { constants, rows })
}

/// Whether `lnln F(n) ≥ (ln n)² + ln c`.
pub fn loglog_floor_holds(profile: &GrowthProfile, c: f64, n: u64) -> Option<bool> {
    let v = profile.log_f(n)?;
    if v <= 0.0 {
        return Some(false);
    }
    let ln_n = (n as f64).ln();
    Some(v.ln() >= ln_n * ln_n + c.ln())
}

// ---------------------------------------------------------------------------
// Factorial estimates

/// Empirical constants in
/// (a) `ln((K g)!) = K ln G + O(ln G · lnlnln G / lnln G)` and
/// (b) `ln((K n g)!) ≤ K n ln G + O(n ln G ln n / lnln G)`,
/// with `g = ⌈ln G / lnln G⌉`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StirlingReport {
    pub k: u64,
    pub n_max: u64,
    /// Indices skipped because `ln G ≤ e` leaves the error terms undefined.
    pub skipped: u64,
    pub const_a_max: f64,
    pub const_a_tail_max: f64,
    pub const_b_max: f64,
    pub const_b_tail_max: f64,
    /// `ln G / lnln G ≤ g ≤ 2 ln G / lnln G` at every used index.
    pub g_sandwich: bool,
    /// Last-decile maxima no larger than first-decile maxima.
    pub tail_not_growing: bool,
    pub pass: bool,
}

/// Evaluates both estimates for `n ≤ n_max`. Passes when every ratio is
/// finite and each last-decile maximum is at most twice the overall maximum.
pub fn stirling_check(log_g: impl Fn(u64) -> f64, n_max: u64, k: u64) -> StirlingReport {
    let mut used: Vec<(f64, f64)> = Vec::new();
    let mut skipped = 0;
    let mut g_sandwich = true;
    for n in 1..=n_max {
        let lg = log_g(n);
        if !(lg > std::f64::consts::E) {
            skipped += 1;
            continue;
        }
        let ll = lg.ln();
        let lll = ll.ln();
        let g = (lg / ll).ceil();
        g_sandwich &= lg / ll <= g && g <= 2.0 * lg / ll;
        let kf = k as f64;
        let nf = n as f64;
        let a = (log_factorial((kf * g) as u64).ln() - kf * lg).abs() / (lg * lll / ll);
        let b = if n >= 2 {
            let excess = log_factorial((kf * nf * g) as u64).ln() - kf * nf * lg;
            excess.max(0.0) / (nf * lg * nf.ln() / ll)
        } else {
            0.0
        };
        used.push((a, b));
    }
    let max =
        |xs: &[(f64, f64)], pick: fn(&(f64, f64)) -> f64| xs.iter().map(pick).fold(0.0, f64::max);
    let decile = (used.len() / 10).max(1).min(used.len());
    let tail = &used[used.len() - decile..];
    let head = &used[..decile];
    let (a_max, b_max) = (max(&used, |p| p.0), max(&used, |p| p.1));
    let (a_tail, b_tail) = (max(tail, |p| p.0), max(tail, |p| p.1));
    let finite = used.iter().all(|p| p.0.is_finite() && p.1.is_finite());
    StirlingReport {
        k,
        n_max,
        skipped,
        const_a_max: a_max,
        const_a_tail_max: a_tail,
        const_b_max: b_max,
        const_b_tail_max: b_tail,
        g_sandwich,
        tail_not_growing: a_tail <= max(head, |p| p.0) && b_tail <= max(head, |p| p.1),
        pass: finite && !used.is_empty() && a_tail <= 2.0 * a_max && b_tail <= 2.0 * b_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> GroupContext {
        GroupContext::new(GrowthProfile::toy())
    }

    #[test]
    fn small_factorials() {
        let v = log_factorial(10);
        assert_eq!(v.exact().unwrap(), &BigUint::from(3_628_800u32));
        assert!((v.ln() - 3_628_800f64.ln()).abs() < 1e-12);
        assert!((v.ln() - 15.1044).abs() < 1e-4);
        let (lo, hi) = stirling_bounds(10);
        assert!((lo - 13.0259).abs() < 1e-3 && (hi - 23.0259).abs() < 1e-3);
        assert!(lo <= v.ln() && v.ln() <= hi);
        assert_eq!(log_factorial(0).ln(), 0.0);
        assert_eq!(log_factorial(0).exact().unwrap(), &BigUint::one());
    }

    #[test]
    fn exact_and_summed_paths_agree() {
        for n in (0..=EXACT_FACTORIAL_MAX)
            .step_by(37)
            .chain([EXACT_FACTORIAL_MAX])
        {
            let a = log_factorial(n).ln();
            let b = log_factorial_summed(n);
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "n={n}");
        }
        for n in [2001u64, 5000, 40_000] {
            let a = log_factorial(n).ln();
            let b = log_factorial_summed(n);
            assert!(log_factorial(n).exact().is_none());
            assert!((a - b).abs() <= 1e-9 * a, "n={n}");
        }
    }

    #[test]
    fn ln_of_huge_integers() {
        let x = BigUint::one() << 5000u32;
        assert!((ln_biguint(&x) - 5000.0 * LN_2).abs() < 1e-9);
        assert_eq!(ln_biguint(&BigUint::one()), 0.0);
    }

    #[test]
    fn lower_point_example() {
        let (n, v) = lower_point(17, 5);
        assert_eq!(n, 24);
        assert_eq!(v.exact().unwrap(), &BigUint::from(177_843_714_048_000u64));
    }

    #[test]
    fn full_upper_two_fives() {
        let c = GroupContext::new(GrowthProfile::toy_table(vec![5, 5]));
        let v = full_rf_upper(&c, 1).unwrap();
        assert_eq!(v.exact().unwrap(), &BigUint::from(3600u32));
        assert!((v.ln() - 3600f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn upper_bounds_monotone_and_ordered() {
        let c = ctx();
        let d3 = c.seqs().d(3).unwrap();
        assert_eq!(rf_upper(&c, 3).unwrap(), log_factorial(d3).half());
        let mut prev = f64::NEG_INFINITY;
        for n in 1..=30 {
            let u = rf_upper(&c, n).unwrap().ln();
            assert!(u >= prev);
            prev = u;
            assert!(full_rf_upper(&c, n).unwrap().ln() >= u);
        }
    }

    #[test]
    fn lower_points_under_upper() {
        let c = ctx();
        let pts = rf_lower_points(&c, 20).unwrap();
        for w in pts.windows(2) {
            assert!(w[0].lower_log <= w[1].lower_log);
        }
        for p in &pts {
            assert!(p.lower_log <= rf_upper(&c, p.n).unwrap().ln());
        }
        assert!(bound_table(&c, 40).unwrap().violations().is_empty());
    }

    #[test]
    fn exact_sandwich_small() {
        let c = ctx();
        for n in 1..=6 {
            assert!(exact_factorial_sandwich(&c, n).unwrap());
        }
    }

    #[test]
    fn envelope_on_builtin() {
        let c = GroupContext::new(GrowthProfile::builtin(1.0, 1.0));
        let rep = envelope_report(&c, 12, EnvelopeConstants::default()).unwrap();
        assert_eq!(rep.rows.len(), 24);
        for r in &rep.rows {
            assert!(r.bounds_ordered);
            assert!(r.log_f.is_some());
        }
        let toy = envelope_report(&ctx(), 5, EnvelopeConstants::default()).unwrap();
        assert!(toy.rows.iter().all(|r| r.envelope_upper_log.is_none()));
    }

    #[test]
    fn loglog_floor() {
        // ln F(n) = e·n^{ln n}: lnln F = 1 + (ln n)²
        let t: Vec<f64> = (1..=50u64)
            .map(|n| std::f64::consts::E * (n as f64).powf((n as f64).ln()))
            .collect();
        let p = GrowthProfile::table(t);
        assert!((2..=50).all(|n| loglog_floor_holds(&p, 1.0, n) == Some(true)));
        let b = GrowthProfile::builtin(1.0, 1.0);
        assert_eq!(loglog_floor_holds(&b, 1.0, 100), Some(false));
    }

    #[test]
    fn stirling_square_exponent() {
        let rep = stirling_check(|n| (n * n) as f64, 200, 2);
        assert!(rep.pass && rep.g_sandwich);
        assert_eq!(rep.skipped, 1);
        assert!(rep.const_a_max.is_finite() && rep.const_a_max > 0.0);
    }
}
