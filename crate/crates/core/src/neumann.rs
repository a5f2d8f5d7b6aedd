//! The group `G = B(d, r, r) = ⟨α, β⟩ ≤ ∏ₘ Alt(d(m))`.
//!
//! Elements are handled as words. Coordinate `m` of a word `w` is
//! `w(αₘ, βₘ)`; the tail of the infinite tuple is read off the lamplighter
//! image `w(α∞, β∞)`, because at every coordinate satisfying the spread
//! condition for `|w|` the coordinate is trivial exactly when the lamplighter
//! image is.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::perm::{make_generators, PermError, Permutation, RotatedSparse};
use crate::seqgen::{GrowthProfile, SeqError, SequenceSet};
use crate::words::{enumerate_reduced, Letter, Word};
use crate::wreath::WreathElement;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeumannError {
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("spread condition for length {n} fails at coordinate {m} beyond the cutoff scan")]
    SpreadAssertionFailed { n: u64, m: u64 },
    #[error("witness check failed at m={m}: {reason}")]
    WitnessCheckFailed { m: u64, reason: String },
    #[error("word length {len} exceeds the signature class {n_class}")]
    LengthClass { len: usize, n_class: u64 },
    #[error("ball of radius {n} needs more than {limit} words")]
    BudgetExceeded { n: u64, limit: usize },
}

/// `r ≥ 2n+1` and `d - 2r ≥ 2n+1`: the conjugates `αⁱβα⁻ⁱ`, `|i| ≤ n`, are
/// 3-cycles whose supports `{i, i+r, i+2r}` are pairwise disjoint.
pub fn spread_condition(d: u64, r: u64, n: u64) -> bool {
    let need = 2 * n + 1;
    r >= need && d >= 2 * r && d - 2 * r >= need
}

/// The support of `αᵢ β α⁻ⁱ` at degree `d` with `r₁ = r₂ = r`.
fn lamp_cycle(i: i64, r: u64, d: u64) -> [usize; 3] {
    let d = d as i64;
    let r = r as i64;
    [
        i.rem_euclid(d) as usize,
        (i + r).rem_euclid(d) as usize,
        (i + 2 * r).rem_euclid(d) as usize,
    ]
}

/// A group element of `B_S(n_class)` up to equality in `G`: the coordinates
/// `1..=cutoff(2·n_class)` and the lamplighter image. Two words of length at
/// most `n_class` are equal in `G` iff their signatures are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementSignature {
    pub low_coords: Vec<Permutation>,
    pub wreath: WreathElement,
}

impl ElementSignature {
    /// Canonical byte encoding.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.low_coords.len() as u64).to_le_bytes());
        for p in &self.low_coords {
            out.extend_from_slice(&(p.degree() as u64).to_le_bytes());
            for x in p.images() {
                out.extend_from_slice(&(x as u32).to_le_bytes());
            }
        }
        self.wreath.encode(&mut out);
        out
    }
}

type GeneratorPair = Arc<(Permutation, Permutation)>;

/// The sequences together with a cache of dense generators per coordinate.
/// Shared freely between threads; all state only grows.
pub struct GroupContext {
    seqs: SequenceSet,
    gens: RwLock<HashMap<u64, GeneratorPair>>,
}

impl GroupContext {
    pub fn new(profile: GrowthProfile) -> Self {
        Self::from_sequences(SequenceSet::new(profile))
    }

    pub fn from_sequences(seqs: SequenceSet) -> Self {
        Self {
            seqs,
            gens: RwLock::new(HashMap::new()),
        }
    }

    pub fn seqs(&self) -> &SequenceSet {
        &self.seqs
    }

    /// `(d(m), r(m))`.
    pub fn params(&self, m: u64) -> Result<(u64, u64), NeumannError> {
        Ok((self.seqs.d(m)?, self.seqs.r(m)?))
    }

    /// `(αₘ, βₘ) = make_generators(d(m), r(m), r(m))`, cached.
    pub fn generators(&self, m: u64) -> Result<GeneratorPair, NeumannError> {
        if let Some(g) = self.gens.read().unwrap().get(&m) {
            return Ok(g.clone());
        }
        let (d, r) = self.params(m)?;
        let pair = Arc::new(make_generators(d as usize, r as usize, r as usize)?);
        Ok(self.gens.write().unwrap().entry(m).or_insert(pair).clone())
    }

    /// `w(αₘ, βₘ)` by composing dense generators letter by letter.
    pub fn coordinate_eval(&self, w: &Word, m: u64) -> Result<Permutation, NeumannError> {
        let g = self.generators(m)?;
        let (a, b) = (&g.0, &g.1);
        let (a_inv, b_inv) = (a.inverse(), b.inverse());
        let mut acc = Permutation::identity(a.degree())?;
        for &l in w.letters() {
            let s = match l {
                Letter::A => a,
                Letter::AInv => &a_inv,
                Letter::B => b,
                Letter::BInv => &b_inv,
            };
            acc = acc.compose(s)?;
        }
        Ok(acc)
    }

    /// `w(αₘ, βₘ)` in rotated sparse form; `O(|w|)` whatever the degree.
    pub fn coordinate_eval_sparse(&self, w: &Word, m: u64) -> Result<RotatedSparse, NeumannError> {
        let (d, r) = self.params(m)?;
        let mut acc = RotatedSparse::identity(d as usize)?;
        let beta = lamp_cycle(0, r, d);
        for &l in w.letters() {
            match l {
                Letter::A => acc.rotate(1),
                Letter::AInv => acc.rotate(-1),
                Letter::B => acc.mul_cycle_power(&beta, 1),
                Letter::BInv => acc.mul_cycle_power(&beta, -1),
            }
        }
        Ok(acc)
    }

    /// `∏ᵢ (αₘⁱ βₘ αₘ⁻ⁱ)^{cᵢ} · αₘˡ` for the lamp data `(c, l)` of `x`.
    pub fn reconstruct_from_lamps(
        &self,
        x: &WreathElement,
        m: u64,
    ) -> Result<RotatedSparse, NeumannError> {
        let (d, r) = self.params(m)?;
        let (lamps, l) = x.lamp_data();
        let mut acc = RotatedSparse::identity(d as usize)?;
        for (&i, &c) in &lamps {
            acc.mul_cycle_power(&lamp_cycle(i, r, d), c as i64);
        }
        acc.rotate(l);
        Ok(acc)
    }

    pub fn spread_ok(&self, m: u64, n: u64) -> Result<bool, NeumannError> {
        let (d, r) = self.params(m)?;
        Ok(spread_condition(d, r, n))
    }

    /// The largest `m ≤ 2n+1` at which the spread condition for length `n`
    /// fails, or 0.
    ///
    /// For `m ≥ 2n+1` the sequence side conditions give `r(m) > q(m) ≥ m`
    /// and `d(m) - 2r(m) > d(m)/3 ≥ 16m/3`, so the condition holds there; the
    /// scan still asserts it on `(m₀, 2n+2]`.
    pub fn cutoff(&self, n: u64) -> Result<u64, NeumannError> {
        let bound = 2 * n + 1;
        let mut m0 = 0;
        for m in 1..=bound {
            if !self.spread_ok(m, n)? {
                m0 = m;
            }
        }
        for m in m0 + 1..=bound + 1 {
            if !self.spread_ok(m, n)? {
                return Err(NeumannError::SpreadAssertionFailed { n, m });
            }
        }
        Ok(m0)
    }

    /// Whether `w(α, β) = e` in `G`.
    pub fn is_trivial(&self, w: &Word) -> Result<bool, NeumannError> {
        if !WreathElement::eval(w).is_identity() {
            return Ok(false);
        }
        for m in 1..=self.cutoff(w.len() as u64)? {
            if !self.coordinate_eval_sparse(w, m)?.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool, NeumannError> {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    pub fn signature(&self, w: &Word, n_class: u64) -> Result<ElementSignature, NeumannError> {
        if w.len() as u64 > n_class {
            return Err(NeumannError::LengthClass {
                len: w.len(),
                n_class,
            });
        }
        let m0 = self.cutoff(2 * n_class)?;
        let low_coords = (1..=m0)
            .map(|m| Ok(self.coordinate_eval_sparse(w, m)?.to_dense()))
            .collect::<Result<Vec<_>, NeumannError>>()?;
        Ok(ElementSignature {
            low_coords,
            wreath: WreathElement::eval(w),
        })
    }

    /// `ρₙ(w)`: the coordinates `1..=2n`.
    pub fn rho(&self, w: &Word, n: u64) -> Result<Vec<Permutation>, NeumannError> {
        (1..=2 * n)
            .map(|m| Ok(self.coordinate_eval_sparse(w, m)?.to_dense()))
            .collect()
    }

    /// `[b, aʳ b a⁻ʳ]` with `r = r(m)`, after checking that it is nontrivial
    /// at coordinate `m`, trivial at every other coordinate up to
    /// `max(m, cutoff(|w|))`, and trivial in the lamplighter group. Beyond
    /// that range triviality follows from the lamplighter image.
    pub fn witness(&self, m: u64) -> Result<Word, NeumannError> {
        let (_, r) = self.params(m)?;
        let b: Word = Word::power(Letter::B, 1);
        let w = Word::commutator(&b, &Word::conjugate(&b, &Word::a_pow(r as i64)));
        let fail = |reason: String| NeumannError::WitnessCheckFailed { m, reason };
        if w.len() as u64 != 4 + 4 * r {
            return Err(fail(format!("length {} ≠ 4 + 4r = {}", w.len(), 4 + 4 * r)));
        }
        if !WreathElement::eval(&w).is_identity() {
            return Err(fail("nontrivial lamplighter image".into()));
        }
        let upto = m.max(self.cutoff(w.len() as u64)?);
        for k in 1..=upto {
            let trivial = self.coordinate_eval_sparse(&w, k)?.is_identity();
            if trivial == (k == m) {
                return Err(fail(format!(
                    "coordinate {k} is {}",
                    if trivial { "trivial" } else { "nontrivial" }
                )));
            }
        }
        Ok(w)
    }

    /// One representative per element of `B_S(n)`, the shortlex-least word
    /// of each, in shortlex order. `budget` caps the number of words examined.
    pub fn ball(
        &self,
        n: u64,
        budget: Option<usize>,
    ) -> Result<Vec<(Word, ElementSignature)>, NeumannError> {
        let mut seen: HashMap<ElementSignature, ()> = HashMap::new();
        let mut out = Vec::new();
        for (count, w) in enumerate_reduced(n as usize).enumerate() {
            if let Some(limit) = budget {
                if count >= limit {
                    return Err(NeumannError::BudgetExceeded { n, limit });
                }
            }
            let sig = self.signature(&w, n)?;
            if seen.insert(sig.clone(), ()).is_none() {
                out.push((w, sig));
            }
        }
        Ok(out)
    }
}
