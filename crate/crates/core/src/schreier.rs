//! Deterministic Schreier–Sims: base, strong generators, exact group order.
//!
//! The chain is built by the incremental algorithm: each level's Schreier
//! generators are sifted through the deeper levels and any nontrivial residue
//! becomes a new strong generator. No randomness is involved.
//!
//! The product of the basic orbit sizes of a partial chain is always a lower
//! bound for the group order. When every generator is even the order is at
//! most `d!/2` (otherwise `d!`), so a partial chain whose orbit product
//! reaches that bound is already complete and construction stops there.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::{make_generators, PermError, Permutation};
use crate::seqgen::is_prime;

const PRESIFT_SEED: u64 = 0x5c4e_1e25_1d35;

struct Level {
    base_point: usize,
    generators: Vec<Permutation>,
    orbit: Vec<usize>,
    // transversal[x] = (u, u⁻¹) with u(base_point) = x
    transversal: Vec<Option<(Permutation, Permutation)>>,
    // tree edge that first reached each point: (orbit index of x, generator)
    parent: Vec<Option<(usize, usize)>>,
    // pairs (orbit[i], generators[j]) with i < done_orbit and j < done_gens
    // have had their Schreier generators sifted
    done_orbit: usize,
    done_gens: usize,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        let id = Permutation::identity(degree).expect("degree ≥ 1");
        let mut transversal = vec![None; degree];
        transversal[base_point] = Some((id.clone(), id));
        Self {
            base_point,
            generators: Vec::new(),
            orbit: vec![base_point],
            transversal,
            parent: vec![None; degree],
            done_orbit: 0,
            done_gens: 0,
        }
    }

    fn add_generator(&mut self, g: Permutation) {
        // Close the orbit under the enlarged generating set.
        let mut i = 0;
        self.generators.push(g);
        let new_gen = self.generators.len() - 1;
        // Existing points only need the new generator; new points need all.
        let old_len = self.orbit.len();
        while i < self.orbit.len() {
            let x = self.orbit[i];
            let range = if i < old_len {
                new_gen..new_gen + 1
            } else {
                0..self.generators.len()
            };
            for j in range {
                let s = &self.generators[j];
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    let u = s.compose_unchecked(&self.transversal[x].as_ref().unwrap().0);
                    let uinv = u.inverse();
                    self.transversal[y] = Some((u, uinv));
                    self.parent[y] = Some((i, j));
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set for a permutation group.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl std::fmt::Debug for StabilizerChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StabilizerChain")
            .field("degree", &self.degree)
            .field("base", &self.base())
            .field("orbit_sizes", &self.orbit_sizes())
            .finish()
    }
}

enum Progress {
    Continue,
    ReachedBound,
}

impl StabilizerChain {
    /// Builds the chain for the group generated by `generators`.
    pub fn build(generators: &[Permutation]) -> Result<Self, PermError> {
        let degree = generators.first().ok_or(PermError::ZeroDegree)?.degree();
        for g in generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut bound = factorial(degree);
        if generators.iter().all(Permutation::is_even) && degree > 1 {
            bound /= 2u32;
        }
        let mut chain = Self {
            degree,
            levels: Vec::new(),
        };
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let Some(first) = gens.first() else {
            return Ok(chain);
        };
        let b0 = first.support()[0];
        chain.levels.push(Level::new(b0, degree));
        for g in gens {
            chain.levels[0].add_generator(g);
        }
        if chain.order() != bound {
            chain.presift(&bound);
        }
        if chain.order() != bound {
            chain.complete(0, &bound);
        }
        Ok(chain)
    }

    /// Sifts a fixed pseudo-random sequence of group elements (product
    /// replacement with a constant seed) and keeps their residues. Every
    /// element sifted lies in the group, so the orbit-product lower bound
    /// stays valid; the exact completion that follows does not depend on
    /// what this phase found, only its running time does.
    fn presift(&mut self, bound: &BigUint) {
        const POOL: usize = 8;
        const QUIET_LIMIT: usize = 24;
        let gens = self.levels[0].generators.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(PRESIFT_SEED);
        let mut pool: Vec<Permutation> = (0..POOL).map(|i| gens[i % gens.len()].clone()).collect();
        let mut acc = Permutation::identity(self.degree).expect("degree ≥ 1");
        let mut quiet = 0;
        while quiet < QUIET_LIMIT {
            let i = rng.gen_range(0..POOL);
            let j = (i + rng.gen_range(1..POOL)) % POOL;
            let other = if rng.gen_bool(0.5) {
                pool[j].clone()
            } else {
                pool[j].inverse()
            };
            pool[i] = if rng.gen_bool(0.5) {
                pool[i].compose_unchecked(&other)
            } else {
                other.compose_unchecked(&pool[i])
            };
            acc = acc.compose_unchecked(&pool[i]);
            let (residue, depth) = self.sift_from(acc.clone(), 0);
            if residue.is_identity() {
                quiet += 1;
                continue;
            }
            quiet = 0;
            // level 0 is generated by the input, whose orbit contains every image of b₀
            debug_assert!(depth >= 1);
            self.insert(residue, 1, depth);
            if self.order() == *bound {
                return;
            }
        }
    }

    /// Sifts Schreier generators at `level` until every pair is handled,
    /// recursing into deeper levels whenever they acquire new generators.
    fn complete(&mut self, level: usize, bound: &BigUint) -> Progress {
        loop {
            let lv = &self.levels[level];
            let (n_orbit, n_gens) = (lv.orbit.len(), lv.generators.len());
            if lv.done_orbit == n_orbit && lv.done_gens == n_gens {
                return Progress::Continue;
            }
            let (done_orbit, done_gens) = (lv.done_orbit, lv.done_gens);
            for oi in 0..n_orbit {
                for gi in 0..n_gens {
                    if oi < done_orbit && gi < done_gens {
                        continue;
                    }
                    let lv = &self.levels[level];
                    let sx = lv.generators[gi].apply(lv.orbit[oi]);
                    if lv.parent[sx] == Some((oi, gi)) {
                        // u_{s(x)} = s·u_x by construction
                        continue;
                    }
                    let h = self.schreier_generator(level, oi, gi);
                    let (residue, depth) = self.sift_from(h, level + 1);
                    if residue.is_identity() {
                        continue;
                    }
                    self.insert(residue, level + 1, depth);
                    if self.order() == *bound {
                        return Progress::ReachedBound;
                    }
                    for l in (level + 1..=depth).rev() {
                        if let Progress::ReachedBound = self.complete(l, bound) {
                            return Progress::ReachedBound;
                        }
                    }
                }
            }
            let lv = &mut self.levels[level];
            lv.done_orbit = n_orbit;
            lv.done_gens = n_gens;
        }
    }

    /// `u_{s(x)}⁻¹ · s · u_x`, which fixes the level's base point.
    fn schreier_generator(&self, level: usize, oi: usize, gi: usize) -> Permutation {
        let lv = &self.levels[level];
        let x = lv.orbit[oi];
        let s = &lv.generators[gi];
        let ux = &lv.transversal[x].as_ref().unwrap().0;
        let sx = s.apply(x);
        let usx_inv = &lv.transversal[sx].as_ref().unwrap().1;
        usx_inv.compose_unchecked(&s.compose_unchecked(ux))
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// at which it stopped (`levels.len()` if it passed every level).
    fn sift_from(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, lv) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(lv.base_point);
            match &lv.transversal[x] {
                None => return (g, l),
                Some((_, uinv)) => g = uinv.compose_unchecked(&g),
            }
        }
        let depth = self.levels.len();
        (g, depth)
    }

    fn insert(&mut self, g: Permutation, from: usize, to: usize) {
        if to == self.levels.len() {
            let bp = g.support()[0];
            self.levels.push(Level::new(bp, self.degree));
        }
        for l in from..=to {
            self.levels[l].add_generator(g.clone());
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Total number of strong generators, counted once per level.
    pub fn strong_generator_count(&self) -> usize {
        self.levels.iter().map(|l| l.generators.len()).sum()
    }

    /// Exact group order: the product of the basic orbit sizes.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Membership by sifting to the identity.
    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch(self.degree, p.degree()));
        }
        let (residue, _) = self.sift_from(p.clone(), 0);
        Ok(residue.is_identity())
    }
}

pub fn build_chain(generators: &[Permutation]) -> Result<StabilizerChain, PermError> {
    StabilizerChain::build(generators)
}

pub fn group_order(chain: &StabilizerChain) -> BigUint {
    chain.order()
}

pub fn contains(chain: &StabilizerChain, p: &Permutation) -> Result<bool, PermError> {
    chain.contains(p)
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Whether `⟨α, β⟩ = Alt(d)` for the generators of [`make_generators`],
/// decided by comparing the exact order with `d!/2`.
pub fn verify_alt_generation(d: usize, r1: usize, r2: usize) -> Result<bool, PermError> {
    if d < 5 || d % 2 == 0 || !is_prime(d as u64) {
        return Err(PermError::GeneratorPrecondition(format!(
            "degree {d} is not an odd prime ≥ 5"
        )));
    }
    let (alpha, beta) = make_generators(d, r1, r2)?;
    let chain = build_chain(&[alpha, beta])?;
    Ok(chain.order() == factorial(d) / 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Closure of the generators under multiplication.
    fn bfs_order(gens: &[Permutation]) -> usize {
        let id = Permutation::identity(gens[0].degree()).unwrap();
        let mut seen = HashSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.compose(g).unwrap();
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn trivial_and_cyclic() {
        let e = Permutation::identity(5).unwrap();
        assert_eq!(build_chain(&[e]).unwrap().order(), BigUint::one());
        let c3 = Permutation::cycle_from(&[0, 1, 2], 3).unwrap();
        assert_eq!(build_chain(&[c3]).unwrap().order(), BigUint::from(3u32));
    }

    #[test]
    fn alt5_and_alt7() {
        let (a, b) = make_generators(5, 2, 2).unwrap();
        assert_eq!(bfs_order(&[a.clone(), b.clone()]), 60);
        let ch = build_chain(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(ch.order(), BigUint::from(60u32));
        assert!(ch.contains(&a).unwrap());
        assert!(ch.contains(&b).unwrap());
        let odd = Permutation::cycle_from(&[0, 1], 5).unwrap();
        assert!(!ch.contains(&odd).unwrap());

        let (a, b) = make_generators(7, 2, 2).unwrap();
        assert_eq!(bfs_order(&[a.clone(), b.clone()]), 2520);
        assert_eq!(
            build_chain(&[a, b]).unwrap().order(),
            BigUint::from(2520u32)
        );
    }

    #[test]
    fn alt_generation_small_primes() {
        assert!(verify_alt_generation(5, 2, 2).unwrap());
        assert!(verify_alt_generation(7, 2, 3).unwrap());
        assert!(verify_alt_generation(11, 3, 3).unwrap());
        assert_eq!(factorial(11) / 2u32, BigUint::from(19_958_400u32));
        assert!(verify_alt_generation(9, 2, 2).is_err());
        assert!(verify_alt_generation(7, 3, 4).is_err());
    }

    #[test]
    fn orders_match_bfs_on_assorted_groups() {
        let cases: Vec<Vec<Permutation>> = vec![
            // dihedral of order 10
            vec![
                Permutation::from_images(vec![1, 2, 3, 4, 0]).unwrap(),
                Permutation::from_images(vec![0, 4, 3, 2, 1]).unwrap(),
            ],
            // S4
            vec![
                Permutation::cycle_from(&[0, 1], 4).unwrap(),
                Permutation::cycle_from(&[0, 1, 2, 3], 4).unwrap(),
            ],
            // C2 × C2 × C3 on 7 points
            vec![
                Permutation::cycle_from(&[0, 1], 7).unwrap(),
                Permutation::cycle_from(&[2, 3], 7).unwrap(),
                Permutation::cycle_from(&[4, 5, 6], 7).unwrap(),
            ],
            // S6 via transposition and 6-cycle
            vec![
                Permutation::cycle_from(&[0, 1], 6).unwrap(),
                Permutation::cycle_from(&[0, 1, 2, 3, 4, 5], 6).unwrap(),
            ],
            // imprimitive wreath-like group on 6 points
            vec![
                Permutation::from_images(vec![1, 0, 2, 3, 4, 5]).unwrap(),
                Permutation::from_images(vec![2, 3, 4, 5, 0, 1]).unwrap(),
            ],
        ];
        for gens in cases {
            let want = bfs_order(&gens);
            let ch = build_chain(&gens).unwrap();
            assert_eq!(ch.order(), BigUint::from(want), "{gens:?}");
        }
    }

    #[test]
    fn mismatch_rejected() {
        let a = Permutation::identity(3).unwrap();
        let b = Permutation::identity(4).unwrap();
        assert!(build_chain(&[a.clone(), b.clone()]).is_err());
        let ch = build_chain(&[a]).unwrap();
        assert!(ch.contains(&b).is_err());
    }
}
