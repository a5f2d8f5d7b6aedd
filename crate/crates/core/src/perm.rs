//! Permutations of `{0, …, d-1}` stored as dense image tables.
//!
//! Composition follows the left-action convention: `p.compose(&q)` is the
//! map `x ↦ p(q(x))`, so the right factor acts first. Points are 0-based;
//! the textbook point `k` corresponds to index `k - 1`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("permutation degree must be at least 1")]
    ZeroDegree,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image table is not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("point {point} repeated in cycle")]
    RepeatedPoint { point: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("generator precondition violated: {0}")]
    GeneratorPrecondition(String),
}

/// A bijection of `{0, …, degree-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        Ok(Self {
            images: (0..degree as u32).collect(),
        })
    }

    /// Builds a permutation from an explicit image table, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        if d == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(PermError::NotBijection(d));
            }
            seen[x] = true;
        }
        Ok(Self {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(!images.is_empty());
        Self { images }
    }

    /// The cycle `points[0] → points[1] → … → points[0]` on `degree` points.
    pub fn cycle_from(points: &[usize], degree: usize) -> Result<Self, PermError> {
        let mut p = Self::identity(degree)?;
        let mut seen = vec![false; degree];
        for &x in points {
            if x >= degree {
                return Err(PermError::PointOutOfRange { point: x, degree });
            }
            if seen[x] {
                return Err(PermError::RepeatedPoint { point: x });
            }
            seen[x] = true;
        }
        for (i, &x) in points.iter().enumerate() {
            p.images[x] = points[(i + 1) % points.len()] as u32;
        }
        Ok(p)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    /// `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Self {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// `self^k` for any integer `k`, by repeated squaring.
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::from_raw((0..self.degree() as u32).collect());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self, PermError> {
        Ok(g.compose(self)?.compose_unchecked(&g.inverse()))
    }

    /// `[self, other] = self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &Self) -> Result<Self, PermError> {
        Ok(self
            .inverse()
            .compose(&other.inverse())?
            .compose_unchecked(self)
            .compose_unchecked(other))
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable();
        lens.dedup();
        lens.into_iter().fold(BigUint::one(), |acc, l| {
            let l = BigUint::from(l);
            let g = gcd(&acc, &l);
            acc * l / g
        })
    }

    /// Points moved by the permutation, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        self.images()
            .enumerate()
            .filter(|&(x, y)| x != y)
            .map(|(x, _)| x)
            .collect()
    }

    pub fn is_even(&self) -> bool {
        // A cycle of length k is a product of k-1 transpositions.
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    use num_traits::Zero;
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()[{}]", self.degree());
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "[{}]", self.degree())
    }
}

/// `α = (0 1 ⋯ d-1)` and `β = (0, r1, r1+r2)` on `d` points.
///
/// `d` must be an odd prime at least 5 and `r1 + r2 ≤ d - 1`; both
/// generators are then even.
pub fn make_generators(
    d: usize,
    r1: usize,
    r2: usize,
) -> Result<(Permutation, Permutation), PermError> {
    if d < 5 || !crate::seqgen::is_prime(d as u64) {
        return Err(PermError::GeneratorPrecondition(format!(
            "degree {d} is not an odd prime ≥ 5"
        )));
    }
    if r1 == 0 || r2 == 0 || r1 + r2 > d - 1 {
        return Err(PermError::GeneratorPrecondition(format!(
            "need r1, r2 ≥ 1 and r1 + r2 ≤ d - 1 (got r1={r1}, r2={r2}, d={d})"
        )));
    }
    let alpha = Permutation::from_raw((0..d as u32).map(|x| (x + 1) % d as u32).collect());
    let beta = Permutation::cycle_from(&[0, r1, r1 + r2], d)?;
    Ok((alpha, beta))
}

/// A permutation of the form `π · αᵏ`, where `α` is the rotation
/// `x ↦ x+1 mod d` and `π` is stored sparsely as its moved points.
///
/// Words in `α` and conjugates of a small-support element stay cheap in this
/// form regardless of the degree, which is what lets coordinates of degree
/// in the thousands be evaluated letter by letter.
#[derive(Clone, Debug)]
pub struct RotatedSparse {
    degree: usize,
    moved: HashMap<u32, u32>,
    shift: usize,
}

impl RotatedSparse {
    pub fn identity(degree: usize) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        Ok(Self {
            degree,
            moved: HashMap::new(),
            shift: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The rotation exponent `k`, reduced mod `d`.
    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Number of points moved by the sparse factor `π`.
    pub fn sparse_support_len(&self) -> usize {
        self.moved.len()
    }

    #[inline]
    fn sparse_apply(&self, y: usize) -> usize {
        self.moved.get(&(y as u32)).map_or(y, |&z| z as usize)
    }

    pub fn apply(&self, x: usize) -> usize {
        self.sparse_apply((x + self.shift) % self.degree)
    }

    /// Right-multiplies by `αᵏ`.
    pub fn rotate(&mut self, k: i64) {
        let d = self.degree as i64;
        self.shift = (self.shift as i64 + k).rem_euclid(d) as usize;
    }

    /// Right-multiplies `π` (not the rotated product) by the permutation
    /// `c`, given as its moved points `(x, c(x))`.
    fn sparse_mul(&mut self, c: &[(usize, usize)]) {
        let updates: Vec<(usize, usize)> = c
            .iter()
            .map(|&(x, cx)| (x, self.sparse_apply(cx)))
            .collect();
        for (x, y) in updates {
            if x == y {
                self.moved.remove(&(x as u32));
            } else {
                self.moved.insert(x as u32, y as u32);
            }
        }
    }

    /// Right-multiplies the whole product by `cᵉ`, where `c` is the cycle
    /// through `points` (reduced mod `d`) and `e ∈ ℤ`.
    pub fn mul_cycle_power(&mut self, points: &[usize], e: i64) {
        let len = points.len() as i64;
        let e = e.rem_euclid(len) as usize;
        if e == 0 {
            return;
        }
        // (π αˢ) c = π (αˢ c α⁻ˢ) αˢ, and αˢ c α⁻ˢ is c with points shifted by s.
        let d = self.degree;
        let pts: Vec<usize> = points.iter().map(|&p| (p + self.shift) % d).collect();
        let n = pts.len();
        let moves: Vec<(usize, usize)> = (0..n).map(|i| (pts[i], pts[(i + e) % n])).collect();
        self.sparse_mul(&moves);
    }

    pub fn is_identity(&self) -> bool {
        if self.shift == 0 {
            return self.moved.is_empty();
        }
        // π = α⁻ˢ with s ≠ 0 moves every point.
        if self.moved.len() < self.degree {
            return false;
        }
        (0..self.degree).all(|x| self.apply(x) == x)
    }

    pub fn to_dense(&self) -> Permutation {
        Permutation::from_raw((0..self.degree).map(|x| self.apply(x) as u32).collect())
    }

    /// Group equality of the represented permutations.
    pub fn same_element(&self, other: &Self) -> bool {
        if self.degree != other.degree {
            return false;
        }
        if self.moved.len() + other.moved.len() < self.degree {
            // π'⁻¹π = α^{s'-s} moves fewer than d points, forcing s = s'.
            return self.shift == other.shift && self.moved == other.moved;
        }
        (0..self.degree).all(|x| self.apply(x) == other.apply(x))
    }
}

impl PartialEq for RotatedSparse {
    fn eq(&self, other: &Self) -> bool {
        self.same_element(other)
    }
}

impl Eq for RotatedSparse {}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_basics() {
        let e = Permutation::identity(5).unwrap();
        assert_eq!(e.images().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(e.order(), BigUint::one());
        let q = p(&[2, 0, 1, 4, 3]);
        assert_eq!(e.compose(&q).unwrap(), q);
        assert_eq!(Permutation::identity(0), Err(PermError::ZeroDegree));
    }

    #[test]
    fn composition_right_factor_first() {
        let (alpha, _) = make_generators(5, 2, 2).unwrap();
        let a2 = alpha.compose(&alpha).unwrap();
        for x in 0..5 {
            assert_eq!(a2.apply(x), (x + 2) % 5);
        }
        let beta = Permutation::cycle_from(&[0, 2, 4], 5).unwrap();
        let ab = alpha.compose(&beta).unwrap();
        let ba = beta.compose(&alpha).unwrap();
        // α·β: 0 ↦ β 2 ↦ α 3; β·α: 0 ↦ α 1 ↦ β 1.
        assert_eq!(ab.apply(0), 3);
        assert_eq!(ba.apply(0), 1);
        assert_ne!(ab, ba);
        assert!(alpha.compose(&alpha.inverse()).unwrap().is_identity());
    }

    #[test]
    fn degree_mismatch_rejected() {
        let a = Permutation::identity(3).unwrap();
        let b = Permutation::identity(4).unwrap();
        assert_eq!(a.compose(&b), Err(PermError::DegreeMismatch(3, 4)));
    }

    #[test]
    fn cycle_errors() {
        assert_eq!(
            Permutation::cycle_from(&[0, 1, 0], 4),
            Err(PermError::RepeatedPoint { point: 0 })
        );
        assert!(matches!(
            Permutation::cycle_from(&[0, 7], 4),
            Err(PermError::PointOutOfRange { .. })
        ));
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn order_parity_support() {
        let (alpha7, _) = make_generators(7, 2, 2).unwrap();
        assert_eq!(alpha7.order(), BigUint::from(7u32));
        let c3 = Permutation::cycle_from(&[1, 3, 5], 6).unwrap();
        assert!(c3.is_even());
        assert!(!Permutation::cycle_from(&[0, 1], 3).unwrap().is_even());
        let (_, beta) = make_generators(7, 2, 2).unwrap();
        assert_eq!(beta.support(), vec![0, 2, 4]);
        // (0 1)(2 3 4) has order 6.
        let q = p(&[1, 0, 3, 4, 2]);
        assert_eq!(q.order(), BigUint::from(6u32));
    }

    #[test]
    fn generators_match_formula() {
        let (alpha, beta) = make_generators(5, 2, 2).unwrap();
        assert_eq!(alpha.images().collect::<Vec<_>>(), vec![1, 2, 3, 4, 0]);
        assert_eq!(beta, Permutation::cycle_from(&[0, 2, 4], 5).unwrap());
        assert!(alpha.is_even() && beta.is_even());
    }

    #[test]
    fn generator_preconditions() {
        assert!(make_generators(9, 2, 2).is_err());
        assert!(make_generators(3, 1, 1).is_err());
        assert!(make_generators(7, 3, 4).is_err());
        assert!(make_generators(7, 0, 4).is_err());
        assert!(make_generators(7, 3, 3).is_ok());
    }

    #[test]
    fn conjugated_beta_is_shifted_cycle() {
        for &(d, r1, r2) in &[(5usize, 2usize, 2usize), (11, 3, 4), (13, 4, 4)] {
            let (alpha, beta) = make_generators(d, r1, r2).unwrap();
            for i in -10i64..=10 {
                let conj = alpha
                    .pow(i)
                    .compose(&beta)
                    .unwrap()
                    .compose(&alpha.pow(-i))
                    .unwrap();
                let s = i.rem_euclid(d as i64) as usize;
                let want =
                    Permutation::cycle_from(&[s, (s + r1) % d, (s + r1 + r2) % d], d).unwrap();
                assert_eq!(conj, want, "d={d} i={i}");
            }
        }
    }

    #[test]
    fn pow_matches_repeated_compose() {
        let q = p(&[3, 0, 4, 1, 2, 6, 5]);
        let mut acc = Permutation::identity(7).unwrap();
        for k in 0..12 {
            assert_eq!(q.pow(k), acc);
            acc = acc.compose(&q).unwrap();
        }
        assert_eq!(q.pow(-1), q.inverse());
    }

    #[test]
    fn rotated_sparse_matches_dense() {
        let d = 11;
        let (alpha, beta) = make_generators(d, 3, 3).unwrap();
        let mut sparse = RotatedSparse::identity(d).unwrap();
        let mut dense = Permutation::identity(d).unwrap();
        // a b b A b a a B
        let steps: [(bool, i64); 8] = [
            (true, 1),
            (false, 1),
            (false, 1),
            (true, -1),
            (false, 1),
            (true, 1),
            (true, 1),
            (false, -1),
        ];
        for (is_a, e) in steps {
            if is_a {
                sparse.rotate(e);
                dense = dense.compose(&alpha.pow(e)).unwrap();
            } else {
                sparse.mul_cycle_power(&[0, 3, 6], e);
                dense = dense.compose(&beta.pow(e)).unwrap();
            }
            assert_eq!(sparse.to_dense(), dense);
        }
    }

    #[test]
    fn rotated_sparse_identity_detection() {
        let mut s = RotatedSparse::identity(5).unwrap();
        assert!(s.is_identity());
        s.rotate(5);
        assert!(s.is_identity());
        s.mul_cycle_power(&[0, 1, 2], 3);
        assert!(s.is_identity());
        s.rotate(1);
        assert!(!s.is_identity());
    }
}
