//! The lamplighter group `C₃ ≀ ℤ`.
//!
//! An element is a finitely supported lamp configuration `ℤ → ℤ/3` together
//! with an integer shift. The shift generator `α∞ = (∅, 1)` translates lamp
//! positions; `β∞ = ({0: 1}, 0)` toggles the lamp at the origin.

use std::collections::BTreeMap;

use crate::words::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WreathElement {
    // invariant: no zero values
    lamps: BTreeMap<i64, u8>,
    shift: i64,
}

impl WreathElement {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `α∞`.
    pub fn shift_generator() -> Self {
        Self {
            lamps: BTreeMap::new(),
            shift: 1,
        }
    }

    /// `β∞`.
    pub fn lamp_generator() -> Self {
        Self {
            lamps: BTreeMap::from([(0, 1)]),
            shift: 0,
        }
    }

    /// Builds an element from raw lamp values (taken mod 3) and a shift.
    pub fn from_parts<I: IntoIterator<Item = (i64, i64)>>(lamps: I, shift: i64) -> Self {
        let mut out = Self {
            lamps: BTreeMap::new(),
            shift,
        };
        for (pos, v) in lamps {
            out.add_lamp(pos, v);
        }
        out
    }

    fn add_lamp(&mut self, pos: i64, v: i64) {
        let cur = self.lamps.get(&pos).copied().unwrap_or(0) as i64;
        let new = (cur + v).rem_euclid(3) as u8;
        if new == 0 {
            self.lamps.remove(&pos);
        } else {
            self.lamps.insert(pos, new);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.lamps.is_empty()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn lamps(&self) -> &BTreeMap<i64, u8> {
        &self.lamps
    }

    /// `(f, s)·(g, t) = (f + σₛg, s + t)` where `σₛ` moves lamp `i` to `i + s`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&pos, &v) in &other.lamps {
            out.add_lamp(pos + self.shift, v as i64);
        }
        out.shift = self.shift + other.shift;
        out
    }

    pub fn inverse(&self) -> Self {
        Self::from_parts(
            self.lamps
                .iter()
                .map(|(&pos, &v)| (pos - self.shift, -(v as i64))),
            -self.shift,
        )
    }

    /// Right-multiplies in place by one generator letter.
    pub fn mul_letter(&mut self, l: Letter) {
        match l {
            Letter::A => self.shift += 1,
            Letter::AInv => self.shift -= 1,
            Letter::B => self.add_lamp(self.shift, 1),
            Letter::BInv => self.add_lamp(self.shift, -1),
        }
    }

    /// `w(α∞, β∞)`.
    pub fn eval(word: &Word) -> Self {
        let mut acc = Self::identity();
        for &l in word.letters() {
            acc.mul_letter(l);
        }
        acc
    }

    /// The exponents `cᵢ mod 3` and the shift `l` for which the element equals
    /// `∏ᵢ (α∞ⁱ β∞ α∞⁻ⁱ)^{cᵢ} · α∞ˡ`.
    pub fn lamp_data(&self) -> (BTreeMap<i64, u8>, i64) {
        (self.lamps.clone(), self.shift)
    }

    /// Canonical byte encoding, used for hashing signatures.
    pub fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.shift.to_le_bytes());
        out.extend_from_slice(&(self.lamps.len() as u64).to_le_bytes());
        for (&pos, &v) in &self.lamps {
            out.extend_from_slice(&pos.to_le_bytes());
            out.push(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> WreathElement {
        WreathElement::eval(&s.parse().unwrap())
    }

    #[test]
    fn identity_and_exponent_three() {
        let b = WreathElement::lamp_generator();
        let v = ev("abAAb");
        assert_eq!(WreathElement::identity().mul(&v), v);
        assert_eq!(v.mul(&WreathElement::identity()), v);
        assert!(b.mul(&b.mul(&b)).is_identity());
        assert!(ev("bbb").is_identity());
    }

    #[test]
    fn conjugating_lamp_moves_it() {
        let a = WreathElement::shift_generator();
        let b = WreathElement::lamp_generator();
        let c = a.mul(&b.mul(&a.inverse()));
        assert_eq!(c, WreathElement::from_parts([(1, 1)], 0));
    }

    #[test]
    fn lamp_data_examples() {
        // b a b A by the multiplication rule: lamps at 0 and 1, no net shift.
        assert_eq!(ev("baba").mul(&ev("AA")), ev("babA"));
        let (lamps, l) = ev("babA").lamp_data();
        assert_eq!(lamps, BTreeMap::from([(0, 1), (1, 1)]));
        assert_eq!(l, 0);
        assert_eq!(ev("bbb").lamp_data(), (BTreeMap::new(), 0));
        assert_eq!(ev("a").lamp_data(), (BTreeMap::new(), 1));
    }

    #[test]
    fn lamps_commute() {
        for i in -5i64..=5 {
            let conj =
                crate::words::Word::conjugate(&"b".parse().unwrap(), &crate::words::Word::a_pow(i));
            let comm = crate::words::Word::commutator(&"b".parse().unwrap(), &conj);
            assert!(WreathElement::eval(&comm).is_identity(), "i={i}");
        }
    }

    #[test]
    fn inverse_law_and_shift() {
        let u = ev("abBBaAAbab");
        assert!(u.inverse().mul(&u).is_identity());
        assert!(u.mul(&u.inverse()).is_identity());
        for k in -6i64..=6 {
            let e = WreathElement::eval(&crate::words::Word::a_pow(k));
            assert_eq!(e.shift(), k);
            assert!(e.lamps().is_empty());
        }
        assert!(WreathElement::eval(&crate::words::Word::empty()).is_identity());
    }
}
