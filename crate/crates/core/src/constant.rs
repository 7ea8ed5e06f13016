//! Exact symbolic constants of the form `base + Σ a_k · tanh(c_k)`.
//!
//! Folding zero-incoming units into the output bias produces values like
//! `d + a·tanh(c)`, which are irrational for rational `c ≠ 0`. `ConstantTerm`
//! keeps them exact. The canonical form uses `tanh(-c) = -tanh(c)` so that
//! every argument is positive, merges equal arguments, and drops zero terms.
//!
//! Equal canonical forms always denote equal constants. The converse relies
//! on linear independence of `{tanh(c) : c ∈ ℚ⁺}` over ℚ, which is assumed
//! rather than proven, so comparisons are sound but only conditionally
//! complete.

use std::collections::BTreeMap;
use std::ops::{Add, Neg};

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstantTerm {
    base: Vec<Rational>,
    terms: BTreeMap<Rational, Vec<Rational>>,
}

impl ConstantTerm {
    /// The constant vector `base` with no tanh terms.
    pub fn new(base: Vec<Rational>) -> Self {
        Self { base, terms: BTreeMap::new() }
    }

    pub fn zero(m: usize) -> Self {
        Self::new(vec![Rational::zero(); m])
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    /// Canonical `(argument, coefficient)` pairs in increasing argument order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &[Rational])> {
        self.terms.iter().map(|(c, a)| (c, a.as_slice()))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// True when the constant is exactly its rational base.
    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coefficient · tanh(argument)`.
    pub fn add_tanh(&mut self, coefficient: &[Rational], argument: &Rational) {
        assert_eq!(coefficient.len(), self.base.len(), "coefficient dimension");
        if argument.is_zero() || rational::is_zero_vector(coefficient) {
            return;
        }
        let (key, sign) = if argument.is_negative() { (-argument, -1) } else { (argument.clone(), 1) };
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(|| vec![Rational::zero(); coefficient.len()]);
        if sign > 0 {
            rational::add_assign(entry, coefficient);
        } else {
            rational::sub_assign(entry, coefficient);
        }
        if rational::is_zero_vector(entry) {
            self.terms.remove(&key);
        }
    }

    pub fn add_base(&mut self, v: &[Rational]) {
        rational::add_assign(&mut self.base, v);
    }

    /// Floating-point value; the only inexact operation on this type.
    pub fn to_f64(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.base.iter().map(rational::to_f64).collect();
        for (c, a) in &self.terms {
            let t = rational::to_f64(c).tanh();
            for (o, ak) in out.iter_mut().zip(a) {
                *o += rational::to_f64(ak) * t;
            }
        }
        out
    }
}

impl Add<&ConstantTerm> for &ConstantTerm {
    type Output = ConstantTerm;

    fn add(self, rhs: &ConstantTerm) -> ConstantTerm {
        let mut out = self.clone();
        out.add_base(&rhs.base);
        for (c, a) in &rhs.terms {
            out.add_tanh(a, c);
        }
        out
    }
}

impl Neg for &ConstantTerm {
    type Output = ConstantTerm;

    fn neg(self) -> ConstantTerm {
        ConstantTerm {
            base: self.base.iter().map(|x| -x).collect(),
            terms: self
                .terms
                .iter()
                .map(|(c, a)| (c.clone(), a.iter().map(|x| -x).collect()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn odd_symmetry_folds_negative_arguments() {
        let mut t = ConstantTerm::zero(1);
        t.add_tanh(&[int(3)], &int(-2));
        let mut u = ConstantTerm::zero(1);
        u.add_tanh(&[int(-3)], &int(2));
        assert_eq!(t, u);
        assert!((t.to_f64()[0] + 3.0 * 2f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn cancelling_terms_vanish() {
        let mut t = ConstantTerm::new(vec![int(1)]);
        t.add_tanh(&[int(5)], &int(2));
        t.add_tanh(&[int(5)], &int(-2));
        assert!(t.is_rational());
        t.add_tanh(&[int(0)], &int(7));
        t.add_tanh(&[int(9)], &int(0));
        assert_eq!(t, ConstantTerm::new(vec![int(1)]));
    }

    #[test]
    fn equal_arguments_combine() {
        let mut t = ConstantTerm::zero(2);
        t.add_tanh(&[int(1), int(0)], &ratio(1, 2));
        t.add_tanh(&[int(1), int(2)], &ratio(1, 2));
        assert_eq!(t.term_count(), 1);
        let (c, a) = t.terms().next().unwrap();
        assert_eq!(c, &ratio(1, 2));
        assert_eq!(a, &[int(2), int(2)]);
    }

    #[test]
    fn addition_and_negation_cancel() {
        let mut t = ConstantTerm::new(vec![ratio(2, 3)]);
        t.add_tanh(&[int(4)], &int(1));
        let sum = &t + &(-&t);
        assert_eq!(sum, ConstantTerm::zero(1));
    }
}
