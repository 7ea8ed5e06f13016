//! Single-hidden-layer tanh network parameters with exact rational weights.
//!
//! A parameter with `h` hidden units implements
//! `f(x) = d + Σ_i a_i · tanh(b_i · x + c_i)` for `x ∈ ℝⁿ`, `a_i, d ∈ ℚᵐ`.

use num_traits::Zero;
use thiserror::Error;

use crate::constant::ConstantTerm;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("input dimension must be at least 1")]
    ZeroInputDimension,
    #[error("output dimension must be at least 1")]
    ZeroOutputDimension,
    #[error("unit {unit}: {field} has length {found}, expected {expected}")]
    UnitShape { unit: usize, field: &'static str, found: usize, expected: usize },
    #[error("output bias has length {found}, expected {expected}")]
    BiasShape { found: usize, expected: usize },
    #[error("declared {declared} hidden units but found {found}")]
    UnitCount { declared: usize, found: usize },
    #[error("dimension mismatch: ({n1}, {m1}) vs ({n2}, {m2})")]
    DimensionMismatch { n1: usize, m1: usize, n2: usize, m2: usize },
    #[error("hidden unit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("unit index {index} out of range for {h} units")]
    InvalidUnit { index: usize, h: usize },
    #[error("split coefficients do not recombine to the original outgoing weight")]
    InconsistentSplit,
    #[error("invalid symmetry transform: {0}")]
    InvalidTransform(String),
    #[error("flat weight vector has length {0}, expected 3h + 1")]
    FlatLength(usize),
}

/// One hidden unit: outgoing weights `a` (length m), incoming weights `b`
/// (length n) and bias `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Unit {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Rational,
}

impl Unit {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>, c: Rational) -> Self {
        Self { a, b, c }
    }

    pub fn scalar(a: Rational, b: Rational, c: Rational) -> Self {
        Self { a: vec![a], b: vec![b], c }
    }

    pub fn sign(&self) -> i8 {
        rational::vector_sign(&self.b)
    }

    /// `(b, c)` concatenated into one vector of length `n + 1`.
    pub fn incoming(&self) -> Vec<Rational> {
        let mut v = self.b.clone();
        v.push(self.c.clone());
        v
    }

    /// `sign(b) · (b, c)`: the orientation-free identity used for merging.
    pub fn signed_incoming(&self) -> Vec<Rational> {
        rational::scale(&self.incoming(), self.sign())
    }

    pub fn negated(&self) -> Self {
        Self {
            a: self.a.iter().map(|x| -x).collect(),
            b: self.b.iter().map(|x| -x).collect(),
            c: -&self.c,
        }
    }

    fn activation(&self, x: &[f64]) -> f64 {
        let z: f64 = self
            .b
            .iter()
            .zip(x)
            .map(|(b, xi)| rational::to_f64(b) * xi)
            .sum::<f64>()
            + rational::to_f64(&self.c);
        z.tanh()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Parameter {
    n: usize,
    m: usize,
    units: Vec<Unit>,
    d: Vec<Rational>,
}

impl Parameter {
    pub fn new(n: usize, m: usize, units: Vec<Unit>, d: Vec<Rational>) -> Result<Self, NetError> {
        if n == 0 {
            return Err(NetError::ZeroInputDimension);
        }
        if m == 0 {
            return Err(NetError::ZeroOutputDimension);
        }
        for (i, u) in units.iter().enumerate() {
            if u.a.len() != m {
                return Err(NetError::UnitShape { unit: i, field: "a", found: u.a.len(), expected: m });
            }
            if u.b.len() != n {
                return Err(NetError::UnitShape { unit: i, field: "b", found: u.b.len(), expected: n });
            }
        }
        if d.len() != m {
            return Err(NetError::BiasShape { found: d.len(), expected: m });
        }
        Ok(Self { n, m, units, d })
    }

    /// A one-input, one-output parameter from `(a, b, c)` triples.
    pub fn scalar(units: impl IntoIterator<Item = (Rational, Rational, Rational)>, d: Rational) -> Self {
        let units = units.into_iter().map(|(a, b, c)| Unit::scalar(a, b, c)).collect();
        Self { n: 1, m: 1, units, d: vec![d] }
    }

    /// Parses the flat layout `(a₁, b₁, c₁, …, a_h, b_h, c_h, d)` with n = m = 1.
    pub fn from_flat(values: &[Rational]) -> Result<Self, NetError> {
        if values.len() % 3 != 1 {
            return Err(NetError::FlatLength(values.len()));
        }
        let h = values.len() / 3;
        let units = (0..h).map(|i| {
            (values[3 * i].clone(), values[3 * i + 1].clone(), values[3 * i + 2].clone())
        });
        Ok(Self::scalar(units, values[3 * h].clone()))
    }

    /// An empty network computing the constant `d`.
    pub fn constant(n: usize, d: Vec<Rational>) -> Result<Self, NetError> {
        let m = d.len();
        Self::new(n, m, Vec::new(), d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> usize {
        self.units.len()
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    pub fn unit(&self, i: usize) -> &Unit {
        &self.units[i]
    }

    pub fn d(&self) -> &[Rational] {
        &self.d
    }

    pub fn into_parts(self) -> (Vec<Unit>, Vec<Rational>) {
        (self.units, self.d)
    }

    /// Same shape, new units. Panics if a unit has the wrong shape.
    pub fn with_units(&self, units: Vec<Unit>) -> Self {
        Self::new(self.n, self.m, units, self.d.clone()).expect("unit shapes match")
    }

    /// All weights in the order `(a₁, b₁, c₁, …, a_h, b_h, c_h, d)`.
    pub fn flatten(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.units.len() * (self.n + self.m + 1) + self.m);
        for u in &self.units {
            out.extend(u.a.iter().cloned());
            out.extend(u.b.iter().cloned());
            out.push(u.c.clone());
        }
        out.extend(self.d.iter().cloned());
        out
    }

    pub fn check_same_shape(&self, other: &Parameter) -> Result<(), NetError> {
        if self.n != other.n || self.m != other.m {
            return Err(NetError::DimensionMismatch { n1: self.n, m1: self.m, n2: other.n, m2: other.m });
        }
        if self.h() != other.h() {
            return Err(NetError::SizeMismatch { left: self.h(), right: other.h() });
        }
        Ok(())
    }

    /// Exact uniform distance between two parameters of the same shape.
    pub fn distance(&self, other: &Parameter) -> Result<Rational, NetError> {
        self.check_same_shape(other)?;
        Ok(rational::dist(&self.flatten(), &other.flatten()))
    }

    pub fn norm(&self) -> Rational {
        rational::uniform_norm(&self.flatten())
    }

    /// Floating-point evaluation. `x` must have length `n`.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "input dimension");
        let mut out: Vec<f64> = self.d.iter().map(rational::to_f64).collect();
        for u in &self.units {
            let t = u.activation(x);
            for (o, a) in out.iter_mut().zip(&u.a) {
                *o += rational::to_f64(a) * t;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiaslessUnit {
    pub a: Rational,
    pub b: Rational,
}

/// Parameter of the bias-free architecture `f(x) = Σ_i a_i · tanh(b_i x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BiaslessParameter {
    pub units: Vec<BiaslessUnit>,
}

impl BiaslessParameter {
    pub fn new(units: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        Self { units: units.into_iter().map(|(a, b)| BiaslessUnit { a, b }).collect() }
    }

    pub fn h(&self) -> usize {
        self.units.len()
    }

    pub fn flatten(&self) -> Vec<Rational> {
        self.units.iter().flat_map(|u| [u.a.clone(), u.b.clone()]).collect()
    }

    pub fn distance(&self, other: &BiaslessParameter) -> Result<Rational, NetError> {
        if self.h() != other.h() {
            return Err(NetError::SizeMismatch { left: self.h(), right: other.h() });
        }
        Ok(rational::dist(&self.flatten(), &other.flatten()))
    }

    pub fn norm(&self) -> Rational {
        rational::uniform_norm(&self.flatten())
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.units
            .iter()
            .map(|u| rational::to_f64(&u.a) * (rational::to_f64(&u.b) * x).tanh())
            .sum()
    }
}

/// `T_{π,σ}`: output unit `i` is `σ_i · unit_{π(i)}` (a, b and c all negated
/// when `σ_i = -1`); the output bias is untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryTransform {
    permutation: Vec<usize>,
    signs: Vec<i8>,
}

impl SymmetryTransform {
    /// `permutation` is 0-based; `signs` entries must be ±1.
    pub fn new(permutation: Vec<usize>, signs: Vec<i8>) -> Result<Self, NetError> {
        let h = permutation.len();
        if signs.len() != h {
            return Err(NetError::InvalidTransform(format!(
                "{} signs for a permutation of {h}",
                signs.len()
            )));
        }
        let mut seen = vec![false; h];
        for &p in &permutation {
            if p >= h || std::mem::replace(&mut seen[p], true) {
                return Err(NetError::InvalidTransform("permutation is not a bijection".into()));
            }
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(NetError::InvalidTransform("signs must be +1 or -1".into()));
        }
        Ok(Self { permutation, signs })
    }

    pub fn identity(h: usize) -> Self {
        Self { permutation: (0..h).collect(), signs: vec![1; h] }
    }

    pub fn h(&self) -> usize {
        self.permutation.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn apply(&self, w: &Parameter) -> Result<Parameter, NetError> {
        if self.h() != w.h() {
            return Err(NetError::SizeMismatch { left: self.h(), right: w.h() });
        }
        let units = self
            .permutation
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| if s > 0 { w.units[p].clone() } else { w.units[p].negated() })
            .collect();
        Ok(w.with_units(units))
    }
}

pub fn apply_transform(t: &SymmetryTransform, w: &Parameter) -> Result<Parameter, NetError> {
    t.apply(w)
}

/// Function-preserving ways to add one hidden unit; each is the inverse of
/// one reduction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    /// Replace unit `unit` by `(first, b, c)` and `(second, b, c)` with
    /// `first + second = a`.
    Split { unit: usize, first: Vec<Rational>, second: Vec<Rational> },
    /// Replace unit `unit` by `(first, b, c)` and `(second, -b, -c)` with
    /// `first - second = a`.
    NegativeSplit { unit: usize, first: Vec<Rational>, second: Vec<Rational> },
    /// Append a unit `(0, b, c)`.
    ZeroOutgoing { b: Vec<Rational>, c: Rational },
    /// Append a unit `(a, 0, c)` and subtract `a · tanh(c)` from the bias.
    ZeroIncoming { a: Vec<Rational>, c: Rational },
}

/// Result of [`expand`]. The expanded network implements
/// `f_parameter(x) + correction`; the correction is nonzero only after a
/// zero-incoming insertion with `c ≠ 0`, where the compensating bias shift
/// `-a · tanh(c)` is irrational and has to stay symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expanded {
    pub parameter: Parameter,
    pub correction: ConstantTerm,
}

impl Expanded {
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.parameter.evaluate(x);
        for (yi, ci) in y.iter_mut().zip(self.correction.to_f64()) {
            *yi += ci;
        }
        y
    }
}

pub fn expand(w: &Parameter, op: &Expansion) -> Result<Expanded, NetError> {
    let mut units = w.units.clone();
    let mut correction = ConstantTerm::zero(w.m);
    let check_index = |unit: usize| {
        if unit < w.h() {
            Ok(())
        } else {
            Err(NetError::InvalidUnit { index: unit, h: w.h() })
        }
    };
    let check_len = |v: &[Rational], expected: usize, field: &'static str| {
        if v.len() == expected {
            Ok(())
        } else {
            Err(NetError::UnitShape { unit: w.h(), field, found: v.len(), expected })
        }
    };
    match op {
        Expansion::Split { unit, first, second } => {
            check_index(*unit)?;
            check_len(first, w.m, "a")?;
            check_len(second, w.m, "a")?;
            let original = &w.units[*unit];
            let recombined: bool =
                first.iter().zip(second).zip(&original.a).all(|((p, q), a)| &(p + q) == a);
            if !recombined {
                return Err(NetError::InconsistentSplit);
            }
            let mut twin = original.clone();
            twin.a = second.clone();
            units[*unit].a = first.clone();
            units.insert(unit + 1, twin);
        }
        Expansion::NegativeSplit { unit, first, second } => {
            check_index(*unit)?;
            check_len(first, w.m, "a")?;
            check_len(second, w.m, "a")?;
            let original = &w.units[*unit];
            let recombined: bool =
                first.iter().zip(second).zip(&original.a).all(|((p, q), a)| &(p - q) == a);
            if !recombined {
                return Err(NetError::InconsistentSplit);
            }
            let mut twin = original.negated();
            twin.a = second.clone();
            units[*unit].a = first.clone();
            units.insert(unit + 1, twin);
        }
        Expansion::ZeroOutgoing { b, c } => {
            check_len(b, w.n, "b")?;
            units.push(Unit::new(vec![Rational::zero(); w.m], b.clone(), c.clone()));
        }
        Expansion::ZeroIncoming { a, c } => {
            check_len(a, w.m, "a")?;
            units.push(Unit::new(a.clone(), vec![Rational::zero(); w.n], c.clone()));
            let negated: Vec<Rational> = a.iter().map(|x| -x).collect();
            correction.add_tanh(&negated, c);
        }
    }
    Ok(Expanded { parameter: w.with_units(units), correction })
}
