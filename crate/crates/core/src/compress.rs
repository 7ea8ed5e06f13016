//! Reducibility testing, optimal lossless compression and rank.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::constant::ConstantTerm;
use crate::net::{BiaslessParameter, NetError, Parameter, Unit};
use crate::rational::{self, Rational};

/// First reducibility condition satisfied by a parameter. Unit indices are
/// 0-based; `Display` prints them 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reducibility {
    /// (i) `a_i = 0`.
    ZeroOutgoing(usize),
    /// (ii) `b_i = 0`.
    ZeroIncoming(usize),
    /// (iii) `(b_i, c_i) = (b_j, c_j)`.
    Duplicate(usize, usize),
    /// (iv) `(b_i, c_i) = -(b_j, c_j)`.
    NegatedDuplicate(usize, usize),
    None,
}

impl Reducibility {
    pub fn condition(&self) -> &'static str {
        match self {
            Reducibility::ZeroOutgoing(_) => "i",
            Reducibility::ZeroIncoming(_) => "ii",
            Reducibility::Duplicate(..) => "iii",
            Reducibility::NegatedDuplicate(..) => "iv",
            Reducibility::None => "none",
        }
    }

    pub fn witness(&self) -> Vec<usize> {
        match *self {
            Reducibility::ZeroOutgoing(i) | Reducibility::ZeroIncoming(i) => vec![i],
            Reducibility::Duplicate(i, j) | Reducibility::NegatedDuplicate(i, j) => vec![i, j],
            Reducibility::None => Vec::new(),
        }
    }

    pub fn is_reducible(&self) -> bool {
        !matches!(self, Reducibility::None)
    }
}

impl fmt::Display for Reducibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Reducibility::ZeroOutgoing(i) => write!(f, "(i) unit {}", i + 1),
            Reducibility::ZeroIncoming(i) => write!(f, "(ii) unit {}", i + 1),
            Reducibility::Duplicate(i, j) => write!(f, "(iii) units {} and {}", i + 1, j + 1),
            Reducibility::NegatedDuplicate(i, j) => write!(f, "(iv) units {} and {}", i + 1, j + 1),
            Reducibility::None => write!(f, "none"),
        }
    }
}

pub fn reducibility(w: &Parameter) -> Reducibility {
    let units = w.units();
    if let Some(i) = units.iter().position(|u| rational::is_zero_vector(&u.a)) {
        return Reducibility::ZeroOutgoing(i);
    }
    if let Some(i) = units.iter().position(|u| rational::is_zero_vector(&u.b)) {
        return Reducibility::ZeroIncoming(i);
    }
    let keys: Vec<Vec<Rational>> = units.iter().map(Unit::incoming).collect();
    let mut seen: HashMap<&[Rational], usize> = HashMap::with_capacity(keys.len());
    for (j, k) in keys.iter().enumerate() {
        if let Some(&i) = seen.get(k.as_slice()) {
            return Reducibility::Duplicate(i, j);
        }
        seen.entry(k.as_slice()).or_insert(j);
    }
    for (j, k) in keys.iter().enumerate() {
        let negated = rational::scale(k, -1);
        if let Some(&i) = seen.get(negated.as_slice()) {
            if i < j {
                return Reducibility::NegatedDuplicate(i, j);
            }
        }
    }
    Reducibility::None
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressedUnit {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub gamma: Rational,
}

impl CompressedUnit {
    fn as_unit(&self) -> Unit {
        Unit::new(self.alpha.clone(), self.beta.clone(), self.gamma.clone())
    }
}

/// Output of [`compress`]: `r` irreducible units and a symbolic output bias.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressedParameter {
    pub n: usize,
    pub m: usize,
    pub units: Vec<CompressedUnit>,
    pub delta: ConstantTerm,
}

impl CompressedParameter {
    pub fn r(&self) -> usize {
        self.units.len()
    }

    /// The units with only the rational part of δ as output bias. Implements
    /// `f_w` exactly when `delta.is_rational()`.
    pub fn to_parameter_base(&self) -> Parameter {
        let units = self.units.iter().map(CompressedUnit::as_unit).collect();
        Parameter::new(self.n, self.m, units, self.delta.base().to_vec()).expect("consistent shape")
    }

    /// Inexact: δ is rounded to the nearest `f64` and stored as a rational.
    pub fn to_parameter_inexact(&self) -> Parameter {
        let units = self.units.iter().map(CompressedUnit::as_unit).collect();
        let d = self
            .delta
            .to_f64()
            .into_iter()
            .map(|x| Rational::from_float(x).unwrap_or_else(Rational::zero))
            .collect();
        Parameter::new(self.n, self.m, units, d).expect("consistent shape")
    }

    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.delta.to_f64();
        for u in &self.units {
            let z: f64 = u.beta.iter().zip(x).map(|(b, xi)| rational::to_f64(b) * xi).sum::<f64>()
                + rational::to_f64(&u.gamma);
            let t = z.tanh();
            for (yi, a) in y.iter_mut().zip(&u.alpha) {
                *yi += rational::to_f64(a) * t;
            }
        }
        y
    }
}

/// Sorted signed keys `sign(b_i)·(b_i, c_i)` of the units with `b_i ≠ 0`,
/// grouped into runs of equal keys. Each run lists its members in index order.
fn sorted_runs(w: &Parameter) -> (Vec<i8>, Vec<Vec<Rational>>, Vec<Vec<usize>>) {
    let signs: Vec<i8> = w.units().iter().map(Unit::sign).collect();
    let keys: Vec<Vec<Rational>> = w
        .units()
        .iter()
        .zip(&signs)
        .map(|(u, &s)| if s == 0 { Vec::new() } else { u.signed_incoming() })
        .collect();
    let mut order: Vec<usize> = (0..w.h()).filter(|&i| signs[i] != 0).collect();
    order.sort_by(|&i, &j| keys[i].cmp(&keys[j]).then(i.cmp(&j)));
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match runs.last_mut() {
            Some(run) if keys[run[0]] == keys[i] => run.push(i),
            _ => runs.push(vec![i]),
        }
    }
    (signs, keys, runs)
}

/// Stage 2 partition of the units with `b ≠ 0` by `sign(b)·(b, c)`, groups
/// ordered by their minimum member.
pub fn merge_groups(w: &Parameter) -> Vec<Vec<usize>> {
    let (_, _, mut runs) = sorted_runs(w);
    runs.sort_by_key(|run| run[0]);
    runs
}

fn merged_alpha(w: &Parameter, signs: &[i8], group: &[usize]) -> Vec<Rational> {
    let mut alpha = vec![Rational::zero(); w.m()];
    for &i in group {
        let a = &w.unit(i).a;
        if signs[i] > 0 {
            rational::add_assign(&mut alpha, a);
        } else {
            rational::sub_assign(&mut alpha, a);
        }
    }
    alpha
}

pub fn compress(w: &Parameter) -> CompressedParameter {
    let mut delta = ConstantTerm::new(w.d().to_vec());
    for u in w.units() {
        if rational::is_zero_vector(&u.b) {
            delta.add_tanh(&u.a, &u.c);
        }
    }
    let (signs, mut keys, mut runs) = sorted_runs(w);
    runs.sort_by_key(|run| run[0]);
    let mut units = Vec::with_capacity(runs.len());
    for run in &runs {
        let alpha = merged_alpha(w, &signs, run);
        if rational::is_zero_vector(&alpha) {
            continue;
        }
        let mut key = std::mem::take(&mut keys[run[0]]);
        let gamma = key.pop().expect("key holds c");
        units.push(CompressedUnit { alpha, beta: key, gamma });
    }
    CompressedParameter { n: w.n(), m: w.m(), units, delta }
}

/// Number of units in an optimal compression, without building it.
pub fn rank(w: &Parameter) -> usize {
    let (signs, _, runs) = sorted_runs(w);
    runs.iter().filter(|run| !rational::is_zero_vector(&merged_alpha(w, &signs, run))).count()
}

fn unit_order(x: &CompressedUnit, y: &CompressedUnit) -> Ordering {
    x.beta.cmp(&y.beta).then_with(|| x.gamma.cmp(&y.gamma)).then_with(|| x.alpha.cmp(&y.alpha))
}

/// [`compress`] with units sorted lexicographically by `(β, γ)`.
pub fn canonical_form(w: &Parameter) -> CompressedParameter {
    let mut c = compress(w);
    c.units.sort_by(unit_order);
    c
}

/// Exact functional equivalence via canonical forms.
pub fn equivalent(w: &Parameter, v: &Parameter) -> Result<bool, NetError> {
    if w.n() != v.n() || w.m() != v.m() {
        return Err(NetError::DimensionMismatch { n1: w.n(), m1: w.m(), n2: v.n(), m2: v.m() });
    }
    Ok(canonical_form(w) == canonical_form(v))
}

fn biasless_as_parameter(u: &BiaslessParameter) -> Parameter {
    Parameter::scalar(u.units.iter().map(|x| (x.a.clone(), x.b.clone(), Rational::zero())), Rational::zero())
}

/// Reducibility of a bias-free parameter: (i) `a_i = 0`, (ii) `b_i = 0`,
/// (iii) `b_i = b_j`, (iv) `b_i = -b_j`.
pub fn reducibility_biasless(u: &BiaslessParameter) -> Reducibility {
    reducibility(&biasless_as_parameter(u))
}

/// Merges units by `|b|`; zero-incoming units vanish since `tanh(0) = 0`.
pub fn compress_biasless(u: &BiaslessParameter) -> BiaslessParameter {
    let c = compress(&biasless_as_parameter(u));
    debug_assert!(c.delta.is_rational());
    BiaslessParameter::new(c.units.into_iter().map(|mut x| (x.alpha.remove(0), x.beta.remove(0))))
}

pub fn rank_biasless(u: &BiaslessParameter) -> usize {
    rank(&biasless_as_parameter(u))
}
