//! Executable hardness reductions and the small-instance oracles used to
//! check them.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::cover::{CoverError, CoverInstance};
use crate::net::{BiaslessParameter, Parameter};
use crate::proximate::ParCertificate;
use crate::rational::{self, Rational};

mod brute;
pub mod xsat;

pub use brute::{brute_cover, brute_sat, brute_ssum, brute_ssz, find_assignment, find_zero_subset};
pub use xsat::{
    assignment_to_partition, check_gadget, gadget_library, partition_to_assignment, validate_formula, xsat_to_upp,
    Dir, Gadget, GadgetReport, GridLayout, RestrictedFormula, TileKind, TileMap, TileType, XsatReduction,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("{what}: {size} exceeds the limit of {limit}")]
    SizeLimit { what: &'static str, size: usize, limit: usize },
    #[error("upc_to_par needs points of dimension at least 2, got {0}")]
    PointDimension(usize),
    #[error("subset sum entries and target must be positive")]
    NonPositiveSubsetSum,
    #[error("subset sum zero entries must be nonzero")]
    ZeroEntry,
    #[error("subset sum zero reduction needs at least 2 integers, got {0}")]
    TooFewIntegers(usize),
    #[error("subset is not a nonempty proper zero-sum subset: {0}")]
    BadSubset(String),
    #[error("formula: {0}")]
    Formula(String),
    #[error("layout: {0}")]
    Layout(String),
    #[error("gadget: {0}")]
    Gadget(String),
    #[error("assignment does not satisfy the formula")]
    Unsatisfying,
    #[error("partition: {0}")]
    Partition(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// An instance of bounding proximate rank: is `prank_eps(parameter) ≤ r`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParInstance {
    pub parameter: Parameter,
    pub eps: Rational,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UparInstance {
    pub parameter: BiaslessParameter,
    pub eps: Rational,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsumInstance {
    pub x: Vec<i64>,
    pub target: i64,
}

impl SsumInstance {
    pub fn new(x: Vec<i64>, target: i64) -> Result<Self, ReductionError> {
        if target <= 0 || x.iter().any(|&v| v <= 0) {
            return Err(ReductionError::NonPositiveSubsetSum);
        }
        Ok(Self { x, target })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SszInstance {
    pub x: Vec<i64>,
}

impl SszInstance {
    pub fn new(x: Vec<i64>) -> Result<Self, ReductionError> {
        if x.contains(&0) {
            return Err(ReductionError::ZeroEntry);
        }
        Ok(Self { x })
    }
}

fn big(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Uniform point cover (radius `eps`) to bounded proximate rank. Points are
/// shifted so every coordinate is at least `2ε`; unit `i` gets `a = 2ε` and
/// `(b, c)` equal to the shifted point (the last coordinate is `c`).
pub fn upc_to_par(instance: &CoverInstance) -> Result<ParInstance, ReductionError> {
    let points = &instance.points;
    let p = points.p();
    if p < 2 {
        return Err(ReductionError::PointDimension(p));
    }
    let eps = &instance.eps;
    let two_eps = eps + eps;
    let mins: Vec<Rational> = (0..p)
        .map(|k| points.points().iter().map(|x| &x[k]).min().cloned().unwrap_or_else(Rational::zero))
        .collect();
    let units = points
        .points()
        .iter()
        .map(|x| {
            let mut t: Vec<Rational> = x.iter().zip(&mins).map(|(v, lo)| v - lo + &two_eps).collect();
            let c = t.pop().expect("p >= 2");
            crate::net::Unit::new(vec![two_eps.clone()], t, c)
        })
        .collect();
    let parameter = Parameter::new(p - 1, 1, units, vec![Rational::zero()]).expect("consistent shape");
    Ok(ParInstance { parameter, eps: eps.clone(), r: instance.r })
}

/// Returned when the full collection already hits the target.
pub const TRIVIAL_SSZ: [i64; 3] = [1, -1, 1];

pub fn ssum_to_ssz(instance: &SsumInstance) -> SszInstance {
    let total: i128 = instance.x.iter().map(|&v| v as i128).sum();
    if total == instance.target as i128 {
        return SszInstance { x: TRIVIAL_SSZ.to_vec() };
    }
    let mut x = instance.x.clone();
    x.push(-instance.target);
    SszInstance { x }
}

/// Index `k` shifted by a multiple of `n` into `1..=n`.
fn cyclic(k: i64, n: i64) -> usize {
    ((k - 1).rem_euclid(n) + 1) as usize
}

/// Subset sum zero to bounded biasless proximate rank: `n` groups of `n`
/// units, unit `j` of group `i` (1-based) has `a = n·x_{(i+j-1) mod n}` and
/// `b = (2i − 1) + (j − 1)/(n − 1)`; `ε = (n − 2)/(2(n − 1))`, `r = 2n − 1`.
///
/// For `n = 2` the formula gives `ε = 0`; `ε = 1/4` is used instead, which
/// keeps every unit isolated so the instance stays negative like every
/// two-element subset sum zero instance.
pub fn ssz_to_upar(instance: &SszInstance) -> Result<UparInstance, ReductionError> {
    let n = instance.x.len();
    if n < 2 {
        return Err(ReductionError::TooFewIntegers(n));
    }
    let nn = n as i64;
    let mut units = Vec::with_capacity(n * n);
    for i in 1..=nn {
        for j in 1..=nn {
            let a = big(n) * Rational::from_integer(BigInt::from(instance.x[cyclic(i + j - 1, nn) - 1]));
            let b = Rational::from_integer(BigInt::from(2 * i - 1)) + rational::ratio(j - 1, nn - 1);
            units.push((a, b));
        }
    }
    let eps = if n == 2 { rational::ratio(1, 4) } else { rational::ratio(nn - 2, 2 * (nn - 1)) };
    Ok(UparInstance { parameter: BiaslessParameter::new(units), eps, r: 2 * n - 1 })
}

/// The certificate for `ssz_to_upar(x)` induced by a zero-sum subset `s`
/// (0-based indices): one group splits into the units drawing on `s` and the
/// rest, every other group splits off its last unit.
pub fn ssz_certificate(instance: &SszInstance, s: &[usize]) -> Result<ParCertificate, ReductionError> {
    let n = instance.x.len();
    if n < 2 {
        return Err(ReductionError::TooFewIntegers(n));
    }
    let mut member = vec![false; n];
    for &k in s {
        if k >= n || std::mem::replace(&mut member[k], true) {
            return Err(ReductionError::BadSubset(format!("index {} repeated or out of range", k + 1)));
        }
    }
    if s.is_empty() || s.len() == n {
        return Err(ReductionError::BadSubset("subset must be nonempty and proper".into()));
    }
    if s.iter().map(|&k| instance.x[k] as i128).sum::<i128>() != 0 {
        return Err(ReductionError::BadSubset("subset does not sum to zero".into()));
    }
    let nn = n as i64;
    let in_s = |k: usize| member[k - 1];
    let pivot = (1..=n).find(|&i| in_s(i) && !in_s(cyclic(i as i64 + nn - 1, nn))).expect("proper nonempty subset");
    let unit = |i: usize, j: usize| (i - 1) * n + (j - 1);
    let mut groups = Vec::with_capacity(2 * n);
    for i in 1..=n {
        if i == pivot {
            let (inside, outside): (Vec<usize>, Vec<usize>) =
                (1..=n).partition(|&j| in_s(cyclic((i + j - 1) as i64, nn)));
            groups.push(inside.into_iter().map(|j| unit(i, j)).collect());
            groups.push(outside.into_iter().map(|j| unit(i, j)).collect());
        } else {
            groups.push((1..n).map(|j| unit(i, j)).collect());
            groups.push(vec![unit(i, n)]);
        }
    }
    Ok(ParCertificate { groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::PointSet;
    use crate::proximate::{exact_prank, exact_prank_biasless, verify_upar_certificate};
    use crate::rational::int;

    #[test]
    fn upc_to_par_example() {
        let points = PointSet::from_integers(2, 1, &[&[0, 0], &[3, 1]]).unwrap();
        let inst = upc_to_par(&CoverInstance::new(points, int(1), 1).unwrap()).unwrap();
        let flat: Vec<Rational> = [2, 2, 2, 2, 5, 3, 0].iter().map(|&v| int(v)).collect();
        assert_eq!(inst.parameter, Parameter::from_flat(&flat).unwrap());
        assert_eq!(inst.eps, int(1));
    }

    #[test]
    fn upc_to_par_single_point() {
        let points = PointSet::from_integers(2, 1, &[&[4, -1]]).unwrap();
        for r in 0..2 {
            let inst = upc_to_par(&CoverInstance::new(points.clone(), int(1), r).unwrap()).unwrap();
            let prank = exact_prank(&inst.eps, &inst.parameter, 9).unwrap();
            assert_eq!(prank, 1);
            assert_eq!(prank <= r, brute_cover(&points, &int(1), r).unwrap());
        }
        let flat = PointSet::from_integers(1, 1, &[&[1]]).unwrap();
        assert!(upc_to_par(&CoverInstance::new(flat, int(1), 1).unwrap()).is_err());
    }

    #[test]
    fn ssum_to_ssz_examples() {
        let out = ssum_to_ssz(&SsumInstance::new(vec![1, 2, 3], 5).unwrap());
        assert_eq!(out.x, vec![1, 2, 3, -5]);
        assert!(brute_ssz(&out.x).unwrap());
        let out = ssum_to_ssz(&SsumInstance::new(vec![2, 3], 5).unwrap());
        assert_eq!(out.x, TRIVIAL_SSZ.to_vec());
        assert!(brute_ssz(&out.x).unwrap());
        let out = ssum_to_ssz(&SsumInstance::new(vec![1, 1], 3).unwrap());
        assert_eq!(out.x, vec![1, 1, -3]);
        assert!(!brute_ssz(&out.x).unwrap());
        assert!(SsumInstance::new(vec![0, 1], 1).is_err());
    }

    #[test]
    fn ssz_to_upar_example() {
        let inst = SszInstance::new(vec![-3, -4, 1, -5, 2]).unwrap();
        let u = ssz_to_upar(&inst).unwrap();
        assert_eq!(u.parameter.h(), 25);
        assert_eq!(u.eps, rational::ratio(3, 8));
        assert_eq!(u.r, 9);
        assert_eq!(u.parameter.units[0].a, int(-15));
        assert_eq!(u.parameter.units[0].b, int(1));
        assert_eq!(u.parameter.units[1].b, rational::ratio(5, 4));
        // Group 2 starts from x_2.
        assert_eq!(u.parameter.units[5].a, int(-20));

        let s = [0, 2, 4];
        assert_eq!(s.iter().map(|&k| inst.x[k]).sum::<i64>(), 0);
        let cert = ssz_certificate(&inst, &s).unwrap();
        assert!(verify_upar_certificate(&u.eps, u.r, &u.parameter, &cert).unwrap());
        assert!(ssz_certificate(&inst, &[0, 1]).is_err());
        assert!(ssz_certificate(&inst, &[]).is_err());
    }

    #[test]
    fn ssz_to_upar_small_cases() {
        assert!(ssz_to_upar(&SszInstance::new(vec![3]).unwrap()).is_err());
        for x in [vec![1, -1], vec![2, 3]] {
            let inst = SszInstance::new(x).unwrap();
            let u = ssz_to_upar(&inst).unwrap();
            let prank = exact_prank_biasless(&u.eps, &u.parameter, 9).unwrap();
            assert_eq!(prank <= u.r, brute_ssz(&inst.x).unwrap());
        }
        assert!(SszInstance::new(vec![1, 0]).is_err());
    }

    #[test]
    fn cyclic_index_wraps_into_range() {
        assert_eq!(cyclic(-2, 3), 1);
        assert_eq!(cyclic(1, 3), 1);
        assert_eq!(cyclic(4, 3), 1);
        assert_eq!(cyclic(0, 3), 3);
        assert_eq!(cyclic(6, 3), 3);
    }
}
