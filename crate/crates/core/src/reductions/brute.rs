//! Exhaustive decision oracles for small instances.

use std::collections::BTreeSet;

use super::{ReductionError, RestrictedFormula};
use crate::cover::{check_eps, PointSet};
use crate::rational::{self, Rational};

pub const SAT_VARIABLE_LIMIT: usize = 20;
pub const SUBSET_LIMIT: usize = 20;
pub const SSZ_LIMIT: usize = 15;
pub const COVER_POINT_LIMIT: usize = 12;

/// The lexicographically first satisfying assignment (false < true).
pub fn find_assignment(f: &RestrictedFormula) -> Result<Option<Vec<bool>>, ReductionError> {
    if f.n > SAT_VARIABLE_LIMIT {
        return Err(ReductionError::SizeLimit { what: "variables", size: f.n, limit: SAT_VARIABLE_LIMIT });
    }
    for bits in 0..1u32 << f.n {
        let assignment: Vec<bool> = (0..f.n).rev().map(|k| bits >> k & 1 == 1).collect();
        if f.satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

pub fn brute_sat(f: &RestrictedFormula) -> Result<bool, ReductionError> {
    find_assignment(f).map(|a| a.is_some())
}

/// Whether some subset of `x` sums to `target`.
pub fn brute_ssum(x: &[i64], target: i64) -> Result<bool, ReductionError> {
    if x.len() > SUBSET_LIMIT {
        return Err(ReductionError::SizeLimit { what: "integers", size: x.len(), limit: SUBSET_LIMIT });
    }
    Ok((0..1u32 << x.len()).any(|mask| subset_sum(x, mask) == target as i128))
}

fn subset_sum(x: &[i64], mask: u32) -> i128 {
    x.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v as i128).sum()
}

/// A nonempty proper zero-sum subset (0-based), smallest mask first.
pub fn find_zero_subset(x: &[i64]) -> Result<Option<Vec<usize>>, ReductionError> {
    if x.len() > SSZ_LIMIT {
        return Err(ReductionError::SizeLimit { what: "integers", size: x.len(), limit: SSZ_LIMIT });
    }
    let full = (1u32 << x.len()) - 1;
    Ok((1..full).find(|&mask| subset_sum(x, mask) == 0).map(|mask| (0..x.len()).filter(|k| mask >> k & 1 == 1).collect()))
}

pub fn brute_ssz(x: &[i64]) -> Result<bool, ReductionError> {
    find_zero_subset(x).map(|s| s.is_some())
}

/// Whether at most `r` points cover `points` within radius `eps`.
///
/// Some optimal cover places each centre coordinate at `x_ik + eps` for a
/// source point `i`, so the search branches on such candidates for the first
/// uncovered point, keeping only candidates whose covered sets are maximal.
pub fn brute_cover(points: &PointSet, eps: &Rational, r: usize) -> Result<bool, ReductionError> {
    check_eps(eps)?;
    let h = points.len();
    if h > COVER_POINT_LIMIT {
        return Err(ReductionError::SizeLimit { what: "points", size: h, limit: COVER_POINT_LIMIT });
    }
    let per_coord: Vec<BTreeSet<Rational>> =
        (0..points.p()).map(|k| points.points().iter().map(|x| &x[k] + eps).collect()).collect();
    let mut candidates: Vec<Vec<Rational>> = vec![Vec::new()];
    for values in &per_coord {
        candidates = candidates
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut c = prefix.clone();
                    c.push(v.clone());
                    c
                })
            })
            .collect();
    }
    let mut masks: BTreeSet<u32> = BTreeSet::new();
    for c in &candidates {
        let mask = (0..h).filter(|&i| rational::dist(points.point(i), c) <= *eps).fold(0u32, |m, i| m | 1 << i);
        if mask != 0 {
            masks.insert(mask);
        }
    }
    let maximal: Vec<u32> = masks.iter().copied().filter(|&m| !masks.iter().any(|&o| o != m && o & m == m)).collect();
    let full = if h == 0 { 0 } else { (1u32 << h) - 1 };
    Ok(cover_search(&maximal, full, 0, r))
}

fn cover_search(sets: &[u32], full: u32, covered: u32, budget: usize) -> bool {
    if covered == full {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let first = (!covered & full).trailing_zeros();
    sets.iter()
        .filter(|&&s| s >> first & 1 == 1)
        .any(|&s| cover_search(sets, full, covered | s, budget - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn subset_oracles() {
        assert!(brute_ssum(&[1, 2, 3], 5).unwrap());
        assert!(!brute_ssum(&[2, 4], 5).unwrap());
        assert!(brute_ssz(&[1, 2, 3, -5]).unwrap());
        assert!(!brute_ssz(&[1, 1, -3]).unwrap());
        // The full set summing to zero does not count.
        assert!(!brute_ssz(&[1, -1]).unwrap());
        assert_eq!(find_zero_subset(&[-3, -4, 1, -5, 2]).unwrap().map(|s| s.len()), Some(3));
        assert!(brute_ssz(&[1; 16]).is_err());
    }

    #[test]
    fn cover_oracle() {
        let p = PointSet::from_integers(2, 1, &[&[0, 0], &[1, 0], &[2, 0]]).unwrap();
        assert!(brute_cover(&p, &int(1), 1).unwrap());
        assert!(!brute_cover(&p, &ratio(1, 2), 1).unwrap());
        assert!(brute_cover(&p, &ratio(1, 2), 2).unwrap());
        let empty = PointSet::new(2, vec![]).unwrap();
        assert!(brute_cover(&empty, &int(1), 0).unwrap());
    }

    #[test]
    fn sat_oracle() {
        let f = RestrictedFormula::new(2, vec![vec![1, 2], vec![-1, 2], vec![-2, 1]]).unwrap();
        assert_eq!(find_assignment(&f).unwrap(), Some(vec![true, true]));
    }
}
