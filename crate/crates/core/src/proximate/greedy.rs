use num_traits::Zero;

use super::{check_eps, ProximateError};
use crate::net::{Parameter, Unit};
use crate::rational::{self, Rational};

/// Greedy partition of points into groups led by a starter point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxPartition {
    /// Member indices per group, ascending; the first member is the starter.
    pub groups: Vec<Vec<usize>>,
}

impl ApproxPartition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn starters(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g[0]).collect()
    }
}

/// Scans points in order; each joins the lowest-indexed group whose starter
/// lies within uniform distance `eps`, or starts a new group.
pub fn approx_partition<P: AsRef<[Rational]>>(eps: &Rational, points: &[P]) -> ApproxPartition {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let p = p.as_ref();
        let home = groups.iter().position(|g| rational::dist(points[g[0]].as_ref(), p) <= *eps);
        match home {
            Some(j) => groups[j].push(i),
            None => groups.push(vec![i]),
        }
    }
    ApproxPartition { groups }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    /// Units with `‖b_i‖∞ ≤ ε`, dropped in stage 1.
    pub eliminated: Vec<usize>,
    /// Stage 2 groups as unit indices.
    pub groups: Vec<Vec<usize>>,
    /// Starter vector `v_j = sign(b)·(b, c)` of each group.
    pub starters: Vec<Vec<Rational>>,
    /// Merged outgoing weight `α_j = Σ sign(b_i)·a_i` of each group.
    pub alphas: Vec<Vec<Rational>>,
    pub bound: usize,
}

impl GreedyResult {
    /// Whether group `j` has `‖α_j‖∞ ≤ ε·|Π_j|` and is removed in stage 3.
    pub fn killed(&self, eps: &Rational, j: usize) -> bool {
        !survives(eps, &self.alphas[j], self.groups[j].len())
    }
}

fn survives(eps: &Rational, alpha: &[Rational], size: usize) -> bool {
    rational::uniform_norm(alpha) > eps * Rational::from_integer(size.into())
}

pub fn greedy_bound(eps: &Rational, w: &Parameter) -> Result<GreedyResult, ProximateError> {
    check_eps(eps)?;
    let (kept, eliminated): (Vec<usize>, Vec<usize>) =
        (0..w.h()).partition(|&i| rational::uniform_norm(&w.unit(i).b) > *eps);
    let points: Vec<Vec<Rational>> = kept.iter().map(|&i| w.unit(i).signed_incoming()).collect();
    let partition = approx_partition(eps, &points);
    let mut groups = Vec::with_capacity(partition.len());
    let mut starters = Vec::with_capacity(partition.len());
    let mut alphas = Vec::with_capacity(partition.len());
    for local in &partition.groups {
        let members: Vec<usize> = local.iter().map(|&k| kept[k]).collect();
        let mut alpha = vec![Rational::zero(); w.m()];
        for &i in &members {
            let u = w.unit(i);
            if u.sign() > 0 {
                rational::add_assign(&mut alpha, &u.a);
            } else {
                rational::sub_assign(&mut alpha, &u.a);
            }
        }
        starters.push(points[local[0]].clone());
        groups.push(members);
        alphas.push(alpha);
    }
    let bound = groups.iter().zip(&alphas).filter(|(g, a)| survives(eps, a, g.len())).count();
    Ok(GreedyResult { eliminated, groups, starters, alphas, bound })
}

/// A parameter within `eps` of `w` whose rank equals `greedy.bound`.
pub fn construct_witness(eps: &Rational, w: &Parameter, greedy: &GreedyResult) -> Result<Parameter, ProximateError> {
    if greedy_bound(eps, w)? != *greedy {
        return Err(ProximateError::InconsistentGreedy);
    }
    let mut units: Vec<Unit> = w.units().to_vec();
    for &i in &greedy.eliminated {
        units[i].b = vec![Rational::zero(); w.n()];
    }
    for (j, group) in greedy.groups.iter().enumerate() {
        let killed = greedy.killed(eps, j);
        let share: Vec<Rational> = greedy.alphas[j]
            .iter()
            .map(|x| x / Rational::from_integer(group.len().into()))
            .collect();
        for &i in group {
            let s = units[i].sign();
            let mut target = rational::scale(&greedy.starters[j], s);
            units[i].c = target.pop().expect("starter holds c");
            units[i].b = target;
            if killed {
                if s > 0 {
                    rational::sub_assign(&mut units[i].a, &share);
                } else {
                    rational::add_assign(&mut units[i].a, &share);
                }
            }
        }
    }
    Ok(w.with_units(units))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::rank;
    use crate::rational::{int, ratio};

    fn w3(units: &[(Rational, Rational, Rational)], d: i64) -> Parameter {
        Parameter::scalar(units.iter().cloned(), int(d))
    }

    #[test]
    fn approx_partition_examples() {
        let pts = vec![
            vec![int(0), int(0)],
            vec![ratio(1, 2), ratio(1, 2)],
            vec![int(2), int(0)],
            vec![ratio(3, 2), ratio(2, 5)],
        ];
        let p = approx_partition(&int(1), &pts);
        assert_eq!(p.groups, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(p.starters(), vec![0, 2]);

        assert_eq!(approx_partition(&int(1), &[vec![int(7)]]).len(), 1);

        let line = vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(2), int(0)]];
        assert_eq!(approx_partition(&int(1), &line).groups, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn approx_partition_joins_lowest_indexed_starter() {
        let pts = vec![vec![int(0)], vec![int(2)], vec![int(1)]];
        assert_eq!(approx_partition(&int(1), &pts).groups, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn greedy_examples() {
        let w = w3(&[(int(3), ratio(1, 2), int(0)), (int(4), int(5), int(0))], 0);
        let g = greedy_bound(&int(1), &w).unwrap();
        assert_eq!(g.eliminated, vec![0]);
        assert_eq!(g.groups, vec![vec![1]]);
        assert_eq!(g.bound, 1);

        let small = w3(&[(ratio(1, 2), ratio(1, 3), int(0)), (int(-1), ratio(-1, 2), int(4))], 0);
        assert_eq!(greedy_bound(&int(4), &small).unwrap().bound, 0);
    }

    #[test]
    fn greedy_on_merge_example_keeps_large_unit() {
        // The second unit is eliminated before it could absorb the first.
        let w = w3(&[(int(2), int(2), int(0)), (int(0), int(0), int(0))], 0);
        let g = greedy_bound(&int(1), &w).unwrap();
        assert_eq!(g.eliminated, vec![1]);
        assert_eq!(g.alphas, vec![vec![int(2)]]);
        assert_eq!(g.bound, 1);
        let u = construct_witness(&int(1), &w, &g).unwrap();
        assert_eq!(rank(&u), 1);
        assert!(u.distance(&w).unwrap() <= int(1));
    }

    #[test]
    fn witness_is_identity_for_tiny_eps() {
        let w = w3(&[(int(1), int(2), int(3)), (int(-2), int(5), int(1)), (int(4), int(-3), int(2))], 1);
        let eps = ratio(1, 100);
        let g = greedy_bound(&eps, &w).unwrap();
        assert_eq!(g.bound, 3);
        assert_eq!(construct_witness(&eps, &w, &g).unwrap(), w);
    }

    #[test]
    fn witness_for_large_eps_has_rank_zero() {
        let w = w3(&[(int(1), int(2), int(3)), (int(-2), int(-1), int(1))], 0);
        let eps = int(3);
        let g = greedy_bound(&eps, &w).unwrap();
        let u = construct_witness(&eps, &w, &g).unwrap();
        assert_eq!(rank(&u), 0);
        assert!(u.distance(&w).unwrap() <= eps);
    }

    #[test]
    fn witness_merges_and_kills() {
        let w = w3(
            &[(int(1), int(3), int(0)), (ratio(-1, 2), ratio(-7, 2), ratio(1, 2)), (int(5), int(10), int(0))],
            0,
        );
        let eps = int(1);
        let g = greedy_bound(&eps, &w).unwrap();
        assert_eq!(g.groups, vec![vec![0, 1], vec![2]]);
        assert_eq!(g.alphas[0], vec![ratio(3, 2)]);
        assert_eq!(g.bound, 1);
        let u = construct_witness(&eps, &w, &g).unwrap();
        assert_eq!(rank(&u), 1);
        assert!(u.distance(&w).unwrap() <= eps);
    }

    #[test]
    fn witness_rejects_foreign_greedy_result() {
        let w = w3(&[(int(1), int(2), int(3))], 0);
        let g = greedy_bound(&int(5), &w).unwrap();
        assert_eq!(construct_witness(&int(1), &w, &g), Err(ProximateError::InconsistentGreedy));
        assert!(greedy_bound(&int(0), &w).is_err());
    }
}
