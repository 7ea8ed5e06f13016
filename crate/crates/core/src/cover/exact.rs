//! Exact minimum partitions by branch and bound over set partitions.

use super::{check_eps, greedy_upp, CoverError, Partition, PointSet, UnitSquareGraph};
use crate::rational::Rational;

pub const DEFAULT_POINT_LIMIT: usize = 12;

/// Assigns vertices in order to an existing compatible group or a new one,
/// pruning any branch that cannot beat the incumbent.
struct Search<'a, F: Fn(usize, &[usize]) -> bool> {
    h: usize,
    fits: &'a F,
    groups: Vec<Vec<usize>>,
    best: Option<Vec<Vec<usize>>>,
    bound: usize,
}

impl<F: Fn(usize, &[usize]) -> bool> Search<'_, F> {
    fn run(&mut self, i: usize) {
        if self.groups.len() >= self.bound {
            return;
        }
        if i == self.h {
            self.bound = self.groups.len();
            self.best = Some(self.groups.clone());
            return;
        }
        for g in 0..self.groups.len() {
            if (self.fits)(i, &self.groups[g]) {
                self.groups[g].push(i);
                self.run(i + 1);
                self.groups[g].pop();
            }
        }
        self.groups.push(vec![i]);
        self.run(i + 1);
        self.groups.pop();
    }
}

fn minimum<F: Fn(usize, &[usize]) -> bool>(h: usize, fits: &F, incumbent: Vec<Vec<usize>>, bound: usize) -> Partition {
    let mut s = Search { h, fits, groups: Vec::new(), best: None, bound: bound + 1 };
    s.run(0);
    Partition { groups: s.best.unwrap_or(incumbent) }.normalized()
}

/// A partition of `points` into the fewest groups of uniform diameter at
/// most `eps` (a diameter).
pub fn solve_upp_exact(points: &PointSet, eps: &Rational, point_limit: usize) -> Result<Partition, CoverError> {
    check_eps(eps)?;
    if points.len() > point_limit {
        return Err(CoverError::PointLimit { h: points.len(), limit: point_limit });
    }
    // Per-coordinate boxes: a point fits iff the enlarged box stays within eps.
    let fits = |i: usize, group: &[usize]| {
        let x = points.point(i);
        (0..points.p()).all(|k| {
            let mut lo = &x[k];
            let mut hi = &x[k];
            for &j in group {
                let y = &points.point(j)[k];
                if y < lo {
                    lo = y;
                }
                if y > hi {
                    hi = y;
                }
            }
            hi - lo <= *eps
        })
    };
    let greedy = greedy_upp(points, eps);
    let bound = greedy.len();
    Ok(minimum(points.len(), &fits, greedy.groups, bound))
}

/// Fewest cliques partitioning the vertices, from the graph alone.
pub fn clique_partition_number(graph: &UnitSquareGraph, vertex_limit: usize) -> Result<Partition, CoverError> {
    let h = graph.vertex_count();
    if h > vertex_limit {
        return Err(CoverError::PointLimit { h, limit: vertex_limit });
    }
    let fits = |i: usize, group: &[usize]| group.iter().all(|&j| graph.has_edge(i, j));
    let singletons: Vec<Vec<usize>> = (0..h).map(|i| vec![i]).collect();
    Ok(minimum(h, &fits, singletons, h))
}

/// Whether the vertices split into at most `r` cliques.
pub fn clique_partition_within(graph: &UnitSquareGraph, r: usize, vertex_limit: usize) -> Result<bool, CoverError> {
    clique_partition_number(graph, vertex_limit).map(|p| p.len() <= r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_graph, verify_partition};
    use crate::rational::{int, ratio};

    fn pts(coords: &[&[i64]]) -> PointSet {
        PointSet::from_integers(2, 1, coords).unwrap()
    }

    #[test]
    fn exact_examples() {
        let close = pts(&[&[0, 0], &[1, 1], &[1, 0]]);
        assert_eq!(solve_upp_exact(&close, &int(1), 12).unwrap().len(), 1);

        let line = pts(&[&[0, 0], &[1, 0], &[2, 0]]);
        let p = solve_upp_exact(&line, &int(1), 12).unwrap();
        assert_eq!(p.len(), 2);
        assert!(verify_partition(&line, &p, &int(1)).unwrap());

        let far = pts(&[&[0, 0], &[3, 0], &[0, 3], &[3, 3]]);
        assert_eq!(solve_upp_exact(&far, &int(1), 12).unwrap().len(), 4);
    }

    #[test]
    fn limit_exceeded() {
        let many = PointSet::new(1, (0..13).map(|i| vec![int(i)]).collect()).unwrap();
        assert_eq!(
            solve_upp_exact(&many, &ratio(1, 2), 12),
            Err(CoverError::PointLimit { h: 13, limit: 12 })
        );
    }

    #[test]
    fn clique_partition_on_path_and_triangle() {
        let path = UnitSquareGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(clique_partition_number(&path, 12).unwrap().len(), 2);
        let triangle = UnitSquareGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(clique_partition_within(&triangle, 1, 12).unwrap());
        let line = pts(&[&[0, 0], &[1, 0], &[2, 0]]);
        assert_eq!(clique_partition_number(&build_graph(&line, &int(1)), 12).unwrap().len(), 2);
    }

    #[test]
    fn beats_greedy_when_greedy_is_suboptimal() {
        // Greedy starters at radius 1 give {0}, {2, 3}, {4}; {0, 2}, {3, 4} is optimal.
        let p = PointSet::new(1, vec![vec![int(0)], vec![int(2)], vec![int(3)], vec![int(4)]]).unwrap();
        let exact = solve_upp_exact(&p, &int(2), 12).unwrap();
        assert_eq!(exact.len(), 2);
        assert!(verify_partition(&p, &exact, &int(2)).unwrap());
    }
}
