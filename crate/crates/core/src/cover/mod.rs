//! Uniform point cover, uniform point partition and clique partition of unit
//! square graphs.
//!
//! Conventions: `eps` is a *radius* for covers and a *diameter* for
//! partitions and graphs. An `(r, ε/2)`-cover, an `(r, ε)`-partition and a
//! clique partition of `build_graph(points, ε)` into `r` cliques exist
//! together or not at all. "At most `r`" is meant throughout.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::proximate::approx_partition;
use crate::rational::{self, Rational};

mod exact;
mod scalar;

pub use exact::{clique_partition_number, clique_partition_within, solve_upp_exact, DEFAULT_POINT_LIMIT};
pub use scalar::solve_scalar_cover;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("point dimension must be at least 1")]
    ZeroDimension,
    #[error("point {index} has dimension {found}, expected {expected}")]
    Dimension { index: usize, found: usize, expected: usize },
    #[error("eps must be positive, got {0}")]
    NonPositiveEps(Rational),
    #[error("groups do not partition the points: {0}")]
    NotAPartition(String),
    #[error("group {group} has uniform diameter {diameter}, more than {eps}")]
    DiameterExceeded { group: usize, diameter: Box<Rational>, eps: Box<Rational> },
    #[error("point {0} is not covered")]
    Uncovered(usize),
    #[error("{h} points exceed the limit of {limit}")]
    PointLimit { h: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    p: usize,
    points: Vec<Vec<Rational>>,
}

impl PointSet {
    pub fn new(p: usize, points: Vec<Vec<Rational>>) -> Result<Self, CoverError> {
        if p == 0 {
            return Err(CoverError::ZeroDimension);
        }
        if let Some((index, x)) = points.iter().enumerate().find(|(_, x)| x.len() != p) {
            return Err(CoverError::Dimension { index, found: x.len(), expected: p });
        }
        Ok(Self { p, points })
    }

    /// Points given as integer coordinates divided by `den`.
    pub fn from_integers(p: usize, den: i64, coords: &[&[i64]]) -> Result<Self, CoverError> {
        let points = coords.iter().map(|x| x.iter().map(|&v| rational::ratio(v, den)).collect()).collect();
        Self::new(p, points)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    /// Zero-pads every point to dimension `p ≥ self.p()`.
    pub fn embed(&self, p: usize) -> PointSet {
        assert!(p >= self.p, "cannot embed into a lower dimension");
        let points = self
            .points
            .iter()
            .map(|x| {
                let mut y = x.clone();
                y.resize(p, Rational::zero());
                y
            })
            .collect();
        PointSet { p, points }
    }

    fn diameter_of(&self, group: &[usize]) -> Rational {
        let pts: Vec<&[Rational]> = group.iter().map(|&i| self.points[i].as_slice()).collect();
        rational::diameter(&pts)
    }
}

/// A uniform cover / partition decision instance: `eps` and budget `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub points: PointSet,
    pub eps: Rational,
    pub r: usize,
}

impl CoverInstance {
    pub fn new(points: PointSet, eps: Rational, r: usize) -> Result<Self, CoverError> {
        check_eps(&eps)?;
        Ok(Self { points, eps, r })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cover {
    pub points: Vec<Vec<Rational>>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Groups of 0-based point indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    pub groups: Vec<Vec<usize>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Sorts members within groups and groups by their first member.
    pub fn normalized(mut self) -> Partition {
        self.groups.iter_mut().for_each(|g| g.sort_unstable());
        self.groups.retain(|g| !g.is_empty());
        self.groups.sort();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSquareGraph {
    adjacency: Vec<Vec<bool>>,
}

impl UnitSquareGraph {
    pub fn from_edges(h: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![vec![false; h]; h];
        for &(i, j) in edges {
            if i != j {
                adjacency[i][j] = true;
                adjacency[j][i] = true;
            }
        }
        Self { adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let h = self.vertex_count();
        (0..h).flat_map(|i| (i + 1..h).map(move |j| (i, j))).filter(|&(i, j)| self.adjacency[i][j]).collect()
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(k, &i)| vertices[k + 1..].iter().all(|&j| self.adjacency[i][j]))
    }
}

pub(crate) fn check_eps(eps: &Rational) -> Result<(), CoverError> {
    if *eps > Rational::zero() {
        Ok(())
    } else {
        Err(CoverError::NonPositiveEps(eps.clone()))
    }
}

fn half(eps: &Rational) -> Rational {
    eps / Rational::from_integer(BigInt::from(2))
}

/// Edges between distinct points at uniform distance at most `eps`
/// (a diameter).
pub fn build_graph(points: &PointSet, eps: &Rational) -> UnitSquareGraph {
    let h = points.len();
    let mut adjacency = vec![vec![false; h]; h];
    for i in 0..h {
        for j in i + 1..h {
            if rational::dist(points.point(i), points.point(j)) <= *eps {
                adjacency[i][j] = true;
                adjacency[j][i] = true;
            }
        }
    }
    UnitSquareGraph { adjacency }
}

fn check_partition(h: usize, partition: &Partition) -> Result<(), CoverError> {
    let mut seen = vec![false; h];
    for g in &partition.groups {
        if g.is_empty() {
            return Err(CoverError::NotAPartition("empty group".into()));
        }
        for &i in g {
            if i >= h {
                return Err(CoverError::NotAPartition(format!("point {} out of range", i + 1)));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(CoverError::NotAPartition(format!("point {} listed twice", i + 1)));
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(i) => Err(CoverError::NotAPartition(format!("point {} missing", i + 1))),
        None => Ok(()),
    }
}

/// Whether every group has uniform diameter at most `eps`. Errors if the
/// groups are not a partition of the points.
pub fn verify_partition(points: &PointSet, partition: &Partition, eps: &Rational) -> Result<bool, CoverError> {
    check_partition(points.len(), partition)?;
    Ok(partition.groups.iter().all(|g| points.diameter_of(g) <= *eps))
}

/// Whether every point lies within uniform distance `eps` (a radius) of some
/// covering point.
pub fn verify_cover(points: &PointSet, cover: &Cover, eps: &Rational) -> bool {
    points.points().iter().all(|x| cover.points.iter().any(|y| y.len() == x.len() && rational::dist(x, y) <= *eps))
}

/// Whether every group induces a clique. Errors if not a partition.
pub fn verify_clique_partition(graph: &UnitSquareGraph, partition: &Partition) -> Result<bool, CoverError> {
    check_partition(graph.vertex_count(), partition)?;
    Ok(partition.groups.iter().all(|g| graph.is_clique(g)))
}

/// Bounding-box centres of the groups of an `(r, ε)`-partition, giving an
/// `(r, ε/2)`-cover. `eps` is the partition diameter.
pub fn partition_to_cover(points: &PointSet, partition: &Partition, eps: &Rational) -> Result<Cover, CoverError> {
    check_partition(points.len(), partition)?;
    let mut centres = Vec::with_capacity(partition.len());
    for (group, members) in partition.groups.iter().enumerate() {
        let diameter = points.diameter_of(members);
        if diameter > *eps {
            return Err(CoverError::DiameterExceeded { group, diameter: Box::new(diameter), eps: Box::new(eps.clone()) });
        }
        let pts: Vec<&[Rational]> = members.iter().map(|&i| points.point(i)).collect();
        centres.push(rational::bounding_box_centre(&pts));
    }
    Ok(Cover { points: centres })
}

/// Groups points by nearest covering point (lowest index on ties), dropping
/// unused covering points. The cover must have radius `eps / 2`, so the
/// result has diameter at most `eps`.
pub fn cover_to_partition(points: &PointSet, cover: &Cover, eps: &Rational) -> Result<Partition, CoverError> {
    let radius = half(eps);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); cover.len()];
    for (i, x) in points.points().iter().enumerate() {
        let mut nearest: Option<(usize, Rational)> = None;
        for (j, y) in cover.points.iter().enumerate() {
            if y.len() != x.len() {
                continue;
            }
            let d = rational::dist(x, y);
            if nearest.as_ref().is_none_or(|(_, best)| d < *best) {
                nearest = Some((j, d));
            }
        }
        match nearest {
            Some((j, d)) if d <= radius => groups[j].push(i),
            _ => return Err(CoverError::Uncovered(i)),
        }
    }
    groups.retain(|g| !g.is_empty());
    Ok(Partition { groups })
}

/// Greedy partition with diameter at most `eps`: starters at radius `eps/2`.
pub fn greedy_upp(points: &PointSet, eps: &Rational) -> Partition {
    Partition { groups: approx_partition(&half(eps), points.points()).groups }
}
