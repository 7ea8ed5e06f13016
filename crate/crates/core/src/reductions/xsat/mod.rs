//! Restricted satisfiability to uniform point partition through grid tiles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::ReductionError;
use crate::cover::{solve_upp_exact, verify_partition, CoverInstance, Partition, PointSet};
use crate::rational::{ratio, Rational};

mod formula;
mod gadget;

use formula::literal_value;
pub use formula::{validate_formula, Cell, GridLayout, LayoutEdge, RestrictedFormula, TileMap};
pub use gadget::{check_gadget, gadget_library, Dir, Gadget, GadgetReport, TileKind, TileType, GADGET_INTERIOR_LIMIT};

/// Diameter of the reduced instance; tiles have unit width.
pub fn tile_eps() -> Rational {
    ratio(1, 4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileRecord {
    pub cell: Cell,
    pub tile: TileType,
    /// Indices of this tile's interior points in the instance.
    pub interior: Vec<usize>,
}

/// A boundary point between `path[step]` and `path[step + 1]` of an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryRecord {
    pub edge: usize,
    pub step: usize,
    pub index: usize,
}

/// The reduced instance (diameter convention) with the provenance of each
/// point: interior points tile by tile in cell order, then boundary points
/// edge by edge along each path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XsatReduction {
    pub instance: CoverInstance,
    pub tiles: Vec<TileRecord>,
    pub boundaries: Vec<BoundaryRecord>,
}

impl XsatReduction {
    pub fn interior_count(&self) -> usize {
        self.tiles.iter().map(|t| t.interior.len()).sum()
    }

    fn tile_at(&self, cell: Cell) -> usize {
        self.tiles.iter().position(|t| t.cell == cell).expect("occupied cell")
    }

    fn boundary(&self, edge: usize, step: usize) -> usize {
        self.boundaries.iter().find(|b| b.edge == edge && b.step == step).expect("path step").index
    }
}

fn shift(p: &[Rational; 2], cell: Cell) -> Vec<Rational> {
    vec![&p[0] + Rational::from_integer(BigInt::from(cell.0)), &p[1] + Rational::from_integer(BigInt::from(cell.1))]
}

pub fn xsat_to_upp(f: &RestrictedFormula, layout: &GridLayout) -> Result<XsatReduction, ReductionError> {
    xsat_to_upp_with(f, layout, &gadget_library())
}

/// As [`xsat_to_upp`] with a caller-supplied gadget library. Every gadget
/// used must pass [`check_gadget`].
pub fn xsat_to_upp_with(f: &RestrictedFormula, layout: &GridLayout, library: &[Gadget]) -> Result<XsatReduction, ReductionError> {
    let map = TileMap::from_layout(f, layout)?;
    let eps = tile_eps();
    let by_type: BTreeMap<&TileType, &Gadget> = library.iter().map(|g| (g.tile(), g)).collect();
    let mut checked = BTreeSet::new();
    let mut points = Vec::new();
    let mut tiles = Vec::with_capacity(map.tiles.len());
    for (&cell, tile) in &map.tiles {
        let gadget = by_type.get(tile).ok_or_else(|| ReductionError::Gadget(format!("no gadget for tile {tile}")))?;
        if checked.insert(tile) && !check_gadget(gadget, &eps)?.passes(gadget.r()) {
            return Err(ReductionError::Gadget(format!("{tile} fails its contract")));
        }
        let start = points.len();
        points.extend(gadget.interior().iter().map(|p| shift(p, cell)));
        tiles.push(TileRecord { cell, tile: tile.clone(), interior: (start..points.len()).collect() });
    }
    let mut boundaries = Vec::new();
    for (e, edge) in layout.edges.iter().enumerate() {
        for (step, w) in edge.path.windows(2).enumerate() {
            let d = Dir::between(w[0], w[1]).expect("checked layout");
            boundaries.push(BoundaryRecord { edge: e, step, index: points.len() });
            points.push(shift(&d.midpoint(), w[0]));
        }
    }
    let instance = CoverInstance::new(PointSet::new(2, points)?, eps, map.total_groups())?;
    Ok(XsatReduction { instance, tiles, boundaries })
}

fn edge_literal(f: &RestrictedFormula, edge: &LayoutEdge) -> i32 {
    let v = (edge.variable + 1) as i32;
    if f.clauses[edge.clause].contains(&v) {
        v
    } else {
        -v
    }
}

/// An `(r, 1/4)`-partition of the reduced instance built from a satisfying
/// assignment: each boundary point joins the tile on the side of the true
/// literal's variable or the false literal's clause.
pub fn assignment_to_partition(f: &RestrictedFormula, layout: &GridLayout, assignment: &[bool]) -> Result<Partition, ReductionError> {
    if assignment.len() != f.n || !f.satisfied_by(assignment) {
        return Err(ReductionError::Unsatisfying);
    }
    let red = xsat_to_upp(f, layout)?;
    let mut owned: Vec<Vec<usize>> = vec![Vec::new(); red.tiles.len()];
    for (e, edge) in layout.edges.iter().enumerate() {
        let toward_clause = literal_value(edge_literal(f, edge), assignment);
        for step in 0..edge.path.len() - 1 {
            let cell = if toward_clause { edge.path[step] } else { edge.path[step + 1] };
            owned[red.tile_at(cell)].push(red.boundary(e, step));
        }
    }
    let eps = tile_eps();
    let all = red.instance.points.points();
    let mut groups = Vec::with_capacity(red.instance.r);
    for (t, record) in red.tiles.iter().enumerate() {
        let members: Vec<usize> = record.interior.iter().chain(&owned[t]).copied().collect();
        let local = PointSet::new(2, members.iter().map(|&i| all[i].clone()).collect())?;
        let part = solve_upp_exact(&local, &eps, GADGET_INTERIOR_LIMIT + 4)?;
        if part.len() > record.tile.groups() {
            return Err(ReductionError::Gadget(format!("{} at {:?} cannot absorb its boundary points", record.tile, record.cell)));
        }
        groups.extend(part.groups.into_iter().map(|g| g.into_iter().map(|k| members[k]).collect::<Vec<_>>()));
    }
    Ok(Partition { groups }.normalized())
}

/// Reads a satisfying assignment off an `(r, 1/4)`-partition: every clause
/// tile leaves some boundary point to a neighbour, and following that edge
/// back to its variable fixes the literal true. Unreached variables are false.
pub fn partition_to_assignment(f: &RestrictedFormula, layout: &GridLayout, partition: &Partition) -> Result<Vec<bool>, ReductionError> {
    let red = xsat_to_upp(f, layout)?;
    let points = &red.instance.points;
    let valid = verify_partition(points, partition, &red.instance.eps).map_err(|e| ReductionError::Partition(e.to_string()))?;
    if !valid {
        return Err(ReductionError::Partition("a group exceeds the diameter".into()));
    }
    if partition.len() > red.instance.r {
        return Err(ReductionError::Partition(format!("{} groups exceed r = {}", partition.len(), red.instance.r)));
    }
    let mut tile_of = vec![None; points.len()];
    for (t, record) in red.tiles.iter().enumerate() {
        for &i in &record.interior {
            tile_of[i] = Some(t);
        }
    }
    let mut owner = vec![None; points.len()];
    for group in &partition.groups {
        let tile = group.iter().find_map(|&i| tile_of[i]);
        for &i in group {
            owner[i] = tile;
        }
    }
    let owned_by = |edge: usize, step: usize, cell: Cell| owner[red.boundary(edge, step)] == Some(red.tile_at(cell));
    let mut assignment: Vec<Option<bool>> = vec![None; f.n];
    for j in 0..f.clauses.len() {
        let clause_cell = layout.clauses[j];
        let (e, edge) = layout
            .edges
            .iter()
            .enumerate()
            .filter(|(_, edge)| edge.clause == j)
            .find(|(e, edge)| !owned_by(*e, edge.path.len() - 2, clause_cell))
            .ok_or_else(|| ReductionError::Partition(format!("clause {} absorbs every boundary point", j + 1)))?;
        for step in (0..edge.path.len() - 1).rev() {
            if !owned_by(e, step, edge.path[step]) {
                return Err(ReductionError::Partition(format!("edge {} breaks at step {}", e + 1, step + 1)));
            }
        }
        let lit = edge_literal(f, edge);
        let value = lit > 0;
        match assignment[edge.variable] {
            Some(prev) if prev != value => {
                return Err(ReductionError::Partition(format!("variable {} read both ways", edge.variable + 1)));
            }
            _ => assignment[edge.variable] = Some(value),
        }
    }
    let assignment: Vec<bool> = assignment.into_iter().map(|v| v.unwrap_or(false)).collect();
    if !f.satisfied_by(&assignment) {
        return Err(ReductionError::Unsatisfying);
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::formula::tests::{phi2, square};
    use super::*;
    use crate::reductions::find_assignment;

    fn all_assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1u32 << n).map(move |bits| (0..n).map(|k| bits >> k & 1 == 1).collect())
    }

    /// Thrice the 3-direction variables and clauses, twice everything else.
    fn step_four_count(map: &TileMap) -> usize {
        let count = |pred: &dyn Fn(&TileType) -> bool| map.tiles.values().filter(|t| pred(t)).count();
        let three = count(&|t| t.kind() != TileKind::Edge && t.dirs().len() == 3);
        let edges = count(&|t| t.kind() == TileKind::Edge);
        let two = count(&|t| t.kind() != TileKind::Edge && t.dirs().len() == 2);
        3 * three + 2 * (edges + two)
    }

    #[test]
    fn phi2_instance_counts() {
        let (f, layout) = phi2();
        let red = xsat_to_upp(&f, &layout).unwrap();
        let map = TileMap::from_layout(&f, &layout).unwrap();
        assert_eq!(red.instance.r, step_four_count(&map));
        assert_eq!(red.instance.r, 28);
        assert_eq!(red.interior_count(), 42);
        assert_eq!(red.boundaries.len(), 14);
        assert_eq!(red.instance.points.len(), 56);
        assert_eq!(red.instance.eps, ratio(1, 4));
        assert_eq!(xsat_to_upp(&f, &layout).unwrap(), red);
    }

    #[test]
    fn square_instance_counts() {
        let (f, layout) = square();
        let red = xsat_to_upp(&f, &layout).unwrap();
        assert_eq!(red.interior_count(), 12);
        assert_eq!(red.boundaries.len(), 4);
        // Boundary between (0,0) and (1,0) sits at the shared side's midpoint.
        let b = red.instance.points.point(red.boundaries[0].index);
        assert_eq!(b, &[Rational::from_integer(1.into()), ratio(1, 2)]);
    }

    #[test]
    fn round_trip_every_satisfying_assignment() {
        for (f, layout) in [phi2(), square()] {
            let red = xsat_to_upp(&f, &layout).unwrap();
            let mut any = false;
            for a in all_assignments(f.n).filter(|a| f.satisfied_by(a)) {
                any = true;
                let p = assignment_to_partition(&f, &layout, &a).unwrap();
                assert!(verify_partition(&red.instance.points, &p, &red.instance.eps).unwrap());
                assert_eq!(p.len(), red.instance.r);
                let back = partition_to_assignment(&f, &layout, &p).unwrap();
                assert!(f.satisfied_by(&back));
            }
            assert!(any);
            assert!(find_assignment(&f).unwrap().is_some());
        }
    }

    #[test]
    fn unsatisfying_assignment_rejected() {
        let (f, layout) = phi2();
        let bad = all_assignments(3).find(|a| !f.satisfied_by(a)).unwrap();
        assert_eq!(assignment_to_partition(&f, &layout, &bad), Err(ReductionError::Unsatisfying));
        assert_eq!(assignment_to_partition(&f, &layout, &[true]), Err(ReductionError::Unsatisfying));
    }

    #[test]
    fn corrupted_partition_rejected() {
        let (f, layout) = phi2();
        let a = find_assignment(&f).unwrap().unwrap();
        let mut p = assignment_to_partition(&f, &layout, &a).unwrap();
        let from = p.groups.iter().position(|g| g.len() > 1).unwrap();
        let moved = p.groups[from].pop().unwrap();
        p.groups.last_mut().unwrap().push(moved);
        assert!(matches!(partition_to_assignment(&f, &layout, &p), Err(ReductionError::Partition(_))));

        let mut split = assignment_to_partition(&f, &layout, &a).unwrap();
        let last = split.groups.iter().position(|g| g.len() > 1).unwrap();
        let point = split.groups[last].pop().unwrap();
        split.groups.push(vec![point]);
        assert!(matches!(partition_to_assignment(&f, &layout, &split), Err(ReductionError::Partition(_))));
    }

    #[test]
    fn failing_gadget_library_rejected() {
        let (f, layout) = square();
        let mut lib = gadget_library();
        let tile = TileType::new(TileKind::Clause, &[Dir::N, Dir::W], None).unwrap();
        let k = lib.iter().position(|g| *g.tile() == tile).unwrap();
        let half = ratio(1, 2);
        lib[k] = Gadget::new(tile, 2, vec![[half.clone(), half.clone()]; 3]).unwrap();
        assert!(matches!(xsat_to_upp_with(&f, &layout, &lib), Err(ReductionError::Gadget(_))));
        lib.remove(k);
        assert!(matches!(xsat_to_upp_with(&f, &layout, &lib), Err(ReductionError::Gadget(_))));
    }
}
