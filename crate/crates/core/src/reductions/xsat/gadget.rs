//! Tile gadgets: interior point arrangements and their partition contract.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use super::super::ReductionError;
use crate::cover::{solve_upp_exact, PointSet};
use crate::rational::{ratio, Rational};

pub const GADGET_INTERIOR_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    /// Unit step from a cell towards its neighbour in this direction.
    pub fn offset(self) -> (i64, i64) {
        match self {
            Dir::N => (0, 1),
            Dir::E => (1, 0),
            Dir::S => (0, -1),
            Dir::W => (-1, 0),
        }
    }

    pub fn between(from: (i64, i64), to: (i64, i64)) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| {
            let (dx, dy) = d.offset();
            (from.0 + dx, from.1 + dy) == to
        })
    }

    /// Midpoint of the tile side in this direction, in tile-local coordinates.
    pub fn midpoint(self) -> [Rational; 2] {
        let half = ratio(1, 2);
        match self {
            Dir::N => [half, Rational::one()],
            Dir::E => [Rational::one(), half],
            Dir::S => [half, Rational::zero()],
            Dir::W => [Rational::zero(), half],
        }
    }

    fn rotate(self) -> Dir {
        match self {
            Dir::E => Dir::N,
            Dir::N => Dir::W,
            Dir::W => Dir::S,
            Dir::S => Dir::E,
        }
    }

    fn reflect(self) -> Dir {
        match self {
            Dir::E => Dir::W,
            Dir::W => Dir::E,
            d => d,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Dir::N => 'N',
            Dir::E => 'E',
            Dir::S => 'S',
            Dir::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| d.letter() == c)
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TileKind {
    Edge,
    Variable,
    Clause,
}

impl TileKind {
    pub fn name(self) -> &'static str {
        match self {
            TileKind::Edge => "edge",
            TileKind::Variable => "variable",
            TileKind::Clause => "clause",
        }
    }

    pub fn from_name(s: &str) -> Option<TileKind> {
        [TileKind::Edge, TileKind::Variable, TileKind::Clause].into_iter().find(|k| k.name() == s)
    }
}

/// A tile's role and the directions in which edges leave it. Variable tiles
/// also mark the direction of their negative occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TileType {
    kind: TileKind,
    dirs: Vec<Dir>,
    negative: Option<Dir>,
}

impl TileType {
    pub fn new(kind: TileKind, dirs: &[Dir], negative: Option<Dir>) -> Result<Self, ReductionError> {
        let set: BTreeSet<Dir> = dirs.iter().copied().collect();
        let bad = |msg: &str| Err(ReductionError::Formula(format!("tile type: {msg}")));
        if set.len() != dirs.len() {
            return bad("repeated direction");
        }
        let allowed = match kind {
            TileKind::Edge => set.len() == 2,
            _ => (2..=3).contains(&set.len()),
        };
        if !allowed {
            return bad("wrong number of directions");
        }
        match (kind, negative) {
            (TileKind::Variable, Some(d)) if set.contains(&d) => {}
            (TileKind::Variable, _) => return bad("variable tiles need a negative direction among their directions"),
            (_, Some(_)) => return bad("only variable tiles have a negative direction"),
            _ => {}
        }
        Ok(Self { kind, dirs: set.into_iter().collect(), negative })
    }

    pub fn kind(&self) -> TileKind {
        self.kind
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn negative(&self) -> Option<Dir> {
        self.negative
    }

    /// Groups allocated to a tile of this type.
    pub fn groups(&self) -> usize {
        match self.kind {
            TileKind::Edge => 2,
            _ => self.dirs.len(),
        }
    }

    /// The maximal sets of boundary directions the tile must be able to
    /// absorb, and no others.
    pub fn required_family(&self) -> Vec<Vec<Dir>> {
        let mut family: Vec<Vec<Dir>> = match self.kind {
            TileKind::Edge => self.dirs.iter().map(|&d| vec![d]).collect(),
            TileKind::Variable => {
                let neg = self.negative.expect("validated");
                vec![vec![neg], self.dirs.iter().copied().filter(|&d| d != neg).collect()]
            }
            TileKind::Clause => {
                (0..self.dirs.len()).map(|skip| self.dirs.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &d)| d).collect()).collect()
            }
        };
        family.sort();
        family
    }

    fn transformed(&self, t: Symmetry) -> TileType {
        let map = |d: Dir| t.dir(d);
        let mut dirs: Vec<Dir> = self.dirs.iter().map(|&d| map(d)).collect();
        dirs.sort();
        TileType { kind: self.kind, dirs, negative: self.negative.map(map) }
    }
}

impl fmt::Display for TileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.kind.name())?;
        for d in &self.dirs {
            write!(f, "{d}")?;
        }
        write!(f, "]")?;
        if let Some(n) = self.negative {
            write!(f, " neg {n}")?;
        }
        Ok(())
    }
}

/// One of the eight rectilinear symmetries of the unit square: an optional
/// reflection `x ↦ 1 − x` followed by `turns` counter-clockwise rotations.
#[derive(Debug, Clone, Copy)]
struct Symmetry {
    reflect: bool,
    turns: u8,
}

impl Symmetry {
    fn all() -> impl Iterator<Item = Symmetry> {
        [false, true].into_iter().flat_map(|reflect| (0..4).map(move |turns| Symmetry { reflect, turns }))
    }

    fn dir(self, mut d: Dir) -> Dir {
        if self.reflect {
            d = d.reflect();
        }
        for _ in 0..self.turns {
            d = d.rotate();
        }
        d
    }

    fn point(self, p: &[Rational; 2]) -> [Rational; 2] {
        let one = Rational::one();
        let [mut x, mut y] = p.clone();
        if self.reflect {
            x = &one - x;
        }
        for _ in 0..self.turns {
            (x, y) = (&one - y, x);
        }
        [x, y]
    }
}

/// Interior points for one tile type, in tile-local coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    tile: TileType,
    r: usize,
    interior: Vec<[Rational; 2]>,
}

impl Gadget {
    pub fn new(tile: TileType, r: usize, interior: Vec<[Rational; 2]>) -> Result<Self, ReductionError> {
        if r != tile.groups() {
            return Err(ReductionError::Gadget(format!("{tile}: allocates {r} groups, expected {}", tile.groups())));
        }
        let unit = |v: &Rational| *v >= Rational::zero() && *v <= Rational::one();
        if !interior.iter().all(|p| p.iter().all(unit)) {
            return Err(ReductionError::Gadget(format!("{tile}: interior point outside the unit square")));
        }
        Ok(Self { tile, r, interior })
    }

    pub fn tile(&self) -> &TileType {
        &self.tile
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn interior(&self) -> &[[Rational; 2]] {
        &self.interior
    }

    fn transformed(&self, t: Symmetry) -> Gadget {
        Gadget { tile: self.tile.transformed(t), r: self.r, interior: self.interior.iter().map(|p| t.point(p)).collect() }
    }
}

fn q(num: i64, den: i64) -> Rational {
    ratio(num, den)
}

fn pts(coords: &[(i64, i64)], den: i64) -> Vec<[Rational; 2]> {
    coords.iter().map(|&(x, y)| [q(x, den), q(y, den)]).collect()
}

fn base_designs() -> Vec<Gadget> {
    use Dir::*;
    let straight = pts(&[(2, 4), (4, 4), (6, 4)], 8);
    let corner = pts(&[(2, 4), (4, 4), (6, 6)], 8);
    let designs = [
        (TileKind::Edge, vec![W, E], None, straight.clone()),
        (TileKind::Edge, vec![W, N], None, corner.clone()),
        (TileKind::Variable, vec![W, E], Some(W), straight.clone()),
        (TileKind::Variable, vec![W, N], Some(W), corner.clone()),
        (TileKind::Variable, vec![W, S, E], Some(S), pts(&[(2, 5), (6, 5), (4, 2), (3, 3), (5, 3)], 8)),
        (TileKind::Variable, vec![W, S, E], Some(W), pts(&[(2, 5), (4, 2), (6, 5), (3, 3), (4, 5)], 8)),
        (TileKind::Clause, vec![W, E], None, straight),
        (TileKind::Clause, vec![W, N], None, corner),
        (TileKind::Clause, vec![W, N, E], None, pts(&[(2, 3), (4, 6), (6, 3), (4, 4)], 8)),
    ];
    designs
        .into_iter()
        .map(|(kind, dirs, neg, interior)| {
            let tile = TileType::new(kind, &dirs, neg).expect("valid base tile");
            let r = tile.groups();
            Gadget::new(tile, r, interior).expect("valid base gadget")
        })
        .collect()
}

/// Gadgets for every tile type, generated from nine base designs under the
/// symmetries of the square and sorted by tile type.
pub fn gadget_library() -> Vec<Gadget> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for base in base_designs() {
        for t in Symmetry::all() {
            let g = base.transformed(t);
            if seen.insert(g.tile.clone()) {
                out.push(g);
            }
        }
    }
    out.sort_by(|a, b| a.tile.cmp(&b.tile));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetReport {
    pub tile: TileType,
    /// Fewest groups partitioning the interior points alone.
    pub interior_groups: usize,
    pub realizable: Vec<Vec<Dir>>,
    pub required: Vec<Vec<Dir>>,
    /// Every interior point lies in `[1/4, 3/4]²`, so no group can reach
    /// points of another tile.
    pub separated: bool,
}

impl GadgetReport {
    /// No partition of the interior into fewer than `r` groups.
    pub fn c1(&self, r: usize) -> bool {
        self.interior_groups >= r
    }

    pub fn c2(&self) -> bool {
        self.realizable == self.required
    }

    pub fn passes(&self, r: usize) -> bool {
        self.c1(r) && self.c2() && self.separated
    }
}

/// Smallest group count for `points` at the given diameter.
pub(crate) fn min_groups(points: Vec<Vec<Rational>>, eps: &Rational) -> Result<usize, ReductionError> {
    let set = PointSet::new(2, points)?;
    Ok(solve_upp_exact(&set, eps, GADGET_INTERIOR_LIMIT + 4)?.len())
}

/// Exhaustively checks a gadget at diameter `eps`: the interior needs all
/// `r` groups, and the maximal boundary sets absorbable within `r` groups are
/// exactly the required family.
pub fn check_gadget(g: &Gadget, eps: &Rational) -> Result<GadgetReport, ReductionError> {
    if g.interior.len() > GADGET_INTERIOR_LIMIT {
        return Err(ReductionError::SizeLimit {
            what: "gadget interior points",
            size: g.interior.len(),
            limit: GADGET_INTERIOR_LIMIT,
        });
    }
    let interior: Vec<Vec<Rational>> = g.interior.iter().map(|p| p.to_vec()).collect();
    let interior_groups = min_groups(interior.clone(), eps)?;
    let dirs = g.tile.dirs();
    let mut realizable_masks = Vec::new();
    for mask in 0..1u32 << dirs.len() {
        let mut points = interior.clone();
        points.extend((0..dirs.len()).filter(|k| mask >> k & 1 == 1).map(|k| dirs[k].midpoint().to_vec()));
        if min_groups(points, eps)? <= g.r {
            realizable_masks.push(mask);
        }
    }
    let mut realizable: Vec<Vec<Dir>> = realizable_masks
        .iter()
        .filter(|&&m| !realizable_masks.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..dirs.len()).filter(|k| m >> k & 1 == 1).map(|k| dirs[k]).collect())
        .collect();
    realizable.sort();
    let (lo, hi) = (ratio(1, 4), ratio(3, 4));
    let separated = g.interior.iter().all(|p| p.iter().all(|v| *v >= lo && *v <= hi));
    Ok(GadgetReport { tile: g.tile.clone(), interior_groups, realizable, required: g.tile.required_family(), separated })
}
