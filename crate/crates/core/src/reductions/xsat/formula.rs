//! Restricted formulas, their grid layouts and the induced tile division.

use std::collections::{BTreeMap, BTreeSet};

use super::super::ReductionError;
use super::gadget::{Dir, TileKind, TileType};

pub type Cell = (i64, i64);

/// A CNF formula over variables `1..=n`; literal `±v` is `v` or its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedFormula {
    pub n: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl RestrictedFormula {
    /// Checks literals only; the occurrence conditions are checked by
    /// [`RestrictedFormula::check_restricted`].
    pub fn new(n: usize, clauses: Vec<Vec<i32>>) -> Result<Self, ReductionError> {
        for (j, clause) in clauses.iter().enumerate() {
            let mut vars = BTreeSet::new();
            for &lit in clause {
                let v = lit.unsigned_abs() as usize;
                if v == 0 || v > n {
                    return Err(ReductionError::Formula(format!("clause {}: literal {lit} out of range", j + 1)));
                }
                if !vars.insert(v) {
                    return Err(ReductionError::Formula(format!("clause {}: variable {v} repeated", j + 1)));
                }
            }
        }
        Ok(Self { n, clauses })
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&lit| literal_value(lit, assignment)))
    }

    /// Clauses of 2 or 3 literals; every variable in 2 or 3 clauses with
    /// exactly one negative occurrence.
    pub fn check_restricted(&self) -> Result<(), ReductionError> {
        for (j, clause) in self.clauses.iter().enumerate() {
            if !(2..=3).contains(&clause.len()) {
                return Err(ReductionError::Formula(format!("clause {} has {} literals", j + 1, clause.len())));
            }
        }
        for v in 1..=self.n {
            let lits: Vec<i32> = self.clauses.iter().flatten().copied().filter(|l| l.unsigned_abs() as usize == v).collect();
            if !(2..=3).contains(&lits.len()) {
                return Err(ReductionError::Formula(format!("variable {v} occurs {} times", lits.len())));
            }
            let negatives = lits.iter().filter(|&&l| l < 0).count();
            if negatives != 1 {
                return Err(ReductionError::Formula(format!("variable {v} occurs negated {negatives} times")));
            }
        }
        Ok(())
    }
}

pub(crate) fn literal_value(lit: i32, assignment: &[bool]) -> bool {
    assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)
}

/// An incidence edge drawn on the grid: `path` runs through unit-adjacent
/// cells from the variable's cell to the clause's cell, both included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutEdge {
    pub variable: usize,
    pub clause: usize,
    pub path: Vec<Cell>,
}

/// Vertex positions and edge paths; `variables[v]` and `clauses[j]` are
/// 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    pub variables: Vec<Cell>,
    pub clauses: Vec<Cell>,
    pub edges: Vec<LayoutEdge>,
}

impl GridLayout {
    /// Checks the layout against the incidence structure of `f`.
    pub fn check(&self, f: &RestrictedFormula) -> Result<(), ReductionError> {
        let err = |msg: String| Err(ReductionError::Layout(msg));
        if self.variables.len() != f.n {
            return err(format!("{} variable positions for {} variables", self.variables.len(), f.n));
        }
        if self.clauses.len() != f.clauses.len() {
            return err(format!("{} clause positions for {} clauses", self.clauses.len(), f.clauses.len()));
        }
        let mut vertices = BTreeMap::new();
        let named = self.variables.iter().enumerate().map(|(v, &c)| (format!("variable {}", v + 1), c));
        let named = named.chain(self.clauses.iter().enumerate().map(|(j, &c)| (format!("clause {}", j + 1), c)));
        for (name, cell) in named {
            if let Some(other) = vertices.insert(cell, name.clone()) {
                return err(format!("{name} and {other} share cell {cell:?}"));
            }
        }
        let mut incidences: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (j, clause) in f.clauses.iter().enumerate() {
            for &lit in clause {
                incidences.insert((lit.unsigned_abs() as usize - 1, j));
            }
        }
        let mut drawn = BTreeSet::new();
        let mut used: BTreeMap<Cell, usize> = BTreeMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            let label = format!("edge {} (variable {}, clause {})", e + 1, edge.variable + 1, edge.clause + 1);
            if !incidences.contains(&(edge.variable, edge.clause)) {
                return err(format!("{label} has no matching literal"));
            }
            if !drawn.insert((edge.variable, edge.clause)) {
                return err(format!("{label} is drawn twice"));
            }
            let path = &edge.path;
            if path.len() < 2 || path[0] != self.variables[edge.variable] || path[path.len() - 1] != self.clauses[edge.clause] {
                return err(format!("{label} does not join its endpoints"));
            }
            for (k, w) in path.windows(2).enumerate() {
                if Dir::between(w[0], w[1]).is_none() {
                    return err(format!("{label}: step {} from {:?} to {:?} is not a unit step", k + 1, w[0], w[1]));
                }
            }
            for &cell in &path[1..path.len() - 1] {
                if let Some(name) = vertices.get(&cell) {
                    return err(format!("{label} passes through {name} at {cell:?}"));
                }
                if let Some(other) = used.insert(cell, e) {
                    return err(format!("{label} overlaps edge {} at {cell:?}", other + 1));
                }
            }
        }
        if let Some(&(v, j)) = incidences.difference(&drawn).next() {
            return err(format!("no edge drawn for variable {} in clause {}", v + 1, j + 1));
        }
        Ok(())
    }
}

/// Whether `f` is restricted and `layout` is a valid grid layout for it.
pub fn validate_formula(f: &RestrictedFormula, layout: &GridLayout) -> bool {
    f.check_restricted().is_ok() && layout.check(f).is_ok()
}

/// The type of every occupied cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileMap {
    pub tiles: BTreeMap<Cell, TileType>,
}

impl TileMap {
    pub fn from_layout(f: &RestrictedFormula, layout: &GridLayout) -> Result<Self, ReductionError> {
        f.check_restricted()?;
        layout.check(f)?;
        let step = |a: Cell, b: Cell| Dir::between(a, b).expect("checked unit step");
        let mut var_dirs: Vec<Vec<Dir>> = vec![Vec::new(); f.n];
        let mut var_neg: Vec<Option<Dir>> = vec![None; f.n];
        let mut clause_dirs: Vec<Vec<Dir>> = vec![Vec::new(); f.clauses.len()];
        let mut tiles = BTreeMap::new();
        for edge in &layout.edges {
            let p = &edge.path;
            let d = step(p[0], p[1]);
            var_dirs[edge.variable].push(d);
            let negated = f.clauses[edge.clause].contains(&-((edge.variable + 1) as i32));
            if negated {
                var_neg[edge.variable] = Some(d);
            }
            clause_dirs[edge.clause].push(step(p[p.len() - 1], p[p.len() - 2]));
            for k in 1..p.len() - 1 {
                let tile = TileType::new(TileKind::Edge, &[step(p[k], p[k - 1]), step(p[k], p[k + 1])], None)?;
                tiles.insert(p[k], tile);
            }
        }
        let located = |what: String, r: Result<TileType, ReductionError>| {
            r.map_err(|e| ReductionError::Layout(format!("{what}: {e}")))
        };
        for v in 0..f.n {
            let tile = TileType::new(TileKind::Variable, &var_dirs[v], var_neg[v]);
            tiles.insert(layout.variables[v], located(format!("variable {}", v + 1), tile)?);
        }
        for j in 0..f.clauses.len() {
            let tile = TileType::new(TileKind::Clause, &clause_dirs[j], None);
            tiles.insert(layout.clauses[j], located(format!("clause {}", j + 1), tile)?);
        }
        Ok(Self { tiles })
    }

    /// Groups allocated over all tiles.
    pub fn total_groups(&self) -> usize {
        self.tiles.values().map(TileType::groups).sum()
    }
}
