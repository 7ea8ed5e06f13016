//! Exact proximate rank by minimizing over compression traces.
//!
//! A trace `(Ī, Π, K̄, σ)` is reachable within the closed ε-box around `w`
//! iff each of its constraints is, since the constraints touch disjoint
//! coordinates:
//! * `i ∈ Ī` needs `‖b_i‖∞ ≤ ε`;
//! * a group needs every coordinate of `σ_i·(b_i, c_i)` to span at most `2ε`;
//! * a removed group needs `|Σ σ_i·a_i| ≤ ε·|Π|` in every output coordinate.
//!
//! The minimum length is found by dynamic programming over unit subsets, with
//! the per-subset group cost evaluated in parallel.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{check_eps, ProximateError};
use crate::net::{BiaslessParameter, Parameter, Unit};
use crate::rational::{self, Rational};

pub const DEFAULT_UNIT_LIMIT: usize = 9;

/// Hard ceiling for the subset tables, independent of the requested limit.
const MAX_UNITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionTrace {
    pub eliminated: Vec<usize>,
    pub groups: Vec<Vec<usize>>,
    /// Indices into `groups`.
    pub killed: Vec<usize>,
    /// `+1` or `-1` per unit.
    pub signs: Vec<i8>,
}

impl CompressionTrace {
    pub fn len(&self) -> usize {
        self.groups.len() - self.killed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Shape-independent view of a unit: outgoing weights, the coordinates that
/// must be merged, and how many of those leading coordinates form `b`.
struct Site<'a> {
    a: &'a [Rational],
    incoming: Vec<Rational>,
    b_len: usize,
}

fn sites_of(w: &Parameter) -> Vec<Site<'_>> {
    w.units()
        .iter()
        .map(|u: &Unit| Site { a: &u.a, incoming: u.incoming(), b_len: w.n() })
        .collect()
}

fn eliminable(eps: &Rational, s: &Site<'_>) -> bool {
    rational::uniform_norm(&s.incoming[..s.b_len]) <= *eps
}

/// Checks a group under the sign pattern `flip` (bit `k` set means member `k`
/// is negated). Returns `None` if the span exceeds `2ε`, else whether the
/// merged outgoing weight can be pushed to zero.
fn group_status(eps: &Rational, sites: &[Site<'_>], members: &[usize], flip: u32) -> Option<bool> {
    let two_eps = eps + eps;
    let sign = |k: usize| flip >> k & 1 == 1;
    let dim = sites[members[0]].incoming.len();
    for coord in 0..dim {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (k, &i) in members.iter().enumerate() {
            let x = &sites[i].incoming[coord];
            let v = if sign(k) { -x } else { x.clone() };
            if lo.as_ref().is_none_or(|l| v < *l) {
                lo = Some(v.clone());
            }
            if hi.as_ref().is_none_or(|h| v > *h) {
                hi = Some(v);
            }
        }
        if hi.expect("nonempty") - lo.expect("nonempty") > two_eps {
            return None;
        }
    }
    let limit = eps * Rational::from_integer(members.len().into());
    let out = sites[members[0]].a.len();
    let killable = (0..out).all(|o| {
        let mut sum = Rational::zero();
        for (k, &i) in members.iter().enumerate() {
            if sign(k) {
                sum -= &sites[i].a[o];
            } else {
                sum += &sites[i].a[o];
            }
        }
        sum.abs() <= limit
    });
    Some(killable)
}

#[derive(Clone, Copy)]
struct GroupCost {
    cost: u8,
    flip: u32,
}

fn members_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask >> k & 1 == 1).collect()
}

/// Cheapest status of a group over all sign patterns with the first member
/// fixed to `+1`: a removable pattern if one exists, else any feasible one.
fn group_cost(eps: &Rational, sites: &[Site<'_>], mask: u32) -> Option<GroupCost> {
    let members = members_of(mask);
    let mut feasible: Option<u32> = None;
    for half in 0..(1u32 << (members.len() - 1)) {
        let flip = half << 1;
        match group_status(eps, sites, &members, flip) {
            Some(true) => return Some(GroupCost { cost: 0, flip }),
            Some(false) if feasible.is_none() => feasible = Some(flip),
            _ => {}
        }
    }
    feasible.map(|flip| GroupCost { cost: 1, flip })
}

#[derive(Clone, Copy)]
enum Step {
    Eliminate,
    Group(u32),
}

fn solve(eps: &Rational, sites: &[Site<'_>]) -> CompressionTrace {
    let h = sites.len();
    let full: u32 = if h == 0 { 0 } else { (1u32 << h) - 1 };
    let costs: Vec<Option<GroupCost>> = (0..=full)
        .into_par_iter()
        .map(|mask| if mask == 0 { None } else { group_cost(eps, sites, mask) })
        .collect();
    let can_drop: Vec<bool> = sites.iter().map(|s| eliminable(eps, s)).collect();

    // best[mask] = minimum trace length on the units in `mask`.
    let mut best: Vec<u32> = vec![u32::MAX; full as usize + 1];
    let mut choice: Vec<Step> = vec![Step::Eliminate; full as usize + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let low_bit = 1u32 << low;
        let rest = mask ^ low_bit;
        if can_drop[low] && best[rest as usize] < best[mask as usize] {
            best[mask as usize] = best[rest as usize];
            choice[mask as usize] = Step::Eliminate;
        }
        // Groups containing the lowest unit: low_bit | sub for sub ⊆ rest.
        let mut sub = rest;
        loop {
            let group = sub | low_bit;
            if let Some(gc) = costs[group as usize] {
                let remaining = best[(mask ^ group) as usize];
                if remaining != u32::MAX {
                    let total = remaining + gc.cost as u32;
                    if total < best[mask as usize] {
                        best[mask as usize] = total;
                        choice[mask as usize] = Step::Group(group);
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let mut trace = CompressionTrace { eliminated: Vec::new(), groups: Vec::new(), killed: Vec::new(), signs: vec![1; h] };
    let mut mask = full;
    while mask != 0 {
        match choice[mask as usize] {
            Step::Eliminate => {
                let low = mask.trailing_zeros();
                trace.eliminated.push(low as usize);
                mask ^= 1 << low;
            }
            Step::Group(group) => {
                let gc = costs[group as usize].expect("chosen group is feasible");
                let members = members_of(group);
                for (k, &i) in members.iter().enumerate() {
                    if gc.flip >> k & 1 == 1 {
                        trace.signs[i] = -1;
                    }
                }
                if gc.cost == 0 {
                    trace.killed.push(trace.groups.len());
                }
                trace.groups.push(members);
                mask ^= group;
            }
        }
    }
    debug_assert_eq!(trace.len() as u32, best[full as usize]);
    trace
}

fn check_limit(h: usize, unit_limit: usize) -> Result<(), ProximateError> {
    if h > unit_limit || h > MAX_UNITS {
        return Err(ProximateError::UnitLimit { h, limit: unit_limit.min(MAX_UNITS) });
    }
    Ok(())
}

/// A shortest compression trace reachable within the closed ε-box of `w`.
pub fn optimal_trace(eps: &Rational, w: &Parameter, unit_limit: usize) -> Result<CompressionTrace, ProximateError> {
    check_eps(eps)?;
    check_limit(w.h(), unit_limit)?;
    Ok(solve(eps, &sites_of(w)))
}

/// Minimum rank over the closed uniform ε-ball around `w`.
pub fn exact_prank(eps: &Rational, w: &Parameter, unit_limit: usize) -> Result<usize, ProximateError> {
    optimal_trace(eps, w, unit_limit).map(|t| t.len())
}

fn biasless_sites(u: &BiaslessParameter) -> Vec<Site<'_>> {
    u.units
        .iter()
        .map(|x| Site { a: std::slice::from_ref(&x.a), incoming: vec![x.b.clone()], b_len: 1 })
        .collect()
}

pub fn optimal_trace_biasless(
    eps: &Rational,
    u: &BiaslessParameter,
    unit_limit: usize,
) -> Result<CompressionTrace, ProximateError> {
    check_eps(eps)?;
    check_limit(u.h(), unit_limit)?;
    Ok(solve(eps, &biasless_sites(u)))
}

pub fn exact_prank_biasless(eps: &Rational, u: &BiaslessParameter, unit_limit: usize) -> Result<usize, ProximateError> {
    optimal_trace_biasless(eps, u, unit_limit).map(|t| t.len())
}

/// Whether every constraint of `trace` is within reach of `w`.
pub fn trace_feasible(eps: &Rational, w: &Parameter, trace: &CompressionTrace) -> Result<bool, ProximateError> {
    validate_trace(w.h(), trace)?;
    let sites = sites_of(w);
    if !trace.eliminated.iter().all(|&i| eliminable(eps, &sites[i])) {
        return Ok(false);
    }
    for (j, group) in trace.groups.iter().enumerate() {
        let flip = group
            .iter()
            .enumerate()
            .fold(0u32, |acc, (k, &i)| if trace.signs[i] < 0 { acc | 1 << k } else { acc });
        match group_status(eps, &sites, group, flip) {
            None => return Ok(false),
            Some(false) if trace.killed.contains(&j) => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

fn validate_trace(h: usize, trace: &CompressionTrace) -> Result<(), ProximateError> {
    let mut seen = vec![false; h];
    for &i in trace.eliminated.iter().chain(trace.groups.iter().flatten()) {
        if i >= h || std::mem::replace(&mut seen[i], true) {
            return Err(ProximateError::InvalidTrace);
        }
    }
    let groups_ok = trace.groups.iter().all(|g| !g.is_empty());
    let killed_ok = trace.killed.iter().all(|&k| k < trace.groups.len());
    if seen.iter().any(|s| !s) || !groups_ok || !killed_ok || trace.signs.len() != h {
        return Err(ProximateError::InvalidTrace);
    }
    Ok(())
}

/// The point of the trace's subspace nearest to `w`: eliminated units get
/// `b = 0`, each group moves to the centre of its signed bounding box, and
/// removed groups spread their merged outgoing weight evenly.
pub fn trace_witness(eps: &Rational, w: &Parameter, trace: &CompressionTrace) -> Result<Parameter, ProximateError> {
    if !trace_feasible(eps, w, trace)? {
        return Err(ProximateError::InfeasibleTrace);
    }
    let mut units = w.units().to_vec();
    for &i in &trace.eliminated {
        units[i].b = vec![Rational::zero(); w.n()];
    }
    for (j, group) in trace.groups.iter().enumerate() {
        let signed: Vec<Vec<Rational>> =
            group.iter().map(|&i| rational::scale(&w.unit(i).incoming(), trace.signs[i])).collect();
        let refs: Vec<&[Rational]> = signed.iter().map(Vec::as_slice).collect();
        let centre = rational::bounding_box_centre(&refs);
        let mut share = vec![Rational::zero(); w.m()];
        if trace.killed.contains(&j) {
            for &i in group {
                let a = rational::scale(&w.unit(i).a, trace.signs[i]);
                rational::add_assign(&mut share, &a);
            }
            let size = Rational::from_integer(group.len().into());
            share.iter_mut().for_each(|x| *x /= &size);
        }
        for &i in group {
            let s = trace.signs[i];
            let mut target = rational::scale(&centre, s);
            units[i].c = target.pop().expect("centre holds c");
            units[i].b = target;
            rational::sub_assign(&mut units[i].a, &rational::scale(&share, s));
        }
    }
    Ok(w.with_units(units))
}

/// A parameter of rank `exact_prank(eps, w)` within distance `eps` of `w`.
pub fn exact_witness(eps: &Rational, w: &Parameter, unit_limit: usize) -> Result<Parameter, ProximateError> {
    let trace = optimal_trace(eps, w, unit_limit)?;
    trace_witness(eps, w, &trace)
}
