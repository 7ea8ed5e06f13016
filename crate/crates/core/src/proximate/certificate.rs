//! Unit-partition certificates for bounded proximate rank.
//!
//! A certificate partitions the units with `‖b_i‖∞ > ε` into groups whose
//! signed incoming vectors `sign(b_i)·(b_i, c_i)` lie pairwise within `2ε`.
//! It witnesses `prank_ε(w) ≤ r` when at most `r` groups have
//! `‖Σ sign(b_i)·a_i‖∞ > ε·|Π|`.

use num_traits::Zero;

use super::{check_eps, ProximateError};
use crate::compress::merge_groups;
use crate::net::{BiaslessParameter, Parameter};
use crate::rational::{self, Rational};

/// Groups of 0-based unit indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParCertificate {
    pub groups: Vec<Vec<usize>>,
}

struct View {
    a: Vec<Vec<Rational>>,
    signs: Vec<i8>,
    signed: Vec<Vec<Rational>>,
    large: Vec<bool>,
}

fn view(eps: &Rational, w: &Parameter) -> View {
    View {
        a: w.units().iter().map(|u| u.a.clone()).collect(),
        signs: w.units().iter().map(|u| u.sign()).collect(),
        signed: w.units().iter().map(|u| u.signed_incoming()).collect(),
        large: w.units().iter().map(|u| rational::uniform_norm(&u.b) > *eps).collect(),
    }
}

fn biasless_view(eps: &Rational, u: &BiaslessParameter) -> View {
    let signs: Vec<i8> = u.units.iter().map(|x| rational::vector_sign(std::slice::from_ref(&x.b))).collect();
    View {
        a: u.units.iter().map(|x| vec![x.a.clone()]).collect(),
        signed: u.units.iter().zip(&signs).map(|(x, &s)| rational::scale(std::slice::from_ref(&x.b), s)).collect(),
        large: u.units.iter().map(|x| rational::uniform_norm(std::slice::from_ref(&x.b)) > *eps).collect(),
        signs,
    }
}

fn check_partition(v: &View, cert: &ParCertificate) -> Result<(), ProximateError> {
    let h = v.signs.len();
    let mut seen = vec![false; h];
    for g in &cert.groups {
        if g.is_empty() {
            return Err(ProximateError::InvalidCertificate("empty group".into()));
        }
        for &i in g {
            if i >= h {
                return Err(ProximateError::InvalidCertificate(format!("unit {} out of range", i + 1)));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(ProximateError::InvalidCertificate(format!("unit {} listed twice", i + 1)));
            }
            if !v.large[i] {
                return Err(ProximateError::InvalidCertificate(format!(
                    "unit {} has incoming weight within eps of zero",
                    i + 1
                )));
            }
        }
    }
    if let Some(i) = (0..h).find(|&i| v.large[i] && !seen[i]) {
        return Err(ProximateError::InvalidCertificate(format!("unit {} is not covered", i + 1)));
    }
    Ok(())
}

fn merged(v: &View, group: &[usize]) -> Vec<Rational> {
    let mut alpha = vec![Rational::zero(); v.a[group[0]].len()];
    for &i in group {
        rational::add_assign(&mut alpha, &rational::scale(&v.a[i], v.signs[i]));
    }
    alpha
}

fn surviving(eps: &Rational, v: &View, group: &[usize]) -> bool {
    rational::uniform_norm(&merged(v, group)) > eps * Rational::from_integer(group.len().into())
}

fn spread_ok(eps: &Rational, v: &View, group: &[usize]) -> bool {
    let pts: Vec<&[Rational]> = group.iter().map(|&i| v.signed[i].as_slice()).collect();
    rational::diameter(&pts) <= eps + eps
}

fn verify(eps: &Rational, r: usize, v: &View, cert: &ParCertificate) -> Result<bool, ProximateError> {
    check_eps(eps)?;
    check_partition(v, cert)?;
    if !cert.groups.iter().all(|g| spread_ok(eps, v, g)) {
        return Ok(false);
    }
    Ok(cert.groups.iter().filter(|g| surviving(eps, v, g)).count() <= r)
}

/// True iff the certificate's groups are tight and at most `r` survive.
/// Errors if the groups do not partition `{i : ‖b_i‖∞ > ε}`.
pub fn verify_par_certificate(eps: &Rational, r: usize, w: &Parameter, cert: &ParCertificate) -> Result<bool, ProximateError> {
    verify(eps, r, &view(eps, w), cert)
}

pub fn verify_upar_certificate(
    eps: &Rational,
    r: usize,
    u: &BiaslessParameter,
    cert: &ParCertificate,
) -> Result<bool, ProximateError> {
    verify(eps, r, &biasless_view(eps, u), cert)
}

/// Number of groups with merged outgoing weight above `ε·|Π|`.
pub fn certificate_rank(eps: &Rational, w: &Parameter, cert: &ParCertificate) -> Result<usize, ProximateError> {
    let v = view(eps, w);
    check_partition(&v, cert)?;
    Ok(cert.groups.iter().filter(|g| surviving(eps, &v, g)).count())
}

/// The stage 2 partition of `w_star`, restricted to units of `w` whose
/// incoming weight is not within ε of zero.
pub fn derive_par_certificate(eps: &Rational, w: &Parameter, w_star: &Parameter) -> Result<ParCertificate, ProximateError> {
    check_eps(eps)?;
    let distance = w.distance(w_star)?;
    if distance > *eps {
        return Err(ProximateError::TooFar { distance: Box::new(distance), eps: Box::new(eps.clone()) });
    }
    let large: Vec<bool> = w.units().iter().map(|u| rational::uniform_norm(&u.b) > *eps).collect();
    let groups = merge_groups(w_star)
        .into_iter()
        .map(|g| g.into_iter().filter(|&i| large[i]).collect::<Vec<_>>())
        .filter(|g| !g.is_empty())
        .collect();
    Ok(ParCertificate { groups })
}

/// A parameter within ε of `w` of rank at most the number of surviving
/// groups: small units get `b = 0`, each group moves to the centre of the
/// bounding box of its signed incoming vectors, and non-surviving groups
/// have their merged outgoing weight spread back over their members.
pub fn certificate_witness(eps: &Rational, w: &Parameter, cert: &ParCertificate) -> Result<Parameter, ProximateError> {
    check_eps(eps)?;
    let v = view(eps, w);
    check_partition(&v, cert)?;
    if let Some(g) = cert.groups.iter().find(|g| !spread_ok(eps, &v, g)) {
        return Err(ProximateError::InvalidCertificate(format!(
            "group starting at unit {} spans more than 2 eps",
            g[0] + 1
        )));
    }
    let mut units = w.units().to_vec();
    for (i, u) in units.iter_mut().enumerate() {
        if !v.large[i] {
            u.b = vec![Rational::zero(); w.n()];
        }
    }
    for g in &cert.groups {
        let pts: Vec<&[Rational]> = g.iter().map(|&i| v.signed[i].as_slice()).collect();
        let centre = rational::bounding_box_centre(&pts);
        let share: Option<Vec<Rational>> = (!surviving(eps, &v, g)).then(|| {
            let size = Rational::from_integer(g.len().into());
            merged(&v, g).into_iter().map(|x| x / &size).collect()
        });
        for &i in g {
            let s = v.signs[i];
            let mut target = rational::scale(&centre, s);
            units[i].c = target.pop().expect("centre holds c");
            units[i].b = target;
            if let Some(share) = &share {
                rational::sub_assign(&mut units[i].a, &rational::scale(share, s));
            }
        }
    }
    Ok(w.with_units(units))
}
