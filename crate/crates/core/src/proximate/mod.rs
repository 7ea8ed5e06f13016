//! Proximate rank: the lowest rank within a closed uniform ε-ball.

use num_traits::Zero;
use thiserror::Error;

use crate::net::NetError;
use crate::rational::Rational;

mod certificate;
mod exact;
mod greedy;

pub use certificate::{
    certificate_rank, certificate_witness, derive_par_certificate, verify_par_certificate, verify_upar_certificate,
    ParCertificate,
};
pub use exact::{
    exact_prank, exact_prank_biasless, exact_witness, optimal_trace, optimal_trace_biasless, trace_feasible,
    trace_witness, CompressionTrace, DEFAULT_UNIT_LIMIT,
};
pub use greedy::{approx_partition, construct_witness, greedy_bound, ApproxPartition, GreedyResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProximateError {
    #[error("eps must be positive, got {0}")]
    NonPositiveEps(Rational),
    #[error("{h} hidden units exceed the limit of {limit}")]
    UnitLimit { h: usize, limit: usize },
    #[error("greedy result was not produced from this eps and parameter")]
    InconsistentGreedy,
    #[error("compression trace is not a valid partition of the units")]
    InvalidTrace,
    #[error("compression trace is not reachable within eps")]
    InfeasibleTrace,
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("parameters are {distance} apart, more than eps = {eps}")]
    TooFar { distance: Box<Rational>, eps: Box<Rational> },
    #[error(transparent)]
    Net(#[from] NetError),
}

pub(crate) fn check_eps(eps: &Rational) -> Result<(), ProximateError> {
    if *eps > Rational::zero() {
        Ok(())
    } else {
        Err(ProximateError::NonPositiveEps(eps.clone()))
    }
}
