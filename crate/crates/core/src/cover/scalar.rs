use crate::rational::Rational;

/// Minimum cover of scalars by intervals of radius `eps`: sweep in sorted
/// order and open a new centre at `x + eps` whenever `x` is uncovered.
pub fn solve_scalar_cover(eps: &Rational, scalars: &[Rational]) -> Vec<Rational> {
    let mut sorted: Vec<&Rational> = scalars.iter().collect();
    sorted.sort();
    let mut centres: Vec<Rational> = Vec::new();
    for x in sorted {
        let covered = centres.last().is_some_and(|y| *x <= y + eps);
        if !covered {
            centres.push(x + eps);
        }
    }
    centres
}
