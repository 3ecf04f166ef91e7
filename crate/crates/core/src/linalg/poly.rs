use alloc::vec::Vec;

use crate::error::Error;
use crate::field::Field;

/// Coefficients (constant term first) of the unique polynomial of degree
/// `< k` through `k` points with distinct abscissas.
pub fn interpolate_polynomial<F: Field>(field: &F, points: &[(F::Elem, F::Elem)]) -> Result<Vec<F::Elem>, Error> {
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::DuplicateAbscissa(i));
        }
    }
    let k = points.len();
    let mut coeffs = alloc::vec![field.zero(); k];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Lagrange basis polynomial for node i, built by repeated multiplication.
        let mut basis = alloc::vec![field.one()];
        let mut denom = field.one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = alloc::vec![field.zero(); basis.len() + 1];
            for (d, b) in basis.iter().enumerate() {
                next[d + 1] = field.add(&next[d + 1], b);
                next[d] = field.sub(&next[d], &field.mul(b, xj));
            }
            basis = next;
            denom = field.mul(&denom, &field.sub(xi, xj));
        }
        let scale = field.div(yi, &denom).expect("distinct abscissas give a nonzero denominator");
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c = field.add(c, &field.mul(b, &scale));
        }
    }
    Ok(coeffs)
}
