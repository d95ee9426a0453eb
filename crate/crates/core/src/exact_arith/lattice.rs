use num_bigint::BigInt;

use super::{is_integer, ArithError, QuadExt};

/// Finds integers `(k, l)` with `gamma = k + l*beta` for an irrational `beta`.
///
/// Returns `Ok(None)` when no such pair exists, including when `gamma` lies in
/// a different quadratic field.
pub fn lattice_member(
    gamma: &QuadExt,
    beta: &QuadExt,
) -> Result<Option<(BigInt, BigInt)>, ArithError> {
    if beta.is_rational() {
        return Err(ArithError::NotQuadraticIrrational);
    }
    if gamma.is_rational() {
        return Ok(is_integer(gamma.a()).then(|| (gamma.a().to_integer(), BigInt::from(0))));
    }
    if gamma.d() != beta.d() {
        return Ok(None);
    }
    let l = gamma.b() / beta.b();
    if !is_integer(&l) {
        return Ok(None);
    }
    let k = gamma.a() - &l * beta.a();
    if !is_integer(&k) {
        return Ok(None);
    }
    Ok(Some((k.to_integer(), l.to_integer())))
}
