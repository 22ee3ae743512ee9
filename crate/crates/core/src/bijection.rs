//! The map from a lower-half set of `E^n` onto `E^(n-1)` and its inverse.
//!
//! A member on the low slice loses its first coordinate; a member on the high
//! slice loses its first coordinate and has the rest complemented. The inverse
//! decides the branch from the weight of its argument alone.

use crate::cube::{LowerHalfSpec, Point};
use crate::error::Result;

/// Maps a member of the lower half given by `spec` into `E^(n-1)`.
pub fn phi(a: &Point, spec: &LowerHalfSpec) -> Result<Point> {
    let target = spec.params().reduced()?;
    spec.check(a)?;
    let tail = &a.coords()[1..];
    let coords: Box<[u32]> = if a.first() == spec.low_slice() {
        tail.into()
    } else {
        let top = target.top();
        tail.iter().map(|&c| top - c).collect()
    };
    Ok(Point::from_parts(target, coords))
}

/// Maps `b` in `E^(n-1)` back to the unique lower-half member with `phi(a) = b`.
pub fn phi_inverse(b: &Point, spec: &LowerHalfSpec) -> Result<Point> {
    let params = spec.params();
    let source = params.reduced()?;
    source.ensure_same(b.params())?;
    let mut coords = Vec::with_capacity(params.n() as usize);
    if b.weight() <= spec.inverse_threshold() {
        coords.push(spec.low_slice());
        coords.extend_from_slice(b.coords());
    } else {
        let top = params.top();
        coords.push(spec.high_slice());
        coords.extend(b.coords().iter().map(|&c| top - c));
    }
    Ok(Point::from_parts(params, coords.into_boxed_slice()))
}

/// The image weight predicted from `w(a)` alone.
pub fn image_weight(a: &Point, spec: &LowerHalfSpec) -> Result<u64> {
    spec.check(a)?;
    let params = spec.params();
    let w = a.weight();
    if a.first() == spec.low_slice() {
        Ok(w - u64::from(spec.low_slice()))
    } else {
        let tail_max = u64::from(params.top()) * u64::from(params.n() - 1);
        Ok(tail_max - (w - u64::from(spec.high_slice())))
    }
}
