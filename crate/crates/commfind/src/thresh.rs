//! Fraction-threshold comparisons with a decimal-intent nudge.
//!
//! Thresholds in this crate are products of user-supplied decimals and
//! integer set sizes (e.g. "at least a `1 - eps/2` fraction of `|V'|`").
//! Evaluated naively in binary floating point, a product that is exactly an
//! integer in decimal arithmetic can land a few ulps to either side
//! (`(1.0 - 0.4/2.0) * 40.0` evaluates below 32). Every comparison and
//! rounding here therefore treats values within `NUDGE` of the decimal
//! product as equal to it. `NUDGE` is far above accumulated rounding error
//! and far below the 1/n resolution of any fraction at the scales this
//! crate handles.

pub(crate) const NUDGE: f64 = 1e-9;

/// `count/total >= theta`, boundary-exact for decimal thetas.
pub(crate) fn at_least_fraction(count: usize, total: usize, theta: f64) -> bool {
    count as f64 >= theta * total as f64 - NUDGE
}

/// `count/total > theta`, boundary-exact for decimal thetas.
pub(crate) fn more_than_fraction(count: usize, total: usize, theta: f64) -> bool {
    count as f64 > theta * total as f64 + NUDGE
}

/// `count/total <= theta`, boundary-exact for decimal thetas.
pub(crate) fn at_most_fraction(count: usize, total: usize, theta: f64) -> bool {
    count as f64 <= theta * total as f64 + NUDGE
}

/// Floor of a nonnegative cap expression such as `2pk`.
pub(crate) fn floor_count(x: f64) -> usize {
    (x + NUDGE).floor().max(0.0) as usize
}

/// Ceiling of a nonnegative count expression such as `9n/(delta k)`.
pub(crate) fn ceil_count(x: f64) -> usize {
    (x - NUDGE).ceil().max(0.0) as usize
}
