//! Deviation bounds between an actual state `|A>` and a reference `|R>`.
//!
//! For any operator `0 ≤ M ≤ 1`, with `x = <A|M|A>` and `y = |<A|R>|`,
//!
//! ```text
//! g_lower(x, y) ≤ <R|M|R> ≤ g_upper(x, y)
//! ```
//!
//! The same functions transfer bounds in the other direction since the
//! relation is symmetric in `A` and `R`.

use crate::error::{check_unit, Result};

/// Shared closed-form branch `x + (1-y²)(1-2x) ± 2y√((1-y²)x(1-x))`.
fn branch(x: f64, y: f64, sign: f64) -> f64 {
    let c = 1.0 - y * y;
    let root = (c * x * (1.0 - x)).max(0.0).sqrt();
    (x + c * (1.0 - 2.0 * x) + sign * 2.0 * y * root).clamp(0.0, 1.0)
}

/// Lower deviation bound. Zero when `x < 1 - y²`.
pub fn g_lower(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    if x < 1.0 - y * y {
        Ok(0.0)
    } else {
        Ok(branch(x, y, -1.0))
    }
}

/// Upper deviation bound. One when `x > y²`.
pub fn g_upper(x: f64, y: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    if x <= y * y {
        Ok(branch(x, y, 1.0))
    } else {
        Ok(1.0)
    }
}
