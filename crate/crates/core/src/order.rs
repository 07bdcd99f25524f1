//! Order relations on colored parts.
//!
//! * `≻` ([`lex_gt`]): `k_p ≻ l_q  ⟺  k - l ≥ χ(p ≤ q)`.
//! * `⊳` ([`tri_gt`]): the minimal-difference table [`STRICT_TABLE`].
//! * `≫` ([`gg`]): `⊳` weakened by one at `(cd, ab)` and `(ad, bc)`, i.e. [`RELAXED_TABLE`].
//!
//! The relations are computed from color ranks; the two tables are kept as
//! independent constants and the tests check that both routes agree.

use crate::color::Color;
use crate::error::Error;
use crate::part::ColoredPart;

/// Indicator function as an integer, so difference conditions read as arithmetic.
pub fn chi(cond: bool) -> i64 {
    i64::from(cond)
}

/// Which minimal-difference table to consult.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaTable {
    /// The table realized by `⊳`.
    Strict,
    /// The table realized by `≫`.
    Relaxed,
}

/// Rows are the color of the larger part, columns the color of the next part, both in rank order.
pub const STRICT_TABLE: [[u8; 10]; 10] = [
    [2, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    [1, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    [1, 1, 2, 2, 2, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 2, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 2, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 1, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 1, 1, 1, 2, 2, 2],
    [1, 1, 1, 1, 1, 1, 1, 2, 2, 2],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 2],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
];

pub const RELAXED_TABLE: [[u8; 10]; 10] = [
    [2, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    [1, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    [1, 1, 2, 2, 1, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 2, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 2, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 1, 2, 2, 2, 2, 2],
    [1, 1, 1, 1, 1, 1, 1, 2, 2, 2],
    [0, 1, 1, 1, 1, 1, 1, 2, 2, 2],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 2],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
];

/// Color pairs where `≫` is weaker than `⊳`.
pub const RELAXED_PAIRS: [(Color, Color); 2] = [(Color::Cd, Color::Ab), (Color::Ad, Color::Bc)];

pub fn delta(p: Color, q: Color, table: DeltaTable) -> Result<u8, Error> {
    let (i, j) = (p.rank()? as usize, q.rank()? as usize);
    Ok(match table {
        DeltaTable::Strict => STRICT_TABLE[i][j],
        DeltaTable::Relaxed => RELAXED_TABLE[i][j],
    })
}

fn rank(c: Color) -> i64 {
    debug_assert!(!c.is_quaternary());
    c as i64
}

/// `≻` on raw `(size, color)` values; sizes may be transient (zero or negative).
pub(crate) fn lex_gt_raw(xs: i64, xc: Color, ys: i64, yc: Color) -> bool {
    xs - ys >= chi(rank(xc) <= rank(yc))
}

pub(crate) fn tri_gt_raw(xs: i64, xc: Color, ys: i64, yc: Color) -> bool {
    let bump = if xc.is_secondary() && yc.is_secondary() {
        chi(rank(xc) <= rank(yc))
    } else {
        chi(rank(xc) < rank(yc))
    };
    xs - ys > bump
}

pub(crate) fn gg_raw(xs: i64, xc: Color, ys: i64, yc: Color) -> bool {
    if RELAXED_PAIRS.contains(&(xc, yc)) {
        lex_gt_raw(xs, xc, ys, yc)
    } else {
        tri_gt_raw(xs, xc, ys, yc)
    }
}

fn ranked_pair(x: &ColoredPart, y: &ColoredPart) -> Result<(i64, i64), Error> {
    x.color().rank()?;
    y.color().rank()?;
    Ok((x.size() as i64, y.size() as i64))
}

/// `x ≻ y`.
pub fn lex_gt(x: &ColoredPart, y: &ColoredPart) -> Result<bool, Error> {
    let (xs, ys) = ranked_pair(x, y)?;
    Ok(lex_gt_raw(xs, x.color(), ys, y.color()))
}

/// `x ⊳ y`.
pub fn tri_gt(x: &ColoredPart, y: &ColoredPart) -> Result<bool, Error> {
    let (xs, ys) = ranked_pair(x, y)?;
    Ok(tri_gt_raw(xs, x.color(), ys, y.color()))
}

/// `x ≫ y`.
pub fn gg(x: &ColoredPart, y: &ColoredPart) -> Result<bool, Error> {
    let (xs, ys) = ranked_pair(x, y)?;
    Ok(gg_raw(xs, x.color(), ys, y.color()))
}
