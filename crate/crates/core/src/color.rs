//! The eleven part colors.
//!
//! Four primary colors `a < b < c < d`, the six secondary products of two
//! distinct primaries, and the single quaternary color `abcd`. The ten
//! non-quaternary colors are totally ordered:
//!
//! ```text
//! ab < ac < ad < a < bc < bd < b < cd < c < d
//! ```
//!
//! Every ordering relation in the crate is derived from [`Color::rank`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A part color. Variants are declared in rank order, quaternary last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Ab,
    Ac,
    Ad,
    A,
    Bc,
    Bd,
    B,
    Cd,
    C,
    D,
    Abcd,
}

/// Primary colors in primary order.
pub const PRIMARY: [Color; 4] = [Color::A, Color::B, Color::C, Color::D];

/// Secondary colors in rank order.
pub const SECONDARY: [Color; 6] = [
    Color::Ab,
    Color::Ac,
    Color::Ad,
    Color::Bc,
    Color::Bd,
    Color::Cd,
];

/// The ten non-quaternary colors in rank order.
pub const RANKED: [Color; 10] = [
    Color::Ab,
    Color::Ac,
    Color::Ad,
    Color::A,
    Color::Bc,
    Color::Bd,
    Color::B,
    Color::Cd,
    Color::C,
    Color::D,
];

/// Every color, quaternary included.
pub const ALL: [Color; 11] = [
    Color::Ab,
    Color::Ac,
    Color::Ad,
    Color::A,
    Color::Bc,
    Color::Bd,
    Color::B,
    Color::Cd,
    Color::C,
    Color::D,
    Color::Abcd,
];

/// Broad kind of a color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorKind {
    Primary,
    Secondary,
    Quaternary,
}

impl Color {
    pub fn kind(self) -> ColorKind {
        match self {
            Color::A | Color::B | Color::C | Color::D => ColorKind::Primary,
            Color::Abcd => ColorKind::Quaternary,
            _ => ColorKind::Secondary,
        }
    }

    pub fn is_primary(self) -> bool {
        self.kind() == ColorKind::Primary
    }

    pub fn is_secondary(self) -> bool {
        self.kind() == ColorKind::Secondary
    }

    pub fn is_quaternary(self) -> bool {
        self == Color::Abcd
    }

    /// Position in the ten-color chain, `ab = 0` through `d = 9`.
    pub fn rank(self) -> Result<u8, Error> {
        match self {
            Color::Abcd => Err(Error::QuaternaryRank),
            c => Ok(c as u8),
        }
    }

    /// Index of a primary color in `a, b, c, d`.
    pub fn primary_index(self) -> Option<usize> {
        match self {
            Color::A => Some(0),
            Color::B => Some(1),
            Color::C => Some(2),
            Color::D => Some(3),
            _ => None,
        }
    }

    /// Primary factors `(p, q)` with `p < q` of a secondary color.
    pub fn factors(self) -> Option<(Color, Color)> {
        use Color::*;
        match self {
            Ab => Some((A, B)),
            Ac => Some((A, C)),
            Ad => Some((A, D)),
            Bc => Some((B, C)),
            Bd => Some((B, D)),
            Cd => Some((C, D)),
            _ => None,
        }
    }

    /// The secondary color made of two distinct primaries, in either order.
    pub fn product(x: Color, y: Color) -> Option<Color> {
        let (i, j) = (x.primary_index()?, y.primary_index()?);
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        SECONDARY
            .iter()
            .copied()
            .find(|s| s.factors().map(|(p, q)| (p.primary_index(), q.primary_index())) == Some((Some(lo), Some(hi))))
    }

    /// Multiplicities of `a, b, c, d` in this color seen as a product of primaries.
    pub fn content(self) -> [u32; 4] {
        match self.kind() {
            ColorKind::Quaternary => [1, 1, 1, 1],
            ColorKind::Primary => {
                let mut out = [0; 4];
                out[self.primary_index().unwrap()] = 1;
                out
            }
            ColorKind::Secondary => {
                let (p, q) = self.factors().unwrap();
                let mut out = [0; 4];
                out[p.primary_index().unwrap()] = 1;
                out[q.primary_index().unwrap()] = 1;
                out
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        use Color::*;
        match self {
            Ab => "ab",
            Ac => "ac",
            Ad => "ad",
            A => "a",
            Bc => "bc",
            Bd => "bd",
            B => "b",
            Cd => "cd",
            C => "c",
            D => "d",
            Abcd => "abcd",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Color {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL.iter().copied().find(|c| c.as_str() == s).ok_or(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_follow_the_chain() {
        let ranks: Vec<u8> = RANKED.iter().map(|c| c.rank().unwrap()).collect();
        assert_eq!(ranks, (0..10).collect::<Vec<_>>());
        assert_eq!(Color::Ab.rank().unwrap(), 0);
        assert_eq!(Color::A.rank().unwrap(), 3);
        assert_eq!(Color::D.rank().unwrap(), 9);
    }

    #[test]
    fn quaternary_has_no_rank() {
        let err = Color::Abcd.rank().unwrap_err();
        assert_eq!(err.to_string(), "quaternary color has no rank in the ten-color order");
    }

    #[test]
    fn color_census() {
        let count = |k| ALL.iter().filter(|c| c.kind() == k).count();
        assert_eq!(count(ColorKind::Primary), 4);
        assert_eq!(count(ColorKind::Secondary), 6);
        assert_eq!(count(ColorKind::Quaternary), 1);
    }

    #[test]
    fn secondary_factors_are_ordered_primaries() {
        for s in SECONDARY {
            let (p, q) = s.factors().unwrap();
            assert!(p.primary_index() < q.primary_index());
            assert_eq!(Color::product(q, p), Some(s));
            assert_eq!(Color::product(p, q), Some(s));
        }
        assert_eq!(Color::product(Color::A, Color::A), None);
    }

    #[test]
    fn content_counts_primaries() {
        assert_eq!(Color::Abcd.content(), [1, 1, 1, 1]);
        assert_eq!(Color::Bd.content(), [0, 1, 0, 1]);
        assert_eq!(Color::C.content(), [0, 0, 1, 0]);
    }

    #[test]
    fn text_round_trip() {
        for c in ALL {
            assert_eq!(c.as_str().parse::<Color>(), Ok(c));
        }
        assert!("xy".parse::<Color>().is_err());
    }
}
