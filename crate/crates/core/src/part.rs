//! Colored parts, their upper and lower halves, and the `size_color` notation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::Color;
use crate::error::{Error, ParseError};
use crate::order;

/// A positive integer carrying one of the eleven colors.
///
/// Secondary parts always have size at least 2; the constructor refuses
/// anything smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPart", into = "RawPart")]
pub struct ColoredPart {
    size: u64,
    color: Color,
}

#[derive(Serialize, Deserialize)]
struct RawPart {
    size: u64,
    color: Color,
}

impl TryFrom<RawPart> for ColoredPart {
    type Error = Error;

    fn try_from(raw: RawPart) -> Result<Self, Self::Error> {
        ColoredPart::new(raw.size, raw.color)
    }
}

impl From<ColoredPart> for RawPart {
    fn from(p: ColoredPart) -> Self {
        RawPart {
            size: p.size,
            color: p.color,
        }
    }
}

impl ColoredPart {
    pub fn new(size: u64, color: Color) -> Result<Self, Error> {
        if size == 0 {
            return Err(Error::ZeroSize);
        }
        if color.is_secondary() && size < 2 {
            return Err(Error::SmallSecondary(size));
        }
        Ok(ColoredPart { size, color })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn is_primary(&self) -> bool {
        self.color.is_primary()
    }

    pub fn is_secondary(&self) -> bool {
        self.color.is_secondary()
    }

    pub fn is_quaternary(&self) -> bool {
        self.color.is_quaternary()
    }

    /// The same color with the size moved by `delta`.
    pub fn shifted(&self, delta: i64) -> Result<Self, Error> {
        let size = self.size.checked_add_signed(delta).ok_or(if delta < 0 {
            Error::ZeroSize
        } else {
            Error::Overflow
        })?;
        ColoredPart::new(size, self.color)
    }

    /// The next primary part above this one in the `≻` chain.
    pub fn primary_successor(&self) -> Option<Self> {
        let next = match self.color {
            Color::A => (self.size, Color::B),
            Color::B => (self.size, Color::C),
            Color::C => (self.size, Color::D),
            Color::D => (self.size.checked_add(1)?, Color::A),
            _ => return None,
        };
        ColoredPart::new(next.0, next.1).ok()
    }
}

impl fmt::Display for ColoredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.size, self.color)
    }
}

impl FromStr for ColoredPart {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_part_at(s, 0)
    }
}

/// Builds a part from literal values; panics on invalid input. For tests and constants.
pub fn part(size: u64, color: Color) -> ColoredPart {
    ColoredPart::new(size, color).expect("valid part literal")
}

pub fn parse_part(text: &str) -> Result<ColoredPart, ParseError> {
    parse_part_at(text, 0)
}

pub fn format_part(p: &ColoredPart) -> String {
    p.to_string()
}

/// Parses one part whose first byte sits at `base` in the enclosing input.
pub(crate) fn parse_part_at(text: &str, base: usize) -> Result<ColoredPart, ParseError> {
    if text.is_empty() {
        return Err(ParseError::EmptyPart { offset: base });
    }
    let Some(sep) = text.find('_') else {
        let stop = text
            .char_indices()
            .find(|(i, c)| !(c.is_ascii_digit() || (*i == 0 && *c == '-')))
            .map_or(text.len(), |(i, _)| i);
        return Err(ParseError::MissingSeparator { offset: base + stop });
    };
    let (digits, token) = (&text[..sep], &text[sep + 1..]);
    let size = parse_size(digits, base)?;
    let color: Color = token.parse().map_err(|_| ParseError::UnknownColor {
        offset: base + sep + 1,
        token: token.to_string(),
    })?;
    ColoredPart::new(size, color).map_err(|_| ParseError::SmallSecondary {
        offset: base,
        size,
        color: color.to_string(),
    })
}

fn parse_size(digits: &str, base: usize) -> Result<u64, ParseError> {
    let malformed = || ParseError::MalformedInt {
        offset: base,
        text: digits.to_string(),
    };
    if let Some(rest) = digits.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::NegativeSize { offset: base });
        }
        return Err(malformed());
    }
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    match digits.parse::<u64>() {
        Ok(0) => Err(ParseError::ZeroSize { offset: base }),
        Ok(n) => Ok(n),
        Err(_) => Err(malformed()),
    }
}

fn halves(s: &ColoredPart) -> Result<(ColoredPart, ColoredPart), Error> {
    let (p, q) = s
        .color
        .factors()
        .filter(|_| s.size >= 2)
        .ok_or_else(|| Error::NotHalvable(s.to_string()))?;
    let k = s.size / 2;
    Ok(if s.size.is_multiple_of(2) {
        (part(k, q), part(k, p))
    } else {
        (part(k + 1, p), part(k, q))
    })
}

/// Upper half of a secondary part: `2k_pq -> k_q`, `(2k+1)_pq -> (k+1)_p`.
pub fn alpha(s: &ColoredPart) -> Result<ColoredPart, Error> {
    halves(s).map(|h| h.0)
}

/// Lower half of a secondary part: `2k_pq -> k_p`, `(2k+1)_pq -> k_q`.
pub fn beta(s: &ColoredPart) -> Result<ColoredPart, Error> {
    halves(s).map(|h| h.1)
}

/// Both halves at once, upper first.
pub fn split_halves(s: &ColoredPart) -> Result<(ColoredPart, ColoredPart), Error> {
    halves(s)
}

/// Merges a troublesome pair of primary parts into one secondary part.
pub fn combine(x: &ColoredPart, y: &ColoredPart) -> Result<ColoredPart, Error> {
    let troublesome = x.is_primary()
        && y.is_primary()
        && x.color != y.color
        && order::lex_gt(x, y)?
        && !order::gg(x, y)?;
    if !troublesome {
        return Err(Error::NotTroublesome(x.to_string(), y.to_string()));
    }
    let color = Color::product(x.color, y.color).expect("distinct primaries");
    let size = x.size.checked_add(y.size).ok_or(Error::Overflow)?;
    let merged = ColoredPart::new(size, color)?;
    debug_assert_eq!(halves(&merged).ok(), Some((*x, *y)));
    Ok(merged)
}
