//! Partition families as validated sequences.
//!
//! A partition is a plain `[ColoredPart]`, largest part first. Membership in
//! one of the families is established by [`validate`], which either returns a
//! [`Certificate`] or the first [`Violation`]:
//!
//! * `O`  – primary parts, strictly decreasing under `≻`;
//! * `E`  – primary or secondary parts, decreasing under `≫`;
//! * `E1` – members of `E` with no forbidden pattern;
//! * `E2` – primary or secondary parts, decreasing under `⊳`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::Color;
use crate::error::ParseError;
use crate::order::{gg_raw, lex_gt_raw, tri_gt_raw};
use crate::part::{parse_part_at, ColoredPart};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    O,
    E,
    E1,
    E2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::O => "O",
            Family::E => "E",
            Family::E1 => "E1",
            Family::E2 => "E2",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O" | "o" => Ok(Family::O),
            "E" | "e" => Ok(Family::E),
            "E1" | "e1" => Ok(Family::E1),
            "E2" | "e2" => Ok(Family::E2),
            other => Err(format!("unknown family `{other}` (expected O, E, E1 or E2)")),
        }
    }
}

/// The condition a sequence failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    QuaternaryPart,
    NonPrimaryPart,
    LexOrder,
    RelaxedOrder,
    TableOrder,
    ForbiddenPattern,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::QuaternaryPart => "quaternary part",
            Rule::NonPrimaryPart => "non-primary part",
            Rule::LexOrder => "lex order (≻) broken",
            Rule::RelaxedOrder => "relaxed order (≫) broken",
            Rule::TableOrder => "table order (⊳) broken",
            Rule::ForbiddenPattern => "forbidden pattern",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub rule: Rule,
    pub parts: Vec<ColoredPart>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at index {} ({})", self.rule, self.index, format_sequence(&self.parts))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: Family,
    pub len: usize,
}

/// Indices `i` where `parts[i..i + 3]` is a forbidden pattern.
///
/// The patterns are `((k+2)_cd, (k+2)_ab, k_c)`, `((k+2)_cd, (k+2)_ab, k_d)` and
/// `((k+2)_ad, (k+1)_bc, k_a)`, except `(3_ad, 2_bc, 1_a)`.
pub fn detect_forbidden(parts: &[ColoredPart]) -> Vec<usize> {
    parts
        .windows(3)
        .enumerate()
        .filter(|(_, w)| is_forbidden(&w[0], &w[1], &w[2]))
        .map(|(i, _)| i)
        .collect()
}

pub fn is_forbidden(x: &ColoredPart, y: &ColoredPart, z: &ColoredPart) -> bool {
    let k = z.size();
    match (x.color(), y.color(), z.color()) {
        (Color::Cd, Color::Ab, Color::C | Color::D) => x.size() == k + 2 && y.size() == k + 2,
        (Color::Ad, Color::Bc, Color::A) => k != 1 && x.size() == k + 2 && y.size() == k + 1,
        _ => false,
    }
}

fn pair_rule(family: Family) -> Rule {
    match family {
        Family::O => Rule::LexOrder,
        Family::E | Family::E1 => Rule::RelaxedOrder,
        Family::E2 => Rule::TableOrder,
    }
}

fn pair_holds(family: Family, x: &ColoredPart, y: &ColoredPart) -> bool {
    let (xs, ys) = (x.size() as i64, y.size() as i64);
    match family {
        Family::O => lex_gt_raw(xs, x.color(), ys, y.color()),
        Family::E | Family::E1 => gg_raw(xs, x.color(), ys, y.color()),
        Family::E2 => tri_gt_raw(xs, x.color(), ys, y.color()),
    }
}

/// Checks `parts` against `family`, reporting the first failure.
pub fn validate(parts: &[ColoredPart], family: Family) -> Result<Certificate, Violation> {
    for (i, p) in parts.iter().enumerate() {
        let rule = if p.is_quaternary() {
            Some(Rule::QuaternaryPart)
        } else if family == Family::O && !p.is_primary() {
            Some(Rule::NonPrimaryPart)
        } else {
            None
        };
        if let Some(rule) = rule {
            return Err(Violation {
                index: i,
                rule,
                parts: vec![*p],
            });
        }
    }
    for (i, w) in parts.windows(2).enumerate() {
        if !pair_holds(family, &w[0], &w[1]) {
            return Err(Violation {
                index: i,
                rule: pair_rule(family),
                parts: w.to_vec(),
            });
        }
    }
    if family == Family::E1 {
        if let Some(&i) = detect_forbidden(parts).first() {
            return Err(Violation {
                index: i,
                rule: Rule::ForbiddenPattern,
                parts: parts[i..i + 3].to_vec(),
            });
        }
    }
    Ok(Certificate {
        family,
        len: parts.len(),
    })
}

pub fn is_member(parts: &[ColoredPart], family: Family) -> bool {
    validate(parts, family).is_ok()
}

/// Multiplicities `(u, v, w, t)` of `a, b, c, d` in the commutative color product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorProduct(pub [u32; 4]);

impl ColorProduct {
    pub fn of(color: Color) -> Self {
        ColorProduct(color.content())
    }
}

impl Add for ColorProduct {
    type Output = ColorProduct;

    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        ColorProduct(out)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionStats {
    pub n: u64,
    pub product: ColorProduct,
}

impl Add for PartitionStats {
    type Output = PartitionStats;

    fn add(self, rhs: Self) -> Self {
        PartitionStats {
            n: self.n + rhs.n,
            product: self.product + rhs.product,
        }
    }
}

/// Refined counting key `(u, v, w, t, n)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountKey {
    pub u: u32,
    pub v: u32,
    pub w: u32,
    pub t: u32,
    pub n: u64,
}

impl From<PartitionStats> for CountKey {
    fn from(s: PartitionStats) -> Self {
        let [u, v, w, t] = s.product.0;
        CountKey { u, v, w, t, n: s.n }
    }
}

impl fmt::Display for CountKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(u={}, v={}, w={}, t={}, n={})", self.u, self.v, self.w, self.t, self.n)
    }
}

pub fn stats(parts: &[ColoredPart]) -> PartitionStats {
    parts.iter().fold(PartitionStats::default(), |acc, p| {
        acc + PartitionStats {
            n: p.size(),
            product: ColorProduct::of(p.color()),
        }
    })
}

pub fn format_sequence(parts: &[ColoredPart]) -> String {
    parts.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Parses comma-separated parts; whitespace around commas is ignored.
pub fn parse_sequence(text: &str) -> Result<Vec<ColoredPart>, ParseError> {
    parse_sequence_at(text, 0)
}

pub(crate) fn parse_sequence_at(text: &str, base: usize) -> Result<Vec<ColoredPart>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut start = 0;
    for piece in text.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        out.push(parse_part_at(piece.trim(), base + start + lead)?);
        start += piece.len() + 1;
    }
    Ok(out)
}

/// JSON form `{"parts":[{"size":..,"color":..}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub parts: Vec<ColoredPart>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::part::part;
    use Color::*;

    fn seq(s: &str) -> Vec<ColoredPart> {
        parse_sequence(s).unwrap()
    }

    #[test]
    fn forbidden_examples() {
        assert_eq!(detect_forbidden(&seq("7_cd,7_ab,5_c")), vec![0]);
        assert_eq!(detect_forbidden(&seq("7_cd,7_ab,5_d")), vec![0]);
        assert_eq!(detect_forbidden(&seq("6_ad,5_bc,4_a")), vec![0]);
        assert!(detect_forbidden(&seq("3_ad,2_bc,1_a")).is_empty());
        assert!(detect_forbidden(&seq("11_ad,10_bc,8_a,7_cd,7_ab,4_c,3_ad,2_bc,1_a")).is_empty());
    }

    #[test]
    fn validate_examples() {
        let o = seq("11_c,8_d,6_a,4_d,4_c,4_b,3_a,2_b,2_a,1_d,1_c,1_b,1_a");
        assert_eq!(validate(&o, Family::O), Ok(Certificate { family: Family::O, len: 13 }));
        let e1 = seq("11_c,10_cd,10_ab,6_d,5_ab,3_ad,2_bc,1_a");
        assert!(validate(&e1, Family::E1).is_ok());
        assert!(validate(&seq("4_d,4_c"), Family::O).is_ok());
        let v = validate(&seq("4_c,4_d"), Family::O).unwrap_err();
        assert_eq!((v.index, v.rule), (0, Rule::LexOrder));
    }

    #[test]
    fn forbidden_violation_message() {
        let v = validate(&seq("7_cd,7_ab,5_c"), Family::E1).unwrap_err();
        assert_eq!(v.to_string(), "forbidden pattern at index 0 (7_cd,7_ab,5_c)");
        assert!(validate(&seq("7_cd,7_ab,5_c"), Family::E).is_ok());
    }

    #[test]
    fn family_specific_rejections() {
        let v = validate(&seq("3_ab,1_a"), Family::O).unwrap_err();
        assert_eq!(v.rule, Rule::NonPrimaryPart);
        let v = validate(&seq("4_abcd"), Family::E1).unwrap_err();
        assert_eq!(v.rule, Rule::QuaternaryPart);
        let v = validate(&seq("2_cd,2_ab"), Family::E2).unwrap_err();
        assert_eq!(v.rule, Rule::TableOrder);
    }

    #[test]
    fn empty_is_everywhere() {
        for f in [Family::O, Family::E, Family::E1, Family::E2] {
            assert!(is_member(&[], f));
        }
    }

    #[test]
    fn stats_examples() {
        let o = seq("11_c,8_d,6_a,4_d,4_c,4_b,3_a,2_b,2_a,1_d,1_c,1_b,1_a");
        let s = stats(&o);
        assert_eq!((s.n, s.product.0), (48, [4, 3, 3, 3]));
        let e1 = seq("11_c,10_cd,10_ab,6_d,5_ab,3_ad,2_bc,1_a");
        let s = stats(&e1);
        assert_eq!((s.n, s.product.0), (48, [4, 3, 3, 3]));
        assert_eq!(stats(&[]), PartitionStats::default());
        assert_eq!(stats(&[part(5, Abcd)]).product.0, [1, 1, 1, 1]);
    }

    #[test]
    fn sequence_notation() {
        let parts = parse_sequence(" 11_c , 10_cd,10_ab ").unwrap();
        assert_eq!(parts, vec![part(11, C), part(10, Cd), part(10, Ab)]);
        assert_eq!(format_sequence(&parts), "11_c,10_cd,10_ab");
        assert_eq!(parse_sequence("").unwrap(), vec![]);
        assert_eq!(
            parse_sequence("1_a, 2_q"),
            Err(ParseError::UnknownColor {
                offset: 7,
                token: "q".into()
            })
        );
        assert_eq!(parse_sequence("1_a,,2_b"), Err(ParseError::EmptyPart { offset: 4 }));
    }

    #[test]
    fn json_schema() {
        let j = PartitionJson {
            parts: seq("3_ad,1_a"),
        };
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"parts":[{"size":3,"color":"ad"},{"size":1,"color":"a"}]}"#);
        assert_eq!(serde_json::from_str::<PartitionJson>(&text).unwrap(), j);
    }
}
