//! The bijection between `E1` and quaternary partitions.
//!
//! A quaternary partition is a list of `abcd` parts `K^1 ≥ … ≥ K^t` together
//! with a residual partition in `E2`. Adjacent pairs `((k+1)_ad, k_bc)` and
//! `(k_cd, k_ab)` in an `E1` partition are the pattern pairs; each one sums to
//! a single `abcd` part.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::Color;
use crate::error::{Error, ParseError};
use crate::order::tri_gt_raw;
use crate::part::{part, ColoredPart};
use crate::partition::{format_sequence, parse_sequence_at, validate, Family, PartitionJson};

/// An adjacent pair `((k+1)_ad, k_bc)` or `(k_cd, k_ab)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PatternPair {
    big: ColoredPart,
    small: ColoredPart,
}

impl PatternPair {
    pub fn new(big: ColoredPart, small: ColoredPart) -> Result<Self, Error> {
        if is_pattern(&big, &small) {
            Ok(PatternPair { big, small })
        } else {
            Err(Error::NotPattern(big.to_string(), small.to_string()))
        }
    }

    pub fn big(&self) -> ColoredPart {
        self.big
    }

    pub fn small(&self) -> ColoredPart {
        self.small
    }

    /// Both members moved by `delta`.
    fn shifted(&self, delta: i64) -> Result<Self, Error> {
        let moved = |p: &ColoredPart| {
            p.shifted(delta)
                .map_err(|_| Error::Invariant(format!("pattern member {p} moved out of range")))
        };
        Ok(PatternPair {
            big: moved(&self.big)?,
            small: moved(&self.small)?,
        })
    }
}

impl fmt::Display for PatternPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.big, self.small)
    }
}

pub fn is_pattern(x: &ColoredPart, y: &ColoredPart) -> bool {
    match (x.color(), y.color()) {
        (Color::Ad, Color::Bc) => x.size() == y.size() + 1,
        (Color::Cd, Color::Ab) => x.size() == y.size(),
        _ => false,
    }
}

/// `2k_abcd -> (k_cd, k_ab)`, `(2k+1)_abcd -> ((k+1)_ad, k_bc)`.
pub fn split_quat(q: &ColoredPart) -> Result<PatternPair, Error> {
    if !q.is_quaternary() {
        return Err(Error::NotQuaternary(q.to_string()));
    }
    if q.size() < 4 {
        return Err(Error::SmallQuaternary(q.size()));
    }
    let k = q.size() / 2;
    Ok(if q.size().is_multiple_of(2) {
        PatternPair {
            big: part(k, Color::Cd),
            small: part(k, Color::Ab),
        }
    } else {
        PatternPair {
            big: part(k + 1, Color::Ad),
            small: part(k, Color::Bc),
        }
    })
}

pub fn merge_pair(p: &PatternPair) -> ColoredPart {
    part(p.big.size() + p.small.size(), Color::Abcd)
}

/// Quaternary parts, largest first, and the residual `E2` partition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuaternaryDecomposition {
    pub quats: Vec<ColoredPart>,
    pub residual: Vec<ColoredPart>,
}

impl QuaternaryDecomposition {
    pub fn new(quats: Vec<ColoredPart>, residual: Vec<ColoredPart>) -> Self {
        QuaternaryDecomposition { quats, residual }
    }

    pub fn from_sizes(quats: &[u64], residual: Vec<ColoredPart>) -> Result<Self, Error> {
        let quats = quats
            .iter()
            .map(|&k| ColoredPart::new(k, Color::Abcd))
            .collect::<Result<_, _>>()?;
        Ok(QuaternaryDecomposition { quats, residual })
    }

    pub fn quat_sizes(&self) -> Vec<u64> {
        self.quats.iter().map(ColoredPart::size).collect()
    }

    /// Smallest value the last quaternary part may take: `4 + 2s - χ(1_a in residual)`.
    pub fn min_bound(&self) -> u64 {
        let s = self.residual.len() as u64;
        4 + 2 * s - u64::from(self.residual.contains(&part(1, Color::A)))
    }

    /// Every quaternary part, then every residual part.
    pub fn all_parts(&self) -> Vec<ColoredPart> {
        self.quats.iter().chain(&self.residual).copied().collect()
    }

    /// Checks every invariant of a quaternary partition.
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidDecomposition(msg));
        for q in &self.quats {
            if !q.is_quaternary() {
                return bad(format!("{q} is not a quaternary part"));
            }
            if q.size() < 4 {
                return bad(format!("{q} is smaller than 4"));
            }
        }
        for w in self.quats.windows(2) {
            if w[0].size() < w[1].size() + 4 {
                return bad(format!("quaternary parts {} and {} differ by less than 4", w[0], w[1]));
            }
        }
        if let Err(v) = validate(&self.residual, Family::E2) {
            return bad(format!("residual is not in E2: {v}"));
        }
        if let Some(last) = self.quats.last() {
            if last.size() < self.min_bound() {
                return bad(format!(
                    "smallest quaternary part {last} is below the bound {}",
                    self.min_bound()
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> QuaternaryJson {
        QuaternaryJson {
            quats: self.quat_sizes(),
            residual: PartitionJson {
                parts: self.residual.clone(),
            },
        }
    }
}

impl fmt::Display for QuaternaryDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = format!("{} | {}", format_sequence(&self.quats), format_sequence(&self.residual));
        f.write_str(text.trim())
    }
}

impl FromStr for QuaternaryDecomposition {
    type Err = ParseError;

    /// Parses `"22_abcd,11_abcd | 7_c,4_d,3_ab,1_a"`; either side may be empty.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bar = s.find('|').ok_or(ParseError::MissingBar)?;
        Ok(QuaternaryDecomposition {
            quats: parse_sequence_at(&s[..bar], 0)?,
            residual: parse_sequence_at(&s[bar + 1..], bar + 1)?,
        })
    }
}

/// JSON form `{"quats":[22,11],"residual":{"parts":[...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternaryJson {
    pub quats: Vec<u64>,
    pub residual: PartitionJson,
}

impl TryFrom<QuaternaryJson> for QuaternaryDecomposition {
    type Error = Error;

    fn try_from(j: QuaternaryJson) -> Result<Self, Error> {
        QuaternaryDecomposition::from_sizes(&j.quats, j.residual.parts)
    }
}

/// One entry of an intermediate sequence: a part, a pattern pair still travelling,
/// or a part already emplaced by the decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Part(ColoredPart),
    Pair(PatternPair),
    Placed(ColoredPart),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Part(p) | Slot::Placed(p) => p.fmt(f),
            Slot::Pair(pair) => pair.fmt(f),
        }
    }
}

pub fn format_slots(slots: &[Slot]) -> String {
    slots.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn require_e1(nu: &[ColoredPart]) -> Result<(), Error> {
    validate(nu, Family::E1)
        .map(|_| ())
        .map_err(|violation| Error::NotInFamily {
            family: Family::E1,
            violation,
        })
}

/// Groups adjacent pattern pairs, scanning left to right.
pub fn group_patterns(nu: &[ColoredPart]) -> Vec<Slot> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < nu.len() {
        if i + 1 < nu.len() && is_pattern(&nu[i], &nu[i + 1]) {
            out.push(Slot::Pair(PatternPair {
                big: nu[i],
                small: nu[i + 1],
            }));
            i += 2;
        } else {
            out.push(Slot::Part(nu[i]));
            i += 1;
        }
    }
    out
}

fn ensure_image(qd: QuaternaryDecomposition) -> Result<QuaternaryDecomposition, Error> {
    qd.validate()
        .map_err(|e| Error::Invariant(format!("image is not a quaternary partition: {e}")))?;
    Ok(qd)
}

/// `E1 -> quaternary`: each pattern gains twice the number of other parts to its
/// left, each other part loses twice the number of patterns to its right.
pub fn to_quaternary(nu: &[ColoredPart]) -> Result<QuaternaryDecomposition, Error> {
    require_e1(nu)?;
    let slots = group_patterns(nu);
    let total_pairs = slots.iter().filter(|s| matches!(s, Slot::Pair(_))).count() as i64;
    let (mut quats, mut residual) = (Vec::new(), Vec::new());
    let (mut parts_left, mut pairs_left) = (0i64, 0i64);
    for slot in slots {
        match slot {
            Slot::Pair(pair) => {
                let k = merge_pair(&pair).shifted(2 * parts_left)?;
                quats.push(k);
                pairs_left += 1;
            }
            Slot::Part(p) | Slot::Placed(p) => {
                let moved = p
                    .shifted(-2 * (total_pairs - pairs_left))
                    .map_err(|_| Error::Invariant(format!("residual part {p} fell out of range")))?;
                residual.push(moved);
                parts_left += 1;
            }
        }
    }
    ensure_image(QuaternaryDecomposition { quats, residual })
}

/// `E1 -> quaternary` by repeatedly crossing a part with the pattern pair right
/// after it, `ν, M, m -> M+1, m+1, ν-2`, always at the leftmost place possible.
///
/// Returns the decomposition and every intermediate sequence, starting from the
/// grouped input.
pub fn to_quaternary_bubbling(nu: &[ColoredPart]) -> Result<(QuaternaryDecomposition, Vec<Vec<Slot>>), Error> {
    require_e1(nu)?;
    let mut slots = group_patterns(nu);
    let mut states = vec![slots.clone()];
    while let Some(i) = slots
        .windows(2)
        .position(|w| matches!(w, [Slot::Part(_), Slot::Pair(_)]))
    {
        let (Slot::Part(p), Slot::Pair(pair)) = (slots[i], slots[i + 1]) else {
            unreachable!()
        };
        let down = p
            .shifted(-2)
            .map_err(|_| Error::Invariant(format!("part {p} fell out of range while crossing {pair}")))?;
        slots[i] = Slot::Pair(pair.shifted(1)?);
        slots[i + 1] = Slot::Part(down);
        states.push(slots.clone());
    }
    let mut qd = QuaternaryDecomposition::default();
    for slot in &slots {
        match slot {
            Slot::Pair(pair) => qd.quats.push(merge_pair(pair)),
            Slot::Part(p) | Slot::Placed(p) => qd.residual.push(*p),
        }
    }
    Ok((ensure_image(qd)?, states))
}

/// Quaternary `-> E1`, the inverse of [`to_quaternary`].
pub fn from_quaternary(qd: &QuaternaryDecomposition) -> Result<Vec<ColoredPart>, Error> {
    from_quaternary_states(qd).map(|(nu, _)| nu)
}

/// [`from_quaternary`] together with every intermediate sequence.
///
/// All quaternary parts start as pattern pairs in front of the residual. The
/// smallest one sinks first: while the next entry is a residual part `ν ≠ 1_a`
/// with `ν + 2 ⊳ k - 1`, the part becomes `ν + 2`, moves in front, and the pair
/// loses one on each member. When it stops, the pair is emplaced. Each larger
/// quaternary part then starts again from the front.
pub fn from_quaternary_states(qd: &QuaternaryDecomposition) -> Result<(Vec<ColoredPart>, Vec<Vec<Slot>>), Error> {
    qd.validate()?;
    let one_a = part(1, Color::A);
    let mut slots: Vec<Slot> = Vec::with_capacity(qd.quats.len() + qd.residual.len());
    for q in &qd.quats {
        slots.push(Slot::Pair(split_quat(q)?));
    }
    slots.extend(qd.residual.iter().map(|&p| Slot::Part(p)));
    let mut states = vec![slots.clone()];
    for u in (0..qd.quats.len()).rev() {
        let mut i = u;
        // Step 1
        loop {
            let Slot::Pair(pair) = slots[i] else {
                return Err(Error::Invariant(format!("lost the travelling pair at {i}")));
            };
            let Some(&Slot::Part(nu)) = slots.get(i + 1) else {
                break;
            };
            let k = pair.big;
            let sinks = nu != one_a
                && tri_gt_raw(nu.size() as i64 + 2, nu.color(), k.size() as i64 - 1, k.color());
            if !sinks {
                break;
            }
            slots[i] = Slot::Part(nu.shifted(2)?);
            slots[i + 1] = Slot::Pair(pair.shifted(-1)?);
            states.push(slots.clone());
            i += 1;
        }
        // Step 2
        let Slot::Pair(pair) = slots[i] else { unreachable!() };
        slots.splice(i..=i, [Slot::Placed(pair.big), Slot::Placed(pair.small)]);
        states.push(slots.clone());
    }
    let nu: Vec<ColoredPart> = slots
        .iter()
        .map(|s| match s {
            Slot::Part(p) | Slot::Placed(p) => *p,
            Slot::Pair(_) => unreachable!("every pair is emplaced"),
        })
        .collect();
    require_e1(&nu).map_err(|e| Error::Invariant(format!("decoder left E1: {e}")))?;
    Ok((nu, states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{parse_sequence, stats};
    use Color::*;

    fn seq(s: &str) -> Vec<ColoredPart> {
        parse_sequence(s).unwrap()
    }

    #[test]
    fn split_examples() {
        let p = split_quat(&part(22, Abcd)).unwrap();
        assert_eq!((p.big(), p.small()), (part(11, Cd), part(11, Ab)));
        let p = split_quat(&part(5, Abcd)).unwrap();
        assert_eq!((p.big(), p.small()), (part(3, Ad), part(2, Bc)));
        let p = split_quat(&part(4, Abcd)).unwrap();
        assert_eq!((p.big(), p.small()), (part(2, Cd), part(2, Ab)));
        for k in 4..60 {
            assert_eq!(merge_pair(&split_quat(&part(k, Abcd)).unwrap()), part(k, Abcd));
        }
    }

    #[test]
    fn split_rejects_small_and_foreign() {
        assert_eq!(split_quat(&part(3, Abcd)), Err(Error::SmallQuaternary(3)));
        assert_eq!(split_quat(&part(2, Abcd)), Err(Error::SmallQuaternary(2)));
        assert!(matches!(split_quat(&part(8, Cd)), Err(Error::NotQuaternary(_))));
        assert!(PatternPair::new(part(3, Ad), part(3, Bc)).is_err());
    }

    #[test]
    fn worked_example_both_ways() {
        let nu = seq("11_c,10_cd,10_ab,6_d,5_ab,3_ad,2_bc,1_a");
        let qd = to_quaternary(&nu).unwrap();
        assert_eq!(qd.to_string(), "22_abcd,11_abcd | 7_c,4_d,3_ab,1_a");
        assert_eq!(from_quaternary(&qd).unwrap(), nu);
        assert_eq!(stats(&qd.all_parts()), stats(&nu));
    }

    #[test]
    fn three_pattern_example() {
        let qd: QuaternaryDecomposition = "21_abcd,16_abcd,9_abcd | 4_a,2_c,1_a".parse().unwrap();
        let nu = from_quaternary(&qd).unwrap();
        assert_eq!(format_sequence(&nu), "11_ad,10_bc,8_cd,8_ab,6_a,4_c,3_ad,2_bc,1_a");
        assert_eq!(to_quaternary(&nu).unwrap(), qd);
        assert_eq!(stats(&nu).n, 53);
    }

    #[test]
    fn near_miss_is_rejected() {
        // 8_a ≫ 7_cd needs a difference of 2
        let nu = seq("11_ad,10_bc,8_a,7_cd,7_ab,4_c,3_ad,2_bc,1_a");
        let err = to_quaternary(&nu).unwrap_err();
        assert_eq!(
            err.to_string(),
            "input is not in family E1: relaxed order (≫) broken at index 2 (8_a,7_cd)"
        );
    }

    #[test]
    fn no_patterns_is_identity() {
        let nu = seq("9_c,6_d,3_ab,1_a");
        let qd = to_quaternary(&nu).unwrap();
        assert!(qd.quats.is_empty());
        assert_eq!(qd.residual, nu);
        assert_eq!(from_quaternary(&qd).unwrap(), nu);
        assert_eq!(from_quaternary(&QuaternaryDecomposition::default()).unwrap(), vec![]);
    }

    #[test]
    fn bubbling_matches_closed_form() {
        for text in [
            "11_c,10_cd,10_ab,6_d,5_ab,3_ad,2_bc,1_a",
            "11_ad,10_bc,8_cd,8_ab,6_a,4_c,3_ad,2_bc,1_a",
            "3_ad,2_bc,1_a",
        ] {
            let nu = seq(text);
            assert_eq!(to_quaternary_bubbling(&nu).unwrap().0, to_quaternary(&nu).unwrap());
        }
    }

    #[test]
    fn text_round_trip() {
        for text in ["22_abcd,11_abcd | 7_c,4_d,3_ab,1_a", "| 7_c", "4_abcd |", "|"] {
            let qd: QuaternaryDecomposition = text.parse().unwrap();
            let back: QuaternaryDecomposition = qd.to_string().parse().unwrap();
            assert_eq!(back, qd);
        }
        assert_eq!(
            "22_abcd 7_c".parse::<QuaternaryDecomposition>(),
            Err(ParseError::MissingBar)
        );
        assert_eq!(
            "4_abcd | 3_xy".parse::<QuaternaryDecomposition>(),
            Err(ParseError::UnknownColor {
                offset: 11,
                token: "xy".into()
            })
        );
    }

    #[test]
    fn json_round_trip() {
        let qd: QuaternaryDecomposition = "22_abcd,11_abcd | 7_c,1_a".parse().unwrap();
        let text = serde_json::to_string(&qd.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"quats":[22,11],"residual":{"parts":[{"size":7,"color":"c"},{"size":1,"color":"a"}]}}"#
        );
        let back: QuaternaryJson = serde_json::from_str(&text).unwrap();
        assert_eq!(QuaternaryDecomposition::try_from(back).unwrap(), qd);
    }

    #[test]
    fn invalid_decompositions_are_reported() {
        let cases = [
            "22_abcd,20_abcd | 1_a",
            "5_abcd | 2_c,1_a",
            "10_abcd | 2_cd,2_ab",
            "3_abcd |",
        ];
        for text in cases {
            let qd: QuaternaryDecomposition = text.parse().unwrap();
            assert!(
                matches!(from_quaternary(&qd), Err(Error::InvalidDecomposition(_))),
                "{text}"
            );
        }
        let qd: QuaternaryDecomposition = "5_abcd | 1_a".parse().unwrap();
        assert!(qd.validate().is_ok());
        assert_eq!(from_quaternary(&qd).unwrap(), seq("3_ad,2_bc,1_a"));
    }
}
