//! The congruence form of the four-color identity.
//!
//! Substituting `q -> q^12` and `a, b, c, d -> q^-8, q^-4, q^-2, q^-1` sends a
//! part `k_p` to the integer `12k - w(p)`, where `w(a, b, c, d) = (8, 4, 2, 1)`
//! and a secondary color weighs the sum of its two letters. Distinct primary
//! parts become distinct parts `≡ 4, 8, 10, 11 (mod 12)` ("first kind"), and
//! `E1` becomes partitions obeying a set of gap rules ("second kind").

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::color::{Color, RANKED};
use crate::enumerate::{family_rules, walk_weighted, Weight};
use crate::error::Error;
use crate::order::gg_raw;
use crate::part::ColoredPart;
use crate::partition::{is_forbidden, Family};

/// Residues mod 12 of first-kind parts.
pub const FIRST_KIND_RESIDUES: [u64; 4] = [4, 8, 10, 11];

pub fn color_weight(c: Color) -> Option<u64> {
    Some(match c {
        Color::A => 8,
        Color::B => 4,
        Color::C => 2,
        Color::D => 1,
        Color::Abcd => return None,
        s => {
            let (p, q) = s.factors().expect("secondary");
            color_weight(p)? + color_weight(q)?
        }
    })
}

/// `k_p -> 12k - w(p)`.
pub fn dilate(p: &ColoredPart) -> Result<u64, Error> {
    let w = color_weight(p.color()).ok_or_else(|| Error::NoDilation(p.to_string()))?;
    (12 * p.size())
        .checked_sub(w)
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::NoDilation(p.to_string()))
}

pub fn dilate_all(parts: &[ColoredPart]) -> Result<Vec<u64>, Error> {
    parts.iter().map(dilate).collect()
}

/// The colored part whose dilation is `m`, if there is one.
pub fn undilate(m: u64) -> Option<ColoredPart> {
    let w = match m % 12 {
        0 => 12,
        r => 12 - r,
    };
    let color = RANKED.into_iter().find(|&c| color_weight(c) == Some(w))?;
    ColoredPart::new((m + w) / 12, color).ok()
}

pub fn is_first_kind_part(m: u64) -> bool {
    FIRST_KIND_RESIDUES.contains(&(m % 12))
}

pub fn is_second_kind_part(m: u64) -> bool {
    m > 0 && !matches!(m % 12, 1 | 5) && !matches!(m, 2 | 3 | 6 | 7 | 9)
}

/// Gap rule for consecutive parts `x > y`: the gap exceeds 12, or is 9 with
/// `x ≡ ±3 (mod 12)`, or is 12 with `x` of first-kind residue.
pub fn second_kind_pair(x: u64, y: u64) -> bool {
    match x.checked_sub(y) {
        Some(d) if d > 12 => true,
        Some(9) => matches!(x % 12, 3 | 9),
        Some(12) => is_first_kind_part(x),
        _ => false,
    }
}

/// The three-part side condition: a gap of 9 at `x` needs `x - z ≥ 24`,
/// except for the pattern `(27, 18, 4)`.
pub fn second_kind_triple(x: u64, y: u64, z: u64) -> bool {
    x - y != 9 || x - z >= 24 || (x, y, z) == (27, 18, 4)
}

/// The second-kind conditions on a whole partition, largest part first.
pub fn is_second_kind(parts: &[u64]) -> bool {
    parts.iter().all(|&m| is_second_kind_part(m))
        && parts.windows(2).all(|w| second_kind_pair(w[0], w[1]))
        && parts.windows(3).all(|w| second_kind_triple(w[0], w[1], w[2]))
}

fn distinct_from(n: u64, top: u64, ok: &dyn Fn(u64) -> bool, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if n == 0 {
        out.push(acc.clone());
        return;
    }
    for m in (1..=top.min(n)).rev() {
        if ok(m) {
            acc.push(m);
            distinct_from(n - m, m - 1, ok, acc, out);
            acc.pop();
        }
    }
}

/// Partitions of `n` into distinct parts `≡ 4, 8, 10, 11 (mod 12)`, largest part first.
pub fn first_kind(n: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    distinct_from(n, n, &is_first_kind_part, &mut Vec::new(), &mut out);
    out
}

fn second_from(n: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if n == 0 {
        out.push(acc.clone());
        return;
    }
    let top = acc.last().map_or(n, |&y| (y - 1).min(n));
    for m in (1..=top).rev() {
        let fits = is_second_kind_part(m)
            && match acc.as_slice() {
                [] => true,
                [y] => second_kind_pair(*y, m),
                [.., x, y] => second_kind_pair(*y, m) && second_kind_triple(*x, *y, m),
            };
        if fits {
            acc.push(m);
            second_from(n - m, acc, out);
            acc.pop();
        }
    }
}

/// Second-kind partitions of `n` generated from the gap rules.
pub fn second_kind(n: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    second_from(n, &mut Vec::new(), &mut out);
    out
}

fn dilated_weight(p: &ColoredPart) -> u64 {
    dilate(p).unwrap_or(0)
}

fn dilated_max_size(budget: u64) -> u64 {
    (budget + 12) / 12
}

/// Dilations of the `E1` partitions whose dilated total is `n`.
pub fn dilation_image(n: u64) -> Vec<Vec<u64>> {
    let weight = Weight {
        of: &dilated_weight,
        max_size: &dilated_max_size,
    };
    let mut out = Vec::new();
    walk_weighted(family_rules(Family::E1), n, &weight, &mut |p| {
        out.push(dilate_all(p).expect("E1 parts dilate"));
    });
    out
}

/// Both sides of the corollary at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub n: u64,
    pub first: Vec<Vec<u64>>,
    pub second: Vec<Vec<u64>>,
    pub image: Vec<Vec<u64>>,
}

impl CorollaryReport {
    pub fn rules_match_image(&self) -> bool {
        sorted(&self.second) == sorted(&self.image)
    }

    pub fn passed(&self) -> bool {
        self.rules_match_image() && self.first.len() == self.second.len()
    }
}

fn sorted(v: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn format_tuple(p: &[u64]) -> String {
    let inner: Vec<String> = p.iter().map(u64::to_string).collect();
    format!("({})", inner.join(","))
}

fn format_list(v: &[Vec<u64>]) -> String {
    v.iter().map(|p| format_tuple(p)).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for CorollaryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "first kind ({}): {}", self.first.len(), format_list(&self.first))?;
        writeln!(f, "second kind ({}): {}", self.second.len(), format_list(&self.second))?;
        if self.rules_match_image() {
            writeln!(f, "gap rules agree with the dilated E1 partitions")?;
        } else {
            let (s, i) = (sorted(&self.second), sorted(&self.image));
            let only_rules: Vec<Vec<u64>> = s.iter().filter(|p| !i.contains(p)).cloned().collect();
            let only_image: Vec<Vec<u64>> = i.iter().filter(|p| !s.contains(p)).cloned().collect();
            writeln!(f, "only from gap rules: {}", format_list(&only_rules))?;
            writeln!(f, "only from dilated E1: {}", format_list(&only_image))?;
        }
        writeln!(f, "{} = {}", self.first.len(), self.second.len())?;
        write!(f, "{}", if self.passed() { "pass" } else { "FAIL" })
    }
}

pub fn verify_corollary(n: u64) -> CorollaryReport {
    CorollaryReport {
        n,
        first: first_kind(n),
        second: second_kind(n),
        image: dilation_image(n),
    }
}

/// Counts at one `n`: first kind, second kind by the rules, dilated `E1`, and
/// sequences satisfying both of the latter. The two second-kind sets are equal
/// exactly when all three of the last counts agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryCounts {
    pub n: u64,
    pub first: u64,
    pub rules: u64,
    pub image: u64,
    pub both: u64,
}

impl CorollaryCounts {
    pub fn passed(&self) -> bool {
        self.first == self.rules && self.rules == self.image && self.image == self.both
    }
}

/// First-kind counts for every `n ≤ max_n` (distinct parts, 0/1 knapsack).
pub fn first_kind_counts(max_n: u64) -> Vec<u64> {
    let n = max_n as usize;
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for m in 1..=n {
        if is_first_kind_part(m as u64) {
            for s in (m..=n).rev() {
                c[s] += c[s - m];
            }
        }
    }
    c
}

/// How far back the previous-but-one part is, as the DP remembers it: the exact
/// gap up to 14, and 15 for anything larger or for no part at all.
const FAR: usize = 15;
const SLOTS: usize = FAR + 1;

fn slot(y: u64, z: Option<u64>) -> usize {
    z.map_or(FAR, |z| ((y - z) as usize).min(FAR))
}

/// Both second-kind predicates for a new largest part `x` on top of `y` (and `z`).
///
/// `z = None` stands for "no such part, or at least 15 below `y`"; neither
/// three-part condition can fire then.
fn extend(x: u64, y: u64, z: Option<u64>, lift: &[Option<ColoredPart>]) -> (bool, bool) {
    let rules = is_second_kind_part(x) && second_kind_pair(x, y) && z.is_none_or(|z| second_kind_triple(x, y, z));
    let image = match (lift[x as usize], lift[y as usize]) {
        (Some(px), Some(py)) => {
            gg_raw(px.size() as i64, px.color(), py.size() as i64, py.color())
                && z.is_none_or(|z| lift[z as usize].is_some_and(|pz| !is_forbidden(&px, &py, &pz)))
        }
        _ => false,
    };
    (rules, image)
}

/// Exact counts for every `n ≤ max_n` without listing the partitions.
///
/// Sequences are built from the smallest part upwards. The state is the running
/// total, the current largest part and the gap to the part below it (see
/// [`FAR`]); the gap rules and the forbidden patterns only look that far back.
pub fn corollary_counts(max_n: u64) -> Vec<CorollaryCounts> {
    let n = max_n as usize;
    let lift: Vec<Option<ColoredPart>> = (0..=max_n).map(|m| if m == 0 { None } else { undilate(m) }).collect();
    let base = |s: usize| s * (s + 1) / 2;
    let index = |s: usize, y: usize, d: usize| (base(s) + y) * SLOTS + d;
    let mut f = vec![[0u64; 3]; (base(n) + n + 1) * SLOTS];
    for x in 1..=n {
        let r = is_second_kind_part(x as u64);
        let i = lift[x].is_some();
        f[index(x, x, FAR)] = [u64::from(r), u64::from(i), u64::from(r && i)];
    }
    for s in 1..=n {
        for y in 1..=s {
            for d in 1..SLOTS {
                let c = f[index(s, y, d)];
                if c == [0; 3] {
                    continue;
                }
                let z = (d < FAR).then(|| (y - d) as u64);
                for x in y + 1..=n - s {
                    let (r, i) = extend(x as u64, y as u64, z, &lift);
                    if !(r || i) {
                        continue;
                    }
                    let cell = &mut f[index(s + x, x, slot(x as u64, Some(y as u64)))];
                    if r {
                        cell[0] += c[0];
                    }
                    if i {
                        cell[1] += c[1];
                    }
                    if r && i {
                        cell[2] += c[2];
                    }
                }
            }
        }
    }
    let first = first_kind_counts(max_n);
    (0..=n)
        .map(|s| {
            let mut tot = if s == 0 { [1u64; 3] } else { [0; 3] };
            for y in 1..=s {
                for d in 1..SLOTS {
                    let c = f[index(s, y, d)];
                    for k in 0..3 {
                        tot[k] += c[k];
                    }
                }
            }
            CorollaryCounts {
                n: s as u64,
                first: first[s],
                rules: tot[0],
                image: tot[1],
                both: tot[2],
            }
        })
        .collect()
}

/// The corollary for every `n ≤ max_n` by exact counting, with explicit set
/// comparison of the two second-kind generators for `n ≤ listed_upto`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollarySweep {
    pub counts: Vec<CorollaryCounts>,
    pub listed_upto: u64,
    pub listed_mismatches: Vec<u64>,
}

impl CorollarySweep {
    pub fn failures(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.counts.iter().filter(|c| !c.passed()).map(|c| c.n).collect();
        out.extend(&self.listed_mismatches);
        out.sort();
        out.dedup();
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

impl fmt::Display for CorollarySweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.counts.last().map_or(0, |c| c.n);
        writeln!(f, "n <= {max}: counts of first kind, second kind, dilated E1 and their overlap")?;
        writeln!(f, "n <= {}: second kind listed from the rules and from dilated E1", self.listed_upto)?;
        match self.failures().first() {
            None => write!(f, "pass"),
            Some(&n) => {
                let c = self.counts[n as usize];
                write!(
                    f,
                    "FAIL at n = {n}: first {}, rules {}, image {}, both {}",
                    c.first, c.rules, c.image, c.both
                )
            }
        }
    }
}

pub fn verify_corollary_sweep(max_n: u64, listed_upto: u64) -> CorollarySweep {
    let counts = corollary_counts(max_n);
    let mut listed_mismatches: Vec<u64> = (0..=listed_upto.min(max_n))
        .into_par_iter()
        .filter(|&n| sorted(&second_kind(n)) != sorted(&dilation_image(n)))
        .collect();
    listed_mismatches.sort();
    CorollarySweep {
        counts,
        listed_upto,
        listed_mismatches,
    }
}
