//! Exhaustive generators and refined counts.
//!
//! Every family is generated directly by backtracking over its own pairwise
//! relation, largest part first. Nothing here goes through the bijections, so
//! comparing counts across families tests them rather than assuming them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bressoud::{phi, psi};
use crate::color::{Color, PRIMARY, RANKED};
use crate::error::Error;
use crate::order::{gg_raw, lex_gt_raw, tri_gt_raw};
use crate::part::ColoredPart;
use crate::partition::{format_sequence, is_forbidden, stats, CountKey, Family};
use crate::quaternary::{from_quaternary, to_quaternary, to_quaternary_bubbling, QuaternaryDecomposition};

fn raw(rel: fn(i64, Color, i64, Color) -> bool, x: &ColoredPart, y: &ColoredPart) -> bool {
    rel(x.size() as i64, x.color(), y.size() as i64, y.color())
}

pub type TripleRule = dyn Fn(&ColoredPart, &ColoredPart, &ColoredPart) -> bool + Sync;

/// What a generated sequence may contain and how consecutive parts relate.
#[derive(Clone, Copy)]
pub struct Rules<'a> {
    pub colors: &'a [Color],
    pub pair: &'a (dyn Fn(&ColoredPart, &ColoredPart) -> bool + Sync),
    pub triple: Option<&'a TripleRule>,
}

fn lex_pair(x: &ColoredPart, y: &ColoredPart) -> bool {
    raw(lex_gt_raw, x, y)
}

fn gg_pair(x: &ColoredPart, y: &ColoredPart) -> bool {
    raw(gg_raw, x, y)
}

fn tri_pair(x: &ColoredPart, y: &ColoredPart) -> bool {
    raw(tri_gt_raw, x, y)
}

fn allowed_triple(x: &ColoredPart, y: &ColoredPart, z: &ColoredPart) -> bool {
    !is_forbidden(x, y, z)
}

pub fn family_rules(family: Family) -> Rules<'static> {
    match family {
        Family::O => Rules {
            colors: &PRIMARY,
            pair: &lex_pair,
            triple: None,
        },
        Family::E => Rules {
            colors: &RANKED,
            pair: &gg_pair,
            triple: None,
        },
        Family::E1 => Rules {
            colors: &RANKED,
            pair: &gg_pair,
            triple: Some(&allowed_triple),
        },
        Family::E2 => Rules {
            colors: &RANKED,
            pair: &tri_pair,
            triple: None,
        },
    }
}

/// Calls `visit` on every sequence of size `n` allowed by `rules`.
///
/// Each relation used here implies that the next part is strictly smaller in
/// the ten-color order, so every partition is produced exactly once.
pub fn walk(rules: Rules<'_>, n: u64, visit: &mut dyn FnMut(&[ColoredPart])) {
    walk_weighted(rules, n, &Weight::SIZE, visit);
}

/// How much a part contributes to the total, and the largest size that can fit a budget.
pub struct Weight<'a> {
    pub of: &'a (dyn Fn(&ColoredPart) -> u64 + Sync),
    pub max_size: &'a (dyn Fn(u64) -> u64 + Sync),
}

impl Weight<'static> {
    pub const SIZE: Weight<'static> = Weight {
        of: &|p: &ColoredPart| p.size(),
        max_size: &|budget| budget,
    };
}

/// [`walk`] where the total is measured by `weight` instead of part sizes.
pub fn walk_weighted(rules: Rules<'_>, n: u64, weight: &Weight<'_>, visit: &mut dyn FnMut(&[ColoredPart])) {
    let mut stack = Vec::new();
    walk_from(rules, weight, n, &mut stack, visit);
}

fn walk_from(
    rules: Rules<'_>,
    weight: &Weight<'_>,
    remaining: u64,
    stack: &mut Vec<ColoredPart>,
    visit: &mut dyn FnMut(&[ColoredPart]),
) {
    if remaining == 0 {
        visit(stack);
        return;
    }
    let bound = (weight.max_size)(remaining);
    let top = stack.last().map_or(bound, |p| p.size().min(bound));
    for size in (1..=top).rev() {
        for &color in rules.colors.iter().rev() {
            let Ok(next) = ColoredPart::new(size, color) else {
                continue;
            };
            let w = (weight.of)(&next);
            if w == 0 || w > remaining {
                continue;
            }
            let fits = match stack.as_slice() {
                [] => true,
                [y] => (rules.pair)(y, &next),
                [.., x, y] => (rules.pair)(y, &next) && rules.triple.is_none_or(|t| t(x, y, &next)),
            };
            if fits {
                stack.push(next);
                walk_from(rules, weight, remaining - w, stack, visit);
                stack.pop();
            }
        }
    }
}

pub fn for_each_partition(family: Family, n: u64, mut visit: impl FnMut(&[ColoredPart])) {
    walk(family_rules(family), n, &mut visit);
}

pub fn generate(family: Family, n: u64) -> Vec<Vec<ColoredPart>> {
    let mut out = Vec::new();
    for_each_partition(family, n, |p| out.push(p.to_vec()));
    out
}

/// Partitions of `n` into primary parts, distinct within each color.
pub fn gen_o(n: u64) -> Vec<Vec<ColoredPart>> {
    generate(Family::O, n)
}

pub fn gen_e1(n: u64) -> Vec<Vec<ColoredPart>> {
    generate(Family::E1, n)
}

pub fn gen_e2(n: u64) -> Vec<Vec<ColoredPart>> {
    generate(Family::E2, n)
}

/// Decreasing lists of quaternary sizes summing to `total`, each at least 4
/// and at least 4 apart, largest first.
fn quat_lists(total: u64, below: Option<u64>, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if total == 0 {
        out.push(acc.clone());
        return;
    }
    let top = below.map_or(total, |b| b.saturating_sub(4).min(total));
    for k in (4..=top).rev() {
        acc.push(k);
        quat_lists(total - k, Some(k), acc, out);
        acc.pop();
    }
}

/// Every quaternary partition of `n`.
pub fn for_each_quaternary(n: u64, mut visit: impl FnMut(&QuaternaryDecomposition)) {
    for q in (0..=n).rev() {
        let mut lists = Vec::new();
        quat_lists(q, None, &mut Vec::new(), &mut lists);
        if lists.is_empty() {
            continue;
        }
        let residuals = gen_e2(n - q);
        for quats in &lists {
            for residual in &residuals {
                let qd = QuaternaryDecomposition::from_sizes(quats, residual.clone())
                    .expect("generated sizes are positive");
                if quats.last().is_none_or(|&k| k >= qd.min_bound()) {
                    visit(&qd);
                }
            }
        }
    }
}

pub fn gen_quaternary(n: u64) -> Vec<QuaternaryDecomposition> {
    let mut out = Vec::new();
    for_each_quaternary(n, |qd| out.push(qd.clone()));
    out
}

/// Number of partitions per refined key.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountTable(pub BTreeMap<CountKey, u64>);

impl CountTable {
    pub fn bump(&mut self, key: CountKey) {
        *self.0.entry(key).or_insert(0) += 1;
    }

    pub fn get(&self, key: &CountKey) -> u64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &CountTable) {
        for (k, v) in &other.0 {
            *self.0.entry(*k).or_insert(0) += v;
        }
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn total_for(&self, n: u64) -> u64 {
        self.0.iter().filter(|(k, _)| k.n == n).map(|(_, v)| v).sum()
    }

    /// Only the keys satisfying `keep`.
    pub fn restricted(&self, keep: impl Fn(&CountKey) -> bool) -> CountTable {
        CountTable(self.0.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (*k, *v)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CountKey, &u64)> {
        self.0.iter()
    }

    /// CSV with header `u,v,w,t,n,count`, rows sorted by `(u, v, w, t, n)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,w,t,n,count\n");
        for (k, c) in &self.0 {
            out.push_str(&format!("{},{},{},{},{},{}\n", k.u, k.v, k.w, k.t, k.n, c));
        }
        out
    }
}

impl FromIterator<CountKey> for CountTable {
    fn from_iter<I: IntoIterator<Item = CountKey>>(iter: I) -> Self {
        let mut table = CountTable::default();
        for key in iter {
            table.bump(key);
        }
        table
    }
}

pub fn count_family(family: Family, n: u64) -> CountTable {
    let mut table = CountTable::default();
    for_each_partition(family, n, |p| table.bump(stats(p).into()));
    table
}

/// `A(u, v, w, t, n)`: partitions into distinct parts within each primary color.
pub fn count_a(n: u64) -> CountTable {
    count_family(Family::O, n)
}

/// `B(u, v, w, t, n)`: partitions in `E1`.
pub fn count_b(n: u64) -> CountTable {
    count_family(Family::E1, n)
}

pub fn count_quaternary(n: u64) -> CountTable {
    let mut table = CountTable::default();
    for_each_quaternary(n, |qd| table.bump(stats(&qd.all_parts()).into()));
    table
}

/// Counts for every `n ≤ max_n`, computed in parallel and merged in order.
pub fn count_upto(max_n: u64, count: fn(u64) -> CountTable) -> CountTable {
    let parts: Vec<CountTable> = (0..=max_n).into_par_iter().map(count).collect();
    let mut table = CountTable::default();
    for t in &parts {
        table.merge(t);
    }
    table
}

/// The first key where some tables disagree, with every table's count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub key: CountKey,
    pub counts: Vec<u64>,
}

pub fn first_mismatch(tables: &[&CountTable]) -> Option<Mismatch> {
    let mut keys: Vec<CountKey> = tables.iter().flat_map(|t| t.0.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find_map(|key| {
        let counts: Vec<u64> = tables.iter().map(|t| t.get(&key)).collect();
        counts.windows(2).any(|w| w[0] != w[1]).then_some(Mismatch { key, counts })
    })
}

/// Per-size totals of several count tables and the first refined disagreement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub columns: Vec<String>,
    pub totals: Vec<(u64, Vec<u64>)>,
    pub mismatch: Option<Mismatch>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n\t{}", self.columns.join("\t"))?;
        for (n, row) in &self.totals {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{n}\t{}", cells.join("\t"))?;
        }
        match &self.mismatch {
            None => write!(f, "pass"),
            Some(m) => {
                let cells: Vec<String> = self
                    .columns
                    .iter()
                    .zip(&m.counts)
                    .map(|(c, v)| format!("{c}={v}"))
                    .collect();
                write!(f, "FAIL at {}: {}", m.key, cells.join(", "))
            }
        }
    }
}

fn sweep(max_n: u64, columns: &[&str], count: impl Fn(u64) -> Vec<CountTable> + Sync) -> SweepReport {
    let per_n: Vec<(u64, Vec<CountTable>)> = (0..=max_n).into_par_iter().map(|n| (n, count(n))).collect();
    let mut totals = Vec::new();
    let mut mismatch = None;
    for (n, tables) in &per_n {
        totals.push((*n, tables.iter().map(CountTable::total).collect()));
        if mismatch.is_none() {
            let refs: Vec<&CountTable> = tables.iter().collect();
            mismatch = first_mismatch(&refs);
        }
    }
    SweepReport {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        totals,
        mismatch,
    }
}

/// `A = B` keywise for every `n ≤ max_n`.
pub fn verify_refined_counts(max_n: u64) -> SweepReport {
    sweep(max_n, &["A", "B"], |n| vec![count_a(n), count_b(n)])
}

/// `A = B = quaternary` keywise for every `n ≤ max_n`.
pub fn verify_quaternary_counts(max_n: u64) -> SweepReport {
    sweep(max_n, &["A", "B", "quaternary"], |n| {
        vec![count_a(n), count_b(n), count_quaternary(n)]
    })
}

/// Dropping colors from the four-color statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Specialization {
    /// `t = 0`: no part involves `d`; three primary colors.
    T0,
    /// `w = t = 0`: no part involves `c` or `d`; two primary colors.
    Wt0,
}

impl Specialization {
    pub fn keeps(self, key: &CountKey) -> bool {
        match self {
            Specialization::T0 => key.t == 0,
            Specialization::Wt0 => key.w == 0 && key.t == 0,
        }
    }

    pub fn primaries(self) -> &'static [Color] {
        match self {
            Specialization::T0 => &PRIMARY[..3],
            Specialization::Wt0 => &PRIMARY[..2],
        }
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Specialization::T0 => "t0",
            Specialization::Wt0 => "wt0",
        })
    }
}

impl FromStr for Specialization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t0" => Ok(Specialization::T0),
            "wt0" => Ok(Specialization::Wt0),
            other => Err(format!("unknown specialization `{other}` (expected t0 or wt0)")),
        }
    }
}

/// Minimal-difference tables of the classical two- and three-color theorems,
/// kept separately from the four-color ranks.
pub mod classical {
    use crate::color::Color::{self, *};

    /// Colors `a, b, c, ab, ac, bc`; rows are the larger part.
    pub const THREE_COLORS: [Color; 6] = [A, B, C, Ab, Ac, Bc];
    pub const THREE_TABLE: [[u64; 6]; 6] = [
        [1, 2, 2, 1, 1, 2],
        [1, 1, 2, 1, 1, 1],
        [1, 1, 1, 1, 1, 1],
        [2, 2, 2, 2, 2, 2],
        [2, 2, 2, 1, 2, 2],
        [1, 2, 2, 1, 1, 2],
    ];

    /// Colors `a, b, ab`.
    pub const TWO_COLORS: [Color; 3] = [A, B, Ab];
    pub const TWO_TABLE: [[u64; 3]; 3] = [[1, 2, 1], [1, 1, 1], [2, 2, 2]];

    fn lookup<const N: usize>(colors: &[Color; N], table: &[[u64; N]; N], x: Color, y: Color) -> Option<u64> {
        let i = colors.iter().position(|&c| c == x)?;
        let j = colors.iter().position(|&c| c == y)?;
        Some(table[i][j])
    }

    pub fn three_color_gap(x: Color, y: Color) -> Option<u64> {
        lookup(&THREE_COLORS, &THREE_TABLE, x, y)
    }

    pub fn two_color_gap(x: Color, y: Color) -> Option<u64> {
        lookup(&TWO_COLORS, &TWO_TABLE, x, y)
    }
}

fn three_color_pair(x: &ColoredPart, y: &ColoredPart) -> bool {
    classical::three_color_gap(x.color(), y.color()).is_some_and(|d| x.size() >= y.size() + d)
}

fn two_color_pair(x: &ColoredPart, y: &ColoredPart) -> bool {
    classical::two_color_gap(x.color(), y.color()).is_some_and(|d| x.size() >= y.size() + d)
}

/// Counts of the classical difference-condition partitions for `spec`.
pub fn count_classical(spec: Specialization, n: u64) -> CountTable {
    let rules = match spec {
        Specialization::T0 => Rules {
            colors: &classical::THREE_COLORS,
            pair: &three_color_pair,
            triple: None,
        },
        Specialization::Wt0 => Rules {
            colors: &classical::TWO_COLORS,
            pair: &two_color_pair,
            triple: None,
        },
    };
    let mut table = CountTable::default();
    walk(rules, n, &mut |p| table.bump(stats(p).into()));
    table
}

/// The restricted `A` and `B` tables against the classical difference conditions.
pub fn verify_specialization(max_n: u64, spec: Specialization) -> SweepReport {
    sweep(max_n, &["A", "B", "classical"], |n| {
        vec![
            count_a(n).restricted(|k| spec.keeps(k)),
            count_b(n).restricted(|k| spec.keeps(k)),
            count_classical(spec, n),
        ]
    })
}

fn broken(n: u64, what: String) -> Error {
    Error::Invariant(format!("n = {n}: {what}"))
}

/// Checks at size `n` that `phi` maps `O` onto `E1` one-to-one, preserving
/// size and colors, that `psi` undoes it from both sides, and that every trace
/// replays. Returns the number of partitions.
pub fn verify_phi_bijection(n: u64) -> Result<usize, Error> {
    let os = gen_o(n);
    let e1: HashSet<Vec<ColoredPart>> = gen_e1(n).into_iter().collect();
    let mut images = HashSet::with_capacity(os.len());
    for lambda in &os {
        let (nu, trace) = phi(lambda)?;
        let show = || format_sequence(lambda);
        if stats(&nu) != stats(lambda) {
            return Err(broken(n, format!("phi changed size or colors of {}", show())));
        }
        if !e1.contains(&nu) {
            return Err(broken(n, format!("phi({}) = {} is not generated in E1", show(), format_sequence(&nu))));
        }
        if trace.replay(lambda)? != nu || trace.rewind(&nu)? != *lambda {
            return Err(broken(n, format!("trace of {} does not replay", show())));
        }
        if psi(&nu)?.0 != *lambda {
            return Err(broken(n, format!("psi(phi({})) differs", show())));
        }
        images.insert(nu);
    }
    if images.len() != os.len() || images != e1 {
        return Err(broken(
            n,
            format!("{} images of {} inputs, {} in E1", images.len(), os.len(), e1.len()),
        ));
    }
    for nu in &e1 {
        if phi(&psi(nu)?.0)?.0 != *nu {
            return Err(broken(n, format!("phi(psi({})) differs", format_sequence(nu))));
        }
    }
    Ok(os.len())
}

/// Checks at size `n` that both quaternary encoders agree and map `E1` onto the
/// quaternary partitions one-to-one, preserving size and colors, and that the
/// decoder undoes them from both sides. Returns the number of partitions.
pub fn verify_quaternary_bijection(n: u64) -> Result<usize, Error> {
    let e1 = gen_e1(n);
    let quats: HashSet<QuaternaryDecomposition> = gen_quaternary(n).into_iter().collect();
    let mut images = HashSet::with_capacity(e1.len());
    for nu in &e1 {
        let qd = to_quaternary(nu)?;
        let show = || format_sequence(nu);
        if to_quaternary_bubbling(nu)?.0 != qd {
            return Err(broken(n, format!("encoders disagree on {}", show())));
        }
        if stats(&qd.all_parts()) != stats(nu) {
            return Err(broken(n, format!("encoding changed size or colors of {}", show())));
        }
        if !quats.contains(&qd) {
            return Err(broken(n, format!("image {qd} of {} is not generated", show())));
        }
        if from_quaternary(&qd)? != *nu {
            return Err(broken(n, format!("decoding {qd} does not give back {}", show())));
        }
        images.insert(qd);
    }
    if images.len() != e1.len() || images != quats {
        return Err(broken(
            n,
            format!("{} images of {} inputs, {} quaternary", images.len(), e1.len(), quats.len()),
        ));
    }
    for qd in &quats {
        if to_quaternary(&from_quaternary(qd)?)? != *qd {
            return Err(broken(n, format!("round trip of {qd} differs")));
        }
    }
    Ok(e1.len())
}

/// Runs `check` for every `n ≤ max_n` in parallel; the first failure by `n` wins.
pub fn verify_upto(max_n: u64, check: fn(u64) -> Result<usize, Error>) -> Result<Vec<usize>, Error> {
    let results: Vec<Result<usize, Error>> = (0..=max_n).into_par_iter().map(check).collect();
    results.into_iter().collect()
}
