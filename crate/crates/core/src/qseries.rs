//! Exact truncated power series in `a, b, c, d, q`.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::color::{Color, PRIMARY};
use crate::enumerate::CountTable;
use crate::error::Error;
use crate::partition::CountKey;

/// A polynomial in `a, b, c, d` times powers of `q`, with every term above
/// `q^qmax` dropped. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    qmax: u32,
    coeffs: BTreeMap<CountKey, BigInt>,
}

pub fn key(u: u32, v: u32, w: u32, t: u32, n: u64) -> CountKey {
    CountKey { u, v, w, t, n }
}

fn q_key(n: u64) -> CountKey {
    key(0, 0, 0, 0, n)
}

impl TruncatedSeries {
    pub fn zero(qmax: u32) -> Self {
        TruncatedSeries {
            qmax,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(qmax: u32) -> Self {
        Self::monomial(BigInt::one(), q_key(0), qmax)
    }

    pub fn monomial(coef: BigInt, at: CountKey, qmax: u32) -> Self {
        let mut s = Self::zero(qmax);
        s.add_term(at, coef);
        s
    }

    /// `coef · q^n`.
    pub fn q_power(coef: i64, n: u64, qmax: u32) -> Self {
        Self::monomial(BigInt::from(coef), q_key(n), qmax)
    }

    /// A series in `q` alone from its coefficients, constant term first.
    pub fn from_q_coeffs(coeffs: &[i64], qmax: u32) -> Self {
        let mut s = Self::zero(qmax);
        for (n, &c) in coeffs.iter().enumerate() {
            s.add_term(q_key(n as u64), BigInt::from(c));
        }
        s
    }

    pub fn qmax(&self) -> u32 {
        self.qmax
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, at: &CountKey) -> BigInt {
        self.coeffs.get(at).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CountKey, &BigInt)> {
        self.coeffs.iter()
    }

    /// Coefficients of `q^0..=q^qmax`, summed over the color exponents.
    pub fn q_coefficients(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.qmax as usize + 1];
        for (k, c) in &self.coeffs {
            out[k.n as usize] += c;
        }
        out
    }

    /// The smallest power of `q` with a non-zero coefficient.
    pub fn lowest_q(&self) -> Option<u64> {
        self.coeffs.keys().map(|k| k.n).min()
    }

    fn add_term(&mut self, at: CountKey, coef: BigInt) {
        if at.n > u64::from(self.qmax) || coef.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(at).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.coeffs.remove(&at);
        }
    }

    fn same_qmax(&self, other: &Self) -> Result<(), Error> {
        if self.qmax == other.qmax {
            Ok(())
        } else {
            Err(Error::QmaxMismatch(self.qmax, other.qmax))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.same_qmax(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            qmax: self.qmax,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.same_qmax(other)?;
        let mut out = Self::zero(self.qmax);
        for (kx, cx) in &self.coeffs {
            for (ky, cy) in &other.coeffs {
                let n = kx.n + ky.n;
                if n > u64::from(self.qmax) {
                    continue;
                }
                let at = key(kx.u + ky.u, kx.v + ky.v, kx.w + ky.w, kx.t + ky.t, n);
                out.add_term(at, cx * cy);
            }
        }
        Ok(out)
    }

    /// Multiplies by `q^n`.
    pub fn shift_q(&self, n: u64) -> Self {
        let mut out = Self::zero(self.qmax);
        for (k, c) in &self.coeffs {
            out.add_term(key(k.u, k.v, k.w, k.t, k.n + n), c.clone());
        }
        out
    }

    /// Only the terms whose key satisfies `keep`.
    pub fn restricted(&self, keep: impl Fn(&CountKey) -> bool) -> Self {
        TruncatedSeries {
            qmax: self.qmax,
            coeffs: self.coeffs.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn has_negative(&self) -> bool {
        self.coeffs.values().any(Signed::is_negative)
    }

    /// CSV with header `u,v,w,t,n,coef`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,w,t,n,coef\n");
        for (k, c) in &self.coeffs {
            out.push_str(&format!("{},{},{},{},{},{}\n", k.u, k.v, k.w, k.t, k.n, c));
        }
        out
    }

    /// Terms sorted by power of `q`, then with higher powers of `a`, `b`, `c`, `d` first.
    pub fn sorted_terms(&self) -> Vec<(CountKey, BigInt)> {
        let mut terms: Vec<(CountKey, BigInt)> = self.coeffs.iter().map(|(k, c)| (*k, c.clone())).collect();
        terms.sort_by_key(|(k, _)| (k.n, Reverse((k.u, k.v, k.w, k.t))));
        terms
    }
}

/// `coef·a^u b^v c^w d^t q^n`, leaving out zero exponents.
pub fn format_term(at: &CountKey, coef: &BigInt) -> String {
    let vars: Vec<String> = [("a", u64::from(at.u)), ("b", at.v.into()), ("c", at.w.into()), ("d", at.t.into()), ("q", at.n)]
        .into_iter()
        .filter(|&(_, e)| e > 0)
        .map(|(x, e)| if e == 1 { x.to_string() } else { format!("{x}^{e}") })
        .collect();
    if vars.is_empty() {
        coef.to_string()
    } else {
        format!("{coef}·{}", vars.join(" "))
    }
}

impl fmt::Display for TruncatedSeries {
    /// One term per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.sorted_terms().iter().map(|(k, c)| format_term(k, c)).collect();
        f.write_str(&lines.join("\n"))
    }
}

fn color_key(c: Color, m: u64) -> CountKey {
    let [u, v, w, t] = c.content();
    key(u, v, w, t, m)
}

/// `Π_{x in colors} Π_{m ≥ 1} (1 + x q^m)` up to `q^qmax`.
pub fn product_over(colors: &[Color], qmax: u32) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(qmax);
    for &c in colors {
        for m in 1..=u64::from(qmax) {
            let mut factor = TruncatedSeries::one(qmax);
            factor.add_term(color_key(c, m), BigInt::one());
            acc = acc.mul(&factor).expect("same truncation");
        }
    }
    acc
}

/// `(-aq;q)_∞ (-bq;q)_∞ (-cq;q)_∞ (-dq;q)_∞` up to `q^qmax`.
pub fn product_side(qmax: u32) -> TruncatedSeries {
    product_over(&PRIMARY, qmax)
}

/// `Σ_s q^{rs}` up to `q^qmax`.
fn geometric(r: u32, qmax: u32) -> TruncatedSeries {
    let mut geo = TruncatedSeries::zero(qmax);
    for e in (0..=u64::from(qmax)).step_by(r as usize) {
        geo.add_term(q_key(e), BigInt::one());
    }
    geo
}

/// `1/(q;q)_m` up to `q^qmax`, as the product of the geometric series `Σ_s q^{rs}` for `r = 1..=m`.
pub fn pochhammer_inv(m: u32, qmax: u32) -> TruncatedSeries {
    (1..=m).fold(TruncatedSeries::one(qmax), |acc, r| {
        acc.mul(&geometric(r, qmax)).expect("same truncation")
    })
}

/// `Σ count · a^u b^v c^w d^t q^n` over a count table.
pub fn series_from_counts(table: &CountTable, qmax: u32) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(qmax);
    for (k, c) in table.iter() {
        s.add_term(*k, BigInt::from(*c));
    }
    s
}

/// Numbers of parts of each color in one summand of the four-parameter identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ConstraintSolution {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub ab: u32,
    pub ac: u32,
    pub ad: u32,
    pub bc: u32,
    pub bd: u32,
    pub cd: u32,
    pub q: u32,
}

/// `T_n = n(n+1)/2`, with `T_{-1} = 0`.
pub fn triangular(n: i64) -> i64 {
    if n < 0 {
        0
    } else {
        n * (n + 1) / 2
    }
}

impl ConstraintSolution {
    /// `(i, j, k, l)`: total multiplicity of each of `a, b, c, d`.
    pub fn targets(&self) -> [u32; 4] {
        [
            self.a + self.ab + self.ac + self.ad + self.q,
            self.b + self.ab + self.bc + self.bd + self.q,
            self.c + self.ac + self.bc + self.cd + self.q,
            self.d + self.ad + self.bd + self.cd + self.q,
        ]
    }

    /// Number of primary and secondary parts.
    pub fn tau(&self) -> u32 {
        self.a + self.b + self.c + self.d + self.ab + self.ac + self.ad + self.bc + self.bd + self.cd
    }

    pub fn variables(&self) -> [u32; 11] {
        [
            self.a, self.b, self.c, self.d, self.ab, self.ac, self.ad, self.bc, self.bd, self.cd, self.q,
        ]
    }

    /// `T_τ + Σ T_X (secondary X) - BC - BD - CD + 4 T_{Q-1} + 3Q + 2Qτ`.
    pub fn exponent(&self) -> u64 {
        let t = |x: u32| triangular(i64::from(x));
        let tau = i64::from(self.tau());
        let q = i64::from(self.q);
        let e = triangular(tau) + t(self.ab) + t(self.ac) + t(self.ad) + t(self.bc) + t(self.bd) + t(self.cd)
            - i64::from(self.bc + self.bd + self.cd)
            + 4 * triangular(q - 1)
            + 3 * q
            + 2 * q * tau;
        u64::try_from(e).expect("exponent is non-negative")
    }

    /// `(1 - q^A) + q^{A+BC+BD+Q} (1 - q^B) + q^{A+BC+BD+Q+B+CD}`.
    pub fn bracket(&self, qmax: u32) -> TruncatedSeries {
        let s1 = u64::from(self.a + self.bc + self.bd + self.q);
        let s2 = s1 + u64::from(self.b + self.cd);
        let mut out = TruncatedSeries::one(qmax);
        out.add_term(q_key(self.a.into()), BigInt::from(-1));
        out.add_term(q_key(s1), BigInt::one());
        out.add_term(q_key(s1 + u64::from(self.b)), BigInt::from(-1));
        out.add_term(q_key(s2), BigInt::one());
        out
    }
}

/// Every solution of the four linear constraints for `(i, j, k, l)`: the
/// quaternary count first, then the six secondary counts; the primary counts
/// are then forced.
pub fn constraint_solutions(i: u32, j: u32, k: u32, l: u32) -> Vec<ConstraintSolution> {
    let mut out = Vec::new();
    for q in 0..=i.min(j).min(k).min(l) {
        let [i1, j1, k1, l1] = [i - q, j - q, k - q, l - q];
        for ab in 0..=i1.min(j1) {
            for ac in 0..=(i1 - ab).min(k1) {
                for ad in 0..=(i1 - ab - ac).min(l1) {
                    for bc in 0..=(j1 - ab).min(k1 - ac) {
                        for bd in 0..=(j1 - ab - bc).min(l1 - ad) {
                            for cd in 0..=(k1 - ac - bc).min(l1 - ad - bd) {
                                out.push(ConstraintSolution {
                                    a: i1 - ab - ac - ad,
                                    b: j1 - ab - bc - bd,
                                    c: k1 - ac - bc - cd,
                                    d: l1 - ad - bd - cd,
                                    ab,
                                    ac,
                                    ad,
                                    bc,
                                    bd,
                                    cd,
                                    q,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Memoized `1/(q)_m` for one truncation.
struct Pochhammers {
    qmax: u32,
    cache: Vec<TruncatedSeries>,
}

impl Pochhammers {
    fn new(qmax: u32) -> Self {
        Pochhammers {
            qmax,
            cache: vec![TruncatedSeries::one(qmax)],
        }
    }

    fn get(&mut self, m: u32) -> &TruncatedSeries {
        while self.cache.len() <= m as usize {
            let r = self.cache.len() as u32;
            let next = self.cache[r as usize - 1]
                .mul(&geometric(r, self.qmax))
                .expect("same truncation");
            self.cache.push(next);
        }
        &self.cache[m as usize]
    }
}

/// Left side of the four-parameter identity at `(i, j, k, l)`.
pub fn identity_lhs(i: u32, j: u32, k: u32, l: u32, qmax: u32) -> TruncatedSeries {
    let mut poch = Pochhammers::new(qmax);
    let mut total = TruncatedSeries::zero(qmax);
    for s in constraint_solutions(i, j, k, l) {
        let e = s.exponent();
        if e > u64::from(qmax) {
            continue;
        }
        let mut term = s.bracket(qmax).shift_q(e);
        for m in s.variables() {
            term = term.mul(poch.get(m)).expect("same truncation");
        }
        total = total.add(&term).expect("same truncation");
    }
    total
}

/// Right side `q^{T_i+T_j+T_k+T_l} / ((q)_i (q)_j (q)_k (q)_l)`.
pub fn identity_rhs(i: u32, j: u32, k: u32, l: u32, qmax: u32) -> TruncatedSeries {
    let mut poch = Pochhammers::new(qmax);
    let e: i64 = [i, j, k, l].iter().map(|&x| triangular(i64::from(x))).sum();
    let mut out = TruncatedSeries::one(qmax).shift_q(e as u64);
    for m in [i, j, k, l] {
        out = out.mul(poch.get(m)).expect("same truncation");
    }
    out
}

/// The first coefficient where the two sides of the identity differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub ijkl: [u32; 4],
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub max_ijkl: u32,
    pub qmax: u32,
    pub tuples: usize,
    pub solutions: usize,
    pub failure: Option<IdentityFailure>,
    /// `Σ a^i b^j c^k d^l · lhs(i, j, k, l)` equals the product side on those exponents.
    pub product_agrees: bool,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.product_agrees
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "i,j,k,l <= {}, q^{}: {} tuples, {} constraint solutions",
            self.max_ijkl, self.qmax, self.tuples, self.solutions
        )?;
        match &self.failure {
            None => writeln!(f, "lhs = rhs for every tuple")?,
            Some(x) => writeln!(
                f,
                "lhs != rhs at (i,j,k,l) = ({},{},{},{}), q^{}: lhs {} rhs {}",
                x.ijkl[0], x.ijkl[1], x.ijkl[2], x.ijkl[3], x.n, x.lhs, x.rhs
            )?,
        }
        writeln!(
            f,
            "weighted sum {} the product side",
            if self.product_agrees { "matches" } else { "does not match" }
        )?;
        write!(f, "{}", if self.passed() { "pass" } else { "FAIL" })
    }
}

fn first_difference(x: &TruncatedSeries, y: &TruncatedSeries) -> Option<(u64, BigInt, BigInt)> {
    let (cx, cy) = (x.q_coefficients(), y.q_coefficients());
    cx.into_iter()
        .zip(cy)
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(n, (a, b))| (n as u64, a, b))
}

/// Checks the identity for every `0 ≤ i, j, k, l ≤ max_ijkl` up to `q^qmax`.
pub fn verify_identity(max_ijkl: u32, qmax: u32) -> IdentityReport {
    let range = 0..=max_ijkl;
    let tuples: Vec<[u32; 4]> = range
        .clone()
        .flat_map(|i| range.clone().flat_map(move |j| (0..=max_ijkl).flat_map(move |k| (0..=max_ijkl).map(move |l| [i, j, k, l]))))
        .collect();
    let results: Vec<([u32; 4], usize, TruncatedSeries, TruncatedSeries)> = tuples
        .par_iter()
        .map(|&[i, j, k, l]| {
            let count = constraint_solutions(i, j, k, l).len();
            (
                [i, j, k, l],
                count,
                identity_lhs(i, j, k, l, qmax),
                identity_rhs(i, j, k, l, qmax),
            )
        })
        .collect();
    let mut failure = None;
    let mut weighted = TruncatedSeries::zero(qmax);
    for (ijkl, _, lhs, rhs) in &results {
        if failure.is_none() {
            if let Some((n, a, b)) = first_difference(lhs, rhs) {
                failure = Some(IdentityFailure {
                    ijkl: *ijkl,
                    n,
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                });
            }
        }
        for (k, c) in lhs.terms() {
            weighted.add_term(key(ijkl[0], ijkl[1], ijkl[2], ijkl[3], k.n), c.clone());
        }
    }
    let product = product_side(qmax).restricted(|k| k.u.max(k.v).max(k.w).max(k.t) <= max_ijkl);
    IdentityReport {
        max_ijkl,
        qmax,
        tuples: results.len(),
        solutions: results.iter().map(|r| r.1).sum(),
        failure,
        product_agrees: weighted == product,
    }
}

/// Product side minus the generating function of each count table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDiff {
    pub qmax: u32,
    pub diffs: Vec<(String, TruncatedSeries)>,
}

impl ProductDiff {
    pub fn passed(&self) -> bool {
        self.diffs.iter().all(|(_, d)| d.is_zero())
    }
}

impl fmt::Display for ProductDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, d) in &self.diffs {
            if d.is_zero() {
                writeln!(f, "product - {name}: empty")?;
            } else {
                writeln!(f, "product - {name}:")?;
                writeln!(f, "{d}")?;
            }
        }
        write!(f, "{}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Compares `Π_{x in colors} (-xq;q)_∞` with each named count table up to `q^qmax`.
pub fn compare_with_product(colors: &[Color], qmax: u32, tables: &[(&str, &CountTable)]) -> ProductDiff {
    let product = product_over(colors, qmax);
    let diffs = tables
        .iter()
        .map(|(name, t)| {
            let gf = series_from_counts(t, qmax);
            (name.to_string(), product.sub(&gf).expect("same truncation"))
        })
        .collect();
    ProductDiff { qmax, diffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_series(coeffs: &[i64], qmax: u32) -> TruncatedSeries {
        TruncatedSeries::from_q_coeffs(coeffs, qmax)
    }

    #[test]
    fn mul_examples() {
        let qa = TruncatedSeries::monomial(BigInt::one(), key(1, 0, 0, 0, 1), 2);
        let qb = TruncatedSeries::monomial(BigInt::one(), key(0, 1, 0, 0, 1), 2);
        let x = TruncatedSeries::one(2).add(&qa).unwrap();
        let y = TruncatedSeries::one(2).add(&qb).unwrap();
        let p = x.mul(&y).unwrap();
        assert_eq!(p.to_string(), "1\n1·a q\n1·b q\n1·a b q^2");
        assert_eq!(x.mul(&TruncatedSeries::one(2)).unwrap(), x);
        let one_q = q_series(&[1, 1], 1);
        assert_eq!(one_q.mul(&one_q).unwrap(), q_series(&[1, 2], 1));
    }

    #[test]
    fn qmax_mismatch_is_an_error() {
        let x = TruncatedSeries::one(2);
        let y = TruncatedSeries::one(3);
        assert_eq!(x.mul(&y), Err(Error::QmaxMismatch(2, 3)));
        assert_eq!(x.add(&y), Err(Error::QmaxMismatch(2, 3)));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let x = q_series(&[1, 1], 3);
        assert!(x.sub(&x).unwrap().is_empty());
    }

    #[test]
    fn product_examples() {
        let p1 = product_side(1);
        assert_eq!(p1.to_string(), "1\n1·a q\n1·b q\n1·c q\n1·d q");
        let p2 = product_side(2);
        let q2: Vec<(CountKey, BigInt)> = p2.sorted_terms().into_iter().filter(|(k, _)| k.n == 2).collect();
        assert_eq!(q2.len(), 10);
        assert!(q2.iter().all(|(_, c)| c.is_one()));
        assert!(p2.coefficient(&key(2, 0, 0, 0, 2)).is_zero());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_inv(0, 3), TruncatedSeries::one(3));
        assert_eq!(pochhammer_inv(1, 3), q_series(&[1, 1, 1, 1], 3));
        assert_eq!(pochhammer_inv(2, 3), q_series(&[1, 1, 2, 2], 3));
        let mut cache = Pochhammers::new(12);
        for m in 0..5 {
            assert_eq!(cache.get(m).clone(), pochhammer_inv(m, 12));
        }
    }

    #[test]
    fn identity_base_cases() {
        assert_eq!(identity_lhs(0, 0, 0, 0, 6), TruncatedSeries::one(6));
        assert_eq!(identity_rhs(0, 0, 0, 0, 6), TruncatedSeries::one(6));
        let expect = q_series(&[0, 1, 1, 1, 1, 1, 1], 6);
        assert_eq!(identity_lhs(1, 0, 0, 0, 6), expect);
        assert_eq!(identity_rhs(1, 0, 0, 0, 6), expect);
        assert_eq!(identity_lhs(1, 1, 0, 0, 10), identity_rhs(1, 1, 0, 0, 10));
    }

    #[test]
    fn constraint_solutions_for_one_one() {
        // a quaternary part would also need k = l = 1
        let sols = constraint_solutions(1, 1, 0, 0);
        assert_eq!(sols.len(), 2);
        assert!(sols.contains(&ConstraintSolution { a: 1, b: 1, ..Default::default() }));
        assert!(sols.contains(&ConstraintSolution { ab: 1, ..Default::default() }));
        for s in constraint_solutions(2, 3, 1, 2) {
            assert_eq!(s.targets(), [2, 3, 1, 2]);
        }
    }

    #[test]
    fn small_identity_sweep() {
        let r = verify_identity(1, 15);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn term_format() {
        assert_eq!(format_term(&key(2, 0, 1, 0, 5), &BigInt::from(-3)), "-3·a^2 c q^5");
        assert_eq!(format_term(&key(0, 0, 0, 0, 0), &BigInt::from(7)), "7");
    }
}
