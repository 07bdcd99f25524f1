//! Property suites shared by the `properties` and `acceptance` targets.
//! Each returns the first counterexample as an error string.

#![allow(dead_code)]

use std::collections::HashSet;
use std::hash::Hash;

use colorpart::bressoud::{phi, psi};
use colorpart::color::{Color, PRIMARY, RANKED, SECONDARY};
use colorpart::enumerate::{gen_e1, gen_e2, gen_o, gen_quaternary, generate};
use colorpart::order::{delta, gg, lex_gt, DeltaTable};
use colorpart::part::{alpha, beta, combine, part, ColoredPart};
use colorpart::partition::{format_sequence, is_member, stats, Family};
use colorpart::qseries::{identity_lhs, identity_rhs, product_side, triangular};
use colorpart::quaternary::{is_pattern, to_quaternary};

pub type Suite = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn sq(p: &[ColoredPart]) -> String {
    format_sequence(p)
}

fn lex(x: &ColoredPart, y: &ColoredPart) -> bool {
    lex_gt(x, y).expect("ranked colors")
}

fn gt(x: &ColoredPart, y: &ColoredPart) -> bool {
    gg(x, y).expect("ranked colors")
}

/// `≻`, the equal-size color chain, α/β shifts and recombination, and `≫` against the relaxed table.
pub fn order_and_halves() -> Suite {
    for s in 2..=6 {
        for (i, &lo) in RANKED.iter().enumerate() {
            for &hi in &RANKED[i + 1..] {
                ensure!(lex(&part(s, hi), &part(s, lo)), "{s}_{hi} ⊁ {s}_{lo}");
                ensure!(!lex(&part(s, lo), &part(s, hi)), "{s}_{lo} ≻ {s}_{hi}");
            }
        }
    }
    for &c in &SECONDARY {
        for k in 2..=200 {
            let (s, s1) = (part(k, c), part(k + 1, c));
            let (a, b) = (alpha(&s).unwrap(), beta(&s).unwrap());
            ensure!(alpha(&s1).unwrap() == b.shifted(1).unwrap(), "α({s1}) != β({s}) + 1");
            ensure!(beta(&s1).unwrap() == a, "β({s1}) != α({s})");
            ensure!(a.size() + b.size() == k, "halves of {s} do not add up");
            ensure!(Color::product(a.color(), b.color()) == Some(c), "halves of {s} do not recombine");
            ensure!(combine(&a, &b).unwrap() == s, "combine(α, β) != {s}");
        }
    }
    for &p in &RANKED {
        for &q in &RANKED {
            let d = i64::from(delta(p, q, DeltaTable::Relaxed).unwrap());
            for diff in -3i64..=3 {
                let (x, y) = (part((10 + diff) as u64, p), part(10, q));
                ensure!(gt(&x, &y) == (diff >= d), "{x} ≫ {y} disagrees with Δ = {d}");
            }
        }
    }
    Ok(())
}

/// Primary against secondary: `l_p ≫̸ k_q ⟺ (k+1)_q ≫ (l−1)_p` and
/// `l_p ≫ α(k_q) ⟺ β((k+1)_q) ⊁ (l−1)_p`, for every size where all parts exist.
pub fn primary_secondary_ordering(max: u64) -> Suite {
    for &p in &PRIMARY {
        for &q in &SECONDARY {
            for l in 2..=max {
                for k in 2..=max {
                    let (lp, kq, k1q, l1p) = (part(l, p), part(k, q), part(k + 1, q), part(l - 1, p));
                    ensure!(
                        !gt(&lp, &kq) == gt(&k1q, &l1p),
                        "{lp} ≫̸ {kq} but not {k1q} ≫ {l1p} (or the converse)"
                    );
                    let left = gt(&lp, &alpha(&kq).unwrap());
                    let right = !lex(&beta(&k1q).unwrap(), &l1p);
                    ensure!(left == right, "{lp} ≫ α({kq}) is {left}, β({k1q}) ⊁ {l1p} is {right}");
                }
            }
        }
    }
    Ok(())
}

/// Secondary against secondary: the relaxed table entry is the least `k − l` with
/// `β(k_p) ≻ α(l_q)`, plus the two crossing implications.
pub fn secondary_ordering(max: u64) -> Suite {
    for &p in &SECONDARY {
        for &q in &SECONDARY {
            let mut least: Option<i64> = None;
            for k in 2..=max {
                for l in 2..=max {
                    let (kp, lq) = (part(k, p), part(l, q));
                    let (bk, al, bl) = (beta(&kp).unwrap(), alpha(&lq).unwrap(), beta(&lq).unwrap());
                    let d = k as i64 - l as i64;
                    if lex(&bk, &al) {
                        least = Some(least.map_or(d, |m| m.min(d)));
                    }
                    if lex(&bk, &bl) {
                        let k1p = part(k + 1, p);
                        ensure!(gt(&k1p, &lq), "β({kp}) ≻ β({lq}) but {k1p} ≫̸ {lq}");
                    }
                    if gt(&kp, &lq) && !lex(&bk, &al) {
                        ensure!(k >= 3, "{kp} ≫ {lq}, β({kp}) ⊁ α({lq}) and {kp} has no predecessor");
                        let km = part(k - 1, p);
                        let (am, bm) = (alpha(&km).unwrap(), beta(&km).unwrap());
                        let a1 = al.shifted(1).unwrap();
                        ensure!(
                            gt(&a1, &am) && lex(&am, &bm) && lex(&bm, &bl),
                            "{kp} ≫ {lq}: neither β({kp}) ≻ α({lq}) nor α+1 ≫ α({km}) ≻ β({km}) ≻ β({lq})"
                        );
                    }
                }
            }
            let want = i64::from(delta(p, q, DeltaTable::Relaxed).unwrap());
            ensure!(least == Some(want), "Δ({p},{q}) = {want}, least half gap {least:?}");
        }
    }
    Ok(())
}

fn succeq(x: &ColoredPart, y: &ColoredPart) -> bool {
    x == y || lex(x, y)
}

/// On every `≫`-ordered sequence up to `max_n`: the two-step gap around a
/// secondary part, and the local characterization of `E1`.
pub fn reversibility(max_n: u64) -> Suite {
    let (ad, bc, cd, ab) = (Color::Ad, Color::Bc, Color::Cd, Color::Ab);
    for n in 0..=max_n {
        for nu in generate(Family::E, n) {
            let mut local_ok = true;
            for i in 0..nu.len().saturating_sub(2) {
                let (x, y, z) = (nu[i], nu[i + 1], nu[i + 2]);
                let z2 = z.shifted(2).unwrap();
                let pair = (x.color(), y.color());
                if y.is_secondary() && z.is_primary() && pair != (ad, bc) && pair != (cd, ab) {
                    ensure!(lex(&x, &z2), "{}: {x} ⊁ {z2} at index {i}", sq(&nu));
                }
                if is_pattern(&x, &y) && !(x == part(3, ad) && y == part(2, bc)) && !succeq(&x, &z2) {
                    local_ok = false;
                }
            }
            ensure!(
                is_member(&nu, Family::E1) == local_ok,
                "{}: E1 membership {} but local test {local_ok}",
                sq(&nu),
                is_member(&nu, Family::E1)
            );
        }
    }
    Ok(())
}

/// `E2 ⊆ E1`, and `stats` adds over concatenation.
pub fn families_and_stats(max_n: u64) -> Suite {
    for n in 0..=max_n {
        for nu in gen_e2(n) {
            ensure!(is_member(&nu, Family::E1), "{} is in E2 but not E1", sq(&nu));
        }
    }
    let small: Vec<Vec<ColoredPart>> = (0..=6).flat_map(|n| generate(Family::E, n)).collect();
    for x in &small {
        for y in &small {
            let joined: Vec<ColoredPart> = x.iter().chain(y).copied().collect();
            ensure!(stats(&joined) == stats(x) + stats(y), "stats not additive on {} + {}", sq(x), sq(y));
        }
    }
    Ok(())
}

/// Conservation per event, the `t²` event bound, and `inverse(phi trace) = psi trace`.
pub fn machine_traces(max_n: u64) -> Suite {
    for n in 0..=max_n {
        for lambda in gen_o(n) {
            let (nu, forward) = phi(&lambda).map_err(|e| format!("phi({}): {e}", sq(&lambda)))?;
            let (back, backward) = psi(&nu).map_err(|e| format!("psi({}): {e}", sq(&nu)))?;
            ensure!(back == lambda, "psi(phi({})) = {}", sq(&lambda), sq(&back));
            ensure!(forward.len() <= lambda.len().pow(2), "{} takes {} events", sq(&lambda), forward.len());
            ensure!(backward.len() <= nu.len().pow(2), "{} takes {} events back", sq(&nu), backward.len());
            for e in forward.events.iter().chain(&backward.events) {
                ensure!(stats(&e.before) == stats(&e.after), "event at {} changes stats", e.index);
            }
            ensure!(forward.inverse() == backward, "trace of {} is not reversed by psi", sq(&lambda));
        }
    }
    Ok(())
}

/// Patterns never overlap inside `E1`, and every image obeys the gap and bound rules,
/// with the `2s + 3` bound reached only when the residual holds `1_a`.
pub fn quaternary_images(max_n: u64) -> Suite {
    let one_a = part(1, Color::A);
    let mut tight_with_one_a = false;
    for n in 0..=max_n {
        for nu in gen_e1(n) {
            for i in 0..nu.len().saturating_sub(2) {
                ensure!(
                    !(is_pattern(&nu[i], &nu[i + 1]) && is_pattern(&nu[i + 1], &nu[i + 2])),
                    "{}: patterns overlap at {i}",
                    sq(&nu)
                );
            }
            let qd = to_quaternary(&nu).map_err(|e| format!("{}: {e}", sq(&nu)))?;
            let sizes = qd.quat_sizes();
            ensure!(sizes.windows(2).all(|w| w[0] >= w[1] + 4), "{qd}: quaternary gap below 4");
            ensure!(is_member(&qd.residual, Family::E2), "{qd}: residual not in E2");
            if let Some(&least) = sizes.last() {
                let s = qd.residual.len() as u64;
                let has_one_a = qd.residual.contains(&one_a);
                ensure!(least >= 2 * s + 4 - u64::from(has_one_a), "{qd}: smallest quaternary part too small");
                if least == 2 * s + 3 {
                    ensure!(has_one_a, "{qd}: 2s+3 reached without 1_a");
                    tight_with_one_a = true;
                }
            }
        }
    }
    ensure!(max_n < 12 || tight_with_one_a, "the bound 2s+3 is never reached up to {max_n}");
    Ok(())
}

fn distinct<T: Eq + Hash>(items: &[T]) -> bool {
    items.iter().collect::<HashSet<_>>().len() == items.len()
}

pub fn generators_distinct(max_n: u64) -> Suite {
    for n in 0..=max_n {
        for f in [Family::O, Family::E, Family::E1, Family::E2] {
            ensure!(distinct(&generate(f, n)), "{f} at n = {n} has repeats");
        }
        ensure!(distinct(&gen_quaternary(n)), "quaternary at n = {n} has repeats");
    }
    Ok(())
}

/// Leading exponent of each summed side and sign of the product sides.
pub fn series_shape(max_ijkl: u32, qmax: u32) -> Suite {
    for i in 0..=max_ijkl {
        for j in 0..=max_ijkl {
            for k in 0..=max_ijkl {
                for l in 0..=max_ijkl {
                    let lead = [i, j, k, l].iter().map(|&x| triangular(x as i64)).sum::<i64>() as u64;
                    let lhs = identity_lhs(i, j, k, l, qmax);
                    let rhs = identity_rhs(i, j, k, l, qmax);
                    ensure!(lhs.lowest_q() == Some(lead), "lhs({i},{j},{k},{l}) starts at {:?}", lhs.lowest_q());
                    ensure!(rhs.lowest_q() == Some(lead), "rhs({i},{j},{k},{l}) starts at {:?}", rhs.lowest_q());
                    ensure!(!rhs.has_negative(), "rhs({i},{j},{k},{l}) has a negative coefficient");
                }
            }
        }
    }
    ensure!(!product_side(qmax).has_negative(), "product side has a negative coefficient");
    Ok(())
}
