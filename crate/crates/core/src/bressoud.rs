//! The Bressoud-style machines between `O` and `E1`.
//!
//! [`phi`] merges troublesome pairs of primary parts into secondary parts and
//! crosses each new secondary part leftward over primary parts that do not
//! dominate it under `≫`. [`psi`] runs the mirror image: the rightmost
//! secondary part crosses rightward while its lower half does not dominate its
//! successor, then splits into its two halves.
//!
//! Both machines record every step as a [`TraceEvent`]; a trace can be replayed
//! forward or rewound, and the inverse of a `phi` trace is the `psi` trace of
//! its output.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::order::{chi, gg, lex_gt};
use crate::part::{beta, combine, split_halves, ColoredPart};
use crate::partition::{format_sequence, is_member, validate, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A troublesome pair becomes one secondary part.
    Merge,
    /// `(primary, secondary) -> (secondary + 1, primary - 1)`.
    CrossUp,
    /// `(secondary, primary) -> (primary + 1, secondary - 1)`.
    CrossDown,
    /// A secondary part becomes its upper and lower halves.
    Split,
}

impl EventKind {
    pub fn inverse(self) -> Self {
        match self {
            EventKind::Merge => EventKind::Split,
            EventKind::Split => EventKind::Merge,
            EventKind::CrossUp => EventKind::CrossDown,
            EventKind::CrossDown => EventKind::CrossUp,
        }
    }
}

/// One reversible machine step acting on `before.len()` parts starting at `index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub kind: EventKind,
    pub index: usize,
    pub before: Vec<ColoredPart>,
    pub after: Vec<ColoredPart>,
}

impl TraceEvent {
    pub fn inverse(&self) -> TraceEvent {
        TraceEvent {
            kind: self.kind.inverse(),
            index: self.index,
            before: self.after.clone(),
            after: self.before.clone(),
        }
    }

    /// Applies the event in place; `false` if the buffer does not hold `before` at `index`.
    pub fn apply(&self, buf: &mut Vec<ColoredPart>) -> bool {
        let end = self.index + self.before.len();
        if end > buf.len() || buf[self.index..end] != self.before[..] {
            return false;
        }
        buf.splice(self.index..end, self.after.iter().copied());
        true
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Every intermediate sequence, starting with `start` itself.
    pub fn states(&self, start: &[ColoredPart]) -> Result<Vec<Vec<ColoredPart>>, Error> {
        let mut buf = start.to_vec();
        let mut out = vec![buf.clone()];
        for (i, e) in self.events.iter().enumerate() {
            if !e.apply(&mut buf) {
                return Err(Error::Replay(i));
            }
            out.push(buf.clone());
        }
        Ok(out)
    }

    pub fn replay(&self, start: &[ColoredPart]) -> Result<Vec<ColoredPart>, Error> {
        let mut buf = start.to_vec();
        for (i, e) in self.events.iter().enumerate() {
            if !e.apply(&mut buf) {
                return Err(Error::Replay(i));
            }
        }
        Ok(buf)
    }

    /// Undoes the trace starting from its final sequence.
    pub fn rewind(&self, end: &[ColoredPart]) -> Result<Vec<ColoredPart>, Error> {
        self.inverse().replay(end)
    }

    /// Reversed event order with every event inverted.
    pub fn inverse(&self) -> Trace {
        Trace {
            events: self.events.iter().rev().map(TraceEvent::inverse).collect(),
        }
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        self.events
            .iter()
            .map(|e| serde_json::to_string(e).expect("events serialize") + "\n")
            .collect()
    }

    pub fn from_jsonl(text: &str) -> Result<Trace, Error> {
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<_, _>>()?;
        Ok(Trace { events })
    }
}

/// Output, trace, and the event counts at which control passed from Step 2 back to Step 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineRun {
    pub output: Vec<ColoredPart>,
    pub trace: Trace,
    pub passages: Vec<usize>,
}

fn require(parts: &[ColoredPart], family: Family) -> Result<(), Error> {
    validate(parts, family)
        .map(|_| ())
        .map_err(|violation| Error::NotInFamily { family, violation })
}

fn shift(p: &ColoredPart, delta: i64) -> Result<ColoredPart, Error> {
    p.shifted(delta)
        .map_err(|_| Error::Invariant(format!("crossing moved {p} out of range")))
}

struct Recorder {
    buf: Vec<ColoredPart>,
    events: Vec<TraceEvent>,
    cap: usize,
}

impl Recorder {
    fn new(input: &[ColoredPart]) -> Self {
        Recorder {
            buf: input.to_vec(),
            events: Vec::new(),
            cap: input.len() * input.len(),
        }
    }

    fn record(&mut self, kind: EventKind, index: usize, width: usize, after: Vec<ColoredPart>) -> Result<(), Error> {
        let event = TraceEvent {
            kind,
            index,
            before: self.buf[index..index + width].to_vec(),
            after,
        };
        event.apply(&mut self.buf);
        self.events.push(event);
        if self.events.len() > self.cap {
            return Err(Error::Invariant(format!(
                "more than {} events on an input of {} parts",
                self.cap,
                (self.cap as f64).sqrt() as usize
            )));
        }
        Ok(())
    }
}

fn troublesome_at(buf: &[ColoredPart]) -> Result<Option<usize>, Error> {
    for (i, w) in buf.windows(2).enumerate() {
        if w[0].is_primary() && w[1].is_primary() && lex_gt(&w[0], &w[1])? && !gg(&w[0], &w[1])? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn crossing_up_at(buf: &[ColoredPart]) -> Result<Option<usize>, Error> {
    for (i, w) in buf.windows(2).enumerate() {
        if w[0].is_primary() && w[1].is_secondary() && !gg(&w[0], &w[1])? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Runs `phi` on an input already known to be in `O`.
fn run_phi(input: &[ColoredPart]) -> Result<MachineRun, Error> {
    let mut rec = Recorder::new(input);
    let mut passages = Vec::new();
    // Step 1
    while let Some(i) = troublesome_at(&rec.buf)? {
        let merged = combine(&rec.buf[i], &rec.buf[i + 1])?;
        rec.record(EventKind::Merge, i, 2, vec![merged])?;
        // Step 2, rescanning from the front after every crossing
        while let Some(j) = crossing_up_at(&rec.buf)? {
            let (p, s) = (rec.buf[j], rec.buf[j + 1]);
            let after = vec![shift(&s, 1)?, shift(&p, -1)?];
            rec.record(EventKind::CrossUp, j, 2, after)?;
        }
        passages.push(rec.events.len());
    }
    Ok(MachineRun {
        output: rec.buf,
        trace: Trace { events: rec.events },
        passages,
    })
}

/// Runs `psi` on an input already known to be in `E1`.
fn run_psi(input: &[ColoredPart]) -> Result<MachineRun, Error> {
    let mut rec = Recorder::new(input);
    let mut passages = Vec::new();
    while let Some(mut i) = rec.buf.iter().rposition(ColoredPart::is_secondary) {
        // Step 1
        while i + 1 < rec.buf.len() && rec.buf[i + 1].is_primary() && !lex_gt(&beta(&rec.buf[i])?, &rec.buf[i + 1])? {
            let (s, p) = (rec.buf[i], rec.buf[i + 1]);
            let after = vec![shift(&p, 1)?, shift(&s, -1)?];
            rec.record(EventKind::CrossDown, i, 2, after)?;
            i += 1;
        }
        // Step 2
        let (up, low) = split_halves(&rec.buf[i])?;
        rec.record(EventKind::Split, i, 1, vec![up, low])?;
        passages.push(rec.events.len());
    }
    Ok(MachineRun {
        output: rec.buf,
        trace: Trace { events: rec.events },
        passages,
    })
}

/// Maps a partition of `O` to `E1`.
pub fn phi(lambda: &[ColoredPart]) -> Result<(Vec<ColoredPart>, Trace), Error> {
    require(lambda, Family::O)?;
    let run = run_phi(lambda)?;
    Ok((run.output, run.trace))
}

/// Maps a partition of `E1` back to `O`.
pub fn psi(nu: &[ColoredPart]) -> Result<(Vec<ColoredPart>, Trace), Error> {
    require(nu, Family::E1)?;
    let run = run_psi(nu)?;
    Ok((run.output, run.trace))
}

pub fn phi_run(lambda: &[ColoredPart]) -> Result<MachineRun, Error> {
    require(lambda, Family::O)?;
    run_phi(lambda)
}

pub fn psi_run(nu: &[ColoredPart]) -> Result<MachineRun, Error> {
    require(nu, Family::E1)?;
    run_psi(nu)
}

/// `parts` with its rightmost secondary part written as `α+β`, the part `psi` acts on next.
pub fn format_with_halves(parts: &[ColoredPart]) -> String {
    let active = parts.iter().rposition(|p| p.is_secondary());
    parts
        .iter()
        .enumerate()
        .map(|(i, p)| match split_halves(p) {
            Ok((a, b)) if Some(i) == active => format!("{a}+{b}"),
            _ => p.to_string(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// The sequence at a passage, cut into the settled prefix `gamma` and the active suffix `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub gamma: Vec<ColoredPart>,
    pub mu: Vec<ColoredPart>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedRun {
    pub output: Vec<ColoredPart>,
    pub trace: Trace,
    pub snapshots: Vec<Snapshot>,
}

struct ClauseCheck {
    machine: &'static str,
    passage: usize,
}

impl ClauseCheck {
    fn ensure(&self, ok: bool, clause: u8, detail: impl FnOnce() -> String) -> Result<(), Error> {
        if ok {
            Ok(())
        } else {
            Err(Error::Clause {
                machine: self.machine,
                passage: self.passage,
                clause,
                detail: detail(),
            })
        }
    }
}

fn secondary_count(parts: &[ColoredPart]) -> usize {
    parts.iter().filter(|p| p.is_secondary()).count()
}

/// `phi` with the passage invariants asserted.
///
/// At the `u`-th passage the sequence is `gamma, mu` where `gamma` ends at its
/// `u`-th secondary part, `gamma` is in `E1`, `mu` is in `O`, the last part of
/// `gamma` dominates the first part of `mu` under `≫`, each `gamma` extends the
/// previous one, and `mu` shrinks by at least two parts per passage.
pub fn phi_checked(lambda: &[ColoredPart]) -> Result<CheckedRun, Error> {
    let run = phi_run(lambda)?;
    let states = run.trace.states(lambda)?;
    let mut snapshots: Vec<Snapshot> = Vec::new();
    for (u0, &at) in run.passages.iter().enumerate() {
        let u = u0 + 1;
        let check = ClauseCheck { machine: "phi", passage: u };
        let state = &states[at];
        let cut = state.iter().rposition(ColoredPart::is_secondary).map_or(0, |i| i + 1);
        let snap = Snapshot {
            gamma: state[..cut].to_vec(),
            mu: state[cut..].to_vec(),
        };
        check.ensure(is_member(&snap.gamma, Family::E1) && is_member(&snap.mu, Family::O), 0, || {
            format!("split ({}) | ({}) is not E1 x O", format_sequence(&snap.gamma), format_sequence(&snap.mu))
        })?;
        check.ensure(secondary_count(&snap.gamma) == u, 1, || {
            format!("prefix holds {} secondary parts", secondary_count(&snap.gamma))
        })?;
        if let (Some(l), Some(g)) = (snap.gamma.last(), snap.mu.first()) {
            let mut joined = snap.gamma.clone();
            joined.push(*g);
            check.ensure(gg(l, g)? && is_member(&joined, Family::E1), 2, || format!("{l} does not dominate {g}"))?;
        }
        let (prev_gamma, prev_mu_len) = match snapshots.last() {
            Some(prev) => (prev.gamma.as_slice(), prev.mu.len()),
            None => (&[][..], lambda.len()),
        };
        check.ensure(snap.gamma.starts_with(prev_gamma), 3, || "prefix not extended".to_string())?;
        check.ensure(snap.mu.len() + 2 <= prev_mu_len, 3, || {
            format!("suffix went from {} to {} parts", prev_mu_len, snap.mu.len())
        })?;
        snapshots.push(snap);
    }
    Ok(CheckedRun {
        output: run.output,
        trace: run.trace,
        snapshots,
    })
}

/// `psi` with the passage invariants asserted.
///
/// After the `u`-th split the sequence is `gamma, mu` where `gamma` ends with
/// the upper half just produced and `mu` starts with the lower half: `gamma` is
/// in `E1`, `mu` is in `O`, the two halves are consecutive for `≻`, each
/// `mu` extends the previous one on the left, and `gamma` holds one secondary
/// part fewer per passage.
pub fn psi_checked(nu: &[ColoredPart]) -> Result<CheckedRun, Error> {
    let run = psi_run(nu)?;
    let states = run.trace.states(nu)?;
    let initial_secondary = secondary_count(nu);
    let mut snapshots: Vec<Snapshot> = Vec::new();
    for (u0, &at) in run.passages.iter().enumerate() {
        let u = u0 + 1;
        let check = ClauseCheck { machine: "psi", passage: u };
        let split = &run.trace.events[at - 1];
        let state = &states[at];
        let snap = Snapshot {
            gamma: state[..=split.index].to_vec(),
            mu: state[split.index + 1..].to_vec(),
        };
        check.ensure(is_member(&snap.gamma, Family::E1) && is_member(&snap.mu, Family::O), 0, || {
            format!("split ({}) | ({}) is not E1 x O", format_sequence(&snap.gamma), format_sequence(&snap.mu))
        })?;
        let (l, g) = (snap.gamma[snap.gamma.len() - 1], snap.mu[0]);
        check.ensure(l.is_primary(), 1, || format!("{l} is not primary"))?;
        // consecutive for `≻`: the least size difference `≻` allows
        let least = chi(l.color().rank()? <= g.color().rank()?);
        let consecutive = lex_gt(&l, &g)? && l.size() as i64 - g.size() as i64 == least;
        check.ensure(consecutive, 2, || format!("{l} and {g} are not consecutive"))?;
        let prev_mu = snapshots.last().map_or(&[][..], |s| s.mu.as_slice());
        check.ensure(snap.mu.ends_with(prev_mu), 3, || "suffix not extended".to_string())?;
        check.ensure(secondary_count(&snap.gamma) + u == initial_secondary, 3, || {
            format!("prefix holds {} secondary parts", secondary_count(&snap.gamma))
        })?;
        snapshots.push(snap);
    }
    Ok(CheckedRun {
        output: run.output,
        trace: run.trace,
        snapshots,
    })
}
