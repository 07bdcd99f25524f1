use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use colorpart::bressoud::{format_with_halves, phi, psi, Trace};
use colorpart::corollary::verify_corollary;
use colorpart::enumerate::{
    count_a, count_b, count_family, count_upto, generate, verify_refined_counts, verify_specialization,
    Specialization,
};
use colorpart::partition::{format_sequence, parse_sequence, validate, PartitionJson};
use colorpart::qseries::{compare_with_product, format_term, verify_identity};
use colorpart::quaternary::{format_slots, from_quaternary_states, to_quaternary_bubbling, QuaternaryDecomposition};
use colorpart::registry::{checks, encoders, CheckParams};
use colorpart::color::PRIMARY;
use colorpart::{ColoredPart, Error, Family};

#[derive(Parser)]
#[command(name = "colorpart", version, about = "Bijections and identity checks for four-color partitions")]
struct Cli {
    /// Machine-readable output, including failures.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Transform {
    /// Comma-separated parts such as "4_d,4_c,1_a".
    #[arg(long)]
    input: String,
    /// Print every intermediate sequence.
    #[arg(long)]
    states: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Map a partition of O into E1.
    Phi {
        #[command(flatten)]
        t: Transform,
        /// Also print the step trace, one JSON object per line.
        #[arg(long)]
        trace: bool,
    },
    /// Map a partition of E1 back into O.
    Psi {
        #[command(flatten)]
        t: Transform,
        #[arg(long)]
        trace: bool,
    },
    /// Split an E1 partition into quaternary parts and an E2 residual.
    ToQuat {
        #[command(flatten)]
        t: Transform,
        /// Encoder name, see `checks` for the list.
        #[arg(long, default_value = "closed-form")]
        strategy: String,
    },
    /// Rebuild an E1 partition from "quats | residual", e.g. "22_abcd,11_abcd | 7_c,4_d".
    FromQuat {
        #[command(flatten)]
        t: Transform,
    },
    /// Check membership in a family.
    Validate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        input: String,
    },
    /// List every partition of n in a family.
    Enumerate {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "E1")]
        family: Family,
        /// Write the refined count table of the family at n to this file.
        #[arg(long)]
        csv: Option<String>,
    },
    /// A = B for every (u,v,w,t,n) with n <= max-n.
    VerifyTheorem {
        #[arg(long, default_value_t = 22)]
        max_n: u64,
        /// t0 (no d parts) or wt0 (no c or d parts), checked against the classical tables.
        #[arg(long)]
        specialize: Option<Specialization>,
    },
    /// The four-parameter q-series identity, coefficientwise.
    VerifyIdentity {
        #[arg(long, default_value_t = 3)]
        max_ijkl: u32,
        #[arg(long, default_value_t = 25)]
        qmax: u32,
    },
    /// First-kind and second-kind congruence partitions of n.
    VerifyCorollary {
        #[arg(long)]
        n: u64,
    },
    /// Product minus the generating functions of A and B; empty when they agree.
    Gf {
        #[arg(long, default_value_t = 20)]
        qmax: u32,
    },
    /// List the registered checks and encoders.
    Checks,
    /// Run one registered check.
    Check {
        name: String,
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long)]
        max_ijkl: Option<u32>,
        #[arg(long)]
        qmax: Option<u32>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        sweep: Option<u64>,
        #[arg(long)]
        listed: Option<u64>,
    },
}

/// What a command printed and whether the thing it checked held.
struct Outcome {
    text: String,
    json: Value,
    passed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, passed: true }
    }

    fn checked(passed: bool, text: String, json: Value) -> Self {
        Outcome { text, json, passed }
    }
}

/// Bad input is a usage error; anything else means an internal check failed.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::Clause { .. } | Error::Replay(_) | Error::QmaxMismatch(..) | Error::Overflow => 1,
        _ => 2,
    }
}

fn parts_json(parts: &[ColoredPart]) -> Value {
    serde_json::to_value(PartitionJson { parts: parts.to_vec() }).expect("parts serialize")
}

type Machine = fn(&[ColoredPart]) -> Result<(Vec<ColoredPart>, Trace), Error>;

fn machine(
    input: &str,
    states: bool,
    trace: bool,
    run: Machine,
    show: fn(&[ColoredPart]) -> String,
) -> Result<Outcome, Error> {
    let start = parse_sequence(input)?;
    let (out, tr) = run(&start)?;
    let chain: Vec<String> = tr.states(&start)?.iter().map(|s| show(s)).collect();
    let mut text = if states { chain.join("\n") } else { format_sequence(&out) } + "\n";
    if trace {
        text += &tr.to_jsonl();
    }
    let mut j = parts_json(&out);
    if states {
        j["states"] = json!(chain);
    }
    if trace {
        j["trace"] = serde_json::to_value(&tr.events)?;
    }
    Ok(Outcome::ok(text, j))
}

fn execute(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Phi { t, trace } => machine(&t.input, t.states, trace, phi, format_sequence),
        Command::Psi { t, trace } => machine(&t.input, t.states, trace, psi, format_with_halves),
        Command::ToQuat { t, strategy } => {
            let nu = parse_sequence(&t.input)?;
            let qd = encoders().get(&strategy)?.encode(&nu)?;
            let mut text = String::new();
            let mut j = serde_json::to_value(qd.to_json())?;
            if t.states {
                let mut chain = vec![format_sequence(&nu)];
                chain.extend(to_quaternary_bubbling(&nu)?.1.iter().map(|s| format_slots(s)));
                text += &(chain.join("\n") + "\n");
                j["states"] = json!(chain);
            }
            text += &format!("{qd}\n");
            Ok(Outcome::ok(text, j))
        }
        Command::FromQuat { t } => {
            let qd: QuaternaryDecomposition = t.input.parse()?;
            let (nu, slots) = from_quaternary_states(&qd)?;
            let chain: Vec<String> = slots.iter().map(|s| format_slots(s)).collect();
            let text = if t.states { chain.join("\n") } else { format_sequence(&nu) } + "\n";
            let mut j = parts_json(&nu);
            if t.states {
                j["states"] = json!(chain);
            }
            Ok(Outcome::ok(text, j))
        }
        Command::Validate { family, input } => {
            let parts = parse_sequence(&input)?;
            Ok(match validate(&parts, family) {
                Ok(cert) => Outcome::ok(
                    format!("certificate: {} ({} parts)\n", cert.family, cert.len),
                    json!({ "certificate": cert }),
                ),
                Err(v) => Outcome::checked(false, format!("violation: {v}\n"), json!({ "violation": v })),
            })
        }
        Command::Enumerate { n, family, csv } => {
            let all = generate(family, n);
            if let Some(path) = csv {
                fs::write(&path, count_family(family, n).to_csv())
                    .map_err(|e| Error::Invariant(format!("cannot write {path}: {e}")))?;
            }
            let text: String = all.iter().map(|p| format_sequence(p) + "\n").collect();
            let listed: Vec<Value> = all.iter().map(|p| parts_json(p)).collect();
            Ok(Outcome::ok(text, json!({ "family": family, "n": n, "partitions": listed })))
        }
        Command::VerifyTheorem { max_n, specialize } => {
            let r = match specialize {
                None => verify_refined_counts(max_n),
                Some(s) => verify_specialization(max_n, s),
            };
            Ok(Outcome::checked(r.passed(), format!("{r}\n"), serde_json::to_value(&r)?))
        }
        Command::VerifyIdentity { max_ijkl, qmax } => {
            let r = verify_identity(max_ijkl, qmax);
            Ok(Outcome::checked(r.passed(), format!("{r}\n"), serde_json::to_value(&r)?))
        }
        Command::VerifyCorollary { n } => {
            let r = verify_corollary(n);
            Ok(Outcome::checked(r.passed(), format!("{r}\n"), serde_json::to_value(&r)?))
        }
        Command::Gf { qmax } => {
            let max_n = u64::from(qmax);
            let (a, b) = (count_upto(max_n, count_a), count_upto(max_n, count_b));
            let d = compare_with_product(&PRIMARY, qmax, &[("A", &a), ("B", &b)]);
            let diffs: Vec<Value> = d
                .diffs
                .iter()
                .map(|(name, s)| {
                    let terms: Vec<String> = s.sorted_terms().iter().map(|(k, c)| format_term(k, c)).collect();
                    json!({ "table": name, "terms": terms })
                })
                .collect();
            Ok(Outcome::checked(d.passed(), format!("{d}\n"), json!({ "qmax": qmax, "diffs": diffs })))
        }
        Command::Checks => {
            let mut text = String::from("checks:\n");
            let cs = checks();
            for c in cs.iter() {
                text += &format!("  {:<24}{}\n", c.name(), c.summary());
            }
            text += "quaternary encoders:\n";
            let es = encoders();
            for e in es.iter() {
                text += &format!("  {:<24}{}\n", e.name(), e.summary());
            }
            Ok(Outcome::ok(text, json!({ "checks": cs.names(), "encoders": es.names() })))
        }
        Command::Check {
            name,
            max_n,
            max_ijkl,
            qmax,
            n,
            sweep,
            listed,
        } => {
            let d = CheckParams::default();
            let p = CheckParams {
                max_n: max_n.unwrap_or(d.max_n),
                max_ijkl: max_ijkl.unwrap_or(d.max_ijkl),
                qmax: qmax.unwrap_or(d.qmax),
                corollary_n: n.unwrap_or(d.corollary_n),
                sweep_max: sweep.unwrap_or(d.sweep_max),
                listed_upto: listed.unwrap_or(d.listed_upto),
            };
            let registry = checks();
            let r = registry.get(&name)?.run(&p)?;
            Ok(Outcome::checked(r.passed, format!("{}\n", r.text), serde_json::to_value(&r)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
