//! Named verification checks and quaternary encoders, looked up at runtime.

use serde::Serialize;
use serde_json::{json, Value};

use crate::color::PRIMARY;
use crate::corollary::{verify_corollary, verify_corollary_sweep};
use crate::enumerate::{
    count_a, count_b, count_upto, verify_phi_bijection, verify_quaternary_bijection, verify_quaternary_counts,
    verify_refined_counts, verify_specialization, verify_upto, Specialization,
};
use crate::error::Error;
use crate::part::ColoredPart;
use crate::qseries::{compare_with_product, format_term, verify_identity, ProductDiff};
use crate::quaternary::{to_quaternary, to_quaternary_bubbling, QuaternaryDecomposition};

/// Anything stored in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
}

/// Entries kept in registration order and found by name.
pub struct Registry<T: ?Sized + Named> {
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Registry { entries: Vec::new() }
    }
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn register(&mut self, entry: Box<T>) -> &mut Self {
        assert!(
            self.entries.iter().all(|e| e.name() != entry.name()),
            "duplicate registry entry {}",
            entry.name()
        );
        self.entries.push(entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T, Error> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

/// Bounds shared by all checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckParams {
    pub max_n: u64,
    pub max_ijkl: u32,
    pub qmax: u32,
    pub corollary_n: u64,
    pub sweep_max: u64,
    pub listed_upto: u64,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            max_n: 22,
            max_ijkl: 3,
            qmax: 25,
            corollary_n: 49,
            sweep_max: 600,
            listed_upto: 240,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub text: String,
    pub detail: Value,
}

impl CheckReport {
    fn new(name: &str, passed: bool, text: String, detail: Value) -> Self {
        CheckReport {
            name: name.to_string(),
            passed,
            text,
            detail,
        }
    }
}

pub trait Check: Named + Sync + Send {
    fn run(&self, params: &CheckParams) -> Result<CheckReport, Error>;
}

fn diff_json(d: &ProductDiff) -> Value {
    let diffs: Vec<Value> = d
        .diffs
        .iter()
        .map(|(name, s)| {
            let terms: Vec<String> = s.sorted_terms().iter().map(|(k, c)| format_term(k, c)).collect();
            json!({ "table": name, "terms": terms })
        })
        .collect();
    json!({ "qmax": d.qmax, "diffs": diffs })
}

macro_rules! check {
    ($ty:ident, $name:literal, $summary:literal, |$p:ident| $body:expr) => {
        struct $ty;

        impl Named for $ty {
            fn name(&self) -> &'static str {
                $name
            }

            fn summary(&self) -> &'static str {
                $summary
            }
        }

        impl Check for $ty {
            fn run(&self, $p: &CheckParams) -> Result<CheckReport, Error> {
                $body
            }
        }
    };
}

check!(RefinedCounts, "refined-counts", "A = B for every (u,v,w,t,n) with n <= max_n", |p| {
    let r = verify_refined_counts(p.max_n);
    Ok(CheckReport::new("refined-counts", r.passed(), r.to_string(), serde_json::to_value(&r)?))
});

check!(PhiBijection, "phi-bijection", "phi maps O onto E1, psi inverts it, for n <= max_n", |p| {
    let name = "phi-bijection";
    Ok(match verify_upto(p.max_n, verify_phi_bijection) {
        Ok(sizes) => CheckReport::new(
            name,
            true,
            format!("{} partitions, n <= {}\npass", sizes.iter().sum::<usize>(), p.max_n),
            json!({ "per_n": sizes }),
        ),
        Err(e) => CheckReport::new(name, false, format!("FAIL: {e}"), json!({ "error": e.to_string() })),
    })
});

check!(QuaternaryCounts, "quaternary-counts", "A = B = quaternary counts for n <= max_n", |p| {
    let r = verify_quaternary_counts(p.max_n);
    Ok(CheckReport::new("quaternary-counts", r.passed(), r.to_string(), serde_json::to_value(&r)?))
});

check!(
    QuaternaryBijection,
    "quaternary-bijection",
    "E1 maps onto quaternary partitions and back, for n <= max_n",
    |p| {
        let name = "quaternary-bijection";
        Ok(match verify_upto(p.max_n, verify_quaternary_bijection) {
            Ok(sizes) => CheckReport::new(
                name,
                true,
                format!("{} partitions, n <= {}\npass", sizes.iter().sum::<usize>(), p.max_n),
                json!({ "per_n": sizes }),
            ),
            Err(e) => CheckReport::new(name, false, format!("FAIL: {e}"), json!({ "error": e.to_string() })),
        })
    }
);

check!(ProductGf, "product-gf", "generating functions of A and B equal the four-color product", |p| {
    let qmax = p.max_n as u32;
    let (a, b) = (count_upto(p.max_n, count_a), count_upto(p.max_n, count_b));
    let d = compare_with_product(&PRIMARY, qmax, &[("A", &a), ("B", &b)]);
    Ok(CheckReport::new("product-gf", d.passed(), d.to_string(), diff_json(&d)))
});

fn specialization_report(name: &str, spec: Specialization, p: &CheckParams) -> CheckReport {
    let counts = verify_specialization(p.max_n, spec);
    let keep = |k: &crate::partition::CountKey| spec.keeps(k);
    let (a, b) = (
        count_upto(p.max_n, count_a).restricted(keep),
        count_upto(p.max_n, count_b).restricted(keep),
    );
    let d = compare_with_product(spec.primaries(), p.max_n as u32, &[("A", &a), ("B", &b)]);
    CheckReport::new(
        name,
        counts.passed() && d.passed(),
        format!("{counts}\n{d}"),
        json!({ "counts": counts, "product": diff_json(&d) }),
    )
}

check!(ThreeColor, "three-color", "t = 0: A = B = three-color table, against the three-color product", |p| {
    Ok(specialization_report("three-color", Specialization::T0, p))
});

check!(TwoColor, "two-color", "w = t = 0: A = B = two-color table, against the two-color product", |p| {
    Ok(specialization_report("two-color", Specialization::Wt0, p))
});

check!(
    FourParameterIdentity,
    "four-parameter-identity",
    "the (i,j,k,l) sum over constraint solutions equals q^(T_i+T_j+T_k+T_l)/((q)_i(q)_j(q)_k(q)_l)",
    |p| {
        let r = verify_identity(p.max_ijkl, p.qmax);
        Ok(CheckReport::new("four-parameter-identity", r.passed(), r.to_string(), serde_json::to_value(&r)?))
    }
);

check!(
    CongruenceCorollary,
    "congruence-corollary",
    "first-kind and second-kind partitions of one n",
    |p| {
        let r = verify_corollary(p.corollary_n);
        Ok(CheckReport::new("congruence-corollary", r.passed(), r.to_string(), serde_json::to_value(&r)?))
    }
);

check!(
    CorollarySweep,
    "corollary-sweep",
    "first kind = second kind = dilated E1 for every n <= sweep_max",
    |p| {
        let r = verify_corollary_sweep(p.sweep_max, p.listed_upto);
        Ok(CheckReport::new("corollary-sweep", r.passed(), r.to_string(), serde_json::to_value(&r)?))
    }
);

/// Every registered check, cheapest first.
pub fn checks() -> Registry<dyn Check> {
    let mut r: Registry<dyn Check> = Registry::default();
    r.register(Box::new(FourParameterIdentity))
        .register(Box::new(CongruenceCorollary))
        .register(Box::new(ProductGf))
        .register(Box::new(RefinedCounts))
        .register(Box::new(QuaternaryCounts))
        .register(Box::new(ThreeColor))
        .register(Box::new(TwoColor))
        .register(Box::new(PhiBijection))
        .register(Box::new(QuaternaryBijection))
        .register(Box::new(CorollarySweep));
    r
}

/// A way of computing the quaternary image of an `E1` partition.
pub trait QuaternaryEncoder: Named + Sync + Send {
    fn encode(&self, nu: &[ColoredPart]) -> Result<QuaternaryDecomposition, Error>;
}

struct ClosedForm;

impl Named for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn summary(&self) -> &'static str {
        "patterns gain twice the parts to their left, other parts lose twice the patterns to their right"
    }
}

impl QuaternaryEncoder for ClosedForm {
    fn encode(&self, nu: &[ColoredPart]) -> Result<QuaternaryDecomposition, Error> {
        to_quaternary(nu)
    }
}

struct Bubbling;

impl Named for Bubbling {
    fn name(&self) -> &'static str {
        "bubbling"
    }

    fn summary(&self) -> &'static str {
        "cross parts with the pattern pair after them, leftmost first"
    }
}

impl QuaternaryEncoder for Bubbling {
    fn encode(&self, nu: &[ColoredPart]) -> Result<QuaternaryDecomposition, Error> {
        to_quaternary_bubbling(nu).map(|(qd, _)| qd)
    }
}

pub fn encoders() -> Registry<dyn QuaternaryEncoder> {
    let mut r: Registry<dyn QuaternaryEncoder> = Registry::default();
    r.register(Box::new(ClosedForm)).register(Box::new(Bubbling));
    r
}
