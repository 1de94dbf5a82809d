//! Machine-readable reports and certificate encodings.

use serde::Serialize;
use serde_json::{json, Value};

use crate::algcore::{FiniteAlgebra, Homomorphism, Submodule};
use crate::structure::{Checked, Representation, SimilarityWitness, TheoremViolation};
use crate::variety::Membership;

pub const SCHEMA: &str = "omega-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
    Violation,
}

#[derive(Debug, Clone, Serialize)]
pub struct Item {
    pub id: String,
    pub description: String,
    pub status: Status,
    pub certificate: Value,
}

impl Item {
    pub fn new(id: impl Into<String>, description: impl Into<String>, status: Status, certificate: Value) -> Self {
        Item { id: id.into(), description: description.into(), status, certificate }
    }

    /// Pass or fail by `ok`.
    pub fn check(id: impl Into<String>, description: impl Into<String>, ok: bool, certificate: Value) -> Self {
        Item::new(id, description, if ok { Status::Pass } else { Status::Fail }, certificate)
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub undecided: usize,
    pub violation: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub seed: u64,
    pub summary: Summary,
    pub items: Vec<Item>,
    pub violations: Vec<TheoremViolation>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            seed,
            summary: Summary::default(),
            items: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, item: Item) {
        match item.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Undecided => self.summary.undecided += 1,
            Status::Violation => self.summary.violation += 1,
        }
        self.items.push(item);
    }

    pub fn violation(&mut self, id: impl Into<String>, v: TheoremViolation) {
        self.push(Item::new(id, v.statement.clone(), Status::Violation, json!({ "detail": v.detail })));
        self.violations.push(v);
    }

    pub fn extend(&mut self, other: Report) {
        for item in other.items {
            self.push(item);
        }
        self.violations.extend(other.violations);
    }

    /// 0 when everything passed, 1 on a failure or violation, 2 when
    /// something stayed undecided.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 || self.summary.violation > 0 {
            1
        } else if self.summary.undecided > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn algebra_json(a: &FiniteAlgebra) -> Value {
    let ring = a.ring();
    let mut tables = serde_json::Map::new();
    for (o, name, arity) in a.sig().ops() {
        let mut entries = serde_json::Map::new();
        if arity == 0 {
            entries.insert(String::new(), json!(a.format_vector(a.constant(o))));
        } else {
            let r = a.rank();
            let mut t = vec![0usize; arity];
            for _ in 0..r.pow(arity as u32) {
                let v = a.table(o, &t);
                if v.iter().any(|&x| x != 0) {
                    let key = t.iter().map(|&i| a.names()[i].as_str()).collect::<Vec<_>>().join(",");
                    entries.insert(key, json!(a.format_vector(v)));
                }
                for k in (0..arity).rev() {
                    t[k] += 1;
                    if t[k] < r {
                        break;
                    }
                    t[k] = 0;
                }
            }
        }
        tables.insert(name.to_string(), Value::Object(entries));
    }
    json!({
        "label": a.label(),
        "ring": ring.spec().to_string(),
        "basis": a.names(),
        "orders": a.orders(),
        "size": a.size().to_string(),
        "tables": tables,
    })
}

pub fn submodule_json(a: &FiniteAlgebra, s: &Submodule) -> Value {
    json!({
        "size": s.size().to_string(),
        "generators": s.rows().iter().map(|r| a.format_vector(r)).collect::<Vec<_>>(),
    })
}

pub fn hom_json(tgt: &FiniteAlgebra, h: &Homomorphism) -> Value {
    json!(h.images.iter().map(|v| tgt.format_vector(v)).collect::<Vec<_>>())
}

pub fn membership_json(b: &FiniteAlgebra, m: &Membership) -> Value {
    match m {
        Membership::Member(w) => json!({
            "verdict": "member",
            "coordinates": w.model.coordinates.len(),
            "model_size": w.model.carrier.size().to_string(),
            "generator_targets": w.targets.iter().map(|v| b.format_vector(v)).collect::<Vec<_>>(),
            "map": hom_json(b, &w.map),
        }),
        Membership::NonMember(w) => json!({
            "verdict": "non_member",
            "identity": w.identity.display(b.sig()).to_string(),
            "arguments": w.arguments.iter().map(|v| b.format_vector(v)).collect::<Vec<_>>(),
            "value": b.format_vector(&w.value),
        }),
        Membership::Undecided { reason } => json!({ "verdict": "undecided", "reason": reason }),
    }
}

pub fn similarity_json(a: &FiniteAlgebra, b: &FiniteAlgebra, w: &SimilarityWitness) -> Value {
    json!({
        "alpha": w.alpha.images.len(),
        "mu": w.i_basis.iter().zip(&w.mu).map(|(g, m)| json!([a.format_vector(g), b.format_vector(m)])).collect::<Vec<_>>(),
        "multilinear_extension": w.multilinear_extension,
    })
}

pub fn representation_json(rep: &Representation) -> Value {
    json!({
        "sequence": rep.sequence().iter().map(u128::to_string).collect::<Vec<_>>(),
        "factors": rep.family.iter().map(algebra_json).collect::<Vec<_>>(),
        "sub_size": rep.sub.size().to_string(),
        "kernel_size": rep.kernel.size().to_string(),
    })
}

/// Encodes a theorem check as an item; violations are also recorded.
pub fn push_checked<T>(
    report: &mut Report,
    id: &str,
    description: &str,
    c: &Checked<T>,
    cert: impl FnOnce(&T) -> Value,
) {
    match c {
        Checked::Holds(t) => report.push(Item::new(id, description, Status::Pass, cert(t))),
        Checked::Undecided(r) => report.push(Item::new(id, description, Status::Undecided, json!({ "reason": r }))),
        Checked::Violation(v) => report.violation(id, v.clone()),
    }
}
