//! JSON and plain-text renderings of an analysis.
//!
//! Both are deterministic: classes and pairs appear in id order, procedures
//! in declaration order and verdicts in the order they were requested.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::classes::ClassId;
use crate::inference::{Analysis, Diagnostic, Verdict};
use crate::lang::Program;
use crate::lattice::{Abstraction, FinAbs, InfAbs, PairId, Witness};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Copy, Clone, Default, Debug)]
pub struct ReportOptions {
    /// List every class, not only the ones mentioned by some effect.
    pub all_classes: bool,
    /// List every pair, not only the ones mentioned by some effect.
    pub all_pairs: bool,
}

pub struct Report<'a> {
    pub abs: &'a Abstraction,
    pub program: &'a Program,
    pub analysis: &'a Analysis,
    pub verdicts: &'a [Verdict],
    pub options: ReportOptions,
}

fn witness_json(abs: &Abstraction, w: &Witness) -> Value {
    let aut = abs.automaton();
    match &w.period {
        None => json!({ "word": aut.format_word(&w.prefix) }),
        Some(v) => json!({ "prefix": aut.format_word(&w.prefix), "period": aut.format_word(v) }),
    }
}

fn witness_text(abs: &Abstraction, w: &Witness) -> String {
    let aut = abs.automaton();
    match &w.period {
        None => aut.format_word(&w.prefix),
        Some(v) => format!("{} ({})^omega", aut.format_word(&w.prefix), aut.format_word(v)),
    }
}

pub fn fin_text(abs: &Abstraction, u: &FinAbs) -> String {
    let items: Vec<String> = u.ids().map(|c| abs.class_label(c)).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn inf_text(abs: &Abstraction, v: &InfAbs) -> String {
    let items: Vec<String> = v.ids().map(|p| abs.pair_label(p)).collect();
    format!("{{{}}}", items.join(", "))
}

impl Report<'_> {
    fn mentioned(&self) -> (BTreeSet<ClassId>, BTreeSet<PairId>) {
        let abs = self.abs;
        let mut classes = BTreeSet::new();
        let mut pairs = BTreeSet::new();
        if self.options.all_classes {
            classes.extend(abs.classes().ids());
        }
        if self.options.all_pairs {
            pairs.extend(abs.pairs().ids());
        }
        for u in &self.analysis.finite {
            classes.extend(u.ids());
        }
        for v in &self.analysis.infinite {
            pairs.extend(v.ids());
        }
        for p in &pairs {
            let pair = abs.pair(*p);
            classes.insert(pair.head);
            classes.insert(pair.period);
        }
        (classes, pairs)
    }

    pub fn to_json(&self) -> Value {
        let abs = self.abs;
        let aut = abs.automaton();
        let (classes, pairs) = self.mentioned();

        let mut class_map = Map::new();
        for c in classes {
            class_map.insert(
                c.index().to_string(),
                json!({
                    "representative": abs.class_label(c),
                    "epsilon": c.is_epsilon(),
                    "accepted": abs.class_accepted(c),
                }),
            );
        }
        let mut pair_map = Map::new();
        for p in pairs {
            let pair = abs.pair(p);
            pair_map.insert(
                p.index().to_string(),
                json!({
                    "head": pair.head.index(),
                    "period": pair.period.index(),
                    "representative": [abs.class_label(pair.head), abs.class_label(pair.period)],
                    "accepted": abs.pair_accepted(p),
                }),
            );
        }

        let mut procedures = Map::new();
        for (i, name) in self.program.names().enumerate() {
            let (u, v) = (&self.analysis.finite[i], &self.analysis.infinite[i]);
            procedures.insert(
                name.to_string(),
                json!({
                    "finite": u.ids().map(ClassId::index).collect::<Vec<_>>(),
                    "infinite": v.ids().map(PairId::index).collect::<Vec<_>>(),
                    "finite_ok": abs.fin_accepted(u),
                    "infinite_ok": abs.inf_accepted(v),
                }),
            );
        }

        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                json!({
                    "entry": v.entry,
                    "result": if v.passed() { "pass" } else { "fail" },
                    "finite_ok": v.finite_ok,
                    "infinite_ok": v.infinite_ok,
                })
            })
            .collect();

        let mut diagnostics = Vec::new();
        for v in self.verdicts {
            for d in &v.diagnostics {
                diagnostics.push(match d {
                    Diagnostic::Class { class, witness } => json!({
                        "entry": v.entry,
                        "kind": "class",
                        "class": class.index(),
                        "representative": abs.class_label(*class),
                        "witness": { "word": aut.format_word(witness) },
                    }),
                    Diagnostic::Pair { pair, witness } => json!({
                        "entry": v.entry,
                        "kind": "pair",
                        "pair": pair.index(),
                        "representative": abs.pair_label(*pair),
                        "witness": witness_json(abs, witness),
                    }),
                });
            }
        }

        json!({
            "schema": SCHEMA_VERSION,
            "policy": {
                "states": aut.num_states(),
                "alphabet": aut.alphabet(),
                "classes": abs.classes().len(),
                "pairs": abs.pairs().len(),
            },
            "classes": class_map,
            "pairs": pair_map,
            "procedures": procedures,
            "verdict": verdicts,
            "diagnostics": diagnostics,
        })
    }

    pub fn to_text(&self) -> String {
        let abs = self.abs;
        let aut = abs.automaton();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "policy: {} states, alphabet {{{}}}, {} classes, {} pairs",
            aut.num_states(),
            aut.alphabet().join(", "),
            abs.classes().len(),
            abs.pairs().len()
        );
        if self.options.all_classes {
            out.push_str(&class_dump(abs, false));
        }
        if self.options.all_pairs {
            out.push_str(&pair_dump(abs));
        }
        for (i, name) in self.program.names().enumerate() {
            let _ = writeln!(out, "procedure {name}");
            let _ = writeln!(out, "  finite:   {}", fin_text(abs, &self.analysis.finite[i]));
            let _ = writeln!(out, "  infinite: {}", inf_text(abs, &self.analysis.infinite[i]));
        }
        for v in self.verdicts {
            let _ = writeln!(out, "entry {}: {}", v.entry, if v.passed() { "pass" } else { "fail" });
            for d in &v.diagnostics {
                match d {
                    Diagnostic::Class { class, witness } => {
                        let _ = writeln!(
                            out,
                            "  rejected class {}: witness {}",
                            abs.class_label(*class),
                            aut.format_word(witness)
                        );
                    }
                    Diagnostic::Pair { pair, witness } => {
                        let _ = writeln!(
                            out,
                            "  rejected pair {}: witness {}",
                            abs.pair_label(*pair),
                            witness_text(abs, witness)
                        );
                    }
                }
            }
        }
        out
    }
}

/// `classes N` followed by `id  representative  epsilon` lines and, if
/// requested, `id id -> id` multiplication lines.
pub fn class_dump(abs: &Abstraction, table: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "classes {}", abs.classes().len());
    for c in abs.classes().ids() {
        let _ = writeln!(out, "{}  {}  {}", c.index(), abs.class_label(c), c.is_epsilon());
    }
    if table {
        for a in abs.classes().ids() {
            for b in abs.classes().ids() {
                let _ = writeln!(out, "{} {} -> {}", a.index(), b.index(), abs.classes().mul(a, b).index());
            }
        }
    }
    out
}

/// `pairs N` followed by `id  (head, period)  accepted|rejected` lines.
pub fn pair_dump(abs: &Abstraction) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pairs {}", abs.pairs().len());
    for p in abs.pairs().ids() {
        let status = if abs.pair_accepted(p) { "accepted" } else { "rejected" };
        let _ = writeln!(out, "{}  {}  {}", p.index(), abs.pair_label(p), status);
    }
    out
}
