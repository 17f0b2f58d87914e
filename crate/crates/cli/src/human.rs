//! Plain-text renderings.

use std::fmt::Write;

use logkfl::calculators::{CohomologyTable, Mode, Tail};
use logkfl::verify::SuiteReport;

use crate::commands::{ProfiniteOut, SnfOut};

pub fn snf(o: &SnfOut) -> String {
    let f: Vec<String> = o.invariant_factors.iter().map(|d| d.to_string()).collect();
    format!(
        "D =\n{}\nU =\n{}\nV =\n{}\ninvariant factors: {}\n",
        o.d,
        o.u,
        o.v,
        if f.is_empty() { "none".into() } else { f.join(", ") }
    )
}

pub fn profinite(o: &ProfiniteOut) -> String {
    let mut s = format!(
        "H^{}(Ẑ^({}')^{}, {}) = {}  (closed form)\n",
        o.degree, o.p, o.rank, o.coeff, o.closed_form
    );
    if let Some(c) = &o.colimit {
        let orders: Vec<String> = c.level_orders.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            s,
            "ladder {:?}: colimit {} via {} (level orders {})",
            c.ladder,
            c.value,
            c.criterion,
            orders.join(", ")
        );
        let _ = writeln!(s, "agree: {}", if o.agree == Some(true) { "yes" } else { "NO" });
    }
    s
}

pub fn table(title: &str, t: &CohomologyTable) -> String {
    let mode = match t.mode {
        Mode::Computed => "computed",
        Mode::Paper => "paper",
    };
    let mut s = format!("{title}  [{mode} mode]\n");
    let _ = writeln!(s, "  i  H^i");
    for (i, e) in t.entries.iter().enumerate() {
        let _ = writeln!(s, "  {i}  {e}");
    }
    match t.tail {
        Tail::Zero => {
            let _ = writeln!(s, "  …  0");
        }
        Tail::Unknown => {
            let _ = writeln!(s, "  …  not determined");
        }
    }
    let _ = writeln!(s, "lower row: {}", t.lower);
    let _ = writeln!(s, "upper row (q = {}): {}", t.upper_degree, t.upper);
    if !t.diagnostics.is_empty() {
        let _ = writeln!(s, "diagnostics:");
        for d in &t.diagnostics {
            let _ = writeln!(s, "  degree {}: {} computed {}, paper {}", d.degree, d.term, d.computed, d.paper);
        }
    }
    let _ = writeln!(s, "long exact sequence:");
    let seq: Vec<String> = t.sequence.iter().map(|x| {
            let v = x.value.to_string();
            if v == x.label { v } else { format!("{} = {v}", x.label) }
        }).collect();
    for chunk in seq.chunks(3) {
        let _ = writeln!(s, "  → {}", chunk.join(" → "));
    }
    s
}

pub fn verify(reports: &[SuiteReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status}  {:<18} {} checks", r.name, r.checks);
        for f in &r.failures {
            let _ = writeln!(s, "      {f}");
        }
    }
    s
}
