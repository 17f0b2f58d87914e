//! Text notation for symbolic modules, e.g. `Z/4(-1) + (Q/Z)^(3')(-1)^2`.

use super::{CoeffAtom, CoeffKind, SymbolicModule};
use crate::error::{Error, Result};

fn bad(s: &str) -> Error {
    Error::Invalid(format!("cannot parse module {s:?}"))
}

/// Splits at top-level `+` / `⊕`.
fn split_terms(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '⊕' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
        if depth < 0 {
            return Err(bad(s));
        }
    }
    if depth != 0 {
        return Err(bad(s));
    }
    out.push(&s[start..]);
    Ok(out)
}

fn parse_int(s: &str) -> Option<i64> {
    let s = s.trim().replace('−', "-");
    let s = s.strip_prefix('+').unwrap_or(&s);
    s.parse().ok()
}

/// Index of the `(` matching a trailing `)`.
fn matching_open(s: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, ch) in s.char_indices().rev() {
        match ch {
            ')' => depth += 1,
            '(' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn parse_base(b: &str, whole: &str) -> Result<Option<CoeffKind>> {
    let b = b.trim();
    if let Some(p) = b.strip_prefix("(Q/Z)^(").and_then(|r| r.strip_suffix("')")) {
        return Ok(Some(CoeffKind::PrimeToP(p.trim().parse().map_err(|_| bad(whole))?)));
    }
    if b.starts_with('(') && b.ends_with(')') && matching_open(b) == Some(0) {
        return parse_base(&b[1..b.len() - 1], whole);
    }
    Ok(Some(match b {
        "0" => return Ok(None),
        "Z" => CoeffKind::FreeZ,
        "Q" => CoeffKind::RationalQ,
        "Q/Z" => CoeffKind::QmodZ,
        _ => {
            if let Some(n) = b.strip_prefix("Z/") {
                let n: u64 = n.trim().parse().map_err(|_| bad(whole))?;
                if n == 0 {
                    return Err(bad(whole));
                }
                if n == 1 {
                    return Ok(None);
                }
                CoeffKind::FiniteCyclic(n)
            } else if let Some(rest) = b.strip_prefix("Q_") {
                let (l, tail) = rest.split_once('/').ok_or_else(|| bad(whole))?;
                if tail.trim() != format!("Z_{}", l.trim()) {
                    return Err(bad(whole));
                }
                CoeffKind::PrimaryDivisible(l.trim().parse().map_err(|_| bad(whole))?)
            } else {
                return Err(bad(whole));
            }
        }
    }))
}

pub(super) fn parse_module(s: &str) -> Result<SymbolicModule> {
    let s = s.trim();
    if s.starts_with('[') {
        return serde_json::from_str(s).map_err(|e| Error::Invalid(format!("bad module list {s:?}: {e}")));
    }
    let mut terms = Vec::new();
    for term in split_terms(s)? {
        let mut t = term.trim();
        if t.is_empty() {
            return Err(bad(s));
        }
        let mut mult = 1usize;
        if let Some(k) = t.rfind('^') {
            let tail = &t[k + 1..];
            if !tail.is_empty() && tail.trim().chars().all(|c| c.is_ascii_digit()) {
                mult = tail.trim().parse().map_err(|_| bad(s))?;
                t = t[..k].trim_end();
            }
        }
        let mut twist = 0i64;
        if t.ends_with(')') {
            if let Some(open) = matching_open(t) {
                if open > 0 {
                    if let Some(w) = parse_int(&t[open + 1..t.len() - 1]) {
                        twist = w;
                        t = t[..open].trim_end();
                    }
                }
            }
        }
        if let Some(kind) = parse_base(t, s)? {
            kind.validate()?;
            terms.push((CoeffAtom { kind, twist }, mult));
        }
    }
    Ok(SymbolicModule::from_terms(terms))
}
