//! Text formats: proofs, documents and trace lines.

pub mod parser;

use std::fmt::Write as _;

use crate::kernel::{Proof, Rule};
use crate::session::TraceRecord;

pub use parser::{parse_document, parse_formula, parse_proof, parse_sequent, ParseError, ProofDocument};

fn head(p: &Proof) -> String {
    match p.rule() {
        Rule::Ax(f) => format!("ax {f}"),
        Rule::BotAx(f) => format!("botax {f}"),
        Rule::C(i) => format!("c {i}"),
        Rule::W(i) => format!("w {i}"),
        Rule::K(i, f) => format!("k {i} {f}"),
        Rule::Cut(i) => format!("cut {i}"),
        Rule::AndL(i, s, f) => format!("andl {i} {} {f}", s.index()),
        Rule::AndR => "andr".to_string(),
        Rule::OrL(i) => format!("orl {i}"),
        Rule::OrR(s, f) => format!("orr {} {f}", s.index()),
        Rule::ImpL(i) => format!("impl {i}"),
        Rule::ImpR => "impr".to_string(),
    }
}

/// The proof on a single line.
pub fn print_proof_compact(p: &Proof) -> String {
    let mut out = String::new();
    compact(p, &mut out);
    out
}

fn compact(p: &Proof, out: &mut String) {
    out.push('(');
    out.push_str(&head(p));
    for q in p.premises() {
        out.push(' ');
        compact(q, out);
    }
    out.push(')');
}

const WIDTH: usize = 72;

/// Canonical text: nodes that fit stay on one line, others put each premise
/// on its own indented line.
pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    pretty(p, 0, &mut out);
    out
}

fn pretty(p: &Proof, indent: usize, out: &mut String) {
    if p.stats().nodes <= 64 {
        let line = print_proof_compact(p);
        if indent + line.len() <= WIDTH {
            out.push_str(&line);
            return;
        }
    }
    out.push('(');
    out.push_str(&head(p));
    for q in p.premises() {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 2));
        pretty(q, indent + 2, out);
    }
    out.push(')');
}

/// A proof file with its endsequent directive.
pub fn print_document(p: &Proof, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(n) = name {
        let _ = writeln!(out, "#name {n}");
    }
    let _ = writeln!(out, "#sequent {}", p.end());
    out.push_str(&print_proof(p));
    out.push('\n');
    out
}

/// One line per record: tab-separated fields, or JSON objects.
pub fn emit_trace(records: &[TraceRecord], json: bool) -> String {
    let mut out = String::new();
    for r in records {
        if json {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
        } else {
            let measure = r.measure.clone().unwrap_or_else(|| "-".to_string());
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.step, r.phase, r.label, r.endsequent, r.nodes, r.cuts, r.degree, r.max_rank, measure
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::generate_proof;

    #[test]
    fn axiom_prints() {
        assert_eq!(print_proof(&parse_proof("(ax p)").unwrap()), "(ax p)");
    }

    #[test]
    fn round_trip_corpus() {
        for seed in 0..200 {
            let p = generate_proof(seed, 30, &["p", "q", "r"], true);
            let text = print_proof(&p);
            assert_eq!(parse_proof(&text).unwrap(), p);
            assert_eq!(print_proof(&parse_proof(&text).unwrap()), text);
            let doc = print_document(&p, Some("x"));
            assert_eq!(parse_document(&doc).unwrap().proof, p);
        }
    }

    #[test]
    fn empty_trace() {
        assert_eq!(emit_trace(&[], false), "");
        assert_eq!(emit_trace(&[], true), "");
    }
}
