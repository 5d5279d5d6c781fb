//! Parser for formulas, sequents and proof documents.

use thiserror::Error;

use crate::kernel::{KernelError, Proof, Rule, Side};
use crate::logic::{is_atom_name, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: invalid {rule} node: {source}")]
    Invalid { line: usize, col: usize, rule: &'static str, source: KernelError },
    #[error("proof concludes {found}, document expects {expected}")]
    Endsequent { expected: Sequent, found: Sequent },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    And,
    Or,
    Arrow,
    Turnstile,
    Word(String),
    Directive(String, String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, line_text) in text.lines().enumerate() {
        let line = ln + 1;
        let chars: Vec<char> = line_text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let col = i + 1;
            let c = chars[i];
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, col });
            match c {
                ';' => break,
                '#' if chars[..i].iter().all(|c| c.is_whitespace()) => {
                    let rest: String = chars[i + 1..].iter().collect();
                    let rest = rest.split(';').next().unwrap_or("").trim().to_string();
                    let (key, val) = match rest.split_once(char::is_whitespace) {
                        Some((k, v)) => (k.to_string(), v.trim().to_string()),
                        None => (rest.clone(), String::new()),
                    };
                    push(&mut out, Tok::Directive(key, val));
                    break;
                }
                c if c.is_whitespace() => i += 1,
                '(' => {
                    push(&mut out, Tok::Open);
                    i += 1;
                }
                ')' => {
                    push(&mut out, Tok::Close);
                    i += 1;
                }
                ',' => {
                    push(&mut out, Tok::Comma);
                    i += 1;
                }
                '&' => {
                    push(&mut out, Tok::And);
                    i += 1;
                }
                '|' if chars.get(i + 1) == Some(&'-') => {
                    push(&mut out, Tok::Turnstile);
                    i += 2;
                }
                '|' => {
                    push(&mut out, Tok::Or);
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    push(&mut out, Tok::Arrow);
                    i += 2;
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    push(&mut out, Tok::Word(chars[start..i].iter().collect()));
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    /// Position reported at end of input.
    eof: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        let toks = lex(text)?;
        let lines = text.lines().count().max(1);
        let col = text.lines().last().map_or(1, |l| l.chars().count() + 1);
        Ok(Parser { toks, i: 0, eof: (lines, col) })
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.i).map_or(self.eof, |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.tok.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn done(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) => {
                self.i += 1;
                if w == "bot" {
                    Ok(Formula::bot())
                } else if is_atom_name(&w) {
                    Ok(Formula::atom(&w))
                } else {
                    self.i -= 1;
                    self.err(format!("invalid atom name {w:?}"))
                }
            }
            Some(Tok::Open) => {
                self.i += 1;
                let a = self.formula()?;
                let op = self.next();
                let b = self.formula()?;
                let f = match op {
                    Some(Tok::And) => Formula::and(a, b),
                    Some(Tok::Or) => Formula::or(a, b),
                    Some(Tok::Arrow) => Formula::imp(a, b),
                    _ => {
                        self.i -= 1;
                        return self.err("expected &, | or ->");
                    }
                };
                self.expect(Tok::Close, "')'")?;
                Ok(f)
            }
            _ => self.err("expected a formula"),
        }
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let mut ant = Vec::new();
        if self.peek() != Some(&Tok::Turnstile) {
            ant.push(self.formula()?);
            while self.peek() == Some(&Tok::Comma) {
                self.i += 1;
                ant.push(self.formula()?);
            }
        }
        self.expect(Tok::Turnstile, "'|-'")?;
        let succ = self.formula()?;
        Ok(Sequent::new(ant, succ))
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Word(w)) if w.chars().all(|c| c.is_ascii_digit()) => {
                self.i += 1;
                w.parse().or_else(|_| {
                    self.i -= 1;
                    self.err("position too large")
                })
            }
            _ => self.err("expected a position"),
        }
    }

    fn side(&mut self) -> Result<Side, ParseError> {
        let n = self.number()?;
        match Side::from_index(n as u64) {
            Some(s) => Ok(s),
            None => {
                self.i -= 1;
                self.err("side must be 1 or 2")
            }
        }
    }

    fn proof(&mut self) -> Result<Proof, ParseError> {
        let (line, col) = self.here();
        self.expect(Tok::Open, "'('")?;
        let head = match self.next() {
            Some(Tok::Word(w)) => w,
            _ => {
                self.i -= 1;
                return self.err("expected a rule name");
            }
        };
        let (rule, premises) = match head.as_str() {
            "ax" => (Rule::Ax(self.formula()?), vec![]),
            "botax" => (Rule::BotAx(self.formula()?), vec![]),
            "c" => (Rule::C(self.number()?), vec![self.proof()?]),
            "w" => (Rule::W(self.number()?), vec![self.proof()?]),
            "k" => {
                let pos = self.number()?;
                let f = self.formula()?;
                (Rule::K(pos, f), vec![self.proof()?])
            }
            "cut" => {
                let pos = self.number()?;
                (Rule::Cut(pos), vec![self.proof()?, self.proof()?])
            }
            "andl" => {
                let pos = self.number()?;
                let side = self.side()?;
                let f = self.formula()?;
                (Rule::AndL(pos, side, f), vec![self.proof()?])
            }
            "andr" => (Rule::AndR, vec![self.proof()?, self.proof()?]),
            "orl" => {
                let pos = self.number()?;
                (Rule::OrL(pos), vec![self.proof()?, self.proof()?])
            }
            "orr" => {
                let side = self.side()?;
                let f = self.formula()?;
                (Rule::OrR(side, f), vec![self.proof()?])
            }
            "impl" => {
                let pos = self.number()?;
                (Rule::ImpL(pos), vec![self.proof()?, self.proof()?])
            }
            "impr" => (Rule::ImpR, vec![self.proof()?]),
            other => {
                self.i -= 1;
                return self.err(format!("unknown rule {other:?}"));
            }
        };
        self.expect(Tok::Close, "')'")?;
        let name = rule.name();
        Proof::build(rule, premises)
            .map_err(|source| ParseError::Invalid { line, col, rule: name, source })
    }
}

/// A parsed proof file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDocument {
    pub name: Option<String>,
    pub proof: Proof,
    pub expected: Option<Sequent>,
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if !p.done() {
        return p.err("trailing input after formula");
    }
    Ok(f)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    if !p.done() {
        return p.err("trailing input after sequent");
    }
    Ok(s)
}

pub fn parse_document(text: &str) -> Result<ProofDocument, ParseError> {
    let mut p = Parser::new(text)?;
    let mut name = None;
    let mut expected = None;
    while let Some(Tok::Directive(key, val)) = p.peek().cloned() {
        let (line, col) = p.here();
        p.i += 1;
        match key.as_str() {
            "name" => name = Some(val),
            "sequent" => {
                expected = Some(parse_sequent(&val).map_err(|e| match e {
                    ParseError::Syntax { msg, .. } => ParseError::Syntax { line, col, msg },
                    e => e,
                })?)
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unknown directive #{other}"),
                })
            }
        }
    }
    let proof = p.proof()?;
    if !p.done() {
        return p.err("trailing input after proof");
    }
    if let Some(exp) = &expected {
        if exp != proof.end() {
            return Err(ParseError::Endsequent { expected: exp.clone(), found: proof.end().clone() });
        }
    }
    Ok(ProofDocument { name, proof, expected })
}

/// Parses a proof document and returns its validated proof.
pub fn parse_proof(text: &str) -> Result<Proof, ParseError> {
    Ok(parse_document(text)?.proof)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom() {
        let p = parse_proof("(ax p)").unwrap();
        assert_eq!(p.rule(), &Rule::Ax(Formula::atom("p")));
    }

    #[test]
    fn cut_of_axioms() {
        let p = parse_proof("(cut 0 (ax p) (ax p))").unwrap();
        assert_eq!(p.rule(), &Rule::Cut(0));
        assert_eq!(p.end().to_string(), "p |- p");
    }

    #[test]
    fn formulas_and_sequents() {
        assert_eq!(parse_formula("((p & q) -> bot)").unwrap().to_string(), "((p & q) -> bot)");
        assert_eq!(parse_sequent("|- (p | q)").unwrap().ant.len(), 0);
        assert_eq!(parse_sequent("p, (q -> r) |- r").unwrap().ant.len(), 2);
        assert!(parse_formula("p & q").is_err());
        assert!(parse_formula("P").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_proof("(ax p)\n(w 0 (ax p))") {
            Err(ParseError::Syntax { line: 2, col: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_proof("  (w 0 (ax p))") {
            Err(ParseError::Invalid { line: 1, col: 3, rule: "w", .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_proof("(andl 0 3 p (ax q))"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn documents() {
        let text = "; example\n#name ex\n#sequent p |- p\n(cut 0 ; inline\n (ax p) (ax p))\n";
        let d = parse_document(text).unwrap();
        assert_eq!(d.name.as_deref(), Some("ex"));
        assert!(d.expected.is_some());
        let bad = "#sequent q |- q\n(ax p)";
        assert!(matches!(parse_document(bad), Err(ParseError::Endsequent { .. })));
    }
}
