//! DIMACS-style DNF text format.
//!
//! ```text
//! c comment
//! p dnf <n> <m>
//! w <var> <prob>        optional, 1-based variable, default 0.5
//! 1 -2 0                one clause per line, terminated by 0
//! ```

use std::fmt::Write as _;

use super::{Clause, Formula, Literal, Weights};
use crate::error::{ParseError, ParseErrorKind};

struct Header {
    n: usize,
    m: usize,
}

/// Parses the DNF text format.
pub fn parse_dnf(text: &str) -> Result<Formula, ParseError> {
    let mut header: Option<Header> = None;
    let mut rho: Vec<f64> = Vec::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let err = |kind| ParseError { line: line_no, kind };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if !line.is_ascii() {
            return Err(err(ParseErrorKind::InvalidToken(line.to_string())));
        }

        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(ParseErrorKind::DuplicateHeader));
            }
            let h = parse_header(line).map_err(err)?;
            rho = vec![0.5; h.n];
            header = Some(h);
            continue;
        }

        let Some(h) = header.as_ref() else {
            return Err(err(ParseErrorKind::MissingHeader));
        };

        if line.starts_with('w') {
            let (var, value) = parse_weight(line, h.n).map_err(err)?;
            rho[var] = value;
            continue;
        }

        let clause = parse_clause(line, h.n).map_err(err)?;
        clauses.push(clause);
    }

    let Some(h) = header else {
        return Err(ParseError { line: last_line.max(1), kind: ParseErrorKind::MissingHeader });
    };
    if clauses.len() != h.m {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::ClauseCountMismatch { declared: h.m, found: clauses.len() },
        });
    }
    // Weights were range-checked line by line; the clause checks happened above too.
    let weights = Weights::new(rho).expect("weights validated while parsing");
    Formula::new(h.n, clauses, weights).map_err(|e| ParseError {
        line: last_line,
        kind: ParseErrorKind::MalformedHeader(e.to_string()),
    })
}

fn parse_header(line: &str) -> Result<Header, ParseErrorKind> {
    let bad = || ParseErrorKind::MalformedHeader(line.to_string());
    let mut it = line.split_whitespace();
    if it.next() != Some("p") || it.next() != Some("dnf") {
        return Err(bad());
    }
    let n: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let m: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    if it.next().is_some() || m == 0 {
        return Err(bad());
    }
    Ok(Header { n, m })
}

fn parse_weight(line: &str, n: usize) -> Result<(usize, f64), ParseErrorKind> {
    let bad = || ParseErrorKind::MalformedWeight(line.to_string());
    let mut it = line.split_whitespace();
    if it.next() != Some("w") {
        return Err(bad());
    }
    let var: i64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let value: f64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    if it.next().is_some() {
        return Err(bad());
    }
    if var < 1 || var as u64 > n as u64 {
        return Err(ParseErrorKind::LiteralOutOfRange { literal: var, n });
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(ParseErrorKind::WeightOutOfRange { var: var as usize, value });
    }
    Ok((var as usize - 1, value))
}

fn parse_clause(line: &str, n: usize) -> Result<Clause, ParseErrorKind> {
    let mut lits: Vec<Literal> = Vec::new();
    let mut terminated = false;
    for tok in line.split_whitespace() {
        if terminated {
            return Err(ParseErrorKind::InvalidToken(tok.to_string()));
        }
        let lit: i64 = tok.parse().map_err(|_| ParseErrorKind::InvalidToken(tok.to_string()))?;
        if lit == 0 {
            terminated = true;
            continue;
        }
        if lit.unsigned_abs() > n as u64 {
            return Err(ParseErrorKind::LiteralOutOfRange { literal: lit, n });
        }
        lits.push(Literal::from_dimacs(lit).expect("nonzero literal in range"));
    }
    if !terminated {
        return Err(ParseErrorKind::UnterminatedClause);
    }
    if lits.is_empty() {
        return Err(ParseErrorKind::EmptyClause);
    }
    lits.sort_unstable();
    lits.dedup();
    if let Some(w) = lits.windows(2).find(|w| w[0].var == w[1].var) {
        return Err(ParseErrorKind::ContradictoryClause { var: w[0].var as usize + 1 });
    }
    Ok(Clause::new(lits).expect("clause validated"))
}

/// Writes a formula in the DNF text format. Weight lines are emitted only for `ρ(v) ≠ 1/2`.
pub fn serialize_dnf(f: &Formula) -> String {
    let mut out = String::with_capacity(16 + f.total_width() * 4);
    writeln!(out, "p dnf {} {}", f.num_vars(), f.num_clauses()).unwrap();
    for (v, &r) in f.weights().as_slice().iter().enumerate() {
        if r != 0.5 {
            writeln!(out, "w {} {}", v + 1, r).unwrap();
        }
    }
    for c in f.clauses() {
        for l in c.literals() {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> ParseErrorKind {
        parse_dnf(text).unwrap_err().kind
    }

    #[test]
    fn parses_basic_formula() {
        let f = parse_dnf("p dnf 3 2\n1 2 0\n-3 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.clauses()[0].literals(), &[Literal::pos(0), Literal::pos(1)]);
        assert_eq!(f.clauses()[1].literals(), &[Literal::neg(2)]);
        assert!(f.weights().is_unweighted());
    }

    #[test]
    fn contradictory_clause_is_rejected() {
        let e = parse_dnf("p dnf 2 1\n1 -1 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ParseErrorKind::ContradictoryClause { var: 1 });
    }

    #[test]
    fn weight_lines_apply() {
        let f = parse_dnf("p dnf 2 1\nw 1 0.25\n1 0\n").unwrap();
        assert_eq!(f.weights().var(0), 0.25);
        assert_eq!(f.weights().var(1), 0.5);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let f = parse_dnf("c hello\n\np dnf 1 1\nc mid\n1 0\n").unwrap();
        assert_eq!(f.num_clauses(), 1);
    }

    #[test]
    fn error_kinds() {
        assert_eq!(kind("1 0\n"), ParseErrorKind::MissingHeader);
        assert_eq!(kind(""), ParseErrorKind::MissingHeader);
        assert!(matches!(kind("p cnf 1 1\n1 0\n"), ParseErrorKind::MalformedHeader(_)));
        assert!(matches!(kind("p dnf x 1\n1 0\n"), ParseErrorKind::MalformedHeader(_)));
        assert_eq!(kind("p dnf 1 1\np dnf 1 1\n"), ParseErrorKind::DuplicateHeader);
        assert_eq!(kind("p dnf 2 1\n3 0\n"), ParseErrorKind::LiteralOutOfRange { literal: 3, n: 2 });
        assert_eq!(kind("p dnf 2 1\n0\n"), ParseErrorKind::EmptyClause);
        assert_eq!(kind("p dnf 2 1\n1 2\n"), ParseErrorKind::UnterminatedClause);
        assert!(matches!(kind("p dnf 2 1\n1 a 0\n"), ParseErrorKind::InvalidToken(_)));
        assert!(matches!(kind("p dnf 2 1\n1 0 2\n"), ParseErrorKind::InvalidToken(_)));
        assert_eq!(kind("p dnf 2 1\nw 1 1.5\n1 0\n"), ParseErrorKind::WeightOutOfRange { var: 1, value: 1.5 });
        assert!(matches!(kind("p dnf 2 1\nw 1\n1 0\n"), ParseErrorKind::MalformedWeight(_)));
        assert_eq!(kind("p dnf 2 1\nw 3 0.5\n1 0\n"), ParseErrorKind::LiteralOutOfRange { literal: 3, n: 2 });
        assert_eq!(
            kind("p dnf 2 2\n1 0\n"),
            ParseErrorKind::ClauseCountMismatch { declared: 2, found: 1 }
        );
    }

    #[test]
    fn error_reports_line_number() {
        let e = parse_dnf("c\np dnf 2 2\n1 0\n2 x 0\n").unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn serialize_round_trips_examples() {
        for text in ["p dnf 3 2\n1 2 0\n-3 0\n", "p dnf 2 1\nw 1 0.25\n1 0\n"] {
            let f = parse_dnf(text).unwrap();
            let s = serialize_dnf(&f);
            assert_eq!(s, text);
            assert_eq!(parse_dnf(&s).unwrap(), f);
        }
    }

    #[test]
    fn serialize_skips_default_weights() {
        let f = parse_dnf("p dnf 3 1\nw 2 0.5\nw 3 0.1\n1 0\n").unwrap();
        assert_eq!(serialize_dnf(&f), "p dnf 3 1\nw 3 0.1\n1 0\n");
    }
}
