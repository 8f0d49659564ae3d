//! The `.alg` text format and catalog files.
//!
//! ```text
//! alg 1
//! size 2
//! names 0 1
//! neg 1 0
//! meet 0 0 0 1
//! join 0 1 1 1
//! res 1 1 0 1
//! ```
//!
//! `names` and `res` are optional. The reader is token based, so line
//! breaks inside a section are tolerated, but every token must be accounted
//! for. A catalog is a `catalog <class> <n> <count>` header followed by
//! `.alg` records separated by blank lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra, Table};
use crate::classify::ClassName;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error("invalid algebra: {0}")]
    Invalid(#[from] AlgebraError),
    #[error("catalog record {index}: {source}")]
    Record { index: usize, source: Box<FormatError> },
    #[error("catalog header says {expected} records, found {found}")]
    CountMismatch { expected: usize, found: usize },
}

struct Tokens<'a> {
    toks: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str, first_line: usize) -> Self {
        let toks = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (first_line + i, t)))
            .collect();
        Tokens { toks, at: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        let t = self
            .toks
            .get(self.at)
            .copied()
            .ok_or_else(|| FormatError::Truncated(format!("expected {what}")))?;
        self.at += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.at).map(|&(_, t)| t)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), FormatError> {
        let (line, t) = self.next(&format!("`{kw}`"))?;
        if t == kw {
            Ok(())
        } else {
            Err(FormatError::Syntax {
                line,
                message: format!("expected `{kw}`, found `{t}`"),
            })
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, FormatError> {
        let (line, t) = self.next(what)?;
        t.parse().map_err(|_| FormatError::Syntax {
            line,
            message: format!("expected {what}, found `{t}`"),
        })
    }

    fn numbers(&mut self, count: usize, what: &str) -> Result<Vec<usize>, FormatError> {
        (0..count).map(|_| self.number(what)).collect()
    }

    fn finish(&self) -> Result<(), FormatError> {
        match self.toks.get(self.at) {
            None => Ok(()),
            Some(&(line, t)) => Err(FormatError::Syntax {
                line,
                message: format!("extra token `{t}`"),
            }),
        }
    }
}

/// Parses one `.alg` record.
pub fn parse_alg(text: &str) -> Result<FiniteAlgebra, FormatError> {
    parse_alg_at(text, 1)
}

fn parse_alg_at(text: &str, first_line: usize) -> Result<FiniteAlgebra, FormatError> {
    let mut t = Tokens::new(text, first_line);
    t.keyword("alg")?;
    let (line, version) = t.next("format version")?;
    if version != "1" {
        return Err(FormatError::Syntax {
            line,
            message: format!("unsupported format version `{version}`"),
        });
    }
    t.keyword("size")?;
    let (line, _) = t.toks.get(t.at).copied().unwrap_or((first_line, ""));
    let n = t.number("size")?;
    if n == 0 {
        return Err(FormatError::Syntax {
            line,
            message: "size must be positive".into(),
        });
    }
    let names = if t.peek() == Some("names") {
        t.keyword("names")?;
        let mut names = Vec::with_capacity(n);
        for _ in 0..n {
            names.push(t.next("element name")?.1.to_string());
        }
        Some(names)
    } else {
        None
    };
    t.keyword("neg")?;
    let neg = t.numbers(n, "negation entry")?;
    t.keyword("meet")?;
    let meet = t.numbers(n * n, "meet entry")?;
    t.keyword("join")?;
    let join = t.numbers(n * n, "join entry")?;
    let res = if t.peek() == Some("res") {
        t.keyword("res")?;
        Some(t.numbers(n * n, "residual entry")?)
    } else {
        None
    };
    t.finish()?;
    let table = |data: Vec<usize>| Table::from_vec(n, data).expect("n*n entries read");
    Ok(FiniteAlgebra::new(
        table(meet),
        table(join),
        neg,
        res.map(table),
        names,
    )?)
}

fn push_row(out: &mut String, key: &str, values: &[usize]) {
    out.push_str(key);
    for v in values {
        write!(out, " {v}").expect("write to string");
    }
    out.push('\n');
}

/// Serializes `a` in the fixed section order.
pub fn write_alg(a: &FiniteAlgebra) -> String {
    let mut out = format!("alg 1\nsize {}\n", a.size());
    if let Some(names) = a.names() {
        out.push_str("names");
        for name in names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
    }
    push_row(&mut out, "neg", a.neg_table());
    push_row(&mut out, "meet", a.meet_table().as_slice());
    push_row(&mut out, "join", a.join_table().as_slice());
    if let Some(res) = a.residual() {
        push_row(&mut out, "res", res.as_slice());
    }
    out
}

/// A parsed catalog file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogFile {
    pub class: ClassName,
    pub size: usize,
    pub algebras: Vec<FiniteAlgebra>,
}

pub fn write_catalog(class: ClassName, size: usize, algebras: &[FiniteAlgebra]) -> String {
    let mut out = format!("catalog {class} {size} {}\n", algebras.len());
    for a in algebras {
        out.push('\n');
        out.push_str(&write_alg(a));
    }
    out
}

pub fn parse_catalog(text: &str) -> Result<CatalogFile, FormatError> {
    let mut lines = text.lines().enumerate();
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| FormatError::Truncated("expected catalog header".into()))?;
    let bad_header = |message: String| FormatError::Syntax {
        line: hline + 1,
        message,
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "catalog" {
        return Err(bad_header("expected `catalog <class> <n> <count>`".into()));
    }
    let class: ClassName = fields[1].parse().map_err(bad_header)?;
    let size: usize = fields[2]
        .parse()
        .map_err(|_| bad_header(format!("bad size `{}`", fields[2])))?;
    let count: usize = fields[3]
        .parse()
        .map_err(|_| bad_header(format!("bad count `{}`", fields[3])))?;

    let mut records: Vec<(usize, String)> = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (i, line) in lines {
        if line.trim().is_empty() {
            records.extend(current.take());
        } else {
            let entry = current.get_or_insert_with(|| (i + 1, String::new()));
            entry.1.push_str(line);
            entry.1.push('\n');
        }
    }
    records.extend(current);

    let mut algebras = Vec::with_capacity(records.len());
    for (index, (first_line, body)) in records.iter().enumerate() {
        let a = parse_alg_at(body, *first_line).map_err(|e| FormatError::Record {
            index,
            source: Box::new(e),
        })?;
        if a.size() != size {
            return Err(FormatError::Record {
                index,
                source: Box::new(FormatError::Syntax {
                    line: *first_line,
                    message: format!("record has size {}, catalog size is {size}", a.size()),
                }),
            });
        }
        algebras.push(a);
    }
    if algebras.len() != count {
        return Err(FormatError::CountMismatch {
            expected: count,
            found: algebras.len(),
        });
    }
    Ok(CatalogFile { class, size, algebras })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ops::residuate;

    #[test]
    fn bool2_text() {
        let a = residuate(&fixtures::bool2()).unwrap();
        let text = write_alg(&a);
        assert_eq!(
            text,
            "alg 1\nsize 2\nnames 0 1\nneg 1 0\nmeet 0 0 0 1\njoin 0 1 1 1\nres 1 1 0 1\n"
        );
        assert_eq!(parse_alg(&text).unwrap(), a);
    }

    #[test]
    fn round_trips() {
        for a in [
            fixtures::b6(),
            fixtures::nonflexible(),
            fixtures::mo2(),
            fixtures::chain3(),
        ] {
            assert_eq!(parse_alg(&write_alg(&a)).unwrap(), a);
            let plain = a.clone().without_names();
            assert_eq!(parse_alg(&write_alg(&plain)).unwrap(), plain);
        }
        let r = residuate(&fixtures::b6()).unwrap();
        assert_eq!(parse_alg(&write_alg(&r)).unwrap(), r);
    }

    #[test]
    fn rejects_malformed_input() {
        let good = write_alg(&fixtures::bool2());
        assert!(matches!(
            parse_alg(&format!("{good} 7")),
            Err(FormatError::Syntax { .. })
        ));
        assert!(matches!(
            parse_alg(&good.replace("alg 1", "alg 2")),
            Err(FormatError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_alg(&good.replace("join 0 1 1 1", "join 0 1 1")),
            Err(FormatError::Truncated(_))
        ));
        assert!(matches!(
            parse_alg(&good.replace("neg 1 0", "neg 1 x")),
            Err(FormatError::Syntax { line: 4, .. })
        ));
        assert!(matches!(
            parse_alg(&good.replace("neg 1 0", "neg 0 1")),
            Err(FormatError::Invalid(_))
        ));
        assert!(matches!(
            parse_alg(&good.replace("meet 0 0 0 1", "meet 0 0 0 9")),
            Err(FormatError::Invalid(_))
        ));
        assert!(matches!(
            parse_alg("alg 1\nsize 0\nneg\nmeet\njoin\n"),
            Err(FormatError::Syntax { .. })
        ));
    }

    #[test]
    fn catalogs() {
        let algs = vec![fixtures::mo2(), fixtures::b6()];
        let text = write_catalog(ClassName::Ol, 6, &algs);
        assert!(text.starts_with("catalog ol 6 2\n\nalg 1\n"));
        let parsed = parse_catalog(&text).unwrap();
        assert_eq!(parsed.class, ClassName::Ol);
        assert_eq!(parsed.size, 6);
        assert_eq!(parsed.algebras, algs);
        let empty = write_catalog(ClassName::Oml, 7, &[]);
        assert_eq!(empty, "catalog oml 7 0\n");
        assert_eq!(parse_catalog(&empty).unwrap().algebras.len(), 0);
        assert!(matches!(
            parse_catalog(&text.replace("6 2", "6 3")),
            Err(FormatError::CountMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            parse_catalog(&text.replace("ol 6", "ol 4")),
            Err(FormatError::Record { index: 0, .. })
        ));
    }
}
