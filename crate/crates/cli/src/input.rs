//! Input documents: ideals (plain text or JSON) and dense matrices (JSON).
//!
//! Plain-text ideals hold one polynomial per line or `;`-separated, with
//! optional `vars:` and `order:` header lines and `#` comments:
//!
//! ```text
//! # two-site model, V = 0
//! vars: x, y, e
//! order: lex
//! -y - e*x
//! -x - e*y
//! x^2 + y^2 - 1
//! ```

use std::io::Read;
use std::path::Path;

use gbqpe::groebner::Ideal;
use gbqpe::linalg::{c, CMatrix, CVector};
use gbqpe::polyring::{parse, MonomialOrder, OrderKind, Ring};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "gbqpe/1";

/// Reads a file, or stdin for `-`. Empty input is a usage error.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?
    };
    if text.lines().all(|l| strip_comment(l).trim().is_empty()) {
        return Err(CliError::Usage(format!("{} is empty", path.display())));
    }
    Ok(text)
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

/// Order overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct OrderArgs {
    pub kind: Option<OrderKind>,
    /// precedence, largest first; also declares the ring when the input has none
    pub vars: Option<Vec<String>>,
}

/// Serialized ideal or Groebner basis. Extra fields are ignored on input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealDoc {
    #[serde(default)]
    pub schema: Option<String>,
    /// `ideal` or `groebner`
    #[serde(default)]
    pub kind: Option<String>,
    pub variables: Vec<String>,
    #[serde(default)]
    pub order: Option<OrderKind>,
    #[serde(default)]
    pub precedence: Option<Vec<String>>,
    pub polynomials: Vec<String>,
}

pub struct LoadedIdeal {
    pub ideal: Ideal,
    /// the input declared itself a reduced Groebner basis
    pub is_basis: bool,
}

fn parse_text(text: &str) -> Result<IdealDoc, CliError> {
    let mut doc = IdealDoc {
        schema: None,
        kind: None,
        variables: Vec::new(),
        order: None,
        precedence: None,
        polynomials: Vec::new(),
    };
    for line in text.lines() {
        let line = strip_comment(line).trim();
        if let Some(rest) = line.strip_prefix("vars:") {
            doc.variables = split_names(rest);
        } else if let Some(rest) = line.strip_prefix("order:") {
            doc.order = Some(rest.trim().parse()?);
        } else {
            doc.polynomials
                .extend(line.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from));
        }
    }
    Ok(doc)
}

pub fn split_names(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn check_schema(doc: &IdealDoc) -> Result<(), CliError> {
    match doc.schema.as_deref() {
        None | Some(SCHEMA) => Ok(()),
        Some(other) => Err(CliError::Parse(format!("unsupported schema `{other}`, expected `{SCHEMA}`"))),
    }
}

pub fn load_ideal(text: &str, args: &OrderArgs) -> Result<LoadedIdeal, CliError> {
    let doc: IdealDoc = if text.trim_start().starts_with('{') {
        serde_json::from_str(text)?
    } else {
        parse_text(text)?
    };
    check_schema(&doc)?;
    let names = if !doc.variables.is_empty() {
        doc.variables.clone()
    } else if let Some(v) = &args.vars {
        v.clone()
    } else {
        return Err(CliError::Usage("no variables declared; add a `vars:` line or pass --vars".into()));
    };
    let ring = Ring::new(names)?;
    let kind = args.kind.or(doc.order).unwrap_or(OrderKind::Lex);
    let precedence = args.vars.clone().or(doc.precedence.clone());
    let order = match &precedence {
        Some(p) => MonomialOrder::with_names(kind, &ring, p)?,
        None => MonomialOrder::declared(kind, ring.len()),
    };
    if doc.polynomials.is_empty() {
        return Err(CliError::Usage("the ideal has no generators".into()));
    }
    let gens = doc
        .polynomials
        .iter()
        .map(|p| parse(p, &ring))
        .collect::<Result<Vec<_>, _>>()?;
    // an order override invalidates a stored basis
    let same_order = args.kind.is_none_or(|k| Some(k) == doc.order)
        && args.vars.as_ref().is_none_or(|v| Some(v) == doc.precedence.as_ref());
    Ok(LoadedIdeal {
        ideal: Ideal::new(gens, order)?,
        is_basis: doc.kind.as_deref() == Some("groebner") && same_order,
    })
}

pub fn ideal_doc(kind: &str, ideal: &Ideal) -> IdealDoc {
    let ord = ideal.order();
    IdealDoc {
        schema: Some(SCHEMA.into()),
        kind: Some(kind.into()),
        variables: ideal.ring().vars().to_vec(),
        order: Some(ord.kind()),
        precedence: Some(ord.precedence_names(ideal.ring())),
        polynomials: ideal.generators().iter().map(|g| g.to_string_with(ord)).collect(),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixDoc {
    Rows(Vec<Vec<Entry>>),
    Object { rows: Vec<Vec<Entry>> },
}

/// A square matrix as JSON rows; entries are numbers or `[re, im]` pairs.
pub fn load_matrix(text: &str) -> Result<CMatrix, CliError> {
    let rows = match serde_json::from_str::<MatrixDoc>(text)? {
        MatrixDoc::Rows(r) | MatrixDoc::Object { rows: r } => r,
    };
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse("matrix must be square and non-empty".into()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        Entry::Real(x) => c(x, 0.0),
        Entry::Complex([re, im]) => c(re, im),
    }))
}

/// Comma-separated real amplitudes.
pub fn parse_state(list: &str) -> Result<CVector, CliError> {
    let vals = list
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Parse(format!("state entry `{s}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CVector::from_iterator(vals.len(), vals.into_iter().map(|x| c(x, 0.0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format_with_headers() {
        let l = load_ideal("vars: x, y\norder: degrevlex\nx^2 - y; y - 1 # tail\n", &OrderArgs::default()).unwrap();
        assert_eq!(l.ideal.generators().len(), 2);
        assert_eq!(l.ideal.order().kind(), OrderKind::Degrevlex);
        assert!(!l.is_basis);
    }

    #[test]
    fn vars_flag_declares_and_orders() {
        let args = OrderArgs {
            kind: None,
            vars: Some(vec!["y".into(), "x".into()]),
        };
        let l = load_ideal("x - 1\ny - 2\n", &args).unwrap();
        assert_eq!(l.ideal.ring().vars(), &["y".to_string(), "x".to_string()]);
    }

    #[test]
    fn missing_vars_is_usage() {
        assert!(matches!(load_ideal("x - 1", &OrderArgs::default()), Err(CliError::Usage(_))));
    }

    #[test]
    fn foreign_schema_rejected() {
        let doc = r#"{"schema": "other/2", "variables": ["x"], "polynomials": ["x"]}"#;
        assert!(matches!(load_ideal(doc, &OrderArgs::default()), Err(CliError::Parse(_))));
    }

    #[test]
    fn matrix_forms() {
        let a = load_matrix("[[1, 2], [3, [0, 1]]]").unwrap();
        assert_eq!(a[(1, 1)], c(0.0, 1.0));
        let b = load_matrix(r#"{"rows": [[1]]}"#).unwrap();
        assert_eq!(b[(0, 0)], c(1.0, 0.0));
        assert!(load_matrix("[[1, 2]]").is_err());
    }
}
