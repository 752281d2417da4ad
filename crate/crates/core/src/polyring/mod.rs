//! Exact multivariate polynomials over the rationals.
//!
//! Terms are stored in an order-agnostic map; monomial orders are applied
//! when a caller asks for leading terms or a sorted view, so one polynomial
//! can be processed under several orders without copying.

mod monomial;
mod order;
mod parse;
mod polynomial;
mod rational;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use monomial::Monomial;
pub use order::{MonomialOrder, OrderKind};
pub use parse::parse;
pub use polynomial::Polynomial;
pub use rational::{format_rational, parse_rational, rationalize, rationalize_decimal, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("unknown monomial order `{0}`")]
    UnknownOrder(String),
    #[error("precedence is not a permutation of the ring variables")]
    BadPrecedence,
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}

/// Ordered list of variable names. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring(Arc<[String]>);

impl Ring {
    pub fn new<I, S>(names: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(PolyError::InvalidVariable(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Ring(names.into()))
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// The ring with `name` removed.
    pub fn without(&self, name: &str) -> Result<Ring, PolyError> {
        if self.index_of(name).is_none() {
            return Err(PolyError::UnknownVariable(name.to_string()));
        }
        Ring::new(self.0.iter().filter(|n| *n != name).cloned())
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
