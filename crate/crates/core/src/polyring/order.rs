use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Degrevlex,
}

impl std::str::FromStr for OrderKind {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(OrderKind::Lex),
            "degrevlex" | "grevlex" | "drl" => Ok(OrderKind::Degrevlex),
            other => Err(PolyError::UnknownOrder(other.to_string())),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::Lex => f.write_str("lex"),
            OrderKind::Degrevlex => f.write_str("degrevlex"),
        }
    }
}

/// A monomial order together with a variable precedence.
///
/// `precedence[0]` is the index (in ring declaration order) of the largest
/// variable. Keeping precedence separate from declaration order lets one ring
/// be processed under `x > y > e` regardless of how it was built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, precedence: Vec<usize>) -> Result<Self, PolyError> {
        let mut seen = vec![false; precedence.len()];
        for &p in &precedence {
            if p >= seen.len() || seen[p] {
                return Err(PolyError::BadPrecedence);
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, precedence })
    }

    /// Precedence equal to declaration order.
    pub fn declared(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            precedence: (0..nvars).collect(),
        }
    }

    pub fn lex(nvars: usize) -> Self {
        Self::declared(OrderKind::Lex, nvars)
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::declared(OrderKind::Degrevlex, nvars)
    }

    /// Order with precedence given by variable names, largest first.
    pub fn with_names<S: AsRef<str>>(
        kind: OrderKind,
        ring: &Ring,
        names: &[S],
    ) -> Result<Self, PolyError> {
        if names.len() != ring.len() {
            return Err(PolyError::BadPrecedence);
        }
        let precedence = names
            .iter()
            .map(|n| {
                ring.index_of(n.as_ref())
                    .ok_or_else(|| PolyError::UnknownVariable(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(kind, precedence)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.precedence {
                    match ea[v].cmp(&eb[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Degrevlex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    o => return o,
                }
                for &v in self.precedence.iter().rev() {
                    match ea[v].cmp(&eb[v]) {
                        Ordering::Equal => continue,
                        // a smaller power of the smallest variable wins
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// A key whose natural (lexicographic) ordering agrees with [`Self::cmp`].
    pub fn sort_key(&self, m: &Monomial) -> Vec<i64> {
        let e = m.exponents();
        match self.kind {
            OrderKind::Lex => self.precedence.iter().map(|&v| e[v] as i64).collect(),
            OrderKind::Degrevlex => std::iter::once(m.degree() as i64)
                .chain(self.precedence.iter().rev().map(|&v| -(e[v] as i64)))
                .collect(),
        }
    }

    /// Variable names in precedence order, largest first.
    pub fn precedence_names(&self, ring: &Ring) -> Vec<String> {
        self.precedence
            .iter()
            .map(|&i| ring.vars()[i].clone())
            .collect()
    }
}
