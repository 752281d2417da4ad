use std::fmt;

/// A power product `x_0^a_0 * ... * x_{n-1}^a_{n-1}`, one exponent per ring
/// variable in declaration order.
///
/// The derived `Ord` is lexicographic on the raw exponent vector. It is only
/// used as a storage key; term orders live in [`super::MonomialOrder`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(index: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `true` when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, or `None` when `self` does not divide `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// No variable occurs in both monomials.
    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// If the monomial is a pure power `x_i^k` with `k > 0`, returns `(i, k)`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    /// Formats the monomial with the given variable names, `1` for the unit.
    pub fn display<'a>(&'a self, names: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, names }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, &e) in self.names.iter().zip(self.mono.exponents()) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_and_lcm() {
        let a = Monomial::new(vec![2, 0, 1]);
        let b = Monomial::new(vec![1, 3, 0]);
        assert_eq!(a.lcm(&b), Monomial::new(vec![2, 3, 1]));
        assert!(!a.divides(&b));
        let l = a.lcm(&b);
        assert_eq!(a.quotient_of(&l), Some(Monomial::new(vec![0, 3, 0])));
        assert!(!a.is_coprime(&b));
        assert!(Monomial::new(vec![0, 0, 2]).is_coprime(&Monomial::new(vec![1, 1, 0])));
    }

    #[test]
    fn pure_powers() {
        assert_eq!(Monomial::new(vec![0, 3, 0]).pure_power(), Some((1, 3)));
        assert_eq!(Monomial::new(vec![1, 3, 0]).pure_power(), None);
        assert_eq!(Monomial::one(3).pure_power(), None);
    }

    #[test]
    fn display() {
        let names: Vec<String> = ["x", "y", "e"].iter().map(|s| s.to_string()).collect();
        assert_eq!(Monomial::new(vec![1, 0, 2]).display(&names).to_string(), "x*e^2");
        assert_eq!(Monomial::one(3).display(&names).to_string(), "1");
    }
}
