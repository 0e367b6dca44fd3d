use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::rational::{to_decimal_string, Rational};

/// A nonnegative combination of species, keyed by species index.
///
/// Zero coefficients are never stored, so the empty map is the zero complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Complex {
    terms: BTreeMap<usize, Rational>,
}

impl Complex {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a complex, merging repeated species. Returns `None` on a negative total.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational)>) -> Option<Self> {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (s, c) in terms {
            *map.entry(s).or_insert_with(Rational::zero) += c;
        }
        if map.values().any(Signed::is_negative) {
            return None;
        }
        map.retain(|_, c| !c.is_zero());
        Some(Self { terms: map })
    }

    pub fn species(s: usize) -> Self {
        Self::from_terms([(s, Rational::from_integer(1.into()))]).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: usize) -> Rational {
        self.terms.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn to_dense(&self, num_species: usize) -> Vec<Rational> {
        (0..num_species).map(|s| self.coefficient(s)).collect()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(s, c)| (*s, c * factor)))
            .expect("scaling by a nonnegative factor")
    }

    pub fn plus(&self, other: &Complex) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(s, c)| (*s, c.clone())),
        )
        .expect("sum of nonnegative complexes")
    }

    /// Human-readable form such as `A1 + 2A2`, or `0` for the zero complex.
    pub fn display(&self, species: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(s, c)| {
                let name = &species[*s];
                if c == &Rational::from_integer(1.into()) {
                    name.clone()
                } else {
                    format!("{}{}", to_decimal_string(c), name)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn merges_and_drops_zeros() {
        let c = Complex::from_terms([(1, int(1)), (0, int(2)), (1, int(1)), (2, int(0))]).unwrap();
        assert_eq!(c.coefficient(1), int(2));
        assert_eq!(c.support().collect::<Vec<_>>(), vec![0, 1]);
        let names = vec!["A".to_string(), "B".to_string(), "C".to_string()];
        assert_eq!(c.display(&names), "2A + 2B");
        assert_eq!(Complex::zero().display(&names), "0");
    }

    #[test]
    fn rejects_negative() {
        assert!(Complex::from_terms([(0, int(-1))]).is_none());
    }
}
