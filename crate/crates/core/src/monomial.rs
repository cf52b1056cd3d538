//! Dense exponent vectors and the term orders used by the Gröbner engine.

use std::cmp::Ordering;
use std::fmt;

use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
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

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
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

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Checked divisibility test for monomials of possibly different rings.
    pub fn compare_divisibility(
        &self,
        other: &Monomial,
    ) -> Result<DivisibilityReport, AlgebraError> {
        if self.nvars() != other.nvars() {
            return Err(AlgebraError::LengthMismatch(self.nvars(), other.nvars()));
        }
        Ok(DivisibilityReport {
            divides: self.divides(other),
            quotient: self.quotient_of(other),
            lcm: self.lcm(other),
        })
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| {
                if *e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub divides: bool,
    pub quotient: Option<Monomial>,
    pub lcm: Monomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                // smaller exponent in the last differing variable wins
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Grevlex => write!(f, "grevlex"),
        }
    }
}

/// How module monomials `m * e_i` are compared. Lower basis index has
/// higher priority in both variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ModuleOrder {
    #[default]
    TermOverPosition,
    PositionOverTerm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TermOrder {
    pub monomial: MonomialOrder,
    pub module: ModuleOrder,
}

impl TermOrder {
    pub fn new(monomial: MonomialOrder, module: ModuleOrder) -> Self {
        TermOrder { monomial, module }
    }

    pub fn cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        let by_pos = b.1.cmp(&a.1);
        match self.module {
            ModuleOrder::TermOverPosition => self.monomial.cmp(a.0, b.0).then(by_pos),
            ModuleOrder::PositionOverTerm => by_pos.then_with(|| self.monomial.cmp(a.0, b.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    #[test]
    fn divisibility_examples() {
        let r = m(&[2, 1]).compare_divisibility(&m(&[2, 3])).unwrap();
        assert!(r.divides);
        assert_eq!(r.quotient, Some(m(&[0, 2])));
        assert_eq!(m(&[2, 0]).lcm(&m(&[0, 1])), m(&[2, 1]));
        let r = m(&[3]).compare_divisibility(&m(&[2])).unwrap();
        assert!(!r.divides);
        assert_eq!(r.quotient, None);
        assert_eq!(
            m(&[1]).compare_divisibility(&m(&[1, 2])),
            Err(AlgebraError::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn grevlex_reference_ordering() {
        // degree 2 monomials in x,y,z: x^2 > xy > y^2 > xz > yz > z^2
        let mut mons = vec![
            m(&[0, 0, 2]),
            m(&[1, 1, 0]),
            m(&[0, 1, 1]),
            m(&[2, 0, 0]),
            m(&[1, 0, 1]),
            m(&[0, 2, 0]),
        ];
        mons.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b, a));
        assert_eq!(
            mons,
            vec![
                m(&[2, 0, 0]),
                m(&[1, 1, 0]),
                m(&[0, 2, 0]),
                m(&[1, 0, 1]),
                m(&[0, 1, 1]),
                m(&[0, 0, 2])
            ]
        );
    }

    fn mono3() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..5, 3).prop_map(Monomial::new)
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative_and_well_founded(a in mono3(), b in mono3(), c in mono3()) {
            for ord in [MonomialOrder::Lex, MonomialOrder::Grevlex] {
                if ord.cmp(&a, &b) == Ordering::Less {
                    prop_assert_eq!(ord.cmp(&a.mul(&c), &b.mul(&c)), Ordering::Less);
                }
                prop_assert_ne!(ord.cmp(&Monomial::one(3), &a), Ordering::Greater);
                prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
            }
        }
    }
}
