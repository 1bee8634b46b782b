//! Finite groups given by validated Cayley tables.
//!
//! Every group here is discrete: a finite group with a Hausdorff group
//! topology has no other choice, so "open subset of G" throughout the crate
//! means "any subset of G".

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_POINTS};

/// Dense index of a group element.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elem>,
    id: Elem,
    inv: Vec<Elem>,
}

impl FiniteGroup {
    /// Validates a square multiplication table and derives identity and inverses.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidOrder);
        }
        if n > MAX_POINTS {
            return Err(Error::TooLarge {
                what: "group",
                size: n,
                max: MAX_POINTS,
            });
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(b) = row.iter().position(|&e| e >= n) {
                return Err(Error::Malformed(format!(
                    "entry ({a},{b}) = {} is not an element index",
                    row[b]
                )));
            }
        }
        let mul: Vec<Elem> = table.iter().flatten().copied().collect();
        let m = |a: usize, b: usize| mul[a * n + b];

        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }

        let id = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or(Error::NoIdentity)?;

        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n)
                .find(|&b| m(a, b) == id && m(b, a) == id)
                .ok_or(Error::NoInverse(a))?;
            inv.push(b);
        }

        Ok(FiniteGroup {
            order: n,
            mul,
            id,
            inv,
        })
    }

    /// The cyclic group of order `k` under addition mod `k`.
    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidOrder);
        }
        let table: Vec<Vec<usize>> = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        Self::from_table(&table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("order 1 is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.id
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.order)
    }

    pub fn table(&self) -> Vec<Vec<Elem>> {
        self.mul.chunks(self.order).map(<[Elem]>::to_vec).collect()
    }

    /// Whether `h` contains the identity and is closed under products and inverses.
    pub fn is_subgroup(&self, h: Subset) -> bool {
        h.is_subset_of(self.all())
            && h.contains(self.id)
            && h.iter()
                .all(|a| h.contains(self.inv(a)) && h.iter().all(|b| h.contains(self.mul(a, b))))
    }

    /// Right translate `set * g`.
    pub fn right_mul(&self, set: Subset, g: Elem) -> Subset {
        set.map(|h| self.mul(h, g))
    }
}
