//! Finite topological spaces.
//!
//! A finite topology is determined by the minimal open neighbourhood `U_x`
//! of each point (the intersection of all opens containing `x`); the opens are
//! exactly the unions of these. [`FinTop`] stores the neighbourhoods, which
//! makes closure, interior, openness and continuity linear-time bit operations,
//! and enumerates the full open family only on request.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::EqRel;
use crate::subset::{Subset, MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinTop {
    size: usize,
    nbhd: Vec<Subset>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
}

fn check_size(what: &'static str, size: usize) -> Result<()> {
    if size > MAX_POINTS {
        return Err(Error::TooLarge {
            what,
            size,
            max: MAX_POINTS,
        });
    }
    Ok(())
}

fn check_subset(set: Subset, size: usize) -> Result<()> {
    if set.is_subset_of(Subset::full(size)) {
        Ok(())
    } else {
        Err(Error::InvalidSubset {
            set,
            size,
            reason: "contains an out-of-range point",
        })
    }
}

impl FinTop {
    /// The smallest topology on `size` points containing every generator.
    pub fn generated(size: usize, generators: &[Subset]) -> Result<Self> {
        check_size("space", size)?;
        let full = Subset::full(size);
        for &g in generators {
            check_subset(g, size)?;
        }
        let nbhd = (0..size)
            .map(|x| {
                generators
                    .iter()
                    .filter(|g| g.contains(x))
                    .fold(full, |acc, &g| acc & g)
            })
            .collect();
        Ok(FinTop { size, nbhd })
    }

    /// Builds a space from minimal neighbourhoods, checking that they form
    /// a preorder (`x ∈ U_x`, and `y ∈ U_x` implies `U_y ⊆ U_x`).
    pub fn from_neighbourhoods(nbhd: Vec<Subset>) -> Result<Self> {
        let size = nbhd.len();
        check_size("space", size)?;
        for (x, &u) in nbhd.iter().enumerate() {
            check_subset(u, size)?;
            if !u.contains(x) {
                return Err(Error::InvalidSubset {
                    set: u,
                    size,
                    reason: "neighbourhood misses its own point",
                });
            }
            if let Some(y) = u.iter().find(|&y| !nbhd[y].is_subset_of(u)) {
                return Err(Error::InvalidSubset {
                    set: nbhd[y],
                    size,
                    reason: "neighbourhoods are not transitive",
                });
            }
        }
        Ok(FinTop { size, nbhd })
    }

    pub fn discrete(size: usize) -> Self {
        Self::from_neighbourhoods((0..size).map(Subset::singleton).collect())
            .expect("discrete neighbourhoods are valid")
    }

    pub fn indiscrete(size: usize) -> Self {
        Self::generated(size, &[]).expect("size checked by caller")
    }

    /// Two points, `{1}` open and `{0}` closed.
    pub fn sierpinski() -> Self {
        Self::generated(2, &[Subset::singleton(1)]).expect("valid generator")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    /// Minimal open neighbourhood of `x`.
    pub fn nbhd(&self, x: usize) -> Subset {
        self.nbhd[x]
    }

    pub fn neighbourhoods(&self) -> &[Subset] {
        &self.nbhd
    }

    /// All open sets, sorted by bitmask.
    pub fn opens(&self) -> Vec<Subset> {
        let mut family = BTreeSet::from([Subset::EMPTY]);
        for &u in &self.nbhd {
            let grown: Vec<Subset> = family.iter().map(|&s| s | u).collect();
            family.extend(grown);
        }
        family.into_iter().collect()
    }

    pub fn is_open(&self, a: Subset) -> bool {
        a.is_subset_of(self.full()) && a.iter().all(|x| self.nbhd[x].is_subset_of(a))
    }

    pub fn is_closed(&self, a: Subset) -> bool {
        self.is_open(a.complement(self.size))
    }

    /// In a finite space a countable intersection of opens is a finite one,
    /// so the G-delta sets are exactly the open sets.
    pub fn is_gdelta(&self, a: Subset) -> bool {
        self.is_open(a)
    }

    pub fn interior(&self, a: Subset) -> Subset {
        (0..self.size).filter(|&x| self.nbhd[x].is_subset_of(a)).collect()
    }

    pub fn closure(&self, a: Subset) -> Subset {
        (0..self.size).filter(|&x| !self.nbhd[x].is_disjoint(a)).collect()
    }

    /// `c` lies in the closure of `{d}`.
    pub fn specializes(&self, c: usize, d: usize) -> bool {
        self.nbhd[c].contains(d)
    }

    /// Whether `a` is nowhere dense in the subspace `s` (assumes `a ⊆ s`).
    fn nowhere_dense_in(&self, a: Subset, s: Subset) -> bool {
        let closure = s.iter().filter(|&y| !self.nbhd[y].is_disjoint(a));
        let closure: Subset = closure.collect();
        !s.iter().any(|y| (self.nbhd[y] & s).is_subset_of(closure))
    }

    /// Whether `a` is meager in the subspace topology on `s`.
    ///
    /// In a finite space the meager sets are the finite unions of nowhere
    /// dense sets; since subsets of nowhere dense sets are nowhere dense, `a`
    /// is meager exactly when each of its singletons is nowhere dense in `s`.
    pub fn is_meager_in(&self, a: Subset, s: Subset) -> Result<bool> {
        check_subset(s, self.size)?;
        if !a.is_subset_of(s) {
            return Err(Error::InvalidSubset {
                set: a,
                size: self.size,
                reason: "not contained in the ambient subspace",
            });
        }
        Ok(a.iter().all(|x| self.nowhere_dense_in(Subset::singleton(x), s)))
    }

    /// `a` is comeager in `s`: its complement in `s` is meager there.
    pub fn is_comeager_in(&self, a: Subset, s: Subset) -> Result<bool> {
        if !a.is_subset_of(s) {
            return Err(Error::InvalidSubset {
                set: a,
                size: self.size,
                reason: "not contained in the ambient subspace",
            });
        }
        self.is_meager_in(s - a, s)
    }

    pub fn separation(&self) -> Separation {
        let n = self.size;
        let pairs = || (0..n).flat_map(move |x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)));
        Separation {
            t0: pairs().all(|(x, y)| !(self.nbhd[x].contains(y) && self.nbhd[y].contains(x))),
            t1: pairs().all(|(x, y)| !self.nbhd[x].contains(y)),
            t2: pairs().all(|(x, y)| self.nbhd[x].is_disjoint(self.nbhd[y])),
        }
    }

    /// Subspace topology on `s`, with the points of `s` relabelled `0..|s|` in
    /// increasing order.
    pub fn subspace(&self, s: Subset) -> Result<FinTop> {
        check_subset(s, self.size)?;
        let points = s.to_vec();
        let index = |p: usize| points.binary_search(&p).expect("point of s");
        let nbhd = points.iter().map(|&p| (self.nbhd[p] & s).map(index)).collect();
        Ok(FinTop {
            size: points.len(),
            nbhd,
        })
    }

    /// `{0..k} × self` with `{0..k}` discrete; point `(i, x)` has index `i * size + x`.
    pub fn product_with_discrete(&self, k: usize) -> Result<FinTop> {
        check_size("product space", k * self.size)?;
        let nbhd = (0..k)
            .flat_map(|i| {
                self.nbhd
                    .iter()
                    .map(move |u| Subset::from_bits(u.bits() << (i * self.size)))
            })
            .collect();
        Ok(FinTop {
            size: k * self.size,
            nbhd,
        })
    }

    /// Product topology; point `(x, y)` has index `x * other.size + y`.
    pub fn product(&self, other: &FinTop) -> Result<FinTop> {
        let m = other.size;
        check_size("product space", self.size * m)?;
        let nbhd = (0..self.size)
            .flat_map(|x| {
                (0..m).map(move |y| {
                    self.nbhd[x]
                        .iter()
                        .flat_map(|a| other.nbhd[y].iter().map(move |b| a * m + b))
                        .collect()
                })
            })
            .collect();
        Ok(FinTop {
            size: self.size * m,
            nbhd,
        })
    }

    /// Quotient topology on the classes of `e` (class ids as points).
    pub fn quotient(&self, e: &EqRel) -> FinTop {
        assert_eq!(e.size(), self.size, "relation lives on a different space");
        let nbhd = (0..e.num_classes())
            .map(|c| {
                let mut s = e.class_members(c);
                loop {
                    let grown = e.saturate(s.iter().fold(s, |acc, x| acc | self.nbhd[x]));
                    if grown == s {
                        break;
                    }
                    s = grown;
                }
                e.project(s)
            })
            .collect();
        FinTop {
            size: e.num_classes(),
            nbhd,
        }
    }

    /// Transport along a bijection `f: self → other points`.
    pub fn transport(&self, f: &[usize]) -> Result<FinTop> {
        let n = self.size;
        let mut inverse = vec![usize::MAX; n];
        for (x, &y) in f.iter().enumerate() {
            if y >= n || inverse[y] != usize::MAX || f.len() != n {
                return Err(Error::AxiomViolation(format!(
                    "transport map is not a bijection at {x}"
                )));
            }
            inverse[y] = x;
        }
        let nbhd = (0..n).map(|y| self.nbhd[inverse[y]].map(|p| f[p])).collect();
        Ok(FinTop { size: n, nbhd })
    }

    /// The algebra of sets generated by the opens (Borel sets of a finite space).
    pub fn borel_algebra(&self) -> SetAlgebra {
        let atoms = EqRel::from_predicate(self.size, |x, y| {
            self.nbhd[x].contains(y) && self.nbhd[y].contains(x)
        })
        .expect("mutual specialization is an equivalence");
        SetAlgebra { atoms }
    }
}

/// `f` is continuous: `f(U_x) ⊆ U_{f(x)}` for every point.
pub fn is_continuous(f: &[usize], src: &FinTop, dst: &FinTop) -> bool {
    (0..src.size).all(|x| src.nbhd[x].map(|p| f[p]).is_subset_of(dst.nbhd[f[x]]))
}

/// `f` is open: every minimal neighbourhood has open image (images commute with unions).
pub fn is_open_map(f: &[usize], src: &FinTop, dst: &FinTop) -> bool {
    (0..src.size).all(|x| dst.is_open(src.nbhd[x].map(|p| f[p])))
}

pub fn is_bijection(f: &[usize], n: usize) -> bool {
    f.len() == n && f.iter().copied().collect::<Subset>() == Subset::full(n)
}

pub fn is_homeomorphism(f: &[usize], src: &FinTop, dst: &FinTop) -> bool {
    src.size == dst.size
        && is_bijection(f, dst.size)
        && is_continuous(f, src, dst)
        && is_open_map(f, src, dst)
}

/// An explicit family of subsets of `0..size`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SetFamily {
    size: usize,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(size: usize, members: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_size("family range", size)?;
        let members: BTreeSet<Subset> = members.into_iter().collect();
        for &m in &members {
            check_subset(m, size)?;
        }
        Ok(SetFamily {
            size,
            members: members.into_iter().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn is_closed_under_complement(&self) -> bool {
        self.members
            .iter()
            .all(|m| self.contains(m.complement(self.size)))
    }

    pub fn is_closed_under_union(&self) -> bool {
        self.members
            .iter()
            .all(|&a| self.members.iter().all(|&b| self.contains(a | b)))
    }
}

/// A finite algebra of sets, represented by its atoms.
///
/// Two algebras are equal exactly when their atom partitions are equal, so
/// family-level comparisons never need to enumerate the members.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetAlgebra {
    atoms: EqRel,
}

impl SetAlgebra {
    pub fn from_atoms(atoms: EqRel) -> Self {
        SetAlgebra { atoms }
    }

    pub fn size(&self) -> usize {
        self.atoms.size()
    }

    pub fn atoms(&self) -> &[Subset] {
        self.atoms.classes()
    }

    pub fn atom_relation(&self) -> &EqRel {
        &self.atoms
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.is_subset_of(Subset::full(self.size())) && self.atoms.saturate(s) == s
    }

    /// Number of members, `2^atoms`.
    pub fn cardinality(&self) -> u128 {
        1u128 << self.atoms.num_classes()
    }

    /// Every member. Exponential in the number of atoms.
    pub fn members(&self) -> SetFamily {
        let members = Subset::full(self.atoms.num_classes())
            .subsets()
            .map(|cs| self.atoms.preimage(cs));
        SetFamily::new(self.size(), members).expect("atoms cover the range")
    }

    /// `f` is measurable into `dst`: preimages of atoms are members of `self`.
    pub fn is_measurable(&self, f: &[usize], dst: &SetAlgebra) -> bool {
        dst.atoms().iter().all(|&atom| {
            let pre: Subset = (0..f.len()).filter(|&x| atom.contains(f[x])).collect();
            self.contains(pre)
        })
    }
}
