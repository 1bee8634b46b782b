//! Equivalence relations on a dense index range, stored as class assignments.

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// An equivalence relation on `0..size`.
///
/// Class ids are canonical: classes are numbered in order of their smallest
/// member, so two equal relations always have identical `class_id` vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EqRel {
    class_id: Vec<usize>,
    classes: Vec<Subset>,
}

impl EqRel {
    /// Builds a relation from an arbitrary labelling; equal labels mean related.
    pub fn from_labels<L: PartialEq>(labels: &[L]) -> Self {
        let mut reps: Vec<usize> = Vec::new();
        let mut class_id = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            match reps.iter().position(|&r| labels[r] == *l) {
                Some(c) => class_id.push(c),
                None => {
                    class_id.push(reps.len());
                    reps.push(i);
                }
            }
        }
        Self::from_canonical(class_id)
    }

    fn from_canonical(class_id: Vec<usize>) -> Self {
        let n_classes = class_id.iter().max().map_or(0, |m| m + 1);
        let mut classes = vec![Subset::EMPTY; n_classes];
        for (i, &c) in class_id.iter().enumerate() {
            classes[c].insert(i);
        }
        EqRel { class_id, classes }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_canonical((0..size).collect())
    }

    pub fn full(size: usize) -> Self {
        Self::from_canonical(vec![0; size])
    }

    /// Builds the relation given by a predicate, checking that it really is
    /// an equivalence relation.
    pub fn from_predicate(size: usize, related: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let m: Vec<Vec<bool>> = (0..size)
            .map(|x| (0..size).map(|y| related(x, y)).collect())
            .collect();
        for x in 0..size {
            if !m[x][x] {
                return Err(Error::AxiomViolation(format!("relation not reflexive at {x}")));
            }
            for y in 0..size {
                if m[x][y] != m[y][x] {
                    return Err(Error::AxiomViolation(format!(
                        "relation not symmetric at ({x},{y})"
                    )));
                }
                if m[x][y] {
                    if let Some(z) = (0..size).find(|&z| m[y][z] && !m[x][z]) {
                        return Err(Error::AxiomViolation(format!(
                            "relation not transitive at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        let mut class_id = vec![usize::MAX; size];
        let mut next = 0;
        for x in 0..size {
            if class_id[x] == usize::MAX {
                for y in x..size {
                    if m[x][y] {
                        class_id[y] = next;
                    }
                }
                next += 1;
            }
        }
        Ok(Self::from_canonical(class_id))
    }

    /// The finest equivalence relation containing every pair.
    pub fn generated_by(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::<usize>::new(size);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        Self::from_labels(&uf.into_labeling())
    }

    /// Finest common coarsening of two relations on the same range.
    pub fn join(&self, other: &EqRel) -> EqRel {
        assert_eq!(self.size(), other.size());
        let pairs = self.classes.iter().chain(other.classes.iter()).flat_map(|c| {
            let first = (*c).min().unwrap_or(0);
            c.iter().map(move |x| (first, x))
        });
        Self::generated_by(self.size(), pairs)
    }

    pub fn size(&self) -> usize {
        self.class_id.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_id[x]
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_id
    }

    pub fn classes(&self) -> &[Subset] {
        &self.classes
    }

    pub fn class_members(&self, c: usize) -> Subset {
        self.classes[c]
    }

    /// Canonical representative (smallest index) of a class.
    pub fn rep(&self, c: usize) -> usize {
        self.classes[c].min().expect("classes are nonempty")
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_id[x] == self.class_id[y]
    }

    /// Union of the classes meeting `set`.
    pub fn saturate(&self, set: Subset) -> Subset {
        set.iter()
            .fold(Subset::EMPTY, |acc, x| acc | self.classes[self.class_id[x]])
    }

    /// Set of class ids meeting `set`.
    pub fn project(&self, set: Subset) -> Subset {
        set.map(|x| self.class_id[x])
    }

    /// Union of the given classes.
    pub fn preimage(&self, classes: Subset) -> Subset {
        classes.iter().fold(Subset::EMPTY, |acc, c| acc | self.classes[c])
    }
}
