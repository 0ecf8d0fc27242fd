//! Set partitions of `{0, …, n-1}` in canonical form.

use serde::Serialize;
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("point {point} outside domain of size {size}")]
    OutOfRange { point: usize, size: usize },
    #[error("point {0} appears in more than one cell")]
    Repeated(usize),
    #[error("point {0} is not covered")]
    Uncovered(usize),
    #[error("empty cell")]
    EmptyCell,
}

/// Cells are sorted internally and ordered by their least point, so two
/// partitions are equal exactly when they group the points the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    #[serde(skip)]
    cell_of: Vec<u32>,
    cells: Vec<Vec<u32>>,
}

impl Partition {
    pub fn singletons(size: usize) -> Self {
        Partition {
            cell_of: (0..size as u32).collect(),
            cells: (0..size as u32).map(|x| vec![x]).collect(),
        }
    }

    pub fn whole(size: usize) -> Self {
        if size == 0 {
            return Partition {
                cell_of: Vec::new(),
                cells: Vec::new(),
            };
        }
        Partition {
            cell_of: vec![0; size],
            cells: vec![(0..size as u32).collect()],
        }
    }

    /// Any labelling of points by block ids; labels need not be contiguous.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let mut cells: Vec<Vec<u32>> = Vec::new();
        let mut cell_of = Vec::with_capacity(labels.len());
        for (x, label) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(*label).or_insert(next);
            if id == cells.len() {
                cells.push(Vec::new());
            }
            cells[id].push(x as u32);
            cell_of.push(id as u32);
        }
        // Labels were numbered by first occurrence, which is already the
        // least-point order.
        Partition { cell_of, cells }
    }

    pub fn from_cells(size: usize, cells: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut labels = vec![usize::MAX; size];
        for (id, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(PartitionError::EmptyCell);
            }
            for &x in cell {
                if x >= size {
                    return Err(PartitionError::OutOfRange { point: x, size });
                }
                if labels[x] != usize::MAX {
                    return Err(PartitionError::Repeated(x));
                }
                labels[x] = id;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(PartitionError::Uncovered(x));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn size(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    #[inline]
    pub fn cell_of(&self, x: usize) -> usize {
        self.cell_of[x] as usize
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() == self.size()
    }

    /// True when `g` maps every cell onto a cell.
    pub fn is_invariant_under(&self, g: &Permutation) -> bool {
        self.cells.iter().all(|cell| {
            let target = self.cell_of(g.apply(cell[0] as usize));
            let len = self.cells[target].len();
            len == cell.len() && cell.iter().all(|&x| self.cell_of(g.apply(x as usize)) == target)
        })
    }

    /// The permutation `g` induces on the cells.
    pub fn induced(&self, g: &Permutation) -> Permutation {
        let images = self
            .cells
            .iter()
            .map(|cell| self.cell_of[g.apply(cell[0] as usize)])
            .collect();
        Permutation::from_raw(images)
    }

    /// Merges cells of `self` according to a partition `outer` of the cells.
    pub fn coarsen(&self, outer: &Partition) -> Partition {
        assert_eq!(outer.size(), self.cell_count(), "outer partition must cover the cells");
        let labels: Vec<usize> = (0..self.size())
            .map(|x| outer.cell_of(self.cell_of(x)))
            .collect();
        Self::from_labels(&labels)
    }

    /// True when every cell of `self` lies inside a cell of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.size() == other.size()
            && self.cells.iter().all(|cell| {
                let c = other.cell_of(cell[0] as usize);
                cell.iter().all(|&x| other.cell_of(x as usize) == c)
            })
    }
}

/// Orbits of the group generated by `generators` on `0..degree`.
pub fn orbits_of(degree: usize, generators: &[Permutation]) -> Partition {
    let mut label = vec![usize::MAX; degree];
    let mut stack = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        stack.push(start);
        while let Some(x) = stack.pop() {
            for g in generators {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = start;
                    stack.push(y);
                }
            }
        }
    }
    Partition::from_labels(&label)
}
