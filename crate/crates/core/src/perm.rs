//! Permutations of a finite 0-indexed domain.
//!
//! Products are read left to right: `p * q` first applies `p`, then `q`, so
//! `(p * q).apply(x) == q.apply(p.apply(x))`. Conjugation follows the same
//! convention, `x^g = g⁻¹ x g`.

use std::fmt;
use std::ops::Mul;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("domain size mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },
    #[error("image list is not a bijection on 0..{0}")]
    NotABijection(usize),
    #[error("point {point} outside domain of size {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group closure exceeds the element cap of {cap}")]
    ElementCapExceeded { cap: usize },
    #[error("a group needs at least one generator")]
    NoGenerators,
    #[error("permutation is not an element of the group")]
    NotInGroup,
}

/// A bijection on `{0, …, n-1}` stored by its image sequence.
///
/// The derived ordering compares image sequences lexicographically, which is
/// the canonical order used for every sorted list in this crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotABijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2]]` is `(0 1 2)`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                if touched[x] {
                    return Err(PermError::NotABijection(degree));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.iter().map(|&x| x as usize).collect()).is_ok());
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DomainMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        &(&g.inverse() * self) * g
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1usize;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

/// `compose(p, q)` applies `p` first: `compose(p, q)(x) = q(p(x))`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    p.then(q)
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on a domain size mismatch; use [`compose`] for the checked form.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs).expect("permutation domain mismatch")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
