//! Finite strict partial orders stored as transitively closed "below" sets.

use fixedbitset::FixedBitSet;

/// `below[x]` holds every `y` with `y ≺ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    below: Vec<FixedBitSet>,
}

impl Poset {
    /// An antichain of `n` points.
    pub fn discrete(n: usize) -> Poset {
        Poset {
            below: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    /// Transitive closure of `edges` (`(a, b)` meaning `a ≺ b`).
    /// Returns `Err(x)` with a point on a cycle if the closure is not irreflexive.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Poset, usize> {
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            below[b].insert(a);
        }
        for k in 0..n {
            let bk = below[k].clone();
            for row in below.iter_mut() {
                if row.contains(k) {
                    row.union_with(&bk);
                }
            }
        }
        for (x, row) in below.iter().enumerate() {
            if row.contains(x) {
                return Err(x);
            }
        }
        Ok(Poset { below })
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    /// `a ≺ b`
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    /// `a ≼ b`
    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn below(&self, x: usize) -> &FixedBitSet {
        &self.below[x]
    }

    /// `↓x` including `x`.
    pub fn down_closure(&self, x: usize) -> FixedBitSet {
        let mut set = self.below[x].clone();
        set.grow(self.len());
        set.insert(x);
        set
    }

    /// Immediate predecessors of `x`.
    pub fn covers(&self, x: usize) -> Vec<usize> {
        self.below[x]
            .ones()
            .filter(|&y| !self.below[x].ones().any(|z| self.lt(y, z)))
            .collect()
    }

    /// Covering pairs `(below, above)`, sorted.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.covers(x) {
                out.push((y, x));
            }
        }
        out.sort_unstable();
        out
    }

    /// A linear extension: every point comes after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.len()).collect();
        pts.sort_by_key(|&x| (self.below[x].count_ones(..), x));
        pts
    }

    /// Restriction to `keep`, re-indexed in the order given.
    pub fn restrict(&self, keep: &[usize]) -> Poset {
        let n = keep.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.lt(b, a) {
                    below[i].insert(j);
                }
            }
        }
        Poset { below }
    }

    /// Number of points on a longest `≺`-chain.
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.len()];
        for x in self.linear_extension() {
            h[x] = 1 + self.below[x].ones().map(|y| h[y]).max().unwrap_or(0);
        }
        h.into_iter().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_covers() {
        let p = Poset::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.lt(0, 2));
        assert_eq!(p.covers(2), vec![1]);
        assert_eq!(p.cover_edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.height(), 3);
    }

    #[test]
    fn cycles_rejected() {
        assert!(Poset::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::from_edges(1, &[(0, 0)]).is_err());
    }

    #[test]
    fn restrict_reindexes() {
        let p = Poset::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let r = p.restrict(&[2, 0]);
        assert!(r.lt(1, 0));
        assert!(!r.lt(0, 1));
    }
}
