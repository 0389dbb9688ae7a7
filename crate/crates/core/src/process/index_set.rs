//! Dense index set split into an unsaturated prefix and a saturated suffix.
//!
//! `perm[0..boundary]` holds the unsaturated vertices, the rest are saturated.
//! Membership moves across the boundary with one swap, and either side can be
//! sampled uniformly in O(1).

use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct SplitIndexSet {
    perm: Vec<u32>,
    pos: Vec<u32>,
    boundary: u32,
}

impl SplitIndexSet {
    /// All `n` vertices start unsaturated.
    pub fn new(n: u32) -> Self {
        let perm: Vec<u32> = (0..n).collect();
        let pos = perm.clone();
        Self {
            perm,
            pos,
            boundary: n,
        }
    }

    #[inline]
    pub fn len(&self) -> u32 {
        self.perm.len() as u32
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    #[inline]
    pub fn unsat_len(&self) -> u32 {
        self.boundary
    }

    #[inline]
    pub fn sat_len(&self) -> u32 {
        self.len() - self.boundary
    }

    #[inline]
    pub fn is_unsaturated(&self, v: u32) -> bool {
        self.pos[v as usize] < self.boundary
    }

    /// Move `v` from the unsaturated prefix to the saturated suffix.
    pub fn saturate(&mut self, v: u32) {
        let p = self.pos[v as usize];
        debug_assert!(p < self.boundary, "saturate of already saturated vertex");
        let last = self.boundary - 1;
        let w = self.perm[last as usize];
        self.perm.swap(p as usize, last as usize);
        self.pos[v as usize] = last;
        self.pos[w as usize] = p;
        self.boundary = last;
    }

    #[inline]
    pub fn unsat_at(&self, i: u32) -> u32 {
        debug_assert!(i < self.boundary);
        self.perm[i as usize]
    }

    #[inline]
    pub fn sat_at(&self, i: u32) -> u32 {
        debug_assert!(i < self.sat_len());
        self.perm[(self.boundary + i) as usize]
    }

    pub fn iter_unsat(&self) -> impl Iterator<Item = u32> + '_ {
        self.perm[..self.boundary as usize].iter().copied()
    }

    pub fn iter_sat(&self) -> impl Iterator<Item = u32> + '_ {
        self.perm[self.boundary as usize..].iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturate_moves_across_boundary() {
        let mut s = SplitIndexSet::new(6);
        assert_eq!(s.unsat_len(), 6);
        s.saturate(2);
        s.saturate(5);
        assert_eq!(s.unsat_len(), 4);
        assert!(!s.is_unsaturated(2));
        assert!(!s.is_unsaturated(5));
        for v in [0, 1, 3, 4] {
            assert!(s.is_unsaturated(v));
        }
        let mut unsat: Vec<u32> = s.iter_unsat().collect();
        unsat.sort_unstable();
        assert_eq!(unsat, vec![0, 1, 3, 4]);
        let mut sat: Vec<u32> = s.iter_sat().collect();
        sat.sort_unstable();
        assert_eq!(sat, vec![2, 5]);
    }
}
