//! Set of undirected edges, used to keep the constructed graph simple.
//!
//! Open-addressing table over packed `(min, max)` vertex pairs. Insert-only;
//! grows at 70% load. The sentinel `u64::MAX` can never collide with a real
//! key because packed keys have `min < max`, so the high 32 bits are below
//! `u32::MAX`.

use alloc::vec;
use alloc::vec::Vec;

const EMPTY: u64 = u64::MAX;

#[derive(Clone, Debug)]
pub struct EdgeSet {
    slots: Vec<u64>,
    mask: usize,
    len: usize,
}

#[inline]
fn pack(u: u32, v: u32) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

#[inline]
fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl EdgeSet {
    pub fn with_capacity(edges: usize) -> Self {
        let cap = (edges.max(8) * 2).next_power_of_two();
        Self {
            slots: vec![EMPTY; cap],
            mask: cap - 1,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, u: u32, v: u32) -> bool {
        let key = pack(u, v);
        let mut i = mix(key) as usize & self.mask;
        loop {
            let s = self.slots[i];
            if s == key {
                return true;
            }
            if s == EMPTY {
                return false;
            }
            i = (i + 1) & self.mask;
        }
    }

    /// Inserts the edge; returns false if it was already present.
    pub fn insert(&mut self, u: u32, v: u32) -> bool {
        debug_assert_ne!(u, v, "self-loop in edge set");
        if self.len * 10 >= self.slots.len() * 7 {
            self.grow();
        }
        let key = pack(u, v);
        let mut i = mix(key) as usize & self.mask;
        loop {
            let s = self.slots[i];
            if s == key {
                return false;
            }
            if s == EMPTY {
                self.slots[i] = key;
                self.len += 1;
                return true;
            }
            i = (i + 1) & self.mask;
        }
    }

    fn grow(&mut self) {
        let new_cap = self.slots.len() * 2;
        let old = core::mem::replace(&mut self.slots, vec![EMPTY; new_cap]);
        self.mask = new_cap - 1;
        for key in old {
            if key != EMPTY {
                let mut i = mix(key) as usize & self.mask;
                while self.slots[i] != EMPTY {
                    i = (i + 1) & self.mask;
                }
                self.slots[i] = key;
            }
        }
    }
}
