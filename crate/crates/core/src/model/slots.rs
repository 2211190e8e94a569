use alloc::vec;
use alloc::vec::Vec;

/// Fixed-width bitset over the flattened calendar (`day * slots_per_day + slot`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotMask {
    words: Vec<u64>,
    len: usize,
}

impl SlotMask {
    pub fn empty(len: usize) -> Self {
        SlotMask { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut mask = SlotMask { words: vec![u64::MAX; len.div_ceil(64)], len };
        mask.trim();
        mask
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, bit: usize) {
        debug_assert!(bit < self.len);
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    #[inline]
    pub fn remove(&mut self, bit: usize) {
        self.words[bit / 64] &= !(1 << (bit % 64));
    }

    #[inline]
    pub fn contains(&self, bit: usize) -> bool {
        bit < self.len && self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect_with(&mut self, other: &SlotMask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union_with(&mut self, other: &SlotMask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn difference_with(&mut self, other: &SlotMask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn intersects(&self, other: &SlotMask) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &SlotMask) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }
}

/// Shape of the calendar grid and the defence duration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Calendar {
    pub days: usize,
    pub slots_per_day: usize,
    pub duration: usize,
}

impl Calendar {
    #[inline]
    pub fn total_slots(&self) -> usize {
        self.days * self.slots_per_day
    }

    #[inline]
    pub fn index(&self, day: usize, slot: usize) -> usize {
        day * self.slots_per_day + slot
    }

    #[inline]
    pub fn day_slot(&self, index: usize) -> (usize, usize) {
        (index / self.slots_per_day, index % self.slots_per_day)
    }

    /// A defence starting at `index` fits in its day.
    #[inline]
    pub fn is_valid_start(&self, index: usize) -> bool {
        index < self.total_slots() && index % self.slots_per_day + self.duration <= self.slots_per_day
    }

    /// Slots occupied by a defence starting at `index`.
    pub fn window(&self, index: usize) -> core::ops::Range<usize> {
        index..index + self.duration
    }

    pub fn window_mask(&self, index: usize) -> SlotMask {
        let mut mask = SlotMask::empty(self.total_slots());
        for s in self.window(index) {
            mask.insert(s);
        }
        mask
    }

    /// Start indices whose whole window lies inside `available`.
    pub fn window_starts(&self, available: &SlotMask) -> Vec<usize> {
        let mut starts = Vec::new();
        for day in 0..self.days {
            let mut run = 0usize;
            for slot in 0..self.slots_per_day {
                let idx = self.index(day, slot);
                if available.contains(idx) {
                    run += 1;
                    if run >= self.duration {
                        starts.push(idx + 1 - self.duration);
                    }
                } else {
                    run = 0;
                }
            }
        }
        starts
    }

    pub fn has_window(&self, available: &SlotMask) -> bool {
        for day in 0..self.days {
            let mut run = 0usize;
            for slot in 0..self.slots_per_day {
                if available.contains(self.index(day, slot)) {
                    run += 1;
                    if run >= self.duration {
                        return true;
                    }
                } else {
                    run = 0;
                }
            }
        }
        false
    }
}
