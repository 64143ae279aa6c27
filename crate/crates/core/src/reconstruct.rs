//! Rebuilding configurations from soliton components.
//!
//! An excursion is built top-down: for `k` from the largest size to 1, the
//! `k`-slots of the current word are listed (the record in front of the word
//! is slot 0) and `zeta_k` solitons are inserted right after each slot.
//! A `k`-soliton inserted after a site carrying bit `b` (records count as 0)
//! is the block `(1-b)^k b^k`, which keeps the walk above the record.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::{BallConfig, Excursion};
use crate::slots::{SlotComponents, SlotConfig};

/// Anything that can answer `zeta_k(i)` for the builder.
pub trait ComponentSource {
    /// Largest size with non-zero entries.
    fn max_size(&self) -> usize;
    fn get(&mut self, k: usize, i: i64) -> usize;
}

impl ComponentSource for SlotComponents {
    fn max_size(&self) -> usize {
        SlotComponents::max_size(self)
    }

    fn get(&mut self, k: usize, i: i64) -> usize {
        SlotComponents::get(self, k, i)
    }
}

impl<S: ComponentSource + ?Sized> ComponentSource for &mut S {
    fn max_size(&self) -> usize {
        (**self).max_size()
    }

    fn get(&mut self, k: usize, i: i64) -> usize {
        (**self).get(k, i)
    }
}

/// Number of `k`-slots of an excursion, counting the record on its left.
pub fn n_slots_in_excursion(slots: &SlotConfig, excursion: &Excursion, k: usize) -> usize {
    1 + excursion.support().filter(|&x| slots.is_slot(x, k)).count()
}

/// How many labels of each size have been used on either side of Record 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCursor {
    /// `right[k - 1]`: labels `0..right[k - 1]` are used.
    pub right: Vec<i64>,
    /// `left[k - 1]`: labels `left[k - 1]..0` are used.
    pub left: Vec<i64>,
}

impl ComponentCursor {
    pub fn new(max_size: usize) -> Self {
        ComponentCursor {
            right: vec![0; max_size],
            left: vec![0; max_size],
        }
    }
}

/// Letters of a built word: bit and slot order.
type Word = Vec<(bool, u32)>;

fn build_word<S, F>(src: &mut S, kmax: usize, mut label: F) -> (Word, Vec<usize>)
where
    S: ComponentSource + ?Sized,
    F: FnMut(usize, usize, usize) -> i64,
{
    let mut word: Word = Vec::new();
    let mut ns = vec![0usize; kmax];
    for k in (1..=kmax).rev() {
        let mut slots: Vec<Option<usize>> = vec![None];
        slots.extend(
            word.iter()
                .enumerate()
                .filter(|(_, &(_, o))| o >= k as u32)
                .map(|(p, _)| Some(p)),
        );
        let n = slots.len();
        ns[k - 1] = n;
        for i in (0..n).rev() {
            let c = src.get(k, label(k, i, n));
            if c == 0 {
                continue;
            }
            let (at, bit) = match slots[i] {
                None => (0, false),
                Some(p) => (p + 1, word[p].0),
            };
            let mut block = Vec::with_capacity(2 * k * c);
            for _ in 0..c {
                block.extend((0..k as u32).map(|j| (!bit, j)));
                block.extend((0..k as u32).map(|j| (bit, j)));
            }
            word.splice(at..at, block);
        }
    }
    (word, ns)
}

/// Builds the next excursion to the right of the cursor and advances it.
pub fn reconstruct_excursion<S: ComponentSource + ?Sized>(
    src: &mut S,
    cursor: &mut ComponentCursor,
) -> Vec<bool> {
    let kmax = cursor.right.len();
    let start = cursor.right.clone();
    let (word, ns) = build_word(src, kmax, |k, i, _| start[k - 1] + i as i64);
    for (c, n) in cursor.right.iter_mut().zip(ns) {
        *c += n as i64;
    }
    word.into_iter().map(|(b, _)| b).collect()
}

/// Builds the next excursion to the left of the cursor and moves it left.
pub fn reconstruct_left_excursion<S: ComponentSource + ?Sized>(
    src: &mut S,
    cursor: &mut ComponentCursor,
) -> Vec<bool> {
    let kmax = cursor.left.len();
    let start = cursor.left.clone();
    let (word, ns) = build_word(src, kmax, |k, i, n| start[k - 1] - n as i64 + i as i64);
    for (c, n) in cursor.left.iter_mut().zip(ns) {
        *c -= n as i64;
    }
    word.into_iter().map(|(b, _)| b).collect()
}

/// A configuration with a marked record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rooted {
    pub config: BallConfig,
    /// Site of Record 0.
    pub origin: usize,
}

/// `n_left` excursions to the left of Record 0 and `n_right` to its right,
/// each preceded by its record.
pub fn reconstruct_from<S: ComponentSource + ?Sized>(
    src: &mut S,
    n_right: usize,
    n_left: usize,
) -> Rooted {
    let kmax = src.max_size();
    let mut cursor = ComponentCursor::new(kmax);
    let mut left = Vec::with_capacity(n_left);
    for _ in 0..n_left {
        left.push(reconstruct_left_excursion(src, &mut cursor));
    }
    let mut bits = Vec::new();
    for w in left.iter().rev() {
        bits.push(false);
        bits.extend_from_slice(w);
    }
    let origin = bits.len();
    for _ in 0..n_right {
        bits.push(false);
        bits.extend(reconstruct_excursion(src, &mut cursor));
    }
    Rooted {
        config: BallConfig::new(bits),
        origin,
    }
}

pub fn reconstruct(zeta: &SlotComponents, n_right: usize, n_left: usize) -> Rooted {
    let mut src = zeta.clone();
    reconstruct_from(&mut src, n_right, n_left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slots::{components, components_at};
    use alloc::string::ToString;

    fn zeta(entries: &[(usize, i64, usize)]) -> SlotComponents {
        let mut z = SlotComponents::new();
        for &(k, i, c) in entries {
            z.set(k, i, c);
        }
        z
    }

    #[test]
    fn zero_components_give_records() {
        let r = reconstruct(&SlotComponents::new(), 3, 0);
        assert_eq!(r.config.to_string(), "000");
        assert_eq!(r.origin, 0);
    }

    #[test]
    fn single_soliton_excursion() {
        let r = reconstruct(&zeta(&[(2, 0, 1)]), 1, 0);
        assert_eq!(r.config.to_string(), "01100");
    }

    #[test]
    fn nested_excursion_round_trip() {
        let z = zeta(&[(3, 0, 1), (1, 1, 1)]);
        let r = reconstruct(&z, 3, 0);
        assert_eq!(r.config.to_string(), "01101100000");
        assert_eq!(components(&r.config).unwrap(), z);
    }

    #[test]
    fn left_side_uses_negative_labels() {
        let z = zeta(&[(1, -1, 1), (2, -3, 1), (1, 0, 2)]);
        let r = reconstruct(&z, 2, 4);
        let back = components_at(&r.config, r.origin as i64).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn slot_counts_per_excursion() {
        let c: BallConfig = "01110000".parse().unwrap();
        let slots = SlotConfig::of(&c);
        let exc = c.excursions().unwrap();
        let e = exc.iter().find(|e| !e.is_empty()).unwrap();
        assert_eq!(n_slots_in_excursion(&slots, e, 1), 5);
        assert_eq!(n_slots_in_excursion(&slots, e, 2), 3);
        assert_eq!(n_slots_in_excursion(&slots, e, 3), 1);
        assert_eq!(n_slots_in_excursion(&slots, &exc[0], 1), 1);
    }
}
