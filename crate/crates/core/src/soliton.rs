//! Soliton identification and the pairing of solitons across one step.
//!
//! Two independent identifiers are provided. [`identify_batch`] works one
//! excursion at a time, repeatedly removing the leftmost run that is at least
//! as long as the run before it. [`identify_stream`] reads the configuration
//! once, keeping a stack of runs with their sites; whenever the two top runs
//! have the same length they annihilate into a soliton. Both pad the window
//! with empty boxes until it is closed, so every ball ends up in a soliton.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::BallConfig;
use crate::error::{Error, Result};

/// A `k`-soliton: `k` ball sites (head) and `k` empty sites (tail).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Soliton {
    pub head: Vec<usize>,
    pub tail: Vec<usize>,
}

impl Soliton {
    pub fn size(&self) -> usize {
        self.head.len()
    }

    /// `x(gamma)`, the leftmost site of the soliton.
    pub fn leftmost(&self) -> usize {
        self.head[0].min(self.tail[0])
    }

    pub fn rightmost(&self) -> usize {
        self.head[self.head.len() - 1].max(self.tail[self.tail.len() - 1])
    }

    /// Head and tail sites merged in increasing order.
    pub fn sites(&self) -> Vec<usize> {
        let mut all = Vec::with_capacity(2 * self.size());
        all.extend_from_slice(&self.head);
        all.extend_from_slice(&self.tail);
        all.sort_unstable();
        all
    }

    /// Shifts every site by `d` (used for isolated solitons and tests).
    pub fn translated(&self, d: usize) -> Soliton {
        Soliton {
            head: self.head.iter().map(|&x| x + d).collect(),
            tail: self.tail.iter().map(|&x| x + d).collect(),
        }
    }
}

/// All solitons of a configuration plus the records left over.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SolitonSet {
    solitons: Vec<Soliton>,
    records: Vec<usize>,
    window: usize,
}

impl SolitonSet {
    fn from_parts(mut solitons: Vec<Soliton>, records: Vec<usize>, window: usize) -> Self {
        solitons.sort_by_key(|s| (s.leftmost(), s.size()));
        SolitonSet {
            solitons,
            records,
            window,
        }
    }

    /// Solitons ordered by `(leftmost, size)`.
    pub fn solitons(&self) -> &[Soliton] {
        &self.solitons
    }

    pub fn len(&self) -> usize {
        self.solitons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solitons.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Soliton> {
        self.solitons.iter()
    }

    /// Sites of the closed window that belong to no soliton.
    pub fn records(&self) -> &[usize] {
        &self.records
    }

    /// Length of the closed window the set was computed on.
    pub fn window(&self) -> usize {
        self.window
    }

    /// The `k`-solitons ordered by leftmost site.
    pub fn of_size(&self, k: usize) -> impl Iterator<Item = &Soliton> + '_ {
        self.solitons.iter().filter(move |s| s.size() == k)
    }

    pub fn max_size(&self) -> usize {
        self.solitons.iter().map(Soliton::size).max().unwrap_or(0)
    }

    /// Entry `k` is the number of `k`-solitons; entry 0 is always zero.
    pub fn size_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.max_size() + 1];
        for s in &self.solitons {
            counts[s.size()] += 1;
        }
        counts
    }

    /// For every site of the closed window, the index of its soliton.
    pub fn owners(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.window];
        for (i, s) in self.solitons.iter().enumerate() {
            for &x in s.head.iter().chain(&s.tail) {
                owner[x] = Some(i);
            }
        }
        owner
    }
}

impl<'a> IntoIterator for &'a SolitonSet {
    type Item = &'a Soliton;
    type IntoIter = core::slice::Iter<'a, Soliton>;

    fn into_iter(self) -> Self::IntoIter {
        self.solitons.iter()
    }
}

fn make_soliton(first_bit: bool, first: Vec<usize>, second: Vec<usize>) -> Soliton {
    let (mut head, mut tail) = if first_bit {
        (first, second)
    } else {
        (second, first)
    };
    head.sort_unstable();
    tail.sort_unstable();
    Soliton { head, tail }
}

/// Single left-to-right pass with a stack of runs.
pub fn identify_stream(config: &BallConfig) -> SolitonSet {
    let closed = config.closed();
    let mut stack: Vec<(bool, Vec<usize>)> = Vec::new();
    let mut solitons = Vec::new();
    let mut records = Vec::new();
    for (x, &b) in closed.bits().iter().enumerate() {
        match stack.last_mut() {
            None if !b => {
                records.push(x);
                continue;
            }
            Some((bit, sites)) if *bit == b => sites.push(x),
            _ => stack.push((b, vec![x])),
        }
        let n = stack.len();
        if n >= 2 && stack[n - 1].1.len() == stack[n - 2].1.len() {
            let (_, top) = stack.pop().unwrap();
            let (bit, below) = stack.pop().unwrap();
            solitons.push(make_soliton(bit, below, top));
        }
    }
    debug_assert!(stack.is_empty());
    SolitonSet::from_parts(solitons, records, closed.len())
}

/// Leftmost-run removal, applied to each excursion separately.
pub fn identify_batch(config: &BallConfig) -> SolitonSet {
    let closed = config.closed();
    let records: Vec<usize> = closed.records().sites().to_vec();
    let mut bounds: Vec<i64> = Vec::with_capacity(records.len() + 2);
    bounds.push(-1);
    bounds.extend(records.iter().map(|&r| r as i64));
    bounds.push(closed.len() as i64);

    let mut solitons = Vec::new();
    for w in bounds.windows(2) {
        let (lo, hi) = ((w[0] + 1) as usize, w[1] as usize);
        if lo >= hi {
            continue;
        }
        let mut runs: Vec<(bool, Vec<usize>)> = Vec::new();
        for x in lo..hi {
            let b = closed.bits()[x];
            match runs.last_mut() {
                Some((bit, sites)) if *bit == b => sites.push(x),
                _ => runs.push((b, vec![x])),
            }
        }
        extract_runs(&mut runs, &mut solitons);
    }
    SolitonSet::from_parts(solitons, records, closed.len())
}

fn extract_runs(runs: &mut Vec<(bool, Vec<usize>)>, out: &mut Vec<Soliton>) {
    let mut i = 1usize;
    while !runs.is_empty() {
        while i < runs.len() && runs[i].1.len() < runs[i - 1].1.len() {
            i += 1;
        }
        assert!(i < runs.len(), "excursion word without a selectable run");
        let k = runs[i - 1].1.len();
        let taken: Vec<usize> = runs[i].1.drain(..k).collect();
        let (bit, prev) = runs.remove(i - 1);
        out.push(make_soliton(bit, prev, taken));
        i -= 1;
        if runs[i].1.is_empty() {
            runs.remove(i);
        } else if i >= 1 {
            let rest = runs.remove(i);
            runs[i - 1].1.extend(rest.1);
            i -= 1;
        }
        i = i.saturating_sub(1).max(1);
    }
}

/// Default identifier.
pub fn identify(config: &BallConfig) -> SolitonSet {
    identify_stream(config)
}

/// Solitons of `T eta` together with the image of each soliton of `eta`.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub after: SolitonSet,
    /// `image[i]` is the index in `after` of the successor of soliton `i`.
    pub image: Vec<usize>,
}

/// Matches the tail of every soliton of `before` with a head in `after`.
pub fn pair_one_step(before: &SolitonSet, after: &BallConfig) -> Result<Pairing> {
    let after = identify(after);
    pair_sets(before, after)
}

/// [`pair_one_step`] when the later soliton set is already known.
pub fn pair_sets(before: &SolitonSet, after: SolitonSet) -> Result<Pairing> {
    if before.len() != after.len() {
        return Err(Error::Conservation {
            before: before.len(),
            after: after.len(),
        });
    }
    let mut by_head = vec![usize::MAX; after.window().max(before.window()) + 1];
    for (j, s) in after.iter().enumerate() {
        by_head[s.head[0]] = j;
    }
    let mut used = vec![false; after.len()];
    let mut image = Vec::with_capacity(before.len());
    for s in before {
        let j = by_head
            .get(s.tail[0])
            .copied()
            .filter(|&j| j != usize::MAX && after.solitons()[j].head == s.tail)
            .filter(|&j| !used[j])
            .ok_or_else(|| Error::Pairing {
                size: s.size(),
                tail: s.tail.clone(),
            })?;
        used[j] = true;
        image.push(j);
    }
    Ok(Pairing { after, image })
}

/// Solitons of `eta` and of `T^steps eta`, with the image of each initial
/// soliton obtained by composing one-step pairings.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub initial: SolitonSet,
    pub config: BallConfig,
    pub solitons: SolitonSet,
    /// `image[i]` indexes the successor of initial soliton `i` in `solitons`.
    pub image: Vec<usize>,
}

pub fn track(config: &BallConfig, steps: usize) -> Result<Tracked> {
    let initial = identify(config);
    let mut image: Vec<usize> = (0..initial.len()).collect();
    let mut cur = config.clone();
    let mut set = initial.clone();
    for _ in 0..steps {
        cur = cur.apply_t();
        let p = pair_one_step(&set, &cur)?;
        for j in image.iter_mut() {
            *j = p.image[*j];
        }
        set = p.after;
    }
    Ok(Tracked {
        initial,
        config: cur,
        solitons: set,
        image,
    })
}
