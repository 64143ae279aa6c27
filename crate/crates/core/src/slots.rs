//! Slot configurations, slot labels anchored at a record, soliton components,
//! flows through a record and the component shift law.
//!
//! The `j`-th head site and the `j`-th tail site of a soliton have order
//! `j - 1`; records have infinite order. A site is a `k`-slot when its order
//! is at least `k`. Labels of `k`-slots are anchored so that label 0 is the
//! chosen record. Everything outside the closed window is a record, so the
//! labelling extends to all integers.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::{record_site, BallConfig};
use crate::error::{Error, Result};
use crate::reconstruct::reconstruct;
use crate::soliton::{identify, track, SolitonSet};

/// Order of a record site.
pub const RECORD: u32 = u32::MAX;

/// Order of every site of a closed window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotConfig {
    order: Vec<u32>,
    max_size: usize,
}

/// Assigns slot orders from an identified soliton set.
pub fn slot_configuration(solitons: &SolitonSet) -> SlotConfig {
    let mut order = vec![RECORD; solitons.window()];
    for s in solitons {
        for (j, (&h, &t)) in s.head.iter().zip(&s.tail).enumerate() {
            order[h] = j as u32;
            order[t] = j as u32;
        }
    }
    SlotConfig {
        order,
        max_size: solitons.max_size(),
    }
}

impl SlotConfig {
    pub fn of(config: &BallConfig) -> SlotConfig {
        slot_configuration(&identify(config))
    }

    pub fn window(&self) -> usize {
        self.order.len()
    }

    /// Order of any site; sites outside the window are records.
    pub fn order(&self, site: i64) -> u32 {
        usize::try_from(site)
            .ok()
            .and_then(|s| self.order.get(s).copied())
            .unwrap_or(RECORD)
    }

    pub fn orders(&self) -> &[u32] {
        &self.order
    }

    pub fn is_record(&self, site: i64) -> bool {
        self.order(site) == RECORD
    }

    pub fn is_slot(&self, site: i64, k: usize) -> bool {
        self.order(site) >= k as u32
    }

    /// Largest soliton size present.
    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// In-window `k`-slots in increasing order.
    pub fn slots(&self, k: usize) -> Vec<usize> {
        self.order
            .iter()
            .enumerate()
            .filter(|&(_, &o)| o >= k as u32)
            .map(|(x, _)| x)
            .collect()
    }
}

/// Positions of labelled `k`-slots, with label 0 at an anchor record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotTable {
    anchor: i64,
    window: usize,
    // per_k[k - 1]; sizes beyond the last entry only have records as slots.
    per_k: Vec<Vec<usize>>,
    base: Vec<i64>,
}

/// Enumerates slots for every size, anchored at `record_zero`.
pub fn enumerate_slots(slots: &SlotConfig, record_zero: i64) -> Result<SlotTable> {
    if !slots.is_record(record_zero) {
        return Err(Error::NotRecord { site: record_zero });
    }
    let levels = slots.max_size().max(1);
    let mut per_k = Vec::with_capacity(levels);
    let mut base = Vec::with_capacity(levels);
    for k in 1..=levels {
        let p = slots.slots(k);
        let b = if record_zero < 0 {
            record_zero
        } else {
            p.partition_point(|&x| (x as i64) < record_zero) as i64
        };
        per_k.push(p);
        base.push(b);
    }
    Ok(SlotTable {
        anchor: record_zero,
        window: slots.window(),
        per_k,
        base,
    })
}

impl SlotTable {
    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    fn level(&self, k: usize) -> usize {
        assert!(k >= 1, "slot sizes start at 1");
        k.min(self.per_k.len()) - 1
    }

    /// In-window `k`-slots.
    pub fn sites(&self, k: usize) -> &[usize] {
        &self.per_k[self.level(k)]
    }

    /// `s_k(xi, i)` for any integer label.
    pub fn site(&self, k: usize, label: i64) -> i64 {
        let l = self.level(k);
        let p = &self.per_k[l];
        let idx = label + self.base[l];
        if idx < 0 {
            idx
        } else if (idx as usize) < p.len() {
            p[idx as usize] as i64
        } else {
            self.window as i64 + (idx - p.len() as i64)
        }
    }

    /// Label of the `k`-slot at `site`, if it is one.
    pub fn label(&self, k: usize, site: i64) -> Option<i64> {
        let l = self.level(k);
        let p = &self.per_k[l];
        let idx = if site < 0 {
            site
        } else if (site as usize) < self.window {
            p.binary_search(&(site as usize)).ok()? as i64
        } else {
            p.len() as i64 + site - self.window as i64
        };
        Some(idx - self.base[l])
    }

    /// Label of the last `k`-slot strictly left of `site`.
    pub fn label_before(&self, k: usize, site: i64) -> i64 {
        let l = self.level(k);
        let p = &self.per_k[l];
        let idx = if site <= 0 {
            site - 1
        } else if (site as usize) <= self.window {
            p.partition_point(|&x| (x as i64) < site) as i64 - 1
        } else {
            p.len() as i64 + site - self.window as i64 - 1
        };
        idx - self.base[l]
    }
}

/// The family `(M_k xi)_k` of soliton counts per labelled slot.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SlotComponents {
    entries: BTreeMap<(usize, i64), usize>,
}

impl SlotComponents {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, k: usize, i: i64) -> usize {
        self.entries.get(&(k, i)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, k: usize, i: i64, count: usize) {
        if count == 0 {
            self.entries.remove(&(k, i));
        } else {
            self.entries.insert((k, i), count);
        }
    }

    pub fn add(&mut self, k: usize, i: i64, count: usize) {
        if count > 0 {
            *self.entries.entry((k, i)).or_insert(0) += count;
        }
    }

    /// Non-zero entries `(k, i, count)` ordered by `(k, i)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, usize)> + '_ {
        self.entries.iter().map(|(&(k, i), &c)| (k, i, c))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.entries.keys().map(|&(k, _)| k).max().unwrap_or(0)
    }

    /// Total number of `k`-solitons.
    pub fn total(&self, k: usize) -> usize {
        self.iter()
            .filter(|&(m, _, _)| m == k)
            .map(|(_, _, c)| c)
            .sum()
    }

    /// Keeps only the entries of sizes above `k`.
    pub fn above(&self, k: usize) -> SlotComponents {
        SlotComponents {
            entries: self
                .entries
                .iter()
                .filter(|(&(m, _), _)| m > k)
                .map(|(&key, &c)| (key, c))
                .collect(),
        }
    }

    /// Component `k` translated by `d` labels, `i -> i + d`.
    pub fn shifted(&self, k: usize, d: i64) -> Vec<(i64, usize)> {
        self.iter()
            .filter(|&(m, _, _)| m == k)
            .map(|(_, i, c)| (i + d, c))
            .collect()
    }
}

/// Components with Record 0 at site 0.
pub fn components(config: &BallConfig) -> Result<SlotComponents> {
    if config.get(0) {
        return Err(Error::NotRecord { site: 0 });
    }
    components_at(config, 0)
}

/// Components with label 0 at the record `anchor` (negative anchors are the
/// records of the left padding).
pub fn components_at(config: &BallConfig, anchor: i64) -> Result<SlotComponents> {
    let solitons = identify(config);
    components_of(&solitons, anchor)
}

/// Components from an already identified soliton set.
pub fn components_of(solitons: &SolitonSet, anchor: i64) -> Result<SlotComponents> {
    let slots = slot_configuration(solitons);
    let table = enumerate_slots(&slots, anchor)?;
    let mut out = SlotComponents::new();
    for s in solitons {
        let k = s.size();
        let (lo, hi) = (s.leftmost(), s.rightmost());
        let p = table.sites(k);
        let a = p.partition_point(|&x| x < lo);
        let b = p.partition_point(|&x| x <= hi);
        if a != b {
            return Err(Error::SlotStraddle {
                size: k,
                site: p[a],
            });
        }
        out.add(k, table.label_before(k, lo as i64), 1);
    }
    Ok(out)
}

/// Soliton flows through a record and the induced slot offsets.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FlowReport {
    pub steps: usize,
    /// `crossings[m]` counts `m`-solitons that passed the record.
    pub crossings: Vec<usize>,
    /// Position of the tracked record after `steps` steps.
    pub record: i64,
}

impl FlowReport {
    pub fn crossings(&self, m: usize) -> usize {
        self.crossings.get(m).copied().unwrap_or(0)
    }

    /// `o_k = sum_{m > k} 2 (m - k) J_m`.
    pub fn offset(&self, k: usize) -> i64 {
        self.crossings
            .iter()
            .enumerate()
            .skip(k + 1)
            .map(|(m, &j)| 2 * (m - k) as i64 * j as i64)
            .sum()
    }
}

/// Counts solitons that start left of the record `anchor` and sit at or right
/// of the same record of `T^t eta` after `t` steps.
pub fn soliton_flow(config: &BallConfig, anchor: i64, t: usize) -> Result<FlowReport> {
    let slots = SlotConfig::of(config);
    if !slots.is_record(anchor) {
        return Err(Error::NotRecord { site: anchor });
    }
    let label = -config.lift().height(anchor);
    let tracked = track(config, t)?;
    let record = record_site(&tracked.config.lift(), label);
    let mut crossings = vec![0usize; tracked.initial.max_size() + 1];
    for (i, s) in tracked.initial.iter().enumerate() {
        let img = &tracked.solitons.solitons()[tracked.image[i]];
        if (s.rightmost() as i64) < anchor && img.leftmost() as i64 >= record {
            crossings[s.size()] += 1;
        }
    }
    Ok(FlowReport {
        steps: t,
        crossings,
        record,
    })
}

/// Outcome of checking `M_k T^t xi(i) = M_k xi(i - o_k - k t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftReport {
    pub flow: FlowReport,
    /// First `(k, i)` where the identity fails.
    pub failure: Option<(usize, i64)>,
}

impl ShiftReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn verify_component_shift(config: &BallConfig, anchor: i64, t: usize) -> Result<ShiftReport> {
    let flow = soliton_flow(config, anchor, t)?;
    let before = components_at(config, anchor)?;
    let after = components_at(&config.apply_t_steps(t), flow.record)?;
    let kmax = before.max_size().max(after.max_size());
    let mut failure = None;
    for k in 1..=kmax {
        let d = flow.offset(k) + (k * t) as i64;
        let expect = before.shifted(k, d);
        let got = after.shifted(k, 0);
        if expect != got {
            let i = expect
                .iter()
                .zip(&got)
                .find(|(a, b)| a != b)
                .map(|(a, b)| a.0.min(b.0))
                .or_else(|| expect.get(got.len()).or(got.get(expect.len())).map(|e| e.0))
                .unwrap_or(0);
            failure = Some((k, i));
            break;
        }
    }
    Ok(ShiftReport { flow, failure })
}

/// `pi^{k,t} = s_k(T^t xi, o_k + k t + j)`, with labels anchored at the image
/// of the record `anchor`.
pub fn tagged_slot(config: &BallConfig, anchor: i64, k: usize, j: i64, t: usize) -> Result<i64> {
    let flow = soliton_flow(config, anchor, t)?;
    let later = config.apply_t_steps(t);
    let table = enumerate_slots(&SlotConfig::of(&later), flow.record)?;
    Ok(table.site(k, flow.offset(k) + (k * t) as i64 + j))
}

/// `o_k` recomputed from the components of sizes above `k` alone: the
/// configuration is rebuilt without the smaller solitons and the flow is
/// measured through its Record 0.
pub fn offset_from_components(
    zeta: &SlotComponents,
    k: usize,
    t: usize,
    n_right: usize,
    n_left: usize,
) -> Result<i64> {
    let rebuilt = reconstruct(&zeta.above(k), n_right, n_left);
    Ok(soliton_flow(&rebuilt.config, rebuilt.origin as i64, t)?.offset(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> BallConfig {
        s.parse().unwrap()
    }

    #[test]
    fn orders_of_a_two_soliton() {
        let s = SlotConfig::of(&cfg("1100"));
        assert_eq!(s.orders(), &[0, 1, 0, 1]);
        assert_eq!(SlotConfig::of(&cfg("10")).orders(), &[0, 0]);
        assert!(SlotConfig::of(&cfg("000"))
            .orders()
            .iter()
            .all(|&o| o == RECORD));
    }

    #[test]
    fn all_zero_slots_are_consecutive() {
        let s = SlotConfig::of(&cfg("000"));
        let t = enumerate_slots(&s, 0).unwrap();
        for k in 1..4 {
            for i in -3..6 {
                assert_eq!(t.site(k, i), i);
                assert_eq!(t.label(k, i), Some(i));
            }
        }
    }

    #[test]
    fn one_slots_of_a_two_soliton() {
        let s = SlotConfig::of(&cfg("0110000"));
        let t = enumerate_slots(&s, 0).unwrap();
        assert_eq!(t.sites(1), &[0, 2, 4, 5, 6]);
        assert_eq!(t.site(2, 1), 5);
        assert_eq!(enumerate_slots(&s, 1), Err(Error::NotRecord { site: 1 }));
    }

    #[test]
    fn three_soliton_holds_four_one_slots() {
        let s = SlotConfig::of(&cfg("01110000"));
        let inside = s
            .slots(1)
            .into_iter()
            .filter(|&x| (1..7).contains(&x))
            .count();
        assert_eq!(inside, 4);
        let inside2 = s
            .slots(2)
            .into_iter()
            .filter(|&x| (1..7).contains(&x))
            .count();
        assert_eq!(inside2, 2);
    }

    #[test]
    fn component_examples() {
        let c = components(&cfg("011000")).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(2, 0, 1)]);

        let c = components(&cfg("0100100")).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![(1, 0, 1), (1, 1, 1)]);

        assert_eq!(components(&cfg("1100")), Err(Error::NotRecord { site: 0 }));
    }

    #[test]
    fn nested_component() {
        let c = components(&cfg("011011000000")).unwrap();
        let v: Vec<_> = c.iter().collect();
        assert_eq!(v, vec![(1, 1, 1), (3, 0, 1)]);
        let c = components(&cfg("011100100000")).unwrap();
        let v: Vec<_> = c.iter().collect();
        assert_eq!(v, vec![(1, 3, 1), (3, 0, 1)]);
    }

    #[test]
    fn flow_of_a_two_soliton() {
        let c = cfg("11000000000");
        let f = soliton_flow(&c, 4, 0).unwrap();
        assert_eq!(f.crossings(2), 0);
        let f = soliton_flow(&c, 4, 3).unwrap();
        assert_eq!(f.crossings(2), 1);
        assert_eq!(f.offset(1), 2);
        assert_eq!(f.offset(2), 0);
    }

    #[test]
    fn shift_of_an_isolated_soliton() {
        let c = cfg("0110000000");
        let r = verify_component_shift(&c, 0, 1).unwrap();
        assert!(r.holds());
        let after = components(&c.apply_t()).unwrap();
        assert_eq!(after.get(2, 2), 1);
        assert!(verify_component_shift(&cfg("0000"), 1, 4).unwrap().holds());
    }

    #[test]
    fn tagged_slot_on_empty_config() {
        let c = cfg("00000");
        assert_eq!(tagged_slot(&c, 0, 2, 1, 0).unwrap(), 1);
        assert_eq!(tagged_slot(&c, 0, 2, 1, 3).unwrap(), 7);
    }
}
