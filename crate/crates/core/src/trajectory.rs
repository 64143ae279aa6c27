//! Exact tracking of tagged solitons and records, collision counting and
//! empirical speed estimates.
//!
//! Solitons are followed by composing one-step pairings, so identities are
//! never guessed from positions. For a tagged `k`-soliton and another
//! soliton, the larger one of the pair (size `m`, sites `p_1 < ... < p_2m`)
//! is in state `L` when the smaller one lies strictly inside `(p_1, p_{m+1})`
//! and in state `R` when the smaller one starts after `p_m` with no `m`-slot
//! in between. Each step `R -> L` and each step `L -> none` counts half a
//! collision.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::{record_site, BallConfig};
use crate::error::{Error, Result};
use crate::slots::{slot_configuration, SlotConfig};
use crate::soliton::{identify, pair_one_step, Soliton, SolitonSet};

/// What to follow.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tags {
    /// Indices into the initial soliton set.
    pub solitons: Vec<usize>,
    /// Record labels.
    pub records: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolitonTrack {
    pub size: usize,
    /// `x(gamma^t)` for `t = 0..=steps`.
    pub position: Vec<i64>,
    /// Records at or before `x(gamma^t)`, counted by label.
    pub records_before: Vec<i64>,
    /// Collisions with solitons of each size, in half units; entry `m`.
    pub half_collisions: Vec<Vec<u32>>,
    /// True while some collision is half completed.
    pub pending: Vec<bool>,
}

impl SolitonTrack {
    /// `x_0 + k t - 2k sum_{m>k} N^m + sum_{m<k} 2m N^m`.
    pub fn predicted(&self, t: usize) -> i64 {
        let k = self.size as i64;
        let mut x = self.position[0] + k * t as i64;
        for (m, &h) in self.half_collisions[t].iter().enumerate() {
            let m = m as i64;
            let h = h as i64;
            if m > k {
                x -= k * h;
            } else if m < k {
                x += m * h;
            }
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordTrack {
    pub label: i64,
    /// `r(T^t xi, label)`.
    pub position: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TrajectorySet {
    pub steps: usize,
    pub solitons: Vec<SolitonTrack>,
    pub records: Vec<RecordTrack>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Left,
    Right,
}

fn state(big: &Soliton, small: &Soliton, slots: &SlotConfig) -> Option<State> {
    let m = big.size();
    let srt = big.sites();
    let (a, b) = (small.leftmost(), small.rightmost());
    if big.leftmost() < a && b < srt[m] {
        return Some(State::Left);
    }
    if a > srt[m - 1] && !(srt[m - 1] + 1..a).any(|x| slots.is_slot(x as i64, m)) {
        return Some(State::Right);
    }
    None
}

fn halves(from: Option<State>, to: Option<State>) -> u32 {
    match (from, to) {
        (Some(State::Right), Some(State::Left)) => 1,
        (Some(State::Left), None) => 1,
        (Some(State::Right), None) => 2,
        _ => 0,
    }
}

/// Picks up to `per_size` solitons of every size and up to `records` records
/// whose initial positions keep `margin` sites away from both window edges.
pub fn select_tags(config: &BallConfig, per_size: usize, records: usize, margin: usize) -> Tags {
    let set = identify(config);
    let len = config.len();
    let inner = |lo: usize, hi: usize| lo >= margin && hi + margin < len;
    let mut tags = Tags::default();
    for k in 1..=set.max_size() {
        let cand: Vec<usize> = set
            .iter()
            .enumerate()
            .filter(|(_, s)| s.size() == k && inner(s.leftmost(), s.rightmost()))
            .map(|(i, _)| i)
            .collect();
        tags.solitons.extend(spread(&cand, per_size));
    }
    tags.solitons.sort_unstable();
    let recs = config.records();
    let cand: Vec<i64> = recs
        .sites()
        .iter()
        .enumerate()
        .filter(|&(_, &x)| inner(x, x))
        .map(|(i, _)| i as i64 + 1)
        .collect();
    tags.records = spread(&cand, records);
    tags
}

fn spread<T: Copy>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (0..n).map(|i| items[i * items.len() / n]).collect()
}

/// Follows the tagged solitons and records for `steps` steps.
pub fn track_trajectories(
    initial: &BallConfig,
    steps: usize,
    tags: &Tags,
    margin: usize,
) -> Result<TrajectorySet> {
    let mut set = identify(initial);
    let len = initial.len();
    for &i in &tags.solitons {
        let s = set.solitons().get(i).ok_or(Error::Empty)?;
        if s.leftmost() < margin || s.rightmost() + margin >= len {
            return Err(Error::Margin {
                site: s.leftmost(),
                margin,
                len,
            });
        }
    }
    let walk = initial.lift();
    for &j in &tags.records {
        let x = record_site(&walk, j);
        if x < margin as i64 || x + margin as i64 >= len as i64 {
            return Err(Error::Margin {
                site: x.max(0) as usize,
                margin,
                len,
            });
        }
    }

    let kmax = set.max_size();
    let n_all = set.len();
    // current[id] = index of soliton `id` in the current set.
    let mut current: Vec<usize> = (0..n_all).collect();
    let mut id_of: Vec<usize> = (0..n_all).collect();
    let mut states: Vec<BTreeMap<usize, State>> = vec![BTreeMap::new(); tags.solitons.len()];
    let mut counts: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); tags.solitons.len()];
    let mut out = TrajectorySet {
        steps,
        solitons: tags
            .solitons
            .iter()
            .map(|&i| SolitonTrack {
                size: set.solitons()[i].size(),
                position: Vec::with_capacity(steps + 1),
                records_before: Vec::with_capacity(steps + 1),
                half_collisions: Vec::with_capacity(steps + 1),
                pending: Vec::with_capacity(steps + 1),
            })
            .collect(),
        records: tags
            .records
            .iter()
            .map(|&label| RecordTrack {
                label,
                position: Vec::with_capacity(steps + 1),
            })
            .collect(),
    };

    let mut config = initial.clone();
    for t in 0..=steps {
        if t > 0 {
            config = config.apply_t();
            let p = pair_one_step(&set, &config)?;
            for c in current.iter_mut() {
                *c = p.image[*c];
            }
            set = p.after;
            for (id, &c) in current.iter().enumerate() {
                id_of[c] = id;
            }
        }
        let slots = slot_configuration(&set);
        let walk = config.lift();
        let running = walk.running_min();
        let records = set.records();
        for (n, &id) in tags.solitons.iter().enumerate() {
            let g = &set.solitons()[current[id]];
            let k = g.size();
            let new = neighbour_states(&set, records, current[id], &id_of, &slots);
            let old = &states[n];
            for (&o, &st) in old.iter() {
                let inc = halves(Some(st), new.get(&o).copied());
                if inc > 0 {
                    *counts[n].entry(o).or_insert(0) += inc;
                }
            }
            for (&o, &st) in new.iter() {
                if !old.contains_key(&o) {
                    let inc = halves(None, Some(st));
                    if inc > 0 {
                        *counts[n].entry(o).or_insert(0) += inc;
                    }
                }
            }
            states[n] = new;
            let mut per_m = vec![0u32; kmax + 1];
            let mut pending = false;
            for (&o, &h) in counts[n].iter() {
                let m = set.solitons()[current[o]].size();
                per_m[m] += h;
                pending |= h % 2 == 1;
            }
            let x = g.leftmost();
            let track = &mut out.solitons[n];
            debug_assert_eq!(track.size, k);
            track.position.push(x as i64);
            track.records_before.push(
                -running
                    .get(x)
                    .copied()
                    .unwrap_or_else(|| walk.height(x as i64).min(0)),
            );
            track.half_collisions.push(per_m);
            track.pending.push(pending);
        }
        for r in out.records.iter_mut() {
            r.position.push(record_site(&walk, r.label));
        }
    }
    Ok(out)
}

fn neighbour_states(
    set: &SolitonSet,
    records: &[usize],
    gi: usize,
    id_of: &[usize],
    slots: &SlotConfig,
) -> BTreeMap<usize, State> {
    let sol = set.solitons();
    let g = &sol[gi];
    let k = g.size();
    let x = g.leftmost();
    // Excursion bounds around the tagged soliton.
    let r = records.partition_point(|&s| s < x);
    let lo = if r == 0 { 0 } else { records[r - 1] + 1 };
    let hi = records.get(r).copied().unwrap_or(set.window());
    let a = sol.partition_point(|s| s.leftmost() < lo);
    let b = sol.partition_point(|s| s.leftmost() < hi);
    let mut out = BTreeMap::new();
    for (j, o) in sol.iter().enumerate().take(b).skip(a) {
        if j == gi || o.size() == k {
            continue;
        }
        let st = if o.size() > k {
            state(o, g, slots)
        } else {
            state(g, o, slots)
        };
        if let Some(st) = st {
            out.insert(id_of[j], st);
        }
    }
    out
}

/// Slope of the least-squares line through `(t, y_t)`, `t = 0, 1, ...`.
pub fn slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    if y.len() < 2 {
        return 0.0;
    }
    let tm = (n - 1.0) / 2.0;
    let ym = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, &v) in y.iter().enumerate() {
        let dt = t as f64 - tm;
        num += dt * (v - ym);
        den += dt * dt;
    }
    num / den
}

/// Mean of per-track slopes with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

fn summarize(values: &[f64]) -> Option<Estimate> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        libm::sqrt(var / n)
    } else {
        0.0
    };
    Some(Estimate {
        mean,
        stderr,
        count: values.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct EmpiricalSpeeds {
    /// Entry `k - 1`: horizontal speed of `k`-solitons.
    pub v: Vec<Option<Estimate>>,
    /// Entry `k - 1`: speed of `k`-solitons counted in records.
    pub h: Vec<Option<Estimate>>,
    /// Tagged-record speed (leftward speed of records, positive).
    pub v0: Option<Estimate>,
}

pub fn empirical_speeds(traj: &TrajectorySet) -> EmpiricalSpeeds {
    let kmax = traj.solitons.iter().map(|s| s.size).max().unwrap_or(0);
    let mut v = Vec::with_capacity(kmax);
    let mut h = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let tracks: Vec<&SolitonTrack> = traj.solitons.iter().filter(|s| s.size == k).collect();
        let xs: Vec<f64> = tracks
            .iter()
            .map(|s| slope(&s.position.iter().map(|&x| x as f64).collect::<Vec<_>>()))
            .collect();
        let ys: Vec<f64> = tracks
            .iter()
            .map(|s| {
                slope(
                    &s.records_before
                        .iter()
                        .map(|&x| x as f64)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        v.push(summarize(&xs));
        h.push(summarize(&ys));
    }
    let rs: Vec<f64> = traj
        .records
        .iter()
        .map(|r| -slope(&r.position.iter().map(|&x| x as f64).collect::<Vec<_>>()))
        .collect();
    EmpiricalSpeeds {
        v,
        h,
        v0: summarize(&rs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> BallConfig {
        s.parse().unwrap()
    }

    #[test]
    fn isolated_soliton_moves_k_per_step() {
        let mut s = alloc::string::String::from("0000");
        s.push_str("111000");
        s.push_str(&"0".repeat(40));
        let c = cfg(&s);
        let tags = Tags {
            solitons: vec![0],
            records: vec![],
        };
        let tr = track_trajectories(&c, 8, &tags, 2).unwrap();
        let t = &tr.solitons[0];
        for step in 0..=8 {
            assert_eq!(t.position[step], 4 + 3 * step as i64);
        }
        let e = empirical_speeds(&tr);
        let v3 = e.v[2].unwrap();
        assert!((v3.mean - 3.0).abs() < 1e-12);
        assert_eq!(v3.stderr, 0.0);
    }

    #[test]
    fn overtaking_shifts_both_solitons() {
        // A 3-soliton behind a 1-soliton.
        let c = cfg(&alloc::format!("00111000100{}", "0".repeat(40)));
        let set = identify(&c);
        assert_eq!(set.len(), 2);
        let tags = Tags {
            solitons: vec![0, 1],
            records: vec![],
        };
        let tr = track_trajectories(&c, 10, &tags, 2).unwrap();
        let (big, small) = (&tr.solitons[0], &tr.solitons[1]);
        assert_eq!((big.size, small.size), (3, 1));
        assert_eq!(big.position[10] - big.position[0], 30 + 2);
        assert_eq!(small.position[10] - small.position[0], 10 - 2);
        for t in 0..=10 {
            for s in [big, small] {
                if !s.pending[t] {
                    assert_eq!(s.position[t], s.predicted(t));
                }
            }
        }
        assert_eq!(big.half_collisions[10][1], 2);
        assert_eq!(small.half_collisions[10][3], 2);
    }

    #[test]
    fn record_moves_back_two_m_per_passing_soliton() {
        let c = cfg(&alloc::format!("11000{}", "0".repeat(30)));
        let tags = Tags {
            solitons: vec![],
            records: vec![1],
        };
        let tr = track_trajectories(&c, 6, &tags, 1).unwrap();
        let p = &tr.records[0].position;
        assert_eq!(p[0], 4);
        assert_eq!(*p.last().unwrap(), 0);
    }

    #[test]
    fn margin_is_enforced() {
        let c = cfg("1100000");
        let tags = Tags {
            solitons: vec![0],
            records: vec![],
        };
        assert!(matches!(
            track_trajectories(&c, 1, &tags, 2),
            Err(Error::Margin { .. })
        ));
    }

    #[test]
    fn slope_of_a_line() {
        assert!((slope(&[1.0, 3.0, 5.0, 7.0]) - 2.0).abs() < 1e-12);
        assert_eq!(slope(&[4.0]), 0.0);
    }
}
