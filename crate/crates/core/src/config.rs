//! Ball configurations, walk lifts, records and the operator `T`.
//!
//! A [`BallConfig`] is a finite window `[0, len)` of boxes. Every box outside
//! the window is empty, so the configuration is an honest element of
//! `{0,1}^Z` with finitely many balls and all identities can be checked
//! exactly. Sites are `usize` inside the window; virtual sites to the left are
//! represented as negative `i64` values where they are needed (records in the
//! left padding, slot labels).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A finite ball configuration with implicit empty boxes on both sides.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BallConfig {
    bits: Vec<bool>,
}

impl BallConfig {
    pub fn new(bits: Vec<bool>) -> Self {
        BallConfig { bits }
    }

    pub fn empty(len: usize) -> Self {
        BallConfig {
            bits: alloc::vec![false; len],
        }
    }

    /// Builds a configuration from `0`/`1` bytes; any non-zero byte is a ball.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        BallConfig {
            bits: bytes.iter().map(|&b| b != 0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    /// Occupation of any site, including the empty padding.
    pub fn get(&self, site: i64) -> bool {
        usize::try_from(site)
            .ok()
            .and_then(|s| self.bits.get(s).copied())
            .unwrap_or(false)
    }

    pub fn ball_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Ball count divided by window length; zero for an empty window.
    pub fn density(&self) -> f64 {
        if self.bits.is_empty() {
            0.0
        } else {
            self.ball_count() as f64 / self.bits.len() as f64
        }
    }

    /// Number of balls the carrier still holds after the last site.
    pub fn closing_load(&self) -> usize {
        let mut load = 0usize;
        for &b in &self.bits {
            if b {
                load += 1;
            } else {
                load = load.saturating_sub(1);
            }
        }
        load
    }

    /// True when the site right after the window is a record.
    pub fn is_closed(&self) -> bool {
        self.closing_load() == 0
    }

    /// The same configuration, extended with enough empty boxes to close the
    /// last excursion.
    pub fn closed(&self) -> BallConfig {
        let mut bits = self.bits.clone();
        bits.resize(bits.len() + self.closing_load(), false);
        BallConfig { bits }
    }

    /// Drops trailing empty boxes.
    pub fn trimmed(&self) -> BallConfig {
        let end = self.bits.iter().rposition(|&b| b).map_or(0, |p| p + 1);
        BallConfig {
            bits: self.bits[..end].to_vec(),
        }
    }

    /// Pads with empty boxes up to `len` (never truncates).
    pub fn padded(&self, len: usize) -> BallConfig {
        let mut bits = self.bits.clone();
        if bits.len() < len {
            bits.resize(len, false);
        }
        BallConfig { bits }
    }

    /// Sub-window `[start, end)`, re-indexed from zero.
    pub fn window(&self, start: usize, end: usize) -> BallConfig {
        let end = end.min(self.bits.len());
        let start = start.min(end);
        BallConfig {
            bits: self.bits[start..end].to_vec(),
        }
    }

    /// Sub-window running from the first record at or after `lo` to the last
    /// record at or before `hi` (inclusive). Cutting at records leaves the
    /// records and solitons in between untouched.
    pub fn crop_to_records(&self, lo: usize, hi: usize) -> Option<BallConfig> {
        let records = self.records();
        let first = records.sites().iter().copied().find(|&s| s >= lo)?;
        let last = records.sites().iter().copied().rev().find(|&s| s <= hi)?;
        (first <= last).then(|| self.window(first, last + 1))
    }

    pub fn lift(&self) -> WalkLift {
        WalkLift::from_config(self)
    }

    /// Sites `x >= 0` where the walk reaches a new strict minimum.
    pub fn records(&self) -> RecordIndex {
        let mut sites = Vec::new();
        let mut level = 0i64;
        let mut min = 0i64;
        for (x, &b) in self.bits.iter().enumerate() {
            level += if b { 1 } else { -1 };
            if level < min {
                min = level;
                sites.push(x);
            }
        }
        RecordIndex { sites }
    }

    /// One step of the dynamics as a single carrier pass. The window grows by
    /// the number of balls left in the carrier.
    pub fn apply_t(&self) -> BallConfig {
        let mut out = Vec::with_capacity(self.bits.len() + 8);
        let mut load = 0usize;
        for &b in &self.bits {
            if b {
                load += 1;
                out.push(false);
            } else if load > 0 {
                load -= 1;
                out.push(true);
            } else {
                out.push(false);
            }
        }
        out.resize(out.len() + load, true);
        BallConfig { bits: out }
    }

    /// `t` carrier steps.
    pub fn apply_t_steps(&self, t: usize) -> BallConfig {
        let mut cur = self.clone();
        for _ in 0..t {
            cur = cur.apply_t();
        }
        cur
    }

    /// Excursions between consecutive records, starting at the virtual record
    /// at site `-1` and ending at the record right after the window.
    pub fn excursions(&self) -> Result<Vec<Excursion>> {
        let load = self.closing_load();
        if load != 0 {
            return Err(Error::Unclosed { load });
        }
        let walk = self.lift();
        let mut bounds: Vec<i64> = Vec::with_capacity(self.bits.len() / 2 + 2);
        bounds.push(-1);
        bounds.extend(self.records().sites().iter().map(|&s| s as i64));
        bounds.push(self.bits.len() as i64);
        let out = bounds
            .windows(2)
            .map(|w| {
                let (left, right) = (w[0], w[1]);
                let base = walk.height(left);
                let height = (left + 1..right)
                    .map(|x| walk.height(x) - base)
                    .max()
                    .unwrap_or(0);
                Excursion {
                    left,
                    right,
                    height: height.max(0) as usize,
                }
            })
            .collect();
        Ok(out)
    }
}

impl fmt::Display for BallConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BallConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BallConfig({self})")
    }
}

impl FromStr for BallConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_config(s)
    }
}

/// Parses `0`/`1` characters, ignoring whitespace.
pub fn parse_config(text: &str) -> Result<BallConfig> {
    let mut bits = Vec::with_capacity(text.len());
    for (index, c) in text.chars().enumerate() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            c if c.is_whitespace() => {}
            found => return Err(Error::Parse { index, found }),
        }
    }
    Ok(BallConfig { bits })
}

/// The walk `xi` with `xi(-1) = 0` and an up-step at every ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkLift {
    heights: Vec<i64>,
}

impl WalkLift {
    pub fn from_config(config: &BallConfig) -> Self {
        let mut heights = Vec::with_capacity(config.len());
        let mut level = 0i64;
        for &b in config.bits() {
            level += if b { 1 } else { -1 };
            heights.push(level);
        }
        WalkLift { heights }
    }

    /// Builds a walk from explicit heights; every step must be `+-1` and the
    /// first height must be `+-1` (the base at site `-1` is zero).
    pub fn from_heights(heights: Vec<i64>) -> Option<Self> {
        let mut prev = 0i64;
        for &h in &heights {
            if (h - prev).abs() != 1 {
                return None;
            }
            prev = h;
        }
        Some(WalkLift { heights })
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// Height at any site; the padding is all down-steps.
    pub fn height(&self, x: i64) -> i64 {
        if x < 0 {
            -x - 1
        } else if (x as usize) < self.heights.len() {
            self.heights[x as usize]
        } else {
            let last = self.heights.last().copied().unwrap_or(0);
            last - (x - self.heights.len() as i64 + 1)
        }
    }

    pub fn project(&self) -> BallConfig {
        let mut prev = 0i64;
        let bits = self
            .heights
            .iter()
            .map(|&h| {
                let up = h > prev;
                prev = h;
                up
            })
            .collect();
        BallConfig::new(bits)
    }

    /// Running minimum including the padding, `min(0, min_{0<=y<=x} xi(y))`.
    pub fn running_min(&self) -> Vec<i64> {
        let mut min = 0i64;
        self.heights
            .iter()
            .map(|&h| {
                min = min.min(h);
                min
            })
            .collect()
    }

    /// One step of the dynamics as the reflection `2 min_{y<=x} xi(y) - xi(x)`.
    /// The window is extended until the walk is back at its running minimum.
    pub fn apply_t(&self) -> WalkLift {
        let mut heights = Vec::with_capacity(self.heights.len() + 8);
        let mut min = 0i64;
        let mut last = 0i64;
        for &h in &self.heights {
            min = min.min(h);
            heights.push(2 * min - h);
            last = h;
        }
        // Continue the original walk downwards until it meets its minimum.
        while last > min {
            last -= 1;
            heights.push(2 * min - last);
        }
        WalkLift { heights }
    }
}

/// Records of a configuration inside its window.
///
/// With the lift `xi(-1) = 0`, Record `j` (the leftmost site at level `-j`)
/// is the virtual site `j - 1` for `j <= 0` and `sites[j - 1]` for
/// `1 <= j <= sites.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RecordIndex {
    sites: Vec<usize>,
}

impl RecordIndex {
    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    /// Label of the record at `site`, if it is one.
    pub fn label_of(&self, site: i64) -> Option<i64> {
        if site < 0 {
            return Some(site + 1);
        }
        self.sites
            .binary_search(&(site as usize))
            .ok()
            .map(|i| i as i64 + 1)
    }

    /// Position of Record `label` for labels up to the last in-window record.
    pub fn site_of(&self, label: i64) -> Option<i64> {
        if label <= 0 {
            Some(label - 1)
        } else {
            self.sites.get(label as usize - 1).map(|&s| s as i64)
        }
    }

    /// Number of labels `j >= 1` whose record lies at or before `x`.
    pub fn count_upto(&self, x: i64) -> usize {
        if x < 0 {
            return 0;
        }
        self.sites.partition_point(|&s| s as i64 <= x)
    }
}

/// Position of Record `label` of any configuration, including records in
/// the padding on both sides.
pub fn record_site(walk: &WalkLift, label: i64) -> i64 {
    if label <= 0 {
        return label - 1;
    }
    if let Some(x) = walk.heights().iter().position(|&h| h == -label) {
        return x as i64;
    }
    let n = walk.len() as i64;
    let last = walk.height(n - 1);
    n - 1 + last + label
}

/// Records of `walk` at or before `x`, counted by label (`x` may lie in the
/// padding).
pub fn records_upto(walk: &WalkLift, x: i64) -> i64 {
    if x < 0 {
        return 0;
    }
    let n = walk.len() as i64;
    let upto = x.min(n - 1);
    let mut min = 0i64;
    for y in 0..=upto {
        min = min.min(walk.height(y));
    }
    if x >= n {
        min = min.min(walk.height(x));
    }
    -min
}

/// The sites strictly between two consecutive records.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Excursion {
    pub left: i64,
    pub right: i64,
    pub height: usize,
}

impl Excursion {
    pub fn support(&self) -> core::ops::Range<i64> {
        self.left + 1..self.right
    }

    pub fn is_empty(&self) -> bool {
        self.right == self.left + 1
    }

    /// Sites of the excursion counting the record to its left.
    pub fn len_with_record(&self) -> usize {
        (self.right - self.left) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn cfg(s: &str) -> BallConfig {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(cfg("0 1 1 0").bits(), &[false, true, true, false]);
        assert!(cfg("").is_empty());
        assert_eq!(
            parse_config("012"),
            Err(Error::Parse {
                index: 2,
                found: '2'
            })
        );
    }

    #[test]
    fn lift_examples() {
        assert!(cfg("").lift().is_empty());
        assert_eq!(cfg("10").lift().heights(), &[1, 0]);
        assert_eq!(cfg("001").lift().heights(), &[-1, -2, -1]);
    }

    #[test]
    fn record_examples() {
        assert_eq!(cfg("000").records().sites(), &[0, 1, 2]);
        assert_eq!(cfg("100").records().sites(), &[2]);
        assert_eq!(cfg("0100").records().sites(), &[0, 3]);
    }

    #[test]
    fn record_labels() {
        let c = cfg("0100");
        let r = c.records();
        assert_eq!(r.site_of(0), Some(-1));
        assert_eq!(r.site_of(-3), Some(-4));
        assert_eq!(r.site_of(1), Some(0));
        assert_eq!(r.site_of(2), Some(3));
        assert_eq!(r.label_of(3), Some(2));
        assert_eq!(r.label_of(2), None);
        let w = c.lift();
        assert_eq!(record_site(&w, 2), 3);
        assert_eq!(record_site(&w, 4), 5);
        assert_eq!(records_upto(&w, 2), 1);
        assert_eq!(records_upto(&w, 6), 5);
    }

    #[test]
    fn carrier_example_from_the_carrier_table() {
        let eta = cfg("0010110000110100000");
        assert_eq!(eta.apply_t().to_string(), "0001001100001011000");
        assert_eq!(cfg("10").apply_t().to_string(), "01");
        assert_eq!(cfg("0000").apply_t(), cfg("0000"));
    }

    #[test]
    fn carrier_grows_the_window() {
        assert_eq!(cfg("111").apply_t().to_string(), "000111");
        assert_eq!(cfg("1101").apply_t().to_string(), "001011");
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(cfg("10").lift().apply_t().project().to_string(), "01");
        let eta = cfg("0010110000110100000");
        assert_eq!(
            eta.lift().apply_t().project().to_string(),
            "0001001100001011000"
        );
        let zeros = cfg("00000").lift();
        assert_eq!(zeros.apply_t(), zeros);
    }

    #[test]
    fn excursion_examples() {
        let e = cfg("00").excursions().unwrap();
        assert_eq!(e.len(), 3);
        assert!(e.iter().all(Excursion::is_empty));

        let e = cfg("100").excursions().unwrap();
        assert_eq!(
            e[0],
            Excursion {
                left: -1,
                right: 2,
                height: 1
            }
        );
        assert!(e[1..].iter().all(Excursion::is_empty));

        let e = cfg("110100").excursions().unwrap();
        assert_eq!(e[0].height, 2);
        assert_eq!(e[0].support(), 0..6);

        assert_eq!(cfg("0110").excursions(), Err(Error::Unclosed { load: 1 }));
    }

    #[test]
    fn crop_keeps_records() {
        let c = cfg("1100010100000");
        let w = c.crop_to_records(3, 12).unwrap();
        assert_eq!(w.to_string(), "010100000");
        assert_eq!(w.records().sites()[0], 0);
        assert_eq!(c.crop_to_records(12, 3), None);
    }

    #[test]
    fn walk_heights_outside_window() {
        let w = cfg("11").lift();
        assert_eq!(w.height(-1), 0);
        assert_eq!(w.height(-3), 2);
        assert_eq!(w.height(2), 1);
        assert_eq!(w.height(5), -2);
        assert!(WalkLift::from_heights(vec![1, 0, -1]).is_some());
        assert!(WalkLift::from_heights(vec![1, 1]).is_none());
    }
}
