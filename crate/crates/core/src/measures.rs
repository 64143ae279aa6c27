//! Random ensembles: configurations built from independent components,
//! Bernoulli product configurations, the append-and-mix ensemble, Palm
//! re-centering and density estimators.
//!
//! All samplers are deterministic functions of their seed. Component draws
//! use one ChaCha stream per `(k, side)`, so the value of `zeta_k(i)` does not
//! depend on the order in which the reconstruction asks for it.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{record_site, BallConfig};
use crate::error::{Error, Result};
use crate::reconstruct::{
    reconstruct_excursion, reconstruct_from, ComponentCursor, ComponentSource, Rooted,
};
use crate::slots::SlotComponents;
use crate::soliton::identify;

/// Law of a single entry `zeta_k(i)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Marginal {
    Bernoulli(f64),
    /// Geometric on `{0, 1, ...}` with the given mean.
    Geometric(f64),
    Constant(usize),
}

impl Marginal {
    pub fn mean(&self) -> f64 {
        match *self {
            Marginal::Bernoulli(p) => p,
            Marginal::Geometric(m) => m,
            Marginal::Constant(c) => c as f64,
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        let ok = match *self {
            Marginal::Bernoulli(p) => (0.0..=1.0).contains(&p),
            Marginal::Geometric(m) => m.is_finite() && m >= 0.0,
            Marginal::Constant(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput {
                index,
                value: self.mean(),
            })
        }
    }

    /// Probability of the value `n`.
    pub fn pmf(&self, n: usize) -> f64 {
        match *self {
            Marginal::Bernoulli(p) => match n {
                0 => 1.0 - p,
                1 => p,
                _ => 0.0,
            },
            Marginal::Geometric(m) => {
                let q = m / (1.0 + m);
                (1.0 - q) * libm::pow(q, n as f64)
            }
            Marginal::Constant(c) => {
                if n == c {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match *self {
            Marginal::Bernoulli(p) => rng.gen_bool(p) as usize,
            Marginal::Geometric(m) => {
                let q = m / (1.0 + m);
                let mut n = 0;
                while rng.gen_bool(q) {
                    n += 1;
                }
                n
            }
            Marginal::Constant(c) => c,
        }
    }
}

/// Independent component laws for sizes `1..=K`; larger sizes are absent.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentLaw {
    pub per_k: Vec<Marginal>,
}

impl ComponentLaw {
    pub fn new(per_k: Vec<Marginal>) -> Result<Self> {
        for (i, m) in per_k.iter().enumerate() {
            m.validate(i)?;
        }
        Ok(ComponentLaw { per_k })
    }

    pub fn bernoulli(alpha: &[f64]) -> Result<Self> {
        Self::new(alpha.iter().map(|&a| Marginal::Bernoulli(a)).collect())
    }

    pub fn geometric(alpha: &[f64]) -> Result<Self> {
        Self::new(alpha.iter().map(|&a| Marginal::Geometric(a)).collect())
    }

    pub fn truncation(&self) -> usize {
        self.per_k.len()
    }

    /// `alpha_k = E zeta_k(0)`.
    pub fn alpha(&self) -> Vec<f64> {
        self.per_k.iter().map(Marginal::mean).collect()
    }

    /// Largest size whose marginal is not identically zero.
    pub fn max_size(&self) -> usize {
        self.per_k
            .iter()
            .rposition(|m| m.mean() > 0.0)
            .map_or(0, |i| i + 1)
    }
}

/// Components drawn on demand.
#[derive(Clone, Debug)]
pub struct LazyComponents {
    law: ComponentLaw,
    streams: Vec<[ChaCha8Rng; 2]>,
    drawn: Vec<[Vec<usize>; 2]>,
}

impl LazyComponents {
    pub fn new(law: ComponentLaw, seed: u64) -> Self {
        let base = ChaCha8Rng::seed_from_u64(seed);
        let streams = (0..law.truncation() as u64)
            .map(|k| {
                let mut right = base.clone();
                right.set_stream(2 * k + 1);
                let mut left = base.clone();
                left.set_stream(2 * k + 2);
                [right, left]
            })
            .collect();
        let drawn = vec![[Vec::new(), Vec::new()]; law.truncation()];
        LazyComponents {
            law,
            streams,
            drawn,
        }
    }

    pub fn law(&self) -> &ComponentLaw {
        &self.law
    }

    /// Every entry drawn so far.
    pub fn drawn(&self) -> SlotComponents {
        let mut out = SlotComponents::new();
        for (k, sides) in self.drawn.iter().enumerate() {
            for (i, &c) in sides[0].iter().enumerate() {
                out.set(k + 1, i as i64, c);
            }
            for (i, &c) in sides[1].iter().enumerate() {
                out.set(k + 1, -1 - i as i64, c);
            }
        }
        out
    }
}

impl ComponentSource for LazyComponents {
    fn max_size(&self) -> usize {
        self.law.max_size()
    }

    fn get(&mut self, k: usize, i: i64) -> usize {
        if k == 0 || k > self.law.truncation() {
            return 0;
        }
        let (side, idx) = if i >= 0 {
            (0, i as usize)
        } else {
            (1, (-1 - i) as usize)
        };
        let marginal = self.law.per_k[k - 1];
        let rng = &mut self.streams[k - 1][side];
        let values = &mut self.drawn[k - 1][side];
        while values.len() <= idx {
            values.push(marginal.sample(rng));
        }
        values[idx]
    }
}

/// `zeta_k(i)` for `k = 1..=K` and labels `-left[k-1]..right[k-1]`.
pub fn sample_components(
    law: &ComponentLaw,
    right: &[usize],
    left: &[usize],
    seed: u64,
) -> SlotComponents {
    let mut lazy = LazyComponents::new(law.clone(), seed);
    let mut out = SlotComponents::new();
    for k in 1..=law.truncation() {
        let r = right.get(k - 1).copied().unwrap_or(0) as i64;
        let l = left.get(k - 1).copied().unwrap_or(0) as i64;
        for i in -l..r {
            out.set(k, i, lazy.get(k, i));
        }
    }
    out
}

/// A configuration seen from a typical record: `n_right` excursions after
/// Record 0 and `n_left` before it.
pub fn sample_hat_mu(law: &ComponentLaw, n_right: usize, n_left: usize, seed: u64) -> Rooted {
    let mut lazy = LazyComponents::new(law.clone(), seed);
    reconstruct_from(&mut lazy, n_right, n_left)
}

/// Same as [`sample_hat_mu`], also returning the components that were used.
pub fn sample_hat_mu_with_components(
    law: &ComponentLaw,
    n_right: usize,
    n_left: usize,
    seed: u64,
) -> (Rooted, SlotComponents) {
    let mut lazy = LazyComponents::new(law.clone(), seed);
    let rooted = reconstruct_from(&mut lazy, n_right, n_left);
    (rooted, lazy.drawn())
}

/// Right excursions after Record 0 (at site 0) until the window holds at
/// least `min_len` sites.
pub fn sample_hat_mu_len(law: &ComponentLaw, min_len: usize, seed: u64) -> BallConfig {
    let mut lazy = LazyComponents::new(law.clone(), seed);
    let mut cursor = ComponentCursor::new(lazy.max_size());
    let mut bits = Vec::with_capacity(min_len + 64);
    while bits.len() < min_len {
        bits.push(false);
        bits.extend(reconstruct_excursion(&mut lazy, &mut cursor));
    }
    BallConfig::new(bits)
}

/// Moves the origin to the image of the same record after one step.
pub fn hat_t(sample: &Rooted) -> Rooted {
    let label = -sample.config.lift().height(sample.origin as i64);
    let next = sample.config.apply_t();
    let origin = record_site(&next.lift(), label);
    Rooted {
        config: next,
        origin: origin as usize,
    }
}

/// Excursions whose two records lie inside the window, as `(left, right)`.
fn inner_excursions(config: &BallConfig) -> Vec<(usize, usize)> {
    let r = config.records();
    r.sites().windows(2).map(|w| (w[0], w[1])).collect()
}

/// Picks an excursion with probability proportional to its length (record
/// included) and a uniform site in it.
pub fn inverse_palm_shift(config: &BallConfig, seed: u64) -> Result<Rooted> {
    let exc = inner_excursions(config);
    let total: usize = exc.iter().map(|&(a, b)| b - a).sum();
    if total == 0 {
        return Err(Error::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = rng.gen_range(0..total);
    for &(a, b) in &exc {
        let len = b - a;
        if u < len {
            return Ok(Rooted {
                config: config.clone(),
                origin: a + 1 + u,
            });
        }
        u -= len;
    }
    unreachable!()
}

/// Points a sample can be re-centered at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Records,
    /// Leftmost sites of `k`-solitons.
    Solitons(usize),
}

pub fn target_points(config: &BallConfig, target: Target) -> Vec<usize> {
    match target {
        Target::Records => config.records().sites().to_vec(),
        Target::Solitons(k) => identify(config)
            .of_size(k)
            .map(|s| s.leftmost())
            .filter(|&x| x < config.len())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PalmBatch {
    pub samples: Vec<Rooted>,
    /// Inputs without any target point in the inner window.
    pub skipped: usize,
}

/// Re-centers every configuration at a uniform target point of its inner
/// window `[margin, len - margin)`.
pub fn palm_condition(
    configs: &[BallConfig],
    target: Target,
    margin: usize,
    seed: u64,
) -> PalmBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = PalmBatch::default();
    for c in configs {
        let hi = c.len().saturating_sub(margin);
        let pts: Vec<usize> = target_points(c, target)
            .into_iter()
            .filter(|&x| x >= margin && x < hi)
            .collect();
        if pts.is_empty() {
            out.skipped += 1;
            continue;
        }
        let origin = pts[rng.gen_range(0..pts.len())];
        out.samples.push(Rooted {
            config: c.clone(),
            origin,
        });
    }
    out
}

/// Independent bits with density `lambda`.
pub fn sample_bernoulli(lambda: f64, n: usize, seed: u64) -> Result<BallConfig> {
    if !(lambda > 0.0 && lambda < 0.5) {
        return Err(Error::InvalidDensity(lambda));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(BallConfig::new(
        (0..n).map(|_| rng.gen_bool(lambda)).collect(),
    ))
}

/// Appends, after every record, one `k`-soliton with probability `rho_k`
/// (independently for each `k`), mixes with `mix_steps` steps and returns the
/// part of the middle `n` sites between its first and last record.
pub fn sample_append_mix(rho: &[f64], n: usize, mix_steps: usize, seed: u64) -> Result<BallConfig> {
    for (index, &value) in rho.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidInput { index, value });
        }
    }
    let kmax = rho.len().max(1);
    let border = kmax * (mix_steps + 2);
    let total = n + 2 * border;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = Vec::with_capacity(total + 4 * kmax);
    while bits.len() < total {
        bits.push(false);
        for (i, &p) in rho.iter().enumerate() {
            if p > 0.0 && rng.gen_bool(p) {
                let k = i + 1;
                bits.extend(core::iter::repeat_n(true, k));
                bits.extend(core::iter::repeat_n(false, k));
            }
        }
    }
    let mixed = BallConfig::new(bits).apply_t_steps(mix_steps);
    Ok(mixed
        .crop_to_records(border, border + n)
        .unwrap_or_default())
}

/// Per-excursion and per-site soliton densities.
#[derive(Clone, Debug, PartialEq)]
pub struct Densities {
    /// Entry `k - 1`: mean number of `k`-solitons per excursion.
    pub rho: Vec<f64>,
    /// Mean excursion length counting its record.
    pub w0: f64,
    /// Entry `k - 1`: `k`-solitons per site, `rho_k / w0`.
    pub rho_bar: Vec<f64>,
    pub excursions: usize,
}

/// Counts solitons per excursion of a closed window. The empty excursion in
/// front of a record at site 0 is not counted.
pub fn estimate_densities(config: &BallConfig) -> Result<Densities> {
    let exc = config.excursions()?;
    let skip = usize::from(exc.first().is_some_and(|e| e.is_empty()));
    let exc = &exc[skip..];
    if exc.is_empty() {
        return Err(Error::Empty);
    }
    let sites: usize = exc.iter().map(|e| e.len_with_record()).sum();
    let set = identify(config);
    let counts = set.size_counts();
    let n = exc.len() as f64;
    let rho: Vec<f64> = counts.iter().skip(1).map(|&c| c as f64 / n).collect();
    let w0 = sites as f64 / n;
    let rho_bar = rho.iter().map(|r| r / w0).collect();
    Ok(Densities {
        rho,
        w0,
        rho_bar,
        excursions: exc.len(),
    })
}

/// Counts of the eight patterns among non-overlapping blocks of three sites
/// in `[lo, hi)`; pattern `abc` has index `4a + 2b + c`.
pub fn block_counts(config: &BallConfig, lo: usize, hi: usize) -> [u64; 8] {
    let mut out = [0u64; 8];
    let mut x = lo;
    while x + 3 <= hi {
        let idx = (config.get(x as i64) as usize) << 2
            | (config.get(x as i64 + 1) as usize) << 1
            | config.get(x as i64 + 2) as usize;
        out[idx] += 1;
        x += 3;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn zero_law_gives_records_only() {
        let law = ComponentLaw::bernoulli(&[0.0, 0.0]).unwrap();
        let r = sample_hat_mu(&law, 5, 2, 1);
        assert_eq!(r.config.to_string(), "0000000");
        assert_eq!(r.origin, 2);
        assert!(sample_components(&law, &[10, 10], &[3, 3], 4).is_empty());
    }

    #[test]
    fn constant_law_fills_every_slot() {
        let law = ComponentLaw::new(vec![Marginal::Constant(0), Marginal::Constant(1)]).unwrap();
        let z = sample_components(&law, &[0, 6], &[0, 2], 9);
        for i in -2..6 {
            assert_eq!(z.get(2, i), 1);
        }
        let r = sample_hat_mu(&law, 2, 0, 0);
        assert_eq!(r.config.to_string(), "0110001100");
    }

    #[test]
    fn lazy_draws_do_not_depend_on_access_order() {
        let law = ComponentLaw::geometric(&[0.3, 0.2]).unwrap();
        let mut a = LazyComponents::new(law.clone(), 5);
        let mut b = LazyComponents::new(law, 5);
        let fwd: Vec<usize> = (-5..5).map(|i| a.get(2, i)).collect();
        let mut rev: Vec<usize> = (-5..5).rev().map(|i| b.get(2, i)).collect();
        rev.reverse();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn bernoulli_density_bounds() {
        assert_eq!(sample_bernoulli(0.5, 3, 0), Err(Error::InvalidDensity(0.5)));
        assert!(sample_bernoulli(0.25, 0, 0).unwrap().is_empty());
        let a = sample_bernoulli(0.25, 100, 3).unwrap();
        assert_eq!(a, sample_bernoulli(0.25, 100, 3).unwrap());
    }

    #[test]
    fn tiling_densities() {
        let c: BallConfig = "01100".repeat(20).parse().unwrap();
        let d = estimate_densities(&c).unwrap();
        assert_eq!(d.rho, vec![0.0, 1.0]);
        assert_eq!(d.w0, 5.0);
        let c: BallConfig = "011000".repeat(20).parse().unwrap();
        let d = estimate_densities(&c).unwrap();
        assert_eq!(d.rho, vec![0.0, 0.5]);
        assert_eq!(d.w0, 3.0);
        let d = estimate_densities(&"0000".parse().unwrap()).unwrap();
        assert!(d.rho.is_empty());
        assert_eq!(d.w0, 1.0);
    }

    #[test]
    fn inverse_palm_weights() {
        // Excursions of lengths 1 and 3 between the records 0, 1 and 4.
        let c: BallConfig = "00100".parse().unwrap();
        let mut hits = [0usize; 5];
        for seed in 0..4000 {
            hits[inverse_palm_shift(&c, seed).unwrap().origin] += 1;
        }
        assert_eq!(hits[0], 0);
        let first = hits[1] as f64 / 4000.0;
        assert!((first - 0.25).abs() < 0.03, "{first}");
        assert!(inverse_palm_shift(&"0".parse().unwrap(), 0).is_err());
    }

    #[test]
    fn palm_targets() {
        let c: BallConfig = "0000".parse().unwrap();
        let b = palm_condition(core::slice::from_ref(&c), Target::Records, 0, 1);
        assert_eq!(b.samples.len(), 1);
        let c2: BallConfig = "0110000100".parse().unwrap();
        let b = palm_condition(&[c2.clone(), c], Target::Solitons(2), 0, 1);
        assert_eq!(b.skipped, 1);
        assert_eq!(b.samples[0].origin, 1);
    }

    #[test]
    fn append_mix_without_solitons() {
        let c = sample_append_mix(&[0.0, 0.0], 50, 3, 1).unwrap();
        assert_eq!(c.ball_count(), 0);
        assert!(c.len() >= 50);
    }

    #[test]
    fn hat_t_follows_the_record() {
        let law = ComponentLaw::bernoulli(&[0.2, 0.1]).unwrap();
        let r = sample_hat_mu(&law, 20, 20, 3);
        let n = hat_t(&r);
        assert!(!n.config.get(n.origin as i64));
        let before = r.config.lift().height(r.origin as i64);
        assert_eq!(n.config.lift().height(n.origin as i64), before);
    }

    #[test]
    fn three_blocks() {
        let c: BallConfig = "000111010".parse().unwrap();
        let b = block_counts(&c, 0, 9);
        assert_eq!(b[0], 1);
        assert_eq!(b[7], 1);
        assert_eq!(b[2], 1);
    }
}
