//! Invariant suite over seeded random configurations.

use std::fmt;

use bbs_core::measures::{sample_bernoulli, sample_components, ComponentLaw};
use bbs_core::reconstruct::reconstruct;
use bbs_core::slots::{components, components_at, verify_component_shift};
use bbs_core::soliton::{identify, identify_batch, identify_stream, pair_one_step};
use bbs_core::speeds::{interaction_residual, solve_interaction, solve_rho, table_residual};
use bbs_core::BallConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.failures == 0 { "ok" } else { "FAIL" };
        write!(
            f,
            "{status}\t{}\t{}/{} failed",
            self.name, self.failures, self.cases
        )
    }
}

/// Closed configuration with a record at site 0.
pub fn random_config(seed: u64, max_len: usize) -> BallConfig {
    let lambda = 0.02
        + 0.43 * ((seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 11) as f64 / (1u64 << 53) as f64);
    let len = (seed as usize * 7919) % max_len.max(1);
    let body = sample_bernoulli(lambda.min(0.45), len, seed).expect("density below one half");
    let mut bits = vec![false];
    bits.extend_from_slice(body.bits());
    BallConfig::new(bits).closed()
}

fn count(name: &'static str, cases: usize, mut ok: impl FnMut(u64) -> bool, seed: u64) -> Check {
    let failures = (0..cases as u64)
        .filter(|&i| !ok(seed.wrapping_add(i)))
        .count();
    Check {
        name,
        cases,
        failures,
    }
}

pub fn run_suite(cases: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(count(
        "carrier matches reflection",
        cases,
        |s| {
            let c = random_config(s, 200);
            c.apply_t() == c.lift().apply_t().project()
        },
        seed,
    ));
    out.push(count(
        "soliton sizes conserved and paired",
        cases,
        |s| {
            let c = random_config(s, 200);
            let before = identify(&c);
            match pair_one_step(&before, &c.apply_t()) {
                Ok(p) => p.after.size_counts() == before.size_counts(),
                Err(_) => false,
            }
        },
        seed,
    ));
    out.push(count(
        "stream and batch identifiers agree",
        cases,
        |s| {
            let c = random_config(s, 200);
            identify_stream(&c) == identify_batch(&c)
        },
        seed,
    ));
    out.push(count(
        "decompose then reconstruct",
        cases,
        |s| {
            let c = random_config(s, 200);
            match components(&c) {
                Ok(z) => reconstruct(&z, c.records().len(), 0).config == c,
                Err(_) => false,
            }
        },
        seed,
    ));
    out.push(count(
        "reconstruct then decompose",
        cases,
        |s| {
            let law = ComponentLaw::geometric(&[0.3, 0.2, 0.1, 0.1, 0.05]).unwrap();
            let z = sample_components(&law, &[12; 5], &[12; 5], s);
            let r = reconstruct(&z, 13, 13);
            components_at(&r.config, r.origin as i64).is_ok_and(|back| back == z)
        },
        seed,
    ));
    out.push(count(
        "component shift",
        cases,
        |s| {
            let c = random_config(s, 120);
            let recs = c.records();
            let anchor = recs.sites()[s as usize % recs.len()] as i64;
            (1..=5).all(|t| verify_component_shift(&c, anchor, t).is_ok_and(|r| r.holds()))
        },
        seed,
    ));
    out.push(count(
        "speed systems agree",
        cases,
        |s| {
            let k = 1 + (s as usize % 10);
            let raw: Vec<f64> = (0..k)
                .map(|i| ((s + 1) * (i as u64 + 3) % 17) as f64)
                .collect();
            let total: f64 = raw
                .iter()
                .enumerate()
                .map(|(i, r)| 2.0 * (i + 1) as f64 * r)
                .sum();
            let rho: Vec<f64> = raw.iter().map(|r| r * 0.85 / total.max(1.0)).collect();
            let Ok(t) = solve_rho(&rho) else { return false };
            let Ok(v) = solve_interaction(&t.rho_bar()) else {
                return false;
            };
            v.iter().zip(&t.v).all(|(a, b)| (a - b).abs() < 1e-10)
                && interaction_residual(&t.rho_bar(), &t.v) < 1e-10
                && table_residual(&t) < 1e-10
        },
        seed,
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let checks = run_suite(40, 0);
        assert_eq!(checks.len(), 7);
        for c in &checks {
            assert_eq!(c.failures, 0, "{c}");
        }
    }

    #[test]
    fn configs_start_with_a_record() {
        for s in 0..50 {
            let c = random_config(s, 100);
            assert!(c.records().contains(0));
            assert!(c.is_closed());
        }
    }
}
