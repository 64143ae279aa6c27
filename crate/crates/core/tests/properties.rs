use bbs_core::config::{parse_config, record_site, WalkLift};
use bbs_core::measures::{estimate_densities, sample_append_mix};
use bbs_core::reconstruct::reconstruct;
use bbs_core::slots::{
    components, components_at, offset_from_components, verify_component_shift, SlotComponents,
    SlotConfig,
};
use bbs_core::soliton::{identify, identify_batch, identify_stream, pair_one_step, track};
use bbs_core::speeds::{interaction_residual, solve_interaction, solve_rho, table_residual};
use bbs_core::BallConfig;
use proptest::collection::vec;
use proptest::prelude::*;

fn config(max_len: usize) -> impl Strategy<Value = BallConfig> {
    (0.02f64..0.45)
        .prop_flat_map(move |p| vec(prop::bool::weighted(p), 0..max_len))
        .prop_map(BallConfig::new)
}

/// Closed configuration with a record at site 0.
fn rooted(max_len: usize) -> impl Strategy<Value = BallConfig> {
    config(max_len).prop_map(|c| {
        let mut bits = vec![false];
        bits.extend_from_slice(c.bits());
        BallConfig::new(bits).closed()
    })
}

fn zeta(kmax: usize, span: i64) -> impl Strategy<Value = SlotComponents> {
    vec((1..=kmax, -span..span, 0usize..3), 0..12).prop_map(|entries| {
        let mut z = SlotComponents::new();
        for (k, i, c) in entries {
            z.set(k, i, c);
        }
        z
    })
}

fn strip(c: &BallConfig, k: usize) -> BallConfig {
    let set = identify(c);
    let mut keep = vec![true; set.window()];
    for s in set.iter().filter(|s| s.size() <= k) {
        for x in s.sites() {
            keep[x] = false;
        }
    }
    let closed = c.closed();
    BallConfig::new(
        closed
            .bits()
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&b, _)| b)
            .collect(),
    )
}

proptest! {
    #[test]
    fn carrier_and_reflection_agree(c in config(200)) {
        let a = c.apply_t();
        let b = c.lift().apply_t().project();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.ball_count(), c.ball_count());
    }

    #[test]
    fn lift_round_trip(c in config(200)) {
        let w = c.lift();
        prop_assert_eq!(w.project(), c.clone());
        prop_assert_eq!(WalkLift::from_heights(w.heights().to_vec()), Some(w));
    }

    #[test]
    fn text_round_trip(c in config(100)) {
        prop_assert_eq!(parse_config(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn records_are_strict_minima(c in config(150)) {
        let w = c.lift();
        let r = c.records();
        let mut min = 0i64;
        for x in 0..c.len() {
            let h = w.height(x as i64);
            prop_assert_eq!(r.contains(x), h < min);
            min = min.min(h);
        }
        for (j, &x) in r.sites().iter().enumerate() {
            prop_assert_eq!(record_site(&w, j as i64 + 1), x as i64);
        }
    }

    #[test]
    fn empty_suffix_adds_one_record_per_site(c in config(100), extra in 1usize..20) {
        let closed = c.closed();
        let before = closed.records().len();
        let longer = closed.padded(closed.len() + extra);
        prop_assert_eq!(longer.records().len(), before + extra);
    }

    #[test]
    fn stream_matches_batch(c in config(200)) {
        prop_assert_eq!(identify_stream(&c), identify_batch(&c));
    }

    #[test]
    fn solitons_partition_the_window(c in config(200)) {
        let closed = c.closed();
        let set = identify(&c);
        let recs = closed.records();
        prop_assert_eq!(set.records(), recs.sites());
        let mut seen = vec![0u8; set.window()];
        for s in &set {
            prop_assert_eq!(s.head.len(), s.tail.len());
            for &h in &s.head {
                prop_assert!(closed.bits()[h]);
                seen[h] += 1;
            }
            for &t in &s.tail {
                prop_assert!(!closed.bits()[t]);
                seen[t] += 1;
            }
        }
        for &r in set.records() {
            seen[r] += 1;
        }
        prop_assert!(seen.iter().all(|&n| n == 1));
    }

    #[test]
    fn pairing_is_a_size_preserving_bijection(c in config(200)) {
        let before = identify(&c);
        let p = pair_one_step(&before, &c.apply_t()).unwrap();
        prop_assert_eq!(before.size_counts(), p.after.size_counts());
        let mut img = p.image.clone();
        img.sort_unstable();
        img.dedup();
        prop_assert_eq!(img.len(), before.len());
        for (i, s) in before.iter().enumerate() {
            prop_assert_eq!(&p.after.solitons()[p.image[i]].head, &s.tail);
        }
    }

    #[test]
    fn isolated_soliton_translates(k in 1usize..6, lead in 0usize..5, t in 1usize..8) {
        let mut bits = vec![false; lead];
        bits.extend(std::iter::repeat_n(true, k));
        bits.extend(std::iter::repeat_n(false, k));
        let c = BallConfig::new(bits);
        let s0 = identify(&c).solitons()[0].clone();
        let later = identify(&c.apply_t_steps(t));
        prop_assert_eq!(later.solitons()[0].clone(), s0.translated(k * t));
    }

    #[test]
    fn slot_counts_inside_solitons(c in config(200)) {
        let set = identify(&c);
        let slots = SlotConfig::of(&c);
        for s in &set {
            let m = s.size();
            for k in 1..=m + 1 {
                let n = s.sites().iter().filter(|&&x| slots.is_slot(x as i64, k)).count();
                prop_assert_eq!(n, 2 * m.saturating_sub(k));
            }
        }
    }

    #[test]
    fn decompose_then_rebuild(c in rooted(200)) {
        let z = components(&c).unwrap();
        let n = c.records().len();
        let r = reconstruct(&z, n, 0);
        prop_assert_eq!(r.config, c);
    }

    #[test]
    fn rebuild_then_decompose(z in zeta(5, 8), n_right in 9usize..20, n_left in 9usize..20) {
        let r = reconstruct(&z, n_right, n_left);
        let back = components_at(&r.config, r.origin as i64).unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn small_solitons_do_not_change_larger_components(c in rooted(200), k in 1usize..4) {
        let z = components(&c).unwrap();
        let stripped = strip(&c, k);
        prop_assert_eq!(components(&stripped).unwrap(), z.above(k));
    }

    #[test]
    fn component_shift_law(c in rooted(120), t in 1usize..6, pick in 0usize..1000) {
        let recs = c.records();
        let anchor = recs.sites()[pick % recs.len()] as i64;
        let r = verify_component_shift(&c, anchor, t).unwrap();
        prop_assert!(r.holds(), "failure at {:?}", r.failure);
    }

    #[test]
    fn offsets_depend_only_on_larger_components(c in rooted(120), t in 1usize..6, pick in 0usize..1000) {
        let recs = c.records();
        let j = pick % recs.len();
        let anchor = recs.sites()[j] as i64;
        let z = components_at(&c, anchor).unwrap();
        let flow = bbs_core::slots::soliton_flow(&c, anchor, t).unwrap();
        let n_left = j + 1;
        let n_right = recs.len() - j;
        for k in 1..=z.max_size() {
            let o = offset_from_components(&z, k, t, n_right, n_left).unwrap();
            prop_assert_eq!(o, flow.offset(k));
        }
    }

    #[test]
    fn explicit_and_interaction_speeds_agree(raw in vec(0.0f64..1.0, 1..10)) {
        let total: f64 = raw.iter().enumerate().map(|(i, r)| 2.0 * (i + 1) as f64 * r).sum();
        let rho: Vec<f64> = raw.iter().map(|r| r * 0.89 / total.max(1e-9)).collect();
        let t = solve_rho(&rho).unwrap();
        let v = solve_interaction(&t.rho_bar()).unwrap();
        for (a, b) in v.iter().zip(&t.v) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        prop_assert!(interaction_residual(&t.rho_bar(), &t.v) < 1e-10);
        prop_assert!(table_residual(&t) < 1e-10);
        prop_assert!(t.w.iter().all(|&w| w >= 1.0));
        prop_assert!((t.w[t.len() - 1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn speeds_increase_with_size(raw in vec(0.0f64..1.0, 2..10)) {
        let total: f64 = raw.iter().enumerate().map(|(i, r)| 2.0 * (i + 1) as f64 * r).sum();
        let rho: Vec<f64> = raw.iter().map(|r| r * 0.89 / total.max(1e-9)).collect();
        let t = solve_rho(&rho).unwrap();
        for w in t.v.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn same_size_solitons_keep_their_order(c in config(150), steps in 1usize..8) {
        let tr = track(&c, steps).unwrap();
        let sol = tr.initial.solitons();
        for i in 0..sol.len() {
            for j in i + 1..sol.len() {
                if sol[i].size() == sol[j].size() {
                    let (a, b) = (&tr.solitons.solitons()[tr.image[i]], &tr.solitons.solitons()[tr.image[j]]);
                    prop_assert!(a.leftmost() < b.leftmost());
                }
            }
        }
    }

    #[test]
    fn excursion_length_identity(c in rooted(300)) {
        let d = estimate_densities(&c).unwrap();
        let sum: f64 = d.rho.iter().enumerate().map(|(i, r)| 2.0 * (i + 1) as f64 * r).sum();
        prop_assert!((d.w0 - 1.0 - sum).abs() < 1e-9);
        for (rb, r) in d.rho_bar.iter().zip(&d.rho) {
            prop_assert!((rb - r / d.w0).abs() < 1e-15);
        }
    }
}

#[test]
fn reproducible_append_mix() {
    let a = sample_append_mix(&[0.006, 0.005, 0.1, 0.003], 2000, 20, 11).unwrap();
    let b = sample_append_mix(&[0.006, 0.005, 0.1, 0.003], 2000, 20, 11).unwrap();
    assert_eq!(a, b);
    assert!(a.records().contains(0));
    assert!(a.is_closed());
}
