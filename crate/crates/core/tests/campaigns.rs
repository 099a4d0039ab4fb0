use mmq::argmax_direction;
use mmq::examples::hexagon_instance;
use mmq::sweep::{analyze_profile, sweep_profile_default, SweepProfile, CHECK_FACE_CONSTANCY};
use mmq::verify::{
    random_campaign, random_instance, seeded_instance, verify_vertex_minimum, verify_vertex_minimum_with, CampaignConfig,
    CampaignReport, Fault, InstanceParams, Regime,
};

/// Reduced sizes so the suite stays quick; the acceptance target runs the
/// full-size campaigns.
fn light() -> CampaignConfig {
    CampaignConfig {
        directions: 36,
        grid: 101,
        sweep_samples: 1200,
        grid_step: 1e-2,
        fault: Fault::None,
    }
}

#[test]
fn hundred_random_profiles_pass_every_lemma_check() {
    let mut regimes = [0usize; 2];
    for seed in 0..100 {
        let params = InstanceParams::from_seed(seed);
        regimes[(params.regime == Regime::Outside) as usize] += 1;
        let (x, y) = random_instance(&params).unwrap();
        let profile = sweep_profile_default(&x, &y, 20).unwrap();
        let report = analyze_profile(&profile);
        let failed: Vec<_> = report.checks.iter().filter(|(_, c)| !c.pass).collect();
        assert!(failed.is_empty(), "seed {seed}: {failed:?}");
    }
    // both 0 ∈ X and 0 ∉ X are exercised
    assert!(regimes[0] >= 20 && regimes[1] >= 20, "{regimes:?}");
}

#[test]
fn light_campaign_passes_and_is_reproducible() {
    let a = random_campaign(12, 500, &light());
    assert!(a.passed(), "{:?}", a.failures);
    assert_eq!(a.trials, 12);
    let b = random_campaign(12, 500, &light());
    assert_eq!(a, b);
}

#[test]
fn failing_seed_replays_bit_exactly() {
    let cfg = CampaignConfig {
        fault: Fault::DenominatorMax,
        ..light()
    };
    let report = random_campaign(3, 77, &cfg);
    assert!(!report.passed());
    let first = &report.failures[0];
    let seed = first.seed.expect("random failures carry their seed");
    let replay = random_campaign(1, seed, &cfg);
    let again = replay.failures.iter().find(|f| f.check == first.check).unwrap();
    assert_eq!(again.margin.to_bits(), first.margin.to_bits());
    assert_eq!(again.detail, first.detail);
    assert_eq!(seeded_instance(seed).unwrap(), seeded_instance(seed).unwrap());
}

#[test]
fn denominator_fault_fails_every_direction() {
    for seed in 0..5 {
        let (x, y) = seeded_instance(seed).unwrap();
        assert!(verify_vertex_minimum(&x, &y, 360, 101).unwrap().passed());
        let bad = verify_vertex_minimum_with(&x, &y, 360, 101, Fault::DenominatorMax).unwrap();
        assert_eq!(bad.failures.len(), 360, "seed {seed}");
    }
}

/// Pulls the first sample of a same-face arc halfway towards the sample
/// before it. The new value lies between its neighbours, so it creates no
/// extremum and keeps any monotone run monotone; only constancy can see it.
fn corrupt_arc_entry(profile: &mut SweepProfile) {
    let (arc, victim, target) = profile
        .arcs
        .iter()
        .filter(|a| a.same_face && a.sample_ids.len() >= 3 && a.sample_ids[0] > 0)
        .find_map(|a| {
            let i = a.sample_ids[0];
            let (prev, cur) = (profile.samples[i - 1].q.r, profile.samples[i].q.r);
            ((prev - cur).abs() > 1e-8 * cur).then_some((a.id, i, 0.5 * (prev + cur)))
        })
        .expect("a same-face arc entered across a change in r");
    profile.samples[victim].q.r = target;
    let a = &mut profile.arcs[arc];
    a.r_min = a.r_min.min(target);
    a.r_max = a.r_max.max(target);
}

#[test]
fn corrupted_sample_trips_only_constancy() {
    let (x, y) = hexagon_instance();
    let mut profile = sweep_profile_default(&x, &y, 50).unwrap();
    assert!(analyze_profile(&profile).all_pass());
    corrupt_arc_entry(&mut profile);
    let report = analyze_profile(&profile);
    for (name, check) in &report.checks {
        assert_eq!(check.pass, name != CHECK_FACE_CONSTANCY, "{name}: {check:?}");
    }
}

#[test]
fn report_round_trips_through_json() {
    let cfg = CampaignConfig {
        fault: Fault::DenominatorMax,
        ..light()
    };
    let report = random_campaign(2, 3, &cfg);
    let text = serde_json::to_string(&report).unwrap();
    let back: CampaignReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn symmetric_seed_sets_argmax_tie() {
    let params = InstanceParams {
        asymmetry: 0.0,
        regime: Regime::Straddle,
        ..InstanceParams::from_seed(2)
    };
    let (x, y) = random_instance(&params).unwrap();
    assert!(x.x1().dist(&-x.x2()) <= 1e-12);
    let a = argmax_direction(&x, &y).unwrap();
    assert!(a.tie, "r+ = {}, r- = {}", a.r_plus, a.r_minus);
}
