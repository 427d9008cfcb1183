use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use ras_isac::antenna::{build_upa, ArrayLayout, RadiationPattern};
use ras_isac::channel::{comm_channel, sensing_response, CarrierSpec, ChannelVector};
use ras_isac::geometry::{
    boresight_vector, incidence_angles, rotation_from_angles, BoresightOrientation, RotationMatrix, Vec3,
};
use ras_isac::optimize::{
    coarse_to_fine_ao, exhaustive_boresight, ma_position_search, AngleGrid, AoInit, AoOptions, MaSegment, Objective,
    ObjectiveKind, SceneSnapshot,
};
use ras_isac::scenario::output::{to_csv, to_json, ResultDocument};
use ras_isac::scenario::{sample_scenario, MetricRow, RunMetadata, ScenarioConfig, SweepKind};
use ras_isac::signal::{matched_receive_filter, mrt_weights, scnr, zf_all, MetricKind, Scheme};
use ras_isac::Execution;

const LAMBDA: f64 = 0.125;

fn carrier() -> CarrierSpec {
    CarrierSpec::with_wavelength(2.4e9, LAMBDA, 1e-11).unwrap()
}

fn orientation() -> impl Strategy<Value = BoresightOrientation> {
    (0.0..=FRAC_PI_2, -PI..PI).prop_map(|(t, p)| BoresightOrientation::new(t, p).unwrap())
}

fn unit_vector() -> impl Strategy<Value = Vec3> {
    (-1.0f64..1.0, -PI..PI).prop_map(|(z, phi)| {
        let s = (1.0 - z * z).sqrt();
        Vec3::new(s * phi.cos(), s * phi.sin(), z)
    })
}

fn front_point() -> impl Strategy<Value = Vec3> {
    (0.05f64..1.0, -PI..PI, 20.0f64..150.0).prop_map(|(x, phi, r)| {
        let s = (1.0 - x * x).sqrt();
        Vec3::new(x, s * phi.cos(), s * phi.sin()) * r
    })
}

fn layout(rows: usize, cols: usize, orientations: &[BoresightOrientation]) -> ArrayLayout {
    build_upa(rows, cols, LAMBDA / 2.0, LAMBDA, BoresightOrientation::BROADSIDE)
        .unwrap()
        .with_orientations(orientations)
        .unwrap()
}

fn scene(rows: usize, cols: usize, seed: u64) -> SceneSnapshot {
    let mut c = ScenarioConfig::default();
    c.array.rows = rows;
    c.array.cols = cols;
    c.seed = seed;
    sample_scenario(&c, 0).unwrap().scene
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boresight_is_unit(o in orientation()) {
        prop_assert!((boresight_vector(o).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn from_direction_inverts_boresight(o in orientation()) {
        let back = BoresightOrientation::from_direction(boresight_vector(o)).unwrap();
        prop_assert!(boresight_vector(back).angle_to(boresight_vector(o)) < 1e-9);
    }

    #[test]
    fn epsilon_is_symmetric(a in unit_vector(), b in unit_vector()) {
        let e1 = incidence_angles(a, b).epsilon;
        let e2 = incidence_angles(b, a).epsilon;
        prop_assert!((e1 - e2).abs() < 1e-12);
        prop_assert!((0.0..=PI).contains(&e1));
    }

    #[test]
    fn rotations_are_proper(o in orientation(), axis in unit_vector(), angle in -PI..PI) {
        for r in [rotation_from_angles(o), RotationMatrix::from_axis_angle(axis, angle)] {
            prop_assert!(r.orthonormality_error() < 1e-12);
            prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_maps_broadside_and_preserves_angles(o in orientation(), a in unit_vector(), b in unit_vector()) {
        let r = rotation_from_angles(o);
        prop_assert!(r.apply(Vec3::X).angle_to(boresight_vector(o)) < 1e-9);
        let before = a.angle_to(b);
        let after = r.apply(a).angle_to(r.apply(b));
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn gain_is_bounded(eps in 0.0..=PI, g0 in 1.0f64..10.0) {
        let p = RadiationPattern::new(g0).unwrap();
        let g = p.effective_gain(eps).unwrap();
        prop_assert!((0.0..=g0).contains(&g));
        if eps > FRAC_PI_2 {
            prop_assert_eq!(g, 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_forcing_is_orthogonal(users in prop::collection::vec(front_point(), 1..=4)) {
        let l = layout(2, 2, &[BoresightOrientation::BROADSIDE; 4]);
        let hs: Vec<ChannelVector> = users
            .iter()
            .map(|u| comm_channel(&l, &RadiationPattern::default(), *u, &carrier()).unwrap())
            .collect();
        if let Ok(ws) = zf_all(&hs) {
            for (k, w) in ws.iter().enumerate() {
                prop_assert!((w.as_slice().iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-9);
                let own = hs[k].response(w.as_slice()).norm();
                for (j, h) in hs.iter().enumerate() {
                    if j != k {
                        prop_assert!(h.response(w.as_slice()).norm() <= 1e-6 * own);
                    }
                }
            }
        }
    }

    #[test]
    fn scnr_ignores_common_phase(
        target in front_point(),
        clutter in prop::collection::vec(front_point(), 0..4),
        phase in -PI..PI,
    ) {
        let l = layout(2, 2, &[BoresightOrientation::BROADSIDE; 4]);
        let pat = RadiationPattern::default();
        let t = sensing_response(&l, &pat, target, 1.0, 0.3, &carrier()).unwrap();
        let cl: Vec<_> = clutter
            .iter()
            .map(|c| sensing_response(&l, &pat, *c, 0.5, -1.0, &carrier()).unwrap())
            .collect();
        let h = ChannelVector(t.a_tx.clone());
        let w = mrt_weights(&h).unwrap();
        let v = matched_receive_filter(&t, &w).unwrap();
        let base = scnr(&t, &cl, &w, &v, 1.0, 1e-11).unwrap();
        let wr = w.rotated(phase);
        let rot = Complex64::from_polar(1.0, -phase);
        let vr: Vec<_> = v.iter().map(|x| x * rot).collect();
        let a = scnr(&t, &cl, &wr, &v, 1.0, 1e-11).unwrap();
        let b = scnr(&t, &cl, &w, &vr, 1.0, 1e-11).unwrap();
        prop_assert!((a - base).abs() <= 1e-9 * base);
        prop_assert!((b - base).abs() <= 1e-9 * base);
    }

    #[test]
    fn received_power_objective_is_nonnegative(user in front_point(), os in prop::collection::vec(orientation(), 4)) {
        let l = layout(2, 2, &os);
        let h = comm_channel(&l, &RadiationPattern::default(), user, &carrier()).unwrap();
        prop_assert!(h.norm_sqr() >= 0.0);
        prop_assert!(h.norm_sqr() <= 4.0 * 4.0 * (LAMBDA / (4.0 * PI * (user.norm() - 0.2))).powi(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn optimizer_orderings(seed in 0u64..10_000) {
        let sc = scene(1, 2, seed);
        let l = layout(1, 2, &[BoresightOrientation::BROADSIDE; 2]);
        let obj = Objective::new(ObjectiveKind::Scnr, &l, RadiationPattern::default(), carrier(), 1.0, &[sc]).unwrap();
        let fixed = obj.evaluate(obj.base_configs());
        let grid = AngleGrid::uniform(7, 8, 3, 0);
        let ao = coarse_to_fine_ao(&obj, &grid, &AoInit::Broadside, AoOptions::default(), Execution::Sequential).unwrap();
        prop_assert!(ao.objective >= fixed);
        prop_assert!(ao.trace.windows(2).all(|w| w[1] >= w[0]));
        let ex = exhaustive_boresight(&obj, &grid, &[0, 1], &[BoresightOrientation::BROADSIDE; 2], 1_000_000, Execution::Sequential).unwrap();
        prop_assert!(ex.objective >= ao.objective * (1.0 - 1e-12));
        let ma = ma_position_search(&obj, &MaSegment::for_wavelength(LAMBDA), AoOptions::default(), Execution::Sequential).unwrap();
        prop_assert!(ma.objective >= fixed);
    }
}

fn row() -> impl Strategy<Value = MetricRow> {
    (
        prop_oneof![Just(SweepKind::Azimuth), Just(SweepKind::Power)],
        -100.0f64..100.0,
        prop_oneof![Just(Scheme::Ras), Just(Scheme::Fixed), Just(Scheme::Ma)],
        prop_oneof![Just(MetricKind::ReceivedPower), Just(MetricKind::Scnr)],
        -300.0f64..300.0,
        any::<u64>(),
        prop::option::of(0usize..1000),
    )
        .prop_map(|(sweep_kind, swept_value, scheme, metric, value_db, seed, run_index)| MetricRow {
            sweep_kind,
            swept_value,
            scheme,
            metric,
            value_db,
            seed,
            run_index,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn json_rows_round_trip(rows in prop::collection::vec(row(), 1..20)) {
        let config = ScenarioConfig::default().resolved().unwrap();
        let meta = RunMetadata::new(&config, config.power_spec().unwrap(), Vec::new());
        let doc: ResultDocument = serde_json::from_str(&to_json(&rows, &meta).unwrap()).unwrap();
        prop_assert_eq!(doc.rows, rows);
        prop_assert_eq!(doc.metadata, meta);
    }

    #[test]
    fn csv_rows_round_trip_to_nine_digits(rows in prop::collection::vec(row(), 1..20)) {
        let text = to_csv(&rows);
        let mut lines = text.lines();
        prop_assert_eq!(lines.next(), Some(ras_isac::scenario::output::CSV_HEADER));
        let parsed: Vec<_> = lines.collect();
        prop_assert_eq!(parsed.len(), rows.len());
        for (line, r) in parsed.iter().zip(&rows) {
            let f: Vec<&str> = line.split(',').collect();
            prop_assert_eq!(f.len(), 7);
            prop_assert_eq!(f[0], r.sweep_kind.as_str());
            let sv: f64 = f[1].parse().unwrap();
            prop_assert!((sv - r.swept_value).abs() <= 1e-8 * r.swept_value.abs().max(1e-300));
            prop_assert_eq!(f[2], r.scheme.as_str());
            prop_assert_eq!(f[3], r.metric.as_str());
            let v: f64 = f[4].parse().unwrap();
            prop_assert!((v - r.value_db).abs() <= 1e-8 * r.value_db.abs().max(1e-300));
            prop_assert_eq!(f[5].parse::<u64>().unwrap(), r.seed);
            match r.run_index {
                Some(i) => prop_assert_eq!(f[6].parse::<usize>().unwrap(), i),
                None => prop_assert_eq!(f[6], "mean"),
            }
        }
    }
}
