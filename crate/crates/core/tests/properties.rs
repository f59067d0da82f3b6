use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector2, Vector3};
use proptest::prelude::*;

use schurkit::cli::spec::{parse_spec, CurveSpec};
use schurkit::curves::{reconstruct_plane, reconstruct_space_frenet, CurvatureFn, CurvatureProfile, Frame3, Jump};
use schurkit::minkowski::{reversed_cauchy_schwarz_slack, LorentzVec};
use schurkit::numerics::StepControl;
use schurkit::schur::{chord_inequality, monotonicity_profile};
use schurkit::sphere::{geodesic_curvature_of, jump_angle_transform, reconstruct_spherical};

fn control() -> StepControl {
    StepControl::new(2e-3, 1e-6).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn dominated_companions_have_longer_chords(
        mean in 0.3f64..1.2,
        amp in 0.0f64..0.25,
        freq in 0.5f64..3.0,
        weight in 0.0f64..1.0,
        torsion in -1.0f64..1.0,
        alpha in 0.0f64..0.8,
        alpha_t in 0.0f64..1.0,
        a in 0.0f64..0.45,
        b in 0.55f64..1.0,
    ) {
        let length = 3.0;
        let k = CurvatureFn::Sinusoidal { mean, amplitude: amp, frequency: freq, phase: 0.0 };
        let c = reconstruct_plane(
            &CurvatureProfile::new(length, k.clone(), vec![Jump::new(1.5, alpha)]).unwrap(),
            Vector2::zeros(),
            0.0,
            &control(),
        )
        .unwrap();
        let kt = k.product(CurvatureFn::Constant(weight));
        let ct = reconstruct_space_frenet(
            &CurvatureProfile::new(length, kt, vec![Jump::new(1.5, alpha * alpha_t)]).unwrap(),
            &CurvatureFn::Constant(torsion),
            &Frame3::standard(),
            &control(),
        )
        .unwrap();
        let range = (a * length, b * length);
        let chord = chord_inequality(&c, &ct, range, 1e-6).unwrap();
        prop_assert!(chord.slack >= -1e-6, "chord slack {}", chord.slack);
        let mono = monotonicity_profile(&c, &ct, range, 1e-6).unwrap();
        prop_assert!(mono.min_slack >= -1e-6, "monotonicity slack {}", mono.min_slack);
    }

    #[test]
    fn identical_curves_have_zero_chord_slack(mean in 0.2f64..1.5, a in 0.0f64..0.4, b in 0.6f64..1.0) {
        let c = reconstruct_plane(&CurvatureProfile::constant(3.0, mean).unwrap(), Vector2::zeros(), 0.0, &control()).unwrap();
        let chord = chord_inequality(&c, &c, (3.0 * a, 3.0 * b), 1e-6).unwrap();
        prop_assert!(chord.slack.abs() <= 1e-9);
    }

    #[test]
    fn spherical_reconstruction_commutes_with_rotation(
        k0 in -1.0f64..1.0,
        k1 in -0.5f64..0.5,
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0f64..PI,
    ) {
        let axis = Vector3::from(axis);
        prop_assume!(axis.norm() > 0.1);
        let rot = Rotation3::new(axis.normalize() * angle);
        let p = CurvatureProfile::smooth(2.5, CurvatureFn::Linear { a: k0, b: k1 }).unwrap();
        let c = reconstruct_spherical(&p, Vector3::z(), Vector3::x(), &control()).unwrap();
        let r = reconstruct_spherical(&p, rot * Vector3::z(), rot * Vector3::x(), &control()).unwrap();
        let moved = c.rotated(&rot);
        let worst = moved.curve.position.iter().zip(&r.curve.position).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(worst <= 1e-9, "{}", worst);
        prop_assert!((c.chord() - r.chord()).abs() <= 1e-9);
        let kg = geodesic_curvature_of(&r).unwrap();
        for (s, v) in kg.iter() {
            prop_assert!((v - (k0 + k1 * s)).abs() <= 1e-3);
        }
    }

    #[test]
    fn jump_transform_is_the_corner_angle(
        rm in -2.0f64..2.0,
        rp in -2.0f64..2.0,
        r in 0.1f64..3.0,
        alpha in 0.0f64..PI,
    ) {
        let vm = Vector3::new(r, 0.0, rm);
        let vp = Vector3::new(r * alpha.cos(), r * alpha.sin(), rp);
        prop_assert!((jump_angle_transform(rm, rp, r, alpha) - vm.angle(&vp)).abs() <= 1e-6);
    }

    #[test]
    fn future_timelike_vectors_reverse_cauchy_schwarz(
        p1 in -2.0f64..2.0,
        p2 in -2.0f64..2.0,
        dir1 in 0.0f64..(2.0 * PI),
        dir2 in 0.0f64..(2.0 * PI),
        m1 in 0.1f64..3.0,
        m2 in 0.1f64..3.0,
    ) {
        let v = |phi: f64, dir: f64, m: f64| Vector3::new(phi.cosh(), phi.sinh() * dir.cos(), phi.sinh() * dir.sin()) * m;
        let (u, w) = (v(p1, dir1, m1), v(p2, dir2, m2));
        let slack = reversed_cauchy_schwarz_slack(&u, &w).unwrap();
        prop_assert!(slack >= -1e-9 * (u.norm() * w.norm()), "{}", slack);
        let ul = LorentzVec::new3(u.x, u.y, u.z);
        prop_assert!(schurkit::minkowski::minkowski_dot(&ul, &ul).unwrap() > 0.0);
    }

    #[test]
    fn curve_specs_round_trip_through_json(
        length in 0.5f64..5.0,
        value in -2.0f64..2.0,
        s in 0.1f64..0.9,
        alpha in 0.0f64..PI,
    ) {
        let text = format!(
            r#"{{"geometry": "plane", "length": {length}, "curvature": {{"preset": "constant", "value": {value}}},
                "jumps": [[{}, {alpha}]], "initial": {{"point": [1.0, 2.0], "angle": 0.5}}}}"#,
            s * length
        );
        let spec: CurveSpec = parse_spec(&text).unwrap();
        let again = parse_spec(&serde_json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(spec, again);
    }
}
