mod common;

use proptest::prelude::*;

use colortrack::control::{discretize, pi_step, ControllerState, PiGains, PlantModel};
use colortrack::imaging::{render, Frame, Rgb565, Rgb8, Scene, Shape, ShapeKind};
use colortrack::plant::{plant_step, AxisRange, CameraIntrinsics, CameraPose, PlantState};
use colortrack::region::{locate, step_cap, trace_contour_path, ScanParams};
use colortrack::segmentation::{
    chromaticity, segment, segment_unpacked, ChromaThreshold, PackedBinaryMask, RgbBoxThreshold,
    Threshold,
};

use common::OracleThreshold;

fn frame_strategy() -> impl Strategy<Value = (usize, usize, Vec<u16>)> {
    (1usize..=64, 1usize..=64).prop_flat_map(|(w, h)| {
        (Just(w), Just(h), prop::collection::vec(any::<u16>(), w * h))
    })
}

fn threshold_strategy() -> impl Strategy<Value = (Threshold, OracleThreshold)> {
    let rgb = (any::<[u8; 3]>(), any::<[u8; 3]>()).prop_map(|(a, b)| {
        let lo = [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])];
        let hi = [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])];
        let t = RgbBoxThreshold::new((lo[0], hi[0]), (lo[1], hi[1]), (lo[2], hi[2])).unwrap();
        (Threshold::Rgb(t), OracleThreshold::Box { lo, hi })
    });
    let chroma = (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 1u16..200).prop_map(|(a, b, c, d, i_min)| {
        let r = (a.min(b), a.max(b));
        let g = (c.min(d), c.max(d));
        (Threshold::Chroma(ChromaThreshold::new(r, g, i_min).unwrap()), OracleThreshold::Chroma { r, g, i_min: i_min as u32 })
    });
    prop_oneof![rgb, chroma]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn segmenters_match_reference((w, h, words) in frame_strategy(), (t, oracle) in threshold_strategy()) {
        let frame = Frame::from_pixels(w, h, words.iter().map(|&v| Rgb565(v)).collect()).unwrap();
        let expected = common::classify(&words, &oracle);
        let mask = segment(&frame, &t);
        let packed = common::pack(&expected);
        prop_assert_eq!(mask.words(), packed.as_slice());
        prop_assert_eq!(segment_unpacked(&frame, &t), expected);
    }

    #[test]
    fn mask_addressing_matches_bool_grid(
        w in 1usize..100,
        h in 1usize..40,
        ops in prop::collection::vec((any::<u16>(), any::<u16>(), any::<bool>()), 0..400),
    ) {
        let mut mask = PackedBinaryMask::new(w, h);
        let mut grid = vec![false; w * h];
        for (x, y, v) in ops {
            let (x, y) = (x as usize % w, y as usize % h);
            mask.set(x, y, v).unwrap();
            grid[y * w + x] = v;
        }
        for y in 0..h {
            for x in 0..w {
                prop_assert_eq!(mask.get(x, y).unwrap(), grid[y * w + x]);
            }
        }
        let again = PackedBinaryMask::from_le_bytes(w, h, &mask.to_le_bytes()).unwrap();
        prop_assert_eq!(&again, &mask);
        let packed = common::pack(&grid);
        prop_assert_eq!(mask.words(), packed.as_slice());
    }

    #[test]
    fn chromaticity_survives_integer_scaling(r in 0u8..=63, g in 0u8..=63, b in 0u8..=63, k in 1u8..=4) {
        let base = chromaticity(Rgb8::new(r, g, b));
        let scaled = chromaticity(Rgb8::new(r * k, g * k, b * k));
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn widen_then_narrow_is_identity(w in any::<u16>()) {
        let p = Rgb565(w);
        prop_assert_eq!(Rgb565::narrow(p.widen()), p);
        let (r5, g6, b5) = p.decode();
        prop_assert_eq!(Rgb565::encode(r5, g6, b5).unwrap(), p);
    }

    #[test]
    fn narrow_widen_is_idempotent(r in any::<u8>(), g in any::<u8>(), b in any::<u8>()) {
        let once = Rgb565::narrow(Rgb8::new(r, g, b)).widen();
        prop_assert_eq!(Rgb565::narrow(once).widen(), once);
    }

    #[test]
    fn contour_limits_match_flood_fill(seed in any::<u64>(), target in 1usize..250) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (w, h) = (24, 20);
        let grid = common::random_blob(&mut rng, w, h, target);
        let mask = PackedBinaryMask::from_fn(w, h, |i| grid[i]);
        let d = locate(&mask, &ScanParams::with_min_width(1)).expect("blob is non-empty");
        let first = grid.iter().position(|&b| b).unwrap();
        let (bbox, n) = common::bfs_bbox(&grid, w, h, (first % w, first / w));
        prop_assert_eq!((d.left, d.right, d.top, d.bottom), bbox);
        let (mut sx, sy) = (first % w, first / w);
        while sx + 1 < w && grid[sy * w + sx + 1] {
            sx += 1;
        }
        let (again, path) = trace_contour_path(&mask, (sx, sy), &ScanParams::with_min_width(1));
        prop_assert_eq!(again, d);
        prop_assert!(n >= 1 && path.len() <= step_cap(&mask));
        prop_assert!(path.iter().all(|&(x, y)| grid[y * w + x]));
        // Same mask, same answer.
        prop_assert_eq!(locate(&mask, &ScanParams::with_min_width(1)), Some(d));
    }

    #[test]
    fn render_is_monotone_in_illumination(
        s1 in 0.0f64..=1.0,
        s2 in 0.0f64..=1.0,
        color in any::<[u8; 3]>(),
        kind in prop_oneof![Just(ShapeKind::Disk), Just(ShapeKind::Triangle), Just(ShapeKind::Rectangle)],
    ) {
        let (lo, hi) = (s1.min(s2), s1.max(s2));
        let intr = CameraIntrinsics { width: 48, height: 40, ppd_x: 4.0, ppd_y: 4.0 };
        let scene = Scene::new(Rgb8::new(10, 20, 30))
            .with_shape(Shape::new(kind, 0.5, -0.5, 3.0, Rgb8::new(color[0], color[1], color[2])));
        let pose = CameraPose::new(0.0, 0.0);
        let a = render(&scene.clone().with_illumination(lo), pose, &intr);
        let b = render(&scene.clone().with_illumination(hi), pose, &intr);
        for (p, q) in a.pixels().iter().zip(b.pixels()) {
            let (p, q) = (p.widen(), q.widen());
            prop_assert!(p.r <= q.r && p.g <= q.g && p.b <= q.b);
        }
        prop_assert_eq!(render(&scene.clone().with_illumination(lo), pose, &intr), a);
    }

    #[test]
    fn pi_step_is_linear_when_unsaturated(
        kp in 0.0f64..5.0,
        ki in 0.0f64..20.0,
        u1 in -10.0f64..10.0, e1 in -100.0f64..100.0, f1 in -100.0f64..100.0,
        u2 in -10.0f64..10.0, e2 in -100.0f64..100.0, f2 in -100.0f64..100.0,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let c = discretize(&PiGains { kp, ki }, 0.05).unwrap();
        let run = |u: f64, ep: f64, e: f64| {
            let mut s = ControllerState::new(0.05, f64::MIN, f64::MAX).unwrap();
            s.u_prev = u;
            s.e_prev = ep;
            pi_step(s, &c, e).unwrap().0
        };
        let combined = run(a * u1 + b * u2, a * e1 + b * e2, a * f1 + b * f2);
        let separate = a * run(u1, e1, f1) + b * run(u2, e2, f2);
        prop_assert!((combined - separate).abs() <= 1e-9 * (1.0 + separate.abs()));
    }

    #[test]
    fn plant_step_is_linear_before_clamping(
        x1 in -50.0f64..50.0, u1 in -50.0f64..50.0,
        x2 in -50.0f64..50.0, u2 in -50.0f64..50.0,
        a in -2.0f64..2.0, b in -2.0f64..2.0,
        tau in 0.01f64..2.0, k in 0.1f64..5.0,
    ) {
        let m = PlantModel::new(k, tau).unwrap();
        let step = |x: f64, u: f64| plant_step(PlantState { angle: x }, &m, u, 0.1, AxisRange::UNBOUNDED).angle;
        let combined = step(a * x1 + b * x2, a * u1 + b * u2);
        let separate = a * step(x1, u1) + b * step(x2, u2);
        prop_assert!((combined - separate).abs() <= 1e-9 * (1.0 + separate.abs()));
    }
}
