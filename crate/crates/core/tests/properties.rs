use proptest::prelude::*;

use snumlab::extreal::ExtReal;
use snumlab::flags::{build_flag, embed_diffuse};
use snumlab::norms::{norm, SymmetricNormSpec};
use snumlab::random::{self, ShapeParams, SplitMix64};
use snumlab::svalues::{ky_fan_integral, mu, mu_at, mu_by_distribution};
use snumlab::young::{lp_loc_split, young_gap};
use snumlab::{AlgebraShape, Operator};

fn params() -> ShapeParams {
    ShapeParams {
        max_total_dim: 7,
        ..ShapeParams::default()
    }
}

fn shape(seed: u64) -> (SplitMix64, AlgebraShape) {
    let mut rng = SplitMix64::new(seed);
    let s = random::random_shape(&mut rng, &params());
    (rng, s)
}

fn unitary(rng: &mut SplitMix64, shape: &AlgebraShape) -> Operator {
    let blocks = shape.blocks().iter().map(|b| random::haar_unitary(rng, b.n)).collect();
    Operator::new(shape.clone(), blocks).unwrap()
}

/// Midpoints of the pieces of μ(x), plus a point inside the infinite tail.
fn probes(x: &Operator) -> Vec<f64> {
    let bps = mu(x).unwrap().breakpoints();
    let mut out: Vec<f64> = bps.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    out.push(bps.last().copied().unwrap_or(0.0) + 1.0);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mu_is_nonincreasing(seed in any::<u64>()) {
        let (mut rng, s) = shape(seed);
        let m = mu(&random::random_general(&mut rng, &s)).unwrap();
        for w in m.segments().windows(2) {
            prop_assert!(w[0].level >= w[1].level);
        }
    }

    #[test]
    fn mu_matches_distribution_inverse(seed in any::<u64>()) {
        let (mut rng, s) = shape(seed);
        let x = random::random_general(&mut rng, &s);
        for s in probes(&x) {
            let a = mu_at(&x, s).unwrap();
            let b = mu_by_distribution(&x, s).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a), "s = {s}: {a} vs {b}");
        }
    }

    #[test]
    fn ky_fan_is_concave_with_slope_mu(seed in any::<u64>()) {
        let (mut rng, s) = shape(seed);
        let x = random::random_general(&mut rng, &s);
        let h = 1e-4;
        let k = |t: f64| ky_fan_integral(&x, t).unwrap().finite().unwrap();
        let mut last = f64::INFINITY;
        for t in probes(&x) {
            let slope = (k(t + h) - k(t - h)) / (2.0 * h);
            let m = mu_at(&x, t).unwrap();
            prop_assert!((slope - m).abs() <= 1e-6 * (1.0 + m));
            prop_assert!(slope <= last + 1e-9);
            last = slope;
        }
    }

    #[test]
    fn norms_are_unitarily_invariant(seed in any::<u64>(), which in 0usize..4) {
        let (mut rng, s) = shape(seed);
        let x = random::random_general(&mut rng, &s);
        let u = unitary(&mut rng, &s);
        let v = unitary(&mut rng, &s);
        let y = u.mul(&x).unwrap().mul(&v).unwrap();
        let spec = match which {
            0 => SymmetricNormSpec::lp(1.0).unwrap(),
            1 => SymmetricNormSpec::lp(2.5).unwrap(),
            2 => SymmetricNormSpec::ky_fan(0.75).unwrap(),
            _ => SymmetricNormSpec::uniform(),
        };
        let (nx, ny) = (norm(&x, &spec).unwrap(), norm(&y, &spec).unwrap());
        prop_assert!(nx.approx_eq(ny, 1e-9), "{nx:?} vs {ny:?}");
    }

    #[test]
    fn lp_norms_are_monotone(seed in any::<u64>(), p in 1.0f64..4.0) {
        let (mut rng, s) = shape(seed);
        let x = random::random_positive(&mut rng, &s);
        let y = x.add(&random::random_positive(&mut rng, &s)).unwrap();
        let spec = SymmetricNormSpec::lp(p).unwrap();
        let (nx, ny) = (norm(&x, &spec).unwrap(), norm(&y, &spec).unwrap());
        match (nx, ny) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => prop_assert!(a <= b * (1.0 + 1e-9)),
            (_, ExtReal::Infinite) => {}
            _ => prop_assert!(false, "{nx:?} > {ny:?}"),
        }
    }

    #[test]
    fn flags_are_nested_with_exact_trace(seed in any::<u64>()) {
        let (mut rng, s) = shape(seed);
        let x = embed_diffuse(&random::random_positive(&mut rng, &s));
        let flag = build_flag(&x).unwrap();
        // An infinite-weight block makes the flag total infinite.
        let total = flag.total().finite().unwrap_or(f64::INFINITY);
        let span: f64 = flag.entries().iter().filter_map(|e| e.width.finite()).sum();
        let mut ts: Vec<f64> = (0..12).map(|_| rng.uniform_in(0.0, span * 1.2 + 1.0)).collect();
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            prop_assert!(flag.e(w[0]).le(&flag.e(w[1])));
        }
        for &t in &ts {
            let tr = flag.e(t).trace(x.shape()).finite().unwrap();
            prop_assert!((tr - t.min(total)).abs() <= 1e-12 * (1.0 + t));
        }
    }

    #[test]
    fn embed_diffuse_is_idempotent(seed in any::<u64>()) {
        let (mut rng, s) = shape(seed);
        let x = random::random_general(&mut rng, &s);
        let once = embed_diffuse(&x);
        prop_assert_eq!(embed_diffuse(&once), once.clone());
        prop_assert!(mu(&once).unwrap().approx_eq(&mu(&x).unwrap(), 1e-12));
    }

    #[test]
    fn lp_loc_parts_recombine(seed in any::<u64>(), t in 0.1f64..5.0) {
        let (mut rng, s) = shape(seed);
        let a = random::random_positive(&mut rng, &s);
        let split = lp_loc_split(&a, 2.0, t).unwrap();
        prop_assert!(split.summable.add(&split.bounded).unwrap().approx_eq(&a).unwrap());
        prop_assert!(split.bounded.norm().unwrap() <= split.r * (1.0 + 1e-9) + 1e-12);
        let m = mu(&split.summable).unwrap();
        prop_assert!(m.segments().iter().all(|g| g.level == 0.0 || g.level > split.r));
    }

    #[test]
    fn young_inequality_holds(seed in any::<u64>(), pi in 0usize..5) {
        let p = [1.25, 1.5, 2.0, 3.0, 4.0][pi];
        let (mut rng, s) = shape(seed);
        let a = random::random_general(&mut rng, &s);
        let b = random::random_general(&mut rng, &s);
        let g = young_gap(&a, &b, p).unwrap();
        prop_assert!(!g.violation && g.min_gap >= -1e-10);
    }
}
