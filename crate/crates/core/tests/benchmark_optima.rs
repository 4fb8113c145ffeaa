use lipbo::benchmarks::tables::ConstantTable;
use lipbo::benchmarks::{Benchmark, HARTMAN3_TABLE, HARTMAN6_TABLE, MICHALEWICZ_TABLE, SHEKEL_TABLE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn clamp_into(b: &Benchmark<f64>, x: &mut [f64]) {
    let (lo, hi) = (b.domain().lower(), b.domain().upper());
    for i in 0..x.len() {
        x[i] = x[i].clamp(lo[i], hi[i]);
    }
}

/// Compass search: probe +-step along each axis, halve the step when nothing
/// improves.
fn refine(b: &Benchmark<f64>, start: Vec<f64>) -> (Vec<f64>, f64) {
    let side = b.domain().upper()[0] - b.domain().lower()[0];
    let mut x = start;
    let mut fx = b.evaluate_raw(&x).unwrap();
    let mut step = 0.05 * side;
    while step > 1e-10 {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * step;
                clamp_into(b, &mut y);
                let fy = b.evaluate_raw(&y).unwrap();
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

#[test]
fn no_point_beats_known_optimum() {
    for b in Benchmark::<f64>::all_builtin() {
        let (argmax, max) = b.known_optimum();
        assert!((b.evaluate_raw(argmax).unwrap() - max).abs() <= 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut best: Vec<(f64, Vec<f64>)> = Vec::new();
        for x in b.domain().sample(&mut rng, 1_000_000) {
            let f = b.evaluate_raw(&x).unwrap();
            assert!(f <= max + 1e-6, "{}: random point {x:?} gives {f} > {max}", b.name());
            if best.len() < 20 || f > best[best.len() - 1].0 {
                best.push((f, x));
                best.sort_by(|a, c| c.0.partial_cmp(&a.0).unwrap());
                best.truncate(20);
            }
        }
        let refined = best
            .into_iter()
            .map(|(_, x)| refine(&b, x).1)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(refined <= max + 1e-6, "{}: refined {refined} > {max}", b.name());
        eprintln!("{}: known {max}, best search {refined}", b.name());
    }
}

#[test]
fn table_maxima_match_evaluation() {
    for (name, text) in [
        ("hartman3", HARTMAN3_TABLE),
        ("hartman6", HARTMAN6_TABLE),
        ("shekel", SHEKEL_TABLE),
        ("michalewicz", MICHALEWICZ_TABLE),
    ] {
        let table = ConstantTable::parse(text).unwrap();
        let recorded = table.get("max").unwrap().get(0, 0);
        let b = Benchmark::<f64>::builtin(name).unwrap();
        assert!((b.known_optimum().1 - recorded).abs() <= 1e-9, "{name}");
    }
}

#[test]
fn normalized_values_stay_below_one() {
    for b in Benchmark::<f64>::all_builtin() {
        assert!((b.evaluate_normalized(b.known_optimum().0).unwrap() - 1.0).abs() <= 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for x in b.domain().sample(&mut rng, 1_000_000) {
            assert!(b.evaluate_normalized(&x).unwrap() <= 1.0 + 1e-9, "{}", b.name());
        }
    }
}

#[test]
fn empirical_lipschitz_constants() {
    // recorded, not asserted: the configured constants are approximations
    for b in Benchmark::<f64>::all_builtin() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = 1e-6;
        let (argmax, _) = b.known_optimum();
        let mut gradient: f64 = 0.0;
        let mut secant: f64 = 0.0;
        for x in b.domain().sample(&mut rng, 100_000) {
            let fx = b.evaluate_normalized(&x).unwrap();
            let mut g2 = 0.0;
            for i in 0..x.len() {
                let mut y = x.clone();
                y[i] = if y[i] + h <= b.domain().upper()[i] {
                    y[i] + h
                } else {
                    y[i] - h
                };
                let d = (b.evaluate_normalized(&y).unwrap() - fx) / (y[i] - x[i]);
                g2 += d * d;
            }
            gradient = gradient.max(g2.sqrt());
            let dist = x.iter().zip(argmax).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
            secant = secant.max((1.0 - fx) / dist);
        }
        let l = b.default_lipschitz();
        if secant > l {
            eprintln!(
                "{}: secant slope to the maximizer {secant:.3} exceeds L = {l}",
                b.name()
            );
        }
        eprintln!(
            "{}: max gradient {gradient:.3} ({:.2} L), max secant to maximizer {secant:.3}",
            b.name(),
            gradient / l
        );
        assert!(gradient.is_finite() && secant.is_finite());
    }
}

#[test]
fn single_precision_evaluation() {
    for (b64, b32) in Benchmark::<f64>::all_builtin()
        .into_iter()
        .zip(Benchmark::<f32>::all_builtin())
    {
        let x64: Vec<f64> = b64.known_optimum().0.to_vec();
        let x32: Vec<f32> = x64.iter().map(|&v| v as f32).collect();
        let n64 = b64.evaluate_normalized(&x64).unwrap();
        let n32 = b32.evaluate_normalized(&x32).unwrap();
        assert!((n64 - n32 as f64).abs() <= 1e-4, "{}", b64.name());
    }
}
