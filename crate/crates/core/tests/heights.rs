use quadsemi::heights::{canonical_height, compute_iterate_bound, min_positive_height, DEFAULT_ITERATIONS};
use quadsemi::portraits::preper_set;
use quadsemi::{Integer, QuadraticMap};

/// Integers just outside the search box never undercut the in-box minimum.
#[test]
fn box_minimum_holds_outside_the_box() {
    for c in -60i64..=60 {
        if c == 0 || c == -1 {
            continue;
        }
        let phi = QuadraticMap::new(c);
        let min = min_positive_height(&phi, &Integer::from(0), DEFAULT_ITERATIONS).unwrap();
        let start = c.abs() + 2;
        for a in (start..start + 300).flat_map(|a| [a, -a]) {
            let h = canonical_height(&phi, &Integer::from(a), DEFAULT_ITERATIONS);
            assert!(h.lower() >= min.hmin, "c={c}, a={a}: {} < {}", h.lower(), min.hmin);
        }
    }
}

#[test]
fn escaping_integers_have_positive_lower_bounds() {
    for c in -40i64..=40 {
        if c == 0 || c == -1 {
            continue;
        }
        let preper = preper_set(&Integer::from(c));
        let phi = QuadraticMap::new(c);
        for a in -60i64..=60 {
            let h = canonical_height(&phi, &Integer::from(a), DEFAULT_ITERATIONS);
            if preper.contains(&Integer::from(a)) {
                assert!(h.lower() <= 0.0, "c={c}, a={a}");
            } else {
                assert!(h.lower() > 0.0, "c={c}, a={a}");
            }
        }
    }
}

#[test]
fn iterate_bound_is_well_formed() {
    for c in -150i64..=150 {
        if c == 0 || c == -1 {
            continue;
        }
        let b = compute_iterate_bound(&QuadraticMap::new(c), &Integer::from(0), DEFAULT_ITERATIONS).unwrap();
        assert!(b.hmin > 0.0 && b.b >= b.hmin, "c={c}");
        assert_eq!(b.n, (b.b / b.hmin).log2().ceil() as u32 + 2, "c={c}");
        assert!(b.n >= 2);
    }
}

#[test]
fn large_starting_points_stay_finite() {
    let phi = QuadraticMap::new(-7);
    let a = Integer::from(10).pow(200u32);
    let h = canonical_height(&phi, &a, 60);
    assert!((h.value - 200.0 * 10f64.ln()).abs() < 1e-9);
}
