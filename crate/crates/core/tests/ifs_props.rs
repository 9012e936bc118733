use overlapdim_core::ifs::{cylinder_interval, project_prefix, sample_measure};
use overlapdim_core::{IfsParams, ProbVector, Word};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = IfsParams> {
    (0.001f64..0.111, 0.001f64..0.111, 0.001f64..0.111)
        .prop_map(|(a, b, c)| IfsParams::new(a, b, c).unwrap())
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1u8..=3, 0..max).prop_map(|v| Word::new(&v).unwrap())
}

proptest! {
    #[test]
    fn extensions_nest(p in params(), u in word(8), v in word(8)) {
        let outer = cylinder_interval(&p, &u);
        let inner = cylinder_interval(&p, &u.concat(&v));
        prop_assert!(inner.is_subset_of(&outer), "{inner:?} not in {outer:?}");
    }

    #[test]
    fn length_shrinks_geometrically(p in params(), w in word(12)) {
        let h = cylinder_interval(&p, &w);
        let bound = p.max_ratio().powi(w.len() as i32);
        prop_assert!(h.width() <= bound * (1.0 + 1e-12) + 4.0 * f64::EPSILON);
    }

    #[test]
    fn projection_lies_in_hull(p in params(), w in word(14)) {
        prop_assert!(cylinder_interval(&p, &w).contains(project_prefix(&p, &w)));
    }

    #[test]
    fn commutation_exact(p in params(), w in word(10)) {
        let a = Word::new(&[1, 2]).unwrap().concat(&w);
        let b = Word::new(&[2, 1]).unwrap().concat(&w);
        prop_assert_eq!(cylinder_interval(&p, &a), cylinder_interval(&p, &b));
    }

    #[test]
    fn samples_live_in_unit_interval(p in params(), seed in any::<u64>()) {
        let xs = sample_measure(&p, &ProbVector::uniform(), 12, 64, seed).unwrap();
        prop_assert!(xs.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }
}

#[test]
fn sample_mean_matches_closed_form() {
    // E[X] = p3 (1 - c) / (1 - p1 a - p2 b - p3 c)
    let p = IfsParams::new(0.03, 0.05, 0.07).unwrap();
    let xs = sample_measure(&p, &ProbVector::uniform(), 20, 200_000, 17).unwrap();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let exact = 0.326_315_789_473_684_2;
    assert!((mean - exact).abs() < 4.0 * sd / n.sqrt(), "{mean} vs {exact}");
}
