//! Randomized structural invariants of the counting, exponential-sum,
//! arc-classification, and local-density machinery.

use num_complex::Complex64;
use proptest::prelude::*;
use vinogradov::count::{count_naive, count_solutions, verify_shift_identity};
use vinogradov::domain::{
    congruence_soluble, moment_of, Budget, MomentEncoding, MomentVector, Offset, Params,
};
use vinogradov::expsum::{shifted_sum_g, weyl_sum_f, PhasePoint};
use vinogradov::local::series_term;

fn offset_strategy(limit: i64) -> impl Strategy<Value = Offset> {
    (-limit..=limit, -limit..=limit, -limit..=limit).prop_map(|(a, b, c)| Offset::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Packing a moment vector and unpacking the key is the identity.
    #[test]
    fn moment_key_round_trip(
        s in 1u32..=6,
        x in 1u64..=40,
        seed in any::<u64>(),
    ) {
        let enc = MomentEncoding::new(s, x).unwrap();
        // A moment realized by an actual tuple is always in range.
        let mut state = seed;
        let xs: Vec<u64> = (0..s)
            .map(|_| {
                state = vinogradov::arcs::splitmix64(state);
                1 + state % x
            })
            .collect();
        let m = moment_of(&xs).unwrap();
        let key = enc.pack(m).expect("realized moment fits the key space");
        prop_assert_eq!(enc.unpack(key), m);
    }

    /// The moment map is symmetric in its arguments.
    #[test]
    fn moments_ignore_order(
        mut xs in proptest::collection::vec(1u64..=1000, 1..=8),
        rotation in 0usize..8,
    ) {
        let before = moment_of(&xs).unwrap();
        let r = rotation % xs.len();
        xs.rotate_left(r);
        xs.reverse();
        prop_assert_eq!(moment_of(&xs).unwrap(), before);
    }

    /// Translating a key through `shifted_key` matches shifting the
    /// moment componentwise.
    #[test]
    fn shifted_key_matches_componentwise_shift(
        s in 1u32..=4,
        x in 1u64..=20,
        seed in any::<u64>(),
        h in offset_strategy(30),
    ) {
        let enc = MomentEncoding::new(s, x).unwrap();
        let mut state = seed;
        let xs: Vec<u64> = (0..s)
            .map(|_| {
                state = vinogradov::arcs::splitmix64(state);
                1 + state % x
            })
            .collect();
        let m = moment_of(&xs).unwrap();
        let shifted = enc.shifted_key(m, &h);
        let expect = {
            let t1 = m.m1 as i128 + h.h1 as i128;
            let t2 = m.m2 as i128 + h.h2 as i128;
            let t3 = m.m3 as i128 + h.h3 as i128;
            if t1 >= 0 && t2 >= 0 && t3 >= 0 {
                enc.pack(MomentVector::new(t1 as u64, t2 as u64, t3 as u64))
            } else {
                None
            }
        };
        prop_assert_eq!(shifted, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Swapping the two sides of the system negates the offset, so the
    /// count is symmetric under `h -> -h`.
    #[test]
    fn count_is_even_in_the_offset(
        s in 1u32..=2,
        x in 1u64..=6,
        h in offset_strategy(6),
    ) {
        let budget = Budget::default();
        let neg = Offset::new(-h.h1, -h.h2, -h.h3);
        let a = count_solutions(Params::new(s, x).unwrap(), &h, &budget).unwrap();
        let b = count_solutions(Params::new(s, x).unwrap(), &neg, &budget).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    /// The table-based count agrees with direct enumeration.
    #[test]
    fn table_count_matches_enumeration(
        s in 1u32..=2,
        x in 1u64..=5,
        h in offset_strategy(5),
    ) {
        let budget = Budget::default();
        let fast = count_solutions(Params::new(s, x).unwrap(), &h, &budget).unwrap();
        let slow = count_naive(Params::new(s, x).unwrap(), &h, &budget).unwrap();
        prop_assert_eq!(fast.value, slow.value);
    }

    /// A nonzero count forces the parity/divisibility conditions; an
    /// offset failing them counts zero.
    #[test]
    fn insoluble_offsets_count_zero(
        s in 1u32..=3,
        x in 1u64..=6,
        h in offset_strategy(8),
    ) {
        let budget = Budget::default();
        let c = count_solutions(Params::new(s, x).unwrap(), &h, &budget).unwrap();
        if !congruence_soluble(&h) {
            prop_assert_eq!(c.value, 0);
        }
    }

    /// Substituting `x -> x + z`, `y -> y + z` is a bijection on
    /// solutions, matching the translated offset.
    #[test]
    fn shift_identity_holds(
        s in 1u32..=2,
        x in 1u64..=5,
        z_seed in any::<u64>(),
        h in offset_strategy(5),
    ) {
        let budget = Budget::default();
        let z = 1 + z_seed % x;
        prop_assert!(verify_shift_identity(Params::new(s, x).unwrap(), &h, z, &budget).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `f(-alpha) = conj f(alpha)` and integer translates leave the sum
    /// unchanged.
    #[test]
    fn weyl_sum_conjugation_and_periodicity(
        a1 in 0.0f64..1.0,
        a2 in 0.0f64..1.0,
        a3 in 0.0f64..1.0,
        x in 1u64..=300,
    ) {
        let alpha = PhasePoint::new(a1, a2, a3);
        let neg = PhasePoint::new(-a1, -a2, -a3);
        let shifted = PhasePoint::new(a1 + 2.0, a2 - 3.0, a3 + 1.0);
        let f = weyl_sum_f(&alpha, x);
        let fneg = weyl_sum_f(&neg, x);
        let fshift = weyl_sum_f(&shifted, x);
        // The comparison points differ from alpha by one rounding of the
        // negation/translation (about 2^-53), which the cubic phase
        // amplifies by roughly `2 pi sum x^3 ~ X^4`.
        let tol = (x as f64).powi(4) * 1e-14 + 1e-12;
        prop_assert!((f - fneg.conj()).norm() < tol, "conjugation: {f} vs {fneg}");
        prop_assert!((f - fshift).norm() < tol, "periodicity: {f} vs {fshift}");
        // Trivial bound |f| <= X.
        prop_assert!(f.norm() <= x as f64 + 1e-9);
    }

    /// The companion quadratic sum matches a direct floating-point
    /// evaluation for moderate data, and obeys the trivial bound.
    #[test]
    fn quadratic_companion_sum_matches_direct(
        a2 in 0.0f64..1.0,
        a3 in 0.0f64..1.0,
        theta in -2.0f64..2.0,
        x in 1u64..=200,
        h in offset_strategy(5),
    ) {
        let alpha = PhasePoint::new(0.37, a2, a3);
        let g = shifted_sum_g(&alpha, theta, x, &h);
        prop_assert!(g.norm() <= x as f64 + 1e-9);
        let mut direct = Complex64::new(0.0, 0.0);
        let c1 = theta + 2.0 * h.h1 as f64 * a2 + 3.0 * h.h2 as f64 * a3;
        let c2 = 3.0 * h.h1 as f64 * a3;
        for y in 1..=x {
            let t = c1 * y as f64 + c2 * (y * y) as f64;
            let t = t - t.floor();
            direct += Complex64::new(
                (std::f64::consts::TAU * t).cos(),
                (std::f64::consts::TAU * t).sin(),
            );
        }
        // The direct sum loses accuracy through the naive phase
        // reduction; the bound reflects that, not the library's error.
        prop_assert!((g - direct).norm() < 1e-6 * (x * x) as f64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The continued-fraction arc classifier agrees with exhaustive
    /// search over all moduli whenever both apply.
    #[test]
    fn arc_classifier_matches_exhaustive(
        alpha in 0.0f64..1.0,
        q_cutoff in 2.0f64..20.0,
        scale in 10.0f64..50.0,
    ) {
        let x = q_cutoff * scale; // keeps 2 Q^3 < X^3 comfortably
        let fast = vinogradov::arcs::classify_one_dim(alpha, q_cutoff, x);
        let slow = vinogradov::arcs::classify_one_dim_exhaustive(alpha, q_cutoff, x);
        prop_assert_eq!(fast, slow);
    }

    /// Arc labels are periodic in alpha and symmetric under reflection
    /// (the arc at `a/q` maps to the arc at `(q - a)/q`).
    #[test]
    fn arc_labels_respect_circle_symmetries(
        alpha in 0.0001f64..0.9999,
        q_cutoff in 2.0f64..15.0,
    ) {
        use vinogradov::arcs::OneDimLabel;
        let x = 40.0 * q_cutoff;
        let base = vinogradov::arcs::classify_one_dim(alpha, q_cutoff, x);
        let wrapped = vinogradov::arcs::classify_one_dim(alpha + 1.0, q_cutoff, x);
        prop_assert_eq!(base, wrapped);
        let mirrored = vinogradov::arcs::classify_one_dim(1.0 - alpha, q_cutoff, x);
        match (base, mirrored) {
            (OneDimLabel::Major { q: qa, a: aa }, OneDimLabel::Major { q: qb, a: ab }) => {
                prop_assert_eq!(qa, qb);
                prop_assert_eq!(
                    (aa + ab) % qa,
                    0,
                    "centers a = {}, a' = {} for q = {}",
                    aa,
                    ab,
                    qa
                );
            }
            (OneDimLabel::Minor, OneDimLabel::Minor) => {}
            other => prop_assert!(false, "asymmetric labels {other:?}"),
        }
    }

    /// Every point of the unit cube lands in exactly one region of the
    /// four-way dissection (totality is by construction; the point is
    /// that classification never panics and is reflection-stable).
    #[test]
    fn dissection_is_total_and_reflection_stable(
        a1 in 0.0f64..1.0,
        a2 in 0.0f64..1.0,
        a3 in 0.0f64..1.0,
    ) {
        let x = 10_000u64;
        let w = vinogradov::arcs::partition_label(&[a1, a2, a3], x);
        let m = vinogradov::arcs::partition_label(
            &[(1.0 - a1) % 1.0, (1.0 - a2) % 1.0, (1.0 - a3) % 1.0],
            x,
        );
        prop_assert_eq!(w, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The normalized complete-sum factor is multiplicative across
    /// coprime moduli.
    #[test]
    fn series_term_multiplicative_on_coprime_pairs(
        pair in prop::sample::select(vec![
            (2u64, 3u64), (2, 5), (3, 4), (4, 9), (5, 6), (3, 7),
        ]),
        h in offset_strategy(10),
    ) {
        let budget = Budget::default();
        let (q1, q2) = pair;
        let a = series_term(q1, 6, &h, &budget).unwrap();
        let b = series_term(q2, 6, &h, &budget).unwrap();
        let ab = series_term(q1 * q2, 6, &h, &budget).unwrap();
        let scale = 1.0f64.max(a.abs() * b.abs());
        prop_assert!(
            (ab - a * b).abs() < 1e-8 * scale,
            "A({q1}) A({q2}) = {} vs A({}) = {ab}", a * b, q1 * q2
        );
    }
}
