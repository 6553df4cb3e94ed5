//! Invariants as property tests. Random inputs come either directly from
//! proptest strategies or from a proptest-chosen seed fed to the library's
//! generators (for structured inputs such as prescribed Jordan forms).

use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

use scinv::exact::{
    charpoly, exact_jordan, exact_mp_inverse, format_rational, parse_rational, rank, ratio,
    ExactJordanForm, RationalMatrix,
};
use scinv::float::{
    condition_number, mp_inverse, numerical_jordan, svd, ComplexMatrix, JordanOptions, Threshold,
};
use scinv::geninv::random::{self, seeded};
use scinv::geninv::{
    consistency_deviation, drazin_from_jordan, drazin_index_exact, penrose_check_exact,
    sc_inverse_exact, sc_inverse_from_jordan, sc_transport_deviation, uc_inverse, Transform,
};
use scinv::simlab::{read_csv, write_csv, SimRecord};

fn int_matrix(max_n: usize, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_n, 1..=max_n).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            RationalMatrix::from_i64_rows(&rows)
        })
    })
}

fn square_int_matrix(max_n: usize, bound: i64) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(n).map(<[i64]>::to_vec).collect();
            RationalMatrix::from_i64_rows(&rows)
        })
    })
}

fn complex_matrix(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n, 1..=max_n).prop_flat_map(|(r, c)| {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), r * c).prop_map(move |v| {
            ComplexMatrix::new(
                r,
                c,
                v.into_iter()
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn scale(m: &ComplexMatrix) -> f64 {
    m.max_abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_mp_satisfies_all_four_penrose_conditions(a in int_matrix(4, 5)) {
        let x = exact_mp_inverse(&a);
        prop_assert_eq!(&(&(&a * &x) * &a), &a);
        prop_assert_eq!(&(&(&x * &a) * &x), &x);
        let ax = &a * &x;
        let xa = &x * &a;
        prop_assert_eq!(&ax.transpose(), &ax);
        prop_assert_eq!(&xa.transpose(), &xa);
        prop_assert_eq!(rank(&x), rank(&a));
    }

    #[test]
    fn float_mp_matches_exact_mp(a in int_matrix(4, 5)) {
        let xe = ComplexMatrix::from_rational(&exact_mp_inverse(&a));
        let xf = mp_inverse(&ComplexMatrix::from_rational(&a), Threshold::Auto).unwrap();
        prop_assert!(xf.max_abs_diff(&xe) <= 1e-9 * scale(&xe), "{:e}", xf.max_abs_diff(&xe));
    }

    #[test]
    fn svd_reconstructs_with_orthonormal_factors(m in complex_matrix(5)) {
        let f = svd(&m).unwrap();
        prop_assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(f.sigma.iter().all(|&s| s >= 0.0));
        prop_assert!(f.reconstruct().max_abs_diff(&m) <= 1e-12 * scale(&m));
        for q in [&f.u, &f.v] {
            let g = &q.adjoint() * q;
            prop_assert!(g.max_abs_diff(&ComplexMatrix::identity(g.rows())) <= 1e-12);
        }
    }

    #[test]
    fn mp_is_unitarily_consistent(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = seeded(seed);
        let r = 1 + (seed as usize % n);
        let a = ComplexMatrix::from_rational(&random::rank_deficient(&mut rng, n, r, 4));
        let t = Transform::Unitary(random::unitary(&mut rng, n), random::unitary(&mut rng, n));
        let x = mp_inverse(&a, Threshold::Auto).unwrap();
        let dev = consistency_deviation(&a, &t, |m| mp_inverse(m, Threshold::Auto)).unwrap();
        prop_assert!(dev <= 1e-8 * scale(&x), "{dev:e}");
    }

    #[test]
    fn uc_is_diagonally_consistent(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = seeded(seed);
        let r = 1 + (seed as usize % n);
        let a = ComplexMatrix::from_rational(&random::rank_deficient(&mut rng, n, r, 4));
        let d = random::positive_diagonal(&mut rng, n, 1e2);
        let e = random::positive_diagonal(&mut rng, n, 1e2);
        let rhs = &(&e.inverse().unwrap() * &uc_inverse(&a).unwrap()) * &d.inverse().unwrap();
        let dev = consistency_deviation(&a, &Transform::Diagonal(d, e), uc_inverse).unwrap();
        prop_assert!(dev <= 1e-8 * scale(&rhs), "{dev:e}");
    }

    #[test]
    fn exact_jordan_reconstructs(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = seeded(seed);
        let (m, built) = random::rational_spectrum_matrix(&mut rng, n, 3);
        let jf = exact_jordan(&m).unwrap();
        prop_assert_eq!(&(&m * &jf.p), &(&jf.p * &jf.j_matrix()));
        prop_assert_eq!(jf.reconstruct(), m);
        let mut want = built.blocks.clone();
        want.sort_by(|a, b| a.eigenvalue.cmp(&b.eigenvalue).then(b.size.cmp(&a.size)));
        prop_assert_eq!(jf.blocks, want);
    }

    #[test]
    fn sc_exact_is_reflexive_and_rank_preserving(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = seeded(seed);
        let (m, _) = random::rational_spectrum_matrix(&mut rng, n, 3);
        let x = sc_inverse_exact(&m).unwrap();
        let rep = penrose_check_exact(&m, &x).unwrap();
        prop_assert!(rep.residual_axiom1.is_zero() && rep.residual_axiom2.is_zero());
        prop_assert_eq!(rep.rank_x, rep.rank_a);
    }

    #[test]
    fn sc_exact_is_similarity_consistent_for_a_carried_basis(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = seeded(seed);
        let (_, jf) = random::rational_spectrum_matrix(&mut rng, n, 3);
        let s = random::nonsingular_int_matrix(&mut rng, n, 5);
        prop_assert!(sc_transport_deviation(&jf, &s).unwrap().is_zero());
    }

    #[test]
    fn sc_any_basis_is_a_reflexive_inverse(seed in any::<u64>(), n in 1usize..=5, c in 1i64..=4) {
        // another valid transform P·C, with C = c·I + N on each block
        // (upper-triangular Toeplitz, so it commutes with J)
        let mut rng = seeded(seed);
        let (m, jf) = random::rational_spectrum_matrix(&mut rng, n, 3);
        let mut cm = RationalMatrix::identity(n).scale(&ratio(c, 1));
        let mut at = 0;
        for b in &jf.blocks {
            for k in 1..b.size {
                cm[(at + k - 1, at + k)] = ratio(1, 1);
            }
            at += b.size;
        }
        let other = ExactJordanForm::from_parts(&m, &jf.p * &cm, jf.blocks.clone()).unwrap();
        for x in [sc_inverse_from_jordan(&jf), sc_inverse_from_jordan(&other)] {
            prop_assert_eq!(&(&(&m * &x) * &m), &m);
            prop_assert_eq!(&(&(&x * &m) * &x), &x);
            prop_assert_eq!(rank(&x), rank(&m));
        }
    }

    #[test]
    fn drazin_laws(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = seeded(seed);
        let (m, jf) = random::rational_spectrum_matrix(&mut rng, n, 3);
        let ad = drazin_from_jordan(&jf);
        prop_assert_eq!(&(&m * &ad), &(&ad * &m));
        prop_assert_eq!(&(&(&ad * &m) * &ad), &ad);
        let k = drazin_index_exact(&m).unwrap() as u32;
        prop_assert_eq!(&m.pow(k + 1).unwrap() * &ad, m.pow(k).unwrap());
    }

    #[test]
    fn numerical_jordan_finds_the_exact_structure(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = seeded(seed);
        let (m, jf) = random::rational_spectrum_matrix(&mut rng, n, 3);
        let cp = condition_number(&ComplexMatrix::from_rational(&jf.p)).unwrap();
        prop_assume!(cp < 1e6);
        let nj = numerical_jordan(&ComplexMatrix::from_rational(&m), &JordanOptions::default()).unwrap();
        let mut got: Vec<(i64, usize)> = nj.blocks.iter().map(|b| (b.eigenvalue.re.round() as i64, b.size)).collect();
        let mut want: Vec<(i64, usize)> = jf.blocks.iter()
            .map(|b| (b.eigenvalue.numer().try_into().unwrap(), b.size))
            .collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn rational_text_round_trips(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn csv_round_trips(rows in prop::collection::vec((0.0..7.0f64, prop::num::f64::POSITIVE | prop::num::f64::ZERO, any::<bool>()), 1..40)) {
        let records: Vec<SimRecord> = rows
            .into_iter()
            .map(|(t, err, chain_failed)| SimRecord { t, err, chain_failed, inverted_rank: 0 })
            .collect();
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), records);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Cayley-Hamilton and the determinant as an independent check on the
    // characteristic polynomial
    #[test]
    fn charpoly_annihilates_its_matrix(m in square_int_matrix(5, 6)) {
        let p = charpoly(&m).unwrap();
        let n = m.rows();
        let mut acc = RationalMatrix::zeros(n, n);
        for c in p.coefficients() {
            acc = (&acc * &m).try_add(&RationalMatrix::identity(n).scale(c)).unwrap();
        }
        prop_assert!(acc.is_zero());
        let det = m.det().unwrap();
        let c0 = p.coefficients().last().unwrap().clone();
        prop_assert_eq!(if n % 2 == 0 { c0 } else { -c0 }, det);
    }
}
