use proptest::prelude::*;

use zetalab::bockstein::{
    bockstein_char, stable_bockstein_char, stable_bockstein_char_complex, stabilization_index, uk_valuation,
    EndoComplex, EndoModule,
};
use zetalab::padic::{Matrix, PAdicContext, Presentation};

/// Faddeev–LeVerrier over i128: coefficients of det(tI - A), ascending.
fn charpoly_oracle(a: &[Vec<i64>]) -> Vec<i128> {
    let n = a.len();
    let a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mul = |x: &Vec<Vec<i128>>, y: &Vec<Vec<i128>>| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect())
            .collect()
    };
    let mut c = vec![0i128; n + 1];
    c[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        m = next;
        let am = mul(&a, &m);
        let trace: i128 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(trace % k as i128, 0);
        c[n - k] = -trace / k as i128;
    }
    c
}

fn v_p(mut x: i128, p: i128) -> i64 {
    assert_ne!(x, 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `-v_p` of the trailing nonzero coefficient of the characteristic polynomial.
fn eigen_oracle(a: &[Vec<i64>], p: u64) -> i64 {
    let c = charpoly_oracle(a);
    let trailing = c.into_iter().find(|&x| x != 0).expect("monic");
    -v_p(trailing, p as i128)
}

fn square_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
}

fn sparse_square_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    // Mostly zeros, so that nilpotent and rank-deficient cases show up.
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(
            prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => -9i64..=9], n),
            n,
        )
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5)]
}

fn endo(rows: &[Vec<i64>], c: &PAdicContext) -> EndoModule {
    EndoModule::free(Matrix::from_i64(rows), c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stable_char_is_eigenvalue_valuation(a in square_matrix(), p in prime()) {
        let c = PAdicContext::prime_field(p).unwrap();
        let em = endo(&a, &c);
        let expected = eigen_oracle(&a, p);
        prop_assert_eq!(stable_bockstein_char(&em, &c).value, expected);
        prop_assert_eq!(uk_valuation(&em, &c), expected);
    }

    #[test]
    fn stable_char_on_degenerate_matrices(a in sparse_square_matrix(), p in prime()) {
        let c = PAdicContext::prime_field(p).unwrap();
        let em = endo(&a, &c);
        prop_assert_eq!(stable_bockstein_char(&em, &c).value, eigen_oracle(&a, p));
    }

    #[test]
    fn scaling_identity(a in sparse_square_matrix(), p in prime()) {
        let c = PAdicContext::prime_field(p).unwrap();
        let em = endo(&a, &c);
        let k = stabilization_index(&em, &c);
        for r in k..k + 3 {
            let lo = bockstein_char(&em.pow(r), &c).expect("defined past the index");
            let hi = bockstein_char(&em.pow(r + 1), &c).expect("defined past the index");
            prop_assert_eq!((r as i64 + 1) * lo, r as i64 * hi);
        }
    }

    #[test]
    fn powers_scale_stable_char(a in square_matrix(), p in prime(), k in 1usize..=3) {
        let c = PAdicContext::prime_field(p).unwrap();
        let em = endo(&a, &c);
        let base = stable_bockstein_char(&em, &c).value;
        prop_assert_eq!(stable_bockstein_char(&em.pow(k), &c).value, k as i64 * base);
    }

    #[test]
    fn direct_sums_add(a in sparse_square_matrix(), b in sparse_square_matrix(), p in prime()) {
        let c = PAdicContext::prime_field(p).unwrap();
        let ma = Matrix::from_i64(&a);
        let mb = Matrix::from_i64(&b);
        let sum = EndoModule::free(ma.block_diag(&mb), &c).unwrap();
        let lhs = stable_bockstein_char(&sum, &c).value;
        let rhs = stable_bockstein_char(&endo(&a, &c), &c).value + stable_bockstein_char(&endo(&b, &c), &c).value;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_flips_sign(a in square_matrix(), p in prime(), d in -3i64..=3) {
        let c = PAdicContext::prime_field(p).unwrap();
        let em = endo(&a, &c);
        let placed = stable_bockstein_char_complex(&EndoComplex::concentrated(&em, d), &c).value;
        let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
        prop_assert_eq!(placed, sign * stable_bockstein_char(&em, &c).value);
    }
}

#[test]
fn multiplication_by_p() {
    for p in [2u64, 3, 5, 7] {
        let c = PAdicContext::prime_field(p).unwrap();
        let em = endo(&[vec![p as i64]], &c);
        assert_eq!(bockstein_char(&em, &c), Some(-1));
        assert_eq!(stable_bockstein_char(&em, &c).value, -1);
    }
}

#[test]
fn extension_with_nilpotent_middle() {
    let c = PAdicContext::prime_field(3).unwrap();
    let outer = endo(&[vec![0]], &c);
    let middle = endo(&[vec![0, 1], vec![0, 0]], &c);
    assert_eq!(bockstein_char(&outer, &c), Some(0));
    assert_eq!(bockstein_char(&middle, &c), None);
    let stable = |em: &EndoModule| stable_bockstein_char(em, &c).value;
    assert_eq!(stable(&middle), stable(&outer) + stable(&outer));
    assert_eq!(stable(&middle), 0);
}

#[test]
fn complex_with_torsion_cohomology() {
    // Z_p --(p 0)--> Z_p^2 with θ = diag(p, p) upstairs and p downstairs.
    let c = PAdicContext::prime_field(5).unwrap();
    let ec = EndoComplex::new(
        -1,
        vec![Presentation::free(1), Presentation::free(2)],
        vec![Matrix::from_i64(&[vec![5], vec![0]])],
        vec![Matrix::from_i64(&[vec![5]]), Matrix::from_i64(&[vec![5, 0], vec![0, 5]])],
        &c,
    )
    .unwrap();
    // H^{-1} = 0, H^0 = Z/5 + Z_5 with θ = 5: stable char of Z_5 part is -1.
    assert_eq!(stable_bockstein_char_complex(&ec, &c).value, -1);
}
