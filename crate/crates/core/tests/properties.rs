use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use logkfl::abelian::{smith_normal_form, FgAbGroup, IntMatrix};
use logkfl::calculators::{zhat_cohomology, ZhatInput};
use logkfl::coefficients::{frobenius_kernel_cokernel, SymbolicModule, ZhatModule};
use logkfl::cohomology::{cohomology_bruteforce, FiniteAbelianGroup};

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20i64..=20, c), r))
}

fn small_group() -> impl Strategy<Value = FgAbGroup> {
    (0usize..=2, prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6, 8, 9, 12]), 0..=2)).prop_map(
        |(rank, tors)| {
            let mut orders: Vec<BigInt> = vec![BigInt::zero(); rank];
            orders.extend(tors.into_iter().map(BigInt::from));
            FgAbGroup::from_cyclic_orders(&orders)
        },
    )
}

/// Cofactor expansion along the first row.
fn det(a: &[Vec<BigInt>]) -> BigInt {
    match a.len() {
        0 => BigInt::from(1),
        1 => a[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> =
                    a[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
                let s = if j % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                s * &a[0][j] * det(&minor)
            })
            .sum(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_is_a_factorization(a in matrix()) {
        let m = IntMatrix::from_rows(&a).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        let d = s.nonzero_diagonal();
        prop_assert!(d.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        prop_assert!(d.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn square_determinant_is_diagonal_product(n in 1usize..=4, seed in prop::collection::vec(-9i64..=9, 16)) {
        let a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(seed[i * 4 + j])).collect()).collect();
        let s = smith_normal_form(&IntMatrix::from_rows(&a).unwrap());
        let prod: BigInt = (0..n).map(|i| s.d.get(i, i).clone()).product();
        prop_assert_eq!(prod, det(&a).abs());
    }

    #[test]
    fn tensor_and_hom_are_additive(g in small_group(), h in small_group(), k in small_group()) {
        let gh = g.direct_sum(&h);
        prop_assert_eq!(gh.tensor(&k), g.tensor(&k).direct_sum(&h.tensor(&k)));
        prop_assert_eq!(gh.hom(&k), g.hom(&k).direct_sum(&h.hom(&k)));
        prop_assert_eq!(k.hom(&gh), k.hom(&g).direct_sum(&k.hom(&h)));
    }

    #[test]
    fn tensor_with_cyclic_is_reduction(g in small_group(), n in 2u64..=12) {
        prop_assert_eq!(g.tensor(&FgAbGroup::cyclic(n)), g.mod_n(&BigInt::from(n)));
        prop_assert_eq!(FgAbGroup::cyclic(n).hom(&g), g.n_torsion(&BigInt::from(n)));
    }

    #[test]
    fn group_order_kills_cohomology(
        factors in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4]), 1..=2),
        coeff in prop::sample::select(vec!["Z", "Z/2", "Z/3", "Z/4", "Z+Z/2"]),
        i in 1usize..=3,
    ) {
        let g = FiniteAbelianGroup::new(factors).unwrap();
        let h = cohomology_bruteforce(&g, &coeff.parse().unwrap(), i).unwrap();
        let e = h.exponent().expect("finite in positive degree");
        prop_assert!(BigInt::from(g.order()).is_multiple_of(&e));
    }

    #[test]
    fn frobenius_on_cyclic_groups(n in 2u64..=50, w in -2i64..=2, q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9])) {
        let Ok(zm) = ZhatModule::trivial(FgAbGroup::cyclic(n), w, q) else { return Ok(()) };
        let Ok((h0, h1)) = frobenius_kernel_cokernel(&zm) else {
            prop_assert!(n.gcd(&q) > 1 && w < 0);
            return Ok(());
        };
        // Frobenius multiplies by c = q^w in (Z/n)^×
        let qinv = (1..n).find(|x| (x * (q % n)) % n == 1);
        let base = if w >= 0 { q % n } else { qinv.unwrap() };
        let c = (0..w.unsigned_abs()).fold(1 % n, |acc, _| acc * base % n);
        let fixed = (0..n).filter(|&x| c * x % n == x).count() as u64;
        let mut image: Vec<u64> = (0..n).map(|x| (c * x + n - x % n) % n).collect();
        image.sort_unstable();
        image.dedup();
        prop_assert_eq!(h0.order(), Some(BigInt::from(fixed)));
        prop_assert_eq!(h1.order(), Some(BigInt::from(n / image.len() as u64)));
    }

    #[test]
    fn zhat_orders_match(n in 2u64..=40, w in -2i64..=2, q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9])) {
        if let Ok(g) = zhat_cohomology(&ZhatInput::Symbolic(SymbolicModule::cyclic(n, w)), q) {
            prop_assert_eq!(g.terms[0].order(), g.terms[1].order());
            prop_assert!(g.terms[2..].iter().all(|t| t.is_zero()));
        }
    }
}
