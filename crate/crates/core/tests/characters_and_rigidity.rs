use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prymcoh::abelian_group::FiniteAbelianGroup;
use prymcoh::algebra::{basis, graded_dimension, AlgebraSpec, Variant};
use prymcoh::linalg::Matrix;
use prymcoh::par::Execution;
use prymcoh::partitions::Permutation;
use prymcoh::rigidity::{
    adjoint_matrix, commutant_sp, fixtures, random_commutant_group_element, random_symplectic, sp_dimension, standard_basis,
    tensor_square_embedding, SymplecticSpace,
};
use prymcoh::symmetry::{cycle_types, decompose, fixed_points, permutation_character, sr_character_table, CycleType};

#[test]
fn characters_are_class_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in 1..=5 {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let spec = AlgebraSpec::concrete(Variant::LevelPrime, r, g.clone());
        let n = 2 * (r as u64 - 1).max(1);
        let b = basis(&spec, n).unwrap();
        let perms = Permutation::all(r);
        for c in cycle_types(r) {
            let class: Vec<&Permutation> = perms.iter().filter(|p| p.cycle_type() == c.parts()).collect();
            let want = fixed_points(&b, &c.representative(), &g).unwrap();
            for _ in 0..50 {
                let s = class.choose(&mut rng).unwrap();
                assert_eq!(fixed_points(&b, s, &g).unwrap(), want, "r={r} class {c}");
            }
        }
    }
}

#[test]
fn identity_value_and_decompositions() {
    for variant in [Variant::LevelPrime, Variant::LevelFull] {
        for r in 1..=4 {
            for order in 1..=3 {
                let g = FiniteAbelianGroup::cyclic(order).unwrap();
                let spec = AlgebraSpec::concrete(variant, r, g);
                for n in (0..=8).step_by(2) {
                    let chi = permutation_character(&spec, n, Execution::Parallel).unwrap();
                    assert_eq!(chi.degree(), &graded_dimension(&spec, n).eval_u64(order));
                    let d = decompose(&chi).unwrap();
                    assert!(d.iter().all(|(_, m)| m >= &BigInt::zero()));
                }
            }
        }
    }
}

#[test]
fn swap_trace_counts_two_torsion() {
    let literals = ["1", "Z2", "Z3", "Z4", "Z2xZ2", "Z8", "Z2xZ4", "Z2^3", "Z16", "Z4xZ4", "Z2^4", "Z2^6", "Z64", "Z2xZ2xZ4", "Z3xZ9", "Z7^2"];
    for lit in literals {
        let g: FiniteAbelianGroup = lit.parse().unwrap();
        let spec = AlgebraSpec::concrete(Variant::LevelPrime, 2, g.clone());
        let chi = permutation_character(&spec, 2, Execution::Sequential).unwrap();
        let swap = CycleType::new(vec![2]).unwrap();
        assert_eq!(chi.value(&swap).unwrap(), &g.torsion_count(2).unwrap(), "{lit}");
    }
}

#[test]
fn character_table_orthogonality() {
    for r in 0..=8 {
        let table = sr_character_table(r).unwrap();
        let order: BigInt = (1..=r).map(BigInt::from).product();
        for (i, (_, a)) in table.iter().enumerate() {
            for (j, (_, b)) in table.iter().enumerate() {
                let want = if i == j { order.clone() } else { BigInt::zero() };
                assert_eq!(a.scaled_inner(b), want);
            }
        }
        let classes = cycle_types(r);
        for (x, cx) in classes.iter().enumerate() {
            for (y, _) in classes.iter().enumerate() {
                let s: BigInt = table.iter().map(|(_, c)| &c.values()[x] * &c.values()[y]).sum();
                let want = if x == y { cx.centralizer_order() } else { BigInt::zero() };
                assert_eq!(s, want);
            }
        }
    }
}

#[test]
fn commutant_bounded_by_sp() {
    let actions = [
        fixtures::trivial(1).unwrap(),
        fixtures::trivial(3).unwrap(),
        fixtures::minus_identity(2).unwrap(),
        fixtures::minus_identity(3).unwrap(),
        fixtures::plane_swap().unwrap(),
        fixtures::rotation(3, 2).unwrap(),
        fixtures::rotation(6, 3).unwrap(),
    ];
    for a in &actions {
        let h = a.space().h() as u64;
        let d = commutant_sp(a).dimension as u64;
        assert!(d <= sp_dimension(h));
        let scalar = a.generators().iter().all(|m| {
            let n = m.rows();
            *m == Matrix::identity(n) || *m == Matrix::identity(n).scale(&prymcoh::linalg::q(-1))
        });
        assert_eq!(d == sp_dimension(h), scalar);
    }
}

#[test]
fn commutant_dimension_is_basis_invariant() {
    let actions = [fixtures::plane_swap().unwrap(), fixtures::rotation(4, 2).unwrap(), fixtures::rotation(3, 3).unwrap()];
    for a in &actions {
        let d = commutant_sp(a).dimension;
        for seed in 0..20 {
            let p = random_symplectic(&a.space(), seed);
            assert!(a.space().is_symplectic(&p));
            assert_eq!(commutant_sp(&a.conjugate(&p).unwrap()).dimension, d);
        }
    }
}

#[test]
fn embedding_rank_is_sp_dimension() {
    for h in 1..=3usize {
        let s = SymplecticSpace::new(h).unwrap();
        let rep = commutant_sp(&fixtures::trivial(h).unwrap());
        let rows: Vec<_> = rep
            .basis
            .iter()
            .map(|x| tensor_square_embedding(&s, x, &standard_basis(&s)).unwrap())
            .collect();
        assert_eq!(Matrix::from_rows(rows).unwrap().rank() as u64, sp_dimension(h as u64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn embedding_is_equivariant(seed in any::<u64>(), which in 0usize..3) {
        let a = [fixtures::plane_swap(), fixtures::rotation(4, 2), fixtures::trivial(2)][which].clone().unwrap();
        let s = a.space();
        let rep = commutant_sp(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_commutant_group_element(&a, &rep, &mut rng);
        let x = prymcoh::rigidity::random_element(&rep, s.dim(), &mut rng);
        let conj = &(&f * &x) * &f.inverse().unwrap();
        let lhs = tensor_square_embedding(&s, &conj, &standard_basis(&s)).unwrap();
        let t = tensor_square_embedding(&s, &x, &standard_basis(&s)).unwrap();
        let rhs = &f.kron(&f) * &Matrix::column(&t);
        prop_assert_eq!(Matrix::column(&lhs), rhs);
    }

    #[test]
    fn adjoint_respects_products(seed in any::<u64>()) {
        let a = fixtures::plane_swap().unwrap();
        let rep = commutant_sp(&a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = random_commutant_group_element(&a, &rep, &mut rng);
        let f2 = random_commutant_group_element(&a, &rep, &mut rng);
        let ad = |f: &Matrix| adjoint_matrix(&a, &rep, f).unwrap();
        prop_assert_eq!(ad(&(&f1 * &f2)), &ad(&f1) * &ad(&f2));
    }
}
