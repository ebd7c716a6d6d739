mod common;

use common::{prime, Ctx, Elt};
use proptest::prelude::*;
use selfsim::lie::LieElement;
use selfsim::linalg::kernel_vectors;
use selfsim::structure::build_psi_twisted;
use selfsim::truncalg::{Derivation, Monomial, TruncPoly, TruncPolyAlgebra};
use selfsim::{FieldSpec, Scalar, SparseVec, Subspace};

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(prime(2)), Just(prime(3)), Just(prime(5)), Just(prime(7)), Just(FieldSpec::rational())]
}

fn scalar(field: FieldSpec) -> impl Strategy<Value = Scalar> {
    (-20i64..20, 1i64..7).prop_filter_map("denominator vanishes", move |(n, d)| field.from_ratio(n, d).ok())
}

fn sparse(field: FieldSpec, dim: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec(-3i64..4, dim)
        .prop_map(move |c| SparseVec::from_entries(c.into_iter().enumerate().map(|(i, x)| (i, field.from_i64(x)))))
}

fn element(field: FieldSpec, dim: usize) -> impl Strategy<Value = LieElement> {
    sparse(field, dim).prop_map(LieElement::from_vec)
}

fn alphabet() -> TruncPolyAlgebra {
    TruncPolyAlgebra::new(prime(5), 2, None).unwrap()
}

fn poly(x: &TruncPolyAlgebra) -> impl Strategy<Value = TruncPoly> {
    let x = x.clone();
    let dim = x.dim();
    prop::collection::vec(-2i64..3, dim).prop_map(move |c| {
        let mut out = TruncPoly::zero();
        for (m, k) in x.basis().iter().zip(c) {
            out.add_term(m.clone(), &x.field().from_i64(k));
        }
        out
    })
}

proptest! {
    #[test]
    fn field_axioms((field, a, b, c) in field_strategy().prop_flat_map(|f| (Just(f), scalar(f), scalar(f), scalar(f)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, field.zero());
        match a.inv() {
            Some(inv) => prop_assert_eq!(&a * &inv, field.one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn scalar_arithmetic(field in field_strategy(), n in -50i64..50, m in -50i64..50) {
        prop_assert_eq!(&field.from_i64(n) + &field.from_i64(m), field.from_i64(n + m));
        prop_assert_eq!(&field.from_i64(n) * &field.from_i64(m), field.from_i64(n * m));
        prop_assert_eq!(field.parse(&field.from_i64(n).to_string()).unwrap(), field.from_i64(n));
    }

    #[test]
    fn kernel_matches_dense_oracle(cols in prop::collection::vec(prop::collection::vec(0i64..5, 4), 1..7)) {
        let f5 = prime(5);
        let ctx = Ctx::of(f5);
        let columns: Vec<SparseVec> = cols
            .iter()
            .map(|c| SparseVec::from_entries(c.iter().enumerate().map(|(i, &x)| (i, f5.from_i64(x)))))
            .collect();
        let lib = kernel_vectors(f5, &columns);
        let dense: Vec<Vec<Elt>> = columns.iter().map(|c| ctx.dense(c, 4)).collect();
        let oracle = ctx.kernel(&dense);
        prop_assert_eq!(lib.len(), oracle.len());
        let lib_space = Subspace::span(f5, columns.len(), &lib);
        prop_assert!(ctx.inside(&oracle, &lib_space));
        let back: Vec<SparseVec> = oracle.iter().map(|v| ctx.to_sparse(f5, v)).collect();
        prop_assert_eq!(Subspace::span(f5, columns.len(), &back), lib_space);
    }

    #[test]
    fn subspace_dimension_formula(
        u in prop::collection::vec(sparse(prime(3), 5), 0..4),
        v in prop::collection::vec(sparse(prime(3), 5), 0..4),
    ) {
        let f3 = prime(3);
        let a = Subspace::span(f3, 5, &u);
        let b = Subspace::span(f3, 5, &v);
        let sum = a.sum(&b);
        let meet = a.intersection(&b);
        prop_assert_eq!(a.dim() + b.dim(), sum.dim() + meet.dim());
        prop_assert!(meet.is_subspace_of(&a) && meet.is_subspace_of(&b));
        for x in &u {
            prop_assert!(a.contains(x));
            prop_assert!(a.reduce(x).is_zero());
        }
    }

    #[test]
    fn leibniz_rule((u, v, d1, d2) in (poly(&alphabet()), poly(&alphabet()), poly(&alphabet()), poly(&alphabet()))) {
        let x = alphabet();
        let d = Derivation::from_images(vec![d1, d2]);
        let lhs = x.apply_derivation(&d, &x.mul(&u, &v).unwrap()).unwrap();
        let rhs = x
            .mul(&x.apply_derivation(&d, &u).unwrap(), &v)
            .unwrap()
            .plus(&x.mul(&u, &x.apply_derivation(&d, &v).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_preserves_brackets(a in element(prime(5), 3), b in element(prime(5), 3)) {
        let psi = build_psi_twisted(1, prime(5)).unwrap();
        let l = psi.algebra();
        let w = psi.wreath();
        let lhs = psi.psi(&l.bracket(&a, &b).unwrap());
        let rhs = w.bracket(&psi.psi(&a), &psi.psi(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(w.unflatten(&w.flatten(&psi.psi(&a))), psi.psi(&a));
    }

    #[test]
    fn wreath_bracket_is_alternating_and_jacobi(
        u in sparse(prime(3), 12),
        v in sparse(prime(3), 12),
        t in sparse(prime(3), 12),
    ) {
        let psi = build_psi_twisted(1, prime(3)).unwrap();
        let w = psi.wreath();
        prop_assert_eq!(w.flat_dim(), 12);
        let (u, v, t) = (w.unflatten(&u), w.unflatten(&v), w.unflatten(&t));
        prop_assert!(w.bracket(&u, &u).unwrap().is_zero());
        let jacobi = w
            .bracket(&u, &w.bracket(&v, &t).unwrap())
            .unwrap()
            .plus(&w.bracket(&v, &w.bracket(&t, &u).unwrap()).unwrap())
            .plus(&w.bracket(&t, &w.bracket(&u, &v).unwrap()).unwrap());
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn level_action_is_a_representation(a in element(prime(3), 3), b in element(prime(3), 3)) {
        let psi = build_psi_twisted(1, prime(3)).unwrap();
        let l = psi.algebra();
        let engine = psi.engine();
        for level in 1..=2 {
            let ma = selfsim::wreath::level_operator_matrix(&engine, &a, level).unwrap();
            let mb = selfsim::wreath::level_operator_matrix(&engine, &b, level).unwrap();
            let mab = selfsim::wreath::level_operator_matrix(&engine, &l.bracket(&a, &b).unwrap(), level).unwrap();
            prop_assert_eq!(ma.commutator(&mb), mab);
        }
    }

    #[test]
    fn element_format_parses_back(a in element(prime(7), 8)) {
        let psi = build_psi_twisted(2, prime(7)).unwrap();
        let l = psi.algebra();
        prop_assert_eq!(l.parse_element(&l.format(&a)).unwrap(), a);
    }

    #[test]
    fn monomial_keys_round_trip(exps in prop::collection::vec(0u32..9, 1..4)) {
        let m = Monomial(exps);
        prop_assert_eq!(Monomial::from_key(&m.key()).unwrap(), m);
    }
}
