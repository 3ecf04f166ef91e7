use proptest::prelude::*;
use supercohom_core::cochain::{differential_matrix, Cochain, CochainSpace};
use supercohom_core::cohomology::{abc_split, cohomology, is_coboundary, is_cocycle, weight_blocks, CohomologyOptions};
use supercohom_core::families::{
    degree_grading, model_filiform, model_nilpotent, solvable_model_filiform, solvable_model_nilpotent,
};
use supercohom_core::module::restrict_to_subalgebra;
use supercohom_core::restricted::{p_map_exists, sr3_coefficients, verify_sr1, PMapOutcome};
use supercohom_core::structure::{characteristic_sequence, torus_weights};
use supercohom_core::{Field, GModule, Parity, PrimeField, Rationals, SparseVector, SuperAlgebra};

#[derive(Clone, Debug)]
enum Instance {
    L(usize, usize),
    Sl(usize, usize),
    N(Vec<usize>, Vec<usize>),
    Sn(Vec<usize>, Vec<usize>),
}

impl Instance {
    fn build<F: Field>(&self, f: &F) -> SuperAlgebra<F> {
        match self {
            Instance::L(n, m) => model_filiform(f, *n, *m),
            Instance::Sl(n, m) => solvable_model_filiform(f, *n, *m),
            Instance::N(ns, ms) => model_nilpotent(f, ns, ms),
            Instance::Sn(ns, ms) => solvable_model_nilpotent(f, ns, ms),
        }
        .unwrap()
    }
}

fn blocks(max: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1..=max, 0..=2).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

fn instance() -> impl Strategy<Value = Instance> {
    prop_oneof![
        (2..=5usize, 1..=4usize).prop_map(|(n, m)| Instance::L(n, m)),
        (3..=5usize, 1..=4usize).prop_map(|(n, m)| Instance::Sl(n, m)),
        (blocks(3).prop_filter("nonempty", |v| !v.is_empty()), blocks(2)).prop_map(|(ns, ms)| Instance::N(ns, ms)),
        (blocks(3).prop_filter("nonempty", |v| !v.is_empty()), blocks(2)).prop_map(|(ns, ms)| Instance::Sn(ns, ms)),
    ]
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

/// Brute-force graded Jacobi on basis triples.
fn jacobi_holds<F: Field>(g: &SuperAlgebra<F>) -> bool {
    let f = g.field();
    let sign = |a: usize, b: usize| if g.parity(a) == Parity::Odd && g.parity(b) == Parity::Odd { -1 } else { 1 };
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            for k in 0..g.dim() {
                let e = |x: usize| g.basis_vector(x);
                // (-1)^{ik}[i,[j,k]] + (-1)^{ji}[j,[k,i]] + (-1)^{kj}[k,[i,j]] = 0
                let t1 = g.bracket_elements(&e(i), &g.bracket_elements(&e(j), &e(k)));
                let t2 = g.bracket_elements(&e(j), &g.bracket_elements(&e(k), &e(i)));
                let t3 = g.bracket_elements(&e(k), &g.bracket_elements(&e(i), &e(j)));
                let s = |v: SparseVector<F::Elem>, sg: i64| v.scale(f, &f.from_i64(sg));
                let total = s(t1, sign(i, k)).add(f, &s(t2, sign(j, i))).add(f, &s(t3, sign(k, j)));
                if !total.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn family_instances_are_lie_superalgebras(inst in instance(), p in prime()) {
        let q = inst.build(&Rationals);
        prop_assert!(q.validate().is_valid());
        prop_assert!(jacobi_holds(&q));
        let fp = inst.build(&PrimeField::new(p).unwrap());
        prop_assert!(fp.validate().is_valid());
        prop_assert!(GModule::adjoint(&fp).check(&fp).is_ok());
    }

    #[test]
    fn nilradical_of_sl_is_l(n in 2..=6usize, m in 1..=5usize) {
        let sl = solvable_model_filiform(&Rationals, n, m).unwrap();
        let l = model_filiform(&Rationals, n, m).unwrap();
        let keep: Vec<usize> = (0..n).chain(n + 3..n + 3 + m).collect();
        let (sub, _) = restrict_to_subalgebra(&sl, &keep).unwrap();
        prop_assert_eq!(sub.constants(), l.constants());
    }

    #[test]
    fn single_block_model_nilpotent_is_filiform(n in 2..=7usize, m in 1..=5usize) {
        let l = model_filiform(&Rationals, n, m).unwrap();
        let nn = model_nilpotent(&Rationals, &[n - 1], &[m]).unwrap();
        prop_assert_eq!(l.constants(), nn.constants());
    }

    #[test]
    fn characteristic_sequence_partitions_the_dimensions(
        inst in prop_oneof![
            (2..=6usize, 1..=4usize).prop_map(|(n, m)| Instance::L(n, m)),
            (blocks(3).prop_filter("nonempty", |v| !v.is_empty()), blocks(3)).prop_map(|(ns, ms)| Instance::N(ns, ms)),
        ]
    ) {
        let g = inst.build(&Rationals);
        let cs = characteristic_sequence(&g, 8).unwrap();
        prop_assert!(cs.even_part.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(cs.odd_part.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(cs.even_part.iter().sum::<usize>(), g.even_dim());
        prop_assert_eq!(cs.odd_part.iter().sum::<usize>(), g.odd_dim());
    }

    #[test]
    fn torus_weights_are_additive(inst in prop_oneof![
        (3..=6usize, 1..=5usize).prop_map(|(n, m)| Instance::Sl(n, m)),
        (blocks(3).prop_filter("nonempty", |v| !v.is_empty()), blocks(2)).prop_map(|(ns, ms)| Instance::Sn(ns, ms)),
    ]) {
        let g = inst.build(&Rationals);
        let grading = degree_grading(&g).unwrap();
        let torus: Vec<usize> = (0..g.even_dim()).filter(|&i| grading.weight(i)[0] == 0).collect();
        let w = torus_weights(&g, &torus).unwrap();
        for (&(i, j), v) in g.constants() {
            for (k, _) in v.entries() {
                let mut sum = w.weight(i).to_vec();
                w.accumulate(&mut sum, w.weight(j), 1);
                prop_assert_eq!(&sum[..], w.weight(*k));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differential_squares_to_zero_and_keeps_parity(inst in instance(), p in prime(), trivial in any::<bool>()) {
        fn check<F: Field>(g: &SuperAlgebra<F>, module: &GModule<F>) -> Result<(), TestCaseError> {
            for q in 0..=2 {
                let d = differential_matrix(g, module, q).unwrap();
                let d_next = differential_matrix(g, module, q + 1).unwrap();
                prop_assert!(d_next.mul(&d).unwrap().is_zero(), "q = {}", q);
                let src = CochainSpace::new(g, module, q).unwrap();
                let dst = CochainSpace::new(g, module, q + 1).unwrap();
                for (r, c, _) in d.triplets() {
                    prop_assert_eq!(dst.parity(r), src.parity(c));
                }
            }
            Ok(())
        }
        let g = inst.build(&Rationals);
        let module = if trivial { GModule::trivial(&g) } else { GModule::adjoint(&g) };
        check(&g, &module)?;
        let gp = inst.build(&PrimeField::new(p).unwrap());
        check(&gp, &GModule::adjoint(&gp))?;
    }

    #[test]
    fn blockwise_equals_direct_and_dims_are_sane(inst in instance(), q in 0..=2usize, p in prime()) {
        fn check<F: Field>(g: &SuperAlgebra<F>, q: usize) -> Result<(), TestCaseError> {
            let ad = GModule::adjoint(g);
            let opts = CohomologyOptions::default();
            let direct = cohomology(g, &ad, q, &opts).unwrap();
            let blocks = weight_blocks(g, &ad, q, &degree_grading(g).unwrap(), None, &opts).unwrap();
            prop_assert_eq!(&direct.even, &blocks.even);
            prop_assert_eq!(&direct.odd, &blocks.odd);
            for d in [&direct.even, &direct.odd] {
                prop_assert!(d.coboundaries <= d.cocycles);
            }
            Ok(())
        }
        check(&inst.build(&Rationals), q)?;
        check(&inst.build(&PrimeField::new(p).unwrap()), q)?;
    }

    #[test]
    fn reduction_mod_p_never_lowers_cohomology(inst in instance(), q in 0..=2usize, p in prime()) {
        let opts = CohomologyOptions::default();
        let gq = inst.build(&Rationals);
        let gp = inst.build(&PrimeField::new(p).unwrap());
        let hq = cohomology(&gq, &GModule::adjoint(&gq), q, &opts).unwrap().total().cohomology;
        let hp = cohomology(&gp, &GModule::adjoint(&gp), q, &opts).unwrap().total().cohomology;
        prop_assert!(hp >= hq, "H^{} over F_{} is {} < {}", q, p, hp, hq);
    }

    #[test]
    fn representatives_are_nontrivial_cocycles(inst in instance(), q in 1..=2usize, p in prime()) {
        let g = inst.build(&PrimeField::new(p).unwrap());
        let ad = GModule::adjoint(&g);
        let opts = CohomologyOptions { representatives: true, ..Default::default() };
        let r = cohomology(&g, &ad, q, &opts).unwrap();
        prop_assert_eq!(r.representatives.len(), r.total().cohomology);
        for rep in &r.representatives {
            prop_assert!(is_cocycle(&g, &ad, &rep.cochain).unwrap());
            prop_assert!(is_coboundary(&g, &ad, &rep.cochain).unwrap().is_none());
        }
    }

    #[test]
    fn abc_split_sums_to_cocycles(inst in instance()) {
        let g = inst.build(&Rationals);
        let ad = GModule::adjoint(&g);
        for parity in [Parity::Even, Parity::Odd] {
            let s = abc_split(&g, &ad, 2, parity, &CohomologyOptions::default()).unwrap();
            prop_assert_eq!(s.a + s.b + s.c, s.cocycles);
            let z = cohomology(&g, &ad, 2, &CohomologyOptions::default()).unwrap().parity(parity).cocycles;
            prop_assert_eq!(s.cocycles, z);
        }
    }

    #[test]
    fn coboundaries_have_witnesses(inst in instance(), seed in proptest::collection::vec((0usize..10_000, -3i64..=3), 1..6)) {
        let g = inst.build(&Rationals);
        let ad = GModule::adjoint(&g);
        let c1 = CochainSpace::new(&g, &ad, 1).unwrap();
        let entries = seed.iter().map(|(i, v)| (i % c1.len(), Rationals.from_i64(*v)));
        let f: Cochain<Rationals> = Cochain::new(&c1, SparseVector::from_entries(&Rationals, c1.len(), entries)).unwrap();
        let d = differential_matrix(&g, &ad, 1).unwrap();
        let c2 = CochainSpace::new(&g, &ad, 2).unwrap();
        let df: Cochain<Rationals> = Cochain::new(&c2, d.mul_vec(f.coefficients()).unwrap()).unwrap();
        prop_assert!(is_cocycle(&g, &ad, &df).unwrap());
        let w = is_coboundary(&g, &ad, &df).unwrap().expect("df is a coboundary");
        prop_assert_eq!(d.mul_vec(w.coefficients()).unwrap(), df.coefficients().clone());
    }

    #[test]
    fn p_map_outcomes_verify(n in 2..=7usize, m in 1..=6usize, p in prime()) {
        let f = PrimeField::new(p).unwrap();
        let g = solvable_model_filiform(&f, n, m).unwrap();
        let p_us = p as usize;
        match p_map_exists(&g).unwrap() {
            PMapOutcome::Restricted(pm) => {
                prop_assert!(m <= p_us && n <= p_us + 1);
                prop_assert!(verify_sr1(&g, &pm));
                prop_assert!(pm.unique);
            }
            PMapOutcome::Obstructed(w) => {
                prop_assert!(!(m <= p_us && n <= p_us + 1));
                prop_assert!(w.verify(&g));
            }
        }
    }

    #[test]
    fn sr3_scaling(
        a in proptest::collection::vec(0u64..5, 8),
        b in proptest::collection::vec(0u64..5, 8),
        alpha in 1u64..5,
    ) {
        let f = PrimeField::new(5).unwrap();
        let g = solvable_model_filiform(&f, 5, 4).unwrap();
        let even = |c: &[u64]| SparseVector::from_entries(&f, g.dim(), c.iter().enumerate().map(|(i, v)| (i, *v)));
        let (a, b) = (even(&a), even(&b));
        let scaled = sr3_coefficients(&g, &a.scale(&f, &alpha), &b).unwrap();
        let plain = sr3_coefficients(&g, &a, &b).unwrap();
        let eval = |coeffs: &[SparseVector<u64>], x: u64| {
            coeffs.iter().enumerate().fold(SparseVector::zero(g.dim()), |acc, (i, c)| {
                let w = f.mul(&f.from_i64(i as i64 + 1), &f.pow(&x, i as u64));
                acc.axpy(&f, &w, c)
            })
        };
        for lam in 0..5u64 {
            prop_assert_eq!(eval(&scaled, lam), eval(&plain, f.mul(&lam, &alpha)).scale(&f, &alpha));
        }
    }
}
