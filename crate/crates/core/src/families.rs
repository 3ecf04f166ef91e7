//! Constructors for the model filiform / model nilpotent superalgebras and
//! their maximal solvable extensions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{Family, SuperAlgebra, SuperAlgebraBuilder};
use crate::cochain::{Cochain, CochainSpace};
use crate::error::Error;
use crate::field::Field;
use crate::module::GModule;
use crate::structure::WeightGrading;

fn names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

fn check_filiform(n: usize, m: usize) -> Result<(), Error> {
    if n < 2 || m < 1 {
        return Err(Error::InvalidParameters(format!("need n >= 2 and m >= 1, got n={n}, m={m}")));
    }
    Ok(())
}

fn check_nilpotent(ns: &[usize], ms: &[usize]) -> Result<(), Error> {
    if ns.is_empty() {
        return Err(Error::InvalidParameters("ns must be non-empty".into()));
    }
    if ns.iter().chain(ms).any(|&v| v == 0) {
        return Err(Error::InvalidParameters("every block size must be at least 1".into()));
    }
    Ok(())
}

/// Non-fatal remark when block sizes are not listed in non-increasing order.
pub fn ordering_warning(ns: &[usize], ms: &[usize]) -> Option<String> {
    let sorted = |v: &[usize]| v.windows(2).all(|w| w[0] >= w[1]);
    (!sorted(ns) || !sorted(ms))
        .then(|| format!("block sizes {ns:?} | {ms:?} are not non-increasing; the bracket table is still well defined"))
}

/// `L^{n,m}` on `X1..Xn | Y1..Ym`: `[X1,Xi] = X(i+1)` for `2 <= i <= n-1`,
/// `[X1,Yj] = Y(j+1)` for `1 <= j <= m-1`.
pub fn model_filiform<F: Field>(field: &F, n: usize, m: usize) -> Result<SuperAlgebra<F>, Error> {
    check_filiform(n, m)?;
    let mut b = SuperAlgebraBuilder::new(field, &names("X", n), &names("Y", m))?;
    let x = |i: usize| i - 1;
    let y = |j: usize| n + j - 1;
    for i in 2..n {
        b.bracket_int(x(1), x(i), &[(x(i + 1), 1)])?;
    }
    for j in 1..m {
        b.bracket_int(x(1), y(j), &[(y(j + 1), 1)])?;
    }
    Ok(b.family(Family::ModelFiliform { n, m }).build())
}

/// `SL^{n,m}` on `X1..Xn, T1, T2, T3 | Y1..Ym`.
pub fn solvable_model_filiform<F: Field>(field: &F, n: usize, m: usize) -> Result<SuperAlgebra<F>, Error> {
    check_filiform(n, m)?;
    let mut even = names("X", n);
    even.extend(names("T", 3));
    let mut b = SuperAlgebraBuilder::new(field, &even, &names("Y", m))?;
    let x = |i: usize| i - 1;
    let t = |l: usize| n + l - 1;
    let y = |j: usize| n + 3 + j - 1;
    for i in 2..n {
        b.bracket_int(x(1), x(i), &[(x(i + 1), 1)])?;
    }
    for j in 1..m {
        b.bracket_int(x(1), y(j), &[(y(j + 1), 1)])?;
    }
    for i in 1..=n {
        b.bracket_int(t(1), x(i), &[(x(i), i as i64)])?;
    }
    for j in 1..=m {
        b.bracket_int(t(1), y(j), &[(y(j), j as i64)])?;
    }
    for i in 2..=n {
        b.bracket_int(t(2), x(i), &[(x(i), 1)])?;
    }
    for j in 1..=m {
        b.bracket_int(t(3), y(j), &[(y(j), 1)])?;
    }
    Ok(b.family(Family::SolvableModelFiliform { n, m }).build())
}

fn prefix_sums(v: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(0);
    for x in v {
        out.push(out.last().unwrap() + x);
    }
    out
}

/// Brackets shared by the nilpotent model and its solvable extension.
/// `x(i)` and `y(j)` map 1-based labels to basis indices.
fn chain_brackets<F: Field>(
    b: &mut SuperAlgebraBuilder<F>,
    ns: &[usize],
    ms: &[usize],
    x: impl Fn(usize) -> usize,
    y: impl Fn(usize) -> usize,
) -> Result<(), Error> {
    let nsum = prefix_sums(ns);
    let msum = prefix_sums(ms);
    for j in 2..=ns[0] {
        b.bracket_int(x(1), x(j), &[(x(j + 1), 1)])?;
    }
    for blk in 1..ns.len() {
        for i in 2..=ns[blk] {
            let k = nsum[blk] + i;
            b.bracket_int(x(1), x(k), &[(x(k + 1), 1)])?;
        }
    }
    if let Some(&m1) = ms.first() {
        for j in 1..m1 {
            b.bracket_int(x(1), y(j), &[(y(j + 1), 1)])?;
        }
    }
    for blk in 1..ms.len() {
        for i in 1..ms[blk] {
            let k = msum[blk] + i;
            b.bracket_int(x(1), y(k), &[(y(k + 1), 1)])?;
        }
    }
    Ok(())
}

/// Model nilpotent superalgebra `N(n1,..,nk,1 | m1,..,mp)` on
/// `x1..x(N+1) | y1..yM` with `N = Σ ns`, `M = Σ ms`.
pub fn model_nilpotent<F: Field>(field: &F, ns: &[usize], ms: &[usize]) -> Result<SuperAlgebra<F>, Error> {
    check_nilpotent(ns, ms)?;
    let nx = ns.iter().sum::<usize>() + 1;
    let ny: usize = ms.iter().sum();
    let mut b = SuperAlgebraBuilder::new(field, &names("x", nx), &names("y", ny))?;
    chain_brackets(&mut b, ns, ms, |i| i - 1, |j| nx + j - 1)?;
    Ok(b.family(Family::ModelNilpotent { ns: ns.to_vec(), ms: ms.to_vec() }).build())
}

/// `SN(n1,..,nk,1 | m1,..,mp)` on `x.., t1..t(k+1), t'1..t'p | y..`.
pub fn solvable_model_nilpotent<F: Field>(field: &F, ns: &[usize], ms: &[usize]) -> Result<SuperAlgebra<F>, Error> {
    check_nilpotent(ns, ms)?;
    let (k, p) = (ns.len(), ms.len());
    let nx = ns.iter().sum::<usize>() + 1;
    let ny: usize = ms.iter().sum();
    let mut even = names("x", nx);
    even.extend(names("t", k + 1));
    even.extend(names("t'", p));
    let mut b = SuperAlgebraBuilder::new(field, &even, &names("y", ny))?;
    let x = |i: usize| i - 1;
    let t = |l: usize| nx + l - 1;
    let tp = |l: usize| nx + k + 1 + l - 1;
    let y = |j: usize| nx + k + 1 + p + j - 1;
    chain_brackets(&mut b, ns, ms, x, y)?;
    let nsum = prefix_sums(ns);
    let msum = prefix_sums(ms);
    for i in 1..=nx {
        b.bracket_int(t(1), x(i), &[(x(i), i as i64)])?;
    }
    for j in 1..=ny {
        b.bracket_int(t(1), y(j), &[(y(j), j as i64)])?;
    }
    for blk in 0..k {
        for i in 2..=ns[blk] + 1 {
            let idx = nsum[blk] + i;
            b.bracket_int(t(blk + 2), x(idx), &[(x(idx), 1)])?;
        }
    }
    for blk in 0..p {
        for i in 1..=ms[blk] {
            let idx = msum[blk] + i;
            b.bracket_int(tp(blk + 1), y(idx), &[(y(idx), 1)])?;
        }
    }
    Ok(b.family(Family::SolvableModelNilpotent { ns: ns.to_vec(), ms: ms.to_vec() }).build())
}

/// Integral degree grading attached to a family instance.
///
/// For `L^{n,m}` and `SL^{n,m}`: `deg Xr = r`, `deg Ys = n + s`, `deg T = 0`.
/// For `N` and `SN`: `deg xi = i`, `deg yj = N + 1 + j`, `deg t = 0`, which
/// reduces to the previous one on single-block instances.
/// The grading is over the integers, so it stays meaningful over `F_p`.
pub fn degree_grading<F: Field>(alg: &SuperAlgebra<F>) -> Result<WeightGrading, Error> {
    let family =
        alg.family().ok_or_else(|| Error::InvalidParameters("degree grading needs a family instance".into()))?;
    let nx = match family {
        Family::ModelFiliform { n, .. } | Family::SolvableModelFiliform { n, .. } => *n,
        Family::ModelNilpotent { ns, .. } | Family::SolvableModelNilpotent { ns, .. } => ns.iter().sum::<usize>() + 1,
    };
    let weights = (0..alg.dim())
        .map(|i| {
            let w = if i < nx {
                i as i64 + 1
            } else if i < alg.even_dim() {
                0
            } else {
                (nx + 1 + i - alg.even_dim()) as i64
            };
            alloc::vec![w]
        })
        .collect();
    WeightGrading::new(alg, weights, None)
}

/// The two degree `-p` adjoint 2-cochains of `SL^{n,m}` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModularCocycle {
    /// `(X1, Yp) -> Y1`; needs `m >= p`.
    OddShift,
    /// `(X1, X(p+1)) -> X2`; needs `n >= p + 1`.
    EvenShift,
}

/// The cochain of `kind` on a `SL^{n,m}` instance over `F_p`, as an element
/// of `C^2(SL^{n,m}; SL^{n,m})` in the canonical basis.
pub fn modular_cocycle<F: Field>(alg: &SuperAlgebra<F>, kind: ModularCocycle) -> Result<Cochain<F>, Error> {
    let f = alg.field();
    let p = f.characteristic() as usize;
    if p == 0 {
        return Err(Error::WrongField(f.descriptor()));
    }
    let Some(Family::SolvableModelFiliform { n, m }) = alg.family() else {
        return Err(Error::InvalidParameters("expected an SL^{n,m} instance".into()));
    };
    let (n, m) = (*n, *m);
    let module = GModule::adjoint(alg);
    let space = CochainSpace::new(alg, &module, 2)?;
    let x = |i: usize| i - 1;
    let y = |j: usize| n + 3 + j - 1;
    let term = match kind {
        ModularCocycle::OddShift if m >= p => (alloc::vec![x(1)], alloc::vec![y(p)], y(1)),
        ModularCocycle::EvenShift if n > p => (alloc::vec![x(1), x(p + 1)], alloc::vec![], x(2)),
        _ => return Err(Error::InvalidParameters(format!("{kind:?} is not defined on SL^{{{n},{m}}} for p = {p}"))),
    };
    Cochain::from_terms(f, &space, &[(term.0, term.1, term.2, f.one())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn filiform_3_2_brackets() {
        let g = model_filiform(&Rationals, 3, 2).unwrap();
        let keys: Vec<_> = g.constants().keys().cloned().collect();
        assert_eq!(keys, [(0, 1), (0, 3)]);
        assert_eq!(g.bracket(0, 1).entries(), &[(2, Rationals.one())]);
        assert_eq!(g.bracket(0, 3).entries(), &[(4, Rationals.one())]);
    }

    #[test]
    fn filiform_2_1_is_abelian() {
        assert!(model_filiform(&Rationals, 2, 1).unwrap().constants().is_empty());
    }

    #[test]
    fn filiform_bracket_count_by_enumeration() {
        let g = model_filiform(&Rationals, 5, 4).unwrap();
        let mut count = 0;
        for i in 0..g.dim() {
            for j in i..g.dim() {
                count += usize::from(!g.bracket(i, j).is_zero());
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn bad_parameters() {
        assert!(model_filiform(&Rationals, 1, 1).is_err());
        assert!(solvable_model_filiform(&Rationals, 3, 0).is_err());
        assert!(model_nilpotent(&Rationals, &[], &[1]).is_err());
        assert!(solvable_model_nilpotent(&Rationals, &[2, 0], &[1]).is_err());
    }

    #[test]
    fn solvable_filiform_torus_action() {
        let g = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        assert!(g.validate().is_valid());
        let t1 = g.index_of("T1").unwrap();
        let t2 = g.index_of("T2").unwrap();
        for i in 0..3 {
            assert_eq!(g.bracket(t1, i).entries(), &[(i, Rationals.from_i64(i as i64 + 1))]);
        }
        assert!(g.bracket(t2, 0).is_zero());
        assert_eq!(g.bracket(t2, 1).entries(), &[(1, Rationals.one())]);
        assert_eq!((g.dim(), g.even_dim(), g.odd_dim()), (8, 6, 2));
        let g = solvable_model_filiform(&Rationals, 4, 3).unwrap();
        assert_eq!((g.dim(), g.even_dim(), g.odd_dim()), (10, 7, 3));
    }

    #[test]
    fn wrong_torus_eigenvalue_breaks_jacobi() {
        let g = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        let t1 = g.index_of("T1").unwrap();
        let broken = g.with_bracket(t1, 1, &[(1, Rationals.from_i64(3))]).unwrap();
        assert_eq!(broken.validate().jacobi, Some((0, 1, t1)));
    }

    #[test]
    fn families_validate_over_several_fields() {
        let f3 = PrimeField::new(3).unwrap();
        for n in 2..7 {
            for m in 1..6 {
                assert!(model_filiform(&Rationals, n, m).unwrap().validate().is_valid());
                assert!(solvable_model_filiform(&Rationals, n, m).unwrap().validate().is_valid());
                assert!(solvable_model_filiform(&f3, n, m).unwrap().validate().is_valid());
            }
        }
        for (ns, ms) in [(&[3usize, 2][..], &[2usize, 1][..]), (&[2, 2], &[3]), (&[1], &[]), (&[2, 3, 1], &[1, 2])] {
            assert!(model_nilpotent(&Rationals, ns, ms).unwrap().validate().is_valid());
            assert!(solvable_model_nilpotent(&Rationals, ns, ms).unwrap().validate().is_valid());
        }
    }

    #[test]
    fn nilpotent_single_block_matches_filiform() {
        for (n, m) in [(3, 2), (4, 3), (5, 1)] {
            let l = model_filiform(&Rationals, n, m).unwrap();
            let nn = model_nilpotent(&Rationals, &[n - 1], &[m]).unwrap();
            assert_eq!(l.constants(), nn.constants());
            let sl = solvable_model_filiform(&Rationals, n, m).unwrap();
            let sn = solvable_model_nilpotent(&Rationals, &[n - 1], &[m]).unwrap();
            assert_eq!(sl.constants(), sn.constants());
        }
    }

    #[test]
    fn nilpotent_lie_case_brackets() {
        let g = model_nilpotent(&Rationals, &[3, 2], &[]).unwrap();
        let keys: Vec<_> = g.constants().keys().cloned().collect();
        // [x1,x2]=x3, [x1,x3]=x4, [x1,x5]=x6
        assert_eq!(keys, [(0, 1), (0, 2), (0, 4)]);
        assert_eq!(g.bracket(0, 4).entries(), &[(5, Rationals.one())]);
    }

    #[test]
    fn sn_dimensions_and_t1() {
        let g = solvable_model_nilpotent(&Rationals, &[3, 2], &[2, 1]).unwrap();
        assert_eq!((g.even_dim(), g.odd_dim()), (11, 3));
        let t1 = g.index_of("t1").unwrap();
        for i in 0..6 {
            assert_eq!(g.bracket(t1, i).entries(), &[(i, Rationals.from_i64(i as i64 + 1))]);
        }
    }

    #[test]
    fn solvable_restricts_to_nilradical() {
        let sl = solvable_model_filiform(&Rationals, 4, 3).unwrap();
        let l = model_filiform(&Rationals, 4, 3).unwrap();
        let keep: Vec<usize> = (0..4).chain(7..10).collect();
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                let restricted: Vec<_> = sl
                    .bracket(i, j)
                    .entries()
                    .iter()
                    .map(|(k, c)| (keep.iter().position(|x| x == k).unwrap(), c.clone()))
                    .collect();
                assert_eq!(restricted.as_slice(), l.bracket(a, b).entries());
            }
        }
    }

    #[test]
    fn ordering_warning_only_for_increasing_blocks() {
        assert!(ordering_warning(&[3, 2], &[2, 1]).is_none());
        assert!(ordering_warning(&[2, 3], &[]).is_some());
    }
}
