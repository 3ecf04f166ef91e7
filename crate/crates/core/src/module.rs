//! Finite-dimensional modules over a Lie superalgebra.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::algebra::{Parity, SuperAlgebra, SuperAlgebraBuilder};
use crate::error::Error;
use crate::field::Field;
use crate::linalg::{SparseMatrix, SparseVector};

/// A module `A` over `g`, given by one action matrix `ρ(e_i)` per algebra
/// basis vector. Column `a` of `ρ(e_i)` is `e_i · a`.
#[derive(Clone, Debug)]
pub struct GModule<F: Field> {
    names: Vec<String>,
    even_dim: usize,
    actions: Vec<SparseMatrix<F>>,
    label: String,
}

impl<F: Field> GModule<F> {
    /// Builds a module and checks parity respect and the module axiom
    /// `ρ(e_i)ρ(e_j) - (-1)^{|i||j|} ρ(e_j)ρ(e_i) = ρ([e_i,e_j])` on all pairs.
    pub fn new(
        alg: &SuperAlgebra<F>,
        names: Vec<String>,
        even_dim: usize,
        actions: Vec<SparseMatrix<F>>,
        label: impl Into<String>,
    ) -> Result<Self, Error> {
        let module = GModule { names, even_dim, actions, label: label.into() };
        module.check(alg)?;
        Ok(module)
    }

    /// `g` acting on itself by `ad`.
    pub fn adjoint(alg: &SuperAlgebra<F>) -> Self {
        GModule {
            names: alg.basis().iter().map(|b| b.name.clone()).collect(),
            even_dim: alg.even_dim(),
            actions: (0..alg.dim()).map(|i| alg.ad_basis(i)).collect(),
            label: "adjoint".into(),
        }
    }

    /// The one-dimensional trivial module `K` (even).
    pub fn trivial(alg: &SuperAlgebra<F>) -> Self {
        let f = alg.field();
        GModule {
            names: alloc::vec!["1".to_string()],
            even_dim: 1,
            actions: (0..alg.dim()).map(|_| SparseMatrix::zeros(f, 1, 1)).collect(),
            label: "trivial".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }
    pub fn even_dim(&self) -> usize {
        self.even_dim
    }
    pub fn odd_dim(&self) -> usize {
        self.names.len() - self.even_dim
    }
    pub fn parity(&self, a: usize) -> Parity {
        if a < self.even_dim {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    /// `ρ(e_i)`.
    pub fn action(&self, i: usize) -> &SparseMatrix<F> {
        &self.actions[i]
    }
    pub fn actions(&self) -> &[SparseMatrix<F>] {
        &self.actions
    }

    /// Verifies shape, parity respect and the module axiom against `alg`.
    pub fn check(&self, alg: &SuperAlgebra<F>) -> Result<(), Error> {
        let f = alg.field();
        let dim = self.dim();
        if self.even_dim > dim {
            return Err(Error::ModuleMismatch("even dimension exceeds total dimension".into()));
        }
        if self.actions.len() != alg.dim() {
            return Err(Error::ModuleMismatch(format!(
                "{} action matrices for an algebra of dimension {}",
                self.actions.len(),
                alg.dim()
            )));
        }
        for (i, m) in self.actions.iter().enumerate() {
            if m.field() != f {
                return Err(Error::FieldMismatch { left: f.descriptor(), right: m.field().descriptor() });
            }
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::ModuleMismatch(format!("action of {} is not {dim}x{dim}", alg.name(i))));
            }
            for (r, c, _) in m.triplets() {
                if self.parity(r) != alg.parity(i).plus(self.parity(c)) {
                    return Err(Error::ModuleMismatch(format!(
                        "action of {} does not respect parity at ({}, {})",
                        alg.name(i),
                        self.name(r),
                        self.name(c)
                    )));
                }
            }
        }
        for i in 0..alg.dim() {
            for j in i..alg.dim() {
                let lhs = self.actions[i].mul(&self.actions[j])?;
                let rhs = self.actions[j].mul(&self.actions[i])?;
                let sign = if alg.parity(i).both_odd(alg.parity(j)) { f.one() } else { f.neg(&f.one()) };
                let commutator = lhs.axpy(&sign, &rhs)?;
                let expected = self.action_of(alg, alg.bracket(i, j));
                if commutator.to_dense() != expected.to_dense() {
                    return Err(Error::ModuleMismatch(format!(
                        "module axiom fails on ({}, {})",
                        alg.name(i),
                        alg.name(j)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ρ(x)` for an arbitrary algebra element.
    pub fn action_of(&self, alg: &SuperAlgebra<F>, x: &SparseVector<F::Elem>) -> SparseMatrix<F> {
        let f = alg.field();
        let mut acc = SparseMatrix::zeros(f, self.dim(), self.dim());
        for (i, c) in x.entries() {
            acc = acc.axpy(c, &self.actions[*i]).expect("actions share shape and field");
        }
        acc
    }
}

/// The subalgebra spanned by `subset`, together with the whole algebra as a
/// module over it (restriction of the adjoint action).
pub fn restrict_to_subalgebra<F: Field>(
    alg: &SuperAlgebra<F>,
    subset: &[usize],
) -> Result<(SuperAlgebra<F>, GModule<F>), Error> {
    let mut keep: Vec<usize> = subset.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&i| i >= alg.dim()) {
        return Err(Error::IndexOutOfRange { index: bad, dim: alg.dim() });
    }
    let position = |k: usize| keep.iter().position(|&x| x == k);
    let even: Vec<&str> = keep.iter().filter(|&&i| i < alg.even_dim()).map(|&i| alg.name(i)).collect();
    let odd: Vec<&str> = keep.iter().filter(|&&i| i >= alg.even_dim()).map(|&i| alg.name(i)).collect();
    let mut builder = SuperAlgebraBuilder::new(alg.field(), &even, &odd)?;
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate().skip(a) {
            let mut image = Vec::new();
            for (k, c) in alg.bracket(i, j).entries() {
                match position(*k) {
                    Some(pos) => image.push((pos, c.clone())),
                    None => return Err(Error::NotClosed { left: alg.name(i).into(), right: alg.name(j).into() }),
                }
            }
            builder.bracket(a, b, &image)?;
        }
    }
    let sub = builder.build();
    let adjoint = GModule::adjoint(alg);
    let module = GModule {
        names: adjoint.names,
        even_dim: adjoint.even_dim,
        actions: keep.iter().map(|&i| adjoint.actions[i].clone()).collect(),
        label: format!("restriction of {}", alg.label()),
    };
    Ok((sub, module))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{model_filiform, solvable_model_filiform};
    use crate::field::Rationals;

    #[test]
    fn adjoint_t1_is_diagonal() {
        let g = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        let m = GModule::adjoint(&g);
        m.check(&g).unwrap();
        let t1 = m.action(g.index_of("T1").unwrap());
        let diag: Vec<i64> = (0..8).map(|i| Rationals.to_integer(&t1.get(i, i)).unwrap()).collect();
        assert_eq!(diag, [1, 2, 3, 0, 0, 0, 1, 2]);
        assert_eq!(t1.nnz(), 5);
    }

    #[test]
    fn adjoint_of_abelian_is_zero() {
        let g = SuperAlgebra::builder(&Rationals, &["a"], &["b"]).unwrap().build();
        assert!(GModule::adjoint(&g).actions().iter().all(|a| a.is_zero()));
    }

    #[test]
    fn x1_shift_powers_in_l43() {
        let g = model_filiform(&Rationals, 4, 3).unwrap();
        let ad = GModule::adjoint(&g).action(0).clone();
        assert!(!ad.pow(2).unwrap().is_zero());
        assert!(ad.pow(3).unwrap().is_zero());
        // X2 -> X3 -> X4, Y1 -> Y2 -> Y3
        assert_eq!(ad.column(1).entries().iter().map(|e| e.0).collect::<Vec<_>>(), [2]);
        assert_eq!(ad.column(2).entries().iter().map(|e| e.0).collect::<Vec<_>>(), [3]);
        assert_eq!(ad.column(4).entries().iter().map(|e| e.0).collect::<Vec<_>>(), [5]);
        assert_eq!(ad.column(5).entries().iter().map(|e| e.0).collect::<Vec<_>>(), [6]);
    }

    #[test]
    fn restriction_to_nilradical() {
        let sl = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        let subset: Vec<usize> = (0..3).chain(6..8).collect();
        let (n, m) = restrict_to_subalgebra(&sl, &subset).unwrap();
        assert_eq!(n.constants(), model_filiform(&Rationals, 3, 2).unwrap().constants());
        assert_eq!(m.dim(), 8);
        m.check(&n).unwrap();
    }

    #[test]
    fn restriction_to_everything_is_adjoint() {
        let g = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        let (h, m) = restrict_to_subalgebra(&g, &(0..8).collect::<Vec<_>>()).unwrap();
        assert_eq!(h.constants(), g.constants());
        let adj = GModule::adjoint(&g);
        for i in 0..8 {
            assert_eq!(m.action(i).to_dense(), adj.action(i).to_dense());
        }
    }

    #[test]
    fn closure_checks() {
        let g = solvable_model_filiform(&Rationals, 4, 3).unwrap();
        let t1 = g.index_of("T1").unwrap();
        let (h, _) = restrict_to_subalgebra(&g, &[t1, 1]).unwrap();
        assert_eq!(h.dim(), 2);
        assert!(h.validate().is_valid());
        let err = restrict_to_subalgebra(&g, &[0, 1]).unwrap_err();
        assert_eq!(err, Error::NotClosed { left: "X1".into(), right: "X2".into() });
    }

    #[test]
    fn broken_module_rejected() {
        let g = model_filiform(&Rationals, 3, 1).unwrap();
        let mut actions: Vec<_> = GModule::adjoint(&g).actions().to_vec();
        actions[2] = SparseMatrix::identity(&Rationals, 4);
        let names = g.basis().iter().map(|b| b.name.clone()).collect();
        assert!(GModule::new(&g, names, 3, actions, "broken").is_err());
    }
}
