//! Structural invariants: central sequences, characteristic sequence and
//! torus weight gradings.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::SuperAlgebra;
use crate::error::Error;
use crate::field::Field;
use crate::linalg::{rank, SparseMatrix, SparseVector, Subspace};
use crate::module::GModule;

/// Default number of random candidates tried by [`characteristic_sequence`].
pub const DEFAULT_TRIAL_BUDGET: usize = 32;

const CHARSEQ_SEED: u64 = 0x5eed_c4a2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSequences {
    pub nilindex: usize,
    /// `(p, q)`: first indices where the even and odd sequences vanish.
    pub s_nilindex: (usize, usize),
}

/// Iterates `S -> [gens, S]` from `start` until it stabilises. Returns the
/// index at which it reaches zero, or `None` if it stabilises nonzero.
fn descend<F: Field>(alg: &SuperAlgebra<F>, gens: &[usize], start: Vec<SparseVector<F::Elem>>) -> Option<usize> {
    let f = alg.field();
    let mut current = Subspace::spanned_by(f, alg.dim(), &start);
    let mut k = 0;
    while current.dim() > 0 {
        let mut next = Subspace::new(f, alg.dim());
        for v in current.basis() {
            for &i in gens {
                let w = alg.bracket_basis_element(i, &v);
                if !w.is_zero() {
                    next.insert(&w);
                }
            }
        }
        if next.dim() == current.dim() {
            return None;
        }
        current = next;
        k += 1;
    }
    Some(k)
}

/// Nilindex and s-nilindex, or `None` when the algebra is not nilpotent.
pub fn central_sequences<F: Field>(alg: &SuperAlgebra<F>) -> Option<CentralSequences> {
    let all: Vec<usize> = (0..alg.dim()).collect();
    let even: Vec<usize> = (0..alg.even_dim()).collect();
    let units = |r: core::ops::Range<usize>| r.map(|i| alg.basis_vector(i)).collect::<Vec<_>>();
    let nilindex = descend(alg, &all, units(0..alg.dim()))?;
    let p = descend(alg, &even, units(0..alg.even_dim()))?;
    let q = descend(alg, &even, units(alg.even_dim()..alg.dim()))?;
    Some(CentralSequences { nilindex, s_nilindex: (p, q) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicSequence {
    pub even_part: Vec<usize>,
    pub odd_part: Vec<usize>,
}

/// Block sizes (non-increasing) of a nilpotent operator, from the ranks of
/// its powers: `#blocks of size >= k = rank(A^{k-1}) - rank(A^k)`.
pub fn jordan_type<F: Field>(a: &SparseMatrix<F>) -> Vec<usize> {
    let n = a.ncols();
    let mut ranks = vec![n];
    let mut power = SparseMatrix::identity(a.field(), n);
    while *ranks.last().unwrap() > 0 {
        power = power.mul(a).expect("square matrix");
        let r = rank(&power);
        if r == *ranks.last().unwrap() {
            // Not nilpotent; stop rather than loop.
            break;
        }
        ranks.push(r);
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(core::iter::repeat(k).take(exactly));
    }
    sizes
}

/// Jordan types of `ad_x` on the even and odd parts.
pub fn jordan_types_of<F: Field>(alg: &SuperAlgebra<F>, x: &SparseVector<F::Elem>) -> (Vec<usize>, Vec<usize>) {
    let ad = alg.ad(x);
    let even: Vec<usize> = (0..alg.even_dim()).collect();
    let odd: Vec<usize> = (alg.even_dim()..alg.dim()).collect();
    let block = |idx: &[usize]| ad.select_rows(idx).select_columns(idx);
    (jordan_type(&block(&even)), jordan_type(&block(&odd)))
}

/// Characteristic sequence of a nilpotent superalgebra.
///
/// The maximum over `g0 \ [g0, g0]` is taken over a finite candidate set:
/// even basis vectors outside `[g0, g0]`, `trial_budget` random elements with
/// coefficients in `[-3, 3]` (fixed seed) and one element with distinct
/// coefficients. Even and odd parts are maximised independently. The result
/// is a lower bound in general and exact whenever a candidate attains both
/// maxima.
pub fn characteristic_sequence<F: Field>(
    alg: &SuperAlgebra<F>,
    trial_budget: usize,
) -> Result<CharacteristicSequence, Error> {
    if central_sequences(alg).is_none() {
        return Err(Error::NotNilpotent);
    }
    let f = alg.field();
    let d0 = alg.even_dim();
    let mut derived = Subspace::new(f, alg.dim());
    for i in 0..d0 {
        for j in i + 1..d0 {
            let b = alg.bracket(i, j);
            if !b.is_zero() {
                derived.insert(b);
            }
        }
    }
    let mut candidates: Vec<SparseVector<F::Elem>> = (0..d0).map(|i| alg.basis_vector(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(CHARSEQ_SEED);
    for _ in 0..trial_budget {
        let entries = (0..d0).map(|i| (i, f.from_i64(rng.gen_range(-3..=3))));
        candidates.push(SparseVector::from_entries(f, alg.dim(), entries));
    }
    candidates.push(SparseVector::from_entries(f, alg.dim(), (0..d0).map(|i| (i, f.from_i64(i as i64 + 1)))));

    let mut best: Option<CharacteristicSequence> = None;
    for x in candidates.iter().filter(|x| !derived.contains(x)) {
        let (even_part, odd_part) = jordan_types_of(alg, x);
        best = Some(match best {
            None => CharacteristicSequence { even_part, odd_part },
            Some(b) => CharacteristicSequence {
                even_part: core::cmp::max(b.even_part, even_part),
                odd_part: core::cmp::max(b.odd_part, odd_part),
            },
        });
    }
    // Only possible when g0 = [g0, g0], which forces g0 = 0 for nilpotent g.
    Ok(best.unwrap_or(CharacteristicSequence { even_part: Vec::new(), odd_part: vec![1; alg.odd_dim()] }))
}

/// Integer weights on a basis, one component per grading character.
///
/// Over `F_p` torus eigenvalues are only defined modulo `p`; such gradings
/// carry `modulus = Some(p)` and all arithmetic on them is reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGrading {
    weights: Vec<Vec<i64>>,
    modulus: Option<u64>,
    additive: bool,
}

impl WeightGrading {
    /// Builds a grading on the basis of `alg` and records whether it is
    /// additive on every nonzero structure constant.
    pub fn new<F: Field>(alg: &SuperAlgebra<F>, weights: Vec<Vec<i64>>, modulus: Option<u64>) -> Result<Self, Error> {
        let mut grading = Self::from_weights(weights, modulus)?;
        if grading.len() != alg.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for an algebra of dimension {}",
                grading.len(),
                alg.dim()
            )));
        }
        grading.additive = grading.additivity_violation(alg).is_none();
        Ok(grading)
    }

    /// A grading on a module basis. Additivity against an algebra action is
    /// checked separately by [`WeightGrading::check_module`].
    pub fn from_weights(weights: Vec<Vec<i64>>, modulus: Option<u64>) -> Result<Self, Error> {
        let chars = weights.first().map_or(0, |w| w.len());
        if weights.iter().any(|w| w.len() != chars) {
            return Err(Error::DimensionMismatch("weights have differing numbers of characters".into()));
        }
        let mut g = WeightGrading { weights, modulus, additive: true };
        for w in &mut g.weights {
            for c in w.iter_mut() {
                *c = normalize(*c, modulus);
            }
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
    pub fn characters(&self) -> usize {
        self.weights.first().map_or(0, |w| w.len())
    }
    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }
    pub fn is_additive(&self) -> bool {
        self.additive
    }
    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }
    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.characters()]
    }

    /// `a + sign * b`, reduced modulo the grading modulus.
    pub fn accumulate(&self, a: &mut [i64], b: &[i64], sign: i64) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = normalize(*x + sign * *y, self.modulus);
        }
    }

    /// Single-character grading `Σ coeffs[c] * weight_c`.
    pub fn combine(&self, coeffs: &[i64]) -> Result<WeightGrading, Error> {
        if coeffs.len() != self.characters() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} characters",
                coeffs.len(),
                self.characters()
            )));
        }
        let weights =
            self.weights.iter().map(|w| vec![w.iter().zip(coeffs).map(|(a, b)| a * b).sum::<i64>()]).collect();
        let mut g = Self::from_weights(weights, self.modulus)?;
        g.additive = self.additive;
        Ok(g)
    }

    /// The grading on the sub-basis `indices` (in the given order).
    pub fn restrict(&self, indices: &[usize]) -> WeightGrading {
        WeightGrading {
            weights: indices.iter().map(|&i| self.weights[i].clone()).collect(),
            modulus: self.modulus,
            additive: self.additive,
        }
    }

    fn additivity_violation<F: Field>(&self, alg: &SuperAlgebra<F>) -> Option<(usize, usize)> {
        for (&(i, j), v) in alg.constants() {
            let mut expected = self.weights[i].clone();
            self.accumulate(&mut expected, &self.weights[j], 1);
            if v.entries().iter().any(|(k, _)| self.weights[*k] != expected) {
                return Some((i, j));
            }
        }
        None
    }

    /// Error form of the additivity check on the algebra.
    pub fn require_additive<F: Field>(&self, alg: &SuperAlgebra<F>) -> Result<(), Error> {
        match self.additivity_violation(alg) {
            None => Ok(()),
            Some((i, j)) => Err(Error::NonAdditiveGrading { left: alg.name(i).into(), right: alg.name(j).into() }),
        }
    }

    /// Checks `weight(ρ(e_i) a) = weight(e_i) + weight(a)` on every nonzero
    /// action entry, with `self` grading the algebra and `module_grading`
    /// the module.
    pub fn check_module<F: Field>(
        &self,
        alg: &SuperAlgebra<F>,
        module: &GModule<F>,
        module_grading: &WeightGrading,
    ) -> Result<(), Error> {
        if module_grading.len() != module.dim() || module_grading.characters() != self.characters() {
            return Err(Error::DimensionMismatch("module grading does not fit the module".into()));
        }
        for i in 0..alg.dim() {
            for (r, c, _) in module.action(i).triplets() {
                let mut expected = self.weights[i].clone();
                self.accumulate(&mut expected, module_grading.weight(c), 1);
                if module_grading.weight(r) != expected.as_slice() {
                    return Err(Error::NonAdditiveGrading { left: alg.name(i).into(), right: module.name(c).into() });
                }
            }
        }
        Ok(())
    }
}

fn normalize(v: i64, modulus: Option<u64>) -> i64 {
    match modulus {
        Some(p) => v.rem_euclid(p as i64),
        None => v,
    }
}

/// Eigenvalues of `ad_t` for each torus generator `t`, as a weight grading.
/// Over `F_p` the weights are residues (modulus `p`).
pub fn torus_weights<F: Field>(alg: &SuperAlgebra<F>, torus: &[usize]) -> Result<WeightGrading, Error> {
    let f = alg.field();
    for &t in torus {
        if t >= alg.dim() {
            return Err(Error::IndexOutOfRange { index: t, dim: alg.dim() });
        }
        if t >= alg.even_dim() {
            return Err(Error::OddTorusElement(alg.name(t).into()));
        }
    }
    for (a, &s) in torus.iter().enumerate() {
        for &t in &torus[a + 1..] {
            if !alg.bracket(s, t).is_zero() {
                return Err(Error::TorusNotAbelian { left: alg.name(s).into(), right: alg.name(t).into() });
            }
        }
    }
    let mut weights = vec![Vec::with_capacity(torus.len()); alg.dim()];
    for &t in torus {
        for (k, w) in weights.iter_mut().enumerate() {
            let image = alg.bracket(t, k);
            let eigen = match image.entries() {
                [] => 0,
                [(idx, c)] if *idx == k => {
                    f.to_integer(c).ok_or_else(|| Error::NonIntegralWeight(alg.name(k).into()))?
                }
                _ => return Err(Error::NonDiagonalTorus { generator: alg.name(t).into(), basis: alg.name(k).into() }),
            };
            w.push(eigen);
        }
    }
    let modulus = match f.characteristic() {
        0 => None,
        p => Some(p),
    };
    WeightGrading::new(alg, weights, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::*;
    use crate::field::{PrimeField, Rationals};

    /// Dense oracle: Jordan type of a nilpotent matrix via explicit
    /// Krylov chains is awkward, so we use the textbook rank formula on a
    /// dense copy with independent Gaussian elimination.
    fn dense_rank(mut m: Vec<Vec<i64>>) -> usize {
        // Integer fraction-free elimination on small matrices.
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, p);
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let (a, b) = (m[r][c], m[i][c]);
                    for k in 0..cols {
                        m[i][k] = a * m[i][k] - b * m[r][k];
                    }
                    let g = m[i].iter().fold(0i64, |g, &x| num_integer::Integer::gcd(&g, &x));
                    if g > 1 {
                        m[i].iter_mut().for_each(|x| *x /= g);
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn dense_jordan(a: &[Vec<i64>]) -> Vec<usize> {
        let n = a.len();
        let mul = |x: &[Vec<i64>], y: &[Vec<i64>]| -> Vec<Vec<i64>> {
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
        };
        let mut ranks = vec![n];
        let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for _ in 0..n {
            p = mul(&p, a);
            ranks.push(dense_rank(p.clone()));
        }
        let mut sizes = Vec::new();
        for k in 1..=n {
            let ge_k = ranks[k - 1] - ranks[k];
            let ge_k1 = if k < n { ranks[k] - ranks[k + 1] } else { 0 };
            sizes.extend(core::iter::repeat(k).take(ge_k - ge_k1));
        }
        sizes.reverse();
        sizes
    }

    fn ad_dense(alg: &SuperAlgebra<Rationals>, i: usize, idx: &[usize]) -> Vec<Vec<i64>> {
        let ad = alg.ad_basis(i);
        idx.iter().map(|&r| idx.iter().map(|&c| Rationals.to_integer(&ad.get(r, c)).unwrap()).collect()).collect()
    }

    #[test]
    fn abelian_nilindex_one() {
        let g = SuperAlgebra::builder(&Rationals, &["a", "b"], &["y"]).unwrap().build();
        let cs = central_sequences(&g).unwrap();
        assert_eq!(cs.nilindex, 1);
        let seq = characteristic_sequence(&g, 4).unwrap();
        assert_eq!(seq.even_part, [1, 1]);
        assert_eq!(seq.odd_part, [1]);
    }

    #[test]
    fn l43_invariants() {
        let g = model_filiform(&Rationals, 4, 3).unwrap();
        assert_eq!(central_sequences(&g).unwrap().s_nilindex, (3, 3));
        let seq = characteristic_sequence(&g, DEFAULT_TRIAL_BUDGET).unwrap();
        assert_eq!(seq.even_part, [3, 1]);
        assert_eq!(seq.odd_part, [3]);
        assert_eq!(dense_jordan(&ad_dense(&g, 0, &[0, 1, 2, 3])), [3, 1]);
        assert_eq!(dense_jordan(&ad_dense(&g, 0, &[4, 5, 6])), [3]);
    }

    #[test]
    fn model_nilpotent_even_part() {
        let g = model_nilpotent(&Rationals, &[3, 2], &[]).unwrap();
        let seq = characteristic_sequence(&g, DEFAULT_TRIAL_BUDGET).unwrap();
        assert_eq!(seq.even_part, [3, 2, 1]);
        assert!(seq.odd_part.is_empty());
        let g = model_nilpotent(&Rationals, &[3, 2], &[2, 1]).unwrap();
        assert!(central_sequences(&g).is_some());
        assert_eq!((g.even_dim(), g.odd_dim()), (6, 3));
    }

    #[test]
    fn solvable_is_not_nilpotent() {
        let g = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        assert!(central_sequences(&g).is_none());
        assert_eq!(characteristic_sequence(&g, 1), Err(Error::NotNilpotent));
    }

    #[test]
    fn sl_torus_weights() {
        let g = solvable_model_filiform(&Rationals, 4, 3).unwrap();
        let w = torus_weights(&g, &[4, 5, 6]).unwrap();
        assert!(w.is_additive());
        assert_eq!(w.weight(0), [1, 0, 0]);
        for i in 2..=4 {
            assert_eq!(w.weight(i - 1), [i as i64, 1, 0]);
        }
        for j in 1..=3 {
            assert_eq!(w.weight(6 + j), [j as i64, 0, 1]);
        }
        for t in 4..7 {
            assert_eq!(w.weight(t), [0, 0, 0]);
        }
        let single = w.combine(&[1, 0, 4]).unwrap();
        assert_eq!(single, degree_grading(&g).unwrap());
    }

    #[test]
    fn torus_weights_mod_p_are_residues() {
        let f = PrimeField::new(3).unwrap();
        let g = solvable_model_filiform(&f, 4, 3).unwrap();
        let w = torus_weights(&g, &[4]).unwrap();
        assert_eq!(w.modulus(), Some(3));
        assert_eq!(w.weight(2), [0]);
        assert!(w.is_additive());
    }

    #[test]
    fn zero_torus_gives_zero_weights() {
        let g = SuperAlgebra::builder(&Rationals, &["t", "a"], &["y"]).unwrap().build();
        let w = torus_weights(&g, &[0]).unwrap();
        assert!(w.weights().iter().all(|v| v == &[0]));
    }

    #[test]
    fn non_diagonal_torus_rejected() {
        let g = model_filiform(&Rationals, 3, 2).unwrap();
        assert!(matches!(torus_weights(&g, &[0]), Err(Error::NonDiagonalTorus { .. })));
        let g = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        assert!(matches!(torus_weights(&g, &[6]), Err(Error::OddTorusElement(_))));
    }

    #[test]
    fn non_additive_grading_detected() {
        let g = model_filiform(&Rationals, 3, 2).unwrap();
        let w = WeightGrading::new(&g, vec![vec![1]; 5], None).unwrap();
        assert!(!w.is_additive());
        assert!(w.require_additive(&g).is_err());
    }
}
