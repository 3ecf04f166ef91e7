//! Cochain spaces `C^q(g; A) = ⊕ Hom(Λ^{q0} g0 ⊗ S^{q1} g1, A)` and the
//! matrix of the differential.
//!
//! Basis elements are indexed by a strictly increasing tuple of even basis
//! vectors, a non-decreasing tuple of odd basis vectors and a module target.
//! The coefficient of a cochain on a basis element is its value on that
//! sorted argument tuple; no multiplicity factors are introduced, so nothing
//! is ever divided.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Parity, SuperAlgebra};
use crate::error::Error;
use crate::field::Field;
use crate::linalg::{SparseMatrix, SparseVector};
use crate::module::GModule;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CochainBasisElement {
    /// Strictly increasing even basis indices.
    pub even_args: Vec<usize>,
    /// Non-decreasing odd basis indices (global numbering).
    pub odd_args: Vec<usize>,
    /// Module basis index.
    pub target: usize,
}

impl CochainBasisElement {
    pub fn degree(&self) -> usize {
        self.even_args.len() + self.odd_args.len()
    }

    /// `(q1 + parity(target)) mod 2`.
    pub fn parity<F: Field>(&self, module: &GModule<F>) -> Parity {
        Parity::from_bit(self.odd_args.len()).plus(module.parity(self.target))
    }

    /// Display name such as `X1^X2 -> Y1`, `Y3·Y3 -> X2` or `() -> X2`.
    pub fn name<F: Field>(&self, alg: &SuperAlgebra<F>, module: &GModule<F>) -> String {
        let even: Vec<&str> = self.even_args.iter().map(|&i| alg.name(i)).collect();
        let odd: Vec<&str> = self.odd_args.iter().map(|&i| alg.name(i)).collect();
        let args = match (even.is_empty(), odd.is_empty()) {
            (true, true) => String::from("()"),
            (false, true) => even.join("^"),
            (true, false) => odd.join("·"),
            (false, false) => format!("{}^{}", even.join("^"), odd.join("·")),
        };
        format!("{args} -> {}", module.name(self.target))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CochainParity {
    Even,
    Odd,
    Mixed,
}

/// A cochain of fixed degree in coordinates over the canonical basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<F: Field> {
    degree: usize,
    parity: CochainParity,
    coefficients: SparseVector<F::Elem>,
}

impl<F: Field> Cochain<F> {
    pub fn new(space: &CochainSpace, coefficients: SparseVector<F::Elem>) -> Result<Self, Error> {
        if coefficients.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "cochain of length {} in a space of dimension {}",
                coefficients.len(),
                space.len()
            )));
        }
        let mut seen = [false; 2];
        for (i, _) in coefficients.entries() {
            seen[space.parity(*i).bit()] = true;
        }
        let parity = match seen {
            [_, false] => CochainParity::Even,
            [false, true] => CochainParity::Odd,
            [true, true] => CochainParity::Mixed,
        };
        Ok(Cochain { degree: space.degree(), parity, coefficients })
    }

    /// Cochain with the given values on argument tuples in any order; the
    /// even arguments are sorted with sign, repeated even arguments are
    /// rejected.
    pub fn from_terms(
        field: &F,
        space: &CochainSpace,
        terms: &[(Vec<usize>, Vec<usize>, usize, F::Elem)],
    ) -> Result<Self, Error> {
        let mut entries = Vec::with_capacity(terms.len());
        for (even, odd, target, c) in terms {
            if even.len() + odd.len() != space.degree() {
                return Err(Error::DegreeMismatch { expected: space.degree(), found: even.len() + odd.len() });
            }
            let (idx, negate) = space
                .locate(even, odd, *target)
                .ok_or_else(|| Error::InvalidParameters("repeated even argument".into()))?;
            entries.push((idx, if negate { field.neg(c) } else { c.clone() }));
        }
        Self::new(space, SparseVector::from_entries(field, space.len(), entries))
    }

    pub fn zero(space: &CochainSpace) -> Self {
        Cochain { degree: space.degree(), parity: CochainParity::Even, coefficients: SparseVector::zero(space.len()) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn parity(&self) -> CochainParity {
        self.parity
    }
    pub fn coefficients(&self) -> &SparseVector<F::Elem> {
        &self.coefficients
    }
    pub fn into_coefficients(self) -> SparseVector<F::Elem> {
        self.coefficients
    }
}

fn binomial_table(n: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0usize; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 };
        }
    }
    t
}

#[derive(Clone, Debug)]
struct Block {
    q1: usize,
    offset: usize,
    odd_count: usize,
}

/// Canonical enumeration of the basis of `C^q`: blocks by `q1 = 0..=q`,
/// then lexicographic in `(even_args, odd_args, target)`.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    q: usize,
    d0: usize,
    d1: usize,
    module_dim: usize,
    module_even_dim: usize,
    blocks: Vec<Block>,
    tuples: Vec<(Vec<usize>, Vec<usize>)>,
    binom: Vec<Vec<usize>>,
}

impl CochainSpace {
    pub fn new<F: Field>(alg: &SuperAlgebra<F>, module: &GModule<F>, q: usize) -> Result<Self, Error> {
        check_module(alg, module)?;
        let (d0, d1) = (alg.even_dim(), alg.odd_dim());
        let binom = binomial_table(d0.max(d1 + q) + q + 1);
        let mut blocks = Vec::new();
        let mut tuples = Vec::new();
        for q1 in 0..=q {
            let q0 = q - q1;
            if q0 > d0 || (q1 > 0 && d1 == 0) {
                continue;
            }
            let evens = combinations(d0, q0);
            let odds: Vec<Vec<usize>> =
                multisets(d1, q1).into_iter().map(|h| h.into_iter().map(|i| i + d0).collect()).collect();
            blocks.push(Block { q1, offset: tuples.len(), odd_count: odds.len() });
            for g in &evens {
                for h in &odds {
                    tuples.push((g.clone(), h.clone()));
                }
            }
        }
        Ok(CochainSpace {
            q,
            d0,
            d1,
            module_dim: module.dim(),
            module_even_dim: module.even_dim(),
            blocks,
            tuples,
            binom,
        })
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.tuples.len() * self.module_dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of argument tuples (basis size divided by `dim A`).
    pub fn tuple_count(&self) -> usize {
        self.tuples.len()
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn element(&self, index: usize) -> CochainBasisElement {
        let (g, h) = &self.tuples[index / self.module_dim];
        CochainBasisElement { even_args: g.clone(), odd_args: h.clone(), target: index % self.module_dim }
    }

    pub fn elements(&self) -> Vec<CochainBasisElement> {
        (0..self.len()).map(|i| self.element(i)).collect()
    }

    pub fn parity(&self, index: usize) -> Parity {
        let q1 = self.tuples[index / self.module_dim].1.len();
        let target = index % self.module_dim;
        Parity::from_bit(q1 + usize::from(target >= self.module_even_dim))
    }

    /// Basis indices of the given parity, ascending.
    pub fn indices_of_parity(&self, parity: Parity) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parity(i) == parity).collect()
    }

    fn comb_rank(&self, c: &[usize], n: usize) -> usize {
        let k = c.len();
        let mut rank = 0;
        let mut start = 0;
        for (i, &ci) in c.iter().enumerate() {
            for j in start..ci {
                rank += self.binom[n - 1 - j][k - 1 - i];
            }
            start = ci + 1;
        }
        rank
    }

    /// Index of the tuple with sorted, duplicate-free `even` and sorted `odd`.
    fn tuple_index(&self, even: &[usize], odd: &[usize]) -> usize {
        let block = self.blocks.iter().find(|b| b.q1 == odd.len()).expect("degree matches");
        let er = self.comb_rank(even, self.d0);
        // Multisets of size k in d1 letters <-> k-subsets of d1 + k - 1 letters.
        let shifted: Vec<usize> = odd.iter().enumerate().map(|(i, &h)| h - self.d0 + i).collect();
        let or = if odd.is_empty() { 0 } else { self.comb_rank(&shifted, self.d1 + odd.len() - 1) };
        block.offset + er * block.odd_count + or
    }

    /// Basis index for arbitrary argument order: sorts the even arguments
    /// (tracking the sign) and the odd ones (no sign). Returns `None` if an
    /// even argument repeats, otherwise `(index, negate)`.
    pub fn locate(&self, even: &[usize], odd: &[usize], target: usize) -> Option<(usize, bool)> {
        let mut e = even.to_vec();
        let negate = sort_with_sign(&mut e)?;
        let mut o = odd.to_vec();
        o.sort_unstable();
        Some((self.tuple_index(&e, &o) * self.module_dim + target, negate))
    }
}

fn check_module<F: Field>(alg: &SuperAlgebra<F>, module: &GModule<F>) -> Result<(), Error> {
    if module.actions().len() != alg.dim() {
        return Err(Error::ModuleMismatch(format!(
            "module has {} actions, algebra has dimension {}",
            module.actions().len(),
            alg.dim()
        )));
    }
    Ok(())
}

/// Sorts in place; returns `Some(true)` for an odd permutation and `None`
/// when two entries coincide.
fn sort_with_sign(v: &mut [usize]) -> Option<bool> {
    let mut negate = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negate = !negate;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some(negate)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// The canonical basis of `C^q(g; A)`.
pub fn cochain_basis<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    q: usize,
) -> Result<Vec<CochainBasisElement>, Error> {
    Ok(CochainSpace::new(alg, module, q)?.elements())
}

fn push_signed<F: Field>(
    f: &F,
    out: &mut Vec<(usize, F::Elem)>,
    col: usize,
    negate: bool,
    coef: &F::Elem,
    sign_neg: bool,
) {
    let v = if negate != sign_neg { f.neg(coef) } else { coef.clone() };
    out.push((col, v));
}

/// Rows of `d` for one argument tuple of degree `q + 1`, one row per target.
fn rows_for_tuple<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    src: &CochainSpace,
    g: &[usize],
    h: &[usize],
) -> Vec<Vec<(usize, F::Elem)>> {
    let f = alg.field();
    let dim_a = module.dim();
    let (q0, q1) = (g.len(), h.len());
    // Terms that keep the target: (tuple base index, coefficient).
    let mut same_target: Vec<(usize, F::Elem)> = Vec::new();
    // Terms through the module action: (source column, row target, value).
    let mut acted: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); dim_a];
    let tuple_base = |even: &[usize], odd: &[usize]| src.locate(even, odd, 0);

    // (-1)^{s+t-1} c([g_s, g_t], g_1..ĝ_s..ĝ_t.., h)
    for s in 0..q0 {
        for t in s + 1..q0 {
            let br = alg.bracket(g[s], g[t]);
            if br.is_zero() {
                continue;
            }
            let sign_neg = (s + t + 1) % 2 == 1; // 1-based: s+t-1 with s,t shifted by one
            let mut args: Vec<usize> = Vec::with_capacity(q0 - 1);
            args.push(0);
            args.extend(g.iter().enumerate().filter(|(i, _)| *i != s && *i != t).map(|(_, &x)| x));
            for (k, c) in br.entries() {
                args[0] = *k;
                if let Some((base, negate)) = tuple_base(&args, h) {
                    push_signed(f, &mut same_target, base, negate, c, sign_neg);
                }
            }
        }
    }
    // (-1)^{s-1} c(g_1..ĝ_s.., [g_s, h_t], h_1..ĥ_t..)
    for s in 0..q0 {
        let rest_g: Vec<usize> = g.iter().enumerate().filter(|(i, _)| *i != s).map(|(_, &x)| x).collect();
        for t in 0..q1 {
            let br = alg.bracket(g[s], h[t]);
            if br.is_zero() {
                continue;
            }
            let sign_neg = s % 2 == 1;
            let mut rest_h: Vec<usize> = Vec::with_capacity(q1);
            rest_h.push(0);
            rest_h.extend(h.iter().enumerate().filter(|(i, _)| *i != t).map(|(_, &x)| x));
            for (k, c) in br.entries() {
                rest_h[0] = *k;
                if let Some((base, negate)) = tuple_base(&rest_g, &rest_h) {
                    push_signed(f, &mut same_target, base, negate, c, sign_neg);
                }
            }
        }
    }
    // + c([h_s, h_t], g_1..g_q0, h_1..ĥ_s..ĥ_t..)
    for s in 0..q1 {
        for t in s + 1..q1 {
            let br = alg.bracket(h[s], h[t]);
            if br.is_zero() {
                continue;
            }
            let rest_h: Vec<usize> =
                h.iter().enumerate().filter(|(i, _)| *i != s && *i != t).map(|(_, &x)| x).collect();
            let mut args: Vec<usize> = Vec::with_capacity(q0 + 1);
            args.push(0);
            args.extend_from_slice(g);
            for (k, c) in br.entries() {
                args[0] = *k;
                if let Some((base, negate)) = tuple_base(&args, &rest_h) {
                    push_signed(f, &mut same_target, base, negate, c, false);
                }
            }
        }
    }
    // (-1)^s g_s · c(g_1..ĝ_s.., h)
    for s in 0..q0 {
        let rest_g: Vec<usize> = g.iter().enumerate().filter(|(i, _)| *i != s).map(|(_, &x)| x).collect();
        let Some((base, negate)) = tuple_base(&rest_g, h) else { continue };
        let sign_neg = s % 2 == 0;
        for (row_t, col_u, c) in module.action(g[s]).triplets() {
            push_signed(f, &mut acted[row_t], base + col_u, negate, c, sign_neg);
        }
    }
    // (-1)^{q0-1} h_s · c(g, h_1..ĥ_s..)
    let sign_neg = q0 % 2 == 0;
    for s in 0..q1 {
        let rest_h: Vec<usize> = h.iter().enumerate().filter(|(i, _)| *i != s).map(|(_, &x)| x).collect();
        let Some((base, negate)) = tuple_base(g, &rest_h) else { continue };
        for (row_t, col_u, c) in module.action(h[s]).triplets() {
            push_signed(f, &mut acted[row_t], base + col_u, negate, c, sign_neg);
        }
    }

    acted
        .into_iter()
        .enumerate()
        .map(|(t, mut row)| {
            row.extend(same_target.iter().map(|(base, c)| (base + t, c.clone())));
            row.sort_by_key(|(c, _)| *c);
            crate::linalg::elim::merge_sorted(f, row)
        })
        .collect()
}

/// Matrix of `d: C^q -> C^{q+1}` in the canonical bases.
pub fn differential_matrix<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    q: usize,
) -> Result<SparseMatrix<F>, Error> {
    let src = CochainSpace::new(alg, module, q)?;
    let dst = CochainSpace::new(alg, module, q + 1)?;
    differential_between(alg, module, &src, &dst)
}

/// As [`differential_matrix`] with prebuilt spaces of degrees `q`, `q + 1`.
pub fn differential_between<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    src: &CochainSpace,
    dst: &CochainSpace,
) -> Result<SparseMatrix<F>, Error> {
    check_module(alg, module)?;
    if dst.degree() != src.degree() + 1 {
        return Err(Error::DegreeMismatch { expected: src.degree() + 1, found: dst.degree() });
    }
    let build = |tuple: &(Vec<usize>, Vec<usize>)| rows_for_tuple(alg, module, src, &tuple.0, &tuple.1);
    #[cfg(feature = "parallel")]
    let per_tuple: Vec<Vec<Vec<(usize, F::Elem)>>> = {
        use rayon::prelude::*;
        dst.tuples.par_iter().map(build).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_tuple: Vec<Vec<Vec<(usize, F::Elem)>>> = dst.tuples.iter().map(build).collect();
    let rows = per_tuple.into_iter().flatten().collect();
    Ok(SparseMatrix::from_rows_unchecked(alg.field(), src.len(), rows))
}

/// `dc` for a single cochain.
pub fn apply_differential<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    c: &Cochain<F>,
) -> Result<Cochain<F>, Error> {
    let d = differential_matrix(alg, module, c.degree())?;
    let dst = CochainSpace::new(alg, module, c.degree() + 1)?;
    Cochain::new(&dst, d.mul_vec(c.coefficients())?)
}
