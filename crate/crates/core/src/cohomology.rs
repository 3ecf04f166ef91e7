//! Cocycles, coboundaries and cohomology of the cochain complex, globally
//! and per weight block.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{Parity, SuperAlgebra};
use crate::cochain::{differential_between, Cochain, CochainSpace};
use crate::error::Error;
use crate::field::{Field, FieldDescriptor};
use crate::linalg::{kernel_basis, rank_with, solve, RankOptions, SparseMatrix, SparseVector, Subspace};
use crate::module::{restrict_to_subalgebra, GModule};
use crate::structure::{torus_weights, WeightGrading};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CohomologyOptions {
    /// Extract representative cocycles for every nonzero class space.
    pub representatives: bool,
    pub rank: RankOptions,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Dims {
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

impl Dims {
    fn new(cocycles: usize, coboundaries: usize) -> Dims {
        Dims { cocycles, coboundaries, cohomology: cocycles - coboundaries }
    }

    fn add(&mut self, other: Dims) {
        self.cocycles += other.cocycles;
        self.coboundaries += other.coboundaries;
        self.cohomology += other.cohomology;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDims {
    pub weight: Vec<i64>,
    pub parity: Parity,
    pub dims: Dims,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representative<F: Field> {
    pub parity: Parity,
    pub weight: Option<Vec<i64>>,
    pub cochain: Cochain<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyReport<F: Field> {
    pub algebra: String,
    pub module: String,
    pub field: FieldDescriptor,
    pub degree: usize,
    pub even: Dims,
    pub odd: Dims,
    /// Per `(weight, parity)` block, ordered by weight then parity.
    pub blocks: Option<Vec<BlockDims>>,
    pub representatives: Vec<Representative<F>>,
}

impl<F: Field> CohomologyReport<F> {
    pub fn total(&self) -> Dims {
        let mut t = self.even;
        t.add(self.odd);
        t
    }

    pub fn parity(&self, p: Parity) -> Dims {
        match p {
            Parity::Even => self.even,
            Parity::Odd => self.odd,
        }
    }

    /// Blocks with nonzero cohomology.
    pub fn nonzero_blocks(&self) -> Vec<&BlockDims> {
        self.blocks.iter().flatten().filter(|b| b.dims.cohomology > 0).collect()
    }
}

/// The spaces and differentials around degree `q`.
struct Complex<F: Field> {
    prev: Option<CochainSpace>,
    here: CochainSpace,
    next: CochainSpace,
    /// Transpose of `d_{q-1}`: row `c` lists `d e_c` for `e_c ∈ C^{q-1}`.
    d_prev_t: Option<SparseMatrix<F>>,
    /// Transpose of `d_q`.
    d_here_t: SparseMatrix<F>,
}

impl<F: Field> Complex<F> {
    fn new(alg: &SuperAlgebra<F>, module: &GModule<F>, q: usize) -> Result<Self, Error> {
        let here = CochainSpace::new(alg, module, q)?;
        let next = CochainSpace::new(alg, module, q + 1)?;
        let d_here_t = differential_between(alg, module, &here, &next)?.transpose();
        let (prev, d_prev_t) = if q == 0 {
            (None, None)
        } else {
            let prev = CochainSpace::new(alg, module, q - 1)?;
            let d = differential_between(alg, module, &prev, &here)?.transpose();
            (Some(prev), Some(d))
        };
        Ok(Complex { prev, here, next, d_prev_t, d_here_t })
    }

    /// Dimensions for the subcomplex spanned by `cols_here` in `C^q` and
    /// `cols_prev` in `C^{q-1}` (which must map into each other's span).
    fn dims(&self, cols_here: &[usize], cols_prev: &[usize], options: &CohomologyOptions) -> Dims {
        let z = cols_here.len() - rank_with(&self.d_here_t.select_rows(cols_here), options.rank);
        let b = match &self.d_prev_t {
            Some(d) if !cols_prev.is_empty() => rank_with(&d.select_rows(cols_prev), options.rank),
            _ => 0,
        };
        Dims::new(z, b)
    }

    /// Canonical representatives of `Z/B` on the given columns.
    fn representatives(&self, cols_here: &[usize], cols_prev: &[usize]) -> Vec<SparseVector<F::Elem>> {
        let f = self.d_here_t.field();
        let restricted = self.d_here_t.select_rows(cols_here).transpose();
        let n = self.here.len();
        let lift = |v: SparseVector<F::Elem>| {
            SparseVector::from_entries(f, n, v.into_entries().into_iter().map(|(i, c)| (cols_here[i], c)))
        };
        let mut image = Subspace::new(f, n);
        if let Some(d) = &self.d_prev_t {
            for &c in cols_prev {
                let v = d.row_vector(c);
                if !v.is_zero() {
                    image.insert(&v);
                }
            }
        }
        let mut span = image.clone();
        let mut reps = Vec::new();
        for v in kernel_basis(&restricted).into_iter().map(lift) {
            if span.insert(&v) {
                reps.push(image.reduce(&v));
            }
        }
        reps
    }
}

fn labels<F: Field>(alg: &SuperAlgebra<F>, module: &GModule<F>) -> (String, String) {
    (alg.label(), String::from(module.label()))
}

/// `Z^q`, `B^q`, `H^q` split by parity.
pub fn cohomology<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    q: usize,
    options: &CohomologyOptions,
) -> Result<CohomologyReport<F>, Error> {
    let cx = Complex::new(alg, module, q)?;
    let (algebra, module_label) = labels(alg, module);
    let mut report = CohomologyReport {
        algebra,
        module: module_label,
        field: alg.field().descriptor(),
        degree: q,
        even: Dims::default(),
        odd: Dims::default(),
        blocks: None,
        representatives: Vec::new(),
    };
    for parity in [Parity::Even, Parity::Odd] {
        let here = cx.here.indices_of_parity(parity);
        let prev = cx.prev.as_ref().map(|s| s.indices_of_parity(parity)).unwrap_or_default();
        let dims = cx.dims(&here, &prev, options);
        if options.representatives && dims.cohomology > 0 {
            for v in cx.representatives(&here, &prev) {
                report.representatives.push(Representative {
                    parity,
                    weight: None,
                    cochain: Cochain::new(&cx.here, v)?,
                });
            }
        }
        match parity {
            Parity::Even => report.even = dims,
            Parity::Odd => report.odd = dims,
        }
    }
    Ok(report)
}

fn cochain_weights(space: &CochainSpace, alg_grading: &WeightGrading, module_grading: &WeightGrading) -> Vec<Vec<i64>> {
    let mut per_tuple = Vec::with_capacity(space.tuple_count());
    let dim_a = space.module_dim();
    for t in 0..space.tuple_count() {
        let e = space.element(t * dim_a);
        let mut w = alg_grading.zero();
        for &a in e.even_args.iter().chain(&e.odd_args) {
            alg_grading.accumulate(&mut w, alg_grading.weight(a), -1);
        }
        per_tuple.push(w);
    }
    (0..space.len())
        .map(|i| {
            let mut w = per_tuple[i / dim_a].clone();
            alg_grading.accumulate(&mut w, module_grading.weight(i % dim_a), 1);
            w
        })
        .collect()
}

type BlockKey = (Vec<i64>, Parity);

fn group(space: &CochainSpace, weights: &[Vec<i64>]) -> (BTreeMap<BlockKey, Vec<usize>>, Vec<BlockKey>) {
    let mut map: BTreeMap<BlockKey, Vec<usize>> = BTreeMap::new();
    let keys: Vec<BlockKey> = (0..space.len()).map(|i| (weights[i].clone(), space.parity(i))).collect();
    for (i, k) in keys.iter().enumerate() {
        map.entry(k.clone()).or_default().push(i);
    }
    (map, keys)
}

fn check_homogeneous<F: Field>(
    d_t: &SparseMatrix<F>,
    col_keys: &[BlockKey],
    row_keys: &[BlockKey],
) -> Result<(), Error> {
    for (c, r, _) in d_t.triplets() {
        if col_keys[c] != row_keys[r] {
            return Err(Error::NonHomogeneousDifferential { row: r, col: c });
        }
    }
    Ok(())
}

/// Cohomology computed separately on each `(weight, parity)` block of the
/// cochain complex. `module_grading` defaults to `grading` (adjoint-type
/// modules whose basis is the algebra basis).
pub fn weight_blocks<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    q: usize,
    grading: &WeightGrading,
    module_grading: Option<&WeightGrading>,
    options: &CohomologyOptions,
) -> Result<CohomologyReport<F>, Error> {
    grading.require_additive(alg)?;
    let module_grading = module_grading.unwrap_or(grading);
    grading.check_module(alg, module, module_grading)?;
    let cx = Complex::new(alg, module, q)?;

    let (here_blocks, here_keys) = group(&cx.here, &cochain_weights(&cx.here, grading, module_grading));
    let (_, next_keys) = group(&cx.next, &cochain_weights(&cx.next, grading, module_grading));
    check_homogeneous(&cx.d_here_t, &here_keys, &next_keys)?;
    let prev_blocks = match (&cx.prev, &cx.d_prev_t) {
        (Some(prev), Some(d)) => {
            let (blocks, keys) = group(prev, &cochain_weights(prev, grading, module_grading));
            check_homogeneous(d, &keys, &here_keys)?;
            blocks
        }
        _ => BTreeMap::new(),
    };

    let empty = Vec::new();
    let work = |(key, cols): (&BlockKey, &Vec<usize>)| -> (BlockKey, Dims, Vec<SparseVector<F::Elem>>) {
        let prev = prev_blocks.get(key).unwrap_or(&empty);
        let dims = cx.dims(cols, prev, options);
        let reps =
            if options.representatives && dims.cohomology > 0 { cx.representatives(cols, prev) } else { Vec::new() };
        (key.clone(), dims, reps)
    };
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        let items: Vec<_> = here_blocks.iter().collect();
        items.into_par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = here_blocks.iter().map(work).collect();

    let (algebra, module_label) = labels(alg, module);
    let mut report = CohomologyReport {
        algebra,
        module: module_label,
        field: alg.field().descriptor(),
        degree: q,
        even: Dims::default(),
        odd: Dims::default(),
        blocks: Some(Vec::with_capacity(results.len())),
        representatives: Vec::new(),
    };
    for ((weight, parity), dims, reps) in results {
        match parity {
            Parity::Even => report.even.add(dims),
            Parity::Odd => report.odd.add(dims),
        }
        for v in reps {
            report.representatives.push(Representative {
                parity,
                weight: Some(weight.clone()),
                cochain: Cochain::new(&cx.here, v)?,
            });
        }
        report.blocks.as_mut().unwrap().push(BlockDims { weight, parity, dims });
    }
    Ok(report)
}

fn check_cochain<F: Field>(space: &CochainSpace, c: &Cochain<F>) -> Result<(), Error> {
    if c.coefficients().len() != space.len() {
        return Err(Error::DimensionMismatch(format!(
            "cochain has {} coordinates, C^{} has dimension {}",
            c.coefficients().len(),
            space.degree(),
            space.len()
        )));
    }
    Ok(())
}

/// `dc = 0`.
pub fn is_cocycle<F: Field>(alg: &SuperAlgebra<F>, module: &GModule<F>, c: &Cochain<F>) -> Result<bool, Error> {
    let here = CochainSpace::new(alg, module, c.degree())?;
    check_cochain(&here, c)?;
    let next = CochainSpace::new(alg, module, c.degree() + 1)?;
    let d = differential_between(alg, module, &here, &next)?;
    Ok(d.mul_vec(c.coefficients())?.is_zero())
}

/// Some `f` with `df = c`, or `None` if `c` is not a coboundary. Each parity
/// component is solved separately and the witnesses are added. In degree 0
/// there is no cochain space below, so the answer is always `None`.
pub fn is_coboundary<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    c: &Cochain<F>,
) -> Result<Option<Cochain<F>>, Error> {
    if !is_cocycle(alg, module, c)? {
        return Err(Error::NotACocycle);
    }
    let q = c.degree();
    if q == 0 {
        return Ok(None);
    }
    let f = alg.field();
    let here = CochainSpace::new(alg, module, q)?;
    let prev = CochainSpace::new(alg, module, q - 1)?;
    let d = differential_between(alg, module, &prev, &here)?;
    let mut witness = SparseVector::zero(prev.len());
    for parity in [Parity::Even, Parity::Odd] {
        let part: Vec<(usize, F::Elem)> =
            c.coefficients().entries().iter().filter(|(i, _)| here.parity(*i) == parity).cloned().collect();
        if part.is_empty() {
            continue;
        }
        let part = SparseVector::from_entries(f, here.len(), part);
        let cols = prev.indices_of_parity(parity);
        match solve(&d.select_columns(&cols), &part)? {
            None => return Ok(None),
            Some(x) => {
                let lifted =
                    SparseVector::from_entries(f, prev.len(), x.into_entries().into_iter().map(|(i, v)| (cols[i], v)));
                witness = witness.add(f, &lifted);
            }
        }
    }
    Ok(Some(Cochain::new(&prev, witness)?))
}

/// Dimensions of the weight-zero (torus-invariant) part of `H^b(n; A)` for
/// `b = 0..=max_degree`, summed over parity.
pub fn invariant_cohomology<F: Field>(
    n_alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    n_grading: &WeightGrading,
    module_grading: &WeightGrading,
    max_degree: usize,
) -> Result<Vec<usize>, Error> {
    let zero = n_grading.zero();
    (0..=max_degree)
        .map(|b| {
            let report =
                weight_blocks(n_alg, module, b, n_grading, Some(module_grading), &CohomologyOptions::default())?;
            Ok(report
                .blocks
                .unwrap_or_default()
                .iter()
                .filter(|blk| blk.weight == zero)
                .map(|blk| blk.dims.cohomology)
                .sum())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildSerreCheck {
    pub degree: usize,
    /// `dim H^q(r; r)`.
    pub lhs: usize,
    /// `Σ_{a+b=q} C(dim t, a) · dim H^b(n; r)^t`.
    pub rhs: usize,
    /// `dim H^b(n; r)^t` for `b = 0..=q`.
    pub invariant_dims: Vec<usize>,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Both sides of `H^q(r; r) ≅ ⊕_{a+b=q} Λ^a t ⊗ H^b(n; r)^t` for
/// `r = t ⋉ n` with `t` abelian and acting diagonally.
pub fn hochschild_serre_check<F: Field>(
    r: &SuperAlgebra<F>,
    torus: &[usize],
    nilradical: &[usize],
    q: usize,
) -> Result<HochschildSerreCheck, Error> {
    let mut all: Vec<usize> = torus.iter().chain(nilradical).copied().collect();
    all.sort_unstable();
    let expected: Vec<usize> = (0..r.dim()).collect();
    if all != expected {
        return Err(Error::InvalidDecomposition("torus and nilradical must partition the basis".into()));
    }
    for &t in torus {
        for &x in nilradical {
            if r.bracket(t, x).entries().iter().any(|(k, _)| !nilradical.contains(k)) {
                return Err(Error::InvalidDecomposition(format!(
                    "[{}, {}] leaves the nilradical",
                    r.name(t),
                    r.name(x)
                )));
            }
        }
    }
    let weights = torus_weights(r, torus)?;
    let lhs = cohomology(r, &GModule::adjoint(r), q, &CohomologyOptions::default())?.total().cohomology;
    let mut nil_sorted = nilradical.to_vec();
    nil_sorted.sort_unstable();
    let (n_alg, module) = restrict_to_subalgebra(r, &nil_sorted)?;
    let invariant_dims = invariant_cohomology(&n_alg, &module, &weights.restrict(&nil_sorted), &weights, q)?;
    let rhs = (0..=q).map(|b| binomial(torus.len(), q - b) * invariant_dims[b]).sum();
    Ok(HochschildSerreCheck { degree: q, lhs, rhs, invariant_dims })
}

/// Split of `Z^2` of one parity along `Λ²g0`, `g0 ⊗ g1`, `S²g1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcSplit {
    pub parity: Parity,
    pub cocycles: usize,
    /// `dim Z - dim(Z ∩ (Hom(g0⊗g1) ⊕ Hom(S²g1)))`.
    pub a: usize,
    /// `dim(Z ∩ (Hom(g0⊗g1) ⊕ Hom(S²g1))) - c`.
    pub b: usize,
    /// `dim(Z ∩ Hom(S²g1))`.
    pub c: usize,
    /// `dim(Z ∩ Hom(Λ²g0))`, `dim(Z ∩ Hom(g0⊗g1))`, `dim(Z ∩ Hom(S²g1))`.
    /// These need not add up to `dim Z`, since `d` mixes the summands.
    pub intersections: (usize, usize, usize),
}

/// Dimensions of the three summands of `Z^2` of the given parity, taken
/// along the filtration by the number of odd arguments so that they sum to
/// `dim Z^2`. The plain intersections with each summand are also reported.
pub fn abc_split<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    q: usize,
    parity: Parity,
    options: &CohomologyOptions,
) -> Result<AbcSplit, Error> {
    if q != 2 {
        return Err(Error::UnsupportedDegree(q));
    }
    let cx = Complex::new(alg, module, 2)?;
    let cols = cx.here.indices_of_parity(parity);
    let odd_count = |i: &usize| cx.here.element(*i).odd_args.len();
    let z_of = |subset: Vec<usize>| subset.len() - rank_with(&cx.d_here_t.select_rows(&subset), options.rank);
    let with = |k: usize| cols.iter().copied().filter(|i| odd_count(i) == k).collect::<Vec<_>>();
    let at_least_one = cols.iter().copied().filter(|i| odd_count(i) >= 1).collect::<Vec<_>>();
    let z = z_of(cols.clone());
    let z_ge1 = z_of(at_least_one);
    let (i0, i1, i2) = (z_of(with(0)), z_of(with(1)), z_of(with(2)));
    Ok(AbcSplit { parity, cocycles: z, a: z - z_ge1, b: z_ge1 - i2, c: i2, intersections: (i0, i1, i2) })
}

/// `B^q = d(C^{q-1})` as a subspace of `C^q`; zero in degree 0.
pub fn coboundary_space<F: Field>(alg: &SuperAlgebra<F>, module: &GModule<F>, q: usize) -> Result<Subspace<F>, Error> {
    let here = CochainSpace::new(alg, module, q)?;
    let mut image = Subspace::new(alg.field(), here.len());
    if q == 0 {
        return Ok(image);
    }
    let prev = CochainSpace::new(alg, module, q - 1)?;
    let d_t = differential_between(alg, module, &prev, &here)?.transpose();
    for r in 0..d_t.nrows() {
        let v = d_t.row_vector(r);
        if !v.is_zero() {
            image.insert(&v);
        }
    }
    Ok(image)
}

/// Dimension of the span of the classes `[c]` in `H^q`. All cochains must be
/// cocycles of one degree.
pub fn class_rank<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    cochains: &[Cochain<F>],
) -> Result<usize, Error> {
    let Some(first) = cochains.first() else {
        return Ok(0);
    };
    let q = first.degree();
    for c in cochains {
        if c.degree() != q {
            return Err(Error::DegreeMismatch { expected: q, found: c.degree() });
        }
        if !is_cocycle(alg, module, c)? {
            return Err(Error::NotACocycle);
        }
    }
    let mut span = coboundary_space(alg, module, q)?;
    Ok(cochains.iter().filter(|c| span.insert(c.coefficients())).count())
}

/// `[a] = λ[b]` for some nonzero `λ`, with both classes nonzero.
pub fn cohomologous_up_to_scalar<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    a: &Cochain<F>,
    b: &Cochain<F>,
) -> Result<bool, Error> {
    let pair = [a.clone(), b.clone()];
    Ok(class_rank(alg, module, &pair[..1])? == 1
        && class_rank(alg, module, &pair[1..])? == 1
        && class_rank(alg, module, &pair)? == 1)
}

/// The classes of `left` and `right` span the same subspace of `H^q`.
pub fn same_class_span<F: Field>(
    alg: &SuperAlgebra<F>,
    module: &GModule<F>,
    left: &[Cochain<F>],
    right: &[Cochain<F>],
) -> Result<bool, Error> {
    let joint: Vec<Cochain<F>> = left.iter().chain(right).cloned().collect();
    let r = class_rank(alg, module, &joint)?;
    Ok(class_rank(alg, module, left)? == r && class_rank(alg, module, right)? == r)
}
