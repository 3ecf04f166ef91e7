//! `[p|2p]`-structures: existence of a p-map on the even part, SR3
//! correction terms and the induced `[2p]` map on odd elements.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::SuperAlgebra;
use crate::error::Error;
use crate::families::solvable_model_filiform;
use crate::field::{Field, PrimeField};
use crate::linalg::{interpolate_polynomial, rank, solve, SparseMatrix, SparseVector};

/// Images `e_j^{[p]}` of the even basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct PMap<F: Field> {
    pub p: u64,
    pub images: Vec<SparseVector<F::Elem>>,
    /// `true` when each image is the only even solution of its SR1 system.
    pub unique: bool,
}

/// Why no p-map exists: the SR1 system for `e_index` restricted to the
/// brackets with `probes` is already inconsistent.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionWitness<F: Field> {
    pub index: usize,
    /// Basis vectors `e_c` whose equations `[f, e_c] = (ad e_index)^p (e_c)`
    /// form a minimal inconsistent subsystem.
    pub probes: Vec<usize>,
    /// Left multipliers `y` on the equations `(row r, probe c)`: `Σ y·ad(e_i)[r,c] = 0`
    /// for every even `i` while `Σ y·((ad e_index)^p)[r,c] != 0`.
    pub multipliers: Vec<((usize, usize), F::Elem)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PMapOutcome<F: Field> {
    Restricted(PMap<F>),
    Obstructed(ObstructionWitness<F>),
}

fn require_prime<F: Field>(alg: &SuperAlgebra<F>) -> Result<u64, Error> {
    match alg.field().characteristic() {
        0 => Err(Error::WrongField(alg.field().descriptor())),
        p => Ok(p),
    }
}

/// `ad(x)^k (v)`.
fn ad_power_apply<F: Field>(
    alg: &SuperAlgebra<F>,
    x: &SparseVector<F::Elem>,
    k: u64,
    v: &SparseVector<F::Elem>,
) -> SparseVector<F::Elem> {
    let mut out = v.clone();
    for _ in 0..k {
        out = alg.bracket_elements(x, &out);
    }
    out
}

/// Equations `[f, e_c]_r = target[r, c]` for `c ∈ probes`, in the unknowns
/// `f = Σ f_i e_i` over the even basis. Returns the system and row labels.
fn sr1_system<F: Field>(
    alg: &SuperAlgebra<F>,
    target: &SparseMatrix<F>,
    probes: &[usize],
) -> (SparseMatrix<F>, SparseVector<F::Elem>, Vec<(usize, usize)>) {
    let f = alg.field();
    let dim = alg.dim();
    let mut labels = Vec::new();
    let mut triplets = Vec::new();
    let mut rhs = Vec::new();
    for &c in probes {
        for r in 0..dim {
            let row = labels.len();
            let mut used = false;
            for i in 0..alg.even_dim() {
                if let Some(v) = alg.bracket(i, c).get(r) {
                    triplets.push((row, i, v.clone()));
                    used = true;
                }
            }
            let t = target.get(r, c);
            if !f.is_zero(&t) {
                rhs.push((row, t));
                used = true;
            }
            // Rows reading 0 = 0 are skipped.
            if used {
                labels.push((r, c));
            }
        }
    }
    let m = SparseMatrix::from_triplets(f, labels.len(), alg.even_dim(), triplets).expect("in range");
    let b = SparseVector::from_entries(f, labels.len(), rhs);
    (m, b, labels)
}

fn consistent<F: Field>(alg: &SuperAlgebra<F>, target: &SparseMatrix<F>, probes: &[usize]) -> bool {
    let (m, b, _) = sr1_system(alg, target, probes);
    solve(&m, &b).expect("shapes agree").is_some()
}

fn witness_for<F: Field>(alg: &SuperAlgebra<F>, index: usize, target: &SparseMatrix<F>) -> ObstructionWitness<F> {
    let f = alg.field();
    // Greedy growth in basis order, then pruning, gives a minimal probe set.
    let mut probes = Vec::new();
    for c in 0..alg.dim() {
        probes.push(c);
        if !consistent(alg, target, &probes) {
            break;
        }
    }
    let mut k = 0;
    while k < probes.len() {
        let mut fewer = probes.clone();
        fewer.remove(k);
        if !fewer.is_empty() && !consistent(alg, target, &fewer) {
            probes = fewer;
        } else {
            k += 1;
        }
    }
    // y with yᵀM = 0 and yᵀb = 1: solve [Mᵀ; bᵀ] y = (0, .., 0, 1).
    let (m, b, labels) = sr1_system(alg, target, &probes);
    let mut triplets: Vec<_> = m.triplets().map(|(r, c, v)| (c, r, v.clone())).collect();
    triplets.extend(b.entries().iter().map(|(r, v)| (m.ncols(), *r, v.clone())));
    let sys = SparseMatrix::from_triplets(f, m.ncols() + 1, m.nrows(), triplets).expect("in range");
    let e = SparseVector::from_entries(f, m.ncols() + 1, [(m.ncols(), f.one())]);
    let y = solve(&sys, &e).expect("shapes agree").expect("inconsistent system has a certificate");
    let multipliers = y.into_entries().into_iter().map(|(i, v)| (labels[i], v)).collect();
    ObstructionWitness { index, probes, multipliers }
}

impl<F: Field> ObstructionWitness<F> {
    /// Re-checks the certificate from scratch.
    pub fn verify(&self, alg: &SuperAlgebra<F>) -> bool {
        let f = alg.field();
        let Ok(p) = require_prime(alg) else { return false };
        let Ok(target) = alg.ad_basis(self.index).pow(p) else { return false };
        let combine = |m: &SparseMatrix<F>| {
            self.multipliers.iter().fold(f.zero(), |acc, ((r, c), y)| f.add(&acc, &f.mul(y, &m.get(*r, *c))))
        };
        (0..alg.even_dim()).all(|i| f.is_zero(&combine(&alg.ad_basis(i)))) && !f.is_zero(&combine(&target))
    }

    /// One line per probe: `(ad e_j)^p (e_c) = ...`.
    pub fn describe(&self, alg: &SuperAlgebra<F>) -> Vec<String> {
        let f = alg.field();
        let p = f.characteristic();
        let ej = alg.basis_vector(self.index);
        self.probes
            .iter()
            .map(|&c| {
                let v = ad_power_apply(alg, &ej, p, &alg.basis_vector(c));
                format!(
                    "(ad {})^{p}({}) = {}, which no [{}^[p], {}] can equal together with the other probes",
                    alg.name(self.index),
                    alg.name(c),
                    render(alg, &v),
                    alg.name(self.index),
                    alg.name(c)
                )
            })
            .collect()
    }
}

/// `2*X1 - Y3` style rendering of an element.
pub fn render<F: Field>(alg: &SuperAlgebra<F>, v: &SparseVector<F::Elem>) -> String {
    if v.is_zero() {
        return String::from("0");
    }
    let f = alg.field();
    let terms: Vec<String> =
        v.entries()
            .iter()
            .map(|(i, c)| {
                if f.is_one(c) {
                    String::from(alg.name(*i))
                } else {
                    format!("({})*{}", f.to_scalar(c), alg.name(*i))
                }
            })
            .collect();
    terms.join(" + ")
}

/// Solves `ad f_j = (ad e_j)^p` for every even basis vector `e_j`.
pub fn p_map_exists<F: Field>(alg: &SuperAlgebra<F>) -> Result<PMapOutcome<F>, Error> {
    let p = require_prime(alg)?;
    let all: Vec<usize> = (0..alg.dim()).collect();
    let mut images = Vec::with_capacity(alg.even_dim());
    let mut unique = true;
    for j in 0..alg.even_dim() {
        let target = alg.ad_basis(j).pow(p)?;
        let (m, b, _) = sr1_system(alg, &target, &all);
        match solve(&m, &b)? {
            None => return Ok(PMapOutcome::Obstructed(witness_for(alg, j, &target))),
            Some(x) => {
                unique &= rank(&m) == alg.even_dim();
                images.push(SparseVector::from_entries(alg.field(), alg.dim(), x.into_entries()));
            }
        }
    }
    Ok(PMapOutcome::Restricted(PMap { p, images, unique }))
}

/// `ad(e_j^{[p]}) = (ad e_j)^p` for every even basis vector.
pub fn verify_sr1<F: Field>(alg: &SuperAlgebra<F>, pmap: &PMap<F>) -> bool {
    pmap.images.len() == alg.even_dim()
        && (0..alg.even_dim()).all(|j| match alg.ad_basis(j).pow(pmap.p) {
            Ok(t) => alg.ad(&pmap.images[j]).to_dense() == t.to_dense(),
            Err(_) => false,
        })
}

/// `s_1(a,b), .., s_{p-1}(a,b)` from `(ad(λa+b))^{p-1}(a) = Σ i s_i λ^{i-1}`.
pub fn sr3_coefficients<F: Field>(
    alg: &SuperAlgebra<F>,
    a: &SparseVector<F::Elem>,
    b: &SparseVector<F::Elem>,
) -> Result<Vec<SparseVector<F::Elem>>, Error> {
    let p = require_prime(alg)?;
    if !alg.is_even_element(a) || !alg.is_even_element(b) {
        return Err(Error::NotEven);
    }
    let f = alg.field();
    let dim = alg.dim();
    let samples: Vec<(F::Elem, SparseVector<F::Elem>)> = (0..p - 1)
        .map(|l| {
            let lam = f.from_i64(l as i64);
            let x = b.axpy(f, &lam, a);
            (lam, ad_power_apply(alg, &x, p - 1, a))
        })
        .collect();
    let mut coeffs: Vec<Vec<(usize, F::Elem)>> = alloc::vec![Vec::new(); (p - 1) as usize];
    for k in 0..dim {
        let points: Vec<(F::Elem, F::Elem)> =
            samples.iter().map(|(lam, v)| (lam.clone(), v.get(k).cloned().unwrap_or_else(|| f.zero()))).collect();
        if points.iter().all(|(_, y)| f.is_zero(y)) {
            continue;
        }
        for (deg, c) in interpolate_polynomial(f, &points)?.into_iter().enumerate() {
            if !f.is_zero(&c) {
                coeffs[deg].push((k, c));
            }
        }
    }
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(deg, entries)| {
            let inv_i = f.inv(&f.from_i64(deg as i64 + 1)).expect("i < p");
            SparseVector::from_entries(f, dim, entries.into_iter().map(|(k, c)| (k, f.mul(&c, &inv_i))))
        })
        .collect())
}

impl<F: Field> PMap<F> {
    pub fn new(p: u64, images: Vec<SparseVector<F::Elem>>) -> Self {
        PMap { p, images, unique: false }
    }

    /// `x^{[p]}` for an arbitrary even `x`, extended from the basis images by
    /// `(αa)^{[p]} = α^p a^{[p]}` and the SR3 expansion, adding one basis
    /// term at a time.
    pub fn apply(&self, alg: &SuperAlgebra<F>, x: &SparseVector<F::Elem>) -> Result<SparseVector<F::Elem>, Error> {
        if !alg.is_even_element(x) {
            return Err(Error::NotEven);
        }
        let f = alg.field();
        let mut partial = SparseVector::zero(alg.dim());
        let mut result = SparseVector::zero(alg.dim());
        for (j, c) in x.entries() {
            let term = SparseVector::from_entries(f, alg.dim(), [(*j, c.clone())]);
            result = result.axpy(f, &f.pow(c, self.p), &self.images[*j]);
            if !partial.is_zero() {
                for s in sr3_coefficients(alg, &partial, &term)? {
                    result = result.add(f, &s);
                }
            }
            partial = partial.add(f, &term);
        }
        Ok(result)
    }
}

/// Checks `(a+b)^{[p]} = a^{[p]} + b^{[p]} + Σ s_i(a,b)` through `ad`: both
/// the SR3 right-hand side and the extended map at `a + b` must have adjoint
/// `(ad(a+b))^p`.
pub fn verify_sr3<F: Field>(
    alg: &SuperAlgebra<F>,
    pmap: &PMap<F>,
    a: &SparseVector<F::Elem>,
    b: &SparseVector<F::Elem>,
) -> Result<bool, Error> {
    let f = alg.field();
    let sum = a.add(f, b);
    let expected = alg.ad(&sum).pow(pmap.p)?.to_dense();
    let mut rhs = pmap.apply(alg, a)?.add(f, &pmap.apply(alg, b)?);
    for s in sr3_coefficients(alg, a, b)? {
        rhs = rhs.add(f, &s);
    }
    let lhs = pmap.apply(alg, &sum)?;
    Ok(alg.ad(&rhs).to_dense() == expected && alg.ad(&lhs).to_dense() == expected)
}

/// `y^{[2p]} = (y²)^{[p]}` with `y² = ½[y, y]`.
pub fn two_p_map<F: Field>(
    alg: &SuperAlgebra<F>,
    pmap: &PMap<F>,
    y: &SparseVector<F::Elem>,
) -> Result<SparseVector<F::Elem>, Error> {
    require_prime(alg)?;
    if !alg.is_odd_element(y) {
        return Err(Error::NotOdd);
    }
    let f = alg.field();
    let half = f.inv(&f.from_i64(2)).expect("odd characteristic");
    let square = alg.bracket_elements(y, y).scale(f, &half);
    pmap.apply(alg, &square)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryEntry {
    pub n: usize,
    pub m: usize,
    pub restricted: bool,
    /// `m <= p && n <= p + 1`.
    pub predicate: bool,
    /// For restricted entries: the map is unique and sends `T_i -> T_i`,
    /// `X_j -> 0`. Always `true` for obstructed entries.
    pub expected_map: bool,
    /// `(ad T1)^p = ad T1`.
    pub fermat: bool,
    /// Index of the basis vector carrying the obstruction, if any.
    pub obstruction_at: Option<usize>,
}

impl BoundaryEntry {
    pub fn passes(&self) -> bool {
        self.restricted == self.predicate && self.expected_map && self.fermat
    }
}

fn boundary_entry(field: &PrimeField, n: usize, m: usize) -> Result<BoundaryEntry, Error> {
    let p = field.modulus() as usize;
    let g = solvable_model_filiform(field, n, m)?;
    let t1 = g.index_of("T1").expect("SL basis");
    let ad_t1 = g.ad_basis(t1);
    let fermat = ad_t1.pow(p as u64)?.to_dense() == ad_t1.to_dense();
    let outcome = p_map_exists(&g)?;
    let (restricted, expected_map, obstruction_at) =
        match &outcome {
            PMapOutcome::Restricted(pm) => {
                let proof_map = (0..g.even_dim()).all(|j| {
                    if j >= n {
                        pm.images[j] == g.basis_vector(j)
                    } else {
                        pm.images[j].is_zero()
                    }
                });
                (true, pm.unique && proof_map && verify_sr1(&g, pm), None)
            }
            PMapOutcome::Obstructed(w) => (false, w.verify(&g), Some(w.index)),
        };
    Ok(BoundaryEntry { n, m, restricted, predicate: m <= p && n <= p + 1, expected_map, fermat, obstruction_at })
}

/// Runs [`p_map_exists`] on `SL^{n,m}` over `F_p` for the whole grid, in
/// row-major `(n, m)` order.
pub fn theorem_boundary_scan(
    p: u64,
    n_range: core::ops::RangeInclusive<usize>,
    m_range: core::ops::RangeInclusive<usize>,
) -> Result<Vec<BoundaryEntry>, Error> {
    let field = PrimeField::new(p)?;
    let grid: Vec<(usize, usize)> = n_range.flat_map(|n| m_range.clone().map(move |m| (n, m))).collect();
    #[cfg(feature = "parallel")]
    let out: Vec<Result<BoundaryEntry, Error>> = {
        use rayon::prelude::*;
        grid.par_iter().map(|&(n, m)| boundary_entry(&field, n, m)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let out: Vec<Result<BoundaryEntry, Error>> = grid.iter().map(|&(n, m)| boundary_entry(&field, n, m)).collect();
    out.into_iter().collect()
}
