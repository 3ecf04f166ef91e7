//! Lie superalgebras given by structure constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::field::Field;
use crate::linalg::{SparseMatrix, SparseVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: usize) -> Parity {
        if bit % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }

    /// `true` when `(-1)^(self*other) = -1`.
    pub fn both_odd(self, other: Parity) -> bool {
        self == Parity::Odd && other == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub index: usize,
    pub name: String,
    pub parity: Parity,
}

/// Which constructor produced an algebra, kept for reporting and for the
/// family-specific gradings and reference cocycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    ModelFiliform { n: usize, m: usize },
    SolvableModelFiliform { n: usize, m: usize },
    ModelNilpotent { ns: Vec<usize>, ms: Vec<usize> },
    SolvableModelNilpotent { ns: Vec<usize>, ms: Vec<usize> },
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::ModelFiliform { n, m } => write!(f, "L^{{{n},{m}}}"),
            Family::SolvableModelFiliform { n, m } => write!(f, "SL^{{{n},{m}}}"),
            Family::ModelNilpotent { ns, ms } => write!(f, "N({},1|{})", join(ns), join(ms)),
            Family::SolvableModelNilpotent { ns, ms } => write!(f, "SN({},1|{})", join(ns), join(ms)),
        }
    }
}

/// A finite-dimensional Lie superalgebra over `F`.
///
/// The basis lists all even vectors before all odd ones. Brackets are stored
/// once per unordered pair (`i < j`, plus `i == j` for odd `i`); the opposite
/// orientation is derived by super-antisymmetry and cached in a dense table.
#[derive(Clone, Debug)]
pub struct SuperAlgebra<F: Field> {
    field: F,
    basis: Vec<BasisVector>,
    even_dim: usize,
    constants: BTreeMap<(usize, usize), SparseVector<F::Elem>>,
    table: Vec<SparseVector<F::Elem>>,
    family: Option<Family>,
}

/// Result of [`SuperAlgebra::validate`]. Each field holds the first violation
/// found in lexicographic scan order, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// `(i, j, k)`: `[e_i, e_j]` has a component on `e_k` of the wrong parity.
    pub parity: Option<(usize, usize, usize)>,
    /// `(i, j)`: the two orientations disagree with super-antisymmetry.
    pub antisymmetry: Option<(usize, usize)>,
    /// `(i, j, k)` with `i <= j <= k`: graded Jacobi residual is nonzero.
    pub jacobi: Option<(usize, usize, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.parity.is_none() && self.antisymmetry.is_none() && self.jacobi.is_none()
    }
}

pub struct SuperAlgebraBuilder<F: Field> {
    field: F,
    basis: Vec<BasisVector>,
    even_dim: usize,
    constants: BTreeMap<(usize, usize), SparseVector<F::Elem>>,
    family: Option<Family>,
}

impl<F: Field> SuperAlgebraBuilder<F> {
    pub fn new<S: AsRef<str>>(field: &F, even_names: &[S], odd_names: &[S]) -> Result<Self, Error> {
        let mut basis = Vec::with_capacity(even_names.len() + odd_names.len());
        for (names, parity) in [(even_names, Parity::Even), (odd_names, Parity::Odd)] {
            for name in names {
                let name = name.as_ref();
                if basis.iter().any(|b: &BasisVector| b.name == name) {
                    return Err(Error::DuplicateName(name.into()));
                }
                basis.push(BasisVector { index: basis.len(), name: name.into(), parity });
            }
        }
        Ok(SuperAlgebraBuilder {
            field: field.clone(),
            basis,
            even_dim: even_names.len(),
            constants: BTreeMap::new(),
            family: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    /// Sets `[e_i, e_j] = Σ c_k e_k`. Either orientation may be given; the
    /// other is derived. Giving both orientations inconsistently is an error.
    pub fn bracket(&mut self, i: usize, j: usize, result: &[(usize, F::Elem)]) -> Result<&mut Self, Error> {
        let dim = self.basis.len();
        for idx in [i, j].into_iter().chain(result.iter().map(|(k, _)| *k)) {
            if idx >= dim {
                return Err(Error::IndexOutOfRange { index: idx, dim });
            }
        }
        let f = &self.field;
        let value = SparseVector::from_entries(f, dim, result.iter().cloned());
        if i == j && self.basis[i].parity == Parity::Even {
            if value.is_zero() {
                return Ok(self);
            }
            return Err(Error::NonzeroEvenSquare(self.basis[i].name.clone()));
        }
        let (key, value) = if i <= j {
            ((i, j), value)
        } else {
            let sign = orientation_sign(f, self.basis[i].parity, self.basis[j].parity);
            ((j, i), value.scale(f, &sign))
        };
        match self.constants.get(&key) {
            Some(existing) if *existing != value => {
                return Err(Error::OrientationConflict {
                    left: self.basis[i].name.clone(),
                    right: self.basis[j].name.clone(),
                })
            }
            _ => {}
        }
        if value.is_zero() {
            self.constants.remove(&key);
        } else {
            self.constants.insert(key, value);
        }
        Ok(self)
    }

    /// Integer-coefficient convenience wrapper around [`Self::bracket`].
    pub fn bracket_int(&mut self, i: usize, j: usize, result: &[(usize, i64)]) -> Result<&mut Self, Error> {
        let converted: Vec<(usize, F::Elem)> = result.iter().map(|(k, c)| (*k, self.field.from_i64(*c))).collect();
        self.bracket(i, j, &converted)
    }

    pub fn build(self) -> SuperAlgebra<F> {
        let dim = self.basis.len();
        let f = &self.field;
        let mut table = alloc::vec![SparseVector::zero(dim); dim * dim];
        for (&(i, j), v) in &self.constants {
            table[i * dim + j] = v.clone();
            if i != j {
                let sign = orientation_sign(f, self.basis[i].parity, self.basis[j].parity);
                table[j * dim + i] = v.scale(f, &sign);
            }
        }
        SuperAlgebra {
            field: self.field,
            basis: self.basis,
            even_dim: self.even_dim,
            constants: self.constants,
            table,
            family: self.family,
        }
    }
}

/// Factor relating `[e_j, e_i]` to `[e_i, e_j]`: `-(-1)^(|i||j|)`.
fn orientation_sign<F: Field>(f: &F, a: Parity, b: Parity) -> F::Elem {
    if a.both_odd(b) {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

impl<F: Field> SuperAlgebra<F> {
    pub fn builder<S: AsRef<str>>(
        field: &F,
        even_names: &[S],
        odd_names: &[S],
    ) -> Result<SuperAlgebraBuilder<F>, Error> {
        SuperAlgebraBuilder::new(field, even_names, odd_names)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn even_dim(&self) -> usize {
        self.even_dim
    }
    pub fn odd_dim(&self) -> usize {
        self.basis.len() - self.even_dim
    }
    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }
    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }
    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }
    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    /// Human-readable identifier: the family label, or the basis dimensions.
    pub fn label(&self) -> String {
        match &self.family {
            Some(fam) => fam.to_string(),
            None => format!("custom({}|{})", self.even_dim, self.odd_dim()),
        }
    }

    /// The stored (canonical-orientation) nonzero brackets.
    pub fn constants(&self) -> &BTreeMap<(usize, usize), SparseVector<F::Elem>> {
        &self.constants
    }

    /// `[e_i, e_j]` in basis coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> &SparseVector<F::Elem> {
        &self.table[i * self.dim() + j]
    }

    /// Bilinear extension of the bracket to arbitrary elements.
    pub fn bracket_elements(&self, x: &SparseVector<F::Elem>, y: &SparseVector<F::Elem>) -> SparseVector<F::Elem> {
        let f = &self.field;
        let mut acc = SparseVector::zero(self.dim());
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                let br = self.bracket(*i, *j);
                if !br.is_zero() {
                    acc = acc.axpy(f, &f.mul(a, b), br);
                }
            }
        }
        acc
    }

    /// `[e_i, y]`.
    pub fn bracket_basis_element(&self, i: usize, y: &SparseVector<F::Elem>) -> SparseVector<F::Elem> {
        let f = &self.field;
        let mut acc = SparseVector::zero(self.dim());
        for (j, b) in y.entries() {
            let br = self.bracket(i, *j);
            if !br.is_zero() {
                acc = acc.axpy(f, b, br);
            }
        }
        acc
    }

    /// Matrix of `ad_x = [x, ·]`; column `u` holds `[x, e_u]`.
    pub fn ad(&self, x: &SparseVector<F::Elem>) -> SparseMatrix<F> {
        let f = &self.field;
        let dim = self.dim();
        let mut triplets = Vec::new();
        for (i, a) in x.entries() {
            for u in 0..dim {
                for (k, c) in self.bracket(*i, u).entries() {
                    triplets.push((*k, u, f.mul(a, c)));
                }
            }
        }
        SparseMatrix::from_triplets(f, dim, dim, triplets).expect("indices within basis")
    }

    pub fn ad_basis(&self, i: usize) -> SparseMatrix<F> {
        self.ad(&SparseVector::unit(&self.field, self.dim(), i))
    }

    pub fn basis_vector(&self, i: usize) -> SparseVector<F::Elem> {
        SparseVector::unit(&self.field, self.dim(), i)
    }

    /// Parity of a homogeneous element; `None` for zero or mixed elements.
    pub fn element_parity(&self, x: &SparseVector<F::Elem>) -> Option<Parity> {
        let mut parities = x.entries().iter().map(|(i, _)| self.parity(*i));
        let first = parities.next()?;
        parities.all(|p| p == first).then_some(first)
    }

    pub fn is_even_element(&self, x: &SparseVector<F::Elem>) -> bool {
        x.entries().iter().all(|(i, _)| *i < self.even_dim)
    }

    pub fn is_odd_element(&self, x: &SparseVector<F::Elem>) -> bool {
        x.entries().iter().all(|(i, _)| *i >= self.even_dim)
    }

    fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> SparseVector<F::Elem> {
        let f = &self.field;
        let (a, b, c) = (self.parity(i), self.parity(j), self.parity(k));
        let sign = |p: Parity, q: Parity| if p.both_odd(q) { f.neg(&f.one()) } else { f.one() };
        let t1 = self.bracket_basis_element(i, self.bracket(j, k));
        let t2 = self.bracket_basis_element(j, self.bracket(k, i));
        let t3 = self.bracket_basis_element(k, self.bracket(i, j));
        SparseVector::zero(self.dim()).axpy(f, &sign(c, a), &t1).axpy(f, &sign(a, b), &t2).axpy(f, &sign(b, c), &t3)
    }

    /// Checks parity respect, super-antisymmetry and the graded Jacobi
    /// identity on all basis pairs and triples.
    pub fn validate(&self) -> ValidationReport {
        let dim = self.dim();
        let f = &self.field;
        let mut report = ValidationReport::default();
        'parity: for i in 0..dim {
            for j in 0..dim {
                let expected = self.parity(i).plus(self.parity(j));
                if let Some((k, _)) = self.bracket(i, j).entries().iter().find(|(k, _)| self.parity(*k) != expected) {
                    report.parity = Some((i, j, *k));
                    break 'parity;
                }
            }
        }
        'anti: for i in 0..dim {
            for j in i..dim {
                let sign = orientation_sign(f, self.parity(i), self.parity(j));
                if *self.bracket(j, i) != self.bracket(i, j).scale(f, &sign) {
                    report.antisymmetry = Some((i, j));
                    break 'anti;
                }
            }
        }
        'jacobi: for i in 0..dim {
            for j in i..dim {
                for k in j..dim {
                    if !self.jacobi_residual(i, j, k).is_zero() {
                        report.jacobi = Some((i, j, k));
                        break 'jacobi;
                    }
                }
            }
        }
        report
    }

    /// Rebuilds the algebra over another field by mapping every structure
    /// constant; fails if some constant has no image (e.g. a denominator
    /// divisible by `p`).
    pub fn map_field<G: Field>(
        &self,
        target: &G,
        map: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Result<SuperAlgebra<G>, Error> {
        let even: Vec<&str> = self.basis[..self.even_dim].iter().map(|b| b.name.as_str()).collect();
        let odd: Vec<&str> = self.basis[self.even_dim..].iter().map(|b| b.name.as_str()).collect();
        let mut builder = SuperAlgebraBuilder::new(target, &even, &odd)?;
        for (&(i, j), v) in &self.constants {
            let mut converted = Vec::with_capacity(v.nnz());
            for (k, c) in v.entries() {
                let image = map(c).ok_or_else(|| {
                    Error::InvalidParameters(format!(
                        "constant of [{}, {}] has no image in {}",
                        self.name(i),
                        self.name(j),
                        target.descriptor()
                    ))
                })?;
                converted.push((*k, image));
            }
            builder.bracket(i, j, &converted)?;
        }
        let mut out = builder.build();
        out.family = self.family.clone();
        Ok(out)
    }

    /// Replaces one stored constant; used to build deliberately broken
    /// algebras in tests and by file parsing.
    pub fn with_bracket(&self, i: usize, j: usize, result: &[(usize, F::Elem)]) -> Result<Self, Error> {
        let even: Vec<&str> = self.basis[..self.even_dim].iter().map(|b| b.name.as_str()).collect();
        let odd: Vec<&str> = self.basis[self.even_dim..].iter().map(|b| b.name.as_str()).collect();
        let mut builder = SuperAlgebraBuilder::new(&self.field, &even, &odd)?;
        let key = if i <= j { (i, j) } else { (j, i) };
        for (&(a, b), v) in &self.constants {
            if (a, b) != key {
                builder.bracket(a, b, v.entries())?;
            }
        }
        builder.bracket(i, j, result)?;
        Ok(builder.build())
    }
}
