//! The reproduction suite: every numbered check behind `reproduce-paper` and
//! the `acceptance` integration test.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use supercohom_core::cochain::{apply_differential, differential_matrix, Cochain, CochainSpace};
use supercohom_core::cohomology::{
    class_rank, cohomology, hochschild_serre_check, is_coboundary, is_cocycle, same_class_span, weight_blocks,
    CohomologyOptions, Dims,
};
use supercohom_core::families::{
    degree_grading, model_filiform, model_nilpotent, modular_cocycle, solvable_model_filiform,
    solvable_model_nilpotent, ModularCocycle,
};
use supercohom_core::linalg::{kernel_basis, rank, Subspace};
use supercohom_core::restricted::theorem_boundary_scan;
use supercohom_core::structure::{central_sequences, characteristic_sequence, DEFAULT_TRIAL_BUDGET};
use supercohom_core::{Error, Field, GModule, Parity, PrimeField, Rationals, SparseMatrix, SparseVector, SuperAlgebra};

/// Seed for the randomized property checks.
pub const PROPERTY_SEED: u64 = 0x0005_eed0_9a11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:<4} {} ({} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.detail
        )
    }
}

#[derive(Clone, Debug)]
pub struct ReproduceOptions {
    /// Primes for the char-p cohomology checks.
    pub primes: Vec<u64>,
    /// Largest `n` in the characteristic-zero `SL^{n,m}` grid.
    pub max_n: usize,
    /// Adds `p = 7` and `p = 11` to the char-p checks.
    pub long: bool,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions { primes: vec![3, 5], max_n: 6, long: false }
    }
}

fn timed(id: &str, title: &str, f: impl FnOnce() -> Result<(bool, String), Error>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id: id.into(),
        title: title.into(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn dims_by_degree<F: Field>(g: &SuperAlgebra<F>, degrees: &[usize]) -> Result<Vec<(Dims, Dims)>, Error> {
    let ad = GModule::adjoint(g);
    degrees
        .iter()
        .map(|&q| {
            let r = cohomology(g, &ad, q, &CohomologyOptions::default())?;
            Ok((r.even, r.odd))
        })
        .collect()
}

fn filiform_grid(max_n: usize) -> Vec<(usize, usize)> {
    (3..=max_n).flat_map(|n| (2..=5).map(move |m| (n, m))).collect()
}

fn grid_failures(max_n: usize, degrees: &[usize]) -> Result<(usize, Vec<String>), Error> {
    let grid = filiform_grid(max_n);
    let rows: Vec<Result<Option<String>, Error>> = grid
        .par_iter()
        .map(|&(n, m)| {
            let g = solvable_model_filiform(&Rationals, n, m)?;
            let dims = dims_by_degree(&g, degrees)?;
            let bad: Vec<String> = degrees
                .iter()
                .zip(&dims)
                .filter(|(_, (e, o))| e.cohomology + o.cohomology != 0)
                .map(|(q, (e, o))| format!("H^{q} = {}|{}", e.cohomology, o.cohomology))
                .collect();
            Ok((!bad.is_empty()).then(|| format!("SL^{{{n},{m}}}: {}", bad.join(", "))))
        })
        .collect();
    let mut failures = Vec::new();
    for r in rows {
        failures.extend(r?);
    }
    Ok((grid.len(), failures))
}

/// `H^2(SL^{n,m}; SL^{n,m}) = 0` over ℚ in both parities, `3 <= n <= max_n`,
/// `2 <= m <= 5`.
pub fn rigidity_over_rationals(max_n: usize) -> CriterionResult {
    timed("1", "rigidity of SL^{n,m} over Q", || {
        let (count, failures) = grid_failures(max_n, &[2])?;
        Ok(summarize(count, "H^2 even = odd = 0", failures))
    })
}

/// `H^0 = H^1 = 0` on the same grid.
pub fn completeness_over_rationals(max_n: usize) -> CriterionResult {
    timed("2", "completeness of SL^{n,m} over Q", || {
        let (count, failures) = grid_failures(max_n, &[0, 1])?;
        Ok(summarize(count, "H^0 = H^1 = 0", failures))
    })
}

fn summarize(count: usize, what: &str, failures: Vec<String>) -> (bool, String) {
    if failures.is_empty() {
        (true, format!("{count} algebras, {what} on each"))
    } else {
        (false, format!("{} of {count} fail: {}", failures.len(), failures.join("; ")))
    }
}

pub const SN_CASES: [(&[usize], &[usize]); 3] = [(&[2], &[2]), (&[3, 2], &[2, 1]), (&[2, 2], &[3])];

/// `H^0 = H^1 = H^2 = 0` for the three `SN` instances.
pub fn sn_completeness() -> CriterionResult {
    timed("3", "completeness and rigidity of SN", || {
        let rows: Vec<Result<Option<String>, Error>> = SN_CASES
            .par_iter()
            .map(|(ns, ms)| {
                let g = solvable_model_nilpotent(&Rationals, ns, ms)?;
                let dims = dims_by_degree(&g, &[0, 1, 2])?;
                let h: Vec<usize> = dims.iter().map(|(e, o)| e.cohomology + o.cohomology).collect();
                Ok(h.iter().any(|&d| d != 0).then(|| format!("{}: H^0..2 = {h:?}", g.label())))
            })
            .collect();
        let mut failures = Vec::new();
        for r in rows {
            failures.extend(r?);
        }
        Ok(summarize(SN_CASES.len(), "H^0 = H^1 = H^2 = 0", failures))
    })
}

/// Outcome of one `H^2(SL^{n,m})` computation over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularCase {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub expected: usize,
    pub even: usize,
    pub odd: usize,
    /// Nonzero blocks as `(weight, parity, dim)`.
    pub blocks: Vec<(Vec<i64>, Parity, usize)>,
    /// The computed representatives span the same classes as the reference
    /// cocycles, and the references are independent nontrivial classes.
    pub representatives_match: bool,
}

impl ModularCase {
    pub fn dims_ok(&self) -> bool {
        self.even + self.odd == self.expected
    }

    /// All of `H^2` sits in the block of degree `-p`.
    pub fn localized(&self) -> bool {
        let target = vec![-(self.p as i64)];
        self.blocks.iter().all(|(w, _, _)| *w == target)
    }

    pub fn passes(&self) -> bool {
        self.dims_ok() && self.localized() && self.representatives_match
    }

    fn describe(&self) -> String {
        let blocks: Vec<String> =
            self.blocks.iter().map(|(w, par, d)| format!("{d} in weight {w:?} {}", par_name(*par))).collect();
        format!(
            "(n,m)=({},{}) dim H^2={} (expected {}) [{}] reps {}",
            self.n,
            self.m,
            self.even + self.odd,
            self.expected,
            blocks.join(", "),
            if self.representatives_match { "match" } else { "DO NOT match" }
        )
    }
}

fn par_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

/// The reference cocycles that exist on `SL^{n,m}` over `F_p`: the odd
/// shift when `m = p`, the even shift when `n = p + 1`.
pub fn reference_cocycles<F: Field>(g: &SuperAlgebra<F>) -> Result<Vec<Cochain<F>>, Error> {
    let p = g.field().characteristic() as usize;
    let Some(supercohom_core::Family::SolvableModelFiliform { n, m }) = g.family() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    if *m == p {
        out.push(modular_cocycle(g, ModularCocycle::OddShift)?);
    }
    if *n == p + 1 {
        out.push(modular_cocycle(g, ModularCocycle::EvenShift)?);
    }
    Ok(out)
}

pub fn modular_case(p: u64, n: usize, m: usize) -> Result<ModularCase, Error> {
    let field = PrimeField::new(p)?;
    let g = solvable_model_filiform(&field, n, m)?;
    let ad = GModule::adjoint(&g);
    let grading = degree_grading(&g)?;
    let options = CohomologyOptions { representatives: true, ..Default::default() };
    let report = weight_blocks(&g, &ad, 2, &grading, None, &options)?;
    let blocks = report.nonzero_blocks().into_iter().map(|b| (b.weight.clone(), b.parity, b.dims.cohomology)).collect();
    let refs = reference_cocycles(&g)?;
    let reps: Vec<Cochain<PrimeField>> = report.representatives.iter().map(|r| r.cochain.clone()).collect();
    let refs_independent = match class_rank(&g, &ad, &refs) {
        Ok(r) => r == refs.len(),
        Err(Error::NotACocycle) => false,
        Err(e) => return Err(e),
    };
    let representatives_match = refs_independent && same_class_span(&g, &ad, &reps, &refs)?;
    let pp = p as usize;
    Ok(ModularCase {
        p,
        n,
        m,
        expected: usize::from(m == pp) + usize::from(n == pp + 1),
        even: report.even.cohomology,
        odd: report.odd.cohomology,
        blocks,
        representatives_match,
    })
}

/// The four cases `(n, m) ∈ {p, p+1} × {p-1, p}`.
pub fn modular_cases(p: u64) -> Result<Vec<ModularCase>, Error> {
    let p = p as usize;
    let cases = [(p, p - 1), (p, p), (p + 1, p - 1), (p + 1, p)];
    cases.par_iter().map(|&(n, m)| modular_case(p as u64, n, m)).collect()
}

fn modular_criterion(id: &str, title: &str, primes: &[u64], store: &mut Vec<ModularCase>) -> CriterionResult {
    let mut cases = Vec::new();
    let result = timed(id, title, || {
        for &p in primes {
            cases.extend(modular_cases(p)?);
        }
        let failures: Vec<String> =
            cases.iter().filter(|c| !(c.dims_ok() && c.representatives_match)).map(|c| c.describe()).collect();
        if failures.is_empty() {
            let dims: Vec<String> = cases.iter().map(|c| (c.even + c.odd).to_string()).collect();
            Ok((true, format!("p in {primes:?}: dims {} with matching representatives", dims.join("/"))))
        } else {
            Ok((false, failures.join("; ")))
        }
    });
    store.extend(cases);
    result
}

/// `H^2(SL^{n,m})` over `F_3` at the four boundary cases.
pub fn modular_p3(store: &mut Vec<ModularCase>) -> CriterionResult {
    modular_criterion("4", "H^2 of SL^{n,m} over F_3", &[3], store)
}

/// The same over `F_5`, and over `F_7`, `F_11` when `long` is set.
pub fn modular_p5(long: bool, store: &mut Vec<ModularCase>) -> CriterionResult {
    let primes: &[u64] = if long { &[5, 7, 11] } else { &[5] };
    let fields: Vec<String> = primes.iter().map(|p| format!("F_{p}")).collect();
    modular_criterion("5", &format!("H^2 of SL^{{n,m}} over {}", fields.join(", ")), primes, store)
}

/// The same pattern at a further prime, as evidence for all primes.
pub fn modular_extra(p: u64, store: &mut Vec<ModularCase>) -> CriterionResult {
    modular_criterion(&format!("5+{p}"), &format!("H^2 pattern at p = {p}"), &[p], store)
}

/// Every nonzero modular `H^2` lies in the block of degree `-p`.
pub fn weight_localization(cases: &[ModularCase]) -> CriterionResult {
    timed("6", "localization of modular H^2 in degree -p", || {
        let nonzero: Vec<&ModularCase> = cases.iter().filter(|c| c.even + c.odd > 0).collect();
        let failures: Vec<String> = nonzero.iter().filter(|c| !c.localized()).map(|c| c.describe()).collect();
        if cases.is_empty() {
            return Ok((false, "no modular cases were run".into()));
        }
        if failures.is_empty() {
            Ok((true, format!("{} nonzero cases, all even and in weight -p", nonzero.len())))
        } else {
            Ok((false, failures.join("; ")))
        }
    })
}

/// `SL^{n,m}` is restricted over `F_p` iff `m <= p` and `n <= p + 1`.
pub fn restrictedness_boundary() -> CriterionResult {
    timed("7", "restrictedness boundary", || {
        let mut total = 0;
        let mut failures = Vec::new();
        for (p, n_max, m_max) in [(3u64, 6usize, 5usize), (5, 8, 7)] {
            for e in theorem_boundary_scan(p, 2..=n_max, 1..=m_max)? {
                total += 1;
                if !e.passes() {
                    failures.push(format!(
                        "p={p} (n,m)=({},{}): restricted={} predicate={} map={} fermat={}",
                        e.n, e.m, e.restricted, e.predicate, e.expected_map, e.fermat
                    ));
                }
            }
        }
        if failures.is_empty() {
            Ok((true, format!("{total} grid points agree with m <= p and n <= p+1; p-maps unique, T->T, X->0")))
        } else {
            Ok((false, failures.join("; ")))
        }
    })
}

/// Indices of the even degree-zero basis vectors of a family instance.
pub fn family_torus<F: Field>(g: &SuperAlgebra<F>) -> Result<Vec<usize>, Error> {
    let grading = degree_grading(g)?;
    Ok((0..g.even_dim()).filter(|&i| grading.weight(i)[0] == 0).collect())
}

/// Hochschild–Serre factorization for `q = 1, 2`.
pub fn hochschild_serre() -> CriterionResult {
    timed("8", "Hochschild-Serre factorization", || {
        let algebras = vec![
            solvable_model_filiform(&Rationals, 3, 2)?,
            solvable_model_filiform(&Rationals, 4, 3)?,
            solvable_model_nilpotent(&Rationals, &[3, 2], &[2, 1])?,
        ];
        let rows: Vec<Result<String, Error>> = algebras
            .par_iter()
            .flat_map(|g| [1usize, 2].into_par_iter().map(move |q| (g, q)))
            .map(|(g, q)| {
                let torus = family_torus(g)?;
                let nil: Vec<usize> = (0..g.dim()).filter(|i| !torus.contains(i)).collect();
                let hs = hochschild_serre_check(g, &torus, &nil, q)?;
                let tag = if hs.lhs == hs.rhs { "" } else { "MISMATCH " };
                Ok(format!("{tag}{} q={q}: {} = {}", g.label(), hs.lhs, hs.rhs))
            })
            .collect();
        let rows: Vec<String> = rows.into_iter().collect::<Result<_, _>>()?;
        Ok((!rows.iter().any(|r| r.starts_with("MISMATCH")), rows.join("; ")))
    })
}

/// Algebras the suite constructs over ℚ.
fn rational_instances(max_n: usize) -> Result<Vec<SuperAlgebra<Rationals>>, Error> {
    let mut out = Vec::new();
    for (n, m) in filiform_grid(max_n) {
        out.push(solvable_model_filiform(&Rationals, n, m)?);
    }
    for (ns, ms) in SN_CASES {
        out.push(solvable_model_nilpotent(&Rationals, ns, ms)?);
    }
    out.push(model_filiform(&Rationals, 4, 3)?);
    out.push(model_nilpotent(&Rationals, &[3, 2], &[])?);
    Ok(out)
}

/// Algebras the suite constructs over `F_p` for the default primes.
fn modular_instances() -> Result<Vec<SuperAlgebra<PrimeField>>, Error> {
    let mut out = Vec::new();
    for p in [3usize, 5] {
        let f = PrimeField::new(p as u64)?;
        for (n, m) in [(p, p - 1), (p, p), (p + 1, p - 1), (p + 1, p)] {
            out.push(solvable_model_filiform(&f, n, m)?);
        }
    }
    Ok(out)
}

/// `d_{q+1} d_q = 0` for `q = 0, 1, 2`.
pub fn d_squared_zero<F: Field>(g: &SuperAlgebra<F>) -> Result<bool, Error> {
    let ad = GModule::adjoint(g);
    let mut d = differential_matrix(g, &ad, 0)?;
    for q in 1..=3 {
        let next = differential_matrix(g, &ad, q)?;
        if !next.mul(&d)?.is_zero() {
            return Ok(false);
        }
        d = next;
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug)]
enum RandomField {
    Q,
    P(u64),
}

fn random_family<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> Result<SuperAlgebra<F>, Error> {
    const NS: [&[usize]; 4] = [&[2], &[3], &[2, 2], &[3, 2]];
    const MS: [&[usize]; 4] = [&[], &[1], &[2], &[2, 1]];
    Ok(match rng.gen_range(0..4) {
        0 => model_filiform(field, rng.gen_range(2..=5), rng.gen_range(1..=4))?,
        1 => solvable_model_filiform(field, rng.gen_range(3..=5), rng.gen_range(1..=4))?,
        2 => model_nilpotent(field, NS[rng.gen_range(0..4)], MS[rng.gen_range(0..4)])?,
        _ => solvable_model_nilpotent(field, NS[rng.gen_range(0..4)], MS[rng.gen_range(0..4)])?,
    })
}

fn blockwise_matches<F: Field>(g: &SuperAlgebra<F>, q: usize) -> Result<bool, Error> {
    let ad = GModule::adjoint(g);
    let opts = CohomologyOptions::default();
    let direct = cohomology(g, &ad, q, &opts)?;
    let blocks = weight_blocks(g, &ad, q, &degree_grading(g)?, None, &opts)?;
    Ok(direct.even == blocks.even && direct.odd == blocks.odd)
}

fn random_matrix<F: Field>(rng: &mut ChaCha8Rng, field: &F) -> SparseMatrix<F> {
    let (rows, cols) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
    let density = rng.gen_range(0.1..0.7);
    let mut triplets = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(density) {
                let num = field.from_i64(rng.gen_range(-4..=4));
                let den = field.from_i64(rng.gen_range(1..=3));
                if let Some(v) = field.div(&num, &den) {
                    triplets.push((r, c, v));
                }
            }
        }
    }
    SparseMatrix::from_triplets(field, rows, cols, triplets).expect("entries in range")
}

/// `rank + nullity = columns`, with every kernel vector in the kernel and
/// the kernel basis independent.
fn rank_nullity<F: Field>(m: &SparseMatrix<F>) -> Result<bool, Error> {
    let kernel = kernel_basis(m);
    for v in &kernel {
        if !m.mul_vec(v)?.is_zero() {
            return Ok(false);
        }
    }
    let independent = Subspace::spanned_by(m.field(), m.ncols(), &kernel).dim() == kernel.len();
    Ok(independent && rank(m) + kernel.len() == m.ncols() && rank(&m.transpose()) == rank(m))
}

fn random_cochain<F: Field>(rng: &mut ChaCha8Rng, field: &F, space: &CochainSpace) -> Result<Cochain<F>, Error> {
    let terms = rng.gen_range(1..=6);
    let entries: Vec<(usize, F::Elem)> =
        (0..terms).map(|_| (rng.gen_range(0..space.len()), field.from_i64(rng.gen_range(-3..=3)))).collect();
    Cochain::new(space, SparseVector::from_entries(field, space.len(), entries))
}

/// `df` is a cocycle and `is_coboundary` finds a witness `w` with `dw = df`.
fn coboundary_round_trip<F: Field>(rng: &mut ChaCha8Rng, g: &SuperAlgebra<F>) -> Result<bool, Error> {
    let ad = GModule::adjoint(g);
    let c1 = CochainSpace::new(g, &ad, 1)?;
    let f = random_cochain(rng, g.field(), &c1)?;
    let df = apply_differential(g, &ad, &f)?;
    if !is_cocycle(g, &ad, &df)? {
        return Ok(false);
    }
    Ok(match is_coboundary(g, &ad, &df)? {
        Some(w) => apply_differential(g, &ad, &w)? == df,
        None => false,
    })
}

/// Structural property suites.
pub fn property_suites(max_n: usize) -> CriterionResult {
    timed("9", "property suites", || {
        let mut failures = Vec::new();

        let rational = rational_instances(max_n)?;
        let modular = modular_instances()?;
        let dd: Vec<Result<Option<String>, Error>> = rational
            .par_iter()
            .map(|g| Ok((!d_squared_zero(g)?).then(|| g.label())))
            .chain(modular.par_iter().map(|g| Ok((!d_squared_zero(g)?).then(|| format!("{} over F_p", g.label())))))
            .collect();
        for r in dd {
            if let Some(label) = r? {
                failures.push(format!("d∘d != 0 on {label}"));
            }
        }
        let invalid = rational.iter().filter(|g| !g.validate().is_valid()).count()
            + modular.iter().filter(|g| !g.validate().is_valid()).count();
        if invalid > 0 {
            failures.push(format!("{invalid} family instances fail validation"));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
        let mut described = Vec::new();
        for _ in 0..10 {
            let field = [RandomField::Q, RandomField::P(3), RandomField::P(5), RandomField::P(7)][rng.gen_range(0..4)];
            let q = rng.gen_range(0..=2);
            let (label, ok) = match field {
                RandomField::Q => {
                    let g = random_family(&mut rng, &Rationals)?;
                    (format!("{} over Q q={q}", g.label()), blockwise_matches(&g, q)?)
                }
                RandomField::P(p) => {
                    let g = random_family(&mut rng, &PrimeField::new(p)?)?;
                    (format!("{} over F_{p} q={q}", g.label()), blockwise_matches(&g, q)?)
                }
            };
            if !ok {
                failures.push(format!("blockwise != direct on {label}"));
            }
            described.push(label);
        }

        for field in [RandomField::Q, RandomField::P(3), RandomField::P(7)] {
            for _ in 0..100 {
                let ok = match field {
                    RandomField::Q => rank_nullity(&random_matrix(&mut rng, &Rationals))?,
                    RandomField::P(p) => rank_nullity(&random_matrix(&mut rng, &PrimeField::new(p)?))?,
                };
                if !ok {
                    failures.push(format!("rank/nullity failure over {field:?}"));
                }
            }
        }

        let over_q = solvable_model_filiform(&Rationals, 4, 3)?;
        let over_3 = solvable_model_filiform(&PrimeField::new(3)?, 4, 3)?;
        for i in 0..50 {
            let ok = if i % 2 == 0 {
                coboundary_round_trip(&mut rng, &over_q)?
            } else {
                coboundary_round_trip(&mut rng, &over_3)?
            };
            if !ok {
                failures.push(format!("coboundary round trip {i} failed"));
            }
        }

        let instances = rational.len() + modular.len();
        if failures.is_empty() {
            Ok((
                true,
                format!(
                    "d∘d = 0 and validation on {instances} instances; blockwise = direct on 10 random instances; \
                     300 rank/nullity checks; 50 coboundary round trips"
                ),
            ))
        } else {
            Ok((false, failures.join("; ")))
        }
    })
}

/// Dense exact rank, independent of the sparse eliminator.
pub fn dense_rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !field.is_zero(&rows[r][col])) else { continue };
        rows.swap(rank, pivot);
        let inv = field.inv(&rows[rank][col]).expect("nonzero pivot");
        for r in rank + 1..rows.len() {
            if field.is_zero(&rows[r][col]) {
                continue;
            }
            let factor = field.mul(&rows[r][col], &inv);
            for c in col..ncols {
                let t = field.mul(&factor, &rows[rank][c]);
                rows[r][c] = field.sub(&rows[r][c], &t);
            }
        }
        rank += 1;
    }
    rank
}

fn dense_mul<F: Field>(field: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter().zip(b).fold(field.zero(), |acc, (x, brow)| field.add(&acc, &field.mul(x, &brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Jordan type of a nilpotent dense matrix from the ranks of its powers.
pub fn dense_jordan_type<F: Field>(field: &F, a: &[Vec<F::Elem>]) -> Vec<usize> {
    let n = a.len();
    let mut ranks = vec![n];
    let mut power = a.to_vec();
    loop {
        let r = dense_rank(field, power.clone());
        ranks.push(r);
        if r == 0 || ranks.len() > n + 1 {
            break;
        }
        power = dense_mul(field, &power, a);
    }
    let mut sizes = Vec::new();
    for k in 1..ranks.len() {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_next = ranks.get(k + 1).map_or(0, |r| ranks[k] - r);
        sizes.extend(std::iter::repeat(k).take(at_least_k - at_least_next));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Brute-force characteristic sequence: maximum Jordan types of `ad_x` on
/// each parity over every `x` with coordinates in `{-1, 0, 1}` outside
/// `[g0, g0]`.
pub fn brute_force_characteristic_sequence<F: Field>(g: &SuperAlgebra<F>) -> (Vec<usize>, Vec<usize>) {
    let f = g.field();
    let d0 = g.even_dim();
    let derived: Vec<Vec<F::Elem>> =
        (0..d0).flat_map(|i| (0..d0).map(move |j| (i, j))).map(|(i, j)| to_dense(f, g.bracket(i, j), d0)).collect();
    let derived_rank = dense_rank(f, derived.clone());
    let mut best = (Vec::new(), Vec::new());
    let total = 3usize.pow(d0 as u32);
    for code in 1..total {
        let mut c = code;
        let coords: Vec<i64> = (0..d0)
            .map(|_| {
                let digit = (c % 3) as i64 - 1;
                c /= 3;
                digit
            })
            .collect();
        let x = SparseVector::from_entries(f, g.dim(), coords.iter().enumerate().map(|(i, &v)| (i, f.from_i64(v))));
        let mut with_x = derived.clone();
        with_x.push(to_dense(f, &x, d0));
        if dense_rank(f, with_x) == derived_rank {
            continue;
        }
        let ad = g.ad(&x).to_dense();
        let block = |lo: usize, hi: usize| -> Vec<Vec<F::Elem>> { (lo..hi).map(|r| ad[r][lo..hi].to_vec()).collect() };
        let even = dense_jordan_type(f, &block(0, d0));
        let odd = dense_jordan_type(f, &block(d0, g.dim()));
        best.0 = best.0.max(even);
        best.1 = best.1.max(odd);
    }
    best
}

fn to_dense<F: Field>(f: &F, v: &SparseVector<F::Elem>, len: usize) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); len];
    for (i, c) in v.entries() {
        if *i < len {
            out[*i] = c.clone();
        }
    }
    out
}

/// Brute-force s-nilindex: lengths of `g0 ⊃ [g0, g0] ⊃ ...` and
/// `g1 ⊃ [g0, g1] ⊃ ...` down to zero, tracked as dense spanning sets.
pub fn brute_force_s_nilindex<F: Field>(g: &SuperAlgebra<F>) -> (usize, usize) {
    let f = g.field();
    let run = |start: Vec<SparseVector<F::Elem>>| {
        let mut current = start;
        let mut k = 0;
        while dense_rank(f, current.iter().map(|v| to_dense(f, v, g.dim())).collect()) > 0 {
            current = (0..g.even_dim())
                .flat_map(|i| current.iter().map(move |v| (i, v)))
                .map(|(i, v)| g.bracket_basis_element(i, v))
                .collect();
            k += 1;
            assert!(k <= g.dim() + 1, "not nilpotent");
        }
        k
    };
    let units = |r: std::ops::Range<usize>| r.map(|i| g.basis_vector(i)).collect::<Vec<_>>();
    (run(units(0..g.even_dim())), run(units(g.even_dim()..g.dim())))
}

/// Characteristic sequences and s-nilindex against brute force.
pub fn structural_invariants() -> CriterionResult {
    timed("10", "characteristic sequence and s-nilindex", || {
        let l43 = model_filiform(&Rationals, 4, 3)?;
        let cs = characteristic_sequence(&l43, DEFAULT_TRIAL_BUDGET)?;
        let s = central_sequences(&l43).ok_or(Error::NotNilpotent)?.s_nilindex;
        let (be, bo) = brute_force_characteristic_sequence(&l43);
        let bs = brute_force_s_nilindex(&l43);
        let n32 = model_nilpotent(&Rationals, &[3, 2], &[])?;
        let cs_n = characteristic_sequence(&n32, DEFAULT_TRIAL_BUDGET)?;
        let (bn, _) = brute_force_characteristic_sequence(&n32);
        let ok = cs.even_part == [3, 1]
            && cs.odd_part == [3]
            && be == cs.even_part
            && bo == cs.odd_part
            && s == (3, 3)
            && bs == s
            && cs_n.even_part == [3, 2, 1]
            && bn == cs_n.even_part;
        Ok((
            ok,
            format!(
                "L^{{4,3}}: gz = ({:?}|{:?}) brute force ({be:?}|{bo:?}), s-nilindex {s:?} brute force {bs:?}; \
                 {}: even part {:?} brute force {bn:?}",
                cs.even_part,
                cs.odd_part,
                n32.label(),
                cs_n.even_part
            ),
        ))
    })
}

/// Runs every criterion in order.
pub fn run_all(options: &ReproduceOptions) -> Vec<CriterionResult> {
    let mut out =
        vec![rigidity_over_rationals(options.max_n), completeness_over_rationals(options.max_n), sn_completeness()];
    let mut cases = Vec::new();
    if options.primes.contains(&3) {
        out.push(modular_p3(&mut cases));
    }
    if options.primes.contains(&5) {
        out.push(modular_p5(options.long, &mut cases));
    }
    let covered: &[u64] = if options.long { &[3, 5, 7, 11] } else { &[3, 5] };
    for &p in options.primes.iter().filter(|p| !covered.contains(p)) {
        out.push(modular_extra(p, &mut cases));
    }
    out.push(weight_localization(&cases));
    out.push(restrictedness_boundary());
    out.push(hochschild_serre());
    out.push(property_suites(options.max_n));
    out.push(structural_invariants());
    out
}
