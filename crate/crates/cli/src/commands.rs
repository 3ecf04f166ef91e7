//! Subcommand grammar and handlers.

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use supercohom_core::cochain::{differential_matrix, Cochain, CochainSpace};
use supercohom_core::cohomology::{
    cohomology, hochschild_serre_check, is_coboundary, same_class_span, weight_blocks, CohomologyOptions,
    CohomologyReport, Dims,
};
use supercohom_core::families::{degree_grading, ordering_warning};
use supercohom_core::linalg::kernel_basis;
use supercohom_core::restricted::{p_map_exists, two_p_map, verify_sr1, PMapOutcome};
use supercohom_core::structure::{central_sequences, characteristic_sequence, torus_weights, DEFAULT_TRIAL_BUDGET};
use supercohom_core::{Error, Field, GModule, Parity, PrimeField, SparseVector, SuperAlgebra, WeightGrading};

use crate::any::AnyAlgebra;
use crate::error::{CliError, Result};
use crate::report::{algebra_descriptor, cochain, element, scalar, sha256_hex, Report};
use crate::reproduce::{reference_cocycles, run_all, ReproduceOptions};
use crate::spec_file::{self, AlgebraSpecFile, FamilySpec, FieldSpec};
use crate::with_algebra;

#[derive(Debug, Parser)]
#[command(name = "supercohom", version, about = "Exact cohomology of Lie superalgebras")]
pub struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    L,
    #[value(name = "SL")]
    Sl,
    N,
    #[value(name = "SN")]
    Sn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModuleKind {
    #[default]
    Adjoint,
    Trivial,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the superalgebra axioms of an algebra file.
    Validate {
        /// Algebra file, or `-` for stdin.
        input: String,
    },
    /// Build a family instance and write it as an algebra file.
    Family {
        #[arg(value_enum, ignore_case = true)]
        kind: FamilyKind,
        /// `n m` for L and SL; comma-separated block sizes `ns ms` for N and
        /// SN (use `-` for an empty list).
        first: String,
        second: String,
        /// `Q` or `Fp:<p>`.
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Cocycle, coboundary and cohomology dimensions in one degree.
    Cohomology {
        input: String,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Split by weight using the family degree grading, or `--torus`.
        #[arg(long)]
        blocks: bool,
        #[arg(long)]
        representatives: bool,
        /// Even basis names spanning a diagonal torus for `--blocks`.
        #[arg(long, value_delimiter = ',')]
        torus: Vec<String>,
        #[arg(long, value_enum, default_value_t = ModuleKind::Adjoint)]
        module: ModuleKind,
    },
    /// Centre, superderivations and inner-derivation witnesses.
    Derivations { input: String },
    /// Characteristic sequence and s-nilindex of a nilpotent algebra.
    Charseq {
        input: String,
        #[arg(long, default_value_t = DEFAULT_TRIAL_BUDGET)]
        trials: usize,
    },
    /// Decide whether a [p|2p]-structure exists.
    Restricted {
        input: String,
        #[arg(long)]
        p: u64,
    },
    /// Both sides of the torus factorization of H^q(r; r).
    HsCheck {
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        torus: Vec<String>,
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Run the full reproduction suite and print a pass/fail table.
    ReproducePaper {
        #[arg(long, value_delimiter = ',', default_value = "3,5")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Also run p = 7 and p = 11.
        #[arg(long)]
        long: bool,
    },
}

/// Text to print and whether the command succeeded.
pub struct Output {
    pub text: String,
    pub success: bool,
}

struct Input {
    algebra: AnyAlgebra,
    sha256: String,
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    if path == "-" {
        std::io::stdin().read_to_end(&mut bytes).map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
    } else {
        bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    }
    Ok(bytes)
}

fn load(path: &str, validate: bool) -> Result<Input> {
    let bytes = read_input(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{path}: not UTF-8")))?;
    let algebra = if validate { spec_file::parse(&text)? } else { spec_file::parse_unvalidated(&text)? };
    Ok(Input { algebra, sha256: sha256_hex(&bytes) })
}

fn report<F: Field>(
    g: &SuperAlgebra<F>,
    sha: &str,
    command: &str,
    parameters: Value,
    results: Value,
    start: Instant,
) -> Report {
    Report {
        command: command.into(),
        algebra: algebra_descriptor(g, Some(sha)),
        field: g.field().descriptor().to_string(),
        parameters,
        results,
        timing_ms: start.elapsed().as_millis() as u64,
    }
}

fn finish(report: Report, success: bool) -> Output {
    Output { text: report.to_canonical_string(), success }
}

fn lookup<F: Field>(g: &SuperAlgebra<F>, names: &[String]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| g.index_of(n.trim()).ok_or_else(|| CliError::Usage(format!("unknown basis element {n:?}"))))
        .collect()
}

/// Core errors that report a failed mathematical precondition rather than a
/// malformed request.
fn classify(e: Error) -> CliError {
    match e {
        Error::NotNilpotent
        | Error::NotClosed { .. }
        | Error::NonDiagonalTorus { .. }
        | Error::TorusNotAbelian { .. }
        | Error::NonIntegralWeight(_)
        | Error::NonAdditiveGrading { .. }
        | Error::NonHomogeneousDifferential { .. }
        | Error::NotACocycle
        | Error::InvalidDecomposition(_) => CliError::Math(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

pub fn dispatch(cli: &Cli) -> Result<Output> {
    let start = Instant::now();
    match &cli.command {
        Command::Validate { input } => {
            let inp = load(input, false)?;
            with_algebra!(&inp.algebra, g => validate(g, &inp.sha256, start))
        }
        Command::Family { kind, first, second, field } => family(*kind, [first, second], field),
        Command::Cohomology { input, q, blocks, representatives, torus, module } => {
            let inp = load(input, true)?;
            let args =
                CohomologyArgs { q: *q, blocks: *blocks, representatives: *representatives, torus, module: *module };
            with_algebra!(&inp.algebra, g => cohomology_cmd(g, &inp.sha256, &args, start))
        }
        Command::Derivations { input } => {
            let inp = load(input, true)?;
            with_algebra!(&inp.algebra, g => derivations(g, &inp.sha256, start))
        }
        Command::Charseq { input, trials } => {
            let inp = load(input, true)?;
            with_algebra!(&inp.algebra, g => charseq(g, &inp.sha256, *trials, start))
        }
        Command::Restricted { input, p } => {
            let inp = load(input, true)?;
            let g = inp.algebra.over_prime(*p)?;
            restricted(&g, &inp.sha256, start)
        }
        Command::HsCheck { input, torus, q } => {
            let inp = load(input, true)?;
            with_algebra!(&inp.algebra, g => hs_check(g, &inp.sha256, torus, *q, start))
        }
        Command::ReproducePaper { primes, max_n, long } => reproduce(primes, *max_n, *long),
    }
}

fn names<F: Field>(g: &SuperAlgebra<F>, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| g.name(i).to_string()).collect()
}

fn validate<F: Field>(g: &SuperAlgebra<F>, sha: &str, start: Instant) -> Result<Output> {
    let r = g.validate();
    let results = json!({
        "valid": r.is_valid(),
        "parity_violation": r.parity.map(|(i, j, k)| names(g, &[i, j, k])),
        "antisymmetry_violation": r.antisymmetry.map(|(i, j)| names(g, &[i, j])),
        "jacobi_violation": r.jacobi.map(|(i, j, k)| names(g, &[i, j, k])),
    });
    Ok(finish(report(g, sha, "validate", json!({}), results, start), r.is_valid()))
}

fn parse_list(text: &str) -> Result<Vec<usize>> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    if t.is_empty() || t == "-" {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("expected a list of integers, got {text:?}"))))
        .collect()
}

fn family(kind: FamilyKind, params: [&String; 2], field: &str) -> Result<Output> {
    let field = FieldSpec::parse_cli(field)?;
    let int =
        |s: &String| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("expected an integer, got {s:?}")));
    let spec = match kind {
        FamilyKind::L => FamilySpec::L { n: int(params[0])?, m: int(params[1])? },
        FamilyKind::Sl => FamilySpec::SL { n: int(params[0])?, m: int(params[1])? },
        FamilyKind::N => FamilySpec::N { ns: parse_list(params[0])?, ms: parse_list(params[1])? },
        FamilyKind::Sn => FamilySpec::SN { ns: parse_list(params[0])?, ms: parse_list(params[1])? },
    };
    if let FamilySpec::N { ns, ms } | FamilySpec::SN { ns, ms } = &spec {
        if let Some(w) = ordering_warning(ns, ms) {
            eprintln!("warning: {w}");
        }
    }
    let any = spec.build_any(&field).map_err(|e| match e {
        CliError::Core(c) => CliError::Usage(c.to_string()),
        other => other,
    })?;
    let file = with_algebra!(&any, g => AlgebraSpecFile::from_algebra(g));
    let mut text = serde_json::to_string_pretty(&file).expect("spec files serialise");
    text.push('\n');
    Ok(Output { text, success: true })
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn dims_json(d: &Dims) -> Value {
    json!({"dim": d.cohomology, "cocycles": d.cocycles, "coboundaries": d.coboundaries})
}

struct CohomologyArgs<'a> {
    q: usize,
    blocks: bool,
    representatives: bool,
    torus: &'a [String],
    module: ModuleKind,
}

fn module_for<F: Field>(g: &SuperAlgebra<F>, kind: ModuleKind) -> GModule<F> {
    match kind {
        ModuleKind::Adjoint => GModule::adjoint(g),
        ModuleKind::Trivial => GModule::trivial(g),
    }
}

fn cohomology_json<F: Field>(g: &SuperAlgebra<F>, module: &GModule<F>, r: &CohomologyReport<F>) -> Value {
    let total = r.total();
    let mut out = json!({
        "degree": r.degree,
        "module": module.label(),
        "even": dims_json(&r.even),
        "odd": dims_json(&r.odd),
        "total": dims_json(&total),
        "representatives": r.representatives.iter().map(|rep| json!({
            "parity": parity_name(rep.parity),
            "weight": rep.weight,
            "terms": cochain(g, module, &rep.cochain),
        })).collect::<Vec<_>>(),
    });
    if let Some(blocks) = &r.blocks {
        out["blocks"] = blocks
            .iter()
            .map(|b| {
                json!({
                    "weight": b.weight,
                    "parity": parity_name(b.parity),
                    "dim": b.dims.cohomology,
                    "cocycles": b.dims.cocycles,
                    "coboundaries": b.dims.coboundaries,
                })
            })
            .collect();
    }
    out
}

fn cohomology_cmd<F: Field>(g: &SuperAlgebra<F>, sha: &str, args: &CohomologyArgs, start: Instant) -> Result<Output> {
    let module = module_for(g, args.module);
    let options = CohomologyOptions { representatives: args.representatives, ..Default::default() };
    let r = if args.blocks || !args.torus.is_empty() {
        let grading = if args.torus.is_empty() {
            degree_grading(g)
                .map_err(|_| CliError::Usage("--blocks needs a family instance or an explicit --torus".into()))?
        } else {
            torus_weights(g, &lookup(g, args.torus)?).map_err(classify)?
        };
        let module_grading = match args.module {
            ModuleKind::Adjoint => None,
            ModuleKind::Trivial => Some(WeightGrading::from_weights(vec![grading.zero()], grading.modulus())?),
        };
        weight_blocks(g, &module, args.q, &grading, module_grading.as_ref(), &options).map_err(classify)?
    } else {
        cohomology(g, &module, args.q, &options).map_err(classify)?
    };
    let mut results = cohomology_json(g, &module, &r);
    if args.representatives && args.q == 2 && args.module == ModuleKind::Adjoint {
        let refs = reference_cocycles(g).map_err(classify)?;
        if !refs.is_empty() {
            let reps: Vec<Cochain<F>> = r.representatives.iter().map(|x| x.cochain.clone()).collect();
            let listed: Vec<Value> = refs.iter().map(|c| json!(cochain(g, &module, c))).collect();
            results["reference_cocycles"] = Value::Array(listed);
            results["representatives_match_reference"] =
                Value::Bool(same_class_span(g, &module, &reps, &refs).unwrap_or(false));
        }
    }
    let params = json!({
        "q": args.q,
        "blocks": args.blocks,
        "representatives": args.representatives,
        "torus": args.torus,
        "module": match args.module { ModuleKind::Adjoint => "adjoint", ModuleKind::Trivial => "trivial" },
    });
    Ok(finish(report(g, sha, "cohomology", params, results, start), true))
}

fn derivations<F: Field>(g: &SuperAlgebra<F>, sha: &str, start: Instant) -> Result<Output> {
    let ad = GModule::adjoint(g);
    let options = CohomologyOptions { representatives: true, ..Default::default() };
    let h0 = cohomology(g, &ad, 0, &options)?;
    let h1 = cohomology(g, &ad, 1, &options)?;
    let c1 = CochainSpace::new(g, &ad, 1)?;
    let mut listed = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let cols = c1.indices_of_parity(parity);
        let d = differential_matrix(g, &ad, 1)?.select_columns(&cols);
        for v in kernel_basis(&d) {
            let lifted = SparseVector::from_entries(
                g.field(),
                c1.len(),
                v.into_entries().into_iter().map(|(i, c)| (cols[i], c)),
            );
            let der = Cochain::new(&c1, lifted)?;
            let witness = is_coboundary(g, &ad, &der)?;
            listed.push(json!({
                "parity": parity_name(parity),
                "terms": cochain(g, &ad, &der),
                "inner": witness.is_some(),
                "witness": witness.map(|w| element(g, w.coefficients())),
            }));
        }
    }
    let centre: Vec<Value> = h0.representatives.iter().map(|r| element(g, r.cochain.coefficients())).collect();
    let results = json!({
        "h0": {"even": dims_json(&h0.even), "odd": dims_json(&h0.odd)},
        "h1": {"even": dims_json(&h1.even), "odd": dims_json(&h1.odd)},
        "centre": centre,
        "derivations": listed,
        "outer": h1.representatives.iter().map(|r| json!({
            "parity": parity_name(r.parity),
            "terms": cochain(g, &ad, &r.cochain),
        })).collect::<Vec<_>>(),
        "complete": h0.total().cohomology == 0 && h1.total().cohomology == 0,
    });
    Ok(finish(report(g, sha, "derivations", json!({}), results, start), true))
}

fn charseq<F: Field>(g: &SuperAlgebra<F>, sha: &str, trials: usize, start: Instant) -> Result<Output> {
    let params = json!({"trials": trials});
    let Some(seq) = central_sequences(g) else {
        let results = json!({
            "nilpotent": false,
            "reason": "the lower central series stabilises at a nonzero ideal",
        });
        return Ok(finish(report(g, sha, "charseq", params, results, start), false));
    };
    let cs = characteristic_sequence(g, trials)?;
    let results = json!({
        "nilpotent": true,
        "nilindex": seq.nilindex,
        "s_nilindex": [seq.s_nilindex.0, seq.s_nilindex.1],
        "characteristic_sequence": {"even": cs.even_part, "odd": cs.odd_part},
    });
    Ok(finish(report(g, sha, "charseq", params, results, start), true))
}

fn restricted(g: &SuperAlgebra<PrimeField>, sha: &str, start: Instant) -> Result<Output> {
    let f = g.field();
    let params = json!({"p": f.modulus()});
    let results = match p_map_exists(g).map_err(classify)? {
        PMapOutcome::Restricted(pm) => {
            let images: serde_json::Map<String, Value> =
                (0..g.even_dim()).map(|j| (g.name(j).to_string(), element(g, &pm.images[j]))).collect();
            let mut odd = serde_json::Map::new();
            for i in g.even_dim()..g.dim() {
                let y = g.basis_vector(i);
                odd.insert(g.name(i).to_string(), element(g, &two_p_map(g, &pm, &y)?));
            }
            json!({
                "verdict": "restricted",
                "p_map": images,
                "two_p_map": odd,
                "unique": pm.unique,
                "sr1_verified": verify_sr1(g, &pm),
            })
        }
        PMapOutcome::Obstructed(w) => {
            let certificate: Vec<Value> = w
                .multipliers
                .iter()
                .map(|((r, c), y)| json!({"row": g.name(*r), "probe": g.name(*c), "multiplier": scalar(f, y)}))
                .collect();
            json!({
                "verdict": "not restricted",
                "obstruction": {
                    "at": g.name(w.index),
                    "probes": names(g, &w.probes),
                    "certificate": certificate,
                    "verified": w.verify(g),
                    "explanation": w.describe(g),
                },
            })
        }
    };
    Ok(finish(report(g, sha, "restricted", params, results, start), true))
}

fn hs_check<F: Field>(g: &SuperAlgebra<F>, sha: &str, torus: &[String], q: usize, start: Instant) -> Result<Output> {
    let t = lookup(g, torus)?;
    let nil: Vec<usize> = (0..g.dim()).filter(|i| !t.contains(i)).collect();
    let hs = hochschild_serre_check(g, &t, &nil, q).map_err(classify)?;
    let results = json!({
        "degree": q,
        "lhs": hs.lhs,
        "rhs": hs.rhs,
        "invariant_dims": hs.invariant_dims,
        "equal": hs.lhs == hs.rhs,
    });
    let params = json!({"torus": torus, "q": q});
    Ok(finish(report(g, sha, "hs-check", params, results, start), hs.lhs == hs.rhs))
}

fn reproduce(primes: &[u64], max_n: usize, long: bool) -> Result<Output> {
    for &p in primes {
        if p < 3 || !supercohom_core::field::is_prime(p) {
            return Err(CliError::Usage(format!("{p} is not an odd prime")));
        }
    }
    if max_n < 3 {
        return Err(CliError::Usage("--max-n must be at least 3".into()));
    }
    let results = run_all(&ReproduceOptions { primes: primes.to_vec(), max_n, long });
    let mut text = String::new();
    for r in &results {
        text.push_str(&r.line());
        text.push('\n');
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id.as_str()).collect();
    if failed.is_empty() {
        text.push_str(&format!("all {} checks passed\n", results.len()));
    } else {
        text.push_str(&format!("FAILED: {}\n", failed.join(", ")));
    }
    Ok(Output { text, success: failed.is_empty() })
}
