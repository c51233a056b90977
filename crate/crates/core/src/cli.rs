//! The `bdc` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    det_int, det_mod_p, det_symbolic, det_symbolic_sparse, FieldElement, MultiPoly, PrimeField, TargetPolynomial,
    MERSENNE_61,
};
use crate::constructions::{explicit_hc_matrix, grenet_abp, grenet_matrix, hc_abp, hc_matrix};
use crate::enumeration::{
    count_bipartite_classes, enumerate_supports, write_enumeration, EnumerationParams, Equivalence,
};
use crate::error::{Error, Result};
use crate::gadgets::{abp_path_value_dp, binarize, constant_abp, serialize_abp};
use crate::matrix::{
    gl_sandwich, parse_matrix, parse_matrix_with_grid, permute_target_variables, serialize_matrix, substitute, substitute_mod,
    VarMatrix, VarNaming,
};
use crate::reconstruction::{prove_lower_bound_with, write_proof_report, Outcome, SearchOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Candidate count and class count reported for `6 x 6` supports.
pub const EXPECTED_CANDIDATES: usize = 263;
pub const EXPECTED_ALL_CLASSES: u128 = 251_610;

#[derive(Parser, Debug)]
#[command(name = "bdc", version, about = "Binary determinantal complexity toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a construction and check its determinant.
    Construct(ConstructArgs),
    /// Check that a matrix file has a target polynomial as determinant.
    Verify(VerifyArgs),
    /// Replace integer entries by constant gadgets.
    Binarize(BinarizeArgs),
    /// Apply `A -> g A h` or a relabeling of the target variables.
    Action(ActionArgs),
    /// List candidate support matrices up to equivalence.
    Enumerate(EnumerateArgs),
    /// Refute every candidate support and report the lower bound.
    Prove(ProveArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructKind {
    Grenet,
    Hc,
    HcExplicit,
    Constant,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub kind: ConstructKind,
    /// `m` for the polynomial constructions, `c` for constants.
    #[arg(allow_hyphen_values = true)]
    pub param: i64,
    /// Write the branching program instead of the matrix.
    #[arg(long)]
    pub abp: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub target: TargetPolynomial,
    #[arg(long, default_value_t = MERSENNE_61)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct BinarizeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ActionArgs {
    pub input: PathBuf,
    /// Left factor (integer matrix file).
    #[arg(long, requires = "h")]
    pub g: Option<PathBuf>,
    /// Right factor (integer matrix file).
    #[arg(long, requires = "g")]
    pub h: Option<PathBuf>,
    /// Transpose the input matrix first.
    #[arg(long)]
    pub transpose: bool,
    /// Row relabeling of `x_ij`, 1-based, e.g. `2,1,3`.
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<usize>>,
    /// Column relabeling of `x_ij`, 1-based.
    #[arg(long, value_delimiter = ',')]
    pub tau: Option<Vec<usize>>,
    /// Finish the relabeling with `x_ij -> x_ji`.
    #[arg(long)]
    pub transpose_vars: bool,
    /// Compare the result with this matrix file.
    #[arg(long)]
    pub expect: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Identify a matrix with its transpose as well.
    #[arg(long)]
    pub with_transpose: bool,
    /// Also count the classes of all `n x n` 0/1 matrices.
    #[arg(long)]
    pub count_all: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub expect_paper: bool,
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    #[arg(long)]
    pub target: TargetPolynomial,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = MERSENNE_61)]
    pub prime: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub expect_paper: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Messages go to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            match e {
                Error::Internal(_) => EXIT_INTERNAL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Construct(a) => cmd_construct(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Binarize(a) => cmd_binarize(&a, out),
        Command::Action(a) => cmd_action(&a, out),
        Command::Enumerate(a) => cmd_enumerate(&a, out),
        Command::Prove(a) => cmd_prove(&a, out),
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn field_for(p: u64) -> Result<PrimeField> {
    if p <= 1 << 32 {
        return Err(Error::InvalidArgument(format!("prime must exceed 2^32, got {p}")));
    }
    PrimeField::new(p)
}

/// How a determinant identity was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Exact,
    Randomized(usize),
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Exact => f.write_str("exact"),
            Method::Randomized(k) => write!(f, "randomized, {k} points"),
        }
    }
}

const RANDOM_POINTS: usize = 3;
const SPARSE_LIMIT: usize = 16;

/// Whether `det(a) = want`: symbolic for `n <= 8`, subset expansion up to
/// `n = 16`, random evaluation beyond.
fn check_det(a: &VarMatrix, want: &MultiPoly, field: &PrimeField, seed: u64) -> Result<(bool, Method)> {
    if want.nvars() != a.var_count() as usize {
        return Err(Error::Dimension(format!(
            "matrix has {} variables, polynomial has {}",
            a.var_count(),
            want.nvars()
        )));
    }
    if a.n() <= 8 {
        return Ok((det_symbolic(a)? == *want, Method::Exact));
    }
    if a.n() <= SPARSE_LIMIT {
        return Ok((det_symbolic_sparse(a)? == *want, Method::Exact));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_POINTS {
        let pt: Vec<FieldElement> = (0..a.var_count())
            .map(|_| field.elem(rng.gen_range(0..field.modulus())))
            .collect();
        if det_mod_p(field, &substitute_mod(a, field, &pt)?) != want.eval_mod(field, &pt)? {
            return Ok((false, Method::Randomized(RANDOM_POINTS)));
        }
    }
    Ok((true, Method::Randomized(RANDOM_POINTS)))
}

fn report_check(out: &mut dyn Write, ok: bool, method: Method, what: &str) -> Result<i32> {
    if ok {
        writeln!(out, "verified ({method}): det = {what}")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "FAILED ({method}): det != {what}")?;
        Ok(EXIT_FAILED)
    }
}

fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let field = PrimeField::mersenne61();
    let order = |min: i64| -> Result<usize> {
        if a.param < min {
            return Err(Error::InvalidArgument(format!("parameter must be at least {min}, got {}", a.param)));
        }
        Ok(a.param as usize)
    };
    match a.kind {
        ConstructKind::Constant => {
            let abp = constant_abp(a.param)?;
            emit(&serialize_abp(&abp), a.out.as_deref(), out)?;
            writeln!(out, "vertices: {}", abp.vertex_count())?;
            let ok = abp_path_value_dp(&abp) == MultiPoly::constant(0, a.param as i128);
            report_check(out, ok, Method::Exact, &format!("path value {}", a.param))
        }
        ConstructKind::Grenet | ConstructKind::Hc => {
            let m = order(1)?;
            let (abp, target) = if a.kind == ConstructKind::Grenet {
                (grenet_abp(m)?, TargetPolynomial::new(crate::algebra::TargetKind::Permanent, m)?)
            } else {
                (hc_abp(m)?, TargetPolynomial::new(crate::algebra::TargetKind::HamiltonianCycle, m + 1)?)
            };
            if a.abp {
                emit(&serialize_abp(&abp), a.out.as_deref(), out)?;
                writeln!(out, "vertices: {}", abp.vertex_count())?;
                return Ok(EXIT_OK);
            }
            let matrix = if a.kind == ConstructKind::Grenet { grenet_matrix(m)? } else { hc_matrix(m)? };
            emit(&serialize_matrix(&matrix), a.out.as_deref(), out)?;
            writeln!(out, "size: {}", matrix.n())?;
            let (ok, method) = check_det(&matrix, &target.to_multipoly(), &field, a.seed)?;
            report_check(out, ok, method, &target.to_string())
        }
        ConstructKind::HcExplicit => {
            let m = order(2)?;
            let matrix = explicit_hc_matrix(m)?;
            emit(&serialize_matrix(&matrix), a.out.as_deref(), out)?;
            writeln!(out, "size: {}", matrix.n())?;
            let target = TargetPolynomial::hamiltonian_cycle(m);
            let (ok, method) = check_det(&matrix, &target.to_multipoly(), &field, a.seed)?;
            report_check(out, ok, method, &target.to_string())
        }
    }
}

/// Parses a matrix file so that its variables are numbered like the
/// target's `x_ij`.
fn matrix_for_target(text: &str, t: &TargetPolynomial) -> Result<VarMatrix> {
    let m = t.order() as u32;
    let a = parse_matrix_with_grid(text, m)?;
    let arity = t.arity() as u32;
    if a.var_count() > arity {
        return Err(Error::Dimension(format!(
            "matrix uses {} variables, {t} has {arity}",
            a.var_count()
        )));
    }
    match a.naming() {
        VarNaming::Grid(_) => Ok(a),
        VarNaming::Sequential => a.with_naming(VarNaming::Grid(m), arity),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let field = field_for(a.prime)?;
    let matrix = matrix_for_target(&read(&a.file)?, &a.target)?;
    writeln!(out, "size: {}", matrix.n())?;
    let (ok, method) = check_det(&matrix, &a.target.to_multipoly(), &field, a.seed)?;
    report_check(out, ok, method, &a.target.to_string())
}

fn cmd_binarize(a: &BinarizeArgs, out: &mut dyn Write) -> Result<i32> {
    let c = parse_matrix(&read(&a.input)?)?;
    if c.n() > 8 {
        return Err(Error::SizeLimit("binarize checks inputs up to 8 x 8".into()));
    }
    let b = binarize(&c)?;
    emit(&serialize_matrix(&b), a.out.as_deref(), out)?;
    writeln!(out, "size: {} -> {}", c.n(), b.n())?;
    let want = det_symbolic(&c)?;
    let (ok, method) = check_det(&b, &want, &PrimeField::mersenne61(), a.seed)?;
    let shown = want.display_with(|k| c.var_name(k as u32));
    if ok {
        writeln!(out, "det preserved ({method}): {shown}")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "FAILED ({method}): det changed from {shown}")?;
        Ok(EXIT_FAILED)
    }
}

fn one_based_perm(v: &Option<Vec<usize>>, m: usize) -> Result<Vec<usize>> {
    match v {
        None => Ok((0..m).collect()),
        Some(p) => p
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::Permutation(format!("{p:?} is not 1-based")))
            })
            .collect(),
    }
}

fn cmd_action(a: &ActionArgs, out: &mut dyn Write) -> Result<i32> {
    let mut matrix = parse_matrix(&read(&a.input)?)?;
    let before = (matrix.n() <= 8).then(|| det_symbolic(&matrix)).transpose()?;
    if a.transpose {
        matrix = matrix.transpose();
    }
    if a.sigma.is_some() || a.tau.is_some() || a.transpose_vars {
        let m = (matrix.var_count() as f64).sqrt().round() as usize;
        let sigma = one_based_perm(&a.sigma, m)?;
        let tau = one_based_perm(&a.tau, m)?;
        matrix = permute_target_variables(&matrix, &sigma, &tau, a.transpose_vars)?;
    }
    if let (Some(g), Some(h)) = (&a.g, &a.h) {
        let g = substitute(&parse_matrix(&read(g)?)?, &[])?;
        let h = substitute(&parse_matrix(&read(h)?)?, &[])?;
        let (dg, dh) = (det_int(&g)?, det_int(&h)?);
        writeln!(out, "det(g) = {dg}, det(h) = {dh}")?;
        let prod = gl_sandwich(&g, &matrix, &h)?;
        if let Some(expect) = &a.expect {
            let want = parse_matrix(&read(expect)?)?;
            let want = want.with_naming(matrix.naming(), matrix.var_count()).unwrap_or(want);
            if prod.equals(&want) {
                writeln!(out, "product equals {}", expect.display())?;
            } else {
                writeln!(out, "product differs from {} at {:?}", expect.display(), prod.mismatches(&want))?;
                return Ok(EXIT_FAILED);
            }
        }
        matrix = prod.to_var_matrix(&matrix)?;
    } else if let Some(expect) = &a.expect {
        let want = parse_matrix(&read(expect)?)?;
        if want.to_rows() != matrix.to_rows() {
            writeln!(out, "result differs from {}", expect.display())?;
            return Ok(EXIT_FAILED);
        }
        writeln!(out, "result equals {}", expect.display())?;
    }
    emit(&serialize_matrix(&matrix), a.out.as_deref(), out)?;
    if let Some(before) = before {
        let after = det_symbolic(&matrix)?;
        if after == before {
            writeln!(out, "det unchanged: {}", before.display_with(|k| matrix.var_name(k as u32)))?;
        } else {
            writeln!(out, "det changed")?;
            if a.sigma.is_none() && a.tau.is_none() && !a.transpose_vars {
                return Ok(EXIT_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<i32> {
    let equivalence = if a.with_transpose {
        Equivalence::RowColumnTranspose
    } else {
        Equivalence::RowColumn
    };
    let params = EnumerationParams {
        equivalence,
        ..EnumerationParams::candidates(a.n)
    };
    let e = enumerate_supports(params)?;
    let mut text = Vec::new();
    write_enumeration(&e, &mut text)?;
    match &a.out {
        Some(p) => fs::write(p, &text)?,
        None => out.write_all(&text)?,
    }
    writeln!(out, "{} classes", e.classes.len())?;
    let mut ok = true;
    if a.expect_paper {
        if a.n != 6 || a.with_transpose {
            return Err(Error::InvalidArgument("--expect-paper applies to n = 6 without --with-transpose".into()));
        }
        ok &= e.classes.len() == EXPECTED_CANDIDATES;
    }
    if a.count_all {
        let all = count_bipartite_classes(a.n, equivalence)?;
        writeln!(out, "all {0}x{0} matrices: {all} classes", a.n)?;
        if a.expect_paper {
            ok &= all == EXPECTED_ALL_CLASSES;
        }
    }
    if !ok {
        writeln!(out, "FAILED: counts differ from the expected values")?;
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_prove(a: &ProveArgs, out: &mut dyn Write) -> Result<i32> {
    let field = field_for(a.prime)?;
    let opts = SearchOptions {
        seed: a.seed,
        field,
        ..SearchOptions::default()
    };
    let jobs = a.jobs.unwrap_or_else(rayon::current_num_threads);
    if jobs == 0 {
        return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let report = pool.install(|| prove_lower_bound_with(&a.target, a.n, &opts))?;
    let mut text = Vec::new();
    write_proof_report(&report, &mut text)?;
    match &a.out {
        Some(p) => fs::write(p, &text)?,
        None => out.write_all(&text)?,
    }
    for r in report.realized() {
        if let Outcome::Realized(m) = &r.outcome {
            writeln!(out, "realization on {}:\n{}", r.support.bitstring(), serialize_matrix(m))?;
        }
    }
    writeln!(
        out,
        "{} candidates, {} refuted",
        report.reports.len(),
        report.reports.iter().filter(|r| r.outcome.is_refuted()).count()
    )?;
    match report.bound() {
        Some(b) => writeln!(out, "bdc({}) >= {b}", a.target)?,
        None => writeln!(out, "no lower bound established at n = {}", a.n)?,
    }
    if a.expect_paper {
        let ok = a.n == 6 && report.reports.len() == EXPECTED_CANDIDATES && report.bound() == Some(7);
        if !ok {
            writeln!(out, "FAILED: expected all {EXPECTED_CANDIDATES} candidates refuted")?;
            return Ok(EXIT_FAILED);
        }
    }
    Ok(if report.realized().next().is_some() && a.expect_paper { EXIT_FAILED } else { EXIT_OK })
}
