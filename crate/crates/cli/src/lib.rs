//! Command-line front end: argument parsing, file formats and JSON reports.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use qgalois_core::galois::{closure, RecoveryCertificate};
use qgalois_core::rep::fixed_block_dims;
use qgalois_core::{
    character_table, conjugacy_classes, decompose_R, enumerate_subgroups, fixed_subspace, recover_subgroup,
    verify_galois, CMatrix, CVector, Error, GaloisContext, Group, GroupFile, RngSeed, Subspace, C64,
};

/// Largest module dimension for which `homs` prints tensors by default.
pub const TENSOR_DIM_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Chartable,
    Irreps,
    Subgroups,
    Homs,
    Fixed,
    Recover,
    Verify,
}

const AFTER_HELP: &str = r#"INPUT FILES
  group file     { "degree": n, "generators": [[images of 0..n-1], ...] }
                 0-based; a permutation p sends i to p[i]; products act right to left.
  subspace file  { "vectors": [[[re, im], ...], ...] }  basis vectors in M coordinates.
                 Extra keys are ignored, so the output of `fixed` is accepted as is.

OUTPUT (pretty JSON, keys sorted, complex numbers as [re, im])
  chartable  { group_order, classes: [{ size, representative }], rows: [{ degree, values }] }
  irreps     { group_order, irreps: [{ chi, degree, matrices }] }
             matrices[g] is ρ(g) as a list of rows, g in canonical element order.
  subgroups  { group_order, count, subgroups: [{ index, order, members }] }
  homs       { count, module_dim, tensors? }
             tensors: [{ triple, tensor }], tensor flat in index (i*d + j)*d + k;
             printed when module_dim <= 6 or with --tensors.
  fixed      { subgroup, members, dim, block_dims, vectors }
  recover    { closure_ok, recovered, order, partition, idempotents,
               component_dims, s_dim, fixed_match }
             when the subspace is not closed: { closure_ok: false, witness }
  verify     { group_order, subgroup_count, hom_count, seed, tol, results,
               random_trials, injectivity_ok, antitone_ok, ok }

EXIT CODES
   0  success          1  verify found a failed assertion
   2  usage error      3  I/O error            4  malformed JSON input
   5  subgroup index out of range
  10  not a permutation            11  generator degree mismatch
  12  empty degree                 13  group order over the cap
  14  dimension mismatch           15  matrix not Hermitian
  16  character split failed       17  non-integer character degree
  18  bad isotypic dimension       19  irrep split degenerate
  20  irrep certification failed   21  intertwiner count mismatch
  22  subspace not block-decomposable
  23  subspace misses the trivial block
  24  right-ideal check failed     25  partition size differs from dim S
  26  subspace not closed          27  subgroup axiom failed
  28  coset check failed           29  fixed space mismatch
"#;

#[derive(Debug, Parser)]
#[command(
    name = "qgalois",
    version,
    about = "Subgroups, fixed subspaces and closure-based subgroup recovery for finite permutation groups",
    after_help = AFTER_HELP
)]
struct Args {
    /// Operation to run.
    #[arg(value_enum)]
    command: Command,
    /// Group file.
    #[arg(long)]
    group: PathBuf,
    /// Subspace file (required by `recover`).
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Subgroup index in the `subgroups` listing (required by `fixed`).
    #[arg(long)]
    subgroup: Option<usize>,
    /// Rank and membership tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random closure trials for `verify`.
    #[arg(long, default_value_t = 25)]
    trials: usize,
    /// Write JSON here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print `homs` tensors regardless of size.
    #[arg(long)]
    tensors: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub group_path: PathBuf,
    pub subspace_path: Option<PathBuf>,
    pub subgroup: Option<usize>,
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub output_path: Option<PathBuf>,
    pub tensors: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Help and version requests also land here; clap knows how to print them.
    #[error(transparent)]
    Args(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("subgroup index {index} out of range (group has {count} subgroups)")]
    SubgroupIndex { index: usize, count: usize },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Json { .. } => 4,
            CliError::SubgroupIndex { .. } => 5,
            CliError::Core(e) => e.exit_code(),
        }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be a positive number, got {}", args.tol)));
    }
    if args.command == Command::Recover && args.subspace.is_none() {
        return Err(CliError::Usage("recover requires --subspace".into()));
    }
    if args.command == Command::Fixed && args.subgroup.is_none() {
        return Err(CliError::Usage("fixed requires --subgroup".into()));
    }
    Ok(RunConfig {
        command: args.command,
        group_path: args.group,
        subspace_path: args.subspace,
        subgroup: args.subgroup,
        tol: args.tol,
        seed: args.seed,
        trials: args.trials,
        output_path: args.output,
        tensors: args.tensors,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_group(path: &Path) -> Result<Group, CliError> {
    let file: GroupFile = serde_json::from_str(&read(path)?).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Group::from_file(&file)?)
}

#[derive(Deserialize)]
struct SubspaceFile {
    vectors: Vec<Vec<[f64; 2]>>,
}

pub fn load_vectors(path: &Path) -> Result<Vec<CVector>, CliError> {
    let file: SubspaceFile = serde_json::from_str(&read(path)?).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(file
        .vectors
        .into_iter()
        .map(|v| CVector::from_iterator(v.len(), v.into_iter().map(|[re, im]| C64::new(re, im))))
        .collect())
}

fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn vector(v: &CVector) -> Value {
    Value::Array(v.iter().map(|&z| complex(z)).collect())
}

fn matrix(m: &CMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|row| Value::Array(row.iter().map(|&z| complex(z)).collect()))
            .collect(),
    )
}

fn chartable(group: &Group, tol: f64) -> Result<Value, CliError> {
    let classes = conjugacy_classes(group);
    let table = character_table(group, &classes, tol)?;
    let class_list: Vec<Value> = table
        .class_sizes()
        .iter()
        .zip(&classes.representatives)
        .map(|(size, &rep)| json!({ "size": size, "representative": group.element(rep).images() }))
        .collect();
    let rows: Vec<Value> = table
        .rows()
        .iter()
        .zip(table.degrees())
        .map(|(row, d)| json!({ "degree": d, "values": row.iter().map(|&z| complex(z)).collect::<Vec<_>>() }))
        .collect();
    Ok(json!({ "group_order": group.order(), "classes": class_list, "rows": rows }))
}

fn irreps(ctx: &GaloisContext) -> Value {
    let list: Vec<Value> = ctx
        .module
        .irreps()
        .iter()
        .map(|rho| {
            json!({
                "chi": rho.chi_index,
                "degree": rho.dim,
                "matrices": rho.matrices.iter().map(matrix).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "group_order": ctx.group.order(), "irreps": list })
}

fn subgroups(group: &Group) -> Value {
    let list: Vec<Value> = enumerate_subgroups(group)
        .iter()
        .enumerate()
        .map(|(i, h)| json!({ "index": i, "order": h.order(), "members": h.members() }))
        .collect();
    json!({ "group_order": group.order(), "count": list.len(), "subgroups": list })
}

fn homs(ctx: &GaloisContext, force: bool) -> Value {
    let d = ctx.module.total_dim();
    let mut out = json!({ "count": ctx.homs.len(), "module_dim": d });
    if force || d <= TENSOR_DIM_LIMIT {
        let tensors: Vec<Value> = ctx
            .homs
            .maps()
            .iter()
            .zip(ctx.homs.triples())
            .map(|(m, &(a, b, c))| {
                json!({
                    "triple": [a, b, c],
                    "tensor": m.tensor().iter().map(|&z| complex(z)).collect::<Vec<_>>(),
                })
            })
            .collect();
        out["tensors"] = Value::Array(tensors);
    }
    out
}

fn fixed(ctx: &GaloisContext, index: usize) -> Result<Value, CliError> {
    let all = enumerate_subgroups(&ctx.group);
    let h = all.get(index).ok_or(CliError::SubgroupIndex {
        index,
        count: all.len(),
    })?;
    let space = fixed_subspace(&ctx.module, h)?;
    let block_dims = fixed_block_dims(&ctx.module, h)?;
    Ok(json!({
        "subgroup": index,
        "members": h.members(),
        "dim": space.dim(),
        "block_dims": block_dims,
        "vectors": space.basis_vectors().iter().map(vector).collect::<Vec<_>>(),
    }))
}

fn certificate(cert: &RecoveryCertificate) -> Value {
    json!({
        "closure_ok": true,
        "recovered": cert.subgroup.members(),
        "order": cert.subgroup.order(),
        "partition": cert.partition,
        "idempotents": cert.idempotents,
        "component_dims": cert.component_dims,
        "s_dim": cert.s_dim,
        "fixed_match": cert.fixed_match,
    })
}

/// Returns the report and, for a non-closed input, the error to exit with.
fn recover(ctx: &GaloisContext, vectors: &[CVector]) -> Result<(Value, Option<Error>), CliError> {
    let d = ctx.module.total_dim();
    if let Some(bad) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.len(),
        }
        .into());
    }
    let space = Subspace::span(d, vectors, ctx.tol)?;
    let r = decompose_R(&space, &ctx.module, ctx.tol)?;
    match recover_subgroup(&r, ctx) {
        Ok(cert) => Ok((certificate(&cert), None)),
        Err(Error::NotClosed(w)) => {
            let witness = json!({
                "map_index": w.map_index,
                "u_index": w.u_index,
                "v_index": w.v_index,
                "u": vector(&w.u),
                "v": vector(&w.v),
                "image": vector(&w.image),
                "residual": w.residual,
            });
            // Smallest closed subspace above the input, for the user's benefit.
            let closed_dim = closure(&space, &ctx.module, &ctx.homs, ctx.tol).map(|c| c.space.dim()).ok();
            let report = json!({ "closure_ok": false, "witness": witness, "closure_dim": closed_dim });
            Ok((report, Some(Error::NotClosed(w))))
        }
        Err(e) => Err(e.into()),
    }
}

fn render(value: &Value) -> String {
    // `Value` objects are BTreeMaps, so keys come out sorted.
    let mut s = serde_json::to_string_pretty(value).expect("JSON value serializes");
    s.push('\n');
    s
}

/// Runs one command, writing JSON to `out` (or the configured file).
/// Returns the process exit code.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let group = load_group(&config.group_path)?;
    let seed = RngSeed(config.seed);
    let tol = config.tol;
    let mut failure: Option<Error> = None;
    let mut code = 0;
    let value = match config.command {
        Command::Chartable => chartable(&group, tol)?,
        Command::Subgroups => subgroups(&group),
        Command::Verify => {
            let report = verify_galois(group, seed, tol, config.trials)?;
            if !report.ok {
                code = 1;
            }
            serde_json::to_value(&report).expect("report serializes")
        }
        Command::Irreps | Command::Homs | Command::Fixed | Command::Recover => {
            let ctx = GaloisContext::new(group, seed, tol)?;
            match config.command {
                Command::Irreps => irreps(&ctx),
                Command::Homs => homs(&ctx, config.tensors),
                Command::Fixed => fixed(&ctx, config.subgroup.expect("validated by parse_args"))?,
                _ => {
                    let path = config.subspace_path.as_deref().expect("validated by parse_args");
                    let (value, err) = recover(&ctx, &load_vectors(path)?)?;
                    failure = err;
                    value
                }
            }
        }
    };
    let text = render(&value);
    match &config.output_path {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?,
    }
    if let Some(e) = failure {
        log::error!("{e}");
        code = e.exit_code();
    }
    Ok(code)
}
