//! Command-line front end. `main` only forwards to [`run`] and maps the
//! outcome to an exit code.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{boundary, Chain, ChainMode};
use crate::error::MorseError;
use crate::flow::FlowContext;
use crate::homology::{homology, stability_scan, HomologyReport, MorseSlice};
use crate::pairing::{
    build_matching, to_dot, validate_matching, CofaceScope, DegeneratePolicy, FaceScope, MatchingFile,
    PairingFlags, Scope,
};
use crate::simplicial::{
    degeneracy, degeneracy_witness, enumerate_stratum, face, is_degenerate, stratum_rank, Simplex, StratumKey,
    MAX_DIM,
};
use crate::syntax::parse_chain;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SCOPE: u8 = 3;
pub const EXIT_INVALID_MATCHING: u8 = 4;
pub const EXIT_SELF_CHECK: u8 = 5;

pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

#[derive(Debug, Parser)]
#[command(name = "fk-morse", version, about = "Discrete Morse theory on the free simplicial monoid F⁺K")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Largest simplex dimension in the truncation.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Largest word length in the truncation.
    #[arg(long, global = true)]
    pub max_length: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Unnormalized)]
    pub chain_mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value_t = FaceScopeArg::All)]
    pub face_scope: FaceScopeArg,
    #[arg(long, global = true, value_enum, default_value_t = CofaceScopeArg::Regular)]
    pub coface_scope: CofaceScopeArg,
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Critical)]
    pub degenerate_policy: PolicyArg,
    /// Let degenerate cofaces compete for the lex-minimal coface slot.
    #[arg(long, global = true)]
    pub degenerate_cofaces_block: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl RunConfig {
    pub fn flags(&self) -> PairingFlags {
        PairingFlags {
            face_scope: match self.face_scope {
                FaceScopeArg::All => FaceScope::All,
                FaceScopeArg::Regular => FaceScope::Regular,
            },
            coface_scope: match self.coface_scope {
                CofaceScopeArg::Regular => CofaceScope::Regular,
                CofaceScopeArg::All => CofaceScope::All,
            },
            degenerate_policy: match self.degenerate_policy {
                PolicyArg::Critical => DegeneratePolicy::Critical,
                PolicyArg::Allowed => DegeneratePolicy::Allowed,
            },
            degenerate_cofaces_block: self.degenerate_cofaces_block,
        }
    }

    pub fn mode(&self) -> ChainMode {
        match self.chain_mode {
            ModeArg::Unnormalized => ChainMode::Unnormalized,
            ModeArg::Normalized => ChainMode::Normalized,
        }
    }

    fn scope_or(&self, max_dim: usize, max_length: usize) -> Result<Scope, CliError> {
        let scope = Scope::new(self.max_dim.unwrap_or(max_dim), self.max_length.unwrap_or(max_length));
        if scope.max_dim == 0 || scope.max_dim > MAX_DIM {
            return Err(CliError::usage(format!("--max-dim must lie in 1..={MAX_DIM}")));
        }
        Ok(scope)
    }

    fn format_or(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::usage(format!("format {f:?} is not available for this command")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Unnormalized,
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaceScopeArg {
    All,
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CofaceScopeArg {
    Regular,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Critical,
    Allowed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List one stratum with degeneracy flags and ranks.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        length: usize,
    },
    /// Build the restricted steepness pairing.
    Pair,
    /// Check a matching file for regularity, injectivity and acyclicity.
    Validate { file: PathBuf },
    /// Stabilize a chain under the flow.
    Flow {
        #[arg(long)]
        chain: String,
        /// Dimension for chains that do not fix one.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Morse boundary matrix from critical d-cells to critical (d-1)-cells.
    Morse {
        #[arg(long)]
        degree: usize,
    },
    /// Homology of the truncated Morse complex.
    Homology {
        #[arg(long)]
        degree: usize,
        /// Also scan every length bound from this one up.
        #[arg(long)]
        scan_from: Option<usize>,
    },
    /// Seeded randomized checks of the core identities.
    Selfcheck {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<MorseError> for CliError {
    fn from(e: MorseError) -> Self {
        let code = match &e {
            MorseError::Parse(_) | MorseError::Domain(_) | MorseError::DimensionMismatch { .. } => EXIT_USAGE,
            MorseError::OutOfScope { .. } | MorseError::ResourceLimit { .. } => EXIT_SCOPE,
            MorseError::InvalidMatching(_) => EXIT_INVALID_MATCHING,
            MorseError::SelfCheck(_) => EXIT_SELF_CHECK,
            MorseError::IterationCap { .. } => EXIT_FAILURE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command produced: its text and the exit code to report.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError {
        code: EXIT_FAILURE,
        message: e.to_string(),
    })?;
    s.push('\n');
    Ok(s)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Enumerate { dim, length } => enumerate(cfg, *dim, *length),
        Command::Pair => pair(cfg),
        Command::Validate { file } => validate(cfg, file),
        Command::Flow { chain, dim } => flow(cfg, chain, *dim),
        Command::Morse { degree } => morse(cfg, *degree),
        Command::Homology { degree, scan_from } => homology_cmd(cfg, *degree, *scan_from),
        Command::Selfcheck { samples } => selfcheck(cfg, *samples),
    }
}

#[derive(Serialize)]
struct EnumRow {
    rank: String,
    simplex: Simplex,
    text: String,
    degenerate: bool,
}

fn enumerate(cfg: &RunConfig, dim: usize, length: usize) -> Result<Outcome, CliError> {
    if dim > MAX_DIM {
        return Err(CliError::usage(format!("dimension {dim} exceeds {MAX_DIM}")));
    }
    let key = StratumKey::new(dim, length);
    if key.size() > crate::pairing::DEFAULT_STRATUM_LIMIT {
        return Err(CliError::usage(format!("stratum {key} has {} words; refusing to list it", key.size())));
    }
    let rows: Vec<EnumRow> = enumerate_stratum(key)
        .map(|x| EnumRow {
            rank: stratum_rank(&x).to_string(),
            text: x.pretty(),
            degenerate: is_degenerate(&x),
            simplex: x,
        })
        .collect();
    let nondeg = rows.iter().filter(|r| !r.degenerate).count();
    let text = match cfg.format_or(Format::Text, &[Format::Text, Format::Json, Format::Csv])? {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut out = String::from("rank,simplex,degenerate\n");
            for r in &rows {
                out.push_str(&format!("{},{},{}\n", r.rank, r.simplex, r.degenerate));
            }
            out
        }
        _ => {
            let mut out = format!("stratum {key}: {} words, {nondeg} nondegenerate\n", rows.len());
            for r in &rows {
                let flag = if r.degenerate { "  degenerate" } else { "" };
                out.push_str(&format!("{:>6}  {}{flag}\n", r.rank, r.simplex));
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

fn pair(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let scope = cfg.scope_or(3, 3)?;
    let (matching, report) = build_matching(scope, cfg.flags())?;
    let text = match cfg.format_or(Format::Json, &[Format::Json, Format::Csv, Format::Dot])? {
        Format::Csv => report.to_csv()?,
        Format::Dot => to_dot(&matching),
        _ => json(&matching.to_file())?,
    };
    Ok(Outcome::ok(text))
}

fn validate(cfg: &RunConfig, file: &PathBuf) -> Result<Outcome, CliError> {
    let raw = std::fs::read_to_string(file).map_err(|e| CliError::usage(format!("{}: {e}", file.display())))?;
    let parsed: MatchingFile =
        serde_json::from_str(&raw).map_err(|e| CliError::usage(format!("{}: {e}", file.display())))?;
    let scope = Scope::new(
        cfg.max_dim.unwrap_or(parsed.scope.max_dim),
        cfg.max_length.unwrap_or(parsed.scope.max_length),
    );
    let pairs: Vec<_> = parsed.pairs.into_iter().map(|p| (p.sigma, p.tau)).collect();
    let verdict = validate_matching(&pairs, scope)?;
    let code = if verdict.valid { EXIT_OK } else { EXIT_INVALID_MATCHING };
    Ok(Outcome {
        text: json(&verdict)?,
        code,
    })
}

#[derive(Serialize)]
struct FlowReport<'a> {
    input: &'a Chain,
    stable: &'a Chain,
    iterations: usize,
}

fn flow(cfg: &RunConfig, text: &str, dim: Option<usize>) -> Result<Outcome, CliError> {
    let chain = parse_chain(text, dim)?;
    let scope = cfg.scope_or(chain.dim() + 1, chain.max_length().unwrap_or(0))?;
    let (matching, _) = build_matching(scope, cfg.flags())?;
    let ctx = FlowContext::new(matching, cfg.mode())?;
    let (stable, iterations) = ctx.stabilize(&chain)?;
    // fact-5 consistency on the flowed chain
    if chain.dim() > 0 && ctx.scope().max_dim > chain.dim() {
        let lhs = ctx.stable(&boundary(&chain, ctx.mode())?)?;
        let rhs = boundary(&stable, ctx.mode())?;
        if lhs != rhs {
            return Err(MorseError::SelfCheck(format!("Φ^∞∂c = {lhs} but ∂Φ^∞c = {rhs}")).into());
        }
    }
    let out = match cfg.format_or(Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&FlowReport {
            input: &chain,
            stable: &stable,
            iterations,
        })?,
        _ => format!("{}\n", stable.pretty()),
    };
    Ok(Outcome::ok(out))
}

fn morse(cfg: &RunConfig, degree: usize) -> Result<Outcome, CliError> {
    if degree == 0 {
        return Err(CliError::usage("∂̃ starts in degree 1"));
    }
    let scope = cfg.scope_or(degree + 1, 4)?;
    let (matching, _) = build_matching(scope, cfg.flags())?;
    let ctx = FlowContext::new(matching, cfg.mode())?;
    let slice = MorseSlice::build(&ctx, degree, scope.max_length)?;
    let text = match cfg.format_or(Format::Text, &[Format::Text, Format::Json, Format::Csv])? {
        Format::Json => json(&slice)?,
        Format::Csv => slice.to_csv()?,
        _ => {
            let mut out = format!(
                "degree {degree}, length ≤ {}: {} critical {degree}-cells, {} critical {}-cells\n",
                scope.max_length,
                slice.basis_hi.len(),
                slice.basis_lo.len(),
                degree - 1
            );
            for (c, row) in slice.basis_hi.iter().zip(&slice.matrix) {
                let image = Chain::from_terms(
                    degree - 1,
                    slice.basis_lo.iter().cloned().zip(row).map(|(x, k)| (k.clone(), x)),
                )?;
                out.push_str(&format!("∂̃({c}) = {}\n", image.pretty()));
            }
            let nondegenerate_zero = slice
                .basis_hi
                .iter()
                .zip(&slice.matrix)
                .filter(|(c, _)| !is_degenerate(c))
                .all(|(_, row)| row.iter().all(Zero::is_zero));
            out.push_str(&format!("nondegenerate rows zero: {nondegenerate_zero}\n"));
            out.push_str(&format!("all zero: {}\n", slice.is_zero()));
            out
        }
    };
    Ok(Outcome::ok(text))
}

fn homology_cmd(cfg: &RunConfig, degree: usize, scan_from: Option<usize>) -> Result<Outcome, CliError> {
    let scope = cfg.scope_or(degree + 2, 6)?;
    if scope.max_dim < degree + 2 {
        return Err(CliError::usage(format!("H_{degree} needs --max-dim ≥ {}", degree + 2)));
    }
    let (matching, _) = build_matching(scope, cfg.flags())?;
    let ctx = FlowContext::new(matching, cfg.mode())?;
    let text = match scan_from {
        Some(l0) => json(&stability_scan(&ctx, degree, l0..=scope.max_length)?)?,
        None => json(&HomologyReport::new(degree, scope.max_length, homology(&ctx, degree, scope.max_length)?))?,
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Default, Serialize)]
struct SelfcheckReport {
    seed: u64,
    samples: usize,
    boundary_squared: usize,
    simplicial_identities: usize,
    degeneracy_witnesses: usize,
    flow_commutes: usize,
    failures: Vec<String>,
}

fn random_simplex(rng: &mut impl Rng, max_dim: usize, max_length: usize) -> Simplex {
    let dim = rng.gen_range(1..=max_dim);
    let len = rng.gen_range(0..=max_length);
    Simplex::new(dim, (0..len).map(|_| rng.gen_range(1..=dim))).expect("letters are in range")
}

fn selfcheck(cfg: &RunConfig, samples: usize) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut r = SelfcheckReport {
        seed: cfg.seed,
        samples,
        ..Default::default()
    };
    let mode = cfg.mode();

    for _ in 0..samples {
        let x = random_simplex(&mut rng, 7, 7);
        let n = x.dim();
        if n >= 2 {
            let dd = boundary(&boundary(&Chain::unit(x.clone()), mode)?, mode)?;
            if !dd.is_zero() {
                r.failures.push(format!("∂∂({x}) = {dd}"));
            }
            r.boundary_squared += 1;
        }
        let i = rng.gen_range(0..=n);
        let j = rng.gen_range(0..=n);
        let mut ok = true;
        if n >= 2 && i < j {
            ok &= face(&face(&x, j)?, i)? == face(&face(&x, i)?, j - 1)?;
        }
        let s = degeneracy(&x, j)?;
        ok &= face(&s, j)? == x && face(&s, j + 1)? == x;
        if i <= j {
            ok &= degeneracy(&s, i)? == degeneracy(&degeneracy(&x, i)?, j + 1)?;
        }
        if !ok {
            r.failures.push(format!("simplicial identity at {x}, i={i}, j={j}"));
        }
        r.simplicial_identities += 1;
        let w = degeneracy_witness(&x);
        let witnessed = match &w {
            Some(w) => degeneracy(&w.preimage, w.j)? == x,
            None => true,
        };
        if w.is_some() != is_degenerate(&x) || !witnessed {
            r.failures.push(format!("degeneracy test disagrees with witness at {x}"));
        }
        r.degeneracy_witnesses += 1;
    }

    let scope = Scope::new(4, 4);
    let (matching, _) = build_matching(scope, cfg.flags())?;
    let ctx = FlowContext::new(matching, mode)?;
    for _ in 0..samples.min(500) {
        let dim = rng.gen_range(1..=3);
        let terms: Vec<(BigInt, Simplex)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let len = rng.gen_range(0..=4);
                let x = Simplex::new(dim, (0..len).map(|_| rng.gen_range(1..=dim))).expect("letters are in range");
                (BigInt::from(rng.gen_range(-3i32..=3)), x)
            })
            .collect();
        let c = Chain::from_terms(dim, terms)?;
        let lhs = ctx.apply_flow(&boundary(&c, mode)?)?;
        let rhs = boundary(&ctx.apply_flow(&c)?, mode)?;
        if lhs != rhs {
            r.failures.push(format!("Φ∂ ≠ ∂Φ on {c}"));
        }
        let vv = ctx.apply_v(&ctx.apply_v(&c)?);
        if let Ok(vv) = vv {
            if !vv.is_zero() {
                r.failures.push(format!("V∘V ≠ 0 on {c}"));
            }
        }
        r.flow_commutes += 1;
    }

    let code = if r.failures.is_empty() { EXIT_OK } else { EXIT_SELF_CHECK };
    Ok(Outcome { text: json(&r)?, code })
}
