//! Command-line interface. `main` parses arguments and calls [`execute`].

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Result};
use cff_core::cff::{self, Certificate, CffVerdict, Outcome};
use cff_core::designs::{self, ArrayKind, DesignArray, SepHashFamily};
use cff_core::embedding::{self, EmbeddingLevel, EmbeddingSequence, FamilyViolation, LevelParams};
use cff_core::metrics::{self, TableId};
use cff_core::{Field, IncidenceMatrix, Provenance};
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::formats::{self, FieldJson, FileKind, Manifest, ManifestLevel};
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// Tables only.
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "cff",
    version,
    about = "Cover-free families from polynomials over finite-field towers"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for verification (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Work budget for exhaustive verification, in word operations.
    #[arg(long, global = true, default_value_t = cff::DEFAULT_WORK_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build C_{q,k}, optionally restricted to its first blocks of rows.
    Gen {
        /// Field order, or the prime p when --m is given.
        #[arg(long)]
        q: u64,
        /// Extension degree over the prime p = q.
        #[arg(long)]
        m: Option<u32>,
        /// Degree bound of the polynomials.
        #[arg(long)]
        k: u32,
        /// Target d; keeps d*k + 1 blocks unless --blocks is given.
        #[arg(long)]
        d: Option<u32>,
        /// Number of row blocks to keep.
        #[arg(long)]
        blocks: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an embedding sequence over q, q^2, q^4, ...
    Embed {
        #[arg(long)]
        q: u64,
        /// Per-level `k:d` pairs; the last one repeats if --levels is larger.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        levels: Option<usize>,
        /// Fixed k and d with the base-field row blocks only.
        #[arg(long)]
        monotone: bool,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        /// Directory for the manifest and level matrices.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a matrix, sequence manifest, design or hash family.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        w: Option<usize>,
    },
    /// Identify defective items from test outcomes.
    Decode {
        matrix: PathBuf,
        /// One character per test (`001010111`) or comma separated.
        #[arg(long, required_unless_present = "selftest")]
        outcomes: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        /// Round-trip random defective sets through simulate and decode.
        #[arg(long)]
        selftest: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Print a ratio table: k2, k3, d2, d3 or transition.
    Tables { id: String },
    /// Orthogonal arrays, packing arrays and separating hash families.
    Design {
        #[command(subcommand)]
        action: DesignCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Exhaustive,
    Certificate,
    Embedding,
    Monotone,
    Nested,
    Oa,
    Pa,
    Shf,
}

#[derive(Debug, Subcommand)]
pub enum DesignCommand {
    /// Bush's OA(q^t; t, q, q).
    Bush {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Packing array to hash family, or either to an incidence matrix.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Separation parameter; defaults to the largest allowed.
        #[arg(long)]
        w: Option<usize>,
        /// Keep the first i(t-1)+1 columns of a packing array first.
        #[arg(long)]
        restrict: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a design or hash family file, chosen by its header.
    Verify { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertTarget {
    Shf,
    Cff,
}

struct Ctx<'a> {
    format: Format,
    workers: usize,
    budget: u64,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn json(&mut self, v: &Value) -> Result<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v)?)?;
        Ok(())
    }

    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", s.as_ref())?;
        Ok(())
    }

    fn no_csv(&self) -> Result<()> {
        if self.format == Format::Csv {
            bail!("csv output is only available for tables");
        }
        Ok(())
    }
}

/// Runs a parsed command. `Ok(false)` means a check ran and failed.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    let mut ctx = Ctx {
        format: cli.format,
        workers: cli.workers,
        budget: cli.budget,
        out,
    };
    if !matches!(cli.command, Command::Tables { .. }) {
        ctx.no_csv()?;
    }
    match cli.command {
        Command::Gen {
            q,
            m,
            k,
            d,
            blocks,
            out,
        } => gen(&mut ctx, q, m, k, d, blocks, out.as_deref()),
        Command::Embed {
            q,
            schedule,
            levels,
            monotone,
            k,
            d,
            out,
        } => embed(&mut ctx, q, schedule.as_deref(), levels, monotone, k, d, out.as_deref()),
        Command::Verify { path, mode, d, k, b, w } => verify(&mut ctx, &path, mode, d, k, b, w),
        Command::Decode {
            matrix,
            outcomes,
            d,
            selftest,
            seed,
            trials,
        } => {
            if selftest {
                decode_selftest(&mut ctx, &matrix, d, seed, trials)
            } else {
                decode(&mut ctx, &matrix, outcomes.as_deref().unwrap_or_default(), d)
            }
        }
        Command::Tables { id } => tables(&mut ctx, &id),
        Command::Design { action } => design(&mut ctx, action),
    }
}

fn field_from(q: u64, m: Option<u32>) -> Result<Field> {
    Ok(match m {
        Some(m) => Field::new(q, m)?,
        None => Field::of_order(q)?,
    })
}

fn gen(
    ctx: &mut Ctx,
    q: u64,
    m: Option<u32>,
    k: u32,
    d: Option<u32>,
    blocks: Option<u32>,
    out: Option<&Path>,
) -> Result<bool> {
    let field = field_from(q, m)?;
    let q = field.order();
    let full = cff::build_polynomial_cff(&field, k)?;
    let b = match (blocks, d) {
        (Some(b), _) => b,
        (None, Some(d)) => d
            .checked_mul(k)
            .and_then(|x| x.checked_add(1))
            .filter(|&b| u64::from(b) <= q)
            .ok_or_else(|| anyhow!("d = {d} needs d*k + 1 <= q = {q}"))?,
        (None, None) => q as u32,
    };
    let mut mat = cff::restrict_blocks(&full, b)?;
    if let Some(d) = d {
        if d > mat.d_claimed {
            bail!("{b} blocks give at most d = {} for k = {k}", mat.d_claimed);
        }
        mat.d_claimed = d;
    }
    match out {
        Some(path) => {
            formats::save_matrix(path, &mat, Some(&field))?;
            if ctx.format == Format::Json {
                ctx.json(&json!({"t": mat.rows(), "n": mat.cols(), "d": mat.d_claimed, "path": path}))?;
            } else {
                ctx.line(format!(
                    "wrote {}-CFF({}, {}) to {}",
                    mat.d_claimed,
                    mat.rows(),
                    mat.cols(),
                    path.display()
                ))?;
            }
        }
        None => {
            if ctx.format == Format::Json {
                let rows: Vec<String> = formats::matrix_to_text(&mat)
                    .lines()
                    .skip(1)
                    .map(str::to_owned)
                    .collect();
                ctx.json(&json!({"t": mat.rows(), "n": mat.cols(), "d": mat.d_claimed, "rows": rows}))?;
            } else {
                write!(ctx.out, "{}", formats::matrix_to_text(&mat))?;
            }
        }
    }
    Ok(true)
}

fn parse_schedule(s: &str) -> Result<Vec<(u64, u64)>> {
    s.split(',')
        .map(|part| {
            let (k, d) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| anyhow!("schedule entries look like k:d, got {part:?}"))?;
            Ok((k.trim().parse()?, d.trim().parse()?))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn embed(
    ctx: &mut Ctx,
    q: u64,
    schedule: Option<&str>,
    levels: Option<usize>,
    monotone: bool,
    k: Option<u64>,
    d: Option<u64>,
    out: Option<&Path>,
) -> Result<bool> {
    let field = Field::of_order(q)?;
    let seq = if monotone {
        let (Some(k), Some(d)) = (k, d) else {
            bail!("--monotone needs --k and --d");
        };
        embedding::build_monotone_family(&field, k, d, levels.unwrap_or(2))?
    } else {
        let sched = match (schedule, k, d) {
            (Some(s), _, _) => parse_schedule(s)?,
            (None, Some(k), Some(d)) => vec![(k, d)],
            _ => bail!("give --schedule k:d,... or --k and --d"),
        };
        let levels = levels.unwrap_or(sched.len());
        embedding::build_embedding_family(&field, &sched, levels)?
    };
    let family = if monotone { "monotone" } else { "embedding" };
    let mut manifest = Manifest {
        family: family.into(),
        base_field: FieldJson::of(&field),
        levels: Vec::new(),
    };
    for (i, level) in seq.levels.iter().enumerate() {
        let p = &level.params;
        let file = match (&level.matrix, out) {
            (Some(m), Some(dir)) => {
                let name = format!("level{i}.cff");
                formats::save_matrix(&dir.join(&name), m, seq.fields.get(i))?;
                Some(name)
            }
            _ => None,
        };
        manifest.levels.push(ManifestLevel {
            i: p.i,
            q: p.q,
            k: p.k,
            d: p.d,
            t: p.t.to_string(),
            n: p.n.to_string(),
            matrix: file,
            row_order: level.row_order(),
            col_order: level.col_order().map(<[u64]>::to_vec),
        });
    }
    if let Some(dir) = out {
        formats::save_manifest(&dir.join("manifest.json"), &manifest)?;
    }
    if ctx.format == Format::Json {
        let levels: Vec<Value> = manifest
            .levels
            .iter()
            .zip(&seq.levels)
            .map(|(l, s)| {
                json!({"i": l.i, "q": l.q, "k": l.k, "d": l.d, "t": l.t, "n": l.n,
                       "materialized": s.matrix.is_some(), "matrix": l.matrix})
            })
            .collect();
        ctx.json(&json!({"family": family, "levels": levels}))?;
    } else {
        for (l, s) in manifest.levels.iter().zip(&seq.levels) {
            let state = match (&l.matrix, &s.matrix) {
                (Some(f), _) => f.clone(),
                (None, Some(_)) => "built".into(),
                (None, None) => "parameters only".into(),
            };
            ctx.line(format!(
                "level {}: q={} k={} d={} t={} n={} ({state})",
                l.i, l.q, l.k, l.d, l.t, l.n
            ))?;
        }
        if let Some(dir) = out {
            ctx.line(format!("manifest: {}", dir.join("manifest.json").display()))?;
        }
    }
    Ok(true)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn report(ctx: &mut Ctx, ok: bool, summary: String, mut body: Value) -> Result<bool> {
    body["ok"] = json!(ok);
    if ctx.format == Format::Json {
        ctx.json(&body)?;
    } else {
        ctx.line(format!("{}: {summary}", if ok { "ok" } else { "violated" }))?;
        if !ok {
            ctx.line(serde_json::to_string(&body)?)?;
        }
    }
    Ok(ok)
}

fn claimed_d(m: &IncidenceMatrix, d: Option<usize>) -> Result<usize> {
    match d {
        Some(d) => Ok(d),
        None if m.d_claimed > 0 => Ok(m.d_claimed as usize),
        None => bail!("the matrix claims no d; pass --d"),
    }
}

fn load_sequence(path: &Path) -> Result<(Manifest, EmbeddingSequence)> {
    let manifest = formats::load_manifest(path)?;
    let mats = formats::load_manifest_matrices(path, &manifest)?;
    let mut levels = Vec::new();
    for (l, m) in manifest.levels.iter().zip(mats) {
        let params = LevelParams {
            i: l.i,
            q: l.q,
            k: l.k,
            d: l.d,
            t: l.t.parse().map_err(|_| anyhow!("bad level t {:?}", l.t))?,
            n: l.n.parse().map_err(|_| anyhow!("bad level n {:?}", l.n))?,
        };
        levels.push(EmbeddingLevel { params, matrix: m });
    }
    Ok((
        manifest,
        EmbeddingSequence {
            fields: Vec::new(),
            levels,
        },
    ))
}

fn violation_json(v: &FamilyViolation) -> Value {
    match *v {
        FamilyViolation::RowsDecrease { level } => json!({"violation": "rows_decrease", "level": level}),
        FamilyViolation::ColsDecrease { level } => json!({"violation": "cols_decrease", "level": level}),
        FamilyViolation::DDecrease { level } => json!({"violation": "d_decrease", "level": level}),
        FamilyViolation::CornerMismatch { level, row, col } => {
            json!({"violation": "corner_mismatch", "level": level, "row": row + 1, "col": col + 1})
        }
        FamilyViolation::ZNotZero { row, col } => json!({"violation": "z_not_zero", "row": row + 1, "col": col + 1}),
        FamilyViolation::ZRowNotAllowed { row } => json!({"violation": "z_row_not_allowed", "row": row + 1}),
    }
}

fn verify(
    ctx: &mut Ctx,
    path: &Path,
    mode: VerifyMode,
    d: Option<usize>,
    k: Option<u32>,
    b: Option<u32>,
    w: Option<usize>,
) -> Result<bool> {
    let (workers, budget) = (ctx.workers, ctx.budget);
    match mode {
        VerifyMode::Exhaustive => {
            let (m, _) = formats::load_matrix(path)?;
            let d = claimed_d(&m, d)?;
            let verdict = parallel::with_workers(workers, || parallel::verify_cff(&m, d, budget))?;
            match verdict {
                CffVerdict::CoverFree => report(
                    ctx,
                    true,
                    format!("{d}-CFF({}, {})", m.rows(), m.cols()),
                    json!({"mode": "exhaustive", "d": d}),
                ),
                CffVerdict::Violated(wt) => report(
                    ctx,
                    false,
                    format!("column {} is covered by {:?}", wt.target + 1, one_based(&wt.covering)),
                    json!({"mode": "exhaustive", "d": d,
                           "witness": {"target": wt.target + 1, "covering": one_based(&wt.covering)}}),
                ),
            }
        }
        VerifyMode::Certificate => {
            let (m, _) = formats::load_matrix(path)?;
            let (pk, pb) = match m.provenance {
                Provenance::Polynomial { k, blocks, .. } | Provenance::Embedding { k, blocks, .. } => {
                    (Some(k), Some(blocks))
                }
                _ => (None, None),
            };
            let k = k.or(pk).ok_or_else(|| anyhow!("pass --k (no provenance sidecar)"))?;
            let b = b
                .or(pb)
                .unwrap_or_else(|| if m.cols() > 0 { m.column_weight(0) } else { 0 });
            let cert = parallel::with_workers(workers, || parallel::verify_certificate(&m, k, b))?;
            match cert {
                Certificate::Certified { max_d, .. } => {
                    let need = d.unwrap_or(m.d_claimed as usize);
                    let ok = max_d as usize >= need;
                    report(
                        ctx,
                        ok,
                        format!("weight {b}, intersections <= {k}, certifies d = {max_d}"),
                        json!({"mode": "certificate", "k": k, "b": b, "certified_d": max_d, "required_d": need}),
                    )
                }
                Certificate::Failed(f) => report(
                    ctx,
                    false,
                    format!("columns {} and {} share {} rows", f.a + 1, f.b + 1, f.common),
                    json!({"mode": "certificate", "k": k, "b": b,
                           "pair": {"a": f.a + 1, "b": f.b + 1, "common": f.common}}),
                ),
            }
        }
        VerifyMode::Embedding | VerifyMode::Monotone | VerifyMode::Nested => {
            let (_, seq) = load_sequence(path)?;
            let name = format!("{mode:?}").to_lowercase();
            let result = match mode {
                VerifyMode::Embedding => embedding::check_embedding_family(&seq),
                _ => {
                    let mats: Vec<&IncidenceMatrix> = seq.levels.iter().filter_map(|l| l.matrix.as_ref()).collect();
                    if mats.len() < 2 {
                        bail!("need at least two materialized levels");
                    }
                    mats.windows(2).try_for_each(|p| {
                        if mode == VerifyMode::Monotone {
                            embedding::check_monotone(p[0], p[1])
                        } else {
                            embedding::check_nested(p[0], p[1])
                        }
                    })
                }
            };
            match result {
                Ok(()) => report(
                    ctx,
                    true,
                    format!("{} levels, {name} family", seq.levels.len()),
                    json!({"mode": name, "levels": seq.levels.len()}),
                ),
                Err(v) => {
                    let mut body = violation_json(&v);
                    body["mode"] = json!(name);
                    report(ctx, false, format!("{v:?}"), body)
                }
            }
        }
        VerifyMode::Oa | VerifyMode::Pa => {
            let mut a = formats::design_from_text(&formats::read_to_string(path)?)?;
            a.kind = if mode == VerifyMode::Oa {
                ArrayKind::Orthogonal
            } else {
                ArrayKind::Packing
            };
            design_report(ctx, &a)
        }
        VerifyMode::Shf => {
            let mut s = formats::shf_from_text(&formats::read_to_string(path)?)?;
            if let Some(w) = w {
                s.w = w;
            }
            shf_report(ctx, &s)
        }
    }
}

fn design_report(ctx: &mut Ctx, a: &DesignArray) -> Result<bool> {
    let kind = match a.kind {
        ArrayKind::Orthogonal => "oa",
        ArrayKind::Packing => "pa",
    };
    let workers = ctx.workers;
    match parallel::with_workers(workers, || parallel::verify_design(a)) {
        Ok(()) => report(
            ctx,
            true,
            format!("{}({}; {}, {}, {})", kind.to_uppercase(), a.rows, a.t, a.cols, a.v),
            json!({"mode": kind, "rows": a.rows, "k": a.cols, "v": a.v, "t": a.t}),
        ),
        Err(v) => {
            let fault = match v.fault {
                designs::ProjectionFault::Duplicate => "duplicate",
                designs::ProjectionFault::Missing => "missing",
            };
            report(
                ctx,
                false,
                format!("tuple {:?} is {fault} in columns {:?}", v.tuple, one_based(&v.columns)),
                json!({"mode": kind, "columns": one_based(&v.columns), "tuple": v.tuple, "fault": fault}),
            )
        }
    }
}

fn shf_report(ctx: &mut Ctx, s: &SepHashFamily) -> Result<bool> {
    let (workers, budget) = (ctx.workers, ctx.budget);
    match parallel::with_workers(workers, || parallel::verify_shf(s, budget))? {
        Ok(()) => report(
            ctx,
            true,
            format!("SHF({}; {}, {}, {{1,{}}})", s.functions, s.n, s.m, s.w),
            json!({"mode": "shf", "N": s.functions, "n": s.n, "m": s.m, "w": s.w}),
        ),
        Err(v) => report(
            ctx,
            false,
            format!(
                "column {} is not separated from {:?}",
                v.target + 1,
                one_based(&v.others)
            ),
            json!({"mode": "shf", "w": s.w, "witness": {"target": v.target + 1, "others": one_based(&v.others)}}),
        ),
    }
}

fn parse_outcomes(s: &str) -> Result<Outcome> {
    let s = s.trim();
    let bits: Vec<&str> = if s.contains(',') {
        s.split(',').map(str::trim).collect()
    } else {
        s.split("").filter(|c| !c.is_empty() && !c.trim().is_empty()).collect()
    };
    bits.iter()
        .map(|b| match *b {
            "1" => Ok(true),
            "0" => Ok(false),
            other => Err(anyhow!("outcomes must be 0 or 1, got {other:?}")),
        })
        .collect::<Result<_>>()
        .map(Outcome)
}

fn decode(ctx: &mut Ctx, path: &Path, outcomes: &str, d: Option<usize>) -> Result<bool> {
    let (m, _) = formats::load_matrix(path)?;
    let d = claimed_d(&m, d)?;
    let y = parse_outcomes(outcomes)?;
    let found = one_based(&cff::decode(&m, &y, d)?);
    if ctx.format == Format::Json {
        ctx.json(&json!({"defectives": found}))?;
    } else {
        let s: Vec<String> = found.iter().map(ToString::to_string).collect();
        ctx.line(s.join(" "))?;
    }
    Ok(true)
}

fn decode_selftest(ctx: &mut Ctx, path: &Path, d: Option<usize>, seed: u64, trials: usize) -> Result<bool> {
    let (m, _) = formats::load_matrix(path)?;
    let d = claimed_d(&m, d)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let size = rand::Rng::gen_range(&mut rng, 0..=d.min(m.cols()));
        let mut set = rand::seq::index::sample(&mut rng, m.cols(), size).into_vec();
        set.sort_unstable();
        let y = cff::simulate_outcomes(&m, &set)?;
        if cff::decode(&m, &y, d).ok().as_ref() != Some(&set) {
            failures.push(json!({"trial": trial, "defectives": one_based(&set)}));
        }
    }
    let ok = failures.is_empty();
    let passed = trials - failures.len();
    if ctx.format == Format::Json {
        ctx.json(
            &json!({"selftest": {"trials": trials, "passed": passed, "seed": seed, "failures": failures}, "ok": ok}),
        )?;
    } else {
        ctx.line(format!(
            "selftest {}: {passed}/{trials} round trips (d = {d}, seed {seed})",
            if ok { "passed" } else { "failed" }
        ))?;
    }
    Ok(ok)
}

fn tables(ctx: &mut Ctx, id: &str) -> Result<bool> {
    let id: TableId = id.parse()?;
    let table = metrics::emit_table(id);
    match ctx.format {
        Format::Csv => write!(ctx.out, "{}", table.to_csv())?,
        Format::Text => write!(ctx.out, "{}", table.to_text())?,
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json!({"i": r.index, "q": r.q.to_string(), "k": r.k, "d": r.d, "n": r.n_text,
                           "t": r.t.to_string(), "ratio": r.ratio.to_string(),
                           "log10_ratio": r.ratio.log10})
                })
                .collect();
            ctx.json(&json!({"table": id.name(), "title": id.title(), "rows": rows}))?;
        }
    }
    Ok(true)
}

fn emit_text(ctx: &mut Ctx, text: &str, out: Option<&Path>, what: &str) -> Result<()> {
    match out {
        Some(p) => {
            formats::write_string(p, text)?;
            ctx.line(format!("wrote {what} to {}", p.display()))
        }
        None => {
            write!(ctx.out, "{text}")?;
            Ok(())
        }
    }
}

fn design(ctx: &mut Ctx, action: DesignCommand) -> Result<bool> {
    match action {
        DesignCommand::Bush { q, t, out } => {
            let a = designs::bush_oa(&Field::of_order(q)?, t)?;
            emit_text(ctx, &formats::design_to_text(&a), out.as_deref(), "OA")?;
            Ok(true)
        }
        DesignCommand::Convert {
            input,
            to,
            w,
            restrict,
            out,
        } => {
            let text = formats::read_to_string(&input)?;
            let shf = match formats::sniff(&text) {
                Some(FileKind::Design) => {
                    let mut a = formats::design_from_text(&text)?;
                    if let Some(i) = restrict {
                        a = designs::pa_restrict_columns(&a, i)?;
                    }
                    let w = w.or(restrict).or_else(|| designs::max_w(&a)).unwrap_or(1);
                    designs::pa_to_shf(&a, w)?
                }
                Some(FileKind::Shf) => {
                    if restrict.is_some() {
                        bail!("--restrict applies to packing arrays");
                    }
                    let mut s = formats::shf_from_text(&text)?;
                    if let Some(w) = w {
                        s.w = w;
                    }
                    s
                }
                _ => bail!("{}: expected a DESIGN or SHF file", input.display()),
            };
            match to {
                ConvertTarget::Shf => emit_text(ctx, &formats::shf_to_text(&shf), out.as_deref(), "SHF")?,
                ConvertTarget::Cff => {
                    let m = designs::shf_to_cff(&shf);
                    match out {
                        Some(p) => {
                            formats::save_matrix(&p, &m, None)?;
                            ctx.line(format!(
                                "wrote {}-CFF({}, {}) to {}",
                                m.d_claimed,
                                m.rows(),
                                m.cols(),
                                p.display()
                            ))?;
                        }
                        None => write!(ctx.out, "{}", formats::matrix_to_text(&m))?,
                    }
                }
            }
            Ok(true)
        }
        DesignCommand::Verify { path } => {
            let text = formats::read_to_string(&path)?;
            match formats::sniff(&text) {
                Some(FileKind::Design) => design_report(ctx, &formats::design_from_text(&text)?),
                Some(FileKind::Shf) => shf_report(ctx, &formats::shf_from_text(&text)?),
                _ => bail!("{}: expected a DESIGN or SHF file", path.display()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_forms() {
        let a = parse_outcomes("001010111").unwrap();
        let b = parse_outcomes("0,0,1,0,1,0,1,1,1").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0.len(), 9);
        assert!(parse_outcomes("0012").is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!(parse_schedule("1:2,2:4").unwrap(), [(1, 2), (2, 4)]);
        assert!(parse_schedule("1-2").is_err());
    }
}
