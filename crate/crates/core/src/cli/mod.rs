//! Command-line front end: `isss <subcommand> --config system.json ...`.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input or any
//! other error.

pub mod config;
pub mod output;

use crate::boxcount::fit_dimension;
use crate::codespace::stopping_set;
use crate::construct::{
    attractor_cloud, continuity_report, covering_check, isss_cloud, orbit_cloud, sss_cloud, verify_closure, verify_inclusion, SystemSpec,
};
use crate::dimension::{dim_limit, isss_dim_report, spectral_dim, tau};
use crate::error::Result;
use crate::geometry::PointCloud;
use crate::product::{
    attractor_product_gap, chaos_game, check_iosc, check_issc, check_super_self_similar, moments, product_measure_check, product_system,
    IoscVariant, ProductSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{parse_config, parse_system, Config};
use output::{num, render_pgm, write_cloud, write_csv, write_report};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "isss", version, about = "Inhomogeneous sub-self-similar sets: construction, dimensions, sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moran roots s_k, the transfer-matrix dimension and the ISSS dimension report.
    Dim(DimArgs),
    /// Box-count slope of a constructed cloud.
    Boxdim(BoxdimArgs),
    /// Write a cloud as CSV, optionally rendered to PGM.
    Construct(ConstructArgs),
    /// Shift closure, ISSS inclusion, orbit closure and covering checks.
    Verify(VerifyArgs),
    /// Words of the stopping set S(delta).
    Stopping(StoppingArgs),
    /// Chaos-game samples of the inhomogeneous invariant measure.
    Chaos(ChaosArgs),
    /// Product of two systems: combined config, identities and measure test.
    Product(ProductArgs),
    /// Moran roots of the level systems next to the ISSS dimensions.
    Continuity(ContinuityArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// System description (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DimArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10)]
    kmax: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetKind {
    Attractor,
    Sss,
    Orbit,
    Isss,
}

#[derive(Args, Debug)]
struct BoxdimArgs {
    #[command(flatten)]
    common: Common,
    /// Cloud resolution; a quarter of the finest scale by default.
    #[arg(long)]
    resolution: Option<f64>,
    /// Coarsest scale; a quarter of the ambient diameter by default.
    #[arg(long)]
    delta: Option<f64>,
    /// Number of dyadic scales below `--delta`.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = SetKind::Isss)]
    set: SetKind,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1e-3)]
    resolution: f64,
    #[arg(long, value_enum, default_value_t = SetKind::Isss)]
    set: SetKind,
    /// Also render the cloud over the ambient box to this PGM file.
    #[arg(long)]
    render: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    width: usize,
    #[arg(long, default_value_t = 512)]
    height: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1e-3)]
    resolution: f64,
}

#[derive(Args, Debug)]
struct StoppingArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    delta: f64,
}

#[derive(Args, Debug)]
struct ChaosArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1000)]
    burn: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Highest total order of the reported moments.
    #[arg(long, default_value_t = 2)]
    moments: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    Issc,
    Iosc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    /// The third clause as literally stated.
    #[value(name = "paper")]
    AsStated,
    Conventional,
}

#[derive(Args, Debug)]
struct ProductArgs {
    /// Left factor, or a product config when `--config2` is absent.
    #[arg(long)]
    config: PathBuf,
    /// Right factor.
    #[arg(long)]
    config2: Option<PathBuf>,
    /// Where to write the combined product config; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    check: Option<CheckKind>,
    #[arg(long, value_enum, default_value_t = VariantArg::Conventional)]
    iosc_variant: VariantArg,
    #[arg(long, default_value_t = 1e-2)]
    resolution: f64,
    /// Samples per sampler for the product-measure test; 0 skips it.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    moments: u32,
}

#[derive(Args, Debug)]
struct ContinuityArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10)]
    kmax: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

/// Whether every check of a command held.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Dim(a) => dim(a),
        Command::Boxdim(a) => boxdim(a),
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Stopping(a) => stopping(a),
        Command::Chaos(a) => chaos(a),
        Command::Product(a) => product(a),
        Command::Continuity(a) => continuity(a),
    }
}

/// A system config, or the combined system of a product config.
fn load_system(path: &Path) -> Result<SystemSpec> {
    Ok(match parse_config(path)? {
        Config::System(s) => s,
        Config::Product(p) => p.combined,
    })
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn dim(a: DimArgs) -> Result<Outcome> {
    let spec = load_system(&a.common.config)?;
    let r = spec.ratios();
    let seq = dim_limit(&spec.codespace, &r, a.kmax, a.tol)?;
    let s = spectral_dim(&spec.codespace, &r, a.tol)?;
    let taus = tau(&spec.codespace, &r, s, a.kmax)?;
    let mut rows: Vec<Vec<String>> = seq.s_values.iter().zip(&taus).map(|(&(k, sk), &(_, t))| vec![k.to_string(), num(sk), num(t)]).collect();
    rows.push(vec!["limit".into(), num(s), num(taus[a.kmax - 1].1)]);
    write_csv(a.common.out.as_deref(), &["k", "s_k", "tau_k"], rows)?;

    let lower_e = if spec.osc_asserted { s } else { 0.0 };
    let rep = isss_dim_report(s, &spec.condensation, lower_e, s);
    let mut report = vec![
        kv("s", num(s)),
        kv("s_kmax", num(seq.s_estimate)),
        kv("s_k_converged", seq.converged),
        kv("irreducible", spec.codespace.is_irreducible()),
        kv("hausdorff_isss", num(rep.hausdorff_isss)),
        kv("box_lower_bound", num(rep.box_lower_bound)),
        kv("box_upper_bound", num(rep.box_upper_bound)),
        kv("box_exact", rep.box_exact.map_or("unknown".into(), num)),
        kv("osc_asserted", spec.osc_asserted),
    ];
    if !spec.osc_asserted {
        report.push(kv("note", "without the open set condition s is an upper bound for the dimensions of E"));
    }
    if !spec.codespace.is_irreducible() {
        report.push(kv("warning", "reducible subshift; the dominant component determines s"));
    }
    write_report(a.common.out.as_deref(), &report)?;
    Ok(Outcome::Pass)
}

fn build(spec: &SystemSpec, kind: SetKind, resolution: f64) -> Result<PointCloud> {
    match kind {
        SetKind::Attractor => attractor_cloud(spec, resolution),
        SetKind::Sss => sss_cloud(spec, resolution),
        SetKind::Orbit => orbit_cloud(spec, resolution),
        SetKind::Isss => isss_cloud(spec, resolution),
    }
}

fn boxdim(a: BoxdimArgs) -> Result<Outcome> {
    let spec = load_system(&a.common.config)?;
    let top = a.delta.unwrap_or(spec.ambient.diam() / 4.0);
    let deltas: Vec<f64> = (0..a.depth).map(|i| top * 0.5f64.powi(i as i32)).collect();
    let finest = deltas.last().copied().unwrap_or(top);
    let cloud = build(&spec, a.set, a.resolution.unwrap_or(finest / 4.0))?;
    let scan = fit_dimension(&cloud, &spec.ambient, &deltas)?;
    write_csv(a.common.out.as_deref(), &["delta", "count"], scan.rows.iter().map(|&(d, n)| vec![num(d), n.to_string()]))?;
    let s = spectral_dim(&spec.codespace, &spec.ratios(), 1e-9)?;
    let rep = isss_dim_report(s, &spec.condensation, 0.0, s);
    write_report(
        a.common.out.as_deref(),
        &[
            kv("fitted_slope", num(scan.fitted_slope)),
            kv("intercept", num(scan.intercept)),
            kv("max_residual", num(scan.max_residual)),
            kv("points", cloud.len()),
            kv("resolution", num(cloud.resolution())),
            kv("theory_upper_box", num(rep.box_upper_bound)),
        ],
    )?;
    Ok(Outcome::Pass)
}

fn construct(a: ConstructArgs) -> Result<Outcome> {
    let spec = load_system(&a.common.config)?;
    let cloud = build(&spec, a.set, a.resolution)?;
    write_cloud(a.common.out.as_deref(), &cloud)?;
    let mut report = vec![kv("points", cloud.len()), kv("resolution", num(cloud.resolution()))];
    if let Some(path) = &a.render {
        let img = render_pgm(&cloud, a.width, a.height, &spec.ambient)?;
        std::fs::write(path, img.to_pgm())?;
        report.push(kv("lit_pixels", img.lit()));
    }
    write_report(a.common.out.as_deref(), &report)?;
    Ok(Outcome::Pass)
}

/// `(name, passed, worst_gap, tolerance)` rows of the verify command.
pub fn verification_rows(spec: &SystemSpec, resolution: f64) -> Result<Vec<(String, bool, f64, f64)>> {
    let mut rows = Vec::new();
    let closed = crate::codespace::validate_shift_closed(&spec.codespace).is_closed();
    rows.push(("shift_closed".to_string(), closed, 0.0, 0.0));
    if !closed {
        return Ok(rows);
    }
    let f = isss_cloud(spec, resolution)?;
    let inc = verify_inclusion(&f, spec, 2.0 * f.resolution())?;
    rows.push(("inclusion".into(), inc.passed, inc.worst_gap, inc.tolerance));
    if !spec.condensation.is_empty() {
        let e = sss_cloud(spec, resolution)?;
        let o = orbit_cloud(spec, resolution)?;
        let c = verify_closure(&e, &o, 3.0 * resolution)?;
        rows.push(("closure".into(), c.passed, c.worst_gap, c.tolerance));
        for delta in [0.3, 0.1] {
            let cov = covering_check(spec, delta, delta / 20.0)?;
            rows.push((format!("covering_{delta}"), cov.passed, cov.worst_gap, cov.tolerance));
        }
    }
    Ok(rows)
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let spec = load_system(&a.common.config)?;
    let rows = verification_rows(&spec, a.resolution)?;
    let ok = rows.iter().all(|r| r.1);
    write_csv(
        a.common.out.as_deref(),
        &["check", "passed", "worst_gap", "tolerance"],
        rows.iter().map(|(n, p, g, t)| vec![n.clone(), p.to_string(), num(*g), num(*t)]),
    )?;
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn stopping(a: StoppingArgs) -> Result<Outcome> {
    let spec = load_system(&a.common.config)?;
    let r = spec.ratios();
    let words = stopping_set(&spec.codespace, &r, a.delta)?;
    write_csv(
        a.common.out.as_deref(),
        &["word", "ratio"],
        words.iter().map(|w| vec![w.to_string(), num(crate::codespace::word_ratio(&r, w))]),
    )?;
    Ok(Outcome::Pass)
}

fn moment_report(points: &[crate::geometry::Point], order: u32) -> Vec<(String, String)> {
    moments(points, order)
        .into_iter()
        .map(|m| {
            let name = m.exponents.iter().map(u32::to_string).collect::<Vec<_>>().join("_");
            (format!("moment_{name}"), format!("{} ± {}", num(m.mean), num(m.std_error)))
        })
        .collect()
}

fn chaos(a: ChaosArgs) -> Result<Outcome> {
    let spec = load_system(&a.common.config)?;
    let sample = chaos_game(&spec, a.samples, a.burn, a.seed)?;
    let d = spec.dim();
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.push("step".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(
        a.common.out.as_deref(),
        &header,
        sample.points.iter().enumerate().map(|(i, p)| {
            let mut row: Vec<String> = p.coords().iter().map(|&x| num(x)).collect();
            row.push((i + 1).to_string());
            row
        }),
    )?;
    let mut report = vec![kv("seed", a.seed), kv("burn_in", a.burn), kv("n", a.samples)];
    report.extend(moment_report(&sample.points, a.moments));
    write_report(a.common.out.as_deref(), &report)?;
    Ok(Outcome::Pass)
}

fn load_product(a: &ProductArgs) -> Result<ProductSpec> {
    match &a.config2 {
        Some(right) => product_system(&parse_system(&a.config)?, &parse_system(right)?),
        None => match parse_config(&a.config)? {
            Config::Product(p) => Ok(p),
            Config::System(_) => Err(crate::error::IsssError::Config {
                key: "--config2".into(),
                reason: "a second system or a product config is required".into(),
            }),
        },
    }
}

fn product(a: ProductArgs) -> Result<Outcome> {
    let p = load_product(&a)?;
    let json = config::emit_product(&p)?;
    match &a.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    let res = a.resolution;
    let mut ok = true;
    let gap = attractor_product_gap(&p, res)?;
    ok &= gap <= 2.0 * res;
    let sss = check_super_self_similar(&p, res, 2.0 * res)?;
    ok &= sss.passed;
    let mut report = vec![
        kv("maps", p.combined.maps.len()),
        kv("attractor_product_gap", num(gap)),
        kv("attractor_product_ok", gap <= 2.0 * res),
        kv("super_self_similar_gap", num(sss.worst_gap)),
        kv("super_self_similar_ok", sss.passed),
    ];
    if let Some(w) = p.condensation_weight {
        report.push(kv("condensation_weight", num(w)));
    }
    match a.check {
        Some(CheckKind::Issc) => {
            let r = check_issc(&p.combined, res, 0.0)?;
            ok &= r.passed;
            report.push(kv("issc", r.passed));
            report.push(kv("issc_min_image_separation", num(r.min_image_separation)));
            report.push(kv("issc_min_condensation_separation", num(r.min_condensation_separation)));
        }
        Some(CheckKind::Iosc) => {
            let variant = match a.iosc_variant {
                VariantArg::AsStated => IoscVariant::AsStated,
                VariantArg::Conventional => IoscVariant::Conventional,
            };
            let r = check_iosc(&p.combined, &p.combined.ambient, variant)?;
            ok &= r.passed;
            report.push(kv("iosc", r.passed));
            report.push(kv("iosc_images_inside", r.images_inside));
            report.push(kv("iosc_disjoint", r.disjoint));
            report.push(kv("iosc_condensation_clause", r.condensation_clause));
        }
        None => {}
    }
    if a.samples > 0 && p.condensation_weight.is_some() {
        let cmp = product_measure_check(&p, a.samples, a.seed, a.moments)?;
        ok &= cmp.agrees_within(4.0);
        report.push(kv("measure_max_z", num(cmp.max_z)));
        report.push(kv("measure_agrees", cmp.agrees_within(4.0)));
    }
    write_report(a.out.as_deref().map(Path::new), &report)?;
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn continuity(a: ContinuityArgs) -> Result<Outcome> {
    let spec = load_system(&a.common.config)?;
    let rep = continuity_report(&spec, a.kmax, a.tol)?;
    let mut rows: Vec<Vec<String>> = rep.rows.iter().map(|&(k, s, d)| vec![k.to_string(), num(s), num(d)]).collect();
    rows.push(vec!["limit".into(), num(rep.limit.0), num(rep.limit.1)]);
    write_csv(a.common.out.as_deref(), &["k", "s_k", "dim_h"], rows)?;
    Ok(Outcome::Pass)
}
