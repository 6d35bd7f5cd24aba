//! The `shrinklab` command set.
//!
//! Every command reads flags and/or a JSON `--config` file (flags win),
//! validates the merged [`RunConfig`] and writes CSV, JSON or SVG to `--out`
//! (atomically) or to stdout. Exit codes: 0 ok, 2 invalid configuration,
//! 3 numerical failure, 4 not certified, 5 unclassified tail.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    certify_nonminimax, js_gap_asymptote, theorem1_scan, TruncatedFunctional, ASYMPTOTIC_CHECK_FRACTION,
    DEFAULT_CERTIFY_GRID, DEFAULT_NU_GRID,
};
use crate::error::Error;
use crate::risk::{evaluate, js_gap_hansen, McConfig, RiskMethod, RiskQuery};
use crate::shrinkage::{make_factor, FactorParams, FamilyKind, ShrinkageFactor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_NOT_CERTIFIED: i32 = 4;
pub const EXIT_UNCLASSIFIED: i32 = 5;

const DEFAULT_SEED: u64 = 20240101;
const DEFAULT_REPS: usize = 100_000;
const HANSEN_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(Error),
    #[error("not certified: {0}")]
    NotCertified(String),
    #[error("unclassified: {0}")]
    Unclassified(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::NotCertified(_) => EXIT_NOT_CERTIFIED,
            CliError::Unclassified(_) => EXIT_UNCLASSIFIED,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(m) => CliError::Config(m),
            Error::Certification(m) => CliError::NotCertified(m),
            Error::Classification(m) => CliError::Unclassified(m),
            other => CliError::Numeric(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    RiskCurve,
    VerifyTheorem,
    Certify,
    JsGap,
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    Risk,
    Verify,
    JsGap,
}

#[derive(Parser, Debug)]
#[command(name = "shrinklab", version, about = "Risk, asymptotics and non-minimaxity of shrinkage estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Risk as a function of the noncentrality, one row per (factor, nu).
    RiskCurve(CommonArgs),
    /// Normalized truncated expectation for g(w) = (a - w)^b against c(a,b,p).
    VerifyTheorem(CommonArgs),
    /// Non-minimaxity certificate (JSON) for one debiased factor.
    Certify(CommonArgs),
    /// Risk gap between James-Stein and its positive part, two routes.
    JsGap(CommonArgs),
    /// SVG line chart of a CSV written by another command.
    Plot(CommonArgs),
}

/// Flags shared by all commands; each command reads the ones it needs.
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// JSON file with the same keys as the flags (snake_case).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Factor family, optionally with inline parameters: `scad(lambda=1,alpha=3.7)`.
    #[arg(long)]
    pub factor: Vec<String>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub p: Option<u32>,
    /// Comma-separated noncentralities.
    #[arg(long, value_delimiter = ',')]
    pub nu: Vec<f64>,
    /// Geometric grid `lo:ratio:n`.
    #[arg(long)]
    pub nu_geom: Option<String>,
    /// `quadrature` or `monte_carlo`.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Input CSV (plot).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<PlotKind>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<CommandKind>,
    pub factor: Option<Vec<String>>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub p: Option<u32>,
    pub nu: Option<Vec<f64>>,
    pub nu_geom: Option<String>,
    pub method: Option<String>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub kind: Option<PlotKind>,
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub factors: Vec<ShrinkageFactor>,
    pub a: Option<f64>,
    pub b: f64,
    pub p: Option<u32>,
    pub nu_grid: Option<Vec<f64>>,
    pub method: RiskMethod,
    pub seed: u64,
    pub reps: usize,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub kind: Option<PlotKind>,
}

impl RunConfig {
    fn p(&self) -> CliResult<u32> {
        self.p.ok_or_else(|| CliError::Config("--p is required".into()))
    }

    fn nu_grid_or(&self, default: &[f64]) -> Vec<f64> {
        self.nu_grid.clone().unwrap_or_else(|| default.to_vec())
    }
}

fn parse_nu_geom(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Config(format!("--nu-geom expects lo:ratio:n, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let ratio: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && ratio > 1.0 && n >= 1 && lo.is_finite() && ratio.is_finite()) {
        return Err(bad());
    }
    Ok((0..n).map(|k| lo * ratio.powi(k as i32)).collect())
}

/// Parses `name` or `name(key=value,...)`; missing keys fall back to `defaults`.
pub fn parse_factor(spec: &str, defaults: FactorParams) -> CliResult<ShrinkageFactor> {
    let spec = spec.trim();
    let (name, inline) = match spec.find('(') {
        Some(i) if spec.ends_with(')') => (&spec[..i], &spec[i + 1..spec.len() - 1]),
        Some(_) => return Err(CliError::Config(format!("malformed factor `{spec}`"))),
        None => (spec, ""),
    };
    let kind: FamilyKind = name.trim().parse()?;
    let mut params = defaults;
    for kv in inline.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("factor parameter `{kv}` is not key=value")))?;
        let num = |v: &str| -> CliResult<f64> {
            v.trim().parse().map_err(|_| CliError::Config(format!("factor parameter `{kv}` is not a number")))
        };
        match k.trim() {
            "lambda" => params.lambda = Some(num(v)?),
            "alpha" => params.alpha = Some(num(v)?),
            "a" => params.a = Some(num(v)?),
            "p" => {
                params.p = Some(v.trim().parse().map_err(|_| CliError::Config(format!("bad p in `{kv}`")))?)
            }
            other => return Err(CliError::Config(format!("unknown factor parameter `{other}`"))),
        }
    }
    Ok(make_factor(kind, params)?)
}

fn read_file_config(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
}

/// Merges flags over the optional config file and validates the result.
pub fn build_config(command: CommandKind, args: &CommonArgs) -> CliResult<RunConfig> {
    let file = match &args.config {
        Some(path) => read_file_config(path)?,
        None => FileConfig::default(),
    };
    if let Some(c) = file.command {
        if c != command {
            return Err(CliError::Config(format!("config file is for `{c:?}`, not `{command:?}`")));
        }
    }
    let factor_specs = if args.factor.is_empty() { file.factor.unwrap_or_default() } else { args.factor.clone() };
    let lambda = args.lambda.or(file.lambda);
    let alpha = args.alpha.or(file.alpha);
    let a = args.a.or(file.a);
    let b = args.b.or(file.b).unwrap_or(0.0);
    let p = args.p.or(file.p);
    let pick = |list: Option<Vec<f64>>, geom: Option<String>| -> CliResult<Option<Vec<f64>>> {
        match (list, geom) {
            (Some(_), Some(_)) => Err(CliError::Config("give either nu or nu_geom, not both".into())),
            (Some(l), None) => Ok(Some(l)),
            (None, Some(g)) => parse_nu_geom(&g).map(Some),
            (None, None) => Ok(None),
        }
    };
    let flag_list = (!args.nu.is_empty()).then(|| args.nu.clone());
    let nu_grid = match pick(flag_list, args.nu_geom.clone())? {
        Some(g) => Some(g),
        None => pick(file.nu, file.nu_geom)?,
    };
    if let Some(grid) = &nu_grid {
        if grid.is_empty() || grid.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(CliError::Config("noncentralities must be finite and >= 0".into()));
        }
    }
    let method: RiskMethod = match args.method.clone().or(file.method) {
        Some(m) => m.parse()?,
        None => RiskMethod::Quadrature,
    };
    let defaults = FactorParams { lambda, alpha, a, p };
    let factors = factor_specs
        .iter()
        .map(|s| parse_factor(s, defaults))
        .collect::<CliResult<Vec<_>>>()?;
    let reps = args.reps.or(file.reps).unwrap_or(DEFAULT_REPS);
    if method == RiskMethod::MonteCarlo && reps < crate::risk::MIN_REPLICATIONS {
        return Err(CliError::Config(format!(
            "--reps must be at least {}",
            crate::risk::MIN_REPLICATIONS
        )));
    }
    Ok(RunConfig {
        command,
        factors,
        a,
        b,
        p,
        nu_grid,
        method,
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        reps,
        out: args.out.clone().or(file.out),
        csv: args.csv.clone().or(file.csv),
        kind: args.kind.or(file.kind),
    })
}

/// Fixed-width scientific notation with 17 significant digits; parses
/// back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(header: &[&str], rows: &[Vec<String>], trailer: Option<Vec<String>>) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    if let Some(t) = trailer {
        w.write_record(&t).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// `nu,risk,stderr,method,p,factor`, one block of rows per factor.
pub fn cmd_risk_curve(cfg: &RunConfig) -> CliResult<String> {
    let p = cfg.p()?;
    if cfg.factors.is_empty() {
        return Err(CliError::Config("--factor is required".into()));
    }
    let mut grid = cfg.nu_grid_or(&[0.0, 1.0, 4.0, 9.0, 16.0, 25.0]);
    grid.sort_by(f64::total_cmp);
    let mc = (cfg.method == RiskMethod::MonteCarlo).then_some(McConfig { seed: cfg.seed, replications: cfg.reps });
    let mut rows = Vec::new();
    for factor in &cfg.factors {
        let values = grid
            .par_iter()
            .map(|&nu| evaluate(&RiskQuery { factor: factor.clone(), p, nu, method: cfg.method, mc }))
            .collect::<Result<Vec<_>, _>>()?;
        for (&nu, v) in grid.iter().zip(values) {
            rows.push(vec![
                fmt_f64(nu),
                fmt_f64(v.risk),
                fmt_f64(v.error),
                cfg.method.as_str().to_string(),
                p.to_string(),
                factor.name(),
            ]);
        }
    }
    csv_text(&["nu", "risk", "stderr", "method", "p", "factor"], &rows, None)
}

/// Marker in the first column of the summary row appended by
/// [`cmd_verify_theorem`].
pub const MONOTONE_MARKER: &str = "#rel_dev_strictly_decreasing";

/// `nu,log_G,ratio,target,rel_dev` for `g(w) = (a − w)^b`, plus a summary
/// row (comment-prefixed) stating whether `rel_dev` strictly decreases.
pub fn cmd_verify_theorem(cfg: &RunConfig) -> CliResult<String> {
    let p = cfg.p()?;
    let a = cfg.a.ok_or_else(|| CliError::Config("--a is required".into()))?;
    let f = TruncatedFunctional::power_tail(a, cfg.b)?;
    let grid = cfg.nu_grid_or(&DEFAULT_NU_GRID);
    let scan = theorem1_scan(&f, p, &grid)?;
    let rows: Vec<Vec<String>> = scan
        .rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.nu),
                fmt_f64(r.log_g.log_magnitude()),
                fmt_f64(r.ratio),
                fmt_f64(r.target),
                fmt_f64(r.rel_dev),
            ]
        })
        .collect();
    let summary = vec![
        MONOTONE_MARKER.to_string(),
        scan.rel_dev_strictly_decreasing().to_string(),
        String::new(),
        String::new(),
        String::new(),
    ];
    csv_text(&["nu", "log_G", "ratio", "target", "rel_dev"], &rows, Some(summary))
}

/// The certificate as pretty JSON.
pub fn cmd_certify(cfg: &RunConfig) -> CliResult<String> {
    let p = cfg.p()?;
    let factor = match cfg.factors.as_slice() {
        [f] => f,
        _ => return Err(CliError::Config("certify needs exactly one --factor".into())),
    };
    let grid = cfg.nu_grid_or(&DEFAULT_CERTIFY_GRID);
    let cert = certify_nonminimax(factor, p, &grid)?;
    let mut text = serde_json::to_string_pretty(&cert).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// `nu,gap_direct,gap_hansen,normalized,target`.
pub fn cmd_js_gap(cfg: &RunConfig) -> CliResult<String> {
    let p = cfg.p()?;
    let grid = cfg.nu_grid_or(&DEFAULT_NU_GRID);
    let positive: Vec<f64> = grid.iter().copied().filter(|&v| v > 0.0).collect();
    let scan = if positive.is_empty() { None } else { Some(js_gap_asymptote(p, &positive)?) };
    let target = 4.0 * crate::asymptotics::c_constant(f64::from(p) - 2.0, 0.0, p)?;
    let rows = grid
        .par_iter()
        .map(|&nu| -> CliResult<Vec<String>> {
            let direct = crate::risk::js_gap_direct(p, nu)?;
            let hansen = js_gap_hansen(p, nu, HANSEN_TOL)?;
            let normalized = match &scan {
                Some(s) if nu > 0.0 => s.rows.iter().find(|r| r.nu == nu).map_or(f64::NAN, |r| r.ratio),
                _ => f64::NAN,
            };
            Ok(vec![fmt_f64(nu), fmt_f64(direct.to_f64()), fmt_f64(hansen), fmt_f64(normalized), fmt_f64(target)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    csv_text(&["nu", "gap_direct", "gap_hansen", "normalized", "target"], &rows, None)
}

/// A parsed CSV: header plus data rows, comment rows skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn parse_csv(text: &str) -> CliResult<Table> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| CliError::Config(format!("malformed csv: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::Config(format!("malformed csv: {e}")))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok(Table { header, rows })
}

fn column(table: &Table, name: &str) -> CliResult<usize> {
    table
        .header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Config(format!("csv has no `{name}` column")))
}

fn infer_kind(table: &Table) -> CliResult<PlotKind> {
    let has = |n: &str| table.header.iter().any(|h| h == n);
    if has("risk") {
        Ok(PlotKind::Risk)
    } else if has("log_G") {
        Ok(PlotKind::Verify)
    } else if has("gap_direct") {
        Ok(PlotKind::JsGap)
    } else {
        Err(CliError::Config("cannot tell which command wrote this csv".into()))
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Self-contained SVG line chart of a CSV written by another command.
pub fn cmd_plot(csv: &str, kind: Option<PlotKind>) -> CliResult<String> {
    let table = parse_csv(csv)?;
    if table.rows.is_empty() {
        return Err(CliError::Config("csv has no data rows".into()));
    }
    let kind = match kind {
        Some(k) => k,
        None => infer_kind(&table)?,
    };
    let x_col = column(&table, "nu")?;
    let (y_name, group_col, log_x) = match kind {
        PlotKind::Risk => ("risk", Some(column(&table, "factor")?), false),
        PlotKind::Verify => ("rel_dev", None, true),
        PlotKind::JsGap => ("normalized", None, true),
    };
    let y_col = column(&table, y_name)?;
    let num = |s: &str| -> CliResult<f64> {
        s.trim().parse().map_err(|_| CliError::Config(format!("malformed number `{s}` in csv")))
    };
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in &table.rows {
        if row.len() != table.header.len() {
            return Err(CliError::Config("csv row has the wrong number of fields".into()));
        }
        let name = group_col.map_or_else(|| y_name.to_string(), |c| row[c].clone());
        let pt = (num(&row[x_col])?, num(&row[y_col])?);
        match series.iter_mut().find(|(n, _)| *n == name) {
            Some((_, pts)) => pts.push(pt),
            None => series.push((name, vec![pt])),
        }
    }
    let log_x = log_x && series.iter().all(|(_, pts)| pts.iter().all(|p| p.0 > 0.0));
    let tx = |x: f64| if log_x { x.log10() } else { x };
    let finite: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|&(x, y)| (tx(x), y)))
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if finite.is_empty() {
        return Err(CliError::Config("csv has no finite points to plot".into()));
    }
    let span = |v: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
        if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) }
    };
    let (x0, x1) = span(&mut finite.iter().map(|p| p.0));
    let (y0, y1) = span(&mut finite.iter().map(|p| p.1));
    let (w, h, ml, mr, mt, mb) = (720.0, 440.0, 80.0, 200.0, 30.0, 60.0);
    let px = |x: f64| ml + (tx(x) - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y - y0) / (y1 - y0) * (h - mt - mb);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{ml},{mt} V{} H{}" fill="none" stroke="black"/>"#,
        h - mb,
        w - mr
    );
    let x_label = if log_x { format!("{} (log10)", table.header[x_col]) } else { table.header[x_col].clone() };
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        (ml + w - mr) / 2.0,
        h - 15.0,
        xml_escape(&x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {})">{}</text>"#,
        (mt + h - mb) / 2.0,
        (mt + h - mb) / 2.0,
        xml_escape(y_name)
    );
    for (val, x, y, anchor) in [
        (x0, ml, h - mb + 18.0, "start"),
        (x1, w - mr, h - mb + 18.0, "end"),
    ] {
        let shown = if log_x { 10f64.powf(val) } else { val };
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{shown:.4e}</text>"#
        );
    }
    for (val, y) in [(y0, h - mb), (y1, mt + 4.0)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="11">{val:.4e}</text>"#,
            ml - 6.0
        );
    }
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .filter(|(x, y)| tx(*x).is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = mt + 16.0 * i as f64 + 10.0;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly}" fill="{color}" font-family="sans-serif" font-size="12">{}</text>"#,
            w - mr + 10.0,
            xml_escape(name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs one validated command and returns what it would write.
pub fn execute(cfg: &RunConfig) -> CliResult<String> {
    match cfg.command {
        CommandKind::RiskCurve => cmd_risk_curve(cfg),
        CommandKind::VerifyTheorem => cmd_verify_theorem(cfg),
        CommandKind::Certify => cmd_certify(cfg),
        CommandKind::JsGap => cmd_js_gap(cfg),
        CommandKind::Plot => {
            let path = cfg.csv.as_ref().ok_or_else(|| CliError::Config("--csv is required".into()))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            cmd_plot(&text, cfg.kind)
        }
    }
}

fn run_command(command: CommandKind, args: &CommonArgs) -> CliResult<()> {
    let cfg = build_config(command, args)?;
    let text = execute(&cfg)?;
    if command == CommandKind::Certify {
        eprintln!(
            "note: the check `normalized excess >= {ASYMPTOTIC_CHECK_FRACTION} x bound_constant` at the last grid nu is a chosen threshold"
        );
    }
    match &cfg.out {
        Some(path) => write_atomic(path, &text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Entry point for the binary: parses `args` (program name first) and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (kind, args) = match &cli.command {
        Command::RiskCurve(a) => (CommandKind::RiskCurve, a),
        Command::VerifyTheorem(a) => (CommandKind::VerifyTheorem, a),
        Command::Certify(a) => (CommandKind::Certify, a),
        Command::JsGap(a) => (CommandKind::JsGap, a),
        Command::Plot(a) => (CommandKind::Plot, a),
    };
    match run_command(kind, args) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
