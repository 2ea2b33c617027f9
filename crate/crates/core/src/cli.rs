//! Batch front end: JSON config plus flag overrides in, CSV (and optional
//! SVG) out. Flags win over config values; unknown config keys are rejected
//! up front. Every output file starts with a metadata header sufficient to
//! reproduce the run.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::fock::{build_matrix, enumerate_sector, ReducedBasis};
use crate::model::{
    build_full_hamiltonian, build_reduced, with_corner_bias, FullModelParams, ReducedModelParams,
    ReducedVariant,
};
use crate::observe::{
    classify_profile, report_reduced, report_sector, ClassifyThresholds, ObservableReport,
};
use crate::solve::{
    ground_state, ground_state_symmetrized, reversal_parity, sweep, SolverOptions,
};
use crate::zeeman::{atom, find_resonance, pq_coefficients, process_detunings, AtomSpec};

pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config, empty grids: exit code 2.
    Usage(String),
    /// Solver or I/O failure during a run: exit code 1.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(m) => write!(f, "error: {m}"),
        }
    }
}

fn io_err(e: std::io::Error, what: &Path) -> CliError {
    CliError::Compute(format!("{}: {e}", what.display()))
}

#[derive(Parser, Debug)]
#[command(name = "spinmix", version, about = "Ground states and entanglement diagnostics of a two-species spin-1 mixture")]
pub struct Cli {
    /// Worker threads for sweep evaluation (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep the reduced four-mode model over a grid of second couplings.
    ReducedSweep(ReducedSweepArgs),
    /// Diagonalize the full six-mode model over a grid of interspecies
    /// couplings at a fixed field.
    FullSolve(FullSolveArgs),
    /// Tabulate the five exchange-channel detunings against the field.
    Zeeman(ZeemanArgs),
    /// Classify a stored amplitude profile.
    Classify(ClassifyArgs),
    /// Print the shipped atomic constants.
    Constants(ConstantsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Symmetric,
    ExtraDensity,
}

impl From<VariantArg> for ReducedVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Symmetric => ReducedVariant::Symmetric,
            VariantArg::ExtraDensity => ReducedVariant::ExtraDensity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FieldPreset {
    /// No applied field: p = q = 0.
    Zero,
    /// Sit just above the computed channel-4 crossing so the selected
    /// process is the slowest-detuned one on the stable side.
    Resonance,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub dense_cutoff: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub krylov_dim: usize,
    pub degeneracy_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolverOptions::default();
        Self {
            dense_cutoff: o.dense_cutoff,
            tol: o.tol,
            max_iter: o.max_iter,
            krylov_dim: o.krylov_dim,
            degeneracy_threshold: o.degeneracy_threshold,
        }
    }
}

impl From<SolverConfig> for SolverOptions {
    fn from(c: SolverConfig) -> Self {
        SolverOptions {
            dense_cutoff: c.dense_cutoff,
            tol: c.tol,
            max_iter: c.max_iter,
            krylov_dim: c.krylov_dim,
            degeneracy_threshold: c.degeneracy_threshold,
            ..SolverOptions::default()
        }
    }
}

// ---------------------------------------------------------------------------
// reduced-sweep
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReducedSweepConfig {
    pub n: u32,
    pub gamma1: f64,
    pub gamma2_grid: Vec<f64>,
    pub variant: VariantArg,
    /// Resolve quasi-degenerate doublets into the even-parity combination.
    pub symmetrize: bool,
    /// Symmetry-breaking diagonal bias epsilon*k; disables symmetrization.
    pub tie_break_bias: Option<f64>,
    /// Grid values whose per-point profile files should be written.
    pub profiles: Vec<f64>,
    pub thresholds: ClassifyThresholds,
    pub solver: SolverConfig,
}

impl Default for ReducedSweepConfig {
    fn default() -> Self {
        Self {
            n: 100,
            gamma1: 1.0,
            gamma2_grid: Vec::new(),
            variant: VariantArg::Symmetric,
            symmetrize: true,
            tie_break_bias: None,
            profiles: Vec::new(),
            thresholds: ClassifyThresholds::default(),
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Args, Debug)]
pub struct ReducedSweepArgs {
    /// JSON configuration file; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub gamma1: Option<f64>,
    /// Comma-separated second-coupling grid, in units of gamma1's scale.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long)]
    pub symmetrize: Option<bool>,
    /// Diagonal tie-break bias epsilon (absolute energy units).
    #[arg(long)]
    pub bias: Option<f64>,
    /// Grid values to dump profile files for (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub profiles: Option<Vec<f64>>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also render SVG line plots next to the CSV.
    #[arg(long)]
    pub svg: bool,
}

struct ReducedRow {
    gamma2: f64,
    energy: f64,
    gap: f64,
    degenerate: bool,
    report: ObservableReport,
    amplitudes: Vec<f64>,
}

fn solve_reduced_point(
    cfg: &ReducedSweepConfig,
    gamma2: f64,
) -> Result<ReducedRow, String> {
    let params = ReducedModelParams {
        gamma1: cfg.gamma1,
        gamma2,
        n: cfg.n,
        variant: cfg.variant.into(),
    };
    let tri = build_reduced(&params).map_err(|e| e.to_string())?;
    let opts: SolverOptions = cfg.solver.into();
    let result = match cfg.tie_break_bias {
        Some(eps) => {
            let biased = with_corner_bias(&tri, eps);
            ground_state(&biased, &opts).map_err(|e| e.to_string())?
        }
        None if cfg.symmetrize => {
            ground_state_symmetrized(&tri, &reversal_parity(tri.dim()), &opts)
                .map_err(|e| e.to_string())?
        }
        None => ground_state(&tri, &opts).map_err(|e| e.to_string())?,
    };
    let basis = ReducedBasis { n: cfg.n };
    let report = report_reduced(&result.amplitudes, &basis, &cfg.thresholds)
        .map_err(|e| e.to_string())?;
    Ok(ReducedRow {
        gamma2,
        energy: result.energy,
        gap: result.gap,
        degenerate: result.degenerate,
        report,
        amplitudes: result.amplitudes,
    })
}

pub const REDUCED_SWEEP_HEADER: &str = "gamma2,energy,gap,degenerate,n_mean_am1,n_mean_a0,n_mean_b0,n_mean_bp1,n_fluct_am1,n_fluct_a0,n_fluct_b0,n_fluct_bp1,entropy_raw,entropy_norm,ghz_score,classification,error";

pub fn run_reduced_sweep(cfg: &ReducedSweepConfig, out_dir: &Path, svg: bool) -> Result<(), CliError> {
    if cfg.gamma2_grid.is_empty() {
        return Err(CliError::Usage("gamma2 grid is empty".into()));
    }
    if cfg.tie_break_bias.is_some() && cfg.symmetrize {
        // the bias breaks the k <-> N-k symmetry, so the parity check would
        // reject it anyway; fail early with a clearer message
        return Err(CliError::Usage(
            "tie_break_bias and symmetrize are mutually exclusive".into(),
        ));
    }
    fs::create_dir_all(out_dir).map_err(|e| io_err(e, out_dir))?;
    let rows = sweep(&cfg.gamma2_grid, |&g| solve_reduced_point(cfg, g));

    let mut body = String::new();
    let mut series_fluct = Vec::new();
    let mut series_entropy = Vec::new();
    for (point, row) in cfg.gamma2_grid.iter().zip(&rows) {
        match row {
            Ok(r) => {
                let m = &r.report.mean_occ;
                let f = &r.report.fluct_occ;
                // live modes on the reduced line: a[-1], a[0], b[0], b[+1]
                writeln!(
                    body,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},",
                    r.gamma2,
                    r.energy,
                    r.gap,
                    r.degenerate,
                    m[2], m[1], m[4], m[3],
                    f[2], f[1], f[4], f[3],
                    r.report.entropy_raw,
                    r.report.entropy_normalized,
                    r.report.ghz_score,
                    r.report.classification,
                )
                .unwrap();
                series_fluct.push((r.gamma2, r.report.fluct_occ[1]));
                series_entropy.push((r.gamma2, r.report.entropy_normalized));
            }
            Err(msg) => {
                writeln!(body, "{point},,,,,,,,,,,,,,,,{}", msg.replace(',', ";")).unwrap();
            }
        }
    }

    let csv_path = out_dir.join("reduced_sweep.csv");
    let header = metadata_header("reduced-sweep", cfg);
    fs::write(&csv_path, format!("{header}{REDUCED_SWEEP_HEADER}\n{body}"))
        .map_err(|e| io_err(e, &csv_path))?;

    for want in &cfg.profiles {
        let found = cfg
            .gamma2_grid
            .iter()
            .position(|g| (g - want).abs() <= 1e-12 * want.abs().max(1.0));
        let Some(idx) = found else {
            return Err(CliError::Usage(format!(
                "profile point {want} is not on the gamma2 grid"
            )));
        };
        if let Ok(r) = &rows[idx] {
            let basis = ReducedBasis { n: cfg.n };
            let mut pbody = String::from("k,m_label,weight\n");
            for (k, a) in r.amplitudes.iter().enumerate() {
                writeln!(pbody, "{},{},{}", k, basis.m_label(k), a * a).unwrap();
            }
            let name = format!("profile_gamma2_{}.csv", fmt_tag(*want));
            let path = out_dir.join(name);
            fs::write(&path, format!("{header}{pbody}")).map_err(|e| io_err(e, &path))?;
        }
    }

    if svg {
        let path = out_dir.join("reduced_sweep.svg");
        let svg_doc = line_plot(
            "reduced sweep",
            "gamma2",
            &[("fluct_a0", &series_fluct), ("entropy_norm", &series_entropy)],
        );
        fs::write(&path, svg_doc).map_err(|e| io_err(e, &path))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// full-solve
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FullSolveConfig {
    /// Atoms per species (N1 = N2 = n).
    pub n: u32,
    pub m_tot: i64,
    pub c1_beta1: f64,
    pub c2_beta2: f64,
    pub c12_beta_grid: Vec<f64>,
    pub c12_gamma: f64,
    pub n12: Option<f64>,
    pub preset: FieldPreset,
    /// Explicit field in gauss; overrides the preset when set.
    pub b_gauss: Option<f64>,
    /// Margin added above the computed channel-4 crossing for the
    /// `resonance` preset, in gauss.
    pub resonance_offset_gauss: f64,
    /// Physical energy (Hz) of one model unit; Zeeman terms are divided by
    /// this before entering the Hamiltonian.
    pub unit_hz: f64,
    pub q_offset1_hz: f64,
    pub q_offset2_hz: f64,
    pub atom1: String,
    pub atom2: String,
    /// Desk-scale guard on n; override with allow_large.
    pub size_guard: u32,
    pub allow_large: bool,
    pub thresholds: ClassifyThresholds,
    pub solver: SolverConfig,
}

impl Default for FullSolveConfig {
    fn default() -> Self {
        Self {
            n: 20,
            m_tot: 0,
            c1_beta1: 1.0,
            c2_beta2: -2.0,
            c12_beta_grid: vec![0.0],
            c12_gamma: 0.0,
            n12: None,
            preset: FieldPreset::Zero,
            b_gauss: None,
            resonance_offset_gauss: 0.05,
            unit_hz: 1.0,
            q_offset1_hz: 0.0,
            q_offset2_hz: 0.0,
            atom1: "na23".into(),
            atom2: "rb87".into(),
            size_guard: 24,
            allow_large: false,
            thresholds: ClassifyThresholds::default(),
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Args, Debug)]
pub struct FullSolveArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub c1_beta1: Option<f64>,
    #[arg(long)]
    pub c2_beta2: Option<f64>,
    /// Comma-separated interspecies coupling grid.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long)]
    pub c12_gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub preset: Option<FieldPreset>,
    #[arg(long)]
    pub b_gauss: Option<f64>,
    #[arg(long)]
    pub unit_hz: Option<f64>,
    /// Lift the desk-scale guard on n.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

pub const FULL_SOLVE_HEADER: &str = "c12_beta,b_gauss,energy,gap,n_mean_ap1,n_mean_a0,n_mean_am1,n_mean_bp1,n_mean_b0,n_mean_bm1,entropy_raw,entropy_norm,error";

/// Resolve the working field of a full-solve run in gauss.
pub fn resolve_field(cfg: &FullSolveConfig) -> Result<f64, CliError> {
    if let Some(b) = cfg.b_gauss {
        if b < 0.0 {
            return Err(CliError::Usage(format!("negative field {b} G")));
        }
        return Ok(b);
    }
    match cfg.preset {
        FieldPreset::Zero => Ok(0.0),
        FieldPreset::Resonance => {
            let a1 = atom(&cfg.atom1).map_err(|e| CliError::Usage(e.to_string()))?;
            let a2 = atom(&cfg.atom2).map_err(|e| CliError::Usage(e.to_string()))?;
            let b = find_resonance(4, &a1, &a2, (0.1, 5.0))
                .map_err(|e| CliError::Compute(e.to_string()))?;
            Ok(b + cfg.resonance_offset_gauss)
        }
    }
}

pub fn run_full_solve(cfg: &FullSolveConfig, out_dir: &Path) -> Result<(), CliError> {
    if cfg.c12_beta_grid.is_empty() {
        return Err(CliError::Usage("c12_beta grid is empty".into()));
    }
    if cfg.n > cfg.size_guard && !cfg.allow_large {
        return Err(CliError::Usage(format!(
            "n = {} exceeds the desk-scale guard {}; pass --allow-large to override",
            cfg.n, cfg.size_guard
        )));
    }
    if cfg.unit_hz <= 0.0 {
        return Err(CliError::Usage("unit_hz must be positive".into()));
    }
    let b = resolve_field(cfg)?;
    let (p1, q1, p2, q2) = if b == 0.0 && cfg.q_offset1_hz == 0.0 && cfg.q_offset2_hz == 0.0 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let a1 = atom(&cfg.atom1).map_err(|e| CliError::Usage(e.to_string()))?;
        let a2 = atom(&cfg.atom2).map_err(|e| CliError::Usage(e.to_string()))?;
        let (p1, q1) = pq_coefficients(&a1, b, cfg.q_offset1_hz)
            .map_err(|e| CliError::Compute(e.to_string()))?;
        let (p2, q2) = pq_coefficients(&a2, b, cfg.q_offset2_hz)
            .map_err(|e| CliError::Compute(e.to_string()))?;
        let u = cfg.unit_hz;
        (p1 / u, q1 / u, p2 / u, q2 / u)
    };

    let basis = enumerate_sector(cfg.n, cfg.n, cfg.m_tot)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let opts: SolverOptions = cfg.solver.into();

    let rows = sweep(&cfg.c12_beta_grid, |&c12_beta| -> Result<_, String> {
        let params = FullModelParams {
            c1_beta1: cfg.c1_beta1,
            c2_beta2: cfg.c2_beta2,
            c12_beta,
            c12_gamma: cfg.c12_gamma,
            n12: cfg.n12,
            p1,
            q1,
            p2,
            q2,
            n1: cfg.n,
            n2: cfg.n,
        };
        let h = build_full_hamiltonian(&params).map_err(|e| e.to_string())?;
        let mat = build_matrix(&h, &basis).map_err(|e| e.to_string())?;
        let gs = ground_state(&mat, &opts).map_err(|e| e.to_string())?;
        let report = report_sector(&gs.amplitudes, &basis, &cfg.thresholds)
            .map_err(|e| e.to_string())?;
        Ok((gs.energy, gs.gap, report))
    });

    fs::create_dir_all(out_dir).map_err(|e| io_err(e, out_dir))?;
    let mut body = String::new();
    for (point, row) in cfg.c12_beta_grid.iter().zip(&rows) {
        match row {
            Ok((energy, gap, report)) => {
                let m = &report.mean_occ;
                writeln!(
                    body,
                    "{},{},{},{},{},{},{},{},{},{},{},{},",
                    point, b, energy, gap, m[0], m[1], m[2], m[3], m[4], m[5],
                    report.entropy_raw, report.entropy_normalized,
                )
                .unwrap();
            }
            Err(msg) => {
                writeln!(body, "{point},{b},,,,,,,,,,,{}", msg.replace(',', ";")).unwrap();
            }
        }
    }
    let csv_path = out_dir.join("full_solve.csv");
    let header = metadata_header("full-solve", cfg);
    fs::write(&csv_path, format!("{header}{FULL_SOLVE_HEADER}\n{body}"))
        .map_err(|e| io_err(e, &csv_path))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// zeeman
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZeemanConfig {
    pub atom1: String,
    pub atom2: String,
    pub b_min_gauss: f64,
    pub b_max_gauss: f64,
    pub samples: usize,
}

impl Default for ZeemanConfig {
    fn default() -> Self {
        Self {
            atom1: "na23".into(),
            atom2: "rb87".into(),
            b_min_gauss: 0.0,
            b_max_gauss: 3.0,
            samples: 601,
        }
    }
}

#[derive(Args, Debug)]
pub struct ZeemanArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub b_min: Option<f64>,
    #[arg(long)]
    pub b_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: bool,
}

pub const ZEEMAN_HEADER: &str = "b_gauss,de1_hz,de2_hz,de3_hz,de4_hz,de5_hz,abs_de1_hz,abs_de2_hz,abs_de3_hz,abs_de4_hz,abs_de5_hz";
pub const CROSSINGS_HEADER: &str = "process,b_gauss";

pub fn run_zeeman(cfg: &ZeemanConfig, out_dir: &Path, svg: bool) -> Result<(), CliError> {
    if !(cfg.b_max_gauss > cfg.b_min_gauss) || cfg.samples < 2 {
        return Err(CliError::Usage(
            "field range must have b_max > b_min and at least 2 samples".into(),
        ));
    }
    if cfg.b_min_gauss < 0.0 {
        return Err(CliError::Usage("fields must be non-negative".into()));
    }
    let a1 = atom(&cfg.atom1).map_err(|e| CliError::Usage(e.to_string()))?;
    let a2 = atom(&cfg.atom2).map_err(|e| CliError::Usage(e.to_string()))?;
    let step = (cfg.b_max_gauss - cfg.b_min_gauss) / (cfg.samples - 1) as f64;
    let grid: Vec<f64> = (0..cfg.samples).map(|i| cfg.b_min_gauss + i as f64 * step).collect();
    let detunings =
        process_detunings(&a1, &a2, &grid).map_err(|e| CliError::Compute(e.to_string()))?;

    fs::create_dir_all(out_dir).map_err(|e| io_err(e, out_dir))?;
    let header = metadata_header("zeeman", cfg);

    let mut body = String::new();
    for (i, b) in grid.iter().enumerate() {
        write!(body, "{b}").unwrap();
        for d in &detunings {
            write!(body, ",{}", d.values_hz[i]).unwrap();
        }
        for d in &detunings {
            write!(body, ",{}", d.values_hz[i].abs()).unwrap();
        }
        body.push('\n');
    }
    let path = out_dir.join("zeeman_detunings.csv");
    fs::write(&path, format!("{header}{ZEEMAN_HEADER}\n{body}")).map_err(|e| io_err(e, &path))?;

    let mut cross = String::new();
    for d in &detunings {
        for b in &d.crossings_gauss {
            writeln!(cross, "{},{}", d.id, b).unwrap();
        }
    }
    let path = out_dir.join("zeeman_crossings.csv");
    fs::write(&path, format!("{header}{CROSSINGS_HEADER}\n{cross}")).map_err(|e| io_err(e, &path))?;

    if svg {
        let series: Vec<(String, Vec<(f64, f64)>)> = detunings
            .iter()
            .map(|d| {
                (
                    format!("abs_de{}", d.id),
                    grid.iter().zip(&d.values_hz).map(|(&b, &v)| (b, v.abs())).collect(),
                )
            })
            .collect();
        let borrowed: Vec<(&str, &[(f64, f64)])> =
            series.iter().map(|(n, s)| (n.as_str(), s.as_slice())).collect();
        let path = out_dir.join("zeeman_detunings.svg");
        fs::write(&path, line_plot("channel detunings", "B (G)", &borrowed))
            .map_err(|e| io_err(e, &path))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// classify + constants
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyConfig {
    pub thresholds: ClassifyThresholds,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Profile file: CSV with a trailing weight column, or one weight per
    /// line. `#` lines are ignored.
    #[arg(long)]
    pub input: PathBuf,
}

pub fn run_classify(cfg: &ClassifyConfig, input: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(input).map_err(|e| io_err(e, input))?;
    let weights = parse_profile(&text)?;
    if weights.is_empty() {
        return Err(CliError::Usage(format!("{}: no profile rows", input.display())));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(CliError::Usage(format!(
            "profile weights sum to {total}, expected 1"
        )));
    }
    Ok(classify_profile(&weights, &cfg.thresholds).to_string())
}

fn parse_profile(text: &str) -> Result<Vec<f64>, CliError> {
    let mut weights = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let last = line.split(',').next_back().unwrap().trim();
        if last.parse::<f64>().map(|v| weights.push(v)).is_err() {
            // header row: allowed once before any data
            if weights.is_empty() {
                continue;
            }
            return Err(CliError::Usage(format!("bad profile line: {line}")));
        }
    }
    Ok(weights)
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Validate and echo this atoms file instead of the shipped table.
    #[arg(long)]
    pub atoms: Option<PathBuf>,
}

pub fn run_constants(args: &ConstantsArgs) -> Result<String, CliError> {
    let atoms: Vec<AtomSpec> = match &args.atoms {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(e, path))?;
            crate::zeeman::load_atoms(&text).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None => crate::zeeman::builtin_atoms(),
    };
    serde_json::to_string_pretty(&atoms).map_err(|e| CliError::Compute(e.to_string()))
}

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

pub fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(e, p))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// `#`-prefixed metadata block carried by every output file: artifact
/// version, command, config hash, and the full canonical config.
pub fn metadata_header<T: Serialize>(command: &str, cfg: &T) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    format!(
        "# artifact: spinmix v{}\n# command: {}\n# config_hash: {:016x}\n# config: {}\n",
        env!("CARGO_PKG_VERSION"),
        command,
        fnv1a64(canonical.as_bytes()),
        canonical
    )
}

fn fmt_tag(v: f64) -> String {
    let s = format!("{v}");
    s.replace('-', "m").replace('.', "p")
}

/// Minimal multi-series line plot; the CSV stays the contract, this is a
/// convenience rendering of it.
fn line_plot(title: &str, x_label: &str, series: &[(&str, &[(f64, f64)])]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const MARGIN: f64 = 50.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in *pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() || xmax <= xmin {
        xmax = xmin + 1.0;
    }
    if !ymin.is_finite() || ymax <= ymin {
        ymax = ymin + 1.0;
    }
    let sx = (W - 2.0 * MARGIN) / (xmax - xmin);
    let sy = (H - 2.0 * MARGIN) / (ymax - ymin);
    let px = |x: f64| MARGIN + (x - xmin) * sx;
    let py = |y: f64| H - MARGIN - (y - ymin) * sy;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>").unwrap();
    writeln!(
        out,
        "<text x=\"{}\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">{title}</text>",
        W / 2.0
    )
    .unwrap();
    // axes
    writeln!(
        out,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        r = W - MARGIN,
        t = MARGIN,
        b = H - MARGIN
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{x_label}</text>",
        W / 2.0,
        H - 12.0
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"10\">{:.4}</text>\
         <text x=\"{}\" y=\"{}\" font-size=\"10\">{:.4}</text>",
        MARGIN,
        H - MARGIN + 14.0,
        xmin,
        W - MARGIN - 20.0,
        H - MARGIN + 14.0,
        xmax
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"4\" y=\"{}\" font-size=\"10\">{:.4}</text>\
         <text x=\"4\" y=\"{}\" font-size=\"10\">{:.4}</text>",
        H - MARGIN,
        ymin,
        MARGIN + 4.0,
        ymax
    )
    .unwrap();
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            path.join(" ")
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">{name}</text>",
            W - MARGIN + 4.0,
            MARGIN + 14.0 * i as f64
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::ReducedSweep(args) => {
            let mut cfg: ReducedSweepConfig = load_config(args.config.as_deref())?;
            if let Some(v) = args.n {
                cfg.n = v;
            }
            if let Some(v) = args.gamma1 {
                cfg.gamma1 = v;
            }
            if let Some(v) = &args.grid {
                cfg.gamma2_grid = v.clone();
            }
            if let Some(v) = args.variant {
                cfg.variant = v;
            }
            if let Some(v) = args.symmetrize {
                cfg.symmetrize = v;
            }
            if let Some(v) = args.bias {
                cfg.tie_break_bias = Some(v);
                cfg.symmetrize = false;
            }
            if let Some(v) = &args.profiles {
                cfg.profiles = v.clone();
            }
            run_reduced_sweep(&cfg, &args.out, args.svg)
        }
        Command::FullSolve(args) => {
            let mut cfg: FullSolveConfig = load_config(args.config.as_deref())?;
            if let Some(v) = args.n {
                cfg.n = v;
            }
            if let Some(v) = args.c1_beta1 {
                cfg.c1_beta1 = v;
            }
            if let Some(v) = args.c2_beta2 {
                cfg.c2_beta2 = v;
            }
            if let Some(v) = &args.grid {
                cfg.c12_beta_grid = v.clone();
            }
            if let Some(v) = args.c12_gamma {
                cfg.c12_gamma = v;
            }
            if let Some(v) = args.preset {
                cfg.preset = v;
            }
            if let Some(v) = args.b_gauss {
                cfg.b_gauss = Some(v);
            }
            if let Some(v) = args.unit_hz {
                cfg.unit_hz = v;
            }
            if args.allow_large {
                cfg.allow_large = true;
            }
            run_full_solve(&cfg, &args.out)
        }
        Command::Zeeman(args) => {
            let mut cfg: ZeemanConfig = load_config(args.config.as_deref())?;
            if let Some(v) = args.b_min {
                cfg.b_min_gauss = v;
            }
            if let Some(v) = args.b_max {
                cfg.b_max_gauss = v;
            }
            if let Some(v) = args.samples {
                cfg.samples = v;
            }
            run_zeeman(&cfg, &args.out, args.svg)
        }
        Command::Classify(args) => {
            let cfg: ClassifyConfig = load_config(args.config.as_deref())?;
            let label = run_classify(&cfg, &args.input)?;
            println!("{label}");
            Ok(())
        }
        Command::Constants(args) => {
            let text = run_constants(args)?;
            println!("{text}");
            Ok(())
        }
    }
}
