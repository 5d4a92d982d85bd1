use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use serde_json::json;

use wrist_core::config::{WristConfig, PAPER_DEFAULT_NAME};
use wrist_core::design::validate_design;
use wrist_core::experiments::{gripper_table, run_trace as trace_experiment, simulate_sweep, Phase, SweepOptions};
use wrist_core::gripper::closure_estimate;
use wrist_core::hysteresis::fit_hysteresis;
use wrist_core::mechanics::cell_stiffness;

use crate::format::{g9, Table};
use crate::loopfile;
use crate::svg::{line_plot, Series};
use crate::CliError;

/// Files written by a command and the text it prints.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub stdout: String,
}

pub fn load_config(design: Option<&Path>) -> Result<WristConfig, CliError> {
    match design {
        None => Ok(WristConfig::paper_default()),
        Some(p) if p.as_os_str() == PAPER_DEFAULT_NAME => Ok(WristConfig::paper_default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            Ok(WristConfig::parse(&text)?)
        }
    }
}

fn prepare(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(CliError::io(out))
}

fn write_text(out: &mut Outcome, path: PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(&path, text).map_err(CliError::io(&path))?;
    out.files.push(path);
    Ok(())
}

fn write_table(out: &mut Outcome, path: PathBuf, table: &Table) -> Result<(), CliError> {
    table.write(&path).map_err(CliError::io(&path))?;
    out.files.push(path);
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub design: Option<PathBuf>,
    pub out: PathBuf,
    pub axis: u8,
    pub target_deg: f64,
    pub step_mm: f64,
    pub play_mm: Option<f64>,
    /// Standard deviation of simulated angle-measurement noise [deg].
    pub noise_deg: f64,
    pub seed: u64,
    pub svg: bool,
}

impl Default for SweepArgs {
    fn default() -> Self {
        Self {
            design: None,
            out: PathBuf::from("out"),
            axis: 1,
            target_deg: 90.0,
            step_mm: 0.1,
            play_mm: None,
            noise_deg: 0.0,
            seed: 0,
            svg: false,
        }
    }
}

/// Antagonistic bend sweep on one axis. Writes
/// `sweep_axis{N}.csv` (one record per actuator step),
/// `loop_axis{N}.csv` (`displacement_mm,angle_deg`, input for `fit`),
/// `commands_axis{N}.csv` (`step_index,tendon_id,command_mm`) and
/// `sweep_axis{N}_summary.json`, plus an SVG plot when asked.
pub fn run_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let config = load_config(args.design.as_deref())?;
    if !(args.noise_deg >= 0.0) {
        return Err(CliError::Config("noise must be >= 0".into()));
    }
    if let Some(p) = args.play_mm {
        if !(p >= 0.0) {
            return Err(CliError::Config("play radius must be >= 0".into()));
        }
    }
    let options = SweepOptions {
        axis: args.axis,
        target_angle: args.target_deg.to_radians(),
        increment: args.step_mm * 1e-3,
        play_radius: args.play_mm.map(|p| p * 1e-3),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let normal = Normal::new(0.0, args.noise_deg.to_radians())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let noisy = args.noise_deg > 0.0;
    let sweep = simulate_sweep(&config, &options, || if noisy { normal.sample(&mut rng) } else { 0.0 })?;

    prepare(&args.out)?;
    let mut out = Outcome::default();
    let axis = args.axis;

    let mut records = Table::new([
        "step_index",
        "tendon_id",
        "commanded_displacement_mm",
        "effective_displacement_mm",
        "bend_angle_deg",
        "axis",
        "phase",
    ]);
    let mut commands = Table::new(["step_index", "tendon_id", "command_mm"]);
    for r in &sweep.records {
        records.push(vec![
            r.step_index.to_string(),
            r.tendon_id.to_string(),
            g9(r.commanded_displacement),
            g9(r.effective_displacement),
            g9(r.bend_angle),
            r.axis.to_string(),
            r.phase.as_str().to_string(),
        ]);
        for tendon in 0..4 {
            let cmd = if tendon == r.tendon_id { r.commanded_displacement } else { 0.0 };
            commands.push(vec![r.step_index.to_string(), tendon.to_string(), g9(cmd)]);
        }
    }
    write_table(&mut out, args.out.join(format!("sweep_axis{axis}.csv")), &records)?;
    write_table(&mut out, args.out.join(format!("commands_axis{axis}.csv")), &commands)?;

    let mut loop_table = Table::new([loopfile::DISPLACEMENT, loopfile::ANGLE]);
    for (u, t) in sweep.loop_points() {
        loop_table.push(vec![g9(u), g9(t)]);
    }
    write_table(&mut out, args.out.join(format!("loop_axis{axis}.csv")), &loop_table)?;

    let summary = to_json(&json!({
        "design": args.design.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| PAPER_DEFAULT_NAME.into()),
        "seed": args.seed,
        "noise_deg": args.noise_deg,
        "records": sweep.records.len(),
        "summary": sweep.summary,
    }));
    write_text(&mut out, args.out.join(format!("sweep_axis{axis}_summary.json")), &summary)?;

    if args.svg {
        let mut series = Vec::new();
        let colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"];
        let mut current: Option<(usize, Phase, Vec<(f64, f64)>)> = None;
        let loop_pts = sweep.loop_points();
        for (r, pt) in sweep.records.iter().zip(loop_pts) {
            match &mut current {
                Some((t, p, pts)) if *t == r.tendon_id && *p == r.phase => pts.push(pt),
                _ => {
                    if let Some((t, p, pts)) = current.take() {
                        series.push(Series {
                            label: format!("tendon {t} {}", p.as_str()),
                            color: colors[series.len() % 4],
                            points: pts,
                        });
                    }
                    current = Some((r.tendon_id, r.phase, vec![pt]));
                }
            }
        }
        if let Some((t, p, pts)) = current {
            series.push(Series {
                label: format!("tendon {t} {}", p.as_str()),
                color: colors[series.len() % 4],
                points: pts,
            });
        }
        let plot = line_plot(
            &format!("Bend angle vs tendon displacement, axis {axis}"),
            "signed displacement [mm]",
            "bend angle [deg]",
            &series,
        );
        write_text(&mut out, args.out.join(format!("sweep_axis{axis}.svg")), &plot)?;
    }
    out.stdout = summary;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct TraceArgs {
    pub design: Option<PathBuf>,
    pub out: PathBuf,
    pub bend_deg: f64,
    pub steps: usize,
}

impl Default for TraceArgs {
    fn default() -> Self {
        Self {
            design: None,
            out: PathBuf::from("out"),
            bend_deg: 90.0,
            steps: 36,
        }
    }
}

/// Circular trace: `trace.csv` with the per-tendon displacements and FK
/// tip of every step, and `trace_summary.json` with the circle fit.
pub fn run_trace(args: &TraceArgs) -> Result<Outcome, CliError> {
    let config = load_config(args.design.as_deref())?;
    let report = trace_experiment(&config, args.bend_deg.to_radians(), args.steps)?;
    prepare(&args.out)?;
    let mut out = Outcome::default();

    let tendons = config.design.tendon_layout.len();
    let mut header = vec!["step_index".to_string(), "phi_deg".to_string()];
    header.extend((0..tendons).map(|i| format!("dl{i}_mm")));
    header.extend(["tip_x_mm", "tip_y_mm", "tip_z_mm"].map(String::from));
    let mut table = Table::new(header);
    let mut worst_sum = 0.0f64;
    for row in &report.rows {
        let mut cells = vec![row.index.to_string(), g9(row.plane.to_degrees())];
        cells.extend(row.displacements.iter().map(|d| g9(d * 1e3)));
        cells.extend(row.tip.iter().map(|x| g9(x * 1e3)));
        table.push(cells);
        worst_sum = worst_sum.max(row.displacements.iter().sum::<f64>().abs());
    }
    write_table(&mut out, args.out.join("trace.csv"), &table)?;

    let summary = to_json(&json!({
        "bend_deg": args.bend_deg,
        "steps": args.steps,
        "circle_radius_mm": report.fit.radius * 1e3,
        "circle_center_mm": [report.fit.center.x * 1e3, report.fit.center.y * 1e3, report.fit.center.z * 1e3],
        "circle_fit_residual_m": report.fit.residual,
        "circle_fit_residual_relative": report.relative_residual,
        "max_abs_displacement_sum_m": worst_sum,
    }));
    write_text(&mut out, args.out.join("trace_summary.json"), &summary)?;
    out.stdout = summary;
    Ok(out)
}

/// Fits the play model to a `displacement_mm,angle_deg` loop file and
/// writes `fit.json`.
pub fn run_fit(loop_csv: &Path, out_dir: &Path) -> Result<Outcome, CliError> {
    let data = loopfile::read_loop(loop_csv)?;
    let fit = fit_hysteresis(&data)?;
    prepare(out_dir)?;
    let mut out = Outcome::default();
    let report = to_json(&json!({
        "samples": data.len(),
        "play_radius_mm": fit.params.play_radius * 1e3,
        "effective_offset_mm": fit.params.effective_offset * 1e3,
        "rms_residual_rad": fit.rms_residual,
        "rms_residual_deg": fit.rms_residual.to_degrees(),
        "iterations": fit.iterations,
    }));
    write_text(&mut out, out_dir.join("fit.json"), &report)?;
    out.stdout = report;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GripperArgs {
    pub design: Option<PathBuf>,
    pub out: PathBuf,
    pub max_pull_mm: f64,
    pub steps: usize,
}

impl Default for GripperArgs {
    fn default() -> Self {
        Self {
            design: None,
            out: PathBuf::from("out"),
            max_pull_mm: 0.05,
            steps: 100,
        }
    }
}

/// Jaw gap table `gripper.csv` (`pull_mm,gap_mm`) and
/// `gripper_summary.json`.
pub fn run_gripper(args: &GripperArgs) -> Result<Outcome, CliError> {
    let config = load_config(args.design.as_deref())?;
    let table = gripper_table(&config, args.max_pull_mm * 1e-3, args.steps)?;
    prepare(&args.out)?;
    let mut out = Outcome::default();
    let mut csv = Table::new(["pull_mm", "gap_mm"]);
    for row in &table.rows {
        csv.push(vec![g9(row.tendon_pull * 1e3), g9(row.jaw_gap * 1e3)]);
    }
    write_table(&mut out, args.out.join("gripper.csv"), &csv)?;
    let summary = to_json(&json!({
        "rows": table.rows.len(),
        "initial_gap_mm": config.design.gripper.initial_gap * 1e3,
        "closure_displacement_mm": table.closure_displacement.map(|d| d * 1e3),
        "small_angle_estimate_mm": closure_estimate(&config.design.gripper) * 1e3,
    }));
    write_text(&mut out, args.out.join("gripper_summary.json"), &summary)?;
    out.stdout = summary;
    Ok(out)
}

/// Validates a design file. On success prints the material-derived
/// stiffness and, when `json_out` is set, exports the design as JSON.
pub fn run_validate(design: Option<&Path>, json_out: Option<&Path>) -> Result<Outcome, CliError> {
    let config = load_config(design)?;
    let design = validate_design(&config.design, &config.material).map_err(|e| CliError::Config(e.to_string()))?;
    let stiffness = cell_stiffness(&design, &config.material).map_err(|e| CliError::Config(e.to_string()))?;
    let mut out = Outcome::default();
    if let Some(path) = json_out {
        let text = design.to_json().expect("serializable") + "\n";
        write_text(&mut out, path.to_path_buf(), &text)?;
    }
    out.stdout = to_json(&json!({
        "valid": true,
        "stiffness": stiffness,
        "tendon_break_tension_n": config.material.tendon_break_tension(),
    }));
    Ok(out)
}
